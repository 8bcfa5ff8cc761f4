"""Invariant chains ``L_0, ..., L_n`` and the subspaces F_i, F_i', N^i, W_j of H^{1,1}.

Real H^{1,1} is identified with Q^{n^2} through :func:`hermitian_basis`.
Universal statements over Kähler classes are discharged on a fixed spanning
family of positive definite classes (see :func:`kahler_family`).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from .errors import (
    BadDegree,
    BadParameters,
    ChainStalled,
    InvalidChain,
    InvariantViolation,
    LChainNotFound,
    NotInFj,
    NotKahler,
    NotUnipotent,
)
from .growth import expansion_classes
from .hodge import (
    HermitianClass,
    HodgeClass,
    action_on_hpq,
    coords_matrix,
    cup,
    evaluate_top,
    pairing_matrix,
    hermitian_basis,
    is_kahler,
    is_nef,
    product_span_basis,
    pullback_hermitian,
    real_h11_action,
)
from .linalg import ExactMatrix, Subspace, inertia, is_unipotent, kernel_subspace
from .scalars import GaussianRational


def _real(x):
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise InvariantViolation("a real intersection number has an imaginary part")
        return x.re
    return Fraction(x)


def integral(*classes):
    """Integral of a product of classes whose degrees add up to (n, n)."""
    out = classes[0]
    for c in classes[1:]:
        out = cup(out, c)
    return _real(evaluate_top(out))


def _power(c, k):
    n = c.n
    out = HodgeClass.unit(n)
    for _ in range(k):
        out = cup(out, c)
    return out


def h11(vec, n):
    """Hermitian class with real coordinates ``vec``."""
    return HermitianClass.from_real(n, vec)


@lru_cache(maxsize=None)
def _basis_hodge(n):
    return tuple(HermitianClass(b).to_hodge() for b in hermitian_basis(n))


DEFAULT_FAMILY_SCALE = Fraction(1, 2)


@lru_cache(maxsize=None)
def kahler_family(n, scale=DEFAULT_FAMILY_SCALE):
    """``I`` together with ``I + scale * S`` for every Hermitian basis element ``S``.

    For ``0 < scale < 1`` all members are positive definite and they span real H^{1,1}.
    """
    scale = Fraction(scale)
    if not 0 < scale < 1:
        raise BadParameters("family scale must lie strictly between 0 and 1")
    ident = ExactMatrix.identity(n)
    fam = [HermitianClass(ident)]
    for b in hermitian_basis(n):
        fam.append(HermitianClass(ident + b.scale(scale)))
    return tuple(fam)


@lru_cache(maxsize=None)
def family_products(n, k, scale=DEFAULT_FAMILY_SCALE):
    """Products ``c_1 ... c_k`` over all multisets of size k from :func:`kahler_family`."""
    fam = [c.to_hodge() for c in kahler_family(n, Fraction(scale))]
    out = []
    for combo in combinations_with_replacement(range(len(fam)), k):
        p = HodgeClass.unit(n)
        for a in combo:
            p = cup(p, fam[a])
        out.append(p)
    return tuple(out)


@lru_cache(maxsize=None)
def _product_basis(n, k):
    return tuple(product_span_basis(n, k))


# -- chains ---------------------------------------------------------------------


@dataclass
class InvariantChain:
    """Classes ``L_0 = 1, L_{i+1} = L_i M_{i+1}`` invariant under the generators."""

    n: int
    L: list
    M: list  # M[0] is M_1
    certificates: list
    generators: list
    omega: HermitianClass

    def m(self, i):
        """``M_i`` for ``1 <= i <= n``."""
        return self.M[i - 1]


def _difference(g, c):
    return HermitianClass(pullback_hermitian(g, c).H - c.H)


def _iterates(g, c):
    out = [c]
    while True:
        nxt = _difference(g, out[-1])
        if nxt.is_zero():
            return out
        out.append(nxt)
        if len(out) > c.n * c.n + 1:
            raise NotUnipotent("(g^* - Id) is not nilpotent on H^{1,1}")


def _check_inputs(gens, omega):
    for k, g in enumerate(gens):
        if not is_unipotent(g.M):
            raise NotUnipotent(f"generator {k} is not unipotent on H^1")
    if not is_kahler(omega):
        raise NotKahler("omega is not a Kähler class")


def build_chain_cyclic(g, omega):
    """Chain for one automorphism: ``L_{i+1} = L_i omega_k`` with ``k`` maximal such that
    ``L_i omega_k != 0``.

    ``L_i omega_k`` is the limit of ``L_i (g^m)^* omega / C(m, k)``, hence lies in
    the closed cone generated by ``L_i`` times nef classes.
    """
    _check_inputs([g], omega)
    n = g.n
    rec = expansion_classes(g, omega)
    L = [HodgeClass.unit(n)]
    Ms, certs = [], []
    for i in range(n):
        k = next((k for k in range(rec.top_index, -1, -1) if not cup(L[i], rec.omega(k)).is_zero()), None)
        if k is None:
            raise ChainStalled(f"L_{i} omega_k vanishes for every k")
        M = rec.omega(k)
        Ms.append(M)
        L.append(cup(L[i], M))
        certs.append({"level": i + 1, "kind": "dominant-term", "steps": [[0, k]]})
    chain = InvariantChain(n, L, Ms, certs, [g], omega)
    validate_chain(chain)
    return chain


def _ray_key(c):
    vec = []
    for x in c.coords:
        if isinstance(x, GaussianRational):
            vec.extend([x.re, x.im])
        else:
            vec.extend([x, Fraction(0)])
    lead = next(abs(x) for x in vec if x)
    return tuple(x / lead for x in vec)


def build_chain_group(gens, omega, max_rounds=64):
    """Chain invariant under every generator, by cycling dominant-term extraction.

    At each level the current class ``M`` is replaced by the dominant iterate
    ``(g^* - Id)^k M`` with ``L_i (g^* - Id)^k M != 0`` for each generator in
    turn, until a full pass changes nothing.  A repeated state or too many
    rounds raises :class:`LChainNotFound`.
    """
    gens = list(gens)
    _check_inputs(gens, omega)
    n = omega.n
    L = [HodgeClass.unit(n)]
    Ms, certs = [], []
    for i in range(n):
        M = omega
        steps = []
        seen = set()
        for _ in range(max_rounds):
            changed = False
            for idx, g in enumerate(gens):
                its = _iterates(g, M)
                k = next((k for k in range(len(its) - 1, -1, -1) if not cup(L[i], its[k]).is_zero()), None)
                if k is None:
                    raise ChainStalled(f"L_{i} M vanishes")
                if k > 0:
                    M = its[k]
                    changed = True
                    steps.append([idx, k])
                    key = (_ray_key(cup(L[i], M)), idx)
                    if key in seen:
                        raise LChainNotFound(f"dominant-term iteration cycles at level {i + 1}")
                    seen.add(key)
            if not changed:
                break
        else:
            raise LChainNotFound(f"no joint invariant class at level {i + 1} within {max_rounds} rounds")
        Ms.append(M)
        L.append(cup(L[i], M))
        certs.append({"level": i + 1, "kind": "dominant-term", "steps": steps})
    chain = InvariantChain(n, L, Ms, certs, gens, omega)
    validate_chain(chain)
    return chain


def validate_chain(chain):
    """Raise :class:`InvalidChain` unless the chain satisfies its defining identities."""
    n = chain.n
    if len(chain.L) != n + 1 or len(chain.M) != n:
        raise InvalidChain("chain has the wrong length")
    if chain.L[0] != HodgeClass.unit(n):
        raise InvalidChain("L_0 is not the unit class")
    for i in range(n):
        if cup(chain.L[i], chain.M[i]) != chain.L[i + 1]:
            raise InvalidChain(f"L_{i + 1} != L_{i} M_{i + 1}")
    for i, Li in enumerate(chain.L):
        if Li.is_zero():
            raise InvalidChain(f"L_{i} vanishes")
        for k, g in enumerate(chain.generators):
            if Li.apply(action_on_hpq(g, i, i)) != Li:
                raise InvalidChain(f"L_{i} is not invariant under generator {k}")
    return True


def chain_positivity(chain):
    """``L_i omega^{n-i}`` for each level; all must be strictly positive."""
    return [integral(chain.L[i], _power(chain.omega.to_hodge(), chain.n - i)) for i in range(chain.n + 1)]


# -- filtration spaces ----------------------------------------------------------------


@dataclass
class FiltrationSpaces:
    n: int
    F: list  # F[i] for i = 0..n, Subspace of Q^{n^2}
    Fprime: list  # Fprime[i] for i = 1..n (index 0 unused), quadratic characterization
    Fprime_cert: list  # span of certified members of C_i
    N_dims: list  # dim N^i for i = 0..n
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    def dims(self):
        return {
            "F": [s.dim for s in self.F],
            "Fprime": [None] + [s.dim for s in self.Fprime[1:]],
            "N": list(self.N_dims),
        }


def _real_matrix(m):
    if not m.is_real():
        raise InvariantViolation("intersection numbers of real classes have an imaginary part")
    return m


@lru_cache(maxsize=None)
def _pairing_with_products(n, k):
    """Functionals integrating a degree (n-k, n-k) class against a basis of k-fold products."""
    return pairing_matrix(_product_basis(n, k))


def _f_space(chain, i):
    n = chain.n
    if i >= n:
        return Subspace.full(n * n)
    Y = coords_matrix([cup(chain.L[i], b) for b in _basis_hodge(n)])
    return kernel_subspace(_real_matrix(_pairing_with_products(n, n - i - 1) @ Y))


@lru_cache(maxsize=None)
def _n_dim(n, i):
    """Dimension of N^i, from the pairing of H^{i,i} with products of (1,1) classes."""
    if i == n:
        return 0
    U = _pairing_with_products(n, n - i)
    return U.cols - U.rank()


def _gram_on(L, vectors, U, n):
    """Rows ``(t, b)``, columns ``a``: ``L f_a f_b P_t`` with ``U`` the functionals of the ``P_t``."""
    fs = [h11(v, n).to_hodge() for v in vectors]
    Z = [cup(L, f) for f in fs]
    d = len(fs)
    prods = {}
    for a in range(d):
        for b in range(a, d):
            prods[a, b] = cup(Z[a], fs[b])
    cols = [prods[min(a, b), max(a, b)] for b in range(d) for a in range(d)]
    vals = _real_matrix(U @ coords_matrix(cols))
    # vals[t, b*d + a]
    rows = []
    for t in range(vals.rows):
        for b in range(d):
            rows.append([vals[t, b * d + a] for a in range(d)])
    return rows


def _fprime_quadratic(chain, F, i):
    """F_i' as the common radical on F_i of the forms ``L_{i-1} c c' P``."""
    n = chain.n
    basis = F[i].basis()
    if not basis:
        return Subspace.zero(n * n), True
    L = chain.L[i - 1]
    kahler_power = _power(chain.omega.to_hodge(), n - i - 1)
    nsd = inertia(ExactMatrix(_gram_on(L, basis, pairing_matrix([kahler_power]), n)))[0] == 0
    rows = _gram_on(L, basis, _pairing_with_products(n, n - i - 1), n)
    coeffs = kernel_subspace(ExactMatrix(rows, shape=(len(rows), len(basis)))).basis()
    vecs = [[sum(c * v[k] for c, v in zip(co, basis)) for k in range(n * n)] for co in coeffs]
    return (Subspace.span(vecs, n * n) if vecs else Subspace.zero(n * n)), nsd


def compute_spaces(chain, strict=True):
    """F_i, F_i' (two ways) and dim N^i; structural checks are recorded in ``checks``."""
    validate_chain(chain)
    n = chain.n
    F = [_f_space(chain, i) for i in range(n + 1)]
    Fp = [None]
    Fc = [None]
    checks = {}
    for i in range(1, n + 1):
        Mi = chain.m(i).real_coords()
        if i == n:
            quad = Subspace.full(n * n)
            checks[f"nsd_F{i}"] = True
        else:
            quad, nsd = _fprime_quadratic(chain, F, i)
            checks[f"nsd_F{i}"] = nsd
        cert = F[i - 1] + Subspace.span([Mi], n * n) if F[i].contains(Mi) else F[i - 1]
        Fp.append(quad)
        Fc.append(cert)
        checks[f"Fprime_agree_{i}"] = quad == cert
        checks[f"F{i - 1}_in_Fprime{i}"] = F[i - 1] <= quad
        checks[f"Fprime{i}_in_F{i}"] = quad <= F[i]
        checks[f"codim_le1_{i}"] = quad.dim - F[i - 1].dim <= 1
    for i in range(n):
        checks[f"F{i}_in_F{i + 1}"] = F[i] <= F[i + 1]
    checks["F0_zero"] = F[0].dim == 0
    checks["Fn1_hyperplane"] = F[n - 1].dim == n * n - 1 if n >= 1 else True
    N = [_n_dim(n, i) for i in range(n + 1)]
    checks["N_vanishes"] = not any(N)
    spaces = FiltrationSpaces(n, F, Fp, Fc, N, checks)
    if strict and not spaces.ok:
        bad = sorted(k for k, v in checks.items() if not v)
        raise InvariantViolation(f"filtration checks failed: {', '.join(bad)}")
    return spaces


# -- quadratic forms ------------------------------------------------------------------


def quadratic_form_Q(chain, i, kahler_tuple):
    """Gram matrix of ``Q(M, M') = L_i M M' c_1 ... c_{n-i-2}`` on real H^{1,1}."""
    n = chain.n
    if not 0 <= i <= n - 2:
        raise BadDegree(f"level {i} outside 0..{n - 2}")
    kahler_tuple = list(kahler_tuple)
    if len(kahler_tuple) != n - i - 2:
        raise BadDegree(f"expected {n - i - 2} Kähler classes")
    X = chain.L[i]
    for c in kahler_tuple:
        X = cup(X, c)
    basis = _basis_hodge(n)
    Z = [cup(X, b) for b in basis]
    return _real_matrix(pairing_matrix(Z) @ coords_matrix(basis))


def _restricted_inertia(Q, space):
    B = space.basis_matrix()
    if B.cols == 0:
        return (0, 0, 0)
    return inertia(B.T @ Q @ B)


def primitive_space(chain, i, kahler_tuple):
    """``P = {M : L_i M c_1 ... c_{n-i-1} = 0}``."""
    n = chain.n
    X = chain.L[i]
    for c in kahler_tuple:
        X = cup(X, c)
    return kernel_subspace(_real_matrix(pairing_matrix([X]) @ coords_matrix(_basis_hodge(n))))


def hodge_riemann_inertia(chain, spaces, i, kahler_tuple):
    """Inertia of Q on P and on F_{i+1}; ``kahler_tuple`` has ``n - i - 1`` entries,
    the last one only enters P."""
    kahler_tuple = list(kahler_tuple)
    Q = quadratic_form_Q(chain, i, kahler_tuple[:-1])
    P = primitive_space(chain, i, kahler_tuple)
    return {"P": _restricted_inertia(Q, P), "F_next": _restricted_inertia(Q, spaces.F[i + 1])}


# -- s-sequence and levels ---------------------------------------------------------------


@dataclass
class SSequenceReport:
    s: list
    r: int
    lambdas: list
    checks: dict

    @property
    def ok(self):
        return all(self.checks.values())


def _first_level(spaces, vec):
    return next(i for i in range(spaces.n + 1) if spaces.F[i].contains(vec))


def analyze_s_sequence(g, chain, omega, spaces=None):
    """Locate ``s_1 > ... > s_r`` and record every structural postcondition."""
    spaces = spaces or compute_spaces(chain)
    n = chain.n
    rec = expansion_classes(g, omega)
    real_action = real_h11_action(g)
    if real_action == ExactMatrix.identity(n * n):
        return SSequenceReport([], 0, [], {"trivial_action": True})
    w = [rec.omega(j).real_coords() for j in range(rec.top_index + 2)]
    zero = tuple([Fraction(0)] * (n * n))

    def om(j):
        return w[j] if j < len(w) else zero

    s, lambdas, checks = [], [], {}
    omega_h = chain.omega.to_hodge()
    j = 1
    while any(om(2 * j - 1)):
        sj = _first_level(spaces, om(2 * j - 1))
        s.append(sj)
        Fp, Fprev = spaces.Fprime[sj], spaces.F[sj - 1]
        checks[f"odd_not_in_Fprime_{j}"] = not Fp.contains(om(2 * j - 1))
        checks[f"even_in_Fprime_{j}"] = Fp.contains(om(2 * j))
        checks[f"even_not_in_Fprev_{j}"] = not Fprev.contains(om(2 * j))
        checks[f"codim_one_{j}"] = Fp.dim - Fprev.dim == 1
        tail = _power(omega_h, n - sj)
        denom = integral(chain.L[sj], tail)
        numer = integral(chain.L[sj - 1], h11(om(2 * j), n), tail)
        checks[f"sign_positive_{j}"] = denom > 0 and numer > 0
        lam = numer / denom if denom else Fraction(0)
        lambdas.append(lam)
        Mvec = chain.m(sj).real_coords()
        diff = [a - lam * b for a, b in zip(om(2 * j), Mvec)]
        checks[f"proportional_{j}"] = Fprev.contains(diff)
        j += 1
        if j > n + 1:
            break
    r = len(s)
    checks["omega_2r+1_zero"] = not any(om(2 * r + 1))
    checks["r_le_n-1"] = 1 <= r <= n - 1
    checks["strictly_decreasing"] = all(a > b for a, b in zip(s, s[1:]))
    checks["range"] = bool(s) and s[0] <= n - 1 and s[-1] >= 1
    return SSequenceReport(s, r, lambdas, checks)


def s_sequence(g, chain, omega, spaces=None):
    """The s-sequence; raises :class:`InvariantViolation` if a postcondition fails."""
    rep = analyze_s_sequence(g, chain, omega, spaces)
    if not rep.ok:
        bad = sorted(k for k, v in rep.checks.items() if not v)
        raise InvariantViolation(f"s-sequence postconditions failed: {', '.join(bad)}")
    return rep.s


def h_level(g, chain, spaces=None):
    """Smallest ``i`` with ``(g^* - Id) H^{1,1}`` inside ``F_i``."""
    spaces = spaces or compute_spaces(chain)
    n = chain.n
    D = real_h11_action(g) - ExactMatrix.identity(n * n)
    cols = [D.column(j) for j in range(D.cols)]
    return next(i for i in range(n + 1) if all(spaces.F[i].contains(c) for c in cols))


# -- primitive root spaces ------------------------------------------------------------------


def _w_terms(chain, j, c, witness, family_scale=DEFAULT_FAMILY_SCALE):
    """Per family tuple: ``(L_{j-1} c^2 tau, L_j witness tau)``."""
    n = chain.n
    ch = c.to_hodge()
    A = cup(cup(chain.L[j - 1], ch), ch)
    B = cup(chain.L[j], witness.to_hodge()) if witness is not None else None
    out = []
    for P in family_products(n, n - j - 1, Fraction(family_scale)):
        out.append((integral(A, P), integral(B, P) if B is not None else Fraction(0)))
    return out


def _require_in_F(spaces, j, c):
    if not spaces.F[j].contains(c.real_coords()):
        raise NotInFj(f"class is not in F_{j}")


def witness_scale(chain, spaces, j, c, witness=None, family_scale=DEFAULT_FAMILY_SCALE):
    """Least ``t >= 0`` with ``L_{j-1}(t M_j w + c^2) tau >= 0`` on the Kähler family."""
    _require_in_F(spaces, j, c)
    witness = witness or chain.omega
    t = Fraction(0)
    for a, b in _w_terms(chain, j, c, witness, family_scale):
        if b <= 0:
            if a < 0:
                return None
            continue
        t = max(t, -a / b)
    return t


def primitive_root_membership(chain, spaces, j, c, witness="omega", scale=1,
                              family_scale=DEFAULT_FAMILY_SCALE):
    """Decide ``L_{j-1}(M_j (scale * witness) + c^2) tau >= 0`` for every tuple of the family.

    ``witness=None`` drops the compensating term.  The default witness is the
    chain's Kähler class, whose product with ``L_j`` is nonzero and nef-limit.
    """
    if not 1 <= j <= chain.n - 1:
        raise BadDegree(f"level {j} outside 1..{chain.n - 1}")
    _require_in_F(spaces, j, c)
    if witness == "omega":
        witness = chain.omega
    if witness is not None:
        if not is_nef(witness):
            raise NotKahler("witness must be nef")
        witness = witness.scale(scale)
    return all(a + b >= 0 for a, b in _w_terms(chain, j, c, witness, family_scale))


def derived_witness_scale(chain, rec, j, lam):
    """Scale ``(4j - 2) lam C / (2j)`` with ``C omega - omega_{2j-2}`` nef."""
    w = chain.omega
    target = rec.omega(2 * j - 2)
    C = Fraction(1)
    while not is_nef(HermitianClass(w.H.scale(C) - target.H)):
        C *= 2
    return Fraction(4 * j - 2) * lam * C / (2 * j)


# -- cone checks -----------------------------------------------------------------------


def lineality_check(chain, spaces, i, samples, family_scale=DEFAULT_FAMILY_SCALE):
    """For sampled ``x`` in F_i, vanishing of ``L_{i-1} x tau`` on the whole Kähler family
    (the surrogate for ``x, -x`` both in C_i) forces ``x`` into F_{i-1}; also F_{i-1} lies in C_i."""
    n = chain.n
    Ps = family_products(n, n - i, Fraction(family_scale))
    for v in spaces.F[i - 1].basis():
        x = h11(v, n).to_hodge()
        if any(integral(chain.L[i - 1], x, P) != 0 for P in Ps):
            return False
    for v in samples:
        x = h11(v, n).to_hodge()
        vals = [integral(chain.L[i - 1], x, P) for P in Ps]
        if all(val == 0 for val in vals) and not spaces.F[i - 1].contains(v):
            return False
    return True


def product_vanishing_check(chain):
    """``L_i M_{i+1}^p = 0`` iff its pairing with ``omega^{n-i-p}`` vanishes."""
    n = chain.n
    wh = chain.omega.to_hodge()
    for i in range(n):
        X = chain.L[i]
        for p in range(1, n - i + 1):
            X = cup(X, chain.M[i])
            val = integral(X, _power(wh, n - i - p))
            if X.is_zero() != (val == 0):
                return False
    return True


def salience_check(chain, samples):
    """No sampled nonzero ``x`` has both ``L_i x`` and ``-L_i x`` certified as nef products.

    A nef ``x`` certifies ``L_i x``; the check is that ``x`` and ``-x`` are never
    both nef, and that ``L_i x omega^{n-i-1} > 0`` whenever ``L_i x`` is certified
    and nonzero.
    """
    n = chain.n
    wh = chain.omega.to_hodge()
    for i in range(n):
        tail = _power(wh, n - i - 1)
        for v in samples:
            x = h11(v, n)
            if x.is_zero():
                continue
            pos, neg = is_nef(x), is_nef(x.scale(-1))
            if pos and neg:
                return False
            for c in ([x] if pos else []) + ([x.scale(-1)] if neg else []):
                prod = cup(chain.L[i], c.to_hodge())
                if not prod.is_zero() and integral(prod, tail) <= 0:
                    return False
    return True


def hard_lefschetz_check(n, omega=None):
    """``c -> c omega^{n-2}`` is injective on H^{1,1} and N^1 = 0."""
    from .hodge import lefschetz_rank

    if n < 2:
        return True
    omega = omega or HermitianClass(ExactMatrix.identity(n))
    return lefschetz_rank(omega.to_hodge(), n - 2) == n * n and _n_dim(n, 1) == 0
