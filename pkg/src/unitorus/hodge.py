"""Complex tori as lattices with a rational complex structure.

H^1 is the dual of Q^{2n}; a lattice automorphism ``M`` pulls forms back by
``M^T``.  V^{1,0} is the +i eigenspace of ``J^T``, with a basis in reduced
echelon form, and H^{p,q} has the basis ``dz_I ^ dzbar_J`` (subsets in
lexicographic order, ``I`` major).
"""

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, gcd, lcm

from .errors import BadComplexStructure, BadDegree, BadParameters, NotSymmetric, WrongArity
from .kernels import wedge_int
from .linalg import ExactMatrix, SpanBuilder, as_matrix, hermitian_inertia
from .scalars import I, GaussianRational, conj, to_scalar


@lru_cache(maxsize=None)
def subsets(n, p):
    return tuple(combinations(range(n), p))


@lru_cache(maxsize=None)
def subset_index(n, p):
    return {s: k for k, s in enumerate(subsets(n, p))}


def merge_sign(a, b):
    """Sign of the shuffle sorting ``a + b`` (both sorted); 0 if they overlap."""
    if set(a) & set(b):
        return 0
    inv = sum(1 for x in a for y in b if x > y)
    return -1 if inv % 2 else 1


def hpq_dim(n, p, q):
    return comb(n, p) * comb(n, q)


@lru_cache(maxsize=None)
def wedge_table(n, p1, q1, p2, q2):
    """For each basis index of H^{p1,q1}, the list ``(ib, io, sign)`` of nonzero products."""
    p, q = p1 + p2, q1 + q2
    idx_p, idx_q = subset_index(n, p), subset_index(n, q)
    d2q = comb(n, q2)
    dq = comb(n, q)
    table = []
    for i1 in subsets(n, p1):
        for j1 in subsets(n, q1):
            entries = []
            for ib_i, i2 in enumerate(subsets(n, p2)):
                si = merge_sign(i1, i2)
                if not si:
                    continue
                for ib_j, j2 in enumerate(subsets(n, q2)):
                    sj = merge_sign(j1, j2)
                    if not sj:
                        continue
                    sign = si * sj * (-1 if (q1 * p2) % 2 else 1)
                    io = idx_p[tuple(sorted(i1 + i2))] * dq + idx_q[tuple(sorted(j1 + j2))]
                    entries.append((ib_i * d2q + ib_j, io, sign))
            table.append(tuple(entries))
    return tuple(table)


def _int_coords(coords):
    den = 1
    for x in coords:
        if isinstance(x, GaussianRational):
            den = lcm(den, x.re.denominator, x.im.denominator)
        else:
            den = lcm(den, x.denominator)
    re, im = [], []
    for x in coords:
        if isinstance(x, GaussianRational):
            re.append(int(x.re * den))
            im.append(int(x.im * den))
        else:
            re.append(int(x * den))
            im.append(0)
    return re, im, den


def _from_int_coords(re, im, den):
    out = []
    for a, b in zip(re, im):
        if b:
            out.append(GaussianRational(Fraction(a, den), Fraction(b, den)))
        else:
            out.append(Fraction(a, den))
    return tuple(out)


class HodgeClass:
    """An element of H^{p,q} of an n-dimensional torus, in the ``dz_I ^ dzbar_J`` basis."""

    __slots__ = ("n", "p", "q", "coords", "_ic")

    def __init__(self, n, p, q, coords, _ints=None):
        if not (0 <= p <= n and 0 <= q <= n):
            raise BadDegree(f"degree ({p},{q}) outside 0..{n}")
        coords = tuple(to_scalar(x) for x in coords)
        if len(coords) != hpq_dim(n, p, q):
            raise BadParameters("coordinate vector has the wrong length")
        self.n, self.p, self.q, self.coords = n, p, q, coords
        self._ic = _ints

    def int_coords(self):
        """``(re, im, den)`` integer form of the coordinates (cached)."""
        if self._ic is None:
            self._ic = _int_coords(self.coords)
        return self._ic

    @classmethod
    def zero(cls, n, p, q):
        return cls(n, p, q, [0] * hpq_dim(n, p, q))

    @classmethod
    def unit(cls, n):
        return cls(n, 0, 0, [1])

    @classmethod
    def basis_element(cls, n, p, q, i_set, j_set):
        c = [0] * hpq_dim(n, p, q)
        c[subset_index(n, p)[tuple(i_set)] * comb(n, q) + subset_index(n, q)[tuple(j_set)]] = 1
        return cls(n, p, q, c)

    @property
    def degree(self):
        return (self.p, self.q)

    def _check(self, other):
        if not isinstance(other, HodgeClass) or (self.n, self.p, self.q) != (other.n, other.p, other.q):
            raise BadDegree("classes of different degrees")

    def __add__(self, other):
        self._check(other)
        return HodgeClass(self.n, self.p, self.q, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return HodgeClass(self.n, self.p, self.q, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return HodgeClass(self.n, self.p, self.q, [-a for a in self.coords])

    def scale(self, c):
        c = to_scalar(c)
        return HodgeClass(self.n, self.p, self.q, [c * a for a in self.coords])

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, HodgeClass):
            return cup(self, other)
        if isinstance(other, HermitianClass):
            return cup(self, other.to_hodge())
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, HodgeClass):
            return NotImplemented
        return (self.n, self.p, self.q, self.coords) == (other.n, other.p, other.q, other.coords)

    def __hash__(self):
        return hash((self.n, self.p, self.q, self.coords))

    def is_zero(self):
        return not any(self.coords)

    def __repr__(self):
        return f"HodgeClass(n={self.n}, ({self.p},{self.q}), {[str(c) for c in self.coords]})"

    def conjugate(self):
        """Complex conjugate: a class in H^{q,p}."""
        n, p, q = self.n, self.p, self.q
        sign = -1 if (p * q) % 2 else 1
        dq, dp = comb(n, q), comb(n, p)
        out = [0] * hpq_dim(n, q, p)
        for a in range(dp):
            for b in range(dq):
                out[b * dp + a] = sign * conj(self.coords[a * dq + b])
        return HodgeClass(n, q, p, out)

    def is_real(self):
        return self.p == self.q and self.conjugate() == self

    def apply(self, action):
        """Image under a matrix acting on the coordinate vector."""
        col = ExactMatrix.from_columns([self.coords]) if self.coords else None
        return HodgeClass(self.n, self.p, self.q, (action @ col).column(0))

    def vector(self):
        return self.coords


def cup(a, b):
    """Wedge product; returns the zero class when the degree overflows."""
    if isinstance(a, HermitianClass):
        a = a.to_hodge()
    if isinstance(b, HermitianClass):
        b = b.to_hodge()
    if a.n != b.n:
        raise BadDegree("classes live on different tori")
    n = a.n
    p, q = a.p + b.p, a.q + b.q
    if p > n or q > n:
        return _overflow(n, p, q)
    table = wedge_table(n, a.p, a.q, b.p, b.q)
    ar, ai, ad = a.int_coords()
    br, bi, bd = b.int_coords()
    o_re, o_im = wedge_int(table, ar, ai, br, bi, hpq_dim(n, p, q))
    den = ad * bd
    g = gcd(den, *o_re, *o_im)
    if g > 1:
        o_re = [x // g for x in o_re]
        o_im = [x // g for x in o_im]
        den //= g
    return HodgeClass(n, p, q, _from_int_coords(o_re, o_im, den), (o_re, o_im, den))


class _Overflow(HodgeClass):
    """Zero class of a degree beyond (n, n)."""

    def __init__(self, n, p, q):  # noqa: D401 - no coordinates to validate
        self.n, self.p, self.q, self.coords, self._ic = n, p, q, (), None


def _overflow(n, p, q):
    return _Overflow(n, p, q)


def cup_all(classes):
    it = iter(classes)
    out = next(it)
    if isinstance(out, HermitianClass):
        out = out.to_hodge()
    for c in it:
        out = cup(out, c)
    return out


@lru_cache(maxsize=None)
def top_normalization(n):
    """Value of the integral of ``dz_1..dz_n ^ dzbar_1..dzbar_n``, fixed so that
    ``intersection_number(H, ..., H) = det H``."""
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return 1 / (factorial(n) * I**n * sign)


def evaluate_top(c):
    """Integral of a class of degree (n, n) against the fundamental class."""
    if isinstance(c, _Overflow):
        return Fraction(0)
    if c.degree != (c.n, c.n):
        raise BadDegree(f"expected degree ({c.n},{c.n}), got {c.degree}")
    return to_scalar(c.coords[0] * top_normalization(c.n))


def pairing(a, b):
    """Poincaré pairing: integral of ``a ^ b``."""
    return evaluate_top(cup(a, b))


def dual_functional(c):
    """Coefficients ``u`` with ``integral(y ^ c) = sum_k u[k] * y[k]`` for y of complementary degree."""
    n = c.n
    p, q = n - c.p, n - c.q
    kappa = top_normalization(n)
    table = wedge_table(n, p, q, c.p, c.q)
    u = []
    for entries in table:
        s = 0
        for ib, _, sign in entries:
            s = s + sign * c.coords[ib]
        u.append(to_scalar(s * kappa))
    return u


def pairing_matrix(classes):
    """Rows are the dual functionals of ``classes``; multiply by coordinate columns to integrate."""
    return ExactMatrix([dual_functional(c) for c in classes])


def coords_matrix(classes):
    """Coordinate vectors of ``classes`` as columns."""
    return ExactMatrix.from_columns([c.coords for c in classes])


# -- Hermitian (1,1) classes --------------------------------------------------------


class HermitianClass:
    """A real (1,1) class ``i * sum H_kl dz_k ^ dzbar_l`` with ``H`` Hermitian."""

    __slots__ = ("H",)

    def __init__(self, H):
        H = as_matrix(H)
        if not H.is_square() or H != H.H:
            raise NotSymmetric("matrix is not Hermitian")
        self.H = H

    @property
    def n(self):
        return self.H.rows

    def to_hodge(self):
        n = self.n
        return HodgeClass(n, 1, 1, [I * self.H[k, l] for k in range(n) for l in range(n)])

    @classmethod
    def from_hodge(cls, c):
        if c.degree != (1, 1):
            raise BadDegree("a Hermitian class has degree (1,1)")
        n = c.n
        rows = [[c.coords[k * n + l] / I for l in range(n)] for k in range(n)]
        return cls(ExactMatrix(rows))

    def real_coords(self):
        return hermitian_to_real(self.H)

    @classmethod
    def from_real(cls, n, vec):
        return cls(real_to_hermitian(n, vec))

    def __add__(self, other):
        return HermitianClass(self.H + other.H)

    def __sub__(self, other):
        return HermitianClass(self.H - other.H)

    def __neg__(self):
        return HermitianClass(-self.H)

    def scale(self, c):
        return HermitianClass(self.H.scale(c))

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, (HodgeClass, HermitianClass)):
            return cup(self, other)
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, HermitianClass) and self.H == other.H

    def __hash__(self):
        return hash(self.H)

    def __repr__(self):
        return f"HermitianClass({self.H!r})"

    def is_zero(self):
        return self.H.is_zero()


def hermitian_basis(n):
    """Real basis of Hermitian n x n matrices: ``E_kk``, then for ``k < l``
    ``E_kl + E_lk`` and ``i (E_kl - E_lk)``."""
    out = []
    for k in range(n):
        m = [[0] * n for _ in range(n)]
        m[k][k] = 1
        out.append(ExactMatrix(m))
    for k in range(n):
        for l in range(k + 1, n):
            m = [[0] * n for _ in range(n)]
            m[k][l] = m[l][k] = 1
            out.append(ExactMatrix(m))
            m = [[0] * n for _ in range(n)]
            m[k][l] = I
            m[l][k] = -I
            out.append(ExactMatrix(m))
    return out


def hermitian_to_real(H):
    """Coordinates of a Hermitian matrix in :func:`hermitian_basis`."""
    n = H.rows
    out = [Fraction(H[k, k]) if not isinstance(H[k, k], GaussianRational) else H[k, k].re for k in range(n)]
    for k in range(n):
        for l in range(k + 1, n):
            x = H[k, l]
            if isinstance(x, GaussianRational):
                out.extend([x.re, x.im])
            else:
                out.extend([Fraction(x), Fraction(0)])
    return tuple(out)


def real_to_hermitian(n, vec):
    vec = [to_scalar(x) for x in vec]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        m[k][k] = vec[k]
    pos = n
    for k in range(n):
        for l in range(k + 1, n):
            a, b = vec[pos], vec[pos + 1]
            pos += 2
            m[k][l] = GaussianRational(a, b)
            m[l][k] = GaussianRational(a, -b)
    return ExactMatrix(m)


def hermitian_basis_classes(n):
    return [HermitianClass(b) for b in hermitian_basis(n)]


def is_nef(h):
    """Nef on a torus means positive semidefinite."""
    H = h.H if isinstance(h, HermitianClass) else as_matrix(h)
    return hermitian_inertia(H)[2] == 0


def is_kahler(h):
    """Kähler on a torus means positive definite."""
    H = h.H if isinstance(h, HermitianClass) else as_matrix(h)
    return hermitian_inertia(H)[0] == H.rows


def mixed_discriminant(mats):
    """Polarization of the determinant, normalized so that ``D(H, ..., H) = det H``."""
    n = len(mats)
    total = Fraction(0)
    for mask in range(1, 1 << n):
        chosen = [mats[k] for k in range(n) if mask >> k & 1]
        s = chosen[0]
        for m in chosen[1:]:
            s = s + m
        sign = -1 if (n - len(chosen)) % 2 else 1
        total += sign * s.det()
    return to_scalar(total / factorial(n))


def intersection_number(classes, method="polarization"):
    """Intersection number of n Hermitian classes on an n-dimensional torus.

    ``method`` is ``"polarization"`` (mixed discriminant) or ``"wedge"``
    (full exterior-algebra expansion); both give the same exact value.
    """
    classes = list(classes)
    if not classes:
        raise WrongArity("no classes given")
    n = classes[0].n
    if len(classes) != n:
        raise WrongArity(f"expected {n} classes, got {len(classes)}")
    if method == "polarization":
        return mixed_discriminant([c.H for c in classes])
    if method == "wedge":
        return evaluate_top(cup_all(classes))
    raise BadParameters(f"unknown method {method!r}")


# -- tori and automorphisms ---------------------------------------------------------


def square_j(n):
    """Block-diagonal complex structure of ``E_i^n``."""
    blk = ExactMatrix([[0, -1], [1, 0]])
    return ExactMatrix.block_diag(*([blk] * n))


class TorusModel:
    """The lattice ``Z^{2n}`` with a rational complex structure ``J``."""

    def __init__(self, n, J):
        J = as_matrix(J)
        if J.shape != (2 * n, 2 * n) or not J.is_real():
            raise BadComplexStructure(f"J must be a rational {2 * n}x{2 * n} matrix")
        if J @ J != -ExactMatrix.identity(2 * n):
            raise BadComplexStructure("J^2 != -I")
        self.n = n
        self.J = J
        self._split = None

    @classmethod
    def square(cls, n):
        return cls(n, square_j(n))

    def __eq__(self, other):
        return isinstance(other, TorusModel) and self.n == other.n and self.J == other.J

    def __hash__(self):
        return hash((self.n, self.J))

    def hodge_split(self):
        """``(B, Bbar, pivots)``: columns of ``B`` span V^{1,0}, those of ``Bbar`` V^{0,1}."""
        if self._split is None:
            n = self.n
            jt = self.J.T
            op = jt - ExactMatrix.identity(2 * n).scale(I)
            kern = op.nullspace()
            if len(kern) != n:
                raise BadComplexStructure("+i eigenspace has the wrong dimension")
            pivots, red = ExactMatrix(kern).rref()
            B = red.T
            Bbar = B.conj()
            if (jt @ Bbar) != Bbar.scale(-I) or B.hstack(Bbar).rank() != 2 * n:
                raise BadComplexStructure("eigenspaces do not split H^1")
            self._split = (B, Bbar, tuple(pivots))
        return self._split


def hodge_split(torus):
    """Bases (as lists of vectors) of V^{1,0} and V^{0,1}."""
    B, Bbar, _ = torus.hodge_split()
    return [B.column(j) for j in range(B.cols)], [Bbar.column(j) for j in range(Bbar.cols)]


def compound(A, p):
    """p-th compound matrix: entry ``[K, I] = det A[K, I]``."""
    n = A.rows
    subs = subsets(n, p)
    if p == 0:
        return ExactMatrix.identity(1)
    return ExactMatrix([[A.submatrix(K, Iset).det() for Iset in subs] for K in subs])


class TorusAutomorphism:
    """A holomorphic lattice automorphism ``x -> M x + t`` of a torus."""

    def __init__(self, torus, M, t=None):
        M = as_matrix(M)
        n2 = 2 * torus.n
        if M.shape != (n2, n2) or not M.is_integer():
            raise BadParameters("M must be an integer matrix of the lattice size")
        if abs(M.det()) != 1:
            raise BadParameters("M is not invertible over the integers")
        if M @ torus.J != torus.J @ M:
            raise BadComplexStructure("M does not commute with J")
        self.torus = torus
        self.M = M
        if t is None:
            t = [0] * n2
        t = [to_scalar(x) for x in t]
        if len(t) != n2 or any(isinstance(x, GaussianRational) for x in t):
            raise BadParameters("translation must be a rational vector of the lattice size")
        self.t = tuple(x - (x.numerator // x.denominator) for x in t)
        self._A = None
        self._cache = {}

    @property
    def n(self):
        return self.torus.n

    @property
    def h1(self):
        """Pullback on H^1 in dual lattice coordinates."""
        return self.M.T

    @property
    def A(self):
        """Matrix of the pullback on V^{1,0}: ``M^T B = B A``."""
        if self._A is None:
            B, _, pivots = self.torus.hodge_split()
            img = self.M.T @ B
            A = img.submatrix(pivots, range(B.cols))
            if B @ A != img:
                raise BadComplexStructure("pullback does not preserve V^{1,0}")
            self._A = A
        return self._A

    def compose(self, other):
        """``self o other``."""
        t = [sum((self.M[i, j] * other.t[j] for j in range(self.M.cols)), Fraction(0)) + self.t[i]
             for i in range(self.M.rows)]
        return TorusAutomorphism(self.torus, self.M @ other.M, t)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self):
        mi = self.M.inverse()
        t = [-sum((mi[i, j] * self.t[j] for j in range(mi.cols)), Fraction(0)) for i in range(mi.rows)]
        return TorusAutomorphism(self.torus, mi, t)

    def power(self, k):
        return TorusAutomorphism(self.torus, self.M**k, None) if not any(self.t) else _power(self, k)

    def is_unipotent(self):
        from .linalg import is_unipotent

        return is_unipotent(self.M)

    def action_on_hpq(self, p, q):
        return action_on_hpq(self, p, q)

    def __eq__(self, other):
        return isinstance(other, TorusAutomorphism) and (self.torus, self.M, self.t) == (other.torus, other.M, other.t)

    def __hash__(self):
        return hash((self.torus, self.M, self.t))


def _power(g, k):
    out = TorusAutomorphism(g.torus, ExactMatrix.identity(2 * g.n))
    base = g if k >= 0 else g.inverse()
    for _ in range(abs(k)):
        out = out.compose(base)
    return out


def action_on_hpq(g, p, q):
    """Matrix of the pullback on H^{p,q}: ``C_p(A) (x) C_q(conj A)``."""
    n = g.n
    if not (0 <= p <= n and 0 <= q <= n):
        raise BadDegree(f"degree ({p},{q}) outside 0..{n}")
    key = (p, q)
    if key not in g._cache:
        A = g.A
        g._cache[key] = compound(A, p).kron(compound(A.conj(), q))
    return g._cache[key]


def action_on_hpq_bruteforce(g, p, q):
    """Oracle: wedge together the images of ``dz_i`` and ``dzbar_j`` one factor at a time."""
    n = g.n
    A = g.A
    Abar = A.conj()
    dz = [HodgeClass(n, 1, 0, A.column(i)) for i in range(n)]
    dzb = [HodgeClass(n, 0, 1, Abar.column(j)) for j in range(n)]
    cols = []
    for Iset in subsets(n, p):
        for Jset in subsets(n, q):
            c = HodgeClass.unit(n)
            for i in Iset:
                c = cup(c, dz[i])
            for j in Jset:
                c = cup(c, dzb[j])
            cols.append(c.coords)
    return ExactMatrix.from_columns(cols, hpq_dim(n, p, q))


def pullback(g, c):
    """``g^* c`` for a Hodge or Hermitian class."""
    if isinstance(c, HermitianClass):
        return pullback_hermitian(g, c)
    return c.apply(action_on_hpq(g, c.p, c.q))


def pullback_hermitian(g, h):
    """``g^*`` on a Hermitian class; in these coordinates the matrix becomes ``A H A^*``."""
    A = g.A
    return HermitianClass(A @ h.H @ A.H)


def real_h11_action(g):
    """Matrix of ``g^*`` on real H^{1,1} in :func:`hermitian_basis` coordinates."""
    n = g.n
    cols = [hermitian_to_real(pullback_hermitian(g, HermitianClass(b)).H) for b in hermitian_basis(n)]
    return ExactMatrix.from_columns(cols, n * n)


def lefschetz_rank(omega, k):
    """Rank of ``c -> c ^ omega^k`` on H^{1,1} (complex coordinates)."""
    n = omega.n
    wk = HodgeClass.unit(n)
    for _ in range(k):
        wk = cup(wk, omega)
    cols = []
    for a in subsets(n, 1):
        for b in subsets(n, 1):
            cols.append(cup(HodgeClass.basis_element(n, 1, 1, a, b), wk).coords)
    return ExactMatrix.from_columns(cols).rank()


def product_span_basis(n, k):
    """Basis of the span of all products of k real (1,1) classes, as H^{k,k} coordinate vectors.

    Built level by level: products of k classes span the same space as the
    level-(k-1) span times the Hermitian basis.
    """
    basis_classes = [HermitianClass(b).to_hodge() for b in hermitian_basis(n)]
    level = [HodgeClass.unit(n)]
    for _ in range(k):
        dim = hpq_dim(n, level[0].p + 1, level[0].q + 1)
        sb = SpanBuilder(2 * dim)
        nxt = []
        for c in level:
            for b in basis_classes:
                prod = cup(c, b)
                vec = _realified(prod.coords)
                if sb.add(vec):
                    nxt.append(prod)
        level = nxt
    return level


def _realified(coords):
    re = [x.re if isinstance(x, GaussianRational) else x for x in coords]
    im = [x.im if isinstance(x, GaussianRational) else Fraction(0) for x in coords]
    return re + im
