"""Unipotent matrix groups, affine unipotent groups and their commutator calculus.

Nilpotency class and derived length are computed on the Lie algebra spanned
by the logarithms of the generators and closed under brackets; a group-level
commutator enumeration is kept alongside as an independent oracle.
"""

from fractions import Fraction
from itertools import product

from .errors import BadParameters, InvariantViolation, MalformedWord, NotUnipotent
from .linalg import ExactMatrix, SpanBuilder, Subspace, as_matrix, is_unipotent, unipotent_log


def _flat(m):
    return m.flatten()


def _unflat(vec, n):
    return ExactMatrix([list(vec[i * n:(i + 1) * n]) for i in range(n)])


def bracket(x, y):
    return x @ y - y @ x


def commutator(g, h, g_inv=None, h_inv=None):
    """Group commutator ``g h g^-1 h^-1``."""
    g_inv = g.inverse() if g_inv is None else g_inv
    h_inv = h.inverse() if h_inv is None else h_inv
    return g @ h @ g_inv @ h_inv


class MatrixGroupPresentation:
    """Group generated by finitely many invertible integer matrices (rational with ``integral=False``)."""

    def __init__(self, generators, ambient_dim=None, integral=True):
        gens = tuple(as_matrix(g) for g in generators)
        if ambient_dim is None:
            if not gens:
                raise BadParameters("ambient_dim is required for an empty generator list")
            ambient_dim = gens[0].rows
        for k, g in enumerate(gens):
            if g.shape != (ambient_dim, ambient_dim):
                raise BadParameters(f"generator {k} has shape {g.shape}, expected {ambient_dim}")
            if integral:
                if not g.is_integer():
                    raise BadParameters(f"generator {k} is not an integer matrix")
                if abs(g.det()) != 1:
                    raise BadParameters(f"generator {k} is not invertible over the integers")
            elif g.det() == 0:
                raise BadParameters(f"generator {k} is singular")
        self.ambient_dim = ambient_dim
        self.generators = gens
        self.integral = integral

    def __len__(self):
        return len(self.generators)

    def is_unipotent(self):
        return all(is_unipotent(g) for g in self.generators)

    def require_unipotent(self):
        for k, g in enumerate(self.generators):
            if not is_unipotent(g):
                raise NotUnipotent(f"generator {k} is not unipotent")

    def identity(self):
        return ExactMatrix.identity(self.ambient_dim)

    def map(self, fn):
        """Presentation of the image under a representation ``fn``."""
        gens = [fn(g) for g in self.generators]
        dim = gens[0].rows if gens else None
        return MatrixGroupPresentation(gens, dim if dim is not None else self.ambient_dim, self.integral)


class NilpotentLieAlgebra:
    """A bracket-closed span of nilpotent matrices, kept in canonical echelon form."""

    def __init__(self, ambient_dim, basis):
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)

    @property
    def dim(self):
        return len(self.basis)

    def _space(self, mats):
        n = self.ambient_dim
        return Subspace.span([_flat(m) for m in mats], n * n) if mats else Subspace.zero(n * n)

    def _basis_of(self, space):
        return [_unflat(v, self.ambient_dim) for v in space.basis()]

    def contains(self, x):
        return self._space(list(self.basis)).contains(_flat(x))

    def bracket_span(self, xs, ys):
        """Basis of ``span{[x, y]}`` over the two given spanning lists."""
        n = self.ambient_dim
        sb = SpanBuilder(n * n)
        for x in xs:
            for y in ys:
                b = bracket(x, y)
                if not b.is_zero():
                    sb.add(_flat(b))
        return self._basis_of(sb.subspace())

    def lower_central_series(self):
        """Dimensions of ``Gamma_0 = L``, ``Gamma_{i+1} = [L, Gamma_i]``, ending with 0."""
        dims = [self.dim]
        cur = list(self.basis)
        while cur:
            cur = self.bracket_span(self.basis, cur)
            dims.append(len(cur))
            if len(dims) > self.ambient_dim + 2:
                raise InvariantViolation("lower central series does not terminate")
        return dims

    def derived_series(self):
        """Dimensions of ``L^(0) = L``, ``L^(i+1) = [L^(i), L^(i)]``, ending with 0."""
        dims = [self.dim]
        cur = list(self.basis)
        while cur:
            cur = self.bracket_span(cur, cur)
            dims.append(len(cur))
            if len(dims) > self.ambient_dim + 2:
                raise InvariantViolation("derived series does not terminate")
        return dims

    def is_closed(self):
        sp = self._space(list(self.basis))
        return all(sp.contains(_flat(bracket(x, y))) for x in self.basis for y in self.basis)


def lie_closure(group):
    """Smallest bracket-closed subspace containing the logarithms of the generators."""
    group.require_unipotent()
    n = group.ambient_dim
    sb = SpanBuilder(n * n)
    elems = []
    pending = []
    for g in group.generators:
        x = unipotent_log(g)
        if not x.is_zero() and sb.add(_flat(x)):
            pending.append(x)
    while pending:
        x = pending.pop(0)
        for y in list(elems):
            b = bracket(x, y)
            if not b.is_zero() and sb.add(_flat(b)):
                pending.append(b)
        elems.append(x)
    space = sb.subspace()
    basis = [_unflat(v, n) for v in space.basis()]
    return NilpotentLieAlgebra(n, basis)


def nilpotency_class(group):
    """Number of nonzero terms of the lower central series of the Lie closure."""
    return len(lie_closure(group).lower_central_series()) - 1


def derived_length(group):
    """Number of nonzero terms of the derived series of the Lie closure."""
    return len(lie_closure(group).derived_series()) - 1


def log2_bound(c):
    """``floor(log2(c)) + 1`` for ``c >= 1``."""
    return c.bit_length()


def lcs_oracle(group, weight):
    """True iff every left-normed commutator of ``weight`` generators is the identity.

    Equivalently, for a nilpotent group, the nilpotency class is below ``weight``.
    Values are deduplicated level by level and identity prefixes are pruned,
    since ``[I, g] = I``.
    """
    if weight < 1:
        raise BadParameters("weight must be at least 1")
    ident = group.identity()
    gens = [(g, g.inverse()) for g in group.generators]
    level = {}
    for g, gi in gens:
        if g != ident:
            level.setdefault(g, gi)
    for _ in range(weight - 1):
        nxt = {}
        for x, xi in level.items():
            for g, gi in gens:
                c = x @ g @ xi @ gi
                if c != ident and c not in nxt:
                    nxt[c] = g @ x @ gi @ xi
        level = nxt
        if not level:
            break
    return not level


# -- commutator words and the decomposition of Id - g ----------------------------


def word_weight(word):
    if isinstance(word, bool):
        raise MalformedWord("booleans are not words")
    if isinstance(word, int):
        return 1
    if isinstance(word, (tuple, list)) and len(word) == 2:
        return word_weight(word[0]) + word_weight(word[1])
    raise MalformedWord(f"cannot parse commutator word {word!r}")


def evaluate_word(group, word):
    """Value of a nested commutator word; ints index generators, pairs are commutators."""
    if isinstance(word, int) and not isinstance(word, bool):
        if not 0 <= word < len(group.generators):
            raise MalformedWord(f"generator index {word} out of range")
        return group.generators[word]
    word_weight(word)
    return commutator(evaluate_word(group, word[0]), evaluate_word(group, word[1]))


def decompose(group, word):
    """Signed terms ``(sign, [(h_1, g_1), ..., (h_k, g_k)])`` with
    ``Id - value(word) = sum sign * h_1 (Id - g_1) ... h_k (Id - g_k)``.

    Every ``g_i`` is a generator and ``k`` is at least the word weight.  The
    recursion uses ``Id - [x, y] = xy(Id - y^-1)(Id - x^-1) - xy(Id - x^-1)(Id - y^-1)``
    and ``Id - x^-1 = -x^-1 (Id - x)``.
    """
    ident = group.identity()
    if isinstance(word, int) and not isinstance(word, bool):
        g = evaluate_word(group, word)
        return [(1, [(ident, g)])]
    word_weight(word)
    x = evaluate_word(group, word[0])
    y = evaluate_word(group, word[1])
    xi, yi = x.inverse(), y.inverse()

    def inv_terms(terms, v_inv):
        return [(-s, [(v_inv @ fs[0][0], fs[0][1])] + fs[1:]) for s, fs in terms]

    dx = inv_terms(decompose(group, word[0]), xi)
    dy = inv_terms(decompose(group, word[1]), yi)
    xy = x @ y
    out = []
    for outer, first, second in ((1, dy, dx), (-1, dx, dy)):
        for (s1, f1), (s2, f2) in product(first, second):
            factors = [(xy @ f1[0][0], f1[0][1])] + f1[1:] + f2
            out.append((outer * s1 * s2, factors))
    return out


def evaluate_decomposition(terms, dim):
    ident = ExactMatrix.identity(dim)
    total = ExactMatrix.zeros(dim)
    for sign, factors in terms:
        p = ident
        for h, g in factors:
            p = p @ h @ (ident - g)
        total = total + (p if sign > 0 else -p)
    return total


def gamma_decomposition_check(group, word, level):
    """Build the decomposition of ``Id - g`` for a commutator word and verify it exactly.

    ``level`` is the lower-central index: the word must have weight at least
    ``level + 1``, and every term must then have at least ``level + 1`` factors.
    """
    w = word_weight(word)
    if w < level + 1:
        raise MalformedWord(f"word of weight {w} does not lie in Gamma_{level}")
    terms = decompose(group, word)
    if any(len(f) < level + 1 for _, f in terms):
        return False
    g = evaluate_word(group, word)
    ident = group.identity()
    return evaluate_decomposition(terms, group.ambient_dim) == ident - g


def annihilation_check(h_list, g_list):
    """Product ``h_1 (Id - g_1) ... h_m (Id - g_m)`` of H^1 actions.

    Entries may be matrices or objects exposing an ``h1`` action matrix.
    """
    if len(h_list) != len(g_list):
        raise BadParameters("h_list and g_list must have equal length")
    hs = [getattr(h, "h1", h) for h in h_list]
    gs = [getattr(g, "h1", g) for g in g_list]
    if not hs:
        raise BadParameters("empty product")
    dim = hs[0].rows
    ident = ExactMatrix.identity(dim)
    p = ident
    for h, g in zip(hs, gs):
        p = p @ h @ (ident - g)
    return p


def flag_abelian_check(matrices, subspace):
    """Commutativity of a set acting trivially on ``W`` and on ``V/W``.

    Returns False when the hypothesis fails.  When it holds, pairwise
    commutativity is asserted and True is returned.
    """
    mats = [as_matrix(m) for m in matrices]
    if not mats:
        return True
    dim = mats[0].rows
    if not isinstance(subspace, Subspace):
        vecs = list(subspace)
        subspace = Subspace.span(vecs, dim) if vecs else Subspace.zero(dim)
    ident = ExactMatrix.identity(dim)
    basis = subspace.basis()
    for m in mats:
        d = m - ident
        for w in basis:
            col = ExactMatrix.from_columns([w])
            if not (d @ col).is_zero():
                return False
        for j in range(dim):
            if not subspace.contains(d.column(j)):
                return False
    for a in mats:
        for b in mats:
            if a @ b != b @ a:
                raise InvariantViolation("flag-trivial matrices fail to commute")
    return True


# -- affine groups ----------------------------------------------------------------


def _vec(b, k):
    b = tuple(Fraction(x) if not isinstance(x, str) else Fraction(x) for x in b)
    if len(b) != k:
        raise BadParameters(f"translation of length {len(b)}, expected {k}")
    return b


def _mod1(b):
    return tuple(x - (x.numerator // x.denominator) for x in b)


class AffineMap:
    """``x -> A x + b``; with ``torus=True`` the translation lives in ``Q^k / Z^k``."""

    __slots__ = ("A", "b", "torus")

    def __init__(self, A, b, torus=False):
        self.A = as_matrix(A)
        b = _vec(b, self.A.rows)
        self.b = _mod1(b) if torus else b
        self.torus = torus

    def __matmul__(self, other):
        ab = [sum((self.A[i, j] * other.b[j] for j in range(self.A.cols)), Fraction(0)) + self.b[i]
              for i in range(self.A.rows)]
        return AffineMap(self.A @ other.A, ab, self.torus)

    def inverse(self):
        ai = self.A.inverse()
        b = [-sum((ai[i, j] * self.b[j] for j in range(ai.cols)), Fraction(0)) for i in range(ai.rows)]
        return AffineMap(ai, b, self.torus)

    def is_identity(self):
        return self.A == ExactMatrix.identity(self.A.rows) and not any(self.b)

    def block(self):
        """The ``(k+1) x (k+1)`` matrix ``[[A, b], [0, 1]]``."""
        k = self.A.rows
        rows = [list(self.A.row(i)) + [self.b[i]] for i in range(k)]
        rows.append([0] * k + [1])
        return ExactMatrix(rows)

    def key(self):
        return (self.A, self.b)

    def __eq__(self, other):
        return isinstance(other, AffineMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class AffineGroupPresentation:
    """Group generated by affine maps ``(A, b)`` with unipotent integer ``A``."""

    def __init__(self, linear_dim, generators, torus=False):
        self.linear_dim = linear_dim
        self.torus = torus
        gens = []
        for k, (A, b) in enumerate(generators):
            A = as_matrix(A)
            if A.shape != (linear_dim, linear_dim) or not A.is_integer():
                raise BadParameters(f"generator {k}: linear part must be an integer {linear_dim}x{linear_dim} matrix")
            gens.append(AffineMap(A, b, torus))
        self.generators = tuple(gens)

    def identity(self):
        return AffineMap(ExactMatrix.identity(self.linear_dim), [0] * self.linear_dim, self.torus)

    def require_unipotent(self):
        for k, g in enumerate(self.generators):
            if not is_unipotent(g.A):
                raise NotUnipotent(f"generator {k} has a non-unipotent linear part")


def affine_to_unipotent(group):
    """Block embedding ``(A, b) -> [[A, b], [0, 1]]``; needs integer translations."""
    group.require_unipotent()
    for k, g in enumerate(group.generators):
        if any(x.denominator != 1 for x in g.b):
            raise BadParameters(f"generator {k} has a non-integer translation")
    return MatrixGroupPresentation([g.block() for g in group.generators], group.linear_dim + 1)


def verify_affine_embedding(group):
    """Check that the block map turns composition into matrix products on all generator pairs."""
    elems = list(group.generators) + [g.inverse() for g in group.generators]
    for x in elems:
        for y in elems:
            if (x @ y).block() != x.block() @ y.block():
                return False
    return all(x.inverse().block() == x.block().inverse() for x in elems)


def affine_lcs_oracle(group, weight):
    """Group-level left-normed commutator test for affine presentations."""
    if weight < 1:
        raise BadParameters("weight must be at least 1")
    gens = [(g, g.inverse()) for g in group.generators]
    level = {}
    for g, gi in gens:
        if not g.is_identity():
            level.setdefault(g, gi)
    for _ in range(weight - 1):
        nxt = {}
        for x, xi in level.items():
            for g, gi in gens:
                c = x @ g @ xi @ gi
                if not c.is_identity() and c not in nxt:
                    nxt[c] = g @ x @ gi @ xi
        level = nxt
        if not level:
            break
    return not level


def affine_nilpotency_class(group):
    """Class of an affine presentation with integer translations, via the block embedding."""
    return nilpotency_class(affine_to_unipotent(group))
