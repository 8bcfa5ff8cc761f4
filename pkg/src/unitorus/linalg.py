"""Exact linear algebra over Q and Q(i).

Matrices are stored as integer numerators over one positive common
denominator, with an optional imaginary numerator block.  All elimination
runs on integers through :mod:`unitorus.kernels`; nothing here ever touches
floating point.
"""

from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from .errors import NotQuasiUnipotent, NotSymmetric, NotUnipotent
from .kernels import matmul_int, rank_int, rref_int
from .scalars import GaussianRational, to_scalar


def _denominator(x):
    if isinstance(x, GaussianRational):
        return lcm(x.re.denominator, x.im.denominator)
    return x.denominator


def _lcm_all(values):
    return reduce(lcm, values, 1)


def _add_int(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _sub_int(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _scale_int(a, k):
    if k == 1:
        return [list(r) for r in a]
    return [[k * x for x in r] for r in a]


class ExactMatrix:
    """Immutable dense matrix over Q or Q(i).

    Construct from nested rows of ints, Fractions, ``"p/q"`` strings or
    :class:`GaussianRational` values.
    """

    __slots__ = ("rows", "cols", "_re", "_im", "_den", "_hash")

    def __init__(self, rows=None, *, shape=None):
        if rows is None:
            rows = []
        data = [[to_scalar(x) for x in r] for r in rows]
        nrows = len(data)
        ncols = len(data[0]) if data else (shape[1] if shape else 0)
        if shape is not None and (nrows, ncols) != tuple(shape) and nrows:
            raise ValueError("shape mismatch")
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        den = _lcm_all(_denominator(x) for r in data for x in r)
        re = []
        im = []
        has_im = False
        for r in data:
            rr, ri = [], []
            for x in r:
                if isinstance(x, GaussianRational):
                    rr.append(int(x.re * den))
                    ri.append(int(x.im * den))
                    has_im = has_im or x.im != 0
                else:
                    rr.append(int(x * den))
                    ri.append(0)
            re.append(rr)
            im.append(ri)
        self._set(nrows, ncols, re, im if has_im else None, den)

    # -- construction helpers -------------------------------------------------

    def _set(self, nrows, ncols, re, im, den):
        if im is not None and not any(any(r) for r in im):
            im = None
        g = den
        for r in re:
            for x in r:
                if g == 1:
                    break
                g = gcd(g, x)
        if im is not None:
            for r in im:
                for x in r:
                    if g == 1:
                        break
                    g = gcd(g, x)
        if g > 1:
            re = [[x // g for x in r] for r in re]
            if im is not None:
                im = [[x // g for x in r] for r in im]
            den //= g
        self.rows = nrows
        self.cols = ncols
        self._re = tuple(tuple(r) for r in re)
        self._im = None if im is None else tuple(tuple(r) for r in im)
        self._den = den
        self._hash = None

    @classmethod
    def _from_int(cls, re, im, den, shape=None):
        obj = cls.__new__(cls)
        if den < 0:
            re = [[-x for x in r] for r in re]
            if im is not None:
                im = [[-x for x in r] for r in im]
            den = -den
        nrows = len(re) if shape is None else shape[0]
        ncols = (len(re[0]) if re else 0) if shape is None else shape[1]
        obj._set(nrows, ncols, re, im, den)
        return obj

    @classmethod
    def identity(cls, n):
        return cls._from_int([[int(i == j) for j in range(n)] for i in range(n)], None, 1, (n, n))

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls._from_int([[0] * cols for _ in range(rows)], None, 1, (rows, cols))

    @classmethod
    def from_columns(cls, columns, nrows=None):
        columns = [list(c) for c in columns]
        if not columns:
            return cls.zeros(nrows or 0, 0)
        return cls([list(r) for r in zip(*columns)])

    @classmethod
    def diag(cls, values):
        values = list(values)
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks):
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        den = _lcm_all(b._den for b in blocks)
        re = [[0] * m for _ in range(n)]
        im = [[0] * m for _ in range(n)] if any(b._im is not None for b in blocks) else None
        r0 = c0 = 0
        for b in blocks:
            k = den // b._den
            for i in range(b.rows):
                for j in range(b.cols):
                    re[r0 + i][c0 + j] = k * b._re[i][j]
                    if b._im is not None:
                        im[r0 + i][c0 + j] = k * b._im[i][j]
            r0 += b.rows
            c0 += b.cols
        return cls._from_int(re, im, den, (n, m))

    # -- basic protocol -------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def den(self):
        return self._den

    def is_square(self):
        return self.rows == self.cols

    def is_real(self):
        return self._im is None

    def is_integer(self):
        return self._den == 1 and self._im is None

    def is_gaussian_integer(self):
        return self._den == 1

    def __getitem__(self, idx):
        i, j = idx
        re = Fraction(self._re[i][j], self._den)
        if self._im is None:
            return re
        im = Fraction(self._im[i][j], self._den)
        return GaussianRational(re, im) if im else re

    def tolist(self):
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def row(self, i):
        return tuple(self[i, j] for j in range(self.cols))

    def column(self, j):
        return tuple(self[i, j] for i in range(self.rows))

    def flatten(self):
        return tuple(self[i, j] for i in range(self.rows) for j in range(self.cols))

    def int_rows(self):
        """Integer numerator rows of a real matrix (the common denominator is dropped)."""
        if self._im is not None:
            raise ValueError("matrix is not real")
        return [list(r) for r in self._re]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self._den == other._den
            and self._re == other._re
            and self._im == other._im
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self._den, self._re, self._im))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"ExactMatrix([{body}])"

    def is_zero(self):
        return not any(any(r) for r in self._re) and self._im is None

    # -- arithmetic -----------------------------------------------------------

    def _aligned(self, other):
        den = lcm(self._den, other._den)
        a, b = den // self._den, den // other._den
        return den, a, b

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        den, a, b = self._aligned(other)
        re = _add_int(_scale_int(self._re, a), _scale_int(other._re, b))
        im = None
        if self._im is not None or other._im is not None:
            zi = [[0] * self.cols for _ in range(self.rows)]
            im = _add_int(_scale_int(self._im or zi, a), _scale_int(other._im or zi, b))
        return ExactMatrix._from_int(re, im, den, self.shape)

    def __neg__(self):
        im = None if self._im is None else [[-x for x in r] for r in self._im]
        return ExactMatrix._from_int([[-x for x in r] for r in self._re], im, self._den, self.shape)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        c = to_scalar(c)
        if isinstance(c, GaussianRational):
            q = _denominator(c)
            a, b = int(c.re * q), int(c.im * q)
            xr, xi = self._re, self._im
            re = [[a * x for x in r] for r in xr]
            im = [[b * x for x in r] for r in xr]
            if xi is not None:
                re = _sub_int(re, [[b * x for x in r] for r in xi])
                im = _add_int(im, [[a * x for x in r] for r in xi])
            return ExactMatrix._from_int(re, im, q * self._den, self.shape)
        a, q = c.numerator, c.denominator
        im = None if self._im is None else _scale_int(self._im, a)
        return ExactMatrix._from_int(_scale_int(self._re, a), im, q * self._den, self.shape)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = to_scalar(c)
        return self.scale(1 / c)

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        shape = (self.rows, other.cols)
        if self.cols == 0:
            return ExactMatrix.zeros(*shape)
        re = matmul_int(self._re, other._re)
        im = None
        if self._im is not None and other._im is not None:
            re = _sub_int(re, matmul_int(self._im, other._im))
            im = _add_int(matmul_int(self._re, other._im), matmul_int(self._im, other._re))
        elif self._im is not None:
            im = matmul_int(self._im, other._re)
        elif other._im is not None:
            im = matmul_int(self._re, other._im)
        return ExactMatrix._from_int(re, im, self._den * other._den, shape)

    def __pow__(self, k):
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        out = ExactMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            k >>= 1
            if k:
                base = base @ base
        return out

    @property
    def T(self):
        im = None if self._im is None else [list(c) for c in zip(*self._im)]
        re = [list(c) for c in zip(*self._re)] if self.rows else []
        return ExactMatrix._from_int(re, im, self._den, (self.cols, self.rows))

    def conj(self):
        if self._im is None:
            return self
        return ExactMatrix._from_int(
            [list(r) for r in self._re], [[-x for x in r] for r in self._im], self._den, self.shape
        )

    @property
    def H(self):
        """Conjugate transpose."""
        return self.conj().T

    def trace(self):
        s = Fraction(0)
        si = Fraction(0)
        for i in range(min(self.rows, self.cols)):
            s += self._re[i][i]
            if self._im is not None:
                si += self._im[i][i]
        s /= self._den
        si /= self._den
        return GaussianRational(s, si) if si else s

    def real_part(self):
        return ExactMatrix._from_int([list(r) for r in self._re], None, self._den, self.shape)

    def imag_part(self):
        if self._im is None:
            return ExactMatrix.zeros(self.rows, self.cols)
        return ExactMatrix._from_int([list(r) for r in self._im], None, self._den, self.shape)

    def realify(self):
        """Real ``2m x 2n`` matrix ``[[X, -Y], [Y, X]]`` of ``X + iY``."""
        x = self._re
        y = self._im or [[0] * self.cols for _ in range(self.rows)]
        top = [list(rx) + [-v for v in ry] for rx, ry in zip(x, y)]
        bot = [list(ry) + list(rx) for rx, ry in zip(x, y)]
        return ExactMatrix._from_int(top + bot, None, self._den, (2 * self.rows, 2 * self.cols))

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        re = [[self._re[i][j] for j in cols] for i in rows]
        im = None if self._im is None else [[self._im[i][j] for j in cols] for i in rows]
        return ExactMatrix._from_int(re, im, self._den, (len(rows), len(cols)))

    def hstack(self, other):
        return ExactMatrix([list(a) + list(b) for a, b in zip(self.tolist(), other.tolist())])

    def vstack(self, other):
        return ExactMatrix(self.tolist() + other.tolist())

    def kron(self, other):
        a, b = self.tolist(), other.tolist()
        out = []
        for ra in a:
            for rb in b:
                out.append([x * y for x in ra for y in rb])
        return ExactMatrix(out)

    # -- elimination ----------------------------------------------------------

    def rank(self):
        if self.rows == 0 or self.cols == 0:
            return 0
        if self._im is None:
            return rank_int(self._re, self.cols)
        return rank_int(self.realify()._re, 2 * self.cols) // 2

    def rref(self):
        """Reduced row echelon form; returns ``(pivot_columns, ExactMatrix)``."""
        if self._im is None:
            pivots, rows = rref_int(self._re, self.cols)
            frac_rows = [[Fraction(x, r[p]) for x in r] for r, p in zip(rows, pivots)]
            return pivots, ExactMatrix(frac_rows, shape=(len(frac_rows), self.cols))
        pivots, rows = _rref_field(self.tolist(), self.cols)
        return pivots, ExactMatrix(rows, shape=(len(rows), self.cols))

    def nullspace(self):
        """Canonical basis of the right kernel, as a list of column vectors (tuples)."""
        pivots, r = self.rref()
        rows = r.tolist()
        free = [j for j in range(self.cols) if j not in set(pivots)]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.cols
            v[f] = Fraction(1)
            for row, p in zip(rows, pivots):
                v[p] = -row[f]
            basis.append(tuple(v))
        return basis

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return Fraction(1)
        if self._im is None:
            return Fraction(_bareiss_det([list(r) for r in self._re]), self._den**n)
        return _field_det(self.tolist())

    def inverse(self):
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        if self._im is None:
            aug = [list(r) + [self._den * int(i == j) for j in range(n)] for i, r in enumerate(self._re)]
            pivots, rows = rref_int(aug, 2 * n)
            if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
                raise ZeroDivisionError("matrix is singular")
            return ExactMatrix([[Fraction(x, r[i]) for x in r[n:]] for i, r in enumerate(rows)])
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.tolist())]
        pivots, rows = _rref_field(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(rows) < n:
            raise ZeroDivisionError("matrix is singular")
        return ExactMatrix([r[n:] for r in rows[:n]])

    def solve(self, rhs):
        """Some solution ``x`` of ``self @ x = rhs`` (``rhs`` a matrix), or ``None``."""
        aug = self.hstack(rhs)
        pivots, r = aug.rref()
        if any(p >= self.cols for p in pivots):
            return None
        rows = r.tolist()
        sol = [[Fraction(0)] * rhs.cols for _ in range(self.cols)]
        for row, p in zip(rows, pivots):
            sol[p] = row[self.cols:]
        return ExactMatrix(sol, shape=(self.cols, rhs.cols))


def _field_pivot_rows(rows, ncols):
    a = [list(r) for r in rows]
    m = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return pivots, a[:r]


def _rref_field(rows, ncols):
    """Gauss-Jordan over any exact field (used for Q(i))."""
    pivots, a = _field_pivot_rows(rows, ncols)
    return pivots, [[to_scalar(x) for x in r] for r in a]


def _field_det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        pv = a[c][c]
        det = det * pv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / pv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return to_scalar(det)


def _bareiss_det(a):
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def as_matrix(m):
    return m if isinstance(m, ExactMatrix) else ExactMatrix(m)


def rank(m):
    """Rank of a matrix over Q or Q(i), by exact elimination."""
    return as_matrix(m).rank()


# -- subspaces ----------------------------------------------------------------


def _int_vector(v):
    v = [to_scalar(x) for x in v]
    if any(isinstance(x, GaussianRational) for x in v):
        raise ValueError("rational vector expected")
    d = _lcm_all(x.denominator for x in v)
    return [int(x * d) for x in v]


class SpanBuilder:
    """Incrementally maintained echelon basis of a rational span."""

    def __init__(self, dim):
        self.dim = dim
        self._rows = []  # (pivot, primitive int row), sorted by pivot

    def _reduce(self, v):
        for p, row in self._rows:
            x = v[p]
            if x:
                g = gcd(row[p], x)
                a, b = row[p] // g, x // g
                v = [a * s - b * t for s, t in zip(v, row)]
                d = gcd(*v)
                if d > 1:
                    v = [s // d for s in v]
        return v

    def add(self, vector):
        """Add a vector; returns True when it enlarged the span."""
        v = self._reduce(_int_vector(vector))
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            return False
        self._rows.append((lead, v))
        self._rows.sort(key=lambda t: t[0])
        return True

    def contains(self, vector):
        return not any(self._reduce(_int_vector(vector)))

    def __len__(self):
        return len(self._rows)

    def subspace(self):
        return Subspace.from_int_rows([r for _, r in self._rows], self.dim)


class Subspace:
    """A subspace of Q^d held in canonical reduced echelon form."""

    __slots__ = ("ambient", "_pivots", "_rows")

    def __init__(self, ambient, pivots, rows):
        self.ambient = ambient
        self._pivots = tuple(pivots)
        self._rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_int_rows(cls, rows, ambient):
        rows = [list(r) for r in rows]
        if not rows:
            return cls(ambient, (), ())
        pivots, red = rref_int(rows, ambient)
        return cls(ambient, pivots, red)

    @classmethod
    def span(cls, vectors, ambient):
        return cls.from_int_rows([_int_vector(v) for v in vectors], ambient)

    @classmethod
    def zero(cls, ambient):
        return cls(ambient, (), ())

    @classmethod
    def full(cls, ambient):
        return cls(ambient, range(ambient), [[int(i == j) for j in range(ambient)] for i in range(ambient)])

    @property
    def dim(self):
        return len(self._rows)

    def basis(self):
        """Canonical basis: reduced echelon rows normalized to pivot 1."""
        return [tuple(Fraction(x, r[p]) for x in r) for r, p in zip(self._rows, self._pivots)]

    def basis_matrix(self):
        """Matrix whose columns are the canonical basis vectors."""
        return ExactMatrix.from_columns(self.basis(), self.ambient)

    def contains(self, v):
        v = _int_vector(v)
        for p, row in zip(self._pivots, self._rows):
            x = v[p]
            if x:
                g = gcd(row[p], x)
                a, b = row[p] // g, x // g
                v = [a * s - b * t for s, t in zip(v, row)]
        return not any(v)

    def __add__(self, other):
        return Subspace.from_int_rows(list(self._rows) + list(other._rows), self.ambient)

    def __le__(self, other):
        return all(other.contains(r) for r in self._rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient, self._rows))

    def intersect(self, other):
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient)
        a = [list(r) for r in self._rows]
        b = [[-x for x in r] for r in other._rows]
        # columns of [A^T | -B^T]; kernel coefficients give common vectors
        m = ExactMatrix([list(c) for c in zip(*(a + b))])
        vecs = []
        for k in m.nullspace():
            coeffs = k[: len(a)]
            vecs.append([sum(c * r[j] for c, r in zip(coeffs, a)) for j in range(self.ambient)])
        return Subspace.span(vecs, self.ambient) if vecs else Subspace.zero(self.ambient)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def kernel_subspace(m):
    """Right kernel of a real matrix as a :class:`Subspace`."""
    m = as_matrix(m)
    if not m.is_real():
        raise ValueError("kernel_subspace expects a real matrix")
    if m.rows == 0:
        return Subspace.full(m.cols)
    return Subspace.span(m.nullspace(), m.cols) if m.cols else Subspace.zero(0)


# -- unipotent matrices ---------------------------------------------------------


def nilpotency_index(n):
    """Smallest ``k >= 0`` with ``n**k == 0``; ``None`` if ``n`` is not nilpotent."""
    n = as_matrix(n)
    size = n.rows
    p = ExactMatrix.identity(size)
    for k in range(size + 1):
        if p.is_zero():
            return k
        p = p @ n
    return None


def is_unipotent(m):
    """True iff ``(m - I)**rows == 0``, i.e. every eigenvalue equals 1."""
    m = as_matrix(m)
    if not m.is_square():
        raise ValueError("is_unipotent expects a square matrix")
    return ((m - ExactMatrix.identity(m.rows)) ** m.rows).is_zero()


def _require_unipotent(m):
    if not is_unipotent(m):
        raise NotUnipotent("matrix is not unipotent")


def unipotent_log(m):
    """Logarithm of a unipotent matrix via the finite series of ``log(I + N)``."""
    m = as_matrix(m)
    _require_unipotent(m)
    size = m.rows
    n = m - ExactMatrix.identity(size)
    out = ExactMatrix.zeros(size)
    p = n
    k = 1
    while not p.is_zero():
        term = p.scale(Fraction((-1) ** (k + 1), k))
        out = out + term
        p = p @ n
        k += 1
    return out


def nilpotent_exp(x):
    """Finite exponential series of a nilpotent matrix."""
    x = as_matrix(x)
    size = x.rows
    out = ExactMatrix.identity(size)
    p = ExactMatrix.identity(size)
    k = 1
    fact = 1
    while True:
        p = p @ x
        if p.is_zero():
            return out
        fact *= k
        out = out + p.scale(Fraction(1, fact))
        k += 1
        if k > size + 1:
            raise ValueError("matrix is not nilpotent")


def rank_sequence(n):
    """``[rank(n**0), rank(n**1), ...]`` down to the first zero rank."""
    n = as_matrix(n)
    seq = [n.rows]
    p = n
    while seq[-1]:
        seq.append(p.rank())
        if seq[-1] == seq[-2]:
            raise NotUnipotent("operator is not nilpotent")
        p = p @ n
    return seq


def jordan_profile_unipotent(m):
    """Jordan block sizes (descending) of a unipotent matrix, from rank data."""
    m = as_matrix(m)
    _require_unipotent(m)
    r = rank_sequence(m - ExactMatrix.identity(m.rows)) + [0]
    sizes = []
    for k in range(1, len(r) - 1):
        at_least_k = r[k - 1] - r[k]
        at_least_k1 = r[k] - r[k + 1]
        sizes.extend([k] * (at_least_k - at_least_k1))
    return tuple(sorted(sizes, reverse=True))


# -- characteristic polynomials and cyclotomic factors ------------------------


def charpoly(m):
    """Characteristic polynomial ``det(xI - m)``, coefficients low degree first.

    Faddeev-LeVerrier recursion; exact over Q and Q(i).
    """
    m = as_matrix(m)
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = ExactMatrix.zeros(n)
    ident = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ mk).trace() / k
    return coeffs


def _poly_divmod(num, den):
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            return None, num
        c //= lead
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def _euler_phi(d):
    out, k, n = d, 2, d
    while k * k <= n:
        if n % k == 0:
            while n % k == 0:
                n //= k
            out -= out // k
        k += 1
    if n > 1:
        out -= out // n
    return out


_CYCLO = {}


def cyclotomic(d):
    """Integer coefficients (low degree first) of the d-th cyclotomic polynomial."""
    if d not in _CYCLO:
        num = [-1] + [0] * (d - 1) + [1]
        for e in range(1, d):
            if d % e == 0:
                num, rem = _poly_divmod(num, cyclotomic(e))
                assert not any(rem)
        while len(num) > 1 and num[-1] == 0:
            num.pop()
        _CYCLO[d] = num
    return _CYCLO[d]


def cyclotomic_orders(poly):
    """Orders ``d`` (with multiplicity) of the cyclotomic factors of ``poly``.

    Raises :class:`NotQuasiUnipotent` if a non-cyclotomic factor remains.
    """
    p = [int(c) for c in poly]
    deg = len(p) - 1
    orders = []
    bound = 2 * deg * deg + 2
    for d in range(1, bound + 1):
        if _euler_phi(d) > deg:
            continue
        phi = cyclotomic(d)
        while len(p) >= len(phi):
            q, rem = _poly_divmod(p, phi)
            if q is None or any(rem):
                break
            p = q
            while len(p) > 1 and p[-1] == 0:
                p.pop()
            orders.append(d)
    if p not in ([1], [-1]):
        raise NotQuasiUnipotent("characteristic polynomial has a non-cyclotomic factor")
    return orders


def quasi_unipotent_order(m):
    """Smallest ``N >= 1`` with ``m**N`` unipotent, for an integer unimodular matrix."""
    m = as_matrix(m)
    if not m.is_integer() or not m.is_square():
        raise ValueError("integer square matrix expected")
    if abs(m.det()) != 1:
        raise ValueError("matrix is not invertible over the integers")
    cp = charpoly(m)
    orders = cyclotomic_orders(cp)
    n = _lcm_all(orders) if orders else 1
    if not is_unipotent(m**n):
        raise AssertionError("cyclotomic analysis disagrees with the unipotence test")
    return n


# -- inertia -----------------------------------------------------------------------


def inertia(q):
    """``(n_plus, n_zero, n_minus)`` of a symmetric rational matrix.

    Congruence reduction with symmetric pivoting; a 2x2 pivot is taken when
    every remaining diagonal entry vanishes.
    """
    q = as_matrix(q)
    if not q.is_square() or not q.is_real():
        raise NotSymmetric("real square matrix expected")
    if q != q.T:
        raise NotSymmetric("matrix is not symmetric")
    a = q.tolist()
    plus = minus = 0
    while a:
        n = len(a)
        k = next((i for i in range(n) if a[i][i] != 0), None)
        if k is not None:
            d = a[k][k]
            if d > 0:
                plus += 1
            else:
                minus += 1
            rest = [i for i in range(n) if i != k]
            a = [[a[i][j] - a[i][k] * a[k][j] / d for j in rest] for i in rest]
            continue
        pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
        if pair is None:
            break
        i0, j0 = pair
        b = a[i0][j0]
        # the block [[0, b], [b, 0]] contributes one positive and one negative square
        plus += 1
        minus += 1
        rest = [i for i in range(n) if i not in pair]
        # inverse of [[0, b], [b, 0]] is [[0, 1/b], [1/b, 0]]
        a = [
            [a[i][j] - (a[i][i0] * a[j0][j] + a[i][j0] * a[i0][j]) / b for j in rest]
            for i in rest
        ]
    zero = q.rows - plus - minus
    return plus, zero, minus


def hermitian_inertia(h):
    """Inertia of a Hermitian matrix over Q(i) via its real symmetric form."""
    h = as_matrix(h)
    if h != h.H:
        raise NotSymmetric("matrix is not Hermitian")
    p, z, m = inertia(h.realify())
    return p // 2, z // 2, m // 2
