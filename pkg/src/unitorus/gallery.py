"""Explicit example groups and a seeded generator of random unipotent torus groups.

Every case carries the torus (when there is one), the group presentation and
a record of expected invariants.  Each expected value is tagged with its
source: ``"stated"`` for values asserted for the construction, ``"derived"`` for
values computed by an independent route.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2

from .errors import BadParameters
from .groups import AffineGroupPresentation, MatrixGroupPresentation
from .hodge import TorusAutomorphism, TorusModel
from .linalg import ExactMatrix, quasi_unipotent_order

SQUARE_BLOCK = ExactMatrix([[0, -1], [1, 0]])
# Multiplication by a primitive cube root of unity on Z[w] in the basis (1, w).
EISENSTEIN_BLOCK = ExactMatrix([[0, -1], [1, -1]])


def _expect(value, source):
    return {"value": value, "source": source}


@dataclass
class GalleryCase:
    name: str
    torus: object  # TorusModel or None for abstract affine groups
    group: object  # MatrixGroupPresentation (lattice matrices) or AffineGroupPresentation
    expected: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    @property
    def is_affine(self):
        return isinstance(self.group, AffineGroupPresentation)

    def automorphisms(self):
        """Generators as :class:`TorusAutomorphism` objects."""
        if self.torus is None:
            raise BadParameters(f"case {self.name} has no torus")
        if self.is_affine:
            return [TorusAutomorphism(self.torus, g.A, g.b) for g in self.group.generators]
        return [TorusAutomorphism(self.torus, g) for g in self.group.generators]

    def h1_group(self):
        """The group acting on H^1 (transposes of the lattice matrices)."""
        if self.is_affine:
            return MatrixGroupPresentation([g.A.T for g in self.group.generators], self.group.linear_dim)
        return self.group.map(lambda m: m.T)


def elementary(n, i, j, c=1, block=None):
    """``I_{2n} + c E_ij (x) block`` on the lattice of a product of n elliptic curves."""
    block = ExactMatrix.identity(2) if block is None else block
    e = ExactMatrix([[int(a == i and b == j) for b in range(n)] for a in range(n)])
    return ExactMatrix.identity(2 * n) + e.kron(block).scale(c)


def _unitriangular_generators(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def u_n_on_torus(n):
    """``U(n, Z)`` acting on ``E_i^n`` through its elementary generators ``tau_ij``."""
    if n < 2:
        raise BadParameters("n must be at least 2")
    gens = [elementary(n, i, j) for i, j in _unitriangular_generators(n)]
    expected = {
        "nilpotency_class": _expect(n - 1, "stated"),
        "derived_length": _expect(ceil(log2(n)), "derived"),
        "h11_faithful": _expect(True, "derived"),
    }
    return GalleryCase(f"u_n_{n}", TorusModel.square(n), MatrixGroupPresentation(gens, 2 * n),
                       expected, {"n": n})


def full_jordan(n):
    """The cyclic group of ``x -> N x`` with ``N`` one full unipotent Jordan block on ``E_i^n``."""
    if n < 1:
        raise BadParameters("n must be at least 1")
    N = ExactMatrix([[int(a == b or b == a + 1) for b in range(n)] for a in range(n)])
    M = N.kron(ExactMatrix.identity(2))
    expected = {
        "growth_h11": _expect(2 * (n - 1), "stated"),
        "s_sequence": _expect(list(range(n - 1, 0, -1)), "derived"),
        "nilpotency_class": _expect(1 if n > 1 else 0, "derived"),
    }
    return GalleryCase(f"full_jordan_{n}", TorusModel.square(n), MatrixGroupPresentation([M], 2 * n),
                       expected, {"n": n})


def affine_example(n, kappa):
    """``Z^k`` (translations) extended by ``U(k, Z)`` with ``k = n - kappa``, as affine maps."""
    if not 1 <= kappa <= n - 1:
        raise BadParameters("need 1 <= kappa <= n - 1")
    k = n - kappa
    gens = []
    for i, j in _unitriangular_generators(k):
        A = ExactMatrix([[int(a == b or (a == i and b == j)) for b in range(k)] for a in range(k)])
        gens.append((A, [0] * k))
    for i in range(k):
        gens.append((ExactMatrix.identity(k), [int(a == i) for a in range(k)]))
    expected = {
        "nilpotency_class": _expect(k, "stated"),
        "embedding_matches_u_k_plus_1": _expect(True, "derived"),
    }
    return GalleryCase(f"affine_{n}_{kappa}", None, AffineGroupPresentation(k, gens), expected,
                       {"n": n, "kappa": kappa})


def u_k_generators(k):
    """Elementary generators ``I + E_ij`` of ``U(k, Z)``."""
    return [ExactMatrix([[int(a == b or (a == i and b == j)) for b in range(k)] for a in range(k)])
            for i, j in _unitriangular_generators(k)]


def affine_embedding_matches(case):
    """The block images of the affine generators are exactly the generators of ``U(k+1, Z)``."""
    k = case.group.linear_dim
    blocks = {g.block() for g in case.group.generators}
    return blocks == set(u_k_generators(k + 1))


def eisenstein_cm(n):
    """Lattice matrix of the scalar ``-w`` on ``E_w^n``."""
    return ExactMatrix.block_diag(*([-EISENSTEIN_BLOCK] * n))


def eisenstein_quotient_check(n):
    """``-w I_n`` commutes with the images of the ``tau_ij`` on ``E_w^n``, which commute
    with the complex multiplication, and ``-w`` has order exactly 6."""
    if n < 2:
        raise BadParameters("n must be at least 2")
    cm = eisenstein_cm(n)
    w = ExactMatrix.block_diag(*([EISENSTEIN_BLOCK] * n))
    for i, j in _unitriangular_generators(n):
        g = elementary(n, i, j)
        if g @ w != w @ g or g @ cm != cm @ g:
            return False
    return quasi_unipotent_order(cm) == 6 and cm**6 == ExactMatrix.identity(2 * n)


def eisenstein_case(n):
    """The ``U(n, Z)`` group of the Eisenstein construction.

    Lattice matrices are the same ``tau_ij`` images; since the Eisenstein
    complex structure is irrational in lattice coordinates, the case carries
    the square structure for the Hodge-theoretic analysis and records the
    Eisenstein check separately.
    """
    case = u_n_on_torus(n)
    case.name = f"eisenstein_{n}"
    case.expected["eisenstein_descends"] = _expect(True, "derived")
    case.expected["cm_order"] = _expect(6, "derived")
    case.metadata = {"complex_structure": "square", "eisenstein_check": str(eisenstein_quotient_check(n)).lower()}
    return case


def subtorus_translation_case(n, q=3, full=False):
    """``U(n, Z)`` on ``E_i^n`` with rational translations of the stable subtorus ``x_n = 0``.

    With ``full=True`` a translation along the last factor is added; the subtorus
    hypothesis then fails and a weight-n commutator survives.
    """
    if n < 2:
        raise BadParameters("n must be at least 2")
    d = 2 * n
    gens = [(g, [0] * d) for g in (elementary(n, i, j) for i, j in _unitriangular_generators(n))]
    last = n if full else n - 1
    for k in range(last):
        for r in range(2):
            t = [Fraction(0)] * d
            t[2 * k + r] = Fraction(1, q)
            gens.append((ExactMatrix.identity(d), t))
    expected = {"weight_n_commutators_trivial": _expect(not full, "stated" if not full else "derived")}
    name = f"subtorus_{n}" if not full else f"fulltranslation_{n}"
    return GalleryCase(name, TorusModel.square(n), AffineGroupPresentation(d, gens, torus=True), expected,
                       {"n": n, "q": q, "full": full})


def random_unipotent_group(n, generators, seed, bound=3):
    """Seeded random group of unipotent lattice automorphisms commuting with the square ``J``.

    Each generator is a product of one to ``n + 2`` elementary block matrices
    ``I + c E_ij (x) Z`` with ``i < j``, ``0 < |c| <= bound`` and ``Z`` in ``{I, J}``,
    then all generators are conjugated by one random elementary matrix (any
    ``i != j``), which keeps them unipotent and holomorphic.
    """
    if n < 1 or generators < 1:
        raise BadParameters("need n >= 1 and generators >= 1")
    rng = random.Random(seed)
    blocks = [ExactMatrix.identity(2), SQUARE_BLOCK]
    ident = ExactMatrix.identity(2 * n)
    pairs = _unitriangular_generators(n)

    def coeff():
        return rng.choice([-1, 1]) * rng.randint(1, bound)

    gens = []
    for _ in range(generators):
        g = ident
        if pairs:
            while g == ident:
                for _ in range(rng.randint(1, n + 2)):
                    i, j = rng.choice(pairs)
                    g = g @ elementary(n, i, j, coeff(), rng.choice(blocks))
        gens.append(g)
    if n >= 2:
        i, j = rng.sample(range(n), 2)
        P = elementary(n, i, j, rng.choice([-1, 1]), rng.choice(blocks))
        Pi = P.inverse()
        gens = [P @ g @ Pi for g in gens]
    return GalleryCase(f"random_{n}_{generators}_{seed}", TorusModel.square(n),
                       MatrixGroupPresentation(gens, 2 * n), {}, {"n": n, "generators": generators, "seed": seed})


BUILDERS = {
    "u_n": (u_n_on_torus, 1),
    "full_jordan": (full_jordan, 1),
    "affine": (affine_example, 2),
    "eisenstein": (eisenstein_case, 1),
    "subtorus": (subtorus_translation_case, 1),
}


def build(name, params):
    """Gallery case by name with integer parameters, as used on the command line."""
    if name not in BUILDERS:
        raise BadParameters(f"unknown gallery case {name!r}; known: {', '.join(sorted(BUILDERS))}")
    fn, arity = BUILDERS[name]
    if len(params) != arity:
        raise BadParameters(f"{name} takes {arity} integer parameter(s)")
    return fn(*[int(p) for p in params])


def standard_cases(max_n=4):
    """Cases used by ``verify-all``: every named construction at small sizes."""
    cases = [u_n_on_torus(n) for n in range(2, max_n + 1)]
    cases += [full_jordan(n) for n in range(2, max_n + 1)]
    cases += [affine_example(n, kappa) for n in range(2, 7) for kappa in range(1, n)]
    cases += [eisenstein_case(n) for n in (2, 3)]
    cases += [subtorus_translation_case(n) for n in range(2, max_n + 1)]
    return cases
