"""Polynomial growth of ``(g^m)^*`` on the Hodge pieces of a torus.

For a unipotent ``A`` on V^{1,0} the action on H^{p,q} is
``C_p(A) (x) C_q(conj A)``.  If ``U - I`` and ``W - I`` have nilpotency
indices ``a`` and ``b``, then ``U (x) W - I = (U - I) (x) W + I (x) (W - I)``
is a sum of commuting nilpotents whose index is exactly ``a + b - 1``.
Hence the growth exponent is ``e(C_p(A)) + e(C_q(A))``.
"""

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import BadDegree, InvariantViolation, NotKahler, NotUnipotent
from .hodge import (
    HermitianClass,
    action_on_hpq,
    compound,
    is_kahler,
    pullback_hermitian,
)
from .linalg import ExactMatrix, is_unipotent, jordan_profile_unipotent, nilpotency_index
from .scalars import GaussianRational


def _require_unipotent(g):
    if not is_unipotent(g.M):
        raise NotUnipotent("automorphism is not unipotent on H^1")


@dataclass
class ExpansionRecord:
    """``omega_j = (g^* - Id)^j omega`` for ``j = 0..top_index``."""

    omega_classes: list
    top_index: int

    def omega(self, j):
        if j <= self.top_index:
            return self.omega_classes[j]
        n = self.omega_classes[0].n
        return HermitianClass(ExactMatrix.zeros(n))

    def reconstruct(self, m):
        """``sum_j C(m, j) omega_j``."""
        out = self.omega_classes[0].H.scale(0)
        for j, w in enumerate(self.omega_classes):
            out = out + w.H.scale(comb(m, j))
        return HermitianClass(out)


def expansion_classes(g, omega, check_m=None):
    """The finite expansion of ``(g^m)^* omega``; the reconstruction identity is verified."""
    _require_unipotent(g)
    if not is_kahler(omega):
        raise NotKahler("omega is not a Kähler class")
    classes = [omega]
    cur = omega
    while True:
        nxt = HermitianClass(pullback_hermitian(g, cur).H - cur.H)
        if nxt.is_zero():
            break
        classes.append(nxt)
        cur = nxt
        if len(classes) > g.n * g.n + 1:
            raise InvariantViolation("(g^* - Id) is not nilpotent on H^{1,1}")
    rec = ExpansionRecord(classes, len(classes) - 1)
    last = rec.top_index + 2 if check_m is None else check_m
    power = omega
    for m in range(last + 1):
        if rec.reconstruct(m) != power:
            raise InvariantViolation(f"expansion fails to reconstruct (g^{m})^* omega")
        power = pullback_hermitian(g, power)
    return rec


def _excess(mat):
    """Nilpotency index of ``mat - I`` minus one (the largest Jordan block minus one)."""
    k = nilpotency_index(mat - ExactMatrix.identity(mat.rows))
    if k is None:
        raise NotUnipotent("action is not unipotent")
    return max(k - 1, 0)


def growth_exponent(g, p, q):
    """Degree ``k`` with ``||(g^m)^*|| ~ m^k`` on H^{p,q}."""
    _require_unipotent(g)
    n = g.n
    if not (0 <= p <= n and 0 <= q <= n):
        raise BadDegree(f"degree ({p},{q}) outside 0..{n}")
    A = g.A
    return _excess(compound(A, p)) + _excess(compound(A.conj(), q))


def growth_exponent_direct(g, p, q):
    """Cross-check: largest Jordan block of the full H^{p,q} action, minus one."""
    _require_unipotent(g)
    prof = jordan_profile_unipotent(action_on_hpq(g, p, q))
    return prof[0] - 1 if prof else 0


def general_bound(n, p, q):
    """``(p' + q')(n - 1)`` with ``p' = min(p, n - p)``."""
    return (min(p, n - p) + min(q, n - q)) * (n - 1)


def improved_bound(n, p):
    """Bound ``2p(n-1) - 2`` on H^{p,p} for ``p >= 2``."""
    return 2 * p * (n - 1) - 2


def verify_growth_bounds(g, degrees=None):
    """Exponents on every H^{p,q} with their bound checks; ``passed`` is the conjunction."""
    _require_unipotent(g)
    n = g.n
    if degrees is None:
        degrees = [(p, q) for p in range(n + 1) for q in range(n + 1)]
    exps = {(p, q): growth_exponent(g, p, q) for p in range(n + 1) for q in range(n + 1)}
    rows = []
    ok = True
    for p, q in sorted(degrees):
        e = exps[(p, q)]
        tb = general_bound(n, p, q)
        entry = {
            "p": p,
            "q": q,
            "exponent": e,
            "general_bound": tb,
            "general_ok": e <= tb,
            "dual_exponent": exps[(n - p, n - q)],
            "duality_ok": e == exps[(n - p, n - q)],
        }
        if p == q and p >= 2:
            entry["improved_bound"] = improved_bound(n, p)
            entry["improved_ok"] = e <= entry["improved_bound"]
            ok = ok and entry["improved_ok"]
        ok = ok and entry["general_ok"] and entry["duality_ok"]
        rows.append(entry)
    even = exps[(1, 1)] % 2 == 0
    return {"n": n, "degrees": rows, "h11_exponent": exps[(1, 1)], "h11_even": even,
            "passed": ok and even}


def norm_growth_sample(g, p, q, m):
    """Largest absolute real or imaginary part among the entries of the m-th power."""
    mat = action_on_hpq(g, p, q) ** m
    best = Fraction(0)
    for i in range(mat.rows):
        for j in range(mat.cols):
            x = mat[i, j]
            if isinstance(x, GaussianRational):
                best = max(best, abs(x.re), abs(x.im))
            else:
                best = max(best, abs(x))
    return best


def fitted_slope(g, p, q, exponents=range(4, 13)):
    """Least-squares slope of log(norm) against log(m) over ``m = 2^k``.

    Float arithmetic is confined to the fit; the samples themselves are exact.
    """
    xs, ys = [], []
    for k in exponents:
        m = 2**k
        v = norm_growth_sample(g, p, q, m)
        xs.append(math.log(m))
        ys.append(math.log(v) if v > 0 else 0.0)
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def random_kahler(n, rng, bound=4):
    """A random positive definite Hermitian class ``B B^* + I`` with small entries."""
    rows = [[GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(n)]
            for _ in range(n)]
    B = ExactMatrix(rows)
    return HermitianClass(B @ B.H + ExactMatrix.identity(n))


def generic_top_index(g, rng=None, cap=5):
    """Top expansion index for a generic Kähler class.

    Samples until two consecutive samples agree, at most ``cap`` samples,
    and returns the maximum seen.
    """
    rng = rng or random.Random(0)
    seen = []
    for _ in range(cap):
        seen.append(expansion_classes(g, random_kahler(g.n, rng)).top_index)
        if len(seen) >= 2 and seen[-1] == seen[-2]:
            break
    return max(seen)
