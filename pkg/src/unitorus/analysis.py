"""Report builders behind the command line verbs.

Every function returns a JSON-ready dict with a ``violations`` list (checks
that a proven statement guarantees, found false) and an ``undetermined`` list
(for instance no joint invariant chain was found).  No timing or other
nondeterministic data enters a report.
"""

import random
from fractions import Fraction
from itertools import product

from .errors import ChainStalled, LChainNotFound, NotQuasiUnipotent
from .filtration import (
    DEFAULT_FAMILY_SCALE,
    analyze_s_sequence,
    build_chain_cyclic,
    build_chain_group,
    chain_positivity,
    compute_spaces,
    derived_witness_scale,
    h_level,
    hodge_riemann_inertia,
    lineality_check,
    primitive_root_membership,
    product_vanishing_check,
    salience_check,
)
from .gallery import affine_embedding_matches, eisenstein_quotient_check, eisenstein_cm, random_unipotent_group
from .groups import (
    MatrixGroupPresentation,
    affine_lcs_oracle,
    annihilation_check,
    derived_length,
    lcs_oracle,
    log2_bound,
    nilpotency_class,
)
from .growth import (
    expansion_classes,
    fitted_slope,
    growth_exponent_direct,
    random_kahler,
    verify_growth_bounds,
)
from .hodge import (
    HermitianClass,
    TorusAutomorphism,
    action_on_hpq,
    action_on_hpq_bruteforce,
    intersection_number,
    real_h11_action,
)
from .linalg import ExactMatrix, is_unipotent, quasi_unipotent_order


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return round(x, 6)
    return str(x)


def _report(**kw):
    kw.setdefault("violations", [])
    kw.setdefault("undetermined", [])
    return kw


def _automorphisms(gf):
    return [TorusAutomorphism(gf.torus, M) for M in gf.matrices]


def _class_with_oracle(group):
    c = nilpotency_class(group)
    agrees = lcs_oracle(group, c + 1) and (c == 0 or not lcs_oracle(group, c))
    return c, agrees


def _affine_class(group, cap):
    for w in range(cap + 1):
        if affine_lcs_oracle(group, w + 1):
            return w
    return None


# -- analyze-group ----------------------------------------------------------------


def analyze_group(gf):
    """Unipotence, quasi-unipotent orders, class and derived length on H^1 and H^{1,1}."""
    n = gf.n
    rep = _report(n=n, generator_count=len(gf.matrices))
    gens = []
    powers = []
    for k, M in enumerate(gf.matrices):
        entry = {"index": k, "unipotent": is_unipotent(M)}
        try:
            N = quasi_unipotent_order(M)
        except NotQuasiUnipotent:
            N = None
        entry["quasi_unipotent_order"] = N
        if not entry["unipotent"]:
            entry["diagnostic"] = {"error": "NotUnipotent", "N": N}
        gens.append(entry)
        if N is not None:
            powers.append(M**N)
    rep["generators"] = gens
    rep["unipotent"] = all(g["unipotent"] for g in gens)
    if len(powers) != len(gf.matrices):
        rep["undetermined"].append("some generator is not quasi-unipotent")
        return rep
    target = "group" if rep["unipotent"] else "power_subgroup"
    h1 = MatrixGroupPresentation([P.T for P in powers], 2 * n)
    c, agrees = _class_with_oracle(h1)
    ell = derived_length(h1)
    bound = log2_bound(c) if c else 0
    info = {
        "nilpotency_class": c,
        "oracle_agrees": agrees,
        "derived_length": ell,
        "derived_length_bound": bound,
        "derived_length_bound_ok": ell <= bound,
        "class_le_n_minus_1": c <= max(n - 1, 0),
    }
    auts = [TorusAutomorphism(gf.torus, P) for P in powers]
    h11 = MatrixGroupPresentation([real_h11_action(a) for a in auts], n * n, integral=False)
    ident = ExactMatrix.identity(n * n)
    h11_class = nilpotency_class(h11)
    h11_len = derived_length(h11)
    info["h11"] = {
        "nilpotency_class": h11_class,
        "derived_length": h11_len,
        "derived_length_le_n_minus_1": h11_len <= max(n - 1, 0),
        "faithful_generators": [a != ident for a in h11.generators],
    }
    rep[target] = info
    for key in ("oracle_agrees", "derived_length_bound_ok", "class_le_n_minus_1"):
        if not info[key]:
            rep["violations"].append(f"{target}.{key}")
    if not info["h11"]["derived_length_le_n_minus_1"]:
        rep["violations"].append(f"{target}.h11.derived_length_le_n_minus_1")
    if gf.has_translations:
        rep["affine"] = _affine_info(gf)
        if rep["affine"].get("weight_n_trivial") is False and gf.translation_mode == "torus" \
                and rep["affine"].get("stable_subtorus"):
            rep["violations"].append("affine.weight_n_trivial")
    return rep


def _stable_coordinate_subtorus(gf):
    """True when all translations lie in a proper coordinate subtorus ``x_k = 0`` that is stable."""
    n = gf.n
    for k in range(n):
        rows = (2 * k, 2 * k + 1)
        if any(t is not None and any(t[r] % 1 for r in rows) for t in gf.translations):
            continue
        ok = True
        for M in gf.matrices:
            for r in rows:
                for c in range(2 * n):
                    if c not in rows and M[r, c] != 0:
                        ok = False
        if ok:
            return True
    return False


def _affine_info(gf):
    group = gf.group()
    n = gf.n
    cap = 2 * n + 1
    info = {"translation_mode": gf.translation_mode, "nilpotency_class": _affine_class(group, cap)}
    if gf.translation_mode == "torus":
        info["stable_subtorus"] = _stable_coordinate_subtorus(gf)
        info["weight_n_trivial"] = affine_lcs_oracle(group, n)
    return info


# -- growth ------------------------------------------------------------------------


def _words(k, max_len):
    for length in range(1, max_len + 1):
        yield from product(range(k), repeat=length)


def growth_report(gf, pq="all", samples=0, max_word_len=1):
    """Growth exponents of every generator and of positive words up to ``max_word_len``."""
    n = gf.n
    auts = _automorphisms(gf)
    if pq == "all":
        degrees = [(p, q) for p in range(n + 1) for q in range(n + 1)]
    else:
        degrees = [tuple(pq)]
    rep = _report(n=n, degrees=[list(d) for d in degrees])
    seen = set()
    elements = []
    for word in _words(len(auts), max_word_len):
        g = auts[word[0]]
        for idx in word[1:]:
            g = g @ auts[idx]
        if g.M in seen:
            continue
        seen.add(g.M)
        name = "*".join(f"g{i}" for i in word)
        entry = {"element": name}
        if not g.is_unipotent():
            entry["skipped"] = "NotUnipotent"
            elements.append(entry)
            continue
        res = verify_growth_bounds(g, degrees)
        rows = []
        for row in res["degrees"]:
            direct = growth_exponent_direct(g, row["p"], row["q"])
            row["direct_exponent"] = direct
            row["direct_agrees"] = direct == row["exponent"]
            if samples:
                slope = fitted_slope(g, row["p"], row["q"], range(4, 4 + samples))
                row["fitted_slope"] = round(slope, 4)
            rows.append(row)
            for key in ("general_ok", "duality_ok", "improved_ok", "direct_agrees"):
                if row.get(key) is False:
                    rep["violations"].append(f"{name}.({row['p']},{row['q']}).{key}")
        entry.update(rows=rows, h11_exponent=res["h11_exponent"], h11_even=res["h11_even"])
        if not res["h11_even"]:
            rep["violations"].append(f"{name}.h11_even")
        elements.append(entry)
    rep["elements"] = elements
    return rep


def growth_csv(rep):
    lines = ["element,p,q,exponent,general_bound,general_ok"]
    for e in rep["elements"]:
        for r in e.get("rows", []):
            lines.append(f"{e['element']},{r['p']},{r['q']},{r['exponent']},{r['general_bound']},"
                         f"{str(r['general_ok']).lower()}")
    return "\n".join(lines) + "\n"


# -- decompose ----------------------------------------------------------------------


def _random_vectors(rng, dim, count, bound=3):
    return [[Fraction(rng.randint(-bound, bound)) for _ in range(dim)] for _ in range(count)]


def _in_space_samples(rng, space, count):
    basis = space.basis()
    out = []
    for _ in range(count):
        coeffs = [rng.randint(-2, 2) for _ in basis]
        out.append([sum((c * v[k] for c, v in zip(coeffs, basis)), Fraction(0)) for k in range(space.ambient)])
    return out


def _sequence_info(g, chain, spaces, omega, rng, family_scale):
    rep1 = analyze_s_sequence(g, chain, omega, spaces)
    other = random_kahler(chain.n, rng)
    rep2 = analyze_s_sequence(g, chain, other, spaces)
    info = {
        "s": rep1.s,
        "r": rep1.r,
        "lambdas": rep1.lambdas,
        "checks": rep1.checks,
        "second_kahler_s": rep2.s,
        "second_kahler_ok": rep2.ok,
        "independent_of_kahler": rep1.s == rep2.s,
    }
    lvl = h_level(g, chain, spaces)
    lvl2 = h_level(g @ g, chain, spaces)
    info["h_level"] = lvl
    info["h_level_square"] = lvl2
    rec = expansion_classes(g, omega)
    w = []
    for j, (sj, lam) in enumerate(zip(rep1.s, rep1.lambdas), start=1):
        c = rec.omega(2 * j - 1)
        scale = derived_witness_scale(chain, rec, j, lam)
        w.append({
            "j": j,
            "level": sj,
            "scale": scale,
            "member_with_witness": primitive_root_membership(chain, spaces, sj, c, scale=scale,
                                                             family_scale=family_scale),
            "member_without_witness": primitive_root_membership(chain, spaces, sj, c, witness=None,
                                                                family_scale=family_scale),
        })
    info["primitive_roots"] = w
    bad = [k for k, v in rep1.checks.items() if not v]
    if not rep2.ok:
        bad.append("second_kahler")
    if not info["independent_of_kahler"]:
        bad.append("independent_of_kahler")
    if lvl2 > lvl:
        bad.append("h_level_monotone")
    bad += [f"primitive_root_{e['j']}" for e in w if not e["member_with_witness"]]
    return info, bad


def decompose_report(gf, generator=None, family_scale=DEFAULT_FAMILY_SCALE, seed=0, samples=20):
    """Invariant chain, filtration spaces, s-sequences, levels and the positivity checks."""
    n = gf.n
    auts = _automorphisms(gf)
    rep = _report(n=n, generator=generator, family_scale=Fraction(family_scale))
    if any(not a.is_unipotent() for a in auts):
        rep["undetermined"].append("non-unipotent generator")
        return rep
    rng = random.Random(seed)
    omega = HermitianClass(ExactMatrix.identity(n))
    targets = list(range(len(auts))) if generator is None else [generator]
    try:
        if generator is not None:
            chain = build_chain_cyclic(auts[generator], omega)
        else:
            chain = build_chain_group(auts, omega)
    except (LChainNotFound, ChainStalled) as exc:
        rep["undetermined"].append(f"{type(exc).__name__}: {exc}")
        return rep
    rep["chain"] = {
        "certificates": chain.certificates,
        "M": [m.real_coords() for m in chain.M],
        "positivity": chain_positivity(chain),
    }
    spaces = compute_spaces(chain, strict=False)
    rep["spaces"] = spaces.dims()
    rep["spaces"]["checks"] = spaces.checks
    rep["violations"] += [f"spaces.{k}" for k, v in sorted(spaces.checks.items()) if not v]
    if any(v <= 0 for v in rep["chain"]["positivity"]):
        rep["violations"].append("chain.positivity")
    seqs = {}
    for k in targets:
        info, bad = _sequence_info(auts[k], chain, spaces, omega, rng, family_scale)
        seqs[f"g{k}"] = info
        rep["violations"] += [f"g{k}.{b}" for b in bad]
    rep["sequences"] = seqs
    hr = []
    for i in range(n - 1):
        worst = None
        for _ in range(samples):
            tup = [random_kahler(n, rng).to_hodge() for _ in range(n - i - 1)]
            res = hodge_riemann_inertia(chain, spaces, i, tup)
            ok = res["P"][0] == 0 and res["F_next"][0] == 0
            if worst is None or not ok:
                worst = {"level": i, "P": res["P"], "F_next": res["F_next"], "n_plus_zero": ok}
            if not ok:
                rep["violations"].append(f"hodge_riemann.level{i}")
                break
        if worst is not None:
            hr.append(worst)
    rep["hodge_riemann"] = hr
    cone = {"product_vanishing": product_vanishing_check(chain)}
    cone["lineality"] = all(
        lineality_check(chain, spaces, i, _in_space_samples(rng, spaces.F[i], 4), family_scale)
        for i in range(1, n + 1))
    cone["salience_partial"] = salience_check(chain, _random_vectors(rng, n * n, 6))
    cone["N_vanishes"] = not any(spaces.N_dims)
    rep["cone_checks"] = cone
    rep["violations"] += [f"cone.{k}" for k, v in sorted(cone.items()) if not v]
    return rep


# -- gallery --------------------------------------------------------------------------


def _expect_ok(key, expected, computed):
    return {"key": key, "expected": expected["value"], "source": expected["source"], "computed": computed,
            "ok": expected["value"] == computed}


def case_report(case, gf, family_scale=DEFAULT_FAMILY_SCALE, seed=0, samples=20):
    """Full suite for a gallery case and comparison with its expected values."""
    rep = _report(case=case.name)
    exp = case.expected
    computed = {}
    if case.torus is None:
        k = case.group.linear_dim
        computed["nilpotency_class"] = _affine_class(case.group, k + 2)
        computed["embedding_matches_u_k_plus_1"] = affine_embedding_matches(case)
        rep["analysis"] = {"linear_dim": k}
    else:
        rep["analysis"] = analyze_group(gf)
        rep["growth"] = growth_report(gf)
        linear = rep["analysis"].get("group", {})
        computed["nilpotency_class"] = linear.get("nilpotency_class")
        computed["derived_length"] = linear.get("derived_length")
        computed["h11_faithful"] = all(linear.get("h11", {}).get("faithful_generators", [False]))
        first = rep["growth"]["elements"][0] if rep["growth"]["elements"] else {}
        computed["growth_h11"] = first.get("h11_exponent")
        if case.is_affine:
            computed["weight_n_commutators_trivial"] = affine_lcs_oracle(case.group, case.params["n"])
        if gf.n <= 4:
            dec = decompose_report(gf, 0 if len(gf.matrices) == 1 else None, family_scale, seed, samples)
            rep["decompose"] = dec
            if dec.get("sequences"):
                computed["s_sequence"] = dec["sequences"]["g0"]["s"]
        if "eisenstein_descends" in exp:
            computed["eisenstein_descends"] = eisenstein_quotient_check(gf.n)
            computed["cm_order"] = quasi_unipotent_order(eisenstein_cm(gf.n))
        for sub in ("analysis", "growth", "decompose"):
            if sub in rep:
                rep["violations"] += [f"{sub}.{v}" for v in rep[sub]["violations"]]
                rep["undetermined"] += [f"{sub}.{v}" for v in rep[sub]["undetermined"]]
    checks = [_expect_ok(k, exp[k], computed.get(k)) for k in sorted(exp)]
    rep["expected"] = checks
    rep["violations"] += [f"expected.{c['key']}" for c in checks if not c["ok"]]
    return rep


# -- fuzz ------------------------------------------------------------------------------


FUZZ_INVARIANTS = (
    "unipotent_holomorphic",
    "class_le_n_minus_1",
    "oracle_agrees",
    "derived_length_bound",
    "h11_derived_length_le_n_minus_1",
    "growth_bounds",
    "h11_even",
    "annihilation",
    "s_sequence",
    "group_chain",
)


def fuzz_case(n, generators, seed, family_scale=DEFAULT_FAMILY_SCALE, filtration_max_n=4):
    """All invariant suites on one random group; each invariant is pass, fail, skip or undetermined."""
    case = random_unipotent_group(n, generators, seed)
    auts = case.automorphisms()
    res = {}
    res["unipotent_holomorphic"] = all(a.is_unipotent() and a.M @ case.torus.J == case.torus.J @ a.M
                                       for a in auts)
    h1 = case.h1_group()
    c, agrees = _class_with_oracle(h1)
    ell = derived_length(h1)
    res["class_le_n_minus_1"] = c <= max(n - 1, 0)
    res["oracle_agrees"] = agrees
    res["derived_length_bound"] = ell <= (log2_bound(c) if c else 0)
    h11 = MatrixGroupPresentation([real_h11_action(a) for a in auts], n * n, integral=False)
    res["h11_derived_length_le_n_minus_1"] = derived_length(h11) <= max(n - 1, 0)
    growth = [verify_growth_bounds(a) for a in auts]
    res["growth_bounds"] = not any(_bounds_only_failed(g) for g in growth)
    res["h11_even"] = all(g["h11_even"] for g in growth)
    rng = random.Random(seed)
    hs = [rng.choice(auts) for _ in range(n)]
    gs = [rng.choice(auts) for _ in range(n)]
    res["annihilation"] = annihilation_check(hs, gs).is_zero()
    extra = {"h11_exponents": [g["h11_exponent"] for g in growth],
             "hpp_exponents": {p: max(_exp(g, p, p) for g in growth) for p in range(2, n)}}
    if 1 <= n <= filtration_max_n:
        omega = HermitianClass(ExactMatrix.identity(n))
        ok = True
        seqs = []
        for a in auts:
            chain = build_chain_cyclic(a, omega)
            spaces = compute_spaces(chain, strict=False)
            r1 = analyze_s_sequence(a, chain, omega, spaces)
            r2 = analyze_s_sequence(a, chain, random_kahler(n, rng), spaces)
            ok = ok and spaces.ok and r1.ok and r2.ok and r1.s == r2.s
            seqs.append(r1.s)
        res["s_sequence"] = ok
        extra["s_sequences"] = seqs
        try:
            build_chain_group(auts, omega)
            res["group_chain"] = True
        except (LChainNotFound, ChainStalled):
            res["group_chain"] = "undetermined"
    else:
        res["s_sequence"] = "skip"
        res["group_chain"] = "skip"
    return {"case": case.name, "results": res, "extra": extra}


def _exp(rep, p, q):
    return next(r["exponent"] for r in rep["degrees"] if r["p"] == p and r["q"] == q)


def _bounds_only_failed(rep):
    return any(not r["general_ok"] or not r["duality_ok"] or r.get("improved_ok") is False for r in rep["degrees"])


def summarize_fuzz(n, count, seed, results):
    summary = {}
    for key in FUZZ_INVARIANTS:
        tally = {"pass": 0, "fail": 0, "skip": 0, "undetermined": 0}
        for r in results:
            v = r["results"][key]
            tally["pass" if v is True else "fail" if v is False else v] += 1
        summary[key] = tally
    failures = [{"case": r["case"], "invariant": k} for r in results for k, v in r["results"].items() if v is False]
    best = {}
    for r in results:
        for p, e in r["extra"]["hpp_exponents"].items():
            if e > best.get(p, (-1, None))[0]:
                best[p] = (e, r["case"])
    sharp = {f"H^{p},{p}": {"best_exponent": e, "bound": 2 * p * (n - 1) - 2, "case": name}
             for p, (e, name) in sorted(best.items())}
    rep = _report(n=n, count=count, seed=seed, summary=summary, failures=failures, sharpness_search=sharp)
    rep["violations"] = [f"{f['case']}.{f['invariant']}" for f in failures]
    rep["undetermined"] = [f"{r['case']}.group_chain" for r in results if r["results"]["group_chain"] == "undetermined"]
    return rep


def fuzz_seeds(seed, count):
    """Deterministic per-case seeds."""
    rng = random.Random(seed)
    return [rng.getrandbits(63) for _ in range(count)]


# -- oracle equivalences -------------------------------------------------------------------


def oracle_report(seed=0, tuples=10, max_n=3):
    """Intersection numbers two ways and the H^{p,q} action two ways on random inputs."""
    rng = random.Random(seed)
    rep = _report()
    inter = {}
    for n in range(2, 5):
        ok = True
        for _ in range(tuples):
            cls = [random_kahler(n, rng) for _ in range(n)]
            ok = ok and intersection_number(cls, "polarization") == intersection_number(cls, "wedge")
        inter[str(n)] = ok
        if not ok:
            rep["violations"].append(f"intersection.n{n}")
    rep["intersection_agree"] = inter
    act = {}
    for n in range(1, max_n + 1):
        case = random_unipotent_group(n, 1, rng.getrandbits(32))
        g = case.automorphisms()[0]
        ok = all(action_on_hpq(g, p, q) == action_on_hpq_bruteforce(g, p, q)
                 for p in range(n + 1) for q in range(n + 1))
        act[str(n)] = ok
        if not ok:
            rep["violations"].append(f"action.n{n}")
    rep["action_agree"] = act
    return rep


def exit_code(reports):
    """3 if any violation, else 4 if anything undetermined, else 0."""
    if any(r.get("violations") for r in reports):
        return 3
    if any(r.get("undetermined") for r in reports):
        return 4
    return 0

