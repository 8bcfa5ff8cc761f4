"""Acceptance criteria, one test each.  Every test records a PASS/FAIL line that
is printed in the terminal summary."""

import random
import time
from math import ceil, log2

from conftest import record_criterion
from unitorus import cli
from unitorus.filtration import (
    analyze_s_sequence,
    build_chain_cyclic,
    build_chain_group,
    compute_spaces,
    hodge_riemann_inertia,
)
from unitorus.gallery import (
    affine_embedding_matches,
    affine_example,
    full_jordan,
    random_unipotent_group,
    standard_cases,
    subtorus_translation_case,
    u_k_generators,
)
from unitorus.groups import (
    MatrixGroupPresentation,
    affine_lcs_oracle,
    affine_nilpotency_class,
    affine_to_unipotent,
    annihilation_check,
    derived_length,
    lcs_oracle,
    log2_bound,
    nilpotency_class,
    verify_affine_embedding,
)
from unitorus.growth import general_bound, growth_exponent, improved_bound, random_kahler
from unitorus.hodge import (
    HermitianClass,
    action_on_hpq,
    action_on_hpq_bruteforce,
    intersection_number,
    real_h11_action,
)
from unitorus.linalg import ExactMatrix

FUZZ_SEED = 20240601


def omega(n):
    return HermitianClass(ExactMatrix.identity(n))


def torus_cases():
    return [c for c in standard_cases() if c.torus is not None]


def gallery_automorphisms(max_n=4):
    out = []
    for case in torus_cases():
        if case.torus.n > max_n:
            continue
        for g in case.automorphisms():
            if real_h11_action(g) != ExactMatrix.identity(g.n * g.n):
                out.append((case.name, g))
    return out


def fuzz_groups(n, count, generators=2, salt=0):
    rng = random.Random(FUZZ_SEED + 1000 * n + salt)
    return [random_unipotent_group(n, generators, rng.getrandbits(63)) for _ in range(count)]


def fuzz_automorphisms(n, count, salt=0):
    return [c.automorphisms()[0] for c in fuzz_groups(n, count, 1, salt)]


def test_criterion_01_u_n_class():
    t = time.perf_counter()
    bad = []
    for n in range(2, 7):
        g = MatrixGroupPresentation(u_k_generators(n), n)
        c = nilpotency_class(g)
        if not (c == n - 1 and lcs_oracle(g, n) and not lcs_oracle(g, n - 1)):
            bad.append(n)
    dt = time.perf_counter() - t
    ok = not bad and dt < 5
    record_criterion(1, ok, f"class(U(n,Z)) = n-1 for n=2..6 via Lie closure and commutators; failures {bad}; {dt:.2f}s")
    assert ok


def test_criterion_02_derived_length():
    t = time.perf_counter()
    bad = [n for n in range(2, 9)
           if derived_length(MatrixGroupPresentation(u_k_generators(n), n)) != ceil(log2(n))]
    groups = [c.h1_group() for c in torus_cases()]
    groups += [c.h1_group() for n in (2, 3, 4) for c in fuzz_groups(n, 30)]
    ineq = 0
    for g in groups:
        c = nilpotency_class(g)
        if derived_length(g) > (log2_bound(c) if c else 0):
            ineq += 1
    affine = [c for c in standard_cases() if c.torus is None]
    for case in affine:
        g = affine_to_unipotent(case.group)
        if derived_length(g) > log2_bound(nilpotency_class(g)):
            ineq += 1
    dt = time.perf_counter() - t
    ok = not bad and ineq == 0 and dt < 10
    record_criterion(2, ok, f"derived length ceil(log2 n) for n=2..8 (mismatch {bad}); length bound failures "
                            f"{ineq} of {len(groups) + len(affine)} groups; {dt:.2f}s")
    assert ok


def test_criterion_03_affine():
    t = time.perf_counter()
    bad = []
    for k in range(1, 6):
        case = affine_example(k + 1, 1)
        g = case.group
        u = MatrixGroupPresentation(u_k_generators(k + 1), k + 1)
        if not (affine_nilpotency_class(g) == k == nilpotency_class(u) and verify_affine_embedding(g)
                and affine_embedding_matches(case) and affine_lcs_oracle(g, k + 1) and not affine_lcs_oracle(g, k)):
            bad.append(k)
    dt = time.perf_counter() - t
    ok = not bad and dt < 5
    record_criterion(3, ok, f"class(Z^k x| U(k,Z)) = k = class(U(k+1,Z)) for k=1..5, embedding verified; "
                            f"failures {bad}; {dt:.2f}s")
    assert ok


def test_criterion_04_growth():
    t = time.perf_counter()
    sat = {n: growth_exponent(full_jordan(n).automorphisms()[0], 1, 1) for n in (2, 3, 4)}
    ok_sat = all(e == 2 * (n - 1) for n, e in sat.items())
    checked = bad = 0
    best = {}
    for n in (2, 3, 4):
        for g in fuzz_automorphisms(n, 100):
            for p in range(n + 1):
                for q in range(n + 1):
                    e = growth_exponent(g, p, q)
                    checked += 1
                    if e > general_bound(n, p, q):
                        bad += 1
                    if p == q and p >= 2:
                        if e > improved_bound(n, p):
                            bad += 1
                        best[(n, p)] = max(best.get((n, p), 0), e)
    dt = time.perf_counter() - t
    ok = ok_sat and bad == 0 and dt < 60
    record_criterion(4, ok, f"full Jordan H^(1,1) exponents {sat}; {checked} (g,p,q) checks on 300 fuzzed "
                            f"automorphisms, {bad} bound failures; best H^(p,p) found {best}; {dt:.2f}s")
    assert ok


def test_criterion_05_evenness():
    autos = [g for _, g in gallery_automorphisms(max_n=6)]
    autos += [g for n in (2, 3, 4) for g in fuzz_automorphisms(n, 100)]
    odd = [growth_exponent(g, 1, 1) for g in autos if growth_exponent(g, 1, 1) % 2]
    ok = not odd
    record_criterion(5, ok, f"H^(1,1) exponent even for {len(autos)} gallery and fuzzed automorphisms; odd: {odd}")
    assert ok


def _random_element(rng, auts):
    g = rng.choice(auts)
    for _ in range(rng.randint(0, 2)):
        h = rng.choice(auts)
        g = g @ (h if rng.random() < 0.5 else h.inverse())
    return g


def test_criterion_06_annihilation():
    rng = random.Random(FUZZ_SEED)
    tuples = bad = 0
    for n in (1, 2, 3, 4):
        for k, case in enumerate(fuzz_groups(n, 50, 3, salt=6)):
            auts = case.automorphisms()
            hs = [_random_element(rng, auts) for _ in range(n)]
            gs = [_random_element(rng, auts) for _ in range(n)]
            tuples += 1
            if not annihilation_check(hs, gs).is_zero():
                bad += 1
    witnesses = {}
    for n in (2, 3, 4):
        g = full_jordan(n).automorphisms()[0]
        ident = ExactMatrix.identity(2 * n)
        witnesses[n] = not annihilation_check([ident] * (n - 1), [g] * (n - 1)).is_zero()
    ok = tuples >= 200 and bad == 0 and all(witnesses.values())
    record_criterion(6, ok, f"{tuples} random m=n products vanish ({bad} nonzero); m=n-1 nonvanishing witnesses "
                            f"{witnesses}")
    assert ok


def _sequence_ok(g, rng):
    n = g.n
    chain = build_chain_cyclic(g, omega(n))
    spaces = compute_spaces(chain, strict=False)
    r1 = analyze_s_sequence(g, chain, omega(n), spaces)
    r2 = analyze_s_sequence(g, chain, random_kahler(n, rng), spaces)
    s = r1.s
    shape = bool(s) and s[0] <= n - 1 and all(a > b for a, b in zip(s, s[1:]))
    return spaces.ok and r1.ok and r2.ok and r1.s == r2.s and shape


def test_criterion_07_s_sequence():
    t = time.perf_counter()
    rng = random.Random(FUZZ_SEED)
    gal = gallery_automorphisms()
    bad = [name for name, g in gal if not _sequence_ok(g, rng)]
    fuzz_bad = 0
    fuzz_total = 0
    for n in (2, 3, 4):
        for g in fuzz_automorphisms(n, 50, salt=7):
            fuzz_total += 1
            if not _sequence_ok(g, rng):
                fuzz_bad += 1
    dt = time.perf_counter() - t
    ok = not bad and fuzz_bad == 0
    record_criterion(7, ok, f"s-sequence structure on {len(gal)} gallery and {fuzz_total} fuzzed automorphisms; "
                            f"failures gallery {bad}, fuzz {fuzz_bad}; {dt:.2f}s")
    assert ok


def test_criterion_08_hodge_riemann():
    t = time.perf_counter()
    rng = random.Random(FUZZ_SEED)
    bad = []
    levels = 0
    for case in torus_cases():
        n = case.torus.n
        if n > 4:
            continue
        auts = case.automorphisms()
        chain = build_chain_group(auts, omega(n)) if len(auts) > 1 else build_chain_cyclic(auts[0], omega(n))
        spaces = compute_spaces(chain)
        for i in range(n - 1):
            levels += 1
            for _ in range(20):
                tup = [random_kahler(n, rng).to_hodge() for _ in range(n - i - 1)]
                res = hodge_riemann_inertia(chain, spaces, i, tup)
                if res["P"][0] != 0 or res["F_next"][0] != 0:
                    bad.append((case.name, i))
                    break
    dt = time.perf_counter() - t
    ok = not bad
    record_criterion(8, ok, f"n_plus = 0 on P and F_(i+1) for {levels} chain levels x 20 Kaehler tuples; "
                            f"failures {bad}; {dt:.2f}s")
    assert ok


def test_criterion_09_class_bound():
    worst = {}
    bad = 0
    for n in (2, 3, 4):
        for case in fuzz_groups(n, 40, 3, salt=9):
            c = nilpotency_class(case.h1_group())
            worst[n] = max(worst.get(n, 0), c)
            if c > n - 1:
                bad += 1
    sub = {n: affine_lcs_oracle(subtorus_translation_case(n).group, n) for n in (2, 3, 4)}
    control = {n: not affine_lcs_oracle(subtorus_translation_case(n, full=True).group, n) for n in (2, 3, 4)}
    ok = bad == 0 and all(sub.values())
    record_criterion(9, ok, f"class <= n-1 on 120 fuzzed groups (max class {worst}); stable-subtorus weight-n "
                            f"commutators trivial {sub}; full-translation control nontrivial {control}")
    assert ok


def test_criterion_10_oracles():
    rng = random.Random(FUZZ_SEED)
    inter_bad = 0
    for n in (2, 3, 4):
        for _ in range(50):
            cls = [random_kahler(n, rng) for _ in range(n)]
            if intersection_number(cls, "polarization") != intersection_number(cls, "wedge"):
                inter_bad += 1
    autos = [g for _, g in gallery_automorphisms(max_n=3)]
    autos += [g for n in (1, 2, 3) for g in fuzz_automorphisms(n, 10, salt=10)]
    act_bad = 0
    for g in autos:
        n = g.n
        for p in range(n + 1):
            for q in range(n + 1):
                if action_on_hpq(g, p, q) != action_on_hpq_bruteforce(g, p, q):
                    act_bad += 1
    ok = inter_bad == 0 and act_bad == 0
    record_criterion(10, ok, f"polarization vs wedge on 150 tuples ({inter_bad} mismatches); tensor vs "
                             f"exterior-power action on {len(autos)} automorphisms ({act_bad} mismatches)")
    assert ok


def test_criterion_11_cli_determinism(tmp_path):
    def run(argv, name):
        out = tmp_path / name
        code = cli.main(argv + ["--out", str(out)])
        return code, out.read_bytes()

    runs = {}
    for label, argv in {"gallery": ["gallery", "u_n", "3"], "gallery_affine": ["gallery", "affine", "5", "2"]}.items():
        a = run(argv, f"{label}_a.json")
        b = run(argv, f"{label}_b.json")
        runs[label] = a == b and a[0] == 0
    fuzz = ["fuzz", "--n", "3", "--count", "8", "--seed", "11"]
    a = run(fuzz + ["--jobs", "1"], "fuzz_a.json")
    b = run(fuzz + ["--jobs", "1"], "fuzz_b.json")
    c = run(fuzz + ["--jobs", "4"], "fuzz_c.json")
    runs["fuzz_repeat"] = a == b and a[0] == 0
    runs["fuzz_jobs_1_vs_4"] = a == c
    ok = all(runs.values())
    record_criterion(11, ok, f"byte-identical reports {runs}")
    assert ok
