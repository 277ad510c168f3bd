"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line; the lines are printed as they
happen and again in the pytest terminal summary.  Run the module directly
(``python3 tests/test_acceptance.py``) for the lines alone.
"""
from __future__ import annotations

import io
import json
import os
import sys
import tempfile
import time
from fractions import Fraction as F

sys.path.insert(0, os.path.dirname(__file__))

from oracles import brute_hh_leq, brute_upsets  # noqa: E402
from oss import knuth_yao  # noqa: E402
from oss.cli import main, run_knuth_yao_demo  # noqa: E402
from oss.fileformat import parse_system  # noqa: E402
from oss.freemod import WeightedMap, add, delta, hh_equiv, hh_leq, mass, pointwise_leq  # noqa: E402
from oss.generators import random_hh_pair, random_map, random_poset, random_rational_system, rng_for  # noqa: E402
from oss.lawcheck import check_antisymmetry, check_fact3, mutant_bind, run_all, search_counterexample, shipped_instances  # noqa: E402
from oss.poset import chain, naturally_labelled_posets  # noqa: E402
from oss.semiring import Bool2, Natural, Rational  # noqa: E402
from oss.solver import kleene_iterates, solve_eliminate, solve_kleene  # noqa: E402

SEED = 0xC0FFEE
RESULTS: list[str] = []
SYSTEMS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "systems")

KY_TIME_LIMIT = 1.0
AGREEMENT_TOL = F(1, 10**9)
KLEENE_TOL = F(1, 10**12)
AGREEMENT_SYSTEMS = 200
AGREEMENT_TIME_LIMIT = 30.0
PRESERVATION_SYSTEMS = 100
ANTISYMMETRY_PAIRS = 500
LAW_SAMPLES = 1000
LAW_TIME_LIMIT = 60.0
UPSET_MAX = 5
HH_CASES = 200
HH_MAX_AMBIENT = 7
LOWER_BOUND_ITERATES = 30
SEARCH_TIME_LIMIT = 300.0
SUITE_LAWS = ("module-axioms", "monad-laws", "functoriality", "fact1", "fact2", "fact3")


def record(name: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def sup_gap(a, b, outputs):
    return max((abs(x(y) - z(y)) for x, z in zip(a, b) for y in outputs), default=0)


def agreement_systems():
    rng = rng_for(SEED, "acceptance", "agreement")
    return [random_rational_system(rng) for _ in range(AGREEMENT_SYSTEMS)]


# ---------------------------------------------------------------------------

def criterion_knuth_yao():
    out = io.StringIO()
    t0 = time.perf_counter()
    code = main(["demo", "knuth-yao", "--format", "json"], out=out)
    elapsed = time.perf_counter() - t0
    doc = json.loads(out.getvalue())
    table = doc["eliminate"]["solution"]
    entries = 0
    for x, row in knuth_yao.EXPECTED.items():
        for y, want in zip(knuth_yao.FACES, row):
            if F(table[x].get(y, "0")) == want:
                entries += 1
    exact, _, match, _, _, elim_time = run_knuth_yao_demo()
    ok = code == 0 and entries == 36 and match and exact.residual_ok and elapsed < KY_TIME_LIMIT
    return record(
        "Knuth-Yao exactness",
        ok,
        f"{entries}/36 exact entries, x3->d5 = {table['x3']['d5']}, exit {code}, "
        f"demo {elapsed * 1000:.1f} ms, eliminate {elim_time * 1000:.2f} ms (limit {KY_TIME_LIMIT:.0f} s)",
    )


def criterion_method_agreement():
    t0 = time.perf_counter()
    systems = [knuth_yao.build_system()] + agreement_systems()
    worst, unconverged, iters = F(0), 0, 0
    for sys in systems:
        exact = solve_eliminate(sys)
        approx = solve_kleene(sys, tol=KLEENE_TOL)
        unconverged += not approx.converged
        iters = max(iters, approx.iterations)
        worst = max(worst, sup_gap(exact.solution, approx.solution, sys.outputs.elements))
    elapsed = time.perf_counter() - t0
    ok = worst < AGREEMENT_TOL and unconverged == 0 and elapsed < AGREEMENT_TIME_LIMIT
    return record(
        "Method agreement",
        ok,
        f"{len(systems)} systems, max sup-norm gap {float(worst):.3g} (< 1e-9), "
        f"{unconverged} unconverged, max {iters} iterations, {elapsed:.2f} s (limit {AGREEMENT_TIME_LIMIT:.0f} s)",
    )


def criterion_probability_preservation():
    rng = rng_for(SEED, "acceptance", "stochastic")
    kept = skipped = bad = 0
    while kept < PRESERVATION_SYSTEMS:
        sys = random_rational_system(rng, stochastic=True)
        assert all(sys.row_mass(i) == 1 for i in range(sys.n))
        rep = solve_eliminate(sys)
        if any(case == "one" for _, case in rep.pivot_trace):
            skipped += 1  # a trapped state: its least solution is empty
            continue
        kept += 1
        bad += sum(1 for theta in rep.solution if mass(theta) != 1)
        bad += sum(1 for v in rep.probability_preserved.values() if v is not True)
    return record(
        "Probability preservation",
        bad == 0,
        f"{kept} stochastic systems solved without a trapped pivot, {bad} rows with mass != 1 "
        f"({skipped} systems with trapped states set aside)",
    )


def criterion_bool2_collapse():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "two.oss")
        with open(path, "w") as fh:
            fh.write("semiring bool2\noutputs { d0 d1 ; d0 < d1 }\n")
        out = io.StringIO()
        code = main(["compare", "--format", "json", path, "d1", "d0 + d1"], out=out)
    doc = json.loads(out.getvalue())
    ok = code == 0 and doc["relation"] == "equivalent" and doc["left_below_right"] and doc["right_below_left"]
    return record(
        "Bool2 collapse pair",
        ok,
        f"compare d1 vs d0 + d1 over bool2 (d0 < d1): {doc['relation']}, "
        f"both directions {doc['left_below_right'] and doc['right_below_left']}",
    )


def _antisymmetry_pairs(P, rng):
    pairs = []
    for _ in range(ANTISYMMETRY_PAIRS):
        Y = random_poset(rng, rng.randint(1, 5)) if rng.random() < 0.6 else chain(["a", "b", "c"])
        how = rng.randrange(3)
        if how == 0:
            t1, t2 = random_hh_pair(P, Y, rng)
        elif how == 1:
            t1 = random_map(P, Y.elements, rng)
            t2 = add(t1, random_map(P, Y.elements, rng, 1)) if rng.random() < 0.5 else t1
        else:
            # small weights so that equal up-set sums are common
            keys = list(Y.elements)
            t1 = random_map(P, keys, rng, 3)
            t1 = WeightedMap(P, {x: P.one for x in t1})
            t2 = WeightedMap(P, {x: P.one for x in rng.sample(keys, rng.randint(0, len(keys)))})
        pairs.append((Y, t1, t2))
    return pairs


def criterion_antisymmetry():
    parts, ok = [], True
    for P in (Rational(), Natural()):
        rng = rng_for(SEED, "acceptance", "antisymmetry", P.name)
        equiv = distinct = 0
        for Y, t1, t2 in _antisymmetry_pairs(P, rng):
            if hh_equiv(t1, t2, Y):
                equiv += 1
                distinct += t1 != t2
        ok &= distinct == 0 and equiv > 0
        parts.append(f"{P.name}: {equiv} equivalent pairs, {distinct} distinct")
    # the same generator does find collapses over bool2
    B = Bool2()
    rng = rng_for(SEED, "acceptance", "antisymmetry", B.name)
    collapses = sum(
        1 for Y, t1, t2 in _antisymmetry_pairs(B, rng) if t1 != t2 and hh_equiv(t1, t2, Y)
    )
    rep = check_antisymmetry(B, None, 50, SEED)
    first = rep.failures[0] if rep.failures else {}
    known = first.get("theta1") == delta(B, 1) and first.get("theta2") == add(delta(B, 0), delta(B, 1))
    ok &= known and collapses > 0
    parts.append(f"bool2: d1 vs d0 + d1 reported first {known}, {collapses} distinct equivalent pairs")
    return record("Antisymmetry dichotomy", ok, "; ".join(parts))


def criterion_law_suites():
    t0 = time.perf_counter()
    reports = run_all(shipped_instances(), LAW_SAMPLES, SEED)
    elapsed = time.perf_counter() - t0
    failing = [f"{r.law}/{r.instance}" for r in reports if not r.passed]
    instances = sorted({r.instance for r in reports})
    short = [r for r in reports if r.law in SUITE_LAWS and r.cases < LAW_SAMPLES]
    mutants = [check_fact3(P, None, None, LAW_SAMPLES, SEED, bind_fn=mutant_bind) for P in shipped_instances()[:2]]
    guard = all(not m.passed for m in mutants)
    ok = not failing and not short and elapsed < LAW_TIME_LIMIT and guard and len(instances) == 6
    return record(
        "Law suites",
        ok,
        f"{len(reports)} reports over {len(instances)} instances, {sum(r.cases for r in reports)} cases, "
        f"failures {failing or 'none'}, {elapsed:.1f} s (limit {LAW_TIME_LIMIT:.0f} s); mutant bind caught "
        + ", ".join(f"{m.instance}: {m.failed} failures" for m in mutants),
    )


def criterion_upset_oracle():
    posets = 0
    for n in range(UPSET_MAX + 1):
        for P in naturally_labelled_posets(n):
            posets += 1
            if set(P.enumerate_upsets()) != brute_upsets(P.leq, P.elements):
                return record("Up-set oracle equivalence", False, f"mismatch on {P!r}")
    rng = rng_for(SEED, "acceptance", "hh-oracle")
    instances = [Rational(), Natural(), Bool2()]
    agree = related = 0
    for i in range(HH_CASES):
        P = instances[i % len(instances)]
        Y = random_poset(rng, rng.randint(1, HH_MAX_AMBIENT))
        if rng.random() < 0.5:
            t1, t2 = random_hh_pair(P, Y, rng, 3)
        else:
            t1, t2 = random_map(P, Y.elements, rng, 3), random_map(P, Y.elements, rng, 3)
        fast = bool(hh_leq(t1, t2, Y))
        agree += fast == brute_hh_leq(P, t1, t2, Y.elements, Y.leq)
        related += fast
    return record(
        "Up-set oracle equivalence",
        agree == HH_CASES,
        f"{posets} posets with <= {UPSET_MAX} elements match powerset filtering; "
        f"restricted vs ambient hh_leq agree on {agree}/{HH_CASES} cases ({related} related)",
    )


def criterion_kleene_lower_bound():
    cases = []
    for sys in [knuth_yao.build_system()] + agreement_systems():
        cases.append((sys, solve_kleene(sys, tol=KLEENE_TOL), solve_eliminate(sys).solution))
    for name in ("reach.oss", "shortest.oss"):
        with open(os.path.join(SYSTEMS, name)) as fh:
            sys = parse_system(fh.read())
        cases.append((sys, solve_kleene(sys), None))
    checked = violations = 0
    for sys, rep, exact in cases:
        if not rep.converged:
            continue
        checked += 1
        it = kleene_iterates(sys)
        next(it)
        for m in range(1, LOWER_BOUND_ITERATES + 1):
            v = next(it)
            if m <= rep.iterations and not all(pointwise_leq(a, b) for a, b in zip(v, rep.solution)):
                violations += 1
            if exact is not None and not all(pointwise_leq(a, b) for a, b in zip(v, exact)):
                violations += 1
    return record(
        "Kleene lower bound",
        violations == 0 and checked == len(cases),
        f"{checked} converged solves, first {LOWER_BOUND_ITERATES} iterates below eliminate "
        f"and below the returned iterate, {violations} violations",
    )


def criterion_search():
    t0 = time.perf_counter()
    res = search_counterexample(max_size=3)
    elapsed = time.perf_counter() - t0
    by_size = {}
    for s in res.structures:
        by_size.setdefault(s["size"], []).append(s)
    size2_clean = all(s["probed"] and s["violations"] == 0 for s in by_size.get(2, []))
    bool2 = [s for s in res.structures if s["alias"] == "bool2"]
    bool2_clean = len(bool2) == 1 and bool2[0]["violations"] == 0 and bool2[0]["cases"] > 0
    emitted = res.certificate or bool(res.findings)
    ok = elapsed < SEARCH_TIME_LIMIT and emitted and size2_clean and bool2_clean
    outcome = "exhaustion certificate" if res.certificate else f"{len(res.findings)} findings"
    return record(
        "Counterexample search",
        ok,
        f"{len(res.structures)} structures up to size 3 in {elapsed:.2f} s (limit 300 s), {outcome}; "
        f"bool2 clean {bool2_clean}, size-2 clean {size2_clean}",
    )


CRITERIA = [
    criterion_knuth_yao,
    criterion_method_agreement,
    criterion_probability_preservation,
    criterion_bool2_collapse,
    criterion_antisymmetry,
    criterion_law_suites,
    criterion_upset_oracle,
    criterion_kleene_lower_bound,
    criterion_search,
]


def test_knuth_yao_exactness():
    assert criterion_knuth_yao()


def test_method_agreement():
    assert criterion_method_agreement()


def test_probability_preservation():
    assert criterion_probability_preservation()


def test_bool2_collapse_pair():
    assert criterion_bool2_collapse()


def test_antisymmetry_dichotomy():
    assert criterion_antisymmetry()


def test_law_suites():
    assert criterion_law_suites()


def test_upset_oracle_equivalence():
    assert criterion_upset_oracle()


def test_kleene_lower_bound():
    assert criterion_kleene_lower_bound()


def test_counterexample_search():
    assert criterion_search()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} acceptance criteria passed")
    sys.exit(0 if all(results) else 1)
