"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed live and again in the pytest
terminal summary by conftest.py).  Run alone with

    pytest tests/test_acceptance.py -v
"""

import copy
import random
from contextlib import contextmanager
from time import perf_counter

import pytest

from freeprod import (AbelianFactor, CoverAction, WitnessCertificate, build_gog_cover, build_witness, chi,
                      decide, format_group, free_group, free_rank, normalize, orbits, parse_group,
                      stabilizer_type, subgroup_presentation, validate, verify_witness, witness_certificate)

from oracles import (chi_forced_free_rank, doc, genuinely_valid_witness, graph_cycle_rank, random_cover,
                     random_equal_class_pair, random_presentation, random_spec, raw_chi_gog)

RESULTS = {}


@contextmanager
def criterion(n, title, budget):
    """Time the block, enforce the budget in seconds and record the outcome."""
    start = perf_counter()
    ok = False
    try:
        yield
        elapsed = perf_counter() - start
        assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        ok = True
    finally:
        elapsed = perf_counter() - start
        RESULTS[n] = f"criterion {n} {'PASS' if ok else 'FAIL'}: {title} ({elapsed:.2f}s, budget {budget}s)"
        print(RESULTS[n])


def timed(fn, *args):
    start = perf_counter()
    out = fn(*args)
    return out, perf_counter() - start


def P(text):
    return parse_group(text)


# ----------------------------------------------------------------- 1


def test_criterion_1_decision_rule():
    with criterion(1, "decision rule on the rank-set criterion", 0.2):
        d, t = timed(decide, P("Z^2*Z^2*Z/6"), P("Z^2*Z*Z/5"))
        assert d.commensurable and d.qi and t < 0.1
        d, t = timed(decide, P("Z^2"), P("Z^3*Z^3"))
        assert not d.commensurable and not d.qi and t < 0.1


# ----------------------------------------------------------------- 2


def test_criterion_2_witness_soundness():
    with criterion(2, "200 random equal-class witnesses verify with equal finals", 60):
        rng = random.Random(0)
        for _ in range(200):
            a, b = random_equal_class_pair(rng)
            left, right = build_witness(a, b)
            report = verify_witness(witness_certificate(left, right))
            assert report.ok, (str(a), str(b), str(report))
            assert left.final == right.final
            assert report.final == format_group(left.final)


# -------------------------------------------------------------- 3, 4

COVERS = []


def _covers():
    if not COVERS:
        rng = random.Random(3)
        COVERS.extend(random_cover(rng) for _ in range(1000))
    return COVERS


def test_criterion_3_chi_multiplicativity():
    with criterion(3, "chi(subgroup) = degree * chi(base) on 1000 random covers", 30):
        for c in _covers():
            assert validate(c) is None
            assert chi(subgroup_presentation(c)) == c.degree * chi(c.base)


def test_criterion_4_kurosh_cross_check():
    with criterion(4, "cycle-rank free rank equals the chi-forced value on 1000 covers", 30):
        for c in _covers():
            stabs = [stabilizer_type(c, j, o).as_factor() for j in range(len(c.base)) for o in orbits(c, j)]
            forced = chi_forced_free_rank(c, stabs, chi(c.base))
            assert free_rank(c) == forced == graph_cycle_rank(c)


# ----------------------------------------------------------------- 5


def _cover(expr, degree, perms):
    return CoverAction.from_perms(P(expr), degree, perms)


def test_criterion_5_exact_known_subgroups():
    four = [(x + 1) % 4 for x in range(4)]
    cases = [
        # Z/3 first in canonical order: translations by 2 and by 3 mod 6
        (_cover("Z/2 * Z/3", 6, {0: [[(x + 2) % 6 for x in range(6)]], 1: [[(x + 3) % 6 for x in range(6)]]}),
         free_group(2)),
        (_cover("Z^2 * Z/2", 2, {1: [[1, 0]]}), P("Z^2 * Z^2")),
        (_cover("Z/2 * Z/2", 4, {0: [[x ^ 2 for x in range(4)]], 1: [[x ^ 1 for x in range(4)]]}), P("Z")),
        (_cover("Z * Z", 4, {0: [four], 1: [four]}), free_group(5)),
    ]
    with criterion(5, "exact subgroups of four known covers", 0.4):
        for c, expected in cases:
            S, t = timed(subgroup_presentation, c)
            assert S == expected and t < 0.1


# ----------------------------------------------------------------- 6


def test_criterion_6_lemma_reproduction():
    with criterion(6, "graph-of-groups lemma: loop example and chi identity on 200 graphs", 30):
        from freeprod import parse_gog
        loop = parse_gog(doc([("v", "Z^2 x Z/2")], [("e", ("v", "v"), "Z/2")]))
        _, S, index = build_gog_cover(loop)
        assert S == P("Z^2 * Z") and index == 2
        rng = random.Random(6)
        for _ in range(200):
            vertices, _, spec = random_spec(rng)
            _, S, Y = build_gog_cover(spec)
            assert chi(S) == Y * raw_chi_gog(vertices, spec)


# ----------------------------------------------------------------- 7


def _certificate_pool(rng):
    pool = []
    while len(pool) < 40:
        a, b = random_equal_class_pair(rng)
        left, right = build_witness(a, b)
        if left.steps and left.total_index + right.total_index <= 64:
            pool.append(witness_certificate(left, right).to_json())
    for _ in range(40):
        c = random_cover(rng)
        if c.degree < 2:
            continue
        cert = {"base": format_group(c.base),
                "steps": [{"degree": c.degree,
                           "factors": [{"index": j, "perms": [list(p) for p in a.perms]}
                                       for j, a in enumerate(c.actions) if any(p != tuple(range(c.degree))
                                                                               for p in a.perms)],
                           "result": format_group(subgroup_presentation(c))}],
                "final": format_group(subgroup_presentation(c))}
        pool.append({"left": cert, "right": copy.deepcopy(cert)})
    return pool


def _mutate_factor(text, rng):
    factors = list(parse_group(text))
    i = rng.randrange(len(factors)) if factors else None
    if i is None:
        return "Z/2"
    f = factors[i]
    options = [AbelianFactor(f.rank + 1, f.torsion), AbelianFactor.of(f.rank, f.torsion + (2,))]
    if f.rank:
        options.append(AbelianFactor(f.rank - 1, f.torsion))
    factors[i] = rng.choice(options)
    return format_group(normalize(factors))


def mutate(w, rng):
    """One random single-field mutation: returns (mutant, side, step), step None for the final."""
    m = copy.deepcopy(w)
    side = rng.choice(["left", "right"])
    cert = m[side]
    steps = cert["steps"]
    movable = [(k, e) for k, s in enumerate(steps) if s["degree"] >= 2 for e in s["factors"]]
    kinds = ["final"] + (["degree", "factor"] if steps else []) + (["perm"] if movable else [])
    kind = rng.choice(kinds)
    if kind == "final":
        cert["final"] = _mutate_factor(cert["final"], rng)
        return m, side, None
    if kind == "degree":
        k = rng.randrange(len(steps))
        d = steps[k]["degree"]
        steps[k]["degree"] = rng.choice([x for x in range(1, 2 * d + 2) if x != d])
        return m, side, k + 1
    if kind == "factor":
        k = rng.randrange(len(steps))
        steps[k]["result"] = _mutate_factor(steps[k]["result"], rng)
        return m, side, k + 1
    k, entry = rng.choice(movable)
    p = rng.choice(entry["perms"])
    x, y = rng.sample(range(len(p)), 2)
    if rng.random() < 0.5:
        p[x] = p[y]  # one image changed: no longer a permutation
    else:
        p[x], p[y] = p[y], p[x]
    return m, side, k + 1


def test_criterion_7_mutation_soundness():
    with criterion(7, ">= 500 single-field mutations rejected with a localized report", 60):
        rng = random.Random(7)
        pool = _certificate_pool(rng)
        for w in pool:
            assert verify_witness(WitnessCertificate.from_json(w)).ok
        rejected = filtered = 0
        while rejected < 500:
            mutant, side, step = mutate(rng.choice(pool), rng)
            report = verify_witness(WitnessCertificate.from_json(mutant))
            if genuinely_valid_witness(mutant):
                filtered += 1
                assert report.ok, (mutant, str(report))
                continue
            assert not report.ok, mutant
            assert (report.side, report.step) == (side, step), (str(report), side, step)
            rejected += 1
        print(f"  {rejected} rejected, {filtered} genuinely valid mutants filtered")


# ----------------------------------------------------------------- 8


def test_criterion_8_degenerate_cases():
    with criterion(8, "degenerate cases", 5):
        assert not decide(P("Z"), P("Z/2")).commensurable
        assert not decide(P("Z^2"), P("Z^2*Z/2")).commensurable
        a, b = P("Z/2 * Z/2"), P("(Z x Z/4)")
        assert decide(a, b).commensurable
        left, right = build_witness(a, b)
        assert left.final == right.final == P("Z")
        assert verify_witness(witness_certificate(left, right)).ok


# ----------------------------------------------------------------- 9


def test_criterion_9_parser_round_trip():
    with criterion(9, "parse(format(P)) == P on 1000 random presentations", 30):
        rng = random.Random(9)
        for _ in range(1000):
            G = random_presentation(rng)
            text = format_group(G)
            assert parse_group(text) == G
            assert format_group(parse_group(text)) == text


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
