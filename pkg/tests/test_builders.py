import random
from math import lcm

import pytest
from hypothesis import given, settings, strategies as st

from freeprod import (NotCommensurableError, PreconditionError, build_step1, build_step2,
                      build_torsion_removal, build_witness, chi, classify, free_group,
                      orbits, parse_group, subgroup_presentation, validate)
from freeprod.builders import plan_step1
from freeprod.wiring import connect_blocks, place_blocks

from oracles import connected, graph_cycle_rank, random_equal_class_pair, random_presentation


def P(text):
    return parse_group(text)


def orbit_sizes(cover, j):
    return sorted(len(o) for o in orbits(cover, j))


# ------------------------------------------------------------ torsion removal


@pytest.mark.parametrize("expr, degree, result", [
    ("Z^2 * Z/2", 2, "Z^2 * Z^2"),
    ("Z^2 * Z^2", 1, "Z^2 * Z^2"),
    ("Z/2 * Z/2 * Z/2", 8, "Z * Z * Z * Z * Z"),
])
def test_torsion_removal_examples(expr, degree, result):
    cover = build_torsion_removal(P(expr))
    assert cover.degree == degree
    assert validate(cover) is None
    assert subgroup_presentation(cover) == P(result)


def test_torsion_removal_acts_regularly_on_torsion():
    # each torsion generator is a fixed-point-free translation of the given order
    base = P("(Z x Z/4) * Z/3 * (Z/2 x Z/2)")
    cover = build_torsion_removal(base)
    assert cover.degree == 4 * 3 * 4
    for f, a in zip(base, cover.actions):
        for g, p in enumerate(a.perms):
            if g < f.rank:
                assert p == tuple(range(cover.degree))
            else:
                order = f.torsion[g - f.rank]
                assert all(p[x] != x for x in range(cover.degree))
                q = list(range(cover.degree))
                for _ in range(order):
                    q = [p[x] for x in q]
                assert q == list(range(cover.degree))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_torsion_removal_result_is_torsion_free(seed):
    base = random_presentation(random.Random(seed), max_rank=3, max_order=4, max_factors=3)
    if sum(1 for f in base if f.torsion) > 2:
        return
    cover = build_torsion_removal(base)
    assert validate(cover) is None
    result = subgroup_presentation(cover)
    assert result.is_torsion_free
    assert chi(result) == cover.degree * chi(base)


# ------------------------------------------------------------------- step 1


def test_step1_example_two_tori():
    cover = build_step1(P("Z^2 * Z^2"), 2)
    assert cover.degree == 2
    assert orbit_sizes(cover, 0) == orbit_sizes(cover, 1) == [2]
    assert subgroup_presentation(cover) == P("Z^2 * Z^2 * Z")


def test_step1_example_torus_and_circle():
    base = P("Z^2 * Z")
    cover = build_step1(base, 2)
    assert cover.degree == 2
    assert orbit_sizes(cover, 0) == [1, 1]
    assert orbit_sizes(cover, 1) == [2]
    assert subgroup_presentation(cover) == P("Z^2 * Z^2 * Z")


def test_step1_identity_when_counts_already_match():
    cover = build_step1(P("Z^3 * Z^2 * Z"), 1)
    assert cover.degree == 1
    assert subgroup_presentation(cover) == P("Z^3 * Z^2 * Z")


def test_step1_generalized_degree_without_circles():
    # the literal degree-2 shape needs 4 orbits on 2 points with 2 factors: disconnected
    base = P("Z^3 * Z^2")
    plan = plan_step1(base, 2)
    assert not plan.literal
    # smallest d >= 2 with (m-1)d - (2*2 + 0) + 1 >= 0
    assert plan.degree == 3
    cover = build_step1(base, 2)
    assert validate(cover) is None
    result = subgroup_presentation(cover)
    assert result.count(3) == result.count(2) == 2
    assert chi(result) == 3 * chi(base)


def test_step1_plan_invariants():
    base = P("Z^4 * Z^4 * Z^2 * Z^2 * Z^2 * Z")
    plan = plan_step1(base, 6)
    for f, sizes in zip(base, plan.orbit_sizes):
        assert sum(sizes) == plan.degree
        assert min(sizes) >= 1
    for n in (4, 2):
        assert sum(len(s) for f, s in zip(base, plan.orbit_sizes) if f.rank == n) == 6


@pytest.mark.parametrize("expr, Y", [
    ("Z^2 * Z^2", 3),           # 3 is not a multiple of 2
    ("Z^2 * Z/2", 2),           # torsion
    ("Z^3", 1),                 # one-ended
    ("Z * Z", 1),               # empty signature is fine for plan, but class must be InfEnds
])
def test_step1_preconditions(expr, Y):
    base = P(expr)
    if expr == "Z * Z":
        # F_2 has infinitely many ends with empty signature: allowed
        assert subgroup_presentation(build_step1(base, Y)) == base
        return
    with pytest.raises(PreconditionError):
        build_step1(base, Y)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(0, 2), st.integers(1, 3))
def test_step1_postcondition(counts, circles, mult):
    ranks = [4, 3, 2][:len(counts)]
    text = " * ".join([f"Z^{n}" for n, c in zip(ranks, counts) for _ in range(c)] + ["Z"] * circles)
    base = P(text)
    if len(base) < 2:
        return
    Y = lcm(*counts) * mult
    cover = build_step1(base, Y)
    assert validate(cover) is None
    assert connected(cover.degree, [p for a in cover.actions for p in a.perms])
    result = subgroup_presentation(cover)
    for n in ranks[:len(counts)]:
        assert result.count(n) == Y
    assert chi(result) == cover.degree * chi(base)
    # Z factors: the cycle rank plus one per orbit of each circle factor
    circle_orbits = sum(len(orbits(cover, j)) for j, f in enumerate(base) if f.rank == 1)
    assert result.count(1) == graph_cycle_rank(cover) + circle_orbits


def _block_perm(d, blocks):
    p = list(range(d))
    for b in blocks:
        for i, x in enumerate(b):
            p[x] = b[(i + 1) % len(b)]
    return p


def test_wiring_repairs_overlapping_blocks():
    # both factors put their 3-cycle on {0,1,2}, leaving 3 isolated
    layout = [place_blocks(4, (3, 1), 0), place_blocks(4, (3, 1), 0)]
    assert not connected(4, [_block_perm(4, b) for b in layout])
    repaired = connect_blocks(4, layout)
    assert [sorted(map(len, b)) for b in repaired] == [[1, 3], [1, 3]]
    assert connected(4, [_block_perm(4, b) for b in repaired])
    for blocks in repaired:
        assert sorted(x for b in blocks for x in b) == [0, 1, 2, 3]


# ------------------------------------------------------------------- step 2


def test_step2_example_tori_and_circle():
    base = P("Z^2 * Z^2 * Z")
    cover = build_step2(base, 2)
    assert [orbit_sizes(cover, j) for j in range(3)] == [[2], [2], [1, 1]]
    assert subgroup_presentation(cover) == P("Z^2 * Z^2 * Z * Z * Z")


def test_step2_example_free_group():
    cover = build_step2(free_group(2), 4)
    assert subgroup_presentation(cover) == free_group(5)
    assert sorted(len(orbits(cover, j)) for j in range(2)) == [1, 4]


def test_step2_identity():
    base = P("Z^3 * Z")
    cover = build_step2(base, 1)
    assert cover.degree == 1
    assert subgroup_presentation(cover) == base


def test_step2_preconditions():
    with pytest.raises(PreconditionError):
        build_step2(P("Z^2 * Z/2"), 2)
    with pytest.raises(PreconditionError):
        build_step2(P("Z^2 * Z"), 0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from([1, 2, 3, 4]), min_size=2, max_size=5), st.integers(1, 7))
def test_step2_postcondition(ranks, e):
    base = P(" * ".join(f"Z^{n}" for n in ranks))
    cover = build_step2(base, e)
    assert validate(cover) is None
    result = subgroup_presentation(cover)
    for n in (2, 3, 4):
        assert result.count(n) == base.count(n)
    assert chi(result) == e * chi(base)


# ------------------------------------------------------------------ witness


def test_witness_example_equal_after_step1():
    left, right = build_witness(P("Z^2 * Z^2"), P("Z^2 * Z"))
    assert left.final == right.final == P("Z^2 * Z^2 * Z")
    assert (left.total_index, right.total_index) == (2, 2)


def test_witness_example_free_groups():
    left, right = build_witness(P("Z/2 * Z/2 * Z/2"), free_group(2))
    assert left.final == right.final == free_group(5)
    assert (left.total_index, right.total_index) == (8, 4)


def test_witness_class_mismatch():
    with pytest.raises(NotCommensurableError) as info:
        build_witness(P("Z^3 * Z/4"), P("Z^3"))
    assert str(info.value.class1) == "InfEnds({3})"
    assert str(info.value.class2) == "OneEnded(3)"


@pytest.mark.parametrize("a, b, model", [
    ("Z/2 * Z/2", "(Z x Z/4)", "Z"),
    ("Z/6", "(Z/2 x Z/2)", "1"),
    ("(Z^2 x Z/3)", "Z^2", "Z^2"),
])
def test_witness_degenerate_models(a, b, model):
    left, right = build_witness(P(a), P(b))
    assert left.final == right.final == P(model)


def test_witness_equal_inputs_have_empty_chains():
    left, right = build_witness(P("Z^2 * Z/3"), P("Z^2 * Z/3"))
    assert left.steps == right.steps == ()


def _chi_after_step1(P1, P2):
    """chi of both sides after torsion removal and count equalization."""
    r1 = subgroup_presentation(build_torsion_removal(P1))
    r2 = subgroup_presentation(build_torsion_removal(P2))
    Y = 1
    for n in classify(P1).signature:
        Y = lcm(Y, r1.count(n), r2.count(n))
    return plan_step1(r1, Y).degree * chi(r1), plan_step1(r2, Y).degree * chi(r2), r1 == r2


def test_witness_properties_on_random_pairs():
    rng = random.Random(2024)
    for _ in range(40):
        a, b = random_equal_class_pair(rng)
        left, right = build_witness(a, b)
        assert left.final == right.final
        for chain in (left, right):
            current = chain.base
            for cover, result in zip(chain.steps, chain.results):
                assert cover.base == current
                assert validate(cover) is None
                assert subgroup_presentation(cover) == result
                current = result
            assert chi(chain.final) == chain.total_index * chi(chain.base)
        if classify(a).kind == "inf_ends" and a != b:
            x1, x2, same = _chi_after_step1(a, b)
            if not same:
                assert chi(left.final) == -lcm(int(-x1), int(-x2))
