"""Cover constructions that turn two commensurable free products into
presentations of a common finite-index subgroup.

The pipeline per side is: kill torsion with the regular action of the product
of the factors' torsion subgroups, equalize the number of rank-``n`` factors
for every rank ``n >= 2`` (step 1), then take cyclic covers that scale the
Euler characteristics to a common value while leaving the higher-rank factors
alone (step 2).
"""

from dataclasses import dataclass
from math import gcd, lcm, prod

from .actions import CoverAction, subgroup_presentation
from .core import INF_ENDS, ONE_ENDED, TWO_ENDED, AbelianFactor, Presentation, chi, classify, free_group
from .errors import NotCommensurableError, PreconditionError
from .wiring import connect_blocks, place_blocks


def _cycle_perm(degree, block):
    p = list(range(degree))
    for i, x in enumerate(block):
        p[x] = block[(i + 1) % len(block)]
    return tuple(p)


def build_torsion_removal(P):
    """Cover whose subgroup is the kernel of ``P -> prod_j T_j``.

    Points are elements of ``Q = prod_j T_j`` in mixed radix; torsion
    generators translate their own coordinate, free generators act trivially.
    """
    coords = []  # (factor index, generator index, order)
    for j, f in enumerate(P):
        for l, order in enumerate(f.torsion):
            coords.append((j, f.rank + l, order))
    degree = prod(o for _, _, o in coords)
    perms = {}
    stride = 1
    for j, g, order in coords:
        p = []
        for x in range(degree):
            digit = (x // stride) % order
            p.append(x + stride if digit < order - 1 else x - (order - 1) * stride)
        ident = tuple(range(degree))
        gens = perms.setdefault(j, [ident] * P[j].ngens)
        gens[g] = tuple(p)
        stride *= order
    return CoverAction.from_perms(P, degree, perms)


@dataclass(frozen=True)
class EqualizationPlan:
    """Orbit sizes of the step-1 cover: one tuple of sizes per factor, each
    summing to ``degree``; rank-``n`` factors contribute ``Y`` orbits in total
    for every rank ``n >= 2``."""

    Y: int
    degree: int
    orbit_sizes: tuple
    literal: bool


def plan_step1(P, Y):
    if not P.is_torsion_free:
        raise PreconditionError("step 1 needs a torsion-free presentation")
    cls = classify(P)
    if cls.kind != INF_ENDS:
        raise PreconditionError(f"step 1 needs an infinitely-ended group, got {cls}")
    counts = {n: P.count(n) for n in cls.signature}
    if Y < 1 or any(Y % r for r in counts.values()):
        raise PreconditionError(f"Y={Y} is not a common multiple of the rank counts {counts}")
    m = len(P)
    circles = P.count(1)
    min_orbits = len(counts) * Y + circles

    def feasible(d):
        return (m - 1) * d - min_orbits + 1 >= 0

    if feasible(Y):
        sizes = tuple((Y,) if f.rank == 1 else (counts[f.rank],) * (Y // counts[f.rank]) for f in P)
        return EqualizationPlan(Y, Y, sizes, True)
    d = max(Y, -(-(min_orbits - 1) // (m - 1)))
    sizes = []
    for f in P:
        if f.rank == 1:
            sizes.append((d,))
        else:
            o = Y // counts[f.rank]
            sizes.append((d - (o - 1),) + (1,) * (o - 1))
    return EqualizationPlan(Y, d, tuple(sizes), False)


def _step1(P, Y):
    plan = plan_step1(P, Y)
    d = plan.degree
    layout = [place_blocks(d, sizes, j % d) for j, sizes in enumerate(plan.orbit_sizes)]
    layout = connect_blocks(d, layout)
    ident = tuple(range(d))
    perms = {}
    for j, (f, blocks) in enumerate(zip(P, layout)):
        p = list(range(d))
        for b in blocks:
            for i, x in enumerate(b):
                p[x] = b[(i + 1) % len(b)]
        perms[j] = [tuple(p)] + [ident] * (f.rank - 1)
    cover = CoverAction.from_perms(P, d, perms)
    result = subgroup_presentation(cover)
    for n in classify(P).signature:
        if result.count(n) != Y:
            raise AssertionError(f"step 1 produced {result.count(n)} rank-{n} factors, expected {Y}")
    return cover, result


def build_step1(P, Y):
    """Cover after which every rank ``n >= 2`` of the signature occurs exactly ``Y`` times.

    When the degree-``Y`` cover in which each rank-``n`` factor unwraps into
    ``Y / r_n`` tori of degree ``r_n`` can be made connected, that cover is
    returned.  Otherwise the degree is raised to the least value for which a
    connected cover with the same orbit counts exists.
    """
    return _step1(P, Y)[0]


def _step2(P, e):
    if not P.is_torsion_free or not len(P):
        raise PreconditionError("step 2 needs a nontrivial torsion-free presentation")
    if e < 1:
        raise PreconditionError("cyclic cover degree must be >= 1")
    if e == 1:
        return CoverAction.identity(P), P
    cycle = _cycle_perm(e, list(range(e)))
    ident = tuple(range(e))
    movers = [j for j, f in enumerate(P) if f.rank >= 2] or [P.factors.index(AbelianFactor(1))]
    perms = {j: [cycle] + [ident] * (P[j].rank - 1) for j in movers}
    cover = CoverAction.from_perms(P, e, perms)
    result = subgroup_presentation(cover)
    for n in {f.rank for f in P if f.rank >= 2}:
        if result.count(n) != P.count(n):
            raise AssertionError("step 2 changed the number of higher-rank factors")
    return cover, result


def build_step2(P, e):
    """Degree-``e`` cyclic cover, connected on every factor of rank >= 2."""
    return _step2(P, e)[0]


@dataclass(frozen=True)
class WitnessChain:
    base: Presentation
    steps: tuple = ()
    results: tuple = ()

    @property
    def final(self):
        return self.results[-1] if self.results else self.base

    @property
    def total_index(self):
        return prod(s.degree for s in self.steps)

    def then(self, cover, result=None):
        if cover.degree == 1:
            return self
        if result is None:
            result = subgroup_presentation(cover)
        return WitnessChain(self.base, self.steps + (cover,), self.results + (result,))


def _model(cls):
    if cls.kind == TWO_ENDED:
        return free_group(1)
    if cls.kind == ONE_ENDED:
        return Presentation((AbelianFactor(cls.rank),))
    return Presentation()


def build_witness(P1, P2):
    """Two cover chains from ``P1`` and ``P2`` ending at the same presentation."""
    c1, c2 = classify(P1), classify(P2)
    if c1 != c2:
        raise NotCommensurableError(c1, c2)
    left, right = WitnessChain(P1), WitnessChain(P2)
    if left.final == right.final:
        return left, right

    left = left.then(build_torsion_removal(left.final))
    right = right.then(build_torsion_removal(right.final))
    if c1.kind != INF_ENDS:
        model = _model(c1)
        if not left.final == right.final == model:
            raise AssertionError(f"torsion removal did not reach {model}")
        return left, right
    if left.final == right.final:
        return left, right

    Y = 1
    for n in c1.signature:
        Y = lcm(Y, left.final.count(n), right.final.count(n))
    left = left.then(*_step1(left.final, Y))
    right = right.then(*_step1(right.final, Y))
    if left.final == right.final:
        return left, right

    x1, x2 = -chi(left.final), -chi(right.final)
    assert x1.denominator == x2.denominator == 1 and x1 > 0 and x2 > 0
    x1, x2 = int(x1), int(x2)
    g = gcd(x1, x2)
    left = left.then(*_step2(left.final, x2 // g))
    right = right.then(*_step2(right.final, x1 // g))
    if left.final != right.final:
        raise AssertionError("witness chains did not converge")
    return left, right
