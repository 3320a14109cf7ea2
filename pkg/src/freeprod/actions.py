"""Finite covers as permutation monodromy, and their Kurosh decompositions.

A degree-``d`` cover of a wedge of tori (more generally, a transitive action of
a free product ``A_1 * ... * A_m`` on ``{0, ..., d-1}``) is given factor by
factor: every abelian factor ``Z^n x Z/d_1 x ... x Z/d_t`` sends each of its
``n + t`` generators (free ones first, then torsion ones in invariant-factor
order) to a permutation, stored as an image tuple.

The point stabilizer is an index-``d`` subgroup.  Its Kurosh decomposition
has one factor per (factor, orbit) pair, namely the stabilizer of that orbit
inside the abelian factor, plus a free group whose rank is the cycle rank of
the bipartite graph joining points to the orbits containing them.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import repeat

from .core import AbelianFactor, Z, chi, normalize_counts
from .errors import InvalidCoverError
from .lattice import det_upper, hnf, snf, solve_upper


@dataclass(frozen=True)
class FactorAction:
    factor: AbelianFactor
    perms: tuple

    @property
    def degree(self):
        return len(self.perms[0]) if self.perms else None


@dataclass(frozen=True)
class CoverAction:
    base: object  # Presentation
    degree: int
    actions: tuple

    @classmethod
    def from_perms(cls, base, degree, perms):
        """Build a cover from ``{factor_index: [perm, ...]}``; omitted factors act trivially."""
        ident = tuple(range(degree))
        actions = []
        for f, k in base.runs:
            actions.extend(repeat(FactorAction(f, (ident,) * f.ngens), k))
        for j, ps in perms.items():
            if 0 <= j < len(actions):
                actions[j] = FactorAction(base[j], tuple(tuple(p) for p in ps))
        return cls(base, degree, tuple(actions))

    @classmethod
    def identity(cls, base):
        return cls.from_perms(base, 1, {})

    def moving_factors(self):
        """Indices of factors with at least one non-identity generator."""
        ident = tuple(range(self.degree))
        return [j for j, a in enumerate(self.actions) if any(p != ident for p in a.perms)]


@dataclass(frozen=True)
class Violation:
    kind: str  # malformed | shape | non_commuting | order | intransitive
    factor: int = None
    generators: tuple = ()
    message: str = ""

    def __str__(self):
        where = []
        if self.factor is not None:
            where.append(f"factor {self.factor}")
        if self.generators:
            where.append("generator" + ("s " if len(self.generators) > 1 else " ")
                         + ",".join(map(str, self.generators)))
        prefix = f"{self.kind}"
        if where:
            prefix += " (" + ", ".join(where) + ")"
        return f"{prefix}: {self.message}" if self.message else prefix


@dataclass(frozen=True)
class StabilizerType:
    rank: int
    torsion: tuple
    lattice: tuple = field(default=(), compare=False)

    def as_factor(self):
        return AbelianFactor(self.rank, self.torsion)


def _is_perm(p, d):
    return len(p) == d and all(isinstance(x, int) for x in p) and sorted(p) == list(range(d))


def _cycle_lengths(p):
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        n = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            n += 1
        out.append(n)
    return out


def _local_violation(a, d, ident):
    """(kind, generators, message) for the first defect of one factor action, else None."""
    for g, p in enumerate(a.perms):
        if p != ident and not _is_perm(p, d):
            return "malformed", (g,), f"not a permutation of 0..{d - 1}"
    moving = [(g, p) for g, p in enumerate(a.perms) if p != ident]
    for x in range(len(moving)):
        for y in range(x + 1, len(moving)):
            (g1, p), (g2, q) = moving[x], moving[y]
            if any(p[q[i]] != q[p[i]] for i in range(d)):
                return "non_commuting", (g1, g2), "generators do not commute"
    f = a.factor
    for l, order in enumerate(f.torsion):
        g = f.rank + l
        p = a.perms[g]
        if p != ident and any(order % c for c in _cycle_lengths(p)):
            return "order", (g,), f"generator does not have order dividing {order}"
    return None


def validate(cover):
    """Return the first :class:`Violation` found, or ``None`` if the cover is valid."""
    d = cover.degree
    if not isinstance(d, int) or d < 1:
        return Violation("malformed", message=f"degree must be a positive integer, got {d!r}")
    if len(cover.actions) != len(cover.base):
        return Violation("shape", message=f"{len(cover.actions)} factor actions for {len(cover.base)} factors")
    ident = tuple(range(d))
    seen = {}  # many factors share one action; check each distinct one once
    shared = set()
    moving = {}
    for j, (f, a) in enumerate(zip(cover.base, cover.actions)):
        if a.factor is not f and a.factor != f:
            return Violation("shape", j, message=f"action is for {a.factor}, base factor is {f}")
        if id(a) in shared:
            continue
        shared.add(id(a))
        if len(a.perms) != f.ngens:
            return Violation("shape", j, message=f"{len(a.perms)} generator images, factor {f} has {f.ngens} generators")
        if all(p is ident for p in a.perms):
            continue
        key = (f, tuple(map(id, a.perms)))
        if key not in seen:
            seen[key] = _local_violation(a, d, ident)
            for p in a.perms:
                if p != ident:
                    moving[id(p)] = p
        if seen[key] is not None:
            kind, gens, message = seen[key]
            return Violation(kind, j, gens, message)
    reached = [False] * d
    reached[0] = True
    stack = [0]
    perms = list(moving.values())
    while stack:
        x = stack.pop()
        for p in perms:
            y = p[x]
            if not reached[y]:
                reached[y] = True
                stack.append(y)
    if not all(reached):
        return Violation("intransitive", message="the action is not transitive (disconnected cover)")
    return None


def check(cover):
    v = validate(cover)
    if v is not None:
        raise InvalidCoverError(v)
    return cover


def orbits(cover, factor_index):
    """Orbits of one factor, each a sorted list, ordered by minimum element."""
    if not 0 <= factor_index < len(cover.actions):
        raise IndexError(f"factor index {factor_index} out of range")
    d = cover.degree
    ident = tuple(range(d))
    perms = [p for p in cover.actions[factor_index].perms if p != ident]
    if not perms:
        return [[i] for i in range(d)]
    seen = [False] * d
    out = []
    for start in range(d):
        if seen[start]:
            continue
        seen[start] = True
        orb = [start]
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    queue.append(y)
        out.append(sorted(orb))
    return out


def _power_table(p, orbit):
    """For each orbit point, its cycle and position under ``p``."""
    where = {}
    cycles = []
    for x in orbit:
        if x in where:
            continue
        cyc = [x]
        y = p[x]
        while y != x:
            cyc.append(y)
            y = p[y]
        for k, z in enumerate(cyc):
            where[z] = (len(cycles), k)
        cycles.append(cyc)
    return where, cycles


def act(perms, vector, point, tables=None):
    """Image of ``point`` under the group element with exponent vector ``vector``."""
    if tables is None:
        tables = [_power_table(p, range(len(p))) for p in perms]
    for g, k in enumerate(vector):
        if k:
            where, cycles = tables[g]
            c, pos = where[point]
            cyc = cycles[c]
            point = cyc[(pos + k) % len(cyc)]
    return point


@lru_cache(maxsize=None)
def _eye(g):
    return tuple(tuple(int(i == k) for k in range(g)) for i in range(g))


def stabilizer_type(cover, factor_index, orbit):
    """Isomorphism type of the stabilizer of a point of ``orbit`` in one factor.

    Relations fixing the base point are harvested along a BFS spanning tree of
    the orbit; their row HNF, together with the torsion relations, is the
    stabilizer lattice ``L`` in ``Z^(n+t)``.  The stabilizer is ``L / R``
    where ``R`` is spanned by the torsion relations, so its invariant factors
    come from the SNF of ``R`` written in the basis of ``L``.
    """
    a = cover.actions[factor_index]
    f = a.factor
    n, t = f.rank, len(f.torsion)
    g = n + t
    orbit = sorted(orbit)
    if not orbit:
        raise ValueError("empty orbit")
    p0 = orbit[0]
    members = set(orbit)
    perms = a.perms

    if len(orbit) == 1:
        if any(p[p0] != p0 for p in perms):
            raise ValueError(f"{orbit} is not an orbit of factor {factor_index}")
        return StabilizerType(n, f.torsion, _eye(g))

    word = {p0: (0,) * g}
    queue = deque([p0])
    relations = set()
    while queue:
        x = queue.popleft()
        wx = word[x]
        for k, p in enumerate(perms):
            y = p[x]
            step = wx[:k] + (wx[k] + 1,) + wx[k + 1:]
            if y not in word:
                if y not in members:
                    raise ValueError(f"{orbit} is not an orbit of factor {factor_index}")
                word[y] = step
                queue.append(y)
            else:
                rel = tuple(u - v for u, v in zip(step, word[y]))
                if any(rel):
                    relations.add(rel)
    if len(word) != len(orbit):
        raise ValueError(f"{orbit} is not an orbit of factor {factor_index}")

    torsion_rel = [tuple(f.torsion[l] if k == n + l else 0 for k in range(g)) for l in range(t)]
    M = hnf(sorted(relations) + torsion_rel)
    if len(M) != g or det_upper(M) != len(orbit):
        raise AssertionError("stabilizer lattice index differs from orbit size")

    # commuting generators give every orbit point the same stabilizer,
    # so fixing the base point is enough
    tables = [_power_table(p, orbit) for p in perms]
    for row in M:
        if act(perms, row, p0, tables) != p0:
            raise AssertionError("stabilizer lattice does not fix the base point")

    if not t:
        return StabilizerType(n, (), tuple(map(tuple, M)))
    C = [solve_upper(M, r) for r in torsion_rel]
    diag = snf(C)
    if 0 in diag:
        raise AssertionError("torsion relations are not independent")
    return StabilizerType(n, tuple(x for x in diag if x > 1), tuple(map(tuple, M)))


def image_order(cover, factor_index, orbit):
    """Order of the permutation group induced by one factor on ``orbit``, by closure."""
    orbit = sorted(orbit)
    gens = [tuple(p[x] for x in orbit) for p in cover.actions[factor_index].perms]
    index = {x: i for i, x in enumerate(orbit)}
    gens = [tuple(index[y] for y in g) for g in gens]
    e = tuple(range(len(orbit)))
    seen = {e}
    queue = deque([e])
    while queue:
        h = queue.popleft()
        for g in gens:
            k = tuple(g[i] for i in h)
            if k not in seen:
                seen.add(k)
                queue.append(k)
    return len(seen)


def free_rank(cover):
    """Cycle rank ``(m-1)d - sum_j #orbits_j + 1`` of the covering incidence graph."""
    v = validate(cover)
    if v is not None and v.kind == "intransitive":
        raise InvalidCoverError(v)
    m = len(cover.base)
    d = cover.degree
    total = sum(len(orbits(cover, j)) for j in range(m))
    return (m - 1) * d - total + 1


def local_factors(cover):
    """Stabilizer factors of all (factor, orbit) pairs, as ``(factor, multiplicity)``
    pairs, and the total orbit count.

    Shared action objects, shared permutation objects, and orbits on which a
    factor acts identically up to relabelling are each analysed once.
    """
    d = cover.degree
    ident = tuple(range(d))
    by_action, by_perms, by_orbit = {}, {}, {}
    tally = {}  # id(found) -> [found, uses]
    for j, a in enumerate(cover.actions):
        found = by_action.get(id(a))
        if found is None:
            if all(p == ident for p in a.perms):
                # d singleton orbits, each stabilized by the whole factor
                found = [(a.factor, d)]
            else:
                key = (a.factor, tuple(map(id, a.perms)))
                found = by_perms.get(key)
                if found is None:
                    found = []
                    for orb in orbits(cover, j):
                        # the stabilizer depends only on the action restricted to the orbit
                        pos = {x: i for i, x in enumerate(orb)}
                        shape = (a.factor, tuple(tuple(pos[p[x]] for x in orb) for p in a.perms))
                        if shape not in by_orbit:
                            by_orbit[shape] = stabilizer_type(cover, j, orb).as_factor()
                        found.append((by_orbit[shape], 1))
                    by_perms[key] = found
            by_action[id(a)] = found
        entry = tally.get(id(found))
        if entry is None:
            tally[id(found)] = [found, 1]
        else:
            entry[1] += 1
    pairs = [(f, k * uses) for found, uses in tally.values() for f, k in found]
    return pairs, sum(k for _, k in pairs)


def subgroup_presentation(cover):
    """Kurosh decomposition of the index-``degree`` subgroup encoded by ``cover``."""
    check(cover)
    d = cover.degree
    pairs, orbit_count = local_factors(cover)
    m = len(cover.base)
    rank = (m - 1) * d - orbit_count + 1
    result = normalize_counts(pairs + [(Z, rank)])
    if chi(result) != d * chi(cover.base):
        raise AssertionError("Euler characteristic is not multiplicative for this cover")
    return result


def conjugate(cover, sigma):
    """Relabel points by the permutation ``sigma`` (point ``i`` becomes ``sigma[i]``)."""
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    actions = []
    for a in cover.actions:
        perms = tuple(tuple(sigma[p[inv[i]]] for i in range(cover.degree)) for p in a.perms)
        actions.append(FactorAction(a.factor, perms))
    return CoverAction(cover.base, cover.degree, tuple(actions))
