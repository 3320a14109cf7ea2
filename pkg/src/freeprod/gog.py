"""Finite-index free subgroups of graphs of groups with finite edge groups.

Vertex groups are finitely generated abelian, edge groups finite.  Each
vertex group ``G_v`` has the torsion-free normal subgroup ``N_v`` = its free
part, of index ``y_v = |T_v|``.  With ``Y = lcm(y_v)`` the cover uses
``Y / y_v`` copies of ``N_v`` per vertex and ``Y / |K_e|`` copies of each edge,
every copy of ``v`` receiving ``y_v / |K_e|`` ends of each incident edge
(per side for loops).  The resulting graph of groups has trivial edge groups,
so its fundamental group is the free product of the vertex copies and a free
group of rank ``E' - V' + 1``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import NamedTuple

from .core import AbelianFactor, Z, chi, factor_chi, normalize
from .errors import SpecError
from .wiring import connect_ends


def _prime_exponents(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _primary_parts(invariants):
    parts = {}
    for d in invariants:
        for p, k in _prime_exponents(d).items():
            parts.setdefault(p, []).append(k)
    return parts


def embeddable(A, B):
    """Whether the finite abelian group with invariant factors ``A`` embeds in ``B``.

    True iff for every prime ``p`` and every ``j >= 1``, ``A`` has at most as
    many cyclic ``p``-primary components of order ``>= p^j`` as ``B``.
    """
    pa, pb = _primary_parts(A), _primary_parts(B)
    for p, exps in pa.items():
        other = pb.get(p, [])
        for j in range(1, max(exps) + 1):
            if sum(1 for k in exps if k >= j) > sum(1 for k in other if k >= j):
                return False
    return True


@dataclass(frozen=True)
class CoverPlan:
    Y: int
    y: dict  # vertex id -> index of the free part
    vertex_copies: dict  # vertex id -> Y / y_v
    edge_orders: dict  # edge id -> |K_e|
    edge_copies: dict  # edge id -> Y / |K_e|
    slots: dict  # (edge id, side) -> y_v / |K_e| for the endpoint on that side


def plan_cover(spec):
    for e in spec.edges:
        if e.group.rank:
            raise SpecError(f"edge {e.id!r}: edge group must be finite")
        for vid in e.ends:
            if not embeddable(e.group.torsion, spec.vertex(vid).group.torsion):
                raise SpecError(f"edge {e.id!r}: edge group does not embed in vertex {vid!r}")
    y = {v.id: v.group.torsion_order for v in spec.vertices}
    Y = lcm(*y.values())
    k = {e.id: e.group.torsion_order for e in spec.edges}
    return CoverPlan(
        Y=Y,
        y=y,
        vertex_copies={v: Y // yv for v, yv in y.items()},
        edge_orders=k,
        edge_copies={e: Y // ke for e, ke in k.items()},
        slots={(e.id, s): y[v] // k[e.id] for e in spec.edges for s, v in enumerate(e.ends)},
    )


@dataclass(frozen=True)
class CoveringGraph:
    vertex_copies: tuple  # (vertex id, copy index)
    edge_copies: tuple  # (edge id, copy index, node at end 0, node at end 1)
    connected: bool

    @property
    def cycle_rank(self):
        return len(self.edge_copies) - len(self.vertex_copies) + 1

    def to_dot(self):
        lines = ["graph covering {"]
        for v, c in self.vertex_copies:
            lines.append(f'  "{v}#{c}";')
        for e, k, a, b in self.edge_copies:
            va, ca = self.vertex_copies[a]
            vb, cb = self.vertex_copies[b]
            lines.append(f'  "{va}#{ca}" -- "{vb}#{cb}" [label="{e}#{k}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


class LemmaResult(NamedTuple):
    graph: CoveringGraph
    presentation: object
    index: int


def chi_gog(spec):
    """Euler characteristic of the graph of groups: sum of vertex chi minus sum of 1/|K_e|."""
    return (sum((factor_chi(v.group) for v in spec.vertices), Fraction(0))
            - sum((Fraction(1, e.group.torsion_order) for e in spec.edges), Fraction(0)))


def build_gog_cover(spec):
    plan = plan_cover(spec)
    first = {}
    nodes = []
    for v in spec.vertices:
        first[v.id] = len(nodes)
        nodes.extend((v.id, c) for c in range(plan.vertex_copies[v.id]))

    ends, types, labels = [], [], []
    for i, e in enumerate(spec.edges):
        n = plan.edge_copies[e.id]
        for k in range(n):
            pair = []
            for s, vid in enumerate(e.ends):
                slot = (k + i + s) % n
                pair.append(first[vid] + slot // plan.slots[(e.id, s)])
            ends.append(pair)
            types.append(i)
            labels.append((e.id, k))
    ends = connect_ends(len(nodes), ends, types)

    graph = CoveringGraph(
        vertex_copies=tuple(nodes),
        edge_copies=tuple((e, k, a, b) for (e, k), (a, b) in zip(labels, ends)),
        connected=True,
    )
    rank = {v.id: v.group.rank for v in spec.vertices}
    factors = [AbelianFactor(rank[v]) for v, _ in nodes]
    P = normalize(factors + [Z] * graph.cycle_rank)
    if chi(P) != plan.Y * chi_gog(spec):
        raise AssertionError("Euler characteristic check failed for the covering graph")
    return LemmaResult(graph, P, plan.Y)
