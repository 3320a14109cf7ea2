"""Torsion-free finite covers of graphs of abelian groups with finite edge groups.

Each vertex group Z^n x T_v is covered Y/|T_v| times, where Y is the lcm of
the torsion orders; each edge with group K_e is covered Y/|K_e| times.  The
result is a graph of free abelian groups with trivial edge groups, so its
fundamental group is a free product.
"""

from freeprod import build_gog_cover, chi_gog, parse_gog

spec = parse_gog({
    "vertices": [{"id": "a", "group": "Z^2 x Z/2"}, {"id": "b", "group": "Z/4"}, {"id": "c", "group": "Z^3"}],
    "edges": [{"id": "ab", "ends": ["a", "b"], "group": "Z/2"},
              {"id": "bc", "ends": ["b", "c"], "group": "1"},
              {"id": "aa", "ends": ["a", "a"], "group": "1"}],
})
graph, S, Y = build_gog_cover(spec)
print(f"index {Y}: {S}")
print(f"{len(graph.vertex_copies)} vertex copies, {len(graph.edge_copies)} edges, cycle rank {graph.cycle_rank}")
print(f"chi check: {Y} * {chi_gog(spec)} = {Y * chi_gog(spec)}")
print(graph.to_dot())
