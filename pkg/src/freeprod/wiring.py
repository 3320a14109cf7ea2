"""Deterministic placement of orbits so that covers come out connected.

Both the permutation covers of the cover builders and the covering graphs of
the graph-of-groups construction are first laid out with cyclic offsets and
then repaired.  A repair move swaps two points (or two edge ends) of the same
type, which keeps every local count unchanged.  Taking the moved membership
from a cycle of one component and the partner from another component always
merges the two, so each move lowers the component count by one.
"""

from ._graph import bridges, component_labels
from .errors import WiringError


def place_blocks(degree, sizes, offset):
    """Chop the cyclic sequence ``offset, offset+1, ...`` (mod degree) into blocks."""
    seq = [(offset + k) % degree for k in range(degree)]
    if sum(sizes) != degree:
        raise ValueError(f"orbit sizes {sizes} do not sum to {degree}")
    out = []
    i = 0
    for s in sizes:
        out.append(seq[i:i + s])
        i += s
    return out


def connect_blocks(degree, blocks):
    """Repair per-factor block partitions of ``range(degree)`` into a connected layout.

    ``blocks[j]`` is the list of blocks (point lists) of factor ``j``; the
    order of points inside a block is kept, with swapped points taking over
    the position of the point they replace (conjugation by a transposition).
    """
    blocks = [[list(b) for b in fb] for fb in blocks]
    bound = max(1, len(blocks) * degree)
    for _ in range(bound + 1):
        edges = []
        where = []
        node = degree
        for j, fb in enumerate(blocks):
            for bi, b in enumerate(fb):
                for pos, x in enumerate(b):
                    edges.append((x, node))
                    where.append((j, bi, pos))
                node += 1
        labels = component_labels(node, edges)
        if all(labels[x] == labels[0] for x in range(degree)):
            return blocks
        cut = bridges(node, edges)
        k = next((k for k in range(len(edges)) if k not in cut), None)
        if k is None:
            break
        a = edges[k][0]
        j, bi, pos = where[k]
        b = next(x for x in range(degree) if labels[x] != labels[a])
        for cj, c in enumerate(blocks[j]):
            if b in c:
                c[c.index(b)] = a
                break
        blocks[j][bi][pos] = b
    raise WiringError("could not connect the cover within the iteration bound")


def connect_ends(n_nodes, edges, groups):
    """Repair a multigraph by swapping edge ends within edge types.

    ``edges[k] = [u, v]`` and ``groups[k]`` is the type of edge ``k``.  Returns
    the repaired edge list; the multiset of endpoints per (type, side) is
    preserved.
    """
    edges = [list(e) for e in edges]
    bound = max(1, n_nodes + len(edges))
    for _ in range(bound + 1):
        labels = component_labels(n_nodes, edges)
        if all(x == labels[0] for x in labels):
            return edges
        cut = bridges(n_nodes, edges)
        move = None
        for k in range(len(edges)):
            if k in cut:
                continue
            comp = labels[edges[k][0]]
            partner = next((q for q in range(len(edges))
                            if groups[q] == groups[k] and labels[edges[q][0]] != comp), None)
            if partner is not None:
                move = (k, partner)
                break
        if move is None:
            break
        k, q = move
        edges[k][0], edges[q][0] = edges[q][0], edges[k][0]
    raise WiringError("could not connect the covering graph within the iteration bound")
