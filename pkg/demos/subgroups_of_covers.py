"""Kurosh decomposition of finite-index subgroups given by permutation actions.

Each factor acts on the sheets by commuting permutations.  Every orbit of a
factor contributes its stabilizer, and the covering graph contributes a free
group of rank equal to its cycle rank.
"""

from freeprod import CoverAction, chi, free_rank, orbits, parse_group, stabilizer_type, subgroup_presentation

five = [(x + 1) % 5 for x in range(5)]
cases = [
    ("Z/2 * Z/3", 6, {0: [[(x + 2) % 6 for x in range(6)]], 1: [[(x + 3) % 6 for x in range(6)]]}),
    ("Z^2 * Z/2", 2, {1: [[1, 0]]}),
    ("Z * Z", 5, {0: [five], 1: [five]}),
    ("Z^3 * Z", 5, {0: [five, list(range(5)), list(range(5))], 1: [[1, 0, 2, 3, 4]]}),
]
for text, degree, perms in cases:
    cover = CoverAction.from_perms(parse_group(text), degree, perms)
    S = subgroup_presentation(cover)
    print(f"{text} degree {degree}: {S}")
    for j, f in enumerate(cover.base):
        for orbit in orbits(cover, j):
            print(f"  factor {j} ({f}) orbit {orbit}: stabilizer {stabilizer_type(cover, j, orbit).as_factor()}")
    print(f"  free rank {free_rank(cover)}, chi {chi(S)} = {degree} * {chi(cover.base)}")
