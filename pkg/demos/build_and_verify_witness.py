"""Build a finite-index witness for two commensurable groups and check it.

The builder kills torsion with a regular cover, equalizes the counts of each
higher-rank factor, then matches Euler characteristics with a cyclic cover.
The verifier re-derives every step from the permutations alone.
"""

import json

from freeprod import WitnessCertificate, build_witness, parse_group, verify_witness, witness_certificate
from freeprod.parser import format_factor


def summary(P):
    return ", ".join(f"{k} x {format_factor(f)}" for f, k in P.runs)


a, b = parse_group("Z^2 * Z^2 * Z/2"), parse_group("Z^2 * Z * Z/3")
left, right = build_witness(a, b)
for name, chain in (("left", left), ("right", right)):
    print(f"{name}: {chain.base}")
    for cover, result in zip(chain.steps, chain.results):
        print(f"  degree {cover.degree:3} -> {summary(result)}")
    print(f"  total index {chain.total_index}")

cert = witness_certificate(left, right)
print("verify:", verify_witness(cert))

# flip one permutation entry: the verifier names the failing step
doc = cert.to_json()
perm = doc["left"]["steps"][0]["factors"][0]["perms"][-1]
perm[0], perm[1] = perm[1], perm[0]
print("tampered:", verify_witness(WitnessCertificate.from_json(doc)))
print("certificate size:", len(json.dumps(cert.to_json())), "bytes")
