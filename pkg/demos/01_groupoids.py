"""Finite groupoids: validation, bisections, isotropy and gradings."""

from recon.corpus import cyclic
from recon.groupoid import GroupoidError, group, pair, transformation, validate_groupoid

P = pair(3)
print(P.name, "has", P.n, "arrows and", len(P.units), "units")
print("bisections:", len(P.bisections()), "effective:", P.is_effective())

# the same groupoid as Z/3 acting on three points by rotation
rot = transformation(cyclic(3), ["1", "2", "3"], cyclic(3))
print("rotation arrows:", rot.arrows)

# a broken table is rejected with the axiom and a witness
raw = pair(2).to_raw()
raw["compose"][1] = [raw["compose"][1][0], raw["compose"][1][1], "(2,2)"]
try:
    validate_groupoid(raw)
except GroupoidError as e:
    print("rejected:", e.axiom, e.witness)

# gradings are functors into a group (here Z/2 on pair(2))
P2 = pair(2)
parity = [(int(a[1]) - int(a[3])) % 2 for a in P2.arrows]
G = P2.with_grading(group(order=2), parity)
print("grades:", dict(zip(G.arrows, (G.grade(g) for g in range(G.n)))))
