"""Graded recovery on Z/3 rotating three points, graded by the acting element."""

from recon.coefficients import gf, trivial
from recon.corpus import cyclic
from recon.functions import canonical_bumpy, steinberg_family
from recon.groupoid import group, transformation
from recon.pipeline import phi_from_arrow_map, steinberg_pipeline
from recon.ultrafilters import verify_recovery

G = transformation(cyclic(3), ["1", "2", "3"], cyclic(3))
G = G.with_grading(group(order=3), [int(a[1:-1].split(",")[0]) for a in G.arrows])

S = canonical_bumpy(G, trivial(), graded=True)
print(verify_recovery(S, graded=True).summary())

# shifting every point by one commutes with the action and keeps grades
shift = [G.index(f"({a[1:-1].split(',')[0]},{int(a[-2]) % 3 + 1})") for a in G.arrows]
A = steinberg_family(G, gf(2), graded=True)
rep = steinberg_pipeline(A, A, phi_from_arrow_map(A, A, shift), graded=True)
for arrow, (c, c2) in rep.data["grades"].items():
    print(arrow, "->", rep.data["isomorphism"][arrow], "grades", c, c2)
