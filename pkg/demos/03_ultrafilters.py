"""Recovering a groupoid as the ultrafilters of its bumpy semigroup."""

from recon.coefficients import from_ring, gf
from recon.functions import canonical_bumpy
from recon.groupoid import pair
from recon.ultrafilters import enumerate_ultrafilters, reconstruct, unit_map, verify_recovery

F = canonical_bumpy(pair(2), from_ring(gf(3)))
ufs = enumerate_ultrafilters(F)
print(len(ufs), "ultrafilters for", F.G.n, "arrows")

for g, name in enumerate(F.G.arrows):
    members = unit_map(F, g)
    print(f"S_{name}: {len(members)} elements, index {ufs.index(members)}")

rec = reconstruct(F)
print("ultrafilter groupoid:", rec.groupoid.n, "arrows,", len(rec.groupoid.units), "units")
print(verify_recovery(F).summary())
