"""From a diagonal-preserving isomorphism of Steinberg algebras back to the groupoids."""

import itertools

import numpy as np

from recon.coefficients import gf
from recon.functions import steinberg_family
from recon.groupoid import pair, unit_groupoid
from recon.pipeline import induced_arrow_map, point_permutation_phi, steinberg_pipeline

A = steinberg_family(pair(3), gf(2))
for perm in itertools.permutations(range(3)):
    rep = steinberg_pipeline(A, A, point_permutation_phi(A, A, perm))
    f = induced_arrow_map(rep, A.G, A.G)
    print(perm, "->", [A.G.arrows[x] for x in f])

# same size, different groupoids: the pipeline refuses at condition (6)
B, C = steinberg_family(pair(2), gf(2)), steinberg_family(unit_groupoid(4), gf(2))
rep = steinberg_pipeline(B, C, np.arange(B.k))
print("negative control halted at", rep.data["halted_at"], "-", rep[rep.data["halted_at"]].detail)
