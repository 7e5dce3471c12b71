"""Coefficients, partial functions and the standard families built from them."""

from recon.coefficients import from_ring, gf, invertibles, trivial
from recon.functions import canonical_bumpy, steinberg_family
from recon.groupoid import group, pair

Y = from_ring(gf(3))
print("F3 without zero:", Y.m, "values, invertible:", sorted(invertibles(Y)))

F = canonical_bumpy(pair(2), Y)
print(F.name, "k =", F.k, "|S| =", len(F.S), "|D| =", len(F.D))
a = F.fn(F.S[5])
print("an element:", F.space.describe(F.rows[F.S[5]]), "domain", sorted(a.dom))

A = steinberg_family(group(order=2), gf(2))
print(A.name, "is the group algebra F2[Z/2] with", A.k, "elements")
print("diagonal:", A.to_records(A.D))

T = canonical_bumpy(pair(2), trivial())
print("characteristic functions of bisections:", T.to_records())
