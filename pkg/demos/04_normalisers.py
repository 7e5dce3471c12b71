"""Normalisers, centres and the regular part of a Steinberg family."""

from recon.coefficients import gf
from recon.functions import steinberg_family
from recon.groupoid import group, pair
from recon.normalisers import check_RZC, check_sandwich, compute_M, r_formula, steinberg_hypothesis

A = steinberg_family(pair(2), gf(3))
print(A.name, "|A| =", A.k, "|N| =", len(A.N), "|S| =", len(A.S), "|M| =", len(compute_M(A)))
print(check_sandwich(A).summary())
print("R from product and diagonal alone:", len(r_formula(A)), "elements")

# F5[Z/4] has units outside the obvious ones, so the hypothesis fails
B = steinberg_family(group(order=4), gf(5))
rep = check_RZC(B)
print(rep.summary())
print(steinberg_hypothesis(B).summary())
