"""
The tangent bundle of P^{1|1}
=============================

T has rank 1|1 and reduces to O(2) + Pi O(1).  Here we compute its
cohomology, its endomorphisms and the verdict of the splitting check.
"""

from supersplit import SplitBundle, SuperSpaceSig, euler_cotangent, euler_tangent, hom_superdim, split_certify
from supersplit.cohomology import cech_cohomology, h0_dim
from supersplit.supermodule import FreeSupermodule

P11 = SuperSpaceSig(1, 1)
T = euler_tangent(P11)
print(T.g(0, 1))

# sections of T(t): 2t+4 even and 2t+4 odd, as the Euler sequence predicts
for t in range(-2, 3):
    print("h0(T(%d)) =" % t, h0_dim(T, t))

# the cotangent bundle
omega = euler_cotangent(P11)
for t in (0, 1):
    print("Omega(%d):" % t, [str(cech_cohomology(omega, t, i)) for i in (0, 1)])

# End(T) against the endomorphisms of the only split candidate
F = SplitBundle(P11, FreeSupermodule((2,), (1,)))
print("dim End(T) =", hom_superdim(T, T), " dim End(O(2) + Pi O(1)) =", hom_superdim(F, F))

cert = split_certify(T)
print(cert.verdict, cert.witness["hom_E"], "vs", cert.witness["hom_split_model"])
