"""
Intermediate cohomology detects non-split bundles
==================================================

On P^2 a bundle splits exactly when its H^1 vanishes in every twist.  The
tangent bundle of P^2 (pulled back to P^{2|1}) has one class at t = -3.
"""

from supersplit import SuperSpaceSig, classical_tangent, rao_table, split_certify
from supersplit.splitting import horrocks_check

for space in (SuperSpaceSig(2, 0), SuperSpaceSig(2, 1)):
    T = classical_tangent(space)
    print(space)
    print(rao_table(T, 1, -5, 1).to_text())

report = horrocks_check(classical_tangent(SuperSpaceSig(2, 0)))
print("window", report.window, "witness", report.witness())

cert = split_certify(classical_tangent(SuperSpaceSig(2, 1)))
print(cert.verdict, cert.witness)
