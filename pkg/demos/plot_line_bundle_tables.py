"""
Cohomology tables of super line bundles
=======================================

O(a) on P^{n|m} has the cohomology of sum_k O(a-k)^{C(m,k)} on P^n, the
odd k contributing odd classes.  The Cech computation agrees.
"""

from supersplit import SuperSpaceSig, make_split, rao_table, super_line_cohomology

space = SuperSpaceSig(1, 2)
for i in (0, 1):
    print("H^%d" % i, [str(super_line_cohomology(space, a, i)) for a in range(-4, 3)])

# the same numbers from transition data
E = make_split(space, (0,), ())
for i in (0, 1):
    print(rao_table(E, i, -4, 2).to_text())
