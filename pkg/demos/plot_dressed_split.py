"""
Recovering a hidden splitting
=============================

A split bundle written in a random gauge no longer looks diagonal.  The
certifier reads off the splitting type and returns an explicit isomorphism.
"""

import random

from supersplit import FreeSupermodule, SplitBundle, SuperSpaceSig, random_dressed_split, split_certify
from supersplit.splitting import verify_iso

space = SuperSpaceSig(2, 1)
E, gauges = random_dressed_split(space, (2, -1), (0,), random.Random(11))

# one transition, far from diagonal
print(E.g(0, 1))

cert = split_certify(E)
print(cert.verdict, "even", cert.even, "odd", cert.odd)

# phi_0 maps the split model into E on the first chart
print(cert.iso[0])
print("gluing verified:", verify_iso(E, SplitBundle(space, FreeSupermodule(cert.even, cert.odd)), cert.iso))
