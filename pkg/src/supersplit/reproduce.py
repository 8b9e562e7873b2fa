"""End-to-end reproduction of the tangent bundle example on P^{1|1}.

Each check pairs a reference value with the value computed here.  The
``fault`` hook corrupts one builtin so that tests can confirm a mismatch
is actually reported.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cohomology import cech_cohomology, hom_superdim
from .sheaf import SplitBundle, euler_cotangent, euler_tangent, twist_bundle
from .splitting import NOT_SPLIT, split_certify
from .superring import SuperSpaceSig
from .supermodule import FreeSupermodule, SuperDim

P11 = SuperSpaceSig(1, 1)
FAULTS = ("cotangent", "tangent")


@dataclass(frozen=True)
class Check:
    name: str
    reference: str
    computed: str

    @property
    def ok(self) -> bool:
        return self.reference == self.computed

    def to_json(self) -> dict:
        return {"name": self.name, "reference": self.reference, "computed": self.computed, "ok": self.ok}

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'}  {self.name}: reference {self.reference}, computed {self.computed}"


def case_table_reference(a: int, b: int) -> SuperDim:
    d = abs(a - b)
    return SuperDim(2, 2) if d == 0 else SuperDim(2, d + 1)


def tangent_example(seed: int = 0, fault: str | None = None, bound: int = 4) -> list[Check]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    T = euler_tangent(P11)
    omega = euler_cotangent(P11)
    if fault == "cotangent":
        omega = twist_bundle(omega, 1)
    if fault == "tangent":
        T = twist_bundle(T, 1)

    checks = [Check("dim Hom(T, T)", "3|1", str(hom_superdim(T, T, 0)))]
    for t, i, ref in [(1, 0, "0|0"), (1, 1, "0|0"), (0, 0, "0|0"), (0, 1, "3|1")]:
        checks.append(Check(f"H^{i}(Omega({t}))", ref, str(cech_cohomology(omega, t, i))))

    by_gap: dict[int, set] = {}
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            F = SplitBundle(P11, FreeSupermodule((a,), (b,)))
            by_gap.setdefault(abs(a - b), set()).add(str(hom_superdim(F, F, 0)))
    for d, found in sorted(by_gap.items()):
        ref = str(case_table_reference(d, 0))
        checks.append(Check(f"dim End(O(a)+Pi O(b)), |a-b|={d}", ref, ",".join(sorted(found))))

    cert = split_certify(T, seed=seed)
    checks.append(Check("T splits?", NOT_SPLIT, cert.verdict))
    return checks
