"""Supervector bundles on P^{n|m} as cocycles on the standard affine cover.

A :class:`TransitionBundle` stores, for every pair of charts ``i < j``, an
even degree-0 automorphism ``g_ij`` of a fixed free frame with entries
regular on ``D(x_i x_j)``.  Local sections glue by ``s_i = g_ij s_j``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Union

from .superring import SuperPoly, SuperSpaceSig, odd_subsets
from .supermodule import (FreeSupermodule, SuperDim, SuperMatrix, ShapeError, bosonic_reduce_matrix,
                          compose, direct_sum, invert, is_invertible, parity_shift, supertranspose,
                          tensor)


@dataclass(frozen=True)
class SplitBundle:
    space: SuperSpaceSig
    module: FreeSupermodule

    @property
    def rank(self) -> SuperDim:
        return self.module.rank

    def to_transition(self) -> "TransitionBundle":
        return make_split(self.space, self.module.even, self.module.odd)

    def twist(self, t: int) -> "SplitBundle":
        return SplitBundle(self.space, self.module.twist(t))

    def pi(self) -> "SplitBundle":
        return SplitBundle(self.space, self.module.pi())

    def dual(self) -> "SplitBundle":
        return SplitBundle(self.space, self.module.dual())

    def reduce(self) -> "SplitBundle":
        return SplitBundle(SuperSpaceSig(self.space.n, 0), self.module)

    def to_json(self) -> dict:
        return {"space": {"n": self.space.n, "m": self.space.m}, "kind": "split",
                "even": list(self.module.even), "odd": list(self.module.odd)}


@dataclass
class CocycleFailure:
    kind: str
    charts: tuple
    detail: str
    residual: SuperMatrix | None = None

    def __str__(self):
        return f"{self.kind} at {self.charts}: {self.detail}"


class TransitionBundle:
    """Locally free sheaf given by transition matrices on the standard cover."""

    def __init__(self, space: SuperSpaceSig, frame: FreeSupermodule, transitions: dict):
        self.space = space
        self.frame = frame
        self.transitions = {tuple(k): v for k, v in transitions.items()}
        expected = set(combinations(range(space.nx), 2))
        if set(self.transitions) != expected:
            raise ValueError(f"need transitions for exactly the chart pairs {sorted(expected)}")
        for (i, j), g in self.transitions.items():
            if g.source != frame or g.target != frame:
                raise ShapeError(f"transition {(i, j)} is not an endomorphism of the frame")
            if g.nx != space.nx:
                raise ShapeError(f"transition {(i, j)} uses {g.nx} even variables")
        self._inverse_cache: dict = {}

    @property
    def rank(self) -> SuperDim:
        return self.frame.rank

    @property
    def nx(self) -> int:
        return self.space.nx

    def g(self, i: int, j: int) -> SuperMatrix:
        """Transition from chart ``j`` coordinates to chart ``i`` coordinates."""
        if i == j:
            return SuperMatrix.identity(self.frame, self.nx)
        if i < j:
            return self.transitions[(i, j)]
        if (i, j) not in self._inverse_cache:
            self._inverse_cache[(i, j)] = invert(self.transitions[(j, i)], (i, j))
        return self._inverse_cache[(i, j)]

    def max_pole(self) -> int:
        return max((g.max_pole() for g in self.transitions.values()), default=0)

    def max_entry_degree(self) -> int:
        """Largest absolute x-exponent among transition entries and frame twists."""
        m = max((g.max_abs_exponent() for g in self.transitions.values()), default=0)
        return max([m] + [abs(a) for a in self.frame.twists])

    def to_json(self) -> dict:
        return {"space": {"n": self.space.n, "m": self.space.m}, "kind": "transition",
                "frame": self.frame.to_json(),
                "transitions": {f"{i},{j}": g.to_json() for (i, j), g in sorted(self.transitions.items())}}

    def __repr__(self):
        return f"TransitionBundle({self.space}, frame={self.frame})"


Bundle = Union[SplitBundle, TransitionBundle]


# construction -------------------------------------------------------------

def _ratio_power(i: int, j: int, a: int, nx: int) -> SuperPoly:
    """(x_j / x_i)^a."""
    xexp = [0] * nx
    xexp[j] += a
    xexp[i] -= a
    return SuperPoly({(tuple(xexp), ()): Fraction(1)}, _trusted=True)


def make_split(space: SuperSpaceSig, even_twists: Iterable[int] = (), odd_twists: Iterable[int] = ()
               ) -> TransitionBundle:
    """O(a_1) + ... + Pi(O(b_1) + ...) with diagonal transitions (x_j/x_i)^twist."""
    even_twists, odd_twists = tuple(even_twists), tuple(odd_twists)
    frame = FreeSupermodule((0,) * len(even_twists), (0,) * len(odd_twists))
    trans = {}
    for i, j in combinations(range(space.nx), 2):
        diag = [_ratio_power(i, j, a, space.nx) for a in even_twists + odd_twists]
        trans[(i, j)] = SuperMatrix.diagonal(frame, diag, space.nx, check=False)
    return TransitionBundle(space, frame, trans)


def as_transition(E: Bundle) -> TransitionBundle:
    return E.to_transition() if isinstance(E, SplitBundle) else E


def euler_tangent(space: SuperSpaceSig) -> TransitionBundle:
    """Tangent bundle of P^{1|1}, rank 1|1.

    Charts: z = x1/x0, eta = theta/x0 on U_0 and w = 1/z, zeta = eta/z on
    U_1.  The chain rule in right coordinates gives
    ``d_z = d_w (-1/z^2) + d_zeta (eta/z^2)`` and ``d_eta = d_zeta (1/z)``,
    whose inverse is the stored transition ``g_01``.
    """
    if (space.n, space.m) != (1, 1):
        raise ValueError(f"tangent bundle is only provided on P^{{1|1}}, not {space}")
    frame = FreeSupermodule((0,), (0,))
    g01 = SuperMatrix(frame, frame, [
        [SuperPoly.monomial((-2, 2), (), -1), SuperPoly.zero()],
        [SuperPoly.monomial((-2, 1), (1,), 1), SuperPoly.monomial((-1, 1), (), 1)],
    ], 2)
    return TransitionBundle(space, frame, {(0, 1): g01})


def classical_tangent(space: SuperSpaceSig) -> TransitionBundle:
    """Pullback of the tangent bundle of P^n to P^{n|m} (theta-free transitions).

    Chart i has affine coordinates z_k = x_k/x_i; the frame vector r of
    chart i is d/dz_k for the r-th index k != i.  Transitions are the
    Jacobians of the coordinate changes.
    """
    n, nx = space.n, space.nx
    if n < 1:
        raise ValueError("P^0 has no tangent directions")
    frame = FreeSupermodule((0,) * n, ())
    coords = {i: [k for k in range(nx) if k != i] for i in range(nx)}

    def mono(c, **exps):
        xexp = [0] * nx
        for key, e in exps.items():
            xexp[int(key[1:])] += e
        return SuperPoly({(tuple(xexp), ()): Fraction(c)}, _trusted=True)

    trans = {}
    for i, j in combinations(range(nx), 2):
        rows = [[SuperPoly.zero()] * n for _ in range(n)]
        for r, k in enumerate(coords[i]):
            for c, l in enumerate(coords[j]):
                if k == j:
                    # z^i_j = 1 / z^j_i
                    if l == i:
                        rows[r][c] = mono(-1, **{f"x{j}": 2}) * mono(1, **{f"x{i}": -2})
                elif l == k:
                    rows[r][c] = mono(1, **{f"x{j}": 1}) * mono(1, **{f"x{i}": -1})
                elif l == i:
                    rows[r][c] = mono(-1, **{f"x{k}": 1}) * mono(1, **{f"x{j}": 1}) * mono(1, **{f"x{i}": -2})
        trans[(i, j)] = SuperMatrix(frame, frame, rows, nx)
    return TransitionBundle(space, frame, trans)


def euler_cotangent(space: SuperSpaceSig) -> TransitionBundle:
    return dual_bundle(euler_tangent(space))


# checks -------------------------------------------------------------------

def _allowed_poles_ok(f: SuperPoly, charts: Iterable[int]) -> bool:
    charts = set(charts)
    return all(e >= 0 or k in charts for mono in f.terms for k, e in enumerate(mono[0]))


def find_cocycle_failure(E: TransitionBundle) -> CocycleFailure | None:
    """First violated condition, or None if ``E`` is a valid cocycle."""
    for (i, j), g in sorted(E.transitions.items()):
        if g.parity:
            return CocycleFailure("parity", (i, j), "transition is an odd morphism")
        try:
            g.check_homogeneous()
        except ValueError as exc:
            return CocycleFailure("homogeneity", (i, j), str(exc))
        for row in g.entries:
            for f in row:
                if not _allowed_poles_ok(f, (i, j)):
                    return CocycleFailure("regularity", (i, j), f"entry {f} has poles off D(x{i}x{j})")
        if not is_invertible(g, (i, j)):
            return CocycleFailure("invertibility", (i, j), "transition is not invertible on the overlap")
    for i, j, k in combinations(range(E.nx), 3):
        lhs = compose(E.g(i, j), E.g(j, k))
        rhs = E.g(i, k)
        if lhs != rhs:
            return CocycleFailure("cocycle", (i, j, k), "g_ij g_jk != g_ik", lhs - rhs)
    return None


def cocycle_check(E: TransitionBundle) -> bool:
    return find_cocycle_failure(E) is None


# standard constructions ---------------------------------------------------

def _chartwise(E: TransitionBundle, frame: FreeSupermodule, fn) -> TransitionBundle:
    return TransitionBundle(E.space, frame, {k: fn(k, g) for k, g in E.transitions.items()})


def dual_bundle(E: Bundle) -> Bundle:
    if isinstance(E, SplitBundle):
        return E.dual()
    # dual coordinates glue by the supertranspose of the inverse transition
    return _chartwise(E, E.frame.dual(), lambda k, g: supertranspose(E.g(k[1], k[0])))


def twist_bundle(E: Bundle, t: int) -> Bundle:
    if isinstance(E, SplitBundle):
        return E.twist(t)
    frame = E.frame.twist(t)
    # entry degrees are twist differences, so the entries carry over unchanged
    return _chartwise(E, frame, lambda k, g: SuperMatrix(frame, frame, g.entries, E.nx, check=False))


def pi_bundle(E: Bundle) -> Bundle:
    if isinstance(E, SplitBundle):
        return E.pi()
    return _chartwise(E, E.frame.pi(), lambda k, g: parity_shift(g))


def _same_space(E, F):
    if E.space != F.space:
        raise ShapeError(f"bundles live on different spaces {E.space} and {F.space}")


def sum_bundle(E: Bundle, F: Bundle) -> Bundle:
    _same_space(E, F)
    if isinstance(E, SplitBundle) and isinstance(F, SplitBundle):
        return SplitBundle(E.space, FreeSupermodule(E.module.even + F.module.even, E.module.odd + F.module.odd))
    E, F = as_transition(E), as_transition(F)
    frame = FreeSupermodule(E.frame.even + F.frame.even, E.frame.odd + F.frame.odd)
    return TransitionBundle(E.space, frame, {k: direct_sum(g, F.transitions[k]) for k, g in E.transitions.items()})


def tensor_bundle(E: Bundle, F: Bundle) -> Bundle:
    _same_space(E, F)
    if isinstance(E, SplitBundle) and isinstance(F, SplitBundle):
        ev = [a + b for a in E.module.even for b in F.module.even] + [a + b for a in E.module.odd for b in F.module.odd]
        od = [a + b for a in E.module.even for b in F.module.odd] + [a + b for a in E.module.odd for b in F.module.even]
        return SplitBundle(E.space, FreeSupermodule(ev, od))
    E, F = as_transition(E), as_transition(F)
    trans = {k: tensor(g, F.transitions[k]) for k, g in E.transitions.items()}
    frame = next(iter(trans.values())).source if trans else FreeSupermodule()
    return TransitionBundle(E.space, frame, trans)


def hom_bundle(F: Bundle, E: Bundle) -> Bundle:
    """Sheaf of homomorphisms F -> E, as E (x) F^dual."""
    return tensor_bundle(E, dual_bundle(F))


def reduce_bundle(E: Bundle) -> Bundle:
    """Bosonic reduction: set every theta to zero, landing on P^{n|0}."""
    space = SuperSpaceSig(E.space.n, 0)
    if isinstance(E, SplitBundle):
        return SplitBundle(space, E.module)
    return TransitionBundle(space, E.frame, {k: bosonic_reduce_matrix(g) for k, g in E.transitions.items()})


def dress(E: TransitionBundle, gauges: dict) -> TransitionBundle:
    """Change of trivialization: g'_ij = h_i g_ij h_j^{-1}.

    Each ``h_i`` must be an invertible automorphism of the frame, regular on
    ``D(x_i)``.
    """
    inv = {i: invert(h, (i,)) for i, h in gauges.items()}
    return _chartwise(E, E.frame, lambda k, g: compose(compose(gauges[k[0]], g), inv[k[1]]))


def random_laurent(rng: random.Random, nx: int, chart: int, degree: int, odd_parity: int, m: int,
                   nterms: int = 2, max_pole: int = 2, min_odd: int = 0) -> SuperPoly:
    """Random homogeneous element regular on D(x_chart)."""
    odds = [o for o in odd_subsets(m) if len(o) % 2 == odd_parity and len(o) >= min_odd]
    if not odds:
        return SuperPoly.zero()
    terms = {}
    for _ in range(nterms):
        odd = rng.choice(odds)
        d = degree - len(odd)
        pole = rng.randint(0, max_pole)
        if d + pole < 0:
            continue
        xexp = [0] * nx
        xexp[chart] = -pole
        for _ in range(d + pole):
            xexp[rng.randrange(nx)] += 1
        terms[(tuple(xexp), odd)] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return SuperPoly(terms)


def random_gauge(space: SuperSpaceSig, frame: FreeSupermodule, chart: int, rng: random.Random,
                 max_pole: int = 1, bosonic: bool = True) -> SuperMatrix:
    """Random invertible frame automorphism regular on D(x_chart).

    Diagonal constants times a unipotent triangular bosonic part, plus a
    nilpotent part with entries in the odd ideal.
    """
    nx, m = space.nx, space.m
    k = frame.size
    tw, par = frame.twists, frame.parities
    rows = []
    for r in range(k):
        row = []
        for c in range(k):
            deg = tw[r] - tw[c]
            pty = (par[r] + par[c]) % 2
            f = random_laurent(rng, nx, chart, deg, pty, m, max_pole=max_pole, min_odd=1)
            if r == c:
                f = f + SuperPoly.const(rng.choice([1, 2, -1, 3]), nx)
            elif bosonic and r < c and pty == 0:
                f = f + random_laurent(rng, nx, chart, deg, 0, 0, max_pole=max_pole, nterms=1)
            row.append(f)
        rows.append(row)
    return SuperMatrix(frame, frame, rows, nx)


def random_dressed_split(space: SuperSpaceSig, even: Iterable[int], odd: Iterable[int],
                         rng: random.Random, max_pole: int = 1) -> tuple[TransitionBundle, dict]:
    """A split bundle presented in a random gauge; returns the bundle and the gauges."""
    base = make_split(space, even, odd)
    gauges = {i: random_gauge(space, base.frame, i, rng, max_pole) for i in range(space.nx)}
    return dress(base, gauges), gauges


# pushforward to the bosonic reduction ---------------------------------------

@dataclass(frozen=True)
class GrPiece:
    shift: int
    multiplicity: int
    parity: int


@dataclass(frozen=True)
class GrDecomposition:
    """Graded pieces J^k E / J^{k+1} E = (E_red(-k))^{C(m,k)}, parity shifted by k mod 2.

    These are the pieces of a filtration of p_*(E); p_*(E) itself is their
    direct sum only when the filtration splits (always for split E).
    """

    red: Bundle
    pieces: tuple

    def total_multiplicity(self, parity: int | None = None) -> int:
        return sum(p.multiplicity for p in self.pieces if parity is None or p.parity == parity)

    def twisted(self, t: int) -> "GrDecomposition":
        return GrDecomposition(twist_bundle(self.red, t), self.pieces)

    def effective_twists(self, t: int = 0) -> list:
        """(effective shift, multiplicity, parity) of each piece for E(t)."""
        return [(p.shift + t, p.multiplicity, p.parity) for p in self.pieces]


def gr_pushforward(E: Bundle) -> GrDecomposition:
    m = E.space.m
    pieces = tuple(GrPiece(-k, comb(m, k), k % 2) for k in range(m + 1))
    return GrDecomposition(reduce_bundle(E), pieces)


# JSON ---------------------------------------------------------------------

def bundle_to_json(E: Bundle) -> dict:
    return E.to_json()


def bundle_from_json(data) -> Bundle:
    if not isinstance(data, dict):
        raise ValueError("bundle must be a JSON object")
    try:
        space = SuperSpaceSig(int(data["space"]["n"]), int(data["space"]["m"]))
        kind = data["kind"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bundle needs space and kind: {exc}") from exc
    if kind == "split":
        return SplitBundle(space, FreeSupermodule(tuple(data.get("even", ())), tuple(data.get("odd", ()))))
    if kind == "transition":
        frame = FreeSupermodule.from_json(data["frame"])
        trans = {}
        for key, mat in data["transitions"].items():
            i, j = (int(s) for s in key.split(","))
            trans[(i, j)] = SuperMatrix.from_json(mat, space.nx)
        return TransitionBundle(space, frame, trans)
    raise ValueError(f"unknown bundle kind {kind!r}")


def dumps(E: Bundle) -> str:
    return json.dumps(bundle_to_json(E), sort_keys=True, indent=1) + "\n"


def loads(text: str) -> Bundle:
    return bundle_from_json(json.loads(text))


# builtin registry -----------------------------------------------------------

BUILTIN_NAMES = ("O", "O(a)", "split:EVEN|ODD", "tangent", "cotangent", "classical-tangent")


def _int_list(text: str) -> tuple:
    return tuple(int(s) for s in text.split(",") if s.strip())


def builtin_bundle(name: str, space: SuperSpaceSig) -> Bundle:
    """Named bundles: ``O``, ``O(3)``, ``split:1,0|-1`` (even twists | odd twists),
    ``tangent`` and ``cotangent`` (P^{1|1} only), ``classical-tangent``."""
    name = name.strip()
    try:
        if name == "O":
            return SplitBundle(space, FreeSupermodule((0,)))
        if name.startswith("O(") and name.endswith(")"):
            return SplitBundle(space, FreeSupermodule((int(name[2:-1]),)))
        if name.startswith("split:"):
            even, _, odd = name[len("split:"):].partition("|")
            return SplitBundle(space, FreeSupermodule(_int_list(even), _int_list(odd)))
    except ValueError as exc:
        raise ValueError(f"cannot parse builtin {name!r}: {exc}") from exc
    if name == "tangent":
        return euler_tangent(space)
    if name == "cotangent":
        return euler_cotangent(space)
    if name == "classical-tangent":
        return classical_tangent(space)
    raise ValueError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}")
