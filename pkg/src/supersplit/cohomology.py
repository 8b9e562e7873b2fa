"""Cohomology of supervector bundles on P^{n|m}.

Two independent routes:

* closed form for split bundles, summing line-bundle cohomology on P^n
  over the J-adic pieces ``E_red(-k)^{C(m,k)}`` (a direct sum when E splits);
* a Cech computation on the standard cover for bundles given by
  transition matrices, using Laurent-monomial bases whose pole orders are
  clipped to a window and certified by re-running at the next window.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .linalg import Echelon, nullspace, to_mpq
from .sheaf import (Bundle, SplitBundle, TransitionBundle, as_transition, dual_bundle, hom_bundle,
                    twist_bundle)
from .superring import SuperPoly, SuperSpaceSig, merge_odd, odd_subsets
from .supermodule import FreeSupermodule, SuperDim, SuperMatrix, compose


class NotStabilized(RuntimeError):
    """Cech dimensions changed between window W and W+1."""

    def __init__(self, twist: int, degree: int | None, window: int, dims: tuple):
        self.twist, self.degree, self.window, self.dims = twist, degree, window, dims
        super().__init__(f"cohomology at twist {twist} not stabilized at window {window}: "
                         f"{dims[0]} vs {dims[1]}; raise the window")

    def to_json(self) -> dict:
        return {"error": "NOT_STABILIZED", "twist": self.twist, "degree": self.degree,
                "window": self.window, "dims": [str(d) for d in self.dims]}


# closed forms ----------------------------------------------------------------

def bott_line(n: int, a: int, i: int) -> int:
    """dim H^i(P^n, O(a))."""
    if not 0 <= i <= n:
        raise ValueError(f"cohomological degree {i} outside 0..{n}")
    if n == 0:
        return 1  # P^0 is a point and every O(a) is trivial
    if i == 0:
        return comb(n + a, n) if a >= 0 else 0
    if i == n:
        return comb(-a - 1, n) if a <= -n - 1 else 0
    return 0


def super_line_cohomology(space: SuperSpaceSig, a: int, i: int) -> SuperDim:
    """H^i(P^{n|m}, O(a)) through the pieces O(a-k)^{C(m,k)} of parity k mod 2."""
    if not 0 <= i <= space.n:
        return SuperDim()
    ev = od = 0
    for k in range(space.m + 1):
        h = comb(space.m, k) * bott_line(space.n, a - k, i)
        if k % 2:
            od += h
        else:
            ev += h
    return SuperDim(ev, od)


def split_cohomology(E: SplitBundle, t: int, i: int) -> SuperDim:
    out = SuperDim()
    for a in E.module.even:
        out = out + super_line_cohomology(E.space, a + t, i)
    for b in E.module.odd:
        out = out + super_line_cohomology(E.space, b + t, i).pi()
    return out


# gauge normalization ----------------------------------------------------------

def _monomial_gauge(E: TransitionBundle, weights: Sequence[int]) -> TransitionBundle:
    """Conjugate by h_i = diag(x_i^{w_r}); the frame twists shift by w."""
    nx = E.nx
    frame = FreeSupermodule(tuple(a + w for a, w in zip(E.frame.even, weights)),
                            tuple(b + w for b, w in zip(E.frame.odd, weights[len(E.frame.even):])))
    trans = {}
    for (i, j), g in E.transitions.items():
        rows = []
        for r, row in enumerate(g.entries):
            new = []
            for c, f in enumerate(row):
                if not f:
                    new.append(f)
                    continue
                terms = {}
                for (xexp, odd), coef in f.terms.items():
                    e = list(xexp)
                    e[i] += weights[r]
                    e[j] -= weights[c]
                    terms[(tuple(e), odd)] = coef
                new.append(SuperPoly(terms, _trusted=True))
            rows.append(new)
        trans[(i, j)] = SuperMatrix(frame, frame, rows, nx, check=False)
    return TransitionBundle(E.space, frame, trans)


def normalize_gauge(E: TransitionBundle) -> tuple[TransitionBundle, tuple]:
    """Isomorphic presentation with smaller pole orders, plus the weights used.

    Weights are read off the bosonic diagonal of g_01: an entry
    c x_0^{-k} x_1^{k} is absorbed by the weight k.
    """
    if E.nx < 2 or E.frame.size == 0:
        return E, (0,) * E.frame.size
    g = E.transitions[(0, 1)]
    weights = []
    for r in range(E.frame.size):
        red = g.entries[r][r].bosonic_reduce()
        w = 0
        if len(red) == 1:
            (xexp, _), _c = next(iter(red.terms.items()))
            if all(e == 0 for k, e in enumerate(xexp) if k > 1) and xexp[0] == -xexp[1]:
                w = xexp[1]
        weights.append(w)
    if not any(weights):
        return E, tuple(weights)
    G = _monomial_gauge(E, weights)
    if G.max_pole() <= E.max_pole():
        return G, tuple(weights)
    return E, (0,) * E.frame.size


def default_window(E: TransitionBundle, t: int) -> int:
    return abs(t) + E.max_entry_degree() + E.space.n + E.space.m + 2


# Cech complex ----------------------------------------------------------------

def _exponents(nx: int, charts: tuple, total: int, w: int):
    """Exponent vectors summing to ``total``, >= -w on ``charts`` and >= 0 elsewhere."""
    low = [(-w if k in charts else 0) for k in range(nx)]
    N = total - sum(low)
    if N < 0:
        return
    for bars in combinations(range(N + nx - 1), nx - 1):
        prev = -1
        e = []
        for b in bars:
            e.append(b - prev - 1)
            prev = b
        e.append(N + nx - 2 - prev)
        yield tuple(x + l for x, l in zip(e, low))


def _within(xexp: tuple, w: int) -> bool:
    return all(e >= -w for e in xexp)


class CechComplexSlice:
    """Clipped Cech complex of E(t) on the standard cover, one parity at a time.

    A cochain on the intersection ``U_I`` is written in the frame of chart
    ``min(I)``; ``bounds[p]`` caps the pole order of level-p basis monomials.
    """

    def __init__(self, E: TransitionBundle, t: int, parity: int, bounds: Sequence[int]):
        self.E = E
        self.t = t
        self.parity = parity
        self.bounds = tuple(bounds)
        self.n = E.space.n
        nx = E.nx
        tw, par = E.frame.twists, E.frame.parities
        self.odds = odd_subsets(E.space.m)
        self.basis: list[list] = []
        for p in range(self.n + 1):
            keys = []
            for I in combinations(range(nx), p + 1):
                for r in range(E.frame.size):
                    for odd in self.odds:
                        if (len(odd) + par[r]) % 2 != parity:
                            continue
                        for xexp in _exponents(nx, I, tw[r] + t - len(odd), self.bounds[p]):
                            keys.append((I, r, xexp, odd))
            self.basis.append(keys)
        self._transport: dict = {}

    def dim(self, p: int) -> int:
        return len(self.basis[p])

    def _column_of(self, l: int, i0: int, r: int):
        key = (l, i0, r)
        if key not in self._transport:
            g = self.E.g(l, i0)
            self._transport[key] = [(rr, g.entries[rr][r]) for rr in range(g.target.size) if g.entries[rr][r]]
        return self._transport[key]

    def delta(self, key) -> dict:
        """Coboundary of one basis cochain, as {row key: coefficient}."""
        I, r, xexp, odd = key
        out: dict = {}
        for l in range(self.E.nx):
            if l in I:
                continue
            J = tuple(sorted(I + (l,)))
            pos = J.index(l)
            if pos == 0:
                for rr, f in self._column_of(l, I[0], r):
                    for (fx, fo), c in f.terms.items():
                        sign, o = merge_odd(fo, odd)
                        if not sign:
                            continue
                        k = (J, rr, tuple(a + b for a, b in zip(fx, xexp)), o)
                        v = out.get(k, 0) + (c if sign > 0 else -c)
                        if v:
                            out[k] = v
                        else:
                            out.pop(k, None)
            else:
                k = (J, r, xexp, odd)
                out[k] = out.get(k, 0) + (-1 if pos % 2 else 1)
        return out

    def differential(self, p: int) -> list[dict]:
        return [self.delta(k) for k in self.basis[p]]


def _rank_of(columns: Iterable[dict], index: dict) -> int:
    ech = Echelon()
    for col in columns:
        if col:
            ech.add({index.setdefault(k, len(index)): c for k, c in col.items()})
    return ech.rank


def _cech_parity_dims(E: TransitionBundle, t: int, parity: int, W: int, degrees: Iterable[int]) -> dict:
    """h^p = dim C^p_W - rank(d_p on C^p_W) - dim(d_{p-1}(C^{p-1}_{W'}) meet C^p_W).

    The coboundaries are taken from a wider window W' = W + n*D (D the
    largest pole of the transitions); the intersection with the clipped
    cochains is the image rank minus the rank of its part outside them.
    """
    n = E.space.n
    D = E.max_pole()
    degrees = list(degrees)
    here = CechComplexSlice(E, t, parity, [W] * (n + 1))
    pre = here if D == 0 else CechComplexSlice(E, t, parity, [W + n * D] * (n + 1))
    cache: dict = {}

    def rank_out(p):
        if ("out", p) not in cache:
            cache[("out", p)] = _rank_of(here.differential(p), {}) if p < n else 0
        return cache[("out", p)]

    def rank_in(p):
        if p == 0:
            return 0
        if pre is here:
            # without poles the coboundary of a clipped cochain stays clipped
            return rank_out(p - 1)
        cols = pre.differential(p - 1)
        total = _rank_of(cols, {})
        outside = ({k: c for k, c in col.items() if not _within(k[2], W)} for col in cols)
        return total - _rank_of(outside, {})

    out = {}
    for p in degrees:
        if p < 0 or p > n:
            out[p] = 0
            continue
        out[p] = here.dim(p) - rank_out(p) - rank_in(p)
    return out


def cech_dims(E: TransitionBundle, t: int, W: int, degrees: Iterable[int] | None = None) -> dict:
    """{i: SuperDim} at a fixed window (no stabilization check)."""
    degrees = list(range(E.space.n + 1)) if degrees is None else list(degrees)
    ev = _cech_parity_dims(E, t, 0, W, degrees)
    od = _cech_parity_dims(E, t, 1, W, degrees)
    return {p: SuperDim(ev[p], od[p]) for p in degrees}


def cech_cohomology_all(E: TransitionBundle, t: int, W: int | None = None,
                        degrees: Iterable[int] | None = None) -> dict:
    """All requested H^i(E(t)), certified stable between W and W+1."""
    G, _ = normalize_gauge(E)
    if W is None:
        W = default_window(G, t)
    a = cech_dims(G, t, W, degrees)
    b = cech_dims(G, t, W + 1, degrees)
    for p in a:
        if a[p] != b[p]:
            raise NotStabilized(t, p, W, (a[p], b[p]))
    return a


def cech_cohomology(E: TransitionBundle, t: int, i: int, W: int | None = None) -> SuperDim:
    if not 0 <= i <= E.space.n:
        return SuperDim()
    return cech_cohomology_all(E, t, W, [i])[i]


# global sections -------------------------------------------------------------

@dataclass
class GlobalSections:
    """Basis of H^0(E(t)) of one parity; ``sections[k][i]`` is the chart-i vector."""

    twist: int
    parity: int
    window: int
    sections: list


def _section_from_chart0(E: TransitionBundle, vec: dict, keys: list) -> dict:
    comps = {}
    for idx, c in vec.items():
        r, xexp, odd = keys[idx]
        comps.setdefault(r, {})[(xexp, odd)] = Fraction(int(c.numerator), int(c.denominator))
    s0 = [SuperPoly(comps.get(r, {}), _trusted=True) for r in range(E.frame.size)]
    col = SuperMatrix(FreeSupermodule((0,)), E.frame, [[f] for f in s0], E.nx, check=False) if s0 else None
    out = {0: s0}
    for j in range(1, E.nx):
        out[j] = [row[0] for row in compose(E.g(j, 0), col).entries] if col else []
    return out


def _global_sections_at(E: TransitionBundle, t: int, parity: int, W: int) -> tuple[list, list]:
    nx = E.nx
    tw, par = E.frame.twists, E.frame.parities
    keys = []
    for r in range(E.frame.size):
        for odd in odd_subsets(E.space.m):
            if (len(odd) + par[r]) % 2 != parity:
                continue
            for xexp in _exponents(nx, (0,), tw[r] + t - len(odd), W):
                keys.append((r, xexp, odd))
    # s_j = g_j0 s_0 must be regular on U_j: collect coefficients of monomials with bad poles
    rows: dict = {}
    for idx, (r, xexp, odd) in enumerate(keys):
        for j in range(1, nx):
            g = E.g(j, 0)
            for rr in range(E.frame.size):
                f = g.entries[rr][r]
                for (fx, fo), c in f.terms.items():
                    sign, o = merge_odd(fo, odd)
                    if not sign:
                        continue
                    e = tuple(a + b for a, b in zip(fx, xexp))
                    if all(v >= 0 or k == j for k, v in enumerate(e)):
                        continue
                    row = rows.setdefault((j, rr, e, o), {})
                    row[idx] = row.get(idx, 0) + to_mpq(c if sign > 0 else -c)
    basis = nullspace(rows.values(), range(len(keys)))
    return basis, keys


def section_pole_bound(E: TransitionBundle) -> int:
    """Pole order in x_0 of the chart-0 part of any global section.

    s_0 = g_0j s_j with s_j free of x_0 poles, so the x_0 poles of s_0 are
    those of g_0j; the smallest bound over j is returned.
    """
    best = None
    for j in range(1, E.nx):
        pole = 0
        for row in E.g(0, j).entries:
            for f in row:
                for (xexp, _), _c in f.terms.items():
                    pole = max(pole, -xexp[0])
        best = pole if best is None else min(best, pole)
    return best or 0


def global_sections(E: TransitionBundle, t: int, parity: int, W: int | None = None) -> GlobalSections:
    """Exact basis of the even or odd part of H^0(E(t)).

    Unknowns are chart-0 sections with pole order at most W in x_0; the
    conditions say that their transport to every other chart is regular.
    """
    if W is None:
        W = section_pole_bound(E)
    basis, keys = _global_sections_at(E, t, parity, W)
    bigger, _ = _global_sections_at(E, t, parity, W + 1)
    if len(basis) != len(bigger):
        raise NotStabilized(t, 0, W, (len(basis), len(bigger)))
    return GlobalSections(t, parity, W, [_section_from_chart0(E, v, keys) for v in basis])


def h0_dim(E: TransitionBundle, t: int, W: int | None = None) -> SuperDim:
    return SuperDim(len(global_sections(E, t, 0, W).sections), len(global_sections(E, t, 1, W).sections))


# dispatch --------------------------------------------------------------------

def cohomology(E: Bundle, t: int, i: int, W: int | None = None) -> SuperDim:
    """H^i(E(t)) by the closed form for split bundles, Cech otherwise."""
    if isinstance(E, SplitBundle):
        return split_cohomology(E, t, i)
    return cech_cohomology(E, t, i, W)


def hom_superdim(F: Bundle, E: Bundle, i: int = 0) -> SuperDim:
    """dim H^i(Hom(F, E)) = dim H^i(E (x) F^dual)."""
    if isinstance(F, SplitBundle):
        out = SuperDim()
        for a in F.module.even:
            out = out + cohomology(E, -a, i)
        for b in F.module.odd:
            out = out + cohomology(E, -b, i).pi()
        return out
    H = hom_bundle(F, E)
    return cohomology(H, 0, i)


# Rao tables ---------------------------------------------------------------------

def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("SUPERSPLIT_THREADS", "1")))
    except ValueError:
        return 1


def _slice(args):
    E, t, i = args
    return t, cohomology(E, t, i)


@dataclass
class RaoTable:
    degree: int
    t_min: int
    t_max: int
    entries: dict = field(default_factory=dict)

    def vanishes(self) -> bool:
        return all(d.is_zero() for d in self.entries.values())

    def nonzero(self) -> list:
        return [(t, d) for t, d in sorted(self.entries.items()) if not d.is_zero()]

    def pi(self) -> "RaoTable":
        return RaoTable(self.degree, self.t_min, self.t_max, {t: d.pi() for t, d in self.entries.items()})

    def to_json(self) -> dict:
        return {"i": self.degree,
                "rows": [{"t": t, "even": d.even, "odd": d.odd} for t, d in sorted(self.entries.items())]}

    def to_text(self) -> str:
        lines = [f"H^{self.degree}", f"{'t':>5}  {'even|odd':>9}"]
        lines += [f"{t:>5}  {str(d):>9}" for t, d in sorted(self.entries.items())]
        return "\n".join(lines)


def rao_table(E: Bundle, i: int, t_min: int, t_max: int) -> RaoTable:
    if t_min > t_max:
        raise ValueError("empty twist window")
    jobs = [(E, t, i) for t in range(t_min, t_max + 1)]
    workers = worker_count()
    if workers > 1 and isinstance(E, TransitionBundle):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_slice, jobs))
    else:
        results = [_slice(j) for j in jobs]
    return RaoTable(i, t_min, t_max, dict(results))


# long exact sequences -----------------------------------------------------------

SOLVED, AMBIGUOUS, INCONSISTENT = "SOLVED", "AMBIGUOUS", "INCONSISTENT"


@dataclass
class LesResult:
    status: str  # SOLVED, AMBIGUOUS or INCONSISTENT
    dims: list
    ranks: list
    detail: str = ""


def _les_one_parity(dims: list, ranks: dict) -> tuple[str, list, list, str]:
    k = len(dims)
    # variables: unknown dims d_j, and map ranks r_1..r_{k-1} (r_0 = r_k = 0)
    var = {}
    for j, d in enumerate(dims):
        if d is None:
            var[("d", j)] = len(var)
    for j in range(1, k):
        if j not in ranks:
            var[("r", j)] = len(var)

    def rank_term(j):
        if j == 0 or j == k:
            return None, 0
        if j in ranks:
            return None, ranks[j]
        return var[("r", j)], 0

    equations = []  # (coeffs dict var->int, constant) meaning sum coeffs*var = constant
    for j in range(k):
        coeffs, const = {}, 0
        for rj in (j, j + 1):
            v, c = rank_term(rj)
            if v is None:
                const -= c
            else:
                coeffs[v] = coeffs.get(v, 0) + 1
        if dims[j] is None:
            coeffs[var[("d", j)]] = coeffs.get(var[("d", j)], 0) - 1
        else:
            const += dims[j]
        equations.append((coeffs, const))
        if dims[j] == 0:
            # ranks are non-negative, so both adjacent ranks vanish
            for rj in (j, j + 1):
                v, _ = rank_term(rj)
                if v is not None:
                    equations.append(({v: 1}, 0))
    # augmented rows; the constant lives in column -1 so it is never a pivot
    ech = Echelon()
    for coeffs, const in equations:
        row = {v + 1: c for v, c in coeffs.items()}
        if const:
            row[0] = const
        if not row:
            continue
        if set(row) == {0}:
            return INCONSISTENT, dims, [], "constant equation violated"
        ech.add(row)
    if 0 in ech.rows:
        return INCONSISTENT, dims, [], "no solution"
    red = ech.reduced_rows()
    solved = {}
    for piv, row in red.items():
        if set(row) <= {piv, 0}:
            val = row.get(0, 0)
            if val.denominator != 1 or val < 0:
                return INCONSISTENT, dims, [], f"forced value {val} is not a natural number"
            solved[piv - 1] = int(val)
    out_dims = [d if d is not None else solved.get(var[("d", j)]) for j, d in enumerate(dims)]
    out_ranks = [ranks.get(j, solved.get(var.get(("r", j)))) for j in range(1, k)]
    status = SOLVED if all(d is not None for d in out_dims) else AMBIGUOUS
    return status, out_dims, out_ranks, ""


def les_solve(segments: Sequence[SuperDim | None], ranks: dict | None = None) -> LesResult:
    """Propagate dimensions along an exact sequence 0 -> V_1 -> ... -> V_k -> 0.

    ``segments`` holds known SuperDims or None; ``ranks`` optionally maps
    j to the SuperDim rank of the map V_j -> V_{j+1} (1-based).  Ranks are
    never guessed: if the data do not force a value the result is
    AMBIGUOUS.
    """
    ranks = ranks or {}
    results = []
    for attr in ("even", "odd"):
        dims = [None if s is None else getattr(s, attr) for s in segments]
        rk = {j: getattr(r, attr) for j, r in ranks.items()}
        results.append(_les_one_parity(dims, rk))
    statuses = {r[0] for r in results}
    if INCONSISTENT in statuses:
        detail = "; ".join(r[3] for r in results if r[3])
        return LesResult(INCONSISTENT, list(segments), [], detail)
    ev, od = results
    dims = [SuperDim(a, b) if a is not None and b is not None else None for a, b in zip(ev[1], od[1])]
    rks = [SuperDim(a, b) if a is not None and b is not None else None for a, b in zip(ev[2], od[2])]
    status = SOLVED if statuses == {SOLVED} else AMBIGUOUS
    return LesResult(status, dims, rks)
