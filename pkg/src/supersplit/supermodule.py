"""Free graded supermodules and homogeneous supermatrices between them.

Generators of a :class:`FreeSupermodule` are ordered even first, then odd.
A :class:`SuperMatrix` acts on right coordinates, so composition is the
ordinary matrix product over the superring and all Koszul signs live in
:func:`tensor` and :func:`dual`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .superring import SuperPoly


class ShapeError(ValueError):
    pass


class NotInvertibleError(ValueError):
    pass


@dataclass(frozen=True)
class SuperDim:
    even: int = 0
    odd: int = 0

    def __add__(self, other):
        return SuperDim(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other):
        return SuperDim(self.even - other.even, self.odd - other.odd)

    def __mul__(self, k: int):
        return SuperDim(self.even * k, self.odd * k)

    __rmul__ = __mul__

    def pi(self) -> "SuperDim":
        return SuperDim(self.odd, self.even)

    def is_zero(self) -> bool:
        return self.even == 0 and self.odd == 0

    @classmethod
    def parse(cls, text: str) -> "SuperDim":
        e, o = text.split("|")
        return cls(int(e), int(o))

    def __str__(self):
        return f"{self.even}|{self.odd}"


@dataclass(frozen=True)
class FreeSupermodule:
    """The free module  O(a_1) + ... + O(a_p) + Pi(O(b_1) + ... + O(b_q))."""

    even: tuple = ()
    odd: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "even", tuple(int(a) for a in self.even))
        object.__setattr__(self, "odd", tuple(int(b) for b in self.odd))

    @property
    def rank(self) -> SuperDim:
        return SuperDim(len(self.even), len(self.odd))

    @property
    def size(self) -> int:
        return len(self.even) + len(self.odd)

    @property
    def twists(self) -> tuple:
        return self.even + self.odd

    @property
    def parities(self) -> tuple:
        return (0,) * len(self.even) + (1,) * len(self.odd)

    def pi(self) -> "FreeSupermodule":
        return FreeSupermodule(self.odd, self.even)

    def twist(self, t: int) -> "FreeSupermodule":
        return FreeSupermodule(tuple(a + t for a in self.even), tuple(b + t for b in self.odd))

    def dual(self) -> "FreeSupermodule":
        return FreeSupermodule(tuple(-a for a in self.even), tuple(-b for b in self.odd))

    def same_type(self, other: "FreeSupermodule") -> bool:
        return sorted(self.even) == sorted(other.even) and sorted(self.odd) == sorted(other.odd)

    def to_json(self) -> dict:
        return {"even": list(self.even), "odd": list(self.odd)}

    @classmethod
    def from_json(cls, data) -> "FreeSupermodule":
        if not isinstance(data, dict) or set(data) - {"even", "odd"}:
            raise ValueError(f"bad module {data!r}")
        return cls(tuple(data.get("even", ())), tuple(data.get("odd", ())))

    def __str__(self):
        parts = [f"O({a})" for a in self.even] + [f"PiO({b})" for b in self.odd]
        return " + ".join(parts) if parts else "0"


def direct_sum_modules(f: FreeSupermodule, g: FreeSupermodule) -> FreeSupermodule:
    return FreeSupermodule(f.even + g.even, f.odd + g.odd)


def tensor_modules(f: FreeSupermodule, g: FreeSupermodule) -> tuple[FreeSupermodule, list]:
    """Tensor product and the generator order as a list of index pairs."""
    pairs = [(r, s) for r in range(f.size) for s in range(g.size)]
    pf, pg = f.parities, g.parities
    order = [p for p in pairs if (pf[p[0]] + pg[p[1]]) % 2 == 0]
    order += [p for p in pairs if (pf[p[0]] + pg[p[1]]) % 2 == 1]
    tf, tg = f.twists, g.twists
    n_even = len(f.even) * len(g.even) + len(f.odd) * len(g.odd)
    tw = [tf[r] + tg[s] for r, s in order]
    return FreeSupermodule(tw[:n_even], tw[n_even:]), order


class SuperMatrix:
    """Homogeneous morphism ``source -> target`` with entries in the superring.

    Entry ``(r, c)`` has degree ``twist(target, r) - twist(source, c)``; for
    an even morphism its parity is ``parity(target, r) + parity(source, c)``.
    """

    __slots__ = ("source", "target", "entries", "nx", "parity", "__dict__")

    def __init__(self, source: FreeSupermodule, target: FreeSupermodule,
                 entries: Sequence[Sequence[SuperPoly]], nx: int, parity: int = 0,
                 check: bool = True):
        self.source = source
        self.target = target
        self.nx = nx
        self.parity = parity % 2
        self.entries = tuple(tuple(row) for row in entries)
        if len(self.entries) != target.size or any(len(row) != source.size for row in self.entries):
            raise ShapeError(
                f"entries have shape {len(self.entries)}x{len(self.entries[0]) if self.entries else 0}, "
                f"expected {target.size}x{source.size}")
        if check:
            self.check_homogeneous()

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, module: FreeSupermodule, nx: int) -> "SuperMatrix":
        one, zero = SuperPoly.const(1, nx), SuperPoly.zero()
        k = module.size
        rows = [[one if r == c else zero for c in range(k)] for r in range(k)]
        return cls(module, module, rows, nx, check=False)

    @classmethod
    def zero(cls, source: FreeSupermodule, target: FreeSupermodule, nx: int, parity: int = 0):
        z = SuperPoly.zero()
        rows = [[z] * source.size for _ in range(target.size)]
        return cls(source, target, rows, nx, parity, check=False)

    @classmethod
    def diagonal(cls, module: FreeSupermodule, diag: Sequence[SuperPoly], nx: int, check=True):
        z = SuperPoly.zero()
        k = module.size
        rows = [[diag[r] if r == c else z for c in range(k)] for r in range(k)]
        return cls(module, module, rows, nx, check=check)

    def check_homogeneous(self):
        tt, st = self.target.twists, self.source.twists
        tp, sp = self.target.parities, self.source.parities
        for r, row in enumerate(self.entries):
            for c, f in enumerate(row):
                if f.is_zero():
                    continue
                if not f.is_homogeneous():
                    raise ValueError(f"entry ({r},{c}) = {f} is not homogeneous")
                if f.degree != tt[r] - st[c]:
                    raise ValueError(
                        f"entry ({r},{c}) = {f} has degree {f.degree}, expected {tt[r] - st[c]}")
                if f.parity != (tp[r] + sp[c] + self.parity) % 2:
                    raise ValueError(f"entry ({r},{c}) = {f} has the wrong parity")
                if any(len(mono[0]) != self.nx for mono in f.terms):
                    raise ValueError(f"entry ({r},{c}) uses the wrong number of even variables")

    # access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.target.size, self.source.size

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def blocks(self):
        """The four blocks (A, B, C, D) as nested lists, rows by target parity."""
        p, ps = len(self.target.even), len(self.source.even)
        rows = self.entries
        return ([list(r[:ps]) for r in rows[:p]], [list(r[ps:]) for r in rows[:p]],
                [list(r[:ps]) for r in rows[p:]], [list(r[ps:]) for r in rows[p:]])

    def map_entries(self, fn) -> "SuperMatrix":
        return SuperMatrix(self.source, self.target, [[fn(f) for f in row] for row in self.entries],
                           self.nx, self.parity, check=False)

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def max_pole(self) -> int:
        return max((f.max_pole() for row in self.entries for f in row), default=0)

    def max_abs_exponent(self) -> int:
        return max((f.max_abs_exponent() for row in self.entries for f in row), default=0)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.parity == other.parity and self.entries == other.entries)

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def __matmul__(self, other):
        return compose(self, other)

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        if self.source != other.source or self.target != other.target:
            raise ShapeError("cannot add matrices between different modules")
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        return SuperMatrix(self.source, self.target, rows, self.nx, self.parity, check=False)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + other.scale(-1)

    def scale(self, c) -> "SuperMatrix":
        return self.map_entries(lambda f: f.scale(c))

    def __repr__(self):
        body = "; ".join(", ".join(str(f) for f in row) for row in self.entries)
        return f"SuperMatrix({self.source} -> {self.target}: [{body}])"

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        out = {"source": self.source.to_json(), "target": self.target.to_json(),
               "entries": [[f.to_json() for f in row] for row in self.entries]}
        if self.parity:
            out["parity"] = 1
        return out

    @classmethod
    def from_json(cls, data, nx: int) -> "SuperMatrix":
        if not isinstance(data, dict) or not {"source", "target", "entries"} <= set(data):
            raise ValueError("matrix needs source, target and entries")
        rows = [[SuperPoly.from_json(f) for f in row] for row in data["entries"]]
        return cls(FreeSupermodule.from_json(data["source"]), FreeSupermodule.from_json(data["target"]),
                   rows, nx, data.get("parity", 0))


def _dot(row: Sequence[SuperPoly], col: Sequence[SuperPoly]) -> SuperPoly:
    acc = SuperPoly.zero()
    for a, b in zip(row, col):
        if a and b:
            acc = acc + a * b
    return acc


def compose(g: SuperMatrix, f: SuperMatrix) -> SuperMatrix:
    """``g o f`` (apply ``f`` first)."""
    if g.source != f.target:
        raise ShapeError(f"cannot compose: {f.target} != {g.source}")
    cols = list(zip(*f.entries)) if f.entries else [() for _ in range(f.source.size)]
    rows = [[_dot(row, col) for col in cols] for row in g.entries]
    return SuperMatrix(f.source, g.target, rows, g.nx, (g.parity + f.parity) % 2, check=False)


def bosonic_reduce_matrix(f: SuperMatrix) -> SuperMatrix:
    """Entrywise reduction; for an even morphism the odd blocks vanish."""
    return f.map_entries(SuperPoly.bosonic_reduce)


def nilpotent_part(f: SuperMatrix) -> SuperMatrix:
    return f.map_entries(lambda p: p - p.bosonic_reduce())


def _permute(f: SuperMatrix, source: FreeSupermodule, col_order: Sequence[int],
             target: FreeSupermodule, row_order: Sequence[int]) -> SuperMatrix:
    rows = [[f.entries[r][c] for c in col_order] for r in row_order]
    return SuperMatrix(source, target, rows, f.nx, f.parity, check=False)


def _require_even(*fs: SuperMatrix):
    for f in fs:
        if f.parity:
            raise ValueError("operation defined here for even morphisms only")


def direct_sum(f: SuperMatrix, g: SuperMatrix) -> SuperMatrix:
    _require_even(f, g)
    z = SuperPoly.zero()
    k1, k2 = f.source.size, g.source.size
    rows = [list(r) + [z] * k2 for r in f.entries] + [[z] * k1 + list(r) for r in g.entries]
    src = FreeSupermodule(f.source.twists + g.source.twists, ())
    tgt = FreeSupermodule(f.target.twists + g.target.twists, ())
    block = SuperMatrix(src, tgt, rows, f.nx, check=False)
    # regroup generators even-first
    def order(a: FreeSupermodule, b: FreeSupermodule):
        ea, eb = len(a.even), len(b.even)
        return (list(range(ea)) + [a.size + i for i in range(eb)]
                + list(range(ea, a.size)) + [a.size + i for i in range(eb, b.size)])
    return _permute(block, direct_sum_modules(f.source, g.source), order(f.source, g.source),
                    direct_sum_modules(f.target, g.target), order(f.target, g.target))


def tensor(f: SuperMatrix, g: SuperMatrix) -> SuperMatrix:
    """``f (x) g`` with entry ``(-1)^{|f_rc| |t_s|} f_rc g_sd`` at ((r,s),(c,d))."""
    _require_even(f, g)
    src, col_pairs = tensor_modules(f.source, g.source)
    tgt, row_pairs = tensor_modules(f.target, g.target)
    fp_t, fp_s = f.target.parities, f.source.parities
    gp_t = g.target.parities
    rows = []
    for r, s in row_pairs:
        row = []
        for c, d in col_pairs:
            a, b = f.entries[r][c], g.entries[s][d]
            if not a or not b:
                row.append(SuperPoly.zero())
                continue
            sign = -1 if ((fp_t[r] + fp_s[c]) * gp_t[s]) % 2 else 1
            prod = a * b
            row.append(-prod if sign < 0 else prod)
        rows.append(row)
    return SuperMatrix(src, tgt, rows, f.nx, check=False)


def supertranspose(f: SuperMatrix) -> SuperMatrix:
    """Even morphism ``[A B; C D]`` to ``[A^t C^t; -B^t D^t]``."""
    _require_even(f)
    tp, sp = f.target.parities, f.source.parities
    rows = []
    for c in range(f.source.size):
        row = []
        for r in range(f.target.size):
            e = f.entries[r][c]
            row.append(-e if (tp[r] + sp[c]) * sp[c] % 2 else e)
        rows.append(row)
    return SuperMatrix(f.target.dual(), f.source.dual(), rows, f.nx, check=False)


def dual(f: SuperMatrix) -> SuperMatrix:
    """The transpose morphism ``target^dual -> source^dual``."""
    return supertranspose(f)


def parity_shift(f: SuperMatrix) -> SuperMatrix:
    def order(a: FreeSupermodule):
        return list(range(len(a.even), a.size)) + list(range(len(a.even)))
    return _permute(f, f.source.pi(), order(f.source), f.target.pi(), order(f.target))


def twist(f: SuperMatrix, t: int) -> SuperMatrix:
    return SuperMatrix(f.source.twist(t), f.target.twist(t), f.entries, f.nx, f.parity, check=False)


def parity_sign(module: FreeSupermodule, nx: int) -> SuperMatrix:
    """Canonical identification of a module with its double dual (-1 on odd generators)."""
    one = SuperPoly.const(1, nx)
    return SuperMatrix.diagonal(module, [one if p == 0 else -one for p in module.parities], nx, check=False)


# determinants over the commutative quotient ------------------------------

def det(rows: Sequence[Sequence[SuperPoly]]) -> SuperPoly:
    """Determinant of a square matrix with commuting entries.

    Division-free expansion over column subsets, so it stays exact for
    Laurent polynomial entries without needing polynomial division.
    """
    k = len(rows)
    if k == 0:
        return None  # caller supplies the unit of the right ring
    # minors[mask] = det of rows[0:popcount(mask)] restricted to columns in mask
    minors = {0: None}
    for i in range(k):
        nxt = {}
        for mask, val in minors.items():
            sign_base = 0
            for c in range(k):
                if mask >> c & 1:
                    sign_base += 1
                    continue
                e = rows[i][c]
                if not e:
                    continue
                # sign = (-1)^(number of chosen columns greater than c)
                greater = bin(mask >> (c + 1)).count("1")
                term = e if val is None else val * e
                if greater & 1:
                    term = -term
                key = mask | (1 << c)
                nxt[key] = nxt[key] + term if key in nxt else term
        minors = {m: v for m, v in nxt.items() if v}
        if not minors:
            return SuperPoly.zero()
    return minors.get((1 << k) - 1, SuperPoly.zero())


def _det_or_one(rows, nx):
    return SuperPoly.const(1, nx) if not rows else det(rows)


def is_unit(f: SuperPoly, inverted: Iterable[int] = ()) -> bool:
    """Unit test in K[x] localized at the even variables listed in ``inverted``."""
    inverted = set(inverted)
    if len(f) != 1:
        return False
    (xexp, odd), c = next(iter(f.terms.items()))
    return not odd and c != 0 and all(e == 0 or i in inverted for i, e in enumerate(xexp))


def is_invertible(f: SuperMatrix, inverted: Iterable[int] = ()) -> bool:
    """Invertibility of an even morphism, decided on its bosonic reduction.

    The reduced determinants of the two diagonal blocks must be units of
    the (possibly localized) polynomial ring.
    """
    if f.parity:
        raise ValueError("invertibility is decided for even morphisms")
    if f.source.rank != f.target.rank:
        raise ShapeError(f"non-square morphism {f.source.rank} -> {f.target.rank}")
    if not f.source.same_type(f.target):
        return False
    red = bosonic_reduce_matrix(f)
    a, _, _, d = red.blocks()
    return is_unit(_det_or_one(a, f.nx), inverted) and is_unit(_det_or_one(d, f.nx), inverted)


def _inverse_commutative(rows, nx) -> list:
    """Inverse of a square theta-free matrix with unit determinant (adjugate)."""
    k = len(rows)
    if k == 0:
        return []
    d = det(rows)
    if not is_unit(d, range(nx)):
        raise NotInvertibleError(f"determinant {d} is not a unit")
    dinv = d ** -1
    if k == 1:
        return [[dinv]]
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            minor = [[rows[r][c] for c in range(k) if c != j] for r in range(k) if r != i]
            cof = det(minor)
            if (i + j) & 1:
                cof = -cof
            out[j][i] = cof * dinv
    return out


def invert(f: SuperMatrix, inverted: Iterable[int] | None = None) -> SuperMatrix:
    """Exact inverse of an invertible even morphism.

    Writes ``f = f0 + nu`` with ``f0`` theta-free and ``nu`` nilpotent,
    inverts ``f0`` blockwise by adjugates and sums the terminating series
    ``sum_k (-f0^{-1} nu)^k f0^{-1}``.
    """
    if inverted is None:
        inverted = range(f.nx)
    if not is_invertible(f, inverted):
        raise NotInvertibleError(f"{f!r} is not invertible")
    f0 = bosonic_reduce_matrix(f)
    nu = f - f0
    a, _, _, d = f0.blocks()
    ainv, dinv = _inverse_commutative(a, f.nx), _inverse_commutative(d, f.nx)
    p = len(ainv)
    z = SuperPoly.zero()
    rows = [list(r) + [z] * len(dinv) for r in ainv] + [[z] * p + list(r) for r in dinv]
    # f0 maps source -> target; its inverse maps target -> source
    f0inv = SuperMatrix(f.target, f.source, rows, f.nx, check=False)
    if nu.is_zero():
        return f0inv
    step = compose(f0inv, nu).scale(-1)  # endomorphism of source
    total = f0inv
    power = f0inv
    while True:
        power = compose(step, power)
        if power.is_zero():
            break
        total = total + power
    return total


def series_terms(f: SuperMatrix, count: int) -> list[SuperMatrix]:
    """The first ``count`` terms ``(-f0^{-1} nu)^k f0^{-1}`` of the inverse series."""
    f0 = bosonic_reduce_matrix(f)
    nu = f - f0
    a, _, _, d = f0.blocks()
    ainv, dinv = _inverse_commutative(a, f.nx), _inverse_commutative(d, f.nx)
    z = SuperPoly.zero()
    rows = [list(r) + [z] * len(dinv) for r in ainv] + [[z] * len(ainv) + list(r) for r in dinv]
    f0inv = SuperMatrix(f.target, f.source, rows, f.nx, check=False)
    step = compose(f0inv, nu).scale(-1)
    out = [f0inv]
    for _ in range(count - 1):
        out.append(compose(step, out[-1]))
    return out
