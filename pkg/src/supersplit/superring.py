"""Sparse arithmetic in K[x_0..x_n, theta_1..theta_m] with Laurent x-exponents.

A monomial is a pair ``(xexp, odd)`` of tuples: the (possibly negative)
exponents of the even variables and the strictly increasing indices of the
odd variables present.  Every variable has degree 1, so the degree of a
monomial is ``sum(xexp) + len(odd)`` and its parity is ``len(odd) % 2``.

Polynomials are immutable; products follow the Koszul sign rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

Monomial = tuple  # (tuple[int, ...], tuple[int, ...])


@dataclass(frozen=True)
class SuperSpaceSig:
    """Even and odd dimension of P^{n|m}."""

    n: int
    m: int

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError(f"dimensions must be non-negative, got {self.n}|{self.m}")

    @property
    def nx(self) -> int:
        return self.n + 1

    def __str__(self):
        return f"P^{{{self.n}|{self.m}}}"


def merge_odd(a: tuple, b: tuple) -> tuple[int, tuple]:
    """Concatenate two sorted odd index lists and sort them.

    Returns ``(sign, merged)``; ``sign`` is 0 if an index repeats.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    inversions = 0
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            # b[j] jumps over every remaining element of a
            inversions += la - i
            out.append(b[j])
            j += 1
        else:
            return 0, ()
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(out)


def monomial_mul(p: Monomial, q: Monomial) -> tuple[int, Monomial]:
    sign, odd = merge_odd(p[1], q[1])
    if sign == 0:
        return 0, None
    xexp = tuple(u + v for u, v in zip(p[0], q[0]))
    return sign, (xexp, odd)


def monomial_degree(mono: Monomial) -> int:
    return sum(mono[0]) + len(mono[1])


def _normalize_monomial(mono) -> Monomial:
    xexp, odd = mono
    xexp = tuple(int(e) for e in xexp)
    odd = tuple(int(j) for j in odd)
    if any(j < 1 for j in odd):
        raise ValueError(f"odd indices start at 1, got {odd}")
    if any(odd[k] >= odd[k + 1] for k in range(len(odd) - 1)):
        raise ValueError(f"odd indices must be strictly increasing, got {odd}")
    return xexp, odd


class SuperPoly:
    """Immutable sparse element of the localized superring.

    >>> t1, t2 = SuperPoly.theta(1, 1), SuperPoly.theta(2, 1)
    >>> (t2 * t1) == -(t1 * t2)
    True
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), *, _trusted: bool = False):
        if _trusted:
            self._terms = terms
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            acc: dict = {}
            nx = None
            for mono, c in items:
                mono = _normalize_monomial(mono)
                if nx is None:
                    nx = len(mono[0])
                elif len(mono[0]) != nx:
                    raise ValueError("inconsistent number of even variables")
                c = Fraction(c)
                acc[mono] = acc.get(mono, 0) + c
            self._terms = {k: v for k, v in acc.items() if v != 0}
        self._hash = None

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "SuperPoly":
        return cls({}, _trusted=True)

    @classmethod
    def const(cls, c, nx: int) -> "SuperPoly":
        c = Fraction(c)
        if c == 0:
            return cls.zero()
        return cls({((0,) * nx, ()): c}, _trusted=True)

    @classmethod
    def monomial(cls, xexp, odd=(), c=1) -> "SuperPoly":
        return cls({(tuple(xexp), tuple(odd)): c})

    @classmethod
    def x(cls, i: int, nx: int, power: int = 1) -> "SuperPoly":
        xexp = [0] * nx
        xexp[i] = power
        return cls({(tuple(xexp), ()): Fraction(1)}, _trusted=True)

    @classmethod
    def theta(cls, j: int, nx: int) -> "SuperPoly":
        if j < 1:
            raise ValueError("odd variables are numbered from 1")
        return cls({((0,) * nx, (j,)): Fraction(1)}, _trusted=True)

    # container protocol -----------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def items(self) -> Iterator:
        return iter(sorted(self._terms.items()))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, SuperPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            if len(self._terms) != 1:
                return False
            (mono, c), = self._terms.items()
            return not mono[1] and not any(mono[0]) and c == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # gradings -----------------------------------------------------------
    def degrees(self) -> set:
        return {monomial_degree(m) for m in self._terms}

    def parities(self) -> set:
        return {len(m[1]) % 2 for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1 and len(self.parities()) <= 1

    @property
    def degree(self) -> int | None:
        """Z-degree of a homogeneous polynomial (None for zero)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("polynomial is not Z-homogeneous")
        return next(iter(ds)) if ds else None

    @property
    def parity(self) -> int | None:
        ps = self.parities()
        if len(ps) > 1:
            raise ValueError("polynomial is not Z2-homogeneous")
        return next(iter(ps)) if ps else None

    def odd_order(self) -> int:
        """Smallest number of odd factors among the terms (J-adic order)."""
        if not self._terms:
            return 10**9
        return min(len(m[1]) for m in self._terms)

    def max_pole(self) -> int:
        """Largest negative x-exponent, as a positive integer (0 if none)."""
        return max((-e for m in self._terms for e in m[0] if e < 0), default=0)

    def max_abs_exponent(self) -> int:
        return max((abs(e) for m in self._terms for e in m[0]), default=0)

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return SuperPoly({k: -v for k, v in self._terms.items()}, _trusted=True)

    def __add__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, v in other._terms.items():
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return SuperPoly(acc, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SuperPoly":
        c = Fraction(c)
        if c == 0:
            return SuperPoly.zero()
        return SuperPoly({k: v * c for k, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) == 1:
                (mono, c), = self._terms.items()
                if not mono[1]:
                    xexp = tuple(e * k for e in mono[0])
                    return SuperPoly({(xexp, ()): Fraction(1) / c ** (-k)}, _trusted=True)
            raise ValueError("negative powers only for monomials in the even variables")
        if not self._terms:
            if k == 0:
                raise ValueError("0**0 has no well-defined number of even variables")
            return SuperPoly.zero()
        nx = len(next(iter(self._terms))[0])
        out = SuperPoly.const(1, nx)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def bosonic_reduce(self) -> "SuperPoly":
        return bosonic_reduce(self)

    def __repr__(self):
        return f"SuperPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (xexp, odd), c in sorted(self._terms.items()):
            factors = []
            for i, e in enumerate(xexp):
                if e == 1:
                    factors.append(f"x{i}")
                elif e:
                    factors.append(f"x{i}^{e}")
            factors.extend(f"t{j}" for j in odd)
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    # serialization ------------------------------------------------------
    def to_json(self) -> list:
        return [
            {"c": str(c), "x": list(xexp), "theta": list(odd)}
            for (xexp, odd), c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data) -> "SuperPoly":
        if not isinstance(data, list):
            raise ValueError("polynomial must be a list of terms")
        terms = []
        for t in data:
            if not isinstance(t, dict) or set(t) - {"c", "x", "theta"}:
                raise ValueError(f"bad term {t!r}")
            terms.append(((tuple(t["x"]), tuple(t.get("theta", ()))), Fraction(t["c"])))
        return cls(terms)


def _coerce(other, like: SuperPoly):
    if isinstance(other, SuperPoly):
        return other
    if isinstance(other, (int, Fraction)):
        if other == 0:
            return SuperPoly.zero()
        if not like._terms:
            raise ValueError("cannot infer the number of even variables from the zero polynomial")
        nx = len(next(iter(like._terms))[0])
        return SuperPoly.const(other, nx)
    return None


def mul(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    """Product with the Koszul sign; x-variables are central."""
    acc: dict = {}
    for mf, cf in f._terms.items():
        xf, of = mf
        for mg, cg in g._terms.items():
            sign, odd = merge_odd(of, mg[1])
            if not sign:
                continue
            key = (tuple(u + v for u, v in zip(xf, mg[0])), odd)
            c = cf * cg if sign > 0 else -cf * cg
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                del acc[key]
    return SuperPoly(acc, _trusted=True)


def bosonic_reduce(f: SuperPoly) -> SuperPoly:
    """Image in the quotient by the ideal generated by the odd variables."""
    return SuperPoly({k: v for k, v in f._terms.items() if not k[1]}, _trusted=True)


def localize_check(f: SuperPoly) -> bool:
    """True iff ``f`` is a valid element of the ring localized at monomials in x.

    Negative exponents are representable only for even variables, so the
    check reduces to the normal form of the odd part.
    """
    for xexp, odd in f.terms:
        if any(j < 1 for j in odd):
            return False
        if any(odd[k] >= odd[k + 1] for k in range(len(odd) - 1)):
            return False
        if not all(isinstance(e, int) for e in xexp):
            return False
    return True


def odd_subsets(m: int, k: int | None = None) -> list[tuple]:
    """All normal-form odd monomials in theta_1..theta_m (of size k if given)."""
    from itertools import combinations

    sizes = range(m + 1) if k is None else [k]
    return [c for s in sizes for c in combinations(range(1, m + 1), s)]
