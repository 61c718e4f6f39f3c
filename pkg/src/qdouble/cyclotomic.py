"""Exact arithmetic in the cyclotomic field ``Q(zeta_e)``.

Elements are stored in the power basis ``1, zeta, ..., zeta^(phi(e)-1)``,
i.e. as remainders modulo the cyclotomic polynomial.  That basis is a
Z-basis of ``Z[zeta_e]``, so algebraic integrality reduces to integrality of
the stored coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Sequence

import sympy


@lru_cache(maxsize=None)
def cyclotomic_poly(e: int) -> tuple[int, ...]:
    """Coefficients of ``Phi_e``, constant term first."""
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(e, x), x).all_coeffs()))


@lru_cache(maxsize=None)
def _reduction(e: int) -> tuple[tuple[int, ...], ...]:
    """Row ``k`` is ``x^k mod Phi_e`` for ``0 <= k < 2e``."""
    phi = cyclotomic_poly(e)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for k in range(2 * e):
        rows.append(tuple(cur))
        # multiply by x, then fold x^deg = -sum phi_i x^i
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi)]
    return tuple(rows)


def _reduce(e: int, powers: Sequence) -> tuple:
    R = _reduction(e)
    deg = len(R[0])
    out = [0] * deg
    for k, c in enumerate(powers):
        if c:
            row = R[k % e]
            for i in range(deg):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(_tidy(c) for c in out)


def _tidy(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class Cyclotomic:
    """An element of ``Q(zeta_e)``; mixed-order operands are embedded in ``Q(zeta_lcm)``."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs: Sequence):
        deg = len(cyclotomic_poly(e)) - 1
        coeffs = tuple(_tidy(c) for c in coeffs)
        if len(coeffs) != deg:
            raise ValueError(f"Q(zeta_{e}) needs {deg} coefficients, got {len(coeffs)}")
        self.e = e
        self.coeffs = coeffs

    @classmethod
    def from_powers(cls, e: int, powers: Sequence) -> Cyclotomic:
        """``sum_k powers[k] * zeta_e^k`` for any length of ``powers``."""
        return cls(e, _reduce(e, powers))

    @classmethod
    def zeta(cls, e: int, k: int = 1) -> Cyclotomic:
        p = [0] * e
        p[k % e] = 1
        return cls.from_powers(e, p)

    @classmethod
    def rational(cls, e: int, q) -> Cyclotomic:
        return cls.from_powers(e, [q])

    # structure

    def embed(self, f: int) -> Cyclotomic:
        """Image in ``Q(zeta_f)`` for a multiple ``f`` of ``e``."""
        if f == self.e:
            return self
        if f % self.e:
            raise ValueError(f"cannot embed Q(zeta_{self.e}) into Q(zeta_{f})")
        step = f // self.e
        powers = [0] * f
        for k, c in enumerate(self.coeffs):
            powers[k * step] = c
        return Cyclotomic.from_powers(f, powers)

    def _common(self, other):
        if isinstance(other, Cyclotomic):
            f = math.lcm(self.e, other.e)
            return self.embed(f), other.embed(f)
        if isinstance(other, (int, Rational)):
            return self, Cyclotomic.rational(self.e, other)
        return None, None

    def galois(self, s: int) -> Cyclotomic:
        """Image under ``zeta -> zeta^s`` (``s`` coprime to ``e``)."""
        if math.gcd(s, self.e) != 1:
            raise ValueError("Galois exponent must be coprime to the order")
        powers = [0] * self.e
        for k, c in enumerate(self.coeffs):
            powers[k * s % self.e] += c
        return Cyclotomic.from_powers(self.e, powers)

    def conjugate(self) -> Cyclotomic:
        return self.galois(-1)

    # predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_rational_integer(self) -> bool:
        return self.is_rational() and Fraction(self.coeffs[0]).denominator == 1

    def is_algebraic_integer(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.coeffs)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.coeffs[0])

    def __int__(self):
        q = self.as_rational()
        if q.denominator != 1:
            raise ValueError(f"{self} is not an integer")
        return int(q)

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.e), math.sin(2 * math.pi / self.e))
        return sum((float(c) * z ** k for k, c in enumerate(self.coeffs)), 0j)

    # arithmetic

    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.e, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.e, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return Cyclotomic(a.e, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            return Cyclotomic(self.e, [x * other for x in self.coeffs])
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        prod = [0] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic.from_powers(a.e, prod)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return Cyclotomic(self.e, [Fraction(x) / other for x in self.coeffs])
        return NotImplemented

    def exact_div(self, d: int) -> Cyclotomic:
        """Division by an integer that must stay inside ``Z[zeta_e]``."""
        if any(Fraction(c) % d for c in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {d} in Z[zeta_{self.e}]")
        return Cyclotomic(self.e, [Fraction(c) / d for c in self.coeffs])

    def __eq__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        z = complex(self)
        return hash((round(z.real, 6), round(z.imag, 6)))

    def __repr__(self):
        return f"Cyclotomic({self.e}, {list(self.coeffs)})"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z{self.e}^{k}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> list:
        return [c if isinstance(c, int) else str(c) for c in self.coeffs]
