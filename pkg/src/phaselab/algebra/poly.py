"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


def degrevlex_key(m: Monomial):
    """Sort key: ascending order under this key is descending degrevlex."""
    return (-sum(m), m[::-1])


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when a divides b."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


class RationalMPoly:
    """Polynomial as a map from exponent tuples to nonzero Fractions.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    __slots__ = ("terms", "gens")

    def __init__(self, terms: Mapping[Monomial, object], gens: Sequence[str]):
        self.gens = tuple(gens)
        n = len(self.gens)
        clean = {}
        for m, c in terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != n:
                raise ValueError(f"exponent {m} does not match {n} variables")
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms: dict[Monomial, Fraction] = clean

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, gens: Sequence[str]) -> "RationalMPoly":
        return cls({}, gens)

    @classmethod
    def constant(cls, c, gens: Sequence[str]) -> "RationalMPoly":
        return cls({(0,) * len(gens): c}, gens)

    @classmethod
    def variable(cls, name: str, gens: Sequence[str]) -> "RationalMPoly":
        gens = tuple(gens)
        e = [0] * len(gens)
        e[gens.index(name)] = 1
        return cls({tuple(e): 1}, gens)

    @classmethod
    def variables(cls, gens: Sequence[str]) -> list["RationalMPoly"]:
        return [cls.variable(g, gens) for g in gens]

    @classmethod
    def parse(cls, text: str, gens: Sequence[str]) -> "RationalMPoly":
        """Parse an arithmetic expression in the generator names (``^`` or ``**`` for powers)."""
        namespace = {g: cls.variable(g, gens) for g in gens}
        expr = text.replace("^", "**")
        return cls._coerce(eval(expr, {"__builtins__": {}}, namespace), tuple(gens))

    @staticmethod
    def _coerce(value, gens) -> "RationalMPoly":
        if isinstance(value, RationalMPoly):
            return value
        return RationalMPoly.constant(value, gens)

    # arithmetic -------------------------------------------------------

    def _check(self, other) -> "RationalMPoly":
        other = self._coerce(other, self.gens)
        if other.gens != self.gens:
            raise ValueError("polynomials live in different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return RationalMPoly(t, self.gens)

    __radd__ = __add__

    def __neg__(self):
        return RationalMPoly({m: -c for m, c in self.terms.items()}, self.gens)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        t: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return RationalMPoly(t, self.gens)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        out = RationalMPoly.constant(1, self.gens)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalMPoly):
            try:
                other = self._coerce(other, self.gens)
            except (TypeError, ValueError):
                return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # queries ----------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return min(self.terms, key=degrevlex_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "RationalMPoly":
        lc = self.leading_coefficient()
        return RationalMPoly({m: c / lc for m, c in self.terms.items()}, self.gens)

    def primitive(self) -> "RationalMPoly":
        """Scale to coprime integer coefficients, keeping the sign of the leading term."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        nums = [int(c * den) for c in self.terms.values()]
        g = gcd(*nums)
        return RationalMPoly({m: c * den / g for m, c in self.terms.items()}, self.gens)

    def diff(self, var: int | str) -> "RationalMPoly":
        i = self.gens.index(var) if isinstance(var, str) else var
        t = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                t[tuple(e)] = c * m[i]
        return RationalMPoly(t, self.gens)

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a point; exact for Fraction/int inputs, floating otherwise."""
        total = 0
        for m, c in self.terms.items():
            v = c if all(isinstance(p, (int, Fraction)) for p in point) else float(c)
            for p, e in zip(point, m):
                if e:
                    v = v * p**e
            total = total + v
        return total

    def substitute(self, images: Sequence["RationalMPoly"]) -> "RationalMPoly":
        """Replace variable i by ``images[i]`` (all in one common target ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].gens if images else self.gens
        out = RationalMPoly.zero(target)
        for m, c in self.terms.items():
            term = RationalMPoly.constant(c, target)
            for img, e in zip(images, m):
                if e:
                    term = term * img**e
            out = out + term
        return out

    def __repr__(self):
        return f"RationalMPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=degrevlex_key):
            c = self.terms[m]
            factors = []
            for g, e in zip(self.gens, m):
                if e == 1:
                    factors.append(g)
                elif e > 1:
                    factors.append(f"{g}^{e}")
            mono = "*".join(factors)
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def common_gens(polys: Iterable[RationalMPoly]) -> tuple[str, ...]:
    gens = None
    for p in polys:
        if gens is None:
            gens = p.gens
        elif p.gens != gens:
            raise ValueError("generators live in different rings")
    if gens is None:
        raise ValueError("empty generator list")
    return gens
