"""Hilbert series and Hilbert polynomials of homogeneous ideals.

The Hilbert series of ``R/I`` equals that of ``R/in(I)`` for any monomial
order, so everything reduces to monomial ideals.  The numerator ``K(t)`` of
``HS(t) = K(t) / (1 - t)**n`` is computed with the pivot recursion

    K(I) = K(I + <p>) + t**deg(p) * K(I : p)

Hilbert polynomials are written in the basis ``P_i(t) = C(t + i, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .groebner import Ideal, groebner, leading_monomials
from .poly import Monomial, mono_divides


def minimalize(gens) -> tuple[Monomial, ...]:
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out: list[Monomial] = []
    for m in gens:
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return tuple(sorted(out))


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _trim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


@lru_cache(maxsize=None)
def _numerator(gens: tuple[Monomial, ...]) -> tuple[int, ...]:
    if not gens:
        return (1,)
    if any(sum(m) == 0 for m in gens):
        return (0,)
    n = len(gens[0])
    # Pairwise coprime generators form a regular sequence.
    used = [0] * n
    coprime = True
    for m in gens:
        for i, e in enumerate(m):
            if e:
                if used[i]:
                    coprime = False
                used[i] = 1
    if coprime:
        out = [1]
        for m in gens:
            d = sum(m)
            out = _poly_mul(out, [1] + [0] * (d - 1) + [-1])
        return tuple(_trim(out))
    counts = [sum(1 for m in gens if m[i]) for i in range(n)]
    var = max(range(n), key=lambda i: (counts[i], -i))
    e = min(m[var] for m in gens if m[var])
    pivot = tuple(e if i == var else 0 for i in range(n))
    plus = minimalize([m for m in gens if not mono_divides(pivot, m)] + [pivot])
    colon = minimalize(tuple(max(a - b, 0) for a, b in zip(m, pivot)) for m in gens)
    left = list(_numerator(plus))
    right = [0] * e + list(_numerator(colon))
    return tuple(_trim(_poly_add(left, right)))


def hilbert_numerator(monomials, nvars: int) -> list[int]:
    """Coefficients (low degree first) of K(t) with ``HS(R/I) = K(t)/(1-t)**nvars``."""
    gens = minimalize(tuple(int(e) for e in m) for m in monomials)
    if gens and len(gens[0]) != nvars:
        raise ValueError("monomial length does not match nvars")
    return list(_numerator(gens))


def _divide_one_minus_t(a: list[int]) -> list[int]:
    """Exact quotient of a(t) by (1 - t); requires a(1) == 0."""
    out = []
    acc = 0
    for c in a[:-1]:
        acc += c
        out.append(acc)
    if acc + a[-1] != 0:
        raise ValueError("polynomial is not divisible by 1 - t")
    return out or [0]


@dataclass(frozen=True)
class HilbertPoly:
    """``sum_i coeffs[i] * P_i`` together with the reduced Hilbert series data.

    ``h_numerator`` is ``h(t)`` with ``HS = h(t) / (1 - t)**affine_dim`` and
    ``h(1) != 0``.
    """

    coeffs: tuple[int, ...]
    affine_dim: int
    h_numerator: tuple[int, ...]

    @property
    def projective_dimension(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c]
        return nz[-1] if nz else -1

    @property
    def degree(self) -> int:
        """Top coefficient in the P_i basis; for a zero-dimensional cone, h(1)."""
        if self.projective_dimension >= 0:
            return self.coeffs[self.projective_dimension]
        return sum(self.h_numerator)

    def __call__(self, t: int) -> int:
        return sum(c * comb(t + i, i) for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        terms = [(c, i) for i, c in enumerate(self.coeffs) if c][::-1]
        if not terms:
            return "0"
        out = f"{terms[0][0]}P{terms[0][1]}"
        for c, i in terms[1:]:
            out += f" {'-' if c < 0 else '+'} {abs(c)}P{i}"
        return out

    def to_json(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "projective_dimension": self.projective_dimension,
            "affine_dimension": self.affine_dim,
            "degree": self.degree,
            "display": str(self),
        }


def hilbert_polynomial_from_numerator(K: list[int], nvars: int) -> HilbertPoly:
    K = _trim(list(K))
    if K == [0]:
        return HilbertPoly((), 0, (0,))
    d = nvars
    h = K
    while d > 0 and sum(h) == 0:
        h = _trim(_divide_one_minus_t(h))
        d -= 1
    if d == 0:
        return HilbertPoly((), 0, tuple(h))
    # HF(t) = sum_j h_j P_{d-1}(t - j), and P_i(t - j) = sum_k (-1)^k C(j, k) P_{i-k}(t).
    coeffs = [0] * d
    for j, hj in enumerate(h):
        if not hj:
            continue
        for k in range(0, min(j, d - 1) + 1):
            coeffs[d - 1 - k] += hj * (-1) ** k * comb(j, k)
    return HilbertPoly(tuple(coeffs), d, tuple(h))


def hilbert_polynomial_of_monomials(monomials, nvars: int) -> HilbertPoly:
    return hilbert_polynomial_from_numerator(hilbert_numerator(monomials, nvars), nvars)


def hilbert_polynomial(ideal: Ideal, basis: Ideal | None = None, **gb_kwargs) -> HilbertPoly:
    """Hilbert polynomial of ``R/I`` for a homogeneous ideal.

    ``basis`` may supply a precomputed Groebner basis of the same ideal.
    """
    if not ideal.is_homogeneous():
        raise ValueError("Hilbert polynomial requires a homogeneous ideal")
    if basis is None:
        basis = groebner(ideal, **gb_kwargs)
    return hilbert_polynomial_of_monomials(leading_monomials(basis), ideal.nvars)


def hilbert_function_from_numerator(K: list[int], nvars: int, upto: int) -> list[int]:
    """Values ``HF(0..upto)`` by expanding ``K(t) / (1 - t)**nvars`` as a power series."""
    series = [comb(t + nvars - 1, nvars - 1) if nvars > 0 else int(t == 0) for t in range(upto + 1)]
    out = [0] * (upto + 1)
    for j, k in enumerate(K):
        for t in range(j, upto + 1):
            out[t] += k * series[t - j]
    return out
