"""Buchberger's algorithm over Q with the Gebauer-Moeller pair criteria.

Polynomials are handled internally as ``dict[monomial, Fraction]``; all
basis elements are kept monic.  The monomial order is degree reverse
lexicographic with variables ranked in ring order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from ..core import PhaseLabError
from .poly import (
    Monomial,
    RationalMPoly,
    common_gens,
    degrevlex_key,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

Poly = dict  # Monomial -> Fraction


class GroebnerBudgetExceeded(PhaseLabError):
    pass


@dataclass(frozen=True)
class Ideal:
    generators: tuple[RationalMPoly, ...]
    gens: tuple[str, ...]

    @classmethod
    def of(cls, polys, gens=None) -> "Ideal":
        polys = tuple(polys)
        if gens is None:
            gens = common_gens(polys)
        elif polys:
            common = common_gens(polys)
            if tuple(common) != tuple(gens):
                raise ValueError("generators live in a different ring")
        if not gens:
            raise ValueError("ideal needs at least one variable")
        return cls(polys, tuple(gens))

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def is_homogeneous(self) -> bool:
        return all(p.is_homogeneous() for p in self.generators)


def _lm(f: Poly) -> Monomial:
    return min(f, key=degrevlex_key)


def _monic(f: Poly) -> Poly:
    lc = f[_lm(f)]
    if lc == 1:
        return f
    return {m: c / lc for m, c in f.items()}


def _find_reducer(m: Monomial, basis: list[tuple[Monomial, Poly]]):
    for lm, g in basis:
        if mono_divides(lm, m):
            return lm, g
    return None


def normal_form(f: Poly, basis: list[tuple[Monomial, Poly]], full: bool = True) -> Poly:
    """Remainder of f on division by monic basis elements ``(lm, poly)``.

    With ``full=False`` only the leading term is reduced repeatedly (top
    reduction); otherwise every term of the remainder is irreducible.
    """
    f = dict(f)
    rem: Poly = {}
    heap = [(degrevlex_key(m), m) for m in f]
    heapq.heapify(heap)
    while heap:
        _, m = heapq.heappop(heap)
        c = f.get(m)
        if c is None:
            continue
        red = _find_reducer(m, basis)
        if red is None:
            del f[m]
            rem[m] = c
            if not full:
                rem.update(f)
                return rem
            continue
        lm, g = red
        q = mono_div(m, lm)
        for e, d in g.items():
            t = mono_mul(e, q)
            old = f.get(t)
            if old is None:
                f[t] = -c * d
                heapq.heappush(heap, (degrevlex_key(t), t))
            else:
                new = old - c * d
                if new:
                    f[t] = new
                else:
                    del f[t]
    return rem


def _spoly(f: Poly, lf: Monomial, g: Poly, lg: Monomial) -> Poly:
    L = mono_lcm(lf, lg)
    qf = mono_div(L, lf)
    qg = mono_div(L, lg)
    out: Poly = {}
    for m, c in f.items():
        out[mono_mul(m, qf)] = c
    for m, c in g.items():
        t = mono_mul(m, qg)
        v = out.get(t, 0) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


@dataclass
class GroebnerStats:
    pairs_reduced: int = 0
    zero_reductions: int = 0
    max_degree: int = 0


def _groebner_raw(polys: list[Poly], max_pairs: int, max_degree: int | None, stats: GroebnerStats):
    store: list[Poly] = []
    lms: list[Monomial] = []
    G: list[int] = []
    B: set[tuple[int, int]] = set()

    def update(h: int):
        nonlocal G, B
        lh = lms[h]
        C = list(G)
        D: list[int] = []
        while C:
            g1 = C.pop(0)
            l1 = mono_lcm(lh, lms[g1])
            if mono_coprime(lh, lms[g1]):
                D.append(g1)
                continue
            dominated = any(mono_divides(mono_lcm(lh, lms[g2]), l1) for g2 in C) or any(
                mono_divides(mono_lcm(lh, lms[g2]), l1) for g2 in D
            )
            if not dominated:
                D.append(g1)
        E = [g for g in D if not mono_coprime(lh, lms[g])]
        newB = set()
        for g1, g2 in B:
            L = mono_lcm(lms[g1], lms[g2])
            if mono_divides(lh, L) and mono_lcm(lms[g1], lh) != L and mono_lcm(lh, lms[g2]) != L:
                continue
            newB.add((g1, g2))
        for g in E:
            newB.add((g, h))
        B = newB
        G = [g for g in G if not mono_divides(lh, lms[g])] + [h]

    def add(f: Poly):
        f = _monic(f)
        store.append(f)
        lm = _lm(f)
        lms.append(lm)
        stats.max_degree = max(stats.max_degree, sum(lm))
        update(len(store) - 1)

    def basis():
        return [(lms[g], store[g]) for g in G]

    for f in sorted((p for p in polys if p), key=lambda p: degrevlex_key(_lm(p)), reverse=True):
        r = normal_form(f, basis())
        if r:
            add(r)

    def pair_key(p):
        L = mono_lcm(lms[p[0]], lms[p[1]])
        return (sum(L), degrevlex_key(L), p)

    while B:
        pair = min(B, key=pair_key)
        B.discard(pair)
        i, j = pair
        if max_degree is not None and sum(mono_lcm(lms[i], lms[j])) > max_degree:
            raise GroebnerBudgetExceeded(f"S-pair degree exceeds cap {max_degree}")
        stats.pairs_reduced += 1
        if stats.pairs_reduced > max_pairs:
            raise GroebnerBudgetExceeded(f"more than {max_pairs} S-pairs reduced")
        s = _spoly(store[i], lms[i], store[j], lms[j])
        r = normal_form(s, basis())
        if r:
            add(r)
        else:
            stats.zero_reductions += 1

    return [store[g] for g in G]


def _interreduce(G: list[Poly]) -> list[Poly]:
    """Turn a minimal Groebner basis into the reduced one."""
    G = [_monic(g) for g in G]
    lms = [_lm(g) for g in G]
    keep = [
        i
        for i in range(len(G))
        if not any(j != i and mono_divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i) for j in range(len(G)))
    ]
    G = [G[i] for i in keep]
    lms = [lms[i] for i in keep]
    out = []
    for i, g in enumerate(G):
        others = [(lms[j], G[j]) for j in range(len(G)) if j != i]
        tail = {m: c for m, c in g.items() if m != lms[i]}
        r = normal_form(tail, others)
        r[lms[i]] = Fraction(1)
        out.append(r)
    order = sorted(range(len(out)), key=lambda k: degrevlex_key(_lm(out[k])), reverse=True)
    return [out[k] for k in order]


def groebner(ideal: Ideal, order: str = "degrevlex", max_pairs: int = 100_000,
             max_degree: int | None = None, stats: GroebnerStats | None = None) -> Ideal:
    """Reduced Groebner basis of ``ideal``.

    Raises :class:`GroebnerBudgetExceeded` when more than ``max_pairs``
    S-pairs are reduced or a pair exceeds ``max_degree``.
    """
    if order != "degrevlex":
        raise ValueError("only degrevlex is supported")
    stats = stats if stats is not None else GroebnerStats()
    raw = [dict(p.terms) for p in ideal.generators]
    G = _interreduce(_groebner_raw(raw, max_pairs, max_degree, stats))
    return Ideal(tuple(RationalMPoly(g, ideal.gens) for g in G), ideal.gens)


def reduce(f: RationalMPoly, basis: Ideal) -> RationalMPoly:
    """Full normal form of f with respect to ``basis`` (assumed a Groebner basis for a canonical answer)."""
    reducers = [(p.leading_monomial(), dict(p.monic().terms)) for p in basis.generators if p]
    return RationalMPoly(normal_form(dict(f.terms), reducers), f.gens)


def leading_monomials(basis: Ideal) -> list[Monomial]:
    return [p.leading_monomial() for p in basis.generators if p]


def is_groebner(basis: Ideal) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    polys = [dict(p.monic().terms) for p in basis.generators if p]
    lms = [_lm(p) for p in polys]
    reducers = list(zip(lms, polys))
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if mono_coprime(lms[i], lms[j]):
                continue
            if normal_form(_spoly(polys[i], lms[i], polys[j], lms[j]), reducers):
                return False
    return True


def is_reduced(basis: Ideal) -> bool:
    polys = [p for p in basis.generators if p]
    lms = [p.leading_monomial() for p in polys]
    for i, p in enumerate(polys):
        if p.leading_coefficient() != 1:
            return False
        for j, q in enumerate(polys):
            if i != j and any(mono_divides(lms[j], m) for m in p.terms):
                return False
    return True
