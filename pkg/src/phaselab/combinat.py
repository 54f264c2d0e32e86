"""Cyclic difference multisets, dihedral canonical forms, collision census and
the complement-property decision procedure."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .core import DEFAULT_TOL, PhaseLabError, SupportSet
from .symmetry import dihedral_orbit


class BudgetExceeded(PhaseLabError):
    pass


@dataclass(frozen=True)
class DiffMultiset:
    """Multiplicities of folded differences ``min(d, N - d)``, ``d`` in ``0..N//2``."""

    counts: tuple[int, ...]
    N: int

    def as_dict(self) -> dict[int, int]:
        return {d: c for d, c in enumerate(self.counts) if c}

    def support(self) -> frozenset[int]:
        """The difference set (multiplicities dropped)."""
        return frozenset(d for d, c in enumerate(self.counts) if c)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{d}^{c}" for d, c in self.as_dict().items()) + "}"


def difference_multiset(S: SupportSet) -> DiffMultiset:
    N = S.N
    counts = [0] * (N // 2 + 1)
    idx = S.indices
    for i, a in enumerate(idx):
        for b in idx[i:]:
            d = (b - a) % N
            counts[min(d, N - d)] += 1
    return DiffMultiset(tuple(counts), N)


def difference_set_size(S: SupportSet) -> int:
    """``|S - S|`` counted as a set (zero included)."""
    return len(difference_multiset(S).support())


def dihedral_canonical(S: SupportSet) -> SupportSet:
    """Lexicographically smallest member of the dihedral orbit."""
    return min(dihedral_orbit(S), key=lambda T: T.indices)


def dihedral_classes(N: int, K: int, max_classes: int | None = None) -> tuple[list[SupportSet], bool]:
    """Canonical representatives of the dihedral classes of K-subsets of Z_N.

    Returns ``(classes, complete)``; ``complete`` is False when enumeration
    stopped at ``max_classes``.
    """
    if not 1 <= K <= N:
        raise ValueError("need 1 <= K <= N")
    seen: set[tuple[int, ...]] = set()
    out: list[SupportSet] = []
    for combo in itertools.combinations(range(N), K):
        if combo[0] != 0:
            # every orbit has a member containing 0
            break
        S = SupportSet(combo, N)
        canon = dihedral_canonical(S)
        if canon.indices in seen:
            continue
        if max_classes is not None and len(out) >= max_classes:
            return sorted(out, key=lambda T: T.indices), False
        seen.add(canon.indices)
        out.append(canon)
    return sorted(out, key=lambda T: T.indices), True


@dataclass
class CensusReport:
    N: int
    K: int
    num_classes: int
    collision_groups: list[tuple[DiffMultiset, list[SupportSet]]]
    complete: bool = True

    @property
    def num_colliding_pairs(self) -> int:
        return sum(comb(len(members), 2) for _, members in self.collision_groups)

    @property
    def num_colliding_classes(self) -> int:
        return sum(len(members) for _, members in self.collision_groups)

    @property
    def proportion(self) -> float:
        return self.num_colliding_classes / self.num_classes if self.num_classes else 0.0

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "K": self.K,
            "num_classes": self.num_classes,
            "num_colliding_pairs": self.num_colliding_pairs,
            "num_colliding_classes": self.num_colliding_classes,
            "proportion": self.proportion,
            "complete": self.complete,
            "groups": [
                {"multiset": list(ms.counts), "sets": [list(S.indices) for S in members]}
                for ms, members in self.collision_groups
            ],
        }


def collision_census(N: int, K: int, max_classes: int | None = None) -> CensusReport:
    """Group dihedral classes of K-subsets by difference multiset and keep the groups of size >= 2."""
    classes, complete = dihedral_classes(N, K, max_classes)
    groups: dict[tuple[int, ...], list[SupportSet]] = defaultdict(list)
    for S in classes:
        groups[difference_multiset(S).counts].append(S)
    collisions = [
        (DiffMultiset(key, N), members)
        for key, members in sorted(groups.items())
        if len(members) >= 2
    ]
    return CensusReport(N, K, len(classes), collisions, complete)


# Complement property ------------------------------------------------------


def _is_rational_matrix(A) -> bool:
    A = np.asarray(A)
    if A.dtype == object:
        return all(isinstance(v, (int, Fraction)) for v in A.flat)
    if np.issubdtype(A.dtype, np.integer):
        return True
    if np.iscomplexobj(A):
        return False
    return bool(np.all(np.isfinite(A)) and np.all(A == np.round(A)))


def exact_rank(rows) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    M = [[Fraction(v) for v in row] for row in rows]
    if not M:
        return 0
    rank = 0
    ncols = len(M[0])
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(M)) if M[r][col] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, len(M)):
            f = M[r][col]
            if f:
                fac = f / p
                M[r] = [a - fac * b for a, b in zip(M[r], M[rank])]
        rank += 1
        if rank == len(M):
            break
    return rank


def numeric_rank(A, rank_tol: float = DEFAULT_TOL.rank_tol) -> int:
    A = np.asarray(A, dtype=float if not np.iscomplexobj(A) else complex)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


@dataclass
class ComplementResult:
    holds: bool
    witness: tuple[int, ...] | None = None
    exact: bool = True

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        return {"pass": self.holds, "witness": list(self.witness) if self.witness else None, "exact": self.exact}


def complement_property(A, max_rows: int = 24, rank_tol: float = DEFAULT_TOL.rank_tol) -> ComplementResult:
    """Check that every row subset or its complement spans R^N.

    Row indices in the witness are 1-based, and the witness is the member of
    the violating (S, S^C) pair that contains row 1.
    """
    arr = np.asarray(A)
    if arr.ndim != 2:
        raise ValueError("A must be a 2-D matrix")
    if np.iscomplexobj(arr) and np.any(np.asarray(arr).imag != 0):
        raise ValueError("complement property is defined for real matrices")
    M, N = arr.shape
    if M > max_rows:
        raise BudgetExceeded(f"M={M} exceeds the exhaustion cap of {max_rows} rows")
    exact = _is_rational_matrix(arr)
    if exact:
        rows = [[Fraction(v) for v in row] for row in arr.tolist()]

        def rank(idx):
            return exact_rank([rows[i] for i in idx])
    else:
        real = np.real(arr).astype(float)

        def rank(idx):
            return numeric_rank(real[list(idx)], rank_tol)

    cache: dict[tuple[int, ...], bool] = {}

    def spans(idx: tuple[int, ...]) -> bool:
        if len(idx) < N:
            return False
        if idx not in cache:
            cache[idx] = rank(idx) == N
        return cache[idx]

    others = range(1, M)
    for size in range(0, M):
        for rest in itertools.combinations(others, size):
            S = (0,) + rest
            C = tuple(i for i in range(M) if i not in S)
            if not spans(S) and not spans(C):
                return ComplementResult(False, tuple(i + 1 for i in S), exact)
    return ComplementResult(True, None, exact)
