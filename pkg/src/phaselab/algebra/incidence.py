"""Incidence ideals of periodic autocorrelations and the two recovery conjectures.

For supports S, S' in Z_N the incidence ideal lives in
``Q[x_s (s in S), y_t (t in S')]`` and is generated by
``a_x[l] - a_y[l]`` for ``l = 0 .. N//2`` (real signals), each scaled to a
primitive integer polynomial.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..combinat import dihedral_canonical, dihedral_classes, difference_set_size
from ..core import SupportSet
from ..symmetry import stabilizer_order
from .groebner import GroebnerBudgetExceeded, Ideal, groebner
from .hilbert import HilbertPoly, hilbert_polynomial
from .poly import RationalMPoly


def incidence_variables(S: SupportSet, S2: SupportSet) -> tuple[str, ...]:
    return tuple(f"x{s}" for s in S) + tuple(f"y{t}" for t in S2)


def _autocorr_poly(support: SupportSet, offset: int, lag: int, gens) -> RationalMPoly:
    """Raw periodic autocorrelation at one lag for the signal whose entry at s is variable ``offset + rank(s)``."""
    N = support.N
    pos = {s: offset + k for k, s in enumerate(support)}
    terms: dict = {}
    n = len(gens)
    for s in support:
        t = (s + lag) % N
        if t in pos:
            e = [0] * n
            e[pos[s]] += 1
            e[pos[t]] += 1
            e = tuple(e)
            terms[e] = terms.get(e, 0) + 1
    return RationalMPoly(terms, gens)


def incidence_ideal(S: SupportSet, S2: SupportSet) -> Ideal:
    if S.N != S2.N:
        raise ValueError("supports must share the modulus N")
    gens = incidence_variables(S, S2)
    polys = []
    for lag in range(S.N // 2 + 1):
        f = _autocorr_poly(S, 0, lag, gens) - _autocorr_poly(S2, len(S), lag, gens)
        if f:
            polys.append(f.primitive())
    return Ideal.of(polys, gens)


def signal_incidence_ideal(S: SupportSet) -> Ideal:
    """Incidence ideal of S with itself, pairs (x, x') in L_S x L_S."""
    return incidence_ideal(S, S)


@dataclass
class IdealReport:
    hilbert: HilbertPoly
    basis_size: int
    seconds: float

    @property
    def affine_dim(self) -> int:
        return self.hilbert.affine_dim

    @property
    def degree(self) -> int:
        return self.hilbert.degree


def analyse_ideal(ideal: Ideal, max_pairs: int = 100_000) -> IdealReport:
    t0 = time.perf_counter()
    basis = groebner(ideal, max_pairs=max_pairs)
    hp = hilbert_polynomial(ideal, basis=basis)
    return IdealReport(hp, len(basis.generators), time.perf_counter() - t0)


# Conjecture checks --------------------------------------------------------


@dataclass
class SignalReport:
    S: SupportSet
    affine_dim: int | None = None
    degree: int | None = None
    expected_degree: int | None = None
    hilbert: HilbertPoly | None = None
    passed: bool | None = None
    skipped: str | None = None

    def to_json(self) -> dict:
        return {
            "S": list(self.S.indices),
            "N": self.S.N,
            "dim": self.affine_dim,
            "degree": self.degree,
            "expected_degree": self.expected_degree,
            "hilbert_coeffs": list(self.hilbert.coeffs) if self.hilbert else None,
            "hilbert": str(self.hilbert) if self.hilbert else None,
            "pass": self.passed,
            "skipped": self.skipped,
        }


def check_signal_conjecture(S: SupportSet, max_pairs: int = 100_000) -> SignalReport:
    """Check that ``I_S`` has dimension |S| and degree ``2 |D_S|`` when ``|S - S| > |S|``."""
    expected = 2 * stabilizer_order(S)
    if difference_set_size(S) <= len(S):
        return SignalReport(S, expected_degree=expected, skipped="|S-S| <= |S|")
    try:
        rep = analyse_ideal(signal_incidence_ideal(S), max_pairs)
    except GroebnerBudgetExceeded as exc:
        return SignalReport(S, expected_degree=expected, skipped=f"budget: {exc}")
    ok = rep.affine_dim == len(S) and rep.degree == expected
    return SignalReport(S, rep.affine_dim, rep.degree, expected, rep.hilbert, ok)


@dataclass
class PairReport:
    S: SupportSet
    S2: SupportSet
    K: int
    affine_dim: int | None = None
    degree: int | None = None
    hilbert: HilbertPoly | None = None
    passed: bool | None = None
    skipped: str | None = None

    def to_json(self) -> dict:
        return {
            "S": list(self.S.indices),
            "S'": list(self.S2.indices),
            "N": self.S.N,
            "K": self.K,
            "dim": self.affine_dim,
            "degree": self.degree,
            "hilbert_coeffs": list(self.hilbert.coeffs) if self.hilbert else None,
            "hilbert": str(self.hilbert) if self.hilbert else None,
            "pass": self.passed,
            "skipped": self.skipped,
        }


def check_support_pair(S: SupportSet, S2: SupportSet, max_pairs: int = 100_000) -> PairReport:
    """Dimension of ``I_{S,S'}`` against the bound ``dim < K``."""
    K = len(S)
    try:
        rep = analyse_ideal(incidence_ideal(S, S2), max_pairs)
    except GroebnerBudgetExceeded as exc:
        return PairReport(S, S2, K, skipped=f"budget: {exc}")
    return PairReport(S, S2, K, rep.affine_dim, rep.degree, rep.hilbert, rep.affine_dim < K)


def qualifying_pairs(N: int, K: int, strict: bool = False) -> list[tuple[SupportSet, SupportSet]]:
    """Unordered pairs of non-equivalent K-subsets with ``|S-S| = |S'-S'| >= K``.

    ``|S-S|`` counts distinct folded differences, 0 included.  When the two
    difference sets coincide and have exactly K elements the ideal has only
    K generators in 2K variables, so its dimension is at least K.
    ``strict=True`` asks for ``|S-S| > K`` instead, the hypothesis under
    which signal recovery is expected.
    """
    classes, _ = dihedral_classes(N, K)
    sizes = [difference_set_size(S) for S in classes]
    bound = K + 1 if strict else K
    out = []
    for i in range(len(classes)):
        for j in range(i + 1, len(classes)):
            if sizes[i] == sizes[j] and sizes[i] >= bound:
                out.append((classes[i], classes[j]))
    return out


@dataclass
class SweepReport:
    mode: str
    N: int
    K: int | None
    reports: list = field(default_factory=list)
    complete: bool = True
    reason: str | None = None
    strict: bool = False

    @property
    def all_pass(self) -> bool:
        tested = [r for r in self.reports if r.skipped is None]
        return all(r.passed for r in tested)

    @property
    def num_tested(self) -> int:
        return sum(1 for r in self.reports if r.skipped is None)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "N": self.N,
            "K": self.K,
            "complete": self.complete,
            "reason": self.reason,
            "strict": self.strict,
            "num_tested": self.num_tested,
            "all_pass": self.all_pass,
            "reports": [r.to_json() for r in self.reports],
        }


def _budget_ms(budget_ms: float | None) -> float | None:
    if budget_ms is not None:
        return budget_ms
    env = os.environ.get("PHASELAB_BUDGET_MS")
    return float(env) if env else None


def _run_jobs(fn, jobs, workers: int, budget_ms: float | None):
    """Run ``fn(*job)`` in order; stop submitting once the time budget is spent."""
    deadline = None if budget_ms is None else time.monotonic() + budget_ms / 1000.0
    results = []
    if workers <= 1:
        for job in jobs:
            if deadline is not None and time.monotonic() > deadline:
                return results, False
            results.append(fn(*job))
        return results, True
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *job) for job in jobs]
        for fut in futures:
            if deadline is not None and time.monotonic() > deadline:
                for f in futures:
                    f.cancel()
                return results, False
            results.append(fut.result())
    return results, True


def check_support_conjecture(N: int, K: int, max_pairs: int = 100_000, workers: int = 1,
                             budget_ms: float | None = None, max_jobs: int | None = None,
                             strict: bool = False) -> SweepReport:
    jobs = [(S, S2, max_pairs) for S, S2 in qualifying_pairs(N, K, strict)]
    complete = True
    reason = None
    if max_jobs is not None and len(jobs) > max_jobs:
        jobs = jobs[:max_jobs]
        complete, reason = False, f"job cap {max_jobs} reached"
    results, finished = _run_jobs(check_support_pair, jobs, workers, _budget_ms(budget_ms))
    if not finished:
        complete, reason = False, "time budget exhausted"
    report = SweepReport("support", N, K, results, complete, reason, strict)
    if any(r.skipped for r in results):
        report.complete = False
        report.reason = report.reason or "Groebner budget exceeded for some pairs"
    return report


def signal_sweep(N: int, K: int, max_pairs: int = 100_000, workers: int = 1,
                 budget_ms: float | None = None) -> SweepReport:
    """Run the signal-recovery check on every dihedral class of K-subsets of Z_N."""
    classes, _ = dihedral_classes(N, K)
    jobs = [(S, max_pairs) for S in classes]
    results, finished = _run_jobs(check_signal_conjecture, jobs, workers, _budget_ms(budget_ms))
    report = SweepReport("signal", N, K, results, finished, None if finished else "time budget exhausted")
    if any(r.skipped and r.skipped.startswith("budget") for r in results):
        report.complete = False
        report.reason = report.reason or "Groebner budget exceeded for some sets"
    return report


def canonical_pair(S: SupportSet, S2: SupportSet) -> tuple[SupportSet, SupportSet]:
    return dihedral_canonical(S), dihedral_canonical(S2)
