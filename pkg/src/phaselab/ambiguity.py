"""Non-trivial Fourier phase-retrieval ambiguities by root flipping.

A signal x of length N is identified with the polynomial
``x_hat(w) = sum_n x[n] w**n = x[N-1] * prod_i (w - g_i)``.  Replacing any
subset of roots ``g_i`` by ``1 / conj(g_i)`` and rescaling by ``g_i`` leaves
``|x_hat|`` unchanged on the unit circle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import PhaseLabError, as_signal
from .measure import aperiodic_autocorr
from .symmetry import orbit_equivalent


class RootFindingError(PhaseLabError):
    pass


class FlipError(PhaseLabError):
    pass


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    leading: complex
    # number of trailing zeros trimmed from x before root finding
    trimmed: int = 0

    def expand(self) -> np.ndarray:
        """Coefficients (constant term first) of ``leading * prod (w - g)``, zero-padded back."""
        coeffs = self.leading * poly_from_roots(self.roots)
        return np.concatenate([coeffs, np.zeros(self.trimmed, dtype=complex)])


def poly_from_roots(roots) -> np.ndarray:
    """Monic polynomial with the given roots, constant term first."""
    c = np.array([1.0 + 0j])
    for g in roots:
        c = np.concatenate([[0j], c]) - g * np.concatenate([c, [0j]])
    return c


def _horner_with_derivative(coeffs_high: np.ndarray, z: np.ndarray):
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs_high:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def aberth(coeffs, max_iter: int = 500, rel_tol: float = 1e-12) -> np.ndarray:
    """Roots of ``sum_n coeffs[n] w**n`` by Aberth-Ehrlich simultaneous iteration.

    ``coeffs[-1]`` must be nonzero.  Converged roots are polished with a few
    Newton steps.  Raises :class:`RootFindingError` when the residual test
    is not met within ``max_iter`` sweeps.
    """
    a = np.asarray(coeffs, dtype=complex)
    deg = a.size - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    if a[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    high = a[::-1] / a[-1]
    absa = np.abs(high)
    # Initial guesses on a circle of radius given by the geometric mean of
    # root moduli, offset so that no guess is real.
    r0 = abs(high[-1]) ** (1.0 / deg) if high[-1] != 0 else 1.0
    r0 = max(r0, 1e-3)
    z = r0 * np.exp(1j * (2 * np.pi * np.arange(deg) / deg + 0.4))
    eps = np.finfo(float).eps
    norm = np.linalg.norm(a)

    def converged(z):
        p, _ = _horner_with_derivative(high, z)
        bound = np.polyval(absa, np.abs(z))
        return np.abs(p) <= np.maximum(rel_tol * norm / abs(a[-1]), 16 * eps * bound)

    done = np.zeros(deg, dtype=bool)
    for _ in range(max_iter):
        p, dp = _horner_with_derivative(high, z)
        done = np.abs(p) <= 16 * eps * np.polyval(absa, np.abs(z))
        if np.all(done):
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            s = inv.sum(axis=1)
            step = ratio / (1 - ratio * s)
        step = np.where(done | ~np.isfinite(step), 0, step)
        z = z - step
        if np.all(np.abs(step) <= 4 * eps * np.abs(z)) and np.all(converged(z)):
            break
    # Newton polish
    for _ in range(3):
        p, dp = _horner_with_derivative(high, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dp != 0, p / dp, 0)
        trial = z - step
        pt, _ = _horner_with_derivative(high, trial)
        z = np.where(np.abs(pt) < np.abs(p), trial, z)
    if not np.all(converged(z)):
        raise RootFindingError(f"Aberth iteration did not converge after {max_iter} sweeps")
    return z


def _sort_roots(z: np.ndarray) -> tuple[complex, ...]:
    return tuple(sorted((complex(v) for v in z), key=lambda v: (round(v.real, 9), round(v.imag, 9))))


def poly_roots(x, max_iter: int = 500) -> RootSet:
    x = as_signal(x)
    nz = np.flatnonzero(x)
    if nz.size == 0:
        raise RootFindingError("the zero signal has no root set")
    last = int(nz[-1])
    trimmed = x.size - 1 - last
    coeffs = x[: last + 1]
    return RootSet(_sort_roots(aberth(coeffs, max_iter=max_iter)), complex(coeffs[-1]), trimmed)


def flip_roots(rs: RootSet, subset, theta: float = 0.0) -> np.ndarray:
    """Signal whose polynomial is ``e^{i theta} x_{N-1} prod_{i in S} g_i (w - 1/conj(g_i)) prod_{j not in S} (w - g_j)``."""
    subset = sorted(set(int(i) for i in subset))
    roots = list(rs.roots)
    if any(i < 0 or i >= len(roots) for i in subset):
        raise IndexError(f"root index out of range 0..{len(roots) - 1}")
    scale = np.exp(1j * theta) * rs.leading
    new_roots = []
    for i, g in enumerate(roots):
        if i in subset:
            if g == 0:
                raise FlipError("cannot flip a root at zero")
            scale *= g
            new_roots.append(1 / np.conj(g))
        else:
            new_roots.append(g)
    return RootSet(tuple(new_roots), complex(scale), rs.trimmed).expand()


def flip(x, subset, theta: float = 0.0, roots: RootSet | None = None) -> np.ndarray:
    """Flip the roots with the given 0-based indices into ``poly_roots(x).roots``.

    The result is rescaled so that its energy equals that of x.
    """
    x = as_signal(x)
    rs = roots if roots is not None else poly_roots(x)
    y = flip_roots(rs, subset, theta)
    ny, nx = np.linalg.norm(y), np.linalg.norm(x)
    if ny > 0:
        y = y * (nx / ny)
    return y


@dataclass
class AmbiguityResult:
    representatives: list[np.ndarray]
    subsets: list[tuple[int, ...]]
    roots: RootSet
    degenerate: bool = False
    reasons: list[str] = field(default_factory=list)
    truncated: bool = False


def degeneracy_reasons(roots, dist_tol: float = 1e-6, circle_tol: float = 1e-6) -> list[str]:
    g = np.asarray(roots, dtype=complex)
    reasons = []
    if g.size == 0:
        return reasons
    scale = max(1.0, float(np.max(np.abs(g))))
    if np.any(g == 0):
        reasons.append("root at zero")
    if any(abs(a - b) <= dist_tol * scale for a, b in itertools.combinations(g, 2)):
        reasons.append("repeated roots")
    if np.any(np.abs(np.abs(g[g != 0]) - 1) <= circle_tol):
        reasons.append("root on the unit circle")
    nz = g[g != 0]
    refl = 1 / np.conj(nz)
    for i, a in enumerate(nz):
        for j, b in enumerate(refl):
            if i != j and abs(a - b) <= dist_tol * scale:
                reasons.append("root collides with a conjugate-inverse")
                break
        else:
            continue
        break
    return reasons


def enumerate_ambiguities(x, tol: float = 1e-7, max_classes: int | None = None) -> AmbiguityResult:
    """One representative per class of signals sharing x's aperiodic autocorrelation.

    Classes are taken modulo global phase and conjugate reflection.  For
    generic x there are exactly ``2**(N-2)`` of them.
    """
    x = as_signal(x)
    rs = poly_roots(x)
    m = len(rs.roots)
    reasons = degeneracy_reasons(rs.roots)
    flippable = [i for i, g in enumerate(rs.roots) if g != 0]
    if not reasons and m >= 1:
        # S and its complement differ by conjugate reflection; fixing the last
        # root halves the search.
        candidates = [c for c in _subsets(flippable) if (m - 1) not in c]
    else:
        candidates = list(_subsets(flippable))
    reps: list[np.ndarray] = []
    subsets: list[tuple[int, ...]] = []
    truncated = False
    for S in candidates:
        y = flip(x, S, 0.0, roots=rs)
        if any(orbit_equivalent(r, y, "phase-conjreflect", tol) for r in reps):
            continue
        if max_classes is not None and len(reps) >= max_classes:
            truncated = True
            break
        reps.append(y)
        subsets.append(S)
    return AmbiguityResult(reps, subsets, rs, bool(reasons), reasons, truncated)


def _subsets(items):
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def same_intensity(x, y, rel_tol: float = 1e-9) -> bool:
    a = aperiodic_autocorr(x)
    b = aperiodic_autocorr(y)
    return bool(np.max(np.abs(a - b)) <= rel_tol * max(1.0, float(np.max(np.abs(a)))))
