"""Phaseless measurement operators.

Every operator is a pure map from a signal (and possibly a window) to a
measurement array.  Index conventions:

* DFT kernels use ``exp(-2 pi i n k / N)``.
* STFT windows are stored with length W and zero-extended to length N;
  all STFT indices are reduced mod N.
* FROG uses the aperiodic rule (out-of-range factors are zero) unless
  ``periodic=True``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .core import as_signal, dft, dft_matrix, poly_eval


@dataclass(frozen=True)
class SensingMatrix:
    rows: np.ndarray
    field_tag: str = "complex"

    def __post_init__(self):
        A = np.array(self.rows)
        if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
            raise ValueError("sensing matrix must be a nonempty 2-D array")
        if self.field_tag not in ("real", "complex"):
            raise ValueError("field_tag must be 'real' or 'complex'")
        A = A.astype(float if self.field_tag == "real" else complex)
        if not np.all(np.isfinite(A)):
            raise ValueError("sensing matrix entries must be finite")
        object.__setattr__(self, "rows", A)

    @classmethod
    def from_array(cls, A) -> "SensingMatrix":
        A = np.asarray(A)
        tag = "complex" if np.iscomplexobj(A) and np.any(A.imag != 0) else "real"
        return cls(np.real(A) if tag == "real" else A, tag)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape


@dataclass(frozen=True)
class StftConfig:
    """Window plus hop for the N-periodic STFT."""

    window: np.ndarray
    N: int
    L: int
    _padded: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        w = as_signal(self.window)
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if w.size > self.N:
            raise ValueError(f"window length {w.size} exceeds N={self.N}")
        if self.L < 1:
            raise ValueError("hop L must be >= 1")
        padded = np.zeros(self.N, dtype=complex)
        padded[: w.size] = w
        object.__setattr__(self, "window", w)
        object.__setattr__(self, "_padded", padded)

    @property
    def W(self) -> int:
        return self.window.size

    @property
    def R(self) -> int:
        return self.N // gcd(self.N, self.L)

    @property
    def alpha(self) -> int:
        return gcd(self.L, self.N)

    def shifted_window(self, r: int, window=None) -> np.ndarray:
        """``n -> w[(r L - n) mod N]``, the diagonal of D_r."""
        if window is None:
            padded = self._padded
        else:
            w = as_signal(window)
            padded = np.zeros(self.N, dtype=complex)
            padded[: w.size] = w
        n = np.arange(self.N)
        return padded[(r * self.L - n) % self.N]


def phaseless_linear(A, x) -> np.ndarray:
    """``|A x|**2`` entrywise.

    Integer-valued inputs stay in integer arithmetic so the result is exact.
    """
    A = A.rows if isinstance(A, SensingMatrix) else np.asarray(A)
    if A.ndim != 2:
        raise ValueError("A must be a 2-D matrix")
    xa = np.asarray(x)
    if xa.ndim != 1 or A.shape[1] != xa.size:
        raise ValueError(f"dimension mismatch: A is {A.shape}, x has length {xa.size}")
    if np.issubdtype(A.dtype, np.integer) and np.issubdtype(xa.dtype, np.integer):
        Ax = A.astype(object) @ xa.astype(object)
        return np.array([int(v) * int(v) for v in Ax], dtype=object)
    Ax = A @ as_signal(xa)
    return np.abs(Ax) ** 2


def periodic_autocorr(x) -> np.ndarray:
    """All N lags of ``a[l] = sum_n x[n] conj(x[(n + l) mod N])``."""
    x = as_signal(x)
    N = x.size
    return np.array([np.sum(x * np.conj(np.roll(x, -l))) for l in range(N)])


def reduced_periodic_autocorr(x) -> np.ndarray:
    """Lags ``0 .. N//2`` of the periodic autocorrelation, for real signals."""
    a = periodic_autocorr(x)
    return a[: a.size // 2 + 1]


def aperiodic_autocorr(x) -> np.ndarray:
    """Lags ``0 .. N-1`` of ``sum_{n <= N-1-l} x[n] conj(x[n + l])``."""
    x = as_signal(x)
    N = x.size
    return np.array([np.sum(x[: N - l] * np.conj(x[l:])) for l in range(N)])


def fourier_intensity(x, theta: float) -> float:
    """``|x_hat(w)|**2`` at ``w = exp(-i theta)``."""
    x = as_signal(x)
    return abs(poly_eval(x, np.exp(-1j * theta))) ** 2


def intensity_from_autocorr(acorr, theta: float) -> float:
    """Evaluate the two-sided trigonometric sum of aperiodic autocorrelation lags.

    With ``w = exp(-i theta)``, lag l contributes ``a[l] w**(-l)`` and lag -l
    contributes its conjugate, so real lags enter as ``2 a[l] cos(l theta)``.
    """
    a = np.asarray(acorr, dtype=complex)
    w = np.exp(-1j * theta)
    ell = np.arange(1, a.size)
    total = a[0] + np.sum(a[1:] * w ** (-ell) + np.conj(a[1:]) * w ** ell)
    return float(total.real)


def blind_stft(x, w, cfg: StftConfig) -> np.ndarray:
    """Bilinear STFT ``Y[k, r] = sum_n x[n] w[rL - n] exp(-2 pi i n k / N)``; shape (N, R)."""
    x = as_signal(x)
    if x.size != cfg.N:
        raise ValueError(f"signal length {x.size} != N={cfg.N}")
    F = dft_matrix(cfg.N)
    cols = [F @ (x * cfg.shifted_window(r, w)) for r in range(cfg.R)]
    return np.stack(cols, axis=1)


def stft_phaseless(x, cfg: StftConfig) -> np.ndarray:
    """Magnitudes of the STFT with the configured window; shape (N, R)."""
    return np.abs(blind_stft(x, cfg.window, cfg))


def stft_matrix(cfg: StftConfig) -> np.ndarray:
    """Stacked ``F D_r`` blocks; row ``r*N + k`` gives ``Y[k, r]`` as a linear functional."""
    F = dft_matrix(cfg.N)
    return np.vstack([F * cfg.shifted_window(r)[None, :] for r in range(cfg.R)])


def gabor_frame(w) -> np.ndarray:
    """All N**2 vectors ``w[(n + p) mod N] * omega**(l n)`` with ``omega = exp(2 pi i / N)``.

    Row ``l*N + p`` holds ``w_{l,p}``.
    """
    w = as_signal(w)
    N = w.size
    n = np.arange(N)
    omega = np.exp(2j * np.pi / N)
    rows = [w[(n + p) % N] * omega ** (l * n) for l in range(N) for p in range(N)]
    return np.array(rows)


def gabor_measurements(w, x) -> np.ndarray:
    """``|<x, w_{l,p}>|`` with the inner product conjugate-linear in the frame vector."""
    G = gabor_frame(w)
    return np.abs(G.conj() @ as_signal(x))


def _frog_products(x: np.ndarray, L: int, periodic: bool) -> np.ndarray:
    N = x.size
    M = N // L
    n = np.arange(N)
    cols = []
    for m in range(M + 1):
        idx = n + m * L
        if periodic:
            other = x[idx % N]
        else:
            other = np.where(idx < N, x[np.minimum(idx, N - 1)], 0)
        cols.append(x * other)
    return np.stack(cols, axis=1)


def frog_field(x, L: int, periodic: bool = False) -> np.ndarray:
    """Complex FROG field ``sum_n x[n] x[n + mL] exp(-2 pi i n k / N)``; shape (N, N//L + 1)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    x = as_signal(x)
    return dft_matrix(x.size) @ _frog_products(x, L, periodic)


def frog(x, L: int, periodic: bool = False) -> np.ndarray:
    """FROG traces ``y[k, m] = |sum_n x[n] x[n + mL] exp(-2 pi i n k / N)|**2``.

    ``m`` runs over ``0 .. N // L`` inclusive.  With the default aperiodic
    rule, ``x[n + mL]`` is zero once ``n + mL >= N``; ``periodic=True``
    reduces the index mod N instead.
    """
    return np.abs(frog_field(x, L, periodic)) ** 2


def bandlimit(x, start: int, B: int) -> np.ndarray:
    """Zero every DFT coefficient outside the cyclic block ``start .. start+B-1``."""
    x = as_signal(x)
    N = x.size
    if not 1 <= B <= N:
        raise ValueError("block size must satisfy 1 <= B <= N")
    X = dft(x)
    keep = np.zeros(N, dtype=bool)
    keep[(start + np.arange(B)) % N] = True
    X[~keep] = 0
    return dft_matrix(N).conj() @ X / N


def random_bandlimited(N: int, B: int, rng: np.random.Generator, start: int | None = None) -> np.ndarray:
    if start is None:
        start = int(rng.integers(N))
    X = np.zeros(N, dtype=complex)
    block = (start + np.arange(B)) % N
    X[block] = rng.standard_normal(B) + 1j * rng.standard_normal(B)
    return dft_matrix(N).conj() @ X / N


def fractional_shift(x, s: float, start: int, B: int) -> np.ndarray:
    """Translate a band-limited signal by a real amount ``s``.

    The block ``start .. start+B-1`` is unwrapped to consecutive integer
    frequencies before applying ``exp(-2 pi i k s / N)``, so integer ``s``
    reproduces the cyclic shift ``x[n] -> x[(n - s) mod N]``.
    """
    x = as_signal(x)
    N = x.size
    X = dft(x)
    freqs = start + np.arange(B)
    Y = np.zeros(N, dtype=complex)
    Y[freqs % N] = X[freqs % N] * np.exp(-2j * np.pi * freqs * s / N)
    return dft_matrix(N).conj() @ Y / N


MODELS = ("linear", "pac", "apac", "intensity", "stft", "blindstft", "gabor", "frog")
