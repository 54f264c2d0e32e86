"""Signals, support sets, tolerances and the plain-sum DFT."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

import numpy as np


class PhaseLabError(Exception):
    """Base class for computation failures reported by phaselab."""


@dataclass(frozen=True)
class Tolerances:
    """Numeric cutoffs shared by the floating-point modules.

    ``eq_tol`` is a relative tolerance for comparing floating values.
    ``rank_tol`` is the singular-value cutoff, relative to the largest
    singular value, used for numeric rank.
    """

    eq_tol: float = 1e-9
    rank_tol: float = 1e-8

    def __post_init__(self):
        if not (self.eq_tol > 0 and self.rank_tol > 0):
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerances()


def _to_complex(value) -> complex:
    if isinstance(value, str):
        value = value.strip().replace(" ", "")
        if "/" in value and "j" not in value:
            return complex(float(Fraction(value)))
        return complex(value)
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex pair must have two entries, got {value!r}")
        return complex(_to_complex(value[0]).real, _to_complex(value[1]).real)
    if isinstance(value, Number):
        return complex(value)
    raise TypeError(f"cannot interpret {value!r} as a complex number")


def as_signal(values) -> np.ndarray:
    """Return a fresh 1-D complex128 array after validating it as a signal.

    Accepts numpy arrays, sequences of numbers, ``"p/q"`` strings and
    ``[re, im]`` pairs (the JSON wire form).
    """
    if isinstance(values, np.ndarray):
        if values.ndim != 1:
            raise ValueError("signal must be one-dimensional")
        x = values.astype(complex)
    else:
        x = np.array([_to_complex(v) for v in values], dtype=complex)
    if x.size < 1:
        raise ValueError("signal must have length >= 1")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal entries must be finite")
    return x


def is_real(x: np.ndarray, tol: float = 0.0) -> bool:
    x = np.asarray(x)
    if not np.iscomplexobj(x):
        return True
    return bool(np.all(np.abs(x.imag) <= tol * max(1.0, float(np.max(np.abs(x))))))


@dataclass(frozen=True)
class SupportSet:
    """A nonempty subset of Z_N stored as strictly increasing indices."""

    indices: tuple[int, ...]
    N: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if self.N < 1:
            raise ValueError("modulus N must be >= 1")
        if not idx:
            raise ValueError("support set must be nonempty")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing: {idx}")
        if idx[0] < 0 or idx[-1] >= self.N:
            raise ValueError(f"indices must lie in [0, {self.N - 1}]: {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Iterable[int], N: int) -> "SupportSet":
        """Build from any iterable of indices, reducing mod N and sorting."""
        return cls(tuple(sorted({int(i) % N for i in indices})), N)

    @classmethod
    def from_signal(cls, x, tol: float = 0.0) -> "SupportSet":
        x = np.asarray(x)
        return cls(tuple(int(i) for i in np.flatnonzero(np.abs(x) > tol)), x.size)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def indicator(self) -> np.ndarray:
        x = np.zeros(self.N)
        x[list(self.indices)] = 1.0
        return x

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"


def dft_matrix(N: int) -> np.ndarray:
    n = np.arange(N)
    return np.exp(-2j * np.pi * np.outer(n, n) / N)


def dft(x) -> np.ndarray:
    """Plain-sum DFT: ``X[k] = sum_n x[n] exp(-2 pi i n k / N)``, no scaling."""
    x = as_signal(x)
    return dft_matrix(x.size) @ x


def idft(X) -> np.ndarray:
    """Inverse of :func:`dft` (carries the 1/N factor)."""
    X = as_signal(X)
    return dft_matrix(X.size).conj() @ X / X.size


def roots_of_unity(N: int) -> np.ndarray:
    """The evaluation points ``exp(-2 pi i k / N)`` at which dft samples the polynomial."""
    return np.exp(-2j * np.pi * np.arange(N) / N)


def poly_eval(x, w: complex) -> complex:
    """Evaluate ``sum_n x[n] w**n`` by Horner's rule."""
    x = as_signal(x)
    acc = 0j
    for c in x[::-1]:
        acc = acc * w + c
    return complex(acc)


def close(a, b, tol: float = DEFAULT_TOL.eq_tol) -> bool:
    """Relative closeness of arrays, scaled by the larger max-norm (floor 1)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return bool(np.max(np.abs(a - b), initial=0.0) <= tol * scale)


# JSON wire format --------------------------------------------------------


def signal_to_json(x, force_complex: bool = False) -> list:
    """Real signals become plain numbers, otherwise ``[re, im]`` pairs."""
    x = np.asarray(x)
    if not force_complex and is_real(x):
        return [float(v) for v in np.real(x)]
    return [[float(v.real), float(v.imag)] for v in x.astype(complex)]


def signal_from_json(data: Sequence) -> np.ndarray:
    return as_signal(data)


def array_to_json(a) -> list:
    """Nested lists for real or complex arrays of any rank."""
    a = np.asarray(a)
    if np.iscomplexobj(a) and not is_real(a):
        return np.stack([a.real, a.imag], axis=-1).tolist()
    return np.real(a).astype(float).tolist()
