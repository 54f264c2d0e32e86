"""Symmetry groups of the measurement models and orbit-equivalence testing.

Conventions (applied to a length-N signal):

* ``CyclicShift(s)``:  ``x'[i] = x[(i + s) mod N]``
* ``Reflect``:         ``x'[i] = x[(N - i) mod N]``   (index 0 fixed)
* ``ConjReflect``:     ``x'[i] = conj(x[N - 1 - i])`` (reversal plus conjugation,
  the trivial ambiguity of the aperiodic autocorrelation)

``Composite((g1, ..., gk))`` is the product ``g1 * ... * gk`` and acts by
applying ``gk`` first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterator, Union

import numpy as np

from .core import DEFAULT_TOL, SupportSet, as_signal
from .measure import StftConfig


@dataclass(frozen=True)
class GlobalPhase:
    theta: float

    def act(self, x: np.ndarray) -> np.ndarray:
        return np.exp(1j * self.theta) * x

    def to_json(self) -> dict:
        return {"type": "GlobalPhase", "theta": float(self.theta)}


@dataclass(frozen=True)
class Sign:
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def act(self, x: np.ndarray) -> np.ndarray:
        return self.sign * x

    def to_json(self) -> dict:
        return {"type": "Sign", "sign": self.sign}


@dataclass(frozen=True)
class CyclicShift:
    s: int

    def act(self, x: np.ndarray) -> np.ndarray:
        N = x.size
        return x[(np.arange(N) + self.s) % N]

    def to_json(self) -> dict:
        return {"type": "CyclicShift", "s": int(self.s)}


@dataclass(frozen=True)
class Reflect:
    def act(self, x: np.ndarray) -> np.ndarray:
        N = x.size
        return x[(-np.arange(N)) % N]

    def to_json(self) -> dict:
        return {"type": "Reflect"}


@dataclass(frozen=True)
class ConjReflect:
    def act(self, x: np.ndarray) -> np.ndarray:
        return np.conj(x[::-1])

    def to_json(self) -> dict:
        return {"type": "ConjReflect"}


@dataclass(frozen=True)
class Composite:
    elements: tuple = ()

    def act(self, x: np.ndarray) -> np.ndarray:
        for g in reversed(self.elements):
            x = g.act(x)
        return x

    def to_json(self) -> dict:
        return {"type": "Composite", "elements": [g.to_json() for g in self.elements]}


GroupElement = Union[GlobalPhase, Sign, CyclicShift, Reflect, ConjReflect, Composite]

IDENTITY = Composite(())


def compose(*elements: GroupElement) -> GroupElement:
    """Product ``g1 * g2 * ...``; identity factors are dropped."""
    flat = []
    for g in elements:
        if isinstance(g, Composite):
            flat.extend(g.elements)
        else:
            flat.append(g)
    if len(flat) == 1:
        return flat[0]
    return Composite(tuple(flat))


def apply(g: GroupElement, x) -> np.ndarray:
    return g.act(as_signal(x))


def element_from_json(data: dict) -> GroupElement:
    kind = data["type"]
    if kind == "GlobalPhase":
        return GlobalPhase(float(data["theta"]))
    if kind == "Sign":
        return Sign(int(data["sign"]))
    if kind == "CyclicShift":
        return CyclicShift(int(data["s"]))
    if kind == "Reflect":
        return Reflect()
    if kind == "ConjReflect":
        return ConjReflect()
    if kind == "Composite":
        return Composite(tuple(element_from_json(e) for e in data["elements"]))
    raise ValueError(f"unknown group element type {kind!r}")


# Dihedral action on supports ---------------------------------------------
#
# An element is a pair (eps, s) acting on indices as i -> eps*i + s (mod N).
# CyclicShift(t) moves the support by -t; Reflect is (-1, 0).


def dihedral_elements(N: int) -> Iterator[tuple[int, int]]:
    for eps in (1, -1):
        for s in range(N):
            yield eps, s


def act_on_support(eps: int, s: int, S: SupportSet) -> SupportSet:
    return SupportSet.of((eps * i + s for i in S), S.N)


def dihedral_as_signal_element(eps: int, s: int) -> GroupElement:
    """The signal-side element whose action moves supports by ``i -> eps*i + s``."""
    if eps == 1:
        return CyclicShift(-s) if s else IDENTITY
    # Reflect first (j -> -j), then shift the support by +s.
    return compose(CyclicShift(-s), Reflect()) if s else Reflect()


def dihedral_orbit(S: SupportSet) -> set[SupportSet]:
    return {act_on_support(eps, s, S) for eps, s in dihedral_elements(S.N)}


def stabilizer_order(S: SupportSet) -> int:
    """Number of the 2N dihedral elements mapping S onto itself."""
    target = set(S.indices)
    N = S.N
    return sum(
        1
        for eps, s in dihedral_elements(N)
        if {(eps * i + s) % N for i in S.indices} == target
    )


# Orbit equivalence --------------------------------------------------------

GROUP_ALIASES = {
    "sign": "sign",
    "phase": "phase",
    "sign-dihedral": "sign-dihedral",
    "sign×dihedral": "sign-dihedral",
    "sign_dihedral": "sign-dihedral",
    "phase-conjreflect": "phase-conjreflect",
    "phase⋉conjreflect": "phase-conjreflect",
    "phase_conjreflect": "phase-conjreflect",
    "o2": "phase-conjreflect",
}


def normalize_group_tag(tag: str) -> str:
    try:
        return GROUP_ALIASES[tag.lower()]
    except KeyError:
        raise ValueError(f"unknown group {tag!r}; expected one of sign, phase, sign-dihedral, phase-conjreflect")


def _discrete_elements(tag: str, N: int) -> list[GroupElement]:
    if tag == "sign":
        return [IDENTITY, Sign(-1)]
    if tag == "phase":
        return [IDENTITY]
    if tag == "phase-conjreflect":
        return [IDENTITY, ConjReflect()]
    if tag == "sign-dihedral":
        out: list[GroupElement] = []
        for sgn in (1, -1):
            for eps in (1, -1):
                for s in range(N):
                    g = dihedral_as_signal_element(eps, s)
                    if sgn == -1:
                        g = compose(Sign(-1), g)
                    out.append(g)
        return out
    raise ValueError(tag)


@dataclass
class Equivalence:
    equivalent: bool
    witness: GroupElement | None
    distance: float = field(default=float("inf"))

    def __bool__(self) -> bool:
        return self.equivalent


def orbit_equivalent(x, y, group: str = "phase", tol: float = DEFAULT_TOL.eq_tol) -> Equivalence:
    """Decide whether ``y = g.x`` for some g in the named group.

    The discrete part of the group is enumerated exhaustively.  For groups
    with a continuous phase the best phase for each discrete element is
    ``arg <g.x, y>``.  Equivalence means ``||g.x - y|| <= tol * max(||x||, ||y||)``.
    The returned witness achieves the smallest distance found.
    """
    tag = normalize_group_tag(group)
    x = as_signal(x)
    y = as_signal(y)
    if x.size != y.size:
        return Equivalence(False, None)
    scale = max(np.linalg.norm(x), np.linalg.norm(y))
    if scale == 0:
        return Equivalence(True, IDENTITY, 0.0)
    continuous = tag in ("phase", "phase-conjreflect")
    best: tuple[float, GroupElement | None] = (float("inf"), None)
    for g in _discrete_elements(tag, x.size):
        gx = g.act(x)
        if continuous:
            inner = np.vdot(gx, y)
            theta = float(np.angle(inner)) if abs(inner) > 0 else 0.0
            g = compose(GlobalPhase(theta), g)
            gx = np.exp(1j * theta) * gx
        d = float(np.linalg.norm(gx - y) / scale)
        if d < best[0]:
            best = (d, g)
    d, g = best
    ok = bool(d <= tol)
    return Equivalence(ok, g if ok else None, d)


# Blind STFT ambiguities ---------------------------------------------------


@dataclass(frozen=True)
class BlindStftElement:
    """Element ``(theta, lam, j)`` of S^1 x (C^x)^alpha x Z_R."""

    theta: float
    lam: tuple[complex, ...]
    j: int

    def __post_init__(self):
        lam = tuple(complex(v) for v in self.lam)
        if any(v == 0 for v in lam):
            raise ValueError("lambda entries must be nonzero")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def identity(cls, cfg: StftConfig) -> "BlindStftElement":
        return cls(0.0, (1.0,) * cfg.alpha, 0)

    @classmethod
    def random(cls, cfg: StftConfig, rng: np.random.Generator) -> "BlindStftElement":
        lam = rng.standard_normal(cfg.alpha) + 1j * rng.standard_normal(cfg.alpha)
        return cls(float(rng.uniform(0, 2 * np.pi)), tuple(lam), int(rng.integers(cfg.R)))


def blind_apply(g: BlindStftElement, x, w, cfg: StftConfig) -> tuple[np.ndarray, np.ndarray]:
    """Act on a signal/window pair.

    * phase:  ``(e^{i theta} x, e^{i theta} w)``
    * lambda: ``x[n] *= lam[n mod alpha]``, ``w[n] /= lam[(-n) mod alpha]``
    * j in Z_R with ``omega = exp(2 pi i j / R)``:
      ``x[n] *= omega**floor(n / alpha)``, ``w[n] *= omega**ceil(n / alpha)``
    """
    alpha = cfg.alpha
    if alpha != gcd(cfg.L, cfg.N) or len(g.lam) != alpha:
        raise ValueError(f"element needs {alpha} lambda entries")
    x = as_signal(x)
    w = as_signal(w)
    lam = np.array(g.lam)
    nx = np.arange(x.size)
    nw = np.arange(w.size)
    omega = np.exp(2j * np.pi * g.j / cfg.R)
    phase = np.exp(1j * g.theta)
    x2 = phase * lam[nx % alpha] * omega ** (nx // alpha) * x
    w2 = phase / lam[(-nw) % alpha] * omega ** (-((-nw) // alpha)) * w
    return x2, w2
