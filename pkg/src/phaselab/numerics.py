"""Floating-point cross-checks for the algebraic and injectivity claims.

Every phaseless model is presented to the optimiser as squared magnitudes
``|B(x)|**2`` of a holomorphic map B, so residuals are smooth polynomials
in the real coordinates.  Complex unknowns are packed as ``[Re x, Im x]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import DEFAULT_TOL, PhaseLabError, SupportSet, as_signal, dft_matrix, signal_to_json
from .measure import StftConfig, gabor_frame, stft_matrix
from .symmetry import normalize_group_tag, orbit_equivalent


class RankAmbiguity(PhaseLabError):
    """A singular value sits too close to the rank cutoff to call the rank."""



@dataclass
class ResidualMap:
    """``r(z) = measurement(z) - target`` with an analytic real Jacobian.

    ``forward`` maps a signal to ``(B, dB/dx)`` for holomorphic models, or
    directly to ``(r, dr/dz)`` when ``holomorphic`` is False (polynomial
    systems).
    """

    model: str
    N: int
    field_tag: str
    target: np.ndarray
    forward: Callable = field(repr=False)
    holomorphic: bool = True
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.N if self.field_tag == "real" else 2 * self.N

    def to_signal(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if self.field_tag == "real":
            return z.astype(complex)
        return z[: self.N] + 1j * z[self.N:]

    def from_signal(self, x) -> np.ndarray:
        x = as_signal(x)
        if self.field_tag == "real":
            return x.real.copy()
        return np.concatenate([x.real, x.imag])

    def _evaluate(self, z, want_jac: bool):
        z = np.asarray(z, dtype=float)
        if not self.holomorphic:
            r, J = self.forward(z)
            return r - self.target, J
        x = self.to_signal(z) if self.field_tag == "complex" else z
        B, JB = self.forward(x)
        r = np.abs(B) ** 2 - self.target
        if not want_jac:
            return r, None
        G = 2 * (np.conj(B)[:, None] * JB)
        if self.field_tag == "real":
            return r, G.real
        return r, np.hstack([G.real, -G.imag])

    def residual(self, z) -> np.ndarray:
        return self._evaluate(z, False)[0]

    def jacobian(self, z) -> np.ndarray:
        return self._evaluate(z, True)[1]

    def scale(self) -> float:
        t = float(np.linalg.norm(self.target))
        return t if t > 0 else 1.0

    # constructors -----------------------------------------------------

    @staticmethod
    def _target(measure, target, x_ref):
        if target is None:
            if x_ref is None:
                raise ValueError("need a target or a reference signal")
            return np.abs(measure(x_ref)[0]) ** 2
        return np.asarray(target, dtype=float).ravel()

    @classmethod
    def linear(cls, A, target=None, x_ref=None, field_tag: str | None = None) -> "ResidualMap":
        A = np.asarray(A)
        if field_tag is None:
            real = not np.iscomplexobj(A) and (x_ref is None or np.all(np.imag(as_signal(x_ref)) == 0))
            field_tag = "real" if real else "complex"
        Ac = A.astype(complex)

        def fwd(x):
            return Ac @ x, Ac

        t = cls._target(fwd, target, None if x_ref is None else as_signal(x_ref))
        return cls("linear", A.shape[1], field_tag, t, fwd, params={"shape": list(A.shape)})

    @classmethod
    def stft(cls, cfg: StftConfig, target=None, x_ref=None) -> "ResidualMap":
        M = stft_matrix(cfg)
        m = cls.linear(M, target, x_ref, field_tag="complex")
        m.model = "stft"
        m.params = {"N": cfg.N, "W": cfg.W, "L": cfg.L}
        return m

    @classmethod
    def gabor(cls, w, target=None, x_ref=None, rows: Sequence[int] | None = None) -> "ResidualMap":
        G = gabor_frame(w).conj()
        if rows is not None:
            G = G[list(rows)]
        m = cls.linear(G, target, x_ref, field_tag="complex")
        m.model = "gabor"
        m.params = {"N": G.shape[1], "rows": G.shape[0]}
        return m

    @classmethod
    def frog(cls, N: int, L: int, target=None, x_ref=None, periodic: bool = False) -> "ResidualMap":
        if L < 1:
            raise ValueError("L must be >= 1")
        F = dft_matrix(N)
        shifts = []
        for m in range(N // L + 1):
            P = np.zeros((N, N))
            for n in range(N):
                k = n + m * L
                if periodic or k < N:
                    P[n, k % N] = 1.0
            shifts.append(P)

        def fwd(x):
            Bs, Js = [], []
            for P in shifts:
                px = P @ x
                Bs.append(F @ (x * px))
                Js.append(F @ (np.diag(px) + x[:, None] * P))
            # Row k*(M+1) + m, matching frog(x, L).ravel().
            B = np.stack(Bs, axis=1).ravel()
            J = np.stack(Js, axis=1).reshape(-1, N)
            return B, J

        t = cls._target(fwd, target, None if x_ref is None else as_signal(x_ref))
        return cls("frog", N, "complex", t, fwd, params={"N": N, "L": L, "periodic": periodic})

    @classmethod
    def polynomial(cls, polys, gens: Sequence[str], target=None) -> "ResidualMap":
        """Real polynomial system ``f_i(z) - target_i`` over the variables ``gens``."""
        polys = list(polys)
        n = len(gens)
        grads = [[p.diff(i) for i in range(n)] for p in polys]

        def fwd(z):
            pt = [float(v) for v in z]
            r = np.array([float(p.evaluate(pt)) for p in polys])
            J = np.array([[float(d.evaluate(pt)) for d in row] for row in grads]).reshape(len(polys), n)
            return r, J

        t = np.zeros(len(polys)) if target is None else np.asarray(target, dtype=float)
        return cls("polynomial", n, "real", t, fwd, holomorphic=False, params={"gens": list(gens)})


# Levenberg-Marquardt ----------------------------------------------------


@dataclass
class LmResult:
    z: np.ndarray
    cost: float
    iterations: int


def levenberg_marquardt(fmap: ResidualMap, z0, lam0: float = 1e-3, max_iter: int = 500,
                        stop_cost: float = 0.0) -> LmResult:
    """Minimise ``||r(z)||**2``; lambda is multiplied by 10 on a rejected step and divided by 10 on an accepted one."""
    z = np.array(z0, dtype=float)
    r = fmap.residual(z)
    cost = float(r @ r)
    lam = lam0
    J = g = H = None
    it = 0
    for it in range(1, max_iter + 1):
        if cost <= stop_cost:
            break
        if J is None:
            J = fmap.jacobian(z)
            g = J.T @ r
            H = J.T @ J
        d = np.diag(H)
        D = d + 1e-12 * (d.max() if d.size and d.max() > 0 else 1.0)
        try:
            step = np.linalg.solve(H + lam * np.diag(D), -g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H + lam * np.diag(D), -g, rcond=None)[0]
        z_new = z + step
        r_new = fmap.residual(z_new)
        c_new = float(r_new @ r_new)
        if np.isfinite(c_new) and c_new < cost:
            z, r, cost = z_new, r_new, c_new
            lam = max(lam / 10, 1e-15)
            J = None
            if np.linalg.norm(step) <= 1e-15 * (np.linalg.norm(z) + 1e-300):
                break
        else:
            lam *= 10
            if lam > 1e16:
                break
    return LmResult(z, cost, it)


@dataclass
class CollisionReport:
    found: bool
    candidate: np.ndarray | None
    residual: float
    orbit_equivalent: bool
    restart: int | None
    restarts: int
    seed: int
    group: str
    equivalent_solutions: int = 0

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "candidate": None if self.candidate is None else signal_to_json(self.candidate),
            "residual": self.residual if np.isfinite(self.residual) else None,
            "orbit_equivalent": self.orbit_equivalent,
            "restart": self.restart,
            "restarts": self.restarts,
            "seed": self.seed,
            "group": self.group,
            "equivalent_solutions": self.equivalent_solutions,
        }


def collision_search(fmap: ResidualMap, x_ref, group: str = "phase", restarts: int = 200, seed: int = 0,
                     threshold: float = 1e-8, equiv_tol: float = 1e-6, max_iter: int = 500) -> CollisionReport:
    """Look for a signal with the same measurements as ``x_ref`` outside its symmetry orbit.

    Each restart draws its start from its own child of ``SeedSequence(seed)``.
    The residual reported is ``||r|| / ||target||``.  Candidates within
    ``equiv_tol`` of the orbit of ``x_ref`` are never reported; the best
    remaining candidate wins, ties going to the lower restart index.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    tag = normalize_group_tag(group)
    x_ref = as_signal(x_ref)
    scale = fmap.scale()
    spread = float(np.linalg.norm(fmap.from_signal(x_ref))) / np.sqrt(fmap.dim) or 1.0
    stop_cost = (1e-3 * threshold * scale) ** 2
    best = (np.inf, None, None)
    n_equiv = 0
    for k, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(child)
        z0 = rng.standard_normal(fmap.dim) * spread
        res = levenberg_marquardt(fmap, z0, max_iter=max_iter, stop_cost=stop_cost)
        rel = float(np.sqrt(res.cost)) / scale
        x = fmap.to_signal(res.z)
        if orbit_equivalent(x, x_ref, tag, tol=equiv_tol):
            n_equiv += rel < threshold
            continue
        if rel < best[0]:
            best = (rel, x, k)
    rel, x, k = best
    if x is None:
        return CollisionReport(False, None, float("inf"), False, None, restarts, seed, tag, n_equiv)
    return CollisionReport(bool(rel < threshold), x, rel, False, k, restarts, seed, tag, n_equiv)


# Finite-difference validation -------------------------------------------


def gradcheck(fmap: ResidualMap, z0, h: float = 1e-6) -> float:
    """Max entrywise deviation of the analytic Jacobian from central differences, relative to ``max |J|``."""
    if not 1e-7 <= h <= 1e-4:
        raise ValueError("h must lie in [1e-7, 1e-4]")
    z0 = np.asarray(z0, dtype=float)
    J = fmap.jacobian(z0)
    fd = np.empty_like(J)
    for k in range(z0.size):
        e = np.zeros_like(z0)
        e[k] = h
        fd[:, k] = (fmap.residual(z0 + e) - fmap.residual(z0 - e)) / (2 * h)
    denom = float(np.max(np.abs(J))) if J.size else 0.0
    err = float(np.max(np.abs(J - fd))) if J.size else 0.0
    if denom == 0.0:
        return err
    return err / denom


# Local dimension of incidence varieties ---------------------------------


@dataclass
class LocalDimension:
    dim: int
    rank: int
    nvars: int
    singular_values: np.ndarray
    ambiguous: bool

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rank": self.rank,
            "nvars": self.nvars,
            "singular_values": [float(s) for s in self.singular_values],
            "ambiguous": self.ambiguous,
        }


def polynomial_local_dimension(polys, gens: Sequence[str], point, rank_tol: float = DEFAULT_TOL.rank_tol,
                               margin: float = 1e3) -> LocalDimension:
    """``#variables - rank J(point)`` for the system ``polys``.

    Singular values are compared with ``rank_tol * s_max``; one inside a
    factor ``margin`` of that cutoff marks the rank as ambiguous.
    """
    n = len(gens)
    polys = [p for p in polys if p]
    if not polys:
        return LocalDimension(n, 0, n, np.zeros(0), False)
    pt = [float(v) for v in np.asarray(point, dtype=float)]
    if len(pt) != n:
        raise ValueError(f"point has {len(pt)} coordinates, expected {n}")
    J = np.array([[float(p.diff(i).evaluate(pt)) for i in range(n)] for p in polys])
    s = np.linalg.svd(J, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return LocalDimension(n, 0, n, s, False)
    rel = s / smax
    rank = int(np.sum(rel > rank_tol))
    ambiguous = bool(np.any((rel > rank_tol / margin) & (rel < rank_tol * margin)))
    return LocalDimension(n - rank, rank, n, s, ambiguous)


def jacobian_analysis(S: SupportSet, S2: SupportSet, base_point, rank_tol: float = DEFAULT_TOL.rank_tol) -> LocalDimension:
    from .algebra.incidence import incidence_ideal

    ideal = incidence_ideal(S, S2)
    return polynomial_local_dimension(ideal.generators, ideal.gens, base_point, rank_tol)


def jacobian_dimension(S: SupportSet, S2: SupportSet, base_point, rank_tol: float = DEFAULT_TOL.rank_tol,
                       allow_ambiguous: bool = False) -> int:
    """Local dimension of the incidence variety of (S, S') at ``base_point = (x_S, y_S')``."""
    rep = jacobian_analysis(S, S2, base_point, rank_tol)
    if rep.ambiguous and not allow_ambiguous:
        raise RankAmbiguity(f"singular values {rep.singular_values} straddle the rank cutoff")
    return rep.dim


def diagonal_base_point(S: SupportSet, rng: np.random.Generator, sign: int = 1) -> np.ndarray:
    """Random generic point ``(x, sign * x)`` on the diagonal component of I_S."""
    x = rng.standard_normal(len(S))
    return np.concatenate([x, sign * x])


def incidence_base_point(S: SupportSet, S2: SupportSet, restarts: int = 20, seed: int = 0,
                         tol: float = 1e-10) -> np.ndarray | None:
    """A real point of the incidence variety with ``||x||**2 + ||y||**2 = 2``, or None.

    Found by damped least squares from random starts; the sphere constraint
    keeps the search away from the origin of the cone.
    """
    from .algebra.incidence import incidence_ideal
    from .algebra.poly import RationalMPoly

    ideal = incidence_ideal(S, S2)
    v = RationalMPoly.variables(ideal.gens)
    sphere = sum((u * u for u in v), RationalMPoly.zero(ideal.gens)) - 2
    fmap = ResidualMap.polynomial(list(ideal.generators) + [sphere], ideal.gens)
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        res = levenberg_marquardt(fmap, rng.standard_normal(fmap.dim), stop_cost=tol**2 / 100)
        if np.sqrt(res.cost) < tol:
            return res.z
    return None
