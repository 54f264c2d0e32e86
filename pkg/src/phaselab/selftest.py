"""Regression suite over the published worked examples.

Each check records what was expected and what was computed.  Float
comparisons use ``Tolerances.eq_tol`` so a looser tolerance can only turn
failures into passes, never the reverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import DEFAULT_TOL, SupportSet, Tolerances, as_signal, signal_to_json

PAPER_MATRIX = np.array([[1, 2, 3], [1, -1, 1], [2, 1, 4], [1, 2, 1], [2, -1, 1]])
PAPER_X = (1, 1, 9)
PAPER_Y = (19, 7, -21)

QUADRUPLE = (
    ("9/2", 9, "1/2", 1),
    ("3/2", [3, 4], ["3/2", 8], 3),
    ("3/2", [3, -4], ["3/2", -8], 3),
    (9, "9/2", 1, "1/2"),
)
QUADRUPLE_ROOTS = (
    (3j, -3j, -0.5),
    (1j / 3, -3j, -0.5),
    (3j, -1j / 3, -0.5),
    (3j, -3j, -2.0),
)
QUADRUPLE_ACORR = (Fraction(205, 2), Fraction(91, 2), Fraction(45, 4), Fraction(9, 2))

PAIR_GENERATORS = (
    "x0^2 + x1^2 + x2^2 + x4^2 - y0^2 - y1^2 - y2^2 - y5^2",
    "x0*x1 + x1*x2 - y0*y1 - y1*y2",
    "x0*x2 + x2*x4 - y0*y2",
    "x1*x4 - y2*y5 - y5*y0",
    "x0*x4 - y1*y5",
)
SELF_GENERATORS = (
    "x0^2 + x1^2 + x2^2 + x5^2 - y0^2 - y1^2 - y2^2 - y5^2",
    "x0*x1 + x1*x2 - y0*y1 - y1*y2",
    "x0*x2 - y0*y2",
    "x2*x5 + x5*x0 - y2*y5 - y5*y0",
    "x1*x5 - y1*y5",
)


def quadruple() -> list[np.ndarray]:
    return [as_signal(x) for x in QUADRUPLE]


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual, "pass": bool(self.passed)}


@dataclass
class SelftestReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "num_checks": len(self.checks),
            "num_failed": sum(not c.passed for c in self.checks),
            "checks": [c.to_json() for c in self.checks],
        }


def _match_roots(got, want, tol: float) -> bool:
    got = list(np.asarray(got, dtype=complex))
    if len(got) != len(want):
        return False
    for w in want:
        d = [abs(g - w) for g in got]
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        got.pop(k)
    return True


def _roots_json(z) -> list:
    return [[round(float(v.real), 12), round(float(v.imag), 12)] for v in np.asarray(z, dtype=complex)]


def _polys(texts, gens):
    from .algebra.poly import RationalMPoly

    return {RationalMPoly.parse(t, gens).primitive() for t in texts}


def _same_up_to_sign(a: set, b: set) -> bool:
    norm = lambda P: {p if p.leading_coefficient() > 0 else -p for p in P}  # noqa: E731
    return norm(a) == norm(b)


def run_selftest(tol: Tolerances = DEFAULT_TOL, include_slow: bool = True) -> SelftestReport:
    from .algebra.hilbert import hilbert_polynomial
    from .algebra.incidence import check_signal_conjecture, check_support_pair, incidence_ideal
    from .ambiguity import enumerate_ambiguities, flip, poly_roots
    from .combinat import collision_census, complement_property, difference_multiset, dihedral_canonical
    from .measure import aperiodic_autocorr, fourier_intensity, phaseless_linear
    from .numerics import ResidualMap, collision_search
    from .symmetry import ConjReflect, dihedral_orbit, orbit_equivalent, stabilizer_order

    eq = tol.eq_tol
    rep = SelftestReport()
    add = lambda *a: rep.checks.append(Check(*a))  # noqa: E731

    # Real linear measurements.
    expected = [900, 81, 1521, 144, 100]
    for name, v in (("x", PAPER_X), ("y", PAPER_Y)):
        got = [int(t) for t in phaseless_linear(PAPER_MATRIX, np.array(v))]
        add(f"linear |A{name}|^2 on the 5x3 matrix", expected, got, got == expected)
    ok = orbit_equivalent(PAPER_X, PAPER_Y, "sign").equivalent
    add("x and y are not sign-equivalent", False, ok, not ok)
    cp = complement_property(PAPER_MATRIX)
    add("complement property of the 5x3 matrix", {"holds": False, "witness": [1, 2, 3]},
        {"holds": cp.holds, "witness": list(cp.witness or [])}, (not cp.holds) and list(cp.witness or []) == [1, 2, 3])

    # Aperiodic autocorrelation and roots of the quadruple.
    xs = quadruple()
    want = np.array([float(v) for v in QUADRUPLE_ACORR])
    for i, x in enumerate(xs, 1):
        a = aperiodic_autocorr(x)
        ok = bool(np.max(np.abs(a - want)) <= eq * np.max(np.abs(want)))
        add(f"aperiodic autocorrelation of x{i}", [str(v) for v in QUADRUPLE_ACORR], signal_to_json(a), ok)
    thetas = np.linspace(0, 2 * np.pi, 7)
    cosine = [205 / 2 + 2 * (91 / 2 * np.cos(t) + 45 / 4 * np.cos(2 * t) + 9 / 2 * np.cos(3 * t)) for t in thetas]
    got = [fourier_intensity(xs[0], t) for t in thetas]
    add("Fourier intensity of x1 matches its cosine expansion", [round(v, 9) for v in cosine],
        [round(v, 9) for v in got], bool(np.allclose(got, cosine, rtol=eq, atol=0)))
    for i, (x, roots) in enumerate(zip(xs, QUADRUPLE_ROOTS), 1):
        got = poly_roots(x).roots
        add(f"roots of x{i}", _roots_json(roots), _roots_json(got), _match_roots(got, roots, max(eq, 1e-9)))

    x1 = xs[0]
    y = flip(x1, (), 0.7)
    add("empty flip is a global phase", True, bool(orbit_equivalent(x1, y, "phase", eq)),
        bool(orbit_equivalent(x1, y, "phase", eq)) and np.allclose(y, np.exp(0.7j) * x1, rtol=0, atol=eq * 10))
    y = flip(x1, (0, 1, 2))
    cr = ConjReflect().act(x1)
    ok = bool(orbit_equivalent(cr, y, "phase", eq))
    add("flipping every root gives the conjugate reflection", True, ok, ok)
    rs = poly_roots(x1)
    k = int(np.argmin(np.abs(np.asarray(rs.roots) - 3j)))
    ok = bool(orbit_equivalent(flip(x1, (k,), roots=rs), xs[1], "phase", eq))
    add("flipping 3i in x1 gives x2", True, ok, ok)
    res = enumerate_ambiguities(x1)
    hits = [sum(bool(orbit_equivalent(r, x, "phase-conjreflect", max(eq, 1e-7))) for r in res.representatives) for x in xs]
    add("ambiguity classes of x1", {"classes": 4, "hits": [1, 1, 1, 1]},
        {"classes": len(res.representatives), "hits": hits}, len(res.representatives) == 4 and hits == [1, 1, 1, 1])

    # Difference multisets and supports.
    S = SupportSet.of([0, 1, 2, 4], 8)
    got = list(difference_multiset(S).counts)
    add("difference multiset of {0,1,2,4}", [4, 2, 2, 1, 1], got, got == [4, 2, 2, 1, 1])
    A_, B_ = SupportSet.of([0, 1, 3, 4], 8), SupportSet.of([0, 1, 2, 5], 8)
    got = [list(difference_multiset(A_).counts), list(difference_multiset(B_).counts)]
    add("{0,1,3,4} and {0,1,2,5} share a multiset", [[4, 2, 1, 2, 1]] * 2, got, got == [[4, 2, 1, 2, 1]] * 2)
    disjoint = not (dihedral_orbit(A_) & dihedral_orbit(B_))
    distinct = dihedral_canonical(A_) != dihedral_canonical(B_)
    add("{0,1,3,4} and {0,1,2,5} are not equivalent", True, disjoint and distinct, disjoint and distinct)
    got = stabilizer_order(B_)
    add("stabilizer order of {0,1,2,5}", 2, got, got == 2)
    census = collision_census(8, 4)
    pairs = [sorted(list(T.indices) for T in members) for _, members in census.collision_groups]
    found = any([0, 1, 2, 5] in p and [0, 1, 3, 4] in p for p in pairs)
    add("census N=8 K=4 lists ({0,1,3,4},{0,1,2,5})", True, found, found)

    # Incidence ideals.
    for label, (S1, S2, texts, hp_want, dim_want) in {
        "({0,1,2,4},{0,1,2,5})": (S, B_, PAIR_GENERATORS, [80, -80, 32], 3),
        "({0,1,2,5},{0,1,2,5})": (B_, B_, SELF_GENERATORS, [20, -30, 10, 4], 4),
    }.items():
        ideal = incidence_ideal(S1, S2)
        ok = _same_up_to_sign(set(ideal.generators), _polys(texts, ideal.gens))
        add(f"{label} incidence generators", list(texts), [str(p) for p in ideal.generators], ok)
        hp = hilbert_polynomial(ideal)
        add(f"{label} Hilbert polynomial", {"coeffs": hp_want, "dim": dim_want},
            {"coeffs": list(hp.coeffs), "dim": hp.affine_dim}, list(hp.coeffs) == hp_want and hp.affine_dim == dim_want)
    sig = check_signal_conjecture(B_)
    add("signal recovery check for {0,1,2,5}", {"dim": 4, "degree": 4, "pass": True},
        {"dim": sig.affine_dim, "degree": sig.degree, "pass": sig.passed}, bool(sig.passed) and sig.degree == 4)
    pair = check_support_pair(S, B_)
    add("support recovery check for ({0,1,2,4},{0,1,2,5})", {"dim": 3, "pass": True},
        {"dim": pair.affine_dim, "pass": pair.passed}, bool(pair.passed) and pair.affine_dim == 3)

    if include_slow:
        fmap = ResidualMap.linear(PAPER_MATRIX, x_ref=PAPER_X)
        cr = collision_search(fmap, PAPER_X, "sign", restarts=200, seed=0)
        ok = cr.found and bool(orbit_equivalent(cr.candidate, PAPER_Y, "sign", 1e-6))
        add("collision search on the 5x3 matrix reaches +-y", True, ok, ok)
        rng = np.random.default_rng(0)
        w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        cr = collision_search(ResidualMap.gabor(w, x_ref=x), x, "phase", restarts=50, seed=0)
        add("full Gabor frame N=4 shows no collision", False, cr.found, not cr.found)
    return rep
