"""The projective self-map x -> A x^{m-1}: orbits, base locus, nilpotency.

Fixed points of the map are the eigenvectors with nonzero eigenvalue and
the base locus collects the eigenvalue-zero ones, so everything here is a
dynamical reading of the spectral data.  Nilpotency ("some iterate is
undefined everywhere") is decided by expanding symbolic iterates up to a
bound, with an honest Undetermined when neither that nor a nonzero
eigenvalue settles the question.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .homotopy import TrackerConfig
from .polysys import _power_terms
from .spectra import eigenclasses
from .tensor import (
    LAMBDA_ZERO_TOL,
    EigenClass,
    PolyForm,
    ProjPoint,
    Tensor,
    apply_power,
)

__all__ = [
    "ProjPoint",
    "BaseLocusHit",
    "Orbit",
    "NilpotencyVerdict",
    "TermBudgetError",
    "psi",
    "orbit",
    "base_locus",
    "iterate_symbolic",
    "nilpotency",
    "NILPOTENT",
    "NOT_NILPOTENT",
    "UNDETERMINED",
]

BASE_LOCUS_TOL = 1e-12          # |A x^{m-1}| below this (unit x) is a base point
FIXED_POINT_TOL = 1e-10         # successive orbit points closer than this stop
TERM_BUDGET = 10 ** 6           # cap on expanded terms in symbolic iterates

NILPOTENT = "nilpotent"
NOT_NILPOTENT = "not_nilpotent"
UNDETERMINED = "undetermined"


class TermBudgetError(RuntimeError):
    """Symbolic iterate would exceed the expanded-term budget."""


@dataclass(frozen=True)
class BaseLocusHit:
    """The map is undefined at ``point``: A x^{m-1} vanishes there."""

    point: ProjPoint


@dataclass(frozen=True)
class Orbit:
    """Forward orbit of a point, with the reason iteration stopped.

    ``fixed_point`` is set when two successive points agreed to
    FIXED_POINT_TOL; ``eigenvalue``/``eigen_residual`` then record the
    cross-check of the terminal point as an eigenvector.
    """

    points: tuple
    base_locus_hit: bool = False
    fixed_point: bool = False
    eigenvalue: complex | None = None
    eigen_residual: float | None = None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]


@dataclass(frozen=True)
class NilpotencyVerdict:
    """Tri-state nilpotency answer.

    ``k`` is the certifying iterate index for a nilpotent verdict and the
    exhausted bound for an undetermined one; ``witness`` carries a class
    with nonzero eigenvalue (a fixed point) in the not-nilpotent case.
    """

    status: str
    k: int = 0
    witness: EigenClass | None = None

    @property
    def is_nilpotent(self) -> bool:
        return self.status == NILPOTENT


def _as_point(p) -> ProjPoint:
    return p if isinstance(p, ProjPoint) else ProjPoint(np.asarray(p))


def psi(A: Tensor, p) -> ProjPoint | BaseLocusHit:
    """One application of the self-map; BaseLocusHit where it is undefined."""
    p = _as_point(p)
    v = apply_power(A, p.coords)
    if float(np.linalg.norm(v)) <= BASE_LOCUS_TOL:
        return BaseLocusHit(p)
    return ProjPoint(v)


def orbit(A: Tensor, p0, kmax: int) -> Orbit:
    """Iterate psi from p0, stopping at a fixed point, a base point, or kmax.

    A detected fixed point is cross-checked as an eigenvector: the
    recorded eigenvalue is the Rayleigh quotient at the unit
    representative and ``eigen_residual`` its defect, which is tiny
    exactly when the point is a genuine nonzero-eigenvalue eigenvector.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    p = _as_point(p0)
    pts = [p]
    for _ in range(kmax):
        nxt = psi(A, p)
        if isinstance(nxt, BaseLocusHit):
            return Orbit(points=tuple(pts), base_locus_hit=True)
        if nxt.distance(p) <= FIXED_POINT_TOL:
            x = p.coords
            v = apply_power(A, x)
            lam = complex(np.conj(x) @ v)
            res = float(np.max(np.abs(v - lam * x)))
            return Orbit(points=tuple(pts), fixed_point=True,
                         eigenvalue=lam, eigen_residual=res)
        pts.append(nxt)
        p = nxt
    return Orbit(points=tuple(pts))


def base_locus(A: Tensor, cfg: TrackerConfig | None = None) -> tuple:
    """Projective points of the eigenvalue-zero classes (map undefined)."""
    report = eigenclasses(A, cfg)
    return tuple(ProjPoint(c.representative.x) for c in report.classes
                 if abs(complex(c.representative.lam)) <= LAMBDA_ZERO_TOL)


def _pmul(f: dict, g: dict, budget: int) -> dict:
    out: dict[tuple, complex] = {}
    for ea, ca in f.items():
        for eb, cb in g.items():
            key = tuple(a + b for a, b in zip(ea, eb))
            out[key] = out.get(key, 0j) + ca * cb
            if len(out) > budget:
                raise TermBudgetError(f"more than {budget} expanded terms")
    return {e: c for e, c in out.items() if c != 0}


def _compose(base: list[dict], current: list[dict], n: int,
             budget: int) -> list[dict]:
    """Substitute the `current` coordinate polynomials into `base`."""
    one = {(0,) * n: 1.0 + 0j}
    # cache powers of each current coordinate up to the needed exponent
    maxe = [0] * n
    for poly in base:
        for expo in poly:
            for i, e in enumerate(expo):
                maxe[i] = max(maxe[i], e)
    powers: list[list[dict]] = []
    for i in range(n):
        row = [one]
        for _ in range(maxe[i]):
            row.append(_pmul(row[-1], current[i], budget))
        powers.append(row)
    out = []
    for poly in base:
        acc: dict[tuple, complex] = {}
        for expo, coeff in poly.items():
            term = {(0,) * n: coeff}
            for i, e in enumerate(expo):
                if e:
                    term = _pmul(term, powers[i][e], budget)
            for key, c in term.items():
                acc[key] = acc.get(key, 0j) + c
            if len(acc) > budget:
                raise TermBudgetError(f"more than {budget} expanded terms")
        out.append({e: c for e, c in acc.items() if c != 0})
    return out


def _iterate_dicts(A: Tensor, k: int, budget: int) -> list[dict]:
    n = A.n
    if n * (A.m - 1) ** k > budget:
        raise TermBudgetError("iterate degree exceeds the term budget")
    base = [_power_terms(A, j, n) for j in range(n)]
    current = base
    for _ in range(k - 1):
        current = _compose(base, current, n, budget)
    return current


def _is_zero_tuple(polys: list[dict], masses: list[dict]) -> bool:
    # a structurally vanishing coefficient is a cancelling signed sum of
    # entry products, so its float residue is bounded by eps times the
    # total mass of those products -- which the parallel absolute-value
    # composition accumulates per monomial
    for poly, mass in zip(polys, masses):
        for expo, c in poly.items():
            if abs(c) > 1e-12 * (1.0 + abs(mass.get(expo, 0.0))):
                return False
    return True


def iterate_symbolic(A: Tensor, k: int, budget: int = TERM_BUDGET) -> tuple:
    """The k-fold composition of x -> A x^{m-1}, fully expanded.

    Returns one homogeneous PolyForm of degree (m-1)^k per coordinate.
    Raises TermBudgetError when the expansion would exceed ``budget``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    deg = (A.m - 1) ** k
    polys = _iterate_dicts(A, k, budget)
    return tuple(PolyForm(deg, A.n, poly) for poly in polys)


def nilpotency(A: Tensor, kmax: int,
               cfg: TrackerConfig | None = None) -> NilpotencyVerdict:
    """Decide nilpotency up to iterate kmax, without over-claiming.

    Nilpotent(k) when the k-th symbolic iterate vanishes identically;
    NotNilpotent(witness) when a class with nonzero eigenvalue exists
    (its point is fixed by every iterate); otherwise Undetermined(kmax).
    For matrices the bound is raised to n, which is decisive.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    bound = max(kmax, A.n) if A.m == 2 else kmax
    try:
        base = [_power_terms(A, j, A.n) for j in range(A.n)]
        abs_base = [{e: abs(c) for e, c in poly.items()} for poly in base]
        current, abs_current = base, abs_base
        for k in range(1, bound + 1):
            if k > 1:
                current = _compose(base, current, A.n, TERM_BUDGET)
                abs_current = _compose(abs_base, abs_current, A.n, TERM_BUDGET)
            if _is_zero_tuple(current, abs_current):
                return NilpotencyVerdict(NILPOTENT, k=k)
    except TermBudgetError:
        pass
    report = eigenclasses(A, cfg)
    for cls in report.classes:
        if abs(complex(cls.representative.lam)) > LAMBDA_ZERO_TOL:
            return NilpotencyVerdict(NOT_NILPOTENT, witness=cls)
    return NilpotencyVerdict(UNDETERMINED, k=bound)
