"""Spectral reports, closed-form oracles, and singularity probes.

Everything here sits on top of the path tracker: `eigenclasses` runs the
full pipeline and summarizes it, the remaining operations interpret the
classes (real representatives, PSD test, numeric characteristic
polynomial) or probe the tensor with auxiliary square systems
(`singular_probe`, `zero_eigenvectors`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .homotopy import TrackerConfig, group_into_classes, track_all
from .polysys import build_eigen_system, build_shifted_system
from .tensor import (
    ISOTROPY_TOL,
    LAMBDA_ZERO_TOL,
    EigenClass,
    EigenPair,
    PolyForm,
    ProjPoint,
    Tensor,
    canonicalize,
    expected_count,
    normalized_eigenvalues,
    tensor_from_form,
)

__all__ = [
    "SpectralReport",
    "ProbeResult",
    "CharPolyNumeric",
    "ZeroLocus",
    "expected_count",
    "eigenclasses",
    "diagonal_classes",
    "real_classes",
    "real_representative",
    "is_positive_semidefinite",
    "characteristic_polynomial_numeric",
    "singular_probe",
    "zero_eigenvectors",
    "shifted_singularity_check",
    "value_multiplicities",
    "FINITE_VALUES",
    "COFINITE_COMPLEMENT",
]

FINITE_VALUES = "finite_values"
COFINITE_COMPLEMENT = "cofinite_complement"

WITNESS_TOL = 1e-6              # |x.x - 1| acceptance for a probe witness
VALUE_MERGE_TOL = 1e-8          # distinct normalized values closer than this merge


@dataclass(frozen=True)
class SpectralReport:
    """Summary of one eigenclass computation.

    ``total_multiplicity`` equals ``expected_count`` whenever the class
    picture is clean (no failed paths, no positive-dimensional families);
    ``normalized_values`` collects the distinct eigenvalues at x.x = 1
    representatives, and ``degenerate_clusters`` counts clusters whose
    path count did not divide evenly by m - 2.
    """

    m: int
    n: int
    classes: tuple
    expected_count: int
    total_multiplicity: int
    positive_dimensional: bool
    normalized_values: tuple
    isotropic_count: int
    failed_paths: int
    degenerate_clusters: int = 0

    @property
    def clean(self) -> bool:
        return (not self.positive_dimensional and self.failed_paths == 0
                and self.degenerate_clusters == 0)


@dataclass(frozen=True)
class ProbeResult:
    """Verdict of the fixed-eigenvalue witness probe.

    ``kind`` is ``finite_values`` (generic witnesses were never found, the
    attained normalized values are listed in ``values``) or
    ``cofinite_complement`` (every random trial produced a normalized
    witness; ``exceptions`` estimates the finitely many missing values).
    """

    kind: str
    values: tuple = ()
    exceptions: tuple = ()
    trials: int = 0

    @property
    def cofinite(self) -> bool:
        return self.kind == COFINITE_COMPLEMENT


@dataclass(frozen=True)
class CharPolyNumeric:
    """Monic polynomial with the normalized eigenvalues as roots.

    For even order the variable is lambda itself; for odd order the sign
    ambiguity of normalized eigenvalues is absorbed by working in
    mu = lambda^2.  ``indeterminate`` is set instead of coefficients when
    the class picture cannot support the interpolation.
    """

    parity: str                 # "lambda" (even m) or "mu" (odd m)
    coeffs: tuple = ()          # monic, length degree + 1
    degree: int = 0
    indeterminate: bool = False
    reason: str = ""

    def __call__(self, z: complex) -> complex:
        if self.indeterminate:
            raise ValueError("indeterminate polynomial")
        return complex(np.polyval(np.asarray(self.coeffs), z))


@dataclass(frozen=True)
class ZeroLocus:
    """Projective points where the gradient of a form vanishes."""

    points: tuple
    positive_dimensional: bool = False

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def contains(self, coords, tol: float = 1e-6) -> bool:
        p = coords if isinstance(coords, ProjPoint) else ProjPoint(coords)
        return any(p.distance(q) <= tol for q in self.points)


def _merge_values(values, tol: float = VALUE_MERGE_TOL) -> tuple:
    """Deduplicate near-equal complex scalars, deterministically ordered."""
    out: list[complex] = []
    for v in sorted(map(complex, values), key=lambda z: (z.real, z.imag)):
        if not any(abs(v - w) <= tol * (1.0 + abs(w)) for w in out):
            out.append(v)
    return tuple(out)


def eigenclasses(A: Tensor, cfg: TrackerConfig | None = None) -> SpectralReport:
    """Track all paths of the eigen-system and report the class structure."""
    cfg = cfg or TrackerConfig()
    outcomes = track_all(build_eigen_system(A), cfg)
    classes, diag = group_into_classes(outcomes, A, cfg)
    values: list[complex] = []
    iso = 0
    for c in classes:
        if c.isotropic:
            iso += 1
        values.extend(c.normalized_lambdas)
    return SpectralReport(
        m=A.m, n=A.n, classes=classes,
        expected_count=expected_count(A.m, A.n),
        total_multiplicity=sum(c.multiplicity for c in classes),
        positive_dimensional=diag.positive_dimensional,
        normalized_values=_merge_values(values),
        isotropic_count=iso,
        failed_paths=diag.failed_paths,
        degenerate_clusters=diag.degenerate_clusters,
    )


def value_multiplicities(report: SpectralReport, tol: float = 1e-6) -> tuple:
    """Summed class multiplicity per distinct normalized value.

    Diagnostic view of how the total count distributes over the values;
    isotropic classes carry no value and are left out.  Returned as
    ((value, multiplicity), ...) sorted by value.
    """
    buckets: list[list] = []
    for c in report.classes:
        for v in c.normalized_lambdas:
            v = complex(v)
            for b in buckets:
                if abs(v - b[0]) <= tol * (1.0 + abs(b[0])):
                    b[1] += c.multiplicity
                    break
            else:
                buckets.append([v, c.multiplicity])
    buckets.sort(key=lambda b: (b[0].real, b[0].imag))
    return tuple((b[0], b[1]) for b in buckets)


def _class_sort_key(cls: EigenClass):
    rep = cls.representative
    lam = complex(rep.lam)
    return (round(lam.real, 8), round(lam.imag, 8),
            tuple(np.round(rep.x.view(float), 8)))


def diagonal_classes(a, m: int) -> tuple:
    """Closed-form eigenclasses of the diagonal tensor diag(a), m >= 3.

    Every class has eigenvalue 1; the eigenvector supports run over the
    nonempty subsets of coordinates and each supported coordinate carries
    an independent (m-2)-nd root of unity, counted up to simultaneous
    rotation.  On the support, a_i x_i^{m-2} = 1 forces
    x_i = a_i^{-1/(m-2)} zeta^{s_i}.
    """
    if m < 3:
        raise ValueError("diagonal oracle needs m >= 3")
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 1 or a.size == 0 or np.any(a == 0):
        raise ValueError("diagonal entries must be nonzero")
    n = a.size
    k = m - 2
    zeta = np.exp(2j * np.pi / k)
    base = a ** (-1.0 / k)          # principal branch
    star = -1
    seen: set = set()
    classes = []
    for sigma in itertools.product(tuple(range(k)) + (star,), repeat=n):
        if all(s == star for s in sigma):
            continue
        orbit = min(tuple(star if s == star else (s + i) % k for s in sigma)
                    for i in range(k))
        if orbit in seen:
            continue
        seen.add(orbit)
        x = np.array([0 if s == star else base[i] * zeta ** s
                      for i, s in enumerate(sigma)], dtype=np.complex128)
        resid = float(np.max(np.abs(a * x ** (m - 1) - x)))
        pair = canonicalize(EigenPair(1.0 + 0j, x, residual=resid), m)
        w = pair.x / np.linalg.norm(pair.x)
        classes.append(EigenClass(
            representative=pair, multiplicity=1,
            isotropic=bool(abs(w @ w) <= ISOTROPY_TOL),
            normalized_lambdas=normalized_eigenvalues(pair, m)))
    assert len(classes) == expected_count(m, n)
    classes.sort(key=_class_sort_key)
    return tuple(classes)


def real_representative(cls: EigenClass, m: int,
                        tol: float = 1e-6) -> EigenPair | None:
    """Rescale a class representative onto the reals, if possible.

    Tries the unit scalings t = conj-phase of the dominant coordinate
    times each (m-2)-nd root of unity; accepts t when both Im(t x) and
    Im(t^{m-2} lambda) are negligible.  Returns the realigned pair (with
    exactly real entries) or None.
    """
    pair = cls.representative
    x = pair.x
    j = int(np.argmax(np.abs(x)))
    t0 = np.conj(x[j]) / abs(x[j])
    k = max(m - 2, 1)
    zeta = np.exp(2j * np.pi / k)
    nx = float(np.linalg.norm(x))
    for i in range(k):
        t = t0 * zeta ** i
        y = t * x
        lam = t ** (m - 2) * complex(pair.lam)
        if (float(np.linalg.norm(y.imag)) <= tol * nx
                and abs(lam.imag) <= tol * (1.0 + abs(lam))):
            return EigenPair(lam.real + 0j, y.real.astype(np.complex128),
                             residual=pair.residual)
    return None


def real_classes(report: SpectralReport, tol: float = 1e-6) -> tuple:
    """Classes of a real tensor possessing a real representative."""
    return tuple(c for c in report.classes
                 if real_representative(c, report.m, tol) is not None)


def is_positive_semidefinite(f: PolyForm, cfg: TrackerConfig | None = None,
                             tol: float = 1e-8) -> bool:
    """Whether a real form of even degree is PSD on real vectors.

    Equivalent to every real eigenclass of the associated symmetric
    tensor having normalized eigenvalue >= -tol (the minimum of m*f on
    the unit sphere is attained at such a class).
    """
    if f.degree % 2:
        raise ValueError("PSD test needs even degree")
    for coeff in f.terms.values():
        if abs(complex(coeff).imag) > 0:
            raise ValueError("PSD test needs real coefficients")
    report = eigenclasses(tensor_from_form(f), cfg)
    for cls in real_classes(report):
        # real classes are never isotropic, so the value list is nonempty
        if min(v.real for v in cls.normalized_lambdas) < -tol:
            return False
    return True


def characteristic_polynomial_numeric(
        A: Tensor, cfg: TrackerConfig | None = None) -> CharPolyNumeric:
    """Monic polynomial vanishing on the normalized eigenvalues.

    Roots are taken with class multiplicities, in lambda for even order
    and in mu = lambda^2 for odd order.  Isotropic classes contribute no
    root (the degree drops below the expected count); a positive-
    dimensional or failed run yields an indeterminate marker.
    """
    report = eigenclasses(A, cfg)
    parity = "lambda" if A.m % 2 == 0 else "mu"
    if A.m == 2:
        # matrix eigenspaces are routinely positive-dimensional while the
        # polynomial stays well-defined; require only a full root count
        if report.failed_paths or report.total_multiplicity != A.n:
            return CharPolyNumeric(parity, indeterminate=True,
                                   reason="incomplete matrix spectrum")
        roots = [complex(c.representative.lam)
                 for c in report.classes for _ in range(c.multiplicity)]
    else:
        if not report.clean:
            return CharPolyNumeric(parity, indeterminate=True,
                                   reason="positive-dimensional or failed run")
        roots = []
        for c in report.classes:
            if c.isotropic:
                continue
            v = complex(c.normalized_lambdas[0])
            root = v if A.m % 2 == 0 else v * v
            roots.extend([root] * c.multiplicity)
    coeffs = np.atleast_1d(np.poly(np.asarray(roots, dtype=np.complex128)))
    return CharPolyNumeric(parity, tuple(complex(c) for c in coeffs),
                           degree=len(roots))


def _slide_to_witness(system, x0: np.ndarray) -> bool:
    """Gauss-Newton search for a solution of the system with x.x = 1.

    Starting from a tracked endpoint, minimizes the augmented residual
    [F(x); x.x - 1] by least-squares steps; on a positive-dimensional
    solution set this slides along the component toward the normalization
    slice, on an isolated point it stalls.
    """
    x = np.asarray(x0, dtype=np.complex128).copy()
    for _ in range(40):
        F, J = system.value_and_jacobian(x)
        g = np.concatenate([F, [x @ x - 1.0]])
        if float(np.max(np.abs(g))) <= 1e-7:
            return True
        Ja = np.vstack([J, 2.0 * x[None, :]])
        dx = np.linalg.lstsq(Ja, -g, rcond=None)[0]
        if not np.all(np.isfinite(dx)) or float(np.max(np.abs(dx))) > 1e3:
            return False
        x = x + dx
    return False


def _witness_trial(A: Tensor, lam: complex,
                   cfg: TrackerConfig) -> bool | None:
    """Solve A x^{m-1} = lam x at fixed lam and look for an x.x = 1 witness.

    Returns True/False for a decided trial, None when no path converged.
    """
    system = build_shifted_system(A, lam)
    outcomes = track_all(system, cfg)
    decided = False
    for out in outcomes:
        if not out.converged:
            continue
        decided = True
        x = out.endpoint
        if float(np.linalg.norm(x)) <= 1e-10:
            continue            # the trivial zero of the shifted system
        if _slide_to_witness(system, x):
            return True
    return False if decided else None


def singular_probe(A: Tensor, trials: int = 5,
                   cfg: TrackerConfig | None = None) -> ProbeResult:
    """Decide whether normalized eigenvalues fill the plane or a finite set.

    Each trial fixes a random eigenvalue from the annulus 0.5 <= |lam| <= 2
    and asks whether the square system A x^{m-1} = lam x has a solution
    with x.x = 1.  Generic tensors miss on every trial and the attained
    values come from `eigenclasses`; tensors whose values are cofinite hit
    on every trial, and an extra trial at lam = 0 estimates the exception
    set.  Non-failed trials must agree.
    """
    if trials < 3:
        raise ValueError("need at least 3 trials")
    cfg = cfg or TrackerConfig()
    verdicts = []
    for t in range(trials):
        rng = np.random.default_rng((cfg.seed, 271828, t))
        lam = (rng.uniform(0.5, 2.0)
               * np.exp(2j * np.pi * rng.uniform(0.0, 1.0)))
        verdict = _witness_trial(A, lam, cfg.fresh(bump=104729 * (t + 1)))
        if verdict is not None:
            verdicts.append(verdict)
    if not verdicts:
        raise RuntimeError("every probe trial failed to track")
    if any(verdicts) and not all(verdicts):
        raise RuntimeError(
            f"probe trials disagree: {sum(verdicts)}/{len(verdicts)} hits")
    if all(verdicts):
        # estimate the exceptions by probing lam = 0 directly; a miss (or a
        # failed track) marks 0 as unattained
        zero_hit = _witness_trial(A, 0.0 + 0j, cfg.fresh(bump=999983))
        exceptions = () if zero_hit is True else (0j,)
        return ProbeResult(kind=COFINITE_COMPLEMENT, exceptions=exceptions,
                           trials=len(verdicts))
    report = eigenclasses(A, cfg)
    return ProbeResult(kind=FINITE_VALUES, values=report.normalized_values,
                       trials=len(verdicts))


def zero_eigenvectors(f: PolyForm,
                      cfg: TrackerConfig | None = None) -> ZeroLocus:
    """Projective points where grad f vanishes (eigenvalue-zero classes).

    For a squarefree form these are exactly the singular points of the
    hypersurface f = 0; a positive-dimensional run is flagged and the
    sampled points are still returned.
    """
    report = eigenclasses(tensor_from_form(f), cfg)
    pts = tuple(ProjPoint(c.representative.x) for c in report.classes
                if abs(complex(c.representative.lam)) <= LAMBDA_ZERO_TOL)
    return ZeroLocus(points=pts,
                     positive_dimensional=report.positive_dimensional)


def shifted_singularity_check(f: PolyForm, lam: complex, x,
                              tol: float = 1e-8) -> bool:
    """Certify a normalized eigenpair through the shifted form.

    With g = f - (lam/2) x.x - (1/m - 1/2) lam, the pair (lam, x) with
    x.x = 1 is a normalized eigenpair of the tensor of f exactly when g
    and all its partials vanish at x; this checks both to `tol`.
    """
    if f.degree < 3:
        raise ValueError("shifted check needs degree >= 3")
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lam must be nonzero")
    x = np.asarray(x, dtype=np.complex128)
    g = complex(f(x)) - (lam / 2.0) * complex(x @ x) \
        - (1.0 / f.degree - 0.5) * lam
    grad_gap = f.gradient(x) - lam * x
    return abs(g) <= tol and float(np.max(np.abs(grad_gap))) <= tol
