"""Total-degree homotopy tracking and endpoint clustering.

Paths follow the gamma-trick family H(u, t) = gamma (1-t) G(u) + t F(u)
with start system G_j = u_j^{d_j} - b_j.  Targets with one more variable
than equations (the homogenized eigen-system) are closed with a random
affine patch <c, u> = 1 that is held exact throughout.  The predictor is
a fourth-order explicit step on the Davidenko ODE, the corrector plain
Newton.  Endpoints that land on singular roots (clusters of coalescing
paths, e.g. the multiplicity m-2 bundles at lam = 0) are finished with a
Cauchy-integral endgame: the path is continued around small circles
|1 - t| = r until it closes up, and the mean over the cycle gives the
limit point; the radius is halved until consecutive circles agree.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass

import numpy as np

from .polysys import PolySystem, build_eigen_system
from .tensor import (
    ISOTROPY_TOL,
    EigenClass,
    EigenPair,
    Tensor,
    canonicalize,
    normalized_eigenvalues,
)

CONVERGED = "converged"
DIVERGED = "diverged"
STEP_UNDERFLOW = "step_underflow"

ACCEPT_RESIDUAL = 1e-9          # max-norm residual for a converged endpoint
REFINE_TARGET = 1e-12           # endpoint Newton refinement goal
TRIVIAL_X = 1e-8                # |x| below this fraction of |u| is the zero solution
POSITIVE_DIM_COND = 1e10        # Jacobian condition flagging a suspicious cluster
ENDGAME_RADIUS = 1e-6           # outer circle radius around t = 1
ENDGAME_SAMPLES = 32            # nodes per loop on the endgame circle
MAX_WINDING = 24                # give up if the cycle has not closed by then
MAX_RADIUS_HALVINGS = 6         # endgame radius adaptation budget
MAX_STEPS = 6000                # hard per-path step budget


@dataclass(frozen=True)
class TrackerConfig:
    """Knobs for the path tracker; all randomness derives from `seed`.

    `gamma` and `patch` may be pinned explicitly (mostly for tests and for
    fresh-patch re-runs); left as None they are drawn from the seed.
    """

    seed: int = 20100306
    gamma: complex | None = None
    patch: tuple | None = None
    initial_step: float = 0.05
    min_step: float = 1e-7
    corrector_tol: float = 1e-11
    max_corrector_iters: int = 3
    cluster_radius: float = 1e-6
    divergence_bound: float = 1e8

    def __post_init__(self) -> None:
        for name in ("initial_step", "min_step", "corrector_tol",
                     "cluster_radius", "divergence_bound"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_corrector_iters < 1:
            raise ValueError("max_corrector_iters must be >= 1")
        if self.gamma is not None and abs(abs(self.gamma) - 1.0) > 1e-9:
            raise ValueError("gamma must have unit modulus")

    def fresh(self, bump: int = 7919) -> "TrackerConfig":
        """A config with re-drawn randomness (fresh patch re-runs)."""
        return dataclasses.replace(self, seed=self.seed + bump,
                                   gamma=None, patch=None)


@dataclass(frozen=True)
class PathOutcome:
    """One tracked path: endpoint in the patch chart, or a failure kind."""

    status: str
    endpoint: np.ndarray | None
    residual: float
    condition: float
    steps: int = 0
    winding: int = 0

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


@dataclass(frozen=True)
class RefineResult:
    point: np.ndarray
    residual: float
    iterations: int
    singular: bool


@dataclass(frozen=True)
class GroupDiagnostics:
    failed_paths: int
    at_infinity: int
    trivial_paths: int
    degenerate_clusters: int
    positive_dimensional: bool
    max_residual: float


class _Homotopy:
    """H(u, t) = gamma (1-t) (u_j^{d_j} - b_j) + t F_j(u), plus patch row."""

    def __init__(self, system: PolySystem, gamma: complex,
                 b: np.ndarray, patch: np.ndarray | None) -> None:
        rows = system.neq + (0 if patch is None else 1)
        if rows != system.nvars:
            raise ValueError("system is not square after patching")
        self.sys = system
        self.neq = system.neq
        self.v = system.nvars
        self.gamma = gamma
        self.b = b
        self.d = np.array(system.degrees, dtype=np.int64)
        self.patch = patch
        self._idx = np.arange(self.neq)

    def start_points(self) -> list[np.ndarray]:
        """All prod(d_j) start solutions of G, lifted to the patch chart."""
        roots = self.b ** (1.0 / self.d)
        combos = itertools.product(*(range(int(dj)) for dj in self.d))
        pts = []
        for ks in combos:
            u = np.zeros(self.v, dtype=np.complex128)
            u[: self.neq] = roots * np.exp(2j * np.pi * np.array(ks) / self.d)
            if self.patch is not None:
                c = self.patch
                u[-1] = (1.0 - c[: self.neq] @ u[: self.neq]) / c[-1]
            pts.append(u)
        return pts

    def target_residual(self, u: np.ndarray) -> float:
        r = float(np.max(np.abs(self.sys.evaluate(u))))
        if self.patch is not None:
            r = max(r, abs(self.patch @ u - 1.0))
        return r

    def value_jac(self, u: np.ndarray, t: complex):
        F, JF = self.sys.value_and_jacobian(u)
        un = u[: self.neq]
        g = un ** self.d - self.b
        s = self.gamma * (1.0 - t)
        if self.patch is None:
            H = s * g + t * F
            J = t * JF
            J[self._idx, self._idx] += s * self.d * un ** (self.d - 1)
            return H, J
        H = np.empty(self.v, dtype=np.complex128)
        J = np.empty((self.v, self.v), dtype=np.complex128)
        H[: self.neq] = s * g + t * F
        H[self.neq] = self.patch @ u - 1.0
        J[: self.neq] = t * JF
        J[self._idx, self._idx] += s * self.d * un ** (self.d - 1)
        J[self.neq] = self.patch
        return H, J

    def tangent(self, u: np.ndarray, t: complex) -> np.ndarray:
        """du/dt from the Davidenko ODE J_u du = -dH/dt."""
        _, J = self.value_jac(u, t)
        F = self.sys.evaluate(u)
        g = u[: self.neq] ** self.d - self.b
        rhs = np.zeros(self.v, dtype=np.complex128)
        rhs[: self.neq] = self.gamma * g - F
        return np.linalg.solve(J, rhs)

    def newton(self, u: np.ndarray, t: complex, tol: float, iters: int):
        # success on small update, or on residual at the machine floor:
        # near rank-deficient roots the update stagnates around cond*eps
        # while the residual is already exact
        for _ in range(iters):
            H, J = self.value_jac(u, t)
            if np.max(np.abs(H)) <= 1e-13:
                return u, True
            try:
                du = np.linalg.solve(J, -H)
            except np.linalg.LinAlgError:
                return u, False
            u = u + du
            if np.max(np.abs(du)) <= tol * (1.0 + np.max(np.abs(u))):
                return u, True
        H, _ = self.value_jac(u, t)
        if np.max(np.abs(H)) <= 1e-13:
            return u, True
        return u, False

    def condition_at(self, u: np.ndarray, t: complex = 1.0) -> float:
        _, J = self.value_jac(u, t)
        try:
            return float(np.linalg.cond(J))
        except np.linalg.LinAlgError:
            return float("inf")


def _rk4(hom: _Homotopy, u: np.ndarray, t: complex, h: complex) -> np.ndarray:
    k1 = hom.tangent(u, t)
    k2 = hom.tangent(u + 0.5 * h * k1, t + 0.5 * h)
    k3 = hom.tangent(u + 0.5 * h * k2, t + 0.5 * h)
    k4 = hom.tangent(u + h * k3, t + h)
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _arc_step(hom: _Homotopy, u: np.ndarray, t0: complex, t1: complex,
              cfg: TrackerConfig, depth: int = 0):
    """Continue u from t0 to t1 along the chord; bisect on failure."""
    try:
        up = _rk4(hom, u, t0, t1 - t0)
    except np.linalg.LinAlgError:
        up = None
    if up is not None:
        un, ok = hom.newton(up, t1, cfg.corrector_tol, cfg.max_corrector_iters + 2)
        if ok:
            return un, True
    if depth >= 5:
        return u, False
    tm = 0.5 * (t0 + t1)
    um, ok = _arc_step(hom, u, t0, tm, cfg, depth + 1)
    if not ok:
        return u, False
    return _arc_step(hom, um, tm, t1, cfg, depth + 1)


def _cauchy_circle(hom: _Homotopy, u_start: np.ndarray, radius: float,
                   cfg: TrackerConfig):
    """Loop t = 1 - radius*exp(i theta) until the path closes.

    Returns (mean over the closed cycle, winding, closure flag, node count,
    final point).  The mean over uniformly spaced nodes of the full cycle
    approximates the endpoint at t = 1 with O(radius) error.
    """
    nodes_per_loop = ENDGAME_SAMPLES
    dth = 2.0 * np.pi / nodes_per_loop
    u = u_start.copy()
    samples = []
    count = 0
    for loop in range(MAX_WINDING):
        for k in range(nodes_per_loop):
            samples.append(u.copy())
            th0 = (loop * nodes_per_loop + k) * dth
            th1 = th0 + dth
            t0 = 1.0 - radius * np.exp(1j * th0)
            t1 = 1.0 - radius * np.exp(1j * th1)
            u, ok = _arc_step(hom, u, t0, t1, cfg)
            count += 1
            if not ok or np.max(np.abs(u)) > cfg.divergence_bound:
                return None, 0, False, count, u
        err = np.max(np.abs(u - u_start)) / (1.0 + np.max(np.abs(u_start)))
        if err <= 1e-4:
            mean = np.mean(samples, axis=0)
            return mean, loop + 1, True, count, u
    return None, 0, False, count, u


def _walk_radius(hom: _Homotopy, u: np.ndarray, r0: float, r1: float,
                 cfg: TrackerConfig):
    """Move along the real t axis from 1-r0 to 1-r1 by short Newton hops."""
    steps = 8
    for k in range(1, steps + 1):
        r = r0 * (r1 / r0) ** (k / steps)
        u, ok = hom.newton(u, 1.0 - r, cfg.corrector_tol,
                           cfg.max_corrector_iters + 3)
        if not ok:
            return u, False
    return u, True


def _finish_endgame(hom: _Homotopy, u: np.ndarray, cfg: TrackerConfig,
                    steps: int) -> PathOutcome:
    """Cauchy-integral endgame with an adaptive radius.

    The circle mean equals the endpoint only while the disk |1 - t| <= r
    contains no branch point of the path field besides t = 1 itself;
    stray branch points inside the disk corrupt both the winding and the
    mean (the loop then closes around a sub-bundle of sheets).  Halving
    the radius until two consecutive circles agree on winding and mean
    filters them out.
    """
    escaping = float(np.max(np.abs(u))) > 1e3
    r = ENDGAME_RADIUS
    prev_est = None
    prev_w = 0
    best = None
    for _ in range(MAX_RADIUS_HALVINGS):
        est, w, ok, n, u_back = _cauchy_circle(hom, u, r, cfg)
        steps += n
        if ok:
            res = hom.target_residual(est)
            if res <= ACCEPT_RESIDUAL:
                agree = (prev_est is not None and prev_w == w
                         and float(np.max(np.abs(est - prev_est)))
                         <= 1e-8 * (1.0 + float(np.max(np.abs(est)))))
                best = (est, w, res)
                if agree:
                    cond = hom.condition_at(est)
                    est.setflags(write=False)
                    return PathOutcome(CONVERGED, est, res, cond, steps, w)
            prev_est, prev_w = est, w
            u = u_back
        else:
            prev_est, prev_w = None, 0
            if float(np.max(np.abs(u_back))) > cfg.divergence_bound:
                break
        u, okw = _walk_radius(hom, u, r, r / 2.0, cfg)
        if not okw:
            break
        r /= 2.0
    if best is not None:
        # closed and on-target at one radius, never confirmed at the next;
        # accept the estimate rather than discard a plausible endpoint
        est, w, res = best
        cond = hom.condition_at(est)
        est.setflags(write=False)
        return PathOutcome(CONVERGED, est, res, cond, steps, w)
    res = hom.target_residual(u)
    status = DIVERGED if escaping else STEP_UNDERFLOW
    return PathOutcome(status, None, res, float("inf"), steps, 0)


def _track_one(hom: _Homotopy, u0: np.ndarray, cfg: TrackerConfig) -> PathOutcome:
    u = u0.astype(np.complex128, copy=True)
    t = 0.0
    h = cfg.initial_step
    streak = 0
    steps = 0
    t_edge = 1.0 - ENDGAME_RADIUS
    while t < t_edge:
        steps += 1
        if steps > MAX_STEPS:
            return PathOutcome(STEP_UNDERFLOW, None, hom.target_residual(u),
                               float("inf"), steps, 0)
        hh = min(h, t_edge - t)
        try:
            up = _rk4(hom, u, t, hh)
        except np.linalg.LinAlgError:
            up = None
        ok = False
        if up is not None:
            un, ok = hom.newton(up, t + hh, cfg.corrector_tol,
                                cfg.max_corrector_iters)
        if ok:
            u = un
            t += hh
            if np.max(np.abs(u)) > cfg.divergence_bound:
                return PathOutcome(DIVERGED, None, float("inf"),
                                   float("inf"), steps, 0)
            streak += 1
            if streak >= 4:
                h = min(2.0 * h, cfg.initial_step)
                streak = 0
        else:
            streak = 0
            h *= 0.5
            if h < cfg.min_step:
                return PathOutcome(STEP_UNDERFLOW, None, hom.target_residual(u),
                                   float("inf"), steps, 0)
    # regular endpoints jump straight to t = 1; the jump must be a small
    # correction or the Newton iterate left the tracked path (e.g. a path
    # escaping to infinity getting pulled onto a finite root)
    uf, _ = hom.newton(u.copy(), 1.0, REFINE_TARGET, 12)
    res = hom.target_residual(uf)
    unorm = float(np.max(np.abs(u)))
    jump = float(np.max(np.abs(uf - u)))
    if res <= ACCEPT_RESIDUAL and jump <= 1e-2 * (1.0 + unorm):
        cond = hom.condition_at(uf)
        # a clustered endpoint reached by plain Newton is only sqrt(res)
        # accurate; route anything ill-conditioned through the endgame,
        # whose circle mean cancels the fractional-power error exactly
        if cond <= 1e6:
            uf.setflags(write=False)
            return PathOutcome(CONVERGED, uf, res, cond, steps, 0)
    return _finish_endgame(hom, u, cfg, steps)


def _draw_complex(rng: np.random.Generator, size: int) -> np.ndarray:
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return z / np.sqrt(2.0)


def _materialize(system: PolySystem, cfg: TrackerConfig) -> _Homotopy:
    rng = np.random.default_rng(cfg.seed)
    gamma = cfg.gamma
    if gamma is None:
        gamma = complex(np.exp(2j * np.pi * rng.random()))
    patched = system.nvars == system.neq + 1
    patch = None
    if patched:
        if cfg.patch is not None:
            patch = np.asarray(cfg.patch, dtype=np.complex128)
            if patch.shape != (system.nvars,) or abs(patch[-1]) < 1e-12:
                raise ValueError("patch must be length nvars with c[-1] != 0")
        else:
            patch = _draw_complex(rng, system.nvars)
            while abs(patch[-1]) < 0.2:
                patch = _draw_complex(rng, system.nvars)
    b = _draw_complex(rng, system.neq)
    while np.min(np.abs(b)) < 0.1:
        b = _draw_complex(rng, system.neq)
    return _Homotopy(system, gamma, b, patch)


def track_all(system: PolySystem, cfg: TrackerConfig) -> tuple[PathOutcome, ...]:
    """Track every total-degree path of the system; one outcome per path."""
    hom = _materialize(system, cfg)
    return tuple(_track_one(hom, u0, cfg) for u0 in hom.start_points())


def newton_refine(system: PolySystem, point: np.ndarray, max_iter: int = 12,
                  patch: np.ndarray | None = None) -> RefineResult:
    """Polish a root of the target system (with optional patch row).

    Runs plain Newton until the update is below the refinement target or
    max_iter is reached; a singular Jacobian returns the input flagged.
    """
    pv = None if patch is None else np.asarray(patch, dtype=np.complex128)
    hom = _Homotopy(system, 1.0 + 0.0j,
                    np.zeros(system.neq, dtype=np.complex128), pv)
    u = np.asarray(point, dtype=np.complex128).copy()
    best = u.copy()
    best_res = hom.target_residual(u)
    singular = False
    iters = 0
    for iters in range(1, max_iter + 1):
        H, J = hom.value_jac(u, 1.0)
        try:
            du = np.linalg.solve(J, -H)
        except np.linalg.LinAlgError:
            singular = True
            break
        u = u + du
        res = hom.target_residual(u)
        if res < best_res:
            best, best_res = u.copy(), res
        if np.max(np.abs(du)) <= REFINE_TARGET * (1.0 + np.max(np.abs(u))):
            break
    best.setflags(write=False)
    return RefineResult(best, best_res, iters, singular)


def _matrix_nullspace(mat: np.ndarray, scale: float = 1.0, rtol: float = 1e-8):
    """Orthonormal nullspace basis columns of a square matrix.

    `scale` floors the rank cutoff so a matrix that is tiny throughout
    (e.g. A - lam*I at a full eigenspace) reads as all-null rather than
    full-rank.
    """
    _, sv, vh = np.linalg.svd(mat)
    top = sv[0] if sv.size else 0.0
    dim = int(np.sum(sv <= rtol * max(top, scale)))
    if dim == 0:
        return np.zeros((mat.shape[1], 0))
    return vh[-dim:].conj().T


def _cluster_key(lam: complex, x: np.ndarray):
    parts = [round(lam.real, 7), round(lam.imag, 7)]
    for z in x:
        parts.append(round(z.real, 7))
        parts.append(round(z.imag, 7))
    return tuple(parts)


def _same_class(lam1, x1, lam2, x2, tol: float) -> bool:
    if abs(lam1 - lam2) > tol * (1.0 + abs(lam1)):
        return False
    scale = max(1.0, float(np.max(np.abs(x1))))
    return float(np.max(np.abs(x1 - x2))) <= tol * scale


def group_into_classes(outcomes, A: Tensor, cfg: TrackerConfig,
                       _recheck: bool = True):
    """Cluster converged endpoints into eigenpair classes.

    Returns (classes, GroupDiagnostics).  Multiplicity is cluster size
    divided by m-2 for m >= 3 (non-divisible sizes are surfaced via the
    degenerate-cluster counter) and plain cluster size for m = 2.
    """
    m, n = A.m, A.n
    k = m - 2
    failed = 0
    at_inf = 0
    trivial = 0
    max_res = 0.0
    entries = []            # (canonical pair, raw lam-tilde, residual, cond)
    for out in outcomes:
        if not out.converged:
            if out.status == DIVERGED and m == 2:
                at_inf += 1     # Bezout excess of the bilinear system
            else:
                failed += 1
            continue
        max_res = max(max_res, out.residual)
        u = out.endpoint
        x = u[:n]
        if np.linalg.norm(x) <= TRIVIAL_X * np.linalg.norm(u):
            trivial += 1
            continue
        lam = u[n] if m == 2 else u[n] ** k
        pair = canonicalize(EigenPair(lam, x, residual=out.residual), m)
        entries.append((pair, u[n], out.residual, out.condition))

    entries.sort(key=lambda e: _cluster_key(e[0].lam, e[0].x))
    clusters: list[list] = []
    for entry in entries:
        pair = entry[0]
        placed = False
        for cl in clusters:
            rep = cl[0][0]
            if _same_class(rep.lam, rep.x, pair.lam, pair.x, cfg.cluster_radius):
                cl.append(entry)
                placed = True
                break
        if not placed:
            clusters.append([entry])

    degenerate = 0
    classes = []
    for cl in clusters:
        size = len(cl)
        best = min(cl, key=lambda e: e[2])
        if m == 2:
            mult = size
        else:
            if size % k:
                degenerate += 1
            mult = max(1, round(size / k))
        rep = best[0]
        w = rep.x / np.linalg.norm(rep.x)
        iso = bool(abs(w @ w) <= ISOTROPY_TOL)
        cond = max(e[3] for e in cl)
        classes.append(EigenClass(representative=rep, multiplicity=mult,
                                  isotropic=iso,
                                  normalized_lambdas=normalized_eigenvalues(rep, m),
                                  cluster_size=size, condition=cond))

    positive_dim = False
    if m == 2 and classes:
        classes, positive_dim, degenerate = _matrix_eigenspace_fixup(
            A, classes, cfg, degenerate)
    elif classes:
        suspicious = [c for c in classes if c.condition > POSITIVE_DIM_COND]
        if suspicious and _recheck:
            positive_dim = _positive_dim_recheck(A, suspicious, cfg)

    classes.sort(key=lambda c: _cluster_key(c.representative.lam,
                                            c.representative.x))
    diag = GroupDiagnostics(failed_paths=failed, at_infinity=at_inf,
                            trivial_paths=trivial,
                            degenerate_clusters=degenerate,
                            positive_dimensional=positive_dim,
                            max_residual=max_res)
    return tuple(classes), diag


def _matrix_eigenspace_fixup(A: Tensor, classes, cfg: TrackerConfig,
                             degenerate: int):
    """m = 2: merge clusters sharing an eigenvalue via the nullspace.

    A repeated eigenvalue with eigenspace dimension d > 1 has no isolated
    eigenvector classes; the tracker scatters endpoints over the
    eigenspace.  Replace such groups by d basis classes and flag the
    report as positive-dimensional.
    """
    n = A.n
    groups: list[list] = []
    for c in classes:
        for g in groups:
            if abs(g[0].representative.lam - c.representative.lam) \
                    <= 1e-6 * (1.0 + abs(c.representative.lam)):
                g.append(c)
                break
        else:
            groups.append([c])
    out = []
    positive_dim = False
    mat = A.array
    for g in groups:
        lam = g[0].representative.lam
        needs_check = len(g) > 1 or any(c.condition > POSITIVE_DIM_COND for c in g)
        if not needs_check:
            out.extend(g)
            continue
        ns = _matrix_nullspace(mat - lam * np.eye(n),
                               scale=max(1.0, float(np.max(np.abs(mat)))))
        d = ns.shape[1]
        if d <= 1:
            merged_size = sum(c.cluster_size for c in g)
            if len(g) > 1:
                degenerate += 1
            best = min(g, key=lambda c: c.representative.residual
                       if c.representative.residual is not None else 0.0)
            out.append(EigenClass(representative=best.representative,
                                  multiplicity=merged_size,
                                  isotropic=best.isotropic,
                                  normalized_lambdas=normalized_eigenvalues(
                                      best.representative, 2),
                                  cluster_size=merged_size,
                                  condition=max(c.condition for c in g)))
            continue
        positive_dim = True
        total = sum(c.cluster_size for c in g)
        for i in range(d):
            vec = ns[:, i]
            pair = canonicalize(EigenPair(lam, vec, residual=0.0), 2)
            w = pair.x / np.linalg.norm(pair.x)
            out.append(EigenClass(representative=pair, multiplicity=1,
                                  isotropic=bool(abs(w @ w) <= ISOTROPY_TOL),
                                  normalized_lambdas=normalized_eigenvalues(pair, 2),
                                  cluster_size=total,
                                  condition=max(c.condition for c in g)))
    return out, positive_dim, degenerate


def _positive_dim_recheck(A: Tensor, suspicious, cfg: TrackerConfig) -> bool:
    """Re-run with a fresh patch; a suspicious cluster whose representative
    x cannot be reproduced at the same lam marks a positive-dimensional
    eigenvariety component."""
    cfg2 = cfg.fresh()
    outcomes2 = track_all(build_eigen_system(A), cfg2)
    classes2, _ = group_into_classes(outcomes2, A, cfg2, _recheck=False)
    for c in suspicious:
        lam, x = c.representative.lam, c.representative.x
        found = False
        for c2 in classes2:
            lam2, x2 = c2.representative.lam, c2.representative.x
            if abs(lam2 - lam) > 1e-6 * (1.0 + abs(lam)):
                continue
            scale = max(1.0, float(np.max(np.abs(x))))
            if float(np.max(np.abs(x - x2))) <= 1e-6 * scale:
                found = True
                break
        if not found:
            return True
    return False
