"""Polynomial systems for tensor eigenproblems.

A system stores per-equation term lists over the variables
(x_1, ..., x_n, lam), where lam is the homogenizing eigenvalue variable
for m >= 3 and the plain eigenvalue for m = 2.  Evaluation and Jacobian
assembly run off cached dense exponent tables so the path tracker can
call them in a tight loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .tensor import Tensor

Term = tuple[tuple[int, ...], complex]


class _EvalTables:
    """Stacked exponent/coefficient arrays shared by value and Jacobian."""

    def __init__(self, neq: int, nvars: int, equations) -> None:
        rows: list[tuple[int, ...]] = []
        coeffs: list[complex] = []
        starts: list[int] = []
        for eq in equations:
            starts.append(len(rows))
            if not eq:
                # keep one zero row so reduceat segments stay aligned
                rows.append((0,) * nvars)
                coeffs.append(0.0)
                continue
            for expo, c in eq:
                rows.append(expo)
                coeffs.append(c)
        self.E = np.array(rows, dtype=np.int64)
        self.c = np.array(coeffs, dtype=np.complex128)
        self.starts = np.array(starts, dtype=np.intp)
        self.cols = np.arange(nvars)[None, :]
        self.maxdeg = int(self.E.max(initial=0))
        self.neq = neq
        self.nvars = nvars
        # derivative tables: exponent dropped in var j, coeff scaled by it
        self.dE = []
        self.dc = []
        for j in range(nvars):
            Ej = self.E.copy()
            cj = self.c * Ej[:, j]
            Ej[:, j] = np.maximum(Ej[:, j] - 1, 0)
            self.dE.append(Ej)
            self.dc.append(cj)

    def _powers(self, u: np.ndarray) -> np.ndarray:
        pw = np.empty((self.maxdeg + 1, self.nvars), dtype=np.complex128)
        pw[0] = 1.0
        for k in range(1, self.maxdeg + 1):
            pw[k] = pw[k - 1] * u
        return pw

    def value(self, u: np.ndarray) -> np.ndarray:
        pw = self._powers(u)
        mono = np.prod(pw[self.E, self.cols], axis=1) * self.c
        return np.add.reduceat(mono, self.starts)

    def value_jacobian(self, u: np.ndarray):
        pw = self._powers(u)
        mono = np.prod(pw[self.E, self.cols], axis=1) * self.c
        F = np.add.reduceat(mono, self.starts)
        J = np.empty((self.neq, self.nvars), dtype=np.complex128)
        for j in range(self.nvars):
            dm = np.prod(pw[self.dE[j], self.cols], axis=1) * self.dc[j]
            J[:, j] = np.add.reduceat(dm, self.starts)
        return F, J


@dataclass(frozen=True)
class PolySystem:
    """Polynomial system with declared per-equation degrees.

    nvars == neq is a square system; nvars == neq + 1 is a homogeneous
    (or affine-deficient) system that the tracker closes with a linear
    patch.
    """

    neq: int
    nvars: int
    equations: tuple
    degrees: tuple

    def __post_init__(self) -> None:
        if len(self.equations) != self.neq or len(self.degrees) != self.neq:
            raise ValueError("equation/degree count mismatch")
        if any(d < 1 for d in self.degrees):
            raise ValueError("declared degrees must be positive")
        for eq, d in zip(self.equations, self.degrees):
            for expo, _ in eq:
                if len(expo) != self.nvars:
                    raise ValueError("exponent arity mismatch")
                if sum(expo) > d:
                    raise ValueError("term degree exceeds declared degree")

    @cached_property
    def _tables(self) -> _EvalTables:
        return _EvalTables(self.neq, self.nvars, self.equations)

    def evaluate(self, u: np.ndarray) -> np.ndarray:
        """Values of all equations at u (complex vector of length nvars)."""
        u = np.asarray(u, dtype=np.complex128)
        return self._tables.value(u)

    def jacobian(self, u: np.ndarray) -> np.ndarray:
        u = np.asarray(u, dtype=np.complex128)
        return self._tables.value_jacobian(u)[1]

    def value_and_jacobian(self, u: np.ndarray):
        u = np.asarray(u, dtype=np.complex128)
        return self._tables.value_jacobian(u)

    @property
    def total_degree(self) -> int:
        """Bezout number: product of declared degrees."""
        out = 1
        for d in self.degrees:
            out *= d
        return out


def _power_terms(A: Tensor, j: int, nvars: int) -> dict:
    """Terms of (A x^{m-1})_j as exponent-over-nvars -> coefficient."""
    acc: dict[tuple[int, ...], complex] = {}
    n = A.n
    for tail in itertools.product(range(n), repeat=A.m - 1):
        cval = complex(A.array[(j,) + tail])
        if cval == 0:
            continue
        expo = [0] * nvars
        for i in tail:
            expo[i] += 1
        key = tuple(expo)
        acc[key] = acc.get(key, 0.0 + 0.0j) + cval
    return acc


def build_eigen_system(A: Tensor) -> PolySystem:
    """The n equations (A x^{m-1})_j - lam^{m-2} x_j over (x, lam).

    Homogeneous of degree m-1 in the n+1 variables for m >= 3.  For
    m = 2 this is the bilinear system (A x)_j - lam x_j with declared
    degree 2, supported for n <= 8.
    """
    m, n = A.m, A.n
    if m == 2 and n > 8:
        raise ValueError("matrix eigenproblem supported for n <= 8 only")
    v = n + 1
    eqs = []
    for j in range(n):
        acc = _power_terms(A, j, v)
        expo = [0] * v
        expo[j] = 1
        expo[n] = m - 2 if m >= 3 else 1
        key = tuple(expo)
        acc[key] = acc.get(key, 0.0 + 0.0j) - 1.0
        eqs.append(tuple((e, c) for e, c in sorted(acc.items()) if c != 0))
    deg = m - 1 if m >= 3 else 2
    return PolySystem(n, v, tuple(eqs), (deg,) * n)


def build_shifted_system(A: Tensor, lam: complex) -> PolySystem:
    """Square system A x^{m-1} - lam * x = 0 at a fixed eigenvalue guess."""
    m, n = A.m, A.n
    eqs = []
    for j in range(n):
        acc = _power_terms(A, j, n)
        expo = [0] * n
        expo[j] = 1
        key = tuple(expo)
        acc[key] = acc.get(key, 0.0 + 0.0j) - complex(lam)
        eqs.append(tuple((e, c) for e, c in sorted(acc.items()) if c != 0))
    return PolySystem(n, n, tuple(eqs), (m - 1,) * n)
