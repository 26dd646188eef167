"""Boundary-field recursion on the tree: evaluation, propagation, fixed points.

Fields are stored in reduced form h' (the measure-side field is
h = ((q-1)/q) h'), as coordinate vectors with respect to the first q-1
simplex spin vectors.  The one-step map F sends the reduced field of a
direct successor to its contribution at the parent; measure consistency is
equivalent to h'_x = sum_{y in S(x)} F(h'_y) at every interior vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .model import LambdaModel
from .topology import Ball


@dataclass(frozen=True)
class ReducedFieldAssignment:
    """Reduced field vectors h'_x for every vertex of a ball, shape (num_vertices, q-1)."""

    ball: Ball
    hprime: np.ndarray

    def __post_init__(self):
        if self.hprime.shape[0] != self.ball.num_vertices:
            raise ValueError(
                f"field array covers {self.hprime.shape[0]} vertices, ball has {self.ball.num_vertices}"
            )
        if not np.all(np.isfinite(self.hprime)):
            raise ValueError("field components must be finite")

    def on_shell(self, m: int) -> np.ndarray:
        idx = list(self.ball.shells[m])
        return self.hprime[idx]


def zero_fields(ball: Ball, q: int) -> ReducedFieldAssignment:
    return ReducedFieldAssignment(ball, np.zeros((ball.num_vertices, q - 1)))


def recursion_map(model: LambdaModel, h: np.ndarray) -> np.ndarray:
    """One-step field map F: R^{q-1} -> R^{q-1}.

    F_i(h) = log( sum_j e^{-beta*lam[i][j]} e^{h_j} + e^{-beta*lam[i][q-1]} )
           - (same with the last row), evaluated in the log domain so large
    couplings and fields stay finite.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (model.q - 1,):
        raise ValueError(f"field must have {model.q - 1} components, got shape {h.shape}")
    a = -model.beta_float * model.lam_float            # (q, q)
    h_ext = np.concatenate([h, [0.0]])                 # spin q-1 carries no field
    row_logs = logsumexp(a + h_ext[None, :], axis=1)
    return row_logs[:-1] - row_logs[-1]


def check_unordered(model: LambdaModel, tol: float = 1e-12) -> tuple[bool, float]:
    """Does the zero field solve the recursion? Returns (verdict, ||F(0)||_inf).

    Equivalent to all rows of e^{-beta*lam} having equal sums, which holds
    for any Potts table and any stochastic-matrix model.
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    residual = float(np.max(np.abs(recursion_map(model, np.zeros(model.q - 1)))))
    return residual <= tol, residual


def propagate_fields(model: LambdaModel, ball: Ball, boundary) -> ReducedFieldAssignment:
    """Propagate boundary fields inward: h'_x = sum over successors of F(h'_y).

    ``boundary`` gives the reduced fields on the outermost shell, either as
    an array in shell order or as a mapping vertex index -> vector.
    """
    qm1 = model.q - 1
    hprime = np.zeros((ball.num_vertices, qm1))
    outer = ball.shells[ball.n]
    if isinstance(boundary, dict):
        missing = [x for x in outer if x not in boundary]
        if missing:
            raise ValueError(f"boundary fields missing for vertices {missing}")
        for x in outer:
            hprime[x] = np.asarray(boundary[x], dtype=float)
    else:
        boundary = np.asarray(boundary, dtype=float).reshape(len(outer), qm1)
        hprime[list(outer)] = boundary
    for m in range(ball.n - 1, -1, -1):
        for x in ball.shells[m]:
            acc = np.zeros(qm1)
            for y in ball.children[x]:
                acc += recursion_map(model, hprime[y])
            hprime[x] = acc
    return ReducedFieldAssignment(ball, hprime)


@dataclass(frozen=True)
class FixedPointResult:
    """Deduplicated translation-invariant solutions of h = k*F(h), lexicographically sorted."""

    solutions: tuple[tuple[float, ...], ...]
    non_converged: int


def ti_fixed_points(
    model: LambdaModel,
    starts: int = 32,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    seed: int = 42,
    damping: float = 0.5,
) -> FixedPointResult:
    """Constant-field solutions of h = k*F(h) by damped fixed-point iteration.

    A generic (non-root) vertex has k successors, so the translation-invariant
    recursion reads h = k*F(h); the root's extra successor makes a nonzero
    constant field only approximately consistent there.  Starts are drawn
    uniformly from [-5, 5]^{q-1} plus the zero start; only iterates whose
    residual ||h - k*F(h)||_inf falls below ``tol`` are reported.
    """
    if starts < 1:
        raise ValueError(f"need at least one start, got {starts}")
    rng = np.random.default_rng(seed)
    qm1 = model.q - 1
    k = model.k
    initial = [np.zeros(qm1)] + [rng.uniform(-5.0, 5.0, size=qm1) for _ in range(starts)]
    found: list[np.ndarray] = []
    non_converged = 0
    for h in initial:
        h = h.copy()
        converged = False
        for _ in range(max_iter):
            target = k * recursion_map(model, h)
            if np.max(np.abs(h - target)) <= tol:
                converged = True
                break
            h = (1.0 - damping) * h + damping * target
        if not converged:
            non_converged += 1
            continue
        if all(np.max(np.abs(h - g)) > 1e-8 for g in found):
            found.append(h)
    sols = sorted(tuple(float(c) for c in h) for h in found)
    return FixedPointResult(solutions=tuple(sols), non_converged=non_converged)
