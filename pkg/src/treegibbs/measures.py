"""Exact finite-volume Gibbs measures and their consistency diagnostics.

Configurations on a ball are indexed as mixed-radix integers over the
deterministic breadth-first vertex order, root digit most significant, so
marginalizing to a smaller ball is a reshape.  Everything here enumerates
exactly (no sampling); operations whose state space exceeds the enumeration
cap fail loudly.  The two-point correlation uses exact leaf-elimination on
the tree instead of raw enumeration, so it reaches radii the cap forbids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .fields import ReducedFieldAssignment
from .model import LambdaModel
from .topology import Ball, build_ball

DEFAULT_CAP = 2**20


class EnumerationCapError(RuntimeError):
    """State space too large for exact enumeration."""


def _enumerate_configs(q: int, num_vertices: int, cap: int) -> np.ndarray:
    total = q**num_vertices
    if total > cap:
        raise EnumerationCapError(
            f"{q}^{num_vertices} = {total} configurations exceed the enumeration cap {cap}"
        )
    idx = np.arange(total)
    place = q ** np.arange(num_vertices - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // place[None, :]) % q


def _edge_energies(model: LambdaModel, ball: Ball, configs: np.ndarray) -> np.ndarray:
    lam = model.lam_float
    e = np.zeros(configs.shape[0])
    for u, v in ball.edges:
        e += lam[configs[:, u], configs[:, v]]
    return e


@dataclass(frozen=True)
class FiniteVolumeMeasure:
    """Exact distribution over spin configurations of a ball, in log form."""

    ball: Ball
    q: int
    logweights: np.ndarray
    logZ: float

    def probabilities(self) -> np.ndarray:
        p = np.exp(self.logweights - self.logZ)
        assert np.all(p >= 0)
        return p

    def configs(self) -> np.ndarray:
        return _enumerate_configs(self.q, self.ball.num_vertices, len(self.logweights))


def finite_volume_measure(
    model: LambdaModel,
    fields: ReducedFieldAssignment,
    level: int | None = None,
    cap: int = DEFAULT_CAP,
) -> FiniteVolumeMeasure:
    """The level-n Gibbs measure with the given boundary fields on shell n.

    Log-weight of a configuration: -beta*H(sigma) plus, for each boundary
    vertex x, the pairing h_x . eta_{sigma(x)} with h_x = ((q-1)/q) h'_x and
    h'_x read in the eta-basis, so the pairing goes through the Gram matrix.
    """
    n = fields.ball.n if level is None else level
    if n > fields.ball.n:
        raise ValueError(f"requested level {n} exceeds the field assignment's radius {fields.ball.n}")
    ball = build_ball(fields.ball.k, n)
    q = model.q
    configs = _enumerate_configs(q, ball.num_vertices, cap)
    logw = -model.beta_float * _edge_energies(model, ball, configs)
    gram_part = model.spin.gram[: q - 1, :]          # (q-1, q)
    scale = (q - 1) / q
    for x in ball.shells[n]:
        pair = scale * (fields.hprime[x] @ gram_part)  # weight per spin value
        logw += pair[configs[:, x]]
    return FiniteVolumeMeasure(ball=ball, q=q, logweights=logw, logZ=float(logsumexp(logw)))


def marginalize(mu: FiniteVolumeMeasure, to_level: int) -> FiniteVolumeMeasure:
    """Exact marginal of a finite-volume measure on the smaller ball of radius to_level."""
    if to_level >= mu.ball.n:
        raise ValueError(f"marginal level {to_level} must be below {mu.ball.n}")
    if to_level < 0:
        raise ValueError("marginal level must be >= 0")
    sub = build_ball(mu.ball.k, to_level)
    keep = sub.num_vertices
    block = mu.logweights.reshape(mu.q**keep, -1)
    logmarg = logsumexp(block, axis=1) - mu.logZ
    return FiniteVolumeMeasure(ball=sub, q=mu.q, logweights=logmarg, logZ=0.0)


def consistency_residual(
    model: LambdaModel, fields: ReducedFieldAssignment, cap: int = DEFAULT_CAP
) -> float:
    """Kolmogorov-consistency defect between levels n and n-1.

    Builds the level-n measure from the shell-n fields, marginalizes it one
    level, and compares with the measure built directly from the shell-(n-1)
    fields.  Vanishes exactly when the field recursion holds on shell n-1.
    """
    n = fields.ball.n
    if n < 1:
        raise ValueError("need a ball of radius >= 1 to compare two levels")
    mu_n = finite_volume_measure(model, fields, cap=cap)
    marg = marginalize(mu_n, n - 1)
    mu_prev = finite_volume_measure(model, fields, level=n - 1, cap=cap)
    return float(np.max(np.abs(marg.probabilities() - mu_prev.probabilities())))


def dlr_conditional(
    model: LambdaModel, ball: Ball, omega: Sequence[int], cap: int = DEFAULT_CAP
) -> np.ndarray:
    """Conditional distribution on the interior V_n given boundary spins one shell out.

    ``ball`` has radius n+1 and ``omega`` fixes its outermost shell (shell
    order).  Returns the normalized probability vector over interior
    configurations: proportional to exp(-beta*(H(sigma) + U(sigma, omega))).
    """
    if ball.n < 1:
        raise ValueError("need a ball of radius >= 1 for a conditioning layer")
    outer = ball.shells[ball.n]
    if len(omega) != len(outer):
        raise ValueError(f"boundary configuration must cover {len(outer)} vertices, got {len(omega)}")
    q = model.q
    if any(not (0 <= s < q) for s in omega):
        raise ValueError(f"boundary spins outside 0..{q - 1}")
    inner = build_ball(ball.k, ball.n - 1)
    configs = _enumerate_configs(q, inner.num_vertices, cap)
    lam = model.lam_float
    e = _edge_energies(model, inner, configs)
    for pos, y in enumerate(outer):
        x = ball.parent[y]
        e += lam[configs[:, x], omega[pos]]
    logw = -model.beta_float * e
    return np.exp(logw - logsumexp(logw))


def markov_property_residual(model: LambdaModel, n: int, cap: int = DEFAULT_CAP) -> float:
    """Conditional-independence defect across shell n under the zero-field measure.

    Conditions the level-(n+1) measure on the spins of shell n and compares,
    in total variation, the laws of the inner ball V_{n-1} across all outer
    boundary configurations.  Vanishes for nearest-neighbor interactions.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    from .fields import zero_fields

    ball = build_ball(model.k, n + 1)
    mu = finite_volume_measure(model, zero_fields(ball, model.q), cap=cap)
    q = model.q
    na = build_ball(model.k, n - 1).num_vertices
    nb = len(ball.shells[n])
    nc = len(ball.shells[n + 1])
    p = mu.probabilities().reshape(q**na, q**nb, q**nc)
    worst = 0.0
    for xi in range(q**nb):
        block = p[:, xi, :]                      # inner configs x outer configs
        cond = block / block.sum(axis=0, keepdims=True)
        tv = 0.5 * np.max(np.sum(np.abs(cond[:, :, None] - cond[:, None, :]), axis=0))
        worst = max(worst, float(tv))
    return worst


def _pair_marginal(model: LambdaModel, ball: Ball, x0: int, x1: int) -> np.ndarray:
    """Exact joint law of (sigma(x0), sigma(x1)) under the zero-field measure.

    Leaf elimination in the log domain: for each clamped value pair, sweep
    the vertices in reverse breadth-first order, folding each child's message
    into its parent.  Linear in the ball size, independent of the cap.
    """
    q = model.q
    logw = -model.beta_float * model.lam_float       # parent spin indexes rows
    nv = ball.num_vertices

    def log_z(clamps: dict[int, int]) -> float:
        loginner = np.zeros((nv, q))
        for v, a in clamps.items():
            loginner[v] = -np.inf
            loginner[v, a] = 0.0
        for v in range(nv - 1, 0, -1):
            msg = logsumexp(logw + loginner[v][None, :], axis=1)
            loginner[ball.parent[v]] += msg
        return float(logsumexp(loginner[0]))

    out = np.full((q, q), -np.inf)
    for a0 in range(q):
        for a1 in range(q):
            if x0 == x1:
                if a0 == a1:
                    out[a0, a1] = log_z({x0: a0})
            else:
                out[a0, a1] = log_z({x0: a0, x1: a1})
    flat = out.reshape(-1)
    return np.exp(flat - logsumexp(flat)).reshape(q, q)


def two_point_correlation(model: LambdaModel, x0: int, x1: int, n: int) -> np.ndarray:
    """Correlation-defect matrix |P(s(x0)=i, s(x1)=j) - P(s(x0)=i) P(s(x1)=j)|.

    Computed under the zero-field measure at radius n, by exact tree
    elimination.
    """
    ball = build_ball(model.k, n)
    nv = ball.num_vertices
    if not (0 <= x0 < nv and 0 <= x1 < nv):
        raise ValueError(f"vertices ({x0}, {x1}) outside the radius-{n} ball")
    joint = _pair_marginal(model, ball, x0, x1)
    m0 = joint.sum(axis=1)
    m1 = joint.sum(axis=0)
    return np.abs(joint - np.outer(m0, m1))


def correlation_decay(model: LambdaModel, n: int) -> list[tuple[int, float]]:
    """Max correlation defect between the root and one vertex per distance 1..n."""
    ball = build_ball(model.k, n)
    rows = []
    for d in range(1, n + 1):
        x = ball.shells[d][0]
        defect = two_point_correlation(model, 0, x, n)
        rows.append((d, float(np.max(defect))))
    return rows
