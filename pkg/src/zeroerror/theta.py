"""Lovász theta number by a dense primal-dual interior-point method.

Solves::

    max <J, X>  s.t.  tr X = 1,  X_uv = 0 (uv ∈ E),  X ⪰ 0

with the HKM search direction and Mehrotra predictor-corrector steps. The
starting point ``X = I/n`` is primal feasible and ``Z = (n+1)I - J`` is dual
feasible; after every step the edge entries of X are reset to exactly zero so
the returned matrix satisfies the equality constraints by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, SizeError, SolverError
from .graphs import Graph, complement

DEFAULT_SIZE_CAP = 400


@dataclass(frozen=True)
class ThetaConfig:
    tol: float = 1e-7
    max_iter: int = 200
    size_cap: int = DEFAULT_SIZE_CAP
    step_fraction: float = 0.95


@dataclass
class ThetaResult:
    value: float
    primal_matrix: np.ndarray
    duality_gap: float
    iterations: int
    dual_value: float


def _max_step(m: np.ndarray, dm: np.ndarray) -> float:
    """Largest a in (0, 1] with m + a·dm ⪰ 0 (m ≻ 0)."""
    chol = np.linalg.cholesky(m)
    inv = np.linalg.solve(chol, np.eye(len(m)))
    lam = np.linalg.eigvalsh(inv @ dm @ inv.T).min()
    return 1.0 if lam >= -1.0 else min(1.0, -1.0 / lam)


def lovasz_theta(g: Graph, tol: float | None = None, complement_first: bool = False,
                 config: ThetaConfig = ThetaConfig()) -> ThetaResult:
    if tol is None:
        tol = config.tol
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    if complement_first:
        g = complement(g)
    n = g.n
    if n < 1:
        raise ArgumentError("graph must have at least one vertex")
    if n > config.size_cap:
        raise SizeError(f"theta solver cap is {config.size_cap} vertices, graph has {n}")
    edges = g.edges()
    if not edges:
        # X = J/n is optimal with value n; no iterations needed
        x = np.full((n, n), 1.0 / n)
        return ThetaResult(float(n), x, 0.0, 0, float(n))
    if n == 1:
        return ThetaResult(1.0, np.ones((1, 1)), 0.0, 0, 1.0)

    us = np.array([e[0] for e in edges])
    vs = np.array([e[1] for e in edges])
    m = len(edges) + 1
    ones = np.ones((n, n))
    b = np.zeros(m)
    b[0] = 1.0

    def op(y_mat):
        out = np.empty(m)
        out[0] = np.trace(y_mat)
        out[1:] = y_mat[us, vs] + y_mat[vs, us]
        return out

    def op_adj(y):
        out = np.diag(np.full(n, y[0]))
        out[us, vs] += y[1:]
        out[vs, us] += y[1:]
        return out

    # minimise <C, X> with C = -J; dual: max b·y with A*(y) + Z = C
    c_mat = -ones
    x = np.eye(n) / n
    y = np.zeros(m)
    y[0] = -(n + 1.0)
    z = c_mat - op_adj(y)

    for it in range(1, config.max_iter + 1):
        primal = -float(np.sum(x))
        dual = float(b @ y)
        gap = primal - dual
        rp = b - op(x)
        rd = c_mat - z - op_adj(y)
        scale = max(1.0, abs(primal))
        if gap <= tol * scale and np.abs(rp).max() <= 1e-9 and np.abs(rd).max() <= 1e-9 * scale:
            break

        zinv = np.linalg.inv(z)
        zinv = (zinv + zinv.T) / 2
        w = zinv
        schur = np.empty((m, m))
        xw = x @ w
        schur[0, 0] = np.trace(xw)
        col = xw[us, vs] + xw[vs, us]
        schur[0, 1:] = col
        schur[1:, 0] = col
        ix = np.ix_
        schur[1:, 1:] = (x[ix(vs, us)] * w[ix(us, vs)] + x[ix(vs, vs)] * w[ix(us, us)]
                         + x[ix(us, us)] * w[ix(vs, vs)] + x[ix(us, vs)] * w[ix(vs, us)])
        try:
            factor = np.linalg.cholesky(schur)
        except np.linalg.LinAlgError:
            raise SolverError("Schur complement lost positive definiteness", gap=gap)

        def solve_m(rhs):
            return np.linalg.solve(factor.T, np.linalg.solve(factor, rhs))

        mu = np.sum(x * z) / n

        def direction(rc):
            # rc: complementarity right-hand side, ΔX Z + X ΔZ = rc
            rhs = rp - op(rc @ w) + op(x @ rd @ w)
            dy = solve_m(rhs)
            dz = rd - op_adj(dy)
            dx = (rc - x @ dz) @ w
            dx = (dx + dx.T) / 2
            dx[us, vs] = 0.0
            dx[vs, us] = 0.0
            return dx, dy, dz

        xz = x @ z
        dx_a, dy_a, dz_a = direction(-xz)
        ap = _max_step(x, dx_a)
        ad = _max_step(z, dz_a)
        mu_aff = np.sum((x + ap * dx_a) * (z + ad * dz_a)) / n
        sigma = min(1.0, (mu_aff / mu) ** 3)
        rc = sigma * mu * np.eye(n) - xz - dx_a @ dz_a
        dx, dy, dz = direction(rc)
        ap = min(1.0, config.step_fraction * _max_step(x, dx))
        ad = min(1.0, config.step_fraction * _max_step(z, dz))
        x = x + ap * dx
        x = (x + x.T) / 2
        x[us, vs] = 0.0
        x[vs, us] = 0.0
        y = y + ad * dy
        z = c_mat - op_adj(y)
    else:
        raise SolverError(f"no convergence within {config.max_iter} iterations (gap {gap:.3g})", gap=gap)

    # remove the tiny trace drift so tr X = 1 holds to rounding
    x = x / np.trace(x)
    value = float(np.sum(x))
    return ThetaResult(value, x, float(-dual - value), it - 1, float(-dual))


def write_matrix(path, matrix: np.ndarray) -> None:
    with open(path, "w") as fh:
        for row in np.asarray(matrix):
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")
