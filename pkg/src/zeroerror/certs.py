"""Verification of operator certificates for α* and its compound variant.

A certificate is a state ``rho`` on ``(C^d)^{⊗l}`` and PSD operators
``rho_iu[i, u]`` (message ``i``, vertex ``u``). Acceptance certifies that ``m``
messages can be sent with zero error; nothing here searches for certificates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ArgumentError
from .graphs import Graph
from .verdict import Verdict

DEFAULT_TOL = 1e-9


@dataclass(eq=False)
class OperatorCertificate:
    m: int
    dim: int
    parts: int
    rho: np.ndarray
    rho_iu: np.ndarray  # shape (m, n_vertices, D, D) with D = dim ** parts

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=complex)
        self.rho_iu = np.asarray(self.rho_iu, dtype=complex)
        size = self.dim ** self.parts
        if self.rho.shape != (size, size):
            raise ArgumentError(f"rho has shape {self.rho.shape}, expected {(size, size)} for d={self.dim}, l={self.parts}")
        if self.rho_iu.ndim != 4 or self.rho_iu.shape[0] != self.m or self.rho_iu.shape[2:] != (size, size):
            raise ArgumentError(f"rho_iu has shape {self.rho_iu.shape}, expected ({self.m}, n, {size}, {size})")

    @property
    def size(self) -> int:
        return self.dim ** self.parts


def partial_trace_keep(mat: np.ndarray, dim: int, parts: int, keep: int) -> np.ndarray:
    """Trace out every tensor factor except ``keep`` (0-based) of ``B_1 ⊗ ... ⊗ B_l``."""
    if mat.shape != (dim ** parts, dim ** parts):
        raise ArgumentError(f"matrix of shape {mat.shape} is not on {parts} factors of dimension {dim}")
    if not 0 <= keep < parts:
        raise ArgumentError(f"factor {keep} out of range for {parts} factors")
    t = mat.reshape((dim,) * (2 * parts))
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:parts])
    cols = list(letters[parts:2 * parts])
    for q in range(parts):
        if q != keep:
            cols[q] = rows[q]
    subscripts = "".join(rows) + "".join(cols) + "->" + rows[keep] + cols[keep]
    return np.einsum(subscripts, t)


def _closed_pairs(g: Graph) -> Iterable[tuple[int, int]]:
    """All ordered pairs with u ≃ v (equal or adjacent), lexicographic."""
    for u in range(g.n):
        for v in range(g.n):
            if u == v or g.adjacent(u, v):
                yield u, v


def _structural_checks(g: Graph, cert: OperatorCertificate, tol: float) -> Verdict | None:
    if cert.rho_iu.shape[1] != g.n:
        raise ArgumentError(f"certificate has operators for {cert.rho_iu.shape[1]} vertices, graph has {g.n}")
    named = [("rho", cert.rho)] + [(f"rho[{i}][{u}]", cert.rho_iu[i, u]) for i in range(cert.m) for u in range(g.n)]
    for name, a in named:
        if np.linalg.norm(a - a.conj().T) > tol:
            return Verdict.reject(f"{name} is not Hermitian", condition="hermitian", operator=name)
        low = np.linalg.eigvalsh((a + a.conj().T) / 2).min()
        if low < -tol:
            return Verdict.reject(f"{name} is not positive semidefinite (eigenvalue {low:.3g})", condition="psd", operator=name)
    tr = np.trace(cert.rho)
    if abs(tr - 1) > tol:
        return Verdict.reject(f"trace(rho) = {tr.real:.12g}, expected 1", condition="trace")
    for i in range(cert.m):
        diff = np.abs(cert.rho_iu[i].sum(axis=0) - cert.rho).max()
        if diff > tol:
            return Verdict.reject(f"sum over u of rho[{i}][u] differs from rho by {diff:.3g}", condition="sum", message=i)
    return None


def verify_alpha_star_certificate(g: Graph, cert: OperatorCertificate, tol: float = DEFAULT_TOL) -> Verdict:
    """Check the three conditions defining α*(G) >= m on a single-party certificate."""
    if cert.parts != 1:
        raise ArgumentError(f"expected a single-party certificate, got l={cert.parts}")
    failed = _structural_checks(g, cert, tol)
    if failed is not None:
        return failed
    ops = cert.rho_iu
    for i, j in itertools.permutations(range(cert.m), 2):
        for u, v in _closed_pairs(g):
            norm = np.linalg.norm(ops[i, u] @ ops[j, v])
            if norm > tol:
                return Verdict.reject(f"rho[{i}][{u}] rho[{j}][{v}] is not zero (norm {norm:.3g})",
                                      condition="orthogonality", index=(i, j, u, v))
    return Verdict.ok(alpha_star_lower=cert.m)


def verify_compound_certificate(g: Graph, ell: int, cert: OperatorCertificate, tol: float = DEFAULT_TOL) -> Verdict:
    """Check the compound conditions, certifying α*_{1,l}(G) >= m."""
    if cert.parts != ell:
        raise ArgumentError(f"certificate declares {cert.parts} factors, expected l={ell}")
    failed = _structural_checks(g, cert, tol)
    if failed is not None:
        return failed
    reduced = np.empty((ell, cert.m, g.n, cert.dim, cert.dim), dtype=complex)
    for k in range(ell):
        for i in range(cert.m):
            for u in range(g.n):
                reduced[k, i, u] = partial_trace_keep(cert.rho_iu[i, u], cert.dim, ell, k)
    for i, j in itertools.permutations(range(cert.m), 2):
        for u, v in _closed_pairs(g):
            for k in range(ell):
                norm = np.linalg.norm(reduced[k, i, u] @ reduced[k, j, v])
                if norm > tol:
                    return Verdict.reject(
                        f"partial traces on factor k={k + 1} of rho[{i}][{u}] and rho[{j}][{v}] are not orthogonal (norm {norm:.3g})",
                        condition="partial-trace orthogonality", index=(i, j, u, v), k=k + 1)
    return Verdict.ok(alpha_star_lower=cert.m)


def certificate_from_independent_set(g: Graph, vertices, ell: int = 1) -> OperatorCertificate:
    """Trivial one-dimensional certificate sending message ``i`` as the i-th vertex of S."""
    s = list(vertices)
    if not g.is_independent(s):
        raise ArgumentError(f"{s} is not an independent set")
    if ell < 1:
        raise ArgumentError("l must be positive")
    ops = np.zeros((len(s), g.n, 1, 1), dtype=complex)
    for i, v in enumerate(s):
        ops[i, v, 0, 0] = 1
    return OperatorCertificate(len(s), 1, ell, np.ones((1, 1)), ops)
