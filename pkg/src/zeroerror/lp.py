"""Exact rational feasibility LP.

Solves ``A x = b, x >= 0`` over the rationals. Infeasible problems come back
with a Farkas vector ``y`` satisfying ``yᵀA <= 0`` and ``yᵀb > 0``; feasible
ones with a basic solution. Both can be rechecked with :func:`check_solution`
and :func:`check_farkas` without trusting the solver.

Two engines are available. ``"simplex"`` is a phase-one simplex over the
rationals. ``"guided"`` asks HiGHS for a floating-point basic solution (or a
Farkas ray), rebuilds it exactly by rational elimination on its support and
accepts it only after the exact check; if that fails the rational simplex
runs instead, so the answer never depends on floating point.

``gmpy2.mpq`` is used for the arithmetic when available; results are always
returned as :class:`fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 ships with the reference environment
    _Q = Fraction

Row = Mapping[int, int | Fraction]


@dataclass
class LPResult:
    feasible: bool
    x: list[Fraction] | None
    farkas: list[Fraction] | None
    pivots: int
    method: str = "simplex"


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def solve_feasibility(rows: Sequence[Row], rhs: Sequence[int | Fraction], n_vars: int,
                      method: str = "guided", max_pivots: int | None = None, rule: str = "hybrid",
                      stall_limit: int = 50) -> LPResult:
    """Decide feasibility of ``rows · x = rhs, x >= 0`` exactly.

    ``method`` is ``"guided"`` (default) or ``"simplex"``; see the module
    docstring. Either way the returned solution or Farkas vector has passed
    :func:`check_solution` or :func:`check_farkas`.
    """
    if method not in ("guided", "simplex"):
        raise ValueError(f"unknown method {method!r}")
    if method == "guided":
        result = _guided(rows, rhs, n_vars)
        if result is not None:
            return result
    result = simplex_feasibility(rows, rhs, n_vars, max_pivots, rule, stall_limit)
    if result.feasible:
        ok = check_solution(rows, rhs, result.x)
    else:
        ok = check_farkas(rows, rhs, result.farkas, n_vars)
    if not ok:  # pragma: no cover - exact arithmetic makes this unreachable
        raise AssertionError("simplex returned an unverifiable answer")
    return result


def simplex_feasibility(rows: Sequence[Row], rhs: Sequence[int | Fraction], n_vars: int,
                        max_pivots: int | None = None, rule: str = "hybrid",
                        stall_limit: int = 50) -> LPResult:
    """Decide feasibility of ``rows · x = rhs, x >= 0``; columns are ``0..n_vars-1``.

    ``rule="bland"`` always uses Bland's smallest-index rule. ``"hybrid"``
    prices by most negative reduced cost and falls back to Bland's rule for
    good once ``stall_limit`` consecutive degenerate pivots occur, which keeps
    the finite-termination guarantee.
    """
    if rule not in ("bland", "hybrid"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    use_bland = rule == "bland"
    stalled = 0
    m = len(rows)
    art = n_vars  # artificial column for row i is art + i
    tab: list[dict[int, object]] = []
    b: list[object] = []
    sign: list[int] = []
    for i, (row, r) in enumerate(zip(rows, rhs)):
        r = _Q(r)
        s = -1 if r < 0 else 1
        entries = {j: _Q(v) * s for j, v in row.items() if v != 0}
        entries[art + i] = _Q(1)
        tab.append(entries)
        b.append(r * s)
        sign.append(s)

    # phase-one objective: minimise the sum of artificials; obj holds reduced costs
    obj: dict[int, object] = {}
    for row in tab:
        for j, v in row.items():
            if j < art:
                obj[j] = obj.get(j, 0) - v
    obj = {j: v for j, v in obj.items() if v != 0}
    value = sum(b, _Q(0))  # current phase-one objective
    basis = [art + i for i in range(m)]

    pivots = 0
    while True:
        if use_bland:
            entering = min((j for j, d in obj.items() if j < art and d < 0), default=None)
        else:
            entering, best_d = None, 0
            for j, d in obj.items():
                if j < art and (d < best_d or (d == best_d and entering is not None and j < entering)):
                    entering, best_d = j, d
        if entering is None:
            break
        leave, best_ratio = None, None
        for i, row in enumerate(tab):
            a = row.get(entering)
            if a is not None and a > 0:
                ratio = b[i] / a
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leave])):
                    leave, best_ratio = i, ratio
        if leave is None:  # pragma: no cover - phase one is bounded below by zero
            raise AssertionError("phase-one objective unbounded")
        prow = tab[leave]
        piv = prow[entering]
        if piv != 1:
            prow = {j: v / piv for j, v in prow.items()}
            tab[leave] = prow
            b[leave] = b[leave] / piv
        bl = b[leave]
        items = list(prow.items())
        for i, row in enumerate(tab):
            if i == leave:
                continue
            f = row.get(entering)
            if f is None:
                continue
            for j, v in items:
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            b[i] = b[i] - f * bl
        f = obj.get(entering)
        for j, v in items:
            nv = obj.get(j, 0) - f * v
            if nv:
                obj[j] = nv
            else:
                obj.pop(j, None)
        value = value + f * bl
        if bl == 0:
            stalled += 1
            if stalled >= stall_limit:
                use_bland = True
        else:
            stalled = 0
        basis[leave] = entering
        pivots += 1
        if max_pivots is not None and pivots > max_pivots:
            raise RuntimeError(f"exceeded {max_pivots} pivots")

    if value == 0:
        x = [Fraction(0)] * n_vars
        for i, j in enumerate(basis):
            if j < art:
                x[j] = _frac(b[i])
        return LPResult(True, x, None, pivots)
    # reduced cost of artificial i is 1 - y_i
    y = [_frac((1 - obj.get(art + i, 0)) * sign[i]) for i in range(m)]
    return LPResult(False, None, y, pivots)


def solve_linear_system(eqs: Sequence[Row], rhs: Sequence, n_unknowns: int) -> list[Fraction] | None:
    """Exact solution of a sparse linear system with free unknowns set to 0; None if inconsistent.

    Incremental reduced row echelon form over the rationals. Each new pivot is
    the column of the reduced equation that appears in the fewest stored rows,
    which keeps fill-in low on 0/±1 systems.
    """
    piv_rows: dict[int, dict[int, object]] = {}  # pivot column -> row (coefficient 1 at pivot)
    piv_rhs: dict[int, object] = {}
    col_rows: dict[int, set[int]] = {}  # column -> pivot columns whose row contains it
    for eq, r in zip(eqs, rhs):
        row = {j: _Q(v) for j, v in eq.items() if v != 0}
        val = _Q(r)
        for c in [c for c in row if c in piv_rows]:
            f = row.pop(c, None)
            if f is None:
                continue
            for j, v in piv_rows[c].items():
                if j == c:
                    continue
                nv = row.get(j, 0) - f * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)
            val = val - f * piv_rhs[c]
        if not row:
            if val != 0:
                return None
            continue
        pc = min(row, key=lambda j: (len(col_rows.get(j, ())), j))
        f = row[pc]
        if f != 1:
            row = {j: v / f for j, v in row.items()}
            val = val / f
        # eliminate pc from stored rows
        for other in list(col_rows.get(pc, ())):
            orow = piv_rows[other]
            g = orow.pop(pc)
            for j, v in row.items():
                if j == pc:
                    continue
                nv = orow.get(j, 0) - g * v
                if nv:
                    if j not in orow:
                        col_rows.setdefault(j, set()).add(other)
                    orow[j] = nv
                elif j in orow:
                    del orow[j]
                    col_rows[j].discard(other)
            piv_rhs[other] = piv_rhs[other] - g * val
        col_rows.pop(pc, None)
        piv_rows[pc] = row
        piv_rhs[pc] = val
        for j in row:
            if j != pc:
                col_rows.setdefault(j, set()).add(pc)
    x = [Fraction(0)] * n_unknowns
    for c, v in piv_rhs.items():
        x[c] = _frac(v)
    return x


def _guided(rows: Sequence[Row], rhs: Sequence, n_vars: int) -> LPResult | None:
    """Float-guided exact answer, or None when the reconstruction does not verify."""
    try:
        import numpy as np
        import scipy.sparse as sp
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover
        return None
    m = len(rows)
    if m == 0 or n_vars == 0:
        return None
    ri, ci, vals = [], [], []
    for i, row in enumerate(rows):
        for j, v in row.items():
            ri.append(i)
            ci.append(j)
            vals.append(float(v))
    a = sp.csr_matrix((vals, (ri, ci)), shape=(m, n_vars))
    b = np.array([float(r) for r in rhs])
    res = linprog(np.zeros(n_vars), A_eq=a, b_eq=b, bounds=(0, None), method="highs")
    if res.status == 0:
        support = [j for j in range(n_vars) if res.x[j] > 1e-9]
        keep = set(support)
        eqs = [{j: v for j, v in row.items() if j in keep} for row in rows]
        x = solve_linear_system(eqs, rhs, n_vars)
        if x is not None and check_solution(rows, rhs, x):
            return LPResult(True, x, None, 0, "guided")
        return None
    if res.status != 2:
        return None
    # Farkas ray: Aᵀy <= 0, bᵀy = 1, y free
    ray = linprog(np.zeros(m), A_ub=a.T.tocsr(), b_ub=np.zeros(n_vars), A_eq=b[None, :], b_eq=[1.0],
                  bounds=(None, None), method="highs")
    if ray.status != 0:
        return None
    y = ray.x
    slack = a.T @ y
    cols: dict[int, dict[int, object]] = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            cols.setdefault(j, {})[i] = v
    scale = max(1.0, float(np.abs(y).max()))
    eqs: list[dict] = [cols[j] for j in range(n_vars) if j in cols and slack[j] > -1e-9 * scale]
    targets: list = [0] * len(eqs)
    eqs += [{i: 1} for i in range(m) if abs(y[i]) <= 1e-9 * scale]
    targets += [0] * (len(eqs) - len(targets))
    eqs.append({i: r for i, r in enumerate(rhs) if r != 0})
    targets.append(1)
    yy = solve_linear_system(eqs, targets, m)
    if yy is not None and check_farkas(rows, rhs, yy, n_vars):
        return LPResult(False, None, yy, 0, "guided")
    return None


def check_solution(rows: Sequence[Row], rhs: Sequence, x: Sequence[Fraction]) -> bool:
    if any(v < 0 for v in x):
        return False
    return all(sum((Fraction(c) * x[j] for j, c in row.items()), Fraction(0)) == r for row, r in zip(rows, rhs))


def check_farkas(rows: Sequence[Row], rhs: Sequence, y: Sequence[Fraction], n_vars: int) -> bool:
    """True iff ``y`` proves infeasibility: ``yᵀA <= 0`` entrywise and ``yᵀb > 0``."""
    col = [Fraction(0)] * n_vars
    for row, yi in zip(rows, y):
        if yi:
            for j, c in row.items():
                col[j] += yi * c
    return all(v <= 0 for v in col) and sum((yi * r for yi, r in zip(y, rhs)), Fraction(0)) > 0
