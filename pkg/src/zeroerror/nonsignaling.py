"""Non-signaling distributions and exact LPs over non-signaling polytopes.

Distributions are stored as numpy object arrays of :class:`Fraction` with axes
``(out_0, ..., out_{p-1}, in_0, ..., in_{p-1})``. For the Alice-plus-Bobs
programs party 0 is Alice and parties ``1..l`` are the Bobs.

The compound program is solved over its symmetry-reduced form: a feasible
distribution can always be averaged over Bob permutations, message
relabelings and cover-preserving graph automorphisms without leaving the
feasible set, so one variable per orbit of table cells suffices. The
reconstructed witness is a full table and is checked against the unreduced
constraints before it is returned.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import lp
from .errors import ArgumentError, SizeError, ValidationError
from .graphs import CliqueCover, Graph, validate_cover
from .verdict import Verdict

DEFAULT_VARIABLE_CAP = 20000
_ZERO = Fraction(0)


# --------------------------------------------------------------------- tables

@dataclass(eq=False)
class NSDistribution:
    """Conditional table ``P(outputs | inputs)`` with exact rational entries.

    ``parties`` lists ``(n_inputs, n_outputs)`` per party.
    """

    parties: tuple[tuple[int, int], ...]
    table: np.ndarray

    def __post_init__(self):
        self.parties = tuple((int(a), int(b)) for a, b in self.parties)
        shape = tuple(o for _, o in self.parties) + tuple(i for i, _ in self.parties)
        t = np.asarray(self.table, dtype=object)
        if t.shape != shape:
            raise ValidationError(f"table shape {t.shape} does not match parties (expected {shape})")
        if any(a < 1 or b < 1 for a, b in self.parties):
            raise ValidationError("every party needs at least one input and one output")
        t = np.vectorize(Fraction, otypes=[object])(t) if t.size else t
        if any(v < 0 for v in t.flat):
            raise ValidationError("probabilities must be non-negative")
        p = len(self.parties)
        sums = t.sum(axis=tuple(range(p))) if p else t
        for idx in np.ndindex(*sums.shape):
            if sums[idx] != 1:
                raise ValidationError(f"outputs for inputs {idx} sum to {sums[idx]}, expected 1")
        self.table = t

    @property
    def n_parties(self) -> int:
        return len(self.parties)

    def __eq__(self, other) -> bool:
        return (isinstance(other, NSDistribution) and self.parties == other.parties
                and bool(np.all(self.table == other.table)))

    def marginal(self, keep: Sequence[int]) -> "NSDistribution":
        """Marginal on the parties in ``keep`` (dropped parties' inputs fixed to 0)."""
        p = self.n_parties
        drop = [j for j in range(p) if j not in keep]
        t = self.table.sum(axis=tuple(drop)) if drop else self.table
        # remaining axes: kept outputs, then all inputs; fix dropped inputs to 0
        index = [slice(None)] * len(keep) + [slice(None) if j in keep else 0 for j in range(p)]
        t = t[tuple(index)]
        order = list(keep)
        perm = [sorted(order).index(j) for j in order]
        nk = len(keep)
        t = np.transpose(t, perm + [nk + q for q in perm])
        return NSDistribution(tuple(self.parties[j] for j in order), t)


def product_distribution(*locals_: np.ndarray) -> NSDistribution:
    """Product of local strategies; ``locals_[j][a, x] = P_j(a | x)``."""
    parties, t = [], None
    mats = [np.asarray(m, dtype=object) for m in locals_]
    p = len(mats)
    shape = [m.shape[0] for m in mats] + [m.shape[1] for m in mats]
    t = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        val = Fraction(1)
        for j, m in enumerate(mats):
            val *= Fraction(m[idx[j], idx[p + j]])
        t[idx] = val
    parties = [(m.shape[1], m.shape[0]) for m in mats]
    return NSDistribution(tuple(parties), t)


def pr_box() -> NSDistribution:
    """Popescu–Rohrlich box: ``a ⊕ b = x·y`` with uniform marginals."""
    t = np.empty((2, 2, 2, 2), dtype=object)
    for a, b, x, y in itertools.product(range(2), repeat=4):
        t[a, b, x, y] = Fraction(1, 2) if (a ^ b) == (x & y) else _ZERO
    return NSDistribution(((2, 2), (2, 2)), t)


def is_nonsignaling(p: NSDistribution) -> Verdict:
    """Per-party check: summing out party j's output must not depend on party j's input."""
    n = p.n_parties
    for j in range(n):
        m = p.table.sum(axis=j)
        # input axis of party j sits at position n - 1 + j after dropping output axis j
        axis = n - 1 + j
        ref = np.take(m, 0, axis=axis)
        for x in range(1, p.parties[j][0]):
            if not np.all(np.take(m, x, axis=axis) == ref):
                return Verdict.reject(f"party {j} signals: marginal of the others changes between inputs 0 and {x}",
                                      party=j, inputs=(0, x))
    return Verdict.ok()


def _bob_axes_permutation(n_bobs: int, perm: Sequence[int]) -> list[int]:
    p = n_bobs + 1
    outs = [0] + [1 + perm[k] for k in range(n_bobs)]
    return outs + [p + a for a in outs]


def _check_bob_alphabets(p: NSDistribution) -> None:
    if p.n_parties < 2:
        raise ArgumentError("need Alice and at least one Bob")
    if len(set(p.parties[1:])) != 1:
        raise ArgumentError(f"Bob alphabets differ: {list(p.parties[1:])}")


def symmetrize(p: NSDistribution) -> NSDistribution:
    """Average of ``p`` over all permutations of the Bobs (parties 1..l)."""
    _check_bob_alphabets(p)
    ell = p.n_parties - 1
    total = None
    perms = list(itertools.permutations(range(ell)))
    for perm in perms:
        t = np.transpose(p.table, _bob_axes_permutation(ell, perm))
        total = t.copy() if total is None else total + t
    total = total * Fraction(1, len(perms))
    return NSDistribution(p.parties, total)


def is_bob_symmetric(p: NSDistribution) -> Verdict:
    _check_bob_alphabets(p)
    ell = p.n_parties - 1
    for k in range(ell - 1):
        perm = list(range(ell))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        if not np.all(np.transpose(p.table, _bob_axes_permutation(ell, perm)) == p.table):
            return Verdict.reject(f"not invariant under swapping Bobs {k + 1} and {k + 2}", bobs=(k + 1, k + 2))
    return Verdict.ok()


def shareability_check(q: NSDistribution, p: NSDistribution) -> Verdict:
    """Accept iff ``q`` is an l-sharing of ``p`` with respect to Bob."""
    if p.n_parties != 2 or q.n_parties < 2 or q.parties[0] != p.parties[0] or any(b != p.parties[1] for b in q.parties[1:]):
        raise ArgumentError("incompatible alphabets between extension and distribution")
    ns = is_nonsignaling(q)
    if not ns:
        return Verdict.reject(f"extension is signaling: {ns.reason}", condition="non-signaling")
    sym = is_bob_symmetric(q)
    if not sym:
        return Verdict.reject(f"condition 1 (permutation invariance) fails: {sym.reason}", condition=1)
    ell = q.n_parties - 1
    t = q.table.sum(axis=tuple(range(2, ell + 1))) if ell > 1 else q.table
    # t axes: a, b1, x, y1, y2..yl; the single-Bob marginal must match p for all other inputs
    for rest in itertools.product(*(range(p.parties[1][0]) for _ in range(ell - 1))):
        if not np.all(t[(slice(None),) * 4 + rest] == p.table):
            return Verdict.reject(f"condition 2 (marginal equals P) fails for other Bob inputs {rest}", condition=2)
    return Verdict.ok()


# -------------------------------------------------------- LHV models

@dataclass
class LHVModel:
    """``P(a,b|x,y) = Σ_λ Q(λ) A(a|x,λ) B(b|y,λ)``; λ indexes ``lambdas``."""

    lambdas: list[tuple[int, ...]]
    weights: list[Fraction]
    alice_strategy: np.ndarray  # [a, x, λ]
    bob_strategy: np.ndarray  # [b, y, λ]

    def reconstruct(self) -> np.ndarray:
        na, nx, nl = self.alice_strategy.shape
        nb, ny, _ = self.bob_strategy.shape
        t = np.empty((na, nb, nx, ny), dtype=object)
        for a, b, x, y in itertools.product(range(na), range(nb), range(nx), range(ny)):
            t[a, b, x, y] = sum((self.weights[l] * self.alice_strategy[a, x, l] * self.bob_strategy[b, y, l]
                                 for l in range(nl)), _ZERO)
        return t


def extract_lhv(q: NSDistribution, p: NSDistribution) -> LHVModel:
    """Local hidden variable model for ``p`` from an l-sharing ``q`` with ``l >= |Y|``.

    Bob k is asked question k-1 for k = 1..|Y|; their joint answer is the
    hidden variable. Extra Bobs beyond |Y| are marginalized out.
    """
    verdict = shareability_check(q, p)
    if not verdict:
        raise ArgumentError(f"not a valid sharing: {verdict.reason}")
    ell = q.n_parties - 1
    (nx, na), (ny, nb) = p.parties
    if ell < ny:
        raise ArgumentError(f"need at least |Y| = {ny} Bobs, got {ell}")
    t = q.table
    if ell > ny:
        t = t.sum(axis=tuple(range(1 + ny, 1 + ell)))
        t = t[(slice(None),) * (1 + ny) + (slice(None),) * (1 + ny) + (0,) * (ell - ny)]
    # fix the event E: Bob k gets input k-1
    cond = t[(slice(None),) * (1 + ny) + (slice(None),) + tuple(range(ny))]  # [a, b1..bY, x]
    lambdas = list(itertools.product(range(nb), repeat=ny))
    weights = []
    alice = np.empty((na, nx, len(lambdas)), dtype=object)
    bob = np.empty((nb, ny, len(lambdas)), dtype=object)
    for li, lam in enumerate(lambdas):
        joint = cond[(slice(None),) + lam + (slice(None),)]  # [a, x]
        per_x = joint.sum(axis=0)
        w = per_x[0]
        if any(v != w for v in per_x):
            raise ArgumentError("Bob answers depend on Alice's input; extension is signaling")
        weights.append(w)
        for x in range(nx):
            for a in range(na):
                alice[a, x, li] = joint[a, x] / w if w else Fraction(1, na)
        for y in range(ny):
            for b in range(nb):
                bob[b, y, li] = Fraction(int(b == lam[y]))
    return LHVModel(lambdas, weights, alice, bob)


# ------------------------------------------------ symmetric Alice + l Bobs LP

class _SymmetricProgram:
    """Exact LP over Bob-symmetric tables for Alice plus ``ell`` identical Bobs.

    ``relabelings`` are extra symmetries as 4-tuples of index maps
    ``(alice_out, alice_in, bob_out, bob_in)``; they must map the feasible set
    onto itself and must form a group together with the identity.
    """

    def __init__(self, a_out, a_in, b_out, b_in, ell, relabelings=(), zero_rule=None, var_cap=DEFAULT_VARIABLE_CAP):
        self.dims = (a_out, a_in, b_out, b_in)
        self.ell = ell
        shape = (a_out,) + (b_out,) * ell + (a_in,) + (b_in,) * ell
        self.shape = shape
        grids = np.indices(shape, dtype=np.int64).reshape(len(shape), -1)
        av, bo, ai, bi = grids[0], grids[1:1 + ell], grids[1 + ell], grids[2 + ell:]
        identity = (np.arange(a_out), np.arange(a_in), np.arange(b_out), np.arange(b_in))
        best = None
        for ao_map, ai_map, bo_map, bi_map in [identity, *relabelings]:
            pairs = np.sort(bo_map[bo] * b_in + bi_map[bi], axis=0) if ell else np.zeros((0, av.size), np.int64)
            code = ao_map[av] * a_in + ai_map[ai]
            for k in range(ell):
                code = code * (b_out * b_in) + pairs[k]
            best = code if best is None else np.minimum(best, code)
        _, orbit = np.unique(best, return_inverse=True)
        orbit = orbit.reshape(-1)
        zero = zero_rule(av, bo, ai, bi) if zero_rule is not None else np.zeros(av.size, bool)
        n_orbits = int(orbit.max()) + 1
        zero_orbit = np.zeros(n_orbits, bool)
        zero_orbit[orbit[zero]] = True
        if np.any(zero_orbit[orbit] != zero):  # pragma: no cover - guards a non-invariant zero rule
            raise AssertionError("zero-error rule is not invariant under the symmetry group")
        var_of_orbit = np.full(n_orbits, -1, np.int64)
        keep = ~zero_orbit
        var_of_orbit[keep] = np.arange(int(keep.sum()))
        self.n_vars = int(keep.sum())
        self.n_cells = int(av.size)
        if self.n_vars > var_cap:
            raise SizeError(f"reduced LP has {self.n_vars} variables ({self.n_cells} table cells), above the cap of {var_cap}")
        self.vid = var_of_orbit[orbit].reshape(shape)
        self.rows: list[dict[int, int]] = []
        self.rhs: list[Fraction] = []
        self._seen: set = set()
        self._add_structure_rows()

    def _add(self, plus: np.ndarray, minus: np.ndarray | None, rhs) -> None:
        """Add rows ``Σ plus[:, r] - Σ minus[:, r] = rhs[r]`` (variable-id arrays, -1 = fixed zero)."""
        n_rows = plus.shape[1]
        row_idx = [np.broadcast_to(np.arange(n_rows), plus.shape)]
        var_idx = [plus]
        coef = [np.ones(plus.shape, np.int64)]
        if minus is not None:
            row_idx.append(np.broadcast_to(np.arange(n_rows), minus.shape))
            var_idx.append(minus)
            coef.append(-np.ones(minus.shape, np.int64))
        r = np.concatenate([a.ravel() for a in row_idx])
        v = np.concatenate([a.ravel() for a in var_idx])
        c = np.concatenate([a.ravel() for a in coef])
        mask = v >= 0
        r, v, c = r[mask], v[mask], c[mask]
        key = r * (self.n_vars + 1) + v
        uniq, inv = np.unique(key, return_inverse=True)
        sums = np.bincount(inv, weights=c).round().astype(np.int64)
        nz = sums != 0
        uniq, sums = uniq[nz], sums[nz]
        rows_of = uniq // (self.n_vars + 1)
        vars_of = uniq % (self.n_vars + 1)
        bounds = np.searchsorted(rows_of, np.arange(n_rows + 1))
        rhs = list(rhs) if not np.isscalar(rhs) else [rhs] * n_rows
        for k in range(n_rows):
            lo, hi = bounds[k], bounds[k + 1]
            entries = tuple(zip(vars_of[lo:hi].tolist(), sums[lo:hi].tolist()))
            target = Fraction(rhs[k])
            if not entries and target == 0:
                continue
            key_ = (entries, target)
            if key_ in self._seen:
                continue
            self._seen.add(key_)
            self.rows.append(dict(entries))
            self.rhs.append(target)

    def _add_structure_rows(self) -> None:
        a_out, a_in, b_out, b_in = self.dims
        ell = self.ell
        out_n = a_out * b_out ** ell
        in_n = a_in * b_in ** ell
        flat = self.vid.reshape(out_n, in_n)
        self._add(flat, None, 1)
        # Alice: Σ_v over her output is independent of her input
        v = self.vid.reshape(a_out, b_out ** ell, a_in, b_in ** ell)
        for x in range(1, a_in):
            self._add(v[:, :, x, :].reshape(a_out, -1), v[:, :, 0, :].reshape(a_out, -1), 0)
        if ell == 0:
            return
        # Bob 1 (other Bobs follow by symmetry)
        w = self.vid.reshape(a_out, b_out, b_out ** (ell - 1), a_in, b_in, b_in ** (ell - 1))
        w = np.moveaxis(w, [1, 4], [0, 1])  # (b1_out, b1_in, a_out, rest_out, a_in, rest_in)
        for y in range(1, b_in):
            self._add(w[:, y].reshape(b_out, -1), w[:, 0].reshape(b_out, -1), 0)

    def add_marginal_rows(self, target: np.ndarray) -> None:
        """Require the Alice–Bob1 marginal (other Bobs' inputs at 0) to equal ``target[a, b, x, y]``."""
        a_out, a_in, b_out, b_in = self.dims
        ell = self.ell
        w = self.vid.reshape(a_out, b_out, b_out ** (ell - 1), a_in, b_in, b_in ** (ell - 1))[..., 0]
        # w: (a, b1, rest_out, x, y1) -> terms over rest_out, rows over (a, b1, x, y1)
        terms = np.moveaxis(w, 2, 0).reshape(b_out ** (ell - 1), -1)
        self._add(terms, None, [Fraction(t) for t in np.asarray(target, dtype=object).ravel()])

    def solve(self) -> tuple[lp.LPResult, np.ndarray | None]:
        result = lp.solve_feasibility(self.rows, self.rhs, self.n_vars)
        if not result.feasible:
            return result, None
        values = np.array(result.x + [_ZERO], dtype=object)
        table = values[self.vid]  # -1 picks the trailing zero
        return result, table


# ----------------------------------------------------------------- compound

@dataclass
class CompoundResult:
    feasible: bool
    witness: NSDistribution | None
    n_vars: int
    n_rows: int
    n_cells: int
    pivots: int
    farkas: list[Fraction] | None = field(default=None, repr=False)
    method: str = ""


def _cover_automorphisms(g: Graph, cover: CliqueCover, max_n: int = 12) -> list[tuple[list[int], list[int]]]:
    """Graph automorphisms that permute the cover's parts, with the induced part map."""
    if g.n > max_n:
        return []
    index = {p: j for j, p in enumerate(cover.parts)}
    if len(index) != len(cover.parts):
        return []
    found = []
    n = g.n
    perm = [-1] * n
    used = [False] * n

    def extend(u: int) -> None:
        if u == n:
            part_map = []
            for part in cover.parts:
                image = tuple(sorted(perm[v] for v in part))
                if image not in index:
                    return
                part_map.append(index[image])
            if perm != list(range(n)):
                found.append((list(perm), part_map))
            return
        for w in range(n):
            if used[w] or g.degree(w) != g.degree(u):
                continue
            if all(g.adjacent(u, v) == g.adjacent(w, perm[v]) for v in range(u)):
                perm[u], used[w] = w, True
                extend(u + 1)
                perm[u], used[w] = -1, False

    extend(0)
    return found


def _message_perms(m: int) -> list[np.ndarray]:
    if math.factorial(m) <= 120:
        perms = itertools.permutations(range(m))
    else:
        perms = (tuple((i + s) % m for i in range(m)) for s in range(m))
    return [np.array(p) for p in perms]


def ns_compound_feasible(g: Graph, cover: CliqueCover, ell: int, m: int,
                         var_cap: int = DEFAULT_VARIABLE_CAP) -> CompoundResult:
    """Exact feasibility of the non-signaling compound program with ``m`` messages.

    Alice inputs a message in ``[m]`` and outputs a vertex; each of the ``ell``
    Bobs inputs a cover part and outputs a guess. Cells where the vertex lies
    in every Bob's part but some guess is wrong are forced to zero.
    """
    validate_cover(g, cover)
    if ell < 1 or m < 1:
        raise ArgumentError("ell and m must be positive")
    n, nc = g.n, len(cover)
    member = np.zeros((n, nc), bool)
    for j, part in enumerate(cover.parts):
        member[list(part), j] = True

    def zero_rule(v, guesses, msg, parts):
        inside = np.all(member[v[None, :], parts], axis=0)
        wrong = np.any(guesses != msg[None, :], axis=0)
        return inside & wrong

    relabelings = []
    autos = [(np.arange(n), np.arange(nc))] + [(np.array(p), np.array(q)) for p, q in _cover_automorphisms(g, cover)]
    for mp in _message_perms(m):
        for vp, cp in autos:
            relabelings.append((vp, mp, mp, cp))
    program = _SymmetricProgram(n, m, m, nc, ell, relabelings[1:], zero_rule, var_cap)
    result, table = program.solve()
    witness = None
    if result.feasible:
        witness = NSDistribution(((m, n),) + ((nc, m),) * ell, table)
        _assert_compound_witness(witness, member)
    return CompoundResult(result.feasible, witness, program.n_vars, len(program.rows), program.n_cells,
                          result.pivots, result.farkas, result.method)


def _assert_compound_witness(p: NSDistribution, member: np.ndarray) -> None:
    if not is_nonsignaling(p):  # pragma: no cover - LP solution re-validated against full constraints
        raise AssertionError("LP witness is signaling")
    if not compound_zero_error_holds(p, member):  # pragma: no cover
        raise AssertionError("LP witness violates the zero-error condition")


def compound_zero_error_holds(p: NSDistribution, member: np.ndarray) -> bool:
    """True iff ``p`` puts no mass on (vertex in all parts, some Bob wrong)."""
    ell = p.n_parties - 1
    for idx in zip(*np.nonzero(p.table != 0)):
        v, guesses, msg, parts = idx[0], idx[1:1 + ell], idx[1 + ell], idx[2 + ell:]
        if all(member[v, c] for c in parts) and any(gs != msg for gs in guesses):
            return False
    return True


def cover_membership(g: Graph, cover: CliqueCover) -> np.ndarray:
    member = np.zeros((g.n, len(cover)), bool)
    for j, part in enumerate(cover.parts):
        member[list(part), j] = True
    return member


@dataclass
class CompoundAlpha:
    value: int
    capped: bool
    cover: CliqueCover
    results: list[CompoundResult]

    def __str__(self) -> str:
        return f">= {self.value}" if self.capped else str(self.value)


def ns_compound_alpha(g: Graph, ell: int, m_cap: int | None = None, cover: CliqueCover | None = None,
                      var_cap: int = DEFAULT_VARIABLE_CAP) -> CompoundAlpha:
    """Largest feasible message count ``m <= m_cap`` (feasibility is monotone in m)."""
    from .params import clique_cover_numbers

    if cover is None:
        cover = clique_cover_numbers(g)[2]
    if m_cap is None:
        # the non-signaling value never exceeds the number of channel outputs
        m_cap = len(cover) + 1
    results = []
    value = 0
    for m in range(1, m_cap + 1):
        res = ns_compound_feasible(g, cover, ell, m, var_cap)
        results.append(res)
        if not res.feasible:
            return CompoundAlpha(value, False, cover, results)
        value = m
    return CompoundAlpha(value, True, cover, results)


# ------------------------------------------------------------ extensions

def find_extension(p: NSDistribution, ell: int, var_cap: int = DEFAULT_VARIABLE_CAP) -> NSDistribution | None:
    """Search (exact LP) for a symmetric non-signaling ``ell``-Bob extension of ``p``.

    Returns the extension or None when the extension polytope is empty.
    """
    if p.n_parties != 2:
        raise ArgumentError("expected a bipartite distribution")
    if not is_nonsignaling(p):
        raise ArgumentError("distribution is signaling")
    (nx, na), (ny, nb) = p.parties
    program = _SymmetricProgram(na, nx, nb, ny, ell, (), None, var_cap)
    program.add_marginal_rows(p.table)
    result, table = program.solve()
    if not result.feasible:
        if not lp.check_farkas(program.rows, program.rhs, result.farkas, program.n_vars):  # pragma: no cover
            raise AssertionError("infeasibility certificate failed verification")
        return None
    q = NSDistribution(((nx, na),) + ((ny, nb),) * ell, table)
    return q
