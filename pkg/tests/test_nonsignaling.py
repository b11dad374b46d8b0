import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeroerror.errors import ArgumentError, SizeError, ValidationError
from zeroerror.graphs import CliqueCover, Graph, complete_graph, cycle_graph, empty_graph
from zeroerror.nonsignaling import (
    NSDistribution, compound_zero_error_holds, cover_membership, extract_lhv, find_extension,
    is_bob_symmetric, is_nonsignaling, ns_compound_alpha, ns_compound_feasible, pr_box,
    product_distribution, shareability_check, symmetrize,
)
from zeroerror.params import clique_cover_numbers, independence_number

F = Fraction
P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
P3_COVER = CliqueCover.of(3, [(0, 1), (1, 2)])


def local(rows):
    """Local strategy matrix [out, in] from a list of columns given per input."""
    return np.array([[F(v) for v in col] for col in rows], dtype=object).T


@st.composite
def local_strategies(draw, n_in=2, n_out=2):
    cols = []
    for _ in range(n_in):
        w = draw(st.lists(st.integers(0, 3), min_size=n_out, max_size=n_out).filter(any))
        cols.append([F(v, sum(w)) for v in w])
    return local(cols)


def all_subsets_nonsignaling(p: NSDistribution) -> bool:
    """Textbook definition: every subset marginal depends only on that subset's inputs."""
    n = p.n_parties
    for r in range(1, n):
        for keep in itertools.combinations(range(n), r):
            drop = [j for j in range(n) if j not in keep]
            m = p.table.sum(axis=tuple(drop))
            in_axes = len(keep)
            for dropped_in in itertools.product(*(range(p.parties[j][0]) for j in drop)):
                idx = [slice(None)] * in_axes + [slice(None)] * n
                for j, x in zip(drop, dropped_in):
                    idx[in_axes + j] = x
                ref = [slice(None)] * in_axes + [slice(None)] * n
                for j in drop:
                    ref[in_axes + j] = 0
                if not np.all(m[tuple(idx)] == m[tuple(ref)]):
                    return False
    return True


class TestDistribution:
    def test_normalization_checked(self):
        t = np.full((2, 2), F(1, 3), dtype=object)
        with pytest.raises(ValidationError, match="sum"):
            NSDistribution(((2, 2),), t)

    def test_negative_rejected(self):
        t = np.array([[F(2), F(0)], [F(-1), F(1)]], dtype=object)
        with pytest.raises(ValidationError, match="non-negative"):
            NSDistribution(((2, 2),), t)

    def test_shape_checked(self):
        with pytest.raises(ValidationError, match="shape"):
            NSDistribution(((2, 2), (2, 2)), np.zeros((2, 2), dtype=object))

    def test_marginal(self):
        p = product_distribution(local([[1, 0], [0, 1]]), local([[F(1, 2), F(1, 2)], [1, 0]]))
        assert p.marginal([1]) == NSDistribution(((2, 2),), local([[F(1, 2), F(1, 2)], [1, 0]]))


class TestNonSignaling:
    @given(local_strategies(), local_strategies(n_in=3))
    def test_product_accepted(self, a, b):
        assert is_nonsignaling(product_distribution(a, b))

    def test_pr_box_accepted(self):
        assert is_nonsignaling(pr_box())

    def test_signaling_box_rejected(self):
        t = np.zeros((2, 2, 2, 2), dtype=object)
        for a, x, y in itertools.product(range(2), repeat=3):
            t[a, x, x, y] = F(1, 2)  # b = x
        verdict = is_nonsignaling(NSDistribution(((2, 2), (2, 2)), t))
        assert not verdict
        assert verdict.details["party"] == 0 and "party 0" in verdict.reason

    @given(st.data())
    @settings(max_examples=60)
    def test_per_party_matches_all_subsets(self, data):
        # three parties, binary in/out; mixtures of products are NS, perturbations usually are not
        n_terms = data.draw(st.integers(1, 3))
        table = None
        for _ in range(n_terms):
            t = product_distribution(*(data.draw(local_strategies()) for _ in range(3))).table
            table = t if table is None else table + t
        table = table * F(1, n_terms)
        if data.draw(st.booleans()):
            # move mass between two output cells for one input combination only
            x = data.draw(st.tuples(*[st.integers(0, 1)] * 3))
            src = data.draw(st.tuples(*[st.integers(0, 1)] * 3))
            dst = data.draw(st.tuples(*[st.integers(0, 1)] * 3))
            mass = table[src + x]
            table[src + x] -= mass
            table[dst + x] += mass
        p = NSDistribution(((2, 2),) * 3, table)
        assert bool(is_nonsignaling(p)) == all_subsets_nonsignaling(p)

    def test_tripartite_pr_extension_is_ns(self):
        # PR box between parties 0 and 1, party 2 outputs its own input
        t = np.zeros((2,) * 6, dtype=object)
        for a, b, x, y, z in itertools.product(range(2), repeat=5):
            t[a, b, z, x, y, z] = F(1, 2) if (a ^ b) == (x & y) else F(0)
        p = NSDistribution(((2, 2),) * 3, t)
        assert is_nonsignaling(p) and all_subsets_nonsignaling(p)


class TestCompoundFeasibility:
    def test_p3_two_receivers(self):
        assert ns_compound_feasible(P3, P3_COVER, 2, 2).feasible
        assert not ns_compound_feasible(P3, P3_COVER, 2, 3).feasible

    def test_k2(self):
        assert not ns_compound_feasible(complete_graph(2), CliqueCover.of(2, [(0, 1)]), 1, 2).feasible

    def test_witness_valid(self):
        res = ns_compound_feasible(P3, P3_COVER, 2, 2)
        w = res.witness
        assert w.parties == ((2, 3), (2, 2), (2, 2))
        assert is_nonsignaling(w)
        assert compound_zero_error_holds(w, cover_membership(P3, P3_COVER))

    def test_infeasible_has_farkas(self):
        res = ns_compound_feasible(P3, P3_COVER, 2, 3)
        assert res.witness is None and res.farkas is not None

    @pytest.mark.parametrize("g", [P3, cycle_graph(4), complete_graph(3), empty_graph(2),
                                   Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])])
    @pytest.mark.parametrize("ell", [1, 2])
    def test_classical_strategy_embeds(self, g, ell):
        cover = clique_cover_numbers(g)[2]
        alpha, _ = independence_number(g)
        assert ns_compound_feasible(g, cover, ell, alpha).feasible

    def test_monotone_in_m(self):
        g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        cover = clique_cover_numbers(g)[2]
        results = [ns_compound_feasible(g, cover, 2, m).feasible for m in range(1, 6)]
        assert results == sorted(results, reverse=True)

    def test_variable_cap(self):
        with pytest.raises(SizeError, match="variables"):
            ns_compound_feasible(cycle_graph(4), clique_cover_numbers(cycle_graph(4))[2], 4, 2, var_cap=10)

    def test_invalid_cover(self):
        with pytest.raises(ValidationError):
            ns_compound_feasible(P3, CliqueCover.of(3, [(0, 1)]), 1, 2)


class TestCompoundAlpha:
    def test_p3(self):
        assert ns_compound_alpha(P3, 2).value == 2
        assert ns_compound_alpha(P3, 1).value >= 2

    def test_k2(self):
        assert ns_compound_alpha(complete_graph(2), 1).value == 1

    def test_cap(self):
        res = ns_compound_alpha(empty_graph(3), 1, m_cap=2)
        assert res.capped and str(res) == ">= 2"

    def test_non_increasing_in_ell(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
        values = [ns_compound_alpha(g, ell).value for ell in (1, 2, 3)]
        assert values == sorted(values, reverse=True)


class TestSymmetrize:
    def test_fixed_point(self):
        p = product_distribution(local([[1, 0]]), local([[F(1, 3), F(2, 3)]]), local([[F(1, 3), F(2, 3)]]))
        assert symmetrize(p) == p

    def test_mixture_of_distinct_bobs(self):
        alice = local([[1, 0]])
        b1, b2 = local([[1, 0]]), local([[0, 1]])
        q = symmetrize(product_distribution(alice, b1, b2))
        expected = (product_distribution(alice, b1, b2).table + product_distribution(alice, b2, b1).table) * F(1, 2)
        assert np.all(q.table == expected)
        assert is_bob_symmetric(q)

    @given(local_strategies(), local_strategies(), local_strategies())
    @settings(max_examples=30)
    def test_idempotent_and_ns(self, a, b1, b2):
        q = symmetrize(product_distribution(a, b1, b2))
        assert symmetrize(q) == q
        assert is_nonsignaling(q)

    def test_witness_stays_feasible(self):
        w = ns_compound_feasible(P3, P3_COVER, 2, 2).witness
        q = symmetrize(w)
        assert is_nonsignaling(q)
        assert compound_zero_error_holds(q, cover_membership(P3, P3_COVER))

    def test_mismatched_bobs(self):
        p = product_distribution(local([[1, 0]]), local([[1, 0]]), local([[1, 0, 0]]))
        with pytest.raises(ArgumentError):
            symmetrize(p)


class TestShareability:
    def test_product_shares(self):
        a, b = local([[1, 0], [F(1, 2), F(1, 2)]]), local([[F(1, 4), F(3, 4)], [0, 1]])
        p = product_distribution(a, b)
        assert shareability_check(product_distribution(a, b, b, b), p)

    def test_asymmetric_rejected(self):
        a = local([[1, 0]])
        b1, b2 = local([[1, 0]]), local([[0, 1]])
        verdict = shareability_check(product_distribution(a, b1, b2), product_distribution(a, b1))
        assert not verdict and verdict.details["condition"] == 1

    def test_wrong_marginal_rejected(self):
        a, b, c = local([[1, 0]]), local([[1, 0]]), local([[0, 1]])
        verdict = shareability_check(product_distribution(a, c, c), product_distribution(a, b))
        assert not verdict and verdict.details["condition"] == 2

    def test_pr_box_not_two_shareable(self):
        assert find_extension(pr_box(), 2) is None

    def test_local_box_extends(self):
        p = product_distribution(local([[1, 0], [0, 1]]), local([[F(1, 2), F(1, 2)], [1, 0]]))
        q = find_extension(p, 2)
        assert q is not None and shareability_check(q, p)


class TestLHV:
    def test_classical(self):
        a, b = local([[F(1, 3), F(2, 3)], [1, 0]]), local([[F(1, 2), F(1, 2)], [0, 1]])
        p = product_distribution(a, b)
        model = extract_lhv(product_distribution(a, b, b), p)
        assert sum(model.weights) == 1
        assert np.all(model.reconstruct() == p.table)

    def test_compound_witness_roundtrip(self):
        q = symmetrize(ns_compound_feasible(P3, P3_COVER, 2, 2).witness)
        p = q.marginal([0, 1])
        model = extract_lhv(q, p)
        assert np.all(model.reconstruct() == p.table)

    def test_more_bobs_than_inputs(self):
        a, b = local([[1, 0], [0, 1]]), local([[F(1, 5), F(4, 5)], [F(1, 2), F(1, 2)]])
        p = product_distribution(a, b)
        model = extract_lhv(product_distribution(a, b, b, b), p)
        assert np.all(model.reconstruct() == p.table)

    def test_too_few_bobs(self):
        a, b = local([[1, 0], [0, 1]]), local([[1, 0], [0, 1], [1, 0]])
        p = product_distribution(a, b)
        with pytest.raises(ArgumentError, match="at least"):
            extract_lhv(product_distribution(a, b, b), p)

    def test_invalid_sharing(self):
        a = local([[1, 0]])
        with pytest.raises(ArgumentError):
            extract_lhv(product_distribution(a, local([[1, 0]]), local([[0, 1]])), product_distribution(a, local([[1, 0]])))
