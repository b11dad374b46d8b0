import json
from fractions import Fraction

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs
from zeroerror.certs import OperatorCertificate, certificate_from_independent_set
from zeroerror.errors import ParseError, ValidationError
from zeroerror.graphs import Channel, Graph, cycle_graph, disjoint_union_power, empty_graph, strong_product
from zeroerror.io import (
    certificate_from_json, certificate_to_json, channel_to_json, format_channel, format_graph,
    graph_from_json, graph_to_json, load_certificate, load_schema, ns_from_json, ns_to_json,
    parse_channel, parse_graph, parse_vectors, write_graph,
)
from zeroerror.nonsignaling import pr_box

P3_TEXT = "c path on three vertices\np edge 3 2\ne 1 2\ne 2 3\n"


class TestGraphText:
    def test_p3(self):
        g = parse_graph(P3_TEXT)
        assert g == Graph.from_edges(3, [(0, 1), (1, 2)])

    def test_c5_edge_order_irrelevant(self):
        text = "p edge 5 5\ne 5 1\ne 2 1\ne 3 2\ne 4 3\ne 4 5\n"
        assert parse_graph(text) == cycle_graph(5)

    def test_duplicate_edges_collapse(self):
        assert parse_graph("p edge 2 2\ne 1 2\ne 2 1\n").num_edges == 1

    def test_self_loop_reports_line(self):
        with pytest.raises(ParseError) as info:
            parse_graph("p edge 3 2\ne 1 2\ne 3 3\n")
        assert info.value.line == 3 and "self-loop" in str(info.value)

    def test_index_out_of_range(self):
        with pytest.raises(ParseError, match="out of range") as info:
            parse_graph("p edge 3 1\ne 1 4\n")
        assert info.value.line == 2

    @pytest.mark.parametrize("text,fragment", [
        ("e 1 2\n", "before"),
        ("p edge 2 1\np edge 2 1\n", "duplicate"),
        ("p edge x 1\n", "integer"),
        ("p edge 2 1\ne 1\n", "expected"),
        ("p edge 2 1\nq 1 2\n", "unknown"),
        ("c nothing\n", "missing"),
    ])
    def test_malformed(self, text, fragment):
        with pytest.raises(ParseError, match=fragment):
            parse_graph(text)

    @given(graphs(max_n=8))
    @settings(max_examples=80)
    def test_round_trip(self, g):
        assert parse_graph(format_graph(g)) == g

    def test_labels_round_trip(self):
        g = strong_product(cycle_graph(3), empty_graph(2))
        text = format_graph(g)
        assert "c label 1 0,1" in text
        assert parse_graph(text) == g
        u = disjoint_union_power(cycle_graph(3), 2)
        assert parse_graph(format_graph(u)).labels == u.labels

    def test_default_labels_emit_no_comments(self):
        assert "c label" not in format_graph(cycle_graph(4))

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "c5.txt"
        write_graph(path, cycle_graph(5))
        assert parse_graph(path) == cycle_graph(5)
        assert parse_graph(str(path)) == cycle_graph(5)

    @given(graphs(max_n=8))
    @settings(max_examples=30)
    def test_json_round_trip(self, g):
        data = graph_to_json(g)
        jsonschema.validate(data, load_schema("graph"))
        assert graph_from_json(json.loads(json.dumps(data))) == g


class TestChannels:
    def test_identity(self):
        ch = parse_channel("channel 3 3\n1 0 0\n0 1 0\n0 0 1\n")
        assert np.array_equal(ch.matrix, np.eye(3))

    def test_typewriter(self):
        rows = "\n".join(" ".join("0.5" if j in (i, (i + 1) % 5) else "0" for j in range(5)) for i in range(5))
        ch = parse_channel("c noisy typewriter\nchannel 5 5\n" + rows + "\n")
        assert ch.matrix[4, 0] == 0.5

    def test_row_sum_rejected(self):
        with pytest.raises(ValidationError, match="row 1"):
            parse_channel("channel 2 2\n1 0\n0.9 0\n")

    def test_wrong_row_count(self):
        with pytest.raises(ParseError, match="rows"):
            parse_channel("channel 2 2\n1 0\n")

    def test_wrong_width_reports_line(self):
        with pytest.raises(ParseError) as info:
            parse_channel("channel 2 2\n1 0\n0 0 1\n")
        assert info.value.line == 3

    def test_round_trip_and_schema(self):
        ch = Channel.from_matrix([[0.25, 0.75], [1.0, 0.0]])
        again = parse_channel(format_channel(ch))
        assert np.array_equal(again.matrix, ch.matrix)
        jsonschema.validate(channel_to_json(ch), load_schema("channel"))


class TestVectors:
    def test_real(self):
        v = parse_vectors("1 0\n# comment\n0 1\n")
        assert v.dtype == float and v.shape == (2, 2)

    def test_imaginary_suffix(self):
        v = parse_vectors("1 0.5i\n-2i 3\n")
        assert v[0, 1] == 0.5j and v[1, 0] == -2j and v[1, 1] == 3

    def test_ragged(self):
        with pytest.raises(ParseError, match="dimensions"):
            parse_vectors("1 0\n1\n")

    def test_bad_token(self):
        with pytest.raises(ParseError) as info:
            parse_vectors("1 0\n1 zz\n")
        assert info.value.line == 2


class TestCertificateJson:
    def test_round_trip(self, tmp_path):
        g = cycle_graph(5)
        cert = certificate_from_independent_set(g, [0, 2], ell=2)
        data = certificate_to_json(cert)
        jsonschema.validate(data, load_schema("certificate"))
        path = tmp_path / "cert.json"
        path.write_text(json.dumps(data))
        back = load_certificate(path)
        assert (back.m, back.dim, back.parts) == (cert.m, cert.dim, cert.parts)
        assert np.array_equal(back.rho_iu, cert.rho_iu) and np.array_equal(back.rho, cert.rho)

    def test_complex_entries(self):
        rho = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
        ops = np.zeros((1, 1, 2, 2), dtype=complex)
        ops[0, 0] = rho
        back = certificate_from_json(certificate_to_json(OperatorCertificate(1, 2, 1, rho, ops)))
        assert np.array_equal(back.rho, rho)

    def test_missing_field(self):
        with pytest.raises(ValidationError, match="rho"):
            certificate_from_json({"m": 1, "ell": 1, "local_dim": 1, "operators": []})

    def test_wrong_shape(self):
        data = certificate_to_json(certificate_from_independent_set(cycle_graph(5), [0, 2]))
        data["local_dim"] = 2
        with pytest.raises(ValidationError, match="rho"):
            certificate_from_json(data)


class TestNSJson:
    def test_pr_box_round_trip(self):
        data = ns_to_json(pr_box())
        jsonschema.validate(data, load_schema("nsdistribution"))
        assert data["entries"][0] == "1/2"
        assert ns_from_json(json.loads(json.dumps(data))) == pr_box()

    @given(st.lists(st.integers(0, 5), min_size=4, max_size=4).filter(any))
    def test_single_party_round_trip(self, w):
        data = {"parties": [{"inputs": 1, "outputs": 4}], "shape": [4, 1],
                "entries": [str(Fraction(x, sum(w))) if x else "0/1" for x in w]}
        p = ns_from_json(data)
        assert ns_from_json(ns_to_json(p)) == p

    def test_bad_entry(self):
        data = ns_to_json(pr_box())
        data["entries"][0] = "1/0"
        with pytest.raises(ValidationError):
            ns_from_json(data)

    def test_wrong_count(self):
        data = ns_to_json(pr_box())
        data["entries"] = data["entries"][:-1]
        with pytest.raises(ValidationError, match="entries"):
            ns_from_json(data)
