"""Text and JSON formats for graphs, channels, vectors, certificates and tables.

Graph files are DIMACS-like::

    c optional comment
    p edge <n> <m>
    e <u> <v>            (1-based indices)

Vertex labels other than ``0..n-1`` are kept in ``c label <i> <label>``
comment lines so that constructed graphs round-trip exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .certs import OperatorCertificate
from .errors import ParseError, ValidationError
from .graphs import Channel, Graph
from .nonsignaling import NSDistribution

SCHEMA_NAMES = ("graph", "channel", "certificate", "report", "nsdistribution")


def _text(source) -> str:
    """Accept a path or the text itself (anything containing a newline is text)."""
    if isinstance(source, Path):
        return source.read_text()
    if isinstance(source, str) and "\n" not in source and Path(source).is_file():
        return Path(source).read_text()
    return str(source)


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno)


# ------------------------------------------------------------------ graphs

def parse_graph(source) -> Graph:
    text = _text(source)
    n = None
    edges: set[tuple[int, int]] = set()
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        kind = parts[0]
        if kind == "c":
            if len(parts) >= 4 and parts[1] == "label":
                labels[_int(parts[2], lineno, "label index")] = " ".join(parts[3:])
            continue
        if kind == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError("expected 'p edge <n> <m>'", lineno)
            n = _int(parts[2], lineno, "vertex count")
            # the declared edge count is informational: duplicate edges are collapsed
            if n < 0 or _int(parts[3], lineno, "edge count") < 0:
                raise ParseError("counts must be non-negative", lineno)
            continue
        if kind == "e":
            if n is None:
                raise ParseError("edge before 'p edge' line", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            u = _int(parts[1], lineno, "vertex")
            v = _int(parts[2], lineno, "vertex")
            for w in (u, v):
                if not 1 <= w <= n:
                    raise ParseError(f"vertex {w} out of range 1..{n}", lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", lineno)
            edges.add((min(u, v) - 1, max(u, v) - 1))
            continue
        raise ParseError(f"unknown line type {kind!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge <n> <m>' line")
    for i in labels:
        if not 0 <= i < n:
            raise ParseError(f"label for vertex {i} out of range")
    names = [labels.get(i, str(i)) for i in range(n)]
    return Graph.from_edges(n, sorted(edges), names)


def format_graph(g: Graph) -> str:
    edges = g.edges()
    lines = [f"p edge {g.n} {len(edges)}"]
    if list(g.labels) != [str(i) for i in range(g.n)]:
        lines = [f"c label {i} {lab}" for i, lab in enumerate(g.labels)] + lines
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    return "\n".join(lines) + "\n"


def write_graph(path, g: Graph) -> None:
    Path(path).write_text(format_graph(g))


def graph_to_json(g: Graph) -> dict[str, Any]:
    return {"n": g.n, "labels": list(g.labels), "edges": [[u, v] for u, v in g.edges()]}


def graph_from_json(data: dict[str, Any]) -> Graph:
    return Graph.from_edges(data["n"], [tuple(e) for e in data["edges"]], data.get("labels"))


# ---------------------------------------------------------------- channels

def parse_channel(source) -> Channel:
    """``channel <nIn> <nOut>`` followed by ``nIn`` rows of probabilities."""
    text = _text(source)
    header = None
    rows: list[list[float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if header is None:
            if len(parts) != 3 or parts[0] != "channel":
                raise ParseError("expected 'channel <nIn> <nOut>'", lineno)
            header = (_int(parts[1], lineno, "input count"), _int(parts[2], lineno, "output count"))
            if header[0] < 1 or header[1] < 1:
                raise ParseError("alphabet sizes must be positive", lineno)
            continue
        if len(parts) != header[1]:
            raise ParseError(f"expected {header[1]} probabilities, got {len(parts)}", lineno)
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ParseError("probabilities must be decimal numbers", lineno)
    if header is None:
        raise ParseError("missing 'channel <nIn> <nOut>' line")
    if len(rows) != header[0]:
        raise ParseError(f"expected {header[0]} rows, got {len(rows)}")
    return Channel.from_matrix(np.array(rows))


def format_channel(ch: Channel) -> str:
    lines = [f"channel {len(ch.inputs)} {len(ch.outputs)}"]
    lines += [" ".join(repr(float(p)) for p in row) for row in ch.matrix]
    return "\n".join(lines) + "\n"


def channel_to_json(ch: Channel) -> dict[str, Any]:
    return {"inputs": list(ch.inputs), "outputs": list(ch.outputs), "matrix": ch.matrix.tolist()}


# ----------------------------------------------------------------- vectors

def _complex_token(token: str, lineno: int) -> complex:
    try:
        return complex(token[:-1] + "j") if token.endswith("i") else complex(float(token))
    except ValueError:
        raise ParseError(f"bad vector component {token!r}", lineno)


def parse_vectors(source) -> np.ndarray:
    """One vector per line; components may carry an ``i`` suffix for imaginary parts."""
    text = _text(source)
    vecs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        vecs.append([_complex_token(p, lineno) for p in parts])
    if not vecs:
        raise ParseError("no vectors found")
    if len({len(v) for v in vecs}) != 1:
        raise ParseError("vectors have different dimensions")
    arr = np.array(vecs, dtype=complex)
    return arr.real.copy() if not np.any(arr.imag) else arr


# ------------------------------------------------------------ certificates

def _matrix_to_pairs(mat: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def _pairs_to_matrix(data, size: int, what: str) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape != (size, size, 2):
        raise ValidationError(f"{what} must be a {size}x{size} array of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def certificate_to_json(cert: OperatorCertificate) -> dict[str, Any]:
    return {
        "m": cert.m,
        "ell": cert.parts,
        "local_dim": cert.dim,
        "rho": _matrix_to_pairs(cert.rho),
        "operators": [[_matrix_to_pairs(op) for op in per_msg] for per_msg in cert.rho_iu],
    }


def certificate_from_json(data: dict[str, Any]) -> OperatorCertificate:
    try:
        m, ell, dim = int(data["m"]), int(data["ell"]), int(data["local_dim"])
        size = dim ** ell
        rho = _pairs_to_matrix(data["rho"], size, "rho")
        ops = data["operators"]
    except KeyError as exc:
        raise ValidationError(f"certificate is missing field {exc.args[0]!r}")
    if len(ops) != m:
        raise ValidationError(f"certificate declares m={m} but has {len(ops)} operator families")
    n = len(ops[0]) if ops else 0
    arr = np.empty((m, n, size, size), dtype=complex)
    for i, fam in enumerate(ops):
        if len(fam) != n:
            raise ValidationError(f"message {i} has {len(fam)} operators, expected {n}")
        for u, op in enumerate(fam):
            arr[i, u] = _pairs_to_matrix(op, size, f"operator [{i}][{u}]")
    return OperatorCertificate(m, dim, ell, rho, arr)


def load_certificate(path) -> OperatorCertificate:
    return certificate_from_json(json.loads(Path(path).read_text()))


# ------------------------------------------------------ non-signaling tables

def ns_to_json(p: NSDistribution) -> dict[str, Any]:
    return {
        "parties": [{"inputs": a, "outputs": b} for a, b in p.parties],
        "shape": list(p.table.shape),
        "entries": [f"{Fraction(v).numerator}/{Fraction(v).denominator}" for v in p.table.flat],
    }


def ns_from_json(data: dict[str, Any]) -> NSDistribution:
    parties = tuple((int(q["inputs"]), int(q["outputs"])) for q in data["parties"])
    shape = tuple(o for _, o in parties) + tuple(i for i, _ in parties)
    try:
        entries = [Fraction(s) for s in data["entries"]]
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad fraction entry: {exc}")
    if len(entries) != int(np.prod(shape)):
        raise ValidationError(f"expected {int(np.prod(shape))} entries, got {len(entries)}")
    table = np.empty(len(entries), dtype=object)
    table[:] = entries
    return NSDistribution(parties, table.reshape(shape))


# ------------------------------------------------------------------ schemas

def load_schema(name: str) -> dict[str, Any]:
    if name not in SCHEMA_NAMES:
        raise ValueError(f"unknown schema {name!r}")
    return json.loads(resources.files("zeroerror.schemas").joinpath(f"{name}.schema.json").read_text())


def dumps(data: Any) -> str:
    """Deterministic JSON text used for every machine-readable output."""
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
