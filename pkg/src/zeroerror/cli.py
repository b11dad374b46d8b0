"""Command-line front end: ``zeroerror <verb> [options]``.

Exit status is 0 on success (including a certificate that was checked and
rejected), 2 on invalid input and 3 when a solver or search budget fails.
Output is assembled in full before anything is written, so a failing command
prints only its error message on stderr.
"""
from __future__ import annotations

import argparse
import shlex
import sys
from pathlib import Path
from typing import Callable

import numpy as np

from . import bounds, graphs, io
from .bounds import BoundReport
from .certs import verify_alpha_star_certificate, verify_compound_certificate
from .errors import ComputationError, ValidationError
from .nonsignaling import ns_compound_alpha
from .params import graph_params, verify_orthogonal_representation
from .theta import lovasz_theta, write_matrix

EXIT_OK, EXIT_INVALID, EXIT_COMPUTATION = 0, 2, 3

GRAPH_KINDS = ("complete", "empty", "cycle", "omega", "gamma")
DERIVED_KINDS = ("strong-power", "union-power", "cartesian", "complement", "strong-product")


class _Parser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting, so batch mode can continue."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _tolerance(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zeroerror", description="Zero-error capacity toolkit for graphs and channels.")
    parser.add_argument("--batch", metavar="FILE", help="run one command per line of FILE, sequentially")
    sub = parser.add_subparsers(dest="verb", parser_class=_Parser)

    def verb(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="emit machine-readable JSON")
        p.add_argument("-o", "--output", metavar="FILE", help="write the result to FILE instead of stdout")
        return p

    p = verb("construct", "build a graph and write it in DIMACS form")
    p.add_argument("kind", choices=GRAPH_KINDS + DERIVED_KINDS)
    p.add_argument("size", type=_positive, nargs="?", help="t, k or the power/copy count")
    p.add_argument("--graph", help="input graph for derived constructions")
    p.add_argument("--other", help="second graph for strong-product")

    p = verb("params", "exact alpha, chi, edge clique cover numbers")
    p.add_argument("graph")
    p.add_argument("--budget", type=_positive, default=10 ** 8, help="search node budget")

    p = verb("theta", "Lovász theta number")
    p.add_argument("graph")
    p.add_argument("--tol", type=_tolerance, default=1e-7)
    p.add_argument("--complement", action="store_true", help="compute theta of the complement")
    p.add_argument("--matrix-out", metavar="FILE", help="write the optimal primal matrix")

    p = verb("ns-alpha", "non-signaling compound independence number by exact LP")
    p.add_argument("graph")
    p.add_argument("--ell", type=_positive, required=True, help="number of receivers")
    p.add_argument("--m-cap", type=_positive, help="largest message count to try")
    p.add_argument("--witness", metavar="FILE", help="write the witness table for the best m as JSON")

    p = verb("confusability", "confusability graph of a channel file")
    p.add_argument("channel")

    p = verb("tele-bound", "teleportation lower bound")
    p.add_argument("--vertices", type=_positive, required=True)
    p.add_argument("--alpha", type=_positive, required=True, help="lower bound on alpha")
    p.add_argument("--xi", type=_positive, required=True, help="upper bound on the orthogonal rank")
    p.add_argument("--ell", type=_positive, required=True)

    p = verb("gamma-report", "entangled versus classical compound capacity on Gamma_k")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--ell", type=_positive, required=True)

    p = verb("monogamy", "receiver count from which the compound value collapses to alpha")
    p.add_argument("graph")

    p = verb("multisender-report", "multi-sender separation certificate for Omega_k")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--uses", type=_positive, default=1, help="number of channel uses n")

    p = verb("verify-orth", "check an orthogonal representation")
    p.add_argument("graph")
    p.add_argument("vectors")
    p.add_argument("--tol", type=_tolerance, default=1e-9)

    p = verb("verify-cert", "check an entanglement-assisted operator certificate")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.add_argument("--tol", type=_tolerance, default=1e-9)

    p = verb("sandwich", "capacity interval report")
    p.add_argument("graph")
    p.add_argument("--ell", type=_positive, default=1, help="number of senders for the shifted intervals")
    return parser


# ------------------------------------------------------------------ verbs

def _load_graph(path: str) -> graphs.Graph:
    if not Path(path).is_file():
        raise ValidationError(f"graph file {path!r} not found")
    return io.parse_graph(Path(path))


def _construct(args) -> graphs.Graph:
    kind, size = args.kind, args.size
    if kind in GRAPH_KINDS:
        if size is None:
            raise ValidationError(f"construct {kind} needs a size")
        if kind == "omega":
            return graphs.orthogonality_graph(size)
        if kind == "gamma":
            return graphs.quarter_orthogonality_graph(size)
        return graphs.basic_graph(kind, size)
    if args.graph is None:
        raise ValidationError(f"construct {kind} needs --graph")
    g = _load_graph(args.graph)
    if kind == "complement":
        return graphs.complement(g)
    if kind == "strong-product":
        if args.other is None:
            raise ValidationError("construct strong-product needs --other")
        return graphs.strong_product(g, _load_graph(args.other))
    if size is None:
        raise ValidationError(f"construct {kind} needs a size")
    if kind == "strong-power":
        return graphs.strong_power(g, size)
    if kind == "union-power":
        return graphs.disjoint_union_power(g, size)
    return graphs.cartesian_with_complete(g, size)


def _run_construct(args) -> str:
    g = _construct(args)
    return io.dumps(io.graph_to_json(g)) if args.json else io.format_graph(g)


def _run_confusability(args) -> str:
    if not Path(args.channel).is_file():
        raise ValidationError(f"channel file {args.channel!r} not found")
    g = graphs.confusability_graph(io.parse_channel(Path(args.channel)))
    return io.dumps(io.graph_to_json(g)) if args.json else io.format_graph(g)


def _report_params(args) -> BoundReport:
    g = _load_graph(args.graph)
    r = graph_params(g, budget=args.budget)
    values = {
        "alpha": r.alpha,
        "independent_set": list(r.independent_set),
        "chi": r.chi,
        "coloring": list(r.coloring),
        "theta_e": r.theta_e,
        "theta_e_prime": r.theta_e_prime,
        "cover": [list(p) for p in r.cover.parts],
    }
    return BoundReport("params", {"graph": args.graph, "vertices": g.n, "edges": g.num_edges}, values,
                       None, "all values proven optimal by exhaustive search")


def _report_theta(args) -> BoundReport:
    g = _load_graph(args.graph)
    res = lovasz_theta(g, tol=args.tol, complement_first=args.complement)
    if args.matrix_out:
        write_matrix(args.matrix_out, res.primal_matrix)
    values = {"theta": res.value, "dual_value": res.dual_value, "duality_gap": res.duality_gap,
              "iterations": res.iterations}
    target = "complement of the graph" if args.complement else "graph"
    return BoundReport("theta", {"graph": args.graph, "vertices": g.n, "tol": args.tol}, values, None,
                       f"Lovász theta of the {target} by primal-dual interior point", exact=False)


def _report_ns_alpha(args) -> BoundReport:
    g = _load_graph(args.graph)
    res = ns_compound_alpha(g, args.ell, m_cap=args.m_cap)
    rows = [{"m": m + 1, "feasible": r.feasible, "variables": r.n_vars, "constraints": r.n_rows}
            for m, r in enumerate(res.results)]
    if args.witness:
        best = next((r for r in reversed(res.results) if r.feasible), None)
        if best is None:
            raise ValidationError("no feasible message count, so there is no witness to write")
        Path(args.witness).write_text(io.dumps(io.ns_to_json(best.witness)))
    values = {"value": res.value, "capped": res.capped, "cover": [list(p) for p in res.cover.parts],
              "searched": rows}
    explanation = (f"every m up to the cap {res.value} is feasible" if res.capped
                   else f"m = {res.value} is feasible and m = {res.value + 1} is infeasible (exact LP)")
    return BoundReport("ns-alpha", {"graph": args.graph, "ell": args.ell}, values, None, explanation)


def _report_verify_orth(args) -> BoundReport:
    g = _load_graph(args.graph)
    if not Path(args.vectors).is_file():
        raise ValidationError(f"vector file {args.vectors!r} not found")
    vecs = io.parse_vectors(Path(args.vectors))
    verdict = verify_orthogonal_representation(g, vecs, tol=args.tol)
    values = {"dimension": int(vecs.shape[1])}
    if verdict:
        values["xi_upper"] = int(vecs.shape[1])
    return BoundReport("verify-orth", {"graph": args.graph, "vectors": args.vectors, "tol": args.tol}, values,
                       verdict.accepted, verdict.reason or "orthogonal representation accepted", exact=False)


def _report_verify_cert(args) -> BoundReport:
    g = _load_graph(args.graph)
    if not Path(args.certificate).is_file():
        raise ValidationError(f"certificate file {args.certificate!r} not found")
    cert = io.load_certificate(args.certificate)
    if cert.parts == 1:
        verdict = verify_alpha_star_certificate(g, cert, tol=args.tol)
    else:
        verdict = verify_compound_certificate(g, cert.parts, cert, tol=args.tol)
    values = {"m": cert.m, "ell": cert.parts, "local_dim": cert.dim}
    values.update({k: (list(v) if isinstance(v, tuple) else v) for k, v in verdict.details.items()})
    return BoundReport("verify-cert", {"graph": args.graph, "certificate": args.certificate, "tol": args.tol},
                       values, verdict.accepted, verdict.reason or f"certificate for m = {cert.m} accepted",
                       exact=False)


_REPORTS: dict[str, Callable] = {
    "params": _report_params,
    "theta": _report_theta,
    "ns-alpha": _report_ns_alpha,
    "tele-bound": lambda a: bounds.teleport_lower_bound(a.vertices, a.alpha, a.xi, a.ell),
    "gamma-report": lambda a: bounds.gamma_report(a.k, a.ell),
    "monogamy": lambda a: bounds.monogamy_threshold(_load_graph(a.graph)),
    "multisender-report": lambda a: bounds.multisender_separation_report(a.k, a.uses),
    "verify-orth": _report_verify_orth,
    "verify-cert": _report_verify_cert,
    "sandwich": lambda a: bounds.capacity_sandwich(_load_graph(a.graph), a.ell),
}


def _render(args) -> str:
    if args.verb == "construct":
        return _run_construct(args)
    if args.verb == "confusability":
        return _run_confusability(args)
    report = _REPORTS[args.verb](args)
    return io.dumps(report.to_json()) if args.json else report.table() + "\n"


def run(argv: list[str], stdout=None, stderr=None) -> int:
    """Parse and execute one command line; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.batch:
            if args.verb:
                raise ValidationError("--batch cannot be combined with a verb")
            return _run_batch(args.batch, stdout, stderr)
        if not args.verb:
            raise ValidationError("no command given; try --help")
        text = _render(args)
    except ValidationError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except ComputationError as exc:
        stderr.write(f"computation failed: {exc}\n")
        return EXIT_COMPUTATION
    if args.output:
        Path(args.output).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK


def _run_batch(path: str, stdout, stderr) -> int:
    if not Path(path).is_file():
        raise ValidationError(f"batch file {path!r} not found")
    status = EXIT_OK
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        stdout.write(f"# [{lineno}] {line}\n")
        status = max(status, run(shlex.split(line), stdout, stderr))
    return status


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
