"""Command line entry point: ``gotcentrality <subcommand> ...``.

Exit codes: 0 success, 1 usage error (bad flags, missing input file),
2 data error (unparseable input, invalid parameters).
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Sequence

from . import centrality
from .generators import GenSpec
from .got import GotConfig, run_got
from .graph import Graph
from .graph_io import (
    ParseError,
    load_graph,
    read_centrality_csv,
    save_edge_list,
    write_centrality_csv,
    write_edge_scores_csv,
)
from .harness import ExperimentSpec, bench_measures, run_experiment, write_bench_csv
from .stats import COEFFICIENT_NAMES, Coefficients, format_coefficient

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"input file not found: {path}")
    return p


def _load(args) -> Graph:
    g = load_graph(_existing(args.input), args.format)
    return g.binarized() if getattr(args, "binarize", False) else g


def cmd_generate(args) -> int:
    params = {"model": args.model, "v": args.v, "p": args.p, "seed": args.seed}
    if args.k is not None:
        params["k"] = args.k
    if args.e is not None:
        params["e"] = args.e
    g = GenSpec(**params).build()
    save_edge_list(g, args.out)
    logging.info("wrote %d vertices, %d edges to %s", g.vertex_count, g.edge_count, args.out)
    return EXIT_OK


def cmd_centrality(args) -> int:
    g = _load(args)
    plain = g.binarized() if g.is_weighted else g
    measures = [m.strip() for m in args.measures.split(",") if m.strip()]
    for m in measures:
        if m not in centrality.MEASURES:
            raise UsageError(f"unknown measure {m!r}; choose from {','.join(centrality.MEASURES)}")
    cols = [(m, centrality.compute(plain, m).scores) for m in measures]
    with _open_out(args.out) as fh:
        write_centrality_csv(g, cols, fh)
    return EXIT_OK


def _got_config(args) -> GotConfig:
    return GotConfig(
        thieves_per_vertex=args.thieves,
        initial_vdiamonds=args.vdiamonds,
        epochs=args.epochs,
        seed=args.seed,
    )


def cmd_got(args) -> int:
    g = _load(args)
    phi_bar, psi_bar = run_got(g, _got_config(args))
    with _open_out(args.out) as fh:
        write_centrality_csv(g, [("got_vertex", phi_bar.scores)], fh)
    if args.edges_out:
        with _open_out(args.edges_out) as fh:
            write_edge_scores_csv(g, psi_bar, fh)
    return EXIT_OK


def _column(path: Path, name: str | None) -> tuple[str, list[str], list[float]]:
    labels, cols = read_centrality_csv(path.read_bytes())
    if not cols:
        raise ParseError(f"{path} has no score column")
    if name is None:
        name = next(iter(cols))
    if name not in cols:
        raise UsageError(f"{path} has no column {name!r}")
    return name, labels, cols[name]


def cmd_correlate(args) -> int:
    name_a, labels_a, a = _column(_existing(args.in_a), args.column_a)
    name_b, labels_b, b = _column(_existing(args.in_b), args.column_b)
    if sorted(labels_a) != sorted(labels_b):
        raise ParseError("the two CSV files do not cover the same vertices")
    pos = {label: i for i, label in enumerate(labels_b)}
    b = [b[pos[label]] for label in labels_a]
    coef = Coefficients.compute(a, b)
    with _open_out(args.out) as fh:
        fh.write(",".join(["measure_a", "measure_b", "n", *COEFFICIENT_NAMES]) + "\n")
        cells = [name_a, name_b, str(len(a)), *(format_coefficient(v) for v in coef.as_tuple())]
        fh.write(",".join(cells) + "\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.from_config_file(_existing(args.config))
    if args.out_dir:
        spec.out_dir = Path(args.out_dir)
    if args.workers:
        spec.workers = args.workers
    for f in spec.files:
        if not f.is_file():
            raise UsageError(f"input file not found: {f}")
    reports = run_experiment(spec)
    logging.info("wrote %d correlation rows to %s", len(reports), spec.out_dir)
    return EXIT_OK


def cmd_bench(args) -> int:
    g = _load(args)
    rows = bench_measures(g, _got_config(args))
    with _open_out(args.out) as fh:
        write_bench_csv(rows, fh)
    return EXIT_OK


def _add_got_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--thieves", type=int, default=1, help="thieves per vertex")
    p.add_argument("--vdiamonds", type=int, default=None, help="initial vdiamonds per vertex (default |V|)")
    p.add_argument("--epochs", type=int, default=None, help="epochs (default floor(ln^3 |V|))")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gotcentrality", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a synthetic network as an edge list")
    p.add_argument("--model", required=True, choices=["er", "nws", "ba_tf"])
    p.add_argument("--v", type=int, required=True, help="vertex count")
    p.add_argument("--p", type=float, required=True, help="edge / shortcut / triad probability")
    p.add_argument("--k", type=int, default=None, help="ring neighbours (nws)")
    p.add_argument("--e", type=int, default=None, help="edges per new vertex (ba_tf)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    def graph_input(p):
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--format", choices=["gml", "edge-list"], default=None)
        p.add_argument("--out", default=None, help="output CSV (default stdout)")

    p = sub.add_parser("centrality", help="classical centrality CSV")
    graph_input(p)
    p.add_argument("--measures", default=",".join(centrality.MEASURES))
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("got", help="Game of Thieves vertex (and edge) scores")
    graph_input(p)
    _add_got_flags(p)
    p.add_argument("--edges-out", default=None, help="write u,v,psi_bar CSV here")
    p.add_argument("--binarize", action="store_true", help="ignore edge weights")
    p.set_defaults(func=cmd_got)

    p = sub.add_parser("correlate", help="correlate two centrality CSV columns")
    p.add_argument("--in-a", required=True)
    p.add_argument("--in-b", required=True)
    p.add_argument("--column-a", default=None)
    p.add_argument("--column-b", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("experiment", help="run a correlation experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("bench", help="time every measure on one network")
    graph_input(p)
    _add_got_flags(p)
    p.add_argument("--binarize", action="store_true", help="ignore edge weights")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValueError, OSError) as exc:
        print(f"gotcentrality: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
