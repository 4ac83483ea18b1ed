"""Correlation experiments between GoT and the classical centralities.

An experiment is a grid of cells ``(model, size, repetition)``. Each cell
builds a graph, computes the four classical measures and GoT Φ̄, and
correlates Φ̄ against each classical measure. Coefficients are averaged
over repetitions, giving one aggregate result per ``(model, size)``.

Per-cell seeds come from ``numpy.random.SeedSequence([seed, model_index,
size_index, repetition])``; its first two 64-bit words seed the graph
generator and the GoT run. For ``file`` inputs the size index is the
position of the file in ``files``.
"""

from __future__ import annotations

import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from . import centrality
from .generators import GenSpec
from .got import GotConfig, run_got, thief_steps
from .graph import Graph
from .graph_io import load_graph, write_centrality_csv
from .stats import (
    COEFFICIENT_NAMES,
    Coefficients,
    CorrelationReport,
    format_coefficient,
    mean_coefficients,
)

log = logging.getLogger(__name__)

ALL_MODELS = ("er", "nws", "ba_tf", "file")
DEFAULT_SIZES = (1000, 2000, 5000, 10000, 15000)
DEFAULT_PARAMS = {
    "er": {"p": 0.01},
    "nws": {"k": 6, "p": 0.6},
    "ba_tf": {"e": 5, "p": 0.3},
}
KENDALL_DEFAULT = "tau_b"
CORRELATION_HEADER = "network,size,model,measure,pearson,spearman,kendall_b,kendall_a"


@dataclass
class ExperimentSpec:
    models: tuple[str, ...] = ("er", "nws", "ba_tf")
    sizes: tuple[int, ...] = DEFAULT_SIZES
    model_params: dict[str, dict[str, float]] = field(
        default_factory=lambda: {m: dict(p) for m, p in DEFAULT_PARAMS.items()}
    )
    repetitions: int = 5
    got: GotConfig = GotConfig()
    seed: int = 0
    out_dir: Path = Path("results")
    files: tuple[Path, ...] = ()
    weighted_mode: str = "use_weights"
    workers: int = 1

    def __post_init__(self):
        bad = set(self.models) - set(ALL_MODELS)
        if bad:
            raise ValueError(f"unknown models {sorted(bad)}")
        if list(self.sizes) != sorted(self.sizes) or any(s < 1 for s in self.sizes):
            raise ValueError("sizes must be ascending positive vertex counts")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")
        if self.weighted_mode not in ("use_weights", "binarize"):
            raise ValueError("weighted_mode must be use_weights or binarize")
        if "file" in self.models and not self.files:
            raise ValueError("model 'file' needs at least one entry in files")
        self.out_dir = Path(self.out_dir)
        self.files = tuple(Path(f) for f in self.files)

    @classmethod
    def from_config(cls, text: str, base_dir: Path | None = None) -> ExperimentSpec:
        """Parse flat ``key = value`` lines; ``#`` starts a comment.

        Keys: models, sizes, repetitions, seed, out_dir, files, weighted_mode,
        workers, er.p, nws.k, nws.p, ba_tf.e, ba_tf.p, got.thieves,
        got.vdiamonds, got.epochs. List values are comma separated.
        """
        kv: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            kv[key] = value

        def items(v: str) -> list[str]:
            return [x.strip() for x in v.split(",") if x.strip()]

        params = {m: dict(p) for m, p in DEFAULT_PARAMS.items()}
        got_kwargs: dict[str, int] = {}
        kwargs: dict[str, object] = {}
        got_keys = {"got.thieves": "thieves_per_vertex", "got.vdiamonds": "initial_vdiamonds",
                    "got.epochs": "epochs"}
        for key, value in kv.items():
            if key == "models":
                kwargs["models"] = tuple(items(value))
            elif key == "sizes":
                kwargs["sizes"] = tuple(int(x) for x in items(value))
            elif key in ("repetitions", "seed", "workers"):
                kwargs[key] = int(value)
            elif key == "out_dir":
                kwargs["out_dir"] = Path(value)
            elif key == "files":
                paths = [Path(x) for x in items(value)]
                if base_dir is not None:
                    paths = [p if p.is_absolute() else base_dir / p for p in paths]
                kwargs["files"] = tuple(paths)
            elif key == "weighted_mode":
                kwargs["weighted_mode"] = value
            elif key in got_keys:
                got_kwargs[got_keys[key]] = int(value)
            elif "." in key and key.split(".", 1)[0] in params:
                model, name = key.split(".", 1)
                if name not in params[model]:
                    raise ValueError(f"unknown parameter {key!r}")
                params[model][name] = int(value) if name in ("k", "e") else float(value)
            else:
                raise ValueError(f"unknown config key {key!r}")
        seed = int(kwargs.get("seed", 0))
        return cls(model_params=params, got=GotConfig(seed=seed, **got_kwargs), **kwargs)

    @classmethod
    def from_config_file(cls, path: str | Path) -> ExperimentSpec:
        path = Path(path)
        return cls.from_config(path.read_text(), base_dir=path.parent)


@dataclass(frozen=True)
class Cell:
    model: str
    model_index: int
    size: int
    size_index: int
    repetition: int
    path: Path | None = None

    @property
    def network_id(self) -> str:
        if self.path is not None:
            return self.path.stem
        return f"{self.model}_{self.size}"


def cell_seeds(master: int, model_index: int, size_index: int, repetition: int) -> tuple[int, int]:
    words = np.random.SeedSequence([master, model_index, size_index, repetition]).generate_state(
        2, dtype=np.uint64
    )
    return int(words[0]), int(words[1])


def plan_cells(spec: ExperimentSpec) -> list[Cell]:
    cells = []
    for mi, model in enumerate(spec.models):
        model_index = ALL_MODELS.index(model)
        if model == "file":
            for fi, path in enumerate(spec.files):
                for rep in range(spec.repetitions):
                    cells.append(Cell(model, model_index, 0, fi, rep, path))
            continue
        for si, size in enumerate(spec.sizes):
            for rep in range(spec.repetitions):
                cells.append(Cell(model, model_index, size, si, rep))
    return cells


def build_graph(spec: ExperimentSpec, cell: Cell, graph_seed: int) -> Graph:
    if cell.path is not None:
        return load_graph(cell.path)
    params = spec.model_params[cell.model]
    return GenSpec(cell.model, cell.size, seed=graph_seed, **params).build()


@dataclass
class CellResult:
    cell: Cell
    size: int
    coefficients: dict[str, Coefficients] | None
    timings: dict[str, float]
    centrality_csv: str = ""
    error: str | None = None


def run_cell(spec: ExperimentSpec, cell: Cell) -> CellResult:
    timings: dict[str, float] = {}
    try:
        graph_seed, got_seed = cell_seeds(spec.seed, cell.model_index, cell.size_index,
                                          cell.repetition)
        t0 = time.perf_counter()
        g = build_graph(spec, cell, graph_seed)
        timings["build"] = time.perf_counter() - t0
        plain = g.binarized() if g.is_weighted else g

        columns: list[tuple[str, np.ndarray]] = []
        for measure in centrality.MEASURES:
            t0 = time.perf_counter()
            columns.append((measure, centrality.compute(plain, measure).scores))
            timings[measure] = time.perf_counter() - t0

        got_graph = plain if spec.weighted_mode == "binarize" else g
        t0 = time.perf_counter()
        phi_bar, _ = run_got(got_graph, replace(spec.got, seed=got_seed))
        timings["got"] = time.perf_counter() - t0
        columns.append(("got_vertex", phi_bar.scores))

        coefs = {m: Coefficients.compute(phi_bar.scores, s) for m, s in columns[:-1]}
        buf = io.StringIO()
        write_centrality_csv(g, columns, buf)
        return CellResult(cell, g.vertex_count, coefs, timings, buf.getvalue())
    except Exception as exc:  # one broken cell must not sink the grid
        log.exception("cell %s rep %d failed", cell.network_id, cell.repetition)
        return CellResult(cell, cell.size, None, timings, error=f"{type(exc).__name__}: {exc}")


def _run_cell_job(args):
    return run_cell(*args)


def run_experiment(spec: ExperimentSpec, write: bool = True) -> list[CorrelationReport]:
    """Run every cell, average over repetitions and (optionally) write outputs under ``out_dir``.

    Outputs: ``centrality/<network>_r<rep>.csv``, ``correlations.csv`` (one
    row per network and measure), ``correlations_wide.csv`` (one row per
    network), ``timings.csv`` and ``run_info.json``.
    """
    cells = plan_cells(spec)
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_cell_job, [(spec, c) for c in cells]))
    else:
        results = [run_cell(spec, c) for c in cells]

    groups: dict[tuple[str, str], list[CellResult]] = {}
    for r in results:
        groups.setdefault((r.cell.model, r.cell.network_id), []).append(r)

    reports = []
    for (model, network_id), group in groups.items():
        ok = [r for r in group if r.coefficients is not None]
        if not ok:
            log.error("no successful repetition for %s; row skipped", network_id)
            continue
        report = CorrelationReport(network_id, ok[0].size, model)
        for measure in centrality.MEASURES:
            report.pairs[("got_vertex", measure)] = mean_coefficients(
                [r.coefficients[measure] for r in ok]
            )
        reports.append(report)

    if write:
        _write_outputs(spec, results, reports)
    return reports


def write_correlations(reports: Sequence[CorrelationReport], sink: IO[str]) -> None:
    sink.write(CORRELATION_HEADER + "\n")
    for rep in reports:
        for (_, measure), c in rep.pairs.items():
            cells = [rep.network_id, str(rep.size), rep.model, measure]
            cells += [format_coefficient(v) for v in c.as_tuple()]
            sink.write(",".join(cells) + "\n")


def write_correlations_wide(reports: Sequence[CorrelationReport], sink: IO[str]) -> None:
    header = ["network", "size", "model"] + [
        f"{m}_{c}" for m in centrality.MEASURES for c in COEFFICIENT_NAMES
    ]
    sink.write(",".join(header) + "\n")
    for rep in reports:
        cells = [rep.network_id, str(rep.size), rep.model]
        for measure in centrality.MEASURES:
            cells += [format_coefficient(v) for v in rep.pairs[("got_vertex", measure)].as_tuple()]
        sink.write(",".join(cells) + "\n")


def _write_outputs(spec: ExperimentSpec, results: list[CellResult],
                   reports: list[CorrelationReport]) -> None:
    out = spec.out_dir
    (out / "centrality").mkdir(parents=True, exist_ok=True)
    for r in results:
        if r.coefficients is not None:
            name = f"{r.cell.network_id}_r{r.cell.repetition}.csv"
            (out / "centrality" / name).write_text(r.centrality_csv)
    with open(out / "correlations.csv", "w", newline="\n") as fh:
        write_correlations(reports, fh)
    with open(out / "correlations_wide.csv", "w", newline="\n") as fh:
        write_correlations_wide(reports, fh)
    # wall-clock numbers: the only output that differs between identical runs
    with open(out / "timings.csv", "w", newline="\n") as fh:
        fh.write("network,repetition,phase,seconds\n")
        for r in results:
            for phase, sec in r.timings.items():
                fh.write(f"{r.cell.network_id},{r.cell.repetition},{phase},{sec:.6f}\n")
    info = {
        "kendall_default": KENDALL_DEFAULT,
        "models": list(spec.models),
        "sizes": list(spec.sizes),
        "model_params": spec.model_params,
        "repetitions": spec.repetitions,
        "seed": spec.seed,
        "got": asdict(spec.got),
        "weighted_mode": spec.weighted_mode,
        "files": [str(f) for f in spec.files],
        "failed_cells": [
            {"network": r.cell.network_id, "repetition": r.cell.repetition, "error": r.error}
            for r in results if r.error
        ],
    }
    (out / "run_info.json").write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")


@dataclass(frozen=True)
class BenchRow:
    measure: str
    seconds: float
    thief_steps: int | None = None


def _warm_up() -> None:
    tiny = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    for measure in centrality.MEASURES:
        centrality.compute(tiny, measure)
    run_got(tiny, GotConfig(epochs=2))


def bench_measures(g: Graph, got_cfg: GotConfig = GotConfig()) -> list[BenchRow]:
    """Wall-clock each measure on ``g`` (JIT compilation excluded)."""
    _warm_up()
    plain = g.binarized() if g.is_weighted else g
    plain.csr()
    g.csr()
    rows = []
    for measure in centrality.MEASURES:
        t0 = time.perf_counter()
        centrality.compute(plain, measure)
        rows.append(BenchRow(measure, time.perf_counter() - t0))
    t0 = time.perf_counter()
    run_got(g, got_cfg)
    rows.append(BenchRow("got", time.perf_counter() - t0, thief_steps(g, got_cfg)))
    return rows


def write_bench_csv(rows: Sequence[BenchRow], sink: IO[str]) -> None:
    sink.write("measure,seconds,thief_steps\n")
    for r in rows:
        steps = "" if r.thief_steps is None else str(r.thief_steps)
        sink.write(f"{r.measure},{r.seconds:.6f},{steps}\n")
