"""Command-line front end: simulate, dual, theory, sweep, verify.

Exit codes: 0 success, 1 configuration or input error, 2 failed verification.
Relative output paths are resolved against $PDGRAPH_OUTPUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dual import DisasterBdParams, estimate_c, x_moment_grid, z_run
from .graph import Graph, GraphError, builtin_graph, read_edge_list
from .observables import binomial_moments, degree_stats
from .sim import DEFAULT_MAX_VERTICES, SimParams, iter_replicas
from .theory import DomainError, classify_regime, sweep_row
from .verify import SCALES, SUITES, all_hard_passed, dumps, metadata_record, run_suite

OUTPUT_DIR_ENV = "PDGRAPH_OUTPUT_DIR"

log = logging.getLogger("pdgraph")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def parse_initial_graph(source: str) -> Graph:
    """A builtin name (edge, triangle, pathN, star-K, complete-K, cycle-K) or an edge-list file."""
    try:
        return builtin_graph(source)
    except GraphError:
        pass
    path = Path(source)
    if not path.is_file():
        raise GraphError(f"{source!r} is neither a builtin graph nor a readable file")
    return read_edge_list(path)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _grid(text: str) -> list[float]:
    """'a,b,c' or 'start:stop:num' (inclusive, like numpy.linspace)."""
    if ":" in text:
        try:
            lo, hi, num = text.split(":")
            return [float(v) for v in np.linspace(float(lo), float(hi), int(num))]
        except ValueError:
            raise UsageError(f"expected start:stop:num, got {text!r}") from None
    return _floats(text)


def _open_output(target: str | None):
    if target in (None, "-"):
        return None
    path = Path(target)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _emit(text: str, target: str | None) -> None:
    path = _open_output(target)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        path.write_text(text, encoding="utf-8", newline="\n")


def _header(config: dict) -> str:
    lines = [f"# pdgraph {__version__}", "# config " + json.dumps(config, sort_keys=True)]
    return "\n".join(lines) + "\n"


def _csv_text(header: dict, columns: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(_header(header))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(config: dict, payload: dict) -> str:
    return json.dumps({"metadata": {"version": __version__, "config": config}, **payload},
                      indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"cannot serialize {type(v).__name__}")


# -- subcommands -----------------------------------------------------------------

def cmd_simulate(args) -> int:
    checkpoints = tuple(_floats(args.checkpoints)) if args.checkpoints else (args.t,)
    params = SimParams(p=args.p, delta=args.delta, seed=args.seed, horizon=args.t,
                       checkpoints=checkpoints, max_vertices=args.max_vertices,
                       clique_ks=tuple(_ints(args.cliques)) if args.cliques else ())
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    g0 = parse_initial_graph(args.g0)
    config = {"command": "simulate", "p": args.p, "delta": args.delta, "g0": args.g0, "t": args.t,
              "checkpoints": list(params.checkpoints), "n": args.n, "seed": args.seed,
              "max_vertices": args.max_vertices, "cliques": list(params.clique_ks)}
    if g0.edge_count == 0:
        log.warning("initial graph has no edges; it stays edgeless")
    trajectories = iter_replicas(params, g0, args.n, workers=args.threads)
    if args.format == "csv":
        def rows():
            for tr in trajectories:
                for s in tr.snapshots:
                    for k, c in enumerate(s.histogram):
                        if c:
                            yield tr.replicate, s.t, s.n_vertices, s.n_edges, k, c / s.n_vertices
        text = _csv_text(config, ["replicate", "t", "n_vertices", "n_edges", "k", "F_k"], rows())
    else:
        text = _json_text(config, _summary(trajectories, params))
    _emit(text, args.out)
    return 0


def _summary(trajectories, params: SimParams) -> dict:
    per_t: list[dict[str, list[float]]] = [dict() for _ in params.checkpoints]
    truncated = 0
    count = 0
    k_cells = 0
    stores = []
    for tr in trajectories:
        count += 1
        truncated += tr.truncated
        stores.append(tr)
        for s in tr.snapshots:
            k_cells = max(k_cells, s.histogram.size)
    for tr in stores:
        for j, s in enumerate(tr.snapshots):
            st = degree_stats(s)
            cells = per_t[j]
            vals = {"n_vertices": s.n_vertices, "n_edges": s.n_edges, "F_plus": st.f_plus,
                    "B_1": binomial_moments(st, 1)[0]}
            f = np.zeros(k_cells)
            f[: s.histogram.size] = st.f
            for k in range(k_cells):
                vals[f"F_{k}"] = f[k]
            for k, c in s.cliques.items():
                vals[f"C_{k}"] = c
            for key, v in vals.items():
                cells.setdefault(key, []).append(float(v))
    out = []
    for t, cells in zip(params.checkpoints, per_t):
        row = {"t": t}
        for key, vals in cells.items():
            arr = np.asarray(vals)
            se = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else float("nan")
            row[key] = {"mean": float(arr.mean()), "stderr": se, "n": int(arr.size)}
        out.append(row)
    return {"replicates": count, "truncated": truncated, "checkpoints": out}


def cmd_dual(args) -> int:
    if args.process == "z":
        params = DisasterBdParams(args.b, args.d, args.p)
        z0 = _initial_z(args.z0)
        times = _floats(args.t)
        law = z_run(params, z0, times, args.n, seed=args.seed, z_cap=args.z_cap)
        config = {"command": "dual z", "b": args.b, "d": args.d, "p": args.p, "z0": args.z0,
                  "t": times, "n": args.n, "seed": args.seed, "z_cap": args.z_cap}
        payload = {"times": law.times, "pmf": law.pmf, "stderr": law.stderr, "survival": law.survival,
                   "survival_stderr": law.survival_stderr, "capped": law.capped}
        _emit(_json_text(config, payload), args.out)
        return 0
    if args.process == "pdmp":
        if not 0.0 <= args.x0 <= 1.0:
            raise UsageError("--x0 must lie in [0, 1]")
        times = _floats(args.t)
        ks = _ints(args.k)
        rows = x_moment_grid(args.p, args.delta, args.x0, ks, times, args.n, seed=args.seed)
        config = {"command": "dual pdmp", "p": args.p, "delta": args.delta, "x0": args.x0, "t": times,
                  "k": ks, "n": args.n, "seed": args.seed}
        _emit(_csv_text(config, ["t", "k", "moment_estimate", "stderr"], rows), args.out)
        return 0
    est = estimate_c(args.p, args.delta, T=args.T, n=args.n, seed=args.seed)
    config = {"command": "dual c", "p": args.p, "delta": args.delta, "T": args.T, "n": args.n,
              "seed": args.seed, "b1_0": args.b1_0}
    payload = {"c": est.c, "b1_0_times_c": est.scaled(args.b1_0), "integral": est.integral,
               "tail_contribution": est.tail_contribution, "truncation": est.truncation}
    _emit(_json_text(config, payload), args.out)
    return 0


def _initial_z(text: str):
    """An integer size, or a comma-separated probability vector over 0, 1, 2, ..."""
    if "," in text:
        return np.asarray(_floats(text))
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--z0 must be an integer or a probability vector, got {text!r}") from None


def cmd_theory(args) -> int:
    report = classify_regime(args.p, args.delta)
    row = sweep_row(args.p, args.delta, args.k_max)
    payload = {"report": report.to_dict(),
               "beta": {k: row[f"beta_{k}"] for k in range(1, args.k_max + 1)},
               "clique_rate": {k: row[f"clique_rate_{k}"] for k in range(2, args.k_max + 1)}}
    config = {"command": "theory", "p": args.p, "delta": args.delta, "k_max": args.k_max}
    _emit(_json_text(config, payload), args.out)
    return 0


def cmd_sweep(args) -> int:
    ps = _grid(args.p_grid)
    deltas = _grid(args.delta_grid)
    for p in ps:
        if not 0.0 < p < 1.0:
            raise DomainError(f"p grid values must lie in (0, 1), got {p}")
    for d in deltas:
        if d < 0:
            raise DomainError(f"delta grid values must be nonnegative, got {d}")
    rows = [sweep_row(p, d, args.k_max) for p in ps for d in deltas]
    columns = list(rows[0]) if rows else ["p", "delta"]
    config = {"command": "sweep", "p_grid": args.p_grid, "delta_grid": args.delta_grid,
              "k_max": args.k_max}
    text = _csv_text(config, columns,
                     ([("" if r[c] is None else r[c]) for c in columns] for r in rows))
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    path = _open_output(args.out)
    sink_file = path.open("w", encoding="utf-8", newline="\n") if path else sys.stdout
    try:
        sink_file.write(dumps(metadata_record(suite=args.suite, seed=args.seed, scale=args.scale,
                                              threads=args.threads)) + "\n")

        def sink(res):
            sink_file.write(dumps(res.to_dict() | {"type": "check"}) + "\n")
            sink_file.flush()
            mark = "PASS" if res.passed else ("FAIL" if res.hard else "SOFT-FAIL")
            print(f"{mark} {res.name} z={res.z_score:.3g}", file=sys.stderr)

        results = run_suite(args.suite, seed=args.seed, scale=args.scale, workers=args.threads, sink=sink)
    finally:
        if path:
            sink_file.close()
    return 0 if all_hard_passed(results) else 2


# -- argument parsing ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pdgraph", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"pdgraph {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="simulate graph trajectories")
    sim.add_argument("--p", type=float, required=True)
    sim.add_argument("--delta", type=float, required=True)
    sim.add_argument("--g0", default="edge", help="builtin name or edge-list file")
    sim.add_argument("--t", type=float, required=True, help="horizon")
    sim.add_argument("--checkpoints", help="comma-separated snapshot times (default: the horizon)")
    sim.add_argument("--n", type=int, default=1)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    sim.add_argument("--cliques", help="comma-separated clique sizes to count at checkpoints")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--out", help="output file (default stdout)")
    sim.add_argument("--threads", type=int, default=1)
    sim.set_defaults(func=cmd_simulate)

    dual = sub.add_parser("dual", help="simulate the dual processes")
    dsub = dual.add_subparsers(dest="process", required=True, parser_class=_Parser)
    z = dsub.add_parser("z", help="birth-death process with binomial disasters")
    z.add_argument("--b", type=float, required=True)
    z.add_argument("--d", type=float, required=True)
    z.add_argument("--p", type=float, required=True)
    z.add_argument("--z0", default="1", help="initial size or probability vector")
    z.add_argument("--t", required=True, help="comma-separated observation times")
    z.add_argument("--n", type=int, default=10_000)
    z.add_argument("--z-cap", type=int, default=None)
    pd = dsub.add_parser("pdmp", help="moments of the piecewise-deterministic process")
    pd.add_argument("--p", type=float, required=True)
    pd.add_argument("--delta", type=float, required=True)
    pd.add_argument("--x0", type=float, default=1.0)
    pd.add_argument("--t", required=True, help="comma-separated times")
    pd.add_argument("--k", default="1", help="comma-separated moment orders")
    pd.add_argument("--n", type=int, default=10_000)
    c = dsub.add_parser("c", help="prefactor constant of the fast-isolation regime")
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--delta", type=float, required=True)
    c.add_argument("--T", type=float, default=30.0)
    c.add_argument("--n", type=int, default=10_000)
    c.add_argument("--b1-0", type=float, default=1.0, help="B_1(0) for the scaled constant")
    for p in (z, pd, c):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out")
    dual.set_defaults(func=cmd_dual)

    th = sub.add_parser("theory", help="regime classification and exponents as JSON")
    th.add_argument("--p", type=float, required=True)
    th.add_argument("--delta", type=float, required=True)
    th.add_argument("--k-max", type=int, default=4)
    th.add_argument("--out")
    th.set_defaults(func=cmd_theory)

    sw = sub.add_parser("sweep", help="phase-diagram grid as CSV")
    sw.add_argument("--p-grid", required=True, help="'a,b,c' or 'start:stop:num'")
    sw.add_argument("--delta-grid", required=True)
    sw.add_argument("--k-max", type=int, default=4)
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    ver = sub.add_parser("verify", help="run Monte Carlo verification suites")
    ver.add_argument("--suite", choices=SUITES + ("all",), default="all")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--scale", choices=tuple(SCALES), default="default")
    ver.add_argument("--threads", type=int, default=1)
    ver.add_argument("--out", help="JSON-lines file (default stdout)")
    ver.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if getattr(args, "k_max", 1) < 1 or getattr(args, "threads", 1) < 1:
            raise UsageError("--k-max and --threads must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        # GraphError, DomainError and ConfigurationError are ValueErrors
        print(f"pdgraph: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
