"""Command-line interface: ``topocorr <command> ...``.

Every command writes one JSON document ``{inputs, parameters, results,
timings}`` to stdout or ``--output``.  Key order is fixed and floats use the
shortest round-trip representation, so identical invocations produce
identical bytes (``timings`` stays empty unless ``--timings`` is given).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from .bottleneck import bottleneck_distance
from .bundle import Bundle, emit_bundle, emit_off_with_fields, parse_bundle, parse_off_with_fields
from .core import betti_at, lower_star_filtration
from .correlation import DEFAULT_DEGENERACY_TOL, collection_reports, mean_correlation, topological_correlation
from .matching import GridSpec, matching_search, _resolve_threads
from .persistence import compute_persistence
from .shapes import mesh_from_spec


class CLIError(Exception):
    pass


def _jsonable(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            raise CLIError("computation produced NaN")
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _pair(text: str, what: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise CLIError(f"{what} expects two comma-separated names, got {text!r}")
    return parts[0], parts[1]


def _load_source(args) -> tuple[Bundle, dict]:
    chosen = [name for name in ("input", "off", "shape") if getattr(args, name, None)]
    if len(chosen) != 1:
        raise CLIError("give exactly one of --input, --off/--table or --shape")
    if args.input:
        return parse_bundle(_read(args.input)), {"bundle": args.input}
    if args.off:
        if not args.table:
            raise CLIError("--off needs --table")
        return parse_off_with_fields(_read(args.off), _read(args.table)), {"off": args.off, "table": args.table}
    return Bundle.from_mesh(mesh_from_spec(args.shape)), {"shape": args.shape}


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from exc


def _grid(args) -> GridSpec:
    return GridSpec(args.grid_theta, args.grid_beta, args.beta_bound, args.refine, args.refine_shrink)


def _grid_parameters(args, threads: int) -> dict:
    return {"degree": args.degree, "grid": _grid(args).to_dict(), "tol": args.tol, "threads": threads}


def cmd_persist(args):
    bundle, inputs = _load_source(args)
    f = bundle.field(args.field)
    D = compute_persistence(lower_star_filtration(bundle.complex, f), args.degree)
    if args.figure:
        from .plotting import plot_diagram

        plot_diagram(D, args.figure, f"degree {args.degree} diagram of {args.field}")
    return {**inputs, "field": args.field}, {"degree": args.degree}, {"diagram": D.to_dict()}


def cmd_bottleneck(args):
    bundle, inputs = _load_source(args)
    K = bundle.complex
    Da = compute_persistence(lower_star_filtration(K, bundle.field(args.field_a)), args.degree)
    Db = compute_persistence(lower_star_filtration(K, bundle.field(args.field_b)), args.degree)
    if args.figure:
        from .plotting import plot_diagram_pair

        plot_diagram_pair(Da, Db, args.figure, (args.field_a, args.field_b))
    results = {"distance": bottleneck_distance(Da, Db), "diagram_a": Da.to_dict(), "diagram_b": Db.to_dict()}
    return {**inputs, "field_a": args.field_a, "field_b": args.field_b}, {"degree": args.degree}, results


def _two_bifunctions(args):
    bundle, inputs = _load_source(args)
    names1, names2 = _pair(args.phi1, "--phi1"), _pair(args.phi2, "--phi2")
    return bundle, {**inputs, "phi1": list(names1), "phi2": list(names2)}, \
        bundle.bifunction(*names1), bundle.bifunction(*names2)


def cmd_match(args):
    bundle, inputs, phi1, phi2 = _two_bifunctions(args)
    threads = _resolve_threads(args.threads)
    result = matching_search(phi1, phi2, bundle.complex, _grid(args), args.degree, threads)
    if args.figure:
        from .plotting import plot_landscape

        plot_landscape(result, args.figure)
    return inputs, _grid_parameters(args, threads), result.to_dict()


def cmd_topodiff(args):
    bundle, inputs, phi1, phi2 = _two_bifunctions(args)
    threads = _resolve_threads(args.threads)
    result = matching_search(phi1, phi2, bundle.complex, _grid(args), args.degree, threads)
    if args.figure:
        from .plotting import plot_landscape

        plot_landscape(result, args.figure, f"topological difference {result.value - result.component_distance:.6g}")
    doc = {"topological_difference": result.value - result.component_distance, **result.to_dict()}
    return inputs, _grid_parameters(args, threads), doc


def cmd_topocorr(args):
    bundle, inputs = _load_source(args)
    names = _pair(args.fields, "--fields")
    threads = _resolve_threads(args.threads)
    report = topological_correlation(bundle.bifunction(*names), bundle.complex, _grid(args),
                                     args.degree, args.tol, threads)
    if args.figure:
        from .plotting import plot_correlation

        plot_correlation(report, args.figure)
    return {**inputs, "fields": list(names)}, _grid_parameters(args, threads), report.to_dict()


def cmd_corr(args):
    names = _pair(args.fields, "--fields")
    sources = []
    for spec in (args.shapes.split(",") if args.shapes else []):
        sources.append((spec, Bundle.from_mesh(mesh_from_spec(spec))))
    for path in args.input or []:
        sources.append((path, parse_bundle(_read(path))))
    if not sources:
        raise CLIError("corr needs --shapes and/or --input")
    threads = _resolve_threads(args.threads)
    pairs = [(b.complex, b.bifunction(*names)) for _, b in sources]
    reports = collection_reports(pairs, _grid(args), args.degree, args.tol, threads)
    correlation = mean_correlation([r.correlation for r in reports])
    if args.figure:
        from .plotting import plot_collection

        plot_collection([label for label, _ in sources], reports, args.figure,
                        f"collection correlation {correlation:.6g}")
    results = {
        "correlation": correlation,
        "spaces": [{"source": label, **r.to_dict()} for (label, _), r in zip(sources, reports)],
    }
    inputs = {"sources": [label for label, _ in sources], "fields": list(names)}
    return inputs, _grid_parameters(args, threads), results


def cmd_betti(args):
    bundle, inputs = _load_source(args)
    names = _pair(args.fields, "--fields")
    try:
        u, v = (float(t) for t in args.at.split(","))
    except ValueError:
        raise CLIError(f"--at expects 'u,v', got {args.at!r}") from None
    rank = betti_at(bundle.complex, bundle.bifunction(*names), u, v, args.degree)
    return {**inputs, "fields": list(names)}, {"degree": args.degree, "at": [u, v]}, {"betti": rank}


def cmd_shapes(args):
    mesh = mesh_from_spec(args.spec)
    bundle = Bundle.from_mesh(mesh)
    K = mesh.complex
    if args.off_out:
        off_text, table_text = emit_off_with_fields(bundle)
        Path(args.off_out).write_text(off_text)
        Path(args.table_out or Path(args.off_out).with_suffix(".csv")).write_text(table_text)
    summary = {
        "vertices": K.vertex_count,
        "edges": K.count(1),
        "triangles": K.count(2),
        "euler_characteristic": K.euler_characteristic,
    }
    return {"shape": args.spec}, {}, summary, emit_bundle(bundle)


COMMANDS = {
    "persist": cmd_persist,
    "bottleneck": cmd_bottleneck,
    "match": cmd_match,
    "topodiff": cmd_topodiff,
    "topocorr": cmd_topocorr,
    "corr": cmd_corr,
    "betti": cmd_betti,
    "shapes": cmd_shapes,
}


def _add_source(p, multiple: bool = False):
    if multiple:
        p.add_argument("--input", action="append", help="bundle document(s)")
    else:
        p.add_argument("--input", help="bundle document")
        p.add_argument("--off", help="OFF mesh (needs --table)")
        p.add_argument("--table", help="per-vertex field table for --off")
        p.add_argument("--shape", help="generated shape, e.g. circle:64, sphere:3, torus:32x32")


def _add_common(p):
    p.add_argument("--degree", type=int, default=0, help="homology degree (default 0)")
    p.add_argument("--output", help="write the result document here instead of stdout")
    p.add_argument("--timings", action="store_true", help="record wall-clock timings")


def _add_grid(p):
    p.add_argument("--grid-theta", type=int, default=32)
    p.add_argument("--grid-beta", type=int, default=32)
    p.add_argument("--beta-bound", type=float, default=1.0)
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--refine-shrink", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=DEFAULT_DEGENERACY_TOL)
    p.add_argument("--threads", type=int, default=0, help="worker processes (0 = one per CPU)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topocorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("persist", help="persistence diagram of one field")
    _add_source(p)
    _add_common(p)
    p.add_argument("--field", required=True)
    p.add_argument("--figure", help="save the diagram plot to this path")

    p = sub.add_parser("bottleneck", help="bottleneck distance between two fields")
    _add_source(p)
    _add_common(p)
    p.add_argument("--field-a", required=True)
    p.add_argument("--field-b", required=True)
    p.add_argument("--figure", help="save both diagrams to this path")

    for name, helptext in (("match", "matching distance between two bifunctions"),
                           ("topodiff", "topological difference between two bifunctions")):
        p = sub.add_parser(name, help=helptext)
        _add_source(p)
        _add_common(p)
        _add_grid(p)
        p.add_argument("--phi1", required=True, help="first bifunction as 'f,g'")
        p.add_argument("--phi2", required=True, help="second bifunction as 'f,g'")
        p.add_argument("--figure", help="save the line landscape to this path")

    p = sub.add_parser("topocorr", help="topological correlation of one bifunction")
    _add_source(p)
    _add_common(p)
    _add_grid(p)
    p.add_argument("--fields", required=True, help="bifunction as 'f,g'")
    p.add_argument("--figure", help="save both line landscapes to this path")

    p = sub.add_parser("corr", help="correlation between two field families over several spaces")
    _add_source(p, multiple=True)
    _add_common(p)
    _add_grid(p)
    p.add_argument("--shapes", help="comma-separated shape specs")
    p.add_argument("--fields", required=True, help="field names as 'f,g'")
    p.add_argument("--figure", help="save the per-space bar chart to this path")

    p = sub.add_parser("betti", help="sublevel Betti number at a point of the parameter plane")
    _add_source(p)
    _add_common(p)
    p.add_argument("--fields", required=True, help="bifunction as 'f,g'")
    p.add_argument("--at", required=True, help="threshold 'u,v'")

    p = sub.add_parser("shapes", help="emit a generated mesh as a bundle document")
    p.add_argument("spec", help="circle:N, sphere:K or torus:MxN[:R:r]")
    p.add_argument("--output", help="write the bundle here instead of stdout")
    p.add_argument("--off-out", help="also write the mesh as OFF")
    p.add_argument("--table-out", help="field table path for --off-out")
    p.add_argument("--timings", action="store_true")
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    # "--at -1,-1" would otherwise be read as an option
    out = []
    it = iter(argv)
    for token in it:
        if token == "--at":
            nxt = next(it, None)
            out.append(token if nxt is None else f"--at={nxt}")
        else:
            out.append(token)
    return out


def render(inputs, parameters, results, timings) -> str:
    doc = {"inputs": inputs, "parameters": parameters, "results": results, "timings": timings}
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def run_cli(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        out = COMMANDS[args.command](args)
    except (CLIError, ValueError) as exc:
        print(f"topocorr {args.command}: error: {exc}", file=stderr)
        return 1
    elapsed = time.perf_counter() - start
    timings = {"seconds": elapsed} if args.timings else {}
    if args.command == "shapes":
        inputs, parameters, results, text = out
        if args.output:
            Path(args.output).write_text(text)
            text = render(inputs, parameters, results, timings)
    else:
        inputs, parameters, results = out
        text = render(inputs, parameters, results, timings)
        if args.output:
            Path(args.output).write_text(text)
            return 0
    stdout.write(text)
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
