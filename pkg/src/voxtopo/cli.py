"""voxtopo command line.

Exit codes: 0 success, 1 usage error, 2 pipeline failure (aborted repair or
classification error), 3 I/O or file-format error.
"""
from __future__ import annotations

import argparse
import io as _io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .boundary import NonManifoldError, NotWellComposedError, build_boundary_complex, write_off
from .io import FORMATS, VolumeFormatError, encode_dvol, encode_voxlist, infer_format, load_volume, save_volume
from .labeling import label_background, label_components
from .repair import detect_pathologies, repair_volume
from .report import render_report, run_pipeline
from .shapes import ShapeError, generate_shape
from .volume import AdjacencyKind

EXIT_OK, EXIT_USAGE, EXIT_PIPELINE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _budget(text: str):
    if text == "unlimited":
        return "unlimited"
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer or 'unlimited', got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"budget must be >= 0, got {n}")
    return n


def _adjacency(text: str) -> AdjacencyKind:
    table = {"6": AdjacencyKind.FACE6, "face6": AdjacencyKind.FACE6, "26": AdjacencyKind.VERTEX26, "vertex26": AdjacencyKind.VERTEX26}
    try:
        return table[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"adjacency must be 6 or 26, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="voxtopo", description="Connected components, boundary genus and homology ranks of binary voxel volumes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input", help="volume file (voxlist or dvol)")
            sp.add_argument("--format", choices=FORMATS, help="input format (default: from extension)")
        sp.add_argument("-o", "--output", "--out", dest="output", metavar="PATH", help="output file (default: stdout)")

    sp = sub.add_parser("info", help="volume statistics")
    common(sp)
    sp.add_argument("--report", choices=("json", "text"), default="json", help="output mode (default: json)")

    sp = sub.add_parser("components", help="connected-component labeling summary")
    common(sp)
    sp.add_argument("--adjacency", type=_adjacency, default=AdjacencyKind.VERTEX26, help="6 or 26 (default: 26)")
    sp.add_argument("--report", choices=("json", "text"), default="json", help="output mode (default: json)")

    sp = sub.add_parser("repair", help="remove pathological configurations and write the repaired volume")
    common(sp)
    sp.add_argument("--budget", type=_budget, help="max modifications, N or 'unlimited' (default: 10%% of voxels)")
    sp.add_argument("--output-format", choices=FORMATS, help="format of the repaired volume (default: from output extension)")

    sp = sub.add_parser("analyze", help="full pipeline: repair, boundary surfaces, genus, homology")
    common(sp)
    sp.add_argument("--budget", type=_budget, help="max modifications, N or 'unlimited' (default: 10%% of voxels)")
    sp.add_argument("--adjacency", type=_adjacency, default=AdjacencyKind.VERTEX26, help="object connectivity before repair, 6 or 26 (default: 26)")
    sp.add_argument("--report", choices=("json", "text"), default="json", help="report mode (default: json)")

    sp = sub.add_parser("mesh", help="export the boundary surface as an OFF quad mesh")
    common(sp)
    sp.add_argument("--repair", action="store_true", help="repair the volume before meshing")
    sp.add_argument("--budget", type=_budget, help="repair budget when --repair is given (default: 10%% of voxels)")

    sp = sub.add_parser("gen", help="generate a fixture volume")
    common(sp, needs_input=False)
    sp.add_argument("--shape", required=True, help="cuboid:A,B,C | ball:R | ring:A,B[,T] | plate:N[,T] | shell:A,B,C,a,b,c | random:NX,NY,NZ[,DENSITY]")
    sp.add_argument("--format", choices=FORMATS, help="output format (default: from extension, voxlist on stdout)")
    sp.add_argument("--seed", type=int, default=0, help="seed for random shapes (default: 0)")
    return p


def _resolve_budget(value, voxels: int):
    if value == "unlimited":
        return None
    if value is None:
        return math.ceil(0.1 * voxels)
    return value


def _emit(data: bytes, output) -> None:
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _dump(obj, mode: str) -> bytes:
    if mode == "json":
        return (json.dumps(obj, indent=2) + "\n").encode()
    return "".join(f"{k}: {v}\n" for k, v in obj.items()).encode()


def _validate(args) -> None:
    """Flag checks that must pass before any file is touched."""
    inp = getattr(args, "input", None)
    if inp and args.output and Path(args.output).resolve() == Path(inp).resolve():
        raise UsageError("refusing to overwrite the input file")
    try:
        if inp and not args.format:
            infer_format(inp)
        if args.command == "repair" and args.output and not args.output_format:
            infer_format(args.output)
        if args.command == "gen" and args.output and not args.format:
            infer_format(args.output)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args):
    return load_volume(args.input, args.format or infer_format(args.input))


def cmd_info(args) -> int:
    v = _load(args)
    found = detect_pathologies(v)
    kinds = {}
    for inst in found:
        kinds[inst.kind.value] = kinds.get(inst.kind.value, 0) + 1
    info = {
        "path": args.input,
        "format": args.format or infer_format(args.input),
        "voxels": v.count,
        "origin": list(v.origin),
        "dims": list(v.dims),
        "well_composed": not found,
        "pathologies": kinds,
    }
    _emit(_dump(info, args.report), args.output)
    return EXIT_OK


def cmd_components(args) -> int:
    v = _load(args)
    lab = label_components(v, args.adjacency)
    bg = label_background(v)
    info = {
        "adjacency": args.adjacency.value,
        "components": lab.component_count,
        "sizes": lab.component_sizes,
        "background_components": bg.component_count,
        "cavities": len(bg.cavities),
    }
    _emit(_dump(info, args.report), args.output)
    return EXIT_OK


def cmd_repair(args) -> int:
    v = _load(args)
    fixed, rlog = repair_volume(v, _resolve_budget(args.budget, v.count))
    summary = {
        "deletions": [list(c) for c in rlog.deletions],
        "additions": [list(c) for c in rlog.additions],
        "passes": rlog.passes,
        "aborted": rlog.aborted,
        "voxels": fixed.count,
    }
    if args.output:
        fmt = args.output_format or infer_format(args.output)
        save_volume(fixed, args.output, fmt)
        _emit(_dump(summary, "json"), None)
    else:
        _emit(encode_voxlist(fixed), None)
        sys.stderr.write(json.dumps(summary) + "\n")
    if rlog.aborted:
        print(f"voxtopo: repair aborted: {rlog.reason}", file=sys.stderr)
        return EXIT_PIPELINE
    return EXIT_OK


def cmd_analyze(args) -> int:
    v = _load(args)
    fmt = args.format or infer_format(args.input)
    report = run_pipeline(v, _resolve_budget(args.budget, v.count), args.adjacency, path=args.input, format=fmt)
    _emit(render_report(report, args.report), args.output)
    if not report.ok:
        for d in report.diagnostics:
            print(f"voxtopo: {report.status}: {d}", file=sys.stderr)
        return EXIT_PIPELINE
    return EXIT_OK


def cmd_mesh(args) -> int:
    v = _load(args)
    if args.repair:
        v, rlog = repair_volume(v, _resolve_budget(args.budget, v.count))
        if rlog.aborted:
            print(f"voxtopo: repair aborted: {rlog.reason}", file=sys.stderr)
            return EXIT_PIPELINE
    try:
        complex = build_boundary_complex(v)
    except (NotWellComposedError, NonManifoldError) as exc:
        print(f"voxtopo: {exc} (try --repair)", file=sys.stderr)
        return EXIT_PIPELINE
    buf = _io.StringIO()
    write_off(complex, buf)
    _emit(buf.getvalue().encode("ascii"), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        v = generate_shape(args.shape, seed=args.seed)
    except ShapeError as exc:
        raise UsageError(str(exc)) from None
    if args.output:
        save_volume(v, args.output, args.format or infer_format(args.output))
    elif args.format == "dvol":
        _emit(encode_dvol(v), None)
    else:
        _emit(encode_voxlist(v), None)
    return EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "components": cmd_components,
    "repair": cmd_repair,
    "analyze": cmd_analyze,
    "mesh": cmd_mesh,
    "gen": cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"voxtopo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VolumeFormatError, OSError) as exc:
        print(f"voxtopo: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # extension-based format inference and parameter validation
        print(f"voxtopo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
