#!/usr/bin/env python3
"""
g-fusion frame toolkit
Usage: python main.py COMMAND PATH [options]
"""
import argparse
import json
import os
import sys
from typing import List, Optional

import numpy as np
from tqdm import tqdm

import frame_engine as engine
from batch_processor import FrameBatch
from errors import FrameError, GeneratorSpecError, ParseError
from frame_model import (
    parse_coefficients,
    parse_frame,
    parse_matrix,
    parse_vector,
    serialize_coefficients,
    serialize_frame,
    serialize_vector,
)
from instance_generators import GeneratorSpec, random_frame
from linalg_kernel import DEFAULT_RESIDUAL, Tolerance, operator_norm
from report_preview import Report, render_json, show_report
from utils import (
    default_output_path,
    file_digest,
    print_error,
    print_info,
    print_success,
    read_input,
    write_output,
)

EXIT_OK = 0
EXIT_NOT_A_FRAME = 2
EXIT_INTERNAL = 4


def _add_global_flags(parser: argparse.ArgumentParser, suppress: bool):
    # Subparsers use SUPPRESS so a flag given before the command is not reset
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="Emit the machine-readable report on stdout")
    parser.add_argument("--tol-rank", type=float, default=default(None), metavar="FLOAT",
                        help="Relative singular value cutoff (default: auto)")
    parser.add_argument("--tol-resid", type=float, default=default(DEFAULT_RESIDUAL), metavar="FLOAT",
                        help=f"Absolute residual tolerance (default: {DEFAULT_RESIDUAL:g})")
    parser.add_argument("--out", default=default(None), metavar="PATH",
                        help="Output file (or directory for generate --count > 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Analyze and transform finite g-fusion frames",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""Examples:
  python main.py analyze test_frames/two_subspace.json
  python main.py analyze test_frames/ --json
  python main.py dual frame.json --out dual.json
  python main.py remove frame.json --index 0
  python main.py transform frame.json --operator u.json
  python main.py generate --seed 7 --n 4 --members 3 --count 10"""
    )
    _add_global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)

    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", parents=[common], help="Frame bounds and diagnostics")
    analyze.add_argument("paths", nargs="+", help="Frame files, directories, or glob patterns")
    analyze.add_argument("--recursive", action="store_true", help="Search directories recursively")

    for name, text in (("dual", "Write the canonical dual frame"),
                       ("parsevalize", "Write the Parseval frame (S^-1/2 W_j, Lambda_j S^-1/2, v_j)")):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("path", help="Frame file")

    remove = commands.add_parser("remove", parents=[common], help="Analyze deletion of one member")
    remove.add_argument("path", help="Frame file")
    remove.add_argument("--index", type=int, required=True, help="Index j0 of the member to remove")

    transform = commands.add_parser("transform", parents=[common], help="Image of a frame under u")
    transform.add_argument("path", help="Frame file")
    transform.add_argument("--operator", required=True, metavar="PATH", help="n x n operator file")

    coefficients = commands.add_parser("coefficients", parents=[common],
                                       help="Minimal-norm coefficients of a vector")
    coefficients.add_argument("path", help="Frame file")
    coefficients.add_argument("--vector", required=True, metavar="PATH", help="Vector file")

    synthesize = commands.add_parser("synthesize", parents=[common], help="Synthesize a coefficient family")
    synthesize.add_argument("path", help="Frame file")
    synthesize.add_argument("--coeffs", required=True, metavar="PATH", help="Coefficient file")

    generate = commands.add_parser("generate", parents=[common], help="Write seeded random frames")
    generate.add_argument("spec", nargs="?", help="Generator spec file (JSON); flags override it")
    generate.add_argument("--seed", type=int)
    generate.add_argument("--n", type=int, dest="ambient_dim", help="Ambient dimension")
    generate.add_argument("--members", type=int, dest="member_count", help="Number of members")
    generate.add_argument("--k", type=int, dest="subspace_dim", help="Subspace dimension of every member")
    generate.add_argument("--m", type=int, dest="codomain_dim", help="Codomain dimension of every member")
    generate.add_argument("--real", action="store_true", default=None, help="Real Gaussian draws")
    generate.add_argument("--no-ensure-frame", action="store_false", dest="ensure_frame", default=None,
                          help="Do not resample until the family is a frame")
    generate.add_argument("--count", type=int, default=1, help="Number of instances, consecutive seeds")

    return parser


def _tolerance(args) -> Tolerance:
    return Tolerance(rank_rel=args.tol_rank, residual_abs=args.tol_resid)


def _load_frame(path: str, tol: Tolerance):
    raw = read_input(path)
    return raw, parse_frame(raw, tol)


def _output_path(args, command: str) -> str:
    return args.out or default_output_path(args.path, command)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def analyze_file(path: str, tol: Tolerance) -> Report:
    raw, frame = _load_frame(path, tol)
    report = engine.frame_bounds(frame, tol)
    sequence_bounds, sequence_dim = engine.range_space_bounds(frame, tol)
    return Report(
        command="analyze",
        input_digest=file_digest(raw),
        results={
            "ambient_dim": frame.ambient_dim,
            "member_count": len(frame),
            "lower_bound": report.bounds.lower,
            "upper_bound": report.bounds.upper,
            "condition_number": report.frame_operator_condition,
            "is_bessel": report.is_bessel,
            "is_frame": report.is_frame,
            "is_parseval": report.is_parseval,
            "is_gf_complete": report.is_gf_complete,
            "sequence_lower_bound": sequence_bounds.lower,
            "sequence_upper_bound": sequence_bounds.upper,
            "sequence_dim": sequence_dim,
            "is_frame_sequence": sequence_dim > 0 and sequence_bounds.lower > 0.0,
        },
        tolerance=tol,
    )


def _analysis_exit_code(report: Report) -> int:
    return EXIT_OK if report.results["is_frame"] else EXIT_NOT_A_FRAME


def cmd_analyze(args, tol: Tolerance) -> int:
    single = len(args.paths) == 1 and not os.path.isdir(args.paths[0]) and not any(c in args.paths[0] for c in "*?")
    if single:
        report = analyze_file(args.paths[0], tol)
        if args.out:
            write_output(args.out, render_json(report).encode("utf-8"))
            report.outputs.append(args.out)
        _emit(args, report)
        return _analysis_exit_code(report)

    batch = FrameBatch()
    frame_files = batch.find_frame_files(args.paths, args.recursive)
    if not frame_files:
        print_error("No frame files found!")
        return 1
    if not args.json:
        batch.show_batch_summary(frame_files)
    results = batch.process_batch(frame_files, lambda p: analyze_file(p, tol), _analysis_exit_code)
    document = [r.to_dict() for r in results]
    if args.out:
        write_output(args.out, render_json(document).encode("utf-8"))
    if args.json:
        sys.stdout.write(render_json(document))
    else:
        batch.show_batch_results()
    return batch.exit_code


def cmd_dual(args, tol: Tolerance) -> int:
    raw, frame = _load_frame(args.path, tol)
    dual = engine.canonical_dual(frame, tol)
    s = engine.frame_operator(frame)
    s_dual = engine.frame_operator(dual.frame)
    identity_residual = operator_norm(
        engine.synthesis_matrix(frame) @ engine.synthesis_matrix(dual.frame).conj().T - np.eye(frame.ambient_dim)
    )
    bounds = engine.frame_bounds(dual.frame, tol)
    out = write_output(_output_path(args, "dual"), serialize_frame(dual.frame))
    report = Report(
        command="dual",
        input_digest=file_digest(raw),
        results={
            "lower_bound": bounds.bounds.lower,
            "upper_bound": bounds.bounds.upper,
            "input_condition_number": engine.frame_bounds(frame, tol).frame_operator_condition,
            "dual_operator_residual": operator_norm(s_dual - dual.s_inverse),
            "identity_residual": identity_residual,
            "inverse_residual": operator_norm(dual.s_inverse @ s - np.eye(frame.ambient_dim)),
        },
        tolerance=tol,
        outputs=[out],
    )
    _emit(args, report)
    return EXIT_OK


def cmd_parsevalize(args, tol: Tolerance) -> int:
    raw, frame = _load_frame(args.path, tol)
    parseval = engine.parsevalize(frame, tol)
    bounds = engine.frame_bounds(parseval, tol)
    out = write_output(_output_path(args, "parsevalize"), serialize_frame(parseval))
    report = Report(
        command="parsevalize",
        input_digest=file_digest(raw),
        results={
            "lower_bound": bounds.bounds.lower,
            "upper_bound": bounds.bounds.upper,
            "is_parseval": bounds.is_parseval,
            "parseval_residual": operator_norm(engine.frame_operator(parseval) - np.eye(frame.ambient_dim)),
        },
        tolerance=tol,
        outputs=[out],
    )
    _emit(args, report)
    return EXIT_OK


def cmd_remove(args, tol: Tolerance) -> int:
    raw, frame = _load_frame(args.path, tol)
    deletion = engine.delete_member(frame, args.index, tol)
    report = Report(
        command="remove",
        input_digest=file_digest(raw),
        results={
            "removed_index": deletion.removed_index,
            "cond1_holds": deletion.cond1_holds,
            "cond2_holds": deletion.cond2_holds,
            "cond3_holds": deletion.cond3_holds,
            "remaining_lower_bound": deletion.remaining_bounds.lower,
            "remaining_upper_bound": deletion.remaining_bounds.upper,
            "remaining_is_frame": deletion.remaining_is_frame,
            "remaining_gf_complete": deletion.remaining_gf_complete,
            "remaining_rank": deletion.remaining_rank,
            "unit_eigen_gap_1": deletion.unit_eigen_gap_1,
            "unit_eigen_gap_2": deletion.unit_eigen_gap_2,
            "complement_sigma_min": deletion.complement_sigma_min,
        },
        tolerance=tol,
    )
    if args.out:
        write_output(args.out, render_json(report).encode("utf-8"))
        report.outputs.append(args.out)
    _emit(args, report)
    return EXIT_OK if deletion.remaining_is_frame else EXIT_NOT_A_FRAME


def cmd_transform(args, tol: Tolerance) -> int:
    raw, frame = _load_frame(args.path, tol)
    u = parse_matrix(read_input(args.operator))
    gamma, diagnostics = engine.transform_frame(frame, u, tol)
    out = write_output(_output_path(args, "transform"), serialize_frame(gamma))
    report = Report(
        command="transform",
        input_digest=file_digest(raw),
        results={
            "singular_values": diagnostics.singular_values,
            "operator_rank": diagnostics.rank,
            "sigma_min_nonzero": diagnostics.range.sigma_min_nonzero,
            "condition_on_range": diagnostics.range.condition_on_range,
            "sequence_lower_bound": diagnostics.sequence_bounds.lower,
            "sequence_upper_bound": diagnostics.sequence_bounds.upper,
            "sequence_dim": diagnostics.sequence_dim,
            "is_frame_sequence": diagnostics.is_frame_sequence,
            "identity_residual": diagnostics.identity_residual,
        },
        tolerance=tol,
        outputs=[out],
    )
    _emit(args, report)
    return EXIT_OK


def cmd_coefficients(args, tol: Tolerance) -> int:
    raw, frame = _load_frame(args.path, tol)
    f = parse_vector(read_input(args.vector), frame.ambient_dim)
    dual = engine.canonical_dual(frame, tol)
    coeffs = engine.minimal_norm_coefficients(frame, dual, f, tol)
    out = write_output(_output_path(args, "coefficients"), serialize_coefficients(coeffs))
    report = Report(
        command="coefficients",
        input_digest=file_digest(raw),
        results={
            "norm_squared": coeffs.norm_squared(),
            "synthesis_residual": float(np.linalg.norm(engine.synthesis(frame, coeffs) - f)),
        },
        tolerance=tol,
        outputs=[out],
    )
    _emit(args, report)
    return EXIT_OK


def cmd_synthesize(args, tol: Tolerance) -> int:
    raw, frame = _load_frame(args.path, tol)
    coeffs = parse_coefficients(read_input(args.coeffs))
    f = engine.synthesis(frame, coeffs)
    out = write_output(_output_path(args, "synthesize"), serialize_vector(f))
    report = Report(
        command="synthesize",
        input_digest=file_digest(raw),
        results={"norm": float(np.linalg.norm(f)), "coefficient_norm_squared": coeffs.norm_squared()},
        tolerance=tol,
        outputs=[out],
    )
    _emit(args, report)
    return EXIT_OK


def _generator_spec(args) -> GeneratorSpec:
    doc = {}
    if args.spec:
        try:
            doc = json.loads(read_input(args.spec))
        except ValueError as e:
            raise ParseError(args.spec, f"invalid JSON: {e}")
        if not isinstance(doc, dict):
            raise GeneratorSpecError("generator spec must be a JSON object")
    overrides = {
        "seed": args.seed,
        "ambient_dim": args.ambient_dim,
        "member_count": args.member_count,
        "ensure_frame": args.ensure_frame,
        "real": args.real,
    }
    doc.update({k: v for k, v in overrides.items() if v is not None})
    if "ambient_dim" not in doc or "member_count" not in doc:
        raise GeneratorSpecError("generate needs --n and --members (or a spec file)")
    count = int(doc["member_count"])
    if args.subspace_dim is not None:
        doc["subspace_dims"] = [args.subspace_dim] * count
    if args.codomain_dim is not None:
        doc["codomain_dims"] = [args.codomain_dim] * count
    return GeneratorSpec.from_dict(doc)


def cmd_generate(args, tol: Tolerance) -> int:
    spec = _generator_spec(args)
    if args.count < 1:
        raise GeneratorSpecError(f"--count must be positive, got {args.count}")

    seeds = [spec.seed + i for i in range(args.count)]
    outputs = []
    directory = args.out if args.count > 1 and args.out else "output"
    for seed in tqdm(seeds, desc="Generating", unit="frame", disable=args.count == 1, file=sys.stderr):
        frame = random_frame(spec.with_seed(seed), tol)
        if args.count == 1 and args.out:
            path = args.out
        else:
            path = os.path.join(directory, f"frame_seed{seed}.json")
        outputs.append(write_output(path, serialize_frame(frame)))

    spec_bytes = json.dumps(spec.to_dict(), sort_keys=True).encode("utf-8")
    report = Report(
        command="generate",
        input_digest=file_digest(spec_bytes),
        results={"spec": spec.to_dict(), "seeds": seeds, "files": outputs},
        tolerance=tol,
        outputs=outputs,
    )
    _emit(args, report)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "dual": cmd_dual,
    "parsevalize": cmd_parsevalize,
    "remove": cmd_remove,
    "transform": cmd_transform,
    "coefficients": cmd_coefficients,
    "synthesize": cmd_synthesize,
    "generate": cmd_generate,
}


def _emit(args, report: Report):
    if args.json:
        sys.stdout.write(render_json(report))
    else:
        show_report(report)
        print_success(f"{report.command} complete")


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run the command and return the process exit code"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # usage errors are input errors, not "not a frame"
        return 0 if e.code in (0, None) else 1
    try:
        tol = _tolerance(args)
        return COMMANDS[args.command](args, tol)
    except FrameError as e:
        print_error(str(e))
        return e.exit_code
    except OSError as e:
        print_error(f"Cannot access file: {e}")
        return 1
    except np.linalg.LinAlgError as e:
        print_error(f"Linear algebra failure: {e}")
        return EXIT_INTERNAL
    except KeyboardInterrupt:
        print_info("\nProcess interrupted by user (Ctrl+C)")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
