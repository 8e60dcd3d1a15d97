"""Command-line interface: ``errorgen <command> ...``.

Exit codes: 0 ok, 2 parse/IO error, 3 no real logarithm, 4 non-TP or
non-CPTP input, 5 invalid model spec.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import channels, fileio
from .errors import (
    ChannelParameterError,
    ErrorGenError,
    FileFormatError,
    InvalidLabelError,
    InvalidModelSpecError,
    NoRealLogarithmError,
    NonTPGeneratorError,
    PauliParseError,
    QubitCountMismatch,
    SingularMatrixError,
)
from .generators import (
    GeneratorLabel,
    dual_generator,
    elementary_generator,
    normalize_convention,
    process_from_rates,
    reconstruct,
)
from .metrics import metrics_report
from .models import ModelSpec, labels_of, parameter_count, project
from .report import DISPLAY_THRESHOLD, decomposition_report, rates_report, render_text
from .superop import check_process, matrix_exp

EXIT_OK = 0
EXIT_IO = 2
EXIT_NO_LOG = 3
EXIT_NON_TP = 4
EXIT_MODEL = 5

PLANES = {"XZ": (1, 3), "XY": (1, 2), "YZ": (2, 3)}


def _emit(payload, path: Optional[str]) -> None:
    if path:
        fileio.write_json(path, payload)


def _load_target(args, n_qubits: int) -> np.ndarray:
    if getattr(args, "target", None):
        target = fileio.read_channel(args.target)
    elif getattr(args, "target_ideal", None):
        target = channels.ideal_target(args.target_ideal)
    else:
        return np.eye(4**n_qubits)
    if target.shape[0] != 4**n_qubits:
        raise QubitCountMismatch("target acts on a different number of qubits than the gate")
    return target


def _n_of(mat: np.ndarray) -> int:
    return (mat.shape[0].bit_length() - 1) // 2


def cmd_decompose(args) -> int:
    convention = normalize_convention(args.convention)
    if args.gates_dir:
        docs = {}
        for path in sorted(Path(args.gates_dir).glob("*.json")):
            gate = fileio.read_channel(path)
            docs[path.name] = decomposition_report(gate, _load_target(args, _n_of(gate)), convention, args.threshold)
            print(f"== {path.name}")
            print(render_text(docs[path.name]))
        _emit(docs, args.json)
        return EXIT_OK
    gate = fileio.read_channel(args.gate)
    doc = decomposition_report(gate, _load_target(args, _n_of(gate)), convention, args.threshold)
    print(render_text(doc))
    _emit(doc, args.json)
    return EXIT_OK


def cmd_metrics(args) -> int:
    gate = fileio.read_channel(args.gate)
    report = metrics_report(gate, _load_target(args, _n_of(gate)), normalize_convention(args.convention))
    doc = report.to_json()
    print(json.dumps(doc, indent=1))
    _emit(doc, args.json)
    return EXIT_OK


def cmd_check(args) -> int:
    diag = check_process(fileio.read_channel(args.gate))
    doc = diag.to_dict()
    print(json.dumps(doc, indent=1))
    _emit(doc, args.json)
    return EXIT_OK if diag.is_cptp else EXIT_NON_TP


def cmd_count(args) -> int:
    if args.gate_set:
        gs = fileio.read_gate_set(args.gate_set, args.qubits)
        doc = {"qubits": gs.n_qubits, "gates": gs.parameter_counts(), "total": gs.total_parameters()}
        print(json.dumps(doc, indent=1))
        _emit(doc, args.json)
        return EXIT_OK
    if args.qubits is None or args.model is None:
        raise FileFormatError("count needs --qubits and --model (or --gate-set)")
    spec = ModelSpec.parse(args.model, args.qubits)
    count = parameter_count(spec)
    doc = {"qubits": args.qubits, "model": str(spec), "parameters": count}
    if args.enumerate:
        labels = labels_of(spec)
        doc["enumerated"] = len(labels)
        if args.list:
            doc["labels"] = [str(lb) for lb in labels]
    print(count)
    _emit(doc, args.json)
    return EXIT_OK


def cmd_project(args) -> int:
    rates = fileio.read_rates(args.rates)
    spec = ModelSpec.parse(args.model, rates.n_qubits)
    proj = project(rates, spec)
    doc = proj.to_json()
    doc["model"] = str(spec)
    print(render_text(rates_report(proj.in_model, args.threshold)))
    print("\n  residual norms: " + ", ".join(f"{k}={v:.3e}" for k, v in proj.residual_norms.items()))
    _emit(doc, args.json)
    if args.out:
        fileio.write_rates(args.out, proj.in_model)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    rates = fileio.read_rates(args.rates)
    target = _load_target(args, rates.n_qubits)
    ptm = process_from_rates(rates, target)
    fileio.write_channel(args.out, ptm, args.rep)
    print(json.dumps(check_process(ptm).to_dict(), indent=1))
    return EXIT_OK


def cmd_make_channel(args) -> int:
    params = {k: getattr(args, k) for k in ("gamma", "p", "q", "theta", "seed", "scale", "pauli")
              if getattr(args, k) is not None}
    ptm = channels.make_channel(channels.ChannelSpec(args.kind, args.qubits, params))
    fileio.write_channel(args.out, ptm, args.rep)
    diag = check_process(ptm)
    print(f"wrote {args.out} ({args.kind}, {args.qubits} qubit(s), cptp={diag.is_cptp})")
    return EXIT_OK


def cmd_elementary(args) -> int:
    label = GeneratorLabel.parse(args.label)
    if label.n_qubits != args.qubits:
        raise QubitCountMismatch(f"label {label} acts on {label.n_qubits} qubits, not {args.qubits}")
    mat = dual_generator(label) if args.dual else elementary_generator(label)
    doc = {"qubits": args.qubits, "label": str(label), "dual": args.dual,
           "basis": fileio.BASIS_NAME, "matrix": mat.tolist()}
    if args.out:
        fileio.write_json(args.out, doc)
    with np.printoptions(precision=6, suppress=True, linewidth=160):
        print(f"{'dual of ' if args.dual else ''}{label}:")
        print(mat)
    return EXIT_OK


def bloch_action_rows(generator: np.ndarray, plane: str, samples: int, time: float) -> list[tuple[float, ...]]:
    """Unit-circle points of a Bloch-sphere plane and their images under ``exp(time * L)``."""
    a, b = PLANES[plane.upper()]
    prop = matrix_exp(time * np.asarray(generator))
    rows = []
    for k in range(samples):
        phi = 2 * np.pi * k / samples
        bloch = np.zeros(4)
        bloch[0] = 1.0
        bloch[a], bloch[b] = np.cos(phi), np.sin(phi)
        # normalized-basis coordinates of rho = (1 + r.sigma)/2 are bloch/sqrt(2)
        out = prop @ bloch
        rows.append((bloch[a], bloch[b], out[a], out[b]))
    return rows


def cmd_bloch_action(args) -> int:
    if args.label:
        label = GeneratorLabel.parse(args.label)
        if label.n_qubits != 1:
            raise InvalidLabelError("bloch-action needs a 1-qubit label")
        generator = elementary_generator(label)
    else:
        rates = fileio.read_rates(args.rates)
        if rates.n_qubits != 1:
            raise InvalidLabelError("bloch-action needs 1-qubit rates")
        generator = reconstruct(rates)
    plane = args.plane.upper()
    names = [c.lower() for c in plane]
    header = [f"{names[0]}_in", f"{names[1]}_in", f"{names[0]}_out", f"{names[1]}_out"]
    rows = bloch_action_rows(generator, plane, args.samples, args.time)
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(x)) for x in row])
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def _add_target_args(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--target", help="ideal-gate channel file (default: identity)")
    grp.add_argument("--target-ideal", choices=sorted(channels.IDEAL_GATES), help="built-in ideal gate")
    p.add_argument("--convention", default="log", choices=["log", "diff", "logarithm", "difference"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="errorgen", description="Error generator analysis of quantum gates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="decompose a gate's error generator into elementary rates")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gate", help="channel file of the implemented gate")
    src.add_argument("--gates-dir", help="decompose every *.json channel in a directory")
    _add_target_args(p)
    p.add_argument("--json", help="write the report document here")
    p.add_argument("--threshold", type=float, default=DISPLAY_THRESHOLD, help="display threshold for the table")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("metrics", help="J-probability, J-amplitude and entanglement fidelity")
    p.add_argument("--gate", required=True)
    _add_target_args(p)
    p.add_argument("--json")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("check", help="TP / unital / CP diagnostics (exit 4 if not CPTP)")
    p.add_argument("--gate", required=True)
    p.add_argument("--json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("count", help="parameter count of a reduced model")
    p.add_argument("--qubits", type=int)
    p.add_argument("--model", help="model spec, e.g. 'H(<=2),S(<=2),A(1)' or 'W2'")
    p.add_argument("--gate-set", help="gate-set JSON config")
    p.add_argument("--enumerate", action="store_true", help="also enumerate labels to cross-check")
    p.add_argument("--list", action="store_true", help="with --enumerate, include labels in --json output")
    p.add_argument("--json")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("project", help="project a rates file onto a reduced model")
    p.add_argument("--rates", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--json")
    p.add_argument("--out", help="write the in-model rates as a rates file")
    p.add_argument("--threshold", type=float, default=DISPLAY_THRESHOLD)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("reconstruct", help="rebuild a channel from a rates file")
    p.add_argument("--rates", required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--target")
    grp.add_argument("--target-ideal", choices=sorted(channels.IDEAL_GATES))
    p.add_argument("--out", required=True)
    p.add_argument("--rep", default="ptm", choices=["ptm", "chi"])
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("make-channel", help="write a reference or random channel file")
    p.add_argument("--kind", required=True, choices=channels.CHANNEL_KINDS)
    p.add_argument("--qubits", type=int, default=1)
    p.add_argument("--gamma", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--pauli")
    p.add_argument("--seed", type=int)
    p.add_argument("--scale", type=float)
    p.add_argument("--rep", default="ptm", choices=["ptm", "chi"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_channel)

    p = sub.add_parser("elementary", help="matrix of one elementary (or dual) generator")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--label", required=True, help="KIND:P[,Q], e.g. A:X,Y")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_elementary)

    p = sub.add_parser("bloch-action", help="CSV of a 1-qubit generator's action on a Bloch plane")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--label")
    src.add_argument("--rates")
    p.add_argument("--plane", default="XZ", type=str.upper, choices=sorted(PLANES))
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--time", type=float, default=0.1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bloch_action)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoRealLogarithmError as exc:
        print(f"error: {exc}\nhint: the error process has no real logarithm; "
              f"rerun with --convention diff", file=sys.stderr)
        return EXIT_NO_LOG
    except (NonTPGeneratorError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_TP
    except InvalidModelSpecError as exc:
        print(f"error: invalid model spec: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (OSError, FileFormatError, PauliParseError, InvalidLabelError, ChannelParameterError,
            QubitCountMismatch, ErrorGenError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
