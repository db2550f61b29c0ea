"""Command-line entry point.

Exit codes:

* 0: success
* 1: ``verify-equiv`` found the two inputs different
* 2: parse error, malformed diagram, mismatched diagram types, unknown family or bad usage
* 3: a size cap was exceeded
* 4: soundness violation, or an expected-pass axiom failed
* 5: the simplifier hit its step limit

Inputs ending in ``.qc`` are circuits, anything else (normally ``.zx.json``) is a
diagram. Numbers are printed with 12 significant digits.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import circuits, hopf, infogeo, zxgraph, zxrules
from .errors import (IndexOutOfRange, MalformedDiagram, ParseError, SoundnessViolation,
                     StepLimitExceeded, TooLarge, TypeMismatch, UnsupportedGate, ZxForgeError)
from .qcore import StateVector

EXIT_OK = 0
EXIT_DIFFERENT = 1
EXIT_PARSE = 2
EXIT_SIZE = 3
EXIT_UNSOUND = 4
EXIT_STEP_LIMIT = 5

DIGITS = 12


class UsageError(ZxForgeError):
    pass


def _round(x: float) -> float:
    return float(f"{x:.{DIGITS}g}")


def jsonable(obj):
    """Round every number to 12 significant digits; complex numbers and arrays become re/im pairs."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return jsonable([[c.real, c.imag] for c in obj.reshape(-1)]) if obj.ndim == 1 else \
                [jsonable(row) for row in obj]
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n"


def _fmt(c: complex) -> str:
    c = complex(c)
    re, im = _round(c.real) + 0.0, _round(c.imag) + 0.0
    if im == 0:
        return f"{re:.{DIGITS}g}"
    return f"{re:.{DIGITS}g}{im:+.{DIGITS}g}j"


def matrix_text(m) -> str:
    m = np.atleast_2d(m)
    return "\n".join(" ".join(_fmt(c) for c in row) for row in m) + "\n"


# inputs --------------------------------------------------------------------

def _read(path: str) -> str:
    if not os.path.exists(path):
        raise UsageError(f"no such file: {path}")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_circuit(path: str) -> circuits.Circuit:
    return circuits.parse_circuit(_read(path))


def load_any_diagram(path: str) -> zxgraph.ZxDiagram:
    if path.endswith(".qc"):
        return zxgraph.circuit_to_zx(load_circuit(path))
    return zxgraph.from_json(_read(path))


# commands --------------------------------------------------------------------

def cmd_simulate(args) -> tuple[int, str]:
    if not args.input.endswith(".qc"):
        raise UsageError("simulate expects a .qc circuit file")
    c = load_circuit(args.input)
    if c.n_qubits > circuits.MAX_QUBITS:
        raise TooLarge(f"{c.n_qubits} qubits exceeds the dense cap of {circuits.MAX_QUBITS}")
    if args.input_state is not None:
        bits = args.input_state
        if len(bits) != c.n_qubits or set(bits) - {"0", "1"}:
            raise UsageError(f"--input-state must be {c.n_qubits} bits, got {bits!r}")
        out = circuits.apply_circuit(c, StateVector.basis(bits)).amplitudes
        if args.format == "text":
            return EXIT_OK, " ".join(_fmt(a) for a in out) + "\n"
        return EXIT_OK, dumps({"n_qubits": c.n_qubits, "input_state": bits, "state": out})
    u = circuits.circuit_unitary(c)
    if args.format == "text":
        return EXIT_OK, matrix_text(u)
    return EXIT_OK, dumps({"n_qubits": c.n_qubits, "unitary": u})


def cmd_to_zx(args) -> tuple[int, str]:
    d = load_any_diagram(args.input)
    if args.format == "dot":
        return EXIT_OK, zxgraph.to_dot(d)
    return EXIT_OK, zxgraph.to_json(d)


def cmd_simplify(args) -> tuple[int, str]:
    d = load_any_diagram(args.input)
    before = d.counts()
    config = zxrules.SimplifyConfig(step_limit=args.step_limit, tol=args.tol)
    out, steps = zxrules.simplify(d, config)
    try:
        report = zxrules.verify_equivalence(d, out, tol=args.tol)
    except TooLarge:
        verdict, deviation = "unverified", None
    else:
        verdict, deviation = ("sound" if report.equivalent else "unsound"), report.deviation
    code = EXIT_UNSOUND if verdict == "unsound" else EXIT_OK
    if args.format == "dot":
        return code, zxgraph.to_dot(out)
    if args.format == "text":
        lines = [f"{s.rule.value} {list(s.site)}" for s in steps]
        lines.append(f"before {before}")
        lines.append(f"after {out.counts()}")
        lines.append(f"verdict {verdict}")
        return code, "\n".join(lines) + "\n"
    doc = {"diagram": zxgraph.to_dict(out), "steps": [s.to_dict() for s in steps],
           "counts_before": before, "counts_after": out.counts(),
           "verdict": verdict, "deviation": deviation}
    return code, dumps(doc)


def cmd_verify_equiv(args) -> tuple[int, str]:
    a, b = load_any_diagram(args.first), load_any_diagram(args.second)
    report = zxrules.verify_equivalence(a, b, up_to_global_phase=args.up_to_phase, tol=args.tol)
    code = EXIT_OK if report.equivalent else EXIT_DIFFERENT
    if args.format == "text":
        return code, f"equivalent {report.equivalent} deviation {_fmt(report.deviation)}\n"
    return code, dumps(report.to_dict())


def hopf_suite(target: str, n: int | None = None, tol: float | None = None) -> dict:
    """Run the Hopf suites for ``zx`` or ``cyclic`` and return a JSON-ready document."""
    if target == "zx":
        red, green = hopf.zx_structures()
        expected = {"f_hopf": hopf.check_f_hopf((red, green)),
                    "normalized": hopf.check_hopf(hopf.assemble(red, green).normalized())}
        expected_fail = {"green_bialgebra": hopf.check_unnormalized_bialgebra(green)}
    elif target == "cyclic":
        if n is None or n < 1:
            raise UsageError("cyclic needs a positive group order")
        red, green = hopf.build_group_algebra(n)
        expected = {"f_hopf": hopf.check_f_hopf((red, green)),
                    "group_algebra": hopf.check_hopf(hopf.assemble(red, green))}
        expected_fail = {}
    else:
        raise UsageError(f"unknown Hopf target {target!r}")
    if tol is not None:
        for r in list(expected.values()) + list(expected_fail.values()):
            r.tol = tol
    return {
        "target": target if n is None else f"{target} {n}",
        "expected_pass": {k: r.to_dict() for k, r in expected.items()},
        "expected_fail": {k: {**r.to_dict(), "failed_as_expected": not r.ok}
                          for k, r in expected_fail.items()},
        "ok": all(r.ok for r in expected.values()),
    }


def cmd_verify_hopf(args) -> tuple[int, str]:
    doc = hopf_suite(args.target, args.order, args.tol)
    return (EXIT_OK if doc["ok"] else EXIT_UNSOUND), dumps(doc)


def _parse_values(text: str | None, kind=float):
    if text is None:
        return None
    try:
        return np.array([kind(t.replace(" ", "")) for t in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"cannot parse parameter list {text!r}") from exc


def infogeo_task(task: str, family: str, theta=None, z=None, seed: int = 0) -> dict:
    """Evaluate one information-geometry quantity on a built-in family."""
    if family.startswith("chart-"):
        try:
            n = int(family.split("-", 1)[1])
        except ValueError:
            raise UsageError(f"unknown family {family!r}") from None
        if task not in ("fs", "qgt") or n < 1:
            raise UsageError(f"family {family} supports fs and qgt only")
        z = np.zeros(n, dtype=complex) if z is None else np.asarray(z, dtype=complex)
        if z.shape != (n,):
            raise UsageError(f"{family} needs {n} complex coordinates")
        g = infogeo.fubini_study(z)
        pulled = infogeo.chart_metric(z)
        kahler = infogeo.kahler_metric(z)
        return {"task": task, "family": family, "z": z, "value": g if task == "fs" else pulled,
                "residuals": {"qgt_pullback_vs_fs": float(np.max(np.abs(pulled - g))),
                              "kahler_vs_fs": float(np.max(np.abs(kahler - g)))}}
    if family == "bernoulli" or family == "softmax":
        if task != "fisher":
            raise UsageError(f"family {family} supports fisher only")
        if family == "bernoulli":
            fam = infogeo.bernoulli_family()
            theta = np.array([0.5]) if theta is None else theta
        else:
            rng = np.random.default_rng(seed)
            fam = infogeo.softmax_family(rng.normal(size=(4, 2)), rng.normal(size=4))
            theta = rng.normal(size=2) if theta is None else theta
        F = infogeo.fisher_matrix(fam, theta)
        cov = infogeo.gradient_covariance(fam, theta)
        kl = infogeo.kl_quadratic_check(fam, theta, [0.04, 0.02, 0.01, 0.005])
        value = float(F[0, 0]) if F.shape == (1, 1) else F
        return {"task": task, "family": family, "theta": theta, "value": value,
                "residuals": {"covariance_of_gradient": float(np.max(np.abs(F - cov))),
                              "kl_slope": kl.slope}}
    if family in ("bloch-theta", "diag-qubit"):
        t = float(theta[0]) if theta is not None else 0.3
        if task == "qgt":
            if family != "bloch-theta":
                raise UsageError("qgt needs a pure state family (bloch-theta)")
            Q = infogeo.qgt(infogeo.bloch_theta_state(), t)
            F = infogeo.qfi(infogeo.bloch_theta_density(), t)
            return {"task": task, "family": family, "theta": t, "value": float(Q[0, 0].real),
                    "residuals": {"qfi_vs_4_re_qgt": abs(F - 4 * Q[0, 0].real)}}
        if task == "qfi":
            fam = infogeo.bloch_theta_density() if family == "bloch-theta" else infogeo.diag_qubit_family()
            rep = infogeo.qfi_report(fam, t)
            return {"task": task, "family": family, "theta": t, "value": rep.trace,
                    "residuals": rep.to_dict()}
        raise UsageError(f"family {family} supports qfi and qgt only")
    raise UsageError(f"unknown family {family!r}")


def cmd_infogeo(args) -> tuple[int, str]:
    theta = _parse_values(args.theta)
    z = _parse_values(args.z, complex)
    return EXIT_OK, dumps(infogeo_task(args.task, args.family, theta, z, args.seed))


# plumbing --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zxforge", description="ZX-calculus rewriting, circuit "
                                "simulation, Hopf axiom checks and information geometry.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--tol", type=float, default=None, help="equality tolerance")
    common.add_argument("--step-limit", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="unitary or output state of a circuit")
    s.add_argument("input")
    s.add_argument("--input-state", default=None, help="basis state bits, e.g. 00")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("to-zx", parents=[common], help="translate a circuit to a ZX-diagram")
    s.add_argument("input")
    s.set_defaults(func=cmd_to_zx)

    s = sub.add_parser("simplify", parents=[common], help="simplify a diagram or circuit")
    s.add_argument("input")
    s.set_defaults(func=cmd_simplify)

    s = sub.add_parser("verify-equiv", parents=[common], help="compare two diagrams or circuits")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--up-to-phase", action="store_true")
    s.set_defaults(func=cmd_verify_equiv)

    s = sub.add_parser("verify-hopf", parents=[common], help="Hopf and F-Hopf axiom suites")
    s.add_argument("target", choices=("zx", "cyclic"))
    s.add_argument("order", nargs="?", type=int, default=None)
    s.set_defaults(func=cmd_verify_hopf)

    s = sub.add_parser("infogeo", parents=[common], help="information-geometry quantities")
    s.add_argument("task", choices=("fisher", "qfi", "qgt", "fs"))
    s.add_argument("family", help="bernoulli, softmax, bloch-theta, diag-qubit or chart-<n>")
    s.add_argument("--theta", default=None, help="comma-separated parameters")
    s.add_argument("--z", default=None, help="comma-separated complex coordinates, e.g. 1+2j,0")
    s.set_defaults(func=cmd_infogeo)
    return p


def run(argv=None) -> tuple[int, str, str]:
    """Run a command; returns ``(exit code, stdout text, stderr text)``."""
    args = build_parser().parse_args(argv)
    try:
        code, out = args.func(args)
        return code, out, ""
    except (ParseError, IndexOutOfRange, MalformedDiagram, TypeMismatch, UnsupportedGate,
            UsageError) as exc:
        return EXIT_PARSE, "", f"error: {exc}\n"
    except TooLarge as exc:
        return EXIT_SIZE, "", f"error: {exc}\n"
    except SoundnessViolation as exc:
        return EXIT_UNSOUND, "", f"error: {exc}\n"
    except StepLimitExceeded as exc:
        return EXIT_STEP_LIMIT, "", f"error: {exc}\n"


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
