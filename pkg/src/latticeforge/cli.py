"""Command-line front end: constant tables, certification runs,
quaternion diagnostics and free-group witness tables.

Subcommands and their outputs:

  constants  CSV of certified separation constants over a parameter grid
  certify    certificate JSON for a scenario file
  quat       JSON result of the orthogonal-pair solver on a module file
  witness    CSV of kernel ranks and homology lower bounds

Exit codes: 0 success, 1 certified failure, 2 partial (budget or
nonconvergent search), 3 input error.  All runs are deterministic given
the flags; reruns with the same arguments produce byte-identical
output files.
"""

import argparse
import dataclasses
import json
import sys

from . import bisectors as bi
from . import combine as cb
from . import freegrp as fg
from . import hermitian as hm

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_PARTIAL = 2
EXIT_INPUT = 3


class CliInputError(ValueError):
    """Bad command-line input or malformed input file."""


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors use the input-error code."""

    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


@dataclasses.dataclass
class RunConfig:
    subcommand: str
    input_path: str | None
    output_path: str | None
    depth: int
    precision: int
    jobs: int
    seed: int


def _float_list(text: str):
    try:
        vals = [float(t) for t in text.split(",") if t != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty number list")
    return vals


def _write_out(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _read_in(path) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as f:
            return f.read()
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}")


# -- constants ---------------------------------------------------------

CONSTANTS_COLUMNS = ("alpha", "r", "R0", "R_star", "R1", "rho1",
                     "R2", "rho2", "R3", "rho3", "R4", "rho4",
                     "audit_samples", "violations")


def run_constants(alphas, rs, R0s, out, *, samples=2000, audit=10_000,
                  seed=0) -> int:
    """One CSV row of certified constants per (alpha, r, R0) grid
    point.  A nonconvergent search flags its row and the run exits
    with the partial code."""
    lines = [",".join(CONSTANTS_COLUMNS)]
    partial = False
    for alpha in alphas:
        for r in rs:
            for R0 in R0s:
                head = f"{alpha!r},{r!r},{R0!r}"
                try:
                    c = bi.compute_constants(alpha, r, R0,
                                             samples=samples,
                                             audit=audit, seed=seed)
                except bi.SamplerInfeasible as exc:
                    lines.append(f"{head},FAILED:{exc},,,,,,,,,,")
                    partial = True
                    continue
                row = [head]
                for name in ("R_star", "R1", "rho1", "R2", "rho2",
                             "R3", "rho3", "R4", "rho4"):
                    row.append(repr(getattr(c, name)))
                row.append(str(c.audit_samples))
                row.append(str(c.violations))
                lines.append(",".join(row))
    _write_out(out, "\n".join(lines) + "\n")
    return EXIT_PARTIAL if partial else EXIT_PASS


# -- certify -----------------------------------------------------------

def load_constants_csv(text: str) -> bi.ConfigConstants:
    """Parse the first data row of a constants CSV back into the
    constants record."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2 or lines[0].split(",") != list(CONSTANTS_COLUMNS):
        raise CliInputError("not a constants CSV")
    vals = lines[1].split(",")
    if len(vals) != len(CONSTANTS_COLUMNS) or "FAILED" in lines[1]:
        raise CliInputError("constants CSV row is flagged or malformed")
    d = dict(zip(CONSTANTS_COLUMNS, vals))
    try:
        return bi.ConfigConstants(
            angle_floor=float(d["alpha"]), r=float(d["r"]),
            R0=float(d["R0"]), R_star=float(d["R_star"]),
            R1=float(d["R1"]), rho1=float(d["rho1"]),
            R2=float(d["R2"]), rho2=float(d["rho2"]),
            R3=float(d["R3"]), rho3=float(d["rho3"]),
            audit_samples=int(d["audit_samples"]),
            violations=int(d["violations"]))
    except ValueError as exc:
        raise CliInputError(f"constants CSV row is malformed: {exc}")


def run_certify(scenario_path, depth, out, *, faith_len=8,
                constants_path=None, samples=2000, audit=10_000,
                seed=0) -> int:
    """Read a scenario JSON file, run the separation certificate and
    write the certificate JSON.

    Constants come from a previously emitted constants CSV when
    --constants is given, otherwise they are recomputed from the
    scenario's own angle and radius parameters.
    """
    text = _read_in(scenario_path)
    try:
        scenario = cb.Scenario.from_json(text)
    except cb.ScenarioError as exc:
        raise CliInputError(str(exc))
    if constants_path is not None:
        consts = load_constants_csv(_read_in(constants_path))
    else:
        try:
            consts = bi.compute_constants(
                min(scenario_alphas(scenario)), scenario.r, scenario.R0,
                samples=samples, audit=audit, seed=seed)
        except bi.SamplerInfeasible as exc:
            raise CliInputError(f"constants search infeasible: {exc}")
    cert = cb.certify(scenario, consts, depth, faith_len=faith_len)
    _write_out(out, cert.to_json() + "\n")
    if cert.status == "pass":
        return EXIT_PASS
    if cert.status == "partial":
        return EXIT_PARTIAL
    return EXIT_FAIL


def scenario_alphas(scenario: cb.Scenario):
    """Angle parameters read from the built representation."""
    phi = cb.build_phi(scenario)
    return (phi.metrics["alpha1"], phi.metrics["alpha2"])


# -- quat --------------------------------------------------------------

def run_quat(input_path, out) -> int:
    """Solve for a mutually orthogonal pair over a quaternionic module.

    Input JSON: {"module": {...}, "p1": [quat, ...], "p2": [quat, ...]}
    with quaternions in the documented wire format.  The output records
    the solution, the scaling trace, and an exact orthogonality audit.
    """
    text = _read_in(input_path)
    try:
        obj = json.loads(text)
        module = hm.SkewHermitianModule.from_json(obj["module"])
        from .quaternions import quat_from_json
        p1 = module.vector([quat_from_json(c) for c in obj["p1"]])
        p2 = module.vector([quat_from_json(c) for c in obj["p2"]])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliInputError(f"malformed module input: {exc}")
    from .quaternions import quat_to_json
    try:
        u1, u2, trace = hm.lemma_L_solve(p1, p2)
    except hm.SolverFailure as exc:
        _write_out(out, json.dumps(
            {"status": "fail", "error": str(exc)},
            indent=2, sort_keys=True) + "\n")
        return EXIT_FAIL
    except (hm.NullVectorError, hm.DegenerateForm, ValueError) as exc:
        raise CliInputError(str(exc))
    audit = {
        "p1_u1": hm.eval_form(p1, u1).is_zero(),
        "p2_u2": hm.eval_form(p2, u2).is_zero(),
        "u1_u2": hm.eval_form(u1, u2).is_zero(),
    }
    result = {
        "status": "pass" if all(audit.values()) else "fail",
        "u1": [quat_to_json(c) for c in u1.coords],
        "u2": [quat_to_json(c) for c in u2.coords],
        "scaling_trace": trace,
        "orthogonality": audit,
    }
    _write_out(out, json.dumps(result, indent=2, sort_keys=True) + "\n")
    return EXIT_PASS if all(audit.values()) else EXIT_FAIL


# -- witness -----------------------------------------------------------

def run_witness(psi_a, psi_b, ns, h1_plus, h1_minus, out) -> int:
    """CSV witness table (n, kernel_rank, h2_lower_bound)."""
    try:
        psi = fg.ZHom(psi_a, psi_b)
    except ValueError as exc:
        raise CliInputError(str(exc))
    rows = fg.witness_table(psi, ns, rank_H1_Fplus=h1_plus,
                            rank_H1_Fminus=h1_minus)
    lines = ["n,kernel_rank,h2_lower_bound"]
    for n, rank, bound in rows:
        lines.append(f"{n},{rank},{bound}")
    _write_out(out, "\n".join(lines) + "\n")
    return EXIT_PASS


# -- argument plumbing -------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="latticeforge",
                description="separation certificates and witness tables")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--depth", type=int, default=4)
        sp.add_argument("--precision", type=int, default=64,
                        help="working precision in bits")
        sp.add_argument("--jobs", type=int, default=1,
                        help="parallelism degree")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None,
                        help="output path (default stdout)")

    sp = sub.add_parser("constants",
                        help="certified constants over a parameter grid")
    sp.add_argument("--alpha", type=_float_list, required=True,
                    help="comma-separated angle floors")
    sp.add_argument("--r", type=_float_list, required=True)
    sp.add_argument("--R0", type=_float_list, required=True)
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--audit", type=int, default=10_000)
    common(sp)

    sp = sub.add_parser("certify", help="certificate for a scenario file")
    sp.add_argument("scenario", help="scenario JSON path")
    sp.add_argument("--faith-len", type=int, default=8)
    sp.add_argument("--constants", default=None,
                    help="constants CSV from a previous constants run")
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--audit", type=int, default=10_000)
    common(sp)

    sp = sub.add_parser("quat", help="orthogonal-pair solver")
    sp.add_argument("input", help="module JSON path")
    common(sp)

    sp = sub.add_parser("witness", help="kernel-rank witness table")
    sp.add_argument("--psi", type=_float_list, default=[1, 1],
                    help="homomorphism values on the two generators")
    sp.add_argument("--ns", type=_float_list, default=[2, 4, 6, 8])
    sp.add_argument("--h1-plus", type=int, default=2)
    sp.add_argument("--h1-minus", type=int, default=2)
    common(sp)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand == "constants":
            return run_constants(args.alpha, args.r, args.R0, args.out,
                                 samples=args.samples, audit=args.audit,
                                 seed=args.seed)
        if args.subcommand == "certify":
            return run_certify(args.scenario, args.depth, args.out,
                               faith_len=args.faith_len,
                               constants_path=args.constants,
                               samples=args.samples, audit=args.audit,
                               seed=args.seed)
        if args.subcommand == "quat":
            return run_quat(args.input, args.out)
        if args.subcommand == "witness":
            psi_a, psi_b = (int(args.psi[0]), int(args.psi[1])) \
                if len(args.psi) == 2 else (1, 1)
            return run_witness(psi_a, psi_b,
                               [int(n) for n in args.ns],
                               args.h1_plus, args.h1_minus, args.out)
    except CliInputError as exc:
        print(f"latticeforge: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
