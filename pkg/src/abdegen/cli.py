"""Command-line front end.

Usage:
    abdegen reconstruct --central --tau2 0.3+0.2i --tau3 2i -p 5
    abdegen reconstruct --peripheral --tau1 1i --tau2 0.3-0.4i -p 3
    abdegen forward --n 3 --tau 1i --s1 0.25 --s2 0.5
    abdegen extension-class --central --tau2 0.3+0.2i --tau3 2i -p 5
    abdegen limit-mhs --peripheral --tau1 1i --tau2 0.1i -p 7
    abdegen verify --seed 42 --cases 100
    abdegen run --request request.json      (use - for stdin)

Exit codes:
    0: ok
    2: invalid input (bad flags, non-prime p, Im tau <= 0, malformed JSON)
    3: numerical failure, residual over tolerance, or a failed verify check

Reports go to stdout; timing and diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import verify as _verify
from .carlson import ExtensionProblem, build_retraction, extension_class
from .cycle import (CycleData, build_cycle_mhs, cycle_pairing, e1_differentials, e2_page,
                    loop_integral, working_components)
from .degeneration import (BundleUpToTorsion, CentralPoint, PeripheralPoint, default_probes,
                           family_from_boundary, reconstruct_detailed)
from .errors import DegenerationError, InvalidInput, NumericalFailure
from .exact_linalg import DEFAULT_TOL, IntMatrix
from .hodge import PolarizedHS, riemann_residual
from .lattice import ComplexLattice, TorusPoint
from .mhs import (MixedHS, graded_piece, limit_filtration, limit_spread, log_monodromy,
                  weight_filtration)

COMMANDS = ("reconstruct", "forward", "extension-class", "limit-mhs", "verify")
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_PURE_IM = re.compile(rf"(?P<im>[+-]?(?:{_NUM})?)i")
_REAL = re.compile(rf"[+-]?{_NUM}")
_FULL = re.compile(rf"(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i")


def parse_complex(text: str) -> complex:
    """Parse ``a+bi`` style input: ``2i``, ``-i``, ``0.3-0.2i``, ``5``.  No spaces, no ``j``."""
    if not isinstance(text, str):
        raise InvalidInput(f"expected a string, got {text!r}")

    def _im(s):
        return float(s + "1") if s in ("", "+", "-") else float(s)

    if m := _PURE_IM.fullmatch(text):
        z = complex(0.0, _im(m["im"]))
    elif _REAL.fullmatch(text):
        z = complex(float(text), 0.0)
    elif m := _FULL.fullmatch(text):
        z = complex(float(m["re"]), _im(m["im"]))
    else:
        raise InvalidInput(f"cannot parse complex number {text!r} (expected a+bi)")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInput(f"non-finite complex number {text!r}")
    return z


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _as_complex(value, name: str) -> complex:
    """Request parameter to complex: ``"a+bi"``, ``[re, im]`` or a real number."""
    if isinstance(value, complex):
        z = value
    elif isinstance(value, str):
        z = parse_complex(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2 and \
            all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        z = complex(value[0], value[1])
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        z = complex(value)
    else:
        raise InvalidInput(f"parameter {name!r}: cannot read {value!r} as a complex number")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInput(f"parameter {name!r} is not finite")
    return z


def _as_real(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise InvalidInput(f"parameter {name!r}: expected a real number, got {value!r}")
    try:
        x = float(value)
    except ValueError:
        raise InvalidInput(f"parameter {name!r}: expected a real number, got {value!r}") from None
    if not math.isfinite(x):
        raise InvalidInput(f"parameter {name!r} is not finite")
    return x


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise InvalidInput(f"parameter {name!r}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and re.fullmatch(r"[+-]?\d+", value):
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise InvalidInput(f"parameter {name!r}: expected an integer, got {value!r}")


# -- request / report -----------------------------------------------------------

@dataclass
class Request:
    command: str
    params: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_TOL
    output_format: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidInput(f"unknown command {self.command!r}; expected one of {COMMANDS}")
        if not isinstance(self.params, dict):
            raise InvalidInput("params must be a key-value map")
        self.tolerance = _as_real(self.tolerance, "tolerance")
        if not self.tolerance > 0:
            raise InvalidInput("tolerance must be positive")
        if self.output_format not in ("json", "text"):
            raise InvalidInput(f"unknown output format {self.output_format!r}")

    @classmethod
    def from_json(cls, text: str) -> "Request":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"malformed JSON request: {exc}") from None
        if not isinstance(data, dict) or "command" not in data:
            raise InvalidInput("request must be an object with a 'command' field")
        unknown = set(data) - {"command", "params", "tolerance", "output_format"}
        if unknown:
            raise InvalidInput(f"unknown request fields {sorted(unknown)}")
        return cls(data["command"], data.get("params", {}), data.get("tolerance", DEFAULT_TOL),
                   data.get("output_format", "json"))

    def require(self, *names: str) -> None:
        missing = [n for n in names if self.params.get(n) is None]
        if missing:
            raise InvalidInput(f"{self.command}: missing parameters {missing}")


@dataclass
class Report:
    status: str
    payload: dict
    residuals: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"status": self.status, "payload": self.payload, "residuals": self.residuals}


# -- serialization ----------------------------------------------------------------

def cx(z: complex) -> list[float]:
    z = complex(z)
    return [_clean(z.real), _clean(z.imag)]


def _clean(x: float) -> float:
    # drop negative zero so equal inputs always print identically
    return 0.0 if x == 0 else float(x)


def cx_matrix(M) -> list:
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[cx(z) for z in row] for row in M]


def int_matrix(M: IntMatrix) -> list[list[int]]:
    return M.tolist()


def lattice_json(L: ComplexLattice) -> list[list[float]]:
    return [cx(L.l1), cx(L.l2)]


def point_json(x: TorusPoint) -> dict:
    return {"representative": cx(x.rep), "coords": [_clean(c) for c in x.coords]}


# -- commands -------------------------------------------------------------------------

def _boundary(req: Request):
    req.require("kind", "p", "tau2")
    kind = req.params["kind"]
    p = _as_int(req.params["p"], "p")
    tau2 = _as_complex(req.params["tau2"], "tau2")
    if kind == "central":
        req.require("tau3")
        return CentralPoint(tau2, _as_complex(req.params["tau3"], "tau3"), p)
    if kind == "peripheral":
        req.require("tau1")
        return PeripheralPoint(_as_complex(req.params["tau1"], "tau1"), tau2, p)
    raise InvalidInput(f"kind must be 'central' or 'peripheral', got {kind!r}")


def _boundary_json(b) -> dict:
    out = {"kind": b.kind, "p": b.p}
    if isinstance(b, CentralPoint):
        out.update(tau2=cx(b.tau2), tau3=cx(b.tau3))
    else:
        out.update(tau1=cx(b.tau1), tau2=cx(b.tau2))
    return out


def _probes(req: Request, M: float) -> list[complex]:
    count = _as_int(req.params.get("probes", 5), "probes")
    if not 2 <= count <= 1000:
        raise InvalidInput("probes must be between 2 and 1000")
    return default_probes(M, count)


def _family_residuals(fam, probes) -> dict:
    N = log_monodromy(fam.T)
    return {
        "limit_spread": limit_spread(fam.period_map, N, probes),
        "riemann_first_relation": max(
            riemann_residual(PolarizedHS(fam.period_map(t), fam.Q)) for t in probes),
        "monodromy_polarization": float(np.max(np.abs(
            (fam.T.T @ fam.Q @ fam.T - fam.Q).to_numpy()))),
    }


def _mhs_json(mhs: MixedHS) -> dict:
    return {"rank": mhs.rank, "W0": int_matrix(mhs.W0), "W1": int_matrix(mhs.W1),
            "F1": cx_matrix(mhs.F1)}


def cmd_reconstruct(req: Request) -> Report:
    b = _boundary(req)
    fam = family_from_boundary(b)
    probes = _probes(req, fam.M)
    rec = reconstruct_detailed(b, probes, req.tolerance)
    fib = rec.fiber
    if isinstance(fib.bundle, BundleUpToTorsion):
        bundle = {"kind": "up_to_torsion", "candidate": point_json(fib.bundle.candidate),
                  "order": fib.bundle.order, "coset_size": len(fib.bundle.coset)}
    else:
        bundle = {"kind": "exact", "point": point_json(fib.bundle.point)}
    payload = {
        "boundary": _boundary_json(b),
        "n_components": fib.n_components,
        "curve": lattice_json(fib.curve),
        "curve_tau": cx(fib.curve.tau),
        "shift": point_json(fib.shift),
        "bundle": bundle,
        "pairing": int_matrix(rec.pairing),
        "retraction": int_matrix(rec.retraction),
    }
    return Report("ok", payload, _family_residuals(fam, probes))


def cmd_limit_mhs(req: Request) -> Report:
    b = _boundary(req)
    fam = family_from_boundary(b)
    probes = _probes(req, fam.M)
    N = log_monodromy(fam.T)
    W0, W1 = weight_filtration(N)
    F_inf = limit_filtration(fam.period_map, N, probes, req.tolerance, bound=fam.M)
    mhs = MixedHS(fam.T.rows, W0, W1, F_inf)
    gr = graded_piece(mhs, req.tolerance)
    payload = {
        "boundary": _boundary_json(b),
        "T": int_matrix(fam.T),
        "N": int_matrix(N.N),
        "Q": int_matrix(fam.Q),
        "W0": int_matrix(W0),
        "W1": int_matrix(W1),
        "F_inf": cx_matrix(F_inf),
        "F_inf_meet_W1": cx_matrix(gr.hodge_vector),
        "gr1_basis": int_matrix(gr.quotient_basis),
        "curve": lattice_json(gr.curve),
        "probes": [cx(t) for t in probes],
    }
    return Report("ok", payload, _family_residuals(fam, probes))


def _cycle_data(req: Request) -> CycleData:
    req.require("n", "tau", "s1", "s2")
    n = _as_int(req.params["n"], "n")
    tau = _as_complex(req.params["tau"], "tau")
    if not tau.imag > 0:
        raise InvalidInput("Im(tau) must be positive")
    L = ComplexLattice(tau, 1.0)
    s = L.point(_as_real(req.params["s1"], "s1"), _as_real(req.params["s2"], "s2"))
    return CycleData(n, L, TorusPoint(L, s))


def cmd_forward(req: Request) -> Report:
    data = _cycle_data(req)
    mhs = build_cycle_mhs(data)
    tol = req.tolerance
    cls = extension_class(ExtensionProblem.from_mhs(mhs, tol),
                          build_retraction(mhs.W0, mhs.W1), tol)
    xi = (data.curve.tau, 1.0 + 0j)
    jump, back = loop_integral(data, xi)
    w0_rank, gr1_rank = e2_page(e1_differentials(working_components(data.n)))
    payload = {
        "n": data.n,
        "curve": lattice_json(data.curve),
        "shift": point_json(data.shift),
        "mhs": _mhs_json(mhs),
        "pairing": int_matrix(cycle_pairing(data)),
        "e2_ranks": [w0_rank, gr1_rank],
        "extension_class": point_json(cls.point),
        "loop_pieces": {"jump": cx(jump), "back_integral": cx(back)},
    }
    residuals = {
        "roundtrip_shift": cls.point.distance(data.shift),
        "loop_total": abs(jump + back),
    }
    return Report("ok", payload, residuals)


def cmd_extension_class(req: Request) -> Report:
    tol = req.tolerance
    if "n" in req.params:
        data = _cycle_data(req)
        mhs = build_cycle_mhs(data)
        prob = ExtensionProblem.from_mhs(mhs, tol)
        cls = extension_class(prob, build_retraction(mhs.W0, mhs.W1), tol)
        payload = {"source": "cycle", "curve": lattice_json(prob.curve),
                   "point": point_json(cls.point)}
        return Report("ok", payload, {"roundtrip_shift": cls.point.distance(data.shift)})
    b = _boundary(req)
    fam = family_from_boundary(b)
    probes = _probes(req, fam.M)
    rec = reconstruct_detailed(b, probes, tol)
    payload = {"source": "boundary", "boundary": _boundary_json(b),
               "curve": lattice_json(rec.problem.curve), "point": point_json(rec.fiber.shift)}
    return Report("ok", payload, {"limit_spread": limit_spread(fam.period_map,
                                                               log_monodromy(fam.T), probes)})


def cmd_verify(req: Request) -> Report:
    req.require("seed")
    seed = _as_int(req.params["seed"], "seed")
    cases = req.params.get("cases")
    cases = None if cases is None else _as_int(cases, "cases")
    if cases is not None and cases < 1:
        raise InvalidInput("cases must be positive")
    results = _verify.run_all(seed, cases, req.tolerance)
    for r in results:
        print(f"verify {r.name}: {'PASS' if r.passed else 'FAIL'} ({r.elapsed:.3f}s)",
              file=sys.stderr)
    checks = [r.as_dict() for r in results]
    payload = {"seed": seed, "cases": cases, "checks": checks,
               "passed": sum(r.passed for r in results), "total": len(results),
               "max_residual": max(r.max_residual for r in results)}
    status = "ok" if all(r.passed for r in results) else "error"
    return Report(status, payload, {r.name: r.max_residual for r in results})


_DISPATCH = {
    "reconstruct": cmd_reconstruct,
    "forward": cmd_forward,
    "extension-class": cmd_extension_class,
    "limit-mhs": cmd_limit_mhs,
    "verify": cmd_verify,
}


def run(request: Request) -> Report:
    """Execute one request.  Library errors propagate; an over-tolerance residual gives ``error``."""
    report = _DISPATCH[request.command](request)
    bad = {k: v for k, v in report.residuals.items() if not v < request.tolerance}
    if bad and report.status == "ok":
        report.status = "error"
        report.payload["error"] = f"residuals over tolerance: {sorted(bad)}"
    return report


# -- argument parsing ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", dest="output_format", choices=("json", "text"),
                        default="json")

    boundary = argparse.ArgumentParser(add_help=False)
    kind = boundary.add_mutually_exclusive_group()
    kind.add_argument("--central", dest="kind", action="store_const", const="central")
    kind.add_argument("--peripheral", dest="kind", action="store_const", const="peripheral")
    boundary.add_argument("--tau1", type=_complex_arg)
    boundary.add_argument("--tau2", type=_complex_arg)
    boundary.add_argument("--tau3", type=_complex_arg)
    boundary.add_argument("-p", "--p", type=int)
    boundary.add_argument("--probes", type=int, default=5, help="number of probe points")

    cycle = argparse.ArgumentParser(add_help=False)
    cycle.add_argument("--n", type=int, help="number of components")
    cycle.add_argument("--tau", type=_complex_arg, help="modulus of the base curve")
    cycle.add_argument("--s1", type=float)
    cycle.add_argument("--s2", type=float)

    parser = argparse.ArgumentParser(prog="abdegen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reconstruct", parents=[common, boundary],
                   help="degenerate fibre from a boundary point")
    sub.add_parser("limit-mhs", parents=[common, boundary],
                   help="weight and limit Hodge filtrations")
    sub.add_parser("forward", parents=[common, cycle], help="MHS of a cycle of ruled surfaces")
    sub.add_parser("extension-class", parents=[common, boundary, cycle],
                   help="extension class from a boundary point or cycle data")
    v = sub.add_parser("verify", parents=[common], help="run the self-test suite")
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--cases", type=int)
    r = sub.add_parser("run", help="execute a JSON request")
    r.add_argument("--request", required=True, help="path to a JSON file, or - for stdin")
    return parser


def _request_from_args(args) -> Request:
    if args.command == "run":
        try:
            if args.request == "-":
                text = sys.stdin.read()
            else:
                with open(args.request, encoding="utf-8") as fh:
                    text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read request: {exc}") from None
        return Request.from_json(text)
    skip = {"command", "tolerance", "output_format"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    if args.command == "extension-class" and "kind" not in params:
        params.pop("probes", None)
    return Request(args.command, params, args.tolerance, args.output_format)


def _to_jsonable(obj):
    if isinstance(obj, complex):
        return cx(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def format_report(report: Report, output_format: str = "json") -> str:
    if output_format == "json":
        return json.dumps(report.as_dict(), indent=2, default=_to_jsonable)
    lines = [f"status: {report.status}"]
    lines += [f"{k}: {json.dumps(v, default=_to_jsonable)}" for k, v in report.payload.items()]
    lines += [f"residual {k}: {v:.3e}" for k, v in report.residuals.items()]
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    fmt = getattr(args, "output_format", "json")
    start = time.perf_counter()
    try:
        request = _request_from_args(args)
        fmt = request.output_format
        report = run(request)
    except (InvalidInput, ValueError) as exc:
        report, code = Report("error", {"error": str(exc), "kind": type(exc).__name__}), EXIT_INVALID
    except (NumericalFailure, DegenerationError, ArithmeticError, np.linalg.LinAlgError) as exc:
        report, code = Report("error", {"error": str(exc), "kind": type(exc).__name__}), \
            EXIT_NUMERICAL
    else:
        code = EXIT_OK if report.status == "ok" else EXIT_NUMERICAL
    print(format_report(report, fmt))
    print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
