"""Command-line front end.

    noondamp figure1 [--n 2 3 4] [--min 0 --max 0.6 --steps 200] [--phi-fracs 1 0.75 0.5 0.25]
    noondamp figure2 [--n 2 3 4] [--min 0 --max 1 --steps 200]
    noondamp report  --n 2 --Gamma-t 0.1 [--gamma-t 0] [--Gamma1-t .. --Gamma2-t ..]
    noondamp verify  --n 2 --Gamma-t 0.1 [--starts 64 --seed 0] [--perturb 0.05]

All damping flags are dimensionless products (rate x time); ``--gamma-t`` is
the mean dephasing product.  Exit codes: 0 success, 1 usage error,
2 certificate failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .core import DampingParams, evolve_coefficients
from .measures import (
    UnsupportedCaseError,
    coherent_information,
    coherent_information_exact,
    distillable_entanglement_dephasing,
    eof_upper_bound,
    extremal_separable_state,
    relative_entropy_of_entanglement,
)
from .metrology import (
    best_phase_deviation,
    deviation_bounds_amplitude,
    distillation_phase_deviation,
    phase_deviation,
)
from .oracle import (
    stationarity_identity_residual,
    minimize_relative_entropy,
    partial_transpose_min_eigenvalue,
    perturbed_state,
    verify_extremality,
)

EXIT_OK, EXIT_USAGE, EXIT_CERT, EXIT_IO = 0, 1, 2, 3


def fmt(x) -> str:
    """12 significant digits, locale independent."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


def resolution(delta: float) -> float:
    return 0.0 if math.isinf(delta) else 1.0 / delta


@dataclass
class ScanSpec:
    n_photons: list[int] = field(default_factory=lambda: [2, 3, 4])
    mode: str = "dephasing"  # dephasing | amplitude | both
    lo: float = 0.0
    hi: float = 0.6
    steps: int = 200
    phi_fracs: list[float] = field(default_factory=lambda: [1.0, 0.75, 0.5, 0.25])
    out: str | None = None
    seed: int = 0
    fmt: str = "csv"

    def validate(self):
        if not self.lo < self.hi:
            raise ValueError("--min must be below --max")
        if self.steps < 2:
            raise ValueError("--steps must be at least 2")
        if any(not 0.0 < f <= 1.0 for f in self.phi_fracs):
            raise ValueError("--phi-fracs must lie in (0, 1]")
        if not self.n_photons or any(n < 1 for n in self.n_photons):
            raise ValueError("--n must list positive photon numbers")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def figure1_rows(spec: ScanSpec) -> tuple[list[str], list[list[float]]]:
    """Dephasing only: resolution at several phases, and of the distillation strategy."""
    if spec.mode != "dephasing":
        raise ValueError("figure1 needs the dephasing-only mode")
    spec.validate()
    header = ["gamma_t", "n"] + [f"res_phi_{f:g}" for f in spec.phi_fracs] + ["res_distill"]
    rows = []
    for n in spec.n_photons:
        for g in spec.grid():
            p = DampingParams.symmetric(n, 0.0, float(g))
            res = [resolution(phase_deviation(p, f * math.pi / (2 * n))) for f in spec.phi_fracs]
            e_d = distillable_entanglement_dephasing(n, float(g))
            rows.append([float(g), n, *res, 1.0 / distillation_phase_deviation(n, e_d)])
    return header, rows


def figure2_rows(spec: ScanSpec) -> tuple[list[str], list[list[float]]]:
    """Symmetric amplitude damping only: best direct resolution vs. distillation bounds."""
    if spec.mode != "amplitude":
        raise ValueError("figure2 needs the amplitude-only mode")
    spec.validate()
    header = ["Gamma_t", "n", "res_best", "res_dl", "res_du"]
    rows = []
    for n in spec.n_photons:
        for g in spec.grid():
            p = DampingParams.symmetric(n, float(g), 0.0)
            lower, upper = deviation_bounds_amplitude(p)
            rows.append([float(g), n, 1.0 / best_phase_deviation(p), 1.0 / lower, 1.0 / upper])
    return header, rows


def render_table(header, rows, style: str = "csv") -> str:
    if style == "json":
        records = [{k: _json_number(v) for k, v in zip(header, row)} for row in rows]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def run_figure1(spec: ScanSpec) -> str:
    return render_table(*figure1_rows(spec), spec.fmt)


def run_figure2(spec: ScanSpec) -> str:
    return render_table(*figure2_rows(spec), spec.fmt)


def params_from_args(args) -> DampingParams:
    amp = args.Gamma_t if args.Gamma_t is not None else 0.0
    amp1 = args.Gamma1_t if args.Gamma1_t is not None else amp
    amp2 = args.Gamma2_t if args.Gamma2_t is not None else amp
    phase = args.gamma_t if args.gamma_t is not None else 0.0
    return DampingParams(args.n[0], amp1, amp2, phase, phase, 1.0)


def _sigma_for(p: DampingParams, c, starts: int, seed: int):
    if p.is_symmetric:
        return extremal_separable_state(c), False
    sigma, _ = minimize_relative_entropy(c, n_starts=starts, seed=seed)
    return sigma, True


def run_report(p: DampingParams, starts: int = 64, seed: int = 0) -> dict:
    """Coefficients, entanglement measures, PPT value and best resolution at one point."""
    c = evolve_coefficients(p)
    record: dict = {
        "n": p.n_photons,
        "Gamma1_t": p.amp_t[0],
        "Gamma2_t": p.amp_t[1],
        "gamma_t": p.mean_phase_t,
        "c_00": c.c_00,
    }
    for m in range(1, p.n_photons + 1):
        record[f"c_{m}0"] = c.c_a[m - 1]
        record[f"c_0{m}"] = c.c_b[m - 1]
    record["c_off"] = c.c_off
    try:
        record["e_r"] = relative_entropy_of_entanglement(c)
        record["numeric"] = False
    except UnsupportedCaseError:
        sigma, e_r = minimize_relative_entropy(c, n_starts=starts, seed=seed)
        cert = verify_extremality(c, sigma, n_starts=starts, seed=seed)
        record["e_r"] = e_r
        record["numeric"] = True
        record["certificate_passed"] = cert.passed
        record["certificate_max_overlap"] = cert.max_product_overlap
    record["e_f_upper"] = eof_upper_bound(c)
    record["i_c"] = coherent_information(c)
    record["i_c_entropy_difference"] = coherent_information_exact(c)
    if p.gamma_amp_1 == 0.0 and p.gamma_amp_2 == 0.0:
        record["e_d"] = distillable_entanglement_dephasing(p.n_photons, p.mean_phase_t)
    record["ppt_min"] = partial_transpose_min_eigenvalue(c)
    best = best_phase_deviation(p)
    record["delta_phi_best"] = best
    record["best_res"] = 1.0 / best
    return record


def render_record(record: dict, style: str = "json") -> str:
    if style == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for k, v in record.items():
            writer.writerow([k, fmt(v)])
        return buf.getvalue()
    body = ",\n".join(f'  "{k}": {_json_value(v)}' for k, v in record.items())
    return "{\n" + body + "\n}\n"


def _json_number(v):
    if isinstance(v, int):
        return v
    text = fmt(v)
    return text if "inf" in text else float(text)


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return json.dumps(v)
    text = fmt(v)
    return f'"{text}"' if "inf" in text else text


def run_verify(p: DampingParams, starts: int = 64, seed: int = 0, perturb: float = 0.0):
    """Certificate text and whether it passed."""
    c = evolve_coefficients(p)
    sigma, numeric = _sigma_for(p, c, starts, seed)
    if perturb:
        sigma = perturbed_state(sigma, perturb)
    cert = verify_extremality(c, sigma, n_starts=starts, seed=seed)
    record = {
        "n": p.n_photons,
        "Gamma1_t": p.amp_t[0],
        "Gamma2_t": p.amp_t[1],
        "gamma_t": p.mean_phase_t,
        "numeric": numeric,
        "perturb": perturb,
        "passed": cert.passed,
        "trace_B_sigma": cert.trace_B_sigma,
        "max_product_overlap": cert.max_product_overlap,
        "K1": cert.argmax_params[0],
        "K2": cert.argmax_params[1],
        "theta1": cert.argmax_params[2],
        "theta2": cert.argmax_params[3],
        "eta": cert.argmax_params[4],
        "n_starts": cert.n_starts,
        "eps_cert": cert.eps_cert,
    }
    residual = stationarity_identity_residual(c, sigma)
    if not math.isnan(residual):
        record["identity_residual"] = residual
    return record, cert.passed


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noondamp", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, default_n):
        sp.add_argument("--n", type=int, nargs="+", default=default_n, help="photon number(s)")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=["csv", "json"], default=None, dest="fmt")

    for name, lo, hi in (("figure1", 0.0, 0.6), ("figure2", 0.0, 1.0)):
        sp = sub.add_parser(name)
        common(sp, [2, 3, 4])
        sp.add_argument("--min", type=float, default=lo, dest="lo")
        sp.add_argument("--max", type=float, default=hi, dest="hi")
        sp.add_argument("--steps", type=int, default=200)
        if name == "figure1":
            sp.add_argument("--phi-fracs", type=float, nargs="+", default=[1.0, 0.75, 0.5, 0.25])

    for name in ("report", "verify"):
        sp = sub.add_parser(name)
        common(sp, None)
        sp.add_argument("--Gamma-t", type=float, dest="Gamma_t")
        sp.add_argument("--Gamma1-t", type=float, dest="Gamma1_t")
        sp.add_argument("--Gamma2-t", type=float, dest="Gamma2_t")
        sp.add_argument("--gamma-t", type=float, dest="gamma_t")
        sp.add_argument("--starts", type=int, default=64)
        if name == "verify":
            sp.add_argument("--perturb", type=float, default=0.0, help="debug: shift d_N0 by this amount")
    return parser


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"noondamp: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("figure1", "figure2"):
            spec = ScanSpec(
                n_photons=args.n,
                mode="dephasing" if args.command == "figure1" else "amplitude",
                lo=args.lo,
                hi=args.hi,
                steps=args.steps,
                out=args.out,
                seed=args.seed,
                fmt=args.fmt or "csv",
            )
            if args.command == "figure1":
                spec.phi_fracs = args.phi_fracs
                text = run_figure1(spec)
            else:
                text = run_figure2(spec)
            return _emit(text, args.out)

        if args.n is None or len(args.n) != 1:
            parser.error(f"{args.command} needs exactly one --n")
        if args.starts < 1:
            parser.error("--starts must be >= 1")
        p = params_from_args(args)
        if args.command == "report":
            return _emit(render_record(run_report(p, args.starts, args.seed), args.fmt or "json"), args.out)
        record, passed = run_verify(p, args.starts, args.seed, args.perturb)
        status = _emit(render_record(record, args.fmt or "json"), args.out)
        if status != EXIT_OK:
            return status
        return EXIT_OK if passed else EXIT_CERT
    except ValueError as exc:
        print(f"noondamp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
