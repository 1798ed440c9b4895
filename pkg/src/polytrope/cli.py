"""Command-line front end.

Subcommands solve, table1, approx, noether and astro emit deterministic
CSV or JSON records (no timestamps, '.' decimal, fixed significant
digits), so output files can be diffed in regression tests.  Data goes
to stdout or --out; diagnostics go to stderr.  Exit codes: 0 success,
2 usage or domain error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import approximations, invariants, noether, stellar
from .lane_emden import as_index, derived_constants, integrate_emden

SCHEMA_VERSION = "1.0"

CONSTANTS_ENV = "POLYTROPE_CONSTANTS"


@dataclass
class OutputRecord:
    """One machine-readable result table plus its invocation metadata."""

    command: str
    params: dict
    columns: dict[str, list]
    schema_version: str = SCHEMA_VERSION

    def _fmt(self, value, digits: int) -> str:
        if isinstance(value, str):
            return value
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, f".{digits}g")

    def to_csv(self, digits: int = 12) -> str:
        lines = [f"# schema_version={self.schema_version}",
                 f"# command={self.command}"]
        for key, val in self.params.items():
            lines.append(f"# {key}={self._fmt(val, digits) if isinstance(val, float) else val}")
        names = list(self.columns)
        lines.append(",".join(names))
        length = len(next(iter(self.columns.values()))) if self.columns else 0
        for i in range(length):
            lines.append(",".join(self._fmt(self.columns[c][i], digits)
                                  for c in names))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def clean(value):
            if isinstance(value, str):
                return value
            v = float(value)
            return v if math.isfinite(v) else None

        payload = {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": {k: (clean(v) if isinstance(v, (int, float)) else v)
                       for k, v in self.params.items()},
            "columns": {name: [clean(v) for v in col]
                        for name, col in self.columns.items()},
        }
        return json.dumps(payload, indent=2) + "\n"

    def write(self, stream, fmt: str, digits: int = 12) -> None:
        stream.write(self.to_csv(digits) if fmt == "csv" else self.to_json())


def _parse_grid(spec: str | None, lo: float, hi: float) -> np.ndarray:
    """Grid flag: 'num', 'start:stop' or 'start:stop:num'."""
    if spec is None:
        return np.linspace(lo, hi, 201)
    parts = spec.split(":")
    try:
        if len(parts) == 1:
            return np.linspace(lo, hi, int(parts[0]))
        if len(parts) == 2:
            return np.linspace(float(parts[0]), float(parts[1]), 201)
        if len(parts) == 3:
            return np.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ValueError(f"bad grid spec {spec!r}: {exc}") from None
    raise ValueError(f"bad grid spec {spec!r}; use NUM, A:B or A:B:NUM")


def _load_constants(args) -> stellar.PhysicalConstants:
    path = getattr(args, "constants", None) or os.environ.get(CONSTANTS_ENV)
    if path:
        return stellar.PhysicalConstants.from_file(path)
    return stellar.DEFAULT_CONSTANTS


def cmd_solve(args) -> OutputRecord:
    idx = as_index(args.n)
    sol = integrate_emden(idx, tol=args.tol, xi_max=args.xi_max)
    grid = _parse_grid(args.grid, 0.0, sol.xi_end)
    if np.any(grid < 0.0) or np.any(grid > sol.xi_end * (1 + 1e-12)):
        raise ValueError(
            f"grid outside the solution domain [0, {sol.xi_end:.6g}]"
        )
    th, dth = sol.evaluate(grid)
    th = np.atleast_1d(th)
    dth = np.atleast_1d(dth)
    nn = idx.n

    u = np.empty_like(grid)
    v = np.empty_like(grid)
    om = np.empty_like(grid)
    if sol.xi1 is not None:
        at_surface = grid >= sol.xi1 * (1.0 - 1e-13)
    else:
        at_surface = np.zeros_like(grid, dtype=bool)
    inner = ~at_surface
    state = invariants.invariants_at(sol, grid[inner])
    u[inner] = state.u
    v[inner] = state.v
    om[inner] = state.omega
    if np.any(at_surface):
        der = derived_constants(sol)
        u[at_surface] = 0.0
        v[at_surface] = np.inf
        om[at_surface] = der.omega0
    w = nn * v
    z = 3.0 - u

    slope = sol.surface_slope
    m_frac = -(grid**2) * dth / slope
    if sol.xi1 is not None:
        r_frac = grid / sol.xi1
    else:
        r_frac = np.full_like(grid, np.nan)

    params = {"n": nn, "tol": args.tol,
              "xi1": sol.xi1 if sol.xi1 is not None else math.inf,
              "digits": args.digits}
    cols = {
        "xi": list(grid), "theta": list(th), "dtheta": list(dth),
        "u": list(u), "v": list(v), "w": list(w), "z": list(z),
        "omega": list(om),
        "rho_frac": list(np.clip(th, 0.0, None) ** nn),
        "m_frac": list(m_frac), "r_frac": list(r_frac),
    }
    return OutputRecord(command="solve", params=params, columns=cols)


def _mass_radius_exponent(nn: float) -> float:
    if nn == 3.0:
        return math.inf
    if nn == 5.0:
        return math.nan
    return (1.0 - nn) / (3.0 - nn)


def cmd_table1(args) -> OutputRecord:
    n_values = [float(s) for s in args.n_list.split(",") if s.strip() != ""]
    rows = []
    for nn in n_values:
        idx = as_index(nn)
        der = derived_constants(integrate_emden(idx, tol=args.tol))
        rows.append({
            "n": nn,
            "omega_tilde": idx.omega_tilde if idx.omega_defined else math.nan,
            "xi1": der.xi1,
            "rho_ratio": der.rho_ratio,
            "omega0": der.omega0,
            "r_core_frac": der.r_core_frac,
            "m_core_frac": der.m_core_frac,
            "mr_exponent": _mass_radius_exponent(nn),
        })
    cols: dict[str, list] = {key: [row[key] for row in rows] for key in rows[0]}
    if args.format == "csv":
        for i, nn in enumerate(n_values):
            if nn == 1.0:
                cols["omega0"][i] = "..."
                cols["omega_tilde"][i] = "+/-inf"
    params = {"n_list": args.n_list, "tol": args.tol, "digits": args.digits}
    return OutputRecord(command="table1", params=params, columns=cols)


def cmd_approx(args) -> OutputRecord:
    idx = as_index(args.n)
    sol = integrate_emden(idx, tol=args.tol)
    grid = _parse_grid(args.grid, 0.0, sol.xi_end)
    if args.kinds.strip().lower() == "all":
        kinds = "all"
    else:
        kinds = [s for s in args.kinds.split(",") if s.strip()]
    report = approximations.approx_error_report(idx.n, kinds, grid, sol=sol,
                                                tol=args.tol)
    cols: dict[str, list] = {"xi": list(report.xi),
                             "theta": list(report.theta_ref)}
    for label, vals in report.values.items():
        cols[label] = list(vals)
        cols[f"{label}_err"] = list(report.errors[label])
    if report.picard_above is not None:
        cols["picard_above"] = [int(b) for b in report.picard_above]
    params = {"n": idx.n, "tol": args.tol, "kinds": args.kinds,
              "digits": args.digits}
    return OutputRecord(command="approx", params=params, columns=cols)


def cmd_noether(args) -> OutputRecord:
    idx = as_index(args.n)
    sol = integrate_emden(idx, tol=args.tol, xi_max=args.xi_max)
    grid = _parse_grid(args.grid, 0.0, sol.xi_end)
    diag = noether.nonconservation_residual(sol, grid)
    params = {"n": idx.n, "tol": args.tol,
              "max_residual": diag.max_residual, "digits": args.digits}
    cols = {"xi": list(diag.xi), "g": list(diag.g),
            "dg_numeric": list(diag.dg_numeric), "rhs": list(diag.rhs),
            "residual": list(diag.residual),
            "internal_term": list(diag.internal_term),
            "gradient_term": list(diag.gradient_term)}
    return OutputRecord(command="noether", params=params, columns=cols)


def cmd_astro(args) -> OutputRecord:
    constants = _load_constants(args)
    if args.astro_command == "chandrasekhar":
        res = stellar.chandrasekhar_mass(args.mu_e, constants)
        params = {"subcommand": "chandrasekhar", "digits": args.digits}
        cols = {"mu_e": [res.mu_e], "K_wd": [res.K_wd], "M_ch": [res.mass],
                "M_ch_Msun": [res.mass / constants.M_sun],
                "M_ch_closed_form": [res.mass_closed_form],
                "M_star": [res.m_star],
                "M_star_Msun": [res.m_star / constants.M_sun]}
        return OutputRecord(command="astro", params=params, columns=cols)
    if args.astro_command == "eddington":
        M = args.mass * constants.M_sun
        model = stellar.eddington_beta(M, args.mu, constants)
        params = {"subcommand": "eddington", "digits": args.digits}
        cols = {"mass_Msun": [args.mass], "mu": [args.mu],
                "beta": [model.beta], "L_frac": [model.L_frac],
                "K_M": [model.K_M],
                "M_star_Msun": [model.m_star / constants.M_sun]}
        if args.kappa_p is not None:
            lum = stellar.luminosity(model, args.kappa_p, constants)
            cols["L_edd"] = [lum.L_edd]
            cols["L"] = [lum.L]
            cols["L_calibrated"] = [lum.L_calibrated]
        return OutputRecord(command="astro", params=params, columns=cols)
    if args.astro_command == "entropy":
        res = stellar.entropy_structure(args.n, args.T, args.rho, args.mu,
                                        constants)
        params = {"subcommand": "entropy", "digits": args.digits}
        cols = {"n": [args.n], "T": [args.T], "rho": [args.rho],
                "mu": [args.mu], "prad_pgas": [res.prad_pgas],
                "s_rad": [res.s_rad], "s_gas": [res.s_gas],
                "ds_gas_dlogP": [res.ds_gas_dlogP], "nabla": [res.nabla],
                "nabla_ad": [res.nabla_ad]}
        return OutputRecord(command="astro", params=params, columns=cols)
    raise ValueError(f"unknown astro subcommand {args.astro_command!r}")


def _add_common(p: argparse.ArgumentParser, tol_default: float = 1e-10) -> None:
    p.add_argument("--tol", type=float, default=tol_default,
                   help="integrator relative tolerance (default %(default)s)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--digits", type=int, default=12,
                   help="significant digits in CSV output")
    p.add_argument("--constants", default=None,
                   help=f"constants config file (or ${CONSTANTS_ENV})")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polytrope",
        description="Polytropic hydrostatics: Lane-Emden solutions, homology "
                    "invariants, closed-form approximants and stellar models.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="integrate one index and tabulate profiles")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--grid", default=None, help="NUM, A:B or A:B:NUM")
    p.add_argument("--xi-max", type=float, default=100.0,
                   help="integration span for n=5")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table1", help="derived-constants summary per index")
    p.add_argument("--n-list", default="0,1,1.5,2,3,4,4.5,5")
    _add_common(p, tol_default=1e-12)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("approx", help="approximant values and errors")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--kinds", default="all",
                   help="comma list of taylor6|taylor10|picard|pade3, or 'all'")
    p.add_argument("--grid", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("noether", help="scaling-charge diagnostics")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--grid", default=None)
    p.add_argument("--xi-max", type=float, default=100.0)
    _add_common(p)
    p.set_defaults(func=cmd_noether)

    p = sub.add_parser("astro", help="n=3 astrophysics")
    astro_sub = p.add_subparsers(dest="astro_command", required=True)

    pc = astro_sub.add_parser("chandrasekhar")
    pc.add_argument("--mu-e", type=float, default=2.0)
    _add_common(pc)
    pc.set_defaults(func=cmd_astro)

    pe = astro_sub.add_parser("eddington")
    pe.add_argument("--mass", type=float, required=True,
                    help="stellar mass in solar masses")
    pe.add_argument("--mu", type=float, default=0.61,
                    help="mean molecular weight (default 0.61, a solar-"
                         "composition convention)")
    pe.add_argument("--kappa-p", type=float, default=None,
                    help="photospheric opacity; enables luminosity output")
    _add_common(pe)
    pe.set_defaults(func=cmd_astro)

    pn = astro_sub.add_parser("entropy")
    pn.add_argument("--n", type=float, required=True)
    pn.add_argument("--T", type=float, default=1.5e7)
    pn.add_argument("--rho", type=float, default=1.5e4)
    pn.add_argument("--mu", type=float, default=0.61)
    _add_common(pn)
    pn.set_defaults(func=cmd_astro)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        record = args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            record.write(fh, args.format, args.digits)
    else:
        record.write(sys.stdout, args.format, args.digits)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
