"""Command-line driver: reproduce the tables, solve single states, emit
wavefunction data.

Examples
--------
    diracaim table1 --format pretty
    diracaim table2 --format csv --out table2.csv
    diracaim coulomb --d 3 --tau -1 --j 1/2 --n 0 --A 0.5
    diracaim solve --family confined --state 3p3/2
    diracaim wavefunction --state 3p3/2 --out fig/3p32
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shlex
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .coulomb import coulomb_energy, coulomb_state
from .engine import scan_brackets, solve_eigenvalue
from .errors import DiracAimError, NoSignChange, NotConverged
from .models import (ELECTRON_MASS_KEV, ConfinedProblem, CoulombProblem, LinearConfined,
                     PureCoulomb, ScreenedCoulomb, ScreenedProblem, channel_from_k,
                     make_channel, parse_label)
from .shooting import match_eigenvalue, radial_solution
from .wavefunction import DEFAULT_ORDER, generate_wavefunction, reconstruct

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
TABLE1_Z = (20, 30, 40, 50, 60, 70, 80)
TABLE2_K = (-1, 1, -2, 2, -3)
CONFINED_SCAN = (1.0, 3.0)


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[dict] = field(default_factory=list)


def _fmt(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return ""
        return f"{v:.9g}"
    return "" if v is None else str(v)


def _json_value(v):
    if isinstance(v, float):
        return float(f"{v:.9g}") if math.isfinite(v) else None
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_fmt(row.get(c)) for c in table.columns])
        return buf.getvalue()
    if fmt == "json":
        data = {"table": table.name, "columns": table.columns,
                "rows": [{c: _json_value(r.get(c)) for c in table.columns} for r in table.rows]}
        return json.dumps(data, indent=2) + "\n"
    cells = [[_fmt(r.get(c)) for c in table.columns] for r in table.rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(table.columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(table.columns, widths)),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(x.rjust(w) for x, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ computations
def _screened_bracket(problem: ScreenedProblem):
    e = problem.estimate()
    nxt = ScreenedProblem(problem.channel.with_n(problem.channel.n + 1), problem.potential,
                          r0=problem.r0).estimate()
    return e - 1e-4 * (problem.m - e), 0.5 * (e + nxt)


def cmd_table1(Z_list=TABLE1_Z, k=-1, r0=None, depth=None, tol=1e-9, mass=1.0,
               oracle=True) -> Table:
    """Ground states of the screened Coulomb potential for each Z."""
    t = Table("table1", ["Z", "E", "keV", "E_oracle", "keV_oracle", "depth", "r0", "status"])
    for Z in Z_list:
        row = {"Z": int(Z) if float(Z).is_integer() else Z}
        try:
            prob = ScreenedProblem(channel_from_k(k, 0), ScreenedCoulomb(Z, mass), r0=r0)
            res = solve_eigenvalue(prob, _screened_bracket(prob), depth, tol)
            row.update(E=res.energy, keV=(res.energy - mass) * ELECTRON_MASS_KEV,
                       depth=res.iterations_used, r0=res.r0, status="ok")
            if oracle:
                eo = match_eigenvalue(prob.potential, prob.channel,
                                      (res.energy - 1e-4, min(res.energy + 1e-4, 0.99999999)))
                row.update(E_oracle=eo, keV_oracle=(eo - mass) * ELECTRON_MASS_KEV)
        except (DiracAimError, ValueError) as exc:
            row["status"] = f"{type(exc).__name__}: {exc}"
        t.rows.append(row)
    return t


def confined_states(pot: LinearConfined, k, count=3, r0=1.5, depth=None, tol=1e-9,
                    scan=CONFINED_SCAN, grid=200):
    """AIM results for the lowest ``count`` states of one k channel."""
    scan_prob = ConfinedProblem(channel_from_k(k, 0), pot, r0)
    brackets = scan_brackets(scan_prob, scan, grid, 20)
    out = []
    for n in range(count):
        prob = ConfinedProblem(channel_from_k(k, n), pot, r0)
        if n >= len(brackets):
            out.append((prob, NoSignChange(f"no bracket for n={n} in {scan}")))
            continue
        try:
            out.append((prob, solve_eigenvalue(prob, brackets[n], depth, tol)))
        except DiracAimError as exc:
            out.append((prob, exc))
    return out


def cmd_table2(A=0.5, B1=0.1, B2=0.2, mass=1.0, r0=None, depth=None, tol=1e-9,
               oracle=True) -> Table:
    """Fifteen states of the linear-plus-Coulomb problem."""
    pot = LinearConfined(A, B1, B2, mass)
    t = Table("table2", ["k", "n", "label", "E", "E_oracle", "difference", "depth", "status"])
    for k in TABLE2_K:
        for prob, res in confined_states(pot, k, 3, 1.5 if r0 is None else r0, depth, tol):
            ch = prob.channel
            row = {"k": k, "n": ch.n, "label": ch.label}
            if isinstance(res, Exception):
                row["status"] = f"{type(res).__name__}: {res}"
            else:
                row.update(E=res.energy, depth=res.iterations_used, status="ok")
                if oracle:
                    try:
                        eo = match_eigenvalue(pot, ch, (res.energy - 1e-3, res.energy + 1e-3))
                        row.update(E_oracle=eo, difference=res.energy - eo)
                    except DiracAimError as exc:
                        row["status"] = f"oracle {type(exc).__name__}"
            t.rows.append(row)
    return t


def coulomb_aim(channel, A, mass=1.0, r0=2.0, depth=None, tol=1e-9):
    """AIM solve bracketed between the neighbouring closed-form levels."""
    e = coulomb_energy(channel, A, mass)
    lo = coulomb_energy(channel.with_n(channel.n - 1), A, mass) if channel.n else 0.0
    hi = coulomb_energy(channel.with_n(channel.n + 1), A, mass)
    prob = CoulombProblem(channel, PureCoulomb(A, mass), r0)
    return solve_eigenvalue(prob, (0.5 * (lo + e) if channel.n else 0.5 * e, 0.5 * (e + hi)),
                            depth, tol)


def cmd_coulomb(d, tau, j, n, A, sign=1, mass=1.0, r0=2.0, depth=None, tol=1e-9) -> Table:
    """Closed-form versus AIM energy for one Coulomb level.

    For sign=-1 the AIM run uses the charge-conjugate channel (k -> -k)
    and reports the negated energy.
    """
    ch = make_channel(d, tau, j, n)
    exact = coulomb_energy(ch, A, mass, sign)
    solve_ch = ch if sign > 0 else make_channel(d, -tau, j, n)
    st = coulomb_state(solve_ch, A, mass)
    res = coulomb_aim(solve_ch, A, mass, r0, depth, tol)
    e_aim = sign * res.energy
    t = Table("coulomb", ["d", "k_d", "n", "label", "E_exact", "E_aim", "difference",
                          "a", "b", "gamma", "depth"])
    t.rows.append({"d": d, "k_d": _num(ch.k_frac), "n": n, "label": ch.label, "E_exact": exact,
                   "E_aim": e_aim, "difference": e_aim - exact, "a": st.a, "b": st.b,
                   "gamma": st.gamma, "depth": res.iterations_used})
    return t


def _num(f: Fraction):
    return int(f) if f.denominator == 1 else float(f)


def _family_problem(args, channel):
    fam = args.family
    if fam == "coulomb":
        return CoulombProblem(channel, PureCoulomb(args.A, args.mass), 2.0 if args.r0 is None else args.r0)
    if fam == "screened":
        if args.Z is None or len(args.Z) != 1:
            raise ValueError("--family screened needs exactly one --Z")
        return ScreenedProblem(channel, ScreenedCoulomb(args.Z[0], args.mass), args.r0)
    return ConfinedProblem(channel, LinearConfined(args.A, args.B1, args.B2, args.mass),
                           1.5 if args.r0 is None else args.r0)


def _channel(args):
    if args.state:
        if args.d != 3:
            raise ValueError("--state labels are three-dimensional")
        return parse_label(args.state)
    if args.k is not None:
        return channel_from_k(Fraction(args.k), args.n, args.d)
    return make_channel(args.d, args.tau, Fraction(args.j), args.n)


def solve_state(args, channel):
    """Pick a bracket for the family and run the AIM solve."""
    prob = _family_problem(args, channel)
    if args.Emin is not None and args.Emax is not None:
        return prob, solve_eigenvalue(prob, (args.Emin, args.Emax), args.depth, args.tol)
    if isinstance(prob, CoulombProblem):
        return prob, coulomb_aim(channel, args.A, args.mass, prob.r0, args.depth, args.tol)
    if isinstance(prob, ScreenedProblem):
        return prob, solve_eigenvalue(prob, _screened_bracket(prob), args.depth, args.tol)
    states = confined_states(prob.potential, channel.k_frac, channel.n + 1, prob.r0,
                             args.depth, args.tol, grid=args.grid)
    res = states[channel.n][1]
    if isinstance(res, Exception):
        raise res
    return prob, res


def cmd_solve(args) -> Table:
    ch = _channel(args)
    prob, res = solve_state(args, ch)
    t = Table("solve", ["family", "label", "k_d", "n", "E", "depth", "r0", "delta_residual",
                        "E_oracle"])
    row = {"family": args.family, "label": ch.label, "k_d": _num(ch.k_frac), "n": ch.n,
           "E": res.energy, "depth": res.iterations_used, "r0": res.r0,
           "delta_residual": res.delta_residual}
    if args.oracle:
        width = 1e-4 if args.family != "confined" else 1e-3
        hi = res.energy + width if args.family == "confined" else min(res.energy + width,
                                                                      args.mass * (1 - 1e-12))
        row["E_oracle"] = match_eigenvalue(prob.potential, ch, (res.energy - width, hi))
    t.rows.append(row)
    return t


def cmd_wavefunction(args) -> list[Table]:
    """Coefficient table, radial samples and spinor-orbit samples."""
    ch = _channel(args)
    prob, res = solve_state(args, ch)
    table_gen = generate_wavefunction(prob, res.energy, args.K)
    coef = Table("coefficients", ["k", "a_k", "b_k"])
    a, b = table_gen.scaled_coefficients(args.a0) if args.a0 else (table_gen.poly_g, table_gen.poly_f)
    for i in range(args.K + 1):
        coef.rows.append({"k": i, "a_k": float(a[i]), "b_k": float(b[i])})
    sample_gen = generate_wavefunction(prob, res.energy, args.sample_order)
    r = np.linspace(args.rmax / args.points, args.rmax, args.points)
    G, F = reconstruct(sample_gen, r)
    radial = Table("radial", ["r", "G", "F"],
                   [{"r": float(x), "G": float(g), "F": float(f)} for x, g, f in zip(r, G, F)])
    orbit = Table("orbit", ["F", "G"],
                  [{"F": float(f), "G": float(g)} for g, f in zip(G, F)])
    return [coef, radial, orbit]


# ---------------------------------------------------------------- parsing
def _add_common(p):
    p.add_argument("--config", help="flat 'key = value' file mirroring the flags")
    p.add_argument("--r0", type=float, help="AIM expansion point")
    p.add_argument("--depth", type=int, help="maximum AIM depth")
    p.add_argument("--tol", type=float, default=1e-9, help="successive-depth agreement in E")
    p.add_argument("--format", choices=("csv", "json", "pretty"), default="pretty")
    p.add_argument("--out", help="output path (prefix for wavefunction)")
    p.add_argument("--mass", type=float, default=1.0)


def _add_state(p, family_default):
    p.add_argument("--family", choices=("coulomb", "screened", "confined"), default=family_default)
    p.add_argument("--state", help="spectroscopic label, e.g. 3p3/2")
    p.add_argument("--k", help="k_d (alternative to --tau/--j)")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--tau", type=int, default=-1)
    p.add_argument("--j", default="1/2")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--A", type=float, default=0.5)
    p.add_argument("--B1", type=float, default=0.1)
    p.add_argument("--B2", type=float, default=0.2)
    p.add_argument("--Z", type=float, nargs="+")
    p.add_argument("--Emin", type=float)
    p.add_argument("--Emax", type=float)
    p.add_argument("--grid", type=int, default=200, help="scan points for confined states")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diracaim", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="screened-Coulomb ground states by Z")
    _add_common(p)
    p.add_argument("--Z", type=float, nargs="*", default=list(TABLE1_Z))
    p.add_argument("--k", type=int, default=-1)
    p.add_argument("--no-oracle", dest="oracle", action="store_false")

    p = sub.add_parser("table2", help="linear-plus-Coulomb spectrum")
    _add_common(p)
    p.add_argument("--A", type=float, default=0.5)
    p.add_argument("--B1", type=float, default=0.1)
    p.add_argument("--B2", type=float, default=0.2)
    p.add_argument("--no-oracle", dest="oracle", action="store_false")

    p = sub.add_parser("coulomb", help="closed-form versus AIM Coulomb level")
    _add_common(p)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--tau", type=int, default=-1)
    p.add_argument("--j", default="1/2")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--A", type=float, default=0.5)
    p.add_argument("--sign", choices=("+", "-"), default="+")

    p = sub.add_parser("solve", help="one eigenvalue of any family")
    _add_common(p)
    _add_state(p, "confined")
    p.add_argument("--oracle", action="store_true", help="also run the shooting oracle")

    p = sub.add_parser("wavefunction", help="coefficients and sampled G, F")
    _add_common(p)
    _add_state(p, "confined")
    p.add_argument("--K", type=int, default=DEFAULT_ORDER, help="order of the coefficient table")
    p.add_argument("--sample-order", type=int, default=100,
                   help="polynomial order used for the sampled curves")
    p.add_argument("--a0", type=float, help="rescale coefficients so a_0 takes this value")
    p.add_argument("--rmax", type=float, default=8.0)
    p.add_argument("--points", type=int, default=400)
    return parser


def _config_tokens(path: str) -> list[str]:
    tokens = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.lstrip("-")
        if value.lower() in ("true", "yes"):
            tokens.append(flag)
        elif value.lower() not in ("false", "no"):
            tokens += [flag, *shlex.split(value)]
    return tokens


def _with_config(argv: list[str]) -> list[str]:
    """Splice config-file flags in front of the command-line ones."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ValueError("--config needs a path")
    path = argv[i + 1]
    rest = argv[:i] + argv[i + 2:]
    if not rest:
        raise ValueError("missing subcommand")
    return [rest[0], *_config_tokens(path), *rest[1:]]


def _emit(tables: list[Table], fmt: str, out: str | None):
    ext = {"csv": ".csv", "json": ".json", "pretty": ".txt"}[fmt]
    if out is None:
        sys.stdout.write("\n".join(render(t, fmt) for t in tables))
        return
    if len(tables) == 1:
        Path(out).write_text(render(tables[0], fmt))
        return
    base = Path(out)
    base.parent.mkdir(parents=True, exist_ok=True)
    for t in tables:
        Path(f"{base}_{t.name}{ext}").write_text(render(t, fmt))


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_with_config(argv))
    except (ValueError, OSError) as exc:
        print(f"diracaim: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.r0 is not None and args.r0 <= 0:
        print("diracaim: --r0 must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "table1":
            tables = [cmd_table1(args.Z, args.k, args.r0, args.depth, args.tol, args.mass, args.oracle)]
        elif args.command == "table2":
            tables = [cmd_table2(args.A, args.B1, args.B2, args.mass, args.r0, args.depth,
                                 args.tol, args.oracle)]
        elif args.command == "coulomb":
            tables = [cmd_coulomb(args.d, args.tau, Fraction(args.j), args.n, args.A,
                                  1 if args.sign == "+" else -1, args.mass,
                                  2.0 if args.r0 is None else args.r0, args.depth, args.tol)]
        elif args.command == "solve":
            tables = [cmd_solve(args)]
        else:
            tables = cmd_wavefunction(args)
    except (NotConverged, NoSignChange) as exc:
        hist = getattr(exc, "history", None)
        extra = f" (last depth {hist[-1][0]}, delta {exc.last_delta:.3e})" if hist else ""
        print(f"diracaim: no convergence: {exc}{extra}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DiracAimError, ValueError) as exc:
        print(f"diracaim: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _emit(tables, args.format, args.out)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
