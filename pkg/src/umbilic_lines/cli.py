"""Scenario-driven command line front end.

    umbilic-lines --scenario FILE [--out DIR] [--svg] [--tol X] [--seed N] COMMAND ...

Commands: classify U0 | portrait U0 | flow U,V FOLIATION | holonomy |
closure | verify-forms. Reports go to stdout and to
<out>/<scenario>/<command>/; CSV files are the stable contract, SVG figures
are rendered only with --svg.

Exit codes: 0 success, 1 hypothesis violation, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import blowup, holonomy, lineode, verify
from .curvebuild import closure_check
from .errors import (AmbiguousStartError, ConfigError, HypothesisViolationError,
                     OutOfStripError, ProfileSpecError, UmbilicLinesError)
from .scenario import Scenario, load_scenario

FMT = "%.17g"


def _write(outdir: Path, name: str, text: str) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text)
    return path


def _print_and_save(outdir: Path, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    _write(outdir, "report.txt", text)


def cmd_closure(args, scenario: Scenario, outdir: Path) -> int:
    scenario.require_profiles(("tau",))
    tol = args.tol if args.tol is not None else scenario.tolerance("closure")
    rep = closure_check(scenario.profiles["tau"], scenario.l, tol)
    _print_and_save(outdir, [f"scenario: {scenario.name}", "command : closure"] + rep.lines())
    return 0


def cmd_classify(args, scenario: Scenario, outdir: Path) -> int:
    spec = scenario.surface_spec()
    tol = args.tol if args.tol is not None else scenario.tolerance("jet")
    inv = blowup.local_invariants(spec, args.u0, tol)
    lines = [f"scenario: {scenario.name}", f"command : classify {args.u0:g}"]
    report = None
    if inv.case == "transversal":
        kp, a0 = inv.kprime, inv.a0
        root = math.sqrt(a0 * a0 + 4.0 * kp * kp)
        p_plus = (a0 + root) / (2.0 * kp)
        p_minus = (a0 - root) / (2.0 * kp)
        lines += [
            "case        : transversal (both foliations cross the umbilic curve)",
            f"jets        : k'={kp:.9g} a={a0:.9g}",
            f"crossing slopes: p+ = {p_plus:.9g}, p- = {p_minus:.9g} (product {p_plus*p_minus:.6g})",
            "verdict     : transversal",
        ]
    elif inv.case == "tangential":
        beta = -inv.ksecond / (2.0 * inv.a0)
        lines += [
            "case        : tangential (one foliation has quadratic contact)",
            f"jets        : k''={inv.ksecond:.9g} a={inv.a0:.9g}",
            f"contact parabola: v = {beta:.9g} * (u - u0)^2",
            "verdict     : tangential",
        ]
    elif inv.case == "darboux_like":
        report = blowup.classify_point(spec, args.u0, tol)
        lines += report.lines()
    elif inv.case == "a_zero":
        report = blowup.a_zero_blowup(inv.a1)
        lines += [f"case        : a_zero (transversal zero of a at u0={args.u0:g})",
                  f"a1          : {inv.a1:.9g}"]
        lines += report.lines()
    else:
        lines += ["case        : degenerate (no supported normal form applies)",
                  "verdict     : degenerate"]
    _print_and_save(outdir, lines)
    if report is not None:
        rows = ["p,lambda1,lambda2,kind"]
        for s in report.singularities:
            rows.append(f"{FMT % s.p},{FMT % s.lambda1},{FMT % s.lambda2},{s.kind}")
        _write(outdir, "singularities.csv", "\n".join(rows) + "\n")
    if args.svg and inv.case in ("darboux_like", "a_zero"):
        jet = (blowup.darboux_jet(inv.A, inv.B) if inv.case == "darboux_like"
               else blowup.a_zero_jet(inv.a1))
        census = blowup.phase_portrait_oracle(jet)
        from .plotting import plot_portrait
        outdir.mkdir(parents=True, exist_ok=True)
        plot_portrait(census, jet, outdir / "portrait.svg")
    return 0


def cmd_portrait(args, scenario: Scenario, outdir: Path) -> int:
    spec = scenario.surface_spec()
    tol = args.tol if args.tol is not None else scenario.tolerance("jet")
    inv = blowup.local_invariants(spec, args.u0, tol)
    if inv.case == "darboux_like":
        jet = blowup.darboux_jet(inv.A, inv.B)
        expected = blowup.classify_invariants(inv.A, inv.B).verdict
    elif inv.case == "a_zero":
        jet = blowup.a_zero_jet(inv.a1)
        expected = blowup.a_zero_blowup(inv.a1).verdict
    else:
        raise HypothesisViolationError(
            f"portrait requires a darboux_like or a_zero point; got {inv.case!r} at u0={args.u0}")
    census = blowup.phase_portrait_oracle(jet)
    lines = [f"scenario: {scenario.name}", f"command : portrait {args.u0:g}"]
    lines += census.lines()
    lines.append(f"eigenvalue census verdict: {expected}")
    lines.append(f"portrait matches census  : {str(census.verdict == expected).lower()}")
    _print_and_save(outdir, lines)
    rows = ["foliation,theta,slope"]
    for fol in (0, 1):
        for th in census.rays[fol]:
            rows.append(f"{fol+1},{FMT % th},{FMT % math.tan(th)}")
    _write(outdir, "rays.csv", "\n".join(rows) + "\n")
    rows = ["foliation,theta_mid,end_forward,end_backward,sector_type"]
    for p in census.probes:
        rows.append(f"{p.foliation},{FMT % p.theta_start},{p.ends[0]},{p.ends[1]},{p.sector_type}")
    _write(outdir, "probes.csv", "\n".join(rows) + "\n")
    if args.svg:
        from .plotting import plot_portrait
        outdir.mkdir(parents=True, exist_ok=True)
        plot_portrait(census, jet, outdir / "portrait.svg")
    return 0


def cmd_flow(args, scenario: Scenario, outdir: Path) -> int:
    spec = scenario.surface_spec()
    try:
        u0, v0 = (float(x) for x in args.start.split(","))
    except ValueError:
        raise ConfigError(f"flow start must be 'u,v', got {args.start!r}")
    traj = lineode.integrate_principal_line(
        spec, (u0, v0), args.foliation, max_steps=args.steps, ds=args.ds)
    lines = [
        f"scenario: {scenario.name}",
        f"command : flow {args.start} {args.foliation}",
        f"points        : {len(traj.points)}",
        f"terminated by : {traj.terminated_by}",
        f"final point   : u={traj.points[-1][0]:.9g} v={traj.points[-1][1]:.9g}",
    ]
    _print_and_save(outdir, lines)
    _write(outdir, "trajectory.csv", traj.to_csv())
    if args.svg:
        from .plotting import plot_trajectories
        plot_trajectories([traj], spec, outdir / "flow.svg")
    return 0


def cmd_holonomy(args, scenario: Scenario, outdir: Path) -> int:
    spec = scenario.surface_spec()
    rep = holonomy.return_map_numeric(spec)
    lines = [f"scenario: {scenario.name}", "command : holonomy"] + rep.lines()
    _print_and_save(outdir, lines)
    rows = ["v0,pi"]
    for v0, pi in zip(rep.v0_grid, rep.pi_values):
        rows.append(f"{FMT % v0},{FMT % pi}")
    _write(outdir, "returns.csv", "\n".join(rows) + "\n")
    if args.svg:
        from .plotting import plot_return_map
        plot_return_map(rep, outdir / "holonomy.svg")
    return 0


def cmd_verify_forms(args, scenario: Scenario, outdir: Path) -> int:
    spec = scenario.surface_spec()
    u_samples = [0.2 * spec.l, 0.55 * spec.l, 0.8 * spec.l]
    lines = [f"scenario: {scenario.name}", "command : verify-forms"]
    best: dict[str, verify.SlopeResult] = {}
    all_rows = []
    for u in u_samples:
        rows = verify.series_numeric_table(spec, u)
        all_rows.append((u, rows))
        slopes = verify.order_law_slopes(spec, u)
        for n, r in slopes.items():
            if n not in best or r.slope > best[n].slope:
                best[n] = r
    failing = [n for n in verify.COEFFICIENTS if not best[n].passed]
    lines.append("order-law slopes (best over sampled u; required in parentheses):")
    for n in verify.COEFFICIENTS:
        r = best[n]
        s = "inf" if math.isinf(r.slope) else f"{r.slope:.2f}"
        lines.append(f"  {n:>2}: {s:>5} (>= {r.required})  {'ok' if r.passed else 'FLAGGED'}")
    lines.append("flagged coefficients: " + (", ".join(failing) if failing else "none"))
    _print_and_save(outdir, lines)

    header = ["u", "v"]
    for n in ("E", "F", "G", "e", "f", "g"):
        header += [f"{n}_series", f"{n}_numeric"]
    rows_out = [",".join(header)]
    for u, rows in all_rows:
        for v, table in rows:
            cells = [FMT % u, FMT % v]
            for n in ("E", "F", "G", "e", "f", "g"):
                cells += [FMT % table[n][0], FMT % table[n][1]]
            rows_out.append(",".join(cells))
    _write(outdir, "forms.csv", "\n".join(rows_out) + "\n")
    _write(outdir, "frame.csv", spec.frame.to_csv())
    if args.svg:
        from .plotting import plot_order_law
        u, rows = all_rows[0]
        plot_order_law(rows, verify.order_law_slopes(spec, u), outdir / "verify-forms.svg")
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "portrait": cmd_portrait,
    "flow": cmd_flow,
    "holonomy": cmd_holonomy,
    "closure": cmd_closure,
    "verify-forms": cmd_verify_forms,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="umbilic-lines",
        description="Principal curvature line fields near curves of umbilic points.")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out", default="out", help="output directory root")
    p.add_argument("--svg", action="store_true", help="also render SVG figures")
    p.add_argument("--tol", type=float, default=None,
                   help="override the command's principal tolerance")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for sampled diagnostics (outputs are deterministic)")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", help="classify a point of the umbilic curve")
    c.add_argument("u0", type=float)
    c = sub.add_parser("portrait", help="trajectory census of the blow-up portrait")
    c.add_argument("u0", type=float)
    c = sub.add_parser("flow", help="integrate one principal curvature line")
    c.add_argument("start", help="start point as 'u,v'")
    c.add_argument("foliation", type=int, choices=(1, 2))
    c.add_argument("--steps", type=int, default=4000)
    c.add_argument("--ds", type=float, default=1e-3)
    sub.add_parser("holonomy", help="first-return map of the tangent foliation")
    sub.add_parser("closure", help="total-torsion closure check")
    sub.add_parser("verify-forms", help="series vs finite-difference coefficients")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scenario = load_scenario(args.scenario)
        outdir = Path(args.out) / scenario.name / args.command
        return COMMANDS[args.command](args, scenario, outdir)
    except (ConfigError, ProfileSpecError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (HypothesisViolationError, AmbiguousStartError, OutOfStripError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return 1
    except UmbilicLinesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
