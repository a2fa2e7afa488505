"""Command-line entry point: every pipeline as a subcommand.

All angles are accepted in degrees; internally everything is radians.  Every
subcommand writes a run manifest (<first output>.manifest.json by default)
listing parameters and sha256 digests of the outputs; `coorbital replay`
re-executes a manifest and verifies the digests.  Exit codes: 0 success,
2 usage error, 3 numerical failure (last-good checkpoint path printed).
"""

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from . import averaged as av
from . import cartography as cg
from . import hunter as hu
from .errors import ContinuationStalled, CoorbitalError
from .hill import (
    MassConfig,
    lagrange_anomaly_coeffs,
    lagrange_equilibrium,
    lagrange_spectrum,
)
from .manifest import RunManifest, Timer

EXIT_NUMERICAL = 3


def _fmt(v):
    return format(float(v), ".17g")


def _masses_from(args):
    if args.m1 is not None or args.m2 is not None:
        if args.m1 is None or args.m2 is None:
            raise SystemExit(2)
        return MassConfig.planet_pair(args.m1, args.m2)
    if args.eps is None:
        raise SystemExit(2)
    return MassConfig.equal_pair(args.eps)


def _add_mass_args(p):
    p.add_argument("--eps", type=float, default=None,
                   help="equal planet masses: triplet (1-2*eps, eps, eps)")
    p.add_argument("--m1", type=float, default=None, help="mass of planet 1 (sigma = 1)")
    p.add_argument("--m2", type=float, default=None, help="mass of planet 2 (sigma = 1)")


def _parse_pair(text):
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected 'lo,hi'")
    return parts


def _parse_axis(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected 'lo,hi,count'")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _write_manifest(args, name, params, outputs, elapsed):
    man = RunManifest(subcommand=name, parameters=params, wall_time_s=elapsed)
    for path in outputs:
        man.record_output(path)
    path = args.manifest or (outputs[0] + ".manifest.json" if outputs else name + ".manifest.json")
    man.write(path)
    return path


def cmd_lagrange(args):
    masses = _masses_from(args)
    omega = 2.0 * np.pi if args.omega is None else args.omega
    state, C = lagrange_equilibrium(masses, omega)
    a, b, c = lagrange_anomaly_coeffs(masses)
    spec = lagrange_spectrum(masses, omega)
    margin = 1.0 - masses.gascheau_ratio
    rows = [
        ("masses (m0, m1, m2)", f"({masses.m0:.12g}, {masses.m1:.12g}, {masses.m2:.12g})"),
        ("circle radius rho", _fmt(state.r1)),
        ("C", _fmt(C)),
        ("r1, r2", f"{_fmt(state.r1)}, {_fmt(state.r2)}"),
        ("w1, w2 [rad]", f"{_fmt(state.w1)}, {_fmt(state.w2)}"),
        ("R1, R2", f"{_fmt(state.R1)}, {_fmt(state.R2)}"),
        ("G1, G2", f"{_fmt(state.G1)}, {_fmt(state.G2)}"),
        ("anomaly coeffs (a, b, c)", f"({a:.15g}, {b:.15g}, {c:.15g})"),
        ("a^2 - b^2 - c^2 - 1", f"{a * a - b * b - c * c - 1:.3e}"),
        ("27 p / sigma^2", _fmt(masses.gascheau_ratio)),
        ("stability margin (1 - 27 p/sigma^2)", _fmt(margin)),
        ("elliptic at J = 0", str(spec.elliptic)),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    print("unit multiplier multiplicity 4; oscillatory multipliers:")
    for lam in spec.oscillatory:
        print(f"  {lam.real:+.15f} {lam.imag:+.15f}i   |lambda| - 1 = {abs(lam)-1:+.3e}")
    payload = {
        "masses": masses.as_tuple(),
        "omega": omega,
        "state": state.as_array().tolist(),
        "C": float(C),
        "anomaly_coeffs": [a, b, c],
        "gascheau_ratio": masses.gascheau_ratio,
        "margin": margin,
        "elliptic": spec.elliptic,
        "oscillatory_multipliers": [[v.real, v.imag] for v in spec.oscillatory],
    }
    outputs = []
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        outputs.append(args.json)
    return outputs, {"masses": masses.as_tuple(), "omega": omega}


def cmd_avg_family(args):
    masses = _masses_from(args)
    branch = {"L4": av.VFL_FROM_L4, "L5": av.VFL_FROM_L5, "VFE": av.VFE}[args.branch]
    if branch == av.VFE:
        j_vals = np.arange(args.step, args.j_max + 0.5 * args.step, args.step)
        points = [av.solve_vfe(float(np.sin(np.radians(j) / 2.0))) for j in j_vals]
    else:
        s_max = None
        if args.j_max < 145.6:
            s_max = float(np.sin(np.radians(args.j_max) / 2.0))
        points = av.vfl_branch(n=args.count, branch=branch, s0_max=s_max)
    av.write_averaged_csv(args.out, points, masses, with_series=args.with_series)
    return [args.out], {
        "masses": masses.as_tuple(),
        "branch": args.branch,
        "j_max": args.j_max,
        "step": args.step,
        "count": args.count,
        "with_series": args.with_series,
    }


def cmd_continue(args):
    masses = _masses_from(args)
    lo, hi, step = args.j_schedule
    schedule = np.round(np.arange(lo, hi + 0.5 * step, step), 12)
    schedule = schedule[schedule > 0]
    seed = None
    if args.resume and os.path.exists(args.out):
        rows = hu.read_family_csv(args.out)
        if rows:
            seed = hu._CsvSeed(rows[-1])
            schedule = schedule[schedule > seed.J_p_deg]
            if schedule.size == 0:
                print(f"{args.out}: already complete")
                return [args.out], {}
    params = {
        "masses": masses.as_tuple(),
        "origin": args.origin,
        "schedule": [lo, hi, step],
        "store_substeps": not args.targets_only,
    }
    try:
        branch = hu.continue_family(
            args.origin, masses, schedule, store_substeps=not args.targets_only, seed=seed
        )
    except ContinuationStalled as exc:
        if exc.branch is not None and exc.branch.orbits:
            _write_branch(args.out, exc.branch, seed is not None and args.resume)
            print(f"continuation stalled; last-good checkpoint: {args.out}", file=sys.stderr)
            print(f"error: {exc}", file=sys.stderr)
        raise
    _write_branch(args.out, branch, seed is not None)
    return [args.out], params


def _write_branch(path, branch, append):
    if append and os.path.exists(path):
        import io

        buf = io.StringIO()
        _tmp = path + ".part"
        hu.write_family_csv(_tmp, branch)
        with open(_tmp) as fh:
            fh.readline()  # drop header
            body = fh.read()
        os.remove(_tmp)
        # the seed row is already present in the file
        body = body.split("\n", 1)[1] if "\n" in body else ""
        with open(path, "a") as fh:
            fh.write(body)
    else:
        hu.write_family_csv(path, branch)


def cmd_transition(args):
    masses = _masses_from(args)
    log = []
    j_star = hu.find_transition(masses, args.bracket, tol_deg=args.tol, log=log)
    print(f"stability transition at J_p = {j_star:.6f} deg")
    outputs = []
    if args.log:
        hu.write_bisection_log(args.log, log)
        outputs.append(args.log)
    return outputs, {"masses": masses.as_tuple(), "bracket": args.bracket, "tol": args.tol,
                     "J_star_deg": j_star}


def cmd_map(args):
    masses = _masses_from(args)
    lo1, hi1, n1 = args.dlam
    lo2, hi2, n2 = args.j0
    grid = cg.GridSpec(
        cg.AxisSpec("dlambda_deg", lo1, hi1, n1),
        cg.AxisSpec("J0_deg", lo2, hi2, n2),
        args.periods,
    )
    params = {
        "masses": masses.as_tuple(),
        "dlam": [lo1, hi1, n1],
        "j0": [lo2, hi2, n2],
        "periods": args.periods,
        "tol": args.tol,
    }
    existing = []
    if args.resume and os.path.exists(args.out):
        with open(args.out) as fh:
            fh.readline()
            existing = [l.rstrip("\n") for l in fh if l.strip()]
        if len(existing) >= n1 * n2:
            print(f"{args.out}: already complete")
            return [args.out], params
    cells = cg.run_map(grid, masses, tol=(args.tol, args.tol), threads=args.threads,
                       skip=len(existing))
    with open(args.out, "w") as fh:
        fh.write(cg.MAP_HEADER + "\n")
        for line in existing:
            fh.write(line + "\n")
        for c in cells:
            loss = "" if c.time_of_loss is None else format(c.time_of_loss, ".17g")
            fh.write(f"{_fmt(c.axis1)},{_fmt(c.axis2)},{_fmt(c.max_ecc)},{c.outcome},{loss}\n")
    return [args.out], params


def cmd_chimney(args):
    lo, hi = args.eps_range
    eps_values = np.round(np.arange(lo, hi + 0.5 * args.eps_step, args.eps_step), 12)
    params = {
        "eps_values": eps_values.tolist(),
        "j_max": args.j_max,
        "j_step": args.j_step,
        "refine_tol": args.refine_tol,
    }
    done_eps = set()
    existing_rows = []
    existing_trans = []
    if args.resume and os.path.exists(args.out):
        with open(args.out) as fh:
            header = fh.readline()
            for line in fh:
                existing_rows.append(line.rstrip("\n"))
        n_rows = int(np.floor(args.j_max / args.j_step)) + 1
        counts = {}
        for line in existing_rows:
            e = float(line.split(",")[0])
            counts[e] = counts.get(e, 0) + 1
        done_eps = {e for e, c in counts.items() if c >= n_rows}
        if os.path.exists(args.transitions):
            with open(args.transitions) as fh:
                fh.readline()
                existing_trans = [l.rstrip("\n") for l in fh if l.strip()]
    todo = [e for e in eps_values if float(e) not in done_eps]
    result = cg.chimney_scan(args.j_max, todo, j_step_deg=args.j_step,
                             refine_tol_deg=args.refine_tol, threads=args.threads)
    with open(args.out, "w") as fh:
        fh.write(cg.CHIMNEY_HEADER + "\n")
        for line in existing_rows:
            fh.write(line + "\n")
        for col in result.columns:
            for j, s in zip(col.j_deg, col.stable):
                fh.write(f"{_fmt(col.eps)},{_fmt(j)},{int(s)}\n")
    with open(args.transitions, "w") as fh:
        fh.write(cg.TRANSITION_HEADER + "\n")
        for line in existing_trans:
            fh.write(line + "\n")
        for col in result.columns:
            for lo_i, hi_i in col.intervals:
                fh.write(f"{_fmt(col.eps)},{_fmt(lo_i)},{_fmt(hi_i)}\n")
    for col in result.columns:
        if col.failure:
            print(f"eps = {col.eps}: continuation failure recorded: {col.failure}",
                  file=sys.stderr)
    return [args.out, args.transitions], params


def cmd_slab(args):
    masses = _masses_from(args)
    lo, hi, n = args.offsets
    offsets = np.linspace(lo, hi, n)
    existing = []
    if args.resume and os.path.exists(args.out):
        with open(args.out) as fh:
            fh.readline()
            existing = [l.rstrip("\n") for l in fh if l.strip()]
    cells = cg.family_slab_scan(
        masses, args.j_max, offsets, j_step_deg=args.j_step,
        duration=args.periods, tol=(args.tol, args.tol), threads=args.threads,
        skip=len(existing),
    )
    with open(args.out, "w") as fh:
        fh.write(cg.MAP_HEADER + "\n")
        for line in existing:
            fh.write(line + "\n")
        for c in cells:
            loss = "" if c.time_of_loss is None else format(c.time_of_loss, ".17g")
            fh.write(f"{_fmt(c.axis1)},{_fmt(c.axis2)},{_fmt(c.max_ecc)},{c.outcome},{loss}\n")
    return [args.out], {
        "masses": masses.as_tuple(),
        "j_max": args.j_max,
        "j_step": args.j_step,
        "offsets": [lo, hi, n],
        "periods": args.periods,
    }


def cmd_traj(args):
    masses = _masses_from(args)
    from . import hunter as _hu
    from .flow import write_trajectory_csv

    if args.j_p > 0:
        guess = _hu.averaged_guess(masses, args.j_p)
        orb = _hu.solve_orbit(guess, masses, np.radians(args.j_p))
    else:
        st, C = _hu.origin_seed(args.origin, masses)
        orb = _hu.solve_orbit((st, C), masses, 0.0)
    times = np.linspace(0.0, args.periods, int(args.samples * args.periods) + 1)[1:]
    write_trajectory_csv(args.out, orb.x0, orb.C, masses, times)
    return [args.out], {
        "masses": masses.as_tuple(),
        "j_p": args.j_p,
        "periods": args.periods,
        "samples": args.samples,
    }


def cmd_compare_avg(args):
    eps_list = [float(v) for v in args.eps_list.split(",")]
    lines = ["eps,J_deg,ratio"]
    for eps in eps_list:
        masses = MassConfig.equal_pair(eps)
        sched = np.arange(args.j_step, args.j_max + 0.5 * args.j_step, args.j_step)
        branch = hu.continue_family("L4", masses, sched, store_substeps=False)
        rows = av.compare_full_vs_avg(branch, j_max_deg=args.j_max)
        for jd, ratio in rows:
            lines.append(f"{_fmt(eps)},{_fmt(jd)},{_fmt(ratio)}")
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return [args.out], {"eps_list": eps_list, "j_max": args.j_max, "j_step": args.j_step}


def cmd_replay(args):
    man = RunManifest.load(args.manifest)
    sub = man.subcommand
    params = man.parameters
    print(f"replaying {sub} with recorded parameters")
    argv = [sub] + params.get("argv", [])
    if not params.get("argv"):
        raise SystemExit("manifest does not carry replayable argv")
    code = main(argv, replay=True)
    if code != 0:
        return code
    bad = [p for p, ok in man.verify_outputs().items() if not ok]
    if bad:
        print("digest mismatch: " + ", ".join(bad), file=sys.stderr)
        return EXIT_NUMERICAL
    print("all output digests reproduced")
    return 0


_COMMANDS = {
    "lagrange": cmd_lagrange,
    "avg-family": cmd_avg_family,
    "continue": cmd_continue,
    "transition": cmd_transition,
    "map": cmd_map,
    "chimney": cmd_chimney,
    "slab": cmd_slab,
    "compare-avg": cmd_compare_avg,
    "traj": cmd_traj,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="coorbital",
        description="inclined co-orbital families: continuation, stability, averaged model",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lagrange", help="equilateral equilibrium, coefficients, spectrum")
    _add_mass_args(p)
    p.add_argument("--omega", type=float, default=None, help="mean motion [rad/time], default 2*pi")
    p.add_argument("--json", default=None, help="write the report as JSON to this path")
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("avg-family", help="averaged fixed-point family CSV")
    _add_mass_args(p)
    p.add_argument("--branch", choices=["L4", "L5", "VFE"], default="L4")
    p.add_argument("--j-max", type=float, default=146.0, help="maximum J0 [deg]")
    p.add_argument("--step", type=float, default=1.0, help="J0 step for the VFE branch [deg]")
    p.add_argument("--count", type=int, default=160, help="number of family points")
    p.add_argument("--with-series", action="store_true", help="append series columns")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("continue", help="continue a periodic-orbit family in J_p")
    _add_mass_args(p)
    p.add_argument("--origin", choices=["L4", "L5", "Euler"], default="L4")
    p.add_argument("--j-schedule", type=_parse_axis, default=(1.0, 150.0, 1.0),
                   metavar="LO,HI,STEP", help="J_p schedule [deg]")
    p.add_argument("--targets-only", action="store_true",
                   help="store scheduled targets only, not accepted substeps")
    p.add_argument("--resume", action="store_true", help="resume from the last CSV row")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("transition", help="bisect the stable/unstable boundary")
    _add_mass_args(p)
    p.add_argument("--bracket", type=_parse_pair, required=True, metavar="LO,HI",
                   help="J_p bracket [deg]")
    p.add_argument("--tol", type=float, default=1e-4, help="bisection tolerance [deg]")
    p.add_argument("--log", default=None, help="write probe log (JSON lines)")
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("map", help="max-eccentricity stability map")
    _add_mass_args(p)
    p.add_argument("--dlam", type=_parse_axis, default=(0.0, 360.0, 61),
                   metavar="LO,HI,N", help="lambda1 - lambda2 axis [deg]")
    p.add_argument("--j0", type=_parse_axis, default=(0.0, 90.0, 46),
                   metavar="LO,HI,N", help="J0 axis [deg]")
    p.add_argument("--periods", type=float, default=2000.0)
    p.add_argument("--tol", type=float, default=1e-12, help="integrator abs = rel tolerance")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("chimney", help="(J, eps) stability chimney, equal masses")
    p.add_argument("--eps-range", type=_parse_pair, default=(0.01, 0.06), metavar="LO,HI")
    p.add_argument("--eps-step", type=float, default=0.005)
    p.add_argument("--j-max", type=float, default=75.0)
    p.add_argument("--j-step", type=float, default=0.5)
    p.add_argument("--refine-tol", type=float, default=1e-2,
                   help="transition refinement tolerance [deg]")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--transitions", required=True, help="stable-interval CSV path")
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("slab", help="family-parallel slab scan (w2 offsets)")
    _add_mass_args(p)
    p.add_argument("--j-max", type=float, default=64.0)
    p.add_argument("--j-step", type=float, default=1.0)
    p.add_argument("--offsets", type=_parse_axis, default=(-20.0, 20.0, 81),
                   metavar="LO,HI,N", help="w2 offsets [deg]")
    p.add_argument("--periods", type=float, default=10000.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--resume", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("traj", help="dense coordinate dump along one family orbit")
    _add_mass_args(p)
    p.add_argument("--j-p", type=float, default=39.0, help="section inclination [deg]")
    p.add_argument("--origin", choices=["L4", "L5", "Euler"], default="L4")
    p.add_argument("--periods", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=256, help="samples per period")
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("compare-avg", help="full vs averaged anomaly-difference gap")
    p.add_argument("--eps-list", default="1e-5,1e-4,1e-3")
    p.add_argument("--j-max", type=float, default=120.0)
    p.add_argument("--j-step", type=float, default=5.0)
    p.add_argument("--out", required=True)
    p.add_argument("--manifest", default=None)

    p = sub.add_parser("replay", help="re-run a manifest and verify digests")
    p.add_argument("manifest")
    return ap


def main(argv=None, replay=False):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "replay":
        return cmd_replay(args)
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    try:
        with Timer() as timer:
            outputs, params = _COMMANDS[args.command](args)
    except CoorbitalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if outputs and not replay:
        params = dict(params)
        params["argv"] = raw_argv[1:]
        _write_manifest(args, args.command, params, outputs, timer.elapsed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
