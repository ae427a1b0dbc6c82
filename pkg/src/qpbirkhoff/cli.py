"""Command-line driver: simulate orbits, estimate rotation rates, extract
Fourier spectra and conjugacy series, and write plot-ready tables.

Any flag may also come from a JSON config file (``--config``); flags given
on the command line override the file.  Exit codes: 0 success, 2 usage
error, 3 numeric or domain failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import conjugacy as cj
from . import io as qio
from .maps import (
    EscapedOrbitError,
    HenonParams,
    SiegelMapParams,
    henon_ball_point,
    iterate,
)
from .rotation import (
    MAX_HALFWIDTH,
    ComplexComponent,
    DegenerateProjectionError,
    NoLiftError,
    ProjectionSpec,
    RadiusDelay,
    lift_angle_differences,
    project_to_angles,
    rate_from_lift,
)
from .wba import WeightKind
from .xprec import (
    DomainError,
    XReal,
    format_xreal,
    frac,
    parse_named,
    parse_xcomplex,
    wrap_half,
)

_NEGATIVE = re.compile(r"^-[\d.]")

EXIT_USAGE = 2
EXIT_NUMERIC = 3


# N * (K + 1) above this needs --full-scale
FULL_SCALE_WORK = 4e9


class UsageError(Exception):
    pass


def _pair(text: str) -> tuple[XReal, XReal]:
    parts = [p for p in str(text).replace(";", ",").split(",") if p.strip()]
    if len(parts) != 2:
        raise UsageError(f"expected 'u,v', got {text!r}")
    return parse_named(parts[0]), parse_named(parts[1])


def _positive(name, value, minimum=1):
    if value is None or int(value) < minimum:
        raise UsageError(f"--{name} must be at least {minimum}")
    return int(value)


def _checkpoints(text):
    if not text:
        return None
    return [int(float(t)) for t in str(text).split(",") if t.strip()]


def _weight(text) -> WeightKind:
    try:
        return WeightKind.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config_for_hash(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "config")}


def _emit(line=""):
    print(line)


# simulate -------------------------------------------------------------------


def cmd_simulate(args):
    n = _positive("n", args.n)
    stride = _positive("stride", args.stride)
    if args.map == "siegel":
        if args.rho is None or args.z0 is None:
            raise UsageError("siegel map needs --rho and --z0")
        gen = SiegelMapParams(parse_named(args.rho))
        z0 = parse_xcomplex(args.z0)
    else:
        if args.rho1 is not None and args.rho2 is not None:
            gen = HenonParams.from_rotations(parse_named(args.rho1), parse_named(args.rho2))
        elif args.theta is not None and args.phi is not None:
            gen = HenonParams(parse_named(args.theta), parse_named(args.phi))
        else:
            raise UsageError("henon map needs --theta/--phi or --rho1/--rho2")
        if args.amp1 is not None or args.amp2 is not None:
            z0 = henon_ball_point(
                gen, parse_xcomplex(args.amp1 or "0"), parse_xcomplex(args.amp2 or "0")
            )
        elif args.x0 is not None and args.y0 is not None:
            z0 = (parse_xcomplex(args.x0), parse_xcomplex(args.y0))
        else:
            raise UsageError("henon map needs --x0/--y0 or --amp1/--amp2")
    traj = iterate(gen, z0, n, stride)
    qio.write_trajectory(
        args.out,
        traj,
        header=["product: orbit samples", f"config-sha256: {qio.config_hash(_config_for_hash(args))}"],
    )
    _emit(f"wrote {len(traj)} points to {args.out}")


# rotation / convergence ------------------------------------------------------


def _projection(args) -> ProjectionSpec:
    ref = _pair(args.ref)
    if args.projection == "complex":
        return ProjectionSpec(ComplexComponent(int(args.component)), ref)
    if args.center is None:
        raise UsageError("radius-delay projection needs --center u,v")
    cu, cv = _pair(args.center)
    lag = _positive("lag", args.lag)
    return ProjectionSpec(RadiusDelay(cu, cv, int(args.component), lag), ref)


def _estimate(args, checkpoints=None):
    traj = qio.read_trajectory(args.traj)
    spec = _projection(args)
    kind = _weight(args.weight)
    angles = project_to_angles(traj, spec)
    lifted = lift_angle_differences(angles, float(args.max_halfwidth))
    if checkpoints and checkpoints[-1] > len(lifted):
        raise UsageError(f"checkpoint {checkpoints[-1]} exceeds the {len(lifted)} lifted differences")
    return rate_from_lift(lifted, kind, checkpoints)


def _report_rate(est):
    _emit(f"rate       {format_xreal(est.rate)}")
    _emit(f"half-turn  {format_xreal(est.half_turn)}")
    _emit(f"weight     {est.weight_kind}")
    _emit(f"n_used     {est.n_used}")
    _emit(f"halfwidth  {est.lifted.branch_halfwidth:.6f}")


def _err(rate: XReal, exact) -> XReal:
    return abs(wrap_half(rate - exact))


def cmd_rotation(args):
    cps = _checkpoints(args.checkpoints)
    est = _estimate(args, cps)
    _report_rate(est)
    exact = parse_named(args.exact) if args.exact is not None else None
    cfg = qio.config_hash(_config_for_hash(args))
    if exact is not None:
        _emit(f"error      {format_xreal(_err(est.rate, exact))}")
    if est.profile:
        for n, r in est.profile:
            tail = f"  err {format_xreal(_err(r, exact))}" if exact is not None else ""
            _emit(f"N={n:<10d} {format_xreal(r)}{tail}")
    if args.lift_out:
        d = est.lifted.deltas
        qio.write_table(
            args.lift_out, "lifted angle differences", cfg, ["n", "delta"],
            ((n, d[n]) for n in range(d.shape[0])),
        )
    if args.profile_out and est.profile:
        _write_profile(args.profile_out, cfg, est.profile, exact)


def _write_profile(path, cfg, profile, exact):
    cols = ["N", "rate", "half_turn"] + (["err"] if exact is not None else [])
    rows = []
    for n, r in profile:
        row = [n, r, wrap_half(r)]
        if exact is not None:
            row.append(_err(r, exact))
        rows.append(row)
    qio.write_table(path, "rotation convergence profile", cfg, cols, rows)


def cmd_convergence(args):
    cps = _checkpoints(args.checkpoints)
    if not cps:
        raise UsageError("--checkpoints is required")
    est = _estimate(args, cps)
    exact = parse_named(args.exact) if args.exact is not None else None
    cfg = qio.config_hash(_config_for_hash(args))
    for n, r in est.profile:
        tail = f"  err {format_xreal(_err(r, exact))}" if exact is not None else ""
        _emit(f"N={n:<10d} {format_xreal(r)}{tail}")
    if args.out:
        _write_profile(args.out, cfg, est.profile, exact)


# fourier / conjugacy / curve / length ----------------------------------------


def cmd_fourier(args):
    k_max = _positive("k-max", args.k_max)
    traj = qio.read_trajectory(args.traj)
    work = float(len(traj)) * (k_max + 1)
    if work > FULL_SCALE_WORK and not args.full_scale:
        raise UsageError(
            f"N*(K+1) = {work:.3g} exceeds the desk-scale limit {FULL_SCALE_WORK:.3g}; pass --full-scale"
        )
    kind = _weight(args.weight)
    if args.rho is not None:
        rho = frac(parse_named(args.rho))
        source = "given"
    else:
        ref = _pair(args.ref)
        est = rate_from_lift(
            lift_angle_differences(
                project_to_angles(traj, ProjectionSpec(ComplexComponent(int(args.component)), ref))
            ),
            kind,
        )
        rho = est.rate
        source = "estimated"
    spec = cj.build_spectrum(traj, rho, k_max, kind, parse_named(args.floor), int(args.component))
    qio.write_spectrum(
        args.out, spec,
        {"rho_source": source, "config_sha256": qio.config_hash(_config_for_hash(args))},
    )
    _emit(f"rho        {format_xreal(rho)} ({source})")
    _emit(f"K          {spec.k_max}")
    _emit(f"above floor {spec.n_above_floor()}")
    _emit(f"wrote spectrum to {args.out}")


def _series(args):
    spec = qio.read_spectrum(args.spectrum)
    if args.r0 is not None:
        r0 = parse_named(args.r0)
        fit = None
    else:
        fit = cj.fit_r0_details(spec)
        r0 = fit.r0
    return spec, cj.power_series(spec, r0), fit


def cmd_conjugacy(args):
    spec, series, fit = _series(args)
    cfg = qio.config_hash(_config_for_hash(args))
    _emit(f"R0         {format_xreal(series.r0)}")
    if fit is not None:
        _emit(f"fit        slope {fit.slope:.6g}  residual std {fit.residual_std:.3g}  points {len(fit.k_used)}")
    if args.traj:
        traj = qio.read_trajectory(args.traj)
        err = cj.reconstruction_error(traj, spec, int(args.component))
        _emit(f"replay max error {err:.6e}")
    if args.out:
        a = series.a
        qio.write_table(
            args.out, "conjugacy power-series coefficients", cfg,
            ["k", "abs_b", "abs_a", "a_re", "a_im"],
            (
                (k, f"{m_b:.6e}", f"{m_a:.6e}", a[k, 0:2], a[k, 2:4])
                for k, (m_b, m_a) in enumerate(zip(spec.magnitudes(), series.magnitudes()))
            ),
        )


def cmd_curve(args):
    _, series, _ = _series(args)
    n_theta = _positive("n-theta", args.n_theta)
    r = parse_named(args.r)
    pts = cj.sample_curve(series, r, n_theta)
    cfg = qio.config_hash(_config_for_hash(args))
    qio.write_table(
        args.out, f"invariant curve image at r={format_xreal(r)}", cfg, ["theta", "re", "im"],
        ((XReal(j) / n_theta, pts[j, 0:2], pts[j, 2:4]) for j in range(n_theta)),
    )
    _emit(f"wrote {n_theta} curve points to {args.out}")


def _r_values(text, steps):
    text = str(text)
    if ".." in text:
        lo, hi = (parse_named(t) for t in text.split(".."))
        steps = _positive("steps", steps, 2)
        return [lo + (hi - lo) * j / (steps - 1) for j in range(steps)]
    return [parse_named(t) for t in text.split(",") if t.strip()]


def cmd_length(args):
    _, series, _ = _series(args)
    rs = _r_values(args.r, args.steps)
    c = parse_named(args.bound_c) if args.bound_c is not None else XReal(float(series.magnitudes().max()))
    cfg = qio.config_hash(_config_for_hash(args))
    rows = []
    for r in rs:
        rows.append((r, cj.l2_length_direct(series, r), cj.l2_length_bound(c, r)))
        _emit(f"r={format_xreal(r)}  l2={format_xreal(rows[-1][1])}  bound={format_xreal(rows[-1][2])}")
    if args.out:
        qio.write_table(args.out, "L2 length of curve images", cfg, ["r", "l2_direct", "l2_bound"], rows)


# parser ----------------------------------------------------------------------


def _add_projection_flags(p):
    p.add_argument("--traj", required=False, help="trajectory CSV")
    p.add_argument("--projection", choices=["complex", "radius-delay"], default="complex")
    p.add_argument("--component", type=int, default=0)
    p.add_argument("--ref", default="0,0", help="reference point u,v in the projection plane")
    p.add_argument("--center", help="radius center u,v (radius-delay)")
    p.add_argument("--lag", type=int, default=1)
    p.add_argument("--weight", default="bump2")
    p.add_argument("--exact", help="known rate for error columns")
    p.add_argument("--max-halfwidth", dest="max_halfwidth", default=str(MAX_HALFWIDTH))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpbirkhoff", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file supplying default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="iterate a map and write the orbit")
    p.add_argument("--map", choices=["siegel", "henon"], default="siegel")
    p.add_argument("--rho")
    p.add_argument("--z0")
    p.add_argument("--theta")
    p.add_argument("--phi")
    p.add_argument("--rho1")
    p.add_argument("--rho2")
    p.add_argument("--x0")
    p.add_argument("--y0")
    p.add_argument("--amp1", help="initial offset along the first eigenvector")
    p.add_argument("--amp2", help="initial offset along the second eigenvector")
    p.add_argument("--n", type=int)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--out", default="trajectory.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rotation", help="rotation rate of a projection")
    _add_projection_flags(p)
    p.add_argument("--checkpoints", help="comma-separated N values for a convergence profile")
    p.add_argument("--lift-out", dest="lift_out")
    p.add_argument("--profile-out", dest="profile_out")
    p.set_defaults(func=cmd_rotation)

    p = sub.add_parser("convergence", help="rotation rate against N")
    _add_projection_flags(p)
    p.add_argument("--checkpoints")
    p.add_argument("--out")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("fourier", help="Fourier coefficients b_k of an orbit")
    p.add_argument("--traj")
    p.add_argument("--rho", help="phase rate; estimated from the orbit when omitted")
    p.add_argument("--ref", default="0,0", help="reference point for the estimated rate")
    p.add_argument("--component", type=int, default=0)
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--floor", default="1e-30")
    p.add_argument("--weight", default="bump2")
    p.add_argument("--full-scale", dest="full_scale", action="store_true")
    p.add_argument("--out", default="spectrum.json")
    p.set_defaults(func=cmd_fourier)

    for name, func, helptext in (
        ("conjugacy", cmd_conjugacy, "fit R0 and form the power series"),
        ("curve", cmd_curve, "sample the image of a circle"),
        ("length", cmd_length, "L2 length of circle images"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--spectrum")
        p.add_argument("--r0", help="decay radius; fitted when omitted")
        p.set_defaults(func=func)
        if name == "conjugacy":
            p.add_argument("--traj", help="orbit to replay against the series")
            p.add_argument("--component", type=int, default=0)
            p.add_argument("--out")
        elif name == "curve":
            p.add_argument("--r", default="0.999")
            p.add_argument("--n-theta", dest="n_theta", type=int, default=10000)
            p.add_argument("--out", default="curve.csv")
        else:
            p.add_argument("--r", default="0.5..0.999")
            p.add_argument("--steps", type=int, default=50)
            p.add_argument("--bound-c", dest="bound_c")
            p.add_argument("--out")
    return parser


_REQUIRED = {
    "rotation": ("traj",),
    "convergence": ("traj",),
    "fourier": ("traj",),
    "conjugacy": ("spectrum",),
    "curve": ("spectrum",),
    "length": ("spectrum",),
}


def _join_negative_values(argv: list[str]) -> list[str]:
    # argparse takes "-0.5+0.126i" for an option; bind it to the flag before it
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def parse_args(argv=None) -> argparse.Namespace:
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            cfg = json.loads(Path(known.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {known.config}: {exc}")
        if not isinstance(cfg, dict):
            parser.error("config file must hold a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        for sp in subparsers.choices.values():
            valid = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in cfg.items() if k in valid})
        unknown = set(cfg) - {a.dest for sp in subparsers.choices.values() for a in sp._actions}
        if unknown:
            parser.error(f"unknown config keys: {', '.join(sorted(unknown))}")
    args = parser.parse_args(argv)
    for name in _REQUIRED.get(args.command, ()):
        if getattr(args, name, None) is None:
            parser.error(f"{args.command} needs --{name}")
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoLiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (EscapedOrbitError, DegenerateProjectionError, cj.FitError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
