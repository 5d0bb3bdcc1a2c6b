"""Command-line front end.

Subcommands compute one-point rates, rate-versus-distance sweeps, maximum
reachable distances, necessary-condition bound distances, feasibility-region
curves, and the decoy variants of the first three. Output is CSV (comma
separated, ``.`` decimal, LF line endings) with one ``#`` comment line
recording the resolved configuration; output is byte-stable across runs for
identical arguments. Reports can additionally be rendered as figures with
``--plot``.

Exit codes: 0 on success, 2 on argument or parameter-validation errors, 1 on
computation errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .decoy import DEFAULT_DECOY, DecoyParams, decoy_point
from .link import DeadLinkError, LinkParams, link_observables
from .optimize import (
    COARSE_GRID_POINTS,
    DISTANCE_CAP_KM,
    DISTANCE_RESOLUTION_KM,
    MU_INTERVAL,
    BoundKind,
    bound_distance,
    max_distance,
    optimize_mu,
    rate_sweep,
    region_curves,
    standard_rate,
)
from .rates import POSITIVE_RATE_FLOOR, classify_feasibility
from .states import Protocol

__all__ = ["main", "entry_point"]

_PROTOCOLS = {"four": Protocol.FOUR_STATE, "six": Protocol.SIX_STATE}

SWEEP_HEADER = "l_km,n,mu_star,rate,delta,Delta,feasibility"
DECOY_SWEEP_HEADER = SWEEP_HEADER + ",s1_lower,Delta_mu_upper"
MAX_DISTANCE_HEADER = "n,l_max_km"
BOUNDS_HEADER = "bound,l_km"
REGION_HEADER = "delta,Delta_black,Delta_grey"


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_rate(x: float) -> str:
    return f"{x:.5e}"


def parse_float_range(text: str) -> tuple[float, float, float]:
    """Parse ``start:stop:step`` (inclusive of both ends)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError(f"range step must be > 0, got {step}")
    if stop < start:
        raise ValueError(f"range stop must be >= start, got {text!r}")
    return start, stop, step


def expand_range(start: float, stop: float, step: float) -> list[float]:
    count = int((stop - start) / step + 1e-9) + 1
    return [start + k * step for k in range(count)]


def parse_n_list(text: str) -> list[int]:
    """Parse a round-count list: ``a,b,c``, ``a..b``, or a single integer."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"descending round-count range {text!r}")
        values = list(range(lo, hi + 1))
    else:
        values = [int(p) for p in text.split(",")]
    for n in values:
        if n < 0:
            raise ValueError(f"round counts must be >= 0, got {n}")
    return values


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one invocation, rendered into the CSV comment."""

    subcommand: str
    protocol: Protocol
    link: LinkParams
    pipeline: str
    extras: tuple[tuple[str, str], ...]

    def comment(self) -> str:
        pairs = [
            ("protocol", self.protocol.value),
            ("pipeline", self.pipeline),
            ("alpha", _fmt(self.link.alpha)),
            ("l_c", _fmt(self.link.l_c)),
            ("eta_det", _fmt(self.link.eta_det)),
            ("p_dark", _fmt(self.link.p_dark)),
            ("delta_0", _fmt(self.link.delta_0)),
        ]
        pairs.extend(self.extras)
        joined = " ".join(f"{k}={v}" for k, v in pairs)
        return f"# qkdrates {self.subcommand} {joined}"


def _add_link_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("link parameters")
    group.add_argument("--alpha", type=float, default=LinkParams.alpha,
                       help="fiber loss, dB/km (default %(default)s)")
    group.add_argument("--l-c", type=float, default=LinkParams.l_c,
                       help="distance-independent loss, dB (default %(default)s)")
    group.add_argument("--eta-det", type=float, default=LinkParams.eta_det,
                       help="detector efficiency (default %(default)s)")
    group.add_argument("--p-dark", type=float, default=LinkParams.p_dark,
                       help="total dark-count probability per pulse (default %(default)s)")
    group.add_argument("--delta-0", type=float, default=LinkParams.delta_0,
                       help="baseline optical error fraction (default %(default)s)")


def _add_search_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("search parameters")
    group.add_argument("--mu-min", type=float, default=MU_INTERVAL[0],
                       help="lower end of the intensity search interval (default %(default)s)")
    group.add_argument("--mu-max", type=float, default=MU_INTERVAL[1],
                       help="upper end of the intensity search interval (default %(default)s)")
    group.add_argument("--grid-points", type=int, default=COARSE_GRID_POINTS,
                       help="coarse optimization grid size (default %(default)s)")
    group.add_argument("--floor", type=float, default=POSITIVE_RATE_FLOOR,
                       help="positivity floor for threshold searches (default %(default)s)")
    group.add_argument("--resolution", type=float, default=DISTANCE_RESOLUTION_KM,
                       help="distance search resolution, km (default %(default)s)")
    group.add_argument("--cap", type=float, default=DISTANCE_CAP_KM,
                       help="distance search upper limit, km (default %(default)s)")


def _add_output_options(parser: argparse.ArgumentParser, plottable: bool) -> None:
    parser.add_argument("--out", help="write CSV to this path instead of stdout")
    if plottable:
        parser.add_argument("--plot", help="also render the table as a figure to this path")


def _add_decoy_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("decoy intensities")
    group.add_argument("--mu", type=float, default=DEFAULT_DECOY.mu,
                       help="signal mean photon number (default %(default)s)")
    group.add_argument("--kappa", type=float, default=DEFAULT_DECOY.kappa,
                       help="first decoy mean photon number (default %(default)s)")
    group.add_argument("--nu", type=float, default=DEFAULT_DECOY.nu,
                       help="second decoy mean photon number (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qkdrates",
        description="Secret-key rates for lossy QKD links with two-way post-processing.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name: str, help_: str, plottable: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--protocol", choices=sorted(_PROTOCOLS), default="four",
                       help="protocol family (default %(default)s)")
        _add_link_options(p)
        _add_output_options(p, plottable)
        return p

    p = add("rate", "secret-key rate at one distance")
    p.add_argument("--l", type=float, required=True, help="distance, km")
    p.add_argument("--n", type=int, default=0, help="error-rejection rounds (default 0)")
    p.add_argument("--mu", type=float,
                   help="fixed mean photon number (optimized when omitted)")
    _add_search_options(p)

    p = add("sweep", "rate vs distance with per-point intensity optimization", plottable=True)
    p.add_argument("--l", required=True, help="distance range start:stop:step, km")
    p.add_argument("--n", default="0", help="round counts, e.g. 0,1,2 or 0..10 (default 0)")
    _add_search_options(p)

    p = add("max-distance", "largest distance with a positive rate, per round budget",
            plottable=True)
    p.add_argument("--n", default="0", help="round budgets, e.g. 0,1,2 or 0..10 (default 0)")
    _add_search_options(p)

    p = add("bounds", "necessary-condition bound distances")
    _add_search_options(p)

    p = add("region", "feasibility-region boundary curves", plottable=True)
    p.add_argument("--delta", required=True, help="error-rate grid start:stop:step")

    decoy = sub.add_parser("decoy", help="decoy-pulse pipeline variants")
    dsub = decoy.add_subparsers(dest="decoy_subcommand", required=True)

    def add_decoy(name: str, help_: str, plottable: bool = False) -> argparse.ArgumentParser:
        p = dsub.add_parser(name, help=help_)
        p.add_argument("--protocol", choices=sorted(_PROTOCOLS), default="four",
                       help="protocol family (default %(default)s)")
        _add_link_options(p)
        _add_decoy_options(p)
        _add_output_options(p, plottable)
        return p

    p = add_decoy("rate", "decoy secret-key rate at one distance")
    p.add_argument("--l", type=float, required=True, help="distance, km")
    p.add_argument("--n", type=int, default=0, help="error-rejection rounds (default 0)")
    _add_search_options(p)

    p = add_decoy("sweep", "decoy rate vs distance", plottable=True)
    p.add_argument("--l", required=True, help="distance range start:stop:step, km")
    p.add_argument("--n", default="0", help="round counts, e.g. 0,1,2 (default 0)")
    _add_search_options(p)

    p = add_decoy("max-distance", "largest distance with a positive decoy rate",
                  plottable=True)
    p.add_argument("--n", default="0", help="round budgets, e.g. 0..10 (default 0)")
    _add_search_options(p)

    return parser


def _link_from_args(args: argparse.Namespace) -> LinkParams:
    return LinkParams(
        alpha=args.alpha,
        l_c=args.l_c,
        eta_det=args.eta_det,
        p_dark=args.p_dark,
        delta_0=args.delta_0,
    )


def _decoy_from_args(args: argparse.Namespace) -> DecoyParams:
    return DecoyParams(mu=args.mu, kappa=args.kappa, nu=args.nu)


def _sweep_line(row) -> str:
    cells = [
        _fmt(row.l_km),
        str(row.n),
        _fmt(row.mu_star),
        _fmt_rate(row.rate),
        _fmt(row.delta),
        _fmt(row.big_delta),
        row.feasibility.value,
    ]
    if row.s1_lower is not None:
        cells.extend([_fmt(row.s1_lower), _fmt(row.big_delta_upper)])
    return ",".join(cells)


def _cmd_rate(args: argparse.Namespace) -> tuple[list[str], None]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    if args.mu is not None:
        mu_star = args.mu
        rate = standard_rate(protocol, link, mu_star, args.l, args.n)
        if rate <= args.floor:
            rate = 0.0
    else:
        mu_star, rate = optimize_mu(
            protocol, link, args.l, args.n,
            mu_interval=(args.mu_min, args.mu_max),
            grid_points=args.grid_points, floor=args.floor,
        )
    obs = link_observables(link, mu_star, args.l)
    feas = classify_feasibility(protocol, obs.delta, obs.big_delta)
    config = RunConfig(
        "rate", protocol, link, "standard",
        (("l", _fmt(args.l)), ("n", str(args.n)),
         ("mu", "optimized" if args.mu is None else _fmt(args.mu))),
    )
    row = ",".join([
        _fmt(args.l), str(args.n), _fmt(mu_star), _fmt_rate(rate),
        _fmt(obs.delta), _fmt(obs.big_delta), feas.value,
    ])
    return [config.comment(), SWEEP_HEADER, row], None


def _cmd_sweep(args: argparse.Namespace) -> tuple[list[str], object]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    l_min, l_max, step = parse_float_range(args.l)
    n_list = parse_n_list(args.n)
    rows = rate_sweep(
        protocol, link, l_min, l_max, step, n_list,
        mu_interval=(args.mu_min, args.mu_max),
        grid_points=args.grid_points, floor=args.floor,
    )
    config = RunConfig(
        "sweep", protocol, link, "standard",
        (("l", args.l), ("n", ",".join(map(str, sorted(set(n_list))))),
         ("mu_interval", f"{_fmt(args.mu_min)}:{_fmt(args.mu_max)}"),
         ("floor", _fmt(args.floor))),
    )
    lines = [config.comment(), SWEEP_HEADER] + [_sweep_line(r) for r in rows]

    def render(path: str) -> None:
        from .plotting import plot_rate_sweep

        plot_rate_sweep(rows, path, title=f"{args.protocol}-state protocol")

    return lines, render


def _cmd_max_distance(args: argparse.Namespace) -> tuple[list[str], object]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    n_list = sorted(set(parse_n_list(args.n)))
    entries = [
        (
            n,
            max_distance(
                protocol, link, n,
                cap=args.cap, resolution=args.resolution, floor=args.floor,
                mu_interval=(args.mu_min, args.mu_max), grid_points=args.grid_points,
            ),
        )
        for n in n_list
    ]
    config = RunConfig(
        "max-distance", protocol, link, "standard",
        (("n", ",".join(map(str, n_list))), ("cap", _fmt(args.cap)),
         ("resolution", _fmt(args.resolution)), ("floor", _fmt(args.floor))),
    )
    lines = [config.comment(), MAX_DISTANCE_HEADER] + [
        f"{n},{_fmt(l)}" for n, l in entries
    ]

    def render(path: str) -> None:
        from .plotting import plot_max_distance

        plot_max_distance(entries, path, title=f"{args.protocol}-state protocol")

    return lines, render


def _cmd_bounds(args: argparse.Namespace) -> tuple[list[str], None]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    entries = [
        (
            kind.value,
            bound_distance(
                protocol, link, kind,
                cap=args.cap, resolution=args.resolution,
                mu_interval=(args.mu_min, args.mu_max),
            ),
        )
        for kind in (BoundKind.ENTANGLEMENT, BoundKind.BSTEP_CSS)
    ]
    config = RunConfig(
        "bounds", protocol, link, "standard",
        (("cap", _fmt(args.cap)), ("resolution", _fmt(args.resolution))),
    )
    lines = [config.comment(), BOUNDS_HEADER] + [
        f"{name},{_fmt(l)}" for name, l in entries
    ]
    return lines, None


def _cmd_region(args: argparse.Namespace) -> tuple[list[str], object]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    start, stop, step = parse_float_range(args.delta)
    points = region_curves(protocol, expand_range(start, stop, step))
    config = RunConfig("region", protocol, link, "standard", (("delta", args.delta),))
    lines = [config.comment(), REGION_HEADER] + [
        f"{_fmt(p.delta)},{_fmt(p.big_delta_black)},{_fmt(p.big_delta_grey)}"
        for p in points
    ]

    def render(path: str) -> None:
        from .plotting import plot_region

        plot_region(points, path, title=f"{args.protocol}-state protocol")

    return lines, render


def _cmd_decoy_rate(args: argparse.Namespace) -> tuple[list[str], None]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    decoy = _decoy_from_args(args)
    point = decoy_point(protocol, link, decoy, args.l, args.n)
    rate = point.rate if point.rate > args.floor else 0.0
    feas = classify_feasibility(protocol, point.delta, point.bounds.big_delta_upper)
    config = RunConfig(
        "decoy rate", protocol, link, "decoy",
        (("l", _fmt(args.l)), ("n", str(args.n)), ("mu", _fmt(decoy.mu)),
         ("kappa", _fmt(decoy.kappa)), ("nu", _fmt(decoy.nu))),
    )
    row = ",".join([
        _fmt(args.l), str(args.n), _fmt(decoy.mu), _fmt_rate(rate),
        _fmt(point.delta), _fmt(point.big_delta), feas.value,
        _fmt(point.bounds.s1_lower), _fmt(point.bounds.big_delta_upper),
    ])
    return [config.comment(), DECOY_SWEEP_HEADER, row], None


def _cmd_decoy_sweep(args: argparse.Namespace) -> tuple[list[str], object]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    decoy = _decoy_from_args(args)
    l_min, l_max, step = parse_float_range(args.l)
    n_list = parse_n_list(args.n)
    rows = rate_sweep(
        protocol, link, l_min, l_max, step, n_list,
        pipeline="decoy", decoy=decoy, floor=args.floor,
    )
    config = RunConfig(
        "decoy sweep", protocol, link, "decoy",
        (("l", args.l), ("n", ",".join(map(str, sorted(set(n_list))))),
         ("mu", _fmt(decoy.mu)), ("kappa", _fmt(decoy.kappa)), ("nu", _fmt(decoy.nu)),
         ("floor", _fmt(args.floor))),
    )
    lines = [config.comment(), DECOY_SWEEP_HEADER] + [_sweep_line(r) for r in rows]

    def render(path: str) -> None:
        from .plotting import plot_rate_sweep

        plot_rate_sweep(rows, path, title=f"{args.protocol}-state protocol, decoy pulses")

    return lines, render


def _cmd_decoy_max_distance(args: argparse.Namespace) -> tuple[list[str], object]:
    protocol = _PROTOCOLS[args.protocol]
    link = _link_from_args(args)
    decoy = _decoy_from_args(args)
    n_list = sorted(set(parse_n_list(args.n)))
    entries = [
        (
            n,
            max_distance(
                protocol, link, n, pipeline="decoy", decoy=decoy,
                cap=args.cap, resolution=args.resolution, floor=args.floor,
            ),
        )
        for n in n_list
    ]
    config = RunConfig(
        "decoy max-distance", protocol, link, "decoy",
        (("n", ",".join(map(str, n_list))), ("mu", _fmt(decoy.mu)),
         ("kappa", _fmt(decoy.kappa)), ("nu", _fmt(decoy.nu)),
         ("cap", _fmt(args.cap)), ("resolution", _fmt(args.resolution)),
         ("floor", _fmt(args.floor))),
    )
    lines = [config.comment(), MAX_DISTANCE_HEADER] + [
        f"{n},{_fmt(l)}" for n, l in entries
    ]

    def render(path: str) -> None:
        from .plotting import plot_max_distance

        plot_max_distance(entries, path,
                          title=f"{args.protocol}-state protocol, decoy pulses")

    return lines, render


def _dispatch(args: argparse.Namespace) -> tuple[list[str], object]:
    if args.subcommand == "decoy":
        handlers = {
            "rate": _cmd_decoy_rate,
            "sweep": _cmd_decoy_sweep,
            "max-distance": _cmd_decoy_max_distance,
        }
        return handlers[args.decoy_subcommand](args)
    handlers = {
        "rate": _cmd_rate,
        "sweep": _cmd_sweep,
        "max-distance": _cmd_max_distance,
        "bounds": _cmd_bounds,
        "region": _cmd_region,
    }
    return handlers[args.subcommand](args)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        lines, render = _dispatch(args)
    except (DeadLinkError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    plot_path = getattr(args, "plot", None)
    if plot_path and render is not None:
        render(plot_path)
    return 0


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
