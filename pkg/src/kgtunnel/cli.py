"""Command-line front end.

    kgtunnel sweep   --upsilon 1 --upsilon 10 --wl 6.283 --n2-min 0.01 --n2-max 8 --steps 800
    kgtunnel limits  --upsilon 10 --wl 6.283
    kgtunnel packet  --upsilon 10 --wl 0.0447 --n2 4.1 --sigma-k 1e-3
    kgtunnel preset  fig1 --out fig1.csv

Exit status: 0 on success, 1 on a numerical failure, 2 on a usage error.
Nothing is written when the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import warnings
from pathlib import Path

from scipy import constants

from . import sweep as sw
from .errors import DomainError, NumericalError
from .kinematics import BarrierConfig, energy_point, normalize
from .scattering import exact_transmission_probability
from .times import phase_time_ratio
from .wavepacket import SpectrumSpec, SpectrumStraddleWarning, spectral_distortion, synthesize_transmitted

log = logging.getLogger("kgtunnel")

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2

#: hbar c in MeV fm, to turn fm into 1/MeV
HBARC_MEV_FM = constants.hbar * constants.c / (constants.e * 1e6) / constants.femto

_DEFAULTS = dict(
    upsilon=None, wl=None, n2_min=0.01, n2_max=8.0, steps=800, observable="transmission",
    format="csv", model="printed", sigma_k=1e-3, n2=None, k0=None, points=4096,
)
_LIST_KEYS = ("upsilon", "wl")


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser, grid: bool = True):
    p.add_argument("--upsilon", type=float, action="append", help="V0/m (repeatable)")
    p.add_argument("--wl", type=float, action="append", help="dimensionless width w*L (repeatable)")
    p.add_argument("--mass", type=float, help="particle mass in MeV (with --v0, --length)")
    p.add_argument("--v0", type=float, help="barrier height in MeV")
    p.add_argument("--length", type=float, help="barrier width in fm")
    p.add_argument("--model", choices=sw.MODELS, help="|T| and dwell-time model (default printed)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--config", help="file of key=value lines; command-line flags take precedence")
    if grid:
        p.add_argument("--n2-min", type=float)
        p.add_argument("--n2-max", type=float)
        p.add_argument("--steps", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgtunnel", description="Klein-Gordon barrier tunneling observables")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="observables on an (upsilon, wL, n2) grid")
    _add_common(p)
    p.add_argument("--observable", choices=[o.value for o in sw.Observable])
    p.add_argument("--sigma-k", type=float, help="packet_delay only: sigma_k / k0")

    p = sub.add_parser("limits", help="zone-edge limits of |T|, t_phi/tau, t_D/tau")
    _add_common(p, grid=False)

    p = sub.add_parser("packet", help="wave-packet delay against the phase time")
    _add_common(p, grid=False)
    p.add_argument("--n2", type=float, help="central n2 = k0**2 / w**2")
    p.add_argument("--k0", type=float, help="central momentum (units of w, or MeV with --mass)")
    p.add_argument("--sigma-k", type=float, help="spectral width relative to k0")
    p.add_argument("--points", type=int, help="momentum samples (>= 1024)")

    p = sub.add_parser("preset", help="figure-reproduction sweeps")
    p.add_argument("name", choices=("fig1", "fig2", "fig3", "fig4"))
    p.add_argument("--model", choices=sw.MODELS)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--config")
    return parser


def read_config(path: str) -> dict:
    """key=value lines, '#' comments; list keys take comma-separated values."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if key in _LIST_KEYS:
            out[key] = [_number(v, path, lineno) for v in value.split(",")]
        elif key in ("observable", "format", "model", "out"):
            out[key] = value
        elif key in ("steps", "points"):
            out[key] = int(_number(value, path, lineno))
        else:
            out[key] = _number(value, path, lineno)
    return out


def _number(text: str, path: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{path}:{lineno}: {text!r} is not a number") from None


def _resolve(args: argparse.Namespace) -> dict:
    opts = dict(_DEFAULTS)
    if getattr(args, "config", None):
        cfg = read_config(args.config)
        unknown = set(cfg) - set(vars(args))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        opts.update(cfg)
    opts.update({k: v for k, v in vars(args).items() if v is not None})
    return opts


def _barrier_params(opts: dict) -> tuple[list[float], list[float]]:
    phys = [opts.get(k) for k in ("mass", "v0", "length")]
    if any(v is not None for v in phys):
        if any(v is None for v in phys):
            raise UsageError("--mass, --v0 and --length must be given together")
        if opts.get("upsilon") or opts.get("wl"):
            raise UsageError("give either --upsilon/--wl or --mass/--v0/--length, not both")
        m, v0, length = phys
        cfg = normalize(m, v0, length / HBARC_MEV_FM)
        return [cfg.upsilon], [cfg.wL]
    if not opts.get("upsilon") or not opts.get("wl"):
        raise UsageError("--upsilon and --wl are required (or --mass/--v0/--length)")
    return list(opts["upsilon"]), list(opts["wl"])


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _render(columns, rows, fmt: str, kind: str, **meta) -> str:
    if fmt == "json":
        return sw.to_json(columns, rows, kind=kind, **meta)
    return sw.to_csv(columns, rows, kind=kind)


# ---------------------------------------------------------------------------
# subcommands


def cmd_sweep(opts: dict) -> str:
    ups, wls = _barrier_params(opts)
    req = sw.SweepRequest(
        observable=opts["observable"], upsilons=tuple(ups), wls=tuple(wls),
        n2_min=opts["n2_min"], n2_max=opts["n2_max"], steps=int(opts["steps"]),
        fmt=opts["format"], out=opts.get("out"), model=opts["model"],
    )
    if req.observable is sw.Observable.EDGE_LIMITS:
        return _render(sw.LIMIT_COLUMNS, sw.limit_rows(ups, wls, req.model), req.fmt, "limits")
    if req.observable is sw.Observable.PACKET_DELAY:
        reports = [
            packet_report(BarrierConfig.from_normalized(u, w), float(n2), opts["sigma_k"], int(opts["points"]))
            for u in sorted(set(ups)) for w in sorted(set(wls)) for n2 in req.n2_grid
        ]
        cols = tuple(k for k in reports[0] if k not in ("convergence", "schema_version"))
        rows = [{k: r[k] for k in cols} for r in reports]
        if req.fmt == "json":
            return json.dumps({"schema_version": sw.SCHEMA_VERSION, "kind": "packet_delay", "reports": reports},
                              indent=1, allow_nan=False) + "\n"
        return sw.to_csv(cols, rows, kind="packet_delay")
    return _render(sw.SWEEP_COLUMNS, sw.run_sweep_rows(req), req.fmt, "sweep", model=req.model)


def cmd_limits(opts: dict) -> str:
    ups, wls = _barrier_params(opts)
    if opts["model"] not in sw.MODELS:
        raise DomainError(f"unknown model {opts['model']!r}")
    rows = sw.limit_rows(ups, wls, opts["model"])
    if not rows:
        raise UsageError("no zone edge exists for the given upsilon values (need upsilon > 0)")
    return _render(sw.LIMIT_COLUMNS, rows, opts["format"], "limits", model=opts["model"])


def packet_report(cfg: BarrierConfig, n2: float, rel_width: float, points: int = 4096) -> dict:
    """Measured packet delay, predicted phase time and diagnostics (times in tau units)."""
    spec = SpectrumSpec.centered(cfg, n2, rel_width, n_points=points)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SpectrumStraddleWarning)
        trace = synthesize_transmitted(spec, cfg)
        fine = synthesize_transmitted(
            SpectrumSpec.centered(cfg, n2, rel_width, n_points=2 * points), cfg
        )
    predicted = float(phase_time_ratio(n2, cfg.upsilon, cfg.wL))
    shift = spectral_distortion(spec, cfg)
    pt = energy_point(cfg, n2)
    return {
        "schema_version": sw.SCHEMA_VERSION,
        "upsilon": cfg.upsilon,
        "wL": cfg.wL,
        "n2": n2,
        "zone": pt.zone.value,
        "k0": spec.k0,
        "sigma_k": spec.sigma_k,
        "T_mod2": float(exact_transmission_probability(n2, cfg.upsilon, cfg.wL)),
        "predicted_t_phi_norm": predicted,
        "measured_delay_norm": trace.peak_time,
        "delay_error_norm": trace.peak_time - predicted,
        "free_peak_norm": trace.free_peak_time,
        "naive_delay_norm": 1.0,
        "centroid_shift": shift,
        "centroid_shift_rel": shift / spec.sigma_k,
        "tau": trace.tau if math.isfinite(trace.tau) else None,
        "warning": "spectrum straddles a zone edge" if trace.straddles_edge else None,
        "convergence": {
            "n_points": points,
            "fit_residual": trace.fit_residual,
            "measured_delay_norm_2x": fine.peak_time,
            "grid_change": fine.peak_time - trace.peak_time,
        },
    }


def cmd_packet(opts: dict) -> str:
    ups, wls = _barrier_params(opts)
    if len(ups) != 1 or len(wls) != 1:
        raise UsageError("packet takes a single --upsilon and --wl")
    cfg = BarrierConfig.from_normalized(ups[0], wls[0])
    if (opts["n2"] is None) == (opts["k0"] is None):
        raise UsageError("give exactly one of --n2 and --k0")
    if opts["n2"] is not None:
        n2 = opts["n2"]
    else:
        # in physical mode k0 is in MeV and w in MeV as well
        w = math.sqrt(2 * opts["mass"] * opts["v0"]) if opts.get("mass") else 1.0
        n2 = (opts["k0"] / w) ** 2
    if not n2 > 0:
        raise UsageError(f"central n2 must be positive, got {n2}")
    report = packet_report(cfg, float(n2), opts["sigma_k"], int(opts["points"]))
    return json.dumps(report, indent=1, allow_nan=False) + "\n"


def cmd_preset(opts: dict) -> str:
    columns, rows = sw.preset_rows(opts["name"], opts["model"])
    kind = "limits" if opts["name"] == "fig4" else "sweep"
    return _render(columns, rows, opts["format"], kind, preset=opts["name"], model=opts["model"])


_COMMANDS = dict(sweep=cmd_sweep, limits=cmd_limits, packet=cmd_packet, preset=cmd_preset)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        opts = _resolve(args)
        text = _COMMANDS[args.command](opts)
    except (UsageError, DomainError) as exc:
        print(f"kgtunnel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, FloatingPointError, ValueError) as exc:
        print(f"kgtunnel: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(text, opts.get("out"))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
