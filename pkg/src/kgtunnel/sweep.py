"""Parameter sweeps, edge-limit tables and figure presets.

Everything here is plain data in, rows out; :mod:`kgtunnel.cli` only
parses flags and writes files.  Rows are dictionaries keyed by the
column names below, with values already in their serialized types.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, NumericalError
from .kinematics import BarrierConfig, Zone, classify_zones, rho2, zone_edges
from .scattering import exact_transmission, exact_transmission_probability, printed_transmission_probability
from .times import Branch, Edge, dwell_time_ratio, edge_limits, phase_time_ratio

SCHEMA_VERSION = 1

SWEEP_COLUMNS = (
    "upsilon", "wL", "n2", "zone", "rho2", "T_mod2", "phase", "t_phi_norm", "t_dwell_norm", "branch",
)
LIMIT_COLUMNS = (
    "edge", "upsilon", "wL", "n2", "T_mod", "t_phi_norm", "t_dwell_norm",
    "t_phi_norm_fixed_wL", "t_dwell_norm_fixed_wL",
)

MODELS = ("printed", "exact")
FIGURE_UPSILONS = (0.0, 1.0, 2.0, 5.0, 10.0)
FIGURE_WL = 2 * math.pi
#: n2 spacing of the figure presets; the zone edges v/2 +- 1 fall on the grid
FIGURE_N2_STEP = 1e-3
#: finer spacing used within FIGURE_EDGE_WINDOW of a zone edge (or of n2 = 0)
FIGURE_N2_FINE = 1e-4
FIGURE_EDGE_WINDOW = 0.05


class Observable(str, Enum):
    TRANSMISSION = "transmission"
    PHASE_TIME = "phase_time"
    DWELL_TIME = "dwell_time"
    EDGE_LIMITS = "edge_limits"
    PACKET_DELAY = "packet_delay"


@dataclass(frozen=True)
class SweepRequest:
    observable: Observable
    upsilons: tuple[float, ...]
    wls: tuple[float, ...]
    n2_min: float
    n2_max: float
    steps: int
    fmt: str = "csv"
    out: str | None = None
    model: str = "printed"

    def __post_init__(self):
        object.__setattr__(self, "observable", Observable(self.observable))
        if not self.upsilons or not self.wls:
            raise DomainError("at least one upsilon and one wL are required")
        if any(not (math.isfinite(u) and u >= 0) for u in self.upsilons):
            raise DomainError(f"upsilon values must be finite and >= 0, got {self.upsilons}")
        if any(not (math.isfinite(w) and w > 0) for w in self.wls):
            raise DomainError(f"wL values must be finite and > 0, got {self.wls}")
        if self.steps < 2:
            raise DomainError(f"steps must be >= 2, got {self.steps}")
        if not (0 < self.n2_min < self.n2_max and math.isfinite(self.n2_max)):
            raise DomainError(f"need 0 < n2_min < n2_max, got [{self.n2_min}, {self.n2_max}]")
        if self.fmt not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.fmt!r}")
        if self.model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}, got {self.model!r}")

    @property
    def n2_grid(self) -> np.ndarray:
        return np.linspace(self.n2_min, self.n2_max, self.steps)


# ---------------------------------------------------------------------------
# row builders


def sweep_block(upsilon: float, wL: float, n2: Sequence[float], model: str = "printed") -> list[dict]:
    """One row per n2 (sorted ascending) at fixed (upsilon, wL).

    ``model="printed"`` uses the printed |T|**2 and dwell denominator,
    continued analytically through the edges; ``"exact"`` uses the
    continuity-problem amplitude.  Phase and phase time are the same in
    both.  The phase is arg T made continuous along the grid.
    """
    if model not in MODELS:
        raise DomainError(f"model must be one of {MODELS}, got {model!r}")
    n2 = np.sort(np.asarray(n2, dtype=float))
    zones = classify_zones(n2, upsilon)
    r2 = rho2(n2, upsilon)
    if model == "printed":
        tmod2 = printed_transmission_probability(n2, upsilon, wL)
    else:
        tmod2 = exact_transmission_probability(n2, upsilon, wL)
    phase = np.unwrap(np.angle(exact_transmission(n2, upsilon, wL)))
    tphi = phase_time_ratio(n2, upsilon, wL)
    tdw = dwell_time_ratio(n2, upsilon, wL, model)
    rows = []
    for i, nn in enumerate(n2):
        values = dict(rho2=r2[i], T_mod2=tmod2[i], phase=phase[i], t_phi_norm=tphi[i], t_dwell_norm=tdw[i])
        bad = [k for k, v in values.items() if not math.isfinite(v)]
        if bad:
            raise NumericalError(
                f"non-finite {', '.join(bad)} at upsilon={upsilon!r}, wL={wL!r}, n2={nn!r}"
            )
        zone = zones[i]
        branch = Branch.EDGE_LIMIT if zone is Zone.BOUNDARY else Branch.CLOSED_FORM
        row = dict(upsilon=float(upsilon), wL=float(wL), n2=float(nn), zone=zone.value)
        row.update({k: float(v) for k, v in values.items()})
        row["branch"] = branch.value
        rows.append(row)
    return rows


def run_sweep_rows(req: SweepRequest) -> list[dict]:
    """Rows of a transmission / phase-time / dwell-time sweep.

    Blocks are evaluated concurrently and concatenated in (upsilon, wL)
    order, so output is independent of scheduling.
    """
    if req.observable in (Observable.EDGE_LIMITS, Observable.PACKET_DELAY):
        raise DomainError(f"{req.observable.value} is not a grid sweep observable")
    keys = sorted({(u, w) for u in req.upsilons for w in req.wls})
    grid = req.n2_grid
    with ThreadPoolExecutor() as pool:
        blocks = list(pool.map(lambda key: sweep_block(key[0], key[1], grid, req.model), keys))
    return [row for block in blocks for row in block]


def limit_row(upsilon: float, wL: float, edge: Edge, model: str = "printed") -> dict:
    """Printed edge limits plus the fixed-wL value of the closed forms."""
    cfg = BarrierConfig.from_normalized(upsilon, wL)
    lim = edge_limits(cfg, edge)
    return dict(
        edge=lim.edge.value,
        upsilon=float(upsilon),
        wL=float(wL),
        n2=float(lim.n2),
        T_mod=float(lim.transmission),
        t_phi_norm=float(lim.t_phi_norm),
        t_dwell_norm=float(lim.t_dwell_norm),
        t_phi_norm_fixed_wL=float(phase_time_ratio(lim.n2, upsilon, wL)),
        t_dwell_norm_fixed_wL=float(dwell_time_ratio(lim.n2, upsilon, wL, model)),
    )


def limit_rows(upsilons: Iterable[float], wls: Iterable[float], model: str = "printed") -> list[dict]:
    """Edge-limit table; edges that do not exist for an upsilon are skipped."""
    rows = []
    for u in sorted(set(upsilons)):
        for w in sorted(set(wls)):
            for edge in (Edge.LOWER, Edge.UPPER):
                lo, _ = zone_edges(u)
                if u <= 0 or (edge is Edge.LOWER and lo <= 0):
                    continue
                rows.append(limit_row(u, w, edge, model))
    return rows


# ---------------------------------------------------------------------------
# figure presets


def figure_n2_grid(upsilon: float) -> np.ndarray:
    """n2 in (0, upsilon/2 + 3], refined around the zone edges.

    Points are integer multiples of FIGURE_N2_FINE, keeping every tenth
    one away from the edges, so the grid is reproducible and contains the
    edges exactly (up to the final scaling).
    """
    ratio = int(round(FIGURE_N2_STEP / FIGURE_N2_FINE))
    j = np.arange(1, int(round((upsilon / 2 + 3) / FIGURE_N2_FINE)) + 1)
    n2 = j * FIGURE_N2_FINE
    edges = [0.0, *zone_edges(upsilon)]
    near = np.zeros(j.shape, dtype=bool)
    for e in edges:
        near |= np.abs(n2 - e) <= FIGURE_EDGE_WINDOW + FIGURE_N2_FINE / 2
    return n2[(j % ratio == 0) | near]


def preset_rows(name: str, model: str = "printed") -> tuple[tuple[str, ...], list[dict]]:
    """(columns, rows) for figure preset ``fig1`` ... ``fig4``.

    fig1-fig3 share one sweep (|T|**2, t_phi/tau and t_D/tau are all
    columns of it).  fig4 is the edge-limit table along both branches,
    upsilon = 2 n2 + 2 (lower edge) and upsilon = 2 n2 - 2 (upper edge).
    """
    if name in ("fig1", "fig2", "fig3"):
        rows = []
        for u in FIGURE_UPSILONS:
            rows.extend(sweep_block(u, FIGURE_WL, figure_n2_grid(u), model))
        return SWEEP_COLUMNS, rows
    if name == "fig4":
        n2 = np.arange(1, 601) * 1e-2
        rows = [limit_row(2 * x + 2, FIGURE_WL, Edge.LOWER, model) for x in n2]
        rows += [limit_row(2 * x - 2, FIGURE_WL, Edge.UPPER, model) for x in n2 if x > 1]
        return LIMIT_COLUMNS, rows
    raise DomainError(f"unknown preset {name!r}; choose fig1, fig2, fig3 or fig4")


# ---------------------------------------------------------------------------
# serialization


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def to_csv(columns: Sequence[str], rows: Sequence[dict], kind: str = "sweep") -> str:
    buf = io.StringIO()
    buf.write(f"# kgtunnel {kind} schema_version={SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def to_json(columns: Sequence[str], rows: Sequence[dict], kind: str = "sweep", **meta) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, **meta, "columns": list(columns), "rows": list(rows)}
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def read_csv(text: str) -> list[dict]:
    """Parse a CSV produced by :func:`to_csv` back into rows of str."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
