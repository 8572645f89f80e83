"""Utility grid over all (distributor, censor) pairs and its emitters."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .enumeration import enumerate_censor_actions, enumerate_distributor_strategies
from .game import select_equilibrium
from .model import CensorAction, DistributorStrategy, Equilibrium, ProtocolMix, UtilityParams
from .utility import eval_utility


@dataclass(frozen=True)
class UtilityGrid:
    names: tuple[str, ...]
    rows: tuple[DistributorStrategy, ...]
    cols: tuple[CensorAction, ...]
    cells: np.ndarray  # (len(rows), len(cols)) censor utility
    col_f: np.ndarray  # blocked cover per column
    best_response_col: np.ndarray
    equilibrium_row: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape


def build_grid(
    mix: ProtocolMix,
    params: UtilityParams,
    *,
    workers: int = 1,
    backend: str | None = None,
) -> UtilityGrid:
    """Rows most-skewed first; columns by (f, blocked count, bitmask)."""
    n = len(mix)
    strategies = enumerate_distributor_strategies(mix, params.quantum)
    actions = enumerate_censor_actions(mix)
    f_mask = _kernels.mask_cover_sums(np.array(mix.covers))
    bits = _kernels.mask_bits(n)
    counts = bits.sum(axis=1)
    # lexsort keys are listed least significant first
    order = np.lexsort((np.arange(len(actions)), counts, f_mask))
    col_of_mask = np.empty_like(order)
    col_of_mask[order] = np.arange(len(order))

    shares = np.array([s.shares for s in strategies], dtype=np.int64)
    t = shares @ bits[order].T.astype(np.int64)
    f = np.broadcast_to(f_mask[order], t.shape)
    cells = eval_utility(params, t, f)

    masks, ts, fs = _kernels.best_responses(
        shares, mix.covers, params.d, workers=workers, backend=backend
    )
    eq = select_equilibrium(mix, params, strategies, masks, ts, fs)
    eq_row = strategies.index(eq.strategy)

    return UtilityGrid(
        names=tuple(mix.names),
        rows=tuple(strategies),
        cols=tuple(actions[m] for m in order),
        cells=cells,
        col_f=f_mask[order],
        best_response_col=col_of_mask[masks],
        equilibrium_row=eq_row,
    )


def write_grid_csv(grid: UtilityGrid) -> str:
    n = len(grid.names)
    buf = io.StringIO()
    buf.write(",".join(["distributor_strategy"] + [f"A:{a.bitstring(n)}" for a in grid.cols]))
    buf.write("\n")
    for strategy, row in zip(grid.rows, grid.cells):
        buf.write(strategy.label())
        for u in row.tolist():
            buf.write(f",{u:.6f}")
        buf.write("\n")
    return buf.getvalue()


def utility_color(u: float) -> tuple[int, int, int]:
    """Blue at -100, white at 0, red at +100, linear in between."""
    u = min(100.0, max(-100.0, u))
    if u >= 0:
        fade = round(255 * (1 - u / 100))
        return 255, fade, fade
    fade = round(255 * (1 + u / 100))
    return fade, fade, 255


def render_heatmap_svg(grid: UtilityGrid, width: float = 640, height: float = 960) -> str:
    if width <= 0 or height <= 0:
        raise ValueError("width and height must be positive")
    nrows, ncols = grid.shape
    cw, ch = width / ncols, height / nrows
    out = io.StringIO()
    out.write('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n')
    out.write(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:g}" height="{height:g}" viewBox="0 0 {width:g} {height:g}">\n'
    )
    out.write(
        "<desc>Censor utility heatmap. Rows: distributor strategies, most skewed at top. "
        "Columns: censor blocking sets, lowest false positives at left.</desc>\n"
    )
    out.write('<g id="cells" shape-rendering="crispEdges">\n')
    for i, row in enumerate(grid.cells.tolist()):
        for j, u in enumerate(row):
            r, g, b = utility_color(u)
            out.write(
                f'<rect x="{j * cw:.4f}" y="{i * ch:.4f}" width="{cw:.4f}" height="{ch:.4f}" '
                f'fill="#{r:02x}{g:02x}{b:02x}"/>\n'
            )
    out.write("</g>\n")

    stroke = max(0.5, min(cw, ch) / 6)

    def outline(i: int, j: int, cls: str, colour: str) -> str:
        return (
            f'<rect class="{cls}" x="{j * cw:.4f}" y="{i * ch:.4f}" width="{cw:.4f}" '
            f'height="{ch:.4f}" fill="none" stroke="{colour}" stroke-width="{stroke:.4f}"/>\n'
        )

    out.write('<g id="best-responses">\n')
    for i, j in enumerate(grid.best_response_col.tolist()):
        if i != grid.equilibrium_row:
            out.write(outline(i, j, "best-response", "#000000"))
    out.write("</g>\n")
    eq_col = int(grid.best_response_col[grid.equilibrium_row])
    out.write('<g id="equilibrium">\n')
    out.write(outline(grid.equilibrium_row, eq_col, "equilibrium", "#ff0000"))
    out.write("</g>\n</svg>\n")
    return out.getvalue()


def equilibrium_dict(eq: Equilibrium, mix: ProtocolMix, params: UtilityParams) -> dict:
    return {
        "params": {"c": params.c, "d": params.d, "quantum": params.quantum},
        "distributor_shares": [
            {"protocol": p.name, "share_percent": s} for p, s in zip(mix, eq.strategy.shares)
        ],
        "censor_blocked": eq.response.names(mix),
        "true_positive_percent": eq.outcome.t,
        "false_positive_percent": round(eq.outcome.f, 6),
        "censor_utility": round(eq.outcome.utility, 6),
        "leak_percent": eq.leak,
    }


def write_equilibrium_report(eq: Equilibrium, mix: ProtocolMix, params: UtilityParams) -> str:
    """Equilibrium as a JSON object; utility is printed with six decimals."""
    return dump_report_dict(equilibrium_dict(eq, mix, params))


def dump_report_dict(data: dict) -> str:
    fields = []
    for key, value in data.items():
        if key == "censor_utility":
            text = f"{value:.6f}"
        else:
            text = json.dumps(value)
        fields.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(fields) + "\n}\n"


def read_equilibrium_report(text: str) -> dict:
    return json.loads(text)
