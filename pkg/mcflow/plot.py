"""SVG rendering of 2-commodity regions.

matplotlib is imported lazily so the engines run without it. Output is
deterministic: fixed figure size, fixed SVG hash salt, no date metadata.
"""
from __future__ import annotations

import io
import math
from typing import Sequence

from .constants import DEFAULT_EDGE, DEFAULT_FILL, DEFAULT_GRID
from .errors import DimensionError, McflowError
from .regions import PointSet, Polygonal, Region

# one colour per panel when several regions share a figure
PANEL_FILLS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _pyplot():
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as e:  # pragma: no cover
        raise McflowError("matplotlib is required for SVG output (pip install matplotlib)") from e
    matplotlib.rcParams["svg.hashsalt"] = "mcflow"
    matplotlib.rcParams["svg.fonttype"] = "none"
    return plt


def _extent(regions: Sequence[Region]) -> tuple[int, int, int, int]:
    xs, ys = [0], [0]
    for r in regions:
        box = r.bounding_box()
        if box is None:
            continue
        lo, hi = box
        xs += [lo[0], hi[0]]
        ys += [lo[1], hi[1]]
    return math.floor(min(xs)) - 1, math.ceil(max(xs)) + 1, math.floor(min(ys)) - 1, math.ceil(max(ys)) + 1


def render_svg(
    panels: Sequence[tuple[str, Region]],
    *,
    fill: str = DEFAULT_FILL,
    edge: str = DEFAULT_EDGE,
    grid: str = DEFAULT_GRID,
    title: str | None = None,
) -> str:
    """One panel per (label, region), shared integer axes and grid."""
    for label, r in panels:
        if r.k != 2:
            raise DimensionError(f"cannot plot {label!r}: only k=2 regions are drawn")
    plt = _pyplot()
    x0, x1, y0, y1 = _extent([r for _, r in panels])
    fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 4), squeeze=False)
    for n, (ax, (label, region)) in enumerate(zip(axes[0], panels)):
        color = fill if len(panels) == 1 else PANEL_FILLS[n % len(PANEL_FILLS)]
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
        ax.set_xticks(range(x0, x1 + 1))
        ax.set_yticks(range(y0, y1 + 1))
        ax.set_aspect("equal")
        ax.grid(True, color=grid, linewidth=0.5)
        ax.axhline(0, color=edge, linewidth=0.8)
        ax.axvline(0, color=edge, linewidth=0.8)
        if isinstance(region, Polygonal):
            for verts in region.vertex_lists():
                pts = [(float(v[0]), float(v[1])) for v in verts]
                if len(pts) >= 3:
                    ax.add_patch(plt.Polygon(pts, closed=True, facecolor=color, edgecolor=edge, alpha=0.6))
                elif len(pts) == 2:
                    ax.plot(*zip(*pts), color=color, linewidth=2)
                else:
                    ax.plot(*pts[0], marker="o", color=color)
        elif isinstance(region, PointSet):
            pts = region.sorted_points()
            if pts:
                ax.scatter([float(p[0]) for p in pts], [float(p[1]) for p in pts], color=color, zorder=3)
        ax.set_title(label)
        ax.set_xlabel("commodity 1")
        ax.set_ylabel("commodity 2")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()
