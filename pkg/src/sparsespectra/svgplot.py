"""Deterministic SVG scatter plots of eigenvalue clouds.

One ``<circle class="pt">`` element per eigenvalue in CSV row order,
an optional unit-circle outline, fixed float formatting: byte-identical
output for identical inputs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .config import _parse_bool, _parse_float
from .errors import ConfigError
from .reports import parse_eigenvalues_csv

_CANVAS = 640.0
_MARGIN = 40.0

_FIGURE_KEYS = (
    "source",
    "output",
    "re_min",
    "re_max",
    "im_min",
    "im_max",
    "marker_size",
    "overlay",
    "title",
)


@dataclass
class FigureSpec:
    """Inputs of one scatter figure."""

    source: str
    output: str | None = None
    re_min: float = -1.5
    re_max: float = 1.5
    im_min: float = -1.5
    im_max: float = 1.5
    marker_size: float = 2.0
    overlay: bool = True
    title: str = ""

    def __post_init__(self):
        for lo, hi, name in (
            (self.re_min, self.re_max, "re"),
            (self.im_min, self.im_max, "im"),
        ):
            if not (lo < hi) or not (abs(lo) < 1e12 and abs(hi) < 1e12):
                raise ConfigError(f"axis bounds {name}_min < {name}_max must be finite")


def parse_figure_spec(text: str) -> FigureSpec:
    """Figure-spec files use the same `key = value` grammar as configs."""
    seen: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected `key = value`, got {line!r}", lineno)
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _FIGURE_KEYS:
            raise ConfigError(f"unknown figure key {key!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        seen[key] = (value.strip(), lineno)
    if "source" not in seen:
        raise ConfigError("missing required key 'source'", text.count("\n") + 1)
    spec = FigureSpec(source=seen["source"][0])
    if "output" in seen:
        spec.output = seen["output"][0]
    for key in ("re_min", "re_max", "im_min", "im_max", "marker_size"):
        if key in seen:
            value, lineno = seen[key]
            setattr(spec, key, _parse_float(value, lineno, key))
    if "overlay" in seen:
        value, lineno = seen["overlay"]
        spec.overlay = _parse_bool(value, lineno, "overlay")
    if "title" in seen:
        spec.title = seen["title"][0]
    spec.__post_init__()
    return spec


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_scatter_svg(spec: FigureSpec) -> str:
    """Render the eigenvalue CSV at spec.source as an SVG 1.1 document."""
    if not os.path.exists(spec.source):
        raise ConfigError(f"source CSV not found: {spec.source}")
    with open(spec.source, "r", encoding="ascii") as fh:
        e = parse_eigenvalues_csv(fh.read())

    span_re = spec.re_max - spec.re_min
    span_im = spec.im_max - spec.im_min
    inner = _CANVAS - 2.0 * _MARGIN

    def to_x(re: float) -> float:
        return _MARGIN + (re - spec.re_min) / span_re * inner

    def to_y(im: float) -> float:
        return _MARGIN + (spec.im_max - im) / span_im * inner

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_CANVAS:.0f}" height="{_CANVAS:.0f}" '
        f'viewBox="0 0 {_CANVAS:.0f} {_CANVAS:.0f}">',
        f'<rect x="0" y="0" width="{_CANVAS:.0f}" height="{_CANVAS:.0f}" fill="#ffffff"/>',
        f'<rect x="{_MARGIN:.1f}" y="{_MARGIN:.1f}" width="{inner:.1f}" '
        f'height="{inner:.1f}" fill="none" stroke="#999999" stroke-width="1"/>',
    ]
    if spec.title:
        lines.append(
            f'<text x="{_CANVAS / 2:.1f}" y="{_MARGIN - 12.0:.1f}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="16">'
            f"{_escape(spec.title)}</text>"
        )
    if spec.overlay:
        # Reference outline of radius 1.0 in data coordinates.
        rx = inner / span_re
        ry = inner / span_im
        style = 'fill="none" stroke="#cc3333" stroke-width="1.2"'
        if rx == ry:
            lines.append(
                f'<circle class="ref" cx="{to_x(0.0):.4f}" cy="{to_y(0.0):.4f}" '
                f'r="{rx:.4f}" {style}/>'
            )
        else:
            lines.append(
                f'<ellipse class="ref" cx="{to_x(0.0):.4f}" cy="{to_y(0.0):.4f}" '
                f'rx="{rx:.4f}" ry="{ry:.4f}" {style}/>'
            )
    for z in e.points:
        lines.append(
            f'<circle class="pt" cx="{to_x(z.real):.4f}" cy="{to_y(z.imag):.4f}" '
            f'r="{spec.marker_size:.3f}" fill="#1f3a93" fill-opacity="0.75"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
