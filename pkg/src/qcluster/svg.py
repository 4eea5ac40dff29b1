"""Standalone SVG plots: cluster scatter with centroid markers, elbow curve.

Output is plain text with fixed number formatting, so identical inputs
give byte-identical files.
"""

from __future__ import annotations

import logging
from xml.sax.saxutils import escape

import numpy as np

log = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f")
WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 40, 60


def _f(v: float) -> str:
    return f"{v:.2f}"


class _Frame:
    def __init__(self, xlim, ylim):
        self.xlim, self.ylim = xlim, ylim

    def x(self, v):
        lo, hi = self.xlim
        return LEFT + (v - lo) / ((hi - lo) or 1.0) * (WIDTH - LEFT - RIGHT)

    def y(self, v):
        lo, hi = self.ylim
        return HEIGHT - BOTTOM - (v - lo) / ((hi - lo) or 1.0) * (HEIGHT - TOP - BOTTOM)


def _axes(frame: _Frame, title: str, xlabel: str, ylabel: str, ticks: int = 5) -> list[str]:
    x0, x1 = LEFT, WIDTH - RIGHT
    y0, y1 = HEIGHT - BOTTOM, TOP
    out = [
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-size="16">{escape(title)}</text>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line class="axis" x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text class="xlabel" x="{(x0 + x1) / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" '
        f'font-size="13">{escape(xlabel)}</text>',
        f'<text class="ylabel" x="18" y="{(y0 + y1) / 2:.2f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2:.2f})">{escape(ylabel)}</text>',
    ]
    for i in range(ticks + 1):
        xv = frame.xlim[0] + i * (frame.xlim[1] - frame.xlim[0]) / ticks
        yv = frame.ylim[0] + i * (frame.ylim[1] - frame.ylim[0]) / ticks
        px, py = frame.x(xv), frame.y(yv)
        out.append(f'<line x1="{_f(px)}" y1="{y0}" x2="{_f(px)}" y2="{y0 + 5}" stroke="black"/>')
        out.append(
            f'<text x="{_f(px)}" y="{y0 + 18}" text-anchor="middle" font-size="11">{xv:.3g}</text>'
        )
        out.append(f'<line x1="{x0 - 5}" y1="{_f(py)}" x2="{x0}" y2="{_f(py)}" stroke="black"/>')
        out.append(
            f'<text x="{x0 - 8}" y="{_f(py + 4)}" text-anchor="end" font-size="11">{yv:.3g}</text>'
        )
    return out


def _document(body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    return "\n".join(
        ['<?xml version="1.0" encoding="UTF-8"?>', head,
         f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>', *body, "</svg>", ""]
    )


def scatter_svg(data, assignments, centroids, title: str, value_range=(0.0, 1.0),
                xlabel: str = "Vendor/Project", ylabel: str = "Product") -> str:
    """Scatter of the first two features, one colour per cluster.

    Every non-empty cluster gets a red X at its centroid; centroids of
    empty clusters are skipped with a warning.
    """
    data = np.asarray(data, dtype=float)
    assignments = np.asarray(assignments)
    centroids = np.asarray(centroids, dtype=float)
    frame = _Frame(value_range, value_range)
    body = _axes(frame, title, xlabel, ylabel)
    body.append('<g class="points">')
    for (xv, yv), label in zip(data[:, :2], assignments):
        colour = PALETTE[int(label) % len(PALETTE)]
        body.append(
            f'<circle class="point" data-cluster="{int(label)}" cx="{_f(frame.x(xv))}" '
            f'cy="{_f(frame.y(yv))}" r="3" fill="{colour}" fill-opacity="0.7"/>'
        )
    body.append("</g>")
    counts = np.bincount(assignments, minlength=centroids.shape[0]) if assignments.size else []
    body.append('<g class="centroids">')
    for j, c in enumerate(centroids):
        if counts[j] == 0 or not np.all(np.isfinite(c[:2])):
            log.warning("cluster %d is empty; no centroid marker drawn", j)
            continue
        cx, cy, r = frame.x(c[0]), frame.y(c[1]), 7
        body.append(
            f'<path class="centroid" data-cluster="{j}" d="M{_f(cx - r)},{_f(cy - r)} '
            f'L{_f(cx + r)},{_f(cy + r)} M{_f(cx - r)},{_f(cy + r)} L{_f(cx + r)},{_f(cy - r)}" '
            f'stroke="red" stroke-width="3"/>'
        )
    body.append("</g>")
    return _document(body)


def elbow_svg(curve, suggested_k: int | None = None, title: str = "Elbow method") -> str:
    ks = [k for k, _ in curve]
    ws = [w for _, w in curve]
    kmin, kmax = min(ks), max(ks)
    if kmin == kmax:
        kmin, kmax = kmin - 1, kmax + 1
    wmax = max(ws) if max(ws) > 0 else 1.0
    frame = _Frame((kmin, kmax), (0.0, wmax * 1.05))
    body = _axes(frame, title, "Number of clusters (k)", "WCSS")
    pts = " ".join(f"{_f(frame.x(k))},{_f(frame.y(w))}" for k, w in curve)
    body.append(f'<polyline class="curve" points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2"/>')
    for k, w in curve:
        fill = "red" if k == suggested_k else "#1f77b4"
        body.append(
            f'<circle class="elbow-point" data-k="{k}" cx="{_f(frame.x(k))}" cy="{_f(frame.y(w))}" '
            f'r="4" fill="{fill}"/>'
        )
    return _document(body)
