"""CSV and SVG output for sweep reports. Both are byte-for-byte deterministic."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Optional

from .diagnostics import SweepReport

CSV_HEADER = "epsilon,alpha,kind,value,t_final,dx,dt,cfl,coefficient"


def _num(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def csv_text(report: Optional[SweepReport]) -> str:
    lines = [CSV_HEADER]
    if report is not None:
        for r in report.rows:
            value = "failed" if r.failed else _num(r.value)
            lines.append(
                ",".join(
                    [
                        _num(r.eps),
                        _num(r.alpha),
                        r.kind,
                        value,
                        _num(report.t_final),
                        _num(report.dx),
                        _num(r.dt),
                        _num(report.cfl),
                        report.coefficient,
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def csv_text_many(reports: list[SweepReport]) -> str:
    body = [csv_text(r).splitlines()[1:] for r in reports]
    return "\n".join([CSV_HEADER] + [ln for chunk in body for ln in chunk]) + "\n"


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit_csv(report, path) -> None:
    if isinstance(report, list):
        _write(path, csv_text_many(report))
    else:
        _write(path, csv_text(report))


_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 80, 20, 40, 60


def _decades(lo: float, hi: float) -> list[int]:
    return list(range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1))


def svg_text(report: SweepReport, title: Optional[str] = None) -> str:
    """Single polyline of value against epsilon on log-x axes (log-y for norms)."""
    pts = [(r.eps, r.value) for r in report.rows if not r.failed and r.value > 0]
    log_y = report.rows[0].kind == "norm" if report.rows else False
    ylabel = "||u_eps - u_exact||_L2" if report.rows and report.rows[0].kind == "error" else "||u_eps||_L2"
    if title is None:
        title = f"{report.coefficient}, t={report.t_final:g}"
        if log_y:
            title += " (log-y)"
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{title}</text>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
        f'<text x="{_LEFT + pw / 2:.1f}" y="{_H - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">epsilon</text>',
        f'<text x="18" y="{_TOP + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13" transform="rotate(-90 18 {_TOP + ph / 2:.1f})">{ylabel}</text>',
    ]
    if pts:
        xs = [math.log10(e) for e, _ in pts]
        xd = _decades(min(e for e, _ in pts), max(e for e, _ in pts))
        x0, x1 = xd[0], max(xd[-1], xd[0] + 1)
        if log_y:
            ys = [math.log10(v) for _, v in pts]
        else:
            ys = [v for _, v in pts]
        y0, y1 = min(ys), max(ys)
        if y1 - y0 < 1e-12 * max(1.0, abs(y1)):
            pad = 0.5 if log_y else max(abs(y1) * 0.1, 1e-12)
            y0, y1 = y0 - pad, y1 + pad
        else:
            pad = 0.05 * (y1 - y0)
            y0, y1 = y0 - pad, y1 + pad

        def px(lx):
            return _LEFT + (lx - x0) / (x1 - x0) * pw

        def py(y):
            return _TOP + ph - (y - y0) / (y1 - y0) * ph

        for d in range(x0, x1 + 1):
            X = px(d)
            out.append(
                f'<line x1="{X:.2f}" y1="{_TOP + ph}" x2="{X:.2f}" y2="{_TOP + ph + 5}" stroke="black"/>'
            )
            out.append(
                f'<text x="{X:.2f}" y="{_TOP + ph + 20}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="12">1e{d}</text>'
            )
        for k in range(5):
            y = y0 + (y1 - y0) * k / 4
            label = f"{10 ** y:.3g}" if log_y else f"{y:.3g}"
            Y = py(y)
            out.append(f'<line x1="{_LEFT - 5}" y1="{Y:.2f}" x2="{_LEFT}" y2="{Y:.2f}" stroke="black"/>')
            out.append(
                f'<text x="{_LEFT - 8}" y="{Y + 4:.2f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{label}</text>'
            )
        coords = " ".join(f"{px(lx):.2f},{py(y):.2f}" for lx, y in zip(xs, ys))
        out.append(f'<polyline points="{coords}" fill="none" stroke="#1f4e9c" stroke-width="2"/>')
        for lx, y in zip(xs, ys):
            out.append(f'<circle cx="{px(lx):.2f}" cy="{py(y):.2f}" r="3" fill="#1f4e9c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(report: SweepReport, path, title: Optional[str] = None) -> None:
    _write(path, svg_text(report, title))
