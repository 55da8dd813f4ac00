"""Static SVG output: bifurcation diagram and field heatmaps.

The viewport is fixed and ticks follow a 1-2-5 rule, with coordinates printed
to two decimals, so identical data gives byte-identical files.
"""

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 480
MARGIN = {"left": 70, "right": 190, "top": 30, "bottom": 50}
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")


def nice_ticks(lo, hi, target=5):
    """Ticks at multiples of 1, 2 or 5 times a power of ten covering [lo, hi]."""
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("tick range must be finite")
    if hi <= lo:
        pad = abs(lo) * 0.1 or 1.0
        lo, hi = lo - pad, hi + pad
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    stop = math.ceil(hi / step) * step
    count = int(round((stop - start) / step))
    return [start + i * step for i in range(count + 1)]


def _num(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.6g}"


class _Axes:
    def __init__(self, xlo, xhi, ylo, yhi):
        self.xt = nice_ticks(xlo, xhi)
        self.yt = nice_ticks(ylo, yhi)
        self.x0, self.x1 = MARGIN["left"], WIDTH - MARGIN["right"]
        self.y0, self.y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def px(self, x):
        lo, hi = self.xt[0], self.xt[-1]
        return self.x0 + (x - lo) / (hi - lo) * (self.x1 - self.x0)

    def py(self, y):
        lo, hi = self.yt[0], self.yt[-1]
        return self.y0 + (y - lo) / (hi - lo) * (self.y1 - self.y0)

    def frame(self, xlabel, ylabel):
        out = [f'<rect x="{self.x0}" y="{self.y1}" width="{self.x1 - self.x0}" '
               f'height="{self.y0 - self.y1}" fill="none" stroke="#000"/>']
        for t in self.xt:
            x = _num(self.px(t))
            out.append(f'<line class="xtick" x1="{x}" y1="{self.y0}" x2="{x}" y2="{self.y0 + 5}" '
                       'stroke="#000"/>')
            out.append(f'<text x="{x}" y="{self.y0 + 18}" text-anchor="middle">{_label(t)}</text>')
        for t in self.yt:
            y = _num(self.py(t))
            out.append(f'<line class="ytick" x1="{self.x0 - 5}" y1="{y}" x2="{self.x0}" y2="{y}" '
                       'stroke="#000"/>')
            out.append(f'<text x="{self.x0 - 8}" y="{y}" text-anchor="end" '
                       f'dominant-baseline="middle">{_label(t)}</text>')
        out.append(f'<text x="{(self.x0 + self.x1) / 2:.2f}" y="{HEIGHT - 10}" '
                   f'text-anchor="middle">{escape(xlabel)}</text>')
        out.append(f'<text x="16" y="{(self.y0 + self.y1) / 2:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {(self.y0 + self.y1) / 2:.2f})">{escape(ylabel)}</text>')
        return out


def _document(body, width=WIDTH, height=HEIGHT):
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" '
            'font-size="11">')
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="#fff"/>', *body,
                      "</svg>"]) + "\n"


def bifurcation_svg(lambda0, branches, verdicts=(), signed=True, title="bifurcation diagram"):
    """lambda on the abscissa, (signed) amplitude on the ordinate.

    The trivial branch is the line amplitude = 0; each nontrivial branch is one
    polyline with one vertex per point. The legend lists branches and verdicts.
    """
    series = []
    for b in branches:
        lams = [p.lam for p in b.points]
        amps = [p.signed_amplitude if signed else p.amplitude for p in b.points]
        series.append((b, lams, amps))
    all_l = [lambda0] + [v for _, ls, _ in series for v in ls]
    all_a = [0.0] + [v for _, _, a in series for v in a]
    span = max(all_l) - min(all_l)
    pad = 0.05 * span if span > 0 else max(abs(lambda0) * 0.05, 0.05)
    ax = _Axes(min(all_l) - pad, max(all_l) + pad, min(all_a), max(all_a))
    body = [f'<text x="{MARGIN["left"]}" y="18">{escape(title)}</text>']
    body += ax.frame("lambda", "signed amplitude" if signed else "amplitude")
    y0 = _num(ax.py(0.0))
    body.append(f'<line class="trivial" x1="{_num(ax.x0)}" y1="{y0}" x2="{_num(ax.x1)}" '
                f'y2="{y0}" stroke="#555" stroke-dasharray="4 3"/>')
    body.append(f'<circle class="lambda0" cx="{_num(ax.px(lambda0))}" cy="{y0}" r="4" '
                'fill="#000"/>')
    for i, (b, lams, amps) in enumerate(series):
        pts = " ".join(f"{_num(ax.px(l))},{_num(ax.py(a))}" for l, a in zip(lams, amps))
        body.append(f'<polyline class="branch" data-label="{escape(b.label)}" points="{pts}" '
                    f'fill="none" stroke="{PALETTE[i % len(PALETTE)]}" stroke-width="1.5"/>')
    lx = WIDTH - MARGIN["right"] + 12
    ly = MARGIN["top"] + 10
    entries = [("trivial", "#555")] + [
        (f"{b.label or 'branch'} ({b.direction})", PALETTE[i % len(PALETTE)])
        for i, (b, _, _) in enumerate(series)]
    body.append(f'<g class="legend"><text x="{lx}" y="{ly}">lambda0 = {_label(lambda0)}</text>')
    for k, (text, color) in enumerate(entries):
        y = ly + 16 * (k + 1)
        body.append(f'<line x1="{lx}" y1="{y - 4}" x2="{lx + 16}" y2="{y - 4}" stroke="{color}" '
                    'stroke-width="2"/>')
        body.append(f'<text x="{lx + 22}" y="{y}">{escape(text)}</text>')
    base = ly + 16 * (len(entries) + 1)
    for k, v in enumerate(verdicts):
        body.append(f'<text class="verdict" x="{lx}" y="{base + 16 * k}">verdict: '
                    f'{escape(v.kind)}</text>')
    body.append("</g>")
    return _document(body)


def _color(t):
    """Diverging blue-white-red map for t in [-1, 1]."""
    t = max(-1.0, min(1.0, t))
    if t >= 0:
        r, g, b = 255, int(round(255 * (1 - t))), int(round(255 * (1 - t)))
    else:
        r, g, b = int(round(255 * (1 + t))), int(round(255 * (1 + t))), 255
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap_svg(values, title="field", size=420):
    """Square heatmap of a 2-D array (rows = x index, columns = y index), y pointing up."""
    arr = np.asarray(values, dtype=float)
    nx, ny = arr.shape
    vmax = float(np.max(np.abs(arr))) or 1.0
    top, left = 30, 20
    cw, ch = size / nx, size / ny
    body = [f'<text x="{left}" y="18">{escape(title)} (|max| = {_label(vmax)})</text>']
    for i in range(nx):
        for j in range(ny):
            x = left + i * cw
            y = top + (ny - 1 - j) * ch
            body.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(cw)}" height="{_num(ch)}" '
                        f'fill="{_color(arr[i, j] / vmax)}"/>')
    return _document(body, width=size + 2 * left, height=size + top + 20)


def write_svg(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


__all__ = ["bifurcation_svg", "heatmap_svg", "nice_ticks", "write_svg"]
