"""JSON specs in, CSV and SVG out.

Curve spec::

    {"domain": [t0, t1], "gamma": [b, c, d], "nu1": [b, c, d], "nu2": [b, c, d]}

Curvature spec::

    {"l": e, "m": e, "n": e, "alpha": e,
     "init": {"nu1_0": [b, c, d], "nu2_0": [b, c, d], "gamma0": [b, c, d], "t0": t},
     "grid": {"t_min": t, "t_max": t, "h": h}}

Expressions may be given as strings or plain numbers.
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Mapping, Sequence
from xml.etree import ElementTree as ET

import numpy as np

from .algebra import SpatialHybrid
from .errors import SpecError
from .expr import ScalarFn
from .framed import FramedCurve, SpaceCurve

COMPONENTS = ("b", "c", "d")


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise SpecError(f"{path}: top level must be a JSON object")
    return data


def _expr_text(value, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise SpecError(f"{where}: expected an expression string or number")
    return value if isinstance(value, str) else repr(float(value))


def _triple(spec: Mapping, key: str, where: str) -> list:
    value = spec.get(key)
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise SpecError(f"{where}{key}: expected a list of 3 components")
    return list(value)


def _domain(value, where: str) -> tuple[float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise SpecError(f"{where}: expected [t_min, t_max]")
    lo, hi = (_number(v, where) for v in value)
    if not lo < hi:
        raise SpecError(f"{where}: need t_min < t_max")
    return lo, hi


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SpecError(f"{where}: expected a finite number")
    return float(value)


def curve_parts(spec: Mapping) -> tuple[SpaceCurve, SpaceCurve, SpaceCurve]:
    """Parse a curve spec into ``(gamma, nu1, nu2)`` without validating the frame.

    Raises ExprSyntaxError for malformed expressions and SpecError for a
    malformed document.
    """
    if "domain" not in spec:
        raise SpecError("curve spec: missing 'domain'")
    domain = _domain(spec["domain"], "curve spec: domain")
    parts = []
    for key in ("gamma", "nu1", "nu2"):
        comps = _triple(spec, key, "curve spec: ")
        texts = [_expr_text(v, f"curve spec: {key}[{i}]") for i, v in enumerate(comps)]
        parts.append(SpaceCurve.from_text(texts, domain))
    return tuple(parts)


def curve_from_spec(spec: Mapping, **kwargs) -> FramedCurve:
    """Validated framed curve from a curve spec; ``kwargs`` go to FramedCurve."""
    gamma, nu1, nu2 = curve_parts(spec)
    return FramedCurve(gamma, nu1, nu2, **kwargs)


def curve_to_spec(fc) -> dict:
    return {
        "domain": list(fc.domain),
        "gamma": fc.gamma.to_text(),
        "nu1": fc.nu1.to_text(),
        "nu2": fc.nu2.to_text(),
    }


def curvature_from_spec(spec: Mapping):
    """``((l, m, n, alpha), InitialFrame, (t_min, t_max, h))`` from a curvature spec."""
    from .reconstruct import InitialFrame

    fns = []
    for key in ("l", "m", "n", "alpha"):
        if key not in spec:
            raise SpecError(f"curvature spec: missing '{key}'")
        fns.append(ScalarFn(_expr_text(spec[key], f"curvature spec: {key}")))
    init = spec.get("init")
    if not isinstance(init, dict):
        raise SpecError("curvature spec: missing 'init' object")
    vecs = {}
    for key in ("nu1_0", "nu2_0", "gamma0"):
        if key == "gamma0" and key not in init:
            vecs[key] = SpatialHybrid()
            continue
        comps = _triple(init, key, "curvature spec: init.")
        vecs[key] = SpatialHybrid(*(_number(v, f"curvature spec: init.{key}") for v in comps))
    t0 = _number(init.get("t0", 0.0), "curvature spec: init.t0")
    try:
        frame = InitialFrame(vecs["nu1_0"], vecs["nu2_0"], t0, vecs["gamma0"])
    except ValueError as exc:
        raise SpecError(f"curvature spec: init: {exc}") from exc
    grid = spec.get("grid", {})
    if not isinstance(grid, dict):
        raise SpecError("curvature spec: 'grid' must be an object")
    t_min = _number(grid.get("t_min", t0), "curvature spec: grid.t_min")
    t_max = _number(grid.get("t_max", t_min + 1.0), "curvature spec: grid.t_max")
    h = _number(grid.get("h", 1e-3), "curvature spec: grid.h")
    if not t_min < t_max or not h > 0:
        raise SpecError("curvature spec: grid needs t_min < t_max and h > 0")
    if not t_min <= t0 <= t_max:
        raise SpecError("curvature spec: init.t0 lies outside the grid")
    return tuple(fns), frame, (t_min, t_max, h)


# --- CSV ---------------------------------------------------------------------

def format_number(x) -> str:
    """Shortest decimal that round-trips to the same double; independent of locale."""
    return repr(float(x))


def csv_text(columns: Mapping[str, np.ndarray]) -> str:
    names = list(columns)
    data = [np.asarray(columns[k], dtype=float) for k in names]
    n = len(data[0])
    if any(len(col) != n for col in data):
        raise ValueError("all CSV columns must have the same length")
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(names)
    for i in range(n):
        writer.writerow([format_number(col[i]) for col in data])
    return buf.getvalue()


def write_csv(path, columns: Mapping[str, np.ndarray]) -> Path:
    path = Path(path)
    path.write_bytes(csv_text(columns).encode("ascii"))
    return path


def read_csv(path) -> dict[str, np.ndarray]:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    arr = np.array([[float(v) for v in row] for row in body]).reshape(len(body), len(header))
    return {name: arr[:, i] for i, name in enumerate(header)}


def curve_columns(prefix: str, values: np.ndarray) -> dict[str, np.ndarray]:
    return {f"{prefix}_{c}": values[:, i] for i, c in enumerate(COMPONENTS)}


# --- SVG ---------------------------------------------------------------------

COLORS = {
    "gamma": "black",
    "evolute": "blue",
    "involute": "red",
    "pedal": "green",
    "contrapedal": "magenta",
}

PLANES = (("b", "c", 0, 1), ("b", "d", 0, 2), ("c", "d", 1, 2))
_PANEL, _PAD = 320.0, 20.0


def _segments(xy: np.ndarray):
    """Split a polyline at non-finite samples."""
    ok = np.all(np.isfinite(xy), axis=1)
    start = None
    for i, flag in enumerate(np.append(ok, False)):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if i - start >= 2:
                yield xy[start:i]
            start = None


def svg_text(curves: Sequence[tuple[str, str, np.ndarray]], title: str = "") -> str:
    """SVG 1.1 document with one orthographic viewport per coordinate plane.

    ``curves`` holds ``(label, color, values)`` with values of shape ``(N, 3)``.
    """
    width = 3 * _PANEL + 4 * _PAD
    height = _PANEL + 2 * _PAD + 30.0
    root = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg", "version": "1.1",
        "width": f"{width:g}", "height": f"{height:g}",
        "viewBox": f"0 0 {width:g} {height:g}",
    })
    if title:
        ET.SubElement(root, "title").text = title
    for k, (u, v, iu, iv) in enumerate(PLANES):
        pts = [vals[:, [iu, iv]] for _, _, vals in curves]
        finite = np.concatenate([p[np.all(np.isfinite(p), axis=1)] for p in pts] or [np.zeros((0, 2))])
        if len(finite) == 0:
            finite = np.zeros((1, 2))
        lo, hi = finite.min(axis=0), finite.max(axis=0)
        span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
        centre = (lo + hi) / 2.0
        box = (centre[0] - 0.55 * span, -(centre[1] + 0.55 * span), 1.1 * span, 1.1 * span)
        port = ET.SubElement(root, "svg", {
            "class": "viewport", "id": f"plane-{u}{v}",
            "x": f"{_PAD + k * (_PANEL + _PAD):g}", "y": f"{_PAD + 30.0:g}",
            "width": f"{_PANEL:g}", "height": f"{_PANEL:g}",
            "viewBox": " ".join(f"{x:.6g}" for x in box),
        })
        ET.SubElement(port, "rect", {
            "x": f"{box[0]:.6g}", "y": f"{box[1]:.6g}", "width": f"{box[2]:.6g}",
            "height": f"{box[3]:.6g}", "fill": "none", "stroke": "#999999",
            "stroke-width": "1", "vector-effect": "non-scaling-stroke",
        })
        for (label, color, _), p in zip(curves, pts):
            for seg in _segments(p):
                ET.SubElement(port, "polyline", {
                    "class": label, "fill": "none", "stroke": color, "stroke-width": "1.5",
                    "vector-effect": "non-scaling-stroke",
                    "points": " ".join(f"{a:.6g},{-b:.6g}" for a, b in seg),
                })
        caption = ET.SubElement(root, "text", {
            "x": f"{_PAD + k * (_PANEL + _PAD) + _PANEL / 2:g}", "y": f"{_PAD + 20.0:g}",
            "text-anchor": "middle", "font-family": "sans-serif", "font-size": "14",
        })
        caption.text = f"{u}-{v} plane"
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"


def write_svg(path, curves, title: str = "") -> Path:
    path = Path(path)
    path.write_text(svg_text(curves, title), encoding="utf-8")
    return path
