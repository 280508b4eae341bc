"""Conjugation-symmetric planar domains and their rasterization.

A domain is described by a small expression tree (:class:`DomainSpec`)
over primitives such as discs, annuli, strips and points, combined with
union, intersection and difference.  :func:`rasterize` samples the tree at
cell centres of a box that is symmetric about the real axis.  The number of
rows is odd so that one row of cells is centred on the real axis, and the
outermost ring of cells is always outside the domain: everything that is
connected to that ring plays the role of the unbounded part of the
complement.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AsymmetricSpec, BoxTooSmall, GridMismatch, SpecParseError

DEFAULT_BOX = (-4.0, 4.0, 4.0)
MARGIN_CELLS = 2


# -- expression tree ---------------------------------------------------------

class DomainSpec:
    """Base class of the domain expression tree.

    ``contains(X, Y, hx, hy)`` evaluates membership at arrays of points;
    ``hx``/``hy`` are the cell sizes, used only by primitives of measure
    zero (points, lines, thin paths), which are widened to the cells they
    touch.  ``bbox()`` is ``None`` for unbounded sets.
    """

    symmetrize: bool = False

    def contains(self, X, Y, hx, hy):
        inside = self._contains(X, Y, hx, hy)
        if self.symmetrize:
            inside = inside | self._contains(X, -Y, hx, hy)
        return inside

    def _contains(self, X, Y, hx, hy):
        raise NotImplementedError

    def bbox(self):
        box = self._bbox()
        if box is not None and self.symmetrize:
            x0, x1, y0, y1 = box
            box = (x0, x1, min(y0, -y1), max(y1, -y0))
        return box

    def _bbox(self):
        return None

    def bounded_parts(self):
        """Bounding boxes of every bounded primitive in the tree."""
        return [b for b in [self.bbox()] if b is not None]

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass
class Plane(DomainSpec):
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        return np.ones(np.shape(X), dtype=bool)

    def to_json(self):
        return {"type": "plane"}


@dataclass
class Disc(DomainSpec):
    center: complex
    radius: float
    closed: bool = False
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        d2 = (X - self.center.real) ** 2 + (Y - self.center.imag) ** 2
        r2 = self.radius ** 2
        return d2 <= r2 if self.closed else d2 < r2

    def _bbox(self):
        c, r = self.center, self.radius
        return (c.real - r, c.real + r, c.imag - r, c.imag + r)

    def to_json(self):
        return _with_flags({"type": "disc", "center": [self.center.real, self.center.imag],
                            "radius": self.radius, "closed": self.closed}, self)


@dataclass
class Rect(DomainSpec):
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    closed: bool = False
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        if self.closed:
            return (X >= self.xmin) & (X <= self.xmax) & (Y >= self.ymin) & (Y <= self.ymax)
        return (X > self.xmin) & (X < self.xmax) & (Y > self.ymin) & (Y < self.ymax)

    def _bbox(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax)

    def to_json(self):
        return _with_flags({"type": "rect", "xmin": self.xmin, "xmax": self.xmax,
                            "ymin": self.ymin, "ymax": self.ymax, "closed": self.closed}, self)


@dataclass
class Annulus(DomainSpec):
    center: float
    r_in: float
    r_out: float
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        d2 = (X - self.center) ** 2 + Y ** 2
        return (d2 > self.r_in ** 2) & (d2 < self.r_out ** 2)

    def _bbox(self):
        return (self.center - self.r_out, self.center + self.r_out, -self.r_out, self.r_out)

    def to_json(self):
        return _with_flags({"type": "annulus", "center": self.center,
                            "r_in": self.r_in, "r_out": self.r_out}, self)


@dataclass
class Strip(DomainSpec):
    """Horizontal strip ``lo < Im z < hi`` (use +-inf for half-planes)."""

    lo: float = -math.inf
    hi: float = math.inf
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        return (Y > self.lo) & (Y < self.hi) & np.isfinite(X)

    def to_json(self):
        return _with_flags({"type": "strip", "lo": _num(self.lo), "hi": _num(self.hi)}, self)


@dataclass
class Line(DomainSpec):
    """The horizontal line ``Im z = y``, widened to one row of cells."""

    y: float = 0.0
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        return (np.abs(Y - self.y) <= 0.5 * hy) & np.isfinite(X)

    def to_json(self):
        return _with_flags({"type": "line", "y": self.y}, self)


@dataclass
class Point(DomainSpec):
    """A single point, widened to the cell(s) containing it."""

    at: complex = 0j
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        return (np.abs(X - self.at.real) <= 0.5 * hx) & (np.abs(Y - self.at.imag) <= 0.5 * hy)

    def _bbox(self):
        return (self.at.real, self.at.real, self.at.imag, self.at.imag)

    def to_json(self):
        return _with_flags({"type": "point", "at": [self.at.real, self.at.imag]}, self)


@dataclass
class Polyline(DomainSpec):
    """Closed ``width``-neighbourhood of a polygonal path (at least one cell thick)."""

    points: tuple[complex, ...]
    width: float = 0.0
    symmetrize: bool = False

    def _contains(self, X, Y, hx, hy):
        w = max(self.width, 0.5 * max(hx, hy))
        out = np.zeros(np.shape(X), dtype=bool)
        pts = [complex(p) for p in self.points]
        if len(pts) == 1:
            pts = pts * 2
        for a, b in zip(pts[:-1], pts[1:]):
            dx, dy = b.real - a.real, b.imag - a.imag
            L2 = dx * dx + dy * dy
            if L2 == 0:
                t = np.zeros(np.shape(X))
            else:
                t = np.clip(((X - a.real) * dx + (Y - a.imag) * dy) / L2, 0.0, 1.0)
            px = a.real + t * dx
            py = a.imag + t * dy
            out |= (X - px) ** 2 + (Y - py) ** 2 <= w * w
        return out

    def _bbox(self):
        xs = [p.real for p in self.points]
        ys = [p.imag for p in self.points]
        w = self.width
        return (min(xs) - w, max(xs) + w, min(ys) - w, max(ys) + w)

    def to_json(self):
        return _with_flags({"type": "polyline", "points": [[p.real, p.imag] for p in self.points],
                            "width": self.width}, self)


@dataclass
class Combine(DomainSpec):
    op: str
    args: list[DomainSpec] = field(default_factory=list)
    symmetrize: bool = False

    def __post_init__(self):
        if self.op not in ("union", "intersection", "difference"):
            raise SpecParseError(f"unknown operator {self.op!r}")
        if self.op == "difference" and not self.args:
            raise SpecParseError("difference needs at least one argument")

    def _contains(self, X, Y, hx, hy):
        if not self.args:
            empty = np.zeros(np.shape(X), dtype=bool)
            return ~empty if self.op == "intersection" else empty
        vals = [a.contains(X, Y, hx, hy) for a in self.args]
        out = vals[0].copy()
        for v in vals[1:]:
            if self.op == "union":
                out |= v
            elif self.op == "intersection":
                out &= v
            else:
                out &= ~v
        return out

    def _bbox(self):
        boxes = [a.bbox() for a in self.args]
        if self.op == "union":
            if not boxes or any(b is None for b in boxes):
                return None if boxes else (0.0, 0.0, 0.0, 0.0)
            return _hull(boxes)
        if self.op == "intersection":
            finite = [b for b in boxes if b is not None]
            return _hull(finite) if finite else None
        return boxes[0]

    def bounded_parts(self):
        parts = []
        if self.bbox() is not None:
            parts.append(self.bbox())
        for a in self.args:
            parts.extend(a.bounded_parts())
        return parts

    def to_json(self):
        return _with_flags({"type": self.op, "args": [a.to_json() for a in self.args]}, self)


def union(*args: DomainSpec, symmetrize: bool = False) -> Combine:
    return Combine("union", list(args), symmetrize)


def intersection(*args: DomainSpec, symmetrize: bool = False) -> Combine:
    return Combine("intersection", list(args), symmetrize)


def difference(*args: DomainSpec, symmetrize: bool = False) -> Combine:
    return Combine("difference", list(args), symmetrize)


def empty() -> Combine:
    return Combine("union", [])


def _hull(boxes):
    return (min(b[0] for b in boxes), max(b[1] for b in boxes),
            min(b[2] for b in boxes), max(b[3] for b in boxes))


def _num(v: float):
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _with_flags(obj: dict, node: DomainSpec) -> dict:
    if node.symmetrize:
        obj["symmetrize"] = True
    return obj


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SpecParseError(f"complex number must be [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v), 0.0)


def _float(v) -> float:
    # also accepts "inf" / "-inf" strings
    return float(v)


def spec_from_json(obj) -> DomainSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SpecParseError(f"domain node must be an object with a 'type', got {obj!r}")
    kind = obj["type"]
    sym = bool(obj.get("symmetrize", False))
    try:
        if kind == "plane":
            return Plane(sym)
        if kind == "empty":
            return empty()
        if kind == "disc":
            return Disc(_complex(obj.get("center", 0)), _float(obj["radius"]),
                        bool(obj.get("closed", False)), sym)
        if kind == "rect":
            return Rect(_float(obj["xmin"]), _float(obj["xmax"]), _float(obj["ymin"]),
                        _float(obj["ymax"]), bool(obj.get("closed", False)), sym)
        if kind == "annulus":
            return Annulus(_float(obj.get("center", 0.0)), _float(obj["r_in"]),
                           _float(obj["r_out"]), sym)
        if kind == "strip":
            return Strip(_float(obj.get("lo", "-inf")), _float(obj.get("hi", "inf")), sym)
        if kind == "line":
            return Line(_float(obj.get("y", 0.0)), sym)
        if kind == "point":
            return Point(_complex(obj.get("at", 0)), sym)
        if kind == "polyline":
            return Polyline(tuple(_complex(p) for p in obj["points"]),
                            _float(obj.get("width", 0.0)), sym)
        if kind in ("union", "intersection", "difference"):
            args = obj.get("args")
            if not isinstance(args, list):
                raise SpecParseError(f"{kind} needs a list 'args'")
            return Combine(kind, [spec_from_json(a) for a in args], sym)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError(f"bad {kind!r} node: {exc}") from exc
    raise SpecParseError(f"unknown primitive {kind!r}")


def parse_spec_text(text: str) -> tuple[DomainSpec, dict]:
    """Parse a spec document; returns the tree and top-level options."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if isinstance(obj, dict) and "domain" in obj:
        opts = {k: v for k, v in obj.items() if k != "domain"}
        return spec_from_json(obj["domain"]), opts
    return spec_from_json(obj), {}


def load_spec(path) -> tuple[DomainSpec, dict]:
    with open(path, encoding="utf-8") as fh:
        return parse_spec_text(fh.read())


# -- grids -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Grid:
    """A rectangular array of cells; ``inside[j, i]`` is row ``j`` from the bottom."""

    box: tuple[float, float, float, float]
    inside: np.ndarray

    @property
    def ny(self) -> int:
        return self.inside.shape[0]

    @property
    def nx(self) -> int:
        return self.inside.shape[1]

    @property
    def hx(self) -> float:
        return (self.box[1] - self.box[0]) / self.nx

    @property
    def hy(self) -> float:
        return (self.box[3] - self.box[2]) / self.ny

    @property
    def h(self) -> float:
        return max(self.hx, self.hy)

    @property
    def real_row(self) -> int:
        return (self.ny - 1) // 2

    @property
    def resolution(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def x_centers(self) -> np.ndarray:
        return self.box[0] + (np.arange(self.nx) + 0.5) * self.hx

    def y_centers(self) -> np.ndarray:
        return _symmetric_y(self.box[3], self.ny)

    def centers(self) -> np.ndarray:
        """Complex cell centres, shape ``(ny, nx)``."""
        X, Y = np.meshgrid(self.x_centers(), self.y_centers())
        return X + 1j * Y

    def center(self, j: int, i: int) -> complex:
        return complex(self.x_centers()[i], self.y_centers()[j])

    def cell_of(self, z: complex) -> tuple[int, int]:
        i = int(math.floor((z.real - self.box[0]) / self.hx))
        j = int(math.floor((z.imag - self.box[2]) / self.hy))
        if not (0 <= i < self.nx and 0 <= j < self.ny):
            raise ValueError(f"point {z} lies outside the grid box")
        return j, i

    def same_frame(self, other: Grid) -> bool:
        return self.inside.shape == other.inside.shape and np.allclose(self.box, other.box)

    def with_mask(self, mask: np.ndarray) -> Grid:
        return Grid(self.box, np.asarray(mask, dtype=bool))

    def to_text(self) -> str:
        """Rows of 0/1, top row (largest imaginary part) first."""
        return "\n".join("".join("1" if v else "0" for v in row) for row in self.inside[::-1]) + "\n"

    def fill_fraction(self) -> float:
        return float(self.inside.mean())


@dataclass(frozen=True, eq=False)
class SymmetricDomainGrid(Grid):
    """A grid whose mask is mirror symmetric about the real row and empty on the frame."""

    def __post_init__(self):
        ins = np.asarray(self.inside, dtype=bool)
        object.__setattr__(self, "inside", ins)
        xmin, xmax, ymin, ymax = self.box
        if not math.isclose(ymin, -ymax):
            raise ValueError("grid box must be symmetric about the real axis")
        if ins.shape[0] % 2 != 1:
            raise ValueError("number of rows must be odd")
        if not np.array_equal(ins, ins[::-1]):
            raise AsymmetricSpec("mask is not symmetric under conjugation")
        if ins[0].any() or ins[-1].any() or ins[:, 0].any() or ins[:, -1].any():
            raise ValueError("the outer frame of cells must be outside the domain")

    def mirror_cell(self, j: int, i: int) -> tuple[int, int]:
        return self.ny - 1 - j, i


def _symmetric_y(ymax: float, ny: int) -> np.ndarray:
    h = 2.0 * ymax / ny
    c = (ny - 1) // 2
    # built from the real row outwards so that y[ny-1-j] == -y[j] exactly
    offsets = (np.arange(ny) - c) * h
    return offsets


def normalize_box(box) -> tuple[float, float, float, float]:
    if box is None:
        box = DEFAULT_BOX
    box = tuple(float(v) for v in box)
    if len(box) == 3:
        xmin, xmax, ymax = box
        box = (xmin, xmax, -ymax, ymax)
    if len(box) != 4:
        raise SpecParseError(f"box must be [xmin, xmax, ymax] or [xmin, xmax, ymin, ymax], got {box}")
    if box[0] >= box[1] or box[2] >= box[3]:
        raise SpecParseError(f"degenerate box {box}")
    if not math.isclose(box[2], -box[3]):
        raise SpecParseError("box must be symmetric about the real axis")
    return box


def normalize_resolution(resolution) -> tuple[int, int]:
    if isinstance(resolution, int):
        nx = ny = resolution
    else:
        nx, ny = (int(v) for v in resolution)
    if ny % 2 != 1:
        raise ValueError(f"row count must be odd, got {ny}")
    if nx < 5 or ny < 5:
        raise ValueError("resolution too small")
    return nx, ny


def rasterize(spec: DomainSpec, box=None, resolution=129) -> SymmetricDomainGrid:
    box = normalize_box(box)
    nx, ny = normalize_resolution(resolution)
    xmin, xmax, ymin, ymax = box
    hx = (xmax - xmin) / nx
    hy = (ymax - ymin) / ny
    inner = (xmin + MARGIN_CELLS * hx, xmax - MARGIN_CELLS * hx,
             ymin + MARGIN_CELLS * hy, ymax - MARGIN_CELLS * hy)
    for b in spec.bounded_parts():
        if not (b[0] > inner[0] and b[1] < inner[1] and b[2] > inner[2] and b[3] < inner[3]):
            raise BoxTooSmall(f"spec region {tuple(round(v, 6) for v in b)} reaches the "
                              f"{MARGIN_CELLS}-cell margin of box {box}")
    xs = xmin + (np.arange(nx) + 0.5) * hx
    ys = _symmetric_y(ymax, ny)
    c = (ny - 1) // 2
    X, Y = np.meshgrid(xs, ys[c:])
    upper = np.asarray(spec.contains(X, Y, hx, hy), dtype=bool)
    lower = np.asarray(spec.contains(X, -Y, hx, hy), dtype=bool)
    if not np.array_equal(upper, lower):
        raise AsymmetricSpec("domain spec is not invariant under complex conjugation; "
                             "pair off-axis primitives or set 'symmetrize'")
    mask = np.concatenate([upper[1:][::-1], upper], axis=0)
    mask[0, :] = mask[-1, :] = False
    mask[:, 0] = mask[:, -1] = False
    return SymmetricDomainGrid(box, mask)


@dataclass(frozen=True, eq=False)
class DerivedRegions:
    """Upper part ``D+`` (rows on or above the real row), its trace on the
    real row, and ``D*`` (rows strictly above)."""

    plus: Grid
    dstar: Grid
    real_mask: np.ndarray
    intervals: tuple[tuple[int, int], ...]


def derive_regions(D: SymmetricDomainGrid) -> DerivedRegions:
    c = D.real_row
    plus = D.inside.copy()
    plus[:c, :] = False
    dstar = plus.copy()
    dstar[c, :] = False
    real = D.inside[c].copy()
    return DerivedRegions(D.with_mask(plus), D.with_mask(dstar), real, _runs(real))


def _runs(row: np.ndarray) -> tuple[tuple[int, int], ...]:
    runs = []
    start = None
    for i, v in enumerate(row):
        if v and start is None:
            start = i
        elif not v and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(row) - 1))
    return tuple(runs)


def check_nested(D: Grid, D1: Grid) -> bool:
    if not D.same_frame(D1):
        raise GridMismatch(f"grids differ: {D.box}/{D.resolution} vs {D1.box}/{D1.resolution}")
    return bool(np.all(D1.inside[D.inside]))
