"""Planar topology on cell grids.

The first homology of an open set ``G`` in the plane is identified with the
integer-valued functions on the bounded connected components of its
complement: a cycle is sent to its winding number around each component.
On a grid, complement components are 4-connected sets of outside cells and
the domain is the union of the closed inside cells (so inside cells that
touch at a corner are connected).  This module labels those components,
computes winding numbers exactly, converts between cycles and classes in
both directions, and builds restriction maps for nested grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .abelian import AbelianMap
from .domain import Grid, SymmetricDomainGrid
from .errors import CycleLeavesDomain, NoCollar, NotBounded, NotNested, OnCurve

FOUR = ndimage.generate_binary_structure(2, 1)
EIGHT = ndimage.generate_binary_structure(2, 2)


@dataclass(frozen=True, eq=False)
class ComplementAtlas:
    grid: Grid
    labels: np.ndarray
    n_components: int
    bounded: np.ndarray
    reps: tuple[tuple[int, int], ...]
    conj: np.ndarray | None
    _contours: dict = field(default_factory=dict, repr=False)

    @property
    def bounded_ids(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.flatnonzero(self.bounded))

    @property
    def unbounded_ids(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.flatnonzero(~self.bounded))

    def component_at(self, j: int, i: int) -> int:
        return int(self.labels[j, i])

    def mask(self, c: int) -> np.ndarray:
        return self.labels == c

    def rep_point(self, c: int) -> complex:
        return self.grid.center(*self.reps[c])

    def meets_real_row(self, c: int) -> bool:
        return bool(np.any(self.labels[self.grid.real_row] == c))


def label_components(G: Grid) -> ComplementAtlas:
    """4-connected components of the outside cells of ``G``."""
    outside = ~G.inside
    if not (outside[0].all() and outside[-1].all() and outside[:, 0].all() and outside[:, -1].all()):
        raise ValueError("grid frame must be outside the domain")
    lab, n = ndimage.label(outside, structure=FOUR)
    labels = lab.astype(np.int64) - 1
    flat = labels.ravel()
    ids, first = np.unique(flat, return_index=True)
    reps = [None] * n
    for c, k in zip(ids, first):
        if c >= 0:
            reps[c] = divmod(int(k), G.nx)
    bounded = np.ones(n, dtype=bool)
    bounded[labels[0, 0]] = False
    conj = None
    if isinstance(G, SymmetricDomainGrid):
        conj = np.array([labels[G.ny - 1 - j, i] for j, i in reps], dtype=np.int64)
    return ComplementAtlas(G, labels, n, bounded, tuple(reps), conj)


def inside_components(G: Grid) -> tuple[np.ndarray, int]:
    """8-connected components of the inside cells (closed-cell model)."""
    lab, n = ndimage.label(G.inside, structure=EIGHT)
    return lab.astype(np.int64) - 1, n


# -- H1 classes --------------------------------------------------------------

@dataclass(frozen=True)
class H1Class:
    """Integer value per bounded complement component; zeros are omitted."""

    values: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        vals = tuple(sorted((int(c), int(v)) for c, v in dict(self.values).items() if v))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_dict(cls, d: dict) -> H1Class:
        return cls(tuple(d.items()))

    @classmethod
    def from_vector(cls, ids, vec) -> H1Class:
        return cls(tuple(zip(ids, (int(v) for v in vec))))

    def as_dict(self) -> dict[int, int]:
        return dict(self.values)

    def __getitem__(self, c: int) -> int:
        return self.as_dict().get(int(c), 0)

    def as_vector(self, ids) -> np.ndarray:
        d = self.as_dict()
        return np.array([d.get(int(c), 0) for c in ids], dtype=np.int64)

    def __add__(self, other: H1Class) -> H1Class:
        d = self.as_dict()
        for c, v in other.values:
            d[c] = d.get(c, 0) + v
        return H1Class.from_dict(d)

    def __neg__(self) -> H1Class:
        return H1Class(tuple((c, -v) for c, v in self.values))

    def __sub__(self, other: H1Class) -> H1Class:
        return self + (-other)

    def __mul__(self, k: int) -> H1Class:
        return H1Class(tuple((c, k * v) for c, v in self.values))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.values


# -- cycles and winding numbers ----------------------------------------------

@dataclass(frozen=True, eq=False)
class GridCycle:
    """Closed polygons (last vertex joins the first) with integer weights.

    A weight of ``-1`` is the polygon traversed backwards, ``2`` twice, etc.
    """

    polygons: tuple[np.ndarray, ...] = ()
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        polys = tuple(np.asarray(p, dtype=complex).ravel() for p in self.polygons)
        weights = tuple(int(w) for w in self.weights) if self.weights else (1,) * len(polys)
        if len(weights) != len(polys):
            raise ValueError("one weight per polygon")
        for p in polys:
            if len(p) < 3:
                raise ValueError("a polygon needs at least three vertices")
        object.__setattr__(self, "polygons", polys)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_points(cls, *polygons, weights=()) -> GridCycle:
        return cls(tuple(np.asarray(p, dtype=complex) for p in polygons), tuple(weights))

    def __add__(self, other: GridCycle) -> GridCycle:
        return GridCycle(self.polygons + other.polygons, self.weights + other.weights)

    def __neg__(self) -> GridCycle:
        return GridCycle(self.polygons, tuple(-w for w in self.weights))

    def scaled(self, k: int) -> GridCycle:
        return GridCycle(self.polygons, tuple(k * w for w in self.weights))

    def edges(self):
        for poly, w in zip(self.polygons, self.weights):
            yield poly, np.roll(poly, -1), w

    def length(self) -> float:
        return float(sum(abs(w) * np.abs(b - a).sum() for a, b, w in self.edges()))

    def is_empty(self) -> bool:
        return not any(self.weights)

    def to_json(self) -> dict:
        return {"polygons": [[[v.real, v.imag] for v in p] for p in self.polygons],
                "weights": list(self.weights)}


def _polygon_winding(a: np.ndarray, b: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Winding numbers of one closed polygon (edges a->b) about points z.

    Signed upward/downward crossings of the rightward ray; integer exact.
    """
    px = z.real[:, None]
    py = z.imag[:, None]
    x0, y0, x1, y1 = a.real[None], a.imag[None], b.real[None], b.imag[None]
    side = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
    up = (y0 <= py) & (y1 > py) & (side > 0)
    down = (y0 > py) & (y1 <= py) & (side < 0)
    return up.sum(axis=1) - down.sum(axis=1)


def _min_edge_distance(a: np.ndarray, b: np.ndarray, z: np.ndarray) -> np.ndarray:
    d = b - a
    L2 = np.abs(d) ** 2
    L2 = np.where(L2 == 0, 1.0, L2)
    t = ((z[:, None] - a[None]) * np.conj(d)[None]).real / L2[None]
    t = np.clip(t, 0.0, 1.0)
    return np.abs(z[:, None] - (a[None] + t * d[None])).min(axis=1)


def winding_numbers(gamma: GridCycle, zs) -> np.ndarray:
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    total = np.zeros(len(zs), dtype=np.int64)
    for a, b, w in gamma.edges():
        if not w:
            continue
        if np.any(_min_edge_distance(a, b, zs) < 1e-12):
            raise OnCurve("point lies on the cycle")
        total += w * _polygon_winding(a, b, zs)
    return total


def winding_number(gamma: GridCycle, z: complex) -> int:
    return int(winding_numbers(gamma, [complex(z)])[0])


def _check_in_domain(G: Grid, gamma: GridCycle) -> None:
    """Every point of the cycle must lie in a closed inside cell."""
    tol = 1e-9
    for a, b, w in gamma.edges():
        if not w:
            continue
        L = np.abs(b - a)
        n = np.maximum(1, np.ceil(L / (0.25 * G.h)).astype(int))
        pts = np.concatenate([a[k] + (b[k] - a[k]) * np.linspace(0.0, 1.0, n[k] + 1)
                              for k in range(len(a))])
        u = (pts.real - G.box[0]) / G.hx
        v = (pts.imag - G.box[2]) / G.hy
        ok = np.zeros(len(pts), dtype=bool)
        for du in (-tol, tol):
            for dv in (-tol, tol):
                i = np.floor(u + du).astype(int)
                j = np.floor(v + dv).astype(int)
                valid = (i >= 0) & (i < G.nx) & (j >= 0) & (j < G.ny)
                ii = np.clip(i, 0, G.nx - 1)
                jj = np.clip(j, 0, G.ny - 1)
                ok |= valid & G.inside[jj, ii]
        if not ok.all():
            bad = pts[~ok][0]
            raise CycleLeavesDomain(f"cycle leaves the domain near {bad:.6g}")


def class_from_cycle(G: Grid, atlas: ComplementAtlas, gamma: GridCycle) -> H1Class:
    _check_in_domain(G, gamma)
    reps = np.array([atlas.rep_point(c) for c in range(atlas.n_components)], dtype=complex)
    wn = winding_numbers(gamma, reps) if len(reps) else np.zeros(0, dtype=np.int64)
    for c in atlas.unbounded_ids:
        if wn[c]:
            raise CycleLeavesDomain(f"cycle winds {wn[c]} times around unbounded component {c}")
    return H1Class(tuple((c, int(wn[c])) for c in atlas.bounded_ids))


def boundary_loops(mask: np.ndarray) -> list[np.ndarray]:
    """Boundary of a union of cells as closed lattice loops.

    Vertices are corner indices ``(i, j)`` (column, row).  Loops are
    oriented with the cells on the left, so outer boundaries run
    counterclockwise and holes clockwise.  Where two cells of the set meet
    only at a corner the loop turns left, keeping the two cells apart.
    """
    mask = np.asarray(mask, dtype=bool)
    pad = np.pad(mask, 1)
    core = pad[1:-1, 1:-1]
    outgoing: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(cells, di0, dj0, di1, dj1):
        js, is_ = np.nonzero(cells)
        for j, i in zip(js.tolist(), is_.tolist()):
            outgoing.setdefault((i + di0, j + dj0), []).append((i + di1, j + dj1))

    add(core & ~pad[:-2, 1:-1], 0, 0, 1, 0)    # bottom edge, heading +x
    add(core & ~pad[1:-1, 2:], 1, 0, 1, 1)     # right edge, heading +y
    add(core & ~pad[2:, 1:-1], 1, 1, 0, 1)     # top edge, heading -x
    add(core & ~pad[1:-1, :-2], 0, 1, 0, 0)    # left edge, heading -y

    loops = []
    while outgoing:
        start = min(outgoing)
        verts = [start]
        cur = start
        prev_dir = None
        while True:
            nexts = outgoing[cur]
            if len(nexts) == 1 or prev_dir is None:
                nxt = nexts[0]
            else:
                left = (-prev_dir[1], prev_dir[0])
                nxt = next((n for n in nexts if (n[0] - cur[0], n[1] - cur[1]) == left), nexts[0])
            nexts.remove(nxt)
            if not nexts:
                del outgoing[cur]
            prev_dir = (nxt[0] - cur[0], nxt[1] - cur[1])
            cur = nxt
            # the lexicographically smallest vertex is never a pinch point
            if cur == start:
                break
            verts.append(cur)
        loops.append(_drop_collinear(np.array(verts, dtype=np.int64)))
    return loops


def _drop_collinear(v: np.ndarray) -> np.ndarray:
    prev = np.roll(v, 1, axis=0)
    nxt = np.roll(v, -1, axis=0)
    cross = (v[:, 0] - prev[:, 0]) * (nxt[:, 1] - v[:, 1]) - (v[:, 1] - prev[:, 1]) * (nxt[:, 0] - v[:, 0])
    return v[cross != 0]


def _corners_to_points(G: Grid, loop: np.ndarray, di: int, dj: int) -> np.ndarray:
    c = G.real_row
    x = G.box[0] + (loop[:, 0] + di) * G.hx
    y = (loop[:, 1] + dj - c - 0.5) * G.hy
    return x + 1j * y


def collar_mask(G: Grid, atlas: ComplementAtlas, c: int) -> np.ndarray:
    comp = atlas.mask(c)
    grown = ndimage.binary_dilation(comp, structure=FOUR)
    foreign = grown & ~comp & ~G.inside
    if foreign.any():
        raise NoCollar(f"component {c} touches another complement component")
    return grown


def component_contour(G: Grid, atlas: ComplementAtlas, c: int) -> tuple[np.ndarray, ...]:
    """Boundary loops of the one-cell collar around component ``c``; winding 1 on ``c``."""
    if c in atlas._contours:
        return atlas._contours[c]
    if not atlas.bounded[c]:
        raise NotBounded(f"component {c} is unbounded")
    grown = collar_mask(G, atlas, c)
    js, is_ = np.nonzero(grown)
    j0, j1, i0, i1 = js.min(), js.max(), is_.min(), is_.max()
    loops = boundary_loops(grown[j0:j1 + 1, i0:i1 + 1])
    polys = tuple(_corners_to_points(G, lp, i0, j0) for lp in loops)
    atlas._contours[c] = polys
    return polys


def cycle_from_class(G: Grid, atlas: ComplementAtlas, f: H1Class) -> GridCycle:
    polys: list[np.ndarray] = []
    weights: list[int] = []
    for c, v in f.values:
        if c < 0 or c >= atlas.n_components or not atlas.bounded[c]:
            raise NotBounded(f"class has support on non-bounded component {c}")
        for p in component_contour(G, atlas, c):
            polys.append(p)
            weights.append(v)
    return GridCycle(tuple(polys), tuple(weights))


def separating_class(atlas: ComplementAtlas, B: int, q: tuple[int, int]) -> H1Class:
    """Indicator of the bounded component ``B``; vanishes at cell ``q``."""
    if not atlas.bounded[B]:
        raise NotBounded(f"component {B} is unbounded")
    cq = atlas.component_at(*q)
    if cq < 0:
        raise ValueError(f"cell {q} is not in the complement")
    if cq == B:
        raise ValueError(f"cell {q} lies in component {B}")
    return H1Class(((B, 1),))


def restriction_map(atlasG: ComplementAtlas, atlasH: ComplementAtlas) -> AbelianMap:
    """Restriction of functions on the complement of G to the complement of H (G inside H)."""
    G, H = atlasG.grid, atlasH.grid
    if not G.same_frame(H) or np.any(G.inside & ~H.inside):
        raise NotNested("first grid is not contained in the second")
    dom = atlasG.bounded_ids
    cod = atlasH.bounded_ids
    col = {c: k for k, c in enumerate(dom)}
    mat = np.zeros((len(cod), len(dom)), dtype=np.int64)
    for r, c2 in enumerate(cod):
        c = atlasG.component_at(*atlasH.reps[c2])
        if c in col:
            mat[r, col[c]] = 1
    return AbelianMap(mat, dom, cod)


def components_meeting(atlasG: ComplementAtlas, H: Grid) -> dict[int, bool]:
    """For each bounded component of G's complement: does it contain an outside cell of H?"""
    hit = np.unique(atlasG.labels[~H.inside])
    hit = set(int(c) for c in hit if c >= 0)
    return {c: c in hit for c in atlasG.bounded_ids}
