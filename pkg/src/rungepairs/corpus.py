"""Seeded random nested pairs of symmetric domains, and named fixtures.

The generator is xorshift64* (Marsaglia shifts 12, 25, 27 and the
multiplier 0x2545F4914F6CDD1D), so a corpus is reproducible from its seed on
any platform.  Every pair is nested by construction: ``D`` is a base region
minus symmetric holes and ``D1`` is ``D`` union symmetric fills.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .domain import (DEFAULT_BOX, Annulus, Disc, DomainSpec, Line, Plane, Point, Polyline, Rect,
                     Strip, SymmetricDomainGrid, difference, intersection, rasterize, union)
from .stem import ComplexRational

MASK64 = (1 << 64) - 1
XORSHIFT_MULT = 0x2545F4914F6CDD1D
GENERATOR_NAME = "xorshift64*-12-25-27/v1"


class XorShift64Star:
    def __init__(self, seed: int):
        # splitmix-style scramble so that small seeds give unrelated streams
        z = (int(seed) + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        self.state = (z ^ (z >> 31)) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * XORSHIFT_MULT) & MASK64

    def random(self) -> float:
        """Uniform in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, a: float, b: float) -> float:
        return a + (b - a) * self.random()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.next_u64() % (hi - lo + 1)

    def choice(self, seq):
        return seq[self.randint(0, len(seq) - 1)]

    def chance(self, p: float) -> bool:
        return self.random() < p


@dataclass(frozen=True)
class CorpusConfig:
    seed: int = 42
    count: int = 200
    resolutions: tuple[int, ...] = (65, 129, 257)
    holes: tuple[int, int] = (1, 4)
    box: tuple[float, float, float] = DEFAULT_BOX

    def to_json(self) -> dict:
        return {"seed": self.seed, "count": self.count, "resolutions": list(self.resolutions),
                "holes": list(self.holes), "box": list(self.box), "generator": GENERATOR_NAME}


@dataclass
class CorpusPair:
    index: int
    resolution: int
    D_spec: DomainSpec
    D1_spec: DomainSpec
    box: tuple = DEFAULT_BOX
    _grids: tuple | None = field(default=None, repr=False)

    def grids(self) -> tuple[SymmetricDomainGrid, SymmetricDomainGrid]:
        if self._grids is None:
            self._grids = (rasterize(self.D_spec, self.box, self.resolution),
                           rasterize(self.D1_spec, self.box, self.resolution))
        return self._grids

    def key(self) -> str:
        blob = json.dumps({"D": self.D_spec.to_json(), "D1": self.D1_spec.to_json(),
                           "res": self.resolution, "box": list(self.box)}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


# -- random shapes -------------------------------------------------------------

def _round(v: float) -> float:
    return round(v, 4)


def _random_base(rng: XorShift64Star) -> DomainSpec:
    kind = rng.choice(("disc", "rect", "plane", "plane"))
    if kind == "disc":
        return Disc(0j, _round(rng.uniform(2.8, 3.5)))
    if kind == "rect":
        a = _round(rng.uniform(2.6, 3.5))
        b = _round(rng.uniform(2.4, 3.4))
        return Rect(-a, a, -b, b)
    return Plane()


def _random_hole(rng: XorShift64Star) -> tuple[DomainSpec, str, complex, float]:
    """A closed symmetric hole, its kind, a centre and a size inside it."""
    kind = rng.choice(("axis", "axis", "pair", "pair", "rect", "path"))
    if kind == "axis":
        x = _round(rng.uniform(-1.8, 1.8))
        r = _round(rng.uniform(0.3, 0.7))
        return Disc(complex(x, 0), r, closed=True), kind, complex(x, 0), r
    if kind == "pair":
        x = _round(rng.uniform(-1.8, 1.8))
        y = _round(rng.uniform(0.6, 1.8))
        r = _round(rng.uniform(0.25, min(0.6, y - 0.2)))
        return Disc(complex(x, y), r, closed=True, symmetrize=True), kind, complex(x, y), r
    if kind == "rect":
        x = _round(rng.uniform(-1.8, 1.4))
        w = _round(rng.uniform(0.5, 1.0))
        hgt = _round(rng.uniform(0.3, 1.5))
        return Rect(x, x + w, -hgt, hgt, closed=True), kind, complex(x + w / 2, 0), min(w, hgt) / 2
    # a symmetric arc-shaped blob through the real axis
    x = _round(rng.uniform(-1.5, 1.5))
    pts = [complex(x, 0)]
    for _ in range(rng.randint(1, 3)):
        last = pts[-1]
        pts.append(complex(_round(max(-2.0, min(2.0, last.real + rng.uniform(-0.8, 0.8)))),
                           _round(min(2.0, last.imag + rng.uniform(0.4, 0.9)))))
    w = _round(rng.uniform(0.15, 0.3))
    return Polyline(tuple(pts), w, symmetrize=True), "path", pts[-1], w


def _fill_for(rng: XorShift64Star, hole: DomainSpec, kind: str, at: complex, size: float):
    """A symmetric fill of (part of) one hole; None leaves the hole untouched."""
    mode = rng.choice(("none", "full", "partial", "partial"))
    if mode == "none":
        return None
    if mode == "full":
        return hole
    keep = Disc(at, _round(size * rng.uniform(0.35, 0.6)), closed=True, symmetrize=kind in ("pair", "path"))
    return difference(hole, keep)


def random_pair(rng: XorShift64Star, index: int, resolution: int, holes: tuple[int, int],
                box=DEFAULT_BOX) -> CorpusPair:
    base = _random_base(rng)
    n = rng.randint(*holes)
    made = [_random_hole(rng) for _ in range(n)]
    D = difference(base, *[h for h, *_ in made])
    fills = [f for f in (_fill_for(rng, *m) for m in made) if f is not None]
    if rng.chance(0.15):
        y = _round(rng.uniform(0.1, 1.2))
        fills.append(Strip(-y, y))
    if rng.chance(0.05):
        fills.append(base)
    D1 = union(D, *fills) if fills else D
    return CorpusPair(index, resolution, D, D1, box)


def generate_corpus(config: CorpusConfig) -> list[CorpusPair]:
    rng = XorShift64Star(config.seed)
    out = []
    for k in range(config.count):
        res = config.resolutions[k % len(config.resolutions)]
        out.append(random_pair(rng, k, res, config.holes, config.box))
    return out


def corpus_domains(config: CorpusConfig) -> list[SymmetricDomainGrid]:
    """The distinct grids (both members of every pair) of a corpus."""
    seen = []
    for pair in generate_corpus(config):
        seen.extend(pair.grids())
    return seen


# -- path blobs: plane minus a symmetric thickened path ---------------------------

def path_blob_pair(rng: XorShift64Star, resolution: int = 129, box=DEFAULT_BOX) -> tuple[DomainSpec, DomainSpec]:
    """``C minus P`` and ``C minus P'`` for a symmetric path blob ``P`` meeting the real axis once.

    ``P'`` is either an initial piece of the same blob (also meeting the axis)
    or a symmetric pair of small discs centred on the path off the axis.
    """
    x = _round(rng.uniform(-1.5, 1.5))
    pts = [complex(x, 0)]
    for _ in range(rng.randint(2, 4)):
        last = pts[-1]
        pts.append(complex(_round(max(-2.5, min(2.5, last.real + rng.uniform(-1.0, 1.0)))),
                           _round(min(2.6, last.imag + rng.uniform(0.4, 0.8)))))
    w = _round(rng.uniform(0.15, 0.3))
    P = Polyline(tuple(pts), w, symmetrize=True)
    if rng.chance(0.5):
        cut = rng.randint(1, len(pts) - 1)
        sub = Polyline(tuple(pts[:cut + 1]), w, symmetrize=True)
    else:
        k = rng.randint(1, len(pts) - 1)
        sub = intersection(P, Disc(pts[k], w, closed=True, symmetrize=True))
    return difference(Plane(), P), difference(Plane(), sub)


# -- named fixtures ------------------------------------------------------------------

def punctured_plane() -> DomainSpec:
    """The plane without the origin."""
    return difference(Plane(), Point(0j))


def plane() -> DomainSpec:
    return Plane()


def plane_minus_axis() -> DomainSpec:
    return difference(Plane(), Line(0.0))


def disc_exterior() -> DomainSpec:
    """``|z| > 1``."""
    return difference(Plane(), Disc(0j, 1.0, closed=True))


def disc_exterior_with_band() -> DomainSpec:
    """``|z| > 1`` together with the band ``|Im z| < 1/2``."""
    return union(disc_exterior(), Strip(-0.5, 0.5))


def annulus_domain() -> DomainSpec:
    return Annulus(0.0, 1.0, 2.0)


def punctured_big_disc(hole_center: float = 0.5, hole_radius: float = 0.25) -> DomainSpec:
    """``|z| < 3`` minus a small closed disc on the real axis inside the unit disc."""
    return difference(Disc(0j, 3.0), Disc(complex(hole_center, 0), hole_radius, closed=True))


def off_axis_pair_domain() -> DomainSpec:
    """A disc with a conjugate pair of closed holes centred at ``+-i``."""
    return difference(Disc(0j, 3.0), Disc(1j, 0.5, closed=True, symmetrize=True))


def off_axis_pair_partial_fill() -> DomainSpec:
    """The pair domain with each hole shrunk to a small core, so the cores stay outside."""
    return difference(Disc(0j, 3.0), Disc(1j, 0.2, closed=True, symmetrize=True))


def off_axis_pair_filled() -> DomainSpec:
    return Disc(0j, 3.0)


def annulus_K(D: SymmetricDomainGrid, r0: float = 1.25, r1: float = 1.75) -> np.ndarray:
    """Cells of the closed ring ``r0 <= |z| <= r1``."""
    a = np.abs(D.centers())
    return (a >= r0) & (a <= r1) & D.inside


def reciprocal() -> ComplexRational:
    """``1/z`` as a symmetric rational function."""
    return ComplexRational((), ((0j, 1, 1.0),), True)


def fixture_pairs() -> dict[str, tuple[DomainSpec, DomainSpec]]:
    return {
        "punctured-plane": (punctured_plane(), plane()),
        "plane-minus-axis": (plane_minus_axis(), plane()),
        "disc-exterior": (disc_exterior(), disc_exterior_with_band()),
        "annulus-punctured-disc": (annulus_domain(), punctured_big_disc(0.0, 0.25)),
        "annulus-shifted-puncture": (annulus_domain(), punctured_big_disc(0.5, 0.25)),
        "off-axis-pair": (off_axis_pair_domain(), off_axis_pair_partial_fill()),
        "off-axis-pair-filled": (off_axis_pair_domain(), off_axis_pair_filled()),
    }
