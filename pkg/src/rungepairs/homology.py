"""Homology of axially symmetric domains from their planar avatars.

Everything is reduced to integer matrices between free abelian groups whose
bases are labelled by grid objects:

* ``H1`` of a planar grid set is free on the bounded components of its
  complement (see :mod:`rungepairs.planar`);
* the reduced zeroth homology of the real trace is the kernel of the map
  sending each real interval to the component of the upper part ``D+``
  containing it;
* ``H3`` of the quaternionic domain is presented as the cokernel of
  ``alpha = (restriction) - (conjugate restriction)`` from ``H1(D+)`` to
  ``H1(D)``; ``H1`` of the quaternionic domain is ``H1(D+)``.

The upper part ``D+`` is the set of cells on or above the real row.  Its
homology is computed directly on that grid; see ``DomainAnalysis``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import ndimage

from . import snf
from .abelian import AbelianMap, PresentedGroup
from .domain import Grid, SymmetricDomainGrid, check_nested, derive_regions
from .errors import NotDescending, NotNested
from .planar import FOUR, ComplementAtlas, inside_components, label_components, restriction_map


class DomainAnalysis:
    """Lazily computed atlases and region data for one symmetric grid."""

    def __init__(self, grid: SymmetricDomainGrid):
        self.grid = grid

    @cached_property
    def regions(self):
        return derive_regions(self.grid)

    @cached_property
    def atlas(self) -> ComplementAtlas:
        return label_components(self.grid)

    @cached_property
    def plus_atlas(self) -> ComplementAtlas:
        return label_components(self.regions.plus)

    @cached_property
    def minus_grid(self) -> Grid:
        c = self.grid.real_row
        m = self.grid.inside.copy()
        m[c + 1:, :] = False
        return self.grid.with_mask(m)

    @cached_property
    def minus_atlas(self) -> ComplementAtlas:
        return label_components(self.minus_grid)

    @cached_property
    def plus_components(self) -> tuple[np.ndarray, int]:
        return inside_components(self.regions.plus)

    @cached_property
    def folded_components(self) -> tuple[np.ndarray, int, np.ndarray]:
        """4-components of the complement restricted to the closed upper half.

        These are the components of the complement modulo conjugation.
        Returns labels (-1 elsewhere), count, and a per-component
        unbounded flag.
        """
        G = self.grid
        c = G.real_row
        comp = ~G.inside
        comp[:c, :] = False
        lab, n = ndimage.label(comp, structure=FOUR)
        lab = lab.astype(np.int64) - 1
        frame = np.zeros_like(comp)
        frame[c:, 0] = frame[c:, -1] = True
        frame[-1, :] = True
        unbounded = np.zeros(n, dtype=bool)
        ids = np.unique(lab[frame & comp])
        unbounded[ids[ids >= 0]] = True
        return lab, n, unbounded


_CACHE: "weakref.WeakKeyDictionary[SymmetricDomainGrid, DomainAnalysis]" = weakref.WeakKeyDictionary()


def analyze(D: SymmetricDomainGrid) -> DomainAnalysis:
    if isinstance(D, DomainAnalysis):
        return D
    an = _CACHE.get(D)
    if an is None:
        an = DomainAnalysis(D)
        _CACHE[D] = an
    return an


def _interval_label(run) -> str:
    return f"I[{run[0]}:{run[1]}]"


# -- ranks and Betti numbers -------------------------------------------------

def h1_rank(G: Grid) -> int:
    """Rank of H1 = number of bounded complement components."""
    if isinstance(G, SymmetricDomainGrid):
        return len(analyze(G).atlas.bounded_ids)
    return len(label_components(G).bounded_ids)


@dataclass(frozen=True, eq=False)
class ReducedH0:
    """Kernel of H0(real trace) -> H0(D+)."""

    inclusion: AbelianMap
    kernel: tuple[np.ndarray, ...]

    @property
    def rank(self) -> int:
        return len(self.kernel)


def hhat0(D: SymmetricDomainGrid) -> ReducedH0:
    an = analyze(D)
    runs = an.regions.intervals
    lab, _ = an.plus_components
    c = D.real_row
    comp_of_run = [int(lab[c, r[0]]) for r in runs]
    comps = sorted(set(comp_of_run))
    mat = np.zeros((len(comps), len(runs)), dtype=np.int64)
    for k, cid in enumerate(comp_of_run):
        mat[comps.index(cid), k] = 1
    inc = AbelianMap(mat, tuple(_interval_label(r) for r in runs), tuple(f"P{cid}" for cid in comps))
    kernel = tuple(inc.kernel_basis()) if runs else ()
    return ReducedH0(inc, kernel)


@dataclass(frozen=True)
class BettiTriple:
    b1: int
    b2: int
    b3: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.b1, self.b2, self.b3)


@dataclass(frozen=True)
class BettiReport:
    betti: BettiTriple
    b1_D: int
    b1_plus: int
    r: int
    k: int
    rank_hhat0: int
    intervals: int

    def to_json(self) -> dict:
        return {"b1": self.betti.b1, "b2": self.betti.b2, "b3": self.betti.b3,
                "inputs": {"b1_D": self.b1_D, "b1_Dplus": self.b1_plus, "r": self.r,
                           "k": self.k, "rank_hhat0": self.rank_hhat0,
                           "real_intervals": self.intervals}}


def betti_report(D: SymmetricDomainGrid) -> BettiReport:
    an = analyze(D)
    b1_plus = len(an.plus_atlas.bounded_ids)
    red = hhat0(D)
    lab, n = an.plus_components
    c = D.real_row
    touching = set(int(v) for v in np.unique(lab[c]) if v >= 0)
    k = n - len(touching)
    runs = len(an.regions.intervals)
    r = runs - 1 if runs else 0
    betti = BettiTriple(b1_plus, k, b1_plus + red.rank)
    return BettiReport(betti, len(an.atlas.bounded_ids), b1_plus, r, k, red.rank, runs)


def betti_omega(D: SymmetricDomainGrid) -> BettiTriple:
    return betti_report(D).betti


# -- the alpha map and H3 ----------------------------------------------------

def plus_restriction(D: SymmetricDomainGrid) -> AbelianMap:
    an = analyze(D)
    return restriction_map(an.plus_atlas, an.atlas)


def reflected_plus_restriction(D: SymmetricDomainGrid) -> AbelianMap:
    """e_B maps to the indicator of the mirror image of B on the complement of D."""
    an = analyze(D)
    dom = an.plus_atlas.bounded_ids
    cod = an.atlas.bounded_ids
    col = {b: k for k, b in enumerate(dom)}
    mat = np.zeros((len(cod), len(dom)), dtype=np.int64)
    for r, c2 in enumerate(cod):
        j, i = an.atlas.reps[c2]
        b = an.plus_atlas.component_at(D.ny - 1 - j, i)
        if b in col:
            mat[r, col[b]] = 1
    return AbelianMap(mat, dom, cod)


def alpha_map(D: SymmetricDomainGrid) -> AbelianMap:
    """``gamma - conj(gamma)`` from H1(D+) to H1(D)."""
    R = plus_restriction(D)
    T = reflected_plus_restriction(D)
    return AbelianMap(R.matrix - T.matrix, R.domain, R.codomain)


def h3_presentation(D: SymmetricDomainGrid) -> PresentedGroup:
    alpha = alpha_map(D)
    return PresentedGroup.from_relations(alpha.codomain, alpha.matrix)


@dataclass(frozen=True, eq=False)
class InducedMap:
    map: AbelianMap
    injective: bool
    witness: np.ndarray | None = None

    def to_json(self) -> dict:
        return {"matrix": self.map.to_json(), "injective": self.injective,
                "witness": None if self.witness is None else self.witness.tolist()}


def _require_nested(D, D1):
    if not check_nested(D, D1):
        raise NotNested("D is not contained in D1")


def induced_h1_map(D: SymmetricDomainGrid, D1: SymmetricDomainGrid) -> InducedMap:
    """H1 of the quaternionic domains, realised as H1(D+) -> H1(D1+)."""
    _require_nested(D, D1)
    R = restriction_map(analyze(D).plus_atlas, analyze(D1).plus_atlas)
    ker = R.kernel_basis()
    return InducedMap(R, not ker, ker[0] if ker else None)


def induced_h3_map(D: SymmetricDomainGrid, D1: SymmetricDomainGrid) -> InducedMap:
    """The map coker(alpha_D) -> coker(alpha_D1) induced by restriction."""
    _require_nested(D, D1)
    R = restriction_map(analyze(D).atlas, analyze(D1).atlas)
    a0 = alpha_map(D)
    a1 = alpha_map(D1)
    Rp = restriction_map(analyze(D).plus_atlas, analyze(D1).plus_atlas)
    # naturality: R alpha_D == alpha_D1 R+, hence R(im alpha_D) lies in im alpha_D1
    if not np.array_equal(R.matrix @ a0.matrix, a1.matrix @ Rp.matrix):
        raise NotDescending("restriction does not commute with alpha")
    for col in (R.matrix @ a0.matrix).T:
        if not _in_image(a1.matrix, col):
            raise NotDescending("relation of D does not map into relations of D1")
    witness = _coker_kernel_witness(R.matrix, a0.matrix, a1.matrix)
    return InducedMap(R, witness is None, witness)


def _in_image(A: np.ndarray, b: np.ndarray) -> bool:
    if A.shape[1] == 0:
        return not np.any(b)
    return snf.in_image(A, b)


def _coker_kernel_witness(R, a0, a1) -> np.ndarray | None:
    """An ``x`` with ``R x`` in im(a1) but ``x`` not in im(a0), or None."""
    n = R.shape[1]
    if n == 0:
        return None
    m1 = a1.shape[1]
    block = np.concatenate([R, -a1], axis=1) if m1 else R
    if block.shape[0] == 0:
        gens = [np.eye(n, dtype=np.int64)[:, j] for j in range(n)]
    else:
        gens = [v[:n] for v in snf.kernel_basis(block)]
    for x in gens:
        if np.any(x) and not _in_image(a0, x):
            return np.asarray(x, dtype=np.int64)
    return None


# -- the exact sequence for D ------------------------------------------------

@dataclass
class SplitSequenceReport:
    b1_D: int
    b1_plus: int
    b1_minus: int
    rank_hhat0: int
    rank_identity: bool
    first_injective: bool
    composite_zero: bool
    exact_middle: bool
    lands_in_hhat0: bool
    onto_hhat0: bool

    @property
    def ok(self) -> bool:
        return (self.rank_identity and self.first_injective and self.composite_zero
                and self.exact_middle and self.lands_in_hhat0 and self.onto_hhat0)

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def boundary_to_real_trace(D: SymmetricDomainGrid) -> AbelianMap:
    """H1(D) -> H0(real trace): jump of the class across each real interval.

    Column ``C`` gets ``+1`` on the interval whose right neighbour gap lies in
    ``C`` and ``-1`` on the interval whose left neighbour gap lies in ``C``.
    """
    an = analyze(D)
    runs = an.regions.intervals
    cod = an.atlas.bounded_ids
    col = {c: k for k, c in enumerate(cod)}
    mat = np.zeros((len(runs), len(cod)), dtype=np.int64)
    c = D.real_row
    for r, (i0, i1) in enumerate(runs):
        right = an.atlas.component_at(c, i1 + 1)
        left = an.atlas.component_at(c, i0 - 1)
        if right in col:
            mat[r, col[right]] += 1
        if left in col:
            mat[r, col[left]] -= 1
    return AbelianMap(mat, cod, tuple(_interval_label(r) for r in runs))


def split_sequence_check(D: SymmetricDomainGrid) -> SplitSequenceReport:
    an = analyze(D)
    Rp = plus_restriction(D)
    Rm = restriction_map(an.minus_atlas, an.atlas)
    E1 = np.concatenate([Rp.matrix, Rm.matrix], axis=1)
    E2 = boundary_to_real_trace(D).matrix
    red = hhat0(D)
    P = red.inclusion.matrix
    b1 = len(an.atlas.bounded_ids)
    bp = Rp.shape[1]
    bm = Rm.shape[1]
    rank_ok = b1 == bp + bm + red.rank and bp == bm
    first_inj = snf.is_injective(E1) if E1.shape[1] else True
    comp_zero = not np.any(E2 @ E1) if E1.size and E2.size else True
    if E2.shape[0] == 0:
        ker2 = [np.eye(b1, dtype=np.int64)[:, j] for j in range(b1)]
    else:
        ker2 = snf.kernel_basis(E2) if b1 else []
    exact_mid = all(_in_image(E1, v) for v in ker2)
    lands = not np.any(P @ E2) if P.size and E2.size else True
    onto = all(_in_image(E2, v) for v in red.kernel)
    return SplitSequenceReport(b1, bp, bm, red.rank, rank_ok, first_inj, comp_zero, exact_mid, lands, onto)
