import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rungepairs import corpus, snf
from rungepairs.corpus import CorpusConfig, XorShift64Star, generate_corpus, path_blob_pair
from rungepairs.domain import Annulus, Disc, Plane, difference, rasterize
from rungepairs.errors import NotNested
from rungepairs.homology import (alpha_map, analyze, betti_omega, betti_report, h1_rank, h3_presentation, hhat0,
                                 induced_h1_map, induced_h3_map, split_sequence_check)
from rungepairs.planar import inside_components, restriction_map

R = 129


def g(spec, res=R):
    return rasterize(spec, None, res)


@pytest.fixture(scope="module")
def grids():
    return {
        "cstar": g(corpus.punctured_plane()),
        "plane": g(Plane()),
        "slit": g(corpus.plane_minus_axis()),
        "annulus": g(Annulus(0.0, 1.0, 2.0)),
        "disc": g(Disc(0j, 1.0)),
        "pair": g(corpus.off_axis_pair_domain()),
        "pair_core": g(corpus.off_axis_pair_partial_fill()),
        "disc3": g(corpus.off_axis_pair_filled()),
        "ext": g(corpus.disc_exterior()),
        "ext_band": g(corpus.disc_exterior_with_band()),
        "twohole": g(difference(Disc(0j, 3.0), Disc(-1.5 + 0j, 0.5, closed=True), Disc(1.5 + 0j, 0.5, closed=True))),
    }


def test_h1_rank(grids):
    assert h1_rank(grids["annulus"]) == 1
    assert h1_rank(grids["disc"]) == 0
    assert h1_rank(grids["twohole"]) == 2


def test_hhat0(grids):
    assert hhat0(grids["cstar"]).rank == 1
    assert hhat0(grids["disc"]).rank == 0
    assert hhat0(grids["slit"]).rank == 0


@pytest.mark.parametrize("name,expected", [
    ("cstar", (0, 0, 1)), ("slit", (0, 1, 0)), ("annulus", (0, 0, 1)), ("plane", (0, 0, 0)),
    ("disc", (0, 0, 0)), ("pair", (1, 0, 1)), ("ext", (0, 0, 1)), ("ext_band", (1, 0, 1)),
    ("twohole", (0, 0, 2)),
])
def test_betti(grids, name, expected):
    assert betti_omega(grids[name]).as_tuple() == expected


def test_alpha_examples(grids):
    A = alpha_map(grids["pair"])
    assert A.matrix.shape == (2, 1)
    assert sorted(A.matrix.ravel().tolist()) == [-1, 1]
    assert alpha_map(grids["disc"]).matrix.shape == (0, 0)
    assert alpha_map(grids["annulus"]).matrix.shape == (1, 0)


def test_h3_presentations(grids):
    p = h3_presentation(grids["cstar"])
    assert p.free_rank == 1 and p.is_torsion_free and p.relations.shape[1] == 0
    assert h3_presentation(grids["disc"]).free_rank == 0
    p = h3_presentation(grids["pair"])
    assert p.free_rank == 1 and p.snf_diagonal() == (1, 0)


def test_induced_h3(grids):
    m = induced_h3_map(grids["annulus"], grids["annulus"])
    assert m.injective and np.array_equal(m.map.matrix, np.eye(1, dtype=np.int64))
    m = induced_h3_map(grids["cstar"], grids["plane"])
    assert not m.injective and m.witness is not None and abs(m.witness).sum() == 1
    D, D1 = (g(s) for s in corpus.fixture_pairs()["annulus-shifted-puncture"])
    assert induced_h3_map(D, D1).injective
    with pytest.raises(NotNested):
        induced_h3_map(grids["plane"], grids["cstar"])


def test_induced_h1(grids):
    assert induced_h1_map(grids["pair"], grids["pair"]).injective
    assert not induced_h1_map(grids["pair"], grids["disc3"]).injective
    assert induced_h1_map(grids["slit"], grids["plane"]).injective
    assert induced_h1_map(grids["pair"], grids["pair_core"]).injective


def test_split_sequence_examples(grids):
    for name, (b1, plus, h0) in {"cstar": (1, 0, 1), "annulus": (1, 0, 1), "pair": (2, 1, 0)}.items():
        rep = split_sequence_check(grids[name])
        assert rep.ok
        assert (rep.b1_D, rep.b1_plus, rep.rank_hhat0) == (b1, plus, h0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_betti_agree_with_counting_formula(seed):
    """On connected domains b1 = (b1(D) - r)/2 and b3 = (b1(D) + r)/2, with r the
    number of bounded complement components that meet the real axis."""
    rng = XorShift64Star(seed)
    for G in corpus.random_pair(rng, 0, 65, (1, 4)).grids():
        if inside_components(G)[1] != 1:
            continue
        at = analyze(G).atlas
        r = sum(1 for c in at.bounded_ids if at.meets_real_row(c))
        b = betti_omega(G)
        assert 2 * b.b1 == len(at.bounded_ids) - r
        assert 2 * b.b3 == len(at.bounded_ids) + r


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_sequence_and_torsion_properties(seed):
    pair = corpus.random_pair(XorShift64Star(seed), 0, 65, (1, 4))
    D, D1 = pair.grids()
    for G in (D, D1):
        sq = split_sequence_check(G)
        assert sq.ok
        pres = h3_presentation(G)
        assert all(d in (0, 1) for d in pres.snf_diagonal())
        assert pres.free_rank == betti_omega(G).b3
    full = snf.is_injective(restriction_map(analyze(D).atlas, analyze(D1).atlas).matrix)
    h1 = induced_h1_map(D, D1).injective
    h3 = induced_h3_map(D, D1).injective
    if full:
        assert h1
    assert full == (h1 and h3)


def test_path_blob_family():
    rng = XorShift64Star(2024)
    for _ in range(8):
        P, Pp = path_blob_pair(rng)
        D, D1 = g(P), g(Pp)
        assert h3_presentation(D).free_rank == 1
        assert induced_h3_map(D, D1).injective


def test_report_json(grids):
    rep = betti_report(grids["annulus"]).to_json()
    assert (rep["b1"], rep["b2"], rep["b3"]) == (0, 0, 1)
    assert rep["inputs"]["b1_D"] == 1 and rep["inputs"]["r"] == 1
