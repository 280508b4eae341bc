import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rungepairs.corpus import CorpusConfig, XorShift64Star, generate_corpus, random_pair
from rungepairs.domain import (Annulus, Disc, Line, Plane, Point, Rect, Strip, check_nested, derive_regions,
                               difference, empty, load_spec, normalize_box, parse_spec_text, rasterize,
                               spec_from_json, union)
from rungepairs.errors import AsymmetricSpec, BoxTooSmall, GridMismatch, SpecParseError


def test_disc_fill_fraction():
    G = rasterize(Disc(0j, 1.0), (-2, 2, 2), 65)
    assert G.fill_fraction() == pytest.approx(math.pi / 16, rel=0.05)
    assert np.array_equal(G.inside, G.inside[::-1])


def test_empty_spec():
    assert not rasterize(empty(), None, 33).inside.any()


def test_annulus_predicate():
    G = rasterize(Annulus(0.0, 1.0, 2.0), None, 129)
    r = np.abs(G.centers())
    assert np.array_equal(G.inside, (r > 1) & (r < 2))


def test_frame_and_symmetry_always_hold():
    for pair in generate_corpus(CorpusConfig(count=30)):
        for G in pair.grids():
            m = G.inside
            assert np.array_equal(m, m[::-1])
            assert not (m[0].any() or m[-1].any() or m[:, 0].any() or m[:, -1].any())


def test_box_too_small():
    with pytest.raises(BoxTooSmall):
        rasterize(Disc(0j, 3.9), (-4, 4, 4), 65)


def test_asymmetric_spec_rejected():
    with pytest.raises(AsymmetricSpec):
        rasterize(Disc(1j, 0.5), None, 65)
    rasterize(Disc(1j, 0.5, symmetrize=True), None, 65)


def test_derived_regions():
    D = rasterize(Annulus(0.0, 1.0, 2.0), None, 129)
    reg = derive_regions(D)
    assert len(reg.intervals) == 2
    c = D.real_row
    # D* and the real row partition D+
    assert np.array_equal(reg.plus.inside, reg.dstar.inside | np.where(np.arange(D.ny)[:, None] == c, D.inside, False))
    assert not (reg.dstar.inside[c].any())
    assert len(derive_regions(rasterize(Disc(0j, 1.0), None, 65)).intervals) == 1
    assert derive_regions(rasterize(difference(Plane(), Line(0.0)), None, 65)).intervals == ()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_derived_regions_partition_random(seed):
    pair = random_pair(XorShift64Star(seed), 0, 65, (1, 4))
    D = pair.grids()[0]
    reg = derive_regions(D)
    c = D.real_row
    assert not np.any(reg.dstar.inside & ~reg.plus.inside)
    diff = reg.plus.inside & ~reg.dstar.inside
    assert np.array_equal(diff[c], D.inside[c]) and not np.delete(diff, c, axis=0).any()
    covered = np.zeros(D.nx, dtype=bool)
    for a, b in reg.intervals:
        covered[a:b + 1] = True
    assert np.array_equal(covered, D.inside[c])


def test_check_nested():
    D = rasterize(Disc(0j, 1.0), None, 65)
    D2 = rasterize(Disc(0j, 2.0), None, 65)
    assert check_nested(D, D)
    assert check_nested(D, D2)
    assert not check_nested(D2, D)
    with pytest.raises(GridMismatch):
        check_nested(D, rasterize(Disc(0j, 1.0), None, 33))


def test_point_and_line_are_one_cell_thick():
    G = rasterize(difference(Plane(), Point(0j)), None, 65)
    assert (~G.inside[1:-1, 1:-1]).sum() == 1
    G = rasterize(difference(Plane(), Line(0.0)), None, 65)
    assert not G.inside[G.real_row].any()
    assert G.inside[G.real_row + 1, 1:-1].all()


def test_json_roundtrip_of_specs():
    spec = union(difference(Disc(0j, 3.0), Disc(1j, 0.5, closed=True, symmetrize=True), Rect(-1, 1, -0.2, 0.2)),
                 Strip(-0.5, 0.5), Annulus(0.0, 1.0, 2.0))
    again = spec_from_json(json.loads(json.dumps(spec.to_json())))
    assert np.array_equal(rasterize(spec, None, 65).inside, rasterize(again, None, 65).inside)


def test_parse_errors_carry_positions():
    with pytest.raises(SpecParseError, match="line 2, column"):
        parse_spec_text('{"type": "disc",\n "radius": }')
    with pytest.raises(SpecParseError, match="unknown primitive"):
        parse_spec_text('{"type": "hexagon"}')
    with pytest.raises(SpecParseError):
        parse_spec_text('{"type": "disc"}')


def test_wrapper_options(tmp_path):
    p = tmp_path / "d.json"
    p.write_text(json.dumps({"domain": {"type": "disc", "radius": 1}, "resolution": 65, "box": [-2, 2, 2]}))
    spec, opts = load_spec(p)
    assert isinstance(spec, Disc) and opts["resolution"] == 65
    assert normalize_box(opts["box"]) == (-2.0, 2.0, -2.0, 2.0)
    with pytest.raises(SpecParseError):
        normalize_box([-1, 1, -1, 2])


def test_text_export():
    G = rasterize(Disc(0j, 1.0), (-2, 2, 2), 9)
    rows = G.to_text().splitlines()
    assert len(rows) == 9 and all(len(r) == 9 for r in rows)
    assert rows == rows[::-1]
