import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rungepairs.quaternion import (DEFAULT_UNIT, ONE, QI, QJ, QK, ImaginaryUnit, Quaternion, apply_unit,
                                   fibonacci_units, qmul, slice_decompose)

# products of tiny components underflow, which says nothing about the algebra
finite = st.floats(-1e3, 1e3, allow_nan=False).map(lambda v: 0.0 if abs(v) < 1e-100 else v)
quats = st.builds(Quaternion, finite, finite, finite, finite)
units = st.tuples(finite, finite, finite).filter(lambda v: math.hypot(*v) > 1e-3).map(
    lambda v: ImaginaryUnit.normalized(*v))


def test_multiplication_table():
    assert qmul(QI, QJ) == QK
    assert qmul(QJ, QK) == QI
    assert qmul(QK, QI) == QJ
    assert qmul(QJ, QI) == -QK
    # I*J*K = -1
    assert qmul(qmul(QI, QJ), QK) == -ONE


def test_identity_and_hand_expansion():
    q = Quaternion(1.5, -2.0, 0.25, 3.0)
    assert qmul(q, ONE) == q
    assert qmul(ONE + QI, ONE + QJ) == Quaternion(1, 1, 1, 1)


@given(quats, quats)
def test_norm_is_multiplicative(p, q):
    lhs = qmul(p, q).norm()
    rhs = p.norm() * q.norm()
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


@given(quats, quats, quats)
def test_associative(p, q, r):
    a = qmul(qmul(p, q), r)
    b = qmul(p, qmul(q, r))
    scale = max(1.0, p.norm() * q.norm() * r.norm())
    assert (a - b).norm() <= 1e-12 * scale


@given(units)
def test_units_square_to_minus_one(u):
    sq = qmul(u.as_quaternion(), u.as_quaternion())
    assert (sq + ONE).norm() < 1e-12


def test_slice_decompose_examples():
    sp = slice_decompose(Quaternion(3, 4, 0, 0))
    assert (sp.a, sp.b, sp.unit) == (3, 4, ImaginaryUnit(1, 0, 0))
    sp = slice_decompose(Quaternion(5))
    assert (sp.a, sp.b, sp.unit) == (5, 0, DEFAULT_UNIT)
    sp = slice_decompose(Quaternion(1, 0, 1, 1))
    assert sp.b == pytest.approx(math.sqrt(2))
    assert sp.unit.uy == pytest.approx(1 / math.sqrt(2))
    assert sp.unit.uz == pytest.approx(1 / math.sqrt(2))


def test_apply_unit_examples():
    assert apply_unit(3, 4, ImaginaryUnit(1, 0, 0)) == Quaternion(3, 4, 0, 0)
    assert apply_unit(0, 1, ImaginaryUnit(0, 1, 0)) == QJ


@given(finite, st.floats(1e-9, 1e3), units)
def test_slice_roundtrip(a, b, u):
    sp = slice_decompose(apply_unit(a, b, u))
    assert sp.a == a
    assert sp.b == pytest.approx(b, rel=1e-12)
    for s, t in zip((sp.unit.ux, sp.unit.uy, sp.unit.uz), (u.ux, u.uy, u.uz)):
        assert s == pytest.approx(t, abs=1e-9)


def test_unit_rejects_non_unit():
    with pytest.raises(ValueError):
        ImaginaryUnit(1, 1, 0)


def test_fibonacci_units_are_spread():
    us = fibonacci_units(64)
    assert len(us) == 64
    mean = [sum(getattr(u, c) for u in us) / 64 for c in ("ux", "uy", "uz")]
    assert max(abs(m) for m in mean) < 0.05
