"""Quaternion arithmetic, imaginary units and slice decomposition.

Quaternions are stored as four doubles ``(w, x, y, z)`` in the basis
``1, I, J, K``.  Every point of H lies on some complex slice
``R + R*u`` with ``u`` an imaginary unit; :func:`slice_decompose` and
:func:`apply_unit` convert between the two descriptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.w, self.x, self.y, self.z)):
            raise ValueError(f"non-finite quaternion component in {self!r}")

    @classmethod
    def real(cls, a: float) -> Quaternion:
        return cls(float(a), 0.0, 0.0, 0.0)

    @classmethod
    def from_seq(cls, seq) -> Quaternion:
        w, x, y, z = (float(c) for c in seq)
        return cls(w, x, y, z)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w, self.x, self.y, self.z)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w + other, self.x, self.y, self.z)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w - other, self.x, self.y, self.z)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return qmul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def conjugate(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self) -> float:
        return math.hypot(self.w, self.x, self.y, self.z)

    __abs__ = norm

    def imag_norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)

    def isclose(self, other: Quaternion, tol: float = 1e-12) -> bool:
        return (self - other).norm() <= tol


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
QI = Quaternion(0.0, 1.0, 0.0, 0.0)
QJ = Quaternion(0.0, 0.0, 1.0, 0.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True, slots=True)
class ImaginaryUnit:
    """A point of the unit sphere of purely imaginary quaternions."""

    ux: float
    uy: float
    uz: float

    def __post_init__(self):
        n2 = self.ux * self.ux + self.uy * self.uy + self.uz * self.uz
        if abs(n2 - 1.0) > 1e-9:
            raise ValueError(f"imaginary unit must have norm 1, got {math.sqrt(n2)}")

    @classmethod
    def normalized(cls, ux: float, uy: float, uz: float) -> ImaginaryUnit:
        n = math.sqrt(ux * ux + uy * uy + uz * uz)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(ux / n, uy / n, uz / n)

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.ux, self.uy, self.uz)

    def __neg__(self):
        return ImaginaryUnit(-self.ux, -self.uy, -self.uz)


DEFAULT_UNIT = ImaginaryUnit(1.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class SlicePoint:
    a: float
    b: float
    unit: ImaginaryUnit

    def __post_init__(self):
        if self.b < 0:
            raise ValueError("slice coordinate b must be non-negative")


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p*q``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


def slice_decompose(q: Quaternion) -> SlicePoint:
    """Write ``q = a + b*unit`` with ``b >= 0``.

    Real quaternions get :data:`DEFAULT_UNIT`; slice functions do not depend
    on the unit there.
    """
    b = q.imag_norm()
    if b == 0.0:
        return SlicePoint(q.w, 0.0, DEFAULT_UNIT)
    return SlicePoint(q.w, b, ImaginaryUnit(q.x / b, q.y / b, q.z / b))


def apply_unit(a: float, b: float, unit: ImaginaryUnit) -> Quaternion:
    return Quaternion(a, b * unit.ux, b * unit.uy, b * unit.uz)


def fibonacci_units(n: int) -> list[ImaginaryUnit]:
    """Roughly uniform sample of ``n`` imaginary units (Fibonacci sphere)."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    units = []
    for k in range(n):
        uz = 1.0 - 2.0 * (k + 0.5) / n
        r = math.sqrt(max(0.0, 1.0 - uz * uz))
        phi = golden * k
        units.append(ImaginaryUnit.normalized(r * math.cos(phi), r * math.sin(phi), uz))
    return units
