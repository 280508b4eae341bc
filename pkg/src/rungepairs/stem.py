"""Rational stem functions and the slice functions they induce.

A :class:`ComplexRational` is a polynomial plus a finite sum of pole terms
``c / (z - p)**m``.  A :class:`RationalStem` is a finite sum of symmetric
complex rationals times quaternion coefficients (coefficients act on the
right).  Evaluating the scalar factor at ``z`` and splitting into real and
imaginary parts gives the two quaternion components of the stem value.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleHit, SpecParseError
from .quaternion import ImaginaryUnit, Quaternion, qmul, slice_decompose

POLE_TOL = 1e-12


@dataclass(frozen=True)
class ComplexRational:
    """``sum_k poly[k] z**k + sum_{(p, m)} poles[(p, m)] / (z - p)**m``."""

    poly: tuple[complex, ...] = ()
    poles: tuple[tuple[complex, int, complex], ...] = ()
    symmetric: bool = False

    def __post_init__(self):
        poly = _trim(tuple(complex(c) for c in self.poly))
        merged: dict[tuple[complex, int], complex] = {}
        for p, m, c in self.poles:
            m = int(m)
            if m < 1:
                raise ValueError(f"pole order must be >= 1, got {m}")
            key = (complex(p), m)
            merged[key] = merged.get(key, 0j) + complex(c)
        poles = tuple(sorted(((p, m, c) for (p, m), c in merged.items() if c != 0),
                             key=lambda t: (t[0].real, t[0].imag, t[1])))
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "poles", poles)
        if self.symmetric and not self.is_conjugation_closed():
            raise ValueError("terms are not closed under conjugation")

    @classmethod
    def polynomial(cls, coeffs: Iterable[complex], symmetric: bool = False) -> ComplexRational:
        return cls(tuple(coeffs), (), symmetric)

    @classmethod
    def simple_pole(cls, p: complex, coeff: complex = 1.0, order: int = 1) -> ComplexRational:
        return cls((), ((p, order, coeff),))

    def is_conjugation_closed(self, tol: float = 1e-12) -> bool:
        scale = max([abs(c) for c in self.poly] + [abs(c) for _, _, c in self.poles], default=0.0)
        return self.distance_to(self.reflect()) <= tol * max(1.0, scale)

    def distance_to(self, other: ComplexRational) -> float:
        """Coefficient-wise sup distance (zero iff equal representations)."""
        diff = self - other
        vals = [abs(c) for c in diff.poly] + [abs(c) for _, _, c in diff.poles]
        return max(vals, default=0.0)

    def reflect(self) -> ComplexRational:
        """The function ``z -> conj(f(conj z))``."""
        return ComplexRational(
            tuple(c.conjugate() for c in self.poly),
            tuple((p.conjugate(), m, c.conjugate()) for p, m, c in self.poles),
        )

    def with_symmetric_flag(self) -> ComplexRational:
        return ComplexRational(self.poly, self.poles, True)

    def __add__(self, other: ComplexRational) -> ComplexRational:
        n = max(len(self.poly), len(other.poly))
        poly = [0j] * n
        for k, c in enumerate(self.poly):
            poly[k] += c
        for k, c in enumerate(other.poly):
            poly[k] += c
        return ComplexRational(tuple(poly), self.poles + other.poles)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: ComplexRational) -> ComplexRational:
        return self + (-other)

    def scale(self, s: complex) -> ComplexRational:
        return ComplexRational(tuple(s * c for c in self.poly),
                               tuple((p, m, s * c) for p, m, c in self.poles))

    @property
    def pole_locations(self) -> list[complex]:
        seen = []
        for p, _, _ in self.poles:
            if p not in seen:
                seen.append(p)
        return seen

    def principal_part(self, p: complex) -> dict[int, complex]:
        return {m: c for q, m, c in self.poles if q == p}

    def degree(self) -> int:
        """Polynomial degree plus the sum of the highest pole orders."""
        deg = max(len(self.poly) - 1, 0)
        for p in self.pole_locations:
            deg += max(self.principal_part(p))
        return deg

    def __call__(self, z):
        if np.ndim(z) == 0:
            z = complex(z)
            for p, _, _ in self.poles:
                if abs(z - p) < POLE_TOL:
                    raise PoleHit(f"evaluation point {z} hits pole {p}")
            val = 0j
            for c in reversed(self.poly):
                val = val * z + c
            for p, m, c in self.poles:
                val += c / (z - p) ** m
            return val
        z = np.asarray(z, dtype=complex)
        for p, _, _ in self.poles:
            if np.any(np.abs(z - p) < POLE_TOL):
                raise PoleHit(f"evaluation grid hits pole {p}")
        val = np.zeros_like(z)
        for c in reversed(self.poly):
            val = val * z + c
        for p, m, c in self.poles:
            val = val + c / (z - p) ** m
        return val

    def to_json(self) -> dict:
        return {
            "poly": [[c.real, c.imag] for c in self.poly],
            "poles": [{"at": [p.real, p.imag], "order": m, "coeff": [c.real, c.imag]}
                      for p, m, c in self.poles],
            "symmetric": self.symmetric,
        }

    @classmethod
    def from_json(cls, obj: dict) -> ComplexRational:
        try:
            poly = tuple(complex(*c) for c in obj.get("poly", []))
            poles = tuple((complex(*t["at"]), int(t["order"]), complex(*t["coeff"]))
                          for t in obj.get("poles", []))
            return cls(poly, poles, bool(obj.get("symmetric", False)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"bad rational function: {exc}") from exc


def _trim(coeffs: tuple[complex, ...]) -> tuple[complex, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return coeffs[:end]


def symmetrize(f: ComplexRational) -> tuple[ComplexRational, ComplexRational]:
    """Split ``f = g + i*h`` with ``g`` and ``h`` symmetric."""
    fr = f.reflect()
    g = (f + fr).scale(0.5)
    h = (f - fr).scale(-0.5j)
    return g.with_symmetric_flag(), h.with_symmetric_flag()


@dataclass(frozen=True, slots=True)
class StemValue:
    f1: Quaternion
    f2: Quaternion

    def norm(self) -> float:
        """Euclidean norm on H (x) C, identified with R^8."""
        return math.hypot(self.f1.norm(), self.f2.norm())


@dataclass(frozen=True)
class RationalStem:
    """``F(z) = sum_t r_t(z) * a_t`` with symmetric scalar factors ``r_t``."""

    terms: tuple[tuple[ComplexRational, Quaternion], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple(self.terms)
        for r, a in terms:
            if not r.symmetric:
                raise ValueError("stem scalar factors must carry the symmetric flag")
            if not isinstance(a, Quaternion):
                raise TypeError("stem coefficients must be quaternions")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def power_series(cls, coeffs: Sequence[Quaternion]) -> RationalStem:
        """The stem of ``q -> sum_k q**k * coeffs[k]``."""
        terms = []
        for k, a in enumerate(coeffs):
            poly = (0,) * k + (1,)
            terms.append((ComplexRational(poly, (), True), a))
        return cls(tuple(terms))

    @property
    def pole_locations(self) -> list[complex]:
        out: list[complex] = []
        for r, _ in self.terms:
            for p in r.pole_locations:
                if p not in out:
                    out.append(p)
        return out

    def to_json(self) -> dict:
        return {"terms": [{"scalar": r.to_json(), "coeff": list(a.as_tuple())}
                          for r, a in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> RationalStem:
        try:
            terms = []
            for t in obj["terms"]:
                r = ComplexRational.from_json(t["scalar"]).with_symmetric_flag()
                terms.append((r, Quaternion.from_seq(t["coeff"])))
            return cls(tuple(terms))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"bad stem function: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def stem_eval(F: RationalStem, z: complex) -> StemValue:
    z = complex(z)
    f1 = Quaternion()
    f2 = Quaternion()
    for r, a in F.terms:
        v = r(z)
        f1 = f1 + a * v.real
        f2 = f2 + a * v.imag
    if z.imag == 0:
        f2 = Quaternion()
    return StemValue(f1, f2)


def slice_eval(F: RationalStem, q: Quaternion) -> Quaternion:
    sp = slice_decompose(q)
    return slice_eval_at(F, sp.a, sp.b, sp.unit)


def slice_eval_at(F: RationalStem, x: float, y: float, unit: ImaginaryUnit) -> Quaternion:
    """``f(x + y*unit) = F1(x+yi) + unit * F2(x+yi)``; ``y`` may be negative."""
    val = stem_eval(F, complex(x, y))
    return val.f1 + qmul(unit.as_quaternion(), val.f2)


def horner_quaternion(coeffs: Sequence[Quaternion], q: Quaternion) -> Quaternion:
    """``sum_k q**k * coeffs[k]`` by Horner's rule (q commutes with itself)."""
    acc = Quaternion()
    for a in reversed(coeffs):
        acc = qmul(q, acc) + a
    return acc


@dataclass
class NormReport:
    samples: int
    min_ratio: float
    max_ratio: float
    worst_lower_slack: float
    worst_upper_slack: float
    ok: bool


def norm_bounds_check(F: RationalStem, samples, slack: float = 1e-9) -> NormReport:
    """Check ``||F||/sqrt2 <= max(|f(x+yI)|, |f(x-yI)|) <= sqrt2 ||F||``.

    ``worst_*_slack`` are the largest violations (negative when satisfied).
    """
    root2 = math.sqrt(2.0)
    lo, hi = math.inf, -math.inf
    worst_low, worst_up = -math.inf, -math.inf
    n = 0
    for x, y, unit in samples:
        val = stem_eval(F, complex(x, y))
        u = unit.as_quaternion()
        fp = (val.f1 + qmul(u, val.f2)).norm()
        fm = (val.f1 - qmul(u, val.f2)).norm()
        m = max(fp, fm)
        nF = val.norm()
        worst_low = max(worst_low, nF / root2 - m)
        worst_up = max(worst_up, m - root2 * nF)
        if nF > 0:
            lo = min(lo, m / nF)
            hi = max(hi, m / nF)
        n += 1
    ok = worst_low <= slack and worst_up <= slack
    return NormReport(n, lo, hi, worst_low, worst_up, ok)


def conj_split(f: ComplexRational, z: complex) -> tuple[complex, complex]:
    """Defining formulas of the symmetric parts evaluated directly at ``z``."""
    fz = f(z)
    fbar = f(z.conjugate()).conjugate()
    return 0.5 * (fz + fbar), (fz - fbar) / 2j

