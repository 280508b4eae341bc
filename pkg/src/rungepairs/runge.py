"""Runge-pair decisions and constructive approximation by pole pushing.

Four grid-level tests are computed independently and must agree:

``iii``  restriction of complement functions is injective on H1,
``iv``   the quaternionic H1 and H3 maps are injective,
``v``    every bounded complement component of D meets the complement of D1,
``vi``   the same statement for complement components taken modulo
         conjugation (labelled on the closed upper half only).

Pole pushing moves each principal part along a lattice path in its
complement component.  A step from centre ``a`` to ``b`` re-expands the
principal part about ``b`` and truncates; the step is admissible when
``|a - b| <= theta * dist(b, K)``, so the discarded tail is a convergent
series with ratio at most ``theta`` on ``K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree
from scipy.special import gammaln

from .domain import SymmetricDomainGrid, check_nested
from .errors import EquivalenceViolation, NotNested, NotRunge, PathNotFound, PushBudgetExceeded
from .homology import analyze, induced_h1_map, induced_h3_map
from .planar import FOUR, GridCycle, components_meeting, restriction_map
from .quaternion import Quaternion, fibonacci_units
from .stem import ComplexRational, RationalStem, symmetrize

THETA = 0.5
CRITERIA = ("iii", "iv", "v", "vi")


def _require_nested(D, D1):
    if not check_nested(D, D1):
        raise NotNested("D is not contained in D1")


# -- the four criteria -------------------------------------------------------

def criterion_iii(D: SymmetricDomainGrid, D1: SymmetricDomainGrid) -> tuple[bool, list[int] | None]:
    R = restriction_map(analyze(D).atlas, analyze(D1).atlas)
    ker = R.kernel_basis()
    return (not ker, ker[0].tolist() if ker else None)


def criterion_iv(D: SymmetricDomainGrid, D1: SymmetricDomainGrid) -> tuple[bool, dict]:
    m1 = induced_h1_map(D, D1)
    m3 = induced_h3_map(D, D1)
    wit = {}
    if not m1.injective:
        wit["h1"] = m1.witness.tolist()
    if not m3.injective:
        wit["h3"] = m3.witness.tolist()
    return (m1.injective and m3.injective, wit)


def criterion_v(D: SymmetricDomainGrid, D1: SymmetricDomainGrid) -> tuple[bool, list[int]]:
    """True iff every bounded complement component of D contains a cell outside D1."""
    _require_nested(D, D1)
    met = components_meeting(analyze(D).atlas, D1)
    bad = [c for c, ok in met.items() if not ok]
    return (not bad, bad)


def criterion_vi(D: SymmetricDomainGrid, D1: SymmetricDomainGrid) -> tuple[bool, list[int]]:
    """Same question for complement components identified with their mirror images."""
    _require_nested(D, D1)
    lab, n, unbounded = analyze(D).folded_components
    c = D.real_row
    outside1 = ~D1.inside
    outside1[:c, :] = False
    hit = set(int(v) for v in np.unique(lab[outside1]) if v >= 0)
    bad = [k for k in range(n) if not unbounded[k] and k not in hit]
    return (not bad, bad)


@dataclass
class RungeReport:
    verdicts: dict[str, bool]
    witnesses: dict[str, object]
    resolution: tuple[int, int]
    box: tuple[float, float, float, float]

    @property
    def runge(self) -> bool:
        return all(self.verdicts.values())

    @property
    def consistent(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    def to_json(self) -> dict:
        return {"runge": self.runge, "consistent": self.consistent,
                "verdicts": dict(self.verdicts), "witnesses": self.witnesses,
                "resolution": list(self.resolution), "box": list(self.box)}


def runge_decide(D: SymmetricDomainGrid, D1: SymmetricDomainGrid, *, strict: bool = True) -> RungeReport:
    _require_nested(D, D1)
    v3, w3 = criterion_iii(D, D1)
    v4, w4 = criterion_iv(D, D1)
    v5, w5 = criterion_v(D, D1)
    v6, w6 = criterion_vi(D, D1)
    witnesses: dict[str, object] = {}
    if w3 is not None:
        witnesses["iii"] = w3
    if w4:
        witnesses["iv"] = w4
    if w5:
        witnesses["v"] = {"components": w5,
                          "points": [[z.real, z.imag] for z in (analyze(D).atlas.rep_point(c) for c in w5)]}
    if w6:
        witnesses["vi"] = w6
    rep = RungeReport({"iii": v3, "iv": v4, "v": v5, "vi": v6}, witnesses, D.resolution, D.box)
    if strict and not rep.consistent:
        raise EquivalenceViolation("Runge criteria disagree", rep.to_json())
    return rep


# -- pole pushing ------------------------------------------------------------

@dataclass
class PoleRoute:
    start: complex
    waypoints: list[complex]
    disposition: str  # "kept", "reached", "infinity"
    degrees: list[int] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.waypoints) - 1

    def to_json(self) -> dict:
        return {"start": [self.start.real, self.start.imag],
                "waypoints": [[w.real, w.imag] for w in self.waypoints],
                "disposition": self.disposition, "degrees": list(self.degrees)}


@dataclass
class PolePushPlan:
    routes: list[PoleRoute]
    theta: float = THETA
    k_radius: float = 0.0

    def check(self, K_points: np.ndarray) -> bool:
        """Every step obeys the contraction condition; escapes clear ``K``."""
        tree = cKDTree(np.column_stack([K_points.real, K_points.imag]))
        for r in self.routes:
            for a, b in zip(r.waypoints[:-1], r.waypoints[1:]):
                d, _ = tree.query([b.real, b.imag])
                if abs(a - b) > self.theta * d * (1 + 1e-12):
                    return False
            if r.disposition == "infinity" and self.k_radius > self.theta * abs(r.waypoints[-1]) * (1 + 1e-12):
                return False
        return True

    def to_json(self) -> dict:
        return {"theta": self.theta, "routes": [r.to_json() for r in self.routes]}


@dataclass
class ApproxResult:
    eps: float
    achieved: float
    achieved_quaternionic: float | None
    total_degree: int
    success: bool
    plan: PolePushPlan | None = None
    bound: float | None = None

    def to_json(self) -> dict:
        out = {"eps": self.eps, "achieved": self.achieved,
               "achieved_quaternionic": self.achieved_quaternionic,
               "total_degree": self.total_degree, "success": self.success}
        if self.bound is not None:
            out["truncation_bound"] = self.bound
        if self.plan is not None:
            out["plan"] = self.plan.to_json()
        return out


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def series_tail(k: int, n0: int, rho: float) -> float:
    """Upper bound for ``sum_{n >= n0} C(n+k-1, k-1) rho**n`` (``0 <= rho < 1``)."""
    n0 = max(n0, 0)
    if rho == 0:
        return float(n0 == 0)
    # term ratio (n+k)/(n+1) * rho decreases to rho; sum exactly until it drops below 1
    n_star = n0
    if k > 1:
        n_star = max(n0, math.ceil((k * rho - 1) / (1 - rho)) + 1)
    lr = math.log(rho)
    head = sum(math.exp(_log_binom(n + k - 1, k - 1) + n * lr) for n in range(n0, n_star))
    t = math.exp(_log_binom(n_star + k - 1, k - 1) + n_star * lr)
    q = (n_star + k) / (n_star + 1) * rho
    return head + t / (1 - q)


def _binom_table(J: int, M: int) -> np.ndarray:
    """``log C(j-1, k-1)`` for ``j = 1..J`` (rows) and ``k = 1..M`` (columns); -inf when k > j."""
    j = np.arange(1, J + 1)[:, None]
    k = np.arange(1, M + 1)[None, :]
    with np.errstate(invalid="ignore"):
        out = gammaln(j) - gammaln(k) - gammaln(j - k + 1)
    out[k > j] = -np.inf
    return out


def _shift_coefficients(coeffs: dict[int, complex], delta: complex, scale: float, J: int) -> np.ndarray:
    """Scaled coefficients ``e_j / scale**j`` (j = 1..J) of ``sum c_k (w - delta)**-k`` in powers of ``1/w``.

    ``e_j = sum_k c_k C(j-1, k-1) delta**(j-k)``.
    """
    M = max(coeffs)
    c = np.zeros(M, dtype=complex)
    for k, v in coeffs.items():
        c[k - 1] = v
    ks = np.arange(1, M + 1)
    cs = c / scale ** ks
    d = delta / scale
    lb = _binom_table(J, M)
    p = np.arange(1, J + 1)[:, None] - ks[None, :]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if d == 0:
            powers = np.where(p == 0, 1.0 + 0j, 0j)
        else:
            powers = np.exp(p * np.log(complex(d)))
        terms = np.where(p >= 0, np.exp(lb) * powers, 0j)
    return terms @ cs


def _taylor_coefficients(coeffs: dict[int, complex], b: complex, scale: float, J: int) -> np.ndarray:
    """Scaled Taylor coefficients ``t_n * scale**n`` (n = 0..J) of ``sum c_k (z - b)**-k`` about 0."""
    M = max(coeffs)
    n = np.arange(0, J + 1)[:, None]
    ks = np.arange(1, M + 1)[None, :]
    lb = gammaln(n + ks) - gammaln(ks) - gammaln(n + 1)
    c = np.zeros(M, dtype=complex)
    for k, v in coeffs.items():
        c[k - 1] = v * (-b) ** (-k)
    with np.errstate(over="ignore"):
        terms = np.exp(lb + n * math.log(scale / abs(b))) * np.exp(-1j * n * np.angle(b))
    return terms @ c


def _crude_tail(coeffs: dict[int, complex], rho: float, R: float, J: int) -> float:
    """Triangle-inequality bound for the part of the expansion beyond index ``J``."""
    return sum(abs(c) * R ** (-k) * series_tail(k, J - k + 1, rho) for k, c in coeffs.items())


def _min_order(scaled: np.ndarray, crude: float, budget: float, offset: int) -> int | None:
    """Smallest N such that the tail of ``|scaled|`` past N plus ``crude`` fits the budget."""
    a = np.abs(scaled)
    if not np.all(np.isfinite(a)):
        return None
    suffix = np.concatenate([np.cumsum(a[::-1])[::-1], [0.0]])
    ok = np.flatnonzero(suffix + crude <= budget)
    if not len(ok):
        return None
    return int(ok[0]) + offset - 1


def shift_order(coeffs, delta: complex, R: float, budget: float, cap: int) -> tuple[int, float]:
    """Truncation order for re-expanding about a centre shifted by ``-delta``.

    The truncation error on ``{|w| >= R}`` is at most the returned bound.
    """
    rho = abs(delta) / R
    M = max(coeffs)
    J = 4 * M + 128
    while J <= 4 * cap:
        scaled = _shift_coefficients(coeffs, delta, R, J)
        crude = _crude_tail(coeffs, rho, R, J)
        N = _min_order(scaled, crude, budget, 1)
        if N is not None:
            N = max(N, 1)
            if N > cap:
                break
            return N, float(np.sum(np.abs(scaled[N:])) + crude)
        J *= 2
    raise PushBudgetExceeded(f"re-expansion needs order above {cap}")


def taylor_order(coeffs, b: complex, r_K: float, budget: float, cap: int) -> tuple[int, float]:
    rho = r_K / abs(b)
    M = max(coeffs)
    J = 4 * M + 128
    while J <= 4 * cap:
        scaled = _taylor_coefficients(coeffs, b, r_K, J)
        crude = sum(abs(c) * abs(b) ** (-k) * series_tail(k, J + 1, rho) for k, c in coeffs.items())
        N = _min_order(scaled, crude, budget, 0)
        if N is not None:
            N = max(N, 0)
            if N > cap:
                break
            return N, float(np.sum(np.abs(scaled[N + 1:])) + crude)
        J *= 2
    raise PushBudgetExceeded(f"Taylor expansion needs degree above {cap}")


def _laurent_shift(coeffs: dict[int, complex], delta: complex, N: int) -> dict[int, complex]:
    """Coefficients of ``w**-j`` (j <= N) for ``sum c_k (w - delta)**-k``."""
    e = _shift_coefficients(coeffs, delta, 1.0, N)
    return {j + 1: complex(v) for j, v in enumerate(e) if v != 0}


def _taylor_at_zero(coeffs: dict[int, complex], b: complex, N: int) -> list[complex]:
    """Taylor coefficients (degree <= N) of ``sum c_k (z - b)**-k`` about 0."""
    return [complex(v) for v in _taylor_coefficients(coeffs, b, 1.0, N)]


def _grid_path(mask_comp: np.ndarray, start: tuple[int, int], targets: np.ndarray) -> list[tuple[int, int]]:
    """Shortest 4-connected path inside ``mask_comp`` from ``start`` to any target cell."""
    dist = np.full(mask_comp.shape, -1, dtype=np.int64)
    dist[start] = 0
    frontier = np.zeros_like(mask_comp)
    frontier[start] = True
    hit = None
    d = 0
    while hit is None:
        if targets[start]:
            hit = start
            break
        grow = ndimage.binary_dilation(frontier, structure=FOUR) & mask_comp & (dist < 0)
        if not grow.any():
            raise PathNotFound("no lattice path to a target cell")
        d += 1
        dist[grow] = d
        frontier = grow
        reached = np.argwhere(grow & targets)
        if len(reached):
            hit = tuple(int(v) for v in reached[0])
    path = [hit]
    cur = hit
    while dist[cur] > 0:
        j, i = cur
        for dj, di in ((0, -1), (-1, 0), (0, 1), (1, 0)):
            nb = (j + dj, i + di)
            if 0 <= nb[0] < dist.shape[0] and 0 <= nb[1] < dist.shape[1] and dist[nb] == dist[cur] - 1:
                cur = nb
                break
        path.append(cur)
    return path[::-1]


def _polyline_samples(points: list[complex], spacing: float) -> np.ndarray:
    out = [points[0]]
    for a, b in zip(points[:-1], points[1:]):
        n = max(1, math.ceil(abs(b - a) / spacing))
        out.extend(a + (b - a) * t for t in np.arange(1, n + 1) / n)
    return np.array(out, dtype=complex)


def _greedy_waypoints(samples: np.ndarray, tree: cKDTree, step: float) -> list[complex]:
    """Farthest admissible sample each time: ``|a - b| <= step * dist(b, K)``."""
    dists, _ = tree.query(np.column_stack([samples.real, samples.imag]))
    way = [complex(samples[0])]
    i = 0
    last = len(samples) - 1
    while i < last:
        ok = np.abs(samples[i + 1:] - samples[i]) <= step * dists[i + 1:]
        idx = np.flatnonzero(ok)
        if not len(idx):
            raise PathNotFound("path passes too close to the compact set")
        i = i + 1 + int(idx[-1])
        way.append(complex(samples[i]))
    return way


def _escape_waypoints(b: complex, tree: cKDTree, k_radius: float, theta: float, step: float) -> list[complex]:
    """Radial steps until ``sup_K |z| <= theta |b|``.

    A step of length ``t = step * d / (1 + step)`` from a point at distance
    ``d`` from K lands at distance at least ``d - t = t / step``.
    """
    way = []
    while k_radius > theta * abs(b):
        d, _ = tree.query([b.real, b.imag])
        u = b / abs(b) if b != 0 else 1.0
        b = b + u * (step * d / (1 + step))
        way.append(b)
    return way


def _mirror_route(r: PoleRoute) -> PoleRoute:
    return PoleRoute(r.start.conjugate(), [w.conjugate() for w in r.waypoints], r.disposition)


def plan_routes(f: ComplexRational, D: SymmetricDomainGrid, D1: SymmetricDomainGrid,
                K: np.ndarray, theta: float = THETA, step: float | None = None) -> PolePushPlan:
    """Lattice routes for every pole of ``f``; conjugate poles get mirrored routes."""
    step = theta / 2 if step is None else min(step, theta)
    an = analyze(D)
    atlas = an.atlas
    kpts = D.centers()[K]
    tree = cKDTree(np.column_stack([kpts.real, kpts.imag]))
    k_radius = float(np.max(np.abs(kpts)))
    frame = np.zeros(D.inside.shape, dtype=bool)
    frame[0, :] = frame[-1, :] = frame[:, 0] = frame[:, -1] = True
    free1 = ~D1.inside & ~frame
    routes: dict[complex, PoleRoute] = {}
    poles = f.pole_locations
    for p in sorted(poles, key=lambda z: (z.imag < 0, z.real, abs(z.imag))):
        if p.imag < 0 and p.conjugate() in routes:
            routes[p] = _mirror_route(routes[p.conjugate()])
            continue
        cell = D.cell_of(p)
        if D.inside[cell]:
            raise NotRunge(f"pole {p} lies in the domain", {"pole": [p.real, p.imag]})
        if free1[cell]:
            routes[p] = PoleRoute(p, [p], "kept")
            continue
        comp = atlas.component_at(*cell)
        cmask = atlas.mask(comp)
        targets = free1 & cmask
        if not atlas.bounded[comp]:
            targets = targets | (frame & cmask)
        if not targets.any():
            rp = atlas.rep_point(comp)
            raise NotRunge(f"component {comp} holding pole {p} has no cell outside D1",
                           {"component": comp, "point": [rp.real, rp.imag]})
        cells = _grid_path(cmask, cell, targets)
        pts = [p] + [D.center(*c) for c in cells]
        way = _greedy_waypoints(_polyline_samples(pts, D.h / 8), tree, step)
        if frame[cells[-1]]:
            way += _escape_waypoints(way[-1], tree, k_radius, theta, step)
            routes[p] = PoleRoute(p, way, "infinity")
        else:
            routes[p] = PoleRoute(p, way, "reached")
    return PolePushPlan([routes[p] for p in poles], theta, k_radius)


def _push_symmetric(f: ComplexRational, D, D1, K: np.ndarray, eps: float, theta: float,
                    step: float | None, cap: int) -> tuple[ComplexRational, PolePushPlan, float]:
    kpts = D.centers()[K]
    tree = cKDTree(np.column_stack([kpts.real, kpts.imag]))
    plan = plan_routes(f, D, D1, K, theta, step)
    moving = [r for r in plan.routes if r.disposition != "kept"]
    max_steps = max((r.steps + (r.disposition == "infinity") for r in moving), default=0)
    budget = eps / (max(len(moving), 1) * max(max_steps, 1))
    poly = list(f.poly)
    poles: list[tuple[complex, int, complex]] = []
    bound = 0.0
    for route in plan.routes:
        coeffs = f.principal_part(route.start)
        for a, b in zip(route.waypoints[:-1], route.waypoints[1:]):
            R, _ = tree.query([b.real, b.imag])
            N, tail = shift_order(coeffs, a - b, R, budget, cap)
            coeffs = _laurent_shift(coeffs, a - b, N)
            route.degrees.append(N)
            bound += tail
        b = route.waypoints[-1]
        if route.disposition == "infinity":
            N, tail = taylor_order(coeffs, b, plan.k_radius, budget, cap)
            route.degrees.append(N)
            bound += tail
            tay = _taylor_at_zero(coeffs, b, N)
            poly += [0j] * (len(tay) - len(poly))
            for n, c in enumerate(tay):
                poly[n] += c
        else:
            poles += [(b, k, c) for k, c in coeffs.items()]
    return ComplexRational(tuple(poly), tuple(poles)), plan, bound


def _symmetric_K(K: np.ndarray) -> np.ndarray:
    return np.asarray(K, dtype=bool) | np.asarray(K, dtype=bool)[::-1]


def sup_error(f: ComplexRational, g: ComplexRational, pts: np.ndarray) -> float:
    return float(np.max(np.abs(f(pts) - g(pts)))) if len(pts) else 0.0


def pole_push(f: ComplexRational, D: SymmetricDomainGrid, D1: SymmetricDomainGrid,
              K: np.ndarray, eps: float, theta: float = THETA, *, step: float | None = None,
              cap: int = 1000) -> tuple[ComplexRational, ApproxResult]:
    """Approximate ``f`` on the cell set ``K`` by a rational function with poles outside ``D1``.

    ``K`` is replaced by its union with its mirror image.  The result is
    symmetric whenever ``f`` is; otherwise ``f = g + i h`` is split into
    symmetric parts that are pushed separately.  ``success`` compares the
    error measured at the cell centres of ``K`` with ``eps``; in floating
    point a long push can lose the certified accuracy to cancellation, and
    that shows up as a failure rather than being hidden.
    """
    _require_nested(D, D1)
    K = _symmetric_K(K)
    if np.any(K & ~D.inside):
        raise ValueError("compact set K must consist of cells of D")
    if not K.any():
        raise ValueError("compact set K is empty")
    pts = D.centers()[K]
    if f.symmetric:
        g, plan, bound = _push_symmetric(f, D, D1, K, eps, theta, step, cap)
        g = symmetrize(g)[0]
    else:
        a, b = symmetrize(f)
        ga, plan, bound_a = _push_symmetric(a, D, D1, K, eps / 2, theta, step, cap)
        gb, plan_b, bound_b = _push_symmetric(b, D, D1, K, eps / 2, theta, step, cap)
        plan.routes += plan_b.routes
        bound = bound_a + bound_b
        g = symmetrize(ga)[0] + symmetrize(gb)[0].scale(1j)
    err = sup_error(f, g, pts)
    res = ApproxResult(eps, err, None, g.degree(), err <= eps, plan, bound)
    return g, res


# -- quaternionic side -------------------------------------------------------

def _stem_values(F: RationalStem, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``(n, 4)`` of the two stem components at points ``z``."""
    f1 = np.zeros((len(z), 4))
    f2 = np.zeros((len(z), 4))
    for r, a in F.terms:
        v = r(z)
        av = np.array(a.as_tuple())
        f1 += np.outer(v.real, av)
        f2 += np.outer(v.imag, av)
    f2[np.abs(z.imag) == 0] = 0.0
    return f1, f2


def _unit_times(u: tuple[float, float, float], Q: np.ndarray) -> np.ndarray:
    ux, uy, uz = u
    w, x, y, z = Q.T
    return np.column_stack([
        -ux * x - uy * y - uz * z,
        ux * w + uy * z - uz * y,
        uy * w + uz * x - ux * z,
        uz * w + ux * y - uy * x,
    ])


def quaternionic_sup(F: RationalStem, G: RationalStem, pts: np.ndarray, n_units: int = 64) -> tuple[float, float]:
    """Sup of the stem-norm difference on ``pts`` and of ``|f - g|`` over the sampled axial hull."""
    d1f, d2f = _stem_values(F, pts)
    d1g, d2g = _stem_values(G, pts)
    d1, d2 = d1f - d1g, d2f - d2g
    stem = float(np.max(np.sqrt(np.sum(d1 ** 2, axis=1) + np.sum(d2 ** 2, axis=1)))) if len(pts) else 0.0
    quat = 0.0
    for u in fibonacci_units(n_units):
        val = d1 + _unit_times((u.ux, u.uy, u.uz), d2)
        quat = max(quat, float(np.max(np.linalg.norm(val, axis=1))) if len(pts) else 0.0)
    return stem, quat


def quaternionic_approx(F: RationalStem, D: SymmetricDomainGrid, D1: SymmetricDomainGrid,
                        K: np.ndarray, eps: float, theta: float = THETA, *,
                        n_units: int = 64, cap: int = 1000) -> tuple[RationalStem, ApproxResult]:
    """Push every scalar factor of ``F``; the slice function inherits the bound times sqrt 2.

    ``achieved`` is the sup over ``K`` of the stem norm of ``F - G``;
    ``achieved_quaternionic`` is the sup of ``|f - g|`` over the points
    ``x + yI`` with ``x + yi`` in ``K`` and ``I`` in a Fibonacci sample.
    """
    K = _symmetric_K(K)
    pts = D.centers()[K]
    terms = []
    routes = []
    bound = 0.0
    T = max(len(F.terms), 1)
    for r, a in F.terms:
        na = a.norm()
        if na == 0:
            continue
        g, res = pole_push(r, D, D1, K, eps / (T * na), theta, cap=cap)
        routes += res.plan.routes
        bound += na * (res.bound or 0.0)
        terms.append((g, a))
    G = RationalStem(tuple(terms))
    stem, quat = quaternionic_sup(F, G, pts, n_units)
    deg = sum(g.degree() for g, _ in terms)
    ok = stem <= eps and quat <= math.sqrt(2) * eps
    return G, ApproxResult(eps, stem, quat, deg, ok, PolePushPlan(routes, theta), bound)


# -- obstruction -------------------------------------------------------------

@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float
    nodes: int = 4096

    def quadrature(self) -> tuple[np.ndarray, np.ndarray, float]:
        t = 2 * np.pi * np.arange(self.nodes) / self.nodes
        e = np.exp(1j * t)
        z = self.center + self.radius * e
        dz = 1j * self.radius * e * (2 * np.pi / self.nodes)
        return z, dz, 2 * np.pi * self.radius


def _cycle_quadrature(gamma: GridCycle, per_edge: int = 16) -> tuple[np.ndarray, np.ndarray, float]:
    x, w = np.polynomial.legendre.leggauss(per_edge)
    zs, dzs = [], []
    length = 0.0
    for poly, wt in zip(gamma.polygons, gamma.weights):
        a = np.asarray(poly)
        b = np.roll(a, -1)
        mid = (a + b) / 2
        half = (b - a) / 2
        zs.append((mid[:, None] + half[:, None] * x[None, :]).ravel())
        dzs.append((wt * half[:, None] * w[None, :]).ravel())
        length += abs(wt) * float(np.sum(np.abs(b - a)))
    return np.concatenate(zs), np.concatenate(dzs), length


def contour_quadrature(contour, min_nodes: int = 4096) -> tuple[np.ndarray, np.ndarray, float]:
    if isinstance(contour, Circle):
        if contour.nodes < min_nodes:
            contour = Circle(contour.center, contour.radius, min_nodes)
        return contour.quadrature()
    n_edges = sum(len(p) for p in contour.polygons)
    per_edge = max(16, math.ceil(min_nodes / max(n_edges, 1)))
    return _cycle_quadrature(contour, per_edge)


def obstruction_lower_bound(f: ComplexRational, contour, g: ComplexRational | None = None,
                            min_nodes: int = 4096) -> float:
    """``|integral of (f - g) dz| / length``: a lower bound for ``sup |f - g|`` on the contour."""
    z, dz, length = contour_quadrature(contour, min_nodes)
    vals = f(z) if g is None else f(z) - g(z)
    if length == 0:
        return 0.0
    return float(abs(np.sum(vals * dz)) / length)


def best_polynomial(f: ComplexRational, pts: np.ndarray, degree: int) -> ComplexRational:
    """Least-squares polynomial fit of ``f`` on ``pts`` in scaled monomials."""
    pts = np.asarray(pts, dtype=complex).ravel()
    s = float(np.max(np.abs(pts))) or 1.0
    V = np.vander(pts / s, degree + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, f(pts), rcond=None)
    return ComplexRational(tuple(coef / s ** np.arange(degree + 1)))


def error_curve(f: ComplexRational, D, D1, K, eps_list) -> list[tuple[float, int, float]]:
    rows = []
    for eps in eps_list:
        _, res = pole_push(f, D, D1, K, eps)
        rows.append((eps, res.total_degree, res.achieved))
    return rows
