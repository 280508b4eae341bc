"""Property suites over a seeded corpus.

Each suite returns a :class:`SuiteResult` with a violation count and a few
sample messages.  ``inject_bug`` zeroes one entry of the restriction
matrix checked by the equivalence suite, so that the harness can show it
notices a broken computation.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import snf
from .corpus import CorpusConfig, CorpusPair, XorShift64Star, generate_corpus
from .errors import EquivalenceViolation, NoCollar
from .homology import analyze, betti_report, h3_presentation, induced_h1_map, split_sequence_check
from .planar import H1Class, class_from_cycle, cycle_from_class, restriction_map, winding_numbers
from .quaternion import ImaginaryUnit, Quaternion
from .runge import criterion_v, runge_decide
from .stem import ComplexRational, RationalStem, norm_bounds_check

SUITES = ("equivalence", "exact-sequence", "torsion", "roundtrip", "norm-lemma")


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: int = 0
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def fail(self, msg: str):
        self.violations += 1
        if len(self.messages) < 10:
            self.messages.append(msg)

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "violations": self.violations,
                "passed": self.passed, "messages": list(self.messages)}


RECORD_FIELDS = ("index", "key", "resolution", "iii", "iv", "v", "vi", "runge",
                 "betti_D", "betti_D1", "h1_D", "h1_D1", "seq_ok", "torsion_free")


def _corrupt(mat: np.ndarray) -> np.ndarray:
    """Flip the first entry of the first column holding a single 1 (or entry 0,0)."""
    mat = mat.copy()
    if not mat.size:
        return mat
    for j in range(mat.shape[1]):
        nz = np.flatnonzero(mat[:, j])
        if len(nz) == 1:
            mat[nz[0], j] = 0
            return mat
    mat[0, 0] = 1 - mat[0, 0]
    return mat


def _fmt(t) -> str:
    return "/".join(str(v) for v in t)


def check_pair(pair: CorpusPair, inject_bug: bool = False) -> tuple[dict, list[tuple[str, str]]]:
    """All corpus-level checks for one pair; returns the record and (suite, message) failures."""
    D, D1 = pair.grids()
    fails: list[tuple[str, str]] = []
    tag = f"pair {pair.index} ({pair.resolution})"
    try:
        rep = runge_decide(D, D1)
    except EquivalenceViolation as exc:
        fails.append(("equivalence", f"{tag}: verdicts disagree {exc.report['verdicts']}"))
        rep = runge_decide(D, D1, strict=False)
    # restriction injective iff every bounded component meets the complement of D1
    M = restriction_map(analyze(D).atlas, analyze(D1).atlas).matrix
    if inject_bug:
        M = _corrupt(M)
    inj = snf.is_injective(M)
    v5, _ = criterion_v(D, D1)
    if inj != v5:
        fails.append(("equivalence", f"{tag}: restriction injective={inj} but component test={v5}"))
    # snake-lemma consequence: injective on H1(D) forces injective on H1(D+)
    if inj and not induced_h1_map(D, D1).injective:
        fails.append(("equivalence", f"{tag}: H1 injective but upper-part map is not"))
    seq_ok = True
    torsion_free = True
    bettis = []
    for name, G in (("D", D), ("D1", D1)):
        sq = split_sequence_check(G)
        br = betti_report(G)
        bettis.append(br)
        pres = h3_presentation(G)
        if not sq.ok:
            seq_ok = False
            fails.append(("exact-sequence", f"{tag} {name}: {sq.to_json()}"))
        if sq.b1_D != 2 * sq.b1_plus + sq.rank_hhat0:
            seq_ok = False
            fails.append(("exact-sequence", f"{tag} {name}: b1(D)={sq.b1_D} != 2*{sq.b1_plus}+{sq.rank_hhat0}"))
        rank_coker = len(pres.generators) - snf.rank(pres.relations) if pres.relations.size else len(pres.generators)
        if rank_coker != br.b1_plus + br.rank_hhat0:
            seq_ok = False
            fails.append(("exact-sequence", f"{tag} {name}: rank coker={rank_coker} != {br.b1_plus}+{br.rank_hhat0}"))
        if any(d not in (0, 1) for d in pres.snf_diagonal()):
            torsion_free = False
            fails.append(("torsion", f"{tag} {name}: SNF diagonal {pres.snf_diagonal()}"))
    record = {"index": pair.index, "key": pair.key(), "resolution": pair.resolution,
              **{k: int(v) for k, v in rep.verdicts.items()}, "runge": int(rep.runge),
              "betti_D": _fmt(bettis[0].betti.as_tuple()), "betti_D1": _fmt(bettis[1].betti.as_tuple()),
              "h1_D": bettis[0].b1_D, "h1_D1": bettis[1].b1_D,
              "seq_ok": int(seq_ok), "torsion_free": int(torsion_free)}
    return record, fails


def _check_pair_job(args):
    pair, inject = args
    return check_pair(pair, inject)


def _all_classes(n: int, lo: int = -3, hi: int = 3, chunk: int = 1 << 16):
    """Every integer vector in ``[lo, hi]^n``, in chunks of rows."""
    total = (hi - lo + 1) ** n
    base = hi - lo + 1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        out = np.empty((len(idx), n), dtype=np.int64)
        for k in range(n):
            out[:, k] = idx % base + lo
            idx = idx // base
        yield out


def roundtrip_domain(G, rng: XorShift64Star, n_classes: int = 4, max_probes: int = 512,
                     exhaustive: bool = True) -> list[str]:
    """Class -> cycle -> class and cycle -> class -> cycle checks on one grid.

    Random classes go through the real functions.  The exhaustive pass
    covers every class with entries in -3..3: a cycle built from a class is
    the per-component contours weighted by the class values (checked
    structurally on the random classes), so its winding numbers are the
    matrix of unit-class windings applied to the class vector.  The cycle
    side compares winding numbers at every component representative and at
    up to ``max_probes`` further complement cells.
    """
    atlas = analyze(G).atlas
    comps = atlas.bounded_ids
    problems = []
    classes = [H1Class(())] + [H1Class(((c, 1),)) for c in comps]
    for _ in range(n_classes):
        classes.append(H1Class(tuple((c, rng.randint(-3, 3)) for c in comps)))
    cells = np.argwhere(~G.inside)
    picks = [rng.randint(0, len(cells) - 1) for _ in range(min(max_probes, len(cells)))]
    probes = np.array([atlas.rep_point(c) for c in range(atlas.n_components)]
                      + [G.center(int(cells[k][0]), int(cells[k][1])) for k in picks], dtype=complex)
    units = {}
    for f in classes:
        try:
            gamma = cycle_from_class(G, atlas, f)
        except NoCollar as exc:
            problems.append(f"no collar: {exc}")
            continue
        if len(f.values) == 1 and f.values[0][1] == 1:
            units[f.values[0][0]] = gamma
        back = class_from_cycle(G, atlas, gamma)
        if back != f:
            problems.append(f"class {f.as_dict()} came back as {back.as_dict()}")
            continue
        again = cycle_from_class(G, atlas, back)
        if len(probes) and not np.array_equal(winding_numbers(gamma, probes), winding_numbers(again, probes)):
            problems.append(f"cycle for {f.as_dict()} is not reproduced up to homology")
    if problems or not exhaustive or not comps:
        return problems
    # structural linearity: the cycle of a class is the unit cycles with scaled weights
    for f in classes[1 + len(comps):]:
        gamma = cycle_from_class(G, atlas, f)
        polys = [p for c, v in f.values for p in units[c].polygons]
        weights = [v for c, v in f.values for _ in units[c].polygons]
        if len(polys) != len(gamma.polygons) or list(gamma.weights) != weights or \
                not all(np.array_equal(a, b) for a, b in zip(polys, gamma.polygons)):
            problems.append(f"cycle for {f.as_dict()} is not the weighted sum of unit cycles")
            return problems
    W = np.stack([winding_numbers(units[c], probes) for c in comps], axis=1)
    nb = len(comps)
    bounded_rows = np.array(comps)
    for F in _all_classes(nb):
        wn = F @ W.T
        if not np.array_equal(wn[:, bounded_rows], F):
            bad = F[np.flatnonzero(np.any(wn[:, bounded_rows] != F, axis=1))[0]]
            problems.append(f"class {dict(zip(comps, bad.tolist()))} does not survive the roundtrip")
            break
        others = np.setdiff1d(np.arange(atlas.n_components), bounded_rows)
        if others.size and np.any(wn[:, others]):
            problems.append("a class cycle winds around an unbounded component")
            break
    return problems


def random_stem(rng: XorShift64Star, n_terms: int = 20) -> RationalStem:
    terms = []
    for _ in range(n_terms):
        kind = rng.randint(0, 2)
        if kind == 0:
            deg = rng.randint(0, 4)
            coeffs = [complex(rng.uniform(-1, 1), 0) for _ in range(deg + 1)]
            r = ComplexRational(tuple(coeffs), (), True)
        elif kind == 1:
            p = complex(rng.uniform(-3, 3), 0)
            r = ComplexRational((), ((p, rng.randint(1, 2), rng.uniform(-1, 1)),), True)
        else:
            p = complex(rng.uniform(-3, 3), rng.uniform(0.2, 3))
            c = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            m = rng.randint(1, 2)
            r = ComplexRational((), ((p, m, c), (p.conjugate(), m, c.conjugate())), True)
        a = Quaternion(*(rng.uniform(-1, 1) for _ in range(4)))
        terms.append((r, a))
    return RationalStem(tuple(terms))


def random_unit(rng: XorShift64Star) -> ImaginaryUnit:
    while True:
        v = [rng.uniform(-1, 1) for _ in range(3)]
        n = math.sqrt(sum(t * t for t in v))
        if 1e-3 < n <= 1:
            return ImaginaryUnit.normalized(*v)


def norm_lemma_samples(rng: XorShift64Star, F: RationalStem, count: int, min_pole_dist: float = 0.2):
    poles = F.pole_locations
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if any(abs(z - p) < min_pole_dist or abs(z.conjugate() - p) < min_pole_dist for p in poles):
            continue
        out.append((z.real, z.imag, random_unit(rng)))
    return out


def run_norm_lemma(seed: int, stems: int = 50, per_stem: int = 200, slack: float = 1e-9) -> SuiteResult:
    res = SuiteResult("norm-lemma")
    rng = XorShift64Star(seed ^ 0x5EED)
    for s in range(stems):
        F = random_stem(rng)
        rep = norm_bounds_check(F, norm_lemma_samples(rng, F, per_stem), slack)
        res.checked += rep.samples
        if not rep.ok:
            res.fail(f"stem {s}: lower slack {rep.worst_lower_slack:.3g}, upper slack {rep.worst_upper_slack:.3g}")
    return res


def run_suites(config: CorpusConfig, *, inject_bug: bool = False, jobs: int = 1,
               roundtrip_domains: int = 50, norm_samples: int = 10_000) -> tuple[dict[str, SuiteResult], list[dict]]:
    pairs = generate_corpus(config)
    results = {name: SuiteResult(name) for name in SUITES}
    records = []
    work = [(p, inject_bug) for p in pairs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outs = list(ex.map(_check_pair_job, work, chunksize=8))
    else:
        outs = [_check_pair_job(w) for w in work]
    for rec, fails in outs:
        records.append(rec)
        for name in ("equivalence", "exact-sequence", "torsion"):
            results[name].checked += 1
        for name, msg in fails:
            results[name].fail(msg)
    rng = XorShift64Star(config.seed ^ 0xC1C1E)
    for pair in pairs[:roundtrip_domains]:
        G = pair.grids()[0]
        results["roundtrip"].checked += 1
        for msg in roundtrip_domain(G, rng):
            results["roundtrip"].fail(f"pair {pair.index}: {msg}")
    per_stem = 200
    results["norm-lemma"] = run_norm_lemma(config.seed, max(norm_samples // per_stem, 0), per_stem)
    return results, records


def records_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=RECORD_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r)
    return buf.getvalue()
