"""Smith normal form over the integers, with unimodular transforms.

``smith_normal_form(A)`` returns ``S, P, Q`` with ``S = P @ A @ Q``, ``S``
diagonal with ``d_1 | d_2 | ...`` and ``P``, ``Q`` unimodular.  Everything
is done in Python integers, so there is no overflow; the matrices met in
practice are small 0/+-1 incidence matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _as_rows(A) -> tuple[list[list[int]], int, int]:
    arr = np.asarray(A)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D integer matrix, got shape {arr.shape}")
    m, n = arr.shape
    rows = [[int(v) for v in arr[i]] for i in range(m)]
    return rows, m, n


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def _to_array(rows: list[list[int]], m: int, n: int) -> np.ndarray:
    if m == 0 or n == 0:
        return np.zeros((m, n), dtype=np.int64)
    try:
        return np.array(rows, dtype=np.int64)
    except OverflowError:
        # entries past 64 bits stay exact as Python ints
        return np.array(rows, dtype=object)


@dataclass(frozen=True, eq=False)
class SmithForm:
    S: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    diagonal: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 1)


def smith_normal_form(A) -> SmithForm:
    S, m, n = _as_rows(A)
    P = _identity(m)
    Q = _identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        if k:
            S[dst] = [a + k * b for a, b in zip(S[dst], S[src])]
            P[dst] = [a + k * b for a, b in zip(P[dst], P[src])]

    def add_col(src, dst, k):
        if k:
            for row in S:
                row[dst] += k * row[src]
            for row in Q:
                row[dst] += k * row[src]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero magnitude in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = S[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(t, i, -(S[i][t] // S[t][t]))
                    if S[i][t]:
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(t, j, -(S[t][j] // S[t][t]))
                    if S[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if S[i][t] and (best is None or abs(S[i][t]) < best[0]):
                        best = (abs(S[i][t]), i, "r")
                for j in range(t, n):
                    if S[t][j] and (best is None or abs(S[t][j]) < best[0]):
                        best = (abs(S[t][j]), j, "c")
                _, k, kind = best
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            # divisibility of the trailing block by the pivot
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if S[i][j] % S[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            P[t] = [-a for a in P[t]]
        diag.append(S[t][t])
        t += 1
    return SmithForm(_to_array(S, m, n), _to_array(P, m, m), _to_array(Q, n, n), tuple(diag))


def kernel_basis(A) -> list[np.ndarray]:
    """A Z-basis of ``{x in Z^n : A x = 0}``."""
    A = np.asarray(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return [np.eye(n, dtype=np.int64)[:, j] for j in range(n)]
    snf = smith_normal_form(A)
    return [snf.Q[:, j].copy() for j in range(snf.rank, n)]


def solve_integer(A, b) -> np.ndarray | None:
    """An integer ``x`` with ``A x = b``, or ``None`` when none exists."""
    A = np.asarray(A)
    m, n = A.shape
    b = np.asarray(b, dtype=np.int64).reshape(m)
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    snf = smith_normal_form(A)
    y = [int(v) for v in snf.P.astype(object).dot(b.astype(object))]
    xp = [0] * n
    for i, d in enumerate(snf.diagonal):
        if y[i] % d:
            return None
        xp[i] = y[i] // d
    if any(y[i] for i in range(snf.rank, m)):
        return None
    x = snf.Q.astype(object).dot(np.array(xp, dtype=object))
    return np.array([int(v) for v in x], dtype=np.int64)


def in_image(A, b) -> bool:
    return solve_integer(A, b) is not None


def is_injective(A) -> bool:
    A = np.asarray(A)
    n = A.shape[1]
    if n == 0:
        return True
    if A.shape[0] == 0:
        return False
    return smith_normal_form(A).rank == n


def rank(A) -> int:
    A = np.asarray(A)
    if 0 in A.shape:
        return 0
    return smith_normal_form(A).rank
