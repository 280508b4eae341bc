"""Homomorphisms between finitely generated free abelian groups with
labelled bases, and cokernel presentations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import snf


@dataclass(frozen=True, eq=False)
class AbelianMap:
    """``matrix`` has one row per codomain label and one column per domain label."""

    matrix: np.ndarray
    domain: tuple
    codomain: tuple

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.int64).reshape(len(self.codomain), len(self.domain))
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "codomain", tuple(self.codomain))

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=np.int64)

    def __matmul__(self, other: AbelianMap) -> AbelianMap:
        if other.codomain != self.domain:
            raise ValueError("bases do not match for composition")
        return AbelianMap(self.matrix @ other.matrix, other.domain, self.codomain)

    def is_injective(self) -> bool:
        return snf.is_injective(self.matrix)

    def kernel_basis(self) -> list[np.ndarray]:
        if not self.domain:
            return []
        return snf.kernel_basis(self.matrix)

    def rank(self) -> int:
        return snf.rank(self.matrix)

    def to_json(self) -> dict:
        return {"domain": [str(d) for d in self.domain],
                "codomain": [str(c) for c in self.codomain],
                "matrix": self.matrix.tolist()}


@dataclass(frozen=True, eq=False)
class PresentedGroup:
    """``Z^generators / image(relations)``."""

    generators: tuple
    relations: np.ndarray
    diagonal: tuple[int, ...]

    @classmethod
    def from_relations(cls, generators, relations) -> PresentedGroup:
        rel = np.asarray(relations, dtype=np.int64)
        if rel.ndim != 2 or rel.shape[0] != len(generators):
            rel = rel.reshape(len(generators), -1) if rel.size else np.zeros((len(generators), 0), dtype=np.int64)
        diag = snf.smith_normal_form(rel).diagonal if rel.size else ()
        return cls(tuple(generators), rel, diag)

    @property
    def free_rank(self) -> int:
        return len(self.generators) - len(self.diagonal)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.diagonal if d != 1)

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion

    def snf_diagonal(self) -> tuple[int, ...]:
        """SNF diagonal padded with zeros to the number of generators."""
        return tuple(self.diagonal) + (0,) * self.free_rank

    def to_json(self) -> dict:
        return {"generators": [str(g) for g in self.generators],
                "relations": self.relations.tolist(),
                "snf_diagonal": list(self.snf_diagonal()),
                "rank": self.free_rank,
                "torsion": list(self.torsion)}
