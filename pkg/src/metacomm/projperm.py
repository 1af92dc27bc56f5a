"""Projective space over F_q, the action v -> Q^{-1} v, and permutations."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .fq import Field
from .fqmat import MatFq


@dataclass(frozen=True, order=True)
class ProjPoint:
    field: Field
    coords: tuple[int, ...]

    def tolist(self) -> list:
        return [self.field.decode(c) for c in self.coords]

    def __str__(self):
        return "(" + ":".join(str(c).replace(" ", "") for c in self.tolist()) + ")"


def _canonical_coords(F: Field, v: Sequence[int]) -> tuple[int, ...]:
    lead = next((c for c in v if c), None)
    if lead is None:
        raise DomainError("the zero vector is not a projective point")
    if lead == 1:
        return tuple(v)
    inv = F.inv(lead)
    return tuple(F.mul(inv, c) for c in v)


def canonicalize_point(F: Field, v: Sequence[int]) -> ProjPoint:
    """Scale v so that its first nonzero coordinate is 1."""
    return ProjPoint(F, _canonical_coords(F, v))


@functools.lru_cache(maxsize=None)
def enumerate_projective(F: Field, m: int) -> tuple[ProjPoint, ...]:
    """All (q^m - 1)/(q - 1) points of P^{m-1}(F_q), sorted by coordinates."""
    if m < 1:
        raise DomainError("m must be positive")
    pts = []
    for lead in range(m):
        for tail in itertools.product(range(F.q), repeat=m - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    pts.sort()
    return tuple(ProjPoint(F, c) for c in pts)


@functools.lru_cache(maxsize=None)
def _point_index(F: Field, m: int) -> dict[tuple[int, ...], int]:
    return {pt.coords: i for i, pt in enumerate(enumerate_projective(F, m))}


def point_index(pt: ProjPoint) -> int:
    return _point_index(pt.field, len(pt.coords))[pt.coords]


@dataclass(frozen=True)
class Perm:
    """A bijection of ``range(len(images))``; ``domain[i]`` names point i."""

    domain: tuple
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise DomainError("images do not form a bijection")

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Perm") -> "Perm":
        """self after other: i -> self(other(i))."""
        return Perm(self.domain, tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(self.domain, tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[list[int]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i]
            out.append(cyc)
        return out


@dataclass(frozen=True)
class CycleType:
    cycles: dict[int, int]
    fixed: int
    sign: int

    @property
    def size(self) -> int:
        return sum(k * v for k, v in self.cycles.items())

    def to_json(self) -> dict:
        return {
            "fixed": self.fixed,
            "cycles": {str(k): self.cycles[k] for k in sorted(self.cycles)},
            "sign": self.sign,
        }


def sign_of_cycles(cycles: dict[int, int]) -> int:
    odd = sum((k - 1) * v for k, v in cycles.items())
    return -1 if odd % 2 else 1


def cycle_type(perm: Perm) -> CycleType:
    counts: dict[int, int] = {}
    for cyc in perm.cycles():
        counts[len(cyc)] = counts.get(len(cyc), 0) + 1
    counts = dict(sorted(counts.items()))
    return CycleType(counts, counts.get(1, 0), sign_of_cycles(counts))


def tau_apply(Q: MatFq, v: ProjPoint) -> ProjPoint:
    """Q^{-1} v, canonicalized."""
    if len(v.coords) != Q.m:
        raise DomainError("dimension mismatch")
    return canonicalize_point(Q.field, Q.inverse().apply(v.coords))


def tau_permutation(Q: MatFq) -> Perm:
    """The permutation v -> Q^{-1} v of P^{m-1}(F_q), in enumeration order."""
    F, m = Q.field, Q.m
    Qi = Q.inverse()
    pts = enumerate_projective(F, m)
    index = _point_index(F, m)
    images = tuple(index[_canonical_coords(F, Qi.apply(pt.coords))] for pt in pts)
    return Perm(pts, images)


def projective_size(q: int, m: int) -> int:
    return (q**m - 1) // (q - 1)
