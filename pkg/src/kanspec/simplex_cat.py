"""The simplex category: monotone maps, generator normal forms, decalage.

Maps are stored as value tables.  A normal form is the factorization

    f = d^{i_1} d^{i_2} ... d^{i_r} s^{j_1} ... s^{j_t}

with ``i_1 > ... > i_r`` and ``j_1 < ... < j_t``, read as composition of
functions (the rightmost generator acts first).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb
from typing import Iterator

__all__ = [
    "SimplexMap",
    "NormalForm",
    "identity",
    "face",
    "degeneracy",
    "compose",
    "normal_form",
    "from_normal_form",
    "kan_K",
    "decalage_alpha",
    "decalage_beta",
    "hom",
    "hom_count",
]


@dataclass(frozen=True)
class SimplexMap:
    """A weakly monotone map ``[src] -> [tgt]`` given by its values."""

    src: int
    tgt: int
    values: tuple[int, ...]

    def __post_init__(self):
        values = self.values if type(self.values) is tuple else tuple(self.values)
        if not all(type(v) is int for v in values):
            values = tuple(int(v) for v in values)
        object.__setattr__(self, "values", values)
        if self.src < 0 or self.tgt < 0:
            raise ValueError("simplex objects are non-negative")
        if len(values) != self.src + 1:
            raise ValueError(f"expected {self.src + 1} values, got {len(values)}")
        if values[0] < 0 or values[-1] > self.tgt:
            raise ValueError(f"values {values} leave [{self.tgt}]")
        if list(values) != sorted(values):
            raise ValueError(f"values {values} are not monotone")

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __repr__(self):
        return f"SimplexMap([{self.src}]->[{self.tgt}], {self.values})"

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.tgt + 1))

    def to_json(self) -> dict:
        return {"src": self.src, "tgt": self.tgt, "values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "SimplexMap":
        return cls(int(data["src"]), int(data["tgt"]), tuple(data["values"]))


@dataclass(frozen=True)
class NormalForm:
    """Face list (strictly decreasing) and degeneracy list (strictly increasing)."""

    src: int
    faces: tuple[int, ...] = ()
    degens: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(self.faces))
        object.__setattr__(self, "degens", tuple(self.degens))
        if any(a <= b for a, b in zip(self.faces, self.faces[1:])):
            raise ValueError(f"faces {self.faces} not strictly decreasing")
        if any(a >= b for a, b in zip(self.degens, self.degens[1:])):
            raise ValueError(f"degens {self.degens} not strictly increasing")
        if self.src < 0 or self.tgt < 0:
            raise ValueError("normal form leaves the simplex category")
        if self.faces and self.faces[0] > self.tgt:
            raise ValueError(f"face index {self.faces[0]} exceeds target {self.tgt}")
        if self.degens and self.degens[-1] > self.src - 1:
            raise ValueError(f"degeneracy index {self.degens[-1]} exceeds {self.src - 1}")

    @property
    def tgt(self) -> int:
        return self.src - len(self.degens) + len(self.faces)


def identity(n: int) -> SimplexMap:
    return SimplexMap(n, n, tuple(range(n + 1)))


def face(n: int, i: int) -> SimplexMap:
    """``d^i : [n-1] -> [n]``, the injection skipping ``i``."""
    if not 0 <= i <= n or n < 1:
        raise ValueError(f"no face d^{i} into [{n}]")
    return SimplexMap(n - 1, n, tuple(k if k < i else k + 1 for k in range(n)))


def degeneracy(n: int, j: int) -> SimplexMap:
    """``s^j : [n+1] -> [n]``, the surjection hitting ``j`` twice."""
    if not 0 <= j <= n:
        raise ValueError(f"no degeneracy s^{j} onto [{n}]")
    return SimplexMap(n + 1, n, tuple(k if k <= j else k - 1 for k in range(n + 2)))


def compose(f: SimplexMap, g: SimplexMap) -> SimplexMap:
    """``f`` followed by ``g``."""
    if f.tgt != g.src:
        raise ValueError(f"cannot compose {f} then {g}")
    return SimplexMap(f.src, g.tgt, tuple(g.values[v] for v in f.values))


def normal_form(f: SimplexMap) -> NormalForm:
    v = f.values
    degens = tuple(i for i in range(f.src) if v[i] == v[i + 1])
    image = set(v)
    faces = tuple(k for k in range(f.tgt, -1, -1) if k not in image)
    return NormalForm(f.src, faces, degens)


def from_normal_form(nf: NormalForm) -> SimplexMap:
    # s^{j_t} acts first, then ... s^{j_1}, then d^{i_r}, ..., d^{i_1};
    # generators act on a raw value list, validated once at the end
    values = list(range(nf.src + 1))
    for j in reversed(nf.degens):
        values = [v if v <= j else v - 1 for v in values]
    for i in reversed(nf.faces):
        values = [v if v < i else v + 1 for v in values]
    return SimplexMap(nf.src, nf.tgt, tuple(values))


def kan_K(x):
    """Decalage ``K``: ``[n] -> [n+1]``; maps get the new top sent to the new top."""
    if isinstance(x, SimplexMap):
        return SimplexMap(x.src + 1, x.tgt + 1, x.values + (x.tgt + 1,))
    if isinstance(x, int):
        if x < 0:
            raise ValueError("simplex objects are non-negative")
        return x + 1
    raise TypeError(f"kan_K expects an object or a SimplexMap, got {type(x).__name__}")


def decalage_alpha(n: int) -> SimplexMap:
    """Component ``[n] -> K[n]`` omitting the top vertex."""
    return face(n + 1, n + 1)


def decalage_beta(n: int) -> SimplexMap:
    """Component ``[0] -> K[n]`` picking the top vertex."""
    return SimplexMap(0, n + 1, (n + 1,))


def hom(n: int, m: int) -> Iterator[SimplexMap]:
    """All monotone maps ``[n] -> [m]`` in lexicographic order of values."""
    for values in combinations_with_replacement(range(m + 1), n + 1):
        yield SimplexMap(n, m, values)


def hom_count(n: int, m: int) -> int:
    return comb(n + m + 1, n + 1)
