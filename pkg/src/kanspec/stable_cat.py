"""The stable simplex category, its collage presentation, and the comparison functor.

Objects of the stable category are integers.  A morphism is stored only by its
normal form ``d^{i_1}...d^{i_r} s^{j_1}...s^{j_t}`` (faces strictly decreasing,
degeneracies strictly increasing, indices unbounded above).  Composition
rewrites the concatenated generator word with the simplicial identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .simplex_cat import NormalForm, SimplexMap, compose, from_normal_form, hom, kan_K, normal_form

__all__ = [
    "StableMorphism",
    "st_identity",
    "st_face",
    "st_degeneracy",
    "st_compose",
    "compose_words",
    "rewrite",
    "st_stabilize",
    "min_stabilization",
    "st_hom",
    "CollageObject",
    "CollageMorphism",
    "collage_identity",
    "collage_compose",
    "collage_hom",
    "collage_shift",
    "rho",
]

# A generator is ("d", i) or ("s", j); a word lists generators in composition
# order, leftmost acting last.
Word = tuple[tuple[str, int], ...]


def _step(word: list[tuple[str, int]]) -> bool:
    """Apply one simplicial-identity move at the leftmost violation."""
    for k in range(len(word) - 1):
        (x, a), (y, b) = word[k], word[k + 1]
        if x == "d" and y == "d" and a <= b:
            # d^a d^b = d^{b+1} d^a
            word[k], word[k + 1] = ("d", b + 1), ("d", a)
            return True
        if x == "s" and y == "s" and a >= b:
            # s^a s^b = s^b s^{a+1}
            word[k], word[k + 1] = ("s", b), ("s", a + 1)
            return True
        if x == "s" and y == "d":
            if b < a:
                word[k], word[k + 1] = ("d", b), ("s", a - 1)
            elif b in (a, a + 1):
                del word[k : k + 2]
            else:
                word[k], word[k + 1] = ("d", b - 1), ("s", a)
            return True
    return False


def rewrite(word: Word) -> tuple[Word, int]:
    """Rewrite a generator word to normal form; returns the word and the step count."""
    w = list(word)
    steps = 0
    while _step(w):
        steps += 1
    return tuple(w), steps


def _word(faces, degens) -> Word:
    return tuple(("d", i) for i in faces) + tuple(("s", j) for j in degens)


@lru_cache(maxsize=1 << 18)
def compose_words(
    faces_f: tuple[int, ...], degens_f: tuple[int, ...], faces_g: tuple[int, ...], degens_g: tuple[int, ...]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Normal form of ``g . f`` from the normal forms of ``f`` and ``g``."""
    word, _ = rewrite(_word(faces_g, degens_g) + _word(faces_f, degens_f))
    faces = tuple(i for x, i in word if x == "d")
    degens = tuple(j for x, j in word if x == "s")
    return faces, degens


@dataclass(frozen=True)
class StableMorphism:
    src: int
    tgt: int
    faces: tuple[int, ...] = ()
    degens: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(int(i) for i in self.faces))
        object.__setattr__(self, "degens", tuple(int(j) for j in self.degens))
        if any(a <= b for a, b in zip(self.faces, self.faces[1:])):
            raise ValueError(f"faces {self.faces} not strictly decreasing")
        if any(a >= b for a, b in zip(self.degens, self.degens[1:])):
            raise ValueError(f"degens {self.degens} not strictly increasing")
        if any(i < 0 for i in self.faces + self.degens):
            raise ValueError("generator indices are natural numbers")
        if self.tgt != self.src - len(self.degens) + len(self.faces):
            raise ValueError(f"[{self.src}] -> [{self.tgt}] contradicts the generator counts")

    def __repr__(self):
        return f"StableMorphism([{self.src}]->[{self.tgt}], d={list(self.faces)}, s={list(self.degens)})"

    @property
    def is_identity(self) -> bool:
        return not self.faces and not self.degens

    def to_json(self) -> dict:
        return {"src": self.src, "tgt": self.tgt, "faces": list(self.faces), "degens": list(self.degens)}

    @classmethod
    def from_json(cls, data: dict) -> "StableMorphism":
        return cls(int(data["src"]), int(data["tgt"]), tuple(data["faces"]), tuple(data["degens"]))


def st_identity(z: int) -> StableMorphism:
    return StableMorphism(z, z)


def st_face(z: int, i: int) -> StableMorphism:
    """``d^i : [z-1] -> [z]``."""
    return StableMorphism(z - 1, z, (i,))


def st_degeneracy(z: int, j: int) -> StableMorphism:
    """``s^j : [z+1] -> [z]``."""
    return StableMorphism(z + 1, z, (), (j,))


def st_compose(f: StableMorphism, g: StableMorphism) -> StableMorphism:
    """``f`` followed by ``g``."""
    if f.tgt != g.src:
        raise ValueError(f"cannot compose {f} then {g}")
    faces, degens = compose_words(f.faces, f.degens, g.faces, g.degens)
    return StableMorphism(f.src, g.tgt, faces, degens)


def min_stabilization(f: StableMorphism) -> int:
    """Smallest shift at which ``f`` is a map of the simplex category."""
    k = max(0, -f.src, -f.tgt)
    if f.faces:
        k = max(k, f.faces[0] - f.tgt)
    if f.degens:
        k = max(k, f.degens[-1] + 1 - f.src)
    return k


def st_stabilize(f: StableMorphism, k: int) -> SimplexMap:
    """Image of ``f`` in ``Delta([src+k], [tgt+k])``."""
    if k < min_stabilization(f):
        raise ValueError(f"shift {k} too small for {f}; need {min_stabilization(f)}")
    return from_normal_form(NormalForm(f.src + k, f.faces, f.degens))


def st_hom(z: int, w: int, max_index: int) -> Iterator[StableMorphism]:
    """Morphisms ``[z] -> [w]`` whose generator indices are at most ``max_index``."""
    pool = range(max_index + 1)
    for r in range(0, max_index + 2):
        t = z + r - w
        if t < 0 or t > max_index + 1:
            continue
        for fs in combinations(pool, r):
            for ds in combinations(pool, t):
                yield StableMorphism(z, w, tuple(reversed(fs)), ds)


@dataclass(frozen=True)
class CollageObject:
    """The object ``([n], stage)`` with ``stage <= 0``."""

    n: int
    stage: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("collage objects need n >= 0")
        if self.stage > 0:
            raise ValueError("collage stages are non-positive")


@dataclass(frozen=True)
class CollageMorphism:
    """A map ``([n], -m) -> ([l], -(m+k))`` witnessed by ``[n+k] -> [l]``."""

    src: CollageObject
    tgt: CollageObject
    witness: SimplexMap

    def __post_init__(self):
        gap = self.gap
        if gap < 0:
            raise ValueError("collage morphisms never raise the stage")
        if self.witness.src != self.src.n + gap or self.witness.tgt != self.tgt.n:
            raise ValueError(f"witness {self.witness} does not fit {self.src} -> {self.tgt}")

    @property
    def gap(self) -> int:
        return self.src.stage - self.tgt.stage


def collage_identity(x: CollageObject) -> CollageMorphism:
    return CollageMorphism(x, x, SimplexMap(x.n, x.n, tuple(range(x.n + 1))))


def _kan_power(f: SimplexMap, k: int) -> SimplexMap:
    for _ in range(k):
        f = kan_K(f)
    return f


def collage_compose(f: CollageMorphism, g: CollageMorphism) -> CollageMorphism:
    """``f`` followed by ``g``."""
    if f.tgt != g.src:
        raise ValueError(f"cannot compose {f} then {g}")
    return CollageMorphism(f.src, g.tgt, compose(_kan_power(f.witness, g.gap), g.witness))


def collage_hom(x: CollageObject, y: CollageObject) -> list[CollageMorphism]:
    gap = x.stage - y.stage
    if gap < 0:
        return []
    return [CollageMorphism(x, y, w) for w in hom(x.n + gap, y.n)]


def collage_shift(x: CollageObject) -> CollageMorphism:
    """The canonical map ``([n], -m) -> ([n+1], -(m+1))`` with identity witness."""
    y = CollageObject(x.n + 1, x.stage - 1)
    return CollageMorphism(x, y, SimplexMap(x.n + 1, x.n + 1, tuple(range(x.n + 2))))


def rho(x):
    """Collapse the collage onto the stable category: ``([n], -m) -> [n-m]``."""
    if isinstance(x, CollageObject):
        return x.n + x.stage
    if isinstance(x, CollageMorphism):
        nf = normal_form(x.witness)
        return StableMorphism(rho(x.src), rho(x.tgt), nf.faces, nf.degens)
    raise TypeError(f"rho expects a collage object or morphism, got {type(x).__name__}")
