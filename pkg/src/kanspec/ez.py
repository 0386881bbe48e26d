"""Shared engine for presheaves presented by non-degenerate cells.

A *cell complex* lists non-degenerate cells with a level (dimension) and a face
table.  Every element of the presheaf is either the basepoint ``BASE`` or a pair
``(word, cell)`` meaning the degeneracy ``s^{j_1} ... s^{j_t}`` (``word`` strictly
increasing) pulled back along ``cell``.  Operators act through the normal-form
composition of the stable category, which restricts to the simplex category.

Two flavours share the code: bounded complexes (simplicial sets, where a cell of
dimension ``n`` has exactly the faces ``0..n``) and stable complexes (faces
beyond the stored table are the basepoint).
"""

from __future__ import annotations

from collections import deque
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Optional

from .stable_cat import compose_words, rewrite

BASE = None

Elem = Optional[tuple[tuple[int, ...], str]]


def cell(c: str) -> Elem:
    """The non-degenerate element of a cell."""
    return ((), c)


def pull_degeneracy(word: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """Word of ``word^*`` applied to an element already carrying ``inner``."""
    faces, degens = compose_words((), word, (), inner)
    assert not faces
    return degens


def sections(word: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Face normal forms of all sections of the degeneracy ``word``.

    ``s^{j_1}...s^{j_t} d^{j_t+e_t} ... d^{j_1+e_1} = id`` for every choice of
    ``e_k`` in ``{0, 1}``.
    """
    for eps in product((0, 1), repeat=len(word)):
        w = tuple(("d", j + e) for j, e in zip(reversed(word), reversed(eps)))
        normal, _ = rewrite(w)
        yield tuple(i for _, i in normal)


class CellComplex:
    """Finite presentation by non-degenerate cells.

    Parameters
    ----------
    levels : mapping from cell id to its level (dimension).
    faces : mapping from cell id to the tuple of its faces ``d_0, d_1, ...``.
    """

    stable = False

    def __init__(self, levels: Mapping[str, int], faces: Mapping[str, Iterable[Elem]]):
        ids = sorted(levels)
        self._levels = {c: int(levels[c]) for c in ids}
        self._faces = {c: tuple(_norm_elem(e) for e in faces.get(c, ())) for c in ids}
        extra = set(faces) - set(ids)
        if extra:
            raise ValueError(f"face tables given for unknown cells {sorted(extra)}")
        if self.stable:
            self._faces = {c: _trim(fs) for c, fs in self._faces.items()}

    # -- basic access ------------------------------------------------------
    @property
    def cells(self) -> list[str]:
        return list(self._levels)

    def level(self, c: str) -> int:
        return self._levels[c]

    def face_table(self, c: str) -> tuple[Elem, ...]:
        return self._faces[c]

    def __len__(self):
        return len(self._levels)

    def __contains__(self, c):
        return c in self._levels

    def __eq__(self, other):
        return type(self) is type(other) and self._levels == other._levels and self._faces == other._faces

    def __hash__(self):
        return hash((type(self).__name__, tuple(self._levels.items()), tuple(self._faces.items())))

    def cells_at(self, n: int) -> list[str]:
        return [c for c, k in self._levels.items() if k == n]

    def elem_level(self, e: Elem) -> int:
        if e is BASE:
            raise ValueError("the basepoint has every level")
        return self._levels[e[1]] + len(e[0])

    def cell_face(self, c: str, j: int) -> Elem:
        fs = self._faces[c]
        if j < len(fs):
            return fs[j]
        if self.stable or j < 0:
            if j < 0:
                raise IndexError(j)
            return BASE
        raise IndexError(f"cell {c!r} of dimension {self._levels[c]} has no face {j}")

    def bound(self, c: str) -> int:
        """Largest face index that is not the basepoint (-1 if none)."""
        fs = self._faces[c]
        for j in range(len(fs) - 1, -1, -1):
            if fs[j] is not BASE:
                return j
        return -1

    def elem_bound(self, e: Elem) -> int:
        """An index beyond which every face of ``e`` is the basepoint."""
        if e is BASE:
            return -1
        w, c = e
        if self.stable:
            b = self.bound(c) + len(w)
        else:
            b = self._levels[c] + len(w)
        if w:
            b = max(b, w[-1] + 1)
        return b

    def horizon(self) -> int:
        """Index range large enough to see every non-trivial face identity."""
        b = 0
        for c, fs in self._faces.items():
            b = max(b, len(fs))
            for e in fs:
                if e is not BASE:
                    b = max(b, self.elem_bound(e) + 1)
        return b + 2

    # -- the action --------------------------------------------------------
    def face(self, i: int, e: Elem) -> Elem:
        """``d_i e``."""
        if e is BASE:
            return BASE
        w, c = e
        fs, ds = compose_words((i,), (), (), w)
        if not fs:
            return (ds, c)
        y = self.cell_face(c, fs[0])
        if y is BASE:
            return BASE
        return (pull_degeneracy(ds, y[0]), y[1])

    def degen(self, word: tuple[int, ...], e: Elem) -> Elem:
        if e is BASE:
            return BASE
        return (pull_degeneracy(tuple(word), e[0]), e[1])

    def act(self, faces: tuple[int, ...], degens: tuple[int, ...], e: Elem) -> Elem:
        """Pull ``e`` back along the morphism with the given normal form."""
        if e is BASE:
            return BASE
        w, c = e
        fs, ds = compose_words(tuple(faces), tuple(degens), (), w)
        x: Elem = ((), c)
        for i in fs:
            x = self.face(i, x)
            if x is BASE:
                return BASE
        return self.degen(ds, x)

    def face_chain(self, e: Elem, top: int) -> Elem:
        """``d_0 d_1 ... d_top e`` (``d_top`` acts first)."""
        for i in range(top, -1, -1):
            e = self.face(i, e)
            if e is BASE:
                return BASE
        return e

    # -- elements ----------------------------------------------------------
    def elements(self, n: int, max_word: Optional[int] = None) -> list[Elem]:
        """Elements of level ``n``.

        For bounded complexes this is the whole level.  For stable complexes the
        level is infinite; ``max_word`` caps the degeneracy indices.
        """
        out: list[Elem] = [BASE]
        for c, k in self._levels.items():
            t = n - k
            if t < 0:
                continue
            top = n - 1 if not self.stable else max_word
            if top is None:
                raise ValueError("stable levels are infinite; pass max_word")
            if t == 0:
                out.append(((), c))
                continue
            for w in combinations(range(top + 1), t):
                out.append((w, c))
        return out

    # -- validation --------------------------------------------------------
    def validate(self) -> "CellComplex":
        for c, fs in self._faces.items():
            n = self._levels[c]
            if not self.stable:
                want = n + 1 if n > 0 else 0
                if len(fs) != want:
                    raise ValueError(f"cell {c!r} of dimension {n} needs {want} faces, has {len(fs)}")
            for j, e in enumerate(fs):
                if e is BASE:
                    continue
                w, t = e
                if t not in self._levels:
                    raise ValueError(f"face {j} of {c!r} names unknown cell {t!r}")
                if any(a >= b for a, b in zip(w, w[1:])) or any(a < 0 for a in w):
                    raise ValueError(f"face {j} of {c!r} has a non-normal word {w}")
                if self._levels[t] + len(w) != n - 1:
                    raise ValueError(f"face {j} of {c!r} has the wrong level")
                if not self.stable and w and w[-1] > n - 2:
                    raise ValueError(f"face {j} of {c!r} has degeneracy index out of range")
        top = self.horizon()
        for c in self._levels:
            n = self._levels[c]
            jmax = (n if n >= 2 else 0) if not self.stable else top
            x = ((), c)
            for j in range(1, jmax + 1):
                dj = self.face(j, x)
                for i in range(j):
                    lhs = self.face(i, dj)
                    rhs = self.face(j - 1, self.face(i, x))
                    if lhs != rhs:
                        raise ValueError(f"simplicial identity d_{i} d_{j} = d_{j-1} d_{i} fails on {c!r}")
        return self

    # -- structure ---------------------------------------------------------
    def subcomplex(self, keep: Iterable[str]):
        keep = set(keep)
        closed = self.face_closure(keep)
        if closed != keep:
            raise ValueError(f"not face-closed: missing {sorted(closed - keep)}")
        return self._rebuild({c: self._levels[c] for c in keep}, {c: self._faces[c] for c in keep})

    def face_closure(self, seeds: Iterable[str]) -> set[str]:
        seen: set[str] = set()
        todo = list(seeds)
        while todo:
            c = todo.pop()
            if c in seen:
                continue
            seen.add(c)
            for e in self._faces[c]:
                if e is not BASE and e[1] not in seen:
                    todo.append(e[1])
        return seen

    def rename(self, mapping: Mapping[str, str]):
        def ren(e):
            return BASE if e is BASE else (e[0], mapping[e[1]])

        return self._rebuild(
            {mapping[c]: k for c, k in self._levels.items()},
            {mapping[c]: tuple(ren(e) for e in fs) for c, fs in self._faces.items()},
        )

    def _rebuild(self, levels, faces):
        return type(self)._from_tables(levels, faces, self)

    @classmethod
    def _from_tables(cls, levels, faces, like=None):
        return cls(levels, faces)


def _norm_elem(e) -> Elem:
    if e is BASE:
        return BASE
    w, c = e
    return (tuple(int(j) for j in w), str(c))


def _trim(fs: tuple[Elem, ...]) -> tuple[Elem, ...]:
    k = len(fs)
    while k and fs[k - 1] is BASE:
        k -= 1
    return fs[:k]


# ---------------------------------------------------------------------------
# maps


def apply_assignment(cx: CellComplex, assignment: Mapping[str, Elem], e: Elem) -> Elem:
    """Image of an element of the source under a cellwise assignment into ``cx``."""
    if e is BASE:
        return BASE
    w, c = e
    return cx.degen(w, assignment[c])


def candidates(cx: CellComplex, level: int, bound: Optional[int]) -> list[Elem]:
    """Possible images in ``cx`` of a cell of the given level.

    For stable targets ``bound`` is the source cell's face bound; a degeneracy
    index ``j`` forces ``d_{j+1}`` of the image to be non-trivial, so ``j < bound``.
    """
    if cx.stable:
        return cx.elements(level, max_word=bound - 1 if bound is not None else None)
    return cx.elements(level)


def homs(
    src: CellComplex,
    tgt: CellComplex,
    fixed: Optional[Mapping[str, Elem]] = None,
    injective: bool = False,
) -> Iterator[dict[str, Elem]]:
    """Enumerate basepoint-preserving maps as cell assignments.

    ``fixed`` pins the images of some cells; ``injective`` restricts to maps
    sending cells bijectively onto distinct cells (used for isomorphisms).
    """
    order = sorted(src.cells, key=lambda c: (src.level(c), c))
    fixed = dict(fixed or {})
    horizon = max(src.horizon(), tgt.horizon()) if src.stable else None
    pools: dict[str, list[Elem]] = {}
    for c in order:
        if c in fixed:
            pools[c] = [fixed[c]]
        elif injective:
            pools[c] = [((), d) for d in tgt.cells if tgt.level(d) == src.level(c)]
        else:
            b = src.bound(c) if src.stable else None
            if b is not None and b < 0:
                b = 0
            pools[c] = candidates(tgt, src.level(c), b)
    assignment: dict[str, Elem] = {}
    used: set[str] = set()

    def fits(c: str, x: Elem) -> bool:
        if src.stable:
            rng = range(max(horizon, tgt.elem_bound(x) + 2))
        else:
            rng = range(len(src.face_table(c)))
        for i in rng:
            want = apply_assignment(tgt, assignment, src.cell_face(c, i))
            if tgt.face(i, x) != want:
                return False
        return True

    def rec(k: int) -> Iterator[dict[str, Elem]]:
        if k == len(order):
            yield dict(assignment)
            return
        c = order[k]
        for x in pools[c]:
            if injective and (x is BASE or x[1] in used):
                continue
            if not fits(c, x):
                continue
            assignment[c] = x
            if injective:
                used.add(x[1])
            yield from rec(k + 1)
            if injective:
                used.discard(x[1])
            del assignment[c]

    yield from rec(0)


def find_isomorphism(a: CellComplex, b: CellComplex) -> Optional[dict[str, str]]:
    """A cell bijection identifying ``a`` with ``b``, or ``None``."""
    if len(a) != len(b):
        return None
    if sorted(a.level(c) for c in a.cells) != sorted(b.level(c) for c in b.cells):
        return None
    for m in homs(a, b, injective=True):
        return {c: x[1] for c, x in m.items()}
    return None


def is_mono(src: CellComplex, tgt: CellComplex, assignment: Mapping[str, Elem]) -> bool:
    images = [assignment[c] for c in src.cells]
    if any(x is BASE or x[0] for x in images):
        return False
    return len({x[1] for x in images}) == len(images)


def is_epi(src: CellComplex, tgt: CellComplex, assignment: Mapping[str, Elem]) -> bool:
    hit = {x[1] for x in assignment.values() if x is not BASE and not x[0]}
    return hit == set(tgt.cells)


def image_cells(tgt: CellComplex, assignment: Mapping[str, Elem]) -> set[str]:
    return tgt.face_closure(x[1] for x in assignment.values() if x is not BASE)


# ---------------------------------------------------------------------------
# quotients


def identify(cx: CellComplex, relations: Iterable[tuple[Elem, Elem]]):
    """Quotient of ``cx`` by the congruence generated by ``relations``.

    Returns the quotient complex and the projection as a cell assignment.
    Cells are merged or rewritten one at a time (union-find on cells); each
    rewrite is followed by the face relations it forces.
    """
    levels = {c: cx.level(c) for c in cx.cells}
    faces = {c: cx.face_table(c) for c in cx.cells}
    rep: dict[str, Elem] = {}

    def resolve(e: Elem) -> Elem:
        while e is not BASE and e[1] in rep:
            r = rep[e[1]]
            if r is BASE:
                return BASE
            e = (pull_degeneracy(e[0], r[0]), r[1])
        return e

    def live_face(c, j):
        fs = faces[c]
        if j < len(fs):
            return resolve(fs[j])
        if cx.stable:
            return BASE
        raise IndexError(j)

    view = object.__new__(type(cx))
    view._levels = levels
    view._faces = faces
    view.cell_face = live_face  # type: ignore[method-assign]

    def face_range(*elems) -> range:
        if not cx.stable:
            return range(cx.elem_level(elems[0]) + 1) if cx.elem_level(elems[0]) > 0 else range(0)
        b = max(view.elem_bound(e) for e in elems)
        return range(b + 2)

    def rewrite_cell(a: str, new: Elem):
        old = ((), a)
        rng = face_range(old, new) if new is not BASE else face_range(old)
        old_faces = [view.face(j, old) for j in rng]
        new_faces = [view.face(j, new) for j in rng]
        rep[a] = new
        queue.extend(zip(old_faces, new_faces))

    queue = deque((_norm_elem(x), _norm_elem(y)) for x, y in relations)
    while queue:
        x, y = queue.popleft()
        x, y = resolve(x), resolve(y)
        if x == y:
            continue
        if x is BASE:
            x, y = y, x
        if y is not BASE and levels[x[1]] + len(x[0]) != levels[y[1]] + len(y[0]):
            raise ValueError(f"cannot identify elements of different levels: {x}, {y}")
        if y is BASE:
            rewrite_cell(x[1], BASE)
            continue
        (w, a), (v, b) = x, y
        if levels[a] < levels[b] or (levels[a] == levels[b] and a < b):
            (w, a), (v, b) = (v, b), (w, a)
        if levels[a] == levels[b] and w == v:
            rewrite_cell(a, ((), b))
        else:
            target = ((), b)
            new = None
            for sec in sections(w):
                fs, ds = compose_words(sec, (), (), v)
                if a == b and not fs:
                    continue
                new = view.act(fs, ds, target)
                break
            assert new is not None
            rewrite_cell(a, new)
        queue.append((x, y))

    live = [c for c in levels if c not in rep]
    new_levels = {c: levels[c] for c in live}
    new_faces = {c: tuple(resolve(e) for e in faces[c]) for c in live}
    projection = {c: resolve(((), c)) for c in levels}
    return cx._rebuild(new_levels, new_faces), projection
