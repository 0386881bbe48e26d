"""Finite pointed simplicial sets, Kan suspension and loops.

A :class:`PointedSSet` lists its non-degenerate, non-basepoint cells.  The
basepoint has an id (``"*"`` by default) used only in serialized face tables.

Suspension puts the cone point at the top:
``Sigma_K Delta[n]_+ = Delta[n+1]_+ / (Delta[n]_+ v Delta[0]_+)``, so the
suspension of an ``n``-cell ``x`` has faces ``d_i = S(d_i x)`` for ``i <= n`` and
``d_{n+1} = *``.  An ``n``-cell of ``Omega_K X`` is an ``(n+1)``-cell of ``X`` whose
last face and top vertex are the basepoint.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from . import ez
from .ez import BASE, Elem


class PointedSSet(ez.CellComplex):
    """A finite pointed simplicial set in non-degenerate-cell form.

    >>> X = representable_plus(1)
    >>> X.cells, X.count(1)
    (['0', '0.1', '1'], 5)
    """

    stable = False

    def __init__(self, dims: Mapping[str, int], faces: Mapping[str, Iterable[Elem]], basepoint: str = "*"):
        if basepoint in dims:
            raise ValueError(f"basepoint id {basepoint!r} collides with a cell")
        super().__init__(dims, faces)
        self.basepoint = basepoint

    @classmethod
    def _from_tables(cls, levels, faces, like=None):
        return cls(levels, faces, like.basepoint if like is not None else "*")

    def __repr__(self):
        dims = {}
        for c in self.cells:
            dims.setdefault(self.level(c), 0)
            dims[self.level(c)] += 1
        return f"PointedSSet({dict(sorted(dims.items()))})"

    def dim(self, c: str) -> int:
        return self.level(c)

    @property
    def max_dim(self) -> int:
        return max((self.level(c) for c in self.cells), default=0)

    def all_cells(self) -> list[str]:
        return [self.basepoint] + self.cells

    def count(self, n: int) -> int:
        """Number of ``n``-simplices, degenerate ones and the basepoint included."""
        return len(self.elements(n))

    def is_point(self) -> bool:
        return len(self) == 0

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        def entry(i, e):
            if e is BASE:
                return {"i": i, "word": [], "cell": self.basepoint}
            return {"i": i, "word": list(e[0]), "cell": e[1]}

        return {
            "basepoint": self.basepoint,
            "cells": [
                {"id": c, "dim": self.level(c), "faces": [entry(i, e) for i, e in enumerate(self.face_table(c))]}
                for c in self.cells
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PointedSSet":
        bp = str(data.get("basepoint", "*"))
        dims, faces = {}, {}
        for rec in data["cells"]:
            c = str(rec["id"])
            if c == bp:
                continue
            if c in dims:
                raise ValueError(f"duplicate cell id {c!r}")
            dims[c] = int(rec["dim"])
            entries = sorted(rec.get("faces", []), key=lambda f: int(f["i"]))
            if [int(f["i"]) for f in entries] != list(range(len(entries))):
                raise ValueError(f"cell {c!r}: face indices must be 0..n")
            faces[c] = tuple(
                BASE if str(f["cell"]) == bp else (tuple(f.get("word", [])), str(f["cell"])) for f in entries
            )
        return cls(dims, faces, bp).validate()


class PointedMap:
    """A basepoint-preserving simplicial map, given on non-degenerate cells."""

    def __init__(self, source: PointedSSet, target: PointedSSet, assignment: Mapping[str, Elem], check: bool = True):
        self.source = source
        self.target = target
        self.assignment = {c: ez._norm_elem(assignment[c]) for c in source.cells}
        if check:
            self.validate()

    def validate(self) -> "PointedMap":
        for c in self.source.cells:
            x = self.assignment[c]
            if x is not BASE:
                if x[1] not in self.target:
                    raise ValueError(f"{c!r} maps to unknown cell {x[1]!r}")
                if self.target.elem_level(x) != self.source.level(c):
                    raise ValueError(f"{c!r} maps to an element of the wrong dimension")
            for i, e in enumerate(self.source.face_table(c)):
                if self.target.face(i, x) != self(e):
                    raise ValueError(f"map does not commute with d_{i} on {c!r}")
        return self

    def __call__(self, e: Elem) -> Elem:
        return ez.apply_assignment(self.target, self.assignment, e)

    def __eq__(self, other):
        return (
            isinstance(other, PointedMap)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __hash__(self):
        return hash(tuple(sorted(self.assignment.items(), key=repr)))

    def __repr__(self):
        return f"PointedMap({self.assignment})"

    @property
    def is_mono(self) -> bool:
        return ez.is_mono(self.source, self.target, self.assignment)

    @property
    def is_epi(self) -> bool:
        return ez.is_epi(self.source, self.target, self.assignment)

    def then(self, other: "PointedMap") -> "PointedMap":
        if other.source != self.target:
            raise ValueError("maps are not composable")
        return PointedMap(self.source, other.target, {c: other(x) for c, x in self.assignment.items()}, check=False)

    def to_json(self) -> list:
        out = []
        for c, x in self.assignment.items():
            if x is BASE:
                out.append({"cell": c, "word": [], "to": self.target.basepoint})
            else:
                out.append({"cell": c, "word": list(x[0]), "to": x[1]})
        return out

    @classmethod
    def from_json(cls, data: Sequence[Mapping], source: PointedSSet, target: PointedSSet) -> "PointedMap":
        assignment = {}
        for rec in data:
            to = str(rec["to"])
            assignment[str(rec["cell"])] = BASE if to == target.basepoint else (tuple(rec.get("word", [])), to)
        missing = set(source.cells) - set(assignment)
        if missing:
            raise ValueError(f"map leaves cells {sorted(missing)} unassigned")
        return cls(source, target, assignment)


def identity_map(X: PointedSSet) -> PointedMap:
    return PointedMap(X, X, {c: ((), c) for c in X.cells}, check=False)


def constant_map(A: PointedSSet, X: PointedSSet) -> PointedMap:
    return PointedMap(A, X, {c: BASE for c in A.cells}, check=False)


def is_iso(m: PointedMap) -> bool:
    """Levelwise bijective: cells go bijectively onto cells."""
    return m.is_mono and m.is_epi


# ---------------------------------------------------------------------------
# constructions


def point() -> PointedSSet:
    return PointedSSet({}, {})


def _vertex_id(vs: Sequence[int]) -> str:
    return ".".join(map(str, vs))


def _simplex_cells(n: int, keep) -> PointedSSet:
    dims, faces = {}, {}
    for k in range(n + 1):
        for vs in combinations(range(n + 1), k + 1):
            if not keep(vs):
                continue
            c = _vertex_id(vs)
            dims[c] = k
            faces[c] = tuple(((), _vertex_id(vs[:i] + vs[i + 1 :])) for i in range(k + 1)) if k else ()
    return PointedSSet(dims, faces)


def representable_plus(n: int) -> PointedSSet:
    """``Delta[n]`` with a disjoint basepoint; cells named by their vertex lists."""
    if n < 0:
        raise ValueError("n >= 0")
    return _simplex_cells(n, lambda vs: True)


def boundary_plus(n: int) -> PointedSSet:
    """``(boundary of Delta[n])_+``."""
    if n < 0:
        raise ValueError("n >= 0")
    return _simplex_cells(n, lambda vs: len(vs) <= n)


def _prefixed(xs: Sequence[PointedSSet]) -> list[dict[str, str]]:
    ids = [c for X in xs for c in X.cells]
    if len(ids) == len(set(ids)):
        return [{c: c for c in X.cells} for X in xs]
    return [{c: f"{k}.{c}" for c in X.cells} for k, X in enumerate(xs)]


def disjoint_cells(xs: Sequence[PointedSSet]) -> tuple[PointedSSet, list[dict[str, str]]]:
    names = _prefixed(xs)
    dims, faces = {}, {}
    for X, ren in zip(xs, names):
        for c in X.cells:
            dims[ren[c]] = X.level(c)
            faces[ren[c]] = tuple(BASE if e is BASE else (e[0], ren[e[1]]) for e in X.face_table(c))
    return PointedSSet(dims, faces), names


def wedge(xs: Sequence[PointedSSet]) -> PointedSSet:
    """Wedge sum: disjoint union with basepoints identified."""
    return disjoint_cells(list(xs))[0].validate()


def wedge_inclusions(xs: Sequence[PointedSSet]) -> tuple[PointedSSet, list[PointedMap]]:
    W, names = disjoint_cells(list(xs))
    return W, [PointedMap(X, W, {c: ((), ren[c]) for c in X.cells}) for X, ren in zip(xs, names)]


def quotient(X: PointedSSet, relations: Iterable[tuple[Elem, Elem]]) -> tuple[PointedSSet, PointedMap]:
    """Quotient by the generated congruence, with the projection map."""
    Q, proj = ez.identify(X, relations)
    Q.validate()
    return Q, PointedMap(X, Q, proj)


def collapse(X: PointedSSet, cells: Iterable[str]) -> tuple[PointedSSet, PointedMap]:
    """Collapse the subcomplex generated by ``cells`` to the basepoint."""
    return quotient(X, [(((), c), BASE) for c in cells])


def pushout(f: PointedMap, g: PointedMap) -> tuple[PointedSSet, PointedMap, PointedMap]:
    """Pushout of ``B <- A -> C``; returns the object and both coprojections."""
    if f.source != g.source:
        raise ValueError("span legs must share their source")
    for m in (f, g):
        m.validate()
    U, names = disjoint_cells([f.target, g.target])
    rf, rg = names

    def move(e, ren):
        return BASE if e is BASE else (e[0], ren[e[1]])

    rels = [(move(f.assignment[c], rf), move(g.assignment[c], rg)) for c in f.source.cells]
    Q, proj = ez.identify(U, rels)
    Q.validate()
    i = PointedMap(f.target, Q, {c: ez.apply_assignment(Q, proj, ((), rf[c])) for c in f.target.cells})
    j = PointedMap(g.target, Q, {c: ez.apply_assignment(Q, proj, ((), rg[c])) for c in g.target.cells})
    return Q, i, j


def ckp_space() -> PointedSSet:
    """``Delta[1]_+`` with the vertex ``d_1`` collapsed to the basepoint."""
    D0, D1 = representable_plus(0), representable_plus(1)
    incl = PointedMap(D0, D1, {"0": ((), "0")})
    crush = constant_map(D0, point())
    X, _, _ = pushout(incl, crush)
    return X


# ---------------------------------------------------------------------------
# suspension and loops


def _susp_id(c: str) -> str:
    return f"S({c})"


def sigma_K(X: PointedSSet) -> PointedSSet:
    dims, faces = {}, {}
    for c in X.cells:
        n = X.level(c)
        s = _susp_id(c)
        dims[s] = n + 1
        lower = tuple(BASE if e is BASE else (e[0], _susp_id(e[1])) for e in X.face_table(c))
        if n == 0:
            lower = (BASE,)
        faces[s] = lower + (BASE,)
    return PointedSSet(dims, faces, X.basepoint).validate()


def sigma_map(f: PointedMap) -> PointedMap:
    SA, SX = sigma_K(f.source), sigma_K(f.target)
    return PointedMap(
        SA, SX, {_susp_id(c): BASE if x is BASE else (x[0], _susp_id(x[1])) for c, x in f.assignment.items()}
    )


def _loop_condition(X: PointedSSet, c: str, vertex: bool) -> bool:
    n = X.level(c) - 1
    if n < 0:
        return False
    y = ((), c)
    if X.face(n + 1, y) is not BASE:
        return False
    return not vertex or X.face_chain(y, n) is BASE


def _loops(X: PointedSSet, vertex: bool) -> PointedSSet:
    keep = [c for c in X.cells if _loop_condition(X, c, vertex)]
    dims = {c: X.level(c) - 1 for c in keep}
    faces = {}
    for c in keep:
        n = dims[c]
        faces[c] = tuple(to_loop_elem(X, X.face(i, ((), c)), n - 1) for i in range(n + 1)) if n else ()
    return PointedSSet(dims, faces, X.basepoint).validate()


def to_loop_elem(X: PointedSSet, e: Elem, n: int) -> Elem:
    """Read an ``(n+1)``-simplex of ``X`` satisfying the loop conditions as an ``n``-simplex of the loops."""
    if e is BASE:
        return BASE
    if n in e[0]:
        raise ValueError(f"{e} is degenerate along the suspension direction")
    return e


def omega_K(X: PointedSSet) -> PointedSSet:
    """Kan loops: last face and top vertex at the basepoint."""
    return _loops(X, vertex=True)


def ckp_omega(X: PointedSSet) -> PointedSSet:
    """Loops with only the last-face condition."""
    return _loops(X, vertex=False)


def omega_map(f: PointedMap) -> PointedMap:
    OA, OX = omega_K(f.source), omega_K(f.target)
    return PointedMap(OA, OX, {c: to_loop_elem(f.target, f(((), c)), OA.level(c)) for c in OA.cells})


def omega_power(X: PointedSSet, k: int) -> PointedSSet:
    for _ in range(k):
        X = omega_K(X)
    return X


def sigma_power(X: PointedSSet, k: int) -> PointedSSet:
    for _ in range(k):
        X = sigma_K(X)
    return X


def unit_eta(X: PointedSSet) -> PointedMap:
    """``X -> Omega_K Sigma_K X``, ``x |-> S(x)``."""
    target = omega_K(sigma_K(X))
    return PointedMap(X, target, {c: ((), _susp_id(c)) for c in X.cells})


def adjunct(A: PointedSSet, f: PointedMap) -> PointedMap:
    """Transpose ``f: Sigma_K A -> X`` to ``A -> Omega_K X``."""
    X = f.target
    OX = omega_K(X)
    assignment = {c: to_loop_elem(X, f(((), _susp_id(c))), A.level(c)) for c in A.cells}
    return PointedMap(A, OX, assignment)


def hom_pointed(A: PointedSSet, X: PointedSSet) -> list[PointedMap]:
    """All pointed maps ``A -> X`` (exhaustive, duplicate-free)."""
    return [PointedMap(A, X, m, check=False) for m in ez.homs(A, X)]


def find_isomorphism(A: PointedSSet, B: PointedSSet) -> Optional[PointedMap]:
    m = ez.find_isomorphism(A, B)
    if m is None:
        return None
    return PointedMap(A, B, {c: ((), d) for c, d in m.items()})


def isomorphic(A: PointedSSet, B: PointedSSet) -> bool:
    return find_isomorphism(A, B) is not None


# ---------------------------------------------------------------------------
# random corpus


def _random_map(A: PointedSSet, X: PointedSSet, rng: random.Random) -> Optional[dict]:
    order = sorted(A.cells, key=lambda c: (A.level(c), c))
    pools = {c: X.elements(A.level(c)) for c in order}
    for c in order:
        rng.shuffle(pools[c])
    fixed: dict = {}

    def rec(k):
        if k == len(order):
            return True
        c = order[k]
        for x in pools[c]:
            if all(X.face(i, x) == ez.apply_assignment(X, fixed, e) for i, e in enumerate(A.face_table(c))):
                fixed[c] = x
                if rec(k + 1):
                    return True
                del fixed[c]
        return False

    return dict(fixed) if rec(0) else None


def random_pointed_sset(rng: random.Random, max_cells: int = 8, max_dim: int = 3) -> PointedSSet:
    """Attach random cells along random boundary maps.

    The result has at most ``max_cells`` non-basepoint cells of dimension at most ``max_dim``.
    """
    X = point()
    target = rng.randint(0, max_cells)
    for k in range(target):
        top = min(max_dim, X.max_dim + 1) if len(X) else 0
        n = rng.randint(0, top)
        dims = {c: X.level(c) for c in X.cells}
        faces = {c: X.face_table(c) for c in X.cells}
        name = f"c{k}"
        if n == 0:
            dims[name], faces[name] = 0, ()
        else:
            bd = boundary_plus(n)
            m = _random_map(bd, X, rng)
            if m is None:
                continue
            dims[name] = n
            faces[name] = tuple(
                m[_vertex_id(tuple(v for v in range(n + 1) if v != i))] for i in range(n + 1)
            )
        X = PointedSSet(dims, faces, X.basepoint)
    return X.validate()
