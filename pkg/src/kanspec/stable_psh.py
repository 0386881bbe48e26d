"""Locally finite stable complexes: pointed presheaves on the stable simplex category.

Cells carry an integer level and a finite face table; every face past the
table is the basepoint, which exists at every level and is never stored.

The stable cell ``stable_cell(z, n)`` has one cell per subset ``D`` of
``{0..n}``: the composite of the faces in ``D`` into the top cell, at level
``z - |D|``.  The sphere ``sphere(z, n)`` also kills ``D = {0..n}``.

Local sphericity is decided cellwise: with ``B`` the declared bound of a cell,
the composite ``d_0 d_1 ... d_B`` of the cell must be the basepoint.  Since the
declared bound is part of the presentation, so is the verdict: the same
presheaf presented with larger bounds can pass.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence

from . import ez
from .ez import BASE, Elem
from .stable_cat import compose_words


class StableComplex(ez.CellComplex):
    """A finite stable complex (an object of the locally finite subcategory).

    Each cell carries a declared bound ``B(c) >= 0`` with ``d_i c`` the basepoint
    for ``i > B(c)``.  Constructors declare the bound of the sphere or stable cell
    a cell comes from; when omitted it defaults to the smallest valid one.
    """

    stable = True

    def __init__(self, levels, faces, bounds: Optional[Mapping[str, int]] = None):
        super().__init__(levels, faces)
        bounds = dict(bounds or {})
        extra = set(bounds) - set(self._levels)
        if extra:
            raise ValueError(f"bounds given for unknown cells {sorted(extra)}")
        self.bounds = {}
        for c in self._levels:
            least = max(self.bound(c), 0)
            b = int(bounds.get(c, least))
            if b < least:
                raise ValueError(f"cell {c!r} has a face beyond its declared bound {b}")
            self.bounds[c] = b

    def __repr__(self):
        levels = {}
        for c in self.cells:
            levels[self.level(c)] = levels.get(self.level(c), 0) + 1
        return f"StableComplex({dict(sorted(levels.items()))})"

    def __eq__(self, other):
        return super().__eq__(other) and self.bounds == other.bounds

    __hash__ = ez.CellComplex.__hash__

    @classmethod
    def _from_tables(cls, levels, faces, like=None):
        bounds = {c: like.bounds[c] for c in levels if like is not None and c in like.bounds}
        return cls(levels, faces, bounds)

    def rename(self, mapping):
        out = super().rename(mapping)
        return StableComplex(
            {c: out.level(c) for c in out.cells},
            {c: out.face_table(c) for c in out.cells},
            {mapping[c]: b for c, b in self.bounds.items()},
        )

    def declared_bound(self, c: str) -> int:
        return self.bounds[c]

    def to_json(self) -> list:
        out = []
        for c in self.cells:
            fs = []
            for i, e in enumerate(self.face_table(c)):
                if e is BASE:
                    fs.append({"i": i, "word": [], "cell": "basepoint"})
                else:
                    fs.append({"i": i, "word": list(e[0]), "cell": e[1]})
            out.append({"id": c, "level": self.level(c), "faces": fs, "bound": self.bounds[c]})
        return out

    @classmethod
    def from_json(cls, data: Sequence[Mapping]) -> "StableComplex":
        levels, faces, bounds = {}, {}, {}
        for rec in data:
            c = str(rec["id"])
            if c == "basepoint":
                raise ValueError("'basepoint' is reserved")
            if c in levels:
                raise ValueError(f"duplicate cell id {c!r}")
            levels[c] = int(rec["level"])
            bound = int(rec.get("bound", -1))
            if bound >= 0:
                bounds[c] = bound
            table: dict[int, Elem] = {}
            for f in rec.get("faces", []):
                i = int(f["i"])
                if bound >= 0 and i > bound:
                    raise ValueError(f"cell {c!r}: face {i} beyond declared bound {bound}")
                t = str(f["cell"])
                table[i] = BASE if t == "basepoint" else (tuple(f.get("word", [])), t)
            top = max(table, default=-1)
            faces[c] = tuple(table.get(i, BASE) for i in range(top + 1))
        return cls(levels, faces, bounds).validate()


class StableMapping:
    """A basepoint-preserving map of stable complexes, given on cells."""

    def __init__(self, source: StableComplex, target: StableComplex, assignment: Mapping[str, Elem], check=True):
        self.source = source
        self.target = target
        self.assignment = {c: ez._norm_elem(assignment[c]) for c in source.cells}
        if check:
            self.validate()

    def validate(self) -> "StableMapping":
        top = max(self.source.horizon(), self.target.horizon())
        for c in self.source.cells:
            x = self.assignment[c]
            if x is not BASE and self.target.elem_level(x) != self.source.level(c):
                raise ValueError(f"{c!r} maps to an element of the wrong level")
            for i in range(max(top, self.target.elem_bound(x) + 2)):
                if self.target.face(i, x) != self(self.source.cell_face(c, i)):
                    raise ValueError(f"map does not commute with d_{i} on {c!r}")
        return self

    def __call__(self, e: Elem) -> Elem:
        return ez.apply_assignment(self.target, self.assignment, e)

    def __eq__(self, other):
        return (
            isinstance(other, StableMapping)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __hash__(self):
        return hash(tuple(sorted(self.assignment.items(), key=repr)))

    def __repr__(self):
        return f"StableMapping({self.assignment})"

    @property
    def is_mono(self) -> bool:
        return ez.is_mono(self.source, self.target, self.assignment)

    @property
    def is_epi(self) -> bool:
        return ez.is_epi(self.source, self.target, self.assignment)

    @property
    def is_iso(self) -> bool:
        return self.is_mono and self.is_epi

    def then(self, other: "StableMapping") -> "StableMapping":
        return StableMapping(self.source, other.target, {c: other(x) for c, x in self.assignment.items()}, check=False)

    def to_json(self) -> dict:
        def enc(x):
            return {"word": [], "to": "basepoint"} if x is BASE else {"word": list(x[0]), "to": x[1]}

        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "assignment": [dict(cell=c, **enc(x)) for c, x in self.assignment.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "StableMapping":
        src = StableComplex.from_json(data["source"])
        tgt = StableComplex.from_json(data["target"])
        assignment = {}
        for rec in data["assignment"]:
            to = str(rec["to"])
            assignment[str(rec["cell"])] = BASE if to == "basepoint" else (tuple(rec.get("word", [])), to)
        return cls(src, tgt, assignment)


def empty() -> StableComplex:
    return StableComplex({}, {})


def inclusion(sub: StableComplex, X: StableComplex) -> StableMapping:
    return StableMapping(sub, X, {c: ((), c) for c in sub.cells})


def shift(X: StableComplex, k: int) -> StableComplex:
    """Raise every level by ``k``."""
    return StableComplex({c: X.level(c) + k for c in X.cells}, {c: X.face_table(c) for c in X.cells}, X.bounds)


# ---------------------------------------------------------------------------
# stable cells and spheres


def _cell_id(D: Sequence[int]) -> str:
    return "d" + ".".join(map(str, D)) if D else "top"


def _face_of_subset(D: tuple[int, ...], i: int) -> tuple[int, ...]:
    """Face list of ``(composite of D) . d^i``."""
    fs, ds = compose_words((i,), (), D, ())
    assert not ds
    return fs


def stable_cell(z: int, n: int) -> StableComplex:
    """The representable at ``[z]`` with every face ``d^k``, ``k > n``, killed."""
    if n < 0:
        raise ValueError("n >= 0")
    levels, faces, bounds = {}, {}, {}
    for r in range(n + 2):
        for S in combinations(range(n + 1), r):
            D = tuple(sorted(S, reverse=True))
            c = _cell_id(D)
            levels[c] = z - len(D)
            bounds[c] = max(n - len(D), 0)
            table = []
            for i in range(n + 1 - len(D)):
                E = _face_of_subset(D, i)
                table.append(BASE if E[0] > n else ((), _cell_id(E)))
            faces[c] = tuple(table)
    return StableComplex(levels, faces, bounds).validate()


def sphere(z: int, n: int) -> StableComplex:
    """``stable_cell(z, n)`` with the bottom composite ``d^n ... d^0`` also killed."""
    X = stable_cell(z, n)
    bottom = _cell_id(tuple(range(n, -1, -1)))
    Q, _ = ez.identify(X, [(((), bottom), BASE)])
    return Q.validate()


def sphere_projection(z: int, n: int) -> StableMapping:
    X = stable_cell(z, n)
    bottom = _cell_id(tuple(range(n, -1, -1)))
    Q, proj = ez.identify(X, [(((), bottom), BASE)])
    return StableMapping(X, Q.validate(), proj)


def quotient(X: StableComplex, relations: Iterable[tuple[Elem, Elem]]) -> tuple[StableComplex, StableMapping]:
    Q, proj = ez.identify(X, relations)
    Q.validate()
    return Q, StableMapping(X, Q, proj)


def wedge(xs: Sequence[StableComplex]) -> StableComplex:
    ids = [c for X in xs for c in X.cells]
    rename = len(ids) != len(set(ids))
    levels, faces, bounds = {}, {}, {}
    for k, X in enumerate(xs):
        ren = {c: (f"{k}.{c}" if rename else c) for c in X.cells}
        for c in X.cells:
            levels[ren[c]] = X.level(c)
            bounds[ren[c]] = X.bounds[c]
            faces[ren[c]] = tuple(BASE if e is BASE else (e[0], ren[e[1]]) for e in X.face_table(c))
    return StableComplex(levels, faces, bounds).validate()


# ---------------------------------------------------------------------------
# horns and boundaries


def _subunion(z: int, n: int, generators: Iterable[int]) -> StableMapping:
    X = stable_cell(z, n)
    keep = X.face_closure(_cell_id((k,)) for k in generators)
    return inclusion(X.subcomplex(keep), X)


def brown_boundary(z: int, n: int) -> StableMapping:
    """Union of the images of ``d^0 .. d^n`` inside ``stable_cell(z, n)``."""
    return _subunion(z, n, range(n + 1))


def brown_horn(z: int, n: int, i: int) -> StableMapping:
    """Union of the images of ``d^k``, ``k != i``, inside ``stable_cell(z, n)``."""
    if not 0 <= i <= n:
        raise ValueError(f"horn index {i} outside 0..{n}")
    return _subunion(z, n, (k for k in range(n + 1) if k != i))


def epi_mono(f: StableMapping) -> tuple[StableMapping, StableMapping]:
    """Factor ``f`` through its image."""
    keep = ez.image_cells(f.target, f.assignment)
    image = f.target.subcomplex(keep)
    epi = StableMapping(f.source, image, f.assignment)
    return epi, inclusion(image, f.target)


def _spherical(f: StableMapping, z: int, n: int) -> StableMapping:
    proj = sphere_projection(z, n)
    _, mono = epi_mono(f.then(proj))
    return mono


def spherical_horn(z: int, n: int, i: int) -> StableMapping:
    return _spherical(brown_horn(z, n, i), z, n)


def spherical_boundary(z: int, n: int) -> StableMapping:
    return _spherical(brown_boundary(z, n), z, n)


# ---------------------------------------------------------------------------
# local sphericity


def sphere_relation_holds(X: StableComplex, c: str) -> bool:
    """``d_0 d_1 ... d_B c`` is the basepoint, ``B`` the declared bound."""
    return X.face_chain(((), c), X.bounds[c]) is BASE


def is_loc_sph(X: StableComplex) -> bool:
    return all(sphere_relation_holds(X, c) for c in X.cells)


def loc_sph_coreflect(X: StableComplex, with_passes: bool = False):
    """Largest face-closed subcomplex all of whose cells satisfy the sphere relation."""
    good = {c for c in X.cells if sphere_relation_holds(X, c)}
    passes = 0
    while True:
        passes += 1
        bad = {c for c in good if not X.face_closure([c]) <= good}
        if not bad:
            break
        good -= bad
    sub = X.subcomplex(good)
    return (sub, passes) if with_passes else sub


# ---------------------------------------------------------------------------
# maps and lifting


def hom_stable(A: StableComplex, X: StableComplex, fixed: Optional[Mapping[str, Elem]] = None) -> list[StableMapping]:
    return [StableMapping(A, X, m, check=False) for m in ez.homs(A, X, fixed=fixed)]


def find_isomorphism(A: StableComplex, B: StableComplex) -> Optional[dict[str, str]]:
    return ez.find_isomorphism(A, B)


def isomorphic(A: StableComplex, B: StableComplex) -> bool:
    return find_isomorphism(A, B) is not None


def has_rlp(X: StableComplex, incl: StableMapping) -> tuple[bool, list[tuple[StableMapping, list[StableMapping]]]]:
    """Right lifting property of ``X -> *`` against a mono ``A -> B``.

    Returns the verdict and, for each map ``A -> X``, every extension ``B -> X``.
    """
    if not incl.is_mono:
        raise ValueError("lifting is only checked against monomorphisms")
    A, B = incl.source, incl.target
    out = []
    for u in hom_stable(A, X):
        pinned = {incl.assignment[a][1]: u.assignment[a] for a in A.cells}
        fillers = hom_stable(B, X, fixed=pinned)
        out.append((u, fillers))
    return all(fs for _, fs in out), out


def is_orthogonal(X: StableComplex, incl: StableMapping) -> bool:
    _, table = has_rlp(X, incl)
    return all(len(fs) == 1 for _, fs in table)
