"""Cell trees of Theta, their morphisms, and truncated cellular sets.

A cell is a planar tree: ``[n];(T_1, ..., T_n)`` is a node with ``n``
ordered children, the leaf being the point ``[0]``.  A morphism
``S -> T`` is a monotone base map of the roots together with, for every
child ``S_i`` and every ``j`` in ``F(base)(i)``, a morphism ``S_i -> T_j``.
Composition is diagrammatic throughout (``compose(f, g)`` is f, then g).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

from .fincat import FiniteCategory
from .simplex_cat import SimplexMap

# ---------------------------------------------------------------------------
# Segal's Gamma


@dataclass(frozen=True)
class GammaMorphism:
    """``<src> -> <tgt>`` sending each ``i`` to a subset, the subsets pairwise disjoint."""

    src: int
    tgt: int
    parts: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(frozenset(p) for p in self.parts))
        if len(self.parts) != self.src:
            raise ValueError(f"need {self.src} parts, got {len(self.parts)}")
        seen: set[int] = set()
        for p in self.parts:
            if not p <= set(range(1, self.tgt + 1)):
                raise ValueError(f"part {sorted(p)} is not inside 1..{self.tgt}")
            if seen & p:
                raise ValueError("parts must be pairwise disjoint")
            seen |= p

    def __call__(self, i: int) -> frozenset:
        return self.parts[i - 1]

    def to_json(self) -> dict:
        return {"src": self.src, "tgt": self.tgt, "parts": [sorted(p) for p in self.parts]}

    @classmethod
    def from_json(cls, data: Mapping) -> "GammaMorphism":
        return cls(int(data["src"]), int(data["tgt"]), tuple(frozenset(p) for p in data["parts"]))


def gamma_identity(k: int) -> GammaMorphism:
    return GammaMorphism(k, k, tuple(frozenset({i}) for i in range(1, k + 1)))


def gamma_compose(phi: GammaMorphism, sigma: GammaMorphism) -> GammaMorphism:
    """``phi`` then ``sigma``: ``i |-> union of sigma(j) for j in phi(i)``."""
    if phi.tgt != sigma.src:
        raise ValueError(f"cannot compose <{phi.src}>-><{phi.tgt}> with <{sigma.src}>-><{sigma.tgt}>")
    return GammaMorphism(phi.src, sigma.tgt, tuple(frozenset().union(*(sigma(j) for j in p)) for p in phi.parts))


def gamma_hom(k: int, m: int) -> list[GammaMorphism]:
    """Every morphism ``<k> -> <m>``: each ``j`` goes to at most one ``i``."""
    out = []
    for owner in product(range(k + 1), repeat=m):
        parts = [frozenset(j + 1 for j in range(m) if owner[j] == i + 1) for i in range(k)]
        out.append(GammaMorphism(k, m, tuple(parts)))
    return out


def interval_parts(values: Sequence[int]) -> tuple[frozenset, ...]:
    return tuple(frozenset(range(values[i - 1] + 1, values[i] + 1)) for i in range(1, len(values)))


def simplex_to_gamma(phi: SimplexMap) -> GammaMorphism:
    """``F(phi)(i) = {j : phi(i-1) < j <= phi(i)}``."""
    return GammaMorphism(phi.src, phi.tgt, interval_parts(phi.values))


# ---------------------------------------------------------------------------
# cells


class ThetaCell(tuple):
    """A planar tree; the tuple entries are the children."""

    def __new__(cls, children: Iterable["ThetaCell"] = ()):
        return super().__new__(cls, tuple(c if isinstance(c, ThetaCell) else ThetaCell(c) for c in children))

    @property
    def arity(self) -> int:
        return len(self)

    @property
    def children(self) -> tuple["ThetaCell", ...]:
        return tuple(self)

    @property
    def depth(self) -> int:
        return 0 if not self else 1 + max(c.depth for c in self)

    def __repr__(self):
        if not self:
            return "[0]"
        if all(not c for c in self):
            return f"[{len(self)}]"
        return f"[{len(self)}];(" + ",".join(map(repr, self)) + ")"

    def to_json(self) -> list:
        return [c.to_json() for c in self]

    @classmethod
    def from_json(cls, data) -> "ThetaCell":
        if not isinstance(data, list):
            raise ValueError(f"a tree is a nested list, got {data!r}")
        return cls(cls.from_json(c) for c in data)


POINT = ThetaCell()


def simplex_cell(n: int) -> ThetaCell:
    """``[n];([0],...,[0])``: the embedding of ``[n]``."""
    return ThetaCell([POINT] * n)


def globe_cell(k: int) -> ThetaCell:
    """``[1];([1];(...))``, nested ``k`` times."""
    c = POINT
    for _ in range(k):
        c = ThetaCell([c])
    return c


@lru_cache(maxsize=None)
def reedy_degree(T: ThetaCell) -> int:
    """``arity + sum of the children's degrees``."""
    return len(T) + sum(reedy_degree(c) for c in T)


@lru_cache(maxsize=None)
def cells_of_degree(d: int) -> tuple[ThetaCell, ...]:
    if d == 0:
        return (POINT,)
    out = []
    for a in range(1, d + 1):
        for split in _compositions(d - a, a):
            for kids in product(*(cells_of_degree(s) for s in split)):
                out.append(ThetaCell(kids))
    return tuple(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def cells_up_to_degree(d: int) -> list[ThetaCell]:
    return [T for k in range(d + 1) for T in cells_of_degree(k)]


def random_cell(rng: random.Random, max_depth: int = 2, max_arity: int = 3) -> ThetaCell:
    if max_depth == 0:
        return POINT
    n = rng.randint(0, max_arity)
    return ThetaCell(random_cell(rng, max_depth - 1, max_arity) for _ in range(n))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class ThetaMorphism:
    src: ThetaCell
    tgt: ThetaCell
    base: tuple[int, ...]
    # components[i-1] lists the maps src[i-1] -> tgt[j-1] for j in F(base)(i), in increasing j
    components: tuple[tuple["ThetaMorphism", ...], ...] = ()

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.src, self.tgt, self.base, self.components))
            object.__setattr__(self, "_hash", h)
        return h

    def validate(self) -> "ThetaMorphism":
        m, n = len(self.src), len(self.tgt)
        b = self.base
        if len(b) != m + 1 or any(not 0 <= v <= n for v in b) or any(b[i] > b[i + 1] for i in range(m)):
            raise ValueError(f"base {b} is not a monotone map [{m}] -> [{n}]")
        if len(self.components) != m:
            raise ValueError("one component family per child of the source")
        for i in range(1, m + 1):
            js = range(b[i - 1] + 1, b[i] + 1)
            fam = self.components[i - 1]
            if len(fam) != len(js):
                raise ValueError(f"child {i} needs {len(js)} components")
            for j, f in zip(js, fam):
                if f.src != self.src[i - 1] or f.tgt != self.tgt[j - 1]:
                    raise ValueError(f"component ({i},{j}) has the wrong endpoints")
                f.validate()
        return self

    def component(self, i: int, j: int) -> "ThetaMorphism":
        return self.components[i - 1][j - self.base[i - 1] - 1]

    @property
    def base_map(self) -> SimplexMap:
        return SimplexMap(len(self.src), len(self.tgt), self.base)

    def __repr__(self):
        if not self.components or all(not fam for fam in self.components):
            return f"<{self.src}->{self.tgt} {list(self.base)}>"
        return f"<{self.src}->{self.tgt} {list(self.base)};{[list(f) for f in self.components]}>"

    def to_json(self) -> dict:
        return {
            "src": self.src.to_json(),
            "tgt": self.tgt.to_json(),
            "base": list(self.base),
            "components": [[f.to_json() for f in fam] for fam in self.components],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ThetaMorphism":
        return cls(
            ThetaCell.from_json(data["src"]),
            ThetaCell.from_json(data["tgt"]),
            tuple(data["base"]),
            tuple(tuple(cls.from_json(f) for f in fam) for fam in data.get("components", [])),
        ).validate()


@lru_cache(maxsize=None)
def theta_identity(T: ThetaCell) -> ThetaMorphism:
    return ThetaMorphism(T, T, tuple(range(len(T) + 1)), tuple((theta_identity(c),) for c in T))


@lru_cache(maxsize=None)
def theta_hom(S: ThetaCell, T: ThetaCell) -> tuple[ThetaMorphism, ...]:
    m, n = len(S), len(T)
    out = []
    for base in combinations_with_replacement(range(n + 1), m + 1):
        fams = [
            list(product(*(theta_hom(S[i - 1], T[j - 1]) for j in range(base[i - 1] + 1, base[i] + 1))))
            for i in range(1, m + 1)
        ]
        for comps in product(*fams):
            out.append(ThetaMorphism(S, T, base, tuple(comps)))
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def compose(first: ThetaMorphism, second: ThetaMorphism) -> ThetaMorphism:
    """``first`` then ``second``; components ``q_kj . f_ji`` with ``j`` the unique index over ``k``."""
    if first.tgt != second.src:
        raise ValueError(f"cannot compose {first} with {second}")
    g, r = first.base, second.base
    base = tuple(r[v] for v in g)
    comps = []
    for i in range(1, len(first.src) + 1):
        fam = []
        j = g[i - 1] + 1
        for k in range(base[i - 1] + 1, base[i] + 1):
            while r[j] < k:
                j += 1
            fam.append(compose(first.component(i, j), second.component(j, k)))
        comps.append(tuple(fam))
    return ThetaMorphism(first.src, second.tgt, base, tuple(comps))


def wreath_compose(second: ThetaMorphism, first: ThetaMorphism) -> ThetaMorphism:
    """The composite ``second . first`` written in applicative order."""
    return compose(first, second)


def random_morphism(rng: random.Random, S: ThetaCell, T: ThetaCell) -> ThetaMorphism:
    m, n = len(S), len(T)
    base = tuple(sorted(rng.randint(0, n) for _ in range(m + 1)))
    comps = tuple(
        tuple(random_morphism(rng, S[i - 1], T[j - 1]) for j in range(base[i - 1] + 1, base[i] + 1))
        for i in range(1, m + 1)
    )
    return ThetaMorphism(S, T, base, comps)


# ---------------------------------------------------------------------------
# plus / minus


def _injective(xs: Sequence) -> bool:
    return len(set(xs)) == len(xs)


def jointly_mono(family: Sequence[ThetaMorphism], source: ThetaCell) -> bool:
    """Post-composition with the whole family separates maps into ``source``."""
    if not source:
        return True
    if not _injective([tuple(f.base[v] for f in family) for v in range(len(source) + 1)]):
        return False
    for i in range(1, len(source) + 1):
        sub = [c for f in family for c in f.components[i - 1]]
        if not jointly_mono(sub, source[i - 1]):
            return False
    return True


def is_plus(f: ThetaMorphism) -> bool:
    return jointly_mono([f], f.src)


def is_minus(f: ThetaMorphism) -> bool:
    """Split epi: the base is surjective and every component is split epi.

    A surjective monotone base has steps of at most one, so each child of the
    target sees exactly one component and a section can be assembled from theirs.
    """
    if set(f.base) != set(range(len(f.tgt) + 1)):
        return False
    return all(is_minus(c) for fam in f.components for c in fam)


def find_section(f: ThetaMorphism) -> Optional[ThetaMorphism]:
    """Some ``s`` with ``s then f`` the identity, by search."""
    if set(f.base) != set(range(len(f.tgt) + 1)):
        return None
    ident = theta_identity(f.tgt)
    return next((s for s in theta_hom(f.tgt, f.src) if compose(s, f) == ident), None)


def is_iso(f: ThetaMorphism) -> bool:
    return f.src == f.tgt and is_plus(f) and is_minus(f)


def _semantic(f: ThetaMorphism, bound: int) -> tuple[bool, bool]:
    inj = surj = True
    for U in cells_up_to_degree(bound):
        image = [compose(u, f) for u in theta_hom(U, f.src)]
        if inj and not _injective(image):
            inj = False
        if surj and set(image) != set(theta_hom(U, f.tgt)):
            surj = False
        if not (inj or surj):
            break
    return inj, surj


def classify(f: ThetaMorphism, method: str = "fast") -> str:
    """``"plus"``, ``"minus"`` or ``"mixed"``; isomorphisms count as plus.

    ``method="semantic"`` tests injectivity and surjectivity of post-composition
    against every test cell of degree at most the target's; ``"fast"`` uses the
    recursive joint-mono and split-epi tests.
    """
    if method == "semantic":
        inj, surj = _semantic(f, reedy_degree(f.tgt))
    elif method == "fast":
        inj = is_plus(f)
        surj = not inj and is_minus(f)
    else:
        raise ValueError(f"unknown method {method!r}")
    if inj:
        return "plus"
    return "minus" if surj else "mixed"


def factorizations(f: ThetaMorphism) -> list[tuple[ThetaMorphism, ThetaMorphism]]:
    """Every ``(e, m)`` with ``e`` minus, ``m`` plus and ``e then m == f``."""
    out = []
    for V in cells_up_to_degree(reedy_degree(f.src)):
        for m in theta_hom(V, f.tgt):
            if not is_plus(m):
                continue
            for e in theta_hom(f.src, V):
                if compose(e, m) == f and is_minus(e):
                    out.append((e, m))
    return out


# ---------------------------------------------------------------------------
# hyperfaces, horns, spines


def hyperfaces(T: ThetaCell) -> list[ThetaMorphism]:
    """Plus maps into ``T`` whose source has degree one less."""
    d = reedy_degree(T)
    if d == 0:
        return []
    return [f for S in cells_of_degree(d - 1) for f in theta_hom(S, T) if is_plus(f)]


def is_inner(f: ThetaMorphism) -> bool:
    """Base keeps the bottom and top element and every component is inner."""
    if f.base[0] != 0 or f.base[-1] != len(f.tgt):
        return False
    return all(is_inner(c) for fam in f.components for c in fam)


def globe_inclusions(T: ThetaCell) -> list[ThetaMorphism]:
    """Globes of the linear decomposition of ``T``, as maps into ``T``."""
    if not T:
        return [theta_identity(T)]
    out = []
    n = len(T)
    for i in range(1, n + 1):
        for h in globe_inclusions(T[i - 1]):
            comps = ((h,),)
            base = (i - 1, i)
            out.append(ThetaMorphism(ThetaCell([h.src]), T, base, comps))
    return out


@dataclass(frozen=True)
class PastingDiagram:
    """Globe dimensions ``n_0, m_1, n_1, ..., m_l, n_l``; the ``m`` are the gluing dimensions."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) % 2 != 1:
            raise ValueError("a pasting diagram alternates globes and gluings")
        for k in range(1, len(self.dims), 2):
            if self.dims[k] > min(self.dims[k - 1], self.dims[k + 1]):
                raise ValueError(f"gluing dimension {self.dims[k]} exceeds a neighbouring globe")

    @property
    def globes(self) -> tuple[int, ...]:
        return self.dims[::2]

    @property
    def gluings(self) -> tuple[int, ...]:
        return self.dims[1::2]


def pasting_diagram_of(T: ThetaCell) -> PastingDiagram:
    if not T:
        return PastingDiagram((0,))
    parts: list[int] = []
    for k, child in enumerate(T):
        if k:
            parts.append(0)
        parts.extend(d + 1 for d in pasting_diagram_of(child).dims)
    return PastingDiagram(tuple(parts))


def shift_S(x):
    """Raise every dimension by one: globes, globe indices, pasting diagrams."""
    if isinstance(x, PastingDiagram):
        return PastingDiagram(tuple(d + 1 for d in x.dims))
    if isinstance(x, ZPastingDiagram):
        return ZPastingDiagram(tuple(d + 1 for d in x.dims))
    if isinstance(x, GlobeObject):
        return GlobeObject(x.n + 1)
    if isinstance(x, ZGlobeObject):
        return ZGlobeObject(x.z + 1)
    if isinstance(x, ThetaCell):
        return ThetaCell([x])
    if isinstance(x, int):
        return x + 1
    raise TypeError(f"cannot shift {type(x).__name__}")


z_shift = shift_S


@dataclass(frozen=True)
class GlobeObject:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("globe dimensions are natural numbers")


@dataclass(frozen=True)
class ZGlobeObject:
    z: int


@dataclass(frozen=True)
class ZPastingDiagram:
    """Integer-dimensional globes glued along integer dimensions."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) % 2 != 1:
            raise ValueError("a pasting diagram alternates globes and gluings")
        for k in range(1, len(self.dims), 2):
            if self.dims[k] > min(self.dims[k - 1], self.dims[k + 1]):
                raise ValueError(f"gluing dimension {self.dims[k]} exceeds a neighbouring globe")


def globe_hom(a, b) -> list[str]:
    """Maps of the globe category: the identity, or the two boundary inclusions ``s`` and ``t``."""
    x = a.n if isinstance(a, GlobeObject) else a.z
    y = b.n if isinstance(b, GlobeObject) else b.z
    if x == y:
        return ["id"]
    return ["s", "t"] if x < y else []


def globe_category(top: int, bottom: int = 0) -> FiniteCategory:
    """Globes ``bottom..top`` with ``s``, ``t`` subject to ``ss = ts`` and ``st = tt``."""
    objs = list(range(bottom, top + 1))
    arrows, ident = {}, {}
    for a in objs:
        ident[a] = ("id", a)
        arrows[("id", a)] = (a, a)
        for b in objs:
            if a < b:
                for e in "st":
                    arrows[(e, a, b)] = (a, b)
    comp = {}
    for f, (a, b) in arrows.items():
        for g, (c, d) in arrows.items():
            if b != c:
                continue
            if f[0] == "id":
                comp[(f, g)] = g
            elif g[0] == "id":
                comp[(f, g)] = f
            else:
                # the first boundary wins: s then anything is s
                comp[(f, g)] = (f[0], a, d)
    return FiniteCategory(objs, arrows, ident, comp)


# ---------------------------------------------------------------------------
# cellular sets


Sort = ThetaCell


class CellularSet:
    """Presheaf on the cells of degree at most ``bound``, with a lazy action.

    ``action(f, x)`` takes ``f: U -> V`` and ``x`` at sort ``V`` to an element at ``U``.
    """

    def __init__(
        self,
        bound: int,
        sorts: Mapping[Sort, Sequence[Hashable]],
        action: Callable,
        memo: bool = True,
        bulk_action: Optional[Callable] = None,
    ):
        self.bound = bound
        self.sorts = {T: list(xs) for T, xs in sorts.items()}
        self.action = action
        self._bulk = bulk_action
        self._memo: Optional[dict] = {} if memo else None
        if not memo:
            self.act = action

    def elements(self, T: Sort) -> list:
        return self.sorts.get(T, [])

    def act(self, f: ThetaMorphism, x):
        key = (f, x)
        y = self._memo.get(key)
        if y is None:
            y = self.action(f, x)
            self._memo[key] = y
        return y

    def act_all(self, f: ThetaMorphism, xs: Sequence) -> list:
        if self._bulk is not None:
            return self._bulk(f, xs)
        act = self.act
        return [act(f, x) for x in xs]

    def validate(self) -> "CellularSet":
        """Identity and composition laws over every composable pair inside the bound."""
        sorts = list(self.sorts)
        for V in sorts:
            members = set(self.elements(V))
            for x in members:
                if self.act(theta_identity(V), x) != x:
                    raise ValueError(f"identity acts non-trivially on {x!r}")
            for U in sorts:
                for f in theta_hom(U, V):
                    for x in members:
                        if self.act(f, x) not in set(self.elements(U)):
                            raise ValueError(f"{f} sends {x!r} outside the sort {U}")
                    for W in sorts:
                        for g in theta_hom(W, U):
                            fg = compose(g, f)
                            for x in members:
                                if self.act(g, self.act(f, x)) != self.act(fg, x):
                                    raise ValueError("action is not functorial")
        return self

    def to_json(self) -> dict:
        index = {T: {x: k for k, x in enumerate(xs)} for T, xs in self.sorts.items()}
        actions = []
        for V in self.sorts:
            for U in self.sorts:
                for f in theta_hom(U, V):
                    actions.append({"map": f.to_json(), "table": [index[U][self.act(f, x)] for x in self.sorts[V]]})
        return {
            "bound": self.bound,
            "sorts": [{"cell": T.to_json(), "elems": [x if isinstance(x, str) else repr(x) for x in xs]} for T, xs in self.sorts.items()],
            "actions": actions,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CellularSet":
        sorts = {ThetaCell.from_json(s["cell"]): list(s["elems"]) for s in data["sorts"]}
        table = {}
        for rec in data.get("actions", []):
            f = ThetaMorphism.from_json(rec["map"])
            if f.tgt not in sorts or f.src not in sorts:
                raise ValueError(f"action on an unknown sort: {f}")
            if len(rec["table"]) != len(sorts[f.tgt]):
                raise ValueError(f"action table for {f} has the wrong length")
            for x, k in zip(sorts[f.tgt], rec["table"]):
                table[(f, x)] = sorts[f.src][k]

        def action(f, x):
            try:
                return table[(f, x)]
            except KeyError:
                raise ValueError(f"no action recorded for {f} on {x!r}") from None

        return cls(int(data["bound"]), sorts, action)


def representable(T: ThetaCell, bound: int, sorts: Optional[Iterable[Sort]] = None) -> CellularSet:
    sorts = list(sorts) if sorts is not None else cells_up_to_degree(bound)
    return CellularSet(bound, {U: theta_hom(U, T) for U in sorts}, lambda f, x: compose(f, x))


def generated_subobject(T: ThetaCell, generators: Sequence[ThetaMorphism], bound: int, sorts=None) -> CellularSet:
    """Union of the images of maps into ``T``, inside the truncated representable."""
    sorts = list(sorts) if sorts is not None else cells_up_to_degree(bound)
    elems = {}
    for U in sorts:
        seen = {}
        for h in generators:
            for u in theta_hom(U, h.src):
                seen.setdefault(compose(u, h), None)
        elems[U] = list(seen)
    return CellularSet(bound, elems, lambda f, x: compose(f, x))


def image(f: ThetaMorphism, bound: int, sorts=None) -> CellularSet:
    return generated_subobject(f.tgt, [f], bound, sorts)


def intersection(X: CellularSet, Y: CellularSet) -> CellularSet:
    sorts = {T: [x for x in X.elements(T) if x in set(Y.elements(T))] for T in X.sorts if T in Y.sorts}
    return CellularSet(min(X.bound, Y.bound), sorts, X.action)


def horn(T: ThetaCell, kappa: ThetaMorphism, bound: Optional[int] = None, sorts=None) -> CellularSet:
    faces = hyperfaces(T)
    if kappa not in faces:
        raise ValueError(f"{kappa} is not a hyperface of {T}")
    bound = reedy_degree(T) if bound is None else bound
    return generated_subobject(T, [h for h in faces if h != kappa], bound, sorts)


def spine(T: ThetaCell, bound: Optional[int] = None, sorts=None) -> CellularSet:
    bound = reedy_degree(T) if bound is None else bound
    return generated_subobject(T, globe_inclusions(T), bound, sorts)


def inner_horns(T: ThetaCell) -> list[ThetaMorphism]:
    return [k for k in hyperfaces(T) if is_inner(k)]


# ---------------------------------------------------------------------------
# nerves and Segal checks


@lru_cache(maxsize=None)
def simplex_morphism(values: tuple[int, ...], n: int) -> ThetaMorphism:
    """The map ``[m] -> [n]`` with the given values, between simplex cells."""
    m = len(values) - 1
    S, T = simplex_cell(m), simplex_cell(n)
    comps = tuple(
        tuple(theta_identity(POINT) for _ in range(values[i - 1] + 1, values[i] + 1)) for i in range(1, m + 1)
    )
    return ThetaMorphism(S, T, tuple(values), comps)


def _string_action(C: FiniteCategory):
    """Action on composable strings, vectorised over a list of strings."""
    tgt = {f: ab[1] for f, ab in C.arrows.items()}
    ident = C.identities
    comp = C._comp

    def bulk(f: ThetaMorphism, xs: Sequence) -> list:
        g = f.base
        steps = tuple(zip(g, g[1:]))
        g0 = g[0]
        out = []
        for start, arrows in xs:
            parts = []
            for lo, hi in steps:
                if lo == hi:
                    parts.append(ident[tgt[arrows[lo - 1]] if lo else start])
                else:
                    h = arrows[lo]
                    for k in range(lo + 1, hi):
                        h = comp[(h, arrows[k])]
                    parts.append(h)
            out.append((tgt[arrows[g0 - 1]] if g0 else start, tuple(parts)))
        return out

    return (lambda f, x: bulk(f, (x,))[0]), bulk


def nerve_of_category(C: FiniteCategory, D: int) -> CellularSet:
    """Composable strings, sorted by length, for lengths up to ``D``."""
    if D < 0:
        raise ValueError("bound must be non-negative")
    sorts = {simplex_cell(0): [(a, ()) for a in C.objects]}
    layer = [(a, ()) for a in C.objects]
    for n in range(1, D + 1):
        nxt = []
        for start, arrows in layer:
            end = C.tgt(arrows[-1]) if arrows else start
            for f in C.arrows_from(end):
                nxt.append((start, arrows + (f,)))
        sorts[simplex_cell(n)] = nxt
        layer = nxt
    # strings are cheap to act on; a memo would cost more than it saves
    action, bulk = _string_action(C)
    return CellularSet(D, sorts, action, memo=False, bulk_action=bulk)


def _edge(i: int, n: int) -> ThetaMorphism:
    return simplex_morphism((i - 1, i), n)


def segal_check(X: CellularSet, D: int) -> bool:
    """``X[n] -> X[1] x_X[0] ... x_X[0] X[1]`` is a bijection for ``2 <= n <= D``."""
    if D < 2:
        raise ValueError("the Segal condition needs a bound of at least 2")
    act = X.act
    edges = X.elements(simplex_cell(1))
    source = simplex_morphism((0,), 1)
    target = simplex_morphism((1,), 1)
    ends = [(act(source, e), act(target, e)) for e in edges]
    for n in range(2, D + 1):
        cells = X.elements(simplex_cell(n))
        spine_maps = [_edge(i, n) for i in range(1, n + 1)]
        spines = list(zip(*[X.act_all(h, cells) for h in spine_maps]))
        if not _injective(spines):
            return False
        # chains of n edges, counted by end vertex
        counts: Counter = Counter()
        for s, t in ends:
            counts[t] += 1
        for _ in range(n - 1):
            nxt: Counter = Counter()
            for s, t in ends:
                if counts[s]:
                    nxt[t] += counts[s]
            counts = nxt
        if sum(counts.values()) != len(cells):
            return False
    return True


@dataclass(frozen=True)
class ReguliEntry:
    """``A -> Theta[T]`` with ``A`` generated by the maps ``generators``."""

    target: ThetaCell
    generators: tuple[ThetaMorphism, ...]
    label: str = ""


def spine_regulus(D: int, sorts: Iterable[Sort]) -> list[ReguliEntry]:
    return [
        ReguliEntry(T, tuple(globe_inclusions(T)), f"spine {T}")
        for T in sorts
        if 2 <= reedy_degree(T) <= D and len(globe_inclusions(T)) > 1
    ]


def inner_horn_regulus(D: int, sorts: Iterable[Sort]) -> list[ReguliEntry]:
    out = []
    for T in sorts:
        if reedy_degree(T) > D:
            continue
        faces = hyperfaces(T)
        for k in faces:
            if is_inner(k):
                out.append(ReguliEntry(T, tuple(h for h in faces if h != k), f"inner horn {T} without {k}"))
    return out


@lru_cache(maxsize=None)
def _overlaps(entry: ReguliEntry, sorts: tuple[Sort, ...]) -> tuple[tuple[int, ThetaMorphism, int, ThetaMorphism], ...]:
    """Agreement conditions between generators, restricted to plus overlaps.

    Generators are monos, so a degenerate overlap is the degeneracy of a plus one.
    """
    rel = []
    for U in sorts:
        hit: dict = {}
        for k, h in enumerate(entry.generators):
            for u in theta_hom(U, h.src):
                a = compose(u, h)
                if not is_plus(a):
                    continue
                hit.setdefault(a, []).append((k, u))
        for a, reps in hit.items():
            k0, u0 = reps[0]
            for k, u in reps[1:]:
                if k != k0:
                    rel.append((k0, u0, k, u))
    return tuple(rel)


def lifting_counts(X: CellularSet, entry: ReguliEntry, D: int) -> Counter:
    """For each map ``A -> X`` the number of extensions ``Theta[T] -> X``."""
    sorts = tuple(S for S in X.sorts if reedy_degree(S) <= min(D, reedy_degree(entry.target)))
    rel = _overlaps(entry, sorts)
    gens = entry.generators
    # each side of each overlap, tabulated over the generator's sort
    sides: dict = {}
    for k0, u0, k1, u1 in rel:
        for k, u in ((k0, u0), (k1, u1)):
            if (k, u) not in sides:
                xs = X.elements(gens[k].src)
                sides[(k, u)] = dict(zip(xs, X.act_all(u, xs)))
    by_last: dict[int, list] = {k: [] for k in range(len(gens))}
    for k0, u0, k1, u1 in rel:
        by_last[max(k0, k1)].append((k0, sides[(k0, u0)], k1, sides[(k1, u1)]))
    top = X.elements(entry.target)
    fillers = Counter(zip(*[X.act_all(h, top) for h in gens]))
    out: Counter = Counter()
    choice: list = []

    def rec(k):
        if k == len(gens):
            t = tuple(choice)
            out[t] = fillers.get(t, 0)
            return
        checks = by_last[k]
        for x in X.elements(gens[k].src):
            choice.append(x)
            if all(left[choice[k0]] == right[choice[k1]] for k0, left, k1, right in checks):
                rec(k + 1)
            choice.pop()

    rec(0)
    return out


def orthogonal_to(X: CellularSet, regulus: Sequence[ReguliEntry], D: int) -> bool:
    """Unique lifting against every member of ``regulus`` whose target lies inside the bound."""
    if D < 2:
        raise ValueError("orthogonality checks need a bound of at least 2")
    for entry in regulus:
        if entry.target not in X.sorts or reedy_degree(entry.target) > D:
            continue
        if any(c != 1 for c in lifting_counts(X, entry, D).values()):
            return False
    return True


@dataclass(frozen=True)
class DuplicateCell:
    """Degeneracy ``values`` of the glued-in copy."""

    values: tuple[int, ...]


def attach_duplicate_filler(X: CellularSet, x, n: int = 2) -> CellularSet:
    """Glue a second ``n``-simplex along the boundary of ``x`` (over simplex sorts)."""
    top = simplex_cell(n)
    if x not in set(X.elements(top)):
        raise ValueError(f"{x!r} is not an element of sort {top}")
    sorts = {}
    for S, xs in X.sorts.items():
        m = len(S)
        new = [DuplicateCell(v) for v in combinations_with_replacement(range(n + 1), m + 1) if set(v) == set(range(n + 1))]
        sorts[S] = list(xs) + new

    def action(f: ThetaMorphism, y):
        if isinstance(y, DuplicateCell):
            v = tuple(y.values[i] for i in f.base)
            if set(v) == set(range(n + 1)):
                return DuplicateCell(v)
            return X.act(simplex_morphism(v, n), x)
        return X.act(f, y)

    return CellularSet(X.bound, sorts, action)
