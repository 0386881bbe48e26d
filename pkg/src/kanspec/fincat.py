"""Finite categories given by explicit composition tables.

Composition is diagrammatic: ``C.then(f, g)`` is "f, then g" and needs
``tgt(f) == src(g)``.  Arrow and object labels are any hashables; JSON
round-trips them as strings.
"""

from __future__ import annotations

from itertools import permutations, product
from typing import Hashable, Iterable, Iterator, Mapping, Optional, Sequence

Obj = Hashable
Arrow = Hashable


class FiniteCategory:
    def __init__(
        self,
        objects: Iterable[Obj],
        arrows: Mapping[Arrow, tuple[Obj, Obj]],
        identities: Mapping[Obj, Arrow],
        compose: Mapping[tuple[Arrow, Arrow], Arrow],
        check: bool = True,
    ):
        self.objects = list(objects)
        self.arrows = dict(arrows)
        self.identities = dict(identities)
        self._comp = dict(compose)
        for f, (a, b) in self.arrows.items():
            # identity laws are implied; tables may omit them
            self._comp.setdefault((self.identities.get(a), f), f)
            self._comp.setdefault((f, self.identities.get(b)), f)
        self._hom: dict[tuple[Obj, Obj], list[Arrow]] = {(a, b): [] for a in self.objects for b in self.objects}
        for f, ab in self.arrows.items():
            if ab not in self._hom:
                raise ValueError(f"arrow {f!r} has endpoints outside the object set")
            self._hom[ab].append(f)
        if check:
            self.validate()

    def validate(self) -> "FiniteCategory":
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate objects")
        for a in self.objects:
            i = self.identities.get(a)
            if i is None or self.arrows.get(i) != (a, a):
                raise ValueError(f"object {a!r} lacks an identity endomorphism")
        for f, (a, b) in self.arrows.items():
            for g in self.arrows_from(b):
                h = self._comp.get((f, g))
                if h is None:
                    raise ValueError(f"composite of {f!r} then {g!r} is undefined")
                if self.arrows.get(h) != (a, self.arrows[g][1]):
                    raise ValueError(f"composite of {f!r} then {g!r} has the wrong type")
        for f in self.arrows:
            for g in self.arrows_from(self.tgt(f)):
                fg = self._comp[(f, g)]
                for h in self.arrows_from(self.tgt(g)):
                    if self._comp[(fg, h)] != self._comp[(f, self._comp[(g, h)])]:
                        raise ValueError(f"associativity fails on {f!r}, {g!r}, {h!r}")
        return self

    def src(self, f: Arrow) -> Obj:
        return self.arrows[f][0]

    def tgt(self, f: Arrow) -> Obj:
        return self.arrows[f][1]

    def hom(self, a: Obj, b: Obj) -> list[Arrow]:
        return self._hom[(a, b)]

    def arrows_from(self, a: Obj) -> list[Arrow]:
        return [f for b in self.objects for f in self._hom[(a, b)]]

    def arrows_to(self, b: Obj) -> list[Arrow]:
        return [f for a in self.objects for f in self._hom[(a, b)]]

    def identity(self, a: Obj) -> Arrow:
        return self.identities[a]

    def then(self, f: Arrow, g: Arrow) -> Arrow:
        try:
            return self._comp[(f, g)]
        except KeyError:
            raise ValueError(f"{f!r} and {g!r} are not composable") from None

    def is_identity(self, f: Arrow) -> bool:
        return self.identities.get(self.src(f)) == f

    def inverse(self, f: Arrow) -> Optional[Arrow]:
        a, b = self.arrows[f]
        for g in self._hom[(b, a)]:
            if self._comp[(f, g)] == self.identities[a] and self._comp[(g, f)] == self.identities[b]:
                return g
        return None

    def is_iso(self, f: Arrow) -> bool:
        return self.inverse(f) is not None

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def composable_pairs(self) -> Iterator[tuple[Arrow, Arrow]]:
        for f in self.arrows:
            for g in self.arrows_from(self.tgt(f)):
                yield f, g

    def __repr__(self):
        return f"FiniteCategory({self.n_objects} objects, {self.n_arrows} arrows)"

    def __eq__(self, other):
        return (
            isinstance(other, FiniteCategory)
            and set(self.objects) == set(other.objects)
            and self.arrows == other.arrows
            and self.identities == other.identities
            and all(other._comp.get(p) == h for p, h in self._comp.items())
            and len(self._comp) == len(other._comp)
        )

    __hash__ = None

    def opposite(self) -> "FiniteCategory":
        return FiniteCategory(
            self.objects,
            {f: (b, a) for f, (a, b) in self.arrows.items()},
            self.identities,
            {(g, f): h for (f, g), h in self._comp.items()},
            check=False,
        )

    def to_json(self) -> dict:
        return {
            "objects": [str(a) for a in self.objects],
            "arrows": [{"name": str(f), "src": str(a), "tgt": str(b)} for f, (a, b) in self.arrows.items()],
            "identities": {str(a): str(i) for a, i in self.identities.items()},
            "compose": [
                [str(f), str(g), str(h)]
                for (f, g), h in self._comp.items()
                if not (self.is_identity(f) or self.is_identity(g))
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteCategory":
        try:
            objects = [str(a) for a in data["objects"]]
            arrows = {str(r["name"]): (str(r["src"]), str(r["tgt"])) for r in data["arrows"]}
            identities = {str(a): str(i) for a, i in data["identities"].items()}
            compose = {(str(f), str(g)): str(h) for f, g, h in data.get("compose", [])}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed category JSON: {exc}") from None
        return cls(objects, arrows, identities, compose)

    def relabel(self) -> "FiniteCategory":
        """Copy with objects ``0..n-1`` and arrows ``0..N-1``."""
        om = {a: k for k, a in enumerate(self.objects)}
        am = {f: k for k, f in enumerate(self.arrows)}
        return FiniteCategory(
            range(len(om)),
            {am[f]: (om[a], om[b]) for f, (a, b) in self.arrows.items()},
            {om[a]: am[i] for a, i in self.identities.items()},
            {(am[f], am[g]): am[h] for (f, g), h in self._comp.items()},
            check=False,
        )


# ---------------------------------------------------------------------------
# small constructors


def terminal() -> FiniteCategory:
    return discrete(["*"])


def discrete(objects: Iterable[Obj]) -> FiniteCategory:
    objs = list(objects)
    return FiniteCategory(objs, {("id", a): (a, a) for a in objs}, {a: ("id", a) for a in objs}, {})


def from_poset(elements: Iterable[Obj], leq) -> FiniteCategory:
    """Thin category with an arrow ``(a, b)`` whenever ``leq(a, b)``."""
    objs = list(elements)
    arrows = {(a, b): (a, b) for a in objs for b in objs if leq(a, b)}
    comp = {((a, b), (b2, c)): (a, c) for (a, b) in arrows for (b2, c) in arrows if b == b2}
    return FiniteCategory(objs, arrows, {a: (a, a) for a in objs}, comp)


def chain(n: int) -> FiniteCategory:
    """The ordinal ``0 -> 1 -> ... -> n-1``."""
    return from_poset(range(n), lambda a, b: a <= b)


def arrow_category() -> FiniteCategory:
    return chain(2)


def free_on_graph(objects: Iterable[Obj], edges: Mapping[Arrow, tuple[Obj, Obj]]) -> FiniteCategory:
    """Free category on an acyclic graph; arrows are edge paths (tuples)."""
    objs = list(objects)
    arrows: dict = {}
    for a in objs:
        arrows[("id", a)] = (a, a)
    frontier = [((e,), ab) for e, ab in edges.items()]
    while frontier:
        nxt = []
        for p, (a, b) in frontier:
            if p in arrows:
                continue
            if len(p) > len(edges):
                raise ValueError("graph has a cycle; the free category is infinite")
            arrows[p] = (a, b)
            for e, (c, d) in edges.items():
                if c == b:
                    nxt.append((p + (e,), (a, d)))
        frontier = nxt
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
                comp[(f, g)] = f + g
    return FiniteCategory(objs, arrows, {a: ("id", a) for a in objs}, comp)


def parallel_pair() -> FiniteCategory:
    return free_on_graph([0, 1], {"s": (0, 1), "t": (0, 1)})


def walking_iso() -> FiniteCategory:
    """Two objects and an invertible arrow between them (the free-standing isomorphism)."""
    return from_poset([0, 1], lambda a, b: True)


def monoid(table: Sequence[Sequence[int]]) -> FiniteCategory:
    """One-object category with ``then(f, g) = table[f][g]``; element ``0`` is the unit."""
    n = len(table)
    return FiniteCategory(["*"], {f: ("*", "*") for f in range(n)}, {"*": 0}, {(f, g): table[f][g] for f in range(n) for g in range(n)})


def product_category(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    return FiniteCategory(
        [(a, b) for a in C.objects for b in D.objects],
        {(f, g): ((C.src(f), D.src(g)), (C.tgt(f), D.tgt(g))) for f in C.arrows for g in D.arrows},
        {(a, b): (C.identity(a), D.identity(b)) for a in C.objects for b in D.objects},
        {((f, g), (f2, g2)): (C.then(f, f2), D.then(g, g2)) for f, f2 in C.composable_pairs() for g, g2 in D.composable_pairs()},
        check=False,
    )


# ---------------------------------------------------------------------------
# functors and natural transformations


class FiniteFunctor:
    def __init__(self, source: FiniteCategory, target: FiniteCategory, on_objects: Mapping, on_arrows: Mapping, check=True):
        self.source = source
        self.target = target
        self.on_objects = dict(on_objects)
        self.on_arrows = dict(on_arrows)
        if check:
            self.validate()

    def validate(self) -> "FiniteFunctor":
        S, T, F = self.source, self.target, self.on_arrows
        for a in S.objects:
            if a not in self.on_objects or self.on_objects[a] not in T.identities:
                raise ValueError(f"object {a!r} is not sent to an object")
            if F.get(S.identity(a)) != T.identity(self.on_objects[a]):
                raise ValueError(f"identity of {a!r} is not preserved")
        for f, (a, b) in S.arrows.items():
            if f not in F or T.arrows.get(F[f]) != (self.on_objects[a], self.on_objects[b]):
                raise ValueError(f"arrow {f!r} is sent to an arrow of the wrong type")
        for f, g in S.composable_pairs():
            if F[S.then(f, g)] != T.then(F[f], F[g]):
                raise ValueError(f"composition {f!r} then {g!r} is not preserved")
        return self

    def obj(self, a):
        return self.on_objects[a]

    def __call__(self, f):
        return self.on_arrows[f]

    def then(self, other: "FiniteFunctor") -> "FiniteFunctor":
        return FiniteFunctor(
            self.source,
            other.target,
            {a: other.on_objects[b] for a, b in self.on_objects.items()},
            {f: other.on_arrows[g] for f, g in self.on_arrows.items()},
            check=False,
        )

    def key(self) -> tuple:
        return tuple(self.on_objects[a] for a in self.source.objects) + tuple(self.on_arrows[f] for f in self.source.arrows)

    def __eq__(self, other):
        return isinstance(other, FiniteFunctor) and self.on_objects == other.on_objects and self.on_arrows == other.on_arrows

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FiniteFunctor({self.on_objects})"

    def to_json(self) -> dict:
        S = self.source
        return {
            "objects": {str(a): str(b) for a, b in self.on_objects.items()},
            "arrows": {str(f): str(g) for f, g in self.on_arrows.items() if not S.is_identity(f)},
        }

    @classmethod
    def from_json(cls, data: Mapping, source: FiniteCategory, target: FiniteCategory) -> "FiniteFunctor":
        """Identity arrows may be omitted; they are sent to identities.

        Names are matched against ``str`` of the categories' own labels.
        """
        def lookup(names, kind):
            table = {str(x): x for x in names}

            def get(name):
                try:
                    return table[str(name)]
                except KeyError:
                    raise ValueError(f"unknown {kind} {name!r}") from None

            return get

        s_obj, t_obj = lookup(source.objects, "source object"), lookup(target.objects, "target object")
        s_arr, t_arr = lookup(source.arrows, "source arrow"), lookup(target.arrows, "target arrow")
        try:
            om = {s_obj(a): t_obj(b) for a, b in data["objects"].items()}
            am = {s_arr(f): t_arr(g) for f, g in data.get("arrows", {}).items()}
        except (KeyError, AttributeError) as exc:
            raise ValueError(f"malformed functor JSON: {exc}") from None
        for a in source.objects:
            if a in om:
                am.setdefault(source.identity(a), target.identity(om[a]))
        return cls(source, target, om, am)


def identity_functor(C: FiniteCategory) -> FiniteFunctor:
    return FiniteFunctor(C, C, {a: a for a in C.objects}, {f: f for f in C.arrows}, check=False)


def constant_functor(C: FiniteCategory, D: FiniteCategory, d: Obj) -> FiniteFunctor:
    return FiniteFunctor(C, D, {a: d for a in C.objects}, {f: D.identity(d) for f in C.arrows}, check=False)


class FiniteNatTrans:
    def __init__(self, source: FiniteFunctor, target: FiniteFunctor, components: Mapping, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        if check:
            self.validate()

    def validate(self) -> "FiniteNatTrans":
        C, D = self.source.source, self.source.target
        for a in C.objects:
            if D.arrows.get(self.components.get(a)) != (self.source.obj(a), self.target.obj(a)):
                raise ValueError(f"component at {a!r} has the wrong type")
        for f, (a, b) in C.arrows.items():
            if D.then(self.source(f), self.components[b]) != D.then(self.components[a], self.target(f)):
                raise ValueError(f"naturality fails at {f!r}")
        return self

    def __getitem__(self, a):
        return self.components[a]


def _generator_arrows(C: FiniteCategory) -> list[Arrow]:
    """Non-identity arrows that are not composites of two non-identity arrows."""
    composite = set()
    for f, g in C.composable_pairs():
        if not (C.is_identity(f) or C.is_identity(g)):
            composite.add(C.then(f, g))
    gens = [f for f in C.arrows if not C.is_identity(f) and f not in composite]
    # cyclic factorisations (e.g. idempotents, groups) leave nothing; fall back to all arrows
    reach = set(C.identities.values()) | set(gens)
    changed = True
    while changed:
        changed = False
        for f, g in C.composable_pairs():
            if f in reach and g in reach and C.then(f, g) not in reach:
                reach.add(C.then(f, g))
                changed = True
    if len(reach) != C.n_arrows:
        return [f for f in C.arrows if not C.is_identity(f)]
    return gens


def functors(C: FiniteCategory, D: FiniteCategory) -> Iterator[FiniteFunctor]:
    """All functors ``C -> D`` by backtracking over the objects then the arrows of ``C``."""
    objs = C.objects
    arrows = [f for f in C.arrows if not C.is_identity(f)]
    pos = {f: k for k, f in enumerate(arrows)}
    # each composite is checked once, when the last of its three arrows is placed
    checks: list[list] = [[] for _ in arrows]
    for g, h in C.composable_pairs():
        gh = C.then(g, h)
        last = max(pos.get(g, -1), pos.get(h, -1), pos.get(gh, -1))
        if last >= 0:
            checks[last].append((g, h, gh))
    Dcomp = D._comp

    def assign_arrows(om, k, am):
        if k == len(arrows):
            yield FiniteFunctor(C, D, om, dict(am), check=False)
            return
        f = arrows[k]
        a, b = C.arrows[f]
        for x in D.hom(om[a], om[b]):
            am[f] = x
            if all(Dcomp[(am[g], am[h])] == am[gh] for g, h, gh in checks[k]):
                yield from assign_arrows(om, k + 1, am)
        am.pop(f, None)

    for images in product(D.objects, repeat=len(objs)):
        om = dict(zip(objs, images))
        am = {C.identity(a): D.identity(om[a]) for a in objs}
        yield from assign_arrows(om, 0, am)


def natural_transformations(F: FiniteFunctor, G: FiniteFunctor) -> Iterator[FiniteNatTrans]:
    C, D = F.source, F.target
    objs = C.objects
    choices = [D.hom(F.obj(a), G.obj(a)) for a in objs]

    def rec(k, comp):
        if k == len(objs):
            yield FiniteNatTrans(F, G, comp, check=False)
            return
        a = objs[k]
        for x in choices[k]:
            comp[a] = x
            ok = True
            for f in C.arrows:
                s, t = C.arrows[f]
                if s in comp and t in comp and (s == a or t == a):
                    if D.then(F(f), comp[t]) != D.then(comp[s], G(f)):
                        ok = False
                        break
            if ok:
                yield from rec(k + 1, comp)
            del comp[a]

    yield from rec(0, {})


def functor_category(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    """``[C, D]``: objects are functors, arrows natural transformations."""
    objs = list(functors(C, D))
    keys = [F.key() for F in objs]
    arrows, identities, data = {}, {}, {}
    for F, kF in zip(objs, keys):
        for G, kG in zip(objs, keys):
            for alpha in natural_transformations(F, G):
                name = (kF, kG, tuple(alpha[a] for a in C.objects))
                arrows[name] = (kF, kG)
                data[name] = alpha
        identities[kF] = (kF, kF, tuple(D.identity(F.obj(a)) for a in C.objects))
    comp = {}
    for f, (a, b) in arrows.items():
        for g, (b2, c) in arrows.items():
            if b == b2:
                comp[(f, g)] = (a, c, tuple(D.then(x, y) for x, y in zip(f[2], g[2])))
    cat = FiniteCategory(keys, arrows, identities, comp, check=False)
    cat.functor_of = dict(zip(keys, objs))
    return cat


# ---------------------------------------------------------------------------
# isomorphism and equivalence


def _object_signature(C: FiniteCategory, a) -> tuple:
    out = sorted(len(C.hom(a, b)) for b in C.objects)
    inn = sorted(len(C.hom(b, a)) for b in C.objects)
    endo = C.hom(a, a)
    isos = sum(1 for f in endo if C.is_iso(f))
    return (len(endo), isos, tuple(out), tuple(inn))


def _arrow_tables(C: FiniteCategory):
    after: dict = {f: [] for f in C.arrows}  # f -> [(g, f then g)]
    before: dict = {f: [] for f in C.arrows}  # f -> [(g, g then f)]
    factors: dict = {f: [] for f in C.arrows}  # h -> [(f, g)] with f then g == h
    for f, g in C.composable_pairs():
        h = C._comp[(f, g)]
        after[f].append((g, h))
        before[g].append((f, h))
        if not (C.is_identity(f) or C.is_identity(g)):
            factors[h].append((f, g))
    return after, before, factors


def _arrow_signature(C: FiniteCategory, f, factors) -> tuple:
    return (C.is_identity(f), C.is_iso(f), len(factors[f]))


def find_isomorphism(C: FiniteCategory, D: FiniteCategory) -> Optional[FiniteFunctor]:
    """An isomorphism of categories ``C -> D``, or ``None``."""
    if C.n_objects != D.n_objects or C.n_arrows != D.n_arrows:
        return None
    sigC = {a: _object_signature(C, a) for a in C.objects}
    sigD = {b: _object_signature(D, b) for b in D.objects}
    if sorted(map(repr, sigC.values())) != sorted(map(repr, sigD.values())):
        return None
    afterC, beforeC, factorsC = _arrow_tables(C)
    _, _, factorsD = _arrow_tables(D)
    asigC = {f: _arrow_signature(C, f, factorsC) for f in C.arrows}
    asigD = {x: _arrow_signature(D, x, factorsD) for x in D.arrows}
    if sorted(map(repr, asigC.values())) != sorted(map(repr, asigD.values())):
        return None
    order = sorted(C.objects, key=lambda a: (-len(C.hom(a, a)), repr(sigC[a])))
    Dcomp = D._comp

    def match_arrows(om):
        am = {C.identity(a): D.identity(om[a]) for a in C.objects}
        used = set(am.values())
        todo = [f for ab in C._hom for f in C._hom[ab] if not C.is_identity(f)]
        todo.sort(key=lambda f: len(D.hom(om[C.src(f)], om[C.tgt(f)])))

        def consistent(f, x):
            # called with am[f] = x already set, so self-composites are seen
            for g, h in afterC[f]:
                if g in am and h in am and Dcomp[(x, am[g])] != am[h]:
                    return False
            for g, h in beforeC[f]:
                if g in am and h in am and Dcomp[(am[g], x)] != am[h]:
                    return False
            for g, h in factorsC[f]:
                if g in am and h in am and Dcomp[(am[g], am[h])] != x:
                    return False
            return True

        def rec(k):
            if k == len(todo):
                return True
            f = todo[k]
            a, b = C.arrows[f]
            for x in D.hom(om[a], om[b]):
                if x in used or asigD[x] != asigC[f]:
                    continue
                am[f] = x
                if not consistent(f, x):
                    del am[f]
                    continue
                used.add(x)
                if rec(k + 1):
                    return True
                used.discard(x)
                del am[f]
            return False

        return dict(am) if rec(0) else None

    def rec_obj(k, om, usedD):
        if k == len(order):
            am = match_arrows(om)
            return FiniteFunctor(C, D, om, am, check=False) if am is not None else None
        a = order[k]
        for b in D.objects:
            if b in usedD or sigD[b] != sigC[a]:
                continue
            if any(len(C.hom(a, c)) != len(D.hom(b, om[c])) or len(C.hom(c, a)) != len(D.hom(om[c], b)) for c in om):
                continue
            om[a] = b
            usedD.add(b)
            found = rec_obj(k + 1, om, usedD)
            if found is not None:
                return found
            usedD.discard(b)
            del om[a]
        return None

    return rec_obj(0, {}, set())


def isomorphic(C: FiniteCategory, D: FiniteCategory) -> bool:
    return find_isomorphism(C, D) is not None


def skeleton(C: FiniteCategory) -> FiniteCategory:
    """Full subcategory on one representative per isomorphism class of objects."""
    reps = []
    for a in C.objects:
        if not any(any(C.is_iso(f) for f in C.hom(a, r)) for r in reps):
            reps.append(a)
    keep = {f for f in C.arrows if C.src(f) in reps and C.tgt(f) in reps}
    return FiniteCategory(
        reps,
        {f: C.arrows[f] for f in keep},
        {a: C.identity(a) for a in reps},
        {(f, g): C.then(f, g) for f, g in C.composable_pairs() if f in keep and g in keep},
        check=False,
    )


def equivalent(C: FiniteCategory, D: FiniteCategory) -> bool:
    """Equivalence of categories, decided by isomorphism of skeleta."""
    return isomorphic(skeleton(C), skeleton(D))


# ---------------------------------------------------------------------------
# enumeration up to isomorphism

_NA = -2  # non-composable pair
_U = -1  # undecided composite


def _canonical_hom_matrices(k: int, max_arrows: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    entries = [(a, b) for a in range(k) for b in range(k)]
    seen = set()

    def rec(i, left, H):
        if i == len(entries):
            M = tuple(tuple(H[a * k + b] for b in range(k)) for a in range(k))
            best = min(tuple(tuple(M[p[a]][p[b]] for b in range(k)) for a in range(k)) for p in permutations(range(k)))
            if best not in seen:
                seen.add(best)
                yield best
            return
        a, b = entries[i]
        lo = 1 if a == b else 0
        for v in range(lo, left + 1):
            H.append(v)
            yield from rec(i + 1, left - v, H)
            H.pop()

    yield from rec(0, max_arrows, [])


def _tables(k: int, H: tuple[tuple[int, ...], ...]) -> Iterator[tuple[list[tuple[int, int]], list[list[int]]]]:
    """Composition tables for hom-size matrix ``H``, one per isomorphism class (lex-leader pruning)."""
    arrows: list[tuple[int, int]] = [(a, a) for a in range(k)]
    homs: dict[tuple[int, int], list[int]] = {(a, b): [] for a in range(k) for b in range(k)}
    for a in range(k):
        homs[(a, a)].append(a)
    for a in range(k):
        for b in range(k):
            for _ in range(H[a][b] - (1 if a == b else 0)):
                homs[(a, b)].append(len(arrows))
                arrows.append((a, b))
    N = len(arrows)
    T = [[_NA] * N for _ in range(N)]
    for f, (a, b) in enumerate(arrows):
        for g, (c, d) in enumerate(arrows):
            if b == c:
                T[f][g] = g if f < k else (f if g < k else _U)
    cells = [(f, g) for f in range(k, N) for g in range(k, N) if T[f][g] == _U]

    group = []
    for pi in permutations(range(k)):
        if any(H[pi[a]][pi[b]] != H[a][b] for a in range(k) for b in range(k)):
            continue
        blocks = [(ab, [f for f in homs[ab] if f >= k]) for ab in homs]
        per_block = [list(permutations([g for g in homs[(pi[ab[0]], pi[ab[1]])] if g >= k])) for ab, _ in blocks]
        for choice in product(*per_block):
            p = list(range(N))
            for a in range(k):
                p[a] = pi[a]
            for (ab, src), img in zip(blocks, choice):
                for f, g in zip(src, img):
                    p[f] = g
            if p == list(range(N)):
                continue
            q = [0] * N
            for i, v in enumerate(p):
                q[v] = i
            group.append((p, q))

    def canon_ok():
        for p, q in group:
            for f, g in cells:
                t = T[f][g]
                s = T[q[f]][q[g]]
                if t == _U or s == _U:
                    break
                s = p[s]
                if s < t:
                    return False
                if s > t:
                    break
        return True

    def known(x):
        return x >= 0

    def assign(f, g, v, trail):
        stack = [(f, g, v)]
        while stack:
            a, b, v = stack.pop()
            cur = T[a][b]
            if cur == _NA:
                return False
            if cur != _U:
                if cur != v:
                    return False
                continue
            T[a][b] = v
            trail.append((a, b))
            # (a b) z = a (b z)
            for z in range(N):
                bz = T[b][z]
                if known(bz):
                    r = T[a][bz]
                    if known(r):
                        stack.append((v, z, r))
                    l_ = T[v][z]
                    if known(l_):
                        stack.append((a, bz, l_))
            # (x a) b = x (a b)
            for x in range(N):
                xa = T[x][a]
                if known(xa):
                    r = T[x][v]
                    if known(r):
                        stack.append((xa, b, r))
                    l_ = T[xa][b]
                    if known(l_):
                        stack.append((x, v, l_))
            # a = x y: (x y) b = x (y b)
            for x in range(N):
                for y in range(N):
                    if T[x][y] == a:
                        yb = T[y][b]
                        if known(yb):
                            stack.append((x, yb, v))
            # b = y z: a (y z) = (a y) z
            for y in range(N):
                for z in range(N):
                    if T[y][z] == b:
                        ay = T[a][y]
                        if known(ay):
                            stack.append((ay, z, v))
        return True

    def rec():
        if not canon_ok():
            return
        for f, g in cells:
            if T[f][g] == _U:
                break
        else:
            yield arrows, [row[:] for row in T]
            return
        a, b = arrows[f][0], arrows[g][1]
        for v in homs[(a, b)]:
            trail: list = []
            if assign(f, g, v, trail):
                yield from rec()
            for x, y in trail:
                T[x][y] = _U

    yield from rec()


def enumerate_categories(max_objects: int, max_arrows: int, min_objects: int = 1) -> Iterator[FiniteCategory]:
    """Every category with ``min_objects..max_objects`` objects and at most ``max_arrows`` arrows, once per isomorphism class."""
    for k in range(min_objects, max_objects + 1):
        for H in _canonical_hom_matrices(k, max_arrows):
            for arrows, T in _tables(k, H):
                N = len(arrows)
                yield FiniteCategory(
                    range(k),
                    {f: arrows[f] for f in range(N)},
                    {a: a for a in range(k)},
                    {(f, g): T[f][g] for f in range(N) for g in range(N) if T[f][g] >= 0},
                    check=False,
                )
