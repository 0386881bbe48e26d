"""Limits of diagrams of finite categories: strict, oplax, weighted, and comma limits.

A diagram ``X: J -> Cat`` assigns a finite category to each object of ``J``
and a functor to each arrow.  All limit categories are built by exhaustive
enumeration, so every construction here is exact at finite scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence

from .fincat import (
    FiniteCategory,
    FiniteFunctor,
    FiniteNatTrans,
    chain,
    discrete,
    equivalent,
    find_isomorphism,
    from_poset,
    functors,
    identity_functor,
    natural_transformations,
    parallel_pair,
    terminal,
    walking_iso,
)

__all__ = [
    "FiniteCategory",
    "FiniteFunctor",
    "FiniteNatTrans",
    "Diagram",
    "Weight",
    "strict_limit",
    "oplax_limit_explicit",
    "lax_limit_explicit",
    "pseudo_limit",
    "weighted_limit",
    "oplax_weight",
    "terminal_weight",
    "slice_category",
    "limit_of",
    "colimit_of",
    "is_final",
    "is_iso_fibration",
    "check_spectrification_hypotheses",
    "comma_category",
    "comma_limit_check",
    "compare_categories",
    "constant_diagram",
    "fibrancy_report",
    "fibrancy_counterexample",
    "sp_adjunction_check",
    "random_diagram",
    "random_comma_instance",
    "HypothesisReport",
    "CommaReport",
]


class Diagram:
    """A functor ``J -> Cat`` with finite values."""

    def __init__(self, J: FiniteCategory, values: Mapping, functors_: Mapping, check: bool = True):
        self.J = J
        self.values = dict(values)
        self.functors = dict(functors_)
        if check:
            self.validate()

    def validate(self) -> "Diagram":
        J = self.J
        for j in J.objects:
            if j not in self.values:
                raise ValueError(f"no category at {j!r}")
        for f, (i, j) in J.arrows.items():
            F = self.functors.get(f)
            if F is None:
                if J.is_identity(f):
                    self.functors[f] = identity_functor(self.values[i])
                    continue
                raise ValueError(f"no functor for arrow {f!r}")
            if F.source is not self.values[i] and F.source != self.values[i]:
                raise ValueError(f"functor for {f!r} has the wrong source")
            if F.target is not self.values[j] and F.target != self.values[j]:
                raise ValueError(f"functor for {f!r} has the wrong target")
        for j in J.objects:
            if self.functors[J.identity(j)] != identity_functor(self.values[j]):
                raise ValueError(f"identity at {j!r} is not sent to the identity functor")
        for f, g in J.composable_pairs():
            if self.functors[J.then(f, g)] != self.functors[f].then(self.functors[g]):
                raise ValueError(f"composite {f!r} then {g!r} is not preserved")
        return self

    def __getitem__(self, j) -> FiniteCategory:
        return self.values[j]

    def fmap(self, f) -> FiniteFunctor:
        return self.functors[f]

    def opposite(self) -> "Diagram":
        """Pointwise opposite categories, same functors."""
        ops = {j: C.opposite() for j, C in self.values.items()}
        fs = {
            f: FiniteFunctor(ops[self.J.src(f)], ops[self.J.tgt(f)], F.on_objects, F.on_arrows, check=False)
            for f, F in self.functors.items()
        }
        return Diagram(self.J, ops, fs, check=False)

    def to_json(self) -> dict:
        return {
            "shape": self.J.to_json(),
            "values": {str(j): C.to_json() for j, C in self.values.items()},
            "functors": {str(f): F.to_json() for f, F in self.functors.items() if not self.J.is_identity(f)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Diagram":
        try:
            J = FiniteCategory.from_json(data["shape"])
            values = {str(j): FiniteCategory.from_json(c) for j, c in data["values"].items()}
            raw = data.get("functors", {})
        except (KeyError, AttributeError, TypeError) as exc:
            raise ValueError(f"malformed diagram JSON: missing {exc}") from None
        missing = [j for j in J.objects if j not in values]
        if missing:
            raise ValueError(f"diagram has no value at objects {missing}")
        fs = {}
        for f, (i, j) in J.arrows.items():
            if f in raw:
                fs[f] = FiniteFunctor.from_json(raw[f], values[i], values[j])
            elif not J.is_identity(f):
                raise ValueError(f"diagram has no functor for arrow {f!r}")
        return cls(J, values, fs)

    def __repr__(self):
        return f"Diagram(J={self.J}, values={ {j: (C.n_objects, C.n_arrows) for j, C in self.values.items()} })"


Weight = Diagram


def constant_diagram(J: FiniteCategory, C: FiniteCategory) -> Diagram:
    return Diagram(J, {j: C for j in J.objects}, {f: identity_functor(C) for f in J.arrows})


def terminal_weight(J: FiniteCategory) -> Weight:
    return constant_diagram(J, terminal())


# ---------------------------------------------------------------------------
# strict and oplax limits


def _nonidentity(J: FiniteCategory) -> list:
    return [f for f in J.arrows if not J.is_identity(f)]


def strict_limit(X: Diagram) -> FiniteCategory:
    """Families ``x_j`` with ``X_f(x_i) = x_j``; arrows likewise."""
    J = X.J
    objs = J.objects
    arrows = _nonidentity(J)

    def families(choices, apply):
        out = []

        def rec(k, fam):
            if k == len(objs):
                out.append(tuple(fam[j] for j in objs))
                return
            j = objs[k]
            for x in choices(j, fam):
                fam[j] = x
                if all(apply(f, fam[J.src(f)]) == fam[J.tgt(f)] for f in arrows if J.src(f) in fam and J.tgt(f) in fam):
                    rec(k + 1, fam)
                del fam[j]

        rec(0, {})
        return out

    obs = families(lambda j, fam: X[j].objects, lambda f, x: X.fmap(f).obj(x))
    index = {j: n for n, j in enumerate(objs)}
    arrs = {}
    for a in obs:
        for b in obs:
            for alpha in families(
                lambda j, fam: X[j].hom(a[index[j]], b[index[j]]), lambda f, x: X.fmap(f)(x)
            ):
                arrs[(a, b, alpha)] = (a, b)
    return _assemble(J, X, obs, arrs, lambda a: tuple(X[j].identity(a[index[j]]) for j in objs))


def _assemble(J, X, obs, arrs, ident_components) -> FiniteCategory:
    objs = J.objects
    identities = {a: (a, a, ident_components(a)) for a in obs}
    by_src: dict = {}
    for f in arrs:
        by_src.setdefault(f[0], []).append(f)
    comp = {}
    for f in arrs:
        for g in by_src.get(f[1], []):
            comp[(f, g)] = (f[0], g[1], tuple(X[j].then(x, y) for j, x, y in zip(objs, f[2], g[2])))
    return FiniteCategory(obs, arrs, identities, comp, check=False)


def oplax_limit_explicit(X: Diagram) -> FiniteCategory:
    """Oplax cones ``(x_j, phi_f: x_j -> X_f(x_i))`` with ``phi_id = id`` and
    ``phi_(f then g) = phi_g then X_g(phi_f)``."""
    J = X.J
    objs = J.objects
    arrows = _nonidentity(J)
    pairs = [(f, g) for f, g in J.composable_pairs() if not (J.is_identity(f) or J.is_identity(g))]
    idx = {j: n for n, j in enumerate(objs)}

    def phis(xs):
        out = []
        fam: dict = {}

        def law(f, g):
            h = J.then(f, g)
            left = fam[h] if not J.is_identity(h) else X[J.tgt(g)].identity(xs[idx[J.tgt(g)]])
            right = X[J.tgt(g)].then(fam[g], X.fmap(g)(fam[f]))
            return left == right

        def rec(k):
            if k == len(arrows):
                out.append(tuple(fam[f] for f in arrows))
                return
            f = arrows[k]
            i, j = J.arrows[f]
            target = X.fmap(f).obj(xs[idx[i]])
            for p in X[j].hom(xs[idx[j]], target):
                fam[f] = p
                ok = all(
                    law(g, h)
                    for g, h in pairs
                    if g in fam and h in fam and (J.is_identity(J.then(g, h)) or J.then(g, h) in fam)
                )
                if ok:
                    rec(k + 1)
                del fam[f]

        rec(0)
        return out

    obs = []
    for xs in product(*(X[j].objects for j in objs)):
        for ph in phis(xs):
            obs.append((xs, ph))
    arrs = {}
    for a in obs:
        for b in obs:
            (xa, pa), (xb, pb) = a, b
            for alpha in product(*(X[j].hom(xa[idx[j]], xb[idx[j]]) for j in objs)):
                ok = True
                for k, f in enumerate(arrows):
                    i, j = J.arrows[f]
                    left = X[j].then(alpha[idx[j]], pb[k])
                    right = X[j].then(pa[k], X.fmap(f)(alpha[idx[i]]))
                    if left != right:
                        ok = False
                        break
                if ok:
                    arrs[(a, b, alpha)] = (a, b)
    return _assemble(J, X, obs, arrs, lambda a: tuple(X[j].identity(a[0][idx[j]]) for j in objs))


def lax_limit_explicit(X: Diagram) -> FiniteCategory:
    """The dual call: oplax limit of the pointwise opposite, then opposite."""
    return oplax_limit_explicit(X.opposite()).opposite()


def pseudo_limit(X: Diagram) -> tuple[FiniteCategory, "HypothesisReport"]:
    """Strict limit together with the fibrancy report that licenses reading it as a pseudo-limit."""
    return strict_limit(X), fibrancy_report(X)


# ---------------------------------------------------------------------------
# weights and weighted limits


def slice_category(J: FiniteCategory, j) -> FiniteCategory:
    """``J/j``: objects are arrows into ``j``; arrows ``u`` with ``u then f' = f``."""
    obs = J.arrows_to(j)
    arrs = {}
    for f in obs:
        for g in obs:
            for u in J.hom(J.src(f), J.src(g)):
                if J.then(u, g) == f:
                    arrs[(f, g, u)] = (f, g)
    comp = {((f, g, u), (g2, h, v)): (f, h, J.then(u, v)) for (f, g, u) in arrs for (g2, h, v) in arrs if g == g2}
    return FiniteCategory(obs, arrs, {f: (f, f, J.identity(J.src(f))) for f in obs}, comp, check=False)


def oplax_weight(J: FiniteCategory) -> Weight:
    """``j |-> (J/j)^op``, functorial by post-composition."""
    values = {j: slice_category(J, j).opposite() for j in J.objects}
    fs = {}
    for g, (j, k) in J.arrows.items():
        S, T = values[j], values[k]
        on_obj = {f: J.then(f, g) for f in S.objects}
        on_arr = {(f, f2, u): (J.then(f, g), J.then(f2, g), u) for (f, f2, u) in S.arrows}
        fs[g] = FiniteFunctor(S, T, on_obj, on_arr)
    return Diagram(J, values, fs)


def weighted_limit(W: Weight, X: Diagram) -> FiniteCategory:
    """Natural families ``F_j: W_j -> X_j`` (the equalizer of the two restriction
    maps out of the product of functor categories), with modifications as arrows."""
    if W.J is not X.J and W.J != X.J:
        raise ValueError("weight and diagram have different shapes")
    J = X.J
    objs = J.objects
    arrows = _nonidentity(J)
    funs = {j: list(functors(W[j], X[j])) for j in objs}

    def natural(f, Fi, Fj):
        Wf, Xf = W.fmap(f), X.fmap(f)
        if any(Fj.obj(Wf.obj(w)) != Xf.obj(Fi.obj(w)) for w in W[J.src(f)].objects):
            return False
        return all(Fj(Wf(u)) == Xf(Fi(u)) for u in W[J.src(f)].arrows)

    obs: list = []

    def rec(k, fam):
        if k == len(objs):
            obs.append(tuple(fam[j] for j in objs))
            return
        j = objs[k]
        for F in funs[j]:
            fam[j] = F
            if all(natural(f, fam[J.src(f)], fam[J.tgt(f)]) for f in arrows if J.src(f) in fam and J.tgt(f) in fam):
                rec(k + 1, fam)
            del fam[j]

    rec(0, {})
    keys = {o: tuple(F.key() for F in o) for o in obs}
    idx = {j: n for n, j in enumerate(objs)}
    arrs = {}
    data = {}
    for a in obs:
        for b in obs:
            for thetas in product(*(list(natural_transformations(a[idx[j]], b[idx[j]])) for j in objs)):
                ok = True
                for f in arrows:
                    i, j = J.arrows[f]
                    Wf, Xf = W.fmap(f), X.fmap(f)
                    ti, tj = thetas[idx[i]], thetas[idx[j]]
                    if any(tj[Wf.obj(w)] != Xf(ti[w]) for w in W[i].objects):
                        ok = False
                        break
                if ok:
                    name = (keys[a], keys[b], tuple(tuple(t[w] for w in W[j].objects) for j, t in zip(objs, thetas)))
                    arrs[name] = (keys[a], keys[b])
                    data[name] = thetas
    identities = {
        keys[a]: (keys[a], keys[a], tuple(tuple(X[j].identity(F.obj(w)) for w in W[j].objects) for j, F in zip(objs, a)))
        for a in obs
    }
    by_src: dict = {}
    for name in arrs:
        by_src.setdefault(name[0], []).append(name)
    comp = {}
    for f in arrs:
        for g in by_src.get(f[1], []):
            comps = tuple(
                tuple(X[j].then(x, y) for x, y in zip(cf, cg)) for j, cf, cg in zip(objs, f[2], g[2])
            )
            comp[(f, g)] = (f[0], g[1], comps)
    cat = FiniteCategory([keys[a] for a in obs], arrs, identities, comp, check=False)
    cat.families = {keys[a]: a for a in obs}
    return cat


@dataclass
class Comparison:
    isomorphic: bool
    equivalent: bool
    certificate: Optional[FiniteFunctor] = None

    @property
    def ok(self) -> bool:
        return self.isomorphic or self.equivalent


def compare_categories(A: FiniteCategory, B: FiniteCategory) -> Comparison:
    """Isomorphism by search, falling back to equivalence of skeleta."""
    iso = find_isomorphism(A, B)
    if iso is not None:
        return Comparison(True, True, iso)
    return Comparison(False, equivalent(A, B))


# ---------------------------------------------------------------------------
# limits inside one finite category


def cones(D: FiniteFunctor, apex) -> list[dict]:
    """Natural families ``apex -> D(i)``."""
    I, C = D.source, D.target
    objs = I.objects
    out = []

    def rec(k, legs):
        if k == len(objs):
            out.append(dict(legs))
            return
        i = objs[k]
        for p in C.hom(apex, D.obj(i)):
            legs[i] = p
            if all(
                C.then(legs[I.src(f)], D(f)) == legs[I.tgt(f)]
                for f in I.arrows
                if I.src(f) in legs and I.tgt(f) in legs
            ):
                rec(k + 1, legs)
            del legs[i]

    rec(0, {})
    return out


def is_limit_cone(D: FiniteFunctor, apex, legs: Mapping) -> bool:
    C = D.target
    for c in C.objects:
        for other in cones(D, c):
            factor = [u for u in C.hom(c, apex) if all(C.then(u, legs[i]) == other[i] for i in D.source.objects)]
            if len(factor) != 1:
                return False
    return True


def limit_of(D: FiniteFunctor) -> Optional[tuple]:
    """A limit ``(apex, legs)`` of ``D``, or ``None``."""
    for c in D.target.objects:
        for legs in cones(D, c):
            if is_limit_cone(D, c, legs):
                return c, legs
    return None


def _op_functor(F: FiniteFunctor) -> FiniteFunctor:
    return FiniteFunctor(F.source.opposite(), F.target.opposite(), F.on_objects, F.on_arrows, check=False)


def colimit_of(D: FiniteFunctor) -> Optional[tuple]:
    """A colimit ``(apex, legs)``; legs run ``D(i) -> apex``."""
    return limit_of(_op_functor(D))


def preserves_limit(R: FiniteFunctor, D: FiniteFunctor) -> bool:
    """``R`` sends some (hence every) limit cone of ``D`` to a limit cone, or ``D`` has no limit."""
    lim = limit_of(D)
    if lim is None:
        return True
    apex, legs = lim
    RD = D.then(R)
    return is_limit_cone(RD, R.obj(apex), {i: R(p) for i, p in legs.items()})


def preserves_colimit(F: FiniteFunctor, D: FiniteFunctor) -> bool:
    return preserves_limit(_op_functor(F), _op_functor(D))


# ---------------------------------------------------------------------------
# hypotheses of the spectrification criterion


def comma_objects_under(d, F: FiniteFunctor) -> FiniteCategory:
    """``d / F``: pairs ``(c, d -> F c)``."""
    C, B = F.source, F.target
    obs = [(c, u) for c in C.objects for u in B.hom(d, F.obj(c))]
    arrs = {}
    for a in obs:
        for b in obs:
            for g in C.hom(a[0], b[0]):
                if B.then(a[1], F(g)) == b[1]:
                    arrs[(a, b, g)] = (a, b)
    comp = {((a, b, g), (b2, c, h)): (a, c, C.then(g, h)) for (a, b, g) in arrs for (b2, c, h) in arrs if b == b2}
    return FiniteCategory(obs, arrs, {a: (a, a, C.identity(a[0])) for a in obs}, comp, check=False)


def is_connected(C: FiniteCategory) -> bool:
    if not C.objects:
        return False
    seen = {C.objects[0]}
    stack = [C.objects[0]]
    while stack:
        a = stack.pop()
        for b in C.objects:
            if b not in seen and (C.hom(a, b) or C.hom(b, a)):
                seen.add(b)
                stack.append(b)
    return len(seen) == C.n_objects


def is_final(F: FiniteFunctor) -> bool:
    """Every ``d / F`` is non-empty and connected."""
    return all(is_connected(comma_objects_under(d, F)) for d in F.target.objects)


def is_iso_fibration(F: FiniteFunctor) -> bool:
    """Every isomorphism out of ``F(x)`` lifts to an isomorphism out of ``x``."""
    A, B = F.source, F.target
    for x in A.objects:
        lifts = {F(g) for g in A.arrows_from(x) if A.is_iso(g)}
        for m in B.arrows_from(F.obj(x)):
            if B.is_iso(m) and m not in lifts:
                return False
    return True


def is_inverse(J: FiniteCategory) -> bool:
    """No non-identity endomorphisms and no arrows both ways between distinct objects."""
    for a in J.objects:
        if len(J.hom(a, a)) != 1:
            return False
        for b in J.objects:
            if a != b and J.hom(a, b) and J.hom(b, a):
                return False
    return True


def matching_diagram(X: Diagram, j) -> tuple[FiniteCategory, Diagram]:
    """The diagram of ``X`` over non-identity arrows out of ``j``, with its index category."""
    J = X.J
    obs = [f for f in J.arrows_from(j) if not J.is_identity(f)]
    arrs = {}
    for f in obs:
        for g in obs:
            for u in J.hom(J.tgt(f), J.tgt(g)):
                if J.then(f, u) == g:
                    arrs[(f, g, u)] = (f, g)
    comp = {((f, g, u), (g2, h, v)): (f, h, J.then(u, v)) for (f, g, u) in arrs for (g2, h, v) in arrs if g == g2}
    M = FiniteCategory(obs, arrs, {f: (f, f, J.identity(J.tgt(f))) for f in obs}, comp, check=False)
    vals = {f: X[J.tgt(f)] for f in obs}
    fs = {a: X.fmap(a[2]) for a in arrs}
    return M, Diagram(M, vals, fs, check=False)


def matching_map(X: Diagram, j) -> FiniteFunctor:
    """``X_j -> lim over arrows out of j``."""
    M, Y = matching_diagram(X, j)
    L = strict_limit(Y) if M.objects else terminal()
    if not M.objects:
        return FiniteFunctor(X[j], L, {x: "*" for x in X[j].objects}, {a: ("id", "*") for a in X[j].arrows})
    on_obj = {x: tuple(X.fmap(f).obj(x) for f in M.objects) for x in X[j].objects}
    on_arr = {a: (on_obj[X[j].src(a)], on_obj[X[j].tgt(a)], tuple(X.fmap(f)(a) for f in M.objects)) for a in X[j].arrows}
    return FiniteFunctor(X[j], L, on_obj, on_arr)


@dataclass
class HypothesisReport:
    entries: list = field(default_factory=list)

    def add(self, name: str, passed: Optional[bool], detail: str = ""):
        self.entries.append((name, passed, detail))

    def __getitem__(self, name: str) -> Optional[bool]:
        vals = [p for n, p, _ in self.entries if n == name]
        if not vals:
            raise KeyError(name)
        if any(v is False for v in vals):
            return False
        if any(v is None for v in vals):
            return None
        return True

    @property
    def all_pass(self) -> bool:
        return all(p is True for _, p, _ in self.entries)

    def lines(self) -> list[str]:
        tag = {True: "PASS", False: "FAIL", None: "UNDECIDED"}
        return [f"{tag[p]:9s} {n}" + (f": {d}" if d else "") for n, p, d in self.entries]

    def to_json(self) -> list:
        return [{"hypothesis": n, "passed": p, "detail": d} for n, p, d in self.entries]


def fibrancy_report(X: Diagram, report: Optional[HypothesisReport] = None) -> HypothesisReport:
    report = report if report is not None else HypothesisReport()
    if not is_inverse(X.J):
        report.add("fibrancy", None, "shape is not inverse; matching conditions do not apply")
        return report
    for j in X.J.objects:
        ok = is_iso_fibration(matching_map(X, j))
        report.add("fibrancy", ok, f"matching map at {j!r} " + ("is" if ok else "is not") + " an iso-fibration")
    return report


def _colimit_survey(W_shape: FiniteCategory, C: FiniteCategory) -> list[tuple[FiniteFunctor, Optional[tuple]]]:
    return [(D, colimit_of(D)) for D in functors(W_shape, C)]


def check_spectrification_hypotheses(W: Weight, X: Diagram) -> HypothesisReport:
    """Fibrancy, colimit existence, colimit preservation and finality, per arrow of the shape."""
    report = fibrancy_report(X)
    J = X.J
    for f in _nonidentity(J):
        j, k = J.arrows[f]
        for shape_at in (j, k):
            missing = sum(1 for _, c in _colimit_survey(W[shape_at], X[k]) if c is None)
            report.add(
                "colimits exist",
                missing == 0,
                f"X[{k!r}] has all W[{shape_at!r}]-colimits" if not missing else f"{missing} W[{shape_at!r}]-diagrams in X[{k!r}] lack a colimit",
            )
        bad = 0
        for D, c in _colimit_survey(W[j], X[j]):
            if c is None:
                continue
            apex, legs = c
            XD = D.then(X.fmap(f))
            if not is_limit_cone(_op_functor(XD), X.fmap(f).obj(apex), {i: X.fmap(f)(p) for i, p in legs.items()}):
                bad += 1
        report.add("colimits preserved", bad == 0, f"X[{f!r}] preserves W[{j!r}]-colimits" if not bad else f"{bad} colimits not preserved by X[{f!r}]")
        fin = is_final(W.fmap(f))
        report.add("weight final", fin, f"W[{f!r}] " + ("is" if fin else "is not") + " final")
    return report


def delta_functor(W: Weight, X: Diagram) -> tuple[FiniteCategory, FiniteCategory, dict]:
    """Strict limit, weighted limit, and the object map sending a cone to constant functors."""
    S = strict_limit(X)
    WL = weighted_limit(W, X)
    J = X.J
    objs = J.objects
    out = {}
    for a in S.objects:
        key = tuple(
            tuple(a[n] for _ in W[j].objects) + tuple(X[j].identity(a[n]) for _ in W[j].arrows)
            for n, j in enumerate(objs)
        )
        out[a] = key
    return S, WL, out


def sp_adjunction_check(W: Weight, X: Diagram) -> tuple[bool, str]:
    """Pointwise colimits give a left adjoint to the diagonal; verify the hom bijection exhaustively."""
    S, WL, delta = delta_functor(W, X)
    J = X.J
    objs = J.objects
    for key in WL.objects:
        fam = WL.families[key]
        colims = []
        for j, F in zip(objs, fam):
            c = colimit_of(F)
            if c is None:
                return False, f"no colimit of the component at {j!r}"
            colims.append(c[0])
        L = tuple(colims)
        if L not in set(S.objects):
            return False, f"pointwise colimits {L} do not form a strict cone"
        for x in S.objects:
            if delta[x] not in set(WL.objects):
                return False, "the diagonal leaves the weighted limit"
            left = len(S.hom(L, x))
            right = len(WL.hom(key, delta[x]))
            if left != right:
                return False, f"hom counts differ at {key}: {left} != {right}"
    return True, "hom bijection verified for every pair"


# ---------------------------------------------------------------------------
# comma categories


def comma_category(L: FiniteFunctor, R: FiniteFunctor) -> FiniteCategory:
    """``L / R``: triples ``(a, L a -> R b, b)``."""
    if L.target is not R.target and L.target != R.target:
        raise ValueError("L and R must share a codomain")
    A, B, C = L.source, R.source, L.target
    obs = [(a, c, b) for a in A.objects for b in B.objects for c in C.hom(L.obj(a), R.obj(b))]
    arrs = {}
    for x in obs:
        for y in obs:
            for u in A.hom(x[0], y[0]):
                for v in B.hom(x[2], y[2]):
                    if C.then(x[1], R(v)) == C.then(L(u), y[1]):
                        arrs[(x, y, u, v)] = (x, y)
    comp = {
        ((x, y, u, v), (y2, z, u2, v2)): (x, z, A.then(u, u2), B.then(v, v2))
        for (x, y, u, v) in arrs
        for (y2, z, u2, v2) in arrs
        if y == y2
    }
    K = FiniteCategory(obs, arrs, {x: (x, x, A.identity(x[0]), B.identity(x[2])) for x in obs}, comp, check=False)
    return K


def comma_projections(L: FiniteFunctor, R: FiniteFunctor, K: FiniteCategory) -> tuple[FiniteFunctor, FiniteFunctor]:
    A, B = L.source, R.source
    pa = FiniteFunctor(K, A, {x: x[0] for x in K.objects}, {f: f[2] for f in K.arrows}, check=False)
    pb = FiniteFunctor(K, B, {x: x[2] for x in K.objects}, {f: f[3] for f in K.arrows}, check=False)
    return pa, pb


@dataclass
class CommaReport:
    skipped: bool
    reason: str = ""
    formula_apex: Optional[tuple] = None
    brute_apex: Optional[tuple] = None
    agree: Optional[bool] = None


def comma_limit_check(L: FiniteFunctor, R: FiniteFunctor, D: FiniteFunctor) -> CommaReport:
    """Limit of ``D: I -> L/R`` by componentwise limits and the induced comparison arrow, against brute force."""
    K = D.target
    pa, pb = comma_projections(L, R, K)
    Da, Db = D.then(pa), D.then(pb)
    if not preserves_limit(R, Db):
        return CommaReport(True, "R does not preserve the limit of the B-component")
    la, lb = limit_of(Da), limit_of(Db)
    brute = limit_of(D)
    if la is None or lb is None:
        return CommaReport(True, "a component limit is missing", brute_apex=brute[0] if brute else None)
    (a, alpha), (b, beta) = la, lb
    C = L.target
    I = D.source
    # the cone L(lim a) -> L(a_i) -> R(b_i), factored through R(lim b)
    legs = {i: C.then(L(alpha[i]), D.obj(i)[1]) for i in I.objects}
    arrows = [u for u in C.hom(L.obj(a), R.obj(b)) if all(C.then(u, R(beta[i])) == legs[i] for i in I.objects)]
    if len(arrows) != 1:
        return CommaReport(False, "the comparison arrow is not unique", brute_apex=brute[0] if brute else None, agree=False)
    apex = (a, arrows[0], b)
    formula_legs = {i: (apex, D.obj(i), alpha[i], beta[i]) for i in I.objects}
    if any(leg not in K.arrows for leg in formula_legs.values()):
        return CommaReport(False, "formula legs are not arrows of the comma category", apex, brute[0] if brute else None, False)
    formula_ok = is_limit_cone(D, apex, formula_legs)
    if brute is None:
        return CommaReport(False, "brute force finds no limit", apex, None, False)
    same = any(K.is_iso(f) for f in K.hom(apex, brute[0]))
    return CommaReport(False, "", apex, brute[0], formula_ok and same)


def random_lattice(rng: random.Random) -> FiniteCategory:
    kind = rng.choice(["chain", "square", "chain3x2"])
    if kind == "chain":
        return chain(rng.randint(1, 4))
    if kind == "square":
        return from_poset([(0, 0), (0, 1), (1, 0), (1, 1)], lambda a, b: a[0] <= b[0] and a[1] <= b[1])
    return from_poset([(x, y) for x in range(3) for y in range(2)], lambda a, b: a[0] <= b[0] and a[1] <= b[1])


def random_functor(rng: random.Random, A: FiniteCategory, B: FiniteCategory, predicate=None) -> Optional[FiniteFunctor]:
    found = list(functors(A, B))
    rng.shuffle(found)
    for F in found:
        if predicate is None or predicate(F):
            return F
    return None


def _meet_preserving(R: FiniteFunctor) -> bool:
    """Preserves every binary product and the terminal object (finite meets of a lattice)."""
    B = R.source
    for x in B.objects:
        for y in B.objects:
            P = FiniteFunctor(discrete([0, 1]), B, {0: x, 1: y}, {("id", 0): B.identity(x), ("id", 1): B.identity(y)}, check=False)
            if not preserves_limit(R, P):
                return False
    empty = FiniteFunctor(discrete([]), B, {}, {}, check=False)
    return preserves_limit(R, empty)


def random_comma_instance(rng: random.Random) -> tuple[FiniteFunctor, FiniteFunctor, FiniteFunctor]:
    """Random lattices ``A, B, C``, monotone ``L``, meet-preserving ``R``, and a small diagram into ``L/R``."""
    while True:
        A, B, C = random_lattice(rng), random_lattice(rng), random_lattice(rng)
        L = random_functor(rng, A, C)
        R = random_functor(rng, B, C, _meet_preserving)
        if L is None or R is None:
            continue
        K = comma_category(L, R)
        if not K.objects:
            continue
        shape = rng.choice([discrete([0, 1]), parallel_pair(), from_poset([0, 1, 2], lambda a, b: a == b or b == 2), discrete([])])
        D = random_functor(rng, shape, K)
        if D is not None:
            return L, R, D


# ---------------------------------------------------------------------------
# corpus helpers


def random_diagram(rng: random.Random, J: FiniteCategory, pool: Sequence[FiniteCategory], tries: int = 20) -> Diagram:
    """Random values from ``pool`` and random functors, found by backtracking over arrows."""
    arrows = [f for f in J.arrows if not J.is_identity(f)]
    pairs = list(J.composable_pairs())
    for _ in range(tries):
        values = {j: rng.choice(pool) for j in J.objects}
        choice: dict = {J.identity(j): identity_functor(values[j]) for j in J.objects}
        options = {}
        for f in arrows:
            fs = list(functors(values[J.src(f)], values[J.tgt(f)]))
            rng.shuffle(fs)
            options[f] = fs

        def rec(k):
            if k == len(arrows):
                return True
            f = arrows[k]
            for F in options[f]:
                choice[f] = F
                if all(
                    choice[J.then(g, h)] == choice[g].then(choice[h])
                    for g, h in pairs
                    if g in choice and h in choice and J.then(g, h) in choice
                ):
                    if rec(k + 1):
                        return True
                del choice[f]
            return False

        if rec(0):
            return Diagram(J, values, choice)
    C = rng.choice(pool)
    return constant_diagram(J, C)


def fibrancy_counterexample() -> Diagram:
    """``terminal`` sent two ways into the free-standing isomorphism."""
    J = parallel_pair()
    point, I = terminal(), walking_iso()
    fs = {
        ("s",): FiniteFunctor(point, I, {"*": 0}, {("id", "*"): (0, 0)}),
        ("t",): FiniteFunctor(point, I, {"*": 1}, {("id", "*"): (1, 1)}),
    }
    return Diagram(J, {0: point, 1: I}, fs)


def comma_instance_from_json(data: Mapping) -> tuple[FiniteFunctor, FiniteFunctor, FiniteFunctor]:
    """``{"A","B","C": category, "L","R": functor, "shape": category, "diagram": {...}}``.

    The diagram sends each shape object to ``{"a", "c", "b"}`` and each arrow to ``{"a", "b"}``.
    """
    try:
        A, B, C = (FiniteCategory.from_json(data[k]) for k in ("A", "B", "C"))
        L = FiniteFunctor.from_json(data["L"], A, C)
        R = FiniteFunctor.from_json(data["R"], B, C)
        I = FiniteCategory.from_json(data["shape"])
        layout = data["diagram"]
        K = comma_category(L, R)
        om = {str(i): (str(v["a"]), str(v["c"]), str(v["b"])) for i, v in layout["objects"].items()}
        am = {}
        for f, (i, j) in I.arrows.items():
            if I.is_identity(f) and f not in layout.get("arrows", {}):
                x = om[i]
                am[f] = (x, x, A.identity(x[0]), B.identity(x[2]))
                continue
            v = layout["arrows"][f]
            am[f] = (om[i], om[j], str(v["a"]), str(v["b"]))
    except KeyError as exc:
        raise ValueError(f"malformed comma instance: missing {exc}") from None
    for x in om.values():
        if x not in K.identities:
            raise ValueError(f"{x} is not an object of the comma category")
    return L, R, FiniteFunctor(I, K, om, am)
