"""``kanspec`` command line: JSON in, constructions and checks out.

Exit status: 0 on success, 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
import tempfile
from typing import Any, Callable, Optional, Sequence

from . import limits_lab as ll
from . import psh_pointed as pp
from . import spectra as sx
from . import stable_psh as st
from . import theta as th
from .fincat import FiniteCategory, enumerate_categories

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MANIFEST_VERSION = "1"


class InputError(Exception):
    """Bad user input; ``where`` is ``path:line`` when known."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)


class Report:
    def __init__(self, command: str, tag: str):
        self.command = command
        self.tag = tag
        self.checks: list[dict] = []
        self.notes: list[str] = []
        self.result: Any = None
        # constructions print their result; checks keep it for --json
        self.emits = False

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        return passed

    def note(self, text: str):
        self.notes.append(text)

    @property
    def ok(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        out = {"command": self.command, "tag": self.tag, "ok": self.ok, "checks": self.checks, "notes": self.notes}
        if self.result is not None:
            out["result"] = self.result
        return out

    def text(self) -> str:
        lines = [f"[{self.tag}] {self.command}"]
        lines += self.notes
        for c in self.checks:
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# input helpers


def _line_of(text: str, message: str) -> int:
    """Line of the first quoted token of ``message`` inside ``text``, else 1."""
    for token in re.findall(r"'([^']+)'", message):
        pos = text.find(f'"{token}"')
        if pos >= 0:
            return text.count("\n", 0, pos) + 1
    return 1


def load_json(path: str) -> tuple[Any, str]:
    try:
        with open(path, encoding="utf-8") if path != "-" else sys.stdin as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc.strerror or exc), path) from None
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None


def parse_with(path: str, parser: Callable[[Any], Any]):
    data, text = load_json(path)
    try:
        return parser(data)
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        msg = str(exc)
        raise InputError(msg, f"{path}:{_line_of(text, msg)}") from None


def parse_range(text: str) -> list[int]:
    """``-1..1`` (inclusive), ``0,2,3`` or a single integer."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise InputError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"not an integer range: {text!r}") from None


def resolve_seed(seed: Optional[int]) -> int:
    env = os.environ.get("KANSPEC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"KANSPEC_SEED must be an integer, got {env!r}") from None
    return 0 if seed is None else seed


def emit(obj: Any, out: Optional[str]):
    text = json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def category_json(C: FiniteCategory) -> dict:
    """Relabelled copy, so limit categories with tuple names serialise."""
    return C.relabel().to_json()


# ---------------------------------------------------------------------------
# commands


def cmd_suspend(args) -> Report:
    X = parse_with(args.input, pp.PointedSSet.from_json)
    r = Report("suspend", "kan-suspension")
    Y = pp.sigma_power(X, args.times)
    r.note(f"{X!r} -> {Y!r}")
    r.emits = True
    r.result = Y.to_json()
    return r


def cmd_loop(args) -> Report:
    X = parse_with(args.input, pp.PointedSSet.from_json)
    r = Report("loop", "kan-loops")
    Y = pp.omega_power(X, args.times)
    r.note(f"{X!r} -> {Y!r}")
    r.emits = True
    r.result = Y.to_json()
    return r


def cmd_spectrify(args) -> Report:
    E = parse_with(args.input, sx.SequentialSpectrum.from_json)
    r = Report("spectrify", "spectrification")
    sp, unit = sx.spectrify(E)
    if unit.is_iso:
        r.note("fixed point: the input is already an Omega-spectrum")
    r.check("output is an Omega-spectrum", sx.is_omega_spectrum(sp))
    r.emits = True
    r.result = sp.to_json()
    return r


def cmd_ksp(args) -> Report:
    E = parse_with(args.input, sx.SequentialSpectrum.from_json)
    r = Report("ksp", "spectrum-to-stable")
    Z = sx.ksp(E)
    r.note(f"{len(Z.cells)} cells")
    r.emits = True
    r.result = Z.to_json()
    return r


def cmd_kps(args) -> Report:
    Z = parse_with(args.input, st.StableComplex.from_json)
    r = Report("kps", "stable-to-spectrum")
    if not r.check("input is locally spherical", st.is_loc_sph(Z)):
        return r
    E = sx.kps(Z, check=False)
    r.note(f"{len(E.levels)} explicit levels")
    r.emits = True
    r.result = E.to_json()
    return r


def cmd_emit_regulus(args) -> Report:
    r = Report("emit-regulus", "generating-family")
    try:
        family = sx.emit_regulus(args.kind, parse_range(args.z), parse_range(args.n))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    r.note(f"{len(family)} entries")
    r.emits = True
    r.result = [{"label": label, "map": f.to_json()} for label, f in family]
    return r


def cmd_check_horn(args) -> Report:
    X = parse_with(args.input, st.StableComplex.from_json)
    r = Report("check-horn", "horn-lifting")
    try:
        family = sx.emit_regulus(args.kind, parse_range(args.z), parse_range(args.n))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for label, incl in family:
        name = " ".join(f"{k}={v}" for k, v in label.items())
        lifts, table = st.has_rlp(X, incl)
        if args.unique:
            counts = sorted({len(fs) for _, fs in table})
            r.check(name, all(len(fs) == 1 for _, fs in table), f"filler counts {counts}")
        else:
            r.check(name, lifts, f"{len(table)} maps out of the horn")
    return r


def _cellular_input(args) -> th.CellularSet:
    if args.category:
        C = parse_with(args.category, FiniteCategory.from_json)
        return th.nerve_of_category(C, args.bound)
    if args.input:
        return parse_with(args.input, th.CellularSet.from_json)
    raise InputError("segal needs --category or --in")


def cmd_segal(args) -> Report:
    if args.bound < 2:
        raise InputError("--bound must be at least 2")
    X = _cellular_input(args)
    r = Report("segal", "segal-condition")
    r.check(f"segal condition up to degree {args.bound}", th.segal_check(X, args.bound))
    sorts = [T for T in X.sorts if th.reedy_degree(T) <= args.bound]
    r.check(f"orthogonal to spines up to degree {args.bound}", th.orthogonal_to(X, th.spine_regulus(args.bound, sorts), args.bound))
    return r


# -- limits


def _limit_result(r: Report, C: FiniteCategory):
    r.emits = True
    r.note(f"{C.n_objects} objects, {C.n_arrows} arrows")
    r.result = category_json(C)


def cmd_limits(args) -> Report:
    kind = args.kind
    if kind == "comma":
        return _limits_comma(args)
    X = parse_with(args.input, ll.Diagram.from_json) if args.input else ll.fibrancy_counterexample()
    if kind == "strict":
        r = Report("limits strict", "strict-limit")
        _limit_result(r, ll.strict_limit(X))
    elif kind == "oplax":
        r = Report("limits oplax", "oplax-limit")
        A = ll.oplax_limit_explicit(X)
        B = ll.weighted_limit(ll.oplax_weight(X.J), X)
        cmp = ll.compare_categories(A, B)
        r.check("explicit oplax cones match the oplax-weighted limit", cmp.ok, "isomorphic" if cmp.isomorphic else "equivalent" if cmp.equivalent else "")
        _limit_result(r, A)
    elif kind == "weighted":
        W = parse_with(args.weight, ll.Diagram.from_json) if args.weight else X
        r = Report("limits weighted", "weighted-limit")
        _limit_result(r, ll.weighted_limit(W, X))
    elif kind == "check-sp":
        W = parse_with(args.weight, ll.Diagram.from_json) if args.weight else X
        r = Report("limits check-sp", "spectrification-hypotheses")
        rep = ll.check_spectrification_hypotheses(W, X)
        for name, passed, detail in rep.entries:
            if passed is None:
                r.note(f"UNDECIDED {name}: {detail}")
            else:
                r.check(name, passed, detail)
        r.result = rep.to_json()
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown limits kind {kind!r}")
    return r


def _limits_comma(args) -> Report:
    r = Report("limits comma", "comma-limits")
    if args.input:
        instances = [parse_with(args.input, ll.comma_instance_from_json)]
    else:
        rng = random.Random(args.seed)
        instances = [ll.random_comma_instance(rng) for _ in range(args.count)]
    for k, (L, R, D) in enumerate(instances):
        rep = ll.comma_limit_check(L, R, D)
        if rep.skipped:
            r.note(f"instance {k}: skipped ({rep.reason})")
        else:
            r.check(f"instance {k}", bool(rep.agree), rep.reason)
    return r


# -- regressions


def cmd_regress(args) -> Report:
    which = args.which
    if which == "ckp":
        r = Report("regress ckp", "ckp-counterexample")
        X = pp.ckp_space()
        a, b = pp.ckp_omega(X).count(0), pp.omega_K(X).count(0)
        r.note(f"vertices of the naive loop object: {a}")
        r.note(f"vertices of the Kan loop object: {b}")
        r.check("naive loops see two vertices", a == 2)
        r.check("Kan loops see only the basepoint", b == 1)
        r.result = {"naive": a, "kan": b}
        return r
    if which == "locsph":
        r = Report("regress locsph", "locally-spherical")
        for z in range(-2, 3):
            for n in range(4):
                r.check(f"cell z={z} n={n} excluded", not st.is_loc_sph(st.stable_cell(z, n)))
                r.check(f"sphere z={z} n={n} included", st.is_loc_sph(st.sphere(z, n)))
        return r
    if which == "oplax-weight":
        r = Report("regress oplax-weight", "oplax-weight")
        rng = random.Random(args.seed)
        pool = [C for C in enumerate_categories(2, 4)]
        for J in enumerate_categories(3, args.max_arrows):
            X = ll.random_diagram(rng, J, pool)
            A = ll.weighted_limit(ll.oplax_weight(J), X)
            B = ll.oplax_limit_explicit(X)
            r.check(f"shape {J.n_objects}x{J.n_arrows}", ll.compare_categories(A, B).ok, f"{B.n_objects} objects")
        return r
    raise InputError(f"unknown regression {which!r}")  # pragma: no cover


# -- manifests


_ENTITY_PARSERS: dict[str, Callable[[Any], Any]] = {
    "category": FiniteCategory.from_json,
    "pointed": pp.PointedSSet.from_json,
    "stable": st.StableComplex.from_json,
    "spectrum": sx.SequentialSpectrum.from_json,
    "diagram": ll.Diagram.from_json,
    "cellular": th.CellularSet.from_json,
    "comma": ll.comma_instance_from_json,
}


def validate_manifest(data: Any, text: str, path: str) -> None:
    """Unique names, known entity types, commands naming defined entities."""

    def fail(msg, token=None):
        line = _line_of(text, f"'{token}'") if token else 1
        raise InputError(msg, f"{path}:{line}")

    if not isinstance(data, dict):
        fail("manifest must be an object")
    if str(data.get("version")) != MANIFEST_VERSION:
        fail(f"manifest version must be {MANIFEST_VERSION!r}", "version")
    entities = data.get("entities", [])
    if not isinstance(entities, list):
        fail("'entities' must be a list", "entities")
    names = set()
    for ent in entities:
        name = ent.get("name")
        if not name:
            fail("entity without a name", "entities")
        if name in names:
            fail(f"duplicate entity name {name!r}", name)
        names.add(name)
        if ent.get("type") not in _ENTITY_PARSERS:
            fail(f"entity {name!r} has unknown type {ent.get('type')!r}", name)
    for cmd in data.get("commands", []):
        for key in ("in", "weight", "category"):
            ref = cmd.get(key)
            if ref is not None and ref not in names:
                fail(f"command {cmd.get('run')!r} references undefined entity {ref!r}", ref)


def cmd_run(args) -> Report:
    data, text = load_json(args.manifest)
    validate_manifest(data, text, args.manifest)
    r = Report("run", "manifest")
    with tempfile.TemporaryDirectory() as tmp:
        files = {}
        for ent in data.get("entities", []):
            p = os.path.join(tmp, f"{len(files)}.json")
            with open(p, "w", encoding="utf-8") as fh:
                json.dump(ent["data"], fh)
            files[ent["name"]] = p
        parser = build_parser()
        for cmd in data.get("commands", []):
            argv = str(cmd.get("run", "")).split()
            for key, value in cmd.items():
                if key == "run":
                    continue
                flag = "--" + key.replace("_", "-")
                if key in ("in", "weight", "category"):
                    value = files[value]
                argv += [flag, str(value)] if value is not True else [flag]
            try:
                sub = parser.parse_args(_glue_negative_values(argv))
            except SystemExit:
                raise InputError(f"command {cmd.get('run')!r} has bad arguments", f"{args.manifest}:{_line_of(text, repr(cmd.get('run')))}") from None
            sub.seed = resolve_seed(getattr(sub, "seed", None))
            inner = sub.func(sub)
            r.check(inner.command, inner.ok, "; ".join(inner.notes))
    return r


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for randomized suites (KANSPEC_SEED overrides)")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--out", help="write the constructed object to this file")
    parser = argparse.ArgumentParser(prog="kanspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    for name, func, help_ in (
        ("suspend", cmd_suspend, "Kan suspension of a pointed simplicial set"),
        ("loop", cmd_loop, "Kan loops of a pointed simplicial set"),
    ):
        p = add(name, func, help_)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--times", type=int, default=1)

    p = add("spectrify", cmd_spectrify, "Omega-spectrum reflection of a spectrum")
    p.add_argument("--in", dest="input", required=True)
    p = add("ksp", cmd_ksp, "stable complex of a spectrum")
    p.add_argument("--in", dest="input", required=True)
    p = add("kps", cmd_kps, "spectrum of a locally spherical stable complex")
    p.add_argument("--in", dest="input", required=True)

    p = add("emit-regulus", cmd_emit_regulus, "serialize a horn or boundary family")
    p.add_argument("--kind", required=True)
    p.add_argument("--z", required=True, help="range like -1..1")
    p.add_argument("--n", required=True, help="range like 0..2")

    p = add("check-horn", cmd_check_horn, "horn lifting for a stable complex")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--kind", default="spherical")
    p.add_argument("--z", default="0")
    p.add_argument("--n", default="0..2")
    p.add_argument("--unique", action="store_true", help="require unique fillers")

    p = add("segal", cmd_segal, "Segal condition and spine orthogonality")
    p.add_argument("--in", dest="input")
    p.add_argument("--category")
    p.add_argument("--bound", type=int, default=4)

    p = add("limits", cmd_limits, "limits of diagrams of finite categories")
    p.add_argument("kind", choices=["strict", "oplax", "weighted", "check-sp", "comma"])
    p.add_argument("--in", dest="input", help="diagram JSON (default: the parallel-pair counterexample)")
    p.add_argument("--weight")
    p.add_argument("--count", type=int, default=20)

    p = add("regress", cmd_regress, "fixed regression checks")
    p.add_argument("which", choices=["ckp", "locsph", "oplax-weight"])
    p.add_argument("--max-arrows", type=int, default=4)

    p = add("run", cmd_run, "run the commands of a manifest")
    p.add_argument("--manifest", required=True)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """``--z -1..1`` becomes ``--z=-1..1`` so argparse does not read a flag."""
    out = []
    k = 0
    while k < len(argv):
        a = argv[k]
        if a.startswith("--") and "=" not in a and k + 1 < len(argv) and re.fullmatch(r"-\d[\d.,-]*", argv[k + 1]):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
            continue
        out.append(a)
        k += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        args.seed = resolve_seed(args.seed)
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        emit(report.to_json(), None)
    elif report.emits and not args.out:
        # the object goes to stdout so it can be piped; the summary to stderr
        emit(report.result, None)
        print(report.text(), file=sys.stderr)
    else:
        if report.emits and args.out:
            emit(report.result, args.out)
        print(report.text())
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
