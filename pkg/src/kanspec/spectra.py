"""Sequential spectra with a suspension tail, spectrification, and Kan's translation.

A spectrum is stored as explicit pointed simplicial sets ``E_0, ..., E_m`` with
structure maps ``E_k -> Omega_K E_{k+1}``; beyond ``m`` every level is the
suspension of the previous one and the structure map is the unit.  Level
``E_k`` is what is often written ``X_{-k}``.
"""

from __future__ import annotations

import random
from typing import Mapping, Optional, Sequence

from . import ez
from .ez import BASE
from .psh_pointed import (
    PointedMap,
    PointedSSet,
    find_isomorphism,
    identity_map,
    is_iso,
    omega_K,
    omega_map,
    omega_power,
    point,
    random_pointed_sset,
    sigma_map,
    sigma_power,
    unit_eta,
)
from .stable_psh import StableComplex, StableMapping, is_loc_sph, spherical_boundary, spherical_horn
from .stable_psh import brown_boundary, brown_horn


class SequentialSpectrum:
    def __init__(self, levels: Sequence[PointedSSet], maps: Sequence[PointedMap]):
        if not levels:
            raise ValueError("a spectrum needs at least one explicit level")
        if len(maps) != len(levels) - 1:
            raise ValueError(f"{len(levels)} levels need {len(levels) - 1} structure maps, got {len(maps)}")
        self.levels = list(levels)
        self.maps = list(maps)
        self.validate()

    @property
    def tail_at(self) -> int:
        return len(self.levels) - 1

    def validate(self) -> "SequentialSpectrum":
        for k, phi in enumerate(self.maps):
            if phi.source != self.levels[k]:
                raise ValueError(f"structure map {k} has the wrong source")
            if phi.target != omega_K(self.levels[k + 1]):
                raise ValueError(f"structure map {k} must land in the loops of level {k + 1}")
            phi.validate()
        return self

    def level(self, k: int) -> PointedSSet:
        m = self.tail_at
        return self.levels[k] if k <= m else sigma_power(self.levels[m], k - m)

    def structure_map(self, k: int) -> PointedMap:
        return self.maps[k] if k < self.tail_at else unit_eta(self.level(k))

    def __repr__(self):
        return f"SequentialSpectrum({self.levels}, tail_at={self.tail_at})"

    def to_json(self) -> dict:
        return {
            "levels": [X.to_json() for X in self.levels],
            "maps": [phi.to_json() for phi in self.maps],
            "tail_at": self.tail_at,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SequentialSpectrum":
        levels = [PointedSSet.from_json(x) for x in data["levels"]]
        tail = int(data.get("tail_at", len(levels) - 1))
        if tail != len(levels) - 1:
            raise ValueError(f"tail_at={tail} but {len(levels)} explicit levels were given")
        maps = [
            PointedMap.from_json(rec, levels[k], omega_K(levels[k + 1])) for k, rec in enumerate(data.get("maps", []))
        ]
        return cls(levels, maps)


class SpectrumMap:
    """Levelwise maps ``f_k``; past the last explicit index they are suspended."""

    def __init__(self, source: SequentialSpectrum, target: SequentialSpectrum, components: Sequence[PointedMap]):
        self.source = source
        self.target = target
        self.components = list(components)
        top = max(source.tail_at, target.tail_at)
        if len(self.components) != top + 1:
            raise ValueError(f"expected {top + 1} components")
        for k in range(top):
            left = source.structure_map(k).then(omega_map(self.components[k + 1]))
            right = self.components[k].then(target.structure_map(k))
            if left.assignment != right.assignment:
                raise ValueError(f"naturality fails at level {k}")

    def component(self, k: int) -> PointedMap:
        top = len(self.components) - 1
        if k <= top:
            return self.components[k]
        f = self.components[top]
        for _ in range(k - top):
            f = sigma_map(f)
        return f

    @property
    def is_iso(self) -> bool:
        return all(is_iso(f) for f in self.components)


def suspension_spectrum(X: PointedSSet, shift: int = 0) -> SequentialSpectrum:
    """Points below ``shift``, then ``X``, then its suspensions."""
    if shift < 0:
        raise ValueError("shift >= 0")
    levels = [point() for _ in range(shift)] + [X]
    maps = [PointedMap(levels[k], omega_K(levels[k + 1]), {}) for k in range(shift)]
    return SequentialSpectrum(levels, maps)


def is_omega_spectrum(E: SequentialSpectrum) -> bool:
    return all(is_iso(phi) for phi in E.maps)


def spectrify(E: SequentialSpectrum) -> tuple[SequentialSpectrum, SpectrumMap]:
    """The Omega-spectrum ``k |-> Omega^{m-k} E_m`` and the comparison map from ``E``."""
    m = E.tail_at
    levels = [omega_power(E.levels[m], m - k) for k in range(m + 1)]
    maps = [PointedMap(levels[k], omega_K(levels[k + 1]), {c: ((), c) for c in levels[k].cells}) for k in range(m)]
    sp = SequentialSpectrum(levels, maps)
    units: list[Optional[PointedMap]] = [None] * (m + 1)
    units[m] = identity_map(E.levels[m])
    for k in range(m - 1, -1, -1):
        units[k] = E.maps[k].then(_retarget(omega_map(units[k + 1]), levels[k]))
    return sp, SpectrumMap(E, sp, units)


def _retarget(f: PointedMap, target: PointedSSet) -> PointedMap:
    if f.target != target:
        raise ValueError("target mismatch")
    return PointedMap(f.source, target, f.assignment, check=False)


def _level_isos(A: PointedSSet, B: PointedSSet) -> list[PointedMap]:
    if find_isomorphism(A, B) is None:
        return []
    return [PointedMap(A, B, m, check=False) for m in ez.homs(A, B, injective=True)]


def spectrum_isomorphism(E: SequentialSpectrum, F: SequentialSpectrum) -> Optional[SpectrumMap]:
    """Levelwise isomorphisms commuting with the structure maps, or ``None``.

    Past both tails the structure maps are units, which are natural, so the
    search stops at the larger tail.
    """
    top = max(E.tail_at, F.tail_at)
    options = [_level_isos(E.level(k), F.level(k)) for k in range(top + 1)]
    if not all(options):
        return None
    chosen: list[PointedMap] = []

    def rec(k):
        if k > top:
            return True
        for phi in options[k]:
            if k:
                left = E.structure_map(k - 1).then(omega_map(phi))
                right = chosen[k - 1].then(F.structure_map(k - 1))
                if left.assignment != right.assignment:
                    continue
            chosen.append(phi)
            if rec(k + 1):
                return True
            chosen.pop()
        return False

    return SpectrumMap(E, F, chosen) if rec(0) else None


def spectra_isomorphic(E: SequentialSpectrum, F: SequentialSpectrum) -> bool:
    return spectrum_isomorphism(E, F) is not None


def random_spectrum(rng: random.Random, max_levels: int = 3, max_cells: int = 6) -> SequentialSpectrum:
    """Random suspension-tail spectrum with structure maps found by random search."""
    m = rng.randint(0, max_levels - 1)
    levels = [random_pointed_sset(rng, max_cells=max_cells, max_dim=2) for _ in range(m + 1)]
    maps = []
    for k in range(m):
        target = omega_K(levels[k + 1])
        found = _random_pointed_map(levels[k], target, rng)
        maps.append(PointedMap(levels[k], target, found))
    return SequentialSpectrum(levels, maps)


def _random_pointed_map(A: PointedSSet, X: PointedSSet, rng: random.Random) -> dict:
    from .psh_pointed import _random_map

    found = _random_map(A, X, rng)
    assert found is not None  # the constant map always exists
    return found


# ---------------------------------------------------------------------------
# Kan's translation


def ksp(E: SequentialSpectrum) -> StableComplex:
    """Stable complex of a spectrum: cells of ``E_m`` in dimension ``d`` sit at level ``d - m``.

    A cell of ``E_j`` survives to the colimit exactly through its image in
    ``E_m``; the tail suspensions only reindex, so the colimit is read off level ``m``.
    """
    m = E.tail_at
    X = E.levels[m]
    levels = {c: X.level(c) - m for c in X.cells}
    faces = {c: X.face_table(c) for c in X.cells}
    bounds = {c: X.level(c) for c in X.cells}
    return StableComplex(levels, faces, bounds).validate()


def kps_tail(Z: StableComplex) -> int:
    """First index past which the level formula is just suspension."""
    m = 0
    for c in Z.cells:
        m = max(m, Z.bound(c) + 1 - Z.level(c))
    return m


def kps_cells(Z: StableComplex, i: int) -> list[str]:
    """Cells whose sphere maps ``S^{-i}[n] -> Z`` (``n = level + i``) exist."""
    out = []
    for c in Z.cells:
        n = Z.level(c) + i
        if n < 0 or Z.bound(c) > n:
            continue
        if Z.face_chain(((), c), n) is BASE:
            out.append(c)
    return out


def kps_level(Z: StableComplex, i: int) -> PointedSSet:
    keep = kps_cells(Z, i)
    dims = {c: Z.level(c) + i for c in keep}
    faces = {c: (tuple(Z.cell_face(c, j) for j in range(dims[c] + 1)) if dims[c] else ()) for c in keep}
    return PointedSSet(dims, faces).validate()


def kps(Z: StableComplex, check: bool = True) -> SequentialSpectrum:
    """Spectrum of a locally spherical complex: level ``i`` in dimension ``n`` is ``Hom(S^{-i}[n], Z)``."""
    if check and not is_loc_sph(Z):
        raise ValueError("kps is only defined on locally spherical complexes")
    m = kps_tail(Z)
    levels = [kps_level(Z, i) for i in range(m + 1)]
    maps = [
        PointedMap(levels[i], omega_K(levels[i + 1]), {c: ((), c) for c in levels[i].cells}) for i in range(m)
    ]
    return SequentialSpectrum(levels, maps)


def wedge_spectra(Es: Sequence[SequentialSpectrum]) -> SequentialSpectrum:
    """Levelwise wedge, after padding every summand to a common tail."""
    from .psh_pointed import wedge_inclusions

    top = max(E.tail_at for E in Es)
    levels, incls = [], []
    for k in range(top + 1):
        W, inc = wedge_inclusions([E.level(k) for E in Es])
        levels.append(W)
        incls.append(inc)
    maps = []
    for k in range(top):
        target = omega_K(levels[k + 1])
        assignment = {}
        for s, E in enumerate(Es):
            phi = E.structure_map(k)
            up = omega_map(incls[k + 1][s])
            for c, x in phi.assignment.items():
                assignment[incls[k][s].assignment[c][1]] = up(x)
        maps.append(PointedMap(levels[k], target, assignment))
    return SequentialSpectrum(levels, maps)


REGULUS_KINDS = ("brown_horn", "brown_boundary", "spherical_horn", "spherical_boundary")

_ALIASES = {
    "horn": "brown_horn",
    "boundary": "brown_boundary",
    "brown": "brown_horn",
    "spherical": "spherical_horn",
    "lambda_brown": "brown_horn",
    "partial_brown": "brown_boundary",
    "lambda_spherical": "spherical_horn",
    "partial_spherical": "spherical_boundary",
    "λ_brown": "brown_horn",
    "∂_brown": "brown_boundary",
    "λ_spherical": "spherical_horn",
    "∂_spherical": "spherical_boundary",
}


def emit_regulus(kind: str, zs: Sequence[int], ns: Sequence[int]) -> list[tuple[dict, StableMapping]]:
    """Enumerate a generating family; each entry is ``(label, inclusion)``."""
    kind = _ALIASES.get(kind.lower().replace("-", "_"), kind.lower().replace("-", "_"))
    if kind not in REGULUS_KINDS:
        raise ValueError(f"unknown regulus kind {kind!r}; expected one of {REGULUS_KINDS}")
    out = []
    for z in zs:
        for n in ns:
            if kind.endswith("horn"):
                for i in range(n + 1):
                    f = brown_horn(z, n, i) if kind == "brown_horn" else spherical_horn(z, n, i)
                    out.append(({"kind": kind, "z": z, "n": n, "i": i}, f))
            else:
                f = brown_boundary(z, n) if kind == "brown_boundary" else spherical_boundary(z, n)
                out.append(({"kind": kind, "z": z, "n": n}, f))
    return out
