"""Orbits of the monodromy group on P[2] and the resulting component counts.

A point of P[2] is packed into an integer index: bit ``j`` is coordinate ``j``
of the adapted basis, so the section part occupies the low ``2g`` bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .gf2 import BitMat2, BitVec2, SpanTracker
from .monodromy import MonodromyModel, model

MAX_ENUMERATE_GENUS = 5


class EnumerationRangeError(ValueError):
    """Exhaustive enumeration was requested outside the supported genus range."""


@dataclass(frozen=True)
class P2Point:
    s_part: BitVec2
    x_part: BitVec2

    @property
    def genus(self) -> int:
        return self.s_part.length // 2

    def index(self) -> int:
        return self.s_part.bits | (self.x_part.bits << self.s_part.length)

    @classmethod
    def from_index(cls, genus: int, index: int) -> P2Point:
        k = 2 * genus
        return cls(BitVec2(k, index & ((1 << k) - 1)), BitVec2(4 * genus - 6, index >> k))

    def __str__(self) -> str:
        return f"({self.s_part}|{self.x_part})"


@dataclass(frozen=True)
class SectionClass:
    s: BitVec2

    def __str__(self) -> str:
        return f"section[{self.s}]"


@dataclass(frozen=True)
class WeightClass:
    m: int

    def __str__(self) -> str:
        return f"weight[m={self.m}]"


Label = Union[SectionClass, WeightClass]


@dataclass
class Orbit:
    representative: P2Point
    size: int
    label: Label
    euler_class: int


@dataclass
class ClassSummary:
    """Orbits sharing a label kind: all section orbits, or one weight class."""

    kind: str  # "section" or "weight"
    m: int | None
    euler_class: int
    orbit_count: int
    orbit_size: int


@dataclass
class OrbitReport:
    genus: int
    mode: str  # "enumerate" or "classify"
    total_points: int
    classes: list[ClassSummary]
    orbits: list[Orbit] = field(default_factory=list)
    enumeration: str = "done"

    @property
    def orbit_count(self) -> int:
        return sum(c.orbit_count for c in self.classes)


# -- classification --------------------------------------------------------------------


def _boundary_table(mdl: MonodromyModel) -> list[int]:
    """Vertex-space boundary of each permutation-part basis vector, packed."""
    basis = mdl.basis
    return [mdl.graph.boundary(v).bits for v in basis.vectors[basis.n_section:]]


def vertex_lift(point: P2Point, genus: int) -> BitVec2:
    """Even-weight vertex vector representing the permutation part of ``point``."""
    mdl = model(genus)
    y = 0
    for j, b in enumerate(_boundary_table(mdl)):
        if point.x_part[j]:
            y ^= b
    return BitVec2(mdl.graph.vertex_count, y)


def classify(point: P2Point, genus: int) -> Label:
    if point.x_part.is_zero():
        return SectionClass(point.s_part)
    n = 4 * genus - 4
    w = vertex_lift(point, genus).weight()
    return WeightClass(min(w, n - w) // 2)


def euler_class(label: Label, genus: int) -> int:
    """Euler class ``k >= 0`` of the components over an orbit with this label."""
    if isinstance(label, SectionClass):
        k = genus - 1
    else:
        k = genus - 1 - label.m
    if not 0 <= k <= genus - 1:
        raise ValueError(f"label {label} out of range for genus {genus}")
    return k


def weight_class_size(genus: int, m: int) -> int:
    """Number of P[2] points whose label is ``WeightClass(m)``."""
    n = 4 * genus - 4
    if 2 * m == n // 2:
        xs = math.comb(n, 2 * m) // 2
    else:
        xs = math.comb(n, 2 * m)
    return 2 ** (2 * genus) * xs


def class_summaries(genus: int) -> list[ClassSummary]:
    out = [ClassSummary("section", None, genus - 1, 2 ** (2 * genus), 1)]
    for m in range(1, genus):
        out.append(ClassSummary("weight", m, genus - 1 - m, 1, weight_class_size(genus, m)))
    return out


def weight_class_representative(genus: int, m: int) -> P2Point:
    """Point with zero section part whose vertex lift is ``{1, ..., 2m}``."""
    mdl = model(genus)
    table = _boundary_table(mdl)
    nv = mdl.graph.vertex_count
    span = SpanTracker(nv)
    for b in table:
        span.add(b)
    span.add((1 << nv) - 1)
    red, combo = span.reduce((1 << (2 * m)) - 1)
    if red:
        raise AssertionError("target is not in the boundary image")
    k = len(table)
    return P2Point(BitVec2(2 * genus, 0), BitVec2(k, combo & ((1 << k) - 1)))


def classify_report(genus: int) -> OrbitReport:
    """Orbit census from the classification alone, with no enumeration."""
    total = 2 ** (6 * genus - 6)
    classes = class_summaries(genus)
    orbits = []
    for c in classes:
        if c.kind == "weight":
            rep = weight_class_representative(genus, c.m)
            orbits.append(Orbit(rep, c.orbit_size, WeightClass(c.m), c.euler_class))
    status = ("skipped: state space too large" if genus > MAX_ENUMERATE_GENUS
              else "not requested")
    return OrbitReport(genus, "classify", total, classes, orbits, status)


# -- exhaustive enumeration ----------------------------------------------------------------


class _Action:
    """All generators applied to arrays of packed points via byte lookup tables."""

    def __init__(self, mats: list[BitMat2], dim: int):
        self.dim = dim
        self.n_chunks = (dim + 7) // 8
        self.tables = []
        for m in mats:
            cols = [c.bits for c in m.columns()]
            chunks = []
            for c in range(self.n_chunks):
                t = np.zeros(256, dtype=np.uint32)
                sub = cols[8 * c: 8 * c + 8]
                for byte in range(256):
                    acc = 0
                    for j, col in enumerate(sub):
                        if (byte >> j) & 1:
                            acc ^= col
                    t[byte] = acc
                chunks.append(t)
            self.tables.append(chunks)

    def images(self, pts: np.ndarray) -> np.ndarray:
        """Images of ``pts`` under every generator, concatenated."""
        bytes_ = [((pts >> (8 * c)) & 0xFF).astype(np.intp) for c in range(self.n_chunks)]
        out = []
        for chunks in self.tables:
            img = chunks[0][bytes_[0]]
            for c in range(1, self.n_chunks):
                img = img ^ chunks[c][bytes_[c]]
            out.append(img)
        return np.concatenate(out)


def _lex_key(pts: np.ndarray, dim: int) -> np.ndarray:
    """Bit-reversed indices: integer order equals lexicographic order of coordinates."""
    rev = np.zeros_like(pts)
    for j in range(dim):
        rev |= ((pts >> j) & 1) << (dim - 1 - j)
    return rev


def label_codes(genus: int, pts: np.ndarray) -> np.ndarray:
    """Vectorised :func:`classify`: section ``s`` -> ``s``, weight ``m`` -> ``2^(2g) + m``."""
    mdl = model(genus)
    k = 2 * genus
    n = 4 * genus - 4
    table = _boundary_table(mdl)
    x = pts >> k
    y = np.zeros_like(pts)
    for j, b in enumerate(table):
        y ^= np.where((x >> j) & 1, np.uint32(b), np.uint32(0)).astype(pts.dtype)
    w = np.bitwise_count(y).astype(np.int64)
    m = np.minimum(w, n - w) // 2
    section = (pts & ((1 << k) - 1)).astype(np.int64)
    return np.where(x == 0, section, (1 << k) + m)


def enumerate_orbits(genus: int, *, check_labels: bool = True) -> OrbitReport:
    """Partition all of P[2] into orbits by breadth-first search.

    Every orbit is labelled with :func:`classify` on its representative (the
    lexicographically least point).  With ``check_labels`` the label is also
    computed for every member to confirm it is an orbit invariant.
    """
    if not 3 <= genus <= MAX_ENUMERATE_GENUS:
        raise EnumerationRangeError(
            f"exhaustive enumeration supports genus 3..{MAX_ENUMERATE_GENUS}; "
            f"use classify mode for genus {genus}")
    mdl = model(genus)
    dim = mdl.basis.dim
    total = 1 << dim
    action = _Action(mdl.p2_generators, dim)
    orbit_of = np.full(total, -1, dtype=np.int32)
    orbits: list[Orbit] = []
    seen_codes: dict[int, int] = {}
    start = 0
    while True:
        start = _next_free(orbit_of, start)
        if start < 0:
            break
        k = len(orbits)
        orbit_of[start] = k
        frontier = np.array([start], dtype=np.uint32)
        members = [frontier]
        while frontier.size:
            imgs = action.images(frontier)
            new = np.unique(imgs[orbit_of[imgs] < 0])
            orbit_of[new] = k
            if new.size:
                members.append(new)
            frontier = new
        allm = np.concatenate(members)
        rep_idx = int(allm[np.argmin(_lex_key(allm, dim))])
        rep = P2Point.from_index(genus, rep_idx)
        label = classify(rep, genus)
        if check_labels:
            codes = label_codes(genus, allm)
            if not np.all(codes == codes[0]):
                raise AssertionError(f"label is not constant on the orbit of {rep}")
            code = int(codes[0])
            if code in seen_codes:
                raise AssertionError(f"orbits {seen_codes[code]} and {k} share label {label}")
            seen_codes[code] = k
        orbits.append(Orbit(rep, int(allm.size), label, euler_class(label, genus)))
    orbits.sort(key=lambda o: _lex_tuple(o.representative))
    classes = _summaries_from(orbits, genus)
    return OrbitReport(genus, "enumerate", total, classes, orbits)


def _next_free(orbit_of: np.ndarray, start: int, window: int = 1 << 12) -> int:
    """First unvisited index at or after ``start``, or -1; scans in growing windows."""
    n = orbit_of.size
    while start < n:
        hit = np.flatnonzero(orbit_of[start:start + window] < 0)
        if hit.size:
            return start + int(hit[0])
        start += window
        window *= 2
    return -1


def _lex_tuple(p: P2Point) -> tuple[int, ...]:
    return tuple(p.s_part) + tuple(p.x_part)


def _summaries_from(orbits: list[Orbit], genus: int) -> list[ClassSummary]:
    sections = [o for o in orbits if isinstance(o.label, SectionClass)]
    out = []
    if sections:
        sizes = {o.size for o in sections}
        out.append(ClassSummary("section", None, genus - 1, len(sections),
                                sizes.pop() if len(sizes) == 1 else -1))
    by_m: dict[int, list[Orbit]] = {}
    for o in orbits:
        if isinstance(o.label, WeightClass):
            by_m.setdefault(o.label.m, []).append(o)
    for m in sorted(by_m):
        os_ = by_m[m]
        sizes = {o.size for o in os_}
        out.append(ClassSummary("weight", m, genus - 1 - m, len(os_),
                                sizes.pop() if len(sizes) == 1 else -1))
    return out


def orbit_report(genus: int, mode: str = "auto") -> OrbitReport:
    if mode == "auto":
        mode = "enumerate" if genus <= MAX_ENUMERATE_GENUS else "classify"
    if mode == "enumerate":
        return enumerate_orbits(genus)
    if mode == "classify":
        return classify_report(genus)
    raise ValueError(f"unknown mode {mode!r}")


# -- components ----------------------------------------------------------------------------


@dataclass
class ComponentCount:
    genus: int
    as_complex: int
    full_real: int
    decomposition: dict[str, int]
    enumerated_orbits: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def decomposition_sum(self) -> int:
        return sum(self.decomposition.values())

    @property
    def consistent(self) -> bool:
        ok = self.decomposition_sum == self.full_real
        if self.enumerated_orbits is not None:
            ok = ok and self.enumerated_orbits == self.as_complex
        return ok


def component_count(genus: int, enumerated: OrbitReport | None = None) -> ComponentCount:
    """Closed-form component counts, cross-checked against an orbit census if given.

    ``as_complex`` counts components seen inside the SL(2,C) moduli space
    (Euler class ``k >= 0``); ``full_real`` also separates ``k`` from ``-k``.
    """
    if genus < 2:
        raise ValueError("genus >= 2 required")
    h = 2 ** (2 * genus)
    as_complex = h + genus - 1
    full_real = 2 * h + 2 * genus - 3
    decomposition = {"k=0": 1, "k=+-1..+-(g-2)": 2 * (genus - 2), "k=+-(g-1)": 2 * h}
    notes = []
    count = ComponentCount(genus, as_complex, full_real, decomposition, notes=notes)
    if enumerated is not None:
        if enumerated.genus != genus:
            raise ValueError("orbit report is for a different genus")
        count.enumerated_orbits = enumerated.orbit_count
    if genus == 2:
        notes.append("genus 2: formula evaluation only, orbit enumeration not available")
    return count
