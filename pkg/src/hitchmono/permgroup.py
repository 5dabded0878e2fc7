"""Permutations and a deterministic Schreier-Sims stabilizer chain.

Points are ``1..n`` in the public API (cycles, ``__call__``); ``images`` is the
0-based array form, ``images[i]`` being the image of point ``i + 1`` minus one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Perm:
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a permutation: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Perm:
        """Build from 1-based cycles; cycles are composed left to right as written."""
        p = cls.identity(n)
        for cyc in cycles:
            img = list(range(n))
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
            p = p @ cls(tuple(img))
        return p

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> Perm:
        img = list(range(n))
        img[a - 1], img[b - 1] = b - 1, a - 1
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1] + 1

    def __matmul__(self, other: Perm) -> Perm:
        """``(p @ q)(i) = p(q(i))``."""
        return compose(self, other)

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(k + 1 for k in cyc))
        return out

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def compose(p: Perm, q: Perm) -> Perm:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    pi = p.images
    return Perm(tuple(pi[j] for j in q.images))


def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(p[j] for j in q)


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


class StabilizerChain:
    """Stabilizer chain built by the incremental Schreier-Sims algorithm.

    The base is extended with the smallest moved point, so for a fixed
    generator list the chain is the same on every run.
    """

    def __init__(self, generators: Sequence[Perm]):
        if not generators:
            raise ValueError("need at least one generator")
        n = generators[0].degree
        if any(g.degree != n for g in generators):
            raise ValueError("generators have different degrees")
        self.degree = n
        self.identity = tuple(range(n))
        self.base: list[int] = []
        self.gens: list[list[tuple[int, ...]]] = []  # strong generators per level
        self.transversals: list[dict[int, tuple[int, ...]]] = []
        # (point, generator index) pairs whose Schreier generator already sifts
        self._done: list[set[tuple[int, int]]] = []
        for g in generators:
            if not g.is_identity():
                self._extend(g.images, 0)

    def _new_level(self, point: int) -> None:
        self.base.append(point)
        self.gens.append([])
        self.transversals.append({point: self.identity})
        self._done.append(set())

    def _orbit_update(self, level: int) -> list[tuple[int, ...]]:
        """Recompute the transversal at ``level``; return newly reached coset reps."""
        trans = self.transversals[level]
        gens = self.gens[level]
        queue = list(trans)
        added = []
        i = 0
        while i < len(queue):
            pt = queue[i]
            i += 1
            u = trans[pt]
            for s in gens:
                img = s[pt]
                if img not in trans:
                    trans[img] = _mul(s, u)
                    queue.append(img)
                    added.append(img)
        return added

    def sift(self, g: tuple[int, ...], start: int = 0) -> tuple[tuple[int, ...], int]:
        """Strip ``g`` through levels ``start..``; return residue and the level it stopped at."""
        for level in range(start, len(self.base)):
            b = self.base[level]
            img = g[b]
            u = self.transversals[level].get(img)
            if u is None:
                return g, level
            g = _mul(_inv(u), g)
        return g, len(self.base)

    def _extend(self, g: tuple[int, ...], level: int) -> None:
        residue, stop = self.sift(g, level)
        if residue == self.identity:
            return
        if stop == len(self.base):
            moved = next(i for i, j in enumerate(residue) if i != j)
            self._new_level(moved)
        # residue joins the strong generators at every level from `level` to `stop`
        for lv in range(level, stop + 1):
            self.gens[lv].append(residue)
        for lv in range(stop, level - 1, -1):
            self._close_level(lv)

    def _close_level(self, level: int) -> None:
        """Add Schreier generators of ``level`` until its stabilizer is complete."""
        trans = self.transversals[level]
        done = self._done[level]
        changed = True
        while changed:
            changed = False
            self._orbit_update(level)
            for pt, u in list(trans.items()):
                for k, s in enumerate(list(self.gens[level])):
                    if (pt, k) in done:
                        continue
                    done.add((pt, k))
                    schreier = _mul(_inv(trans[s[pt]]), _mul(s, u))
                    if schreier == self.identity:
                        continue
                    residue, stop = self.sift(schreier, level + 1)
                    if residue != self.identity:
                        self._extend(residue, level + 1)
                        changed = True

    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def contains(self, p: Perm) -> bool:
        if p.degree != self.degree:
            raise ValueError(f"degree mismatch: {p.degree} vs {self.degree}")
        residue, _ = self.sift(p.images)
        return residue == self.identity


def group_order(generators: Sequence[Perm]) -> int:
    return StabilizerChain(generators).order()


def membership(p: Perm, generators: Sequence[Perm]) -> bool:
    return StabilizerChain(generators).contains(p)
