"""Monodromy generators on the edge space and their action on P[2].

Matrices act on column vectors and products compose right to left: the
element with word ``(e1, e2, ..., ek)`` is ``s_e1 @ s_e2 @ ... @ s_ek``, so
``ek`` acts first.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

from .gf2 import BitMat2, BitVec2, SpanTracker, inverse, kernel_basis, rank
from .permgroup import Perm, StabilizerChain
from .spectral_graph import GraphError, SpectralGraph, build, validate


class BlockFormViolation(AssertionError):
    """An element's matrix in the adapted basis is not block upper-triangular."""

    def __init__(self, message: str, word: Sequence[int]):
        super().__init__(f"{message} (word {list(word)})")
        self.word = tuple(word)


@dataclass(frozen=True)
class GroupElement:
    matrix: BitMat2
    perm: Perm
    word: tuple[int, ...] = ()

    def __matmul__(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.matrix @ other.matrix, self.perm @ other.perm,
                            self.word + other.word)

    def inverse(self) -> GroupElement:
        # every generator is an involution, so the reversed word is the inverse
        return GroupElement(inverse(self.matrix), self.perm.inverse(), self.word[::-1])

    def apply(self, x: BitVec2) -> BitVec2:
        return self.matrix.apply(x)


def identity_element(graph: SpectralGraph) -> GroupElement:
    return GroupElement(BitMat2.identity(graph.n_edges), Perm.identity(graph.vertex_count))


def generator(graph: SpectralGraph, edge_id: int) -> GroupElement:
    """``x -> x + <x, e> e`` on chains, with the endpoint transposition of ``e``."""
    e = graph.edge(edge_id)
    n = graph.n_edges
    rows = [1 << i for i in range(n)]
    rows[edge_id] ^= graph.pairing_mask(edge_id)
    perm = Perm.transposition(graph.vertex_count, *e.ends)
    return GroupElement(BitMat2(n, n, tuple(rows)), perm, (edge_id,))


def word_element(graph: SpectralGraph, word: Sequence[int]) -> GroupElement:
    out = identity_element(graph)
    for e in word:
        out = out @ _generators(graph)[e]
    return out


def _generators(graph: SpectralGraph) -> list[GroupElement]:
    # cached on the instance like a cached_property; the graph itself is immutable
    cache = graph.__dict__.get("_generator_cache")
    if cache is None:
        cache = graph.__dict__["_generator_cache"] = [generator(graph, e) for e in range(graph.n_edges)]
    return cache


def all_generators(graph: SpectralGraph) -> list[GroupElement]:
    return list(_generators(graph))


# -- permutations as words in the path generators ----------------------------------


def transposition_word(graph: SpectralGraph, a: int, b: int) -> tuple[int, ...]:
    """Word in ``e_1..e_{4g-5}`` whose permutation swaps vertices ``a`` and ``b``."""
    a, b = sorted((a, b))
    path = graph.cycle_edges
    inner = [path[i - 1] for i in range(b - 1, a - 1, -1)]  # e_{b-1} .. e_a
    return tuple(inner + inner[-2::-1])


def permutation_word(graph: SpectralGraph, perm: Perm) -> tuple[int, ...]:
    """Word in the path generators realizing ``perm`` (bubble sort)."""
    path = graph.cycle_edges
    img = list(perm.images)
    steps = []
    done = False
    while not done:
        done = True
        for i in range(len(img) - 1):
            if img[i] > img[i + 1]:
                # right-multiplying by the transposition (i+1, i+2) swaps array entries
                img[i], img[i + 1] = img[i + 1], img[i]
                steps.append(path[i])
                done = False
    return tuple(reversed(steps))


def face_word(graph: SpectralGraph, edge_id: int) -> tuple[int, ...]:
    """Transposition word along the ``E'`` edges of the face containing an ``E0`` edge.

    For a face with path ``p1, p2, p3`` from one endpoint of the edge to the
    other this is ``p3 p2 p1 p2 p3`` (``p2 p1 p2`` for a triangle).
    """
    a, b = graph.edge(edge_id).ends
    rest = [k for k in graph.faces[graph.face_of(edge_id)] if k != edge_id]
    path = []
    cur = a
    while rest:
        k = next(k for k in rest if cur in graph.edges[k].ends)
        rest.remove(k)
        path.append(k)
        cur = graph.edges[k].ends[0] if graph.edges[k].ends[1] == cur else graph.edges[k].ends[1]
    if cur != b:
        raise GraphError(f"face of {graph.edge(edge_id).label} is not a path plus the edge")
    return tuple(path[:0:-1] + path)


def s_element(graph: SpectralGraph, edge_id: int) -> GroupElement:
    """Lift of the endpoint transposition of an edge to the cycle generators.

    ``E'`` edges lift to their own generator; ``E0`` edges lift along the
    ``E'`` edges of their face.  When that face contains the closing edge
    ``(4g-4, 1)`` the lift is not in the subgroup of the path generators.
    """
    if edge_id in set(graph.e_prime):
        return _generators(graph)[edge_id]
    return word_element(graph, face_word(graph, edge_id))


def h_element(graph: SpectralGraph, edge_id: int) -> GroupElement:
    """``sigma_e`` composed with the inverse of its lift: ``x -> x + <e, x> Delta_e`` on ``E0``."""
    return _generators(graph)[edge_id] @ s_element(graph, edge_id).inverse()


def semidirect_split(graph: SpectralGraph, g_elt: GroupElement,
                     s: GroupElement | None = None) -> tuple[GroupElement, GroupElement]:
    """Write ``g = h @ s`` with ``h`` of trivial permutation.

    By default ``s`` is the bubble-sort word in the path generators
    ``e_1..e_{4g-5}``, which generate a copy of the symmetric group.  A
    different lift with the same permutation may be passed in.
    """
    if s is None:
        s = word_element(graph, permutation_word(graph, g_elt.perm))
    elif s.perm != g_elt.perm:
        raise ValueError("lift has a different permutation")
    h = g_elt @ s.inverse()
    if not h.perm.is_identity():
        raise AssertionError("split produced a non-trivial permutation part")
    return h, s


# -- Coxeter relations ------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: object = None
    detail: str = ""


def coxeter_check(graph: SpectralGraph) -> list[CheckResult]:
    """Symmetric-group relations among the cycle generators ``e_1..e_{4g-4}``."""
    gens = _generators(graph)
    cyc = graph.cycle_edges
    n = len(cyc)
    mats = [gens[e].matrix for e in cyc]
    ident = BitMat2.identity(graph.n_edges)

    bad_sq = [i + 1 for i, m in enumerate(mats) if not (m @ m).is_identity()]
    bad_all_sq = [str(graph.edges[g.word[0]].label) for g in gens
                  if not (g.matrix @ g.matrix).is_identity()]
    bad_comm = []
    bad_braid = []
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if mats[i] @ mats[j] != mats[j] @ mats[i]:
                bad_comm.append((i + 1, j + 1))
        j = (i + 1) % n
        p = mats[i] @ mats[j]
        if p @ p @ p != ident:
            bad_braid.append((i + 1, j + 1))
    return [
        CheckResult("coxeter: involutions", not bad_sq, bad_sq or None),
        CheckResult("coxeter: all generators are involutions", not bad_all_sq, bad_all_sq or None),
        CheckResult("coxeter: distant generators commute", not bad_comm, bad_comm or None),
        CheckResult("coxeter: braid relation", not bad_braid, bad_braid or None,
                    f"checked {n} consecutive pairs including (e_{n}, e_1)"),
    ]


# -- adapted basis and block form ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class AdaptedBasis:
    """Coset representatives in C1 for a basis of P[2] compatible with the filtration.

    ``vectors[:n_section]`` lie in ker(boundary); the rest map onto a
    complement of ``(1,...,1)`` in the boundary image.
    """

    genus: int
    vectors: tuple[BitVec2, ...]
    n_section: int
    relations: tuple[BitVec2, ...]
    section_sources: tuple[str, ...]
    perm_sources: tuple[int, ...]
    transform: BitMat2 = field(repr=False)
    transform_inv: BitMat2 = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def n_perm(self) -> int:
        return self.dim - self.n_section

    def coordinates(self, chain: BitVec2) -> BitVec2:
        """Coordinates in P[2] of the class of ``chain``."""
        full = self.transform_inv.apply(chain)
        return BitVec2(self.dim, full.bits & ((1 << self.dim) - 1))

    def lift(self, coords: BitVec2 | int) -> BitVec2:
        bits = coords if isinstance(coords, int) else coords.bits
        out = 0
        for j, v in enumerate(self.vectors):
            if (bits >> j) & 1:
                out ^= v.bits
        return BitVec2(self.vectors[0].length, out)


def adapted_basis(graph: SpectralGraph) -> AdaptedBasis:
    """Pick ``2g`` face boundaries and ``4g-6`` path edges forming a basis of P[2].

    Face boundaries of non-special ``E0`` edges are preferred; the choice is
    greedy, keeping a vector only if it is independent of the relations and
    of the vectors already kept.  Exactly one path edge is left out.
    """
    g = graph.genus
    rel = graph.relations()
    relvecs = rel.quotient_generators()
    span = SpanTracker(graph.n_edges)
    for v in relvecs:
        span.add(v.bits)
    special = set(graph.special_edges)
    e0 = sorted(graph.e_zero, key=lambda e: (e in special, e))
    sections: list[BitVec2] = []
    sources: list[str] = []
    for e in e0:
        d = graph.delta(e)
        if span.add(d.bits):
            sections.append(d)
            sources.append(f"Delta_{graph.edges[e].label}")
    if len(sections) != 2 * g:
        raise GraphError(f"face boundaries give {len(sections)} section vectors, expected {2 * g}")
    # scanning the path from its far end drops the first droppable edge e_1
    kept = [e for e in reversed(graph.beta_prime) if span.add(graph.edge_vec(e).bits)]
    psources = sorted(kept, key=graph.beta_prime.index)
    perms = [graph.edge_vec(e) for e in psources]
    if len(perms) != 4 * g - 6:
        raise GraphError(f"path edges give {len(perms)} vectors, expected {4 * g - 6}")
    vectors = tuple(sections + perms)
    full = list(vectors) + relvecs
    if rank([v.bits for v in full]) != graph.n_edges:
        raise GraphError("adapted basis plus relations does not span C1")
    t = BitMat2.from_columns(full)
    return AdaptedBasis(g, vectors, 2 * g, tuple(relvecs), tuple(sources), tuple(psources),
                        t, inverse(t))


@dataclass(frozen=True)
class BlockForm:
    A: BitMat2
    pi: BitMat2
    matrix: BitMat2


def p2_matrix(g_elt: GroupElement | BitMat2, basis: AdaptedBasis) -> BitMat2:
    """Matrix of the induced action on P[2] in the adapted basis.

    Raises :class:`BlockFormViolation` if the relation span is not preserved.
    """
    m = g_elt.matrix if isinstance(g_elt, GroupElement) else g_elt
    word = g_elt.word if isinstance(g_elt, GroupElement) else ()
    full = basis.transform_inv @ m @ basis.transform
    d = basis.dim
    n = full.nrows
    # columns d.. are the relations; their images must have no P[2] component
    upper = full.submatrix(range(0, d), range(d, n))
    if not upper.is_zero():
        raise BlockFormViolation("relation span is not preserved", word)
    return full.submatrix(range(0, d), range(0, d))


def block_decompose(g_elt: GroupElement | BitMat2, basis: AdaptedBasis) -> BlockForm:
    word = g_elt.word if isinstance(g_elt, GroupElement) else ()
    p2 = p2_matrix(g_elt, basis)
    k = basis.n_section
    d = basis.dim
    top_left = p2.submatrix(range(0, k), range(0, k))
    bottom_left = p2.submatrix(range(k, d), range(0, k))
    if not top_left.is_identity():
        raise BlockFormViolation("upper-left block is not the identity", word)
    if not bottom_left.is_zero():
        raise BlockFormViolation("lower-left block is not zero", word)
    return BlockForm(p2.submatrix(range(0, k), range(k, d)), p2.submatrix(range(k, d), range(k, d)), p2)


def quotient_permutation_matrix(graph: SpectralGraph, perm: Perm, basis: AdaptedBasis) -> BitMat2:
    """Action of ``perm`` on ``B0 / <(1,...,1)>`` in the basis ``boundary(perm-part vectors)``.

    Computed from the vertex permutation alone, independent of any chain-level
    matrix.
    """
    nv = graph.vertex_count
    images = [graph.boundary(v) for v in basis.vectors[basis.n_section:]]
    gens = images + [BitVec2.ones(nv)]
    span = SpanTracker(nv)
    for v in gens:
        span.add(v.bits)
    k = len(images)
    cols = []
    for y in images:
        py = 0
        for i in range(nv):
            if (y.bits >> i) & 1:
                py |= 1 << (perm.images[i])
        red, combo = span.reduce(py)
        if red:
            raise AssertionError("permuted boundary left the boundary image")
        cols.append(BitVec2(k, combo & ((1 << k) - 1)))
    return BitMat2.from_columns(cols)


# -- the kernel N ---------------------------------------------------------------------


def _flatten(a: BitMat2) -> int:
    out = 0
    for i, r in enumerate(a.rows):
        out |= r << (i * a.ncols)
    return out


@dataclass
class KernelCertificate:
    rank: int
    target: int
    seeds: int
    conjugations: int
    random_samples: int
    sample_words: list[tuple[int, ...]]

    @property
    def full(self) -> bool:
        return self.rank == self.target


def kernel_rank_certificate(graph: SpectralGraph, basis: AdaptedBasis,
                            *, seed: int = 0, random_fallback: bool = True) -> KernelCertificate:
    """Rank of the span of upper-right blocks of elements with trivial permutation.

    Seeds are ``h_e = s_e o s(e)^-1`` for every edge off the path; the span is
    then closed under conjugation by the path generators, which sends a block
    ``A`` to ``A pi``.  Every vector added is the block of an explicit word.
    """
    g = graph.genus
    k, d = basis.n_section, basis.dim
    target = k * (d - k)
    gens = _generators(graph)
    path_pi = {e: block_decompose(gens[e], basis).pi for e in graph.beta_prime}

    span = SpanTracker(k * (d - k))
    queue: list[tuple[BitMat2, tuple[int, ...]]] = []
    words: list[tuple[int, ...]] = []

    def offer(a: BitMat2, word: tuple[int, ...]) -> bool:
        if span.add(_flatten(a)):
            queue.append((a, word))
            words.append(word)
            return True
        return False

    seeds = [e for e in range(graph.n_edges) if e not in set(graph.beta_prime)]
    for e in seeds:
        h, _ = semidirect_split(graph, gens[e])
        bf = block_decompose(h, basis)
        if not bf.pi.is_identity():
            raise AssertionError("kernel element with non-trivial pi")
        offer(bf.A, h.word)
    conj = 0
    i = 0
    while i < len(queue) and len(span) < target:
        a, word = queue[i]
        i += 1
        for t, pi in path_pi.items():
            conj += 1
            # s_t h s_t has block A pi_t since s_t is an involution
            offer(a @ pi, (t,) + word + (t,))
            if len(span) == target:
                break
    samples = 0
    if random_fallback and len(span) < target:
        rng = random.Random(seed)
        cap = 10 * target
        stale = 0
        while samples < cap and len(span) < target and stale < 200:
            samples += 1
            w = tuple(rng.randrange(graph.n_edges) for _ in range(rng.randint(1, 50)))
            h, _ = semidirect_split(graph, word_element(graph, w))
            stale = 0 if offer(block_decompose(h, basis).A, h.word) else stale + 1
    return KernelCertificate(len(span), target, len(seeds), conj, samples,
                             [w for w in words[:3]])


# -- theorem verification --------------------------------------------------------------


def random_words(graph: SpectralGraph, count: int, max_len: int, seed: int) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.randrange(graph.n_edges) for _ in range(rng.randint(1, max_len)))
            for _ in range(count)]


@dataclass
class Certificate:
    genus: int
    checks: list[CheckResult]
    group_order: int | None = None
    kernel: KernelCertificate | None = None
    observations: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# a malformed graph can break any construction step; such groups report a failure
_CHECK_ERRORS = (ValueError, AssertionError, KeyError, IndexError)

CHECK_GROUPS = ("graph", "dimensions", "coxeter", "triviality", "block", "symmetric", "kernel")


class MonodromyModel:
    """Graph plus the derived data every check needs, computed once."""

    def __init__(self, graph: SpectralGraph):
        self.graph = graph
        self.genus = graph.genus

    @cached_property
    def relations(self):
        return self.graph.relations()

    @cached_property
    def basis(self) -> AdaptedBasis:
        return adapted_basis(self.graph)

    @cached_property
    def generators(self) -> list[GroupElement]:
        return all_generators(self.graph)

    @cached_property
    def p2_generators(self) -> list[BitMat2]:
        return [p2_matrix(gen, self.basis) for gen in self.generators]

    # individual check groups; each returns a list of CheckResult

    def check_graph(self) -> list[CheckResult]:
        rep = validate(self.graph)
        return [CheckResult(f"graph: {c.name}", c.ok, None if c.ok else c.detail, c.detail)
                for c in rep.checks]

    def check_dimensions(self) -> list[CheckResult]:
        g = self.genus
        graph = self.graph
        bm = graph.boundary_matrix
        r = rank(bm)
        ker = kernel_basis(bm)
        even = all(graph.boundary(graph.edge_vec(e)).weight() % 2 == 0 for e in range(graph.n_edges))
        relrank = rank([v.bits for v in self.relations.quotient_generators()])
        dim_p2 = graph.n_edges - relrank
        return [
            CheckResult("dimensions: dim ker(boundary) = 2g+3", len(ker) == 2 * g + 3,
                        None if len(ker) == 2 * g + 3 else len(ker), f"{len(ker)}"),
            CheckResult("dimensions: dim image(boundary) = 4g-5", r == 4 * g - 5,
                        None if r == 4 * g - 5 else r, f"{r}"),
            CheckResult("dimensions: image(boundary) = even-weight vectors",
                        even and r == graph.vertex_count - 1, None if even else "odd column"),
            CheckResult("dimensions: rank of relations = 4", relrank == 4,
                        None if relrank == 4 else relrank, f"{relrank}"),
            CheckResult("dimensions: dim P[2] = 6g-6", dim_p2 == 6 * g - 6 == self.basis.dim,
                        None if dim_p2 == 6 * g - 6 else dim_p2, f"{dim_p2}"),
        ]

    def check_coxeter(self) -> list[CheckResult]:
        return coxeter_check(self.graph)

    def check_triviality(self) -> list[CheckResult]:
        graph = self.graph
        ker = kernel_basis(graph.boundary_matrix)
        rels = self.relations.as_dict()
        moved_cycle = []
        moved_rel = []
        bad_boundary = []
        for gen in self.generators:
            label = str(graph.edges[gen.word[0]].label)
            for z in ker:
                if gen.apply(z) != z:
                    moved_cycle.append((label, str(z)))
                    break
            for name in ("x1", "x2", "x4", "x5"):
                if gen.apply(rels[name]) != rels[name]:
                    moved_rel.append((label, name))
            for e in range(graph.n_edges):
                c = graph.edge_vec(e)
                lhs = graph.boundary(gen.apply(c))
                rhs_bits = 0
                for i in graph.boundary(c).support():
                    rhs_bits |= 1 << (gen.perm.images[i])
                if lhs.bits != rhs_bits:
                    bad_boundary.append((label, e))
                    break
        k = self.basis.n_section
        moved_section = []
        for gen, p2 in zip(self.generators, self.p2_generators):
            for j in range(k):
                if p2.column(j).bits != 1 << j:
                    moved_section.append((str(graph.edges[gen.word[0]].label), j))
                    break
        return [
            CheckResult("triviality: cycles fixed pointwise", not moved_cycle, moved_cycle or None),
            CheckResult("triviality: x1, x2, x4, x5 fixed", not moved_rel, moved_rel or None),
            CheckResult("triviality: boundary intertwines permutation", not bad_boundary,
                        bad_boundary or None),
            CheckResult("triviality: section coordinates fixed", not moved_section,
                        moved_section or None),
        ]

    def check_block(self, n_words: int = 100, max_len: int = 50, seed: int = 0) -> list[CheckResult]:
        graph, basis = self.graph, self.basis
        bad_gen = []
        bad_pi = []
        for gen in self.generators:
            try:
                bf = block_decompose(gen, basis)
            except BlockFormViolation as exc:
                bad_gen.append(list(exc.word))
                continue
            if bf.pi != quotient_permutation_matrix(graph, gen.perm, basis):
                bad_pi.append(list(gen.word))
        bad_words = []
        bad_hom = []
        for w in random_words(graph, n_words, max_len, seed):
            elt = word_element(graph, w)
            try:
                bf = block_decompose(elt, basis)
            except BlockFormViolation as exc:
                bad_words.append(list(exc.word))
                continue
            prod = BitMat2.identity(basis.dim)
            for e in w:
                prod = prod @ self.p2_generators[e]
            if prod != bf.matrix or bf.pi != quotient_permutation_matrix(graph, elt.perm, basis):
                bad_hom.append(list(w))
        return [
            CheckResult("block: generators", not bad_gen, bad_gen[:1] or None),
            CheckResult("block: pi is the quotient permutation action", not bad_pi, bad_pi[:1] or None),
            CheckResult(f"block: {n_words} random words", not bad_words, bad_words[:1] or None),
            CheckResult("block: action is a homomorphism", not bad_hom, bad_hom[:1] or None),
        ]

    def check_symmetric(self) -> list[CheckResult]:
        n = self.graph.vertex_count
        want = math.factorial(n)
        path_order = StabilizerChain([self.generators[e].perm for e in self.graph.beta_prime]).order()
        full_order = StabilizerChain([g.perm for g in self.generators]).order()
        return [
            CheckResult("symmetric: path generators give (4g-4)!", path_order == want,
                        None if path_order == want else str(path_order), str(path_order)),
            CheckResult("symmetric: all generators give (4g-4)!", full_order == want,
                        None if full_order == want else str(full_order), str(full_order)),
        ]

    def observations(self) -> dict[str, object]:
        """Facts reported alongside the checks without a pass/fail verdict."""
        wrap = self.graph.cycle_edges[-1]
        out: dict[str, object] = {"special_edges": [str(self.graph.edges[e].label)
                                                    for e in self.graph.special_edges]}
        if wrap is not None:
            h, _ = semidirect_split(self.graph, self.generators[wrap])
            out["closing_generator_in_path_subgroup"] = h.matrix.is_identity()
            out["closing_generator_in_path_subgroup_on_P2"] = p2_matrix(h, self.basis).is_identity()
        return out

    def check_kernel(self) -> tuple[list[CheckResult], KernelCertificate]:
        cert = kernel_rank_certificate(self.graph, self.basis)
        return [CheckResult("kernel: rank of A-blocks = 2g(4g-6)", cert.full,
                            None if cert.full else cert.rank,
                            f"{cert.rank} of {cert.target}")], cert

    def _run_group(self, name: str) -> tuple[list[CheckResult], KernelCertificate | None]:
        try:
            if name == "kernel":
                return self.check_kernel()
            return getattr(self, f"check_{name}")(), None
        except _CHECK_ERRORS as exc:
            return [CheckResult(f"{name}: could not run", False, str(exc), type(exc).__name__)], None

    def verify(self, groups: Sequence[str] = CHECK_GROUPS, threads: int = 1) -> Certificate:
        """Run the selected check groups; results are ordered as in ``CHECK_GROUPS``.

        With ``threads > 1`` the groups run on a thread pool.  Shared data is
        computed up front so the workers only read it.
        """
        unknown = set(groups) - set(CHECK_GROUPS)
        if unknown:
            raise ValueError(f"unknown check groups: {sorted(unknown)}")
        selected = [name for name in CHECK_GROUPS if name in groups]
        if threads > 1:
            try:
                self.relations, self.basis, self.generators
            except _CHECK_ERRORS:
                pass  # the failing groups report it
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(self._run_group, selected))
        else:
            results = [self._run_group(name) for name in selected]
        checks = [c for res, _ in results for c in res]
        kernel = next((k for _, k in results if k is not None), None)
        order = None
        if {"symmetric", "kernel"} <= set(groups) and kernel is not None:
            sym_ok = all(c.passed for c in checks if c.name.startswith("symmetric"))
            if sym_ok and kernel.full:
                order = math.factorial(self.graph.vertex_count) * 2 ** kernel.target
        try:
            obs = self.observations()
        except _CHECK_ERRORS:
            obs = {}
        return Certificate(self.genus, checks, order, kernel, obs)


@lru_cache(maxsize=16)
def model(genus: int) -> MonodromyModel:
    return MonodromyModel(build(genus))


def verify_theorem(genus: int, groups: Sequence[str] = CHECK_GROUPS, threads: int = 1) -> Certificate:
    return model(genus).verify(groups, threads)
