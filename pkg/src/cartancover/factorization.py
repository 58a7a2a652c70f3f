"""Factoring covers through intermediate covers via block systems.

After gauge-fixing along a spanning tree, a cover is encoded by one
permutation per remaining edge. A partition of the fiber into equal
blocks preserved by all those permutations determines an intermediate
cover whose fibers are the blocks, and the pushforward of the structure
sheaf along the intermediate cover sits inside the full pushforward as
the span of block indicator vectors. The fiberwise diagonal embeddings
then fit into a commuting square through the compression map
m -> p . m . i, which is what the summand check certifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .covers import CoverRep, direct_image_line_bundle, tree_gauge, trivial_line_bundle
from .errors import DegreeTooLarge, NotABlockSystem
from .fields import QQ, PrimeField
from .cartan import classify_subspace
from .linalg import Matrix, MatrixSubspace

ENUMERATION_DEGREE_BOUND = 12


@dataclass(frozen=True)
class MonodromyData:
    """A cover after tree gauge: identity on tree edges, a permutation elsewhere."""

    degree: int
    tree_edge_indices: tuple
    generators: tuple  # (edge_index, permutation) per non-tree edge
    vertex_relabelings: tuple  # per vertex, root labels -> original labels


def monodromy_generators(cover: CoverRep) -> MonodromyData:
    """Gauge-fix a cover along a spanning tree and read off the holonomy."""
    gauge = tree_gauge(cover)
    gens = tuple((e, gauge.gauged.sigma[e]) for e in gauge.tree.cotree_edges)
    return MonodromyData(
        cover.degree,
        tuple(sorted(gauge.tree.tree_edges)),
        gens,
        gauge.taus,
    )


@dataclass(frozen=True)
class BlockSystem:
    """A partition of the fiber into equal-size blocks mapped to blocks."""

    blocks: tuple  # sorted tuples of labels, ordered by first element
    degree: int

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_of(self) -> tuple:
        out = [None] * self.degree
        for i, b in enumerate(self.blocks):
            for x in b:
                out[x] = i
        return tuple(out)


def normalize_partition(blocks, degree: int) -> BlockSystem:
    norm = tuple(sorted(tuple(sorted(b)) for b in blocks))
    seen = [x for b in norm for x in b]
    if sorted(seen) != list(range(degree)):
        raise NotABlockSystem("not a partition of the fiber")
    sizes = {len(b) for b in norm}
    if len(sizes) != 1:
        raise NotABlockSystem("blocks have unequal sizes")
    return BlockSystem(norm, degree)


def is_block_system(generators, system: BlockSystem) -> bool:
    block_set = set(system.blocks)
    for _e, g in generators:
        for b in system.blocks:
            if tuple(sorted(g[x] for x in b)) not in block_set:
                return False
    return True


@dataclass(frozen=True)
class BlockSystemCatalog:
    proper: tuple
    trivial: tuple


def _closed_block_families(seed, gens):
    """Close a seed block under the generators; None on partial overlap."""
    family = {seed}
    queue = [seed]
    while queue:
        block = queue.pop()
        for g in gens:
            image = frozenset(g[x] for x in block)
            if image in family:
                continue
            if any(image & other for other in family):
                return None
            family.add(image)
            queue.append(image)
    return family


def _partitions_with_block_size(d: int, b: int, gens):
    """All generator-stable partitions of 0..d-1 into blocks of size b."""

    def extend(remaining):
        if not remaining:
            yield []
            return
        first = min(remaining)
        rest = sorted(remaining - {first})
        for companions in combinations(rest, b - 1):
            seed = frozenset((first, *companions))
            family = _closed_block_families(seed, gens)
            if family is None:
                continue
            used = frozenset(x for blk in family for x in blk)
            family_blocks = sorted(tuple(sorted(blk)) for blk in family)
            for tail in extend(remaining - used):
                yield family_blocks + tail

    for blocks in extend(frozenset(range(d))):
        yield normalize_partition(blocks, d)


def block_systems(mono: MonodromyData) -> BlockSystemCatalog:
    """Enumerate all block systems, separating the two trivial ones.

    Proper systems have block size strictly between 1 and the degree.
    Refuses degrees beyond the enumeration bound instead of sampling.
    """
    d = mono.degree
    if d > ENUMERATION_DEGREE_BOUND:
        raise DegreeTooLarge(f"degree {d} exceeds enumeration bound {ENUMERATION_DEGREE_BOUND}")
    gens = [g for _e, g in mono.generators]
    proper = []
    for b in range(2, d):
        if d % b != 0:
            continue
        proper.extend(_partitions_with_block_size(d, b, gens))
    trivial = [normalize_partition([[x] for x in range(d)], d)]
    if d > 1:
        trivial.append(normalize_partition([list(range(d))], d))
    return BlockSystemCatalog(tuple(proper), tuple(trivial))


@dataclass(frozen=True)
class IntermediateCover:
    """The quotient cover by a block system, with the fiberwise quotient map."""

    quotient: CoverRep
    label_map: tuple  # per vertex, original label -> block label
    consistent: bool


def intermediate_cover(cover: CoverRep, system: BlockSystem) -> IntermediateCover:
    """Quotient a cover by a block system of its monodromy.

    The quotient's fibers are the blocks; each edge permutes blocks as it
    permutes their members. The composite of the quotient map with the
    quotient cover's own projection is checked to reproduce the original
    edge bijections.
    """
    mono = monodromy_generators(cover)
    if not is_block_system(mono.generators, system):
        raise NotABlockSystem("partition is not preserved by the monodromy")
    gauge = tree_gauge(cover)
    block_of = system.block_of()
    m = system.num_blocks
    quotient_sigma = []
    for e in range(len(cover.base.edges)):
        g = gauge.gauged.sigma[e]
        images = [None] * m
        for i, block in enumerate(system.blocks):
            images[i] = block_of[g[block[0]]]
        quotient_sigma.append(tuple(images))
    quotient = CoverRep(cover.base, m, tuple(quotient_sigma))

    label_map = []
    for v in range(cover.base.num_vertices):
        tau_inv = [0] * cover.degree
        for root_label, orig_label in enumerate(gauge.taus[v]):
            tau_inv[orig_label] = root_label
        label_map.append(tuple(block_of[tau_inv[t]] for t in range(cover.degree)))

    consistent = True
    for e, (u, v) in enumerate(cover.base.edges):
        for t in range(cover.degree):
            if label_map[v][cover.sigma[e][t]] != quotient_sigma[e][label_map[u][t]]:
                consistent = False
    return IntermediateCover(quotient, tuple(label_map), consistent)


@dataclass(frozen=True)
class SummandCheckReport:
    """Verdict of the direct-summand test for an intermediate cover."""

    ok: bool
    embedding_flat: bool
    retraction_identity: bool
    quotient_fiber_cartan: bool
    square_commutes: bool
    average_retraction_agrees: bool | None
    witness: str | None = None


def summand_embedding_check(cover: CoverRep, system: BlockSystem, field=QQ) -> SummandCheckReport:
    """Certify that the quotient pushforward embeds as a checked direct summand.

    Constructs the full pushforward W and the quotient pushforward V over
    the given field, embeds V into W by block indicator vectors, retracts
    by picking the first label of each block, and verifies: the embedding
    commutes with all transitions, the retraction splits it, the fiber of
    V embeds as a split Cartan diagonal algebra, and compressing the
    diagonal action of an embedded vector recovers its diagonal action on
    V at every vertex. When the characteristic does not divide the block
    size, the block-average retraction is run as well and must agree.
    """
    inter = intermediate_cover(cover, system)
    gauge = tree_gauge(cover)
    w = direct_image_line_bundle(gauge.gauged, trivial_line_bundle(gauge.gauged, field))
    v = direct_image_line_bundle(inter.quotient, trivial_line_bundle(inter.quotient, field))
    d, m, b = cover.degree, system.num_blocks, system.block_size
    zero, one = field.zero(), field.one()

    include = Matrix(
        field,
        [[one if t in system.blocks[j] else zero for j in range(m)] for t in range(d)],
    )
    first_of_block = [blk[0] for blk in system.blocks]
    retract = Matrix(
        field,
        [[one if t == first_of_block[i] else zero for t in range(d)] for i in range(m)],
    )

    witness = None
    retraction_identity = retract @ include == Matrix.identity(field, m)
    if not retraction_identity:
        witness = "retraction does not split the embedding"

    embedding_flat = True
    for e in range(len(cover.base.edges)):
        if w.transitions[e] @ include != include @ v.transitions[e]:
            embedding_flat = False
            witness = witness or f"embedding not flat on edge {e}"
            break

    diag_v = MatrixSubspace.diagonal_algebra(field, m)
    quotient_fiber_cartan = classify_subspace(diag_v, m).is_split()
    if not quotient_fiber_cartan:
        witness = witness or "quotient fiber does not embed as a split Cartan algebra"

    def diag(vec):
        n = len(vec)
        return Matrix(
            field, [[vec[i] if i == j else zero for j in range(n)] for i in range(n)]
        )

    def square_commutes_with(p_v):
        for _vertex in range(cover.base.num_vertices):
            for j in range(m):
                basis_vec = tuple(one if i == j else zero for i in range(m))
                embedded = include.apply(basis_vec)
                compressed = p_v @ diag(embedded) @ include
                if compressed != diag(basis_vec):
                    return False
        return True

    square_ok = square_commutes_with(retract)
    if not square_ok:
        witness = witness or "compression square does not commute"

    average_agrees = None
    if not (isinstance(field, PrimeField) and b % field.p == 0):
        inv_b = one / field.coerce(b)
        average = Matrix(
            field,
            [[inv_b if t in system.blocks[i] else zero for t in range(d)] for i in range(m)],
        )
        avg_identity = average @ include == Matrix.identity(field, m)
        avg_square = square_commutes_with(average)
        average_agrees = (avg_identity and avg_square) == (retraction_identity and square_ok)
        if not average_agrees:
            witness = witness or "retraction choice changes the verdict"

    ok = (
        retraction_identity
        and embedding_flat
        and quotient_fiber_cartan
        and square_ok
        and (average_agrees is None or average_agrees)
    )
    return SummandCheckReport(
        ok,
        embedding_flat,
        retraction_identity,
        quotient_fiber_cartan,
        square_ok,
        average_agrees,
        witness,
    )
