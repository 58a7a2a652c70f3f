"""Seeded random instances for the property suites and the self test.

All generation goes through ``random.Random(seed)`` so failures are
reproducible from the reported seed alone. Rational scalars are kept
small to bound coefficient growth in exact elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .bundles import BaseGraph
from .covers import CoverRep, LineBundleOnCover
from .fields import GF, QQ, PrimeField, Rationals
from .linalg import Matrix, MatrixSubspace
from .errors import CartanCoverError
from .parabolic import BranchPoint, RamifiedCoverData, RamifiedSheet, riemann_hurwitz_genus


@dataclass(frozen=True)
class CoverInstanceConfig:
    max_vertices: int = 6
    max_edges: int = 9
    max_degree: int = 6


DEFAULT_FIELDS = (QQ, GF(5), GF(7))


def random_base_graph(rng: Random, max_vertices: int = 6, max_edges: int = 9) -> BaseGraph:
    """A connected multigraph: a random tree plus extra edges (loops allowed)."""
    n = rng.randint(1, max_vertices)
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v) if rng.random() < 0.5 else (v, u))
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        edges.append((rng.randrange(n), rng.randrange(n)))
    return BaseGraph(n, tuple(edges))


def random_nonzero_scalar(rng: Random, field):
    if isinstance(field, PrimeField):
        return field.coerce(rng.randint(1, field.p - 1))
    num = rng.choice([1, 2, 3, 5])
    den = rng.choice([1, 2, 3])
    sign = rng.choice([1, -1])
    return Fraction(sign * num, den)


def random_permutation(rng: Random, d: int) -> tuple:
    perm = list(range(d))
    rng.shuffle(perm)
    return tuple(perm)


def random_cover_instance(rng: Random, field, config: CoverInstanceConfig = CoverInstanceConfig()):
    """A random cover with a random line bundle on it."""
    base = random_base_graph(rng, config.max_vertices, config.max_edges)
    d = rng.randint(1, config.max_degree)
    sigma = tuple(random_permutation(rng, d) for _ in base.edges)
    cover = CoverRep(base, d, sigma)
    scalars = tuple(
        tuple(random_nonzero_scalar(rng, field) for _ in range(d)) for _ in base.edges
    )
    return cover, LineBundleOnCover(cover, field, scalars)


def random_invertible_matrix(rng: Random, field, d: int, tries: int = 100) -> Matrix:
    for _ in range(tries):
        if isinstance(field, Rationals):
            rows = [
                [Fraction(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d)
            ]
        else:
            rows = [
                [field.coerce(rng.randrange(field.p)) for _ in range(d)]
                for _ in range(d)
            ]
        m = Matrix(field, rows)
        if m.is_invertible():
            return m
    raise AssertionError("failed to sample an invertible matrix")


def random_matrix(rng: Random, field, d: int) -> Matrix:
    if isinstance(field, Rationals):
        rows = [[Fraction(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d)]
    else:
        rows = [
            [field.coerce(rng.randrange(field.p)) for _ in range(d)] for _ in range(d)
        ]
    return Matrix(field, rows)


def random_subspace_for_cartan_test(rng: Random, field, d: int) -> MatrixSubspace:
    """Mixed strategies so every classification verdict shows up."""
    strategy = rng.randrange(4)
    if strategy == 0:
        # conjugated diagonal algebra: always split Cartan
        t = random_invertible_matrix(rng, field, d)
        return MatrixSubspace.diagonal_algebra(field, d).conjugated(t)
    if strategy == 1:
        # span of powers of one matrix: commutative, split or not
        m = random_matrix(rng, field, d)
        powers = [Matrix.identity(field, d)]
        for _ in range(d - 1):
            powers.append(powers[-1] @ m)
        return MatrixSubspace(field, d, powers)
    if strategy == 2:
        # random spanning set of the target dimension
        return MatrixSubspace(field, d, [random_matrix(rng, field, d) for _ in range(d)])
    # random dimension, frequently wrong
    k = rng.randint(1, d + 1)
    return MatrixSubspace(field, d, [random_matrix(rng, field, d) for _ in range(k)])


def random_ramified_cover_data(
    rng: Random,
    max_degree: int = 8,
    max_branch_points: int = 5,
    max_weight_denominator: int = 12,
    max_tries: int = 200,
) -> tuple:
    """Valid ramified cover data with weights, plus a line-bundle degree.

    Sampled by rejection: profiles are drawn per component per branch
    point, then the data must pass parity and nonnegative-genus checks.
    """
    for _ in range(max_tries):
        g_x = rng.randint(0, 2)
        d = rng.randint(1, max_degree)
        comps = _random_composition(rng, d, rng.randint(1, min(3, d)))
        branch = []
        for _ in range(rng.randint(0, max_branch_points)):
            sheets = []
            for j, dj in enumerate(comps):
                for b in _random_composition(rng, dj, rng.randint(1, dj)):
                    sheets.append(
                        RamifiedSheet(b, _random_weight(rng, max_weight_denominator), j)
                    )
            branch.append(BranchPoint(tuple(sheets)))
        extra = []
        for _ in range(rng.randint(0, 2)):
            extra.append(
                tuple(_random_weight(rng, max_weight_denominator) for _ in range(d))
            )
        data = RamifiedCoverData(g_x, d, tuple(comps), tuple(branch), tuple(extra))
        try:
            data.validate()
            riemann_hurwitz_genus(data)
        except CartanCoverError:
            continue
        return data, rng.randint(-4, 6)
    raise AssertionError("failed to sample valid ramified cover data")


def _random_composition(rng: Random, total: int, parts: int) -> list:
    """A random composition of ``total`` into exactly ``parts`` positive parts."""
    if parts >= total:
        return [1] * total
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    bounds = [0, *cuts, total]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def _random_weight(rng: Random, max_denominator: int) -> Fraction:
    den = rng.randint(1, max_denominator)
    num = rng.randrange(den)
    return Fraction(num, den)
