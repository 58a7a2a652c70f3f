"""Parabolic structure on the pushforward of a line bundle along a ramified cover.

The cover of curves is given purely combinatorially: base genus, degree,
component degrees, and per branch point the ramification profile with a
component assignment and an optional weight on each sheet. Over a branch
point, a sheet of multiplicity b with weight w contributes a complete
local flag whose step l carries weight (l + w)/b; merging all sheets (and
any unramified parabolic sheets) gives the weighted filtration of the
pushforward fiber. Degrees come out of the Euler characteristic and the
genus of each component out of the ramification count, and the parabolic
degree is conserved by the pushforward, which the toolkit checks exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .errors import DimensionMismatch, NegativeGenus, NonIntegralGenus, ParseError


def parse_weight(w) -> Fraction:
    """Coerce to an exact rational parabolic weight in [0, 1)."""
    if isinstance(w, bool):
        raise ParseError("booleans are not parabolic weights")
    if isinstance(w, float):
        raise ParseError("parabolic weights must be exact rationals, not floats")
    if isinstance(w, str):
        num, _, den = w.partition("/")
        try:
            w = Fraction(int(num), int(den)) if den else Fraction(int(num))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed weight {w!r}") from None
    else:
        w = Fraction(w)
    if not 0 <= w < 1:
        raise ParseError(f"parabolic weight {w} outside [0, 1)")
    return w


@dataclass(frozen=True)
class RamifiedSheet:
    """One point of the fiber over a branch point."""

    multiplicity: int
    weight: Fraction
    component: int


@dataclass(frozen=True)
class BranchPoint:
    sheets: tuple

    def profile(self) -> tuple:
        return tuple(s.multiplicity for s in self.sheets)


@dataclass(frozen=True)
class RamifiedCoverData:
    """A ramified cover of curves with weighted parabolic data upstairs.

    ``component_degrees`` lists the degree of each component of the cover;
    ``extra_parabolic_points`` are base points outside the branch locus,
    each carrying one weight per sheet of the full fiber.
    """

    base_genus: int
    degree: int
    component_degrees: tuple
    branch_points: tuple
    extra_parabolic_points: tuple = dataclass_field(default=())

    def validate(self) -> None:
        if self.base_genus < 0:
            raise ParseError("base genus must be nonnegative")
        if self.degree < 1:
            raise ParseError("degree must be positive")
        if sum(self.component_degrees) != self.degree or any(
            k < 1 for k in self.component_degrees
        ):
            raise ParseError("component degrees must be positive and sum to the degree")
        c = len(self.component_degrees)
        for bp in self.branch_points:
            if sum(s.multiplicity for s in bp.sheets) != self.degree:
                raise DimensionMismatch("branch profile must sum to the degree")
            for s in bp.sheets:
                if s.multiplicity < 1:
                    raise ParseError("sheet multiplicities must be positive")
                if not 0 <= s.component < c:
                    raise ParseError("sheet assigned to a nonexistent component")
                parse_weight(s.weight)
            for j, dj in enumerate(self.component_degrees):
                got = sum(s.multiplicity for s in bp.sheets if s.component == j)
                if got != dj:
                    raise DimensionMismatch(
                        f"component {j} collects multiplicity {got}, needs {dj}"
                    )
        for weights in self.extra_parabolic_points:
            if len(weights) != self.degree:
                raise DimensionMismatch("one weight per sheet required away from branching")
            for w in weights:
                parse_weight(w)
        for j in range(c):
            if self.ramification_sum(j) % 2 != 0:
                raise NonIntegralGenus(
                    f"component {j} has odd total ramification"
                )

    def ramification_sum(self, component: int | None = None) -> int:
        total = 0
        for bp in self.branch_points:
            for s in bp.sheets:
                if component is None or s.component == component:
                    total += s.multiplicity - 1
        return total


@dataclass(frozen=True)
class FlagStep:
    level: int
    weight: Fraction
    dimension: int
    basis_indices: tuple  # the step is the span of e_level .. e_(b-1)


@dataclass(frozen=True)
class LocalFlagModel:
    """Explicit local model of the pushforward flag for one ramified sheet."""

    multiplicity: int
    weight: Fraction
    steps: tuple

    def jump_weights(self) -> tuple:
        return tuple(step.weight for step in self.steps)


def local_flags(multiplicity: int, weight) -> LocalFlagModel:
    """The complete flag of a sheet of multiplicity b with weight w.

    Step l is the span of the last b - l coordinates and carries weight
    (l + w)/b, which increases strictly with l and stays inside [0, 1).
    """
    b = int(multiplicity)
    if b < 1:
        raise DimensionMismatch("multiplicity must be positive")
    w = parse_weight(weight)
    steps = []
    for level in range(b):
        steps.append(FlagStep(level, (level + w) / b, b - level, tuple(range(level, b))))
    return LocalFlagModel(b, w, tuple(steps))


@dataclass(frozen=True)
class WeightedFiltration:
    """Decreasing (weight, dimension-jump) pairs with positive jumps."""

    jumps: tuple

    def total_dimension(self) -> int:
        return sum(j for _w, j in self.jumps)

    def weight_sum(self) -> Fraction:
        return sum((w * j for w, j in self.jumps), Fraction(0))

    def is_trivial(self) -> bool:
        return all(w == 0 for w, _j in self.jumps)


def merge_fiber_filtration(flags, unramified_weights, rank: int) -> WeightedFiltration:
    """Merge per-sheet weight data into one filtration of the fiber.

    Each ramified sheet contributes one line per flag step at that step's
    weight; each unramified parabolic sheet contributes its single line.
    Jumps at equal weights add up, and the result is sorted by strictly
    decreasing weight.
    """
    tally: dict[Fraction, int] = {}
    total = 0
    for flag in flags:
        for step in flag.steps:
            tally[step.weight] = tally.get(step.weight, 0) + 1
            total += 1
    for w in unramified_weights:
        w = parse_weight(w)
        tally[w] = tally.get(w, 0) + 1
        total += 1
    if total != rank:
        raise DimensionMismatch(f"fiber data spans dimension {total}, rank is {rank}")
    jumps = tuple(sorted(tally.items(), key=lambda kv: kv[0], reverse=True))
    return WeightedFiltration(jumps)


@dataclass(frozen=True)
class GenusReport:
    per_component: tuple
    total: int

    @property
    def euler_characteristic(self) -> int:
        return sum(1 - g for g in self.per_component)


def riemann_hurwitz_genus(data: RamifiedCoverData) -> GenusReport:
    """Per-component genus from 2g - 2 = deg * (2g_X - 2) + total ramification."""
    data.validate()
    out = []
    for j, dj in enumerate(data.component_degrees):
        rhs = dj * (2 * data.base_genus - 2) + data.ramification_sum(j)
        if rhs % 2 != 0:
            raise NonIntegralGenus(f"component {j}: 2g - 2 = {rhs} is odd")
        g = rhs // 2 + 1
        if g < 0:
            raise NegativeGenus(f"component {j} would have genus {g}")
        out.append(g)
    return GenusReport(tuple(out), sum(out))


def degree_direct_image(data: RamifiedCoverData, line_degree: int) -> int:
    """Degree of the pushforward, computed two independent ways.

    The Euler-characteristic route uses the component genera; the
    ramification route subtracts half the total ramification from the
    line-bundle degree. The two evaluations are asserted equal.
    """
    genus = riemann_hurwitz_genus(data)
    chi = genus.euler_characteristic
    euler_route = line_degree + chi - data.degree * (1 - data.base_genus)
    ram = data.ramification_sum()
    if ram % 2 != 0:
        raise NonIntegralGenus("total ramification is odd")
    drop_route = line_degree - ram // 2
    assert euler_route == drop_route
    return euler_route


@dataclass(frozen=True)
class ParabolicPoint:
    label: str
    filtration: WeightedFiltration


@dataclass(frozen=True)
class ParabolicBundleData:
    """The pushforward with its induced parabolic structure."""

    degree: int
    rank: int
    points: tuple


def pushforward_parabolic(data: RamifiedCoverData, line_degree: int) -> ParabolicBundleData:
    """Assemble the parabolic pushforward from degrees, flags, and merges.

    Branch points are labeled b0, b1, ... and extra parabolic points
    u0, u1, ...; points whose filtration carries only weight zero are
    not part of the parabolic divisor.
    """
    data.validate()
    degree = degree_direct_image(data, line_degree)
    points = []
    for i, bp in enumerate(data.branch_points):
        flags = [local_flags(s.multiplicity, s.weight) for s in bp.sheets]
        filt = merge_fiber_filtration(flags, (), data.degree)
        if not filt.is_trivial():
            points.append(ParabolicPoint(f"b{i}", filt))
    for i, weights in enumerate(data.extra_parabolic_points):
        filt = merge_fiber_filtration((), weights, data.degree)
        if not filt.is_trivial():
            points.append(ParabolicPoint(f"u{i}", filt))
    return ParabolicBundleData(degree, data.degree, tuple(points))


def parabolic_degree(bundle: ParabolicBundleData) -> Fraction:
    """Underlying degree plus the weighted sum of all dimension jumps."""
    total = Fraction(bundle.degree)
    for point in bundle.points:
        total += point.filtration.weight_sum()
    return total


@dataclass(frozen=True)
class ConservationReport:
    upstairs: Fraction
    downstairs: Fraction

    @property
    def equal(self) -> bool:
        return self.upstairs == self.downstairs


def check_pardeg_conservation(data: RamifiedCoverData, line_degree: int) -> ConservationReport:
    """Parabolic degree upstairs equals parabolic degree of the pushforward."""
    data.validate()
    upstairs = Fraction(line_degree)
    for bp in data.branch_points:
        for s in bp.sheets:
            upstairs += parse_weight(s.weight)
    for weights in data.extra_parabolic_points:
        for w in weights:
            upstairs += parse_weight(w)
    downstairs = parabolic_degree(pushforward_parabolic(data, line_degree))
    return ConservationReport(upstairs, downstairs)


def tameness_check(weights, p: int) -> tuple:
    """Per weight: the reduced denominator is not divisible by the characteristic."""
    from .fields import is_prime

    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    out = []
    for w in weights:
        w = parse_weight(w)
        out.append(w.denominator % p != 0)
    return tuple(out)
