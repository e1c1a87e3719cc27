"""Generation loci and the iterative stabilization procedure.

The generators of the first-page algebra sit, after normalizing bidegrees by
configuration size, on a locus in [0,1] x [0,d]:

  * one parametric family {((n-1)/n, i/n) : n >= 1} per homology degree i
    with b_i != 0 (the size-n diagonal generators), and
  * the point (1, 0), which is both the accumulation point of every family
    and the location of all zero-block generators.

A stabilization step picks the point of maximal taxi-cab norm x + y.  A
unique maximum gives finite generation outright with a quantitative bound
governed by the gap to the second-largest norm; a tie is resolved toward
the leftmost point (giving generation of filtration-bounded submodules,
witnessed by a separating line of slope > -1) or the rightmost (truncated
quotients, slope < -1).  The bottom-corner sweep instead walks the corners
(0, k) upward.  All geometry is exact rational arithmetic; the infinite
families are handled by closed-form monotonicity, never by truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import factorial

from .errors import DomainError, InputError
from .series import SpaceInput, WeightedSeries, e1_series, series_exp, series_one

__all__ = [
    "Family",
    "GenerationLocus",
    "StabilityStep",
    "StabilityReport",
    "locus_from_space",
    "point_xy",
    "point_norm",
    "point_factor_id",
    "taxicab_extrema",
    "classify_step",
    "bottom_step",
    "iterate_report",
    "remove_point",
    "quotient_series",
    "verify_generator_bound",
]

LIMIT = ("limit",)


@dataclass(frozen=True)
class Family:
    """The generator family {((n-1)/n, degree/n) : n >= 1, n not removed}."""

    degree: int
    coeff: int
    removed: frozenset[int] = frozenset()

    def allows(self, n: int) -> bool:
        return n >= 1 and n not in self.removed

    def allowed_from(self, start: int = 1):
        n = max(start, 1)
        while True:
            if n not in self.removed:
                yield n
            n += 1

    def min_n(self) -> int:
        return next(self.allowed_from(1))


@dataclass(frozen=True)
class GenerationLocus:
    families: tuple[Family, ...]
    limit_present: bool
    top_degree: int
    label: str = ""
    n_cap: int = 8  # display only; classification never truncates

    def family(self, degree: int) -> Family | None:
        for f in self.families:
            if f.degree == degree:
                return f
        return None


def locus_from_space(space: SpaceInput, n_cap: int = 8) -> GenerationLocus:
    families = tuple(
        Family(degree=i, coeff=b) for i, b in enumerate(space.betti) if b
    )
    return GenerationLocus(
        families=families,
        limit_present=True,
        top_degree=space.top_degree,
        label=space.name,
        n_cap=n_cap,
    )


def point_xy(pt) -> tuple[Fraction, Fraction]:
    if pt == LIMIT:
        return Fraction(1), Fraction(0)
    _, i, n = pt
    return Fraction(n - 1, n), Fraction(i, n)


def point_norm(pt) -> Fraction:
    x, y = point_xy(pt)
    return x + y


def point_factor_id(pt) -> str:
    if pt == LIMIT:
        return "limit"
    _, i, n = pt
    return f"main({n},{i})"


def _family_norm(i: int, n: int) -> Fraction:
    return Fraction(n - 1 + i, n)


def _candidates(locus: GenerationLocus):
    """Norm suprema with attainment data, enough to identify the largest and
    second-largest norms exactly.

    Yields (norm, attained, point) where point is a locus point, a
    ("family_tail", i, min_n) marker for a degree-1 family (all of whose
    members attain norm 1), or a ("family_sup", i) marker for a
    non-attained supremum (degree-0 families approach 1 from below).
    """
    out = []
    for f in locus.families:
        if f.degree == 0:
            out.append((Fraction(1), False, ("family_sup", 0)))
        elif f.degree == 1:
            out.append((Fraction(1), True, ("family_tail", 1, f.min_n())))
        else:
            gen = f.allowed_from(1)
            n1 = next(gen)
            n2 = next(gen)
            out.append((_family_norm(f.degree, n1), True, ("family", f.degree, n1)))
            out.append((_family_norm(f.degree, n2), True, ("family", f.degree, n2)))
            # the rest of the family is strictly below the n2 value
    if locus.limit_present:
        out.append((Fraction(1), True, LIMIT))
    return out


def taxicab_extrema(locus: GenerationLocus, count: int = 2):
    """The `count` largest distinct norm values over the locus closure.

    Returns a list of (norm, attained, points) in decreasing norm order;
    points lists the attaining locus points/markers (empty for a supremum
    only approached, as with degree-0 families accumulating at norm 1).
    """
    if not locus.families and not locus.limit_present:
        raise DomainError("empty locus")
    merged: dict[Fraction, tuple[bool, list]] = {}
    for norm, attained, pt in _candidates(locus):
        att, pts = merged.get(norm, (False, []))
        if attained:
            pts.append(pt)
        merged[norm] = (att or attained, pts)
    out = [(norm, att, pts) for norm, (att, pts) in merged.items()]
    out.sort(key=lambda e: e[0], reverse=True)
    return out[:count]


@dataclass(frozen=True)
class StabilityStep:
    point: tuple
    x: Fraction
    y: Fraction
    factor: str
    classification: str  # "absolute" | "bounded" | "truncated"
    norm: Fraction
    epsilon: Fraction | None
    epsilon_attained: bool
    slope: Fraction | None
    terminal: bool

    def bound(self, j: int, m: int = 0) -> Fraction:
        """Largest size in which generators (m = 0) or relations of an
        m-generated presentation can appear, in degree-j defect from the
        stabilized diagonal: (m * norm + j) / epsilon."""
        if self.classification != "absolute" or not self.epsilon:
            raise DomainError("quantitative bound requires an absolute step")
        return (m * self.norm + j) / self.epsilon


def _strictly_left_points(locus: GenerationLocus, x0: Fraction, skip):
    """All locus points with x < x0 (finitely many: family members with
    n < 1/(1-x0)), excluding `skip`."""
    if x0 >= 1:
        raise DomainError("no finite enumeration to the left of the limit point")
    pts = []
    for f in locus.families:
        n = 1
        while Fraction(n - 1, n) < x0:
            pt = ("family", f.degree, n)
            if f.allows(n) and pt != skip:
                pts.append(pt)
            n += 1
    return pts


def _make_step(pt, classification, norm, epsilon, attained, slope, terminal):
    x, y = point_xy(pt)
    return StabilityStep(
        point=pt,
        x=x,
        y=y,
        factor=point_factor_id(pt),
        classification=classification,
        norm=norm,
        epsilon=epsilon,
        epsilon_attained=attained,
        slope=slope,
        terminal=terminal,
    )


def classify_step(locus: GenerationLocus, variant: str = "left") -> StabilityStep:
    """One stabilization step at the maximal taxi-cab norm.

    A unique attained maximum is "absolute" with epsilon the gap to the
    second-largest norm (sup over the rest of the locus; flagged when that
    sup is only approached).  A tie picks the leftmost ("bounded", with an
    exact separating line of slope -1 + epsilon) or rightmost ("truncated",
    slope -1 - epsilon) attained point per the variant; a rightmost tie with
    no attained maximal x falls to the limit point and is terminal.
    """
    if variant not in ("left", "right"):
        raise InputError("variant must be 'left' or 'right'")
    cands = _candidates(locus)
    maxnorm = max(norm for norm, _, _ in cands)
    attaining = [pt for norm, att, pt in cands if norm == maxnorm and att]
    if not attaining:
        raise DomainError("maximal norm is not attained in the locus")

    unique = len(attaining) == 1 and attaining[0][0] != "family_tail"
    if unique:
        v0 = attaining[0]
        rest = [
            (norm, att)
            for norm, att, pt in cands
            if not (pt == v0 and norm == maxnorm)
        ]
        if not rest:
            return _make_step(v0, "absolute", maxnorm, None, False, None, True)
        second = max(norm for norm, _ in rest)
        second_attained = any(att for norm, att in rest if norm == second)
        eps = maxnorm - second
        if eps == 0:
            # the rest of the locus accumulates at the chosen norm
            return _make_step(v0, "absolute", maxnorm, Fraction(0), False, None, True)
        return _make_step(v0, "absolute", maxnorm, eps, second_attained, None, False)

    # Tie.  Concretize markers to their extreme representatives.
    reps = []
    has_tail = False
    for pt in attaining:
        if pt[0] == "family_tail":
            has_tail = True
            reps.append(("family", pt[1], pt[2]))
        else:
            reps.append(pt)
    if variant == "left":
        v0 = min(reps, key=lambda p: (point_xy(p)[0], point_factor_id(p)))
        x0 = point_xy(v0)[0]
        ratios = []
        for pt in _strictly_left_points(locus, x0, skip=v0):
            gap = maxnorm - point_norm(pt)
            run = x0 - point_xy(pt)[0]
            if gap <= 0:
                raise DomainError("leftmost tie point is not leftmost")
            ratios.append(gap / run)
        eps = min(ratios) if ratios else Fraction(1)
        eps = min(eps, Fraction(1))
        return _make_step(v0, "bounded", maxnorm, eps, True, Fraction(-1) + eps, False)

    # rightmost
    if LIMIT in reps:
        return _make_step(LIMIT, "truncated", maxnorm, Fraction(1), True, Fraction(-2), True)
    if has_tail:
        if not locus.limit_present:
            raise DomainError("rightmost tie has no attained maximal point")
        # unreachable: the limit would have tied at norm 1
        raise DomainError("rightmost tie inconsistent with limit bookkeeping")
    v0 = max(reps, key=lambda p: (point_xy(p)[0], point_factor_id(p)))
    x0 = point_xy(v0)[0]
    ratios = []
    limit_ratio = (maxnorm - 1) / (1 - x0)
    for f in locus.families:
        # strictly-right members form the tail n > 1/(1-x0); the ratio is a
        # monotone fractional-linear function of 1/n, so its infimum over
        # the tail is min(value at the first tail member, the n -> oo limit).
        # terminates: (n-1)/n is increasing and removed is finite
        first = next(n for n in f.allowed_from(1) if Fraction(n - 1, n) > x0)
        pt = ("family", f.degree, first)
        if pt == v0:
            continue
        gap = maxnorm - point_norm(pt)
        run = point_xy(pt)[0] - x0
        if gap <= 0:
            raise DomainError("rightmost tie point is not rightmost")
        ratios.append(gap / run)
        ratios.append(limit_ratio)
    if locus.limit_present:
        ratios.append(limit_ratio)
    positive = [r for r in ratios if r > 0]
    if not positive:
        raise DomainError("no separating slope below -1 exists")
    eps = min(min(positive), Fraction(1))
    return _make_step(v0, "truncated", maxnorm, eps, True, Fraction(-1) - eps, False)


def bottom_step(locus: GenerationLocus) -> StabilityStep:
    """One bottom-corner step: pick the lowest remaining corner (0, k).

    For k = 0 the corner is the unique norm minimum and the step is
    "absolute" with epsilon the gap to the second-smallest attained norm
    (typically 1/2, from the degree-0 family at size 2); for k >= 1 the
    corner generates filtration-bounded submodules: "bounded" with the
    steepest exact separating slope min over x > 0 points of (y - k)/x.
    """
    corner_fam = None
    for f in sorted(locus.families, key=lambda f: f.degree):
        if f.allows(1):
            corner_fam = f
            break
    if corner_fam is None:
        raise DomainError("bottom corners exhausted")
    k = corner_fam.degree
    v0 = ("family", k, 1)
    if k == 0:
        norms = []
        for f in locus.families:
            for n in f.allowed_from(1):
                if ("family", f.degree, n) != v0:
                    norms.append(_family_norm(f.degree, n))
                    break
        if locus.limit_present:
            norms.append(Fraction(1))
        eps = min(norms) if norms else Fraction(1)
        return _make_step(v0, "absolute", Fraction(0), eps, True, Fraction(0), False)
    # a lower corner still present would sit below any separating line
    for f in locus.families:
        if f.degree < k and f.allows(1):
            raise DomainError("bottom step blocked by a lower corner")
    slopes = [Fraction(-k)]  # the limit point (1, 0)
    for f in locus.families:
        i = f.degree
        # (i - k n)/(n - 1) over n >= 2 is monotone; minimum at the first
        # member when i < k, at the n -> oo limit -k when i >= k.
        if i < k:
            for n in f.allowed_from(2):
                slopes.append(Fraction(i - k * n, n - 1))
                break
        else:
            slopes.append(Fraction(-k))
    slope = min(slopes)
    return _make_step(v0, "bounded", Fraction(k), None, True, slope, False)


def remove_point(locus: GenerationLocus, pt) -> GenerationLocus:
    if pt == LIMIT:
        return replace(locus, limit_present=False)
    _, i, n = pt
    fams = []
    for f in locus.families:
        if f.degree == i:
            if not f.allows(n):
                raise DomainError("point already removed")
            f = replace(f, removed=f.removed | {n})
        fams.append(f)
    return replace(locus, families=tuple(fams))


@dataclass(frozen=True)
class StabilityReport:
    label: str
    variant: str
    steps: tuple[StabilityStep, ...]
    homology_valid: bool  # steps speak about homology itself iff i-acyclic

    @property
    def validity(self) -> str:
        return "homology" if self.homology_valid else "first-page only"


def iterate_report(
    space: SpaceInput, variant: str = "left", steps: int = 1, n_cap: int = 8
) -> StabilityReport:
    """Run the stabilization procedure for up to `steps` steps, each step
    removing its chosen point; stops early at a terminal step."""
    if steps < 1:
        raise InputError("steps must be >= 1")
    if variant not in ("left", "right", "bottom"):
        raise InputError("variant must be 'left', 'right', or 'bottom'")
    locus = locus_from_space(space, n_cap)
    out = []
    for _ in range(steps):
        step = bottom_step(locus) if variant == "bottom" else classify_step(locus, variant)
        out.append(step)
        if step.terminal:
            break
        locus = remove_point(locus, step.point)
    return StabilityReport(
        label=space.name,
        variant=variant,
        steps=tuple(out),
        homology_valid=space.i_acyclic,
    )


def _factor_argument(space: SpaceInput, pt, trunc: int) -> WeightedSeries:
    if pt == LIMIT:
        raise InputError("the limit point does not name a single series factor")
    _, i, n = pt
    b = space.betti[i] if i < len(space.betti) else 0
    if not b:
        raise InputError(f"space has no generators in homology degree {i}")
    w = space.group.order
    coeffs = {}
    if n <= trunc:
        coeffs[(n, n - 1, i)] = Fraction(b, w * n)
    return WeightedSeries(w, trunc, coeffs)


def quotient_series(space: SpaceInput, points, trunc: int) -> WeightedSeries:
    """The full first-page series with the named generator factors divided
    out (exactly: multiplied by exp of the negated arguments)."""
    s = e1_series(space, trunc)
    for pt in points:
        s = s * series_exp(-_factor_argument(space, pt, trunc))
    return s


def verify_generator_bound(
    space: SpaceInput, report: StabilityReport, step_index: int, j: int, n_max: int
):
    """Brute-force confirmation of a step's generator-degree bound.

    Divides the first-page series by the factors chosen in steps
    0..step_index, then checks that on the defect-j diagonal
    p + q = norm * size - j the quotient vanishes for sizes beyond
    bound(j, 0).  Returns (ok, info).

    Raises:
        DomainError: if the quotient has a negative dimension (the factors
            would not have been free) or the step is not absolute.
    """
    steps = report.steps[: step_index + 1]
    if len(steps) != step_index + 1:
        raise InputError("step index beyond the report")
    step = steps[-1]
    if step.classification != "absolute" or not step.epsilon:
        raise DomainError("bound verification requires an absolute step")
    q = quotient_series(space, [s.point for s in steps], n_max)
    w = space.group.order
    for (n, p, qq), c in sorted(q.coeffs.items()):
        dim = c * w**n * factorial(n)
        if dim < 0:
            raise DomainError(f"negative dimension {dim} at {(n, p, qq)} after division")
    bound = step.bound(j, 0)
    violations = []
    for size in range(1, n_max + 1):
        diag = step.norm * size - j
        if diag.denominator != 1 or diag < 0:
            continue
        total = sum(
            c * w**size * factorial(size)
            for (n, p, qq), c in q.coeffs.items()
            if n == size and p + qq == diag
        )
        if size > bound and total != 0:
            violations.append({"size": size, "diagonal": int(diag), "dim": int(total)})
    return (not violations), {
        "bound": bound,
        "norm": step.norm,
        "epsilon": step.epsilon,
        "violations": violations,
        "sizes_checked": n_max,
    }
