"""The closure correspondence between point sets and element relations.

Everything lives over a GroundSpace (free algebra F on n generators over G,
ground algebra A, evaluation matrix ev). C sends a set of points to the
kernel partition its evaluations induce on F; V sends a relation on F to
the points where all its pairs evaluate equally. radical recomputes C∘V a
second way, one point kernel at a time, so the fixed-point and radical
tests stay independent of each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_BUDGET,
    Homomorphism,
    Partition,
    encode_point,
    is_homomorphism,
    power_algebra,
    product_algebra,
    quotient_algebra,
)
from .errors import (
    AssertionFailure,
    EquivalenceViolation,
    NotACongruence,
    NotInjective,
    ShapeMismatch,
    ValidationError,
)


@dataclass(frozen=True)
class AffineSubset:
    """A subset of A^n, stored as sorted point codes over a ground space."""

    space: object
    points: tuple

    def __post_init__(self):
        last = -1
        for a in self.points:
            if not (isinstance(a, int) and last < a < self.space.npoints):
                raise ValidationError("points must be sorted distinct codes in range")
            last = a

    @classmethod
    def of(cls, space, points):
        return cls(space, tuple(sorted({int(a) for a in points})))

    @classmethod
    def full(cls, space):
        return cls(space, tuple(range(space.npoints)))

    @classmethod
    def empty(cls, space):
        return cls(space, ())

    def decoded(self):
        k = self.space.ground.size
        n = self.space.arity
        from .core import decode_point

        return tuple(decode_point(a, k, n) for a in self.points)


@dataclass(frozen=True)
class Relation:
    """A binary relation on the elements of the free algebra: sorted
    distinct ordered pairs of element indices."""

    space: object
    pairs: tuple

    def __post_init__(self):
        m = self.space.free.size
        last = None
        for p in self.pairs:
            a, b = p
            if not (0 <= a < m and 0 <= b < m):
                raise ValidationError("relation pair outside the free algebra")
            if last is not None and not last < p:
                raise ValidationError("pairs must be sorted and distinct")
            last = p

    @classmethod
    def of(cls, space, pairs):
        return cls(space, tuple(sorted({(int(a), int(b)) for a, b in pairs})))

    @classmethod
    def from_partition(cls, space, part):
        if part.size != space.free.size:
            raise ShapeMismatch("partition does not fit the free algebra")
        pairs = []
        for block in part.blocks():
            for a in block:
                for b in block:
                    if a != b:
                        pairs.append((a, b))
        return cls(space, tuple(sorted(pairs)))

    @classmethod
    def identity(cls, space):
        return cls(space, ())


@dataclass(frozen=True)
class PresentedAlgebra:
    """The free algebra modulo a congruence."""

    space: object
    theta: Partition

    def __post_init__(self):
        falg = self.space.free.as_algebra()
        if self.theta.size != falg.size:
            raise ShapeMismatch("partition does not fit the free algebra")
        if not self.theta.is_congruence_of(falg):
            raise NotACongruence("the partition is not a congruence")

    def quotient(self):
        return quotient_algebra(self.space.free.as_algebra(), self.theta)


# --------------------------------------------------------------------------
# the two closure operators


def c_operator(subset):
    """Common kernel of evaluation at the subset's points: p ~ q iff they
    agree everywhere on the subset. The empty subset gives the total
    partition."""
    space = subset.space
    space.require_ok(subset.points)
    m = space.free.size
    if m == 0:
        return Partition(0, ())
    if not subset.points:
        return Partition.total(m)
    rows = space.ev[:, list(subset.points)]
    _, inverse = np.unique(rows, axis=0, return_inverse=True)
    return Partition.from_labels(int(v) for v in inverse)


def v_operator(rel):
    """Points where every pair of the relation evaluates equally. The empty
    relation gives the whole space."""
    space = rel.space
    space.require_ok()
    mask = np.ones(space.npoints, dtype=bool)
    for p, q in rel.pairs:
        mask &= space.ev[p] == space.ev[q]
    return AffineSubset.of(space, np.nonzero(mask)[0])


def v_of_partition(space, part):
    """V of the relation 'same block of part', computed in one sweep."""
    space.require_ok()
    m = space.free.size
    if part.size != m:
        raise ShapeMismatch("partition does not fit the free algebra")
    if m == 0:
        return AffineSubset.full(space)
    reps = [None] * part.num_blocks
    for i, lab in enumerate(part.labels):
        if reps[lab] is None:
            reps[lab] = i
    rep_of = [reps[lab] for lab in part.labels]
    mask = (space.ev == space.ev[rep_of]).all(axis=0)
    return AffineSubset.of(space, np.nonzero(mask)[0])


def zariski_closure(subset):
    """V(C(S)): the closure of a point set."""
    return v_of_partition(subset.space, c_operator(subset))


def point_kernel(space, a):
    """C({a}) directly from one evaluation column."""
    space.require_ok([a])
    return Partition.from_labels(int(v) for v in space.ev[:, a])


def radical_of_partition(space, part):
    """C(V(theta)) computed the second way: meet of the point kernels of
    V(theta), one point at a time."""
    pts = v_of_partition(space, part).points
    acc = Partition.total(space.free.size)
    for a in pts:
        acc = acc.meet(point_kernel(space, a))
    return acc


def radical(rel):
    """The radical of a relation: the congruence of all pairs that evaluate
    equally on V(rel)."""
    space = rel.space
    pts = v_operator(rel).points
    acc = Partition.total(space.free.size)
    for a in pts:
        acc = acc.meet(point_kernel(space, a))
    return acc


# --------------------------------------------------------------------------
# transforms


def gelfand_evaluation(space, point):
    """Evaluation at a point, factored through the quotient by its kernel:
    an injective homomorphism F/C({a}) -> A."""
    if len(point) != space.arity:
        raise ValidationError(
            f"point has {len(point)} coordinates, expected {space.arity}"
        )
    a = encode_point(point, space.ground.size)
    gamma, _, _ = _gelfand_parts(space, a)
    return gamma


def _gelfand_parts(space, a):
    kernel = point_kernel(space, a)
    quot, proj = quotient_algebra(space.free.as_algebra(), kernel)
    reps = [None] * kernel.num_blocks
    for i, lab in enumerate(kernel.labels):
        if reps[lab] is None:
            reps[lab] = i
    mapping = tuple(int(space.ev[r, a]) for r in reps)
    gamma = Homomorphism(quot, space.ground, mapping)
    if len(set(mapping)) != len(mapping) or not is_homomorphism(gamma):
        raise AssertionFailure("gelfand evaluation failed to embed the quotient")
    return gamma, proj, kernel


def sgk_inverse(presented, e):
    """Recover the point from a presented algebra plus an embedding into the
    ground: read off the images of the generator classes, then check that
    the kernel of evaluation there is exactly the given congruence and that
    e is the evaluation embedding."""
    space = presented.space
    quot, proj = presented.quotient()
    if e.source != quot or e.target != space.ground:
        raise ShapeMismatch("e must go from the presented quotient into the ground")
    if not is_homomorphism(e):
        raise ValidationError("e is not a homomorphism")
    if len(set(e.mapping)) != len(e.mapping):
        raise NotInjective("e is not injective")
    point = tuple(
        e.mapping[presented.theta.labels[space.free.var(i)]]
        for i in range(space.arity)
    )
    a = encode_point(point, space.ground.size)
    gamma, _, kernel = _gelfand_parts(space, a)
    if kernel != presented.theta:
        raise AssertionFailure(
            "kernel at the recovered point differs from the congruence"
        )
    if gamma.mapping != e.mapping:
        raise AssertionFailure("e is not evaluation at the recovered point")
    return point


@dataclass(frozen=True)
class BirkhoffReport:
    sigma: Homomorphism
    iota: Homomorphism
    factors: tuple
    points: tuple


def birkhoff_transform(presented, budget=DEFAULT_BUDGET):
    """The subdirect decomposition map sigma: F/theta -> prod_a F/C({a})
    over a in V(theta), and the pointwise embedding iota of that product
    into A^{V(theta)}."""
    space = presented.space
    theta = presented.theta
    quot, _ = presented.quotient()
    pts = v_of_partition(space, theta).points

    kernels = [point_kernel(space, a) for a in pts]
    factors = []
    gammas = []
    for a, ker in zip(pts, kernels):
        gamma, _, _ = _gelfand_parts(space, a)
        factors.append(gamma.source)
        gammas.append(gamma)
    factors = tuple(factors)

    prod = product_algebra(
        factors, signature=space.free.signature, budget=budget
    )
    weights = [1] * len(factors)
    for i in range(len(factors) - 2, -1, -1):
        weights[i] = weights[i + 1] * factors[i + 1].size

    theta_reps = [None] * theta.num_blocks if theta.size else []
    for i, lab in enumerate(theta.labels):
        if theta_reps[lab] is None:
            theta_reps[lab] = i
    sigma_map = []
    for r in theta_reps:
        code = 0
        for i, ker in enumerate(kernels):
            code += ker.labels[r] * weights[i]
        sigma_map.append(code)
    sigma = Homomorphism(quot, prod, tuple(sigma_map))
    if not is_homomorphism(sigma):
        raise AssertionFailure("sigma is not a homomorphism")

    power = power_algebra(space.ground, len(pts), budget=budget)
    ka = space.ground.size
    iota_map = []
    for code in range(prod.size):
        val = 0
        for i in range(len(factors)):
            cls = (code // weights[i]) % factors[i].size
            val = val * ka + gammas[i].mapping[cls]
        iota_map.append(val)
    iota = Homomorphism(prod, power, tuple(iota_map))
    if len(set(iota_map)) != len(iota_map):
        raise AssertionFailure("iota failed to be injective")
    if not is_homomorphism(iota):
        raise AssertionFailure("iota is not a homomorphism")

    return BirkhoffReport(sigma=sigma, iota=iota, factors=factors, points=tuple(pts))


# --------------------------------------------------------------------------
# the equivalence


@dataclass(frozen=True)
class NullstellensatzReport:
    fixed: bool
    radical: bool
    subdirect: bool

    @property
    def holds(self):
        return self.fixed


def nullstellensatz_check(presented):
    """Evaluate the three characterizations of 'theta is closed'
    independently and insist they agree:
      fixed      theta == C(V(theta)) by direct signature grouping,
      radical    theta == the meet of point kernels over V(theta),
      subdirect  the decomposition map is injective (it is always a
                 homomorphism onto each factor; injectivity is the content).
    Any disagreement raises EquivalenceViolation."""
    space = presented.space
    theta = presented.theta

    pts = v_of_partition(space, theta).points
    fixed = c_operator(AffineSubset.of(space, pts)) == theta
    rad = radical_of_partition(space, theta) == theta

    kernels = [point_kernel(space, a) for a in pts]
    for ker in kernels:
        if not theta.refines(ker):
            raise AssertionFailure("point kernel fails to contain theta")
    nb = theta.num_blocks
    reps = [None] * nb
    for i, lab in enumerate(theta.labels):
        if reps[lab] is None:
            reps[lab] = i
    tuples = set()
    onto = all(
        len({ker.labels[r] for r in reps}) == ker.num_blocks for ker in kernels
    )
    for r in reps:
        tuples.add(tuple(ker.labels[r] for ker in kernels))
    subdirect = len(tuples) == nb and onto

    if not (fixed == rad == subdirect):
        raise EquivalenceViolation(
            f"closed-congruence tests disagree: fixed={fixed}, "
            f"radical={rad}, subdirect={subdirect}"
        )
    return NullstellensatzReport(fixed=fixed, radical=rad, subdirect=subdirect)


# --------------------------------------------------------------------------
# the closed-set landscape of one instance


@dataclass(frozen=True)
class ZariskiReport:
    closed_sets: tuple
    is_topology: bool
    union_closed: bool
    matches_discrete: bool


def zariski_report(space, budget=DEFAULT_BUDGET):
    """All closed point sets of the instance, with structure flags. Small
    spaces (at most 16 points) scan every subset; larger ones walk the
    congruence lattice and collect {V(theta)}."""
    space.require_ok()
    npts = space.npoints
    m = space.free.size

    closed_masks = set()
    if npts <= 16:
        full = (1 << npts) - 1
        masks = set()
        if m:
            ev = space.ev
            pow2 = 1 << np.arange(npts, dtype=np.int64)
            for p in range(m):
                eq = ev == ev[p]
                for q in range(p):
                    masks.add(int((eq[q] * pow2).sum()))
        unique_masks = sorted(masks)
        for s in range(full + 1):
            # V(C(s)) is the AND of the agreement masks of all pairs glued
            # by C(s), i.e. pairs whose mask covers s; closed = fixed point
            closure = full
            for mk in unique_masks:
                if mk & s == s:
                    closure &= mk
            if closure == s:
                closed_masks.add(s)
    else:
        from .core import all_congruences

        for theta in all_congruences(space.free.as_algebra(), budget):
            pts = v_of_partition(space, theta).points
            mask = 0
            for a in pts:
                mask |= 1 << a
            closed_masks.add(mask)

    full = (1 << npts) - 1
    union_closed = all(
        (x | y) in closed_masks for x in closed_masks for y in closed_masks
    )
    is_topology = union_closed and 0 in closed_masks and full in closed_masks
    matches_discrete = len(closed_masks) == 2 ** npts

    sets = []
    for mask in sorted(closed_masks):
        sets.append(tuple(a for a in range(npts) if mask >> a & 1))
    return ZariskiReport(
        closed_sets=tuple(sets),
        is_topology=is_topology,
        union_closed=union_closed,
        matches_discrete=matches_discrete,
    )
