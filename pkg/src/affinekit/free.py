"""Free algebras as clones of term functions, plus evaluation of their
elements over a chosen ground algebra.

The free algebra on n generators over G is materialized as the set of all
n-ary term functions G^n -> G, discovered breadth-first: projections first,
then rounds applying each operation (in signature order) to every tuple of
already-known elements (in big-endian index order, operands frozen at the
round start). Each element keeps the first term that produced it, which is
automatically one of minimal depth.

Evaluating elements over a different ground algebra A uses the graph
construction: close the pairs (x_i, i-th coordinate function on A^n) under
all operations inside F x A^(A^n). Evaluation at a point is well defined
exactly when no element picks up two rows that disagree at that point; the
per-point graphs are coordinate projections of this single closure, so one
sweep serves every point at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

from .core import (
    DEFAULT_BUDGET,
    App,
    FiniteAlgebra,
    Homomorphism,
    Var,
    encode_point,
)
from .errors import (
    BudgetExceeded,
    NotInVariety,
    SignatureMismatch,
    ValidationError,
    VariableOutOfRange,
)


@dataclass(frozen=True)
class TermFunction:
    """An element of a free algebra: a value table over all points of G^n,
    tagged with one witnessing term (not part of equality)."""

    arity: int
    table: tuple
    witness: object = field(compare=False)

    def term_string(self):
        from .core import format_term

        return format_term(self.witness)


class FreeAlgebra:
    """The clone of n-ary term functions over a generator algebra."""

    def __init__(self, generator, arity, elements, var_positions):
        self.generator = generator
        self.arity = arity
        self.elements = elements
        self.var_positions = var_positions
        self._index = {e.table: i for i, e in enumerate(elements)}
        self._cache = {}

    @property
    def size(self):
        return len(self.elements)

    @property
    def signature(self):
        return self.generator.signature

    def index_of_table(self, table):
        table = tuple(int(v) for v in table)
        if table not in self._index:
            raise ValidationError("value table is not a term function here")
        return self._index[table]

    def var(self, i):
        if not 0 <= i < self.arity:
            raise VariableOutOfRange(f"x{i} of {self.arity} generators")
        return self.var_positions[i]

    def table_matrix(self):
        """Element value tables stacked into an array (size x |G|^arity)."""
        if "matrix" not in self._cache:
            npoints = self.generator.size ** self.arity
            m = np.zeros((self.size, npoints), dtype=np.int64)
            for i, e in enumerate(self.elements):
                m[i] = e.table
            self._cache["matrix"] = m
        return self._cache["matrix"]

    def as_algebra(self):
        """The free algebra as a FiniteAlgebra on element indices, with
        operations acting pointwise."""
        if "algebra" not in self._cache:
            k = self.generator.size
            m = self.size
            mat = self.table_matrix()
            lookup = {e.table: i for i, e in enumerate(self.elements)}
            tables = []
            for sym, r in self.signature.symbols:
                if r == 0:
                    row = np.full(mat.shape[1], self.generator.table(sym)[0])
                    tables.append((lookup[tuple(int(v) for v in row)],))
                    continue
                t = self.generator.np_table(sym)
                flat = []
                for args in product(range(m), repeat=r):
                    row = t[tuple(mat[a] for a in args)]
                    flat.append(lookup[tuple(int(v) for v in row)])
                tables.append(tuple(flat))
            self._cache["algebra"] = FiniteAlgebra(
                self.signature,
                m,
                tuple(tables),
                name=f"F_{self.generator.name or 'G'}({self.arity})",
            )
        return self._cache["algebra"]

    def apply_unary(self, unary_table, p):
        """Index of u∘p where u is a unary term function over G (given as
        its |G|-entry table) and p an element index."""
        row = tuple(unary_table[v] for v in self.elements[p].table)
        return self._index[row]

    def witness_term(self, p):
        return self.elements[p].witness


def free_algebra(generator, arity, budget=DEFAULT_BUDGET):
    if generator.size < 1:
        raise ValidationError("generator algebra must have at least one element")
    if arity < 0:
        raise ValidationError("negative arity")
    return _free_cached(generator, arity, budget)


@lru_cache(maxsize=None)
def _free_cached(generator, arity, budget):
    k = generator.size
    npoints = k ** arity
    codes = np.arange(npoints)

    rows = []
    witnesses = []
    index = {}
    var_positions = []

    def add(row, witness):
        key = tuple(int(v) for v in row)
        if key in index:
            return index[key]
        if len(rows) >= budget:
            raise BudgetExceeded(f"free algebra exceeds budget {budget}")
        index[key] = len(rows)
        rows.append(np.asarray(row, dtype=np.int64))
        witnesses.append(witness)
        return index[key]

    for i in range(arity):
        row = (codes // k ** (arity - 1 - i)) % k
        var_positions.append(add(row, Var(i)))

    while True:
        frozen = len(rows)
        stacked = np.stack(rows) if rows else np.zeros((0, npoints), dtype=np.int64)
        for sym, r in generator.signature.symbols:
            if r == 0:
                add(np.full(npoints, generator.table(sym)[0]), App(sym))
                continue
            if frozen == 0:
                continue
            if frozen ** r > budget:
                raise BudgetExceeded(
                    f"operand tuples for {sym!r} exceed budget {budget}"
                )
            t = generator.np_table(sym)
            grid = np.arange(frozen ** r)
            arg_idx = []
            rest = grid
            for _ in range(r):
                arg_idx.append(rest % frozen)
                rest = rest // frozen
            arg_idx.reverse()
            cand = t[tuple(stacked[ai] for ai in arg_idx)]
            uniq, first = np.unique(cand, axis=0, return_index=True)
            for pos in np.argsort(first):
                key = tuple(int(v) for v in uniq[pos])
                if key in index:
                    continue
                g = int(first[pos])
                operands = []
                rest = g
                for _ in range(r):
                    operands.append(rest % frozen)
                    rest = rest // frozen
                operands.reverse()
                add(uniq[pos], App(sym, tuple(witnesses[o] for o in operands)))
        if len(rows) == frozen:
            break

    elements = tuple(
        TermFunction(arity, tuple(int(v) for v in row), wit)
        for row, wit in zip(rows, witnesses)
    )
    return FreeAlgebra(generator, arity, elements, tuple(var_positions))


# --------------------------------------------------------------------------
# evaluation over a ground algebra


class GroundSpace:
    """A free algebra together with a ground algebra and the full evaluation
    matrix: ev[p, a] is the value of element p at the point of A^n coded a.
    point_ok[a] says whether evaluation at a is well defined."""

    def __init__(self, free, ground, ev, point_ok):
        self.free = free
        self.ground = ground
        self.ev = ev
        self.point_ok = point_ok

    @property
    def arity(self):
        return self.free.arity

    @property
    def npoints(self):
        return self.ground.size ** self.free.arity

    @property
    def ok(self):
        return bool(self.point_ok.all())

    def require_ok(self, points=None):
        bad = [
            a
            for a in (range(self.npoints) if points is None else points)
            if not self.point_ok[a]
        ]
        if bad:
            raise NotInVariety(
                f"evaluation not well defined at point(s) {bad[:5]} of the ground"
            )

    def column(self, a):
        return tuple(int(v) for v in self.ev[:, a])


def ground_space(generator, ground, arity, budget=DEFAULT_BUDGET):
    if ground.signature != generator.signature:
        raise SignatureMismatch("ground and generator have different signatures")
    return _ground_cached(generator, ground, arity, budget)


@lru_cache(maxsize=None)
def _ground_cached(generator, ground, arity, budget):
    free = free_algebra(generator, arity, budget)
    npoints = ground.size ** arity

    if ground == generator:
        ev = free.table_matrix().copy()
        return GroundSpace(free, ground, ev, np.ones(npoints, dtype=bool))

    falg = free.as_algebra()
    ka = ground.size

    seeds = []
    for i in range(arity):
        row = tuple(
            (c // ka ** (arity - 1 - i)) % ka for c in range(npoints)
        )
        seeds.append((free.var(i), row))

    pairs = []
    seen = set()

    def add(pair):
        if pair in seen:
            return
        if len(pairs) >= budget:
            raise BudgetExceeded(f"graph closure exceeds budget {budget}")
        seen.add(pair)
        pairs.append(pair)

    for s in seeds:
        add(s)
    while True:
        frozen = len(pairs)
        for sym, r in generator.signature.symbols:
            if r == 0:
                fval = falg.table(sym)[0]
                row = tuple(ground.table(sym)[0] for _ in range(npoints))
                add((fval, row))
                continue
            if frozen == 0:
                continue
            gtab = ground.np_table(sym)
            for args in product(pairs[:frozen], repeat=r):
                fval = falg.op(sym, tuple(p[0] for p in args))
                rows = tuple(np.asarray(p[1]) for p in args)
                row = tuple(int(v) for v in gtab[rows])
                add((fval, row))
        if len(pairs) == frozen:
            break

    rows_by_elem = {}
    for fval, row in pairs:
        rows_by_elem.setdefault(fval, []).append(row)

    ev = np.zeros((free.size, npoints), dtype=np.int64)
    point_ok = np.ones(npoints, dtype=bool)
    for p in range(free.size):
        got = rows_by_elem.get(p)
        if not got:
            # unreachable: the free algebra is generated by its projections
            raise AssertionError("free element missed by the graph closure")
        ev[p] = got[0]
        for other in got[1:]:
            for a in range(npoints):
                if other[a] != got[0][a]:
                    point_ok[a] = False
    return GroundSpace(free, ground, ev, point_ok)


def verify_ground(ground, generator, arity, budget=DEFAULT_BUDGET):
    """Is evaluation of every free element well defined at every point of
    ground^arity? True exactly when the graph closure is functional."""
    return ground_space(generator, ground, arity, budget).ok


def point_evaluation_hom(free, ground, point, budget=DEFAULT_BUDGET):
    """Evaluation-at-a-point as a homomorphism from the free algebra."""
    if len(point) != free.arity:
        raise VariableOutOfRange(
            f"point has {len(point)} coordinates, free algebra has {free.arity}"
        )
    for x in point:
        if not 0 <= x < ground.size:
            raise ValidationError(f"coordinate {x} outside ground carrier")
    gs = ground_space(free.generator, ground, free.arity, budget)
    code = encode_point(point, ground.size)
    gs.require_ok([code])
    return Homomorphism(free.as_algebra(), ground, gs.column(code))


def enumerate_homs_free(free, target, budget=DEFAULT_BUDGET):
    """All homomorphisms from a free algebra into target, one per point of
    target^arity (in point-code order). Raises NotInVariety when any
    assignment fails to extend."""
    if target.size ** free.arity > budget:
        raise BudgetExceeded(
            f"{target.size ** free.arity} assignments exceed budget {budget}"
        )
    gs = ground_space(free.generator, target, free.arity, budget)
    gs.require_ok()
    falg = free.as_algebra()
    return tuple(
        Homomorphism(falg, target, gs.column(a)) for a in range(gs.npoints)
    )


def substitute(free_src, p, images, free_dst):
    """Clone composition: the element of free_dst obtained by substituting
    images (elements of free_dst, one per generator of free_src) into p.

    This is the action of the homomorphism free_src -> free_dst determined
    by the generator images.
    """
    if free_src.generator != free_dst.generator:
        raise SignatureMismatch("substitution across different generators")
    if len(images) != free_src.arity:
        raise VariableOutOfRange(
            f"{len(images)} images for {free_src.arity} generators"
        )
    k = free_dst.generator.size
    npoints = k ** free_dst.arity
    ptab = np.asarray(free_src.elements[p].table, dtype=np.int64)
    if free_src.arity == 0:
        codes = np.zeros(npoints, dtype=np.int64)
    else:
        w = free_dst.table_matrix()[list(images)]
        codes = np.zeros(npoints, dtype=np.int64)
        for j in range(free_src.arity):
            codes = codes * k + w[j]
    row = ptab[codes]
    return free_dst.index_of_table(row)
