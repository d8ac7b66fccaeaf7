"""Finite algebras: signatures, terms, partitions, homomorphisms, and the
basic constructions (subuniverse, power, quotient, congruence generation,
full congruence lattice).

Elements of an algebra of size k are always 0..k-1. Operation tables are
flat tuples in row-major order: the entry for arguments (a0, .., a_{r-1})
sits at index a0*k^(r-1) + .. + a_{r-1}, i.e. the first argument is the
most significant digit. Points of a power A^n use the same big-endian
encoding, so tables, power carriers and product carriers all agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    NotACongruence,
    ShapeMismatch,
    SignatureMismatch,
    UnknownSymbol,
    ValidationError,
    VariableOutOfRange,
)

DEFAULT_BUDGET = 10 ** 6


def encode_point(point, size):
    """Big-endian mixed-radix code of a tuple over 0..size-1."""
    code = 0
    for a in point:
        code = code * size + a
    return code


def decode_point(code, size, arity):
    out = [0] * arity
    for i in range(arity - 1, -1, -1):
        out[i] = code % size
        code //= size
    return tuple(out)


class UnionFind:
    """Plain union-find with path halving."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def labels(self):
        """Normalized label vector: blocks numbered by least member."""
        n = len(self.parent)
        seen = {}
        out = [0] * n
        for i in range(n):
            r = self.find(i)
            if r not in seen:
                seen[r] = len(seen)
            out[i] = seen[r]
        return tuple(out)


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()


def format_term(t):
    if isinstance(t, Var):
        return f"x{t.index}"
    if not t.args:
        return t.symbol
    return f"{t.symbol}({', '.join(format_term(a) for a in t.args)})"


# --------------------------------------------------------------------------
# signatures and algebras


@dataclass(frozen=True)
class Signature:
    """Ordered operation symbols with arities. Order is meaningful: it
    drives every canonical enumeration downstream."""

    symbols: tuple

    def __post_init__(self):
        names = [s for s, _ in self.symbols]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate operation symbols in {names}")
        for s, r in self.symbols:
            if r < 0:
                raise ValidationError(f"negative arity for {s!r}")

    def arity(self, name):
        for s, r in self.symbols:
            if s == name:
                return r
        raise UnknownSymbol(f"no operation named {name!r}")

    @property
    def names(self):
        return tuple(s for s, _ in self.symbols)

    def has_constants(self):
        return any(r == 0 for _, r in self.symbols)


@dataclass(frozen=True)
class FiniteAlgebra:
    """An algebra on carrier {0..size-1} given by flat operation tables,
    one per signature symbol, in signature order."""

    signature: Signature
    size: int
    tables: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.size < 0:
            raise ValidationError("negative carrier size")
        if len(self.tables) != len(self.signature.symbols):
            raise ValidationError("one table per signature symbol required")
        for (sym, r), tab in zip(self.signature.symbols, self.tables):
            if self.size == 0:
                if r == 0:
                    raise ValidationError(
                        f"constant {sym!r} cannot live on an empty carrier"
                    )
                if len(tab) != 0:
                    raise ValidationError(f"table for {sym!r} must be empty")
                continue
            if len(tab) != self.size ** r:
                raise ValidationError(
                    f"table for {sym!r} has {len(tab)} entries, "
                    f"wanted {self.size ** r}"
                )
            for v in tab:
                if not 0 <= v < self.size:
                    raise ValidationError(f"table entry {v} for {sym!r} out of range")

    @classmethod
    def make(cls, size, ops, name=""):
        """ops: iterable of (symbol, arity, flat table) in the intended order."""
        sig = Signature(tuple((s, r) for s, r, _ in ops))
        return cls(sig, size, tuple(tuple(t) for _, _, t in ops), name=name)

    def table(self, name):
        for (s, _), tab in zip(self.signature.symbols, self.tables):
            if s == name:
                return tab
        raise UnknownSymbol(f"no operation named {name!r}")

    def op(self, name, args=()):
        r = self.signature.arity(name)
        if len(args) != r:
            raise ArityMismatch(f"{name!r} expects {r} arguments, got {len(args)}")
        return self.table(name)[encode_point(args, self.size)] if r else self.table(name)[0]

    @cached_property
    def _np_tables(self):
        out = {}
        for (s, r), tab in zip(self.signature.symbols, self.tables):
            out[s] = np.asarray(tab, dtype=np.int64).reshape((self.size,) * r)
        return out

    def np_table(self, name):
        if name not in self._np_tables:
            raise UnknownSymbol(f"no operation named {name!r}")
        return self._np_tables[name]


def evaluate_term(alg, term, env):
    """Evaluate a term at an assignment env: tuple of carrier elements."""
    if isinstance(term, Var):
        if not 0 <= term.index < len(env):
            raise VariableOutOfRange(
                f"x{term.index} with only {len(env)} variables in scope"
            )
        return env[term.index]
    r = alg.signature.arity(term.symbol)
    if len(term.args) != r:
        raise ArityMismatch(
            f"{term.symbol!r} expects {r} arguments, got {len(term.args)}"
        )
    return alg.op(term.symbol, tuple(evaluate_term(alg, a, env) for a in term.args))


def generate_subuniverse(alg, seeds):
    """Smallest subuniverse containing seeds, in canonical discovery order:
    sorted seeds first, then breadth-first rounds applying operations in
    signature order to tuples (in big-endian index order) over the elements
    known at the start of the round."""
    for s in seeds:
        if not 0 <= s < alg.size:
            raise ValidationError(f"seed {s} outside carrier")
    found = []
    seen = set()
    for s in sorted(set(seeds)):
        found.append(s)
        seen.add(s)
    while True:
        frozen = len(found)
        for (sym, r), tab in zip(alg.signature.symbols, alg.tables):
            if r == 0:
                v = tab[0]
                if v not in seen:
                    found.append(v)
                    seen.add(v)
                continue
            for args in product(found[:frozen], repeat=r):
                v = tab[encode_point(args, alg.size)]
                if v not in seen:
                    found.append(v)
                    seen.add(v)
        if len(found) == frozen:
            return tuple(found)


# --------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """A partition of {0..size-1} in normalized form: block labels are
    assigned by least member, so equal partitions are equal tuples."""

    size: int
    labels: tuple

    def __post_init__(self):
        if len(self.labels) != self.size:
            raise ValidationError("label vector length differs from size")
        nxt = 0
        for lab in self.labels:
            if lab > nxt or lab < 0:
                raise ValidationError(
                    "labels not normalized; use Partition.from_labels"
                )
            if lab == nxt:
                nxt += 1

    @classmethod
    def from_labels(cls, raw):
        seen = {}
        out = []
        for lab in raw:
            if lab not in seen:
                seen[lab] = len(seen)
            out.append(seen[lab])
        return cls(len(out), tuple(out))

    @classmethod
    def from_pairs(cls, size, pairs):
        uf = UnionFind(size)
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValidationError(f"pair ({a}, {b}) outside carrier")
            uf.union(a, b)
        return cls(size, uf.labels())

    @classmethod
    def identity(cls, size):
        return cls(size, tuple(range(size)))

    @classmethod
    def total(cls, size):
        return cls(size, (0,) * size)

    @property
    def num_blocks(self):
        return max(self.labels) + 1 if self.labels else 0

    def blocks(self):
        out = [[] for _ in range(self.num_blocks)]
        for i, lab in enumerate(self.labels):
            out[lab].append(i)
        return tuple(tuple(b) for b in out)

    def together(self, a, b):
        return self.labels[a] == self.labels[b]

    def refines(self, other):
        if other.size != self.size:
            raise ShapeMismatch("partitions of different sets")
        rep = {}
        for i, lab in enumerate(self.labels):
            if lab in rep:
                if other.labels[i] != other.labels[rep[lab]]:
                    return False
            else:
                rep[lab] = i
        return True

    def meet(self, other):
        if other.size != self.size:
            raise ShapeMismatch("partitions of different sets")
        return Partition.from_labels(list(zip(self.labels, other.labels)))

    def join(self, other):
        if other.size != self.size:
            raise ShapeMismatch("partitions of different sets")
        uf = UnionFind(self.size)
        anchor_a, anchor_b = {}, {}
        for i in range(self.size):
            la, lb = self.labels[i], other.labels[i]
            if la in anchor_a:
                uf.union(i, anchor_a[la])
            else:
                anchor_a[la] = i
            if lb in anchor_b:
                uf.union(i, anchor_b[lb])
            else:
                anchor_b[lb] = i
        return Partition(self.size, uf.labels())

    def is_congruence_of(self, alg):
        """Compatible with every operation of alg?"""
        if alg.size != self.size:
            raise ShapeMismatch("partition size differs from carrier size")
        if self.size == 0:
            return True
        lab = np.asarray(self.labels, dtype=np.int64)
        # representative (least member) of each element's block
        reps = np.zeros(self.num_blocks, dtype=np.int64)
        for i in range(self.size - 1, -1, -1):
            reps[lab[i]] = i
        rep_of = reps[lab]
        k = self.size
        for (sym, r), tab in zip(alg.signature.symbols, alg.tables):
            if r == 0:
                continue
            t = np.asarray(tab, dtype=np.int64)
            flat = np.arange(k ** r)
            rep_code = np.zeros(k ** r, dtype=np.int64)
            rest = flat
            for j in range(r - 1, -1, -1):
                digit = rest % k
                rest = rest // k
                rep_code += rep_of[digit] * (k ** (r - 1 - j))
            if not np.array_equal(lab[t], lab[t[rep_code]]):
                return False
        return True


# --------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple

    def __call__(self, x):
        return self.mapping[x]

    def compose(self, inner):
        """self after inner."""
        if inner.target != self.source:
            raise ShapeMismatch("composition endpoints do not match")
        return Homomorphism(
            inner.source, self.target, tuple(self.mapping[x] for x in inner.mapping)
        )


def is_homomorphism(h):
    """Check h.mapping respects every operation. SignatureMismatch if the
    two algebras speak different signatures."""
    if h.source.signature != h.target.signature:
        raise SignatureMismatch("source and target have different signatures")
    if len(h.mapping) != h.source.size:
        raise ShapeMismatch("mapping length differs from source carrier")
    for v in h.mapping:
        if not 0 <= v < h.target.size:
            raise ShapeMismatch(f"image {v} outside target carrier")
    if h.source.size == 0:
        return True
    m = np.asarray(h.mapping, dtype=np.int64)
    ks, kt = h.source.size, h.target.size
    for sym, r in h.source.signature.symbols:
        ts = np.asarray(h.source.table(sym), dtype=np.int64)
        tt = np.asarray(h.target.table(sym), dtype=np.int64)
        if r == 0:
            if m[ts[0]] != tt[0]:
                return False
            continue
        flat = np.arange(ks ** r)
        img_code = np.zeros(ks ** r, dtype=np.int64)
        rest = flat
        for j in range(r - 1, -1, -1):
            digit = rest % ks
            rest = rest // ks
            img_code += m[digit] * (kt ** (r - 1 - j))
        if not np.array_equal(m[ts], tt[img_code]):
            return False
    return True


# --------------------------------------------------------------------------
# powers, products, quotients


def product_algebra(factors, signature=None, budget=DEFAULT_BUDGET):
    """Direct product with big-endian coding (first factor most significant).
    An empty product is the one-element algebra, which is why the signature
    must be supplied when factors is empty."""
    factors = tuple(factors)
    if factors:
        signature = factors[0].signature
        for f in factors[1:]:
            if f.signature != signature:
                raise SignatureMismatch("product factors disagree on signature")
    elif signature is None:
        raise ValidationError("empty product needs an explicit signature")

    sizes = [f.size for f in factors]
    total = 1
    for s in sizes:
        total *= s
        if total > budget:
            raise BudgetExceeded(f"product carrier exceeds budget {budget}")

    if not factors:
        tables = tuple(
            tuple(0 for _ in range(1 if r == 0 else 1 ** r))
            for _, r in signature.symbols
        )
        return FiniteAlgebra(signature, 1, tables, name="trivial")

    digits = []  # digits[i][code] = i-th coordinate of code
    weights = [1] * len(factors)
    for i in range(len(factors) - 2, -1, -1):
        weights[i] = weights[i + 1] * sizes[i + 1]
    codes = np.arange(total)
    for i, f in enumerate(factors):
        digits.append((codes // weights[i]) % sizes[i])

    tables = []
    for sym, r in signature.symbols:
        if r == 0:
            val = 0
            for i, f in enumerate(factors):
                val += f.table(sym)[0] * weights[i]
            tables.append((int(val),))
            continue
        if total ** r > budget:
            raise BudgetExceeded(f"product table for {sym!r} exceeds budget {budget}")
        flat = np.arange(total ** r)
        arg_codes = []
        rest = flat
        for j in range(r - 1, -1, -1):
            arg_codes.append(rest % total)
            rest = rest // total
        arg_codes.reverse()
        out = np.zeros(total ** r, dtype=np.int64)
        for i, f in enumerate(factors):
            t = f.np_table(sym)
            coords = tuple(digits[i][ac] for ac in arg_codes)
            out += t[coords] * weights[i]
        tables.append(tuple(int(v) for v in out))
    return FiniteAlgebra(signature, total, tuple(tables))


def power_algebra(alg, n, budget=DEFAULT_BUDGET):
    """alg^n; for n = 0 the one-element algebra."""
    if n < 0:
        raise ValidationError("negative power")
    return product_algebra([alg] * n, signature=alg.signature, budget=budget)


def generate_congruence(alg, pairs):
    """Smallest congruence containing the pairs.

    Fixpoint of: for every operation f and argument tuple u, merge f(u)
    with f(u*) where u* replaces each coordinate by its current class
    representative. Costs size^arity per operation per pass.
    """
    k = alg.size
    uf = UnionFind(k)
    for a, b in pairs:
        if not (0 <= a < k and 0 <= b < k):
            raise ValidationError(f"pair ({a}, {b}) outside carrier")
        uf.union(a, b)
    if k == 0:
        return Partition(0, ())
    changed = True
    while changed:
        changed = False
        for (sym, r), tab in zip(alg.signature.symbols, alg.tables):
            if r == 0:
                continue
            for u in product(range(k), repeat=r):
                star = tuple(uf.find(x) for x in u)
                if star == u:
                    continue
                if uf.union(tab[encode_point(u, k)], tab[encode_point(star, k)]):
                    changed = True
    return Partition(k, uf.labels())


def quotient_algebra(alg, part):
    """Quotient by a congruence; returns (quotient, canonical projection)."""
    if part.size != alg.size:
        raise ShapeMismatch("partition size differs from carrier size")
    if not part.is_congruence_of(alg):
        raise NotACongruence("partition is not compatible with the operations")
    nb = part.num_blocks
    reps = [None] * nb
    for i, lab in enumerate(part.labels):
        if reps[lab] is None:
            reps[lab] = i
    tables = []
    for (sym, r), tab in zip(alg.signature.symbols, alg.tables):
        if r == 0:
            tables.append((part.labels[tab[0]],))
            continue
        flat = []
        for args in product(reps, repeat=r):
            flat.append(part.labels[tab[encode_point(args, alg.size)]])
        tables.append(tuple(flat))
    quot = FiniteAlgebra(alg.signature, nb, tuple(tables))
    proj = Homomorphism(alg, quot, part.labels)
    return quot, proj


@dataclass(frozen=True)
class SubdirectReport:
    injective: bool
    onto_each_factor: tuple


def is_subdirect_embedding(h, factors):
    """Is h a subdirect embedding into the direct product of factors?
    h.target must literally be that product."""
    factors = tuple(factors)
    expected = product_algebra(
        factors, signature=h.source.signature if not factors else None
    )
    if h.target != expected:
        raise ShapeMismatch("target of h is not the product of the factors")
    if not is_homomorphism(h):
        raise ShapeMismatch("h is not a homomorphism")
    injective = len(set(h.mapping)) == len(h.mapping)
    onto = []
    weights = [1] * len(factors)
    for i in range(len(factors) - 2, -1, -1):
        weights[i] = weights[i + 1] * factors[i + 1].size
    for i, f in enumerate(factors):
        seen = {(x // weights[i]) % f.size for x in h.mapping}
        onto.append(len(seen) == f.size)
    return SubdirectReport(injective=injective, onto_each_factor=tuple(onto))


# --------------------------------------------------------------------------
# the full congruence lattice


def _join_closure(base, size, budget):
    """Close a set of partitions under pairwise join (with identity)."""
    interned = {}
    order = []

    def intern(p):
        if p.labels not in interned:
            interned[p.labels] = p
            order.append(p)
            if len(order) > budget:
                raise BudgetExceeded(f"congruence lattice exceeds budget {budget}")
        return interned[p.labels]

    intern(Partition.identity(size))
    for p in base:
        intern(p)
    memo = {}
    frontier = list(order)
    while frontier:
        nxt = []
        for p in frontier:
            for q in base:
                key = (p.labels, q.labels) if p.labels <= q.labels else (q.labels, p.labels)
                if key in memo:
                    continue
                j = p.join(q)
                memo[key] = j
                if j.labels not in interned:
                    intern(j)
                    nxt.append(j)
        frontier = nxt
    return order


def _principal_congruences_naive(alg):
    out = {}
    for v in range(alg.size):
        for u in range(v):
            p = generate_congruence(alg, [(u, v)])
            out.setdefault(p.labels, p)
    return list(out.values())


def _unary_translations(alg):
    """Every map x -> f(c1,..,x,..,cr) as a row of an array, deduplicated."""
    k = alg.size
    rows = [np.arange(k, dtype=np.int64)[None, :]]
    for sym, r in alg.signature.symbols:
        if r == 0:
            continue
        t = alg.np_table(sym)
        for pos in range(r):
            moved = np.moveaxis(t, pos, -1).reshape(-1, k)
            rows.append(moved)
    allrows = np.unique(np.concatenate(rows, axis=0), axis=0)
    ident = np.arange(k, dtype=np.int64)
    keep = ~np.all(allrows == ident[None, :], axis=1)
    return allrows[keep]


def _principal_congruences_fast(alg, budget):
    """All principal congruences at once via the pair graph.

    Nodes are unordered pairs {u,v}; each unary translation g sends a pair
    to {g(u), g(v)} (dropped when collapsed). Cg(u,v) is the equivalence
    closure of the pairs reachable from {u,v}, so strongly connected pairs
    generate the same congruence and a reverse-topological sweep over the
    condensation computes every Cg with memoized partition joins.
    """
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components
    from graphlib import TopologicalSorter

    k = alg.size
    npairs = k * (k - 1) // 2
    if npairs == 0:
        return []
    # pair index <-> (u, v) with u < v
    U = np.repeat(np.arange(k), np.arange(k - 1, -1, -1))
    V = np.concatenate([np.arange(u + 1, k) for u in range(k)]) if k > 1 else np.array([], dtype=np.int64)
    base = np.concatenate([[0], np.cumsum(np.arange(k - 1, 0, -1))])

    def pair_index(a, b):
        return base[a] + (b - a - 1)

    trans = _unary_translations(alg)
    srcs, dsts = [], []
    for g in trans:
        gu, gv = g[U], g[V]
        keep = gu != gv
        if not keep.any():
            continue
        a = np.minimum(gu[keep], gv[keep])
        b = np.maximum(gu[keep], gv[keep])
        srcs.append(np.nonzero(keep)[0])
        dsts.append(pair_index(a, b))
    if srcs:
        src = np.concatenate(srcs)
        dst = np.concatenate(dsts)
        packed = np.unique(src.astype(np.int64) * npairs + dst)
        src = packed // npairs
        dst = packed % npairs
        graph = csr_matrix(
            (np.ones(len(src), dtype=np.int8), (src, dst)), shape=(npairs, npairs)
        )
        ncomp, comp = connected_components(graph, directed=True, connection="strong")
    else:
        ncomp, comp = npairs, np.arange(npairs)
        src = dst = np.array([], dtype=np.int64)

    # condensation edges, deduplicated
    cs, cd = comp[src], comp[dst]
    keep = cs != cd
    cpacked = np.unique(cs[keep].astype(np.int64) * ncomp + cd[keep])
    children = {}
    for p in cpacked:
        children.setdefault(int(p // ncomp), []).append(int(p % ncomp))

    # own pairs per component
    own = {}
    order_by_comp = np.argsort(comp, kind="stable")
    bounds = np.searchsorted(comp[order_by_comp], np.arange(ncomp + 1))
    for c in range(ncomp):
        own[c] = order_by_comp[bounds[c]:bounds[c + 1]]

    ts = TopologicalSorter({c: children.get(c, []) for c in range(ncomp)})
    topo = list(ts.static_order())  # children before parents

    interned = {}  # labels -> id
    by_id = []  # id -> labels

    def intern(labels):
        if labels not in interned:
            interned[labels] = len(by_id)
            by_id.append(labels)
            if len(by_id) > budget:
                raise BudgetExceeded(f"congruence lattice exceeds budget {budget}")
        return interned[labels]

    def seed_from(uf, labels):
        anchor = {}
        for i, lab in enumerate(labels):
            if lab in anchor:
                uf.union(i, anchor[lab])
            else:
                anchor[lab] = i

    join_memo = {}

    def join_ids(i, j):
        if i == j:
            return i
        key = (i, j) if i < j else (j, i)
        if key not in join_memo:
            uf = UnionFind(k)
            seed_from(uf, by_id[i])
            seed_from(uf, by_id[j])
            join_memo[key] = intern(uf.labels())
        return join_memo[key]

    part_of = [None] * ncomp
    for c in topo:
        acc = None
        for kid in sorted({part_of[ch] for ch in children.get(c, [])}):
            acc = kid if acc is None else join_ids(acc, kid)
        uf = UnionFind(k)
        if acc is not None:
            seed_from(uf, by_id[acc])
        mine = own[c]
        for a, b in zip(U[mine], V[mine]):
            uf.union(int(a), int(b))
        part_of[c] = intern(uf.labels())

    distinct = {}
    for c in range(ncomp):
        distinct.setdefault(part_of[c], None)
    return [Partition(k, by_id[pid]) for pid in distinct]


def all_congruences(alg, budget=DEFAULT_BUDGET):
    """Every congruence of alg: join-closure of the principal congruences.
    Small carriers run the naive per-pair generator; large ones the pair
    graph sweep. Both routes agree (tested)."""
    if alg.size == 0:
        return (Partition(0, ()),)
    if alg.size <= 48:
        principals = _principal_congruences_naive(alg)
    else:
        principals = _principal_congruences_fast(alg, budget)
    lattice = _join_closure(principals, alg.size, budget)
    return tuple(sorted(lattice, key=lambda p: p.labels))
