import pytest

from affinekit.core import (
    App,
    FiniteAlgebra,
    Homomorphism,
    Partition,
    Var,
    all_congruences,
    decode_point,
    encode_point,
    evaluate_term,
    format_term,
    generate_congruence,
    generate_subuniverse,
    is_homomorphism,
    is_subdirect_embedding,
    power_algebra,
    product_algebra,
    quotient_algebra,
)
from affinekit.errors import (
    ArityMismatch,
    BudgetExceeded,
    NotACongruence,
    ShapeMismatch,
    SignatureMismatch,
    UnknownSymbol,
    ValidationError,
    VariableOutOfRange,
)

import oracles


def bool2():
    return FiniteAlgebra.make(2, [
        ("and", 2, (0, 0, 0, 1)),
        ("or", 2, (0, 1, 1, 1)),
        ("not", 1, (1, 0)),
        ("0", 0, (0,)),
        ("1", 0, (1,)),
    ], name="bool2")


def z4():
    return FiniteAlgebra.make(4, [
        ("add", 2, tuple((i + j) % 4 for i in range(4) for j in range(4))),
        ("neg", 1, (0, 3, 2, 1)),
        ("0", 0, (0,)),
    ], name="z4")


def semilat2():
    return FiniteAlgebra.make(2, [("and", 2, (0, 0, 0, 1))], name="semilat2")


def test_encoding_round_trip():
    # big-endian: first coordinate is most significant
    assert encode_point((1, 0), 2) == 2
    assert encode_point((0, 1), 2) == 1
    assert encode_point((2, 3), 4) == 11
    for k, n in [(2, 3), (4, 2), (3, 1), (5, 0)]:
        for c in range(k ** n):
            assert encode_point(decode_point(c, k, n), k) == c


def test_table_layout_matches_encoding():
    a = bool2()
    assert a.op("and", (1, 0)) == 0
    assert a.op("or", (1, 0)) == 1
    assert a.op("not", (0,)) == 1
    assert a.op("0") == 0
    with pytest.raises(ArityMismatch):
        a.op("not", (0, 1))
    with pytest.raises(UnknownSymbol):
        a.op("xor", (0, 1))


def test_algebra_validation():
    with pytest.raises(ValidationError):
        FiniteAlgebra.make(2, [("and", 2, (0, 0, 0))])  # short table
    with pytest.raises(ValidationError):
        FiniteAlgebra.make(2, [("and", 2, (0, 0, 0, 5))])  # out of range
    with pytest.raises(ValidationError):
        FiniteAlgebra.make(0, [("0", 0, (0,))])  # constant on empty carrier
    # empty carrier is fine without constants
    empty = FiniteAlgebra.make(0, [("and", 2, ())])
    assert empty.size == 0


def test_evaluate_term():
    a = bool2()
    t = App("and", (Var(0), App("not", (Var(1),))))
    assert format_term(t) == "and(x0, not(x1))"
    assert evaluate_term(a, t, (1, 0)) == 1
    assert evaluate_term(a, t, (1, 1)) == 0
    assert evaluate_term(a, App("1"), ()) == 1
    with pytest.raises(VariableOutOfRange):
        evaluate_term(a, Var(2), (0, 1))
    with pytest.raises(ArityMismatch):
        evaluate_term(a, App("not", (Var(0), Var(1))), (0, 1))


def test_generate_subuniverse_discovery_order():
    g = z4()
    # seeds sorted first, then ops in signature order
    assert generate_subuniverse(g, [2]) == (2, 0)
    assert generate_subuniverse(g, [1]) == (1, 2, 3, 0)
    assert generate_subuniverse(g, [3, 1]) == (1, 3, 2, 0)
    assert generate_subuniverse(g, []) == (0,)
    s = semilat2()
    assert generate_subuniverse(s, []) == ()
    assert generate_subuniverse(s, [1, 0]) == (0, 1)


def test_power_algebra():
    sq = power_algebra(bool2(), 2)
    assert sq.size == 4
    # (1,0) and (0,1): and = (0,0), or = (1,1)
    assert sq.op("and", (2, 1)) == 0
    assert sq.op("or", (2, 1)) == 3
    assert sq.op("not", (2,)) == 1
    assert sq.op("1") == 3
    zero = power_algebra(bool2(), 0)
    assert zero.size == 1
    with pytest.raises(BudgetExceeded):
        power_algebra(z4(), 16, budget=10 ** 6)


def test_product_vs_power():
    a = bool2()
    assert product_algebra([a, a]) == power_algebra(a, 2)
    with pytest.raises(SignatureMismatch):
        product_algebra([a, z4()])
    with pytest.raises(ValidationError):
        product_algebra([])
    triv = product_algebra([], signature=a.signature)
    assert triv.size == 1


def test_generate_congruence_z4():
    g = z4()
    th = generate_congruence(g, [(0, 2)])
    assert th.blocks() == ((0, 2), (1, 3))
    assert generate_congruence(g, [(0, 1)]) == Partition.total(4)
    assert generate_congruence(g, []) == Partition.identity(4)


def test_generate_congruence_matches_oracle():
    # exhaustive check on the 4-element Boolean algebra of unary functions:
    # Cg(u,v) must be the least oracle congruence containing (u, v)
    f1 = _free_bool1()
    cons = oracles.brute_congruences(_ops_dict(f1), f1.size)
    for u in range(f1.size):
        for v in range(u):
            got = generate_congruence(f1, [(u, v)])
            best = None
            for labels in cons:
                if labels[u] == labels[v]:
                    p = Partition.from_labels(labels)
                    if best is None or p.refines(best):
                        best = p
            assert got == best


def _ops_dict(alg):
    return {
        sym: (r, alg.table(sym))
        for sym, r in alg.signature.symbols
    }


def _free_bool1():
    """The algebra of unary Boolean term functions [x, not x, 0, 1],
    built longhand (the free-clone module has its own constructor)."""
    elems = [(0, 1), (1, 0), (0, 0), (1, 1)]
    idx = {e: i for i, e in enumerate(elems)}
    def lift2(table):
        flat = []
        for p in elems:
            for q in elems:
                flat.append(idx[tuple(table[encode_point((p[c], q[c]), 2)] for c in range(2))])
        return tuple(flat)
    def lift1(table):
        return tuple(idx[tuple(table[p[c]] for c in range(2))] for p in elems)
    return FiniteAlgebra.make(4, [
        ("and", 2, lift2((0, 0, 0, 1))),
        ("or", 2, lift2((0, 1, 1, 1))),
        ("not", 1, lift1((1, 0))),
        ("0", 0, (idx[(0, 0)],)),
        ("1", 0, (idx[(1, 1)],)),
    ])


def test_partition_basics():
    p = Partition.from_pairs(4, [(0, 2)])
    assert p.labels == (0, 1, 0, 2)
    assert p.blocks() == ((0, 2), (1,), (3,))
    assert p.together(0, 2) and not p.together(0, 1)
    q = Partition.from_pairs(4, [(1, 3)])
    assert p.meet(q) == Partition.identity(4)
    assert p.join(q).blocks() == ((0, 2), (1, 3))
    chain = Partition.from_pairs(4, [(0, 1)]).join(Partition.from_pairs(4, [(1, 2)]))
    assert chain.blocks() == ((0, 1, 2), (3,))
    assert Partition.identity(4).refines(p)
    assert p.refines(Partition.total(4))
    assert not p.refines(q)
    with pytest.raises(ValidationError):
        Partition(3, (0, 2, 1))  # not normalized
    assert Partition.total(0) == Partition.identity(0)


def test_is_congruence():
    g = z4()
    assert Partition.from_pairs(4, [(0, 2), (1, 3)]).is_congruence_of(g)
    assert not Partition.from_pairs(4, [(0, 2)]).is_congruence_of(g)
    assert Partition.identity(4).is_congruence_of(g)
    assert Partition.total(4).is_congruence_of(g)


def test_quotient_algebra():
    g = z4()
    th = Partition.from_pairs(4, [(0, 2), (1, 3)])
    q, proj = quotient_algebra(g, th)
    assert q.size == 2
    assert q.table("add") == (0, 1, 1, 0)  # the quotient is z2
    assert proj.mapping == (0, 1, 0, 1)
    assert is_homomorphism(proj)
    with pytest.raises(NotACongruence):
        quotient_algebra(g, Partition.from_pairs(4, [(0, 2)]))
    with pytest.raises(ShapeMismatch):
        quotient_algebra(g, Partition.identity(3))


def test_is_homomorphism():
    g = z4()
    th = Partition.from_pairs(4, [(0, 2), (1, 3)])
    q, proj = quotient_algebra(g, th)
    assert is_homomorphism(Homomorphism(q, g, (0, 1))) is False  # not additive
    assert is_homomorphism(Homomorphism(q, g, (0, 2)))
    with pytest.raises(SignatureMismatch):
        is_homomorphism(Homomorphism(bool2(), g, (0, 0)))
    with pytest.raises(ShapeMismatch):
        is_homomorphism(Homomorphism(g, g, (0, 1)))


def test_homs_match_oracle():
    f1 = _free_bool1()
    b = bool2()
    maps = oracles.brute_homs(_ops_dict(f1), f1.size, _ops_dict(b), b.size)
    for m in maps:
        assert is_homomorphism(Homomorphism(f1, b, m))
    assert len(maps) == 2  # evaluation at 0 and at 1


def test_subdirect_embedding():
    g = z4()
    prod = product_algebra([g, g])
    diag = Homomorphism(g, prod, tuple(x * 4 + x for x in range(4)))
    rep = is_subdirect_embedding(diag, [g, g])
    assert rep.injective and rep.onto_each_factor == (True, True)
    first = Homomorphism(g, prod, tuple(x * 4 for x in range(4)))
    rep = is_subdirect_embedding(first, [g, g])
    assert rep.injective and rep.onto_each_factor == (True, False)
    with pytest.raises(ShapeMismatch):
        is_subdirect_embedding(diag, [g])


def test_all_congruences_small_oracle():
    for alg, expect in [
        (z4(), 3),
        (bool2(), 2),
        (semilat2(), 2),
        (_free_bool1(), 4),
    ]:
        cons = all_congruences(alg)
        assert len(cons) == expect
        brute = oracles.brute_congruences(_ops_dict(alg), alg.size)
        assert {c.labels for c in cons} == {
            Partition.from_labels(b).labels for b in brute
        }


def test_all_congruences_fast_path_agrees():
    # force the pair-graph route on algebras small enough for the naive one
    from affinekit.core import _principal_congruences_fast, _join_closure

    for alg in [z4(), _free_bool1(), power_algebra(z4(), 2)]:
        naive = all_congruences(alg)
        fast = _join_closure(
            _principal_congruences_fast(alg, 10 ** 6), alg.size, 10 ** 6
        )
        assert {p.labels for p in naive} == {p.labels for p in fast}


def test_all_congruences_z4_squared():
    # 15 subgroups of Z4 x Z4 (frozen from the subgroup oracle)
    cons = all_congruences(power_algebra(z4(), 2))
    assert len(cons) == 15


def test_all_congruences_empty_and_trivial():
    empty = FiniteAlgebra.make(0, [("and", 2, ())])
    assert all_congruences(empty) == (Partition(0, ()),)
    one = FiniteAlgebra.make(1, [("and", 2, (0,))])
    assert all_congruences(one) == (Partition(1, (0,)),)
