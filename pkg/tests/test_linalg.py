import random
from fractions import Fraction

import pytest

from diffmod.combinatorics import identity_perm, position_map, transposition
from diffmod.linalg import (
    BOOL,
    GF,
    QQ,
    FactorizationError,
    GradedMatrix,
    OrderedBasis,
    UnsupportedDomainError,
    bool_cokernel,
    factor_through,
    factor_through_kernel,
    kernel_basis,
    mat_add,
    mat_compose,
    mat_identity,
    mat_kron,
    mat_zero,
    perm_matrix,
    tensor_basis,
)


def basis(*names, deg=0):
    return OrderedBasis.make([(n, deg) for n in names])


def rand_bool_matrix(rng, dom, cod, density=0.4):
    entries = {}
    for r in range(len(cod)):
        for c in range(len(dom)):
            if rng.random() < density:
                entries[(r, c)] = True
    return GradedMatrix(dom, cod, BOOL, entries)


def rand_field_matrix(rng, dom, cod, field, lo=-3, hi=3):
    entries = {}
    for r in range(len(cod)):
        for c in range(len(dom)):
            v = field.coerce(rng.randint(lo, hi))
            if not field.is_zero(v):
                entries[(r, c)] = v
    return GradedMatrix(dom, cod, field, entries)


# ---------------------------------------------------------------------------
# scalar domains
# ---------------------------------------------------------------------------


def test_prime_field_requires_prime():
    GF(7)
    with pytest.raises(ValueError):
        GF(6)
    with pytest.raises(ValueError):
        GF(1)


def test_field_ops():
    f5 = GF(5)
    assert f5.add(3, 4) == 2
    assert f5.mul(3, 4) == 2
    assert f5.inv(3) == 2
    assert QQ.inv(Fraction(3, 2)) == Fraction(2, 3)


# ---------------------------------------------------------------------------
# composition, addition, enrichment laws
# ---------------------------------------------------------------------------


def test_compose_identity():
    rng = random.Random(0)
    dom, cod = basis("x", "y", "z"), basis("u", "v")
    f = rand_bool_matrix(rng, dom, cod)
    assert mat_compose(f, mat_identity(cod, BOOL)) == f
    assert mat_compose(mat_identity(dom, BOOL), f) == f


def test_boolean_composition_matches_pair_chasing():
    rng = random.Random(1)
    b = basis("p", "q", "r", "s")
    for _ in range(20):
        f = rand_bool_matrix(rng, b, b)
        g = rand_bool_matrix(rng, b, b)
        fg = mat_compose(f, g)
        rel_f = {(x, y) for (yi, xi) in f.entries for x in [b.elements[xi]] for y in [b.elements[yi]]}
        rel_g = {(y, z) for (zi, yi) in g.entries for y in [b.elements[yi]] for z in [b.elements[zi]]}
        chased = {(x, z) for (x, y) in rel_f for (y2, z) in rel_g if y == y2}
        got = {(b.elements[c], b.elements[r]) for (r, c) in fg.entries}
        assert got == chased


def test_composition_associative_over_rationals():
    rng = random.Random(2)
    b1, b2, b3, b4 = basis("a", "b"), basis("c", "d", "e"), basis("f"), basis("g", "h")
    for _ in range(10):
        f = rand_field_matrix(rng, b1, b2, QQ)
        g = rand_field_matrix(rng, b2, b3, QQ)
        h = rand_field_matrix(rng, b3, b4, QQ)
        assert mat_compose(mat_compose(f, g), h) == mat_compose(f, mat_compose(g, h))


def test_add_unit_and_boolean_union():
    rng = random.Random(3)
    dom, cod = basis("x", "y"), basis("u", "v", "w")
    f = rand_bool_matrix(rng, dom, cod)
    assert mat_add(f, mat_zero(dom, cod, BOOL)) == f
    g = rand_bool_matrix(rng, dom, cod)
    union = mat_add(f, g)
    assert set(union.entries) == set(f.entries) | set(g.entries)


def test_enrichment_laws_sampled():
    # the eight additive-category laws, on random matrices over GF(5)
    rng = random.Random(4)
    f5 = GF(5)
    b1, b2, b3 = basis("a", "b"), basis("c", "d"), basis("e", "f")
    zero12 = mat_zero(b1, b2, f5)
    for _ in range(10):
        f = rand_field_matrix(rng, b1, b2, f5)
        g = rand_field_matrix(rng, b1, b2, f5)
        h = rand_field_matrix(rng, b2, b3, f5)
        k = rand_field_matrix(rng, b2, b3, f5)
        assert mat_compose(zero12, h) == mat_zero(b1, b3, f5)
        assert mat_compose(f, mat_zero(b2, b3, f5)) == mat_zero(b1, b3, f5)
        assert mat_compose(mat_add(f, g), h) == mat_add(mat_compose(f, h), mat_compose(g, h))
        assert mat_compose(f, mat_add(h, k)) == mat_add(mat_compose(f, h), mat_compose(f, k))
        assert mat_kron(zero12, h) == mat_zero(
            tensor_basis(b1, b2), tensor_basis(b2, b3), f5
        )
        assert mat_kron(f, mat_zero(b2, b3, f5)).is_zero()
        assert mat_kron(mat_add(f, g), h) == mat_add(mat_kron(f, h), mat_kron(g, h))
        assert mat_kron(f, mat_add(h, k)) == mat_add(mat_kron(f, h), mat_kron(f, k))


# ---------------------------------------------------------------------------
# kron
# ---------------------------------------------------------------------------


def test_kron_unit_object():
    rng = random.Random(5)
    unit = OrderedBasis.make([((), 0)])
    dom, cod = basis("x", "y"), basis("u")
    f = rand_field_matrix(rng, dom, cod, QQ)
    fI = mat_kron(f, mat_identity(unit, QQ))
    # same entries, bases are flat tuple-paddings
    assert [v for v in fI.entries.values()] == [v for v in f.entries.values()]
    assert fI.domain.elements == tuple((x, ) + () for x in dom.elements)


def test_kron_interchange():
    rng = random.Random(6)
    b1, b2, b3 = basis("a", "b"), basis("c", "d"), basis("e")
    for _ in range(10):
        f = rand_field_matrix(rng, b1, b2, QQ)
        h = rand_field_matrix(rng, b2, b3, QQ)
        g = rand_field_matrix(rng, b1, b2, QQ)
        k = rand_field_matrix(rng, b2, b3, QQ)
        lhs = mat_compose(mat_kron(f, g), mat_kron(h, k))
        rhs = mat_kron(mat_compose(f, h), mat_compose(g, k))
        assert lhs == rhs


def test_perm_matrix_identity_and_swap_involution():
    bA, bB = basis("a1", "a2"), basis("b1", "b2", "b3")
    ident = perm_matrix(position_map(identity_perm(2), 2), [bA, bB], BOOL)
    assert ident == mat_identity(tensor_basis(bA, bB), BOOL)
    swap = position_map(transposition(2, 1, 2), 2)
    g1 = perm_matrix(swap, [bA, bB], BOOL)
    g2 = perm_matrix(swap, [bB, bA], BOOL)
    assert mat_compose(g1, g2) == mat_identity(tensor_basis(bA, bB), BOOL)


def test_perm_matrix_composition_small():
    from diffmod.combinatorics import all_permutations

    bases = [basis("a"), basis("b1", "b2"), basis("c")]
    for s in all_permutations(3):
        for t in all_permutations(3):
            ms = perm_matrix(position_map(s, 3), bases, QQ)
            permuted = position_map(s, 3).apply(tuple(bases))
            mt = perm_matrix(position_map(t, 3), list(permuted), QQ)
            mst = perm_matrix(position_map(s.then(t), 3), bases, QQ)
            assert mat_compose(ms, mt) == mst


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


def test_kernel_one_relation():
    dom = basis("x", "y")
    cod = basis("r")
    f = GradedMatrix(dom, cod, QQ, {(0, 0): Fraction(1), (0, 1): Fraction(1)})
    kb = kernel_basis(f)
    assert kb == [{"y": Fraction(1), "x": Fraction(-1)}]


def test_kernel_of_identity_is_empty():
    b = basis("x", "y", "z")
    assert kernel_basis(mat_identity(b, QQ)) == []


def test_kernel_derivative_slice_over_gf2():
    # d/dx on span{1..x^4} over GF(2): kernel is {1, x^2, x^4}
    f2 = GF(2)
    dom = OrderedBasis.make([(f"x^{k}", k) for k in range(5)])
    cod = OrderedBasis.make([(f"x^{k}", k) for k in range(4)])
    entries = {}
    for k in range(1, 5):
        c = f2.coerce(k)
        if c:
            entries[(k - 1, k)] = c
    d = GradedMatrix(dom, cod, f2, entries)
    kb = kernel_basis(d)
    assert kb == [{"x^0": 1}, {"x^2": 1}, {"x^4": 1}]


def test_kernel_requires_field():
    b = basis("x")
    with pytest.raises(UnsupportedDomainError):
        kernel_basis(mat_identity(b, BOOL))


# ---------------------------------------------------------------------------
# Boolean cokernels and factorization
# ---------------------------------------------------------------------------


def test_cokernel_of_zero_is_identity():
    dom, cod = basis("x"), basis("u", "v")
    sel, kept = bool_cokernel(mat_zero(dom, cod, BOOL))
    assert kept.elements == cod.elements
    assert sel == mat_identity(cod, BOOL)


def test_cokernel_of_total_map_is_empty():
    dom, cod = basis("x", "y"), basis("u", "v")
    f = GradedMatrix(dom, cod, BOOL, {(0, 0): True, (1, 1): True})
    sel, kept = bool_cokernel(f)
    assert len(kept) == 0
    assert sel.is_zero()
    assert mat_compose(f, sel).is_zero()


def test_cokernel_universal_property_random():
    rng = random.Random(7)
    dom, mid, cod = basis("x", "y", "z"), basis("m1", "m2", "m3", "m4"), basis("t1", "t2")
    for _ in range(20):
        f = rand_bool_matrix(rng, dom, mid)
        sel, kept = bool_cokernel(f)
        assert mat_compose(f, sel).is_zero()
        # any g with f;g = 0 factors uniquely through the selector
        g = rand_bool_matrix(rng, mid, cod)
        hit_rows = {r for (r, _) in f.entries}
        g = GradedMatrix(
            mid, cod, BOOL, {(r, c): True for (r, c) in g.entries if c not in hit_rows}
        )
        assert mat_compose(f, g).is_zero()
        h = factor_through(sel, g)
        assert mat_compose(sel, h) == g


def test_factor_through_identity_and_error():
    dom, cod = basis("x", "y"), basis("u")
    f = GradedMatrix(dom, cod, BOOL, {(0, 0): True})
    ident = mat_identity(dom, BOOL)
    assert factor_through(ident, f) == f
    # selector dropping "x" cannot factor a map supported on "x"
    sel = GradedMatrix(dom, basis("y"), BOOL, {(0, 1): True})
    with pytest.raises(FactorizationError) as exc:
        factor_through(sel, f)
    assert exc.value.witness == "x"


def test_factor_through_kernel_roundtrip_and_error():
    rng = random.Random(8)
    amb = basis("e1", "e2", "e3", "e4")
    # a kernel basis of two independent vectors
    kern = [
        {"e1": Fraction(1), "e3": Fraction(2)},
        {"e2": Fraction(1), "e4": Fraction(-1)},
    ]
    dom = basis("c1", "c2")
    # build f = combination of kernel vectors with known coefficients
    coeffs = {("c1"): (Fraction(2), Fraction(0)), ("c2"): (Fraction(-1), Fraction(3))}
    entries = {}
    for c, delem in enumerate(dom.elements):
        a, b = coeffs[delem]
        for vec, w in ((kern[0], a), (kern[1], b)):
            for e, v in vec.items():
                if w:
                    entries[(amb.index(e), c)] = entries.get((amb.index(e), c), Fraction(0)) + w * v
    f = GradedMatrix.from_entries(dom, amb, QQ, entries)
    g = factor_through_kernel(kern, f)
    assert g.entry(("k", 0), "c1") == Fraction(2)
    assert g.entry(("k", 1), "c2") == Fraction(3)
    assert g.entry(("k", 1), "c1") == Fraction(0)
    # residual outside the span triggers the error with a witness
    bad = GradedMatrix(dom, amb, QQ, {(0, 0): Fraction(1), (1, 0): Fraction(5)})
    with pytest.raises(FactorizationError) as exc:
        factor_through_kernel(kern, bad)
    assert exc.value.witness == "c1"


def test_bool_cokernel_requires_boolean():
    b = basis("x")
    with pytest.raises(UnsupportedDomainError):
        bool_cokernel(mat_identity(b, QQ))


def test_degree_preservation_flag():
    dom = OrderedBasis.make([("a", 1), ("b", 2)])
    cod = OrderedBasis.make([("u", 1), ("v", 2)])
    good = GradedMatrix(dom, cod, BOOL, {(0, 0): True, (1, 1): True})
    bad = GradedMatrix(dom, cod, BOOL, {(1, 0): True})
    assert good.is_degree_preserving()
    assert not bad.is_degree_preserving()
