"""Quadratic form tests.  Small-field cases are checked against exhaustive
isotropy/Witt-index oracles that enumerate every vector."""

import itertools
import random

import pytest

from charform.errors import SingularForm, UnsupportedField, ZeroScalar
from charform.fields import GF2, gf2k, ratfunc, solve_artin_schreier
from charform.forms import (
    QuadraticForm,
    RawQuadraticForm,
    arf_invariant,
    bilinear_tensor,
    block00,
    block11,
    blocks_match_upto_squares,
    direct_sum,
    form,
    is_anisotropic,
    is_hyperbolic,
    is_quasi_hyperbolic,
    isotropic_vector,
    normalize,
    quad_pfister,
    quasi_pfister,
    scale,
    totally_singular_isometry,
    trace_one_element,
    witt_decompose_gf2k,
    witt_equivalent_gf2k,
)

F4 = gf2k(2)
F8 = gf2k(3)
R2 = ratfunc(GF2)


# --- oracles ----------------------------------------------------------------


def all_vectors(field, n):
    for vals in itertools.product(range(field.order), repeat=n):
        yield [field._el(v) for v in vals]


def brute_isotropic(q):
    """Exhaustive isotropy search (independent of the decision procedures)."""
    for v in all_vectors(q.field, q.dim):
        if any(v) and not q.evaluate(v):
            return v
    return None


def brute_witt_index(q):
    """Exhaustive Witt index: maximal number of split hyperbolic planes."""
    raw = q.to_raw()
    return _brute_witt_raw(raw)


def _brute_witt_raw(raw):
    field = raw.field
    n = raw.dim
    for v in all_vectors(field, n):
        if not any(v) or raw.evaluate(v):
            continue
        w = None
        for cand in all_vectors(field, n):
            if raw.polar(v, cand):
                w = cand
                break
        if w is None:
            continue
        c = raw.polar(v, w)
        w = [a / c for a in w]
        basis = []
        for cand in all_vectors(field, n):
            c1 = raw.polar(cand, w)
            c2 = raw.polar(cand, v)
            red = [a + c1 * b1 + c2 * b2 for a, b1, b2 in zip(cand, v, w)]
            if any(red):
                basis.append(red)
        from charform.linalg import Span

        span = Span(basis, field)
        sub = [span.basis_vector(i) for i in range(span.dim)]
        return 1 + _brute_witt_raw(raw.restrict(sub))
    return 0


# --- raw forms and normalization --------------------------------------------


def test_polar_matrix_examples():
    one, zero = GF2.one, GF2.zero
    raw = RawQuadraticForm(GF2, [[one, one], [zero, one]])  # the block (1,1)
    assert raw.polar_matrix() == ((zero, one), (one, zero))
    raw1 = RawQuadraticForm(GF2, [[one]])
    assert raw1.polar_matrix() == ((zero,),)


def test_polar_diagonal_is_zero_random():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randrange(1, 6)
        u = [[F4.rand(rng) if j >= i else F4.zero for j in range(n)] for i in range(n)]
        raw = RawQuadraticForm(F4, u)
        b = raw.polar_matrix()
        assert all(not b[i][i] for i in range(n))


def test_normalize_xy_form():
    one, zero = GF2.one, GF2.zero
    raw = RawQuadraticForm(GF2, [[zero, one], [zero, zero]])
    q, _ = normalize(raw)
    assert q.blocks == ((zero, zero),) and not q.diag


def test_normalize_1x1():
    q, _ = normalize(RawQuadraticForm(GF2, [[GF2.one]]))
    assert not q.blocks and q.diag == (GF2.one,)


def test_normalize_derived_block():
    one, zero = GF2.one, GF2.zero
    raw = RawQuadraticForm(GF2, [[one, one], [zero, one]])
    q, t = normalize(raw)
    assert q.blocks == ((one, one),)
    # isometry witness: q(T y) = block form at y, all four vectors
    for y in all_vectors(GF2, 2):
        ty = [t[0][0] * y[0] + t[0][1] * y[1], t[1][0] * y[0] + t[1][1] * y[1]]
        assert raw.evaluate(ty) == q.evaluate(y)


def test_normalize_preserves_evaluation_500():
    rng = random.Random(17)
    for _ in range(25):
        n = rng.randrange(1, 7)
        u = [[F8.rand(rng) if j >= i else F8.zero for j in range(n)] for i in range(n)]
        raw = RawQuadraticForm(F8, u)
        q, t = normalize(raw)
        assert q.dim == n
        for _ in range(20):
            y = [F8.rand(rng) for _ in range(n)]
            ty = [
                sum((t[i][j] * y[j] for j in range(n)), F8.zero) for i in range(n)
            ]
            assert raw.evaluate(ty) == q.evaluate(y)


def test_normalize_radical_goes_to_diagonal():
    one, zero = GF2.one, GF2.zero
    # XY plus an isolated square: radical has dimension 1
    raw = RawQuadraticForm(GF2, [[zero, one, zero], [zero, zero, zero], [zero, zero, one]])
    q, _ = normalize(raw)
    assert len(q.blocks) == 1 and q.diag == (one,)


# --- constructors ------------------------------------------------------------


def test_scale_examples():
    g = F4.gen
    q = form(F4, [(F4.one, g)])
    assert scale(F4.one, q) == q
    scaled = scale(g, q)
    assert scaled.blocks == ((g, g / g),)  # (a, c/a) with a = g, c = g
    # substitution oracle: (ca, b/c) at (x, y) equals c * q(x, y/c)
    rng = random.Random(5)
    for _ in range(50):
        x, y = F4.rand(rng), F4.rand(rng)
        assert scaled.evaluate([x, y]) == g * q.evaluate([x, y / g])
    with pytest.raises(ZeroScalar):
        scale(F4.zero, q)


def test_direct_sum_and_tensor_identity():
    q = form(F4, [(F4.one, F4.gen)])
    assert bilinear_tensor([F4.one], q) == q
    s = direct_sum(q, q)
    assert len(s.blocks) == 2 and s.dim == 4


def test_quad_pfister_shapes():
    c = F4.gen
    p1 = quad_pfister([], c)
    assert p1.blocks == ((F4.one, c),)
    p3 = quad_pfister([F4.one, F4.gen], c)
    assert p3.dim == 8 and p3.nonsingular
    # represents 1: first block at (1,0) evaluates to 1
    v = [F4.zero] * 8
    v[0] = F4.one
    assert p3.evaluate(v) == F4.one


def test_quad_pfister_hyperbolic_when_solvable():
    # c in the Artin-Schreier image gives Arf 0
    img = {(x * x + x) for x in F4.elements()}
    c = next(iter(e for e in img if e))
    p = quad_pfister([F4.gen], c)
    assert arf_invariant(p) == 0
    assert is_hyperbolic(p).is_true


def test_quasi_pfister_subset_products():
    d = F8.gen
    q1 = quasi_pfister([d])
    assert q1.diag == (F8.one, d)
    q0 = quasi_pfister([], field=F8)
    assert q0.diag == (F8.one,)
    a, b = F8.gen, F8.gen * F8.gen
    q2 = quasi_pfister([a, b])
    assert q2.diag == (F8.one, a, b, a * b)


# --- Arf and Witt ------------------------------------------------------------


def test_arf_examples():
    assert arf_invariant(block00(GF2)) == 0
    assert arf_invariant(block11(GF2)) == 1
    assert arf_invariant(direct_sum(block11(GF2), block11(GF2))) == 0
    with pytest.raises(SingularForm):
        arf_invariant(form(GF2, [], [GF2.one]))
    with pytest.raises(UnsupportedField):
        arf_invariant(form(R2, [(R2.one, R2.one)]))


def test_arf_additive_and_scale_invariant_exhaustive():
    for field in (GF2, F4):
        one = field.one
        for a, b, c, d in itertools.product(field.elements(), repeat=4):
            q1 = form(field, [(a, b)])
            q2 = form(field, [(c, d)])
            assert arf_invariant(direct_sum(q1, q2)) == (
                arf_invariant(q1) ^ arf_invariant(q2)
            )
        for a, b in itertools.product(field.elements(), repeat=2):
            q = form(field, [(a, b)])
            for c in field.elements():
                if c:
                    assert arf_invariant(scale(c, q)) == arf_invariant(q)


def test_witt_decompose_examples():
    w = witt_decompose_gf2k(block11(GF2))
    assert w.witt_index == 0 and w.kernel.dim == 2 and w.arf == 1
    # oracle: X^2+XY+Y^2 has no nonzero root over GF(2)
    assert brute_isotropic(block11(GF2)) is None
    w0 = witt_decompose_gf2k(block00(GF2))
    assert w0.witt_index == 1 and w0.arf == 0 and w0.kernel.dim == 0
    p3 = quad_pfister([GF2.one, GF2.one], GF2.one)
    assert arf_invariant(p3) == 0
    assert brute_isotropic(p3) is not None  # cross-check by exhaustive search
    assert witt_decompose_gf2k(p3).witt_index == 4


def test_witt_decompose_invariant_dimension():
    rng = random.Random(23)
    for field in (GF2, F4):
        for _ in range(40):
            nb = rng.randrange(0, 3)
            nd = rng.randrange(0, 3)
            q = form(
                field,
                [(field.rand(rng), field.rand(rng)) for _ in range(nb)],
                [field.rand(rng) for _ in range(nd)],
            )
            w = witt_decompose_gf2k(q)
            assert q.dim == 2 * w.witt_index + w.kernel.dim


def test_witt_decompose_matches_brute_witt_index():
    # dimension <= 6 over GF(2), <= 4 over GF(4): exhaustive oracle
    rng = random.Random(29)
    for field, max_dim in ((GF2, 3), (F4, 2)):
        for _ in range(25):
            nb = rng.randrange(0, max_dim)
            nd = rng.randrange(0, max_dim - nb)
            q = form(
                field,
                [(field.rand(rng), field.rand(rng)) for _ in range(nb)],
                [field.rand(rng) for _ in range(nd)],
            )
            assert witt_decompose_gf2k(q).witt_index == brute_witt_index(q)


def test_witt_equivalent_examples():
    q = form(GF2, [(GF2.one, GF2.one)])
    assert witt_equivalent_gf2k(q, direct_sum(q, block00(GF2)))
    assert not witt_equivalent_gf2k(block11(GF2), block00(GF2))
    assert witt_equivalent_gf2k(
        direct_sum(block11(GF2), block11(GF2)), direct_sum(block00(GF2), block00(GF2))
    )


def test_bilinear_tensor_associativity_witt():
    rng = random.Random(31)
    for _ in range(20):
        a, b = F8.rand_nonzero(rng), F8.rand_nonzero(rng)
        q = form(F8, [(F8.one, F8.rand(rng))])
        lhs = bilinear_tensor([F8.one, a], bilinear_tensor([F8.one, b], q))
        rhs = bilinear_tensor([F8.one, a, b, a * b], q)
        assert witt_equivalent_gf2k(lhs, rhs)


# --- hyperbolicity decisions -------------------------------------------------


def test_is_hyperbolic_gf2k():
    assert is_hyperbolic(block11(GF2)).is_false
    assert is_hyperbolic(direct_sum(block00(GF2), block00(GF2))).is_true
    with pytest.raises(SingularForm):
        is_hyperbolic(form(GF2, [], [GF2.one]))


def test_pfister_hyperbolic_agrees_with_brute_isotropy():
    rng = random.Random(41)
    for field in (GF2, F4, F8):
        for _ in range(10):
            slots = [field.rand_nonzero(rng), field.rand_nonzero(rng)]
            c = field.rand(rng)
            p = quad_pfister(slots, c)
            dec = is_hyperbolic(p)
            assert dec.decided
            if field.order**p.dim <= 1 << 16:
                assert dec.is_true == (brute_isotropic(p) is not None)
    # GF(8) at an exhaustively checkable dimension
    for _ in range(10):
        p = quad_pfister([F8.rand_nonzero(rng)], F8.rand(rng))
        assert is_hyperbolic(p).is_true == (brute_isotropic(p) is not None)


def test_is_hyperbolic_ratfunc_certificates():
    t, one = R2.t, R2.one
    # visibly split: (0,0) + (0,0)
    q = direct_sum(block00(R2), block00(R2))
    assert is_hyperbolic(q).is_true
    # [1,t] is anisotropic: Artin-Schreier obstruction at the constant term
    q1 = form(R2, [(one, t)])
    assert is_hyperbolic(q1).is_false
    assert is_anisotropic(q1).is_true
    # q + q is always hyperbolic in characteristic 2
    q2 = direct_sum(q1, q1)
    assert is_hyperbolic(q2).is_true


def test_norm_form_of_tt_symbol_is_isotropic():
    # the 2-fold Pfister <<t; t]] has the explicit zero (0,1,1,0)
    t = R2.t
    p = quad_pfister([t], t)
    v = [R2.zero, R2.one, R2.one, R2.zero]
    assert not p.evaluate(v)
    assert is_hyperbolic(p, pfister=True).is_true
    assert is_anisotropic(p).is_false


def test_division_norm_form_certified_anisotropic():
    # <<t; 1]] over GF(2)(t): trace-one constant, odd valuation of t at t
    t, one = R2.t, R2.one
    p = quad_pfister([t], one)
    dec = is_anisotropic(p)
    assert dec.is_true
    assert is_hyperbolic(p).is_false


def test_unknown_is_reported_not_false():
    # a 6-dimensional anisotropy question is beyond the certificates
    t, one = R2.t, R2.one
    q = form(R2, [(one, t), (t, one), (t + one, t)])
    dec = is_anisotropic(q)
    assert dec.is_unknown or dec.is_false  # never a bare uncertified "true"


# --- totally singular forms --------------------------------------------------


def test_totally_singular_examples():
    one = GF2.one
    d = form(GF2, [], [one, one])
    assert totally_singular_isometry(d, d).is_true
    g = F4.gen
    d1 = form(F4, [], [g])
    d2 = form(F4, [], [F4.one])
    assert totally_singular_isometry(d1, d2).is_true  # g is a square
    t, onr = R2.t, R2.one
    e1 = form(R2, [], [onr, t])
    e2 = form(R2, [], [onr, t * t])
    dec = totally_singular_isometry(e1, e2)
    assert dec.is_false  # spans have ranks 2 vs 1


def test_totally_singular_span_invariance():
    t, one = R2.t, R2.one
    # <1, t, 1+t> is isometric to <1, t, 0>: same span, same dimension
    d1 = form(R2, [], [one, t, one + t])
    d2 = form(R2, [], [one, t, R2.zero])
    assert totally_singular_isometry(d1, d2).is_true


def test_quasi_hyperbolic_interpretation():
    t = R2.t
    assert is_quasi_hyperbolic(form(R2, [], [R2.one, t * t]))
    assert not is_quasi_hyperbolic(form(R2, [], [R2.one, t]))


# --- block matching ----------------------------------------------------------


def test_blocks_match_upto_squares():
    t, one = R2.t, R2.one
    q1 = form(R2, [(t * t, one)])
    q2 = form(R2, [(one, t * t)])
    dec = blocks_match_upto_squares(q1, q2)
    assert dec.is_true
    q3 = form(R2, [(t, one)])
    assert blocks_match_upto_squares(q1, q3).is_false


def test_isotropic_vector_finds_duplicates():
    t = R2.t
    q = form(R2, [(t, t + R2.one), (t, t + R2.one)])
    v = isotropic_vector(q)
    assert v is not None and not q.evaluate(v)
