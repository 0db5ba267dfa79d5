import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.combinatorics import Permutation

from lpstrips import heis
from lpstrips.core import ContractError, DomainError
from lpstrips.heis import HeisAlgebra, HeisForm
from lpstrips.poly import Poly, random_poly

F = Fraction


# ---------------------------------------------------------------------------
# coordinate-basis oracle: forms are {sorted coordinate indices: sympy expr}


def _symbols(m):
    return sympy.symbols(heis.var_names(m))


def _var_of_slot(m, c):
    # coframe slot 2(i-1) is dx_i, 2(i-1)+1 is dy_i, the last slot is dz
    if c == 2 * (m - 1):
        return 2 * m - 2
    i, is_y = divmod(c, 2)
    return (m - 1) + i if is_y else i


def _to_sym(p: Poly, syms):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** e for s, e in zip(syms, mono)])
                for mono, c in p.terms.items()), sympy.Integer(0))


def _coord_wedge(a, b):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            idx = ka + kb
            if len(set(idx)) < len(idx):
                continue
            order = sorted(range(len(idx)), key=lambda i: idx[i])
            sign = Permutation(order).signature() if len(idx) > 1 else 1
            key = tuple(sorted(idx))
            out[key] = out.get(key, 0) + sign * va * vb
    return out


def _coord_tau(m, syms):
    t = {(2 * (m - 1),): sympy.Integer(1)}
    for i in range(m - 1):
        x, y = syms[i], syms[m - 1 + i]
        t[(2 * i,)] = y / 2
        t[(2 * i + 1,)] = -x / 2
    return t


def to_coordinates(form: HeisForm):
    m, syms = form.m, _symbols(form.m)
    total = {}
    for mono, f in form.terms.items():
        acc = {(): _to_sym(f, syms)}
        for c in mono:
            factor = _coord_tau(m, syms) if c == heis.tau_index(m) else {(c,): sympy.Integer(1)}
            acc = _coord_wedge(acc, factor)
        for k, v in acc.items():
            total[k] = total.get(k, 0) + v
    return total


def coord_d(m, form):
    syms = _symbols(m)
    out = {}
    for key, f in form.items():
        for c in range(2 * m - 1):
            g = sympy.diff(f, syms[_var_of_slot(m, c)])
            if g != 0:
                for k, v in _coord_wedge({(c,): g}, {key: 1}).items():
                    out[k] = out.get(k, 0) + v
    return out


def coord_equal(a, b):
    return all(sympy.expand(a.get(k, 0) - b.get(k, 0)) == 0 for k in set(a) | set(b))


def random_form(rng, m, k, terms=3):
    monos = list(itertools.combinations(range(2 * m - 1), k))
    chosen = rng.sample(monos, min(terms, len(monos)))
    return HeisForm(m, k, {mono: random_poly(rng, heis.nvars(m), 3) for mono in chosen})


def frame(m):
    return (lambda f: heis.frame_X(m, 1, f), lambda f: heis.frame_Y(m, 1, f), lambda f: heis.frame_Z(m, f))


def var(m, name):
    return Poly.parse(name, heis.var_names(m))


# ---------------------------------------------------------------------------


def test_algebra_brackets():
    for m in range(2, 5):
        alg = HeisAlgebra(m)
        labels = alg.labels
        dim = len(labels)
        basis = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        z = basis[-1]
        for a, b in itertools.product(range(dim), repeat=2):
            got = alg.bracket(basis[a], basis[b])
            pair = (labels[a][0], labels[b][0], labels[a][1:] == labels[b][1:])
            if pair == ("X", "Y", True):
                assert got == z
            elif pair == ("Y", "X", True):
                assert got == tuple(-v for v in z)
            else:
                assert not any(got)


def test_frame_commutator_is_Z():
    rng = random.Random(1)
    X, Y, Z = frame(2)
    for _ in range(20):
        f = random_poly(rng, 3, 4)
        assert X(Y(f)) - Y(X(f)) == Z(f)


def test_dtau_examples():
    assert heis.d_tau(2) == HeisForm.basis(2, "dx1^dy1", -1)
    assert heis.d_tau(3) == HeisForm.basis(3, "dx1^dy1", -1) + HeisForm.basis(3, "dx2^dy2", -1)
    for m in (2, 3, 4):
        assert heis.differentiate(heis.tau(m)) == heis.d_tau(m)


def test_d_of_z():
    dz = heis.differentiate(HeisForm.function(2, var(2, "z")))
    y, x = var(2, "y1"), var(2, "x1")
    expected = HeisForm.basis(2, "dx1", y * F(-1, 2)) + HeisForm.basis(2, "dy1", x * F(1, 2)) + heis.tau(2)
    assert dz == expected


def test_d_of_f_dx_matches_frame_formula():
    rng = random.Random(3)
    X, Y, Z = frame(2)
    for _ in range(20):
        f = random_poly(rng, 3, 3)
        got = heis.differentiate(HeisForm.basis(2, "dx1", f))
        assert got == HeisForm.basis(2, "dy1^dx1", Y(f)) + HeisForm.basis(2, "tau^dx1", Z(f))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.data())
def test_d_matches_coordinate_oracle(seed, m, data):
    k = data.draw(st.integers(0, 2 * m - 2))
    w = random_form(random.Random(seed), m, k)
    assert coord_equal(to_coordinates(heis.differentiate(w)), coord_d(m, to_coordinates(w)))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.data())
def test_wedge_matches_coordinate_oracle_and_leibniz(seed, m, data):
    rng = random.Random(seed)
    k = data.draw(st.integers(0, 2))
    ell = data.draw(st.integers(0, 2))
    a, b = random_form(rng, m, k, 2), random_form(rng, m, ell, 2)
    assert coord_equal(to_coordinates(a.wedge(b)), _coord_wedge(to_coordinates(a), to_coordinates(b)))
    if k + ell + 1 <= 2 * m - 1:
        lhs = heis.differentiate(a.wedge(b))
        rhs = heis.differentiate(a).wedge(b) + a.wedge(heis.differentiate(b)).scale((-1) ** k)
        assert lhs == rhs


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.data())
def test_d_squared_vanishes(seed, m, data):
    k = data.draw(st.integers(0, 2 * m - 3))
    w = random_form(random.Random(seed), m, k)
    assert heis.differentiate(heis.differentiate(w)).is_zero()


def test_wedge_mono_signs():
    for a, b in itertools.product(itertools.combinations(range(5), 2), itertools.combinations(range(5), 2)):
        sign, mono = heis.wedge_mono(a, b)
        idx = a + b
        if len(set(idx)) < 4:
            assert sign == 0
        else:
            assert mono == tuple(sorted(idx))
            assert sign == Permutation(sorted(range(4), key=lambda i: idx[i])).signature()


def test_weight_split_examples():
    w = HeisForm.basis(2, "dx1^tau")
    assert heis.weight_split(w) == (HeisForm.zero(2, 2), HeisForm.basis(2, "dx1"))
    w = HeisForm.basis(2, "dx1^dy1") + HeisForm.basis(2, "dx1^tau")
    assert heis.weight_split(w) == (HeisForm.basis(2, "dx1^dy1"), HeisForm.basis(2, "dx1"))


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_weight_split_roundtrip(seed, k):
    w = random_form(random.Random(seed), 3, k)
    horizontal, vertical = heis.weight_split(w)
    assert horizontal.is_horizontal() and vertical.is_horizontal()
    assert heis.recombine(horizontal, vertical) == w


@pytest.mark.parametrize("m, k, ranks", [(2, 0, (1, 0, 1)), (3, 1, (4, 0, 4)), (3, 2, (6, 5, 1))])
def test_lefschetz_examples(m, k, ranks):
    assert heis.lefschetz_rank(m, k) == ranks


def test_lefschetz_inverse():
    rng = random.Random(5)
    Y = frame(2)[1]
    f = random_poly(rng, 3, 3)
    omega = HeisForm.basis(2, "dy1^dx1", Y(f))
    assert heis.lefschetz_inverse(2, omega) == HeisForm.function(2, Y(f))
    assert heis.lefschetz_inverse(2, heis.d_tau(2)) == HeisForm.function(2, 1)
    for m in (3, 4):
        gamma = HeisForm(m, m - 2, {mono: random_poly(rng, heis.nvars(m), 2)
                                    for mono in heis.horizontal_basis(m, m - 2)})
        assert heis.lefschetz_inverse(m, gamma.wedge(heis.d_tau(m))) == gamma
    with pytest.raises(ContractError):
        heis.lefschetz_inverse(2, HeisForm.basis(2, "dx1^tau"))


def test_nullclass_generic_examples():
    m = 3
    assert heis.nullclass_generic(m, HeisForm.function(m, var(m, "x1")), 1) is False
    assert heis.nullclass_generic(m, HeisForm.zero(m, 1), 2) is True
    with pytest.raises(DomainError):
        heis.nullclass_generic(m, HeisForm.zero(m, 1), 3)


def test_nullclass_generic_vertical_forms_are_null():
    # theta = beta ^ tau with beta a horizontal (k-2)-form, 2 <= k < m
    rng = random.Random(9)
    for m in (3, 4):
        for k in range(2, m):
            for _ in range(5):
                monos = heis.horizontal_basis(m, k - 2)
                beta = HeisForm(m, k - 2, {mono: random_poly(rng, heis.nvars(m), 2) for mono in monos})
                assert heis.nullclass_generic(m, beta.wedge(heis.tau(m)), k)


def test_nullclass_middle_examples():
    y = var(2, "y1")
    assert heis.nullclass_middle(2, HeisForm.basis(2, "dx1", y * y)) == HeisForm.basis(2, "dy1^tau", -2)
    assert heis.nullclass_middle(2, HeisForm.basis(2, "dx1", y)).is_zero()
    # the Z f term survives for f = z
    assert heis.nullclass_middle(2, HeisForm.basis(2, "dx1", var(2, "z"))) == \
        HeisForm.basis(2, "dx1^tau", F(-3, 2))


@given(st.integers(0, 10 ** 6))
def test_middle_obstruction_formula(seed):
    f = random_poly(random.Random(seed), 3, 4)
    X, Y, Z = frame(2)
    expected = HeisForm.basis(2, "dx1^tau", -(Z(f) + X(Y(f)))) + HeisForm.basis(2, "dy1^tau", -Y(Y(f)))
    assert heis.nullclass_middle(2, HeisForm.basis(2, "dx1", f)) == expected


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4]))
def test_middle_obstruction_is_vertical_and_exact_invariant(seed, m):
    rng = random.Random(seed)
    theta = random_form(rng, m, m - 1)
    obstruction = heis.nullclass_middle(m, theta)
    assert heis.weight_split(obstruction)[0].is_zero()
    # adding an exact form and a vertical form leaves the obstruction unchanged
    beta = random_form(rng, m, m - 2)
    monos = heis.horizontal_basis(m, m - 2)
    psi = HeisForm(m, m - 2, {mono: random_poly(rng, heis.nvars(m), 2) for mono in monos[:2]})
    moved = theta + heis.differentiate(beta) + psi.wedge(heis.tau(m))
    assert heis.nullclass_middle(m, moved) == obstruction


def test_vertical_construct_examples():
    x, y = var(2, "x1"), var(2, "y1")
    phi = heis.vertical_construct(2, HeisForm.basis(2, "dx1", x * y))
    assert heis.weight_split(heis.differentiate(phi))[0].is_zero()
    const = heis.vertical_construct(3, HeisForm.basis(3, "dx1^dy2", 5))
    assert const == HeisForm.basis(3, "dx1^dy2", 5) and heis.differentiate(const).is_zero()
    phi = heis.vertical_construct(3, HeisForm.basis(3, "dx1^dy2", var(3, "x2")))
    assert heis.weight_split(heis.differentiate(phi))[0].is_zero()
    with pytest.raises(ContractError):
        heis.vertical_construct(2, HeisForm.basis(2, "tau"))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 4]))
def test_vertical_construct_property(seed, m):
    rng = random.Random(seed)
    monos = heis.horizontal_basis(m, m - 1)
    phi1 = HeisForm(m, m - 1, {mono: random_poly(rng, heis.nvars(m), 3) for mono in rng.sample(monos, 2)})
    phi = heis.vertical_construct(m, phi1)
    assert heis.weight_split(phi)[0] == phi1
    assert heis.weight_split(heis.differentiate(phi))[0].is_zero()


@pytest.mark.parametrize("m, k", [(2, 2), (3, 2), (3, 4), (3, 3), (4, 2), (4, 5)])
def test_duality(m, k):
    assert heis.duality_orthogonality(m, k)


def test_sl3_pair_examples():
    x, y, z = var(2, "x1"), var(2, "y1"), var(2, "z")
    theta, big_theta, cert = heis.sl3_pair_construct(x * y)
    assert (theta, big_theta) == (HeisForm.basis(2, "dx1", y), HeisForm.basis(2, "dy1", -x))
    assert cert.is_zero()
    theta, big_theta, cert = heis.sl3_pair_construct(z)
    assert theta == HeisForm.basis(2, "dx1", y * F(-1, 2))
    assert big_theta == HeisForm.basis(2, "dy1", x * F(-1, 2))
    assert cert.is_zero()
    theta, big_theta, cert = heis.sl3_pair_construct(Poly.const(3, 7))
    assert theta.is_zero() and big_theta.is_zero() and cert.is_zero()


@given(st.integers(0, 10 ** 6))
def test_sl3_pair_certificate_vanishes(seed):
    u = random_poly(random.Random(seed), 3, 4)
    assert heis.sl3_pair_construct(u)[2].is_zero()


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]), st.data())
def test_json_and_text_roundtrip(seed, m, data):
    k = data.draw(st.integers(0, 2 * m - 1))
    w = random_form(random.Random(seed), m, k)
    assert HeisForm.from_json(m, w.to_json(), k) == w
    if not w.is_zero():
        text = " + ".join(f"({item['coeff']}) {item['monomial']}" for item in w.to_json())
        assert heis.parse_form(m, text) == w


def test_parse_form_and_errors():
    w = heis.parse_form(2, "(y1^2) dx1^dy1 - (z) dy1^tau")
    assert w.coeff("dx1^dy1") == var(2, "y1") * var(2, "y1")
    assert w.coeff("dy1^tau") == -var(2, "z")
    assert w.coeff("tau^dy1") == var(2, "z")
    with pytest.raises(DomainError):
        heis.parse_form(2, "garbage")
    with pytest.raises(DomainError):
        HeisForm(2, 4)
    with pytest.raises(DomainError):
        HeisForm.basis(2, "dx1") + HeisForm.basis(2, "dx1^dy1")
