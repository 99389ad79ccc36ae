"""Tests for the truncated Laurent series core."""

from fractions import Fraction

import pytest

from mzv.algebra import DomainError, MzvCombo
from mzv.series import (
    Atom,
    ConstSlot,
    G,
    LaurentSeriesMV,
    SymmetrySpec,
    VarSlot,
    assemble_atoms,
    clear_atoms,
    clearing_factors,
    constant_series,
    divided_difference,
    lin,
    monomial_str,
    pattern_dd,
    pattern_series,
    symmetrize,
    var_vec,
    vec_canonical,
    vec_sub,
    zero_series,
)

XY = ("x", "y")
X3 = ("x1", "x2", "x3")


def zc(*terms):
    return MzvCombo(terms)


def test_g1_unrolled():
    x = var_vec(XY, "x")
    g1 = G(XY, [x], 3)
    assert g1.coefficient((1, 0)) == zc(((2,), 1))
    assert g1.coefficient((2, 0)) == zc(((3,), 1))
    assert g1.coefficient((3, 0)) == zc(((4,), 1))
    assert g1.coefficient((0, 0)) == MzvCombo.zero()
    assert g1.coefficient((4, 0)) == MzvCombo.zero()  # beyond cutoff


def test_g2_coefficient():
    g2 = G(X3, [var_vec(X3, "x1"), var_vec(X3, "x2")], 3)
    assert g2.coefficient((1, 1, 0)) == zc(((2, 2), 1))
    assert g2.coefficient((1, 0, 0)) == zc(((2, 1), 1))


def test_pattern_with_const_slot():
    x1, x2 = var_vec(X3, "x1"), var_vec(X3, "x2")
    s = pattern_series(X3, [VarSlot(x1, 2), ConstSlot(1), VarSlot(x2, 1)], 2)
    assert s.coefficient((1, 0, 0)) == zc(((2, 1, 1), 1))
    assert s.coefficient((1, 1, 0)) == zc(((2, 1, 2), 1))
    assert s.coefficient((2, 0, 0)) == zc(((3, 1, 1), 1))


def test_pattern_rejects_divergent_leading_slot():
    x = var_vec(XY, "x")
    with pytest.raises(DomainError):
        pattern_series(XY, [VarSlot(x, 1)], 3)
    with pytest.raises(DomainError):
        pattern_series(XY, [ConstSlot(1), VarSlot(x, 1)], 3)


def test_substitute_linear_binomial():
    x = var_vec(XY, "x")
    g1 = G(XY, [x], 4)
    sub = g1.substitute_linear({"x": lin(XY, "x", "y")})
    # zeta(3) x^2 -> zeta(3)(x+y)^2: coefficient of xy is 2 zeta(3)
    assert sub.coefficient((1, 1)) == zc(((3,), 2))
    assert sub.coefficient((2, 0)) == zc(((3,), 1))
    assert g1.substitute_linear({}) == g1
    killed = g1.substitute_linear({"x": lin(XY)})
    assert killed.monomials() == []


def test_differentiate():
    x = var_vec(XY, "x")
    g1 = G(XY, [x], 4)
    d = g1.differentiate("x")
    # coefficient of x^0 is zeta(2)
    assert d.coefficient((0, 0)) == zc(((2,), 1))
    assert d.coefficient((1, 0)) == zc(((3,), 2))
    assert constant_series(XY, zc(((5,), 1)), 4).differentiate("x").monomials() == []
    xg1y = G(XY, [var_vec(XY, "y")], 4).mul_form(x)
    assert xg1y.differentiate("x") == G(XY, [var_vec(XY, "y")], 4)


def test_divided_difference_of_g1():
    dd = divided_difference(XY, [VarSlot(var_vec(XY, "x"), 2)], "x", "y", 4)
    for a in range(4):
        for b in range(4 - a):
            assert dd.coefficient((a, b)) == zc(((a + b + 2,), 1))
    # symmetric in x, y
    assert dd.coefficient((2, 1)) == dd.coefficient((1, 2))
    # the m=1 stratum alone gives the constant 1-coefficient zeta(2)
    assert dd.coefficient((0, 0)) == zc(((2,), 1))


def test_divide_by_var_and_floor():
    x2 = var_vec(X3, "x2")
    g2 = G(X3, [var_vec(X3, "x1"), x2], 4)
    shifted = g2.divide_by_var("x2")
    assert shifted.coefficient((1, -1, 0)) == zc(((2, 1), 1))
    twice = shifted.divide_by_var("x2")
    assert twice.coefficient((1, -2, 0)) == zc(((2, 1), 1))
    with pytest.raises(DomainError):
        twice.divide_by_var("x2")
    xg = G(XY, [var_vec(XY, "y")], 4).mul_form(var_vec(XY, "x"))
    assert xg.divide_by_var("x") == G(XY, [var_vec(XY, "y")], 4)


def test_homogeneous_part_and_specialize():
    x = var_vec(XY, "x")
    g1 = G(XY, [x], 4)
    slice2 = g1.homogeneous_part(2)
    assert slice2.monomials() == [(2, 0)]
    assert slice2.coefficient((2, 0)) == zc(((3,), 1))
    assert slice2.specialize({"x": 1, "y": 0}) == zc(((3,), 1))
    assert slice2.specialize({"x": 0, "y": 1}) == MzvCombo.zero()
    with pytest.raises(DomainError):
        g1.homogeneous_part(9)
    with pytest.raises(DomainError):
        slice2.specialize({"x": 1})
    # linearity of slices
    g2 = G(XY, [x, var_vec(XY, "y")], 4)
    total = g1 + g2
    n = 3
    assert total.homogeneous_part(n) == g1.homogeneous_part(n) + g2.homogeneous_part(n)


def test_slice_of_substituted_g2():
    xy = lin(XY, "x", "y")
    g2 = G(XY, [xy, var_vec(XY, "x")], 3)
    s1 = g2.homogeneous_part(1)
    assert s1.coefficient((1, 0)) == zc(((2, 1), 1))
    assert s1.coefficient((0, 1)) == zc(((2, 1), 1))


def test_symmetrize():
    x = var_vec(XY, "x")
    one_var = symmetrize(
        lambda m: G(XY, [var_vec(XY, m["x"])], 3), SymmetrySpec("sym", ("x",))
    )
    assert one_var == G(XY, [x], 3)

    both = symmetrize(
        lambda m: G(XY, [var_vec(XY, m["x"]), var_vec(XY, m["y"])], 3),
        SymmetrySpec("sym", ("x", "y")),
    )
    g2 = G(XY, [x, var_vec(XY, "y")], 3)
    g2r = G(XY, [var_vec(XY, "y"), x], 3)
    assert both == g2 + g2r

    cyc = symmetrize(
        lambda m: constant_series(X3, MzvCombo.constant(1), 2).mul_form(
            var_vec(X3, m["x1"])
        ),
        SymmetrySpec("cyc", ("x1", "x2", "x3")),
    )
    assert sorted(cyc.monomials()) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_series_mul_scalar_rule():
    x = var_vec(XY, "x")
    g1 = G(XY, [x], 4)
    two = constant_series(XY, MzvCombo.constant(2), 6)
    assert g1.mul(two) == g1.scale(2)
    with pytest.raises(DomainError):
        g1.mul(g1)


def test_vec_canonical_and_zero_rejection():
    a = vec_sub(var_vec(X3, "x3"), var_vec(X3, "x2"))
    s, canon = vec_canonical(a)
    assert s == -1 and canon == vec_sub(var_vec(X3, "x2"), var_vec(X3, "x3"))
    with pytest.raises(DomainError):
        vec_canonical(lin(X3))


def test_clear_atoms_reconstructs_a_quotient():
    # [G1(x) - G1(y)] / (x - y) cleared by (x - y) must equal the exact
    # divided difference multiplied by (x - y)
    x, y = var_vec(XY, "x"), var_vec(XY, "y")
    atoms = [
        Atom(Fraction(1), lambda cap: G(XY, [x], cap), (vec_sub(x, y),)),
        Atom(Fraction(-1), lambda cap: G(XY, [y], cap), (vec_sub(x, y),)),
    ]
    cleared, V = clear_atoms(XY, atoms, 4)
    assert V == (vec_sub(x, y),)
    dd = divided_difference(XY, [VarSlot(x, 2)], "x", "y", 4)
    assert cleared == dd.mul_form(vec_sub(x, y))


def test_clear_atoms_sign_normalization():
    # 1/(y - x) == -1/(x - y): both readings must clear identically
    x, y = var_vec(XY, "x"), var_vec(XY, "y")
    a1 = [Atom(Fraction(1), lambda cap: G(XY, [x], cap), (vec_sub(x, y),))]
    a2 = [Atom(Fraction(-1), lambda cap: G(XY, [x], cap), (vec_sub(y, x),))]
    c1, _ = clear_atoms(XY, a1, 3)
    c2, _ = clear_atoms(XY, a2, 3)
    assert c1 == c2


def test_assemble_atoms_direct():
    x1, x2 = var_vec(X3, "x1"), var_vec(X3, "x2")
    atoms = [
        Atom(Fraction(1), lambda cap: G(X3, [x1, x2], cap), (x2,)),
        Atom(Fraction(-1), lambda cap: G(X3, [x1, x2], cap), (x2,)),
    ]
    assert assemble_atoms(X3, atoms, 4).monomials() == []
    with pytest.raises(DomainError):
        assemble_atoms(X3, [Atom(Fraction(1), lambda cap: G(X3, [x1], cap), (vec_sub(x1, x2),))], 3)


def test_monomial_str():
    assert monomial_str(X3, (2, 1, 0)) == "x1^2*x2"
    assert monomial_str(X3, (0, 0, 0)) == "1"
    assert monomial_str(X3, (-1, 0, 3)) == "x1^-1*x3^3"
