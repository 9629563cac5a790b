"""Coset families, set differences, cores, and compliance verdicts."""

import pytest

from vdiam import (
    BasisFamily,
    Coset,
    UnsupportedFamilyShape,
    check_compliant,
    cm_generators,
    family_difference,
    family_for,
    find_core,
    load_variety,
    parse_family,
    parse_polynomial,
    torus_quadrature,
)

HYP, HYP_EXTRAS = load_variety("hyperbola")
CONE, CONE_EXTRAS = load_variety("cone2d")
CONE_GENS = cm_generators(CONE, v_polys=CONE_EXTRAS["v_polys"])


def P(text, pres=HYP):
    return parse_polynomial(text, pres.M, pres.N)


def mult_strs(cosets):
    return {str(c.multiplier) for c in cosets}


# ---------------------------------------------------------------------------
# cores of the plain families


def test_monomial_family_core():
    fam = family_for(HYP, "monomial")
    assert mult_strs(fam.cosets) == {"1", "y1"}
    core = find_core(fam)
    assert core.found
    assert core.t == 0
    assert core.variables == frozenset({0})


def test_cm_family_core():
    fam = family_for(HYP, "cm")
    core = find_core(fam)
    assert core.found
    assert core.t == 1
    # the degree-0 leftovers are finite, not a coset (no free x-prefix in M=1)
    assert [str(f) for f in fam.finite] == ["1"]
    assert len(fam.cosets) == 2
    assert all(c.variables == frozenset({0}) for c in fam.cosets)


def test_cone_cm_family_has_no_core():
    # the low block runs over x1 only while the v-cosets run over both x's
    fam = family_for(CONE, "cm", gens=CONE_GENS)
    var_sets = {c.variables for c in fam.cosets}
    assert frozenset({0}) in var_sets and frozenset({0, 1}) in var_sets
    core = find_core(fam)
    assert not core.found
    assert "different variable sets" in core.reason


# ---------------------------------------------------------------------------
# compliance of monomial vs cm


def test_hyperbola_monomial_cm_compliant():
    left = family_for(HYP, "monomial")
    right = family_for(HYP, "cm")
    verdict = check_compliant(left, right)
    assert verdict.compliant
    assert mult_strs(verdict.diff_left.cosets) == {"x1", "y1"}
    assert verdict.diff_left.finite == ()
    v1, v2 = cm_generators(HYP).vs
    assert {str(c.multiplier) for c in verdict.diff_right.cosets} == {str(v1), str(v2)}
    assert verdict.diff_right.finite == ()
    assert verdict.core_left.t == 1
    assert verdict.core_right.t == 1


def test_cone_monomial_cm_compliant():
    left = family_for(CONE, "monomial")
    right = family_for(CONE, "cm", gens=CONE_GENS)
    verdict = check_compliant(left, right)
    assert verdict.compliant
    # what the monomials have that cm lacks: x2 times everything, y times everything
    assert mult_strs(verdict.diff_left.cosets) == {"x2", "y1"}
    assert all(c.variables == frozenset({0, 1}) for c in verdict.diff_left.cosets)
    assert len(verdict.diff_right.cosets) == 2  # the two sheet polynomials


def test_bb_vs_monomial_compliant():
    quad = torus_quadrature(HYP, 256)
    left = family_for(HYP, "monomial")
    right = family_for(HYP, "bb", quad=quad)
    verdict = check_compliant(left, right)
    assert verdict.compliant


# ---------------------------------------------------------------------------
# scaled families


def test_bundled_scaled_family_not_compliant():
    scaled = parse_family(HYP, HYP_EXTRAS["families"]["scaled2"], label="scaled2")
    assert all(c.is_scaled() for c in scaled.cosets)
    verdict = check_compliant(family_for(HYP, "monomial"), scaled)
    assert not verdict.compliant
    assert "scal" in verdict.reason


def test_scaled_difference_keeps_scaled_cosets():
    scaled = parse_family(HYP, HYP_EXTRAS["families"]["scaled2"], label="scaled2")
    mono = family_for(HYP, "monomial")
    diff = family_difference(scaled, mono)
    assert any(c.is_scaled() for c in diff.cosets)
    assert not find_core(diff).found
    # the unscaled side sheds the shared degree-0 element but keeps a core
    back = family_difference(mono, scaled)
    assert find_core(back).found


def test_three_halves_scaling_not_compliant():
    doc = {
        "cosets": [
            {"multiplier": "1", "variables": ["x1"], "scales": {"x1": "3/2"}},
            {"multiplier": "y1", "variables": ["x1"], "scales": {"x1": "3/2"}},
        ],
        "finite": [],
    }
    scaled = parse_family(HYP, doc, label="r-scaled")
    verdict = check_compliant(family_for(HYP, "monomial"), scaled)
    assert not verdict.compliant


def test_unit_modulus_scaling_is_refused():
    doc = {
        "cosets": [{"multiplier": "1", "variables": ["x1"], "scales": {"x1": "-1"}}],
        "finite": [],
    }
    flipped = parse_family(HYP, doc, label="sign-flipped")
    with pytest.raises(UnsupportedFamilyShape):
        family_difference(flipped, family_for(HYP, "monomial"))


# ---------------------------------------------------------------------------
# difference mechanics


def test_identical_families_cancel():
    fam = family_for(HYP, "monomial")
    diff = family_difference(fam, fam)
    assert diff.is_empty()


def test_finite_elements_absorbed_by_cosets():
    cm = family_for(HYP, "cm")
    mono = family_for(HYP, "monomial")
    diff = family_difference(cm, mono)
    assert diff.finite == ()  # the lone constant lies inside the 1-coset


def test_staircase_removes_low_corner():
    # {x^n} minus the single point {1} leaves the shifted coset x*{x^n}
    x_coset = Coset(P("1"), frozenset({0}))
    fam = BasisFamily((x_coset,), (), label="all-powers")
    pt = BasisFamily((), (P("1"),), label="origin")
    diff = family_difference(fam, pt)
    assert mult_strs(diff.cosets) == {"x1"}


def test_core_of_empty_family_is_wildcard():
    fam = BasisFamily((), (P("1"), P("x1")), label="just-points")
    core = find_core(fam)
    assert core.found
    assert core.variables is None  # nothing constrains the variable set
    assert core.t == 2  # one past the largest finite degree


def test_coset_describe_smoke():
    c = Coset(P("y1"), frozenset({0}))
    assert "y1" in c.describe()


def test_parse_family_rejects_bad_variable():
    with pytest.raises(ValueError):
        parse_family(HYP, {"cosets": [{"multiplier": "1", "variables": ["x9"]}]}, "bad")
