import pytest

from bnd.engine import (
    ambient_stability,
    bnd_affine,
    bnd_of_profile,
    bnd_projective,
    bnd_variety,
    compute_B,
    conormal_class_coeffs,
    ed_degree,
    epsilon_oracle,
    epsilon_terms,
    formula_context,
)
from bnd.profiles import PolarProfile, VarietySpec, ci_profile, polar_degrees
from bnd.ring import parse


def plane_curve(d):
    return ci_profile(VarietySpec(2, (d,)))


def surface(d):
    return ci_profile(VarietySpec(3, (d,)))


# -- the universal polynomials ----------------------------------------------


def test_compute_b_known_formulas():
    assert compute_B(1, 3).text == "2*h + 5*p1"
    assert compute_B(2, 5).text == "3*h^2 + 6*h*p1 + 12*p1^2 + p2"
    assert compute_B(1, 2).text == "h + 4*p1"


def test_compute_b_threefold():
    expected = parse(
        formula_context(3),
        "4*h^3 + 11*h^2*p1 + 4*h*p1^2 + 24*p1^3 + 2*h*p2 - 12*p1*p2 + 17*p3",
    )
    assert compute_B(3, 7).poly == expected


def test_compute_b_validates_dimensions():
    with pytest.raises(ValueError):
        compute_B(2, 2)
    with pytest.raises(ValueError):
        compute_B(0, 3)


def test_compute_b_output_shape():
    for m, n in [(1, 2), (1, 5), (2, 4), (2, 6), (3, 5), (3, 8)]:
        f = compute_B(m, n)
        assert f.poly.is_homogeneous(m)
        assert all(c.denominator == 1 for c in f.poly.terms.values())


# -- epsilon vectors ---------------------------------------------------------


def test_epsilon_terms_examples():
    assert epsilon_terms(1, 3, (6, 18)).values == (24, 6)
    for d in range(2, 8):
        assert epsilon_terms(1, 2, (d, d * d - d)).values == (d * d,)
    # quadric surface native ambient: both routes below agree on (6, 2)
    assert epsilon_terms(2, 3, (2, 2, 2)).values == (6, 2)
    assert epsilon_terms(2, 5, (2, 2, 2)).values == (6, 4, 2)


def test_epsilon_terms_validation():
    with pytest.raises(ValueError):
        epsilon_terms(2, 3, (2, 2))
    with pytest.raises(ValueError):
        epsilon_terms(2, 2, (2, 2, 2))


def test_epsilon_oracle_matches_combinatorial_formula():
    cases = []
    for d in range(2, 7):
        cases += [(1, n, plane_curve(d)) for n in (2, 3, 4, 5)]
        cases += [(2, n, surface(d)) for n in (3, 4, 5, 6)]
    for d1 in (2, 3):
        for d2 in (2, 3, 4):
            cases.append((1, 3, ci_profile(VarietySpec(3, (d1, d2)))))
    for m, n, profile in cases:
        assert (
            epsilon_oracle(m, n, profile).values
            == epsilon_terms(m, n, polar_degrees(profile)).values
        )


def test_epsilon_oracle_examples():
    assert epsilon_oracle(1, 2, plane_curve(3)).values == (9,)
    assert epsilon_oracle(1, 3, ci_profile(VarietySpec(3, (2, 3)))).values == (24, 6)
    assert epsilon_oracle(2, 3, surface(2)).values == (6, 2)


def test_epsilon_oracle_validates_profile():
    with pytest.raises(ValueError):
        epsilon_oracle(2, 5, plane_curve(3))


def test_ed_degree_is_polar_sum():
    assert ed_degree(plane_curve(3)) == 9  # classical: d^2 for a plane curve
    assert ed_degree(surface(2)) == 6


def test_conormal_class_coeffs_reversed_polar():
    for d in range(2, 6):
        assert conormal_class_coeffs(plane_curve(d)) == [d * d - d, d]
    assert conormal_class_coeffs(surface(2)) == [2, 2, 2]
    assert len(conormal_class_coeffs(ci_profile(VarietySpec(5, (2, 2))))) == 4


# -- bottleneck degrees ------------------------------------------------------


def test_bnd_projective_examples():
    assert bnd_projective(compute_B(1, 3), plane_curve(2)) == 2 ** 4 - 4 * 4 + 6
    assert bnd_projective(compute_B(1, 3), ci_profile(VarietySpec(3, (2, 3)))) == 510
    assert bnd_projective(compute_B(2, 5), surface(2)) == 12


def test_bnd_is_independent_of_formula_ambient():
    # the count is geometric; any valid (m, n) formula paired with its own
    # epsilon combinatorics must give the same answer
    for d in (2, 3, 4):
        values = {bnd_projective(compute_B(2, n), surface(d)) for n in (3, 4, 5, 6, 8)}
        assert len(values) == 1
        values = {bnd_projective(compute_B(1, n), plane_curve(d)) for n in (2, 3, 5, 9)}
        assert len(values) == 1


def test_bnd_projective_dimension_mismatch():
    with pytest.raises(ValueError):
        bnd_projective(compute_B(2, 5), plane_curve(3))


def test_bnd_plane_curves_closed_form():
    for d in range(2, 13):
        spec = VarietySpec(2, (d,))
        assert bnd_variety(spec) == d ** 4 - 4 * d ** 2 + 3 * d
        assert bnd_variety(VarietySpec(2, (d,), affine=True)) == d ** 4 - 5 * d ** 2 + 4 * d


def test_bnd_affine_anchors():
    assert bnd_affine(VarietySpec(2, (2,), affine=True)) == 4
    assert bnd_affine(VarietySpec(2, (4,), affine=True)) == 192
    assert bnd_affine(VarietySpec(3, (2, 3), affine=True)) == 480
    assert bnd_affine(VarietySpec(3, (2,), affine=True)) == 6
    assert bnd_affine(VarietySpec(3, (4,), affine=True)) == 2220


def test_bnd_surfaces_closed_form():
    for d in range(2, 9):
        expected = (
            d ** 6 - 2 * d ** 5 + 3 * d ** 4 - 15 * d ** 3 + 26 * d ** 2 - 13 * d
        )
        assert bnd_variety(VarietySpec(3, (d,), affine=True)) == expected


def test_bnd_ci_curves_closed_form():
    for d1 in range(2, 6):
        for d2 in range(2, 6):
            d, s = d1 * d2, d1 + d2
            expected = d * d * (s - 1) ** 2 - 5 * d * s + 9 * d
            assert bnd_variety(VarietySpec(3, (d1, d2), affine=True)) == expected


def test_bnd_zero_dimensional_pairs():
    assert bnd_variety(VarietySpec(2, (2, 3))) == 30  # 6 points, ordered pairs
    assert bnd_of_profile(ci_profile(VarietySpec(2, (2, 3)))) == 30


def test_bnd_nonnegative_on_profile_family():
    for n, degs in [(2, (2,)), (2, (5,)), (3, (2,)), (3, (3, 3)), (4, (2, 2)), (5, (2,))]:
        assert bnd_variety(VarietySpec(n, degs)) >= 0
        assert bnd_variety(VarietySpec(n, degs, affine=True)) >= 0


# -- ambient stability -------------------------------------------------------


def test_plane_case_is_special():
    rep = ambient_stability(1, [2, 3])
    assert not rep.identical
    assert rep.formulas[0].text == "h + 4*p1"
    assert rep.formulas[1].text == "2*h + 5*p1"


def test_curve_formula_stable_from_three():
    rep = ambient_stability(1, range(3, 10))
    assert rep.identical
    assert rep.stable_from == 3


def test_stability_reports_without_assuming():
    # below the saturation threshold n = 2m+1 the polynomial genuinely
    # changes; the report must say so rather than paper over it
    rep = ambient_stability(2, range(4, 9))
    assert not rep.identical
    assert rep.stable_from == 5
    rep = ambient_stability(3, range(5, 9))
    assert not rep.identical
    assert rep.stable_from == 7


def test_stability_validates_range():
    with pytest.raises(ValueError):
        ambient_stability(2, [])
    with pytest.raises(ValueError):
        ambient_stability(2, [2, 3])
