import random
from fractions import Fraction

import pytest

from nuchi.errors import NonIsolatedCriticalPoint, NotCriticalPoint, PointNotOnVariety, Unsupported
from nuchi.groebner import Ideal, Infinite
from nuchi.poly import Polynomial, Ring
from nuchi.singular import (
    NOT_CRITICAL,
    OneForm,
    behrend_at,
    behrend_report,
    differential,
    is_almost_closed,
    is_smooth_at,
    jacobian_ideal,
    milnor_fibre_euler,
    milnor_number,
)

R1 = Ring(("x",))
R2 = Ring(("x", "y"))
R3 = Ring(("x", "y", "z"))
R4 = Ring(("x1", "x2", "x3", "x4"))

ORIGIN2 = (0, 0)


def a_k(ring, k):
    """The curve singularity x^(k+1) + y^2 with Milnor number k."""
    return ring.parse(f"x^{k + 1} + y^2")


# ------------------------------------------------------------ Jacobian ideals

def test_jacobian_examples():
    gens = jacobian_ideal(R2.parse("x^3 + y^3")).generators
    assert [str(g) for g in gens] == ["3*x^2", "3*y^2"]
    assert [str(g) for g in jacobian_ideal(R2.parse("x*y")).generators] == ["y", "x"]
    assert jacobian_ideal(R2.parse("5")).generators == ()


# ---------------------------------------------------------------- smoothness

def test_smoothness_examples():
    check = is_smooth_at(Ideal.from_strings(R2, ["y - x^2"]), ORIGIN2)
    assert check.smooth and check.local_dim == 1
    assert not is_smooth_at(Ideal.from_strings(R2, ["x*y"]), ORIGIN2).smooth
    check0 = is_smooth_at(Ideal.from_strings(R2, ["x", "y"]), ORIGIN2)
    assert check0.smooth and check0.local_dim == 0


def test_smoothness_point_must_lie_on_variety():
    with pytest.raises(PointNotOnVariety):
        is_smooth_at(Ideal.from_strings(R2, ["y - x^2"]), (1, 0))


# ------------------------------------------------------------- Milnor numbers

def test_milnor_examples():
    assert milnor_number(R2.parse("x^2 + y^2"), ORIGIN2) == 1
    assert milnor_number(R1.parse("x^3"), (0,)) == 2
    assert milnor_number(R2.parse("x^3 + y^3"), ORIGIN2) == 4


def test_milnor_not_critical():
    assert milnor_number(R1.parse("x^3"), (5,)) is NOT_CRITICAL


def test_milnor_non_isolated():
    assert isinstance(milnor_number(R2.parse("x^2"), ORIGIN2), Infinite)


def test_milnor_away_from_origin():
    # critical point of (x-1)^2 + (y+2)^2 at (1, -2)
    f = R2.parse("(x - 1)^2 + (y + 2)^2")
    assert milnor_number(f, (1, -2)) == 1


@pytest.mark.parametrize("k", range(1, 9))
def test_milnor_a_k_family(k):
    assert milnor_number(a_k(R2, k), ORIGIN2) == k


# ------------------------------------------------------- Milnor fibre formula

def test_milnor_fibre_euler_examples():
    assert milnor_fibre_euler(R2.parse("x^2 + y^2"), ORIGIN2) == 0  # circle
    assert milnor_fibre_euler(R3.parse("x^2 + y^2 + z^2"), (0, 0, 0)) == 2  # sphere
    assert milnor_fibre_euler(R1.parse("x^3"), (0,)) == 3  # three points


def test_milnor_fibre_errors():
    with pytest.raises(NotCriticalPoint):
        milnor_fibre_euler(R1.parse("x^3"), (5,))
    with pytest.raises(NonIsolatedCriticalPoint):
        milnor_fibre_euler(R2.parse("x^2") * R2.parse("x"), ORIGIN2)


# ------------------------------------------------------------------------ nu

def test_nu_nondegenerate_both_branches_agree():
    f = R2.parse("x^2 + y^2")
    report = behrend_report(f, ORIGIN2)
    assert report.nu == 1 and report.route == "milnor"
    # same scheme presented as an ideal is smooth of dimension 0
    smooth = behrend_report(Ideal.from_strings(R2, ["x", "y"]), ORIGIN2)
    assert smooth.nu == 1 and smooth.route == "smooth"


def test_nu_fat_point():
    report = behrend_report(R1.parse("x^3"), (0,))
    assert report.nu == 2 and report.mu == 2


def test_nu_smooth_curve_is_minus_one():
    assert behrend_at(Ideal.from_strings(R2, ["y - x^2"]), (1, 1)) == -1


def test_nu_point_must_be_on_critical_locus():
    with pytest.raises(PointNotOnVariety):
        behrend_at(R1.parse("x^3"), (5,))


def test_nu_refuses_non_isolated_non_smooth():
    # f = x^2*y^2: critical locus is the two axes, singular at the origin
    with pytest.raises(Unsupported):
        behrend_at(R2.parse("x^2*y^2"), ORIGIN2)


def test_nu_ideal_presentation_refuses_singular_points():
    with pytest.raises(Unsupported):
        behrend_at(Ideal.from_strings(R2, ["x*y"]), ORIGIN2)


@pytest.mark.parametrize("k", range(1, 9))
def test_nu_equals_mu_on_a_k(k):
    f = a_k(R2, k)
    assert behrend_at(f, ORIGIN2) == milnor_number(f, ORIGIN2) == k


def test_nu_equals_mu_on_x3_plus_y3():
    f = R2.parse("x^3 + y^3")
    assert behrend_at(f, ORIGIN2) == milnor_number(f, ORIGIN2) == 4


def test_nu_multiplicative_on_disjoint_sums():
    # f(x1,x2) + g(x3,x4) in disjoint variables: nu multiplies
    for k, l in [(1, 1), (2, 3), (3, 2), (4, 5)]:
        f4 = R4.parse(f"x1^{k + 1} + x2^2 + x3^{l + 1} + x4^2")
        nu_product = behrend_at(a_k(R2, k), ORIGIN2) * behrend_at(a_k(R2, l), ORIGIN2)
        assert behrend_at(f4, (0, 0, 0, 0)) == nu_product == k * l


def _random_smooth_chart(rng, arity, codim):
    """A graph-style complete intersection through a random rational point.

    x_{free+j} = g_j(x_free) is globally smooth of dimension arity - codim.
    """
    ring = Ring(tuple(f"x{i + 1}" for i in range(arity)))
    free = arity - codim
    point = tuple(Fraction(rng.randint(-3, 3)) for _ in range(arity))
    gens = []
    for j in range(codim):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            mono = [0] * arity
            for i in range(free):
                mono[i] = rng.randint(0, 2)
            coeff = rng.randint(-4, 4)
            if coeff:
                terms[tuple(mono)] = terms.get(tuple(mono), 0) + coeff
        g = Polynomial(ring, terms)
        graph = ring.variable(free + j) - g
        # translate so the chosen point lies on the graph
        offset = graph.evaluate(point)
        gens.append(graph - ring.constant(offset))
    return Ideal(ring, gens), point, arity - codim


def test_smooth_point_rule_randomized():
    rng = random.Random(2024)
    for trial in range(20):
        arity = rng.randint(2, 4)
        codim = rng.randint(1, arity - 1)
        I, point, dim = _random_smooth_chart(rng, arity, codim)
        report = behrend_report(I, point)
        assert report.route == "smooth"
        assert report.nu == (-1) ** dim


# ------------------------------------------------------------- almost closed

def test_exact_forms_are_almost_closed():
    for f in [R2.parse("x^3 + y^3"), R2.parse("x*y"), R3.parse("x*y*z - z^2")]:
        assert is_almost_closed(differential(f)).almost_closed


def test_almost_closed_but_not_closed_example():
    omega = OneForm.from_strings(R2, ["y", "x - x*y"])
    check = is_almost_closed(omega)
    assert check.almost_closed
    # the antisymmetry defect of the only pair is y, a member of the ideal
    (pair, witness), = check.certificates
    assert pair == (0, 1) and witness == R2.parse("y")


def test_not_almost_closed_negative_control():
    check = is_almost_closed(OneForm.from_strings(R2, ["y", "0"]))
    assert not check.almost_closed
    assert check.failing_pair == (0, 1)
    assert check.failing_normal_form == R2.parse("1")
