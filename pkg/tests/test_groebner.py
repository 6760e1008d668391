import random

import pytest
from hypothesis import given, settings

from nuchi.errors import OriginNotOnVariety, RingMismatch
from nuchi.groebner import (
    DEGREVLEX,
    INFINITE,
    Ideal,
    Infinite,
    LOCAL_DEGREVLEX,
    colength,
    eliminate,
    groebner_basis,
    hs_multiplicity,
    ideal_membership,
    krull_dimension,
    normal_form,
    standard_basis,
)
from nuchi.poly import GF, LEX, Ring

from .oracles import (
    macaulay_colength_global,
    macaulay_colength_local,
    monomial_lattice_colength,
)
from .strategies import RING_XY, polynomials

R2 = Ring(("x", "y"))
R1 = Ring(("x",))


def ideal(*exprs, ring=R2):
    return Ideal.from_strings(ring, exprs)


def basis_strings(basis):
    return [str(g) for g in basis.elements]


# ------------------------------------------------------------ Groebner bases

def test_groebner_lex_example():
    assert basis_strings(groebner_basis(ideal("x - y^2", "y"), LEX)) == ["y", "x"]


def test_groebner_containment():
    assert basis_strings(groebner_basis(ideal("x^2", "x"))) == ["x"]


def test_groebner_zero_ideal():
    assert basis_strings(groebner_basis(Ideal(R2, []))) == []


def test_groebner_verify_buchberger_criterion():
    # post-hoc S-pair check on a few nontrivial bases
    for gens in [("x^2 + y", "x*y - 1"), ("x^3 - 2*x*y", "x^2*y - 2*y^2 + x")]:
        groebner_basis(ideal(*gens), DEGREVLEX, verify=True)
        groebner_basis(ideal(*gens), LEX, verify=True)


def test_reduced_basis_unique_under_representation_change():
    # sequential elementary operations g_i += c * mono * g_j preserve the
    # ideal; the reduced basis must not notice
    rng = random.Random(7)
    gens = [R2.parse(e) for e in ("x^2 + y^2 - 1", "x*y - 2", "x^3 - y")]
    reference = groebner_basis(Ideal(R2, gens)).elements
    for _ in range(10):
        new_gens = list(gens)
        for _ in range(rng.randint(2, 5)):
            i, j = rng.sample(range(len(new_gens)), 2)
            scale = rng.choice([-3, -2, -1, 1, 2, 3])
            mono = R2.parse(rng.choice(["1", "x", "y", "x*y"]))
            new_gens[i] = new_gens[i] + scale * mono * new_gens[j]
        assert groebner_basis(Ideal(R2, new_gens)).elements == reference


# ------------------------------------------------------------ standard bases

def test_standard_basis_unit_absorption():
    assert basis_strings(standard_basis(ideal("x + x^2"), verify=True)) == ["x"]


def test_standard_basis_unit_factor():
    assert basis_strings(standard_basis(ideal("x^2 - x^3"))) == ["x^2"]


def test_standard_basis_monic_monomials():
    assert basis_strings(standard_basis(ideal("3*x^2", "3*y^2"))) == ["y^2", "x^2"]


def test_standard_basis_keeps_mixed_element():
    # (x + y^2) is not a monomial times a unit; it must survive (printed in
    # canonical descending-degrevlex term order)
    assert basis_strings(standard_basis(ideal("x + y^2"))) == ["y^2 + x"]


# -------------------------------------------------------------- normal forms

def test_normal_form_examples():
    B = groebner_basis(ideal("x"))
    assert normal_form(R2.parse("x^2"), B).is_zero()
    assert normal_form(R2.parse("y"), B) == R2.parse("y")
    B2 = groebner_basis(ideal("x^2"))
    assert normal_form(R2.parse("x^2*y + y"), B2) == R2.parse("y")


def test_normal_form_ring_mismatch():
    B = groebner_basis(ideal("x"))
    with pytest.raises(RingMismatch):
        normal_form(R1.parse("x"), B)


@settings(max_examples=60)
@given(f=polynomials(RING_XY, max_terms=4))
def test_normal_form_idempotent_global(f):
    B = groebner_basis(ideal("x^2 - y", "y^2 - 1"))
    r = normal_form(f, B)
    assert normal_form(r, B) == r
    # f - nf(f) is in the ideal
    assert ideal_membership(f - r, ideal("x^2 - y", "y^2 - 1"))


@settings(max_examples=40)
@given(f=polynomials(RING_XY, max_terms=4))
def test_normal_form_idempotent_local(f):
    B = standard_basis(ideal("x^2 + x^3", "y^3"))
    r = normal_form(f, B)
    assert normal_form(r, B) == r


# --------------------------------------------------------------- membership

def test_membership_generator():
    assert ideal_membership(R2.parse("y"), ideal("y", "x - x*y"))


def test_membership_unit_not_in_proper_ideal():
    assert not ideal_membership(R2.parse("1"), ideal("x", "y"))


def test_membership_certificate():
    I = ideal("y", "x - x*y")
    member, cofactors = ideal_membership(R2.parse("x"), I, certificate=True)
    assert member
    total = R2.zero()
    for c, g in zip(cofactors, I.generators):
        total = total + c * g
    assert total == R2.parse("x")


def test_membership_certificate_absent_for_nonmember():
    member, cofactors = ideal_membership(R2.parse("1"), ideal("x", "y"), certificate=True)
    assert not member and cofactors is None


# -------------------------------------------------------------- elimination

def test_eliminate_substitution():
    r3 = Ring(("t", "x", "y"))
    E = eliminate(Ideal.from_strings(r3, ["t*x - 1", "y - t"]), {0})
    assert [str(g) for g in E.generators] == ["x*y - 1"]


def test_eliminate_graph_is_trivial():
    r3 = Ring(("t", "x", "y"))
    E = eliminate(Ideal.from_strings(r3, ["y - t*x"]), {0})
    assert E.generators == ()


def test_eliminate_nothing_gives_same_ideal():
    I = ideal("x^2 - y", "y^2")
    E = eliminate(I, set())
    assert set(E.generators) == set(groebner_basis(I).elements)


def test_eliminate_output_members_of_source():
    r3 = Ring(("t", "x", "y"))
    I = Ideal.from_strings(r3, ["t^2 - x", "t^3 - y"])
    E = eliminate(I, {0})
    assert E.generators  # the twisted cubic has nontrivial eliminant
    for g in E.generators:
        member, cofactors = ideal_membership(g, I, certificate=True)
        assert member
        total = r3.zero()
        for c, gen in zip(cofactors, I.generators):
            total = total + c * gen
        assert total == g


# ------------------------------------------------------------------ colength

def test_colength_examples():
    assert colength(ideal("x", "y")) == 1
    assert colength(ideal("x^2", "y^2")) == 4
    assert colength(ideal("x")) == INFINITE


def test_colength_local_vs_global():
    # (x^2 - x^3) has colength 2 at the origin but 3 globally (extra point at 1)
    I = ideal("x^2 - x^3", "y")
    assert colength(I, LOCAL_DEGREVLEX) == 2
    assert colength(I, DEGREVLEX) == 3


def test_colength_bound_limited_flag():
    result = colength(ideal("x^70", "y"), degree_bound=10)
    assert isinstance(result, Infinite) and result.bound_limited


@pytest.mark.parametrize(
    "gens",
    [("x", "y"), ("x^2", "y^2"), ("x^3", "x*y", "y^2"), ("x^4", "y"), ("x^2", "x*y^3", "y^4")],
)
def test_colength_matches_lattice_oracle_on_monomial_ideals(gens):
    I = ideal(*gens)
    monos = [g.terms()[0][0] for g in I.generators]
    assert colength(I) == monomial_lattice_colength(monos, 2)


@pytest.mark.parametrize(
    "gens,arity",
    [
        (("x^2", "y^2"), 2),
        (("x^2 - y", "y^2"), 2),
        (("x^3 - y", "x*y - 1"), 2),
        (("x^2 - 1", "y - x"), 2),
        (("x^2", "y^2", "z^2"), 3),
    ],
)
def test_colength_matches_macaulay_oracle(gens, arity):
    ring = Ring(tuple("xyz"[:arity]))
    I = Ideal.from_strings(ring, gens)
    assert colength(I, DEGREVLEX) == macaulay_colength_global(I)


def test_local_colength_matches_macaulay_oracle():
    for gens in [
        ("x^2", "y^2"),
        ("x^2 - x^3", "y"),
        ("y^2 - x^3", "x^2*y"),
        ("x^2 + y^3", "x*y"),
        ("3*x^2 - y^2", "-2*x*y"),  # Jacobian of the D4 singularity
    ]:
        I = ideal(*gens)
        assert colength(I, LOCAL_DEGREVLEX) == macaulay_colength_local(I)


# ----------------------------------------------------------------- dimension

def test_krull_dimension_examples():
    assert krull_dimension(ideal("x")) == 1
    assert krull_dimension(ideal("x", "y")) == 0
    assert krull_dimension(Ideal(R2, [])) == 2
    assert krull_dimension(ideal("x", "x - 1")) == -1  # unit ideal


# -------------------------------------------------------------- multiplicity

def test_hs_multiplicity_examples():
    assert hs_multiplicity(ideal("y^2 - x^3")) == 2
    assert hs_multiplicity(ideal("y - x^2")) == 1
    assert hs_multiplicity(ideal("x*y")) == 2


def test_hs_multiplicity_requires_origin():
    with pytest.raises(OriginNotOnVariety):
        hs_multiplicity(ideal("x - 1"))


def test_hs_multiplicity_higher_cusp():
    # y^2 = x^5 has multiplicity 2; y^3 = x^5 has multiplicity 3
    assert hs_multiplicity(ideal("y^2 - x^5")) == 2
    assert hs_multiplicity(ideal("y^3 - x^5")) == 3


# ----------------------------------------------------- prime-field pre-check

def test_groebner_over_prime_field_advisory_mode():
    # the F_p engine is an advisory pre-check; its leading ideal matches the
    # rational computation here because no coefficient collapses mod 7
    ring_p = Ring(("x", "y"), GF(7))
    I_p = Ideal.from_strings(ring_p, ["x^2 - y", "y^2 - 1"])
    I_q = ideal("x^2 - y", "y^2 - 1")
    basis_p = groebner_basis(I_p, verify=True)
    basis_q = groebner_basis(I_q)
    assert [g.leading_term(DEGREVLEX)[0] for g in basis_p.elements] == [
        g.leading_term(DEGREVLEX)[0] for g in basis_q.elements
    ]
    assert colength(I_p) == colength(I_q) == 4


def test_colength_unit_ideal_is_zero():
    assert colength(ideal("x", "x - 1")) == 0
