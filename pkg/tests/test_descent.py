"""Descent, quotient presentations, Koszul complexes, and purity."""

import random
from fractions import Fraction

import pytest

from hlmod.exact import Matrix, kernel_basis, echelon_basis
from hlmod.hodge_lefschetz import (
    BasisVector,
    GradedSpace,
    HLModule,
    OperatorFamily,
    PolarizationForm,
    PreconditionError,
    cone_membership,
    lefschetz_property,
    polarization_check,
    sample_cone_element,
    sample_cone_tuple,
    validate_structure,
)
from hlmod.descent import (
    descent,
    koszul_complex,
    purity_check,
    quotient_descent,
    repeated_descent,
)

F = Fraction


# ---------------------------------------------------------------------------
# descent
# ---------------------------------------------------------------------------


def test_square_descent_dims(sq_module):
    res = descent(sq_module, sq_module.reference)
    assert res.module.weight == 1
    assert res.module.space.grade_dims() == {-1: 1, 1: 1}


def test_cube_descent_dims_match_blockwise_ranks(c3_module):
    t = c3_module.reference_operator()
    res = descent(c3_module, c3_module.reference)
    gi = c3_module.space.grade_indices()
    dims = res.module.space.grade_dims()
    for level in range(-res.module.weight, res.module.weight + 1):
        src = gi.get(level + 1, [])
        if not src:
            assert dims.get(level, 0) == 0
            continue
        cols = [t.column(i) for i in src]
        assert dims.get(level, 0) == len(echelon_basis(cols)), level
    assert dims == {-2: 1, 0: 3, 2: 1}


def test_descent_output_passes_full_suite(corpus):
    for name, (_, _, module) in corpus.items():
        res = descent(module, module.reference)
        new = res.module
        assert validate_structure(new).passed, name
        if new.dim:
            assert lefschetz_property(new, new.reference), name
            assert polarization_check(new, new.reference).passed, name
            assert cone_membership(new, new.reference), name


def test_descent_with_zero_operator_gives_zero_module(sq_module):
    res = descent(sq_module, [0, 0, 0, 0])
    assert res.module.dim == 0


def test_descent_on_boundary_element(sq_module):
    # segment summand of the square: not Lefschetz itself, but T + l N0 is
    # for every positive l, so descent applies
    assert not lefschetz_property(sq_module, [1, 0, 0, 0])
    res = descent(sq_module, [1, 0, 0, 0])
    assert res.module.space.grade_dims() == {-1: 1, 1: 1}
    assert validate_structure(res.module).passed


def test_descent_interior_flag_rejects_boundary(sq_module):
    with pytest.raises(PreconditionError):
        descent(sq_module, [1, 0, 0, 0], interior=True)


def test_descent_premise_violation_rejected(sq_module):
    # the negated reference shifts outside the closure: T + l N0 stays
    # degenerate for small l
    with pytest.raises(PreconditionError):
        descent(sq_module, [-c for c in sq_module.reference])


def test_descent_projection_and_section(sq_module):
    res = descent(sq_module, sq_module.reference)
    t = sq_module.reference_operator()
    # projection of T . (section of each new basis vector) is that vector
    for j in range(res.module.dim):
        pre = res.section.column(j)
        image_coords = res.projection.apply(pre)
        expected = [F(1) if i == j else F(0) for i in range(res.module.dim)]
        assert image_coords == expected


def test_form_well_definedness_invariant(corpus):
    rng = random.Random(3)
    for name, (_, _, module) in corpus.items():
        t = module.operator(sample_cone_element(module, rng))
        kern, _ = kernel_basis(t)
        image = echelon_basis([t.column(j) for j in range(module.dim)])
        for u in kern:
            for w in image:
                assert module.form_value(u, w) == 0, name


# ---------------------------------------------------------------------------
# repeated and quotient descent
# ---------------------------------------------------------------------------


def test_repeated_matches_iterated(sq_module, c3_module):
    for module in (sq_module, c3_module):
        direct = repeated_descent(module, [module.reference] * 2)
        once = descent(module, module.reference)
        twice = descent(once.module, once.module.reference)
        assert (
            direct.module.space.grade_dims()
            == twice.module.space.grade_dims()
        )
        # the two presentations are related by an exact base change
        if direct.module.dim:
            change_cols = []
            for j in range(twice.module.dim):
                coords = direct.projection.apply(once.section.apply(
                    twice.section.column(j)
                ))
                change_cols.append(coords)
            change = Matrix.from_columns(change_cols, direct.module.dim)
            assert change.det() != 0
            transported = change.transpose() * direct.module.form.matrix * change
            assert transported == twice.module.form.matrix


def test_repeated_descent_length_zero_is_identity_presentation(sq_module):
    res = repeated_descent(sq_module, [])
    assert res.module.space.grade_dims() == sq_module.space.grade_dims()
    assert res.module.form.matrix == sq_module.form.matrix


def test_full_length_descent_is_positive_point(sq_module):
    res = repeated_descent(sq_module, [sq_module.reference] * sq_module.weight)
    assert res.module.weight == 0
    assert res.module.dim == 1
    value = res.module.form.matrix.data[0][0]
    assert value > 0


def test_quotient_descent_power_zero(sq_module):
    qd = quotient_descent(sq_module, sq_module.reference, 0)
    assert qd.module.space.grade_dims() == sq_module.space.grade_dims()
    assert qd.module.dim == sq_module.dim


def test_quotient_descent_square(sq_module):
    qd = quotient_descent(sq_module, sq_module.reference, 1)
    assert qd.module.dim == 2
    assert qd.module.space.grade_dims() == {-1: 1, 1: 1}
    assert qd.isomorphism.det() != 0
    iso = qd.isomorphism
    assert iso.transpose() * qd.image.module.form.matrix * iso == qd.module.form.matrix


def test_quotient_descent_cube_power_two(c3_module):
    qd = quotient_descent(c3_module, c3_module.reference, 2)
    assert qd.module.space.grade_dims() == qd.image.module.space.grade_dims()
    for g_q, g_i in zip(qd.module.family.matrices, qd.image.module.family.matrices):
        assert qd.isomorphism * g_q == g_i * qd.isomorphism


# ---------------------------------------------------------------------------
# Koszul complexes and purity
# ---------------------------------------------------------------------------


def test_koszul_single_operator(sq_module):
    kc = koszul_complex(sq_module, [sq_module.reference])
    assert kc.term_dim(0) == sq_module.dim
    t = sq_module.reference_operator()
    assert kc.term_dim(1) == len(
        echelon_basis([t.column(j) for j in range(sq_module.dim)])
    )
    rep = purity_check(kc)
    assert rep.passed
    # H^0 = ker T in weights <= 0 and H^1 = 0
    assert rep.data["h-dim[p=0]"] == 2
    assert rep.data["h-dim[p=1]"] == 0


def test_koszul_pair_on_square(sq_module):
    rng = random.Random(13)
    entries = [sq_module.reference, sample_cone_element(sq_module, rng)]
    kc = koszul_complex(sq_module, entries)
    assert kc.term_dim(0) == 4
    assert len(kc.terms[1]) == 2
    assert len(kc.terms[2]) == 1
    assert purity_check(kc).passed


def test_koszul_differential_signs_cancel(c3_module):
    rng = random.Random(19)
    entries = sample_cone_tuple(c3_module, rng, 3)
    kc = koszul_complex(c3_module, entries)
    for p in range(len(kc.differentials) - 1):
        assert (kc.differentials[p + 1] * kc.differentials[p]).is_zero()


def test_purity_on_zero_operator_module():
    # weight 0 module with one zero generator: H^0 is everything, in weight 0
    module = HLModule(
        space=GradedSpace(0, (BasisVector(0, 0, 0, 0),), Matrix.identity(1)),
        form=PolarizationForm(Matrix([[F(1)]]), 1),
        family=OperatorFamily(("z",), (Matrix.zeros(1, 1),)),
        reference=(F(0),),
    )
    assert validate_structure(module).passed
    assert cone_membership(module, module.reference)
    kc = koszul_complex(module, [module.reference])
    rep = purity_check(kc)
    assert rep.passed
    assert rep.data["h-dim[p=0]"] == 1


def test_purity_random_tuples(corpus, t2_module):
    rng = random.Random(29)
    modules = [corpus[n][2] for n in ("square", "cube3")] + [t2_module]
    for module in modules:
        for length in (1, 2, 3):
            entries = sample_cone_tuple(module, rng, length)
            kc = koszul_complex(module, entries, require_cone=False)
            assert purity_check(kc).passed


def test_purity_graded_dims_are_reported(sq_module):
    kc = koszul_complex(sq_module, [sq_module.reference])
    rep = purity_check(kc)
    assert "graded-dims" in rep.data
    assert all(l.startswith("p=") for l in rep.data["graded-dims"])


def test_purity_failure_carries_witness(sq_module):
    # d1 - d2 acts as zero on the square algebra (the two classes agree),
    # so the top class survives in positive weight: a genuine purity
    # violation for an operator outside the cone
    t = sq_module.operator({"d1": 1, "d2": -1})
    assert t.is_zero()
    kc = koszul_complex(sq_module, [{"d1": 1, "d2": -1}], require_cone=False)
    rep = purity_check(kc)
    assert rep.verdict == "fail"
    bad = rep.failures()[0]
    assert bad.witness is not None
    assert bad.witness["level"] > 0
    assert "class" in bad.witness


def test_mixed_decomposition_failure_witness(sq_module):
    from hlmod.mixed import mixed_decomposition_check

    # on the boundary element d1 the kernel piece and the image piece of
    # grade 0 coincide, so the sum cannot be direct
    rep = mixed_decomposition_check(sq_module, [[1, 0, 0, 0]], require_cone=False)
    assert rep.verdict == "fail"
    witness = rep.failures()[0].witness
    assert witness is not None and "intersection-vector" in witness
