"""Ext layer: staircase degree function, Yoneda products, classification,
generation analysis, subalgebra extraction, arity feasibility."""

import json
import pathlib

import pytest

from corpus import (
    CORPUS,
    commuting_loops_presentation,
    loop_presentation,
    pk34_presentation,
    resolve,
    semisimple_presentation,
)
from koszulity import (
    DeltaFunction,
    ExtTable,
    ainfty_feasible_arities,
    betti_table,
    classify,
    classify_module,
    delta,
    ek_subalgebra,
    ext_generation_degrees,
    ext_table,
    minimal_resolution,
    module_generation_check,
    reduced_2l_check,
    syzygy,
    yoneda_product,
    yoneda_surjectivity_check,
)
from koszulity.errors import InputError, Refusal
from koszulity.ext import ExtAlgebra, ext_algebra

GOLDEN = pathlib.Path(__file__).parent / "golden"


# -- delta ----------------------------------------------------------------------


def test_delta_tabulated_values():
    assert [delta(DeltaFunction(3, 4), n) for n in range(9)] == [0, 1, 2, 4, 5, 6, 8, 9, 10]
    for p in (2, 3, 4, 5):
        assert [delta(DeltaFunction(p, p), n) for n in range(12)] == list(range(12))
    assert [delta(DeltaFunction(2, 5), n) for n in range(6)] == [0, 1, 5, 6, 10, 11]


def test_delta_validation():
    with pytest.raises(InputError):
        DeltaFunction(1, 4)
    with pytest.raises(InputError):
        DeltaFunction(3, 2)
    with pytest.raises(InputError):
        delta(DeltaFunction(2, 2), -1)


def test_delta_identities_exhaustive():
    for p in range(2, 6):
        for d in range(p, 10):
            f = DeltaFunction(p, d)
            assert delta(f, 0) == 0
            for n in range(41):
                assert delta(f, n + p) == delta(f, n) + d
            for i in range(41):
                for j in range(41):
                    gap = delta(f, i + j) - delta(f, i) - delta(f, j)
                    expected = 0 if (i % p) + (j % p) < p else d - p
                    assert gap == expected


# -- ext tables ---------------------------------------------------------------------


def test_ext_table_commuting_loops_golden():
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    table = ext_table(betti_table(res))
    assert table.json_dict() == json.loads(
        (GOLDEN / "commuting_loops_ext.json").read_text()
    )


def test_ext_table_pk34_concentrated():
    _, res = resolve(pk34_presentation(), 6, 9)
    table = ext_table(betti_table(res))
    f = DeltaFunction(3, 4)
    for (i, j), c in table.dims.items():
        assert c > 0
        assert j == delta(f, i)
    assert table.dim(0, 0) == 5


def test_ext_table_semisimple():
    _, res = resolve(semisimple_presentation(), 3, 4)
    table = ext_table(betti_table(res))
    assert table.support() == [(0, 0)]
    assert table.dim(0, 0) == 2


# -- yoneda products --------------------------------------------------------------


def test_unit_class_acts_as_identity():
    _, res = resolve(pk34_presentation(), 6, 9)
    ea = ext_algebra(res)
    one = ea.one()
    for i in (1, 2, 3):
        for xi in ea.basis(i):
            assert yoneda_product(res, one, xi).coeffs == xi.coeffs
            assert yoneda_product(res, xi, one).coeffs == xi.coeffs


def test_x2_loop_ext_is_polynomial_algebra():
    _, res = resolve(loop_presentation(2), 7, 8)
    ea = ext_algebra(res)
    xi = ea.basis(1)[0]
    power = xi
    for n in range(2, 8):
        power = ea.product(xi, power)
        assert any(power.coeffs), f"xi^{n} vanished"
        assert ea.shift_of(power) == n


def test_x3_loop_square_vanishes_by_bigrading():
    _, res = resolve(loop_presentation(3), 6, 10)
    ea = ext_algebra(res)
    xi = ea.basis(1)[0]
    assert ea.product(xi, xi).is_zero()
    # but Ext^1 . Ext^2 is all of Ext^3
    assert yoneda_surjectivity_check(res, 1, 2, DeltaFunction(2, 3))


def test_shift_additivity_and_associativity():
    _, res = resolve(pk34_presentation(), 8, 11)
    ea = ext_algebra(res)
    for (i, j) in [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)]:
        for a in ea.basis(i):
            for b in ea.basis(j):
                ab = ea.product(a, b)
                if not ab.is_zero():
                    assert ea.shift_of(ab) == ea.shift_of(a) + ea.shift_of(b)
    for (i, j, k) in [(1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 1, 1)]:
        for a in ea.basis(i):
            for b in ea.basis(j):
                for c in ea.basis(k):
                    assert ea.product(ea.product(a, b), c).coeffs == ea.product(
                        a, ea.product(b, c)
                    ).coeffs


def test_product_beyond_certified_refused():
    _, res = resolve(loop_presentation(2), 3, 8)
    ea = ext_algebra(res)
    xi = ea.basis(2)[0]
    with pytest.raises(Refusal):
        ea.product(xi, xi)


def test_lift_choice_does_not_change_products():
    # recompute one product with a perturbed pivot order in the lift solves
    _, res = resolve(pk34_presentation(), 6, 9)
    plain = ExtAlgebra(res)
    perturbed = ExtAlgebra(res, perturb_solve=True)
    for i, j in [(1, 1), (1, 2), (2, 1)]:
        for a in range(plain.rank(i)):
            for b in range(plain.rank(j)):
                assert plain.product_basis_vector(
                    i, a, j, b
                ) == perturbed.product_basis_vector(i, a, j, b)


# -- generation analysis -------------------------------------------------------------


def test_generation_koszul_quadratic_dual():
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    report = ext_generation_degrees(res)
    assert report["generator_degrees"] == [0, 1]


def test_generation_x3_loop():
    _, res = resolve(loop_presentation(3), 6, 10)
    report = ext_generation_degrees(res)
    assert report["generator_degrees"] == [0, 1, 2]
    assert report["levels"][2]["new_generators"] == [(3, 1)]


def test_generation_pk34():
    _, res = resolve(pk34_presentation(), 8, 11)
    report = ext_generation_degrees(res)
    assert report["generator_degrees"] == [0, 1, 3]
    assert report["levels"][3]["new_generators"] == [(4, 1)]


def test_generation_truncation_flagged():
    _, res = resolve(loop_presentation(4), 4, 4)
    report = ext_generation_degrees(res, 4)
    assert report["truncated"]
    assert report["certified_to"] < 4


# -- classification -------------------------------------------------------------------


def test_classify_corpus_expected_parameters():
    for name, builder, N, D, expected in CORPUS:
        _, res = resolve(builder(), N, D)
        cls = classify(betti_table(res))
        assert (cls.p, cls.d) == expected, name
        assert cls.verdict in ("Koszul", "dKoszul", "PK")


def test_classify_verdicts():
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    assert classify(betti_table(res)).verdict == "Koszul"
    _, res = resolve(loop_presentation(3), 6, 10)
    cls = classify(betti_table(res))
    assert (cls.verdict, cls.d) == ("dKoszul", 3)
    _, res = resolve(pk34_presentation(), 8, 11)
    cls = classify(betti_table(res))
    assert (cls.verdict, cls.p, cls.d) == ("PK", 3, 4)
    assert cls.fitting_pairs == [(3, 4)]
    assert cls.termination_degree == 4


def test_classify_not_pure():
    from koszulity import BettiTable

    bt = BettiTable(
        entries={(0, 0, 0): 1, (1, 1, 0): 1, (1, 2, 0): 1},
        certified=(True, True),
        N=1,
        D=4,
        vertex_labels=("v",),
    )
    assert classify(bt).verdict == "NotPure"


def test_classify_no_fit():
    from koszulity import BettiTable

    # delta(1) = 1 for every (p, d), so a degree-2 generator in row 1 fits nothing
    bt = BettiTable(
        entries={(0, 0, 0): 1, (1, 2, 0): 1},
        certified=(True, True),
        N=1,
        D=8,
        vertex_labels=("v",),
    )
    assert classify(bt).verdict == "NoFit"


def test_classify_module_cases():
    alg, res = resolve(pk34_presentation(), 6, 9)
    f = DeltaFunction(3, 4)
    assert classify_module(betti_table(res), f).is_piecewise_koszul
    assert classify_module(betti_table(res), f).s == 0
    # J over the x^2 loop: piecewise with s = 1
    alg2, res2 = resolve(loop_presentation(2), 6, 8)
    presJ = syzygy(res2, 1)
    btJ = betti_table(minimal_resolution(alg2, presJ, N=4, D=8))
    mc = classify_module(btJ, DeltaFunction(2, 2))
    assert mc.is_piecewise_koszul and mc.s == 1
    # J over the x^3 loop: fails the pattern
    alg3, res3 = resolve(loop_presentation(3), 6, 10)
    btJ3 = betti_table(minimal_resolution(alg3, syzygy(res3, 1), N=4, D=10))
    mc3 = classify_module(btJ3, DeltaFunction(2, 3))
    assert not mc3.is_piecewise_koszul
    assert mc3.failures


# -- surjectivity ---------------------------------------------------------------------


def test_surjectivity_commuting_loops():
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    assert yoneda_surjectivity_check(res, 1, 1, DeltaFunction(2, 2))


def test_surjectivity_hypothesis_refused():
    _, res = resolve(pk34_presentation(), 6, 9)
    with pytest.raises(Refusal):
        yoneda_surjectivity_check(res, 1, 2, DeltaFunction(3, 4))


def test_surjectivity_pk34_period_products():
    _, res = resolve(pk34_presentation(), 8, 11)
    assert yoneda_surjectivity_check(res, 3, 3, DeltaFunction(3, 4))
    assert yoneda_surjectivity_check(res, 1, 1, DeltaFunction(3, 4))


# -- E_k subalgebras -------------------------------------------------------------------


def test_ek_koszul_case():
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    ek = ek_subalgebra(res, DeltaFunction(2, 2), 1, 3)
    dims = [ek.total_dim(n) for n in range(4)]
    assert dims == [1, 1, 0, 0]


def test_ek_pk34_is_koszul():
    _, res = resolve(pk34_presentation(), 12, 9)
    ek = ek_subalgebra(res, DeltaFunction(3, 4), 1, 4)
    assert [ek.total_dim(n) for n in range(5)] == [5, 1, 0, 0, 0]
    res_ek = minimal_resolution(ek, None, N=3, D=4)
    bt = betti_table(res_ek)
    cls = classify(bt)
    assert cls.verdict == "Koszul"
    for n in range(4):
        degs = bt.row_degrees(n)
        assert degs in ([], [n])


def test_ek_semisimple_trivial():
    _, res = resolve(semisimple_presentation(), 6, 6)
    ek = ek_subalgebra(res, DeltaFunction(2, 2), 1, 2)
    assert [ek.total_dim(n) for n in range(3)] == [2, 0, 0]


def test_ek_refuses_uncertified():
    _, res = resolve(pk34_presentation(), 5, 9)
    with pytest.raises(Refusal):
        ek_subalgebra(res, DeltaFunction(3, 4), 1, 4)  # needs ext degree 12 > 5


# -- arity feasibility ------------------------------------------------------------------


def test_arities_pk36_closed_form():
    f = DeltaFunction(3, 6)
    table = ExtTable.concentrated(f, 9)
    report = ainfty_feasible_arities(table, f, 9)
    assert report.closed_form == [2, 5, 8]
    assert set(report.support) <= set(report.closed_form)
    assert report.consistent


def test_arities_pk34_all_admissible():
    f = DeltaFunction(3, 4)
    table = ExtTable.concentrated(f, 9)
    report = ainfty_feasible_arities(table, f, 5)
    assert report.closed_form == [2, 3, 4, 5]
    assert report.consistent


def test_arities_koszul_support_only_two():
    table = ExtTable.from_dims({(0, 0): 1, (1, 1): 2, (2, 2): 1, (3, 3): 1}, 3)
    report = ainfty_feasible_arities(table, DeltaFunction(3, 3), 6)
    assert report.support == [2]
    assert report.closed_form == [2]


def test_arities_support_subset_closed_form_on_pk3_tables():
    for d in (4, 5, 6, 7):
        f = DeltaFunction(3, d)
        table = ExtTable.concentrated(f, 9)
        report = ainfty_feasible_arities(table, f, 9)
        assert set(report.support) <= set(report.closed_form), d
        assert report.consistent


def test_arities_non_period_three_no_closed_form():
    f = DeltaFunction(2, 5)
    table = ExtTable.concentrated(f, 6)
    report = ainfty_feasible_arities(table, f, 6)
    assert report.closed_form is None and report.consistent is None
    assert 2 in report.support


# -- reduced (2, l) ------------------------------------------------------------------------


def test_reduced_2l_pk34_passes():
    _, res = resolve(pk34_presentation(), 8, 11)
    report = reduced_2l_check(res, ext_table(betti_table(res)), 3)
    for cond in report["conditions"]:
        assert cond["passed"], cond
    levels = [c["level"] for c in report["conditions"]]
    assert levels == ["exact", "exact", "feasibility"]


def test_reduced_2l_koszul_condition2_vacuous():
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    report = reduced_2l_check(res, ext_table(betti_table(res)), 3)
    assert report["conditions"][1]["passed"]


def test_reduced_2l_detects_condition2_violation():
    # E(A) of the x^2 loop is F[xi]: xi^1 . xi^2 != 0 hits residues (1, 2)
    _, res = resolve(loop_presentation(2), 6, 8)
    report = reduced_2l_check(res, ext_table(betti_table(res)), 3)
    cond2 = report["conditions"][1]
    assert not cond2["passed"]
    assert [1, 2] in cond2["violations"]


def test_reduced_2l_condition3_feasibility_violation():
    # synthetic table where the disallowed argument pattern (1,1,1) lands on
    # a nonzero bidegree: (1,1)+(1,1)+(1,1) -> ext 2, shift 3, present below
    _, res = resolve(commuting_loops_presentation(), 6, 8)
    table = ExtTable.from_dims({(0, 0): 1, (1, 1): 2, (2, 3): 1}, 3)
    report = reduced_2l_check(res, table, 3)
    cond3 = report["conditions"][2]
    assert not cond3["passed"]
    assert [1, 1, 1] in cond3["violations"]


# -- module generation (Yoneda action) ----------------------------------------------------


def test_module_generation_matches_classification():
    # over a staircase algebra: M generated in ext degree 0 iff M is a
    # staircase module (checked on A_0, J, and a syzygy, both directions)
    alg, res = resolve(loop_presentation(3), 6, 10)
    f = DeltaFunction(2, 3)
    # A_0 itself
    assert module_generation_check(res, res)["generated_in_degree_zero"]
    # J = first syzygy: not a staircase module, not generated in degree 0
    presJ = syzygy(res, 1)
    resJ = minimal_resolution(alg, presJ, N=4, D=10)
    assert not classify_module(betti_table(resJ), f).is_piecewise_koszul
    assert not module_generation_check(resJ, res)["generated_in_degree_zero"]
    # Omega^2 (p = 2): syzygies a full period apart stay staircase modules
    pres2 = syzygy(res, 2)
    res2 = minimal_resolution(alg, pres2, N=4, D=10)
    assert classify_module(betti_table(res2), f).is_piecewise_koszul
    assert module_generation_check(res2, res)["generated_in_degree_zero"]


def test_module_generation_pk34_syzygy():
    alg, res = resolve(pk34_presentation(), 8, 11)
    f = DeltaFunction(3, 4)
    pres3 = syzygy(res, 3)
    res3 = minimal_resolution(alg, pres3, N=4, D=11)
    assert classify_module(betti_table(res3), f).is_piecewise_koszul
    assert module_generation_check(res3, res)["generated_in_degree_zero"]
