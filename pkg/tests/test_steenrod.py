from __future__ import annotations

import pytest

from etasphere.graded import TruncationExceeded
from etasphere.steenrod import (
    MilnorMonomial,
    SteenrodAlgebra,
    UNIT_MON,
    UnknownOperator,
    antipode,
    bockstein_pages,
    check_antipode_axiom,
    check_coassociativity,
    check_counit,
    conjugate_basis_triangularity,
    coproduct,
    counit,
    dual_action,
    kgl_homology_model,
    ko_homology_model,
    milnor_product,
    mon_bidegree,
    mon_key,
    sphere_model,
    tau_monomial_homology_dims,
)


def test_bidegrees():
    # |tau_i| = (2^{i+1}-1, 2^i-1), |xi_i| = (2^{i+1}-2, 2^i-1)
    assert mon_bidegree(mon_key((1,), ())) == (1, 0)       # tau_0
    assert mon_bidegree(mon_key((0, 1), ())) == (3, 1)     # tau_1
    assert mon_bidegree(mon_key((0, 0, 1), ())) == (7, 3)  # tau_2
    assert mon_bidegree(mon_key((), (1,))) == (2, 1)       # xi_1
    assert mon_bidegree(mon_key((), (0, 1))) == (6, 3)     # xi_2
    m = MilnorMonomial((1,), (1,))
    assert m.bidegree() == (3, 1)


def test_tau0_squared_real_closed():
    alg = SteenrodAlgebra("real_closed", weight=16)
    km = alg.km
    prod = milnor_product(alg.tau(0), alg.tau(0))
    expected = {
        mon_key((), (1,)): km.monomial(0, 1),       # tau . xi_1
        mon_key((1,), (1,)): km.monomial(1, 0),     # rho tau_0 xi_1
        mon_key((0, 1), ()): km.monomial(1, 0),     # rho tau_1
    }
    assert prod.terms == expected


def test_tau1_squared_quadratically_closed():
    alg = SteenrodAlgebra("quadratically_closed", weight=16)
    prod = alg.tau(1) * alg.tau(1)
    assert prod.terms == {mon_key((), (0, 1)): alg.km.monomial(0, 1)}  # tau xi_2


def test_no_rewrite_product():
    alg = SteenrodAlgebra("real_closed", weight=16)
    prod = alg.xi(1) * alg.xi(2)
    assert prod.terms == {mon_key((), (1, 1)): alg.km.one}


def test_truncation_error():
    alg = SteenrodAlgebra("real_closed", weight=7)
    with pytest.raises(TruncationExceeded):
        alg.tau(3) * alg.tau(3)  # needs tau_4 / xi_4


def test_coproduct_small():
    alg = SteenrodAlgebra("real_closed", weight=12)
    km = alg.km
    d = coproduct(alg.tau(0))
    assert d.terms == {
        (mon_key((1,), ()), UNIT_MON): km.one,
        (UNIT_MON, mon_key((1,), ())): km.one,
    }
    d1 = coproduct(alg.one())
    assert d1.terms == {(UNIT_MON, UNIT_MON): km.one}
    dx = coproduct(alg.xi(1))
    assert dx.terms == {
        (mon_key((), (1,)), UNIT_MON): km.one,
        (UNIT_MON, mon_key((), (1,))): km.one,
    }


def test_coproduct_xi2():
    alg = SteenrodAlgebra("real_closed", weight=12)
    km = alg.km
    dx = coproduct(alg.xi(2))
    assert dx.terms == {
        (mon_key((), (0, 1)), UNIT_MON): km.one,
        (mon_key((), (2,)), mon_key((), (1,))): km.one,  # xi_1^2 (x) xi_1
        (UNIT_MON, mon_key((), (0, 1))): km.one,
    }


FULL_TABLE_BASES = ["real_closed", "quadratically_closed", "finite_field_3mod4"]


@pytest.mark.parametrize("base", FULL_TABLE_BASES)
def test_action_table(base):
    """All twelve displayed action formulas, from coproduct contraction."""
    alg = SteenrodAlgebra(base, weight=16)
    taus = range(0, alg.max_tau + 1)
    xis = range(1, alg.max_xi + 1)
    # tau_0 dual, left
    assert dual_action("tau0_hat", "L", alg.tau(0)) == alg.one()
    for i in taus:
        if i > 0:
            assert dual_action("tau0_hat", "L", alg.tau(i)).is_zero()
    for i in xis:
        assert dual_action("tau0_hat", "L", alg.xi(i)).is_zero()
    # tau_1 dual, left
    assert dual_action("tau1_hat", "L", alg.tau(1)) == alg.one()
    for i in taus:
        if i != 1:
            assert dual_action("tau1_hat", "L", alg.tau(i)).is_zero()
    for i in xis:
        assert dual_action("tau1_hat", "L", alg.xi(i)).is_zero()
    # xi_1 dual, left
    assert dual_action("xi1_hat", "L", alg.tau(1)) == alg.tau(0)
    for i in taus:
        if i != 1:
            assert dual_action("xi1_hat", "L", alg.tau(i)).is_zero()
    assert dual_action("xi1_hat", "L", alg.xi(1)) == alg.one()
    for i in xis:
        if i != 1:
            assert dual_action("xi1_hat", "L", alg.xi(i)).is_zero()
    # right-side formulas
    for i in taus:
        assert dual_action("tau0_hat", "R", alg.tau(i)) == alg.xi(i)
    for i in xis:
        assert dual_action("tau0_hat", "R", alg.xi(i)).is_zero()
    for i in taus:
        assert dual_action("xi1_hat", "R", alg.tau(i)).is_zero()
    for i in xis:
        expected = alg.xi(i - 1) * alg.xi(i - 1) if i > 1 else alg.one()
        assert dual_action("xi1_hat", "R", alg.xi(i)) == expected


def test_xi1_left_on_xi1_squared_leibniz():
    # Leibniz gives 2 xi_1 . 1 = 0 over F2
    alg = SteenrodAlgebra("real_closed", weight=12)
    sq = alg.xi(1) * alg.xi(1)
    assert dual_action("xi1_hat", "L", sq).is_zero()


@pytest.mark.parametrize("base", FULL_TABLE_BASES)
def test_derivation_properties_on_generator_pairs(base):
    alg = SteenrodAlgebra(base, weight=12)
    gens = [alg.tau(i) for i in range(0, alg.max_tau + 1)] + [
        alg.xi(j) for j in range(1, alg.max_xi + 1)
    ]
    gens = [g for g in gens if max(
        mon_bidegree(k)[1] for k in g.terms) <= 5]

    def leibniz(op, a, b):
        lhs = dual_action(op, "L", a * b)
        rhs = dual_action(op, "L", a) * b + a * dual_action(op, "L", b)
        return lhs == rhs

    for a in gens:
        for b in gens:
            assert leibniz("tau0_hat", a, b)

    # xi1_hat is a derivation away from tau_0, tau_1
    sub = [alg.tau(i) for i in range(2, alg.max_tau + 1)] + [
        alg.xi(j) for j in range(1, alg.max_xi + 1)
    ]
    sub = [g for g in sub if max(mon_bidegree(k)[1] for k in g.terms) <= 5]
    for a in sub:
        for b in sub:
            assert leibniz("xi1_hat", a, b)
    # tau1_hat is a derivation away from tau_0
    sub1 = [alg.tau(i) for i in range(1, alg.max_tau + 1)] + [
        alg.xi(j) for j in range(1, alg.max_xi + 1)
    ]
    sub1 = [g for g in sub1 if max(mon_bidegree(k)[1] for k in g.terms) <= 5]
    for a in sub1:
        for b in sub1:
            assert leibniz("tau1_hat", a, b)


def test_unknown_operator():
    alg = SteenrodAlgebra("real_closed", weight=8)
    with pytest.raises(UnknownOperator):
        dual_action("sq2_hat", "L", alg.one())
    with pytest.raises(UnknownOperator):
        dual_action("tau0_hat", "M", alg.one())


def test_coassociativity_and_counit_weight8():
    for base in FULL_TABLE_BASES:
        alg = SteenrodAlgebra(base, weight=16)
        assert check_coassociativity(alg, 8) > 0
        assert check_counit(alg, 8) > 0


def test_antipode():
    alg = SteenrodAlgebra("real_closed", weight=16)
    km = alg.km
    # paper gives only conj(tau_0) = tau_0; the recursion must reproduce it
    assert antipode(alg.tau(0)) == alg.tau(0)
    chi_tau1 = antipode(alg.tau(1))
    assert chi_tau1 == alg.tau(1) + alg.xi(1) * alg.tau(0)
    chi_xi2 = antipode(alg.xi(2))
    xi1 = alg.xi(1)
    assert chi_xi2 == alg.xi(2) + xi1 * xi1 * xi1
    assert check_antipode_axiom(alg, 7) > 0


def test_conjugate_basis_triangularity_weight8():
    alg = SteenrodAlgebra("real_closed", weight=16)
    checked = conjugate_basis_triangularity(alg, max_weight=8, max_tau_power=2)
    assert checked > 0


def test_ko_model_delta():
    model = ko_homology_model("real_closed", truncation=16)
    a = model.algebra
    km = a.coefficients
    delta = model.delta
    from etasphere.graded import apply_derivation
    assert apply_derivation(delta, a.gen("xi2")) == a.gen("xi1sq")
    assert apply_derivation(delta, a.gen("tau2")).is_zero()
    assert apply_derivation(delta, a.gen("xi1sq")).is_zero()
    # tau_i^2 = rho tau_{i+1} in the model
    t2 = a.gen("tau2")
    sq = t2 * t2
    assert sq == a.gen("tau3").scale(km.monomial(1, 0))
    model.check_delta_squared(12)


def test_ko_model_homology_matches_tau_monomials():
    for base in ("real_closed", "quadratically_closed"):
        model = ko_homology_model(base, truncation=18)
        expected = tau_monomial_homology_dims(model, smax=16, wmin=-16, wmax=6)
        for s in range(0, 17):
            for w in range(-16, 7):
                dim = model.cell_homology_dim(s, w)
                assert dim == expected.get((s, w), 0), (base, s, w)


def test_kgl_model_homology_vanishes():
    model = kgl_homology_model("real_closed", truncation=12)
    model.check_delta_squared(10)
    for s in range(0, 10):
        for w in range(-10, 5):
            assert model.cell_homology_dim(s, w) == 0, (s, w)


def test_sphere_pages_collapse():
    model = sphere_model("real_closed", truncation=8)
    e1, e2, report = bockstein_pages(model, smax=6, fmax=4)
    assert report["collapses"]
    # gr = k^M[h]: all classes in stem 0
    for (s, f, w), labels in e1.entries.items():
        assert s == 0
    # E1 = E2 on the f = 0 и f > 0 cells: same dimensions
    for (s, f, w), labels in e2.entries.items():
        assert s == 0
        assert len(labels) == len(e1.entries.get((s, f, w), ()))


def test_bockstein_pages_ko_real_closed():
    model = ko_homology_model("real_closed", truncation=18)
    e1, e2, report = bockstein_pages(model, smax=16, fmax=3, wmin=-18, wmax=2)
    assert report["f_positive_stems_mod_4"]
    assert report["collapses"]
    # f > 0 entries at s = 4 and s = 8 populated by tau_2-monomials
    tau2_cells = [
        (s, f, w) for (s, f, w), labels in e2.entries.items()
        if f > 0 and s == 4 and any("tau2" in lbl for lbl in labels)
    ]
    assert tau2_cells
    s8 = [
        (s, f, w) for (s, f, w), labels in e2.entries.items() if f > 0 and s == 8
    ]
    assert s8
    # E2 f=0 row equals the cycle space dimension
    for (s, f, w), labels in e2.entries.items():
        if f == 0:
            _, cycles = model.cell_cycles(s, w)
            from etasphere import gf2
            assert len(labels) == len(gf2.row_reduce(cycles))


def test_counit_values():
    alg = SteenrodAlgebra("real_closed", weight=8)
    km = alg.km
    assert counit(alg.one()) == km.one
    assert counit(alg.tau(0)) == km.zero
    x = alg.scalar(km.monomial(1, 1))  # rho tau
    assert counit(x) == km.monomial(1, 1)


def test_ko_and_kgl_models_differ_exactly_by_xi1_generator():
    ko = ko_homology_model("real_closed", truncation=12)
    kgl = kgl_homology_model("real_closed", truncation=12)
    ko_names = {g.name for g in ko.algebra.generators}
    kgl_names = {g.name for g in kgl.algebra.generators}
    assert ko_names - kgl_names == {"xi1sq"}
    assert kgl_names - ko_names == {"xi1"}
