import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fixpoint.catalogue import affine_G, scaled_cos_G
from fixpoint.funceq import (BakerInstance, FuncEqInstance, InternalConsistencyError,
                             LiftedOperator, StabilityTheorem, baker_series_solution,
                             check_sup_contraction, compute_delta, operator_power,
                             perturb_solution, solve_baker, solve_stability)
from fixpoint.metric import FunctionTable, RejectedInput, euclidean, eval_metric, norm_space, squared
from fixpoint.picard import DomainError, IterationConfig

import oracles

T = FunctionTable.of
TIGHT = IterationConfig(tol=1e-12)


def scalar(a=0.5, c=1.0):
    return FuncEqInstance(1, (0,), affine_G([a], [c]), euclidean())


def test_operator_values():
    op = LiftedOperator(scalar())
    assert op(T([(0.0,)])) == T([(1.0,)])
    assert op(T([(2.0,)])) == T([(2.0,)])
    swap = FuncEqInstance(2, (1, 0), affine_G([1.0, 1.0], [0.0, 0.0]), euclidean())
    assert LiftedOperator(swap)(T([(3.0,), (7.0,)])) == T([(7.0,), (3.0,)])


def test_operator_power():
    op = LiftedOperator(scalar())
    assert operator_power(op, T([(0.0,)]), 0) == T([(0.0,)])
    assert operator_power(op, T([(0.0,)]), 3) == T([(1.75,)])


def test_compute_delta():
    assert compute_delta(scalar(), T([(0.0,)])) == 1.0
    assert compute_delta(scalar(), T([(2.0,)])) == 0.0
    inst = FuncEqInstance(2, (0, 1), affine_G([0.5, 0.5], [0.0, 0.0]), euclidean())
    assert compute_delta(inst, T([(1.0,), (4.0,)])) == 2.0


def test_instance_validation():
    with pytest.raises(RejectedInput):
        FuncEqInstance(2, (0, 2), affine_G([0.5, 0.5], [0, 0]), euclidean())
    with pytest.raises(RejectedInput):
        LiftedOperator(scalar())(T([(0.0,), (1.0,)]))


def test_sup_contraction_check():
    inst = FuncEqInstance(3, (1, 2, 0), affine_G([0.5] * 3, [1.0, -1.0, 2.0]), euclidean())
    rng = np.random.default_rng(0)
    pairs = [(T(rng.uniform(-5, 5, (3, 1)).tolist()), T(rng.uniform(-5, 5, (3, 1)).tolist()))
             for _ in range(20)]
    assert check_sup_contraction(inst, "BANACH", pairs, 0.5, tol=1e-12)[0]
    g1, g2 = T([(0.0,)] * 3), T([(0.0,), (1.0,), (0.0,)])
    ok, w = check_sup_contraction(inst, "BANACH", [(g1, g2)], 0.4)
    assert not ok and w == (g1, g2)
    assert check_sup_contraction(inst, "BANACH", [(g1, g1)], 0.1)[0]


def test_stability_scalar_is_tight():
    c = solve_stability(scalar(), T([(0.0,)]), "C4.3-BANACH-ORBIT", 0.5, TIGHT)
    assert c.exact_solution[0][0] == pytest.approx(2.0, abs=1e-11)
    assert c.delta == 1.0 and c.theoretical_bound == 2.0
    assert c.sup_distance == pytest.approx(2.0, abs=1e-11) and c.bound_satisfied


def test_stability_from_exact_solution():
    inst = FuncEqInstance(2, (1, 0), affine_G([0.5, 0.5], [1.0, 0.0]), euclidean())
    exact = oracles.linear_funceq_solution((1, 0), [0.5, 0.5], [[1.0], [0.0]])
    c = solve_stability(inst, T(exact.tolist()), "C4.3-BANACH-ORBIT", 0.5)
    assert c.delta <= 1e-15 and c.sup_distance <= 1e-15


def test_stability_cycle_matches_linear_solve():
    inst = FuncEqInstance(3, (1, 2, 0), affine_G([0.25] * 3, [1.0, 2.0, 3.0]), euclidean())
    c = solve_stability(inst, T([(0.0,)] * 3), "C4.3-BANACH-ORBIT", 0.25, TIGHT)
    exact = oracles.linear_funceq_solution((1, 2, 0), [0.25] * 3, [[1.0], [2.0], [3.0]])
    assert np.max(np.abs(c.exact_solution.to_array() - exact)) <= 1e-10
    assert c.bound_satisfied


def test_banach_sup_reports_no_bound():
    c = solve_stability(scalar(), T([(0.0,)]), "T4.2-BANACH-SUP", 0.5)
    assert c.theoretical_bound is None and c.bound_satisfied is None and c.reason


def test_kannan_ceiling_is_strict():
    with pytest.raises(DomainError):
        solve_stability(scalar(0.2), T([(0.0,)]), "T4.4-KANNAN", 0.5)


def test_user_delta_below_computed_rejected():
    with pytest.raises(RejectedInput):
        solve_stability(scalar(), T([(0.0,)]), "C4.3-BANACH-ORBIT", 0.5, delta=0.5)


def test_squared_base_makes_bound_not_applicable():
    inst = FuncEqInstance(1, (0,), affine_G([0.5], [0.0]), squared())
    c = solve_stability(inst, T([(1.0,)]), "C4.3-BANACH-ORBIT", 0.25)
    assert c.orbit_triangle_ok is False and c.theoretical_bound is None
    assert "triangle" in c.reason


def test_ciric_certificate():
    c = solve_stability(scalar(0.3), T([(0.0,)]), "T4.6-CIRIC", 0.5, TIGHT)
    assert c.theoretical_bound == pytest.approx(2.5 * c.delta)
    assert c.bound_satisfied


def test_baker_series_values():
    norm = euclidean()
    one = BakerInstance(1, (0,), (0.5,), T([(1.0,)]), norm)
    assert baker_series_solution(one)[0][0] == pytest.approx(2.0, abs=1e-13)
    swap = BakerInstance(2, (1, 0), (0.5, 0.5), T([(1.0,), (0.0,)]), norm)
    got = baker_series_solution(swap).to_array()
    assert np.allclose(got, [[4 / 3], [2 / 3]], atol=1e-13)
    zero = BakerInstance(2, (1, 0), (0.5, 0.5), T([(0.0,), (0.0,)]), norm)
    assert baker_series_solution(zero) == T([(0.0,), (0.0,)])


def test_baker_rejects_large_multiplier():
    with pytest.raises(DomainError):
        BakerInstance(1, (0,), (1.0,), T([(1.0,)]), euclidean())


def test_solve_baker():
    inst = BakerInstance(1, (0,), (0.5,), T([(1.0,)]), euclidean())
    c = solve_baker(inst, T([(0.0,)]), TIGHT)
    assert c.theorem == "T5-BAKER" and c.delta == 1.0 and c.theoretical_bound == 2.0
    assert c.sup_distance == pytest.approx(2.0, abs=1e-11)
    exact = baker_series_solution(inst)
    c0 = solve_baker(inst, exact)
    assert c0.delta == 0.0 and c0.sup_distance == 0.0


def test_baker_cycle_with_integer_B():
    inst = BakerInstance(4, (1, 2, 3, 0), (0.3,) * 4, T([(3.0,), (-1.0,), (4.0,), (2.0,)]),
                         euclidean())
    exact = oracles.linear_funceq_solution((1, 2, 3, 0), [0.3] * 4, [[3], [-1], [4], [2]])
    f0 = perturb_solution(T(exact.tolist()), 0.1, seed=3)
    c = solve_baker(inst, f0, TIGHT)
    assert np.max(np.abs(c.exact_solution.to_array() - exact)) <= 1e-10
    assert c.delta <= 0.1 * 1.3 + 1e-12
    assert c.sup_distance <= c.delta / 0.7 + 1e-12


def test_baker_oracle_disagreement_is_internal_error(monkeypatch):
    import fixpoint.funceq as fe
    inst = BakerInstance(1, (0,), (0.5,), T([(1.0,)]), euclidean())
    monkeypatch.setattr(fe, "baker_series_solution", lambda *a, **k: T([(3.0,)]))
    with pytest.raises(InternalConsistencyError):
        solve_baker(inst, T([(0.0,)]), TIGHT)


def test_scaled_cos_family():
    inst = FuncEqInstance(2, (0, 1), scaled_cos_G([0.5, 1.0], [0.25, 0.0]), euclidean())
    c = solve_stability(inst, T([(0.0,), (0.6,)]), "C4.3-BANACH-ORBIT", 0.9, TIGHT)
    assert c.exact_solution[0][0] == pytest.approx(oracles.cos_fixed_point(0.5, 0.25), abs=1e-9)
    assert c.exact_solution[1][0] == pytest.approx(oracles.cos_fixed_point(), abs=1e-9)


@st.composite
def baker_instances(draw):
    n = draw(st.integers(1, 6))
    d = draw(st.integers(1, 3))
    psi = tuple(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
    lmax = draw(st.floats(0.0, 0.9))
    lams = tuple(draw(st.lists(st.floats(0.0, lmax), min_size=n, max_size=n)))
    B = draw(st.lists(st.lists(st.floats(-10, 10), min_size=d, max_size=d), min_size=n, max_size=n))
    name = draw(st.sampled_from(["euclidean", "max", "weighted_sum"]))
    w = [draw(st.floats(0.5, 2.0)) for _ in range(d)] if name == "weighted_sum" else None
    return BakerInstance(n, psi, lams, T(B), norm_space(name, d, w))


@settings(max_examples=60, deadline=None)
@given(baker_instances(), st.floats(0, 1), st.integers(0, 2 ** 32))
def test_baker_iteration_matches_linear_solve(inst, magnitude, seed):
    exact = oracles.linear_funceq_solution(inst.psi, inst.lambda_fn, inst.B.to_array())
    f0 = perturb_solution(T(exact.tolist()), magnitude, seed)
    c = solve_baker(inst, f0, TIGHT)
    assert c.converged
    assert eval_metric(inst.to_funceq().space, c.exact_solution, T(exact.tolist())) <= 1e-9
    assert c.sup_distance <= c.delta / (1 - inst.lambda_max) + TIGHT.tol


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.floats(0.05, 0.32), st.integers(0, 2 ** 32))
def test_kannan_chatterjea_bound_property(n, amax, seed):
    rng = np.random.default_rng(seed)
    psi = tuple(int(i) for i in rng.integers(0, n, n))
    a = rng.uniform(-amax, amax, n)
    c = rng.uniform(-5, 5, (n, 1))
    inst = FuncEqInstance(n, psi, affine_G(a.tolist(), c.tolist()), euclidean())
    m = float(np.max(np.abs(a)))
    lam = m / (1 - m)
    g = T(rng.uniform(-5, 5, (n, 1)).tolist())
    for th in ("T4.4-KANNAN", "T4.5-CHATTERJEA"):
        cert = solve_stability(inst, g, th, lam, TIGHT)
        assert cert.orbit_triangle_ok
        assert cert.sup_distance <= (1 + lam) * cert.delta / (1 - 2 * lam) + 1e-9


def test_perturbation_is_seeded():
    base = T([(1.0, 2.0), (3.0, 4.0)])
    assert perturb_solution(base, 0.5, 1) == perturb_solution(base, 0.5, 1)
    p = perturb_solution(base, 0.5, 1)
    assert eval_metric(norm_space("max", 2), p[0], base[0]) <= 0.5
    assert StabilityTheorem("T5-BAKER").kind.value == "BANACH"
