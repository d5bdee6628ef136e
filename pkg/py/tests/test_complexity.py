import math

import pytest

from hlestim.complexity import (
    C_DELTA, DELTA_PRIME, EPS_HS, MU_METHOD1, P_QUBITS, V_COS1, ComplexityParams, Method, WyyParams,
    complexity_sweep, delta_schedule, hubbard_filling, method1_queries, method2_queries, q_max_for, qae_queries,
    run_method, scaling, sector_norm_bound, shadow_queries, sigma_method1, sigma_method2, sigma_wyy,
    space_complexity, wyy_queries,
)
from hlestim.errors import DomainError
from hlestim.hsdeg import hs_degree
from hlestim.sampling import min_samples

FEMO = (152, 113)


def _sigma(norm, log_dim, v, delta_prime):
    lt = math.log(2) + log_dim - math.log(delta_prime)
    return math.ceil(math.sqrt(2 * v * norm * lt) + 4 / 3 * lt)


# -----------------------
# Anchors
# -----------------------

def test_shadow_anchor():
    assert shadow_queries(2, 1, 0.1) == 300


def test_shadow_scales_by_four_per_halving():
    for N, k in ((2, 1), (152, 1), (152, 3), (40, 2)):
        for eps in (0.1, 1e-2, 1e-3):
            a, b = shadow_queries(N, k, eps), shadow_queries(N, k, eps / 2)
            assert 4 * a - 4 < b <= 4 * a


def test_qae_per_observable_anchor():
    assert qae_queries(1, 1, 1e-3) == 4097
    assert qae_queries(152, 1, 1e-3) == 152 ** 2 * 4097


def test_params_validation():
    with pytest.raises(DomainError):
        ComplexityParams(4, 0, 1, 0.1, Method.METHOD1)
    with pytest.raises(DomainError):
        ComplexityParams(4, 2, 5, 0.1, Method.SHADOW)
    with pytest.raises(DomainError):
        ComplexityParams(4, 2, 1, 1.0, Method.SHADOW)
    with pytest.raises(DomainError, match="unknown method"):
        ComplexityParams(4, 2, 1, 0.1, "magic")
    assert ComplexityParams(4, 0, 1, 0.1, "shadow").M == 16


def test_q_max_and_schedule():
    assert q_max_for(1e-3) == 10
    assert q_max_for(0.9) == 0
    sched = delta_schedule(2)
    assert sched == pytest.approx([C_DELTA / 64, C_DELTA / 8, C_DELTA])


def test_hubbard_filling_is_ceiling():
    for N in (8, 80, 81, 152, 1):
        assert hubbard_filling(N) == math.ceil(7 * N / 8)


# -----------------------
# Rescaling constants
# -----------------------

def test_sector_norm_bound():
    assert sector_norm_bound(4, 2, 1) == 12
    assert sector_norm_bound(2, 1, 1) == 4


def test_sigma_method1_small_case():
    assert sigma_method1(4, 2, 1) == 19
    assert sigma_method1(4, 2, 1) == _sigma(12, math.log(6), V_COS1, DELTA_PRIME)


def test_sigma_method2_multiplies_variance_term():
    expected = _sigma(7 * 12, math.log(6), V_COS1, 1e-6)
    assert sigma_method2(4, 2, 1, V_COS1, 1e-6, 7) == expected
    assert sigma_method2(4, 2, 1, V_COS1, DELTA_PRIME, 1) == sigma_method1(4, 2, 1)


def test_sigma_wyy_uses_full_space():
    w = WyyParams()
    assert sigma_wyy(10, 2) == _sigma(math.comb(10, 2) ** 2, 10 * math.log(2), w.variance, w.delta_prime)


def test_sigma_range_checks():
    with pytest.raises(DomainError):
        sigma_method1(4, 4, 1)
    with pytest.raises(DomainError):
        sigma_method2(4, 2, 1, V_COS1, 0.1, 0)


# -----------------------
# Adaptive methods
# -----------------------

def test_method1_total_recomputed_from_parts():
    N, eta, k, eps = 20, 10, 1, 1e-2
    total, trace = method1_queries(N, eta, k, eps)
    q_max = q_max_for(eps)
    sigma = sigma_method1(N, eta, k)
    expected = 0
    for q in range(q_max + 1):
        delta = C_DELTA / 8 ** (q_max - q)
        R = min_samples(MU_METHOD1, math.log(delta) - math.log(2 * math.comb(N, k) ** 2))
        expected += 2 * R * hs_degree(2 ** (P_QUBITS + q + 1) * sigma, EPS_HS)
    assert total == expected
    assert len(trace) == q_max + 1
    assert trace[-1].L_cum == total
    assert all(a.L_cum < b.L_cum for a, b in zip(trace, trace[1:]))
    assert [t.t for t in trace] == [2.0 ** (4 + q) * sigma for q in range(q_max + 1)]


def test_method2_trace_uses_one_round_per_iteration():
    total, trace = method2_queries(20, 10, 1, 1e-2)
    assert total == sum(2 * t.Q for t in trace)
    assert all(t.sigma == sigma_method2(20, 10, 1, V_COS1, t.delta_q ** 2 / 80, t.R_q) for t in trace)


def test_run_method_dispatch():
    params = ComplexityParams(20, 10, 1, 1e-2, Method.SHADOW)
    assert run_method(params) == (shadow_queries(20, 1, 1e-2), [])
    wyy = ComplexityParams(20, 10, 1, 1e-2, Method.WYY)
    assert run_method(wyy)[0] == wyy_queries(20, 1, 1e-2)[0]


def test_wyy_overrides_change_the_count():
    base = wyy_queries(20, 1, 1e-2)[0]
    noisier = wyy_queries(20, 1, 1e-2, WyyParams(variance=0.9))[0]
    assert noisier > base
    with pytest.raises(DomainError):
        WyyParams(mu=0.5)


def test_scaling_strings():
    assert scaling("shadow") == {"query": "O(N^k)/eps^2", "space": "N"}
    assert space_complexity(Method.METHOD2) == "O(k N^(2k) log(N/eps))"


# -----------------------
# Relative behaviour at chemistry scale
# -----------------------

@pytest.mark.parametrize("k", [1, 2])
def test_method2_beats_method1_femo(k):
    N, eta = FEMO
    assert method2_queries(N, eta, k, 1e-3)[0] < method1_queries(N, eta, k, 1e-3)[0]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_symmetry_methods_beat_wyy_femo(k):
    N, eta = FEMO
    wyy = wyy_queries(N, k, 1e-3)[0]
    assert method1_queries(N, eta, k, 1e-3)[0] < wyy
    assert method2_queries(N, eta, k, 1e-3)[0] < wyy


def test_symmetry_methods_beat_shadow_at_k3():
    N, eta = FEMO
    assert method2_queries(N, eta, 3, 1e-3)[0] < shadow_queries(N, 3, 1e-3)
    assert method1_queries(N, eta, 3, 1e-4)[0] < shadow_queries(N, 3, 1e-4)


@pytest.mark.parametrize("method", [Method.QAE, Method.WYY, Method.METHOD1, Method.METHOD2])
def test_heisenberg_limited_methods_double_per_halving(method):
    N, eta = FEMO
    for eps in (1e-2, 1e-3, 1e-4):
        a = run_method(ComplexityParams(N, eta, 1, eps, method))[0]
        b = run_method(ComplexityParams(N, eta, 1, eps / 2, method))[0]
        assert 1.5 <= b / a <= 3


@pytest.mark.parametrize("N", [80, 96, 128, 152])
def test_hubbard_ordering_from_80_modes(N):
    # per-observable QAE with no symmetry reuse stays below method2 at these sizes
    eta = hubbard_filling(N)
    m2 = method2_queries(N, eta, 1, 1e-3)[0]
    qae = qae_queries(N, 1, 1e-3)
    assert qae < m2 < 2.1 * qae
    assert m2 < shadow_queries(N, 1, 1e-3)
    assert m2 < wyy_queries(N, 1, 1e-3)[0]
    assert m2 < method1_queries(N, eta, 1, 1e-3)[0]


def test_delta_schedule_telescopes():
    for q_max in range(0, 16):
        deltas = delta_schedule(q_max)
        assert deltas[-1] == C_DELTA
        assert sum(deltas) <= C_DELTA * 8 / 7
        assert all(b == pytest.approx(8 * a) for a, b in zip(deltas, deltas[1:]))


@pytest.mark.parametrize("N,eta,k", [(152, 113, 1), (152, 113, 2), (80, 70, 1)])
def test_method2_iteration_never_costs_more_than_method1(N, eta, k):
    _, m1 = method1_queries(N, eta, k, 1e-3)
    _, m2 = method2_queries(N, eta, k, 1e-3)
    assert [t.q for t in m1] == [t.q for t in m2]
    for a, b in zip(m1, m2):
        assert 2 * b.Q <= 2 * a.Q * a.R_q


def test_hubbard_80_mode_counts():
    assert qae_queries(80, 1, 1e-3) == 80 * 80 * 4097 == 26_220_800
    assert 52_000_000 < method2_queries(80, hubbard_filling(80), 1, 1e-3)[0] < 53_500_000


# -----------------------
# Sweeps
# -----------------------

def test_eps_sweep_rows_and_columns():
    params = ComplexityParams(20, 10, 1, 1e-2, Method.SHADOW)
    table = complexity_sweep(params, "eps", [1e-3, 1e-2], workers=2)
    assert table.axis == "eps"
    assert [r.axis_value for r in table.rows] == [1e-3, 1e-2]
    assert table.column("shadow") == [shadow_queries(20, 1, 1e-3), shadow_queries(20, 1, 1e-2)]
    assert table.column("method1")[0] == method1_queries(20, 10, 1, 1e-3)[0]


def test_hubbard_sweep_leaves_invalid_cells_empty():
    params = ComplexityParams(8, 7, 1, 1e-2, Method.SHADOW)
    table = complexity_sweep(params, "N", [1, 8, 16], hubbard=True, workers=2)
    assert [r.eta for r in table.rows] == [1, 7, 14]
    assert table.column("method1")[0] is None
    assert table.column("shadow")[0] == shadow_queries(1, 1, 1e-2)
    assert table.column("method2")[2] == method2_queries(16, 14, 1, 1e-2)[0]


def test_sweep_validation():
    params = ComplexityParams(8, 4, 1, 1e-2, Method.SHADOW)
    with pytest.raises(DomainError):
        complexity_sweep(params, "k", [1])
    with pytest.raises(DomainError):
        complexity_sweep(params, "eps", [])
    with pytest.raises(DomainError, match="ascending"):
        complexity_sweep(params, "eps", [1e-2, 1e-3])
    with pytest.raises(DomainError, match="positive integers"):
        complexity_sweep(params, "N", [8, 8.5])
