from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from fracdiff.coefficients import (
    SingularOrderError,
    assemble_riesz_operator,
    caputo_weights,
    gamma_fn,
    kappa,
    left_rl_matrix,
    left_rl_row,
    right_rl_matrix,
    right_rl_row,
    riesz_matrix,
    riesz_row,
)

SUPER_ORDERS = (1.1, 1.2, 1.5, 1.8, 1.9)
SIZES = (5, 9, 17)


# {{{ gamma


def test_gamma_trivial_values():
    assert gamma_fn(1.0) == pytest.approx(1.0, rel=1e-15)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)


def test_gamma_against_mpmath():
    mpmath.mp.dps = 50
    ref = float(mpmath.gamma(mpmath.mpf("2.8")))
    assert abs(gamma_fn(2.8) - ref) / ref < 1e-13
    for z in np.linspace(0.05, 20.0, 137):
        ref = float(mpmath.gamma(mpmath.mpf(float(z))))
        assert abs(gamma_fn(float(z)) - ref) / ref < 1e-13, z


@pytest.mark.parametrize("z", [0.0, -1.0, -0.5])
def test_gamma_domain(z):
    with pytest.raises(ValueError):
        gamma_fn(z)


# }}}


# {{{ caputo weights


def test_caputo_examples():
    assert caputo_weights(0.5, 3)[0] == 1.0
    assert caputo_weights(0.5, 3)[1] == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    w = caputo_weights(1.0, 6).weights
    assert w[0] == 1.0
    assert np.all(w[1:] == 0.0)


@pytest.mark.parametrize("gamma", [0.0, -0.2, 1.5])
def test_caputo_domain(gamma):
    with pytest.raises(ValueError):
        caputo_weights(gamma, 4)


@pytest.mark.parametrize("gamma", [0.1, 0.5, 0.9, 1.0])
def test_caputo_weight_properties(gamma):
    K = 10_000
    l = caputo_weights(gamma, K).weights
    assert len(l) == K + 1
    assert l[0] == 1.0
    if gamma < 1.0:
        assert np.all(l > 0)
        assert np.all(np.diff(l) < 0)
        # l_k = (1-gamma) xi^(-gamma) for some xi in (k, k+1), which brackets
        # l_k k^gamma between (1-gamma) 2^(-gamma) and 1-gamma
        k = np.arange(1, K + 1)
        scaled = l[1:] * k**gamma
        assert np.all(scaled >= (1 - gamma) * 2**-gamma)
        assert np.all(scaled <= 1 - gamma)
    # telescoping partition (1 - l1) + sum_{s=1}^{k-1} (l_s - l_{s+1}) + l_k = 1
    diffs = np.concatenate([[0.0], np.cumsum(l[1:-1] - l[2:])])
    for k in range(1, K + 1, 97):
        total = (1.0 - l[1]) + diffs[k - 1] + l[k]
        assert abs(total - 1.0) < 1e-12


# }}}


def test_kappa_values():
    assert kappa(2.0) == pytest.approx(-0.5, abs=1e-15)
    assert kappa(1.5) == pytest.approx(-1 / math.sqrt(2), rel=1e-14)
    assert kappa(0.5) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
    with pytest.raises(SingularOrderError):
        kappa(1.0)
    with pytest.raises(SingularOrderError):
        kappa(1.0 + 1e-10)


# {{{ rl rows


@pytest.mark.parametrize("nu", SUPER_ORDERS + (2.0,))
@pytest.mark.parametrize("N", SIZES)
def test_rl_row_anchor_entries(nu, N):
    for i in range(1, N):
        p = left_rl_row(nu, i, N)
        q = right_rl_row(nu, i, N)
        assert p[i + 1] == pytest.approx(1.0, abs=1e-14)
        assert q[i - 1] == pytest.approx(1.0, abs=1e-14)
        assert p[i] == pytest.approx(2 ** (3 - nu) - 4, abs=1e-13)
        assert q[i] == pytest.approx(2 ** (3 - nu) - 4, abs=1e-13)
        assert np.all(p[i + 2:] == 0.0)
        assert np.all(q[: max(i - 1, 0)] == 0.0)


def test_rl_far_entries_vanish_at_two():
    N = 12
    for i in range(1, N):
        p = left_rl_row(2.0, i, N)
        q = right_rl_row(2.0, i, N)
        assert np.all(np.abs(p[: max(i - 1, 0)]) < 1e-13)
        assert np.all(np.abs(q[i + 2:]) < 1e-13)


@pytest.mark.parametrize("nu", (0.3, 0.7) + SUPER_ORDERS)
@pytest.mark.parametrize("N", (3, 4, 7, 10))
def test_reflection(nu, N):
    for i in range(1, N):
        p = left_rl_row(nu, N - i, N)
        q = right_rl_row(nu, i, N)
        for m in range(N + 1):
            assert q[m] == pytest.approx(p[N - m], abs=1e-13)


@pytest.mark.parametrize("nu", (0.5,) + SUPER_ORDERS + (2.0,))
@pytest.mark.parametrize("N", SIZES)
def test_transpose_identity(nu, N):
    P = left_rl_matrix(nu, N)[1:N, 1:N]
    Q = right_rl_matrix(nu, N)[1:N, 1:N]
    assert np.max(np.abs(P - Q.T)) <= 1e-13


def test_row_index_errors():
    with pytest.raises(IndexError):
        left_rl_row(1.5, 0, 8)
    with pytest.raises(IndexError):
        right_rl_row(1.5, 8, 8)
    with pytest.raises(ValueError):
        riesz_row(1.5, 1, 2)


# }}}


# {{{ riesz rows and operator


@pytest.mark.parametrize("nu", SUPER_ORDERS)
@pytest.mark.parametrize("N", SIZES)
def test_riesz_sign_structure(nu, N):
    for i in range(1, N):
        g = riesz_row(nu, i, N).weights
        assert g[i] == pytest.approx(2 ** (4 - nu) - 8, abs=1e-13)
        assert g[i] < 0
        off = np.delete(g, i)
        assert np.all(off > 0)
        assert g.sum() < 0
        # rows next to the boundary pick up the endpoint branch of the tables
        if 2 <= i <= N - 2:
            nb = 7 - 2 ** (5 - nu) + 3 ** (3 - nu)
            assert g[i - 1] == pytest.approx(nb, abs=1e-13)
            assert g[i + 1] == pytest.approx(nb, abs=1e-13)


@pytest.mark.parametrize("N", SIZES)
def test_riesz_row_sum_at_two(N):
    for i in range(1, N):
        assert riesz_row(2.0, i, N).weights.sum() <= 1e-13


def test_riesz_row_sum_negative_nu15():
    for i in range(1, 10):
        assert riesz_row(1.5, i, 10).weights.sum() < 0


def test_riesz_row_at_two_is_classical():
    N = 10
    for i in range(1, N):
        expected = np.zeros(N + 1)
        expected[i - 1:i + 2] = (2.0, -4.0, 2.0)
        assert np.max(np.abs(riesz_row(2.0, i, N).weights - expected)) < 1e-12


@pytest.mark.parametrize("N", (4, 8, 33))
def test_operator_classical_limit(N):
    h = 1.0 / N
    D = assemble_riesz_operator(2.0, N, h).matrix
    L = np.zeros((N + 1, N + 1))
    for i in range(1, N):
        L[i, i - 1:i + 2] = np.array([1.0, -2.0, 1.0]) / h**2
    assert np.max(np.abs(D - L)) <= 1e-12 * np.max(np.abs(L))


def test_operator_small_example():
    D = assemble_riesz_operator(2.0, 4, 0.25).matrix
    assert np.allclose(D[2], [0, 16, -32, 16, 0], rtol=1e-12, atol=1e-12)
    assert np.all(D[0] == 0) and np.all(D[-1] == 0)
    assert np.all(assemble_riesz_operator(1.5, 6, 1 / 6).apply(np.zeros(7)) == 0)


def test_riesz_matrix_is_read_only():
    G = riesz_matrix(1.5, 6)
    with pytest.raises(ValueError):
        G[1, 1] = 0.0


def _riesz_of_quartic(x, nu):
    # power rule for left/right RL derivatives of x^2 - 2x^3 + x^4 on [0, 1]
    def one_sided(z):
        return (2 / math.gamma(3 - nu) * z ** (2 - nu)
                - 12 / math.gamma(4 - nu) * z ** (3 - nu)
                + 24 / math.gamma(5 - nu) * z ** (4 - nu))
    return -(one_sided(x) + one_sided(1 - x)) / (2 * math.cos(nu * math.pi / 2))


@pytest.mark.parametrize("nu", [1.2, 1.5, 1.8])
def test_operator_second_order_consistency(nu):
    # z^(2-nu) terms limit the rate near the endpoints, so measure on [1/4, 3/4]
    errors = []
    for N in (32, 64, 128, 256):
        x = np.linspace(0.0, 1.0, N + 1)
        op = assemble_riesz_operator(nu, N, 1.0 / N)
        r = op.apply(x**2 * (1 - x) ** 2) - _riesz_of_quartic(x, nu)
        window = slice(N // 4, 3 * N // 4 + 1)
        errors.append(np.max(np.abs(r[window])))
    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(np.abs(rates - 2.0) < 0.1), rates


# }}}


@pytest.mark.parametrize("nu", [0.4, 1.1, 1.5, 1.9])
def test_left_rows_exact_for_linear_data(nu):
    # linear u is its own interpolant, so the left rows reduce to the second
    # difference of the exact fractional integral of order 2 - nu
    N, h = 8, 0.125
    beta = 2.0 - nu
    x = np.linspace(0.0, 1.0, N + 1)
    u = 1.0 + x
    F = x**beta / math.gamma(beta + 1) + x ** (beta + 1) / math.gamma(beta + 2)
    discrete = left_rl_matrix(nu, N) @ u / (math.gamma(4 - nu) * h**nu)
    second_diff = (F[:-2] - 2 * F[1:-1] + F[2:]) / h**2
    assert np.allclose(discrete[1:-1], second_diff, rtol=1e-12, atol=1e-12)
