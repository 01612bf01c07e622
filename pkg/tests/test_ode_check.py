import math

import numpy as np
import pytest

from nonlocal_lab import ode_check
from nonlocal_lab.errors import DomainError

PI_2_3 = 2.804364210650908506050077181


def test_linear_mode_is_sine():
    sol = ode_check.build_eigenfunction(1, 0.0, 1.0, 256)
    np.testing.assert_allclose(sol.values, np.sin(math.pi * sol.x), atol=1e-12)


def test_second_mode_has_one_interior_zero():
    sol = ode_check.build_eigenfunction(2, 0.0, 1.0, 257)
    inner = sol.values[1:-1]
    assert np.count_nonzero(np.diff(np.sign(inner[np.abs(inner) > 1e-12]))) == 1
    assert abs(sol.values[128]) <= 1e-12 and sol.x[128] == 0.5


def test_peak_equals_amplitude_at_midpoint():
    sol = ode_check.build_eigenfunction(1, 1.0, 1.0, 257)
    assert sol.values[128] == pytest.approx(1.0, abs=1e-12)
    assert np.argmax(sol.values) == 128
    sol3 = ode_check.build_eigenfunction(1, 1.0, 3.0, 257)
    assert np.max(sol3.values) == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
@pytest.mark.parametrize("eps", [-0.5, 0.0, 0.5, 1.0, 4.0])
def test_dirichlet(n, eps):
    sol = ode_check.build_eigenfunction(n, eps, 1.0, 300)
    assert abs(sol.values[0]) <= 1e-10 and abs(sol.values[-1]) <= 1e-10


def test_coupling_values():
    assert ode_check.coupling_for(1, 0.0, 1.0) == pytest.approx(math.pi ** 2, rel=1e-15)
    assert ode_check.coupling_for(1, 1.0, 1.0) == pytest.approx(PI_2_3 ** 2 * 1.5, rel=1e-14)
    assert ode_check.coupling_for(1, 1.0, 2.0) == pytest.approx(
        ode_check.coupling_for(1, 1.0, 1.0) / 2, rel=1e-15)
    assert ode_check.coupling_for(3, 0.0) == pytest.approx(9 * math.pi ** 2)


def test_printed_coupling_differs_from_derived():
    assert ode_check.printed_coupling(1, 0.0) == pytest.approx(math.pi ** 4)
    sol = ode_check.build_eigenfunction(1, 0.0, 1.0, 1024)
    bad = ode_check.residual(sol, ode_check.printed_coupling(1, 0.0))
    good = ode_check.residual(sol, ode_check.coupling_for(1, 0.0))
    assert bad.l_inf > 1e4 * good.l_inf


def test_linear_residual_quarters_on_doubling():
    reps = ode_check.doubling_study(1, 0.0, sizes=(256, 512))
    ratio = reps[0].l_inf / reps[1].l_inf
    assert 3.8 <= ratio <= 4.2


def test_eps1_residual_small_at_4096():
    sol = ode_check.build_eigenfunction(1, 1.0, 1.0, 4096)
    rep = ode_check.residual(sol, ode_check.coupling_for(1, 1.0))
    assert rep.l_inf <= 1e-4
    assert rep.grid_size == 4096 and rep.excluded == 0


def test_wrong_coupling_stalls():
    reps = ode_check.doubling_study(1, 1.0, sizes=(256, 512, 1024, 2048),
                                    coupling_scale=1.1)
    l_inf = [r.l_inf for r in reps]
    assert min(l_inf) > 0.5
    assert l_inf[-1] > 0.9 * l_inf[0]


@pytest.mark.parametrize("eps", [0.0, 1.0, 2.0])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_second_order_for_even_power_nonlinearity(n, eps):
    reps = ode_check.doubling_study(n, eps, sizes=(256, 512, 1024, 2048))
    orders = ode_check.convergence_orders([r.l_inf for r in reps])
    assert np.all((orders >= 1.7) & (orders <= 2.3))


def test_fractional_eps_is_second_order_in_l2():
    # |phi|**0.5 phi puts an x**3.5 term at every node; L2 still converges at ~2
    reps = ode_check.doubling_study(1, 0.5, sizes=(256, 512, 1024, 2048))
    orders = ode_check.convergence_orders([r.l2 for r in reps])
    assert np.all((orders >= 1.7) & (orders <= 2.3))


@pytest.mark.parametrize("eps", [0.5, 1.0, 2.0])
def test_residual_scale_vs_linear_baseline(eps):
    base = ode_check.doubling_study(1, 0.0, sizes=(256,))[0].l_inf
    other = ode_check.doubling_study(1, eps, sizes=(256,))[0].l_inf
    assert other <= 10 * base


def test_negative_eps_excludes_nodes():
    sol = ode_check.build_eigenfunction(2, -0.5, 1.0, 257)
    rep = ode_check.residual(sol, ode_check.coupling_for(2, -0.5))
    assert rep.excluded == 1  # the midpoint node; ends are not interior
    assert math.isfinite(rep.l_inf) and math.isfinite(rep.l2)


def test_norms_nonnegative():
    sol = ode_check.build_eigenfunction(1, 0.3, 1.0, 128)
    rep = ode_check.residual(sol, 0.0)
    assert rep.l_inf >= 0 and rep.l2 >= 0


@pytest.mark.parametrize("args", [(0, 0.0, 1.0, 128), (1, 0.0, -1.0, 128),
                                  (1, -1.0, 1.0, 128), (1, 0.0, 1.0, 32),
                                  (1.5, 0.0, 1.0, 128)])
def test_domain_errors(args):
    with pytest.raises(DomainError):
        ode_check.build_eigenfunction(*args)
