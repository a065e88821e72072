import math

import pytest

import shelab


def test_simple_walk_and_viscosity():
    w = shelab.make_simple_walk()
    assert w.alpha == 2.0
    assert w.nu == pytest.approx(0.5)
    assert w.total_mass() == pytest.approx(1.0, abs=1e-15)
    rep = shelab.verify_assumption(w)
    assert rep.nu_hat == pytest.approx(0.5, rel=1e-4)


def test_heavy_tail_viscosity_closed_form():
    alpha = 1.5
    w = shelab.make_stable_tail_walk(alpha, 512, 1024)
    zeta = sum(k ** -(alpha + 1) for k in range(1, 200000)) + 200000 ** -alpha / alpha
    closed = math.pi / (2 * zeta * math.gamma(alpha + 1) * math.sin(math.pi * alpha / 2))
    assert w.nu == pytest.approx(closed, rel=1e-8)


def test_return_probability_matches_bessel_series():
    p = shelab.discrete_transition(shelab.make_simple_walk(), 1.0, 1.0, 1024)
    i0 = sum(0.25 ** k / math.factorial(k) ** 2 for k in range(30))
    assert p[0] == pytest.approx(math.exp(-1.0) * i0, abs=1e-12)


def test_gaussian_density():
    k = shelab.StableKernel(2.0, 0.5)
    for x in (0.0, 0.3, 1.7):
        g = math.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi)
        assert shelab.stable_density(k, 1.0, x) == pytest.approx(g, abs=1e-12)


def test_noise_is_deterministic():
    a = shelab.standard_normal(7, 3, 11, 5)
    b = shelab.standard_normal(7, 3, 11, 5)
    assert a == b
    assert a != shelab.standard_normal(7, 3, 12, 5)


def test_simulate_zero_sigma_keeps_ones():
    c = shelab.SheConfig()
    c.eps = 0.1
    c.T = 0.1
    c.sigma = shelab.SigmaSpec(shelab.SigmaKind.linear, 0.0)
    r = shelab.simulate(c)
    assert set(r.field) == {1.0}


def test_simulate_is_reproducible():
    c = shelab.SheConfig()
    c.eps = 0.1
    c.T = 0.05
    c.seed = 42
    assert shelab.simulate(c).field == shelab.simulate(c).field


def test_oracle_matches_closed_form():
    o = shelab.pam_second_moment_oracle(0.5, 1.0, 2.0)
    a = 1.0 / math.sqrt(8 * 0.5)
    exact = math.exp(a * a) * (1 + math.erf(a))
    assert o(1.0) == pytest.approx(exact, rel=1e-5)
    assert shelab.lyapunov_lower_bound(shelab.SigmaSpec(shelab.SigmaKind.linear, 1.0), 2, 0.5) == 0.25
    assert shelab.lyapunov_upper_bound(shelab.SigmaSpec(shelab.SigmaKind.linear, 1.0), 2, 0.5) == 16.0


def test_config_round_trip_and_errors():
    text = shelab.parse_config("eps = 0.1\nsigma.kind = abs_linear\n")
    assert "sigma.kind = \"abs_linear\"" in text
    assert shelab.parse_config(text) == text
    with pytest.raises(ValueError):
        shelab.parse_config("epsilon = 0.1\n")


def test_cli_run_kernel_check(tmp_path):
    out = tmp_path / "kc"
    status, log = shelab.run("kernel-check", f'out = "{out}"\nkernel.alpha = [2]\nkernel.nu = [0.5]\n')
    assert status == 0, log
    assert (out / "summary.txt").exists()
    assert (out / "kernel_check.csv").read_text().startswith("alpha,nu,t")
