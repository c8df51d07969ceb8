import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from flatheight.algebra import parse
from flatheight.catalog import CATALOG
from flatheight.errors import InsufficientSamples, NoLinearWindow
from flatheight.verify import (
    BumpSpec,
    DecaySamples,
    cone_directions,
    decay_scan,
    eval_oscillatory,
    fit_decay,
    integrability_probe,
    is_super_polynomial,
    sublevel_measure,
)
from flatheight.verify import oscillatory
from flatheight.verify.bump import profile
from flatheight.verify.numeric import NumericPolynomial

BUMP = BumpSpec()
B1 = integrate.quad(profile, -1, 1, epsabs=1e-14, epsrel=1e-13, limit=200)[0]


def riemann(phi, xi, total=10 ** 6):
    """Midpoint sum over the used variables with ``total`` nodes; idle axes get exact factors."""
    used = [i for i in range(3) if phi.uses_variable(i)]
    n = int(round(total ** (1 / len(used))))
    g = np.linspace(-1, 1, n + 1)[1:-1]
    grids = np.meshgrid(*[g] * len(used), indexing="ij")
    X = np.zeros(grids[0].shape + (3,))
    for k, i in enumerate(used):
        X[..., i] = grids[k]
    ph = xi[3] * NumericPolynomial(phi)(X) + sum(xi[i] * X[..., i] for i in used)
    w = np.prod([BUMP.b(X[..., i]) for i in used], axis=0)
    val = np.sum(np.exp(1j * ph) * w) * (2 / n) ** len(used)
    for i in range(3):
        if i not in used:
            val *= BUMP.ft(xi[i])
    return val


def test_bump_integral_matches_adaptive_quadrature():
    assert BUMP.integral_1d == pytest.approx(B1, rel=1e-13)
    assert BumpSpec(2.0).integral_1d == pytest.approx(2 * B1, rel=1e-13)


@pytest.mark.parametrize("k", [0.0, 3.7, 25.0, 120.0])
def test_bump_fourier_table_matches_cosine_quadrature(k):
    ref = 2 * integrate.quad(profile, 0, 1, weight="cos", wvar=k, epsabs=1e-16)[0]
    assert float(BUMP.ft(k)) == pytest.approx(ref, abs=1e-13)


def test_calibration_phi_zero():
    v = eval_oscillatory(parse("x1^2").scale(0), BUMP, (0, 0, 0, 0))
    assert v.value == pytest.approx(B1 ** 3, rel=1e-13)


def test_fresnel_direct_and_parseval_agree(monkeypatch):
    a = np.array([260.0, -300.0, 600.0, 900.0])
    xi = np.array([0.0, 150.0, -700.0, 1500.0])
    s1, amp1 = oscillatory.fresnel_unit(a, xi)
    monkeypatch.setattr(oscillatory, "DIRECT_LIMIT", 1e9)
    monkeypatch.setattr(oscillatory, "_DIRECT_NODES", 2 ** 13)
    s2, amp2 = oscillatory.fresnel_unit(a, xi)
    np.testing.assert_allclose(np.exp(1j * s1) * amp1, np.exp(1j * s2) * amp2, atol=1e-12)


@pytest.mark.parametrize("lam", [64.0, 256.0])
def test_x1_squared_against_1d_brute_force(lam):
    t = np.linspace(-1, 1, 10 ** 6 + 1)[1:-1]
    ref = np.sum(np.exp(1j * lam * t * t) * profile(t)) * (2 / 10 ** 6) * B1 ** 2
    v = eval_oscillatory(parse("x1^2"), BUMP, (0, 0, 0, lam))
    assert abs(v.value - ref) <= 1e-9 * abs(ref)


def test_x1_squared_stationary_phase_constant():
    lam = 2.0 ** 16
    v = eval_oscillatory(parse("x1^2"), BUMP, (0, 0, 0, lam))
    lead = np.sqrt(np.pi / lam) * np.exp(-1) * B1 ** 2
    assert abs(v.value) == pytest.approx(lead, rel=1e-2)


def test_oracle_agreement_on_catalog():
    for e in CATALOG:
        for xi in [(0, 0, 0, 64), (0, 0, 0, 256), (1.5, -2.0, 0.5, 200)]:
            v = eval_oscillatory(e.polynomial, BUMP, xi).value
            ref = riemann(e.polynomial, xi)
            assert abs(v - ref) <= 0.01 * abs(ref), (e.name, xi)


def test_separable_consistency():
    phi = parse("x2^2 - 2*x1^2*x2 + x1^4 + x1^5")
    for xi3 in [0.0, 4.0, 13.0]:
        full = eval_oscillatory(phi, BUMP, (2.0, -1.0, xi3, 150.0)).value
        two = eval_oscillatory(phi, BUMP, (2.0, -1.0, 0.0, 150.0)).value / B1
        assert full == pytest.approx(two * float(BUMP.ft(xi3)), rel=1e-9, abs=1e-15)


def test_tensor_fallback_matches_structured_evaluation():
    phi = parse("x1^2*x2^2")
    xi = (1.0, 2.0, 0.0, 40.0)
    ref = eval_oscillatory(phi, BUMP, xi).value
    got, err, _ = oscillatory.tensor_quadrature(phi, BUMP, xi, tol=1e-6)
    assert abs(got - ref) <= max(err, 1e-6 * abs(ref))


def test_non_stationary_direction_decays_fast():
    s = decay_scan(parse("x1^3"), BUMP, (1, 0, 0, 0), 64, 2 ** 12)
    assert is_super_polynomial(s)


def _synthetic(values_fn, log=False):
    lam = 2.0 ** (6 + np.arange(49) / 4)
    return DecaySamples((0, 0, 0, 1), lam, values_fn(lam).astype(complex), np.zeros(49))


def test_fit_exact_power_law():
    f = fit_decay(_synthetic(lambda l: l ** -0.5))
    assert f.exponent == pytest.approx(-0.5, abs=1e-12)
    assert f.n_points >= 21


def test_fit_log_corrected_power_law():
    s = _synthetic(lambda l: l ** -0.5 * np.log(l))
    assert fit_decay(s, 1).exponent == pytest.approx(-0.5, abs=1e-12)
    assert -0.5 < fit_decay(s, 0).exponent < -0.40


def test_fit_errors():
    with pytest.raises(InsufficientSamples):
        fit_decay(DecaySamples((0, 0, 0, 1), np.arange(1.0, 6.0), np.ones(5, complex), np.zeros(5)))
    rng = np.random.default_rng(0)
    with pytest.raises(NoLinearWindow):
        fit_decay(_synthetic(lambda l: np.exp(rng.normal(size=l.shape) * 3)))


@settings(max_examples=25, deadline=None)
@given(st.floats(-2.0, -0.05), st.floats(0.1, 10.0))
def test_fit_recovers_any_power(a, c):
    assert fit_decay(_synthetic(lambda l: c * l ** a)).exponent == pytest.approx(a, abs=1e-9)


def test_cone_directions_stay_in_cone():
    dirs = cone_directions()
    assert len(dirs) == 8 and len(set(dirs)) == 8
    for d in dirs:
        assert np.linalg.norm(d) == pytest.approx(1.0)
        assert np.linalg.norm(d[:3]) <= 0.1 * d[3]
    assert dirs == cone_directions()


def test_x1_cubed_decay_exponent():
    f = fit_decay(decay_scan(parse("x1^3"), BUMP))
    assert f.exponent == pytest.approx(-1 / 3, abs=0.05)


# ---------------------------------------------------------------- sublevel


def test_slab_measure():
    s = sublevel_measure(parse("x1"), eps_grid=[0.1])
    assert s.measures[0] == pytest.approx(0.8, rel=1e-6)


def test_x1_squared_measure():
    eps = np.array([1e-6, 1e-4, 1e-2])
    s = sublevel_measure(parse("x1^2"), eps_grid=eps)
    np.testing.assert_allclose(s.measures, 8 * np.sqrt(eps), rtol=1e-3)
    assert s.accepted.all()


def test_x1x2_squared_measure_iterated_integral():
    eps = np.array([1e-5, 1e-3, 1e-1])
    r = np.sqrt(eps)
    exact = 2 * 4 * r * (1 + np.log(1 / r))
    s = sublevel_measure(parse("x1^2*x2^2"), eps_grid=eps, seed=3)
    np.testing.assert_allclose(s.measures, exact, rtol=5e-3)
    assert np.all(np.abs(s.measures - exact) <= 2 * s.half_widths + 1e-3 * exact)


def test_sublevel_monotone_bounded_deterministic():
    phi = parse("x1^3 + x1^2*x2 + x1^4*x3")
    a = sublevel_measure(phi, seed=7)
    b = sublevel_measure(phi, seed=7)
    assert np.array_equal(a.measures, b.measures) and np.array_equal(a.half_widths, b.half_widths)
    assert np.all(np.diff(a.measures) >= 0)
    assert np.all(a.measures <= a.box_volume)


@pytest.mark.parametrize("text,p,h,nu,expected", [
    ("x1^2*x2^2", 3.0, 2, 1, "converges"),
    ("x1^2*x2^2", 1.5, 2, 1, "diverges"),
    ("x1^4", 5.0, 4, 0, "converges"),
])
def test_integrability_probe_examples(text, p, h, nu, expected):
    v, _ = integrability_probe(parse(text), p, h=h, nu=nu)
    assert v.verdict == expected


def test_integrability_boundary_is_flagged():
    v, _ = integrability_probe(parse("x1^4"), 4.0, h=4)
    assert v.boundary and v.verdict in ("inconclusive", "diverges")
    v, _ = integrability_probe(parse("x1^2*x2^2"), 2.0, h=2, nu=1)
    assert v.boundary and v.verdict in ("inconclusive", "diverges")
