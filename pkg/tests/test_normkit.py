import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from helmlab import diskmodal as dm
from helmlab import normkit as nk
from helmlab.diskmodal import CircleData, ModalField, ModalSource
from helmlab.errors import CapabilityError, InputError

PI = math.pi


def harmonic(n):
    """``z^n = r^n e^{i n theta}`` as the lambda = 0 Dirichlet solution."""
    return dm.solve_dirichlet_disk(0.0, CircleData.from_modes({n: 1.0}))


def random_data(seed, nmax=10):
    rng = np.random.default_rng(seed)
    return CircleData(rng.normal(size=2 * nmax + 1) + 1j * rng.normal(size=2 * nmax + 1))


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------- interior


def test_linear_mode_examples():
    u = harmonic(1)
    assert rel(nk.interior_norm(u, "L2_Omega"), math.sqrt(PI / 2)) < 1e-13
    assert rel(nk.interior_norm(u, "grad_L2_Omega") ** 2, 2 * PI) < 1e-13
    assert nk.interior_norm(u, "sqrtd_hess_L2") < 1e-10


def test_zero_field_gives_zeros():
    rep = nk.norm_report(ModalField(2.0))
    assert all(v == 0 for v in rep.values.values())


@pytest.mark.parametrize("n", [2, 3, 7, 30, 100])
def test_harmonic_monomials(n):
    u = harmonic(n)
    q = nk.radial_integrals(u)
    assert rel(q["L2"], PI / (n + 1)) < 1e-10
    assert rel(q["grad"], 2 * PI * n) < 1e-10
    assert q["lap"] < 1e-18 * q["grad"] * n ** 2
    # |D^2 z^n|^2 = 4 n^2 (n-1)^2 r^(2n-4)
    assert rel(q["sqrtd_hess"], 4 * PI * n * n * (n - 1) / (2 * n - 1)) < 1e-9
    # |grad z^n|^2 = 2 n^2 r^(2n-2), weighted by 1 - r
    assert rel(q["sqrtd_grad"], 4 * PI * n * n * (1 / (2 * n) - 1 / (2 * n + 1))) < 1e-10


@pytest.mark.parametrize("lam", [0.5, 8.0, 150.0])
@pytest.mark.parametrize("n", [0, 3, 40])
def test_bessel_mode_against_scipy(lam, n):
    u = dm.solve_dirichlet_disk(lam, CircleData.from_modes({n: 1.0}))

    def R(r):
        return special.ive(n, lam * r) / special.ive(n, lam) * math.exp(lam * (r - 1))

    def dR(r):
        return lam * special.ivp(n, lam * r) / special.iv(n, lam) if lam < 100 else \
            lam * 0.5 * (special.ive(n - 1, lam * r) + special.ive(n + 1, lam * r)) \
            / special.ive(n, lam) * math.exp(lam * (r - 1))

    pts = [1 - 10 / lam] if lam > 10 else None
    l2, _ = integrate.quad(lambda r: R(r) ** 2 * r, 0, 1, epsrel=1e-12, points=pts, limit=200)
    gr, _ = integrate.quad(lambda r: (dR(r) ** 2 + (n * R(r) / r) ** 2 if r > 0 else dR(r) ** 2) * r,
                           0, 1, epsrel=1e-12, points=pts, limit=200)
    q = nk.radial_integrals(u)
    assert rel(q["L2"], 2 * PI * l2) < 1e-9
    assert rel(q["grad"], 2 * PI * gr) < 1e-9
    # homogeneous solution: Laplace u = lambda^2 u
    assert rel(q["lap"], lam ** 4 * q["L2"]) < 1e-9


def cartesian_hessian_density(u, x, y, h=1e-3):
    """``|D^2 u|^2`` from fourth-order central differences in x and y."""
    def f(a, b):
        return u.evaluate(np.hypot(a, b), np.arctan2(b, a))

    c = np.array([-1, 16, -30, 16, -1]) / (12 * h * h)
    s = np.arange(-2, 3) * h
    uxx = sum(ci * f(x + si, y) for ci, si in zip(c, s))
    uyy = sum(ci * f(x, y + si) for ci, si in zip(c, s))
    d = np.array([1, -8, 0, 8, -1]) / (12 * h)
    uxy = sum(di * dj * f(x + si, y + sj) for di, si in zip(d, s) for dj, sj in zip(d, s))
    return np.abs(uxx) ** 2 + 2 * np.abs(uxy) ** 2 + np.abs(uyy) ** 2


def test_polar_hessian_frame_matches_cartesian():
    u = dm.solve_neumann_disk(3.0, CircleData.from_modes({2: 1.0, -1: 0.5j, 0: 0.3}))
    r, t = np.meshgrid(np.linspace(0.2, 0.9, 5), np.linspace(0, 2 * PI, 7, endpoint=False))
    r, t = r.ravel(), t.ravel()
    fd = cartesian_hessian_density(u, r * np.cos(t), r * np.sin(t))
    # the same density from the polar frame, summed over the modal cross terms
    hrr = u.evaluate(r, t, "u_rr")
    ur, ut = u.evaluate(r, t, "u_r"), u.evaluate(r, t, "u_theta")
    urt, utt = u.evaluate(r, t, "u_rtheta"), u.evaluate(r, t, "u_thetatheta")
    hrt = urt / r - ut / r ** 2
    htt = ur / r + utt / r ** 2
    polar = np.abs(hrr) ** 2 + 2 * np.abs(hrt) ** 2 + np.abs(htt) ** 2
    assert np.max(np.abs(fd - polar) / polar) < 1e-6


def test_weighted_hessian_of_bessel_mode_by_grid():
    u = dm.solve_dirichlet_disk(4.0, CircleData.from_modes({3: 1.0}))
    xr, wr = np.polynomial.legendre.leggauss(40)
    r, wr = 0.5 * (xr + 1), 0.5 * wr
    theta = np.linspace(0, 2 * PI, 8, endpoint=False)
    dens = np.array([cartesian_hessian_density(u, ri * np.cos(theta), ri * np.sin(theta)).mean()
                     for ri in r])
    grid = 2 * PI * np.sum(wr * dens * (1 - r) * r)
    assert rel(nk.interior_norm(u, "sqrtd_hess_L2") ** 2, grid) < 1e-6


def test_modes_are_orthogonal():
    a = harmonic(2)
    both = dm.solve_dirichlet_disk(0.0, CircleData.from_modes({2: 1.0, 5: 1.0}))
    assert rel(nk.interior_norm(both, "L2_Omega") ** 2,
               nk.interior_norm(a, "L2_Omega") ** 2 + PI / 6) < 1e-12


def test_source_field_norms():
    sol = dm.solve_source_disk(3.0, ModalSource(0), "neumann")  # w = 1/9
    assert rel(nk.interior_norm(sol, "L2_Omega"), math.sqrt(PI) / 9) < 1e-12
    assert nk.interior_norm(sol, "grad_L2_Omega") < 1e-12
    l2, wl2 = nk.source_norms(sol)
    assert rel(l2, math.sqrt(PI)) < 1e-14 and rel(wl2, math.sqrt(PI / 3)) < 1e-14


def test_unknown_interior_id():
    with pytest.raises(CapabilityError):
        nk.interior_norm(harmonic(1), "H2_Omega")


# ---------------------------------------------------------------- surrogates


def constant():
    return dm.solve_dirichlet_disk(0.0, CircleData.from_modes({0: 1.0}))


def test_surrogate_examples():
    assert rel(nk.surrogate_h32(constant()), math.sqrt(PI) + math.sqrt(2 * PI)) < 1e-13
    assert nk.surrogate_h32(ModalField(0.0)) == 0
    assert rel(nk.surrogate_h32(harmonic(1)),
               math.sqrt(PI / 2 + 2 * PI) + math.sqrt(4 * PI)) < 1e-12
    assert rel(nk.surrogate_h12(constant()), math.sqrt(PI)) < 1e-13
    assert nk.surrogate_h12(ModalField(1.0)) == 0
    assert rel(nk.surrogate_h12(harmonic(1)),
               (math.sqrt(PI / 2) * math.sqrt(PI / 2 + 2 * PI)) ** 0.5) < 1e-12


def test_surrogate_hs_endpoints_and_order():
    u = dm.solve_neumann_disk(5.0, random_data(1, 6))
    l2 = nk.interior_norm(u, "L2_Omega")
    h1 = nk.interior_norm(u, "H1_Omega")
    assert rel(nk.surrogate_hs(u, 0.0), l2) < 1e-14
    assert rel(nk.surrogate_hs(u, 1.0), h1) < 1e-14
    assert rel(nk.surrogate_hs(u, 1.5), nk.surrogate_h32(u)) < 1e-14
    vals = [nk.surrogate_hs(u, s) for s in np.linspace(0, 1.5, 7)]
    assert all(a <= b * (1 + 1e-14) for a, b in zip(vals, vals[1:]))
    with pytest.raises(InputError):
        nk.surrogate_hs(u, 2.0)


# ---------------------------------------------------------------- boundary


def test_boundary_examples():
    g = CircleData.from_modes({3: 1.0})
    assert rel(nk.boundary_norm(g, 1.0), math.sqrt(20 * PI)) < 1e-15
    assert rel(nk.boundary_norm(g, 0.0), math.sqrt(2 * PI)) < 1e-15
    assert rel(nk.boundary_norm(g, -1.0), math.sqrt(2 * PI / 10)) < 1e-15


def test_triple_and_dual_norms():
    g = CircleData.from_modes({3: 1.0})
    lam = 4.0
    assert rel(nk.boundary_norm(g, 1, lam), lam * math.sqrt(2 * PI) + math.sqrt(20 * PI)) < 1e-15
    assert rel(nk.boundary_norm(g, -1, lam), math.sqrt(2 * PI) / (lam + math.sqrt(10))) < 1e-15
    with pytest.raises(InputError):
        nk.boundary_norm(g, 0.5, lam)
    with pytest.raises(InputError):
        nk.boundary_norm(g, 2.0)


@pytest.mark.parametrize("seed", range(5))
def test_parseval(seed):
    g = random_data(seed, 20)
    assert rel(nk.boundary_norm(g, 0.0), nk.boundary_quadrature_l2(g)) < 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6), lam=st.floats(0.0, 1e3),
       s1=st.floats(-1.5, 1.5), s2=st.floats(-1.5, 1.5))
def test_duality_and_monotonicity(seed, lam, s1, s2):
    phi, g = random_data(seed), random_data(seed + 1)
    pair = abs(phi.pairing(g))
    assert pair <= nk.boundary_norm(phi, -1, lam) * nk.boundary_norm(g, 1, lam) * (1 + 1e-9)
    lo, hi = sorted((s1, s2))
    assert nk.boundary_norm(g, lo) <= nk.boundary_norm(g, hi) * (1 + 1e-14)


def test_norm_report_orderings():
    u = dm.solve_dirichlet_disk(2.0 + 1j, random_data(3, 8))
    rep = nk.norm_report(u)
    assert all(v >= 0 for v in rep.values.values())
    assert rep["L2_Omega"] <= rep["H1_Omega"]
    assert rep["L2_Gamma"] <= rep["H1_Gamma"]
    assert rel(rep["L2_Gamma"], nk.boundary_norm(random_data(3, 8), 0.0)) < 1e-12
    sub = nk.norm_report(u, ids=["L2_Omega", "normal_deriv_L2_Gamma"])
    assert set(sub.values) == {"L2_Omega", "normal_deriv_L2_Gamma"}


@pytest.mark.parametrize("n", [1, 4, 32, 128])
def test_interior_trace_comparison(n):
    # for z^n: ||u||_{H1}^2 = pi/(n+1) + 2 pi n, ||u||_{H1(Gamma)}^2 = 2 pi (1 + n^2)
    u = harmonic(n)
    h1 = nk.interior_norm(u, "H1_Omega")
    tr = nk.boundary_norm(u.trace(), 1.0)
    assert rel(h1 ** 2, PI / (n + 1) + 2 * PI * n) < 1e-10
    assert rel(tr ** 2, 2 * PI * (1 + n * n)) < 1e-13
