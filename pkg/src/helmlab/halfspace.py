r"""Fourier-multiplier solutions of ``lambda^2 u - Laplace(u) = 0`` on the half-plane.

The domain is ``{(x1, x2): x2 > 0}`` with boundary ``x2 = 0``; the outward
normal is ``-e2``.  With the unitary transform in ``x1`` the solution is

.. math:: \hat u(\xi, x_2) = m(\xi)\,\hat h(\xi)\,e^{-x_2 s(\xi)},
          \qquad s(\xi) = \sqrt{\lambda^2 + \xi^2}

(principal root), with ``m = -1/s`` for the Neumann datum ``d_2 u = h`` and
``m = 1`` for the Dirichlet datum ``u = g``.  Because the data are given
through closed-form transforms, every norm reduces to a one-dimensional
integral in ``xi``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc, gammaln

from .errors import CapabilityError, InputError, RegimeError, TruncationError
from .frequency import Frequency, Regime, as_frequency
from .quadrature import adaptive_gl, composite_rule


class BC(str, enum.Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


# --------------------------------------------------------------------- profiles


@dataclass(frozen=True)
class Indicator:
    """``h_hat = 1`` on ``[-a, a]``."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise InputError("Indicator needs a > 0")

    def __call__(self, xi):
        return (np.abs(xi) <= self.a).astype(float)

    def support(self):
        return self.a

    def tail(self, x):
        """Fraction of the (1+xi^2)^2-weighted mass outside ``|xi| <= x``."""
        return 0.0 if x >= self.a else 1.0


@dataclass(frozen=True)
class HermiteGaussian:
    """``h_hat = xi^k exp(-sigma^2 xi^2 / 2)``."""

    k: int
    sigma: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise InputError("HermiteGaussian needs an integer k >= 0")
        if not self.sigma > 0:
            raise InputError("profile width sigma must be positive")

    def __call__(self, xi):
        return xi ** self.k * np.exp(-0.5 * (self.sigma * xi) ** 2)

    def support(self):
        # xi^(2k) e^{-sigma^2 xi^2} has dropped by e^{-60} or more past this point
        return (math.sqrt(self.k + 4) + 8.0) / self.sigma

    def _moment(self, j, x):
        # int_x^inf xi^(2j) e^{-sigma^2 xi^2} d xi, in log form
        a = j + 0.5
        return gammaln(a) + np.log(max(gammaincc(a, (self.sigma * x) ** 2), 1e-300)) \
            - (2 * j + 1) * math.log(self.sigma) - math.log(2.0)

    def tail(self, x):
        k = self.k
        full = [self._moment(k + j, 0.0) for j in range(3)]
        part = [self._moment(k + j, x) for j in range(3)]
        c = (1.0, 2.0, 1.0)
        num = sum(ci * math.exp(p) for ci, p in zip(c, part))
        den = sum(ci * math.exp(f) for ci, f in zip(c, full))
        return num / den


class Gaussian(HermiteGaussian):
    """``h_hat = exp(-sigma^2 xi^2 / 2)``."""

    def __init__(self, sigma):
        super().__init__(0, sigma)

    def __repr__(self):
        return f"Gaussian(sigma={self.sigma!r})"


@dataclass(frozen=True)
class LineData:
    """Boundary datum on the line through its transform ``scale * profile(xi)``."""

    profile: object
    scale: float = 1.0

    def hat(self, xi):
        return self.scale * self.profile(np.asarray(xi, dtype=float))

    @property
    def is_zero(self):
        return self.scale == 0


# -------------------------------------------------------------------- solution


@dataclass(frozen=True)
class HalfSpaceSolution:
    lam: Frequency
    data: LineData
    bc: BC
    _lam: complex = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_lam", self.lam.principal)

    def symbol(self, xi):
        """Principal ``sqrt(lambda^2 + xi^2)``; real part is positive."""
        xi = np.asarray(xi, dtype=float)
        lam = self._lam
        if lam.imag == 0.0:
            return np.sqrt(lam.real ** 2 + xi ** 2) + 0j
        return np.sqrt(lam * lam + xi * xi + 0j)

    def multiplier(self, xi):
        if self.bc is BC.NEUMANN:
            return -1.0 / self.symbol(xi)
        return np.ones(np.shape(xi), dtype=complex)

    def u_hat(self, xi, x2=0.0):
        s = self.symbol(xi)
        return self.multiplier(xi) * self.data.hat(xi) * np.exp(-np.asarray(x2) * s)

    def d2_u_hat(self, xi, x2=0.0):
        return -self.symbol(xi) * self.u_hat(xi, x2)

    def boundary_residual(self, xi):
        """Max deviation of the spectral boundary condition at the given ``xi``."""
        target = self.data.hat(xi)
        got = self.d2_u_hat(xi) if self.bc is BC.NEUMANN else self.u_hat(xi)
        return float(np.max(np.abs(got - target), initial=0.0))

    def evaluate(self, x1, x2, nodes=4096):
        """Physical-space value by quadrature of the inverse transform."""
        lim = self.data.profile.support()
        xi, w = composite_rule(_breaks(self, lim), max(1, nodes // 64), 32)
        xi = np.concatenate([-xi[::-1], xi])
        w = np.concatenate([w[::-1], w])
        x1 = np.atleast_1d(np.asarray(x1, dtype=float))
        x2 = np.atleast_1d(np.asarray(x2, dtype=float))
        phase = np.exp(1j * np.multiply.outer(x1, xi))
        vals = self.u_hat(xi[None, :], x2[:, None])
        return (phase[:, None, :] * vals[None, :, :]) @ w / math.sqrt(2 * math.pi)


def solve_halfspace(lam, data: LineData, bc) -> HalfSpaceSolution:
    lam = as_frequency(lam)
    if lam.regime is Regime.ZERO:
        raise RegimeError("the half-plane problem needs lambda != 0")
    return HalfSpaceSolution(lam, data, BC(bc))


# ----------------------------------------------------------------------- norms

CLOSED_FORM_IDS = (
    "L2_Omega", "grad_L2_Omega", "H1_Omega", "trace_L2_Gamma",
    "trace_tangential_L2_Gamma", "normal_deriv_L2_Gamma", "data_L2_Gamma",
    "data_H1_Gamma",
)
ORACLE_IDS = CLOSED_FORM_IDS + ("sqrtd_grad_L2", "sqrtd_hess_L2")


def _breaks(sol, lim):
    lam = sol._lam
    pts = {0.0, lim}
    for p in (abs(lam), 0.25 * abs(lam), 4 * abs(lam)):
        if p < lim:
            pts.add(p)
    if lam.imag != 0.0 and abs(lam.imag) > abs(lam.real):
        # lambda^2 + xi^2 comes closest to 0 at xi = sqrt(b^2 - a^2)
        c = math.sqrt(lam.imag ** 2 - lam.real ** 2)
        for p in c + np.array([-1.0, -0.25, 0.0, 0.25, 1.0]) * abs(lam.real):
            if 0 < p < lim:
                pts.add(float(p))
    return np.array(sorted(pts))


def _weight(sol, norm_id, xi):
    """Integrand in xi (without |h_hat|^2) of the squared norm."""
    s = sol.symbol(xi)
    m2 = np.abs(sol.multiplier(xi)) ** 2
    depth = 1.0 / (2.0 * s.real)  # int_0^inf |e^{-x s}|^2 dx
    if norm_id == "L2_Omega":
        return m2 * depth
    if norm_id == "grad_L2_Omega":
        return (xi ** 2 + np.abs(s) ** 2) * m2 * depth
    if norm_id == "H1_Omega":
        return (1.0 + xi ** 2 + np.abs(s) ** 2) * m2 * depth
    if norm_id == "trace_L2_Gamma":
        return m2
    if norm_id == "trace_tangential_L2_Gamma":
        return xi ** 2 * m2
    if norm_id == "normal_deriv_L2_Gamma":
        if sol.bc is not BC.DIRICHLET:
            raise CapabilityError("normal_deriv_L2_Gamma is the Neumann datum itself")
        return np.abs(s) ** 2
    if norm_id == "data_L2_Gamma":
        return np.ones_like(xi)
    if norm_id == "data_H1_Gamma":
        return 1.0 + xi ** 2
    raise CapabilityError(f"unsupported norm id {norm_id!r}")


def _spectral_integral(sol, weights, rtol):
    """Integrals over the real line of ``weights(xi) * |h_hat|^2`` (even integrands)."""
    lim = sol.data.profile.support()

    def f(xi):
        h2 = np.abs(sol.data.hat(xi)) ** 2
        return np.stack([w * h2 for w in weights(xi)])

    return 2.0 * adaptive_gl(f, _breaks(sol, lim), rtol=rtol)


def closed_form_norm(sol: HalfSpaceSolution, norm_id: str, squared=True, rtol=1e-10):
    """Norm of the solution or the datum from its one-dimensional spectral integral.

    Returns the squared norm unless ``squared=False``.
    """
    _weight(sol, norm_id, np.zeros(1))  # validate id early
    if sol.data.is_zero:
        return 0.0
    val = _spectral_integral(sol, lambda xi: [_weight(sol, norm_id, xi)], rtol)[0]
    val = max(float(val), 0.0)
    return val if squared else math.sqrt(val)


@dataclass(frozen=True)
class Grid:
    """Tensor grid for :func:`grid_norm_oracle`.

    ``xi_max``/``x2_max`` default to the profile support and ``12 / min Re s``;
    ``xi_count`` is the number of Gauss-Legendre panels per base interval in
    ``xi`` and ``x2_count`` the nodes per geometric panel in ``x2``.
    """

    xi_max: float | None = None
    xi_count: int = 16
    x2_max: float | None = None
    x2_count: int = 24


def grid_norm_oracle(sol: HalfSpaceSolution, norm_id: str, grid: Grid = Grid(),
                     squared=True, tol=1e-6):
    """Norm from samples of the transformed solution on a tensor ``(xi, x2)`` grid.

    The depth direction is integrated numerically (no use of the closed-form
    ``x2`` integrals), so this is an independent check of
    :func:`closed_form_norm`.  Raises :class:`TruncationError` when the
    analytic tail bound of the truncated grid exceeds ``tol``.
    """
    if norm_id not in ORACLE_IDS:
        raise CapabilityError(f"unsupported norm id {norm_id!r}")
    if norm_id == "normal_deriv_L2_Gamma" and sol.bc is not BC.DIRICHLET:
        raise CapabilityError("normal_deriv_L2_Gamma is the Neumann datum itself")
    if sol.data.is_zero:
        return 0.0
    prof = sol.data.profile
    xi_max = prof.support() if grid.xi_max is None else grid.xi_max
    bound = prof.tail(xi_max)
    if bound > tol:
        raise TruncationError(f"xi truncation at {xi_max:g} leaves tail {bound:.3g}", bound)

    xi, wx = composite_rule(_breaks(sol, xi_max), grid.xi_count, 32)
    s = sol.symbol(xi)
    h = sol.multiplier(xi) * sol.data.hat(xi)
    boundary = norm_id in ("trace_L2_Gamma", "trace_tangential_L2_Gamma",
                           "normal_deriv_L2_Gamma", "data_L2_Gamma", "data_H1_Gamma")
    if boundary:
        if norm_id == "data_L2_Gamma":
            dens = np.abs(sol.data.hat(xi)) ** 2
        elif norm_id == "data_H1_Gamma":
            dens = (1 + xi ** 2) * np.abs(sol.data.hat(xi)) ** 2
        elif norm_id == "trace_L2_Gamma":
            dens = np.abs(h) ** 2
        elif norm_id == "trace_tangential_L2_Gamma":
            dens = np.abs(1j * xi * h) ** 2
        else:
            dens = np.abs(s * h) ** 2
        val = 2.0 * float(dens @ wx)
        return val if squared else math.sqrt(val)

    rmin, rmax = float(np.min(s.real)), float(np.max(s.real))
    x2_max = 12.0 / rmin if grid.x2_max is None else grid.x2_max
    bound = math.exp(-2.0 * x2_max * rmin)
    if bound > tol:
        raise TruncationError(f"x2 truncation at {x2_max:g} leaves tail {bound:.3g}", bound)
    brk = [0.0]
    b = 0.125 / rmax
    while b < x2_max:
        brk.append(b)
        b *= 2.0
    brk.append(x2_max)
    x2, w2 = composite_rule(np.array(brk), 1, grid.x2_count)

    u = h[:, None] * np.exp(-np.multiply.outer(s, x2))  # (xi, x2)
    a1 = np.abs(xi)[:, None] ** 2
    as2 = (np.abs(s) ** 2)[:, None]
    u2 = np.abs(u) ** 2
    if norm_id == "L2_Omega":
        dens = u2
    elif norm_id == "grad_L2_Omega":
        dens = (a1 + as2) * u2
    elif norm_id == "H1_Omega":
        dens = (1 + a1 + as2) * u2
    elif norm_id == "sqrtd_grad_L2":
        dens = x2[None, :] * (a1 + as2) * u2
    else:  # sqrtd_hess_L2: |d11|^2 + 2|d12|^2 + |d22|^2 = (xi^2 + |s|^2)^2 |u|^2
        dens = x2[None, :] * (a1 + as2) ** 2 * u2
    val = 2.0 * float(wx @ dens @ w2)
    return val if squared else math.sqrt(val)


def trace_identity_check(lam, data: LineData, rtol=1e-12):
    """Relative residual of ``|d2 u|^2_Gamma = lambda^2 |g|^2 + |d1 g|^2`` (Dirichlet)."""
    lam = as_frequency(lam)
    if lam.regime is not Regime.REAL:
        raise RegimeError("trace identity is checked for real lambda only")
    sol = solve_halfspace(lam, data, BC.DIRICHLET)
    if data.is_zero:
        return 0.0
    l2 = sol._lam.real ** 2

    def weights(xi):
        return [np.abs(sol.symbol(xi)) ** 2, l2 + 0 * xi, xi ** 2]

    nd, g2, dg2 = _spectral_integral(sol, weights, rtol)
    return abs(nd - (g2 + dg2)) / nd
