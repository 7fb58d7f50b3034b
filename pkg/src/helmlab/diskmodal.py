r"""Modal solutions of ``lambda^2 u - Laplace(u) = F`` on the unit disk.

Every field is a finite sum ``u(r, theta) = sum_n R_n(r) exp(i n theta)``.  A
radial profile ``R_n`` is a sum of components that can each return
``(R, R', R'')`` at an array of radii:

* :class:`Poly` for polynomials in ``r`` (harmonic modes ``r^|n|`` at
  ``lambda = 0`` and hand-built test fields),
* :class:`BesselRatio` for ``I_m(lambda r) / I_m(lambda)``,
* :class:`SourceParticular` for the regular particular solution of a
  polynomial source, built with the Green kernel ``I_m(lambda r<) K_m(lambda r>)``.

All Bessel quantities go through log forms, so the profiles stay finite for
``|lambda|`` up to ``1e3`` and orders up to the coefficient limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import CompatibilityError, InputError, RegimeError, CapabilityError
from .frequency import Frequency, Regime, as_frequency
from .quadrature import adaptive_gl, graded_breaks

N_MAX = 128
MAX_SOURCE_DEGREE = 16
LAMBDA0 = 0.1
_NEGLIGIBLE = 1e-280


# ------------------------------------------------------------------ boundary data


class CircleData:
    """Finite Fourier series ``g(theta) = sum_{|n| <= N} g_n exp(i n theta)``."""

    def __init__(self, coefficients, nmax=None):
        c = np.asarray(coefficients, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise InputError("coefficients must be a 1-d array of odd length (modes -N..N)")
        if not np.all(np.isfinite(c)):
            raise InputError("non-finite coefficient")
        n = c.size // 2
        if nmax is not None:
            if nmax < n:
                raise InputError("nmax smaller than the supplied coefficients")
            c = np.pad(c, nmax - n)
            n = nmax
        if n > N_MAX:
            raise InputError(f"at most {N_MAX} modes on each side are supported")
        self.coefficients = c
        self.nmax = n

    @classmethod
    def from_modes(cls, modes: dict, nmax=None):
        """Build from ``{n: g_n}``."""
        top = max((abs(int(k)) for k in modes), default=0)
        c = np.zeros(2 * top + 1, dtype=complex)
        for k, v in modes.items():
            c[int(k) + top] += v
        return cls(c, nmax)

    @classmethod
    def from_samples(cls, values, nmax):
        """Trigonometric interpolant of equispaced samples on ``[0, 2 pi)``."""
        v = np.asarray(values, dtype=complex)
        if v.size < 2 * nmax + 1:
            raise InputError("need at least 2 nmax + 1 samples")
        f = np.fft.fft(v) / v.size
        idx = np.arange(-nmax, nmax + 1)
        return cls(f[idx % v.size])

    def __getitem__(self, n):
        n = int(n)
        return self.coefficients[n + self.nmax] if abs(n) <= self.nmax else 0j

    @property
    def modes(self):
        return np.arange(-self.nmax, self.nmax + 1)

    def support(self):
        """Modes with nonzero coefficient, in increasing order."""
        return [int(n) for n in self.modes[self.coefficients != 0]]

    @property
    def mean_zero(self):
        return self[0] == 0

    @property
    def is_real(self):
        c = self.coefficients
        return np.allclose(c, np.conj(c[::-1]), rtol=0, atol=1e-14 * (np.max(np.abs(c), initial=0) + 1e-300))

    def map(self, symbol):
        """Multiply coefficient ``g_n`` by ``symbol(n)``."""
        out = np.array([symbol(int(n)) if c != 0 else 0.0
                        for n, c in zip(self.modes, self.coefficients)], dtype=complex)
        return CircleData(out * self.coefficients)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.exp(1j * np.multiply.outer(theta, self.modes)) @ self.coefficients

    def pairing(self, other, conjugate=True):
        """``int_Gamma g conj(f)`` (or the bilinear ``int g f``) from coefficients."""
        other_c = np.array([other[int(n)] for n in self.modes])
        if conjugate:
            return 2 * math.pi * np.sum(self.coefficients * np.conj(other_c))
        other_c = np.array([other[-int(n)] for n in self.modes])
        return 2 * math.pi * np.sum(self.coefficients * other_c)

    def __repr__(self):
        return f"CircleData(modes={self.support()})"


# -------------------------------------------------------------- radial profiles


@dataclass(frozen=True)
class Poly:
    """``R(r) = sum_k c_k r^k`` (ascending coefficients)."""

    coeffs: tuple

    def __call__(self, r):
        p = np.polynomial.Polynomial(self.coeffs)
        return p(r), p.deriv(1)(r), p.deriv(2)(r)


def _taylor_i(m, j, lam):
    # j-th derivative at r = 0 of I_m(lam r): nonzero only when j - m is even and >= 0
    if j < m or (j - m) % 2:
        return 0.0
    k = (j - m) // 2
    return lam ** j * math.factorial(j) / (2.0 ** j * math.factorial(k) * math.factorial(k + m))


@dataclass(frozen=True)
class BesselRatio:
    """``R(r) = coef * I_m(lambda r) / I_m(lambda)``."""

    m: int
    lam: complex
    coef: complex = 1.0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        m, lam = self.m, self.lam
        out = [np.zeros(r.shape, dtype=complex) for _ in range(3)]
        zero = r == 0
        if np.any(zero):
            inv = np.exp(-specfun.log_bessel_i(m, lam))
            for j in range(3):
                out[j][zero] = self.coef * _taylor_i(m, j, lam) * inv
        nz = ~zero
        if np.any(nz):
            z = lam * r[nz]
            q = self.coef * specfun.ratio_i(m, z, lam)
            out[0][nz] = q
            out[1][nz] = lam * specfun.dlog_i(m, z) * q
            out[2][nz] = lam * lam * specfun.d2log_i(m, z) * q
        return tuple(out)


def _gap_mesh(m, lam_abs):
    """Radii ``0 = r_0 < ... < r_M = 1`` fine enough for 10-point rules on each gap."""
    cap = min(0.02, 1.5 / max(lam_abs, 1e-12))
    # geometric start: the K_m factor is singular at 0
    r = [0.0, 1e-6 * min(cap, 1.0 / (m + 2))]
    while r[-1] < 1.0:
        r.append(min(1.0, r[-1] + min(cap, 2.0 * r[-1] / (m + 2))))
    return np.array(r)


_GL10 = np.polynomial.legendre.leggauss(10)


def _sub_rule(a, b):
    x0, w0 = _GL10
    half = 0.5 * (b - a)
    x = 0.5 * (a + b)[..., None] + half[..., None] * x0
    return x, half[..., None] * w0


class SourceParticular:
    r"""Regular particular solution of ``lambda^2 w - Laplace(w) = f(r) e^{i m theta}``.

    ``w_p(r) = K(lambda r) int_0^r I f rho + I(lambda r) int_r^1 K f rho``
    with ``I = I_m``, ``K = K_m``.  Internally ``w_p = I K (A + B)`` where
    ``A = int_0^r I f rho / I(lambda r)`` and ``B = int_r^1 K f rho / K(lambda r)``
    are accumulated gap by gap with log-form Bessel ratios.
    """

    def __init__(self, m, lam, coeffs):
        self.m = int(m)
        self.lam = complex(lam)
        self.f = np.polynomial.Polynomial(coeffs)
        self.mesh = _gap_mesh(self.m, abs(self.lam))
        self._build()

    def _logs(self, x):
        z = self.lam * x
        return specfun._log_i(self.m, z), specfun._log_k(self.m, z)

    def _build(self):
        r = self.mesh
        li, lk = np.empty(r.size, complex), np.empty(r.size, complex)
        li[1:], lk[1:] = self._logs(r[1:])
        x, w = _sub_rule(r[:-1], r[1:])
        xi, xk = self._logs(x)
        fx = self.f(x) * x * w
        # gap integrals normalised by the value at the right (A) / left (B) end
        ga = np.sum(np.exp(xi - li[1:, None]) * fx, axis=1)
        gb = np.sum(np.exp(xk[1:] - lk[1:-1, None]) * fx[1:], axis=1)
        A = np.zeros(r.size, complex)
        B = np.zeros(r.size, complex)
        for j in range(1, r.size):
            carry = 0.0 if j == 1 else A[j - 1] * np.exp(li[j - 1] - li[j])
            A[j] = carry + ga[j - 1]
        for j in range(r.size - 2, 0, -1):
            B[j] = B[j + 1] * np.exp(lk[j + 1] - lk[j]) + gb[j - 1]
        self._A, self._B, self._li, self._lk = A, B, li, lk

    def parts(self, r):
        """``(A, B, log I(lambda r), log K(lambda r))`` at radii ``0 < r <= 1``."""
        r = np.asarray(r, dtype=float)
        mesh = self.mesh
        j = np.clip(np.searchsorted(mesh, r, side="right") - 1, 0, mesh.size - 2)
        lo, hi = mesh[j], mesh[j + 1]
        li, lk = self._logs(r)
        xa, wa = _sub_rule(lo, r)
        xb, wb = _sub_rule(r, hi)
        ia, _ = self._logs(xa)
        _, kb = self._logs(xb)
        A = np.sum(np.exp(ia - li[..., None]) * self.f(xa) * xa * wa, axis=-1)
        left = j > 0
        if np.ndim(A) == 0:
            if left:
                A = A + self._A[j] * np.exp(self._li[j] - li)
        else:
            A[left] += self._A[j[left]] * np.exp(self._li[j[left]] - li[left])
        B = np.sum(np.exp(kb - lk[..., None]) * self.f(xb) * xb * wb, axis=-1)
        B = B + self._B[j + 1] * np.exp(self._lk[j + 1] - lk)
        return A, B, li, lk

    def __call__(self, r):
        r = np.maximum(np.asarray(r, dtype=float), 1e-30)
        m, lam = self.m, self.lam
        A, B, li, lk = self.parts(r)
        ik = np.exp(li + lk)
        z = lam * r
        w = ik * (A + B)
        dw = lam * ik * (specfun.dlog_k(m, z) * A + specfun.dlog_i(m, z) * B)
        d2w = lam * lam * ik * (specfun.d2log_k(m, z) * A + specfun.d2log_i(m, z) * B) - self.f(r)
        return w, dw, d2w

    def __repr__(self):
        return f"SourceParticular(m={self.m}, lam={self.lam})"


# ------------------------------------------------------------------ field types


class ModalField:
    """``u = sum_n R_n(r) e^{i n theta}`` with ``R_n`` a sum of radial components.

    ``sources`` maps a mode to the polynomial coefficients of the right-hand
    side profile ``f_n`` (zero for homogeneous problems).
    """

    def __init__(self, lam=0.0, components=None, sources=None):
        self.lam = as_frequency(lam)
        self.components = {int(n): list(c) for n, c in (components or {}).items() if c}
        self.sources = {int(n): tuple(c) for n, c in (sources or {}).items()}

    @property
    def modes(self):
        return sorted(self.components)

    def radial(self, n, r):
        r = np.asarray(r, dtype=float)
        acc = [np.zeros(r.shape, dtype=complex) for _ in range(3)]
        for comp in self.components.get(int(n), ()):
            for a, v in zip(acc, comp(r)):
                a += v
        return tuple(acc)

    def source_profile(self, n, r):
        c = self.sources.get(int(n))
        if c is None:
            return np.zeros(np.shape(r))
        return np.polynomial.Polynomial(c)(r)

    def evaluate(self, r, theta, what="u"):
        """Field quantity at points ``(r, theta)`` (broadcast together).

        ``what`` is one of ``u, u_r, u_theta, u_rr, u_rtheta, u_thetatheta,
        laplacian``.
        """
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        out = np.zeros(r.shape, dtype=complex)
        for n in self.modes:  # fixed order keeps the sum deterministic
            R, dR, d2R = self.radial(n, r)
            e = np.exp(1j * n * theta)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = {
                    "u": lambda: R,
                    "u_r": lambda: dR,
                    "u_theta": lambda: 1j * n * R,
                    "u_rr": lambda: d2R,
                    "u_rtheta": lambda: 1j * n * dR,
                    "u_thetatheta": lambda: -n * n * R,
                    "laplacian": lambda: d2R + dR / r - n * n * R / r ** 2,
                }
                if what not in val:
                    raise CapabilityError(f"unknown field quantity {what!r}")
                out += val[what]() * e
        return out

    def trace(self):
        """Boundary values ``u(1, .)`` as circle data."""
        return CircleData.from_modes({n: self.radial(n, 1.0)[0] for n in self.modes})

    def normal_derivative(self):
        return CircleData.from_modes({n: self.radial(n, 1.0)[1] for n in self.modes})

    def pde_residual(self, points=64, seed=0):
        """Largest relative collocation residual of ``lambda^2 u - Laplace(u) = F``.

        Each point's residual is divided by the sum of the magnitudes of the
        terms entering it, so the value is a cancellation-aware relative error.
        """
        rng = np.random.default_rng(seed)
        lam2 = self.lam.squared
        worst = 0.0
        for n in self.modes:
            r = rng.uniform(0.02, 1.0, points)
            R, dR, d2R = self.radial(n, r)
            f = self.source_profile(n, r)
            res = lam2 * R - (d2R + dR / r - n * n * R / r ** 2) - f
            size = (abs(lam2) * np.abs(R) + np.abs(d2R) + np.abs(dR) / r
                    + n * n * np.abs(R) / r ** 2 + np.abs(f))
            # below ~1e-280 the values are (near-)subnormal and carry no relative precision
            ok = size > _NEGLIGIBLE
            if np.any(ok):
                worst = max(worst, float(np.max(np.abs(res[ok]) / size[ok])))
        return worst


class DiskSolution(ModalField):
    """Modal solution together with the problem it solves."""

    def __init__(self, lam, components, problem, data=None, sources=None):
        super().__init__(lam, components, sources)
        self.problem = problem
        self.data = data

    def __repr__(self):
        return f"DiskSolution({self.problem}, lam={self.lam!r}, modes={self.modes})"


# --------------------------------------------------------------------- solvers


def dtn_symbol(lam, n):
    """``s_n(lambda) = lambda I_n'(lambda) / I_n(lambda)``; ``|n|`` at ``lambda = 0``."""
    lam = as_frequency(lam)
    m = abs(int(n))
    if lam.is_zero:
        return complex(m)
    z = lam.principal
    return complex(z * specfun.dlog_i(m, z))


def dtn_apply(lam, g: CircleData) -> CircleData:
    """Apply the Dirichlet-to-Neumann map (Steklov-Poincare operator at ``lambda = 0``)."""
    lam = as_frequency(lam)
    return g.map(lambda n: dtn_symbol(lam, n))


def solve_dirichlet_disk(lam, g: CircleData) -> DiskSolution:
    lam = as_frequency(lam)
    comps = {}
    for n in g.support():
        m = abs(n)
        if lam.is_zero:
            comps[n] = [Poly(tuple([0.0] * m + [g[n]]))]
        else:
            comps[n] = [BesselRatio(m, lam.principal, g[n])]
    return DiskSolution(lam, comps, "dirichlet", g)


def solve_neumann_disk(lam, h: CircleData) -> DiskSolution:
    lam = as_frequency(lam)
    comps = {}
    if lam.is_zero and not h.mean_zero:
        raise CompatibilityError("lambda = 0 Neumann data must have zero mean")
    for n in h.support():
        m = abs(n)
        if lam.is_zero:
            comps[n] = [Poly(tuple([0.0] * m + [h[n] / m]))]
        else:
            comps[n] = [BesselRatio(m, lam.principal, h[n] / dtn_symbol(lam, m))]
    return DiskSolution(lam, comps, "neumann", h)


@dataclass(frozen=True)
class ModalSource:
    """Source ``F(r, theta) = f(r) e^{i n theta}`` with polynomial ``f`` (ascending)."""

    n: int
    coeffs: tuple = field(default=(1.0,))

    def __post_init__(self):
        c = tuple(complex(x) if isinstance(x, complex) else float(x) for x in self.coeffs)
        if len(c) - 1 > MAX_SOURCE_DEGREE:
            raise InputError(f"source degree exceeds {MAX_SOURCE_DEGREE}")
        if not all(np.isfinite(c)):
            raise InputError("non-finite source coefficient")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "n", int(self.n))

    def radial_moment(self):
        """``int_0^1 f(r) r dr``."""
        return sum(c / (k + 2) for k, c in enumerate(self.coeffs))

    @property
    def mean_zero(self):
        return self.n != 0 or self.radial_moment() == 0

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)


def _as_sources(F):
    srcs = [F] if isinstance(F, ModalSource) else list(F)
    merged = {}
    for s in srcs:
        a = merged.get(s.n, np.zeros(1))
        merged[s.n] = np.polynomial.polynomial.polyadd(a, np.asarray(s.coeffs))
    return {n: c for n, c in merged.items() if np.any(c != 0)}


def solve_source_disk(lam, F, bc, lambda0=LAMBDA0) -> DiskSolution:
    """Solve ``lambda^2 w - Laplace(w) = F`` with ``w = 0`` or ``dw/dn = 0`` on the circle.

    ``F`` is a :class:`ModalSource` or a sequence of them; ``bc`` is
    ``"dirichlet"`` or ``"neumann"``.
    """
    lam = as_frequency(lam)
    bc = str(bc).lower()
    if bc not in ("dirichlet", "neumann"):
        raise InputError(f"unknown boundary condition {bc!r}")
    if lam.is_zero:
        raise CapabilityError("source problems at lambda = 0 are not solved")
    srcs = _as_sources(F)
    z = lam.principal
    if (bc == "neumann" and lam.regime is Regime.REAL and abs(z) < lambda0
            and 0 in srcs and sum(c / (k + 2) for k, c in enumerate(srcs[0])) != 0):
        raise RegimeError(f"nonzero-mean Neumann source needs |lambda| >= {lambda0}")
    comps = {}
    for n, c in srcs.items():
        m = abs(n)
        part = SourceParticular(m, z, c)
        w1, dw1, _ = part(np.array([1.0]))
        if bc == "dirichlet":
            corr = -w1[0]
        else:
            corr = -dw1[0] / (z * specfun.dlog_i(m, z))
        comps[n] = [part, BesselRatio(m, z, corr)]
    return DiskSolution(lam, comps, f"source-{bc}", None, sources={n: tuple(c) for n, c in srcs.items()})


# ------------------------------------------------------------------- residuals


def radial_breaks(lam, m):
    """Quadrature breakpoints on [0, 1] graded toward the boundary layer at r = 1."""
    scale = 1.0 / (abs(as_frequency(lam).value) + m + 1.0)
    return graded_breaks(0.0, 1.0, 0.25 * scale, toward="b")


def mean_value_residual(lam, h: CircleData, rtol=1e-12):
    """Relative residual of ``int_Omega u = lambda^-2 int_Gamma h`` for the Neumann solution."""
    lam = as_frequency(lam)
    if lam.is_zero:
        raise RegimeError("the mean-value relation needs lambda != 0")
    sol = solve_neumann_disk(lam, h)
    if 0 in sol.components:
        lhs = 2 * math.pi * adaptive_gl(
            lambda r: sol.radial(0, r)[0] * r, radial_breaks(lam, 0), rtol=rtol)
    else:
        lhs = 0j
    rhs = 2 * math.pi * h[0] / lam.squared
    den = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / den
