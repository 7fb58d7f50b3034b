"""Residual checks of the integral identities satisfied by exact disk solutions.

Each check computes its two sides along independent paths (radial quadrature
on one side, boundary coefficients on the other where possible) and returns
an :class:`IdentityReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import diskmodal
from .diskmodal import CircleData, ModalField, ModalSource, Poly, radial_breaks
from .errors import DegenerateInputError, PreconditionError, RegimeError
from .frequency import Regime, as_frequency
from .normkit import radial_integrals, surrogate_h32
from .quadrature import adaptive_gl

TWO_PI = 2.0 * math.pi
FLOOR = 1e-300

TOLERANCES = {
    "energy": 1e-8,
    "weighted-energy": 1e-6,
    "rellich": 1e-6,
    "green-duality": 1e-7,
    "mean-value": 1e-9,
}


@dataclass
class IdentityReport:
    identity: str
    inputs: dict
    lhs: complex
    rhs: complex
    tolerance: float
    residual: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        den = max(abs(self.lhs), abs(self.rhs), FLOOR)
        self.residual = float(abs(self.lhs - self.rhs) / den)
        self.passed = self.residual <= self.tolerance

    def as_dict(self):
        return {
            "identity": self.identity, **self.inputs,
            "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs),
            "residual": self.residual, "tolerance": self.tolerance, "pass": self.passed,
        }


def _jsonable(z):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _inputs(sol, **extra):
    lam = sol.lam.value
    return {"re_lambda": lam.real, "im_lambda": lam.imag,
            "problem": getattr(sol, "problem", "field"), **extra}


def _homogeneous(sol):
    if sol.sources:
        raise PreconditionError("identity applies to homogeneous solutions only")


def _radial_pairing(sol, fn, rtol=1e-12):
    """``2 pi sum_n int_0^1 fn(n, R, R', R'', r) r dr``."""
    total = 0j
    for n in sol.modes:
        total += adaptive_gl(lambda r: fn(n, *sol.radial(n, r), r) * r,
                             radial_breaks(sol.lam.value, abs(n)), rtol=rtol)
    return TWO_PI * total


def energy_identity(sol: ModalField, tol=TOLERANCES["energy"], rtol=1e-11, q=None):
    """``lambda^2 ||u||^2 + ||grad u||^2 = int_Gamma conj(u) du/dn``.

    ``q`` may carry precomputed :func:`~helmlab.normkit.radial_integrals`.

    For Neumann data the right side is ``int conj(u) h``, for Dirichlet data
    ``int conj(g) du/dn``.
    """
    _homogeneous(sol)
    q = radial_integrals(sol, rtol) if q is None else q
    lhs = sol.lam.squared * q["L2"] + q["grad"]
    tr, nd = sol.trace(), sol.normal_derivative()
    rhs = nd.pairing(tr)  # sum over the circle of du/dn * conj(u)
    return IdentityReport("energy", _inputs(sol), lhs, rhs, tol)


def weighted_energy_identity(sol: ModalField, tol=TOLERANCES["weighted-energy"], rtol=1e-11, q=None):
    """``lambda^2 ||sqrt(d) grad u||^2 + ||sqrt(d) Laplace u||^2 = lambda^2 int u conj(u_r)``

    (``grad d = -e_r`` on the disk).
    """
    _homogeneous(sol)
    if sol.lam.regime is not Regime.REAL:
        raise RegimeError("the weighted identity is checked for real nonzero lambda")
    q = radial_integrals(sol, rtol) if q is None else q
    lam2 = sol.lam.squared.real
    lhs = lam2 * q["sqrtd_grad"] + q["sqrtd_lap"]
    rhs = lam2 * _radial_pairing(sol, lambda n, R, dR, d2R, r: R * np.conj(dR))
    return IdentityReport("weighted-energy", _inputs(sol), lhs, rhs, tol)


def rellich_identity(sol: ModalField, tol=TOLERANCES["rellich"], rtol=1e-11, q=None):
    """Multiplier identity for the field ``x . grad u`` on the unit disk:

    ``int_Gamma (lambda^2 |u|^2 + |d_T u|^2) = int_Gamma |du/dn|^2 + 2 lambda^2 ||u||^2``.
    """
    _homogeneous(sol)
    if sol.lam.regime is Regime.COMPLEX:
        raise RegimeError("the reflection identity is checked for real lambda")
    lam2 = sol.lam.squared.real
    q = radial_integrals(sol, rtol) if q is None else q
    tr, nd = sol.trace(), sol.normal_derivative()
    n2 = tr.modes.astype(float) ** 2
    c2 = np.abs(tr.coefficients) ** 2
    lhs = TWO_PI * float(np.sum((lam2 + n2) * c2))
    rhs = TWO_PI * float(np.sum(np.abs(nd.coefficients) ** 2)) + 2 * lam2 * q["L2"]
    return IdentityReport("rellich", _inputs(sol), lhs, rhs, tol)


def green_duality(u: ModalField, z: ModalField, tol=TOLERANCES["green-duality"], rtol=1e-12):
    """``int_Omega u F = <h, z>_Gamma`` (bilinear) for the Neumann solution ``u`` of
    datum ``h`` and the solution ``z`` of the source problem with zero normal
    derivative and source ``F``."""
    _homogeneous(u)
    if not z.sources:
        raise PreconditionError("the test function must carry its source")
    lhs = 0j
    for n in u.modes:
        c = z.sources.get(-n)
        if c is None:
            continue
        f = np.polynomial.Polynomial(c)
        lhs += TWO_PI * adaptive_gl(lambda r: u.radial(n, r)[0] * f(r) * r,
                                    radial_breaks(u.lam.value, abs(n)), rtol=rtol)
    h = u.normal_derivative()
    rhs = h.pairing(z.trace(), conjugate=False)
    return IdentityReport("green-duality", _inputs(u), lhs, rhs, tol)


def mean_value_identity(lam, h: CircleData, tol=TOLERANCES["mean-value"]):
    """``int_Omega u = lambda^{-2} int_Gamma h`` for the Neumann solution."""
    lam = as_frequency(lam)
    sol = diskmodal.solve_neumann_disk(lam, h)
    lhs = _radial_pairing(sol, lambda n, R, dR, d2R, r: R if n == 0 else 0 * R) if 0 in sol.modes else 0j
    rhs = TWO_PI * h[0] / lam.squared
    return IdentityReport("mean-value", _inputs(sol), lhs, rhs, tol)


# -------------------------------------------------------------- t232 inequality


def vanishing_field(profiles: dict) -> ModalField:
    """``v = sum_n r^|n| (1 - r^2) p_n(r^2) e^{i n theta}`` from ``{n: coeffs of p_n}``.

    Polynomials in ``r^2`` keep ``v`` smooth at the origin.
    """
    P = np.polynomial.Polynomial
    comps = {}
    for n, c in profiles.items():
        even = np.zeros(2 * len(c) - 1 if len(c) else 1)
        even[::2] = c
        p = P([0.0] * abs(n) + [1.0]) * P([1.0, 0.0, -1.0]) * P(even)
        comps[int(n)] = [Poly(tuple(p.coef))]
    return ModalField(0.0, comps)


def t232_ratio(v: ModalField, boundary_tol=1e-12):
    """``(||v||_{H^1} + ||sqrt(d) Laplace v|| + ||sqrt(d) D^2 v||) / ||sqrt(d) Laplace v||``

    for a field vanishing on the circle (the boundary part of the surrogate is
    then zero).
    """
    tr = v.trace()
    scale = max(1.0, float(np.max(np.abs(tr.coefficients), initial=0.0)))
    if np.any(np.abs(tr.coefficients) > boundary_tol * scale):
        raise PreconditionError("the field must vanish on the boundary")
    q = radial_integrals(v)
    den = math.sqrt(q["sqrtd_lap"])
    if den == 0:
        raise DegenerateInputError("||sqrt(d) Laplace v|| vanishes")
    return (surrogate_h32(v, q) + math.sqrt(q["sqrtd_hess"])) / den


# -------------------------------------------------------------- regression grid

GRID_LAMBDAS = (0.5, 1.0, 5.0, 25.0, 125.0)
GRID_MODES = (0, 1, 2, 8, 32)


def _real_data(rng, n):
    c0 = rng.normal()
    c = complex(rng.normal(), rng.normal())
    modes = {0: c0}
    if n == 0:
        modes[0] += 2 * c.real
    else:
        modes[n] = c
        modes[-n] = c.conjugate()
    return CircleData.from_modes(modes)


def grid_case(seed, lam, n):
    """All identity reports for one ``(seed, lambda, mode)`` point of the grid."""
    rng = np.random.default_rng([seed, int(round(lam * 1000)), n])
    data = _real_data(rng, n)
    reports = []
    u_n = diskmodal.solve_neumann_disk(lam, data)
    u_d = diskmodal.solve_dirichlet_disk(lam, data)
    for sol in (u_n, u_d):
        q = radial_integrals(sol, 1e-11)
        reports.append(energy_identity(sol, q=q))
        reports.append(weighted_energy_identity(sol, q=q))
        reports.append(rellich_identity(sol, q=q))
    reports.append(mean_value_identity(lam, data))
    srcs = [ModalSource(m, tuple(rng.normal(size=4))) for m in sorted({n, -n, 0})]
    z = diskmodal.solve_source_disk(lam, srcs, "neumann")
    reports.append(green_duality(u_n, z))
    for rep in reports:
        rep.inputs.update(seed=seed, mode=n)
    return reports


def regression_grid(seeds=range(20), lams=GRID_LAMBDAS, modes=GRID_MODES, pool=None):
    """Run :func:`grid_case` over the product grid; results in a fixed order."""
    cases = [(s, lam, n) for s in seeds for lam in lams for n in modes]
    if pool is None:
        chunks = [grid_case(*c) for c in cases]
    else:
        chunks = pool.starmap(grid_case, cases)
    return [rep for chunk in chunks for rep in chunk]
