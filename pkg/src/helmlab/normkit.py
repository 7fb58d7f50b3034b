r"""Norms of modal disk fields and of circle data.

Interior norms reduce, by orthogonality of the modes, to sums of radial
integrals ``2 pi int_0^1 (...) r dr``.  The polar Hessian frame is used for
second derivatives of ``R(r) e^{i n theta}``:

.. math::
   H_{rr} = R'', \quad H_{r\theta} = i n (R'/r - R/r^2), \quad
   H_{\theta\theta} = R'/r - n^2 R / r^2 ,

and ``|D^2 u|^2 = |H_rr|^2 + 2 |H_rtheta|^2 + |H_thetatheta|^2``.  The distance
to the boundary is ``d = 1 - r``.

Boundary norms use ``||g||^2_{H^s} = 2 pi sum (1 + n^2)^s |g_n|^2``.  Fractional
interior norms are replaced by computable surrogates (see
:func:`surrogate_h32`, :func:`surrogate_h12`, :func:`surrogate_hs`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .diskmodal import CircleData, ModalField, radial_breaks
from .errors import CapabilityError, InputError
from .frequency import as_frequency
from .quadrature import adaptive_gl, composite_rule

TWO_PI = 2.0 * math.pi

INTERIOR_IDS = (
    "L2_Omega", "grad_L2_Omega", "H1_Omega", "lap_L2_Omega",
    "sqrtd_grad_L2", "sqrtd_hess_L2", "sqrtd_lap_L2",
    "H12s_Omega", "H32s_Omega",
)
BOUNDARY_IDS = (
    "L2_Gamma", "H1_Gamma", "tangential_L2_Gamma", "Hm1_Gamma",
    "Hm1lambda_Gamma", "triple_H1lambda_Gamma", "normal_deriv_L2_Gamma",
)
# quantities integrated per mode, in this order
_RADIAL = ("L2", "grad", "lap", "sqrtd_grad", "sqrtd_hess", "sqrtd_lap")


def _densities(field: ModalField, n, r, sizes=False):
    R, dR, d2R = field.radial(n, r)
    d = 1.0 - r
    aR, adR = np.abs(R) ** 2, np.abs(dR) ** 2
    grad = adR + n * n * aR / r ** 2
    hrt = n * (dR / r - R / r ** 2)
    htt = dR / r - n * n * R / r ** 2
    hess = np.abs(d2R) ** 2 + 2 * np.abs(hrt) ** 2 + np.abs(htt) ** 2
    lap = np.abs(d2R + dR / r - n * n * R / r ** 2) ** 2
    rows = [aR, grad, lap, d * grad, d * hess, d * lap]
    if sizes:
        # cancellation-free magnitudes of the same expressions; they set the
        # rounding floor below which two refinements cannot be told apart
        big = (np.abs(d2R) + np.abs(dR) / r + (n * n + 1) * np.abs(R) / r ** 2) ** 2
        gsize = grad + aR
        rows = [aR, gsize, big, d * gsize, 2 * d * big, d * big]
    return np.stack(rows) * r


def radial_integrals(field: ModalField, rtol=1e-11):
    """Dict ``quantity -> 2 pi sum_n int_0^1 density_n r dr`` (squared norms)."""
    total = np.zeros(len(_RADIAL))
    lam = field.lam.value
    for n in field.modes:
        brk = radial_breaks(lam, abs(n))
        x, w = composite_rule(brk, 1)
        floor = 1e-14 * np.abs(_densities(field, n, x, sizes=True) @ w)
        vals = adaptive_gl(lambda r: _densities(field, n, r), brk, rtol=rtol,
                           negligible=0.0, atol=floor)
        total += np.real(vals)
    return dict(zip(_RADIAL, TWO_PI * np.maximum(total, 0.0)))


def interior_norm(field: ModalField, norm_id: str, rtol=1e-11, _cache=None):
    """Interior norm (not squared) of a modal field."""
    if norm_id not in INTERIOR_IDS:
        raise CapabilityError(f"unknown interior norm id {norm_id!r}")
    if norm_id == "H12s_Omega":
        return surrogate_h12(field)
    if norm_id == "H32s_Omega":
        return surrogate_h32(field)
    q = _cache if _cache is not None else radial_integrals(field, rtol)
    sq = {
        "L2_Omega": q["L2"],
        "grad_L2_Omega": q["grad"],
        "H1_Omega": q["L2"] + q["grad"],
        "lap_L2_Omega": q["lap"],
        "sqrtd_grad_L2": q["sqrtd_grad"],
        "sqrtd_hess_L2": q["sqrtd_hess"],
        "sqrtd_lap_L2": q["sqrtd_lap"],
    }[norm_id]
    return math.sqrt(sq)


def surrogate_h32(field: ModalField, _cache=None):
    """``||v||_{H^1} + ||sqrt(d) Laplace v|| + ||v||_{H^1(Gamma)}``: stands in for
    ``||v||_{H^{3/2}} + ||sqrt(d) D^2 v||``."""
    q = _cache if _cache is not None else radial_integrals(field)
    return (math.sqrt(q["L2"] + q["grad"]) + math.sqrt(q["sqrtd_lap"])
            + boundary_norm(field.trace(), 1.0))


def surrogate_h12(field: ModalField, _cache=None):
    """Interpolation surrogate ``(||u||_{L^2} ||u||_{H^1})^{1/2}`` for ``H^{1/2}``."""
    return surrogate_hs(field, 0.5, _cache)


def surrogate_hs(field: ModalField, s, _cache=None):
    """Interpolated stand-in for ``||u||_{H^s(Omega)}``, ``0 <= s <= 3/2``.

    Geometric interpolation between ``L^2`` and ``H^1`` for ``s <= 1`` and
    between ``H^1`` and :func:`surrogate_h32` above.
    """
    if not 0.0 <= s <= 1.5:
        raise InputError("surrogate order must lie in [0, 3/2]")
    q = _cache if _cache is not None else radial_integrals(field)
    l2 = math.sqrt(q["L2"])
    h1 = math.sqrt(q["L2"] + q["grad"])
    if s <= 1.0:
        return l2 ** (1.0 - s) * h1 ** s
    h32 = surrogate_h32(field, q)
    t = 2.0 * (s - 1.0)
    return h1 ** (1.0 - t) * h32 ** t


# ---------------------------------------------------------------- boundary norms


def _weights(data: CircleData, s):
    n = data.modes.astype(float)
    return (1.0 + n * n) ** s


def boundary_norm(data: CircleData, s=0.0, lam=None):
    """``H^s(Gamma)`` norm; with ``lam`` given, ``s = 1`` is the triple norm
    ``|lam| ||g|| + ||g||_{H^1}`` and ``s = -1`` its modal dual."""
    if abs(s) > 1.5:
        raise InputError("boundary norms are supported for |s| <= 3/2")
    c2 = np.abs(data.coefficients) ** 2
    if lam is None:
        return math.sqrt(TWO_PI * float(np.sum(_weights(data, s) * c2)))
    lam = abs(as_frequency(lam).value)
    if s == 1:
        return lam * boundary_norm(data, 0.0) + boundary_norm(data, 1.0)
    if s == -1:
        w = (lam + np.sqrt(_weights(data, 1.0))) ** 2
        return math.sqrt(TWO_PI * float(np.sum(c2 / w)))
    raise InputError("with lambda, only s = 1 (triple) and s = -1 (dual) are defined")


def tangential_norm(data: CircleData):
    n = data.modes.astype(float)
    return math.sqrt(TWO_PI * float(np.sum(n * n * np.abs(data.coefficients) ** 2)))


def boundary_quadrature_l2(data: CircleData, points=None):
    """``L^2(Gamma)`` norm of the reconstructed function by the trapezoidal rule."""
    points = points or 4 * data.nmax + 8
    th = np.arange(points) * TWO_PI / points
    return math.sqrt(TWO_PI * float(np.mean(np.abs(data(th)) ** 2)))


# ------------------------------------------------------------------- source norms


def source_norms(field: ModalField):
    """``(||F||_{L^2}, ||sqrt(d) F||_{L^2})`` for the polynomial sources of a field."""
    P = np.polynomial.Polynomial
    l2 = wl2 = 0.0
    for c in field.sources.values():
        p = P(c)
        dens = (p * P(np.conj(c))) * P([0, 1])  # |f|^2 r, real coefficients for real f
        q = dens.integ()
        l2 += float(np.real(q(1.0) - q(0.0)))
        qd = (dens * P([1, -1])).integ()
        wl2 += float(np.real(qd(1.0) - qd(0.0)))
    return math.sqrt(TWO_PI * max(l2, 0)), math.sqrt(TWO_PI * max(wl2, 0))


# -------------------------------------------------------------------- NormReport


@dataclass
class NormReport:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]


def norm_report(field: ModalField, lam=None, ids=None) -> NormReport:
    """All supported norms of ``field`` (and of its trace and normal derivative).

    Boundary ids refer to the trace of the field, except
    ``normal_deriv_L2_Gamma``.
    """
    lam = field.lam if lam is None else as_frequency(lam)
    q = radial_integrals(field)
    tr = field.trace()
    out = {}
    for k in INTERIOR_IDS:
        out[k] = interior_norm(field, k, _cache=q) if k not in ("H12s_Omega", "H32s_Omega") else None
    out["H12s_Omega"] = surrogate_h12(field, q)
    out["H32s_Omega"] = surrogate_h32(field, q)
    out["L2_Gamma"] = boundary_norm(tr, 0.0)
    out["H1_Gamma"] = boundary_norm(tr, 1.0)
    out["tangential_L2_Gamma"] = tangential_norm(tr)
    out["Hm1_Gamma"] = boundary_norm(tr, -1.0)
    out["triple_H1lambda_Gamma"] = boundary_norm(tr, 1, lam)
    out["Hm1lambda_Gamma"] = boundary_norm(tr, -1, lam)
    out["normal_deriv_L2_Gamma"] = boundary_norm(field.normal_derivative(), 0.0)
    if field.sources:
        out["source_L2"], out["source_sqrtd_L2"] = source_norms(field)
    if ids is not None:
        out = {k: out[k] for k in ids}
    return NormReport(out)
