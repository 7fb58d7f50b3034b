"""Exponent bootstraps, the small-frequency obstruction and a sharpness probe."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .. import diskmodal, normkit
from ..diskmodal import CircleData
from ..errors import InputError, PreconditionError
from .engine import evaluate_estimate, fit_exponent, mode_datum

BOOTSTRAP_KINDS = ("neumann-complex", "source-energy")


def bootstrap_sequence(kind, k):
    """Exact exponent ``r_k`` reached after ``k`` rounds of the bootstrap.

    ``neumann-complex``: ``r_1 = 1/4`` and ``r_k = 1/3 + r_{k-1}/3`` (limit 1/2).
    ``source-energy``: ``r_0 = 0`` and ``r_k = 1 + r_{k-1}/2`` (limit 2).
    Both are cross-checked against their closed forms.
    """
    if isinstance(k, bool) or int(k) != k:
        raise InputError("k must be an integer")
    k = int(k)
    if kind == "neumann-complex":
        if k < 1:
            raise InputError("the neumann-complex sequence starts at k = 1")
        r = Fraction(1, 4)
        for _ in range(k - 1):
            r = Fraction(1, 3) + r / 3
        p = 3 ** (k - 1)
        closed = Fraction(2 * p - 1, 4 * p)
    elif kind == "source-energy":
        if k < 0:
            raise InputError("the source-energy sequence starts at k = 0")
        r = Fraction(0)
        for _ in range(k):
            r = 1 + r / 2
        closed = 2 - Fraction(2) ** (1 - k)
    else:
        raise InputError(f"unknown bootstrap kind {kind!r}; expected one of {BOOTSTRAP_KINDS}")
    if r != closed:  # pragma: no cover - guards the transcription of the recursion
        raise ArithmeticError(f"{kind}: recursion gives {r}, closed form {closed}")
    return r


def obstruction_probe(h: CircleData, lams=None):
    """Slope of ``||u||_{L^2}`` against small real ``lambda`` for a datum with ``h_0 != 0``.

    The mean-value relation forces ``u ~ lambda^{-2}``; returns ``(slope, stderr)``.
    """
    if h.mean_zero:
        raise PreconditionError("the obstruction needs a datum with nonzero mean")
    lams = np.geomspace(0.01, 0.5, 10) if lams is None else np.asarray(lams, dtype=float)
    if np.any(lams <= 0) or np.any(lams > 0.5) or np.any(np.iscomplex(lams)):
        raise InputError("the small-frequency grid must lie in (0, 1/2]")
    series = [(lam, normkit.interior_norm(diskmodal.solve_neumann_disk(lam, h), "L2_Omega"))
              for lam in lams]
    return fit_exponent(series)


def sharpness_probe(lams, estimate_id="neumann-real", nmax=diskmodal.N_MAX):
    """Q along the coupled family ``h = e^{i n theta}`` with ``n = round(|lambda|)``.

    Frequencies whose coupled mode would exceed ``nmax`` are skipped.  Returns
    a list of ``(lambda, n, Q)``.
    """
    out = []
    for lam in lams:
        n = int(round(abs(lam)))
        if n > nmax:
            continue
        out.append((lam, n, evaluate_estimate(estimate_id, lam, mode_datum(n))))
    if not out:
        raise InputError("no frequency admits a coupled mode within the truncation")
    return out
