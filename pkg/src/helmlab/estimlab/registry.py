"""Machine-readable records of the resolvent estimates under test.

An estimate reads ``sum_i |lam|^{a_i} N_i(u) <= C sum_j |lam|^{b_j} M_j(data)``.
Exponents are affine in the sweep parameters ``r`` and ``s`` (see
:class:`Expo`).  Norm identifiers follow :mod:`helmlab.normkit` for disk
problems and :mod:`helmlab.halfspace` for the half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InputError, RegimeError
from ..frequency import Frequency, Regime, as_frequency


@dataclass(frozen=True)
class Expo:
    """``const + r_coef * r + s_coef * s + rs_coef * r * s``."""

    const: float = 0.0
    r_coef: float = 0.0
    s_coef: float = 0.0
    rs_coef: float = 0.0

    def __call__(self, r=None, s=None):
        if (self.r_coef or self.rs_coef) and r is None:
            raise InputError("exponent depends on r but no r was given")
        if (self.s_coef or self.rs_coef) and s is None:
            raise InputError("exponent depends on s but no s was given")
        r = 0.0 if r is None else r
        s = 0.0 if s is None else s
        return self.const + self.r_coef * r + self.s_coef * s + self.rs_coef * r * s

    def __str__(self):
        parts = []
        for c, name in ((self.const, ""), (self.r_coef, "r"), (self.s_coef, "s"), (self.rs_coef, "rs")):
            if c:
                parts.append(f"{Fraction(c).limit_denominator(12)}{name}")
        return "+".join(parts) or "0"


def E(const=0.0, r=0.0, s=0.0, rs=0.0):
    return Expo(float(const), float(r), float(s), float(rs))


@dataclass(frozen=True)
class Term:
    """``|lam|^exponent * norm``; ``order`` parametrises ``Hs_*`` norms."""

    exponent: Expo
    norm: str
    target: str = "solution"
    order: Expo | None = None

    def label(self):
        o = f"[{self.order}]" if self.order is not None else ""
        return f"{self.target}:{self.norm}{o}"


TARGETS = ("solution", "trace", "normal_derivative", "datum", "source")


@dataclass(frozen=True)
class EstimateSpec:
    id: str
    problem: str
    lhs: tuple
    rhs: tuple
    regime: str
    anchor: str
    mean_zero_required: bool = False
    r_range: tuple | None = None
    r_values: tuple = ()
    s_range: tuple | None = None
    s_values: tuple = ()
    surrogates: frozenset = frozenset()
    constant: float | None = None
    omega: float = 1.0
    lambda0: float = 0.1

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise InputError(f"{self.id}: both sides need at least one term")
        for t in self.lhs + self.rhs:
            if t.target not in TARGETS:
                raise InputError(f"{self.id}: unknown target {t.target!r}")
            for v in (0.0, 0.25, 0.5, 0.9):
                if not math.isfinite(t.exponent(v, v)):
                    raise InputError(f"{self.id}: non-finite exponent")

    def check_regime(self, lam, datum_mean_zero=True):
        """Raise :class:`RegimeError` unless ``lam`` is admissible for this estimate."""
        lam = as_frequency(lam)
        v = lam.value
        if self.regime == "zero":
            ok = lam.is_zero
        elif self.regime == "real":
            ok = lam.regime is Regime.REAL
            if ok and not datum_mean_zero and abs(v) < self.lambda0:
                raise RegimeError(
                    f"{self.id}: nonzero-mean datum needs |lambda| >= {self.lambda0}")
        elif self.regime == "complex":
            ok = not lam.is_zero and v.real >= self.omega
        elif self.regime == "real-or-complex":
            ok = lam.regime is Regime.REAL or (v.real >= self.omega and not lam.is_zero)
        else:
            raise InputError(f"unknown regime {self.regime!r}")
        if not ok:
            raise RegimeError(f"{self.id}: lambda = {v} outside the {self.regime} regime")
        return lam

    def check_params(self, r=None, s=None):
        for name, val, rng, needed in (("r", r, self.r_range, self.uses("r")),
                                       ("s", s, self.s_range, self.uses("s"))):
            if needed and val is None:
                raise InputError(f"{self.id}: parameter {name} is required")
            if val is not None and rng is not None and not rng[0] < val < rng[1]:
                raise InputError(f"{self.id}: {name} = {val} outside {rng}")

    def uses(self, name):
        for t in self.lhs + self.rhs:
            for ex in (t.exponent, t.order):
                if ex is None:
                    continue
                if name == "r" and (ex.r_coef or ex.rs_coef):
                    return True
                if name == "s" and (ex.s_coef or ex.rs_coef):
                    return True
        return False


@dataclass(frozen=True)
class OutOfScope:
    id: str
    anchor: str
    reason: str


def _T(e, norm, target="solution", order=None):
    return Term(e if isinstance(e, Expo) else E(e), norm, target, order)


H = 0.5
S32, S12, SH = frozenset({"H32s_Omega"}), frozenset({"H12s_Omega"}), frozenset({"Hs_Omega"})
R_HALF = (0.25, 0.4, 0.45)
R_ONE = (0.5, 0.8, 0.9)

_SPECS = [
    # --- boundary data, real lambda
    EstimateSpec(
        "neumann-real", "neumann",
        (_T(1.5, "L2_Omega"), _T(1, "sqrtd_grad_L2"), _T(H, "H1_Omega"), _T(0, "H32s_Omega"),
         _T(0, "sqrtd_hess_L2"), _T(1, "L2_Gamma", "trace"), _T(0, "H1_Gamma", "trace")),
        (_T(0, "L2_Gamma", "datum"),),
        "real", "resolvent boundary estimate, Neumann datum, real lambda",
        surrogates=S32),
    EstimateSpec(
        "dirichlet-real", "dirichlet",
        (_T(1.5, "L2_Omega"), _T(1, "sqrtd_grad_L2"), _T(H, "H1_Omega"), _T(0, "H32s_Omega"),
         _T(0, "sqrtd_hess_L2"), _T(0, "L2_Gamma", "normal_derivative")),
        (_T(1, "L2_Gamma", "datum"), _T(0, "H1_Gamma", "datum")),
        "real", "resolvent boundary estimate, Dirichlet datum, real lambda",
        surrogates=S32),
    # --- boundary data, complex lambda
    EstimateSpec(
        "neumann-complex-r", "neumann",
        (_T(E(r=3), "L2_Omega"), _T(E(r=1), "H1_Omega"), _T(E(r=2), "L2_Gamma", "trace"),
         _T(0, "tangential_L2_Gamma", "trace")),
        (_T(0, "L2_Gamma", "datum"),),
        "complex", "resolvent boundary estimate, Neumann datum, complex lambda, r < 1/2",
        r_range=(-math.inf, 0.5), r_values=R_HALF),
    EstimateSpec(
        "neumann-complex-weighted", "neumann",
        (_T(1, "sqrtd_grad_L2"), _T(0, "H32s_Omega"), _T(0, "sqrtd_hess_L2")),
        (_T(E(1, r=-2), "L2_Gamma", "datum"),),
        "complex", "weighted gradient bound accompanying the complex Neumann estimate",
        r_range=(-math.inf, 0.5), r_values=R_HALF, surrogates=S32),
    EstimateSpec(
        "dirichlet-complex-r", "dirichlet",
        (_T(E(r=1.5), "L2_Omega"), _T(E(r=0.5), "H1_Omega"), _T(0, "L2_Gamma", "normal_derivative"),
         _T(E(-1, r=1), "H32s_Omega"), _T(E(-1, r=1), "sqrtd_hess_L2")),
        (_T(1, "L2_Gamma", "datum"), _T(0, "H1_Gamma", "datum")),
        "complex", "resolvent boundary estimate, Dirichlet datum, complex lambda, r < 1",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=S32),
    # --- interior sources, Neumann
    EstimateSpec(
        "source-neumann-real", "source-neumann",
        (_T(2, "L2_Omega"), _T(1, "H1_Omega"), _T(H, "H32s_Omega"), _T(1.5, "L2_Gamma", "trace"),
         _T(H, "H1_Gamma", "trace")),
        (_T(0, "source_L2", "source"),),
        "real", "interior estimate I, zero Neumann condition, real lambda", surrogates=S32),
    EstimateSpec(
        "source-neumann-complex", "source-neumann",
        (_T(E(r=2.5), "L2_Omega"), _T(E(r=1.5), "H1_Omega"), _T(E(-1, r=2), "H32s_Omega"),
         _T(E(r=2), "L2_Gamma", "trace"), _T(E(r=1), "tangential_L2_Gamma", "trace")),
        (_T(H, "source_L2", "source"),),
        "complex", "interior estimate I, zero Neumann condition, complex lambda, r < 1",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=S32),
    EstimateSpec(
        "source-neumann-h12-real", "source-neumann",
        (_T(1.5, "H12s_Omega"),), (_T(0, "source_L2", "source"),),
        "real", "interpolated H^(1/2) bound for the zero Neumann source problem, real lambda",
        surrogates=S12),
    EstimateSpec(
        "source-neumann-h12-complex", "source-neumann",
        (_T(E(-0.5, r=2), "H12s_Omega"),), (_T(0, "source_L2", "source"),),
        "complex", "interpolated H^(1/2) bound for the zero Neumann source problem, complex lambda",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=S12),
    # --- very weak Neumann data
    EstimateSpec(
        "veryweak-neumann-real", "neumann",
        (_T(H, "L2_Omega"), _T(0, "H12s_Omega"), _T(0, "L2_Gamma", "trace")),
        (_T(0, "Hm1_Gamma", "datum"),),
        "real", "very weak estimate, H^-1 Neumann datum, real lambda", surrogates=S12),
    EstimateSpec(
        "veryweak-neumann-complex", "neumann",
        (_T(E(-0.5, r=1), "L2_Omega"), _T(E(-3, r=3), "H12s_Omega"), _T(0, "L2_Gamma", "trace")),
        (_T(0, "Hm1_Gamma", "datum"),),
        "complex", "very weak estimate, H^-1 Neumann datum, complex lambda, r < 1",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=S12),
    EstimateSpec(
        "veryweak-neumann-Hs", "neumann",
        (_T(E(1.5, s=-1), "L2_Omega"), _T(H, "Hs_Omega", order=E(1, s=-1)),
         _T(E(s=0.5), "Hs_Omega", order=E(1.5, s=-1.5)), _T(0, "Hs_Omega", order=E(1.5, s=-1)),
         _T(E(1, s=-1), "L2_Gamma", "trace"), _T(0, "Hs_Gamma", "trace", order=E(1, s=-1))),
        (_T(0, "Hs_Gamma", "datum", order=E(s=-1)),),
        "real", "H^-s Neumann datum corollary, real lambda, 0 < s < 1",
        s_range=(0.0, 1.0), s_values=(0.25, 0.5, 0.75), surrogates=SH),
    EstimateSpec(
        "veryweak-neumann-Hs-complex", "neumann",
        (_T(E(r=1.5, s=-0.5, rs=-0.5), "L2_Omega"),
         _T(E(r=0.5, s=-0.5, rs=0.5), "Hs_Omega", order=E(1, s=-1)),
         _T(E(1, r=-1, s=-1.5, rs=2), "Hs_Omega", order=E(1.5, s=-1.5)),
         _T(E(1, r=-1, s=-4, rs=4), "Hs_Omega", order=E(1.5, s=-1)),
         _T(E(r=1, rs=-1), "L2_Gamma", "trace"), _T(0, "Hs_Gamma", "trace", order=E(1, s=-1))),
        (_T(0, "Hs_Gamma", "datum", order=E(s=-1)),),
        "complex", "H^-s Neumann datum corollary, complex lambda, r < 1, 0 < s < 1",
        r_range=(-math.inf, 1.0), r_values=R_ONE, s_range=(0.0, 1.0), s_values=(0.25, 0.5, 0.75),
        surrogates=SH),
    # --- interior sources, Dirichlet
    EstimateSpec(
        "source-dirichlet-real", "source-dirichlet",
        (_T(2, "L2_Omega"), _T(1.5, "sqrtd_grad_L2"), _T(1, "H1_Omega"), _T(H, "H32s_Omega"),
         _T(H, "sqrtd_hess_L2"), _T(H, "L2_Gamma", "normal_derivative")),
        (_T(0, "source_L2", "source"),),
        "real", "interior estimate I, zero Dirichlet condition, real lambda", surrogates=S32),
    EstimateSpec(
        "source-dirichlet-complex", "source-dirichlet",
        (_T(E(-1, r=3), "L2_Omega"), _T(E(-1, r=2), "H1_Omega"), _T(E(-2, r=2.5), "H32s_Omega"),
         _T(E(-2, r=2.5), "sqrtd_hess_L2"), _T(E(-1, r=1.5), "L2_Gamma", "normal_derivative")),
        (_T(0, "source_L2", "source"),),
        "complex", "interior estimate I, zero Dirichlet condition, complex lambda, r < 1",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=S32),
    EstimateSpec(
        "source-dirichlet-weighted", "source-dirichlet",
        (_T(1.5, "L2_Omega"), _T(H, "H1_Omega"), _T(0, "H32s_Omega"), _T(0, "sqrtd_hess_L2")),
        (_T(0, "source_sqrtd_L2", "source"),),
        "real", "interior estimate II (distance-weighted source), Dirichlet, real lambda",
        surrogates=S32),
    EstimateSpec(
        "source-dirichlet-weighted-normal", "source-dirichlet",
        (_T(0, "L2_Gamma", "normal_derivative"),),
        (_T(0, "source_sqrtd_L2", "source"), _T(0, "source_L2", "source")),
        "real", "normal derivative bound in interior estimate II, real lambda",
        surrogates=frozenset({"source_L2"})),
    EstimateSpec(
        "source-dirichlet-weighted-complex", "source-dirichlet",
        (_T(E(r=1.5), "L2_Omega"), _T(E(r=0.5), "H1_Omega"), _T(E(-1, r=1), "H32s_Omega"),
         _T(E(-1, r=1), "sqrtd_hess_L2")),
        (_T(0, "source_sqrtd_L2", "source"),),
        "complex", "interior estimate II (distance-weighted source), Dirichlet, complex lambda",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=S32),
    EstimateSpec(
        "source-dirichlet-weighted-normal-complex", "source-dirichlet",
        (_T(0, "L2_Gamma", "normal_derivative"),),
        (_T(E(1, r=-1), "source_sqrtd_L2", "source"), _T(E(1, r=-1), "source_L2", "source")),
        "complex", "normal derivative bound in interior estimate II, complex lambda",
        r_range=(-math.inf, 1.0), r_values=R_ONE, surrogates=frozenset({"source_L2"})),
    EstimateSpec(
        "veryweak-dirichlet", "dirichlet",
        (_T(H, "L2_Omega"), _T(0, "H12s_Omega"), _T(0, "Hm1lambda_Gamma", "normal_derivative")),
        (_T(0, "L2_Gamma", "datum"),),
        "real-or-complex", "very weak estimate, L^2 Dirichlet datum", surrogates=S12),
    # --- lambda = 0
    EstimateSpec(
        "laplace-dirichlet-s1/2", "dirichlet",
        (_T(0, "H12s_Omega"), _T(0, "sqrtd_grad_L2")), (_T(0, "L2_Gamma", "datum"),),
        "zero", "Laplace Dirichlet problem in H^s, s = 1/2", surrogates=S12),
    EstimateSpec(
        "laplace-dirichlet-s1", "dirichlet",
        (_T(0, "H1_Omega"),), (_T(0, "Hs_Gamma", "datum", order=E(0.5)),),
        "zero", "Laplace Dirichlet problem in H^s, s = 1"),
    EstimateSpec(
        "laplace-dirichlet-s3/2", "dirichlet",
        (_T(0, "H32s_Omega"), _T(0, "sqrtd_hess_L2")), (_T(0, "H1_Gamma", "datum"),),
        "zero", "Laplace Dirichlet problem in H^s, s = 3/2", surrogates=S32),
    EstimateSpec(
        "laplace-neumann-s1/2", "neumann",
        (_T(0, "H12s_Omega"), _T(0, "sqrtd_grad_L2")), (_T(0, "Hm1_Gamma", "datum"),),
        "zero", "Laplace Neumann problem in H^s, s = 1/2", mean_zero_required=True,
        surrogates=S12),
    EstimateSpec(
        "laplace-neumann-s1", "neumann",
        (_T(0, "H1_Omega"),), (_T(0, "Hs_Gamma", "datum", order=E(-0.5)),),
        "zero", "Laplace Neumann problem in H^s, s = 1", mean_zero_required=True),
    EstimateSpec(
        "laplace-neumann-s3/2", "neumann",
        (_T(0, "H32s_Omega"), _T(0, "sqrtd_hess_L2")), (_T(0, "L2_Gamma", "datum"),),
        "zero", "Laplace Neumann problem in H^s, s = 3/2", mean_zero_required=True,
        surrogates=S32),
    EstimateSpec(
        "steklov-bounded", "dirichlet",
        (_T(0, "L2_Gamma", "normal_derivative"),), (_T(0, "tangential_L2_Gamma", "datum"),),
        "zero", "Steklov-Poincare operator bounded from H^1(Gamma)/R to L^2_0(Gamma)"),
    # --- half-plane, with the explicit constants
    EstimateSpec(
        "halfspace-neumann-L2", "halfspace-neumann",
        (_T(1.5, "L2_Omega"),), (_T(0, "data_L2_Gamma", "datum"),),
        "real", "half-plane Neumann solution, L^2 bound", constant=1 / math.sqrt(2)),
    EstimateSpec(
        "halfspace-neumann-grad", "halfspace-neumann",
        (_T(0.5, "grad_L2_Omega"),), (_T(0, "data_L2_Gamma", "datum"),),
        "real", "half-plane Neumann solution, gradient bound", constant=1.0),
    EstimateSpec(
        "halfspace-neumann-trace", "halfspace-neumann",
        (_T(1, "trace_L2_Gamma"), _T(0, "trace_tangential_L2_Gamma")),
        (_T(0, "data_L2_Gamma", "datum"),),
        "real", "half-plane Neumann solution, trace bound", constant=2.0),
    EstimateSpec(
        "halfspace-dirichlet-L2", "halfspace-dirichlet",
        (_T(0.5, "L2_Omega"),), (_T(0, "data_L2_Gamma", "datum"),),
        "real", "half-plane Dirichlet solution, L^2 bound", constant=1 / math.sqrt(2)),
    EstimateSpec(
        "halfspace-dirichlet-normal", "halfspace-dirichlet",
        (_T(0, "normal_deriv_L2_Gamma"),),
        (_T(1, "data_L2_Gamma", "datum"), _T(0, "data_H1_Gamma", "datum")),
        "real", "half-plane Dirichlet solution, normal derivative bound", constant=1.0),
]

OUT_OF_SCOPE = [
    OutOfScope("laplace-dirichlet-source", "Laplace Dirichlet problem with H^(s-2) source",
               "lambda = 0 source problems are not solved (no modal solver at lambda = 0)"),
    OutOfScope("laplace-dirichlet-dtheta", "Laplace Dirichlet problem with d^theta-weighted source",
               "lambda = 0 source problems and theta != 1/2 weights are outside the sweep scope"),
    OutOfScope("laplace-neumann-source", "Laplace Neumann problem with L^2 source and H^1 datum",
               "lambda = 0 source problems are not solved"),
    OutOfScope("necas-equivalence", "normal derivative and tangential gradient equivalence",
               "checked as modal norm comparisons in the test suite, not as a swept estimate"),
    OutOfScope("t232-inequality", "H^(3/2)_0 bound by the weighted Laplacian",
               "checked by identities.t232_ratio over a sample family"),
    OutOfScope("wave-admissibility", "consequence for the wave equation",
               "time-domain statement; nothing to evaluate for a single lambda"),
    OutOfScope("weighted-gradient-veryweak", "weighted gradient of very weak solutions",
               "stated without proof as a conjecture"),
]

REGISTRY = {s.id: s for s in _SPECS}

# every estimate family the verification plan covers, mapped to registry ids or
# out-of-scope records; the self-test walks this table
COVERAGE = {
    "laplace-dirichlet": ["laplace-dirichlet-s1/2", "laplace-dirichlet-s1", "laplace-dirichlet-s3/2",
                          "laplace-dirichlet-source", "laplace-dirichlet-dtheta"],
    "laplace-neumann": ["laplace-neumann-s1/2", "laplace-neumann-s1", "laplace-neumann-s3/2",
                        "laplace-neumann-source"],
    "necas": ["steklov-bounded", "necas-equivalence"],
    "neumann-boundary-real": ["neumann-real"],
    "neumann-halfspace": ["halfspace-neumann-L2", "halfspace-neumann-grad", "halfspace-neumann-trace"],
    "dirichlet-boundary-real": ["dirichlet-real"],
    "dirichlet-halfspace": ["halfspace-dirichlet-L2", "halfspace-dirichlet-normal"],
    "neumann-boundary-complex": ["neumann-complex-r", "neumann-complex-weighted"],
    "wave-equation": ["wave-admissibility"],
    "neumann-source": ["source-neumann-real", "source-neumann-complex",
                       "source-neumann-h12-real", "source-neumann-h12-complex"],
    "neumann-veryweak": ["veryweak-neumann-real", "veryweak-neumann-complex",
                         "weighted-gradient-veryweak"],
    "neumann-veryweak-Hs": ["veryweak-neumann-Hs", "veryweak-neumann-Hs-complex"],
    "t232": ["t232-inequality"],
    "dirichlet-source": ["source-dirichlet-real", "source-dirichlet-complex"],
    "dirichlet-source-weighted": ["source-dirichlet-weighted", "source-dirichlet-weighted-normal",
                                  "source-dirichlet-weighted-complex",
                                  "source-dirichlet-weighted-normal-complex"],
    "dirichlet-boundary-complex": ["dirichlet-complex-r"],
    "dirichlet-veryweak": ["veryweak-dirichlet"],
}


def get(estimate_id) -> EstimateSpec:
    try:
        return REGISTRY[estimate_id]
    except KeyError:
        raise InputError(f"unknown estimate id {estimate_id!r}") from None


def self_test():
    """List of problems with the registry (empty when consistent)."""
    problems = []
    oos = {o.id for o in OUT_OF_SCOPE}
    seen = []
    for family, ids in COVERAGE.items():
        for i in ids:
            if i not in REGISTRY and i not in oos:
                problems.append(f"{family}: {i} is neither registered nor out of scope")
            seen.append(i)
    for i in list(REGISTRY) + sorted(oos):
        n = seen.count(i)
        if n != 1:
            problems.append(f"{i} is referenced {n} times in the coverage table")
    if set(REGISTRY) & oos:
        problems.append("ids shared between registry and out-of-scope records")
    return problems
