import math
from fractions import Fraction

import numpy as np
import pytest

from helmlab import halfspace as hs
from helmlab.diskmodal import CircleData
from helmlab.errors import DegenerateInputError, InputError, PreconditionError, RegimeError
from helmlab.estimlab import (OUT_OF_SCOPE, REGISTRY, bootstrap_sequence, evaluate_estimate,
                              evaluate_terms, fit_exponent, get, golden_sweep, golden_value,
                              mode_datum, obstruction_probe, self_test, sharpness_probe,
                              source_datum, sweep)
from helmlab.estimlab.engine import (EDGE_ANGLE, DataItem, default_family, line_datum,
                                     ray_grid)
from helmlab.estimlab.registry import E, EstimateSpec, Term

FIT_GRID = ray_grid(10, 1e3, 12)


# ---------------------------------------------------------------- registry


def test_registry_is_consistent():
    assert self_test() == []
    assert len(REGISTRY) >= 20
    assert not set(REGISTRY) & {o.id for o in OUT_OF_SCOPE}


@pytest.mark.parametrize("sid", ["neumann-real", "dirichlet-real", "neumann-complex-r",
                                 "neumann-complex-weighted", "source-neumann-real",
                                 "source-neumann-complex", "veryweak-neumann-real",
                                 "veryweak-neumann-complex", "veryweak-neumann-Hs",
                                 "source-dirichlet-real", "source-dirichlet-complex",
                                 "source-dirichlet-weighted", "dirichlet-complex-r",
                                 "veryweak-dirichlet", "steklov-bounded"])
def test_required_estimates_present(sid):
    spec = get(sid)
    assert spec.lhs and spec.rhs and spec.anchor


def test_unknown_estimate():
    with pytest.raises(InputError):
        get("nope")


def test_spec_validation():
    with pytest.raises(InputError):
        EstimateSpec("x", "neumann", (), (Term(E(0), "L2_Gamma", "datum"),), "real", "a")
    with pytest.raises(InputError):
        EstimateSpec("x", "neumann", (Term(E(0), "L2_Omega", "elsewhere"),),
                     (Term(E(0), "L2_Gamma", "datum"),), "real", "a")


def test_exponents():
    ex = E(1, r=-2)
    assert ex(r=0.25) == 0.5
    with pytest.raises(InputError):
        ex()
    assert str(E(1.5, r=3)) == "3/2+3r"


def test_parameter_ranges():
    with pytest.raises(InputError):
        evaluate_estimate("neumann-complex-r", 5 + 1j, mode_datum(1))
    with pytest.raises(InputError):
        evaluate_estimate("neumann-complex-r", 5 + 1j, mode_datum(1), r=0.5)


# ---------------------------------------------------------------- evaluation


def test_halfspace_neumann_example():
    q = evaluate_estimate("halfspace-neumann-L2", 1.0, line_datum(hs.Indicator(1.0)))
    assert abs(q - 2 ** -0.75) < 1e-12 and q <= 1 / math.sqrt(2)


def test_zero_datum_gives_zero():
    zero = DataItem("zero", CircleData(np.zeros(3)))
    assert evaluate_estimate("neumann-real", 3.0, zero) == 0.0


def test_degenerate_rhs():
    # steklov-bounded: a constant datum has zero tangential norm but a constant
    # solution also has zero normal derivative; perturb the normal derivative side
    assert evaluate_estimate("steklov-bounded", 0.0, mode_datum(0)) == 0.0
    spec = EstimateSpec("t", "dirichlet", (Term(E(0), "L2_Omega"),),
                        (Term(E(0), "tangential_L2_Gamma", "datum"),), "real", "test")
    with pytest.raises(DegenerateInputError):
        evaluate_estimate(spec, 1.0, mode_datum(0))


def test_full_pipeline_point():
    ev = evaluate_terms("neumann-real", 10.0, mode_datum(8))
    assert math.isfinite(ev.Q) and ev.Q > 0
    assert len(ev.lhs_norms) == len(get("neumann-real").lhs)
    assert ev.lhs == pytest.approx(sum(10.0 ** t.exponent() * v
                                       for t, v in zip(get("neumann-real").lhs, ev.lhs_norms)))


def test_regime_errors():
    with pytest.raises(RegimeError):
        evaluate_estimate("neumann-real", 0.05, mode_datum(0))
    with pytest.raises(RegimeError):
        evaluate_estimate("neumann-real", 2 + 1j, mode_datum(1))
    with pytest.raises(RegimeError):
        evaluate_estimate("neumann-complex-r", 0.5 + 3j, mode_datum(1), r=0.25)
    with pytest.raises(RegimeError):
        sweep("neumann-real", [1.0, 0.05], [mode_datum(0)])
    # a mean-zero datum is fine below lambda0
    assert evaluate_estimate("neumann-real", 0.05, mode_datum(2)) > 0


def test_default_family():
    assert [d.id for d in default_family(get("laplace-neumann-s1"))][0] == "mode:1"
    srcs = default_family(get("source-neumann-real"))
    assert all(d.id.startswith("source:") for d in srcs) and len(srcs) == 6
    assert len(default_family(get("halfspace-neumann-L2"))) == 3


# ---------------------------------------------------------------- fits


def test_fit_exact_power():
    x = np.geomspace(1, 100, 8)
    slope, err = fit_exponent(list(zip(x, 5 * x ** -1.5)))
    assert abs(slope + 1.5) < 1e-12 and err < 1e-12
    slope, _ = fit_exponent([(t, 1.0) for t in x])
    assert abs(slope) < 1e-12


@pytest.mark.parametrize("series", [[(1, 1)] * 5, [(1, 1), (2, 0), (3, 1), (4, 1), (5, 1), (6, 1)]])
def test_fit_errors(series):
    with pytest.raises(InputError):
        fit_exponent(series)


def test_neumann_real_slopes():
    res = sweep("neumann-real", FIT_GRID, [mode_datum(1)])
    slopes = {f["term"]: f["slope"] for f in res.fits}
    assert abs(slopes["solution:L2_Omega"] + 1.5) <= 0.05
    assert abs(slopes["solution:H1_Omega"] + 0.5) <= 0.05
    assert abs(slopes["trace:L2_Gamma"] + 1.0) <= 0.05


@pytest.mark.parametrize("sid", ["neumann-real", "dirichlet-real"])
def test_dominant_slopes_match_for_boundary_estimates(sid):
    res = sweep(sid, FIT_GRID, [mode_datum(n) for n in (1, 2, 4, 8)])
    dom = [f for f in res.fits if f["dominant"]]
    assert len(dom) == 4
    assert all(abs(f["delta"]) <= 0.05 for f in dom), dom


def test_halfspace_slopes_match():
    for sid in ("halfspace-neumann-L2", "halfspace-dirichlet-normal"):
        res = sweep(sid, FIT_GRID)
        assert all(abs(f["delta"]) <= 0.05 for f in res.fits if f["dominant"])


@pytest.mark.parametrize("sid", [s for s, spec in REGISTRY.items()
                                 if spec.regime == "real" and not spec.problem.startswith("halfspace")])
def test_dominant_slopes_respect_the_bound(sid):
    # smooth modal data need not saturate an estimate, so the fitted decay may
    # only be faster than predicted
    spec = get(sid)
    data = [source_datum(0)] if spec.problem.startswith("source") else [mode_datum(1), mode_datum(2)]
    res = sweep(spec, FIT_GRID, data)
    dom = [f for f in res.fits if f["dominant"]]
    assert dom and all(f["delta"] <= 0.05 for f in dom), dom


# ---------------------------------------------------------------- sweeps


def test_single_point_sweep():
    res = sweep("dirichlet-real", [7.0], [mode_datum(3)])
    assert res.sup_Q == evaluate_estimate("dirichlet-real", 7.0, mode_datum(3))
    assert res.fits == [] and res.passed and res.budget is None


def test_empty_sweep():
    with pytest.raises(InputError):
        sweep("dirichlet-real", [], [mode_datum(3)])


def test_sweep_rows_and_budget():
    res = sweep("neumann-real", [1.0, 10.0], [mode_datum(1), mode_datum(2)], golden=1.0)
    assert [(r["re_lambda"], r["data_id"]) for r in res.rows] == \
        [(1.0, "mode:1"), (10.0, "mode:1"), (1.0, "mode:2"), (10.0, "mode:2")]
    assert res.budget == 10.0 and res.sup_Q == max(r["Q"] for r in res.rows)
    assert res.regression_ok == (res.sup_Q <= 1.05)
    d = res.as_dict()
    assert d["points"] == 4 and d["pass"] == res.passed


def test_halfspace_constant_enforced():
    res = sweep("halfspace-neumann-L2", [0.5, 1.0, 4.0, 16.0, 64.0])
    assert res.passed and res.sup_Q <= 1 / math.sqrt(2)
    tight = EstimateSpec("tight", "halfspace-neumann", get("halfspace-neumann-L2").lhs,
                         get("halfspace-neumann-L2").rhs, "real", "test", constant=0.1)
    assert not sweep(tight, [1.0], [line_datum(hs.Indicator(1.0))]).passed


def test_sweep_is_deterministic():
    lams = ray_grid(1, 100, 4, (EDGE_ANGLE,), re_min=1.0)
    a = sweep("neumann-complex-r", lams, [mode_datum(3)], r_values=[0.45]).rows
    b = sweep("neumann-complex-r", lams, [mode_datum(3)], r_values=[0.45]).rows
    assert a == b


def test_ray_grid():
    g = ray_grid(1, 1e3, 12, (0.0, EDGE_ANGLE), re_min=1.0)
    assert g[:12] == list(np.geomspace(1, 1e3, 12))
    assert all(complex(z).real >= 1.0 for z in g)
    assert len(g) == 12 + 7


def test_complex_r_monotone():
    lams = ray_grid(20, 1e3, 5, (EDGE_ANGLE, -EDGE_ANGLE), re_min=1.0)
    data = [mode_datum(n) for n in (1, 4, 16)]
    sups = [sweep("neumann-complex-r", lams, data, r_values=[r]).sup_Q
            for r in (0.25, 0.4, 0.45, 0.49)]
    assert all(math.isfinite(s) for s in sups)
    assert all(a <= b for a, b in zip(sups, sups[1:]))


def test_golden_neumann_real_regression():
    res = golden_sweep("neumann-real")
    assert res.golden == golden_value("neumann-real")
    assert res.passed and res.regression_ok
    assert len(res.rows) == 140


# ---------------------------------------------------------------- bootstrap


@pytest.mark.parametrize("kind, k, want", [
    ("neumann-complex", 1, Fraction(1, 4)), ("neumann-complex", 2, Fraction(5, 12)),
    ("neumann-complex", 3, Fraction(17, 36)), ("source-energy", 0, Fraction(0)),
    ("source-energy", 1, Fraction(1)), ("source-energy", 2, Fraction(3, 2)),
    ("source-energy", 3, Fraction(7, 4)),
])
def test_bootstrap_values(kind, k, want):
    assert bootstrap_sequence(kind, k) == want


def test_bootstrap_limits():
    assert 0.5 - bootstrap_sequence("neumann-complex", 30) < 1e-14
    assert bootstrap_sequence("source-energy", 40) == 2 - Fraction(2) ** -39


@pytest.mark.parametrize("kind, k", [("neumann-complex", 0), ("source-energy", -1),
                                     ("other", 1), ("source-energy", 1.5)])
def test_bootstrap_errors(kind, k):
    with pytest.raises(InputError):
        bootstrap_sequence(kind, k)


# ---------------------------------------------------------------- obstruction / sharpness


@pytest.mark.parametrize("modes", [{0: 1.0}, {0: 1.0, 1: 1.0}])
def test_obstruction_slope(modes):
    slope, _ = obstruction_probe(CircleData.from_modes(modes))
    assert abs(slope + 2) <= 0.05


def test_obstruction_errors():
    with pytest.raises(PreconditionError):
        obstruction_probe(CircleData.from_modes({1: 1.0}))
    with pytest.raises(InputError):
        obstruction_probe(CircleData.from_modes({0: 1.0}), [0.1, 0.2, 0.3, 0.4, 0.5, 0.9])


def test_sharpness_probe():
    lams = np.geomspace(1, 1e3, 20)
    out = sharpness_probe(lams)
    assert [n for _, n, _ in out] == [int(round(x)) for x in lams if round(x) <= 128]
    sup = golden_value("neumann-real")
    best = max(q for *_, q in out)
    assert sup / 20 <= best <= 20 * sup
    with pytest.raises(InputError):
        sharpness_probe([500.0])
