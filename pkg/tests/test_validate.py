import json

import numpy as np
import pytest

from fnig.analytics import abs_moment
from fnig.noise import noise_acf
from fnig.errors import DomainError
from fnig.params import FnigParams, NoiseParams
from fnig.streams import substream
from fnig.validate import (
    CHECKS,
    PRESETS,
    McConfig,
    ValidationReport,
    acf_halves_check,
    build_report,
    estimate_abs_moment,
    estimate_noise_acf,
    mean_and_se,
    noise_paths,
    resolve_checks,
    z_score,
)

THETA = FnigParams(3.0, 1.0, 1.0, 0.75)


@pytest.mark.parametrize("kwargs", [
    dict(replicates=1, path_length=10, seed=0),
    dict(replicates=10, path_length=1, seed=0),
    dict(replicates=10, path_length=10, seed=0, path_replicates=1),
    dict(replicates=10, path_length=10, seed=0, tolerance_sigmas=0.0),
])
def test_config_rejects_degenerate_sizes(kwargs):
    with pytest.raises(DomainError):
        McConfig(**kwargs)


def test_mean_and_se():
    m, se = mean_and_se([1.0, 2.0, 3.0, 4.0])
    assert m == 2.5
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2, rel=1e-15)
    with pytest.raises(DomainError):
        mean_and_se([1.0])


def test_z_score_edge_cases():
    assert z_score(1.0, 1.5, 0.25) == 2.0
    assert z_score(1.0, 1.0, 0.0) == 0.0
    assert z_score(1.0, 2.0, 0.0) == np.inf


def test_zeroth_moment_is_exact():
    assert estimate_abs_moment(0, 1.0, THETA, McConfig(10, 10, 0)) == (1.0, 0.0)


def test_second_moment_estimate():
    p = FnigParams(1.0, 1.0, 1.0, 0.5)
    cfg = McConfig(10**6, 10, 11)
    m, se = estimate_abs_moment(2, 1.0, p, cfg)
    assert abs(z_score(abs_moment(2, 1.0, p), m, se)) <= 3
    assert estimate_abs_moment(2, 1.0, p, cfg) == (m, se)


def test_noise_acf_estimates():
    np_ = NoiseParams(1.0, FnigParams(1.0, 1.0, 1.0, 0.8))
    cfg = McConfig(10, 400, 12, path_replicates=60)
    w = noise_paths(np_, cfg, substream(12, 1))
    assert w.shape == (60, 400)
    for k in (0, 1, 3):
        m, se = estimate_noise_acf(k, np_, cfg, paths=w)
        assert abs(z_score(noise_acf(k, np_), m, se)) <= 3
    d, se = acf_halves_check(1, np_, cfg, paths=w)
    assert abs(d) <= 3 * se
    with pytest.raises(DomainError):
        estimate_noise_acf(400, np_, cfg, paths=w)
    with pytest.raises(DomainError):
        estimate_noise_acf(1.5, np_, cfg, paths=w)


def test_resolve_checks_errors_suggest_names():
    with pytest.raises(DomainError, match="empty"):
        resolve_checks([])
    with pytest.raises(DomainError, match="did you mean ig_mean"):
        resolve_checks(["ig_maen"])
    assert resolve_checks(["ig_mean"]) == ["ig_mean"]


def test_presets_reference_known_checks():
    for preset in PRESETS.values():
        assert set(preset["checks"]) <= set(CHECKS)


def small_report(seed=5, tol=3.0):
    cfg = McConfig(20_000, 100, seed, tolerance_sigmas=tol, path_replicates=10)
    return build_report(["ig_mean", "abs_moment_q2_t1", "noise_acf_k1"], cfg, THETA)


def test_report_deterministic_and_round_trips():
    a, b = small_report(), small_report()
    assert a.to_json() == b.to_json()
    doc = json.loads(a.to_json())
    assert doc["config"]["seed"] == 5 and doc["params"]["H"] == 0.75
    assert doc["retry_policy"] and doc["version"]
    again = ValidationReport.from_json(a.to_json())
    assert again.to_json() == a.to_json()
    assert [e.name for e in a.entries] == ["ig_mean", "abs_moment_q2_t1", "noise_acf_k1"]
    assert "ig_mean" in a.text_table()
    assert small_report(seed=6).to_json() != a.to_json()


def test_report_passes_at_default_tolerance():
    report = small_report()
    assert report.passed
    assert all(abs(e.z) <= 3 or e.attempts == 2 for e in report.entries)


def test_retry_is_recorded():
    # a tolerance far below sampling noise forces the rerun
    report = small_report(tol=1e-9)
    e = report.entries[1]
    assert e.attempts == 2 and e.first_z is not None
    assert not e.passed and not report.passed


def test_report_requires_drift():
    with pytest.raises(DomainError):
        build_report(["ig_mean"], McConfig(10, 10, 0), FnigParams(1.0, 0.0, 1.0, 0.5))
