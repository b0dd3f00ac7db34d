"""测试退化族的情形判定"""
import math

import pytest

from src.core.classify import (
    COMPLETE_INTERSECTION,
    MAX_SQUARE_DEGENERATE,
    MAX_SQUARE_GENERIC,
    POWER_LAW,
    SAMPLE_TABLE,
    Classification,
    FamilySpec,
    classify,
    m_sequence,
    sample_family,
    theta_criterion_sequence,
)
from src.core.cxgeom import Complex2, PointTriple
from src.core.errors import ConfigurationError, InsufficientDataError
from src.harness.verification import SCHEDULE, canonical_families, generic_family
from src.utils.serialization import dumps_json

# 族名, 期望情形
family_cases = [
    ("ci", COMPLETE_INTERSECTION),
    ("degenerate", MAX_SQUARE_DEGENERATE),
    ("generic", MAX_SQUARE_GENERIC),
]


@pytest.mark.parametrize("name, regime", family_cases)
def test_canonical_families(name, regime):
    result = classify(canonical_families()[name].to_spec(), SCHEDULE)
    assert result.regime == regime
    assert "contradictory_verdicts" not in result.evidence["flags"]
    if regime == COMPLETE_INTERSECTION:
        assert abs(result.m + 2) <= 1e-6
    else:
        assert result.m is None


def test_complex_m_family():
    spec = FamilySpec.power_law(0.25, 1.0, 0.3 + 0.1j, 1.0)
    result = classify(spec, SCHEDULE)
    expected = (0.3 + 0.1j) / (0.25 - 1)
    assert result.regime == COMPLETE_INTERSECTION
    assert abs(result.m - expected) <= 1e-9


def test_degenerate_evidence():
    spec = canonical_families()["degenerate"].to_spec()
    result = classify(spec, SCHEDULE)
    verdicts = result.evidence["verdicts"]
    assert verdicts["crit_to_zero"]
    assert verdicts["m_diverges"]
    assert not verdicts["m_converges"]
    assert "equivalence_mismatch" not in result.evidence["flags"]
    assert result.evidence["crit_cross_check"] <= 1e-8
    assert result.evidence["log_delta_over_log_eps"][-1] == pytest.approx(0.5)


def test_deltabig_hypothesis_for_slow_delta():
    spec = FamilySpec.power_law(0.5, 1.0, 0.5, 0.1)
    result = classify(spec, SCHEDULE)
    assert result.evidence["verdicts"]["deltabig_hypothesis"]


def test_m_and_criterion_sequences():
    frames = [f for _, f in sample_family(FamilySpec.power_law(0.5, 1.0, 1.0, 1.0), SCHEDULE)]
    assert m_sequence(frames) == pytest.approx([-2.0] * len(SCHEDULE))
    assert theta_criterion_sequence(frames) == pytest.approx([e / math.atan(e) for e in SCHEDULE], rel=1e-12)

    degenerate = [f for _, f in sample_family(FamilySpec.power_law(0.5, 1.0, 1.0, 0.5), SCHEDULE)]
    crit = theta_criterion_sequence(degenerate)
    assert all(b < a for a, b in zip(crit, crit[1:]))
    assert crit[-1] == pytest.approx(math.sqrt(SCHEDULE[-1]), rel=1e-4)


def test_flags_for_rho_outside_half_eps():
    spec = FamilySpec.power_law(0.9, 1.0, 1.0, 1.0)
    assert "rho_coeff_exceeds_half" in spec.validation_flags()
    result = classify(spec, SCHEDULE)
    assert "rho_bound_exceeded" in result.evidence["flags"]
    assert result.regime == COMPLETE_INTERSECTION


insufficient_cases = [
    [1e-1, 1e-2, 1e-3],
    [1e-1, 5e-2, 2e-2, 1e-2],
]


@pytest.mark.parametrize("schedule", insufficient_cases)
def test_insufficient_data(schedule):
    with pytest.raises(InsufficientDataError):
        classify(FamilySpec.power_law(0.5, 1.0, 1.0, 1.0), schedule)


schedule_error_cases = [
    [1e-2, 1e-1, 1e-3, 1e-4],
    [0.6, 1e-1, 1e-2, 1e-3],
    [],
]


@pytest.mark.parametrize("schedule", schedule_error_cases)
def test_bad_schedule(schedule):
    with pytest.raises(ConfigurationError):
        sample_family(FamilySpec.power_law(0.5, 1.0, 1.0, 1.0), schedule)


def test_sample_table_validation():
    t = PointTriple(Complex2(0, 0), Complex2(0.1, 0), Complex2(0, 0.1))
    with pytest.raises(ConfigurationError):
        FamilySpec.sample_table([(0.1, t), (0.01, t), (0.001, t)])
    with pytest.raises(ConfigurationError):
        FamilySpec(kind="Spiral")


def test_sample_table_subset_by_schedule():
    spec = generic_family().to_spec()
    assert spec.kind == SAMPLE_TABLE
    sampled = sample_family(spec, [1e-1, 1e-2, 1e-3, 1e-4])
    assert len(sampled) == 4
    # 规范化后 a2 是最长边的端点：eps = sqrt(2) eps_k, |delta| = 1
    for (eps, frame) in sampled:
        assert frame.eps == pytest.approx(math.sqrt(2) * eps)
        assert abs(frame.delta) == pytest.approx(1.0)
    with pytest.raises(ConfigurationError):
        sample_family(spec, [1e-1, 1e-2, 1e-3, 3e-4])


def test_classification_record_is_json_native():
    result = classify(canonical_families()["ci"].to_spec(), SCHEDULE)
    text = dumps_json(result)
    assert '"regime": "CompleteIntersection"' in text
    back = Classification.from_record(result.to_record())
    assert back.regime == result.regime
    assert back.m == result.m
    assert FamilySpec.power_law(0.5, 1, 1, 1).kind == POWER_LAW


def test_quadratic_delta_family():
    # delta = eps²：三角形极细，中间角约为 eps²
    result = classify(FamilySpec.power_law(0.5, 1.0, 1.0, 2.0), SCHEDULE)
    assert result.regime == COMPLETE_INTERSECTION
    assert abs(result.m) <= 1e-9
    middle = result.evidence["diameter_over_middle_angle"]
    assert all(v > 0 for v in middle)


round_trip_specs = [
    FamilySpec.power_law(0.5, 1.0, 1.0, 1.0),
    FamilySpec.power_law(0.3, 1.0, 0.4 + 0.2j, 1.0),
    FamilySpec.power_law(0.5, 1.0, 1.0, 0.5),
]


@pytest.mark.parametrize("spec", round_trip_specs)
def test_sample_table_round_trip(spec):
    analytic = sample_family(spec, SCHEDULE)
    table = FamilySpec.sample_table([(eps, PointTriple(*f.points())) for eps, f in analytic])
    for (eps, f), (eps_back, g) in zip(analytic, sample_family(table, SCHEDULE)):
        assert eps_back == eps
        assert abs(g.eps - f.eps) <= 1e-12 * f.eps
        assert abs(g.rho - f.rho) <= 1e-12 * abs(f.rho)
        assert abs(g.delta - f.delta) <= 1e-12 * abs(f.delta)


def _rotate(z: Complex2) -> Complex2:
    """固定的酉矩阵 (1/√2)[[1, i], [i, 1]]"""
    s = 1 / math.sqrt(2)
    return Complex2(s * (z.c1 + 1j * z.c2), s * (1j * z.c1 + z.c2))


# 族, 期望情形, 期望 |m|
rotated_cases = [
    (FamilySpec.power_law(0.3, 1.0, 1.0, 1.0), COMPLETE_INTERSECTION, 1 / 0.7),
    (FamilySpec.power_law(0.5, 1.0, 1.0, 0.5), MAX_SQUARE_DEGENERATE, None),
]


@pytest.mark.parametrize("spec, regime, modulus", rotated_cases)
def test_classification_under_unitary(spec, regime, modulus):
    rotated = FamilySpec.sample_table([
        (eps, PointTriple(*(_rotate(p) for p in f.points())))
        for eps, f in sample_family(spec, SCHEDULE)
    ])
    result = classify(rotated)
    assert result.regime == regime == classify(spec, SCHEDULE).regime
    if modulus is not None:
        assert abs(result.m) == pytest.approx(modulus, rel=1e-6)


FINE_SCHEDULE = [10 ** (-k / 2) for k in range(2, 11)]

# 粗序列上的族, 细序列上的族
refinement_cases = [
    (canonical_families()["ci"].to_spec(), canonical_families()["ci"].to_spec()),
    (canonical_families()["degenerate"].to_spec(), canonical_families()["degenerate"].to_spec()),
    (generic_family(SCHEDULE).to_spec(), generic_family(FINE_SCHEDULE).to_spec()),
]


@pytest.mark.parametrize("coarse, fine", refinement_cases)
def test_classification_under_schedule_refinement(coarse, fine):
    before = classify(coarse, SCHEDULE)
    after = classify(fine, FINE_SCHEDULE)
    assert after.regime == before.regime
    if before.m is not None:
        assert abs(after.m - before.m) <= 1e-6
