"""测试下界、上界、解析圆盘与极限值"""
import math

import pytest

from src.core.bipoly import Z1, Z2, sup_norm_bidisk
from src.core.classify import (
    COMPLETE_INTERSECTION,
    INCONCLUSIVE,
    MAX_SQUARE_DEGENERATE,
    Classification,
)
from src.core.cxgeom import ORIGIN, CanonicalFrame, Complex2
from src.core.disks import (
    AFFINE_ONE_POLE,
    AFFINE_TWO_POLE,
    DiskSearch,
    admissibility_failure,
    affine_disk,
    disk_green,
    frame_layout,
    parabolic_disk,
    parabolic_start,
    search_disks,
    sup_bound,
)
from src.core.errors import NoAdmissibleDiskError, OutOfDomainError, SandwichViolationError
from src.core.green import (
    EXACT_LIMIT,
    LOWER,
    REFERENCE_VALUE,
    GreenBound,
    disk_envelope_for_poles,
    exact_limit,
    lower_bound_best,
    lower_bound_poly,
    one_pole_green,
    upper_bound_disk_envelope,
    upper_bound_two_point,
)
from src.harness.verification import REGION_POINTS, check_lower_limits

CI_FRAME = CanonicalFrame.from_parameters(1e-2, 5e-3, 1e-2)


# ============ 单位圆盘与单极点 ============

def test_disk_green():
    assert disk_green(0, 0.5) == pytest.approx(math.log(0.5))
    assert disk_green(0.3j, 0.3j) == -math.inf
    assert disk_green(0.5, 0) == pytest.approx(math.log(0.5))
    with pytest.raises(OutOfDomainError):
        disk_green(0, 1.0)


def test_one_pole_green_at_origin():
    z = Complex2(0.5, -0.25j)
    assert one_pole_green(z, ORIGIN) == pytest.approx(math.log(0.5))


@pytest.mark.parametrize("z", REGION_POINTS)
def test_two_point_formula_region_law(z):
    bound = upper_bound_two_point(z, 1e-4)
    assert abs(bound.value - 2 * math.log(abs(z.c1))) <= 1e-3


def test_two_point_formula_outside_bidisk():
    with pytest.raises(OutOfDomainError):
        upper_bound_two_point(Complex2(0.5, 1.0), 1e-3)


# ============ 下界 ============

def test_lower_bound_poly_of_coordinate():
    z = Complex2(0.4, 0.1)
    linear = lower_bound_poly(z, Z1, 1, sup_norm_bidisk(Z1))
    assert linear.kind == LOWER
    assert linear.value == pytest.approx(math.log(0.4))
    square = lower_bound_poly(z, Z1 * Z1, 2, sup_norm_bidisk(Z1 * Z1))
    assert square.value == pytest.approx(math.log(0.4))
    zero = lower_bound_poly(Complex2(0, 0.3), Z1, 1, sup_norm_bidisk(Z1))
    assert zero.value == -math.inf
    assert zero.to_record()["value"] == "-inf"
    with pytest.raises(ValueError):
        lower_bound_poly(z, Z1, 0, sup_norm_bidisk(Z1))


def test_lower_bound_best_reports_all_candidates():
    bound = lower_bound_best(Complex2(0.5, 0.2), CI_FRAME, 128)
    assert set(bound.certificate["candidates"]) == {"Q1", "P", "Q2", "Q3"}
    assert bound.value == max(bound.certificate["candidates"].values())


def test_lower_bound_best_on_collinear_frame():
    frame = CanonicalFrame.from_parameters(1e-2, 5e-3, 0)
    bound = lower_bound_best(Complex2(0.5, 0.2), frame, 64)
    assert set(bound.certificate["candidates"]) == {"P", "Q2", "Q3"}


def test_lower_limits_on_degenerate_family():
    result = check_lower_limits(eps=1e-4, grid_n=3)
    assert result["passed"], result


# ============ 解析圆盘 ============

def test_sup_bound():
    assert sup_bound([0.5, 0.25j]) == pytest.approx(0.75)
    assert sup_bound([0, 0, 1]) == pytest.approx(1.0)
    assert sup_bound([0.1, 0, 0, 0.2]) <= 0.3 + 1e-15


def test_affine_disk_one_pole():
    z = Complex2(0.5, 0.25)
    candidate = affine_disk(z, [ORIGIN], 0, 0j)
    assert candidate.family == AFFINE_ONE_POLE
    assert admissibility_failure(candidate, z, [ORIGIN]) is None
    assert candidate.value() == pytest.approx(math.log(0.5), abs=1e-8)
    assert candidate.value() >= math.log(0.5)


def test_affine_disk_two_poles_matches_two_point_formula():
    eps = 1e-2
    z = Complex2(0.5, 0)
    poles = [ORIGIN, Complex2(eps, 0)]
    candidate = affine_disk(z, poles, 0, 0j)
    assert candidate.family == AFFINE_TWO_POLE
    assert admissibility_failure(candidate, z, poles) is None
    assert candidate.value() == pytest.approx(upper_bound_two_point(z, eps).value, abs=1e-6)


def test_parabolic_disk_interpolates_poles():
    eps = 1e-4
    frame = CanonicalFrame.from_parameters(eps, eps / 2, math.sqrt(eps))
    poles = frame.points()
    layout = frame_layout(poles)
    assert layout is not None
    eta, zeta3 = parabolic_start(layout)
    z = Complex2(0.1, 0.3)
    for root in (0, 1):
        candidate = parabolic_disk(z, poles, root, eta, zeta3)
        hx, hy = candidate(candidate.base)
        assert abs(hx - z.c1) <= 1e-10 and abs(hy - z.c2) <= 1e-10
        for index, zeta in candidate.preimages:
            px, py = candidate(zeta)
            assert abs(px - poles[index].c1) <= 1e-12
            assert abs(py - poles[index].c2) <= 1e-12


def test_frame_layout_rejects_other_configurations():
    assert frame_layout([ORIGIN, Complex2(0.1, 0)]) is None
    assert frame_layout([Complex2(0.1, 0), ORIGIN, Complex2(0.05, 0.01)]) is None


def test_empty_search_has_no_admissible_disk():
    with pytest.raises(NoAdmissibleDiskError):
        DiskSearch().at_most(3)


def test_search_is_deterministic_and_nested():
    z = Complex2(0.5, 0.3)
    poles = CI_FRAME.points()
    first = search_disks(z, poles, budget=2, seed=5)
    second = search_disks(z, poles, budget=2, seed=5)
    values = [first.at_most(k)[0] for k in (1, 2, 3)]
    assert values == [second.at_most(k)[0] for k in (1, 2, 3)]
    assert values[0] >= values[1] >= values[2]
    assert first.valid > 0


# ============ 包络 ============

sandwich_points = [
    Complex2(0.5, 0.2),
    Complex2(0.3, 0.6),
    Complex2(0.8, 0.05j),
    Complex2(-0.4, 0.4),
]


@pytest.mark.parametrize("z", sandwich_points)
def test_envelope_sandwich(z):
    lower = lower_bound_best(z, CI_FRAME, 128)
    envelope = upper_bound_disk_envelope(z, CI_FRAME, budget=1, seed=0, lower=lower)
    two = upper_bound_two_point(z, CI_FRAME.eps)
    assert lower.value <= envelope.value + 1e-9
    assert envelope.value <= two.value + 1e-9
    assert "fallback" in envelope.certificate


def test_envelope_at_pole():
    z = Complex2(CI_FRAME.eps, 0)
    envelope = upper_bound_disk_envelope(z, CI_FRAME, budget=1, seed=0)
    assert envelope.value == -math.inf


def test_envelope_with_coincident_poles():
    # eps = rho = 0：三个极点重合为原点
    z = Complex2(0.5, 0.25)
    envelope = disk_envelope_for_poles(z, [ORIGIN, ORIGIN, ORIGIN], budget=1, seed=0)
    assert envelope.value == pytest.approx(math.log(0.5), abs=1e-8)


def test_envelope_below_lower_is_a_violation():
    z = Complex2(0.5, 0.2)
    with pytest.raises(SandwichViolationError):
        upper_bound_disk_envelope(z, CI_FRAME, budget=1, seed=0, lower=GreenBound(LOWER, 0.0))


# ============ 极限值 ============

def test_exact_limit_complete_intersection():
    ci = Classification(COMPLETE_INTERSECTION, -2 + 0j, {})
    bound = exact_limit(Complex2(0.5, 0.2), ci)
    assert bound.kind == EXACT_LIMIT
    assert bound.value == pytest.approx(max(math.log(0.7), 3 * math.log(0.5)))
    # 在 z2 = m z1² 上取到 3 log|z1|
    assert exact_limit(Complex2(0.5, -0.5), ci).value == pytest.approx(3 * math.log(0.5))


def test_reference_values():
    square = Classification(MAX_SQUARE_DEGENERATE, None, {"verdicts": {"deltabig_hypothesis": True}})
    bound = exact_limit(Complex2(0.3, 0.6), square)
    assert bound.kind == REFERENCE_VALUE
    assert bound.value == pytest.approx(1.5 * math.log(0.6))
    assert bound.certificate["hypothesis_holds"]
    unknown = exact_limit(Complex2(0.3, 0.6), Classification(INCONCLUSIVE))
    assert unknown.value == pytest.approx(max(2 * math.log(0.3), 1.5 * math.log(0.6)))
    with pytest.raises(OutOfDomainError):
        exact_limit(ORIGIN, square)
