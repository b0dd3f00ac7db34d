"""测试三点理想的生成元与极限"""
import pytest

from src.core.bipoly import Z1, Z2, sup_norm_bidisk
from src.core.cxgeom import CanonicalFrame
from src.core.errors import CollinearTripleError, DegenerateInputError
from src.core.ideals import (
    COMPLETE_INTERSECTION_LIMIT,
    MAXIMAL_SQUARE,
    TRIPLE_IDEAL,
    IdealPresentation,
    ci_limit_distance,
    limit_ideal_ci,
    line_polys,
    line_product,
    maximal_square,
    membership_identity,
    monomial_limit_combinations,
    q_generators,
    vanishing_residual,
)
from src.harness.verification import check_generators, check_supnorm, random_frames


@pytest.mark.parametrize("frame", random_frames(25, seed=7))
def test_q_generators_vanish_on_triple(frame):
    presentation = q_generators(frame)
    assert presentation.label == TRIPLE_IDEAL
    assert presentation.names == ["Q1", "Q2", "Q3"]
    for q in presentation.generators:
        assert max(vanishing_residual(q, frame.frame_triple())) <= 1e-10


@pytest.mark.parametrize("frame", random_frames(25, seed=11))
def test_lines_vanish_on_their_pairs(frame):
    t = frame.frame_triple()
    l1, l2, l3 = (vanishing_residual(l, t) for l in line_polys(frame))
    assert max(l1[0], l1[1], l2[0], l2[2], l3[1], l3[2]) <= 1e-10
    assert max(vanishing_residual(line_product(frame), t)) <= 1e-10


def test_generators_in_standard_coordinates_vanish():
    for frame in random_frames(10, seed=3):
        standard = q_generators(frame).to_standard(frame)
        for q in standard.generators:
            assert max(vanishing_residual(q, frame.standard_triple())) <= 1e-10


def test_check_generators_passes_on_small_sample():
    result = check_generators(count=50, seed=1)
    assert result["passed"], result


def test_q_generators_reject_zero_delta():
    with pytest.raises(CollinearTripleError):
        q_generators(CanonicalFrame.from_parameters(0.1, 0.05, 0))


def test_line_polys_reject_rho_equal_eps():
    with pytest.raises(DegenerateInputError):
        line_polys(CanonicalFrame.from_parameters(0.1, 0.1, 1.0))


def test_ci_limit_distance_decreases():
    schedule = [10.0 ** -k for k in range(1, 7)]
    distances = [ci_limit_distance(CanonicalFrame.from_parameters(e, e / 2, e), -2) for e in schedule]
    assert all(b < a for a, b in zip(distances, distances[1:]))
    assert distances[-1] <= 1e-4
    assert distances[-1] == pytest.approx(3.5e-6, rel=1e-3)


@pytest.mark.parametrize("m", [-2, 0.5j, 3 + 1j])
def test_membership_identity_is_zero(m):
    assert membership_identity(m).is_zero()


def test_limit_ideals_shape():
    ci = limit_ideal_ci(-2)
    assert ci.label == COMPLETE_INTERSECTION_LIMIT
    assert ci.generators == [Z2 + 2 * Z1 * Z1, Z1 ** 3]
    assert ci.to_record()["m"] == {"re": -2.0, "im": 0.0}
    square = maximal_square()
    assert square.label == MAXIMAL_SQUARE
    assert square.generators == [Z1 * Z1, Z1 * Z2, Z2 * Z2]


def test_presentation_validates_generator_count():
    with pytest.raises(ValueError):
        IdealPresentation([Z1], COMPLETE_INTERSECTION_LIMIT)
    with pytest.raises(ValueError):
        IdealPresentation([Z1, Z2], MAXIMAL_SQUARE)


def test_monomial_limits_in_aligned_frame():
    # 标准基即标架：f_j 就是 Q_j
    eps, rho, delta = 1e-3, 4e-4, 0.05
    frame = CanonicalFrame.from_parameters(eps, rho, delta)
    limits = monomial_limit_combinations(frame)
    q1, q2, q3 = q_generators(frame).generators
    assert limits.polys == [q1, q2, q3]
    assert limits.f2_symmetric == q2
    expected = [eps + abs((rho - eps) / delta), abs(rho), abs(delta * rho)]
    assert limits.distances == pytest.approx(expected, rel=1e-12)
    assert limits.f2_symmetric_distance == pytest.approx(abs(rho), rel=1e-12)
    record = limits.to_record()
    assert len(record["f"]) == 3


@pytest.mark.parametrize("frame", random_frames(20, seed=5))
def test_line_product_norm_bound(frame):
    d, e = abs(frame.delta), frame.eps
    norm = sup_norm_bidisk(line_product(frame))
    assert norm.value <= (1 + d) * (1 + d * (1 + e)) + 1e-12


def test_check_supnorm_passes():
    result = check_supnorm(frames=10, seed=3)
    assert result["passed"], result
