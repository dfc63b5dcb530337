import pytest

from z4lift.dyadic import DyadicPolynomial, DyadicRationalFunction, make_ring
from z4lift.errors import IdentityFailure, InvalidParameter, InvalidWittInput
from z4lift.lift import (
    LiftProblem,
    build_g2,
    build_phi1,
    f2_patterns,
    g2_construction,
    green_matignon_check,
    problem_grid,
    verify_z4_lift,
)

R = make_ring(1, 32)
X = DyadicRationalFunction.x(R)


def test_problem_validation():
    with pytest.raises(InvalidParameter):
        LiftProblem(R, 2, {})
    with pytest.raises(InvalidParameter):
        LiftProblem(R, 3, {}, [R.one])
    with pytest.raises(InvalidWittInput):
        LiftProblem(R, 3, {4: 1})
    with pytest.raises(InvalidWittInput):
        LiftProblem(R, 1, {3: 1, 2: 1})
    with pytest.raises(InvalidParameter):
        LiftProblem(R, 1, {}, G=DyadicPolynomial.constant(R, 3) + DyadicPolynomial.x(R))


def test_regimes():
    assert LiftProblem(R, 3, {}).regime == "f2=0"
    assert LiftProblem(R, 3, {3: 1}).regime == "n2<=m1"
    assert LiftProblem(R, 3, {5: 1}).regime == "m1<n2<2m1"
    assert LiftProblem(R, 3, {7: 1}).regime == "n2>2m1"


def test_phi1_examples():
    assert build_phi1(LiftProblem(R, 1, {})).F1 == 1 + 4 / X
    p = LiftProblem(R, 3, {}, [R.pi ** 2])
    assert build_phi1(p).F1 == 1 + 4 / (X * (X - R.pi ** 2) ** 2)


def test_g2_examples():
    G2, H = build_g2(LiftProblem(R, 1, {}))
    assert G2 == 1 - 2 * R.i_unit / X and H == G2
    data = g2_construction(LiftProblem(R, 1, {5: 1}))
    assert (data.alpha, data.beta) == (4, 0)
    data = g2_construction(LiftProblem(R, 3, {5: 1}))
    assert (data.alpha, data.beta) == (0, 1)


def test_green_matignon_examples():
    p = LiftProblem(R, 1, {})
    gm = green_matignon_check(p, build_phi1(p))
    assert gm.holds and gm.render_reduction() == "y2^2 + y2 + (1/x)*y1 = 0"
    with pytest.raises(IdentityFailure):
        green_matignon_check(p, build_phi1(p), 1 + 2 * R.i_unit / X)
    q = LiftProblem(R, 3, {}, [R.pi ** 2])
    assert green_matignon_check(q, build_phi1(q)).holds


@pytest.mark.parametrize(
    "m1,f2,total",
    [(1, {}, 3), (3, {3: 1}, 7), (1, {5: 1}, 6), (3, {5: 1, 1: 1}, 7), (5, {11: 1, 9: 1, 3: 1}, 12)],
)
def test_verify_examples(m1, f2, total):
    cert = verify_z4_lift(LiftProblem(R, m1, f2))
    assert cert.verdict, cert.diagnostics
    assert cert.counts["total"] == total
    assert cert.counts["index_2"] == cert.counts["expected_index_2"]


def test_verify_over_f4():
    ring = make_ring(2, 32)
    t = ring.field.gen
    cert = verify_z4_lift(LiftProblem(ring, 3, {5: t, 1: 1}))
    assert cert.verdict, cert.diagnostics


def test_certificate_json_is_complete():
    doc = verify_z4_lift(LiftProblem(R, 3, {3: 1})).to_json()
    for key in ("F1", "G2", "G2min", "H", "phi_prime_degeneration", "branch_counts", "verdict_detail", "g2_swan"):
        assert doc[key] is not None
    assert doc["g2_swan"]["G2"]["depth_nu2_eq_1"] == "1"
    assert doc["g2_swan"]["G2"]["depth_uniformizer_e2"] == "2"
    assert any("e = 2 normalization" in line for line in doc["diagnostics"])


def test_nonzero_v_exceeds_conductor():
    """Nonzero v_i add index-2 points X = v_i, so the count overshoots m2 + 1."""
    cert = verify_z4_lift(LiftProblem(R, 3, {3: 1}, [R.pi ** 2]))
    assert cert.checks["green_matignon"] and cert.checks["phi_prime_degeneration"]
    assert cert.counts["total"] == 8 and cert.counts["expected_total"] == 7
    assert cert.counts["g2_odd_not_f1"] == 3
    assert not cert.verdict


def test_grid_sizes():
    assert [len(list(f2_patterns(R.field, m))) for m in (1, 3, 5)] == [4, 16, 64]
    assert len(problem_grid(R)) == 84
    assert len(list(f2_patterns(make_ring(2, 16).field, 1))) == 1 + 3 + 6
