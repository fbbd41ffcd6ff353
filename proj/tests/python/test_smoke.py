"""Smoke tests for the extension module."""

import math

import pytest

ricci_qc = pytest.importorskip("ricci_qc")


def test_class_table():
    assert ricci_qc.class_ids() == [
        "A1", "A2iv", "A3", "A4", "A5", "A6", "A7i", "A7ii", "A8", "A9ii",
    ]
    dims = [ricci_qc.class_dimension(c) for c in ricci_qc.class_ids()]
    assert dims == [0, 1, 2, 1, 2, 2, 3, 2, 2, 2]


def test_rhs_values():
    assert ricci_qc.rhs("A5", (1, 1, 1, 1)) == pytest.approx((1, -1, 0, 4))
    assert ricci_qc.rhs("A7i", (1, 1, 1, 1)) == pytest.approx((4, 1, 1, -1))
    assert ricci_qc.rhs("A2iv", (1, 1, 1, 1), k=2.0) == pytest.approx((0, 0, 0, 28))


def test_closed_form():
    out = ricci_qc.closed_form("A2iv", (1, 1, 1, 1), 1.0, k=2.0)
    assert out["kind"] == "full"
    assert out["state"] == pytest.approx((1, 1, 1, 29))
    assert ricci_qc.closed_form("A5", (1, 2, 3, 4), 1.0)["kind"] == "unavailable"
    partial = ricci_qc.closed_form("A9ii", (1, 1, 2, 1), 2.0, a3=1.0)
    assert partial["kind"] == "partial"
    assert partial["D"] == pytest.approx(9.0)


def test_integration_hits_the_exact_solution():
    out = ricci_qc.integrate("A2iv", (1, 1, 1, 1), 1.0, k=2.0)
    assert out["t"][0] == 0.0
    assert out["states"][-1] == pytest.approx((1, 1, 1, 29), abs=1e-9)
    err = ricci_qc.validate_closed_form("A4", (1, 1, 1, 1), [1.0, 10.0, 100.0])
    assert err < 1e-7


def test_conserved_and_drift():
    names = dict(ricci_qc.conserved("A5", (2, 3, 1, 1)))
    assert names["AB"] == pytest.approx(6.0)
    assert ricci_qc.conserved_drift("A7i", (1, 2, 3, 4), 100.0) < 1e-8


def test_membership():
    zero3 = [0.0, 0.0, 0.0]
    analytic = ricci_qc.analytic_membership("A3", (1, 2, 5, 1), (2, 1, 5, 7), zero3, k=1.0)
    assert analytic["member"] is True
    verdict = ricci_qc.numeric_membership("A3", (1, 2, 5, 1), (2, 1, 5, 7), zero3, k=1.0)
    assert verdict["decision"] == "Converges"

    trivially = ricci_qc.numeric_membership("A5", (2, 3, 1, 1), (2, 3, 1, 1), [0, 0, 0, 0])
    assert trivially["decision"] == "Converges"
    assert all(n <= 1e-12 for _, n in trivially["tail"])


def test_frame_operations():
    lam = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 2, 3, 1]]
    lam_prime = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0.5, 1, 1, 1]]
    q = ricci_qc.frame_quotient(lam, lam_prime)
    assert q[3] == pytest.approx([0.5, 1.0, 2.0, 1.0])
    assert ricci_qc.reduced_params("A2iv", lam, lam_prime) == pytest.approx([0.5, 1.0, 2.0])


def test_dimension_probe():
    assert ricci_qc.dimension_probe("A7i", (1, 2, 3, 4)) == 3
    assert ricci_qc.dimension_probe("A9ii", (1, 1, 2, 1), a3=1.0) == 2


def test_asymptotics():
    out = ricci_qc.validate_asymptotics("A9ii", (1, 1, 2, 1), 1e5, a3=1.0)
    checks = {c[0]: c for c in out["checks"]}
    assert checks["C"][1] == "Limit"
    assert checks["C"][2] == pytest.approx(1.0 / math.sqrt(0.75))
    assert checks["C"][3] < 0.01
