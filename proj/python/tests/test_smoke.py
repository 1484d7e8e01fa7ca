import json

import pytest

import fgcalc


def test_pochhammer_values():
    assert fgcalc.qpoch(0.5, 0.5, 3) == pytest.approx(21 / 64, rel=1e-15)
    assert fgcalc.qpoch_inf(0.5, 0.5) == pytest.approx(0.28878809508660242128, rel=1e-14)
    assert fgcalc.qbinom(4, 2, 0.5) == pytest.approx(2.1875, rel=1e-15)


def test_q_binomial_theorem():
    lhs = fgcalc.phi([0.7], [], 0.5, 0.25)
    assert lhs == pytest.approx(fgcalc.qpoch_inf(0.175, 0.5) / fgcalc.qpoch_inf(0.25, 0.5), rel=1e-12)


def test_theta_reflection():
    x = 0.8 + 0.3j
    assert fgcalc.theta(0.4 / x, 0.4) == pytest.approx(fgcalc.theta(x, 0.4), rel=1e-12)


def test_kernel_and_inversion():
    assert abs(fgcalc.kernel_residual("onexy-diff", 0.3 + 0.1j, 0.7, -0.2, 0.5j)) < 1e-14
    assert abs(fgcalc.kernel_residual("broken", 1, 1, 2, 3)) > 0.01
    dev = fgcalc.inversion_deviation("onexy-diff", "geometric:q=0.5", "geometric:A=0.3,p=0.4", 12)
    assert dev < 1e-9


def test_geometric_coefficients():
    g = fgcalc.expansion_coefficients("onexy-diff", "geometric:q=0.5", "geometric:A=0.2,p=0.4", "inv1mcx:c=0.3", 5)
    assert g[0] == pytest.approx(1 / (0.7 * 0.8), rel=1e-14)
    assert g[5].real == pytest.approx(-0.0029091096617725137662, rel=1e-14)


def test_corpus_case():
    assert "q-binomial" in fgcalc.case_ids()
    report = fgcalc.verify_case("q-binomial")
    assert report["passed"]
    assert report["worst_rel_error"] <= 1e-10


def test_domain_violation_raises():
    with pytest.raises(fgcalc.FgError, match="DomainViolation"):
        fgcalc.verify_case("q-binomial", {"z": 1.5})


def test_cli_round_trip():
    code, out, _ = fgcalc.run_cli(["diff", "--pair", "onexy-diff", "--order", "3", "--json", "-"])
    assert code == 0
    assert "value" in json.loads(out)
    code, _, err = fgcalc.run_cli(["corpus", "--case", "q-binomial", "--set", "z=1.5"])
    assert code == 3
    assert "DomainViolation" in err
