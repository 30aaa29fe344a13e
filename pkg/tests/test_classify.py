"""Tests for parameter recovery, equivalence certificates and the pipeline."""

import json
from fractions import Fraction

import numpy as np
import pytest

import braidrep.classification as classify_mod
from braidrep.classification import (
    audit_theorem,
    certify_equivalence,
    classify,
    recover_parameters,
)
from braidrep.errors import (
    DegenerateU,
    NoDominantEigenvalue,
    NotIrreducible,
)
from braidrep.matrix import Domain, Mat
from braidrep.reps import Rep, character_rep, character_twist, specialize, standard_rep


def hidden_model(n: int, y: complex, u: complex, seed: int) -> Rep:
    """The twisted family conjugated by a random well-conditioned basis."""
    base = character_twist(specialize(standard_rep(n), u), y)
    rng = np.random.default_rng(seed)
    while True:
        p = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        if np.linalg.cond(p) <= 1e4:
            break
    pinv = np.linalg.inv(p)
    gens = [Mat.from_numpy(p @ np.array(g.as_numpy(), dtype=complex) @ pinv)
            for g in base.gens]
    return Rep(n, gens, "hidden", check=False)


def test_recover_parameters_plain():
    rho = character_twist(specialize(standard_rep(9), 3), 2)
    params = recover_parameters(rho)
    assert abs(params.y - 2) < 1e-10
    assert abs(params.u - 3) < 1e-9
    mults = sorted(m for _, m in params.spectrum)
    assert mults == [1, 1, 7]


def test_recover_parameters_conjugated():
    y, u = 1.5 - 0.5j, 2.0 + 1.0j
    params = recover_parameters(hidden_model(9, y, u, seed=42))
    assert abs(params.y - y) < 1e-8
    assert abs(params.u - u) < 1e-8


def test_recover_parameters_needs_dominant_eigenvalue():
    rows = [[Fraction(0)] * 5 for _ in range(5)]
    for i, v in enumerate([2, 2, 3, 3, 4]):
        rows[i][i] = Fraction(v)
    d = Mat.from_rows(rows, Domain.RATIONAL)
    # identical diagonal generators commute, so the relations hold trivially
    rho = Rep(5, [d] * 4)
    with pytest.raises(NoDominantEigenvalue):
        recover_parameters(rho)


def test_recover_parameters_degenerate_u():
    near_zero = character_twist(specialize(standard_rep(9), 1e-4 + 0j), 2.0)
    with pytest.raises(DegenerateU):
        recover_parameters(near_zero)
    near_one = character_twist(specialize(standard_rep(9), 1.0 + 5e-4), 2.0)
    with pytest.raises(DegenerateU):
        recover_parameters(near_one)


def test_recover_parameters_usage_errors():
    with pytest.raises(ValueError):
        recover_parameters(specialize(standard_rep(4), 2))  # too few strands
    with pytest.raises(ValueError):
        recover_parameters(character_rep(9, Fraction(2)))  # degree != strands
    with pytest.raises(ValueError):
        recover_parameters(standard_rep(9))  # symbolic


def test_certify_equivalent_pair():
    y, u = 2.0, 3.0
    rho = hidden_model(9, y, u, seed=7)
    model = character_twist(specialize(standard_rep(9), u + 0j), y + 0j)
    cert = certify_equivalence(rho, model)
    assert cert.verdict == "EQUIVALENT"
    assert cert.intertwiner_dim == 1
    assert cert.residual < 1e-9
    assert cert.condition < 1e6
    x = cert.intertwiner
    for i in range(1, 9):
        lhs = rho.gen(i).to_complex() @ x
        rhs = x @ model.gen(i)
        assert (lhs - rhs).max_norm() <= 1e-8 * max(lhs.max_norm(), 1.0)


def test_certify_wrong_parameters_not_equivalent():
    rho = character_twist(specialize(standard_rep(9), 3.0), 2.0)
    wrong_u = character_twist(specialize(standard_rep(9), 4.0), 2.0)
    cert = certify_equivalence(rho, wrong_u)
    assert cert.verdict == "NOT_EQUIVALENT"
    assert "spectra differ" in cert.obstruction
    wrong_y = character_twist(specialize(standard_rep(9), 3.0), 2.5)
    cert2 = certify_equivalence(rho, wrong_y)
    assert cert2.verdict == "NOT_EQUIVALENT"
    assert "s1" in cert2.obstruction
    # the obstruction is reproducible
    again = certify_equivalence(rho, wrong_u)
    assert again.obstruction == cert.obstruction


def test_certify_no_intertwiner():
    d1 = Mat.from_rows([[2.0 + 0j, 0], [0, 3.0 + 0j]], Domain.COMPLEX)
    d2 = Mat.from_rows([[3.0 + 0j, 0], [0, 2.0 + 0j]], Domain.COMPLEX)
    # same spectra for each generator, but the joint equations clash
    a = Rep(3, [d1, d1], check=False)
    b = Rep(3, [d1, d2], check=False)
    cert = certify_equivalence(a, b)
    assert cert.verdict == "NOT_EQUIVALENT"
    assert cert.intertwiner_dim == 0
    assert "no nonzero intertwiner" in cert.obstruction


def test_certify_reducible_pair_inconclusive():
    d = Mat.from_rows([[2.0 + 0j, 0], [0, 3.0 + 0j]], Domain.COMPLEX)
    a = Rep(3, [d, d], check=False)
    cert = certify_equivalence(a, a)
    assert cert.verdict == "INCONCLUSIVE"
    assert cert.intertwiner_dim == 2


def test_certify_degree_mismatch():
    a = specialize(standard_rep(5), 2)
    b = character_rep(5, Fraction(2))
    cert = certify_equivalence(a, b)
    assert cert.verdict == "NOT_EQUIVALENT"
    assert "degrees differ" in cert.obstruction
    with pytest.raises(ValueError):
        certify_equivalence(a, specialize(standard_rep(4), 2))


def test_classify_recovers_hidden_family():
    y, u = 1.2 + 0.3j, 2.5 - 0.8j
    report = classify(hidden_model(9, y, u, seed=3))
    assert report.classified
    assert abs(report.y - y) < 1e-8
    assert abs(report.u - u) < 1e-8
    assert report.burnside.full
    assert not report.contradiction
    assert report.certificate.residual < 1e-9
    json.dumps(report.to_json_dict())


def test_classify_exact_input():
    report = classify(character_twist(specialize(standard_rep(9), 3), 2))
    assert report.classified
    assert abs(report.y - 2) < 1e-9
    assert abs(report.u - 3) < 1e-8


def test_classify_small_strands():
    report = classify(specialize(standard_rep(5), 2.0 + 1.0j))
    assert report.classified
    assert abs(report.u - (2 + 1j)) < 1e-8
    assert not report.contradiction


def test_classify_reducible_raises():
    with pytest.raises(NotIrreducible):
        classify(specialize(standard_rep(9), 1))
    with pytest.raises(NotIrreducible):
        classify(specialize(standard_rep(5), 1.0))


def test_classify_usage_errors():
    with pytest.raises(ValueError):
        classify(character_rep(5, Fraction(2)))
    with pytest.raises(ValueError):
        classify(standard_rep(5))


def test_classify_contradiction_flag(monkeypatch):
    def fake_cert(a, b, tol=1e-9, cluster_tol=1e-6):
        return classify_mod.EquivalenceCert(
            "NOT_EQUIVALENT", "forced by the test", None, 0, None, None)

    monkeypatch.setattr(classify_mod, "certify_equivalence", fake_cert)
    report = classify_mod.classify(hidden_model(9, 2.0, 3.0, seed=1))
    assert report.contradiction
    assert "THEOREM-CONTRADICTION" in report.notes


def test_audit_theorem_small_run():
    summary = audit_theorem(strands=9, trials=3, seed=5)
    assert summary.pass_rate == 1.0
    assert summary.max_param_err < 1e-7
    assert summary.max_residual < 1e-8
    for row in summary.rows:
        assert 0.5 <= abs(row.y) <= 2.0
        assert abs(row.u) > 0.25 and abs(row.u - 1) > 0.25
        assert row.corank_ok and row.burnside_full
    json.dumps(summary.to_json_dict())


def test_audit_theorem_deterministic_and_parallel():
    a = audit_theorem(strands=9, trials=4, seed=11, jobs=1)
    b = audit_theorem(strands=9, trials=4, seed=11, jobs=2)
    assert a.rows == b.rows
    c = audit_theorem(strands=9, trials=4, seed=11, jobs=1)
    assert a.rows == c.rows


def test_audit_theorem_other_strand_counts():
    for n in (10, 12):
        summary = audit_theorem(strands=n, trials=1, seed=2)
        assert summary.pass_rate == 1.0
