"""Tests for the structural probes."""

import json
import math
from fractions import Fraction

import pytest

from braidrep import analysis
from braidrep.analysis import (
    burnside_dimension,
    central_scalar,
    common_eigenvector,
    corank,
    invariant_subspace_search,
    jordan_projection,
    rank_conclusion_check,
    subgroup_invariance_check,
    subgroup_line_witness,
    theta_cycle_audit,
)
from braidrep.errors import (
    ClosureDiverged,
    GenericDisagreement,
    NotEigenvalue,
    NotScalar,
    WitnessInvalid,
)
from braidrep.laurent import LaurentPoly
from braidrep.matrix import Domain, Mat, ops_for
from braidrep.reps import (
    Rep,
    burau_rep,
    character_rep,
    character_twist,
    specialize,
    standard_rep,
)


def direct_sum(r1: Rep, r2: Rep) -> Rep:
    assert r1.strands == r2.strands and r1.domain == r2.domain
    o = ops_for(r1.domain)
    n1, n2 = r1.degree, r2.degree
    gens = []
    for g1, g2 in zip(r1.gens, r2.gens):
        rows = []
        for i in range(n1):
            rows.append(list(g1.row(i)) + [o.zero] * n2)
        for i in range(n2):
            rows.append([o.zero] * n1 + list(g2.row(i)))
        gens.append(Mat.from_rows(rows, r1.domain))
    return Rep(r1.strands, gens, check=False)


# ---------------------------------------------------------------------------
# corank
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("u", [2, Fraction(7, 3)])
def test_corank_standard_specialized(n, u):
    rep = corank(specialize(standard_rep(n), u))
    assert rep.corank == 2
    assert rep.eigenvalue == Fraction(1)
    assert rep.exact


def test_corank_standard_symbolic():
    rep = corank(standard_rep(5))
    assert rep.corank == 2
    assert "agree" in rep.notes


def test_corank_burau():
    assert corank(burau_rep(4)).corank == 1
    rep = corank(specialize(burau_rep(4), 3))
    assert rep.corank == 1
    assert rep.eigenvalue == Fraction(1)


def test_corank_character_is_zero():
    assert corank(character_rep(5, Fraction(3))).corank == 0


def test_corank_complex():
    rep = corank(specialize(standard_rep(4), 2.0 + 0.5j))
    assert rep.corank == 2
    assert abs(rep.eigenvalue - 1) < 1e-8


def test_corank_twisted():
    rep = corank(character_twist(specialize(standard_rep(5), 3), 2))
    assert rep.corank == 2
    assert rep.eigenvalue == Fraction(2)
    assert rep.exact


def test_corank_generic_disagreement():
    # degree 2 on two strands has no relations to satisfy, so any invertible
    # image works; pin the first sample point as a constant eigenvalue so the
    # specializations genuinely disagree
    pts = analysis._sample_points()
    t = LaurentPoly.t()
    g = Mat.from_rows(
        [[t, LaurentPoly.zero()], [LaurentPoly.zero(), LaurentPoly.const(pts[0])]],
        Domain.LAURENT,
    )
    rho = Rep(2, [g], check=False)
    with pytest.raises(GenericDisagreement):
        corank(rho)


def test_corank_report_json():
    d = corank(specialize(standard_rep(3), 2)).to_json_dict()
    json.dumps(d)
    assert d["corank"] == 2
    assert d["eigenvalue"] == "1"


# ---------------------------------------------------------------------------
# span of the image
# ---------------------------------------------------------------------------


def test_burnside_full_generic():
    assert burnside_dimension(specialize(standard_rep(3), 2)).dimension == 9
    rep = burnside_dimension(specialize(standard_rep(4), Fraction(5, 2)))
    assert rep.dimension == 16
    assert rep.full


@pytest.mark.parametrize("n,expected", [(3, 5), (4, 10), (5, 17)])
def test_burnside_permutation_point(n, expected):
    # at t=1 the images are permutation matrices, whose span has
    # dimension (n-1)^2 + 1
    rep = burnside_dimension(specialize(standard_rep(n), 1))
    assert rep.dimension == expected
    assert not rep.full


def test_burnside_symbolic_laurent():
    rep = burnside_dimension(standard_rep(3))
    assert rep.dimension == 9
    assert rep.full
    assert "agree" in rep.notes


def test_burnside_complex():
    rep = burnside_dimension(specialize(standard_rep(3), 1.7 + 0.3j))
    assert rep.dimension == 9
    assert rep.full


def test_burnside_direct_sum_not_full():
    rho = direct_sum(character_rep(3, Fraction(2)), specialize(standard_rep(3), 2))
    rep = burnside_dimension(rho)
    assert rep.dimension == 10  # 1 + 9, far below 16
    assert not rep.full


def test_burnside_generation_cap():
    with pytest.raises(ClosureDiverged):
        burnside_dimension(specialize(standard_rep(3), 2), max_generations=0)


# ---------------------------------------------------------------------------
# common eigenvectors
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_common_eigenvector_permutation_point(n):
    rep = common_eigenvector(specialize(standard_rep(n), 1))
    assert rep is not None
    assert rep.exact
    assert rep.vector == Mat.column_vector([Fraction(1)] * n, Domain.RATIONAL)
    assert rep.eigenvalues == tuple([Fraction(1)] * (n - 1))


def test_common_eigenvector_burau_fixed_line():
    rep = common_eigenvector(specialize(burau_rep(4), Fraction(5, 2)))
    assert rep is not None and rep.exact
    assert rep.vector == Mat.column_vector([Fraction(1)] * 4, Domain.RATIONAL)
    assert rep.eigenvalues == (Fraction(1),) * 3


def test_common_eigenvector_twisted_permutation():
    rep = common_eigenvector(character_twist(specialize(standard_rep(3), 1), 3))
    assert rep is not None and rep.exact
    assert rep.eigenvalues == (Fraction(3), Fraction(3))


def test_common_eigenvector_none_when_irreducible():
    assert common_eigenvector(specialize(standard_rep(4), 3)) is None


def test_common_eigenvector_complex():
    rho = specialize(burau_rep(3), 0.8 + 0.1j)
    rep = common_eigenvector(rho)
    assert rep is not None and not rep.exact
    v = rep.vector
    for i in range(1, 3):
        assert ((rho.gen(i) @ v) - v.scale(rep.eigenvalues[i - 1])).max_norm() < 1e-8


def test_common_eigenvector_laurent_rejected():
    with pytest.raises(ValueError):
        common_eigenvector(standard_rep(3))


# ---------------------------------------------------------------------------
# boundary-pinned witness
# ---------------------------------------------------------------------------


def test_witness_standard5_at4():
    w = subgroup_line_witness(specialize(standard_rep(5), 4))
    assert w is not None
    assert w.exact
    assert w.y == Fraction(1)
    assert w.x == Fraction(2)  # the positive square root wins the ordering
    expect = Mat.column_vector(
        [Fraction(0), Fraction(0), Fraction(0), Fraction(1), Fraction(1, 2)],
        Domain.RATIONAL)
    assert w.vector == expect
    assert w.max_residual == 0.0


def test_witness_irrational_root_goes_numeric():
    w = subgroup_line_witness(specialize(standard_rep(5), 3))
    assert w is not None
    assert not w.exact
    assert abs(w.y - 1) < 1e-8
    assert abs(w.x - math.sqrt(3)) < 1e-8
    assert w.max_residual < 1e-8


def test_witness_twisted_exact():
    w = subgroup_line_witness(character_twist(specialize(standard_rep(6), 4), 2))
    assert w is not None and w.exact
    assert w.y == Fraction(2)
    assert w.x == Fraction(4)
    expect = Mat.column_vector(
        [Fraction(0)] * 4 + [Fraction(1), Fraction(1, 2)], Domain.RATIONAL)
    assert w.vector == expect


def test_witness_complex():
    u = 2.3 - 0.7j
    w = subgroup_line_witness(specialize(standard_rep(6), u))
    assert w is not None
    assert abs(w.y - 1) < 1e-8
    root = complex(u) ** 0.5
    assert abs(w.x - root) < 1e-7
    assert w.max_residual < 1e-8


def test_witness_usage_errors():
    with pytest.raises(ValueError):
        subgroup_line_witness(specialize(standard_rep(3), 2))
    with pytest.raises(ValueError):
        subgroup_line_witness(standard_rep(5))


def test_witness_json():
    w = subgroup_line_witness(specialize(standard_rep(5), 4))
    d = w.to_json_dict()
    json.dumps(d)
    assert d["x"] == "2" and d["y"] == "1"


# ---------------------------------------------------------------------------
# central scalar
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_central_scalar_symbolic(n):
    assert central_scalar(standard_rep(n)) == LaurentPoly.term(1, n - 1)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_central_scalar_specialized(n):
    u = Fraction(7, 2)
    assert central_scalar(specialize(standard_rep(n), u)) == u ** (n - 1)


def test_central_scalar_twisted():
    # twisting by y scales every one of the m(m-1) letters in theta^m
    rho = character_twist(specialize(standard_rep(3), 2), 2)
    assert central_scalar(rho) == Fraction(2) ** 6 * Fraction(2) ** 2  # 256
    rho = character_twist(specialize(standard_rep(4), 2), 3)
    assert central_scalar(rho) == Fraction(3) ** 12 * Fraction(2) ** 3


def test_central_scalar_complex():
    u = 1.3 + 0.4j
    d = central_scalar(specialize(standard_rep(4), u))
    assert abs(d - u ** 3) / abs(u ** 3) < 1e-10


def test_central_scalar_not_scalar():
    rho = direct_sum(character_rep(4, Fraction(2)), specialize(standard_rep(4), 2))
    with pytest.raises(NotScalar):
        central_scalar(rho)


# ---------------------------------------------------------------------------
# theta cycle audit
# ---------------------------------------------------------------------------


def test_cycle_audit_exact_standard5():
    rho = specialize(standard_rep(5), 4)
    w = subgroup_line_witness(rho)
    audit = theta_cycle_audit(rho, w.vector, w.x, w.y)
    assert audit.exact
    assert audit.cycle_ok
    assert all(r == 0.0 for r in audit.cycle_residuals)
    assert audit.table_ok
    assert audit.d_scalar == Fraction(4) ** 4
    assert audit.degeneracies == ()
    assert audit.independence >= 3
    assert audit.independence_ok
    kinds = {(c.i, c.k): c.kind for c in audit.cells}
    assert kinds[(2, 2)] == "x"
    assert kinds[(1, 3)] == "y"
    assert kinds[(1, 2)] == "free"
    assert kinds[(4, 5)] == "free"


def test_cycle_audit_numeric():
    u = 2.3 - 0.7j
    rho = specialize(standard_rep(9), u)
    w = subgroup_line_witness(rho)
    audit = theta_cycle_audit(rho, w.vector, w.x, w.y)
    assert not audit.exact
    assert audit.cycle_ok
    assert audit.table_ok
    assert audit.independence >= 7
    assert audit.degeneracies == ()
    d = complex(u) ** 8
    assert abs(audit.d_scalar - d) / abs(d) < 1e-8


def test_cycle_audit_degenerate_at_permutation_point():
    rho = specialize(standard_rep(5), 1)
    ones = Mat.column_vector([Fraction(1)] * 5, Domain.RATIONAL)
    audit = theta_cycle_audit(rho, ones, Fraction(1), Fraction(1))
    assert audit.exact
    assert audit.table_ok
    assert len(audit.degeneracies) == 8  # every free cell fires
    assert audit.independence == 1
    assert not audit.independence_ok
    assert audit.d_scalar == Fraction(1)


def test_cycle_audit_rejects_bad_witness():
    rho = specialize(standard_rep(5), 4)
    e1 = Mat.column_vector([Fraction(1)] + [Fraction(0)] * 4, Domain.RATIONAL)
    with pytest.raises(WitnessInvalid):
        theta_cycle_audit(rho, e1, Fraction(2), Fraction(1))


def test_cycle_audit_json():
    rho = specialize(standard_rep(5), 4)
    w = subgroup_line_witness(rho)
    d = theta_cycle_audit(rho, w.vector, w.x, w.y).to_json_dict()
    json.dumps(d)
    assert d["cycle_ok"] is True
    assert d["independence"] >= 3


def test_rank_conclusion():
    rho = specialize(standard_rep(5), 4)
    rep = rank_conclusion_check(rho, 1)
    assert rep.rank == 2 and rep.ok and rep.exact
    rep = rank_conclusion_check(rho, 2)
    assert rep.rank == 4 and not rep.ok
    repc = rank_conclusion_check(rho.to_complex(), 1.0)
    assert repc.rank == 2 and not repc.exact


# ---------------------------------------------------------------------------
# jordan projections
# ---------------------------------------------------------------------------


def test_jordan_projection_twisted_standard9():
    rho = character_twist(specialize(standard_rep(9), 3), 2)
    m8 = rho.gen(8)
    jp = jordan_projection(m8, 2)
    assert jp.dim == 7
    assert jp.minimal_polynomial == (Fraction(24), Fraction(-12), Fraction(-2), Fraction(1))
    for b in jp.basis:
        assert m8 @ b == b.scale(Fraction(2))
    inv = subgroup_invariance_check(rho, [1, 2, 3, 4, 5, 6, 8], list(jp.basis))
    assert inv.ok
    inv_bad = subgroup_invariance_check(rho, [7], list(jp.basis))
    assert not inv_bad.ok


def test_jordan_projection_diagonalizable_exact():
    m = Mat.from_rows([[Fraction(3), 0, 0], [0, Fraction(3), 0], [0, 0, Fraction(5)]],
                      Domain.RATIONAL)
    jp = jordan_projection(m, 3)
    assert jp.dim == 2
    jp5 = jordan_projection(m, 5)
    assert jp5.dim == 1


def test_jordan_projection_nilpotent_block():
    rows = [
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 5],
    ]
    m = Mat.from_rows([[Fraction(x) for x in r] for r in rows], Domain.RATIONAL)
    assert jordan_projection(m, 0).dim == 1  # one maximal nilpotent block
    assert jordan_projection(m, 5).dim == 1
    mc = m.to_complex()
    assert jordan_projection(mc, 0.0).dim == 1
    assert jordan_projection(mc, 5.0).dim == 1


def test_jordan_projection_not_eigenvalue():
    m = Mat.from_rows([[Fraction(1), 0], [0, Fraction(2)]], Domain.RATIONAL)
    with pytest.raises(NotEigenvalue):
        jordan_projection(m, 7)
    with pytest.raises(NotEigenvalue):
        jordan_projection(m.to_complex(), 7.0)


def test_invariance_check_numeric():
    ones = Mat.column_vector([1.0 + 0j] * 4, Domain.COMPLEX)
    e1 = Mat.column_vector([1.0 + 0j, 0, 0, 0], Domain.COMPLEX)
    # the all-ones line is invariant at the permutation point and only there
    perm = specialize(standard_rep(4), 1.0)
    assert subgroup_invariance_check(perm, [1, 2, 3], ones).ok
    assert not subgroup_invariance_check(perm, [1], e1).ok
    generic = specialize(standard_rep(4), 2.0)
    assert not subgroup_invariance_check(generic, [1, 2, 3], ones).ok


# ---------------------------------------------------------------------------
# invariant subspace search
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_invariant_subspace_permutation_point(n):
    rho = specialize(standard_rep(n), 1)
    rep = invariant_subspace_search(rho, seed=1)
    assert rep.found
    assert 0 < rep.dim < n
    assert subgroup_invariance_check(rho, range(1, n), rep.basis).ok


def test_invariant_subspace_none_when_irreducible():
    rep = invariant_subspace_search(specialize(standard_rep(3), 2), tries=10, seed=1)
    assert not rep.found
    assert rep.basis is None


def test_invariant_subspace_numeric():
    rho = specialize(standard_rep(4), 1.0)
    rep = invariant_subspace_search(rho, seed=3)
    assert rep.found
    assert 0 < rep.dim < 4
    assert subgroup_invariance_check(rho, [1, 2, 3], rep.basis).ok


def test_invariant_subspace_laurent_rejected():
    with pytest.raises(ValueError):
        invariant_subspace_search(standard_rep(3))


def test_invariant_subspace_deterministic():
    rho = specialize(standard_rep(4), 1)
    a = invariant_subspace_search(rho, seed=7)
    b = invariant_subspace_search(rho, seed=7)
    assert a.found == b.found and a.dim == b.dim
    assert a.basis == b.basis
