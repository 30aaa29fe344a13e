"""Structural probes for braid group representations.

The functions here answer questions about a single representation:

  corank                 smallest rank of rho(s1) - y*I over eigenvalues y;
                         the fingerprint that separates the main families
  burnside_dimension     dimension of the linear span of the image; equals
                         degree^2 exactly when the representation is
                         irreducible (and stays smaller when it is not)
  common_eigenvector     a vector every generator scales, if one exists
  subgroup_line_witness  an eigenvector pattern pinned by two boundary
                         generators, with the middle one left free
  central_scalar         the scalar by which theta^m acts (theta = s1..s_{m-1})
  theta_cycle_audit      the full conjugation-cycle bookkeeping around theta:
                         shifted generators, translated vectors, the x/y
                         constraint table, independence of the translates
  rank_conclusion_check  rank of rho(s1) - y*I against the threshold 2
  jordan_projection      column space of minpoly(M)/(X - lam) evaluated at M;
                         its dimension counts the maximal Jordan blocks of lam
  subgroup_invariance_check  whether chosen generators map a subspace into itself
  invariant_subspace_search  randomized search for a proper invariant subspace

Exact domains are kept exact wherever eigenvalues are rational; everything
else runs on the complexification with max-norm residual reporting.  Laurent
inputs are probed through a fixed set of three rational specializations and
must agree, otherwise GenericDisagreement is raised.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .braid import theta_word
from .errors import (
    ClosureDiverged,
    GenericDisagreement,
    NotEigenvalue,
    NotScalar,
    WitnessInvalid,
)
from .laurent import LaurentPoly
from .matrix import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_TOL,
    Domain,
    Mat,
    _canonical_exact_vector,
    column_space,
    eigen_numeric,
    minpoly,
    nullspace,
    ops_for,
    poly_divide_linear,
    poly_eval_matrix,
    rank_exact,
    rank_numeric,
    relative_residual,
)
from .reps import Rep, eval_word

__all__ = [
    "CorankReport",
    "BurnsideReport",
    "CommonEigReport",
    "WitnessReport",
    "CycleCell",
    "CycleAuditReport",
    "RankConclusion",
    "JordanProjectionReport",
    "InvarianceReport",
    "InvariantSubspaceReport",
    "corank",
    "burnside_dimension",
    "common_eigenvector",
    "subgroup_line_witness",
    "central_scalar",
    "theta_cycle_audit",
    "rank_conclusion_check",
    "jordan_projection",
    "subgroup_invariance_check",
    "invariant_subspace_search",
]

# Laurent-domain questions are answered generically: evaluate at these many
# rational points and demand agreement.  Fixed seed so every run sees the
# same sample.
_SAMPLE_SEED = 0x1B41D
_SAMPLE_COUNT = 3


def _sample_points() -> list[Fraction]:
    rng = random.Random(_SAMPLE_SEED)
    pts: list[Fraction] = []
    while len(pts) < _SAMPLE_COUNT:
        u = Fraction(rng.randint(7, 399), rng.randint(2, 11))
        if u in (0, 1) or u in pts:
            continue
        pts.append(u)
    return pts


def scalar_to_json(x):
    """Encode an exact or complex scalar the way matrix entries are encoded."""
    if x is None:
        return None
    if isinstance(x, LaurentPoly):
        return x.format()
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    z = complex(x)
    return [z.real, z.imag]


def _axis_key(z: complex):
    # candidate ordering used by eigenvalue searches: closest to the positive
    # real axis first, larger real part breaking ties
    return (abs(cmath.phase(z)) if z != 0 else 0.0, -z.real, -z.imag)


def _reconstruct_rational(value: complex, verify) -> Fraction | None:
    """Try to read an exact rational off a floating approximation.

    Candidates with small denominators are tried first, but only ones that
    actually sit next to the input; verify(candidate) must then confirm the
    candidate exactly.  The closeness gate keeps a coarse candidate from
    matching some other exact value that also verifies.
    """
    if abs(value.imag) > 1e-6 * max(1.0, abs(value)):
        return None
    for limit in (1, 1000, 10**9):
        cand = Fraction(value.real).limit_denominator(limit)
        if abs(cand - value.real) > 1e-6 * max(1.0, abs(value.real)):
            continue
        if verify(cand):
            return cand
    return None


def _eig_candidates(g: Mat, cluster_tol: float) -> list[tuple[object, int, bool]]:
    """Eigenvalues of a rational or complex matrix as (value, mult, exact).

    Rational matrices get their rational eigenvalues verified exactly, the
    rest stay floating.  Ordered by _axis_key.
    """
    gc = g if g.domain is Domain.COMPLEX else g.to_complex()
    clusters = eigen_numeric(gc, cluster_tol)
    ident = Mat.identity(g.rows, g.domain)
    out = []
    for c, mult in clusters:
        exact_val = None
        if g.domain is Domain.RATIONAL:
            exact_val = _reconstruct_rational(
                c, lambda f: (g - ident.scale(f)).det() == 0)
        if exact_val is not None:
            out.append((exact_val, mult, True))
        else:
            out.append((c, mult, False))
    out.sort(key=lambda t: _axis_key(complex(t[0])))
    return out


def _vstack(mats: list[Mat]) -> Mat:
    cols = mats[0].cols
    dom = mats[0].domain
    ents = []
    for m in mats:
        ents.extend(m.entries)
    return Mat(sum(m.rows for m in mats), cols, dom, ents)


def _hstack(cols: list[Mat]) -> Mat:
    return Mat.from_columns(cols)


# ---------------------------------------------------------------------------
# corank
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CorankReport:
    degree: int
    domain: Domain
    corank: int
    eigenvalue: object
    exact: bool
    table: tuple  # ((eigenvalue, rank, exact), ...)
    notes: str = ""

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "domain": self.domain.value,
            "corank": self.corank,
            "eigenvalue": scalar_to_json(self.eigenvalue),
            "exact": self.exact,
            "table": [
                {"eigenvalue": scalar_to_json(e), "rank": r, "exact": ex}
                for e, r, ex in self.table
            ],
            "notes": self.notes,
        }


def _corank_of_matrix(g: Mat, tol: float, cluster_tol: float):
    ident = Mat.identity(g.rows, g.domain)
    table = []
    for val, _, exact in _eig_candidates(g, cluster_tol):
        if exact:
            r = rank_exact(g - ident.scale(val))
        else:
            gc = g if g.domain is Domain.COMPLEX else g.to_complex()
            r = rank_numeric(gc - Mat.identity(g.rows, Domain.COMPLEX).scale(complex(val)), tol)
        table.append((val, r, exact))
    # ties go to the smallest-magnitude eigenvalue, then the positive-axis
    # order so +sqrt(u) beats its negative twin at equal magnitude
    best = min(table, key=lambda t: (t[1], abs(complex(t[0])), _axis_key(complex(t[0]))))
    return best, tuple(table)


def corank(rho: Rep, tol: float = DEFAULT_TOL,
           cluster_tol: float = DEFAULT_CLUSTER_TOL) -> CorankReport:
    """Smallest rank of rho(s1) - y*I over the eigenvalues y of rho(s1).

    The d-dimensional family built from the 2x2 block [[0,t],[1,0]] scores 2,
    the Burau family scores 1, one-dimensional characters score 0.  Laurent
    representations are sampled at three fixed rational points which must
    agree; a spread of values raises GenericDisagreement.
    """
    g = rho.gen(1)
    if rho.domain is Domain.LAURENT:
        pts = _sample_points()
        results = [(u, _corank_of_matrix(g.eval_at(u), tol, cluster_tol)) for u in pts]
        values = {best[1] for _, (best, _) in results}
        if len(values) != 1:
            detail = ", ".join("t=%s: %d" % (u, best[1]) for u, (best, _) in results)
            raise GenericDisagreement("corank differs across specializations (%s)" % detail)
        _, (best, table) = results[0]
        notes = "generic value; specializations at t=%s agree" % (
            ", ".join(str(u) for u in pts))
        return CorankReport(rho.degree, rho.domain, best[1], best[0], best[2],
                            table, notes)
    best, table = _corank_of_matrix(g, tol, cluster_tol)
    return CorankReport(rho.degree, rho.domain, best[1], best[0], best[2], table)


# ---------------------------------------------------------------------------
# span of the image
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BurnsideReport:
    degree: int
    domain: Domain
    dimension: int
    generations: int
    notes: str = ""

    @property
    def full(self) -> bool:
        return self.dimension == self.degree * self.degree

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "domain": self.domain.value,
            "dimension": self.dimension,
            "full": self.full,
            "generations": self.generations,
            "notes": self.notes,
        }


class _EchelonBasis:
    """Growing echelon basis over an exact domain.  insert() reports new dims."""

    def __init__(self, domain: Domain):
        self.o = ops_for(domain)
        self.domain = domain
        self.rows: list[tuple[int, list]] = []  # (pivot index, reduced vector)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def insert(self, vec) -> bool:
        o = self.o
        vec = list(vec)
        for pidx, row in self.rows:
            e = vec[pidx]
            if not o.is_zero(e):
                q = row[pidx]
                vec = [o.sub(o.mul(q, a), o.mul(e, b)) for a, b in zip(vec, row)]
        pivot = next((i for i, a in enumerate(vec) if not o.is_zero(a)), None)
        if pivot is None:
            return False
        vec = list(_canonical_exact_vector(vec, self.domain))
        self.rows.append((pivot, vec))
        return True

    def vectors(self) -> list[list]:
        return [row for _, row in self.rows]


class _OrthoBasis:
    """Growing orthonormal basis over the complex numbers."""

    def __init__(self, tol: float):
        self.tol = max(tol, 1e-12)
        self.vecs: list[np.ndarray] = []

    @property
    def dim(self) -> int:
        return len(self.vecs)

    def insert(self, v: np.ndarray) -> bool:
        v = np.asarray(v, dtype=complex).ravel()
        n0 = np.linalg.norm(v)
        if n0 == 0.0:
            return False
        w = v / n0
        for _ in range(2):  # re-orthogonalize once for stability
            for b in self.vecs:
                w = w - (b.conj() @ w) * b
        n1 = np.linalg.norm(w)
        if n1 <= self.tol:
            return False
        self.vecs.append(w / n1)
        return True

    def vectors(self) -> list[np.ndarray]:
        return list(self.vecs)


def _rational_content_scale(entries) -> Fraction:
    num = 0
    den = 1
    for e in entries:
        f = Fraction(e)
        num = gcd(num, f.numerator)
        den = lcm(den, f.denominator)
    return Fraction(num, den) if num else Fraction(1)


def _normalize_queue_matrix(m: Mat) -> Mat:
    # scaling a spanning element does not change the span; keep entries small
    if m.domain is Domain.RATIONAL:
        c = _rational_content_scale(m.entries)
        if c not in (0, 1):
            return m.scale(1 / c)
        return m
    if m.domain is Domain.COMPLEX:
        s = m.max_norm()
        return m.scale(1.0 / s) if s > 0 else m
    return m  # laurent matrices never reach the queue


def _span_closure(gens: list[Mat], degree: int, domain: Domain, tol: float,
                  max_generations: int) -> tuple[int, int]:
    mults = list(gens) + [g.inverse(tol) for g in gens]
    if domain is Domain.COMPLEX:
        basis: object = _OrthoBasis(tol)
        vec_of = lambda m: np.array(m.as_numpy(), dtype=complex).ravel()
    else:
        basis = _EchelonBasis(domain)
        vec_of = lambda m: m.entries
    limit = degree * degree
    frontier: list[Mat] = []
    for seed in [Mat.identity(degree, domain)] + mults:
        seed = _normalize_queue_matrix(seed)
        if basis.insert(vec_of(seed)):
            frontier.append(seed)
    generations = 0
    while frontier and basis.dim < limit:
        generations += 1
        if generations > max_generations:
            raise ClosureDiverged(
                "span closure still growing after %d generations" % max_generations)
        nxt = []
        for m in frontier:
            for g in mults:
                prod = _normalize_queue_matrix(g @ m)
                if basis.insert(vec_of(prod)):
                    nxt.append(prod)
            if basis.dim >= limit:
                break
        frontier = nxt
    return basis.dim, generations


def burnside_dimension(rho: Rep, tol: float = DEFAULT_TOL,
                       max_generations: int = 50) -> BurnsideReport:
    """Dimension of the linear span of all image matrices.

    Computed by closing the span of {I, generators, inverses} under left
    multiplication, with an early exit at degree^2 (the span cannot grow
    further, and hitting it certifies irreducibility).  Laurent inputs are
    specialized at the three fixed sample points and must agree.
    """
    if rho.domain is Domain.LAURENT:
        pts = _sample_points()
        dims = []
        gens_max = 0
        for u in pts:
            d, g = _span_closure([m.eval_at(u) for m in rho.gens], rho.degree,
                                 Domain.RATIONAL, tol, max_generations)
            dims.append(d)
            gens_max = max(gens_max, g)
        if len(set(dims)) != 1:
            raise GenericDisagreement(
                "span dimension differs across specializations (%s)"
                % ", ".join("t=%s: %d" % (u, d) for u, d in zip(pts, dims)))
        notes = "generic value; specializations at t=%s agree" % (
            ", ".join(str(u) for u in pts))
        return BurnsideReport(rho.degree, rho.domain, dims[0], gens_max, notes)
    dim, generations = _span_closure(list(rho.gens), rho.degree, rho.domain,
                                     tol, max_generations)
    return BurnsideReport(rho.degree, rho.domain, dim, generations)


# ---------------------------------------------------------------------------
# common eigenvectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommonEigReport:
    vector: Mat
    eigenvalues: tuple
    exact: bool

    def to_json_dict(self) -> dict:
        return {
            "vector": self.vector.to_json_dict(),
            "eigenvalues": [scalar_to_json(x) for x in self.eigenvalues],
            "exact": self.exact,
        }


def _np_nullspace(a: np.ndarray, tol: float) -> np.ndarray:
    if a.shape[0] == 0:
        return np.eye(a.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return vh[r:].conj().T


def common_eigenvector(rho: Rep, tol: float = DEFAULT_TOL,
                       cluster_tol: float = DEFAULT_CLUSTER_TOL,
                       node_cap: int = 4000) -> CommonEigReport | None:
    """Search for a vector that every generator scales.

    Works on the complexification by intersecting eigenspaces generator by
    generator (branching over eigenvalue choices, biggest eigenspaces first).
    Exact-domain inputs get a rational reconstruction attempt so the clean
    fixed vectors come back exact.  Returns None when no line survives.
    """
    if rho.domain is Domain.LAURENT:
        raise ValueError("common_eigenvector runs over a scalar field; specialize first")
    cgens = [np.array(g.as_numpy(), dtype=complex) for g in rho.to_complex().gens]
    n = rho.degree
    state = {"nodes": 0}

    def clusters_of(arr: np.ndarray):
        cl = eigen_numeric(Mat.from_numpy(arr), cluster_tol)
        return sorted(cl, key=lambda t: (-t[1], t[0].real, t[0].imag))

    def recurse(idx: int, basis: np.ndarray):
        if basis.shape[1] == 0:
            return None
        if idx == len(cgens):
            return basis
        g = cgens[idx]
        for mu, _ in clusters_of(g):
            state["nodes"] += 1
            if state["nodes"] > node_cap:
                return None
            x = _np_nullspace(g @ basis - mu * basis, tol)
            if x.shape[1] == 0:
                continue
            q, _ = np.linalg.qr(basis @ x)
            found = recurse(idx + 1, q[:, : x.shape[1]])
            if found is not None:
                return found
        return None

    final = recurse(0, np.eye(n, dtype=complex))
    if final is None:
        return None
    v = final[:, 0]
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]  # eigenvalues read off at the largest entry, robustly
    lambdas = [complex((g @ v)[k]) for g in cgens]
    j = next(i for i in range(n) if abs(v[i]) > cluster_tol)
    v = v / v[j]  # first nonzero coordinate becomes 1
    if rho.domain is Domain.RATIONAL:
        exact = _reconstruct_common_eig(rho, v)
        if exact is not None:
            return exact
    vec = Mat.column_vector([complex(x) for x in v], Domain.COMPLEX)
    return CommonEigReport(vec, tuple(lambdas), False)


def _reconstruct_common_eig(rho: Rep, v: np.ndarray) -> CommonEigReport | None:
    cand = []
    for x in v:
        if abs(x.imag) > 1e-6 * max(1.0, abs(x)):
            return None
        cand.append(Fraction(float(x.real)).limit_denominator(10**9))
    vec = Mat.column_vector(cand, Domain.RATIONAL)
    if vec.max_norm() == 0.0:
        return None
    pivot = next(i for i, c in enumerate(cand) if c != 0)
    lambdas = []
    for g in rho.gens:
        w = g @ vec
        lam = w.at(pivot, 0) / cand[pivot]
        if w != vec.scale(lam):
            return None
        lambdas.append(lam)
    scale = 1 / cand[pivot]
    vec = vec.scale(scale)  # first nonzero coordinate becomes 1
    return CommonEigReport(vec, tuple(lambdas), True)


# ---------------------------------------------------------------------------
# boundary-pinned eigenvector witness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    strands: int
    vector: Mat
    x: object
    y: object
    exact: bool
    residuals: tuple  # ((generator index, residual), ...)

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.residuals), default=0.0)

    def to_json_dict(self) -> dict:
        return {
            "strands": self.strands,
            "vector": self.vector.to_json_dict(),
            "x": scalar_to_json(self.x),
            "y": scalar_to_json(self.y),
            "exact": self.exact,
            "residuals": [{"generator": i, "residual": r} for i, r in self.residuals],
        }


def _vec_residual(g: Mat, v: Mat, lam) -> float:
    return relative_residual(g @ v, v.scale(lam))


def subgroup_line_witness(rho: Rep, tol: float = DEFAULT_TOL,
                          cluster_tol: float = DEFAULT_CLUSTER_TOL) -> WitnessReport | None:
    """Find v with s_i v = y v for i <= m-3 and s_{m-1} v = x v.

    Generator s_{m-2} is deliberately left unconstrained; what it does to v
    is the interesting part and is measured by theta_cycle_audit.  Candidate
    eigenvalue pairs are tried closest to the positive real axis first, so a
    positive real x wins over its negative partner when both admit witnesses.
    """
    m = rho.strands
    if m < 4:
        raise ValueError("witness search needs at least 4 strands")
    if rho.domain is Domain.LAURENT:
        raise ValueError("witness search runs over a scalar field; specialize first")
    ys = _eig_candidates(rho.gen(1), cluster_tol)
    xs = _eig_candidates(rho.gen(m - 1), cluster_tol)
    crho = rho if rho.domain is Domain.COMPLEX else None
    for y0, _, y_exact in ys:
        for x0, _, x_exact in xs:
            use_exact = rho.domain is Domain.RATIONAL and y_exact and x_exact
            if use_exact:
                work = rho
                yv, xv = y0, x0
            else:
                if crho is None:
                    crho = rho.to_complex()
                work = crho
                yv, xv = complex(y0), complex(x0)
            ident = Mat.identity(rho.degree, work.domain)
            blocks = [work.gen(i) - ident.scale(yv) for i in range(1, m - 2)]
            blocks.append(work.gen(m - 1) - ident.scale(xv))
            kern = nullspace(_vstack(blocks), tol)
            if not kern:
                continue
            v = kern[0]
            residuals = tuple(
                [(i, _vec_residual(work.gen(i), v, yv)) for i in range(1, m - 2)]
                + [(m - 1, _vec_residual(work.gen(m - 1), v, xv))]
            )
            return WitnessReport(m, v, xv, yv, use_exact, residuals)
    return None


# ---------------------------------------------------------------------------
# central element and the theta conjugation cycle
# ---------------------------------------------------------------------------


def _scalar_of(p: Mat, tol: float):
    n = p.rows
    o = ops_for(p.domain)
    d = p.at(0, 0)
    if p.domain is not Domain.COMPLEX:
        for i in range(n):
            for j in range(n):
                want = d if i == j else o.zero
                if p.at(i, j) != want:
                    raise NotScalar("matrix is not scalar at (%d, %d)" % (i, j))
        return d
    d = p.trace() / n
    ident = Mat.identity(n, Domain.COMPLEX)
    resid = (p - ident.scale(d)).max_norm()
    if resid > tol * max(p.max_norm(), 1e-300):
        raise NotScalar("matrix is off scalar by relative %.3g" % (
            resid / max(p.max_norm(), 1e-300)))
    return d


def central_scalar(rho: Rep, tol: float = DEFAULT_TOL):
    """The scalar d with rho(theta)^m = d*I, where theta = s1..s_{m-1}.

    theta^m is central, so an irreducible representation must send it to a
    scalar; NotScalar otherwise.  The block family gives d = t^(m-1), and a
    twist by the character y multiplies d by y^(m(m-1)).
    """
    m = rho.strands
    p = eval_word(rho, theta_word(m)) ** m
    return _scalar_of(p, tol)


@dataclass(frozen=True)
class CycleCell:
    i: int          # generator index
    k: int          # translate index
    kind: str       # "x", "y" or "free"
    residual: float | None
    parallel: bool | None  # free cells only: did the vector come back scaled anyway

    def to_json_dict(self) -> dict:
        return {"i": self.i, "k": self.k, "kind": self.kind,
                "residual": self.residual, "parallel": self.parallel}


@dataclass(frozen=True)
class CycleAuditReport:
    strands: int
    x: object
    y: object
    exact: bool
    d_scalar: object          # None when theta^m is not scalar
    d_note: str
    cycle_residuals: tuple
    cycle_ok: bool
    cells: tuple
    independence: int
    tol: float

    @property
    def table_ok(self) -> bool:
        limit = 0.0 if self.exact else self.tol
        return all(c.residual <= limit for c in self.cells if c.residual is not None)

    @property
    def degeneracies(self) -> tuple:
        return tuple(c for c in self.cells if c.kind == "free" and c.parallel)

    @property
    def independence_ok(self) -> bool:
        return self.independence >= self.strands - 2

    def to_json_dict(self) -> dict:
        return {
            "strands": self.strands,
            "x": scalar_to_json(self.x),
            "y": scalar_to_json(self.y),
            "exact": self.exact,
            "d_scalar": scalar_to_json(self.d_scalar),
            "d_note": self.d_note,
            "cycle_residuals": list(self.cycle_residuals),
            "cycle_ok": self.cycle_ok,
            "table_ok": self.table_ok,
            "cells": [c.to_json_dict() for c in self.cells],
            "degeneracies": [c.to_json_dict() for c in self.degeneracies],
            "independence": self.independence,
            "independence_ok": self.independence_ok,
            "tol": self.tol,
        }


def _is_exact_scalar_for(domain: Domain, s) -> bool:
    if isinstance(s, (int, Fraction)):
        return True
    return domain is Domain.LAURENT and isinstance(s, LaurentPoly)


def _parallel(w: Mat, v: Mat, tol: float) -> bool:
    if w.domain is not Domain.COMPLEX:
        n = w.rows
        for a in range(n):
            for b in range(a + 1, n):
                lhs = w.at(a, 0) * v.at(b, 0)
                rhs = w.at(b, 0) * v.at(a, 0)
                if lhs != rhs:
                    return False
        return True
    wv = np.array(w.as_numpy(), dtype=complex).ravel()
    vv = np.array(v.as_numpy(), dtype=complex).ravel()
    nw = np.linalg.norm(wv)
    nv = np.linalg.norm(vv)
    if nw == 0.0 or nv == 0.0:
        return True
    coef = (vv.conj() @ wv) / (nv * nv)
    return float(np.linalg.norm(wv - coef * vv) / nw) <= tol


def _normalize_translate(w: Mat) -> Mat:
    # translates are only used projectively (eigen-relation residuals, the
    # parallel test and the rank of a stacked prefix are all scale invariant),
    # and theta grows them geometrically; rescaling each one keeps the rank
    # test away from the relative floor and exact entries small
    if w.domain is Domain.COMPLEX:
        scale = w.max_norm()
        return w.scale(1.0 / scale) if scale > 0.0 else w
    column = [w.at(r, 0) for r in range(w.rows)]
    return Mat.column_vector(_canonical_exact_vector(column, w.domain), w.domain)


def theta_cycle_audit(rho: Rep, v: Mat, x, y,
                      tol: float = DEFAULT_TOL) -> CycleAuditReport:
    """Audit the conjugation cycle of theta = s1..s_{m-1} against a witness.

    Checks, with one residual each:
      * theta s_i theta^-1 = s_{i+1} for i < m-1, and the cycle closes
        through s_0 = theta s_{m-1} theta^-1 back to s_1;
      * the translates v_k = theta^(k+1) v satisfy s_i v_k = x v_k when
        i = k and s_i v_k = y v_k when (k - i) mod m lies in 2..m-2; the two
        leftover diagonals per generator are unconstrained and are only
        flagged when the vector comes back scaled anyway (a degeneracy);
      * how many leading translates v_1..v_m stay linearly independent.

    The witness must satisfy its defining relations (s_i v = y v for
    i <= m-3, s_{m-1} v = x v) or WitnessInvalid is raised.
    """
    m = rho.strands
    if m < 3:
        raise ValueError("cycle audit needs at least 3 strands")
    if v.cols != 1 or v.rows != rho.degree:
        raise ValueError("witness must be a degree-length column vector")
    exact = (rho.domain is not Domain.COMPLEX
             and v.domain is rho.domain
             and _is_exact_scalar_for(rho.domain, x)
             and _is_exact_scalar_for(rho.domain, y))
    if rho.domain is Domain.LAURENT and not exact:
        raise ValueError("Laurent-domain audit needs exact scalars and vector")
    if exact:
        o = ops_for(rho.domain)
        work, wv = rho, v
        xs, ys = o.coerce(x), o.coerce(y)
    else:
        work, wv = rho.to_complex(), v.to_complex()
        xs, ys = complex(x), complex(y)
    if wv.max_norm() == 0.0:
        raise WitnessInvalid("witness vector is zero")
    limit = 0.0 if exact else tol
    for i in list(range(1, m - 2)) + [m - 1]:
        lam = ys if i <= m - 3 else xs
        r = _vec_residual(work.gen(i), wv, lam)
        if r > limit:
            raise WitnessInvalid(
                "witness fails its defining relation at s%d (residual %.3g)" % (i, r))

    theta = eval_word(work, theta_word(m))
    theta_inv = theta.inverse()
    try:
        d = _scalar_of(theta ** m, tol)
        d_note = ""
    except NotScalar as exc:
        d = None
        d_note = str(exc)

    cycle_residuals = []
    for i in range(1, m - 1):
        cycle_residuals.append(relative_residual(
            theta @ work.gen(i) @ theta_inv, work.gen(i + 1)))
    sigma0 = theta @ work.gen(m - 1) @ theta_inv
    cycle_residuals.append(relative_residual(theta @ sigma0 @ theta_inv, work.gen(1)))
    cycle_ok = all(r <= limit for r in cycle_residuals)

    translates = []
    w = theta @ (theta @ wv)
    for _ in range(m):
        w = _normalize_translate(w)
        translates.append(w)
        w = theta @ w

    cells = []
    for i in range(1, m):
        gi = work.gen(i)
        for k in range(1, m + 1):
            r = (k - i) % m
            vk = translates[k - 1]
            if r == 0:
                cells.append(CycleCell(i, k, "x", _vec_residual(gi, vk, xs), None))
            elif r in (1, m - 1):
                cells.append(CycleCell(i, k, "free", None, _parallel(gi @ vk, vk, tol)))
            else:
                cells.append(CycleCell(i, k, "y", _vec_residual(gi, vk, ys), None))

    independence = 0
    for k in range(1, m + 1):
        stacked = _hstack(translates[:k])
        r = rank_exact(stacked) if exact else rank_numeric(stacked, tol)
        if r < k:
            break
        independence = k

    return CycleAuditReport(m, xs, ys, exact, d, d_note,
                            tuple(cycle_residuals), cycle_ok, tuple(cells),
                            independence, tol)


@dataclass(frozen=True)
class RankConclusion:
    y: object
    rank: int
    degree: int
    exact: bool

    @property
    def ok(self) -> bool:
        # the dichotomy threshold: a y-eigenspace of dimension degree-2 or more
        return self.rank <= 2

    def to_json_dict(self) -> dict:
        return {"y": scalar_to_json(self.y), "rank": self.rank,
                "degree": self.degree, "exact": self.exact, "ok": self.ok}


def rank_conclusion_check(rho: Rep, y, tol: float = DEFAULT_TOL) -> RankConclusion:
    """Rank of rho(s1) - y*I, exact when both sides allow it."""
    exact = rho.domain is not Domain.COMPLEX and _is_exact_scalar_for(rho.domain, y)
    if exact:
        o = ops_for(rho.domain)
        g = rho.gen(1)
        r = rank_exact(g - Mat.identity(rho.degree, rho.domain).scale(o.coerce(y)))
    else:
        g = rho.gen(1).to_complex() if rho.domain is not Domain.COMPLEX else rho.gen(1)
        r = rank_numeric(g - Mat.identity(rho.degree, Domain.COMPLEX).scale(complex(y)), tol)
    return RankConclusion(y, r, rho.degree, exact)


# ---------------------------------------------------------------------------
# Jordan projections and invariant subspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JordanProjectionReport:
    eigenvalue: object
    dim: int
    basis: tuple  # column vectors
    minimal_polynomial: tuple

    def to_json_dict(self) -> dict:
        return {
            "eigenvalue": scalar_to_json(self.eigenvalue),
            "dim": self.dim,
            "basis": [b.to_json_dict() for b in self.basis],
            "minimal_polynomial": [scalar_to_json(c) for c in self.minimal_polynomial],
        }


def jordan_projection(m: Mat, lam, tol: float = DEFAULT_TOL,
                      cluster_tol: float = DEFAULT_CLUSTER_TOL) -> JordanProjectionReport:
    """Column space of q(m) where q = minpoly(m) / (X - lam).

    The dimension equals the number of maximal-size Jordan blocks at lam,
    and for a diagonalizable matrix the basis spans the lam-eigenspace.
    NotEigenvalue if lam is not a root of the minimal polynomial.
    """
    if not m.is_square:
        raise ValueError("jordan_projection needs a square matrix")
    if m.domain is Domain.COMPLEX:
        lam_c = complex(lam)
        scale = max(m.max_norm(), 1.0)
        centers = [c for c, _ in eigen_numeric(m, cluster_tol)]
        near = min(centers, key=lambda c: abs(c - lam_c), default=None)
        if near is None or abs(near - lam_c) > cluster_tol * scale:
            raise NotEigenvalue("%s is not an eigenvalue of the matrix" % lam_c)
        mp = minpoly(m, tol, cluster_tol)
        q, _ = poly_divide_linear(mp, near, Domain.COMPLEX)
        basis = column_space(poly_eval_matrix(q, m), tol)
        return JordanProjectionReport(near, len(basis), tuple(basis), tuple(mp))
    o = ops_for(m.domain)
    lam_e = o.coerce(lam)
    mp = minpoly(m)
    q, rem = poly_divide_linear(mp, lam_e, m.domain)
    if not o.is_zero(rem):
        raise NotEigenvalue("%s does not annihilate the minimal polynomial" % (lam,))
    basis = column_space(poly_eval_matrix(q, m))
    return JordanProjectionReport(lam_e, len(basis), tuple(basis), tuple(mp))


@dataclass(frozen=True)
class InvarianceReport:
    entries: tuple  # ((generator index, ok, residual), ...)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.entries)

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "entries": [{"generator": i, "ok": ok, "residual": r}
                        for i, ok, r in self.entries],
        }


def subgroup_invariance_check(rho: Rep, indices, basis,
                              tol: float = DEFAULT_TOL) -> InvarianceReport:
    """Do the given generators map span(basis) into itself?

    basis is a matrix whose columns span the subspace, or a list of column
    vectors.  Exact domains decide membership by rank, the complex domain by
    the projection defect relative to the mapped columns.
    """
    if isinstance(basis, (list, tuple)):
        basis = _hstack(list(basis))
    if basis.domain is not rho.domain:
        raise ValueError("basis domain does not match the representation")
    entries = []
    if rho.domain is Domain.COMPLEX:
        varr = np.array(basis.as_numpy(), dtype=complex)
        q, _ = np.linalg.qr(varr)
        s = np.linalg.svd(varr, compute_uv=False)
        r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
        q = q[:, :r]
        for i in indices:
            w = np.array((rho.gen(i) @ basis).as_numpy(), dtype=complex)
            defect = w - q @ (q.conj().T @ w)
            scale = max(float(np.max(np.abs(w))), 1e-300)
            resid = float(np.max(np.abs(defect))) / scale
            entries.append((i, resid <= tol, resid))
    else:
        rv = rank_exact(basis)
        for i in indices:
            w = rho.gen(i) @ basis
            both = Mat(basis.rows, basis.cols + w.cols, basis.domain,
                       [x for row in range(basis.rows)
                        for x in (list(basis.row(row)) + list(w.row(row)))])
            grown = rank_exact(both) - rv
            entries.append((i, grown == 0, float(grown)))
    return InvarianceReport(tuple(entries))


@dataclass(frozen=True)
class InvariantSubspaceReport:
    found: bool
    dim: int
    basis: Mat | None
    trials: int
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "found": self.found,
            "dim": self.dim,
            "basis": self.basis.to_json_dict() if self.basis is not None else None,
            "trials": self.trials,
            "note": self.note,
        }


def _random_image_combination(rho: Rep, rng: random.Random) -> Mat:
    terms = rng.randint(2, 4)
    o = ops_for(rho.domain)
    acc = Mat.zeros(rho.degree, rho.degree, rho.domain)
    for _ in range(terms):
        word = Mat.identity(rho.degree, rho.domain)
        for _ in range(rng.randint(1, 3)):
            i = rng.randint(1, rho.strands - 1)
            word = word @ (rho.gen(i) if rng.random() < 0.7 else rho.gen_inverse(i))
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        acc = acc + word.scale(o.coerce(c))
    return acc


def _spin_exact(start: Mat, gens: list[Mat], domain: Domain) -> _EchelonBasis:
    basis = _EchelonBasis(domain)
    queue = []
    if basis.insert(start.entries):
        queue.append(start)
    while queue:
        w = queue.pop()
        for g in gens:
            u = g @ w
            if basis.insert(u.entries):
                queue.append(u)
    return basis


def _spin_numeric(start: np.ndarray, gens: list[np.ndarray], tol: float) -> _OrthoBasis:
    basis = _OrthoBasis(tol)
    queue = []
    if basis.insert(start):
        queue.append(start)
    while queue:
        w = queue.pop()
        for g in gens:
            u = g @ w
            if basis.insert(u):
                queue.append(u)
    return basis


def invariant_subspace_search(rho: Rep, tries: int = 30, seed: int = 0,
                              tol: float = DEFAULT_TOL,
                              cluster_tol: float = DEFAULT_CLUSTER_TOL) -> InvariantSubspaceReport:
    """Randomized search for a proper nonzero invariant subspace.

    Each trial draws a random integer combination of image matrices, picks a
    singular shift from its eigenvalues, and spins the kernel vectors under
    the generators.  A spin that stabilizes below the full degree exhibits
    invariance directly.  Rational representations only accept shifts that
    verify exactly, so a reported subspace is exact; the complex domain spins
    numerically.  Deterministic for a fixed seed.
    """
    if rho.domain is Domain.LAURENT:
        raise ValueError("invariant subspace search runs over a scalar field; specialize first")
    n = rho.degree
    ident_r = Mat.identity(n, rho.domain)
    for trial in range(tries):
        rng = random.Random(seed * 1_000_003 + trial)
        a = _random_image_combination(rho, rng)
        for c, _, exact in _eig_candidates(a, cluster_tol):
            if rho.domain is Domain.RATIONAL:
                if not exact:
                    continue
                for vec in nullspace(a - ident_r.scale(c)):
                    spun = _spin_exact(vec, list(rho.gens), rho.domain)
                    if 0 < spun.dim < n:
                        cols = [Mat.column_vector(row, rho.domain)
                                for row in spun.vectors()]
                        return InvariantSubspaceReport(
                            True, spun.dim, _hstack(cols), trial + 1,
                            "spun from the kernel of a random image combination"
                            " shifted by %s" % c)
            else:
                arr = np.array(a.as_numpy(), dtype=complex)
                gens_np = [np.array(g.as_numpy(), dtype=complex) for g in rho.gens]
                shifted = Mat.from_numpy(arr - complex(c) * np.eye(n))
                for vec in nullspace(shifted, tol):
                    start = np.array(vec.as_numpy(), dtype=complex).ravel()
                    spun = _spin_numeric(start, gens_np, tol)
                    if 0 < spun.dim < n:
                        cols = [Mat.column_vector([complex(x) for x in b], Domain.COMPLEX)
                                for b in spun.vectors()]
                        return InvariantSubspaceReport(
                            True, spun.dim, _hstack(cols), trial + 1,
                            "numeric spin from a singular shift %s" % c)
    return InvariantSubspaceReport(False, 0, None, tries,
                                   "no proper invariant subspace surfaced")
