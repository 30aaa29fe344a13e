"""Matrix representations of braid groups.

A ``Rep`` holds one invertible matrix per generator s1..s_{m-1}.  Two
families are built in:

  standard_rep(n)   n-dimensional over the Laurent ring: generator i acts as
                    the identity except for the 2x2 block [[0, t], [1, 0]]
                    in rows/columns (i, i+1).  Trace n-2, determinant -t.
  burau_rep(n)      the unreduced Burau family, block [[1-t, t], [1, 0]];
                    every row sums to 1, so the all-ones vector is fixed.

Representations can be twisted by a scalar character (every generator scaled
by y), specialized at t=u (exact rational or complex), and evaluated on braid
words.  Braid relations are verified on construction by default; the trusted
closed-form constructors defer the check explicitly since their relations
hold identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .braid import BraidWord
from .errors import (
    IndexOutOfRange,
    NotInvertible,
    RelationFailure,
    SchemaError,
    ZeroScalar,
    ZeroSubstitution,
)
from .laurent import LaurentPoly
from .matrix import DEFAULT_TOL, Domain, Mat, mat_from_json, relative_residual

__all__ = [
    "Rep",
    "RelationReport",
    "standard_rep",
    "burau_rep",
    "character_rep",
    "character_twist",
    "specialize",
    "eval_word",
    "check_braid_relations",
    "rep_from_json",
]


@dataclass(frozen=True)
class RelationEntry:
    kind: str  # "adjacent" or "far"
    i: int
    j: int
    residual: float

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "i": self.i, "j": self.j, "residual": self.residual}


@dataclass(frozen=True)
class RelationReport:
    """Outcome of checking all defining braid relations.

    Residuals are relative: |lhs - rhs| in max-norm divided by the larger
    side's max-norm.  Exact domains report exactly 0.0 on success.
    """

    domain: Domain
    tol: float
    entries: tuple[RelationEntry, ...]

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    @property
    def ok(self) -> bool:
        if self.domain is Domain.COMPLEX:
            return self.max_residual <= self.tol
        return self.max_residual == 0.0

    def to_json_dict(self) -> dict:
        return {
            "domain": self.domain.value,
            "tol": self.tol,
            "ok": self.ok,
            "max_residual": self.max_residual,
            "relations": [e.to_json_dict() for e in self.entries],
        }


class Rep:
    """An assignment of one invertible matrix per braid generator."""

    def __init__(self, strands: int, gens, label: str = "", *,
                 check: bool = True, tol: float = DEFAULT_TOL):
        if strands < 2:
            raise ValueError("a representation needs at least 2 strands")
        gens = tuple(gens)
        if len(gens) != strands - 1:
            raise ValueError(
                "expected %d generator images, got %d" % (strands - 1, len(gens))
            )
        degree = gens[0].rows
        domain = gens[0].domain
        for g in gens:
            if not g.is_square or g.rows != degree or g.domain != domain:
                raise ValueError("generator images must be square, one size, one domain")
        self.strands = strands
        self.degree = degree
        self.domain = domain
        self.gens = gens
        self.label = label
        self._inv_cache: dict[int, Mat] = {}
        if check:
            for k, g in enumerate(gens):
                try:
                    self._inv_cache[k] = g.inverse(tol)
                except NotInvertible as exc:
                    raise NotInvertible("generator s%d: %s" % (k + 1, exc)) from exc
            report = check_braid_relations(self, tol)
            if not report.ok:
                raise RelationFailure(
                    "braid relations fail, max residual %.3g" % report.max_residual
                )

    def gen(self, i: int) -> Mat:
        """Image of s_i, 1-based."""
        if not 1 <= i <= self.strands - 1:
            raise IndexOutOfRange("generator index %d outside 1..%d" % (i, self.strands - 1))
        return self.gens[i - 1]

    def gen_inverse(self, i: int) -> Mat:
        if not 1 <= i <= self.strands - 1:
            raise IndexOutOfRange("generator index %d outside 1..%d" % (i, self.strands - 1))
        k = i - 1
        if k not in self._inv_cache:
            try:
                self._inv_cache[k] = self.gens[k].inverse()
            except NotInvertible as exc:
                raise NotInvertible("generator s%d: %s" % (i, exc)) from exc
        return self._inv_cache[k]

    def to_complex(self) -> "Rep":
        if self.domain is Domain.COMPLEX:
            return self
        return Rep(self.strands, [g.to_complex() for g in self.gens],
                   self.label, check=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return (self.strands == other.strands and self.degree == other.degree
                and self.domain == other.domain and self.gens == other.gens)

    def __repr__(self) -> str:
        return "Rep(strands=%d, degree=%d, domain=%s, label=%r)" % (
            self.strands, self.degree, self.domain.value, self.label)

    def to_json_dict(self) -> dict:
        return {
            "strands": self.strands,
            "degree": self.degree,
            "domain": self.domain.value,
            "label": self.label,
            "generators": [g.to_json_dict() for g in self.gens],
        }


def rep_from_json(d: dict, *, check: bool = True, tol: float = DEFAULT_TOL) -> Rep:
    if not isinstance(d, dict):
        raise SchemaError("representation JSON must be an object")
    for key in ("strands", "degree", "domain", "generators"):
        if key not in d:
            raise SchemaError("representation JSON missing %r" % key)
    strands = d["strands"]
    if not isinstance(strands, int) or strands < 2:
        raise SchemaError("strands must be an integer >= 2")
    gens_json = d["generators"]
    if not isinstance(gens_json, list) or len(gens_json) != strands - 1:
        raise SchemaError("need exactly strands-1 generator matrices")
    gens = [mat_from_json(g) for g in gens_json]
    label = d.get("label", "")
    if not isinstance(label, str):
        raise SchemaError("label must be a string")
    try:
        rep = Rep(strands, gens, label, check=check, tol=tol)
    except (ValueError, NotInvertible, RelationFailure) as exc:
        if isinstance(exc, (NotInvertible, RelationFailure)):
            raise
        raise SchemaError(str(exc)) from exc
    if rep.degree != d["degree"]:
        raise SchemaError("declared degree %r does not match matrices" % (d["degree"],))
    if d["domain"] != rep.domain.value:
        raise SchemaError("declared domain %r does not match matrices" % (d["domain"],))
    return rep


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def _block_family(n: int, block: list[list[LaurentPoly]], name: str) -> Rep:
    if n < 2:
        raise ValueError("need at least 2 strands")
    one = LaurentPoly.one()
    zero = LaurentPoly.zero()
    gens = []
    for i in range(n - 1):
        ent = [[one if r == c else zero for c in range(n)] for r in range(n)]
        ent[i][i] = block[0][0]
        ent[i][i + 1] = block[0][1]
        ent[i + 1][i] = block[1][0]
        ent[i + 1][i + 1] = block[1][1]
        gens.append(Mat.from_rows(ent, Domain.LAURENT))
    # closed-form matrices satisfy the relations identically; the check is
    # deferred here and exercised by the test suite instead
    return Rep(n, gens, "%s(%d)" % (name, n), check=False)


def standard_rep(n: int) -> Rep:
    """The n-dimensional family with generator block [[0, t], [1, 0]]."""
    t = LaurentPoly.t()
    zero = LaurentPoly.zero()
    one = LaurentPoly.one()
    return _block_family(n, [[zero, t], [one, zero]], "standard")


def burau_rep(n: int) -> Rep:
    """The unreduced Burau family, generator block [[1-t, t], [1, 0]]."""
    t = LaurentPoly.t()
    zero = LaurentPoly.zero()
    one = LaurentPoly.one()
    return _block_family(n, [[one - t, t], [one, zero]], "burau")


def character_rep(strands: int, y, domain: Domain | None = None) -> Rep:
    """The one-dimensional representation sending every generator to [y]."""
    if domain is None:
        if isinstance(y, LaurentPoly):
            domain = Domain.LAURENT
        elif isinstance(y, (int, Fraction)):
            domain = Domain.RATIONAL
        else:
            domain = Domain.COMPLEX
    g = Mat(1, 1, domain, [y])
    if _scalar_is_zero(g.at(0, 0), domain):
        raise ZeroScalar("character value must be nonzero")
    return Rep(strands, [g] * (strands - 1), "chi(%s)" % _fmt_scalar(g.at(0, 0)),
               check=False)


def _scalar_is_zero(y, domain: Domain) -> bool:
    if domain is Domain.LAURENT:
        return y.is_zero
    return y == 0


def _fmt_scalar(y) -> str:
    if isinstance(y, LaurentPoly):
        return y.format()
    if isinstance(y, Fraction):
        return str(y)
    if isinstance(y, complex):
        if y.imag == 0:
            return repr(y.real)
        return repr(y)
    return str(y)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def character_twist(rho: Rep, y) -> Rep:
    """Tensor with the character y: every generator image is scaled by y.

    y must be invertible in the representation's domain (nonzero scalar, or a
    unit of the Laurent ring)."""
    from .matrix import ops_for

    o = ops_for(rho.domain)
    y = o.coerce(y)
    if _scalar_is_zero(y, rho.domain):
        raise ZeroScalar("twist by zero leaves the general linear group")
    if rho.domain is Domain.LAURENT and not y.is_unit:
        raise NotInvertible("twist scalar must be a unit of the Laurent ring: %s" % y)
    label = "chi(%s)*%s" % (_fmt_scalar(y), rho.label or "rep")
    return Rep(rho.strands, [g.scale(y) for g in rho.gens], label, check=False)


def specialize(rho: Rep, u) -> Rep:
    """Evaluate a Laurent-domain representation at t=u.

    Exact rational u gives a RATIONAL representation, float or complex u a
    COMPLEX one.  u=0 is rejected (generator determinants vanish with t);
    u=1 is allowed but flagged in the label as the degenerate permutation
    point.  Invertibility of every image is re-verified.
    """
    if rho.domain is not Domain.LAURENT:
        raise ValueError("specialize applies to Laurent-domain representations")
    if u == 0:
        raise ZeroSubstitution("t=0 is outside the invertible locus")
    exact = isinstance(u, (int, Fraction))
    u = Fraction(u) if exact else complex(u)
    gens = [g.eval_at(u) for g in rho.gens]
    for k, g in enumerate(gens):
        if exact:
            if g.det() == 0:
                raise NotInvertible("generator s%d is singular at t=%s" % (k + 1, u))
        else:
            g.inverse()  # raises NotInvertible on failure
    label = "%s@t=%s" % (rho.label or "rep", _fmt_scalar(u))
    if u == 1:
        label += " [u=1 permutation point]"
    return Rep(rho.strands, gens, label, check=False)


def eval_word(rho: Rep, w: BraidWord) -> Mat:
    """Image of a braid word: the ordered product of generator images."""
    if w.strands != rho.strands:
        raise ValueError("word strands %d do not match representation strands %d"
                         % (w.strands, rho.strands))
    out = Mat.identity(rho.degree, rho.domain)
    for idx, sign in w.letters:
        out = out @ (rho.gen(idx) if sign > 0 else rho.gen_inverse(idx))
    return out


def check_braid_relations(rho: Rep, tol: float = DEFAULT_TOL) -> RelationReport:
    """Verify s_i s_{i+1} s_i = s_{i+1} s_i s_{i+1} and far commutation.

    Returns a report with one relative max-norm residual per relation; exact
    domains must come out identically zero.
    """
    entries = []
    gens = rho.gens
    m = rho.strands
    for i in range(m - 2):
        a, b = gens[i], gens[i + 1]
        lhs = a @ b @ a
        rhs = b @ a @ b
        entries.append(RelationEntry("adjacent", i + 1, i + 2,
                                     relative_residual(lhs, rhs)))
    for i in range(m - 1):
        for j in range(i + 2, m - 1):
            lhs = gens[i] @ gens[j]
            rhs = gens[j] @ gens[i]
            entries.append(RelationEntry("far", i + 1, j + 1,
                                         relative_residual(lhs, rhs)))
    return RelationReport(rho.domain, tol, tuple(entries))
