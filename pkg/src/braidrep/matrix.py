"""Dense matrices over three scalar domains, with exact and floating kernels.

Domains:
  RATIONAL  exact rationals (fractions.Fraction)
  LAURENT   exact Laurent polynomials in t over the rationals
  COMPLEX   double-precision complex floats

Exact-domain eliminations are fraction-free (Bareiss for echelon form and
determinants, Montante's Gauss-Jordan variant for inverses and nullspaces),
so every intermediate value stays in the scalar ring and divisions are exact
by construction.  Floating-domain kernels use numpy; rank decisions use
complete-pivot elimination with a relative threshold, and eigenvalues are
clustered with an explicit ambiguity check rather than silently merged.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ClusterAmbiguous, NotDivisible, NotInvertible, SchemaError
from .laurent import LaurentPoly

DEFAULT_TOL = 1e-9
DEFAULT_CLUSTER_TOL = 1e-6


class Domain(str, Enum):
    RATIONAL = "rational"
    LAURENT = "laurent"
    COMPLEX = "complex"

    def __str__(self) -> str:  # keep JSON round-trips tidy
        return self.value


# ---------------------------------------------------------------------------
# scalar operations per domain
# ---------------------------------------------------------------------------


class _Ops:
    """Scalar operation table for one domain."""

    __slots__ = ("zero", "one", "is_zero", "add", "sub", "mul", "neg", "div", "mag", "coerce", "eq")

    def __init__(self, zero, one, is_zero, add, sub, mul, neg, div, mag, coerce, eq):
        self.zero = zero
        self.one = one
        self.is_zero = is_zero
        self.add = add
        self.sub = sub
        self.mul = mul
        self.neg = neg
        self.div = div
        self.mag = mag
        self.coerce = coerce
        self.eq = eq


def _coerce_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, LaurentPoly) and x.is_const():
        return x.const_value()
    raise TypeError("not an exact rational: %r" % (x,))


def _coerce_laurent(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentPoly.const(x)
    raise TypeError("not a Laurent polynomial: %r" % (x,))


def _coerce_complex(x) -> complex:
    if isinstance(x, complex):
        return x
    if isinstance(x, (int, float, Fraction)):
        return complex(x)
    raise TypeError("not a complex scalar: %r" % (x,))


def _div_rational(a: Fraction, b: Fraction) -> Fraction:
    if not b:
        raise NotDivisible("rational division by zero")
    return a / b

def _div_complex(a: complex, b: complex) -> complex:
    if b == 0:
        raise NotDivisible("complex division by zero")
    return a / b


_OPS: dict[Domain, _Ops] = {
    Domain.RATIONAL: _Ops(
        zero=Fraction(0),
        one=Fraction(1),
        is_zero=lambda x: not x,
        add=lambda a, b: a + b,
        sub=lambda a, b: a - b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        div=_div_rational,
        mag=lambda x: abs(float(x)),
        coerce=_coerce_rational,
        eq=lambda a, b: a == b,
    ),
    Domain.LAURENT: _Ops(
        zero=LaurentPoly.zero(),
        one=LaurentPoly.one(),
        is_zero=lambda x: x.is_zero,
        add=lambda a, b: a + b,
        sub=lambda a, b: a - b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        div=lambda a, b: a.divide_exact(b),
        mag=lambda x: x.magnitude(),
        coerce=_coerce_laurent,
        eq=lambda a, b: a == b,
    ),
    Domain.COMPLEX: _Ops(
        zero=complex(0),
        one=complex(1),
        is_zero=lambda x: x == 0,
        add=lambda a, b: a + b,
        sub=lambda a, b: a - b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        div=_div_complex,
        mag=abs,
        coerce=_coerce_complex,
        eq=lambda a, b: a == b,
    ),
}


def ops_for(domain: Domain) -> _Ops:
    return _OPS[Domain(domain)]


def entry_to_json(x, domain: Domain):
    domain = Domain(domain)
    if domain is Domain.RATIONAL:
        return str(x)
    if domain is Domain.LAURENT:
        return x.format()
    return [float(x.real), float(x.imag)]


def entry_from_json(v, domain: Domain):
    domain = Domain(domain)
    try:
        if domain is Domain.RATIONAL:
            if isinstance(v, str):
                return Fraction(v)
            if isinstance(v, int):
                return Fraction(v)
            raise TypeError("rational entries must be strings or integers")
        if domain is Domain.LAURENT:
            if isinstance(v, str):
                return LaurentPoly.parse(v)
            if isinstance(v, int):
                return LaurentPoly.const(v)
            raise TypeError("laurent entries must be strings or integers")
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return complex(float(v[0]), float(v[1]))
        if isinstance(v, (int, float)):
            return complex(v)
        raise TypeError("complex entries must be [re, im] pairs")
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError("bad %s entry %r: %s" % (domain.value, v, exc)) from exc


# ---------------------------------------------------------------------------
# the matrix type
# ---------------------------------------------------------------------------


class Mat:
    """Immutable dense matrix with row-major entries in a declared domain."""

    def __init__(self, rows: int, cols: int, domain: Domain, entries: Iterable):
        self.rows = int(rows)
        self.cols = int(cols)
        self.domain = Domain(domain)
        coerce = _OPS[self.domain].coerce
        ent = tuple(coerce(x) for x in entries)
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(ent) != self.rows * self.cols:
            raise ValueError(
                "entry count %d does not match shape %dx%d" % (len(ent), self.rows, self.cols)
            )
        self.entries = ent
        self._np_cache: np.ndarray | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain: Domain) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, domain, [x for row in rows for x in row])

    @classmethod
    def identity(cls, n: int, domain: Domain) -> "Mat":
        o = _OPS[Domain(domain)]
        return cls(n, n, domain, [o.one if i == j else o.zero for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int, domain: Domain) -> "Mat":
        z = _OPS[Domain(domain)].zero
        return cls(rows, cols, domain, [z] * (rows * cols))

    @classmethod
    def column_vector(cls, values: Sequence, domain: Domain) -> "Mat":
        return cls(len(values), 1, domain, list(values))

    @classmethod
    def from_columns(cls, cols: Sequence["Mat"]) -> "Mat":
        if not cols:
            raise ValueError("no columns")
        n = cols[0].rows
        dom = cols[0].domain
        if any(c.rows != n or c.cols != 1 or c.domain != dom for c in cols):
            raise ValueError("columns must be n x 1 in one domain")
        return cls(n, len(cols), dom, [c.entries[i] for i in range(n) for c in cols])

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "Mat":
        a = np.asarray(arr, dtype=complex)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(a.shape[0], a.shape[1], Domain.COMPLEX, [complex(x) for x in a.ravel()])

    # -- access ---------------------------------------------------------------

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def at(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def col_mat(self, j: int) -> "Mat":
        return Mat.column_vector(self.col(j), self.domain)

    def row_lists(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    # -- arithmetic -------------------------------------------------------------

    def _require_same_shape(self, other: "Mat"):
        if not isinstance(other, Mat):
            raise TypeError("expected Mat")
        if self.domain != other.domain:
            raise ValueError("domain mismatch: %s vs %s" % (self.domain, other.domain))
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def __add__(self, other: "Mat") -> "Mat":
        self._require_same_shape(other)
        o = _OPS[self.domain]
        return Mat(self.rows, self.cols, self.domain,
                   [o.add(a, b) for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Mat") -> "Mat":
        self._require_same_shape(other)
        o = _OPS[self.domain]
        return Mat(self.rows, self.cols, self.domain,
                   [o.sub(a, b) for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "Mat":
        o = _OPS[self.domain]
        return Mat(self.rows, self.cols, self.domain, [o.neg(a) for a in self.entries])

    def scale(self, s) -> "Mat":
        o = _OPS[self.domain]
        s = o.coerce(s)
        return Mat(self.rows, self.cols, self.domain, [o.mul(s, a) for a in self.entries])

    def __mul__(self, s) -> "Mat":
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if not isinstance(other, Mat):
            return NotImplemented
        if self.domain != other.domain:
            raise ValueError("domain mismatch: %s vs %s" % (self.domain, other.domain))
        if self.cols != other.rows:
            raise ValueError("inner dimension mismatch")
        if self.domain is Domain.COMPLEX:
            return Mat.from_numpy(self.as_numpy() @ other.as_numpy())
        o = _OPS[self.domain]
        n, k, m = self.rows, self.cols, other.cols
        out = [o.zero] * (n * m)
        a, b = self.entries, other.entries
        for i in range(n):
            arow = i * k
            for p in range(k):
                aip = a[arow + p]
                if o.is_zero(aip):
                    continue
                brow = p * m
                orow = i * m
                for j in range(m):
                    bpj = b[brow + j]
                    if o.is_zero(bpj):
                        continue
                    out[orow + j] = o.add(out[orow + j], o.mul(aip, bpj))
        return Mat(n, m, self.domain, out)

    def __pow__(self, k: int) -> "Mat":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Mat.identity(self.rows, self.domain)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, self.domain,
                   [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)])

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        o = _OPS[self.domain]
        tot = o.zero
        for i in range(self.rows):
            tot = o.add(tot, self.at(i, i))
        return tot

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.domain == other.domain and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.domain, self.entries))

    def is_zero(self) -> bool:
        o = _OPS[self.domain]
        return all(o.is_zero(x) for x in self.entries)

    def max_norm(self) -> float:
        """Largest entry magnitude (max-norm); the residual scale used everywhere."""
        o = _OPS[self.domain]
        return max((o.mag(x) for x in self.entries), default=0.0)

    # -- conversions --------------------------------------------------------

    def as_numpy(self) -> np.ndarray:
        """Complex ndarray view; exact entries are converted to floats."""
        if self._np_cache is None:
            if self.domain is Domain.LAURENT:
                raise ValueError("Laurent matrices need an evaluation point first")
            self._np_cache = np.array(
                [complex(x) for x in self.entries], dtype=complex
            ).reshape(self.rows, self.cols)
        return self._np_cache

    def to_complex(self) -> "Mat":
        if self.domain is Domain.COMPLEX:
            return self
        if self.domain is Domain.LAURENT:
            raise ValueError("Laurent matrices need an evaluation point first")
        return Mat(self.rows, self.cols, Domain.COMPLEX, [complex(x) for x in self.entries])

    def eval_at(self, u) -> "Mat":
        """Evaluate a LAURENT matrix at t=u: Fraction u gives a RATIONAL
        matrix, float/complex u a COMPLEX one."""
        if self.domain is not Domain.LAURENT:
            raise ValueError("eval_at applies to Laurent matrices")
        target = Domain.RATIONAL if isinstance(u, (int, Fraction)) else Domain.COMPLEX
        return Mat(self.rows, self.cols, target, [x.eval(u) for x in self.entries])

    def map_entries(self, fn: Callable, domain: Domain | None = None) -> "Mat":
        return Mat(self.rows, self.cols, domain or self.domain, [fn(x) for x in self.entries])

    # -- linear algebra (delegates) -----------------------------------------

    def det(self):
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        if self.domain is Domain.COMPLEX:
            return complex(np.linalg.det(self.as_numpy()))
        return _bareiss_det(self.row_lists(), _OPS[self.domain])

    def inverse(self, tol: float = DEFAULT_TOL) -> "Mat":
        if not self.is_square:
            raise NotInvertible("non-square matrix")
        if self.domain is Domain.COMPLEX:
            a = self.as_numpy()
            try:
                inv = np.linalg.inv(a)
            except np.linalg.LinAlgError as exc:
                raise NotInvertible(str(exc)) from exc
            resid = float(np.max(np.abs(a @ inv - np.eye(self.rows)))) if self.rows else 0.0
            if resid > tol:
                raise NotInvertible("inverse residual %.3g exceeds tolerance %.3g" % (resid, tol))
            return Mat.from_numpy(inv)
        return _exact_inverse(self)

    def to_json_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "domain": self.domain.value,
            "entries": [entry_to_json(x, self.domain) for x in self.entries],
        }


def mat_from_json(d: dict) -> Mat:
    if not isinstance(d, dict):
        raise SchemaError("matrix JSON must be an object")
    for key in ("rows", "cols", "domain", "entries"):
        if key not in d:
            raise SchemaError("matrix JSON missing %r" % key)
    try:
        domain = Domain(d["domain"])
    except ValueError as exc:
        raise SchemaError("unknown domain %r" % (d["domain"],)) from exc
    rows, cols = d["rows"], d["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise SchemaError("rows/cols must be nonnegative integers")
    entries = d["entries"]
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise SchemaError("entries must be a list of length rows*cols")
    return Mat(rows, cols, domain, [entry_from_json(v, domain) for v in entries])


# ---------------------------------------------------------------------------
# exact elimination (fraction-free)
# ---------------------------------------------------------------------------


def _bareiss_forward(a: list[list], o: _Ops) -> tuple[list[list], list[int], int, object]:
    """Fraction-free row echelon reduction in place on a copy.

    Returns (reduced rows, pivot column list, row-swap sign, last pivot).
    Entries stay in the scalar ring; every division is exact (Sylvester
    identity), which is what makes this valid over the Laurent ring.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    a = [list(row) for row in a]
    piv_cols: list[int] = []
    prev = o.one
    sign = 1
    r = 0
    for c in range(n):
        if r >= m:
            break
        pr = next((i for i in range(r, m) if not o.is_zero(a[i][c])), None)
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(r + 1, m):
            aic = a[i][c]
            if o.is_zero(aic):
                for j in range(c + 1, n):
                    if not o.is_zero(a[i][j]):
                        a[i][j] = o.div(o.mul(p, a[i][j]), prev)
            else:
                for j in range(c + 1, n):
                    a[i][j] = o.div(o.sub(o.mul(p, a[i][j]), o.mul(aic, a[r][j])), prev)
            a[i][c] = o.zero
        prev = p
        piv_cols.append(c)
        r += 1
    return a, piv_cols, sign, prev


def _bareiss_det(rows: list[list], o: _Ops):
    n = len(rows)
    if n == 0:
        return o.one
    _, piv, sign, last = _bareiss_forward(rows, o)
    if len(piv) < n:
        return o.zero
    return last if sign > 0 else o.neg(last)


def _montante_reduce(a: list[list], o: _Ops, ncols: int) -> tuple[list[list], list[tuple[int, int]], object, int]:
    """Fraction-free Gauss-Jordan (Montante) over the first ncols columns.

    After completion every pivot entry equals the final pivot value p, all
    other entries in pivot columns are zero, and for square nonsingular input
    the left block is p*I with p = det up to the row-swap sign.
    Returns (reduced rows, [(pivot row, pivot col)], p, sign).
    """
    m = len(a)
    n = len(a[0]) if m else 0
    a = [list(row) for row in a]
    pivots: list[tuple[int, int]] = []
    prev = o.one
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        pr = next((i for i in range(r, m) if not o.is_zero(a[i][c])), None)
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
            sign = -sign
        p = a[r][c]
        for i in range(m):
            if i == r:
                continue
            aic = a[i][c]
            if o.is_zero(aic):
                for j in range(n):
                    if j != c and not o.is_zero(a[i][j]):
                        a[i][j] = o.div(o.mul(p, a[i][j]), prev)
            else:
                for j in range(n):
                    if j != c:
                        a[i][j] = o.div(o.sub(o.mul(p, a[i][j]), o.mul(aic, a[r][j])), prev)
                a[i][c] = o.zero
        prev = p
        pivots.append((r, c))
        r += 1
    return a, pivots, prev, sign


def _exact_inverse(m: Mat) -> Mat:
    o = _OPS[m.domain]
    n = m.rows
    aug = [m.row(i) + [o.one if i == j else o.zero for j in range(n)] for i in range(n)]
    red, pivots, p, _sign = _montante_reduce(aug, o, n)
    if len(pivots) < n:
        raise NotInvertible("matrix is singular")
    out = [o.zero] * (n * n)
    for r, c in pivots:
        for j in range(n):
            try:
                out[c * n + j] = o.div(red[r][n + j], p)
            except NotDivisible as exc:
                raise NotInvertible(
                    "determinant is not a unit in the %s domain" % m.domain.value
                ) from exc
    return Mat(n, n, m.domain, out)


def _canonical_exact_vector(vec: list, domain: Domain) -> list:
    """Deterministic scaling of an exact kernel/eigenvector.

    RATIONAL: first nonzero coordinate becomes 1.  LAURENT: divide out the
    common rational content and power of t, then the leading entry when it is
    a unit."""
    o = _OPS[domain]
    lead = next((x for x in vec if not o.is_zero(x)), None)
    if lead is None:
        return list(vec)
    if domain is Domain.RATIONAL:
        return [x / lead for x in vec]
    if domain is Domain.COMPLEX:
        return [x / lead for x in vec]
    nz = [x for x in vec if not x.is_zero]
    from math import gcd

    num, den, shift = 0, 1, min(x.deg_min for x in nz)
    for x in nz:
        c = x.content()
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    unit = LaurentPoly.term(Fraction(num, den), shift)
    vec = [x.divide_exact(unit) if not x.is_zero else x for x in vec]
    lead = next(x for x in vec if not x.is_zero)
    if lead.is_unit:
        vec = [x.divide_exact(lead) if not x.is_zero else x for x in vec]
    return vec


def rank_exact(m: Mat) -> int:
    """Exact rank over the scalar field (fraction field for LAURENT)."""
    if m.domain is Domain.COMPLEX:
        raise ValueError("rank_exact needs an exact domain; use rank_numeric")
    if m.rows == 0 or m.cols == 0:
        return 0
    _, piv, _, _ = _bareiss_forward(m.row_lists(), _OPS[m.domain])
    return len(piv)


def nullspace(m: Mat, tol: float = DEFAULT_TOL) -> list[Mat]:
    """Kernel basis as a list of column vectors.

    Exact domains get an exact reduced-echelon kernel (each vector satisfies
    m v = 0 identically); the complex domain uses an SVD cutoff at
    tol * sigma_max.  Vectors are canonically scaled for determinism.
    """
    if m.rows == 0 or m.cols == 0:
        o = _OPS[m.domain]
        basis = []
        for j in range(m.cols):
            vec = [o.zero] * m.cols
            vec[j] = o.one
            basis.append(Mat.column_vector(vec, m.domain))
        return basis
    if m.domain is Domain.COMPLEX:
        a = m.as_numpy()
        _, s, vh = np.linalg.svd(a)
        smax = s[0] if len(s) else 0.0
        ker = [vh[i].conj() for i in range(m.cols) if (i >= len(s) or s[i] <= tol * smax)]
        out = []
        for v in ker:
            k = int(np.argmax(np.abs(v)))
            v = v / v[k]
            out.append(Mat.column_vector([complex(x) for x in v], Domain.COMPLEX))
        return out
    o = _OPS[m.domain]
    red, pivots, p, _ = _montante_reduce(m.row_lists(), o, m.cols)
    piv_cols = {c: r for r, c in pivots}
    basis = []
    for f in range(m.cols):
        if f in piv_cols:
            continue
        vec = [o.zero] * m.cols
        vec[f] = p
        for r, c in pivots:
            vec[c] = o.neg(red[r][f])
        basis.append(Mat.column_vector(_canonical_exact_vector(vec, m.domain), m.domain))
    return basis


def relative_residual(a: Mat, b: Mat) -> float:
    """Max-norm distance between two matrices, relative to the larger one.

    Exact domains short-circuit equality to exactly 0.0.
    """
    if a.domain is not Domain.COMPLEX and a == b:
        return 0.0
    diff = (a - b).max_norm()
    return diff / max(a.max_norm(), b.max_norm(), 1e-300)


def column_space(m: Mat, tol: float = DEFAULT_TOL) -> list[Mat]:
    """Basis of the column space, as a list of column vectors.

    Exact domains return the original columns sitting at the pivot positions
    of a fraction-free row reduction, canonically scaled.  The complex domain
    returns left singular vectors for singular values above tol * sigma_max.
    """
    if m.rows == 0 or m.cols == 0:
        return []
    if m.domain is Domain.COMPLEX:
        a = np.array(m.as_numpy(), dtype=complex)
        u, s, _ = np.linalg.svd(a)
        smax = s[0] if len(s) else 0.0
        if smax == 0.0:
            return []
        r = int(np.sum(s > tol * smax))
        return [Mat.column_vector([complex(x) for x in u[:, j]], Domain.COMPLEX)
                for j in range(r)]
    o = _OPS[m.domain]
    _, piv, _, _ = _bareiss_forward(m.row_lists(), o)
    out = []
    for c in piv:
        col = [m.at(i, c) for i in range(m.rows)]
        out.append(Mat.column_vector(_canonical_exact_vector(col, m.domain), m.domain))
    return out


# ---------------------------------------------------------------------------
# numeric rank and eigen structure
# ---------------------------------------------------------------------------


def rank_numeric(m: Mat, tol: float = DEFAULT_TOL) -> int:
    """Rank by complete-pivot elimination.

    A pivot counts while its magnitude exceeds tol times the largest initial
    row max-norm, which makes the decision scale-invariant and deterministic.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    a = np.array(m.as_numpy(), dtype=complex)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return 0
    r = 0
    nr, nc = a.shape
    steps = min(nr, nc)
    while r < steps:
        sub = np.abs(a[r:, r:])
        idx = np.unravel_index(int(np.argmax(sub)), sub.shape)
        i, j = idx[0] + r, idx[1] + r
        if abs(a[i, j]) <= tol * scale:
            break
        if i != r:
            a[[r, i], :] = a[[i, r], :]
        if j != r:
            a[:, [r, j]] = a[:, [j, r]]
        col = a[r + 1 :, r] / a[r, r]
        a[r + 1 :, r:] -= np.outer(col, a[r, r:])
        r += 1
    return r


def eigen_numeric(m: Mat, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Clustered eigenvalues of a square matrix as (value, multiplicity).

    Eigenvalues closer than cluster_tol * max-norm are merged by single
    linkage; if a merged group has diameter beyond the threshold (a chain of
    borderline gaps with no consistent grouping) ClusterAmbiguous is raised
    rather than guessing.  Results are sorted by (real, imag).
    """
    if not m.is_square:
        raise ValueError("eigenvalues of a non-square matrix")
    if m.rows == 0:
        return []
    a = m.to_complex().as_numpy()
    vals = np.linalg.eigvals(a)
    thr = cluster_tol * max(float(np.max(np.abs(a))), 1e-300)
    n = len(vals)
    # single-linkage components under the threshold relation
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= thr:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for idxs in groups.values():
        pts = [vals[i] for i in idxs]
        diam = max((abs(x - y) for x in pts for y in pts), default=0.0)
        if diam > thr:
            raise ClusterAmbiguous(
                "eigenvalue chain of diameter %.3g straddles threshold %.3g" % (diam, thr)
            )
        center = complex(sum(pts) / len(pts))
        out.append((center, len(pts)))
    out.sort(key=lambda t: (t[0].real, t[0].imag))
    return out


@dataclass(frozen=True)
class JordanData:
    """Jordan structure attached to one eigenvalue cluster."""

    eigenvalue: complex
    multiplicity: int
    block_sizes: tuple[int, ...]  # descending

    @property
    def largest_block(self) -> int:
        return self.block_sizes[0]

    @property
    def num_blocks(self) -> int:
        return len(self.block_sizes)

    def to_json_dict(self) -> dict:
        return {
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "multiplicity": self.multiplicity,
            "block_sizes": list(self.block_sizes),
        }


def jordan_structure(m: Mat, tol: float = DEFAULT_TOL,
                     cluster_tol: float = DEFAULT_CLUSTER_TOL) -> list[JordanData]:
    """Jordan block sizes per clustered eigenvalue, from rank sequences.

    For eigenvalue y with algebraic multiplicity a, the number of blocks of
    size >= k equals rank((m-yI)^(k-1)) - rank((m-yI)^k); the sequence is
    computed with the numeric rank and stops when it reaches n - a.
    """
    if not m.is_square:
        raise ValueError("jordan structure of a non-square matrix")
    n = m.rows
    clusters = eigen_numeric(m, cluster_tol)
    a = m.to_complex().as_numpy()
    out = []
    for lam, mult in clusters:
        shifted = a - lam * np.eye(n)
        ranks = [n]
        power = np.eye(n, dtype=complex)
        k = 0
        while ranks[-1] > n - mult and k < mult:
            power = power @ shifted
            ranks.append(rank_numeric(Mat.from_numpy(power), tol))
            k += 1
        ge = [ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1)]
        ge.append(0)
        sizes = []
        for size in range(1, len(ge)):
            sizes.extend([size] * max(ge[size - 1] - ge[size], 0))
        sizes.sort(reverse=True)
        if sum(sizes) != mult:
            raise ValueError(
                "inconsistent rank sequence for eigenvalue %s (got sizes %r, multiplicity %d); "
                "tolerances are likely unsuitable" % (lam, sizes, mult)
            )
        out.append(JordanData(lam, mult, tuple(sizes)))
    return out


# ---------------------------------------------------------------------------
# characteristic and minimal polynomials
# ---------------------------------------------------------------------------


def charpoly(m: Mat) -> list:
    """Characteristic polynomial det(x*I - m), coefficients ascending.

    Exact domains use the Faddeev-LeVerrier recursion (all divisions are by
    integers, hence exact); the complex domain expands the product over
    numeric eigenvalues.
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    if m.domain is Domain.COMPLEX:
        vals = np.linalg.eigvals(m.as_numpy())
        coeffs = np.poly(vals) if n else np.array([1.0])
        return [complex(c) for c in coeffs[::-1]]
    o = _OPS[m.domain]
    eye = Mat.identity(n, m.domain)
    coeffs_desc = [o.one]
    nmat = eye
    for k in range(1, n + 1):
        an = m @ nmat
        tr = an.trace()
        ck = _scalar_div_int(o.neg(tr), k, m.domain)
        coeffs_desc.append(ck)
        nmat = an + eye.scale(ck)
    return list(reversed(coeffs_desc))


def _scalar_div_int(x, k: int, domain: Domain):
    if domain is Domain.RATIONAL:
        return x / k
    if domain is Domain.LAURENT:
        return x * Fraction(1, k)
    return x / k


def minpoly(m: Mat, tol: float = DEFAULT_TOL,
            cluster_tol: float = DEFAULT_CLUSTER_TOL) -> list:
    """Monic minimal polynomial, coefficients ascending.

    Exact domains find the first linear dependence among vec(m^0), vec(m^1),
    ... by fraction-free elimination with combination tracking, then divide
    out the tracked pivot product (exact because a monic factor of a monic
    polynomial over the Laurent ring stays in the ring).  The complex domain
    assembles the polynomial from clustered eigenvalues and Jordan data,
    which is far more stable than floating Krylov elimination.
    """
    if not m.is_square:
        raise ValueError("minimal polynomial of a non-square matrix")
    n = m.rows
    if n == 0:
        return [_OPS[m.domain].one]
    if m.domain is Domain.COMPLEX:
        data = jordan_structure(m, tol, cluster_tol)
        coeffs = [complex(1)]
        for jd in data:
            for _ in range(jd.largest_block):
                coeffs = _poly_mul(coeffs, [-jd.eigenvalue, complex(1)], _OPS[Domain.COMPLEX])
        return coeffs
    o = _OPS[m.domain]
    # echelon rows over the Krylov vectors, each carrying its combination
    rows: list[tuple[int, list, list]] = []  # (pivot index, row, combo)
    power = Mat.identity(n, m.domain)
    k = 0
    while True:
        work = list(power.entries)
        combo = [o.zero] * k + [o.one]
        for pidx, prow, pcombo in rows:
            w = work[pidx]
            if o.is_zero(w):
                continue
            pv = prow[pidx]
            work = [o.sub(o.mul(pv, a), o.mul(w, b)) for a, b in zip(work, prow)]
            combo = [o.sub(o.mul(pv, a), o.mul(w, b))
                     for a, b in zip(combo, pcombo + [o.zero] * (len(combo) - len(pcombo)))]
        lead = next((i for i, x in enumerate(work) if not o.is_zero(x)), None)
        if lead is None:
            top = combo[k]
            return [o.div(c, top) for c in combo]
        work, combo = _normalize_tracked(work, combo, m.domain)
        rows.append((lead, work, combo))
        power = power @ m
        k += 1
        if k > n:
            raise RuntimeError("minimal polynomial search exceeded the dimension bound")


def _normalize_tracked(row: list, combo: list, domain: Domain) -> tuple[list, list]:
    """Divide a tracked elimination row by the common content to keep
    fraction-free growth in check; the final ratios are unaffected."""
    o = _OPS[domain]
    if domain is Domain.RATIONAL:
        vals = [x for x in row + combo if x]
        if not vals:
            return row, combo
        from math import gcd

        num, den = 0, 1
        for v in vals:
            num = gcd(num, abs(v.numerator))
            den = den * v.denominator // gcd(den, v.denominator)
        c = Fraction(num, den)
        return [x / c for x in row], [x / c for x in combo]
    nz = [x for x in row + combo if not x.is_zero]
    if not nz:
        return row, combo
    from math import gcd

    num, den = 0, 1
    shift = min(x.deg_min for x in nz)
    for x in nz:
        c = x.content()
        num = gcd(num, c.numerator)
        den = den * c.denominator // gcd(den, c.denominator)
    unit = LaurentPoly.term(Fraction(num, den), shift)
    return ([x.divide_exact(unit) if not x.is_zero else x for x in row],
            [x.divide_exact(unit) if not x.is_zero else x for x in combo])


# -- polynomial helpers over a scalar domain ---------------------------------


def _poly_mul(a: list, b: list, o: _Ops) -> list:
    out = [o.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if o.is_zero(ai):
            continue
        for j, bj in enumerate(b):
            out[i + j] = o.add(out[i + j], o.mul(ai, bj))
    return out


def poly_eval_matrix(coeffs: list, m: Mat) -> Mat:
    """Evaluate a polynomial (ascending coefficients) at a square matrix."""
    if not m.is_square:
        raise ValueError("polynomial of a non-square matrix")
    o = _OPS[m.domain]
    n = m.rows
    result = Mat.zeros(n, n, m.domain)
    eye = Mat.identity(n, m.domain)
    for c in reversed(coeffs):
        result = result @ m + eye.scale(o.coerce(c))
    return result


def poly_eval_scalar(coeffs: list, x, domain: Domain):
    o = _OPS[domain]
    x = o.coerce(x)
    acc = o.zero
    for c in reversed(coeffs):
        acc = o.add(o.mul(acc, x), o.coerce(c))
    return acc


def poly_divide_linear(coeffs: list, lam, domain: Domain) -> tuple[list, object]:
    """Synthetic division by (x - lam): returns (quotient, remainder)."""
    o = _OPS[domain]
    lam = o.coerce(lam)
    q = [o.zero] * (len(coeffs) - 1)
    carry = o.zero
    for i in range(len(coeffs) - 1, 0, -1):
        carry = o.add(coeffs[i], o.mul(carry, lam))
        q[i - 1] = carry
    rem = o.add(coeffs[0], o.mul(carry, lam))
    return q, rem


def poly_divmod_monic(f: list, g: list, domain: Domain) -> tuple[list, list]:
    """Divide f by a monic g over the domain (no scalar division needed)."""
    o = _OPS[domain]
    if not g or not o.eq(g[-1], o.one):
        raise ValueError("divisor must be monic")
    f = list(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [o.zero], f
    q = [o.zero] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if o.is_zero(c):
            continue
        q[i - dg] = c
        for j in range(dg + 1):
            f[i - dg + j] = o.sub(f[i - dg + j], o.mul(c, g[j]))
    rem = f[:dg] if dg else [o.zero]
    return q, rem


# ---------------------------------------------------------------------------
# intertwiners
# ---------------------------------------------------------------------------


def intertwiner_space(a_mats: Sequence[Mat], b_mats: Sequence[Mat],
                      tol: float = DEFAULT_TOL) -> list[Mat]:
    """Basis of {X : A_i X = X B_i for all i}.

    Vectorizing X row-major turns each condition into the linear system
    (A_i (x) I - I (x) B_i^T) vec(X) = 0; the systems are stacked and the
    joint nullspace computed exactly (exact domains) or by SVD (complex).
    Basis elements are scaled so their largest entry is 1.
    """
    if not a_mats or not b_mats or len(a_mats) != len(b_mats):
        raise ValueError("need equally many A and B matrices")
    dom = a_mats[0].domain
    r = a_mats[0].rows
    s = b_mats[0].rows
    for x in a_mats:
        if x.domain != dom or not x.is_square or x.rows != r:
            raise ValueError("A matrices must be square, one size, one domain")
    for x in b_mats:
        if x.domain != dom or not x.is_square or x.rows != s:
            raise ValueError("B matrices must be square, one size, one domain")
    if dom is Domain.COMPLEX:
        eye_r = np.eye(r)
        eye_s = np.eye(s)
        blocks = [
            np.kron(A.as_numpy(), eye_s) - np.kron(eye_r, B.as_numpy().T)
            for A, B in zip(a_mats, b_mats)
        ]
        stacked = np.vstack(blocks)
        _, sv, vh = np.linalg.svd(stacked)
        smax = sv[0] if len(sv) else 0.0
        dim = r * s
        out = []
        for i in range(dim):
            if i < len(sv) and sv[i] > tol * smax:
                continue
            v = vh[i].conj()
            k = int(np.argmax(np.abs(v)))
            v = v / v[k]
            out.append(Mat(r, s, Domain.COMPLEX, [complex(x) for x in v]))
        return out
    o = _OPS[dom]
    rows = []
    for A, B in zip(a_mats, b_mats):
        for p in range(r):
            for q in range(s):
                row = [o.zero] * (r * s)
                for k in range(r):
                    apk = A.at(p, k)
                    if not o.is_zero(apk):
                        row[k * s + q] = o.add(row[k * s + q], apk)
                for l in range(s):
                    blq = B.at(l, q)
                    if not o.is_zero(blq):
                        row[p * s + l] = o.sub(row[p * s + l], blq)
                rows.append(row)
    system = Mat.from_rows(rows, dom)
    kernel = nullspace(system)
    return [Mat(r, s, dom, list(v.entries)) for v in kernel]
