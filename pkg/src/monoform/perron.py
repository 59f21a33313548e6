"""Perron transforms: unimodular monomial changes of variables.

A *type I* step replaces the leading block of variables by monomials in new
variables: old_i = prod_j new_j^(A[i][j]) with A a nonnegative integer
matrix of determinant +-1.  The engine picks A by the subtract-the-minimum
continued fraction rule: locate the variable of least value and subtract
that value from all others.  Iterating the rule drives any exponent vector
of positive value to a nonnegative one, which is how divisibility between
monomials is arranged.

A *type II* step additionally rewrites one trailing variable through a
translation by 1 and a nonzero rational constant c:

    old_i     = prod_j new_j^(a_ij) * c^(a_i,k+1)        (leading block)
    old_(k+r) = prod_j new_j^(a_k+1,j) * (new_(k+r) + 1) * c^(a_k+1,k+1)

The translated factor (new + 1) is a unit, so values are carried entirely
by the monomial part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import _linalg
from .errors import (
    InadmissibleProblem,
    IndependenceError,
    StepLimitExceeded,
)
from .series import Poly, TruncatedSeries, UnitExpr, is_unit as series_is_unit
from .valuegroup import (
    Ordering,
    Value,
    cmp,
    format_rational,
    is_rationally_independent,
    linear_combination,
    parse_rational,
)

DEFAULT_STEP_CAP = 10_000

TYPE_I = "I"
TYPE_II = "II"


@dataclass(frozen=True)
class TransformStep:
    """One validated transform step (see the module docstring)."""

    kind: str
    matrix: tuple
    r: Optional[int] = None
    c: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind not in (TYPE_I, TYPE_II):
            raise ValueError("unknown step kind %r" % (self.kind,))
        matrix = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        n = len(matrix)
        if n == 0 or any(len(row) != n for row in matrix):
            raise ValueError("step matrix must be square")
        if any(x < 0 for row in matrix for x in row):
            raise ValueError("step matrix entries must be nonnegative")
        if _linalg.int_det(matrix) not in (1, -1):
            raise ValueError("step matrix must have determinant +-1")
        if self.kind == TYPE_II:
            if self.r is None or int(self.r) < 1:
                raise ValueError("type II steps need a positive index r")
            object.__setattr__(self, "r", int(self.r))
            c = Fraction(self.c) if self.c is not None else None
            if not c:
                raise ValueError("type II steps need a nonzero constant c")
            object.__setattr__(self, "c", c)
        else:
            if self.r is not None or self.c is not None:
                raise ValueError("type I steps take no r or c")

    @property
    def size(self) -> int:
        return len(self.matrix)

    @property
    def block(self) -> int:
        """Number of leading variables rewritten monomially."""
        return self.size if self.kind == TYPE_I else self.size - 1

    def to_json(self):
        obj = {"kind": self.kind, "A": [list(row) for row in self.matrix]}
        if self.kind == TYPE_II:
            obj["r"] = self.r
            obj["c"] = format_rational(self.c)
        return obj

    @staticmethod
    def from_json(obj) -> "TransformStep":
        kind = obj["kind"]
        if kind == TYPE_II:
            return TransformStep(kind, obj["A"], r=int(obj["r"]), c=parse_rational(obj["c"]))
        return TransformStep(kind, obj["A"])


@dataclass(frozen=True)
class TransformSeq:
    """An ordered sequence of steps applied on one side (T or U)."""

    steps: tuple = ()
    side: str = "U"

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.side not in ("T", "U"):
            raise ValueError("side must be 'T' or 'U'")

    def __len__(self):
        return len(self.steps)

    def append(self, step: TransformStep) -> "TransformSeq":
        return TransformSeq(self.steps + (step,), self.side)

    def extend(self, steps) -> "TransformSeq":
        return TransformSeq(self.steps + tuple(steps), self.side)

    def cumulative_matrix(self):
        """Product of the step matrices, padded to a common size.

        Always has determinant +-1, being a product of such.
        """
        if not self.steps:
            return _linalg.identity(1)
        size = max(s.size for s in self.steps)
        acc = _linalg.identity(size)
        for s in self.steps:
            m = _pad(s.matrix, size)
            acc = _linalg.mat_mul(acc, m)
        return acc

    def to_json(self):
        return [s.to_json() for s in self.steps]

    @staticmethod
    def from_json(obj, side: str = "U") -> "TransformSeq":
        return TransformSeq([TransformStep.from_json(s) for s in obj], side)


def _pad(matrix, size):
    k = len(matrix)
    out = _linalg.identity(size)
    for i in range(k):
        for j in range(k):
            out[i][j] = matrix[i][j]
    return out


# ---------------------------------------------------------------------------
# the continued fraction rule


def perron_step(vals):
    """One subtract-the-minimum step on positive, rationally independent
    values.  Returns (TransformStep, new values)."""
    vals = list(vals)
    if not vals:
        raise ValueError("no values given")
    for v in vals:
        if v.sign() <= 0:
            raise ValueError("values must be positive")
    if not is_rationally_independent(vals):
        raise IndependenceError("step values are not rationally independent")
    n = len(vals)
    if n == 1:
        return TransformStep(TYPE_I, [[1]]), vals
    i0 = 0
    for i in range(1, n):
        order = cmp(vals[i], vals[i0])
        if order == Ordering.EQUAL:
            raise IndependenceError("tied values in a Perron step")
        if order == Ordering.LESS:
            i0 = i
    matrix = _linalg.identity(n)
    for i in range(n):
        if i != i0:
            matrix[i][i0] = 1
    new_vals = [v if i == i0 else v - vals[i0] for i, v in enumerate(vals)]
    return TransformStep(TYPE_I, matrix), new_vals


def transform_exponents(steps, exps):
    """Push an exponent vector through type I steps: e -> e[:k] A + e[k:]."""
    exps = list(exps)
    for step in steps:
        if step.kind != TYPE_I:
            raise ValueError("exponent transport is defined for type I steps only")
        k = step.size
        if k > len(exps):
            raise ValueError("step larger than the exponent vector")
        head = _linalg.vec_mat(exps[:k], step.matrix)
        exps = list(head) + exps[k:]
    return tuple(exps)


def step_substitutions(step: TransformStep, nvars: int):
    """Substitution polynomials (old variable -> Poly in new variables) for
    a step acting on the leading block of an nvars-variable space."""
    subs = [Poly.variable(i, nvars) for i in range(nvars)]
    k = step.block
    if k > nvars:
        raise ValueError("step larger than the variable space")
    for i in range(k):
        exps = [0] * nvars
        for j in range(k):
            exps[j] = step.matrix[i][j]
        if step.kind == TYPE_II:
            scale = Coef_pow(step.c, step.matrix[i][k])
            subs[i] = Poly.monomial(exps, nvars, scale)
        else:
            subs[i] = Poly.monomial(exps, nvars, 1)
    if step.kind == TYPE_II:
        target = k + step.r - 1
        if target >= nvars:
            raise ValueError("type II target variable out of range")
        exps = [0] * nvars
        for j in range(k):
            exps[j] = step.matrix[k][j]
        scale = Coef_pow(step.c, step.matrix[k][k])
        mono = Poly.monomial(exps, nvars, scale)
        z = Poly.variable(target, nvars)
        subs[target] = mono * (z + Poly.constant(1, nvars))
    return subs


def Coef_pow(c: Fraction, e: int) -> Fraction:
    return Fraction(c) ** int(e)


def apply_steps_to_poly(f, steps, nvars: int):
    """Apply a sequence of steps to a Poly or TruncatedSeries by repeated
    substitution (exact for Poly; order >= 1 is enforced for series)."""
    from .series import substitute, substitute_series

    for step in steps:
        subs = step_substitutions(step, nvars)
        if isinstance(f, TruncatedSeries):
            f = substitute_series(f, subs, nvars)
        else:
            f = substitute(f, subs, nvars)
    return f


def step_new_values(step: TransformStep, vals):
    """Values of the new leading-block variables after a step.

    Solves old = A_block new exactly; errors if the solution is not
    positive and rationally independent.
    """
    k = step.block
    vals = list(vals)
    if len(vals) != k:
        raise ValueError("need one value per leading variable")
    block = [row[:k] for row in step.matrix[:k]]
    try:
        inv = _linalg.inverse(block)
    except ValueError:
        raise InadmissibleProblem("step block matrix is singular on values")
    new_vals = [linear_combination(vals, row) for row in inv]
    for v in new_vals:
        if v.sign() <= 0:
            raise InadmissibleProblem("step does not keep values positive")
    if not is_rationally_independent(new_vals):
        raise IndependenceError("step destroyed rational independence")
    return new_vals


def _nonneg(row) -> bool:
    return all(x >= 0 for x in row)


def perron_until_nonneg(vals, rows, cap: int = DEFAULT_STEP_CAP):
    """Run subtract-the-minimum steps until every row vector is >= 0.

    Rows are exponent data of length len(vals); they transform as
    w -> w A alongside the values.  Each nonzero row must have positive
    value (w . vals > 0), otherwise no number of steps can help.
    Returns (steps, new values, new rows).
    """
    vals = list(vals)
    rows = [list(r) for r in rows]
    for w in rows:
        if any(x != 0 for x in w):
            s = linear_combination(vals, w).sign()
            if s < 0:
                raise InadmissibleProblem(
                    "exponent vector of negative value cannot be made nonnegative"
                )
            if s == 0:
                raise IndependenceError(
                    "nonzero exponent vector of value zero; values are dependent"
                )
    steps = []
    count = 0
    while not all(_nonneg(w) for w in rows):
        if count >= cap:
            raise StepLimitExceeded(
                "no nonnegative form after %d Perron steps" % count
            )
        step, vals = perron_step(vals)
        rows = [list(_linalg.vec_mat(w, step.matrix)) for w in rows]
        steps.append(step)
        count += 1
    return steps, vals, rows


def monomialize_divisibility(a, b, vals, cap: int = DEFAULT_STEP_CAP) -> TransformSeq:
    """Make x^a divide x^b: steps after which the transformed exponents
    satisfy a' <= b' componentwise.

    Requires value(x^a) <= value(x^b).  Equality of values forces a = b
    (independence), in which case no steps are needed.
    """
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    vals = list(vals)
    if not (len(a) == len(b) == len(vals)):
        raise ValueError("exponent vectors and values must have equal length")
    va = linear_combination(vals, a)
    vb = linear_combination(vals, b)
    if cmp(va, vb) == Ordering.GREATER:
        raise InadmissibleProblem("value(x^a) exceeds value(x^b); x^a can never divide x^b")
    w = [y - x for x, y in zip(a, b)]
    steps, _, _ = perron_until_nonneg(vals, [w], cap)
    return TransformSeq(steps, side="U")


def factor_monomial_unit(
    f: TruncatedSeries, vals, cap: int = DEFAULT_STEP_CAP
):
    """Factor f as x(t)^d times a unit, using type I steps on the leading
    block of variables (those with the given values).

    The minimum-value term of f must be a monomial purely in the leading
    variables, and every other term must have leading-block value strictly
    greater, so that finitely many subtract-the-minimum steps make the
    minimum divide everything.  Returns (TransformSeq, d, u) with
    f-transformed = x^d * u exactly (termwise division) and u a unit
    truncated at f.trunc - |d|.
    """
    if not isinstance(f, TruncatedSeries):
        raise TypeError("factor_monomial_unit expects a TruncatedSeries")
    vals = list(vals)
    r = len(vals)
    if r > f.nvars:
        raise ValueError("more values than variables")
    if f.poly.is_zero:
        raise InadmissibleProblem("cannot factor the zero series")
    for v in vals:
        if v.sign() <= 0:
            raise ValueError("leading variable values must be positive")
    terms = list(f.poly.terms.items())
    pure = [e for e, _ in terms if all(x == 0 for x in e[r:])]
    if not pure:
        raise InadmissibleProblem(
            "no term lies purely in the leading variables; minimum value term "
            "is not a leading monomial"
        )
    pure_vals = [linear_combination(vals, e[:r]) for e in pure]
    best = 0
    for i in range(1, len(pure)):
        order = cmp(pure_vals[i], pure_vals[best])
        if order == Ordering.EQUAL:
            raise IndependenceError("two leading monomials share a value")
        if order == Ordering.LESS:
            best = i
    base = list(pure[best][:r])
    # margin check: the minimum must be witnessed strictly below truncation
    least = vals[0]
    for v in vals[1:]:
        if cmp(v, least) == Ordering.LESS:
            least = v
    if cmp(linear_combination(vals, base), least.scale(f.trunc)) != Ordering.LESS:
        raise InadmissibleProblem("minimum value is not attained below the truncation degree")
    rows = []
    for e, _ in terms:
        rows.append([x - y for x, y in zip(e[:r], base)])
    try:
        steps, _, new_rows = perron_until_nonneg(vals, rows, cap)
    except InadmissibleProblem:
        raise InadmissibleProblem(
            "a term has leading-block value below the minimal leading monomial; "
            "f is not a monomial times a unit in this class"
        )
    acc = TransformSeq(steps, side="U").cumulative_matrix() if steps else _linalg.identity(r)
    d_first = _linalg.vec_mat(base, acc) if steps else base
    d = tuple(int(x) for x in d_first) + (0,) * (f.nvars - r)
    total = sum(d)
    if f.trunc - total < 1:
        raise InadmissibleProblem("unit factor is not determined below the truncation degree")
    u_terms = {}
    for (e, c), w in zip(terms, new_rows):
        new_e = tuple(int(x) for x in w) + tuple(e[r:])
        u_terms[new_e] = c
    u = TruncatedSeries(Poly(f.nvars, u_terms), f.trunc - total)
    if not series_is_unit(u):
        raise InadmissibleProblem("factored cofactor is not a unit")
    return TransformSeq(steps, side="U"), d, u


def apply_type_II(vals, m: int, r: int, c, A):
    """Build and validate a type II step on an m-variable side whose leading
    block carries the given values.

    Returns (TransformStep, new leading values, substitution Polys).  The
    new leading values solve old = A_block new and must stay positive and
    rationally independent; the translated variable contributes a unit
    factor (new + 1) of value zero.
    """
    vals = list(vals)
    rbar = len(vals)
    step = TransformStep(TYPE_II, A, r=int(r), c=Fraction(c))
    if step.size != rbar + 1:
        raise ValueError("type II matrix must have size len(vals) + 1")
    if rbar + step.r > m:
        raise ValueError("type II target variable out of range")
    new_vals = step_new_values(step, vals)
    subs = step_substitutions(step, m)
    return step, new_vals, subs
