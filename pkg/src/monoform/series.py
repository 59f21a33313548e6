"""Sparse exact polynomials, truncated power series, and Gauss values.

Polynomials are dictionaries mapping exponent tuples to coefficients.  A
coefficient is a rational combination of *unit symbols*: named formal units
(residue-field constants of unknown value zero) raised to integer powers.
Plain rational coefficients are the special case with no symbols, so one
`Poly` type covers both ordinary polynomials and the unit-carrying
expressions produced by monomial substitutions.

A `TruncatedSeries` is a polynomial known only modulo the monomials of
total degree >= trunc; arithmetic propagates the weakest truncation.

`gauss_value` computes the monomial valuation of a polynomial: the minimum
over its support of the exponent vector paired against a list of positive
values, exactly.  The zero polynomial maps to `INFINITY`; for truncated
series the minimum is only reported when no hidden term of degree >= trunc
could undercut it, otherwise `ABOVE_TRUNCATION` is returned.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MonoformError
from .valuegroup import (
    Value,
    cmp,
    Ordering,
    format_rational,
    linear_combination,
    parse_rational,
)


class _GaussInfinity:
    """Marker for the value of the zero polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


class _AboveTruncation:
    """Marker: the minimum is not witnessed below the truncation degree."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ABOVE_TRUNCATION"


INFINITY = _GaussInfinity()
ABOVE_TRUNCATION = _AboveTruncation()


# ---------------------------------------------------------------------------
# unit symbols


class UnitExpr:
    """A formal unit: positive rational scalar times unit symbols to integer
    powers, e.g. (3/2) * phi1^2 * phi2^-1."""

    __slots__ = ("scalar", "syms")

    def __init__(self, scalar=1, syms=()):
        scalar = Fraction(scalar)
        if scalar <= 0:
            raise ValueError("unit scalar must be positive")
        cleaned = tuple(sorted((s, int(e)) for s, e in dict(syms).items() if int(e) != 0))
        object.__setattr__(self, "scalar", scalar)
        object.__setattr__(self, "syms", cleaned)

    def __setattr__(self, *args):
        raise AttributeError("UnitExpr is immutable")

    @staticmethod
    def one() -> "UnitExpr":
        return UnitExpr(1)

    @staticmethod
    def symbol(name: str) -> "UnitExpr":
        return UnitExpr(1, {name: 1})

    @property
    def is_one(self) -> bool:
        return self.scalar == 1 and not self.syms

    def __mul__(self, other):
        if isinstance(other, UnitExpr):
            exps = dict(self.syms)
            for s, e in other.syms:
                exps[s] = exps.get(s, 0) + e
            return UnitExpr(self.scalar * other.scalar, exps)
        return NotImplemented

    def __pow__(self, k: int):
        k = int(k)
        if k == 0:
            return UnitExpr.one()
        return UnitExpr(self.scalar ** k, {s: e * k for s, e in self.syms})

    def inverse(self) -> "UnitExpr":
        return self ** -1

    def __eq__(self, other):
        if not isinstance(other, UnitExpr):
            return NotImplemented
        return self.scalar == other.scalar and self.syms == other.syms

    def __hash__(self):
        return hash((self.scalar, self.syms))

    def __repr__(self):
        parts = [] if self.scalar == 1 and self.syms else [str(self.scalar)]
        for s, e in self.syms:
            parts.append(s if e == 1 else "%s^%d" % (s, e))
        return "*".join(parts) if parts else "1"

    def to_json(self):
        return {"scalar": format_rational(self.scalar), "syms": dict(self.syms)}

    @staticmethod
    def from_json(obj) -> "UnitExpr":
        return UnitExpr(parse_rational(obj.get("scalar", "1")), obj.get("syms", {}))


class Coef:
    """Coefficient ring element: a rational combination of symbol monomials.

    Internally a dict from sorted (symbol, exponent) tuples to Fractions.
    Rationals embed as the term with the empty symbol monomial.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        for key, q in (terms or {}).items():
            q = Fraction(q)
            if q != 0:
                cleaned[tuple(key)] = q
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *args):
        raise AttributeError("Coef is immutable")

    @staticmethod
    def rational(q) -> "Coef":
        return Coef({(): Fraction(q)})

    @staticmethod
    def of_unit(u: UnitExpr) -> "Coef":
        return Coef({u.syms: u.scalar})

    @staticmethod
    def zero() -> "Coef":
        return Coef()

    @staticmethod
    def coerce(x) -> "Coef":
        if isinstance(x, Coef):
            return x
        if isinstance(x, UnitExpr):
            return Coef.of_unit(x)
        if isinstance(x, (int, Fraction)):
            return Coef.rational(x)
        raise TypeError("cannot use %r as a coefficient" % (x,))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_rational(self) -> bool:
        return all(k == () for k in self.terms)

    def rational_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational:
            raise ValueError("coefficient carries unit symbols")
        return self.terms[()]

    def __add__(self, other):
        other = Coef.coerce(other)
        terms = dict(self.terms)
        for k, q in other.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + q
        return Coef(terms)

    def __neg__(self):
        return Coef({k: -q for k, q in self.terms.items()})

    def __sub__(self, other):
        return self + (-Coef.coerce(other))

    def __mul__(self, other):
        other = Coef.coerce(other)
        terms = {}
        for k1, q1 in self.terms.items():
            for k2, q2 in other.terms.items():
                exps = dict(k1)
                for s, e in k2:
                    exps[s] = exps.get(s, 0) + e
                key = tuple(sorted((s, e) for s, e in exps.items() if e != 0))
                terms[key] = terms.get(key, Fraction(0)) + q1 * q2
        return Coef(terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UnitExpr)):
            other = Coef.coerce(other)
        if not isinstance(other, Coef):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k, q in sorted(self.terms.items()):
            mono = "*".join(s if e == 1 else "%s^%d" % (s, e) for s, e in k)
            if mono:
                parts.append("%s*%s" % (q, mono) if q != 1 else mono)
            else:
                parts.append(str(q))
        return " + ".join(parts)

    def to_json(self):
        if self.is_rational:
            return format_rational(self.rational_value())
        out = []
        for k, q in sorted(self.terms.items()):
            out.append({"q": format_rational(q), "syms": dict(k)})
        return out

    @staticmethod
    def from_json(obj) -> "Coef":
        if isinstance(obj, (str, int)):
            return Coef.rational(parse_rational(obj))
        if isinstance(obj, dict):
            obj = [obj]
        terms = {}
        for t in obj:
            key = tuple(sorted((s, int(e)) for s, e in t.get("syms", {}).items() if int(e) != 0))
            terms[key] = terms.get(key, Fraction(0)) + parse_rational(t["q"])
        return Coef(terms)


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Sparse multivariate polynomial with Coef coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        cleaned = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple of wrong length")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent in a polynomial")
            c = Coef.coerce(c)
            if not c.is_zero:
                cleaned[exps] = c
        object.__setattr__(self, "nvars", int(nvars))
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, *args):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars)

    @staticmethod
    def constant(c, nvars: int) -> "Poly":
        return Poly(nvars, {(0,) * nvars: c})

    @staticmethod
    def variable(i: int, nvars: int) -> "Poly":
        exps = [0] * nvars
        exps[i] = 1
        return Poly(nvars, {tuple(exps): 1})

    @staticmethod
    def monomial(exps, nvars: int, c=1) -> "Poly":
        return Poly(nvars, {tuple(exps): c})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def coeff(self, exps) -> Coef:
        return self.terms.get(tuple(exps), Coef.zero())

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("polynomials in different variable counts")

    def __add__(self, other):
        other = _coerce_poly(other, self.nvars)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Coef.zero()) + c
        return Poly(self.nvars, terms)

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce_poly(other, self.nvars))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, UnitExpr, Coef)):
            return self.scale(other)
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + prod
                else:
                    terms[e] = prod
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = Coef.coerce(c)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other, self.nvars)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted((e, c) for e, c in self.terms.items()))))

    def __repr__(self):
        return "Poly(%s)" % self.to_text()

    def to_text(self, var: str = "y") -> str:
        """Human form with rational coefficients; symbol-carrying
        coefficients are rendered parenthesised."""
        if self.is_zero:
            return "0"
        parts = []
        for exps in self.support():
            c = self.terms[exps]
            mono = "*".join(
                "%s%d" % (var, i + 1) if e == 1 else "%s%d^%d" % (var, i + 1, e)
                for i, e in enumerate(exps)
                if e
            )
            if c.is_rational:
                q = c.rational_value()
                if not mono:
                    parts.append(str(q))
                elif q == 1:
                    parts.append(mono)
                elif q == -1:
                    parts.append("-" + mono)
                else:
                    parts.append("%s*%s" % (q, mono))
            else:
                parts.append("(%r)%s" % (c, "*" + mono if mono else ""))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    @staticmethod
    def parse(text: str, nvars: int, var: str = "y") -> "Poly":
        """Parse a sum of terms like ``2*y1^2*y2 - 1/3*y3 + 4``."""
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty polynomial text")
        chunks = []
        sign = 1
        start = 0
        for i, ch in enumerate(text):
            if ch in "+-" and i > start:
                if text[i - 1] in "+-*/^":
                    continue
                chunks.append((sign, text[start:i]))
                sign = 1 if ch == "+" else -1
                start = i + 1
            elif ch in "+-" and i == start:
                if ch == "-":
                    sign = -sign
                start = i + 1
        chunks.append((sign, text[start:]))
        terms = {}
        for sign, chunk in chunks:
            if not chunk:
                raise ValueError("malformed polynomial text")
            coeff = Fraction(1)
            exps = [0] * nvars
            for factor in chunk.split("*"):
                if factor.startswith(var):
                    body = factor[len(var):]
                    if "^" in body:
                        idx, _, power = body.partition("^")
                        e = int(power)
                    else:
                        idx, e = body, 1
                    i = int(idx) - 1
                    if not 0 <= i < nvars:
                        raise ValueError("variable %s%s out of range" % (var, idx))
                    exps[i] += e
                else:
                    coeff *= Fraction(factor)
            key = tuple(exps)
            terms[key] = terms.get(key, Coef.zero()) + Coef.rational(sign * coeff)
        return Poly(nvars, terms)

    def to_json(self):
        return [[list(e), self.terms[e].to_json()] for e in self.support()]

    @staticmethod
    def from_json(obj, nvars: int) -> "Poly":
        terms = {}
        for exps, c in obj:
            key = tuple(int(e) for e in exps)
            terms[key] = terms.get(key, Coef.zero()) + Coef.from_json(c)
        return Poly(nvars, terms)


def _coerce_poly(x, nvars: int) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction, Coef, UnitExpr)):
        return Poly.constant(x, nvars)
    raise TypeError("cannot use %r as a polynomial" % (x,))


# ---------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """A polynomial known modulo monomials of total degree >= trunc."""

    __slots__ = ("poly", "trunc")

    def __init__(self, poly: Poly, trunc: int):
        trunc = int(trunc)
        if trunc < 1:
            raise ValueError("truncation degree must be at least 1")
        kept = {e: c for e, c in poly.terms.items() if sum(e) < trunc}
        object.__setattr__(self, "poly", Poly(poly.nvars, kept))
        object.__setattr__(self, "trunc", trunc)

    def __setattr__(self, *args):
        raise AttributeError("TruncatedSeries is immutable")

    @property
    def nvars(self) -> int:
        return self.poly.nvars

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.poly + other.poly, min(self.trunc, other.trunc))
        return TruncatedSeries(self.poly + other, self.trunc)

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.poly - other.poly, min(self.trunc, other.trunc))
        return TruncatedSeries(self.poly - other, self.trunc)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.poly * other.poly, min(self.trunc, other.trunc))
        return TruncatedSeries(self.poly * other, self.trunc)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.poly == other.poly

    def __repr__(self):
        return "TruncatedSeries(%s, trunc=%d)" % (self.poly.to_text(), self.trunc)

    def constant_coef(self) -> Coef:
        return self.poly.coeff((0,) * self.nvars)

    def to_json(self):
        return {"trunc": self.trunc, "terms": self.poly.to_json()}

    @staticmethod
    def from_json(obj, nvars: int) -> "TruncatedSeries":
        return TruncatedSeries(Poly.from_json(obj["terms"], nvars), int(obj["trunc"]))


def is_unit(f: TruncatedSeries) -> bool:
    """A truncated series is a unit iff its constant term is nonzero."""
    if not isinstance(f, TruncatedSeries):
        raise TypeError("is_unit expects a TruncatedSeries")
    return not f.constant_coef().is_zero


# ---------------------------------------------------------------------------
# Gauss values


def _term_value(exps, vals) -> Value:
    return linear_combination(vals, exps)


def _min_value(values):
    best = values[0]
    for v in values[1:]:
        if cmp(v, best) == Ordering.LESS:
            best = v
    return best


def gauss_value(f, vals):
    """Monomial valuation: minimum of exps . vals over the support of f.

    ``vals`` must list one positive Value per variable.  Returns INFINITY
    for the zero polynomial.  For a TruncatedSeries the minimum is returned
    only when it is strictly below the least possible value of any monomial
    at the truncation degree; otherwise ABOVE_TRUNCATION.
    """
    if isinstance(f, TruncatedSeries):
        series, poly = True, f.poly
    elif isinstance(f, Poly):
        series, poly = False, f
    else:
        raise TypeError("gauss_value expects a Poly or TruncatedSeries")
    vals = list(vals)
    if len(vals) != poly.nvars:
        raise ValueError("need one value per variable")
    for v in vals:
        if v.sign() <= 0:
            raise ValueError("variable values must be positive")
    if poly.is_zero:
        return ABOVE_TRUNCATION if series else INFINITY
    term_values = [_term_value(e, vals) for e in poly.terms]
    best = _min_value(term_values)
    if series:
        floor = _min_value(vals).scale(f.trunc)
        if cmp(best, floor) != Ordering.LESS:
            return ABOVE_TRUNCATION
    return best


# ---------------------------------------------------------------------------
# substitution and derivations


def substitute(f: Poly, subs, new_nvars=None) -> Poly:
    """Substitute subs[i] (a Poly in the new variables) for variable i of f.

    Fully exact; binomial expansion of translated variables falls out of
    ordinary polynomial powers.
    """
    subs = list(subs)
    if len(subs) != f.nvars:
        raise ValueError("need one substitution per variable")
    if new_nvars is None:
        if not subs:
            raise ValueError("cannot infer the new variable count")
        new_nvars = subs[0].nvars
    for s in subs:
        if s.nvars != new_nvars:
            raise ValueError("substitutions disagree on the new variable count")
    powers = {}

    def power(i, e):
        if e == 0:
            return Poly.constant(1, new_nvars)
        key = (i, e)
        if key not in powers:
            powers[key] = subs[i] ** e
        return powers[key]

    out = Poly.zero(new_nvars)
    for exps, c in f.terms.items():
        term = Poly.constant(c, new_nvars)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        out = out + term
    return out


def substitute_series(f: TruncatedSeries, subs, new_nvars=None) -> TruncatedSeries:
    """Substitution for truncated series.

    Sound only when every substituted expression has order >= 1 (no
    constant term): in that case degree-d monomials map into degree >= d,
    so the result is well defined modulo the same truncation degree.
    """
    for s in subs:
        if not isinstance(s, Poly):
            raise TypeError("substitutions must be Poly instances")
        if any(sum(e) == 0 for e in s.terms):
            raise MonoformError(
                "series substitution needs order >= 1 in every variable; "
                "apply the exact Poly substitution instead"
            )
    return TruncatedSeries(substitute(f.poly, subs, new_nvars), f.trunc)


def derivation_apply(f, weights):
    """Apply the diagonal derivation sending y^b to (b . weights) y^b.

    ``weights`` lists one rational per weighted variable; trailing
    variables carry weight zero.
    """
    weights = [Fraction(w) for w in weights]
    if isinstance(f, TruncatedSeries):
        return TruncatedSeries(derivation_apply(f.poly, weights), f.trunc)
    if len(weights) > f.nvars:
        raise ValueError("more weights than variables")
    terms = {}
    for exps, c in f.terms.items():
        factor = sum((Fraction(e) * w for e, w in zip(exps, weights)), Fraction(0))
        if factor != 0:
            terms[exps] = c * factor
    return Poly(f.nvars, terms)
