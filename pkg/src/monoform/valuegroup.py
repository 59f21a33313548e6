"""Exact arithmetic and comparison in finitely generated ordered value groups.

A value group is modelled as a subgroup of the reals generated by a fixed
*embedding basis*: a list of real generators that are linearly independent
over Q.  The built-in generators are 1 and square roots of distinct
squarefree integers, so linear independence holds automatically.  A group
element (`Value`) stores exact rational coordinates against the basis; no
floating point is involved anywhere.

Comparison works in two stages.  Equality is decided exactly from the
coordinates (independence means a value is zero iff all coordinates are
zero).  Order is decided by refining rational interval enclosures of the
irrational generators until the enclosure of the combination excludes
zero.  Each refinement at least halves the interval width, and a nonzero
combination is bounded away from zero, so the loop terminates; a hard cap
of 256 rounds guards against misuse (e.g. a basis that is not actually
independent).

Composite (higher rank) groups are lexicographic products of such groups,
highest level first.  They carry the chain of isolated subgroups (one per
level suffix) and projections onto quotient groups.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import _linalg
from .errors import BasisMismatch, IndependenceError, RefinementLimit

REFINEMENT_CAP = 256


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class GeneratorDescriptor:
    """Description of one real basis generator: sqrt(n) or the rational 1."""

    kind: str  # "sqrt" | "one"
    n: int = 0

    def __post_init__(self):
        if self.kind == "one":
            if self.n not in (0, 1):
                raise ValueError("the rational generator takes no parameter")
        elif self.kind == "sqrt":
            if self.n < 2 or not _is_squarefree(self.n):
                raise ValueError(
                    "sqrt generators need a squarefree integer >= 2, got %r" % (self.n,)
                )
        else:
            raise ValueError("unknown generator kind %r" % (self.kind,))

    def to_json(self):
        if self.kind == "one":
            return {"kind": "one"}
        return {"kind": "sqrt", "n": self.n}

    @staticmethod
    def from_json(obj) -> "GeneratorDescriptor":
        if obj.get("kind") == "one":
            return GeneratorDescriptor("one")
        return GeneratorDescriptor("sqrt", int(obj["n"]))


class _SqrtEnclosure:
    """Shrinking rational interval around sqrt(n)."""

    def __init__(self, n: int):
        self.n = n
        lo = isqrt(n)
        self.lo = Fraction(lo)
        self.hi = Fraction(lo + 1)

    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self):
        """One Newton (Heron) step from above; guaranteed to halve the width."""
        old = self.width()
        hi = (self.hi + self.n / self.hi) / 2
        lo = self.n / hi
        if hi - lo > old / 2:
            # fall back to bisection to keep the halving guarantee
            mid = (self.lo + self.hi) / 2
            if mid * mid >= self.n:
                hi = min(hi, mid)
            else:
                lo = max(lo, mid)
        self.lo, self.hi = lo, hi


class EmbeddingBasis:
    """An ordered list of independent real generators with shared enclosures.

    Enclosure state is cached per basis and guarded by a lock so values can
    be compared from several threads.
    """

    def __init__(self, descriptors):
        descs = tuple(descriptors)
        if not descs:
            raise ValueError("an embedding basis needs at least one generator")
        ones = [d for d in descs if d.kind == "one"]
        if len(ones) > 1:
            raise ValueError("the rational generator may appear at most once")
        sqrts = [d.n for d in descs if d.kind == "sqrt"]
        if len(set(sqrts)) != len(sqrts):
            raise ValueError("sqrt generators must be distinct")
        self.descriptors = descs
        self._lock = threading.Lock()
        self._enclosures = {
            i: _SqrtEnclosure(d.n) for i, d in enumerate(descs) if d.kind == "sqrt"
        }

    @property
    def dim(self) -> int:
        return len(self.descriptors)

    @staticmethod
    def sqrt_basis(ns) -> "EmbeddingBasis":
        return EmbeddingBasis([GeneratorDescriptor("sqrt", n) for n in ns])

    @staticmethod
    def with_one(ns) -> "EmbeddingBasis":
        descs = [GeneratorDescriptor("one")]
        descs += [GeneratorDescriptor("sqrt", n) for n in ns]
        return EmbeddingBasis(descs)

    def enclosure(self, i):
        """Current rational interval [lo, hi] around generator i."""
        d = self.descriptors[i]
        if d.kind == "one":
            return Fraction(1), Fraction(1)
        with self._lock:
            e = self._enclosures[i]
            return e.lo, e.hi

    def refine(self, indices):
        with self._lock:
            for i in indices:
                if i in self._enclosures:
                    self._enclosures[i].refine()

    def __eq__(self, other):
        return isinstance(other, EmbeddingBasis) and self.descriptors == other.descriptors

    def __hash__(self):
        return hash(self.descriptors)

    def __repr__(self):
        parts = ["1" if d.kind == "one" else "sqrt%d" % d.n for d in self.descriptors]
        return "EmbeddingBasis(%s)" % ", ".join(parts)

    def to_json(self):
        return [d.to_json() for d in self.descriptors]

    @staticmethod
    def from_json(obj) -> "EmbeddingBasis":
        return EmbeddingBasis([GeneratorDescriptor.from_json(d) for d in obj])


def _coerce_coords(coords):
    return tuple(Fraction(c) for c in coords)


class Value:
    """Element of the group generated by an embedding basis.

    Supports addition, subtraction, negation, and scaling by rationals; all
    of it exact coordinate arithmetic.
    """

    __slots__ = ("basis", "coords")

    def __init__(self, basis: EmbeddingBasis, coords):
        coords = _coerce_coords(coords)
        if len(coords) != basis.dim:
            raise ValueError("coordinate length does not match the basis")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *args):
        raise AttributeError("Value is immutable")

    @staticmethod
    def zero(basis: EmbeddingBasis) -> "Value":
        return Value(basis, [0] * basis.dim)

    @staticmethod
    def unit(basis: EmbeddingBasis, i: int) -> "Value":
        coords = [0] * basis.dim
        coords[i] = 1
        return Value(basis, coords)

    def _check(self, other: "Value"):
        if self.basis != other.basis:
            raise BasisMismatch("values live in different embedding bases")

    def __add__(self, other):
        self._check(other)
        return Value(self.basis, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return Value(self.basis, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return Value(self.basis, [-a for a in self.coords])

    def scale(self, q) -> "Value":
        q = Fraction(q)
        return Value(self.basis, [q * a for a in self.coords])

    __mul__ = scale
    __rmul__ = scale

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def sign(self) -> int:
        """-1, 0, or +1; exact zero test first, then interval refinement."""
        if self.is_zero:
            return 0
        support = [i for i, c in enumerate(self.coords) if c != 0]
        for _ in range(REFINEMENT_CAP):
            lo = Fraction(0)
            hi = Fraction(0)
            for i in support:
                c = self.coords[i]
                glo, ghi = self.basis.enclosure(i)
                if c >= 0:
                    lo += c * glo
                    hi += c * ghi
                else:
                    lo += c * ghi
                    hi += c * glo
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.basis.refine(support)
        raise RefinementLimit(
            "sign undecided after %d refinement rounds; is the basis independent?"
            % REFINEMENT_CAP
        )

    def is_positive(self) -> bool:
        return self.sign() > 0

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self.basis == other.basis and self.coords == other.coords

    def __hash__(self):
        return hash((self.basis.descriptors, self.coords))

    def __repr__(self):
        parts = []
        for c, d in zip(self.coords, self.basis.descriptors):
            if c == 0:
                continue
            g = "1" if d.kind == "one" else "sqrt%d" % d.n
            parts.append("%s*%s" % (c, g))
        return "Value(%s)" % (" + ".join(parts) if parts else "0")

    def to_json(self):
        return [format_rational(c) for c in self.coords]

    @staticmethod
    def from_json(basis: EmbeddingBasis, obj) -> "Value":
        return Value(basis, [parse_rational(c) for c in obj])


def cmp(a: Value, b: Value) -> Ordering:
    """Exact order comparison of two values over the same basis."""
    d = a - b
    return Ordering(d.sign())


def linear_combination(values, coeffs) -> Value:
    """Exact sum of coeff[i] * values[i] (coeffs rational)."""
    if not values:
        raise ValueError("empty combination")
    basis = values[0].basis
    coords = [Fraction(0)] * basis.dim
    for v, c in zip(values, coeffs):
        if v.basis != basis:
            raise BasisMismatch("values live in different embedding bases")
        c = Fraction(c)
        if c == 0:
            continue
        coords = [x + c * y for x, y in zip(coords, v.coords)]
    return Value(basis, coords)


def is_rationally_independent(values) -> bool:
    """True iff the given values are linearly independent over Q.

    Decided exactly: stack the coordinate vectors and compare the rank over
    Q with the number of values.
    """
    values = list(values)
    if not values:
        return True
    basis = values[0].basis
    for v in values:
        if v.basis != basis:
            raise BasisMismatch("values live in different embedding bases")
    matrix = [list(v.coords) for v in values]
    return _linalg.rank(matrix) == len(values)


def require_independent(values, what="values"):
    if not is_rationally_independent(values):
        raise IndependenceError("%s are not rationally independent" % what)


# ---------------------------------------------------------------------------
# composite (higher rank) groups


class CompositeGroup:
    """Lexicographic product of embedding-basis groups, highest level first."""

    def __init__(self, levels):
        self.levels = tuple(levels)
        if not all(isinstance(b, EmbeddingBasis) for b in self.levels):
            raise TypeError("levels must be EmbeddingBasis instances")

    @property
    def rank(self) -> int:
        return len(self.levels)

    @property
    def rational_rank(self) -> int:
        return sum(b.dim for b in self.levels)

    def __eq__(self, other):
        return isinstance(other, CompositeGroup) and self.levels == other.levels

    def __hash__(self):
        return hash(self.levels)

    def to_json(self):
        return [b.to_json() for b in self.levels]

    @staticmethod
    def from_json(obj) -> "CompositeGroup":
        return CompositeGroup([EmbeddingBasis.from_json(b) for b in obj])


class CompositeValue:
    """Element of a composite group: one Value per level, compared lexically."""

    __slots__ = ("group", "parts")

    def __init__(self, group: CompositeGroup, parts):
        parts = tuple(parts)
        if len(parts) != group.rank:
            raise ValueError("need one part per level")
        for part, basis in zip(parts, group.levels):
            if part.basis != basis:
                raise BasisMismatch("part does not match its level basis")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, *args):
        raise AttributeError("CompositeValue is immutable")

    @staticmethod
    def zero(group: CompositeGroup) -> "CompositeValue":
        return CompositeValue(group, [Value.zero(b) for b in group.levels])

    def _check(self, other):
        if self.group != other.group:
            raise BasisMismatch("composite values live in different groups")

    def __add__(self, other):
        self._check(other)
        return CompositeValue(self.group, [a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other):
        self._check(other)
        return CompositeValue(self.group, [a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self):
        return CompositeValue(self.group, [-a for a in self.parts])

    @property
    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.parts)

    def __eq__(self, other):
        if not isinstance(other, CompositeValue):
            return NotImplemented
        return self.group == other.group and self.parts == other.parts

    def __hash__(self):
        return hash((self.group, self.parts))

    def __repr__(self):
        return "CompositeValue(%s)" % ", ".join(repr(p) for p in self.parts)


def composite_cmp(a: CompositeValue, b: CompositeValue) -> Ordering:
    """Lexicographic comparison, highest level decided first."""
    a._check(b)
    for pa, pb in zip(a.parts, b.parts):
        result = cmp(pa, pb)
        if result != Ordering.EQUAL:
            return result
    return Ordering.EQUAL


@dataclass(frozen=True)
class IsolatedSubgroup:
    """One member of the chain of isolated subgroups of a composite group.

    ``level_cut`` levels (counted from the top) vanish on this subgroup; the
    subgroup consists of all values supported on the remaining lower levels.
    """

    level_cut: int
    vanishing_levels: tuple
    rational_rank: int


def isolated_subgroups(group: CompositeGroup):
    """The full chain of isolated subgroups, from the zero subgroup up.

    A composite group of rank b has exactly b + 1 isolated subgroups, one
    per level suffix.  Entry k of the returned list vanishes on the top
    ``rank - k`` levels, so the list starts at the zero subgroup and ends
    with the whole group.
    """
    dims = [b.dim for b in group.levels]
    chain = []
    for k in range(group.rank + 1):
        cut = group.rank - k
        chain.append(
            IsolatedSubgroup(
                level_cut=cut,
                vanishing_levels=tuple(range(cut)),
                rational_rank=sum(dims[cut:]),
            )
        )
    return chain


def composite_project(v: CompositeValue, level: int) -> CompositeValue:
    """Project onto the quotient by the isolated subgroup below ``level``.

    Keeps the top ``level`` levels and drops the rest.  ``level = rank`` is
    the identity; ``level = 0`` maps everything to the trivial group.
    """
    if not 0 <= level <= v.group.rank:
        raise ValueError("level out of range")
    new_group = CompositeGroup(v.group.levels[:level])
    return CompositeValue(new_group, v.parts[:level])


# ---------------------------------------------------------------------------
# rational string helpers shared by the JSON layer


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def parse_rational(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError("cannot parse %r as a rational" % (s,))
