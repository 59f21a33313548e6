"""Lattices and semigroups attached to an exponent matrix.

Throughout, C is an integer matrix with rbar rows, sbar columns, and full
row rank.  Row vectors v of length rbar are paired with C through
Phi(v) = v C.  The objects computed here:

* the preimage lattice  G = {v in Q^rbar : v C integral},  returned with an
  exact basis and its index over Z^rbar (the product of the elementary
  divisors of C);

* Hilbert bases of the semigroups
      H = {v in Z^rbar : v C >= 0}   and   I = {v in G : v C >= 0},
  i.e. the unique minimal generating sets of the lattice points of the
  pointed cone {v : v C >= 0};

* module generators of  M_Lambda = {v in G : v C + Lambda >= 0}  over H:
  finitely many shifts u_i with M_Lambda = union of (u_i + H).

Full row rank makes the cone pointed (v C = 0 forces v = 0), which is what
makes all three objects finite.  The Hilbert engine enumerates candidates
from fundamental parallelepipeds of extreme-ray subsets and then strips
decomposable elements; the module engine enumerates the bounded region
where minimal shifts can live (polytope part of the shifted cone plus one
parallelepiped layer of rays) and keeps the elements that cannot be
reduced by any Hilbert generator of H.  Brute-force enumerations over
slack boxes are provided as independent oracles for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, lcm

from . import _linalg
from .errors import LatticeError
from .valuegroup import format_rational


def _as_int_matrix(C):
    M = [[int(x) for x in row] for row in C]
    if not M or not M[0]:
        raise LatticeError("empty exponent matrix")
    cols = len(M[0])
    if any(len(row) != cols for row in M):
        raise LatticeError("ragged exponent matrix")
    return M


def _require_full_rank(M):
    if _linalg.rank(M) != len(M):
        raise LatticeError("exponent matrix must have full row rank")


# ---------------------------------------------------------------------------
# preimage lattice


@dataclass(frozen=True)
class PreimageLattice:
    """The lattice G = {v : v C integral} with a basis and its index."""

    C: tuple
    basis: tuple  # rbar rows of Fractions
    index: int    # [G : Z^rbar]

    def contains(self, v) -> bool:
        """Exact membership test via the basis."""
        inv = _linalg.inverse([list(row) for row in self.basis])
        z = _linalg.vec_mat([Fraction(x) for x in v], inv)
        return all(Fraction(x).denominator == 1 for x in z)

    def to_json(self):
        return {
            "basis": [[format_rational(x) for x in row] for row in self.basis],
            "index": self.index,
        }


def preimage_lattice(C) -> PreimageLattice:
    """Compute G = {v in Q^rbar : v C in Z^sbar} from the Smith normal form.

    With U C V = D diagonal, v C integral iff (v U^-1) D integral, so G is
    spanned by the rows of U scaled by the inverse elementary divisors, and
    [G : Z^rbar] is their product.
    """
    M = _as_int_matrix(C)
    _require_full_rank(M)
    U, D, _ = _linalg.smith_normal_form(M)
    divisors = _linalg.diagonal_of(D)
    if len(divisors) != len(M):
        raise LatticeError("exponent matrix must have full row rank")
    basis = tuple(
        tuple(Fraction(x, d) for x in U[i]) for i, d in enumerate(divisors)
    )
    index = 1
    for d in divisors:
        index *= d
    return PreimageLattice(
        C=tuple(tuple(row) for row in M), basis=basis, index=index
    )


def saturation_basis(C):
    """Basis of (Q-rowspace of C) intersected with Z^sbar: the first rbar
    rows of V^-1 where U C V = D."""
    M = _as_int_matrix(C)
    _require_full_rank(M)
    _, _, V = _linalg.smith_normal_form(M)
    Vinv = _linalg.int_inverse(V)
    return [list(Vinv[i]) for i in range(len(M))], V


# ---------------------------------------------------------------------------
# Hilbert bases


def _extreme_rays(M):
    """Primitive integer generators of the extreme rays of {z : z M >= 0}.

    Candidates come from kernels of (rank-1)-sized subsets of the column
    constraints; each candidate is kept with whichever sign is feasible.
    """
    rows = len(M)
    cols = list(zip(*M))
    rays = {}
    k = rows - 1
    for subset in itertools.combinations(range(len(cols)), k):
        if k == 0:
            candidates = [[1] if rows == 1 else None]
            if rows != 1:
                continue
        else:
            constraint = [list(cols[j]) for j in subset]
            if _linalg.rank(constraint) != k:
                continue
            candidates = _linalg.kernel_right(constraint)
            if len(candidates) != 1:
                continue
        g = [int(x) for x in candidates[0]]
        for sign in (1, -1):
            cand = [sign * x for x in g]
            if all(sum(cand[i] * col[i] for i in range(rows)) >= 0 for col in cols):
                rays[tuple(cand)] = True
                break
    return sorted(rays)


def _in_cone(z, M) -> bool:
    return all(
        sum(z[i] * M[i][j] for i in range(len(z))) >= 0 for j in range(len(M[0]))
    )


def _parallelepiped_points(T):
    """Integer points of {t . T : t in [0,1)^k} for a square integer matrix
    T of nonzero determinant, via coset representatives of the row lattice."""
    k = len(T)
    _, D, V = _linalg.smith_normal_form([list(row) for row in T])
    divisors = [D[i][i] for i in range(k)]
    Vinv = _linalg.int_inverse(V)
    Tinv = _linalg.inverse([list(row) for row in T])
    points = []
    for combo in itertools.product(*(range(d) for d in divisors)):
        w = _linalg.vec_mat(list(combo), Vinv)
        t = _linalg.vec_mat(w, Tinv)
        shift = [floor(x) for x in t]
        w = [
            w[j] - sum(shift[i] * T[i][j] for i in range(k))
            for j in range(k)
        ]
        if any(x != 0 for x in w):
            points.append(tuple(int(x) for x in w))
    return points


def _strip_decomposables(candidates, M):
    """Drop every candidate expressible as a sum of two nonzero cone
    points; what survives is the Hilbert basis."""
    unique = sorted(set(candidates))
    basis = []
    for x in unique:
        decomposable = False
        for h in unique:
            if h == x or all(v == 0 for v in h):
                continue
            diff = [a - b for a, b in zip(x, h)]
            if all(v == 0 for v in diff):
                continue
            if _in_cone(diff, M):
                decomposable = True
                break
        if not decomposable:
            basis.append(x)
    return basis


def _hilbert_core(M):
    """Hilbert basis of {z in Z^k : z M >= 0} for an integer constraint
    matrix M of full row rank (pointed cone)."""
    rows = len(M)
    _require_full_rank(M)
    rays = _extreme_rays(M)
    if not rays:
        return ()
    ray_rank = _linalg.rank([list(r) for r in rays])
    if ray_rank < rows:
        # the cone spans a proper subspace: restate in its saturated lattice
        sat, _ = saturation_basis([list(r) for r in rays])
        M2 = _linalg.mat_mul(sat, M)
        inner = _hilbert_core([[int(x) for x in row] for row in M2])
        return tuple(
            tuple(int(x) for x in _linalg.vec_mat(list(w), sat)) for w in inner
        )
    candidates = [tuple(r) for r in rays]
    for subset in itertools.combinations(rays, rows):
        T = [list(r) for r in subset]
        if _linalg.int_det(T) == 0:
            continue
        for p in _parallelepiped_points(T):
            if _in_cone(p, M):
                candidates.append(p)
    return tuple(_strip_decomposables(candidates, M))


def hilbert_basis(C, which: str = "H"):
    """Minimal generators of H (over Z^rbar) or I (over the preimage
    lattice G).  Elements of H are integer tuples; elements of I are
    Fraction tuples with denominators dividing the lattice index."""
    M = _as_int_matrix(C)
    _require_full_rank(M)
    if which == "H":
        return tuple(sorted(_hilbert_core(M)))
    if which != "I":
        raise ValueError("which must be 'H' or 'I'")
    lat = preimage_lattice(M)
    B = [list(row) for row in lat.basis]
    MB = _linalg.mat_mul(B, M)
    cols = len(MB[0])
    scaled = [[None] * cols for _ in range(len(MB))]
    for j in range(cols):
        scale = lcm(*(Fraction(MB[i][j]).denominator for i in range(len(MB))))
        for i in range(len(MB)):
            scaled[i][j] = int(Fraction(MB[i][j]) * scale)
    zs = _hilbert_core(scaled)
    out = [tuple(Fraction(x) for x in _linalg.vec_mat(list(z), B)) for z in zs]
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# module generators


@dataclass(frozen=True)
class ModuleGens:
    """Generators of M_Lambda = {v in G : v C + Lambda >= 0} over H."""

    C: tuple
    lam: tuple
    gens: tuple       # minimal shifts, Fraction tuples
    over: tuple       # Hilbert basis of H

    def to_json(self):
        return {
            "lambda": list(self.lam),
            "gens": [[format_rational(x) for x in g] for g in self.gens],
            "over": [list(h) for h in self.over],
        }


def _polytope_vertices(M, lam):
    """Vertices of {v : v M + lam >= 0} from invertible column subsets."""
    rows = len(M)
    cols = list(zip(*M))
    vertices = []
    for subset in itertools.combinations(range(len(cols)), rows):
        square = [[cols[j][i] for j in subset] for i in range(rows)]
        try:
            inv = _linalg.inverse(square)
        except ValueError:
            continue
        rhs = [-Fraction(lam[j]) for j in subset]
        v = _linalg.vec_mat(rhs, inv)
        slack = [
            sum(v[i] * cols[j][i] for i in range(rows)) + Fraction(lam[j])
            for j in range(len(cols))
        ]
        if all(s >= 0 for s in slack):
            vertices.append(tuple(v))
    return sorted(set(vertices))


def _lattice_points_in_box(basis, lo, hi):
    """All lattice points v = z . basis with v inside the closed box."""
    inv = _linalg.inverse([list(row) for row in basis])
    k = len(basis)
    zlo, zhi = [], []
    for col in range(k):
        a = Fraction(0)
        b = Fraction(0)
        for i in range(k):
            coeff = inv[i][col]
            a += min(coeff * lo[i], coeff * hi[i])
            b += max(coeff * lo[i], coeff * hi[i])
        zlo.append(ceil(a))
        zhi.append(floor(b))
    for combo in itertools.product(*(range(l, h + 1) for l, h in zip(zlo, zhi))):
        v = tuple(_linalg.vec_mat(list(combo), [list(r) for r in basis]))
        if all(l <= x <= h for x, l, h in zip(v, lo, hi)):
            yield v


def module_generators(C, lam) -> ModuleGens:
    """Minimal shifts generating M_Lambda over H.

    Every element of M_Lambda reduces, by subtracting Hilbert generators of
    H while membership survives, to an element that cannot be reduced
    further; those irreducible elements are finite in number and all lie in
    the polytope part of the shifted cone plus one parallelepiped layer of
    the extreme rays.  That bounded region is enumerated exactly.
    """
    M = _as_int_matrix(C)
    _require_full_rank(M)
    lam = [int(x) for x in lam]
    if len(lam) != len(M[0]):
        raise LatticeError("Lambda length must match the column count")
    h_basis = hilbert_basis(M, "H")
    lat = preimage_lattice(M)
    rays = _extreme_rays(M)
    vertices = _polytope_vertices(M, lam)
    if not vertices:
        return ModuleGens(
            C=tuple(tuple(row) for row in M), lam=tuple(lam), gens=(), over=h_basis
        )
    k = len(M)
    lo = [min(v[i] for v in vertices) for i in range(k)]
    hi = [max(v[i] for v in vertices) for i in range(k)]
    for g in rays:
        for i in range(k):
            lo[i] += min(g[i], 0)
            hi[i] += max(g[i], 0)

    def in_module(v):
        return all(
            sum(v[i] * M[i][j] for i in range(k)) + lam[j] >= 0
            for j in range(len(lam))
        )

    gens = []
    for v in _lattice_points_in_box(lat.basis, lo, hi):
        if not in_module(v):
            continue
        reducible = False
        for h in h_basis:
            shifted = tuple(a - b for a, b in zip(v, h))
            if in_module(shifted):
                reducible = True
                break
        if not reducible:
            gens.append(tuple(Fraction(x) for x in v))
    return ModuleGens(
        C=tuple(tuple(row) for row in M),
        lam=tuple(lam),
        gens=tuple(sorted(gens)),
        over=h_basis,
    )


# ---------------------------------------------------------------------------
# brute-force oracles (independent of the engines above)


def slack_box_points(C, bound: int, which: str = "H"):
    """All semigroup points v with v C in [0, bound]^sbar, by exhaustive
    enumeration.  Decompositions of such points stay inside the box, which
    is what makes this an exact oracle for minimality."""
    M = _as_int_matrix(C)
    _require_full_rank(M)
    rows = len(M)
    cols = list(zip(*M))
    subset = None
    for combo in itertools.combinations(range(len(cols)), rows):
        square = [[cols[j][i] for j in combo] for i in range(rows)]
        if _linalg.det(square) != 0:
            subset = combo
            break
    square = [[cols[j][i] for j in subset] for i in range(rows)]
    inv = _linalg.inverse(square)
    lo = [Fraction(0)] * rows
    hi = [Fraction(0)] * rows
    for col in range(rows):
        for i in range(rows):
            coeff = inv[i][col]
            lo[col] += min(Fraction(0), coeff * bound)
            hi[col] += max(Fraction(0), coeff * bound)
    basis = (
        [[Fraction(int(i == j)) for j in range(rows)] for i in range(rows)]
        if which == "H"
        else [list(r) for r in preimage_lattice(M).basis]
    )
    points = []
    for v in _lattice_points_in_box(basis, lo, hi):
        image = [sum(v[i] * M[i][j] for i in range(rows)) for j in range(len(cols))]
        if all(0 <= x <= bound for x in image):
            points.append(tuple(Fraction(x) for x in v))
    return points


def brute_minimal_generators(points):
    """Minimal generators among a decomposition-closed point set: the
    nonzero points that are not sums of two nonzero points of the set."""
    pool = set(points)
    zero = tuple(Fraction(0) for _ in next(iter(pool)))
    out = []
    for x in pool:
        if x == zero:
            continue
        decomposable = any(
            a != zero
            and a != x
            and tuple(p - q for p, q in zip(x, a)) in pool
            and tuple(p - q for p, q in zip(x, a)) != zero
            for a in pool
        )
        if not decomposable:
            out.append(x)
    return sorted(out)


def module_box_points(C, lam, bound: int):
    """All v in M_Lambda with slack v C + lam in [0, bound]^sbar."""
    M = _as_int_matrix(C)
    rows = len(M)
    cols = list(zip(*M))
    lam = [int(x) for x in lam]
    subset = None
    for combo in itertools.combinations(range(len(cols)), rows):
        square = [[cols[j][i] for j in combo] for i in range(rows)]
        if _linalg.det(square) != 0:
            subset = combo
            break
    square = [[cols[j][i] for j in subset] for i in range(rows)]
    inv = _linalg.inverse(square)
    lo = [Fraction(0)] * rows
    hi = [Fraction(0)] * rows
    for col in range(rows):
        for i in range(rows):
            coeff = inv[i][col]
            span = [coeff * (-lam[subset[col]]), coeff * (bound - lam[subset[col]])]
            lo[col] += min(span)
            hi[col] += max(span)
    # box computed per z-coordinate of the chosen square system; translate
    lo2 = [min(lo[i], hi[i]) for i in range(rows)]
    hi2 = [max(lo[i], hi[i]) for i in range(rows)]
    basis = [list(r) for r in preimage_lattice(M).basis]
    points = []
    for v in _lattice_points_in_box(basis, lo2, hi2):
        slack = [
            sum(v[i] * M[i][j] for i in range(rows)) + lam[j]
            for j in range(len(cols))
        ]
        if all(0 <= x <= bound for x in slack):
            points.append(tuple(Fraction(x) for x in v))
    return points
