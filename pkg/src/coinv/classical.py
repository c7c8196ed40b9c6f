"""Commutative fundamental theorems at desk scale, degree by degree.

theta* : Q[X] -> Q[Y] (x) Q[Z] = Q[Y,Z] sends X_ij to sum_k Y_ik Z_kj; the
classical theorems identify its image with the gl_t-invariants of Q[Y,Z]
(first theorem) and its kernel with the ideal of (t+1) x (t+1) minors
(second theorem).  Everything here is homogeneous, so each statement reduces
to exact linear algebra on one graded component at a time — no Groebner
machinery.

Invariance is checked through its Lie-algebra linearization: the t^2
polarization derivations E_ab with E_ab(Y_ic) = -delta_bc Y_ia and
E_ab(Z_cj) = delta_ac Z_bj.  Over Q this is equivalent to invariance under
the group action (A, B) -> (A g^-1, g B); the equivalence is classical and
assumed, not certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .exactlin import Subspace, solve_homogeneous

Q = Fraction

Mono = tuple[int, ...]
Poly = dict[Mono, Q]


class PolyRing:
    """Commutative polynomial ring with matrix-indexed variable groups.

    Monomials are exponent vectors over all variables; within a fixed total
    degree they are enumerated in lexicographic order of the exponent vector
    (graded-lex overall), which fixes all coordinate systems and reduced
    bases deterministically.
    """

    def __init__(self, groups: tuple[tuple[str, int, int], ...]):
        self.groups = tuple(groups)
        self._offsets = {}
        off = 0
        for sym, rows, cols in self.groups:
            if rows < 1 or cols < 1:
                raise ValueError("variable group dimensions must be positive")
            if sym in self._offsets:
                raise ValueError(f"duplicate variable group {sym!r}")
            self._offsets[sym] = (off, rows, cols)
            off += rows * cols
        self.nvars = off
        self._deg_cache: dict[int, tuple[Mono, ...]] = {}
        self._pos_cache: dict[int, dict[Mono, int]] = {}

    def var_index(self, sym: str, i: int, j: int) -> int:
        off, rows, cols = self._offsets[sym]
        if not (0 <= i < rows and 0 <= j < cols):
            raise ValueError(f"index ({i},{j}) out of range for group {sym!r}")
        return off + i * cols + j

    def var(self, sym: str, i: int, j: int) -> Poly:
        mono = tuple(1 if v == self.var_index(sym, i, j) else 0 for v in range(self.nvars))
        return {mono: Q(1)}

    def var_label(self, v: int) -> str:
        for sym, (off, rows, cols) in self._offsets.items():
            if off <= v < off + rows * cols:
                r, c = divmod(v - off, cols)
                return f"{sym}{r + 1}{c + 1}"
        raise ValueError("variable index out of range")

    def mono_label(self, mono: Mono) -> str:
        parts = []
        for v, e in enumerate(mono):
            if e == 1:
                parts.append(self.var_label(v))
            elif e > 1:
                parts.append(f"{self.var_label(v)}^{e}")
        return "*".join(parts) if parts else "1"

    def one(self) -> Poly:
        return {(0,) * self.nvars: Q(1)}

    def monomials_of_degree(self, k: int) -> tuple[Mono, ...]:
        if k < 0:
            raise ValueError("degree must be nonnegative")
        if k not in self._deg_cache:
            out: list[Mono] = []

            def rec(prefix: list[int], remaining: int, pos: int):
                if pos == self.nvars - 1:
                    out.append(tuple(prefix + [remaining]))
                    return
                for e in range(remaining, -1, -1):
                    rec(prefix + [e], remaining - e, pos + 1)

            if self.nvars == 0:
                raise ValueError("ring has no variables")
            rec([], k, 0)
            out.sort()
            self._deg_cache[k] = tuple(out)
            self._pos_cache[k] = {m: i for i, m in enumerate(out)}
        return self._deg_cache[k]

    def monomial_position(self, mono: Mono) -> int:
        k = sum(mono)
        self.monomials_of_degree(k)
        return self._pos_cache[k][mono]

    def to_vector(self, p: Poly, k: int) -> dict[int, Q]:
        """Coordinates of a degree-k homogeneous polynomial."""
        vec = {}
        for mono, c in p.items():
            if sum(mono) != k:
                raise ValueError("polynomial is not homogeneous of the requested degree")
            vec[self.monomial_position(mono)] = c
        return vec


def padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Q(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def pscale(a: Poly, c) -> Poly:
    c = Q(c)
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            s = out.get(m, Q(0)) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


# -- theta* -----------------------------------------------------------------------


def _rings(m: int, n: int, t: int) -> tuple[PolyRing, PolyRing]:
    if min(m, n, t) < 1:
        raise ValueError("m, n, t must be positive")
    return (PolyRing((("X", m, n),)), PolyRing((("Y", m, t), ("Z", t, n))))


def theta_star_images(m: int, n: int, t: int) -> tuple[PolyRing, PolyRing, dict[int, Poly]]:
    """Source ring, target ring, and the generator images X_ij -> sum_k Y_ik Z_kj."""
    rx, ryz = _rings(m, n, t)
    images = {}
    for i in range(m):
        for j in range(n):
            img: Poly = {}
            for k in range(t):
                img = padd(img, pmul(ryz.var("Y", i, k), ryz.var("Z", k, j)))
            images[rx.var_index("X", i, j)] = img
    return rx, ryz, images


def theta_star_apply(mono: Mono, images: dict[int, Poly], ryz: PolyRing) -> Poly:
    out = ryz.one()
    for v, e in enumerate(mono):
        for _ in range(e):
            out = pmul(out, images[v])
    return out


def theta_star_kernel(m: int, n: int, t: int, k: int) -> Subspace:
    """Kernel of the degree-k component of theta*, over degree-k X-monomials."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    rx, ryz, images = theta_star_images(m, n, t)
    monos = rx.monomials_of_degree(k)
    equations: dict[int, dict[int, Q]] = {}
    for idx, mono in enumerate(monos):
        img = theta_star_apply(mono, images, ryz)
        for target, c in img.items():
            equations.setdefault(ryz.monomial_position(target), {})[idx] = c
    return solve_homogeneous(equations.values(), len(monos))


def theta_star_image(m: int, n: int, t: int, k: int) -> Subspace:
    """Image of the degree-k component of theta*, over degree-2k target monomials."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    rx, ryz, images = theta_star_images(m, n, t)
    ntarget = len(ryz.monomials_of_degree(2 * k))
    vectors = [ryz.to_vector(theta_star_apply(mono, images, ryz), 2 * k)
               for mono in rx.monomials_of_degree(k)]
    return Subspace.from_vectors(ntarget, vectors)


# -- the minors ideal -------------------------------------------------------------


def minor_polys(m: int, n: int, t: int) -> list[Poly]:
    """All (t+1) x (t+1) minors of the generic m x n matrix X; empty if t >= min(m,n)."""
    rx, _ = _rings(m, n, t)
    size = t + 1
    if size > m or size > n:
        return []
    out = []
    for rows in combinations(range(m), size):
        for cols in combinations(range(n), size):
            det: Poly = {}
            for perm in permutations(range(size)):
                sign = Q(1)
                for a in range(size):
                    for b in range(a + 1, size):
                        if perm[a] > perm[b]:
                            sign = -sign
                term = rx.one()
                for l in range(size):
                    term = pmul(term, rx.var("X", rows[l], cols[perm[l]]))
                det = padd(det, pscale(term, sign))
            out.append(det)
    return out


def minors_component(m: int, n: int, t: int, k: int) -> Subspace:
    """Degree-k component of the ideal generated by the (t+1) x (t+1) minors."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    rx, _ = _rings(m, n, t)
    nmonos = len(rx.monomials_of_degree(k))
    gens = minor_polys(m, n, t)
    if not gens or k < t + 1:
        return Subspace.zero(nmonos)
    vectors = []
    for cof in rx.monomials_of_degree(k - t - 1):
        cof_poly = {cof: Q(1)}
        for g in gens:
            vectors.append(rx.to_vector(pmul(cof_poly, g), k))
    return Subspace.from_vectors(nmonos, vectors)


# -- the gl_t action ---------------------------------------------------------------


class DerivationAction:
    """The t^2 polarization derivations of the gl_t action on Q[Y, Z]."""

    def __init__(self, m: int, n: int, t: int):
        if min(m, n, t) < 1:
            raise ValueError("m, n, t must be positive")
        self.m, self.n, self.t = m, n, t
        _, self.ring = _rings(m, n, t)
        # var_images[(a, b)][v] = E_ab(variable v), stored sparse
        self.var_images: dict[tuple[int, int], dict[int, Poly]] = {}
        for a in range(t):
            for b in range(t):
                imgs: dict[int, Poly] = {}
                for i in range(m):
                    # E_ab(Y_ic) = -delta_bc Y_ia
                    imgs[self.ring.var_index("Y", i, b)] = pscale(self.ring.var("Y", i, a), -1)
                for j in range(n):
                    # E_ab(Z_cj) = delta_ac Z_bj
                    imgs[self.ring.var_index("Z", a, j)] = self.ring.var("Z", b, j)
                self.var_images[(a, b)] = imgs

    def apply(self, a: int, b: int, p: Poly) -> Poly:
        """E_ab extended to polynomials by the Leibniz rule."""
        imgs = self.var_images[(a, b)]
        out: Poly = {}
        for mono, c in p.items():
            for v, e in enumerate(mono):
                if e and v in imgs:
                    lowered = list(mono)
                    lowered[v] -= 1
                    out = padd(out, pscale(pmul({tuple(lowered): Q(1)}, imgs[v]), c * e))
        return out


def glt_invariants(m: int, n: int, t: int, degree: int) -> Subspace:
    """Joint kernel of all t^2 derivations on the total-degree component of Q[Y,Z].

    `degree` is the total degree in the tensor ring (each theta* image of an
    X-degree-k monomial lands in total degree 2k).
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    act = DerivationAction(m, n, t)
    ring = act.ring
    monos = ring.monomials_of_degree(degree)
    equations: dict[tuple[tuple[int, int], int], dict[int, Q]] = {}
    for idx, mono in enumerate(monos):
        for ab in act.var_images:
            img = act.apply(ab[0], ab[1], {mono: Q(1)})
            for target, c in img.items():
                equations.setdefault((ab, ring.monomial_position(target)), {})[idx] = c
    return solve_homogeneous(equations.values(), len(monos))


# -- theorem reports ---------------------------------------------------------------


@dataclass(frozen=True)
class DegreeComparison:
    degree: int
    dim_left: int
    dim_right: int
    equal: bool


@dataclass(frozen=True)
class FftReport:
    m: int
    n: int
    t: int
    kind: str
    rows: tuple[DegreeComparison, ...]

    @property
    def ok(self) -> bool:
        return all(r.equal for r in self.rows)

    @property
    def mismatches(self) -> tuple[DegreeComparison, ...]:
        return tuple(r for r in self.rows if not r.equal)


def fft1_check(m: int, n: int, t: int, max_degree: int) -> FftReport:
    """Per total degree D <= max_degree: gl_t-invariants = theta* image component.

    theta* lands in even total degrees only (X-degree k doubles), so at odd D
    the image component is zero and the invariants must vanish.
    """
    rows = []
    _, ryz = _rings(m, n, t)
    for D in range(max_degree + 1):
        inv = glt_invariants(m, n, t, D)
        if D % 2 == 0:
            img = theta_star_image(m, n, t, D // 2)
        else:
            img = Subspace.zero(len(ryz.monomials_of_degree(D)))
        rows.append(DegreeComparison(D, inv.dim, img.dim, inv == img))
    return FftReport(m=m, n=n, t=t, kind="fft1", rows=tuple(rows))


def fft2_check(m: int, n: int, t: int, max_degree: int) -> FftReport:
    """Per X-degree k <= max_degree: kernel of theta* = minors-ideal component."""
    rows = []
    for k in range(max_degree + 1):
        ker = theta_star_kernel(m, n, t, k)
        mnr = minors_component(m, n, t, k)
        rows.append(DegreeComparison(k, ker.dim, mnr.dim, ker == mnr))
    return FftReport(m=m, n=n, t=t, kind="fft2", rows=tuple(rows))
