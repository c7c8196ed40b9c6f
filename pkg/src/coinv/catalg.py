"""Comodule category bookkeeping: duality data, intertwiners, and the
coinvariant <-> morphism correspondence.

The objects are finite-dimensional H(F)-comodules built from the standard
one U_l (coaction entries u_ij) by direct sums, tensor powers, and the
S-twisted dual; nested tensor factors are ordered left-to-right and flattened
row-major, so all associators are identities on basis vectors.

Two independently implemented pipelines meet here.  psi sends a word of
A(m,n) straight to the 0/1 matrix (u_j1 (x) ... (x) u_jk) o (p_i1 (x) ... (x)
p_ik) : (U^m)^(x k) -> (U^n)^(x k).  coinv_to_hom transports a certified
coinvariant of A(m,t) (x) A(t,n) through the identifications
y_ij -> v_i(e_j)* (reversed, into the opposite algebra), z_ij -> u_j(e_i),
and the nested evaluation pairing; the two word reversals cancel, leaving
pure index bookkeeping.  main_correspondence_check verifies the pipelines
agree on every theta image - the computational content of the isomorphism
proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .comod import CoactionContext, coinvariance_residual
from .exactlin import RationalMatrix, Subspace
from .freealg import FreeElement, TensorElement, Word, matrix_entry_algebra, theta
from .fpquot import certified_kernel
from .hopf import FMatrix, HopfCover, build_hf

Q = Fraction


class ComoduleSpace:
    """Finite-dimensional comodule: delta(e_a) = sum_b h[a,b] (x) e_b (left side)
    or delta(e_a) = sum_b e_b (x) h[a,b] (right side), entries in the free cover."""

    def __init__(self, hopf: HopfCover, dim: int,
                 coaction: dict[tuple[int, int], FreeElement],
                 side: str = "left", label: str = "?"):
        if dim < 1:
            raise ValueError("comodule dimension must be positive")
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        for (a, b), h in coaction.items():
            if not (0 <= a < dim and 0 <= b < dim):
                raise ValueError("coaction index out of range")
            if h.is_zero:
                raise ValueError("coaction entries must be nonzero")
        self.hopf = hopf
        self.dim = dim
        self.coaction = dict(coaction)
        self.side = side
        self.label = label

    # -- constructors ---------------------------------------------------------

    @classmethod
    def trivial(cls, hopf: HopfCover, dim: int = 1, side: str = "left") -> "ComoduleSpace":
        one = hopf.algebra.one()
        return cls(hopf, dim, {(a, a): one for a in range(dim)}, side, "I" if dim == 1 else f"I^{dim}")

    @classmethod
    def standard_left(cls, hopf: HopfCover) -> "ComoduleSpace":
        t = hopf.t
        co = {(i, j): hopf.u(i, j) for i in range(t) for j in range(t)}
        return cls(hopf, t, co, "left", "U_l")

    @classmethod
    def standard_right(cls, hopf: HopfCover) -> "ComoduleSpace":
        t = hopf.t
        co = {(i, j): hopf.u(j, i) for i in range(t) for j in range(t)}
        return cls(hopf, t, co, "right", "U_r")

    def dual(self) -> "ComoduleSpace":
        """S-twisted dual: h*[a,b] = S(h[b,a]); makes evaluation a comodule map."""
        co = {}
        for (b, a), h in self.coaction.items():
            img = self.hopf.antipode(h)
            if not img.is_zero:
                co[(a, b)] = img
        return ComoduleSpace(self.hopf, self.dim, co, self.side, self.label + "*")

    def direct_sum(self, other: "ComoduleSpace") -> "ComoduleSpace":
        self._compatible(other)
        co = dict(self.coaction)
        for (a, b), h in other.coaction.items():
            co[(a + self.dim, b + self.dim)] = h
        return ComoduleSpace(self.hopf, self.dim + other.dim, co, self.side,
                             f"({self.label}(+){other.label})")

    def direct_power(self, m: int) -> "ComoduleSpace":
        if m < 1:
            raise ValueError("direct power requires m >= 1")
        out = self
        for _ in range(m - 1):
            out = out.direct_sum(self)
        out.label = f"{self.label}^{m}" if m > 1 else self.label
        return out

    def tensor(self, other: "ComoduleSpace") -> "ComoduleSpace":
        """Basis e_a (x) f_c at index a*other.dim + c; H-legs multiply left-to-right."""
        self._compatible(other)
        co = {}
        for (a, b), h1 in self.coaction.items():
            for (c, dd), h2 in other.coaction.items():
                h = h1 * h2
                if not h.is_zero:
                    co[(a * other.dim + c, b * other.dim + dd)] = h
        return ComoduleSpace(self.hopf, self.dim * other.dim, co, self.side,
                             f"{self.label}(x){other.label}")

    def tensor_power(self, k: int) -> "ComoduleSpace":
        if k < 0:
            raise ValueError("tensor power requires k >= 0")
        if k == 0:
            return ComoduleSpace.trivial(self.hopf, 1, self.side)
        out = self
        for _ in range(k - 1):
            out = out.tensor(self)
        out.label = f"({self.label})^(x{k})" if k > 1 else self.label
        return out

    def _compatible(self, other: "ComoduleSpace"):
        if self.hopf.algebra is not other.hopf.algebra or self.hopf.F != other.hopf.F:
            raise ValueError("comodules live over different Hopf covers")
        if self.side != other.side:
            raise ValueError("cannot combine left and right comodules")

    # -- structure checks -----------------------------------------------------

    def is_counital(self) -> bool:
        """epsilon(h[a,b]) = delta_ab, an exact rational computation."""
        seen = set(self.coaction)
        for (a, b), h in self.coaction.items():
            if self.hopf.counit(h) != (Q(1) if a == b else Q(0)):
                return False
        return all((a, a) in seen for a in range(self.dim))

    def is_coassociative(self) -> bool:
        """Delta(h[a,c]) = sum_b h[a,b] (x) h[b,c] (left) or sum_b h[b,c] (x) h[a,b]
        (right), exactly in the free cover."""
        for a in range(self.dim):
            for c in range(self.dim):
                lhs = self.hopf.delta(self.coaction.get((a, c), self.hopf.algebra.zero()))
                acc: dict[tuple[Word, Word], Q] = {}
                for b in range(self.dim):
                    h1 = self.coaction.get((a, b))
                    h2 = self.coaction.get((b, c))
                    if h1 is None or h2 is None:
                        continue
                    first, second = (h1, h2) if self.side == "left" else (h2, h1)
                    for w1, c1 in first.terms.items():
                        for w2, c2 in second.terms.items():
                            key = (w1, w2)
                            s = acc.get(key, Q(0)) + c1 * c2
                            if s:
                                acc[key] = s
                            else:
                                del acc[key]
                if dict(lhs.terms) != acc:
                    return False
        return True

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ComoduleSpace) and self.dim == other.dim
                and self.side == other.side and self.coaction == other.coaction
                and self.hopf.F == other.hopf.F)

    __hash__ = None

    def __repr__(self) -> str:
        return f"ComoduleSpace({self.label}, dim={self.dim}, side={self.side})"


class Intertwiner:
    """A linear map between comodules together with its certification data."""

    def __init__(self, source: ComoduleSpace, target: ComoduleSpace, matrix: RationalMatrix):
        if matrix.nrows != target.dim or matrix.ncols != source.dim:
            raise ValueError("matrix shape does not match comodule dimensions")
        source._compatible(target)
        self.source = source
        self.target = target
        self.matrix = matrix

    def morphism_rows(self):
        """H-cover rows, one per (source index, target index), all of which must
        lie in the ideal for T to be a comodule morphism."""
        alg = self.source.hopf.algebra
        for s in range(self.source.dim):
            for r in range(self.target.dim):
                acc = alg.zero()
                for b in range(self.source.dim):
                    h = self.source.coaction.get((s, b))
                    c = self.matrix.entry(r, b)
                    if h is not None and c:
                        acc = acc + h.scale(c)
                for c_idx in range(self.target.dim):
                    h = self.target.coaction.get((c_idx, r))
                    c = self.matrix.entry(c_idx, s)
                    if h is not None and c:
                        acc = acc - h.scale(c)
                if not acc.is_zero:
                    yield (s, r), acc

    def certify(self, d: int) -> bool:
        """Certify the comodule-morphism condition at truncation d."""
        q = self.source.hopf.quotient(d)
        return all(bool(q.is_zero_mod(row)) for _, row in self.morphism_rows())

    def tensor(self, other: "Intertwiner") -> "Intertwiner":
        """The product of the graded morphism algebra: f1 f2 = f1 (x) f2."""
        return Intertwiner(self.source.tensor(other.source),
                           self.target.tensor(other.target),
                           self.matrix.kron(other.matrix))

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Intertwiner) and self.source == other.source
                and self.target == other.target and self.matrix == other.matrix)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Intertwiner({self.source.label} -> {self.target.label}, {self.matrix.nrows}x{self.matrix.ncols})"


# -- Hom-space computation ----------------------------------------------------


def hom_space(source: ComoduleSpace, target: ComoduleSpace, d: int) -> list[Intertwiner]:
    """Certified basis of comodule morphisms source -> target at truncation d.

    Sound: each returned map has every morphism-condition row certified in
    the degree-<= d ideal, so the span is a subspace of the true Hom space.
    """
    source._compatible(target)
    q = source.hopf.quotient(d)
    nsrc, ntgt = source.dim, target.dim
    constraints = []
    for s in range(nsrc):
        for r in range(ntgt):
            terms = []
            for b in range(nsrc):
                h = source.coaction.get((s, b))
                if h is not None:
                    terms.append((r * nsrc + b, h))
            for c in range(ntgt):
                h = target.coaction.get((c, r))
                if h is not None:
                    terms.append((c * nsrc + s, -h))
            constraints.append(terms)
    sol = certified_kernel(q, nsrc * ntgt, constraints)
    out = []
    for row in sol.basis.rows:
        entries = {(idx // nsrc, idx % nsrc): val for idx, val in row.items()}
        out.append(Intertwiner(source, target,
                               RationalMatrix.from_sparse(ntgt, nsrc, entries)))
    return out


def intertwiner_space(m: int, n: int, t: int, F: FMatrix | HopfCover,
                      i: int, j: int, d: int) -> list[Intertwiner]:
    """Certified basis of Hom((U^m)^(x i), (U^n)^(x j)) at truncation d.

    For i != j the grading specialization sends the morphism condition to
    (z^i - z^j) T = 0, so the true Hom space is exactly zero; the computed
    (sound) space is then zero as well.
    """
    if min(m, n, t) < 1:
        raise ValueError("m, n, t must be positive")
    if min(i, j) < 0:
        raise ValueError("tensor powers must be nonnegative")
    if d < i + j:
        raise ValueError(f"truncation {d} below i + j = {i + j}")
    hopf = F if isinstance(F, HopfCover) else build_hf(F)
    u = ComoduleSpace.standard_left(hopf)
    return hom_space(u.direct_power(m).tensor_power(i),
                     u.direct_power(n).tensor_power(j), d)


# -- duality data -------------------------------------------------------------


@dataclass(frozen=True)
class DualityData:
    """Right-dual structure of U_l: e : U (x) U* -> I and d : I -> U* (x) U."""

    t: int
    f_label: str
    u: ComoduleSpace
    u_dual: ComoduleSpace
    e: RationalMatrix
    d: RationalMatrix
    snake_ok: bool
    e_certified: bool
    d_certified: bool
    trunc: int

    def e_power(self, n: int) -> RationalMatrix:
        """Nested evaluation e_n : U^(x n) (x) U*^(x n) -> I (innermost pair first)."""
        if n < 1:
            raise ValueError("n must be positive")
        out = self.e
        eye = RationalMatrix.identity(self.t)
        for _ in range(n - 1):
            out = self.e @ eye.kron(out).kron(eye)
        return out

    def d_power(self, n: int) -> RationalMatrix:
        """Nested coevaluation d_n : I -> U*^(x n) (x) U^(x n)."""
        if n < 1:
            raise ValueError("n must be positive")
        out = self.d
        eye = RationalMatrix.identity(self.t)
        for _ in range(n - 1):
            out = eye.kron(out).kron(eye) @ self.d
        return out

    def power_snake_ok(self, n: int) -> bool:
        """Both snake identities for (U^(x n), U*^(x n), e_n, d_n), exactly."""
        en, dn = self.e_power(n), self.d_power(n)
        eye = RationalMatrix.identity(self.t ** n)
        return (en.kron(eye) @ eye.kron(dn) == eye
                and eye.kron(en) @ dn.kron(eye) == eye)


def build_duality(t: int, F: FMatrix | HopfCover, trunc: int = 4) -> DualityData:
    """Evaluation/coevaluation for U_l with the S-twisted dual.

    e(e_a (x) f_b) = delta_ab and d(1) = sum_a f_a (x) e_a; the snake
    identities are exact matrix identities, and the comodule-morphism
    property of e and d (equivalent to the two antipode laws on the
    generators u) is certified at the given truncation.
    """
    hopf = F if isinstance(F, HopfCover) else build_hf(F)
    if hopf.t != t:
        raise ValueError("F size does not match t")
    u = ComoduleSpace.standard_left(hopf)
    u_dual = u.dual()
    triv = ComoduleSpace.trivial(hopf)
    e = RationalMatrix.from_sparse(1, t * t, {(0, a * t + a): Q(1) for a in range(t)})
    d = RationalMatrix.from_sparse(t * t, 1, {(a * t + a, 0): Q(1) for a in range(t)})
    eye = RationalMatrix.identity(t)
    snake_ok = (e.kron(eye) @ eye.kron(d) == eye and eye.kron(e) @ d.kron(eye) == eye)
    e_cert = Intertwiner(u.tensor(u_dual), triv, e).certify(trunc)
    d_cert = Intertwiner(triv, u_dual.tensor(u), d).certify(trunc)
    return DualityData(t=t, f_label=hopf.F.label, u=u, u_dual=u_dual, e=e, d=d,
                       snake_ok=snake_ok, e_certified=e_cert, d_certified=d_cert,
                       trunc=trunc)


# -- the word-to-morphism map psi ----------------------------------------------


def psi(m: int, n: int, t: int, word: Word, F: FMatrix | HopfCover | None = None) -> Intertwiner:
    """The basis morphism (u_j1 (x) ... (x) u_jk) o (p_i1 (x) ... (x) p_ik)
    attached to the word x_{i1 j1} ... x_{ik jk} of A(m,n).

    Each letter contributes the (nt) x (mt) block picking direct summand i of
    U^m and re-embedding it as summand j of U^n; the word is the left-to-right
    Kronecker product of its letters, a map (U^m)^(x k) -> (U^n)^(x k).
    """
    if min(m, n, t) < 1:
        raise ValueError("m, n, t must be positive")
    hopf = F if isinstance(F, HopfCover) else build_hf(F if F is not None else FMatrix.identity(t))
    amn = matrix_entry_algebra("x", m, n)
    k = len(word)
    mat = RationalMatrix.identity(1)
    for letter in word:
        _, i, j = amn.letter_info(letter)
        block = RationalMatrix.from_sparse(
            n * t, m * t, {(j * t + a, i * t + a): Q(1) for a in range(t)})
        mat = mat.kron(block)
    u = ComoduleSpace.standard_left(hopf)
    return Intertwiner(u.direct_power(m).tensor_power(k),
                       u.direct_power(n).tensor_power(k), mat)


# -- transporting coinvariants to morphisms -------------------------------------


def coinv_to_hom(ctx: CoactionContext, element: TensorElement,
                 d: int | None = None) -> Intertwiner:
    """Transport a certified coinvariant of bidegree (k,k) to a morphism
    (U^m)^(x k) -> (U^n)^(x k).

    The identifications send y_ij to v_i(e_j)* (reversing words, into the
    opposite algebra) and z_ij to u_j(e_i); closing the source leg with the
    nested evaluation pairing reverses once more, so the matrix entry is
    plain bookkeeping: T[row(w_B), col(w_A)] = coefficient of w_A (x) w_B,
    with w_A read as digits i_r*t + a_r (radix mt) and w_B as digits
    c_r*t + b_r (radix nt), leftmost letter most significant.
    """
    if element.is_zero:
        raise ValueError("cannot transport the zero element")
    i, j = ctx.bidegree_of(element)
    if i != j:
        raise ValueError(f"bidegree ({i},{j}) is not balanced")
    k = i
    if d is None:
        d = 2 * k + 2
    if coinvariance_residual(ctx, element, d):
        raise ValueError(f"element is not a certified coinvariant at truncation {d}")
    m, n, t = ctx.m, ctx.n, ctx.t
    entries: dict[tuple[int, int], Q] = {}
    for (wa, wb), coeff in element.terms.items():
        col = 0
        for letter in wa:
            _, ia, a = ctx.amt.letter_info(letter)
            col = col * (m * t) + ia * t + a
        row = 0
        for letter in wb:
            _, b, c = ctx.atn.letter_info(letter)
            row = row * (n * t) + c * t + b
        entries[(row, col)] = coeff
    u = ComoduleSpace.standard_left(ctx.hopf)
    mat = RationalMatrix.from_sparse((n * t) ** k, (m * t) ** k, entries)
    return Intertwiner(u.direct_power(m).tensor_power(k),
                       u.direct_power(n).tensor_power(k), mat)


# -- the endpoint comparison -----------------------------------------------------


@dataclass(frozen=True)
class CorrespondenceReport:
    """Word-by-word comparison of the two pipelines at degree k."""

    m: int
    n: int
    t: int
    f_label: str
    k: int
    d: int
    end_u_dim: int
    equalities_checked: int
    mismatches: tuple[str, ...]
    psi_rank: int

    @property
    def psi_independent(self) -> bool:
        return self.psi_rank == (self.m * self.n) ** self.k

    @property
    def ok(self) -> bool:
        return (self.end_u_dim == 1 and not self.mismatches and self.psi_independent)


def main_correspondence_check(m: int, n: int, t: int, F: FMatrix | HopfCover,
                              k: int, d: int | None = None) -> CorrespondenceReport:
    """Certify coinv_to_hom(theta(w)) = psi(w) for every degree-k word w.

    Also records the computed dim End(U_l) (must be 1 before the psi basis
    claim means anything) and the rank of the psi matrices (must be (mn)^k).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if d is None:
        d = 2 * k + 2
    if d < 2 * k:
        raise ValueError(f"truncation {d} below 2k = {2 * k}")
    ctx = CoactionContext(m, n, t, F)
    end_u = intertwiner_space(1, 1, t, ctx.hopf, 1, 1, max(d, 2))
    hom = theta(m, n, t, left=ctx.amt, right=ctx.atn)
    mismatches = []
    vecs = []
    nrows = (n * t) ** k
    ncols = (m * t) ** k
    words = hom.source.degree_basis(k)
    for w in words:
        transported = coinv_to_hom(ctx, hom.apply_word(w), d=d)
        direct = psi(m, n, t, w, ctx.hopf)
        if transported.matrix != direct.matrix:
            mismatches.append(hom.source.word_label(w))
        vecs.append({r * ncols + c: val for r, c, val in direct.matrix.iter_entries()})
    rank = Subspace.from_vectors(nrows * ncols, vecs).dim
    return CorrespondenceReport(m=m, n=n, t=t, f_label=ctx.hopf.F.label, k=k, d=d,
                                end_u_dim=len(end_u),
                                equalities_checked=len(words),
                                mismatches=tuple(mismatches), psi_rank=rank)
