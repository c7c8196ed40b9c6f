"""Comodule-algebra coactions of H(F) and certified coinvariant spaces.

A(m,t) carries the right coaction rho(y_ij) = sum_k y_ik (x) u_kj and is
turned into a left comodule by the flip rho' = tau o (id (x) S) o rho;
A(t,n) carries the left coaction lambda(z_ij) = sum_k u_ik (x) z_kj.  The
tensor product A(m,t) (x) A(t,n) is then a left comodule algebra, and its
coinvariants {x : alpha(x) = 1 (x) x} are computed bidegree by bidegree.

Certification logic (the squeeze): the solver accepts x as coinvariant only
when every H-coefficient of alpha(x) - 1 (x) x has a degree-<= d ideal
membership witness, so the computed space V is a subspace of the true
coinvariants; the explicit image of theta is checked to sit inside V.  With
the theorem's prediction theta : A(m,n) ~ coinvariants, the chain
Im theta_k <= V <= (true coinvariants at bidegree (k,k)) pins everything
once dim V equals rank theta_k = (mn)^k — independent of how much of the
ideal the truncation saw.

For unbalanced bidegrees the Laurent grading specialization gives an exact
(truncation-free) vanishing proof: alpha(x) specializes to z^(j-i) (x) x,
so a coinvariant in bidegree (i,j), i != j, is zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exactlin import Subspace
from .freealg import (FreeElement, TensorElement, Word, matrix_entry_algebra,
                      theta, theta_matrix)
from .fpquot import certified_kernel
from .hopf import FMatrix, HopfCover, build_hf, grading_specialize

Q = Fraction

PairKey = tuple[Word, Word]


class CoinvariantOvercountError(RuntimeError):
    """Raised when the computed coinvariant space exceeds the theorem bound.

    Soundness makes this impossible for a correct implementation, so it is
    treated as a loud internal failure rather than a report entry.
    """


class CoactionContext:
    """The coacting data for a shape (m, n, t, F): Hopf cover plus both sides."""

    def __init__(self, m: int, n: int, t: int, F: FMatrix | HopfCover):
        if min(m, n, t) < 1:
            raise ValueError("m, n, t must be positive")
        hopf = F if isinstance(F, HopfCover) else build_hf(F)
        if hopf.t != t:
            raise ValueError("F size does not match t")
        self.m = m
        self.n = n
        self.t = t
        self.hopf = hopf
        self.amt = matrix_entry_algebra("y", m, t)
        self.atn = matrix_entry_algebra("z", t, n)

    # -- generator-level coactions ------------------------------------------

    def rho_gen(self, i: int, j: int) -> TensorElement:
        """rho(y_ij) = sum_k y_ik (x) u_kj."""
        h = self.hopf.algebra
        terms = {((self.amt.letter("y", i, k),), (h.letter("u", k, j),)): Q(1)
                 for k in range(self.t)}
        return TensorElement(self.amt, h, terms)

    def lam_gen(self, i: int, j: int) -> TensorElement:
        """lambda(z_ij) = sum_k u_ik (x) z_kj."""
        h = self.hopf.algebra
        terms = {((h.letter("u", i, k),), (self.atn.letter("z", k, j),)): Q(1)
                 for k in range(self.t)}
        return TensorElement(h, self.atn, terms)

    def flip_gen(self, i: int, j: int) -> TensorElement:
        """rho'(y_ij) = sum_k v_jk (x) y_ik, the direct formula."""
        h = self.hopf.algebra
        terms = {((h.letter("v", j, k),), (self.amt.letter("y", i, k),)): Q(1)
                 for k in range(self.t)}
        return TensorElement(h, self.amt, terms)

    def flip_gen_via_antipode(self, i: int, j: int) -> TensorElement:
        """rho'(y_ij) computed as tau o (id (x) S) o rho — the second code path."""
        h = self.hopf.algebra
        out: dict[tuple[Word, Word], Q] = {}
        for (wy, wu), c in self.rho_gen(i, j).terms.items():
            s_img = self.hopf.antipode(FreeElement(h, {wu: Q(1)}))
            for ws, cs in s_img.terms.items():
                k = (ws, wy)
                s = out.get(k, Q(0)) + c * cs
                if s:
                    out[k] = s
                else:
                    del out[k]
        return TensorElement(h, self.amt, out)

    # -- word-level coaction terms -------------------------------------------

    def flipped_word_terms(self, wa: Word):
        """Terms of rho'(w) for a word w of A(m,t), as (H-word, target word).

        The H-leg of rho is accumulated left-to-right as a u-word and the
        antipode is applied once, anti-multiplicatively, to the whole leg.
        """
        h = self.hopf
        halg = h.algebra
        infos = [self.amt.letter_info(l) for l in wa]
        for kvec in product(range(self.t), repeat=len(wa)):
            uword = tuple(halg.letter("u", k, info[2]) for k, info in zip(kvec, infos))
            s_img = h.antipode(FreeElement(halg, {uword: Q(1)}))
            assert len(s_img.terms) >= 1
            target = tuple(self.amt.letter("y", info[1], k) for info, k in zip(infos, kvec))
            for hw, c in s_img.terms.items():
                yield hw, c, target

    def left_word_terms(self, wb: Word):
        """Terms of lambda(w) for a word w of A(t,n), as (H-word, target word)."""
        halg = self.hopf.algebra
        infos = [self.atn.letter_info(l) for l in wb]
        for lvec in product(range(self.t), repeat=len(wb)):
            hword = tuple(halg.letter("u", info[1], l) for info, l in zip(infos, lvec))
            target = tuple(self.atn.letter("z", l, info[2]) for info, l in zip(infos, lvec))
            yield hword, target

    def tensor_word_terms(self, wa: Word, wb: Word):
        """Terms of alpha(w_A (x) w_B): (H-word, coefficient, target pair)."""
        left_terms = list(self.left_word_terms(wb))
        for hwa, ca, ta in self.flipped_word_terms(wa):
            for hwb, tb in left_terms:
                yield hwa + hwb, ca, (ta, tb)

    def tensor_coaction(self, bidegree: tuple[int, int]) -> dict[tuple[PairKey, PairKey], FreeElement]:
        """Matrix of alpha on the bidegree component: (source pair, target pair)
        -> H-free-cover element of degree exactly i+j (i v-letters, j u-letters)."""
        i, j = bidegree
        if i < 0 or j < 0:
            raise ValueError("bidegree components must be nonnegative")
        halg = self.hopf.algebra
        out: dict[tuple[PairKey, PairKey], FreeElement] = {}
        for wa in self.amt.degree_basis(i):
            for wb in self.atn.degree_basis(j):
                acc: dict[PairKey, dict[Word, Q]] = {}
                for hw, c, tgt in self.tensor_word_terms(wa, wb):
                    bucket = acc.setdefault(tgt, {})
                    s = bucket.get(hw, Q(0)) + c
                    if s:
                        bucket[hw] = s
                    else:
                        del bucket[hw]
                for tgt, terms in acc.items():
                    if terms:
                        out[((wa, wb), tgt)] = FreeElement(halg, terms)
        return out

    # -- pair-basis bookkeeping ---------------------------------------------

    def pair_basis(self, bidegree: tuple[int, int]) -> tuple[PairKey, ...]:
        """Basis word pairs of the bidegree component, in (left, right) lex order;
        the pair at position ia * (right count) + ib is (A-word ia, B-word ib)."""
        i, j = bidegree
        bs = self.atn.degree_basis(j)
        return tuple((wa, wb) for wa in self.amt.degree_basis(i) for wb in bs)

    def element_from_coords(self, bidegree: tuple[int, int], coords) -> TensorElement:
        pairs = self.pair_basis(bidegree)
        terms = {}
        if hasattr(coords, "items"):
            items = coords.items()
        else:
            items = enumerate(coords)
        for idx, c in items:
            if c:
                terms[pairs[idx]] = Q(c)
        return TensorElement(self.amt, self.atn, terms)

    def bidegree_of(self, x: TensorElement) -> tuple[int, int]:
        degs = {(len(wa), len(wb)) for wa, wb in x.terms}
        if len(degs) != 1:
            raise ValueError("element is not bidegree-homogeneous")
        return degs.pop()

    def __repr__(self) -> str:
        return f"CoactionContext(m={self.m}, n={self.n}, t={self.t}, F={self.hopf.F.label})"


# -- coinvariants ---------------------------------------------------------------


def coinvariants(ctx: CoactionContext, bidegree: tuple[int, int], d: int) -> Subspace:
    """Certified coinvariant subspace of the bidegree component at truncation d.

    Coordinates follow ctx.pair_basis(bidegree).  Sound: every member x has
    all H-coefficients of alpha(x) - 1 (x) x certified in the ideal, so the
    result is a subspace of the true coinvariant space.
    """
    i, j = bidegree
    if d < i + j:
        raise ValueError(f"truncation {d} cannot hold coaction legs of degree {i + j}")
    q = ctx.hopf.quotient(d)
    halg = ctx.hopf.algebra
    pairs = ctx.pair_basis(bidegree)
    index = {p: s for s, p in enumerate(pairs)}
    constraint_terms: dict[int, dict[int, dict[Word, Q]]] = {}
    for s, (wa, wb) in enumerate(pairs):
        for hw, c, tgt in ctx.tensor_word_terms(wa, wb):
            bucket = constraint_terms.setdefault(index[tgt], {}).setdefault(s, {})
            v = bucket.get(hw, Q(0)) + c
            if v:
                bucket[hw] = v
            else:
                del bucket[hw]
    constraints = []
    for tau in range(len(pairs)):
        terms = [(s, FreeElement(halg, words))
                 for s, words in constraint_terms.get(tau, {}).items() if words]
        terms.append((tau, -halg.one()))
        constraints.append(terms)
    return certified_kernel(q, len(pairs), constraints)


def coinvariance_residual(ctx: CoactionContext, x: TensorElement, d: int):
    """Nonzero normal forms of the H-coefficients of alpha(x) - 1 (x) x.

    Empty result == certified coinvariant at truncation d.
    """
    if x.is_zero:
        return {}
    i, j = ctx.bidegree_of(x)
    if d < i + j:
        raise ValueError(f"truncation {d} cannot hold coaction legs of degree {i + j}")
    q = ctx.hopf.quotient(d)
    halg = ctx.hopf.algebra
    acc: dict[PairKey, dict[Word, Q]] = {}
    for (wa, wb), coeff in x.terms.items():
        for hw, c, tgt in ctx.tensor_word_terms(wa, wb):
            bucket = acc.setdefault(tgt, {})
            s = bucket.get(hw, Q(0)) + coeff * c
            if s:
                bucket[hw] = s
            else:
                del bucket[hw]
    for tgt, coeff in x.terms.items():
        bucket = acc.setdefault(tgt, {})
        s = bucket.get((), Q(0)) - coeff
        if s:
            bucket[()] = s
        else:
            bucket.pop((), None)
    residuals = {}
    for tgt, words in acc.items():
        if not words:
            continue
        nf = q.normal_form(FreeElement(halg, words))
        if nf:
            residuals[tgt] = nf
    return residuals


def theta_image_vectors(ctx: CoactionContext, k: int):
    """Coordinates of theta(w) over pair_basis((k,k)) for each degree-k word w."""
    hom = theta(ctx.m, ctx.n, ctx.t, left=ctx.amt, right=ctx.atn)
    bwords = ctx.atn.degree_basis(k)
    aindex = {w: i for i, w in enumerate(ctx.amt.degree_basis(k))}
    bindex = {w: i for i, w in enumerate(bwords)}
    nb = len(bwords)
    vectors = []
    for w in hom.source.degree_basis(k):
        img = hom.apply_word(w)
        vectors.append({aindex[wl] * nb + bindex[wr]: c for (wl, wr), c in img.terms.items()})
    return vectors


# -- the exact off-diagonal certificate -----------------------------------------


@dataclass(frozen=True)
class OffDiagonalCertificate:
    """Exact proof that true coinvariants vanish in an unbalanced bidegree."""

    m: int
    n: int
    t: int
    bidegree: tuple[int, int]
    exponent: int
    relations_annihilated: bool
    diagonal_action_ok: bool
    basis_dimension: int

    @property
    def holds(self) -> bool:
        return self.relations_annihilated and self.diagonal_action_ok and self.exponent != 0


def off_diagonal_vanish(m: int, n: int, t: int, bidegree: tuple[int, int],
                        F: FMatrix | HopfCover | None = None) -> OffDiagonalCertificate:
    """Certify true coinvariants = 0 at bidegree (i, j), i != j, exactly.

    Two ingredients, both checked here: (1) the grading specialization kills
    every relation, so it factors through the quotient Hopf algebra; (2) on
    every basis vector of the bidegree component the specialized coaction
    acts by z^(j-i).  A coinvariant x then satisfies z^(j-i) x = x, forcing
    x = 0 when i != j.  No truncation is involved.
    """
    i, j = bidegree
    if i == j:
        raise ValueError("off-diagonal certificate requires i != j")
    ctx = CoactionContext(m, n, t, F if F is not None else FMatrix.identity(t))
    halg = ctx.hopf.algebra
    relations_ok = all(not grading_specialize(r) for r in ctx.hopf.presentation.relations)

    # per-letter survivors of the specialization, computed from the real map
    v_ok = {(a, k): grading_specialize(FreeElement(halg, {(halg.letter("v", a, k),): Q(1)}))
            for a in range(t) for k in range(t)}
    u_ok = {(b, l): grading_specialize(FreeElement(halg, {(halg.letter("u", b, l),): Q(1)}))
            for b in range(t) for l in range(t)}

    diag_ok = True
    count = 0
    for wa in ctx.amt.degree_basis(i):
        for wb in ctx.atn.degree_basis(j):
            count += 1
            exponent = 0
            coeff = Q(1)
            # flipped leg: each y_(i,a) contributes spec(v_(a,k)); only k = a survives
            for letter in wa:
                _, _, a = ctx.amt.letter_info(letter)
                surv = [(k, poly) for (aa, k), poly in v_ok.items() if aa == a and poly]
                if len(surv) != 1 or surv[0][0] != a:
                    diag_ok = False
                    continue
                poly = surv[0][1]
                (e, c), = poly.items()
                exponent += e
                coeff *= c
            for letter in wb:
                _, b, _ = ctx.atn.letter_info(letter)
                surv = [(l, poly) for (bb, l), poly in u_ok.items() if bb == b and poly]
                if len(surv) != 1 or surv[0][0] != b:
                    diag_ok = False
                    continue
                poly = surv[0][1]
                (e, c), = poly.items()
                exponent += e
                coeff *= c
            if exponent != j - i or coeff != 1:
                diag_ok = False
    return OffDiagonalCertificate(
        m=m, n=n, t=t, bidegree=(i, j), exponent=j - i,
        relations_annihilated=relations_ok,
        diagonal_action_ok=diag_ok,
        basis_dimension=count,
    )


# -- Theorem certification --------------------------------------------------------


@dataclass(frozen=True)
class CoinvariantReport:
    """Squeeze-certification outcome for one balanced bidegree (k, k)."""

    m: int
    n: int
    t: int
    f_label: str
    bidegree: tuple[int, int]
    d: int
    dim_coinv: int
    dim_theta: int
    theta_rank: int
    image_contained: bool
    certified: bool
    off_diagonal_vanishing: bool
    witness_degree: int
    computed_subspace: Subspace
    theta_image: Subspace


def certify_fft(ctx: CoactionContext, k: int, d: int,
                check_off_diagonal: bool = True) -> CoinvariantReport:
    """Certify the k-th degree of the fundamental-theorem isomorphism.

    Computes V = coinvariants((k,k), d), the explicit image of theta_k, and
    the independent rank of the theta matrix; certifies Im theta_k <= V and
    dim V = rank theta_k = (mn)^k.   A dim V above (mn)^k contradicts
    soundness + the theorem and raises CoinvariantOvercountError.

    off_diagonal_vanishing reports the exact vanishing certificate for every
    unbalanced bidegree (i, j), i != j, i + j <= 2k (vacuously true at k=0
    unless checked wider); disable with check_off_diagonal=False.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if d < 2 * k:
        raise ValueError(f"truncation {d} below coaction-leg degree {2 * k}")
    V = coinvariants(ctx, (k, k), d)
    vectors = theta_image_vectors(ctx, k)
    image = Subspace.from_vectors(V.ambient_dim, vectors)
    contained = all(V.contains(vec) for vec in vectors)
    target = (ctx.m * ctx.n) ** k
    rank_theta = theta_matrix(ctx.m, ctx.n, ctx.t, k).rank
    if V.dim > target:
        raise CoinvariantOvercountError(
            f"computed coinvariant dimension {V.dim} exceeds the theorem bound "
            f"{target} at bidegree ({k},{k}) — implementation bug")
    off_diag = True
    if check_off_diagonal:
        for i in range(0, 2 * k + 1):
            for j in range(0, 2 * k + 1 - i):
                if i != j:
                    off_diag = off_diag and off_diagonal_vanish(
                        ctx.m, ctx.n, ctx.t, (i, j), ctx.hopf).holds
    certified = contained and V.dim == target and rank_theta == target
    return CoinvariantReport(
        m=ctx.m, n=ctx.n, t=ctx.t, f_label=ctx.hopf.F.label,
        bidegree=(k, k), d=d,
        dim_coinv=V.dim, dim_theta=image.dim, theta_rank=rank_theta,
        image_contained=contained, certified=certified,
        off_diagonal_vanishing=off_diag, witness_degree=d,
        computed_subspace=V, theta_image=image,
    )


# -- subalgebra property: products of coinvariants stay coinvariant ----------------


@dataclass(frozen=True)
class SubalgebraSample:
    left_bidegree: tuple[int, int]
    right_bidegree: tuple[int, int]
    product_bidegree: tuple[int, int]
    truncation: int
    certified: bool


@dataclass(frozen=True)
class SubalgebraReport:
    m: int
    n: int
    t: int
    f_label: str
    seed: int
    margin: int
    samples: tuple[SubalgebraSample, ...]

    @property
    def failures(self) -> int:
        return sum(1 for s in self.samples if not s.certified)

    @property
    def certified(self) -> bool:
        return self.failures == 0


def subalgebra_check(ctx: CoactionContext, samples: int = 100, margin: int = 2,
                     seed: int = 0, max_bidegree: int = 2) -> SubalgebraReport:
    """Check products of random certified coinvariants stay certified coinvariant.

    Random elements are drawn from the computed coinvariant bases of the
    balanced bidegrees (p, p), p <= max_bidegree (each computed at truncation
    2p + margin); each sampled product of bidegrees (p, p), (q, q) is
    re-certified at truncation 2(p + q) + margin.
    """
    rng = random.Random(seed)
    bases = {}
    for p in range(0, max_bidegree + 1):
        V = coinvariants(ctx, (p, p), 2 * p + margin)
        bases[p] = [dict(row) for row in V.basis.rows]
    degs = [p for p in bases if bases[p]]
    out = []
    for _ in range(samples):
        p = rng.choice(degs)
        qdeg = rng.choice(degs)
        x = _random_combination(ctx, bases[p], (p, p), rng)
        y = _random_combination(ctx, bases[qdeg], (qdeg, qdeg), rng)
        prod = x * y
        bid = (p + qdeg, p + qdeg)
        trunc = 2 * (p + qdeg) + margin
        ok = not coinvariance_residual(ctx, prod, trunc)
        out.append(SubalgebraSample((p, p), (qdeg, qdeg), bid, trunc, bool(ok)))
    return SubalgebraReport(m=ctx.m, n=ctx.n, t=ctx.t, f_label=ctx.hopf.F.label,
                            seed=seed, margin=margin, samples=tuple(out))


def _random_combination(ctx: CoactionContext, basis_rows, bidegree, rng) -> TensorElement:
    coords: dict[int, Q] = {}
    for row in basis_rows:
        c = rng.randint(-3, 3)
        if not c:
            continue
        for idx, v in row.items():
            s = coords.get(idx, Q(0)) + c * v
            if s:
                coords[idx] = s
            else:
                del coords[idx]
    if not coords and basis_rows:
        coords = dict(basis_rows[rng.randrange(len(basis_rows))])
    return ctx.element_from_coords(bidegree, coords)


# -- context-free convenience wrappers ----------------------------------------------


def tensor_coaction(m: int, n: int, t: int, F: FMatrix, bidegree: tuple[int, int]):
    return CoactionContext(m, n, t, F).tensor_coaction(bidegree)
