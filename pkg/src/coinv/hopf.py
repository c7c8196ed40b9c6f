"""The universal cosovereign Hopf algebra of an invertible rational matrix.

For an invertible t x t matrix F over Q, the Hopf algebra H(F) is presented
by generators u_ij, v_ij (0 <= i, j < t) and the relation families

    u v^T = I,   v^T u = I,   v (F u^T F^-1) = I,   (F u^T F^-1) v = I,

with coproduct Delta(u_ij) = sum_k u_ik (x) u_kj (same for v), counit
eps(u_ij) = eps(v_ij) = delta_ij, and antipode S(u_ij) = v_ji,
S(v_ij) = (F u^T F^-1)_ij.  This module builds that presentation over the
free cover (u carries grading weight +1, v weight -1), the structure maps
on the cover, and a truncation-certified compatibility check: structure
maps descend to the quotient as soon as they send relations into the
relation ideal.

The grading specialization u_ij -> delta_ij z, v_ij -> delta_ij z^-1 into
Laurent polynomials annihilates every relation exactly (checked at build
time); it is the engine behind exact vanishing results for unbalanced
bidegrees downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactlin import RationalMatrix, rref
from .freealg import FreeAlgebra, FreeElement, GeneratorSet, TensorElement, Word
from .fpquot import CertStatus, Presentation, TruncatedQuotient, truncated_quotient

Q = Fraction

# Laurent polynomial in the grading variable: exponent -> coefficient
LaurentPoly = dict[int, Q]


class FMatrix:
    """An invertible t x t rational matrix together with its exact inverse."""

    __slots__ = ("t", "matrix", "inverse")

    def __init__(self, matrix: RationalMatrix):
        if matrix.nrows != matrix.ncols or matrix.nrows < 1:
            raise ValueError("F must be square and nonempty")
        t = matrix.nrows
        aug_rows = []
        for i in range(t):
            row = dict(matrix.rows[i])
            row[t + i] = Q(1)
            aug_rows.append(row)
        res = rref(RationalMatrix(t, 2 * t, aug_rows))
        if res.pivot_cols != tuple(range(t)):
            raise ValueError("F must be invertible")
        inv_rows = [{c - t: v for c, v in row.items() if c >= t} for row in res.matrix.rows]
        self.t = t
        self.matrix = matrix
        self.inverse = RationalMatrix(t, t, inv_rows)

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_rows(cls, rows) -> "FMatrix":
        return cls(RationalMatrix.from_rows(rows))

    @classmethod
    def identity(cls, t: int) -> "FMatrix":
        return cls(RationalMatrix.identity(t))

    @classmethod
    def diagonal(cls, entries) -> "FMatrix":
        entries = [Q(e) for e in entries]
        return cls(RationalMatrix.from_sparse(
            len(entries), len(entries), {(i, i): e for i, e in enumerate(entries)}))

    @classmethod
    def jordan(cls, t: int) -> "FMatrix":
        """Unipotent upper-triangular Jordan block (ones on the superdiagonal)."""
        entries = {(i, i): Q(1) for i in range(t)}
        entries.update({(i, i + 1): Q(1) for i in range(t - 1)})
        return cls(RationalMatrix.from_sparse(t, t, entries))

    # -- access ----------------------------------------------------------

    def entry(self, i: int, j: int) -> Q:
        return self.matrix.entry(i, j)

    def inv_entry(self, i: int, j: int) -> Q:
        return self.inverse.entry(i, j)

    def to_param(self) -> list[list[str]]:
        """Entries as exact strings, the external JSON form."""
        return [[str(self.matrix.entry(i, j)) for j in range(self.t)] for i in range(self.t)]

    @property
    def label(self) -> str:
        return "[" + ",".join("[" + ",".join(r) + "]" for r in self.to_param()) + "]"

    def __eq__(self, other) -> bool:
        return isinstance(other, FMatrix) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"FMatrix({self.label})"


SymMat = list[list[FreeElement]]


def _sym_u(alg: FreeAlgebra, t: int) -> SymMat:
    return [[alg.gen("u", i, j) for j in range(t)] for i in range(t)]


def _sym_v(alg: FreeAlgebra, t: int) -> SymMat:
    return [[alg.gen("v", i, j) for j in range(t)] for i in range(t)]


def _sym_transpose(m: SymMat) -> SymMat:
    t = len(m)
    return [[m[j][i] for j in range(t)] for i in range(t)]


def _sym_mul(a: SymMat, b: SymMat) -> SymMat:
    t = len(a)
    out = []
    for i in range(t):
        row = []
        for j in range(t):
            acc = a[i][0] * b[0][j]
            for k in range(1, t):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _scalar_mul(f: RationalMatrix, m: SymMat, left: bool) -> SymMat:
    t = len(m)
    out = []
    for i in range(t):
        row = []
        for j in range(t):
            if left:
                acc = m[0][j].scale(f.entry(i, 0))
                for k in range(1, t):
                    acc = acc + m[k][j].scale(f.entry(i, k))
            else:
                acc = m[i][0].scale(f.entry(0, j))
                for k in range(1, t):
                    acc = acc + m[i][k].scale(f.entry(k, j))
            row.append(acc)
        out.append(row)
    return out


class HopfCover:
    """Free cover of H(F): generators, relations, and structure maps."""

    __slots__ = ("F", "t", "algebra", "presentation", "labeled_relations",
                 "_s_images", "_delta")

    def __init__(self, F: FMatrix):
        t = F.t
        alg = FreeAlgebra((GeneratorSet("u", t, t, weight=1),
                           GeneratorSet("v", t, t, weight=-1)))
        U = _sym_u(alg, t)
        V = _sym_v(alg, t)
        Ut = _sym_transpose(U)
        Vt = _sym_transpose(V)
        fuf = _scalar_mul(F.matrix, _scalar_mul(F.inverse, Ut, left=False), left=True)
        one = alg.one()
        families = (("u.tv", _sym_mul(U, Vt)),
                    ("tv.u", _sym_mul(Vt, U)),
                    ("v.FtuFi", _sym_mul(V, fuf)),
                    ("FtuFi.v", _sym_mul(fuf, V)))
        labeled: list[tuple[str, FreeElement]] = []
        seen: set = set()
        for fam, mat in families:
            for i in range(t):
                for j in range(t):
                    rel = mat[i][j] - (one if i == j else alg.zero())
                    key = tuple(sorted(rel.terms.items()))
                    if key in seen:
                        continue
                    seen.add(key)
                    labeled.append((f"{fam}[{i + 1},{j + 1}]", rel))
        self.F = F
        self.t = t
        self.algebra = alg
        self.labeled_relations = tuple(labeled)
        self.presentation = Presentation(alg, [r for _, r in labeled])
        # antipode images: S(u_ij) = v_ji, S(v_ij) = (F u^T F^-1)_ij
        s_images: dict[int, FreeElement] = {}
        for i in range(t):
            for j in range(t):
                s_images[alg.letter("u", i, j)] = alg.gen("v", j, i)
                s_images[alg.letter("v", i, j)] = fuf[i][j]
        self._s_images = s_images
        # coproduct images: Delta(g_ij) = sum_k g_ik (x) g_kj for g in {u, v}
        delta: dict[int, TensorElement] = {}
        for name in ("u", "v"):
            for i in range(t):
                for j in range(t):
                    terms = {((alg.letter(name, i, k),), (alg.letter(name, k, j),)): Q(1)
                             for k in range(t)}
                    delta[alg.letter(name, i, j)] = TensorElement(alg, alg, terms)
        self._delta = delta
        for label, rel in labeled:
            spec = grading_specialize(rel)
            if spec:
                raise AssertionError(
                    f"grading specialization fails to annihilate relation {label}")

    # -- generators --------------------------------------------------------

    def u(self, i: int, j: int) -> FreeElement:
        return self.algebra.gen("u", i, j)

    def v(self, i: int, j: int) -> FreeElement:
        return self.algebra.gen("v", i, j)

    # -- structure maps on the cover ----------------------------------------

    def delta_word(self, w: Word) -> TensorElement:
        out = TensorElement(self.algebra, self.algebra, {((), ()): Q(1)})
        for letter in w:
            out = out * self._delta[letter]
        return out

    def delta(self, x: FreeElement) -> TensorElement:
        if x.algebra != self.algebra:
            raise ValueError("element not in this Hopf cover")
        acc = TensorElement(self.algebra, self.algebra, {})
        for w, c in x.terms.items():
            acc = acc + self.delta_word(w).scale(c)
        return acc

    def counit(self, x: FreeElement) -> Q:
        if x.algebra != self.algebra:
            raise ValueError("element not in this Hopf cover")
        alg = self.algebra
        total = Q(0)
        for w, c in x.terms.items():
            if all(info[1] == info[2] for info in map(alg.letter_info, w)):
                total += c
        return total

    def antipode(self, x: FreeElement) -> FreeElement:
        """Anti-homomorphic extension of the antipode letter images."""
        if x.algebra != self.algebra:
            raise ValueError("element not in this Hopf cover")
        acc = self.algebra.zero()
        for w, c in x.terms.items():
            prod = self.algebra.one()
            for letter in reversed(w):
                prod = prod * self._s_images[letter]
            acc = acc + prod.scale(c)
        return acc

    def quotient(self, d: int) -> TruncatedQuotient:
        """Shared truncated quotient of the relation ideal at degree d."""
        return truncated_quotient(self.presentation, d)

    def __repr__(self) -> str:
        return f"HopfCover(t={self.t}, F={self.F.label})"


def build_hf(F: FMatrix) -> HopfCover:
    """Construct the presented cosovereign Hopf cover of F."""
    return HopfCover(F)


def grading_specialize(x: FreeElement) -> LaurentPoly:
    """Specialize g_ij -> delta_ij z^w(g) (w = generator-set weight).

    Off-diagonal letters map to zero, diagonal words to a power of z given
    by the word weight.  On a Hopf cover this is an algebra map to Laurent
    polynomials because every relation specializes to zero (enforced at
    cover construction).
    """
    alg = x.algebra
    out: LaurentPoly = {}
    for w, c in x.terms.items():
        if any(info[1] != info[2] for info in map(alg.letter_info, w)):
            continue
        e = alg.word_weight(w)
        s = out.get(e, Q(0)) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return out


@dataclass(frozen=True)
class HopfCompatReport:
    """Outcome of the Hopf-structure compatibility checks at truncation d."""

    t: int
    f_label: str
    d: int
    coassoc_ok: bool
    counit_laws_ok: bool
    counit_kills_relations: bool
    relation_antipode: tuple[CertStatus, ...]
    relation_coproduct: tuple[CertStatus, ...]
    antipode_axiom: tuple[CertStatus, ...]

    @property
    def status(self) -> str:
        if not (self.coassoc_ok and self.counit_laws_ok and self.counit_kills_relations):
            return "mismatch"
        pending = list(self.relation_antipode) + list(self.relation_coproduct) \
            + list(self.antipode_axiom)
        if all(pending):
            return "certified"
        return "inconclusive"

    @property
    def certified(self) -> bool:
        return self.status == "certified"


def check_hopf_compat(h: HopfCover, d: int) -> HopfCompatReport:
    """Certify that the Hopf structure maps descend to the quotient.

    Exact checks on the cover: coassociativity and the counit laws on the
    generators, and eps(relation) = 0.  Truncation-certified checks at
    degree d: S(relation) and both antipode-axiom generator identities lie
    in the ideal, and (NF (x) NF)(Delta(relation)) vanishes, i.e.
    Delta(relation) lies in I (x) cover + cover (x) I.
    """
    if d < max(4, h.presentation.max_relation_degree):
        raise ValueError("compatibility checks need d >= max(4, relation degree)")
    alg = h.algebra
    q = h.quotient(d)

    coassoc_ok = True
    counit_ok = True
    for letter in alg.letters():
        g_word = (letter,)
        dg = h.delta_word(g_word)
        lhs: dict[tuple[Word, Word, Word], Q] = {}
        rhs: dict[tuple[Word, Word, Word], Q] = {}
        for (w1, w2), c in dg.terms.items():
            for (a, b), cc in h.delta_word(w1).terms.items():
                k = (a, b, w2)
                lhs[k] = lhs.get(k, Q(0)) + c * cc
            for (a, b), cc in h.delta_word(w2).terms.items():
                k = (w1, a, b)
                rhs[k] = rhs.get(k, Q(0)) + c * cc
        if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
            coassoc_ok = False
        left_law: dict[Word, Q] = {}
        right_law: dict[Word, Q] = {}
        for (w1, w2), c in dg.terms.items():
            e1 = h.counit(FreeElement(alg, {w1: Q(1)}))
            e2 = h.counit(FreeElement(alg, {w2: Q(1)}))
            if e1:
                left_law[w2] = left_law.get(w2, Q(0)) + c * e1
            if e2:
                right_law[w1] = right_law.get(w1, Q(0)) + c * e2
        expect = {g_word: Q(1)}
        if {k: v for k, v in left_law.items() if v} != expect \
                or {k: v for k, v in right_law.items() if v} != expect:
            counit_ok = False

    counit_kills = all(h.counit(r) == 0 for _, r in h.labeled_relations)

    rel_antipode = tuple(q.is_zero_mod(h.antipode(r)) for _, r in h.labeled_relations)

    rel_coprod = []
    for _, r in h.labeled_relations:
        dr = h.delta(r)
        residual: dict[tuple[Word, Word], Q] = {}
        for (w1, w2), c in dr.terms.items():
            nf1 = q.normal_form_word(w1)
            if not nf1:
                continue
            nf2 = q.normal_form_word(w2)
            if not nf2:
                continue
            for a, ca in nf1.items():
                for b, cb in nf2.items():
                    k = (a, b)
                    s = residual.get(k, Q(0)) + c * ca * cb
                    if s:
                        residual[k] = s
                    else:
                        del residual[k]
        rel_coprod.append(CertStatus.CERTIFIED_ZERO if not residual
                          else CertStatus.NOT_CERTIFIED)

    axiom = []
    for letter in alg.letters():
        g = FreeElement(alg, {(letter,): Q(1)})
        dg = h.delta(g)
        eps = h.counit(g)
        left = alg.zero()
        right = alg.zero()
        for (w1, w2), c in dg.terms.items():
            left = left + (h.antipode(FreeElement(alg, {w1: Q(1)}))
                           * FreeElement(alg, {w2: Q(1)})).scale(c)
            right = right + (FreeElement(alg, {w1: Q(1)})
                             * h.antipode(FreeElement(alg, {w2: Q(1)}))).scale(c)
        unit = alg.one().scale(eps)
        axiom.append(q.is_zero_mod(left - unit))
        axiom.append(q.is_zero_mod(right - unit))

    return HopfCompatReport(
        t=h.t, f_label=h.F.label, d=d,
        coassoc_ok=coassoc_ok,
        counit_laws_ok=counit_ok,
        counit_kills_relations=counit_kills,
        relation_antipode=rel_antipode,
        relation_coproduct=tuple(rel_coprod),
        antipode_axiom=tuple(axiom),
    )
