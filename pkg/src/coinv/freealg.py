"""Free associative algebras on doubly indexed generator families.

An algebra holds one or more generator sets; a set named ``y`` of shape
(rows, cols) contributes generators y_ij for 0 <= i < rows, 0 <= j < cols
(indices are 0-based in code; rendered labels use the 1-based math
convention, e.g. ``y11``).  Words are tuples of flat letter indices,
elements are sparse rational linear combinations of words, and tensor
elements live in the tensor square of two such algebras.

Generator sets may carry an integer weight; the induced word weight is the
grading used both for the Laurent specialization of Hopf covers and for
block decompositions of relation ideals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .exactlin import RationalMatrix, rank

Q = Fraction

Word = tuple[int, ...]
Scalar = Union[Fraction, int]


@dataclass(frozen=True)
class GeneratorSet:
    """A doubly indexed family of free generators with an optional grading weight."""

    name: str
    rows: int
    cols: int
    weight: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("generator set shape must be positive")
        if not self.name or not self.name.isidentifier():
            raise ValueError("generator set name must be a nonempty identifier")

    @property
    def size(self) -> int:
        return self.rows * self.cols


class FreeAlgebra:
    """Free associative algebra on the union of the given generator sets."""

    __slots__ = ("gen_sets", "_offsets", "_info", "_labels", "_weights", "_by_name")

    def __init__(self, gen_sets: Sequence[GeneratorSet]):
        gen_sets = tuple(gen_sets)
        names = [g.name for g in gen_sets]
        if len(set(names)) != len(names):
            raise ValueError("generator set names must be distinct")
        self.gen_sets = gen_sets
        self._offsets = {}
        self._by_name = {}
        self._info: list[tuple[str, int, int]] = []
        self._labels: list[str] = []
        self._weights: list[int] = []
        off = 0
        for g in gen_sets:
            self._offsets[g.name] = off
            self._by_name[g.name] = g
            for i in range(g.rows):
                for j in range(g.cols):
                    self._info.append((g.name, i, j))
                    self._labels.append(f"{g.name}{i + 1}{j + 1}" if max(g.rows, g.cols) <= 9
                                        else f"{g.name}[{i + 1},{j + 1}]")
                    self._weights.append(g.weight)
            off += g.size

    # -- letters -----------------------------------------------------------

    @property
    def nletters(self) -> int:
        return len(self._info)

    def letter(self, set_name: str, i: int, j: int) -> int:
        """Flat index of generator set_name_{ij} (0-based i, j)."""
        g = self._by_name[set_name]
        if not (0 <= i < g.rows and 0 <= j < g.cols):
            raise ValueError(f"index ({i},{j}) out of range for {set_name}")
        return self._offsets[set_name] + i * g.cols + j

    def letter_info(self, letter: int) -> tuple[str, int, int]:
        return self._info[letter]

    def letter_weight(self, letter: int) -> int:
        return self._weights[letter]

    def letter_label(self, letter: int) -> str:
        return self._labels[letter]

    def letters(self, set_name: str | None = None) -> Iterator[int]:
        if set_name is None:
            yield from range(self.nletters)
        else:
            g = self._by_name[set_name]
            off = self._offsets[set_name]
            yield from range(off, off + g.size)

    def generator_set(self, set_name: str) -> GeneratorSet:
        return self._by_name[set_name]

    # -- words ------------------------------------------------------------

    def word_weight(self, word: Word) -> int:
        return sum(self._weights[l] for l in word)

    def word_label(self, word: Word) -> str:
        return "*".join(self._labels[l] for l in word) if word else "1"

    def degree_basis(self, k: int) -> tuple[Word, ...]:
        """All words of degree k, in lexicographic order."""
        if k < 0:
            raise ValueError("degree must be nonnegative")
        return tuple(product(range(self.nletters), repeat=k))

    def words_upto(self, d: int) -> Iterator[Word]:
        for k in range(d + 1):
            yield from self.degree_basis(k)

    # -- elements ----------------------------------------------------------

    def element(self, terms: Mapping[Word, Scalar]) -> "FreeElement":
        return FreeElement(self, terms)

    def zero(self) -> "FreeElement":
        return FreeElement(self, {})

    def one(self) -> "FreeElement":
        return FreeElement(self, {(): Q(1)})

    def gen(self, set_name: str, i: int, j: int) -> "FreeElement":
        return FreeElement(self, {(self.letter(set_name, i, j),): Q(1)})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeAlgebra) and self.gen_sets == other.gen_sets

    def __hash__(self):
        return hash(self.gen_sets)

    def __repr__(self) -> str:
        parts = ", ".join(f"{g.name}:{g.rows}x{g.cols}" for g in self.gen_sets)
        return f"FreeAlgebra({parts})"


def matrix_entry_algebra(sym: str, rows: int, cols: int, weight: int = 0) -> FreeAlgebra:
    """Free algebra on a single rows x cols family, e.g. A(m, n) on x_ij."""
    return FreeAlgebra((GeneratorSet(sym, rows, cols, weight),))


class FreeElement:
    """Finite rational linear combination of words."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeAlgebra, terms: Mapping[Word, Scalar]):
        self.algebra = algebra
        clean: dict[Word, Q] = {}
        for w, c in terms.items():
            q = Q(c)
            if q:
                clean[tuple(w)] = q
        self.terms = clean

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, word: Word) -> Q:
        return self.terms.get(tuple(word), Q(0))

    def support(self) -> list[Word]:
        return sorted(self.terms, key=lambda w: (len(w), w))

    def degree(self) -> int:
        """Top degree of the support; -1 for the zero element."""
        return max((len(w) for w in self.terms), default=-1)

    def degree_component(self, k: int) -> "FreeElement":
        return FreeElement(self.algebra, {w: c for w, c in self.terms.items() if len(w) == k})

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def weight(self) -> int | None:
        """Common grading weight of the support, or None if mixed / zero."""
        weights = {self.algebra.word_weight(w) for w in self.terms}
        return weights.pop() if len(weights) == 1 else None

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "FreeElement"):
        if self.algebra != other.algebra:
            raise ValueError("elements live in different algebras")

    def __add__(self, other: "FreeElement") -> "FreeElement":
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            s = terms.get(w, Q(0)) + c
            if s:
                terms[w] = s
            else:
                terms.pop(w, None)
        return FreeElement(self.algebra, terms)

    def __neg__(self) -> "FreeElement":
        return FreeElement(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scale(self, a: Scalar) -> "FreeElement":
        q = Q(a)
        return FreeElement(self.algebra, {w: q * c for w, c in self.terms.items()} if q else {})

    def __rmul__(self, a: Scalar) -> "FreeElement":
        return self.scale(a)

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return self.scale(other)
        self._check(other)
        terms: dict[Word, Q] = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                s = terms.get(w, Q(0)) + ca * cb
                if s:
                    terms[w] = s
                else:
                    del terms[w]
        return FreeElement(self.algebra, terms)

    def __pow__(self, k: int) -> "FreeElement":
        if k < 0:
            raise ValueError("negative powers undefined in a free algebra")
        out = FreeElement(self.algebra, {(): Q(1)})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FreeElement) and self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash((self.algebra, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w in self.support():
            c = self.terms[w]
            label = self.algebra.word_label(w)
            if label == "1":
                bits.append(str(c))
            elif c == 1:
                bits.append(label)
            elif c == -1:
                bits.append(f"-{label}")
            else:
                bits.append(f"{c}*{label}")
        out = " + ".join(bits)
        return out.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"FreeElement({self})"


class TensorElement:
    """Element of the tensor product of two free algebras."""

    __slots__ = ("left_algebra", "right_algebra", "terms")

    def __init__(self, left_algebra: FreeAlgebra, right_algebra: FreeAlgebra,
                 terms: Mapping[tuple[Word, Word], Scalar]):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        clean: dict[tuple[Word, Word], Q] = {}
        for (wl, wr), c in terms.items():
            q = Q(c)
            if q:
                clean[(tuple(wl), tuple(wr))] = q
        self.terms = clean

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, wl: Word, wr: Word) -> Q:
        return self.terms.get((tuple(wl), tuple(wr)), Q(0))

    def support(self) -> list[tuple[Word, Word]]:
        return sorted(self.terms, key=lambda p: (len(p[0]) + len(p[1]), p))

    def _check(self, other: "TensorElement"):
        if self.left_algebra != other.left_algebra or self.right_algebra != other.right_algebra:
            raise ValueError("tensor elements live in different tensor squares")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        terms = dict(self.terms)
        for p, c in other.terms.items():
            s = terms.get(p, Q(0)) + c
            if s:
                terms[p] = s
            else:
                terms.pop(p, None)
        return TensorElement(self.left_algebra, self.right_algebra, terms)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.left_algebra, self.right_algebra,
                             {p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, a: Scalar) -> "TensorElement":
        q = Q(a)
        return TensorElement(self.left_algebra, self.right_algebra,
                             {p: q * c for p, c in self.terms.items()} if q else {})

    def __rmul__(self, a: Scalar) -> "TensorElement":
        return self.scale(a)

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        """Componentwise product (a (x) b)(c (x) d) = ac (x) bd."""
        if not isinstance(other, TensorElement):
            return self.scale(other)
        self._check(other)
        terms: dict[tuple[Word, Word], Q] = {}
        for (la, ra), ca in self.terms.items():
            for (lb, rb), cb in other.terms.items():
                p = (la + lb, ra + rb)
                s = terms.get(p, Q(0)) + ca * cb
                if s:
                    terms[p] = s
                else:
                    del terms[p]
        return TensorElement(self.left_algebra, self.right_algebra, terms)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, TensorElement)
                and self.left_algebra == other.left_algebra
                and self.right_algebra == other.right_algebra
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.left_algebra, self.right_algebra, tuple(sorted(self.terms.items()))))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for wl, wr in self.support():
            c = self.terms[(wl, wr)]
            lab = f"{self.left_algebra.word_label(wl)} (x) {self.right_algebra.word_label(wr)}"
            bits.append(lab if c == 1 else f"{c}*[{lab}]")
        return " + ".join(bits)

    def __repr__(self) -> str:
        return f"TensorElement({self})"


def tensor(a: FreeElement, b: FreeElement) -> TensorElement:
    """Elementary tensor a (x) b."""
    terms = {}
    for wa, ca in a.terms.items():
        for wb, cb in b.terms.items():
            terms[(wa, wb)] = ca * cb
    return TensorElement(a.algebra, b.algebra, terms)


def tensor_one(left_algebra: FreeAlgebra, right_algebra: FreeAlgebra) -> TensorElement:
    return TensorElement(left_algebra, right_algebra, {((), ()): Q(1)})


class AlgebraHom:
    """Algebra map from a free algebra, determined by images of the letters.

    Images may be FreeElements of a target free algebra or TensorElements of
    a fixed tensor square; words map to the ordered product of their letter
    images, and the map extends linearly.
    """

    __slots__ = ("source", "images", "_one")

    def __init__(self, source: FreeAlgebra, images: Mapping[int, FreeElement | TensorElement]):
        if set(images) != set(range(source.nletters)):
            raise ValueError("images must be given for every generator")
        vals = list(images.values())
        first = vals[0]
        if isinstance(first, TensorElement):
            for v in vals:
                if not isinstance(v, TensorElement) or v.left_algebra != first.left_algebra \
                        or v.right_algebra != first.right_algebra:
                    raise ValueError("images must share one target tensor square")
            one = tensor_one(first.left_algebra, first.right_algebra)
        else:
            for v in vals:
                if not isinstance(v, FreeElement) or v.algebra != first.algebra:
                    raise ValueError("images must share one target algebra")
            one = first.algebra.one()
        self.source = source
        self.images = dict(images)
        self._one = one

    @property
    def tensor_target(self) -> tuple[FreeAlgebra, FreeAlgebra]:
        if not isinstance(self._one, TensorElement):
            raise ValueError("hom does not target a tensor square")
        return self._one.left_algebra, self._one.right_algebra

    def apply_word(self, word: Word):
        out = self._one
        for letter in word:
            out = out * self.images[letter]
        return out

    def apply(self, x: FreeElement):
        if x.algebra != self.source:
            raise ValueError("element not in the source algebra")
        out = self._one.scale(0)
        for w, c in x.terms.items():
            out = out + self.apply_word(w).scale(c)
        return out

    def __call__(self, x: FreeElement):
        return self.apply(x)


# -- the universal embedding θ ----------------------------------------------


def theta(m: int, n: int, t: int,
          source: FreeAlgebra | None = None,
          left: FreeAlgebra | None = None,
          right: FreeAlgebra | None = None) -> AlgebraHom:
    """The algebra map A(m,n) -> A(m,t) (x) A(t,n), x_ij -> sum_k y_ik (x) z_kj."""
    if min(m, n, t) < 1:
        raise ValueError("m, n, t must be positive")
    src = source if source is not None else matrix_entry_algebra("x", m, n)
    amt = left if left is not None else matrix_entry_algebra("y", m, t)
    atn = right if right is not None else matrix_entry_algebra("z", t, n)
    images: dict[int, TensorElement] = {}
    for i in range(m):
        for j in range(n):
            terms = {((amt.letter("y", i, k),), (atn.letter("z", k, j),)): Q(1) for k in range(t)}
            images[src.letter("x", i, j)] = TensorElement(amt, atn, terms)
    return AlgebraHom(src, images)


@dataclass(frozen=True)
class ThetaMatrixResult:
    """Matrix of θ restricted to degree k, with its exact rank.

    Columns follow degree_basis of A(m,n) in degree k; row index of a word
    pair (w_A, w_B) is ia * len(B-basis) + ib with ia, ib the positions of
    w_A, w_B in the degree-k bases of A(m,t) and A(t,n).
    """

    matrix: RationalMatrix
    rank: int
    source_words: tuple[Word, ...]
    left_words: tuple[Word, ...]
    right_words: tuple[Word, ...]


def theta_matrix(m: int, n: int, t: int, k: int) -> ThetaMatrixResult:
    """Matrix of the degree-k component of θ (always of full column rank)."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    hom = theta(m, n, t)
    src_words = hom.source.degree_basis(k)
    amt, atn = hom.tensor_target
    left_words = amt.degree_basis(k)
    right_words = atn.degree_basis(k)
    lidx = {w: i for i, w in enumerate(left_words)}
    ridx = {w: i for i, w in enumerate(right_words)}
    nb = len(right_words)
    entries: dict[tuple[int, int], Q] = {}
    for col, w in enumerate(src_words):
        img = hom.apply_word(w)
        for (wl, wr), c in img.terms.items():
            entries[(lidx[wl] * nb + ridx[wr], col)] = c
    mat = RationalMatrix.from_sparse(len(left_words) * nb, len(src_words), entries)
    return ThetaMatrixResult(mat, rank(mat), src_words, left_words, right_words)
