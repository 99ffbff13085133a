"""Finite Coxeter groups built exactly from a Coxeter matrix.

Elements are canonicalized by the permutation they induce on the root system
(coefficients in the simple-root basis, exact over Q or Q(sqrt 5)).  Element
indices follow breadth-first ShortLex order of reduced words, identity first,
so index ``i + 1`` is the simple reflection ``s_i``.

Subsets of generators are passed around as int bitmasks.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import linalg
from .scalars import GOLDEN, QUADRATIC, RATIONAL, Field

DEFAULT_CAP = 2000


class CoxeterError(ValueError):
    """Malformed or unsupported Coxeter data."""


class NonFiniteGroup(CoxeterError):
    pass


class RankTooLarge(CoxeterError):
    pass


class UnsupportedCoxeterEntry(CoxeterError):
    pass


# -- generator subsets ------------------------------------------------------

def bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return out


def to_mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> list[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    return [m for m in range(mask + 1) if m & ~mask == 0]


# -- Coxeter matrices -------------------------------------------------------

@dataclass(frozen=True)
class CoxeterMatrix:
    m: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.m)
        object.__setattr__(self, "m", rows)
        n = len(rows)
        if n == 0:
            raise CoxeterError("rank must be positive")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise CoxeterError("Coxeter matrix must be square")
            for j, x in enumerate(row):
                if i == j and x != 1:
                    raise CoxeterError(f"m[{i}][{i}] must be 1")
                if i != j:
                    if x < 2:
                        raise CoxeterError(f"m[{i}][{j}] = {x}; off-diagonal entries must be >= 2 (infinity not accepted)")
                    if x != rows[j][i]:
                        raise CoxeterError("Coxeter matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.m)

    def to_json(self) -> dict:
        return {"rank": self.rank, "m": [list(r) for r in self.m]}

    @classmethod
    def from_json(cls, data: dict) -> "CoxeterMatrix":
        if not isinstance(data, dict) or "m" not in data:
            raise CoxeterError('expected an object {"rank": n, "m": [[...]]}')
        mat = cls(tuple(tuple(r) for r in data["m"]))
        if "rank" in data and data["rank"] != mat.rank:
            raise CoxeterError("rank field disagrees with matrix size")
        return mat


def _linear(edges: Sequence[int]) -> CoxeterMatrix:
    n = len(edges) + 1
    m = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i, x in enumerate(edges):
        m[i][i + 1] = m[i + 1][i] = x
    return CoxeterMatrix(tuple(tuple(r) for r in m))


def preset(name: str) -> CoxeterMatrix:
    """Named Coxeter matrices: A1-A4, B2-B4, D4, F4, G2, H3, I2(m)."""
    key = name.strip()
    m = re.fullmatch(r"I2\((\d+)\)", key)
    if m:
        return _linear([int(m.group(1))])
    m = re.fullmatch(r"([ABH])(\d)", key)
    if m:
        kind, n = m.group(1), int(m.group(2))
        if kind == "A" and n >= 1:
            if n == 1:
                return CoxeterMatrix(((1,),))
            return _linear([3] * (n - 1))
        if kind == "B" and n >= 2:
            return _linear([3] * (n - 2) + [4])
        if kind == "H" and n in (3, 4):
            return _linear([5] + [3] * (n - 2))
    if key == "D4":
        rows = [[1, 3, 2, 2], [3, 1, 3, 3], [2, 3, 1, 2], [2, 3, 2, 1]]
        return CoxeterMatrix(tuple(tuple(r) for r in rows))
    if key == "F4":
        return _linear([3, 4, 3])
    if key == "G2":
        return _linear([6])
    raise CoxeterError(f"unknown Coxeter type {name!r}")


def parse_matrix(source) -> CoxeterMatrix:
    """Accept a preset name, a JSON string, or an already-decoded JSON dict."""
    if isinstance(source, CoxeterMatrix):
        return source
    if isinstance(source, dict):
        return CoxeterMatrix.from_json(source)
    text = str(source).strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CoxeterError(f"malformed JSON: {exc}") from exc
        return CoxeterMatrix.from_json(data)
    return preset(text)


# -- Cartan data ------------------------------------------------------------

def _cartan(mat: CoxeterMatrix) -> tuple[Field, list[list]]:
    """Cartan-style matrix c with s_i(alpha_j) = alpha_j - c[i][j] alpha_i."""
    n = mat.rank
    field = QUADRATIC if any(5 in row for row in mat.m) else RATIONAL
    c = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = field.coerce(2)
        for j in range(i + 1, n):
            x = mat.m[i][j]
            if x == 2:
                a, b = 0, 0
            elif x == 3:
                a, b = -1, -1
            elif x == 4:
                a, b = -1, -2
            elif x == 6:
                a, b = -1, -3
            elif x == 5:
                a, b = -GOLDEN, -GOLDEN
            else:
                raise UnsupportedCoxeterEntry(f"m = {x} needs a scalar field beyond Q(sqrt 5)")
            c[i][j], c[j][i] = field.coerce(a), field.coerce(b)
    return field, c


def _is_forest(mat: CoxeterMatrix) -> bool:
    n = mat.rank
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if mat.m[i][j] >= 3:
                ri, rj = find(i), find(j)
                if ri == rj:
                    return False
                parent[ri] = rj
    return True


def check_finite(mat: CoxeterMatrix) -> None:
    """Raise NonFiniteGroup unless the cosine form is positive definite.

    A cycle in the Coxeter graph already spoils definiteness; on a forest the
    Cartan matrix is symmetrizable, so its leading principal minors have the
    signs of those of the cosine form.
    """
    if not _is_forest(mat):
        raise NonFiniteGroup("Coxeter graph has a cycle; the group is infinite")
    field, c = _cartan(mat)
    cm = linalg.matrix(c, field)
    for k in range(1, mat.rank + 1):
        d = linalg.det(cm[:k, :k])
        if not d > 0:
            raise NonFiniteGroup("bilinear form is not positive definite; the group is infinite")


# -- the group --------------------------------------------------------------

class CoxeterSystem:
    """Full element table of a finite Coxeter group.

    Attributes (all read-only after construction):
      ``rank``, ``order``, ``field``, ``cartan``, ``roots`` (coefficient tuples;
      indices ``0..N-1`` positive, ``N + k`` is ``-roots[k]``), ``perms``
      (|W| x 2N array of root permutations), ``words``, ``lengths``,
      ``inverses``, ``right``/``left`` (|W| x rank multiplication by generators).
    """

    def __init__(self, matrix: CoxeterMatrix, cap: int = DEFAULT_CAP):
        check_finite(matrix)
        self.matrix = matrix
        self.rank = matrix.rank
        self.cap = cap
        self.field, self.cartan = _cartan(matrix)
        self._build_roots()
        self._build_elements()

    # roots
    def _reflect(self, i: int, beta: tuple) -> tuple:
        coef = sum((beta[j] * self.cartan[i][j] for j in range(self.rank)), self.field.zero)
        out = list(beta)
        out[i] = out[i] - coef
        return tuple(out)

    def _build_roots(self):
        n, f = self.rank, self.field
        simple = [tuple(f.one if j == i else f.zero for j in range(n)) for i in range(n)]
        seen = set(simple)
        queue = deque(simple)
        limit = 4 * self.cap + 4 * n
        while queue:
            beta = queue.popleft()
            for i in range(n):
                g = self._reflect(i, beta)
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
                    if len(seen) > limit:
                        raise RankTooLarge("root system exceeds enumeration cap")
        positive = [b for b in seen if all(x >= 0 for x in b)]
        positive.sort(key=lambda b: (sum(b, f.zero), tuple(-x for x in b)))
        self.npos = len(positive)
        self.roots = positive + [tuple(-x for x in b) for b in positive]
        index = {b: k for k, b in enumerate(self.roots)}
        if len(index) != len(seen):
            raise CoxeterError("root system is not symmetric under negation")
        self.root_index = index
        self.gen_perms = np.array(
            [[index[self._reflect(i, b)] for b in self.roots] for i in range(n)], dtype=np.int64
        )

    # elements
    def _build_elements(self):
        n, npos = self.rank, self.npos
        ident = np.arange(2 * npos, dtype=np.int64)
        perms = [ident]
        words: list[tuple] = [()]
        index = {ident.tobytes(): 0}
        frontier = [0]
        right_rows: dict[int, list] = {}
        while frontier:
            nxt = []
            for w in frontier:
                row = []
                for i in range(n):
                    p = perms[w][self.gen_perms[i]]
                    key = p.tobytes()
                    j = index.get(key)
                    if j is None:
                        j = len(perms)
                        if j >= self.cap:
                            raise RankTooLarge(f"|W| exceeds the enumeration cap {self.cap}")
                        index[key] = j
                        perms.append(p)
                        words.append(words[w] + (i,))
                        nxt.append(j)
                    row.append(j)
                right_rows[w] = row
            frontier = nxt
        self.order = len(perms)
        self.perms = np.array(perms)
        self.words = words
        self.right = np.array([right_rows[w] for w in range(self.order)], dtype=np.int64)
        self.lengths = np.array([len(wd) for wd in words], dtype=np.int64)
        self._index = index
        left = np.empty_like(self.right)
        for i in range(n):
            for w in range(self.order):
                left[w, i] = index[self.gen_perms[i][self.perms[w]].tobytes()]
        self.left = left
        inv = np.empty(self.order, dtype=np.int64)
        for w in range(self.order):
            p = self.perms[w]
            q = np.empty_like(p)
            q[p] = np.arange(len(p))
            inv[w] = index[q.tobytes()]
        self.inverses = inv
        # full table by folding right multiplication over reduced words
        table = np.empty((self.order, self.order), dtype=np.int64)
        table[:, 0] = np.arange(self.order)
        parent = {0: None}
        for b in range(1, self.order):
            wd = words[b]
            pb = self._index_of_word(wd[:-1])
            table[:, b] = self.right[table[:, pb], wd[-1]]
            parent[b] = pb
        self.table = table

    def _index_of_word(self, word: Sequence[int]) -> int:
        w = 0
        for i in word:
            w = int(self.right[w, i])
        return w

    # -- public API -----------------------------------------------------
    @property
    def identity(self) -> int:
        return 0

    @property
    def all_mask(self) -> int:
        return (1 << self.rank) - 1

    def generator(self, i: int) -> int:
        return int(self.right[0, i])

    def element(self, word: Sequence[int]) -> int:
        return self._index_of_word(word)

    def multiply(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def product(self, *elems: int) -> int:
        out = 0
        for e in elems:
            out = int(self.table[out, e])
        return out

    def inverse(self, w: int) -> int:
        return int(self.inverses[w])

    def length(self, w: int) -> int:
        return int(self.lengths[w])

    def reduced_word(self, w: int) -> tuple:
        return self.words[w]

    def word_string(self, w: int) -> str:
        return ".".join(str(i) for i in self.words[w])

    def parse_word(self, text: str) -> int:
        text = text.strip()
        if text in ("", "e"):
            return 0
        return self.element([int(t) for t in text.split(".")])

    def support(self, w: int) -> int:
        return to_mask(self.words[w])

    def root_permutation(self, w: int) -> np.ndarray:
        return self.perms[w]

    def act_on_root(self, w: int, k: int) -> int:
        return int(self.perms[w][k])

    def is_positive_root(self, k: int) -> bool:
        return k < self.npos

    def inversion_count(self, w: int) -> int:
        return int(np.count_nonzero(self.perms[w][: self.npos] >= self.npos))

    @cached_property
    def _parabolics(self) -> dict:
        return {}

    def parabolic_subgroup(self, mask: int) -> list[int]:
        """Elements of W_I, in table order."""
        cache = self._parabolics
        if mask not in cache:
            cache[mask] = [w for w in range(self.order) if self.support(w) & ~mask == 0]
        return cache[mask]

    def longest_element(self, mask: int) -> int:
        return max(self.parabolic_subgroup(mask), key=lambda w: (self.lengths[w], -w))

    def has_right_descent(self, w: int, i: int) -> bool:
        return self.lengths[self.right[w, i]] < self.lengths[w]

    @cached_property
    def _min_reps(self) -> dict:
        return {}

    def min_coset_table(self, mask: int) -> np.ndarray:
        """Array mapping each w to the minimal-length element of w W_I."""
        cache = self._min_reps
        if mask not in cache:
            gens = bits(mask)
            out = np.empty(self.order, dtype=np.int64)
            for w in range(self.order):  # table order is length-nondecreasing
                for i in gens:
                    v = self.right[w, i]
                    if self.lengths[v] < self.lengths[w]:
                        out[w] = out[v]
                        break
                else:
                    out[w] = w
            cache[mask] = out
        return cache[mask]

    def min_coset_rep(self, w: int, mask: int) -> int:
        return int(self.min_coset_table(mask)[w])

    def conjugate_generator_set(self, w: int, mask: int):
        """The subset w J w^-1 if it consists of simple reflections, else None."""
        winv = self.inverse(w)
        gens = {self.generator(i): i for i in range(self.rank)}
        out = 0
        for j in bits(mask):
            r = self.product(w, self.generator(j), winv)
            if r not in gens:
                return None
            out |= 1 << gens[r]
        return out

    # reflection representation on the span of the simple roots
    @cached_property
    def _matrices(self) -> dict:
        return {}

    def generator_matrix(self, i: int) -> np.ndarray:
        n, f = self.rank, self.field
        m = linalg.identity(n, f)
        for j in range(n):
            m[i, j] = m[i, j] - self.cartan[i][j]
        return m

    def reflection_matrix(self, w: int) -> np.ndarray:
        cache = self._matrices
        if w not in cache:
            m = linalg.identity(self.rank, self.field)
            for i in self.words[w]:
                m = m @ self.generator_matrix(i)
            cache[w] = m
        return cache[w]

    def __repr__(self):
        return f"CoxeterSystem(rank={self.rank}, order={self.order})"


def build_system(matrix, cap: int = DEFAULT_CAP) -> CoxeterSystem:
    """Build the element table from a CoxeterMatrix, preset name, or JSON."""
    return CoxeterSystem(parse_matrix(matrix), cap=cap)


def multiply(sys: CoxeterSystem, a: int, b: int) -> int:
    return sys.multiply(a, b)


def length(sys: CoxeterSystem, w: int) -> int:
    return sys.length(w)


def longest_element(sys: CoxeterSystem, mask: int) -> int:
    return sys.longest_element(mask)


def parabolic_subgroup(sys: CoxeterSystem, mask: int) -> list[int]:
    return sys.parabolic_subgroup(mask)


def conjugate_generator_set(sys: CoxeterSystem, w: int, mask: int):
    return sys.conjugate_generator_set(w, mask)


def subsets(rank: int) -> Iterator[int]:
    return iter(range(1 << rank))
