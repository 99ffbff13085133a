"""The facet poset of a finite Coxeter arrangement.

Two models are kept side by side:

* combinatorial: a facet is a typed coset ``(rep, I)`` naming ``rep . F_I``, where
  ``F_I`` is the face of the closed fundamental chamber fixed by ``W_I`` and
  ``rep`` is the minimal-length element of ``rep W_I``;
* geometric: a sign vector over the positive roots, evaluated at an exact
  representative point.

Points live in the dual of the root span, written in fundamental-weight
coordinates ``x_j = <alpha_j, x>``.  Then ``<alpha, w x> = <w^-1 alpha, x>`` and no
inner product is ever needed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from . import fourier_motzkin as fm
from . import linalg
from .coxeter import CoxeterSystem, bits, popcount


class UnsupportedScalarField(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FacetId:
    rep: int
    type: int


@dataclass(frozen=True, order=True)
class OppositionDatum:
    """``I |_w J`` inside ``W_K``: the facets F_I and w F_J are opposite across F_K."""

    I: int
    w: int
    J: int
    K: int


class FacetComplex:
    """Facets, order, stars and oppositions for one CoxeterSystem."""

    def __init__(self, sys: CoxeterSystem):
        self.sys = sys
        facets = []
        for mask in range(1 << sys.rank):
            reps = sorted(set(int(r) for r in sys.min_coset_table(mask)))
            facets.extend(FacetId(r, mask) for r in reps)
        self.facets: list[FacetId] = facets
        self.index = {f: k for k, f in enumerate(facets)}
        self._collinear_cache: dict = {}

    def __len__(self):
        return len(self.facets)

    # -- combinatorics ----------------------------------------------------
    def facet(self, w: int, mask: int) -> FacetId:
        """The facet w . F_I, for any w (not necessarily minimal)."""
        return FacetId(self.sys.min_coset_rep(w, mask), mask)

    def base(self, mask: int) -> FacetId:
        return FacetId(0, mask)

    def dim(self, f: FacetId) -> int:
        return self.sys.rank - popcount(f.type)

    def leq(self, f1: FacetId, f2: FacetId) -> bool:
        """f1 lies in the closure of f2."""
        if f1.type & f2.type != f2.type:
            return False
        return self.sys.min_coset_rep(f2.rep, f1.type) == f1.rep

    def act(self, g: int, f: FacetId) -> FacetId:
        return self.facet(self.sys.multiply(g, f.rep), f.type)

    def star(self, f0: FacetId) -> list[FacetId]:
        return [f for f in self.facets if self.leq(f0, f)]

    def is_cover(self, f1: FacetId, f2: FacetId) -> bool:
        return popcount(f1.type) == popcount(f2.type) + 1 and self.leq(f1, f2)

    @cached_property
    def covers(self) -> list[tuple[FacetId, FacetId]]:
        """All pairs (lower, upper) with upper covering lower, in facet order."""
        out = []
        for f1 in self.facets:
            for i in bits(f1.type):
                m = f1.type & ~(1 << i)
                # the facets right above rep.F_I of type I - {i} are rep.u.F_m for u in W_I
                ups = sorted({self.facet(self.sys.multiply(f1.rep, u), m)
                              for u in self.sys.parabolic_subgroup(f1.type)})
                out.extend((f1, f2) for f2 in ups)
        return sorted(out, key=lambda p: (self.index[p[0]], self.index[p[1]]))

    @cached_property
    def upper_covers(self) -> dict:
        out = {f: [] for f in self.facets}
        for lo, hi in self.covers:
            out[lo].append(hi)
        return out

    @cached_property
    def lower_covers(self) -> dict:
        out = {f: [] for f in self.facets}
        for lo, hi in self.covers:
            out[hi].append(lo)
        return out

    # -- oppositions -------------------------------------------------------
    def oppositions(self) -> list[OppositionDatum]:
        """Nondegenerate data I|_wJ, one per double coset W_I \\ W_K / W_J."""
        sys = self.sys
        out = []
        for K in range(1 << sys.rank):
            k = popcount(K)
            if k == 0:
                continue
            small = [m for m in range(1 << sys.rank) if m & ~K == 0 and popcount(m) == k - 1]
            WK = sys.parabolic_subgroup(K)
            for I in small:
                WI = sys.parabolic_subgroup(I)
                WI_set = set(WI)
                for J in small:
                    WJ = sys.parabolic_subgroup(J)
                    covered: set[int] = set()
                    for w in WK:
                        if w in covered:
                            continue
                        coset = {sys.product(a, w, b) for a in WI for b in WJ}
                        covered |= coset
                        if coset & WI_set:
                            continue
                        good = [u for u in coset if sys.conjugate_generator_set(u, J) == I]
                        if not good:
                            continue
                        rep = min(good, key=lambda u: (sys.length(u), u))
                        out.append(OppositionDatum(I, rep, J, K))
        return out

    def expand_opposition(self, d: OppositionDatum) -> set:
        """All W-translates of the triple (F_I, F_K, w F_J), as (F1, F0, F2)."""
        base = (self.base(d.I), self.base(d.K), self.facet(d.w, d.J))
        return {tuple(self.act(g, f) for f in base) for g in range(self.sys.order)}

    # -- geometry ------------------------------------------------------------
    @cached_property
    def geometry(self) -> "GeometricModel":
        return GeometricModel(self)

    def collinear(self, f1: FacetId, f2: FacetId, f3: FacetId, f0: Optional[FacetId] = None) -> bool:
        """Whether some closed segment from f1 to f3 meets f2.

        ``f0`` only names the ambient star; collinearity does not depend on it.
        """
        if f0 is not None:
            for f in (f1, f2, f3):
                if not self.leq(f0, f):
                    raise ValueError(f"{f} is not in the star of {f0}")
        if f2 == f1 or f2 == f3:
            return True
        key = self._canonical_triple(f1, f2, f3)
        hit = self._collinear_cache.get(key)
        if hit is None:
            geo = self.geometry
            s1, s2, s3 = (geo.signs[f] for f in key)
            # p1 + eps p3 and eps p1 + p3 are segment points
            if s2 == compose_signs(s1, s3) or s2 == compose_signs(s3, s1):
                hit = True
            else:
                hit = geo.segment_witness(*key) is not None
            self._collinear_cache[key] = hit
        return hit

    def _canonical_triple(self, f1, f2, f3):
        sys = self.sys
        g = sys.inverse(f1.rep)
        a1 = FacetId(0, f1.type)
        best = None
        for h in sys.parabolic_subgroup(f1.type):
            gh = sys.multiply(h, g)
            cand = (a1, self.act(gh, f2), self.act(gh, f3))
            if best is None or cand < best:
                best = cand
        return best


class GeometricModel:
    """Exact sign vectors and representative points for every facet.

    Positive roots are indexed as in ``CoxeterSystem.roots[:npos]``: sorted by
    height, simple roots first in generator order.
    """

    def __init__(self, fc: FacetComplex):
        self.fc = fc
        sys = self.sys = fc.sys
        self.field = sys.field
        self.positive_roots = sys.roots[: sys.npos]
        signs = {}
        for f in fc.facets:
            signs[f] = self._sign_vector(f)
        self.signs = signs
        self.by_sign = {s: f for f, s in signs.items()}
        if len(self.by_sign) != len(signs):
            raise AssertionError("sign vectors are not distinct")

    def _sign_vector(self, f: FacetId) -> str:
        sys = self.sys
        perm = sys.root_permutation(sys.inverse(f.rep))
        out = []
        for k in range(sys.npos):
            b = perm[k]
            beta = sys.roots[b]
            supp = sum(1 << j for j, c in enumerate(beta) if c != 0)
            if supp & ~f.type == 0:
                out.append("0")
            else:
                out.append("+" if b < sys.npos else "-")
        return "".join(out)

    def point(self, f: FacetId) -> list:
        """Weight coordinates of rep . (sum of fundamental weights outside I)."""
        sys = self.sys
        winv = sys.inverse(f.rep)
        out = []
        for j in range(sys.rank):
            beta = sys.roots[sys.act_on_root(winv, j)]
            out.append(sum((beta[i] for i in range(sys.rank) if not f.type >> i & 1), self.field.zero))
        return out

    def evaluate(self, k: int, x: list):
        return sum((c * xi for c, xi in zip(self.positive_roots[k], x)), self.field.zero)

    def sign_at(self, x: list) -> str:
        out = []
        for k in range(self.sys.npos):
            v = self.evaluate(k, x)
            out.append("+" if v > 0 else "-" if v < 0 else "0")
        return "".join(out)

    def dim(self, f: FacetId) -> int:
        s = self.signs[f]
        rows = [self.positive_roots[k] for k, c in enumerate(s) if c == "0"]
        if not rows:
            return self.sys.rank
        return self.sys.rank - linalg.rank(linalg.matrix(rows, self.field))

    @staticmethod
    def sign_leq(s1: str, s2: str) -> bool:
        return all(a == "0" or a == b for a, b in zip(s1, s2))

    def leq(self, f1: FacetId, f2: FacetId) -> bool:
        return self.sign_leq(self.signs[f1], self.signs[f2])

    # -- collinearity ------------------------------------------------------
    def _facet_rows(self, f: FacetId):
        """Minimal description of the cone rep.F_I: equalities and slack-1 inequalities."""
        m = self.sys.reflection_matrix(f.rep)
        eqs, ineqs = [], []
        for j in range(self.sys.rank):
            col = tuple(m[:, j])
            if f.type >> j & 1:
                eqs.append(col)
            else:
                ineqs.append(col)
        return eqs, ineqs

    def segment_witness(self, f1: FacetId, f2: FacetId, f3: FacetId):
        """Points p1 in f1, p3 in f3 whose midpoint lies in f2, or None.

        The midpoint normalization is sound because every facet is a cone
        through the origin: rescaling p1 and p3 separately moves any interior
        point of the segment to the midpoint.  Strict inequalities become
        ``>= 1`` by the same homogeneity.
        """
        s1, s2, s3 = self.signs[f1], self.signs[f2], self.signs[f3]
        if not _compatible(s1, s2, s3):
            return None
        f = self.field
        n = self.sys.rank
        zero, one = f.zero, f.one
        pad = (zero,) * n
        eqs, ineqs = [], []
        for facet, shape in ((f1, lambda a: a + pad), (f3, lambda a: pad + a), (f2, lambda a: a + a)):
            e, i = self._facet_rows(facet)
            eqs.extend((shape(a), zero) for a in e)
            ineqs.extend((shape(a), one) for a in i)
        x = fm.feasible_point(2 * n, eqs, ineqs, zero, one)
        if x is None:
            return None
        p1, p3 = x[:n], x[n:]
        return p1, p3


def _compatible(s1: str, s2: str, s3: str) -> bool:
    """Sign of a midpoint is forced except where the endpoints have opposite signs."""
    for a, b, c in zip(s1, s2, s3):
        if a == c or c == "0":
            if b != a:
                return False
        elif a == "0":
            if b != c:
                return False
    return True


def compose_signs(s1: str, s3: str) -> str:
    """Sign vector of p1 + eps p3 for small eps > 0."""
    return "".join(a if a != "0" else c for a, c in zip(s1, s3))


# -- module-level API ---------------------------------------------------------

def facet_complex(sys: CoxeterSystem) -> FacetComplex:
    fc = getattr(sys, "_facet_complex", None)
    if fc is None:
        fc = FacetComplex(sys)
        sys._facet_complex = fc
    return fc


def enumerate_facets(sys: CoxeterSystem) -> list[FacetId]:
    return list(facet_complex(sys).facets)


def facet_leq(sys: CoxeterSystem, f1: FacetId, f2: FacetId) -> bool:
    return facet_complex(sys).leq(f1, f2)


def act(sys: CoxeterSystem, g: int, f: FacetId) -> FacetId:
    return facet_complex(sys).act(g, f)


def star(sys: CoxeterSystem, f0: FacetId) -> list[FacetId]:
    return facet_complex(sys).star(f0)


def enumerate_oppositions(sys: CoxeterSystem) -> list[OppositionDatum]:
    return facet_complex(sys).oppositions()


def realize_geometric(sys: CoxeterSystem) -> GeometricModel:
    return facet_complex(sys).geometry


def collinear_triple(sys: CoxeterSystem, f0: FacetId, f1: FacetId, f2: FacetId, f3: FacetId) -> bool:
    return facet_complex(sys).collinear(f1, f2, f3, f0)


def geometric_oppositions(sys: CoxeterSystem) -> set:
    """All ordered (F1, F0, F2) with F1, F2 opposite across their common wall F0."""
    fc = facet_complex(sys)
    geo = fc.geometry
    out = set()
    by_dim: dict[int, list] = {}
    for f in fc.facets:
        by_dim.setdefault(geo.dim(f), []).append(f)
    for f0 in fc.facets:
        d0 = geo.dim(f0)
        s0 = geo.signs[f0]
        cands = [f for f in by_dim.get(d0 + 1, []) if geo.leq(f0, f)]
        for f1, f2 in itertools.permutations(cands, 2):
            s1, s2 = geo.signs[f1], geo.signs[f2]
            if [c == "0" for c in s1] != [c == "0" for c in s2]:
                continue
            if any(z == "0" and a != "0" and a != b and b != "0" for z, a, b in zip(s0, s1, s2)):
                out.add((f1, f0, f2))
    return out


def word_of(sys: CoxeterSystem, f: FacetId) -> dict:
    return {"rep": sys.word_string(f.rep), "type": bits(f.type)}
