"""Modules, chamber bisheaves on the subsets of S, and W-equivariant bisheaves on all facets.

Conventions
-----------
For subsets ``I ⊇ J`` the facet ``F_I`` lies in the closure of ``F_J``.  Uppers go
up the order (``gamma[(I, J)] : V_I -> V_J``), downers go down
(``delta[(J, I)] : V_J -> V_I``).  Maps are stored on covering pairs only and
longer composites are derived.  A space of dimension 0 is represented by
0 x n / n x 0 matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from . import linalg
from .coxeter import CoxeterSystem, bits, popcount
from .facets import FacetComplex, FacetId, facet_complex
from .scalars import RATIONAL, Field


class ShapeMismatch(ValueError):
    pass


class ValidationRequired(ValueError):
    pass


class AxiomFailure(ValueError):
    pass


class NotARepresentation(ValueError):
    pass


# -- reports ----------------------------------------------------------------

@dataclass
class CheckReport:
    """Verdict for one axiom family; ``witness`` is set exactly when it failed."""

    family: str
    verdict: str = "pass"
    witness: Optional[dict] = None
    instances_checked: int = 0
    parts: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def fail(self, witness: dict) -> "CheckReport":
        if self.witness is None:
            self.verdict = "fail"
            self.witness = witness
        return self

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "family": self.family,
            "witness": self.witness,
            "instances_checked": self.instances_checked,
        }
        if self.stats:
            out["stats"] = dict(self.stats)
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out

    @classmethod
    def combine(cls, family: str, parts: list) -> "CheckReport":
        rep = cls(family, parts=list(parts))
        rep.instances_checked = sum(p.instances_checked for p in parts)
        for p in parts:
            if not p.passed:
                rep.fail({"family": p.family, **(p.witness or {})})
                break
        return rep


# -- modules ------------------------------------------------------------------

@dataclass
class PervModule:
    """A candidate module: idempotents ``e[mask]`` and generator matrices ``rho[i]``.

    ``e`` must hold every bitmask; a missing full mask is filled with the identity.
    """

    system: object
    dim: int
    e: dict
    rho: dict
    field: Field = RATIONAL

    def __post_init__(self):
        n = self.dim
        rank = len(self.rho)
        full = (1 << rank) - 1
        if full not in self.e:
            self.e[full] = linalg.identity(n, self.field)
        self._elem_cache: dict = {}

    @property
    def rank(self) -> int:
        return len(self.rho)

    def check_shapes(self, sys: CoxeterSystem) -> None:
        n = self.dim
        if len(self.rho) != sys.rank or set(self.rho) != set(range(sys.rank)):
            raise ShapeMismatch(f"module has {len(self.rho)} generator matrices, system rank is {sys.rank}")
        if set(self.e) != set(range(1 << sys.rank)):
            missing = sorted(set(range(1 << sys.rank)) - set(self.e))
            raise ShapeMismatch(f"idempotents missing for masks {missing}")
        for name, mats in (("e", self.e), ("rho", self.rho)):
            for k, m in mats.items():
                if getattr(m, "shape", None) != (n, n):
                    raise ShapeMismatch(f"{name}[{k}] has shape {getattr(m, 'shape', None)}, expected {(n, n)}")

    def element(self, sys: CoxeterSystem, w: int) -> np.ndarray:
        """rho(w), folded along the stored reduced word."""
        cache = self._elem_cache
        if w not in cache:
            m = linalg.identity(self.dim, self.field)
            for i in sys.reduced_word(w):
                m = m @ self.rho[i]
            cache[w] = m
        return cache[w]

    def copy(self) -> "PervModule":
        return PervModule(self.system, self.dim, {k: v.copy() for k, v in self.e.items()},
                          {k: v.copy() for k, v in self.rho.items()}, self.field)


def _mask_json(mask: int) -> list:
    return bits(mask)


def validate_module(sys: CoxeterSystem, m: PervModule) -> CheckReport:
    """The presentation relations, in four families.

    idempotent-product: e_S = Id and e_I e_J = e_{I∩J}; commutation: s e_I = e_I s for s in I;
    involution: s^2 = 1; braid: (st)^m = 1.
    """
    m.check_shapes(sys)
    masks = range(1 << sys.rank)
    r1 = CheckReport("idempotent-product")
    full = sys.all_mask
    r1.instances_checked += 1
    if not linalg.is_identity(m.e[full]):
        r1.fail({"relation": "e_S = Id", "I": _mask_json(full)})
    for I in masks if r1.passed else ():
        for J in masks:
            r1.instances_checked += 1
            if not linalg.equal(m.e[I] @ m.e[J], m.e[I & J]):
                r1.fail({"relation": "idempotent-product", "I": _mask_json(I), "J": _mask_json(J)})
                break
        if not r1.passed:
            break
    r2 = CheckReport("commutation")
    for I in masks:
        for s in bits(I):
            r2.instances_checked += 1
            if not linalg.equal(m.rho[s] @ m.e[I], m.e[I] @ m.rho[s]):
                r2.fail({"relation": "commutation", "s": s, "I": _mask_json(I)})
                break
        if not r2.passed:
            break
    r3 = CheckReport("involution")
    for s in range(sys.rank):
        r3.instances_checked += 1
        if not linalg.is_identity(m.rho[s] @ m.rho[s]):
            r3.fail({"relation": "involution", "s": s})
            break
    r4 = CheckReport("braid")
    for s in range(sys.rank):
        for t in range(s + 1, sys.rank):
            r4.instances_checked += 1
            st = m.rho[s] @ m.rho[t]
            p = linalg.identity(m.dim, m.field)
            for _ in range(sys.matrix.m[s][t]):
                p = p @ st
            if not linalg.is_identity(p):
                r4.fail({"relation": "braid", "s": s, "t": t})
                break
        if not r4.passed:
            break
    return CheckReport.combine("monotonicPresentation", [r1, r2, r3, r4])


def check_representation(sys: CoxeterSystem, rho: dict) -> None:
    """Raise NotARepresentation unless rho satisfies s^2 = 1 and the braid relations."""
    n = next(iter(rho.values())).shape[0] if rho else 0
    if set(rho) != set(range(sys.rank)):
        raise NotARepresentation("need one matrix per generator")
    f = _field_of(rho.values())
    for s in range(sys.rank):
        if rho[s].shape != (n, n) or not linalg.is_identity(rho[s] @ rho[s]):
            raise NotARepresentation(f"rho({s}) is not an involution")
        for t in range(s + 1, sys.rank):
            st = rho[s] @ rho[t]
            p = linalg.identity(n, f)
            for _ in range(sys.matrix.m[s][t]):
                p = p @ st
            if not linalg.is_identity(p):
                raise NotARepresentation(f"braid relation fails for generators {s}, {t}")


def _field_of(mats: Iterable[np.ndarray]) -> Field:
    from .scalars import QUADRATIC, QSqrt5

    for m in mats:
        if any(isinstance(x, QSqrt5) and x.b != 0 for x in m.flat):
            return QUADRATIC
    return RATIONAL


# -- chamber bisheaves ------------------------------------------------------------

@dataclass
class ChamberBisheaf:
    """W-equivariant bisheaf on the faces of the closed fundamental chamber."""

    rank: int
    dims: dict                  # mask -> int
    gamma: dict                 # (I, J), I covers J -> V_I -> V_J
    delta: dict                 # (J, I) -> V_J -> V_I
    eta: dict                   # (w, I), w in W_I -> V_I -> V_I
    field: Field = RATIONAL

    def gamma_path(self, I: int, J: int) -> np.ndarray:
        """Composite upper V_I -> V_J for I ⊇ J, removing generators in ascending order."""
        m = linalg.identity(self.dims[I], self.field)
        cur = I
        for i in bits(I & ~J):
            nxt = cur & ~(1 << i)
            m = self.gamma[(cur, nxt)] @ m
            cur = nxt
        return m

    def delta_path(self, J: int, I: int) -> np.ndarray:
        m = linalg.identity(self.dims[J], self.field)
        cur = J
        for i in reversed(bits(I & ~J)):
            nxt = cur | (1 << i)
            m = self.delta[(cur, nxt)] @ m
            cur = nxt
        return m

    def equals(self, other: "ChamberBisheaf") -> bool:
        if self.dims != other.dims or set(self.gamma) != set(other.gamma) or set(self.eta) != set(other.eta):
            return False
        return (all(linalg.equal(self.gamma[k], other.gamma[k]) for k in self.gamma)
                and all(linalg.equal(self.delta[k], other.delta[k]) for k in self.delta)
                and all(linalg.equal(self.eta[k], other.eta[k]) for k in self.eta))


def chamber_covers(rank: int) -> list[tuple[int, int]]:
    """Pairs (I, I - {i}): the covering relations among subsets of S."""
    return [(I, I & ~(1 << i)) for I in range(1 << rank) for i in bits(I)]


def module_to_chamber_bisheaf(sys: CoxeterSystem, m: PervModule, validate: bool = True) -> ChamberBisheaf:
    """Spaces e_I V with echelon-pivot bases; delta is inclusion, gamma is e_J, eta is rho."""
    if validate and not validate_module(sys, m).passed:
        raise ValidationRequired("module fails the presentation relations")
    basis = {I: linalg.column_basis(m.e[I]) for I in range(1 << sys.rank)}
    dims = {I: b.shape[1] for I, b in basis.items()}
    gamma, delta, eta = {}, {}, {}
    for I, J in chamber_covers(sys.rank):
        gamma[(I, J)] = linalg.solve(basis[J], m.e[J] @ basis[I])
        delta[(J, I)] = linalg.solve(basis[I], basis[J])
    for I in range(1 << sys.rank):
        for w in sys.parabolic_subgroup(I):
            eta[(w, I)] = linalg.solve(basis[I], m.element(sys, w) @ basis[I])
    return ChamberBisheaf(sys.rank, dims, gamma, delta, eta, m.field)


def validate_chamber_bisheaf(sys: CoxeterSystem, b: ChamberBisheaf, monotonic: bool = True) -> CheckReport:
    """Path independence, monotonicity and stabilizer equivariance on the subsets of S."""
    parts = []
    paths = CheckReport("pathIndependence")
    for I in range(1 << sys.rank):
        up = _level_composites(I, lambda x: [x & ~(1 << i) for i in bits(x)],
                               lambda x, y: b.gamma[(x, y)], b.dims[I], b.field)
        down = _level_composites(I, lambda x: [x | (1 << i) for i in range(sys.rank) if not x >> i & 1],
                                 lambda x, y: b.delta[(x, y)], b.dims[I], b.field)
        paths.instances_checked += up[1] + down[1]
        for bad in (up[2], down[2]):
            if bad is not None:
                paths.fail({"from": bits(I), "to": bits(bad)})
    parts.append(paths)
    if monotonic:
        mono = CheckReport("monotonic")
        for I, J in chamber_covers(sys.rank):
            mono.instances_checked += 1
            if not linalg.is_identity(b.gamma[(I, J)] @ b.delta[(J, I)]):
                mono.fail({"lower": bits(I), "upper": bits(J)})
        parts.append(mono)
    eq = CheckReport("equivariant")
    for I in range(1 << sys.rank):
        WI = sys.parabolic_subgroup(I)
        eq.instances_checked += 1
        if not linalg.is_identity(b.eta[(0, I)]):
            eq.fail({"relation": "identity", "I": bits(I)})
        for u in WI:
            for v in WI:
                eq.instances_checked += 1
                if not linalg.equal(b.eta[(sys.multiply(u, v), I)], b.eta[(u, I)] @ b.eta[(v, I)]):
                    eq.fail({"relation": "composition", "I": bits(I), "u": sys.word_string(u), "v": sys.word_string(v)})
    for I, J in chamber_covers(sys.rank):
        for w in sys.parabolic_subgroup(J):
            eq.instances_checked += 2
            if not linalg.equal(b.eta[(w, J)] @ b.gamma[(I, J)], b.gamma[(I, J)] @ b.eta[(w, I)]):
                eq.fail({"relation": "upper", "I": bits(I), "J": bits(J), "w": sys.word_string(w)})
            if not linalg.equal(b.eta[(w, I)] @ b.delta[(J, I)], b.delta[(J, I)] @ b.eta[(w, J)]):
                eq.fail({"relation": "downer", "I": bits(I), "J": bits(J), "w": sys.word_string(w)})
    parts.append(eq)
    return CheckReport.combine("chamberBisheaf", parts)


def chamber_to_module(sys: CoxeterSystem, b: ChamberBisheaf, validate: bool = True) -> PervModule:
    """V = V_S, e_I = delta_{I,S} gamma_{S,I}, rho(s) = eta_{s,S}."""
    if validate:
        rep = validate_chamber_bisheaf(sys, b)
        if not rep.passed:
            raise AxiomFailure(f"chamber bisheaf fails {rep.witness}")
    S = sys.all_mask
    e = {I: b.delta_path(I, S) @ b.gamma_path(S, I) for I in range(1 << sys.rank)}
    rho = {i: b.eta[(sys.generator(i), S)] for i in range(sys.rank)}
    return PervModule(sys.matrix, b.dims[S], e, rho, b.field)


# -- full bisheaves -----------------------------------------------------------------

@dataclass
class FullBisheaf:
    """Spaces on every facet, uppers/downers on covers, generator maps eta[(s, F)] : V_F -> V_{sF}."""

    fc: FacetComplex
    dims: dict
    gamma: dict     # (F1, F2), F1 < F2 cover
    delta: dict     # (F2, F1)
    eta: dict       # (s, F)
    field: Field = RATIONAL

    @property
    def sys(self) -> CoxeterSystem:
        return self.fc.sys

    def eta_element(self, w: int, f: FacetId) -> np.ndarray:
        """Composite equivariance map V_F -> V_{wF} along the reduced word of w."""
        sys = self.sys
        m = linalg.identity(self.dims[f], self.field)
        cur = f
        for i in reversed(sys.reduced_word(w)):
            m = self.eta[(i, cur)] @ m
            cur = self.fc.act(sys.generator(i), cur)
        return m

    def gamma_composites(self, f0: FacetId) -> dict:
        """gamma_{F0, F} for every F above F0, folded along one chain of covers."""
        return _level_composites(f0, lambda x: self.fc.upper_covers[x],
                                 lambda x, y: self.gamma[(x, y)], self.dims[f0], self.field, check=False)[0]

    def delta_composites(self, f0: FacetId) -> dict:
        """delta_{F, F0} for every F above F0."""
        # build downward composites from each F to F0 by going up from F0 and composing on the right
        out = {f0: linalg.identity(self.dims[f0], self.field)}
        order = sorted(self.fc.star(f0), key=lambda f: -popcount(f.type))
        for f in order:
            if f == f0:
                continue
            lo = next(x for x in self.fc.lower_covers[f] if x in out)
            out[f] = out[lo] @ self.delta[(f, lo)]
        return out


def extend_to_full_bisheaf(sys: CoxeterSystem, b: ChamberBisheaf) -> FullBisheaf:
    """Transport the chamber data to every facet with n_F = rep(F)^-1."""
    fc = facet_complex(sys)
    dims = {f: b.dims[f.type] for f in fc.facets}
    gamma, delta, eta = {}, {}, {}
    for f1, f2 in fc.covers:
        x = sys.multiply(sys.inverse(f2.rep), f1.rep)   # in W_{I1}
        gamma[(f1, f2)] = b.gamma[(f1.type, f2.type)] @ b.eta[(x, f1.type)]
        delta[(f2, f1)] = b.eta[(sys.inverse(x), f1.type)] @ b.delta[(f2.type, f1.type)]
    for f in fc.facets:
        for i in range(sys.rank):
            s = sys.generator(i)
            g = fc.act(s, f)
            x = sys.product(sys.inverse(g.rep), s, f.rep)   # in W_I
            eta[(i, f)] = b.eta[(x, f.type)]
    return FullBisheaf(fc, dims, gamma, delta, eta, b.field)


def restrict_full_bisheaf(sys: CoxeterSystem, fb: FullBisheaf) -> ChamberBisheaf:
    """Keep the faces of the closed fundamental chamber and their stabilizer maps."""
    fc = fb.fc
    dims = {I: fb.dims[fc.base(I)] for I in range(1 << sys.rank)}
    gamma, delta, eta = {}, {}, {}
    for I, J in chamber_covers(sys.rank):
        gamma[(I, J)] = fb.gamma[(fc.base(I), fc.base(J))]
        delta[(J, I)] = fb.delta[(fc.base(J), fc.base(I))]
    for I in range(1 << sys.rank):
        for w in sys.parabolic_subgroup(I):
            eta[(w, I)] = fb.eta_element(w, fc.base(I))
    return ChamberBisheaf(sys.rank, dims, gamma, delta, eta, fb.field)


def natural_isomorphism(sys: CoxeterSystem, fb: FullBisheaf) -> dict:
    """N(F) = eta_{n_F}: V_F -> V_{F_I}, comparing fb with extend(restrict(fb))."""
    return {f: fb.eta_element(sys.inverse(f.rep), f) for f in fb.fc.facets}


def check_natural_isomorphism(sys: CoxeterSystem, fb: FullBisheaf, other: FullBisheaf, iso: dict) -> CheckReport:
    """iso[F] : fb_F -> other_F must be invertible and intertwine gamma, delta and eta."""
    fc = fb.fc
    rep = CheckReport("naturalIsomorphism")
    for f in fc.facets:
        rep.instances_checked += 1
        m = iso[f]
        if m.shape != (other.dims[f], fb.dims[f]) or linalg.rank(m) != fb.dims[f] or fb.dims[f] != other.dims[f]:
            rep.fail({"square": "invertible", "facet": _facet_json(sys, f)})
            return rep
    for f1, f2 in fc.covers:
        rep.instances_checked += 2
        if not linalg.equal(iso[f2] @ fb.gamma[(f1, f2)], other.gamma[(f1, f2)] @ iso[f1]):
            return rep.fail({"square": "upper", "lower": _facet_json(sys, f1), "upper": _facet_json(sys, f2)})
        if not linalg.equal(iso[f1] @ fb.delta[(f2, f1)], other.delta[(f2, f1)] @ iso[f2]):
            return rep.fail({"square": "downer", "lower": _facet_json(sys, f1), "upper": _facet_json(sys, f2)})
    for f in fc.facets:
        for i in range(sys.rank):
            rep.instances_checked += 1
            g = fc.act(sys.generator(i), f)
            if not linalg.equal(iso[g] @ fb.eta[(i, f)], other.eta[(i, f)] @ iso[f]):
                return rep.fail({"square": "equivariance", "s": i, "facet": _facet_json(sys, f)})
    return rep


def _facet_json(sys: CoxeterSystem, f: FacetId) -> dict:
    return {"rep": sys.word_string(f.rep), "type": bits(f.type)}


def _level_composites(start, successors: Callable, arrow: Callable, dim0: int, fld: Field, check: bool = True):
    """Composites of arrows along all saturated chains out of ``start``.

    Walks level by level; with ``check`` every chain into a node is compared with
    the first one found.  Returns (composites, comparisons, first conflicting node).
    """
    comp = {start: linalg.identity(dim0, fld)}
    level = [start]
    count = 0
    conflict = None
    while level:
        nxt: list = []
        for x in level:
            for y in successors(x):
                cand = arrow(x, y) @ comp[x]
                if y not in comp:
                    comp[y] = cand
                    nxt.append(y)
                    continue
                if check:
                    count += 1
                    if conflict is None and not linalg.equal(comp[y], cand):
                        conflict = y
        level = nxt
    return comp, count, conflict


def validate_full_bisheaf(sys: CoxeterSystem, fb: FullBisheaf, monotonic: bool = True,
                          equivariant: bool = True) -> CheckReport:
    """Axioms (A)-(C) as path independence, monotonicity on covers, and equivariance
    from generator maps: commuting with uppers/downers, s^2 = 1 and braid relations
    evaluated at every facet."""
    fc = fb.fc
    shapes = CheckReport("shapes")
    for f1, f2 in fc.covers:
        shapes.instances_checked += 1
        if fb.gamma[(f1, f2)].shape != (fb.dims[f2], fb.dims[f1]) or fb.delta[(f2, f1)].shape != (fb.dims[f1], fb.dims[f2]):
            raise ShapeMismatch(f"maps between {f1} and {f2} have wrong shapes")
    for (i, f), m in fb.eta.items():
        g = fc.act(sys.generator(i), f)
        if m.shape != (fb.dims[g], fb.dims[f]):
            raise ShapeMismatch(f"eta({i}) at {f} has wrong shape")
    parts = []
    paths = CheckReport("pathIndependence")
    for f in fc.facets:
        _, n_up, bad_up = _level_composites(f, lambda x: fc.upper_covers[x], lambda x, y: fb.gamma[(x, y)],
                                            fb.dims[f], fb.field)
        _, n_dn, bad_dn = _level_composites(f, lambda x: fc.lower_covers[x], lambda x, y: fb.delta[(x, y)],
                                            fb.dims[f], fb.field)
        paths.instances_checked += n_up + n_dn
        if bad_up is not None:
            paths.fail({"arrows": "upper", "from": _facet_json(sys, f), "to": _facet_json(sys, bad_up)})
        if bad_dn is not None:
            paths.fail({"arrows": "downer", "from": _facet_json(sys, f), "to": _facet_json(sys, bad_dn)})
    parts.append(paths)
    if monotonic:
        mono = CheckReport("monotonic")
        for f1, f2 in fc.covers:
            mono.instances_checked += 1
            if not linalg.is_identity(fb.gamma[(f1, f2)] @ fb.delta[(f2, f1)]):
                mono.fail({"lower": _facet_json(sys, f1), "upper": _facet_json(sys, f2)})
        parts.append(mono)
    if equivariant:
        eq = CheckReport("equivariant")
        for f1, f2 in fc.covers:
            for i in range(sys.rank):
                s = sys.generator(i)
                g1, g2 = fc.act(s, f1), fc.act(s, f2)
                eq.instances_checked += 2
                if not linalg.equal(fb.eta[(i, f2)] @ fb.gamma[(f1, f2)], fb.gamma[(g1, g2)] @ fb.eta[(i, f1)]):
                    eq.fail({"relation": "upper", "s": i, "lower": _facet_json(sys, f1), "upper": _facet_json(sys, f2)})
                if not linalg.equal(fb.eta[(i, f1)] @ fb.delta[(f2, f1)], fb.delta[(g2, g1)] @ fb.eta[(i, f2)]):
                    eq.fail({"relation": "downer", "s": i, "lower": _facet_json(sys, f1), "upper": _facet_json(sys, f2)})
        for f in fc.facets:
            for i in range(sys.rank):
                s = sys.generator(i)
                eq.instances_checked += 1
                if not linalg.is_identity(fb.eta[(i, fc.act(s, f))] @ fb.eta[(i, f)]):
                    eq.fail({"relation": "involution", "s": i, "facet": _facet_json(sys, f)})
                for j in range(i + 1, sys.rank):
                    k = sys.matrix.m[i][j]
                    a = [i, j] * k
                    left = _eta_word(fb, a[:k], f)
                    right = _eta_word(fb, a[1:k + 1], f)
                    eq.instances_checked += 1
                    if not linalg.equal(left, right):
                        eq.fail({"relation": "braid", "s": i, "t": j, "facet": _facet_json(sys, f)})
        parts.append(eq)
    return CheckReport.combine("fullBisheaf", parts)


def _eta_word(fb: FullBisheaf, word: list, f: FacetId) -> np.ndarray:
    """Equivariance map along an arbitrary word (applied right to left)."""
    sys = fb.sys
    m = linalg.identity(fb.dims[f], fb.field)
    cur = f
    for i in reversed(word):
        m = fb.eta[(i, cur)] @ m
        cur = fb.fc.act(sys.generator(i), cur)
    return m


def module_to_full_bisheaf(sys: CoxeterSystem, m: PervModule, validate: bool = True) -> FullBisheaf:
    return extend_to_full_bisheaf(sys, module_to_chamber_bisheaf(sys, m, validate=validate))
