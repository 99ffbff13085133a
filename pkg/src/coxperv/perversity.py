"""Transitivity and invertibility of modules, geometric oracles, monodromy and example modules."""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg
from .bisheaf import (CheckReport, FullBisheaf, NotARepresentation, PervModule, ValidationRequired,
                      _facet_json, check_representation, validate_module)
from .coxeter import CoxeterSystem, bits, popcount
from .facets import OppositionDatum, facet_complex, geometric_oppositions
from .scalars import Field

DEFAULT_RELATION_CAP = 2_000_000

# Length conditions for the gallery relations; see Relation5Datum.
GALLERY = "gallery"
PRINTED = "printed"
# Direction of the cross map for an opposition I|_w J.
GEOMETRIC = "geometric"
LITERAL = "literal"


class EnumerationCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class Relation5Datum:
    """(I, J, A, B, w1, w2) with S = I ⊔ J, A, B ⊆ I and w1, w2 in W_I; w = w2 w1.

    The relation checked on a module is the operator identity
    ``e_{B∪J} ρ(w2) e_J ρ(w1) e_{A∪J} = e_{B∪J} ρ(w) e_{A∪J}``.
    """

    I: int
    J: int
    A: int
    B: int
    w1: int
    w2: int
    w: int

    def to_json(self, sys: CoxeterSystem) -> dict:
        return {"I": bits(self.I), "J": bits(self.J), "A": bits(self.A), "B": bits(self.B),
                "w1": sys.word_string(self.w1), "w2": sys.word_string(self.w2), "w": sys.word_string(self.w)}


def _length_ok(sys: CoxeterSystem, convention: str, I: int, A: int, B: int):
    """Boolean matrix over (w1, w2) in W_I x W_I of the length condition."""
    WI = np.array(sys.parabolic_subgroup(I), dtype=np.int64)
    L = sys.lengths
    wA, wB = sys.longest_element(A), sys.longest_element(B)
    w = sys.table[WI[None, :], WI[:, None]]            # w[i1, i2] = w2 * w1
    l1 = L[WI][:, None]
    l2 = L[WI][None, :]
    if convention == GALLERY:
        # minimal gallery wA C -> C -> w1^-1 C -> w^-1 C -> w^-1 wB C
        lhs = L[sys.table[sys.table[wB, w], wA]]
        rhs = L[wB] + l2 + l1 + L[wA]
    elif convention == PRINTED:
        winv = sys.inverses[w]
        lhs = L[sys.table[sys.table[w, wB], wA]]
        rhs = L[sys.table[sys.table[w, wB], winv]] + l2 + l1 + L[wA]
    else:
        raise ValueError(f"unknown length convention {convention!r}")
    return WI, w, lhs == rhs


def enumerate_relation5_data(sys: CoxeterSystem, convention: str = GALLERY,
                             cap: int = DEFAULT_RELATION_CAP) -> list[Relation5Datum]:
    """All tuples passing the length condition, in report order.

    Order: partitions by #I then I, then (A, B), then (w1, w2) by element index.
    ``cap`` bounds the number of candidate tuples examined.
    """
    S = sys.all_mask
    parts = sorted(range(1 << sys.rank), key=lambda I: (popcount(I), I))
    total = sum((1 << (2 * popcount(I))) * len(sys.parabolic_subgroup(I)) ** 2 for I in parts)
    if total > cap:
        raise EnumerationCapExceeded(f"{total} candidate tuples exceed the cap {cap}")
    out = []
    for I in parts:
        J = S & ~I
        subs = [m for m in range(1 << sys.rank) if m & ~I == 0]
        for A in subs:
            for B in subs:
                WI, w, ok = _length_ok(sys, convention, I, A, B)
                i1s, i2s = np.nonzero(ok)
                for a, b in sorted(zip(i1s.tolist(), i2s.tolist()), key=lambda p: (WI[p[0]], WI[p[1]])):
                    out.append(Relation5Datum(I, J, A, B, int(WI[a]), int(WI[b]), int(w[a, b])))
    return out


def relation5_sides(sys: CoxeterSystem, m: PervModule, d: Relation5Datum):
    e, rho = m.e, (lambda x: m.element(sys, x))
    left = e[d.B | d.J] @ rho(d.w2) @ e[d.J] @ rho(d.w1) @ e[d.A | d.J]
    right = e[d.B | d.J] @ rho(d.w) @ e[d.A | d.J]
    return left, right


def _check_chunk(args):
    sys, m, data, offset = args
    for k, d in enumerate(data):
        left, right = relation5_sides(sys, m, d)
        if not linalg.equal(left, right):
            return offset + k
    return None


def _require_valid(sys: CoxeterSystem, m: PervModule) -> None:
    if not validate_module(sys, m).passed:
        raise ValidationRequired("module fails the presentation relations")


def check_transitive(sys: CoxeterSystem, m: PervModule, convention: str = GALLERY, jobs: int = 1,
                     cap: int = DEFAULT_RELATION_CAP, validate: bool = True) -> CheckReport:
    """Evaluate both sides of every gallery relation instance exactly."""
    if validate:
        _require_valid(sys, m)
    data = enumerate_relation5_data(sys, convention, cap)
    rep = CheckReport("transitive")
    rep.stats = {"data": len(data), "distinct_IABw": len({(d.I, d.A, d.B, d.w) for d in data}),
                 "convention": convention}
    first = None
    if jobs > 1 and len(data) > 1:
        size = -(-len(data) // jobs)
        chunks = [(sys, m, data[k:k + size], k) for k in range(0, len(data), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = [h for h in pool.map(_check_chunk, chunks) if h is not None]
        first = min(hits) if hits else None
    else:
        first = _check_chunk((sys, m, data, 0))
    if first is None:
        rep.instances_checked = len(data)
    else:
        rep.instances_checked = first + 1
        rep.fail({"kind": "relation5", "index": first, **data[first].to_json(sys)})
    return rep


# -- invertibility --------------------------------------------------------------

def opposition_label(sys: CoxeterSystem, d: OppositionDatum) -> str:
    def name(mask):
        return "{" + ",".join(str(i) for i in bits(mask)) + "}" if mask else "∅"

    return f"{name(d.I)}|_{sys.word_string(d.w) or 'e'}{name(d.J)}"


def opposition_json(sys: CoxeterSystem, d: OppositionDatum) -> dict:
    return {"kind": "opposition", "label": opposition_label(sys, d), "I": bits(d.I),
            "w": sys.word_string(d.w), "J": bits(d.J), "K": bits(d.K)}


def cross_map(sys: CoxeterSystem, m: PervModule, d: OppositionDatum, convention: str = GEOMETRIC):
    """The map e_I V -> e_J V attached to I|_w J, in echelon-pivot bases.

    GEOMETRIC uses e_J ρ(w^-1) e_I, the map gamma_{F_K, wF_J} delta_{F_I, F_K}
    transported back to F_J; LITERAL uses e_J ρ(w) e_I.
    """
    u = sys.inverse(d.w) if convention == GEOMETRIC else d.w
    bi, bj = linalg.column_basis(m.e[d.I]), linalg.column_basis(m.e[d.J])
    return linalg.solve(bj, m.e[d.J] @ m.element(sys, u) @ bi), u


def localized_element(sys: CoxeterSystem, m: PervModule, d: OppositionDatum, u: int) -> np.ndarray:
    """e_I ρ(u)^-1 e_J ρ(u) e_I + (1 - e_I)."""
    ident = linalg.identity(m.dim, m.field)
    return (m.e[d.I] @ m.element(sys, sys.inverse(u)) @ m.e[d.J] @ m.element(sys, u) @ m.e[d.I]
            + (ident - m.e[d.I]))


def check_invertible(sys: CoxeterSystem, m: PervModule, convention: str = GEOMETRIC,
                     validate: bool = True) -> CheckReport:
    """Every opposition cross map must be bijective (exact rank equals both dimensions)."""
    if validate:
        _require_valid(sys, m)
    rep = CheckReport("invertible")
    localized_ok = True
    for d in facet_complex(sys).oppositions():
        rep.instances_checked += 1
        x, u = cross_map(sys, m, d, convention)
        di, dj = x.shape[1], x.shape[0]
        bijective = di == dj and linalg.rank(x) == di
        loc = localized_element(sys, m, d, u)
        localized_ok &= linalg.rank(loc) == m.dim
        if not bijective:
            rep.fail(opposition_json(sys, d))
            break
    rep.stats = {"convention": convention, "localized_elements_invertible": bool(localized_ok)}
    return rep


def check_perverse(sys: CoxeterSystem, m: PervModule, convention: str = GALLERY,
                   cross: str = GEOMETRIC, jobs: int = 1) -> CheckReport:
    """Presentation relations, then transitivity and invertibility."""
    base = validate_module(sys, m)
    if not base.passed:
        return CheckReport.combine("perverse", [base])
    parts = [base,
             check_transitive(sys, m, convention, jobs=jobs, validate=False),
             check_invertible(sys, m, cross, validate=False)]
    return CheckReport.combine("perverse", parts)


# -- geometric oracles ---------------------------------------------------------------

def transitivity_oracle_geometric(sys: CoxeterSystem, fb: FullBisheaf, exhaustive: bool = False) -> CheckReport:
    """phi_{F2,F3} phi_{F1,F2} = phi_{F1,F3} for all collinear triples in every star.

    By default F0 runs over the faces of the fundamental chamber and F1 over the
    faces F_I with I ⊆ K of the star of F0 = F_K; every other instance is a
    W-translate of one of these, which is sound once the bisheaf is equivariant.
    ``exhaustive`` checks every F0 and F1.
    """
    fc = fb.fc
    rep = CheckReport("transitiveGeometric")
    f0s = fc.facets if exhaustive else [fc.base(K) for K in range(1 << sys.rank)]
    for f0 in f0s:
        st = fc.star(f0)
        gam = fb.gamma_composites(f0)
        dlt = fb.delta_composites(f0)
        phi: dict = {}

        def get(a, b):
            if (a, b) not in phi:
                phi[(a, b)] = gam[b] @ dlt[a]
            return phi[(a, b)]

        f1s = st if exhaustive else [fc.base(I) for I in range(1 << sys.rank) if I & ~f0.type == 0]
        for f1 in f1s:
            for f2 in st:
                for f3 in st:
                    if not fc.collinear(f1, f2, f3):
                        continue
                    rep.instances_checked += 1
                    if not linalg.equal(get(f2, f3) @ get(f1, f2), get(f1, f3)):
                        return rep.fail({"kind": "collinearTriple", "F0": _facet_json(sys, f0),
                                         "F1": _facet_json(sys, f1), "F2": _facet_json(sys, f2),
                                         "F3": _facet_json(sys, f3)})
    return rep


def invertibility_oracle_geometric(sys: CoxeterSystem, fb: FullBisheaf) -> CheckReport:
    """gamma_{F0,F2} delta_{F1,F0} bijective for every opposition F1 |_{F0} F2 with F1 ⊆ closed chamber."""
    rep = CheckReport("invertibleGeometric")
    for f1, f0, f2 in sorted(geometric_oppositions(sys)):
        if f1.rep != 0:
            continue
        rep.instances_checked += 1
        x = fb.gamma_composites(f0)[f2] @ fb.delta_composites(f0)[f1]
        if not (x.shape[0] == x.shape[1] and linalg.rank(x) == x.shape[0]):
            return rep.fail({"kind": "geometricOpposition", "F1": _facet_json(sys, f1),
                             "F0": _facet_json(sys, f0), "F2": _facet_json(sys, f2)})
    return rep


# -- monodromy ------------------------------------------------------------------------

@dataclass
class MonodromyReport:
    base_dim: int
    mu: dict
    braid: str
    invertible: str
    braid_witness: Optional[dict] = None
    invertible_witness: Optional[int] = None
    perverse: Optional[bool] = None

    def to_json(self, fld: Field) -> dict:
        return {"base_dim": self.base_dim,
                "mu": {str(s): linalg.to_strings(x, fld) for s, x in sorted(self.mu.items())},
                "braid": self.braid, "braid_witness": self.braid_witness,
                "invertible": self.invertible, "invertible_witness": self.invertible_witness,
                "perverse": self.perverse}


def monodromy(sys: CoxeterSystem, m: PervModule, check: bool = True) -> MonodromyReport:
    """mu_s = e_∅ ρ(s) e_∅ on e_∅ V, the braid relations among them and their invertibility."""
    b = linalg.column_basis(m.e[0])
    n = b.shape[1]
    mu = {s: linalg.solve(b, m.e[0] @ m.rho[s] @ b) for s in range(sys.rank)}
    braid, bw = "pass", None
    for s in range(sys.rank):
        for t in range(s + 1, sys.rank):
            k = sys.matrix.m[s][t]
            alt = [s, t] * k
            left = linalg.mul(linalg.identity(n, m.field), *[mu[i] for i in alt[:k]])
            right = linalg.mul(linalg.identity(n, m.field), *[mu[i] for i in alt[1:k + 1]])
            if bw is None and not linalg.equal(left, right):
                braid, bw = "fail", {"s": s, "t": t}
    inv, iw = "pass", None
    for s in range(sys.rank):
        if linalg.rank(mu[s]) != n:
            inv, iw = "fail", s
            break
    perverse = check_perverse(sys, m).passed if check else None
    return MonodromyReport(n, mu, braid, inv, bw, iw, perverse)


# -- example modules --------------------------------------------------------------------

def _identity_e(sys: CoxeterSystem, n: int, fld: Field) -> dict:
    return {I: linalg.identity(n, fld) for I in range(1 << sys.rank)}


def make_local_system_module(sys: CoxeterSystem, rho: dict) -> PervModule:
    """All e_I = Id, W acting by rho."""
    check_representation(sys, rho)
    fld = _module_field(rho)
    n = rho[0].shape[0]
    return PervModule(sys.matrix, n, _identity_e(sys, n, fld), dict(rho), fld)


def make_skyscraper(sys: CoxeterSystem, rho: dict) -> PervModule:
    """e_S = Id and every other e_I = 0."""
    check_representation(sys, rho)
    fld = _module_field(rho)
    n = rho[0].shape[0]
    e = {I: linalg.zeros(n, n, fld) for I in range(1 << sys.rank)}
    e[sys.all_mask] = linalg.identity(n, fld)
    return PervModule(sys.matrix, n, e, dict(rho), fld)


def trivial_module(sys: CoxeterSystem) -> PervModule:
    return make_local_system_module(sys, character(sys, [1] * sys.rank))


def character(sys: CoxeterSystem, signs) -> dict:
    """1 x 1 representation s -> signs[s]; conjugate generators need equal signs."""
    return {i: linalg.matrix([[signs[i]]]) for i in range(sys.rank)}


def characters(sys: CoxeterSystem) -> list[tuple]:
    """All sign characters of W, as tuples of ±1 per generator."""
    out = []
    for mask in range(1 << sys.rank):
        signs = tuple(-1 if mask >> i & 1 else 1 for i in range(sys.rank))
        try:
            check_representation(sys, character(sys, signs))
        except NotARepresentation:
            continue
        out.append(signs)
    return out


def sign_character(sys: CoxeterSystem) -> dict:
    return character(sys, [-1] * sys.rank)


def reflection_representation(sys: CoxeterSystem) -> dict:
    """Generator matrices on the simple-root basis."""
    return {i: sys.generator_matrix(i) for i in range(sys.rank)}


def make_rank_one_Z2(mu) -> PervModule:
    """The rank-one module with parameter mu: 2-dimensional unless mu = ±1."""
    from .coxeter import preset

    mu = Fraction(mu) if not hasattr(mu, "sign") else mu
    if mu == 1 or mu == -1:
        one = linalg.matrix([[1]])
        return PervModule(preset("A1"), 1, {0: one.copy(), 1: one.copy()}, {0: linalg.matrix([[mu]])})
    e0 = linalg.matrix([[1, 0], [0, 0]])
    s = linalg.matrix([[mu, 1 + mu], [1 - mu, -mu]])
    return PervModule(preset("A1"), 2, {0: e0, 1: linalg.identity(2)}, {0: s})


def _module_field(rho: dict) -> Field:
    from .bisheaf import _field_of

    return _field_of(rho.values())


# -- random modules ---------------------------------------------------------------------

def _random_unimodular(n: int, rng: random.Random) -> np.ndarray:
    """Product of random elementary integer matrices."""
    p = linalg.identity(n)
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        p[i] = p[i] + c * p[j]
    return p


def permutation_module(sys: CoxeterSystem, components: list[tuple[int, int]], twist=None) -> PervModule:
    """W acting on ⊔ W/W_K (components (K, T0)); e_I projects onto points whose type lies in I.

    A point u W_K of a component has type supp(u) ∪ T0, where u is the minimal coset
    representative; this makes every e_I commute with W_I and e_I e_J = e_{I∩J}.
    """
    points = []
    for c, (K, T0) in enumerate(components):
        reps = sorted(set(int(r) for r in sys.min_coset_table(K)))
        points.extend((c, K, T0, u) for u in reps)
    index = {p: k for k, p in enumerate(points)}
    n = len(points)
    rho = {}
    for i in range(sys.rank):
        m = linalg.zeros(n, n)
        s = sys.generator(i)
        sign = 1 if twist is None else twist[i]
        for k, (c, K, T0, u) in enumerate(points):
            v = sys.min_coset_rep(sys.multiply(s, u), K)
            m[index[(c, K, T0, v)], k] = Fraction(sign)
        rho[i] = m
    e = {}
    for I in range(1 << sys.rank):
        m = linalg.zeros(n, n)
        for k, (c, K, T0, u) in enumerate(points):
            if (sys.support(u) | T0) & ~I == 0:
                m[k, k] = Fraction(1)
        e[I] = m
    return PervModule(sys.matrix, n, e, rho)


def _commutant_element(sys: CoxeterSystem, m: PervModule, rng: random.Random) -> np.ndarray:
    n = m.dim
    for _ in range(20):
        r = linalg.matrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        q = linalg.zeros(n, n)
        for g in range(sys.order):
            q = q + m.element(sys, g) @ r @ m.element(sys, sys.inverse(g))
        if linalg.rank(q) == n:
            return q
    return linalg.identity(n)


def random_module(sys: CoxeterSystem, rng: random.Random, max_dim: int = 8) -> PervModule:
    """A random module satisfying the presentation relations: a twisted permutation module, its idempotents
    conjugated inside the commutant of W, then everything conjugated by a unimodular matrix."""
    S = sys.all_mask
    masks = list(range(1 << sys.rank))
    for _ in range(100):
        comps = []
        size = 0
        for _ in range(rng.randint(1, 3)):
            K = rng.choice(masks)
            T0 = rng.choice([t for t in masks if t & K == 0] or [0]) if rng.random() < 0.4 else 0
            d = sys.order // len(sys.parabolic_subgroup(K))
            if size + d <= max_dim:
                comps.append((K, T0))
                size += d
        if comps:
            break
    else:
        comps = [(S, 0)]
    chars = characters(sys)
    twist = rng.choice(chars) if rng.random() < 0.5 else None
    m = permutation_module(sys, comps, twist)
    if rng.random() < 0.7:
        q = _commutant_element(sys, m, rng)
        qi = linalg.inverse(q)
        m.e = {I: q @ x @ qi for I, x in m.e.items()}
    p = _random_unimodular(m.dim, rng)
    pi = linalg.inverse(p)
    m.e = {I: p @ x @ pi for I, x in m.e.items()}
    m.rho = {i: p @ x @ pi for i, x in m.rho.items()}
    m._elem_cache = {}
    return m


def counterexample_search(sys: CoxeterSystem, seed: int, trials: int = 200, target: str = "invertible",
                          max_dim: int = 8):
    """First seeded random module failing ``target`` ("invertible" or "transitive").

    Returns (trial index, module, report) or None.
    """
    rng = random.Random(seed)
    for k in range(trials):
        m = random_module(sys, rng, max_dim)
        rep = check_invertible(sys, m) if target == "invertible" else check_transitive(sys, m)
        if not rep.passed:
            return k, m, rep
    return None


def example_battery(sys: CoxeterSystem, n_random: int = 20, seed: int = 0, max_dim: int = 8) -> list:
    """Named example modules: trivial, skyscrapers, local systems, characters and seeded random ones."""
    out = [("trivial", trivial_module(sys)),
           ("skyscraper-sign", make_skyscraper(sys, sign_character(sys))),
           ("skyscraper-reflection", make_skyscraper(sys, reflection_representation(sys))),
           ("local-system-reflection", make_local_system_module(sys, reflection_representation(sys)))]
    for signs in characters(sys):
        label = "".join("+" if x == 1 else "-" for x in signs)
        out.append((f"character{label}", make_local_system_module(sys, character(sys, signs))))
    rng = random.Random(seed)
    for k in range(n_random):
        out.append((f"random-{seed}-{k}", random_module(sys, rng, max_dim)))
    return out
