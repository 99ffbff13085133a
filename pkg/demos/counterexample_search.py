"""Search seeded random modules on A2 for a failure of invertibility.

Every candidate satisfies the presentation relations; the first one whose
opposition cross maps are not all invertible is printed with its witness and
the offending cross map.
"""
from coxperv import linalg
from coxperv.coxeter import build_system
from coxperv.facets import OppositionDatum
from coxperv.perversity import counterexample_search, cross_map


def main(seed=0):
    a2 = build_system("A2")
    found = counterexample_search(a2, seed=seed)
    if found is None:
        print("no counterexample in this seed's trials")
        return
    k, m, report = found
    w = report.witness
    print(f"trial {k}: module of dimension {m.dim} fails invertibility at {w['label']}")
    d = OppositionDatum(sum(1 << i for i in w["I"]), a2.parse_word(w["w"]), sum(1 << i for i in w["J"]),
                        sum(1 << i for i in w["K"]))
    x, _ = cross_map(a2, m, d)
    print(f"cross map goes from dimension {x.shape[1]} to dimension {x.shape[0]} with rank {linalg.rank(x)}")
    if x.size:
        print(linalg.to_strings(x, m.field))


if __name__ == "__main__":
    main()
