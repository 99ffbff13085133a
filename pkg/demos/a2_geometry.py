"""Facets and oppositions of the A2 arrangement.

Lists the 13 facets with their sign vectors and dimensions, then the four
opposition data and how many geometric oppositions each one sweeps out under W.
"""
from coxperv.coxeter import build_system
from coxperv.facets import facet_complex, geometric_oppositions
from coxperv.perversity import opposition_label


def main():
    a2 = build_system("A2")
    fc = facet_complex(a2)
    geo = fc.geometry
    print(f"|W| = {a2.order}, positive roots = {a2.npos}, facets = {len(fc)}")
    for f in fc.facets:
        word = a2.word_string(f.rep) or "e"
        print(f"  rep {word:>6}  type {f.type:03b}  dim {fc.dim(f)}  sign {geo.signs[f]}")
    print("\nopposition data (generators named 0 and 1):")
    total = set()
    for d in fc.oppositions():
        orbit = fc.expand_opposition(d)
        total |= orbit
        print(f"  {opposition_label(a2, d):>12}  orbit size {len(orbit)}")
    print(f"W-expanded: {len(total)}, found geometrically: {len(geometric_oppositions(a2))}, "
          f"equal: {total == geometric_oppositions(a2)}")


if __name__ == "__main__":
    main()
