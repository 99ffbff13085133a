"""Compare the algebraic transitivity check with the geometric oracle.

For each example module on A2 and B2 the chamber data is extended to a bisheaf
on every facet; the oracle then tests composites along collinear triples
directly.  Both verdicts are printed side by side.
"""
import sys as _sys
import time

from coxperv.bisheaf import module_to_full_bisheaf
from coxperv.coxeter import build_system
from coxperv.perversity import check_invertible, check_transitive, example_battery, transitivity_oracle_geometric


def main(types=("A2", "B2"), n_random=20):
    for name in types:
        sys = build_system(name)
        t0 = time.perf_counter()
        agree = 0
        battery = example_battery(sys, n_random, seed=0)
        for label, m in battery:
            algebraic = check_transitive(sys, m).passed
            geometric = transitivity_oracle_geometric(sys, module_to_full_bisheaf(sys, m)).passed
            inv = check_invertible(sys, m).passed
            agree += algebraic == geometric
            print(f"{name} {label:>26} dim {m.dim:2}  transitive {algebraic!s:5}  oracle {geometric!s:5}  "
                  f"invertible {inv}")
        print(f"{name}: {agree}/{len(battery)} agree ({time.perf_counter() - t0:.1f}s)\n")


if __name__ == "__main__":
    main(tuple(_sys.argv[1:]) or ("A2", "B2"))
