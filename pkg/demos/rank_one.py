"""Walk through the rank-one modules on A1.

Sweeps the parameter mu, printing the module matrices, the half monodromy and
the verdict of each check.  mu = 0 is the one value where invertibility fails.
"""
from fractions import Fraction

from coxperv import linalg
from coxperv.coxeter import build_system
from coxperv.perversity import check_perverse, make_rank_one_Z2, monodromy


def show(name, m):
    rows = linalg.to_strings(m, make_rank_one_Z2(2).field)
    print(f"  {name} = {rows}")


def main():
    a1 = build_system("A1")
    for mu in [Fraction(2), Fraction(1), Fraction(-1), Fraction(1, 3), Fraction(0)]:
        m = make_rank_one_Z2(mu)
        print(f"mu = {mu}: dim {m.dim}")
        show("e_empty", m.e[0])
        show("rho(s)", m.rho[0])
        rep = check_perverse(a1, m)
        mon = monodromy(a1, m, check=False)
        show("half monodromy", mon.mu[0])
        show("monodromy", mon.mu[0] @ mon.mu[0])
        verdict = "perverse" if rep.passed else f"fails {rep.witness['family']} at {rep.witness.get('label')}"
        print(f"  verdict: {verdict}\n")


if __name__ == "__main__":
    main()
