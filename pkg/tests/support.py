"""Modules shared by several test files."""
from coxperv import linalg
from coxperv.perversity import permutation_module


def lines_module_a2(sys):
    """W permuting the three lines of the A2 arrangement.

    e_{s} and e_{t} project onto the lines through F_{s} and F_{t}; chambers carry
    nothing.  Opposite rays share a line, so every cross map between rays is an
    isomorphism.
    """
    m = permutation_module(sys, [(1, 0)])
    reps = sorted(set(int(r) for r in sys.min_coset_table(1)))
    e = {I: linalg.zeros(3, 3) for I in range(4)}
    e[3] = linalg.identity(3)
    e[1][reps.index(0), reps.index(0)] = 1
    w0 = sys.longest_element(3)
    k = reps.index(sys.min_coset_rep(w0, 1))
    e[2][k, k] = 1
    m.e = e
    return m


def signs_by_matrices(sys):
    """Sign vector of every point w.(sum of weights outside I), acting by inverse-transpose matrices."""
    out = {}
    for w in range(sys.order):
        g = linalg.inverse(sys.reflection_matrix(w), sys.field).T
        for I in range(1 << sys.rank):
            x = g @ linalg.matrix([[0 if I >> j & 1 else 1] for j in range(sys.rank)], sys.field)
            s = ""
            for root in sys.roots[: sys.npos]:
                v = sum((c * xi for c, xi in zip(root, x[:, 0])), sys.field.zero)
                s += "+" if v > 0 else "-" if v < 0 else "0"
            out[(w, I)] = s
    return out
