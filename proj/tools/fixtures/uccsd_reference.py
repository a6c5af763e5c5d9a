"""Reference enumeration of the spin-adapted UCCSD generator list.

Prints {"norb": n, "generators": [[cre, ann], ...], "symtab": [[...], ...]}
with spin orbital p + sigma*norb. Used to freeze tests/data/uccsd_norb*.json.
"""
import itertools
import json
import sys

import numpy as np


def spin_cases(p, norb):
    rows, m = [list(p)], [0]
    for e in range(len(p)):
        new = []
        for r in rows:
            q = list(r)
            q[e] += norb
            new.append(q)
        rows = rows + new
        m = m + [x + 1 for x in m]
    keys = [tuple(sorted(r)) for r in rows]
    first = {}
    for i, k in enumerate(keys):
        first.setdefault(k, i)
    order = sorted(first)
    return [rows[first[k]] for k in order], [m[first[k]] for k in order]


def build(norb):
    a_idx, i_idx = np.tril_indices(norb, k=-1)
    ab = [(int(a),) for a in a_idx]
    ij = [(int(i),) for i in i_idx]
    pq = [(int(p), int(q)) for p, q in zip(*np.tril_indices(norb))]
    for x, y in itertools.combinations_with_replacement(pq, 2):
        ab.append(x)
        ij.append(y)
    gens, symtab = [], []
    for a, i in zip(ab, ij):
        if len(a) == 1:
            symtab.append([len(gens), len(gens) + 1])
            gens.append([[a[0]], [i[0]]])
            gens.append([[a[0] + norb], [i[0] + norb]])
            continue
        ca, ma = spin_cases(a, norb)
        ci, mi = spin_cases(i, norb)
        for kab, (sa, sma) in enumerate(zip(ca, ma)):
            if len(set(sa)) < len(sa):
                continue
            for kij, (si, smi) in enumerate(zip(ci, mi)):
                if smi != sma or sa == si:
                    continue
                if a == i and kab > kij:
                    continue
                if len(set(si)) < len(si):
                    continue
                symtab.append([len(gens)])
                gens.append([sa, si])
    return gens, symtab


if __name__ == "__main__":
    if len(sys.argv) > 1 and sys.argv[1] == "counts":
        for n in range(1, 9):
            g, s = build(n)
            print(n, len(s), len(g))
    else:
        n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
        g, s = build(n)
        print(json.dumps({"norb": n, "generators": g, "symtab": s}))
