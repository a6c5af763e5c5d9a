#!/usr/bin/env python3
"""Generate FCIDUMP test fixtures for small hydrogen clusters in STO-3G.

Only s-type Gaussians are needed, so the closed-form integrals are written out
directly. Orbitals are localized per fragment: Lowdin-orthogonalized AOs are
grouped by fragment and the fragment block of the RHF Fock matrix is
diagonalized, giving fragment orbitals sorted by ascending energy. Fixtures are
written with the active space spanning every orbital, so core_energy is the
nuclear repulsion.

Usage: hydrogen_fcidump.py <output-dir>
"""
import json
import os
import sys

import numpy as np
from scipy.special import erf

ANGSTROM = 1.8897261246257702
STO3G_EXP = np.array([3.42525091, 0.62391373, 0.16885540])
STO3G_COEF = np.array([0.15432897, 0.53532814, 0.44463454])


def boys0(t):
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    big = t > 1e-12
    st = np.sqrt(t[big])
    out[big] = 0.5 * np.sqrt(np.pi) * erf(st) / st
    small = ~big
    out[small] = 1.0 - t[small] / 3.0
    return out


def ao_integrals(coords):
    """Overlap, kinetic, nuclear attraction and ERI over contracted 1s AOs."""
    n = len(coords)
    a = STO3G_EXP
    d = STO3G_COEF * (2.0 * a / np.pi) ** 0.75
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            rab2 = np.sum((coords[i] - coords[j]) ** 2)
            for p in range(3):
                for q in range(3):
                    ap, aq = a[p], a[q]
                    g = ap + aq
                    pre = d[p] * d[q]
                    k = np.exp(-ap * aq / g * rab2)
                    s = (np.pi / g) ** 1.5 * k
                    S[i, j] += pre * s
                    T[i, j] += pre * ap * aq / g * (3.0 - 2.0 * ap * aq / g * rab2) * s
                    P = (ap * coords[i] + aq * coords[j]) / g
                    for c in coords:
                        rpc2 = np.sum((P - c) ** 2)
                        V[i, j] += pre * (-2.0 * np.pi / g) * k * boys0(g * rpc2)
    eri = np.zeros((n, n, n, n))
    # primitive-pair data
    pairs = {}
    for i in range(n):
        for j in range(n):
            rab2 = np.sum((coords[i] - coords[j]) ** 2)
            g = a[:, None] + a[None, :]
            K = np.exp(-a[:, None] * a[None, :] / g * rab2)
            P = (a[:, None, None] * coords[i] + a[None, :, None] * coords[j]) / g[:, :, None]
            pairs[i, j] = (g.ravel(), (K * d[:, None] * d[None, :]).ravel(), P.reshape(-1, 3))
    for i in range(n):
        for j in range(i + 1):
            g1, k1, p1 = pairs[i, j]
            for k in range(n):
                for l in range(k + 1):
                    g2, k2, p2 = pairs[k, l]
                    G1 = g1[:, None]
                    G2 = g2[None, :]
                    rpq2 = np.sum((p1[:, None, :] - p2[None, :, :]) ** 2, axis=2)
                    val = (2.0 * np.pi ** 2.5 / (G1 * G2 * np.sqrt(G1 + G2))
                           * k1[:, None] * k2[None, :]
                           * boys0(G1 * G2 / (G1 + G2) * rpq2))
                    v = val.sum()
                    for (p, q) in ((i, j), (j, i)):
                        for (r, s) in ((k, l), (l, k)):
                            eri[p, q, r, s] = v
                            eri[r, s, p, q] = v
    return S, T, V, eri


def nuclear_repulsion(coords):
    e = 0.0
    for i in range(len(coords)):
        for j in range(i):
            e += 1.0 / np.linalg.norm(coords[i] - coords[j])
    return e


def rhf(S, H, eri, nocc, max_iter=500):
    X = np.linalg.inv(np.linalg.cholesky(S)).T
    e, C = np.linalg.eigh(X.T @ H @ X)
    C = X @ C
    D = 2.0 * C[:, :nocc] @ C[:, :nocc].T
    e_old = 0.0
    for _ in range(max_iter):
        J = np.einsum('pqrs,rs->pq', eri, D)
        K = np.einsum('prqs,rs->pq', eri, D)
        F = H + J - 0.5 * K
        e_el = 0.5 * np.sum(D * (H + F))
        e, Cp = np.linalg.eigh(X.T @ F @ X)
        C = X @ Cp
        D_new = 2.0 * C[:, :nocc] @ C[:, :nocc].T
        if abs(e_el - e_old) < 1e-12 and np.max(np.abs(D_new - D)) < 1e-10:
            D = D_new
            break
        D = 0.5 * D + 0.5 * D_new
        e_old = e_el
    J = np.einsum('pqrs,rs->pq', eri, D)
    K = np.einsum('prqs,rs->pq', eri, D)
    return H + J - 0.5 * K, C, e_el


def fragment_orbitals(S, F, fragments):
    """Lowdin AOs, fragment Fock blocks diagonalized, fragments in order."""
    w, U = np.linalg.eigh(S)
    L = U @ np.diag(w ** -0.5) @ U.T
    Fl = L.T @ F @ L
    cols = []
    for atoms in fragments:
        blk = Fl[np.ix_(atoms, atoms)]
        e, v = np.linalg.eigh(blk)
        for k in range(len(atoms)):
            c = np.zeros(len(S))
            c[atoms] = v[:, k]
            if c[np.argmax(np.abs(c))] < 0:
                c = -c
            cols.append(L @ c)
    return np.array(cols).T


def write_fcidump(path, h1, eri, ecore, nelec, header_note):
    n = h1.shape[0]
    with open(path, 'w') as f:
        f.write(' &FCI NORB=%d,NELEC=%d,MS2=0,\n' % (n, nelec))
        f.write('  ORBSYM=%s,\n' % ','.join(['1'] * n))
        f.write('  ISYM=1,\n &END\n')
        for i in range(n):
            for j in range(i + 1):
                ij = i * (i + 1) // 2 + j
                for k in range(n):
                    for l in range(k + 1):
                        kl = k * (k + 1) // 2 + l
                        if kl > ij:
                            continue
                        v = eri[i, j, k, l]
                        if abs(v) > 1e-12:
                            f.write('%23.16e %3d %3d %3d %3d\n' % (v, i + 1, j + 1, k + 1, l + 1))
        for i in range(n):
            for j in range(i + 1):
                if abs(h1[i, j]) > 1e-12:
                    f.write('%23.16e %3d %3d %3d %3d\n' % (h1[i, j], i + 1, j + 1, 0, 0))
        f.write('%23.16e %3d %3d %3d %3d\n' % (ecore, 0, 0, 0, 0))


def build(coords_ang, fragments, canonical=False):
    coords = np.array(coords_ang) * ANGSTROM
    S, T, V, eri_ao = ao_integrals(coords)
    H = T + V
    nocc = len(coords) // 2
    F, C, _ = rhf(S, H, eri_ao, nocc)
    if not canonical:
        C = fragment_orbitals(S, F, fragments)
    h1 = C.T @ H @ C
    eri = np.einsum('pi,qj,rk,sl,pqrs->ijkl', C, C, C, C, eri_ao, optimize=True)
    return h1, eri, nuclear_repulsion(coords)


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def h2_dimer(distance):
    """Asymmetric (H2)2: midpoints separated by `distance` angstrom."""
    ua = unit([1.0, 0.2, 0.1])
    ub = unit([0.3, 1.0, 0.4])
    sep = unit([0.1, 0.25, 1.0])
    ma = np.zeros(3)
    mb = ma + distance * sep
    ra, rb = 0.74, 0.77
    return [ma - 0.5 * ra * ua, ma + 0.5 * ra * ua,
            mb - 0.5 * rb * ub, mb + 0.5 * rb * ub]


def layout_json(frags, m):
    orb = 0
    out = []
    for atoms in frags:
        n = len(atoms)
        out.append({"orbitals": list(range(orb, orb + n)), "nalpha": n // 2, "nbeta": n // 2})
        orb += n
    return {"fragments": out, "m": m}


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else '.'
    os.makedirs(outdir, exist_ok=True)

    h1, eri, ec = build([[0, 0, 0], [0.7414, 0, 0]], [[0, 1]], canonical=True)
    write_fcidump(os.path.join(outdir, 'h2_sto3g.fcidump'), h1, eri, ec, 2, 'H2')
    with open(os.path.join(outdir, 'h2_layout.json'), 'w') as f:
        json.dump(layout_json([[0, 1]], 1), f)
        f.write('\n')

    os.makedirs(os.path.join(outdir, 'h2_dimer'), exist_ok=True)
    for dist in (1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0):
        h1, eri, ec = build(h2_dimer(dist), [[0, 1], [2, 3]])
        write_fcidump(os.path.join(outdir, 'h2_dimer', 'd%.2f.fcidump' % dist), h1, eri, ec, 4, '')
    with open(os.path.join(outdir, 'h2_dimer_layout.json'), 'w') as f:
        json.dump(layout_json([[0, 1], [2, 3]], 2), f)
        f.write('\n')

    spacing = float(os.environ.get('H8_SPACING', '1.5'))
    chain = [[i * spacing, 0.0, 0.0] for i in range(8)]
    h1, eri, ec = build(chain, [[0, 1, 2, 3], [4, 5, 6, 7]])
    write_fcidump(os.path.join(outdir, 'h8_chain_stretched.fcidump'), h1, eri, ec, 8, '')
    with open(os.path.join(outdir, 'h8_layout.json'), 'w') as f:
        json.dump(layout_json([[0, 1, 2, 3], [4, 5, 6, 7]], 2), f)
        f.write('\n')


if __name__ == '__main__':
    main()
