"""Brute-force references that share no code path with the package kernels.

Linear optics via matrix permanents (first-quantized counting) and pure loss
via its Kraus decomposition on dense density matrices.
"""

import itertools
import math

import numpy as np


def permanent(m):
    n = len(m)
    if n == 0:
        return 1.0
    return sum(math.prod(m[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


def linear_optics_amplitudes(U, occ_in):
    """{occ_out: amplitude} for creation operators mapped a_i+ -> sum_j U[i, j] a_j+."""
    U = np.asarray(U)
    n_modes = U.shape[0]
    total = sum(occ_in)
    rows = [i for i, n in enumerate(occ_in) for _ in range(n)]
    out = {}
    for occ_out in itertools.product(range(total + 1), repeat=n_modes):
        if sum(occ_out) != total:
            continue
        cols = [j for j, n in enumerate(occ_out) for _ in range(n)]
        sub = [[U[r, c] for c in cols] for r in rows]
        norm = math.sqrt(math.prod(math.factorial(n) for n in occ_in) * math.prod(math.factorial(n) for n in occ_out))
        amp = permanent(sub) / norm
        if abs(amp) > 1e-15:
            out[occ_out] = amp
    return out


def embed_2x2(n_modes, i, j, block):
    U = np.eye(n_modes)
    U[np.ix_([i, j], [i, j])] = block
    return U


def bs_block(t):
    r, s = math.sqrt(t), math.sqrt(1 - t)
    return np.array([[r, s], [s, -r]])


def protocol_by_permanents(eta, alpha2, t1, t2):
    """Heralding probability, eta' and heralded output kets of the circuit.

    Modes: 0 a1, 1 b1, 2 d1, 3 d2, 4 c1, 5 c2.  Stages compose as row-image
    matrices, so the total map is the left-to-right product.
    """
    stages = [
        embed_2x2(6, 2, 3, bs_block(t1)),
        embed_2x2(6, 4, 5, bs_block(t2)),
        embed_2x2(6, 0, 2, bs_block(0.5)),
        embed_2x2(6, 1, 4, bs_block(0.5)),
    ]
    U = np.eye(6)
    for S in stages:
        U = U @ S
    a, b = math.sqrt(alpha2), math.sqrt(1 - alpha2)
    branches = [(eta, {(1, 0, 1, 0, 1, 0): a, (0, 1, 1, 0, 1, 0): b}), (1 - eta, {(0, 0, 1, 0, 1, 0): 1.0})]
    # after relabel: a1->f1, d1->f2, b1->e1, c1->e2
    heralds = [(fa, fb) for fa in (0, 2) for fb in (1, 4)]  # (f1|f2, e1|e2)
    total_p = 0.0
    single = 0.0
    outputs = {}
    for w, ket in branches:
        amps = {}
        for occ, c in ket.items():
            for out, amp in linear_optics_amplitudes(U, occ).items():
                amps[out] = amps.get(out, 0) + c * amp
        for fa, fb in heralds:
            cond = {}
            for out, amp in amps.items():
                clicks = [out[0], out[2], out[1], out[4]]
                want = [int(fa == 0), int(fa == 2), int(fb == 1), int(fb == 4)]
                if clicks == want:
                    cond[(out[3], out[5])] = cond.get((out[3], out[5]), 0) + amp
            p = w * sum(abs(v) ** 2 for v in cond.values())
            total_p += p
            single += w * sum(abs(v) ** 2 for k, v in cond.items() if sum(k) == 1)
            outputs.setdefault((fa, fb), []).append((w, cond))
    return total_p, single / total_p, outputs


def loss_kraus_rho(rho, eta, cutoff):
    """Single-mode pure loss on a dense (cutoff x cutoff) density matrix."""
    out = np.zeros_like(rho, dtype=complex)
    for k in range(cutoff):
        K = np.zeros((cutoff, cutoff))
        for n in range(k, cutoff):
            K[n - k, n] = math.sqrt(math.comb(n, k) * eta ** (n - k) * (1 - eta) ** k)
        out += K @ rho @ K.T
    return out
