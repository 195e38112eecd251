"""Pure-Python/numpy implementations of the hot kernels.

Import-time fallback when the compiled extension (nlmimo._kernels) is absent,
and the reference the extension is tested against. Same function signatures,
same arithmetic, same traversal order; only the speed differs.

Sphere search: depth-first over the upper-triangular system with
Schnorr-Euchner child ordering (children consumed in ascending partial-metric
order via incremental selection) and running-radius pruning, so the returned
minimum is exact. Soft output re-runs the search once per bit with the
opposite bit value forced and the radius capped at the clip level, which
keeps counter-hypothesis metrics exact wherever the LLR is not clipped.
"""

import numpy as np

BACKEND_NAME = "python"

_BIG = np.inf


def _search(r, yeff_col, points, offs, nbits, radius, constr_level, constr_bit, constr_val):
    """One depth-first sphere search over levels n-1 (root) .. 0.

    Returns (best_metric, best_idx, nodes). best_metric is inf when nothing
    beats `radius`. nodes counts accepted tree nodes (partial assignments
    whose metric passed the pruning test).
    """
    n = r.shape[0]
    best = radius
    best_idx = None
    nodes = 0

    sym = np.zeros(n, dtype=np.complex128)
    chosen = np.zeros(n, dtype=np.int64)
    dist = np.zeros(n, dtype=np.float64)      # metric accumulated above each level
    inc = [None] * n                          # child increments per level
    order = [None] * n                        # selection order per level
    used = [0] * n                            # children consumed per level

    def enter(level):
        """Compute child increments for `level` given choices above it."""
        rhs = yeff_col[level] - np.dot(r[level, level + 1 :], sym[level + 1 :])
        pts = points[offs[level] : offs[level + 1]]
        d = np.abs(rhs - r[level, level] * pts) ** 2
        if level == constr_level:
            nb = nbits[level]
            labels = np.arange(pts.shape[0])
            bad = ((labels >> (nb - 1 - constr_bit)) & 1) != constr_val
            d = d.copy()
            d[bad] = _BIG
        inc[level] = d
        order[level] = np.argsort(d, kind="stable")
        used[level] = 0

    level = n - 1
    dist[level] = 0.0
    enter(level)
    while True:
        pts_n = offs[level + 1] - offs[level]
        descended = False
        while used[level] < pts_n:
            j = order[level][used[level]]
            newdist = dist[level] + inc[level][j]
            if not newdist < best:
                used[level] = pts_n  # children are sorted: rest pruned too
                break
            used[level] += 1
            nodes += 1
            chosen[level] = j
            sym[level] = points[offs[level] + j]
            if level == 0:
                best = newdist
                best_idx = chosen.copy()
            else:
                dist[level - 1] = newdist
                level -= 1
                enter(level)
                descended = True
                break
        if descended:
            continue
        level += 1
        if level >= n:
            return best, best_idx, nodes


def sd_hard_batch(r, yeff, points, offs, nbits, out_hard, out_nodes):
    """Hard sphere detection for each column of yeff."""
    n = r.shape[0]
    for t in range(yeff.shape[1]):
        m, idx, nodes = _search(r, yeff[:, t], points, offs, nbits, _BIG, -1, -1, -1)
        out_hard[t, :] = idx
        out_nodes[t] = nodes
        if idx is None:  # pragma: no cover - unconstrained search always lands
            raise RuntimeError("unconstrained search returned no leaf")
    return None


def sd_soft_batch(r, yeff, points, offs, nbits, noise_var, clip, out_hard, out_llr, out_nodes):
    """Max-log soft sphere detection for each column of yeff.

    LLRs are laid out level-major ([level0 bits..., level1 bits...]) and
    already clipped to +-clip. Positive LLR means bit 0 is more likely.
    """
    n = r.shape[0]
    boffs = np.concatenate(([0], np.cumsum(nbits)))
    for t in range(yeff.shape[1]):
        m_ml, idx, nodes = _search(r, yeff[:, t], points, offs, nbits, _BIG, -1, -1, -1)
        cap = m_ml + clip * noise_var
        for lev in range(n):
            nb = nbits[lev]
            for k in range(nb):
                bit = (idx[lev] >> (nb - 1 - k)) & 1
                m_c, _, cn = _search(
                    r, yeff[:, t], points, offs, nbits, cap, lev, k, 1 - bit
                )
                nodes += cn
                mag = (m_c - m_ml) / noise_var if np.isfinite(m_c) else clip
                mag = min(mag, clip)
                out_llr[t, boffs[lev] + k] = mag if bit == 0 else -mag
        out_hard[t, :] = idx
        out_nodes[t] = nodes
    return None


def viterbi_core(llrs, n_steps, next_state, out2, decisions):
    """Soft-input Viterbi over the 64-state rate-1/2 trellis.

    llrs has 2 entries per step, positive meaning coded bit 0. The path
    starts and ends in state 0 (zero tail). decisions receives the n_steps
    input bits.
    """
    n_states = next_state.shape[0]
    reg_bits = int(np.log2(n_states))
    pm = np.full(n_states, 1e30)
    pm[0] = 0.0
    survivors = np.zeros((n_steps, n_states), dtype=np.uint8)

    sp = np.arange(n_states)
    b_in = sp >> (reg_bits - 1)               # input bit that leads into s'
    pred0 = (sp & (n_states // 2 - 1)) << 1   # predecessor with LSB 0
    pred1 = pred0 | 1
    c_p0 = out2[pred0, b_in]
    c_p1 = out2[pred1, b_in]
    # per-transition signs for the two coded bits (+1 for coded 1, -1 for 0)
    s0a = np.where(c_p0 >> 1, 1.0, -1.0)
    s0b = np.where(c_p0 & 1, 1.0, -1.0)
    s1a = np.where(c_p1 >> 1, 1.0, -1.0)
    s1b = np.where(c_p1 & 1, 1.0, -1.0)

    for t in range(n_steps):
        l1 = llrs[2 * t]
        l2 = llrs[2 * t + 1]
        cand0 = pm[pred0] + s0a * l1 + s0b * l2
        cand1 = pm[pred1] + s1a * l1 + s1b * l2
        take1 = cand1 < cand0
        survivors[t] = take1
        pm = np.where(take1, cand1, cand0)

    s = 0
    for t in range(n_steps - 1, -1, -1):
        decisions[t] = s >> (reg_bits - 1)
        s = pred1[s] if survivors[t, s] else pred0[s]
    return None
