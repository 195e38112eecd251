# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: sphere search and Viterbi trellis.

Mirrors nlmimo._kernels_py exactly (same traversal order, same tie-breaking);
see that module for the algorithm notes.
"""

import numpy as np

from libc.math cimport INFINITY

BACKEND_NAME = "compiled"

ctypedef double complex dcomplex


cdef double _search(
    dcomplex[:, ::1] r,
    dcomplex[:, ::1] yeff_t,
    Py_ssize_t t,
    dcomplex[::1] points,
    long[::1] offs,
    int[::1] nbits,
    double radius,
    int constr_level,
    int constr_bit,
    int constr_val,
    long[::1] chosen,
    long[::1] best_idx,
    double[:, ::1] inc,
    unsigned char[:, ::1] consumed,
    long[::1] n_used,
    double[::1] dist,
    dcomplex[::1] sym,
    long* nodes_out,
):
    cdef Py_ssize_t n = r.shape[0]
    cdef double best = radius
    cdef bint found = False
    cdef long nodes = 0
    cdef Py_ssize_t level, j, m, base, npts, pick
    cdef dcomplex rhs, diff, rd
    cdef double newdist, vmin, d
    cdef int nb, shift
    cdef bint descended

    level = n - 1
    dist[level] = 0.0
    _enter(r, yeff_t, t, points, offs, nbits, constr_level, constr_bit,
           constr_val, level, sym, inc, consumed, n_used)
    while True:
        base = offs[level]
        npts = offs[level + 1] - base
        descended = False
        while n_used[level] < npts:
            pick = -1
            vmin = INFINITY
            for j in range(npts):
                if not consumed[level, j] and inc[level, j] < vmin:
                    vmin = inc[level, j]
                    pick = j
            if pick < 0:
                n_used[level] = npts
                break
            newdist = dist[level] + vmin
            if not newdist < best:
                n_used[level] = npts
                break
            consumed[level, pick] = 1
            n_used[level] += 1
            nodes += 1
            chosen[level] = pick
            sym[level] = points[base + pick]
            if level == 0:
                best = newdist
                found = True
                for m in range(n):
                    best_idx[m] = chosen[m]
            else:
                dist[level - 1] = newdist
                level -= 1
                _enter(r, yeff_t, t, points, offs, nbits, constr_level,
                       constr_bit, constr_val, level, sym, inc, consumed, n_used)
                descended = True
                break
        if descended:
            continue
        level += 1
        if level >= n:
            break
    nodes_out[0] += nodes
    return best if found else INFINITY


cdef inline void _enter(
    dcomplex[:, ::1] r,
    dcomplex[:, ::1] yeff_t,
    Py_ssize_t t,
    dcomplex[::1] points,
    long[::1] offs,
    int[::1] nbits,
    int constr_level,
    int constr_bit,
    int constr_val,
    Py_ssize_t level,
    dcomplex[::1] sym,
    double[:, ::1] inc,
    unsigned char[:, ::1] consumed,
    long[::1] n_used,
):
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t j, base, npts
    cdef dcomplex rhs, diff, rd
    cdef int nb, shift

    rhs = yeff_t[t, level]
    for j in range(level + 1, n):
        rhs = rhs - r[level, j] * sym[j]
    rd = r[level, level]
    base = offs[level]
    npts = offs[level + 1] - base
    if level == constr_level:
        nb = nbits[level]
        shift = nb - 1 - constr_bit
        for j in range(npts):
            if ((j >> shift) & 1) != constr_val:
                inc[level, j] = INFINITY
            else:
                diff = rhs - rd * points[base + j]
                inc[level, j] = diff.real * diff.real + diff.imag * diff.imag
    else:
        for j in range(npts):
            diff = rhs - rd * points[base + j]
            inc[level, j] = diff.real * diff.real + diff.imag * diff.imag
    for j in range(npts):
        consumed[level, j] = 0
    n_used[level] = 0


def sd_hard_batch(r, yeff, points, offs, nbits, out_hard, out_nodes):
    """Hard sphere detection for each column of yeff; see _kernels_py."""
    cdef dcomplex[:, ::1] r_v = np.ascontiguousarray(r, dtype=np.complex128)
    cdef dcomplex[:, ::1] yeff_t = np.ascontiguousarray(
        np.asarray(yeff, dtype=np.complex128).T
    )
    cdef dcomplex[::1] points_v = np.ascontiguousarray(points, dtype=np.complex128)
    cdef long[::1] offs_v = np.ascontiguousarray(offs, dtype=np.int64)
    cdef int[::1] nbits_v = np.ascontiguousarray(nbits, dtype=np.int32)
    cdef long[:, ::1] out_hard_v = out_hard
    cdef long[::1] out_nodes_v = out_nodes

    cdef Py_ssize_t n = r_v.shape[0]
    cdef Py_ssize_t T = yeff_t.shape[0]
    cdef Py_ssize_t max_m = 0, i, t
    for i in range(n):
        if offs_v[i + 1] - offs_v[i] > max_m:
            max_m = offs_v[i + 1] - offs_v[i]

    cdef long[::1] chosen = np.zeros(n, dtype=np.int64)
    cdef long[::1] best_idx = np.zeros(n, dtype=np.int64)
    cdef double[:, ::1] inc = np.zeros((n, max_m), dtype=np.float64)
    cdef unsigned char[:, ::1] consumed = np.zeros((n, max_m), dtype=np.uint8)
    cdef long[::1] n_used = np.zeros(n, dtype=np.int64)
    cdef double[::1] dist = np.zeros(n, dtype=np.float64)
    cdef dcomplex[::1] sym = np.zeros(n, dtype=np.complex128)

    cdef long nodes
    for t in range(T):
        nodes = 0
        _search(r_v, yeff_t, t, points_v, offs_v, nbits_v, INFINITY,
                -1, -1, -1, chosen, best_idx, inc, consumed, n_used, dist,
                sym, &nodes)
        for i in range(n):
            out_hard_v[t, i] = best_idx[i]
        out_nodes_v[t] = nodes
    return None


def sd_soft_batch(r, yeff, points, offs, nbits, noise_var, clip,
                  out_hard, out_llr, out_nodes):
    """Max-log soft sphere detection for each column of yeff; see _kernels_py."""
    cdef dcomplex[:, ::1] r_v = np.ascontiguousarray(r, dtype=np.complex128)
    cdef dcomplex[:, ::1] yeff_t = np.ascontiguousarray(
        np.asarray(yeff, dtype=np.complex128).T
    )
    cdef dcomplex[::1] points_v = np.ascontiguousarray(points, dtype=np.complex128)
    cdef long[::1] offs_v = np.ascontiguousarray(offs, dtype=np.int64)
    cdef int[::1] nbits_v = np.ascontiguousarray(nbits, dtype=np.int32)
    cdef long[:, ::1] out_hard_v = out_hard
    cdef double[:, ::1] out_llr_v = out_llr
    cdef long[::1] out_nodes_v = out_nodes
    cdef double nv = noise_var
    cdef double clip_c = clip

    cdef Py_ssize_t n = r_v.shape[0]
    cdef Py_ssize_t T = yeff_t.shape[0]
    cdef Py_ssize_t max_m = 0, i, t, lev, boff
    for i in range(n):
        if offs_v[i + 1] - offs_v[i] > max_m:
            max_m = offs_v[i + 1] - offs_v[i]

    cdef long[::1] chosen = np.zeros(n, dtype=np.int64)
    cdef long[::1] best_idx = np.zeros(n, dtype=np.int64)
    cdef long[::1] c_idx = np.zeros(n, dtype=np.int64)
    cdef double[:, ::1] inc = np.zeros((n, max_m), dtype=np.float64)
    cdef unsigned char[:, ::1] consumed = np.zeros((n, max_m), dtype=np.uint8)
    cdef long[::1] n_used = np.zeros(n, dtype=np.int64)
    cdef double[::1] dist = np.zeros(n, dtype=np.float64)
    cdef dcomplex[::1] sym = np.zeros(n, dtype=np.complex128)

    cdef long nodes
    cdef double m_ml, cap, m_c, mag
    cdef int nb, k, bit
    for t in range(T):
        nodes = 0
        m_ml = _search(r_v, yeff_t, t, points_v, offs_v, nbits_v, INFINITY,
                       -1, -1, -1, chosen, best_idx, inc, consumed, n_used,
                       dist, sym, &nodes)
        cap = m_ml + clip_c * nv
        boff = 0
        for lev in range(n):
            nb = nbits_v[lev]
            for k in range(nb):
                bit = (best_idx[lev] >> (nb - 1 - k)) & 1
                m_c = _search(r_v, yeff_t, t, points_v, offs_v, nbits_v, cap,
                              <int> lev, k, 1 - bit, chosen, c_idx, inc,
                              consumed, n_used, dist, sym, &nodes)
                if m_c == INFINITY:
                    mag = clip_c
                else:
                    mag = (m_c - m_ml) / nv
                    if mag > clip_c:
                        mag = clip_c
                out_llr_v[t, boff + k] = mag if bit == 0 else -mag
            boff += nb
        for i in range(n):
            out_hard_v[t, i] = best_idx[i]
        out_nodes_v[t] = nodes
    return None


def viterbi_core(llrs, n_steps, out2, decisions):
    """Soft-input Viterbi over the rate-1/2 trellis; see _kernels_py."""
    cdef double[::1] llrs_v = np.ascontiguousarray(llrs, dtype=np.float64)
    cdef long[:, ::1] out2_v = np.ascontiguousarray(out2, dtype=np.int64)
    cdef unsigned char[::1] dec_v = decisions
    cdef Py_ssize_t steps = n_steps
    cdef Py_ssize_t n_states = out2_v.shape[0]
    cdef int reg_bits = 0
    while (1 << reg_bits) < n_states:
        reg_bits += 1

    pm_arr = np.full(n_states, 1e30, dtype=np.float64)
    pm_arr[0] = 0.0
    new_pm_arr = np.empty(n_states, dtype=np.float64)
    surv_arr = np.zeros((steps, n_states), dtype=np.uint8)
    cdef double[::1] pm = pm_arr
    cdef double[::1] new_pm = new_pm_arr
    cdef unsigned char[:, ::1] surv = surv_arr

    cdef Py_ssize_t t, sp
    cdef long p0, p1, c0, c1, b, half_mask, s
    cdef double l1, l2, cost0, cost1
    half_mask = (n_states // 2) - 1
    for t in range(steps):
        l1 = llrs_v[2 * t]
        l2 = llrs_v[2 * t + 1]
        for sp in range(n_states):
            b = sp >> (reg_bits - 1)
            p0 = (sp & half_mask) << 1
            p1 = p0 | 1
            c0 = out2_v[p0, b]
            c1 = out2_v[p1, b]
            cost0 = pm[p0] + (l1 if c0 >> 1 else -l1) + (l2 if c0 & 1 else -l2)
            cost1 = pm[p1] + (l1 if c1 >> 1 else -l1) + (l2 if c1 & 1 else -l2)
            if cost1 < cost0:
                new_pm[sp] = cost1
                surv[t, sp] = 1
            else:
                new_pm[sp] = cost0
                surv[t, sp] = 0
        pm, new_pm = new_pm, pm

    s = 0
    for t in range(steps - 1, -1, -1):
        dec_v[t] = s >> (reg_bits - 1)
        if surv[t, s]:
            s = ((s & half_mask) << 1) | 1
        else:
            s = (s & half_mask) << 1
    return None
