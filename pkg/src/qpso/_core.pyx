# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the swarm optimizers.

Bit-for-bit mirror of ``qpso._pykernel`` (which documents the draw-order
contract); every arithmetic expression here is shaped exactly like the
Python reference so both backends produce identical run records.
Problem ids match ``qpso.problems``, penalty kinds match the order in
``qpso.constrained`` ("constant", "sqrt", "linear").
"""

from libc.math cimport (M_PI, INFINITY, cos, fabs, floor, isfinite, isnan,
                        log, nextafter, sqrt, tan)
from libc.stdint cimport int64_t, uint64_t

import numpy as np


# ---------------------------------------------------------------------------
# xoshiro256++ seeded via SplitMix64 (same fixed algorithm as qpso.rng)

cdef struct Rng:
    uint64_t s0
    uint64_t s1
    uint64_t s2
    uint64_t s3

cdef uint64_t _GAMMA = <uint64_t>0x9E3779B97F4A7C15
cdef double _INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix64(uint64_t z) noexcept:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline void rng_seed(Rng* r, uint64_t seed) noexcept:
    cdef uint64_t z = seed
    z = z + _GAMMA
    r.s0 = _mix64(z)
    z = z + _GAMMA
    r.s1 = _mix64(z)
    z = z + _GAMMA
    r.s2 = _mix64(z)
    z = z + _GAMMA
    r.s3 = _mix64(z)


cdef inline uint64_t _rotl(uint64_t x, int k) noexcept:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t rng_next(Rng* r) noexcept:
    cdef uint64_t result = _rotl(r.s0 + r.s3, 23) + r.s0
    cdef uint64_t t = r.s1 << 17
    r.s2 = r.s2 ^ r.s0
    r.s3 = r.s3 ^ r.s1
    r.s1 = r.s1 ^ r.s2
    r.s0 = r.s0 ^ r.s3
    r.s2 = r.s2 ^ t
    r.s3 = _rotl(r.s3, 45)
    return result


cdef inline double u01(Rng* r) noexcept:
    return <double>(rng_next(r) >> 11) * _INV_2_53


cdef inline double u_open01(Rng* r) noexcept:
    cdef double u = u01(r)
    while u == 0.0:
        u = u01(r)
    return u


cdef inline double cauchy_draw(Rng* r) noexcept:
    return tan(M_PI * (u01(r) - 0.5))


cdef inline double uniform_in(Rng* r, double lo, double hi) noexcept:
    cdef double v = lo + (hi - lo) * u01(r)
    if v >= hi:
        v = nextafter(hi, lo)
    return v


def rng_uniform_sequence(seed, int count):
    """First `count` uniform01 draws for `seed` (parity testing)."""
    cdef Rng rng
    rng_seed(&rng, <uint64_t>seed)
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef int i
    for i in range(count):
        view[i] = u01(&rng)
    return out


def rng_cauchy_sequence(seed, int count):
    """First `count` standard Cauchy draws for `seed` (parity testing)."""
    cdef Rng rng
    rng_seed(&rng, <uint64_t>seed)
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef int i
    for i in range(count):
        view[i] = cauchy_draw(&rng)
    return out


# ---------------------------------------------------------------------------
# Built-in objectives and constraints (ids match qpso.problems)

cdef double _SQRT2 = sqrt(2.0)

cdef enum:
    PID_SPHERE = 0
    PID_ROSENBROCK = 1
    PID_GRIEWANK = 2
    PID_RASTRIGIN = 3
    PID_CSPHERE = 10
    PID_TRUSS = 11
    PID_SPRING = 12
    PID_VESSEL = 13


cdef double eval_objective(int pid, double* x, int dim) noexcept:
    cdef double acc = 0.0
    cdef double prod = 1.0
    cdef double a, b
    cdef int i
    if pid == PID_SPHERE or pid == PID_CSPHERE:
        for i in range(dim):
            acc += x[i] * x[i]
        return acc
    elif pid == PID_ROSENBROCK:
        for i in range(dim - 1):
            a = x[i + 1] - x[i] * x[i]
            b = x[i] - 1.0
            acc += 100.0 * a * a + b * b
        return acc
    elif pid == PID_GRIEWANK:
        for i in range(dim):
            acc += x[i] * x[i]
            prod *= cos(x[i] / sqrt(i + 2.0))
        return acc / 4000.0 - prod + 1.0
    elif pid == PID_RASTRIGIN:
        a = 2.0 * M_PI
        for i in range(dim):
            acc += x[i] * x[i] - 10.0 * cos(a * x[i]) + 10.0
        return acc
    elif pid == PID_TRUSS:
        return (2.0 * _SQRT2 * x[0] + x[1]) * 100.0
    elif pid == PID_SPRING:
        return (x[2] + 2.0) * x[1] * x[0] * x[0]
    elif pid == PID_VESSEL:
        return (0.6224 * x[0] * x[2] * x[3]
                + 1.7781 * x[1] * x[2] * x[2]
                + 3.166 * x[0] * x[0] * x[3]
                + 19.84 * x[0] * x[0] * x[2])
    return INFINITY


cdef int constraint_count(int pid) noexcept:
    if pid == PID_CSPHERE:
        return 1
    elif pid == PID_TRUSS:
        return 3
    elif pid == PID_SPRING or pid == PID_VESSEL:
        return 4
    return 0


cdef void eval_constraints(int pid, double* x, int dim, double* g) noexcept:
    cdef double acc, num, den
    cdef int i
    if pid == PID_CSPHERE:
        acc = 0.0
        for i in range(dim):
            acc += x[i]
        g[0] = -acc
    elif pid == PID_TRUSS:
        num = _SQRT2 * x[0] + x[1]
        den = _SQRT2 * x[0] * x[0] + 2.0 * x[0] * x[1]
        g[0] = num / den * 2.0 - 2.0
        g[1] = x[1] / den * 2.0 - 2.0
        den = x[0] + _SQRT2 * x[1]
        g[2] = 1.0 / den * 2.0 - 2.0
    elif pid == PID_SPRING:
        num = x[1] * x[1] * x[1]          # x2 cubed
        den = x[0] * x[0]                 # x1 squared
        g[0] = 1.0 - (num * x[2]) / (71785.0 * (den * den))
        acc = x[0] * x[0] * x[0]          # x1 cubed
        num = 4.0 * x[1] * x[1] - x[0] * x[1]
        den = 12566.0 * (x[1] * acc - acc * x[0])
        g[1] = num / den + 1.0 / (5108.0 * x[0] * x[0]) - 1.0
        g[2] = 1.0 - 140.45 * x[0] / (x[1] * x[1] * x[2])
        g[3] = (x[1] + x[0]) / 1.5 - 1.0
    elif pid == PID_VESSEL:
        g[0] = -x[0] + 0.0193 * x[2]
        g[1] = -x[1] + 0.00954 * x[2]
        acc = x[2] * x[2] * x[2]          # x3 cubed
        g[2] = (-M_PI * x[2] * x[2] * x[3]
                - 4.0 / 3.0 * M_PI * acc
                + 1296000.0)
        g[3] = x[3] - 240.0


cdef double violation_sum_c(int pid, double* x, int dim) noexcept:
    cdef double g[8]
    cdef double total = 0.0
    cdef int m = constraint_count(pid)
    cdef int i
    eval_constraints(pid, x, dim, g)
    for i in range(m):
        if isnan(g[i]):
            return INFINITY
        if g[i] > 0.0:
            total += g[i]
    return total


cdef inline double penalty_weight(int kind, double coeff, int t) noexcept:
    if kind == 0:
        return coeff
    elif kind == 1:
        return coeff * sqrt(<double>t)
    return coeff * t


cdef double fitness_c(int pid, bint constrained, double* x, int dim, int t,
                      int pkind, double pcoeff) noexcept:
    cdef double value = eval_objective(pid, x, dim)
    cdef double viol
    if constrained:
        viol = violation_sum_c(pid, x, dim)
        if viol > 0.0:
            value = value + penalty_weight(pkind, pcoeff, t) * viol
    if not isfinite(value):
        value = INFINITY
    return value


cdef void repair_c(Rng* rng, double* x, double* box_lo, double* box_hi,
                   int dim) noexcept:
    cdef int j, attempt
    cdef double lo, hi, width, v
    for j in range(dim):
        lo = box_lo[j]
        hi = box_hi[j]
        v = x[j]
        if lo <= v and v <= hi:
            continue
        width = hi - lo
        for attempt in range(10):
            if v < lo:
                v = v + width * u01(rng)
            elif v > hi:
                v = v - width * u01(rng)
            else:
                break
        if v < lo:
            v = lo
        elif v > hi:
            v = hi
        x[j] = v


# ---------------------------------------------------------------------------
# Run kernel

cdef enum:
    ALGO_PSO = 0
    ALGO_QPSO = 1
    ALGO_QPSO_MO = 2
    ALGO_QPSO_CD = 3


def run_kernel(int algo, int pid, int dim, int n, int iters,
               double[::1] init_lo, double[::1] init_hi,
               double[::1] box_lo, double[::1] box_hi,
               bint constrained,
               double c1, double c2, double alpha_start, double alpha_end,
               double pr, int selection_size, bint selection_on,
               double chi, int pkind, double pcoeff,
               bint has_target, double target, bint stop_at_target,
               seed):
    """Run one optimizer on a built-in problem; see qpso.optimizers.run.

    Returns (trajectory, final_position, final_value, evals_total,
    evals_to_region) with evals_to_region = -1 when no target was hit.
    """
    cdef Rng rng
    rng_seed(&rng, <uint64_t>seed)

    positions_arr = np.empty((n, dim), dtype=np.float64)
    pbest_arr = np.empty((n, dim), dtype=np.float64)
    trajectory_arr = np.empty(iters, dtype=np.float64)
    cdef double[:, ::1] pos = positions_arr
    cdef double[:, ::1] pbest = pbest_arr
    cdef double[:, ::1] vel = np.zeros((n, dim), dtype=np.float64)
    cdef double[:, ::1] src_pos = np.empty((n, dim), dtype=np.float64)
    cdef double[::1] pobj = np.empty(n, dtype=np.float64)
    cdef double[::1] pviol = np.empty(n, dtype=np.float64)
    cdef double[::1] obj = np.empty(n, dtype=np.float64)
    cdef double[::1] viol = np.empty(n, dtype=np.float64)
    cdef double[::1] fx = np.empty(n, dtype=np.float64)
    cdef double[::1] src_obj = np.empty(n, dtype=np.float64)
    cdef double[::1] src_viol = np.empty(n, dtype=np.float64)
    cdef double[::1] gbest = np.empty(dim, dtype=np.float64)
    cdef double[::1] mbest = np.empty(dim, dtype=np.float64)
    cdef double[::1] mb_used = np.empty(dim, dtype=np.float64)
    cdef double[::1] offsets = np.empty(dim, dtype=np.float64)
    cdef double[::1] attr = np.empty(dim, dtype=np.float64)
    cdef double[::1] traj = trajectory_arr
    cdef long[::1] order = np.empty(n, dtype=np.int64)

    cdef double gobj = INFINITY
    cdef double gviol = 0.0
    cdef double best_seen = INFINITY
    cdef int64_t evals = 0
    cdef int64_t hit = -1
    cdef int executed = 0
    cdef bint has_offsets
    cdef int i, j, k, z, kk, dst, key, slot
    cdef double value, vv, scored, w, alpha, acc, gate, scale, draw
    cdef double r1, r2, phi_a, phi_b, den, phi, u, s, spread, gbv, vnew, key_fit

    for i in range(n):
        for j in range(dim):
            pos[i, j] = uniform_in(&rng, init_lo[j], init_hi[j])

    w = penalty_weight(pkind, pcoeff, 1) if constrained else 0.0
    for i in range(n):
        value = eval_objective(pid, &pos[i, 0], dim)
        if not isfinite(value):
            value = INFINITY
        vv = violation_sum_c(pid, &pos[i, 0], dim) if constrained else 0.0
        evals += 1
        scored = value + w * vv
        if scored < best_seen:
            best_seen = scored
        obj[i] = value
        viol[i] = vv
        pobj[i] = value
        pviol[i] = vv
        for j in range(dim):
            pbest[i, j] = pos[i, j]
        if pobj[i] + w * pviol[i] < gobj + w * gviol:
            gobj = pobj[i]
            gviol = pviol[i]
            for j in range(dim):
                gbest[j] = pos[i, j]

    if not isfinite(gobj + w * gviol):
        raise RuntimeError(
            "run aborted: every initial fitness value is non-finite")

    if has_target and best_seen <= target:
        hit = evals

    for k in range(1, iters + 1):
        w = penalty_weight(pkind, pcoeff, k) if constrained else 0.0
        if algo == ALGO_PSO:
            for i in range(n):
                # fold cached evaluation into pbest/gbest at current weight
                if obj[i] + w * viol[i] < pobj[i] + w * pviol[i]:
                    for j in range(dim):
                        pbest[i, j] = pos[i, j]
                    pobj[i] = obj[i]
                    pviol[i] = viol[i]
                if pobj[i] + w * pviol[i] < gobj + w * gviol:
                    gobj = pobj[i]
                    gviol = pviol[i]
                    for j in range(dim):
                        gbest[j] = pbest[i, j]
                for j in range(dim):
                    r1 = u01(&rng)
                    r2 = u01(&rng)
                    vnew = chi * (vel[i, j] + c1 * r1 * (pbest[i, j] - pos[i, j])
                                  + c2 * r2 * (gbest[j] - pos[i, j]))
                    vel[i, j] = vnew
                    pos[i, j] = pos[i, j] + vnew
                if constrained:
                    repair_c(&rng, &pos[i, 0], &box_lo[0], &box_hi[0], dim)
                value = eval_objective(pid, &pos[i, 0], dim)
                if not isfinite(value):
                    value = INFINITY
                vv = violation_sum_c(pid, &pos[i, 0], dim) if constrained else 0.0
                evals += 1
                scored = value + w * vv
                if scored < best_seen:
                    best_seen = scored
                obj[i] = value
                viol[i] = vv
        else:
            alpha = alpha_start - (alpha_start - alpha_end) * k / iters
            for j in range(dim):
                acc = 0.0
                for i in range(n):
                    acc += pbest[i, j]
                mbest[j] = acc / n

            has_offsets = False
            if algo == ALGO_QPSO_MO or algo == ALGO_QPSO_CD:
                if pr > 0.0:
                    gate = u01(&rng)
                    if gate < pr:
                        has_offsets = True
                        for j in range(dim):
                            scale = u01(&rng)
                            draw = cauchy_draw(&rng)
                            offsets[j] = scale * draw
            for j in range(dim):
                mb_used[j] = mbest[j]
            if algo == ALGO_QPSO_CD and has_offsets:
                for j in range(dim):
                    mb_used[j] = mbest[j] + offsets[j]

            for i in range(n):
                if obj[i] + w * viol[i] < pobj[i] + w * pviol[i]:
                    for j in range(dim):
                        pbest[i, j] = pos[i, j]
                    pobj[i] = obj[i]
                    pviol[i] = viol[i]
                if pobj[i] + w * pviol[i] < gobj + w * gviol:
                    gobj = pobj[i]
                    gviol = pviol[i]
                    for j in range(dim):
                        gbest[j] = pbest[i, j]
                for j in range(dim):
                    r1 = u01(&rng)
                    r2 = u01(&rng)
                    phi_a = c1 * r1
                    phi_b = c2 * r2
                    den = phi_a + phi_b
                    if den == 0.0:
                        phi = 0.5
                    else:
                        phi = phi_a / den
                    gbv = gbest[j]
                    if algo == ALGO_QPSO_MO and has_offsets:
                        gbv = gbest[j] + offsets[j]
                    attr[j] = phi * pbest[i, j] + (1.0 - phi) * gbv
                for j in range(dim):
                    u = u_open01(&rng)
                    s = u01(&rng)
                    spread = alpha * fabs(mb_used[j] - pos[i, j]) * log(1.0 / u)
                    if s < 0.5:
                        pos[i, j] = attr[j] + spread
                    else:
                        pos[i, j] = attr[j] - spread
                if constrained:
                    repair_c(&rng, &pos[i, 0], &box_lo[0], &box_hi[0], dim)
                value = eval_objective(pid, &pos[i, 0], dim)
                if not isfinite(value):
                    value = INFINITY
                vv = violation_sum_c(pid, &pos[i, 0], dim) if constrained else 0.0
                evals += 1
                scored = value + w * vv
                if scored < best_seen:
                    best_seen = scored
                obj[i] = value
                viol[i] = vv

            if algo == ALGO_QPSO_CD and selection_on:
                z = <int>floor((n - 1) / <double>selection_size + 0.5)
                if z > 0:
                    for i in range(n):
                        order[i] = i
                        fx[i] = obj[i] + w * viol[i]
                    # insertion sort on (fitness, index): stable total order
                    for i in range(1, n):
                        key = order[i]
                        key_fit = fx[key]
                        slot = i - 1
                        while slot >= 0 and (fx[order[slot]] > key_fit
                                             or (fx[order[slot]] == key_fit
                                                 and order[slot] > key)):
                            order[slot + 1] = order[slot]
                            slot -= 1
                        order[slot + 1] = key
                    for kk in range(z):
                        i = <int>order[kk]
                        for j in range(dim):
                            src_pos[kk, j] = pos[i, j]
                        src_obj[kk] = obj[i]
                        src_viol[kk] = viol[i]
                    for kk in range(z):
                        dst = <int>order[n - z + kk]
                        for j in range(dim):
                            pos[dst, j] = src_pos[kk, j]
                        obj[dst] = src_obj[kk]
                        viol[dst] = src_viol[kk]

        traj[k - 1] = best_seen
        executed = k
        if has_target and hit < 0 and best_seen <= target:
            hit = evals
        if hit >= 0 and stop_at_target:
            break

    for i in range(n):
        if obj[i] + w * viol[i] < pobj[i] + w * pviol[i]:
            for j in range(dim):
                pbest[i, j] = pos[i, j]
            pobj[i] = obj[i]
            pviol[i] = viol[i]
        if pobj[i] + w * pviol[i] < gobj + w * gviol:
            gobj = pobj[i]
            gviol = pviol[i]
            for j in range(dim):
                gbest[j] = pbest[i, j]

    final_position = np.asarray(gbest).copy()
    return (trajectory_arr[:executed].copy(), final_position, gobj + w * gviol,
            int(evals), int(hit))
