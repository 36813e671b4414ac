"""Compiled right-hand sides and RK4 stepping loops.

State layout for the reaction-diffusion law: ``x = [w_1 .. w_N, y, z]``
(``N = 1`` for the finite-dimensional analog). For the general law:
``x = [y_1 .. y_n, w_1 .. w_l, z]``.

Every advance routine returns ``(status, steps_done)`` with status codes
listed in ``STATUS``; the state array is updated in place.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .controller import gain_rate, general_law, pde_law, pde_law_slopes

# real-axis stability radius of classical RK4
RK4_RADIUS = 2.785293563405282
MAX_SUBSTEPS = 100_000

OK, NONFINITE, BLOWUP, GAIN_OVERFLOW, TOO_STIFF = 0, 1, 2, 3, 4
STATUS = {
    OK: "ok",
    NONFINITE: "non-finite state",
    BLOWUP: "finite escape suspected",
    GAIN_OVERFLOW: "gain overflow",
    TOO_STIFF: "step stiffness limit exceeded",
}

K_CODES = {"zero": 0, "paper-unstable": 1, "linear-saturating": 2}
L_CODES = {"zero": 0, "paper-integral": 1, "norm-bounded-projection": 2}
MODE_PDE, MODE_ANALOG = 0, 1


@njit(cache=True)
def eval_signal_into(sig, t, out):
    kind, amps, freqs, phases, breaks = sig
    dim = out.size
    if kind == 0:
        out[:] = 0.0
    elif kind == 1:
        out[:] = amps[0]
    elif kind == 2:
        out[:] = 0.0
        for j in range(amps.shape[0]):
            s = math.sin(freqs[j] * t + phases[j])
            for i in range(dim):
                out[i] += amps[j, i] * s
    elif kind == 3:
        idx = np.searchsorted(breaks, t, side="right")
        out[:] = amps[idx]
    else:
        e = math.exp(-freqs[0] * t)
        for i in range(dim):
            out[i] = amps[0, i] * e


@njit(cache=True)
def k_value(kcode, x, y, p, kscale):
    if kcode == 1:
        return (x * x - x - 2.0 * p) / (1.0 + 2.0 * p) * y
    if kcode == 2:
        return kscale * x * y / (1.0 + y * y)
    return 0.0


@njit(cache=True)
def l_value(lcode, w, psi, dx):
    acc = 0.0
    if lcode == 1:
        for i in range(w.size):
            acc += w[i]
        return -acc * dx
    if lcode == 2:
        for i in range(w.size):
            acc += w[i] * psi[i]
        return acc * dx
    return 0.0


@njit(cache=True)
def pde_rhs_core(w, y, u, d, th1, th2, p, dx, kcode, kscale, lcode, psi, out_w):
    """Method-of-lines right-hand side; fills ``out_w`` and returns ``ydot``."""
    n = w.size
    inv = p / (dx * dx)
    for i in range(n):
        left = w[i - 1] if i > 0 else 0.0
        right = w[i + 1] if i < n - 1 else 0.0
        out_w[i] = inv * (left - 2.0 * w[i] + right) + th1 * k_value(kcode, (i + 1) * dx, y, p, kscale)
    return u + th2 * l_value(lcode, w, psi, dx) + d


@njit(cache=True)
def pde_closed_loop_rhs(t, x, out, mode, closed, p, dx, kcode, kscale, lcode, psi, c, a, b, eps, Gamma, sig_d, sig_th, bd, bth):
    n = x.size - 2
    y = x[n]
    z = x[n + 1]
    eval_signal_into(sig_d, t, bd)
    eval_signal_into(sig_th, t, bth)
    u = pde_law(c, a, b, y, z) if closed else 0.0
    if mode == 0:
        out[n] = pde_rhs_core(x[:n], y, u, bd[0], bth[0], bth[1], p, dx, kcode, kscale, lcode, psi, out[:n])
    else:
        out[0] = -p * math.pi**2 * x[0] + bth[0] * y
        out[n] = u + bth[1] * x[0] + bd[0]
    out[n + 1] = gain_rate(Gamma, 0.5 * y * y, eps, z) if closed else 0.0


@njit(cache=True)
def _pde_stiffness(t, x, mode, closed, p, dx, c, a, b, eps, Gamma, sig_th, bth):
    # Gershgorin-type bound on the Jacobian of the closed-loop right-hand side
    n = x.size - 2
    y = x[n]
    z = x[n + 1]
    eval_signal_into(sig_th, t, bth)
    th1 = abs(bth[0])
    th2 = abs(bth[1])
    if mode == 0:
        rho_w = 4.0 * p / (dx * dx) + th1
    else:
        rho_w = p * math.pi**2 + th1
    if not closed:
        return max(rho_w, th2)
    du_dy, du_dz = pde_law_slopes(c, a, b, y, z)
    rho_y = abs(du_dy) + abs(du_dz) + th2
    rho_z = Gamma * math.exp(-z) * (abs(y) + max(0.5 * y * y - eps, 0.0))
    return max(rho_w, rho_y, rho_z)


@njit(cache=True)
def _state_norm(x, n_w, dx):
    acc = 0.0
    for i in range(n_w):
        acc += x[i] * x[i]
    return math.sqrt(acc * dx + x[n_w] * x[n_w])


@njit(cache=True)
def pde_advance(
    x, k0, nsteps, dt, mode, closed, p, dx, kcode, kscale, lcode, psi, c, a, b, eps, Gamma, sig_d, sig_th, safety, blowup, zmax
):
    size = x.size
    k1 = np.empty(size)
    k2 = np.empty(size)
    k3 = np.empty(size)
    k4 = np.empty(size)
    tmp = np.empty(size)
    bd = np.empty(sig_d[1].shape[1])
    bth = np.empty(sig_th[1].shape[1])
    n_w = size - 2
    wdx = dx if mode == 0 else 1.0
    for j in range(nsteps):
        t = (k0 + j) * dt
        rho = _pde_stiffness(t, x, mode, closed, p, dx, c, a, b, eps, Gamma, sig_th, bth)
        m = int(math.ceil(dt * rho / (safety * RK4_RADIUS)))
        if m < 1:
            m = 1
        if m > MAX_SUBSTEPS:
            return TOO_STIFF, j
        h = dt / m
        for i in range(m):
            ts = t + i * h
            pde_closed_loop_rhs(ts, x, k1, mode, closed, p, dx, kcode, kscale, lcode, psi, c, a, b, eps, Gamma, sig_d, sig_th, bd, bth)
            for q in range(size):
                tmp[q] = x[q] + 0.5 * h * k1[q]
            pde_closed_loop_rhs(ts + 0.5 * h, tmp, k2, mode, closed, p, dx, kcode, kscale, lcode, psi, c, a, b, eps, Gamma, sig_d, sig_th, bd, bth)
            for q in range(size):
                tmp[q] = x[q] + 0.5 * h * k2[q]
            pde_closed_loop_rhs(ts + 0.5 * h, tmp, k3, mode, closed, p, dx, kcode, kscale, lcode, psi, c, a, b, eps, Gamma, sig_d, sig_th, bd, bth)
            for q in range(size):
                tmp[q] = x[q] + h * k3[q]
            pde_closed_loop_rhs(ts + h, tmp, k4, mode, closed, p, dx, kcode, kscale, lcode, psi, c, a, b, eps, Gamma, sig_d, sig_th, bd, bth)
            for q in range(size):
                x[q] = x[q] + h / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q])
        for q in range(size):
            if not math.isfinite(x[q]):
                return NONFINITE, j + 1
        if x[size - 1] > zmax:
            return GAIN_OVERFLOW, j + 1
        if _state_norm(x, n_w, wdx) > blowup:
            return BLOWUP, j + 1
    return OK, nsteps


@njit(cache=True)
def _dot(u, v):
    # plain loop: BLAS dispatch dominates for the tiny vectors used here
    acc = 0.0
    for i in range(u.size):
        acc += u[i] * v[i]
    return acc


def build_general_advance(bundle):
    """Compile the RK4 advance loop and a sample-diagnostics routine for a bundle
    whose callables are numba-jitted. Returns ``(advance, diagnostics)``.
    """
    f, g, kf, gradV, mu = bundle.f, bundle.g, bundle.k, bundle.gradV, bundle.mu
    phi0, A0, phi_full, A_full, h, V = bundle.phi0, bundle.A0, bundle.phi_full, bundle.A_full, bundle.h, bundle.V
    Phi = bundle.Phi
    n, l = bundle.n, bundle.l

    @njit
    def control(y, z, prm):
        gy = g(y)
        gvg = _dot(gradV(y), gy)
        a0 = A0(y)
        ph0 = phi0(y)
        return general_law(kf(y), gvg, mu(y), _dot(a0, a0), _dot(ph0, ph0), z, prm[2], prm[3], prm[4], prm[5])

    @njit
    def diagnostics(states, prm, out):
        # columns of out: u, V, Phi
        for s in range(states.shape[0]):
            x = states[s]
            y = x[:n]
            out[s, 0] = control(y, x[n + l], prm)
            out[s, 1] = V(y)
            out[s, 2] = Phi(x[n : n + l])

    @njit
    def rhs(t, x, out, prm, sig_d, sig_th, sig_dl, bd, bth, bdl):
        y = x[:n]
        w = x[n : n + l]
        z = x[n + l]
        eval_signal_into(sig_d, t, bd)
        eval_signal_into(sig_th, t, bth)
        eval_signal_into(sig_dl, t, bdl)
        gy = g(y)
        u = control(y, z, prm)
        drive = u + _dot(phi_full(y, w), bth) + _dot(A_full(y, w), bd)
        fy = f(y)
        for i in range(n):
            out[i] = fy[i] + gy[i] * drive
        hw = h(y, w, bdl)
        for i in range(l):
            out[n + i] = hw[i]
        out[n + l] = gain_rate(prm[1], V(y), prm[0], z)

    @njit
    def stiffness(t, x, f0, fj, xp, rows, prm, sig_d, sig_th, sig_dl, bd, bth, bdl):
        # row-sum bound of a forward-difference Jacobian; leaves rhs(t, x) in f0
        size = x.size
        rhs(t, x, f0, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
        rows[:] = 0.0
        for j in range(size):
            for q in range(size):
                xp[q] = x[q]
            hj = 1e-7 * max(1.0, abs(x[j]))
            xp[j] += hj
            rhs(t, xp, fj, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
            for i in range(size):
                rows[i] += abs(fj[i] - f0[i]) / hj
        return rows.max()

    @njit
    def advance(x, k0, nsteps, dt, prm, sig_d, sig_th, sig_dl, safety, blowup, zmax):
        size = x.size
        k1 = np.empty(size)
        k2 = np.empty(size)
        k3 = np.empty(size)
        k4 = np.empty(size)
        tmp = np.empty(size)
        fj = np.empty(size)
        rows = np.empty(size)
        bd = np.empty(sig_d[1].shape[1])
        bth = np.empty(sig_th[1].shape[1])
        bdl = np.empty(sig_dl[1].shape[1])
        for j in range(nsteps):
            t = (k0 + j) * dt
            rho = stiffness(t, x, k1, fj, tmp, rows, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
            if not math.isfinite(rho):
                return NONFINITE, j
            m = int(math.ceil(dt * rho / (safety * RK4_RADIUS)))
            if m < 1:
                m = 1
            if m > MAX_SUBSTEPS:
                return TOO_STIFF, j
            hs = dt / m
            for i in range(m):
                ts = t + i * hs
                if i > 0:
                    rhs(ts, x, k1, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
                for q in range(size):
                    tmp[q] = x[q] + 0.5 * hs * k1[q]
                rhs(ts + 0.5 * hs, tmp, k2, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
                for q in range(size):
                    tmp[q] = x[q] + 0.5 * hs * k2[q]
                rhs(ts + 0.5 * hs, tmp, k3, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
                for q in range(size):
                    tmp[q] = x[q] + hs * k3[q]
                rhs(ts + hs, tmp, k4, prm, sig_d, sig_th, sig_dl, bd, bth, bdl)
                for q in range(size):
                    x[q] = x[q] + hs / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q])
            acc = 0.0
            for q in range(size):
                if not math.isfinite(x[q]):
                    return NONFINITE, j + 1
            for q in range(size - 1):
                acc += x[q] * x[q]
            if x[size - 1] > zmax:
                return GAIN_OVERFLOW, j + 1
            if math.sqrt(acc) > blowup:
                return BLOWUP, j + 1
        return OK, nsteps

    return advance, diagnostics
