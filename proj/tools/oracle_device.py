#!/usr/bin/env python3
"""Reference trajectories for the memristor Euler update.

Mirrors src/device.cpp operation-for-operation so the printed endpoints can
be pinned in tests/test_device.cpp. Run from anywhere; no dependencies.
"""

D = 3e-9
mu_v = 3.2e-15
R_on = 1e6
R_off = 6e7
Vp = 1.2
Vn = -2.4
i_on = 1.0
i_off = 1.4e-14
i0 = 3e-8
delta_frac = 1e-3


def R(w):
    x = w / D
    return R_on * x + R_off * (1.0 - x)


def f(w):
    y = 2.0 * w / D - 1.0
    return 1.0 - y * y


def step(w, v, dt):
    if Vn <= v <= Vp:
        return w
    i = v / R(w)
    k = mu_v * R_on / D
    if v > Vp:
        dw = k * (i_off / (i - i0)) * f(w)
    else:
        dw = k * (i / i_on) * f(w)
    s = dw * dt
    cap = 0.02 * D
    s = min(max(s, -cap), cap)
    lo = delta_frac * D
    hi = D - delta_frac * D
    return min(max(w + s, lo), hi)


def run(w0, v, dt, steps):
    w = w0
    for _ in range(steps):
        w = step(w, v, dt)
    return w


def main():
    a1 = run(0.5 * D, 1.4, 1e-6, 1)
    a = run(0.5 * D, 1.4, 1e-6, 100)
    b1 = run(0.7 * D, -2.6, 1e-6, 1)
    b = run(0.7 * D, -2.6, 1e-6, 200)
    c = run(D - delta_frac * D, -2.6, 1e-6, 500)
    b_half = run(0.7 * D, -2.6, 5e-7, 400)
    g = run(0.1 * D, 1.4, 1e-6, 1)
    print(f"pot_0.5D_1.4V_1step_1us   = {a1!r}")
    print(f"pot_0.5D_1.4V_100us       = {a!r}")
    print(f"dep_0.7D_-2.6V_1step_1us  = {b1!r}")
    print(f"dep_0.7D_-2.6V_200us      = {b!r}")
    print(f"dep_wmax_-2.6V_500us      = {c!r}")
    print(f"dep_0.7D_halfdt_200us     = {b_half!r}")
    print(f"halving_gap_over_D        = {abs(b - b_half) / D!r}")
    print(f"pos_branch_below_i0_1step = {g!r}  (started {0.1 * D!r})")


if __name__ == "__main__":
    main()
