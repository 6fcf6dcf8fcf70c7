"""Pure-Python versions of the compiled kernels (same signatures and results)."""
import math

import numpy as np

PLANCK = 6.62607015e-34


def _drive(drive, t):
    ec, ej, ngc, ngh, fd, a, sine = drive
    phase = 2.0 * math.pi * fd * t
    c = math.cos(phase)
    s = math.sin(phase)
    if sine:
        q = 0.5 * (1.0 + c)
        dq = -0.5 * s * 2.0 * math.pi * fd
    else:
        tanh_a = math.tanh(a)
        th = math.tanh(a * c)
        q = 0.5 * (1.0 + th / tanh_a)
        dq = -0.5 * (1.0 - th * th) * a * s * 2.0 * math.pi * fd / tanh_a
    return ngc + (ngh - ngc) * q, (ngh - ngc) * dq


def _rates(bath, fq):
    f_r, q, kt_hz, amp, omega_power = bath
    r = f_r / fq - fq / f_r
    lor = 1.0 / (1.0 + q * q * r * r)
    x = fq / kt_hz
    wp = 2.0 * math.pi * fq if omega_power != 0.0 else 1.0
    down = amp * lor * wp / -math.expm1(-x)
    return down, down * math.exp(-x)


def _deriv(drive, bath_c, bath_h, t, s):
    ec, ej = drive[0], drive[1]
    ng, dng = _drive(drive, t)
    u = 4.0 * ec * (1.0 - 2.0 * ng)
    fq = math.sqrt(u * u + ej * ej)
    w = 2.0 * math.pi * fq
    k = 8.0 * ec * ej * dng / (fq * fq)
    fdot = -32.0 * ec * ec * (1.0 - 2.0 * ng) * dng / fq
    cd, cu = _rates(bath_c, fq)
    hd, hu = _rates(bath_h, fq)
    g = cd + cu + hd + hu
    dd = cd - cu + hd - hu
    x, y, z = s[0], s[1], s[2]
    return (
        -0.5 * g * x - w * y - k * z,
        w * x - 0.5 * g * y,
        k * x - g * z - dd,
        -0.5 * PLANCK * fq * ((cd + cu) * z + (cd - cu)),
        -0.5 * PLANCK * fq * ((hd + hu) * z + (hd - hu)),
        0.5 * PLANCK * (fdot * z + fq * k * x),
    )


def _energy(drive, t, z):
    ng, _ = _drive(drive, t)
    u = 4.0 * drive[0] * (1.0 - 2.0 * ng)
    return 0.5 * PLANCK * math.sqrt(u * u + drive[1] * drive[1]) * z


def bloch_cycle(state, t0, dt, n_steps, drive, bath_c, bath_h, z_record=None, stride=0):
    drive = tuple(float(v) for v in drive)
    bath_c = tuple(float(v) for v in bath_c)
    bath_h = tuple(float(v) for v in bath_h)
    s = [float(state[0]), float(state[1]), float(state[2]), 0.0, 0.0, 0.0]
    max_norm = math.sqrt(s[0] ** 2 + s[1] ** 2 + s[2] ** 2)
    e0 = _energy(drive, t0, s[2])
    record = z_record is not None and stride > 0
    rec = 0
    if record:
        z_record[0] = s[2]
        rec = 1
    h2 = 0.5 * dt
    for i in range(n_steps):
        t = t0 + i * dt
        k1 = _deriv(drive, bath_c, bath_h, t, s)
        k2 = _deriv(drive, bath_c, bath_h, t + h2, [a + h2 * b for a, b in zip(s, k1)])
        k3 = _deriv(drive, bath_c, bath_h, t + h2, [a + h2 * b for a, b in zip(s, k2)])
        k4 = _deriv(drive, bath_c, bath_h, t + dt, [a + dt * b for a, b in zip(s, k3)])
        s = [
            a + dt / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            for a, b1, b2, b3, b4 in zip(s, k1, k2, k3, k4)
        ]
        norm = math.sqrt(s[0] ** 2 + s[1] ** 2 + s[2] ** 2)
        if norm > max_norm:
            max_norm = norm
        if record and (i + 1) % stride == 0:
            z_record[rec] = s[2]
            rec += 1
    e1 = _energy(drive, t0 + n_steps * dt, s[2])
    return (s[0], s[1], s[2], s[3], s[4], s[5], e0, e1, max_norm)


def jacobi_eigh(m, tol, max_sweeps):
    a = np.array(m, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v, 0, True
    iu = np.triu_indices(n, 1)
    sweep = 0
    while True:
        off = math.sqrt(2.0 * float(np.sum(np.abs(a[iu]) ** 2)))
        if off <= tol * scale:
            return np.real(np.diag(a)).copy(), v, sweep, True
        if sweep >= max_sweeps:
            return np.real(np.diag(a)).copy(), v, sweep, False
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                mag = abs(a[p, q])
                if mag == 0.0:
                    continue
                ph = a[p, q] / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                g = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]])
                cols = a[:, [p, q]] @ g
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vc = v[:, [p, q]] @ g
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
