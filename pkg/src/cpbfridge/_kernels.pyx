# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: RK4 Bloch-cycle integration and cyclic Jacobi eigensolver.

Argument conventions are shared with ``_kernels_py``; see ``kernels`` for the
selection logic.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport tanh, cos, sin, sqrt, expm1, exp, fabs, M_PI

cnp.import_array()

cdef double PLANCK = 6.62607015e-34


cdef struct Drive:
    double ec
    double ej
    double ngc
    double ngh
    double fd
    double a
    double tanh_a
    int sine


cdef struct Bath:
    double f_r
    double q
    double kt_hz
    double amp
    double omega_power


cdef inline void drive_eval(Drive* d, double t, double* ng, double* dng) noexcept nogil:
    cdef double phase = 2.0 * M_PI * d.fd * t
    cdef double c = cos(phase)
    cdef double s = sin(phase)
    cdef double th, q, dq
    if d.sine:
        q = 0.5 * (1.0 + c)
        dq = -0.5 * s * 2.0 * M_PI * d.fd
    else:
        th = tanh(d.a * c)
        q = 0.5 * (1.0 + th / d.tanh_a)
        dq = -0.5 * (1.0 - th * th) * d.a * s * 2.0 * M_PI * d.fd / d.tanh_a
    ng[0] = d.ngc + (d.ngh - d.ngc) * q
    dng[0] = (d.ngh - d.ngc) * dq


cdef inline void bath_rates(Bath* b, double fq, double* down, double* up) noexcept nogil:
    cdef double w = 2.0 * M_PI * fq
    cdef double r = b.f_r / fq - fq / b.f_r
    cdef double lor = 1.0 / (1.0 + b.q * b.q * r * r)
    cdef double x = fq / b.kt_hz
    cdef double wp = w if b.omega_power != 0.0 else 1.0
    down[0] = b.amp * lor * wp / (-expm1(-x))
    up[0] = down[0] * exp(-x)


cdef inline void bloch_deriv(Drive* d, Bath* bc, Bath* bh, double t,
                             double* s, double* out) noexcept nogil:
    cdef double ng, dng, u, fq, w, k, fdot
    cdef double cd, cu, hd, hu, g, dd
    drive_eval(d, t, &ng, &dng)
    u = 4.0 * d.ec * (1.0 - 2.0 * ng)
    fq = sqrt(u * u + d.ej * d.ej)
    w = 2.0 * M_PI * fq
    k = 8.0 * d.ec * d.ej * dng / (fq * fq)
    fdot = -32.0 * d.ec * d.ec * (1.0 - 2.0 * ng) * dng / fq
    bath_rates(bc, fq, &cd, &cu)
    bath_rates(bh, fq, &hd, &hu)
    g = cd + cu + hd + hu
    dd = cd - cu + hd - hu
    out[0] = -0.5 * g * s[0] - w * s[1] - k * s[2]
    out[1] = w * s[0] - 0.5 * g * s[1]
    out[2] = k * s[0] - g * s[2] - dd
    out[3] = -0.5 * PLANCK * fq * ((cd + cu) * s[2] + (cd - cu))
    out[4] = -0.5 * PLANCK * fq * ((hd + hu) * s[2] + (hd - hu))
    out[5] = 0.5 * PLANCK * (fdot * s[2] + fq * k * s[0])


cdef inline double energy(Drive* d, double t, double z) noexcept nogil:
    cdef double ng, dng, u
    drive_eval(d, t, &ng, &dng)
    u = 4.0 * d.ec * (1.0 - 2.0 * ng)
    return 0.5 * PLANCK * sqrt(u * u + d.ej * d.ej) * z


cdef void _fill_bath(Bath* b, double[::1] p):
    b.f_r = p[0]
    b.q = p[1]
    b.kt_hz = p[2]
    b.amp = p[3]
    b.omega_power = p[4]


def bloch_cycle(double[::1] state, double t0, double dt, long n_steps,
                double[::1] drive, double[::1] bath_c, double[::1] bath_h,
                double[::1] z_record=None, long stride=0):
    """Advance the rotating-frame Bloch vector by ``n_steps`` RK4 steps.

    ``drive`` = [ec, ej, ngc, ngh, f_drive, a, sine_flag]; bath arrays are
    [f_r, q, kT/h, amplitude, omega_power]. Returns
    (x, y, z, heat_cold, heat_hot, work, energy_start, energy_end, max_norm).
    """
    cdef Drive d
    cdef Bath bc, bh
    cdef double s[6]
    cdef double tmp[6]
    cdef double k1[6]
    cdef double k2[6]
    cdef double k3[6]
    cdef double k4[6]
    cdef long i, j, rec = 0
    cdef double t, norm, max_norm, e0, e1
    cdef bint record = z_record is not None and stride > 0
    d.ec = drive[0]; d.ej = drive[1]; d.ngc = drive[2]; d.ngh = drive[3]
    d.fd = drive[4]; d.a = drive[5]; d.sine = <int>drive[6]
    d.tanh_a = tanh(d.a) if d.a > 0 else 1.0
    _fill_bath(&bc, bath_c)
    _fill_bath(&bh, bath_h)
    s[0] = state[0]; s[1] = state[1]; s[2] = state[2]
    s[3] = 0.0; s[4] = 0.0; s[5] = 0.0
    max_norm = sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2])
    with nogil:
        e0 = energy(&d, t0, s[2])
        if record:
            z_record[0] = s[2]
            rec = 1
        for i in range(n_steps):
            t = t0 + i * dt
            bloch_deriv(&d, &bc, &bh, t, s, k1)
            for j in range(6):
                tmp[j] = s[j] + 0.5 * dt * k1[j]
            bloch_deriv(&d, &bc, &bh, t + 0.5 * dt, tmp, k2)
            for j in range(6):
                tmp[j] = s[j] + 0.5 * dt * k2[j]
            bloch_deriv(&d, &bc, &bh, t + 0.5 * dt, tmp, k3)
            for j in range(6):
                tmp[j] = s[j] + dt * k3[j]
            bloch_deriv(&d, &bc, &bh, t + dt, tmp, k4)
            for j in range(6):
                s[j] = s[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            norm = sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2])
            if norm > max_norm:
                max_norm = norm
            if record and (i + 1) % stride == 0:
                z_record[rec] = s[2]
                rec += 1
        e1 = energy(&d, t0 + n_steps * dt, s[2])
    return (s[0], s[1], s[2], s[3], s[4], s[5], e0, e1, max_norm)


def jacobi_eigh(cnp.ndarray m, double tol, int max_sweeps):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns (eigenvalues unsorted, eigenvectors as columns, sweeps used,
    converged flag).
    """
    cdef Py_ssize_t n = m.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a_arr = np.array(m, dtype=np.complex128, order="C", copy=True)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = a_arr
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, scale, mag, theta, t, c, sn, app, aqq
    cdef double complex ph, apk, aqk, akp, akq, g10, g11
    cdef bint converged = False

    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), v_arr, 0, True

    with nogil:
        while True:
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += 2.0 * (a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag)
            off = sqrt(off)
            if off <= tol * scale:
                converged = True
                break
            if sweep >= max_sweeps:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    mag = sqrt(a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag)
                    if mag == 0.0:
                        continue
                    ph = a[p, q] / mag
                    app = a[p, p].real
                    aqq = a[q, q].real
                    theta = (aqq - app) / (2.0 * mag)
                    if theta >= 0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    sn = t * c
                    # G = diag(1, conj(ph)) @ [[c, s], [-s, c]]
                    g10 = -sn * ph.conjugate()
                    g11 = c * ph.conjugate()
                    # columns: A[:, (p, q)] <- A[:, (p, q)] @ G
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = akp * c + akq * g10
                        a[k, q] = akp * sn + akq * g11
                    # rows: A[(p, q), :] <- G^H @ A[(p, q), :]
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk + g10.conjugate() * aqk
                        a[q, k] = sn * apk + g11.conjugate() * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = akp * c + akq * g10
                        v[k, q] = akp * sn + akq * g11
    w = np.array([a_arr[k, k].real for k in range(n)])
    return w, v_arr, sweep, converged
