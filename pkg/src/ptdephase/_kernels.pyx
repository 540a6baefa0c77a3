# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same signatures and semantics as ``_kernels_py``."""
from libc.math cimport sin, tanh, exp, pow, fabs, floor, ceil, log, isinf, M_PI
from libc.stdlib cimport malloc, free

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef double XGK[8]
cdef double WGK[8]
cdef double WGS[4]
XGK[:] = [0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
          0.207784955007898467600689403773245, 0.0]
WGK[:] = [0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
          0.204432940075298892414161999234649, 0.209482141084727828012999174891714]
WGS[:] = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
          0.381830050505118944950369775488975, 0.417959183673469387755102040816327]

KIND_GAMMA1 = 0
KIND_PHI = 1


cdef struct Params:
    int kind
    double s
    double b
    bint zero_temp
    double tau
    double u1
    double p
    double pref
    int ipow


cdef inline double _coth(double y) nogil:
    if y < 1e-4:
        return 1.0 / y + y / 3.0 - y * y * y / 45.0
    return 1.0 / tanh(y)


cdef inline double _f(Params* P, double x, bint mapped) nogil:
    cdef double u, osc, h
    if mapped:
        u = P.u1 * pow(x, P.p)
    else:
        u = x
    if P.kind == 0:
        h = sin(0.5 * P.tau * u)
        osc = 2.0 * h * h
        if not P.zero_temp:
            osc *= _coth(0.5 * P.b * u)
    else:
        osc = sin(P.tau * u)
    if mapped:
        return P.pref * exp(-u) * osc / u
    if P.ipow == 0:
        return exp(-u) * osc
    if P.ipow == -1:
        return exp(-u) * osc / u
    if P.ipow == 1:
        return u * exp(-u) * osc
    return pow(u, P.s - 2.0) * exp(-u) * osc


cdef void _gk(Params* P, double lo, double hi, bint mapped, double* k, double* e) nogil:
    cdef double c = 0.5 * (lo + hi)
    cdef double h = 0.5 * (hi - lo)
    cdef double fc = _f(P, c, mapped)
    cdef double rk = WGK[7] * fc
    cdef double rg = WGS[3] * fc
    cdef int j
    cdef double f1, f2
    for j in range(7):
        f1 = _f(P, c - h * XGK[j], mapped)
        f2 = _f(P, c + h * XGK[j], mapped)
        rk += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            rg += WGS[j // 2] * (f1 + f2)
    k[0] = rk * h
    e[0] = fabs((rk - rg) * h)


cdef double _pairwise(double* a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, m
    cdef double acc
    if n <= 8:
        acc = 0.0
        for i in range(n):
            acc += a[i]
        return acc
    m = n // 2
    return _pairwise(a, m) + _pairwise(a + m, n - m)


def upper_limit(double s, double abs_tol):
    return max(40.0 + log(1.0 / abs_tol), 4.0 * s)


def tail_bound(int kind, double s, double b, double upper):
    cdef double base = pow(upper, s - 2.0) * exp(-upper)
    cdef double c
    if s > 2.0:
        base /= 1.0 - (s - 2.0) / upper
    if kind == 1:
        return base
    c = 1.0 if isinf(b) else 1.0 / tanh(0.5 * b * upper)
    return 2.0 * c * base


def bath_integral(int kind, double s, double b, double tau,
                  double rel_tol, double abs_tol, int max_panels):
    """Adaptive integral of the chosen kernel; see ``_kernels_py.bath_integral``."""
    if tau == 0.0:
        return 0.0, 0.0, 0, True
    cdef double upper = upper_limit(s, abs_tol)
    cdef double tail = tail_bound(kind, s, b, upper)
    cdef Params P
    cdef Py_ssize_t n, i, j, nsplit, n_new, cap = max_panels + 2
    cdef double width, total, errsum, tol, thr, mid
    cdef long nh, kk
    cdef bint converged = False
    cdef double* lo = <double*> malloc(cap * sizeof(double))
    cdef double* hi = <double*> malloc(cap * sizeof(double))
    cdef double* val = <double*> malloc(cap * sizeof(double))
    cdef double* err = <double*> malloc(cap * sizeof(double))
    cdef char* mp = <char*> malloc(cap * sizeof(char))
    cdef double* lo2 = <double*> malloc(cap * sizeof(double))
    cdef double* hi2 = <double*> malloc(cap * sizeof(double))
    cdef double* val2 = <double*> malloc(cap * sizeof(double))
    cdef double* err2 = <double*> malloc(cap * sizeof(double))
    cdef char* mp2 = <char*> malloc(cap * sizeof(char))
    cdef double* swp
    cdef char* swc
    try:
        if (lo == NULL or hi == NULL or val == NULL or err == NULL or mp == NULL or
                lo2 == NULL or hi2 == NULL or val2 == NULL or err2 == NULL or mp2 == NULL):
            raise MemoryError()
        # initial partition, identical to the numpy fallback
        if tau > 2.0:
            nh = <long> ceil(upper * tau / M_PI)
            kk = max(1, <long> ceil(2.0 * nh / max_panels))
            width = kk * M_PI / tau
            n = <Py_ssize_t> ceil(upper / width)
            if n > max_panels:
                return 0.0, float("inf"), n, False
            for i in range(n):
                lo[i] = i * width
                hi[i] = (i + 1) * width
            hi[n - 1] = upper
            if n > 1 and hi[n - 1] - lo[n - 1] <= 0.0:
                n -= 1
                hi[n - 1] = upper
        else:
            n = 0
            lo[0] = 0.0
            hi[0] = 1.0
            n = 1
            while hi[n - 1] < upper:
                lo[n] = hi[n - 1]
                hi[n] = min(2.0 * hi[n - 1], upper)
                n += 1
        for i in range(n):
            mp[i] = 0
        P.kind = kind
        P.s = s
        P.b = b
        P.zero_temp = isinf(b)
        P.tau = tau
        P.u1 = hi[0]
        P.p = 1.0 / s
        P.pref = P.p * pow(P.u1, s)
        P.ipow = <int> (s - 2.0) if (s == floor(s) and -1.0 <= s - 2.0 <= 1.0) else 99
        if s != floor(s):
            lo[0] = 0.0
            hi[0] = 1.0
            mp[0] = 1
        with nogil:
            for i in range(n):
                _gk(&P, lo[i], hi[i], mp[i], &val[i], &err[i])
            while True:
                total = _pairwise(val, n)
                errsum = _pairwise(err, n) + tail
                tol = max(abs_tol, rel_tol * fabs(total))
                if errsum <= tol:
                    converged = True
                    break
                thr = max(tol - tail, 0.0) / n
                nsplit = 0
                for i in range(n):
                    if err[i] > thr:
                        nsplit += 1
                n_new = n + nsplit
                if n_new > max_panels or nsplit == 0:
                    break
                j = 0
                for i in range(n):
                    if err[i] > thr:
                        mid = 0.5 * (lo[i] + hi[i])
                        lo2[j] = lo[i]; hi2[j] = mid; mp2[j] = mp[i]
                        _gk(&P, lo2[j], hi2[j], mp2[j], &val2[j], &err2[j])
                        j += 1
                        lo2[j] = mid; hi2[j] = hi[i]; mp2[j] = mp[i]
                        _gk(&P, lo2[j], hi2[j], mp2[j], &val2[j], &err2[j])
                        j += 1
                    else:
                        lo2[j] = lo[i]; hi2[j] = hi[i]; mp2[j] = mp[i]
                        val2[j] = val[i]; err2[j] = err[i]
                        j += 1
                n = n_new
                swp = lo; lo = lo2; lo2 = swp
                swp = hi; hi = hi2; hi2 = swp
                swp = val; val = val2; val2 = swp
                swp = err; err = err2; err2 = swp
                swc = mp; mp = mp2; mp2 = swc
        return total, errsum, n, converged
    finally:
        free(lo); free(hi); free(val); free(err); free(mp)
        free(lo2); free(hi2); free(val2); free(err2); free(mp2)


def discrete_sums(omega, g_sq, coth, times):
    """Discrete-mode bath sums; see ``_kernels_py.discrete_sums``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(omega, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w2 = np.ascontiguousarray(g_sq, dtype=np.float64) / (w * w)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wc = w2 * np.ascontiguousarray(coth, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ts = np.ascontiguousarray(np.atleast_1d(times), dtype=np.float64)
    cdef Py_ssize_t nk = w.shape[0], nt = ts.shape[0], i, k
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g1 = np.empty(nt)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ph = np.empty(nt)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ta = np.empty(nk)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tb = np.empty(nk)
    cdef double t, arg, h
    cdef double* pw = &w[0] if nk else NULL
    cdef double* pw2 = &w2[0] if nk else NULL
    cdef double* pwc = &wc[0] if nk else NULL
    cdef double* pa = &ta[0] if nk else NULL
    cdef double* pb = &tb[0] if nk else NULL
    with nogil:
        for i in range(nt):
            t = ts[i]
            for k in range(nk):
                arg = pw[k] * t
                h = sin(0.5 * arg)
                pa[k] = pwc[k] * (2.0 * h * h)
                pb[k] = pw2[k] * sin(arg)
            g1[i] = _pairwise(pa, nk)
            ph[i] = _pairwise(pb, nk)
    return g1, ph
