# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled statevector kernels.

Amplitude buffers are complex128 arrays viewed as interleaved float64
(re, im, re, im, ...). All kernels mutate the buffer in place.
"""
from libc.math cimport cos, sin


cdef inline void _phase(double[::1] psi, const double[::1] costs, double angle) noexcept nogil:
    cdef Py_ssize_t i, dim = costs.shape[0]
    cdef double th, c, s, re, im
    if angle == 0.0:
        return
    for i in range(dim):
        th = angle * costs[i]
        c = cos(th)
        s = sin(th)
        re = psi[2 * i]
        im = psi[2 * i + 1]
        # multiply by exp(-i th)
        psi[2 * i] = c * re + s * im
        psi[2 * i + 1] = c * im - s * re


cdef inline void _mixer(double[::1] psi, int n, double beta) noexcept nogil:
    cdef Py_ssize_t dim = (<Py_ssize_t> 1) << n
    cdef Py_ssize_t stride, start, i, j
    cdef double c, s, ar, ai, br, bi
    cdef int q
    if beta == 0.0:
        return
    c = cos(beta)
    s = sin(beta)
    for q in range(n):
        stride = (<Py_ssize_t> 1) << q
        start = 0
        while start < dim:
            for i in range(start, start + stride):
                j = i + stride
                ar = psi[2 * i]
                ai = psi[2 * i + 1]
                br = psi[2 * j]
                bi = psi[2 * j + 1]
                # (a, b) -> (c a - i s b, c b - i s a)
                psi[2 * i] = c * ar + s * bi
                psi[2 * i + 1] = c * ai - s * br
                psi[2 * j] = c * br + s * ai
                psi[2 * j + 1] = c * bi - s * ar
            start += 2 * stride


def apply_phase(double[::1] psi, const double[::1] costs, double angle):
    with nogil:
        _phase(psi, costs, angle)


def apply_mixer(double[::1] psi, int n, double beta):
    with nogil:
        _mixer(psi, n, beta)


def apply_layers(double[::1] psi, const double[::1] costs, int n,
                 const double[::1] phase_angles, const double[::1] mixer_angles):
    """phase[0], mixer[0], phase[1], mixer[1], ... with an optional trailing phase."""
    cdef Py_ssize_t k, m = mixer_angles.shape[0], np_ = phase_angles.shape[0]
    if np_ != m and np_ != m + 1:
        raise ValueError("phase_angles must have len(mixer_angles) or len(mixer_angles) + 1 entries")
    with nogil:
        for k in range(m):
            _phase(psi, costs, phase_angles[k])
            _mixer(psi, n, mixer_angles[k])
        if np_ == m + 1:
            _phase(psi, costs, phase_angles[m])


def expectation(const double[::1] psi, const double[::1] costs):
    cdef Py_ssize_t i, dim = costs.shape[0]
    cdef double acc = 0.0, re, im
    with nogil:
        for i in range(dim):
            re = psi[2 * i]
            im = psi[2 * i + 1]
            acc += (re * re + im * im) * costs[i]
    return acc
