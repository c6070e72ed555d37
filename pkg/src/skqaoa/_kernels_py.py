"""Pure-numpy reference kernels; same in-place contract as the compiled core."""

import numpy as np


def apply_phase(psi, costs, angle):
    if angle != 0.0:
        psi *= np.exp(-1j * angle * costs)


def apply_mixer(psi, n, beta):
    if beta == 0.0:
        return
    c, s = np.cos(beta), np.sin(beta)
    for q in range(n):
        view = psi.reshape(-1, 2, 1 << q)
        a = view[:, 0, :].copy()
        b = view[:, 1, :]
        view[:, 0, :] *= c
        view[:, 0, :] -= 1j * s * b
        b *= c
        b -= 1j * s * a


def apply_layers(psi, costs, n, phase_angles, mixer_angles):
    m = len(mixer_angles)
    if len(phase_angles) not in (m, m + 1):
        raise ValueError("phase_angles must have len(mixer_angles) or len(mixer_angles) + 1 entries")
    for k in range(m):
        apply_phase(psi, costs, phase_angles[k])
        apply_mixer(psi, n, mixer_angles[k])
    if len(phase_angles) == m + 1:
        apply_phase(psi, costs, phase_angles[m])


def expectation(psi, costs):
    return float(np.dot(psi.real**2 + psi.imag**2, costs))
