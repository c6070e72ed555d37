"""Backend selection for the statevector hot loops.

The compiled core (``_kernels_c``, built from Cython) is used when it imports;
otherwise the numpy implementation in ``_kernels_py`` is used. Set
``SKQAOA_KERNELS=python`` to force the fallback, ``SKQAOA_KERNELS=c`` to make a
missing extension an error.

All functions take complex128 C-contiguous amplitude arrays and mutate them in
place.
"""

import os
from types import SimpleNamespace

import numpy as np

from . import _kernels_py

try:
    from . import _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _wrap_c(mod):
    def as_real(psi):
        if psi.dtype != np.complex128 or not psi.flags.c_contiguous:
            raise TypeError("amplitudes must be a C-contiguous complex128 array")
        return psi.view(np.float64)

    def costs_arr(costs):
        return np.ascontiguousarray(costs, dtype=np.float64)

    return SimpleNamespace(
        name="cython",
        apply_phase=lambda psi, costs, angle: mod.apply_phase(as_real(psi), costs_arr(costs), float(angle)),
        apply_mixer=lambda psi, n, beta: mod.apply_mixer(as_real(psi), int(n), float(beta)),
        apply_layers=lambda psi, costs, n, phases, mixers: mod.apply_layers(
            as_real(psi),
            costs_arr(costs),
            int(n),
            np.ascontiguousarray(phases, dtype=np.float64),
            np.ascontiguousarray(mixers, dtype=np.float64),
        ),
        expectation=lambda psi, costs: float(mod.expectation(as_real(psi), costs_arr(costs))),
    )


_PY = SimpleNamespace(
    name="numpy",
    apply_phase=_kernels_py.apply_phase,
    apply_mixer=_kernels_py.apply_mixer,
    apply_layers=_kernels_py.apply_layers,
    expectation=_kernels_py.expectation,
)
_C = _wrap_c(_kernels_c) if _kernels_c is not None else None


def available_backends():
    return ["cython", "numpy"] if _C is not None else ["numpy"]


def get_backend(name=None):
    """Return the kernel namespace for ``name`` ("cython", "numpy" or None for the default)."""
    if name is None:
        return _ACTIVE
    if name == "numpy":
        return _PY
    if name == "cython":
        if _C is None:
            raise ImportError("compiled kernels are not built; run `pip install -e .`")
        return _C
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    choice = os.environ.get("SKQAOA_KERNELS", "auto").lower()
    if choice in ("python", "numpy"):
        return _PY
    if choice in ("c", "cython"):
        return get_backend("cython")
    return _C if _C is not None else _PY


_ACTIVE = _select()
BACKEND = _ACTIVE.name

apply_phase = _ACTIVE.apply_phase
apply_mixer = _ACTIVE.apply_mixer
apply_layers = _ACTIVE.apply_layers
expectation = _ACTIVE.expectation
