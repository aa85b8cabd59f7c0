"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback.  ``RENYICQ_BACKEND=python`` or ``=compiled`` forces a choice
(the latter raises if the extension is missing).  :func:`use` switches the
active backend at runtime, which the benchmark and the twin-consistency
tests rely on.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import py_kernels

_impls = {"python": py_kernels}
try:
    from . import _ckernels  # built by setup.py build_ext --inplace
    _impls["compiled"] = _ckernels
except ImportError:
    _ckernels = None

_forced = os.environ.get("RENYICQ_BACKEND", "").strip().lower()
if _forced:
    if _forced not in _impls:
        raise ImportError(
            f"RENYICQ_BACKEND={_forced!r} requested but only {sorted(_impls)} available"
        )
    _active = _impls[_forced]
else:
    _active = _impls.get("compiled", py_kernels)


def available_backends():
    return tuple(sorted(_impls))


def active_backend() -> str:
    return _active.NAME


def use(name: str):
    """Switch the active backend ('python' or 'compiled')."""
    global _active
    if name not in _impls:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(_impls)}")
    _active = _impls[name]


@contextmanager
def temporarily(name: str):
    previous = _active.NAME
    use(name)
    try:
        yield
    finally:
        use(previous)


def center_sweep(sigma, wpows, probs, z, spow):
    return _active.center_sweep(sigma, wpows, probs, z, spow)


def q_sweep(sigma, wpows, z, spow):
    return _active.q_sweep(sigma, wpows, z, spow)
