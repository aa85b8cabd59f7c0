"""Pure-NumPy implementations of the solver hot kernels.

The compiled twin in ``_ckernels.pyx`` implements the same contract with the
same eigenvalue cutoff; both must agree to near machine precision on any
input (see tests/test_backends.py).
"""

from __future__ import annotations

import numpy as np

NAME = "python"

# Relative eigenvalue cutoff used inside the solver sweeps.  The iteration
# runs on the compressed, positive-definite support subspace, so this acts
# only as a roundoff guard and is tighter than the public support cutoff.
EIG_CUTOFF = 1e-14


def _power(w, v, expo):
    wmax = float(w[-1])
    fw = np.zeros_like(w)
    if wmax > 0.0:
        on = w > wmax * EIG_CUTOFF
        fw[on] = w[on] ** expo
    return (v * fw) @ v.conj().T, fw


def center_sweep(sigma, wpows, probs, z, spow):
    """One pass of the weighted-center maps over all symbols.

    Arguments: sigma (k,k) Hermitian PSD; wpows (m,k,k) the pre-powered
    channel outputs W(x)^(alpha/z); probs (m,); z the outer exponent;
    spow = (1-alpha)/(2z) the one-sided sigma exponent.

    Returns (phi_d, phi_t, q) with G_x = (sigma^spow W_x^pow sigma^spow)^z,
    q[x] = Tr G_x, phi_d = sum_x probs[x] G_x / q[x] (terms with q[x] <= 0
    are skipped; callers must inspect q), phi_t = sum_x probs[x] G_x.
    """
    sigma = np.ascontiguousarray(sigma, dtype=complex)
    wpows = np.ascontiguousarray(wpows, dtype=complex)
    probs = np.asarray(probs, dtype=float)
    k = sigma.shape[0]
    w, v = np.linalg.eigh(sigma)
    s_half, _ = _power(w, v, spow)
    phi_d = np.zeros((k, k), dtype=complex)
    phi_t = np.zeros((k, k), dtype=complex)
    q = np.zeros(len(probs))
    for x in range(len(probs)):
        a = s_half @ wpows[x] @ s_half
        a = 0.5 * (a + a.conj().T)
        u, uv = np.linalg.eigh(a)
        g, fu = _power(u, uv, z)
        qx = float(fu.sum())
        q[x] = qx
        phi_t += probs[x] * g
        if qx > 0.0:
            phi_d += (probs[x] / qx) * g
    return phi_d, phi_t, q


def q_sweep(sigma, wpows, z, spow):
    """Tr (sigma^spow W_x^pow sigma^spow)^z for every symbol (values only)."""
    sigma = np.ascontiguousarray(sigma, dtype=complex)
    wpows = np.ascontiguousarray(wpows, dtype=complex)
    w, v = np.linalg.eigh(sigma)
    s_half, _ = _power(w, v, spow)
    q = np.zeros(wpows.shape[0])
    for x in range(wpows.shape[0]):
        a = s_half @ wpows[x] @ s_half
        u = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
        umax = float(u[-1])
        if umax > 0.0:
            on = u > umax * EIG_CUTOFF
            q[x] = float(np.sum(u[on] ** z))
    return q
