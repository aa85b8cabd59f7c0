"""Shared test utilities: seeded generators and scalar oracles."""

import numpy as np

from renyicq.channels import GcqChannel, InputDistribution
from renyicq.operators import HermitianOperator


def random_herm(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(0.5 * (g + g.conj().T))


def random_state_mat(rng, dim, rank=None):
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def diagonal_channel(rng, dim=3, symbols=3):
    """Simultaneously diagonal cq channel with its stochastic matrix."""
    rows = rng.dirichlet(np.ones(dim), size=symbols)
    outs = {str(i): HermitianOperator(np.diag(rows[i]).astype(complex))
            for i in range(symbols)}
    weights = rng.dirichlet(np.ones(symbols))
    w = GcqChannel(outs)
    p = InputDistribution({str(i): weights[i] for i in range(symbols)})
    return w, p, rows, weights


def classical_q_scalar(pvec, qvec, alpha):
    """Independent scalar oracle for the commuting power trace."""
    pvec = np.asarray(pvec, dtype=float)
    qvec = np.asarray(qvec, dtype=float)
    on = (pvec > 0) & (qvec > 0)
    return float(np.sum(pvec[on] ** alpha * qvec[on] ** (1.0 - alpha)))


def scalar_center_map(rows, weights, qvec, alpha):
    """One application of the per-symbol-normalized center map on vectors."""
    rows = np.asarray(rows, dtype=float)
    qvec = np.asarray(qvec, dtype=float)
    out = np.zeros_like(qvec)
    for w_x, row in zip(weights, rows):
        terms = row ** alpha * qvec ** (1.0 - alpha)
        out += w_x * terms / terms.sum()
    return out
