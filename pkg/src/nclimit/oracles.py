"""
Brute-force cross-checks that share no code path with the fast routines.

The Fock oracle writes every sector as an explicit symmetrised tensor in the
orthonormal basis ``e_i = delta_i / sqrt(w_i)`` of the sampled one-particle
space, so that ``a^+(g_1)...a^+(g_n)|0>`` has components
``(n!)^(-1/2) sum_sigma prod_j sqrt(w) g_sigma(j)``. Cost is ``N^n`` per
sector; use only on tiny grids.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

__all__ = ["eight_point_nodes", "dense_fock_state", "dense_annihilate", "dense_inner", "dense_norm"]


def eight_point_nodes(k_max: float = 2.0):
    """2 x 2 x 2 Gauss--Legendre nodes on ``[-k_max, k_max]^3`` with the ``(2 pi)^-3`` measure."""
    from numpy.polynomial.legendre import leggauss

    from .smearing import QuadratureNodes

    x, w = leggauss(2)
    x = k_max * x
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    W = (w[:, None, None] * w[None, :, None] * w[None, None, :]).ravel() * k_max**3 / (2 * math.pi) ** 3
    return QuadratureNodes(np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1), W)


def _coords(g, weights):
    return np.sqrt(weights) * np.asarray(g.samples, dtype=complex)


def dense_fock_state(v) -> dict:
    """``{n: tensor of shape (N,)*n}`` for a :class:`~nclimit.fock.FockVector`."""
    w = v.nodes.weights
    N = w.size
    out = {}
    for coef, factors in v.terms:
        n = len(factors)
        if n == 0:
            t = np.array(1.0 + 0j)
        else:
            t = np.zeros((N,) * n, dtype=complex)
            vecs = [_coords(g, w) for g in factors]
            for perm in itertools.permutations(range(n)):
                prod = vecs[perm[0]]
                for j in perm[1:]:
                    prod = np.multiply.outer(prod, vecs[j])
                t = t + prod
            t = t / math.sqrt(math.factorial(n))
        out[n] = out.get(n, 0) + coef * t
    return out


def dense_annihilate(F, state: dict, weights) -> dict:
    """``a(F)`` on explicit tensors: ``sqrt(n) sum_i conj(phi_i) Psi_(i, ...)``."""
    phi = np.conj(np.sqrt(weights) * np.asarray(F.samples, dtype=complex))
    out = {}
    for n, t in state.items():
        if n == 0:
            continue
        out[n - 1] = out.get(n - 1, 0) + math.sqrt(n) * np.tensordot(phi, t, axes=(0, 0))
    return out


def dense_inner(a: dict, b: dict) -> complex:
    return complex(sum(np.vdot(a[n], b[n]) for n in set(a) & set(b)))


def dense_norm(a: dict) -> float:
    return math.sqrt(max(dense_inner(a, a).real, 0.0))
