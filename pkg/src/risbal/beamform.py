"""Composite downlink channels and leakage-based transmit beamforming.

Channel rows are stored as the per-user row vectors h^H each user actually
experiences: cell-1 rows pass through the surface, cell-2 rows are the
direct link plus the phase-offset reflected term. The precoder maximizes
each user's signal-to-leakage-and-noise ratio under equal per-user power;
BS 2 must be fed the direct rows only, since it knows nothing about the
surface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelSet
from .errors import DimensionError, NumericalError

__all__ = ["Beamformer", "composite_cell1", "composite_cell2", "slnr_beamformer"]


@dataclass(frozen=True)
class Beamformer:
    """Precoding matrix F (N, K) with trace(F^H F) = power_budget."""

    F: np.ndarray
    power_budget: float


def composite_cell1(phi: np.ndarray, channels: ChannelSet) -> np.ndarray:
    """Rows phi^H A_1k for every cell-1 user, shape (K1, N1)."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (channels.G1.shape[0],):
        raise DimensionError(
            f"phi has {phi.size} entries, surface has {channels.G1.shape[0]}"
        )
    # phi^H diag(h^H) G == (conj(phi) * conj(h))^T G
    return (np.conj(phi)[None, :] * np.conj(channels.h_r1)) @ channels.G1


def composite_cell2(phi: np.ndarray, channels: ChannelSet) -> np.ndarray:
    """Rows h_d^H + e^{j theta} phi^H A_2k for every cell-2 user, shape (K2, N2)."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.shape != (channels.G2.shape[0],):
        raise DimensionError(
            f"phi has {phi.size} entries, surface has {channels.G2.shape[0]}"
        )
    reflected = (np.conj(phi)[None, :] * np.conj(channels.h_r2)) @ channels.G2
    return np.conj(channels.h_d2) + np.exp(1j * channels.theta) * reflected


def slnr_beamformer(rows: np.ndarray, power_budget: float, noise_var: float) -> Beamformer:
    """Leakage-based precoder with equal per-user power.

    For user k with channel row h_k^H:
        v_k = (sum_{j != k} h_j h_j^H + (K noise_var / P) I)^{-1} h_k
        f_k = sqrt(P / K) v_k / ||v_k||
    """
    rows = np.asarray(rows, dtype=np.complex128)
    if rows.ndim != 2 or rows.shape[0] < 1:
        raise DimensionError("rows must be a (K, N) matrix with K >= 1")
    if power_budget <= 0 or noise_var <= 0:
        raise ValueError("power budget and noise variance must be positive")
    K, N = rows.shape
    cols = np.conj(rows)                       # h_k as columns of rows index k
    gram = cols.T @ rows                       # sum_j h_j h_j^H, (N, N)
    reg = (K * noise_var / power_budget) * np.eye(N)
    F = np.empty((N, K), dtype=np.complex128)
    per_user = power_budget / K
    for k in range(K):
        h = cols[k]
        leak = gram - np.outer(h, np.conj(h)) + reg
        try:
            v = np.linalg.solve(leak, h)
        except np.linalg.LinAlgError as exc:  # regularizer makes this unreachable
            raise NumericalError(f"leakage system solve failed: {exc}") from exc
        norm = np.linalg.norm(v)
        if norm == 0.0 or not np.isfinite(norm):
            raise NumericalError("degenerate beam direction")
        F[:, k] = np.sqrt(per_user) * v / norm
    return Beamformer(F=F, power_budget=float(power_budget))
