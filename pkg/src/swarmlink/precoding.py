"""Transmit precoders: centralized SVD baseline and distributed geometric.

The SVD precoder needs the instantaneous stacked channel and a sum-power
budget; it is the capacity-achieving benchmark, not a feasible swarm scheme.
The geometric precoder is block diagonal, phase-only within each block, and
needs nothing but each satellite's own departure angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ArrayConfig, tx_steering
from .errors import InvalidInput, NumericalError
from .geometry import SwarmGeometry

SVD_OPTIMAL = "svd_optimal"
GEOMETRIC_DISTRIBUTED = "geometric_distributed"

# Relative eigenvalue threshold below which a beam is treated as numerical
# noise of the Gram decomposition rather than a usable channel mode.
_RANK_REL_TOL = 1e-12


@dataclass(frozen=True)
class PowerAllocation:
    """Waterfilling result. ``powers_w`` follows the input eigenvalue order."""

    powers_w: tuple[float, ...]
    water_level_w: float
    total_budget_w: float


@dataclass(frozen=True, eq=False)
class Precoder:
    """Precoding matrix plus the per-satellite power budgets behind it."""

    matrix: np.ndarray
    kind: str
    per_sat_power_w: tuple[float, ...]


def waterfilling(
    eigenvalues: "np.ndarray | list[float]",
    total_power_w: float,
    noise_power_w: float,
) -> PowerAllocation:
    """Exact waterfilling over parallel channels with gains ``eigenvalues``.

    Active-set search: with eigenvalues sorted descending, the water level
    for the k strongest channels is ``(P + sum(noise/lam_i)) / k``; the
    optimal active set is the largest k whose weakest member still gets
    positive power. Exact to machine precision, no iteration tolerance.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if total_power_w <= 0.0:
        raise InvalidInput("total power must be positive")
    if lam.size == 0 or np.all(lam <= 0.0):
        raise InvalidInput("waterfilling needs at least one positive eigenvalue")

    order = np.argsort(lam)[::-1]
    lam_sorted = lam[order]
    num_positive = int(np.sum(lam_sorted > 0.0))

    inv_gain = noise_power_w / lam_sorted[:num_positive]
    cumulative = np.cumsum(inv_gain)
    k_range = np.arange(1, num_positive + 1)
    levels = (total_power_w + cumulative) / k_range
    # Largest k whose weakest active channel keeps positive power.
    active_mask = levels > inv_gain
    k = int(np.max(k_range[active_mask]))
    level = float(levels[k - 1])

    powers_sorted = np.zeros_like(lam_sorted)
    powers_sorted[:k] = level - inv_gain[:k]
    powers = np.empty_like(powers_sorted)
    powers[order] = powers_sorted
    return PowerAllocation(
        powers_w=tuple(float(p) for p in powers),
        water_level_w=level,
        total_budget_w=total_power_w,
    )


def gram_eigendecomposition(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and eigenvectors of ``h^H h``.

    The eigenvalues are the squared singular values of ``h`` and the
    eigenvectors its right singular vectors. Tiny negative values from
    rounding are clamped to zero.
    """
    gram = h.conj().T @ h
    try:
        eigvals, eigvecs = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    eigvals = np.maximum(eigvals[::-1], 0.0)
    return eigvals, eigvecs[:, ::-1]


def beam_modes(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Usable channel modes of ``h``: eigenvalues of ``h^H h`` and vectors.

    Modes below the numerical-rank threshold are dropped; raises on an
    all-zero channel.
    """
    eigvals, eigvecs = gram_eigendecomposition(h)
    if eigvals[0] <= 0.0:
        raise InvalidInput("channel matrix is zero")
    usable = eigvals > _RANK_REL_TOL * eigvals[0]
    return eigvals[usable], eigvecs[:, usable]


def precoder_from_modes(
    eigvals: np.ndarray,
    eigvecs: np.ndarray,
    total_power_w: float,
    noise_power_w: float,
) -> Precoder:
    """Waterfilled precoder over precomputed channel modes."""
    allocation = waterfilling(eigvals, total_power_w, noise_power_w)
    powers = np.asarray(allocation.powers_w)
    active = powers > 0.0
    matrix = eigvecs[:, active] * np.sqrt(powers[active])
    return Precoder(
        matrix=matrix,
        kind=SVD_OPTIMAL,
        per_sat_power_w=(total_power_w,),
    )


def svd_precoder(
    h: np.ndarray,
    total_power_w: float,
    noise_power_w: float,
) -> Precoder:
    """Capacity-achieving precoder: right singular vectors, waterfilled powers.

    Only the waterfilling-active beams are kept as columns, so the trace of
    ``G G^H`` meets the sum-power budget with equality. Per-satellite power
    constraints are not enforced; this is the centralized benchmark.
    """
    eigvals, eigvecs = beam_modes(h)
    return precoder_from_modes(eigvals, eigvecs, total_power_w, noise_power_w)


def geometric_precoder(
    swarm: SwarmGeometry,
    arrays: ArrayConfig,
    per_sat_power_w: "float | list[float]",
) -> Precoder:
    """Distributed block-diagonal precoder from departure angles only.

    Satellite block l is ``sqrt(rho_l / Nt) * b_l`` in column l and zero
    elsewhere, so each satellite needs only its own stream and meets its own
    power constraint with equality. Every entry in a block has the same
    magnitude (phase-only beam steering).
    """
    ns = swarm.num_satellites
    nt = arrays.num_tx_per_sat
    if np.isscalar(per_sat_power_w):
        budgets = [float(per_sat_power_w)] * ns
    else:
        budgets = [float(p) for p in per_sat_power_w]
        if len(budgets) != ns:
            raise InvalidInput(
                f"expected {ns} per-satellite powers, got {len(budgets)}"
            )
    if any(p < 0.0 for p in budgets):
        raise InvalidInput("per-satellite powers must be nonnegative")

    matrix = np.zeros((ns * nt, ns), dtype=complex)
    for l, (sat, rho) in enumerate(zip(swarm.satellites, budgets)):
        beam = tx_steering(sat.aod_rad, nt)
        matrix[l * nt : (l + 1) * nt, l] = math.sqrt(rho / nt) * beam
    return Precoder(
        matrix=matrix,
        kind=GEOMETRIC_DISTRIBUTED,
        per_sat_power_w=tuple(budgets),
    )
