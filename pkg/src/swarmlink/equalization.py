"""Linear receive equalizers for the block-diagonal distributed precoder.

Both equalizers are regularized matched-filter banks. The optimal one uses
the instantaneous effective channels (true CSI); the geometric one needs
only the arrival angles and the operating SNR. Rows of the equalizer matrix
store the conjugate-transposed combining vectors, so ``W @ y`` yields the
per-stream estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidInput, NumericalError
from .precoding import Precoder

OPTIMAL_LINEAR = "optimal_linear"
GEOMETRIC = "geometric"


@dataclass(frozen=True, eq=False)
class Equalizer:
    """Equalizer matrix of shape (num_streams, num_rx); row l is w_l^H."""

    matrix: np.ndarray
    kind: str
    normalized_noise_power: float | None = None


def effective_channels(h_blocks: "list[np.ndarray] | tuple[np.ndarray, ...]", precoder: Precoder) -> np.ndarray:
    """Per-stream effective channel columns ``H G`` (num_rx x num_streams)."""
    stacked = np.hstack(h_blocks)
    if stacked.shape[1] != precoder.matrix.shape[0]:
        raise InvalidInput(
            f"channel has {stacked.shape[1]} transmit antennas but precoder "
            f"expects {precoder.matrix.shape[0]}"
        )
    return stacked @ precoder.matrix


def _regularized_matched_bank(columns: np.ndarray, noise_power: float) -> np.ndarray:
    """Rows ``c_l^H (C C^H + noise I)^{-1}`` for the columns of ``C``.

    Evaluated through the push-through identity as the small Hermitian
    system ``(C^H C + noise I) X = C^H``, which is algebraically identical
    and keeps the solve at stream count rather than antenna count.
    """
    gram = columns.conj().T @ columns
    gram[np.diag_indices_from(gram)] += noise_power
    try:
        return scipy.linalg.solve(gram, columns.conj().T, assume_a="pos")
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"equalizer solve failed: {exc}") from exc


def optimal_equalizer(
    h_blocks: "list[np.ndarray] | tuple[np.ndarray, ...]",
    precoder: Precoder,
    noise_power_w: float,
) -> Equalizer:
    """SINR-optimal linear equalizer for the given channel and precoder.

    Row l maximizes the generalized Rayleigh quotient of stream l; it is the
    MMSE direction ``f_l^H (sum_i f_i f_i^H + noise I)^{-1}`` built from the
    effective channels ``f_i = H_i g_i``.
    """
    if noise_power_w <= 0.0:
        raise InvalidInput("noise power must be positive")
    f = effective_channels(h_blocks, precoder)
    return Equalizer(
        matrix=_regularized_matched_bank(f, noise_power_w),
        kind=OPTIMAL_LINEAR,
    )


def geometric_equalizer(
    rx_steering_matrix: np.ndarray,
    normalized_noise_power: float,
) -> Equalizer:
    """Equalizer from arrival angles and SNR alone, no instantaneous CSI.

    ``W = A^H (A A^H + sigma I)^{-1}`` where A stacks the receive steering
    vectors and sigma is the noise power normalized by the beam-domain gain
    ``sigma_alpha^2 Nt rho``. Two realizations with the same geometry yield
    the same equalizer regardless of fading.
    """
    if normalized_noise_power <= 0.0:
        raise InvalidInput("normalized noise power must be positive")
    return Equalizer(
        matrix=_regularized_matched_bank(rx_steering_matrix, normalized_noise_power),
        kind=GEOMETRIC,
        normalized_noise_power=normalized_noise_power,
    )
