"""Rate metrics: capacity, fixed-precoder rates, linear-equalizer sum rate.

All rates are spectral efficiencies in bit/s/Hz. Log-determinants of
``I + S`` with Hermitian PSD ``S`` go through a Cholesky factorization for
stability, taking whichever side of the Sylvester identity is smaller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equalization import Equalizer, effective_channels
from .errors import InvalidInput, NumericalError
from .precoding import Precoder, beam_modes, precoder_from_modes, waterfilling

_FORM_AGREEMENT_RTOL = 1e-9


@dataclass(frozen=True)
class RateReport:
    """Every rate metric of one channel realization, bit/s/Hz.

    ``r_lin_geo`` uses the geometric equalizer, ``r_lin_opt_eq`` the
    SINR-optimal linear equalizer, both under the geometric precoder.
    ``per_stream_sinr`` holds the geometric equalizer's stream SINRs.
    """

    r_opt: float
    r_per: float
    r_lin_geo: float
    r_lin_opt_eq: float
    r_upper: float
    per_stream_sinr: tuple[float, ...] = ()


def logdet2_eye_plus(s: np.ndarray) -> float:
    """``log2 |I + S|`` via Cholesky, S Hermitian positive semidefinite."""
    a = np.eye(s.shape[0]) + s
    try:
        chol = np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Cholesky of I + S failed: {exc}") from exc
    return float(2.0 * np.sum(np.log2(np.real(np.diag(chol)))))


def _logdet_rate(f: np.ndarray, noise_power_w: float) -> float:
    """``log2 |I + F F^H / noise|`` using the smaller Gram side."""
    if f.shape[1] <= f.shape[0]:
        s = f.conj().T @ f
    else:
        s = f @ f.conj().T
    return logdet2_eye_plus(s / noise_power_w)


def capacity(h: np.ndarray, total_power_w: float, noise_power_w: float) -> float:
    """Point-to-point capacity under a sum-power constraint.

    Computes both the eigenvalue form (sum of per-beam logs with waterfilled
    powers) and the log-determinant form with the SVD precoder, asserts they
    agree to 1e-9 relative, and returns the value.
    """
    eigvals, eigvecs = beam_modes(h)
    allocation = waterfilling(eigvals, total_power_w, noise_power_w)
    powers = np.asarray(allocation.powers_w)
    rate_eigen = float(np.sum(np.log2(1.0 + eigvals * powers / noise_power_w)))

    precoder = precoder_from_modes(eigvals, eigvecs, total_power_w, noise_power_w)
    rate_det = _logdet_rate(h @ precoder.matrix, noise_power_w)
    if abs(rate_det - rate_eigen) > _FORM_AGREEMENT_RTOL * max(rate_eigen, 1.0):
        raise NumericalError(
            f"capacity forms disagree: determinant {rate_det!r} vs "
            f"eigenvalue {rate_eigen!r}"
        )
    return rate_eigen


def rate_ideal_rx(h: np.ndarray, precoder: Precoder, noise_power_w: float) -> float:
    """Achievable rate for a fixed precoder with an ideal receiver."""
    f = h @ precoder.matrix
    if not np.any(f):
        return 0.0
    return _logdet_rate(f, noise_power_w)


def sinr_per_stream(
    equalizer: Equalizer,
    h_blocks: "list[np.ndarray] | tuple[np.ndarray, ...]",
    precoder: Precoder,
    noise_power_w: float,
) -> list[float]:
    """Per-stream SINR of a linear equalizer on the true channel.

    Stream l: ``|w_l^H f_l|^2 / (sum_{i != l} |w_l^H f_i|^2 + noise ||w_l||^2)``
    with effective channels ``f_i = H_i g_i``.
    """
    w = equalizer.matrix
    f = effective_channels(h_blocks, precoder)
    if w.shape[0] != f.shape[1]:
        raise InvalidInput(
            f"equalizer has {w.shape[0]} streams but precoder sends {f.shape[1]}"
        )
    wf = w @ f
    row_norms_sq = np.einsum("ij,ij->i", w.conj(), w).real
    sinrs = []
    for l in range(f.shape[1]):
        cross = np.abs(wf[l]) ** 2
        signal = cross[l]
        interference = float(np.sum(cross)) - float(signal)
        sinrs.append(float(signal / (interference + noise_power_w * row_norms_sq[l])))
    return sinrs


def rate_linear(sinrs: "list[float] | np.ndarray") -> float:
    """Sum rate of independently decoded streams."""
    if any(g < 0.0 for g in sinrs):
        raise InvalidInput("SINRs must be nonnegative")
    return float(sum(math.log2(1.0 + g) for g in sinrs))


def rate_upper_geo(rx_steering_matrix: np.ndarray, normalized_noise_power: float) -> float:
    """Upper bound on the geometric-model rate from the steering Gram matrix.

    ``log2 |I + A^H A / sigma|``; maximized over swarm layouts when the
    steering set is orthogonal, where it equals ``NS log2(1 + Nr / sigma)``.
    """
    if normalized_noise_power <= 0.0:
        raise InvalidInput("normalized noise power must be positive")
    a = rx_steering_matrix
    gram = a.conj().T @ a
    return logdet2_eye_plus(gram / normalized_noise_power)
