"""Random MIMO channel and noise generation.

SNR convention: with unit-energy symbols and unit-variance channel entries,
`snr_db` is the per-user average receive SNR at each antenna, so
noise_var = 10**(-snr_db/10). Block fading: one H per coded frame.

All randomness flows from numpy Generators seeded by SeedSequence splits of a
single master seed (see sim.point_rng), which is what makes experiments
reproducible and worker-count independent.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch


@dataclass
class ChannelRealization:
    h: np.ndarray          # (n_rx, n_streams) complex
    snr_db: float
    noise_var: float

    @property
    def n_rx(self) -> int:
        return self.h.shape[0]

    @property
    def n_streams(self) -> int:
        return self.h.shape[1]


def noise_variance(snr_db: float) -> float:
    return float(10.0 ** (-snr_db / 10.0))


def sample_channel(
    n_rx: int,
    n_streams: int,
    snr_db: float,
    rng: np.random.Generator,
    per_user_gain: np.ndarray | None = None,
) -> ChannelRealization:
    """Draw an i.i.d. circularly-symmetric complex Gaussian channel.

    Entries have unit variance (0.5 per real dimension). `per_user_gain`
    optionally scales each user's column amplitude, which is how per-user
    SNR offsets are realized without touching the common noise floor.
    """
    if n_rx < 1 or n_streams < 1:
        raise ValueError("n_rx and n_streams must be >= 1")
    h = rng.standard_normal((n_rx, n_streams)) + 1j * rng.standard_normal(
        (n_rx, n_streams)
    )
    h *= np.sqrt(0.5)
    if per_user_gain is not None:
        gain = np.asarray(per_user_gain, dtype=np.float64)
        if gain.shape != (n_streams,):
            raise DimensionMismatch(
                f"per_user_gain shape {gain.shape} != ({n_streams},)"
            )
        h = h * gain[np.newaxis, :]
    return ChannelRealization(h=h, snr_db=float(snr_db), noise_var=noise_variance(snr_db))


def apply_channel(
    ch: ChannelRealization, x: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """y = H x + n with i.i.d. complex Gaussian noise of variance noise_var.

    x may be a single symbol vector (n_streams,) or a block (n_streams, T).
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.shape[0] != ch.n_streams:
        raise DimensionMismatch(f"x has {x.shape[0]} streams, channel has {ch.n_streams}")
    shape = (ch.n_rx,) if x.ndim == 1 else (ch.n_rx, x.shape[1])
    n = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    n *= np.sqrt(ch.noise_var / 2.0)
    return ch.h @ x + n


def offsets_to_gains(offsets_db: np.ndarray) -> np.ndarray:
    """Per-user amplitude gains from per-user SNR offsets in dB."""
    return 10.0 ** (np.asarray(offsets_db, dtype=np.float64) / 20.0)
