"""Gray-mapped square QAM constellations and the MCS table.

Bit convention for a symbol of 2m bits: the first m bits pick the real
coordinate, the last m pick the imaginary one, each through a per-axis
binary-reflected Gray code whose leading bit is the sign (0 -> positive
half-plane). Constellations are normalized to unit average energy, so the
point index of a symbol IS its bit label read MSB-first.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import LengthMismatch


class Scheme(str, Enum):
    QPSK = "QPSK"
    QAM16 = "QAM16"
    QAM64 = "QAM64"


_BITS_PER_SYMBOL = {Scheme.QPSK: 2, Scheme.QAM16: 4, Scheme.QAM64: 6}


def _gray(k: int) -> int:
    return k ^ (k >> 1)


def _axis_levels(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Amplitude levels of one axis and the level index for each m-bit label.

    Levels are the odd integers -(L-1)..(L-1) ascending. Label g goes to the
    level with index L-1-k where gray(k) = g, which puts the sign in the
    leading bit (0 -> positive) and keeps adjacent levels one bit apart.
    """
    n_levels = 1 << m
    levels = np.arange(-(n_levels - 1), n_levels, 2, dtype=np.float64)
    level_of_label = np.empty(n_levels, dtype=np.int64)
    for k in range(n_levels):
        level_of_label[_gray(k)] = n_levels - 1 - k
    return levels, level_of_label


@dataclass(frozen=True)
class Constellation:
    scheme: Scheme
    points: np.ndarray        # complex128, indexed by the bit label
    bit_map: np.ndarray       # (n_points, bits_per_symbol) uint8, MSB first

    @property
    def bits_per_symbol(self) -> int:
        return _BITS_PER_SYMBOL[self.scheme]

    @property
    def n_points(self) -> int:
        return self.points.shape[0]


@lru_cache(maxsize=None)
def constellation(scheme: Scheme) -> Constellation:
    """Build (and cache) the Gray-mapped unit-energy constellation."""
    scheme = Scheme(scheme)
    bps = _BITS_PER_SYMBOL[scheme]
    m = bps // 2
    levels, level_of_label = _axis_levels(m)
    # Unit average energy: E[level^2] per axis = (L^2 - 1)/3, two axes.
    norm = np.sqrt(2.0 * (len(levels) ** 2 - 1) / 3.0)
    n_points = 1 << bps
    points = np.empty(n_points, dtype=np.complex128)
    bit_map = np.empty((n_points, bps), dtype=np.uint8)
    for label in range(n_points):
        re_label = label >> m
        im_label = label & ((1 << m) - 1)
        points[label] = (
            levels[level_of_label[re_label]] + 1j * levels[level_of_label[im_label]]
        ) / norm
        for b in range(bps):
            bit_map[label, b] = (label >> (bps - 1 - b)) & 1
    points.setflags(write=False)
    bit_map.setflags(write=False)
    return Constellation(scheme=scheme, points=points, bit_map=bit_map)


def modulate(bits: np.ndarray, c: Constellation) -> np.ndarray:
    """Map a bit sequence to constellation symbols, MSB-first per symbol."""
    bits = np.asarray(bits, dtype=np.uint8)
    bps = c.bits_per_symbol
    if bits.size % bps != 0:
        raise LengthMismatch(f"{bits.size} bits do not divide into {bps}-bit symbols")
    groups = bits.reshape(-1, bps)
    labels = groups @ (1 << np.arange(bps - 1, -1, -1, dtype=np.int64))
    return c.points[labels]


def demap_hard(symbols: np.ndarray, c: Constellation) -> np.ndarray:
    """Nearest-point demapper, returns the bit sequence."""
    symbols = np.asarray(symbols, dtype=np.complex128).ravel()
    d2 = np.abs(symbols[:, None] - c.points[None, :]) ** 2
    labels = d2.argmin(axis=1)
    return c.bit_map[labels].reshape(-1)


@dataclass(frozen=True)
class McsEntry:
    index: int
    scheme: Scheme
    code_rate: Fraction

    @property
    def bits_per_symbol(self) -> int:
        return _BITS_PER_SYMBOL[self.scheme]

    @property
    def spectral_efficiency(self) -> float:
        return self.bits_per_symbol * float(self.code_rate)


_MCS_DEF = [
    (Scheme.QPSK, Fraction(1, 2)),
    (Scheme.QPSK, Fraction(3, 4)),
    (Scheme.QAM16, Fraction(1, 2)),
    (Scheme.QAM16, Fraction(2, 3)),
    (Scheme.QAM16, Fraction(3, 4)),
    (Scheme.QAM64, Fraction(2, 3)),
    (Scheme.QAM64, Fraction(3, 4)),
    (Scheme.QAM64, Fraction(5, 6)),
]


def mcs_table() -> list[McsEntry]:
    """The fixed 8-entry MCS ladder, 1.0 to 5.0 bits/symbol."""
    return [McsEntry(i, s, r) for i, (s, r) in enumerate(_MCS_DEF)]


def mcs_table_json() -> list[dict]:
    """MCS table in the `mcs.json` wire shape used by the dashboard."""
    return [
        {
            "index": e.index,
            "scheme": e.scheme.value,
            "code_rate": str(e.code_rate),
            "efficiency": e.spectral_efficiency,
        }
        for e in mcs_table()
    ]
