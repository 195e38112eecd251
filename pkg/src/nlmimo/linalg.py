"""Complex dense linear algebra kernels used by the detectors.

Thin wrappers over LAPACK (via numpy/scipy) that pin down the conventions the
detectors rely on: a thin QR with real, strictly positive R diagonal, and a
Hermitian positive-definite solve with an explicit failure mode.
"""

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefinite, RankDeficient

# Relative tolerance on the R diagonal below which a matrix is treated as
# rank deficient. Double-precision Gaussian channel draws never get near this
# unless genuinely degenerate.
RANK_RTOL = 1e-10


def qr_decompose(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR of a tall complex matrix, R diagonal made real and positive.

    Returns (q, r) with q of shape (rows, cols), r upper triangular
    (cols, cols). Uses LAPACK's Householder factorization; a diagonal phase
    correction enforces real positive r[i, i].

    Raises RankDeficient when min |r_ii| <= RANK_RTOL * max |r_ii|.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < a.shape[1]:
        raise ValueError(f"need a tall 2-D matrix, got shape {a.shape}")
    q, r = np.linalg.qr(a, mode="reduced")
    diag = np.diagonal(r).copy()
    absd = np.abs(diag)
    if absd.min() <= RANK_RTOL * absd.max():
        raise RankDeficient(
            f"R diagonal ratio {absd.min() / absd.max():.3e} below {RANK_RTOL:.0e}"
        )
    # a = (q D)(D^H r) for any unitary diagonal D; pick D to make diag(r) real > 0.
    phase = diag / absd
    q = q * phase[np.newaxis, :]
    r = r * np.conj(phase)[:, np.newaxis]
    return q, r


def solve_hpd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b for Hermitian positive-definite a via Cholesky.

    b may be a vector or a matrix of stacked right-hand sides.
    Raises NotPositiveDefinite when the factorization hits a bad pivot.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    try:
        c, low = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    return scipy.linalg.cho_solve((c, low), b, check_finite=False)


def hpd_inverse_diagonal(a: np.ndarray) -> np.ndarray:
    """Real diagonal of inv(a) for Hermitian positive-definite a."""
    n = a.shape[0]
    inv = solve_hpd(a, np.eye(n, dtype=np.complex128))
    return np.real(np.diagonal(inv)).copy()
