"""Spin-1 operators and their embeddings into the two-site Hilbert space.

Basis order is {up, 0, down} (descending magnetic quantum number m), and the
two-site basis is the row-major product {up,0,down} x {up,0,down}.  hbar = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import BadDimensionError

_SQ2 = np.sqrt(2.0)

SX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _SQ2
SY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _SQ2
SZ = np.diag([1.0, 0.0, -1.0]).astype(complex)
SPLUS = _SQ2 * np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
SMINUS = SPLUS.conj().T
ID3 = np.eye(3, dtype=complex)

for _m in (SX, SY, SZ, SPLUS, SMINUS, ID3):
    _m.setflags(write=False)


@dataclass(frozen=True)
class SpinOperators:
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray


_OPERATORS = SpinOperators(sx=SX, sy=SY, sz=SZ, s_plus=SPLUS, s_minus=SMINUS)


def spin1_operators() -> SpinOperators:
    """The five 3x3 spin-1 matrices, cached as immutable constants."""
    return _OPERATORS


def embed(op: np.ndarray, site: int) -> np.ndarray:
    """Embed a single-site 3x3 operator into the 9-dimensional product space.

    site 1 -> op x I3, site 2 -> I3 x op.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (3, 3):
        raise BadDimensionError(f"expected a 3x3 operator, got {op.shape}")
    if site == 1:
        return np.kron(op, ID3)
    if site == 2:
        return np.kron(ID3, op)
    raise BadDimensionError(f"site must be 1 or 2, got {site}")


def total_sz() -> np.ndarray:
    """Total spin projection J_z = S1^z + S2^z; eigenvalues are m_tot in -2..2."""
    return embed(SZ, 1) + embed(SZ, 2)
