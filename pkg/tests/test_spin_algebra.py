import numpy as np
import pytest

from spin1topo.exceptions import BadDimensionError
from spin1topo.hamiltonians import XXYY
from spin1topo.spin import embed, spin1_operators, total_sz

UP = np.array([1.0, 0.0, 0.0], dtype=complex)
ZERO = np.array([0.0, 1.0, 0.0], dtype=complex)
DOWN = np.array([0.0, 0.0, 1.0], dtype=complex)


def test_commutation_relations():
    ops = spin1_operators()
    trip = [(ops.sx, ops.sy, ops.sz), (ops.sy, ops.sz, ops.sx), (ops.sz, ops.sx, ops.sy)]
    for a, b, c in trip:
        assert np.abs(a @ b - b @ a - 1j * c).max() <= 1e-14


def test_ladder_operators():
    ops = spin1_operators()
    assert np.abs(ops.s_plus - (ops.sx + 1j * ops.sy)).max() <= 1e-15
    assert np.abs(ops.s_minus - (ops.sx - 1j * ops.sy)).max() <= 1e-15
    assert np.abs(ops.s_plus - ops.s_minus.conj().T).max() == 0.0


def test_casimir():
    ops = spin1_operators()
    total = ops.sx @ ops.sx + ops.sy @ ops.sy + ops.sz @ ops.sz
    assert np.abs(total - 2.0 * np.eye(3)).max() <= 1e-15


def test_action_on_basis_states():
    ops = spin1_operators()
    assert np.allclose(ops.sz @ UP, UP)
    assert np.allclose(ops.s_plus @ DOWN, np.sqrt(2.0) * ZERO)
    assert np.allclose(ops.s_plus @ UP, 0.0)


def test_embed_total_z_diagonal():
    ops = spin1_operators()
    combined = embed(ops.sz, 1) + embed(ops.sz, 2)
    expected = np.diag([2, 1, 0, 1, 0, -1, 0, -1, -2]).astype(complex)
    assert np.abs(combined - expected).max() == 0.0


def test_embed_identity():
    assert np.abs(embed(np.eye(3), 1) - np.eye(9)).max() == 0.0


def test_embed_sites_commute():
    ops = spin1_operators()
    a = embed(ops.sx, 1) @ embed(ops.sx, 2)
    b = embed(ops.sx, 2) @ embed(ops.sx, 1)
    assert np.abs(a - b).max() == 0.0


def test_embed_preserves_spectrum(rng):
    m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    m = (m + m.conj().T) / 2.0
    base = np.sort(np.linalg.eigvalsh(m))
    for site in (1, 2):
        lifted = np.sort(np.linalg.eigvalsh(embed(m, site)))
        assert np.allclose(lifted, np.repeat(base, 3), atol=1e-12)


def test_embed_rejects_bad_shapes():
    with pytest.raises(BadDimensionError):
        embed(np.eye(2), 1)
    with pytest.raises(BadDimensionError):
        embed(np.eye(3), 3)


def test_total_sz_multiplicities_and_trace():
    values = np.sort(np.linalg.eigvalsh(total_sz()))
    expected = np.sort([2, 1, 1, 0, 0, 0, -1, -1, -2])
    assert np.allclose(values, expected, atol=1e-14)
    assert abs(np.trace(total_sz())) <= 1e-14


def test_total_sz_commutes_with_transverse_coupling():
    jz = total_sz()
    comm = jz @ XXYY - XXYY @ jz
    assert np.abs(comm).max() <= 1e-13
