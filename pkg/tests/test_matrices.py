import json
import math

import numpy as np
import pytest

from csense import matrices, numerics
from csense.errors import UnsupportedSizeError, ZeroColumnError

MU14 = 1.0 / math.sqrt(13.0)
MU30 = 1.0 / math.sqrt(29.0)


def coherence_by_loops(data):
    data = np.asarray(data)
    n = data.shape[1]
    worst = 0.0
    for k in range(n):
        for l in range(n):
            if k != l:
                worst = max(worst, abs(np.vdot(data[:, k], data[:, l])))
    return worst


# ------------------------------------------------------------ row index sets


def test_row_index_set_validation():
    matrices.RowIndexSet(8, (0, 2, 4, 6))
    with pytest.raises(ValueError):
        matrices.RowIndexSet(8, (0, 2, 2, 6))
    with pytest.raises(ValueError):
        matrices.RowIndexSet(8, (0, 8))
    with pytest.raises(ValueError):
        matrices.RowIndexSet(8, (2, 0))


def test_sample_rows_exhaustive_draw():
    assert matrices.sample_rows(4, 4, seed=99).indices == (0, 1, 2, 3)


def test_sample_rows_deterministic():
    a = matrices.sample_rows(16, 12, seed=1)
    b = matrices.sample_rows(16, 12, seed=1)
    assert a.indices == b.indices
    assert len(a) == 12


def test_sample_rows_rejects_oversized_draw():
    with pytest.raises(ValueError):
        matrices.sample_rows(16, 17, seed=0)


def test_subsampling_rows():
    assert matrices.build_subsampling_rows(8, 1).indices == tuple(range(8))
    assert matrices.build_subsampling_rows(8, 2).indices == (0, 2, 4, 6)
    with pytest.raises(ValueError):
        matrices.build_subsampling_rows(8, 3)


# -------------------------------------------------------------- partial DFT


def test_full_dft_gram_is_identity():
    mat = matrices.build_partial_dft(4, matrices.RowIndexSet(4, (0, 1, 2, 3)))
    g = numerics.gram(mat.data)
    assert np.max(np.abs(g - np.eye(4))) < 1e-12
    assert np.max(np.abs(np.abs(mat.data) - 0.5)) < 1e-15


def test_even_rows_duplicate_columns(even_rows_dft8):
    # exp(2j*pi*r*4/8) = 1 for every even row index r, so columns 0 and 4 agree
    assert np.max(np.abs(even_rows_dft8.data[:, 0] - even_rows_dft8.data[:, 4])) < 1e-15


def test_partial_dft_row_set_mismatch():
    with pytest.raises(ValueError):
        matrices.build_partial_dft(8, matrices.RowIndexSet(16, (0, 1)))


def test_partial_dft_gram_circulant(fig3_dft):
    g = numerics.gram(fig3_dft.data)
    n = fig3_dft.n
    for k in range(n):
        for l in range(n):
            assert abs(g[k, l] - g[0, (l - k) % n]) < 1e-12


def test_shipped_fig3_subset_beats_one_third(fig3_dft):
    mu = coherence_by_loops(fig3_dft.data)
    assert mu < 1.0 / 3.0
    from csense.coherence import coherence_index

    assert coherence_index(fig3_dft).mu == pytest.approx(mu, abs=1e-12)


# ---------------------------------------------------------------------- ETF


def test_paley_conference_self_check():
    for order in (6, 14, 30):
        c = matrices.paley_conference(order)
        assert np.max(np.abs(np.diag(c))) == 0.0
        assert np.max(np.abs(c.T @ c - (order - 1) * np.eye(order))) < 1e-10


def test_paley_conference_unsupported_orders():
    with pytest.raises(UnsupportedSizeError):
        matrices.paley_conference(16)  # 16 = 0 (mod 4)
    with pytest.raises(UnsupportedSizeError):
        matrices.paley_conference(22)  # 21 is composite


def test_etf_7x14(etf14):
    assert etf14.meta["route"] == "paley-conference"
    g = numerics.gram(etf14.data)
    off = np.abs(g[~np.eye(14, dtype=bool)])
    assert np.max(off) == pytest.approx(MU14, abs=1e-9)
    assert np.max(off) - np.min(off) <= 1e-9


def test_etf_15x30(etf30):
    assert etf30.meta["route"] == "paley-conference"
    g = numerics.gram(etf30.data)
    off = np.abs(g[~np.eye(30, dtype=bool)])
    assert np.max(off) == pytest.approx(MU30, abs=1e-9)
    assert np.max(off) - np.min(off) <= 1e-9


def test_etf_degenerate_1x1():
    mat = matrices.build_etf(1, 1)
    assert mat.data.shape == (1, 1)
    assert mat.data[0, 0] == 1.0 + 0.0j


def test_etf_fallback_small_frame():
    # three unit vectors in the plane at mutual 60 degrees; fallback territory
    mat = matrices.build_etf(2, 3)
    assert mat.meta["route"] == "alternating-projections"
    g = numerics.gram(mat.data)
    off = np.abs(g[~np.eye(3, dtype=bool)])
    assert np.max(np.abs(off - 0.5)) <= 1e-3


def test_etf_fallback_infeasible_size():
    # more than m^2 columns cannot be equiangular in dimension m
    with pytest.raises(UnsupportedSizeError):
        matrices.build_etf(2, 5)


def test_etf_rejects_bad_shape():
    with pytest.raises(ValueError):
        matrices.build_etf(5, 3)


def test_etf_welch_equality(etf14, etf30):
    from csense.coherence import coherence_index, welch_bound

    for mat in (etf14, etf30):
        rep = coherence_index(mat)
        assert abs(rep.mu - welch_bound(mat.m, mat.n)) <= 1e-9


# --------------------------------------------------------- subsampling case


def test_subsampling_restriction_gram_identity():
    rows = matrices.build_subsampling_rows(16, 4)
    assert rows.indices == (0, 4, 8, 12)
    mat = matrices.build_partial_dft(16, rows)
    sub = matrices.restrict_columns(mat, (0, 1, 2, 3))
    g = numerics.gram(sub)
    assert np.max(np.abs(g - np.eye(4))) < 1e-12


# ------------------------------------------------------------------ Gaussian


def test_gaussian_single_entry():
    mat = matrices.build_gaussian(1, 1, seed=3)
    assert abs(abs(mat.data[0, 0]) - 1.0) < 1e-15


def test_gaussian_deterministic():
    a = matrices.build_gaussian(4, 8, seed=7)
    b = matrices.build_gaussian(4, 8, seed=7)
    assert np.array_equal(a.data, b.data)
    c = matrices.build_gaussian(4, 8, seed=8)
    assert not np.array_equal(a.data, c.data)


def test_all_families_unit_columns(etf14, etf30, fig3_dft, even_rows_dft8):
    mats = [etf14, etf30, fig3_dft, even_rows_dft8, matrices.build_gaussian(5, 9, seed=2)]
    for mat in mats:
        norms = np.linalg.norm(mat.data, axis=0)
        assert np.max(np.abs(norms - 1.0)) <= 1e-10


# ------------------------------------------------------------- column tools


def test_restrict_columns_full_support(etf14):
    full = matrices.restrict_columns(etf14, tuple(range(14)))
    assert np.array_equal(full, etf14.data)


def test_restrict_columns_pair(etf14):
    sub = matrices.restrict_columns(etf14, (2, 7))
    assert sub.shape == (7, 2)
    assert np.array_equal(sub[:, 0], etf14.data[:, 2])


def test_restrict_columns_rejects_unsorted(etf14):
    with pytest.raises((ValueError, IndexError)):
        matrices.restrict_columns(etf14, (7, 2))
    with pytest.raises(IndexError):
        matrices.restrict_columns(etf14, (0, 14))


def test_normalize_columns_idempotent(etf14):
    again = matrices.normalize_columns(etf14.data)
    assert np.max(np.abs(again - etf14.data)) <= 1e-15


def test_normalize_columns_345():
    out = matrices.normalize_columns([[3.0], [4.0]])
    assert np.allclose(out[:, 0], [0.6, 0.8], atol=1e-15)


def test_normalize_columns_zero_column():
    with pytest.raises(ZeroColumnError):
        matrices.normalize_columns([[1.0, 0.0], [0.0, 0.0]])


# --------------------------------------------------------------------- JSON


def test_matrix_json_round_trip_bit_exact(tmp_path, fig3_dft):
    path = tmp_path / "mat.json"
    matrices.save_matrix(fig3_dft, path)
    loaded = matrices.load_matrix(path)
    assert loaded.m == fig3_dft.m and loaded.n == fig3_dft.n
    assert loaded.family == fig3_dft.family
    assert np.array_equal(loaded.data, fig3_dft.data)


def test_matrix_dict_shape_check(etf14):
    d = matrices.matrix_to_dict(etf14)
    d["data"] = d["data"][:-1]
    with pytest.raises(ValueError):
        matrices.matrix_from_dict(d)


def test_matrix_json_layout(etf14):
    d = matrices.matrix_to_dict(etf14)
    assert set(d) == {"m", "n", "family", "meta", "data"}
    assert len(d["data"]) == etf14.m * etf14.n
    assert all(len(pair) == 2 for pair in d["data"])
    json.dumps(d)  # serializable as-is


# ------------------------------------------------------------------ family


def test_from_spec_dispatch():
    etf = matrices.from_spec("etf", m=7, n=14)
    assert etf.family == "etf"
    sub = matrices.from_spec("subsampling", n=16, p=4)
    assert sub.family == "subsampling"
    assert sub.meta["rows"] == [0, 4, 8, 12]
    dft = matrices.from_spec("partial_dft", n=8, rows=(0, 2, 4, 6))
    assert dft.meta["rows"] == [0, 2, 4, 6]
    with pytest.raises(ValueError):
        matrices.from_spec("mystery", m=2, n=4)
    with pytest.raises(ValueError):
        matrices.from_spec("subsampling", n=16)


def test_measurement_matrix_rejects_bad_norms():
    with pytest.raises(ValueError):
        matrices.MeasurementMatrix(2, 2, np.eye(2) * 2.0, "custom")
    with pytest.raises(ValueError):
        matrices.MeasurementMatrix(3, 2, np.eye(3)[:, :2], "custom")
