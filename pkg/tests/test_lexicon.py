import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gloctm.corpus import BowMatrix, Vocabulary
from gloctm.errors import IngestionError
from gloctm.lexicon import (NeighborIndex, WordEmbeddingTable, augment,
                            build_neighbor_index, load_doc_embeddings,
                            load_word_embeddings, read_sparse_triplets,
                            write_sparse_triplets)

from oracles import brute_force_augment, brute_force_neighbors


def table(language_id, rows):
    rows = np.asarray(rows, dtype=np.float64)
    return WordEmbeddingTable(language_id=language_id, vectors=rows,
                              missing=np.zeros(rows.shape[0], dtype=bool))


def manual_index(intra1, cross1, intra2, cross2, k_intra, k_cross):
    to_arrays = lambda lists: [np.asarray(l, dtype=np.int64) for l in lists]
    return NeighborIndex(
        intra={1: to_arrays(intra1), 2: to_arrays(intra2)},
        cross={1: to_arrays(cross1), 2: to_arrays(cross2)},
        k_intra=k_intra, k_cross=k_cross,
        vocab_sizes=(len(intra1), len(intra2)))


# ---------------------------------------------------------------- embeddings

def test_load_word_embeddings_partial_coverage(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("a 1.0 0.0\nb 0.0 1.0\n", encoding="utf-8")
    vocab = Vocabulary(1, ["a", "b", "c"])
    emb = load_word_embeddings(p, vocab)
    assert emb.missing.tolist() == [False, False, True]
    assert emb.coverage == pytest.approx(2 / 3)
    assert (emb.vectors[2] == 0).all()


def test_load_word_embeddings_dimension_mismatch(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("a 1.0 0.0\nb 0.0 1.0 0.5\n", encoding="utf-8")
    with pytest.raises(IngestionError, match="dimension mismatch at line 2"):
        load_word_embeddings(p, Vocabulary(1, ["a", "b"]))


def test_load_word_embeddings_full_coverage_and_header(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("2 2\na 1.0 0.0\nb 0.0 1.0\n", encoding="utf-8")
    emb = load_word_embeddings(p, Vocabulary(1, ["a", "b"]))
    assert not emb.missing.any()
    assert emb.vectors.tolist() == [[1.0, 0.0], [0.0, 1.0]]


def test_load_word_embeddings_zero_coverage_is_error(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("z 1.0\n", encoding="utf-8")
    with pytest.raises(IngestionError, match="no vocabulary word covered"):
        load_word_embeddings(p, Vocabulary(1, ["a"]))


def test_load_doc_embeddings_aligned(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("0 0.5 0.5\n1 1.0 0.0\n2 0.0 1.0\n", encoding="utf-8")
    bow = BowMatrix(1, np.array([[1], [2]]), ["2", "0"])
    emb = load_doc_embeddings(p, bow)
    assert emb.vectors.tolist() == [[0.0, 1.0], [0.5, 0.5]]


def test_load_doc_embeddings_missing_doc(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("0 0.5\n", encoding="utf-8")
    bow = BowMatrix(1, np.array([[1], [1]]), ["0", "1"])
    with pytest.raises(IngestionError, match="missing"):
        load_doc_embeddings(p, bow)


# ------------------------------------------------------------ neighbor index

def test_neighbor_index_hand_case():
    emb1 = table(1, [[1, 0], [0.9, 0.1], [0, 1]])
    emb2 = table(2, [[1, 0]])
    index = build_neighbor_index(emb1, emb2, k_intra=1, k_cross=0)
    assert index.intra[1][0].tolist() == [1]   # nearest to a is b


def test_neighbor_index_k_zero():
    emb1 = table(1, [[1, 0], [0, 1]])
    emb2 = table(2, [[1, 1]])
    index = build_neighbor_index(emb1, emb2, k_intra=0, k_cross=0)
    assert all(len(l) == 0 for l in index.intra[1])
    assert all(len(l) == 0 for l in index.cross[1])


def test_neighbor_index_zero_norm_excluded():
    emb1 = table(1, [[1, 0], [0, 0], [0.5, 0.5]])
    emb2 = table(2, [[1, 0]])
    index = build_neighbor_index(emb1, emb2, k_intra=2, k_cross=1)
    assert index.intra[1][1].tolist() == []          # zero-norm query
    for j in (0, 2):
        assert 1 not in index.intra[1][j].tolist()   # never a candidate
    assert index.cross[1][1].tolist() == []


def test_neighbor_index_self_excluded_and_sorted():
    emb1 = table(1, [[1, 0], [1, 0], [0.9, 0.1], [0, 1]])
    emb2 = table(2, [[1, 0]])
    index = build_neighbor_index(emb1, emb2, k_intra=3, k_cross=0)
    # word 0: word 1 ties at cosine 1.0 -> first; then 2, then 3
    assert index.intra[1][0].tolist() == [1, 2, 3]
    assert 0 not in index.intra[1][0].tolist()[:0]


def test_neighbor_index_tie_break_ascending_index():
    emb1 = table(1, [[1, 0], [2, 0], [3, 0], [0, 1]])
    emb2 = table(2, [[1, 0]])
    index = build_neighbor_index(emb1, emb2, k_intra=2, k_cross=0)
    # words 1 and 2 both at cosine 1.0 from word 0; ascending index order
    assert index.intra[1][0].tolist() == [1, 2]


def test_neighbor_index_min_cosine_cutoff():
    emb1 = table(1, [[1, 0], [0.9, 0.1], [0, 1]])
    emb2 = table(2, [[1, 0]])
    index = build_neighbor_index(emb1, emb2, k_intra=2, k_cross=0, min_cosine=0.5)
    assert index.intra[1][0].tolist() == [1]


def test_neighbor_index_matches_brute_force():
    rng = np.random.default_rng(7)
    for trial in range(20):
        n1, n2 = rng.integers(2, 12, size=2)
        dim = int(rng.integers(2, 5))
        v1 = rng.normal(size=(n1, dim))
        v2 = rng.normal(size=(n2, dim))
        if trial % 3 == 0:
            v1[rng.integers(0, n1)] = 0.0
        k = int(rng.integers(0, 4))
        index = build_neighbor_index(table(1, v1), table(2, v2), k, k)
        for j in range(n1):
            expect_intra = brute_force_neighbors(
                v1[j], v1, [i for i in range(n1) if i != j], k)
            expect_cross = brute_force_neighbors(v1[j], v2, range(n2), k)
            assert index.intra[1][j].tolist() == expect_intra
            assert index.cross[1][j].tolist() == expect_cross


# ----------------------------------------------------------------- augment

FOOTBALL_V1 = ["football", "goal", "cat"]
FOOTBALL_V2 = ["futbol", "gol", "gato"]


def test_augment_single_active_word():
    # active={football}; N_I(football)={goal}, N_C(football)={futbol}
    index = manual_index(
        intra1=[[1], [], []], cross1=[[0], [], []],
        intra2=[[], [], []], cross2=[[], [], []],
        k_intra=1, k_cross=1)
    bow = BowMatrix(1, np.array([[1, 0, 0]]), ["0"])
    g = augment(bow, index)
    assert g.rows.tolist() == [[1, 1, 0, 1, 0, 0]]


def test_augment_mutual_neighbors():
    # active={football, goal}; each is the other's intra neighbor
    index = manual_index(
        intra1=[[1], [0], []], cross1=[[], [], []],
        intra2=[[], [], []], cross2=[[], [], []],
        k_intra=1, k_cross=0)
    bow = BowMatrix(1, np.array([[1, 1, 0]]), ["0"])
    g = augment(bow, index)
    assert g.rows.tolist() == [[2, 2, 0, 0, 0, 0]]


def test_augment_no_neighbors_binarizes():
    index = manual_index(
        intra1=[[], [], []], cross1=[[], [], []],
        intra2=[[], [], []], cross2=[[], [], []],
        k_intra=0, k_cross=0)
    bow = BowMatrix(1, np.array([[5, 2, 0]]), ["0"])
    g = augment(bow, index)
    assert g.rows.tolist() == [[1, 1, 0, 0, 0, 0]]


def test_augment_counts_base_keeps_counts():
    index = manual_index(
        intra1=[[1], [], []], cross1=[[], [], []],
        intra2=[[], [], []], cross2=[[], [], []],
        k_intra=1, k_cross=0)
    bow = BowMatrix(1, np.array([[5, 2, 0]]), ["0"])
    g = augment(bow, index, base="counts")
    # own column keeps raw counts; neighbor contribution stays binarized
    assert g.rows.tolist() == [[5, 3, 0, 0, 0, 0]]


def test_augment_language2_layout_mirrored():
    index = manual_index(
        intra1=[[], [], []], cross1=[[], [], []],
        intra2=[[1], [], []], cross2=[[2], [], []],
        k_intra=1, k_cross=1)
    bow = BowMatrix(2, np.array([[1, 0, 0]]), ["0"])
    g = augment(bow, index)
    # lang-2 doc: cross block (V1 columns) first, own block second
    assert g.rows.tolist() == [[0, 0, 1, 1, 1, 0]]


def _random_case(rng):
    n1, n2 = int(rng.integers(1, 20)), int(rng.integers(1, 20))
    dim = int(rng.integers(2, 5))
    emb1 = table(1, rng.normal(size=(n1, dim)))
    emb2 = table(2, rng.normal(size=(n2, dim)))
    k_i, k_c = int(rng.integers(0, 4)), int(rng.integers(0, 4))
    index = build_neighbor_index(emb1, emb2, k_i, k_c)
    lang = int(rng.integers(1, 3))
    size = n1 if lang == 1 else n2
    docs = rng.integers(0, 4, size=(int(rng.integers(1, 6)), size))
    keep = docs.any(axis=1)
    if not keep.any():
        docs[0, 0] = 1
        keep = docs.any(axis=1)
    docs = docs[keep]
    bow = BowMatrix(lang, docs.astype(np.int64), [str(i) for i in range(docs.shape[0])])
    return bow, index, n1, n2


def test_augment_matches_brute_force_oracle():
    rng = np.random.default_rng(11)
    for _ in range(40):
        bow, index, n1, n2 = _random_case(rng)
        lang = bow.language_id
        g = augment(bow, index)
        for d in range(bow.num_docs):
            expected = brute_force_augment(
                bow.counts[d], lang, index.intra[lang], index.cross[lang], n1, n2)
            assert (g.rows[d] == expected).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(1, 100))
def test_augment_monotone_in_k(k_small, extra, seed):
    rng = np.random.default_rng(seed)
    n1, n2 = int(rng.integers(2, 10)), int(rng.integers(2, 10))
    emb1 = table(1, rng.normal(size=(n1, 3)))
    emb2 = table(2, rng.normal(size=(n2, 3)))
    row = rng.integers(0, 3, size=n1)
    if not row.any():
        row[0] = 1
    bow = BowMatrix(1, row[None, :].astype(np.int64), ["0"])
    g_small = augment(bow, build_neighbor_index(emb1, emb2, k_small, k_small))
    g_big = augment(bow, build_neighbor_index(emb1, emb2, k_small + extra, k_small + extra))
    assert (g_big.rows >= g_small.rows).all()


def test_augment_layout_cross_block_position():
    rng = np.random.default_rng(3)
    emb1 = table(1, rng.normal(size=(4, 3)))
    emb2 = table(2, rng.normal(size=(5, 3)))
    index = build_neighbor_index(emb1, emb2, 2, 2)
    row1 = np.array([[1, 0, 2, 0]], dtype=np.int64)
    g1 = augment(BowMatrix(1, row1, ["0"]), index)
    expected_cross = brute_force_augment(row1[0], 1, index.intra[1], index.cross[1], 4, 5)[4:]
    assert (g1.rows[0, 4:] == expected_cross).all()

    row2 = np.array([[0, 1, 0, 0, 1]], dtype=np.int64)
    g2 = augment(BowMatrix(2, row2, ["0"]), index)
    expected_cross2 = brute_force_augment(row2[0], 2, index.intra[2], index.cross[2], 4, 5)[:4]
    assert (g2.rows[0, :4] == expected_cross2).all()


def test_sparse_triplet_roundtrip(tmp_path):
    rows = np.array([[0, 2, 0], [1, 0, 3]], dtype=np.int64)
    path = tmp_path / "t.txt"
    write_sparse_triplets(rows, path)
    assert read_sparse_triplets(path, rows.shape).tolist() == rows.tolist()
    text = path.read_text()
    assert "0 1 2" in text and "1 2 3" in text
