import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gloctm.corpus import (AlignedReference, BowMatrix, LabeledSplit, Vocabulary,
                           build_vocabulary, check_label_coverage,
                           load_aligned_reference, load_corpus, vectorize)
from gloctm.errors import IngestionError


def test_build_vocabulary_min_df_filters():
    docs = [["a", "b"], ["a", "c"]]
    vocab = build_vocabulary(docs, 1, min_df=2, max_vocab=10)
    assert vocab.tokens == ["a"]


def test_build_vocabulary_tie_break_lexicographic():
    docs = [["a", "b"], ["a", "b"]]
    vocab = build_vocabulary(docs, 1, min_df=1, max_vocab=1)
    assert vocab.tokens == ["a"]


def test_build_vocabulary_all_filtered_is_error():
    with pytest.raises(IngestionError, match="vocabulary empty"):
        build_vocabulary([["x"]], 1, min_df=2, max_vocab=10)


def test_build_vocabulary_empty_corpus_is_error():
    with pytest.raises(IngestionError, match="empty corpus"):
        build_vocabulary([], 1, min_df=1, max_vocab=10)


def test_build_vocabulary_orders_by_df_then_word():
    docs = [["b", "c"], ["b", "c"], ["b"], ["a"], ["a"], ["a"]]
    vocab = build_vocabulary(docs, 1, min_df=1, max_vocab=10)
    # df: b=3, a=3, c=2 -> tie between a and b broken lexicographically
    assert vocab.tokens == ["a", "b", "c"]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=6),
                min_size=1, max_size=8),
       st.randoms(use_true_random=False))
def test_build_vocabulary_order_invariant_to_doc_permutation(docs, rnd):
    shuffled = list(docs)
    rnd.shuffle(shuffled)
    v1 = build_vocabulary(docs, 1, min_df=1, max_vocab=100)
    v2 = build_vocabulary(shuffled, 1, min_df=1, max_vocab=100)
    assert v1.tokens == v2.tokens


def test_vocabulary_index_bijection():
    vocab = build_vocabulary([["a", "b", "c"]], 1, min_df=1, max_vocab=10)
    assert sorted(vocab.index.values()) == list(range(len(vocab)))
    for w, i in vocab.index.items():
        assert vocab.tokens[i] == w


def test_vectorize_counts_tokens():
    vocab = Vocabulary(1, ["a", "b", "c"])
    bow, dropped = vectorize([["a", "a", "b"]], vocab)
    assert bow.counts.tolist() == [[2, 1, 0]]
    assert dropped == []


def test_vectorize_drops_oov_only_docs():
    vocab = Vocabulary(1, ["a"])
    bow, dropped = vectorize([["z"], ["a"]], vocab)
    assert bow.counts.tolist() == [[1]]
    assert dropped == [0]
    assert bow.doc_ids == ["1"]


def test_vectorize_identical_docs_identical_rows():
    vocab = Vocabulary(1, ["a", "b"])
    bow, _ = vectorize([["a", "b", "b"], ["a", "b", "b"]], vocab)
    assert (bow.counts[0] == bow.counts[1]).all()


def test_vectorize_row_sum_equals_in_vocab_token_count():
    rng = np.random.default_rng(0)
    words = [f"w{i}" for i in range(10)]
    docs = [[words[j] for j in rng.integers(0, 10, size=rng.integers(1, 20))]
            for _ in range(30)]
    vocab = build_vocabulary(docs, 1, min_df=2, max_vocab=6)
    bow, dropped = vectorize(docs, vocab)
    kept = [d for i, d in enumerate(docs) if i not in dropped]
    for row, doc in zip(bow.counts, kept):
        assert row.sum() == sum(1 for t in doc if t in vocab)


def test_bow_matrix_rejects_empty_rows():
    with pytest.raises(IngestionError):
        BowMatrix(1, np.array([[0, 0]]), ["0"])


def test_bow_matrix_rejects_negative():
    with pytest.raises(IngestionError):
        BowMatrix(1, np.array([[1, -1]]), ["0"])


def test_load_corpus_roundtrip(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a b c\nd e\nf\n", encoding="utf-8")
    lp = tmp_path / "l.txt"
    lp.write_text("0\n1\n0\n", encoding="utf-8")
    docs, labels = load_corpus(p, lp)
    assert docs == [["a", "b", "c"], ["d", "e"], ["f"]]
    assert labels.tolist() == [0, 1, 0]


def test_load_corpus_label_count_mismatch(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a\nb\nc\n", encoding="utf-8")
    lp = tmp_path / "l.txt"
    lp.write_text("0\n1\n", encoding="utf-8")
    with pytest.raises(IngestionError, match="label count mismatch"):
        load_corpus(p, lp)


def test_load_corpus_blank_line_rejected_with_line_number(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a b\n\nc\n", encoding="utf-8")
    with pytest.raises(IngestionError, match="line 2"):
        load_corpus(p)


def test_load_corpus_non_integer_label(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text("a\n", encoding="utf-8")
    lp = tmp_path / "l.txt"
    lp.write_text("x\n", encoding="utf-8")
    with pytest.raises(IngestionError, match="line 1"):
        load_corpus(p, lp)


def test_labeled_split_role_checked():
    with pytest.raises(ValueError):
        LabeledSplit(["0"], np.array([1]), "dev")


def test_label_coverage():
    train = LabeledSplit(["0", "1"], np.array([0, 1]), "train")
    ok = LabeledSplit(["2"], np.array([1]), "test")
    check_label_coverage(train, ok)
    bad = LabeledSplit(["2"], np.array([2]), "test")
    with pytest.raises(IngestionError):
        check_label_coverage(train, bad)


def test_aligned_reference_drops_oov(tmp_path):
    p1 = tmp_path / "r1.txt"
    p2 = tmp_path / "r2.txt"
    p1.write_text("a z\nb b\n", encoding="utf-8")
    p2.write_text("x q\ny x\n", encoding="utf-8")
    v1 = Vocabulary(1, ["a", "b"])
    v2 = Vocabulary(2, ["x", "y"])
    ref = load_aligned_reference(p1, p2, v1, v2)
    assert ref.n_ref == 2
    assert ref.pairs[0] == (frozenset({"a"}), frozenset({"x"}))
    assert ref.pairs[1] == (frozenset({"b"}), frozenset({"x", "y"}))


def test_aligned_reference_length_mismatch(tmp_path):
    p1 = tmp_path / "r1.txt"
    p2 = tmp_path / "r2.txt"
    p1.write_text("a\nb\n", encoding="utf-8")
    p2.write_text("x\n", encoding="utf-8")
    with pytest.raises(IngestionError, match="length mismatch"):
        load_aligned_reference(p1, p2, Vocabulary(1, ["a", "b"]), Vocabulary(2, ["x"]))


def test_aligned_reference_requires_pairs():
    with pytest.raises(IngestionError):
        AlignedReference(pairs=[])
