"""Bilingual corpus ingestion: vocabularies, bag-of-words matrices, labels,
and aligned reference pairs for coherence evaluation.

Input text is expected pre-tokenized: UTF-8, one document per line, tokens
separated by single spaces. No tokenization or language-specific
preprocessing happens here.
"""

from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IngestionError


@dataclass
class Vocabulary:
    """Ordered token index for one language.

    Tokens are ordered by document frequency descending, ties broken
    lexicographically, so the same corpus always yields the same column
    indexing.
    """

    language_id: int
    tokens: list[str]
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        if self.language_id not in (1, 2):
            raise ValueError(f"language_id must be 1 or 2, got {self.language_id}")
        self.index = {w: i for i, w in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise IngestionError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def sha256(self) -> str:
        h = hashlib.sha256()
        h.update(f"lang{self.language_id}".encode("utf-8"))
        for tok in self.tokens:
            h.update(b"\x00")
            h.update(tok.encode("utf-8"))
        return h.hexdigest()


@dataclass
class BowMatrix:
    """Document-term count matrix for one language (one row per document)."""

    language_id: int
    counts: np.ndarray
    doc_ids: list[str]

    def __post_init__(self):
        self.counts = np.asarray(self.counts)
        if self.counts.ndim != 2:
            raise ValueError("counts must be a 2-d matrix")
        if not np.issubdtype(self.counts.dtype, np.integer):
            raise ValueError("counts must be integers")
        if self.counts.shape[0] != len(self.doc_ids):
            raise ValueError("doc_ids length does not match row count")
        if (self.counts < 0).any():
            raise IngestionError("negative counts in bag-of-words matrix")
        if self.counts.shape[0] and not self.counts.any(axis=1).all():
            raise IngestionError("empty document row in bag-of-words matrix")

    @property
    def num_docs(self) -> int:
        return self.counts.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.counts.shape[1]


@dataclass
class LabeledSplit:
    """Class labels for a set of documents, tagged with its train/test role."""

    doc_ids: list[str]
    labels: np.ndarray
    role: str

    def __post_init__(self):
        if self.role not in ("train", "test"):
            raise ValueError(f"role must be 'train' or 'test', got {self.role!r}")
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.doc_ids) != self.labels.shape[0]:
            raise ValueError("doc_ids and labels length mismatch")


def check_label_coverage(train: LabeledSplit, test: LabeledSplit) -> None:
    """Reject test splits containing classes never seen in training."""
    unseen = set(np.unique(test.labels)) - set(np.unique(train.labels))
    if unseen:
        raise IngestionError(f"test labels not present in train split: {sorted(unseen)}")


@dataclass
class AlignedReference:
    """Aligned document pairs (as word sets) used to estimate cross-lingual
    co-occurrence statistics."""

    pairs: list[tuple[frozenset, frozenset]]

    def __post_init__(self):
        if len(self.pairs) < 1:
            raise IngestionError("aligned reference must contain at least one pair")

    @property
    def n_ref(self) -> int:
        return len(self.pairs)


def build_vocabulary(raw_docs: list[list[str]], language_id: int,
                     min_df: int = 3, max_vocab: int = 5000) -> Vocabulary:
    """Build a vocabulary of words with document frequency >= min_df,
    truncated to the max_vocab most frequent.

    Ordering is document frequency descending with lexicographic tie-break,
    so it is invariant to permutations of the input documents.
    """
    if not raw_docs:
        raise IngestionError("empty corpus")
    if min_df < 1:
        raise ValueError(f"min_df must be >= 1, got {min_df}")
    if max_vocab < 1:
        raise ValueError(f"max_vocab must be >= 1, got {max_vocab}")

    df = Counter()
    for doc in raw_docs:
        df.update(set(doc))
    kept = [w for w, c in df.items() if c >= min_df]
    if not kept:
        raise IngestionError("vocabulary empty: no word reaches min_df")
    kept.sort(key=lambda w: (-df[w], w))
    return Vocabulary(language_id=language_id, tokens=kept[:max_vocab])


def vectorize(raw_docs: list[list[str]], vocab: Vocabulary,
              doc_ids: list[str] | None = None) -> tuple[BowMatrix, list[int]]:
    """Count in-vocabulary tokens per document.

    Documents with no in-vocabulary token are dropped; their positions in
    raw_docs are returned alongside the matrix so callers can report them.
    """
    if doc_ids is None:
        doc_ids = [str(i) for i in range(len(raw_docs))]
    if len(doc_ids) != len(raw_docs):
        raise ValueError("doc_ids length does not match raw_docs")

    rows = []
    kept_ids = []
    dropped = []
    vsize = len(vocab)
    for pos, doc in enumerate(raw_docs):
        row = np.zeros(vsize, dtype=np.int64)
        for tok in doc:
            j = vocab.index.get(tok)
            if j is not None:
                row[j] += 1
        if row.any():
            rows.append(row)
            kept_ids.append(doc_ids[pos])
        else:
            dropped.append(pos)
    counts = np.stack(rows) if rows else np.zeros((0, vsize), dtype=np.int64)
    return BowMatrix(language_id=vocab.language_id, counts=counts, doc_ids=kept_ids), dropped


def _read_lines(path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    if text.endswith("\n"):
        text = text[:-1]
    return text.split("\n") if text else []


def load_corpus(path, labels_path=None) -> tuple[list[list[str]], np.ndarray | None]:
    """Load a one-document-per-line corpus and, optionally, a parallel
    one-integer-per-line label file.

    Blank lines and malformed spacing are rejected with their line number;
    a label file whose line count differs from the corpus is an error.
    """
    lines = _read_lines(path)
    if not lines:
        raise IngestionError(f"empty corpus file: {path}")
    docs = []
    for i, line in enumerate(lines):
        line = line.rstrip("\r")
        if not line.strip():
            raise IngestionError(f"blank document at line {i + 1} of {path}")
        tokens = line.split(" ")
        if any(t == "" for t in tokens):
            raise IngestionError(f"malformed spacing at line {i + 1} of {path}")
        docs.append(tokens)

    labels = None
    if labels_path is not None:
        label_lines = _read_lines(labels_path)
        if len(label_lines) != len(docs):
            raise IngestionError(
                f"label count mismatch: {len(docs)} documents in {path} "
                f"vs {len(label_lines)} labels in {labels_path}")
        values = []
        for i, line in enumerate(label_lines):
            try:
                values.append(int(line.strip()))
            except ValueError:
                raise IngestionError(
                    f"non-integer label at line {i + 1} of {labels_path}") from None
        labels = np.asarray(values, dtype=np.int64)
    return docs, labels


def load_aligned_reference(path1, path2, vocab1: Vocabulary,
                           vocab2: Vocabulary) -> AlignedReference:
    """Load two equal-length corpus files; line i of each forms an aligned
    pair. Out-of-vocabulary words are dropped from each side."""
    docs1, _ = load_corpus(path1)
    docs2, _ = load_corpus(path2)
    if len(docs1) != len(docs2):
        raise IngestionError(
            f"aligned reference length mismatch: {len(docs1)} lines in {path1} "
            f"vs {len(docs2)} lines in {path2}")
    pairs = [
        (frozenset(w for w in d1 if w in vocab1),
         frozenset(w for w in d2 if w in vocab2))
        for d1, d2 in zip(docs1, docs2)
    ]
    return AlignedReference(pairs=pairs)
