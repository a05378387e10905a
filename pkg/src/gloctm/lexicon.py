"""Word/document embedding tables, exact top-k cosine neighbor retrieval,
and construction of augmented joint-vocabulary document vectors.

A document's vector over the joint vocabulary is built from its set of
active words: each active word contributes itself (once, regardless of its
count) plus one unit for every active word that lists it as an intra-lingual
neighbor; columns of the other language receive one unit for every active
word that lists them as a cross-lingual neighbor. Columns are always laid
out as [language-1 block | language-2 block].
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .corpus import BowMatrix, Vocabulary
from .errors import GloctmError, IngestionError


@dataclass
class WordEmbeddingTable:
    """Per-word embedding rows aligned to a Vocabulary's token order.

    Words absent from the embedding file keep a zero row and are flagged in
    `missing`; zero-norm rows never participate in neighbor search.
    """

    language_id: int
    vectors: np.ndarray
    missing: np.ndarray

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        self.missing = np.asarray(self.missing, dtype=bool)
        if self.vectors.ndim != 2 or self.missing.shape != (self.vectors.shape[0],):
            raise ValueError("vectors must be (V, M) with a per-row missing flag")
        if not np.isfinite(self.vectors).all():
            raise IngestionError("non-finite word embedding values")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def coverage(self) -> float:
        if self.missing.size == 0:
            return 0.0
        return float(1.0 - self.missing.mean())

    def zero_norm_mask(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=1) == 0.0


@dataclass
class DocEmbeddingTable:
    """Per-document embedding rows aligned to a BowMatrix's row order."""

    language_id: int
    vectors: np.ndarray
    doc_ids: list[str]

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.doc_ids):
            raise ValueError("vectors must have one row per doc_id")
        if not np.isfinite(self.vectors).all():
            raise IngestionError("non-finite document embedding values")


@dataclass
class NeighborIndex:
    """Exact top-k cosine neighbors per word.

    `intra[l][j]` holds the indices of word j's nearest neighbors inside
    language l (j itself excluded); `cross[l][j]` holds its nearest
    neighbors in the other language. Lists are sorted by similarity
    descending, ties broken by ascending index, and may be shorter than k
    when too few valid candidates exist.
    """

    intra: dict[int, list[np.ndarray]]
    cross: dict[int, list[np.ndarray]]
    k_intra: int
    k_cross: int
    vocab_sizes: tuple[int, int]


@dataclass
class GlobalBow:
    """Augmented documents over the joint vocabulary, fixed
    [language-1 | language-2] column layout."""

    rows: np.ndarray
    language_id: int
    doc_ids: list[str]
    vocab_sizes: tuple[int, int]

    def __post_init__(self):
        self.rows = np.asarray(self.rows)
        if self.rows.shape[1] != sum(self.vocab_sizes):
            raise ValueError("row width does not match joint vocabulary size")
        if self.rows.shape[0] and not self.rows.any(axis=1).all():
            raise GloctmError("internal error: all-zero augmented row")

    @property
    def num_docs(self) -> int:
        return self.rows.shape[0]


def _parse_header(first_line: str) -> bool:
    parts = first_line.split(" ")
    if len(parts) != 2:
        return False
    try:
        int(parts[0]), int(parts[1])
    except ValueError:
        return False
    return True


def load_word_embeddings(path, vocab: Vocabulary) -> WordEmbeddingTable:
    """Read `word v1 ... vM` lines into rows aligned with vocab order.

    An optional `COUNT DIM` header line is skipped. Mixed dimensions are an
    error; words missing from the file get a zero row and a missing flag.
    Zero coverage is an error.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    start = 1 if lines and _parse_header(lines[0]) else 0

    dim = None
    vectors = None
    seen = np.zeros(len(vocab), dtype=bool)
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        parts = line.rstrip("\r").split(" ")
        word, values = parts[0], parts[1:]
        if dim is None:
            dim = len(values)
            if dim == 0:
                raise IngestionError(f"no embedding values at line {lineno} of {path}")
            vectors = np.zeros((len(vocab), dim), dtype=np.float64)
        elif len(values) != dim:
            raise IngestionError(f"dimension mismatch at line {lineno} of {path}")
        j = vocab.index.get(word)
        if j is None or seen[j]:
            continue
        try:
            vectors[j] = [float(v) for v in values]
        except ValueError:
            raise IngestionError(f"non-numeric embedding value at line {lineno} of {path}") from None
        seen[j] = True

    if dim is None:
        raise IngestionError(f"empty embedding file: {path}")
    if not seen.any():
        raise IngestionError(f"no vocabulary word covered by {path}")
    return WordEmbeddingTable(language_id=vocab.language_id, vectors=vectors, missing=~seen)


def load_doc_embeddings(path, bow: BowMatrix) -> DocEmbeddingTable:
    """Read `doc_id v1 ... vM` lines and align rows to bow.doc_ids.

    Every document in the matrix must be covered; dimensions must agree.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    by_id = {}
    dim = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.rstrip("\r").split(" ")
        doc_id, values = parts[0], parts[1:]
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise IngestionError(f"dimension mismatch at line {lineno} of {path}")
        try:
            by_id[doc_id] = np.asarray([float(v) for v in values], dtype=np.float64)
        except ValueError:
            raise IngestionError(f"non-numeric embedding value at line {lineno} of {path}") from None

    missing = [d for d in bow.doc_ids if d not in by_id]
    if missing:
        raise IngestionError(
            f"document embeddings missing for {len(missing)} docs "
            f"(first: {missing[:3]}) in {path}")
    vectors = np.stack([by_id[d] for d in bow.doc_ids]) if bow.doc_ids else \
        np.zeros((0, dim or 0))
    return DocEmbeddingTable(language_id=bow.language_id, vectors=vectors,
                             doc_ids=list(bow.doc_ids))


def _topk_rows(sim: np.ndarray, k: int, valid_query: np.ndarray,
               valid_candidate: np.ndarray, min_cosine: float | None,
               exclude_diagonal: bool) -> list[np.ndarray]:
    """Exact per-row top-k with similarity-descending, index-ascending order."""
    n = sim.shape[0]
    sim = sim.copy()
    sim[:, ~valid_candidate] = -np.inf
    if exclude_diagonal:
        np.fill_diagonal(sim, -np.inf)
    if min_cosine is not None:
        sim[sim < min_cosine] = -np.inf

    out = []
    col_ids = np.arange(sim.shape[1])
    for j in range(n):
        if k == 0 or not valid_query[j]:
            out.append(np.zeros(0, dtype=np.int64))
            continue
        row = sim[j]
        order = np.lexsort((col_ids, -row))
        keep = order[: k]
        keep = keep[np.isfinite(row[keep])]
        out.append(keep.astype(np.int64))
    return out


def build_neighbor_index(emb1: WordEmbeddingTable, emb2: WordEmbeddingTable,
                         k_intra: int = 5, k_cross: int = 5,
                         min_cosine: float | None = None) -> NeighborIndex:
    """Exact top-k cosine neighbors within and across the two languages.

    Full similarity scan, no approximation. Zero-norm words get empty lists
    and never appear as candidates.
    """
    if k_intra < 0 or k_cross < 0:
        raise ValueError("neighbor counts must be >= 0")
    if {emb1.language_id, emb2.language_id} != {1, 2}:
        raise ValueError("need one embedding table per language")
    if emb1.language_id == 2:
        emb1, emb2 = emb2, emb1

    def unit_rows(table):
        norms = np.linalg.norm(table.vectors, axis=1)
        valid = norms > 0.0
        unit = np.zeros_like(table.vectors)
        unit[valid] = table.vectors[valid] / norms[valid, None]
        return unit, valid

    u1, valid1 = unit_rows(emb1)
    u2, valid2 = unit_rows(emb2)

    intra = {
        1: _topk_rows(u1 @ u1.T, k_intra, valid1, valid1, min_cosine, True),
        2: _topk_rows(u2 @ u2.T, k_intra, valid2, valid2, min_cosine, True),
    }
    cross = {
        1: _topk_rows(u1 @ u2.T, k_cross, valid1, valid2, min_cosine, False),
        2: _topk_rows(u2 @ u1.T, k_cross, valid2, valid1, min_cosine, False),
    }
    return NeighborIndex(intra=intra, cross=cross, k_intra=k_intra,
                         k_cross=k_cross,
                         vocab_sizes=(u1.shape[0], u2.shape[0]))


def _neighbor_matrix(lists: list[np.ndarray], n_cols: int) -> sp.csr_matrix:
    """Sparse 0/1 matrix with A[w, j] = 1 iff j is a neighbor of w."""
    rows = np.concatenate([np.full(len(nb), w, dtype=np.int64)
                           for w, nb in enumerate(lists)]) if lists else np.zeros(0, np.int64)
    cols = np.concatenate(lists) if lists else np.zeros(0, np.int64)
    data = np.ones(len(cols), dtype=np.int64)
    return sp.csr_matrix((data, (rows, cols)), shape=(len(lists), n_cols))


def augment(bow: BowMatrix, index: NeighborIndex, base: str = "iverson") -> GlobalBow:
    """Expand each document into the joint vocabulary.

    base="iverson" makes each active word contribute one unit to its own
    column (counts collapse to 1); base="counts" keeps the raw count for the
    word's own column. Neighbor contributions are always one unit per active
    word.
    """
    if base not in ("iverson", "counts"):
        raise ValueError(f"unknown augmentation base {base!r}")
    lang = bow.language_id
    size_self = index.vocab_sizes[lang - 1]
    size_other = index.vocab_sizes[2 - lang]
    if bow.vocab_size != size_self:
        raise ValueError("bag-of-words and neighbor index vocabulary sizes differ")

    active = (bow.counts > 0).astype(np.int64)
    a_intra = _neighbor_matrix(index.intra[lang], size_self)
    a_cross = _neighbor_matrix(index.cross[lang], size_other)

    base_block = active if base == "iverson" else bow.counts
    own_block = base_block + np.asarray(active @ a_intra)
    cross_block = np.asarray(active @ a_cross)

    if lang == 1:
        rows = np.hstack([own_block, cross_block])
    else:
        rows = np.hstack([cross_block, own_block])
    return GlobalBow(rows=rows, language_id=lang, doc_ids=list(bow.doc_ids),
                     vocab_sizes=index.vocab_sizes)


def write_sparse_triplets(rows: np.ndarray, path) -> None:
    """Write nonzero entries as `doc_index col_index value` lines."""
    docs, cols = np.nonzero(rows)
    with open(path, "w", encoding="utf-8") as fh:
        for d, c in zip(docs, cols):
            fh.write(f"{d} {c} {rows[d, c]}\n")


def read_sparse_triplets(path, shape: tuple[int, int]) -> np.ndarray:
    """Inverse of write_sparse_triplets for a known dense shape."""
    rows = np.zeros(shape, dtype=np.int64)
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            d, c, v = (int(p) for p in line.split(" "))
        except ValueError:
            raise IngestionError(f"malformed triplet at line {lineno} of {path}") from None
        rows[d, c] = v
    return rows
