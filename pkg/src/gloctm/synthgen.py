"""Synthetic bilingual corpora with planted shared topics.

Both languages share the same planted topic structure; vocabularies are
disjoint strings (`e_t3_w7` vs `f_t3_w7`) and the translation map is the
index-preserving bijection between them. Word embeddings sit near their
topic's one-hot centroid in both languages, so cosine neighbor retrieval
finds translation-cluster words, and document embeddings sit near the true
topic mixture, giving the representation-alignment loss real signal.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError


@dataclass
class PlantedSpec:
    num_topics: int = 5
    words_per_topic: int = 40
    docs_per_lang: int = 2000
    doc_length: int = 60
    topic_sparsity: float = 0.1
    noise_rate: float = 0.1
    seed: int = 0
    reference_pairs: int = 500
    embedding_jitter: float = 0.1
    doc_embedding_jitter: float = 0.05

    def validate(self) -> None:
        if self.num_topics < 1:
            raise ConfigError("num_topics must be >= 1")
        if self.words_per_topic < 1:
            raise ConfigError("words_per_topic must be >= 1")
        if self.docs_per_lang < 1:
            raise ConfigError("docs_per_lang must be >= 1")
        if self.doc_length < 1:
            raise ConfigError("doc_length must be >= 1")
        if self.topic_sparsity <= 0:
            raise ConfigError("topic_sparsity must be positive")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise ConfigError("noise_rate must lie in [0, 1]")
        if self.reference_pairs < 1:
            raise ConfigError("reference_pairs must be >= 1")
        if self.embedding_jitter < 0 or self.doc_embedding_jitter < 0:
            raise ConfigError("jitter values must be >= 0")


@dataclass
class PlantedTruth:
    """Ground-truth topic word sets and the cross-language word bijection."""

    topics_lang1: list[list[str]]
    topics_lang2: list[list[str]]
    translation: dict[str, str]


@dataclass
class SyntheticDataset:
    spec: PlantedSpec
    docs1: list[list[str]]
    docs2: list[list[str]]
    labels1: np.ndarray
    labels2: np.ndarray
    doc_embeddings1: np.ndarray
    doc_embeddings2: np.ndarray
    word_list1: list[str]
    word_list2: list[str]
    word_vectors1: np.ndarray
    word_vectors2: np.ndarray
    ref_docs1: list[list[str]]
    ref_docs2: list[list[str]]
    truth: PlantedTruth


def _word_lists(spec: PlantedSpec) -> tuple[list[str], list[str]]:
    lang1, lang2 = [], []
    for t in range(spec.num_topics):
        for i in range(spec.words_per_topic):
            lang1.append(f"e_t{t}_w{i}")
            lang2.append(f"f_t{t}_w{i}")
    return lang1, lang2


def _sample_doc(rng: np.random.Generator, theta: np.ndarray, words: list[str],
                spec: PlantedSpec) -> list[str]:
    wpt = spec.words_per_topic
    noisy = rng.random(spec.doc_length) < spec.noise_rate
    topics = rng.choice(spec.num_topics, size=spec.doc_length, p=theta)
    within = rng.integers(0, wpt, size=spec.doc_length)
    uniform = rng.integers(0, len(words), size=spec.doc_length)
    idx = np.where(noisy, uniform, topics * wpt + within)
    return [words[j] for j in idx]


def generate(spec: PlantedSpec) -> SyntheticDataset:
    """Draw the full dataset deterministically from the seed."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    k = spec.num_topics
    words1, words2 = _word_lists(spec)
    alpha = np.full(k, spec.topic_sparsity)

    def word_vectors(n_words):
        topic_of = np.arange(n_words) // spec.words_per_topic
        base = np.eye(k)[topic_of]
        return base + rng.normal(0.0, spec.embedding_jitter, size=(n_words, k))

    vectors1 = word_vectors(len(words1))
    vectors2 = word_vectors(len(words2))

    def corpus(words):
        docs, labels, embeds = [], [], []
        for _ in range(spec.docs_per_lang):
            theta = rng.dirichlet(alpha)
            docs.append(_sample_doc(rng, theta, words, spec))
            labels.append(int(theta.argmax()))
            embeds.append(theta + rng.normal(0.0, spec.doc_embedding_jitter, size=k))
        return docs, np.asarray(labels, dtype=np.int64), np.asarray(embeds)

    docs1, labels1, emb1 = corpus(words1)
    docs2, labels2, emb2 = corpus(words2)

    ref1, ref2 = [], []
    for _ in range(spec.reference_pairs):
        theta = rng.dirichlet(alpha)
        ref1.append(_sample_doc(rng, theta, words1, spec))
        ref2.append(_sample_doc(rng, theta, words2, spec))

    truth = PlantedTruth(
        topics_lang1=[words1[t * spec.words_per_topic:(t + 1) * spec.words_per_topic]
                      for t in range(k)],
        topics_lang2=[words2[t * spec.words_per_topic:(t + 1) * spec.words_per_topic]
                      for t in range(k)],
        translation=dict(zip(words1, words2)),
    )
    return SyntheticDataset(spec=spec, docs1=docs1, docs2=docs2,
                            labels1=labels1, labels2=labels2,
                            doc_embeddings1=emb1, doc_embeddings2=emb2,
                            word_list1=words1, word_list2=words2,
                            word_vectors1=vectors1, word_vectors2=vectors2,
                            ref_docs1=ref1, ref_docs2=ref2, truth=truth)


def _write_corpus(path: Path, docs: list[list[str]]) -> None:
    path.write_text("".join(" ".join(doc) + "\n" for doc in docs), encoding="utf-8")


def _write_labels(path: Path, labels: np.ndarray) -> None:
    path.write_text("".join(f"{v}\n" for v in labels), encoding="utf-8")


def _write_word_embeddings(path: Path, words: list[str], vectors: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for word, vec in zip(words, vectors):
            fh.write(word + " " + " ".join(f"{v:.8f}" for v in vec) + "\n")


def _write_doc_embeddings(path: Path, vectors: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, vec in enumerate(vectors):
            fh.write(str(i) + " " + " ".join(f"{v:.8f}" for v in vec) + "\n")


def write_dataset(data: SyntheticDataset, out_dir) -> dict[str, str]:
    """Write the standard corpus/label/embedding/reference files plus the
    planted truth; returns a manifest of the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus1": out / "corpus_lang1.txt",
        "corpus2": out / "corpus_lang2.txt",
        "labels1": out / "labels_lang1.txt",
        "labels2": out / "labels_lang2.txt",
        "word_emb1": out / "word_embeddings_lang1.txt",
        "word_emb2": out / "word_embeddings_lang2.txt",
        "doc_emb1": out / "doc_embeddings_lang1.txt",
        "doc_emb2": out / "doc_embeddings_lang2.txt",
        "ref1": out / "reference_lang1.txt",
        "ref2": out / "reference_lang2.txt",
        "truth": out / "planted_truth.json",
    }
    _write_corpus(paths["corpus1"], data.docs1)
    _write_corpus(paths["corpus2"], data.docs2)
    _write_labels(paths["labels1"], data.labels1)
    _write_labels(paths["labels2"], data.labels2)
    _write_word_embeddings(paths["word_emb1"], data.word_list1, data.word_vectors1)
    _write_word_embeddings(paths["word_emb2"], data.word_list2, data.word_vectors2)
    _write_doc_embeddings(paths["doc_emb1"], data.doc_embeddings1)
    _write_doc_embeddings(paths["doc_emb2"], data.doc_embeddings2)
    _write_corpus(paths["ref1"], data.ref_docs1)
    _write_corpus(paths["ref2"], data.ref_docs2)
    truth_payload = {
        "topics_lang1": data.truth.topics_lang1,
        "topics_lang2": data.truth.topics_lang2,
        "translation": data.truth.translation,
        "spec": asdict(data.spec),
    }
    paths["truth"].write_text(json.dumps(truth_payload, sort_keys=True, indent=2) + "\n",
                              encoding="utf-8")
    relative = {k: v.name for k, v in paths.items()}
    (out / "manifest.json").write_text(json.dumps(relative, sort_keys=True, indent=2) + "\n",
                                       encoding="utf-8")
    return {k: str(v) for k, v in paths.items()}


def load_truth(path) -> PlantedTruth:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return PlantedTruth(topics_lang1=payload["topics_lang1"],
                        topics_lang2=payload["topics_lang2"],
                        translation=payload["translation"])
