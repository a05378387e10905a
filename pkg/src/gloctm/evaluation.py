"""Topic-quality and transfer metrics: cross-lingual NPMI coherence, topic
uniqueness, their product, linear-SVM classification from topic features,
and Hungarian matching against planted ground truth."""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.svm import LinearSVC

from .corpus import AlignedReference, Vocabulary
from .errors import GloctmError
from .model import GloctmModel, top_words


@dataclass
class TopicSet:
    """Top-word lists per topic, one list per language."""

    lang1: list[list[str]]
    lang2: list[list[str]]

    def __post_init__(self):
        if len(self.lang1) != len(self.lang2):
            raise GloctmError("per-language topic counts differ")
        lengths = {len(ws) for ws in self.lang1} | {len(ws) for ws in self.lang2}
        if len(lengths) > 1:
            raise GloctmError("all top-word lists must share one length")

    @property
    def num_topics(self) -> int:
        return len(self.lang1)

    @property
    def top_count(self) -> int:
        return len(self.lang1[0]) if self.lang1 else 0


def build_topic_set(model: GloctmModel, vocab1: Vocabulary, vocab2: Vocabulary,
                    count: int = 15) -> TopicSet:
    ks = range(model.config.num_topics)
    return TopicSet(
        lang1=[top_words(model, vocab1, vocab2, 1, k, count) for k in ks],
        lang2=[top_words(model, vocab1, vocab2, 2, k, count) for k in ks],
    )


@dataclass
class MetricReport:
    """Metric bundle; the quality score is always derived as
    max(cnpmi, 0) * tu."""

    cnpmi: float
    tu: float
    per_topic_cnpmi: list[float]
    accuracies: dict[str, float] | None = None
    tq: float = field(init=False)

    def __post_init__(self):
        self.tq = topic_quality(self.cnpmi, self.tu)

    def to_json(self) -> str:
        payload = {
            "cnpmi": self.cnpmi,
            "tu": self.tu,
            "tq": self.tq,
            "per_topic_cnpmi": self.per_topic_cnpmi,
            "accuracies": self.accuracies,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_tsv(self) -> str:
        rows = [("cnpmi", self.cnpmi), ("tu", self.tu), ("tq", self.tq)]
        if self.accuracies:
            rows.extend(sorted(self.accuracies.items()))
        return "".join(f"{k}\t{v:.6f}\n" for k, v in rows)


def _npmi(p_joint: float, p1: float, p2: float) -> float:
    if p1 == 0.0 or p2 == 0.0:
        return 0.0
    if p_joint == 0.0:
        return -1.0
    if p_joint == 1.0:
        return 0.0
    return math.log(p_joint / (p1 * p2)) / (-math.log(p_joint))


def cnpmi(topics: TopicSet, reference: AlignedReference) -> tuple[float, list[float]]:
    """Mean over topics of the average NPMI over all cross-lingual top-word
    pairs, estimated from aligned reference pairs.

    Marginals are per-side document frequencies; a pair that never co-occurs
    scores -1, a pair with a zero marginal scores 0, and a pair present in
    every reference document scores 0.
    """
    n_ref = reference.n_ref
    df1: Counter = Counter()
    df2: Counter = Counter()
    occ1: dict[str, set[int]] = defaultdict(set)
    occ2: dict[str, set[int]] = defaultdict(set)
    for i, (side1, side2) in enumerate(reference.pairs):
        for w in side1:
            df1[w] += 1
            occ1[w].add(i)
        for w in side2:
            df2[w] += 1
            occ2[w].add(i)

    per_topic = []
    for words1, words2 in zip(topics.lang1, topics.lang2):
        total = 0.0
        for w1 in words1:
            for w2 in words2:
                p1 = df1[w1] / n_ref
                p2 = df2[w2] / n_ref
                joint = len(occ1[w1] & occ2[w2]) / n_ref if p1 and p2 else 0.0
                total += _npmi(joint, p1, p2)
        per_topic.append(total / (len(words1) * len(words2)))
    return float(np.mean(per_topic)), per_topic


def topic_uniqueness(topics: TopicSet, pooling: str = "per_language") -> float:
    """Inverse-redundancy diversity over the top words.

    Each word contributes 1/cnt(w) where cnt(w) is the number of topics
    whose lists contain it; with pooling="per_language" the count stays
    inside the word's own language's lists, with "pooled" it runs over both.
    """
    if pooling not in ("per_language", "pooled"):
        raise GloctmError(f"unknown pooling {pooling!r}")
    k = topics.num_topics
    t = topics.top_count
    if k == 0 or t == 0:
        raise GloctmError("empty topic set")

    def topic_counts(lists):
        cnt: Counter = Counter()
        for words in lists:
            cnt.update(set(words))
        return cnt

    if pooling == "per_language":
        cnt1 = topic_counts(topics.lang1)
        cnt2 = topic_counts(topics.lang2)
    else:
        merged = [list(w1) + list(w2) for w1, w2 in zip(topics.lang1, topics.lang2)]
        cnt1 = cnt2 = topic_counts(merged)

    total = 0.0
    for words1, words2 in zip(topics.lang1, topics.lang2):
        inner = sum(1.0 / cnt1[w] for w in words1) + sum(1.0 / cnt2[w] for w in words2)
        total += inner / (2 * t)
    return total / k


def topic_quality(cnpmi_value: float, tu_value: float) -> float:
    return max(cnpmi_value, 0.0) * tu_value


def classify(theta_train: np.ndarray, labels_train: np.ndarray,
             theta_test: np.ndarray, labels_test: np.ndarray,
             c: float = 1.0, seed: int = 0) -> float:
    """Accuracy of a linear max-margin classifier (one-vs-rest) trained on
    topic-proportion features."""
    clf = LinearSVC(C=c, random_state=seed, max_iter=20000)
    clf.fit(theta_train, labels_train)
    return float(np.mean(clf.predict(theta_test) == labels_test))


def match_planted_topics(topics: TopicSet, planted_lang1: list[set],
                         planted_lang2: list[set]
                         ) -> tuple[list[tuple[int, int]], float]:
    """Hungarian assignment of learned topics to planted topics, done
    independently per language on top-word overlap.

    planted_lang1[t] and planted_lang2[t] must describe the same planted
    topic (the translation map is the shared indexing). Returns per-learned-
    topic assigned planted indices (-1 when unassigned) and the fraction of
    learned topics whose two halves land on the same planted topic.
    """
    if len(planted_lang1) != len(planted_lang2):
        raise GloctmError("planted topic lists must have equal lengths")
    k = topics.num_topics
    if k == 0:
        raise GloctmError("empty topic set")

    def assign(word_lists, planted):
        overlap = np.zeros((k, len(planted)), dtype=np.float64)
        for i, words in enumerate(word_lists):
            ws = set(words)
            for j, truth in enumerate(planted):
                overlap[i, j] = len(ws & truth)
        rows, cols = linear_sum_assignment(-overlap)
        out = np.full(k, -1, dtype=np.int64)
        out[rows] = cols
        return out

    a1 = assign(topics.lang1, [set(s) for s in planted_lang1])
    a2 = assign(topics.lang2, [set(s) for s in planted_lang2])
    matching = [(int(a1[i]), int(a2[i])) for i in range(k)]
    agree = sum(1 for p1, p2 in matching if p1 != -1 and p1 == p2)
    return matching, agree / k
