"""Independent reference implementations used to check the package.

These deliberately take the slow, literal route (double loops, explicit
Gram matrices, Monte Carlo) and share no code with the library.
"""

import numpy as np


def brute_force_augment(counts_row, language_id, intra_lists, cross_lists,
                        vocab_size1, vocab_size2, base="iverson"):
    """Literal evaluation of the two enriched-count formulas for one doc.

    intra_lists / cross_lists are the neighbor lists for the document's own
    language. Returns the joint-vocabulary row in [lang1 | lang2] layout.
    """
    active = [w for w in range(len(counts_row)) if counts_row[w] > 0]
    size_self = vocab_size1 if language_id == 1 else vocab_size2
    size_other = vocab_size2 if language_id == 1 else vocab_size1

    own = np.zeros(size_self, dtype=np.int64)
    for j in range(size_self):
        for w in active:
            own[j] += int(j == w) + int(j in set(intra_lists[w]))
    if base == "counts":
        for w in active:
            own[w] += counts_row[w] - 1

    other = np.zeros(size_other, dtype=np.int64)
    for j in range(size_other):
        for w in active:
            other[j] += int(j in set(cross_lists[w]))

    if language_id == 1:
        return np.concatenate([own, other])
    return np.concatenate([other, own])


def brute_force_neighbors(query, candidate_vectors, candidate_indices, k):
    """Top-k cosine neighbors by explicit pairwise scoring.

    Zero-norm candidates are skipped; ties break on the smaller index. The
    caller controls self-exclusion through candidate_indices.
    """
    qn = np.linalg.norm(query)
    if qn == 0 or k == 0:
        return []
    scored = []
    for j in candidate_indices:
        v = candidate_vectors[j]
        n = np.linalg.norm(v)
        if n == 0:
            continue
        scored.append((-float(np.dot(query, v) / (qn * n)), j))
    scored.sort()
    return [j for _, j in scored[:k]]


def gram_cka(a, b):
    """CKA via explicit Gram matrices and the centering matrix."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[0]
    h = np.eye(n) - np.ones((n, n)) / n

    def hsic(k, l):
        return np.trace(k @ h @ l @ h) / (n - 1) ** 2

    k, l = a @ a.T, b @ b.T
    return hsic(k, l) / np.sqrt(hsic(k, k) * hsic(l, l))


def mc_gaussian_kl(mu_q, var_q, mu_p, var_p, n_samples, seed):
    """Monte Carlo estimate of KL(q || p) for diagonal Gaussians.

    Returns (estimate, standard error of the estimate).
    """
    rng = np.random.default_rng(seed)
    mu_q, var_q = np.asarray(mu_q, float), np.asarray(var_q, float)
    mu_p, var_p = np.asarray(mu_p, float), np.asarray(var_p, float)
    z = mu_q + np.sqrt(var_q) * rng.standard_normal((n_samples, mu_q.shape[0]))

    def log_density(z, mu, var):
        return -0.5 * (np.log(2 * np.pi * var) + (z - mu) ** 2 / var).sum(axis=1)

    values = log_density(z, mu_q, var_q) - log_density(z, mu_p, var_p)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(n_samples))
