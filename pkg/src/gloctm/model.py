"""Dual-pathway variational topic model.

Two language-specific encoders process per-language count vectors; one
shared encoder processes augmented joint-vocabulary vectors. Every pathway
yields a diagonal-Gaussian posterior whose sampled latent is mapped to
topic proportions by a softmax. Per-language decoders use the per-language
topic-word logits; the shared decoder uses their horizontal concatenation,
softmaxed over the joint vocabulary, so both halves of a topic row compete
for the same probability mass.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from .corpus import Vocabulary
from .errors import GloctmError

DTYPE = torch.float64
LOG_VAR_MIN = -10.0
LOG_VAR_MAX = 10.0
PROB_FLOOR = 1e-10

PATHWAYS = ("local1", "local2", "global")

# Weighted loss parts that must sum to the reported total.
PART_KEYS = ("elbo_local1", "elbo_local2", "elbo_global",
             "align_weighted", "cka_weighted")

CHECKPOINT_FORMAT = "gloctm-checkpoint-v1"


@dataclass
class ModelConfig:
    num_topics: int = 20
    hidden_dim: int = 200
    dropout: float = 0.2
    lambda1: float = 1.0
    lambda2: float = 1.0
    topk_intra: int = 5
    topk_cross: int = 5
    align_variant: str = "kl"          # kl | sim | none
    cka_enabled: bool = True
    prior: str = "standard_normal"     # standard_normal | laplace_dirichlet
    prior_alpha: float = 0.02
    cka_input: str = "theta"           # theta | z
    detach_global_align: bool = False

    def validate(self) -> None:
        if self.num_topics < 2:
            raise GloctmError(f"num_topics must be >= 2, got {self.num_topics}")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise GloctmError("loss weights lambda1/lambda2 must be >= 0")
        if not 0.0 <= self.dropout < 1.0:
            raise GloctmError(f"dropout must be in [0, 1), got {self.dropout}")
        if self.align_variant not in ("kl", "sim", "none"):
            raise GloctmError(f"unknown align_variant {self.align_variant!r}")
        if self.prior not in ("standard_normal", "laplace_dirichlet"):
            raise GloctmError(f"unknown prior {self.prior!r}")
        if self.prior == "laplace_dirichlet" and self.prior_alpha <= 0:
            raise GloctmError("prior_alpha must be positive")
        if self.cka_input not in ("theta", "z"):
            raise GloctmError(f"unknown cka_input {self.cka_input!r}")
        if self.hidden_dim < 1:
            raise GloctmError("hidden_dim must be >= 1")
        if self.topk_intra < 0 or self.topk_cross < 0:
            raise GloctmError("topk_intra/topk_cross must be >= 0")


@dataclass
class GaussianPosterior:
    """Diagonal Gaussian (mu, log variance), one row per document."""

    mu: torch.Tensor
    log_var: torch.Tensor

    def __post_init__(self):
        if self.mu.shape != self.log_var.shape:
            raise GloctmError("mu and log_var shapes differ")

    @property
    def batch_size(self) -> int:
        return self.mu.shape[0]

    def slice(self, start: int, stop: int) -> "GaussianPosterior":
        return GaussianPosterior(self.mu[start:stop], self.log_var[start:stop])


class Encoder(nn.Module):
    """Counts -> L1 normalize -> affine -> softplus -> dropout -> (mu, log_var)."""

    def __init__(self, input_dim: int, hidden_dim: int, num_topics: int, dropout: float):
        super().__init__()
        self.hidden = nn.Linear(input_dim, hidden_dim, dtype=DTYPE)
        self.mu_head = nn.Linear(hidden_dim, num_topics, dtype=DTYPE)
        self.log_var_head = nn.Linear(hidden_dim, num_topics, dtype=DTYPE)
        self.drop = nn.Dropout(dropout)

    def forward(self, x: torch.Tensor) -> GaussianPosterior:
        if x.ndim != 2 or x.shape[1] != self.hidden.in_features:
            raise GloctmError(
                f"encoder expects width {self.hidden.in_features}, got {tuple(x.shape)}")
        row_sums = x.sum(dim=1, keepdim=True)
        if (row_sums <= 0).any():
            raise GloctmError("encoder input contains an all-zero row")
        h = F.softplus(self.hidden(x / row_sums))
        h = self.drop(h)
        mu = self.mu_head(h)
        log_var = self.log_var_head(h).clamp(LOG_VAR_MIN, LOG_VAR_MAX)
        return GaussianPosterior(mu=mu, log_var=log_var)


class GloctmModel(nn.Module):
    """Holds the three encoders and both per-language topic-word logit matrices."""

    def __init__(self, config: ModelConfig, vocab_size1: int, vocab_size2: int):
        super().__init__()
        config.validate()
        if vocab_size1 < 1 or vocab_size2 < 1:
            raise GloctmError("both vocabularies must be non-empty")
        self.config = config
        self.vocab_size1 = vocab_size1
        self.vocab_size2 = vocab_size2
        k, h, p = config.num_topics, config.hidden_dim, config.dropout
        self.encoders = nn.ModuleDict({
            "local1": Encoder(vocab_size1, h, k, p),
            "local2": Encoder(vocab_size2, h, k, p),
            "global": Encoder(vocab_size1 + vocab_size2, h, k, p),
        })
        self.beta1 = nn.Parameter(torch.empty(k, vocab_size1, dtype=DTYPE))
        self.beta2 = nn.Parameter(torch.empty(k, vocab_size2, dtype=DTYPE))
        nn.init.xavier_uniform_(self.beta1)
        nn.init.xavier_uniform_(self.beta2)

    def encode(self, pathway: str, x: torch.Tensor) -> GaussianPosterior:
        if pathway not in PATHWAYS:
            raise GloctmError(f"unknown pathway {pathway!r}")
        return self.encoders[pathway](x)

    def global_beta(self) -> torch.Tensor:
        return torch.cat([self.beta1, self.beta2], dim=1)

    def decode_local(self, theta: torch.Tensor, language_id: int) -> torch.Tensor:
        beta = self.beta1 if language_id == 1 else self.beta2
        return theta @ torch.softmax(beta, dim=1)

    def decode_global(self, theta: torch.Tensor) -> torch.Tensor:
        return theta @ torch.softmax(self.global_beta(), dim=1)


def reparameterize(post: GaussianPosterior, noise: torch.Tensor) -> torch.Tensor:
    """z = mu + exp(log_var / 2) * noise; zero noise recovers the mean."""
    if noise.shape != post.mu.shape:
        raise GloctmError("noise shape does not match posterior shape")
    return post.mu + torch.exp(0.5 * post.log_var) * noise


def proportions(z: torch.Tensor) -> torch.Tensor:
    """Row-wise softmax onto the topic simplex."""
    return torch.softmax(z, dim=1)


def gaussian_kl(mu_q: torch.Tensor, log_var_q: torch.Tensor,
                mu_p: torch.Tensor, log_var_p: torch.Tensor) -> torch.Tensor:
    """Closed-form KL(q || p) between diagonal Gaussians, summed over
    dimensions, one value per row."""
    var_q = torch.exp(log_var_q)
    inv_var_p = torch.exp(-log_var_p)
    terms = log_var_p - log_var_q + (var_q + (mu_q - mu_p) ** 2) * inv_var_p - 1.0
    return 0.5 * terms.sum(dim=1)


def prior_params(config: ModelConfig) -> tuple[torch.Tensor, torch.Tensor]:
    """Mean and log variance of the latent prior, shape (num_topics,).

    The Dirichlet option uses the standard Laplace approximation of a
    symmetric Dirichlet in softmax basis: zero mean, variance
    (1 - 1/K) / alpha per coordinate.
    """
    k = config.num_topics
    mu = torch.zeros(k, dtype=DTYPE)
    if config.prior == "standard_normal":
        log_var = torch.zeros(k, dtype=DTYPE)
    else:
        var = (1.0 - 1.0 / k) / config.prior_alpha
        log_var = torch.full((k,), float(np.log(var)), dtype=DTYPE)
    return mu, log_var


def reconstruction_loss(x: torch.Tensor, p: torch.Tensor) -> torch.Tensor:
    """Negative log-likelihood of counts under row-stochastic p, summed per
    document and averaged over the batch."""
    if x.shape != p.shape:
        raise GloctmError("counts and probabilities shapes differ")
    return -(x * torch.log(p + PROB_FLOOR)).sum(dim=1).mean()


def posterior_prior_kl(post: GaussianPosterior, config: ModelConfig) -> torch.Tensor:
    """Mean over the batch of KL(posterior || prior)."""
    mu_p, log_var_p = prior_params(config)
    return gaussian_kl(post.mu, post.log_var,
                       mu_p.expand_as(post.mu), log_var_p.expand_as(post.log_var)).mean()


def elbo_loss(x: torch.Tensor, p: torch.Tensor, post: GaussianPosterior,
              config: ModelConfig) -> torch.Tensor:
    """Reconstruction negative log-likelihood plus KL to the prior."""
    return reconstruction_loss(x, p) + posterior_prior_kl(post, config)


def kl_align_loss(local: GaussianPosterior, glob: GaussianPosterior,
                  detach_global: bool = False) -> torch.Tensor:
    """Mean over the batch of KL(local posterior || global posterior)."""
    per_doc = kl_align_per_doc(local, glob, detach_global)
    return per_doc.mean()


def kl_align_per_doc(local: GaussianPosterior, glob: GaussianPosterior,
                     detach_global: bool = False) -> torch.Tensor:
    if local.mu.shape != glob.mu.shape:
        raise GloctmError("local/global posterior batch shapes differ")
    mu_g, log_var_g = glob.mu, glob.log_var
    if detach_global:
        mu_g, log_var_g = mu_g.detach(), log_var_g.detach()
    return gaussian_kl(local.mu, local.log_var, mu_g, log_var_g)


def sim_align_per_doc(local: GaussianPosterior, glob: GaussianPosterior,
                      detach_global: bool = False) -> torch.Tensor:
    """1 - cosine similarity of posterior means, one value per document."""
    if local.mu.shape != glob.mu.shape:
        raise GloctmError("local/global posterior batch shapes differ")
    mu_g = glob.mu.detach() if detach_global else glob.mu
    return 1.0 - F.cosine_similarity(local.mu, mu_g, dim=1)


def _centered(a: torch.Tensor) -> torch.Tensor:
    return a - a.mean(dim=0, keepdim=True)


def cka(a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    """Linear-kernel centered kernel alignment between two representations
    with matching row counts.

    Computed in feature space: with column-centered Ac, Bc this equals
    tr(K H L H) / sqrt(tr(K H K H) tr(L H L H)) for Gram matrices
    K = A A^T, L = B B^T and centering H = I - (1/n) 11^T.
    """
    a = torch.as_tensor(a, dtype=DTYPE)
    b = torch.as_tensor(b, dtype=DTYPE)
    if a.ndim != 2 or b.ndim != 2:
        raise GloctmError("cka expects 2-d matrices")
    n = a.shape[0]
    if n < 2 or b.shape[0] != n:
        raise GloctmError(f"cka needs matching row counts >= 2, got {a.shape[0]} and {b.shape[0]}")

    ac, bc = _centered(a), _centered(b)
    for mat, orig in ((ac, a), (bc, b)):
        scale = float(torch.linalg.matrix_norm(orig.detach()))
        if float(torch.linalg.matrix_norm(mat.detach())) <= 1e-12 * max(1.0, scale):
            raise GloctmError("degenerate representation: constant rows give zero self-HSIC")

    cross = torch.linalg.matrix_norm(ac.T @ bc) ** 2
    self_a = torch.linalg.matrix_norm(ac.T @ ac)
    self_b = torch.linalg.matrix_norm(bc.T @ bc)
    return cross / (self_a * self_b)


def cka_loss(theta_by_lang: dict[int, torch.Tensor],
             emb_by_lang: dict[int, torch.Tensor]) -> tuple[torch.Tensor, int]:
    """Sum over languages of 1 - cka(representation, embedding).

    Languages with fewer than two documents in the batch are skipped; the
    number of skips is returned for reporting.
    """
    total = torch.zeros((), dtype=DTYPE)
    skipped = 0
    for lang in sorted(theta_by_lang):
        rep = theta_by_lang[lang]
        if rep.shape[0] < 2:
            skipped += 1
            continue
        emb = emb_by_lang.get(lang)
        if emb is None:
            raise GloctmError(f"document embeddings required for language {lang}")
        total = total + (1.0 - cka(rep, emb))
    return total, skipped


@dataclass
class Batch:
    """One minibatch: per-language counts, augmented rows, and optional
    document embeddings. Either language may be absent."""

    x1: torch.Tensor | None = None
    g1: torch.Tensor | None = None
    emb1: torch.Tensor | None = None
    x2: torch.Tensor | None = None
    g2: torch.Tensor | None = None
    emb2: torch.Tensor | None = None

    def __post_init__(self):
        for x, g, emb, lang in ((self.x1, self.g1, self.emb1, 1),
                                (self.x2, self.g2, self.emb2, 2)):
            if (x is None) != (g is None):
                raise GloctmError(f"language {lang}: counts and augmented rows must come together")
            if x is not None and x.shape[0] != g.shape[0]:
                raise GloctmError(f"language {lang}: counts/augmented row counts differ")
            if emb is not None and (x is None or emb.shape[0] != x.shape[0]):
                raise GloctmError(f"language {lang}: embedding row count mismatch")
        if self.num_docs == 0:
            raise GloctmError("empty batch")

    @property
    def n1(self) -> int:
        return 0 if self.x1 is None else self.x1.shape[0]

    @property
    def n2(self) -> int:
        return 0 if self.x2 is None else self.x2.shape[0]

    @property
    def num_docs(self) -> int:
        return self.n1 + self.n2

    def present(self):
        if self.x1 is not None:
            yield 1, self.x1, self.g1, self.emb1
        if self.x2 is not None:
            yield 2, self.x2, self.g2, self.emb2


def _noise_like(mu: torch.Tensor, provided: torch.Tensor | None,
                training: bool) -> torch.Tensor:
    if provided is not None:
        return provided
    if training:
        return torch.randn_like(mu)
    return torch.zeros_like(mu)


def total_loss(model: GloctmModel, batch: Batch,
               noise: dict[str, torch.Tensor] | None = None
               ) -> tuple[torch.Tensor, dict[str, float]]:
    """Evaluate the full objective on one batch.

    Returns the differentiable total plus a per-term breakdown; the entries
    named by PART_KEYS sum to the total. `noise` may pin the reparameterized
    draws per pathway; otherwise they are sampled in training mode and zero
    in eval mode.
    """
    cfg = model.config
    noise = noise or {}

    g_rows = torch.cat([g for _, _, g, _ in batch.present()], dim=0)
    post_g = model.encode("global", g_rows)
    z_g = reparameterize(post_g, _noise_like(post_g.mu, noise.get("global"), model.training))
    theta_g = proportions(z_g)
    recon_g = reconstruction_loss(g_rows, model.decode_global(theta_g))
    klp_g = posterior_prior_kl(post_g, cfg)

    breakdown = {
        "recon_global": recon_g.item(),
        "kl_prior_global": klp_g.item(),
        "elbo_global": (recon_g + klp_g).item(),
    }
    total = recon_g + klp_g

    align_per_doc = []
    reps, embs = {}, {}
    offset = 0
    for lang, x, _, emb in batch.present():
        post_l = model.encode(f"local{lang}", x)
        z_l = reparameterize(post_l, _noise_like(post_l.mu, noise.get(f"local{lang}"),
                                                 model.training))
        theta_l = proportions(z_l)
        recon_l = reconstruction_loss(x, model.decode_local(theta_l, lang))
        klp_l = posterior_prior_kl(post_l, cfg)
        total = total + recon_l + klp_l
        breakdown[f"recon_local{lang}"] = recon_l.item()
        breakdown[f"kl_prior_local{lang}"] = klp_l.item()
        breakdown[f"elbo_local{lang}"] = (recon_l + klp_l).item()

        post_g_slice = post_g.slice(offset, offset + x.shape[0])
        if cfg.align_variant == "kl":
            align_per_doc.append(kl_align_per_doc(post_l, post_g_slice,
                                                  cfg.detach_global_align))
        elif cfg.align_variant == "sim":
            align_per_doc.append(sim_align_per_doc(post_l, post_g_slice,
                                                   cfg.detach_global_align))
        reps[lang] = theta_l if cfg.cka_input == "theta" else z_l
        if emb is not None:
            embs[lang] = emb
        offset += x.shape[0]

    for lang in (1, 2):
        breakdown.setdefault(f"recon_local{lang}", 0.0)
        breakdown.setdefault(f"kl_prior_local{lang}", 0.0)
        breakdown.setdefault(f"elbo_local{lang}", 0.0)

    if align_per_doc and cfg.align_variant != "none":
        align = torch.cat(align_per_doc).mean()
    else:
        align = torch.zeros((), dtype=DTYPE)
    total = total + cfg.lambda1 * align
    breakdown["align"] = align.item()
    breakdown["align_weighted"] = (cfg.lambda1 * align).item()

    skipped = 0
    if cfg.cka_enabled:
        cka_term, skipped = cka_loss(reps, embs)
    else:
        cka_term = torch.zeros((), dtype=DTYPE)
    total = total + cfg.lambda2 * cka_term
    breakdown["cka"] = cka_term.item()
    breakdown["cka_weighted"] = (cfg.lambda2 * cka_term).item()
    breakdown["cka_skipped"] = float(skipped)
    breakdown["total"] = total.item()
    return total, breakdown


def top_words(model: GloctmModel, vocab1: Vocabulary, vocab2: Vocabulary,
              which, topic_index: int, count: int) -> list[str]:
    """Words with the largest logits in one topic row.

    `which` is 1, 2, or "global"; the global row ranks the concatenated
    logits over the joint vocabulary. Ties break by ascending index.
    """
    if which == 1:
        logits, tokens = model.beta1[topic_index], vocab1.tokens
    elif which == 2:
        logits, tokens = model.beta2[topic_index], vocab2.tokens
    elif which == "global":
        logits = model.global_beta()[topic_index]
        tokens = list(vocab1.tokens) + list(vocab2.tokens)
    else:
        raise GloctmError(f"which must be 1, 2, or 'global', got {which!r}")
    if count > len(tokens):
        raise GloctmError(f"requested {count} words but vocabulary has {len(tokens)}")
    values = logits.detach().numpy()
    order = np.lexsort((np.arange(values.shape[0]), -values))
    return [tokens[j] for j in order[:count]]


def export_topics(model: GloctmModel, vocab1: Vocabulary, vocab2: Vocabulary,
                  count: int = 15) -> str:
    """One line per topic: `topic_id<TAB>lang1 words<TAB>lang2 words`."""
    lines = []
    for k in range(model.config.num_topics):
        w1 = top_words(model, vocab1, vocab2, 1, k, count)
        w2 = top_words(model, vocab1, vocab2, 2, k, count)
        lines.append(f"{k}\t{' '.join(w1)}\t{' '.join(w2)}")
    return "\n".join(lines) + "\n"


@dataclass
class Checkpoint:
    model: GloctmModel
    vocab1: Vocabulary
    vocab2: Vocabulary
    epoch: int
    optimizer_state: dict | None = None
    rng_state: torch.Tensor | None = None
    train_config: dict | None = None


def save_checkpoint(path, model: GloctmModel, vocab1: Vocabulary, vocab2: Vocabulary,
                    *, epoch: int = 0, optimizer=None,
                    rng_state: torch.Tensor | None = None,
                    train_config: dict | None = None) -> None:
    payload = {
        "format": CHECKPOINT_FORMAT,
        "model_config": asdict(model.config),
        "vocab1_tokens": list(vocab1.tokens),
        "vocab2_tokens": list(vocab2.tokens),
        "vocab1_sha256": vocab1.sha256(),
        "vocab2_sha256": vocab2.sha256(),
        "state_dict": model.state_dict(),
        "optimizer_state": optimizer.state_dict() if optimizer is not None else None,
        "rng_state": rng_state,
        "epoch": epoch,
        "train_config": train_config,
    }
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    torch.save(payload, path)


def load_checkpoint(path) -> Checkpoint:
    try:
        payload = torch.load(path, weights_only=False)
    except Exception as exc:
        raise GloctmError(f"cannot read checkpoint {path}: {exc}") from exc
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise GloctmError(
            f"unsupported checkpoint format {payload.get('format')!r} in {path}")
    vocab1 = Vocabulary(language_id=1, tokens=payload["vocab1_tokens"])
    vocab2 = Vocabulary(language_id=2, tokens=payload["vocab2_tokens"])
    for vocab, key in ((vocab1, "vocab1_sha256"), (vocab2, "vocab2_sha256")):
        if vocab.sha256() != payload[key]:
            raise GloctmError(f"vocabulary hash mismatch in checkpoint {path}")
    config = ModelConfig(**payload["model_config"])
    model = GloctmModel(config, len(vocab1), len(vocab2))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return Checkpoint(model=model, vocab1=vocab1, vocab2=vocab2,
                      epoch=payload["epoch"],
                      optimizer_state=payload["optimizer_state"],
                      rng_state=payload["rng_state"],
                      train_config=payload["train_config"])
