"""Minibatch training loop: seeding, checkpointing, resuming, per-epoch
loss reporting, and a multi-seed runner."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np
import torch

from .corpus import BowMatrix, Vocabulary
from .errors import ConfigError, GloctmError
from .lexicon import DocEmbeddingTable, GlobalBow
from .model import (DTYPE, PATHWAYS, Batch, GloctmModel, ModelConfig,
                    load_checkpoint, proportions, save_checkpoint, total_loss)


@dataclass
class TrainConfig:
    epochs: int = 500
    batch_size: int = 200
    learning_rate: float = 2e-3
    seed: int = 0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    checkpoint_every: int = 0
    eval_every: int = 0

    def validate(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 4:
            raise ConfigError(f"batch_size must be >= 4, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if not (0 <= self.adam_beta1 < 1 and 0 <= self.adam_beta2 < 1):
            raise ConfigError("moment decays must lie in [0, 1)")
        if self.adam_eps <= 0:
            raise ConfigError("adam_eps must be positive")
        if self.checkpoint_every < 0 or self.eval_every < 0:
            raise ConfigError("checkpoint_every/eval_every must be >= 0")


@dataclass
class TrainReport:
    """Per-epoch loss breakdown plus run metadata.

    Wall-clock time is kept on the object for logging but never serialized
    into the report file, so identical runs write identical bytes.
    """

    seed: int
    epochs: list[dict] = field(default_factory=list)
    wall_clock_s: float = 0.0
    cka_skipped: int = 0

    def to_jsonl(self) -> str:
        return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in self.epochs)

    def final(self) -> dict:
        if not self.epochs:
            raise GloctmError("empty training report")
        return self.epochs[-1]


@dataclass
class TrainData:
    """Aligned training inputs for both languages."""

    bow1: BowMatrix
    bow2: BowMatrix
    gbow1: GlobalBow
    gbow2: GlobalBow
    vocab1: Vocabulary
    vocab2: Vocabulary
    emb1: DocEmbeddingTable | None = None
    emb2: DocEmbeddingTable | None = None

    def validate(self, cka_enabled: bool) -> None:
        for bow, gbow, lang in ((self.bow1, self.gbow1, 1), (self.bow2, self.gbow2, 2)):
            if bow.language_id != lang or gbow.language_id != lang:
                raise ConfigError(f"language {lang} data carries a wrong language_id")
            if bow.doc_ids != gbow.doc_ids:
                raise ConfigError(f"language {lang}: augmented rows not aligned with counts")
        if (len(self.vocab1), len(self.vocab2)) != self.gbow1.vocab_sizes:
            raise ConfigError("vocabulary sizes do not match augmented row layout")
        if cka_enabled:
            for emb, bow, lang in ((self.emb1, self.bow1, 1), (self.emb2, self.bow2, 2)):
                if emb is None:
                    raise ConfigError(
                        f"cka_enabled requires document embeddings for language {lang}")
                if emb.doc_ids != bow.doc_ids:
                    raise ConfigError(f"language {lang}: embeddings not aligned with counts")


def _epoch_record(epoch: int, acc: dict[str, float], docs: int, skipped: float) -> dict:
    record = {k: v / docs for k, v in acc.items()}
    record["epoch"] = epoch
    record["cka_skipped"] = int(skipped)
    return record


def train(data: TrainData, model_config: ModelConfig, train_config: TrainConfig,
          out_dir=None, resume_from=None, log=None
          ) -> tuple[GloctmModel, TrainReport]:
    """Run the optimizer for the configured number of epochs.

    Deterministic given the seed: parameter init, shuffling, dropout, and
    reparameterization noise all draw from the torch RNG seeded here. The
    final checkpoint carries optimizer state and the RNG state so a resumed
    run reproduces subsequent losses exactly.
    """
    model_config.validate()
    train_config.validate()
    data.validate(model_config.cka_enabled)
    out_dir = Path(out_dir) if out_dir is not None else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    if resume_from is not None:
        ckpt = load_checkpoint(resume_from)
        if (ckpt.vocab1.sha256() != data.vocab1.sha256()
                or ckpt.vocab2.sha256() != data.vocab2.sha256()):
            raise GloctmError("checkpoint vocabularies do not match training data")
        model = ckpt.model
        start_epoch = ckpt.epoch
        if start_epoch >= train_config.epochs:
            raise ConfigError(
                f"checkpoint already at epoch {start_epoch}, nothing to resume")
        optimizer = _make_optimizer(model, train_config)
        if ckpt.optimizer_state is not None:
            optimizer.load_state_dict(ckpt.optimizer_state)
        if ckpt.rng_state is None:
            raise GloctmError("checkpoint carries no RNG state, cannot resume exactly")
        torch.set_rng_state(ckpt.rng_state)
    else:
        torch.manual_seed(train_config.seed)
        model = GloctmModel(model_config, len(data.vocab1), len(data.vocab2))
        start_epoch = 0
        optimizer = _make_optimizer(model, train_config)
    model.train()

    x1 = torch.as_tensor(data.bow1.counts, dtype=DTYPE)
    x2 = torch.as_tensor(data.bow2.counts, dtype=DTYPE)
    g1 = torch.as_tensor(data.gbow1.rows, dtype=DTYPE)
    g2 = torch.as_tensor(data.gbow2.rows, dtype=DTYPE)
    e1 = e2 = None
    if model_config.cka_enabled:
        e1 = torch.as_tensor(data.emb1.vectors, dtype=DTYPE)
        e2 = torch.as_tensor(data.emb2.vectors, dtype=DTYPE)
    n1, n2 = x1.shape[0], x2.shape[0]
    num_docs = n1 + n2
    if num_docs == 0:
        raise ConfigError("no documents to train on")

    report = TrainReport(seed=train_config.seed)
    report_path = out_dir / "report.jsonl" if out_dir is not None else None
    report_fh = open(report_path, "a" if resume_from else "w", encoding="utf-8") \
        if report_path is not None else None
    step = start_epoch * math.ceil(num_docs / train_config.batch_size)
    try:
        for epoch in range(start_epoch + 1, train_config.epochs + 1):
            acc: dict[str, float] = {}
            skipped = 0.0
            perm = torch.randperm(num_docs)
            for chunk in perm.split(train_config.batch_size):
                idx1 = chunk[chunk < n1]
                idx2 = chunk[chunk >= n1] - n1
                batch = Batch(
                    x1=x1[idx1] if idx1.numel() else None,
                    g1=g1[idx1] if idx1.numel() else None,
                    emb1=e1[idx1] if e1 is not None and idx1.numel() else None,
                    x2=x2[idx2] if idx2.numel() else None,
                    g2=g2[idx2] if idx2.numel() else None,
                    emb2=e2[idx2] if e2 is not None and idx2.numel() else None,
                )
                loss, bd = total_loss(model, batch)
                if not torch.isfinite(loss):
                    raise GloctmError(
                        f"non-finite loss at step {step}: breakdown {bd}")
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                weight = float(chunk.numel())
                skipped += bd.pop("cka_skipped")
                for key, value in bd.items():
                    acc[key] = acc.get(key, 0.0) + weight * value
                step += 1

            record = _epoch_record(epoch, acc, num_docs, skipped)
            if train_config.eval_every and epoch % train_config.eval_every == 0:
                record["eval_total"] = _eval_total(model, x1, x2, g1, g2, e1, e2)
            report.epochs.append(record)
            report.cka_skipped += int(skipped)
            if report_fh is not None:
                report_fh.write(json.dumps(record, sort_keys=True) + "\n")
                report_fh.flush()
            if log is not None:
                log(f"epoch {epoch}/{train_config.epochs} total {record['total']:.4f}")

            if out_dir is not None and train_config.checkpoint_every \
                    and epoch % train_config.checkpoint_every == 0 \
                    and epoch < train_config.epochs:
                _write_checkpoint(out_dir / f"checkpoint_epoch{epoch}.pt", model,
                                  data, optimizer, epoch, train_config)
    finally:
        if report_fh is not None:
            report_fh.close()

    if out_dir is not None:
        _write_checkpoint(out_dir / "checkpoint.pt", model, data, optimizer,
                          train_config.epochs, train_config)
    report.wall_clock_s = time.perf_counter() - start
    model.eval()
    return model, report


def _make_optimizer(model: GloctmModel, cfg: TrainConfig) -> torch.optim.Adam:
    return torch.optim.Adam(model.parameters(), lr=cfg.learning_rate,
                            betas=(cfg.adam_beta1, cfg.adam_beta2), eps=cfg.adam_eps)


def _write_checkpoint(path, model, data: TrainData, optimizer, epoch,
                      train_config: TrainConfig) -> None:
    save_checkpoint(path, model, data.vocab1, data.vocab2, epoch=epoch,
                    optimizer=optimizer, rng_state=torch.get_rng_state(),
                    train_config=asdict(train_config))


def _eval_total(model, x1, x2, g1, g2, e1, e2) -> float:
    was_training = model.training
    model.eval()
    with torch.no_grad():
        batch = Batch(x1=x1, g1=g1, emb1=e1, x2=x2, g2=g2, emb2=e2)
        loss, _ = total_loss(model, batch)
    if was_training:
        model.train()
    return loss.item()


def infer_theta(model: GloctmModel, matrix, pathway: str,
                chunk_size: int = 4096) -> np.ndarray:
    """Topic proportions in evaluation mode: dropout off, z = mu."""
    if pathway not in PATHWAYS:
        raise GloctmError(f"unknown pathway {pathway!r}")
    if isinstance(matrix, BowMatrix):
        rows = matrix.counts
    elif isinstance(matrix, GlobalBow):
        rows = matrix.rows
    else:
        rows = np.asarray(matrix)
    was_training = model.training
    model.eval()
    thetas = []
    with torch.no_grad():
        for lo in range(0, rows.shape[0], chunk_size):
            x = torch.as_tensor(rows[lo:lo + chunk_size], dtype=DTYPE)
            post = model.encode(pathway, x)
            thetas.append(proportions(post.mu).numpy())
    if was_training:
        model.train()
    return np.concatenate(thetas) if thetas else np.zeros((0, model.config.num_topics))


def train_multi_seed(data: TrainData, model_config: ModelConfig,
                     train_config: TrainConfig, seeds: list[int],
                     out_dir=None, log=None
                     ) -> tuple[list[GloctmModel], list[TrainReport]]:
    """Independent runs over a list of seeds, each in its own subdirectory."""
    if not seeds:
        raise ConfigError("need at least one seed")
    models, reports = [], []
    for seed in seeds:
        sub = Path(out_dir) / f"seed_{seed}" if out_dir is not None else None
        cfg = replace(train_config, seed=seed)
        if log is not None:
            log(f"training seed {seed}")
        model, report = train(data, model_config, cfg, out_dir=sub, log=log)
        models.append(model)
        reports.append(report)
    return models, reports


def aggregate_final_epochs(reports: list[TrainReport]) -> dict[str, tuple[float, float]]:
    """Mean and population std of each final-epoch loss term across seeds."""
    keys = [k for k in reports[0].final() if k not in ("epoch", "cka_skipped")]
    out = {}
    for key in keys:
        values = np.asarray([r.final()[key] for r in reports], dtype=np.float64)
        out[key] = (float(values.mean()), float(values.std()))
    return out
