"""Command-line pipeline: synth, augment, train, eval, topics.

Configuration comes from a TOML file of dotted sections plus command-line
overrides; unknown keys are rejected. Exit codes: 0 success, 1 runtime
failure, 2 configuration or validation failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import corpus as corpus_mod
from . import evaluation as eval_mod
from . import lexicon as lexicon_mod
from . import synthgen as synth_mod
from . import training as training_mod
from .errors import ConfigError, GloctmError
from .model import ModelConfig, export_topics, load_checkpoint

DEFAULTS: dict[str, dict] = {
    "data": {
        "corpus1": None, "corpus2": None,
        "labels1": None, "labels2": None,
        "word_emb1": None, "word_emb2": None,
        "doc_emb1": None, "doc_emb2": None,
        "ref1": None, "ref2": None,
        "min_df": 3, "max_vocab": 5000,
        "test_fraction": 0.2,
    },
    "model": {
        "num_topics": 20, "hidden_dim": 200, "dropout": 0.2,
        "lambda1": 1.0, "lambda2": 1.0,
        "align_variant": "kl", "cka_enabled": True,
        "prior": "standard_normal", "prior_alpha": 0.02,
        "cka_input": "theta", "detach_global_align": False,
    },
    "augment": {
        "topk_intra": 5, "topk_cross": 5,
        "base": "iverson", "min_cosine": None,
    },
    "train": {
        "epochs": 500, "batch_size": 200, "learning_rate": 2e-3,
        "seed": 0, "adam_beta1": 0.9, "adam_beta2": 0.999, "adam_eps": 1e-8,
        "checkpoint_every": 0, "eval_every": 0,
    },
    "eval": {
        "top_words": 15, "theta_source": "local",
        "tu_pooling": "per_language",
        "classifier_c": 1.0, "classifier_seed": 0,
    },
    "synth": {
        "num_topics": 5, "words_per_topic": 40, "docs_per_lang": 2000,
        "doc_length": 60, "topic_sparsity": 0.1, "noise_rate": 0.1,
        "seed": 0, "reference_pairs": 500,
        "embedding_jitter": 0.1, "doc_embedding_jitter": 0.05,
    },
    "output": {
        "dir": "runs/out",
    },
}


@dataclass
class RunConfig:
    data: dict
    model: ModelConfig
    augment: dict
    train: training_mod.TrainConfig
    eval: dict
    synth: synth_mod.PlantedSpec
    out_dir: Path


def _merge_section(target: dict, section: str, values: dict, origin: str) -> None:
    defaults = DEFAULTS.get(section)
    if defaults is None:
        raise ConfigError(f"unknown config section [{section}] in {origin}")
    for key, value in values.items():
        if key not in defaults:
            raise ConfigError(f"unknown config key {section}.{key} in {origin}")
        default = defaults[key]
        if default is not None and value is not None:
            if isinstance(default, bool):
                if not isinstance(value, bool):
                    raise ConfigError(f"{section}.{key} must be a boolean")
            elif isinstance(default, int) and not isinstance(default, bool):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ConfigError(f"{section}.{key} must be an integer")
            elif isinstance(default, float):
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    raise ConfigError(f"{section}.{key} must be a number")
                value = float(value)
            elif isinstance(default, str) and not isinstance(value, str):
                raise ConfigError(f"{section}.{key} must be a string")
        target[section][key] = value


def load_run_config(config_path=None, overrides: dict | None = None) -> RunConfig:
    """Merge defaults, the optional TOML file, and CLI overrides; reject
    unknown sections or keys."""
    merged = copy.deepcopy(DEFAULTS)
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        for section, values in raw.items():
            if not isinstance(values, dict):
                raise ConfigError(f"top-level key {section!r} outside any section in {path}")
            _merge_section(merged, section, values, str(path))
    for (section, key), value in (overrides or {}).items():
        _merge_section(merged, section, {key: value}, "command line")

    model_cfg = ModelConfig(
        topk_intra=merged["augment"]["topk_intra"],
        topk_cross=merged["augment"]["topk_cross"],
        **merged["model"],
    )
    train_cfg = training_mod.TrainConfig(**merged["train"])
    synth_cfg = synth_mod.PlantedSpec(**merged["synth"])
    return RunConfig(data=merged["data"], model=model_cfg,
                     augment=merged["augment"], train=train_cfg,
                     eval=merged["eval"], synth=synth_cfg,
                     out_dir=Path(merged["output"]["dir"]))


def apply_ablation(model_cfg: ModelConfig, name: str) -> None:
    if name == "full":
        model_cfg.align_variant = "kl"
        model_cfg.cka_enabled = True
    elif name == "no_kl":
        model_cfg.align_variant = "none"
    elif name == "no_cka":
        model_cfg.cka_enabled = False
    elif name == "sim":
        model_cfg.align_variant = "sim"
    else:
        raise ConfigError(f"unknown ablation {name!r}")


def _require_path(cfg: RunConfig, key: str) -> Path:
    value = cfg.data.get(key)
    if value is None:
        raise ConfigError(f"data.{key} is required for this command")
    path = Path(value)
    if not path.exists():
        raise ConfigError(f"data.{key} points to a missing file: {path}")
    return path


class OutputLock:
    """Guards an output directory against concurrent writers."""

    def __init__(self, out_dir: Path):
        out_dir.mkdir(parents=True, exist_ok=True)
        self.path = out_dir / ".lock"
        self.fd = None

    def __enter__(self):
        try:
            self.fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise GloctmError(
                f"output directory is locked by another run: {self.path}") from None
        os.write(self.fd, f"{os.getpid()}\n".encode())
        return self

    def __exit__(self, *exc):
        if self.fd is not None:
            os.close(self.fd)
            self.path.unlink(missing_ok=True)
        return False


def _load_language(cfg: RunConfig, lang: int):
    """Corpus -> vocabulary -> counts for one language, with kept labels."""
    corpus_path = _require_path(cfg, f"corpus{lang}")
    labels_key = cfg.data.get(f"labels{lang}")
    labels_path = None
    if labels_key is not None:
        labels_path = Path(labels_key)
        if not labels_path.exists():
            raise ConfigError(f"data.labels{lang} points to a missing file: {labels_path}")
    docs, labels = corpus_mod.load_corpus(corpus_path, labels_path)
    vocab = corpus_mod.build_vocabulary(docs, lang, cfg.data["min_df"],
                                        cfg.data["max_vocab"])
    bow, dropped = corpus_mod.vectorize(docs, vocab)
    if labels is not None:
        kept = np.asarray([int(d) for d in bow.doc_ids], dtype=np.int64)
        labels = labels[kept]
    return docs, vocab, bow, labels, dropped


def _build_augmented(cfg: RunConfig, vocab1, vocab2, bow1, bow2):
    emb_path1 = _require_path(cfg, "word_emb1")
    emb_path2 = _require_path(cfg, "word_emb2")
    emb1 = lexicon_mod.load_word_embeddings(emb_path1, vocab1)
    emb2 = lexicon_mod.load_word_embeddings(emb_path2, vocab2)
    index = lexicon_mod.build_neighbor_index(
        emb1, emb2, cfg.augment["topk_intra"], cfg.augment["topk_cross"],
        cfg.augment["min_cosine"])
    gbow1 = lexicon_mod.augment(bow1, index, cfg.augment["base"])
    gbow2 = lexicon_mod.augment(bow2, index, cfg.augment["base"])
    coverage = {
        "lang1": {"coverage": emb1.coverage,
                  "zero_norm_words": int(emb1.zero_norm_mask().sum())},
        "lang2": {"coverage": emb2.coverage,
                  "zero_norm_words": int(emb2.zero_norm_mask().sum())},
        "topk_intra": cfg.augment["topk_intra"],
        "topk_cross": cfg.augment["topk_cross"],
        "base": cfg.augment["base"],
    }
    return index, gbow1, gbow2, coverage


def build_train_data(cfg: RunConfig):
    """Assemble aligned TrainData (and labels) from the configured files."""
    _, vocab1, bow1, labels1, dropped1 = _load_language(cfg, 1)
    _, vocab2, bow2, labels2, dropped2 = _load_language(cfg, 2)
    _, gbow1, gbow2, coverage = _build_augmented(cfg, vocab1, vocab2, bow1, bow2)
    emb1 = emb2 = None
    if cfg.model.cka_enabled:
        emb1 = lexicon_mod.load_doc_embeddings(_require_path(cfg, "doc_emb1"), bow1)
        emb2 = lexicon_mod.load_doc_embeddings(_require_path(cfg, "doc_emb2"), bow2)
    data = training_mod.TrainData(bow1=bow1, bow2=bow2, gbow1=gbow1, gbow2=gbow2,
                                  vocab1=vocab1, vocab2=vocab2, emb1=emb1, emb2=emb2)
    info = {"coverage": coverage,
            "dropped_docs": {"lang1": len(dropped1), "lang2": len(dropped2)}}
    return data, (labels1, labels2), info


def cmd_synth(cfg: RunConfig) -> int:
    with OutputLock(cfg.out_dir):
        data = synth_mod.generate(cfg.synth)
        manifest = synth_mod.write_dataset(data, cfg.out_dir)
    print(f"wrote synthetic dataset to {cfg.out_dir} "
          f"({len(data.docs1)}+{len(data.docs2)} docs)")
    print(json.dumps(manifest, sort_keys=True, indent=2))
    return 0


def cmd_augment(cfg: RunConfig) -> int:
    with OutputLock(cfg.out_dir):
        _, vocab1, bow1, _, dropped1 = _load_language(cfg, 1)
        _, vocab2, bow2, _, dropped2 = _load_language(cfg, 2)
        _, gbow1, gbow2, coverage = _build_augmented(cfg, vocab1, vocab2, bow1, bow2)
        lexicon_mod.write_sparse_triplets(gbow1.rows, cfg.out_dir / "global_bow_lang1.txt")
        lexicon_mod.write_sparse_triplets(gbow2.rows, cfg.out_dir / "global_bow_lang2.txt")
        coverage["dropped_docs"] = {"lang1": len(dropped1), "lang2": len(dropped2)}
        (cfg.out_dir / "augment_report.json").write_text(
            json.dumps(coverage, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    print(f"augmented {gbow1.num_docs}+{gbow2.num_docs} docs into {cfg.out_dir}")
    return 0


def cmd_train(cfg: RunConfig, num_seeds: int | None = None, resume=None) -> int:
    data, _, info = build_train_data(cfg)
    with OutputLock(cfg.out_dir):
        (cfg.out_dir / "augment_report.json").write_text(
            json.dumps(info["coverage"], sort_keys=True, indent=2) + "\n",
            encoding="utf-8")
        if num_seeds is not None and num_seeds > 1:
            if resume is not None:
                raise ConfigError("--resume cannot be combined with --seeds")
            seeds = [cfg.train.seed + i for i in range(num_seeds)]
            models, reports = training_mod.train_multi_seed(
                data, cfg.model, cfg.train, seeds, out_dir=cfg.out_dir, log=print)
            for seed, model in zip(seeds, models):
                (cfg.out_dir / f"seed_{seed}" / "topics.txt").write_text(
                    export_topics(model, data.vocab1, data.vocab2,
                                  cfg.eval["top_words"]), encoding="utf-8")
            agg = training_mod.aggregate_final_epochs(reports)
            lines = [f"{key}\t{mean:.6f}\t{std:.6f}\n"
                     for key, (mean, std) in sorted(agg.items())]
            (cfg.out_dir / "aggregate.tsv").write_text("".join(lines), encoding="utf-8")
            print(f"trained {len(seeds)} seeds; aggregate in {cfg.out_dir / 'aggregate.tsv'}")
        else:
            model, report = training_mod.train(data, cfg.model, cfg.train,
                                               out_dir=cfg.out_dir,
                                               resume_from=resume, log=print)
            (cfg.out_dir / "topics.txt").write_text(
                export_topics(model, data.vocab1, data.vocab2, cfg.eval["top_words"]),
                encoding="utf-8")
            print(f"final total loss {report.final()['total']:.4f} "
                  f"(wall {report.wall_clock_s:.1f}s)")
    return 0


def _split_indices(n: int, test_fraction: float) -> tuple[np.ndarray, np.ndarray]:
    n_test = int(round(n * test_fraction))
    n_test = min(max(n_test, 1), n - 1)
    if n < 2:
        raise ConfigError("need at least two documents per language to split")
    idx = np.arange(n)
    return idx[: n - n_test], idx[n - n_test:]


def _classification(cfg: RunConfig, model, data, labels1, labels2) -> dict[str, float]:
    source = cfg.eval["theta_source"]
    if source == "local":
        theta1 = training_mod.infer_theta(model, data.bow1, "local1")
        theta2 = training_mod.infer_theta(model, data.bow2, "local2")
    elif source == "global":
        theta1 = training_mod.infer_theta(model, data.gbow1, "global")
        theta2 = training_mod.infer_theta(model, data.gbow2, "global")
    else:
        raise ConfigError(f"unknown eval.theta_source {source!r}")

    tr1, te1 = _split_indices(theta1.shape[0], cfg.data["test_fraction"])
    tr2, te2 = _split_indices(theta2.shape[0], cfg.data["test_fraction"])
    splits = {
        1: (theta1[tr1], labels1[tr1], theta1[te1], labels1[te1], data.bow1.doc_ids),
        2: (theta2[tr2], labels2[tr2], theta2[te2], labels2[te2], data.bow2.doc_ids),
    }
    for lang, (xtr, ytr, xte, yte, ids) in splits.items():
        train_split = corpus_mod.LabeledSplit([str(i) for i in range(len(ytr))], ytr, "train")
        test_split = corpus_mod.LabeledSplit([str(i) for i in range(len(yte))], yte, "test")
        corpus_mod.check_label_coverage(train_split, test_split)

    c, seed = cfg.eval["classifier_c"], cfg.eval["classifier_seed"]
    x1tr, y1tr, x1te, y1te, _ = splits[1]
    x2tr, y2tr, x2te, y2te, _ = splits[2]
    return {
        "l1_intra": eval_mod.classify(x1tr, y1tr, x1te, y1te, c, seed),
        "l2_intra": eval_mod.classify(x2tr, y2tr, x2te, y2te, c, seed),
        "l1_cross": eval_mod.classify(x2tr, y2tr, x1te, y1te, c, seed),
        "l2_cross": eval_mod.classify(x1tr, y1tr, x2te, y2te, c, seed),
    }


def _evaluate_checkpoint(cfg: RunConfig, checkpoint_path) -> eval_mod.MetricReport:
    ckpt = load_checkpoint(checkpoint_path)
    model = ckpt.model

    _, vocab1, bow1, labels1, _ = _load_language(cfg, 1)
    _, vocab2, bow2, labels2, _ = _load_language(cfg, 2)
    if (vocab1.sha256() != ckpt.vocab1.sha256()
            or vocab2.sha256() != ckpt.vocab2.sha256()):
        raise GloctmError(
            "vocabulary hash mismatch: configured corpora do not reproduce the "
            "checkpoint's vocabularies")

    topics = eval_mod.build_topic_set(model, vocab1, vocab2, cfg.eval["top_words"])
    ref1 = _require_path(cfg, "ref1")
    ref2 = _require_path(cfg, "ref2")
    reference = corpus_mod.load_aligned_reference(ref1, ref2, vocab1, vocab2)
    mean_cnpmi, per_topic = eval_mod.cnpmi(topics, reference)
    tu = eval_mod.topic_uniqueness(topics, cfg.eval["tu_pooling"])

    accuracies = None
    if labels1 is not None and labels2 is not None:
        need_global = cfg.eval["theta_source"] == "global"
        gbow1 = gbow2 = None
        if need_global:
            _, gbow1, gbow2, _ = _build_augmented(cfg, vocab1, vocab2, bow1, bow2)
        data = training_mod.TrainData(
            bow1=bow1, bow2=bow2,
            gbow1=gbow1 if need_global else _identity_gbow(bow1, vocab1, vocab2),
            gbow2=gbow2 if need_global else _identity_gbow(bow2, vocab1, vocab2),
            vocab1=vocab1, vocab2=vocab2)
        accuracies = _classification(cfg, model, data, labels1, labels2)
    return eval_mod.MetricReport(cnpmi=mean_cnpmi, tu=tu, per_topic_cnpmi=per_topic,
                                 accuracies=accuracies)


def _identity_gbow(bow, vocab1, vocab2):
    """Placeholder augmented rows when only local-theta evaluation runs."""
    sizes = (len(vocab1), len(vocab2))
    rows = np.zeros((bow.num_docs, sum(sizes)), dtype=np.int64)
    offset = 0 if bow.language_id == 1 else sizes[0]
    rows[:, offset:offset + bow.vocab_size] = bow.counts
    return lexicon_mod.GlobalBow(rows=rows, language_id=bow.language_id,
                                 doc_ids=list(bow.doc_ids), vocab_sizes=sizes)


def cmd_eval(cfg: RunConfig, checkpoint_path, compare: list[str] | None = None) -> int:
    with OutputLock(cfg.out_dir):
        report = _evaluate_checkpoint(cfg, checkpoint_path)
        (cfg.out_dir / "metrics.json").write_text(report.to_json(), encoding="utf-8")
        (cfg.out_dir / "metrics.tsv").write_text(report.to_tsv(), encoding="utf-8")
        per_topic = "".join(f"{k}\t{v:.6f}\n"
                            for k, v in enumerate(report.per_topic_cnpmi))
        (cfg.out_dir / "per_topic_cnpmi.tsv").write_text(per_topic, encoding="utf-8")
        if report.accuracies:
            bars = "".join(f"{k}\t{v:.6f}\n" for k, v in sorted(report.accuracies.items()))
            (cfg.out_dir / "classification_bars.tsv").write_text(bars, encoding="utf-8")

        if compare:
            rows = [("main", report)]
            for item in compare:
                if "=" not in item:
                    raise ConfigError(f"--compare entries must be LABEL=CHECKPOINT, got {item!r}")
                label, path = item.split("=", 1)
                rows.append((label, _evaluate_checkpoint(cfg, path)))
            header = "variant\tcnpmi\ttu\ttq\tl1_intra\tl2_intra\tl1_cross\tl2_cross\n"
            lines = [header]
            for label, rep in rows:
                acc = rep.accuracies or {}
                lines.append(
                    f"{label}\t{rep.cnpmi:.6f}\t{rep.tu:.6f}\t{rep.tq:.6f}\t"
                    f"{acc.get('l1_intra', float('nan')):.6f}\t"
                    f"{acc.get('l2_intra', float('nan')):.6f}\t"
                    f"{acc.get('l1_cross', float('nan')):.6f}\t"
                    f"{acc.get('l2_cross', float('nan')):.6f}\n")
            (cfg.out_dir / "ablation_table.tsv").write_text("".join(lines),
                                                            encoding="utf-8")
    print(f"cnpmi {report.cnpmi:.4f}  tu {report.tu:.4f}  tq {report.tq:.4f}")
    if report.accuracies:
        print("  ".join(f"{k} {v:.4f}" for k, v in sorted(report.accuracies.items())))
    return 0


def cmd_topics(checkpoint_path, count: int, out_path=None) -> int:
    ckpt = load_checkpoint(checkpoint_path)
    limit = min(len(ckpt.vocab1), len(ckpt.vocab2))
    if count < 1 or count > limit:
        raise ConfigError(f"top-word count must lie in [1, {limit}], got {count}")
    text = export_topics(ckpt.model, ckpt.vocab1, ckpt.vocab2, count)
    if out_path is not None:
        Path(out_path).parent.mkdir(parents=True, exist_ok=True)
        Path(out_path).write_text(text, encoding="utf-8")
        print(f"wrote {ckpt.model.config.num_topics} topics to {out_path}")
    else:
        sys.stdout.write(text)
    return 0


def _apply_thread_cap() -> None:
    raw = os.environ.get("GLOCTM_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"GLOCTM_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("GLOCTM_THREADS must be >= 1")
    torch.set_num_threads(n)


def _collect_overrides(args) -> dict:
    overrides = {}
    if getattr(args, "out", None) is not None:
        overrides[("output", "dir")] = args.out
    if getattr(args, "seed", None) is not None:
        overrides[("train", "seed")] = args.seed
        overrides[("synth", "seed")] = args.seed
    if getattr(args, "topk_intra", None) is not None:
        overrides[("augment", "topk_intra")] = args.topk_intra
    if getattr(args, "topk_cross", None) is not None:
        overrides[("augment", "topk_cross")] = args.topk_cross
    if getattr(args, "lambda1", None) is not None:
        overrides[("model", "lambda1")] = args.lambda1
    if getattr(args, "lambda2", None) is not None:
        overrides[("model", "lambda2")] = args.lambda2
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gloctm",
                                     description="Cross-lingual topic model pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="TOML config file")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--topk-intra", type=int, default=None, dest="topk_intra")
    common.add_argument("--topk-cross", type=int, default=None, dest="topk_cross")
    common.add_argument("--lambda1", type=float, default=None)
    common.add_argument("--lambda2", type=float, default=None)

    p_synth = sub.add_parser("synth", parents=[common],
                             help="generate a planted-topic synthetic dataset")
    p_synth.set_defaults(command="synth")

    p_aug = sub.add_parser("augment", parents=[common],
                           help="write augmented joint-vocabulary matrices")
    p_aug.set_defaults(command="augment")

    p_train = sub.add_parser("train", parents=[common], help="train the model")
    p_train.add_argument("--seeds", type=int, default=None,
                         help="run N seeds (seed, seed+1, ...) and aggregate")
    p_train.add_argument("--ablation", default=None,
                         choices=["full", "no_kl", "no_cka", "sim"])
    p_train.add_argument("--resume", default=None, help="checkpoint to resume from")

    p_eval = sub.add_parser("eval", parents=[common], help="evaluate a checkpoint")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--ablation", default=None,
                        choices=["full", "no_kl", "no_cka", "sim"])
    p_eval.add_argument("--compare", nargs="*", default=None,
                        metavar="LABEL=CHECKPOINT",
                        help="additional checkpoints for a comparison table")

    p_topics = sub.add_parser("topics", parents=[common],
                              help="export top words per topic")
    p_topics.add_argument("--checkpoint", required=True)
    p_topics.add_argument("--top-words", type=int, default=None, dest="top_words")
    p_topics.add_argument("--out-file", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_thread_cap()
        if args.command == "topics":
            cfg = load_run_config(args.config, _collect_overrides(args))
            count = args.top_words if args.top_words is not None else cfg.eval["top_words"]
            return cmd_topics(args.checkpoint, count, args.out_file)

        cfg = load_run_config(args.config, _collect_overrides(args))
        if getattr(args, "ablation", None):
            apply_ablation(cfg.model, args.ablation)
        if args.command == "synth":
            return cmd_synth(cfg)
        if args.command == "augment":
            return cmd_augment(cfg)
        if args.command == "train":
            return cmd_train(cfg, num_seeds=args.seeds, resume=args.resume)
        if args.command == "eval":
            return cmd_eval(cfg, args.checkpoint, args.compare)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GloctmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
