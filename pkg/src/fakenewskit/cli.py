"""Command-line pipeline: ingest, build-config, train, evaluate, explain,
cloud, serve, and the full grid (every native model on C1-C7).

Every run writes a manifest (command, parameters, derived seeds, input
hashes, output paths, tool version) next to its outputs; re-running with
the same inputs and seed reproduces the outputs byte for byte. Exit codes:
0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from fakenewskit import __version__
from fakenewskit.configs import (
    CONFIG_NAMES,
    ConfigError,
    build_configuration,
    save_configuration,
)
from fakenewskit.corpus import (
    Corpus,
    IngestError,
    Label,
    Source,
    ingest,
    load_corpus_jsonl,
    save_corpus,
)
from fakenewskit.evaluation import (
    MARKDOWN_HEADER,
    EvaluationError,
    cloud_to_csv,
    confusion_to_csv,
    evaluate,
    report_markdown_row,
    report_to_json,
    term_cloud,
)
from fakenewskit.explain import ExplainError, explain, explanation_payload
from fakenewskit.features import load_stopwords
from fakenewskit.models import (
    ArtifactError,
    TrainingError,
    load_artifact,
    save_artifact,
    train_cnn,
    train_logreg,
    train_naive_bayes,
)
from fakenewskit.rng import derive_seed

DATA_ERRORS = (IngestError, ConfigError, TrainingError, ArtifactError,
               EvaluationError, ExplainError, FileNotFoundError, ValueError)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(out_dir: Path, command: str, parameters: dict,
                    seeds: dict, inputs: list[str], outputs: list[str]) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "seeds": seeds,
        "input_hashes": {name: _sha256(Path(name)) for name in inputs},
        "output_paths": sorted(outputs),
        "tool_version": __version__,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "run_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_sources(args) -> tuple[Corpus, Corpus]:
    coaid = ingest(args.coaid, format="jsonl",
                   mapping={"text": "text", "label": "label", "id": "id", "source": "source"},
                   name="coaid", source=Source.COAID)
    c19 = ingest(args.c19, format="jsonl",
                 mapping={"text": "text", "label": "label", "id": "id", "source": "source"},
                 name="c19rumor", source=Source.C19RUMOR)
    return coaid, c19


def _load_config_dir(config_dir: Path):
    manifest = json.loads((config_dir / "config_manifest.json").read_text("utf-8"))
    splits = {}
    for split_name in ("train", "validation", "test"):
        splits[split_name] = load_corpus_jsonl(
            config_dir / f"{split_name}.jsonl",
            name=f"{manifest['name']}/{split_name}", allow_duplicate_ids=True)
    from fakenewskit.configs import DatasetConfiguration
    return DatasetConfiguration(
        name=manifest["name"], train=splits["train"], validation=splits["validation"],
        test=splits["test"], seed=manifest["seed"], provenance=manifest["provenance"])


def _train_one(model: str, config, seed: int, hp_overrides: dict):
    train_seed = derive_seed(f"train:{model}:{config.name}", seed)
    if model == "nb":
        return train_naive_bayes(config.train)
    if model == "logreg":
        return train_logreg(config.train, seed=train_seed)
    if model == "cnn":
        return train_cnn(config.train, config.validation,
                         hp=hp_overrides or None, seed=train_seed)
    raise TrainingError(f"unknown model {model!r} (expected nb, logreg, or cnn)")


def _cnn_overrides(args) -> dict:
    overrides = {}
    if getattr(args, "cnn_epochs", None):
        overrides["epochs"] = args.cnn_epochs
    if getattr(args, "max_len", None):
        overrides["max_len"] = args.max_len
    return overrides


def cmd_ingest(args) -> int:
    mapping = {"text": args.text_field, "label": args.label_field}
    if args.id_field:
        mapping["id"] = args.id_field
    corpus = ingest(args.input, format=args.format, mapping=mapping,
                    name=args.name, source=Source(args.source))
    out_dir = Path(args.out)
    out_path = out_dir / f"{corpus.name}.jsonl"
    save_corpus(corpus, out_path)
    _write_manifest(out_dir, "ingest",
                    {"input": str(args.input), "format": args.format,
                     "mapping": mapping, "source": args.source},
                    {}, [str(args.input)], [str(out_path)])
    stats = corpus.stats
    print(f"ingested {len(corpus)} items ({corpus.real_count} real, "
          f"{corpus.fake_count} fake); dropped {stats.dropped_empty_text} empty, "
          f"{stats.dropped_bad_label} bad-label, {stats.duplicate_ids} duplicate ids")
    return 0


def cmd_build_config(args) -> int:
    coaid, c19 = _load_sources(args)
    config = build_configuration(args.name, coaid, c19, seed=args.seed)
    out_dir = Path(args.out) / config.name
    paths = save_configuration(config, out_dir)
    _write_manifest(out_dir, "build-config",
                    {"name": args.name, "coaid": str(args.coaid), "c19": str(args.c19)},
                    {"seed": args.seed}, [str(args.coaid), str(args.c19)],
                    list(paths.values()))
    for split_name in ("train", "validation", "test"):
        split = getattr(config, split_name)
        print(f"{config.name} {split_name}: {len(split)} items "
              f"({split.real_count} real / {split.fake_count} fake)")
    return 0


def cmd_train(args) -> int:
    config = _load_config_dir(Path(args.config_dir))
    artifact = _train_one(args.model, config, args.seed, _cnn_overrides(args))
    artifact.training_meta["configuration"] = config.name
    out_dir = Path(args.out)
    out_path = out_dir / f"{config.name}_{args.model}.artifact"
    save_artifact(artifact, out_path)
    _write_manifest(out_dir, "train",
                    {"model": args.model, "config_dir": str(args.config_dir)},
                    {"seed": args.seed,
                     "train_seed": derive_seed(f"train:{args.model}:{config.name}", args.seed)},
                    [str(Path(args.config_dir) / "train.jsonl")], [str(out_path)])
    print(f"trained {artifact.model_id} on {config.name} -> {out_path}")
    return 0


def cmd_evaluate(args) -> int:
    artifact = load_artifact(args.model_artifact)
    config = _load_config_dir(Path(args.config_dir))
    report = evaluate(artifact, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"{config.name}_{artifact.model_kind}"
    json_path = out_dir / f"{stem}_report.json"
    json_path.write_text(report_to_json(report), "utf-8")
    md_path = out_dir / f"{stem}_report.md"
    md_path.write_text(MARKDOWN_HEADER + "\n" + report_markdown_row(report) + "\n", "utf-8")
    csv_path = out_dir / f"{stem}_confusion.csv"
    csv_path.write_text(confusion_to_csv(report.confusion), "utf-8")
    _write_manifest(out_dir, "evaluate",
                    {"model_artifact": str(args.model_artifact),
                     "config_dir": str(args.config_dir)},
                    {}, [str(args.model_artifact)],
                    [str(json_path), str(md_path), str(csv_path)])
    print(report_markdown_row(report))
    return 0


def cmd_explain(args) -> int:
    artifact = load_artifact(args.model)
    result = explain(artifact, args.text, budget=args.budget, seed=args.seed)
    print(json.dumps(explanation_payload(result), indent=2, sort_keys=True))
    return 0


def cmd_cloud(args) -> int:
    corpus = load_corpus_jsonl(args.input)
    stopwords = load_stopwords(args.stopwords) if args.stopwords else load_stopwords()
    cloud = term_cloud(corpus, Label(args.label), top_k=args.top_k, stopwords=stopwords)
    csv_text = cloud_to_csv(cloud)
    if args.out:
        out_path = Path(args.out)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(csv_text, "utf-8")
        print(f"wrote {out_path}")
    else:
        print(csv_text, end="")
    return 0


def cmd_serve(args) -> int:
    import os

    from fakenewskit.service import DEFAULT_BIND, DEFAULT_BUDGET, serve

    bind = args.bind or os.environ.get("BIND_ADDR", DEFAULT_BIND)
    budget = args.budget if args.budget is not None else int(
        os.environ.get("EXPLAIN_BUDGET", str(DEFAULT_BUDGET)))
    seed = args.seed if args.seed is not None else int(os.environ.get("SEED", "0"))
    serve(args.model, bind_addr=bind, seed=seed, budget=budget)
    return 0


def cmd_grid(args) -> int:
    coaid, c19 = _load_sources(args)
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    out_dir = Path(args.out)
    reports_dir = out_dir / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    outputs = []
    seeds = {"seed": args.seed}
    for name in CONFIG_NAMES:
        config = build_configuration(name, coaid, c19,
                                     seed=derive_seed(f"config:{name}", args.seed))
        seeds[f"config:{name}"] = config.seed
        for model in models:
            artifact = _train_one(model, config, args.seed, _cnn_overrides(args))
            artifact.training_meta["configuration"] = name
            report = evaluate(artifact, config)
            report_path = reports_dir / f"{name}_{model}.json"
            report_path.write_text(report_to_json(report), "utf-8")
            outputs.append(str(report_path))
            rows.append(report_markdown_row(report))
            print(rows[-1])
    combined = out_dir / "grid_report.md"
    combined.write_text(MARKDOWN_HEADER + "\n" + "\n".join(rows) + "\n", "utf-8")
    outputs.append(str(combined))
    _write_manifest(out_dir, "grid",
                    {"models": models, "coaid": str(args.coaid), "c19": str(args.c19)},
                    seeds, [str(args.coaid), str(args.c19)], outputs)
    print(f"grid complete: {len(rows)} rows -> {combined}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fakenewskit",
                     description="Explainable fake-news detection pipeline")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a labeled corpus and normalize it")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), required=True)
    p.add_argument("--text-field", required=True)
    p.add_argument("--label-field", required=True)
    p.add_argument("--id-field")
    p.add_argument("--name")
    p.add_argument("--source", choices=[s.value for s in Source], default="other")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build-config", help="build one dataset configuration")
    p.add_argument("--name", choices=CONFIG_NAMES, required=True)
    p.add_argument("--coaid", required=True)
    p.add_argument("--c19", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_config)

    p = sub.add_parser("train", help="train one model on a built configuration")
    p.add_argument("--model", choices=("nb", "logreg", "cnn"), required=True)
    p.add_argument("--config-dir", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cnn-epochs", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a trained artifact on a configuration")
    p.add_argument("--model-artifact", required=True)
    p.add_argument("--config-dir", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("explain", help="explain one prediction as JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--budget", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("cloud", help="emit ranked term counts for one class")
    p.add_argument("--input", required=True, help="corpus JSONL")
    p.add_argument("--label", choices=("real", "fake"), required=True)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--stopwords")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("serve", help="run the HTTP classification service")
    p.add_argument("--model", required=True)
    p.add_argument("--bind", help="host:port, else BIND_ADDR, else 127.0.0.1:8080")
    p.add_argument("--budget", type=int, help="explanation budget, else EXPLAIN_BUDGET")
    p.add_argument("--seed", type=int, help="explanation sampling seed, else SEED")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("grid", help="train and evaluate every model on C1-C7")
    p.add_argument("--coaid", required=True)
    p.add_argument("--c19", required=True)
    p.add_argument("--models", default="nb,logreg,cnn")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cnn-epochs", type=int)
    p.add_argument("--max-len", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_grid)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DATA_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
