"""Experiment runner: train, run, eval, stats and knee-curve subcommands.

Every command is deterministic: the same config on the same dataset writes
byte-identical outputs.  A run also writes a manifest echoing the full
config plus the chosen constraints, so any output file can be reproduced
from the manifest alone.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import date as Date
from dataclasses import asdict, dataclass
from pathlib import Path

from . import adaptive_selection, date_ranking, event_ranking, evaluation
from .corpus import (
    Timeline,
    Topic,
    build_vectorizer,
    filter_by_queries,
    load_dataset,
)
from .errors import (
    AdaptlsError,
    InsufficientTopics,
    MissingPrediction,
    UnknownTopic,
)
from .summarizer import KPolicy, build_timeline
from .temporal import annotate_topic

DATE_METHODS = ("datewise", "adprm-d")
EVENT_METHODS = ("clust", "adprm-e")
BASELINE_METHODS = ("datewise", "clust")


@dataclass
class RunConfig:
    dataset_dir: str = ""
    output_dir: str = ""
    method: str = "adprm-d"
    constraint: str = "adaptive"  # "base" | "adaptive"
    k_policy: str = "one"  # "expert" | "one"
    summarizer: str | None = None  # None = method default
    regressors_dir: str | None = None
    alpha: float = adaptive_selection.DEFAULT_ALPHA
    sensitivity: float = adaptive_selection.DEFAULT_SENSITIVITY
    c_max: int | None = None
    graph_threshold: float = event_ranking.DEFAULT_THRESHOLD
    mcl_expansion: int = event_ranking.DEFAULT_EXPANSION
    mcl_inflation: float = event_ranking.DEFAULT_INFLATION
    mcl_max_iter: int = event_ranking.DEFAULT_MAX_ITER
    mcl_eps: float = event_ranking.DEFAULT_EPS
    mcl_prune: float = event_ranking.DEFAULT_PRUNE
    l2_lambda: float = date_ranking.DEFAULT_LAMBDA
    use_query_filter: bool = False
    jobs: int = 1
    seed: int = 0  # reserved; the pipeline is deterministic

    def validate(self) -> None:
        if self.method not in DATE_METHODS + EVENT_METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.constraint not in ("base", "adaptive"):
            raise ValueError(f"unknown constraint {self.constraint!r}")
        if self.k_policy not in ("expert", "one"):
            raise ValueError(f"unknown k policy {self.k_policy!r}")
        if self.method in BASELINE_METHODS and self.constraint != "base":
            raise ValueError(
                f"{self.method} is a fixed-constraint baseline; use constraint=base"
            )
        if self.summarizer not in (None, "rank", "opt"):
            raise ValueError(f"unknown summarizer {self.summarizer!r}")

    def effective_summarizer(self) -> str:
        if self.summarizer is not None:
            return self.summarizer
        return "opt" if self.method in BASELINE_METHODS else "rank"


def _load_config(args, fields) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None):
        obj = json.loads(Path(args.config).read_text(encoding="utf-8"))
        for key, value in obj.items():
            if not hasattr(config, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(config, key, value)
    for field_name in fields:
        value = getattr(args, field_name, None)
        if value is not None:
            setattr(config, field_name, value)
    config.validate()
    return config


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name)


def _prepare(topic: Topic, config: RunConfig) -> Topic:
    annotate_topic(topic)
    if config.use_query_filter:
        topic = filter_by_queries(topic)
        annotate_topic(topic)
    return topic


def _load_regressor(config: RunConfig, topic_name: str):
    if not config.regressors_dir:
        raise AdaptlsError(
            f"method {config.method!r} needs --regressors (run `adaptls train` first)"
        )
    path = Path(config.regressors_dir) / f"regressor_{_safe_name(topic_name)}.json"
    if not path.is_file():
        raise MissingPrediction(f"no trained regressor for topic {topic_name!r}: {path}")
    return date_ranking.Regressor.load(path)


def _score_items(topic: Topic, config: RunConfig):
    """Ranked (date, cluster-or-None, score) items for the configured method."""
    if config.method in DATE_METHODS:
        regressor = _load_regressor(config, topic.name)
        return [
            (cand.date, None, score)
            for cand, score in date_ranking.score_dates(regressor, topic)
        ]
    scored, _ = event_ranking.detect_events(
        topic,
        threshold=config.graph_threshold,
        expansion=config.mcl_expansion,
        inflation=config.mcl_inflation,
        max_iter=config.mcl_max_iter,
        eps=config.mcl_eps,
        prune=config.mcl_prune,
    )
    return [(cluster.event_date, cluster, score) for cluster, score in scored]


def _select_top(items, limit: int):
    """Take the best `limit` items with distinct dates (event clusters can tie)."""
    selected = []
    seen = set()
    for day, cluster, _ in items:
        if day in seen:
            continue
        seen.add(day)
        selected.append((day, cluster))
        if len(selected) >= limit:
            break
    return selected


def _expert_k(timeline: Timeline) -> int:
    mean = timeline.total_sentences / timeline.length
    return max(1, int(mean + 0.5))


def _run_topic(topic: Topic, config: RunConfig):
    """Generate one timeline per reference timeline of the topic."""
    topic = _prepare(topic, config)
    vec = build_vectorizer(topic)
    items = _score_items(topic, config)
    summarizer = config.effective_summarizer()

    outputs = []
    if config.constraint == "adaptive":
        l, _, knee = adaptive_selection.choose_length(
            [(day, score) for day, _, score in items],
            alpha=config.alpha,
            sensitivity=config.sensitivity,
            c_max=config.c_max,
        )
        kpolicy = KPolicy.expert() if config.k_policy == "expert" else KPolicy.one()
        selected = _select_top(items, l)
        timeline = build_timeline(topic, selected, kpolicy, summarizer, vec)
        for reference in topic.reference_timelines:
            outputs.append(
                {
                    "topic": topic.name,
                    "reference": reference.name,
                    "timeline": timeline.to_json_obj(),
                    "l": l,
                    "k": kpolicy.resolve(topic),
                    "knee": {
                        "c_star": knee.c_star,
                        "difference": knee.difference,
                        "fallback_used": knee.fallback_used,
                    },
                }
            )
    else:
        for reference in topic.reference_timelines:
            kpolicy = KPolicy.fixed(_expert_k(reference))
            selected = _select_top(items, reference.length)
            timeline = build_timeline(topic, selected, kpolicy, summarizer, vec)
            outputs.append(
                {
                    "topic": topic.name,
                    "reference": reference.name,
                    "timeline": timeline.to_json_obj(),
                    "l": reference.length,
                    "k": kpolicy.resolve(topic),
                    "knee": None,
                }
            )
    return outputs


def cmd_train(args) -> int:
    dataset = load_dataset(args.dataset)
    if len(dataset) < 2:
        raise InsufficientTopics(
            "leave-one-topic-out training needs at least 2 topics"
        )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for topic in dataset:
        annotate_topic(topic)
    for held_out in dataset:
        training = [t for t in dataset if t.name != held_out.name]
        regressor = date_ranking.train_regressor(training, args.l2_lambda)
        regressor.save(out_dir / f"regressor_{_safe_name(held_out.name)}.json")
    print(f"wrote {len(dataset)} regressors to {out_dir}")
    return 0


_RUN_FIELDS = (
    "dataset_dir",
    "output_dir",
    "method",
    "constraint",
    "k_policy",
    "summarizer",
    "regressors_dir",
    "alpha",
    "sensitivity",
    "c_max",
    "graph_threshold",
    "mcl_expansion",
    "mcl_inflation",
    "mcl_max_iter",
    "mcl_eps",
    "mcl_prune",
    "l2_lambda",
    "use_query_filter",
    "jobs",
)


def cmd_run(args) -> int:
    config = _load_config(args, _RUN_FIELDS)
    if not config.dataset_dir or not config.output_dir:
        raise ValueError("run needs --dataset-dir and --output-dir")
    dataset = load_dataset(config.dataset_dir)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            per_topic = list(
                pool.map(_run_topic, dataset, [config] * len(dataset))
            )
    else:
        per_topic = [_run_topic(topic, config) for topic in dataset]

    manifest = {"config": asdict(config), "outputs": []}
    for outputs in per_topic:
        for output in outputs:
            file_name = (
                f"{_safe_name(output['topic'])}__"
                f"{_safe_name(output['reference'])}.json"
            )
            (out_dir / file_name).write_text(
                json.dumps(output["timeline"], ensure_ascii=False, indent=2)
                + "\n",
                encoding="utf-8",
            )
            manifest["outputs"].append(
                {
                    "file": file_name,
                    "topic": output["topic"],
                    "reference": output["reference"],
                    "l": output["l"],
                    "k": output["k"],
                    "knee": output["knee"],
                }
            )
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {len(manifest['outputs'])} timelines to {out_dir}")
    return 0


def _load_prediction(pred_dir: Path, topic_name: str, ref_name: str) -> Timeline:
    path = pred_dir / f"{_safe_name(topic_name)}__{_safe_name(ref_name)}.json"
    if not path.is_file():
        raise MissingPrediction(f"missing prediction file {path}")
    obj = json.loads(path.read_text(encoding="utf-8"))
    entries = [
        (Date.fromisoformat(entry["date"]), list(entry["summary"]))
        for entry in obj["entries"]
    ]
    return Timeline(obj.get("name", "generated"), entries)


def cmd_eval(args) -> int:
    dataset = load_dataset(args.dataset)
    pred_dir = Path(args.pred)
    report = evaluation.EvalReport()
    for topic in dataset:
        for reference in topic.reference_timelines:
            pred = _load_prediction(pred_dir, topic.name, reference.name)
            report.pairs.append(
                evaluation.evaluate_pair(pred, reference, topic.name)
            )
    out_prefix = Path(args.out) if args.out else pred_dir / "report"
    out_prefix.parent.mkdir(parents=True, exist_ok=True)
    out_prefix.with_suffix(".json").write_text(
        json.dumps(report.to_json_obj(), indent=2) + "\n", encoding="utf-8"
    )
    table = report.to_text_table(label=args.label)
    out_prefix.with_suffix(".txt").write_text(table + "\n", encoding="utf-8")
    print(table)
    return 0


def cmd_stats(args) -> int:
    dataset = load_dataset(args.dataset)
    for topic in dataset:
        annotate_topic(topic)
    report = evaluation.dataset_stats(dataset)
    if args.json:
        print(json.dumps(report.to_json_obj(), indent=2))
    else:
        print(report.to_text_table())
    return 0


def cmd_knee_curve(args) -> int:
    config = _load_config(args, _RUN_FIELDS)
    if not config.dataset_dir:
        raise ValueError("knee-curve needs --dataset-dir")
    dataset = load_dataset(config.dataset_dir)
    matches = [t for t in dataset if t.name == args.topic]
    if not matches:
        raise UnknownTopic(f"topic {args.topic!r} not in dataset")
    topic = _prepare(matches[0], config)
    items = _score_items(topic, config)

    l, curve, knee = adaptive_selection.choose_length(
        [(day, score) for day, _, score in items],
        alpha=config.alpha,
        sensitivity=config.sensitivity,
        c_max=config.c_max,
    )
    references = topic.reference_timelines
    header = ["c", "sc", "is_knee"] + [
        f"date_f1__{_safe_name(ref.name)}" for ref in references
    ]
    rows = []
    dates = [day for day, _, _ in items]
    for c, sc in curve.points:
        top_dates = []
        seen = set()
        for day in dates:
            if day not in seen:
                seen.add(day)
                top_dates.append(day)
            if len(top_dates) >= c:
                break
        pred = Timeline("top-c", [(day, ["-"]) for day in top_dates])
        row = [c, f"{sc:.6f}", int(c == l)]
        for ref in references:
            row.append(f"{evaluation.date_f1(pred, ref).f1:.6f}")
        rows.append(row)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    print(f"knee at c={l} (fallback={knee.fallback_used}); wrote {out}")
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override it")
    parser.add_argument("--dataset-dir", dest="dataset_dir")
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument(
        "--method", choices=DATE_METHODS + EVENT_METHODS, dest="method"
    )
    parser.add_argument(
        "--constraint", choices=("base", "adaptive"), dest="constraint"
    )
    parser.add_argument("--k-policy", choices=("expert", "one"), dest="k_policy")
    parser.add_argument("--summarizer", choices=("rank", "opt"), dest="summarizer")
    parser.add_argument("--regressors", dest="regressors_dir")
    parser.add_argument("--alpha", type=float, dest="alpha")
    parser.add_argument("--sensitivity", type=float, dest="sensitivity")
    parser.add_argument("--c-max", type=int, dest="c_max")
    parser.add_argument("--graph-threshold", type=float, dest="graph_threshold")
    parser.add_argument("--mcl-expansion", type=int, dest="mcl_expansion")
    parser.add_argument("--mcl-inflation", type=float, dest="mcl_inflation")
    parser.add_argument("--mcl-max-iter", type=int, dest="mcl_max_iter")
    parser.add_argument("--mcl-eps", type=float, dest="mcl_eps")
    parser.add_argument("--mcl-prune", type=float, dest="mcl_prune")
    parser.add_argument("--lambda", type=float, dest="l2_lambda")
    parser.add_argument(
        "--use-query-filter", action="store_const", const=True,
        dest="use_query_filter",
    )
    parser.add_argument("--jobs", type=int, dest="jobs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adaptls",
        description="Timeline summarization with automatic length selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train leave-one-topic-out date regressors")
    p_train.add_argument("dataset")
    p_train.add_argument("--out", required=True)
    p_train.add_argument(
        "--lambda", type=float, default=date_ranking.DEFAULT_LAMBDA,
        dest="l2_lambda",
    )
    p_train.set_defaults(func=cmd_train)

    p_run = sub.add_parser("run", help="generate timelines")
    _add_run_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_eval = sub.add_parser("eval", help="evaluate generated timelines")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--dataset", required=True)
    p_eval.add_argument("--out", default=None)
    p_eval.add_argument("--label", default="run")
    p_eval.set_defaults(func=cmd_eval)

    p_stats = sub.add_parser("stats", help="dataset statistics")
    p_stats.add_argument("dataset")
    p_stats.add_argument("--json", action="store_true")
    p_stats.set_defaults(func=cmd_stats)

    p_knee = sub.add_parser(
        "knee-curve", help="dump the selection-confidence curve for one topic"
    )
    _add_run_flags(p_knee)
    p_knee.add_argument("--topic", required=True)
    p_knee.add_argument("--out", required=True)
    p_knee.set_defaults(func=cmd_knee_curve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AdaptlsError, ValueError) as exc:
        error = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(error), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
