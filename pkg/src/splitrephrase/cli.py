"""Command-line pipeline driver.

Subcommands run one stage each and read/write JSON Lines pair files::

    splitrephrase ingest     --src en.txt --tgt de.txt --align en-de.align --translations tr.tsv -o raw.jsonl
    splitrephrase filter     -i raw.jsonl --conllu parses.conllu -o filtered.jsonl
    splitrephrase categorize -i filtered.jsonl --trees trees.tsv -o categorized.jsonl
    splitrephrase label      -i categorized.jsonl -o labelled.jsonl
    splitrephrase loss-eval  -i labelled.jsonl --probs model.npz
    splitrephrase evaluate   --sources src.txt --outputs sys.txt --refs ref.txt --ppdb ppdb.gz
    splitrephrase stats      -i filtered.jsonl

Settings come from an INI file (``--config``) and are overridden by flags.
Exit codes: 0 ok, 1 bad input (including malformed records), 2 internal error.
The log level is read from ``SPLITREPHRASE_LOG_LEVEL``.
"""

from __future__ import annotations

import argparse
import configparser
import functools
import json
import logging
import os
import sys
from collections import Counter
from dataclasses import dataclass, field, fields
from pathlib import Path

from . import __version__
from .annotate import annotate
from .corpus import RecordError, Status, read_pairs, write_pairs
from .filters import FilterConfig
from .ingest import load_bitext, read_translations, select_one_to_two
from .loss import corpus_loss, joint_loss, load_prob_archive, seq_loss
from .metrics import ParaphraseTable, evaluate, format_stats, format_table, length_stats
from .parse_io import read_conllu, read_trees
from .stages import StageResult, categorize_record, filter_record, label_record, run_stage

logger = logging.getLogger("splitrephrase")

EXIT_OK, EXIT_BAD_INPUT, EXIT_INTERNAL = 0, 1, 2


class InputError(Exception):
    """Missing or unreadable inputs."""


@dataclass
class PipelineConfig:
    input: str | None = None
    output: str | None = None
    conllu: str | None = None
    trees: str | None = None
    ppdb: str | None = None
    translations: str | None = None
    report: str | None = None
    filter: FilterConfig = field(default_factory=FilterConfig)
    split_radius: int = 3
    edge_words: int = 5
    run_length: int = 3
    on_violation: str = "escalate"
    weight: float = 1.0
    max_n: int = 4
    use_paraphrase: bool = True
    jobs: int = 1

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _coerce(value: str, like):
    if isinstance(like, bool):
        try:
            return _BOOL[value.strip().lower()]
        except KeyError:
            raise ValueError(f"not a boolean: {value!r}") from None
    if isinstance(like, int):
        return int(value)
    if isinstance(like, float):
        return float(value)
    return value


def load_config(path: str | None) -> PipelineConfig:
    """Read ``[paths]``, ``[filter]``, ``[categorize]``, ``[label]``,
    ``[loss]``, ``[metrics]`` and ``[pipeline]`` sections of an INI file."""
    cfg = PipelineConfig()
    if path is None:
        return cfg
    parser = configparser.ConfigParser()
    if not parser.read(path, encoding="utf-8"):
        raise InputError(f"cannot read config {path}")
    filter_kwargs = {}
    defaults = FilterConfig()
    for section in parser.sections():
        for key, value in parser.items(section):
            if section == "filter":
                if key == "verb_lexicon":
                    filter_kwargs[key] = frozenset(value.split())
                    continue
                if not hasattr(defaults, key):
                    raise InputError(f"unknown filter option {key!r}")
                filter_kwargs[key] = _coerce(value, getattr(defaults, key))
            else:
                if not hasattr(cfg, key) or key == "filter":
                    raise InputError(f"unknown option [{section}] {key}")
                setattr(cfg, key, _coerce(value, getattr(cfg, key)) if getattr(cfg, key) is not None else value)
    cfg.filter = FilterConfig(**filter_kwargs)
    return cfg


def _override(cfg: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    for f in fields(cfg):
        if f.name == "filter":
            continue
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    filter_over = {
        "min_overlap": getattr(args, "min_overlap", None),
        "min_similarity": getattr(args, "min_sim", None),
        "similarity_fallback": getattr(args, "similarity_fallback", None),
        "require_verb": getattr(args, "require_verb", None),
        "require_parse": getattr(args, "require_parse", None),
    }
    current = {f.name: getattr(cfg.filter, f.name) for f in fields(cfg.filter)}
    current.update({k: v for k, v in filter_over.items() if v is not None})
    cfg.filter = FilterConfig(**current)
    cfg.__post_init__()
    return cfg


def _require(path: str | None, what: str) -> str:
    if not path:
        raise InputError(f"missing {what}")
    if not Path(path).exists():
        raise InputError(f"{what} not found: {path}")
    return path


def _emit(summary: dict, text: str | None, report: str | None) -> None:
    if report:
        with open(report, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if text:
        print(text)
    else:
        print(json.dumps(summary, indent=2, sort_keys=True))


def _read_input(cfg: PipelineConfig) -> tuple[list, list[RecordError]]:
    errors: list[RecordError] = []
    records = list(read_pairs(_require(cfg.input, "--input"), errors))
    for err in errors:
        logger.error("%s: %s", cfg.input, err)
    return records, errors


def _finish_stage(cfg: PipelineConfig, stage: str, result: StageResult, read_errors) -> int:
    if not cfg.output:
        raise InputError("missing --output")
    write_pairs(result.records, cfg.output)
    for err in result.errors:
        logger.error("%s", err)
    summary = {"stage": stage, **result.summary()}
    summary["errors"] += len(read_errors)
    summary["error_messages"] = [str(e) for e in read_errors] + result.errors
    _emit(summary, None, cfg.report)
    return EXIT_OK if summary["errors"] == 0 else EXIT_BAD_INPUT


def cmd_ingest(cfg: PipelineConfig, args) -> int:
    translations = read_translations(_require(cfg.translations, "--translations"))
    errors: list[RecordError] = []
    alignments = load_bitext(
        _require(args.src, "--src"), _require(args.tgt, "--tgt"), _require(args.align, "--align"),
        doc_id=args.doc_id, errors=errors,
    )
    counts: Counter = Counter()
    records = select_one_to_two(
        alignments, translations, english_side=args.english_side,
        pivot_language=args.pivot_language or "", source_corpus=args.source_corpus or "",
        counts=counts,
    )
    if not cfg.output:
        raise InputError("missing --output")
    n = write_pairs(records, cfg.output)
    for err in errors:
        logger.error("%s: %s", args.align, err)
    summary = {"stage": "ingest", "records": n, "counts": dict(sorted(counts.items())),
               "errors": len(errors), "error_messages": [str(e) for e in errors]}
    _emit(summary, None, cfg.report)
    return EXIT_OK if not errors else EXIT_BAD_INPUT


def cmd_filter(cfg: PipelineConfig, args) -> int:
    records, read_errors = _read_input(cfg)
    if cfg.conllu:
        records = list(annotate(records, parses=read_conllu(_require(cfg.conllu, "--conllu"))))
    func = functools.partial(filter_record, cfg=cfg.filter)
    return _finish_stage(cfg, "filter", run_stage(func, records, cfg.jobs), read_errors)


def cmd_categorize(cfg: PipelineConfig, args) -> int:
    records, read_errors = _read_input(cfg)
    if cfg.trees:
        records = list(annotate(records, trees=read_trees(_require(cfg.trees, "--trees"))))
    func = functools.partial(
        categorize_record, split_radius=cfg.split_radius, edge_words=cfg.edge_words
    )
    return _finish_stage(cfg, "categorize", run_stage(func, records, cfg.jobs), read_errors)


def cmd_label(cfg: PipelineConfig, args) -> int:
    records, read_errors = _read_input(cfg)
    func = functools.partial(label_record, run_length=cfg.run_length, on_violation=cfg.on_violation)
    return _finish_stage(cfg, "label", run_stage(func, records, cfg.jobs), read_errors)


def cmd_loss_eval(cfg: PipelineConfig, args) -> int:
    records, read_errors = _read_input(cfg)
    seqs, classes = load_prob_archive(_require(args.probs, "--probs"))
    errors = [str(e) for e in read_errors]
    per_record = {}
    for rec in records:
        if rec.status is Status.REJECTED:
            continue
        if rec.alignment is None:
            errors.append(f"{rec.id}: no edit alignment (run 'label' first)")
            continue
        if rec.id not in seqs:
            errors.append(f"{rec.id}: no probabilities in archive")
            continue
        try:
            seq = seq_loss(rec.alignment, seqs[rec.id])
            entry = {"seq": seq}
            if rec.id in classes and rec.category is not None:
                entry["joint"] = joint_loss(seq, classes[rec.id], rec.category, cfg.weight)
        except (KeyError, ValueError) as exc:
            errors.append(f"{rec.id}: {exc.args[0] if exc.args else exc}")
            continue
        per_record[rec.id] = entry
    for msg in errors:
        logger.error("%s", msg)
    summary = {"stage": "loss-eval", "records": len(per_record), "errors": len(errors),
               "error_messages": errors, "weight": cfg.weight, "per_record": per_record}
    if per_record:
        summary["seq_loss"] = corpus_loss([e["seq"] for e in per_record.values()])
        joints = [e["joint"] for e in per_record.values() if "joint" in e]
        if joints:
            summary["joint_loss"] = corpus_loss(joints)
    _emit(summary, None, cfg.report)
    return EXIT_OK if not errors else EXIT_BAD_INPUT


def _read_text_lines(path: str, what: str) -> list[str]:
    with open(_require(path, what), encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def cmd_evaluate(cfg: PipelineConfig, args) -> int:
    sources = _read_text_lines(args.sources, "--sources")
    outputs = _read_text_lines(args.outputs, "--outputs")
    if not args.refs:
        raise InputError("at least one --refs file is required")
    ref_files = [_read_text_lines(p, "--refs") for p in args.refs]
    if any(len(r) != len(outputs) for r in ref_files) or len(sources) != len(outputs):
        raise InputError("sources, outputs and references must have the same number of lines")
    references = [list(rs) for rs in zip(*ref_files)]
    table = None
    if cfg.ppdb and cfg.use_paraphrase:
        table = ParaphraseTable.load(_require(cfg.ppdb, "--ppdb"))
    bert = None
    if args.bert_scores:
        bert = [float(x) for x in _read_text_lines(args.bert_scores, "--bert-scores") if x.strip()]
    report = evaluate(sources, outputs, references, table, bert, cfg.max_n)
    name = args.name or Path(args.outputs).stem
    _emit({"stage": "evaluate", "system": name, **report.as_dict()},
          format_table({name: report}), cfg.report)
    return EXIT_OK


def cmd_stats(cfg: PipelineConfig, args) -> int:
    records, read_errors = _read_input(cfg)
    stats = length_stats(records, include_rejected=args.include_rejected)
    name = args.name or Path(cfg.input).stem
    _emit({"stage": "stats", "corpus": name, **stats.as_dict(), "errors": len(read_errors)},
          format_stats(name, stats), cfg.report)
    return EXIT_OK if not read_errors else EXIT_BAD_INPUT


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with pipeline settings")
    common.add_argument("--report", help="write the JSON run summary here")
    common.add_argument("--jobs", type=int, help="worker processes (default 1)")

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("-i", "--input", help="input pair file (JSON Lines)")
    io.add_argument("-o", "--output", help="output pair file (JSON Lines)")

    parser = _Parser(prog="splitrephrase", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="extract 1-2/2-1 alignments")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--align", required=True)
    p.add_argument("--translations", help="TSV of segment-id and English text")
    p.add_argument("--english-side", choices=("src", "tgt"), default="src")
    p.add_argument("--pivot-language")
    p.add_argument("--source-corpus")
    p.add_argument("--doc-id")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("filter", parents=[common, io], help="noise and overlap filters")
    p.add_argument("--conllu", help="CoNLL-U annotations keyed by <id>.long/.s1/.s2")
    p.add_argument("--min-overlap", type=float)
    p.add_argument("--min-sim", type=float)
    p.add_argument("--similarity-fallback", action="store_true", default=None,
                   help="score pairs without a similarity with token F1")
    p.add_argument("--no-verb-check", dest="require_verb", action="store_false", default=None)
    p.add_argument("--no-parse-check", dest="require_parse", action="store_false", default=None)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("categorize", parents=[common, io], help="assign split categories")
    p.add_argument("--trees", help="TSV of record id and bracketed tree")
    p.add_argument("--split-radius", type=int)
    p.add_argument("--edge-words", type=int)
    p.set_defaults(func=cmd_categorize)

    p = sub.add_parser("label", parents=[common, io], help="build edit labels")
    p.add_argument("--run-length", type=int)
    p.add_argument("--on-violation", choices=("escalate", "keep"))
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("loss-eval", parents=[common, io], help="evaluate the sequence loss")
    p.add_argument("--probs", required=True, help=".npz probability archive")
    p.add_argument("--weight", type=float, help="classifier loss weight (default 1.0)")
    p.set_defaults(func=cmd_loss_eval)

    p = sub.add_parser("evaluate", parents=[common], help="score system outputs")
    p.add_argument("--sources", required=True)
    p.add_argument("--outputs", required=True)
    p.add_argument("--refs", nargs="+", required=True, help="one file per reference set")
    p.add_argument("--ppdb", help="paraphrase table (PPDB format)")
    p.add_argument("--no-paraphrase", dest="use_paraphrase", action="store_false", default=None)
    p.add_argument("--bert-scores", help="one externally computed score per output line")
    p.add_argument("--max-n", type=int)
    p.add_argument("--name", help="row label in the report")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", parents=[common], help="corpus statistics")
    p.add_argument("-i", "--input")
    p.add_argument("--name")
    p.add_argument("--include-rejected", action="store_true")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("SPLITREPHRASE_LOG_LEVEL", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        cfg = _override(load_config(args.config), args)
        return args.func(cfg, args)
    except (InputError, FileNotFoundError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_BAD_INPUT
    except Exception:  # noqa: BLE001
        logger.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
