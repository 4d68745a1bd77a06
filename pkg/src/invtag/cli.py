"""Command-line surface: support-set sampling, training-example emission,
tagging, evaluation, and the prompt-count benchmark.

Exit codes: 0 success, 1 usage error, 2 data error, 3 scorer failure in
strict mode.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .core import DEFAULT_CONTROL, Round
from .data import (
    Dataset,
    dump_conll,
    load_conll,
    load_label_mapping,
    sample_k_shot,
)
from .decoding import DecodeConfig
from .errors import InvtagError, ParseError, ScorerFailure
from .evaluation import chunk_f1, efficiency_report, format_report
from .labeling import apply_reverse_labeling, bio_to_annotation
from .lm import RemoteLm, reference_from_gold
from .pipeline import tag_sentence
from .prompting import emit_training_examples

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SCORER = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse defaults to exit code 2 on usage errors; this toolkit reserves
    # 2 for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="invtag", description="Inverse-prompt slot tagging toolkit")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command", parser_class=_Parser)

    p = sub.add_parser("sample", help="draw K-shot support sets from a corpus")
    p.add_argument("--input", required=True, help="CoNLL BIO corpus to sample from")
    p.add_argument("--k", type=int, required=True, help="minimum chunk instances per label")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-sets", type=int, default=10)
    p.add_argument("--out", required=True, help="directory for set_XX.conll files")
    p.add_argument("--lowercase", action="store_true")

    p = sub.add_parser("emit-train", help="emit masked training examples as JSON lines")
    p.add_argument("--support", required=True, help="CoNLL BIO support set")
    p.add_argument("--mapping", required=True, help="label mapping JSON")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--withhold-prob", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--lowercase", action="store_true")

    p = sub.add_parser("tag", help="tag a corpus and write predictions")
    p.add_argument("--input", required=True, help="CoNLL BIO corpus to tag")
    p.add_argument("--mapping", required=True, help="label mapping JSON")
    p.add_argument("--out", required=True, help="JSON-lines predictions file")
    p.add_argument("--scorer", choices=("reference", "remote"), default="reference")
    p.add_argument("--support", help="gold corpus backing the reference scorer (defaults to --input)")
    p.add_argument(
        "--endpoint",
        default=os.environ.get("INVTAG_ENDPOINT"),
        help="remote scorer base URL (falls back to INVTAG_ENDPOINT)",
    )
    p.add_argument("--iterative", action="store_true", help="run the revision round")
    p.add_argument("--max-gen", type=int, default=40, help="generation step cap per decode")
    p.add_argument("--strict", action="store_true", help="abort on scorer failure")
    p.add_argument("--lowercase", action="store_true")

    p = sub.add_parser("eval", help="chunk F1 of predictions against gold")
    p.add_argument("gold", help="gold CoNLL BIO file")
    p.add_argument("pred", help="predicted tags: CoNLL file or tag-command JSON lines")
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("bench", help="prompt-count comparison per sentence")
    p.add_argument("--input", required=True, help="CoNLL BIO corpus")
    p.add_argument("--mapping", required=True, help="label mapping JSON")
    p.add_argument("--out", help="write rows as JSON here as well")
    p.add_argument("--lowercase", action="store_true")

    return parser


def cmd_sample(dataset_path: str, k: int, seed: int, num_sets: int, out_dir: str, lowercase: bool = False) -> int:
    dataset = load_conll(dataset_path, lowercase=lowercase)
    sets = sample_k_shot(dataset, k, seed=seed, num_sets=num_sets)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, support in enumerate(sets):
        (out / f"set_{i:02d}.conll").write_text(dump_conll(support), encoding="utf-8")
    print(f"wrote {len(sets)} support sets to {out}")
    return EXIT_OK


def cmd_emit_train(
    support_path: str,
    mapping_path: str,
    seed: int,
    withhold_prob: float,
    out_path: str,
    lowercase: bool = False,
) -> int:
    dataset = load_conll(support_path, lowercase=lowercase)
    mapping = load_label_mapping(mapping_path)
    round_numbers = {Round.FIRST: 1, Round.SECOND: 2}
    count = 0
    with open(out_path, "w", encoding="utf-8") as handle:
        for idx, (sentence, tags) in enumerate(dataset):
            annotation = bio_to_annotation(sentence, tags)
            examples = emit_training_examples(
                (sentence, annotation),
                mapping,
                DEFAULT_CONTROL,
                rng_seed=(seed * 1_000_003 + idx) % 2**63,
                withhold_prob=withhold_prob,
            )
            for example in examples:
                record = {
                    "tokens": list(example.tokens),
                    "loss_mask": list(example.loss_mask),
                    "round": round_numbers[example.round],
                }
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")
                count += 1
    print(f"wrote {count} training examples to {out_path}")
    return EXIT_OK


def _build_scorer(args: argparse.Namespace, dataset: Dataset, mapping) -> object:
    if args.scorer == "remote":
        if not args.endpoint:
            raise UsageError(
                "invtag tag: error: --scorer remote needs --endpoint or INVTAG_ENDPOINT"
            )
        return RemoteLm(args.endpoint)
    source = load_conll(args.support, lowercase=args.lowercase) if args.support else dataset
    examples = [(s, bio_to_annotation(s, tags)) for s, tags in source]
    return reference_from_gold(examples, mapping)


def cmd_tag(args: argparse.Namespace) -> int:
    dataset = load_conll(args.input, lowercase=args.lowercase)
    mapping = load_label_mapping(args.mapping)
    scorer = _build_scorer(args, dataset, mapping)
    config = DecodeConfig(args.max_gen)
    warnings = 0
    with open(args.out, "w", encoding="utf-8") as handle:
        for sentence, _ in dataset:
            prediction = tag_sentence(
                scorer,
                sentence,
                mapping,
                DEFAULT_CONTROL,
                config,
                iterative=args.iterative,
                strict=args.strict,
            )
            warnings += prediction.failure_count()
            record = {
                "tokens": list(sentence.tokens),
                "tags": apply_reverse_labeling(sentence, prediction),
                "labels": [
                    {
                        "label": entry.raw_label,
                        "word": entry.label_word,
                        "values": [list(v) for v in entry.values],
                        "resolved": entry.resolved.value,
                        "failed": entry.failed,
                    }
                    for entry in prediction.per_label
                ],
            }
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    if warnings:
        print(f"warning: {warnings} label decodes failed and were left unresolved", file=sys.stderr)
    print(f"tagged {len(dataset)} sentences -> {args.out}")
    return EXIT_OK


def _read_predictions(path: str) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Read (tokens, tags) pairs from a CoNLL file or tag-command JSON lines."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        pairs = []
        for line_no, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON line: {exc}", line_no=line_no) from exc
            tokens = record.get("tokens")
            tags = record.get("tags")
            if not isinstance(tokens, list) or not isinstance(tags, list):
                raise ParseError("record needs 'tokens' and 'tags' lists", line_no=line_no)
            pairs.append((tuple(tokens), tuple(tags)))
        return pairs
    dataset = load_conll(path)
    return [(sentence.tokens, tags) for sentence, tags in dataset]


def cmd_eval(gold_path: str, pred_path: str, out_path: str | None = None) -> int:
    gold = load_conll(gold_path)
    pred = _read_predictions(pred_path)
    report = chunk_f1(
        [tags for _, tags in gold],
        [tags for _, tags in pred],
    )
    print(format_report(report))
    payload = json.dumps(report.to_dict(), indent=2)
    if out_path:
        Path(out_path).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    return EXIT_OK


def cmd_bench(dataset_path: str, mapping_path: str, out_path: str | None = None, lowercase: bool = False) -> int:
    dataset = load_conll(dataset_path, lowercase=lowercase)
    mapping = load_label_mapping(mapping_path)
    rows = [efficiency_report(sentence, mapping) for sentence, _ in dataset]
    header = f"{'n':>4} {'m':>4} {'span_prompts':>14} {'inverse_prompts':>16}"
    print(header)
    for row in rows:
        print(f"{row.n:>4d} {row.m:>4d} {row.span_count:>14d} {row.inverse_prompt_count:>16d}")
    if out_path:
        Path(out_path).write_text(
            json.dumps([row.to_dict() for row in rows], indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "sample":
            return cmd_sample(args.input, args.k, args.seed, args.num_sets, args.out, args.lowercase)
        if args.command == "emit-train":
            return cmd_emit_train(
                args.support, args.mapping, args.seed, args.withhold_prob, args.out, args.lowercase
            )
        if args.command == "tag":
            return cmd_tag(args)
        if args.command == "eval":
            return cmd_eval(args.gold, args.pred, args.out)
        if args.command == "bench":
            return cmd_bench(args.input, args.mapping, args.out, args.lowercase)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ScorerFailure as exc:
        print(f"scorer failure: {exc}", file=sys.stderr)
        return EXIT_SCORER
    except (InvtagError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry() -> None:  # console_scripts hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
