"""Frozen fixtures and their replay harness.

Every fixture replays through the public API and is compared against the
frozen expectation; the replay runs offline and is part of the default test
suite. Provenance tags mark where an expectation comes from: PAPER for
examples reproduced from published material, DERIVED for values produced by
a named oracle procedure (see each file's ``oracle_note``), TRIVIAL for
definitional cases.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..core import LabelMapping, Sentence
from ..data import extract_gold_pairs
from ..errors import FixtureMismatch
from ..evaluation import chunk_f1
from ..labeling import bio_to_annotation, reverse_label_pairs
from ..lm import reference_from_gold
from ..pipeline import tag_sentence
from ..prompting import (
    answer_prompt,
    build_answered_prompt,
    build_inverse_prompts,
    build_second_round_prompt,
)

FIXTURE_FILES = (
    "worked_example.json",
    "oracle_tagging.json",
    "conlleval_parity.json",
)


@dataclass(frozen=True)
class FixtureCase:
    name: str
    provenance_tag: str
    inputs: dict
    expected: dict
    oracle_note: str = ""


def fixture_dir() -> Path:
    return Path(__file__).resolve().parent


def load_case(file_name: str, directory: Path | None = None) -> FixtureCase:
    directory = directory or fixture_dir()
    raw = json.loads((directory / file_name).read_text(encoding="utf-8"))
    expected = raw.pop("expected", None)
    if expected is None:
        # parity file keeps per-case expectations inline
        expected = {"cases": raw.get("cases", [])}
    return FixtureCase(
        name=raw.pop("name"),
        provenance_tag=raw.pop("provenance_tag"),
        oracle_note=raw.pop("oracle_note", ""),
        inputs=raw,
        expected=expected,
    )


def _require(case: FixtureCase, condition: bool, detail: str) -> None:
    if not condition:
        raise FixtureMismatch(case.name, detail)


def _pairs_from_json(raw: list) -> list[tuple[str, tuple[tuple[str, ...], ...]]]:
    return [(word, tuple(tuple(v) for v in values)) for word, values in raw]


def _replay_worked_example(case: FixtureCase) -> None:
    sentence = Sentence.from_text(case.inputs["sentence"])
    mapping = LabelMapping.from_dict(case.inputs["mapping"])
    gold_tags = case.inputs["gold_tags"]
    expected = case.expected

    prompts = build_inverse_prompts(sentence, mapping.label_words())
    _require(
        case,
        [p.text for p in prompts] == expected["first_round_prompts"],
        "first-round prompt strings differ",
    )

    pairs = extract_gold_pairs(sentence, gold_tags, mapping)
    _require(
        case,
        pairs == _pairs_from_json(expected["gold_pairs"]),
        "gold label/value pairs differ",
    )

    answered = [build_answered_prompt(sentence, word, values) for word, values in pairs]
    _require(
        case,
        [p.text for p in answered] == expected["answered_prompts"],
        "answered prompt strings differ",
    )

    for record in expected["second_round_prompts"]:
        prompt = build_second_round_prompt(
            sentence, _pairs_from_json(record["known"]), record["target"]
        )
        _require(
            case,
            prompt.text == record["text"],
            f"second-round prompt for {record['target']!r} differs",
        )

    training = expected["second_round_training"]
    withheld = training["withheld"]
    context = [(word, values) for word, values in pairs if word != withheld]
    values = dict(pairs)[withheld]
    prompt = answer_prompt(build_second_round_prompt(sentence, context, withheld), values)
    _require(case, prompt.text == training["text"], "second-round training prompt differs")
    _require(
        case,
        " ".join(prompt.answer_tokens) == training["masked_text"],
        "masked answer region differs",
    )


def _replay_oracle_tagging(case: FixtureCase) -> None:
    mapping = LabelMapping.from_dict(case.inputs["mapping"])
    corpus = [
        (Sentence(tuple(rec["tokens"])), tuple(rec["tags"]))
        for rec in case.inputs["corpus"]
    ]
    scorer = reference_from_gold(
        [(s, bio_to_annotation(s, tags)) for s, tags in corpus], mapping
    )
    for key, iterative in (("iterative_true", True), ("iterative_false", False)):
        for (sentence, _), expected_tags in zip(corpus, case.expected[key]):
            prediction = tag_sentence(scorer, sentence, mapping, iterative=iterative)
            tags = reverse_label_pairs(sentence, prediction.as_pairs())
            _require(
                case,
                tags == expected_tags,
                f"{key}: {' '.join(sentence.tokens)!r} tagged {tags}",
            )


def _replay_conlleval_parity(case: FixtureCase) -> None:
    for record in case.expected["cases"]:
        report = chunk_f1(record["gold"], record["pred"])
        expected = record["expected"]
        counts_match = (
            report.gold_chunks == expected["gold_chunks"]
            and report.pred_chunks == expected["pred_chunks"]
            and report.correct_chunks == expected["correct_chunks"]
        )
        scores_match = (
            abs(report.precision - expected["precision"]) < 1e-9
            and abs(report.recall - expected["recall"]) < 1e-9
            and abs(report.f1 - expected["f1"]) < 1e-9
        )
        _require(
            case,
            counts_match and scores_match,
            f"case {record['name']!r}: got {report.to_dict()}, expected {expected}",
        )


_REPLAYS = {
    "flight-booking-worked-example": _replay_worked_example,
    "gold-replay-tagging": _replay_oracle_tagging,
    "conlleval-parity-corpus": _replay_conlleval_parity,
}


def verify_fixtures(directory: Path | None = None, strict: bool = True) -> dict[str, list[str]]:
    """Replay every frozen fixture through the public API.

    Returns {"passed": [...], "failed": [...]} by fixture name. With
    ``strict`` (the default) the first mismatch raises FixtureMismatch
    instead of being collected.
    """
    summary: dict[str, list[str]] = {"passed": [], "failed": []}
    for file_name in FIXTURE_FILES:
        case = load_case(file_name, directory)
        replay = _REPLAYS.get(case.name)
        if replay is None:
            raise FixtureMismatch(case.name, "no replay procedure registered")
        try:
            replay(case)
        except FixtureMismatch:
            if strict:
                raise
            summary["failed"].append(case.name)
        else:
            summary["passed"].append(case.name)
    return summary
