"""Sentence tagging: first-round decoding per label, then an optional
revision round that re-queries only the labels left without values,
conditioned on everything recognized so far.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import TYPE_CHECKING, Sequence

from .core import DEFAULT_CONTROL, ControlTokens, LabelMapping, Prompt, Sentence
from .decoding import DecodeConfig, decode_candidates, decode_constrained, parse_generation
from .errors import ScorerFailure
from .prompting import build_inverse_prompt, build_second_round_prompt

if TYPE_CHECKING:  # pragma: no cover
    from .lm import LmScorer


class Resolution(str, Enum):
    FIRST = "first"
    SECOND = "second"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class LabelPrediction:
    raw_label: str
    label_word: str
    values: tuple[tuple[str, ...], ...]
    resolved: Resolution
    failed: bool = False


@dataclass(frozen=True)
class SlotPrediction:
    """Per-label decoded slot values, one entry per mapping label in order."""

    per_label: tuple[LabelPrediction, ...]

    def as_pairs(self) -> list[tuple[str, tuple[tuple[str, ...], ...]]]:
        return [(entry.raw_label, entry.values) for entry in self.per_label]

    def values_for(self, raw_label: str) -> tuple[tuple[str, ...], ...]:
        for entry in self.per_label:
            if entry.raw_label == raw_label:
                return entry.values
        raise KeyError(raw_label)

    def nonempty_labels(self) -> list[str]:
        return [entry.raw_label for entry in self.per_label if entry.values]

    def failure_count(self) -> int:
        return sum(1 for entry in self.per_label if entry.failed)


def _decode_values(
    scorer: "LmScorer",
    prompt: Prompt,
    candidates: Sequence[str],
    config: DecodeConfig,
    control: ControlTokens,
    strict: bool,
) -> tuple[tuple[tuple[str, ...], ...], bool]:
    try:
        result = decode_constrained(scorer, prompt, candidates, config, control)
    except ScorerFailure:
        if strict:
            raise
        return (), True
    return tuple(parse_generation(result, control)), False


def tag_sentence(
    scorer: "LmScorer",
    sentence: Sentence,
    mapping: LabelMapping,
    control: ControlTokens = DEFAULT_CONTROL,
    config: DecodeConfig | None = None,
    iterative: bool = True,
    strict: bool = False,
) -> SlotPrediction:
    """Decode slot values for every mapping label.

    Round one decodes each label's inverse prompt independently. With
    ``iterative`` on, every label whose parse came back empty is re-queried
    once with a revision prompt conditioned on all recognized label/value
    pairs (mapping order); recognized labels are never re-queried, and
    revision can only add values, never remove them.

    A scorer failure marks the label unresolved unless ``strict`` is set, in
    which case it propagates.
    """
    if not len(mapping):
        raise ValueError("mapping must define at least one label")
    config = config or DecodeConfig()
    candidates = decode_candidates(sentence, control)

    entries: list[LabelPrediction] = []
    for raw, word in mapping:
        prompt = build_inverse_prompt(sentence, word)
        values, failed = _decode_values(scorer, prompt, candidates, config, control, strict)
        resolved = Resolution.FIRST if values else Resolution.UNRESOLVED
        entries.append(LabelPrediction(raw, word, values, resolved, failed))

    if iterative:
        known = [(e.label_word, e.values) for e in entries if e.values]
        for i, entry in enumerate(entries):
            if entry.values:
                continue
            prompt = build_second_round_prompt(sentence, known, entry.label_word, control)
            values, failed = _decode_values(scorer, prompt, candidates, config, control, strict)
            if values:
                entries[i] = LabelPrediction(
                    entry.raw_label, entry.label_word, values, Resolution.SECOND
                )
            else:
                entries[i] = replace(entry, failed=failed)

    return SlotPrediction(tuple(entries))


def count_decode_calls(
    sentence: Sentence, mapping: LabelMapping, iterative: bool = True
) -> tuple[int, int]:
    """(first-round calls, revision-call ceiling) for one sentence.

    Round one always issues one decode per label; the revision round issues
    at most one more per label, hit only when every label parses empty.
    """
    m = len(mapping)
    return m, m if iterative else 0
