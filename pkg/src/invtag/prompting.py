"""Prompt construction: inverse templates, answered prompts, second-round
prompts, the span-enumeration baseline, and masked training-example emission.

The inverse template renders a quoted sentence followed by a label word and
the connective "refers to"; generation fills in the slot values after it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .core import DEFAULT_CONTROL, ControlTokens, LabelMapping, Prompt, Round, Sentence, SlotAnnotation
from .errors import DuplicateTarget, UnknownLabel

OPEN_QUOTE = '"'
CLOSE_QUOTE = '"'

TokenSeq = Sequence[str]
Values = Sequence[TokenSeq]


def map_labels(labels: Sequence[str], mapping: LabelMapping) -> list[str]:
    """Convert raw labels to label words, preserving input order."""
    return [mapping.word_for(label) for label in labels]


def _quoted(sentence: Sentence) -> tuple[str, ...]:
    return (OPEN_QUOTE, *sentence.tokens, CLOSE_QUOTE)


def _clause_head(label_word: str) -> tuple[str, ...]:
    return (*label_word.split(), "refers", "to")


def build_inverse_prompt(sentence: Sentence, label_word: str) -> Prompt:
    """One unanswered first-round prompt: ``" <sentence> " <label_word> refers to``."""
    tokens = _quoted(sentence) + _clause_head(label_word)
    return Prompt(tokens, len(tokens), Round.FIRST, label_word)


def build_inverse_prompts(sentence: Sentence, label_words: Sequence[str]) -> list[Prompt]:
    """One first-round prompt per label word, in the given order."""
    return [build_inverse_prompt(sentence, word) for word in label_words]


def render_answer_region(values: Values, control: ControlTokens = DEFAULT_CONTROL) -> tuple[str, ...]:
    """Render slot values as generation output: values joined by the separator
    token and closed by the end token; no values renders the none token."""
    values = [tuple(v) for v in values]
    if any(not v for v in values):
        raise ValueError("slot values must be nonempty token sequences")
    if not values:
        return (control.none_token, control.end_token)
    out: list[str] = []
    for i, value in enumerate(values):
        if i:
            out.append(control.sep_token)
        out.extend(value)
    out.append(control.end_token)
    return tuple(out)


def answer_prompt(prompt: Prompt, values: Values, control: ControlTokens = DEFAULT_CONTROL) -> Prompt:
    """Append the rendered answer region to an unanswered prompt."""
    if prompt.is_answered:
        raise ValueError("prompt already carries an answer region")
    region = render_answer_region(values, control)
    return Prompt(prompt.tokens + region, prompt.answer_start, prompt.round, prompt.target_label_word)


def build_answered_prompt(
    sentence: Sentence,
    label_word: str,
    values: Values,
    control: ControlTokens = DEFAULT_CONTROL,
) -> Prompt:
    """First-round prompt with its gold answer region filled in."""
    return answer_prompt(build_inverse_prompt(sentence, label_word), values, control)


def build_second_round_prompt(
    sentence: Sentence,
    known: Sequence[tuple[str, Values]],
    target_label_word: str,
    control: ControlTokens = DEFAULT_CONTROL,
) -> Prompt:
    """Revision prompt: the quoted sentence, one answered clause per known
    label/value pair (in the given order), then the unanswered target clause.

    With an empty ``known`` context the token sequence is identical to the
    first-round prompt for the target.
    """
    tokens = list(_quoted(sentence))
    for word, values in known:
        if word == target_label_word:
            raise DuplicateTarget(target_label_word)
        tokens.extend(_clause_head(word))
        tokens.extend(render_answer_region(values, control))
    tokens.extend(_clause_head(target_label_word))
    return Prompt(tuple(tokens), len(tokens), Round.SECOND, target_label_word)


@dataclass(frozen=True)
class NormalPrompts:
    """Span-enumeration baseline: every n-gram of the sentence is queried,
    optionally crossed with every label."""

    span_count: int
    count: int
    per_label: bool
    prompts: tuple[tuple[str, ...], ...] | None = None


def build_normal_prompts(
    sentence: Sentence,
    label_words: Sequence[str] = (),
    per_label: bool = False,
    materialize: bool = True,
) -> NormalPrompts:
    """Enumerate the classic span-query prompts ``" <sentence> " <span> is a [label] entity``.

    Span mode yields n(n+1)/2 prompts with the label position left open;
    per-label mode crosses every span with every label word.
    """
    n = len(sentence.tokens)
    span_count = n * (n + 1) // 2
    count = span_count * len(label_words) if per_label else span_count
    prompts = None
    if materialize:
        base = _quoted(sentence)
        spans = [
            sentence.tokens[i : j + 1]
            for i in range(n)
            for j in range(i, n)
        ]
        built: list[tuple[str, ...]] = []
        if per_label:
            for span in spans:
                for word in label_words:
                    built.append(base + span + ("is", "a") + tuple(word.split()) + ("entity",))
        else:
            for span in spans:
                built.append(base + span + ("is", "a"))
        prompts = tuple(built)
    return NormalPrompts(span_count, count, per_label, prompts)


def gold_label_values(
    annotation: SlotAnnotation, mapping: LabelMapping
) -> list[tuple[str, tuple[tuple[str, ...], ...]]]:
    """Group annotation values per label word, in mapping order.

    Labels with no gold span get an empty value tuple (rendered as the none
    token when answered).
    """
    grouped: dict[str, list[tuple[str, ...]]] = {raw: [] for raw in mapping.raw_labels()}
    for raw, value in annotation.pairs:
        if raw not in grouped:
            raise UnknownLabel(raw)
        grouped[raw].append(tuple(value))
    return [(word, tuple(grouped[raw])) for raw, word in mapping.entries]


@dataclass(frozen=True)
class TrainingExample:
    """An answered prompt with a loss mask covering exactly the answer region."""

    tokens: tuple[str, ...]
    loss_mask: tuple[bool, ...]
    round: Round


def _masked(prompt: Prompt) -> TrainingExample:
    mask = tuple(i >= prompt.answer_start for i in range(len(prompt.tokens)))
    return TrainingExample(prompt.tokens, mask, prompt.round)


def emit_training_examples(
    example: tuple[Sentence, SlotAnnotation],
    mapping: LabelMapping,
    control: ControlTokens = DEFAULT_CONTROL,
    rng_seed: int = 0,
    withhold_prob: float = 0.5,
) -> list[TrainingExample]:
    """Emit masked training sequences for one annotated sentence.

    Always emits one answered first-round prompt per mapping label. Each
    occurred label is then withheld independently with probability
    ``withhold_prob``; every withheld label yields one answered second-round
    prompt whose context lists all non-withheld pairs (including none-valued
    ones) and whose masked answer is the withheld label's values.
    Deterministic for a fixed seed.
    """
    if not 0.0 <= withhold_prob <= 1.0:
        raise ValueError("withhold_prob must lie in [0, 1]")
    sentence, annotation = example
    pairs = gold_label_values(annotation, mapping)

    out = [
        _masked(build_answered_prompt(sentence, word, values, control))
        for word, values in pairs
    ]

    rng = random.Random(rng_seed)
    withheld = {
        word
        for word, values in pairs
        if values and rng.random() < withhold_prob
    }
    if withheld:
        context = [(word, values) for word, values in pairs if word not in withheld]
        for word, values in pairs:
            if word not in withheld:
                continue
            prompt = build_second_round_prompt(sentence, context, word, control)
            out.append(_masked(answer_prompt(prompt, values, control)))
    return out
