"""Vocabulary-constrained greedy decoding and answer-region parsing.

Generation is restricted to the source sentence's words plus the control
tokens; each step takes the argmax of the scorer over that candidate set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .core import DEFAULT_CONTROL, ControlTokens, Prompt, Sentence
from .errors import EmptyAllowedSet, ScorerFailure

if TYPE_CHECKING:  # pragma: no cover
    from .lm import LmScorer


@dataclass(frozen=True)
class DecodeConfig:
    max_generated_tokens: int = 40

    def __post_init__(self):
        if self.max_generated_tokens < 1:
            raise ValueError("max_generated_tokens must be at least 1")


@dataclass(frozen=True)
class GenerationResult:
    generated_tokens: tuple[str, ...]
    terminated_by_end: bool
    steps_used: int

    def __post_init__(self):
        tokens = tuple(self.generated_tokens)
        object.__setattr__(self, "generated_tokens", tokens)
        if self.steps_used != len(tokens):
            raise ValueError("steps_used must equal the number of generated tokens")


def decode_candidates(sentence: Sentence, control: ControlTokens = DEFAULT_CONTROL) -> tuple[str, ...]:
    """Candidate tokens in canonical order: sentence position order first,
    then the none, separator, and end tokens; duplicates collapsed."""
    seen: set[str] = set()
    out: list[str] = []
    for tok in (*sentence.tokens, *control.as_tuple()):
        if tok not in seen:
            seen.add(tok)
            out.append(tok)
    return tuple(out)


def allowed_tokens(sentence: Sentence, control: ControlTokens = DEFAULT_CONTROL) -> frozenset[str]:
    """The set union of sentence words and control tokens."""
    return frozenset(decode_candidates(sentence, control))


def _checked_scores(scorer: "LmScorer", prefix: list[str], candidates: Sequence[str]) -> list[float]:
    scores = scorer.score_next(prefix, list(candidates))
    if len(scores) != len(candidates):
        raise ScorerFailure(
            f"scorer returned {len(scores)} scores for {len(candidates)} candidates"
        )
    for s in scores:
        if not math.isfinite(s):
            raise ScorerFailure(f"scorer returned a non-finite score: {s!r}")
    return scores


def decode_constrained(
    scorer: "LmScorer",
    prompt: Prompt,
    allowed: Iterable[str],
    config: DecodeConfig = DecodeConfig(),
    control: ControlTokens = DEFAULT_CONTROL,
) -> GenerationResult:
    """Greedy argmax generation over the allowed candidates.

    Stops after emitting the end token or when the step cap is reached. Ties
    break toward the earlier candidate, so passing candidates in canonical
    order (see ``decode_candidates``) makes runs reproducible.
    """
    candidates = tuple(dict.fromkeys(allowed))
    if not candidates:
        raise EmptyAllowedSet("constrained decoding needs at least one candidate token")
    if prompt.is_answered:
        raise ValueError("decode_constrained expects an unanswered prompt")

    prefix = list(prompt.tokens)
    generated: list[str] = []
    terminated = False
    for _ in range(config.max_generated_tokens):
        scores = _checked_scores(scorer, prefix, candidates)
        best = 0
        for i in range(1, len(scores)):
            if scores[i] > scores[best]:
                best = i
        token = candidates[best]
        generated.append(token)
        prefix.append(token)
        if token == control.end_token:
            terminated = True
            break
    return GenerationResult(tuple(generated), terminated, len(generated))


def parse_generation(
    result: GenerationResult, control: ControlTokens = DEFAULT_CONTROL
) -> list[tuple[str, ...]]:
    """Split a generation into slot values.

    Strips one trailing end token, splits on the separator token, and drops
    empty segments and bare none-token segments. An unterminated generation
    is parsed as-is.
    """
    tokens = list(result.generated_tokens)
    if tokens and tokens[-1] == control.end_token:
        tokens.pop()
    segments: list[list[str]] = [[]]
    for tok in tokens:
        if tok == control.sep_token:
            segments.append([])
        else:
            segments[-1].append(tok)
    return [
        tuple(seg)
        for seg in segments
        if seg and seg != [control.none_token]
    ]
