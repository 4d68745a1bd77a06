"""Language-model scorers: the pluggable interface, a deterministic
table-backed reference scorer for oracle tests, and an HTTP client for a
remote scorer.

A scorer maps (prefix tokens, candidate tokens) to one finite score per
candidate. Subword models live behind the wire protocol: the server must
return one aggregate score per candidate word, so the decode loop only ever
sees whole words.
"""
from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

import requests

from .core import DEFAULT_CONTROL, ControlTokens, LabelMapping, Sentence, SlotAnnotation
from .errors import ConflictingGold, ScorerFailure
from .prompting import (
    build_inverse_prompt,
    build_second_round_prompt,
    gold_label_values,
    render_answer_region,
)


@runtime_checkable
class LmScorer(Protocol):
    concurrent_calls_allowed: bool

    def score_next(self, prefix: Sequence[str], candidates: Sequence[str]) -> list[float]:
        """Return one finite score per candidate, in candidate order."""
        ...


def _context_key(prefix: Sequence[str]) -> str:
    return " ".join(prefix)


@dataclass
class ReferenceLm:
    """Deterministic scorer backed by an exact-match context table.

    ``table`` maps a full-prefix context key to a next-token score
    distribution; tokens and contexts not in the table score
    ``fallback_score``.
    """

    table: dict[str, dict[str, float]]
    fallback_score: float = 0.0
    concurrent_calls_allowed: bool = field(default=True)

    def score_next(self, prefix: Sequence[str], candidates: Sequence[str]) -> list[float]:
        if not candidates:
            raise ValueError("candidates must be nonempty")
        dist = self.table.get(_context_key(prefix), {})
        return [float(dist.get(tok, self.fallback_score)) for tok in candidates]


def reference_from_gold(
    examples: Sequence[tuple[Sentence, SlotAnnotation]],
    mapping: LabelMapping,
    control: ControlTokens = DEFAULT_CONTROL,
    hit_score: float = 1.0,
    fallback_score: float = 0.0,
) -> ReferenceLm:
    """Build a reference scorer that regenerates each example's gold answers.

    Seeds every first-round prompt context, and for labels without gold
    values also the second-round contexts conditioned on the example's
    recognized pairs, so both tagging rounds replay the gold exactly.
    """
    if not hit_score > fallback_score:
        raise ValueError("hit_score must exceed fallback_score")
    forced: dict[str, str] = {}

    def put(context_tokens: Sequence[str], answer_tokens: Sequence[str]) -> None:
        ctx = list(context_tokens)
        for tok in answer_tokens:
            key = _context_key(ctx)
            prev = forced.get(key)
            if prev is not None and prev != tok:
                raise ConflictingGold(key, prev, tok)
            forced[key] = tok
            ctx.append(tok)

    for sentence, annotation in examples:
        pairs = gold_label_values(annotation, mapping)
        for word, values in pairs:
            prompt = build_inverse_prompt(sentence, word)
            put(prompt.tokens, render_answer_region(values, control))
        recognized = [(word, values) for word, values in pairs if values]
        for word, values in pairs:
            if values:
                continue
            prompt = build_second_round_prompt(sentence, recognized, word, control)
            put(prompt.tokens, render_answer_region((), control))

    table = {ctx: {tok: hit_score} for ctx, tok in forced.items()}
    return ReferenceLm(table, fallback_score)


class RemoteLm:
    """HTTP client for a remote scorer speaking the /score wire protocol.

    POSTs ``{"prefix": [...], "candidates": [...]}`` and expects
    ``{"scores": [...]}`` of the same length and order. Transport failures
    and 5xx responses are retried with linear backoff up to ``retry_limit``
    times; anything still failing raises ScorerFailure.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 10.0,
        retry_limit: int = 2,
        backoff: float = 0.1,
        max_in_flight: int = 8,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.retry_limit = retry_limit
        self.backoff = backoff
        self.concurrent_calls_allowed = True
        self._slots = threading.BoundedSemaphore(max_in_flight)
        self._session = requests.Session()

    @property
    def score_url(self) -> str:
        return f"{self.endpoint}/score"

    def score_next(self, prefix: Sequence[str], candidates: Sequence[str]) -> list[float]:
        if not candidates:
            raise ValueError("candidates must be nonempty")
        payload = {"prefix": list(prefix), "candidates": list(candidates)}
        last_error: Exception | None = None
        for attempt in range(self.retry_limit + 1):
            if attempt and self.backoff:
                time.sleep(self.backoff * attempt)
            try:
                with self._slots:
                    response = self._session.post(
                        self.score_url, json=payload, timeout=self.timeout
                    )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code >= 500:
                last_error = ScorerFailure(f"scorer endpoint returned status {response.status_code}")
                continue
            if response.status_code != 200:
                raise ScorerFailure(f"scorer endpoint returned status {response.status_code}")
            return self._parse_scores(response, len(candidates))
        raise ScorerFailure(
            f"scorer endpoint unreachable after {self.retry_limit + 1} attempts: {last_error}"
        )

    @staticmethod
    def _parse_scores(response: "requests.Response", expected: int) -> list[float]:
        try:
            body = response.json()
        except ValueError as exc:
            raise ScorerFailure("malformed scorer response: not valid JSON") from exc
        scores = body.get("scores") if isinstance(body, dict) else None
        if not isinstance(scores, list) or len(scores) != expected:
            got = len(scores) if isinstance(scores, list) else "no"
            raise ScorerFailure(f"scorer response carries {got} scores, expected {expected}")
        out: list[float] = []
        for s in scores:
            if isinstance(s, bool) or not isinstance(s, (int, float)) or not math.isfinite(s):
                raise ScorerFailure(f"scorer response carries a non-numeric score: {s!r}")
            out.append(float(s))
        return out
