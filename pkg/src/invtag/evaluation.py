"""Chunk-level precision/recall/F1 with conlleval counting semantics,
episode scoring, cross-episode aggregation, and the prompt-count efficiency
comparison between span enumeration and inverse prompting.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Sequence

from .core import LabelMapping, Sentence
from .errors import EmptyInput, LengthMismatch, MissingPrediction
from .labeling import BioSequence, chunks_from_bio

if TYPE_CHECKING:  # pragma: no cover
    from .data import Episode
    from .decoding import GenerationResult


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    gold_chunks: int
    pred_chunks: int
    correct_chunks: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _prf(correct: int, pred: int, gold: int, both_empty_score: float) -> tuple[float, float, float]:
    if gold == 0 and pred == 0:
        return both_empty_score, both_empty_score, both_empty_score
    precision = correct / pred if pred else 0.0
    recall = correct / gold if gold else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def chunk_f1(
    gold: Sequence[BioSequence],
    pred: Sequence[BioSequence],
    both_empty_score: float = 1.0,
) -> EvalReport:
    """Micro-averaged chunk F1 over parallel BIO sequences.

    A predicted chunk counts as correct when its (label, start, end) triple
    matches a gold chunk of the same sequence. With zero predicted chunks
    precision is 0 (and likewise recall with zero gold); the degenerate case
    of no chunks on either side scores ``both_empty_score`` throughout.
    """
    if len(gold) != len(pred):
        raise LengthMismatch(f"{len(gold)} gold sequences vs {len(pred)} predicted")
    correct = gold_total = pred_total = 0
    for i, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise LengthMismatch(f"sequence {i}: {len(g)} gold tags vs {len(p)} predicted")
        gold_chunks = set(chunks_from_bio(g))
        pred_chunks = set(chunks_from_bio(p))
        correct += len(gold_chunks & pred_chunks)
        gold_total += len(gold_chunks)
        pred_total += len(pred_chunks)
    precision, recall, f1 = _prf(correct, pred_total, gold_total, both_empty_score)
    return EvalReport(precision, recall, f1, gold_total, pred_total, correct)


def evaluate_episode(
    episode: "Episode",
    predictions: Sequence[BioSequence],
    both_empty_score: float = 1.0,
) -> EvalReport:
    """Chunk F1 over the episode's query set only (support set excluded)."""
    if len(predictions) != len(episode.query):
        raise MissingPrediction(
            f"{len(predictions)} predictions for {len(episode.query)} query sentences"
        )
    gold = [tags for _, tags in episode.query]
    return chunk_f1(gold, predictions, both_empty_score)


@dataclass(frozen=True)
class AggregateReport:
    precision: float
    recall: float
    f1: float
    report_count: int

    def to_dict(self) -> dict:
        return asdict(self)


def aggregate(reports: Sequence[EvalReport], mode: str = "mean_f1") -> AggregateReport:
    """Unweighted arithmetic mean of per-report precision, recall, and F1."""
    if mode != "mean_f1":
        raise ValueError(f"unknown aggregation mode {mode!r}")
    if not reports:
        raise EmptyInput("aggregate needs at least one report")
    n = len(reports)
    return AggregateReport(
        precision=sum(r.precision for r in reports) / n,
        recall=sum(r.recall for r in reports) / n,
        f1=sum(r.f1 for r in reports) / n,
        report_count=n,
    )


@dataclass(frozen=True)
class EfficiencyReport:
    """Prompt-count comparison for one sentence.

    ``span_count`` is the n(n+1)/2 span enumeration a span-query baseline
    must score; ``normal_prompt_count`` crosses that with every label, while
    inverse prompting needs one decode per label (``inverse_prompt_count``),
    at most doubled by the revision round (``inverse_prompt_ceiling``).
    """

    n: int
    m: int
    span_count: int
    normal_prompt_count: int
    inverse_prompt_count: int
    inverse_prompt_ceiling: int
    normal_complexity_class: str = "O(n^2*m)"
    inverse_complexity_class: str = "O(n*m)"
    decode_steps: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def efficiency_report(
    sentence: Sentence,
    mapping: LabelMapping,
    iterative: bool = True,
    trace: Sequence["GenerationResult"] | None = None,
) -> EfficiencyReport:
    n = len(sentence.tokens)
    m = len(mapping)
    span_count = n * (n + 1) // 2
    return EfficiencyReport(
        n=n,
        m=m,
        span_count=span_count,
        normal_prompt_count=span_count * m,
        inverse_prompt_count=m,
        inverse_prompt_ceiling=2 * m if iterative else m,
        decode_steps=sum(r.steps_used for r in trace) if trace is not None else None,
    )


def format_report(report: EvalReport) -> str:
    """Fixed-width text rendering of an EvalReport."""
    lines = [
        f"{'precision':>10} {'recall':>10} {'f1':>10} {'gold':>6} {'pred':>6} {'correct':>8}",
        (
            f"{report.precision:>10.4f} {report.recall:>10.4f} {report.f1:>10.4f} "
            f"{report.gold_chunks:>6d} {report.pred_chunks:>6d} {report.correct_chunks:>8d}"
        ),
    ]
    return "\n".join(lines)
