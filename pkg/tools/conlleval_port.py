"""Independent port of the classic conlleval chunk-scoring algorithm.

This is a test oracle, deliberately kept separate from the library: it
scores BIO sequences with the original streaming chunk-transition logic
(startOfChunk/endOfChunk over consecutive tag pairs, sentence boundaries
treated as O tokens), whereas the library extracts chunk sets directly.
Only the B/I/O tag alphabet is supported, which is all this toolkit emits.

Counting follows the conlleval.txt script (2004-01-26 revision): a chunk is
correct when gold and predicted chunks start together, end together, and
carry the same type; precision/recall default to 0 on empty denominators.
"""
from __future__ import annotations

from typing import Sequence


def split_tag(tag: str) -> tuple[str, str]:
    if tag == "O":
        return "O", ""
    prefix, _, chunk_type = tag.partition("-")
    if prefix not in ("B", "I") or not chunk_type:
        raise ValueError(f"unsupported tag {tag!r} (expected O, B-type, or I-type)")
    return prefix, chunk_type


def end_of_chunk(prev_tag: str, tag: str, prev_type: str, chunk_type: str) -> bool:
    if prev_tag in ("B", "I") and tag in ("B", "O"):
        return True
    if prev_tag != "O" and prev_type != chunk_type:
        return True
    return False


def start_of_chunk(prev_tag: str, tag: str, prev_type: str, chunk_type: str) -> bool:
    if tag == "B":
        return True
    if prev_tag == "O" and tag == "I":
        return True
    if tag != "O" and prev_type != chunk_type:
        return True
    return False


def count_chunks(
    gold_sequences: Sequence[Sequence[str]],
    pred_sequences: Sequence[Sequence[str]],
) -> tuple[int, int, int]:
    """(correct, gold, predicted) chunk counts over parallel tag sequences."""
    if len(gold_sequences) != len(pred_sequences):
        raise ValueError("gold and predicted sequence counts differ")
    correct_chunks = found_correct = found_guessed = 0
    for gold_seq, pred_seq in zip(gold_sequences, pred_sequences):
        if len(gold_seq) != len(pred_seq):
            raise ValueError("gold and predicted sequences differ in length")
        last_correct, last_correct_type = "O", ""
        last_guessed, last_guessed_type = "O", ""
        in_correct = False
        # The trailing ("O", "O") pair plays the role of the blank line
        # between sentences in the original script: it flushes open chunks.
        for gold_tag, pred_tag in list(zip(gold_seq, pred_seq)) + [("O", "O")]:
            correct, correct_type = split_tag(gold_tag)
            guessed, guessed_type = split_tag(pred_tag)

            gold_ends = end_of_chunk(last_correct, correct, last_correct_type, correct_type)
            pred_ends = end_of_chunk(last_guessed, guessed, last_guessed_type, guessed_type)
            if in_correct:
                if gold_ends and pred_ends and last_guessed_type == last_correct_type:
                    in_correct = False
                    correct_chunks += 1
                elif gold_ends != pred_ends or guessed_type != correct_type:
                    in_correct = False

            gold_starts = start_of_chunk(last_correct, correct, last_correct_type, correct_type)
            pred_starts = start_of_chunk(last_guessed, guessed, last_guessed_type, guessed_type)
            if gold_starts and pred_starts and guessed_type == correct_type:
                in_correct = True
            if gold_starts:
                found_correct += 1
            if pred_starts:
                found_guessed += 1

            last_correct, last_correct_type = correct, correct_type
            last_guessed, last_guessed_type = guessed, guessed_type
    return correct_chunks, found_correct, found_guessed


def evaluate(
    gold_sequences: Sequence[Sequence[str]],
    pred_sequences: Sequence[Sequence[str]],
) -> dict:
    correct, gold, pred = count_chunks(gold_sequences, pred_sequences)
    precision = correct / pred if pred > 0 else 0.0
    recall = correct / gold if gold > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return {
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "gold_chunks": gold,
        "pred_chunks": pred,
        "correct_chunks": correct,
    }


def _self_test() -> None:
    cases = [
        # (gold, pred, correct, gold_n, pred_n)
        ([["B-T", "I-T", "O"]], [["B-T", "I-T", "O"]], 1, 1, 1),
        ([["B-T", "I-T", "O"]], [["B-T", "O", "O"]], 0, 1, 1),
        ([["I-T", "I-T", "O"]], [["B-T", "I-T", "O"]], 1, 1, 1),
        ([["B-T", "B-T"]], [["B-T", "I-T"]], 0, 2, 1),
        ([["B-T", "B-T"]], [["B-T", "B-T"]], 2, 2, 2),
        ([["B-X", "I-X"]], [["B-X", "I-Y"]], 0, 1, 2),
        ([["O", "O"]], [["O", "O"]], 0, 0, 0),
        ([["B-X", "I-X", "B-X"]], [["B-X", "I-X", "B-X"]], 2, 2, 2),
    ]
    for gold, pred, correct, gold_n, pred_n in cases:
        got = count_chunks(gold, pred)
        assert got == (correct, gold_n, pred_n), (gold, pred, got)
    print("conlleval port self-test: ok")


if __name__ == "__main__":
    _self_test()
