"""Inverse-prompt slot tagging.

Slot values are generated, not classified: each label is turned into a
prompt of the form ``" <sentence> " <label word> refers to`` and a
language-model scorer greedily fills in the answer, restricted to the
sentence's own words plus a few control tokens. An optional revision round
re-queries labels that produced no value, conditioned on everything found in
the first round. Generated values are mapped back onto BIO tags and scored
with conlleval-style chunk F1.
"""

from .core import (
    DEFAULT_CONTROL,
    ControlTokens,
    LabelMapping,
    Prompt,
    Round,
    Sentence,
    SlotAnnotation,
    as_label_mapping,
    as_sentence,
)
from .data import (
    Dataset,
    Episode,
    dump_conll,
    extract_gold_pairs,
    load_conll,
    load_episodes,
    load_label_mapping,
    parse_conll,
    sample_k_shot,
    save_conll,
)
from .decoding import (
    DecodeConfig,
    GenerationResult,
    allowed_tokens,
    decode_candidates,
    decode_constrained,
    parse_generation,
)
from .errors import (
    ConflictingGold,
    DuplicateTarget,
    EmptyAllowedSet,
    EmptyInput,
    FixtureMismatch,
    InvtagError,
    LengthMismatch,
    MissingPrediction,
    ParseError,
    ScorerFailure,
    SupportInfeasible,
    UnknownLabel,
)
from .estimator import InversePromptTagger, NotFittedError
from .evaluation import (
    AggregateReport,
    EfficiencyReport,
    EvalReport,
    aggregate,
    chunk_f1,
    efficiency_report,
    evaluate_episode,
)
from .labeling import (
    BioSequence,
    Chunk,
    apply_reverse_labeling,
    bio_to_annotation,
    chunks_from_bio,
    reverse_label_pairs,
)
from .lm import LmScorer, ReferenceLm, RemoteLm, reference_from_gold
from .pipeline import (
    LabelPrediction,
    Resolution,
    SlotPrediction,
    count_decode_calls,
    tag_sentence,
)
from .prompting import (
    NormalPrompts,
    TrainingExample,
    answer_prompt,
    build_answered_prompt,
    build_inverse_prompt,
    build_inverse_prompts,
    build_normal_prompts,
    build_second_round_prompt,
    emit_training_examples,
    gold_label_values,
    map_labels,
    render_answer_region,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateReport",
    "BioSequence",
    "Chunk",
    "ConflictingGold",
    "ControlTokens",
    "Dataset",
    "DecodeConfig",
    "DEFAULT_CONTROL",
    "DuplicateTarget",
    "EfficiencyReport",
    "EmptyAllowedSet",
    "EmptyInput",
    "Episode",
    "EvalReport",
    "FixtureMismatch",
    "GenerationResult",
    "InversePromptTagger",
    "InvtagError",
    "LabelMapping",
    "LabelPrediction",
    "LengthMismatch",
    "LmScorer",
    "MissingPrediction",
    "NormalPrompts",
    "NotFittedError",
    "ParseError",
    "Prompt",
    "ReferenceLm",
    "RemoteLm",
    "Resolution",
    "Round",
    "ScorerFailure",
    "Sentence",
    "SlotAnnotation",
    "SlotPrediction",
    "SupportInfeasible",
    "TrainingExample",
    "UnknownLabel",
    "aggregate",
    "allowed_tokens",
    "answer_prompt",
    "apply_reverse_labeling",
    "as_label_mapping",
    "as_sentence",
    "bio_to_annotation",
    "build_answered_prompt",
    "build_inverse_prompt",
    "build_inverse_prompts",
    "build_normal_prompts",
    "build_second_round_prompt",
    "chunk_f1",
    "chunks_from_bio",
    "count_decode_calls",
    "decode_candidates",
    "decode_constrained",
    "dump_conll",
    "efficiency_report",
    "emit_training_examples",
    "evaluate_episode",
    "extract_gold_pairs",
    "gold_label_values",
    "load_conll",
    "load_episodes",
    "load_label_mapping",
    "map_labels",
    "parse_conll",
    "parse_generation",
    "reference_from_gold",
    "render_answer_region",
    "reverse_label_pairs",
    "sample_k_shot",
    "save_conll",
    "tag_sentence",
]
