"""cseg: subword segmentation toolkit and evaluation harness for
code-switched Arabic-English text.

Train and apply frequency-based (BPE), unsupervised MDL and rule-based
morphological segmenters — individually, composed, and routed by
script — and evaluate them with EMMA, chrF2++, OOV rates and
code-switching-aware corpus analyses.
"""

from .corpus import (
    CorpusStats,
    GoldEntry,
    PreprocessOptions,
    Script,
    Sentence,
    SentenceCategory,
    Token,
    categorize,
    classify_script,
    corpus_stats,
    english_percentage,
    from_buckwalter,
    load_gold,
    morphological_richness,
    preprocess,
    read_corpus,
    subsample,
    to_buckwalter,
    word_language,
)
from .errors import (
    AlignmentError,
    ArgumentError,
    ChecksumError,
    ConfigError,
    CsegError,
    FormatError,
    ValidationError,
)
from .metrics import (
    ChrfReport,
    EmmaReport,
    SegDiagnostics,
    chrf_pp,
    emma,
    oov_rate,
    seg_diagnostics,
    sentence_chrf_pp,
)
from .segmenters import (
    ArRuleSet,
    BpeModel,
    EnRuleSet,
    IdentitySegmenter,
    MdlModel,
    MdlParams,
    PipelineSegmenter,
    ScriptRouter,
    apply_bpe,
    build_segmenter,
    compose,
    load_model,
    parse_manifest,
    route,
    save_model,
    segment_arabic,
    segment_english,
    segment_mdl,
    train_bpe,
    train_mdl,
)

__version__ = "0.1.0"
