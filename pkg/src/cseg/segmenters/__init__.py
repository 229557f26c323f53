"""Segmentation models: BPE, MDL morph induction, rule-based English
and Arabic clitic segmenters, plus composition, routing and model I/O."""

from .base import (
    Analysis,
    IdentitySegmenter,
    PipelineSegmenter,
    ScriptRouter,
    Segmenter,
    compose,
    flatten,
    route,
    segment_sentence,
)
from .bpe import BpeModel, apply_bpe, train_bpe
from .mdl import MdlModel, MdlParams, segment_mdl, train_mdl
from .modelio import Manifest, build_segmenter, load_model, parse_manifest, save_model
from .rules import (
    ArRuleSet,
    EnRuleSet,
    default_arabic_rules,
    default_english_rules,
    segment_arabic,
    segment_english,
)

__all__ = [
    "Analysis",
    "ArRuleSet",
    "BpeModel",
    "EnRuleSet",
    "IdentitySegmenter",
    "Manifest",
    "MdlModel",
    "MdlParams",
    "PipelineSegmenter",
    "ScriptRouter",
    "Segmenter",
    "apply_bpe",
    "build_segmenter",
    "compose",
    "default_arabic_rules",
    "default_english_rules",
    "flatten",
    "load_model",
    "parse_manifest",
    "route",
    "save_model",
    "segment_arabic",
    "segment_english",
    "segment_mdl",
    "segment_sentence",
    "train_bpe",
    "train_mdl",
]
