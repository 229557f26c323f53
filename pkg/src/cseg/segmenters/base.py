"""Segmenter interface, composition and script routing.

Every segmenter maps one token to an Analysis: an ordered, nonempty
morph list whose concatenation reproduces the token (after that
segmenter's declared normalization). Composition applies stages in
sequence, each later stage refining the previous stage's morphs without
ever merging across their boundaries. Routing dispatches each token to
the segmenter registered for its script class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence, runtime_checkable

from ..corpus import Script, Sentence, classify_script
from ..errors import ArgumentError

Analysis = list[str]


@runtime_checkable
class Segmenter(Protocol):
    def segment(self, token: str) -> Analysis:
        ...


@dataclass(frozen=True)
class IdentitySegmenter:
    """Leaves every token whole."""

    def segment(self, token: str) -> Analysis:
        if not token:
            raise ArgumentError("cannot segment an empty token")
        return [token]


@dataclass(frozen=True)
class PipelineSegmenter:
    """Sequential composition: stage k re-segments each morph emitted by
    stage k-1 independently, so earlier boundaries are preserved by
    construction."""

    stages: tuple[Segmenter, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ArgumentError("a pipeline needs at least one stage")

    def segment(self, token: str) -> Analysis:
        morphs = [token]
        for stage in self.stages:
            morphs = [piece for m in morphs for piece in stage.segment(m)]
        return morphs


def compose(stages: Sequence[Segmenter]) -> PipelineSegmenter:
    return PipelineSegmenter(stages=tuple(stages))


@dataclass(frozen=True)
class ScriptRouter:
    """Per-token dispatch on script class; unrouted classes fall back to
    the identity segmenter (tokens stay unsegmented)."""

    routes: dict[Script, Segmenter] = field(default_factory=dict)
    default: Segmenter = field(default_factory=IdentitySegmenter)

    def segment(self, token: str) -> Analysis:
        seg = self.routes.get(classify_script(token), self.default)
        return seg.segment(token)


def route(sentence: Sentence, router: dict[Script, Segmenter]) -> list[Analysis]:
    """Segment each token of the sentence with its script's segmenter."""
    r = ScriptRouter(routes=dict(router))
    return [r.segment(t.surface) for t in sentence.tokens]


def segment_sentence(segmenter: Segmenter, sentence: Sentence) -> list[Analysis]:
    return [segmenter.segment(t.surface) for t in sentence.tokens]


def flatten(analyses: Sequence[Analysis]) -> list[str]:
    return [m for a in analyses for m in a]
