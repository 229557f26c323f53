"""Segmentation and translation evaluation metrics.

EMMA: predicted and gold morph *types* are put in an optimal one-to-one
correspondence before precision/recall are counted, so a segmenter that
consistently produces a differently-spelled morph for the same gold
morpheme is not punished for the spelling. The pair weight is the
number of co-occurrences: weight(p, g) = sum over words of
min(multiplicity of p in the predicted analysis, multiplicity of g in
the gold analysis). A maximum-weight one-to-one matching over types
(solved as an assignment problem) gives the matched mass; precision
divides by predicted morph tokens, recall by gold morph tokens.

chrF2++: character n-grams of orders 1..6 on whitespace-stripped text
plus word n-grams of orders 1..2 on whitespace tokens; per order,
clipped-match precision/recall accumulated corpus-level; the score is
100 times the mean F_beta (beta=2) over the orders, skipping orders
with zero reference n-grams.
"""

from __future__ import annotations

import re
import warnings
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import AlignmentError, ArgumentError

Analysis = Sequence[str]


# ---------------------------------------------------------------------------
# EMMA


@dataclass(frozen=True)
class EmmaScores:
    precision: float
    recall: float

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class EmmaReport:
    """Scores for "All" plus any per-language groups, with the optimal
    type matching found for the overall evaluation."""

    groups: dict[str, EmmaScores]
    matching: tuple[tuple[str, str], ...]

    def __getitem__(self, group: str) -> EmmaScores:
        return self.groups[group]


def _emma_group(
    pred: Sequence[Analysis], gold: Sequence[Analysis]
) -> tuple[EmmaScores, tuple[tuple[str, str], ...]]:
    weights: dict[tuple[str, str], int] = {}
    pred_tokens = 0
    gold_tokens = 0
    for p_analysis, g_analysis in zip(pred, gold):
        pred_tokens += len(p_analysis)
        gold_tokens += len(g_analysis)
        p_counts = Counter(p_analysis)
        g_counts = Counter(g_analysis)
        for p_type, p_mult in p_counts.items():
            for g_type, g_mult in g_counts.items():
                key = (p_type, g_type)
                weights[key] = weights.get(key, 0) + min(p_mult, g_mult)

    p_types = sorted({p for p, _ in weights})
    g_types = sorted({g for _, g in weights})
    if not p_types or not g_types:
        return EmmaScores(0.0, 0.0), ()
    p_index = {t: i for i, t in enumerate(p_types)}
    g_index = {t: i for i, t in enumerate(g_types)}
    matrix = np.zeros((len(p_types), len(g_types)))
    for (p_type, g_type), w in weights.items():
        matrix[p_index[p_type], g_index[g_type]] = w
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    matched = float(matrix[rows, cols].sum())
    matching = tuple(
        sorted(
            (p_types[r], g_types[c])
            for r, c in zip(rows, cols)
            if matrix[r, c] > 0
        )
    )
    return (
        EmmaScores(
            precision=matched / pred_tokens if pred_tokens else 0.0,
            recall=matched / gold_tokens if gold_tokens else 0.0,
        ),
        matching,
    )


def emma(
    pred: Sequence[Analysis],
    gold: Sequence[Analysis],
    langs: Sequence[str | None] | None = None,
) -> EmmaReport:
    """Corpus-level EMMA over word-aligned predicted and gold analyses.

    `langs` optionally tags each word with a language group; scores are
    then additionally reported per group (matching restricted to that
    group's words). Invariant under permutation of the word list.
    """
    if len(pred) != len(gold):
        raise AlignmentError(
            f"emma: {len(pred)} predicted vs {len(gold)} gold analyses"
        )
    if langs is not None and len(langs) != len(pred):
        raise AlignmentError("emma: language tags misaligned with analyses")
    for a in list(pred) + list(gold):
        if not a or any(not m for m in a):
            raise ArgumentError("emma: every analysis must be a nonempty morph list")

    all_scores, matching = _emma_group(pred, gold)
    groups = {"All": all_scores}
    if langs is not None:
        for lang in sorted({l for l in langs if l is not None}):
            idx = [i for i, l in enumerate(langs) if l == lang]
            groups[lang], _ = _emma_group(
                [pred[i] for i in idx], [gold[i] for i in idx]
            )
    return EmmaReport(groups=groups, matching=matching)


# ---------------------------------------------------------------------------
# chrF2++

CHRF_CHAR_ORDER = 6
CHRF_WORD_ORDER = 2
CHRF_BETA = 2.0

_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class OrderStats:
    kind: str  # "char" | "word"
    n: int
    hyp_total: int
    ref_total: int
    matched: int

    @property
    def precision(self) -> float:
        return self.matched / self.hyp_total if self.hyp_total else 0.0

    @property
    def recall(self) -> float:
        return self.matched / self.ref_total if self.ref_total else 0.0

    def f_beta(self, beta: float) -> float:
        p, r = self.precision, self.recall
        denom = beta * beta * p + r
        return (1 + beta * beta) * p * r / denom if denom > 0 else 0.0


@dataclass(frozen=True)
class ChrfReport:
    score: float
    char_order: int = CHRF_CHAR_ORDER
    word_order: int = CHRF_WORD_ORDER
    beta: float = CHRF_BETA
    orders: tuple[OrderStats, ...] = ()


def _char_ngrams(sentence: str, n: int) -> Counter:
    stripped = _WS_RE.sub("", sentence)
    return Counter(stripped[i : i + n] for i in range(len(stripped) - n + 1))


def _word_ngrams(sentence: str, n: int) -> Counter:
    words = sentence.split()
    return Counter(
        tuple(words[i : i + n]) for i in range(len(words) - n + 1)
    )


def _clipped_matches(hyp: Counter, ref: Counter) -> int:
    return sum(min(cnt, ref[gram]) for gram, cnt in hyp.items() if gram in ref)


def _chrf_stats(
    hypotheses: Sequence[str],
    references: Sequence[str],
    char_n: int,
    word_n: int,
) -> list[OrderStats]:
    keys = [("char", n) for n in range(1, char_n + 1)] + [
        ("word", n) for n in range(1, word_n + 1)
    ]
    totals = {k: [0, 0, 0] for k in keys}  # hyp, ref, matched
    for hyp, ref in zip(hypotheses, references):
        if not ref.strip():
            warnings.warn("chrf_pp: empty reference sentence, skip convention applies")
        for kind, n in keys:
            extract = _char_ngrams if kind == "char" else _word_ngrams
            h = extract(hyp, n)
            r = extract(ref, n)
            acc = totals[(kind, n)]
            acc[0] += sum(h.values())
            acc[1] += sum(r.values())
            acc[2] += _clipped_matches(h, r)
    return [
        OrderStats(kind=k, n=n, hyp_total=t[0], ref_total=t[1], matched=t[2])
        for (k, n), t in totals.items()
    ]


def _score_from_stats(orders: Iterable[OrderStats], beta: float) -> float:
    kept = [o for o in orders if o.ref_total > 0]
    if not kept:
        return 0.0
    return 100.0 * sum(o.f_beta(beta) for o in kept) / len(kept)


def chrf_pp(
    hypotheses: Sequence[str],
    references: Sequence[str],
    beta: float = CHRF_BETA,
    char_n: int = CHRF_CHAR_ORDER,
    word_n: int = CHRF_WORD_ORDER,
) -> ChrfReport:
    """Corpus-level chrF2++ with per-order component statistics."""
    if len(hypotheses) != len(references):
        raise AlignmentError(
            f"chrf_pp: {len(hypotheses)} hypotheses vs {len(references)} references"
        )
    if not references:
        raise ArgumentError("chrf_pp: empty corpus")
    orders = _chrf_stats(hypotheses, references, char_n, word_n)
    return ChrfReport(
        score=_score_from_stats(orders, beta),
        char_order=char_n,
        word_order=word_n,
        beta=beta,
        orders=tuple(orders),
    )


def sentence_chrf_pp(
    hypothesis: str,
    reference: str,
    beta: float = CHRF_BETA,
    char_n: int = CHRF_CHAR_ORDER,
    word_n: int = CHRF_WORD_ORDER,
) -> float:
    """Sentence-level chrF2++ (same formula on single-sentence statistics)."""
    orders = _chrf_stats([hypothesis], [reference], char_n, word_n)
    return _score_from_stats(orders, beta)


# ---------------------------------------------------------------------------
# OOV rate


def oov_rate(
    train_vocab: Iterable[str], eval_segmented: Sequence[Sequence[str]]
) -> float:
    """Percentage of evaluation morph tokens absent from the training
    vocabulary; both sides must come from the same pipeline."""
    vocab = set(train_vocab)
    total = 0
    oov = 0
    for sentence in eval_segmented:
        for morph in sentence:
            total += 1
            if morph not in vocab:
                oov += 1
    if total == 0:
        raise ArgumentError("oov_rate: empty evaluation corpus")
    return 100.0 * oov / total


# ---------------------------------------------------------------------------
# Over/under-segmentation diagnostics


@dataclass(frozen=True)
class DiagnosticCounts:
    under: int = 0
    over: int = 0
    correct_seg: int = 0
    correct_unseg: int = 0

    @property
    def correct(self) -> int:
        return self.correct_seg + self.correct_unseg

    @property
    def total(self) -> int:
        return self.under + self.over + self.correct


@dataclass(frozen=True)
class SegDiagnostics:
    groups: dict[str, DiagnosticCounts]

    def __getitem__(self, group: str) -> DiagnosticCounts:
        return self.groups[group]


def seg_diagnostics(
    pred: Sequence[Analysis],
    gold: Sequence[Analysis],
    langs: Sequence[str | None] | None = None,
) -> SegDiagnostics:
    """Per word: over if predicted morph count exceeds gold, under if it
    falls short, else correct (split by whether gold needed segmentation).
    The three classes partition every group."""
    if len(pred) != len(gold):
        raise AlignmentError(
            f"seg_diagnostics: {len(pred)} predicted vs {len(gold)} gold analyses"
        )
    if langs is not None and len(langs) != len(pred):
        raise AlignmentError("seg_diagnostics: language tags misaligned")

    def count(indices: Iterable[int]) -> DiagnosticCounts:
        under = over = correct_seg = correct_unseg = 0
        for i in indices:
            np_, ng = len(pred[i]), len(gold[i])
            if np_ > ng:
                over += 1
            elif np_ < ng:
                under += 1
            elif ng > 1:
                correct_seg += 1
            else:
                correct_unseg += 1
        return DiagnosticCounts(under, over, correct_seg, correct_unseg)

    groups = {"All": count(range(len(pred)))}
    if langs is not None:
        for lang in sorted({l for l in langs if l is not None}):
            groups[lang] = count(i for i, l in enumerate(langs) if l == lang)
    return SegDiagnostics(groups=groups)
