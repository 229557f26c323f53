"""Experiment harness: segmenter comparison, per-category MT scoring,
learning curves over data fractions, binned reports and system
selection.

MT quality numbers require externally supplied hypothesis files (this
toolkit does not train translation models); everything else is a
segmentation-side proxy the harness can always compute. Reports land in
the config's report directory as TSV tables plus a machine-readable
JSON summary; runs are deterministic given (config, seed, inputs).
"""

from __future__ import annotations

import json
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import yaml

from .corpus import (
    Script,
    Sentence,
    SentenceCategory,
    categorize,
    english_percentage,
    morphological_richness,
    read_corpus,
    subsample,
    word_language,
    load_gold,
)
from .errors import AlignmentError, ArgumentError, ConfigError
from .metrics import (
    ChrfReport,
    EmmaReport,
    chrf_pp,
    emma,
    oov_rate,
    seg_diagnostics,
    sentence_chrf_pp,
)
from .segmenters import (
    IdentitySegmenter,
    Segmenter,
    build_segmenter,
    flatten,
    parse_manifest,
    segment_sentence,
    train_bpe,
    train_mdl,
)
from .segmenters.mdl import MdlParams

CATEGORY_LABELS = {
    SentenceCategory.MONO_EGY: "MonoEGY",
    SentenceCategory.MONO_EN: "MonoEN",
    SentenceCategory.CS: "CS",
    SentenceCategory.MCS: "MCS",
    SentenceCategory.UNDETERMINED: "Undetermined",
}

#: Category columns reported in tables; CS includes MCS sentences.
REPORT_CATEGORIES = ("All", "MonoEGY", "MonoEN", "CS", "MCS")

DEFAULT_RICHNESS_EDGES = tuple(round(1.0 + 0.1 * i, 1) for i in range(11))
DEFAULT_ENGLISH_PCT_EDGES = tuple(float(x) for x in range(0, 101, 10))


def fmt_ratio(x: float) -> str:
    return f"{x:.3f}"


def fmt_score(x: float | None) -> str:
    return "-" if x is None else f"{x:.1f}"


# ---------------------------------------------------------------------------
# Config


@dataclass(frozen=True)
class ExperimentConfig:
    base_dir: str
    train_src: str | None = None
    train_tgt: str | None = None
    dev_src: str | None = None
    dev_tgt: str | None = None
    test_src: str | None = None
    gold: str | None = None
    pipelines: dict[str, str] = field(default_factory=dict)
    fractions: tuple[float, ...] = (0.25, 0.5, 1.0)
    seed: int = 17
    mcs_mode: str = "mixed-script"
    richness_edges: tuple[float, ...] = DEFAULT_RICHNESS_EDGES
    english_pct_edges: tuple[float, ...] = DEFAULT_ENGLISH_PCT_EDGES
    # pipeline name -> {fraction -> hypothesis file}
    hypotheses: dict[str, dict[float, str]] = field(default_factory=dict)
    report_dir: str = "reports"

    def __post_init__(self) -> None:
        if not self.fractions:
            raise ConfigError("fractions must be nonempty")
        if any(not 0.0 < f <= 1.0 for f in self.fractions):
            raise ConfigError("fractions must lie in (0, 1]")
        if tuple(sorted(self.fractions)) != self.fractions:
            raise ConfigError("fractions must be sorted ascending")

    def path(self, rel: str) -> str:
        return os.path.join(self.base_dir, rel)


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config must be a mapping")
    corpus = raw.get("corpus", {})
    bins = raw.get("bins", {})
    hyps_raw = raw.get("hypotheses", {})
    hypotheses: dict[str, dict[float, str]] = {}
    for name, by_fraction in hyps_raw.items():
        if isinstance(by_fraction, str):
            by_fraction = {"1.0": by_fraction}
        hypotheses[name] = {float(k): v for k, v in by_fraction.items()}
    try:
        return ExperimentConfig(
            base_dir=os.path.dirname(os.path.abspath(path)),
            train_src=corpus.get("train_src"),
            train_tgt=corpus.get("train_tgt"),
            dev_src=corpus.get("dev_src"),
            dev_tgt=corpus.get("dev_tgt"),
            test_src=corpus.get("test_src"),
            gold=corpus.get("gold"),
            pipelines=dict(raw.get("pipelines", {})),
            fractions=tuple(raw.get("fractions", (0.25, 0.5, 1.0))),
            seed=int(raw.get("seed", 17)),
            mcs_mode=raw.get("mcs_mode", "mixed-script"),
            richness_edges=tuple(bins.get("richness", DEFAULT_RICHNESS_EDGES)),
            english_pct_edges=tuple(
                bins.get("english_pct", DEFAULT_ENGLISH_PCT_EDGES)
            ),
            hypotheses=hypotheses,
            report_dir=raw.get("report_dir", "reports"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Training context shared by harness runs


class TrainingContext:
    """Binds manifest `train=` declarations to a (possibly subsampled)
    parallel corpus; caches models so shared stages train once."""

    def __init__(
        self,
        src: Sequence[Sentence],
        tgt: Sequence[Sentence],
        default_seed: int = 17,
    ):
        self.src = src
        self.tgt = tgt
        self.default_seed = default_seed
        self._cache: dict[tuple, object] = {}

    def _word_freqs(self, selection: str) -> Counter:
        freqs: Counter = Counter()
        if selection in ("src", "joint", "src-arabic"):
            for sent in self.src:
                for tok in sent.tokens:
                    if selection == "src-arabic" and tok.script is not Script.ARABIC:
                        continue
                    freqs[tok.surface] += 1
        if selection in ("tgt", "joint"):
            for sent in self.tgt:
                for tok in sent.tokens:
                    freqs[tok.surface] += 1
        if not freqs:
            raise ConfigError(f"no training words for selection {selection!r}")
        return freqs

    def __call__(self, kind: str, attrs: Mapping[str, str]):
        selection = attrs.get("train", "joint")
        if selection not in ("joint", "src", "tgt", "src-arabic"):
            raise ConfigError(f"unknown training selection {selection!r}")
        key = (kind, tuple(sorted(attrs.items())))
        if key in self._cache:
            return self._cache[key]
        freqs = self._word_freqs(selection)
        if kind == "bpe":
            model = train_bpe(
                freqs,
                vocab_size=int(attrs.get("vocab", 8000)),
                end_marker=attrs.get("marker", "_"),
            )
        elif kind == "mdl":
            params = MdlParams(
                finish_threshold=float(attrs.get("F", 0.003)),
                dampening=attrs.get("d", "log"),
                algorithm=attrs.get("a", "recursive"),
                seed=int(attrs.get("seed", self.default_seed)),
                lexicon_cap=int(attrs["cap"]) if "cap" in attrs else None,
            )
            model = train_mdl(freqs, params)
        else:
            raise ConfigError(f"cannot train segmenter kind {kind!r}")
        self._cache[key] = model
        return model


def _build_pipelines(
    config: ExperimentConfig, context: TrainingContext | None, names: Sequence[str]
) -> dict[str, Segmenter]:
    out: dict[str, Segmenter] = {}
    for name in names:
        manifest = parse_manifest(config.path(config.pipelines[name]))
        out[name] = build_segmenter(manifest, trainer=context)
    return out


def collect_bpe_models(seg: Segmenter) -> list:
    """All BpeModel instances reachable inside a (possibly composed or
    routed) segmenter."""
    from .segmenters import BpeModel, PipelineSegmenter, ScriptRouter

    if isinstance(seg, BpeModel):
        return [seg]
    if isinstance(seg, PipelineSegmenter):
        return [m for stage in seg.stages for m in collect_bpe_models(stage)]
    if isinstance(seg, ScriptRouter):
        found = [m for s in seg.routes.values() for m in collect_bpe_models(s)]
        found.extend(collect_bpe_models(seg.default))
        return found
    return []


def training_vocabulary(
    seg: Segmenter, train_sentences: Sequence[Sentence]
) -> set[str]:
    """The subword vocabulary an MT system built on this pipeline would
    carry: morphs observed when segmenting the training corpus, plus the
    full piece inventory of any BPE stage (a dev-side word can stop at
    an intermediate merge state that no training word surfaces, yet that
    piece is still in the system's vocabulary)."""
    from .segmenters.bpe import bpe_pieces

    vocab: set[str] = set()
    for sent in train_sentences:
        vocab.update(flatten(segment_sentence(seg, sent)))
    alphabet = {
        ch for sent in train_sentences for tok in sent.tokens for ch in tok.surface
    }
    for model in collect_bpe_models(seg):
        vocab.update(bpe_pieces(model, alphabet))
    return vocab


# ---------------------------------------------------------------------------
# Segmentation-side evaluation (EMMA tables)


def run_segmentation_eval(
    config: ExperimentConfig,
) -> dict[str, tuple[EmmaReport, object]]:
    """EMMA (and diagnostics) per configured pipeline on the gold file,
    always including the identity baseline row "raw"."""
    if config.gold is None:
        raise ConfigError("segmentation evaluation needs corpus.gold")
    gold_sentences = load_gold(config.path(config.gold))
    entries = [e for _, es in gold_sentences for e in es]
    if not entries:
        raise ConfigError("gold file contains no entries")
    words = [e.word for e in entries]
    gold_analyses = [list(e.morphs) for e in entries]
    langs = [word_language(w) for w in words]

    context = None
    if config.train_src and config.train_tgt:
        context = TrainingContext(
            read_corpus(config.path(config.train_src)),
            read_corpus(config.path(config.train_tgt)),
            default_seed=config.seed,
        )

    segmenters: dict[str, Segmenter] = {"raw": IdentitySegmenter()}
    segmenters.update(_build_pipelines(config, context, sorted(config.pipelines)))

    results: dict[str, tuple[EmmaReport, object]] = {}
    for name in ["raw"] + sorted(n for n in segmenters if n != "raw"):
        seg = segmenters[name]
        pred = [seg.segment(w.surface) for w in words]
        results[name] = (
            emma(pred, gold_analyses, langs),
            seg_diagnostics(pred, gold_analyses, langs),
        )
    return results


# ---------------------------------------------------------------------------
# Category-wise MT scoring


def read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def categories_for(
    sentences: Sequence[Sentence], mcs_mode: str = "mixed-script"
) -> list[SentenceCategory]:
    return [categorize(s, mcs_mode=mcs_mode) for s in sentences]


def _category_indices(
    categories: Sequence[SentenceCategory],
) -> dict[str, list[int]]:
    idx: dict[str, list[int]] = {name: [] for name in REPORT_CATEGORIES}
    idx["Undetermined"] = []
    for i, cat in enumerate(categories):
        idx["All"].append(i)
        if cat is SentenceCategory.MONO_EGY:
            idx["MonoEGY"].append(i)
        elif cat is SentenceCategory.MONO_EN:
            idx["MonoEN"].append(i)
        elif cat is SentenceCategory.CS:
            idx["CS"].append(i)
        elif cat is SentenceCategory.MCS:
            idx["CS"].append(i)
            idx["MCS"].append(i)
        else:
            idx["Undetermined"].append(i)
    return idx


@dataclass(frozen=True)
class CategoryScores:
    """chrF2++ per sentence category; rank filled when systems are
    compared (equal scores share a rank)."""

    scores: dict[str, float | None]
    counts: dict[str, int]
    ranks: dict[str, int] = field(default_factory=dict)


def eval_by_category(
    hyp_lines: Sequence[str],
    ref_lines: Sequence[str],
    categories: Sequence[SentenceCategory],
) -> CategoryScores:
    n = len(categories)
    for label, lines in (("hypothesis", hyp_lines), ("reference", ref_lines)):
        if len(lines) != n:
            bad = min(len(lines), n) + 1
            raise AlignmentError(
                f"{label} file has {len(lines)} lines, source has {n}; "
                f"first offending line: {bad}"
            )
    indices = _category_indices(categories)
    scores: dict[str, float | None] = {}
    counts: dict[str, int] = {}
    for name, idx in indices.items():
        counts[name] = len(idx)
        if not idx:
            scores[name] = None
            continue
        report = chrf_pp([hyp_lines[i] for i in idx], [ref_lines[i] for i in idx])
        scores[name] = report.score
    return CategoryScores(scores=scores, counts=counts)


def compare_systems(
    hyps: Mapping[str, Sequence[str]],
    ref_lines: Sequence[str],
    categories: Sequence[SentenceCategory],
) -> dict[str, CategoryScores]:
    """Score several systems and fill competition ranks per category."""
    base = {
        name: eval_by_category(lines, ref_lines, categories)
        for name, lines in hyps.items()
    }
    out: dict[str, CategoryScores] = {}
    for name, cs in base.items():
        ranks: dict[str, int] = {}
        for cat, score in cs.scores.items():
            if score is None:
                continue
            better = sum(
                1
                for other in base.values()
                if other.scores.get(cat) is not None and other.scores[cat] > score
            )
            ranks[cat] = 1 + better
        out[name] = CategoryScores(scores=cs.scores, counts=cs.counts, ranks=ranks)
    return out


# ---------------------------------------------------------------------------
# Learning curve


@dataclass(frozen=True)
class LearningCurveCell:
    fraction: float
    pipeline: str
    oov_pct: float
    mean_richness: float
    mean_morphs_per_sentence: float
    max_morphs_per_sentence: int
    chrf: CategoryScores | None
    note: str = ""


def learning_curve(
    config: ExperimentConfig, pipeline_names: Sequence[str] | None = None
) -> list[LearningCurveCell]:
    """Retrain pipelines on each training fraction and emit
    segmentation-side measurements on the dev set, plus chrF2++ per
    category when a hypothesis file for that (pipeline, fraction) is
    configured."""
    if not (config.train_src and config.train_tgt and config.dev_src):
        raise ConfigError("learning_curve needs train_src, train_tgt and dev_src")
    names = sorted(pipeline_names if pipeline_names is not None else config.pipelines)
    train_src = read_corpus(config.path(config.train_src))
    train_tgt = read_corpus(config.path(config.train_tgt))
    if len(train_src) != len(train_tgt):
        raise AlignmentError(
            f"train sides differ: {len(train_src)} vs {len(train_tgt)} sentences"
        )
    dev_src = read_corpus(config.path(config.dev_src))
    dev_tgt = read_corpus(config.path(config.dev_tgt)) if config.dev_tgt else None
    dev_ref = (
        read_lines(config.path(config.dev_tgt)) if config.dev_tgt else None
    )
    categories = categories_for(dev_src, config.mcs_mode)

    cells: list[LearningCurveCell] = []
    pairs = list(zip(train_src, train_tgt))
    for fraction in config.fractions:
        sample = subsample(pairs, fraction, config.seed)
        sub_src = [s for s, _ in sample]
        sub_tgt = [t for _, t in sample]
        context = TrainingContext(sub_src, sub_tgt, default_seed=config.seed)
        segs = _build_pipelines(config, context, names)
        for name in names:
            seg = segs[name]
            vocab = training_vocabulary(seg, sub_src + sub_tgt)
            dev_sents = dev_src + (dev_tgt or [])
            dev_morphs = [flatten(segment_sentence(seg, s)) for s in dev_sents]
            oov = oov_rate(vocab, dev_morphs)
            rich = [
                morphological_richness(s, flatten(segment_sentence(seg, s)))
                for s in dev_src
            ]
            src_lens = [
                len(flatten(segment_sentence(seg, s))) for s in dev_src
            ]
            chrf_scores = None
            note = ""
            hyp_rel = config.hypotheses.get(name, {}).get(fraction)
            if hyp_rel is not None and dev_ref is not None:
                hyp_lines = read_lines(config.path(hyp_rel))
                chrf_scores = eval_by_category(hyp_lines, dev_ref, categories)
            else:
                note = "proxies only (no hypothesis file)"
            cells.append(
                LearningCurveCell(
                    fraction=fraction,
                    pipeline=name,
                    oov_pct=oov,
                    mean_richness=sum(rich) / len(rich),
                    mean_morphs_per_sentence=sum(src_lens) / len(src_lens),
                    max_morphs_per_sentence=max(src_lens),
                    chrf=chrf_scores,
                    note=note,
                )
            )
    return cells


# ---------------------------------------------------------------------------
# System selection


@dataclass(frozen=True)
class SelectionResult:
    composite_lines: list[str]
    report: ChrfReport
    by_category: CategoryScores


def system_selection(
    routing: Mapping[str, Sequence[str]],
    ref_lines: Sequence[str],
    categories: Sequence[SentenceCategory],
) -> SelectionResult:
    """Assemble a composite hypothesis per-sentence by category routing
    (`routing` maps category label -> that system's hypothesis lines; a
    "*" entry is the fallback), then score it."""
    n = len(categories)
    for name, lines in routing.items():
        if len(lines) != n:
            raise AlignmentError(
                f"routed hypothesis for {name!r} has {len(lines)} lines, "
                f"expected {n}"
            )
    if len(ref_lines) != n:
        raise AlignmentError(
            f"reference has {len(ref_lines)} lines, expected {n}"
        )
    composite: list[str] = []
    for i, cat in enumerate(categories):
        label = CATEGORY_LABELS[cat]
        lines = routing.get(label, routing.get("*"))
        if lines is None:
            raise ConfigError(
                f"system_selection: category {label} occurs but is not routed"
            )
        composite.append(lines[i])
    return SelectionResult(
        composite_lines=composite,
        report=chrf_pp(composite, list(ref_lines)),
        by_category=eval_by_category(composite, ref_lines, categories),
    )


# ---------------------------------------------------------------------------
# Binned reports


@dataclass(frozen=True)
class BinRow:
    lo: float
    hi: float  # inf for the overflow row
    count: int
    mean_score: float | None


def binned_report(
    features: Sequence[float | None],
    scores: Sequence[float],
    edges: Sequence[float],
) -> list[BinRow]:
    """Mean score and population per half-open feature bin [e_i, e_i+1);
    values at or above the last edge land in an overflow row, values
    below the first edge in an underflow row (emitted only if occupied).
    Features of None (undefined for that sentence) are skipped."""
    if len(features) != len(scores):
        raise AlignmentError("binned_report: features and scores misaligned")
    if len(edges) < 2 or any(a >= b for a, b in zip(edges, edges[1:])):
        raise ArgumentError("bin edges must be strictly ascending, at least two")
    sums = [0.0] * (len(edges) - 1)
    counts = [0] * (len(edges) - 1)
    under_sum, under_n = 0.0, 0
    over_sum, over_n = 0.0, 0
    for value, score in zip(features, scores):
        if value is None:
            continue
        if value < edges[0]:
            under_sum += score
            under_n += 1
        elif value >= edges[-1]:
            over_sum += score
            over_n += 1
        else:
            for b in range(len(edges) - 1):
                if edges[b] <= value < edges[b + 1]:
                    sums[b] += score
                    counts[b] += 1
                    break
    rows: list[BinRow] = []
    if under_n:
        rows.append(BinRow(float("-inf"), edges[0], under_n, under_sum / under_n))
    for b in range(len(edges) - 1):
        mean = sums[b] / counts[b] if counts[b] else None
        rows.append(BinRow(edges[b], edges[b + 1], counts[b], mean))
    if over_n:
        rows.append(BinRow(edges[-1], float("inf"), over_n, over_sum / over_n))
    return rows


# ---------------------------------------------------------------------------
# Full harness run with report files


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def seg_eval_table(results: Mapping[str, tuple[EmmaReport, object]]) -> str:
    lines = ["pipeline\tEGY\tEN\tAll"]
    for name, (report, _) in results.items():
        cells = [name]
        for group in ("EGY", "EN", "All"):
            scores = report.groups.get(group)
            cells.append(fmt_ratio(scores.f1) if scores else "-")
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def diagnostics_table(results: Mapping[str, tuple[EmmaReport, object]]) -> str:
    header = ["pipeline"]
    for group in ("EGY", "EN"):
        header += [
            f"{group}_{col}"
            for col in ("under", "over", "correct", "seg", "unseg")
        ]
    lines = ["\t".join(header)]
    for name, (_, diag) in results.items():
        cells = [name]
        for group in ("EGY", "EN"):
            counts = diag.groups.get(group)
            if counts is None:
                cells += ["-"] * 5
            else:
                cells += [
                    str(counts.under),
                    str(counts.over),
                    str(counts.correct),
                    str(counts.correct_seg),
                    str(counts.correct_unseg),
                ]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def category_table(systems: Mapping[str, CategoryScores]) -> str:
    lines = [
        "# chrF2++ per sentence category; equal scores share a rank;"
        " significance testing unavailable in this toolkit",
        "system\t" + "\t".join(REPORT_CATEGORIES),
    ]
    for name in sorted(systems):
        cs = systems[name]
        cells = [name]
        for cat in REPORT_CATEGORIES:
            score = cs.scores.get(cat)
            if score is None:
                cells.append("-")
            elif cs.ranks.get(cat):
                cells.append(f"{fmt_score(score)} ({cs.ranks[cat]})")
            else:
                cells.append(fmt_score(score))
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def learning_curve_table(cells: Sequence[LearningCurveCell]) -> str:
    lines = [
        "fraction\tpipeline\toov_pct\tmean_richness\tmean_morphs"
        "\tmax_morphs\tchrf_All\tchrf_MonoEGY\tchrf_CS\tchrf_MCS\tnote"
    ]
    for cell in cells:
        chrf_cols = ["-"] * 4
        if cell.chrf is not None:
            chrf_cols = [
                fmt_score(cell.chrf.scores.get(cat))
                for cat in ("All", "MonoEGY", "CS", "MCS")
            ]
        lines.append(
            "\t".join(
                [
                    f"{cell.fraction:g}",
                    cell.pipeline,
                    fmt_ratio(cell.oov_pct),
                    fmt_ratio(cell.mean_richness),
                    fmt_ratio(cell.mean_morphs_per_sentence),
                    str(cell.max_morphs_per_sentence),
                ]
                + chrf_cols
                + [cell.note]
            )
        )
    return "\n".join(lines) + "\n"


def binned_table(rows: Sequence[BinRow]) -> str:
    lines = [
        "# mean of per-sentence chrF2++ scores (not corpus-aggregated)",
        "bin_lo\tbin_hi\tcount\tmean_chrf",
    ]
    for row in rows:
        lines.append(
            "\t".join(
                [
                    f"{row.lo:g}",
                    f"{row.hi:g}",
                    str(row.count),
                    fmt_score(row.mean_score),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def run_analysis(config: ExperimentConfig, figures: bool = True) -> list[str]:
    """Run every analysis the config makes possible; returns the list of
    files written (TSV reports, JSON summary and, unless disabled, PNG
    figures)."""
    report_dir = config.path(config.report_dir)
    os.makedirs(report_dir, exist_ok=True)
    written: list[str] = []
    summary: dict = {"seed": config.seed, "fractions": list(config.fractions)}

    def emit(name: str, text: str) -> None:
        path = os.path.join(report_dir, name)
        _write(path, text)
        written.append(path)

    seg_results = None
    if config.gold:
        seg_results = run_segmentation_eval(config)
        emit("seg_eval.tsv", seg_eval_table(seg_results))
        emit("seg_diagnostics.tsv", diagnostics_table(seg_results))
        summary["emma"] = {
            name: {
                group: {
                    "precision": s.precision,
                    "recall": s.recall,
                    "f1": s.f1,
                }
                for group, s in report.groups.items()
            }
            for name, (report, _) in seg_results.items()
        }

    curve: list[LearningCurveCell] = []
    if config.train_src and config.train_tgt and config.dev_src:
        curve = learning_curve(config)
        emit("learning_curve.tsv", learning_curve_table(curve))
        summary["learning_curve"] = [
            {
                "fraction": c.fraction,
                "pipeline": c.pipeline,
                "oov_pct": c.oov_pct,
                "mean_richness": c.mean_richness,
                "chrf_all": None if c.chrf is None else c.chrf.scores.get("All"),
                "note": c.note,
            }
            for c in curve
        ]

    # MT-score analyses need hypothesis files at fraction 1.0.
    if config.dev_src and config.dev_tgt:
        dev_src = read_corpus(config.path(config.dev_src))
        ref_lines = read_lines(config.path(config.dev_tgt))
        categories = categories_for(dev_src, config.mcs_mode)
        full_hyps = {
            name: read_lines(config.path(by_frac[1.0]))
            for name, by_frac in sorted(config.hypotheses.items())
            if 1.0 in by_frac
        }
        if full_hyps:
            systems = compare_systems(full_hyps, ref_lines, categories)
            emit("category_scores.tsv", category_table(systems))
            summary["category_scores"] = {
                name: {"scores": cs.scores, "ranks": cs.ranks, "counts": cs.counts}
                for name, cs in systems.items()
            }
            context = None
            if config.train_src and config.train_tgt:
                context = TrainingContext(
                    read_corpus(config.path(config.train_src)),
                    read_corpus(config.path(config.train_tgt)),
                    default_seed=config.seed,
                )
            english = [english_percentage(s) for s in dev_src]
            english_pct = [None if e is None else 100.0 * e for e in english]
            binned_by_system: dict[str, dict[str, list[BinRow]]] = {}
            for name, hyp_lines in full_hyps.items():
                sent_scores = [
                    sentence_chrf_pp(h, r) for h, r in zip(hyp_lines, ref_lines)
                ]
                per_system: dict[str, list[BinRow]] = {}
                if name in config.pipelines and context is not None:
                    seg = _build_pipelines(config, context, [name])[name]
                    richness_values = [
                        morphological_richness(s, flatten(segment_sentence(seg, s)))
                        for s in dev_src
                    ]
                    per_system["richness"] = binned_report(
                        richness_values, sent_scores, config.richness_edges
                    )
                per_system["english_pct"] = binned_report(
                    english_pct, sent_scores, config.english_pct_edges
                )
                binned_by_system[name] = per_system
                for feature, rows in per_system.items():
                    emit(f"binned_{feature}_{name}.tsv", binned_table(rows))
            def _edge(value: float):
                # +-inf bin edges are not valid strict JSON
                return value if math.isfinite(value) else repr(value)

            summary["binned"] = {
                name: {
                    feature: [
                        {
                            "lo": _edge(r.lo),
                            "hi": _edge(r.hi),
                            "count": r.count,
                            "mean": r.mean_score,
                        }
                        for r in rows
                    ]
                    for feature, rows in per.items()
                }
                for name, per in binned_by_system.items()
            }
            if figures:
                from . import plots

                written.extend(
                    plots.render_analysis_figures(
                        report_dir, curve, systems, binned_by_system
                    )
                )

    emit("summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return written
