"""Command-line entry point.

Exit codes: 0 success, 1 validation/format error, 2 argument error,
3 I/O error. Data goes to the output stream (or --out file),
diagnostics to stderr. Every command is a pure file-to-file transform
given its seed; there is no hidden state.

Segmented output formats:

- ``hash``: morphs joined by `#` inside a word, words by spaces
  (display-style, e.g. ``b#SrAHp``);
- ``marker``: flat subword stream where every non-final morph carries a
  trailing ``@@`` (MT-style); `desegment --format marker` restores the
  preprocessed input byte-for-byte.
"""

from __future__ import annotations

import re
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import click

from . import analysis as harness
from .corpus import (
    PreprocessOptions,
    corpus_stats,
    load_gold,
    preprocess,
    read_corpus,
    subsample,
    word_language,
)
from .errors import (
    AlignmentError,
    ArgumentError,
    CsegError,
    ValidationError,
)
from .metrics import chrf_pp, emma, seg_diagnostics
from .segmenters import (
    ArRuleSet,
    EnRuleSet,
    build_segmenter,
    load_model,
    parse_manifest,
    save_model,
    train_bpe,
    train_mdl,
)
from .segmenters.mdl import ALGORITHMS, DAMPENING_MODES, MdlParams

_UNESCAPED_HASH = re.compile(r"(?<!\\)#")

# Hash files carry one escape level of their own: `\\` for a backslash
# and `\#` for a literal hash inside a morph, everything else verbatim.
# This stays byte-identical to plain `#`-joining for backslash-free text
# and survives segmenters that split inside an escape pair (leaving a
# morph that ends with `\` or consists of a bare `#`).


def _hash_escape(morph: str) -> str:
    return morph.replace("\\", "\\\\").replace("#", "\\#")


def _hash_split_word(word: str) -> list[str]:
    morphs: list[str] = []
    cur: list[str] = []
    i = 0
    while i < len(word):
        ch = word[i]
        if ch == "\\" and i + 1 < len(word) and word[i + 1] in "\\#":
            cur.append(word[i + 1])
            i += 2
            continue
        if ch == "#":
            morphs.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    morphs.append("".join(cur))
    return morphs


def render_hash(analyses: list[list[str]]) -> str:
    return " ".join("#".join(_hash_escape(m) for m in a) for a in analyses)


def render_marker(analyses: list[list[str]]) -> str:
    parts: list[str] = []
    for a in analyses:
        parts.extend(m + "@@" for m in a[:-1])
        parts.append(a[-1])
    return " ".join(parts)


def parse_hash(line: str) -> list[list[str]]:
    return [_hash_split_word(word) for word in line.split()]


def desegment_marker(line: str) -> str:
    words: list[str] = []
    pending: list[str] = []
    for tok in line.split():
        if tok.endswith("@@") and len(tok) > 2:
            pending.append(tok[:-2])
        else:
            pending.append(tok)
            words.append("".join(pending))
            pending = []
    if pending:
        words.append("".join(pending))
    return " ".join(words)


def desegment_hash(line: str) -> str:
    return " ".join("".join(morphs) for morphs in parse_hash(line))


def _word_freqs(paths: tuple[str, ...]) -> Counter:
    freqs: Counter = Counter()
    for path in paths:
        for sent in read_corpus(path):
            freqs.update(t.surface for t in sent.tokens)
    return freqs


@click.group()
def cli() -> None:
    """Subword segmentation toolkit for code-switched Arabic-English text."""


@cli.command("preprocess")
@click.option("--in", "in_path", required=True, help="Raw corpus, one sentence per line.")
@click.option("--out", "out_path", required=True)
@click.option("--markup-regex", multiple=True, help="Regex for corpus markup to strip (repeatable).")
@click.option("--normalize-arabic/--no-normalize-arabic", default=True)
@click.option("--remove-urls/--no-remove-urls", default=True)
@click.option("--remove-emoticons/--no-remove-emoticons", default=True)
@click.option("--escape/--no-escape", "escape_reserved", default=True)
def cmd_preprocess(
    in_path: str,
    out_path: str,
    markup_regex: tuple[str, ...],
    normalize_arabic: bool,
    remove_urls: bool,
    remove_emoticons: bool,
    escape_reserved: bool,
) -> None:
    """Normalize a raw corpus into tokenized one-sentence-per-line form."""
    opts = PreprocessOptions(
        markup_patterns=markup_regex,
        remove_urls=remove_urls,
        remove_emoticons=remove_emoticons,
        normalize_arabic=normalize_arabic,
        escape_reserved=escape_reserved,
    )
    kept = 0
    with open(in_path, "rb") as fin, open(out_path, "w", encoding="utf-8") as fout:
        for i, raw in enumerate(fin, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise ValidationError(f"{in_path}:{i}: invalid UTF-8 ({exc})") from exc
            sent = preprocess(line.rstrip("\r\n"), opts, line_no=i)
            if sent is not None:
                fout.write(sent.render() + "\n")
                kept += 1
    click.echo(f"kept {kept} sentences -> {out_path}", err=True)


@cli.command("train")
@click.option(
    "--method", required=True, type=click.Choice(["bpe", "mdl", "ar-rules", "en-rules"])
)
@click.option("--in", "in_paths", multiple=True, help="Training corpus file(s); repeat for joint training.")
@click.option("--out", "out_path", required=True)
@click.option("--vocab", default=8000, show_default=True, help="BPE vocabulary size.")
@click.option("--marker", default="_", show_default=True, help="BPE end-of-word marker.")
@click.option("--F", "finish_threshold", default=0.003, show_default=True, help="MDL convergence threshold.")
@click.option("--d", "dampening", default="log", type=click.Choice(list(DAMPENING_MODES)), show_default=True)
@click.option("--a", "algorithm", default="recursive", type=click.Choice(list(ALGORITHMS)), show_default=True)
@click.option("--cap", default=None, type=int, help="Approximate MDL lexicon size cap.")
@click.option("--seed", default=42, show_default=True)
@click.option("--scheme", default="atb", type=click.Choice(["atb", "d3"]), show_default=True)
@click.option("--min-stem", default=2, show_default=True)
@click.option("--irregulars", default=None, help="TSV of irregular English forms (word<TAB>m1#m2).")
def cmd_train(
    method: str,
    in_paths: tuple[str, ...],
    out_path: str,
    vocab: int,
    marker: str,
    finish_threshold: float,
    dampening: str,
    algorithm: str,
    cap: int | None,
    seed: int,
    scheme: str,
    min_stem: int,
    irregulars: str | None,
) -> None:
    """Train a segmentation model and write it to a model file."""
    if method in ("bpe", "mdl"):
        if not in_paths:
            raise ArgumentError(f"--method {method} requires at least one --in corpus")
        freqs = _word_freqs(in_paths)
        if method == "bpe":
            model = train_bpe(freqs, vocab_size=vocab, end_marker=marker)
        else:
            model = train_mdl(
                freqs,
                MdlParams(
                    finish_threshold=finish_threshold,
                    dampening=dampening,
                    algorithm=algorithm,
                    seed=seed,
                    lexicon_cap=cap,
                ),
            )
    elif method == "ar-rules":
        model = ArRuleSet(scheme=scheme, min_stem_len=min_stem)
    else:
        forms = None
        if irregulars is not None:
            forms = {}
            with open(irregulars, "r", encoding="utf-8") as fh:
                for i, line in enumerate(fh, start=1):
                    line = line.rstrip("\n")
                    if not line or line.startswith("#"):
                        continue
                    cols = line.split("\t")
                    if len(cols) != 2:
                        raise ValidationError(
                            f"{irregulars}:{i}: expected word<TAB>analysis"
                        )
                    forms[cols[0]] = tuple(
                        m.replace("\\#", "#") for m in _UNESCAPED_HASH.split(cols[1])
                    )
        model = EnRuleSet(min_stem_len=min_stem) if forms is None else EnRuleSet(
            irregular_forms=forms, min_stem_len=min_stem
        )
    save_model(model, out_path)
    click.echo(f"wrote {method} model -> {out_path}", err=True)


@cli.command("segment")
@click.option("--model", "model_path", default=None, help="A trained model file.")
@click.option("--pipeline", "pipeline_path", default=None, help="A pipeline manifest.")
@click.option("--in", "in_path", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--format", "fmt", default="hash", type=click.Choice(["hash", "marker"]), show_default=True)
@click.option("--threads", default=1, show_default=True, help="Per-line parallelism (order-preserving).")
def cmd_segment(
    model_path: str | None,
    pipeline_path: str | None,
    in_path: str,
    out_path: str,
    fmt: str,
    threads: int,
) -> None:
    """Segment a preprocessed corpus with a model or pipeline."""
    if (model_path is None) == (pipeline_path is None):
        raise ArgumentError("give exactly one of --model or --pipeline")
    if threads < 1:
        raise ArgumentError("--threads must be at least 1")
    if model_path is not None:
        segmenter = load_model(model_path)
    else:
        segmenter = build_segmenter(parse_manifest(pipeline_path))
    render = render_hash if fmt == "hash" else render_marker

    def one_line(line: str) -> str:
        analyses = [segmenter.segment(tok) for tok in line.split()]
        return render(analyses)

    with open(in_path, "r", encoding="utf-8") as fin:
        lines = [line.rstrip("\n") for line in fin]
    if threads == 1:
        rendered = [one_line(line) for line in lines]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rendered = list(pool.map(one_line, lines))
    with open(out_path, "w", encoding="utf-8") as fout:
        for line in rendered:
            fout.write(line + "\n")


@cli.command("desegment")
@click.option("--in", "in_path", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--format", "fmt", default="marker", type=click.Choice(["hash", "marker"]), show_default=True)
def cmd_desegment(in_path: str, out_path: str, fmt: str) -> None:
    """Undo `segment`: join morphs back into surface words."""
    undo = desegment_marker if fmt == "marker" else desegment_hash
    with open(in_path, "r", encoding="utf-8") as fin, open(
        out_path, "w", encoding="utf-8"
    ) as fout:
        for line in fin:
            fout.write(undo(line.rstrip("\n")) + "\n")


def _load_pred(path: str, gold_sentences) -> tuple[list[list[str]], list[str | None]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh]
    if len(lines) != len(gold_sentences):
        raise AlignmentError(
            f"{path}: {len(lines)} lines vs {len(gold_sentences)} gold sentences"
        )
    pred: list[list[str]] = []
    langs: list[str | None] = []
    for line_no, (line, (sent, entries)) in enumerate(
        zip(lines, gold_sentences), start=1
    ):
        analyses = parse_hash(line)
        if len(analyses) != len(entries):
            raise AlignmentError(
                f"{path}:{line_no}: {len(analyses)} words vs {len(entries)} gold words"
            )
        pred.extend(analyses)
        langs.extend(word_language(e.word) for e in entries)
    return pred, langs


@cli.command("eval-seg")
@click.option("--gold", "gold_path", required=True)
@click.option("--pred", "pred_path", required=True, help="hash-format segmented file, one line per gold sentence.")
@click.option("--by-lang", is_flag=True, help="Also report per-language scores.")
@click.option("--diagnostics", is_flag=True, help="Also report over/under-segmentation counts.")
@click.option("--out", "out_path", default=None)
def cmd_eval_seg(
    gold_path: str,
    pred_path: str,
    by_lang: bool,
    diagnostics: bool,
    out_path: str | None,
) -> None:
    """EMMA evaluation of a segmented file against a gold file."""
    gold_sentences = load_gold(gold_path)
    gold_analyses = [list(e.morphs) for _, es in gold_sentences for e in es]
    pred, langs = _load_pred(pred_path, gold_sentences)
    report = emma(pred, gold_analyses, langs if by_lang else None)
    if by_lang:
        click.echo(
            "note: mixed-script words count toward EGY (matrix language)",
            err=True,
        )
    lines = ["group\tprecision\trecall\tf1"]
    order = ["All"] + sorted(g for g in report.groups if g != "All")
    for group in order:
        s = report.groups[group]
        lines.append(
            f"{group}\t{harness.fmt_ratio(s.precision)}"
            f"\t{harness.fmt_ratio(s.recall)}\t{harness.fmt_ratio(s.f1)}"
        )
    if diagnostics:
        diag = seg_diagnostics(pred, gold_analyses, langs if by_lang else None)
        lines.append("group\tunder\tover\tcorrect\tseg\tunseg")
        for group in order:
            if group not in diag.groups:
                continue
            c = diag.groups[group]
            lines.append(
                f"{group}\t{c.under}\t{c.over}\t{c.correct}"
                f"\t{c.correct_seg}\t{c.correct_unseg}"
            )
    _emit("\n".join(lines) + "\n", out_path)


@cli.command("eval-mt")
@click.option("--hyp", "hyp_path", required=True)
@click.option("--ref", "ref_path", required=True)
@click.option("--by-category", is_flag=True)
@click.option("--src", "src_path", default=None, help="Source file for sentence categorization.")
@click.option("--mcs-mode", default="mixed-script", type=click.Choice(["mixed-script", "clitic-adjacent"]), show_default=True)
@click.option("--out", "out_path", default=None)
def cmd_eval_mt(
    hyp_path: str,
    ref_path: str,
    by_category: bool,
    src_path: str | None,
    mcs_mode: str,
    out_path: str | None,
) -> None:
    """chrF2++ scoring of a hypothesis file against a reference file."""
    hyp = harness.read_lines(hyp_path)
    ref = harness.read_lines(ref_path)
    if len(hyp) != len(ref):
        raise AlignmentError(
            f"hypothesis has {len(hyp)} lines, reference {len(ref)}; "
            f"first offending line: {min(len(hyp), len(ref)) + 1}"
        )
    if not by_category:
        report = chrf_pp(hyp, ref)
        _emit(f"chrF2++\t{harness.fmt_score(report.score)}\n", out_path)
        return
    if src_path is None:
        raise ArgumentError("--by-category requires --src for categorization")
    src = read_corpus(src_path)
    if len(src) != len(ref):
        raise AlignmentError(
            f"source has {len(src)} sentences, reference {len(ref)} lines"
        )
    categories = harness.categories_for(src, mcs_mode)
    scores = harness.eval_by_category(hyp, ref, categories)
    lines = ["category\tchrf\tsentences"]
    for cat in harness.REPORT_CATEGORIES:
        lines.append(
            f"{cat}\t{harness.fmt_score(scores.scores.get(cat))}"
            f"\t{scores.counts.get(cat, 0)}"
        )
    if scores.counts.get("Undetermined"):
        lines.append(
            f"Undetermined\t{harness.fmt_score(scores.scores.get('Undetermined'))}"
            f"\t{scores.counts['Undetermined']}"
        )
    _emit("\n".join(lines) + "\n", out_path)


@cli.command("stats")
@click.option("--gold", "gold_path", required=True)
@click.option("--out", "out_path", default=None)
def cmd_stats(gold_path: str, out_path: str | None) -> None:
    """Gold-corpus statistics per language (words, morphs, segmentation)."""
    entries = [e for _, es in load_gold(gold_path) for e in es]
    if not entries:
        raise ValidationError(f"{gold_path}: no gold entries")
    stats = corpus_stats(entries)
    groups = [g for g in ("EGY", "EN", "All") if g in stats]
    lines = ["metric\t" + "\t".join(groups)]
    rows = [
        ("total_words", lambda s: str(s.total_words)),
        ("segmented_words", lambda s: str(s.segmented_words)),
        ("segmented_pct", lambda s: harness.fmt_ratio(s.segmented_words_pct)),
        ("total_morphs", lambda s: str(s.total_morphs)),
        ("unique_morphs", lambda s: str(s.unique_morphs)),
        ("morphs_per_word", lambda s: harness.fmt_ratio(s.morphs_per_word)),
        ("max_morphs", lambda s: str(s.max_morphs)),
    ]
    for name, fmt in rows:
        lines.append(name + "\t" + "\t".join(fmt(stats[g]) for g in groups))
    _emit("\n".join(lines) + "\n", out_path)


@cli.command("subsample")
@click.option("--in", "in_paths", multiple=True, required=True, help="Aligned input file(s); repeat for parallel sides.")
@click.option("--out", "out_paths", multiple=True, required=True)
@click.option("--fraction", required=True, type=float)
@click.option("--seed", default=17, show_default=True)
def cmd_subsample(
    in_paths: tuple[str, ...],
    out_paths: tuple[str, ...],
    fraction: float,
    seed: int,
) -> None:
    """Deterministic aligned sentence-level subsample of parallel files."""
    if len(in_paths) != len(out_paths):
        raise ArgumentError("--in and --out must be given the same number of times")
    sides = [harness.read_lines(p) for p in in_paths]
    lengths = {len(s) for s in sides}
    if len(lengths) > 1:
        raise AlignmentError(
            f"input files differ in length: {[len(s) for s in sides]}"
        )
    n = lengths.pop()
    indices = subsample(list(range(n)), fraction, seed)
    for side, out in zip(sides, out_paths):
        with open(out, "w", encoding="utf-8") as fh:
            for i in indices:
                fh.write(side[i] + "\n")
    click.echo(f"kept {len(indices)}/{n} sentences", err=True)


@cli.command("analyze")
@click.option("--config", "config_path", required=True)
@click.option("--figures/--no-figures", default=True, show_default=True)
def cmd_analyze(config_path: str, figures: bool) -> None:
    """Run the experiment harness described by a YAML config."""
    config = harness.load_config(config_path)
    written = harness.run_analysis(config, figures=figures)
    for path in written:
        click.echo(path)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        click.echo(text, nl=False)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Abort:
        return 130
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CsegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
