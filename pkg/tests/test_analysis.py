import os

import pytest
import yaml

from cseg import ArgumentError, ConfigError, Sentence, Token, chrf_pp
from cseg.analysis import (
    BinRow,
    ExperimentConfig,
    binned_report,
    categories_for,
    compare_systems,
    eval_by_category,
    learning_curve,
    load_config,
    run_analysis,
    run_segmentation_eval,
    system_selection,
)
from cseg.corpus import SentenceCategory
from cseg.errors import AlignmentError

TRAIN_SRC = [
    "انا بحب الكتب قوي",
    "it depends بصراحة على الموقف",
    "الولد راح المدرسة",
    "we are going للمدرسة بكرة",
    "الكتاب على الطاولة",
    "she is walking home",
    "انا كتبت الدرس",
    "doing homework بالليل",
]
TRAIN_TGT = [
    "i really love books",
    "it honestly depends on the situation",
    "the boy went to school",
    "we are going to school tomorrow",
    "the book is on the table",
    "she is walking home",
    "i wrote the lesson",
    "doing homework at night",
]
DEV_SRC = [
    "انا بحب المدرسة",
    "it depends على الكتاب",
    "she is walking home",
    "الparking كان مليان",
]
DEV_TGT = [
    "i love school",
    "it depends on the book",
    "she is walking home",
    "the parking was full",
]
GOLD = (
    "it\tit\ndepends\tdepend#s\nبصراحة\tب#صراحة\nع\tع\nال\tال\n"
    "situation\tsituation\n\nwent\twent\ncars\tcar#s\n"
)

ATB_MANIFEST = (
    "segmenter ar type=ar-rules scheme=atb\n"
    "segmenter en type=en-rules\n"
    "route arabic ar\n"
    "route latin en\n"
)
BPE_MANIFEST = "segmenter bpe type=bpe train=joint vocab=60\nuse bpe8k\n"


def _sentences(lines):
    return [
        Sentence(id=i, tokens=tuple(Token.from_surface(w) for w in line.split()))
        for i, line in enumerate(lines, start=1)
    ]


@pytest.fixture
def experiment_dir(tmp_path):
    (tmp_path / "train.src").write_text("\n".join(TRAIN_SRC) + "\n", encoding="utf-8")
    (tmp_path / "train.tgt").write_text("\n".join(TRAIN_TGT) + "\n", encoding="utf-8")
    (tmp_path / "dev.src").write_text("\n".join(DEV_SRC) + "\n", encoding="utf-8")
    (tmp_path / "dev.tgt").write_text("\n".join(DEV_TGT) + "\n", encoding="utf-8")
    (tmp_path / "gold.tsv").write_text(GOLD, encoding="utf-8")
    manifests = tmp_path / "manifests"
    manifests.mkdir()
    (manifests / "atb.manifest").write_text(ATB_MANIFEST, encoding="utf-8")
    (manifests / "bpe.manifest").write_text(
        "segmenter bpe8k type=bpe train=joint vocab=60\nuse bpe8k\n",
        encoding="utf-8",
    )
    hyps = tmp_path / "hyps"
    hyps.mkdir()
    (hyps / "sysA.txt").write_text("\n".join(DEV_TGT) + "\n", encoding="utf-8")
    degraded = [line.replace("school", "schoolz") for line in DEV_TGT]
    (hyps / "sysB.txt").write_text("\n".join(degraded) + "\n", encoding="utf-8")
    config = {
        "corpus": {
            "train_src": "train.src",
            "train_tgt": "train.tgt",
            "dev_src": "dev.src",
            "dev_tgt": "dev.tgt",
            "gold": "gold.tsv",
        },
        "pipelines": {
            "atb": "manifests/atb.manifest",
            "bpe": "manifests/bpe.manifest",
        },
        "fractions": [0.5, 1.0],
        "seed": 17,
        "hypotheses": {
            "sysA": {"1.0": "hyps/sysA.txt"},
            "sysB": {"1.0": "hyps/sysB.txt"},
        },
        "report_dir": "reports",
    }
    (tmp_path / "config.yaml").write_text(yaml.safe_dump(config), encoding="utf-8")
    return tmp_path


class TestConfig:
    def test_load(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        assert config.fractions == (0.5, 1.0)
        assert set(config.pipelines) == {"atb", "bpe"}
        assert config.hypotheses["sysA"][1.0] == "hyps/sysA.txt"

    def test_bad_fractions_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(base_dir=".", fractions=(0.5, 0.25))
        with pytest.raises(ConfigError):
            ExperimentConfig(base_dir=".", fractions=(0.0, 1.0))


class TestSegmentationEval:
    def test_raw_row_and_pipeline_rows(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        results = run_segmentation_eval(config)
        assert set(results) == {"raw", "atb", "bpe"}
        raw_emma, raw_diag = results["raw"]
        # identity leaves every word whole: never over-segmented
        assert raw_diag["All"].over == 0
        assert raw_emma["All"].f1 < 1.0
        # the gold file follows the ATB scheme, so the ATB router must
        # beat the identity baseline on Arabic words
        atb_emma, _ = results["atb"]
        assert atb_emma["EGY"].f1 > raw_emma["EGY"].f1

    def test_identical_pipelines_identical_rows(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        dup = ExperimentConfig(
            **{
                **config.__dict__,
                "pipelines": {
                    "a": config.pipelines["atb"],
                    "b": config.pipelines["atb"],
                },
            }
        )
        results = run_segmentation_eval(dup)
        assert results["a"][0].groups == results["b"][0].groups

    def test_missing_gold_rejected(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        no_gold = ExperimentConfig(**{**config.__dict__, "gold": None})
        with pytest.raises(ConfigError):
            run_segmentation_eval(no_gold)


class TestEvalByCategory:
    def test_identity_hypothesis_scores_100_everywhere(self):
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        scores = eval_by_category(DEV_TGT, DEV_TGT, cats)
        for cat, value in scores.scores.items():
            if scores.counts[cat]:
                assert value == pytest.approx(100.0)
        # the four proper categories plus Undetermined partition the corpus
        # (MCS is a subset of CS, so it is not part of the sum)
        partition = (
            scores.counts["MonoEGY"]
            + scores.counts["MonoEN"]
            + scores.counts["CS"]
            + scores.counts["Undetermined"]
        )
        assert partition == scores.counts["All"] == len(DEV_SRC)
        assert scores.counts["MCS"] <= scores.counts["CS"]

    def test_single_cs_sentence_all_equals_cs(self):
        src = _sentences(["it depends على الكتاب"])
        cats = categories_for(src)
        scores = eval_by_category(["guess"], ["truth"], cats)
        assert scores.scores["All"] == pytest.approx(scores.scores["CS"])

    def test_recombination(self):
        # All-category score equals scoring the full file directly
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        hyp = [line.replace("the", "a") for line in DEV_TGT]
        scores = eval_by_category(hyp, DEV_TGT, cats)
        assert scores.scores["All"] == pytest.approx(chrf_pp(hyp, DEV_TGT).score)

    def test_alignment_error_cites_line(self):
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        with pytest.raises(AlignmentError, match="offending line"):
            eval_by_category(DEV_TGT[:2], DEV_TGT, cats)

    def test_ranks(self):
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        worse = ["xxxx" for _ in DEV_TGT]
        systems = compare_systems(
            {"good": DEV_TGT, "bad": worse}, DEV_TGT, cats
        )
        assert systems["good"].ranks["All"] == 1
        assert systems["bad"].ranks["All"] == 2
        tied = compare_systems({"a": DEV_TGT, "b": DEV_TGT}, DEV_TGT, cats)
        assert tied["a"].ranks["All"] == tied["b"].ranks["All"] == 1


class TestLearningCurve:
    def test_fraction_one_equals_full_run(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        cells = learning_curve(config)
        full = [c for c in cells if c.fraction == 1.0]
        rerun_config = ExperimentConfig(
            **{**config.__dict__, "fractions": (1.0,)}
        )
        rerun = learning_curve(rerun_config)
        assert [(c.pipeline, c.oov_pct, c.mean_richness) for c in full] == [
            (c.pipeline, c.oov_pct, c.mean_richness) for c in rerun
        ]

    def test_determinism(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        a = learning_curve(config)
        b = learning_curve(config)
        assert a == b

    def test_bpe_morphs_per_word_nonincreasing_in_data(self, experiment_dir):
        # fewer merges learned on less data -> same dev text splits into
        # at least as many morphs. Needs a vocabulary cap large enough
        # that the pair-frequency floor, not the cap, limits training
        # (otherwise a smaller subsample alphabet frees merge budget).
        (experiment_dir / "manifests" / "bpe_big.manifest").write_text(
            "segmenter big type=bpe train=joint vocab=500\nuse big\n",
            encoding="utf-8",
        )
        config = load_config(str(experiment_dir / "config.yaml"))
        config = ExperimentConfig(
            **{
                **config.__dict__,
                "pipelines": {"bpe_big": "manifests/bpe_big.manifest"},
                "fractions": (0.25, 0.5, 1.0),
            }
        )
        cells = learning_curve(config, ["bpe_big"])
        by_fraction = {c.fraction: c.mean_morphs_per_sentence for c in cells}
        assert by_fraction[0.25] >= by_fraction[0.5] - 1e-9
        assert by_fraction[0.5] >= by_fraction[1.0] - 1e-9

    def test_proxies_note_when_no_hypotheses(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        cells = learning_curve(config)
        assert all(c.note for c in cells if c.chrf is None)

    def test_hypothesis_file_fills_chrf_columns(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        with_hyp = ExperimentConfig(
            **{
                **config.__dict__,
                "hypotheses": {"atb": {1.0: "hyps/sysA.txt"}},
            }
        )
        cells = learning_curve(with_hyp, ["atb"])
        full = next(c for c in cells if c.fraction == 1.0)
        half = next(c for c in cells if c.fraction == 0.5)
        assert full.chrf is not None
        assert full.chrf.scores["All"] == pytest.approx(100.0)
        assert full.note == ""
        assert half.chrf is None and half.note


class TestSystemSelection:
    def test_constant_routing_is_identity(self):
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        hyp = [line.replace("school", "skool") for line in DEV_TGT]
        routing = {label: hyp for label in ("MonoEGY", "MonoEN", "CS", "MCS")}
        result = system_selection(routing, DEV_TGT, cats)
        assert result.composite_lines == hyp
        assert result.report.score == pytest.approx(chrf_pp(hyp, DEV_TGT).score)

    def test_routed_improvement(self):
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        # system A is perfect exactly on CS lines; B is perfect elsewhere
        a = [
            ref if cat in (SentenceCategory.CS, SentenceCategory.MCS) else "zzz"
            for ref, cat in zip(DEV_TGT, cats)
        ]
        b = [
            "zzz" if cat in (SentenceCategory.CS, SentenceCategory.MCS) else ref
            for ref, cat in zip(DEV_TGT, cats)
        ]
        routing = {"CS": a, "MCS": a, "*": b}
        result = system_selection(routing, DEV_TGT, cats)
        assert result.report.score == pytest.approx(100.0)
        assert result.report.score >= chrf_pp(b, DEV_TGT).score

    def test_unrouted_category_rejected(self):
        src = _sentences(DEV_SRC)
        cats = categories_for(src)
        with pytest.raises(ConfigError, match="not routed"):
            system_selection({"CS": DEV_TGT}, DEV_TGT, cats)

    def test_empty_category_routing_unused(self):
        src = _sentences(["انا بحب المدرسة"])  # MonoEGY only
        cats = categories_for(src)
        # the MonoEN route exists but no sentence ever consults it
        routing = {"MonoEGY": ["x"], "MonoEN": ["never used"]}
        result = system_selection(routing, ["x"], cats)
        assert result.report.score == pytest.approx(100.0)


class TestBinnedReport:
    def test_single_bin_overall_mean(self):
        rows = binned_report([1.0, 1.05, 1.09], [40.0, 50.0, 60.0], [1.0, 1.1])
        assert rows == [BinRow(1.0, 1.1, 3, pytest.approx(50.0))]

    def test_all_in_first_bin(self):
        rows = binned_report([1.0, 1.0], [10.0, 20.0], [1.0, 1.2, 1.4])
        assert rows[0].count == 2
        assert rows[1].count == 0
        assert rows[1].mean_score is None

    def test_two_bins_one_each(self):
        rows = binned_report([1.05, 1.3], [40.0, 60.0], [1.0, 1.2, 1.4])
        assert [(r.count, r.mean_score) for r in rows] == [(1, 40.0), (1, 60.0)]

    def test_overflow_row(self):
        rows = binned_report([0.5, 9.0], [10.0, 30.0], [1.0, 2.0])
        assert rows[0].lo == float("-inf") and rows[0].count == 1
        assert rows[-1].hi == float("inf") and rows[-1].count == 1

    def test_none_features_skipped(self):
        rows = binned_report([None, 1.1], [99.0, 44.0], [1.0, 2.0])
        assert rows[0].count == 1 and rows[0].mean_score == pytest.approx(44.0)

    def test_unsorted_edges_rejected(self):
        with pytest.raises(ArgumentError):
            binned_report([1.0], [1.0], [2.0, 1.0])


class TestRunAnalysis:
    def test_reports_and_figures_written(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        written = run_analysis(config, figures=True)
        names = {os.path.basename(p) for p in written}
        assert "seg_eval.tsv" in names
        assert "learning_curve.tsv" in names
        assert "category_scores.tsv" in names
        assert "summary.json" in names
        assert any(n.endswith(".png") for n in names)
        for path in written:
            assert os.path.getsize(path) > 0

    def test_byte_identical_reruns(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        first = {}
        for path in run_analysis(config, figures=False):
            with open(path, "rb") as fh:
                first[os.path.basename(path)] = fh.read()
        second = {}
        for path in run_analysis(config, figures=False):
            with open(path, "rb") as fh:
                second[os.path.basename(path)] = fh.read()
        assert first == second

    def test_no_figures_flag(self, experiment_dir):
        config = load_config(str(experiment_dir / "config.yaml"))
        written = run_analysis(config, figures=False)
        assert not any(p.endswith(".png") for p in written)
