"""Model files and pipeline manifests.

All model files are line-oriented UTF-8 text with a versioned header
and a trailing CRC line (`crc <8 hex digits>`, crc32 of every byte
before it), so truncation and corruption are detected at load time:

  bpe v1 vocab=<N> marker=<char>      one `left right` merge per line
  mdl v1 F=<f> d=<mode> a=<mode>      `morph<TAB>count` lines
  ar-rules v1 scheme=... min_stem=... `pro:/enc:/art:` clitic lines
  en-rules v1 min_stem=...            `irr:/sib:/suf:` rule lines

A pipeline manifest is a small declarative file naming segmenters and
how they combine:

  segmenter <name> type=<kind> key=value ...
  pipeline <name> <stage> <stage> ...
  route <arabic|latin|mixed|numeric|punct> <name>
  use <name>

A segmenter entry either points at a trained model (`model=path`,
relative to the manifest) or asks the harness to train one
(`train=joint|src|tgt|src-arabic` plus hyperparameters). Rule-based
segmenters may be declared inline (`type=ar-rules scheme=atb`). The
manifest's top-level segmenter is the `use` target, else the script
router when `route` lines exist, else the single definition.
"""

from __future__ import annotations

import os
import re
import zlib
from dataclasses import dataclass, field
from typing import Callable, Mapping

from ..corpus import Script
from ..errors import ArgumentError, ChecksumError, ConfigError, FormatError
from .base import IdentitySegmenter, PipelineSegmenter, ScriptRouter, Segmenter
from .bpe import BpeModel
from .mdl import MdlModel, MdlParams
from .rules import ArRuleSet, EnRuleSet

_CRC_RE = re.compile(r"(?m)^crc ([0-9a-f]{8})\n?\Z")


def _checksummed(body: str) -> str:
    crc = zlib.crc32(body.encode("utf-8"))
    return f"{body}crc {crc:08x}\n"


def _read_checksummed(path: str) -> list[str]:
    """Read a model file, verify its CRC, return body lines."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    match = _CRC_RE.search(text)
    if match is None:
        raise ChecksumError(f"{path}: missing or malformed CRC trailer")
    body = text[: match.start()]
    if zlib.crc32(body.encode("utf-8")) != int(match.group(1), 16):
        raise ChecksumError(f"{path}: CRC mismatch (file corrupted or truncated)")
    return body.split("\n")[:-1]


def _parse_attrs(tokens: list[str], where: str) -> dict[str, str]:
    attrs: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise FormatError(f"{where}: expected key=value, got {tok!r}")
        key, _, value = tok.partition("=")
        attrs[key] = value
    return attrs


def _check_header(line: str, kind: str, path: str) -> dict[str, str]:
    parts = line.split()
    if not parts or parts[0] != kind:
        raise FormatError(f"{path}: not a {kind} model file")
    if len(parts) < 2 or parts[1] != "v1":
        raise FormatError(
            f"{path}: version mismatch (expected {kind} v1, got {line!r})"
        )
    return _parse_attrs(parts[2:], path)


# ---------------------------------------------------------------------------
# Per-kind serializers


def _bpe_to_text(model: BpeModel) -> str:
    lines = [f"bpe v1 vocab={model.vocab_size} marker={model.end_marker}"]
    for left, right in model.merges:
        lines.append(f"{left} {right}")
    return "\n".join(lines) + "\n"


def _bpe_from_lines(lines: list[str], path: str) -> BpeModel:
    attrs = _check_header(lines[0], "bpe", path)
    merges = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise FormatError(f"{path}:{i}: bad merge line {line!r}")
        merges.append((parts[0], parts[1]))
    try:
        vocab_size = int(attrs["vocab"])
        marker = attrs["marker"]
    except KeyError as exc:
        raise FormatError(f"{path}: header missing {exc}") from exc
    return BpeModel(merges=tuple(merges), vocab_size=vocab_size, end_marker=marker)


def _mdl_to_text(model: MdlModel) -> str:
    p = model.params
    lines = [f"mdl v1 F={p.finish_threshold!r} d={p.dampening} a={p.algorithm}"]
    for morph, count in sorted(model.lexicon.items()):
        lines.append(f"{morph}\t{count!r}")
    return "\n".join(lines) + "\n"


def _mdl_from_lines(lines: list[str], path: str) -> MdlModel:
    attrs = _check_header(lines[0], "mdl", path)
    lexicon: dict[str, float] = {}
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise FormatError(f"{path}:{i}: bad lexicon line {line!r}")
        lexicon[parts[0]] = float(parts[1])
    if not lexicon:
        raise FormatError(f"{path}: empty lexicon")
    try:
        params = MdlParams(
            finish_threshold=float(attrs["F"]),
            dampening=attrs["d"],
            algorithm=attrs["a"],
        )
    except KeyError as exc:
        raise FormatError(f"{path}: header missing {exc}") from exc
    return MdlModel(lexicon=lexicon, params=params)


def _ar_to_text(rules: ArRuleSet) -> str:
    flags = ",".join(
        name
        for name, on in (("alif", rules.normalize_alif), ("ya", rules.normalize_ya))
        if on
    )
    lines = [
        f"ar-rules v1 scheme={rules.scheme} min_stem={rules.min_stem_len} "
        f"max_pro={rules.max_proclitics} max_enc={rules.max_enclitics} "
        f"normalize={flags}"
    ]
    lines.append(f"art:\t{rules.article}")
    for clitic in rules.proclitics:
        lines.append(f"pro:\t{clitic}")
    for clitic in rules.enclitics:
        lines.append(f"enc:\t{clitic}")
    return "\n".join(lines) + "\n"


def _ar_from_lines(lines: list[str], path: str) -> ArRuleSet:
    attrs = _check_header(lines[0], "ar-rules", path)
    proclitics: list[str] = []
    enclitics: list[str] = []
    article = None
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2 or parts[0] not in ("pro:", "enc:", "art:"):
            raise FormatError(f"{path}:{i}: bad clitic line {line!r}")
        side, clitic = parts
        if side == "pro:":
            proclitics.append(clitic)
        elif side == "enc:":
            enclitics.append(clitic)
        else:
            article = clitic
    flags = set(attrs.get("normalize", "").split(",")) - {""}
    kwargs = dict(
        proclitics=tuple(proclitics),
        enclitics=tuple(enclitics),
        scheme=attrs.get("scheme", "atb"),
        min_stem_len=int(attrs.get("min_stem", 2)),
        max_proclitics=int(attrs.get("max_pro", 3)),
        max_enclitics=int(attrs.get("max_enc", 1)),
        normalize_alif="alif" in flags,
        normalize_ya="ya" in flags,
    )
    if article is not None:
        kwargs["article"] = article
    return ArRuleSet(**kwargs)


_MORPH_JOIN_RE = re.compile(r"(?<!\\)#")


def _en_to_text(rules: EnRuleSet) -> str:
    lines = [f"en-rules v1 min_stem={rules.min_stem_len}"]
    for pattern in rules.sibilant_stems:
        lines.append(f"sib:\t{pattern}")
    for suffix in rules.regular_suffixes:
        lines.append(f"suf:\t{suffix}")
    for word in sorted(rules.irregular_forms):
        joined = "#".join(m.replace("#", "\\#") for m in rules.irregular_forms[word])
        lines.append(f"irr:\t{word}\t{joined}")
    return "\n".join(lines) + "\n"


def _en_from_lines(lines: list[str], path: str) -> EnRuleSet:
    attrs = _check_header(lines[0], "en-rules", path)
    irregular: dict[str, tuple[str, ...]] = {}
    sibilants: list[str] = []
    suffixes: list[str] = []
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if parts[0] == "sib:" and len(parts) == 2:
            sibilants.append(parts[1])
        elif parts[0] == "suf:" and len(parts) == 2:
            suffixes.append(parts[1])
        elif parts[0] == "irr:" and len(parts) == 3:
            morphs = tuple(
                m.replace("\\#", "#") for m in _MORPH_JOIN_RE.split(parts[2])
            )
            irregular[parts[1]] = morphs
        else:
            raise FormatError(f"{path}:{i}: bad rule line {line!r}")
    return EnRuleSet(
        irregular_forms=irregular,
        sibilant_stems=tuple(sibilants),
        regular_suffixes=tuple(suffixes),
        min_stem_len=int(attrs.get("min_stem", 2)),
    )


_KINDS = {
    BpeModel: ("bpe", _bpe_to_text),
    MdlModel: ("mdl", _mdl_to_text),
    ArRuleSet: ("ar-rules", _ar_to_text),
    EnRuleSet: ("en-rules", _en_to_text),
}

_LOADERS = {
    "bpe": _bpe_from_lines,
    "mdl": _mdl_from_lines,
    "ar-rules": _ar_from_lines,
    "en-rules": _en_from_lines,
}


def save_model(model, path: str) -> None:
    for cls, (_, to_text) in _KINDS.items():
        if isinstance(model, cls):
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_checksummed(to_text(model)))
            return
    raise ArgumentError(f"cannot serialize {type(model).__name__}")


def load_model(path: str):
    """Load any model file; the header's first word selects the kind."""
    lines = _read_checksummed(path)
    if not lines:
        raise FormatError(f"{path}: empty model file")
    kind = lines[0].split(" ", 1)[0]
    loader = _LOADERS.get(kind)
    if loader is None:
        raise FormatError(f"{path}: unknown model kind {kind!r}")
    return loader(lines, path)


# ---------------------------------------------------------------------------
# Pipeline manifests


@dataclass(frozen=True)
class Manifest:
    base_dir: str
    segmenters: dict[str, dict[str, str]] = field(default_factory=dict)
    pipelines: dict[str, tuple[str, ...]] = field(default_factory=dict)
    routes: dict[Script, str] = field(default_factory=dict)
    use: str | None = None

    def trainable_specs(self) -> dict[str, dict[str, str]]:
        return {
            name: attrs
            for name, attrs in self.segmenters.items()
            if "train" in attrs
        }


_SCRIPT_NAMES = {s.value: s for s in Script}


def parse_manifest(path: str) -> Manifest:
    segmenters: dict[str, dict[str, str]] = {}
    pipelines: dict[str, tuple[str, ...]] = {}
    routes: dict[Script, str] = {}
    use: str | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for i, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            where = f"{path}:{i}"
            if parts[0] == "segmenter":
                if len(parts) < 3:
                    raise ConfigError(f"{where}: segmenter needs a name and a type")
                segmenters[parts[1]] = _parse_attrs(parts[2:], where)
            elif parts[0] == "pipeline":
                if len(parts) < 3:
                    raise ConfigError(f"{where}: pipeline needs a name and stages")
                pipelines[parts[1]] = tuple(parts[2:])
            elif parts[0] == "route":
                if len(parts) != 3 or parts[1] not in _SCRIPT_NAMES:
                    raise ConfigError(f"{where}: route needs a script class and a name")
                routes[_SCRIPT_NAMES[parts[1]]] = parts[2]
            elif parts[0] == "use":
                if len(parts) != 2:
                    raise ConfigError(f"{where}: use needs exactly one name")
                use = parts[1]
            else:
                raise ConfigError(f"{where}: unknown directive {parts[0]!r}")
    return Manifest(
        base_dir=os.path.dirname(os.path.abspath(path)),
        segmenters=segmenters,
        pipelines=pipelines,
        routes=routes,
        use=use,
    )


Trainer = Callable[[str, Mapping[str, str]], object]


def _build_leaf(
    name: str, attrs: Mapping[str, str], base_dir: str, trainer: Trainer | None
) -> Segmenter:
    kind = attrs.get("type")
    if kind is None:
        raise ConfigError(f"segmenter {name!r}: missing type=")
    if kind == "identity":
        return IdentitySegmenter()
    if "model" in attrs:
        model_path = os.path.join(base_dir, attrs["model"])
        return load_model(model_path)
    if "rules" in attrs:
        return load_model(os.path.join(base_dir, attrs["rules"]))
    if kind == "ar-rules":
        return ArRuleSet(
            scheme=attrs.get("scheme", "atb"),
            min_stem_len=int(attrs.get("min_stem", 2)),
        )
    if kind == "en-rules":
        return EnRuleSet(min_stem_len=int(attrs.get("min_stem", 2)))
    if "train" in attrs:
        if trainer is None:
            raise ConfigError(
                f"segmenter {name!r} needs training (train={attrs['train']}) "
                "but no training corpus is available in this context"
            )
        model = trainer(kind, attrs)
        if not isinstance(model, (BpeModel, MdlModel)):
            raise ConfigError(f"trainer returned no model for {name!r}")
        return model
    raise ConfigError(f"segmenter {name!r}: needs model=, rules= or train=")


def build_segmenter(manifest: Manifest, trainer: Trainer | None = None) -> Segmenter:
    """Resolve a manifest into a ready segmenter.

    `trainer(kind, attrs)` supplies freshly trained models for entries
    declared with train=; omit it when all entries reference model files.
    """
    built: dict[str, Segmenter] = {}

    def resolve(name: str, visiting: tuple[str, ...]) -> Segmenter:
        if name in visiting:
            raise ConfigError(f"pipeline cycle through {name!r}")
        if name in built:
            return built[name]
        if name in manifest.pipelines:
            stages = tuple(
                resolve(s, visiting + (name,)) for s in manifest.pipelines[name]
            )
            seg: Segmenter = PipelineSegmenter(stages=stages)
        elif name in manifest.segmenters:
            seg = _build_leaf(
                name, manifest.segmenters[name], manifest.base_dir, trainer
            )
        else:
            raise ConfigError(f"undefined segmenter {name!r}")
        built[name] = seg
        return seg

    if manifest.use is not None:
        return resolve(manifest.use, ())
    if manifest.routes:
        return ScriptRouter(
            routes={s: resolve(n, ()) for s, n in manifest.routes.items()}
        )
    names = list(manifest.pipelines) + list(manifest.segmenters)
    if len(manifest.pipelines) == 1:
        return resolve(next(iter(manifest.pipelines)), ())
    if len(names) == 1:
        return resolve(names[0], ())
    raise ConfigError(
        "manifest has no `use`, no routes and more than one definition; "
        "cannot pick a top-level segmenter"
    )
