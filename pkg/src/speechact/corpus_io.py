"""Labeled corpus loading and model archive persistence.

Corpus file format (line-delimited, UTF-8):
    #labels=Ques,Req,Dir,Thrt,Quot,Declar,Narrv
    id=r1<TAB>text=...<TAB>label=Ques<TAB>domain=politics<TAB>extra.depth=3.0

Fields are tab-separated ``key=value`` pairs. Required: ``id``, ``text`` and,
unless the loader is told otherwise, ``label``. Optional: ``domain``,
``veracity`` (FR or TR, only on Rumor records) and any number of
``extra.<name>=<float>`` columns. Inside values, backslash escapes encode
tab (``\\t``), newline (``\\n``), carriage return (``\\r``) and backslash
(``\\\\``).

Model archives are single self-describing JSON files with ``schema_version``
as the first key; saving is canonical, so ``save(load(save(m)))`` is
byte-identical.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import ArchiveVersionError, DataError

SA_CLASSES = ("Ques", "Req", "Dir", "Thrt", "Quot", "Declar", "Narrv")
RUMOR_LABELS = ("Rumor", "NonRumor")
VERACITY_LABELS = ("FR", "TR")

ARCHIVE_SCHEMA_VERSION = 1

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape_value(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def unescape_value(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\":
            if i + 1 >= len(value) or value[i + 1] not in _UNESCAPES:
                raise DataError(f"bad escape sequence at offset {i} in {value!r}")
            out.append(_UNESCAPES[value[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


@dataclass(frozen=True)
class Record:
    id: str
    text: str
    label: str | None
    domain: str | None = None
    veracity: str | None = None
    extra: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class LabeledCorpus:
    records: tuple[Record, ...]
    labels: tuple[str, ...]

    def class_histogram(self) -> dict[str, int]:
        counts = {label: 0 for label in self.labels}
        for rec in self.records:
            if rec.label is not None:
                counts[rec.label] = counts.get(rec.label, 0) + 1
        return counts

    def __len__(self) -> int:
        return len(self.records)


def _parse_record(line: str, lineno: int, label_set: set[str],
                  require_labels: bool) -> Record:
    fields: dict[str, str] = {}
    extra: dict[str, float] = {}
    for part in line.split("\t"):
        if "=" not in part:
            raise DataError(f"malformed field {part!r} at line {lineno}")
        key, _, raw = part.partition("=")
        value = unescape_value(raw)
        if key.startswith("extra."):
            name = key[len("extra."):]
            if not name:
                raise DataError(f"empty extra column name at line {lineno}")
            try:
                extra[name] = float(value)
            except ValueError:
                raise DataError(
                    f"extra.{name} is not a float at line {lineno}: {value!r}") from None
        elif key in ("id", "text", "label", "domain", "veracity"):
            if key in fields:
                raise DataError(f"duplicate field {key} at line {lineno}")
            fields[key] = value
        else:
            raise DataError(f"unknown field {key!r} at line {lineno}")

    for required in ("id", "text"):
        if required not in fields:
            raise DataError(f"missing field {required} at line {lineno}")
    if not fields["text"].strip():
        raise DataError(f"empty text at line {lineno}")

    label = fields.get("label")
    if label is None and require_labels:
        raise DataError(f"missing field label at line {lineno}")
    if label is not None and label not in label_set:
        raise DataError(f"unknown label {label} at line {lineno}")

    veracity = fields.get("veracity")
    if veracity is not None:
        if veracity not in VERACITY_LABELS:
            raise DataError(f"unknown veracity {veracity} at line {lineno}")
        if label != "Rumor":
            raise DataError(f"veracity on non-Rumor record at line {lineno}")

    return Record(id=fields["id"], text=fields["text"], label=label,
                  domain=fields.get("domain"), veracity=veracity, extra=extra)


def load_corpus(path: str | Path, expected_labels=None,
                require_labels: bool = True) -> LabeledCorpus:
    """Load a line-delimited corpus, preserving record order.

    ``expected_labels``, when given, must be a superset of the label set the
    file header declares. Every malformed line raises DataError naming the
    line number.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read corpus {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#labels="):
        raise DataError(f"{path}: first line must be #labels=<comma-separated>")
    declared = tuple(l.strip() for l in lines[0][len("#labels="):].split(",") if l.strip())
    if expected_labels is not None:
        unexpected = [l for l in declared if l not in set(expected_labels)]
        if unexpected:
            raise DataError(
                f"{path}: header declares labels outside the expected set: "
                + ", ".join(unexpected))
    label_set = set(declared)

    records: list[Record] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        rec = _parse_record(line, lineno, label_set, require_labels)
        if rec.id in seen_ids:
            raise DataError(f"duplicate id {rec.id} at line {lineno}")
        seen_ids.add(rec.id)
        records.append(rec)
    return LabeledCorpus(records=tuple(records), labels=declared)


def format_record(rec: Record) -> str:
    parts = [f"id={escape_value(rec.id)}", f"text={escape_value(rec.text)}"]
    if rec.label is not None:
        parts.append(f"label={escape_value(rec.label)}")
    if rec.domain is not None:
        parts.append(f"domain={escape_value(rec.domain)}")
    if rec.veracity is not None:
        parts.append(f"veracity={rec.veracity}")
    for name in sorted(rec.extra):
        parts.append(f"extra.{name}={rec.extra[name]!r}")
    return "\t".join(parts)


def save_corpus(corpus: LabeledCorpus, path: str | Path) -> None:
    lines = ["#labels=" + ",".join(corpus.labels)]
    lines.extend(format_record(rec) for rec in corpus.records)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_model(model, path: str | Path) -> None:
    """Write a classifier model archive (canonical JSON, version-stamped)."""
    archive = {
        "schema_version": ARCHIVE_SCHEMA_VERSION,
        "model_kind": model.kind,
        "labels": list(model.labels),
        "feature_schema": {
            "names": list(model.schema.names),
            "kinds": list(model.schema.kinds),
        },
        "resource_fingerprints": {
            k: model.resource_fingerprints[k]
            for k in sorted(model.resource_fingerprints)
        },
        "payload": model.to_payload(),
    }
    Path(path).write_text(
        json.dumps(archive, ensure_ascii=True, indent=2) + "\n", encoding="utf-8")


def load_model(path: str | Path, current_fingerprints: Mapping[str, str] | None = None):
    """Load a classifier model archive.

    A ``schema_version`` other than the supported one raises
    ArchiveVersionError. If ``current_fingerprints`` is given, mismatches with
    the archived resource fingerprints are surfaced as warnings only, because
    dictionary enrichment legitimately moves fingerprints between runs.
    """
    from . import classifiers  # deferred: classifiers does not import corpus_io

    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read model archive {path}: {exc}") from exc
    try:
        archive = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DataError(f"corrupt model archive {path}: {exc}") from exc
    version = archive.get("schema_version")
    if version != ARCHIVE_SCHEMA_VERSION:
        raise ArchiveVersionError(
            f"unsupported archive schema_version {version}, "
            f"expected {ARCHIVE_SCHEMA_VERSION}")
    for key in ("model_kind", "labels", "feature_schema", "payload"):
        if key not in archive:
            raise DataError(f"corrupt model archive {path}: missing {key}")

    model = classifiers.model_from_archive(archive)
    if current_fingerprints is not None:
        archived = archive.get("resource_fingerprints", {})
        for name in sorted(set(archived) & set(current_fingerprints)):
            if archived[name] != current_fingerprints[name]:
                warnings.warn(
                    f"resource {name} differs from the one the model was "
                    f"trained with", stacklevel=2)
    return model
