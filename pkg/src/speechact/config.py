"""Flat key=value configuration shared by the library and the CLI.

Precedence per key: explicit override (CLI flag) > config file > built-in
default. Files are UTF-8, one ``key=value`` per line, ``#`` starts a comment.
Keys are namespaced by the module that consumes them (``nb.alpha``,
``rf.trees``, ``rumor.selected_classes``, ...).
"""

from __future__ import annotations

from pathlib import Path

from .errors import ResourceError

DEFAULTS: dict[str, str] = {
    # classifiers
    "nb.alpha": "1.0",
    "knn.k": "5",
    "rf.trees": "100",
    "svm.lambda": "0.001",
    "svm.epochs": "50",
    # evaluation
    "cv.k": "10",
    "cv.seed": "0",
    "ttest.variant": "welch",
    "ttest.alpha": "0.05",
    # feature extraction
    "features.enrich": "true",
    # preprocessing switches
    "preprocess.nfc": "true",
    "preprocess.map_arabic_letters": "true",
    "preprocess.unify_digits": "true",
    "preprocess.strip_zero_width": "true",
    "preprocess.collapse_whitespace": "true",
    "preprocess.unify_question_mark": "true",
    "preprocess.mark_stopwords": "true",
    "preprocess.stem": "true",
    "preprocess.lemmatize": "true",
    # rumor pipeline
    "rumor.selected_classes": "Ques,Thrt,Declar,Narrv",
    "rumor.classifier": "rf",
}

_TRUE = {"true", "1", "yes", "on"}
_FALSE = {"false", "0", "no", "off"}


class Config:
    """Resolved configuration with per-key origin tracking."""

    def __init__(self, values: dict[str, str] | None = None,
                 origins: dict[str, str] | None = None):
        self.values = dict(DEFAULTS)
        self.origins = {k: "default" for k in self.values}
        if values:
            for k, v in values.items():
                self.values[k] = v
                self.origins[k] = (origins or {}).get(k, "override")

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.values.get(key, default)

    def get_int(self, key: str) -> int:
        return int(self.values[key])

    def get_float(self, key: str) -> float:
        return float(self.values[key])

    def get_bool(self, key: str) -> bool:
        raw = self.values[key].strip().lower()
        if raw in _TRUE:
            return True
        if raw in _FALSE:
            return False
        raise ResourceError(f"config key {key} is not a boolean: {raw!r}")

    def get_list(self, key: str) -> list[str]:
        raw = self.values.get(key, "")
        return [part.strip() for part in raw.split(",") if part.strip()]

    def set(self, key: str, value: str, origin: str = "flag") -> None:
        self.values[key] = value
        self.origins[key] = origin

    def dump(self) -> str:
        lines = [f"{k}={self.values[k]}  # {self.origins[k]}"
                 for k in sorted(self.values)]
        return "\n".join(lines) + "\n"


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse a key=value config file. Malformed lines raise ResourceError."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ResourceError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ResourceError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def resolve(path: str | Path | None = None,
            overrides: dict[str, str] | None = None) -> Config:
    """Layer defaults, an optional config file, and explicit overrides."""
    cfg = Config()
    if path is not None:
        for k, v in load_config_file(path).items():
            cfg.set(k, v, origin=f"file:{path}")
    for k, v in (overrides or {}).items():
        cfg.set(k, v, origin="flag")
    return cfg
