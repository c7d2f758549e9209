"""Access to the packaged default ruleset, lexicons and configuration."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .lexicon import Lexicons, load_lexicon_dir
from .pipeline import PipelineConfig
from .rules import RuleSet, compile_ruleset


def data_path(*parts: str) -> Path:
    return Path(resources.files("emorole").joinpath("data", *parts))


def default_rules_path() -> Path:
    return data_path("rules", "default.json")


def default_lexicon_dir() -> Path:
    return data_path("lexicons")


def default_config_path() -> Path:
    return data_path("config", "default.cfg")


def load_default_lexicons() -> Lexicons:
    return load_lexicon_dir(default_lexicon_dir())


def load_default_ruleset(lexicons: Lexicons | None = None,
                         cfg: PipelineConfig | None = None) -> RuleSet:
    lexicons = lexicons if lexicons is not None else load_default_lexicons()
    cfg = cfg or PipelineConfig()
    text = default_rules_path().read_text(encoding="utf-8")
    return compile_ruleset(text, context=cfg.compile_context(lexicons))
