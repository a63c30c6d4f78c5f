"""Configuration loading for ad-predict."""

from __future__ import annotations

from datetime import UTC, datetime
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ad_predict.errors import ConfigError

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_WORK_DIR = Path("ad-predict-out")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PathsConfig(_Section):
    """Input and output locations. Resource files default to the bundled data."""
    corpus: Path | None = None
    labels: Path | None = None
    features: Path | None = None
    predictions: Path | None = None

    anxiety_seed: Path = DATA_DIR / "anxiety_seed.txt"
    synonyms: Path = DATA_DIR / "synonyms.tsv"
    lexicon: Path | None = None  # Expanded lexicon file; built from seed + synonyms when unset
    stopwords: Path = DATA_DIR / "stopwords.txt"
    slang_map: Path = DATA_DIR / "slang.tsv"
    emoji_map: Path = DATA_DIR / "emoji.tsv"
    polarity: Path = DATA_DIR / "polarity.tsv"

    model_dir: Path = DEFAULT_WORK_DIR / "models"
    report_dir: Path = DEFAULT_WORK_DIR / "reports"


class WindowConfig(_Section):
    """Observation window; anchor defaults to the corpus-wide latest tweet."""
    span_days: int = Field(default=30, ge=1)
    anchor: datetime | None = None

    def anchor_utc(self) -> int | None:
        if self.anchor is None:
            return None
        anchor = self.anchor
        if anchor.tzinfo is None:
            anchor = anchor.replace(tzinfo=UTC)
        return int(anchor.timestamp())


class TextprepConfig(_Section):
    keep_hashtag_words: bool = False


class FeatureConfig(_Section):
    """Thresholds of the five feature extractors."""
    odd_hour_lo: int = Field(default=0, ge=0, le=23)
    odd_hour_hi: int = Field(default=6, ge=1, le=24)  # exclusive
    min_odd_posts: int = Field(default=2, ge=1)
    min_hourly_posts: int = Field(default=3, ge=1)
    neg_share_threshold: float = Field(default=0.25, gt=0.0, le=1.0)  # inclusive
    contrast_threshold: float = Field(default=0.25, gt=0.0, le=1.0)  # inclusive
    contrast_window_hours: int = Field(default=24, ge=1)
    require_mixed_sign_window: bool = False
    post_coefficient: float = Field(default=3.0, gt=0.0)

    @model_validator(mode="after")
    def _check_hours(self) -> FeatureConfig:
        if not self.odd_hour_lo < self.odd_hour_hi:
            raise ValueError(
                f"odd_hour_lo ({self.odd_hour_lo}) must be below odd_hour_hi ({self.odd_hour_hi})"
            )
        return self


class MnbParams(_Section):
    alpha: float = Field(default=1.0, ge=0.0)
    event_model: Literal["multinomial", "bernoulli"] = "bernoulli"


class RfParams(_Section):
    n_trees: int = Field(default=100, ge=1)
    features_per_split: int = Field(default=2, ge=1, le=5)
    bootstrap: bool = True


class GbParams(_Section):
    n_stages: int = Field(default=100, ge=1)
    learning_rate: float = Field(default=0.1, gt=0.0, le=1.0)
    max_depth: int = Field(default=2, ge=1, le=5)


class LearnerParams(_Section):
    mnb: MnbParams = Field(default_factory=MnbParams)
    rf: RfParams = Field(default_factory=RfParams)
    gb: GbParams = Field(default_factory=GbParams)


class EvaluationConfig(_Section):
    protocol: Literal["holdout", "kfold"] = "kfold"
    train_fraction: float = Field(default=0.8, gt=0.0, lt=1.0)
    k: int = Field(default=10, ge=2)
    max_concurrent_folds: int = Field(default=4, ge=1)  # Worker threads for fold training


class RunConfig(_Section):
    """Everything a pipeline run reads."""
    paths: PathsConfig = Field(default_factory=PathsConfig)
    window: WindowConfig = Field(default_factory=WindowConfig)
    textprep: TextprepConfig = Field(default_factory=TextprepConfig)
    features: FeatureConfig = Field(default_factory=FeatureConfig)
    learners: LearnerParams = Field(default_factory=LearnerParams)
    evaluation: EvaluationConfig = Field(default_factory=EvaluationConfig)
    seed: int = Field(default=42, ge=0)

    # Logging configuration
    log_level: str = "WARNING"  # DEBUG, INFO, WARNING, ERROR
    structured_logging: bool = True  # JSON format vs human-readable
    log_file: str | None = None  # Optional file path for logs


def load_config(config_path: Path | None = None) -> RunConfig:
    """Load run configuration from a YAML file.

    Args:
        config_path: Path to config file. None gives the defaults.

    Returns:
        RunConfig instance

    Raises:
        ConfigError: if the file is missing, not YAML, or fails validation
    """
    if config_path is None:
        return RunConfig()

    if not config_path.exists():
        raise ConfigError("config file does not exist", path=str(config_path))

    try:
        with open(config_path, encoding="utf-8") as f:
            data: Any = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"not valid YAML: {e}", path=str(config_path)) from e
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"unreadable: {e}", path=str(config_path)) from e

    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping", path=str(config_path))

    try:
        config = RunConfig(**data)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(p) for p in first["loc"])
        raise ConfigError(first["msg"], key=key, path=str(config_path)) from e

    # Relative paths in a config file are relative to that file
    base = config_path.parent
    updates = {
        name: base / value
        for name, value in config.paths.model_dump().items()
        if isinstance(value, Path) and not value.is_absolute()
    }
    if updates:
        config = config.model_copy(update={"paths": config.paths.model_copy(update=updates)})
    return config


def ensure_directories(config: RunConfig) -> None:
    """Ensure all output directories exist."""
    config.paths.model_dir.mkdir(parents=True, exist_ok=True)
    config.paths.report_dir.mkdir(parents=True, exist_ok=True)


def require_paths(config: RunConfig, *names: str) -> None:
    """Fail fast when a path a command reads is unset or missing.

    Raises:
        ConfigError: naming the first offending key
    """
    for name in names:
        value = getattr(config.paths, name)
        if value is None:
            raise ConfigError(f"paths.{name} is required for this command", key=f"paths.{name}")
        if not Path(value).exists():
            raise ConfigError(
                f"paths.{name} points to a missing file", key=f"paths.{name}", path=str(value)
            )
