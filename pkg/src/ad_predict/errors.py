"""Custom exceptions for ad-predict with user-friendly context."""

from typing import Any


class ADPredictError(Exception):
    """Base error for ad-predict."""

    def __init__(self, message: str, **context: Any):
        self.message = message
        self.context = context
        super().__init__(self._format_message())

    def _format_message(self) -> str:
        """Format error message with context."""
        parts = [self.message]

        if self.context:
            ctx_parts = [f"{k}={v}" for k, v in self.context.items() if v is not None]
            if ctx_parts:
                parts.append(f"({', '.join(ctx_parts)})")

        return " ".join(parts)


class RecordParseError(ADPredictError):
    """A corpus record is syntactically malformed."""

    def __init__(self, field: str, reason: str, line_no: int | None = None, **context: Any):
        self.field = field
        super().__init__(
            f"Malformed record: field '{field}' {reason}",
            field=field,
            line=line_no,
            **context,
        )


class RecordValidationError(ADPredictError):
    """A corpus record is well-formed but violates a field invariant."""

    def __init__(self, field: str, reason: str, line_no: int | None = None, **context: Any):
        self.field = field
        super().__init__(
            f"Invalid record: field '{field}' {reason}",
            field=field,
            line=line_no,
            **context,
        )


class CorpusIOError(ADPredictError):
    """An input stream could not be read."""

    def __init__(self, path: str, reason: str, **context: Any):
        super().__init__(f"Cannot read '{path}': {reason}", path=path, **context)


class ResourceFileError(ADPredictError):
    """A line of a resource, label or feature file is malformed."""

    def __init__(self, path: str, line_no: int, reason: str, **context: Any):
        super().__init__(
            f"Bad line {line_no} in '{path}': {reason}",
            path=path,
            line=line_no,
            **context,
        )


class LexiconValidationError(ADPredictError):
    """Lexicon content violates its invariants."""

    def __init__(
        self,
        reason: str,
        path: str | None = None,
        line_no: int | None = None,
        **context: Any
    ):
        super().__init__(f"Lexicon invalid: {reason}", path=path, line=line_no, **context)


class TrainingError(ADPredictError):
    """A learner cannot be trained on the given data."""

    def __init__(self, reason: str, learner: str | None = None, **context: Any):
        super().__init__(f"Training failed: {reason}", learner=learner, **context)


class StratificationError(ADPredictError):
    """A stratified split or fold assignment is impossible."""

    def __init__(self, reason: str, **context: Any):
        super().__init__(f"Stratification failed: {reason}", **context)


class ContractError(ADPredictError, ValueError):
    """A caller broke an operation's precondition."""

    def __init__(self, reason: str, **context: Any):
        super().__init__(f"Contract violated: {reason}", **context)


class ModelLoadError(ADPredictError):
    """A model file is unreadable or corrupted."""

    def __init__(self, path: str, reason: str, **context: Any):
        super().__init__(f"Cannot load model '{path}': {reason}", path=path, **context)


class ModelVersionError(ModelLoadError):
    """A model file was written with an unsupported format version."""

    def __init__(self, path: str, found: Any, expected: int, **context: Any):
        self.found = found
        self.expected = expected
        super().__init__(
            path,
            f"unsupported format version {found!r} (this build reads version {expected}). "
            "Re-train the model with this version of ad-predict.",
            **context,
        )


class ConfigError(ADPredictError):
    """Configuration is invalid or references missing files."""

    def __init__(
        self,
        reason: str,
        key: str | None = None,
        path: str | None = None,
        **context: Any
    ):
        super().__init__(f"Configuration error: {reason}", key=key, path=path, **context)


class SynthError(ADPredictError):
    """A synthetic corpus cannot be engineered from the given resources."""

    def __init__(self, reason: str, **context: Any):
        super().__init__(f"Synthetic generation failed: {reason}", **context)
