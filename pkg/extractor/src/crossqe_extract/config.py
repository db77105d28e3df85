"""Extraction settings.

``ExtractionConfig`` validates what can be checked without the model
(plain value ranges). Checks that depend on the loaded checkpoint, such as
the layer count and the positional limit, happen in ``MlmSession.load``.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_MODEL = "bert-base-multilingual-cased"
DEFAULT_BATCH_SIZE = 16

# Hidden-state layer used when the caller does not pick one, keyed by the
# model family that the checkpoint's configuration reports. Middle-to-late
# layers carry the most transferable token representations for these
# families. Any other family needs an explicit layer.
DEFAULT_LAYER_BY_FAMILY = {
    "bert": 9,
    "xlm": 11,
}


@dataclass(frozen=True)
class ExtractionConfig:
    """Settings for one extraction run.

    Parameters
    ----------
    model:
        Checkpoint name or local path, anything transformers can load.
    layer:
        Hidden-state layer to export. 0 is the static embedding output,
        ``n`` the output of transformer layer ``n``. ``None`` picks the
        family default from ``DEFAULT_LAYER_BY_FAMILY``.
    max_len:
        Hard cap on sequence length, counted after the model's boundary
        markers are added. ``None`` uses the model's positional limit.
        Sequences over the cap are rejected, never truncated.
    batch_size:
        Number of masked copies scored per forward pass when computing
        the generation score.
    """

    model: str = DEFAULT_MODEL
    layer: int | None = None
    max_len: int | None = None
    batch_size: int = DEFAULT_BATCH_SIZE

    def __post_init__(self):
        if not self.model:
            raise ValueError("model must be a non-empty name or path")
        if self.layer is not None and self.layer < 0:
            raise ValueError(f"layer must be >= 0, got {self.layer}")
        if self.max_len is not None and self.max_len < 3:
            raise ValueError(
                f"max-len must be >= 3 to fit one token plus boundary markers, got {self.max_len}"
            )
        if self.batch_size < 1:
            raise ValueError(f"batch size must be >= 1, got {self.batch_size}")
