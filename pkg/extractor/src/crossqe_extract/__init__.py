"""Embedding and fluency extraction for the crossqe interchange format."""

from .builder import build_interchange
from .config import DEFAULT_LAYER_BY_FAMILY, DEFAULT_MODEL, ExtractionConfig
from .errors import ExtractError, InputError, ModelError, SequenceError
from .interchange import ExtractedPair, quantize
from .mlm import MlmSession

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LAYER_BY_FAMILY",
    "DEFAULT_MODEL",
    "ExtractError",
    "ExtractedPair",
    "ExtractionConfig",
    "InputError",
    "MlmSession",
    "ModelError",
    "SequenceError",
    "build_interchange",
    "quantize",
    "__version__",
]
