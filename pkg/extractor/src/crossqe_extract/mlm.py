"""Masked language model access: per-token hidden states and fluency scores.

``MlmSession`` wraps one loaded transformers checkpoint in evaluation mode
and exposes the two operations the extractor needs:

* ``embed_sentence``: hidden states of one configured layer, boundary
  positions stripped, one row per input token.
* ``generation_score``: mean log-probability of each token when that
  position is masked and predicted from the rest (higher is better,
  never above zero).

Inputs are already-tokenized subword sequences, so the tokenizer is used
only for vocabulary lookup and its special markers. Everything runs under
``torch.no_grad`` on whatever device the model loads to (CPU by default),
and repeated calls with the same inputs return identical values.
"""

from __future__ import annotations

import numpy as np
import torch

from .config import DEFAULT_LAYER_BY_FAMILY, ExtractionConfig
from .errors import ModelError, SequenceError


class MlmSession:
    """A loaded masked LM plus the resolved settings needed to run it."""

    def __init__(self, tokenizer, model, model_name: str, layer: int, max_len: int, batch_size: int):
        self._tokenizer = tokenizer
        self._model = model
        self.model_name = model_name
        self.layer = layer
        self.max_len = max_len
        self.batch_size = batch_size
        self.dim = int(model.config.hidden_size)
        self.model_type = str(model.config.model_type)

    @classmethod
    def load(cls, config: ExtractionConfig) -> "MlmSession":
        """Load the checkpoint named by ``config`` and validate the settings.

        Raises ``ModelError`` when the checkpoint cannot be loaded, lacks
        the boundary/mask token conventions, or when the requested layer
        or length cap does not fit it.
        """
        from transformers import AutoModelForMaskedLM, AutoTokenizer

        try:
            tokenizer = AutoTokenizer.from_pretrained(config.model)
            model = AutoModelForMaskedLM.from_pretrained(config.model)
        except Exception as exc:
            raise ModelError(f"cannot load model {config.model!r}: {exc}") from None
        model.eval()

        for name in ("cls_token_id", "sep_token_id", "mask_token_id"):
            if getattr(tokenizer, name) is None:
                raise ModelError(f"model {config.model!r} defines no {name.replace('_id', '')}")

        n_layers = int(model.config.num_hidden_layers)
        layer = config.layer
        if layer is None:
            layer = DEFAULT_LAYER_BY_FAMILY.get(model.config.model_type)
            if layer is None:
                raise ModelError(
                    f"no default layer for model family {model.config.model_type!r}; pass one explicitly"
                )
        if not 0 <= layer <= n_layers:
            raise ModelError(f"layer {layer} out of range for a {n_layers}-layer model (0..{n_layers})")

        limit = getattr(model.config, "max_position_embeddings", None)
        max_len = config.max_len
        if max_len is None:
            if limit is None:
                raise ModelError(
                    f"model {config.model!r} reports no positional limit; pass max-len explicitly"
                )
            max_len = int(limit)
        elif limit is not None and max_len > int(limit):
            raise ModelError(f"max-len {max_len} over the model's positional limit of {int(limit)}")

        return cls(tokenizer, model, config.model, layer, max_len, config.batch_size)

    def _input_ids(self, tokens: list[str]) -> torch.Tensor:
        """Map subword tokens to ids framed by the boundary markers.

        Tokens outside the vocabulary map to the unknown-token id, which is
        the standard convention for pre-tokenized input.
        """
        if len(tokens) == 0:
            raise SequenceError("empty sentence")
        framed = len(tokens) + 2
        if framed > self.max_len:
            raise SequenceError(
                f"sentence has {len(tokens)} tokens, {framed} with boundary markers, "
                f"over the length cap of {self.max_len}"
            )
        body = self._tokenizer.convert_tokens_to_ids(list(tokens))
        ids = [self._tokenizer.cls_token_id, *body, self._tokenizer.sep_token_id]
        return torch.tensor(ids, dtype=torch.long)

    def embed_sentence(self, tokens: list[str]) -> np.ndarray:
        """Per-token vectors from the configured layer, one row per token.

        The boundary positions are stripped, so the result is a float64
        matrix of shape ``(len(tokens), dim)``.
        """
        ids = self._input_ids(tokens)
        with torch.no_grad():
            out = self._model(
                input_ids=ids.unsqueeze(0),
                attention_mask=torch.ones((1, ids.shape[0]), dtype=torch.long),
                output_hidden_states=True,
            )
        states = out.hidden_states[self.layer][0, 1:-1, :]
        return states.numpy().astype(np.float64)

    def generation_score(self, tokens: list[str]) -> float:
        """Mean masked log-probability of the sequence under the model.

        Each position in turn is replaced by the mask token and the model
        predicts it from the rest; the log-probability of the true token is
        recorded and the mean over positions returned. The value is a log of
        a probability, so it is always <= 0, and one-token sentences score
        exactly their single masked prediction.
        """
        ids = self._input_ids(tokens)
        n = len(tokens)
        mask_id = self._tokenizer.mask_token_id
        values: list[float] = []
        with torch.no_grad():
            for start in range(0, n, self.batch_size):
                cols = torch.arange(start, min(start + self.batch_size, n)) + 1
                rows = torch.arange(cols.shape[0])
                batch = ids.unsqueeze(0).repeat(cols.shape[0], 1)
                true_ids = ids.index_select(0, cols)
                batch[rows, cols] = mask_id
                logits = self._model(
                    input_ids=batch,
                    attention_mask=torch.ones_like(batch),
                ).logits
                log_probs = torch.log_softmax(logits[rows, cols, :].double(), dim=-1)
                values.extend(log_probs[rows, true_ids].tolist())
        return float(np.mean(np.asarray(values, dtype=np.float64)))
