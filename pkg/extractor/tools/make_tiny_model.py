"""Train the small fixture model the test suite runs against.

The tests need a masked LM that is tiny enough to check into the repo yet
reliably prefers well-formed sentences over shuffled ones. This script
builds one: a 4-layer BERT-style model with a 28-entry vocabulary, trained
on every sentence of a rigid toy grammar

    SUBJECT VERB DETERMINER [ADJECTIVE] NOUN .

Training masks random positions (always with the mask token, matching how
the extractor scores fluency) and the script refuses to save weights that
do not rank 10 fluent sentences above their shuffled counterparts with a
clear margin. Weights land in tests/fixtures/tiny-mlm by default; the
checked-in copy was produced by this script with its default settings.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from pathlib import Path

import torch
from transformers import BertConfig, BertForMaskedLM, BertTokenizer

SEED = 20240816

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
SUBJECTS = ["anna", "boris", "carla", "dmitri", "elena", "farid"]
VERBS = ["sees", "likes", "greets", "follows", "avoids"]
DETERMINERS = ["the", "a"]
ADJECTIVES = ["red", "old", "small", "happy"]
NOUNS = ["cat", "dog", "bird", "horse", "fish"]
WORDS = SUBJECTS + VERBS + DETERMINERS + ADJECTIVES + NOUNS + ["."]

MASK_FRACTION = 0.15
EVAL_SENTENCES = [
    "anna sees the cat .",
    "boris likes a dog .",
    "carla greets the old horse .",
    "dmitri follows a small bird .",
    "elena avoids the happy fish .",
    "farid sees a red cat .",
    "anna likes the small dog .",
    "boris greets a happy horse .",
    "carla follows the red bird .",
    "elena sees a old fish .",
]


def all_sentences() -> list[list[str]]:
    noun_phrases = [[det, noun] for det, noun in itertools.product(DETERMINERS, NOUNS)]
    noun_phrases += [
        [det, adj, noun] for det, adj, noun in itertools.product(DETERMINERS, ADJECTIVES, NOUNS)
    ]
    return [
        [subj, verb, *phrase, "."]
        for subj, verb, phrase in itertools.product(SUBJECTS, VERBS, noun_phrases)
    ]


def build_tokenizer(out_dir: Path) -> BertTokenizer:
    vocab_path = out_dir / "vocab.txt"
    vocab_path.write_text("\n".join(SPECIALS + WORDS) + "\n", encoding="utf-8")
    return BertTokenizer(str(vocab_path))


def encode(tokenizer: BertTokenizer, sentences: list[list[str]]) -> tuple[torch.Tensor, torch.Tensor]:
    width = max(len(s) for s in sentences) + 2
    ids = torch.full((len(sentences), width), tokenizer.pad_token_id, dtype=torch.long)
    mask = torch.zeros((len(sentences), width), dtype=torch.long)
    for row, tokens in enumerate(sentences):
        body = tokenizer.convert_tokens_to_ids(tokens)
        framed = [tokenizer.cls_token_id, *body, tokenizer.sep_token_id]
        ids[row, : len(framed)] = torch.tensor(framed, dtype=torch.long)
        mask[row, : len(framed)] = 1
    return ids, mask


def train(tokenizer: BertTokenizer, sentences: list[list[str]], steps: int, batch_size: int) -> BertForMaskedLM:
    config = BertConfig(
        vocab_size=len(SPECIALS + WORDS),
        hidden_size=64,
        num_hidden_layers=4,
        num_attention_heads=4,
        intermediate_size=128,
        max_position_embeddings=48,
    )
    model = BertForMaskedLM(config)
    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=5e-4)
    ids, attention = encode(tokenizer, sentences)
    lengths = [len(s) for s in sentences]
    rng = random.Random(SEED)

    for step in range(steps):
        picks = rng.sample(range(len(sentences)), batch_size)
        batch_ids = ids[picks].clone()
        batch_attention = attention[picks]
        labels = torch.full_like(batch_ids, -100)
        for row, pick in enumerate(picks):
            n_real = lengths[pick]
            n_masked = max(1, round(MASK_FRACTION * n_real))
            for pos in rng.sample(range(1, n_real + 1), n_masked):
                labels[row, pos] = batch_ids[row, pos]
                batch_ids[row, pos] = tokenizer.mask_token_id
        loss = model(input_ids=batch_ids, attention_mask=batch_attention, labels=labels).loss
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        if step % 100 == 0 or step == steps - 1:
            print(f"step {step:4d}  loss {loss.item():.4f}")
    model.eval()
    return model


def shuffled_copy(tokens: list[str], rng: random.Random) -> list[str]:
    permuted = tokens[:]
    while permuted == tokens:
        rng.shuffle(permuted)
    return permuted


def check_fluency_margin(model_dir: Path) -> None:
    """Reload the saved model through the extractor and verify the ordering."""
    from crossqe_extract import ExtractionConfig, MlmSession

    session = MlmSession.load(
        ExtractionConfig(model=str(model_dir), layer=3, max_len=48, batch_size=8)
    )
    rng = random.Random(7)
    wins = 0
    gaps = []
    for sentence in EVAL_SENTENCES:
        tokens = sentence.split()
        fluent = session.generation_score(tokens)
        permuted = session.generation_score(shuffled_copy(tokens, rng))
        gaps.append(fluent - permuted)
        wins += fluent > permuted
        print(f"fluent {fluent:8.4f}  shuffled {permuted:8.4f}  {sentence}")
    mean_gap = sum(gaps) / len(gaps)
    print(f"wins {wins}/10, mean gap {mean_gap:.4f}")
    if wins < 10 or mean_gap < 0.5:
        sys.exit("model too weak for the fixture; raise --steps and rerun")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "tiny-mlm"),
    )
    parser.add_argument("--steps", type=int, default=600)
    parser.add_argument("--batch-size", type=int, default=64)
    args = parser.parse_args()

    torch.manual_seed(SEED)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    tokenizer = build_tokenizer(out_dir)
    sentences = all_sentences()
    print(f"training on {len(sentences)} sentences")
    model = train(tokenizer, sentences, args.steps, args.batch_size)

    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    check_fluency_margin(out_dir)
    print(f"saved to {out_dir}")


if __name__ == "__main__":
    main()
