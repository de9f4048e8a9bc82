#!/usr/bin/env python3
"""Train the small byte-level BPE tokenizer bundled for desk-scale runs and
record reference encodings from the Hugging Face `tokenizers` library.

Outputs:
  data/tokenizers/desk-bpe.json          native single-file form
  data/tokenizers/desk-bpe.hf.json       the same tokenizer as tokenizer.json
  data/fixtures/desk_reference.jsonl     {"text", "ids", "tokens"} per line

    python3 scripts/train_desk_tokenizer.py [--vocab-size 1200]
"""

import argparse
import json
import random
from pathlib import Path

from tokenizers import Regex, Tokenizer, decoders, models, pre_tokenizers, trainers

# Letters may take one leading non-letter (".factor", " sorted"), digits
# group in threes, and punctuation runs keep trailing newlines.
LLAMA3_PATTERN = (
    r"(?i:'s|'t|'re|'ve|'m|'ll|'d)|[^\r\n\p{L}\p{N}]?\p{L}+|\p{N}{1,3}"
    r"| ?[^\s\p{L}\p{N}]+[\r\n]*|\s*[\r\n]+|\s+(?!\S)|\s+"
)


def build(vocab_size, texts):
    tok = Tokenizer(models.BPE())
    tok.pre_tokenizer = pre_tokenizers.Sequence([
        pre_tokenizers.Split(Regex(LLAMA3_PATTERN), behavior="isolated"),
        pre_tokenizers.ByteLevel(add_prefix_space=False, use_regex=False),
    ])
    tok.decoder = decoders.ByteLevel()
    trainer = trainers.BpeTrainer(
        vocab_size=vocab_size,
        min_frequency=2,
        initial_alphabet=pre_tokenizers.ByteLevel.alphabet(),
        special_tokens=["<|endoftext|>"],
        show_progress=False,
    )
    tok.train_from_iterator(texts, trainer=trainer)
    return tok


def native(tok):
    model = json.loads(tok.to_str())["model"]
    merges = [m.split(" ", 1) if isinstance(m, str) else m for m in model["merges"]]
    return {
        "format": "drift-bpe/1",
        "byte_level": True,
        "ignore_merges": False,
        "pretokenizer": {"preset": "llama3"},
        "specials": ["<|endoftext|>"],
        "vocab": model["vocab"],
        "merges": merges,
    }


def probe_texts(samples, rng):
    texts = [" sortedLst", "q.factorial(n)", "foo_bar", "fooBar", "", "  x\n\n\ty = 1"]
    texts += [s["source"] for s in samples[::20]]
    alphabet = "abcXYZ_019 .,;:()[]{}+-*/=<>!\n\t\"'éß日本🙂"
    for _ in range(40):
        texts.append("".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40))))
    return texts


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", default="data/corpus/desk.jsonl")
    ap.add_argument("--vocab-size", type=int, default=1200)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    samples = [json.loads(l) for l in Path(args.corpus).read_text().splitlines() if l.strip()]
    tok = build(args.vocab_size, [s["source"] for s in samples])

    out = Path("data/tokenizers")
    out.mkdir(parents=True, exist_ok=True)
    tok.save(str(out / "desk-bpe.hf.json"))
    (out / "desk-bpe.json").write_text(json.dumps(native(tok), ensure_ascii=False, indent=1) + "\n")

    fixtures = Path("data/fixtures")
    fixtures.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)
    with (fixtures / "desk_reference.jsonl").open("w") as fh:
        for text in probe_texts(samples, rng):
            enc = tok.encode(text, add_special_tokens=False)
            fh.write(json.dumps({"text": text, "ids": enc.ids, "tokens": enc.tokens}, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
