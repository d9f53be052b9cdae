import json
import random

import pytest


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    """A minimal local BERT checkpoint so tests never touch the network."""
    from transformers import BertConfig, BertModel, BertTokenizer

    path = tmp_path_factory.mktemp("tiny-bert")
    vocab = (
        ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
        + list("abcdefghijklmnopqrstuvwxyz0123456789")
        + ["##" + c for c in "abcdefghijklmnopqrstuvwxyz0123456789"]
        + ["hi", "en", "bus"]
    )
    (path / "vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(path / "vocab.txt"), model_max_length=64)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    model = BertModel(config)
    model.save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


def write_export(path, n, seed=0):
    """Export-contract JSONL: {"id","text_aug","mode","label"} per line."""
    rng = random.Random(seed)
    vocab = ["yeh", "bus", "hai", "the", "late", "kya", "movie", "acha"]
    with open(path, "w", encoding="utf-8") as f:
        for i in range(n):
            label = rng.choice(["pos", "neg"])
            words = [rng.choice(vocab) for _ in range(rng.randint(3, 7))]
            text = " ".join(f"{w} {rng.choice(['HI', 'EN'])}" for w in words)
            f.write(
                json.dumps(
                    {"id": str(i), "text_aug": text, "mode": "word-lang", "label": label}
                )
                + "\n"
            )


@pytest.fixture
def export_dir(tmp_path):
    write_export(tmp_path / "train.jsonl", 100, seed=1)
    write_export(tmp_path / "val.jsonl", 20, seed=2)
    write_export(tmp_path / "test.jsonl", 20, seed=3)
    return tmp_path
