#!/usr/bin/env python3
# Copyright 2026 The taxoprompt Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the tiny transformer fixtures and their reference outputs.

The C++ inference code is checked against PyTorch/transformers running the
same seeded weights. Outputs are frozen into expected_*.json so the C++ test
suite never needs Python at test time.

Usage: python3 tests/data/generate_fixtures.py
"""

import json
import os

import torch
from tokenizers import AddedToken, ByteLevelBPETokenizer
from transformers import (BertConfig, BertForMaskedLM, BertTokenizer,
                          GPT2Config, GPT2LMHeadModel, GPT2Tokenizer,
                          RobertaConfig, RobertaForMaskedLM,
                          RobertaTokenizer)

HERE = os.path.dirname(os.path.abspath(__file__))
MODELS = os.path.join(HERE, "models")

SMOKE_EDGES = [
    ("trout", "fish"), ("salmon", "fish"), ("rainbow trout", "fish"),
    ("fish", "animal"), ("bird", "animal"), ("mammal", "animal"),
    ("eagle", "bird"), ("owl", "bird"), ("dog", "mammal"), ("cat", "mammal"),
    ("tree", "plant"), ("flower", "plant"), ("oak", "tree"), ("pine", "tree"),
    ("rose", "flower"), ("tulip", "flower"), ("car", "vehicle"),
]

TERM_WORDS = [
    "animal", "fish", "trout", "salmon", "bird", "eagle", "owl", "mammal",
    "dog", "cat", "plant", "tree", "oak", "pine", "flower", "rose", "tulip",
    "vehicle", "car", "science", "physics", "chemistry", "biology", "tool",
    "hammer", "water", "river", "forest", "pollution", "energy", "food",
    "bread", "fruit", "apple",
]
FUNCTION_WORDS = [
    "is", "a", "an", "the", "type", "of", "kind", "form", "one", "more",
    "general", "than", "specific", "and", "or", "in", "to", "it", "this",
    "that", "was", "with", "for", "on", "as", "by", "rain",
]
PIECES = ["##bow", "##s", "##ing", "##ed", "##er"]
PUNCT = [".", ",", "'", "-", "1", "2"]

TEMPLATES = [
    "{x} is a type of {y}", "{y} is more general than {x}",
    "{x} is more specific than {y}", "{x} is a kind of {y}",
    "{x} is a form of {y}", "the {x} is one form of {y}",
]


def corpus():
    lines = []
    words = TERM_WORDS + ["rainbow trout", "sea water"]
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            if i != j and (i + j) % 5 == 0:
                lines.append(TEMPLATES[(i * 7 + j) % len(TEMPLATES)].format(
                    x=a, y=b) + ".")
    return lines


def save_json(path, obj):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, indent=1, sort_keys=True)
        f.write("\n")


def log_softmax(logits):
    return torch.log_softmax(logits.double(), dim=-1)


def masked_pll(model, inner_ids, cls_id, sep_id, mask_id):
    per_token = []
    for i in range(len(inner_ids)):
        ids = list(inner_ids)
        ids[i] = mask_id
        x = torch.tensor([[cls_id] + ids + [sep_id]])
        with torch.no_grad():
            out = model(input_ids=x).logits[0, i + 1]
        per_token.append(float(log_softmax(out)[inner_ids[i]]))
    return per_token


def mask_fill(model, inner_ids, mask_pos, cls_id, sep_id):
    x = torch.tensor([[cls_id] + inner_ids + [sep_id]])
    with torch.no_grad():
        out = model(input_ids=x).logits[0, mask_pos + 1]
    return [float(v) for v in log_softmax(out)]


def restricted_top1(model, tok, term_ids, cls_id, sep_id, mask_lit):
    """Brute force over every single-token term, self excluded."""
    edges = []
    terms = sorted({t for e in SMOKE_EDGES for t in e})
    for t in terms:
        text = f"{t} is a type of {mask_lit}"
        ids = tok(text, add_special_tokens=False)["input_ids"]
        pos = ids.index(tok.mask_token_id)
        dist = mask_fill(model, ids, pos, cls_id, sep_id)
        best = None
        for cand, cid in sorted(term_ids.items()):
            if cand == t:
                continue
            key = (-dist[cid], cand)
            if best is None or key < best[0]:
                best = (key, cand)
        gaps = sorted(dist[cid] for c, cid in term_ids.items() if c != t)
        edges.append({"hyponym": t, "hypernym": best[1],
                      "margin": gaps[-1] - gaps[-2]})
    return edges


def build_bert():
    out_dir = os.path.join(MODELS, "tiny-bert")
    os.makedirs(out_dir, exist_ok=True)
    vocab = (["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + PUNCT +
             FUNCTION_WORDS + TERM_WORDS + PIECES)
    with open(os.path.join(out_dir, "vocab.txt"), "w") as f:
        f.write("\n".join(vocab) + "\n")
    torch.manual_seed(0)
    config = BertConfig(vocab_size=len(vocab), hidden_size=32,
                        num_hidden_layers=2, num_attention_heads=4,
                        intermediate_size=64, max_position_embeddings=64,
                        initializer_range=0.5)
    model = BertForMaskedLM(config).eval()
    model.save_pretrained(out_dir, safe_serialization=True)
    tok = BertTokenizer(os.path.join(out_dir, "vocab.txt"), do_lower_case=True)

    texts = ["trout is a type of fish", "Rainbow Trout, is a Fish.",
             "zebra is a type of animal", "oak is a type of [MASK]",
             "the rainbows were raining", "  physics   is\ta kind of science "]
    tokenize = [{"text": s, "ids": tok(s, add_special_tokens=False)["input_ids"]}
                for s in texts]
    cls_id, sep_id, mask_id = (tok.cls_token_id, tok.sep_token_id,
                               tok.mask_token_id)
    fills = []
    for s in ["trout is a type of [MASK]", "[MASK] is more general than oak"]:
        ids = tok(s, add_special_tokens=False)["input_ids"]
        fills.append({"text": s, "logprobs": mask_fill(
            model, ids, ids.index(mask_id), cls_id, sep_id)})
    plls = []
    for s in ["trout is a type of fish", "fish", "rainbow trout is a kind of fish."]:
        ids = tok(s, add_special_tokens=False)["input_ids"]
        per = masked_pll(model, ids, cls_id, sep_id, mask_id)
        plls.append({"text": s, "token_logprobs": per, "score": sum(per)})
    term_ids = {}
    for t in sorted({t for e in SMOKE_EDGES for t in e}):
        ids = tok(t, add_special_tokens=False)["input_ids"]
        if len(ids) == 1:
            term_ids[t] = ids[0]
    save_json(os.path.join(MODELS, "expected_bert.json"), {
        "tokenize": tokenize, "mask_fill": fills, "pll": plls,
        "restricted_type_top1": restricted_top1(model, tok, term_ids, cls_id,
                                                sep_id, "[MASK]"),
    })


def train_bpe(out_dir, specials):
    bpe = ByteLevelBPETokenizer()
    bpe.train_from_iterator(corpus(), vocab_size=420, min_frequency=1,
                            special_tokens=specials)
    bpe.save_model(out_dir)


def build_roberta():
    out_dir = os.path.join(MODELS, "tiny-roberta")
    os.makedirs(out_dir, exist_ok=True)
    train_bpe(out_dir, ["<s>", "<pad>", "</s>", "<unk>", "<mask>"])
    tok = RobertaTokenizer(vocab=os.path.join(out_dir, "vocab.json"),
                           merges=os.path.join(out_dir, "merges.txt"),
                           mask_token=AddedToken("<mask>", lstrip=True))
    torch.manual_seed(1)
    config = RobertaConfig(vocab_size=len(tok), hidden_size=32,
                           num_hidden_layers=2, num_attention_heads=4,
                           intermediate_size=64, max_position_embeddings=66,
                           type_vocab_size=1, pad_token_id=1,
                           bos_token_id=0, eos_token_id=2,
                           initializer_range=0.5)
    model = RobertaForMaskedLM(config).eval()
    model.save_pretrained(out_dir, safe_serialization=True)

    texts = ["trout is a type of fish", "Rainbow trout is a fish.",
             "oak is a type of <mask>", "zebra's 12 stripes!!  ok",
             "physics is a kind of science"]
    tokenize = [{"text": s, "ids": tok(s, add_special_tokens=False)["input_ids"]}
                for s in texts]
    cls_id, sep_id, mask_id = tok.cls_token_id, tok.sep_token_id, tok.mask_token_id
    fills = []
    for s in ["trout is a type of <mask>"]:
        ids = tok(s, add_special_tokens=False)["input_ids"]
        fills.append({"text": s, "logprobs": mask_fill(
            model, ids, ids.index(mask_id), cls_id, sep_id)})
    plls = []
    for s in ["trout is a type of fish", "oak is a kind of tree."]:
        ids = tok(s, add_special_tokens=False)["input_ids"]
        per = masked_pll(model, ids, cls_id, sep_id, mask_id)
        plls.append({"text": s, "token_logprobs": per, "score": sum(per)})
    save_json(os.path.join(MODELS, "expected_roberta.json"), {
        "tokenize": tokenize, "mask_fill": fills, "pll": plls})


def build_gpt2():
    out_dir = os.path.join(MODELS, "tiny-gpt2")
    os.makedirs(out_dir, exist_ok=True)
    train_bpe(out_dir, ["<|endoftext|>"])
    tok = GPT2Tokenizer(vocab=os.path.join(out_dir, "vocab.json"),
                        merges=os.path.join(out_dir, "merges.txt"))
    torch.manual_seed(2)
    config = GPT2Config(vocab_size=len(tok), n_embd=32, n_layer=2, n_head=4,
                        n_positions=64, bos_token_id=tok.bos_token_id,
                        eos_token_id=tok.eos_token_id, initializer_range=0.5)
    model = GPT2LMHeadModel(config).eval()
    model.save_pretrained(out_dir, safe_serialization=True)

    texts = ["trout is a type of fish", "Rainbow trout is a fish.",
             "zebra's 12 stripes!!  ok"]
    tokenize = [{"text": s, "ids": tok(s)["input_ids"]} for s in texts]
    causal = []
    for s in ["trout is a type of fish", "oak is a kind of tree.", "fish"]:
        ids = tok(s)["input_ids"]
        x = torch.tensor([[tok.bos_token_id] + ids])
        with torch.no_grad():
            logits = model(input_ids=x).logits[0]
        per = [float(log_softmax(logits[i])[ids[i]]) for i in range(len(ids))]
        causal.append({"text": s, "token_logprobs": per, "score": sum(per),
                       "first_token_logprobs": [
                           float(v) for v in log_softmax(logits[0])]})
    save_json(os.path.join(MODELS, "expected_gpt2.json"), {
        "tokenize": tokenize, "causal": causal})


def write_smoke():
    smoke = os.path.join(HERE, "smoke")
    os.makedirs(smoke, exist_ok=True)
    terms = []
    for a, b in SMOKE_EDGES:
        for t in (a, b):
            if t not in terms:
                terms.append(t)
    with open(os.path.join(smoke, "terms.txt"), "w") as f:
        f.write("\n".join(terms) + "\n")
    with open(os.path.join(smoke, "gold.tsv"), "w") as f:
        for i, (a, b) in enumerate(SMOKE_EDGES):
            f.write(f"{i + 1}\t{a}\t{b}\n")


if __name__ == "__main__":
    torch.use_deterministic_algorithms(True)
    write_smoke()
    build_bert()
    build_roberta()
    build_gpt2()
