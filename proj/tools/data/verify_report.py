#!/usr/bin/env python3
# Copyright 2026 The cfedit Authors
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
"""Recomputes an edit report from edits.jsonl without using cfedit.

Usage: verify_report.py EDITS_JSONL [EMBEDDINGS]

Prints the four averaged metrics in the layout of report.csv so that a stored
report can be cross-checked against an implementation written separately.
"""

import collections
import json
import math
import os
import re
import sys

SMOOTHING = 0.5


def tokenize(text):
    tokens = []
    for chunk in text.split():
        lead, core, trail = re.match(r"^(\W*)(.*?)(\W*)$", chunk).groups()
        tokens.extend(lead)
        if core:
            tokens.append(core)
        i = 0
        while i < len(trail):
            j = i + 1
            while j < len(trail) and trail[j] == trail[i]:
                j += 1
            tokens.append(trail[i:j])
            i = j
    return [t.lower() for t in tokens]


def levenshtein(a, b):
    row = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        prev, row[0] = row[:], i
        for j in range(1, len(b) + 1):
            row[j] = min(prev[j] + 1, row[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] != b[j - 1]))
    return row[len(b)]


def load_embeddings(path):
    table = {}
    with open(path) as f:
        next(f)
        for line in f:
            parts = line.split()
            table[parts[0].lower()] = [float(x) for x in parts[1:]]
    return table


def cosine(u, v):
    dot = sum(a * b for a, b in zip(u, v))
    return dot / math.sqrt(sum(a * a for a in u) * sum(b * b for b in v))


def one_side(table, src, dst):
    total, count = 0.0, 0
    for a in src:
        best, known = 0.0, a in table
        for b in dst:
            if a == b:
                best, known = 1.0, True
                break
            if a in table and b in table:
                best = max(best, min(1.0, max(0.0, cosine(table[a], table[b]))))
        if known:
            total += best
            count += 1
    return None if count == 0 else total / count


def closeness(table, original, edited):
    recall = one_side(table, original, edited)
    precision = one_side(table, edited, original)
    if recall is None or precision is None or recall + precision <= 0:
        return 0.0
    return 2 * recall * precision / (recall + precision)


class BigramModel:
    def __init__(self, sentences):
        self.vocab = {t for s in sentences for t in s} | {"</s>", "<unk>"}
        self.history = collections.Counter()
        self.pairs = collections.Counter()
        for s in sentences:
            prev = "<s>"
            for t in s + ["</s>"]:
                self.history[prev] += 1
                self.pairs[(prev, t)] += 1
                prev = t

    def loss(self, sentence):
        prev, total = "<s>", 0.0
        for t in sentence + ["</s>"]:
            t = t if t in self.vocab else "<unk>"
            p = (self.pairs[(prev, t)] + SMOOTHING) / (
                self.history[prev] + SMOOTHING * len(self.vocab))
            total -= math.log(p)
            prev = t
        return total / (len(sentence) + 1)


def main():
    root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    edits_path = sys.argv[1]
    emb_path = sys.argv[2] if len(sys.argv) > 2 else os.path.join(root, "data", "embeddings.txt")
    with open(edits_path) as f:
        rows = [json.loads(line) for line in f if line.strip() and not line.startswith("#")]
    table = load_embeddings(emb_path)
    originals = [tokenize(r["original_text"]) for r in rows]
    edited = [tokenize(r["edited_text"]) for r in rows]
    lm = BigramModel(originals)
    n = len(rows)
    fluency = sum(abs(1 - lm.loss(e) / lm.loss(o)) for o, e in zip(originals, edited)) / n
    close = sum(closeness(table, o, e) for o, e in zip(originals, edited)) / n
    flip = sum(1 for r in rows if r["flipped"]) / n
    minimality = sum(levenshtein(o, e) / len(o) for o, e in zip(originals, edited)) / n
    print("fluency,closeness,flip_rate,minimality")
    print("%.6f,%.6f,%.6f,%.6f" % (fluency, close, flip, minimality))


if __name__ == "__main__":
    main()
