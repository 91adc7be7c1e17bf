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
"""Builds the beam-search oracle fixture under tests/fixtures/.

Outputs:
  beam_plan.tsv    source<TAB>target pairs taken from the toy antonym list
  beam_docs.jsonl  single review sentences containing 1 to 4 plan words

Both files are a pure function of the bundled data directory.
"""

import json
import os
import re
import sys

MAX_PLAN_WORDS = 4
NUM_DOCS = 60


def main():
    root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    data = os.path.join(root, "data")
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.join(root, "tests", "fixtures")

    plan = {}
    with open(os.path.join(data, "taxonomy.txt")) as f:
        for line in f:
            parts = line.split()
            if len(parts) == 3 and parts[0] == "ant" and parts[1] not in plan:
                plan[parts[1]] = parts[2]

    docs = []
    seen = set()
    with open(os.path.join(data, "sentiment.jsonl")) as f:
        for line in f:
            row = json.loads(line)
            for k, sentence in enumerate(re.split(r"(?<=[.!?])\s+", row["text"])):
                words = {w.lower() for w in re.findall(r"[A-Za-z']+", sentence)}
                hits = len(words & plan.keys())
                if 1 <= hits <= MAX_PLAN_WORDS and sentence not in seen:
                    seen.add(sentence)
                    docs.append({"id": "%s-s%d" % (row["id"], k), "text": sentence})
            if len(docs) >= NUM_DOCS:
                break

    with open(os.path.join(out_dir, "beam_plan.tsv"), "w") as f:
        for source, target in plan.items():
            f.write("%s\t%s\n" % (source, target))
    with open(os.path.join(out_dir, "beam_docs.jsonl"), "w") as f:
        for doc in docs[:NUM_DOCS]:
            f.write(json.dumps(doc) + "\n")


if __name__ == "__main__":
    main()
