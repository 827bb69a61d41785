#!/usr/bin/env python3
#
# Copyright 2026 The intentkit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""Converts a MASSIVE locale file (e.g. data/en-US.jsonl) to an intentkit
dataset directory: intents.json, train.jsonl, test.jsonl.

The dev partition is dropped. MASSIVE ships no intent descriptions; pass
--descriptions with a {"intent_name": "description"} JSON object, otherwise
the name with underscores turned into spaces is used.
"""

import argparse
import json
import pathlib
import sys


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("source", type=pathlib.Path, help="MASSIVE <locale>.jsonl")
    parser.add_argument("out", type=pathlib.Path, help="output dataset directory")
    parser.add_argument("--descriptions", type=pathlib.Path,
                        help="JSON object mapping intent name to description")
    args = parser.parse_args(argv)

    descriptions = {}
    if args.descriptions:
        descriptions = json.loads(args.descriptions.read_text(encoding="utf-8"))

    splits = {"train": [], "test": []}
    names = set()
    with args.source.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                partition, intent, text = (record["partition"], record["intent"],
                                           record["utt"])
            except (json.JSONDecodeError, KeyError) as e:
                sys.exit(f"{args.source}:{lineno}: bad record: {e}")
            if partition not in splits:
                continue
            names.add(intent)
            splits[partition].append({"text": text.strip(), "label": intent})

    args.out.mkdir(parents=True, exist_ok=True)
    intents = [{"name": n, "description": descriptions.get(n, n.replace("_", " "))}
               for n in sorted(names)]
    (args.out / "intents.json").write_text(
        json.dumps(intents, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    for split, rows in splits.items():
        with (args.out / f"{split}.jsonl").open("w", encoding="utf-8", newline="\n") as f:
            for row in rows:
                f.write(json.dumps(row, ensure_ascii=False) + "\n")

    print(f"{len(intents)} intents, {len(splits['train'])} train, "
          f"{len(splits['test'])} test -> {args.out}")


if __name__ == "__main__":
    main()
