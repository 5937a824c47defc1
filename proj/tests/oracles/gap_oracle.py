# Copyright 2026 The cardgauge Authors
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

"""Brute-force reference for the word-gap report of the synthetic corpus.

Tokenizes every card with a straightforward re-statement of the filtering
rules, counts words with collections.Counter and splits the vocabularies
with set operations. Writes hf.tsv, zd.tsv and gap_report.json (with an
empty generated_at) into the given directory.

    python3 gap_oracle.py OUT_DIR [--cutoff BYTES] [--top-k K]
"""

import argparse
import json
import string
from collections import Counter
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
STOP_WORDS = Path(__file__).resolve().parent.parent.parent / "data" / "stopwords_en.txt"
MARKDOWN_SYMBOLS = set("#*_`>|[]")


def load_stop_words():
    return {w.strip().lower() for w in STOP_WORDS.read_text(encoding="utf-8").splitlines() if w.strip()}


def is_fence(line):
    indent = len(line) - len(line.lstrip(" "))
    body = line[indent:]
    return indent <= 3 and (body.startswith("```") or body.startswith("~~~"))


def clean_line(line):
    chars = list(line)
    for i, c in enumerate(chars):
        if c == "]" and i + 1 < len(chars) and chars[i + 1] == "(":
            close = line.find(")", i + 2)
            if close != -1:
                chars[i + 1] = " "
                chars[close] = " "
    out = []
    i = 0
    while i < len(chars):
        if chars[i] == "-":
            j = i
            while j < len(chars) and chars[j] == "-":
                j += 1
            out.extend([" "] * (j - i) if j - i >= 3 else chars[i:j])
            i = j
            continue
        out.append(" " if chars[i] in MARKDOWN_SYMBOLS else chars[i])
        i += 1
    return "".join(out)


def tokens(text, stop_words):
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    start = 0
    if lines and lines[0].rstrip(" \t") == "---":
        for k in range(1, len(lines)):
            if lines[k].rstrip(" \t") in ("---", "..."):
                start = k + 1
                break
    kept = [clean_line(l) for l in lines[start:] if not is_fence(l)]
    out = []
    for raw in "\n".join(kept).split():
        tok = raw.strip(string.punctuation).lower()
        if not tok or tok in stop_words or tok.count("x") > 2:
            continue
        out.append(tok)
    return out


def ordered(counter):
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0].encode("utf-8")))


def tsv(counter):
    return "".join(f"{w}\t{n}\n" for w, n in ordered(counter))


def listing(pairs):
    return [{"word": w, "frequency": n} for w, n in pairs]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out_dir")
    ap.add_argument("--cutoff", type=int, default=16384)
    ap.add_argument("--top-k", type=int, default=20)
    args = ap.parse_args()

    stop_words = load_stop_words()
    corpus = FIXTURES / "corpus"
    hf = Counter()
    for line in (corpus / "metadata.jsonl").read_text(encoding="utf-8").splitlines():
        model_id = json.loads(line)["model_id"]
        card = corpus / model_id / "README.md"
        if not card.is_file() or card.stat().st_size > args.cutoff:
            continue
        hf.update(tokens(card.read_text(encoding="utf-8"), stop_words))
    zd = Counter(tokens((FIXTURES / "zd_template.md").read_text(encoding="utf-8"), stop_words))

    common_words = set(zd) & set(hf)
    left_only_words = set(zd) - set(hf)
    right_only_words = set(hf) - set(zd)
    common = sorted(
        ({"word": w, "f_left": zd[w], "f_right": hf[w], "product": zd[w] * hf[w]} for w in common_words),
        key=lambda e: (-e["product"], e["word"].encode("utf-8")),
    )
    report = {
        "inputs": {"left": "ZD", "right": "HF"},
        "generated_at": "",
        "top_k": args.top_k,
        "common": common,
        "left_only": listing(ordered(Counter({w: zd[w] for w in left_only_words}))),
        "right_only_top": listing(ordered(Counter({w: hf[w] for w in right_only_words}))[: args.top_k]),
        "right_only_count": len(right_only_words),
        "left_top": listing(ordered(zd)[: args.top_k]),
        "right_top": listing(ordered(hf)[: args.top_k]),
    }
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "hf.tsv").write_text(tsv(hf), encoding="utf-8", newline="\n")
    (out / "zd.tsv").write_text(tsv(zd), encoding="utf-8", newline="\n")
    (out / "gap_report.json").write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8",
                                         newline="\n")


if __name__ == "__main__":
    main()
