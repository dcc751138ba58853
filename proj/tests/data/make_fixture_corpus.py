#!/usr/bin/env python3
# Copyright 2026 The forest-embed Authors. All Rights Reserved.
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

"""Generates the bundled 10k-sentence fixture corpus and small benchmark files.

Sentences come from a toy grammar over a few word classes, so words of the same
class share contexts. Output is fully determined by --seed.
"""

import argparse
import os
import random

ANIMALS = ["cat", "dog", "horse", "mouse", "bird", "wolf", "tiger", "sheep"]
FOODS = ["bread", "cheese", "apple", "rice", "soup", "fish", "cake", "meat"]
COLORS = ["red", "green", "blue", "yellow", "black", "white"]
COUNTRIES = {"france": "paris", "italy": "rome", "spain": "madrid",
             "japan": "tokyo", "egypt": "cairo", "peru": "lima"}
VERBS_EAT = ["eats", "likes", "wants", "finds"]
VERBS_GO = ["visits", "leaves", "reaches", "loves"]
PEOPLE = {"king": "queen", "man": "woman", "boy": "girl", "father": "mother"}
GOOD = ["good", "great", "happy", "nice", "lovely"]
BAD = ["bad", "awful", "sad", "poor", "dull"]


def sentence(rng):
    kind = rng.randrange(6)
    if kind == 0:
        return ["the", rng.choice(COLORS), rng.choice(ANIMALS), rng.choice(VERBS_EAT),
                "the", rng.choice(FOODS)]
    if kind == 1:
        country = rng.choice(list(COUNTRIES))
        return [COUNTRIES[country], "is", "the", "capital", "of", country]
    if kind == 2:
        country = rng.choice(list(COUNTRIES))
        return ["the", rng.choice(ANIMALS), rng.choice(VERBS_GO),
                rng.choice([country, COUNTRIES[country]]), "in", str(rng.randrange(1900, 2030))]
    if kind == 3:
        male = rng.choice(list(PEOPLE))
        who = rng.choice([male, PEOPLE[male]])
        pron = "he" if who in PEOPLE else "she"
        return ["the", who, "said", pron, rng.choice(VERBS_EAT), "the", rng.choice(FOODS)]
    if kind == 4:
        mood = rng.choice([GOOD, BAD])
        return ["the", rng.choice(FOODS), "was", rng.choice(mood), "and", rng.choice(mood)]
    return ["a", rng.choice(COLORS), rng.choice(ANIMALS), "and", "a", rng.choice(COLORS),
            rng.choice(ANIMALS)]


def write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line + "\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.dirname(os.path.abspath(__file__)))
    ap.add_argument("--sentences", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=20240601)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    write_lines(os.path.join(args.out, "fixture_corpus.txt"),
                (" ".join(sentence(rng)) for _ in range(args.sentences)))

    write_lines(os.path.join(args.out, "fixture_similarity.tsv"), [
        "# word1\tword2\tscore",
        "cat\tdog\t8.5", "cat\tmouse\t7.0", "bread\tcheese\t7.5", "apple\tcake\t7.0",
        "red\tblue\t8.0", "france\titaly\t8.0", "paris\trome\t7.5",
        "cat\tbread\t1.5", "red\tparis\t1.0", "dog\tjapan\t0.5", "cheese\tblue\t1.0",
        "king\tqueen\t8.0", "man\twoman\t8.0", "good\tgreat\t8.5", "bad\tawful\t8.5",
        "good\tcat\t1.0", "zebra\tcat\t7.0",
    ])

    analogy = [": capital-common-countries"]
    countries = list(COUNTRIES)
    for a in countries:
        for c in countries:
            if a != c:
                analogy.append(f"{a} {COUNTRIES[a]} {c} {COUNTRIES[c]}")
    analogy.append(": family")
    males = list(PEOPLE)
    for a in males:
        for c in males:
            if a != c:
                analogy.append(f"{a} {PEOPLE[a]} {c} {PEOPLE[c]}")
    write_lines(os.path.join(args.out, "fixture_analogy.txt"), analogy)

    completion = []
    for _ in range(40):
        country = rng.choice(countries)
        others = rng.sample([c for c in countries if c != country], 4)
        cands = others + [COUNTRIES[country]]
        rng.shuffle(cands)
        cands = [c if c not in COUNTRIES else COUNTRIES[c] for c in cands]
        completion.append(f"[BLANK] is the capital of {country}\t{'|'.join(cands)}\t"
                          f"{cands.index(COUNTRIES[country])}")
    write_lines(os.path.join(args.out, "fixture_completion.tsv"), completion)

    def review():
        label = rng.randrange(2)
        words = GOOD if label else BAD
        return f"{label}\tthe {rng.choice(FOODS)} was {rng.choice(words)} and {rng.choice(words)}"

    for split, n in (("train", 120), ("dev", 40), ("test", 40)):
        write_lines(os.path.join(args.out, f"fixture_sentiment_{split}.tsv"),
                    (review() for _ in range(n)))


if __name__ == "__main__":
    main()
