#!/usr/bin/env python3
"""Regenerates tests/fixtures. Output is deterministic."""

import json
import os
import random
import sys

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "tests", "fixtures")


def dump(path, obj):
    with open(path, "w", newline="\n") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def write_text(path, text):
    with open(path, "w", newline="\n") as f:
        f.write(text)


def edus(sents, paras=None):
    paras = paras or [0] * len(sents)
    return [{"id": i + 1, "sent": s, "para": p} for i, (s, p) in enumerate(zip(sents, paras))]


def softmax_rows(rng, n):
    rows = []
    for _ in range(n):
        raw = [rng.random() ** 3 for _ in range(n)]
        total = sum(raw)
        rows.append([round(v / total, 6) for v in raw])
    return rows


def random_binary(rng, lo, hi):
    """Random labeled binary tree over [lo, hi] as nested tuples."""
    if lo == hi:
        return lo
    k = rng.randint(lo, hi - 1)
    label = rng.choice(["NN", "NS", "SN"])
    return (label, random_binary(rng, lo, k), random_binary(rng, k + 1, hi))


def bracket(t):
    if isinstance(t, int):
        return "(leaf %d)" % t
    return "(%s %s %s)" % (t[0], bracket(t[1]), bracket(t[2]))


def to_dep(t, heads):
    if isinstance(t, int):
        return t
    left = to_dep(t[1], heads)
    right = to_dep(t[2], heads)
    if t[0] == "SN":
        heads[left] = right
        return right
    heads[right] = left
    return left


def dep_block(doc_id, t, n):
    heads = {}
    root = to_dep(t, heads)
    heads[root] = 0
    lines = ["# " + doc_id] + ["%d\t%d" % (d, heads[d]) for d in range(1, n + 1)]
    return "\n".join(lines) + "\n\n"


def main():
    os.makedirs(os.path.join(ROOT, "corpus"), exist_ok=True)

    dump(os.path.join(ROOT, "running.json"), {
        "doc_id": "running",
        "edus": edus([0, 0]),
        "layers": [{"layer": 0, "heads": [[[0.1, 0.9], [0.8, 0.2]]]}],
    })
    dump(os.path.join(ROOT, "two_sentences.json"), {
        "doc_id": "two_sentences",
        "edus": edus([0, 0, 1]),
        "layers": [{"layer": 0, "heads": [[[0.2, 0.3, 0.5], [0.1, 0.1, 0.8], [0.6, 0.3, 0.1]]]}],
    })
    uniform = [[0.5, 0.5], [0.5, 0.5]]
    dump(os.path.join(ROOT, "eight_heads.json"), {
        "doc_id": "eight_heads",
        "edus": edus([0, 0]),
        "layers": [{"layer": 0, "heads": [uniform] * 8}],
    })
    write_text(os.path.join(ROOT, "malformed.json"), '{"doc_id": "broken", "edus": [\n')

    rng = random.Random(20240607)
    const_lines, dep_blocks = [], []
    for k in range(5):
        n = rng.randint(4, 9)
        cuts = sorted(rng.sample(range(1, n), min(2, n - 1)))
        sents = [sum(1 for c in cuts if i >= c) for i in range(n)]
        doc_id = "doc%02d" % k
        dump(os.path.join(ROOT, "corpus", doc_id + ".json"), {
            "doc_id": doc_id,
            "edus": edus(sents),
            "layers": [{"layer": l, "heads": [softmax_rows(rng, n) for _ in range(2)]}
                       for l in range(2)],
        })
        tree = random_binary(rng, 1, n)
        const_lines.append("# %s\n%s\n" % (doc_id, bracket(tree)))
        dep_blocks.append(dep_block(doc_id, tree, n))
    write_text(os.path.join(ROOT, "gold_const.txt"), "".join(const_lines))
    write_text(os.path.join(ROOT, "gold_dep.txt"), "".join(dep_blocks))

    write_text(os.path.join(ROOT, "star.dep"), "# star\n1\t0\n2\t1\n3\t1\n4\t1\n\n")
    write_text(os.path.join(ROOT, "chains.dep"),
               "# chain3\n1\t0\n2\t1\n3\t2\n\n# chain4\n1\t0\n2\t1\n3\t2\n4\t3\n\n")
    write_text(os.path.join(ROOT, "locality_gold.dep"), "# star\n1\t0\n2\t1\n3\t2\n4\t3\n\n")
    write_text(os.path.join(ROOT, "pair_pred.txt"), "# d\n(?? (leaf 1) (?? (leaf 2) (leaf 3)))\n")
    write_text(os.path.join(ROOT, "pair_gold.txt"), "# d\n(NS (NN (leaf 1) (leaf 2)) (leaf 3))\n")
    write_text(os.path.join(ROOT, "ternary.txt"),
               "# t\n(NSS (leaf 1) (leaf 2) (leaf 3))\n")
    write_text(os.path.join(ROOT, "ns_pair.txt"), "# p\n(NS (leaf 1) (leaf 2))\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
