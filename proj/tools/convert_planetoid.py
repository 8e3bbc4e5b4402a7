# Copyright 2026 The GCN-JEM Authors.
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

"""Convert Planetoid citation data (ind.<name>.* files) to the CSV layout
read by gcnjem: edges.csv, features.csv, labels.csv, split.csv.

Usage: convert_planetoid.py RAW_DIR NAME OUT_DIR

The split follows the usual Planetoid convention: the first len(y) nodes
train, the next 500 validate, and the nodes listed in ind.<name>.test.index
test. Test-range nodes missing from the index (Citeseer) get zero features
and label -1.
"""

import argparse
import os
import pickle
import sys

import numpy as np
import scipy.sparse as sp


def _load(raw_dir, name, part):
    with open(os.path.join(raw_dir, f"ind.{name}.{part}"), "rb") as f:
        return pickle.load(f, encoding="latin1")


def _dense(m):
    return m.toarray() if sp.issparse(m) else np.asarray(m)


def convert(raw_dir, name, out_dir):
    x, y, tx, ty, allx, ally, graph = (
        _load(raw_dir, name, p) for p in ("x", "y", "tx", "ty", "allx", "ally", "graph"))
    with open(os.path.join(raw_dir, f"ind.{name}.test.index")) as f:
        test_index = [int(line) for line in f if line.strip()]

    allx, tx = _dense(allx), _dense(tx)
    ally, ty = np.asarray(ally), np.asarray(ty)
    n = max(allx.shape[0], max(test_index) + 1, max(graph) + 1)
    features = np.zeros((n, allx.shape[1]))
    labels = np.full(n, -1, dtype=np.int64)

    features[: allx.shape[0]] = allx
    labeled = ally.sum(axis=1) > 0
    labels[: ally.shape[0]][labeled] = ally.argmax(axis=1)[labeled]
    for row, node in enumerate(test_index):
        features[node] = tx[row]
        if ty[row].sum() > 0:
            labels[node] = ty[row].argmax()

    split = np.array(["none"] * n, dtype=object)
    n_train = np.asarray(y).shape[0]
    split[:n_train] = "train"
    split[n_train:n_train + 500] = "val"
    split[sorted(test_index)] = "test"
    orphans = [i for i in range(n) if split[i] != "none" and labels[i] < 0]
    if orphans:
        sys.exit(f"split nodes without labels: {orphans[:10]}")

    edges = set()
    for src, neighbours in graph.items():
        for dst in neighbours:
            if src != dst:
                edges.add((min(src, dst), max(src, dst)))

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "edges.csv"), "w", newline="\n") as f:
        f.writelines(f"{i},{j}\n" for i, j in sorted(edges))
    with open(os.path.join(out_dir, "features.csv"), "w", newline="\n") as f:
        for row in features:
            f.write(",".join(repr(float(v)) if v != int(v) else str(int(v)) for v in row) + "\n")
    with open(os.path.join(out_dir, "labels.csv"), "w", newline="\n") as f:
        f.writelines(f"{v}\n" for v in labels)
    with open(os.path.join(out_dir, "split.csv"), "w", newline="\n") as f:
        f.writelines(f"{s}\n" for s in split)
    return {
        "nodes": n,
        "edges": len(edges),
        "features": features.shape[1],
        "classes": int(labels.max()) + 1,
        "train": int((split == "train").sum()),
        "val": int((split == "val").sum()),
        "test": int((split == "test").sum()),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("raw_dir")
    parser.add_argument("name", help="cora, citeseer or pubmed")
    parser.add_argument("out_dir")
    args = parser.parse_args()
    stats = convert(args.raw_dir, args.name, args.out_dir)
    print(" ".join(f"{k}={v}" for k, v in stats.items()))


if __name__ == "__main__":
    main()
