#!/usr/bin/env python3
"""Convert Planetoid-format citation datasets (cora/citeseer/pubmed) into the
directory container consumed by the library:

  meta.json     {"num_nodes", "num_features", "num_classes"}
  edges.tsv     "u<TAB>v" per undirected edge, 0-indexed
  features.bin  little-endian float32, row-major N x D
  labels.tsv    "node_id<TAB>label" (all-zero one-hot rows are left unlabeled)
  splits.json   {"train", "val", "test"} node id lists

Expects the raw ind.<name>.{x,y,tx,ty,allx,ally,graph,test.index} files. The
standard public split is preserved: train = first len(y) nodes, val = the
next 500, test = test.index. Citeseer's isolated test nodes (gaps in
test.index) get zero feature rows and stay unlabeled and unsplit.
"""

import argparse
import json
import pickle
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load_pickle(path: Path):
    with path.open("rb") as f:
        return pickle.load(f, encoding="latin1")


def convert(raw_dir: Path, name: str, out_dir: Path) -> None:
    files = {k: raw_dir / f"ind.{name}.{k}" for k in
             ("x", "y", "tx", "ty", "allx", "ally", "graph", "test.index")}
    for path in files.values():
        if not path.exists():
            sys.exit(f"missing raw file: {path}")

    y = load_pickle(files["y"])
    tx = load_pickle(files["tx"])
    ty = load_pickle(files["ty"])
    allx = load_pickle(files["allx"])
    ally = load_pickle(files["ally"])
    graph = load_pickle(files["graph"])
    test_idx = np.loadtxt(files["test.index"], dtype=np.int64)

    test_sorted = np.sort(test_idx)
    lo, hi = int(test_sorted[0]), int(test_sorted[-1])
    if hi - lo + 1 != len(test_sorted):
        # Gaps in test.index: nodes cited only by test documents. Give them
        # zero rows; they carry no label and belong to no split.
        full = hi - lo + 1
        tx_full = sp.lil_matrix((full, tx.shape[1]), dtype=np.float32)
        tx_full[test_sorted - lo, :] = tx
        tx = tx_full.tocsr()
        ty_full = np.zeros((full, ty.shape[1]), dtype=ty.dtype)
        ty_full[test_sorted - lo, :] = ty
        ty = ty_full

    features = sp.vstack((allx, tx)).tolil()
    features[test_idx, :] = features[np.arange(lo, lo + tx.shape[0]), :]
    features = np.asarray(features.todense(), dtype=np.float32)

    onehot = np.vstack((ally, ty))
    onehot[test_idx, :] = onehot[np.arange(lo, lo + ty.shape[0]), :]

    n, d = features.shape
    k = onehot.shape[1]
    labeled = onehot.sum(axis=1) > 0
    labels = onehot.argmax(axis=1)

    train_ids = list(range(y.shape[0]))
    val_ids = list(range(y.shape[0], y.shape[0] + 500))
    test_ids = [int(i) for i in test_sorted]

    edges = set()
    for u, nbrs in graph.items():
        for v in nbrs:
            if u == v:
                continue
            edges.add((min(int(u), int(v)), max(int(u), int(v))))

    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "meta.json").open("w") as f:
        json.dump({"num_nodes": n, "num_features": d, "num_classes": k}, f)
        f.write("\n")
    with (out_dir / "edges.tsv").open("w") as f:
        for u, v in sorted(edges):
            f.write(f"{u}\t{v}\n")
    features.tofile(out_dir / "features.bin")
    with (out_dir / "labels.tsv").open("w") as f:
        for i in range(n):
            if labeled[i]:
                f.write(f"{i}\t{int(labels[i])}\n")
    with (out_dir / "splits.json").open("w") as f:
        json.dump({"train": train_ids, "val": val_ids, "test": test_ids}, f)
        f.write("\n")

    print(f"{name}: nodes={n} features={d} classes={k} "
          f"edges={len(edges)} labeled={int(labeled.sum())} "
          f"splits={len(train_ids)}/{len(val_ids)}/{len(test_ids)} -> {out_dir}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--raw", type=Path, required=True,
                    help="directory holding the ind.<name>.* files")
    ap.add_argument("--name", required=True, choices=("cora", "citeseer", "pubmed"))
    ap.add_argument("--out", type=Path, required=True, help="output container directory")
    args = ap.parse_args()
    convert(args.raw, args.name, args.out)


if __name__ == "__main__":
    main()
