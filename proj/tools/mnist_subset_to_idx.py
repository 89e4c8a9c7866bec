#!/usr/bin/env python3
"""Convert the 5000-sample MNIST subset shipped in the mlxtend wheel into
gzipped IDX files. The subset is sorted by class with 500 digits each; the
first 400 of every class go to train, the remaining 100 to test, and both
splits are interleaved round-robin over classes.

usage: mnist_subset_to_idx.py <mlxtend-*.whl> <out-dir>
"""
import gzip
import os
import struct
import sys
import zipfile

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"
TRAIN_PER_CLASS = 400


def write_idx(path, images, labels):
    n = len(labels)
    with gzip.GzipFile(path + "-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 2051, n, 28, 28))
        for img in images:
            f.write(bytes(img))
    with gzip.GzipFile(path + "-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 2049, n))
        f.write(bytes(labels))


def main():
    wheel, out = sys.argv[1], sys.argv[2]
    rows = gzip.decompress(zipfile.ZipFile(wheel).read(MEMBER)).decode().split()
    images, labels = [], []
    for row in rows:
        vals = [int(float(v)) for v in row.split(",")]
        images.append(vals[:784])
        labels.append(vals[784])
    by_class = {}
    for img, lab in zip(images, labels):
        by_class.setdefault(lab, []).append(img)
    classes = sorted(by_class)
    os.makedirs(out, exist_ok=True)
    for name, lo, hi in (("train", 0, TRAIN_PER_CLASS), ("t10k", TRAIN_PER_CLASS, None)):
        split = {c: by_class[c][lo:hi] for c in classes}
        n = min(len(v) for v in split.values())
        order = [(split[c][i], c) for i in range(n) for c in classes]
        write_idx(os.path.join(out, name), [o[0] for o in order], [o[1] for o in order])


if __name__ == "__main__":
    main()
