#!/usr/bin/env python3
"""Convert the digits bundled in the npm `mnist` package (MIT) into IDX files.

The package ships 10000 MNIST digits as JSON arrays of intensities in [0, 1]
rounded to three decimals. Intensities are mapped back to bytes with
round(v * 255), which reproduces the original byte values.

usage: mnist_from_npm.py <package-dir> <out-dir>
"""
import gzip
import json
import struct
import sys
from pathlib import Path


def main() -> None:
    pkg, out = Path(sys.argv[1]), Path(sys.argv[2])
    images = bytearray()
    labels = bytearray()
    for digit in range(10):
        data = json.loads((pkg / "src" / "digits" / f"{digit}.json").read_text())["data"]
        assert len(data) % 784 == 0
        for v in data:
            images.append(max(0, min(255, round(v * 255))))
        labels.extend([digit] * (len(data) // 784))
    count = len(labels)
    out.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(out / "mnist10k-images-idx3-ubyte.gz", "wb", mtime=0) as fh:
        fh.write(struct.pack(">IIII", 0x803, count, 28, 28))
        fh.write(bytes(images))
    with gzip.GzipFile(out / "mnist10k-labels-idx1-ubyte.gz", "wb", mtime=0) as fh:
        fh.write(struct.pack(">II", 0x801, count))
        fh.write(bytes(labels))
    print(f"wrote {count} images to {out}")


if __name__ == "__main__":
    main()
