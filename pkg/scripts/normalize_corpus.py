"""Normalize a Canterbury corpus text file.

alice29.txt ships in cantrbry.zip (https://corpus.canterbury.ac.nz/) and in
the brotli source distribution (``pip download brotli==1.1.0 --no-binary
:all: --no-deps``, file ``tests/testdata/alice29.txt``). Some copies carry
DOS line endings and a trailing 0x1A. This strips both, which yields the
148480-byte file used by the tests (sha256 99e53cbb...2bc961).

    python scripts/normalize_corpus.py alice29.txt tests/data/alice29.txt
"""

import argparse
import hashlib
from pathlib import Path


def normalize(data: bytes) -> bytes:
    return data.replace(b"\r", b"").rstrip(b"\x1a")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("src", type=Path)
    parser.add_argument("dst", type=Path)
    args = parser.parse_args()
    data = normalize(args.src.read_bytes())
    args.dst.write_bytes(data)
    print(f"{args.dst}: {len(data)} bytes, sha256 {hashlib.sha256(data).hexdigest()}")


if __name__ == "__main__":
    main()
