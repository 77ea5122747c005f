#!/usr/bin/env python3
"""Assemble the public-domain evaluation corpus under data/corpus/.

Sources (fetched from the PyPI and npm registries):
  * PyPI "shakespeare" 0.6: Gutenberg texts of Shakespeare's plays and
    poems, Milton's English works, an 11th-edition Britannica article
  * npm "kjv" 1.0.0: King James Bible, 1769 text

One output file per document. Bible books become one document each, one
verse per paragraph.
"""
import argparse
import io
import json
import pathlib
import re
import subprocess
import tarfile
import tempfile
import urllib.request

NPM_KJV = "https://registry.npmjs.org/kjv/-/kjv-1.0.0.tgz"
MILTON_SKIP = {"poemata_gut.txt", "comus_gut.txt"}  # Latin; duplicated inside another volume


def fetch_shakespeare(tmp):
    subprocess.run(["pip", "download", "--no-deps", "--no-binary", ":all:", "shakespeare==0.6", "-d", tmp, "-q"],
                   check=True)
    with tarfile.open(pathlib.Path(tmp) / "shakespeare-0.6.tar.gz") as tf:
        tf.extractall(tmp)
    return pathlib.Path(tmp) / "shakespeare-0.6"


def fetch_kjv():
    data = urllib.request.urlopen(NPM_KJV).read()
    with tarfile.open(fileobj=io.BytesIO(data)) as tf:
        return json.load(tf.extractfile("package/json/verses-1769.json"))


def slug(s):
    return re.sub(r"[^a-z0-9]+", "_", s.lower()).strip("_")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with tempfile.TemporaryDirectory() as tmp:
        root = fetch_shakespeare(tmp)
        for p in sorted((root / "shksprdata" / "texts").glob("*_gut.txt")):
            (out / f"shakespeare_{p.stem.removesuffix('_gut')}.txt").write_bytes(p.read_bytes())
        for p in sorted((root / "miltondata" / "texts").glob("*_gut.txt")):
            if p.name not in MILTON_SKIP:
                (out / f"milton_{slug(p.stem.removesuffix('_gut'))}.txt").write_bytes(p.read_bytes())
        (out / "britannica_shakespeare.txt").write_bytes(
            (root / "shksprdata" / "ancillary" / "britannica-11th.txt").read_bytes())

    books = {}
    for ref, verse in fetch_kjv().items():
        book = ref.rsplit(" ", 1)[0]
        books.setdefault(book, []).append(re.sub(r"[\[\]]", "", verse).replace("# ", "").strip())
    for i, (book, verses) in enumerate(books.items()):
        (out / f"kjv_{i + 1:02d}_{slug(book)}.txt").write_text("\n\n".join(verses) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
