"""Regenerates pmid_fields.csv, the bundled PMID to research-field fixture.

The PMIDs are synthetic; they only need to be unique positive integers.
"""
import csv
import random
from pathlib import Path

FIELDS = [
    "cardiology",
    "oncology",
    "neurology",
    "infectious disease",
    "endocrinology",
    "psychiatry",
    "public health",
]


def main() -> None:
    rng = random.Random(20191001)
    pmids = sorted(rng.sample(range(10_000_000, 35_000_000), 1000))
    out = Path(__file__).with_name("pmid_fields.csv")
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["pmid", "field"])
        for pmid in pmids:
            w.writerow([pmid, rng.choice(FIELDS)])


if __name__ == "__main__":
    main()
