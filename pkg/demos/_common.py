"""Shared demo setup: use the real dataset when READMIT_DATA points at it,
otherwise generate a synthetic sample in the same format."""

import os
import tempfile

from readmit import load_dataset
from readmit.synthetic import write_dataset_csv


def demo_rows(n_synthetic=8000, seed=2024):
    directory = os.environ.get("READMIT_DATA", "data")
    real = os.path.join(directory, "diabetic_data.csv")
    if os.path.exists(real):
        print(f"using the real encounter file: {real}")
        return load_dataset(real)
    path = os.path.join(tempfile.gettempdir(), f"readmit_demo_{n_synthetic}_{seed}.csv")
    if not os.path.exists(path):
        write_dataset_csv(path, n_synthetic, seed=seed)
    print(f"using a synthetic sample ({n_synthetic} rows): {path}")
    print("(set READMIT_DATA to a directory holding diabetic_data.csv for the real thing)")
    return load_dataset(path)
