"""Text formats: orbit CSV with a JSON sidecar, spectrum JSON, and sweep CSVs.

Every number is written with 36 significant digits, so reading a file back
reproduces the stored double-double values exactly.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .conjugacy import Spectrum
from .maps import Trajectory
from .wba import WeightKind
from .xprec import XReal, format_xreal, parse_xreal, unpack_real

FORMAT_VERSION = 1


def config_hash(config: dict) -> str:
    """sha256 of the canonical JSON form of a config mapping."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _fmt(hi: float, lo: float) -> str:
    return format_xreal(XReal.from_parts(hi, lo))


def _parse(text: str) -> tuple[float, float]:
    return parse_xreal(text).parts


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def _column_names(dim: int) -> list[str]:
    names = ["n"]
    for c in "xy"[:dim]:
        names += [f"{c}_re", f"{c}_im"]
    return names


def write_trajectory(path, traj: Trajectory, header: Sequence[str] = ()) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(_column_names(traj.dim))
        pts = traj.points
        for n in range(pts.shape[0]):
            row = pts[n]
            w.writerow([n] + [_fmt(row[j], row[j + 1]) for j in range(0, row.shape[0], 2)])
    meta = dict(traj.meta, format=FORMAT_VERSION, dim=traj.dim)
    sidecar_path(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def read_trajectory(path) -> Trajectory:
    path = Path(path)
    meta_file = sidecar_path(path)
    meta = json.loads(meta_file.read_text()) if meta_file.exists() else {}
    rows = []
    with path.open(newline="") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        head = next(reader)
        width = len(head) - 1
        if width not in (2, 4) or head[0] != "n":
            raise ValueError(f"{path}: not a trajectory file")
        for rec in reader:
            if len(rec) != width + 1:
                raise ValueError(f"{path}: malformed row {rec[:1]}")
            vals = []
            for t in rec[1:]:
                vals.extend(_parse(t))
            rows.append(vals)
    pts = np.array(rows, dtype=float).reshape(-1, 2 * width)
    meta.pop("format", None)
    meta.pop("dim", None)
    meta["N"] = pts.shape[0]
    return Trajectory(pts, meta)


def spectrum_to_dict(spec: Spectrum, extra: dict | None = None) -> dict:
    out = {
        "format": FORMAT_VERSION,
        "rho": str(spec.rho),
        "weight_kind": str(spec.weight_kind),
        "n_samples": spec.n_samples,
        "noise_floor": str(spec.noise_floor),
        "coefficients": [
            {"k": k, "re": _fmt(c[0], c[1]), "im": _fmt(c[2], c[3])}
            for k, c in enumerate(spec.coeffs)
        ],
    }
    if extra:
        out.update(extra)
    return out


def spectrum_from_dict(data: dict) -> Spectrum:
    coeffs = np.zeros((len(data["coefficients"]), 4))
    for i, c in enumerate(data["coefficients"]):
        if c["k"] != i:
            raise ValueError("coefficients must be listed for k = 0, 1, 2, ...")
        coeffs[i, 0:2] = _parse(c["re"])
        coeffs[i, 2:4] = _parse(c["im"])
    return Spectrum(
        parse_xreal(data["rho"]),
        coeffs,
        int(data["n_samples"]),
        WeightKind.parse(data["weight_kind"]),
        parse_xreal(data["noise_floor"]),
    )


def write_spectrum(path, spec: Spectrum, extra: dict | None = None) -> None:
    Path(path).write_text(json.dumps(spectrum_to_dict(spec, extra), indent=1) + "\n")


def read_spectrum(path) -> Spectrum:
    return spectrum_from_dict(json.loads(Path(path).read_text()))


def format_cell(v) -> str:
    """36-digit text for extended values, plain text for everything else."""
    if isinstance(v, XReal):
        return format_xreal(v)
    if isinstance(v, np.ndarray) and v.shape == (2,):
        return format_xreal(unpack_real(v))
    return str(v)


def write_table(
    path, product: str, cfg_hash: str, columns: Sequence[str], rows: Iterable[Sequence]
) -> None:
    """CSV with a header naming the data product and the config hash."""
    with Path(path).open("w", newline="") as fh:
        fh.write(f"# product: {product}\n")
        fh.write(f"# config-sha256: {cfg_hash}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([format_cell(v) for v in row])


def read_table(path) -> tuple[dict, list[str], list[list[str]]]:
    """(header fields, column names, rows) of a file written by write_table."""
    header = {}
    body = []
    with Path(path).open(newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].partition(":")
                header[key.strip()] = val.strip()
            else:
                body.append(line)
    rows = list(csv.reader(body))
    return header, rows[0], rows[1:]
