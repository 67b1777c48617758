"""Text tables and run records.

Numbers are written with ``repr`` (shortest string that reads back to the
same double), so tables reproduce in-memory arrays exactly.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

__all__ = [
    "WIGNER_HEADER",
    "plane_tag",
    "read_marginal_table",
    "read_wigner_table",
    "write_json",
    "write_marginal_table",
    "write_plane",
    "write_table",
    "write_wigner_table",
    "file_digests",
]

WIGNER_HEADER = "q[length]\tp[momentum]\tw[1/action]"
MARGINAL_HEADERS = {"q": "q[length]\tdensity[1/length]", "p": "p[momentum]\tdensity[1/momentum]"}


def plane_tag(tau: float) -> str:
    return f"tau{tau:g}"


def _reprs(values) -> list:
    return [repr(v) for v in np.asarray(values, dtype=float).tolist()]


def write_table(path, header: str, columns) -> None:
    cols = [_reprs(c) for c in columns]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        fh.writelines("\t".join(row) + "\n" for row in zip(*cols))


def write_wigner_table(path, W) -> None:
    """Long-form ``q p w`` rows, ``q`` slowest."""
    qs = _reprs(W.q)
    ps = _reprs(W.p)
    ws = _reprs(W.w.ravel())
    n = len(ps)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(WIGNER_HEADER + "\n")
        for j, q in enumerate(qs):
            row = ws[j * n : (j + 1) * n]
            fh.writelines(f"{q}\t{p}\t{w}\n" for p, w in zip(ps, row))


def write_marginal_table(path, axis: str, coords, values) -> None:
    write_table(path, MARGINAL_HEADERS[axis], (coords, values))


def read_wigner_table(path):
    """``(q, p, w)`` with ``w`` as an ``n_q x n_p`` array."""
    data = np.loadtxt(path, delimiter="\t", skiprows=1)
    q = np.unique(data[:, 0])
    p = np.unique(data[:, 1])
    return q, p, data[:, 2].reshape(q.size, p.size)


def read_marginal_table(path):
    data = np.loadtxt(path, delimiter="\t", skiprows=1)
    return data[:, 0], data[:, 1]


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def write_plane(directory, plane) -> list:
    """Map and marginal tables for one observation plane; returns the file names."""
    tag = plane_tag(plane.tau)
    names = [f"wigner_{tag}.tsv", f"marginal_q_{tag}.tsv", f"marginal_p_{tag}.tsv"]
    W = plane.wigner
    write_wigner_table(os.path.join(directory, names[0]), W)
    write_marginal_table(os.path.join(directory, names[1]), "q", W.q, plane.marginal_q)
    write_marginal_table(os.path.join(directory, names[2]), "p", W.p, plane.marginal_p)
    return names


def file_digests(directory, names) -> dict:
    out = {}
    for name in sorted(names):
        with open(os.path.join(directory, name), "rb") as fh:
            out[name] = hashlib.sha256(fh.read()).hexdigest()
    return out
