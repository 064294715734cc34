"""Delimited and JSON output with lossless floating-point round-trips.

Every float is rendered with 17 significant decimal digits, which is enough
to reconstruct the IEEE-754 double bit for bit.  All writers are
deterministic given their inputs, so reruns from the same configuration
produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

FLOAT_FORMAT = ".17g"


def format_float(x: float) -> str:
    return format(float(x), FLOAT_FORMAT)


def format_cell(value) -> str:
    """Render one table cell; complex values must be split by the caller."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    raise TypeError(f"cannot serialize table cell of type {type(value).__name__}")


def write_table(path, header: list[str], rows) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])


def read_table(path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader if row]


def _render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_render_json(v, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq)
        if flat:
            return "[" + ", ".join(_render_json(v, indent) for v in seq) + "]"
        items = ",\n".join(f"{pad}  {_render_json(v, indent + 1)}" for v in seq)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize JSON value of type {type(obj).__name__}")


def dump_json(obj, path) -> None:
    """Write JSON with floats at 17 significant digits, newline-terminated."""
    Path(path).write_text(_render_json(obj) + "\n")


def load_json(path):
    with Path(path).open() as fh:
        return json.load(fh)


def save_matrix_csv(mat: np.ndarray, real_path, imag_path) -> None:
    """Store a complex matrix as two row-major CSV files (real, imaginary)."""
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    np.savetxt(real_path, mat.real, fmt="%" + FLOAT_FORMAT, delimiter=",")
    np.savetxt(imag_path, mat.imag, fmt="%" + FLOAT_FORMAT, delimiter=",")


def load_matrix_csv(real_path, imag_path) -> np.ndarray:
    re = np.loadtxt(real_path, delimiter=",", ndmin=2)
    im = np.loadtxt(imag_path, delimiter=",", ndmin=2)
    if re.shape != im.shape:
        raise ValueError(f"real part {re.shape} and imaginary part {im.shape} differ in shape")
    return re + 1j * im


def save_matrix_json(mat: np.ndarray, path) -> None:
    """Store a complex matrix as {rows, cols, data: [re, im, ...]} row-major."""
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    data = np.empty(2 * mat.size)
    data[0::2] = mat.real.ravel()
    data[1::2] = mat.imag.ravel()
    dump_json({"rows": mat.shape[0], "cols": mat.shape[1], "data": data}, path)


def load_matrix_json(path) -> np.ndarray:
    desc = load_json(path)
    rows, cols = int(desc["rows"]), int(desc["cols"])
    data = np.asarray(desc["data"], dtype=float)
    if data.size != 2 * rows * cols:
        raise ValueError(f"descriptor claims {rows}x{cols} but carries {data.size} scalars")
    return (data[0::2] + 1j * data[1::2]).reshape(rows, cols)


def save_real_grid_csv(values: np.ndarray, axis: np.ndarray, path) -> None:
    """Store a real matrix with a shared axis as header row and leading column."""
    values = np.asarray(values, dtype=float)
    axis = np.asarray(axis, dtype=float)
    if values.shape != (axis.size, axis.size):
        raise ValueError(f"grid {values.shape} does not match axis of length {axis.size}")
    header = ["axis"] + [format_float(k) for k in axis]
    rows = ([axis[i]] + list(values[i]) for i in range(axis.size))
    write_table(path, header, rows)


def load_real_grid_csv(path) -> tuple[np.ndarray, np.ndarray]:
    header, rows = read_table(path)
    axis = np.array([float(x) for x in header[1:]])
    values = np.array([[float(x) for x in row[1:]] for row in rows])
    row_axis = np.array([float(row[0]) for row in rows])
    if values.shape != (axis.size, axis.size) or not np.array_equal(axis, row_axis):
        raise ValueError("grid file is not square with matching axes")
    return values, axis


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
