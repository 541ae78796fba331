"""Matrix file IO.

Two formats, chosen by extension:

* ``.csv`` -- comma-separated decimal rows, 17 significant digits
  (round-trips float64 exactly in value).
* ``.mtb`` -- binary: magic ``MTXB``, then rows and cols as 64-bit
  little-endian unsigned integers, then the row-major float64 payload.
  Round trip is bit exact.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError
from .linalg import as_matrix

_MAGIC = b"MTXB"


def write_matrix(path, m) -> None:
    m = as_matrix(m, "m")
    path = Path(path)
    if path.suffix == ".csv":
        np.savetxt(path, m, fmt="%.17g", delimiter=",")
    elif path.suffix == ".mtb":
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<QQ", m.shape[0], m.shape[1]))
            fh.write(np.ascontiguousarray(m, dtype="<f8").tobytes())
    else:
        raise FormatError(f"unknown matrix extension {path.suffix!r}")


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    if path.suffix == ".csv":
        try:
            m = np.loadtxt(path, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise FormatError(f"malformed csv matrix: {exc}") from exc
        return as_matrix(m, str(path))
    if path.suffix == ".mtb":
        blob = path.read_bytes()
        if blob[:4] != _MAGIC:
            raise FormatError(f"{path} does not start with the MTXB magic")
        if len(blob) < 20:
            raise FormatError(f"{path} is truncated")
        rows, cols = struct.unpack("<QQ", blob[4:20])
        expect = 20 + rows * cols * 8
        if len(blob) != expect:
            raise FormatError(
                f"{path} payload is {len(blob) - 20} bytes, expected {expect - 20}")
        data = np.frombuffer(blob, dtype="<f8", offset=20)
        return as_matrix(data.reshape(rows, cols), str(path))
    raise FormatError(f"unknown matrix extension {path.suffix!r}")
