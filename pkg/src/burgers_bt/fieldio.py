"""Field snapshots on disk.

CSV: two comment lines (``# nx,ny,Lx,Ly,t`` and their values), then ``nx``
rows of ``ny`` values; every float is written with ``repr`` so re-reading is
exact.

Binary: a 32-byte little-endian header followed by nx*ny float64 values in
row-major (``values[ix, iy]``) order::

    offset  size  field
    0       4     magic b"BURG"
    4       1     format version (1)
    5       1     log2(nx)
    6       1     log2(ny)
    7       1     reserved (0)
    8       8     Lx  (float64)
    16      8     Ly  (float64)
    24      8     t   (float64)

Grid sizes are powers of two, so their base-2 logarithms fit a byte.  Neither
format stores the box's t0; a re-read field gets ``t0 = t``.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .heat_ivp import DomainBox, ScalarField2D

MAGIC = b"BURG"
VERSION = 1
_HEADER = struct.Struct("<4sBBBx3d")
assert _HEADER.size == 32


def write_binary(field: ScalarField2D, path) -> Path:
    path = Path(path)
    box = field.box
    header = _HEADER.pack(MAGIC, VERSION, box.nx.bit_length() - 1, box.ny.bit_length() - 1,
                          float(box.Lx), float(box.Ly), float(field.time))
    data = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    path.write_bytes(header + data)
    return path


def read_binary(path) -> ScalarField2D:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: file shorter than header")
    magic, version, lx, ly, Lx, Ly, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    nx, ny = 1 << lx, 1 << ly
    body = raw[_HEADER.size:]
    if len(body) != 8 * nx * ny:
        raise ValueError(f"{path}: expected {8 * nx * ny} data bytes, found {len(body)}")
    values = np.frombuffer(body, dtype="<f8").reshape(nx, ny).astype(float)
    return ScalarField2D(values, DomainBox(Lx, Ly, nx, ny, t), t)


def write_csv(field: ScalarField2D, path) -> Path:
    path = Path(path)
    box = field.box
    lines = ["# nx,ny,Lx,Ly,t",
             "# " + ",".join([str(box.nx), str(box.ny), repr(float(box.Lx)), repr(float(box.Ly)),
                              repr(float(field.time))])]
    lines += [",".join(repr(float(v)) for v in row) for row in field.values]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> ScalarField2D:
    lines = Path(path).read_text().splitlines()
    if len(lines) < 2 or not lines[1].startswith("#"):
        raise ValueError(f"{path}: missing header")
    nx, ny, Lx, Ly, t = lines[1].lstrip("# ").split(",")
    nx, ny = int(nx), int(ny)
    rows = [[float(v) for v in line.split(",")] for line in lines[2:] if line.strip()]
    values = np.array(rows, dtype=float)
    if values.shape != (nx, ny):
        raise ValueError(f"{path}: header says {nx}x{ny}, data is {values.shape}")
    return ScalarField2D(values, DomainBox(float(Lx), float(Ly), nx, ny, float(t)), float(t))


WRITERS = {"csv": (write_csv, ".csv"), "bin": (write_binary, ".bin")}
READERS = {".csv": read_csv, ".bin": read_binary}


def write_field(field: ScalarField2D, directory, name: str, fmt: str = "bin") -> Path:
    writer, ext = WRITERS[fmt]
    return writer(field, Path(directory) / f"{name}{ext}")


def read_field(path) -> ScalarField2D:
    path = Path(path)
    return READERS[path.suffix](path)
