"""Bit-exact binary snapshots of field series, plus 1-D CSV export.

Format: one text header line

    TCONE1 dim=<d> n=<N1,...> dtau=<..> levels=<..> endian=little fp=64
           ds=<..> label=<..> times=<t0,t1,...> [config=<hash>] [scheme=<..>]

(single line; shown wrapped), a newline, then raw little-endian float64
payload in level-major, row-major order.  ``ds``, ``label`` and ``times``
carry the state a lossless round trip needs beyond the fixed prefix; float
fields are written with shortest-roundtrip reprs so read(write(s)) == s
bit-exactly.
"""

from __future__ import annotations

import numpy as np

from .fields import FieldSeries, GridSpec

MAGIC = "TCONE1"


class SnapshotError(ValueError):
    """Base class for snapshot format failures."""


class HeaderError(SnapshotError):
    """Missing magic, missing key, or unparseable header field."""


class ShapeMismatchError(SnapshotError):
    """Declared shape inconsistent with itself or with the payload size."""


class TruncatedPayloadError(SnapshotError):
    """Payload shorter than the header-declared extent."""


def _fmt(x: float) -> str:
    return repr(float(x))


def write_field(
    series: FieldSeries,
    path,
    config_hash: str | None = None,
    scheme_note: str | None = None,
) -> None:
    """Write a snapshot; optional tokens embed run provenance."""
    g = series.grid
    times = series.times
    dtau = float(times[1] - times[0]) if times.size > 1 else 0.0
    tokens = [
        MAGIC,
        f"dim={g.dim}",
        "n=" + ",".join(str(c) for c in g.counts),
        f"dtau={_fmt(dtau)}",
        f"levels={series.n_levels}",
        "endian=little",
        "fp=64",
        f"ds={_fmt(g.step)}",
        f"label={series.label}",
        "times=" + ",".join(_fmt(t) for t in times),
    ]
    if config_hash is not None:
        tokens.append(f"config={config_hash}")
    if scheme_note is not None:
        tokens.append(f"scheme={scheme_note}")
    header = " ".join(tokens) + "\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(np.ascontiguousarray(series.levels, dtype="<f8").tobytes())


def read_field(path) -> FieldSeries:
    """Read a snapshot back; exact inverse of :func:`write_field`."""
    with open(path, "rb") as fh:
        raw_header = fh.readline()
        payload = fh.read()
    try:
        header = raw_header.decode("ascii").strip()
    except UnicodeDecodeError as exc:
        raise HeaderError(f"header is not ASCII: {exc}") from exc
    parts = header.split()
    if not parts or parts[0] != MAGIC:
        raise HeaderError(f"missing {MAGIC} magic")
    kv = {}
    for tok in parts[1:]:
        if "=" not in tok:
            raise HeaderError(f"malformed header token {tok!r}")
        key, val = tok.split("=", 1)
        kv[key] = val
    for key in ("dim", "n", "dtau", "levels", "endian", "fp", "ds", "label", "times"):
        if key not in kv:
            raise HeaderError(f"header missing required key {key!r}")
    if kv["endian"] != "little" or kv["fp"] != "64":
        raise HeaderError("only little-endian float64 payloads are supported")
    try:
        dim = int(kv["dim"])
        counts = tuple(int(v) for v in kv["n"].split(","))
        n_levels = int(kv["levels"])
        step = float(kv["ds"])
        times = np.array([float(v) for v in kv["times"].split(",")])
    except ValueError as exc:
        raise HeaderError(f"unparseable header value: {exc}") from exc
    if len(counts) != dim:
        raise ShapeMismatchError(
            f"header declares dim={dim} but n= lists {len(counts)} axes"
        )
    if times.size != n_levels:
        raise ShapeMismatchError(
            f"header declares {n_levels} levels but {times.size} time stamps"
        )
    expected = n_levels * int(np.prod(counts)) * 8
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"payload holds {len(payload)} bytes, expected {expected}"
        )
    if len(payload) > expected:
        raise ShapeMismatchError(
            f"payload holds {len(payload)} bytes, expected {expected}"
        )
    levels = np.frombuffer(payload, dtype="<f8").reshape(n_levels, *counts)
    grid = GridSpec(dim, counts, step)
    return FieldSeries(grid=grid, levels=levels, label=kv["label"], times=times)


def write_csv_1d(series: FieldSeries, path) -> None:
    """Columns (level, t_hat, x, value) for 1-D series."""
    if series.grid.dim != 1:
        raise ValueError("CSV export is for 1-D series")
    xs = series.grid.axis_points(0)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("level,t_hat,x,value\n")
        for n in range(series.n_levels):
            t = _fmt(series.times[n])
            for i, x in enumerate(xs):
                fh.write(f"{n},{t},{_fmt(x)},{_fmt(series.levels[n, i])}\n")
