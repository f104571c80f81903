"""Vector file formats used by the command line tool.

text:   one decimal value per line, '#' starts a comment, blank lines are
        skipped; written with 17 significant digits so that write/read
        round-trips reproduce doubles exactly.
binary: magic "FHK1", a little-endian unsigned 64-bit count, then that many
        little-endian IEEE-754 doubles; bit-exact by construction.
"""

import struct

import numpy as np

__all__ = ["VectorFileError", "read_vector", "write_vector", "MAGIC"]

MAGIC = b"FHK1"

TEXT = "text"
BINARY = "binary"


class VectorFileError(Exception):
    """Raised when a vector file cannot be parsed."""


def write_vector(path, values, fmt=TEXT):
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("expected a 1-d real vector")
    if fmt == TEXT:
        with open(path, "w") as fh:
            for v in values:
                fh.write("%.17g\n" % v)
    elif fmt == BINARY:
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<Q", values.shape[0]))
            fh.write(values.astype("<f8").tobytes())
    else:
        raise ValueError("format must be 'text' or 'binary'")


def read_vector(path, fmt=TEXT):
    if fmt == TEXT:
        return _read_text(path)
    if fmt == BINARY:
        return _read_binary(path)
    raise ValueError("format must be 'text' or 'binary'")


def _read_text(path):
    values = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                body = line.split("#", 1)[0].strip()
                if not body:
                    continue
                try:
                    values.append(float(body))
                except ValueError:
                    raise VectorFileError(
                        "%s:%d: not a number: %r" % (path, lineno, body)
                    )
    except OSError as exc:
        raise VectorFileError(str(exc))
    except UnicodeDecodeError as exc:
        raise VectorFileError("%s: not a text vector file (%s)" % (path, exc))
    return np.asarray(values, dtype=float)


def _read_binary(path):
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise VectorFileError(str(exc))
    if len(blob) < len(MAGIC) + 8:
        raise VectorFileError("%s: truncated binary vector file" % path)
    if blob[: len(MAGIC)] != MAGIC:
        raise VectorFileError("%s: bad magic, not a binary vector file" % path)
    (count,) = struct.unpack_from("<Q", blob, len(MAGIC))
    expected = len(MAGIC) + 8 + 8 * count
    if len(blob) != expected:
        raise VectorFileError(
            "%s: expected %d bytes for %d values, found %d"
            % (path, expected, count, len(blob))
        )
    return np.frombuffer(blob, dtype="<f8", offset=len(MAGIC) + 8).astype(float)
