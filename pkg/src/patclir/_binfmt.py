"""Shared envelope for binary artifacts.

Layout::

    magic (8 bytes) | version (u32 LE) | payload length (u64 LE) | payload | crc32 (u32 LE)

The payload is a sequence of sections: length-prefixed UTF-8 string tables
and little-endian numpy arrays with an explicit element count.
"""
from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from patclir.errors import FormatError

_HEADER = struct.Struct("<8sIQ")
_CRC = struct.Struct("<I")
_COUNT = struct.Struct("<Q")


class Writer:
    def __init__(self):
        self._parts: list[bytes] = []

    def u64(self, value: int) -> None:
        self._parts.append(_COUNT.pack(value))

    def f64(self, value: float) -> None:
        self._parts.append(struct.pack("<d", value))

    def strings(self, items) -> None:
        encoded = [s.encode("utf-8") for s in items]
        self.u64(len(encoded))
        self.array(np.array([len(b) for b in encoded], dtype="<u4"))
        self._parts.append(b"".join(encoded))

    def array(self, arr: np.ndarray) -> None:
        arr = np.ascontiguousarray(arr)
        self.u64(arr.shape[0])
        self._parts.append(arr.astype(arr.dtype.newbyteorder("<"), copy=False).tobytes())

    def payload(self) -> bytes:
        return b"".join(self._parts)


class Reader:
    def __init__(self, payload: bytes):
        self._buf = memoryview(payload)
        self._pos = 0

    def _take(self, n: int) -> memoryview:
        if self._pos + n > len(self._buf):
            raise FormatError("truncated payload")
        chunk = self._buf[self._pos : self._pos + n]
        self._pos += n
        return chunk

    def u64(self) -> int:
        return _COUNT.unpack(self._take(_COUNT.size))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self._take(8))[0]

    def array(self, dtype: str) -> np.ndarray:
        n = self.u64()
        dt = np.dtype(dtype)
        return np.frombuffer(self._take(n * dt.itemsize), dtype=dt).astype(dt.newbyteorder("="))

    def strings(self) -> list[str]:
        n = self.u64()
        lengths = self.array("<u4")
        if lengths.shape[0] != n:
            raise FormatError("string table length mismatch")
        blob = bytes(self._take(int(lengths.sum())))
        out = []
        pos = 0
        for length in lengths.tolist():
            out.append(blob[pos : pos + length].decode("utf-8"))
            pos += length
        return out

    def done(self) -> None:
        if self._pos != len(self._buf):
            raise FormatError("trailing bytes in payload")


def write_file(path: str | Path, magic: bytes, version: int, payload: bytes) -> None:
    head = _HEADER.pack(magic, version, len(payload))
    crc = zlib.crc32(payload, zlib.crc32(head))
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(payload)
        fh.write(_CRC.pack(crc))


def read_file(path: str | Path, magic: bytes, version: int) -> Reader:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size + _CRC.size:
        raise FormatError(f"{path}: truncated file")
    file_magic, file_version, length = _HEADER.unpack_from(data)
    if file_magic != magic:
        raise FormatError(f"{path}: bad magic {file_magic!r}")
    if file_version != version:
        raise FormatError(f"{path}: unsupported format version {file_version} (expected {version})")
    end = _HEADER.size + length
    if len(data) != end + _CRC.size:
        raise FormatError(f"{path}: truncated file")
    payload = data[_HEADER.size : end]
    (crc,) = _CRC.unpack_from(data, end)
    if crc != zlib.crc32(payload, zlib.crc32(data[: _HEADER.size])):
        raise FormatError(f"{path}: checksum mismatch")
    return Reader(payload)
