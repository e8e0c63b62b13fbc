"""Binary PGM (P5) sequence I/O.

Frames are 8-bit grayscale, max value 255, written as frame_000000.pgm,
frame_000001.pgm, ... next to a manifest.txt recording the generating
parameters.  The reader tolerates comments and arbitrary whitespace in
the header, as the format allows.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import DataError

FRAME_PATTERN = "frame_{:06d}.pgm"
MANIFEST_NAME = "manifest.txt"


def write_pgm(path, image: np.ndarray) -> None:
    img = np.asarray(image)
    if img.ndim != 2:
        raise DataError(f"image must be 2-D, got shape {img.shape}")
    if img.dtype != np.uint8:
        if img.min() < 0 or img.max() > 255:
            raise DataError("image values must fit in [0, 255]")
        img = img.astype(np.uint8)
    height, width = img.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(img.tobytes())


def _header_tokens(data: bytes, path) -> tuple[list[int], int]:
    """Magic check plus the three header integers; returns (ints, data offset)."""
    if not data.startswith(b"P5"):
        raise DataError(f"{path}: not a binary PGM (missing P5 magic)")
    pos = 2
    tokens: list[int] = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise DataError(f"{path}: truncated PGM header")
        try:
            tokens.append(int(data[start:pos]))
        except ValueError:
            raise DataError(
                f"{path}: bad header token {data[start:pos]!r}"
            ) from None
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise DataError(f"{path}: missing whitespace after PGM header")
    return tokens, pos + 1


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as handle:
        data = handle.read()
    (width, height, maxval), offset = _header_tokens(data, path)
    if width <= 0 or height <= 0:
        raise DataError(f"{path}: invalid dimensions {width}x{height}")
    if maxval != 255:
        raise DataError(f"{path}: unsupported max value {maxval}, expected 255")
    expected = width * height
    payload = data[offset : offset + expected]
    if len(payload) < expected:
        raise DataError(
            f"{path}: pixel data truncated ({len(payload)} of {expected} bytes)"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width)


def frame_path(directory, index: int) -> Path:
    return Path(directory) / FRAME_PATTERN.format(index)


def write_sequence(directory, images, manifest: dict[str, object] | None = None) -> list[Path]:
    """Write numbered frames plus a key=value manifest; returns the paths."""
    directory = Path(directory)
    os.makedirs(directory, exist_ok=True)
    paths = []
    for i, img in enumerate(images):
        path = frame_path(directory, i)
        write_pgm(path, img)
        paths.append(path)
    if manifest is not None:
        lines = [f"{key}={value}" for key, value in manifest.items()]
        (directory / MANIFEST_NAME).write_text("\n".join(lines) + "\n")
    return paths


def list_sequence(directory) -> list[Path]:
    """Numbered frame files in index order; any *.pgm names are accepted."""
    directory = Path(directory)
    if not directory.is_dir():
        raise DataError(f"{directory}: not a directory")
    paths = sorted(p for p in directory.iterdir() if p.suffix == ".pgm")
    if not paths:
        raise DataError(f"{directory}: no frames found (*.pgm)")
    return paths


def read_sequence(directory) -> list[np.ndarray]:
    """All frames in order; dimension drift mid-sequence is rejected."""
    paths = list_sequence(directory)
    frames = []
    shape = None
    for path in paths:
        img = read_pgm(path)
        if shape is None:
            shape = img.shape
        elif img.shape != shape:
            raise DataError(
                f"{path}: frame is {img.shape[1]}x{img.shape[0]}, "
                f"sequence started at {shape[1]}x{shape[0]}"
            )
        frames.append(img)
    return frames
