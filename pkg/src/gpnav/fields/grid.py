"""Occupancy rasters and PGM / CSV file I/O."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import InvalidInputError


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class OccupancyGrid:
    """Binary obstacle raster; ``cells[row, col] == 1`` marks an obstacle.

    Cell ``(col=i, row=j)`` is centred at world point
    ``origin + (i, j) * cell_size``, so with the default one-metre cells one
    pixel spans one metre. Instances are immutable and safe to share across
    threads.
    """

    cells: np.ndarray
    cell_size: float = 1.0
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        cells = np.asarray(self.cells)
        if cells.ndim != 2 or cells.size == 0:
            raise InvalidInputError("occupancy grid must be a non-empty 2-D raster")
        if self.cell_size <= 0:
            raise InvalidInputError("cell_size must be positive")
        object.__setattr__(self, "cells", _freeze((cells != 0).astype(np.uint8)))
        object.__setattr__(self, "origin", _freeze(np.asarray(self.origin, dtype=float)))

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    def extent(self):
        """World-space box covered by the cells, ``(lo (2,), hi (2,))``."""
        half = 0.5 * self.cell_size
        lo = self.origin - half
        hi = self.origin + (np.array([self.width, self.height]) - 0.5) * self.cell_size
        return lo, hi

    def cell_index(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Nearest (row, col) indices for world points, clipped to the raster."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        ij = np.rint((pts - self.origin) / self.cell_size).astype(int)
        col = np.clip(ij[:, 0], 0, self.width - 1)
        row = np.clip(ij[:, 1], 0, self.height - 1)
        return row, col

    def occupied_at(self, points: np.ndarray) -> np.ndarray:
        """Occupancy of the cell containing each world point (clipped)."""
        row, col = self.cell_index(points)
        return self.cells[row, col].astype(bool)

    def contains(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        lo, hi = self.extent()
        return np.all((pts >= lo) & (pts <= hi), axis=1)

    def obstacle_fraction(self) -> float:
        return float(self.cells.mean())

    # ---- file formats -------------------------------------------------

    def to_pgm(self, path) -> Path:
        """Write a binary (P5) PGM; obstacles are 255, free space 0.

        The header carries ``# cell_size <metres>`` so the resolution
        round-trips.
        """
        path = Path(path)
        header = f"P5\n# cell_size {self.cell_size}\n{self.width} {self.height}\n255\n"
        data = np.where(self.cells != 0, 255, 0).astype(np.uint8)
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii"))
            fh.write(data.tobytes())
        return path

    @classmethod
    def from_pgm(cls, source) -> "OccupancyGrid":
        """Load an 8-bit binary PGM; pixel values >= 128 become obstacles."""
        if isinstance(source, (str, Path)):
            raw = Path(source).read_bytes()
        else:
            raw = source
        return cls.from_pgm_bytes(raw)

    @classmethod
    def from_pgm_bytes(cls, raw: bytes) -> "OccupancyGrid":
        pos = 0
        tokens = []
        cell_size = 1.0
        while len(tokens) < 4:
            if pos >= len(raw):
                raise InvalidInputError("truncated PGM header")
            if raw[pos:pos + 1].isspace():
                pos += 1
                continue
            if raw[pos:pos + 1] == b"#":
                end = raw.find(b"\n", pos)
                end = len(raw) if end < 0 else end
                comment = raw[pos + 1:end].decode("ascii", "replace").split()
                if len(comment) >= 2 and comment[0] == "cell_size":
                    try:
                        cell_size = float(comment[1])
                    except ValueError:
                        pass
                pos = end + 1
                continue
            end = pos
            while end < len(raw) and not raw[end:end + 1].isspace():
                end += 1
            tokens.append(raw[pos:end])
            pos = end
        if tokens[0] != b"P5":
            raise InvalidInputError("only binary (P5) PGM maps are supported")
        width, height, maxval = (int(t) for t in tokens[1:4])
        if maxval > 255:
            raise InvalidInputError("only 8-bit PGM maps are supported")
        pos += 1  # single whitespace after maxval
        pixels = np.frombuffer(raw, dtype=np.uint8, count=width * height, offset=pos)
        if pixels.size != width * height:
            raise InvalidInputError("PGM pixel data shorter than header promises")
        cells = (pixels.reshape(height, width) >= 128).astype(np.uint8)
        return cls(cells=cells, cell_size=cell_size)


def export_csv(values: np.ndarray, path) -> Path:
    """Dump a raster to CSV, row-major, one value per cell."""
    path = Path(path)
    np.savetxt(path, np.asarray(values), delimiter=",", fmt="%.17g")
    return path
