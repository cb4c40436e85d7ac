"""Deterministic point-set generators.

Randomness is pinned to the raw 64-bit stream of numpy's PCG64 bit
generator: uniforms take the top 53 bits of each draw, normals come from
those uniforms through Box-Muller.  Identical (distribution, n, seed) gives
bit-identical output on every platform; no Generator-level distribution code
is involved, so numpy version drift cannot change the streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import PointSet

__all__ = ["GeneratorSpec", "generate", "RNG_NAME"]

RNG_NAME = "pcg64-raw53-boxmuller"

_DISTRIBUTIONS = ("uniform", "clustered", "normal")
_INV53 = 2.0 ** -53


@dataclass(frozen=True)
class GeneratorSpec:
    """A reproducible point-set recipe."""

    distribution: str
    n: int
    seed: int

    def __post_init__(self) -> None:
        if self.distribution not in _DISTRIBUTIONS:
            raise ValueError(
                f"unknown distribution {self.distribution!r}; "
                f"expected one of {_DISTRIBUTIONS}"
            )
        if self.n < 0:
            raise ValueError(f"n must be non-negative, got {self.n}")


class _RawStream:
    """Chunked uniforms in [0, 1) from the PCG64 raw stream."""

    def __init__(self, seed: int, chunk: int = 4096):
        import numpy as np

        self._bg = np.random.PCG64(seed & (2**64 - 1))
        self._chunk = chunk
        self._buf: list[int] = []
        self._at = 0

    def _raw(self) -> int:
        if self._at >= len(self._buf):
            self._buf = self._bg.random_raw(self._chunk).tolist()
            self._at = 0
        v = self._buf[self._at]
        self._at += 1
        return v

    def uniform(self) -> float:
        """Uniform in [0, 1): top 53 bits of one raw draw."""
        return (self._raw() >> 11) * _INV53

    def uniform_open(self) -> float:
        """Uniform in (0, 1]; log-safe."""
        return ((self._raw() >> 11) + 1) * _INV53

    def normal_pair(self) -> tuple[float, float]:
        """Standard normal pair via Box-Muller."""
        u1 = self.uniform_open()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        a = 2.0 * math.pi * u2
        return r * math.cos(a), r * math.sin(a)


def generate(spec: GeneratorSpec) -> PointSet:
    """Materialise the point set described by ``spec``.

    uniform: n i.i.d. points in [0, sqrt(n)]^2.
    clustered: ceil(sqrt(n)) centers uniform in the square, each with
    ceil(sqrt(n)) points uniform in a side-n^(1/4) square around its center
    intersected with the outer square, truncated to exactly n points.
    normal: isotropic normal at the square's center with sigma = sqrt(n)/6,
    resampled until inside the square.
    """
    n = spec.n
    if n == 0:
        return PointSet([])
    rng = _RawStream(spec.seed)
    side = math.sqrt(n)
    coords: list[tuple[float, float]] = []
    if spec.distribution == "uniform":
        for _ in range(n):
            coords.append((side * rng.uniform(), side * rng.uniform()))
    elif spec.distribution == "clustered":
        k = math.ceil(math.sqrt(n))
        half = 0.5 * n**0.25
        while len(coords) < n:
            cx = side * rng.uniform()
            cy = side * rng.uniform()
            x_lo, x_hi = max(0.0, cx - half), min(side, cx + half)
            y_lo, y_hi = max(0.0, cy - half), min(side, cy + half)
            for _ in range(k):
                if len(coords) >= n:
                    break
                coords.append(
                    (
                        x_lo + (x_hi - x_lo) * rng.uniform(),
                        y_lo + (y_hi - y_lo) * rng.uniform(),
                    )
                )
    else:  # normal
        mu = 0.5 * side
        sd = side / 6.0
        while len(coords) < n:
            z0, z1 = rng.normal_pair()
            x = mu + sd * z0
            y = mu + sd * z1
            if 0.0 <= x <= side and 0.0 <= y <= side:
                coords.append((x, y))
    return PointSet(coords)
