"""Embedded jute-fibre breaking-strength data (gauge lengths 20 mm and 5 mm).

The 5 mm series has 29 published values for a stated sample size of 30.
``RECONSTRUCTED_GAUGE5`` is the value that makes the published
equivariant estimate for that sample consistent; it is only added when
explicitly requested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAUGE20 = (
    71.46, 419.02, 284.64, 585.57, 456.60, 113.85, 187.85, 688.16, 662.66, 45.58,
    578.62, 756.70, 594.29, 166.49, 99.72, 707.36, 765.14, 187.13, 145.96, 350.70,
    547.44, 116.99, 375.81, 581.60, 119.86, 48.01, 200.16, 36.75, 244.53, 83.55,
)

GAUGE5 = (
    566.31, 270.79, 516.28, 823.03, 226.53, 367.70, 441.87, 618.57, 546.11, 268.20,
    315.33, 809.23, 218.86, 583.97, 304.84, 129.08, 537.45, 496.28, 167.87, 306.99,
    178.25, 370.02, 168.20, 554.61, 360.80, 260.97, 254.29, 295.51, 187.68,
)

# back-solved so that v/30 reproduces the published quadratic-loss BAEE 255.29
RECONSTRUCTED_GAUGE5 = 385.48


@dataclass(frozen=True)
class EmbeddedDataset:
    gauge20: tuple
    gauge5: tuple
    labels: tuple = ("gauge length 20 mm", "gauge length 5 mm")
    reconstructed: bool = False

    def __post_init__(self):
        if any(x <= 0 for x in self.gauge20 + self.gauge5):
            raise ValueError("breaking strengths must be positive")

    def sample(self, population: int) -> np.ndarray:
        """Sorted observations of population 1 (20 mm) or 2 (5 mm)."""
        if population not in (1, 2):
            raise ValueError("population must be 1 or 2")
        return np.sort(np.asarray(self.gauge20 if population == 1 else self.gauge5, dtype=float))


def jute(reconstruct_missing: bool = False) -> EmbeddedDataset:
    g5 = GAUGE5 + ((RECONSTRUCTED_GAUGE5,) if reconstruct_missing else ())
    return EmbeddedDataset(GAUGE20, g5, reconstructed=reconstruct_missing)
