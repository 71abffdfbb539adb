"""Right-hand-side test data on the uniform grid x_i = i*h, i = 1..n.

f1 is the discontinuous indicator of [1/2, 3/4]; f2 is the C^2 cubic
B-spline bump (order-4 Irwin-Hall density) mapped onto the same support and
normalized to unit peak.  Both vanish outside the support; f2 vanishes with
two derivatives at its endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class RhsSpec:
    """Declarative description of a right-hand side.

    kind: 'f1' | 'f2' | 'unit' | 'file'; 'unit' uses index (0-based),
    'file' loads one value per grid node from path.
    """

    kind: str = "f2"
    amplitude: float = 1.0
    index: int = 0
    path: str | None = None
    support: tuple = (0.5, 0.75)

    @classmethod
    def parse(cls, text: str) -> "RhsSpec":
        """CLI syntax: f1 | f2 | unit:<i> | file:<path>."""
        if text in ("f1", "f2"):
            return cls(kind=text)
        if text.startswith("unit:"):
            return cls(kind="unit", index=int(text.split(":", 1)[1]))
        if text.startswith("file:"):
            return cls(kind="file", path=text.split(":", 1)[1])
        raise ValueError(f"unknown rhs spec {text!r}")


def grid_nodes(n: int) -> np.ndarray:
    h = 1.0 / (n + 1)
    return h * np.arange(1, n + 1)


def irwin_hall4(s) -> np.ndarray:
    """Density of the sum of four uniform variates on [0, 4] (cubic B-spline)."""
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    inside = (s > 0) & (s < 4)
    sv = s[inside]
    acc = np.zeros_like(sv)
    # (1/6) sum_{j<=s} (-1)^j C(4,j) (s-j)^3
    binom = (1.0, -4.0, 6.0, -4.0)
    for j, c in enumerate(binom):
        mask = sv > j
        acc[mask] += c * (sv[mask] - j) ** 3
    out[inside] = acc / 6.0
    return out


def build_rhs(spec: RhsSpec, n: int) -> np.ndarray:
    """Sample the right-hand side at the grid nodes (pointwise, no projection)."""
    x = grid_nodes(n)
    lo, hi = spec.support
    if spec.kind == "f1":
        return np.where((x >= lo) & (x <= hi), spec.amplitude, 0.0)
    if spec.kind == "f2":
        s = (x - lo) * (4.0 / (hi - lo))
        peak = 2.0 / 3.0  # irwin_hall4(2)
        return spec.amplitude * irwin_hall4(s) / peak
    if spec.kind == "unit":
        if not 0 <= spec.index < n:
            raise ValueError(f"unit index {spec.index} out of range for n={n}")
        e = np.zeros(n)
        e[spec.index] = spec.amplitude
        return e
    if spec.kind == "file":
        v = np.loadtxt(spec.path, dtype=np.float64)
        v = np.atleast_1d(v)
        if v.shape[0] != n:
            raise ValueError(f"file rhs has {v.shape[0]} values, grid has {n}")
        return spec.amplitude * v
    raise ValueError(f"unknown rhs kind {spec.kind!r}")
