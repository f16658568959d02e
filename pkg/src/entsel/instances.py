"""Scenario definitions, grid discretization, and cost matrices.

A scenario is a pair of disjoint axis-aligned boxes carrying strictly
positive densities.  Discretization turns each side into a weighted point
cloud by midpoint (cell-center) quadrature.  The degenerate ``tied-discrete``
instance bypasses quadrature entirely and ships a hand-built collinear
point set whose transport costs tie on purpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.spatial.distance import cdist


class ConfigurationError(ValueError):
    """Bad scenario / grid / experiment configuration."""


class ScenarioError(ValueError):
    """Scenario data violates its contract (e.g. non-positive density)."""


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by per-axis bounds."""

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "low", np.asarray(self.low, dtype=float))
        object.__setattr__(self, "high", np.asarray(self.high, dtype=float))
        if self.low.shape != self.high.shape or self.low.ndim != 1:
            raise ConfigurationError("box bounds must be 1-d arrays of equal length")
        if np.any(self.high <= self.low):
            raise ConfigurationError("box must have positive extent on every axis")

    @property
    def dim(self) -> int:
        return self.low.size

    def volume(self) -> float:
        return float(np.prod(self.high - self.low))

    def contains(self, points: np.ndarray, atol: float = 1e-12) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.all((pts >= self.low - atol) & (pts <= self.high + atol), axis=1)

    def min_distance(self, other: "Box") -> float:
        """Minimum Euclidean distance between two boxes (coordinate-wise gaps)."""
        gap = np.maximum(0.0, np.maximum(self.low - other.high, other.low - self.high))
        return float(np.linalg.norm(gap))


class UniformDensity:
    """Constant density; the constant is irrelevant after normalization."""

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.ones(np.atleast_2d(points).shape[0])


class PolynomialDensity:
    """Density ``sum_k coef_k * prod_a x_a**exp_{k,a}``, strictly positive on its box."""

    def __init__(self, terms: Sequence[tuple[float, Sequence[int]]]):
        if not terms:
            raise ConfigurationError("polynomial density needs at least one term")
        self.terms = [(float(c), tuple(int(e) for e in exps)) for c, exps in terms]

    def __call__(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(points)
        out = np.zeros(pts.shape[0])
        for coef, exps in self.terms:
            if len(exps) != pts.shape[1]:
                raise ConfigurationError("polynomial exponent arity does not match dim")
            out += coef * np.prod(pts ** np.asarray(exps, dtype=float), axis=1)
        return out


class TabulatedDensity:
    """Density given on a regular grid of nodes, multilinearly interpolated."""

    def __init__(self, axes: Sequence[np.ndarray], values: np.ndarray):
        axes = [np.asarray(a, dtype=float) for a in axes]
        values = np.asarray(values, dtype=float)
        if np.any(values <= 0):
            raise ScenarioError("tabulated density must be strictly positive")
        self._interp = RegularGridInterpolator(
            axes, values, bounds_error=False, fill_value=None
        )

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(self._interp(np.atleast_2d(points)), dtype=float)


@dataclass(frozen=True)
class Scenario:
    """Two disjoint compact boxes with strictly positive densities.

    ``separation`` is the computed minimum distance between the boxes.
    ``tied`` flags the degenerate hand-built discrete instance, for which
    the disjointness requirement is intentionally waived.
    """

    dim: int
    source_domain: Box
    target_domain: Box
    source_density: object
    target_density: object
    separation: float = field(init=False)
    tied: bool = False

    def __post_init__(self):
        if self.source_domain.dim != self.dim or self.target_domain.dim != self.dim:
            raise ConfigurationError("domain dimension mismatch")
        sep = self.source_domain.min_distance(self.target_domain)
        object.__setattr__(self, "separation", sep)
        if not self.tied and sep <= 0.0:
            raise ConfigurationError(
                "source and target domains must be quantitatively disjoint"
            )


@dataclass(frozen=True)
class GridSpec:
    """Per-axis cell counts for cell-center quadrature."""

    per_axis_counts: tuple[int, ...]
    quadrature: str = "cell-center"

    def __post_init__(self):
        counts = tuple(int(c) for c in self.per_axis_counts)
        object.__setattr__(self, "per_axis_counts", counts)
        if any(c < 2 for c in counts):
            raise ConfigurationError("grid counts must all be >= 2")
        if self.quadrature != "cell-center":
            raise ConfigurationError(f"unknown quadrature {self.quadrature!r}")

    @property
    def total(self) -> int:
        return int(np.prod(self.per_axis_counts))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Weighted point cloud with its grid spacing.

    Weights are strictly positive and sum to one (within 1e-12).
    ``cell_width`` is the largest cell edge of the generating grid; for
    hand-built instances it is a nominal value.
    """

    points: np.ndarray
    weights: np.ndarray
    cell_width: float

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        if pts.shape[0] != w.size:
            raise ScenarioError("points/weights length mismatch")
        if np.any(w <= 0):
            raise ScenarioError("weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ScenarioError("weights must sum to 1 within 1e-12")
        if not self.cell_width > 0:
            raise ScenarioError("cell_width must be positive")

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def dim(self) -> int:
        return self.points.shape[1]


BUILTIN_SCENARIOS = (
    "translated-squares-2d",
    "translated-cubes-3d",
    "segment-1d",
    "tied-discrete",
)


def builtin_scenario(name: str) -> Scenario:
    """Return a named built-in scenario.

    ``translated-squares-2d``: uniform unit squares [0,1]^2 and [2,3]x[0,1].
    ``translated-cubes-3d``: uniform unit cubes [0,1]^3 and [3,4]^3.
    ``segment-1d``: uniform segments [0,1] and [2,3].
    ``tied-discrete``: degenerate flag routed to a hand-built collinear
    instance with cost ties; ``discretize`` bypasses the grid for it.
    """
    if name == "translated-squares-2d":
        return Scenario(
            dim=2,
            source_domain=Box([0.0, 0.0], [1.0, 1.0]),
            target_domain=Box([2.0, 0.0], [3.0, 1.0]),
            source_density=UniformDensity(),
            target_density=UniformDensity(),
        )
    if name == "translated-cubes-3d":
        return Scenario(
            dim=3,
            source_domain=Box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0]),
            target_domain=Box([3.0, 0.0, 0.0], [4.0, 1.0, 1.0]),
            source_density=UniformDensity(),
            target_density=UniformDensity(),
        )
    if name == "segment-1d":
        return Scenario(
            dim=1,
            source_domain=Box([0.0], [1.0]),
            target_domain=Box([2.0], [3.0]),
            source_density=UniformDensity(),
            target_density=UniformDensity(),
        )
    if name == "tied-discrete":
        return Scenario(
            dim=1,
            source_domain=Box([0.0], [2.0]),
            target_domain=Box([1.5], [3.5]),
            source_density=UniformDensity(),
            target_density=UniformDensity(),
            tied=True,
        )
    raise ConfigurationError(f"unknown scenario {name!r}")


def tied_discrete_instance() -> tuple[DiscreteMeasure, DiscreteMeasure]:
    """Collinear 3+3 points with interleaved positions.

    Costs |x-y| admit four optimal vertex plans, so the entropic limit has
    a nontrivial maximum-entropy selection.  The nominal cell width keeps
    the sweep resolution guard out of the way of this purely discrete case.
    """
    xs = np.array([[0.0], [1.0], [2.0]])
    ys = np.array([[1.5], [2.5], [3.5]])
    w = np.full(3, 1.0 / 3.0)
    return (
        DiscreteMeasure(xs, w, cell_width=1e-3),
        DiscreteMeasure(ys, w, cell_width=1e-3),
    )


def _cell_center_cloud(box: Box, density, counts: Sequence[int]):
    axes = []
    for a in range(box.dim):
        k = counts[a]
        edges = np.linspace(box.low[a], box.high[a], k + 1)
        axes.append(0.5 * (edges[:-1] + edges[1:]))
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    values = density(points)
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise ScenarioError("density must be finite and strictly positive on its box")
    cell_volume = box.volume() / np.prod(counts)
    weights = values * cell_volume
    weights = weights / weights.sum()
    widths = (box.high - box.low) / np.asarray(counts, dtype=float)
    return DiscreteMeasure(points, weights, cell_width=float(widths.max()))


def discretize(scenario: Scenario, grid: GridSpec) -> tuple[DiscreteMeasure, DiscreteMeasure]:
    """Cell-center quadrature of both marginals on the given grid.

    Deterministic: identical inputs give bit-identical outputs.
    """
    if scenario.tied:
        return tied_discrete_instance()
    counts = grid.per_axis_counts
    if len(counts) == 1 and scenario.dim > 1:
        counts = counts * scenario.dim
    if len(counts) != scenario.dim:
        raise ConfigurationError("grid counts arity does not match scenario dim")
    if int(np.prod(counts)) > 10**5:
        raise ConfigurationError("grid exceeds the 1e5 points-per-marginal budget")
    mu = _cell_center_cloud(scenario.source_domain, scenario.source_density, counts)
    nu = _cell_center_cloud(scenario.target_domain, scenario.target_density, counts)
    return mu, nu


def cost_matrix(mu: DiscreteMeasure, nu: DiscreteMeasure) -> np.ndarray:
    """Euclidean distance matrix between the two supports."""
    if mu.dim != nu.dim:
        raise ScenarioError("dimension mismatch between measures")
    return cdist(mu.points, nu.points)
