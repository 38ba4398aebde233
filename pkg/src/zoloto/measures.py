"""Finitely supported probability measures on R^d.

Atoms are stored as a dense (n, d) position array plus a weight vector.
Construction merges duplicate positions, validates weights, and freezes the
arrays, so values are immutable and safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from .errors import DimensionMismatch, ParseError

TOL_MERGE = 1e-12
TOL_WEIGHT_SUM = 1e-12
TOL_PARSE_RENORM = 1e-9


def _merge_atoms(positions, weights, tol):
    """Greedy merge of positions closer than tol; weights add."""
    kept_pos = []
    kept_w = []
    for p, w in zip(positions, weights):
        for k, q in enumerate(kept_pos):
            if np.linalg.norm(p - q) <= tol:
                kept_w[k] += w
                break
        else:
            kept_pos.append(p)
            kept_w.append(w)
    return np.array(kept_pos), np.array(kept_w)


@dataclass(frozen=True)
class MeasureStats:
    """Barycentre, variance and standard deviation of a measure."""

    barycentre: np.ndarray
    variance: float
    std_dev: float


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Probability measure with finitely many atoms in R^d."""

    positions: np.ndarray
    weights: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        pos = np.atleast_2d(np.asarray(self.positions, dtype=float))
        w = np.asarray(self.weights, dtype=float).ravel()
        if pos.shape[0] != w.shape[0]:
            raise ParseError(
                f"{pos.shape[0]} positions but {w.shape[0]} weights")
        if not np.all(np.isfinite(pos)):
            raise ParseError("non-finite atom position")
        if not np.all(np.isfinite(w)):
            raise ParseError("non-finite atom weight")
        if np.any(w <= 0):
            raise ParseError("atom weights must be strictly positive")
        total = w.sum()
        if abs(total - 1.0) > TOL_WEIGHT_SUM:
            raise ParseError(f"weights sum to {total!r}, not 1")
        pos, w = _merge_atoms(pos, w, TOL_MERGE)
        pos.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "dim", pos.shape[1])

    @property
    def n_atoms(self):
        return self.positions.shape[0]

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return (self.positions.shape == other.positions.shape
                and np.array_equal(self.positions, other.positions)
                and np.array_equal(self.weights, other.weights))


def from_atoms(positions, weights):
    """Build a measure from raw arrays (merging and validation included)."""
    return DiscreteMeasure(np.asarray(positions, dtype=float),
                           np.asarray(weights, dtype=float))


def dirac(x):
    """Point mass at x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return DiscreteMeasure(x[None, :], np.array([1.0]))


def stats(m: DiscreteMeasure) -> MeasureStats:
    """Barycentre [m], variance var(m) and std dev sigma_m."""
    bary = m.weights @ m.positions
    variance = float(m.weights @ np.sum((m.positions - bary) ** 2, axis=1))
    variance = max(variance, 0.0)
    return MeasureStats(bary, variance, float(np.sqrt(variance)))


def center(m: DiscreteMeasure) -> DiscreteMeasure:
    """Translate so the barycentre is the origin."""
    bary = m.weights @ m.positions
    return DiscreteMeasure(m.positions - bary, m.weights)


def dilate(m: DiscreteMeasure, lam: float) -> DiscreteMeasure:
    """Push forward under x -> lam * x (dilation about the origin)."""
    if lam <= 0:
        raise ParseError(f"dilation factor must be positive, got {lam}")
    return DiscreteMeasure(lam * m.positions, m.weights)


def gaussian_quantile_discretize(sigma: float, n: int) -> DiscreteMeasure:
    """n-atom quantile (midpoint) discretization of N(0, sigma^2) on R.

    Atoms sit at sigma * Phi^{-1}((k - 1/2)/n) with equal weights.  The
    position array is antisymmetrized exactly so the barycentre is 0 to
    floating-point cancellation.
    """
    if sigma <= 0:
        raise ParseError(f"sigma must be positive, got {sigma}")
    if n < 1:
        raise ParseError(f"n must be >= 1, got {n}")
    k = np.arange(1, n + 1)
    q = norm.ppf((k - 0.5) / n)
    q = 0.5 * (q - q[::-1])  # exact pairing: q[i] == -q[n-1-i] bitwise
    return DiscreteMeasure(sigma * q[:, None], np.full(n, 1.0 / n))


@dataclass(frozen=True)
class GeneratorSpec:
    """Shape of the random-measure generator.

    kind: "box" draws coordinates uniform on [-scale, scale]; "ball" draws
    uniformly from the centred ball of radius scale.  Weights come from a
    symmetric Dirichlet(alpha).  centered subtracts the barycentre.
    """

    kind: str = "box"
    scale: float = 1.0
    dirichlet_alpha: float = 1.0
    centered: bool = True


def random_measure(dim: int, n_atoms: int, seed: int,
                   spec: GeneratorSpec = GeneratorSpec()) -> DiscreteMeasure:
    """Deterministic random measure for the given (seed, spec)."""
    if dim < 1 or n_atoms < 1:
        raise ParseError("dim and n_atoms must be >= 1")
    rng = np.random.default_rng(seed)
    if spec.kind == "box":
        pos = rng.uniform(-spec.scale, spec.scale, size=(n_atoms, dim))
    elif spec.kind == "ball":
        raw = rng.normal(size=(n_atoms, dim))
        raw /= np.maximum(np.linalg.norm(raw, axis=1, keepdims=True), 1e-300)
        r = spec.scale * rng.uniform(size=(n_atoms, 1)) ** (1.0 / dim)
        pos = raw * r
    else:
        raise ParseError(f"unknown generator kind {spec.kind!r}")
    w = rng.dirichlet(np.full(n_atoms, spec.dirichlet_alpha))
    # Dirichlet can return exact zeros at tiny alpha; nudge and renormalize
    w = np.maximum(w, 1e-12)
    w = w / w.sum()
    if spec.centered:
        pos = pos - w @ pos
    return DiscreteMeasure(pos, w)


def measures_equal(a: DiscreteMeasure, b: DiscreteMeasure, tol: float) -> bool:
    """Equality as atomic measures: nearest-atom matching within tol."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dim {a.dim} vs {b.dim}")
    pa, wa = _merge_atoms(a.positions, a.weights, tol)
    pb, wb = _merge_atoms(b.positions, b.weights, tol)
    if pa.shape[0] != pb.shape[0]:
        return False
    used = np.zeros(pb.shape[0], dtype=bool)
    for p, w in zip(pa, wa):
        dists = np.linalg.norm(pb - p, axis=1)
        dists[used] = np.inf
        j = int(np.argmin(dists))
        if dists[j] > tol or abs(wb[j] - w) > tol:
            return False
        used[j] = True
    return True


def to_json_dict(m: DiscreteMeasure) -> dict:
    """Measure as a plain dict in the documented JSON schema."""
    return {
        "dim": int(m.dim),
        "atoms": [{"x": [float(v) for v in p], "w": float(w)}
                  for p, w in zip(m.positions, m.weights)],
    }


def from_json_dict(data: dict) -> DiscreteMeasure:
    """Parse the documented JSON schema; renormalizes within 1e-9."""
    try:
        dim = int(data["dim"])
        atoms = data["atoms"]
        pos = np.array([[float(v) for v in a["x"]] for a in atoms])
        w = np.array([float(a["w"]) for a in atoms])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed measure JSON: {exc}") from exc
    if pos.ndim != 2 or pos.shape[1] != dim:
        raise ParseError("atom vector length inconsistent with dim")
    if np.any(w <= 0):
        raise ParseError("atom weight <= 0")
    total = w.sum()
    if abs(total - 1.0) > TOL_PARSE_RENORM:
        raise ParseError(f"weights sum to {total!r}, beyond 1e-9 of 1")
    return DiscreteMeasure(pos, w / total)


def save_measure(m: DiscreteMeasure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(m), fh, indent=1)
        fh.write("\n")


def load_measure(path) -> DiscreteMeasure:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read measure from {path}: {exc}") from exc
    return from_json_dict(data)
