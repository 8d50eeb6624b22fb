"""Error norms, convergence rates, and reference-solution comparison.

Three L1-type norms are used: the plain error against a reference field,
the error of the perturbation from the discrete equilibrium against a
reference perturbation, and the deviation from the discrete equilibrium
itself (the well-balancing diagnostic).
"""

from dataclasses import dataclass

import numpy as np

from hydrostat.errors import InvalidStateError
from hydrostat.mesh import GL2_OFFSETS, GL2_WEIGHTS, Grid1D


def _cell_volume(grid):
    return grid.dx if isinstance(grid, Grid1D) else grid.dx * grid.dy


def err1(q, q_ref, grid):
    """Plain L1 error between two fields of cell averages."""
    q = np.asarray(q, dtype=float)
    q_ref = np.asarray(q_ref, dtype=float)
    if q.shape != q_ref.shape:
        raise ValueError("field shapes differ: %r vs %r"
                         % (q.shape, q_ref.shape))
    return _cell_volume(grid) * float(np.sum(np.abs(q - q_ref)))


def err1_delta(q, q_eq_averages, delta_ref, grid):
    """L1 error of the perturbation from the discrete equilibrium."""
    q = np.asarray(q, dtype=float)
    return err1(q - np.asarray(q_eq_averages, dtype=float), delta_ref, grid)


def err_eq1(q, q_eq_averages, grid):
    """L1 deviation from the discrete equilibrium (err1_delta with zero
    reference perturbation)."""
    return err1(q, q_eq_averages, grid)


def downsample(q, ratio, dim=1):
    """Block means over the trailing ``dim`` axes, coarsening by ``ratio``."""
    q = np.asarray(q, dtype=float)
    ratio = int(ratio)
    if ratio == 1:
        return q.copy()
    for ax in range(-dim, 0):
        if q.shape[ax] % ratio != 0:
            raise ValueError("ratio %d does not divide resolution %d"
                             % (ratio, q.shape[ax]))
    if dim == 1:
        return q.reshape(q.shape[:-1] + (q.shape[-1] // ratio, ratio)) \
            .mean(axis=-1)
    if dim == 2:
        nx, ny = q.shape[-2], q.shape[-1]
        q = q.reshape(q.shape[:-2] + (nx // ratio, ratio, ny // ratio, ratio))
        return q.mean(axis=(-3, -1))
    raise ValueError("dim must be 1 or 2")


def convergence_rates(errors):
    """log2 ratios of consecutive errors; NaN where a ratio is undefined."""
    errors = np.asarray(errors, dtype=float)
    if errors.ndim != 1 or len(errors) < 2:
        raise ValueError("need a flat list of at least two errors")
    with np.errstate(divide="ignore", invalid="ignore"):
        rates = np.log2(errors[:-1] / errors[1:])
    return np.where(np.isfinite(rates), rates, np.nan)


@dataclass
class ErrorReport:
    """Per-resolution errors of one norm kind with pairwise rates."""

    kind: str  # "err1" | "err1_delta" | "err_eq1"
    resolutions: tuple
    errors: np.ndarray
    variable: str = "rho"

    def __post_init__(self):
        if self.kind not in ("err1", "err1_delta", "err_eq1"):
            raise ValueError("unknown norm kind %r" % self.kind)
        self.resolutions = tuple(int(n) for n in self.resolutions)
        self.errors = np.asarray(self.errors, dtype=float)
        if len(self.resolutions) != len(self.errors):
            raise ValueError("resolutions and errors disagree in length")

    @property
    def doubling(self):
        r = self.resolutions
        return all(r[k + 1] == 2 * r[k] for k in range(len(r) - 1))

    @property
    def rates(self):
        """Rates for consecutive doublings; all-NaN when not doubling."""
        if len(self.resolutions) < 2:
            return np.array([])
        if not self.doubling:
            return np.full(len(self.resolutions) - 1, np.nan)
        return convergence_rates(self.errors)


def sound_crossing_time(sound_speed, x_min, x_max, n=4096):
    """Back-and-forth acoustic travel time 2 * integral of 1/c_s.

    ``sound_speed`` maps positions to c_s > 0; the integral uses the same
    composite two-point Gauss rule as the solver.
    """
    dx = (x_max - x_min) / n
    centers = x_min + (np.arange(n) + 0.5) * dx
    nodes = centers[None, :] + GL2_OFFSETS[:, None] * dx
    c = np.asarray(sound_speed(nodes), dtype=float)
    if not np.all(c > 0.0):
        raise InvalidStateError("non-positive sound speed along the path")
    w = GL2_WEIGHTS[:, None]
    return 2.0 * dx * float(np.sum(w / c))


def radial_to_grid2d(r_ref, q_ref, grid):
    """Cell averages on a 2D grid of a radially symmetric 1D profile.

    The profile (r_ref, q_ref) is sampled by linear interpolation at the
    radii of the 2D quadrature nodes and averaged per cell, so the mapping
    is accurate enough not to dominate third-order comparisons.
    """
    si, sj = grid.interior
    x = grid.nodes_x[:, None, si, None]
    y = grid.nodes_y[None, :, None, sj]
    r = np.sqrt(x * x + y * y)
    vals = np.interp(r, r_ref, q_ref)
    return np.mean(vals, axis=(0, 1))
