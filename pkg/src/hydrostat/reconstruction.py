"""CWENO3 reconstruction: a full in-cell parabola from three cell averages.

The parabola is expressed in the scaled local coordinate
xi = (x - x_center) / dx in [-1/2, 1/2], so coefficients are resolution
independent.  Linear weights are the classical (1/4, 1/2, 1/4) choice with
Jiang-Shu smoothness indicators and a scale-invariant epsilon, so that
reconstructing lambda * data yields lambda * polynomial.
"""

import numpy as np

from hydrostat.errors import OutOfCellError

D_LEFT = 0.25
D_CENTER = 0.5
D_RIGHT = 0.25
EPSILON = 1.0e-6


def cweno3_parabola(a_minus, a_center, a_plus):
    """CWENO3 coefficients (c0, c1, c2) of c0 + c1*xi + c2*xi^2.

    Inputs are the three consecutive cell averages; all arguments may be
    arrays (the reconstruction is elementwise over cells).  The parabola's
    own cell average is exactly ``a_center`` for any nonlinear weights.
    """
    a_minus = np.asarray(a_minus, dtype=float)
    a_center = np.asarray(a_center, dtype=float)
    a_plus = np.asarray(a_plus, dtype=float)

    dl = a_center - a_minus
    dr = a_plus - a_center
    q1 = 0.5 * (dl + dr)
    q2 = 0.5 * (dr - dl)

    beta_l = dl * dl
    beta_r = dr * dr
    beta_c = (13.0 / 3.0) * q2 * q2 + q1 * q1

    scale = np.maximum(np.abs(a_minus),
                       np.maximum(np.abs(a_center), np.abs(a_plus)))
    eps = EPSILON * np.maximum(1.0, scale * scale)

    al = D_LEFT / (eps + beta_l) ** 2
    ac = D_CENTER / (eps + beta_c) ** 2
    ar = D_RIGHT / (eps + beta_r) ** 2
    wsum = al + ac + ar
    wl = al / wsum
    wc = ac / wsum
    wr = 1.0 - wl - wc

    c0 = a_center - wc * q2 / 6.0
    c1 = wl * dl + wr * dr + wc * q1
    c2 = 2.0 * wc * q2
    return c0, c1, c2


def parabola_eval(coeffs, xi):
    """Evaluate (c0, c1, c2) at local coordinate xi."""
    c0, c1, c2 = coeffs
    return c0 + xi * (c1 + xi * c2)


class ReconstructionPolynomial:
    """Per-cell CWENO3 parabola, evaluable at physical points in its cell."""

    def __init__(self, coeffs, x_center, dx):
        self.coeffs = np.asarray(coeffs)  # (..., 3) trailing coefficient axis
        self.x_center = float(x_center)
        self.dx = float(dx)

    def _local(self, x):
        xi = (np.asarray(x) - self.x_center) / self.dx
        if np.any(np.abs(xi) > 0.5 + 1e-12):
            raise OutOfCellError("evaluation point outside the cell")
        return xi

    def __call__(self, x):
        xi = self._local(x)
        c = np.moveaxis(self.coeffs, -1, 0)
        return parabola_eval((c[0], c[1], c[2]), xi)

    def cell_average(self):
        c = np.moveaxis(self.coeffs, -1, 0)
        return c[0] + c[2] / 12.0


def cweno3_1d(stencil, dx, x_center=0.0):
    """Reconstruct a cell from 3 consecutive averages (componentwise).

    ``stencil`` is (3,) for a scalar quantity or (ncomp, 3) for a state.
    """
    stencil = np.asarray(stencil, dtype=float)
    if not np.all(np.isfinite(stencil)):
        raise ValueError("non-finite cell averages in reconstruction stencil")
    am, a0, ap = stencil[..., 0], stencil[..., 1], stencil[..., 2]
    c0, c1, c2 = cweno3_parabola(am, a0, ap)
    return ReconstructionPolynomial(np.stack([c0, c1, c2], axis=-1),
                                    x_center, dx)


class Reconstruction2D:
    """Dimension-by-dimension CWENO3 on a 3x3 stencil of cell averages."""

    def __init__(self, stencil, dx, dy, x_center=0.0, y_center=0.0):
        stencil = np.asarray(stencil, dtype=float)
        if stencil.shape[-2:] != (3, 3):
            raise ValueError("stencil must have trailing shape (3, 3)")
        if not np.all(np.isfinite(stencil)):
            raise ValueError("non-finite cell averages in reconstruction stencil")
        self.stencil = stencil
        self.dx = float(dx)
        self.dy = float(dy)
        self.x_center = float(x_center)
        self.y_center = float(y_center)

    def __call__(self, x, y):
        xi = (x - self.x_center) / self.dx
        eta = (y - self.y_center) / self.dy
        if abs(xi) > 0.5 + 1e-12 or abs(eta) > 0.5 + 1e-12:
            raise OutOfCellError("evaluation point outside the cell")
        s = self.stencil
        rows = [parabola_eval(cweno3_parabola(s[..., 0, j], s[..., 1, j],
                                              s[..., 2, j]), xi)
                for j in range(3)]
        return parabola_eval(cweno3_parabola(rows[0], rows[1], rows[2]), eta)


def reconstruct_2d(stencil, dx, dy, x_center=0.0, y_center=0.0):
    """2D reconstruction from a 3x3 stencil, axes ordered (x-offset, y-offset)."""
    return Reconstruction2D(stencil, dx, dy, x_center, y_center)
