"""Uniform structured grids with ghost layers and Gauss-Legendre quadrature.

Both the solver and the initial-condition projection use the same two-point
Gauss-Legendre rule (exact up to cubics), which is what makes the preserved
discrete equilibrium a quadrature of the exact one.
"""

import numpy as np

# Two-point Gauss-Legendre rule on the unit cell [-1/2, 1/2].
GL2_OFFSETS = np.array([-0.5 / np.sqrt(3.0), 0.5 / np.sqrt(3.0)])
GL2_WEIGHTS = np.array([0.5, 0.5])

#: Ghost layer width: CWENO3 stencil radius 1 plus one cell of equilibrium
#: extrapolation reach at the boundary.
GHOST = 2


def cell_quadrature(f, x_left, x_right):
    """Integral of f over [x_left, x_right] by two-point Gauss-Legendre."""
    dx = x_right - x_left
    xc = 0.5 * (x_left + x_right)
    nodes = xc + GL2_OFFSETS * dx
    return dx * np.sum(GL2_WEIGHTS * np.asarray([f(x) for x in nodes]), axis=0)


def face_quadrature(f, s_start, s_end):
    """Integral of f along a face parametrized by s in [s_start, s_end]."""
    return cell_quadrature(f, s_start, s_end)


class Grid1D:
    """Uniform 1D grid with ghost cells and per-cell quadrature nodes."""

    def __init__(self, n, x_min=0.0, x_max=1.0, ghost=GHOST):
        if n < 1 or ghost < GHOST:
            raise ValueError("need n >= 1 and ghost >= %d" % GHOST)
        self.n = int(n)
        self.x_min = float(x_min)
        self.x_max = float(x_max)
        self.ghost = int(ghost)
        self.dx = (self.x_max - self.x_min) / self.n

        nfull = self.n + 2 * self.ghost
        i = np.arange(nfull) - self.ghost
        self.interfaces = self.x_min + np.append(i, i[-1] + 1) * self.dx
        self.centers = self.x_min + (i + 0.5) * self.dx
        # Physical quadrature nodes, shape (2, nfull).
        self.nodes = self.centers[None, :] + GL2_OFFSETS[:, None] * self.dx

    @property
    def interior(self):
        return slice(self.ghost, self.ghost + self.n)

    @property
    def interior_centers(self):
        return self.centers[self.interior]

    def cell_average_of(self, f):
        """Cell averages of a pointwise function on all cells (incl. ghosts)."""
        vals = f(self.nodes)
        w = GL2_WEIGHTS.reshape((2,) + (1,) * (np.ndim(vals) - 1))
        return np.sum(w * vals, axis=0)


class Grid2D:
    """Uniform 2D grid with ghost cells and tensor-product quadrature."""

    def __init__(self, nx, ny, x_min=0.0, x_max=1.0, y_min=0.0, y_max=1.0,
                 ghost=GHOST):
        if nx < 1 or ny < 1 or ghost < GHOST:
            raise ValueError("need nx, ny >= 1 and ghost >= %d" % GHOST)
        self.nx = int(nx)
        self.ny = int(ny)
        self.x_min, self.x_max = float(x_min), float(x_max)
        self.y_min, self.y_max = float(y_min), float(y_max)
        self.ghost = int(ghost)
        self.dx = (self.x_max - self.x_min) / self.nx
        self.dy = (self.y_max - self.y_min) / self.ny

        gx = np.arange(self.nx + 2 * self.ghost) - self.ghost
        gy = np.arange(self.ny + 2 * self.ghost) - self.ghost
        self.centers_x = self.x_min + (gx + 0.5) * self.dx
        self.centers_y = self.y_min + (gy + 0.5) * self.dy
        self.nodes_x = self.centers_x[None, :] + GL2_OFFSETS[:, None] * self.dx
        self.nodes_y = self.centers_y[None, :] + GL2_OFFSETS[:, None] * self.dy

    @property
    def interior(self):
        g = self.ghost
        return (slice(g, g + self.nx), slice(g, g + self.ny))

    def cell_average_of(self, f):
        """Cell averages of f(x, y) on all cells, tensor-product GL2 rule."""
        # Nodes as (alpha, beta, i, j) broadcast.
        X = self.nodes_x[:, None, :, None]
        Y = self.nodes_y[None, :, None, :]
        vals = f(X, Y)
        w = np.multiply.outer(GL2_WEIGHTS, GL2_WEIGHTS)
        w = w.reshape(w.shape + (1,) * (np.ndim(vals) - 2))
        return np.sum(w * vals, axis=(0, 1))


def project_initial_conditions(u0, grid):
    """Cell averages of a pointwise state function on the interior cells.

    ``u0`` maps coordinates to an array whose leading axis is the conserved
    component.
    """
    if isinstance(grid, Grid1D):
        nodes = grid.nodes[:, grid.interior]
        vals = u0(nodes)  # (ncomp, 2, n) or (2, n) broadcastable
        vals = np.asarray(vals)
        w = GL2_WEIGHTS.reshape((2, 1))
        return np.sum(w * vals, axis=-2)
    si, sj = grid.interior
    X = grid.nodes_x[:, None, si, None]
    Y = grid.nodes_y[None, :, None, sj]
    vals = np.asarray(u0(X, Y))
    w = np.multiply.outer(GL2_WEIGHTS, GL2_WEIGHTS).reshape((2, 2, 1, 1))
    return np.sum(w * vals, axis=(-4, -3))
