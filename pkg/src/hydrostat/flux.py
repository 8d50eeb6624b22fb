"""Physical Euler fluxes and the HLLC approximate Riemann solver.

Wave speeds are the simple Davis-type estimates
S_L = min(vL - cL, vR - cR), S_R = max(vL + cL, vR + cR) with the standard
HLLC contact speed; the EoS enters through the sound speed only.
"""

import numpy as np

from hydrostat.errors import InvalidStateError


def _split(u, axis):
    """Density, normal/tangential momentum index bookkeeping."""
    ncomp = u.shape[0]
    if ncomp == 3:
        return 1, None
    if ncomp == 4:
        return (1, 2) if axis == 0 else (2, 1)
    raise ValueError("state must have 3 (1D) or 4 (2D) components")


def pressure_of(u, gas):
    """Pressure of a conserved state array (component axis first)."""
    rho = u[0]
    kinetic = 0.5 * np.sum(u[1:-1] ** 2, axis=0) / rho
    e = (u[-1] - kinetic) / rho
    return gas.pressure(rho, e)


def physical_flux(u, gas, axis=0):
    """Euler flux along ``axis`` for a 3- or 4-component conserved state."""
    u = np.asarray(u, dtype=float)
    p = pressure_of(u, gas)
    mn_idx, _ = _split(u, axis)
    vn = u[mn_idx] / u[0]
    f = vn * u
    f[mn_idx] += p
    f[-1] += vn * p
    return f


def hllc(u_left, u_right, gas, axis=0):
    """HLLC numerical flux between two pointwise states.

    Consistent (F(u, u) = f(u)) and exactly upwind in supersonic cases.
    """
    uL = np.asarray(u_left, dtype=float)
    uR = np.asarray(u_right, dtype=float)
    mn_idx, _ = _split(uL, axis)

    pL = pressure_of(uL, gas)
    pR = pressure_of(uR, gas)
    vL = uL[mn_idx] / uL[0]
    vR = uR[mn_idx] / uR[0]
    cL = gas.sound_speed(uL[0], pL)
    cR = gas.sound_speed(uR[0], pR)

    s_left = np.minimum(vL - cL, vR - cR)
    s_right = np.maximum(vL + cL, vR + cR)
    s_star = ((uR[mn_idx] * (s_right - vR) - uL[mn_idx] * (s_left - vL)
               + pL - pR)
              / (uR[0] * (s_right - vR) - uL[0] * (s_left - vL)))

    # Pick the side of the contact, then add the jump to the star state
    # where the interface lies inside the Riemann fan.
    take_left = 0.0 <= s_star
    uK = np.where(take_left, uL, uR)
    vK = np.where(take_left, vL, vR)
    pK = np.where(take_left, pL, pR)
    sK = np.where(take_left, s_left, s_right)

    f = physical_flux(uK, gas, axis)

    subsonic = (s_left < 0.0) & (0.0 <= s_right)
    sK = np.where(subsonic, sK, 0.0)  # sK == 0 -> pure upwind flux
    denom = np.where(subsonic, sK - s_star, 1.0)
    cK = (sK - vK) / denom

    f[0] += sK * (cK - 1.0) * uK[0]
    f[mn_idx] += sK * (cK * uK[0] * s_star - uK[mn_idx])
    if uL.shape[0] == 4:
        mt_idx = _split(uL, axis)[1]
        f[mt_idx] += sK * (cK - 1.0) * uK[mt_idx]
    f[-1] += sK * (cK * (uK[-1] + (s_star - vK)
                         * (uK[0] * s_star
                            + pK / np.where(subsonic, sK - vK, 1.0)))
                   - uK[-1])

    if not np.all(np.isfinite(f)):
        raise InvalidStateError("non-finite HLLC flux")
    return f
