# File: Units.py
# Path: /root/pkg/Src/TorsiLimit/Core/Units.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 10:20AM

"""Per-unit conversions for shaft mechanics and power quantities.

Mechanical angle and electrical angle are related by theta = (2/p_f) * delta.
The machine torque base is the rated MVA over the mechanical synchronous
speed, so one p.u. torque at synchronous speed is one p.u. power.
"""

import math

import numpy as np

from TorsiLimit.Core.Models import ShaftAssembly, StressUnits
from TorsiLimit.ErrorHandling import DomainError

_PA_PER_UNIT = {
    StressUnits.PA: 1.0,
    StressUnits.MPA: 1e6,
}


def mechanical_speed(sync_speed: float, pole_count: int) -> float:
    """Mechanical synchronous speed in rad/s."""
    return sync_speed * 2.0 / pole_count


def torque_base(mva: float, sync_speed: float, pole_count: int) -> float:
    """Machine torque base in N*m."""
    if not (mva > 0 and sync_speed > 0 and pole_count >= 2):
        raise DomainError("torque base needs positive MVA, speed and pole count")
    return mva * 1e6 / mechanical_speed(sync_speed, pole_count)


def polar_moment(radius_R: float) -> float:
    """Polar second moment of a solid circular section, J = pi R^4 / 2."""
    return math.pi * radius_R**4 / 2.0


def stiffness_si(radius_R: float, length_l: float, shear_modulus_G: float) -> float:
    """Torsional stiffness G*J/l in N*m per mechanical radian."""
    if not (radius_R > 0 and length_l > 0 and shear_modulus_G > 0):
        raise DomainError("section geometry and shear modulus must be positive")
    return shear_modulus_G * polar_moment(radius_R) / length_l


def section_stiffness(
    radius_R: float,
    length_l: float,
    shear_modulus_G: float,
    mva: float,
    sync_speed: float,
    pole_count: int,
) -> float:
    """Section stiffness in p.u. torque per electrical radian.

    Args:
        radius_R: Shaft radius in meters
        length_l: Section length in meters
        shear_modulus_G: Shear modulus in Pa
        mva: Machine MVA rating (torque base)
        sync_speed: Synchronous speed in electrical rad/s
        pole_count: Number of poles p_f

    Returns:
        K_r in p.u. torque per electrical radian
    """
    k_mech = stiffness_si(radius_R, length_l, shear_modulus_G)
    return k_mech * (2.0 / pole_count) / torque_base(mva, sync_speed, pole_count)


def stiffness_pu_to_si(
    stiffness_pu: float, mva: float, sync_speed: float, pole_count: int
) -> float:
    """Inverse of the per-unitization in section_stiffness (N*m per mech-rad)."""
    return stiffness_pu * torque_base(mva, sync_speed, pole_count) * pole_count / 2.0


def pa_per_unit(units: StressUnits) -> float:
    if units == StressUnits.PU_TORQUE:
        raise DomainError("p.u. torque stresses have no SI scale")
    return _PA_PER_UNIT[units]


def stress_coefficients(shaft: ShaftAssembly, units: StressUnits) -> np.ndarray:
    """Stress per electrical radian of twist for every section.

    SI units use the surface shear stress G*R*theta/l with theta = (2/p_f)*delta.
    p.u. torque units use the section stiffness itself, so stress equals the
    transmitted torque.
    """
    if units == StressUnits.PU_TORQUE:
        return np.array([s.stiffness_K for s in shaft.sections], dtype=float)
    if not shaft.has_geometry:
        raise DomainError(
            f"shaft '{shaft.label}': stress in {units.value} needs radius and length "
            "on every section; use a pu_torque material otherwise"
        )
    scale = pa_per_unit(units)
    return np.array(
        [
            s.shear_modulus_G * s.radius_R / s.length_l * (2.0 / shaft.pole_count) / scale  # type: ignore[operator]
            for s in shaft.sections
        ],
        dtype=float,
    )


def mw_to_pu(value_mw: float, mva: float) -> float:
    """Convert MW to p.u. on the given base (arrays pass through elementwise)."""
    return value_mw / mva


def pu_to_mw(value_pu: float, mva: float) -> float:
    """Convert p.u. on the given base to MW."""
    return value_pu * mva


def rebase_impedance(z_pu: complex, from_mva: float, to_mva: float) -> complex:
    """Move an impedance between MVA bases at a common voltage base."""
    return z_pu * to_mva / from_mva
