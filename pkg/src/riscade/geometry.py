"""Angle and vector primitives shared by the panel, channel, and cascade code.

Conventions used package-wide:

* Spherical directions use the zenith angle measured from +z and the azimuth
  measured from +x toward +y, both in radians. Azimuths are normalized into
  ``[0, 2*pi)``.
* Orientations are intrinsic Z-Y-X rotation triples (bearing about z, then
  downtilt about the rotated y, then slant about the rotated x).
  ``rotation_zyx`` returns the matrix mapping local coordinates to global.
* The reflecting panel's local frame has +z along the panel normal. Element
  grids live in the local z=0 plane, are indexed 1-based, and are centered on
  the panel origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class SphericalAngle:
    """A direction on the unit sphere. Zenith in [0, pi], azimuth in [0, 2*pi)."""

    zenith: float
    azimuth: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.zenith) or not math.isfinite(self.azimuth):
            raise ValueError("angles must be finite")
        if not 0.0 <= self.zenith <= math.pi:
            raise ValueError(f"zenith must lie in [0, pi], got {self.zenith}")
        az = self.azimuth % TWO_PI
        if az >= TWO_PI:  # rounding of tiny negative inputs
            az = 0.0
        object.__setattr__(self, "azimuth", az)


@dataclass(frozen=True)
class Direction3:
    """Unit vector in Cartesian coordinates (norm 1 within 1e-12)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"direction must be unit length, |v| = {norm!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @classmethod
    def from_array(cls, v: np.ndarray) -> "Direction3":
        return cls(float(v[0]), float(v[1]), float(v[2]))


@dataclass(frozen=True)
class Position3:
    """A point in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError("position components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def normalize(v: np.ndarray) -> Direction3:
    """Unit direction along ``v``; rejects near-zero vectors."""
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm < 1e-12:
        raise ValueError("cannot normalize a near-zero vector")
    return Direction3.from_array(v / norm)


def direction_from_angles(angle: SphericalAngle) -> Direction3:
    """Unit vector (sin z cos a, sin z sin a, cos z) for zenith z, azimuth a."""
    sz = math.sin(angle.zenith)
    return Direction3(
        sz * math.cos(angle.azimuth),
        sz * math.sin(angle.azimuth),
        math.cos(angle.zenith),
    )


def angles_from_direction(direction: Direction3) -> SphericalAngle:
    """Inverse of :func:`direction_from_angles`. Azimuth is 0 at the poles."""
    z = min(1.0, max(-1.0, direction.z))
    zenith = math.acos(z)
    if abs(direction.x) == 0.0 and abs(direction.y) == 0.0:
        return SphericalAngle(zenith, 0.0)
    return SphericalAngle(zenith, math.atan2(direction.y, direction.x))


def element_position(x: int, y: int, count_x: int, count_y: int, spacing: float) -> Position3:
    """Center of grid element (x, y), 1-based, centroid of the grid at the origin."""
    if spacing <= 0.0:
        raise ValueError("spacing must be positive")
    if not (1 <= x <= count_x and 1 <= y <= count_y):
        raise ValueError(f"element index ({x}, {y}) outside 1..{count_x} x 1..{count_y}")
    return Position3(
        (x - (1 + count_x) / 2.0) * spacing,
        (y - (1 + count_y) / 2.0) * spacing,
        0.0,
    )


def element_grid(count_x: int, count_y: int, spacing: float) -> np.ndarray:
    """All element positions as an array of shape (count_x, count_y, 3)."""
    if count_x < 1 or count_y < 1:
        raise ValueError("element counts must be >= 1")
    if spacing <= 0.0:
        raise ValueError("spacing must be positive")
    gx = (np.arange(1, count_x + 1) - (1 + count_x) / 2.0) * spacing
    gy = (np.arange(1, count_y + 1) - (1 + count_y) / 2.0) * spacing
    out = np.zeros((count_x, count_y, 3))
    out[:, :, 0] = gx[:, None]
    out[:, :, 1] = gy[None, :]
    return out


def rotation_zyx(bearing: float, downtilt: float, slant: float) -> np.ndarray:
    """Rotation matrix mapping local coordinates to global ones.

    Intrinsic Z-Y-X composition: Rz(bearing) @ Ry(downtilt) @ Rx(slant).
    """
    ca, sa = math.cos(bearing), math.sin(bearing)
    cb, sb = math.cos(downtilt), math.sin(downtilt)
    cg, sg = math.cos(slant), math.sin(slant)
    rz = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cb, 0.0, sb], [0.0, 1.0, 0.0], [-sb, 0.0, cb]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cg, -sg], [0.0, sg, cg]])
    return rz @ ry @ rx


@dataclass(frozen=True)
class Pose:
    """Placement of a local frame: origin plus a bearing/downtilt/slant triple."""

    origin: Position3 = Position3(0.0, 0.0, 0.0)
    bearing: float = 0.0
    downtilt: float = 0.0
    slant: float = 0.0

    def rotation(self) -> np.ndarray:
        """Local-to-global rotation matrix (orthonormal by construction)."""
        return rotation_zyx(self.bearing, self.downtilt, self.slant)


def to_local(pose: Pose, direction: Direction3) -> Direction3:
    """Express a global-frame unit vector in the pose's local frame."""
    v = pose.rotation().T @ direction.as_array()
    return Direction3.from_array(v)


def to_global(pose: Pose, direction: Direction3) -> Direction3:
    """Express a local-frame unit vector in the global frame."""
    v = pose.rotation() @ direction.as_array()
    return Direction3.from_array(v)


def angles_to_local(pose: Pose, angle: SphericalAngle) -> SphericalAngle:
    """Global spherical angles -> local spherical angles."""
    return angles_from_direction(to_local(pose, direction_from_angles(angle)))
