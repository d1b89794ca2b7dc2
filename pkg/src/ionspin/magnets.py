"""Analytic field of Halbach dipole cylinders and spheres.

All functions return the homogeneous field magnitude at the centre, in T.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import GeometryError

NDFEB_REMANENCE_TEMPCO = -0.001  # 1/K


@dataclass(frozen=True)
class HalbachGeometry:
    """``n_segments=None`` means continuous magnetisation, ``length_z0=None`` infinite.

    ``length_z0`` is the half-length: the magnet spans -z0 <= z <= z0.
    """

    remanence_Br: float
    r_inner: float
    r_outer: float
    n_segments: int | None = None
    length_z0: float | None = None
    shape: str = "cylinder"

    def __post_init__(self):
        if not 0 < self.r_inner <= self.r_outer:
            raise GeometryError(f"need 0 < r_inner <= r_outer, got {self.r_inner}, {self.r_outer}")
        if self.n_segments is not None and self.n_segments < 4:
            raise GeometryError(f"need at least 4 segments, got {self.n_segments}")
        if self.length_z0 is not None and not self.length_z0 > 0:
            raise GeometryError(f"length must be positive, got {self.length_z0}")
        if self.shape not in ("cylinder", "sphere"):
            raise GeometryError(f"unknown shape {self.shape!r}")

    @property
    def log_ratio(self) -> float:
        return math.log(self.r_outer / self.r_inner)


def _require(cond, msg):
    if not cond:
        raise GeometryError(msg)


def ideal_cylinder_field(g: HalbachGeometry) -> float:
    """B_r ln(r_o / r_i)."""
    _require(g.shape == "cylinder" and g.n_segments is None and g.length_z0 is None,
             "ideal_cylinder_field needs a continuous, infinitely long cylinder")
    return g.remanence_Br * g.log_ratio


def segment_factor(n_segments: int) -> float:
    """sin(2 pi / N) / (2 pi / N)."""
    x = 2 * math.pi / n_segments
    return math.sin(x) / x


def segmented_cylinder_field(g: HalbachGeometry) -> float:
    _require(g.shape == "cylinder" and g.n_segments is not None,
             "segmented_cylinder_field needs n_segments")
    return g.remanence_Br * segment_factor(g.n_segments) * g.log_ratio


def finite_length_reduction(z0: float, r_inner: float, r_outer: float) -> float:
    """Reduction f(z0) so that B = B_r (ln(r_o/r_i) - f(z0)) for half-length z0."""
    so = math.hypot(z0, r_outer)
    si = math.hypot(z0, r_inner)
    return z0 / (2 * so) - z0 / (2 * si) + math.log((z0 + so) / (z0 + si))


def finite_length_field(g: HalbachGeometry) -> float:
    _require(g.shape == "cylinder" and g.length_z0 is not None,
             "finite_length_field needs length_z0")
    f = finite_length_reduction(g.length_z0, g.r_inner, g.r_outer)
    return g.remanence_Br * (g.log_ratio - f)


def sphere_field(g: HalbachGeometry) -> float:
    """4/3 B_r ln(r_o / r_i)."""
    _require(g.shape == "sphere", "sphere_field needs shape='sphere'")
    return 4.0 / 3.0 * g.remanence_Br * g.log_ratio


def halbach_field(g: HalbachGeometry, coercivity_limit: float | None = None) -> float:
    """Dispatch on geometry; segmentation and finite length combine multiplicatively.

    Emits a :class:`UserWarning` when the result exceeds ``coercivity_limit`` (T).
    """
    if g.shape == "sphere":
        b = sphere_field(g)
    else:
        b = g.remanence_Br * g.log_ratio
        if g.length_z0 is not None:
            b = finite_length_field(g)
        if g.n_segments is not None:
            b *= segment_factor(g.n_segments)
    if coercivity_limit is not None and b > coercivity_limit:
        warnings.warn(f"field {b:.3f} T exceeds coercivity limit {coercivity_limit} T; "
                      "local demagnetisation is likely", stacklevel=2)
    return b


def remanence_at(Br: float, delta_T: float, tempco: float = NDFEB_REMANENCE_TEMPCO) -> float:
    """Linear temperature scaling Br (1 + tempco * delta_T), delta_T in K."""
    return Br * (1.0 + tempco * delta_T)
