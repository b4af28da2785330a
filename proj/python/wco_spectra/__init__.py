"""Spectra of weighted composition operators f -> w * f(B) on the disc algebra.

Results come back as plain dicts in the same layout as the ``wco`` CLI output.
"""

from ._core import (
    BlaschkeProduct,
    Weight,
    WcoError,
    annulus,
    assemble_spectrum,
    build_t6,
    build_t11,
    classify,
    outer_from_modulus,
    periodic_orbits,
    scan,
    semiconjugacy,
    spectral_radius,
    verify_example6,
)

__all__ = [
    "BlaschkeProduct",
    "Weight",
    "WcoError",
    "annulus",
    "assemble_spectrum",
    "build_t6",
    "build_t11",
    "classify",
    "outer_from_modulus",
    "periodic_orbits",
    "scan",
    "semiconjugacy",
    "spectral_radius",
    "verify_example6",
]
