"""Function fields of genus 0 and 1: places, residues, lattices and logarithmic independence."""

from .quadfield import QuadElem, QuadField, RationalFunctionField
from .places import (
    Divisor,
    Place,
    divisor,
    infinite_places,
    places_above,
    places_and_valuation,
    pole_places,
    residue_of_form,
    residue_sum,
    valuation,
)
from .elliptic import EllCurve, EllPoint, TorsionResult, ell_add, ell_mul, torsion_order
from .weierstrass import WeierstrassMap, class_of_divisor, principal_function, quartic_to_weierstrass
from .logindep import (
    LogIndepReport,
    ZLatticesResult,
    character_logderivs,
    log_derivative,
    log_independent,
    residue_divisor,
    verify_certificate,
    z_lattices,
)
