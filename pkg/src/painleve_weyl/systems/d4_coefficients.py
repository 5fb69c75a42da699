"""Second, independent reading of the D4(1) display: monomial -> coefficient.

Keys are monomials (or, for the printed products, whole factored blocks) in
x, y, z; values are coefficient expressions in alpha_i and eta.  Used only
to cross-check :mod:`transcriptions` and the frozen table.
"""

from __future__ import annotations

from ..algebra import MultiPoly, PolyRing

_BLOCK = "x*(y-1)*y*z*(x-eta)*(2*x-2*y+1-eta)"

P1_COEFFS = {
    _BLOCK: "-2",
    "x^3*y": "-2*(2*alpha0+2*alpha1+4*alpha2+alpha3+alpha4)",
    "x*y^3": "-2*(alpha0+alpha1)",
    "x^2*y^2": "5*alpha0+5*alpha1+6*alpha2+alpha3+alpha4",
    "x^2*y": "-(5*alpha0+5*alpha1+6*alpha2+2*alpha3) + 3*(2*alpha0+2*alpha1+4*alpha2+alpha3+alpha4)*eta",
    "x*y^2": "3*(alpha0+alpha1) - (4*alpha0+6*alpha1+6*alpha2+alpha3+alpha4)*eta",
    "x^4": "1",
    "x^3": "2*(alpha0+alpha1+2*alpha2+alpha3-eta)",
    "y^3": "2*alpha1*eta",
    "x^2": "(alpha0+alpha1+2*alpha2+alpha3)*(eta^2-3*eta+1) + alpha4*eta^2",
    "y^2": "alpha1*(eta-3)*eta",
    "x*y": "-(alpha0+alpha1) + 2*(2*alpha0+3*alpha1+3*alpha2+alpha3)*eta"
           " - (2*alpha0+2*alpha1+4*alpha2+alpha3+alpha4)*eta^2",
    "x": "(alpha0+alpha1+2*alpha2+alpha3)*(eta-1)*eta",
    "y": "-alpha1*(eta-1)*eta",
}

P2_COEFFS = {
    _BLOCK: "2",
    "x^3*y": "-2*(alpha3+alpha4)",
    "x*y^3": "-2*(alpha0+alpha1+4*alpha2+2*alpha3+2*alpha4)",
    "x^2*y^2": "alpha0+alpha1+6*alpha2+5*alpha3+5*alpha4",
    "x^2*y": "-(alpha0+alpha1+6*alpha2+4*alpha3+6*alpha4) + 3*(alpha3+alpha4)*eta",
    "x*y^2": "3*(alpha0+alpha1+4*alpha2+2*alpha3+2*alpha4) - (2*alpha0+6*alpha2+5*alpha3+5*alpha4)*eta",
    "y^4": "1",
    "x^3": "2*alpha4",
    "y^3": "2*((alpha0+2*alpha2+alpha3+alpha4)*eta - 1)",
    "x^2": "-alpha4*(3*eta-1)",
    "y^2": "1 - 3*(alpha0+2*alpha2+alpha3+alpha4)*eta + (alpha0+2*alpha2+alpha3+alpha4)*eta^2",
    "x*y": "-(alpha0+alpha1+4*alpha2+2*alpha3+2*alpha4) + 2*(alpha0+3*alpha2+2*alpha3+3*alpha4)*eta"
           " - (alpha3+alpha4)*eta^2",
    "x": "alpha4*(eta-1)*eta",
    "y": "-(alpha0+2*alpha2+alpha3+alpha4)*(eta-1)*eta",
}

P3_COEFFS = {
    "(2*x-2*y+1-eta)*(2*x^2*y+2*x*y^2-x^2-y^2*eta-2*(eta+1)*x*y+eta*(x+y))*z^2": "1",
    "x^3*z": "-2*(alpha3+alpha4)",
    "y^3*z": "2*(alpha0+alpha1)",
    "x^2*y*z": "2*(alpha0+alpha1+6*alpha2+2*alpha3+2*alpha4)",
    "x*y^2*z": "-2*(2*alpha0+2*alpha1+6*alpha2+alpha3+alpha4)",
    "x^2*z": "-(alpha0+alpha1+6*alpha2+4*alpha3) + 3*(alpha3+alpha4)*eta",
    "y^2*z": "-3*(alpha0+alpha1) + (4*alpha0+6*alpha2+alpha3+alpha4)*eta",
    "x*y*z": "-4*(-(alpha0+alpha1+3*alpha2+alpha3) + (alpha0+3*alpha2+alpha3+alpha4)*eta)",
    "x*z": "-(alpha0+alpha1+4*alpha2+2*alpha3) + 2*(alpha0+3*alpha2+2*alpha3)*eta - (alpha3+alpha4)*eta^2",
    "y*z": "alpha0+alpha1 - 2*(2*alpha0+3*alpha2+alpha3)*eta + (2*alpha0+4*alpha2+alpha3+alpha4)*eta^2",
    "z": "-(alpha0+2*alpha2+alpha3)*(eta-1)*eta",
    "x^2": "alpha2*(alpha0+alpha1+2*alpha2-alpha3-alpha4)",
    "y^2": "alpha2*(alpha0+alpha1-2*alpha2-alpha3-alpha4)",
    "x*y": "-2*alpha2*(alpha0+alpha1-alpha3-alpha4)",
    "x": "alpha2*(alpha0+alpha1-2*alpha3 - (2*alpha0+2*alpha2-alpha3-alpha4)*eta)",
    "y": "alpha2*(-alpha0-alpha1+2*alpha2+2*alpha3 + (2*alpha0-alpha3-alpha4)*eta)",
    "1": "alpha2*(eta-1)*(alpha2+alpha3+(alpha0+alpha2)*eta)",
}


def assemble(table: dict, ring: PolyRing) -> MultiPoly:
    total = ring.zero
    for mono, coeff in table.items():
        total = total + ring.parse(mono) * ring.parse(coeff)
    return total
