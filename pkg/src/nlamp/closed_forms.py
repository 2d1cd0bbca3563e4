"""Closed-form predictions for the three-splitter amplifier.

Kept free of any simulator dependency so the two routes can referee each
other: the scheme module computes the same quantities by explicit state
propagation and the test suite requires agreement.

All expressions depend on the splitter reflectivities only through the
products T = t1 t2 t3 and R = r1 r2 r3, and on the input only through
|alpha|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SplitterTriple:
    """Reflectivities of the three beam splitters, with derived products."""

    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        for r in (self.r1, self.r2, self.r3):
            if not 0.0 <= r < 1.0:
                raise ValueError(f"reflectivity must be in [0, 1), got {r}")

    @classmethod
    def symmetric(cls, r: float) -> "SplitterTriple":
        return cls(r, r, r)

    @property
    def t1(self) -> float:
        return math.sqrt(1.0 - self.r1 * self.r1)

    @property
    def t2(self) -> float:
        return math.sqrt(1.0 - self.r2 * self.r2)

    @property
    def t3(self) -> float:
        return math.sqrt(1.0 - self.r3 * self.r3)

    @property
    def transmission_product(self) -> float:
        return self.t1 * self.t2 * self.t3

    @property
    def reflection_product(self) -> float:
        return self.r1 * self.r2 * self.r3


def p_succ_products(alpha_abs: float, t_product: float, r_product: float) -> float:
    """Success probability from the splitter products T and R directly."""
    ta2 = (t_product * alpha_abs) ** 2
    ra2 = (r_product * alpha_abs) ** 2
    return (1.0 + ta2 * (3.0 + ta2)) * ra2 * math.exp(ta2 - alpha_abs * alpha_abs)


def g_eff_products(alpha_abs: float, t_product: float) -> float:
    """Effective gain from the transmission product T directly."""
    ta2 = (t_product * alpha_abs) ** 2
    return t_product * (2.0 + 4.0 * ta2 + ta2 * ta2) / (1.0 + 3.0 * ta2 + ta2 * ta2)


def p_succ_closed(alpha_abs: float, s: SplitterTriple) -> float:
    """Success probability of the heralded subtract-add-subtract sequence.

    (1 + |T a|^2 (3 + |T a|^2)) |R a|^2 exp(|T a|^2 - |a|^2) with a = |alpha|.
    """
    if alpha_abs < 0:
        raise ValueError("alpha_abs must be non-negative")
    return p_succ_products(alpha_abs, s.transmission_product, s.reflection_product)


def g_eff_closed(alpha_abs: float, s: SplitterTriple) -> float:
    """Effective amplitude gain |⟨a⟩_out| / |⟨a⟩_in| of the success branch.

    T (2 + 4|T a|^2 + |T a|^4) / (1 + 3|T a|^2 + |T a|^4); tends to 2T as
    alpha -> 0 (nominal gain 2 for lossless splitters).
    """
    if alpha_abs < 0:
        raise ValueError("alpha_abs must be non-negative")
    return g_eff_products(alpha_abs, s.transmission_product)


@dataclass(frozen=True)
class ClosedFormFidelity:
    """Effective-fidelity value together with its provenance flag.

    `as_printed` marks that the value follows the published closed form
    verbatim, whose exponent is suspected of a misprint; the numeric
    state-overlap from the scheme module is the authoritative fidelity.
    """

    value: float
    as_printed: bool = True


def f_eff_closed(alpha_abs: float, s: SplitterTriple, g_eff: float) -> ClosedFormFidelity:
    """Effective fidelity against |g_eff alpha⟩, evaluated exactly as printed.

    Numerator (1 + 2 g T |a|^2 + g^2 T^2 |a|^4) exp(-(g^2 - T)^2 |a|^2),
    denominator 1 + 3 |T a|^2 + |T a|^4.
    """
    if alpha_abs < 0:
        raise ValueError("alpha_abs must be non-negative")
    if g_eff <= 0:
        raise ValueError("g_eff must be positive")
    big_t = s.transmission_product
    a2 = alpha_abs * alpha_abs
    ta2 = big_t * big_t * a2
    numerator = (
        1.0 + 2.0 * g_eff * big_t * a2 + g_eff * g_eff * big_t * big_t * a2 * a2
    ) * math.exp(-((g_eff * g_eff - big_t) ** 2) * a2)
    denominator = 1.0 + 3.0 * ta2 + ta2 * ta2
    return ClosedFormFidelity(numerator / denominator)


def f_eff_conjectured(alpha_abs: float, s: SplitterTriple, g_eff: float) -> float:
    """Effective fidelity with the exponent read as (g_eff - T)^2 |a|^2.

    The printed exponent squares g_eff; replacing g_eff^2 by g_eff makes the
    closed form agree with the simulated state overlap to machine precision,
    so this variant is the one cross-checked against the simulator.
    """
    if alpha_abs < 0:
        raise ValueError("alpha_abs must be non-negative")
    big_t = s.transmission_product
    a2 = alpha_abs * alpha_abs
    ta2 = big_t * big_t * a2
    numerator = (
        1.0 + 2.0 * g_eff * big_t * a2 + g_eff * g_eff * big_t * big_t * a2 * a2
    ) * math.exp(-((g_eff - big_t) ** 2) * a2)
    return numerator / (1.0 + 3.0 * ta2 + ta2 * ta2)


def detector_adjusted(p: float, eta_qnd: float, eta_pd1: float, eta_pd2: float) -> float:
    """Scale an ideal branch probability by the three detector efficiencies."""
    for eta in (eta_qnd, eta_pd1, eta_pd2):
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"detector efficiency must be in [0, 1], got {eta}")
    return p * eta_qnd * eta_pd1 * eta_pd2
