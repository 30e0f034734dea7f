"""Structure maps of the elliptic curve Hopf algebroid and the maps built from them.

A ring map out of B (or Gamma) is fixed by the images of q2, q4 (and r).  We
store it through the images of s = 8 q4, t = mu / 8, q2 and r, and evaluate
monomial by monomial with memoised powers.  Negative powers of s and t need
the images of s^-1 and t^-1: when the image of s (or t) is a single invertible
monomial this is immediate; otherwise we use Delta = s^2 t / 8, which every
map in this module sends to a monomial, and write
s^-1 = s t / (8 Delta), t^-1 = s^2 / (8 Delta).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonInvertibleDenominator
from .rings import (
    BElement,
    GammaElement,
    MFElement,
    mf_to_b,
    q2_gen,
    q4_gen,
    r_gen,
    s_gen,
    t_gen,
)

__all__ = [
    "RingMap",
    "psi_d",
    "phi_f",
    "phi_q",
    "psi_2",
    "psi_2_mf",
    "g",
    "h",
    "eta_R",
    "eta_R_mf",
    "cobar_d0",
    "Phi",
    "Psi",
]


class RingMap:
    """A ring map out of B or Gamma given by the images of s, t, q2 and r.

    Images all live in one target ring (``BElement`` or ``GammaElement``).
    ``r`` may be omitted for maps defined only on B.
    """

    def __init__(self, s, t, q2, r=None, name="map"):
        self.name = name
        self._img = {"s": s, "t": t, "q2": q2, "r": r}
        self._target = type(s)
        self._powers = {"s": {0: s.one(), 1: s}, "t": {0: s.one(), 1: t}}
        self._inv = {}

    def __repr__(self):
        return f"RingMap({self.name})"

    def _inverse_image(self, var):
        if var in self._inv:
            return self._inv[var]
        img = self._img[var]
        try:
            inv = img.inverse()
        except NonInvertibleDenominator:
            S, T = self._img["s"], self._img["t"]
            delta = S * S * T * Fraction(1, 8)
            try:
                dinv = delta.inverse()
            except NonInvertibleDenominator:
                raise NonInvertibleDenominator(
                    f"{self.name}: image of {var} and of Delta are not monomials"
                ) from None
            inv = (S * T if var == "s" else S * S) * dinv * Fraction(1, 8)
        self._inv[var] = inv
        return inv

    def _power(self, var, n):
        table = self._powers[var]
        if n in table:
            return table[n]
        if n > 0:
            val = self._power(var, n - 1) * self._img[var]
        else:
            val = self._power(var, n + 1) * self._inverse_image(var)
        table[n] = val
        return val

    def _monomial_image(self, key):
        i, j, e = key[:3]
        k = key[3] if len(key) > 3 else 0
        out = self._power("s", i) * self._power("t", j)
        if e:
            out = out * self._img["q2"]
        if k:
            r = self._img["r"]
            if r is None:
                raise ValueError(f"{self.name} is not defined on r")
            out = out * r**k
        return out

    def __call__(self, x):
        total = self._target.zero()
        cache = {}
        for key, c in x.terms.items():
            mono_key = key
            if mono_key not in cache:
                cache[mono_key] = self._monomial_image(key)
            total = total + cache[mono_key].scale(c)
        return total


def _gamma(x: BElement) -> GammaElement:
    return GammaElement.from_b(x)


# psi_d: q2 -> -2 q2, q4 -> q2^2 - 4 q4.  On (s, t): s -> 4t, t -> 4s.
_PSI_D = RingMap(
    s=BElement({(0, 1, 0): 4}),
    t=BElement({(1, 0, 0): 4}),
    q2=BElement({(0, 0, 1): -2}),
    name="psi_d",
)

# psi_[2]: multiplication by 2^deg on Gamma.
_PSI_2 = RingMap(
    s=GammaElement({(1, 0, 0, 0): 16}),
    t=GammaElement({(0, 1, 0, 0): 16}),
    q2=GammaElement({(0, 0, 1, 0): 4}),
    r=GammaElement({(0, 0, 0, 1): 4}),
    name="psi_2",
)


def _eta_R_map() -> RingMap:
    q2, q4, r = _gamma(q2_gen()), _gamma(q4_gen()), r_gen()
    q2_img = q2 + 3 * r
    q4_img = q4 + 2 * q2 * r + 3 * r * r
    s_img = 8 * q4_img
    # t = mu / 8 = 2 q2^2 - 8 q4
    t_img = 2 * q2_img * q2_img - 8 * q4_img
    return RingMap(s=s_img, t=t_img, q2=q2_img, name="eta_R")


_ETA_R = None


def _eta() -> RingMap:
    global _ETA_R
    if _ETA_R is None:
        _ETA_R = _eta_R_map()
    return _ETA_R


def psi_d(x: BElement) -> BElement:
    """The dual-isogeny map; s^i t^j q2^e -> 4^(i+j) (-2)^e s^j t^i q2^e."""
    return _PSI_D(x)


def phi_f(x: GammaElement) -> BElement:
    """Set r = 0."""
    if isinstance(x, BElement):
        return x
    return x.r_component(0)


def phi_q(x: GammaElement) -> BElement:
    return psi_d(phi_f(x))


def psi_2(x):
    """Multiplication-by-2 map; on Gamma and on B it scales degree d by 2^d."""
    if isinstance(x, BElement):
        return phi_f(_PSI_2(_gamma(x)))
    if isinstance(x, MFElement):
        return psi_2_mf(x)
    return _PSI_2(x)


def psi_2_mf(x: MFElement) -> MFElement:
    terms = {k: c * Fraction(2) ** MFElement._degree(k) for k, c in x.terms.items()}
    return MFElement._raw(terms)


def g(x: MFElement) -> MFElement:
    """g = psi_[2] - 1 on MF."""
    return psi_2_mf(x) - x


def h(x: BElement) -> BElement:
    """h = psi_d + 1 on B."""
    return psi_d(x) + x


def eta_R(x: BElement) -> GammaElement:
    """Right unit B -> Gamma induced by x -> x + r on y^2 = 4x(x^2 + q2 x + q4)."""
    return _eta()(x)


def eta_R_mf(x: MFElement) -> GammaElement:
    return eta_R(mf_to_b(x))


def cobar_d0(x) -> GammaElement:
    """d(x) = eta_R(x) - x; accepts B or MF elements."""
    if isinstance(x, MFElement):
        x = mf_to_b(x)
    return eta_R(x) - _gamma(x)


def Phi(x):
    """Phi(x) = (psi_[2](x) - x, phi_q(x) - phi_f(x)).

    Accepts a Gamma, B or MF element (the latter two are included in Gamma).
    The first component lives in Gamma, the second in B.
    """
    if isinstance(x, MFElement):
        x = mf_to_b(x)
    if isinstance(x, BElement):
        x = _gamma(x)
    return psi_2(x) - x, phi_q(x) - phi_f(x)


def Psi(x, y: BElement) -> BElement:
    """Psi(x, y) = psi_d(y) - phi_f(x) + y, with x in Gamma (or B, MF) and y in B."""
    if isinstance(x, MFElement):
        x = mf_to_b(x)
    return psi_d(y) - phi_f(x) + y


def s_image(m: RingMap):
    return m._img["s"]


def named_generators():
    """The generators q2, q4, s, t of B, for convenience in tests and demos."""
    return {"q2": q2_gen(), "q4": q4_gen(), "s": s_gen(), "t": t_gen()}
