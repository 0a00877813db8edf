"""PGL_2(K) acting on the projective line P^1(K)."""
from __future__ import annotations

from dataclasses import dataclass

from .padic import FieldParams, NoRoot, PadicScalar, PrecisionError, padic_sqrt


class _Infinity:
    """The point at infinity of P^1(K); a tagged value, never a scalar."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(z) -> bool:
    return z is INF


class NotHyperbolic(ValueError):
    """Both eigenvalues have the same absolute value (or lie outside K)."""


class Parabolic(NotHyperbolic):
    """The map has a single (double) fixed point."""


def points_equal(z, w) -> bool:
    if is_inf(z) or is_inf(w):
        return is_inf(z) and is_inf(w)
    return z == w


def point_key(z):
    return (2,) if is_inf(z) else z.sort_key()


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d), defined up to a scalar."""

    a: PadicScalar
    b: PadicScalar
    c: PadicScalar
    d: PadicScalar

    @classmethod
    def from_entries(cls, params: FieldParams, a, b, c, d) -> MoebiusMap:
        return cls(params(a), params(b), params(c), params(d))

    @classmethod
    def identity(cls, params: FieldParams) -> MoebiusMap:
        return cls.from_entries(params, 1, 0, 0, 1)

    @property
    def params(self) -> FieldParams:
        return self.a.params

    def det(self) -> PadicScalar:
        return self.a * self.d - self.b * self.c

    def trace(self) -> PadicScalar:
        return self.a + self.d

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: MoebiusMap) -> MoebiusMap:
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return MoebiusMap(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> MoebiusMap:
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        return moebius_apply(self, z)

    def projectively_equal(self, other: MoebiusMap) -> bool:
        """Equal as elements of PGL_2: all 2x2 minors of the stacked entries vanish."""
        x, y = self.entries(), other.entries()
        return all((x[i] * y[j] - x[j] * y[i]).is_zero() for i in range(4) for j in range(i + 1, 4))


def moebius_apply(m: MoebiusMap, z, min_precision: int = 2):
    """Projective evaluation; infinity maps to a/c and the pole to infinity."""
    if m.det().is_zero():
        raise ValueError("degenerate Moebius map")
    if is_inf(z):
        num, den = m.a, m.c
    else:
        num = m.a * z + m.b
        den = m.c * z + m.d
    if den.is_zero():
        if num.is_zero():
            raise PrecisionError("numerator and denominator both vanish at working precision")
        return INF
    out = num / den
    if not out.is_zero() and out.precision < min_precision:
        raise PrecisionError(f"only {out.precision} significant digits left near the pole")
    return out


@dataclass(frozen=True)
class FixedPoints:
    z1: object
    z2: object
    parabolic: bool = False


def moebius_fixed_points(m: MoebiusMap) -> FixedPoints:
    """Roots of z^2 + ((d - a)/c) z - b/c = 0, or infinity and b/(d - a) when c = 0.

    Raises NoRoot when the fixed points live in a quadratic extension.
    """
    a, b, c, d = m.entries()
    if c.is_zero():
        if (d - a).is_zero():
            return FixedPoints(INF, INF, parabolic=True)
        return FixedPoints(b / (d - a), INF)
    lin = (d - a) / c
    const = -(b / c)
    disc = lin * lin - 4 * const
    if disc.is_zero():
        z = -lin / 2
        return FixedPoints(z, z, parabolic=True)
    r = padic_sqrt(disc)
    z1 = (r - lin) / 2
    z2 = (-r - lin) / 2
    return FixedPoints(z1, z2)


def eigenvalue_at(m: MoebiusMap, z) -> PadicScalar:
    """Eigenvalue of the matrix on the eigenvector of the fixed point z."""
    if is_inf(z):
        return m.a
    return m.c * z + m.d


@dataclass(frozen=True)
class HyperbolicData:
    attracting: object
    repelling: object
    multiplier: PadicScalar


def moebius_hyperbolic_data(m: MoebiusMap) -> HyperbolicData:
    """Attracting/repelling fixed points and the multiplier t with |t| < 1."""
    try:
        fp = moebius_fixed_points(m)
    except NoRoot as exc:
        raise NotHyperbolic("fixed points are not K-rational") from exc
    if fp.parabolic:
        raise Parabolic("parabolic map")
    l1 = eigenvalue_at(m, fp.z1)
    l2 = eigenvalue_at(m, fp.z2)
    if l1.valuation == l2.valuation:
        raise NotHyperbolic("eigenvalues have equal absolute value")
    # the larger eigenvalue belongs to the attracting fixed point
    if l1.valuation < l2.valuation:
        return HyperbolicData(fp.z1, fp.z2, l2 / l1)
    return HyperbolicData(fp.z2, fp.z1, l1 / l2)


def moebius_multiplier(m: MoebiusMap) -> PadicScalar:
    return moebius_hyperbolic_data(m).multiplier


def moebius_sending(params: FieldParams, to_zero, to_one, to_inf) -> MoebiusMap:
    """The unique map with to_zero -> 0, to_one -> 1, to_inf -> infinity."""
    one, zero = params(1), params(0)
    if is_inf(to_zero):
        # z -> (one - inf_pt) / (z - inf_pt)
        return MoebiusMap(zero, to_one - to_inf, one, -to_inf)
    if is_inf(to_inf):
        return MoebiusMap(one, -to_zero, zero, to_one - to_zero)
    if is_inf(to_one):
        return MoebiusMap(one, -to_zero, one, -to_inf)
    s = to_one - to_inf
    t = to_one - to_zero
    return MoebiusMap(s, -to_zero * s, t, -to_inf * t)
