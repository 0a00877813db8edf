"""Truncated arithmetic in unramified extensions K/Q_p.

An element is stored as ``p**val * u`` where ``u`` is a unit of O_K given by
its coefficient vector in the basis 1, theta, ..., theta^(f-1), each
coefficient an integer modulo ``p**prec``.  ``prec`` is the relative
precision, so the element is known modulo ``p**(val + prec)``.

Zero at precision (the result of cancellation) keeps its absolute precision
and reports valuation ``inf``; dividing by it raises ``ZeroDivisionError``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

DEFAULT_PRECISION = 32


class ParamsMismatch(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """Raised when a result would carry fewer significant digits than required."""


class NoRoot(ArithmeticError):
    """The requested square root does not exist in K."""


# ---------------------------------------------------------------------------
# polynomial helpers over Z / p^n, coefficients low -> high


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def _poly_divides_mod_p(g, h, p):
    """True if monic ``g`` divides ``h`` over F_p."""
    h = [c % p for c in h]
    dg = len(g) - 1
    for k in range(len(h) - 1, dg - 1, -1):
        c = h[k]
        if c:
            for j in range(dg + 1):
                h[k - dg + j] = (h[k - dg + j] - c * g[j]) % p
    return not any(h[:dg])


def is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    f = len(modulus) - 1
    if f < 1 or modulus[-1] % p != 1:
        return False
    if f == 1:
        return True
    for d in range(1, f // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _poly_divides_mod_p(list(low) + [1], list(modulus), p):
                return False
    return True


def default_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree f over F_p."""
    if f == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=f):
        cand = tuple(low) + (1,)
        if low[0] != 0 and is_irreducible_mod_p(cand, p):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {f} mod {p}")


@dataclass(frozen=True)
class FieldParams:
    """Unramified extension of Q_p of degree ``f``.

    ``norm_base`` selects |x| = p^-v ("P") or q^-v ("Q"); it defaults to P for
    f = 1 and Q otherwise.
    """

    p: int
    f: int = 1
    modulus: tuple[int, ...] | None = None
    norm_base: str | None = None
    precision: int = DEFAULT_PRECISION
    _traces: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.f < 1:
            raise ValueError("extension degree must be >= 1")
        mod = self.modulus
        if mod is None:
            mod = default_modulus(self.p, self.f)
        mod = tuple(int(c) % self.p for c in mod[:-1]) + (1,)
        if len(mod) != self.f + 1 or not is_irreducible_mod_p(mod, self.p):
            raise ValueError(f"modulus {mod} is not irreducible of degree {self.f} mod {self.p}")
        object.__setattr__(self, "modulus", mod)
        nb = self.norm_base or ("P" if self.f == 1 else "Q")
        if nb not in ("P", "Q"):
            raise ValueError("norm_base must be 'P' or 'Q'")
        object.__setattr__(self, "norm_base", nb)
        if self.precision < 2:
            raise ValueError("precision must be >= 2")
        object.__setattr__(self, "_traces", self._compute_traces())

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def base(self) -> int:
        """The number whose negative powers are the absolute values."""
        return self.p if self.norm_base == "P" else self.q

    def with_precision(self, precision: int) -> FieldParams:
        return FieldParams(self.p, self.f, self.modulus, self.norm_base, precision)

    def rational_params(self) -> FieldParams:
        return FieldParams(self.p, 1, None, "P", self.precision)

    # -- ring operations on coefficient vectors -------------------------------

    def _reduce(self, coeffs, n):
        """Reduce an integer coefficient list modulo (modulus, p^n)."""
        f = self.f
        mod = self.modulus
        c = list(coeffs)
        for k in range(len(c) - 1, f - 1, -1):
            ck = c[k]
            if ck:
                for j in range(f):
                    c[k - f + j] -= ck * mod[j]
        c = c[:f] + [0] * (f - len(c))
        pn = self.p ** n
        return tuple(x % pn for x in c)

    def _mul(self, a, b, n):
        f = self.f
        if f == 1:
            return ((a[0] * b[0]) % self.p ** n,)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._reduce(prod, n)

    def _pow(self, a, e, n):
        result = (1,) + (0,) * (self.f - 1)
        while e:
            if e & 1:
                result = self._mul(result, a, n)
            a = self._mul(a, a, n)
            e >>= 1
        return result

    def _unit_inverse(self, u, n):
        """Inverse of a unit coefficient vector modulo p^n (Newton iteration)."""
        p = self.p
        if self.f == 1:
            return (pow(u[0], -1, p ** n),)
        x = self._pow(tuple(c % p for c in u), self.q - 2, 1)
        prec = 1
        two = (2,) + (0,) * (self.f - 1)
        while prec < n:
            prec = min(2 * prec, n)
            ux = self._mul(u, x, prec)
            corr = tuple((t - s) for t, s in zip(two, ux))
            x = self._mul(x, corr, prec)
        return x

    def _compute_traces(self):
        """Tr(theta^k) for k < 2f - 1, exact integers."""
        f = self.f
        traces = []
        for k in range(2 * f - 1):
            total = 0
            for j in range(f):
                mono = [0] * (k + j + 1)
                mono[k + j] = 1
                red = self._reduce_exact(mono)
                total += red[j]
            traces.append(total)
        return tuple(traces)

    def _reduce_exact(self, coeffs):
        f = self.f
        mod = self.modulus
        c = list(coeffs)
        for k in range(len(c) - 1, f - 1, -1):
            ck = c[k]
            if ck:
                for j in range(f):
                    c[k - f + j] -= ck * mod[j]
        return c[:f] + [0] * (f - len(c))

    @property
    def theta_traces(self) -> tuple[int, ...]:
        return self._traces

    def trace_form(self) -> list[list[int]]:
        """Matrix T[j][k] = Tr(theta^(j+k)); invertible mod p for unramified K."""
        f = self.f
        return [[self._traces[j + k] for k in range(f)] for j in range(f)]

    # -- element construction ---------------------------------------------

    def __call__(self, x=0, precision: int | None = None) -> PadicScalar:
        if isinstance(x, PadicScalar):
            if x.params != self:
                raise ParamsMismatch("cannot coerce between different fields")
            return x
        prec = self.precision if precision is None else precision
        if isinstance(x, int):
            return PadicScalar._from_int_coeffs(self, (x,) + (0,) * (self.f - 1), 0, prec)
        if isinstance(x, Fraction):
            num = self(x.numerator, prec)
            den = self(x.denominator, prec)
            return num / den
        if isinstance(x, (tuple, list)):
            if len(x) != self.f:
                raise ValueError(f"expected {self.f} coefficients")
            return PadicScalar._from_int_coeffs(self, tuple(int(c) for c in x), 0, prec)
        raise TypeError(f"cannot build a p-adic scalar from {type(x).__name__}")

    def zero(self, absprec: int | None = None) -> PadicScalar:
        return PadicScalar(self, None, (0,) * self.f, self.precision if absprec is None else absprec)

    def one(self) -> PadicScalar:
        return self(1)

    def theta(self) -> PadicScalar:
        if self.f == 1:
            raise ValueError("theta is only defined for f > 1")
        return self((0, 1) + (0,) * (self.f - 2))

    def uniformizer_power(self, k: int) -> PadicScalar:
        return PadicScalar(self, k, (1,) + (0,) * (self.f - 1), self.precision)

    def from_digits(self, digits: Sequence, val: int = 0, absprec: int | None = None) -> PadicScalar:
        """Element sum digits[i] * p^(val+i); a digit is an int (f=1) or a coefficient tuple."""
        f = self.f
        coeffs = [0] * f
        for i, d in enumerate(digits):
            d = (d,) if f == 1 and isinstance(d, int) else tuple(d)
            for j in range(f):
                coeffs[j] += d[j] * self.p ** i
        if absprec is None:
            absprec = val + self.precision
        return PadicScalar._from_int_coeffs(self, tuple(coeffs), val, absprec - val)

    def residue_field(self) -> list[tuple[int, ...]]:
        """All residue classes as coefficient tuples (lexicographic order)."""
        return [tuple(reversed(t)) for t in itertools.product(range(self.p), repeat=self.f)]


def _vp(n: int, p: int) -> int:
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicScalar:
    """Immutable element of K known modulo p^(val + prec)."""

    __slots__ = ("params", "val", "unit", "prec")

    def __init__(self, params: FieldParams, val, unit, prec):
        # val None means zero; then prec holds the absolute precision
        self.params = params
        self.val = val
        self.unit = unit
        self.prec = prec

    @classmethod
    def _from_int_coeffs(cls, params, coeffs, val, relprec):
        """p^val * coeffs known modulo p^(val + relprec), normalised."""
        p = params.p
        absprec = val + relprec
        vmin = min(_vp(c, p) for c in coeffs)
        if vmin == math.inf or val + vmin >= absprec:
            return cls(params, None, (0,) * params.f, absprec)
        newval = val + vmin
        prec = absprec - newval
        pv = p ** vmin
        pn = p ** prec
        unit = tuple((c // pv) % pn for c in coeffs)
        return cls(params, newval, unit, prec)

    # -- basic properties --------------------------------------------------

    def is_zero(self) -> bool:
        return self.val is None

    @property
    def valuation(self):
        return math.inf if self.val is None else self.val

    @property
    def absprec(self) -> int:
        return self.prec if self.val is None else self.val + self.prec

    @property
    def precision(self) -> int:
        """Number of significant digits (0 for zero)."""
        return 0 if self.val is None else self.prec

    def norm(self) -> Fraction:
        if self.val is None:
            return Fraction(0)
        return Fraction(1, self.params.base) ** self.val

    def digits(self) -> list:
        """Residue digits, lowest first; ints for f = 1, coefficient tuples otherwise."""
        if self.val is None:
            return []
        p = self.params.p
        out = []
        for i in range(self.prec):
            d = tuple((c // p ** i) % p for c in self.unit)
            out.append(d[0] if self.params.f == 1 else d)
        return out

    def leading_digit(self):
        return self.digits()[0] if self.val is not None else None

    def lift_to_int_coeffs(self):
        """Integer coefficients c with self = sum c_j theta^j, for val >= 0."""
        if self.val is None:
            return (0,) * self.params.f
        if self.val < 0:
            raise ValueError("element is not integral")
        pv = self.params.p ** self.val
        return tuple(c * pv for c in self.unit)

    def to_fraction(self) -> Fraction:
        """The rational with the canonical digit truncation (f = 1 only)."""
        if self.params.f != 1:
            raise ValueError("only defined over Q_p")
        if self.val is None:
            return Fraction(0)
        return Fraction(self.unit[0]) * Fraction(self.params.p) ** self.val

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.params is not self.params and other.params != self.params:
                raise ParamsMismatch("operands live in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.params(other)
        return NotImplemented

    def _parts(self):
        """(val, coeffs, absprec) with zero expressed at its absolute precision."""
        if self.val is None:
            return self.prec, (0,) * self.params.f, self.prec
        return self.val, self.unit, self.val + self.prec

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        va, ca, aa = self._parts()
        vb, cb, ab = other._parts()
        v = min(va, vb)
        absprec = min(aa, ab)
        p = self.params.p
        sa, sb = p ** (va - v), p ** (vb - v)
        coeffs = tuple(x * sa + y * sb for x, y in zip(ca, cb))
        return PadicScalar._from_int_coeffs(self.params, coeffs, v, absprec - v)

    __radd__ = __add__

    def __neg__(self):
        if self.val is None:
            return self
        pn = self.params.p ** self.prec
        return PadicScalar(self.params, self.val, tuple((-c) % pn for c in self.unit), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        params = self.params
        if self.val is None or other.val is None:
            if self.val is None and other.val is None:
                return params.zero(self.prec + other.prec)
            z, nz = (self, other) if self.val is None else (other, self)
            return params.zero(z.prec + nz.val)
        prec = min(self.prec, other.prec)
        unit = params._mul(self.unit, other.unit, prec)
        return PadicScalar(params, self.val + other.val, unit, prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.val is None:
            raise ZeroDivisionError("division by p-adic zero")
        unit = self.params._unit_inverse(self.unit, self.prec)
        return PadicScalar(self.params, -self.val, unit, self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.val is None:
            raise ZeroDivisionError("division by p-adic zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = self.params.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int) -> PadicScalar:
        """Multiply by p^k without precision loss."""
        if self.val is None:
            return PadicScalar(self.params, None, self.unit, self.prec + k)
        return PadicScalar(self.params, self.val + k, self.unit, self.prec)

    def truncate(self, absprec: int) -> PadicScalar:
        """Forget digits at or beyond p^absprec."""
        if absprec >= self.absprec:
            return self
        if self.val is None or self.val >= absprec:
            return self.params.zero(absprec)
        return PadicScalar._from_int_coeffs(self.params, self.unit, self.val, absprec - self.val)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if self.val is None:
            return f"O({self.params.p}^{self.prec})"
        digits = self.digits()[:8]
        more = "..." if self.prec > 8 else ""
        return f"PadicScalar(p={self.params.p}, f={self.params.f}, val={self.val}, digits={digits}{more})"

    def sort_key(self):
        """Deterministic ordering key: zero first, then valuation, then digits."""
        if self.val is None:
            return (0,)
        return (1, self.val, tuple(self.digits()))


class PadicVector:
    """A point of K^N with the max norm."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[PadicScalar]):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty vector")
        params = comps[0].params
        if any(c.params != params for c in comps):
            raise ParamsMismatch("components live in different fields")
        self.components = comps

    @property
    def params(self) -> FieldParams:
        return self.components[0].params

    @property
    def N(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def valuation(self):
        return min(c.valuation for c in self.components)

    def norm(self) -> Fraction:
        return max(c.norm() for c in self.components)

    def __add__(self, other):
        return PadicVector([a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        return PadicVector([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return PadicVector([-a for a in self])

    def scale(self, s) -> PadicVector:
        return PadicVector([s * a for a in self])

    def shift(self, k: int) -> PadicVector:
        return PadicVector([a.shift(k) for a in self])

    def dot(self, other) -> PadicScalar:
        total = self.components[0] * other.components[0]
        for a, b in zip(self.components[1:], other.components[1:]):
            total = total + a * b
        return total

    def __eq__(self, other):
        if not isinstance(other, PadicVector) or len(other) != len(self):
            return NotImplemented
        return all(a == b for a, b in zip(self, other))

    __hash__ = None

    def __repr__(self):
        return f"PadicVector({list(self.components)!r})"


# ---------------------------------------------------------------------------
# operations


def padic_arith(op: str, a: PadicScalar, b: PadicScalar) -> PadicScalar:
    if a.params != b.params:
        raise ParamsMismatch("operands live in different fields")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def padic_norm(x) -> Fraction:
    return x.norm()


def _residue_sqrt(params: FieldParams, u):
    """Square roots of the unit u modulo p in F_q (brute force)."""
    p = params.p
    target = tuple(c % p for c in u)
    roots = []
    for r in params.residue_field():
        if params._mul(r, r, 1) == target:
            roots.append(r)
    return roots


def _sqrt_unit_odd(params, u, n):
    roots = _residue_sqrt(params, u)
    if not roots:
        raise NoRoot("unit is not a square in the residue field")
    # Hensel lifting: r <- r - (r^2 - u) / (2 r), precision doubles each step
    uval = PadicScalar(params, 0, u, n)
    r = PadicScalar._from_int_coeffs(params, roots[0], 0, n)
    for _ in range(max(1, math.ceil(math.log2(n))) + 1):
        r = r - (r * r - uval) / (2 * r)
    return r


def _sqrt_unit_two(params, u, n):
    """Square root of a unit for p = 2; the root is known modulo 2^(n-1)."""
    f = params.f
    if n < 3:
        raise PrecisionError("need at least 3 digits for a 2-adic square root")
    start = None
    u8 = tuple(c % 8 for c in u)
    for cand in itertools.product(range(8), repeat=f):
        if all(c % 2 == 0 for c in cand):
            continue
        if params._mul(cand, cand, 3) == u8:
            start = cand
            break
    if start is None:
        raise NoRoot("unit is not a square modulo 8")
    r = start
    for k in range(3, n):
        # r^2 = u mod 2^k; correct the next digit
        rr = params._mul(r, r, k + 1)
        diff = tuple(((a - b) % 2 ** (k + 1)) >> k for a, b in zip(u, rr))
        if any(diff):
            rinv = params._unit_inverse(tuple(c % 2 for c in r), 1)
            delta = params._mul(diff, rinv, 1)
            r = tuple((c + d * 2 ** (k - 1)) for c, d in zip(r, delta))
    return PadicScalar._from_int_coeffs(params, r, 0, n - 1)


def padic_sqrt(x: PadicScalar) -> PadicScalar:
    """Canonical square root: the root whose digit sequence is lexicographically smaller."""
    if x.is_zero():
        return x.params.zero((x.absprec + 1) // 2)
    if x.val % 2:
        raise NoRoot("odd valuation")
    params = x.params
    if params.p == 2:
        r = _sqrt_unit_two(params, x.unit, x.prec)
    else:
        r = _sqrt_unit_odd(params, x.unit, x.prec)
    r = r.shift(x.val // 2)
    other = -r
    return min(r, other, key=lambda s: tuple(s.digits()))


def padic_trace(x: PadicScalar) -> PadicScalar:
    """Tr_{K/Q_p}(x) as an element of Q_p."""
    params = x.params
    qp = params.rational_params()
    if x.is_zero():
        return qp.zero(x.prec)
    tr = params.theta_traces
    total = sum(c * tr[j] for j, c in enumerate(x.unit))
    return PadicScalar._from_int_coeffs(qp, (total,), x.val, x.prec)


def character_phase(x: PadicScalar) -> Fraction:
    """Exact phase in [0, 1) of the standard additive character at x."""
    tr = padic_trace(x)
    if tr.is_zero() or tr.val >= 0:
        if tr.absprec < 0:
            raise PrecisionError("trace not known modulo Z_p")
        return Fraction(0)
    if tr.absprec < 0:
        raise PrecisionError("trace not known modulo Z_p")
    k = -tr.val
    pk = tr.params.p ** k
    return Fraction(tr.unit[0] % pk, pk)


def character_eval(x: PadicScalar) -> complex:
    phase = character_phase(x)
    return complex(math.cos(2 * math.pi * phase), math.sin(2 * math.pi * phase))
