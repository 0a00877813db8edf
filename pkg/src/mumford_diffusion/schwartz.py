"""Locally constant compactly supported functions on K^N and their Fourier transform.

A function on the window (M, m) is supported in p^-M O^N and constant on
cosets of p^m O^N.  Coset representatives are x = p^-M * a with a running over
(O/p^L)^N, L = M + m, and each coordinate of a is stored as its coefficient
vector in the basis 1, theta, ..., theta^(f-1).  Amplitudes live in a dense
array of shape (p^L,) * (f N); axis i*f + j holds coefficient j of coordinate i.
"""
from __future__ import annotations

import cmath
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .padic import FieldParams, PadicScalar, PadicVector, PrecisionError, character_phase


@dataclass(frozen=True)
class LatticeWindow:
    N: int
    M: int
    m: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("dimension must be positive")
        if self.m < -self.M:
            raise ValueError("constancy exponent must satisfy m >= -M")

    @property
    def L(self) -> int:
        return self.M + self.m

    def n_cosets(self, params: FieldParams) -> int:
        return params.q ** (self.L * self.N)

    def shape(self, params: FieldParams) -> tuple[int, ...]:
        return (params.p ** self.L,) * (params.f * self.N)

    def dual(self) -> LatticeWindow:
        return LatticeWindow(self.N, self.m, self.M)

    def join(self, other: LatticeWindow) -> LatticeWindow:
        if other.N != self.N:
            raise ValueError("dimension mismatch")
        return LatticeWindow(self.N, max(self.M, other.M), max(self.m, other.m))


def _trace_permutation(params: FieldParams, L: int) -> np.ndarray:
    """Flat index of T b mod p^L for every flat index b of (Z/p^L)^f."""
    f = params.f
    pl = params.p ** L
    if f == 1:
        return np.arange(pl)
    T = np.array(params.trace_form(), dtype=object)
    grids = np.indices((pl,) * f).reshape(f, -1).astype(object)
    tb = (T.dot(grids)) % pl
    flat = np.zeros(tb.shape[1], dtype=np.int64)
    for j in range(f):
        flat = flat * pl + tb[j].astype(np.int64)
    return flat


def _axis_valuation(pl: int, p: int, L: int) -> np.ndarray:
    """p-adic valuation of 0..p^L - 1, capped at L."""
    idx = np.arange(pl)
    v = np.zeros(pl, dtype=np.int64)
    rem = idx.copy()
    for _ in range(L):
        mask = (rem % p == 0) & (v < L)
        mask &= idx != 0
        v[mask] += 1
        rem = np.where(mask, rem // p, rem)
    v[0] = L
    return v


class TestFunction:
    """Immutable element of S(K^N) on a fixed lattice window."""

    __test__ = False  # not a pytest class

    __slots__ = ("params", "window", "values")

    def __init__(self, params: FieldParams, window: LatticeWindow, values):
        values = np.asarray(values, dtype=complex)
        if values.shape != window.shape(params):
            raise ValueError(f"amplitude array has shape {values.shape}, expected {window.shape(params)}")
        values.setflags(write=False)
        self.params = params
        self.window = window
        self.values = values

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, params, window):
        return cls(params, window, np.zeros(window.shape(params), dtype=complex))

    @classmethod
    def indicator_ball(cls, params: FieldParams, N: int, r: int = 0) -> TestFunction:
        """Indicator of p^r O^N."""
        window = LatticeWindow(N, -r, r)
        return cls(params, window, np.ones(window.shape(params), dtype=complex))

    @classmethod
    def random(cls, params: FieldParams, window: LatticeWindow, rng: np.random.Generator, real=False):
        shape = window.shape(params)
        vals = rng.standard_normal(shape)
        if not real:
            vals = vals + 1j * rng.standard_normal(shape)
        return cls(params, window, vals)

    @classmethod
    def from_callable(cls, params: FieldParams, window: LatticeWindow, func) -> TestFunction:
        vals = np.zeros(window.shape(params), dtype=complex)
        for idx, x in coset_points(params, window):
            vals[idx] = func(x)
        return cls(params, window, vals)

    # -- structure -------------------------------------------------------------

    @property
    def N(self) -> int:
        return self.window.N

    def __repr__(self):
        w = self.window
        return f"TestFunction(p={self.params.p}, f={self.params.f}, N={w.N}, M={w.M}, m={w.m})"

    def _check_compatible(self, other: TestFunction):
        if other.params != self.params:
            raise ValueError("test functions over different fields")
        if other.window.N != self.window.N:
            raise ValueError("dimension mismatch")

    def refine(self, M: int, m: int) -> TestFunction:
        """The same function viewed on a larger/finer window."""
        w = self.window
        if M < w.M or m < w.m:
            raise ValueError("refinement can only enlarge the window")
        if (M, m) == (w.M, w.m):
            return self
        p = self.params.p
        new = LatticeWindow(w.N, M, m)
        d = M - w.M
        pl_old = p ** w.L
        idx = np.arange(p ** new.L)
        inside = idx % p ** d == 0
        old_idx = (idx // p ** d) % pl_old
        vals = self.values
        for axis in range(vals.ndim):
            vals = np.take(vals, old_idx, axis=axis)
            shape = [1] * vals.ndim
            shape[axis] = -1
            vals = vals * inside.reshape(shape)
        return TestFunction(self.params, new, vals)

    def refine_to(self, window: LatticeWindow) -> TestFunction:
        return self.refine(window.M, window.m)

    def coarsen(self, M: int, m: int, atol: float = 1e-12) -> TestFunction:
        """Restrict to a smaller window; raises if information would be lost."""
        w = self.window
        target = LatticeWindow(w.N, M, m)
        if M > w.M or m > w.m:
            raise ValueError("coarsening can only shrink the window")
        # sample the representatives of the target window
        p = self.params.p
        d = w.M - M
        idx = (np.arange(p ** target.L) * p ** d) % p ** w.L
        vals = self.values
        for axis in range(vals.ndim):
            vals = np.take(vals, idx, axis=axis)
        back = TestFunction(self.params, target, vals).refine(w.M, w.m)
        if np.max(np.abs(back.values - self.values), initial=0.0) > atol * max(1.0, np.max(np.abs(self.values))):
            raise ValueError("function is not supported/constant on the requested window")
        return TestFunction(self.params, target, vals)

    # -- pointwise algebra ------------------------------------------------------

    def _binary(self, other, op):
        if isinstance(other, TestFunction):
            self._check_compatible(other)
            w = self.window.join(other.window)
            a, b = self.refine_to(w), other.refine_to(w)
            return TestFunction(self.params, w, op(a.values, b.values))
        return TestFunction(self.params, self.window, op(self.values, other))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return TestFunction(self.params, self.window, -self.values)

    def conj(self):
        return TestFunction(self.params, self.window, np.conj(self.values))

    # -- evaluation -------------------------------------------------------------

    def index_of(self, x: PadicVector):
        """Array index of the coset containing x, or None outside the support."""
        w = self.window
        params = self.params
        if len(x) != w.N:
            raise ValueError("dimension mismatch")
        pl = params.p ** w.L
        idx = []
        for comp in x:
            if comp.absprec < w.m:
                raise PrecisionError("point not known to the window's resolution")
            if comp.is_zero():
                idx.extend([0] * params.f)
                continue
            if comp.val < -w.M:
                return None
            scale = params.p ** (comp.val + w.M)
            idx.extend((c * scale) % pl for c in comp.unit)
        return tuple(idx)

    def __call__(self, x: PadicVector) -> complex:
        idx = self.index_of(x)
        return 0j if idx is None else complex(self.values[idx])

    def representative(self, idx) -> PadicVector:
        return coset_representative(self.params, self.window, idx)

    def allclose(self, other: TestFunction, rtol=1e-12, atol=1e-12) -> bool:
        w = self.window.join(other.window)
        a, b = self.refine_to(w).values, other.refine_to(w).values
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
        return bool(np.max(np.abs(a - b), initial=0.0) <= atol + rtol * scale)

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> str:
        params, w = self.params, self.window
        p, L = params.p, w.L
        entries = []
        for idx in zip(*np.nonzero(self.values)):
            val = complex(self.values[idx])
            coords = []
            for i in range(w.N):
                coeffs = idx[i * params.f:(i + 1) * params.f]
                digits = [[(int(c) // p ** k) % p for c in coeffs] for k in range(L)]
                coords.append([d[0] for d in digits] if params.f == 1 else digits)
            entries.append([coords, val.real, val.imag])
        doc = {
            "p": params.p,
            "f": params.f,
            "modulus": list(params.modulus),
            "norm_base": params.norm_base,
            "N": w.N,
            "M": w.M,
            "m": w.m,
            "amplitudes": entries,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, params: FieldParams | None = None) -> TestFunction:
        doc = json.loads(text)
        if params is None:
            params = FieldParams(doc["p"], doc["f"], tuple(doc["modulus"]), doc["norm_base"])
        elif (params.p, params.f) != (doc["p"], doc["f"]):
            raise ValueError("serialized function lives in a different field")
        w = LatticeWindow(doc["N"], doc["M"], doc["m"])
        vals = np.zeros(w.shape(params), dtype=complex)
        p = params.p
        for coords, re, im in doc["amplitudes"]:
            idx = []
            for digits in coords:
                if params.f == 1:
                    idx.append(sum(d * p ** k for k, d in enumerate(digits)))
                else:
                    idx.extend(sum(d[j] * p ** k for k, d in enumerate(digits)) for j in range(params.f))
            vals[tuple(idx)] = complex(re, im)
        return cls(params, w, vals)


def coset_representative(params: FieldParams, window: LatticeWindow, idx) -> PadicVector:
    f = params.f
    comps = []
    for i in range(window.N):
        coeffs = tuple(int(c) for c in idx[i * f:(i + 1) * f])
        comps.append(PadicScalar._from_int_coeffs(params, coeffs, -window.M, params.precision))
    return PadicVector(comps)


def coset_points(params: FieldParams, window: LatticeWindow):
    """Yield (index, representative) over all cosets of the window, in array order."""
    for idx in itertools.product(*(range(n) for n in window.shape(params))):
        yield idx, coset_representative(params, window, idx)


def valuation_array(params: FieldParams, window: LatticeWindow) -> np.ndarray:
    """Min valuation of every coset representative; the zero coset gets window.m."""
    p, f, L = params.p, params.f, window.L
    axis_v = _axis_valuation(p ** L, p, L)
    shape = window.shape(params)
    out = None
    for axis in range(f * window.N):
        s = [1] * len(shape)
        s[axis] = -1
        term = axis_v.reshape(s)
        out = term if out is None else np.minimum(out, term)
    out = np.broadcast_to(out, shape) - window.M
    return np.array(out)


# ---------------------------------------------------------------------------
# integration, transform, convolution


def coset_measure(params: FieldParams, window: LatticeWindow) -> float:
    return float(params.q) ** (-window.m * window.N)


def tf_integrate(phi: TestFunction) -> complex:
    return complex(phi.values.sum() * coset_measure(phi.params, phi.window))


def tf_inner(phi: TestFunction, psi: TestFunction) -> complex:
    """Hermitian inner product, linear in the first argument."""
    phi._check_compatible(psi)
    w = phi.window.join(psi.window)
    a, b = phi.refine_to(w).values, psi.refine_to(w).values
    return complex(np.vdot(b, a) * coset_measure(phi.params, w))


def tf_norm(phi: TestFunction) -> float:
    return float(np.sqrt(max(tf_inner(phi, phi).real, 0.0)))


def tf_fourier(phi: TestFunction, direction: str = "forward") -> TestFunction:
    """F phi(xi) = int chi(xi . x) phi(x) dx (forward) or with chi(-xi . x) (inverse)."""
    params, w = phi.params, phi.window
    f, N, L = params.f, w.N, w.L
    size = phi.values.size
    if direction == "forward":
        g = np.fft.ifftn(phi.values) * size
    elif direction == "inverse":
        g = np.fft.fftn(phi.values)
    else:
        raise ValueError("direction must be 'forward' or 'inverse'")
    if f > 1:
        perm = _trace_permutation(params, L)
        ql = params.q ** L
        g = g.reshape((ql,) * N)
        for axis in range(N):
            g = np.take(g, perm, axis=axis)
        g = g.reshape(w.shape(params))
    return TestFunction(params, w.dual(), g * coset_measure(params, w))


def tf_fourier_direct(phi: TestFunction, direction: str = "forward") -> TestFunction:
    """Reference transform by summation with exact rational phases (small windows only)."""
    params, w = phi.params, phi.window
    sign = 1 if direction == "forward" else -1
    dual = w.dual()
    out = np.zeros(dual.shape(params), dtype=complex)
    src = [(idx, x) for idx, x in coset_points(params, w) if phi.values[idx] != 0]
    vol = coset_measure(params, w)
    for jdx, xi in coset_points(params, dual):
        total = 0j
        for idx, x in src:
            phase = character_phase(xi.dot(x)) * sign
            total += phi.values[idx] * cmath.exp(2j * cmath.pi * float(phase % 1))
        out[jdx] = total * vol
    return TestFunction(params, dual, out)


def tf_convolve(phi: TestFunction, psi: TestFunction, method: str = "fourier") -> TestFunction:
    phi._check_compatible(psi)
    w = phi.window.join(psi.window)
    a, b = phi.refine_to(w), psi.refine_to(w)
    if method == "fourier":
        prod = tf_fourier(a).values * tf_fourier(b).values
        return tf_fourier(TestFunction(a.params, w.dual(), prod), "inverse")
    if method == "direct":
        vol = coset_measure(a.params, w)
        out = np.zeros_like(a.values)
        for idx in zip(*np.nonzero(b.values)):
            out = out + b.values[idx] * np.roll(a.values, shift=idx, axis=tuple(range(a.values.ndim)))
        return TestFunction(a.params, w, out * vol)
    raise ValueError("method must be 'fourier' or 'direct'")


def shell_integral(params: FieldParams, N: int, nu: int, x_valuation) -> Fraction:
    """int over ||xi|| = base^nu of chi(-x . xi) d xi, exact.

    Depends on x only through its valuation (min over coordinates, inf for 0).
    """
    q = params.q
    full = Fraction(q) ** (nu * N) if x_valuation >= nu else Fraction(0)
    inner = Fraction(q) ** ((nu - 1) * N) if x_valuation >= nu - 1 else Fraction(0)
    return full - inner
