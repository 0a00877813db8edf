"""Radial symbols, twisted and invariant heat kernels, multiplier operators and wavelets.

Shells are indexed by the exponent s with ||x|| = base^s, i.e. s = -valuation.
A symbol f is stored through its shell rule: f(x) = rule(s) for s >= 1 and
lambda on the unit polydisk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .group_action import (
    ExtendedMap,
    FiniteGroup,
    SigmaRadialProfile,
    identity_map,
    random_point,
    shell_exponent,
)
from .padic import FieldParams, PadicScalar, PadicVector
from .schwartz import (
    LatticeWindow,
    TestFunction,
    coset_representative,
    shell_integral,
    tf_fourier,
    tf_integrate,
    tf_norm,
    valuation_array,
)


class ToleranceBreach(RuntimeError):
    """A certified tail bound exceeds the requested tolerance."""


class NotConstant(ValueError):
    """||sigma xi|| varies over the Fourier support of a wavelet."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class RadialSymbol:
    """f with f = lam on the unit polydisk, nondecreasing, power-law growth.

    Growth certificate: A1 base^(gamma1 s) <= f(s) <= A2 base^(gamma2 s) for s >= 1.
    """

    lam: float
    rule: Callable[[int], float]
    base: int
    A1: float
    A2: float
    gamma1: float
    gamma2: float
    name: str = "custom"

    def value(self, s) -> float:
        if s <= 0:
            return self.lam
        return float(self.rule(s))

    __call__ = value

    @classmethod
    def default(cls, params: FieldParams, alpha: float = 1.0, lam: float = 1.0) -> RadialSymbol:
        """f(s) = base^(alpha s) off the unit polydisk."""
        base = params.base
        if lam > base ** alpha:
            raise ValueError(f"lambda={lam} must not exceed base^alpha={base ** alpha}")
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        return cls(lam, lambda s: float(base) ** (alpha * s), base, 1.0, 1.0, alpha, alpha,
                   name=f"power(alpha={alpha})")

    def check(self, max_shell: int = 30) -> None:
        """Verify monotonicity and the growth certificate on shells 1..max_shell."""
        prev = self.lam
        for s in range(1, max_shell + 1):
            v = self.value(s)
            if v < prev:
                raise ValueError(f"symbol decreases at shell {s}")
            lo = self.A1 * float(self.base) ** (self.gamma1 * s)
            hi = self.A2 * float(self.base) ** (self.gamma2 * s)
            if not lo * (1 - 1e-12) <= v <= hi * (1 + 1e-12):
                raise ValueError(f"growth certificate fails at shell {s}")
            prev = v


def _profiles(symbol, maps):
    return [SigmaRadialProfile(symbol, s) for s in maps]


def _window_cache(profile: SigmaRadialProfile):
    return profile._memo.setdefault("windows", {})


def twisted_symbol_array(profile: SigmaRadialProfile, params: FieldParams, window: LatticeWindow) -> np.ndarray:
    """f_sigma at every coset representative of the window."""
    cache = _window_cache(profile)
    key = (params, window)
    if key in cache:
        return cache[key]
    symbol, sigma = profile.symbol, profile.sigma
    shells = -valuation_array(params, window)
    if not sigma.is_identity:
        shells = shells.copy()
        need = np.argwhere((shells >= 1) & (shells <= sigma.rho))
        for idx in need:
            idx = tuple(int(i) for i in idx)
            xi = coset_representative(params, window, idx)
            shells[idx] = shell_exponent(sigma(xi))
    uniq = np.unique(shells)
    out = np.empty(shells.shape, dtype=float)
    for s in uniq:
        out[shells == s] = symbol.value(int(s))
    out.setflags(write=False)
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# operators J_sigma, H_sigma, H_G


@dataclass
class MultiplierOperator:
    """F^-1 (mean over maps of f_sigma - shift) F."""

    symbol: RadialSymbol
    maps: Sequence[ExtendedMap]
    shift: float = 0.0
    label: str = ""
    _profiles: list = field(default=None, repr=False)

    def __post_init__(self):
        self._profiles = _profiles(self.symbol, self.maps)

    def multiplier(self, params, dual_window) -> np.ndarray:
        arrs = [twisted_symbol_array(pr, params, dual_window) for pr in self._profiles]
        return sum(arrs) / len(arrs) - self.shift

    def apply(self, psi: TestFunction) -> TestFunction:
        return apply_multiplier(self, psi)

    __call__ = apply


def J_op(symbol: RadialSymbol, sigma: ExtendedMap) -> MultiplierOperator:
    return MultiplierOperator(symbol, [sigma], 0.0, f"J[{sigma.name}]")


def H_op(symbol: RadialSymbol, sigma: ExtendedMap) -> MultiplierOperator:
    return MultiplierOperator(symbol, [sigma], symbol.lam, f"H[{sigma.name}]")


def H_G_op(symbol: RadialSymbol, group: FiniteGroup | Sequence[ExtendedMap]) -> MultiplierOperator:
    return MultiplierOperator(symbol, list(group), symbol.lam, "H_G")


def _prepare(psi: TestFunction) -> TestFunction:
    # multipliers are radial outside the unit polydisk only on cosets of O^N or smaller
    return psi.refine(max(psi.window.M, 0), psi.window.m)


def apply_multiplier(op: MultiplierOperator, psi: TestFunction) -> TestFunction:
    psi = _prepare(psi)
    F = tf_fourier(psi)
    mult = op.multiplier(psi.params, F.window)
    return tf_fourier(TestFunction(psi.params, F.window, F.values * mult), "inverse")


# ---------------------------------------------------------------------------
# heat kernels


@dataclass
class KernelValue:
    value: float
    tail_bound: float


@dataclass
class HeatKernel:
    """Z_sigma (one map) or Z_G (a group of maps) at time t.

    mode "reconciled": Fourier multiplier exp(-t (mean_sigma f_sigma - lam)).
    mode "literal": (1/|G|) prod_sigma exp(-t (f_sigma - lam)), the |G|-fold
    convolution divided by |G|.
    """

    symbol: RadialSymbol
    maps: Sequence[ExtendedMap]
    t: float
    nu_max: int = 24
    mode: str = "reconciled"
    tol: float = 1e-10
    _profiles: list = field(default=None, repr=False)

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("t must be positive")
        if self.mode not in ("reconciled", "literal"):
            raise ValueError("mode must be 'reconciled' or 'literal'")
        self._profiles = _profiles(self.symbol, self.maps)

    @property
    def params(self) -> FieldParams:
        return self.maps[0].params

    @property
    def N(self) -> int:
        return self.maps[0].N

    @property
    def group_order(self) -> int:
        return len(self.maps)

    def _combine(self, values: np.ndarray | list, axis=0):
        lam = self.symbol.lam
        vals = np.asarray(values, dtype=float)
        if self.mode == "reconciled":
            return np.exp(-self.t * (vals.mean(axis=axis) - lam))
        return np.exp(-self.t * (vals - lam).sum(axis=axis)) / len(self.maps)

    def shell_multiplier(self, nu: int) -> float:
        """Fourier-side value on the shell ||xi|| = base^nu (nu <= 0: the unit ball)."""
        vals = [pr.shell_value(nu) if nu >= 1 else self.symbol.lam for pr in self._profiles]
        return float(self._combine(vals))

    def fourier_array(self, params, window) -> np.ndarray:
        arrs = [twisted_symbol_array(pr, params, window) for pr in self._profiles]
        return self._combine(arrs)

    def mass(self) -> float:
        """int Z dx = (F Z)(0)."""
        return self.shell_multiplier(0)

    def tail_bound(self, nu_from: int, nu_to: float = math.inf) -> float:
        """Certified bound for sum over shells nu_from < nu <= nu_to of |m_nu| q^(nu N)."""
        s = self.symbol
        q, N = self.params.q, self.N
        A1, g1 = s.A1, s.gamma1
        scale = math.exp(s.lam * self.t * (1 if self.mode == "reconciled" else len(self.maps)))
        if self.mode == "literal":
            scale /= len(self.maps)
        total = 0.0
        prev = None
        nu = nu_from + 1
        while nu <= nu_to:
            growth = A1 * float(s.base) ** (g1 * nu) * self.t
            if self.mode == "literal":
                growth *= len(self.maps)
            log_term = nu * N * math.log(q) - growth
            term = scale * math.exp(log_term) if log_term > -745 else 0.0
            if prev is not None and prev > 0:
                ratio = term / prev
                if ratio < 0.5 and term * ratio / (1 - ratio) < 1e-300 + 1e-18 * total:
                    total += term + term * ratio / (1 - ratio)
                    return total
            if term == 0.0 and prev is not None and prev == 0.0:
                return total
            total += term
            prev = term
            nu += 1
            if nu > nu_from + 10_000:
                return math.inf
        return total

    def eval(self, x: PadicVector, nu_max: int | None = None) -> KernelValue:
        """Z(x, t) by shell sums; exact zero off the unit polydisk."""
        nu_max = self.nu_max if nu_max is None else nu_max
        v = x.valuation()
        if v < 0:
            return KernelValue(0.0, 0.0)
        q, N = self.params.q, self.N
        total = self.shell_multiplier(0)
        last = nu_max if v == math.inf else min(v + 1, nu_max)
        for nu in range(1, last + 1):
            total += self.shell_multiplier(nu) * float(shell_integral(self.params, N, nu, v))
        bound = 0.0
        if v == math.inf or v + 1 > nu_max:
            bound = self.tail_bound(nu_max, math.inf if v == math.inf else v + 1)
        return KernelValue(total, bound)

    def eval_to_tolerance(self, x: PadicVector, tol: float | None = None, max_nu: int = 400) -> KernelValue:
        """Raise nu_max until the certified tail bound is below tol."""
        tol = self.tol if tol is None else tol
        nu = self.nu_max
        while True:
            kv = self.eval(x, nu)
            if kv.tail_bound <= tol:
                return kv
            if nu >= max_nu:
                raise ToleranceBreach(f"tail bound {kv.tail_bound:.3e} > {tol:.1e} at nu_max={nu}")
            nu = min(2 * nu, max_nu)

    def as_test_function(self, n: int, M: int = 0) -> TestFunction:
        """Kernel truncated to Fourier shells <= n, on the window (M, n)."""
        params = self.params
        dual = LatticeWindow(self.N, n, M)
        mult = self.fourier_array(params, dual)
        return tf_fourier(TestFunction(params, dual, mult), "inverse")

    def convolve(self, psi: TestFunction) -> TestFunction:
        """Z(., t) * psi, exact on the window of psi."""
        psi = _prepare(psi)
        F = tf_fourier(psi)
        mult = self.fourier_array(psi.params, F.window)
        return tf_fourier(TestFunction(psi.params, F.window, F.values * mult), "inverse")


def twisted_kernel(symbol, sigma: ExtendedMap, t: float, **kw) -> HeatKernel:
    return HeatKernel(symbol, [sigma], t, **kw)


def invariant_kernel(group: FiniteGroup | Sequence[ExtendedMap], symbol: RadialSymbol, t: float, **kw) -> HeatKernel:
    return HeatKernel(symbol, list(group), t, **kw)


def kernel_eval(Z: HeatKernel, x: PadicVector) -> KernelValue:
    return Z.eval(x)


@dataclass
class PositivityReport:
    nonnegative: bool
    min_value: float
    negatives: list
    samples: int


def kernel_sample_points(params: FieldParams, N: int, count: int, seed: int = 0, max_val: int = 6):
    rng = np.random.default_rng(seed)
    pts = [PadicVector([params(0)] * N)]
    for _ in range(count - 1):
        pts.append(random_point(params, N, rng, -1, max_val))
    return pts


def positivity_check(Z: HeatKernel, samples: Sequence[PadicVector]) -> PositivityReport:
    negatives = []
    lo = math.inf
    for x in samples:
        kv = Z.eval_to_tolerance(x) if x.valuation() == math.inf else Z.eval(x)
        lo = min(lo, kv.value)
        if kv.value < -kv.tail_bound - 1e-12:
            negatives.append((x, kv.value))
    return PositivityReport(not negatives, lo, negatives, len(samples))


# ---------------------------------------------------------------------------
# wavelets


@dataclass(frozen=True)
class WaveletIndex:
    gamma: int
    b: tuple  # per coordinate: coefficient tuple of an element of O / p^(-gamma)
    k: tuple  # per coordinate: residue coefficient tuple, not all zero


@dataclass
class Wavelet:
    index: WaveletIndex
    function: TestFunction


def wavelet_indices(params: FieldParams, N: int, gamma: int):
    """All admissible (gamma, b, k) with support inside O^N."""
    if gamma > 0:
        raise ValueError("gamma must be <= 0")
    f, p = params.f, params.p
    res = params.residue_field()
    coords_b = [tuple(c) for c in np.ndindex(*((p ** (-gamma),) * f))] if gamma < 0 else [(0,) * f]
    out = []
    for b in np.ndindex(*((len(coords_b),) * N)):
        bb = tuple(coords_b[i] for i in b)
        for k in np.ndindex(*((len(res),) * N)):
            kk = tuple(res[i] for i in k)
            if all(all(c == 0 for c in ki) for ki in kk):
                continue
            out.append(WaveletIndex(gamma, bb, kk))
    return out


def build_wavelet(params: FieldParams, N: int, gamma: int, b, k) -> Wavelet:
    """Inverse transform of the normalised indicator of -p^(gamma-1) k + p^gamma O^N, translated by b."""
    p, f, q = params.p, params.f, params.q
    if gamma > 0:
        raise ValueError("gamma must be <= 0")
    b = tuple(tuple(int(c) for c in bi) for bi in b)
    k = tuple(tuple(int(c) % p for c in ki) for ki in k)
    if len(b) != N or len(k) != N:
        raise ValueError("index has the wrong dimension")
    if all(all(c == 0 for c in ki) for ki in k):
        raise ValueError("k must be nonzero")
    if any(any(not 0 <= c < p ** (-gamma) for c in bi) for bi in b) and gamma < 0:
        raise ValueError("translate b is not a representative of O^N / p^(-gamma) O^N")
    if gamma == 0 and any(any(c for c in bi) for bi in b):
        raise ValueError("gamma = 0 admits only b = 0")
    L = 1 - gamma
    pl = p ** L
    dual = LatticeWindow(N, L, 0)  # xi = p^(gamma-1) c, c in (O/p^L)^N
    grids = np.indices(dual.shape(params))
    inside = np.ones(dual.shape(params), dtype=bool)
    phase = np.zeros(dual.shape(params), dtype=object)
    T = params.trace_form()
    for i in range(N):
        for j in range(f):
            c = grids[i * f + j]
            inside &= (c + k[i][j]) % p == 0
        # Tr(c . b) with c, b coefficient vectors
        for j in range(f):
            for jj in range(f):
                phase = phase + grids[i * f + j].astype(object) * (T[j][jj] * b[i][jj])
    phase = np.array(phase % pl, dtype=float) / pl
    amp = float(q) ** (gamma * N / 2.0)
    vals = np.where(inside, amp * np.exp(2j * np.pi * phase), 0)
    omega = tf_fourier(TestFunction(params, dual, vals), "inverse")
    return Wavelet(WaveletIndex(gamma, b, k), omega)


def wavelet_direct(params: FieldParams, N: int, gamma: int, b, k) -> TestFunction:
    """Closed form q^(-gamma N/2) chi(p^(gamma-1) k . (x - b)) 1[x - b in p^(-gamma) O^N]."""
    q = params.q
    kv = PadicVector([params(tuple(ki)) for ki in k]).shift(gamma - 1)
    bv = PadicVector([params(tuple(bi)) for bi in b])
    amp = float(q) ** (-gamma * N / 2.0)
    from .padic import character_eval

    def func(x):
        y = x - bv
        if y.valuation() < -gamma:
            return 0
        return amp * character_eval(kv.dot(y))

    return TestFunction.from_callable(params, LatticeWindow(N, 0, 1 - gamma), func)


def fourier_support_point(params: FieldParams, gamma: int, k, eta: PadicVector | None = None) -> PadicVector:
    """p^(gamma-1) (-k + p eta), a point of the wavelet's Fourier support."""
    kv = PadicVector([params(tuple(ki)) for ki in k])
    pt = -kv
    if eta is not None:
        pt = pt + eta.shift(1)
    return pt.shift(gamma - 1)


@dataclass
class GammaSigma:
    value: int | None
    witness: tuple | None = None

    @property
    def well_defined(self) -> bool:
        return self.value is not None


def gamma_sigma(sigma: ExtendedMap, gamma: int, k, samples: int = 8, seed: int = 0) -> GammaSigma:
    """gamma_sigma with ||sigma xi|| = base^(1 - gamma_sigma) on the Fourier support."""
    params, N = sigma.params, sigma.N
    if sigma.is_identity:
        return GammaSigma(gamma)
    rng = np.random.default_rng(seed)
    first = None
    for i in range(samples):
        eta = None if i == 0 else random_point(params, N, rng, 0, 3)
        xi = fourier_support_point(params, gamma, k, eta)
        s = shell_exponent(sigma(xi))
        if first is None:
            first = (xi, s)
        elif s != first[1]:
            return GammaSigma(None, (first[0], xi))
    return GammaSigma(1 - first[1])


def eigenvalue(kind: str, symbol: RadialSymbol, maps: Sequence[ExtendedMap], gamma: int, k,
               samples: int = 8) -> float:
    """Eigenvalue of J_sigma, H_sigma (one map) or H_G (all maps) on the wavelet (gamma, ., k)."""
    vals = []
    for sigma in maps:
        gs = gamma_sigma(sigma, gamma, k, samples)
        if not gs.well_defined:
            raise NotConstant(f"gamma_sigma not constant for {sigma.name}", gs.witness)
        vals.append(symbol.value(1 - gs.value))
    if kind == "J":
        if len(maps) != 1:
            raise ValueError("J eigenvalue needs exactly one map")
        return vals[0]
    if kind == "H":
        if len(maps) != 1:
            raise ValueError("H eigenvalue needs exactly one map")
        return vals[0] - symbol.lam
    if kind == "H_G":
        return float(np.mean([v - symbol.lam for v in vals]))
    raise ValueError("kind must be 'J', 'H' or 'H_G'")


# ---------------------------------------------------------------------------
# Cauchy problem


@dataclass
class EvolutionTrace:
    times: list
    states: list
    masses: list
    residual_times: list
    residuals: list

    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0


def solve_cauchy(symbol: RadialSymbol, group: FiniteGroup | Sequence[ExtendedMap], psi: TestFunction,
                 times: Sequence[float]) -> EvolutionTrace:
    """u(., t) = Z_G(., t) * psi, with central-difference residuals ||du/dt + H_G u||_2."""
    maps = list(group)
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise ValueError("times must be nonnegative")
    psi = _prepare(psi)
    F = tf_fourier(psi)
    op = H_G_op(symbol, maps)
    mult = op.multiplier(psi.params, F.window)
    states = []
    for t in times:
        vals = F.values * np.exp(-t * mult)
        states.append(tf_fourier(TestFunction(psi.params, F.window, vals), "inverse"))
    masses = [tf_integrate(u) for u in states]
    res_t, res = [], []
    for i in range(1, len(times) - 1):
        dt_prev, dt_next = times[i] - times[i - 1], times[i + 1] - times[i]
        if not math.isclose(dt_prev, dt_next, rel_tol=1e-9):
            continue
        du = (states[i + 1] - states[i - 1]) * (1.0 / (2 * dt_next))
        r = du + apply_multiplier(op, states[i])
        res_t.append(times[i])
        res.append(tf_norm(r))
    return EvolutionTrace(times, states, masses, res_t, res)


# ---------------------------------------------------------------------------
# spectrum lattice


@dataclass
class LatticeReport:
    contained: bool
    witness: float | None = None
    exponents: list = field(default_factory=list)


def spectrum_in_lattice(values: Sequence[float], lam: float, base: int, rtol: float = 1e-12) -> LatticeReport:
    """Is every value + lam an integer power of base?"""
    exps = []
    for v in values:
        x = v + lam
        if x <= 0:
            return LatticeReport(False, v, exps)
        k = round(math.log(x, base))
        if abs(float(base) ** k - x) > rtol * x:
            return LatticeReport(False, v, exps)
        exps.append(k)
    return LatticeReport(True, None, exps)
