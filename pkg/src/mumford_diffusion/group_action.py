"""Finite groups acting on the unit polydisk and their extension to all of K^N.

A core map acts on X, a finite union of balls inside the unit polydisk.  It is
extended by the identity on the rest of the polydisk, conjugated by the
rescaling x -> p^rho x on the annulus B_rho(0) minus the polydisk, and by the
identity outside B_rho(0).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .padic import FieldParams, PadicScalar, PadicVector


class ActionError(ValueError):
    """A core map sent a point of X outside the unit polydisk."""


def shell_exponent(x: PadicVector):
    """s with ||x|| = base^s; -inf for the zero vector."""
    v = x.valuation()
    return -v


# ---------------------------------------------------------------------------
# X as a finite union of balls


@dataclass(frozen=True)
class Ball:
    center: PadicVector
    radius_exp: int  # the ball center + p^radius_exp O^N

    def contains(self, x: PadicVector) -> bool:
        return (x - self.center).valuation() >= self.radius_exp


@dataclass(frozen=True)
class BallUnion:
    balls: tuple[Ball, ...]

    @classmethod
    def unit_polydisk(cls, params: FieldParams, N: int) -> BallUnion:
        zero = PadicVector([params(0)] * N)
        return cls((Ball(zero, 0),))

    def contains(self, x: PadicVector) -> bool:
        # boundary ties resolve to the core map: closed balls are used throughout
        return any(b.contains(x) for b in self.balls)


# ---------------------------------------------------------------------------
# core maps on the unit polydisk


def identity_core(x: PadicVector) -> PadicVector:
    return x


def shell_swap_core(depth: int = 0):
    """Involution exchanging the shells of valuation depth and depth + 1."""

    def core(x: PadicVector) -> PadicVector:
        v = x.valuation()
        if v == depth:
            return x.shift(1)
        if v == depth + 1:
            return x.shift(-1)
        return x

    core.__name__ = f"shell_swap_{depth}"
    return core


def rescale_core(k: int = 1):
    def core(x: PadicVector) -> PadicVector:
        return x.shift(k)

    core.__name__ = f"rescale_{k}"
    return core


def permutation_core(perm: Sequence[int]):
    perm = tuple(perm)

    def core(x: PadicVector) -> PadicVector:
        return PadicVector([x[perm[i]] for i in range(len(perm))])

    core.__name__ = f"permute_{''.join(map(str, perm))}"
    return core


def unit_scale_core(u: PadicScalar):
    if u.valuation != 0:
        raise ValueError("scaling factor must be a unit")

    def core(x: PadicVector) -> PadicVector:
        return x.scale(u)

    core.__name__ = "unit_scale"
    return core


# ---------------------------------------------------------------------------
# the three-step extension


@dataclass(frozen=True)
class ExtendedMap:
    params: FieldParams
    N: int
    core: Callable[[PadicVector], PadicVector]
    rho: int
    X: BallUnion | None = None  # None: the whole unit polydisk
    name: str = ""
    is_identity: bool = False

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("rho must be positive")

    def in_X(self, y: PadicVector) -> bool:
        if y.valuation() < 0:
            return False
        return True if self.X is None else self.X.contains(y)

    def _on_polydisk(self, y: PadicVector) -> PadicVector:
        if not self.in_X(y):
            return y
        out = self.core(y)
        if out.valuation() < 0:
            raise ActionError(f"core map {self.name or self.core.__name__} left the unit polydisk")
        return out

    def __call__(self, x: PadicVector) -> PadicVector:
        if self.is_identity:
            return x
        s = shell_exponent(x)
        if s > self.rho:
            return x
        if s > 0:
            return self._on_polydisk(x.shift(self.rho)).shift(-self.rho)
        return self._on_polydisk(x)

    def compose(self, other: ExtendedMap) -> ExtendedMap:
        """Extension of the composite core map self.core o other.core on X."""
        if other.X != self.X or other.rho != self.rho:
            raise ValueError("maps act on different domains")
        inner, outer = other, self

        def core(y):
            return outer._on_polydisk(inner._on_polydisk(y))

        return ExtendedMap(self.params, self.N, core, self.rho, self.X,
                           name=f"{self.name}*{other.name}",
                           is_identity=self.is_identity and other.is_identity)


def extend_action(params: FieldParams, N: int, core, X: BallUnion | None = None,
                  rho: int | None = None, name: str = "") -> ExtendedMap:
    if rho is None:
        rho = default_rho()
    return ExtendedMap(params, N, core, rho, X, name=name or getattr(core, "__name__", ""),
                       is_identity=core is identity_core)


def default_rho(max_support_exponent: int = 0) -> int:
    """1 + the largest support exponent in play."""
    return 1 + max(0, max_support_exponent)


def identity_map(params: FieldParams, N: int, rho: int = 1) -> ExtendedMap:
    return ExtendedMap(params, N, identity_core, rho, None, name="id", is_identity=True)


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup:
    """Finite group given by a composition table; table[i][j] = index of g_i g_j."""

    def __init__(self, elements: Sequence, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None,
                 check_associativity: bool | None = None):
        n = len(elements)
        self.elements = list(elements)
        self.table = [list(row) for row in table]
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("composition table has the wrong size")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise ValueError("composition table refers to unknown elements")
        ids = [e for e in range(n) if all(self.table[e][j] == j and self.table[j][e] == j for j in range(n))]
        if not ids:
            raise ValueError("no identity element")
        self.identity = ids[0]
        self.inverses = []
        for i in range(n):
            inv = [j for j in range(n) if self.table[i][j] == self.identity and self.table[j][i] == self.identity]
            if not inv:
                raise ValueError(f"element {self.labels[i]} has no inverse")
            self.inverses.append(inv[0])
        if check_associativity is None:
            check_associativity = n <= 128  # the full check is cubic
        for a in range(n if check_associativity else 0):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise ValueError("composition table is not associative")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def trivial(cls, element) -> FiniteGroup:
        return cls([element], [[0]], ["id"])

    @classmethod
    def generate(cls, generators: Sequence, compose: Callable, key: Callable, identity) -> FiniteGroup:
        """Closure of the generators; elements are identified by key(element)."""
        elems = [identity]
        keys = {key(identity): 0}
        frontier = [identity]
        while frontier:
            new = []
            for a in frontier:
                for g in generators:
                    c = compose(g, a)
                    k = key(c)
                    if k not in keys:
                        keys[k] = len(elems)
                        elems.append(c)
                        new.append(c)
            frontier = new
            if len(elems) > 10_000:
                raise ValueError("group generation did not close")
        table = [[keys[key(compose(a, b))] for b in elems] for a in elems]
        return cls(elems, table)

    def to_json_dict(self) -> dict:
        return {"elements": self.labels, "table": self.table}

    @classmethod
    def from_json_dict(cls, doc: dict) -> FiniteGroup:
        return cls(doc["elements"], doc["table"], doc["elements"])


def map_group(maps: Sequence[ExtendedMap], samples: Sequence[PadicVector]) -> FiniteGroup:
    """Group generated by extended maps, identified by their action on sample points."""
    if not maps:
        raise ValueError("need at least one generator")
    first = maps[0]
    ident = ExtendedMap(first.params, first.N, identity_core, first.rho, first.X, "id", True)

    def key(m):
        return tuple(tuple(c.sort_key() for c in m(x)) for x in samples)

    group = FiniteGroup.generate(list(maps), lambda a, b: a.compose(b), key, ident)
    group.labels = [m.name or str(i) for i, m in enumerate(group.elements)]
    return group


# ---------------------------------------------------------------------------
# sigma-radial functions


def random_point(params: FieldParams, N: int, rng: np.random.Generator, vmin=-3, vmax=3) -> PadicVector:
    comps = []
    for _ in range(N):
        v = int(rng.integers(vmin, vmax + 1))
        digits = [tuple(int(d) for d in rng.integers(0, params.p, params.f)) for _ in range(4)]
        if all(c == 0 for c in digits[0]):
            digits[0] = (1,) + (0,) * (params.f - 1)
        comps.append(params.from_digits(digits, val=v))
    return PadicVector(comps)


def random_shell_point(params: FieldParams, N: int, nu: int, rng: np.random.Generator) -> PadicVector:
    """Random point with ||x|| = base^nu."""
    lead = int(rng.integers(0, N))
    comps = []
    for i in range(N):
        digits = [tuple(int(d) for d in rng.integers(0, params.p, params.f)) for _ in range(4)]
        if i == lead and all(c == 0 for c in digits[0]):
            digits[0] = (1,) + (0,) * (params.f - 1)
        comps.append(params.from_digits(digits, val=-nu))
    return PadicVector(comps)


@dataclass
class RadialityReport:
    consistent: bool
    samples: int
    counterexample: tuple | None = None

    def __bool__(self):
        return self.consistent


def _probe_points(params, N, sigma, budget, seed):
    rng = np.random.default_rng(seed)
    pts = [random_point(params, N, rng) for _ in range(budget)]
    return [(x, shell_exponent(sigma(x))) for x in pts]


def check_sigma_radial(g: Callable[[PadicVector], float], sigma: ExtendedMap,
                       budget: int = 200, seed: int = 0, rtol: float = 1e-12) -> RadialityReport:
    """Sampling check of ||sigma x|| = ||sigma y|| => g(x) = g(y)."""
    seen = {}
    probes = _probe_points(sigma.params, sigma.N, sigma, budget, seed)
    for x, s in probes:
        gx = g(x)
        if s in seen:
            y, gy = seen[s]
            if abs(gx - gy) > rtol * max(1.0, abs(gx), abs(gy)):
                return RadialityReport(False, len(probes), (y, x))
        else:
            seen[s] = (x, gx)
    return RadialityReport(True, len(probes))


def check_sigma_increasing(g: Callable[[PadicVector], float], sigma: ExtendedMap,
                           budget: int = 200, seed: int = 0, rtol: float = 1e-12) -> RadialityReport:
    """Sampling check of ||sigma x|| <= ||sigma y|| => g(x) <= g(y)."""
    probes = [(x, s, g(x)) for x, s in _probe_points(sigma.params, sigma.N, sigma, budget, seed)]
    probes.sort(key=lambda t: t[1])
    for i, (x, sx, gx) in enumerate(probes):
        for y, sy, gy in probes[i:]:
            if gx > gy + rtol * max(1.0, abs(gx), abs(gy)):
                return RadialityReport(False, len(probes), (x, y))
    return RadialityReport(True, len(probes))


@dataclass
class SigmaRadialProfile:
    """f_sigma(x) = f(sigma x) for a radial symbol f, with a memo of shell values."""

    symbol: object  # anything with .value(shell_exponent)
    sigma: ExtendedMap
    samples_per_shell: int = 6
    seed: int = 0
    _memo: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __call__(self, x: PadicVector) -> float:
        return self.symbol.value(shell_exponent(self.sigma(x)))

    def image_shell(self, nu: int):
        """Shell exponent of sigma(xi) for ||xi|| = base^nu, or None if it is not constant."""
        with self._lock:
            if nu in self._memo:
                return self._memo[nu]
        if self.sigma.is_identity or nu > self.sigma.rho:
            out = nu
        else:
            rng = np.random.default_rng((self.seed, nu + 1000))
            shells = set()
            for _ in range(self.samples_per_shell):
                x = random_shell_point(self.sigma.params, self.sigma.N, nu, rng)
                shells.add(shell_exponent(self.sigma(x)))
            out = shells.pop() if len(shells) == 1 else None
        with self._lock:
            self._memo[nu] = out
        return out

    def shell_value(self, nu: int) -> float:
        s = self.image_shell(nu)
        if s is None:
            raise ValueError(f"f_sigma is not constant on the shell {nu}")
        return self.symbol.value(s)
