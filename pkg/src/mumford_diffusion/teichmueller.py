"""Normal-form Schottky coordinates, the automorphism action on them, and the genus-2 algebra.

A tuple (0, 1, t1; inf, y2, t2; x3, y3, t3; ...) lists for each generator its
attracting fixed point, its repelling fixed point and its multiplier.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graphs import (
    GeometricBasis,
    GraphAutomorphism,
    StableGraph,
    SpanningTree,
    automorphism_group,
    default_spanning_tree,
    find_mouths,
    format_word,
    lasso_basis,
    lasso_image_word,
)
from .moebius import (
    INF,
    MoebiusMap,
    NotHyperbolic,
    is_inf,
    moebius_apply,
    moebius_fixed_points,
    moebius_hyperbolic_data,
    moebius_sending,
    point_key,
)
from .group_action import extend_action, identity_core
from .padic import FieldParams, NoRoot, PadicScalar, PadicVector, PrecisionError
from .spectral import RadialSymbol, gamma_sigma, spectrum_in_lattice, wavelet_indices


class TupleError(ValueError):
    """Coordinates violate the normal-form constraints."""


@dataclass(frozen=True)
class SchottkyTuple:
    params: FieldParams
    t: tuple  # multipliers t1..tg
    y2: PadicScalar
    x: tuple = ()  # attracting fixed points of generators 3..g
    y: tuple = ()  # repelling fixed points of generators 3..g

    def __post_init__(self):
        if len(self.t) < 2:
            raise TupleError("genus must be at least 2")
        if len(self.x) != len(self.t) - 2 or len(self.y) != len(self.t) - 2:
            raise TupleError("need one (x, y) pair per generator beyond the second")

    @classmethod
    def genus2(cls, params: FieldParams, t1, t2, y2=-1) -> SchottkyTuple:
        return cls(params, (params(t1), params(t2)), params(y2))

    @property
    def genus(self) -> int:
        return len(self.t)

    def fixed_points(self, i: int):
        """(attracting, repelling) of generator i, 1-based."""
        P = self.params
        if i == 1:
            return P(0), P(1)
        if i == 2:
            return INF, self.y2
        return self.x[i - 3], self.y[i - 3]

    def coordinates(self) -> list:
        """The free coordinates t1; y2, t2; x3, y3, t3; ..."""
        out = [self.t[0], self.y2, self.t[1]]
        for i in range(2, self.genus):
            out.extend([self.x[i - 2], self.y[i - 2], self.t[i]])
        return out

    def norm(self) -> Fraction:
        return max(c.norm() for c in self.coordinates())

    def validate(self) -> None:
        for i, t in enumerate(self.t, 1):
            if t.is_zero() or t.norm() >= 1:
                raise TupleError(f"need 0 < |t{i}| < 1")
        for c in (self.y2,) + self.x + self.y:
            if c.norm() > 1:
                raise TupleError("fixed-point coordinates must lie in the unit disk")
        pts = [point_key(z) for i in range(1, self.genus + 1) for z in self.fixed_points(i)]
        if len(set(pts)) != len(pts):
            raise TupleError("fixed points must be pairwise distinct")

    def to_json_dict(self) -> dict:
        return {"p": self.params.p, "f": self.params.f,
                "coordinates": [_scalar_json(c) for c in self.coordinates()]}


def _scalar_json(z):
    if is_inf(z):
        return "inf"
    if z.is_zero():
        return {"zero": True, "absprec": z.absprec}
    return {"val": z.valuation, "digits": [list(d) if isinstance(d, tuple) else d for d in z.digits()]}


# ---------------------------------------------------------------------------
# generators


def generator_from_data(params: FieldParams, attracting, repelling, t: PadicScalar) -> MoebiusMap:
    """Hyperbolic map with the given fixed points and multiplier t (|t| < 1)."""
    one, zero = params(1), params(0)
    a, r = attracting, repelling
    if is_inf(a):
        phi = MoebiusMap(zero, one, one, -r)
    elif is_inf(r):
        phi = MoebiusMap(one, -a, zero, one)
    else:
        phi = MoebiusMap(one, -a, one, -r)
    return phi.inverse() @ MoebiusMap(t, zero, zero, one) @ phi


def generators(tup: SchottkyTuple) -> list:
    return [generator_from_data(tup.params, *tup.fixed_points(i), tup.t[i - 1]) for i in range(1, tup.genus + 1)]


def generators_genus2(tup: SchottkyTuple) -> tuple:
    """The two normal-form matrices in closed form."""
    if tup.genus != 2:
        raise TupleError("genus-2 tuple expected")
    P = tup.params
    t1, t2 = tup.t
    w1 = MoebiusMap(-t1, P(0), 1 - t1, P(-1))
    w2 = MoebiusMap(P(1), (t2 - 1) * tup.y2, P(0), t2)
    return w1, w2


def composite_w(tup: SchottkyTuple) -> MoebiusMap:
    """w = w2^-1 w1 as an honest matrix product."""
    w1, w2 = generators_genus2(tup)
    return w2.inverse() @ w1


def closed_form_w(tup: SchottkyTuple) -> MoebiusMap:
    """Closed-form entries of w2^-1 w1 for general y2."""
    t1, t2 = tup.t
    y2 = tup.y2
    return MoebiusMap(y2 * (1 - t1) * (1 - t2) - t1 * t2, y2 * (t2 - 1), 1 - t1, tup.params(-1))


def reference_w_y2_minus1(params: FieldParams, t1, t2) -> MoebiusMap:
    """Reference closed form [[t1 + t2 - 1, t2 - 1], [1 - t1, -1]] for w at y2 = -1."""
    t1, t2 = params(t1), params(t2)
    return MoebiusMap(t1 + t2 - 1, t2 - 1, 1 - t1, params(-1))


def specialized_w_y2_minus1(params: FieldParams, t1, t2) -> MoebiusMap:
    """The product w2^-1 w1 at y2 = -1: [[t1 + t2 - 1 - 2 t1 t2, 1 - t2], [1 - t1, -1]]."""
    t1, t2 = params(t1), params(t2)
    return MoebiusMap(t1 + t2 - 1 - 2 * t1 * t2, 1 - t2, 1 - t1, params(-1))


def entrywise_equal(m: MoebiusMap, n: MoebiusMap) -> bool:
    return all(a == b for a, b in zip(m.entries(), n.entries()))


# ---------------------------------------------------------------------------
# genus-2 fixed-point algebra


def beta_map(params: FieldParams, z1, z2) -> MoebiusMap:
    """beta(z) = ((z2 - 1) z + z1 (1 - z2)) / ((z1 - 1) z + z2 (1 - z1))."""
    return MoebiusMap(z2 - 1, z1 * (1 - z2), z1 - 1, z2 * (1 - z1))


def eta_formula(z1, z2):
    return z1 * (z2 - 1) / (z2 * (z1 - 1))


@dataclass
class SigmaAction:
    t1: PadicScalar
    eta: PadicScalar
    t: PadicScalar  # t1 t2, the coordinate the closed form assigns
    z1: object
    z2: object
    beta_checks: dict
    true_multiplier: PadicScalar
    vieta_residuals: dict

    def tuple_out(self):
        return (self.t1, self.eta, self.t)


def _residual(x) -> Fraction:
    return Fraction(0) if x.is_zero() else x.norm()


def sigma_action_genus2(params: FieldParams, t1, t2) -> SigmaAction:
    """Fixed points of w at y2 = -1, the normalizing map beta and eta = beta(0)."""
    tup = SchottkyTuple.genus2(params, t1, t2, -1)
    t1, t2 = tup.t
    w = composite_w(tup)
    fp = moebius_fixed_points(w)
    if fp.parabolic:
        raise NotHyperbolic("w is parabolic")
    z1, z2 = fp.z1, fp.z2
    if is_inf(z1) or is_inf(z2):
        raise NotHyperbolic("w fixes infinity")
    beta = beta_map(params, z1, z2)
    checks = {}
    for name, src, dst in (("z1->0", z1, params(0)), ("z2->inf", z2, INF), ("1->1", params(1), params(1))):
        try:
            img = moebius_apply(beta, src)
            checks[name] = is_inf(dst) and is_inf(img) or (not is_inf(img) and not is_inf(dst) and img == dst)
        except PrecisionError:
            checks[name] = False
    eta = eta_formula(z1, z2)
    a, b, c, d = w.entries()
    prod, total = z1 * z2, z1 + z2
    vieta = {
        "product_true": _residual(prod - (-b / c)),
        "sum_true": _residual(total - (a - d) / c),
        "product_reference": _residual(prod - (1 - t2) / (1 - t1)),
        "sum_reference": _residual(total - (t1 + t2) / (t1 - 1)),
    }
    mult = moebius_hyperbolic_data(w).multiplier
    return SigmaAction(t1, eta, t1 * t2, z1, z2, checks, mult, vieta)


@dataclass
class LineSolution:
    """(t1, t2) = base + s * direction."""

    base: tuple
    direction: tuple

    def at(self, s):
        return tuple(b + s * d for b, d in zip(self.base, self.direction))


def critical_residual(z1, z2):
    """z1 z2 - (z1 + z2) + 1, zero exactly on the critical curve."""
    return z1 * z2 - (z1 + z2) + 1


def solve_t_from_roots(z1, z2):
    """Solve z1 z2 t1 - t2 = z1 z2 - 1, (z1 + z2 - 1) t1 - t2 = z1 + z2.

    Returns a pair (t1, t2) or a LineSolution on the critical curve.
    """
    P = z1 * z2
    S = z1 + z2
    if P.is_zero():
        raise ValueError("z1 z2 must be nonzero")
    det = critical_residual(z1, z2)
    if det.is_zero():
        return LineSolution(((P - 1) / P, P.params(0)), (1 / P, P.params(1)))
    t1 = (P - 1 - S) / det
    t2 = P * t1 - (P - 1)
    return (t1, t2)


def line_solution(z1, z2) -> LineSolution:
    """The first equation's solution line, used whether or not the point is critical."""
    P = z1 * z2
    return LineSolution(((P - 1) / P, P.params(0)), (1 / P, P.params(1)))


def epsilon_roots(params: FieldParams, eps):
    """Roots of z^2 - eps z + (1 + eps), in digit order."""
    eps = params(eps)
    disc = eps * eps - 4 * (1 + eps)
    from .padic import padic_sqrt

    r = padic_sqrt(disc)
    roots = sorted([(eps + r) / 2, (eps - r) / 2], key=lambda z: z.sort_key())
    return roots[0], roots[1]


FAMILY_KEYS = ("abs_z1", "abs_z2", "abs_z1_minus_1", "abs_z2_minus_1", "abs_eta", "critical_residual",
               "second_equation_residual", "abs_t1", "abs_t2", "first_equation_residual",
               "unique_solution", "abs_eta_from_action")


@dataclass
class FamilyRow:
    p: int
    epsilon: PadicScalar
    status: str
    values: dict = field(default_factory=dict)


def _fnorm(x) -> float | None:
    if x is None:
        return None
    if is_inf(x):
        return float("inf")
    return float(x.norm())


def epsilon_family(params: FieldParams, eps, s=None) -> FamilyRow:
    """One row of the epsilon-family report; contested quantities are measured, not assumed."""
    eps = params(eps)
    s = params(params.p) if s is None else params(s)
    try:
        z1, z2 = epsilon_roots(params, eps)
    except NoRoot as exc:
        empty = dict.fromkeys(FAMILY_KEYS)
        empty["reason"] = str(exc)
        return FamilyRow(params.p, eps, "NoRoot", empty)
    t1, t2 = line_solution(z1, z2).at(s)
    eta = eta_formula(z1, z2)
    crit = critical_residual(z1, z2)
    second = (z1 + z2 - 1) * t1 - t2 - (z1 + z2)
    vals = {
        "abs_z1": _fnorm(z1), "abs_z2": _fnorm(z2),
        "abs_z1_minus_1": _fnorm(z1 - 1), "abs_z2_minus_1": _fnorm(z2 - 1),
        "abs_eta": _fnorm(eta),
        "critical_residual": float(_residual(crit)),
        "second_equation_residual": float(_residual(second)),
        "abs_t1": _fnorm(t1), "abs_t2": _fnorm(t2),
        "first_equation_residual": float(_residual(z1 * z2 * t1 - t2 - (z1 * z2 - 1))),
        "unique_solution": None,
    }
    sol = solve_t_from_roots(z1, z2)
    if not isinstance(sol, LineSolution):
        vals["unique_solution"] = {"abs_t1": _fnorm(sol[0]), "abs_t2": _fnorm(sol[1]),
                                   "t1_is_zero": sol[0].is_zero()}
    status = "ok"
    try:
        tup = SchottkyTuple.genus2(params, t1, t2)
        tup.validate()
        act = sigma_action_genus2(params, t1, t2)
        vals["abs_eta_from_action"] = _fnorm(act.eta)
    except (TupleError, NotHyperbolic, NoRoot, PrecisionError, ZeroDivisionError) as exc:
        vals["abs_eta_from_action"] = None
        vals["action_error"] = type(exc).__name__
        status = "ok-partial"
    return FamilyRow(params.p, eps, status, vals)


def epsilon_grid(params: FieldParams, count: int = 10) -> list:
    """eps_k = k p for k = 0..count-1."""
    return [params(k * params.p) for k in range(count)]


# ---------------------------------------------------------------------------
# automorphism action on tuples


class Normalization(enum.Enum):
    ATTRACTING = "attracting"  # first image generator: attracting -> 0, repelling -> 1; second: attracting -> inf
    REPELLING = "repelling"    # the same with attracting and repelling exchanged


def word_matrix(gens: Sequence[MoebiusMap], word: Sequence[int]) -> MoebiusMap:
    out = MoebiusMap.identity(gens[0].params)
    for a in word:
        g = gens[abs(a) - 1]
        out = out @ (g if a > 0 else g.inverse())
    return out


def normalize_generators(params: FieldParams, gens: Sequence[MoebiusMap],
                         mode: Normalization = Normalization.ATTRACTING) -> SchottkyTuple:
    """Conjugate a generator list into normal form and read off its coordinates."""
    data = [moebius_hyperbolic_data(g) for g in gens]
    pick = (lambda h: (h.attracting, h.repelling)) if mode is Normalization.ATTRACTING \
        else (lambda h: (h.repelling, h.attracting))
    a1, r1 = pick(data[0])
    a2, r2 = pick(data[1])
    N = moebius_sending(params, a1, r1, a2)
    img = lambda z: moebius_apply(N, z)
    xs, ys = [], []
    for h in data[2:]:
        a, r = pick(h)
        xs.append(img(a))
        ys.append(img(r))
    y2 = img(r2)
    if any(is_inf(z) for z in [y2] + xs + ys):
        raise TupleError("a fixed point landed on infinity")
    ts = tuple(h.multiplier for h in data)
    return SchottkyTuple(params, ts, y2, tuple(xs), tuple(ys))


def image_words(G: StableGraph, basis: GeometricBasis, aut: GraphAutomorphism) -> list:
    return [lasso_image_word(G, basis, aut, i) for i in range(1, len(basis.lassos) + 1)]


def act_on_tuple(tup: SchottkyTuple, words: Sequence[Sequence[int]],
                 mode: Normalization = Normalization.ATTRACTING) -> SchottkyTuple:
    gens = generators(tup)
    return normalize_generators(tup.params, [word_matrix(gens, w) for w in words], mode)


def tuple_from_coordinates(params: FieldParams, coords: Sequence) -> SchottkyTuple:
    """Inverse of SchottkyTuple.coordinates()."""
    c = list(coords)
    if len(c) < 3 or len(c) % 3:
        raise TupleError("need 3g - 3 coordinates")
    g = len(c) // 3 + 1
    ts = (c[0], c[2]) + tuple(c[5 + 3 * k] for k in range(g - 2))
    xs = tuple(c[3 + 3 * k] for k in range(g - 2))
    ys = tuple(c[4 + 3 * k] for k in range(g - 2))
    return SchottkyTuple(params, ts, c[1], xs, ys)


_ACTION_FAILURES = (NoRoot, NotHyperbolic, TupleError, PrecisionError, ZeroDivisionError)


def tuple_action_core(params: FieldParams, words: Sequence[Sequence[int]],
                      mode: Normalization = Normalization.ATTRACTING):
    """Core map on K^(3g-3); points that are not admissible tuples, or whose image is not, stay fixed."""

    def core(x: PadicVector) -> PadicVector:
        try:
            tup = tuple_from_coordinates(params, x.components)
            tup.validate()
            img = act_on_tuple(tup, words, mode)
            img.validate()
        except _ACTION_FAILURES:
            return x
        return PadicVector(img.coordinates())

    return core


def graph_action_maps(G: StableGraph, params: FieldParams, T: SpanningTree | None = None,
                      rho: int = 1, mode: Normalization = Normalization.ATTRACTING) -> list:
    """One extended map per effective automorphism of G, acting on the Schottky coordinates."""
    T = default_spanning_tree(G) if T is None else T
    basis = lasso_basis(G, T, 0)
    N = 3 * G.genus - 3
    out = []
    for aut in automorphism_group(G).effective:
        words = image_words(G, basis, aut)
        if all(tuple(w) == (i + 1,) for i, w in enumerate(words)):
            out.append(extend_action(params, N, identity_core, rho=rho, name=aut.label()))
            continue
        out.append(extend_action(params, N, tuple_action_core(params, words, mode), rho=rho, name=aut.label()))
    return out


def wavelet_spectrum(G: StableGraph, params: FieldParams, symbol: RadialSymbol | None = None,
                     gammas: Sequence[int] = (0,), rho: int = 1,
                     mode: Normalization = Normalization.ATTRACTING, samples: int = 8) -> dict:
    """H_G eigenvalue table over wavelet classes (gamma, k) and the lattice decision for it."""
    symbol = RadialSymbol.default(params) if symbol is None else symbol
    maps = graph_action_maps(G, params, rho=rho, mode=mode)
    N = maps[0].N
    rows, values = [], []
    for gamma in gammas:
        seen = set()
        for idx in wavelet_indices(params, N, gamma):
            if idx.k in seen:
                continue
            seen.add(idx.k)
            shifts = []
            for sigma in maps:
                gs = gamma_sigma(sigma, gamma, idx.k, samples)
                shifts.append(gs.value if gs.well_defined else None)
            if any(v is None for v in shifts):
                rows.append({"gamma": gamma, "k": [list(c) for c in idx.k], "eigenvalue": None,
                             "gamma_sigma": shifts})
                continue
            mu = float(np.mean([symbol.value(1 - v) - symbol.lam for v in shifts]))
            values.append(mu)
            rows.append({"gamma": gamma, "k": [list(c) for c in idx.k], "eigenvalue": mu,
                         "gamma_sigma": shifts})
    rep = spectrum_in_lattice(values, symbol.lam, params.base)
    return {"N": N, "group_order": len(maps), "rows": rows, "contained": rep.contained,
            "witness": rep.witness, "not_constant": sum(1 for r in rows if r["eigenvalue"] is None)}


def compare_eigenvalues(x: SchottkyTuple, sigma_x: SchottkyTuple, rho: int = 1) -> tuple:
    """(lambda_id, lambda_sigma) = (||p^-rho x||, ||p^-rho sigma x||)."""
    scale = Fraction(x.params.base) ** rho
    return (float(scale * x.norm()), float(scale * sigma_x.norm()))


# ---------------------------------------------------------------------------
# norm-decreasing search


@dataclass
class SearchRow:
    grid_index: tuple
    automorphism: str
    words: list
    status: str
    norm_x: float | None = None
    norm_sigma_x: float | None = None
    image: list | None = None


@dataclass
class SearchResult:
    graph: StableGraph
    p: int
    rows: list
    witness: SearchRow | None
    explored: int
    failures: dict
    end_to_end: dict | None = None
    mouth_local: list | None = None

    @property
    def found(self) -> bool:
        return self.witness is not None


def genus2_grid(params: FieldParams, valuations=(1, 2)):
    """(index, t1, t2) with |t_i| = p^-v over all leading residue digits, y2 = -1."""
    res = [r for r in params.residue_field() if any(r)]
    for (v1, v2) in itertools.product(valuations, repeat=2):
        for (i1, d1), (i2, d2) in itertools.product(enumerate(res), repeat=2):
            t1 = params.from_digits([d1], val=v1)
            t2 = params.from_digits([d2], val=v2)
            yield (v1, v2, i1, i2), t1, t2


def _random_unit(params, rng):
    digits = [tuple(int(c) for c in rng.integers(0, params.p, params.f)) for _ in range(3)]
    if not any(digits[0]):
        digits[0] = (1,) + (0,) * (params.f - 1)
    return params.from_digits(digits)


def higher_genus_grid(params: FieldParams, g: int, samples: int, seed: int = 0):
    """Seeded sample of tuples with |t_i| in {p^-1, p^-2}, y2 = -1 and x_i, y_i in the unit disk."""
    rng = np.random.default_rng(seed)
    k = 0
    while k < samples:
        ts = tuple(_random_unit(params, rng).shift(int(rng.integers(1, 3))) for _ in range(g))
        xs = tuple(_random_unit(params, rng).shift(int(rng.integers(0, 3))) for _ in range(g - 2))
        ys = tuple(_random_unit(params, rng).shift(int(rng.integers(0, 3))) for _ in range(g - 2))
        tup = SchottkyTuple(params, ts, params(-1), xs, ys)
        try:
            tup.validate()
        except TupleError:
            continue
        yield (k,), tup
        k += 1


def _eigen_values_for(symbol: RadialSymbol, norms: Sequence[Fraction], rho: int, base: int) -> list:
    out = []
    for nrm in norms:
        s = rho + _log_base(nrm, base)
        out.append(symbol.value(s))
    return out


def _log_base(x: Fraction, base: int) -> int:
    k = 0
    while x > 1:
        x /= base
        k += 1
    while x < 1:
        x *= base
        k -= 1
    return k


def averaged_eigenvalue_report(params: FieldParams, norms: Sequence, rho: int = 1,
                               symbol: RadialSymbol | None = None) -> dict:
    """Eigenvalues f(||p^-rho tau x||) over the group, their H-average and its lattice test."""
    symbol = RadialSymbol.default(params) if symbol is None else symbol
    usable = [nrm for nrm in norms if nrm is not None]
    vals = _eigen_values_for(symbol, usable, rho, params.base)
    avg = float(np.mean([v - symbol.lam for v in vals]))
    rep = spectrum_in_lattice([avg], symbol.lam, params.base)
    return {"eigenvalues": vals, "average": avg, "in_lattice": rep.contained,
            "skipped_automorphisms": len(norms) - len(usable)}


def search_norm_decreasing(G: StableGraph, params: FieldParams, T: SpanningTree | None = None,
                           mode: Normalization = Normalization.ATTRACTING, samples: int = 64,
                           seed: int = 0, rho: int = 1, keep_rows: bool = True) -> SearchResult:
    """Look for a tuple x and an automorphism sigma with ||sigma x|| < ||x||."""
    T = default_spanning_tree(G) if T is None else T
    basis = lasso_basis(G, T, 0)
    group = automorphism_group(G)
    auts = [(a, image_words(G, basis, a)) for a in group.effective]
    g = G.genus
    grid = genus2_grid(params) if g == 2 else higher_genus_grid(params, g, samples, seed)
    rows, failures = [], {}
    witness = None
    explored = 0
    witness_group_norms = None
    for idx, *coords in grid:
        tup = coords[0] if g > 2 else SchottkyTuple.genus2(params, coords[0], coords[1], -1)
        explored += 1
        nx = tup.norm()
        norms = []
        for aut, words in auts:
            if all(len(w) == 1 and abs(w[0]) == i + 1 and w[0] > 0 for i, w in enumerate(words)):
                norms.append(nx)
                continue
            try:
                img = act_on_tuple(tup, words, mode)
                row = SearchRow(idx, aut.label(), [format_word(w) for w in words], "ok",
                                float(nx), float(img.norm()))
                norms.append(img.norm())
            except (NoRoot, NotHyperbolic, TupleError, PrecisionError, ZeroDivisionError) as exc:
                row = SearchRow(idx, aut.label(), [format_word(w) for w in words], type(exc).__name__,
                                float(nx), None)
                failures[type(exc).__name__] = failures.get(type(exc).__name__, 0) + 1
                norms.append(None)
            if keep_rows:
                rows.append(row)
            if row.status == "ok" and row.norm_sigma_x < row.norm_x and witness is None:
                witness = row
        if witness is not None and witness_group_norms is None and witness.grid_index == idx:
            witness_group_norms = norms
    end_to_end = None
    if witness is not None:
        end_to_end = averaged_eigenvalue_report(params, witness_group_norms, rho)
    mouth_local = None
    if g >= 3:
        mouth_local = mouth_local_report(G, params, samples=min(samples, 16), seed=seed)
    return SearchResult(G, params.p, rows, witness, explored, failures, end_to_end, mouth_local)


def mouth_local_report(G: StableGraph, params: FieldParams, samples: int = 16, seed: int = 0) -> list:
    """Evaluate |beta(xi)| against |z1/z2| |(1 - z2)/(1 - z1)| for sampled genus-2 roots and points xi."""
    if not find_mouths(G):
        return []
    rng = np.random.default_rng(seed)
    out = []
    for idx, t1, t2 in itertools.islice(genus2_grid(params), samples):
        try:
            act = sigma_action_genus2(params, t1, t2)
        except (NoRoot, NotHyperbolic, PrecisionError, ZeroDivisionError) as exc:
            out.append({"grid_index": list(idx), "status": type(exc).__name__})
            continue
        z1, z2 = act.z1, act.z2
        beta = beta_map(params, z1, z2)
        predicted = float((z1 / z2).norm() * ((1 - z2) / (1 - z1)).norm())
        xi = _random_unit(params, rng).shift(int(rng.integers(0, 3)))
        try:
            val = moebius_apply(beta, xi)
            measured = _fnorm(val)
        except PrecisionError:
            measured = None
        out.append({"grid_index": list(idx), "status": "ok", "abs_z1": _fnorm(z1), "abs_z2": _fnorm(z2),
                    "abs_z1_minus_1": _fnorm(z1 - 1), "abs_z2_minus_1": _fnorm(z2 - 1),
                    "predicted_abs_beta": predicted, "measured_abs_beta": measured, "abs_xi": _fnorm(xi)})
    return out
