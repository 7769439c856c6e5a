#!/usr/bin/env python3
"""
Deformed Heisenberg operators for the product ∘_t, the maps Θ and Θ̃ to the Hilbert-scheme
side, the transported ring (F_X, ∘_{-1}) and the tautological Chern generating function.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from frobenius import AlgebraElement, ConfigError, FrobeniusAlgebra, ShapeError, add_into, format_rational, parse_rational
from fock import (
    SAMPLE_PAIRS,
    SAMPLE_TRIPLES,
    FockVector,
    MonomialFock,
    MonomialVector,
    OrbifoldFock,
    PartitionFunction,
    bracket_residual,
    first_difference,
    monomials_of_norm,
    reduced_basis,
    sample_tuples,
)
from jucys import HbarSeries, JucysClasses, comm_cases, level_basis
from orbiring import invariant_product, zeta
from reports import Case
from stablering import parity_of
from vertexw import Family, GeneralizedPartition, OperatorExpr, generalized_partitions, normal_mode

logger = logging.getLogger(__name__)

DEFORM_THEOREM = "[tp_m, tp_n] = t^{d/6} m delta_{m,-n} (a,b); [tO^k(g), tp_-1(a)] = (ad tb)^k tp_-1(ga); tb = -1/6 :tp^3:_0(tau_* 1)"
DICTIONARY_THEOREM = "Theta carries (F_X, o_-1) to the Hilbert-scheme axioms; Theta-tilde intertwines o_1 with it"
CHERN_THEOREM = "sum_n c_hbar(L^[n]) z^n = exp(sum_r (-hbar)^{r-1}/r a_-r(c_hbar(L)) z^r)|0> = sum_n epsilon_n(c_hbar(L), hbar) z^n"


@dataclass(frozen=True)
class DeformParam:
    """t = s⁶ with t^{1/3} = s², t^{1/6} = s; or the rule t = −1, t^{d/6} = −1"""
    s: Fraction = Fraction(1)
    special_minus_one: bool = False

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))
        if not self.s:
            raise ShapeError("s must be nonzero")

    @classmethod
    def parse(cls, text: str) -> "DeformParam":
        return cls(parse_rational(text))

    @classmethod
    def minus_one(cls) -> "DeformParam":
        return cls(Fraction(1), special_minus_one=True)

    @property
    def t(self) -> Fraction:
        return Fraction(-1) if self.special_minus_one else self.s ** 6

    @property
    def label(self) -> str:
        return "t=-1" if self.special_minus_one else f"s={format_rational(self.s)}"

    def check(self, algebra: FrobeniusAlgebra) -> None:
        if algebra.d % 2:
            raise ConfigError(f"the deformed product needs even d, {algebra.name} has d = {algebra.d}")
        if self.special_minus_one and algebra.d % 4 != 2:
            raise ConfigError(f"t^(d/6) = -1 with t = -1 needs d = 2 mod 4, {algebra.name} has d = {algebra.d}")

    def creation(self, d: int) -> Fraction:
        """t^{d/3}"""
        return Fraction(1) if self.special_minus_one else self.s ** (2 * d)

    def annihilation(self, d: int) -> Fraction:
        """t^{−d/6}"""
        return Fraction(-1) if self.special_minus_one else self.s ** (-d)

    def central(self, d: int) -> Fraction:
        """t^{d/6}"""
        return self.creation(d) * self.annihilation(d)

    def split_factor(self, d: int) -> Fraction:
        """t^{d/2}"""
        return Fraction(-1) if self.special_minus_one else self.s ** (3 * d)

    def mode_scale(self, d: int):
        creation, annihilation = self.creation(d), self.annihilation(d)
        return lambda mode: creation if mode < 0 else annihilation


class DeformedModel:
    """A Fock model whose Heisenberg operators are ᵗp_n"""

    def __init__(self, base: Any, param: DeformParam):
        self.base = base
        self.algebra = base.algebra
        self.param = param
        param.check(self.algebra)
        self._creation = param.creation(self.algebra.d)
        self._annihilation = param.annihilation(self.algebra.d)

    def vacuum(self) -> Any:
        return self.base.vacuum()

    def zero(self) -> Any:
        return self.base.zero()

    def add(self, u: Any, v: Any) -> Any:
        return self.base.add(u, v)

    def scale(self, v: Any, c: Any) -> Any:
        return self.base.scale(v, c)

    def is_zero(self, v: Any) -> bool:
        return self.base.is_zero(v)

    def split_levels(self, v: Any) -> Dict[int, Any]:
        return self.base.split_levels(v)

    def create(self, m: int, alpha: AlgebraElement, v: Any) -> Any:
        return self.base.scale(self.base.create(m, alpha, v), self._creation)

    def annihilate(self, m: int, alpha: AlgebraElement, v: Any) -> Any:
        return self.base.scale(self.base.annihilate(m, alpha, v), self._annihilation)

    def heisenberg(self, mode: int, alpha: AlgebraElement, v: Any) -> Any:
        if mode < 0:
            return self.create(-mode, alpha, v)
        if mode > 0:
            return self.annihilate(mode, alpha, v)
        return self.base.zero()


@dataclass(frozen=True)
class GaussianRational:
    """a + b·i over ℚ"""
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def i_power(cls, k: int) -> "GaussianRational":
        return (cls(1), cls(0, 1), cls(-1), cls(0, -1))[k % 4]

    @classmethod
    def coerce(cls, value: Any) -> "GaussianRational":
        return value if isinstance(value, GaussianRational) else cls(Fraction(value))

    def __add__(self, other: Any) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other: Any) -> "GaussianRational":
        return self + (-GaussianRational.coerce(other))

    def __mul__(self, other: Any) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __truediv__(self, other: Any) -> "GaussianRational":
        other = GaussianRational.coerce(other)
        norm = other.re ** 2 + other.im ** 2
        if not norm:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / norm, num.im / norm)

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if not self.im:
            return format_rational(self.re)
        return f"{format_rational(self.re)}{'+' if self.im > 0 else '-'}{format_rational(abs(self.im))}i"


Coordinates = Dict[PartitionFunction, Fraction]
GaussianCoordinates = Dict[PartitionFunction, GaussianRational]


# ------------------------------------------------------------------ Θ, Θ̃ and the transported ring


def theta(coords: Coordinates) -> Coordinates:
    """Θ keeps the coordinate of every monomial and reads it on the a-monomials"""
    return dict(coords)


def theta_inverse(coords: Coordinates) -> Coordinates:
    return dict(coords)


def shift_number(rho: PartitionFunction) -> int:
    """Σ n_a − k for the monomial of ρ; unchanged by 1-parts, so reduced coordinates can be used"""
    return rho.norm - rho.length


def theta_tilde(coords: Dict[PartitionFunction, Any]) -> GaussianCoordinates:
    """Θ̃ multiplies the coordinate of p_ρ by i^{‖ρ‖−ℓ(ρ)}"""
    out: GaussianCoordinates = {}
    for rho, c in coords.items():
        value = GaussianRational.i_power(shift_number(rho)) * c
        if value:
            out[rho] = value
    return out


def hilbert_product(fock: OrbifoldFock, x: Coordinates, y: Coordinates, n: int) -> Coordinates:
    """
    The ring on H*(X^[n]) forced by Θ: Θ(Θ⁻¹x ∘_{−1} Θ⁻¹y).

    No geometric Hilbert-scheme data is involved; for d = 2 this is the unique product
    making Θ a ring isomorphism from the symmetric-product side with ∘_{−1}.
    """
    if fock.algebra.d % 4 != 2:
        raise ConfigError(f"the Hilbert-scheme comparison needs d = 2 mod 4, got d = {fock.algebra.d}")
    left = fock.from_coordinates(theta_inverse(x), n)
    right = fock.from_coordinates(theta_inverse(y), n)
    return theta(fock.coordinates(invariant_product(left, right, -1)))


def _split(coords: GaussianCoordinates) -> Tuple[Coordinates, Coordinates]:
    re = {rho: c.re for rho, c in coords.items() if c.re}
    im = {rho: c.im for rho, c in coords.items() if c.im}
    return re, im


def hilbert_product_gaussian(fock: OrbifoldFock, x: GaussianCoordinates, y: GaussianCoordinates, n: int) -> GaussianCoordinates:
    """hilbert_product extended ℚ(i)-bilinearly"""
    xr, xi = _split(x)
    yr, yi = _split(y)
    out: GaussianCoordinates = {}

    def accumulate(a: Coordinates, b: Coordinates, weight: GaussianRational) -> None:
        if not a or not b:
            return
        for rho, c in hilbert_product(fock, a, b, n).items():
            out[rho] = out.get(rho, GaussianRational()) + weight * c

    accumulate(xr, yr, GaussianRational(1))
    accumulate(xi, yi, GaussianRational(-1))
    accumulate(xr, yi, GaussianRational(0, 1))
    accumulate(xi, yr, GaussianRational(0, 1))
    return {rho: c for rho, c in out.items() if c}


def hilbert_class(classes: JucysClasses, k: int, alpha: AlgebraElement, n: int, fock: Optional[OrbifoldFock] = None) -> Coordinates:
    """G^k(α,n) := Θ(O^k(α,n)) with O^k computed under ∘_{−1}"""
    if classes.t != -1:
        raise ConfigError("the transported classes are built from the product at t = -1")
    fock = fock or OrbifoldFock(classes.algebra)
    return theta(fock.coordinates(classes.O(k, alpha, n)))


# ------------------------------------------------------------------ deformed cubic operator


def deformed_cubic(algebra: FrobeniusAlgebra, param: DeformParam) -> OperatorExpr:
    """−1/6 :ᵗp³:_0(τ_*1)"""
    return normal_mode(algebra, 3, 0, algebra.unit_element()).scale(Fraction(-1, 6)).with_mode_scale(param.mode_scale(algebra.d))


def split_join_cubic(algebra: FrobeniusAlgebra, param: DeformParam) -> OperatorExpr:
    """−½ Σ_{n,m>0} (p_{−n−m} p_n p_m + t^{d/2} p_{−n} p_{−m} p_{n+m})(τ_*1) in undeformed operators"""
    split = param.split_factor(algebra.d)

    def weight(lam: GeneralizedPartition) -> Fraction:
        creations = sum(1 for part in lam.parts if part < 0)
        return -(split if creations == 2 else Fraction(1)) / lam.bang

    tensor = algebra.tau_push_terms(3, algebra.unit_element())
    return OperatorExpr(algebra, [Family(3, 0, weight, tensor)], label="split/join cubic")


def cubic_term_residual(algebra: FrobeniusAlgebra, param: DeformParam, max_level: int) -> Optional[str]:
    """The two cubic expressions agree coefficient by coefficient on every λ with ℓ(λ) = 3, |λ| = 0"""
    normal = deformed_cubic(algebra, param).families[0]
    split = split_join_cubic(algebra, param).families[0]
    scale = param.mode_scale(algebra.d)
    for lam in generalized_partitions(3, 0, max_level):
        left = normal.weight(lam) * normal.coefficient
        for mode in lam.parts:
            left *= scale(mode)
        right = split.weight(lam) * split.coefficient
        if left != right:
            return f"{lam.parts}: {format_rational(left)} != {format_rational(right)}"
    return None


# ------------------------------------------------------------------ Chern generating function


def chern_generating(algebra: FrobeniusAlgebra, L: AlgebraElement, hbar_order: int, z_order: int) -> Dict[int, HbarSeries]:
    """
    Level-n parts of exp(Σ_r (−ħ)^{r−1}/r p_{−r}(c_ħ(L)) z^r)|0⟩, c_ħ(L) = 1 + ħL, on monomials.

    Uses n·E_n = Σ_r (−ħ)^{r−1} p_{−r}(c_ħ(L)) E_{n−r}.
    """
    degree = algebra.element_degree(L)
    if degree is not None and degree > 2:
        raise ShapeError(f"L must have degree at most 2, got {degree}")
    model = MonomialFock(algebra)
    c_hbar = {0: algebra.unit_element(), 1: dict(L)}
    levels: Dict[int, Dict[int, MonomialVector]] = {0: {0: model.vacuum()}}
    for n in range(1, z_order + 1):
        acc: Dict[int, MonomialVector] = {}
        for r in range(1, n + 1):
            for k, vec in levels[n - r].items():
                for j, gamma in c_hbar.items():
                    power = k + j + r - 1
                    if power > hbar_order or not gamma:
                        continue
                    term = model.scale(model.create(r, gamma, vec), Fraction((-1) ** (r - 1), n))
                    acc[power] = model.add(acc.get(power, {}), term)
        levels[n] = {k: v for k, v in acc.items() if v}
        logger.debug(f"chern level {n}: {sum(len(v) for v in levels[n].values())} monomial terms")
    return {n: HbarSeries(hbar_order, terms) for n, terms in levels.items()}


def _evaluate(series: HbarSeries, hbar: Fraction) -> MonomialVector:
    out: MonomialVector = {}
    for k, vec in series.terms.items():
        for monomial, c in vec.items():
            add_into(out, monomial, c * hbar ** k)
    return out


def chern_residual(classes: JucysClasses, L: AlgebraElement, hbar_order: int, n: int,
                   series: Optional[Dict[int, HbarSeries]] = None) -> Optional[str]:
    """Level n, ħ^k ≤ hbar_order: the exponential against ε_n(c_ħ(L), ħ)"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    model = MonomialFock(algebra)
    series = series or chern_generating(algebra, L, hbar_order, n)
    expected = classes.epsilon(HbarSeries(1, {0: algebra.unit_element(), 1: dict(L)}), n, order=hbar_order)
    for k in range(hbar_order + 1):
        left = series[n].coefficient(k, {})
        element = expected.coefficient(k)
        right = fock.monomial_coordinates(element, model) if element is not None else {}
        residual = first_difference(left, right)
        if residual:
            return f"z^{n} hbar^{k}: {residual}"
    return None


def dual_chern_residual(classes: JucysClasses, L: AlgebraElement, n: int) -> Optional[str]:
    """At ħ = −1 the exponential becomes exp(Σ_r p_{−r}(1−L) z^r/r)|0⟩ = Σ η_n(1−L) z^n"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    series = chern_generating(algebra, L, n, n)[n]
    dual = dict(algebra.unit_element())
    for c, v in L.items():
        add_into(dual, c, -v)
    right = fock.monomial_coordinates(classes.eta(dual, n), MonomialFock(algebra))
    return first_difference(_evaluate(series, Fraction(-1)), right)


# ------------------------------------------------------------------ suites


def _vectors(fock: OrbifoldFock, max_n: int) -> List[Tuple[str, FockVector]]:
    return [(f"n={n}/{label}", FockVector.of(x)) for n in range(max_n + 1) for label, x in level_basis(fock, n)]


def _cubic_residual(classes: JucysClasses, fock: OrbifoldFock, monomials: Any, expr: OperatorExpr, monomial) -> Optional[str]:
    lhs = fock.monomial_coordinates(classes.goulden(fock.monomial_element(monomial)), MonomialFock(classes.algebra))
    rhs = expr.apply(monomials, {monomial: Fraction(1)})
    return first_difference(lhs, rhs)


def _relabel(prefix: str, cases: List[Case]) -> List[Case]:
    return [Case(f"{prefix}/{c.id}", c.check) for c in cases]


def _pick(algebra: FrobeniusAlgebra) -> Tuple[AlgebraElement, AlgebraElement]:
    """γ = 1 and the first even non-unit class (or 1 again)"""
    others = [c for c in range(algebra.dim) if c != algebra.unit and not algebra.parity(c)]
    return algebra.unit_element(), {(others[0] if others else algebra.unit): Fraction(1)}


def deform_cases(algebra: FrobeniusAlgebra, params: List[DeformParam], max_n: int, max_k: int, max_mode: int) -> List[Case]:
    fock = OrbifoldFock(algebra)
    monomials = MonomialFock(algebra)
    gamma, alpha = _pick(algebra)
    cases = []
    for param in params:
        param.check(algebra)
        classes = JucysClasses(algebra, param.t)
        model = DeformedModel(fock, param)
        central = param.central(algebra.d)
        prefix = f"deform/{param.label}"
        logger.info(f"🔧 deformed checks at {param.label} (t = {format_rational(param.t)}) on {algebra.name}")

        for label, v in _vectors(fock, max_n):
            cases.append(Case(f"{prefix}/heisenberg/{label}", lambda v=v: bracket_residual(model, central, max_mode, v)))

        # ᵗp_{−1} is a scalar multiple of p_{−1}, so the commutator identity is checked on p_{−1}
        cases.extend(_relabel(prefix, comm_cases(classes, gamma, alpha, max_k, max_n)))

        expr = deformed_cubic(algebra, param)
        for n in range(max_n + 1):
            for monomial in monomials_of_norm(algebra, n):
                label = " ".join(f"p(-{r},{algebra.basis[c].label})" for c, r in monomial) or "vac"
                cases.append(Case(
                    f"{prefix}/cubic/n={n}/{label}",
                    lambda monomial=monomial, classes=classes, expr=expr: _cubic_residual(classes, fock, monomials, expr, monomial),
                ))
        cases.append(Case(f"{prefix}/split-join-terms", lambda param=param: cubic_term_residual(algebra, param, 2 * max_n)))

        if not param.special_minus_one:
            for n in range(1, max_n + 1):
                def zeta_check(n=n, param=param) -> Optional[str]:
                    pairs = sample_tuples(reduced_basis(algebra, n), 2, SAMPLE_PAIRS, seed=f"zeta-{param.label}-{n}")
                    for rho, sigma in pairs:
                        x, y = fock.p_rho(rho, n), fock.p_rho(sigma, n)
                        left = zeta(invariant_product(x, y, param.t), param.s)
                        right = invariant_product(zeta(x, param.s), zeta(y, param.s), 1)
                        if left != right:
                            return f"zeta({rho.label(algebra)} o_t {sigma.label(algebra)}) differs at n={n}"
                    return None
                cases.append(Case(f"{prefix}/zeta-homomorphism/n={n}", zeta_check))
    return cases


def dictionary_cases(algebra: FrobeniusAlgebra, max_n: int, max_k: int = 2, max_mode: int = 2) -> List[Case]:
    """The Hilbert-side axioms transported through Θ at t = −1, and Θ̃ against ∘_1"""
    param = DeformParam.minus_one()
    param.check(algebra)
    fock = OrbifoldFock(algebra)
    monomials = MonomialFock(algebra)
    classes = JucysClasses(algebra, -1)
    model = DeformedModel(fock, param)
    gamma, alpha = _pick(algebra)
    cases = []

    for label, v in _vectors(fock, max_n):
        cases.append(Case(f"dictionary/a-heisenberg-minus/{label}", lambda v=v: bracket_residual(model, Fraction(-1), max_mode, v)))

    cubic = normal_mode(algebra, 3, 0, algebra.unit_element()).scale(Fraction(-1, 6))
    a_model = DeformedModel(monomials, param)
    for n in range(max_n + 1):
        for monomial in monomials_of_norm(algebra, n):
            label = " ".join(f"p(-{r},{algebra.basis[c].label})" for c, r in monomial) or "vac"
            cases.append(Case(
                f"dictionary/d-cubic/n={n}/{label}",
                lambda monomial=monomial: _cubic_residual(classes, fock, a_model, cubic, monomial),
            ))

    cases.extend(_relabel("dictionary/G-commutator", comm_cases(classes, gamma, alpha, max_k, max_n)))

    for n in range(1, max_n + 1):
        basis = reduced_basis(algebra, n)

        def ring_axioms(n=n, basis=basis) -> Optional[str]:
            unit = {PartitionFunction(): Fraction(1)}
            for rho in basis:
                x = {rho: Fraction(1)}
                residual = first_difference(hilbert_product(fock, unit, x, n), x)
                if residual:
                    return f"unit * {rho.label(algebra)}: {residual}"
            for rho, sigma in sample_tuples(basis, 2, SAMPLE_PAIRS, seed=f"hilbert-pairs-{n}"):
                x, y = {rho: Fraction(1)}, {sigma: Fraction(1)}
                sign = (-1) ** (parity_of(algebra, rho) * parity_of(algebra, sigma))
                xy = hilbert_product(fock, x, y, n)
                yx = {k: sign * c for k, c in hilbert_product(fock, y, x, n).items()}
                residual = first_difference(xy, yx)
                if residual:
                    return f"{rho.label(algebra)} * {sigma.label(algebra)} not supercommutative: {residual}"
            for rho, sigma, tau in sample_tuples(basis, 3, SAMPLE_TRIPLES, seed=f"hilbert-triples-{n}"):
                x, y, z = {rho: Fraction(1)}, {sigma: Fraction(1)}, {tau: Fraction(1)}
                left = hilbert_product(fock, hilbert_product(fock, x, y, n), z, n)
                right = hilbert_product(fock, x, hilbert_product(fock, y, z, n), n)
                residual = first_difference(left, right)
                if residual:
                    return f"associativity on ({rho.label(algebra)}, {sigma.label(algebra)}, {tau.label(algebra)}): {residual}"
            return None

        def intertwiner(n=n, basis=basis) -> Optional[str]:
            for rho, sigma in sample_tuples(basis, 2, SAMPLE_PAIRS, seed=f"theta-tilde-{n}"):
                x, y = fock.p_rho(rho, n), fock.p_rho(sigma, n)
                left = theta_tilde(fock.coordinates(invariant_product(x, y, 1)))
                right = hilbert_product_gaussian(fock, theta_tilde({rho: Fraction(1)}), theta_tilde({sigma: Fraction(1)}), n)
                keys = sorted(set(left) | set(right))
                for key in keys:
                    if left.get(key, GaussianRational()) != right.get(key, GaussianRational()):
                        return f"{rho.label(algebra)} o {sigma.label(algebra)} at {key.label(algebra)}: {left.get(key)} != {right.get(key)}"
            return None

        cases.append(Case(f"dictionary/hilbert-ring/n={n}", ring_axioms))
        cases.append(Case(f"dictionary/theta-tilde/n={n}", intertwiner))

    def level_one() -> Optional[str]:
        for rho in reduced_basis(algebra, 1):
            factor = theta_tilde({rho: Fraction(1)}).get(rho)
            if factor != GaussianRational(1) or theta({rho: Fraction(1)}) != {rho: Fraction(1)}:
                return f"level-1 maps are not the identity on {rho.label(algebra)}"
        return None
    cases.append(Case("dictionary/level-one-identity", level_one))
    return cases


def chern_cases(algebra: FrobeniusAlgebra, L: AlgebraElement, hbar_order: int, z_order: int) -> List[Case]:
    classes = JucysClasses(algebra)
    cases = []
    for n in range(z_order + 1):
        cases.append(Case(f"chern/generating/n={n}", lambda n=n: chern_residual(classes, L, hbar_order, n)))
        cases.append(Case(f"chern/dual/n={n}", lambda n=n: dual_chern_residual(classes, L, n)))
    return cases
