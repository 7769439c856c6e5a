#!/usr/bin/env python3
"""Jucys–Murphy classes in H*(X^n, S_n): ξ_i(γ), η_n, ε_n, O^k(α,n), P_i(γ,n) and the Goulden operator"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Dict, List, Optional, Tuple, Union

from frobenius import AlgebraElement, FrobeniusAlgebra, ShapeError
from fock import OrbifoldFock, MonomialFock, element_residual, first_difference, monomials_of_norm
from orbiring import OrbElement, identity_tensor, invariant_product, is_invariant, product
from symgroup import (
    all_permutations,
    centralizer_order,
    epsilon_generating_residual,
    integer_partitions,
    jucys_identity_holds,
    length,
    orbits,
    transposition,
)
from reports import Case

logger = logging.getLogger(__name__)

GOULDEN_THEOREM = "generalized Goulden operator b = -1/6 :p^3:_0(tau_* 1)"
COMM_THEOREM = "[O_hbar(gamma), p_-1(alpha)] = exp(hbar ad b) p_-1(gamma alpha)"
ETA_THEOREM = "eta(gamma) p_-1(alpha) = p_-1(gamma alpha) eta(gamma) - p'_-1(alpha) eta(gamma), epsilon with +"
JUCYS_THEOREM = "Jucys identity, Frobenius generating identity, eta_n = prod xi_i(gamma)"


@dataclass
class HbarSeries:
    """Σ_k ħ^k c_k truncated after ħ^order"""
    order: int
    terms: Dict[int, Any] = field(default_factory=dict)

    def coefficient(self, k: int, default: Any = None) -> Any:
        return self.terms.get(k, default)

    def evaluate(self, hbar: Any) -> Any:
        hbar = Fraction(hbar)
        total = None
        for k in sorted(self.terms):
            term = self.terms[k].scale(hbar ** k)
            total = term if total is None else total + term
        return total


def _key(alpha: AlgebraElement) -> Tuple[Tuple[int, Fraction], ...]:
    return tuple(sorted(alpha.items()))


class JucysClasses:
    """Memoized classes over one algebra for one value of t in ∘_t"""

    def __init__(self, algebra: FrobeniusAlgebra, t: Any = 1):
        self.algebra = algebra
        self.t = Fraction(t)
        self._xi: Dict[Tuple[int, int], OrbElement] = {}
        self._xi_power: Dict[Tuple[int, int, int], OrbElement] = {}
        self._O: Dict[Tuple[int, tuple, int], OrbElement] = {}
        self._eta: Dict[Tuple[tuple, int], OrbElement] = {}

    # -- building blocks

    def xi(self, i: int, n: int) -> OrbElement:
        """ξ_{i;n} = Σ_{j<i} (j,i), unit payload on every transposition"""
        if not 1 <= i <= n:
            raise ShapeError(f"Jucys–Murphy index {i} out of range 1..{n}")
        cached = self._xi.get((i, n))
        if cached is None:
            payload = {(self.algebra.unit,) * (n - 1): Fraction(1)}
            cached = OrbElement(self.algebra, n, {transposition(n, j, i - 1): dict(payload) for j in range(i - 1)})
            self._xi[(i, n)] = cached
        return cached

    def gamma_at(self, gamma: AlgebraElement, i: int, n: int) -> OrbElement:
        """γ^{(i)} = 1 ⊗ ... ⊗ γ ⊗ ... ⊗ 1 on the identity key"""
        if not 1 <= i <= n:
            raise ShapeError(f"slot {i} out of range 1..{n}")
        return identity_tensor(self.algebra, n, {i - 1: gamma})

    def xi_gamma(self, i: int, gamma: AlgebraElement, n: int) -> OrbElement:
        return self.xi(i, n) + self.gamma_at(gamma, i, n)

    def xi_power(self, i: int, k: int, n: int) -> OrbElement:
        """(−ξ_i)^{∘k}"""
        key = (i, k, n)
        cached = self._xi_power.get(key)
        if cached is None:
            if k == 0:
                cached = OrbElement.unit(self.algebra, n)
            else:
                cached = product(self.xi_power(i, k - 1, n), -self.xi(i, n), self.t)
            self._xi_power[key] = cached
        return cached

    # -- classes

    def O(self, k: int, alpha: AlgebraElement, n: int) -> OrbElement:
        """O^k(α,n) = Σ_i (−ξ_i)^{∘k} ∘ α^{(i)}"""
        if k < 0:
            raise ShapeError("k must be non-negative")
        key = (k, _key(alpha), n)
        cached = self._O.get(key)
        if cached is None:
            cached = OrbElement.zero(self.algebra, n)
            for i in range(1, n + 1):
                cached = cached + product(self.xi_power(i, k, n), self.gamma_at(alpha, i, n), self.t)
            self._O[key] = cached
            logger.debug(f"O^{k}({self.algebra.format_element(alpha)}, {n}) has {len(cached.components)} components")
        return cached

    def O_hbar(self, alpha: AlgebraElement, n: int, order: Optional[int] = None) -> HbarSeries:
        if order is None:
            if self.algebra.d == 0:
                raise ShapeError("an explicit ħ order is required for d = 0")
            order = 2 * n
        return HbarSeries(order, {k: self.O(k, alpha, n).scale(Fraction(1, factorial(k))) for k in range(order + 1)})

    def eta(self, gamma: AlgebraElement, n: int) -> OrbElement:
        """η_n(γ): γ^{⊗ℓ(σ)} on every σ ∈ S_n"""
        key = (_key(gamma), n)
        cached = self._eta.get(key)
        if cached is None:
            cached = _orbitwise(self.algebra, gamma, n, alternating=False)
            self._eta[key] = cached
        return cached

    def epsilon_class(self, gamma: AlgebraElement, n: int) -> OrbElement:
        """ε_n(γ): (−1)^{d(σ)} γ^{⊗ℓ(σ)} on every σ"""
        return _orbitwise(self.algebra, gamma, n, alternating=True)

    def eta_product(self, gamma: AlgebraElement, n: int) -> OrbElement:
        """ξ_1(γ) ∘ ξ_2(γ) ∘ ... ∘ ξ_n(γ)"""
        value = OrbElement.unit(self.algebra, n)
        for i in range(1, n + 1):
            value = product(value, self.xi_gamma(i, gamma, n), self.t)
        return value

    def epsilon(self, gamma: Union[AlgebraElement, HbarSeries], n: int, order: Optional[int] = None) -> HbarSeries:
        """ε_n(γ,ħ) = ∏_i (γ^{(i)} − ħ ξ_i); γ may itself be an ħ-series of algebra elements"""
        gamma_series = gamma if isinstance(gamma, HbarSeries) else HbarSeries(0, {0: gamma})
        if order is None:
            order = n + gamma_series.order * n
        partial: Dict[int, OrbElement] = {0: OrbElement.unit(self.algebra, n)}
        for i in range(1, n + 1):
            nxt: Dict[int, OrbElement] = {}
            for k, value in partial.items():
                for j, g in gamma_series.terms.items():
                    if k + j <= order:
                        term = product(value, self.gamma_at(g, i, n), self.t)
                        nxt[k + j] = nxt[k + j] + term if k + j in nxt else term
                if k + 1 <= order:
                    term = product(value, self.xi(i, n), self.t).scale(-1)
                    nxt[k + 1] = nxt[k + 1] + term if k + 1 in nxt else term
            partial = {k: v for k, v in nxt.items() if not v.is_zero()}
        return HbarSeries(order, partial)

    def P(self, i: int, gamma: AlgebraElement, n: int, fock: Optional[OrbifoldFock] = None) -> OrbElement:
        """P_i(γ,n) = p_{-i-1}(γ) p_{-1}(1)^{n-i-1}|0⟩ / (n-i-1)!"""
        if not 0 <= i < n:
            raise ShapeError(f"P_i needs 0 <= i < n, got i={i}, n={n}")
        fock = fock or OrbifoldFock(self.algebra)
        return fock.create_element(i + 1, gamma, fock.unit_class(n - i - 1))

    # -- operators on a single level

    def apply_O(self, k: int, alpha: AlgebraElement, x: OrbElement) -> OrbElement:
        """𝔒^k(α): ∘-multiplication by O^k(α, n) on level n"""
        if x.n == 0:
            return OrbElement.zero(self.algebra, 0)
        return invariant_product(self.O(k, alpha, x.n), x, self.t)

    def goulden(self, x: OrbElement) -> OrbElement:
        return self.apply_O(1, self.algebra.unit_element(), x)

    def apply_eta(self, gamma: AlgebraElement, x: OrbElement, alternating: bool = False) -> OrbElement:
        cls = self.epsilon_class(gamma, x.n) if alternating else self.eta(gamma, x.n)
        return invariant_product(cls, x, self.t)


def _orbitwise(algebra: FrobeniusAlgebra, gamma: AlgebraElement, n: int, alternating: bool) -> OrbElement:
    out = OrbElement(algebra, n)
    for sigma in all_permutations(n):
        slots = len(orbits(sigma))
        payload: Dict[Tuple[int, ...], Fraction] = {(): Fraction(1)}
        for _ in range(slots):
            payload = {key + (c,): v * a for key, v in payload.items() for c, a in gamma.items()}
        sign = -1 if alternating and length(sigma) % 2 else 1
        out.add_component(sigma, payload, Fraction(sign))
    return out


def adjoint_power(k: int, goulden, op, x: OrbElement) -> OrbElement:
    """(ad 𝔟)^k 𝔣 applied to x, as Σ_j (−1)^j C(k,j) 𝔟^{k−j} 𝔣 𝔟^j x"""
    total = None
    inner = x
    for j in range(k + 1):
        y = op(inner)
        for _ in range(k - j):
            y = goulden(y)
        term = y.scale((-1) ** j * comb(k, j))
        total = term if total is None else total + term
        inner = goulden(inner)
    return total


def level_basis(fock: OrbifoldFock, n: int) -> List[Tuple[str, OrbElement]]:
    """The canonical monomial vectors of level n with printable ids"""
    algebra = fock.algebra
    out = []
    for monomial in monomials_of_norm(algebra, n):
        label = " ".join(f"p(-{r},{algebra.basis[c].label})" for c, r in monomial) or "vac"
        out.append((label, fock.monomial_element(monomial)))
    return out


# ------------------------------------------------------------------ suites


def comm_cases(classes: JucysClasses, gamma: AlgebraElement, alpha: AlgebraElement, max_k: int, max_n: int) -> List[Case]:
    """[𝔒^k(γ), p_{-1}(α)] = (ad 𝔟)^k p_{-1}(γα) on every basis vector below level max_n"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    sign = (-1) ** ((algebra.element_parity(gamma) or 0) * (algebra.element_parity(alpha) or 0))
    gamma_alpha = algebra.multiply(gamma, alpha)
    cases = []
    for n in range(max_n):
        for label, v in level_basis(fock, n):
            for k in range(max_k + 1):
                def check(k=k, v=v) -> Optional[str]:
                    lhs = classes.apply_O(k, gamma, fock.create_element(1, alpha, v))
                    lhs = lhs - fock.create_element(1, alpha, classes.apply_O(k, gamma, v)).scale(sign)
                    rhs = adjoint_power(k, classes.goulden, lambda y: fock.create_element(1, gamma_alpha, y), v)
                    return element_residual(fock, lhs, rhs)
                cases.append(Case(f"comm/k={k}/n={n + 1}/{label}", check))
    return cases


def cubic_cases(classes: JucysClasses, max_n: int) -> List[Case]:
    """𝔟 v against −(1/6):p³:₀(τ_*1) v evaluated on monomials"""
    from vertexw import normal_mode

    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    monomials = MonomialFock(algebra)
    cubic = normal_mode(algebra, 3, 0, algebra.unit_element()).scale(Fraction(-1, 6))
    cases = []
    for n in range(max_n + 1):
        for monomial in monomials_of_norm(algebra, n):
            label = " ".join(f"p(-{r},{algebra.basis[c].label})" for c, r in monomial) or "vac"

            def check(monomial=monomial) -> Optional[str]:
                lhs = fock.monomial_coordinates(classes.goulden(fock.monomial_element(monomial)), monomials)
                rhs = cubic.apply(monomials, {monomial: Fraction(1)})
                return first_difference(lhs, rhs)
            cases.append(Case(f"goulden/n={n}/{label}", check))
    return cases


def eta_cases(classes: JucysClasses, gamma: AlgebraElement, alpha: AlgebraElement, max_n: int) -> List[Case]:
    """η(γ)p_{-1}(α) = p_{-1}(γα)η(γ) ∓ p'_{-1}(α)η(γ), with − for η and + for ε"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    gamma_alpha = algebra.multiply(gamma, alpha)
    cases = []
    for alternating, name, sign in ((False, "eta", -1), (True, "epsilon", 1)):
        for n in range(max_n):
            for label, v in level_basis(fock, n):
                def check(v=v, alternating=alternating, sign=sign) -> Optional[str]:
                    lhs = classes.apply_eta(gamma, fock.create_element(1, alpha, v), alternating)
                    w = classes.apply_eta(gamma, v, alternating)
                    derived = classes.goulden(fock.create_element(1, alpha, w)) - fock.create_element(1, alpha, classes.goulden(w))
                    rhs = fock.create_element(1, gamma_alpha, w) + derived.scale(sign)
                    return element_residual(fock, lhs, rhs)
                cases.append(Case(f"{name}/n={n + 1}/{label}", check))
    return cases


def _exp_creation(fock: OrbifoldFock, gamma: AlgebraElement, n: int, hbar_sign: bool) -> Dict[int, OrbElement]:
    """Level-n part of exp(Σ_r c_r p_{-r}(γ) z^r/r)|0⟩ split by ħ-power d(λ); c_r = (−ħ)^{r−1} or 1"""
    out: Dict[int, OrbElement] = {}
    for shape in integer_partitions(n):
        v = OrbElement.unit(fock.algebra, 0)
        for r in shape:
            v = fock.create_element(r, gamma, v)
        k = n - len(shape)
        weight = Fraction(1, centralizer_order(shape))
        if hbar_sign and k % 2:
            weight = -weight
        term = v.scale(weight)
        out[k] = out[k] + term if k in out else term
    return out


def jucys_cases(classes: JucysClasses, gamma: AlgebraElement, max_n: int, max_n_group: int) -> List[Case]:
    """Group-algebra identities, η_n = ∏ξ_i(γ), and both generating identities on the Fock space"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    cases = []
    for n in range(1, max_n_group + 1):
        cases.append(Case(f"jucys/eq-alternating/n={n}", lambda n=n: jucys_identity_holds(n)))

    def frobenius_generating() -> Optional[str]:
        residual = epsilon_generating_residual(max_n_group)
        if residual:
            n = min(residual)
            return f"z^{n}: {residual[n]}"
        return None
    cases.append(Case(f"jucys/frobenius-generating/z<={max_n_group}", frobenius_generating))

    for n in range(1, max_n + 1):
        def eta_product(n=n) -> Optional[str]:
            return element_residual(fock, classes.eta_product(gamma, n), classes.eta(gamma, n))

        def eta_generating(n=n) -> Optional[str]:
            series = _exp_creation(fock, gamma, n, hbar_sign=False)
            total = OrbElement.zero(algebra, n)
            for v in series.values():
                total = total + v
            return element_residual(fock, total, classes.eta(gamma, n))

        def epsilon_generating(n=n) -> Optional[str]:
            expected = _exp_creation(fock, gamma, n, hbar_sign=True)
            series = classes.epsilon(gamma, n)
            for k in range(n + 1):
                left = series.coefficient(k, OrbElement.zero(algebra, n))
                right = expected.get(k, OrbElement.zero(algebra, n))
                residual = element_residual(fock, left, right)
                if residual:
                    return f"hbar^{k}: {residual}"
            return None

        def invariance(n=n) -> Optional[str]:
            for k in range(min(n, 3) + 1):
                for c in range(algebra.dim):
                    cls = classes.O(k, {c: Fraction(1)}, n)
                    if not is_invariant(cls):
                        return f"O^{k}({algebra.basis[c].label},{n}) is not invariant"
                    expected = algebra.d * k + algebra.degree(c)
                    if not cls.is_zero() and cls.degree() != expected:
                        return f"O^{k}({algebra.basis[c].label},{n}) has degrees {sorted(cls.degrees())}, expected {expected}"
            return None

        cases.append(Case(f"jucys/eta-product/n={n}", eta_product))
        cases.append(Case(f"jucys/eta-generating/n={n}", eta_generating))
        cases.append(Case(f"jucys/epsilon-generating/n={n}", epsilon_generating))
        cases.append(Case(f"jucys/O-invariance/n={n}", invariance))
    return cases


def O_commute_cases(classes: JucysClasses, max_k: int, max_n: int) -> List[Case]:
    """𝔒^a(α) and 𝔒^b(β) commute for even α, β"""
    algebra = classes.algebra
    even = [c for c in range(algebra.dim) if not algebra.parity(c)]
    cases = []
    for n in range(1, max_n + 1):
        def check(n=n) -> Optional[str]:
            for a in range(max_k + 1):
                for b in range(max_k + 1):
                    for c1 in even:
                        for c2 in even:
                            x = classes.O(a, {c1: Fraction(1)}, n)
                            y = classes.O(b, {c2: Fraction(1)}, n)
                            if invariant_product(x, y, classes.t) != invariant_product(y, x, classes.t):
                                return f"O^{a}({algebra.basis[c1].label}) and O^{b}({algebra.basis[c2].label}) do not commute at n={n}"
            return None
        cases.append(Case(f"jucys/O-commute/n={n}", check))
    return cases
