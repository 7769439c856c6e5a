#!/usr/bin/env python3
"""Normally ordered Heisenberg fields, the W-algebra operators J^p_n and their zero modes"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Callable, Dict, List, Optional, Tuple

from frobenius import AlgebraElement, ConfigError, ConsistencyError, FrobeniusAlgebra, ShapeError, Tensor
from fock import (
    MonomialFock,
    MonomialVector,
    OrbifoldFock,
    PartitionFunction,
    RationalSpan,
    apply_word,
    first_difference,
    fock_dimension,
    monomials_of_norm,
    reduce_monomials,
    supercommutator,
)
from jucys import JucysClasses
from reports import Case
from symgroup import integer_partitions

logger = logging.getLogger(__name__)

ZEROMODE_THEOREM = "O^k(alpha) = (-1)^k/(k+1) J^{k+1}_0(alpha)"
WALG_THEOREM = "W-algebra brackets of J^p_m, general formula with Omega/12 and four exceptional cases"
BRACKET_THEOREM = "[O^p(alpha), p_n(beta)] = (-1)^{p+1} n J^p_n(alpha beta)"


@dataclass(frozen=True, order=True)
class GeneralizedPartition:
    """Nonzero integer parts in normal order: creation modes first, then annihilation, each increasing"""
    parts: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def s(self) -> int:
        return sum(i * i for i in self.parts)

    @property
    def multiplicities(self) -> Dict[int, int]:
        return dict(Counter(self.parts))

    @property
    def bang(self) -> int:
        out = 1
        for m in Counter(self.parts).values():
            out *= factorial(m)
        return out


@lru_cache(maxsize=None)
def _partitions_exact(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    if total < 0:
        return ()
    return tuple(p for p in integer_partitions(total) if len(p) == parts)


@lru_cache(maxsize=None)
def generalized_partitions(length: int, total: int, max_positive: int) -> Tuple[GeneralizedPartition, ...]:
    """All λ with ℓ(λ) = length, |λ| = total and positive parts summing to at most max_positive"""
    out = []
    for negatives in range(length + 1):
        positives = length - negatives
        for pos_sum in range(positives, max_positive + 1):
            if positives == 0 and pos_sum:
                break
            neg_sum = pos_sum - total
            if negatives == 0 and neg_sum != 0:
                continue
            for pos in _partitions_exact(pos_sum, positives):
                for neg in _partitions_exact(neg_sum, negatives):
                    out.append(GeneralizedPartition(tuple(sorted(-x for x in neg)) + tuple(sorted(pos))))
    return tuple(sorted(set(out)))


ModeScale = Callable[[int], Fraction]


@dataclass
class Family:
    """Σ_{ℓ(λ)=length, |λ|=total} weight(λ) p_λ(tensor)"""
    length: int
    total: int
    weight: Callable[[GeneralizedPartition], Fraction]
    tensor: Tensor
    coefficient: Fraction = Fraction(1)
    mode_scale: Optional[ModeScale] = None


@dataclass
class OperatorExpr:
    """A finite sum of normally ordered families plus a multiple of the identity"""
    algebra: FrobeniusAlgebra
    families: List[Family] = field(default_factory=list)
    identity: Fraction = Fraction(0)
    label: str = ""

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        return OperatorExpr(self.algebra, self.families + other.families, self.identity + other.identity, self.label)

    def scale(self, c: Any) -> "OperatorExpr":
        c = Fraction(c)
        families = [replace(f, coefficient=f.coefficient * c) for f in self.families] if c else []
        return OperatorExpr(self.algebra, families, self.identity * c, self.label)

    def with_mode_scale(self, mode_scale: ModeScale) -> "OperatorExpr":
        return OperatorExpr(self.algebra, [replace(f, mode_scale=mode_scale) for f in self.families], self.identity, self.label)

    def is_zero(self) -> bool:
        return not self.families and not self.identity

    def apply(self, model: Any, v: Any) -> Any:
        out = model.scale(v, self.identity) if self.identity else model.zero()
        for level, part in model.split_levels(v).items():
            for fam in self.families:
                for lam in generalized_partitions(fam.length, fam.total, level):
                    w = fam.weight(lam) * fam.coefficient
                    if not w:
                        continue
                    if fam.mode_scale is not None:
                        for mode in lam.parts:
                            w *= fam.mode_scale(mode)
                    for key, c in fam.tensor.items():
                        word = [(mode, {idx: Fraction(1)}) for mode, idx in zip(lam.parts, key)]
                        image = apply_word(model, word, part)
                        if not model.is_zero(image):
                            out = model.add(out, model.scale(image, w * c))
        return out


def zero_expr(algebra: FrobeniusAlgebra) -> OperatorExpr:
    return OperatorExpr(algebra)


def identity_expr(algebra: FrobeniusAlgebra, c: Any) -> OperatorExpr:
    return OperatorExpr(algebra, identity=Fraction(c))


def _euler_times(algebra: FrobeniusAlgebra, alpha: AlgebraElement) -> AlgebraElement:
    return algebra.multiply(algebra.euler_class(), alpha)


def normal_mode(algebra: FrobeniusAlgebra, p: int, m: int, alpha: AlgebraElement) -> OperatorExpr:
    """:p^p:_m(τ_*α) = Σ_{ℓ(λ)=p, |λ|=m} (p!/λ^!) p_λ(τ_*α); :p⁰: = 0"""
    if p <= 0:
        return zero_expr(algebra)
    tensor = algebra.tau_push_terms(p, alpha)
    if not tensor:
        return zero_expr(algebra)
    weight = lambda lam, p=p: Fraction(factorial(p), lam.bang)
    return OperatorExpr(algebra, [Family(p, m, weight, tensor)], label=f":p^{p}:_{m}")


def derivative_mode(algebra: FrobeniusAlgebra, p: int, m: int, alpha: AlgebraElement) -> OperatorExpr:
    """:(∂²p) p^{p-2}:_m(τ_*α), a sum over ℓ(λ) = p − 1"""
    if p < 2:
        return zero_expr(algebra)
    tensor = algebra.tau_push_terms(p - 1, alpha)
    if not tensor:
        return zero_expr(algebra)

    def weight(lam: GeneralizedPartition, p=p) -> Fraction:
        total = sum(mult * (j + 1) * (j + 2) for j, mult in lam.multiplicities.items())
        return Fraction(factorial(p - 2) * total, lam.bang)
    return OperatorExpr(algebra, [Family(p - 1, m, weight, tensor)], label=f":(d2 p)p^{p - 2}:_{m}")


def J_op(algebra: FrobeniusAlgebra, p: int, n: int, alpha: AlgebraElement) -> OperatorExpr:
    """J^p_n(α) from generalized partitions; J⁰_n = p_n and J^p = 0 for p < 0"""
    if p < 0:
        return zero_expr(algebra)
    families = []
    main = algebra.tau_push_terms(p + 1, alpha)
    if main:
        families.append(Family(p + 1, n, lambda lam, p=p: Fraction(factorial(p), lam.bang), main))
    if p - 1 >= 1:
        corr = algebra.tau_push_terms(p - 1, _euler_times(algebra, alpha))
        if corr:
            families.append(Family(
                p - 1, n,
                lambda lam, p=p, n=n: Fraction(factorial(p) * (lam.s + n * n - 2), 24 * lam.bang),
                corr,
            ))
    return OperatorExpr(algebra, families, label=f"J^{p}_{n}")


def J_vertex(algebra: FrobeniusAlgebra, p: int, m: int, alpha: AlgebraElement) -> OperatorExpr:
    """J^p_m(α) rewritten through normally ordered fields"""
    if p < 0:
        return zero_expr(algebra)
    e_alpha = _euler_times(algebra, alpha)
    out = normal_mode(algebra, p + 1, m, alpha).scale(Fraction(1, p + 1))
    out = out + normal_mode(algebra, p - 1, m, e_alpha).scale(Fraction(p * (m * m - 3 * m - 2 * p), 24))
    out = out + derivative_mode(algebra, p, m, e_alpha).scale(Fraction(p * (p - 1), 24))
    out.label = f"J^{p}_{m} (fields)"
    return out


def Omega(m: int, n: int, p: int, q: int) -> int:
    return (
        m * p**3 * n**2 + 3 * m * p**2 * n**2 * q - p**2 * n * q + p**2 * q * n**3 - 3 * m * p**2 * n**2 + p * n * q
        + 3 * m**2 * p * n * q - 3 * m * p * n**2 * q - m**3 * q**2 * p - p * q * n**3 - m * p * q + m**3 * p * q
        + m * p * q**2 + 2 * m * p * n**2 - 3 * m**2 * p * n * q**2 - 2 * m**2 * n * q + 3 * m**2 * n * q**2 - m**2 * n * q**3
    )


EXCEPTIONAL = {(0, 0), (1, 0), (2, 0), (1, 1)}


def w_bracket(algebra: FrobeniusAlgebra, p: int, m: int, alpha: AlgebraElement, q: int, n: int, beta: AlgebraElement) -> OperatorExpr:
    """The predicted value of [J^p_m(α), J^q_n(β)]"""
    if algebra.d == 0:
        raise ConfigError("the W-algebra brackets need d > 0 (e·e = 0)")
    parity = (algebra.element_parity(alpha) or 0) * (algebra.element_parity(beta) or 0)
    if (q, p) in EXCEPTIONAL and (p, q) not in EXCEPTIONAL:
        return w_bracket(algebra, q, n, beta, p, m, alpha).scale(-((-1) ** parity))
    ab = algebra.multiply(alpha, beta)
    e_ab = _euler_times(algebra, ab)
    delta = 1 if m == -n else 0
    if (p, q) == (0, 0):
        return identity_expr(algebra, m * delta * algebra.integrate(ab))
    if (p, q) == (1, 0):
        return J_op(algebra, 0, m + n, ab).scale(-n)
    if (p, q) == (2, 0):
        return J_op(algebra, 1, m + n, ab).scale(-2 * n) + identity_expr(algebra, Fraction(m**3 - m, 6) * delta * algebra.integrate(e_ab))
    if (p, q) == (1, 1):
        return J_op(algebra, 1, m + n, ab).scale(m - n) + identity_expr(algebra, Fraction(m**3 - m, 12) * delta * algebra.integrate(e_ab))
    out = J_op(algebra, p + q - 1, m + n, ab).scale(q * m - p * n)
    return out + J_op(algebra, p + q - 3, m + n, e_ab).scale(Fraction(Omega(m, n, p, q), 12))


def bracket_on(model: Any, a: OperatorExpr, b: OperatorExpr, sign: int, v: Any) -> Any:
    """[A, B]v = A(Bv) − sign·B(Av)"""
    return model.add(a.apply(model, b.apply(model, v)), model.scale(b.apply(model, a.apply(model, v)), -sign))


def _label(algebra: FrobeniusAlgebra, monomial) -> str:
    return " ".join(f"p(-{r},{algebra.basis[c].label})" for c, r in monomial) or "vac"


# ------------------------------------------------------------------ suites


def zeromode_cases(classes: JucysClasses, max_k: int, max_n: int) -> List[Case]:
    """𝔒^k(b_c) as ∘-multiplication against ((−1)^k/(k+1)) J^{k+1}_0(b_c) on monomials"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    monomials = MonomialFock(algebra)
    cases = []
    for k in range(max_k + 1):
        for c in range(algebra.dim):
            alpha = {c: Fraction(1)}
            expr = J_op(algebra, k + 1, 0, alpha).scale(Fraction((-1) ** k, k + 1))
            for n in range(max_n + 1):
                def check(k=k, alpha=alpha, expr=expr, n=n) -> Optional[str]:
                    for monomial in monomials_of_norm(algebra, n):
                        lhs = fock.monomial_coordinates(classes.apply_O(k, alpha, fock.monomial_element(monomial)), monomials)
                        rhs = expr.apply(monomials, {monomial: Fraction(1)})
                        residual = first_difference(lhs, rhs)
                        if residual:
                            return f"{_label(algebra, monomial)}: {residual}"
                    return None
                cases.append(Case(f"zeromode/k={k}/{algebra.basis[c].label}/n={n}", check))
    return cases


def eq41_cases(algebra: FrobeniusAlgebra, max_p: int, max_mode: int, max_n: int) -> List[Case]:
    """J^p_m agrees with its normally ordered field form"""
    monomials = MonomialFock(algebra)
    cases = []
    for p in range(max_p + 1):
        for m in range(-max_mode, max_mode + 1):
            for c in range(algebra.dim):
                alpha = {c: Fraction(1)}

                def check(p=p, m=m, alpha=alpha) -> Optional[str]:
                    left, right = J_op(algebra, p, m, alpha), J_vertex(algebra, p, m, alpha)
                    for n in range(max_n + 1):
                        for monomial in monomials_of_norm(algebra, n):
                            v = {monomial: Fraction(1)}
                            residual = first_difference(left.apply(monomials, v), right.apply(monomials, v))
                            if residual:
                                return f"{_label(algebra, monomial)}: {residual}"
                    return None
                cases.append(Case(f"eq41/p={p}/m={m}/{algebra.basis[c].label}", check))
    return cases


def walgebra_cases(algebra: FrobeniusAlgebra, max_pq: int, max_mode: int, max_n: int, classes: Optional[List[int]] = None) -> List[Case]:
    """Both sides of the W bracket table on every monomial up to max_n"""
    if algebra.d == 0:
        raise ConfigError("walg is only defined for even dimension d > 0, where e·e = 0")
    monomials = MonomialFock(algebra)
    labels = classes if classes is not None else list(range(algebra.dim))
    vectors = [m for n in range(max_n + 1) for m in monomials_of_norm(algebra, n)]
    cases = []
    for p in range(max_pq + 1):
        for q in range(max_pq + 1 - p):
            for m in range(-max_mode, max_mode + 1):
                for n in range(-max_mode, max_mode + 1):
                    for a in labels:
                        for b in labels:
                            alpha, beta = {a: Fraction(1)}, {b: Fraction(1)}
                            sign = (-1) ** (algebra.parity(a) * algebra.parity(b))

                            def check(p=p, q=q, m=m, n=n, alpha=alpha, beta=beta, sign=sign) -> Optional[str]:
                                left_op, right_op = J_op(algebra, p, m, alpha), J_op(algebra, q, n, beta)
                                expected = w_bracket(algebra, p, m, alpha, q, n, beta)
                                for monomial in vectors:
                                    v = {monomial: Fraction(1)}
                                    residual = first_difference(bracket_on(monomials, left_op, right_op, sign, v), expected.apply(monomials, v))
                                    if residual:
                                        return f"{_label(algebra, monomial)}: {residual}"
                                return None
                            ident = f"walg/p={p},q={q}/m={m},n={n}/{algebra.basis[a].label},{algebra.basis[b].label}"
                            cases.append(Case(ident, check))
    return cases


def omega_antisymmetry(quadruples: List[Tuple[int, int, int, int]]) -> Optional[str]:
    for m, n, p, q in quadruples:
        if Omega(m, n, p, q) != -Omega(n, m, q, p):
            return f"Omega({m},{n},{p},{q}) = {Omega(m, n, p, q)} but swapped gives {Omega(n, m, q, p)}"
    return None


def jacobi_residual(algebra: FrobeniusAlgebra, triple: List[Tuple[int, int, int]], max_n: int) -> Optional[str]:
    """[A,[B,C]] = [[A,B],C] + (−1)^{|A||B|}[B,[A,C]] for A, B, C = J^p_m(b_c) on monomials of norm ≤ max_n"""
    monomials = MonomialFock(algebra)
    ops = [J_op(algebra, p, m, {c: Fraction(1)}) for p, m, c in triple]
    a, b, c = (lambda v, op=op: op.apply(monomials, v) for op in ops)
    pa, pb, pc = (algebra.parity(idx) for _, _, idx in triple)

    def bc(v):
        return supercommutator(monomials, b, c, (-1) ** (pb * pc), v)

    def ab(v):
        return supercommutator(monomials, a, b, (-1) ** (pa * pb), v)

    def ac(v):
        return supercommutator(monomials, a, c, (-1) ** (pa * pc), v)

    for n in range(max_n + 1):
        for monomial in monomials_of_norm(algebra, n):
            v = {monomial: Fraction(1)}
            left = supercommutator(monomials, a, bc, (-1) ** (pa * (pb + pc)), v)
            first = supercommutator(monomials, ab, c, (-1) ** ((pa + pb) * pc), v)
            second = supercommutator(monomials, b, ac, (-1) ** (pb * (pa + pc)), v)
            right = monomials.add(first, monomials.scale(second, (-1) ** (pa * pb)))
            residual = first_difference(left, right)
            if residual:
                return f"{_label(algebra, monomial)}: {residual}"
    return None


def jacobi_cases(algebra: FrobeniusAlgebra, max_p: int, max_mode: int, max_n: int = 3, samples: int = 10, seed: int = 0) -> List[Case]:
    """Super Jacobi identity on seeded random triples J^p_m(b_c)"""
    rng = random.Random(seed)
    cases = []
    for i in range(samples):
        triple = [(rng.randint(0, max_p), rng.randint(-max_mode, max_mode), rng.randrange(algebra.dim)) for _ in range(3)]
        label = ";".join(f"J^{p}_{m}({algebra.basis[c].label})" for p, m, c in triple)
        cases.append(Case(f"walg/jacobi/{i}/{label}", lambda triple=triple: jacobi_residual(algebra, triple, max_n)))
    return cases


def J_p_bracket_cases(classes: JucysClasses, max_p: int, max_mode: int, max_n: int) -> List[Case]:
    """[𝔒^p(α), p_n(β)] on the orbifold side and [J^{p+1}_0(α), p_n(β)] on monomials"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    monomials = MonomialFock(algebra)
    cases = []
    for p in range(max_p + 1):
        for n in range(-max_mode, max_mode + 1):
            if n == 0:
                continue
            for a in range(algebra.dim):
                for b in range(algebra.dim):
                    alpha, beta = {a: Fraction(1)}, {b: Fraction(1)}
                    sign = (-1) ** (algebra.parity(a) * algebra.parity(b))
                    ab = algebra.multiply(alpha, beta)
                    expected = J_op(algebra, p, n, ab)
                    p_n = J_op(algebra, 0, n, beta)
                    zero_mode = J_op(algebra, p + 1, 0, alpha)

                    def check(p=p, n=n, alpha=alpha, beta=beta, sign=sign, expected=expected, p_n=p_n, zero_mode=zero_mode) -> Optional[str]:
                        for level in range(max_n + 1):
                            if level - n > max_n:
                                continue
                            for monomial in monomials_of_norm(algebra, level):
                                x = fock.monomial_element(monomial)
                                v = {monomial: Fraction(1)}
                                lhs = _orbifold_bracket(classes, fock, p, alpha, n, beta, sign, x)
                                lhs_coords = fock.monomial_coordinates(lhs, monomials) if lhs is not None else {}
                                rhs = expected.apply(monomials, v)
                                residual = first_difference(lhs_coords, monomials.scale(rhs, (-1) ** (p + 1) * n))
                                if residual:
                                    return f"O-bracket on {_label(algebra, monomial)}: {residual}"
                                direct = bracket_on(monomials, zero_mode, p_n, sign, v)
                                residual = first_difference(direct, monomials.scale(rhs, -n * (p + 1)))
                                if residual:
                                    return f"J-bracket on {_label(algebra, monomial)}: {residual}"
                        return None
                    ident = f"bracket/p={p}/n={n}/{algebra.basis[a].label},{algebra.basis[b].label}"
                    cases.append(Case(ident, check))
    return cases


def _orbifold_bracket(classes: JucysClasses, fock: OrbifoldFock, p: int, alpha, n: int, beta, sign: int, x):
    """[𝔒^p(α), p_n(β)]x on a single level, None when p_n(β)x leaves the Fock space"""
    if n > x.n:
        return None

    def p_n(y):
        return fock.create_element(-n, beta, y) if n < 0 else fock.annihilate_element(n, beta, y)
    return classes.apply_O(p, alpha, p_n(x)) - p_n(classes.apply_O(p, alpha, x)).scale(sign)


# ------------------------------------------------------------------ vertex-algebra ring


class VertexRing:
    """The ring on level n generated by zero modes of J^{k+1}_0 acting on the unit (1/n!) p_{-1}(1)^n|0⟩"""

    def __init__(self, algebra: FrobeniusAlgebra, n: int):
        self.algebra = algebra
        self.n = n
        self.model = MonomialFock(algebra)
        self.generators = [
            ((k, c), J_op(algebra, k + 1, 0, {c: Fraction(1)}).scale(Fraction((-1) ** k, k + 1)))
            for k in range(max(n, 1))
            for c in range(algebra.dim)
        ]
        self.span = RationalSpan()
        self.words: List[Tuple[int, ...]] = []
        self._close()

    def _close(self) -> None:
        target = fock_dimension(self.algebra, self.n)
        frontier = [((), self.model.unit(self.n))]
        self._insert((), frontier[0][1])
        while frontier and self.span.rank < target:
            nxt = []
            for word, vec in frontier:
                for g, (_, op) in enumerate(self.generators):
                    if word and g < word[-1]:
                        continue
                    image = op.apply(self.model, vec)
                    if self._insert(word + (g,), image):
                        nxt.append((word + (g,), image))
                    if self.span.rank >= target:
                        break
                if self.span.rank >= target:
                    break
            frontier = nxt
        if self.span.rank < target:
            raise ConsistencyError(f"zero modes reach rank {self.span.rank} of {target} at n = {self.n}")
        logger.debug(f"vertex ring at n={self.n}: {len(self.words)} words for rank {target}")

    def _insert(self, word: Tuple[int, ...], vec: MonomialVector) -> bool:
        self.words.append(word)
        return self.span.insert(vec)

    def apply_word(self, word: Tuple[int, ...], vec: MonomialVector) -> MonomialVector:
        for g in reversed(word):
            vec = self.generators[g][1].apply(self.model, vec)
        return vec

    def multiply(self, x: MonomialVector, y: MonomialVector) -> MonomialVector:
        combo = self.span.express(x)
        if combo is None:
            raise ConsistencyError("left factor is outside the span of zero-mode words")
        out: MonomialVector = {}
        for i, c in combo.items():
            out = self.model.add(out, self.model.scale(self.apply_word(self.words[i], y), c))
        return out


def vertex_ring_product(algebra: FrobeniusAlgebra, a: Dict[PartitionFunction, Fraction], b: Dict[PartitionFunction, Fraction], n: int,
                        ring: Optional[VertexRing] = None) -> Dict[PartitionFunction, Fraction]:
    """Product of two reduced-coordinate classes in the zero-mode ring of level n"""
    ring = ring or VertexRing(algebra, n)
    model = ring.model

    def vector(coords: Dict[PartitionFunction, Fraction]) -> MonomialVector:
        out: MonomialVector = {}
        for rho, c in coords.items():
            out = model.add(out, model.scale(model.of(rho, n), c))
        return out
    return reduce_monomials(algebra, ring.multiply(vector(a), vector(b)))
