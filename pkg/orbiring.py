#!/usr/bin/env python3
"""The ring H*(X^n, S_n), its invariant part, and the t-family of orbifold products"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Any, Dict, Iterable, List, Optional, Tuple

from frobenius import (
    AlgebraElement,
    ConsistencyError,
    FrobeniusAlgebra,
    ShapeError,
    Tensor,
    add_into,
    expand_slots,
    format_rational,
    parse_rational,
    permutation_sign,
)
from symgroup import (
    Permutation,
    all_permutations,
    centralizer,
    compose,
    conjugacy_data,
    conjugate,
    direct_sum,
    from_one_line,
    identity,
    inverse,
    joint_orbits,
    length,
    orbit_index,
    orbits,
    to_one_line,
    transposition,
)

logger = logging.getLogger(__name__)


class OrbElement:
    """Element of ⊕_σ A^{⊗orbits(σ)}: permutation → tensor payload over its canonical orbits"""

    __slots__ = ("algebra", "n", "components")

    def __init__(self, algebra: FrobeniusAlgebra, n: int, components: Optional[Dict[Permutation, Tensor]] = None):
        self.algebra = algebra
        self.n = n
        self.components: Dict[Permutation, Tensor] = {}
        for sigma, payload in (components or {}).items():
            if len(sigma) != n:
                raise ShapeError(f"permutation {sigma} does not act on {n} points")
            arity = len(orbits(sigma))
            cleaned = {}
            for key, value in payload.items():
                if len(key) != arity:
                    raise ShapeError(f"payload arity {len(key)} does not match {arity} orbits of {sigma}")
                if value:
                    cleaned[key] = Fraction(value)
            if cleaned:
                self.components[sigma] = cleaned

    @classmethod
    def zero(cls, algebra: FrobeniusAlgebra, n: int) -> "OrbElement":
        return cls(algebra, n)

    @classmethod
    def unit(cls, algebra: FrobeniusAlgebra, n: int) -> "OrbElement":
        return cls(algebra, n, {identity(n): {(algebra.unit,) * n: Fraction(1)}})

    @classmethod
    def from_tensor(cls, algebra: FrobeniusAlgebra, sigma: Permutation, payload: Tensor) -> "OrbElement":
        return cls(algebra, len(sigma), {sigma: payload})

    def _check(self, other: "OrbElement") -> None:
        if other.n != self.n or other.algebra is not self.algebra:
            raise ShapeError(f"OrbElements live in different rings (n={self.n} vs n={other.n})")

    def copy(self) -> "OrbElement":
        out = OrbElement(self.algebra, self.n)
        out.components = {k: dict(v) for k, v in self.components.items()}
        return out

    def add_component(self, sigma: Permutation, payload: Tensor, factor: Fraction = Fraction(1)) -> None:
        """In-place accumulation used by the product kernels"""
        target = self.components.setdefault(sigma, {})
        for key, value in payload.items():
            add_into(target, key, factor * value)
        if not target:
            del self.components[sigma]

    def __add__(self, other: "OrbElement") -> "OrbElement":
        self._check(other)
        out = self.copy()
        for sigma, payload in other.components.items():
            out.add_component(sigma, payload)
        return out

    def __sub__(self, other: "OrbElement") -> "OrbElement":
        return self + other.scale(-1)

    def __neg__(self) -> "OrbElement":
        return self.scale(-1)

    def scale(self, c: Any) -> "OrbElement":
        c = Fraction(c)
        out = OrbElement(self.algebra, self.n)
        if c:
            out.components = {k: {i: v * c for i, v in p.items()} for k, p in self.components.items()}
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrbElement):
            return NotImplemented
        return self.n == other.n and self.components == other.components

    def __repr__(self) -> str:
        return f"OrbElement(n={self.n}, support={len(self.components)})"

    def is_zero(self) -> bool:
        return not self.components

    def support(self) -> List[Permutation]:
        return sorted(self.components)

    def terms(self) -> Iterable[Tuple[Tuple[Permutation, Tuple[int, ...]], Fraction]]:
        for sigma in sorted(self.components):
            for key, value in sorted(self.components[sigma].items()):
                yield (sigma, key), value

    def flat(self) -> Dict[Tuple[Permutation, Tuple[int, ...]], Fraction]:
        return dict(self.terms())

    def degrees(self) -> set:
        """Shifted degrees |payload| + d·d(σ) present in the element"""
        out = set()
        for sigma, payload in self.components.items():
            shift = self.algebra.d * length(sigma)
            for key in payload:
                out.add(shift + sum(self.algebra.degree(i) for i in key))
        return out

    def degree(self) -> Optional[int]:
        degrees = self.degrees()
        return degrees.pop() if len(degrees) == 1 else None

    def parity(self) -> Optional[int]:
        parities = {d % 2 for d in self.degrees()}
        return parities.pop() if len(parities) == 1 else None

    def to_dict(self) -> List[Dict[str, Any]]:
        return [
            {
                "perm": to_one_line(sigma),
                "payload": [
                    {"indices": list(key), "coeff": format_rational(value)}
                    for key, value in sorted(self.components[sigma].items())
                ],
            }
            for sigma in sorted(self.components)
        ]

    @classmethod
    def from_dict(cls, algebra: FrobeniusAlgebra, n: int, data: List[Dict[str, Any]]) -> "OrbElement":
        components: Dict[Permutation, Tensor] = {}
        for entry in data:
            sigma = from_one_line(entry["perm"])
            payload = components.setdefault(sigma, {})
            for term in entry["payload"]:
                add_into(payload, tuple(algebra.index(i) for i in term["indices"]), parse_rational(term["coeff"]))
        return cls(algebra, n, components)


# ---------------------------------------------------------------- transport


def transport(algebra: FrobeniusAlgebra, h: Permutation, sigma: Permutation, payload: Tensor) -> Tuple[Permutation, Tensor]:
    """ad h on one component: factors move along h's bijection of orbits, with Koszul signs"""
    target = conjugate(h, sigma)
    index = orbit_index(target)
    positions = [index[h[orbit[0]]] for orbit in orbits(sigma)]
    out: Tensor = {}
    for key, value in payload.items():
        new_key = [0] * len(key)
        for j, idx in enumerate(key):
            new_key[positions[j]] = idx
        if algebra.has_odd:
            value = value * permutation_sign([algebra.parity(i) for i in key], positions)
        out[tuple(new_key)] = value
    return target, out


def ad(h: Permutation, x: OrbElement) -> OrbElement:
    """The S_n-action ad h : H*((X^n)^σ) → H*((X^n)^{hσh⁻¹})"""
    if len(h) != x.n:
        raise ShapeError(f"cannot act with S_{len(h)} on level {x.n}")
    out = OrbElement(x.algebra, x.n)
    for sigma, payload in x.components.items():
        target, moved = transport(x.algebra, h, sigma, payload)
        out.add_component(target, moved)
    return out


def is_invariant(x: OrbElement) -> bool:
    """Fixed by the adjacent transpositions, hence by S_n"""
    return all(ad(transposition(x.n, i, i + 1), x) == x for i in range(x.n - 1))


# ------------------------------------------------------------------ product


@dataclass(frozen=True)
class ProductPlan:
    """Combinatorial data of a pair (σ, τ): blocks are the joint orbits"""
    target: Permutation
    left_blocks: Tuple[int, ...]
    right_blocks: Tuple[int, ...]
    target_slots: Tuple[Tuple[int, ...], ...]
    defects: Tuple[int, ...]
    epsilon_twice_over_d: int


@lru_cache(maxsize=1 << 17)
def product_plan(sigma: Permutation, tau: Permutation) -> ProductPlan:
    target = compose(sigma, tau)
    blocks = joint_orbits(sigma, tau)
    block_of = [0] * len(sigma)
    for b, block in enumerate(blocks):
        for i in block:
            block_of[i] = b
    left = tuple(block_of[o[0]] for o in orbits(sigma))
    right = tuple(block_of[o[0]] for o in orbits(tau))
    target_orbits = orbits(target)
    slots: List[List[int]] = [[] for _ in blocks]
    for k, o in enumerate(target_orbits):
        slots[block_of[o[0]]].append(k)
    defects = []
    for b, block in enumerate(blocks):
        twice = len(block) + 2 - left.count(b) - right.count(b) - len(slots[b])
        if twice < 0 or twice % 2:
            raise ConsistencyError(f"graph defect {twice}/2 on block {block} of ({sigma}, {tau})")
        defects.append(twice // 2)
    return ProductPlan(
        target=target,
        left_blocks=left,
        right_blocks=right,
        target_slots=tuple(tuple(s) for s in slots),
        defects=tuple(defects),
        epsilon_twice_over_d=length(sigma) + length(tau) - length(target),
    )


def _restrict_terms(algebra: FrobeniusAlgebra, payload: Tensor, block_of: Tuple[int, ...], nblocks: int) -> Tensor:
    """Multiply the factors inside each block (stable block order, Koszul signs)"""
    order = sorted(range(len(block_of)), key=lambda j: block_of[j])
    positions = [0] * len(block_of)
    for new, old in enumerate(order):
        positions[old] = new
    out: Tensor = {}
    for key, value in payload.items():
        if algebra.has_odd:
            value = value * permutation_sign([algebra.parity(i) for i in key], positions)
        grouped: List[List[int]] = [[] for _ in range(nblocks)]
        for j, idx in enumerate(key):
            grouped[block_of[j]].append(idx)
        slots = [algebra.multiply_sequence(tuple(g)) for g in grouped]
        for block_key, coeff in expand_slots(slots):
            add_into(out, block_key, value * coeff)
    return out


def t_power(algebra: FrobeniusAlgebra, plan: ProductPlan, t: Fraction) -> Fraction:
    """t^{ε(σ,τ)} with ε = (d/4)(d(σ) + d(τ) − d(στ))"""
    numerator = algebra.d * plan.epsilon_twice_over_d
    if numerator % 4:
        raise ConsistencyError(f"ε = {numerator}/4 is not an integer")
    return Fraction(t) ** (numerator // 4)


def pair_product(algebra: FrobeniusAlgebra, sigma: Permutation, a: Tensor, tau: Permutation, b: Tensor, t: Fraction = Fraction(1)) -> Tuple[Permutation, Tensor]:
    """a_σ ∘_t b_τ: restrict to joint orbits, multiply, insert e^{g(B)}, transfer to the orbits of στ"""
    plan = product_plan(sigma, tau)
    scalar = t_power(algebra, plan, t)
    nblocks = len(plan.defects)
    left = _restrict_terms(algebra, a, plan.left_blocks, nblocks)
    right = _restrict_terms(algebra, b, plan.right_blocks, nblocks)
    merged = algebra.kunneth_terms(left, right)
    flat_slots = [k for slots in plan.target_slots for k in slots]
    arity = len(flat_slots)
    out: Tensor = {}
    for block_key, value in merged.items():
        pieces = [
            algebra.transfer(len(plan.target_slots[bi]), plan.defects[bi], c)
            for bi, c in enumerate(block_key)
        ]
        if any(not p for p in pieces):
            continue
        for combo in _product_of_tensors(pieces):
            key, coeff = combo
            new_key = [0] * arity
            for j, idx in enumerate(key):
                new_key[flat_slots[j]] = idx
            if algebra.has_odd:
                coeff = coeff * permutation_sign([algebra.parity(i) for i in key], flat_slots)
            add_into(out, tuple(new_key), scalar * value * coeff)
    return plan.target, out


def _product_of_tensors(pieces: List[Tensor]) -> Iterable[Tuple[Tuple[int, ...], Fraction]]:
    combos: List[Tuple[Tuple[int, ...], Fraction]] = [((), Fraction(1))]
    for piece in pieces:
        combos = [(k + pk, c * pc) for k, c in combos for pk, pc in piece.items()]
    return combos


def product(x: OrbElement, y: OrbElement, t: Any = 1) -> OrbElement:
    """x ∘_t y by direct convolution over supp(x) × supp(y)"""
    x._check(y)
    t = Fraction(t)
    if not t:
        raise ShapeError("t must be nonzero")
    out = OrbElement(x.algebra, x.n)
    for sigma, a in x.components.items():
        for tau, b in y.components.items():
            target, payload = pair_product(x.algebra, sigma, a, tau, b, t)
            if payload:
                out.add_component(target, payload)
    return out


def product_t(x: OrbElement, y: OrbElement, s: Any) -> OrbElement:
    """∘_t with t = s⁶"""
    s = Fraction(s)
    if not s:
        raise ShapeError("s must be nonzero")
    return product(x, y, s ** 6)


COMPRESS_FROM = 5


class CompressedInvariant:
    """Invariant element kept as one payload per conjugacy class, at the class representative

    The payload at π is symmetrized under the centralizer of π, so ad g for any g with
    gπg⁻¹ = σ gives the same σ-component.
    """

    __slots__ = ("algebra", "n", "classes")

    def __init__(self, algebra: FrobeniusAlgebra, n: int, classes: Optional[Dict[Permutation, Tensor]] = None):
        self.algebra = algebra
        self.n = n
        self.classes: Dict[Permutation, Tensor] = {rep: payload for rep, payload in (classes or {}).items() if payload}

    @classmethod
    def from_element(cls, x: OrbElement) -> "CompressedInvariant":
        data = conjugacy_data(x.n)
        out = cls(x.algebra, x.n)
        for rep in sorted({rep for rep, _ in data.values()}):
            payload = x.components.get(rep)
            if payload:
                out.classes[rep] = centralizer_average(x.algebra, rep, payload)
        return out

    def component(self, sigma: Permutation) -> Optional[Tensor]:
        rep, g = conjugacy_data(self.n)[sigma]
        payload = self.classes.get(rep)
        if payload is None:
            return None
        return transport(self.algebra, g, rep, payload)[1]

    def expand(self) -> OrbElement:
        out = OrbElement(self.algebra, self.n)
        for sigma, (rep, g) in conjugacy_data(self.n).items():
            payload = self.classes.get(rep)
            if payload:
                out.components[sigma] = transport(self.algebra, g, rep, payload)[1]
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CompressedInvariant):
            return NotImplemented
        return self.n == other.n and self.classes == other.classes

    def __repr__(self) -> str:
        return f"CompressedInvariant(n={self.n}, classes={len(self.classes)})"


def centralizer_average(algebra: FrobeniusAlgebra, sigma: Permutation, payload: Tensor) -> Tensor:
    group = centralizer(sigma)
    out: Tensor = {}
    for h in group:
        for key, value in transport(algebra, h, sigma, payload)[1].items():
            add_into(out, key, value / len(group))
    return out


def compressed_product(x: CompressedInvariant, y: CompressedInvariant, t: Any = 1) -> CompressedInvariant:
    """∘_t on compressed invariants: at each representative π, Σ_τ x_{πτ⁻¹} ∘ y_τ with components expanded on demand"""
    if x.n != y.n or x.algebra is not y.algebra:
        raise ShapeError(f"compressed invariants live in different rings (n={x.n} vs n={y.n})")
    t = Fraction(t)
    if not t:
        raise ShapeError("t must be nonzero")
    algebra, data = x.algebra, conjugacy_data(x.n)
    right = [tau for tau, (rep, _) in data.items() if rep in y.classes]
    out = CompressedInvariant(algebra, x.n)
    for pi in sorted({rep for rep, _ in data.values()}):
        acc: Tensor = {}
        for tau in right:
            sigma = compose(pi, inverse(tau))
            a = x.component(sigma)
            if a is None:
                continue
            _, payload = pair_product(algebra, sigma, a, tau, y.component(tau), t)
            for key, value in payload.items():
                add_into(acc, key, value)
        if acc:
            out.classes[pi] = acc
    return out


def invariant_product(x: OrbElement, y: OrbElement, t: Any = 1) -> OrbElement:
    """x ∘_t y for S_n-invariant inputs: one class representative π, then ad g over the class"""
    x._check(y)
    t = Fraction(t)
    if not t:
        raise ShapeError("t must be nonzero")
    if x.n >= COMPRESS_FROM:
        return compressed_product(CompressedInvariant.from_element(x), CompressedInvariant.from_element(y), t).expand()
    algebra = x.algebra
    data = conjugacy_data(x.n)
    reps = sorted({rep for rep, _ in data.values()})
    inverses = {tau: inverse(tau) for tau in y.components}
    out = OrbElement(algebra, x.n)
    for pi in reps:
        acc: Tensor = {}
        for tau, b in y.components.items():
            sigma = compose(pi, inverses[tau])
            a = x.components.get(sigma)
            if a is None:
                continue
            _, payload = pair_product(algebra, sigma, a, tau, b, t)
            for key, value in payload.items():
                add_into(acc, key, value)
        if not acc:
            continue
        for rho, (rep, g) in data.items():
            if rep == pi:
                _, moved = transport(algebra, g, pi, acc)
                out.components[rho] = moved
    return out


def power(x: OrbElement, k: int, t: Any = 1) -> OrbElement:
    value = OrbElement.unit(x.algebra, x.n)
    for _ in range(k):
        value = product(value, x, t)
    return value


# ---------------------------------------------------------- Res / Ind / Sym


def symmetrize(x: OrbElement) -> OrbElement:
    """(1/n!) Σ_g ad g(x)"""
    out = OrbElement(x.algebra, x.n)
    for g in all_permutations(x.n):
        for sigma, payload in x.components.items():
            target, moved = transport(x.algebra, g, sigma, payload)
            out.add_component(target, moved, Fraction(1, factorial(x.n)))
    return out


SplitPayload = Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]
YoungComponents = Dict[Tuple[Permutation, Permutation], SplitPayload]


def restrict(x: OrbElement, k: int) -> YoungComponents:
    """Res to S_k × S_{n−k}: components with keys in the Young subgroup, each payload key split as α⊗β"""
    if not 0 <= k <= x.n:
        raise ShapeError(f"restriction index {k} out of range for n = {x.n}")
    out: YoungComponents = {}
    for sigma, payload in x.components.items():
        if any(sigma[i] >= k for i in range(k)):
            continue
        first = sigma[:k]
        second = tuple(i - k for i in sigma[k:])
        # orbits of the first block come first in canonical order
        split = len(orbits(first))
        out[(first, second)] = {(key[:split], key[split:]): value for key, value in payload.items()}
    return out


def young_pair(x: OrbElement, y: OrbElement) -> YoungComponents:
    """x ⊗ y in H*(X^k, S_k) ⊗ H*(X^{n−k}, S_{n−k})"""
    if x.algebra is not y.algebra:
        raise ShapeError("Young pairs need factors over the same algebra")
    out: YoungComponents = {}
    for first, a in x.components.items():
        for second, b in y.components.items():
            out[(first, second)] = {(i, j): u * v for i, u in a.items() for j, v in b.items()}
    return out


def young_element(algebra: FrobeniusAlgebra, pair: YoungComponents, n: int) -> OrbElement:
    out = OrbElement(algebra, n)
    for (first, second), payload in pair.items():
        if len(first) + len(second) != n:
            raise ShapeError(f"Young pair on {len(first)} + {len(second)} points does not live at level {n}")
        out.add_component(direct_sum(first, second), {i + j: value for (i, j), value in payload.items()})
    return out


def coset_representatives(n: int, k: int) -> List[Permutation]:
    """g sending {0..k-1} increasingly onto a k-subset and the rest increasingly onto its complement"""
    reps = []
    for subset in combinations(range(n), k):
        rest = [i for i in range(n) if i not in subset]
        reps.append(tuple(list(subset) + rest))
    return reps


def induce(algebra: FrobeniusAlgebra, pair: YoungComponents, n: int, k: int, assume_invariant: bool = False) -> OrbElement:
    """Ind from S_k × S_{n−k}: (1/|K|) Σ_{g ∈ S_n} ad g, or Σ over coset representatives for K-invariant input"""
    x = young_element(algebra, pair, n)
    out = OrbElement(algebra, n)
    if assume_invariant:
        group, factor = coset_representatives(n, k), Fraction(1)
    else:
        group, factor = all_permutations(n), Fraction(1, factorial(k) * factorial(n - k))
    for g in group:
        for sigma, payload in x.components.items():
            target, moved = transport(algebra, g, sigma, payload)
            out.add_component(target, moved, factor)
    return out


def zeta(x: OrbElement, s: Any) -> OrbElement:
    """ζ_t for t = s⁶: the σ-component is scaled by t^{F^σ/2} = s^{3d·d(σ)/2}"""
    s = Fraction(s)
    if not s:
        raise ShapeError("s must be nonzero")
    out = OrbElement(x.algebra, x.n)
    for sigma, payload in x.components.items():
        exponent = 3 * x.algebra.d * length(sigma)
        factor = s ** (exponent // 2)
        out.components[sigma] = {key: value * factor for key, value in payload.items()}
    return out


def identity_tensor(algebra: FrobeniusAlgebra, n: int, slots: Dict[int, AlgebraElement]) -> OrbElement:
    """Element on the identity key with given algebra elements at some slots and 1 elsewhere"""
    factors = [slots.get(i, algebra.unit_element()) for i in range(n)]
    payload: Tensor = {}
    for key, value in expand_slots(factors):
        add_into(payload, key, value)
    return OrbElement(algebra, n, {identity(n): payload})
