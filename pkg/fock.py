#!/usr/bin/env python3
"""Fock space F_X = ⊕_n H*_orb(X^n/S_n): Heisenberg operators, the p_ρ(n) basis and coordinates"""

import logging
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations as iter_permutations, product as cartesian
from math import factorial
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from frobenius import AlgebraElement, ConsistencyError, FrobeniusAlgebra, ShapeError, Tensor, add_into, format_rational
from orbiring import OrbElement, coset_representatives, transport
from symgroup import Permutation, centralizer, class_representative, direct_sum, integer_partitions, orbits

logger = logging.getLogger(__name__)

SAMPLE_PAIRS = 20
SAMPLE_TRIPLES = 10

# A canonical Heisenberg monomial: factors (basis index, part) sorted ascending; the leftmost
# factor is applied last. It stands for p_{-r1}(b_c1) ··· p_{-rL}(b_cL)|0⟩.
Monomial = Tuple[Tuple[int, int], ...]
MonomialVector = Dict[Monomial, Fraction]


@dataclass(frozen=True, order=True)
class PartitionFunction:
    """Partition-valued function on the basis, stored as sorted (basis index, part) pairs"""
    parts: Monomial = ()

    @classmethod
    def of(cls, parts: Iterable[Tuple[int, int]]) -> "PartitionFunction":
        return cls(tuple(sorted(parts)))

    @classmethod
    def from_mapping(cls, algebra: FrobeniusAlgebra, mapping: Dict[Any, Sequence[int]]) -> "PartitionFunction":
        parts = []
        for label, partition in mapping.items():
            c = algebra.index(label)
            for r in partition:
                if int(r) < 1:
                    raise ShapeError(f"parts must be positive, got {r}")
                parts.append((c, int(r)))
        rho = cls.of(parts)
        rho.validate(algebra)
        return rho

    def to_mapping(self, algebra: FrobeniusAlgebra) -> Dict[str, List[int]]:
        out: Dict[str, List[int]] = {}
        for c, r in self.parts:
            out.setdefault(algebra.basis[c].label, []).append(r)
        return out

    @property
    def norm(self) -> int:
        return sum(r for _, r in self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def validate(self, algebra: FrobeniusAlgebra) -> None:
        for c, r in set(self.parts):
            if algebra.parity(c) and self.parts.count((c, r)) > 1:
                raise ShapeError(f"partition on odd class {algebra.basis[c].label} must be strict")

    def reduced(self, unit: int) -> Tuple["PartitionFunction", int]:
        """Drop the 1-parts on the unit; returns (reduced ρ, number dropped)"""
        kept = tuple(p for p in self.parts if p != (unit, 1))
        return PartitionFunction(kept), len(self.parts) - len(kept)

    def is_reduced(self, unit: int) -> bool:
        return (unit, 1) not in self.parts

    def with_unit_parts(self, unit: int, count: int) -> "PartitionFunction":
        return PartitionFunction.of(self.parts + ((unit, 1),) * count)

    def label(self, algebra: FrobeniusAlgebra) -> str:
        if not self.parts:
            return "-"
        return " ".join(f"{label}({','.join(str(r) for r in rs)})" for label, rs in self.to_mapping(algebra).items())


def partition_functions(algebra: FrobeniusAlgebra, norm: int) -> List[PartitionFunction]:
    """All ρ with ‖ρ‖ = norm, strict on odd classes, in a fixed order"""
    return [PartitionFunction(m) for m in monomials_of_norm(algebra, norm)]


def monomials_of_norm(algebra: FrobeniusAlgebra, norm: int) -> List[Monomial]:
    factors = [(c, r) for c in range(algebra.dim) for r in range(1, norm + 1)]
    out: List[Monomial] = []

    def walk(start: int, remaining: int, acc: List[Tuple[int, int]]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        for j in range(start, len(factors)):
            c, r = factors[j]
            if r > remaining:
                continue
            acc.append((c, r))
            walk(j + 1 if algebra.parity(c) else j, remaining - r, acc)
            acc.pop()

    walk(0, norm, [])
    return sorted(out)


def reduced_basis(algebra: FrobeniusAlgebra, n: int) -> List[PartitionFunction]:
    """Reduced ρ with ‖ρ‖ ≤ n indexing a basis p_ρ(n) of level n"""
    return sorted({PartitionFunction(m).reduced(algebra.unit)[0] for m in monomials_of_norm(algebra, n)})


def fock_dimension(algebra: FrobeniusAlgebra, n: int) -> int:
    return len(monomials_of_norm(algebra, n))


def orbifold_dimension(algebra: FrobeniusAlgebra, n: int) -> Fraction:
    """dim H*_orb(X^n/S_n) = Σ_classes (1/|Z(σ)|) Σ_{h ∈ Z(σ)} tr(ad h on A^{⊗orbits(σ)})"""
    even = sum(1 for b in algebra.basis if not b.parity)
    odd = algebra.dim - even
    total = Fraction(0)
    for shape in integer_partitions(n):
        sigma = class_representative(shape)
        centre = centralizer(sigma)
        sigma_orbits = orbits(sigma)
        where = {}
        for k, orbit in enumerate(sigma_orbits):
            for i in orbit:
                where[i] = k
        trace_sum = 0
        for h in centre:
            mapping = [where[h[orbit[0]]] for orbit in sigma_orbits]
            seen = [False] * len(mapping)
            trace = 1
            for start in range(len(mapping)):
                if seen[start]:
                    continue
                size = 0
                j = start
                while not seen[j]:
                    seen[j] = True
                    j = mapping[j]
                    size += 1
                trace *= even + (-1) ** (size - 1) * odd
            trace_sum += trace
        total += Fraction(trace_sum, len(centre))
    return total


# ------------------------------------------------------------------ vectors


class FockVector:
    """Finite sum over levels of invariant OrbElements"""

    __slots__ = ("algebra", "levels")

    def __init__(self, algebra: FrobeniusAlgebra, levels: Optional[Dict[int, OrbElement]] = None):
        self.algebra = algebra
        self.levels: Dict[int, OrbElement] = {n: x for n, x in (levels or {}).items() if not x.is_zero()}

    @classmethod
    def of(cls, x: OrbElement) -> "FockVector":
        return cls(x.algebra, {x.n: x})

    @classmethod
    def vacuum(cls, algebra: FrobeniusAlgebra) -> "FockVector":
        return cls.of(OrbElement.unit(algebra, 0))

    def level(self, n: int) -> OrbElement:
        return self.levels.get(n, OrbElement.zero(self.algebra, n))

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.levels)
        for n, x in other.levels.items():
            out[n] = out[n] + x if n in out else x
        return FockVector(self.algebra, out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, c: Any) -> "FockVector":
        return FockVector(self.algebra, {n: x.scale(c) for n, x in self.levels.items()})

    def is_zero(self) -> bool:
        return not self.levels

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.levels == other.levels

    def __repr__(self) -> str:
        return f"FockVector(levels={sorted(self.levels)})"

    def to_dict(self) -> Dict[str, Any]:
        return {str(n): x.to_dict() for n, x in sorted(self.levels.items())}


@lru_cache(maxsize=32)
def m_cycles(m: int) -> Tuple[Permutation, ...]:
    """All m-cycles on {0..m-1}"""
    if m == 1:
        return ((0,),)
    out = []
    for order in iter_permutations(range(1, m)):
        images = [0] * m
        chain = (0,) + order
        for a, b in zip(chain, chain[1:] + chain[:1]):
            images[a] = b
        out.append(tuple(images))
    return tuple(out)


def standard_cycle(m: int) -> Permutation:
    return tuple((i + 1) % m for i in range(m))


class OrbifoldFock:
    """Heisenberg operators realized on invariant OrbElements via ω_m ⊗ · then Ind, and Res then ch_m then (α, ·)"""

    def __init__(self, algebra: FrobeniusAlgebra):
        self.algebra = algebra
        self._monomial_cache: Dict[Monomial, OrbElement] = {}
        self._dual = [algebra.dual_element(c) for c in range(algebra.dim)]

    # -- model interface shared with MonomialFock

    def vacuum(self) -> FockVector:
        return FockVector.vacuum(self.algebra)

    def zero(self) -> FockVector:
        return FockVector(self.algebra)

    def add(self, u: FockVector, v: FockVector) -> FockVector:
        return u + v

    def scale(self, v: FockVector, c: Any) -> FockVector:
        return v.scale(c)

    def is_zero(self, v: FockVector) -> bool:
        return v.is_zero()

    def split_levels(self, v: FockVector) -> Dict[int, FockVector]:
        return {n: FockVector.of(x) for n, x in v.levels.items()}

    def heisenberg(self, mode: int, alpha: AlgebraElement, v: FockVector) -> FockVector:
        """p_mode(α): creation for negative modes, annihilation for positive, p_0 = 0"""
        if mode < 0:
            return self.create(-mode, alpha, v)
        if mode > 0:
            return self.annihilate(mode, alpha, v)
        return self.zero()

    def create(self, m: int, alpha: AlgebraElement, v: FockVector) -> FockVector:
        if m < 1:
            raise ShapeError("creation needs m >= 1")
        out = {}
        for n, x in v.levels.items():
            y = self.create_element(m, alpha, x)
            if not y.is_zero():
                out[n + m] = y
        return FockVector(self.algebra, out)

    def annihilate(self, m: int, alpha: AlgebraElement, v: FockVector) -> FockVector:
        if m < 1:
            raise ShapeError("annihilation needs m >= 1")
        out = {}
        for n, x in v.levels.items():
            if m <= n:
                y = self.annihilate_element(m, alpha, x)
                if not y.is_zero():
                    out[n - m] = y
        return FockVector(self.algebra, out)

    # -- level-wise kernels

    def create_element(self, m: int, alpha: AlgebraElement, y: OrbElement) -> OrbElement:
        """p_{-m}(α)y = Ind(ω_m(α) ⊗ y), summed over coset representatives of S_m × S_k"""
        algebra = self.algebra
        n = y.n + m
        seed: Dict[Permutation, Tensor] = {}
        for c in m_cycles(m):
            for tau, payload in y.components.items():
                key = direct_sum(c, tau)
                target = seed.setdefault(key, {})
                for i, a in alpha.items():
                    for idx, value in payload.items():
                        add_into(target, (i,) + idx, m * a * value)
        out = OrbElement(algebra, n)
        for g in coset_representatives(n, m):
            for sigma, payload in seed.items():
                if payload:
                    target, moved = transport(algebra, g, sigma, payload)
                    out.add_component(target, moved)
        return out

    def annihilate_element(self, m: int, alpha: AlgebraElement, x: OrbElement) -> OrbElement:
        """p_m(α)x: the standard m-cycle component, first payload slot contracted with (α, ·)"""
        algebra = self.algebra
        if m > x.n:
            raise ShapeError(f"cannot annihilate {m} points from level {x.n}")
        contraction = {c: algebra.pairing(alpha, {c: Fraction(1)}) for c in range(algebra.dim)}
        cyc = standard_cycle(m)
        out = OrbElement(algebra, x.n - m)
        for sigma, payload in x.components.items():
            if sigma[:m] != cyc:
                continue
            rest = tuple(i - m for i in sigma[m:])
            acc: Tensor = {}
            for key, value in payload.items():
                w = contraction[key[0]]
                if w:
                    add_into(acc, key[1:], w * value)
            if acc:
                out.add_component(rest, acc)
        return out

    # -- classes and coordinates

    def monomial_element(self, monomial: Monomial) -> OrbElement:
        """The OrbElement p_{-r1}(b_c1)···p_{-rL}(b_cL)|0⟩, cached by suffix"""
        cached = self._monomial_cache.get(monomial)
        if cached is not None:
            return cached
        if not monomial:
            value = OrbElement.unit(self.algebra, 0)
        else:
            c, r = monomial[0]
            value = self.create_element(r, {c: Fraction(1)}, self.monomial_element(monomial[1:]))
        self._monomial_cache[monomial] = value
        return value

    def unit_class(self, n: int) -> OrbElement:
        """1_{-n} = p_{-1}(1)^n / n! |0⟩"""
        return self.monomial_element(((self.algebra.unit, 1),) * n).scale(Fraction(1, factorial(n)))

    def p_rho(self, rho: PartitionFunction, n: int) -> OrbElement:
        """p_ρ(n) = 1_{-(n-‖ρ‖)} ∏_c p_{-ρ(c)}(c)|0⟩; zero when n < ‖ρ‖"""
        rho.validate(self.algebra)
        k = n - rho.norm
        if k < 0:
            return OrbElement.zero(self.algebra, n)
        full = rho.with_unit_parts(self.algebra.unit, k)
        return self.monomial_element(full.parts).scale(Fraction(1, factorial(k)))

    def from_monomials(self, coords: MonomialVector, n: int) -> OrbElement:
        out = OrbElement.zero(self.algebra, n)
        for monomial, c in coords.items():
            if sum(r for _, r in monomial) != n:
                raise ShapeError(f"monomial {monomial} is not on level {n}")
            out = out + self.monomial_element(monomial).scale(c)
        return out

    def from_coordinates(self, coords: Dict[PartitionFunction, Fraction], n: int) -> OrbElement:
        out = OrbElement.zero(self.algebra, n)
        for rho, c in coords.items():
            out = out + self.p_rho(rho, n).scale(c)
        return out

    def monomial_coordinates(self, x: OrbElement, monomial_model: Optional["MonomialFock"] = None) -> MonomialVector:
        """Coefficients of x on the canonical monomials of its level, by dual annihilation"""
        algebra = self.algebra
        model = monomial_model or MonomialFock(algebra)
        factors = [(c, r) for c in range(algebra.dim) for r in range(1, x.n + 1)]
        raw: Dict[Monomial, Fraction] = {}

        def walk(state: OrbElement, upper: int, path: List[Tuple[int, int]]) -> None:
            if state.n == 0:
                value = state.components.get((), {}).get((), Fraction(0))
                if value:
                    raw[tuple(reversed(path))] = value
                return
            for j in range(upper, -1, -1):
                c, r = factors[j]
                if r > state.n:
                    continue
                if path and path[-1] == (c, r) and algebra.parity(c):
                    continue
                nxt = self.annihilate_element(r, self._dual[c], state)
                if nxt.is_zero():
                    continue
                path.append((c, r))
                walk(nxt, j, path)
                path.pop()

        if not x.is_zero():
            walk(x, len(factors) - 1, [])
        coords: MonomialVector = {}
        for monomial, value in raw.items():
            norm = model.dual_pairing(monomial)
            if not norm:
                raise ConsistencyError(f"dual pairing of {monomial} vanishes")
            coords[monomial] = value / norm
        return coords

    def coordinates(self, x: OrbElement, check: bool = False) -> Dict[PartitionFunction, Fraction]:
        """Reduced coordinates: x = Σ c_ρ p_ρ(n) over reduced ρ"""
        coords: Dict[PartitionFunction, Fraction] = {}
        for monomial, value in self.monomial_coordinates(x).items():
            rho, dropped = PartitionFunction(monomial).reduced(self.algebra.unit)
            coords[rho] = value * factorial(dropped)
        if check:
            rebuilt = self.from_coordinates(coords, x.n)
            if rebuilt != x:
                raise ConsistencyError("coordinates do not reconstruct the vector")
        return coords


class MonomialFock:
    """The same Heisenberg module on canonical monomials, with Koszul signs for odd classes"""

    def __init__(self, algebra: FrobeniusAlgebra):
        self.algebra = algebra
        self._parity = [algebra.parity(c) for c in range(algebra.dim)]
        self._dual = [algebra.dual_element(c) for c in range(algebra.dim)]

    def vacuum(self) -> MonomialVector:
        return {(): Fraction(1)}

    def zero(self) -> MonomialVector:
        return {}

    def add(self, u: MonomialVector, v: MonomialVector) -> MonomialVector:
        out = dict(u)
        for key, value in v.items():
            add_into(out, key, value)
        return out

    def scale(self, v: MonomialVector, c: Any) -> MonomialVector:
        c = Fraction(c)
        return {k: x * c for k, x in v.items()} if c else {}

    def is_zero(self, v: MonomialVector) -> bool:
        return not v

    def split_levels(self, v: MonomialVector) -> Dict[int, MonomialVector]:
        out: Dict[int, MonomialVector] = {}
        for monomial, value in v.items():
            out.setdefault(sum(r for _, r in monomial), {})[monomial] = value
        return out

    def unit(self, n: int) -> MonomialVector:
        return {((self.algebra.unit, 1),) * n: Fraction(1, factorial(n))}

    def of(self, rho: PartitionFunction, n: int) -> MonomialVector:
        """p_ρ(n) as a monomial vector"""
        k = n - rho.norm
        if k < 0:
            return {}
        return {rho.with_unit_parts(self.algebra.unit, k).parts: Fraction(1, factorial(k))}

    def heisenberg(self, mode: int, alpha: AlgebraElement, v: MonomialVector) -> MonomialVector:
        if mode < 0:
            return self.create(-mode, alpha, v)
        if mode > 0:
            return self.annihilate(mode, alpha, v)
        return {}

    def create(self, m: int, alpha: AlgebraElement, v: MonomialVector) -> MonomialVector:
        out: MonomialVector = {}
        for c, a in alpha.items():
            factor = (c, m)
            odd = self._parity[c]
            for monomial, value in v.items():
                if odd:
                    pos = bisect_left(monomial, factor)
                    if pos < len(monomial) and monomial[pos] == factor:
                        continue
                    flips = sum(self._parity[f[0]] for f in monomial[:pos])
                    sign = -1 if flips % 2 else 1
                else:
                    pos = bisect_right(monomial, factor)
                    sign = 1
                add_into(out, monomial[:pos] + (factor,) + monomial[pos:], sign * a * value)
        return out

    def annihilate(self, m: int, alpha: AlgebraElement, v: MonomialVector) -> MonomialVector:
        gram = self.algebra.gram
        out: MonomialVector = {}
        for c, a in alpha.items():
            odd = self._parity[c]
            for monomial, value in v.items():
                flips = 0
                for pos, (cl, r) in enumerate(monomial):
                    if r == m and gram[c][cl]:
                        sign = -1 if odd and flips % 2 else 1
                        add_into(out, monomial[:pos] + monomial[pos + 1:], sign * m * gram[c][cl] * a * value)
                    flips += self._parity[cl]
        return out

    def dual_pairing(self, monomial: Monomial) -> Fraction:
        """Scalar obtained by annihilating the monomial with its dual classes, rightmost first"""
        state = {monomial: Fraction(1)}
        for c, r in reversed(monomial):
            state = self.annihilate(r, self._dual[c], state)
        return state.get((), Fraction(0))

    def apply_word(self, word: Sequence[Tuple[int, AlgebraElement]], v: MonomialVector) -> MonomialVector:
        """Apply p_{m1}(α1)···p_{mk}(αk), rightmost first"""
        for mode, alpha in reversed(word):
            v = self.heisenberg(mode, alpha, v)
        return v


def reduce_monomials(algebra: FrobeniusAlgebra, coords: MonomialVector) -> Dict[PartitionFunction, Fraction]:
    """Monomial coefficients to reduced p_ρ(n) coordinates"""
    out: Dict[PartitionFunction, Fraction] = {}
    for monomial, value in coords.items():
        rho, dropped = PartitionFunction(monomial).reduced(algebra.unit)
        add_into(out, rho, value * factorial(dropped))
    return out


def format_coordinates(algebra: FrobeniusAlgebra, coords: Dict[PartitionFunction, Fraction]) -> Dict[str, str]:
    return {rho.label(algebra): format_rational(c) for rho, c in sorted(coords.items())}


def first_difference(left: Dict[Any, Fraction], right: Dict[Any, Fraction]) -> Optional[str]:
    """Residual witness: the first key where two coordinate maps differ"""
    for key in sorted(set(left) | set(right), key=repr):
        a, b = left.get(key, Fraction(0)), right.get(key, Fraction(0))
        if a != b:
            return f"{key}: {format_rational(a - b)}"
    return None


def parse_ops(algebra: FrobeniusAlgebra, text: str) -> List[Tuple[int, AlgebraElement]]:
    """Read an operator word such as "p(-2,x) p(-1,1)" """
    word = []
    for token in text.replace(")", ") ").split():
        token = token.strip()
        if not token:
            continue
        if not (token.startswith("p(") and token.endswith(")")):
            raise ShapeError(f"cannot read operator {token!r}")
        mode_text, label = token[2:-1].split(",", 1)
        word.append((int(mode_text), algebra.element(label.strip())))
    return word


def apply_word(model: Union[OrbifoldFock, MonomialFock], word: Sequence[Tuple[int, AlgebraElement]], v: Any) -> Any:
    for mode, alpha in reversed(word):
        v = model.heisenberg(mode, alpha, v)
    return v


def supercommutator(model: Any, first: Callable[[Any], Any], second: Callable[[Any], Any], sign: int, v: Any) -> Any:
    """[A, B]v = A(Bv) − sign·B(Av)"""
    return model.add(first(second(v)), model.scale(second(first(v)), -sign))


def bracket_residual(model: Any, central: Fraction, max_mode: int, v: Any) -> Optional[str]:
    """[p_m(b_a), p_n(b_b)]v = central·m·δ_{m,−n}(b_a,b_b)v for 0 < |m|,|n| ≤ max_mode"""
    algebra = model.algebra
    modes = [m for m in range(-max_mode, max_mode + 1) if m]
    for m in modes:
        for n in modes:
            for a in range(algebra.dim):
                for b in range(algebra.dim):
                    alpha, beta = {a: Fraction(1)}, {b: Fraction(1)}
                    lhs = supercommutator(
                        model,
                        lambda w, m=m, alpha=alpha: model.heisenberg(m, alpha, w),
                        lambda w, n=n, beta=beta: model.heisenberg(n, beta, w),
                        (-1) ** (algebra.parity(a) * algebra.parity(b)),
                        v,
                    )
                    scalar = central * m * algebra.pairing(alpha, beta) if m == -n else Fraction(0)
                    diff = model.add(lhs, model.scale(v, -scalar))
                    if not model.is_zero(diff):
                        return f"[p_{m}({algebra.basis[a].label}), p_{n}({algebra.basis[b].label})] off by {diff!r}"
    return None


def number_operator(model: Any, v: Any, max_mode: int) -> Any:
    """Σ_{m ≤ max_mode} Σ_i p_{−m}(b_i) p_m(b^i) v"""
    algebra = model.algebra
    out = model.zero()
    for m in range(1, max_mode + 1):
        for i in range(algebra.dim):
            lowered = model.annihilate(m, algebra.dual_element(i), v)
            if not model.is_zero(lowered):
                out = model.add(out, model.create(m, {i: Fraction(1)}, lowered))
    return out


def element_residual(fock: OrbifoldFock, left: OrbElement, right: OrbElement) -> Optional[str]:
    """None when equal, else the first nonzero reduced coordinate of the difference"""
    if left == right:
        return None
    diff = left - right
    coords = fock.coordinates(diff)
    return first_difference(coords, {}) or "difference outside the p_ρ(n) span"


class RationalSpan:
    """Incremental reduced row echelon form over ℚ on sparse vectors, tracking each row as a combination of inputs"""

    def __init__(self):
        self.rows: Dict[Any, Tuple[Dict[Any, Fraction], Dict[int, Fraction]]] = {}
        self.inputs = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Dict[Any, Fraction]) -> Tuple[Dict[Any, Fraction], Dict[int, Fraction]]:
        """vec = residual + Σ combo[i]·input_i"""
        residual = {k: Fraction(v) for k, v in vec.items() if v}
        combo: Dict[int, Fraction] = {}
        for pivot, (row, row_combo) in self.rows.items():
            c = residual.get(pivot)
            if not c:
                continue
            for k, v in row.items():
                add_into(residual, k, -c * v)
            for i, v in row_combo.items():
                add_into(combo, i, c * v)
        return residual, combo

    def insert(self, vec: Dict[Any, Fraction]) -> bool:
        """Record vec as input number self.inputs; True when it raised the rank"""
        index = self.inputs
        self.inputs += 1
        residual, combo = self.reduce(vec)
        if not residual:
            return False
        pivot = min(residual)
        lead = residual[pivot]
        row = {k: v / lead for k, v in residual.items()}
        row_combo = {i: -v / lead for i, v in combo.items()}
        add_into(row_combo, index, 1 / lead)
        for other, (other_row, other_combo) in self.rows.items():
            e = other_row.get(pivot)
            if not e:
                continue
            for k, v in row.items():
                add_into(other_row, k, -e * v)
            for i, v in row_combo.items():
                add_into(other_combo, i, -e * v)
        self.rows[pivot] = (row, row_combo)
        return True

    def express(self, vec: Dict[Any, Fraction]) -> Optional[Dict[int, Fraction]]:
        """Coefficients on the inputs reproducing vec, or None outside the span"""
        residual, combo = self.reduce(vec)
        return None if residual else combo


def matrix_rank(vectors: Sequence[Dict[Any, Fraction]]) -> int:
    """Rank of sparse rational vectors through one sympy matrix"""
    columns = sorted({k for vec in vectors for k in vec}, key=repr)
    if not vectors or not columns:
        return 0
    position = {k: j for j, k in enumerate(columns)}
    matrix = sympy.zeros(len(vectors), len(columns))
    for i, vec in enumerate(vectors):
        for k, v in vec.items():
            matrix[i, position[k]] = sympy.Rational(v.numerator, v.denominator)
    return matrix.rank()


def sample_tuples(items: Sequence[Any], arity: int, count: int, seed: Any = 0) -> List[Tuple[Any, ...]]:
    """count distinct arity-tuples drawn over all of items with a seeded generator; every tuple when there are no more than count"""
    total = len(items) ** arity
    if total <= count:
        return list(cartesian(items, repeat=arity))
    out = []
    for code in sorted(random.Random(seed).sample(range(total), count)):
        digits = []
        for _ in range(arity):
            code, r = divmod(code, len(items))
            digits.append(items[r])
        out.append(tuple(reversed(digits)))
    return out
