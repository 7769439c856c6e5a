#!/usr/bin/env python3
"""Symmetric-group combinatorics: permutations, orbits, classes, Jucys-Murphy elements, Frobenius map"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import partitions as sympy_partitions

from frobenius import ShapeError, add_into

logger = logging.getLogger(__name__)

# One-line notation on {0..n-1}: perm[i] is the image of i. Cycle helpers take 1-based labels.
Permutation = Tuple[int, ...]
Partition = Tuple[int, ...]


def identity(n: int) -> Permutation:
    return tuple(range(n))


def compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """(στ)(i) = σ(τ(i))"""
    if len(sigma) != len(tau):
        raise ShapeError(f"cannot compose permutations of sizes {len(sigma)} and {len(tau)}")
    return tuple(sigma[i] for i in tau)


def inverse(sigma: Permutation) -> Permutation:
    out = [0] * len(sigma)
    for i, image in enumerate(sigma):
        out[image] = i
    return tuple(out)


def conjugate(h: Permutation, sigma: Permutation) -> Permutation:
    """h σ h⁻¹"""
    out = [0] * len(sigma)
    for i, image in enumerate(sigma):
        out[h[i]] = h[image]
    return tuple(out)


def cycle(n: int, *cycles: Sequence[int]) -> Permutation:
    """Permutation of {0..n-1} from cycles written with 1-based labels, e.g. cycle(3, (1, 2))"""
    images = list(range(n))
    seen = set()
    for c in cycles:
        for label in c:
            if not 1 <= label <= n or label in seen:
                raise ShapeError(f"bad cycle {c} for n = {n}")
            seen.add(label)
        for a, b in zip(c, c[1:] + c[:1]):
            images[a - 1] = b - 1
    return tuple(images)


def from_one_line(images: Sequence[int]) -> Permutation:
    """Read 1-based one-line notation"""
    perm = tuple(int(i) - 1 for i in images)
    if sorted(perm) != list(range(len(perm))):
        raise ShapeError(f"{list(images)} is not a permutation")
    return perm


def to_one_line(sigma: Permutation) -> List[int]:
    return [i + 1 for i in sigma]


def shift(sigma: Permutation, offset: int) -> Tuple[int, ...]:
    return tuple(i + offset for i in sigma)


def direct_sum(sigma: Permutation, tau: Permutation) -> Permutation:
    """σ on {0..k-1} next to τ on {k..k+l-1}"""
    return sigma + shift(tau, len(sigma))


@lru_cache(maxsize=1 << 16)
def cycles(sigma: Permutation) -> Tuple[Tuple[int, ...], ...]:
    """Cycles listed by ascending minimum, each starting at its minimum"""
    seen = [False] * len(sigma)
    out = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        c = []
        i = start
        while not seen[i]:
            seen[i] = True
            c.append(i)
            i = sigma[i]
        out.append(tuple(c))
    return tuple(out)


@lru_cache(maxsize=1 << 16)
def orbits(sigma: Permutation) -> Tuple[Tuple[int, ...], ...]:
    """Orbits in canonical order (ascending minimum), each sorted"""
    return tuple(tuple(sorted(c)) for c in cycles(sigma))


@lru_cache(maxsize=1 << 16)
def orbit_index(sigma: Permutation) -> Tuple[int, ...]:
    """orbit_index(σ)[i] = canonical index of the orbit containing i"""
    out = [0] * len(sigma)
    for k, orbit in enumerate(orbits(sigma)):
        for i in orbit:
            out[i] = k
    return tuple(out)


def joint_orbits(sigma: Permutation, tau: Permutation) -> Tuple[Tuple[int, ...], ...]:
    """Orbits of the subgroup generated by σ and τ, canonical order"""
    if len(sigma) != len(tau):
        raise ShapeError("joint orbits need permutations of equal size")
    parent = list(range(len(sigma)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in (sigma, tau):
        for i, j in enumerate(perm):
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: Dict[int, List[int]] = {}
    for i in range(len(sigma)):
        groups.setdefault(find(i), []).append(i)
    return tuple(tuple(g) for _, g in sorted(groups.items()))


def cycle_type(sigma: Permutation) -> Partition:
    return tuple(sorted((len(c) for c in cycles(sigma)), reverse=True))


def length(sigma: Permutation) -> int:
    """d(σ) = n − number of cycles"""
    return len(sigma) - len(cycles(sigma))


def sign(sigma: Permutation) -> int:
    return -1 if length(sigma) % 2 else 1


def transposition(n: int, i: int, j: int) -> Permutation:
    """Transposition of the 0-based points i and j"""
    images = list(range(n))
    images[i], images[j] = j, i
    return tuple(images)


@lru_cache(maxsize=16)
def all_permutations(n: int) -> Tuple[Permutation, ...]:
    return tuple(permutations(range(n)))


@lru_cache(maxsize=64)
def integer_partitions(n: int) -> Tuple[Partition, ...]:
    """Partitions of n, each in non-increasing order, in reverse lexicographic order"""
    if n == 0:
        return ((),)
    out = []
    for p in sympy_partitions(n):
        parts: List[int] = []
        for part, mult in sorted(p.items(), reverse=True):
            parts.extend([part] * mult)
        out.append(tuple(parts))
    return tuple(sorted(out, reverse=True))


def class_representative(shape: Partition) -> Permutation:
    """Cycles of the shape laid on consecutive points, longest first"""
    n = sum(shape)
    images = list(range(n))
    start = 0
    for part in shape:
        for k in range(part):
            images[start + k] = start + (k + 1) % part
        start += part
    return tuple(images)


def centralizer_order(shape: Partition) -> int:
    """z_λ = ∏ r^{m_r} m_r!"""
    z = 1
    for part in set(shape):
        mult = shape.count(part)
        z *= part ** mult * factorial(mult)
    return z


@lru_cache(maxsize=16)
def conjugacy_data(n: int) -> Dict[Permutation, Tuple[Permutation, Permutation]]:
    """Map σ ↦ (class representative π, g) with g π g⁻¹ = σ"""
    data: Dict[Permutation, Tuple[Permutation, Permutation]] = {}
    reps = {shape: class_representative(shape) for shape in integer_partitions(n)}
    rep_cycles = {shape: sorted(cycles(rep), key=len, reverse=True) for shape, rep in reps.items()}
    for sigma in all_permutations(n):
        shape = cycle_type(sigma)
        target = sorted(cycles(sigma), key=len, reverse=True)
        g = [0] * n
        for source_cycle, target_cycle in zip(rep_cycles[shape], target):
            for a, b in zip(source_cycle, target_cycle):
                g[a] = b
        data[sigma] = (reps[shape], tuple(g))
    logger.debug(f"conjugacy data ready for S_{n}: {len(reps)} classes")
    return data


@lru_cache(maxsize=64)
def class_members(shape: Partition) -> Tuple[Permutation, ...]:
    n = sum(shape)
    return tuple(s for s in all_permutations(n) if cycle_type(s) == shape)


def centralizer(sigma: Permutation) -> List[Permutation]:
    return [h for h in all_permutations(len(sigma)) if compose(h, sigma) == compose(sigma, h)]


@dataclass
class GroupAlgebraElement:
    """Element of Q[S_n] as a sparse map permutation → coefficient"""
    n: int
    terms: Dict[Permutation, Fraction] = field(default_factory=dict)

    @classmethod
    def of(cls, sigma: Permutation, coeff=1) -> "GroupAlgebraElement":
        return cls(len(sigma), {sigma: Fraction(coeff)})

    @classmethod
    def unit(cls, n: int) -> "GroupAlgebraElement":
        return cls.of(identity(n))

    def _check(self, other: "GroupAlgebraElement") -> None:
        if other.n != self.n:
            raise ShapeError(f"group algebra size mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        out = dict(self.terms)
        for key, value in other.terms.items():
            add_into(out, key, value)
        return GroupAlgebraElement(self.n, out)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + other.scale(-1)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        out: Dict[Permutation, Fraction] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                add_into(out, compose(a, b), x * y)
        return GroupAlgebraElement(self.n, out)

    def scale(self, c) -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.n, {k: v * c for k, v in self.terms.items() if v * c})

    def is_zero(self) -> bool:
        return not self.terms

    def class_function(self) -> Dict[Partition, Fraction]:
        """Coefficient on each class, assuming the element is central"""
        return {shape: self.terms.get(class_representative(shape), Fraction(0)) for shape in integer_partitions(self.n)}


def class_sum(shape: Partition) -> GroupAlgebraElement:
    n = sum(shape)
    return GroupAlgebraElement(n, {s: Fraction(1) for s in class_members(shape)})


def jm_element(j: int, n: int) -> GroupAlgebraElement:
    """ξ_{j;n} = Σ_{i<j} (i, j), 1-based j"""
    if not 1 <= j <= n:
        raise ShapeError(f"Jucys-Murphy index {j} out of range for n = {n}")
    return GroupAlgebraElement(n, {transposition(n, i, j - 1): Fraction(1) for i in range(j - 1)})


def elementary_jm(n: int) -> List[GroupAlgebraElement]:
    """[e_0(Ξ_n), ..., e_n(Ξ_n)] from the expansion of ∏(1 + u ξ_i)"""
    layers = [GroupAlgebraElement.unit(n)]
    for i in range(1, n + 1):
        xi = jm_element(i, n)
        nxt = [layers[0]]
        for k in range(1, len(layers) + 1):
            term = layers[k - 1] * xi
            if k < len(layers):
                term = layers[k] + term
            nxt.append(term)
        layers = nxt
    return layers


def jucys_identity_holds(n: int) -> Optional[str]:
    """None when e_k(Ξ_n) is the sum of permutations with n−k cycles for every k"""
    layers = elementary_jm(n)
    for k, value in enumerate(layers):
        expected = {s: Fraction(1) for s in all_permutations(n) if length(s) == k}
        if value.terms != expected:
            diff = set(value.terms.items()) ^ set(expected.items())
            return f"k={k}: {sorted(diff)[:1]}"
    return None


@dataclass
class SymFunc:
    """Q[ħ]-linear combination of power-sum monomials p_λ; keys are (λ, ħ-power)"""
    terms: Dict[Tuple[Partition, int], Fraction] = field(default_factory=dict)

    @classmethod
    def power_sum(cls, r: int) -> "SymFunc":
        return cls({((r,), 0): Fraction(1)})

    @classmethod
    def one(cls) -> "SymFunc":
        return cls({((), 0): Fraction(1)})

    def __add__(self, other: "SymFunc") -> "SymFunc":
        out = dict(self.terms)
        for key, value in other.terms.items():
            add_into(out, key, value)
        return SymFunc(out)

    def __sub__(self, other: "SymFunc") -> "SymFunc":
        return self + other.scale(-1)

    def __mul__(self, other: "SymFunc") -> "SymFunc":
        out: Dict[Tuple[Partition, int], Fraction] = {}
        for (la, ha), x in self.terms.items():
            for (mu, hb), y in other.terms.items():
                add_into(out, (tuple(sorted(la + mu, reverse=True)), ha + hb), x * y)
        return SymFunc(out)

    def scale(self, c, hbar_power: int = 0) -> "SymFunc":
        return SymFunc({(k, h + hbar_power): v * c for (k, h), v in self.terms.items() if v * c})

    def degree_part(self, n: int) -> "SymFunc":
        return SymFunc({k: v for k, v in self.terms.items() if sum(k[0]) == n})


def frobenius_ch(f: Dict[Partition, Fraction], hbar_power: int = 0) -> SymFunc:
    """ch(f) = Σ_λ f(λ) z_λ⁻¹ p_λ"""
    out = SymFunc()
    for shape, value in f.items():
        if value:
            out = out + SymFunc({(shape, hbar_power): Fraction(value) / centralizer_order(shape)})
    return out


def symfunc_inner(a: SymFunc, b: SymFunc) -> Fraction:
    """Hall inner product ⟨p_λ, p_μ⟩ = δ z_λ on ħ-free parts"""
    total = Fraction(0)
    for (la, ha), x in a.terms.items():
        y = b.terms.get((la, ha))
        if y and ha == 0:
            total += x * y * centralizer_order(la)
    return total


def class_inner(f: Dict[Partition, Fraction], g: Dict[Partition, Fraction], n: int) -> Fraction:
    """(1/n!) Σ_σ f(σ) g(σ) for real class functions"""
    return sum((Fraction(f.get(s, 0)) * g.get(s, 0) / centralizer_order(s) for s in integer_partitions(n)), Fraction(0))


def epsilon_hbar(n: int) -> Dict[int, GroupAlgebraElement]:
    """ε_n(ħ) = ∏(1 − ħ ξ_i) as ħ-power → group algebra element"""
    series = {0: GroupAlgebraElement.unit(n)}
    for i in range(1, n + 1):
        xi = jm_element(i, n)
        nxt: Dict[int, GroupAlgebraElement] = {}
        for k, value in series.items():
            nxt[k] = nxt.get(k, GroupAlgebraElement(n)) + value
            nxt[k + 1] = nxt.get(k + 1, GroupAlgebraElement(n)) + (value * xi).scale(-1)
        series = {k: v for k, v in nxt.items() if not v.is_zero()}
    return series


def epsilon_generating_residual(max_n: int) -> Dict[int, SymFunc]:
    """Per n ≤ max_n, ch(ε_n(ħ)) minus the z^n coefficient of exp(Σ (−ħ)^{r−1} p_r z^r / r); empty when all vanish"""
    # exponential through z^max_n, E_n = (1/n) Σ_r r S_r E_{n−r}
    exponent = {r: SymFunc.power_sum(r).scale(Fraction((-1) ** (r - 1), r), r - 1) for r in range(1, max_n + 1)}
    series = {0: SymFunc.one()}
    for n in range(1, max_n + 1):
        total = SymFunc()
        for r in range(1, n + 1):
            total = total + (exponent[r] * series[n - r]).scale(r)
        series[n] = total.scale(Fraction(1, n))
    residuals: Dict[int, SymFunc] = {}
    for n in range(1, max_n + 1):
        lhs = SymFunc()
        for k, element in epsilon_hbar(n).items():
            lhs = lhs + frobenius_ch(element.class_function(), hbar_power=k)
        diff = lhs - series[n]
        if diff.terms:
            residuals[n] = diff
    return residuals


def sample_permutations(n: int, seeds: Iterable[int]) -> List[Permutation]:
    """Deterministic pseudo-random permutations (Lehmer decoding of the seeds)"""
    out = []
    total = factorial(n)
    for seed in seeds:
        code = seed % total
        pool = list(range(n))
        perm = []
        for k in range(n, 0, -1):
            f = factorial(k - 1)
            perm.append(pool.pop(code // f))
            code %= f
        out.append(tuple(perm))
    return out
