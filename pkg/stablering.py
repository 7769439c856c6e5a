#!/usr/bin/env python3
"""
Stable ring R_X: structure constants d^ν_{ρσ} fitted across levels, the content-addressed
table store, shape checks for products of O-classes and the generator closure.
"""

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import factorial
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from sympy.utilities.iterables import multiset_partitions

from frobenius import AlgebraElement, ConsistencyError, FrobeniusAlgebra, ShapeError, add_into, format_rational, parse_rational
from fock import (
    OrbifoldFock,
    PartitionFunction,
    RationalSpan,
    first_difference,
    fock_dimension,
    matrix_rank,
    monomials_of_norm,
    orbifold_dimension,
)
from orbiring import OrbElement, invariant_product
from symgroup import GroupAlgebraElement, centralizer_order, class_sum
from reports import Case, canonical_json, sha256_hex

logger = logging.getLogger(__name__)

STABILITY_THEOREM = "p_rho(n) o p_sigma(n) = sum_nu d^nu_{rho sigma} p_nu(n) with n-independent constants, |nu| <= |rho| + |sigma|"
UNIVERSALITY_THEOREM = "O^{k_1}(a_1,n) o ... o O^{k_s}(a_s,n) expands in the universal shapes with n-independent coefficients"
GENERATORS_THEOREM = "the classes O^i(a,n) (and separately P_i(a,n)), 0 <= i < n, generate H*_orb(X^n/S_n)"

Coordinates = Dict[PartitionFunction, Fraction]


def falling(x: int, j: int) -> int:
    """(x)_j = x(x−1)···(x−j+1)"""
    value = 1
    for i in range(j):
        value *= x - i
    return value


def expand_constants(constants: Coordinates, n: int, unit: int) -> Coordinates:
    """Reduced coordinates of Σ_ν d^ν p_ν(n), using p_{ν'+1^j}(n) = (n−‖ν'‖)_j p_{ν'}(n)"""
    out: Coordinates = {}
    for nu, d in constants.items():
        core, j = nu.reduced(unit)
        if core.norm > n:
            continue
        add_into(out, core, d * falling(n - core.norm, j))
    return out


@dataclass
class StableFit:
    constants: Coordinates
    window: Tuple[int, ...]
    residual: Optional[str] = None

    @property
    def stable(self) -> bool:
        return self.residual is None


def fit_stable_expansion(compute_level: Callable[[int], Coordinates], bound: int, unit: int,
                         zero_below: int = 0, confirm: int = 2) -> StableFit:
    """
    Recover n-independent constants from reduced coordinates on levels 0..bound+confirm.

    Each reduced coordinate c_ν'(n) is Σ_j d^{ν'+1^j}(n−‖ν'‖)_j, a polynomial of degree
    ≤ bound−‖ν'‖ in the falling-factorial basis; its coefficients are the forward differences
    on levels ‖ν'‖..bound divided by j!. Levels below zero_below are known to vanish.
    """
    top = bound + confirm
    levels: Dict[int, Coordinates] = {}
    for n in range(top + 1):
        levels[n] = compute_level(n) if n >= zero_below else {}
    window = tuple(range(bound, top + 1))

    cores = set()
    for n, coords in levels.items():
        for core in coords:
            if core.norm > bound:
                return StableFit({}, window, f"support: {core.parts} appears at n={n} beyond norm {bound}")
            cores.add(core)

    constants: Coordinates = {}
    for core in sorted(cores):
        base = core.norm
        values = [levels[n].get(core, Fraction(0)) for n in range(base, bound + 1)]
        for j in range(len(values)):
            if values[0]:
                constants[core.with_unit_parts(unit, j)] = values[0] / factorial(j)
            values = [b - a for a, b in zip(values, values[1:])]

    for n in range(zero_below, top + 1):
        residual = first_difference(levels[n], expand_constants(constants, n, unit))
        if residual:
            return StableFit(constants, window, f"n={n}: {residual}")
    return StableFit(constants, window)


# ------------------------------------------------------------------ table


def parity_of(algebra: FrobeniusAlgebra, rho: PartitionFunction) -> int:
    return sum(algebra.parity(c) for c, _ in rho.parts) % 2


@dataclass
class StableEntry:
    rho: PartitionFunction
    sigma: PartitionFunction
    constants: Coordinates
    window: Tuple[int, ...]
    stable: bool
    residual: Optional[str] = None

    def to_dict(self, algebra: FrobeniusAlgebra) -> Dict[str, Any]:
        return {
            "rho": self.rho.to_mapping(algebra),
            "sigma": self.sigma.to_mapping(algebra),
            "constants": [[nu.to_mapping(algebra), format_rational(c)] for nu, c in sorted(self.constants.items())],
            "window": list(self.window),
            "stable": self.stable,
            "residual": self.residual,
        }

    @classmethod
    def from_dict(cls, algebra: FrobeniusAlgebra, data: Dict[str, Any]) -> "StableEntry":
        constants = {PartitionFunction.from_mapping(algebra, nu): parse_rational(c) for nu, c in data["constants"]}
        return cls(
            PartitionFunction.from_mapping(algebra, data["rho"]),
            PartitionFunction.from_mapping(algebra, data["sigma"]),
            constants,
            tuple(data["window"]),
            bool(data["stable"]),
            data.get("residual"),
        )


class StableStore:
    """One canonical JSON file per (algebra sha256, ρ, σ); an existing key only accepts identical bytes"""

    def __init__(self, root: Union[str, Path], algebra: FrobeniusAlgebra):
        self.root = Path(root)
        self.algebra = algebra
        self.fingerprint = algebra.fingerprint()
        self.root.mkdir(parents=True, exist_ok=True)

    def key(self, rho: PartitionFunction, sigma: PartitionFunction) -> str:
        return sha256_hex(canonical_json({
            "algebra": self.fingerprint,
            "rho": rho.to_mapping(self.algebra),
            "sigma": sigma.to_mapping(self.algebra),
        }))

    def path(self, rho: PartitionFunction, sigma: PartitionFunction) -> Path:
        return self.root / f"{self.key(rho, sigma)}.json"

    def get(self, rho: PartitionFunction, sigma: PartitionFunction) -> Optional[StableEntry]:
        path = self.path(rho, sigma)
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        if data.get("algebra") != self.fingerprint:
            raise ConsistencyError(f"store file {path.name} belongs to another algebra")
        return StableEntry.from_dict(self.algebra, data)

    def put(self, entry: StableEntry) -> Path:
        path = self.path(entry.rho, entry.sigma)
        text = canonical_json({"algebra": self.fingerprint, **entry.to_dict(self.algebra)}) + "\n"
        if path.exists():
            if path.read_text(encoding="utf-8") != text:
                raise ConsistencyError(f"store key {path.name} already holds a different entry")
            return path
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
        logger.debug(f"💾 stored {entry.rho.label(self.algebra)} | {entry.sigma.label(self.algebra)}")
        return path


@dataclass
class StableTable:
    algebra: FrobeniusAlgebra
    entries: Dict[Tuple[PartitionFunction, PartitionFunction], StableEntry] = field(default_factory=dict)

    @property
    def class_order(self) -> List[str]:
        return [b.label for b in self.algebra.basis]

    def rows(self) -> List[List[str]]:
        algebra = self.algebra
        out = []
        for (rho, sigma), entry in sorted(self.entries.items()):
            for nu, c in sorted(entry.constants.items()):
                out.append([rho.label(algebra), sigma.label(algebra), nu.label(algebra), format_rational(c)])
        return out

    def to_dict(self) -> Dict[str, Any]:
        return {
            "algebra": self.algebra.name,
            "fingerprint": self.algebra.fingerprint(),
            "class_order": self.class_order,
            "entries": [e.to_dict(self.algebra) for _, e in sorted(self.entries.items())],
        }

    def multiply(self, a: Coordinates, b: Coordinates) -> Optional[Coordinates]:
        """Product in R_X of two combinations of p_ν, None when a needed entry is missing"""
        out: Coordinates = {}
        for rho, x in a.items():
            for sigma, y in b.items():
                entry = self.entries.get((rho, sigma))
                if entry is None:
                    return None
                for nu, d in entry.constants.items():
                    add_into(out, nu, x * y * d)
        return out


class StableTabulator:
    """Computes and memoizes entries, reading and writing an optional StableStore"""

    def __init__(self, algebra: FrobeniusAlgebra, t: Any = 1, store: Optional[StableStore] = None, confirm: int = 2):
        self.algebra = algebra
        self.t = Fraction(t)
        self.store = store
        self.confirm = confirm
        self.fock = OrbifoldFock(algebra)
        self._entries: Dict[Tuple[PartitionFunction, PartitionFunction], StableEntry] = {}

    def level_product(self, rho: PartitionFunction, sigma: PartitionFunction, n: int) -> Coordinates:
        """Reduced coordinates of p_ρ(n) ∘_t p_σ(n)"""
        if n == 0:
            return {PartitionFunction(): Fraction(1)} if not rho.parts and not sigma.parts else {}
        x = self.fock.p_rho(rho, n)
        y = self.fock.p_rho(sigma, n)
        if x.is_zero() or y.is_zero():
            return {}
        return self.fock.coordinates(invariant_product(x, y, self.t))

    def structure_constants(self, rho: PartitionFunction, sigma: PartitionFunction) -> StableEntry:
        key = (rho, sigma)
        cached = self._entries.get(key)
        if cached is not None:
            return cached
        if self.store is not None:
            cached = self.store.get(rho, sigma)
        if cached is None:
            rho.validate(self.algebra)
            sigma.validate(self.algebra)
            bound = rho.norm + sigma.norm
            fit = fit_stable_expansion(
                lambda n: self.level_product(rho, sigma, n),
                bound,
                self.algebra.unit,
                zero_below=max(rho.norm, sigma.norm),
                confirm=self.confirm,
            )
            cached = StableEntry(rho, sigma, fit.constants, fit.window, fit.stable, fit.residual)
            if not fit.stable:
                logger.warning(f"⚠️ unstable entry {rho.label(self.algebra)} | {sigma.label(self.algebra)}: {fit.residual}")
            if self.store is not None:
                self.store.put(cached)
        self._entries[key] = cached
        return cached

    def pairs(self, max_norm: int) -> List[Tuple[PartitionFunction, PartitionFunction]]:
        by_norm = {k: [PartitionFunction(m) for m in monomials_of_norm(self.algebra, k)] for k in range(max_norm + 1)}
        out = []
        for a in range(max_norm + 1):
            for b in range(max_norm - a + 1):
                out.extend((rho, sigma) for rho in by_norm[a] for sigma in by_norm[b])
        return out

    def tabulate(self, max_norm: int) -> StableTable:
        table = StableTable(self.algebra)
        pairs = self.pairs(max_norm)
        logger.info(f"📊 Tabulating {len(pairs)} stable entries over {self.algebra.name} up to norm {max_norm}")
        for rho, sigma in pairs:
            table.entries[(rho, sigma)] = self.structure_constants(rho, sigma)
        return table

    def table(self) -> StableTable:
        return StableTable(self.algebra, dict(self._entries))


def support_residual(entry: StableEntry) -> Optional[str]:
    bound = entry.rho.norm + entry.sigma.norm
    for nu in entry.constants:
        if nu.norm > bound:
            return f"{nu.parts} exceeds norm {bound}"
    return None


def point_oracle_residual(entry: StableEntry, n: int) -> Optional[str]:
    """Compare with brute-force class sums in Q[S_n], where p_ν(n) = z_ν·C_{ν∪1^{n−‖ν‖}} for reduced ν"""
    def element(rho: PartitionFunction) -> GroupAlgebraElement:
        core, j = rho.reduced(0)
        shape = tuple(sorted((r for _, r in core.parts), reverse=True))
        if core.norm > n:
            return GroupAlgebraElement(n)
        full = shape + (1,) * (n - core.norm)
        return class_sum(full).scale(centralizer_order(shape) * falling(n - core.norm, j))

    actual = (element(entry.rho) * element(entry.sigma)).class_function()
    predicted = expand_constants(entry.constants, n, 0)
    expected: Dict[Tuple[int, ...], Fraction] = {}
    for core, c in predicted.items():
        shape = tuple(sorted((r for _, r in core.parts), reverse=True))
        add_into(expected, shape + (1,) * (n - core.norm), c * centralizer_order(shape))
    actual = {shape: v for shape, v in actual.items() if v}
    return first_difference(actual, expected)


def supercommutativity_residual(algebra: FrobeniusAlgebra, table: StableTable) -> Optional[str]:
    for (rho, sigma), entry in sorted(table.entries.items()):
        other = table.entries.get((sigma, rho))
        if other is None:
            continue
        sign = (-1) ** (parity_of(algebra, rho) * parity_of(algebra, sigma))
        residual = first_difference(entry.constants, {nu: sign * c for nu, c in other.constants.items()})
        if residual:
            return f"{rho.label(algebra)} | {sigma.label(algebra)}: {residual}"
    return None


def associativity_residual(algebra: FrobeniusAlgebra, table: StableTable, max_norm: int) -> Optional[str]:
    """(p_ρ p_σ) p_τ = p_ρ (p_σ p_τ) on every triple whose products stay inside the table"""
    elements = sorted({rho for rho, _ in table.entries})
    checked = 0
    for rho in elements:
        for sigma in elements:
            for tau in elements:
                if rho.norm + sigma.norm + tau.norm > max_norm:
                    continue
                first = table.multiply({rho: Fraction(1)}, {sigma: Fraction(1)})
                second = table.multiply({sigma: Fraction(1)}, {tau: Fraction(1)})
                if first is None or second is None:
                    continue
                left = table.multiply(first, {tau: Fraction(1)})
                right = table.multiply({rho: Fraction(1)}, second)
                if left is None or right is None:
                    continue
                checked += 1
                residual = first_difference(left, right)
                if residual:
                    return f"({rho.label(algebra)}, {sigma.label(algebra)}, {tau.label(algebra)}): {residual}"
    logger.debug(f"associativity checked on {checked} triples")
    return None


def freeness_residual(algebra: FrobeniusAlgebra, table: StableTable, max_norm: int) -> Optional[str]:
    """Monomials in the single-row even generators p_{(r),c} are linearly independent up to max_norm"""
    generators = [PartitionFunction(((c, r),)) for c in range(algebra.dim) if not algebra.parity(c) for r in range(1, max_norm + 1)]
    span = RationalSpan()
    frontier: List[Tuple[Tuple[PartitionFunction, ...], Coordinates]] = [((), {PartitionFunction(): Fraction(1)})]
    span.insert(frontier[0][1])
    values = [frontier[0][1]]
    count = 1
    while frontier:
        nxt = []
        for word, value in frontier:
            for g in generators:
                if word and g < word[-1]:
                    continue
                if sum(p.norm for p in word) + g.norm > max_norm:
                    continue
                prod = table.multiply(value, {g: Fraction(1)})
                if prod is None:
                    continue
                count += 1
                if not span.insert(prod):
                    labels = " ".join(p.label(algebra) for p in word + (g,))
                    return f"relation among generators: {labels}"
                nxt.append((word + (g,), prod))
                values.append(prod)
        frontier = nxt
    rank = matrix_rank(values)
    if rank != len(values):
        return f"sympy rank {rank} of {len(values)} generator monomials"
    logger.debug(f"freeness proxy: {count} generator monomials independent")
    return None


# ------------------------------------------------------------------ O-products


@dataclass
class OProductExpansion:
    ks: Tuple[int, ...]
    n: int
    coordinates: Coordinates
    violations: List[str] = field(default_factory=list)


def _block_feasible(groups: List[Tuple[int, int]], block_ks: List[int], total_k: int, point: bool) -> bool:
    """Choose r_i (ε_i ∈ {1, e}, or m_i − 2r_i factors for a point) satisfying the degree equation"""
    base = 0
    rmax = 0
    for (size, parts_sum), kb in zip(groups, block_ks):
        room = 2 + kb - size
        if room < 0:
            return False
        base += size - 2 + parts_sum
        rmax += room // 2 if point else min(1, room)
    need = total_k - base
    if point:
        return need >= 0 and need % 2 == 0 and need // 2 <= rmax
    return 0 <= need <= rmax


def has_shape_witness(rho: PartitionFunction, n: int, ks: Sequence[int], unit: int, point: bool) -> bool:
    """Some grouping of the factors of p_ρ(n) matches a term of the universal expansion"""
    s = len(ks)
    total_k = sum(ks)
    cap = sum(k + 1 for k in ks)
    spare = n - rho.norm
    parts = list(rho.parts)
    for kept in range(min(spare, cap - rho.norm) + 1):
        factors = parts + [(unit, 1)] * kept
        for blocks in multiset_partitions(list(range(s))):
            block_ks = [sum(ks[j] for j in b) for b in blocks]
            block_caps = [sum(ks[j] + 1 for j in b) for b in blocks]
            for assign in cartesian(range(len(blocks)), repeat=len(factors)):
                sizes = [0] * len(blocks)
                sums = [0] * len(blocks)
                for (_, r), b in zip(factors, assign):
                    sizes[b] += 1
                    sums[b] += r
                if any(sums[b] > block_caps[b] for b in range(len(blocks))):
                    continue
                if _block_feasible(list(zip(sizes, sums)), block_ks, total_k, point):
                    return True
    return False


def o_product(classes, ks: Sequence[int], alphas: Sequence[AlgebraElement], n: int) -> OrbElement:
    if len(ks) != len(alphas) or not ks:
        raise ShapeError("k-list and class list must be non-empty and of equal length")
    value = classes.O(ks[0], alphas[0], n)
    for k, alpha in zip(ks[1:], alphas[1:]):
        value = invariant_product(value, classes.O(k, alpha, n), classes.t)
    return value


def expand_O_product(classes, ks: Sequence[int], alphas: Sequence[AlgebraElement], n: int,
                     fock: Optional[OrbifoldFock] = None) -> OProductExpansion:
    """O^{k1}(α1,n) ∘ ··· ∘ O^{ks}(αs,n) in reduced coordinates, with every shape violation listed"""
    algebra = classes.algebra
    fock = fock or OrbifoldFock(algebra)
    coords = fock.coordinates(o_product(classes, ks, alphas, n)) if n else {}
    point = algebra.d == 0
    expansion = OProductExpansion(tuple(ks), n, coords)
    for rho, c in sorted(coords.items()):
        if not has_shape_witness(rho, n, ks, algebra.unit, point):
            expansion.violations.append(f"{rho.label(algebra)} = {format_rational(c)} at n={n}")
    return expansion


def o_product_fit(classes, ks: Sequence[int], alphas: Sequence[AlgebraElement], confirm: int = 2) -> StableFit:
    """n-independence of the expansion coefficients, fitted up to Σ(k_i+1) and confirmed beyond"""
    fock = OrbifoldFock(classes.algebra)
    bound = sum(k + 1 for k in ks)
    return fit_stable_expansion(
        lambda n: fock.coordinates(o_product(classes, ks, alphas, n)),
        bound,
        classes.algebra.unit,
        zero_below=1,
        confirm=confirm,
    )


# ------------------------------------------------------------------ generators


@dataclass
class GeneratorReport:
    family: str
    n: int
    target: int
    rank: int
    products: int
    confirmed_rank: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.rank == self.target and self.confirmed_rank in (None, self.rank)


def generator_classes(classes, family: str, n: int, fock: Optional[OrbifoldFock] = None) -> List[OrbElement]:
    algebra = classes.algebra
    out = []
    for i in range(n):
        for c in range(algebra.dim):
            alpha = {c: Fraction(1)}
            if family == "O":
                out.append(classes.O(i, alpha, n))
            elif family == "P":
                out.append(classes.P(i, alpha, n, fock))
            else:
                raise ShapeError(f"unknown generator family {family!r}")
    return out


def verify_generators(classes, n: int, family: str = "O") -> GeneratorReport:
    """Close unit + generators under ∘ until the span reaches dim H*_orb(X^n/S_n)"""
    algebra = classes.algebra
    target = fock_dimension(algebra, n)
    fock = OrbifoldFock(algebra)
    generators = [g for g in generator_classes(classes, family, n, fock) if not g.is_zero()]
    span = RationalSpan()
    basis: List[OrbElement] = []
    for x in [OrbElement.unit(algebra, n)] + generators:
        if span.insert(x.flat()):
            basis.append(x)
    products = 0
    queue = list(basis)
    while queue and span.rank < target:
        x = queue.pop(0)
        for g in generators:
            y = invariant_product(g, x, classes.t)
            products += 1
            if span.insert(y.flat()):
                basis.append(y)
                queue.append(y)
                if span.rank == target:
                    break
    # sympy rank of the kept elements
    report = GeneratorReport(family, n, target, span.rank, products, matrix_rank([b.flat() for b in basis]))
    logger.info(f"🧮 {family}-classes at n={n}: rank {span.rank}/{target} after {products} products")
    return report


# ------------------------------------------------------------------ suites


def stability_cases(tabulator: StableTabulator, max_norm: int, oracle_max_n: int = 0) -> List[Case]:
    algebra = tabulator.algebra
    cases = []
    pairs = tabulator.pairs(max_norm)
    for rho, sigma in pairs:
        label = f"{rho.label(algebra)}|{sigma.label(algebra)}"

        def check(rho=rho, sigma=sigma) -> Optional[str]:
            entry = tabulator.structure_constants(rho, sigma)
            return entry.residual or support_residual(entry)
        cases.append(Case(f"stability/entry/{label}", check))

        if algebra.dim == 1 and algebra.d == 0:
            for n in range(max(rho.norm + sigma.norm, 1), oracle_max_n + 1):
                def oracle(rho=rho, sigma=sigma, n=n) -> Optional[str]:
                    return point_oracle_residual(tabulator.structure_constants(rho, sigma), n)
                cases.append(Case(f"stability/oracle/n={n}/{label}", oracle))

    def table() -> StableTable:
        for rho, sigma in pairs:
            tabulator.structure_constants(rho, sigma)
        return tabulator.table()

    cases.append(Case("stability/table/supercommutative", lambda: supercommutativity_residual(algebra, table())))
    cases.append(Case("stability/table/associative", lambda: associativity_residual(algebra, table(), max_norm)))
    cases.append(Case("stability/table/free-even-generators", lambda: freeness_residual(algebra, table(), max_norm)))
    return cases


def universality_cases(classes, max_k: int, max_n: int, max_s: int = 2) -> List[Case]:
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    cases = []
    k_lists: List[Tuple[int, ...]] = [(k,) for k in range(max_k + 1)]
    if max_s >= 2:
        k_lists += [(a, b) for a in range(max_k + 1) for b in range(a, max_k + 1)]
    for ks in k_lists:
        for labels in cartesian(range(algebra.dim), repeat=len(ks)):
            alphas = [{c: Fraction(1)} for c in labels]
            name = ",".join(f"O^{k}({algebra.basis[c].label})" for k, c in zip(ks, labels))
            for n in range(1, max_n + 1):
                def shape(ks=ks, alphas=alphas, n=n) -> Optional[str]:
                    expansion = expand_O_product(classes, ks, alphas, n, fock)
                    return "; ".join(expansion.violations) or None
                cases.append(Case(f"universality/shape/{name}/n={n}", shape))
            if sum(k + 1 for k in ks) + 2 <= max_n:
                def independence(ks=ks, alphas=alphas) -> Optional[str]:
                    return o_product_fit(classes, ks, alphas).residual
                cases.append(Case(f"universality/n-independent/{name}", independence))
    return cases


def generators_cases(classes, max_n: int) -> List[Case]:
    algebra = classes.algebra
    cases = []
    for n in range(1, max_n + 1):
        def dimension(n=n) -> Optional[str]:
            count, trace = fock_dimension(algebra, n), orbifold_dimension(algebra, n)
            return None if count == trace else f"partition count {count} != trace formula {trace}"
        cases.append(Case(f"generators/dimension/n={n}", dimension))
        for family in ("O", "P"):
            def check(n=n, family=family) -> Optional[str]:
                report = verify_generators(classes, n, family)
                return None if report.passed else f"rank {report.rank} (sympy {report.confirmed_rank}) of {report.target} after {report.products} products"
            cases.append(Case(f"generators/{family}/n={n}", check))
    return cases
