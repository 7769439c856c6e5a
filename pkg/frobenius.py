#!/usr/bin/env python3
"""Graded Frobenius algebras: exact model of H*(X) with Kunneth products and diagonal transfers"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

logger = logging.getLogger(__name__)

AlgebraElement = Dict[int, Fraction]
Tensor = Dict[Tuple[int, ...], Fraction]
Scalar = Union[int, Fraction]


class EngineError(Exception):
    """Base class for every error raised by the engine"""


class AlgebraError(EngineError, ValueError):
    """Invalid algebra definition or violated algebra invariant"""


class ShapeError(EngineError, ValueError):
    """Arity, size, level or index mismatch"""


class ConsistencyError(EngineError):
    """An internal identity failed (defect, reconstruction, stability, shape)"""


class ConfigError(EngineError, ValueError):
    """Bad suite configuration or refused request"""


def parse_rational(value: Any) -> Fraction:
    """Parse "num/den", an int or a Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise AlgebraError(f"cannot read rational from {value!r}")


def format_rational(value: Scalar) -> str:
    """Exact "num/den" rendering used in every output file"""
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def permutation_sign(parities: Sequence[int], positions: Sequence[int]) -> int:
    """Koszul sign of moving factor j to slot positions[j]; only odd pairs count"""
    odd = [positions[j] for j, p in enumerate(parities) if p]
    inversions = 0
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if odd[a] > odd[b]:
                inversions += 1
    return -1 if inversions % 2 else 1


def add_into(target: Dict[Any, Fraction], key: Any, value: Fraction) -> None:
    """Accumulate value at key, dropping keys that cancel to zero"""
    total = target.get(key, 0) + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def expand_slots(slots: Sequence[Dict[int, Fraction]]) -> Iterable[Tuple[Tuple[int, ...], Fraction]]:
    """Expand a tuple of algebra elements into pure-tensor basis terms"""
    if any(not s for s in slots):
        return
    for choice in product(*(list(s.items()) for s in slots)):
        coeff = Fraction(1)
        for _, c in choice:
            coeff *= c
        yield tuple(i for i, _ in choice), coeff


@dataclass(frozen=True)
class BasisClass:
    label: str
    degree: int

    @property
    def parity(self) -> int:
        return self.degree % 2


@dataclass
class TensorElement:
    """Sparse element of A^{⊗arity}; keys are tuples of basis indices"""
    arity: int
    terms: Tensor = field(default_factory=dict)

    def __post_init__(self):
        for key in self.terms:
            if len(key) != self.arity:
                raise ShapeError(f"tensor key {key} does not have arity {self.arity}")
        self.terms = {k: Fraction(v) for k, v in self.terms.items() if v}

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if other.arity != self.arity:
            raise ShapeError("arity mismatch in tensor sum")
        out = dict(self.terms)
        for key, value in other.terms.items():
            add_into(out, key, value)
        return TensorElement(self.arity, out)

    def scale(self, c: Scalar) -> "TensorElement":
        return TensorElement(self.arity, {k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms


class FrobeniusAlgebra:
    """Finite-dimensional graded super-commutative Frobenius algebra over Q.

    Immutable after construction: the constructor validates every invariant,
    derives the Gram inverse and the Euler class, and only memo caches of
    pure functions are written afterwards.
    """

    def __init__(
        self,
        name: str,
        d: int,
        basis: List[BasisClass],
        unit: int,
        mult: Dict[Tuple[int, int], AlgebraElement],
        integral: List[Fraction],
        euler: Optional[AlgebraElement] = None,
    ):
        if not name:
            raise AlgebraError("algebra name is required")
        if d < 0 or (d % 2 and d != 0):
            raise AlgebraError(f"complex dimension must be even or 0, got {d}")
        if not 0 <= unit < len(basis):
            raise AlgebraError(f"unit index {unit} out of range")
        if len(integral) != len(basis):
            raise AlgebraError("integral must have one entry per basis class")
        self.name = name
        self.d = d
        self.basis = list(basis)
        self.unit = unit
        self.integral = [Fraction(v) for v in integral]
        self._mult = self._complete_table(mult)
        self._tau_cache: Dict[Tuple[int, int], Tensor] = {}
        self._sequence_cache: Dict[Tuple[int, ...], AlgebraElement] = {}
        self._transfer_cache: Dict[Tuple[int, int, int], Tensor] = {}
        self._label_index = {b.label: i for i, b in enumerate(self.basis)}
        if len(self._label_index) != len(self.basis):
            raise AlgebraError("basis labels must be unique")
        self._validate()
        self.gram = [[self._basis_pairing(i, j) for j in range(self.dim)] for i in range(self.dim)]
        self.gram_inverse = self._invert_gram()
        derived = self.multiply_tensor(self.tau_push_terms(2, self.unit_element()))
        if euler is not None and {k: v for k, v in euler.items() if v} != derived:
            raise AlgebraError(
                f"supplied Euler class {self.format_element(euler)} differs from derived {self.format_element(derived)}"
            )
        self.euler = derived
        if d > 0 and self.multiply(self.euler, self.euler):
            raise AlgebraError("e·e must vanish when d > 0")
        logger.debug(f"algebra {name}: dim={self.dim} d={d} euler={self.format_element(self.euler)}")

    # ------------------------------------------------------------------ basics

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def has_odd(self) -> bool:
        return any(b.parity for b in self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i].degree

    def parity(self, i: int) -> int:
        return self.basis[i].parity

    def index(self, label: Union[str, int]) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.dim:
                raise ShapeError(f"basis index {label} out of range")
            return label
        if label not in self._label_index:
            raise ShapeError(f"unknown basis label {label!r} in algebra {self.name}")
        return self._label_index[label]

    def element(self, spec: Union[str, int, Dict[Any, Any]]) -> AlgebraElement:
        """Algebra element from a label, an index or a {label: coeff} map"""
        if isinstance(spec, dict):
            out: AlgebraElement = {}
            for key, value in spec.items():
                add_into(out, self.index(key), parse_rational(value))
            return out
        return {self.index(spec): Fraction(1)}

    def unit_element(self) -> AlgebraElement:
        return {self.unit: Fraction(1)}

    def element_degree(self, x: AlgebraElement) -> Optional[int]:
        """Degree of a homogeneous element, None for zero or mixed elements"""
        degrees = {self.degree(i) for i in x}
        return degrees.pop() if len(degrees) == 1 else None

    def element_parity(self, x: AlgebraElement) -> Optional[int]:
        parities = {self.parity(i) for i in x}
        return parities.pop() if len(parities) == 1 else None

    def format_element(self, x: AlgebraElement) -> str:
        if not x:
            return "0"
        return " + ".join(f"{format_rational(c)}*{self.basis[i].label}" for i, c in sorted(x.items()))

    # ------------------------------------------------------------ construction

    def _complete_table(self, mult: Dict[Tuple[int, int], AlgebraElement]) -> Dict[Tuple[int, int], AlgebraElement]:
        table: Dict[Tuple[int, int], AlgebraElement] = {}
        for (i, j), value in mult.items():
            table[(i, j)] = {k: Fraction(c) for k, c in value.items() if c}
        for (i, j), value in list(table.items()):
            if (j, i) not in table:
                sign = -1 if self.basis[i].parity and self.basis[j].parity else 1
                table[(j, i)] = {k: sign * c for k, c in value.items()}
        for i in range(len(self.basis)):
            table.setdefault((self.unit, i), {i: Fraction(1)})
            table.setdefault((i, self.unit), {i: Fraction(1)})
        return {key: value for key, value in table.items() if value}

    def _validate(self) -> None:
        top = 2 * self.d
        for b in self.basis:
            if not 0 <= b.degree <= top:
                raise AlgebraError(f"degree of {b.label} must lie in [0, {top}]")
        if self.degree(self.unit) != 0:
            raise AlgebraError("unit must have degree 0")
        for (i, j), value in self._mult.items():
            for k in value:
                if self.degree(k) != self.degree(i) + self.degree(j):
                    raise AlgebraError(f"grading violated by {self.basis[i].label}·{self.basis[j].label}")
        for i in range(self.dim):
            if self.integral[i] and self.degree(i) != top:
                raise AlgebraError(f"integral of {self.basis[i].label} must vanish off degree {top}")
            if self.basis_product(self.unit, i) != {i: 1} or self.basis_product(i, self.unit) != {i: 1}:
                raise AlgebraError("unit law violated")
            for j in range(self.dim):
                sign = -1 if self.parity(i) and self.parity(j) else 1
                flipped = {k: sign * c for k, c in self.basis_product(j, i).items()}
                if self.basis_product(i, j) != flipped:
                    raise AlgebraError(f"super-commutativity violated for ({self.basis[i].label}, {self.basis[j].label})")
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.basis_product(i, j)
                for k in range(self.dim):
                    left = self.multiply(ij, {k: Fraction(1)})
                    right = self.multiply({i: Fraction(1)}, self.basis_product(j, k))
                    if left != right:
                        raise AlgebraError(
                            f"associativity violated on ({self.basis[i].label}, {self.basis[j].label}, {self.basis[k].label})"
                        )

    def _basis_pairing(self, i: int, j: int) -> Fraction:
        return self.integrate(self.basis_product(i, j))

    def _invert_gram(self) -> List[List[Fraction]]:
        matrix = sympy.Matrix(self.dim, self.dim, lambda i, j: sympy.Rational(self.gram[i][j].numerator, self.gram[i][j].denominator))
        if matrix.det() == 0:
            raise AlgebraError(f"pairing of algebra {self.name} is degenerate")
        inverse = matrix.inv()
        return [[Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(self.dim)] for i in range(self.dim)]

    # -------------------------------------------------------------- operations

    def basis_product(self, i: int, j: int) -> AlgebraElement:
        return self._mult.get((i, j), {})

    def multiply(self, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
        """Bilinear extension of the multiplication table"""
        out: AlgebraElement = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.basis_product(i, j).items():
                    add_into(out, k, a * b * c)
        return out

    def multiply_sequence(self, indices: Tuple[int, ...]) -> AlgebraElement:
        """Ordered product b_{i1}···b_{ik} (unit for the empty tuple), memoized"""
        cached = self._sequence_cache.get(indices)
        if cached is not None:
            return cached
        value = self.unit_element()
        for i in indices:
            value = self.multiply(value, {i: Fraction(1)})
            if not value:
                break
        self._sequence_cache[indices] = value
        return value

    def integrate(self, x: AlgebraElement) -> Fraction:
        return sum((c * self.integral[i] for i, c in x.items()), Fraction(0))

    def pairing(self, x: AlgebraElement, y: AlgebraElement) -> Fraction:
        """(x, y) = ∫ x·y"""
        return self.integrate(self.multiply(x, y))

    def dual_element(self, i: int) -> AlgebraElement:
        """Left dual b^i with (b^i, b_j) = δ_ij"""
        return {j: c for j, c in enumerate(self.gram_inverse[i]) if c}

    def euler_class(self) -> AlgebraElement:
        return dict(self.euler)

    def euler_power(self, g: int) -> AlgebraElement:
        value = self.unit_element()
        for _ in range(g):
            value = self.multiply(value, self.euler)
        return value

    def tau_push_basis(self, k: int, a: int) -> Tensor:
        """τ_{k*} of the basis class b_a as raw tensor terms, cached per (k, a)"""
        if k < 1:
            raise ShapeError("tau_push needs k >= 1")
        key = (k, a)
        cached = self._tau_cache.get(key)
        if cached is not None:
            return cached
        if k == 1:
            terms: Tensor = {(a,): Fraction(1)}
        else:
            terms = {}
            target = 2 * self.d - self.degree(a)
            for J in self._tuples_of_degree(k, target):
                value = self.integrate(self.multiply({a: Fraction(1)}, self.multiply_sequence(J)))
                if not value:
                    continue
                if self.has_odd:
                    odd_seen = 0
                    flips = 0
                    for idx in J:
                        if self.parity(idx):
                            flips += odd_seen
                            odd_seen += 1
                    if flips % 2:
                        value = -value
                rows = [{i: h for i, h in enumerate(self.gram_inverse[j]) if h} for j in J]
                for I, coeff in expand_slots(rows):
                    add_into(terms, I, value * coeff)
        self._tau_cache[key] = terms
        return terms

    def transfer(self, k: int, g: int, a: int) -> Tensor:
        """τ_{k*}(b_a·e^g), the block map of the orbifold product"""
        key = (k, g, a)
        cached = self._transfer_cache.get(key)
        if cached is None:
            cached = self.tau_push_terms(k, self.multiply({a: Fraction(1)}, self.euler_power(g)))
            self._transfer_cache[key] = cached
        return cached

    def tau_push_terms(self, k: int, alpha: AlgebraElement) -> Tensor:
        out: Tensor = {}
        for a, c in alpha.items():
            for key, value in self.tau_push_basis(k, a).items():
                add_into(out, key, c * value)
        return out

    def tau_push(self, k: int, alpha: AlgebraElement) -> TensorElement:
        """Diagonal transfer τ_{k*}α, adjoint to k-fold multiplication"""
        return TensorElement(k, self.tau_push_terms(k, alpha))

    def multiply_tensor(self, terms: Tensor) -> AlgebraElement:
        """k-fold multiplication m_k: A^{⊗k} → A"""
        out: AlgebraElement = {}
        for key, c in terms.items():
            for i, v in self.multiply_sequence(key).items():
                add_into(out, i, c * v)
        return out

    def tensor_pairing(self, u: Tensor, v: Tensor) -> Fraction:
        """∫_{X^k} u·v with Koszul signs"""
        total = Fraction(0)
        for key, c in self.kunneth_terms(u, v).items():
            value = c
            for i in key:
                value *= self.integral[i]
                if not value:
                    break
            total += value
        return total

    def kunneth_terms(self, u: Tensor, v: Tensor) -> Tensor:
        """Componentwise product on raw tensors: (a⊗b)(c⊗d) = (−1)^{|b||c|} ac⊗bd"""
        out: Tensor = {}
        for I, cu in u.items():
            for J, cv in v.items():
                if len(I) != len(J):
                    raise ShapeError("arity mismatch in Kunneth product")
                sign = 1
                if self.has_odd:
                    odd_right = 0
                    flips = 0
                    for i_idx, j_idx in zip(I, J):
                        if self.parity(i_idx):
                            flips += odd_right
                        if self.parity(j_idx):
                            odd_right += 1
                    sign = -1 if flips % 2 else 1
                slots = [self.basis_product(i, j) for i, j in zip(I, J)]
                for key, coeff in expand_slots(slots):
                    add_into(out, key, sign * cu * cv * coeff)
        return out

    def kunneth_mult(self, u: TensorElement, v: TensorElement) -> TensorElement:
        if u.arity != v.arity:
            raise ShapeError(f"arity mismatch: {u.arity} vs {v.arity}")
        return TensorElement(u.arity, self.kunneth_terms(u.terms, v.terms))

    def _tuples_of_degree(self, k: int, total: int) -> Iterable[Tuple[int, ...]]:
        by_degree: Dict[int, List[int]] = {}
        for i, b in enumerate(self.basis):
            by_degree.setdefault(b.degree, []).append(i)
        degrees = sorted(by_degree)

        def walk(slots: int, remaining: int) -> Iterable[Tuple[int, ...]]:
            if slots == 0:
                if remaining == 0:
                    yield ()
                return
            for deg in degrees:
                if deg > remaining:
                    break
                for i in by_degree[deg]:
                    for rest in walk(slots - 1, remaining - deg):
                        yield (i,) + rest

        return walk(k, total)

    # ---------------------------------------------------------- serialization

    def to_dict(self) -> Dict[str, Any]:
        mult = []
        for (i, j), value in sorted(self._mult.items()):
            for k, c in sorted(value.items()):
                mult.append([i, j, k, format_rational(c)])
        return {
            "name": self.name,
            "complex_dim": self.d,
            "basis": [{"label": b.label, "degree": b.degree} for b in self.basis],
            "unit": self.unit,
            "mult": mult,
            "integral": [format_rational(v) for v in self.integral],
            "euler": {self.basis[i].label: format_rational(c) for i, c in sorted(self.euler.items())},
        }

    def fingerprint(self) -> str:
        """sha256 of the canonical JSON of the completed algebra"""
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FrobeniusAlgebra":
        try:
            basis = [BasisClass(str(b["label"]), int(b["degree"])) for b in data["basis"]]
            labels = {b.label: i for i, b in enumerate(basis)}

            def idx(value: Any) -> int:
                if isinstance(value, str):
                    if value not in labels:
                        raise AlgebraError(f"unknown label {value!r}")
                    return labels[value]
                return int(value)

            mult: Dict[Tuple[int, int], AlgebraElement] = {}
            for entry in data.get("mult", []):
                i, j, k, c = entry
                mult.setdefault((idx(i), idx(j)), {})
                add_into(mult[(idx(i), idx(j))], idx(k), parse_rational(c))
            euler = None
            if data.get("euler") is not None:
                euler = {}
                for label, c in data["euler"].items():
                    add_into(euler, idx(label), parse_rational(c))
            return cls(
                name=data["name"],
                d=int(data["complex_dim"]),
                basis=basis,
                unit=idx(data.get("unit", 0)),
                mult=mult,
                integral=[parse_rational(v) for v in data["integral"]],
                euler=euler,
            )
        except KeyError as e:
            raise AlgebraError(f"algebra file is missing field {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FrobeniusAlgebra":
        path = Path(path)
        with open(path, "r") as f:
            data = json.load(f)
        algebra = cls.from_dict(data)
        logger.info(f"📐 Loaded algebra {algebra.name} from {path} (dim {algebra.dim}, d = {algebra.d})")
        return algebra
