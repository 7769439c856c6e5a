#!/usr/bin/env python3
"""
Theorem suites: each suite name maps to a list of independent Cases plus the statement it checks.
cli.run_suite fans the cases out and merges the results by case id.
"""

import logging
import random
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from dictionary import CHERN_THEOREM, DEFORM_THEOREM, DICTIONARY_THEOREM, DeformParam, chern_cases, deform_cases, dictionary_cases
from engine_config import SuiteConfig, env_settings
from fock import (
    SAMPLE_PAIRS,
    FockVector,
    OrbifoldFock,
    PartitionFunction,
    bracket_residual,
    element_residual,
    first_difference,
    fock_dimension,
    number_operator,
    orbifold_dimension,
    reduced_basis,
    sample_tuples,
)
from frobenius import AlgebraElement, ConfigError, ConsistencyError, FrobeniusAlgebra, add_into, parse_rational
from jucys import (
    COMM_THEOREM,
    ETA_THEOREM,
    GOULDEN_THEOREM,
    JUCYS_THEOREM,
    JucysClasses,
    O_commute_cases,
    comm_cases,
    cubic_cases,
    eta_cases,
    jucys_cases,
    level_basis,
)
from orbiring import OrbElement, invariant_product
from reports import Case
from stablering import (
    GENERATORS_THEOREM,
    STABILITY_THEOREM,
    UNIVERSALITY_THEOREM,
    StableStore,
    StableTabulator,
    generators_cases,
    parity_of,
    stability_cases,
    universality_cases,
)
from symgroup import GroupAlgebraElement, class_sum
from vertexw import (
    BRACKET_THEOREM,
    WALG_THEOREM,
    ZEROMODE_THEOREM,
    J_p_bracket_cases,
    VertexRing,
    eq41_cases,
    jacobi_cases,
    omega_antisymmetry,
    vertex_ring_product,
    walgebra_cases,
    zeromode_cases,
)

logger = logging.getLogger(__name__)

HEISENBERG_THEOREM = "[p_m(a), p_n(b)] = m delta_{m,-n} (a,b) Id on F_X; the p_rho(n) span H*_orb(X^n/S_n)"

THEOREMS = {
    "heisenberg": HEISENBERG_THEOREM,
    "jucys": JUCYS_THEOREM,
    "goulden": GOULDEN_THEOREM,
    "comm": COMM_THEOREM,
    "eta": ETA_THEOREM,
    "zeromode": f"{ZEROMODE_THEOREM}; {BRACKET_THEOREM}",
    "walg": WALG_THEOREM,
    "universality": UNIVERSALITY_THEOREM,
    "stability": STABILITY_THEOREM,
    "generators": GENERATORS_THEOREM,
    "deform": DEFORM_THEOREM,
    "dictionary": DICTIONARY_THEOREM,
    "chern": CHERN_THEOREM,
}

OMEGA_SAMPLES = 200


def parse_element(algebra: FrobeniusAlgebra, text: str) -> AlgebraElement:
    """'x', '1,x' (a sum) or '1/2*x,-pt'; '1' is the unit"""
    out: AlgebraElement = {}
    for term in (part.strip() for part in text.split(",")):
        if not term:
            continue
        coeff, _, label = term.rpartition("*")
        value = parse_rational(coeff) if coeff else Fraction(1)
        if label == "1":
            index = algebra.unit
        elif label.startswith("-") and not coeff:
            value, index = -value, algebra.index(label[1:])
        else:
            index = algebra.index(label)
        add_into(out, index, value)
    return out


def suite_classes(algebra: FrobeniusAlgebra) -> Tuple[AlgebraElement, AlgebraElement]:
    """γ = 1 + (first even non-unit class), α = first odd class, else that even class"""
    even = [c for c in range(algebra.dim) if c != algebra.unit and not algebra.parity(c)]
    odd = [c for c in range(algebra.dim) if algebra.parity(c)]
    gamma = algebra.unit_element()
    if even:
        gamma[even[0]] = Fraction(1)
    if odd:
        alpha = {odd[0]: Fraction(1)}
    elif even:
        alpha = {even[0]: Fraction(1)}
    else:
        alpha = algebra.unit_element()
    return gamma, alpha


# ------------------------------------------------------------------ heisenberg


def heisenberg_cases(algebra: FrobeniusAlgebra, max_n: int, max_mode: int) -> List[Case]:
    fock = OrbifoldFock(algebra)
    cases = []
    for n in range(max_n + 1):
        cases.append(Case(f"heisenberg/dimension/n={n}", lambda n=n: _dimension_residual(algebra, n)))
        for label, x in level_basis(fock, n):
            v = FockVector.of(x)
            cases.append(Case(f"heisenberg/bracket/n={n}/{label}", lambda v=v: bracket_residual(fock, Fraction(1), max_mode, v)))

            def number(v=v, n=n) -> Optional[str]:
                diff = number_operator(fock, v, n) - v.scale(n)
                return None if diff.is_zero() else f"number operator is not {n} on this vector: {diff!r}"
            cases.append(Case(f"heisenberg/number/n={n}/{label}", number))

            def degree(x=x, n=n) -> Optional[str]:
                base = x.degree()
                for m in range(1, max_n - n + 1):
                    for c in range(algebra.dim):
                        y = fock.create_element(m, {c: Fraction(1)}, x)
                        if y.is_zero():
                            continue
                        expected = base + algebra.degree(c) + algebra.d * (m - 1)
                        if y.degree() != expected:
                            return f"p_-{m}({algebra.basis[c].label}) gives degrees {sorted(y.degrees())}, expected {expected}"
                return None
            cases.append(Case(f"heisenberg/degree/n={n}/{label}", degree))
    return cases


def _dimension_residual(algebra: FrobeniusAlgebra, n: int) -> Optional[str]:
    count, trace = fock_dimension(algebra, n), orbifold_dimension(algebra, n)
    return None if count == trace else f"{count} partition functions but trace formula gives {trace}"


# ------------------------------------------------------------------ goulden


def _group_element(x: OrbElement) -> GroupAlgebraElement:
    """Point-algebra element as Q[S_n]: each component's single payload value"""
    out: Dict[Any, Fraction] = {}
    for sigma, payload in x.components.items():
        for value in payload.values():
            add_into(out, sigma, value)
    return GroupAlgebraElement(x.n, out)


def point_cubic_brute_force(algebra: FrobeniusAlgebra) -> Optional[str]:
    """b p_-3|0⟩ = −3 p_-2 p_-1|0⟩, with both sides also multiplied out in Q[S_3]"""
    fock = OrbifoldFock(algebra)
    classes = JucysClasses(algebra)
    unit = algebra.unit
    three = fock.p_rho(PartitionFunction.of([(unit, 3)]), 3)
    lhs = classes.goulden(three)
    rhs = fock.p_rho(PartitionFunction.of([(unit, 2)]), 3).scale(-3)
    residual = element_residual(fock, lhs, rhs)
    if residual:
        return f"engine: {residual}"
    transpositions, three_cycles = class_sum((2, 1)), class_sum((3,))
    brute_left = (transpositions * three_cycles).scale(-3)
    brute_right = transpositions.scale(-6)
    if brute_left.terms != brute_right.terms:
        return "Q[S_3]: -T*3C_3 != -6 C_2"
    if _group_element(lhs).terms != brute_left.terms:
        return "engine product differs from the Q[S_3] product"
    return None


def sign_candidates(algebra: FrobeniusAlgebra, max_n: int) -> Dict[str, str]:
    """Which of t^ε·conv and (−t)^ε·conv at t = 1 satisfies the cubic formula"""
    out = {}
    for name, t in (("t^eps", 1), ("(-t)^eps", -1)):
        verdict = "pass"
        for case in cubic_cases(JucysClasses(algebra, t), max_n):
            try:
                residual = case.check()
            except ConsistencyError as e:
                residual = str(e)
            if residual is not None:
                verdict = f"fail at {case.id}"
                break
        out[name] = verdict
    logger.info(f"🔎 product sign candidates on {algebra.name}: {out}")
    return out


def goulden_cases(algebra: FrobeniusAlgebra, max_n: int) -> Tuple[List[Case], Dict[str, Any]]:
    cases = cubic_cases(JucysClasses(algebra), max_n)
    if algebra.dim == 1 and algebra.d == 0:
        cases.append(Case("goulden/point-S3-brute-force", lambda: point_cubic_brute_force(algebra)))
    notes = {"sign_candidates": sign_candidates(algebra, min(max_n, 3))}
    return cases, notes


# ------------------------------------------------------------------ zero modes and W-algebra


def vertex_ring_cases(classes: JucysClasses, max_n: int, seed: int = 0) -> List[Case]:
    """Products in the zero-mode ring agree with ∘ on seeded random pairs from the whole reduced basis"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    cases = []
    for n in range(1, max_n + 1):
        def check(n=n) -> Optional[str]:
            ring = VertexRing(algebra, n)
            for rho, sigma in sample_tuples(reduced_basis(algebra, n), 2, SAMPLE_PAIRS, seed=f"vertex-ring-{seed}-{n}"):
                left = vertex_ring_product(algebra, {rho: Fraction(1)}, {sigma: Fraction(1)}, n, ring)
                right = fock.coordinates(invariant_product(fock.p_rho(rho, n), fock.p_rho(sigma, n), classes.t))
                residual = first_difference(left, right)
                if residual:
                    return f"{rho.label(algebra)} * {sigma.label(algebra)}: {residual}"
            return None
        cases.append(Case(f"zeromode/vertex-ring/n={n}", check))
    return cases


def zeromode_commute_cases(classes: JucysClasses, max_n: int, seed: int = 0) -> List[Case]:
    """The invariant ring is supercommutative on seeded random pairs p_ρ(n), p_σ(n)"""
    algebra = classes.algebra
    fock = OrbifoldFock(algebra)
    cases = []
    for n in range(1, max_n + 1):
        def check(n=n) -> Optional[str]:
            for rho, sigma in sample_tuples(reduced_basis(algebra, n), 2, SAMPLE_PAIRS, seed=f"commute-{seed}-{n}"):
                x, y = fock.p_rho(rho, n), fock.p_rho(sigma, n)
                sign = (-1) ** (parity_of(algebra, rho) * parity_of(algebra, sigma))
                residual = element_residual(fock, invariant_product(x, y, classes.t), invariant_product(y, x, classes.t).scale(sign))
                if residual:
                    return f"{rho.label(algebra)} and {sigma.label(algebra)} do not supercommute: {residual}"
            return None
        cases.append(Case(f"zeromode/commute/n={n}", check))
    return cases
    return cases


def omega_cases(seed: int = 0) -> List[Case]:
    rng = random.Random(seed)
    quadruples = [tuple(rng.randint(-6, 6) for _ in range(4)) for _ in range(OMEGA_SAMPLES)]
    return [Case("walg/omega-antisymmetry", lambda: omega_antisymmetry(quadruples))]


# ------------------------------------------------------------------ dispatch


def deform_params(cfg: SuiteConfig) -> List[DeformParam]:
    params = [DeformParam(parse_rational(s)) for s in cfg.s]
    if cfg.special_minus_one:
        params.append(DeformParam.minus_one())
    return params


def default_line_class(algebra: FrobeniusAlgebra) -> AlgebraElement:
    """First degree-2 class, or 0"""
    for c in range(algebra.dim):
        if algebra.degree(c) == 2:
            return {c: Fraction(1)}
    return {}


def build_suite(cfg: SuiteConfig, algebra: FrobeniusAlgebra, store_dir: Optional[str] = None) -> Tuple[str, List[Case], Dict[str, Any]]:
    """(theorem, cases, notes) for one configured suite"""
    cfg.check_caps(algebra)
    suite = cfg.suite
    notes: Dict[str, Any] = {}
    gamma, alpha = suite_classes(algebra)
    classes = JucysClasses(algebra)

    if suite == "heisenberg":
        cases = heisenberg_cases(algebra, cfg.max_n, cfg.max_mode)
    elif suite == "jucys":
        cases = jucys_cases(classes, gamma, cfg.max_n, cfg.max_n)
    elif suite == "goulden":
        cases, notes = goulden_cases(algebra, cfg.max_n)
    elif suite == "comm":
        cases = comm_cases(classes, gamma, alpha, cfg.max_k, cfg.max_n) + O_commute_cases(classes, cfg.max_k, cfg.max_n)
    elif suite == "eta":
        cases = eta_cases(classes, gamma, alpha, cfg.max_n)
    elif suite == "zeromode":
        cases = (
            zeromode_cases(classes, cfg.max_k, cfg.max_n)
            + eq41_cases(algebra, cfg.max_k + 1, cfg.max_mode, cfg.max_n)
            + J_p_bracket_cases(classes, cfg.max_k, cfg.max_mode, cfg.max_n)
            + vertex_ring_cases(classes, min(cfg.max_n, 3))
            + zeromode_commute_cases(classes, min(cfg.max_n, 3))
        )
    elif suite == "walg":
        cases = (
            walgebra_cases(algebra, cfg.max_pq, cfg.max_mode, cfg.max_n)
            + omega_cases()
            + jacobi_cases(algebra, min(cfg.max_pq, 3), cfg.max_mode, min(cfg.max_n, 3))
        )
    elif suite == "universality":
        cases = universality_cases(classes, cfg.max_k, cfg.max_n)
    elif suite == "stability":
        store = StableStore(Path(store_dir or env_settings()["store_dir"]), algebra)
        tabulator = StableTabulator(algebra, store=store)
        point = algebra.dim == 1 and algebra.d == 0
        cases = stability_cases(tabulator, cfg.max_n, oracle_max_n=cfg.max_n + 2 if point else 0)
    elif suite == "generators":
        cases = generators_cases(classes, cfg.max_n)
    elif suite == "deform":
        params = deform_params(cfg)
        notes = {"parameters": [p.label for p in params]}
        cases = deform_cases(algebra, params, cfg.max_n, cfg.max_k, cfg.max_mode)
    elif suite == "dictionary":
        cases = dictionary_cases(algebra, cfg.max_n, cfg.max_k, cfg.max_mode)
    elif suite == "chern":
        L = parse_element(algebra, cfg.L) if cfg.L else default_line_class(algebra)
        notes = {"L": algebra.format_element(L) if L else "0", "hbar_order": cfg.hbar_order}
        cases = chern_cases(algebra, L, cfg.hbar_order, cfg.max_n)
    else:
        raise ConfigError(f"unknown suite {suite!r}")

    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise ConsistencyError(f"suite {suite} produced duplicate case ids")
    logger.info(f"🧪 {suite} on {algebra.name}: {len(cases)} cases")
    return THEOREMS[suite], cases, notes
