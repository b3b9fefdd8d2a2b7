"""Decide whether a belief structure is isomorphic to a probability measure.

Semantics of the verdicts: a Witness is a strictly positive atom weighting
whose conditional ratios reproduce the structure's value pattern through a
strictly increasing rescaling g with g(e)=0 and g(E)=1 (positive weights are
a deliberate strengthening: zero-weight atoms would leave conditional ratios
undefined).  A Refutation is a finite certificate, re-checkable in exact
arithmetic from the structure alone, that no such weighting exists.  Unknown
means the search budget ran out and nothing is claimed.

The refutation engine propagates forced facts about the ratio assignment
r(v) = g(v) over the quotient of pairs by their belief value: pairs with
empty intersection force r = 0, full pairs force r = 1, chain triples force
r(out) = r(left)·r(right), complement pairs force r(x) + r(y) = 1, and the
strictly-increasing g turns the value order into a ratio order.  Any derived
clash is a sound refutation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .core import ZERO, ONE, BeliefStructure, Event
from .conditions import chain_consistency
from .forms import (
    CombinationConflict,
    NegationConflict,
    _combination_instances,
    _negation_instances,
    extract_combination,
    extract_negation,
)


# -- certificates -----------------------------------------------------------------


@dataclass(frozen=True)
class OrderConflictData:
    """A contradictory set of forced-ratio constraint instances.

    Instances are ('product', (b,a,u)) and ('sum', (v,u)) tuples of event
    masks; seeds (forced zeros/ones, bounds, the value order) are re-derived
    from the structure during recheck.
    """

    instances: tuple
    description: str


@dataclass(frozen=True)
class RefutationCertificate:
    kind: str  # 'A1-conflict' | 'A2-conflict' | 'chain-associativity' | 'order-conflict'
    data: object
    description: str

    def recheck(self, structure: BeliefStructure) -> bool:
        """Re-validate from scratch, in exact arithmetic, from the structure."""
        if self.kind == "A1-conflict":
            c: NegationConflict = self.data
            va, ua = c.pair_a
            vb, ub = c.pair_b
            if structure.bel_masks(va, ua) != c.value:
                return False
            if structure.bel_masks(vb, ub) != c.value:
                return False
            out_a = structure.bel_masks(ua ^ (va & ua), ua)
            out_b = structure.bel_masks(ub ^ (vb & ub), ub)
            # equal values force equal ratios; complements then share a ratio,
            # which a strictly increasing g forbids for distinct values
            return out_a == c.output_a and out_b == c.output_b and out_a != out_b
        if self.kind == "A2-conflict":
            c: CombinationConflict = self.data
            b1, a1, u1 = c.triple_a
            b2, a2, u2 = c.triple_b
            key1 = (structure.bel_masks(b1, a1), structure.bel_masks(a1, u1))
            key2 = (structure.bel_masks(b2, a2), structure.bel_masks(a2, u2))
            out1 = structure.bel_masks(b1, u1)
            out2 = structure.bel_masks(b2, u2)
            return (
                key1 == key2 == c.args
                and out1 == c.output_a
                and out2 == c.output_b
                and out1 != out2
            )
        if self.kind == "chain-associativity":
            return self.data.recheck(structure)
        if self.kind == "order-conflict":
            return _recheck_order_conflict(self.data, structure)
        return False

    def to_dict(self) -> dict:
        return {"kind": self.kind, "description": self.description}


# -- the ratio-constraint propagation engine -----------------------------------------


class _Contradiction(Exception):
    def __init__(self, description: str, eqset: frozenset):
        super().__init__(description)
        self.description = description
        self.eqset = eqset


class _RatioEngine:
    """Exact constraint propagation over the attained-value quotient graph."""

    def __init__(self, structure: BeliefStructure, instances=None):
        self.structure = structure
        e, big_e = structure.bounds
        self.e, self.E = e, big_e
        self.positive: set[Fraction] = set()  # r(v) > 0 forced
        self.below_one: set[Fraction] = set()  # r(v) < 1 forced
        self.known: dict[Fraction, tuple[Fraction, frozenset]] = {}
        self.sums: list[tuple[Fraction, Fraction, tuple]] = []
        self.products: list[tuple[Fraction, Fraction, Fraction, tuple]] = []
        self.contradiction: _Contradiction | None = None
        self._build(instances)

    # construction ---------------------------------------------------------

    def _build(self, instances):
        st = self.structure
        allowed = None
        if instances is not None:
            allowed = set(instances)
        seen_sum = set()
        for x, s_x, (v, u) in _negation_instances(st):
            self._note_flags(x, v, u)
            self._note_flags(s_x, u ^ v, u)
            if allowed is not None and ("sum", (v, u)) not in allowed:
                continue
            key = (min(x, s_x), max(x, s_x))
            if key not in seen_sum:
                seen_sum.add(key)
                self.sums.append((x, s_x, (v, u)))
        seen_prod = set()
        for (l, r), out, (b, a, u) in _combination_instances(st):
            if allowed is not None and ("product", (b, a, u)) not in allowed:
                continue
            key = (out, l, r)
            if key not in seen_prod:
                seen_prod.add(key)
                self.products.append((out, l, r, (b, a, u)))
        self.sums.sort()
        self.products.sort()

    def _note_flags(self, value: Fraction, v_mask: int, u_mask: int):
        if v_mask != 0 or value > self.e:
            self.positive.add(value)
        if v_mask != u_mask or value < self.E:
            self.below_one.add(value)

    # fact management --------------------------------------------------------

    def _seed(self):
        st = self.structure
        for x, s_x, (v, u) in _negation_instances(st):
            for value, vm, um in ((x, v, u), (s_x, u ^ v, u)):
                if value < self.e or value > self.E:
                    raise _Contradiction(
                        f"attained value {value} lies outside the bounds "
                        f"[{self.e},{self.E}]",
                        frozenset([("sum", (v, u))]),
                    )
                if vm == 0:
                    self._set(value, ZERO, frozenset([("sum", (v, u))]),
                              "empty intersection forces ratio 0")
                elif vm == um:
                    self._set(value, ONE, frozenset([("sum", (v, u))]),
                              "full conditioning event forces ratio 1")
        if self.e in self.positive or self.e in self.below_one or self.e in self.known:
            self._set(self.e, ZERO, frozenset([("seed", "g(e)=0")]), "g(e) = 0")
        if self.E in self.positive or self.E in self.below_one or self.E in self.known:
            self._set(self.E, ONE, frozenset([("seed", "g(E)=1")]), "g(E) = 1")

    def _set(self, value: Fraction, ratio: Fraction, eqset: frozenset, why: str) -> bool:
        if value in self.known:
            old_ratio, old_eqs = self.known[value]
            if old_ratio != ratio:
                raise _Contradiction(
                    f"r({value}) forced to both {old_ratio} and {ratio} ({why})",
                    eqset | old_eqs,
                )
            return False
        if ratio < 0 or ratio > 1:
            raise _Contradiction(
                f"r({value}) forced to {ratio} outside [0,1] ({why})", eqset
            )
        if ratio == 0 and value in self.positive:
            raise _Contradiction(
                f"r({value}) forced to 0 but {value} is attained at a nonempty "
                f"intersection or exceeds e ({why})",
                eqset,
            )
        if ratio == 1 and value in self.below_one:
            raise _Contradiction(
                f"r({value}) forced to 1 but {value} is attained at a proper "
                f"subevent or is below E ({why})",
                eqset,
            )
        self.known[value] = (ratio, eqset)
        return True

    # rules ----------------------------------------------------------------

    def _check_known_order(self):
        items = sorted(self.known.items())
        for (v1, (r1, e1)), (v2, (r2, e2)) in zip(items, items[1:]):
            if not r1 < r2:
                raise _Contradiction(
                    f"value order broken: {v1} < {v2} but r({v1}) = {r1} ≥ "
                    f"r({v2}) = {r2}",
                    e1 | e2,
                )

    def _check_sum_order(self):
        # r(x) + r(y) = 1 pairs: as x grows, y must strictly shrink.  Both
        # orientations of every equation enter the scan so the adjacent-pair
        # argument is complete.
        oriented = []
        for x, y, w in self.sums:
            oriented.append((x, y, w))
            if x != y:
                oriented.append((y, x, w))
        oriented.sort()
        for (x1, y1, w1), (x2, y2, w2) in zip(oriented, oriented[1:]):
            marks = frozenset([("sum", w1), ("sum", w2)])
            if x1 == x2:
                if y1 != y2:
                    raise _Contradiction(
                        f"complements of the shared value {x1} differ: "
                        f"{y1} vs {y2} would share the ratio 1 - r({x1})",
                        marks,
                    )
            elif not y1 > y2:
                raise _Contradiction(
                    f"complement order broken: {x1} < {x2} but complements "
                    f"{y1} ≤ {y2}",
                    marks,
                )

    def _check_product_groups(self):
        """Cross-equation rules that need no derived values.

        Equal factor pairs force equal products; a shared positive factor
        cancels, forcing the cofactors' ratios equal.  Either way, distinct
        values forced to one ratio contradict the strictly increasing g.
        """
        by_factors: dict = {}
        by_out_left: dict = {}
        by_out_right: dict = {}
        for out, l, r, w in self.products:
            by_factors.setdefault((l, r), []).append((out, w))
            by_out_left.setdefault((out, l), []).append((r, w))
            by_out_right.setdefault((out, r), []).append((l, w))
        for (l, r), outs in by_factors.items():
            if len({o for o, _ in outs}) > 1:
                (o1, w1), (o2, w2) = outs[0], outs[1]
                raise _Contradiction(
                    f"r({l})·r({r}) equals both r({o1}) and r({o2}) with "
                    f"{o1} ≠ {o2}",
                    frozenset([("product", w1), ("product", w2)]),
                )
        for grouped in (by_out_left, by_out_right):
            for (out, shared), cofactors in grouped.items():
                if len({c for c, _ in cofactors}) <= 1:
                    continue
                if shared in self.positive or out in self.positive:
                    (c1, w1), (c2, w2) = cofactors[0], cofactors[1]
                    raise _Contradiction(
                        f"cancelling the positive shared factor r({shared}) in "
                        f"r({out}) = r({shared})·r({c1}) = r({shared})·r({c2}) "
                        f"forces r({c1}) = r({c2}) with {c1} ≠ {c2}",
                        frozenset([("product", w1), ("product", w2)]),
                    )

    def _apply_sum(self, x, y, witness) -> bool:
        mark = frozenset([("sum", witness)])
        changed = False
        if x == y:
            changed |= self._set(x, Fraction(1, 2), mark, "self-complementary value")
            return changed
        kx = self.known.get(x)
        ky = self.known.get(y)
        if kx and ky:
            if kx[0] + ky[0] != 1:
                raise _Contradiction(
                    f"r({x}) + r({y}) = {kx[0] + ky[0]} ≠ 1",
                    kx[1] | ky[1] | mark,
                )
            return False
        if kx:
            changed |= self._set(y, 1 - kx[0], kx[1] | mark, f"complement of {x}")
        elif ky:
            changed |= self._set(x, 1 - ky[0], ky[1] | mark, f"complement of {y}")
        return changed

    def _apply_product(self, out, l, r, witness) -> bool:
        mark = frozenset([("product", witness)])
        changed = False
        # r(out) = r(l)·r(r) ≤ min(r(l), r(r)): the product never exceeds a
        # factor, and equals one only when the other factor is 1 (or it is 0)
        for big, small in ((l, r), (r, l)):
            if out > big:
                raise _Contradiction(
                    f"product exceeds a factor: r({out}) = r({l})·r({r}) "
                    f"but {out} > {big}",
                    mark,
                )
            if out == big and big in self.positive and small in self.below_one:
                raise _Contradiction(
                    f"r({out}) = r({out})·r({small}) needs r({out}) = 0 or "
                    f"r({small}) = 1; both are excluded",
                    mark,
                )
            if out == big and big in self.positive:
                changed |= self._set(small, ONE, mark, f"cancelling r({big}) > 0")
        for unit, other in ((l, r), (r, l)):
            ku = self.known.get(unit)
            if not (ku and ku[0] == 1) or out == other:
                continue
            k_other = self.known.get(other)
            k_out = self.known.get(out)
            if k_other:
                changed |= self._set(out, k_other[0], ku[1] | k_other[1] | mark,
                                     "unit factor")
            elif k_out:
                changed |= self._set(other, k_out[0], ku[1] | k_out[1] | mark,
                                     "unit factor")
            else:
                # distinct values forced to share a ratio break strict increase
                raise _Contradiction(
                    f"r({unit}) = 1 forces r({out}) = r({other}) with "
                    f"{out} ≠ {other}",
                    ku[1] | mark,
                )
        kl = self.known.get(l)
        kr = self.known.get(r)
        ko = self.known.get(out)
        if kl and kl[0] == 0:
            changed |= self._set(out, ZERO, kl[1] | mark, "zero factor")
        if kr and kr[0] == 0:
            changed |= self._set(out, ZERO, kr[1] | mark, "zero factor")
        kl = self.known.get(l)
        kr = self.known.get(r)
        ko = self.known.get(out)
        if kl and kr:
            changed |= self._set(out, kl[0] * kr[0], kl[1] | kr[1] | mark, "product")
        elif ko and kl and kl[0] != 0:
            changed |= self._set(r, ko[0] / kl[0], ko[1] | kl[1] | mark, "quotient")
        elif ko and kr and kr[0] != 0:
            changed |= self._set(l, ko[0] / kr[0], ko[1] | kr[1] | mark, "quotient")
        return changed

    def run(self, depth: int = 16) -> "_RatioEngine":
        try:
            self._seed()
            self._check_sum_order()
            self._check_product_groups()
            self._check_known_order()
            for _ in range(depth):
                changed = False
                for x, y, w in self.sums:
                    changed |= self._apply_sum(x, y, w)
                for out, l, r, w in self.products:
                    changed |= self._apply_product(out, l, r, w)
                self._check_known_order()
                if not changed:
                    break
        except _Contradiction as exc:
            self.contradiction = exc
        return self


def _recheck_order_conflict(data: OrderConflictData, structure: BeliefStructure) -> bool:
    masks = []
    for kind, witness in data.instances:
        if kind == "product":
            b, a, u = witness
            try:
                structure.bel_masks(b, a), structure.bel_masks(a, u)
                structure.bel_masks(b, u)
            except Exception:
                return False
            masks.append((kind, witness))
        elif kind == "sum":
            v, u = witness
            try:
                structure.bel_masks(v, u)
            except Exception:
                return False
            masks.append((kind, witness))
    engine = _RatioEngine(structure, instances=masks).run()
    return engine.contradiction is not None


def refutation_search(
    structure: BeliefStructure, depth: int = 16
) -> RefutationCertificate | None:
    """Sound refutation certificates only; None when nothing is found.

    Tried in order: A1 extraction conflict (equal values with unequal
    complements force equal ratios for distinct values), A2 extraction
    conflict, composite chain associativity, and the ratio-propagation
    engine's order conflicts.
    """
    negation = extract_negation(structure)
    if isinstance(negation, NegationConflict):
        return RefutationCertificate(
            "A1-conflict", negation,
            negation.describe(structure.domain)
            + "; equal values force equal ratios, so the two complement values "
            "would share one ratio under a strictly increasing g",
        )
    combination = extract_combination(structure)
    if isinstance(combination, CombinationConflict):
        return RefutationCertificate(
            "A2-conflict", combination,
            combination.describe(structure.domain)
            + "; equal argument ratios force equal product ratios for two "
            "distinct values",
        )
    chain_report = chain_consistency(structure, combination)
    if chain_report.status == "fail":
        return RefutationCertificate(
            "chain-associativity", chain_report.certificate,
            chain_report.detail,
        )
    engine = _RatioEngine(structure).run(depth)
    if engine.contradiction is not None:
        instances = tuple(
            sorted(i for i in engine.contradiction.eqset if i[0] in ("sum", "product"))
        )
        data = OrderConflictData(instances, engine.contradiction.description)
        return RefutationCertificate(
            "order-conflict", data, engine.contradiction.description
        )
    return None


# -- witnesses -----------------------------------------------------------------------


@dataclass(frozen=True)
class ProbabilityWitness:
    """Strictly positive atom weights summing to 1."""

    weights: dict
    exact: bool

    def as_fractions(self, domain) -> list[Fraction]:
        return [Fraction(self.weights[a]) for a in domain.atoms]

    def to_dict(self) -> dict:
        return {
            "weights": {a: str(w) for a, w in self.weights.items()},
            "exact": self.exact,
        }


@dataclass(frozen=True)
class RescalingMap:
    """Monotone piecewise-linear g through the attained-value graph."""

    points: tuple[tuple[Fraction, Fraction], ...]  # (value, ratio), sorted

    def __post_init__(self):
        pts = tuple(sorted(self.points))
        object.__setattr__(self, "points", pts)
        for (v1, r1), (v2, r2) in zip(pts, pts[1:]):
            if v1 == v2 or not r1 < r2:
                raise ValueError("rescaling graph must be strictly increasing")

    @property
    def graph(self) -> dict:
        return dict(self.points)

    def __call__(self, value):
        value = Fraction(value)
        pts = self.points
        if value < pts[0][0] or value > pts[-1][0]:
            raise ValueError(f"{value} outside the rescaling domain")
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= value:
                lo = mid
            else:
                hi = mid
        (v1, r1), (v2, r2) = pts[lo], pts[hi]
        if value == v1:
            return r1
        return r1 + (r2 - r1) * (value - v1) / (v2 - v1)

    def to_dict(self) -> dict:
        return {str(v): str(r) for v, r in self.points}


@dataclass(frozen=True)
class WitnessCheck:
    passed: bool
    failing: str | None
    ratio_map: dict | None

    def __bool__(self):
        return self.passed


def _measure_of(weights: Sequence[Fraction], mask: int) -> Fraction:
    total = ZERO
    m = mask
    while m:
        low = m & -m
        total += weights[low.bit_length() - 1]
        m ^= low
    return total


def verify_witness(structure: BeliefStructure, weights) -> WitnessCheck:
    """Exact check of a weighting against the structure.

    (i) equal belief values always map to equal conditional ratios,
    (ii) the induced value→ratio map is strictly increasing,
    (iii) it sends e to 0 and E to 1 where those values are attained,
    (iv) the product rule g(Bel(V|U))·g(Bel(U)) = g(Bel(V∩U)) holds for every
    pair (re-checked although it follows from the ratio definition).
    """
    domain = structure.domain
    if isinstance(weights, Mapping):
        ws = [Fraction(weights[a]) for a in domain.atoms]
    else:
        ws = [Fraction(w) for w in weights]
        if len(ws) != domain.size:
            raise ValueError("one weight per atom required")
    if any(w <= 0 for w in ws):
        raise ValueError("witness weights must be strictly positive")
    if sum(ws) != 1:
        raise ValueError("witness weights must sum to 1")
    e, big_e = structure.bounds
    ratio_map: dict[Fraction, Fraction] = {}
    for v, u, x in structure.items():
        ratio = _measure_of(ws, v) / _measure_of(ws, u)
        if x in ratio_map:
            if ratio_map[x] != ratio:
                return WitnessCheck(
                    False,
                    f"single-valuedness: value {x} maps to ratios {ratio_map[x]} "
                    f"and {ratio}",
                    None,
                )
        else:
            ratio_map[x] = ratio
    items = sorted(ratio_map.items())
    for (v1, r1), (v2, r2) in zip(items, items[1:]):
        if not r1 < r2:
            return WitnessCheck(
                False,
                f"strict increase: values {v1} < {v2} map to ratios {r1} ≥ {r2}",
                None,
            )
    if e in ratio_map and ratio_map[e] != 0:
        return WitnessCheck(False, f"endpoint: g({e}) = {ratio_map[e]} ≠ 0", None)
    if big_e in ratio_map and ratio_map[big_e] != 1:
        return WitnessCheck(False, f"endpoint: g({big_e}) = {ratio_map[big_e]} ≠ 1", None)
    full = domain.full_mask
    for v, u, x in structure.items():
        lhs = ratio_map[x] * ratio_map[structure.bel_masks(u, full)]
        rhs = ratio_map[structure.bel_masks(v, full)]
        if lhs != rhs:
            return WitnessCheck(
                False,
                f"product rule fails at (V={Event(domain, v)!r}, U={Event(domain, u)!r})",
                None,
            )
    return WitnessCheck(True, None, ratio_map)


def rescaling_from_witness(structure: BeliefStructure, weights) -> RescalingMap:
    """The graph of g on attained values, extended to (e,0) and (E,1)."""
    check = verify_witness(structure, weights)
    if not check.passed:
        raise ValueError(f"weights are not a witness: {check.failing}")
    e, big_e = structure.bounds
    points = dict(check.ratio_map)
    points.setdefault(e, ZERO)
    points.setdefault(big_e, ONE)
    return RescalingMap(tuple(points.items()))


# -- the decision pipeline -------------------------------------------------------------


@dataclass(frozen=True)
class DecisionParams:
    restarts: int = 8
    budget: int = 400  # local-descent iterations per restart
    tolerance: float = 1e-9
    seed: int = 0
    refutation_depth: int = 16
    denominator_cap: int = 10 ** 6


@dataclass(frozen=True)
class IsomorphismVerdict:
    kind: str  # 'witness' | 'refutation' | 'unknown'
    witness: ProbabilityWitness | None = None
    rescaling: RescalingMap | None = None
    certificate: RefutationCertificate | None = None
    budget: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "budget": dict(self.budget)}
        if self.witness is not None:
            out["weights"] = self.witness.to_dict()["weights"]
            out["exact"] = self.witness.exact
        if self.rescaling is not None:
            out["g-graph"] = self.rescaling.to_dict()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


def _fraction_root(x: Fraction, k: int) -> Fraction | None:
    """Exact k-th root of a nonnegative rational, or None."""
    if x < 0:
        return None
    num = round(x.numerator ** (1 / k)) if x.numerator else 0
    den = round(x.denominator ** (1 / k))
    for n in (num - 1, num, num + 1):
        for d in (den - 1, den, den + 1):
            if n >= 0 and d > 0 and n ** k == x.numerator and d ** k == x.denominator:
                return Fraction(n, d)
    return None


def _structured_candidates(structure: BeliefStructure):
    """Exact witness guesses from the unconditional singleton values.

    The affine-normalized identity covers probability-generated structures
    (and their affine relabelings); exact k-th roots and k-th powers cover
    power-law rescalings.  Every candidate is verified exactly before use.
    """
    domain = structure.domain
    e, big_e = structure.bounds
    span = big_e - e
    full = domain.full_mask
    base = [
        (structure.bel_masks(1 << i, full) - e) / span for i in range(domain.size)
    ]
    if all(b > 0 for b in base):
        if sum(base) == 1:
            yield base
        for k in (2, 3, 4):
            roots = [_fraction_root(b, k) for b in base]
            if all(r is not None and r > 0 for r in roots) and sum(roots) == 1:
                yield roots
        for k in (2, 3):
            powers = [b ** k for b in base]
            if sum(powers) == 1:
                yield powers


def _value_classes(structure: BeliefStructure):
    """Sorted attained values with their canonical pair lists."""
    classes: dict[Fraction, list[tuple[int, int]]] = {}
    for v, u, x in structure.items():
        classes.setdefault(x, []).append((v, u))
    return sorted(classes.items())


def _numeric_feasibility(structure, params):
    """Penalty minimization over the open simplex via softmax weights.

    Returns (best_weights_float, best_penalty, restarts_used, iterations).
    A mild pull of each class ratio toward its normalized belief value keeps
    the feasible set's gauge freedom from wandering; exact verification later
    makes this a search aid only.
    """
    n = structure.domain.size
    classes = _value_classes(structure)
    e, big_e = structure.bounds
    span = float(big_e - e)
    masks = sorted({m for _, pairs in classes for vu in pairs for m in vu})
    mask_index = {m: i for i, m in enumerate(masks)}
    mask_matrix = np.zeros((len(masks), n))
    for m, i in mask_index.items():
        for bit in range(n):
            if m >> bit & 1:
                mask_matrix[i, bit] = 1.0
    class_pairs = [
        np.array([[mask_index[v], mask_index[u]] for v, u in pairs], dtype=int)
        for _, pairs in classes
    ]
    targets = np.array([(float(x) - float(e)) / span for x, _ in classes])
    delta = 1e-7

    def softmax(theta):
        z = np.concatenate([[0.0], theta])
        z = z - z.max()
        w = np.exp(z)
        return w / w.sum()

    def penalties(theta):
        """(hard, pull): constraint violation vs the identity-pull nudge."""
        mu = mask_matrix @ softmax(theta)
        hard = 0.0
        means = np.empty(len(classes))
        for ci, pairs in enumerate(class_pairs):
            ratios = mu[pairs[:, 0]] / mu[pairs[:, 1]]
            m = ratios.mean()
            means[ci] = m
            hard += ((ratios - m) ** 2).sum()
        order = np.clip(means[:-1] + delta - means[1:], 0.0, None)
        hard += (order ** 2).sum()
        pull = 1e-4 * ((means - targets) ** 2).sum()
        return hard, pull

    def objective(theta):
        hard, pull = penalties(theta)
        return hard + pull

    best_w = None
    best_hard = math.inf
    iterations = 0
    restarts = 0
    for i in range(max(params.restarts, 0)):
        restarts += 1
        rng = random.Random(params.seed * 1000003 + i)
        x0 = np.array([rng.gauss(0.0, 1.5) for _ in range(n - 1)])
        if n == 1:
            best_w, best_hard = np.array([1.0]), penalties(np.zeros(0))[0]
            break
        res = minimize(
            objective, x0, method="Nelder-Mead",
            options={"maxiter": params.budget, "xatol": 1e-12, "fatol": 1e-18},
        )
        iterations += int(res.nit)
        hard = penalties(res.x)[0]
        if hard < best_hard:
            best_hard = float(hard)
            best_w = softmax(res.x)
        if best_hard < 1e-20:
            break
    return best_w, best_hard, restarts, iterations


def _verify_numeric(structure, weights_float, tol) -> bool:
    """High-precision witness check: constraints within tol, order strict."""
    ws = [Fraction(float(w)) for w in weights_float]
    if any(w <= 0 for w in ws):
        return False
    total = sum(ws)
    ws = [w / total for w in ws]
    tol = Fraction(tol).limit_denominator(10 ** 15)
    classes: dict[Fraction, list[Fraction]] = {}
    for v, u, x in structure.items():
        classes.setdefault(x, []).append(
            _measure_of(ws, v) / _measure_of(ws, u)
        )
    means = []
    for x, ratios in sorted(classes.items()):
        if max(ratios) - min(ratios) > tol:
            return False
        means.append((x, sum(ratios) / len(ratios)))
    for (_, r1), (_, r2) in zip(means, means[1:]):
        if not r1 < r2:
            return False
    e, big_e = structure.bounds
    mm = dict(means)
    if e in mm and abs(mm[e]) > tol:
        return False
    if big_e in mm and abs(mm[big_e] - 1) > tol:
        return False
    return True


def decide(structure: BeliefStructure, params: DecisionParams | None = None) -> IsomorphismVerdict:
    """Witness, Refutation, or an honest Unknown.

    Pipeline: refutation search first; then exact structured candidates
    (affine identity, power laws) verified in exact arithmetic; then seeded
    numerical feasibility with continued-fraction rounding and exact
    re-verification; budget exhaustion yields Unknown.
    """
    params = params or DecisionParams()
    budget_report = {"restarts": 0, "iterations": 0, "phase": "refutation"}
    certificate = refutation_search(structure, params.refutation_depth)
    if certificate is not None:
        return IsomorphismVerdict(
            "refutation", certificate=certificate, budget=budget_report
        )

    domain = structure.domain
    for candidate in _structured_candidates(structure):
        check = verify_witness(structure, candidate)
        if check.passed:
            witness = ProbabilityWitness(
                dict(zip(domain.atoms, candidate)), exact=True
            )
            budget_report["phase"] = "structured-candidates"
            return IsomorphismVerdict(
                "witness",
                witness=witness,
                rescaling=rescaling_from_witness(structure, candidate),
                budget=budget_report,
            )

    if params.restarts > 0:
        best_w, best_pen, restarts, iterations = _numeric_feasibility(structure, params)
        budget_report.update(
            {"restarts": restarts, "iterations": iterations,
             "phase": "numeric", "best_penalty": best_pen}
        )
        if best_w is not None and best_pen < 1e-12:
            for cap in (10, 100, 1000, params.denominator_cap):
                rounded = [
                    Fraction(float(w)).limit_denominator(cap) for w in best_w
                ]
                total = sum(rounded)
                if total == 0 or any(w <= 0 for w in rounded):
                    continue
                rounded = [w / total for w in rounded]
                check = verify_witness(structure, rounded)
                if check.passed:
                    witness = ProbabilityWitness(
                        dict(zip(domain.atoms, rounded)), exact=True
                    )
                    return IsomorphismVerdict(
                        "witness",
                        witness=witness,
                        rescaling=rescaling_from_witness(structure, rounded),
                        budget=budget_report,
                    )
            if _verify_numeric(structure, best_w, params.tolerance):
                ws = [Fraction(float(w)) for w in best_w]
                total = sum(ws)
                ws = [w / total for w in ws]
                witness = ProbabilityWitness(
                    dict(zip(domain.atoms, ws)), exact=False
                )
                return IsomorphismVerdict(
                    "witness", witness=witness, budget=budget_report
                )
    return IsomorphismVerdict("unknown", budget=budget_report)
