"""Negation and combination forms, their laws, and the multiplicative representation.

A form is either tabular (a partial function read off a structure's table)
or a catalog closed form.  Catalog combination forms live on [0,1] and are
exactly rational-valued, so law checks on them run in exact arithmetic;
the multiplicative-representation construction is the one place where
high-precision floats (mpmath) take over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
import mpmath

from .core import ZERO, ONE, BeliefStructure, Event

NEGATION_CATALOG = ("linear-complement",)
COMBINATION_CATALOG = ("product", "minimum", "hamacher")

#: Declared differentiability class per catalog form (times continuously
#: differentiable).  Metadata, not something verified from evaluations.
SMOOTHNESS = {
    "linear-complement": math.inf,
    "product": math.inf,
    "minimum": 1,
    "hamacher": math.inf,
}


class FormError(ValueError):
    """Bad form construction or a violated operation precondition."""


class EquationCoverageError(ValueError):
    """A tabular form defines no evaluable instance of the equation."""


@dataclass(frozen=True)
class NegationForm:
    """A negation function S, tabular or from the catalog."""

    kind: str  # 'tabular' or a NEGATION_CATALOG name
    table: dict[Fraction, Fraction] | None = None
    interval: tuple[Fraction, Fraction] = (ZERO, ONE)
    witnesses: dict[Fraction, tuple[int, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind != "tabular" and self.kind not in NEGATION_CATALOG:
            raise FormError(f"unknown negation form {self.kind!r}")
        if (self.kind == "tabular") != (self.table is not None):
            raise FormError("tabular forms need a table, catalog forms none")

    @property
    def is_tabular(self) -> bool:
        return self.kind == "tabular"

    def defined_at(self, x: Fraction) -> bool:
        return True if not self.is_tabular else x in self.table

    def __call__(self, x: Fraction) -> Fraction:
        if self.is_tabular:
            return self.table[x]
        e, big_e = self.interval
        return e + big_e - x  # 1 - x on the default interval

    @property
    def smoothness(self):
        return None if self.is_tabular else SMOOTHNESS[self.kind]


@dataclass(frozen=True)
class CombinationForm:
    """A combination function F, tabular or from the catalog."""

    kind: str  # 'tabular' or a COMBINATION_CATALOG name
    table: dict[tuple[Fraction, Fraction], Fraction] | None = None
    interval: tuple[Fraction, Fraction] = (ZERO, ONE)
    witnesses: dict[tuple[Fraction, Fraction], tuple[int, int, int]] = field(
        default_factory=dict, repr=False
    )

    def __post_init__(self):
        if self.kind != "tabular" and self.kind not in COMBINATION_CATALOG:
            raise FormError(f"unknown combination form {self.kind!r}")
        if (self.kind == "tabular") != (self.table is not None):
            raise FormError("tabular forms need a table, catalog forms none")

    @property
    def is_tabular(self) -> bool:
        return self.kind == "tabular"

    def defined_at(self, x: Fraction, y: Fraction) -> bool:
        return True if not self.is_tabular else (x, y) in self.table

    def __call__(self, x: Fraction, y: Fraction) -> Fraction:
        if self.is_tabular:
            return self.table[(x, y)]
        if self.kind == "product":
            return x * y
        if self.kind == "minimum":
            return min(x, y)
        # hamacher: xy/(x+y-xy), with F(0,0) = 0 by continuity
        denom = x + y - x * y
        if denom == 0:
            return ZERO
        return x * y / denom

    @property
    def smoothness(self):
        return None if self.is_tabular else SMOOTHNESS[self.kind]


def catalog_negation(name: str, interval=(ZERO, ONE)) -> NegationForm:
    return NegationForm(kind=name, interval=interval)


def catalog_combination(name: str) -> CombinationForm:
    return CombinationForm(kind=name)


# -- extraction ----------------------------------------------------------------


@dataclass(frozen=True)
class NegationConflict:
    """Two pairs with equal Bel values but unequal complement values."""

    value: Fraction
    pair_a: tuple[int, int]
    output_a: Fraction
    pair_b: tuple[int, int]
    output_b: Fraction

    def describe(self, domain) -> str:
        va, ua = self.pair_a
        vb, ub = self.pair_b
        return (
            f"S({self.value}) is forced to both {self.output_a} "
            f"[Bel({Event(domain, va)!r}|{Event(domain, ua)!r})] and "
            f"{self.output_b} [Bel({Event(domain, vb)!r}|{Event(domain, ub)!r})]"
        )


@dataclass(frozen=True)
class CombinationConflict:
    """Two chain triples with equal argument pairs but unequal outputs."""

    args: tuple[Fraction, Fraction]
    triple_a: tuple[int, int, int]
    output_a: Fraction
    triple_b: tuple[int, int, int]
    output_b: Fraction

    def describe(self, domain) -> str:
        def t(tr):
            b, a, u = tr
            return (
                f"({Event(domain, b)!r} ⊆ {Event(domain, a)!r} ⊆ {Event(domain, u)!r})"
            )

        return (
            f"F{self.args} is forced to both {self.output_a} [{t(self.triple_a)}] "
            f"and {self.output_b} [{t(self.triple_b)}]"
        )


#: Size-based extraction on uniform structures enumerates O(n^3) triples;
#: beyond this many atoms even that is out of desk scale.
UNIFORM_EXTRACTION_ATOM_CAP = 128


def _negation_instances(structure: BeliefStructure):
    """(input, output, (v,u)) for every canonical pair; A1 instances."""
    if structure.is_uniform and structure.domain.size > 6:
        if structure.domain.size > UNIFORM_EXTRACTION_ATOM_CAP:
            raise FormError(
                f"extraction capped at {UNIFORM_EXTRACTION_ATOM_CAP} atoms"
            )
        n, k = structure.domain.size, structure.exponent
        # Values depend only on sizes; witnesses use prefix events.
        for m in range(1, n + 1):
            u = (1 << m) - 1
            for j in range(m + 1):
                v = (1 << j) - 1
                yield (
                    Fraction(j, m) ** k,
                    Fraction(m - j, m) ** k,
                    (v, u),
                )
        return
    for v, u, x in structure.items():
        yield x, structure.bel_masks(u ^ v, u), (v, u)


def extract_negation(structure: BeliefStructure):
    """Tabular S from all complement pairs, or the first conflict.

    A conflict is a legitimate verdict (A1 admits no function S), not an
    error.
    """
    table: dict[Fraction, Fraction] = {}
    witnesses: dict[Fraction, tuple[int, int]] = {}
    for x, s_x, pair in _negation_instances(structure):
        if x in table:
            if table[x] != s_x:
                return NegationConflict(x, witnesses[x], table[x], pair, s_x)
        else:
            table[x] = s_x
            witnesses[x] = pair
    return NegationForm(
        kind="tabular", table=table, interval=structure.bounds, witnesses=witnesses
    )


def _combination_instances(structure: BeliefStructure):
    """((x, y), out, (b,a,u)) for every canonical triple; A2 instances."""
    if structure.is_uniform and structure.domain.size > 6:
        if structure.domain.size > UNIFORM_EXTRACTION_ATOM_CAP:
            raise FormError(
                f"extraction capped at {UNIFORM_EXTRACTION_ATOM_CAP} atoms"
            )
        n, k = structure.domain.size, structure.exponent
        for m in range(1, n + 1):
            u = (1 << m) - 1
            for a_size in range(1, m + 1):
                a = (1 << a_size) - 1
                for j in range(a_size + 1):
                    b = (1 << j) - 1
                    yield (
                        (Fraction(j, a_size) ** k, Fraction(a_size, m) ** k),
                        Fraction(j, m) ** k,
                        (b, a, u),
                    )
        return
    for b, a, u in structure.canonical_triple_masks():
        yield (
            (structure.bel_masks(b, a), structure.bel_masks(a, u)),
            structure.bel_masks(b, u),
            (b, a, u),
        )


def extract_combination(structure: BeliefStructure):
    """Tabular F from all chain triples B ⊆ A ⊆ U (A ≠ ∅), or a conflict."""
    table: dict[tuple[Fraction, Fraction], Fraction] = {}
    witnesses: dict[tuple[Fraction, Fraction], tuple[int, int, int]] = {}
    for key, out, triple in _combination_instances(structure):
        if key in table:
            if table[key] != out:
                return CombinationConflict(key, witnesses[key], table[key], triple, out)
        else:
            table[key] = out
            witnesses[key] = triple
    return CombinationForm(
        kind="tabular", table=table, interval=structure.bounds, witnesses=witnesses
    )


# -- monotonicity ---------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    status: str  # 'pass' | 'fail' | 'untestable'
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class MonotonicityReport:
    form_kind: str  # 'negation' | 'combination'
    decreasing: Verdict | None = None  # S strictly decreasing
    strict_increase: Verdict | None = None  # F strict on (e,E]^2
    nondecrease: Verdict | None = None  # F nondecreasing on [e,E]^2
    continuity: Verdict | None = None

    @property
    def passed(self) -> bool:
        checks = [self.decreasing, self.strict_increase, self.nondecrease]
        return all(v is None or v.passed for v in checks)


def _grid(interval: tuple[Fraction, Fraction], n: int) -> list[Fraction]:
    e, big_e = interval
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    step = (big_e - e) / (n - 1)
    return [e + step * i for i in range(n)]


def check_monotonicity(form, grid_resolution: int = 9) -> MonotonicityReport:
    """Par3 for negation forms, Par4 (strict + nondecrease + continuity) for
    combination forms.

    Tabular forms are checked on every comparable pair of entries and report
    continuity as untestable; catalog forms are probed on an exact rational
    grid.
    """
    if isinstance(form, NegationForm):
        return MonotonicityReport("negation", decreasing=_check_s_decreasing(form))
    if isinstance(form, CombinationForm):
        strict, nondec = _check_f_monotone(form, grid_resolution)
        return MonotonicityReport(
            "combination",
            strict_increase=strict,
            nondecrease=nondec,
            continuity=_check_f_continuity(form, grid_resolution),
        )
    raise FormError(f"not a form: {form!r}")


def _check_s_decreasing(form: NegationForm) -> Verdict:
    if not form.is_tabular:
        # e + E - x has slope -1 everywhere.
        return Verdict("pass", "catalog form, strictly decreasing by closed form")
    points = sorted(form.table.items())
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        if not y1 > y2:
            return Verdict("fail", f"S({x1})={y1} vs S({x2})={y2} (not decreasing)")
    return Verdict("pass", f"strictly decreasing on {len(points)} tabular points")


def _f_axis_pairs(form: CombinationForm, grid_resolution: int):
    """((x,y1),(x,y2)) with y1<y2 varying one coordinate, plus the transpose."""
    if form.is_tabular:
        by_first: dict[Fraction, list[Fraction]] = {}
        by_second: dict[Fraction, list[Fraction]] = {}
        for x, y in form.table:
            by_first.setdefault(x, []).append(y)
            by_second.setdefault(y, []).append(x)
        for x in sorted(by_first):
            ys = sorted(by_first[x])
            for y1, y2 in zip(ys, ys[1:]):
                yield (x, y1), (x, y2)
        for y in sorted(by_second):
            xs = sorted(by_second[y])
            for x1, x2 in zip(xs, xs[1:]):
                yield (x1, y), (x2, y)
    else:
        pts = _grid(form.interval, grid_resolution)
        for x in pts:
            for y1, y2 in zip(pts, pts[1:]):
                yield (x, y1), (x, y2)
                yield (y1, x), (y2, x)


def _check_f_monotone(form: CombinationForm, grid_resolution: int):
    e, big_e = form.interval
    strict_fail = None
    nondec_fail = None
    compared = 0
    for (a1, b1), (a2, b2) in _f_axis_pairs(form, grid_resolution):
        f1, f2 = form(a1, b1), form(a2, b2)
        compared += 1
        if f1 > f2 and nondec_fail is None:
            nondec_fail = f"F{(a1, b1)}={f1} > F{(a2, b2)}={f2}"
        interior = all(t > e for t in (a1, b1, a2, b2))
        if interior and f1 >= f2 and strict_fail is None:
            strict_fail = f"F{(a1, b1)}={f1} vs F{(a2, b2)}={f2} (not strict)"
    if compared == 0:
        return (
            Verdict("untestable", "no comparable argument pairs"),
            Verdict("untestable", "no comparable argument pairs"),
        )
    strict = (
        Verdict("fail", strict_fail)
        if strict_fail
        else Verdict("pass", f"strict on {compared} comparable pairs in ({e},{big_e}]^2")
    )
    nondec = (
        Verdict("fail", nondec_fail)
        if nondec_fail
        else Verdict("pass", f"nondecreasing on {compared} comparable pairs")
    )
    return strict, nondec


def _check_f_continuity(form: CombinationForm, grid_resolution: int) -> Verdict:
    if form.is_tabular:
        return Verdict("untestable", "continuity untestable on a tabular form")
    pts = _grid(form.interval, grid_resolution)
    step = pts[1] - pts[0]
    bound = 2 * step  # admits any Lipschitz-2 form at this grid pitch
    worst = ZERO
    for x in pts:
        for y1, y2 in zip(pts, pts[1:]):
            worst = max(worst, abs(form(x, y2) - form(x, y1)))
            worst = max(worst, abs(form(y2, x) - form(y1, x)))
    if worst <= bound:
        return Verdict("pass", f"max grid jump {worst} ≤ modulus bound {bound}")
    return Verdict("fail", f"grid jump {worst} exceeds modulus bound {bound}")


# -- functional equations ---------------------------------------------------------

EQUATIONS = ("EQ1", "EQ3", "EQ3.5", "EQSYM")

EQUATION_DESCRIPTIONS = {
    "EQ1": "F(x,F(y,z)) = F(F(x,y),z)",
    "EQ3": "S(S(y)) = y",
    "EQ3.5": "y*S(x/y) = S(x)*S(S(y)/S(x))",
    "EQSYM": "y*S(S(x)/y) = x*S(S(y)/x)",
}


@dataclass(frozen=True)
class ResidualReport:
    equation: str
    grid_resolution: int
    residual: Fraction
    witness: tuple | None
    evaluated: int
    skipped: int
    total: int
    partial: bool  # tabular form: only table-defined points evaluated

    @property
    def coverage(self) -> Fraction:
        return Fraction(self.evaluated, self.total) if self.total else ZERO

    def to_dict(self) -> dict:
        return {
            "equation": self.equation,
            "grid": self.grid_resolution,
            "residual": format(float(self.residual), ".17g"),
            "residual_exact": str(self.residual),
            "witness": [str(w) for w in self.witness] if self.witness else None,
            "coverage": str(self.coverage),
            "evaluated": self.evaluated,
            "skipped": self.skipped,
            "partial": self.partial,
        }


def check_functional_equation(form, equation: str, grid_resolution: int) -> ResidualReport:
    """Max absolute residual of the named law over a rational grid on [e,E].

    EQ1 needs a combination form (n^3 grid); the rest need a negation form.
    Division points with zero denominators are skipped and counted.  Tabular
    forms are evaluated only where defined and the report is flagged partial.
    """
    if equation not in EQUATIONS:
        raise ValueError(f"unknown equation {equation!r}")
    if equation == "EQ1":
        if not isinstance(form, CombinationForm):
            raise FormError("EQ1 requires a combination form")
        return _residual_eq1(form, grid_resolution)
    if not isinstance(form, NegationForm):
        raise FormError(f"{equation} requires a negation form")
    if equation == "EQ3":
        return _residual_scan(
            form, "EQ3", grid_resolution,
            [(y,) for y in _grid(form.interval, grid_resolution)],
            _eq3_instance,
        )
    pts = _grid(form.interval, grid_resolution)
    pairs = [(x, y) for x in pts for y in pts]
    fn = _eq35_instance if equation == "EQ3.5" else _eqsym_instance
    return _residual_scan(form, equation, grid_resolution, pairs, fn)


def _residual_eq1(form: CombinationForm, n: int) -> ResidualReport:
    pts = _grid(form.interval, n)
    best = ZERO
    witness = None
    evaluated = 0
    skipped = 0
    total = len(pts) ** 3
    for x in pts:
        for y in pts:
            for z in pts:
                if form.is_tabular:
                    value = _eq1_tabular(form, x, y, z)
                    if value is None:
                        skipped += 1
                        continue
                else:
                    value = abs(form(x, form(y, z)) - form(form(x, y), z))
                evaluated += 1
                if value > best:
                    best, witness = value, (x, y, z)
    if evaluated == 0:
        raise EquationCoverageError("EQ1: no evaluable grid triples for this form")
    return ResidualReport(
        "EQ1", n, best, witness, evaluated, skipped, total, form.is_tabular
    )


def _eq1_tabular(form: CombinationForm, x, y, z):
    if not form.defined_at(y, z):
        return None
    inner_r = form(y, z)
    if not form.defined_at(x, y):
        return None
    inner_l = form(x, y)
    if not form.defined_at(x, inner_r) or not form.defined_at(inner_l, z):
        return None
    return abs(form(x, inner_r) - form(inner_l, z))


def _eq3_instance(form: NegationForm, args):
    (y,) = args
    if not form.defined_at(y):
        return None
    s_y = form(y)
    if not form.defined_at(s_y):
        return None
    return abs(form(s_y) - y)


def _eq35_instance(form: NegationForm, args):
    x, y = args
    if y == 0:
        return "skip"
    if not (form.defined_at(x) and form.defined_at(y)):
        return None
    s_x, s_y = form(x), form(y)
    if s_x == 0:
        return "skip"
    if not (form.defined_at(x / y) and form.defined_at(s_y / s_x)):
        return None
    return abs(y * form(x / y) - s_x * form(s_y / s_x))


def _eqsym_instance(form: NegationForm, args):
    x, y = args
    if y == 0 or x == 0:
        return "skip"
    if not (form.defined_at(x) and form.defined_at(y)):
        return None
    s_x, s_y = form(x), form(y)
    if not (form.defined_at(s_x / y) and form.defined_at(s_y / x)):
        return None
    return abs(y * form(s_x / y) - x * form(s_y / x))


def _residual_scan(form, equation, n, points, instance_fn) -> ResidualReport:
    best = ZERO
    witness = None
    evaluated = 0
    skipped = 0
    undefined = 0
    for args in points:
        value = instance_fn(form, args)
        if value == "skip":
            skipped += 1
            continue
        if value is None:
            undefined += 1
            continue
        evaluated += 1
        if value > best:
            best, witness = value, tuple(args)
    if evaluated == 0:
        raise EquationCoverageError(f"{equation}: no evaluable grid points for this form")
    return ResidualReport(
        equation, n, best, witness, evaluated, skipped, len(points),
        form.is_tabular and undefined > 0,
    )


# -- multiplicative representation ---------------------------------------------


@dataclass(frozen=True)
class MultiplicativeRep:
    """Strictly increasing f with C·f(F(x,y)) = f(x)·f(y) on sample points.

    `samples` maps argument values to f-values; `exponents` records the exact
    dyadic exponent q with f = 2^(-q) at each sample, in the same order.
    """

    samples: tuple[tuple[float, float], ...]
    exponents: tuple[Fraction, ...]
    constant: float
    residual: float
    anchor: float
    grid: int

    def f(self, x: float) -> float:
        """Monotone interpolation of the sample graph (log-linear in f)."""
        xs = [p for p, _ in self.samples]
        if x >= xs[-1]:
            return self.samples[-1][1]
        if x <= xs[0]:
            # below the smallest sample, f decays toward 0
            return self.samples[0][1] * x / xs[0] if xs[0] > 0 else 0.0
        lo, hi = 0, len(xs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if xs[mid] <= x:
                lo = mid
            else:
                hi = mid
        e_lo = float(self.exponents[lo])
        e_hi = float(self.exponents[hi])
        t = (x - xs[lo]) / (xs[hi] - xs[lo])
        return 2.0 ** (-(e_lo + t * (e_hi - e_lo)))


_ROOT_DEPTH = 6  # dyadic refinement: exponent step 2^-6
_POWER_STEPS = 20  # F-powers of the anchor reached by the sample ladder


def multiplicative_rep(
    form: CombinationForm,
    anchor: Fraction,
    tolerance: float = 1e-9,
    grid: int = 50,
) -> MultiplicativeRep:
    """Construct f with f(E)=1, f(anchor)=1/2 by dyadic iteration.

    Preconditions (verified here): catalog form; Par4-strict monotonicity;
    exact associativity; unit E and annihilator e on a check grid.  The
    constant C is fixed to 1.  The residual is the max of
    |f(F(x,y)) - f(x)f(y)| over a grid of sample-point pairs, which measures
    the representation property at points where f is pinned rather than
    interpolation slack.
    """
    if form.is_tabular:
        raise FormError("multiplicative_rep requires a catalog combination form")
    e, big_e = form.interval
    anchor = Fraction(anchor)
    if not e < anchor < big_e:
        raise FormError(f"anchor must lie strictly inside ({e}, {big_e})")
    mono = check_monotonicity(form)
    if not mono.strict_increase.passed:
        raise FormError(
            f"precondition Par4-strict fails: {mono.strict_increase.detail}"
        )
    assoc = check_functional_equation(form, "EQ1", 10)
    if float(assoc.residual) > tolerance:
        raise FormError(f"precondition EQ1 fails: residual {assoc.residual}")
    for t in _grid(form.interval, 21):
        if form(t, big_e) != t or form(big_e, t) != t:
            raise FormError(f"precondition unit fails: F({t}, E) != {t}")
        if form(t, e) != e or form(e, t) != e:
            raise FormError(f"precondition annihilator fails: F({t}, e) != {e}")

    with mpmath.workdps(50):
        f_mp = _as_mp_function(form)
        t = _mpf_of(anchor)
        # 2^_ROOT_DEPTH-th F-root of the anchor via monotone bisection.
        for _ in range(_ROOT_DEPTH):
            t = _bisect_diagonal(f_mp, t, form)
        delta = Fraction(1, 2 ** _ROOT_DEPTH)
        count = _POWER_STEPS * (2 ** _ROOT_DEPTH)
        xs = [mpmath.mpf(1)]
        exponents = [Fraction(0)]
        current = mpmath.mpf(1)
        for m in range(1, count + 1):
            current = f_mp(t, current)
            xs.append(current)
            exponents.append(delta * m)
        anchor_index = 2 ** _ROOT_DEPTH
        anchor_drift = abs(xs[anchor_index] - _mpf_of(anchor))
        if anchor_drift > mpmath.mpf(10) ** (-20):
            raise FormError("anchor not recovered by the dyadic ladder")
        for a, b in zip(xs, xs[1:]):
            if not b < a:
                raise FormError("sample ladder is not strictly decreasing")

        # residual over a grid of sample pairs whose exponents stay in range
        half = count // 2
        idx = sorted({max(1, round(1 + i * (half - 1) / (grid - 1))) for i in range(grid)})
        residual = mpmath.mpf(0)
        for i in idx:
            for j in idx:
                z = f_mp(xs[i], xs[j])
                fz = _interp_exponent(xs, exponents, z)
                lhs = mpmath.mpf(2) ** (-fz)
                rhs = mpmath.mpf(2) ** (-float(exponents[i])) * mpmath.mpf(2) ** (
                    -float(exponents[j])
                )
                residual = max(residual, abs(lhs - rhs))

        samples = tuple(
            (float(x), float(mpmath.mpf(2) ** (-mpmath.mpf(q.numerator) / q.denominator)))
            for x, q in zip(reversed(xs), reversed(exponents))
        )
    return MultiplicativeRep(
        samples=samples,
        exponents=tuple(reversed(exponents)),
        constant=1.0,
        residual=float(residual),
        anchor=float(anchor),
        grid=len(idx),
    )


def _as_mp_function(form: CombinationForm):
    if form.kind == "product":
        return lambda a, b: a * b
    if form.kind == "hamacher":
        def ham(a, b):
            d = a + b - a * b
            return mpmath.mpf(0) if d == 0 else a * b / d
        return ham
    if form.kind == "minimum":
        return lambda a, b: min(a, b)
    raise FormError(f"no high-precision evaluator for {form.kind!r}")


def _mpf_of(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _bisect_diagonal(f_mp, target, form: CombinationForm):
    """Solve F(t,t) = target for t by bisection on the monotone diagonal."""
    lo = _mpf_of(Fraction(form.interval[0]))
    hi = _mpf_of(Fraction(form.interval[1]))
    if not (f_mp(lo, lo) <= target <= f_mp(hi, hi)):
        raise FormError("bisection failure: diagonal does not reach the target")
    for _ in range(200):
        mid = (lo + hi) / 2
        if f_mp(mid, mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def _interp_exponent(xs, exponents, z):
    """Exponent of f at z by linear interpolation over the descending ladder."""
    lo, hi = 0, len(xs) - 1
    if z >= xs[0]:
        return mpmath.mpf(0)
    if z <= xs[-1]:
        return mpmath.mpf(exponents[-1].numerator) / exponents[-1].denominator
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] >= z:
            lo = mid
        else:
            hi = mid
    e_lo = mpmath.mpf(exponents[lo].numerator) / exponents[lo].denominator
    e_hi = mpmath.mpf(exponents[hi].numerator) / exponents[hi].denominator
    t = (z - xs[lo]) / (xs[hi] - xs[lo])
    return e_lo + t * (e_hi - e_lo)
