"""Integer linear constraint systems on partial augmentations.

For a normalized torsion unit u of order k and a character psi with
representing matrix D(u), the multiplicity of zeta_k^l as an eigenvalue of
D(u) is

    mu_l(u, psi) = (1/k) * sum_{d | k} Tr_{Q(zeta_{k/d})/Q}( psi(u^d) * zeta_{k/d}^{-l} )

and must be a nonnegative integer.  Writing psi(u) = sum_x eps_x(u) psi(x)
over the classes x of order dividing k turns each (psi, l) pair into one
integer equality

    sum_x Tr(psi(x) zeta_k^{-l}) * eps_x  -  k * mu_{psi,l}  =  -a(psi, l)

where a collects the d > 1 terms, known once the partial augmentations of
all proper powers of u are fixed.  This module builds those systems,
including the variant that aggregates all order-p classes into a single
variable when only p-constant characters are used.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import divisors, is_prime
from .chartables import CharacterTable, TableBundle
from .cyclotomics import Cyc, FieldError, rational, root_of_unity
from .intsolve import LinSystem


class ConstraintError(ValueError):
    pass


# -- partial augmentations ---------------------------------------------------


@dataclass(frozen=True)
class PAVector:
    """Partial augmentations of one unit of order `order`.

    Entries are (class index, value) pairs, sorted, zero values dropped;
    class indices refer to the ordinary table.
    """

    order: int
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if sum(v for _, v in self.entries) != 1:
            raise ConstraintError("partial augmentations must sum to 1")
        idx = [i for i, _ in self.entries]
        if idx != sorted(set(idx)) or any(v == 0 for _, v in self.entries):
            raise ConstraintError("entries must be sorted, unique, nonzero")

    def value(self, class_index: int) -> int:
        for i, v in self.entries:
            if i == class_index:
                return v
        return 0

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)


def pa_vector(table: CharacterTable, k: int, values: dict[int, int]) -> PAVector:
    """Validated constructor: support restricted to non-identity classes of
    order dividing k (vanishing elsewhere is forced, so nonzero entries on
    other classes are rejected)."""
    entries = []
    for i, v in sorted(values.items()):
        if v == 0:
            continue
        o = table.classes[i].element_order
        if o == 1:
            raise ConstraintError("identity class cannot carry augmentation")
        if k % o:
            raise ConstraintError(
                f"class {table.classes[i].name} has order {o}, not dividing {k}"
            )
        entries.append((i, v))
    return PAVector(k, tuple(entries))


@dataclass(frozen=True)
class PATuple:
    """Partial augmentations of u and its powers: one PAVector per divisor
    e > 1 of `order` (e = order is u itself; smaller e are proper powers)."""

    order: int
    levels: tuple[tuple[int, PAVector], ...]

    def __post_init__(self):
        keys = [e for e, _ in self.levels]
        if keys != sorted(set(keys)):
            raise ConstraintError("levels must be sorted by divisor")
        for e, pa in self.levels:
            if e <= 1 or self.order % e:
                raise ConstraintError(f"level {e} does not divide order {self.order}")
            if pa.order != e:
                raise ConstraintError(f"level {e} holds a PAVector of order {pa.order}")

    def has_level(self, e: int) -> bool:
        return any(k == e for k, _ in self.levels)

    def level(self, e: int) -> PAVector:
        for k, pa in self.levels:
            if k == e:
                return pa
        raise ConstraintError(
            f"partial augmentations for order {e} are missing from the tuple"
        )

    @property
    def top(self) -> PAVector:
        return self.level(self.order)

    def proper(self) -> "PATuple":
        return PATuple(
            self.order, tuple((e, pa) for e, pa in self.levels if e != self.order)
        )

    def with_top(self, pa: PAVector) -> "PATuple":
        if pa.order != self.order or self.has_level(self.order):
            raise ConstraintError("top level already present or order mismatch")
        return PATuple(self.order, self.levels + ((self.order, pa),))

    def is_complete(self) -> bool:
        return all(self.has_level(e) for e in divisors(self.order) if e > 1)


# -- character rows -----------------------------------------------------------


@dataclass(frozen=True)
class CharRow:
    """One usable character row, with values indexed by ordinary class
    index (None where a Brauer row is undefined)."""

    label: str
    degree: int
    values: tuple

    def value_at(self, class_index: int) -> Cyc:
        v = self.values[class_index]
        if v is None:
            raise ConstraintError(
                f"{self.label} has no value on class index {class_index}"
            )
        return v


def char_rows(tables, n_ordinary_classes: int) -> tuple[CharRow, ...]:
    """Flatten the usable tables into CharRows over ordinary class indices."""
    out = []
    for t in tables:
        prefix = f"mod{t.prime}" if t.is_brauer else "ord"
        groups = (("", t.characters), ("x", t.extra_characters))
        for tag, rows in groups:
            for ri, row in enumerate(rows):
                if t.is_brauer:
                    values = [None] * n_ordinary_classes
                    for sub_i, ord_i in enumerate(t.ordinary_index):
                        values[ord_i] = row[sub_i]
                    values = tuple(values)
                else:
                    values = tuple(row)
                out.append(CharRow(f"{prefix}{tag}{ri}", t.degree(row), values))
    return tuple(out)


def character_value_at_unit(row: CharRow, pa: PAVector) -> Cyc:
    """psi(u) = sum_x eps_x(u) psi(x) over the support of pa."""
    total = rational(0)
    for ci, eps in pa.entries:
        total = total + row.value_at(ci) * eps
    return total


# -- traces and coefficients ---------------------------------------------------


def _integer_trace(value: Cyc, m: int, context: str) -> int:
    try:
        t = value.trace_to_rational(m)
    except FieldError as exc:
        raise ConstraintError(f"{context}: {exc}") from None
    if t.denominator != 1:
        raise ConstraintError(
            f"{context}: table value is not an algebraic integer"
        )
    return int(t)


def mu_coefficient(row: CharRow, k: int, ell: int, class_index: int) -> int:
    """Coefficient of eps_x in the (row, ell) constraint: Tr(psi(x) zeta_k^-l)."""
    return _mu_coefficient_cached(row, k, ell % k, class_index)


@lru_cache(maxsize=None)
def _mu_coefficient_cached(row, k, ell, class_index):
    value = row.value_at(class_index) * root_of_unity(k, -ell)
    return _integer_trace(value, k, row.label)


def a_term_scaled(row: CharRow, k: int, ell: int, tup: PATuple) -> int:
    """k*a minus the d=1 part: the constant side of the (row, ell) constraint,
    summing the proper-power terms Tr_{Q(zeta_{k/d})/Q}(psi(u^d) zeta_{k/d}^{-l})."""
    total = 0
    for d in divisors(k):
        if d == 1:
            continue
        e = k // d  # order of u^d
        if e == 1:
            val = rational(row.degree)
        else:
            val = character_value_at_unit(row, tup.level(e))
        total += _integer_trace(val * root_of_unity(e, -ell), e, row.label)
    return total


# -- system assembly -----------------------------------------------------------


@dataclass(frozen=True)
class EpsVar:
    class_index: int
    name: str

    def __str__(self):
        return f"eps:{self.name}"


@dataclass(frozen=True)
class AggVar:
    """Sum of the eps over all classes of order `prime` (p-constant mode)."""

    prime: int

    def __str__(self):
        return f"agg:{self.prime}"


@dataclass(frozen=True)
class MuVar:
    """One eigenvalue-multiplicity variable; rows made identical by Galois
    symmetry share a variable, `owners` lists every (row label, l) it stands
    for."""

    owners: tuple[tuple[str, int], ...]

    def __str__(self):
        label, ell = self.owners[0]
        extra = f"+{len(self.owners) - 1}" if len(self.owners) > 1 else ""
        return f"mu:{label}:{ell}{extra}"


def default_tables(bundle: TableBundle, k: int):
    """Ordinary table plus every Brauer table for primes not dividing k."""
    return (bundle.ordinary,) + tuple(t for t in bundle.brauer if k % t.prime)


def build_system(
    bundle: TableBundle, k: int, proper: PATuple, tables=None
) -> LinSystem:
    """HeLP system for units of order k, given partial augmentations of all
    proper powers.  Variables: one EpsVar per class of order dividing k,
    then one MuVar per distinct constraint row; duplicates merged."""
    if k < 2:
        raise ConstraintError("unit order must be at least 2")
    ordinary = bundle.ordinary
    if tables is None:
        tables = default_tables(bundle, k)
    rows = char_rows(tables, len(ordinary.classes))
    support = ordinary.classes_of_order_dividing(k)

    merged: dict[tuple, list] = {}
    for row in rows:
        for ell in range(k):
            coeffs = tuple(mu_coefficient(row, k, ell, x) for x in support)
            a = a_term_scaled(row, k, ell, proper)
            merged.setdefault((coeffs, a), []).append((row.label, ell))

    eps_vars = [EpsVar(i, ordinary.classes[i].name) for i in support]
    return _finish_system(eps_vars, None, merged, k)


def _finish_system(eps_vars, agg_var, merged, k) -> LinSystem:
    lead = list(eps_vars) + ([agg_var] if agg_var is not None else [])
    mu_vars = [MuVar(tuple(owners)) for owners in merged.values()]
    variables = tuple(lead) + tuple(mu_vars)
    n = len(variables)
    n_lead = len(lead)

    equalities = [(tuple([1] * n_lead + [0] * (n - n_lead)), 1)]
    for mu_pos, ((coeffs, a), _) in enumerate(merged.items()):
        row = [0] * n
        row[:len(coeffs)] = list(coeffs)
        row[n_lead + mu_pos] = -k
        equalities.append((tuple(row), -a))
    return LinSystem(variables, tuple(equalities), frozenset(range(n_lead, n)))


def is_p_constant(row: CharRow, table: CharacterTable, p: int) -> bool:
    """True iff the row takes a single value on all classes of order p."""
    vals = [
        row.values[i]
        for i, cl in enumerate(table.classes)
        if cl.element_order == p
    ]
    if any(v is None for v in vals):
        return False
    return len(set(vals)) <= 1


def build_system_p_constant(
    bundle: TableBundle, k: int, p: int, proper: PATuple, tables=None
) -> LinSystem:
    """HeLP system for order k = p*q (distinct primes) with the order-p
    eps variables replaced by their sum.

    Only p-constant rows are used, so the order-p coefficients collapse onto
    one AggVar and psi(u^q) = psi(x_p) by augmentation; the partial
    augmentations of u^q are never needed, only those of u^p (order q).
    """
    q, rem = divmod(k, p)
    if rem or not is_prime(p) or not is_prime(q) or q == p:
        raise ConstraintError(f"{k} is not a product of two distinct primes with {p}")
    ordinary = bundle.ordinary
    if tables is None:
        tables = default_tables(bundle, k)
    rows = [
        row
        for row in char_rows(tables, len(ordinary.classes))
        if is_p_constant(row, ordinary, p)
    ]
    if not rows:
        raise ConstraintError("no p-constant rows")

    support = ordinary.classes_of_order_dividing(k)
    agg_classes = [i for i in support if ordinary.classes[i].element_order == p]
    keep = [i for i in support if ordinary.classes[i].element_order != p]
    if not agg_classes:
        raise ConstraintError(f"no classes of order {p}")
    witness = agg_classes[0]

    merged: dict[tuple, list] = {}
    for row in rows:
        p_value = row.value_at(witness)
        for ell in range(k):
            coeffs = tuple(mu_coefficient(row, k, ell, x) for x in keep)
            coeffs += (mu_coefficient(row, k, ell, witness),)
            a = 0
            for d in divisors(k):
                if d == 1:
                    continue
                e = k // d
                if e == 1:
                    val = rational(row.degree)
                elif e == p:
                    # u^q has order p; constancy gives psi(u^q) = psi(x_p)
                    val = p_value
                else:
                    val = character_value_at_unit(row, proper.level(e))
                a += _integer_trace(val * root_of_unity(e, -ell), e, row.label)
            merged.setdefault((coeffs, a), []).append((row.label, ell))

    eps_vars = [EpsVar(i, ordinary.classes[i].name) for i in keep]
    return _finish_system(eps_vars, AggVar(p), merged, k)


# -- inspection helpers --------------------------------------------------------


def eps_projection(sys: LinSystem, solution) -> dict[int, int]:
    """Class index -> eps value for one solver solution (zeros included)."""
    out = {}
    for var, val in zip(sys.variables, solution):
        if isinstance(var, EpsVar):
            out[var.class_index] = val
    return out


def agg_value(sys: LinSystem, solution):
    for var, val in zip(sys.variables, solution):
        if isinstance(var, AggVar):
            return val
    return None


def mu_values(sys: LinSystem, solution) -> dict[tuple[str, int], int]:
    """(row label, l) -> multiplicity, expanding shared variables."""
    out = {}
    for var, val in zip(sys.variables, solution):
        if isinstance(var, MuVar):
            for owner in var.owners:
                out[owner] = val
    return out


def mu_sums(sys: LinSystem, solution) -> dict[str, int]:
    """Row label -> sum of its multiplicities (must equal the degree)."""
    out: dict[str, int] = {}
    for (label, _), val in mu_values(sys, solution).items():
        out[label] = out.get(label, 0) + val
    return out


def assert_mu_sums(sys: LinSystem, solution, rows) -> None:
    """The multiplicities of each row must sum to its degree; the identity
    is linearly implied by the system, so a violation means a bug."""
    sums = mu_sums(sys, solution)
    for row in rows:
        if row.label in sums and sums[row.label] != row.degree:
            raise AssertionError(
                f"multiplicity sum {sums[row.label]} != degree {row.degree}"
                f" for {row.label}"
            )
