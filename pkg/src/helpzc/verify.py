"""Top-level verification drivers.

Checks two questions about the normalized torsion units of Z[G]:

* rational conjugacy of every torsion unit to a group element, verified
  order by order (check_zc), and
* existence of units of order p*q for primes p, q that are element orders
  while p*q is not (check_pq).

Orders are processed bottom-up over the divisor lattice: the admissible
partial augmentation tuples of u^p for every prime p | k are combined into
compatible candidates for the proper powers of u, each candidate's
constraint system is solved exactly, and the surviving tuples are filtered
through the congruence test.  Results land in a SolutionStore which can be
serialized for audit or resumed from.

A verdict is Proved or Unknown, never "false": an obstruction (nontrivial
solutions, an infinite solution set, or an exhausted node budget) means the
method is inconclusive, not that a counterexample exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd

from .arith import divisors, prime_factors
from .chartables import CharacterTable, TableBundle
from .constraints import (
    ConstraintError,
    PATuple,
    assert_mu_sums,
    build_system,
    build_system_p_constant,
    char_rows,
    eps_projection,
    pa_vector,
)
from .intsolve import DEFAULT_MAX_NODES, Aborted, Finite, Infinite, solve_all
from .wagner import wagner_test

REASON_NONTRIVIAL = "nontrivial solutions"
REASON_INFINITE = "infinite solution set"
REASON_BUDGET = "node budget"


class DriverError(ValueError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    shortcuts: bool = True
    use_brauer: bool = True
    p_constant: bool = False
    redundancy: bool | None = None
    max_nodes: int = DEFAULT_MAX_NODES
    fong_swan: bool = True


@dataclass(frozen=True)
class ShortcutProved:
    reason: str


class SolutionStore:
    """Admissible tuples per order, plus obstruction markers.

    An order appears in `solutions` only once all its proper divisor orders
    do; every stored tuple is complete and passed the congruence test.
    """

    def __init__(self, group_name: str):
        self.group_name = group_name
        self.solutions: dict[int, tuple[PATuple, ...]] = {}
        self.obstructions: dict[int, str] = {}

    def __eq__(self, other):
        return (
            isinstance(other, SolutionStore)
            and self.group_name == other.group_name
            and self.solutions == other.solutions
            and self.obstructions == other.obstructions
        )

    def __repr__(self):
        return (
            f"SolutionStore({self.group_name!r}, orders={sorted(self.solutions)},"
            f" obstructions={self.obstructions})"
        )


@dataclass(frozen=True)
class Verdict:
    proved: bool
    shortcut: str | None
    store: SolutionStore
    obstructions: tuple[tuple[int, str], ...] = ()


def canonical_key(tup: PATuple):
    return tuple((e, pa.entries) for e, pa in tup.levels)


# -- order enumeration ---------------------------------------------------------


def trivial_solutions(table: CharacterTable, k: int) -> tuple[PATuple, ...]:
    """One complete tuple per class of element order exactly k, holding the
    partial augmentations of the group elements themselves."""
    out = []
    for c, cl in enumerate(table.classes):
        if cl.element_order != k:
            continue
        levels = []
        for e in divisors(k):
            if e == 1:
                continue
            ci = table.class_of_power(c, k // e)
            levels.append((e, pa_vector(table, e, {ci: 1})))
        out.append(PATuple(k, tuple(levels)))
    return tuple(sorted(out, key=canonical_key))


def orders_to_check_zc(bundle: TableBundle, shortcuts: bool = True):
    if shortcuts and bundle.is_nilpotent:
        return ShortcutProved("nilpotent")
    if bundle.is_solvable:
        return [k for k in bundle.ordinary.element_orders() if k > 1]
    return [k for k in divisors(bundle.ordinary.exponent()) if k > 1]


def orders_to_check_pq(bundle: TableBundle, shortcuts: bool = True):
    if shortcuts and bundle.is_solvable:
        return ShortcutProved("solvable")
    return list(bundle.ordinary.prime_graph_missing_pq())


def usable_tables(bundle: TableBundle, k: int, options: SolverOptions | None = None):
    """Ordinary table plus Brauer(p) for p not dividing k; Brauer tables of
    primes the group is p-solvable for add nothing and are skipped."""
    options = options or SolverOptions()
    tables = [bundle.ordinary]
    if options.use_brauer:
        for t in bundle.brauer:
            if k % t.prime == 0:
                continue
            if options.fong_swan and t.prime in bundle.p_solvable_for:
                continue
            tables.append(t)
    return tuple(tables)


# -- lattice recursion ----------------------------------------------------------


def compatible(tup_a: PATuple, tup_b: PATuple, k: int) -> bool:
    """The two power tuples describe the same unit only if they agree on
    every order both of them cover."""
    shared = gcd(tup_a.order, tup_b.order)
    return all(
        tup_a.level(e) == tup_b.level(e) for e in divisors(shared) if e > 1
    )


def _merge_levels(k: int, parts) -> PATuple:
    levels: dict[int, object] = {}
    for part in parts:
        for e, pa in part.levels:
            levels[e] = pa
    return PATuple(k, tuple(sorted(levels.items())))


def _aggregated_rules_out(bundle, k, proper, tables, options) -> bool:
    """Try the p-constant relaxation for each prime; an infeasible aggregated
    system rules the order out without solving the full system."""
    for p in prime_factors(k):
        try:
            agg = build_system_p_constant(bundle, k, p, proper, tables)
        except ConstraintError:
            continue
        result = solve_all(
            agg, max_nodes=options.max_nodes, redundancy=options.redundancy
        )
        if isinstance(result, Finite) and not result.solutions:
            return True
    return False


def solve_order(
    bundle: TableBundle,
    k: int,
    store: SolutionStore,
    options: SolverOptions | None = None,
) -> tuple[PATuple, ...] | None:
    """Admissible tuples of order k, populating the store bottom-up.

    Returns None when an obstruction (infinite set or node budget) blocks
    the order; the reason is recorded in store.obstructions.
    """
    options = options or SolverOptions()
    if k < 2:
        raise DriverError("orders start at 2")
    if k in store.obstructions:
        return None
    if k in store.solutions:
        return store.solutions[k]

    subs = []
    for p in prime_factors(k):
        m = k // p
        if m == 1:
            continue
        got = solve_order(bundle, m, store, options)
        if got is None:
            store.obstructions[k] = store.obstructions[m]
            return None
        subs.append(got)

    tables = usable_tables(bundle, k, options)
    rows = char_rows(tables, len(bundle.ordinary.classes))
    combos = [
        combo
        for combo in product(*subs)
        if all(compatible(a, b, k) for a, b in combinations(combo, 2))
    ]

    survivors = []
    for combo in combos:
        proper = _merge_levels(k, combo)
        if options.p_constant and _aggregated_rules_out(
            bundle, k, proper, tables, options
        ):
            continue
        sys = build_system(bundle, k, proper, tables)
        result = solve_all(
            sys, max_nodes=options.max_nodes, redundancy=options.redundancy
        )
        if isinstance(result, Infinite):
            store.obstructions[k] = REASON_INFINITE
            return None
        if isinstance(result, Aborted):
            store.obstructions[k] = REASON_BUDGET
            return None
        for sol in result.solutions:
            assert_mu_sums(sys, sol, rows)
            top = pa_vector(bundle.ordinary, k, eps_projection(sys, sol))
            full = proper.with_top(top)
            if wagner_test(bundle.ordinary, full):
                survivors.append(full)

    out = tuple(sorted(set(survivors), key=canonical_key))
    store.solutions[k] = out
    return out


def solve_order_report(bundle, k, store, options=None):
    """Like solve_order but also reports the pre-congruence candidates,
    for auditing a single order."""
    options = options or SolverOptions()
    pre: list[PATuple] = []
    for p in prime_factors(k):
        m = k // p
        if m > 1 and solve_order(bundle, m, store, options) is None:
            store.obstructions[k] = store.obstructions[m]
            return None, None
    subs = [store.solutions[k // p] for p in prime_factors(k) if k // p > 1]
    tables = usable_tables(bundle, k, options)
    combos = [
        combo
        for combo in product(*subs)
        if all(compatible(a, b, k) for a, b in combinations(combo, 2))
    ]
    for combo in combos:
        proper = _merge_levels(k, combo)
        sys = build_system(bundle, k, proper, tables)
        result = solve_all(
            sys, max_nodes=options.max_nodes, redundancy=options.redundancy
        )
        if not isinstance(result, Finite):
            store.obstructions[k] = (
                REASON_INFINITE if isinstance(result, Infinite) else REASON_BUDGET
            )
            return None, None
        for sol in result.solutions:
            top = pa_vector(bundle.ordinary, k, eps_projection(sys, sol))
            pre.append(proper.with_top(top))
    pre = sorted(set(pre), key=canonical_key)
    survivors = tuple(
        t for t in pre if wagner_test(bundle.ordinary, t)
    )
    store.solutions[k] = survivors
    return survivors, tuple(pre)


# -- verdicts --------------------------------------------------------------------


def _run_orders(bundle, orders, store, options, expects_trivial):
    obstructions = []
    for k in sorted(orders):
        got = solve_order(bundle, k, store, options)
        if got is None:
            obstructions.append((k, store.obstructions[k]))
            continue
        expected = (
            set(trivial_solutions(bundle.ordinary, k)) if expects_trivial else set()
        )
        if set(got) != expected:
            obstructions.append((k, REASON_NONTRIVIAL))
    return tuple(obstructions)


def check_zc(
    bundle: TableBundle,
    options: SolverOptions | None = None,
    store: SolutionStore | None = None,
) -> Verdict:
    options = options or SolverOptions()
    store = store if store is not None else SolutionStore(bundle.group_name)
    orders = orders_to_check_zc(bundle, options.shortcuts)
    if isinstance(orders, ShortcutProved):
        return Verdict(True, orders.reason, store)
    obstructions = _run_orders(bundle, orders, store, options, expects_trivial=True)
    return Verdict(not obstructions, None, store, obstructions)


def check_pq(
    bundle: TableBundle,
    options: SolverOptions | None = None,
    store: SolutionStore | None = None,
) -> Verdict:
    options = options or SolverOptions()
    store = store if store is not None else SolutionStore(bundle.group_name)
    orders = orders_to_check_pq(bundle, options.shortcuts)
    if isinstance(orders, ShortcutProved):
        return Verdict(True, orders.reason, store)
    obstructions = _run_orders(bundle, orders, store, options, expects_trivial=False)
    return Verdict(not obstructions, None, store, obstructions)


# -- persistence ------------------------------------------------------------------


def pa_to_json(table: CharacterTable, pa) -> dict:
    return {table.classes[i].name: v for i, v in pa.entries}


def patuple_to_json(table: CharacterTable, tup: PATuple) -> dict:
    return {str(e): pa_to_json(table, pa) for e, pa in tup.levels}


def patuple_from_json(table: CharacterTable, order: int, data: dict) -> PATuple:
    levels = []
    for e_str, by_name in sorted(data.items(), key=lambda kv: int(kv[0])):
        e = int(e_str)
        values = {table.index_of(name): v for name, v in by_name.items()}
        levels.append((e, pa_vector(table, e, values)))
    return PATuple(order, tuple(levels))


def store_to_json(bundle: TableBundle, store: SolutionStore) -> dict:
    t = bundle.ordinary
    return {
        "group": store.group_name,
        "solutions": {
            str(k): [patuple_to_json(t, tup) for tup in tuples]
            for k, tuples in sorted(store.solutions.items())
        },
        "obstructions": {str(k): r for k, r in sorted(store.obstructions.items())},
    }


def store_from_json(bundle: TableBundle, data: dict) -> SolutionStore:
    if data.get("group") != bundle.group_name:
        raise DriverError(
            f"store belongs to {data.get('group')!r}, not {bundle.group_name!r}"
        )
    store = SolutionStore(bundle.group_name)
    t = bundle.ordinary
    for k_str, tuples in data.get("solutions", {}).items():
        k = int(k_str)
        loaded = []
        for item in tuples:
            tup = patuple_from_json(t, k, item)
            if not tup.is_complete():
                raise DriverError(f"stored tuple for order {k} is incomplete")
            if not wagner_test(t, tup):
                raise DriverError(
                    f"stored tuple for order {k} fails the congruence test"
                )
            loaded.append(tup)
        store.solutions[k] = tuple(sorted(set(loaded), key=canonical_key))
    for k_str, reason in data.get("obstructions", {}).items():
        store.obstructions[int(k_str)] = reason
    for k in store.solutions:
        for d in divisors(k):
            if 1 < d < k and d not in store.solutions:
                raise DriverError(
                    f"store has order {k} but no entry for its divisor {d}"
                )
    return store
