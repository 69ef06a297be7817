"""Shared test utilities: random system generation and brute-force oracles."""

from fractions import Fraction
from itertools import product

from helpzc.arith import divisors
from helpzc.cyclotomics import rational, root_of_unity
from helpzc.intsolve import LinSystem


def brute_force_pa_solutions(bundle, k, proper_levels, bound, tables=None):
    """All eps vectors over the classes of order dividing k, entries in
    [-bound, bound] and summing to 1, for which every eigenvalue multiplicity
    mu_l(u, psi) is a nonnegative integer.

    Computed straight from the trace formula, bypassing the system builder
    and the integer solver entirely.  `proper_levels` maps each divisor
    e of k with 1 < e < k to {class index: eps value} for u^(k/e).
    """
    ordinary = bundle.ordinary
    if tables is None:
        tables = (ordinary,) + tuple(t for t in bundle.brauer if k % t.prime)
    rows = []
    for t in tables:
        for row in tuple(t.characters) + tuple(t.extra_characters):
            values = [None] * len(ordinary.classes)
            if t.is_brauer:
                for sub_i, ord_i in enumerate(t.ordinary_index):
                    values[ord_i] = row[sub_i]
            else:
                values = list(row)
            rows.append((t.degree(row), values))
    support = ordinary.classes_of_order_dividing(k)

    def power_value(values, e, assignment):
        if e == 1:
            return None  # handled by degree
        if e == k:
            items = zip(support, assignment)
        else:
            items = proper_levels[e].items()
        total = rational(0)
        for x, c in items:
            total = total + values[x] * c
        return total

    solutions = []
    for assignment in product(range(-bound, bound + 1), repeat=len(support)):
        if sum(assignment) != 1:
            continue
        good = True
        for degree, values in rows:
            for ell in range(k):
                total = Fraction(0)
                for d in divisors(k):
                    e = k // d
                    if e == 1:
                        val = rational(degree)
                    else:
                        val = power_value(values, e, assignment)
                    total += (val * root_of_unity(e, -ell)).trace_to_rational(e)
                mu, rem = divmod(total, k)
                if rem or mu < 0:
                    good = False
                    break
            if not good:
                break
        if good:
            solutions.append(assignment)
    return solutions


def random_system(rng, max_vars=4, cmax=6, name_prefix="x"):
    n = rng.randint(1, max_vars)
    m = rng.randint(1, 3)
    equalities = tuple(
        (
            tuple(rng.randint(-cmax, cmax) for _ in range(n)),
            rng.randint(-cmax, cmax),
        )
        for _ in range(m)
    )
    if rng.random() < 0.5:
        nonneg = frozenset(range(n))
    else:
        nonneg = frozenset(i for i in range(n) if rng.random() < 0.5)
    return LinSystem(
        tuple(f"{name_prefix}{i}" for i in range(n)), equalities, nonneg
    )


def box_solutions(sys, bound):
    """All solutions with every coordinate in [-bound, bound], sorted."""
    n = len(sys.variables)
    return tuple(
        pt
        for pt in product(range(-bound, bound + 1), repeat=n)
        if sys.check_solution(pt)
    )


def in_box(point, bound):
    return all(-bound <= v <= bound for v in point)
