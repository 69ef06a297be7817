"""Congruence filter on complete partial augmentation tuples.

For a unit u of order k = p^j * m with p prime, p^j the exact p-part and
m != 1, raising to the p^j-th power maps each support class x to
class_of_power(x, p^j), and the partial augmentations must satisfy, for
every class s,

    sum over x with x^(p^j) in s of eps_x(u)  ==  eps_s(u^(p^j))   (mod p).

Prime-power orders admit no such p^j, so the test is vacuous there.  This
cuts tuples that pass the eigenvalue-multiplicity constraints; the classic
case is M11 at order 12, where it removes both surviving candidates.
"""

from __future__ import annotations

from .arith import factorize
from .chartables import CharacterTable
from .constraints import PATuple


def wagner_test(table: CharacterTable, tup: PATuple) -> bool:
    """True iff the complete tuple satisfies every congruence.

    Raises if a required power level is absent from the tuple.  Besides the
    classwise form, the aggregate form is checked: the eps over classes of
    order exactly p^j sum to 0 mod p.  For genuine units the aggregate is a
    consequence (by induction through the intermediate powers), but for
    candidate tuples with j >= 2 it is independent of the same-order
    classwise congruences, and it is what rejects one of the two M11
    order-12 candidates.
    """
    k = tup.order
    top = tup.level(k)
    for p, j in factorize(k):
        q = p**j
        m = k // q
        if m == 1:
            continue
        level = tup.level(m)
        sums: dict[int, int] = {}
        for x, eps in top.entries:
            s = table.class_of_power(x, q)
            sums[s] = sums.get(s, 0) + eps
        touched = set(sums) | {i for i, _ in level.entries}
        if any((sums.get(s, 0) - level.value(s)) % p for s in touched):
            return False
        exact = sum(
            eps for x, eps in top.entries if table.classes[x].element_order == q
        )
        if exact % p:
            return False
    return True
