"""Character table data model and the JSON bundle format.

A bundle holds one ordinary character table and optionally Brauer (p-modular)
tables for some primes.  All values are exact cyclotomic numbers.  Loading
validates the table hard: class sizes must sum to the group order, power maps
must exist for every prime dividing the exponent and respect element orders,
and the ordinary rows must satisfy exact row orthogonality.  A table that
fails any check is rejected outright, since every downstream constraint is
only as trustworthy as the table it came from.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path

from .arith import factorize, is_prime, prime_factors
from .cyclotomics import Cyc, cyc_from_json, cyc_to_json, rational, root_of_unity


class BundleError(ValueError):
    """Raised when a table file violates the format or a table invariant."""


@dataclass(frozen=True)
class ClassInfo:
    name: str
    element_order: int
    size: int


class CharacterTable:
    """One character table: ordinary (prime=None) or p-modular (prime=p).

    For Brauer tables, classes are the p-regular subset of the ordinary
    classes (same names); `ordinary_index[i]` locates class i in the ordinary
    table.
    """

    def __init__(
        self,
        group_name: str,
        group_order: int,
        classes: tuple[ClassInfo, ...],
        power_maps: dict[int, tuple[int, ...]],
        characters: tuple[tuple[Cyc, ...], ...],
        extra_characters: tuple[tuple[Cyc, ...], ...] = (),
        prime: int | None = None,
        ordinary_index: tuple[int, ...] | None = None,
    ):
        self.group_name = group_name
        self.group_order = group_order
        self.classes = classes
        self.power_maps = power_maps
        self.characters = characters
        self.extra_characters = extra_characters
        self.prime = prime
        self.ordinary_index = ordinary_index
        self._by_name = {cl.name: i for i, cl in enumerate(classes)}
        self._identity = next(
            (i for i, cl in enumerate(classes) if cl.element_order == 1), None
        )

    @property
    def is_brauer(self) -> bool:
        return self.prime is not None

    @property
    def identity_index(self) -> int:
        if self._identity is None:
            raise BundleError(f"{self.group_name}: table has no identity class")
        return self._identity

    def index_of(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise BundleError(f"{self.group_name}: no class named {name!r}") from None

    def degree(self, row: tuple[Cyc, ...]) -> int:
        d = row[self.identity_index].as_rational()
        if d is None or d.denominator != 1 or d <= 0:
            raise BundleError(f"{self.group_name}: character degree {d} is not a positive integer")
        return int(d)

    def element_orders(self) -> tuple[int, ...]:
        return tuple(sorted({cl.element_order for cl in self.classes}))

    def exponent(self) -> int:
        return lcm(*(cl.element_order for cl in self.classes))

    def prime_graph_missing_pq(self) -> tuple[int, ...]:
        """Products p*q of distinct primes both occurring as element orders,
        with no element of order p*q."""
        orders = set(self.element_orders())
        primes = sorted({p for o in orders for p in prime_factors(o)})
        out = []
        for i, p in enumerate(primes):
            for q in primes[i + 1:]:
                if p * q not in orders:
                    out.append(p * q)
        return tuple(sorted(out))

    def class_of_power(self, c: int, d: int) -> int:
        """Index of the class of x^d for x in class c, composing power maps."""
        d %= self.exponent()
        if d == 0:
            return self.identity_index
        for p, e in factorize(d):
            pm = self.power_maps.get(p)
            if pm is None:
                raise BundleError(
                    f"{self.group_name}: power map for prime {p} is missing"
                )
            for _ in range(e):
                c = pm[c]
        return c

    def classes_of_order_dividing(self, k: int) -> tuple[int, ...]:
        """Non-identity classes whose element order divides k (table order)."""
        return tuple(
            i
            for i, cl in enumerate(self.classes)
            if cl.element_order > 1 and k % cl.element_order == 0
        )


class TableBundle:
    def __init__(
        self,
        group_name: str,
        ordinary: CharacterTable,
        brauer: tuple[CharacterTable, ...] = (),
        is_solvable: bool | None = None,
        is_nilpotent: bool | None = None,
        p_solvable_for: frozenset[int] = frozenset(),
    ):
        self.group_name = group_name
        self.ordinary = ordinary
        self.brauer = brauer
        self.is_solvable = is_solvable
        self.is_nilpotent = is_nilpotent
        self.p_solvable_for = p_solvable_for

    def brauer_for(self, p: int) -> CharacterTable | None:
        for t in self.brauer:
            if t.prime == p:
                return t
        return None

    @property
    def brauer_primes(self) -> tuple[int, ...]:
        return tuple(t.prime for t in self.brauer)


# -- validation ---------------------------------------------------------------

def _check_ordinary(table: CharacterTable) -> None:
    g = table.group_name
    if table.group_order < 1:
        raise BundleError(f"{g}: group order must be positive")
    if not table.classes:
        raise BundleError(f"{g}: table has no classes")
    names = [cl.name for cl in table.classes]
    if len(set(names)) != len(names):
        raise BundleError(f"{g}: duplicate class names")
    identities = [cl for cl in table.classes if cl.element_order == 1]
    if len(identities) != 1 or identities[0].size != 1:
        raise BundleError(f"{g}: need exactly one identity class of size 1")
    for cl in table.classes:
        if cl.element_order < 1 or table.group_order % cl.element_order:
            raise BundleError(
                f"{g}: class {cl.name} order {cl.element_order} does not divide {table.group_order}"
            )
        if cl.size < 1:
            raise BundleError(f"{g}: class {cl.name} has nonpositive size")
    if sum(cl.size for cl in table.classes) != table.group_order:
        raise BundleError(f"{g}: class sizes do not sum to the group order")

    for p in prime_factors(table.exponent()):
        if p not in table.power_maps:
            raise BundleError(f"{g}: power map for prime {p} is missing")
    for p, pm in table.power_maps.items():
        if len(pm) != len(table.classes):
            raise BundleError(f"{g}: power map for {p} has wrong length")
        for i, j in enumerate(pm):
            if not 0 <= j < len(table.classes):
                raise BundleError(f"{g}: power map for {p} has a bad class index {j}")
            o = table.classes[i].element_order
            if table.classes[j].element_order != o // gcd(o, p):
                raise BundleError(
                    f"{g}: power map for {p} sends {table.classes[i].name} to a class of wrong order"
                )

    if not table.characters:
        raise BundleError(f"{g}: table has no characters")
    for rows in (table.characters, table.extra_characters):
        for row in rows:
            if len(row) != len(table.classes):
                raise BundleError(f"{g}: character row has wrong arity")
            table.degree(row)

    # exact row orthogonality over the ordinary irreducibles
    order = Fraction(table.group_order)
    for i, chi in enumerate(table.characters):
        for j in range(i, len(table.characters)):
            psi = table.characters[j]
            total = rational(0)
            for cl, a, b in zip(table.classes, chi, psi):
                total = total + a * b.conjugate() * cl.size
            expect = order if i == j else Fraction(0)
            if total != rational(expect):
                raise BundleError(
                    f"{g}: row orthogonality fails for characters {i} and {j}"
                )


def _check_brauer(table: CharacterTable, ordinary: CharacterTable) -> None:
    g = f"{table.group_name} mod {table.prime}"
    p = table.prime
    if not is_prime(p):
        raise BundleError(f"{g}: {p} is not a prime")
    if ordinary.group_order % p:
        raise BundleError(f"{g}: {p} does not divide the group order")
    regular = {cl.name for cl in ordinary.classes if cl.element_order % p != 0}
    listed = [cl.name for cl in table.classes]
    if len(set(listed)) != len(listed):
        raise BundleError(f"{g}: duplicate class names")
    if set(listed) != regular:
        raise BundleError(
            f"{g}: classes must be exactly the {p}-regular ordinary classes"
        )
    if not table.characters:
        raise BundleError(f"{g}: table has no characters")
    for row in table.characters:
        if len(row) != len(table.classes):
            raise BundleError(f"{g}: character row has wrong arity")
        table.degree(row)


# -- construction -------------------------------------------------------------

def _parse_ordinary(group: str, order: int, node: dict) -> CharacterTable:
    try:
        raw_classes = node["classes"]
        raw_pm = node["power_maps"]
        raw_chars = node["characters"]
    except (TypeError, KeyError) as exc:
        raise BundleError(f"{group}: ordinary table missing field {exc}") from None
    classes = []
    for rc in raw_classes:
        try:
            classes.append(ClassInfo(str(rc["name"]), int(rc["order"]), int(rc["size"])))
        except (TypeError, KeyError) as exc:
            raise BundleError(f"{group}: malformed class entry {rc!r}") from None
    power_maps = {}
    for key, pm in raw_pm.items():
        try:
            power_maps[int(key)] = tuple(int(i) for i in pm)
        except (TypeError, ValueError):
            raise BundleError(f"{group}: malformed power map for {key!r}") from None
    def decode_rows(rows, what):
        out = []
        for row in rows:
            try:
                out.append(tuple(cyc_from_json(v) for v in row))
            except ValueError as exc:
                raise BundleError(f"{group}: bad value in {what}: {exc}") from None
        return tuple(out)
    characters = decode_rows(raw_chars, "characters")
    extra = decode_rows(node.get("extra_characters", []), "extra_characters")
    return CharacterTable(
        group, order, tuple(classes), power_maps, characters, extra_characters=extra
    )


def _parse_brauer(group: str, ordinary: CharacterTable, node: dict) -> CharacterTable:
    try:
        p = int(node["p"])
        raw_classes = node["classes"]
        raw_chars = node["characters"]
    except (TypeError, KeyError) as exc:
        raise BundleError(f"{group}: Brauer table missing field {exc}") from None
    indices = []
    for name in raw_classes:
        if name not in ordinary._by_name:
            raise BundleError(
                f"{group} mod {p}: unresolved class reference {name!r}"
            )
        indices.append(ordinary.index_of(name))
    classes = tuple(ordinary.classes[i] for i in indices)
    sub_pos = {oi: i for i, oi in enumerate(indices)}
    power_maps = {}
    if classes:
        exp = lcm(*(cl.element_order for cl in classes))
        for q in prime_factors(exp):
            opm = ordinary.power_maps.get(q)
            if opm is None:
                raise BundleError(f"{group}: power map for prime {q} is missing")
            power_maps[q] = tuple(sub_pos[opm[oi]] for oi in indices)
    characters = []
    for row in raw_chars:
        try:
            characters.append(tuple(cyc_from_json(v) for v in row))
        except ValueError as exc:
            raise BundleError(f"{group} mod {p}: bad character value: {exc}") from None
    return CharacterTable(
        group,
        ordinary.group_order,
        classes,
        power_maps,
        tuple(characters),
        prime=p,
        ordinary_index=tuple(indices),
    )


def load_bundle(source: str | Path | dict) -> TableBundle:
    """Load and validate a table bundle from a JSON file or parsed dict."""
    if isinstance(source, (str, Path)):
        try:
            with open(source) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise BundleError(f"cannot read bundle {source}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise BundleError(f"bundle {source} is not valid JSON: {exc}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise BundleError("bundle must be a JSON object")
    try:
        group = str(data["group"])
        order = int(data["order"])
        ordinary_node = data["ordinary"]
    except (TypeError, KeyError, ValueError) as exc:
        raise BundleError(f"bundle missing or malformed field: {exc}") from None

    ordinary = _parse_ordinary(group, order, ordinary_node)
    _check_ordinary(ordinary)

    brauer = []
    seen = set()
    for node in data.get("brauer", []):
        t = _parse_brauer(group, ordinary, node)
        if t.prime in seen:
            raise BundleError(f"{group}: duplicate Brauer table for p={t.prime}")
        seen.add(t.prime)
        _check_brauer(t, ordinary)
        brauer.append(t)

    flags = data.get("flags", {})
    if not isinstance(flags, dict):
        raise BundleError(f"{group}: flags must be an object")
    for key in ("is_solvable", "is_nilpotent"):
        if key in flags and not isinstance(flags[key], bool):
            raise BundleError(f"{group}: flag {key} must be boolean")
    psf = flags.get("p_solvable_for", [])
    if not isinstance(psf, list) or not all(is_prime(int(p)) for p in psf):
        raise BundleError(f"{group}: p_solvable_for must be a list of primes")

    return TableBundle(
        group,
        ordinary,
        tuple(brauer),
        is_solvable=flags.get("is_solvable"),
        is_nilpotent=flags.get("is_nilpotent"),
        p_solvable_for=frozenset(int(p) for p in psf),
    )


def cyclic_table(n: int) -> TableBundle:
    """The full table bundle of the cyclic group of order n (generator g)."""
    if n < 1:
        raise ValueError(f"cyclic group order must be positive, got {n}")
    classes = tuple(
        ClassInfo(f"g{a}", n // gcd(n, a) if a else 1, 1) for a in range(n)
    )
    power_maps = {p: tuple((a * p) % n for a in range(n)) for p in prime_factors(n)}
    characters = tuple(
        tuple(root_of_unity(n, j * a) for a in range(n)) for j in range(n)
    )
    table = CharacterTable(f"C{n}", n, classes, power_maps, characters)
    return TableBundle(
        f"C{n}",
        table,
        is_solvable=True,
        is_nilpotent=True,
        p_solvable_for=frozenset(prime_factors(n)),
    )


# -- bundled data on disk -----------------------------------------------------

DATA_ENV_VAR = "HELPZC_DATA"


def data_dir() -> Path:
    """Directory holding the packaged table bundles (env override honored)."""
    env = os.environ.get(DATA_ENV_VAR)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def resolve_bundle_path(name: str) -> Path:
    """Resolve a bundle argument: a real path, or a name in the data directory."""
    p = Path(name)
    if p.is_file():
        return p
    base = data_dir()
    for candidate in (base / name, base / p.name, base / f"{p.name}.json"):
        if candidate.is_file():
            return candidate
    raise BundleError(f"no bundle found for {name!r} (searched {base})")


def bundle_to_json(bundle: TableBundle) -> dict:
    """Inverse of load_bundle, mainly for tests and tooling."""
    ordinary = bundle.ordinary
    node = {
        "group": bundle.group_name,
        "order": ordinary.group_order,
        "ordinary": {
            "classes": [
                {"name": cl.name, "order": cl.element_order, "size": cl.size}
                for cl in ordinary.classes
            ],
            "power_maps": {str(p): list(pm) for p, pm in sorted(ordinary.power_maps.items())},
            "characters": [[cyc_to_json(v) for v in row] for row in ordinary.characters],
        },
    }
    if ordinary.extra_characters:
        node["ordinary"]["extra_characters"] = [
            [cyc_to_json(v) for v in row] for row in ordinary.extra_characters
        ]
    if bundle.brauer:
        node["brauer"] = [
            {
                "p": t.prime,
                "classes": [cl.name for cl in t.classes],
                "characters": [[cyc_to_json(v) for v in row] for row in t.characters],
            }
            for t in bundle.brauer
        ]
    flags = {}
    if bundle.is_solvable is not None:
        flags["is_solvable"] = bundle.is_solvable
    if bundle.is_nilpotent is not None:
        flags["is_nilpotent"] = bundle.is_nilpotent
    if bundle.p_solvable_for:
        flags["p_solvable_for"] = sorted(bundle.p_solvable_for)
    if flags:
        node["flags"] = flags
    return node
