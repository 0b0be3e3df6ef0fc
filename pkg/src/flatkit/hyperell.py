"""Divisors of one-forms f(z) dz / x on hyperelliptic curves x^2 = prod(z - a_i).

The curve is described by its 2g+2 rational branch values.  Forms are given
in factored shape c * prod (z - b_j)^{k_j}, so the divisor support stays
exactly representable: zeros sit over branch values (Weierstrass points),
over other rational roots (two conjugate points each), and at the two points
over z = infinity.

The module also provides the dimension count for spaces of functions with a
single pole at a Weierstrass point, which pins down the spin parity of the
hyperelliptic locus in each genus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, str, Fraction]


def _frac(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class BranchSet:
    """The 2g+2 distinct rational branch values of a hyperelliptic curve."""

    points: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        pts = tuple(_frac(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 4 or len(pts) % 2 != 0:
            raise ValueError(f"need an even number >= 4 of branch points, got {len(pts)}")
        if len(set(pts)) != len(pts):
            raise ValueError("branch points must be pairwise distinct")

    @property
    def genus(self) -> int:
        return len(self.points) // 2 - 1


def branch_set(points: Iterable[Rational]) -> BranchSet:
    return BranchSet(tuple(_frac(p) for p in points))


@dataclass(frozen=True)
class FactoredForm:
    """The one-form c * prod (z - b_j)^{k_j} dz / x, roots given exactly."""

    constant: Fraction
    factors: tuple[tuple[Fraction, int], ...]

    def __post_init__(self) -> None:
        c = _frac(self.constant)
        facs = tuple((_frac(b), int(k)) for b, k in self.factors)
        object.__setattr__(self, "constant", c)
        object.__setattr__(self, "factors", facs)
        if c == 0:
            raise ValueError("constant factor must be nonzero")
        roots = [b for b, _ in facs]
        if len(set(roots)) != len(roots):
            raise ValueError("roots must be distinct; combine repeated factors")
        if any(k < 1 for _, k in facs):
            raise ValueError("multiplicities must be >= 1")

    @property
    def degree(self) -> int:
        return sum(k for _, k in self.factors)

    def multiplicity(self, value: Fraction) -> int:
        for b, k in self.factors:
            if b == value:
                return k
        return 0

    def __str__(self) -> str:
        parts = []
        if self.constant != 1 or not self.factors:
            parts.append(str(self.constant))
        for b, k in self.factors:
            if b == 0:
                base = "z"
            elif b > 0:
                base = f"(z-{b})"
            else:
                base = f"(z+{-b})"
            parts.append(base if k == 1 else f"{base}^{k}")
        return "*".join(parts)


def factored_form(
    constant: Rational, factors: Iterable[tuple[Rational, int]] = ()
) -> FactoredForm:
    return FactoredForm(_frac(constant), tuple((_frac(b), int(k)) for b, k in factors))


_FACTOR_RE = re.compile(
    r"""^\(\s*z\s*(?P<op>[+-])\s*(?P<root>[0-9]+(?:/[0-9]+)?)\s*\)(?:\^(?P<mult>[0-9]+))?$"""
)
_BARE_Z_RE = re.compile(r"""^z(?:\^(?P<mult>[0-9]+))?$""")


def parse_form(text: str) -> FactoredForm:
    """Parse a factored-form string like "3*(z-1)^2*(z+1/2)" or "z^2" or "5"."""
    constant = Fraction(1)
    mults: dict[Fraction, int] = {}
    saw_factor_or_constant = False
    for token in text.replace(" ", "").split("*"):
        if not token:
            raise ValueError(f"empty factor in form string {text!r}")
        m = _FACTOR_RE.match(token)
        if m is not None:
            root = Fraction(m.group("root"))
            if m.group("op") == "+":
                root = -root
            k = int(m.group("mult") or 1)
            mults[root] = mults.get(root, 0) + k
            saw_factor_or_constant = True
            continue
        m = _BARE_Z_RE.match(token)
        if m is not None:
            k = int(m.group("mult") or 1)
            mults[Fraction(0)] = mults.get(Fraction(0), 0) + k
            saw_factor_or_constant = True
            continue
        try:
            constant *= Fraction(token)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse factor {token!r} in form string {text!r}") from exc
        saw_factor_or_constant = True
    if not saw_factor_or_constant:
        raise ValueError(f"empty form string {text!r}")
    return FactoredForm(constant, tuple(sorted(mults.items())))


# --- places and divisors ----------------------------------------------------


@dataclass(frozen=True)
class WeierstrassPlace:
    """The single point over a branch value a (fixed by the involution)."""

    branch: Fraction

    def __str__(self) -> str:
        return f"W({self.branch})"


@dataclass(frozen=True)
class ConjugatePairPlace:
    """The two involution-swapped points over a non-branch value b.

    The recorded order holds at each of the two points, so this place
    contributes twice its order to degree counts.
    """

    root: Fraction

    def __str__(self) -> str:
        return f"pair({self.root})"


@dataclass(frozen=True)
class InfinityPlace:
    """One of the two points over z = infinity, labeled +1 / -1."""

    sign: int

    def __str__(self) -> str:
        return "inf+" if self.sign > 0 else "inf-"


Place = Union[WeierstrassPlace, ConjugatePairPlace, InfinityPlace]


@dataclass(frozen=True)
class DivisorOnCurve:
    """Order table of a form; zero-order places are omitted."""

    entries: tuple[tuple[Place, int], ...]

    def order_at(self, place: Place) -> int:
        for p, order in self.entries:
            if p == place:
                return order
        return 0

    @property
    def total_order(self) -> int:
        total = 0
        for place, order in self.entries:
            total += 2 * order if isinstance(place, ConjugatePairPlace) else order
        return total

    @property
    def is_effective(self) -> bool:
        return all(order >= 0 for _, order in self.entries)


def divisor_of_form(branches: BranchSet, form: FactoredForm) -> DivisorOnCurve:
    """Exact divisor of the form on the curve with the given branch values.

    Local orders: over a branch value a the coordinate z - a vanishes to
    second order and dz/x is a unit, giving order 2*mult(a); over any other
    root b the two preimage points each see order mult(b); at each point over
    infinity the form dz/x has a zero of order g - 1, shifted down by the
    degree of f.
    """
    g = branches.genus
    entries: list[tuple[Place, int]] = []
    branch_values = set(branches.points)
    for a in branches.points:
        order = 2 * form.multiplicity(a)
        if order != 0:
            entries.append((WeierstrassPlace(a), order))
    for b, k in form.factors:
        if b not in branch_values:
            entries.append((ConjugatePairPlace(b), k))
    inf_order = g - 1 - form.degree
    if inf_order != 0:
        entries.append((InfinityPlace(+1), inf_order))
        entries.append((InfinityPlace(-1), inf_order))
    div = DivisorOnCurve(tuple(entries))
    if div.total_order != 2 * g - 2:
        raise RuntimeError(
            f"divisor degree {div.total_order} != 2g-2 = {2 * g - 2}; order rules broken"
        )
    return div


def is_holomorphic(branches: BranchSet, form: FactoredForm) -> bool:
    return divisor_of_form(branches, form).is_effective


@dataclass(frozen=True)
class BasisReport:
    """Holomorphy of z^k dz/x for k = 0..g: the first g must hold, k = g not."""

    genus: int
    holomorphic: tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return all(self.holomorphic[: self.genus]) and not self.holomorphic[self.genus]


def basis_check(branches: BranchSet) -> BasisReport:
    g = branches.genus
    flags = []
    for k in range(g + 1):
        factors = ((Fraction(0), k),) if k > 0 else ()
        flags.append(is_holomorphic(branches, FactoredForm(Fraction(1), factors)))
    return BasisReport(g, tuple(flags))


# --- function-space dimensions at a Weierstrass point -----------------------


def h0_weierstrass_multiple(k: int, g: int) -> int:
    """dim of the space of functions with a pole of order <= k at one
    Weierstrass point, for 0 <= k <= 2g-1.

    On these curves the achievable pole orders below 2g are exactly the even
    ones (powers of the degree-two function z), so the dimension grows by one
    at each even k.
    """
    if g < 1:
        raise ValueError(f"genus must be >= 1, got {g}")
    if not 0 <= k <= 2 * g - 1:
        raise ValueError(f"pole order {k} out of range 0..{2 * g - 1}")
    return 1 + k // 2


def hyperelliptic_component_parity(g: int) -> int:
    """Spin parity carried by the hyperelliptic family in genus g >= 2.

    The one-form with a single zero of order 2g-2 at a Weierstrass point has
    parity h0((g-1) * W) mod 2.
    """
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    return h0_weierstrass_multiple(g - 1, g) % 2
