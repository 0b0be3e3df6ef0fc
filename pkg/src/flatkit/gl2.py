"""Action of orientation-preserving rational 2x2 matrices on polygon surfaces.

A matrix acts on a surface by mapping every vertex (hence every edge vector)
linearly; the combinatorics of the gluing is untouched.  Genus, stratum and
the rank of the periods are invariant, and rational linear relations among
the period vectors are carried along exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from . import flatcore
from .flatcore import PlanarVec, PolygonChain, TranslationSurface

Rational = Union[int, str, Fraction]


def _frac(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Mat2:
    """Rational 2x2 matrix [[a, b], [c, d]]."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _frac(getattr(self, name)))

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def map_vec(self, v: PlanarVec) -> PlanarVec:
        return PlanarVec(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def __str__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2(Fraction(1), Fraction(0), Fraction(0), Fraction(1))


def mat2(a: Rational, b: Rational, c: Rational, d: Rational) -> Mat2:
    return Mat2(_frac(a), _frac(b), _frac(c), _frac(d))


def rotation(cos_value: Rational, sin_value: Rational) -> Mat2:
    """Rational rotation matrix; (cos, sin) must lie on the unit circle."""
    c, s = _frac(cos_value), _frac(sin_value)
    if c * c + s * s != 1:
        raise ValueError(f"({c}, {s}) is not on the unit circle")
    return Mat2(c, -s, s, c)


def apply(surf: TranslationSurface, m: Mat2) -> TranslationSurface:
    """Image surface with every vertex mapped by m; the pairing is reused.

    Raises for det <= 0: an orientation-reversing map would flip the polygons
    to clockwise order and does not act on these surfaces.
    """
    if m.det <= 0:
        raise ValueError(f"orientation-reversing or singular matrix (det = {m.det})")
    report = flatcore.validate(surf)
    if not report.ok:
        raise ValueError("invalid surface: " + "; ".join(report.violations))
    polys = tuple(
        PolygonChain(tuple(m.map_vec(p) for p in poly.vertices)) for poly in surf.polygons
    )
    image = TranslationSurface(polys, surf.pairing)
    image_report = flatcore.validate(image)
    if not image_report.ok:
        raise RuntimeError(
            "matrix image failed validation: " + "; ".join(image_report.violations)
        )
    return image


def _relation_holds(vectors: Sequence[PlanarVec], coeffs: Sequence[Fraction]) -> bool:
    x = sum((c * v.x for c, v in zip(coeffs, vectors)), Fraction(0))
    y = sum((c * v.y for c, v in zip(coeffs, vectors)), Fraction(0))
    return x == 0 and y == 0


def check_linear_relations(
    surf: TranslationSurface,
    relations: Sequence[Sequence[Rational]],
    m: Mat2,
) -> bool:
    """Whether rational relations among the period vectors survive the action.

    Each relation is a coefficient vector over the edge pairs in the order
    reported by flatcore.periods.  The relations must hold on the input
    surface (checked, ValueError otherwise); the return value says whether
    they all hold on the image.  By linearity this is always true; the
    function makes that claim executable.
    """
    before = flatcore.periods(surf).vectors
    parsed = [[_frac(c) for c in rel] for rel in relations]
    for rel in parsed:
        if len(rel) != len(before):
            raise ValueError(
                f"relation length {len(rel)} does not match {len(before)} edge pairs"
            )
        if not _relation_holds(before, rel):
            raise ValueError(f"relation {rel} does not hold on the input surface")
    after = flatcore.periods(apply(surf, m)).vectors
    return all(_relation_holds(after, rel) for rel in parsed)
