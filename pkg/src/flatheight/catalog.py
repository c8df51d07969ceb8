"""Built-in corpus of polynomials with hand-derived heights and Varchenko exponents."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Polynomial, parse


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    text: str
    h: Fraction
    nu: int
    case: str
    chart: tuple = ()          # expected non-linear steps as (target, source, ((m, c),))
    c: tuple | None = None     # FormCase2 constants

    @property
    def polynomial(self) -> Polynomial:
        return parse(self.text)


def _entries() -> list[CatalogEntry]:
    out = [CatalogEntry(f"x1^{n}", f"x1^{n}", Fraction(n), 0, "OneVar") for n in range(2, 6)]
    out += [
        CatalogEntry("x1^2 x2^2", "x1^2*x2^2", Fraction(2), 1, "TwoVar"),
        CatalogEntry("x1^2 + x2^3", "x1^2 + x2^3", Fraction(6, 5), 0, "TwoVar"),
        CatalogEntry("(x2 - x1^2)^2", "x2^2 - 2*x1^2*x2 + x1^4", Fraction(2), 0, "TwoVar",
                     chart=((1, 0, ((2, Fraction(1)),)),)),
    ]
    for n in range(5, 10):
        out.append(CatalogEntry(f"(x2 - x1^2)^2 + x1^{n}", f"x2^2 - 2*x1^2*x2 + x1^4 + x1^{n}",
                                Fraction(2 * n, n + 2), 0, "TwoVar",
                                chart=((1, 0, ((2, Fraction(1)),)),)))
    out += [
        CatalogEntry("form nu=(3,2,4)", "x1^3 + x1^2*x2 + x1^4*x3", Fraction(2), 0, "FormCase2",
                     c=(Fraction(1), Fraction(1), Fraction(0))),
        CatalogEntry("form nu=(2,3,4)", "x1^2 + x1^3*x2 + x1^4*x3", Fraction(2), 0, "FormCase1"),
        CatalogEntry("form nu=(3,4,5)", "x1^3 + x1^4*x2 + x1^5*x3", Fraction(3), 0, "FormCase1"),
    ]
    return out


CATALOG: tuple = tuple(_entries())


def find(name: str) -> CatalogEntry:
    for e in CATALOG:
        if e.name == name:
            return e
    raise KeyError(name)
