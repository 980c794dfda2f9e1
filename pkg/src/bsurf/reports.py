"""Report containers shared by the validation and certificate operations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

CERTIFIED = "certified"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()
    notes: tuple = ()

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        out = ["valid" if self.ok else "INVALID"]
        out += [f"  violation: {v}" for v in self.violations]
        out += [f"  note: {n}" for n in self.notes]
        return out


@dataclass(frozen=True)
class CertificateItem:
    name: str
    status: str
    detail: str = ""

    def line(self):
        d = f" ({self.detail})" if self.detail else ""
        return f"{self.name}: {self.status}{d}"


@dataclass(frozen=True)
class CertificateReport:
    items: tuple = ()

    @property
    def certified(self):
        return all(i.status == CERTIFIED for i in self.items)

    @property
    def violated(self):
        return any(i.status == VIOLATED for i in self.items)

    def lines(self):
        return [i.line() for i in self.items]


def fmt_rat(x):
    """Rational as p/q text, integers without the /1."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def render_table(headers, rows):
    """Aligned plain-text table; deterministic for identical input."""
    cells = [list(map(str, headers))] + [list(map(str, r)) for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    lines = []
    for k, row in enumerate(cells):
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return lines
