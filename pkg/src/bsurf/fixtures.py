"""Shipped example data: the dyadic (Chamanara) diagram, the base-10 diagram,
seeded genus-2 zippered-rectangle triples for both fixture Rauzy classes, and
the rejection sampler the property suites draw triples from.

The named triples were drawn by sample_triple and verified to pass depth-220
endpoint and induction certificates; the tests re-verify this at run time.
"""

from __future__ import annotations

from fractions import Fraction

from .core_diagram import DiagramWindow, Edge, Level
from .iet_zip import PermutationPair, TripleData, in_cone
from .states_charts import State


def _uniform_window(lo, hi, n_edges, base_symbol="v"):
    """Single-vertex levels, n_edges parallel edges ranked by digit both ways."""

    def level(n):
        return Level(n, (base_symbol,))

    def edges(n):
        return tuple(
            Edge(level=n, id=str(d), source=base_symbol, range=base_symbol,
                 r_rank=d, s_rank=d)
            for d in range(n_edges)
        )

    def generator(window, direction):
        if direction == "right":
            n = window.max_level + 1
            return level(n), edges(n)
        n = window.min_level - 1
        return level(n), edges(n + 1)

    return DiagramWindow(
        levels=tuple(level(n) for n in range(lo, hi + 1)),
        edges=tuple(edges(n) for n in range(lo + 1, hi + 1)),
        generator=generator,
    )


def chamanara_window(depth=4):
    """The one-vertex, two-edges-per-level diagram on [-depth, depth]."""
    return _uniform_window(-depth, depth, 2)


def chamanara_state(window):
    """The canonical state nu_r(v_n) = 2^n, nu_s(v_n) = 2^-n."""
    lo, hi = window.min_level, window.max_level
    return State(
        nu_r={n: {"v": Fraction(2) ** n} for n in range(lo, hi + 1)},
        nu_s={n: {"v": Fraction(2) ** -n} for n in range(lo, hi + 1)},
    )


def decimal_window(lo=0, hi=4):
    """The base-10 diagram: one vertex, ten edges per level."""
    return _uniform_window(lo, hi, 10)


def decimal_state(window):
    lo, hi = window.min_level, window.max_level
    return State(
        nu_r={n: {"v": Fraction(10) ** n} for n in range(lo, hi + 1)},
        nu_s={n: {"v": Fraction(10) ** -n} for n in range(lo, hi + 1)},
    )


def sample_triple(perm: PermutationPair, rng, scale=10**6, max_tries=10000) -> TripleData:
    """A random rational triple with tau in the suspension cone and both
    induction hypotheses holding at the seed."""
    for _ in range(max_tries):
        lam = {a: Fraction(rng.randint(1, scale), rng.randint(1, scale))
               for a in perm.alphabet}
        tau = {a: Fraction(rng.randint(-scale, scale), rng.randint(1, scale))
               for a in perm.alphabet}
        if not in_cone(perm, tau):
            continue
        if sum(tau.values()) == 0:
            continue
        if lam[perm.alpha(0)] == lam[perm.alpha(1)]:
            continue
        return TripleData(perm, lam, tau)
    raise RuntimeError("cone sampling failed; widen the scale")


# the two genus-2 fixture classes: d=4 hyperelliptic and the d=5 class
H2_HYP_PI = "A B C D / D C B A"
H2_SECOND_PI = "A B C D E / E D C B A"

_H2_HYP_LAM = {"A": "13234/46765", "B": "864020/953467",
               "C": "741237/749464", "D": "458679/804214"}
_H2_HYP_TAU = {"A": "862064/538527", "B": "340023/258727",
               "C": "890959/610989", "D": "-466883/154339"}
_H2_SECOND_LAM = {"A": "269456/123661", "B": "415279/827936", "C": "245641/498247",
                  "D": "683084/722509", "E": "168014/720409"}
_H2_SECOND_TAU = {"A": "287879/64527", "B": "-963016/900161", "C": "-18247/302210",
                  "D": "952590/499361", "E": "-452311/158866"}


def h2_hyperelliptic_triple() -> TripleData:
    perm = PermutationPair.parse(H2_HYP_PI)
    return TripleData(perm,
                      {a: Fraction(x) for a, x in _H2_HYP_LAM.items()},
                      {a: Fraction(x) for a, x in _H2_HYP_TAU.items()})


def h2_second_triple() -> TripleData:
    perm = PermutationPair.parse(H2_SECOND_PI)
    return TripleData(perm,
                      {a: Fraction(x) for a, x in _H2_SECOND_LAM.items()},
                      {a: Fraction(x) for a, x in _H2_SECOND_TAU.items()})


def fixture_triples():
    return {"h2-hyperelliptic": h2_hyperelliptic_triple(),
            "h2-second": h2_second_triple()}
