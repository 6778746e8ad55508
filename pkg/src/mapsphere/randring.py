"""Random rational Poincaré duality algebras from Macaulay inverse systems.

Pick a free graded-commutative algebra ``R`` on a few generators of degree
2, 3 or 4 and a random homogeneous ``F`` of degree ``2n``.  Monomials act on
``F`` by contraction (graded partial derivatives), and
``H = R / Ann(F)`` is a Poincaré duality algebra with top class dual to ``F``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement

from . import linalg
from .cga import Derivation, FreeCGA, Polynomial
from .poincare import CohomologyRing, format_coefficient, parse_ring, ring_to_document


def _monomials(R: FreeCGA, degree: int) -> list:
    """Nonzero normal-form monomials of a given degree."""
    out = []
    gens = R.generators

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for g in gens[start:]:
            if g.degree > remaining:
                continue
            if g.degree % 2 and acc and acc[-1] == g.id:
                continue
            acc.append(g.id)
            rec(g.id, remaining - g.degree, acc)
            acc.pop()
    rec(0, degree, [])
    return out


class InverseSystem:
    def __init__(self, R: FreeCGA, F: Polynomial):
        self.R = R
        self.F = F
        self.top = F.degree()
        self._partials = {g.id: Derivation(R, -g.degree, {g.label: R.one()}) for g in R.generators}

    def act(self, mono: tuple) -> Polynomial:
        p = self.F
        for g in reversed(mono):
            p = self._partials[g](p)
            if not p:
                break
        return p


def _vector(p: Polynomial, index: dict) -> list:
    v = [Fraction(0)] * len(index)
    for m, c in p.terms.items():
        v[index[m]] = c
    return v


def ring_from_inverse_system(R: FreeCGA, F: Polynomial, name: str = "") -> CohomologyRing:
    S = InverseSystem(R, F)
    top = S.top
    basis: dict = {}  # degree -> [(label, mono, image vector)]
    images: dict = {}
    for d in range(top + 1):
        targets = _monomials(R, top - d)
        index = {m: i for i, m in enumerate(targets)}
        chosen, rows = [], []
        for m in _monomials(R, d):
            vec = _vector(S.act(m), index)
            if linalg.rank(rows + [vec]) > len(rows):
                rows.append(vec)
                chosen.append(m)
        if d == 0:
            labels = ["1"]
        elif d == top:
            labels = ["w"]
        else:
            labels = [f"h{d}_{j}" for j in range(len(chosen))]
        basis[d] = list(zip(labels, chosen))
        images[d] = (rows, index)
    gens = [(lb, d) for d in range(top + 1) for lb, _ in basis[d]]
    products = []
    for d1 in range(1, top):
        for d2 in range(d1, top - d1 + 1):
            rows, index = images[d1 + d2]
            if not rows:
                continue
            cols = linalg.transpose(rows)
            for la, ma in basis[d1]:
                for lb, mb in basis[d2]:
                    prod = R.monomial([R.generators[i].label for i in ma + mb])
                    vec = _vector(_act_poly(S, prod), index)
                    coeffs = linalg.solve(cols, vec)
                    if coeffs is None:
                        raise RuntimeError("product image outside the span of the basis")
                    out = {basis[d1 + d2][k][0]: format_coefficient(c) for k, c in enumerate(coeffs) if c}
                    if out:
                        products.append([la, lb, out])
    doc = {"name": name, "dimension": top,
           "generators": [{"label": lb, "degree": d} for lb, d in gens],
           "products": products, "fundamental_class": "w"}
    return parse_ring(doc)


def _act_poly(S: InverseSystem, p: Polynomial) -> Polynomial:
    out = S.R.zero()
    for m, c in p.terms.items():
        out = out + c * S.act(m)
    return out


def random_ring(rng: random.Random, max_dim: int = 8, name: str = "") -> CohomologyRing:
    """A random Poincaré duality algebra of dimension 4, 6 or 8 with nonempty middle range."""
    while True:
        top = rng.choice([d for d in (4, 6, 8) if d <= max_dim])
        ngens = rng.randint(1, 3)
        degs = sorted(rng.choice((2, 2, 3, 4)) for _ in range(ngens))
        R = FreeCGA([(f"g{i}", d) for i, d in enumerate(degs)])
        monos = _monomials(R, top)
        if not monos:
            continue
        F = R.zero()
        for m in rng.sample(monos, k=rng.randint(1, min(4, len(monos)))):
            F = F + rng.choice((-3, -2, -1, 1, 2, 3)) * R.monomial([R.generators[i].label for i in m])
        if not F:
            continue
        ring = ring_from_inverse_system(R, F, name)
        if any(0 < d < top for _, d in ring.basis):
            return ring


def random_document(seed: int, max_dim: int = 8) -> dict:
    return ring_to_document(random_ring(random.Random(seed), max_dim, name=f"random-{seed}"))
