"""The full identity suite for one ring: pairing identities, model structure,
and the splitting argument."""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .cga import check_d_squared, is_minimal
from .models import full_model, minimal_k0, minimal_k1, substitute_top
from .poincare import TOP, UNIT, PoincareData
from .report import Check
from .splitting import build_zeta_and_split, lemma_checks


def epsilon_checks(P: PoincareData) -> list[Check]:
    B = P.basis
    cls = B.classes
    idx = {x.label: x.index for x in cls}
    deg = [x.degree for x in cls]
    e = P.eps_idx
    one = idx[UNIT]
    out = []

    bad = [x.label for x in cls if e(x.index, one, x.index) != 1 or e(one, x.index, x.index) != 1]
    out.append(Check("epsilon-unit", not bad, f"{len(cls)} classes", ", ".join(bad)))

    bad = []
    for (i, j, k), c in P.epsilon_items():
        if deg[i] + deg[j] != deg[k]:
            bad.append(f"({cls[i].label},{cls[j].label},{cls[k].label}) degree")
        sign = -1 if deg[i] * deg[j] % 2 else 1
        if e(j, i, k) != sign * c:
            bad.append(f"({cls[i].label},{cls[j].label},{cls[k].label}) symmetry")
    out.append(Check("epsilon-degree-and-graded-symmetry", not bad, "", ", ".join(bad[:5])))

    out.append(associativity_check(P))

    bad = []
    top = idx[TOP]
    for k in range(P.dimension + 1):
        m = [[e(r.index, c.index, top) for c in B.by_degree(P.dimension - k)] for r in B.by_degree(k)]
        if len(m) != len(m[0] if m else []) or not linalg.is_invertible(m):
            bad.append(str(k))
    out.append(Check("top-pairing-regular", not bad, f"k = 0..{P.dimension}", ", ".join(bad)))

    # each class in B-hat pairs with exactly one partner, and the partner of the partner is itself
    bad = [x.label for x in B.hat_set() if P.hat(P.hat(x.label)) != x.label]
    out.append(Check("hat-involution", not bad, f"{len(B.hat_set())} classes", ", ".join(bad)))
    return out


def associativity_check(P: PoincareData) -> Check:
    """``sum_y eps(x1,x2,y) eps(y,x3,x4) = sum_z eps(x2,x3,z) eps(x1,z,x4)`` on all 4-tuples."""
    N = len(P.basis.classes)
    # sparse slices: (i, j) -> {k: c}
    by_pair: dict = {}
    for (i, j, k), c in P.epsilon_items():
        by_pair.setdefault((i, j), {})[k] = c
    e = P.eps_idx
    bad = []
    for x1 in range(N):
        for x2 in range(N):
            left_mid = by_pair.get((x1, x2), {})
            for x3 in range(N):
                right_mid = by_pair.get((x2, x3), {})
                for x4 in range(N):
                    lhs = sum((c * e(y, x3, x4) for y, c in left_mid.items()), Fraction(0))
                    rhs = sum((c * e(x1, z, x4) for z, c in right_mid.items()), Fraction(0))
                    if lhs != rhs:
                        bad.append((x1, x2, x3, x4))
    labels = [x.label for x in P.basis.classes]
    shown = ", ".join("(" + ",".join(labels[i] for i in t) + ")" for t in bad[:5])
    return Check("epsilon-associativity", not bad, f"{N ** 4} tuples, {len(bad)} violations", shown)


def model_checks(P: PoincareData):
    """d^2 = 0 and the minimality verdicts; returns the checks and the degree-one model."""
    out = []
    F = full_model(P)
    comps = {0: substitute_top(F, 0), 1: substitute_top(F, 1)}
    k0 = minimal_k0(P)
    k1 = minimal_k1(P)
    for name, alg in (("full", F.algebra), ("component-0", comps[0].algebra),
                      ("component-1", comps[1].algebra), ("minimal-0", k0.algebra),
                      ("minimal-1", k1.algebra)):
        r = check_d_squared(alg)
        out.append(Check(f"d-squared-zero[{name}]", r.ok, "", r.reason))
    out.append(Check("full-model-not-minimal", is_minimal(F.algebra) is not True,
                     f"verdict {is_minimal(F.algebra)}"))
    out.append(Check("component-1-not-minimal", is_minimal(comps[1].algebra) is False))
    out.append(Check("minimal-0-is-minimal", is_minimal(k0.algebra) is True))
    out.append(Check("minimal-1-is-minimal", is_minimal(k1.algebra) is True))
    for name, ok in k1.checks.items():
        out.append(Check(f"degree-one-model[{name}]", bool(ok)))
    return out, k1


def run_suite(P: PoincareData) -> list[Check]:
    checks = epsilon_checks(P)
    structural, k1 = model_checks(P)
    checks.extend(structural)
    cert = build_zeta_and_split(k1)
    checks.extend(cert.checks)
    checks.extend(lemma_checks(cert.splitting))
    return checks
