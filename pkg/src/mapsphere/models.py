"""Mapping-space models for ``Map(X, S^2n)`` and its components.

Generators ``u⊗x`` (degree ``2n - |x|``) and ``v⊗x`` (degree ``4n - 1 - |x|``)
for ``x`` in the canonical basis.  The differential is

    d(u⊗x) = 0,    d(v⊗x) = sum eps(x1, x2, x) (u⊗x1)(u⊗x2).

Components are obtained by substituting ``u⊗w := k``.  For ``k = 1`` the
minimal model is rebuilt on ``u⊗x, v⊙x, v⊙1`` (``x`` in B-hat).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cga import AlgebraMap, FreeCGA, Polynomial, check_d_squared, is_minimal
from .poincare import TOP, UNIT, InternalInconsistency, PoincareData, format_coefficient


def u(x: str) -> str:
    return f"u⊗{x}"


def v(x: str) -> str:
    return f"v⊗{x}"


def vdot(x: str) -> str:
    return f"v⊙{x}"


@dataclass
class Model:
    """A free model with provenance: label -> (family, homology class)."""

    algebra: FreeCGA
    provenance: dict
    kind: str
    k: int | None = None
    extras: dict = field(default_factory=dict)

    def export(self) -> dict:
        return export_model(self)


def _ordered(entries):
    # degree-major, then the given (canonical basis) order
    return sorted(entries, key=lambda e: (e[1], e[3]))


def full_model(P: PoincareData) -> Model:
    B = P.basis
    two_n, four_n = P.dimension, 2 * P.dimension
    entries = []
    for x in B.classes:
        entries.append((u(x.label), two_n - x.degree, ("u", x.label), (0, x.index)))
        entries.append((v(x.label), four_n - 1 - x.degree, ("v", x.label), (1, x.index)))
    entries = _ordered(entries)
    bare = FreeCGA([(lb, d) for lb, d, _, _ in entries])
    diff = {}
    for z in B.classes:
        dz = bare.zero()
        for (i, j, k), c in P.epsilon_items():
            if k == z.index:
                dz = dz + bare.monomial([u(B.classes[i].label), u(B.classes[j].label)], c)
        diff[v(z.label)] = dz
    alg = bare.with_differential(diff, name=f"Map({P.name},S^{two_n})")
    return Model(alg, {lb: prov for lb, _, prov, _ in entries}, "full")


def substitute_top(F: Model, k: int) -> Model:
    """Quotient by ``u⊗w - k``: substitute the degree-0 generator by ``k``."""
    src = F.algebra
    zero_label = u(TOP)
    keep = [g for g in src.generators if g.label != zero_label]
    bare = FreeCGA([(g.label, g.degree) for g in keep])
    values = {g.label: bare.gen(g.label) for g in keep}
    values[zero_label] = bare.scalar(k)
    sub = AlgebraMap(src, bare, values)
    diff = {g.label: sub(src.d_gen(g.label)) for g in keep}
    alg = bare.with_differential(diff, name=f"{src.name};{k}")
    prov = {lb: p for lb, p in F.provenance.items() if lb != zero_label}
    return Model(alg, prov, "component", k)


def component_model(F: Model, k: int) -> Model:
    return substitute_top(F, k)


def minimal_k0(P: PoincareData) -> Model:
    M = substitute_top(full_model(P), 0)
    if is_minimal(M.algebra) is not True:
        raise InternalInconsistency("degree-0 component model is not minimal")
    M.kind = "minimal"
    return M


@dataclass
class MinimalK1:
    """Minimal model of the degree-one component, with its construction data."""

    P: PoincareData
    raw: Model  # k = 1 quotient (not minimal)
    wbar: Model  # minimal model on u⊗x, v⊙x, v⊙1
    eta_raw: Polynomial  # eta in the raw quotient
    eta: Polynomial  # eta in ΛW-bar
    inclusion: AlgebraMap  # ΛW-bar -> raw quotient
    u_labels: list  # generators of U (degree <= 4n - 2)
    u_algebra: FreeCGA  # the sub-dga ΛU as its own algebra
    checks: dict

    @property
    def algebra(self) -> FreeCGA:
        return self.wbar.algebra

    def u_gen(self, x: str) -> Polynomial:
        return self.algebra.gen(u(x))

    def vdot_gen(self, x: str) -> Polynomial:
        return self.algebra.gen(vdot(x))

    def in_U(self, p: Polynomial) -> bool:
        allowed = {self.algebra.index(lb) for lb in self.u_labels}
        return p.generators_used() <= allowed


def _eta(P: PoincareData, alg: FreeCGA) -> Polynomial:
    B = P.basis
    top = B[TOP].index
    hat_idx = {x.index for x in B.hat_set()}
    out = alg.zero()
    for (i, j, k), c in P.epsilon_items():
        if k == top and i in hat_idx and j in hat_idx:
            out = out + alg.monomial([u(B.classes[i].label), u(B.classes[j].label)], c)
    return out


def minimal_k1(P: PoincareData) -> MinimalK1:
    B = P.basis
    four_n = 2 * P.dimension
    raw = substitute_top(full_model(P), 1)
    R = raw.algebra
    hat = B.hat_set()

    eta_raw = R.d_gen(v(TOP)) - 2 * R.gen(u(UNIT))

    entries = []
    for x in hat:
        entries.append((u(x.label), P.dimension - x.degree, ("u", x.label), (0, x.index)))
        entries.append((vdot(x.label), four_n - 1 - x.degree, ("v⊙", x.label), (1, x.index)))
    entries.append((vdot(UNIT), four_n - 1, ("v⊙", UNIT), (1, 0)))
    entries = _ordered(entries)
    Wb = FreeCGA([(lb, d) for lb, d, _, _ in entries])

    # inclusion ΛW-bar -> raw quotient
    incl_vals = {}
    for x in hat:
        incl_vals[u(x.label)] = R.gen(u(x.label))
        incl_vals[vdot(x.label)] = R.gen(v(TOP)) * R.gen(u(x.label)) - R.gen(v(x.label))
    incl_vals[vdot(UNIT)] = R.gen(v(UNIT)) - Fraction(1, 4) * R.gen(v(TOP)) * (
        2 * R.gen(u(UNIT)) - eta_raw)
    incl = AlgebraMap(Wb, R, incl_vals, "incl")

    # change of variables: raw generators in terms of W-bar plus v⊗w, u⊗1
    E = FreeCGA([(lb, d) for lb, d, _, _ in entries] + [(v(TOP), P.dimension - 1), (u(UNIT), P.dimension)])
    eta_E = _eta(P, E)
    elim_vals = {v(TOP): E.gen(v(TOP)), u(UNIT): E.gen(u(UNIT))}
    for x in hat:
        elim_vals[u(x.label)] = E.gen(u(x.label))
        elim_vals[v(x.label)] = E.gen(v(TOP)) * E.gen(u(x.label)) - E.gen(vdot(x.label))
    elim_vals[v(UNIT)] = E.gen(vdot(UNIT)) + Fraction(1, 4) * E.gen(v(TOP)) * (
        2 * E.gen(u(UNIT)) - eta_E)
    elim = AlgebraMap(R, E, elim_vals, "elim")

    wbar_ids = {E.index(lb): Wb.index(lb) for lb, *_ in entries}
    diff = {}
    for lb, *_ in entries:
        expr = elim(R.d(incl_vals[lb]))
        stray = expr.generators_used() - set(wbar_ids)
        if stray:
            names = sorted(E.generators[i].label for i in stray)
            raise InternalInconsistency(f"d({lb}) does not re-express in ΛW-bar: uses {names}")
        diff[lb] = expr.rehost(Wb, wbar_ids)
    Wbar = Wb.with_differential(diff, name=f"Map({P.name},S^{P.dimension};1)-min")
    incl = AlgebraMap(Wbar, R, incl_vals, "incl")
    eta = _eta(P, Wbar)

    checks = {}
    checks["eta-closed"] = not R.d(eta_raw)
    checks["inclusion-dga"] = incl.is_dga_map()
    # re-expressed differentials agree with the closed formulas
    ok = True
    for x in hat:
        want = eta * Wbar.gen(u(x.label))
        for (i, j, k), c in P.epsilon_items():
            if k == x.index and B.classes[i].degree > 0 and B.classes[j].degree > 0:
                want = want - Wbar.monomial([u(B.classes[i].label), u(B.classes[j].label)], c)
        ok &= Wbar.d_gen(vdot(x.label)) == want
    checks["d-vdot-formula"] = ok
    checks["d-vdot1-quarter-eta-squared"] = Wbar.d_gen(vdot(UNIT)) == Fraction(1, 4) * eta * eta
    checks["d-squared"] = bool(check_d_squared(Wbar))
    checks["minimal"] = is_minimal(Wbar) is True
    u_labels = [g.label for g in Wbar.generators if g.degree <= four_n - 2]
    u_ids = {Wbar.index(lb) for lb in u_labels}
    checks["U-closed"] = all(Wbar.d_gen(lb).generators_used() <= u_ids for lb in u_labels)
    failed = [name for name, passed in checks.items() if not passed]
    if failed:
        raise InternalInconsistency(f"degree-one minimal model checks failed: {failed}")

    u_bare = FreeCGA([(lb, Wbar.generator(lb).degree) for lb in u_labels])
    to_u = {Wbar.index(lb): t for t, lb in enumerate(u_labels)}
    u_alg = u_bare.with_differential(
        {lb: Wbar.d_gen(lb).rehost(u_bare, to_u) for lb in u_labels}, name="ΛU")
    prov = {lb: prov for lb, _, prov, _ in entries}
    wbar_model = Model(Wbar, prov, "minimal", 1, {"eta": eta})
    return MinimalK1(P, raw, wbar_model, eta_raw, eta, incl, u_labels, u_alg, checks)


def homotopy_ranks(algebra: FreeCGA) -> dict[int, int]:
    """Generator census per degree of a minimal model."""
    if is_minimal(algebra) is not True:
        raise ValueError("homotopy ranks are read off a minimal model only")
    out: dict[int, int] = {}
    for g in algebra.generators:
        out[g.degree] = out.get(g.degree, 0) + 1
    return dict(sorted(out.items()))


def poly_terms(p: Polynomial) -> list:
    return [[format_coefficient(c), labels] for c, labels in p.to_terms()]


def export_model(M: Model) -> dict:
    A = M.algebra
    doc = {
        "kind": M.kind,
        "component": M.k,
        "generators": [
            {"label": g.label, "degree": g.degree,
             "provenance": {"family": M.provenance[g.label][0], "class": M.provenance[g.label][1]}}
            for g in A.generators
        ],
        "differential": {g.label: poly_terms(A.d_gen(g.label)) for g in A.generators},
        "d_squared_zero": bool(check_d_squared(A)),
        "minimal": is_minimal(A),
    }
    for name, p in M.extras.items():
        doc[name] = poly_terms(p)
    return doc
