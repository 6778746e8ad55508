"""Splitting of the degree-one minimal model.

The minimal model ``ΛW-bar`` of the degree-one component splits as
``ΛU ⊗ Λ(s)`` with ``ds = 0``, where ``U`` is spanned by the generators of
degree at most ``4n - 2`` and ``s`` corresponds to ``v⊙1 - zeta``.  The key
identity is ``d(v⊙1) = eta^2 / 4 = d(zeta)`` for an explicit decomposable
``zeta`` in ``ΛU``; it rests on ``xi = d(mu)``, which is checked here both
directly and one filtration layer at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement

from . import linalg
from .cga import AlgebraMap, Derivation, FreeCGA, Polynomial, linear_part
from .models import MinimalK1, poly_terms, u, vdot
from .poincare import UNIT, InternalInconsistency, PoincareData
from .report import Check, poly_check

SPLIT_GEN = "s"


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


class OrderedBhat:
    """B-hat with its total order, the classes B-minus and the filtration F_i.

    Within a degree the canonical-basis order is used; the duality law
    ``x < y iff hat(x) < hat(y)`` above the middle degree is checked, not assumed.
    """

    def __init__(self, P: PoincareData):
        self.P = P
        self.n = P.n
        self.classes = P.basis.hat_set()
        self.labels = [x.label for x in self.classes]
        self.rank = {lb: r for r, lb in enumerate(self.labels)}
        self.degree = {x.label: x.degree for x in self.classes}
        self.hat = {lb: P.hat(lb) for lb in self.labels}
        self._check_order()
        minus = [lb for lb in self.labels if self.degree[lb] < self.n]
        self.thetas = sorted(minus, key=self.rank.__getitem__, reverse=True)
        middle = [lb for lb in self.labels if self.degree[lb] == self.n]
        self.filtration = [list(middle)]
        for th in self.thetas:
            self.filtration.append(self.filtration[-1] + [th, self.hat[th]])

    def _check_order(self):
        deg, rank, hat = self.degree, self.rank, self.hat
        for a in self.labels:
            for b in self.labels:
                if deg[a] < deg[b] and not rank[a] < rank[b]:
                    raise InternalInconsistency("order on B-hat does not respect degree")
                if deg[a] == deg[b] > self.n and (rank[a] < rank[b]) != (rank[hat[a]] < rank[hat[b]]):
                    raise InternalInconsistency(f"order law fails for {a}, {b}")

    @property
    def m(self) -> int:
        return len(self.thetas)

    def theta(self, i: int) -> str:
        """``theta_i`` for ``1 <= i <= m``."""
        return self.thetas[i - 1]

    def F(self, i: int) -> list[str]:
        return self.filtration[i]

    def less(self, a: str, b: str) -> bool:
        return self.rank[a] < self.rank[b]


@dataclass
class LayerReport:
    i: int
    theta: str
    projection: Polynomial  # p_i(xi - d mu)
    derived: Polynomial  # ∂_i p_i(xi - d mu)

    @property
    def passed(self) -> bool:
        return not self.projection and not self.derived

    def to_dict(self) -> dict:
        return {
            "layer": self.i,
            "theta": self.theta,
            "passed": self.passed,
            "projection_residual": poly_terms(self.projection),
            "derivative_residual": poly_terms(self.derived),
        }


class Splitting:
    """All elements and operators of the splitting argument for one ring."""

    def __init__(self, M: MinimalK1):
        self.M = M
        self.P = M.P
        self.A: FreeCGA = M.algebra
        self.order = OrderedBhat(self.P)
        self.n = self.P.n
        self._uid = {lb: self.A.index(u(lb)) for lb in self.order.labels}
        self._class_of = {gid: lb for lb, gid in self._uid.items()}

    # -- scalars --------------------------------------------------------------

    def eps(self, x: str) -> Fraction:
        return self.P.eps_of(x)

    def lambda_of(self, x: str) -> Fraction:
        if x not in self.order.rank:
            raise ValueError(f"{x!r} is not in B-hat")
        d, n = self.order.degree[x], self.n
        if d < n:
            return Fraction(3 * (n - d), n) * self.eps(self.P.hat(x))
        if d > n:
            return -self.lambda_of(self.P.hat(x))
        return Fraction(0)

    # -- polynomials ----------------------------------------------------------

    def ug(self, x: str) -> Polynomial:
        return self.A.gen(u(x))

    def umono(self, labels, c=1) -> Polynomial:
        return self.A.monomial([u(x) for x in labels], c)

    @property
    def eta(self) -> Polynomial:
        return self.M.eta

    @cached_property
    def xi(self) -> Polynomial:
        P, hat = self.P, self.order.hat
        out = self.A.zero()
        for x1 in self.order.labels:
            for x2 in self.order.labels:
                for x3 in self.order.labels:
                    c = P.epsilon(x1, x2, x3)
                    if c:
                        out = out + self.umono([x1, x2, hat[x3]], self.eps(x3) * c)
        return out

    @cached_property
    def alpha(self) -> Polynomial:
        out = self.A.zero()
        for x in self.order.labels:
            out = out + self.eps(x) * self.A.gen(vdot(x)) * self.ug(self.order.hat[x])
        return out

    def mu_of(self, x: str) -> Polynomial:
        xh = self.order.hat[x]
        sgn = _sign(self.order.degree[x] * self.order.degree[xh])
        return (sgn * self.A.gen(vdot(x)) * self.ug(xh)
                - self.A.gen(vdot(xh)) * self.ug(x))

    @cached_property
    def mu(self) -> Polynomial:
        out = self.A.zero()
        for th in self.order.thetas:
            out = out + self.lambda_of(th) * self.mu_of(th)
        return out

    def dmu_closed_form(self, x: str) -> Polynomial:
        """d(mu(x)) written as the two epsilon sums."""
        P, labels = self.P, self.order.labels
        xh = self.order.hat[x]
        sgn = _sign(self.order.degree[x] * self.order.degree[xh])
        out = self.A.zero()
        for x1 in labels:
            for x2 in labels:
                out = out + self.umono([x1, x2, x], P.epsilon(x1, x2, xh))
                out = out - self.umono([x1, x2, xh], sgn * P.epsilon(x1, x2, x))
        return out

    @cached_property
    def zeta(self) -> Polynomial:
        return Fraction(1, 4) * (self.alpha + self.mu)

    # -- the cubic span and its layers ----------------------------------------

    def in_cubic_span(self, p: Polynomial) -> bool:
        """Pure cubic in u⊗x (x in B-hat) of total class degree 2n."""
        for mono in p.terms:
            if len(mono) != 3 or any(g not in self._class_of for g in mono):
                return False
            if sum(self.order.degree[self._class_of[g]] for g in mono) != 2 * self.n:
                return False
        return True

    @cached_property
    def cubic_basis(self) -> set:
        """Nonzero normal-form monomials spanning the cubic span."""
        out = set()
        for triple in combinations_with_replacement(self.order.labels, 3):
            if sum(self.order.degree[x] for x in triple) != 2 * self.n:
                continue
            p = self.umono(triple)
            out.update(p.terms)
        return out

    def _in_layer(self, i: int):
        th = self._uid[self.order.theta(i)]
        allowed = {self._uid[x] for x in self.order.F(i)}

        def keep(mono):
            return th in mono and all(g in allowed for g in mono)
        return keep

    def layer_basis(self, i: int) -> list:
        keep = self._in_layer(i)
        return sorted(m for m in self.cubic_basis if keep(m))

    def p(self, i: int, poly: Polynomial) -> Polynomial:
        """Projection of the cubic span onto ``V_i``."""
        if not self.in_cubic_span(poly):
            raise ValueError("p_i is defined on the cubic span only")
        return poly.restrict(self._in_layer(i))

    def partial(self, i: int) -> Derivation:
        """The derivation that is 1 on ``u⊗theta_i`` and 0 on other generators."""
        th = u(self.order.theta(i))
        return Derivation(self.A, -self.A.generator(th).degree, {th: self.A.one()})

    def partial_i(self, i: int, poly: Polynomial) -> Polynomial:
        return self.partial(i)(poly)

    def dp(self, i: int, poly: Polynomial) -> Polynomial:
        return self.partial_i(i, self.p(i, poly))

    # -- verification -----------------------------------------------------------

    def layers(self) -> list[LayerReport]:
        r = self.xi - self.A.d(self.mu)
        out = []
        for i in range(1, self.order.m + 1):
            proj = self.p(i, r)
            out.append(LayerReport(i, self.order.theta(i), proj, self.partial_i(i, proj)))
        return out

    def verify_prop_mu(self) -> tuple[Check, list[LayerReport]]:
        """``xi = d mu`` directly and layer by layer; the two routes must agree."""
        dmu = self.A.d(self.mu)
        r = self.xi - dmu
        vac = self.order.m == 0
        if not self.in_cubic_span(self.xi) or not self.in_cubic_span(dmu):
            return Check("xi-equals-dmu", False, "xi or d(mu) leaves the cubic span", str(r)), []
        layers = self.layers()
        layer_ok = all(L.passed for L in layers)
        # the layers exhaust the cubic span, so the residual is their sum
        covered = sum((L.projection for L in layers), self.A.zero())
        detail = f"m={self.order.m}; direct {'zero' if not r else 'NONZERO'}; layers " + \
            ", ".join(f"{L.i}:{'ok' if L.passed else 'FAIL'}" for L in layers)
        passed = (not r) and layer_ok and covered == r
        bad = [L for L in layers if not L.passed]
        residual = str(r) if r else ""
        if bad:
            residual += "; " + "; ".join(f"layer {L.i}: {L.projection}" for L in bad)
        return Check("xi-equals-dmu", passed, detail, residual, vacuous=vac), layers


def lemma_checks(S: Splitting) -> list[Check]:
    """The identities that feed the layerwise argument."""
    P, O, A = S.P, S.order, S.A
    labels, deg, hat = O.labels, O.degree, O.hat
    checks = []

    # eps(x) = 1 and eps(hat x) = (-1)^{|x||hat x|} on B-minus
    bad = [x for x in O.thetas
           if S.eps(x) != 1 or S.eps(hat[x]) != _sign(deg[x] * deg[hat[x]])]
    checks.append(Check("eps-normalization-on-B-minus", not bad, f"{len(O.thetas)} classes",
                        ", ".join(bad), vacuous=not O.thetas))

    # eps(hat x3) eps(x1, x2, hat x3) = eps(x1) eps(x2, x3, hat x1)
    bad = []
    for x1 in labels:
        for x2 in labels:
            for x3 in labels:
                lhs = S.eps(hat[x3]) * P.epsilon(x1, x2, hat[x3])
                rhs = S.eps(x1) * P.epsilon(x2, x3, hat[x1])
                if lhs != rhs:
                    bad.append(f"({x1},{x2},{x3})")
    checks.append(Check("eps-hat-exchange", not bad, f"{len(labels) ** 3} triples", ", ".join(bad[:5])))

    # symmetry of the cubic monomials and the evenness claim for repeated degrees
    bad_sym, bad_even = [], []
    for x1 in labels:
        for x2 in labels:
            for x3 in labels:
                lhs = S.umono([x1, x2, x3], P.epsilon(x1, x2, hat[x3]))
                if lhs != S.umono([x2, x1, x3], P.epsilon(x2, x1, hat[x3])):
                    bad_sym.append(f"({x1},{x2},{x3})")
                # a repeated class forces even degrees; distinct classes of equal
                # degree do not (see repeated_degree_counterexamples)
                if lhs and len({x1, x2, x3}) < 3 and any(deg[x] % 2 for x in (x1, x2, x3)):
                    bad_even.append(f"({x1},{x2},{x3})")
    checks.append(Check("cubic-symmetry", not bad_sym, "", ", ".join(bad_sym[:5])))
    checks.append(Check("repeated-class-parity", not bad_even, "", ", ".join(bad_even[:5])))

    # lambda sum over degree-admissible triples
    bad, count = [], 0
    for triple in combinations_with_replacement(labels, 3):
        if sum(deg[x] for x in triple) != 2 * S.n:
            continue
        count += 1
        total = sum(S.eps(hat[x]) * S.eps(x) * S.lambda_of(x) for x in triple)
        if total != 3:
            bad.append(f"{triple}: {total}")
    checks.append(Check("lambda-sum-three", not bad, f"{count} triples", ", ".join(bad[:5]),
                        vacuous=count == 0))

    # closed form of d(mu(x)) and membership in the cubic span
    bad = [x for x in O.thetas
           if A.d(S.mu_of(x)) != S.dmu_closed_form(x) or not S.in_cubic_span(A.d(S.mu_of(x)))]
    checks.append(Check("dmu-closed-form", not bad, "", ", ".join(bad), vacuous=not O.thetas))
    checks.append(Check("xi-in-cubic-span", S.in_cubic_span(S.xi)))

    # cubic span = direct sum of the V_i
    cubic = S.cubic_basis
    parts = [set(S.layer_basis(i)) for i in range(1, O.m + 1)]
    union = set().union(*parts) if parts else set()
    dims = [len(p) for p in parts]
    ok = union == cubic and sum(dims) == len(cubic)
    checks.append(Check("cubic-span-decomposition", ok, f"dim {len(cubic)} = sum {dims}",
                        vacuous=not cubic))

    # ∂_i is injective on V_i
    bad = []
    for i in range(1, O.m + 1):
        basis = S.layer_basis(i)
        images = [S.partial_i(i, Polynomial(A, {b: Fraction(1)})) for b in basis]
        rows = sorted({m for img in images for m in img.terms})
        mat = [[img.terms.get(r, Fraction(0)) for img in images] for r in rows]
        if basis and linalg.rank(mat) != len(basis):
            bad.append(str(i))
    checks.append(Check("derivation-injective-on-layer", not bad, "", ", ".join(bad),
                        vacuous=O.m == 0))

    checks.extend(layer_formula_checks(S))
    return checks


def repeated_degree_counterexamples(S: Splitting) -> list[tuple[str, str, str]]:
    """Triples with two distinct classes of equal degree, a nonzero term
    ``eps(x1, x2, hat x3)(u⊗x1)(u⊗x2)(u⊗x3)`` and some odd degree."""
    P, O = S.P, S.order
    deg, hat = O.degree, O.hat
    out = []
    for x1 in O.labels:
        for x2 in O.labels:
            for x3 in O.labels:
                ds = [deg[x1], deg[x2], deg[x3]]
                if len({x1, x2, x3}) == 3 and len(set(ds)) < 3 and any(d % 2 for d in ds):
                    if S.umono([x1, x2, x3], P.epsilon(x1, x2, hat[x3])):
                        out.append((x1, x2, x3))
    return out


def _pair_sum(S: Splitting, i: int, weight) -> Polynomial:
    """``2 sum_{x1 in F_i, x2 in F_(i-1)} weight(x2) eps(x1, x2, hat theta_i) (u⊗x1)(u⊗x2)``."""
    th_hat = S.order.hat[S.order.theta(i)]
    out = S.A.zero()
    for x1 in S.order.F(i):
        for x2 in S.order.F(i - 1):
            c = S.P.epsilon(x1, x2, th_hat)
            if c:
                out = out + S.umono([x1, x2], 2 * c * weight(x2))
    return out


def layer_formula_checks(S: Splitting) -> list[Check]:
    """Per-layer formulas for ∂_i p_i of xi and d(mu), and their coefficients."""
    O, P, A = S.order, S.P, S.A
    labels, deg, hat = O.labels, O.degree, O.hat
    vac = O.m == 0
    res_x1, res_xi, res_mu = A.zero(), A.zero(), A.zero()
    bad_a, bad_ahat, bad_ab = [], [], []
    dmu = A.d(S.mu)
    for i in range(1, O.m + 1):
        th = O.theta(i)
        th_hat = hat[th]
        Fi, Fprev = O.F(i), O.F(i - 1)

        # the x1 summation identity
        for x2 in Fprev:
            lhs = A.zero()
            for x1 in labels:
                for x1p in labels:
                    lhs = lhs + S.umono([x1, x1p, x2], P.epsilon(x1, x1p, hat[x2]))
            rhs = A.zero()
            for x1 in Fi:
                rhs = rhs + S.umono([x1, x2], 2 * P.epsilon(th, x1, hat[x2]))
            res_x1 = res_x1 + (S.dp(i, lhs) - rhs)

        dp_dmu_th = S.dp(i, A.d(S.mu_of(th)))
        dp_xi = S.dp(i, S.xi)
        dp_dmu = S.dp(i, dmu)
        res_xi = res_xi + dp_xi - (S.eps(th_hat) * dp_dmu_th + _pair_sum(S, i, lambda x: 1))
        res_mu = res_mu + dp_dmu - (
            S.lambda_of(th) * dp_dmu_th
            + _pair_sum(S, i, lambda x: _sign(deg[x] * deg[hat[x]]) * S.lambda_of(x)))

        # coefficient tables on pairs x1 <= x2 in F_i
        tset = sorted(Fi, key=O.rank.__getitem__)
        for a_pos, x1 in enumerate(tset):
            for x2 in tset[a_pos:]:
                if deg[x1] + deg[x2] + deg[th] != 2 * S.n:
                    continue
                e = P.epsilon(x1, x2, th_hat)
                alive = bool(S.umono([x1, x2, th]))
                if x1 == x2:
                    ka, kh = 3, (3 if x1 == th else 1)
                elif x1 == th:
                    ka, kh = 6, 4
                else:
                    ka, kh = 6, 2 * _sign(deg[x1] + deg[x2])
                want_a = ka * e if alive else 0
                want_h = kh * e if alive else 0
                a = dp_xi.coefficient([u(x1), u(x2)])
                ah = dp_dmu_th.coefficient([u(x1), u(x2)])
                b = dp_dmu.coefficient([u(x1), u(x2)])
                tag = f"i={i} ({x1},{x2})"
                if a != want_a:
                    bad_a.append(f"{tag}: {a} vs {want_a}")
                if ah != want_h:
                    bad_ahat.append(f"{tag}: {ah} vs {want_h}")
                if a != b:
                    bad_ab.append(f"{tag}: {a} vs {b}")
    return [
        poly_check("x1-summation", res_x1, vacuous=vac),
        poly_check("layer-formula-xi", res_xi, vacuous=vac),
        poly_check("layer-formula-dmu", res_mu, vacuous=vac),
        Check("coefficients-a", not bad_a, "", "; ".join(bad_a[:5]), vac),
        Check("coefficients-a-hat", not bad_ahat, "", "; ".join(bad_ahat[:5]), vac),
        Check("coefficients-a-equal-b", not bad_ab, "", "; ".join(bad_ab[:5]), vac),
    ]


@dataclass
class SplittingCertificate:
    """Elements of the splitting argument with all verdicts.

    ``forward`` maps ``ΛU ⊗ Λ(s)`` to ``ΛW-bar``; ``backward`` is its inverse.
    """

    splitting: Splitting
    eta: Polynomial
    xi: Polynomial
    alpha: Polynomial
    mu: Polynomial
    zeta: Polynomial
    layers: list
    checks: list
    split_algebra: FreeCGA | None = None
    forward: AlgebraMap | None = None
    backward: AlgebraMap | None = None
    extra: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def export(self) -> dict:
        return {
            "valid": self.valid,
            "m": self.splitting.order.m,
            "thetas": list(self.splitting.order.thetas),
            "eta": poly_terms(self.eta),
            "xi": poly_terms(self.xi),
            "alpha": poly_terms(self.alpha),
            "mu": poly_terms(self.mu),
            "zeta": poly_terms(self.zeta),
            "layers": [L.to_dict() for L in self.layers],
            "checks": [c.to_dict() for c in self.checks],
        }


def split_algebra(M: MinimalK1) -> FreeCGA:
    """``ΛU ⊗ Λ(s)`` with ``ds = 0``, ``|s| = 4n - 1``."""
    U = M.u_algebra
    bare = FreeCGA([(g.label, g.degree) for g in U.generators]
                   + [(SPLIT_GEN, 2 * M.P.dimension - 1)])
    same = {g.id: g.id for g in U.generators}
    diff = {g.label: U.d_gen(g.label).rehost(bare, same) for g in U.generators}
    return bare.with_differential(diff, name="ΛU⊗Λ(s)")


def build_zeta_and_split(M: MinimalK1) -> SplittingCertificate:
    S = Splitting(M)
    A = S.A
    eta, xi, alpha, mu, zeta = S.eta, S.xi, S.alpha, S.mu, S.zeta
    checks = [poly_check("eta-squared-equals-xi-plus-dalpha", eta * eta - xi - A.d(alpha))]
    prop, layers = S.verify_prop_mu()
    checks.append(prop)
    checks.append(poly_check("quarter-eta-squared-equals-dzeta", Fraction(1, 4) * eta * eta - A.d(zeta)))
    checks.append(Check("zeta-decomposable-in-U", zeta.is_decomposable() and M.in_U(zeta)))
    cert = SplittingCertificate(S, eta, xi, alpha, mu, zeta, layers, checks)
    if not all(c.passed for c in checks):
        return cert

    T = split_algebra(M)
    fwd = {lb: A.gen(lb) for lb in M.u_labels}
    fwd[SPLIT_GEN] = A.gen(vdot(UNIT)) - zeta
    f = AlgebraMap(T, A, fwd, "f")
    to_T = {A.index(lb): T.index(lb) for lb in M.u_labels}
    back = {lb: T.gen(lb) for lb in M.u_labels}
    back[vdot(UNIT)] = T.gen(SPLIT_GEN) + zeta.rehost(T, to_T)
    g = AlgebraMap(A, T, back, "f^-1")
    lp = linear_part(f)
    checks.append(Check("split-map-dga", f.is_dga_map() and g.is_dga_map()))
    checks.append(Check("split-map-linear-part-invertible", not lp.singular_degrees(),
                        f"singular degrees {lp.singular_degrees()}" if lp.singular_degrees() else ""))
    round_trip = all(f(g.image(x.label)) == A.gen(x.label) for x in A.generators) and \
        all(g(f.image(x.label)) == T.gen(x.label) for x in T.generators)
    checks.append(Check("split-map-inverse", round_trip))
    cert.split_algebra, cert.forward, cert.backward = T, f, g
    return cert


def require_valid(cert: SplittingCertificate) -> SplittingCertificate:
    if not cert.valid:
        failed = [f"{c.name}: {c.residual or c.detail}" for c in cert.checks if not c.passed]
        raise InternalInconsistency("splitting certificate invalid: " + "; ".join(failed))
    return cert


__all__ = [
    "OrderedBhat", "Splitting", "SplittingCertificate", "LayerReport", "SPLIT_GEN",
    "build_zeta_and_split", "lemma_checks", "repeated_degree_counterexamples", "layer_formula_checks", "split_algebra",
    "require_valid",
]
