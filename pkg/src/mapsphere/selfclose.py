"""Self-closeness numbers of the degree-zero and degree-one components.

The value is read off from the ring (primitivity, ``d(X)`` and ``n``).  The
lower bound is certified by an explicit dga self-map whose linear part is
invertible below the value and singular at it.  The upper bound is a theorem
and is reported as a citation, not as a computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cga import AlgebraMap, FreeCGA, first_singular_degree, is_isomorphism_through, linear_part
from .models import MinimalK1, Model, minimal_k0, minimal_k1, poly_terms, u, v, vdot
from .poincare import TOP, UNIT, InternalInconsistency, PoincareData
from .report import Check
from .splitting import SPLIT_GEN, SplittingCertificate, build_zeta_and_split, require_valid

UPPER_BOUND_K0_NONPRIMITIVE = (
    "cited: a self-map invertible on generators through degree d(X) has regular top "
    "matrix B_2n, hence regular A_k for 0 < k < 2n, and a nonzero decomposable class "
    "forces A_0 regular; machine check covers the lower bound only")
UPPER_BOUND_K0_PRIMITIVE = (
    "cited: a self-map invertible on generators through degree 2n has regular A_k and "
    "B_2n, and B_k = A_0 A_k gives the rest; machine check covers the lower bound only")
UPPER_BOUND_K1 = (
    "cited: the minimal model has no generators above degree 4n - 1, so invertibility "
    "through 4n - 1 is invertibility; machine check covers the lower bound only")


class NotADGAMap(ValueError):
    def __init__(self, generator: str, defect):
        super().__init__(f"not a dga map: d f({generator}) - f(d {generator}) = {defect}")
        self.generator = generator
        self.defect = defect


class UnsupportedComponent(ValueError):
    pass


# -- matrices ------------------------------------------------------------------


@dataclass
class SelfMapMatrices:
    """``A[k]`` acts on ``u⊗B_k`` (0 <= k <= 2n - 2), ``B[k]`` on ``v⊗B_k`` (0 <= k <= 2n)."""

    A: dict
    B: dict

    def a(self, k: int) -> list:
        return self.A.get(k, [])

    def b(self, k: int) -> list:
        return self.B.get(k, [])


def _block(f: AlgebraMap, labels: list[str]) -> list:
    # column j holds the image of labels[j]
    return [[f.image(src).coefficient([tgt]) for src in labels] for tgt in labels]


def matrices_of(f: AlgebraMap, P: PoincareData) -> SelfMapMatrices:
    """Matrix representation of the linear part of a self-map of the degree-zero model."""
    B = P.basis
    two_n = P.dimension
    A_ = {}
    B_ = {}
    for k in range(two_n + 1):
        classes = [x.label for x in B.by_degree(k)]
        if k <= two_n - 2:
            A_[k] = _block(f, [u(x) for x in classes])
        B_[k] = _block(f, [v(x) for x in classes])
    return SelfMapMatrices(A_, B_)


def _transpose(a, cols):
    return linalg.transpose(a, cols)


def verify_matrix_relations(f: AlgebraMap, P: PoincareData) -> Check:
    """The quadratic relations between A, B and E imposed by ``d f = f d``."""
    bad = f.first_d_violation()
    if bad is not None:
        raise NotADGAMap(*bad)
    M = matrices_of(f, P)
    Bs = P.basis
    two_n = P.dimension
    problems = []
    count = 0
    for i in range(two_n + 1):
        xs = Bs.by_degree(i)
        if not xs:
            continue
        ks = range(0, i + 1) if i < two_n else range(1, two_n)
        for p, xp in enumerate(xs):
            for k in ks:
                if not Bs.by_degree(k) or not Bs.by_degree(i - k):
                    continue
                count += 1
                bk, bik = len(Bs.by_degree(k)), len(Bs.by_degree(i - k))
                Ak, Aik = M.a(k), M.a(i - k)
                lhs = linalg.matmul(linalg.matmul(Ak, P.e_matrix(k, xp.label), bk, bik),
                                    _transpose(Aik, bik), bik, bik)
                rhs = linalg.zeros(bk, bik)
                for a_, xa in enumerate(xs):
                    c = M.b(i)[a_][p]
                    if c:
                        rhs = linalg.add(rhs, linalg.scale(P.e_matrix(k, xa.label), c))
                if lhs != rhs:
                    problems.append(f"x={xp.label}, k={k}")
    for i in range(two_n - 1):
        if not Bs.by_degree(i):
            continue
        count += 1
        a0 = M.a(0)[0][0]
        if M.b(i) != linalg.scale(M.a(i), a0):
            problems.append(f"B_{i} != A_0 A_{i}")
    return Check("matrix-relations", not problems, f"{count} instances", "; ".join(problems[:5]))


# -- witnesses -----------------------------------------------------------------


@dataclass
class Witness:
    model: Model | MinimalK1
    map: AlgebraMap
    claimed: int
    transcript: list

    @property
    def algebra(self) -> FreeCGA:
        return self.map.source

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.transcript)

    def dump(self) -> dict:
        return {lb: poly_terms(p) for lb, p in self.map.table().items()}


def _transcript(g: AlgebraMap, claimed: int) -> list[Check]:
    out = []
    bad = g.first_d_violation()
    out.append(Check("witness-commutes-with-d", bad is None,
                     f"{len(g.source.generators)} generators",
                     "" if bad is None else f"{bad[0]}: {bad[1]}"))
    lp = linear_part(g)
    out.append(Check("witness-iso-below-value", is_isomorphism_through(lp, claimed - 1),
                     f"degrees < {claimed}"))
    first = first_singular_degree(lp)
    out.append(Check("witness-singular-at-value", first == claimed,
                     f"first singular degree {first}"))
    return out


def _raise_if_failed(w: Witness) -> Witness:
    if not w.verified:
        failed = [f"{c.name}: {c.residual or c.detail}" for c in w.transcript if not c.passed]
        raise InternalInconsistency("witness verification failed: " + "; ".join(failed))
    return w


def witness_k0(P: PoincareData, model: Model | None = None) -> Witness:
    M = model or minimal_k0(P)
    A = M.algebra
    Bs = P.basis
    two_n = P.dimension
    vals = {}
    if P.is_primitive():
        claimed = two_n
        for x in Bs.classes:
            if x.label == TOP:
                vals[v(x.label)] = A.gen(v(x.label))
                continue
            vals[u(x.label)] = A.gen(u(x.label)) if x.degree > 0 else A.zero()
            vals[v(x.label)] = A.zero()
    else:
        claimed = P.d_of_X()
        for x in Bs.classes:
            if x.label != TOP:
                keep = two_n - x.degree < claimed
                vals[u(x.label)] = A.gen(u(x.label)) if keep else A.zero()
            vals[v(x.label)] = A.zero()
    g = AlgebraMap(A, A, vals, "g0")
    return _raise_if_failed(Witness(M, g, claimed, _transcript(g, claimed)))


def witness_k1(P: PoincareData, M: MinimalK1 | None = None,
               cert: SplittingCertificate | None = None) -> Witness:
    """Fix ``ΛU`` and kill ``s`` on the split side, transported to ``ΛW-bar``."""
    M = M or minimal_k1(P)
    cert = require_valid(cert or build_zeta_and_split(M))
    T = cert.split_algebra
    h_vals = {g.label: T.gen(g.label) for g in T.generators}
    h_vals[SPLIT_GEN] = T.zero()
    h = AlgebraMap(T, T, h_vals, "h")
    g = cert.forward.compose(h.compose(cert.backward))
    g.name = "g1"
    claimed = 2 * P.dimension - 1
    transcript = _transcript(g, claimed)
    transcript.append(Check("witness-fixes-U", all(
        g.image(lb) == M.algebra.gen(lb) for lb in M.u_labels)))
    transcript.append(Check("witness-sends-vdot1-to-zeta", g.image(vdot(UNIT)) == cert.zeta))
    return _raise_if_failed(Witness(M, g, claimed, transcript))


# -- the report ----------------------------------------------------------------


@dataclass
class NEReport:
    k: int
    value: int
    primitive: bool
    d_X: int
    witness: Witness
    citation: str
    transcript: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.transcript)

    def export(self) -> dict:
        return {
            "component": self.k,
            "NE": self.value,
            "primitive": self.primitive,
            "d_X": self.d_X,
            "witness": {
                "claimed_singular_degree": self.witness.claimed,
                "map": self.witness.dump(),
            },
            "transcript": [c.to_dict() for c in self.transcript],
            "upper_bound": self.citation,
            "verified": self.verified,
        }


def ne_value(P: PoincareData, k: int) -> int:
    if k == 1:
        return 2 * P.dimension - 1
    if k == 0:
        return P.dimension if P.is_primitive() else P.d_of_X()
    raise UnsupportedComponent(f"component {k} is not supported (only 0 and 1)")


def self_closeness(P: PoincareData, k: int) -> NEReport:
    value = ne_value(P, k)
    primitive = P.is_primitive()
    if k == 0:
        w = witness_k0(P)
        cite = UPPER_BOUND_K0_PRIMITIVE if primitive else UPPER_BOUND_K0_NONPRIMITIVE
    else:
        w = witness_k1(P)
        cite = UPPER_BOUND_K1
    transcript = list(w.transcript)
    transcript.append(Check("value-equals-first-singular-degree", w.claimed == value,
                            f"value {value}, witness {w.claimed}"))
    if k == 0:
        transcript.append(verify_matrix_relations(w.map, P))
    rep = NEReport(k, value, primitive, P.d_of_X(), w, cite, transcript)
    if not rep.verified:
        raise InternalInconsistency("self-closeness transcript has failures")
    return rep


def scalar_map(M: Model, c) -> AlgebraMap:
    """``u⊗x -> c u⊗x``, ``v⊗x -> c^2 v⊗x`` on the degree-zero model."""
    A = M.algebra
    c = Fraction(c)
    vals = {}
    for g in A.generators:
        fam = M.provenance[g.label][0]
        vals[g.label] = (c if fam == "u" else c * c) * A.gen(g.label)
    return AlgebraMap(A, A, vals, f"scalar({c})")
