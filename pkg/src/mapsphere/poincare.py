"""Rational Poincare-duality cohomology rings and their homology pairing.

A ring is given on a cohomology basis.  Homology is realized as the formal
dual basis and re-based to the canonical basis ``B``: low degrees keep the
input basis, degrees ``2n - i`` carry the Poincare duals, and the middle
degree is normalized by congruence (diagonal for ``n`` even, 2x2
symplectic blocks for ``n`` odd).

``epsilon(x, y, z)`` is the coefficient of ``z*`` in ``y* x*`` where the
stars are dual cohomology classes with respect to ``B``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product as iproduct
from pathlib import Path

from . import linalg

UNIT = "1"
TOP = "w"

_COEFF_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class RingParseError(ValueError):
    """Malformed ring document; ``location`` points at the offending entry."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class InvalidRingError(ValueError):
    def __init__(self, diagnostics: list["Diagnostic"]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


class InternalInconsistency(RuntimeError):
    """A construction that must succeed on validated input did not."""


def parse_coefficient(text, location: str = "") -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise RingParseError(f"coefficient must be 'p/q' text, got {text!r}", location)
    m = _COEFF_RE.match(text)
    if not m:
        raise RingParseError(f"bad coefficient {text!r}", location)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise RingParseError(f"zero denominator in {text!r}", location)
    return Fraction(num, den)


def format_coefficient(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


@dataclass
class Diagnostic:
    code: str
    message: str
    where: tuple = ()

    def __str__(self):
        loc = f" [{', '.join(map(str, self.where))}]" if self.where else ""
        return f"{self.code}: {self.message}{loc}"


@dataclass
class CohomologyRing:
    """Raw ring data as read from a document, before validation."""

    name: str
    dimension: int
    basis: list  # [(label, degree)], unit included
    products: dict  # (a, b) -> {e: Fraction}, only the orientations given
    fundamental_class: str

    def degree(self, label: str) -> int:
        return dict(self.basis)[label]


def parse_ring(doc: dict) -> CohomologyRing:
    if not isinstance(doc, dict):
        raise RingParseError("ring document must be a JSON object")
    for key in ("dimension", "generators", "fundamental_class"):
        if key not in doc:
            raise RingParseError(f"missing field {key!r}")
    dim = doc["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise RingParseError("dimension must be an integer", "dimension")
    basis = []
    seen = set()
    for i, g in enumerate(doc["generators"]):
        loc = f"generators[{i}]"
        if not isinstance(g, dict) or "label" not in g or "degree" not in g:
            raise RingParseError("expected {label, degree}", loc)
        label, deg = g["label"], g["degree"]
        if not isinstance(label, str) or not label:
            raise RingParseError("label must be a nonempty string", loc)
        if not isinstance(deg, int) or isinstance(deg, bool):
            raise RingParseError("degree must be an integer", loc)
        if label in seen:
            raise RingParseError(f"duplicate label {label!r}", loc)
        seen.add(label)
        basis.append((label, deg))
    if UNIT not in seen:
        basis.insert(0, (UNIT, 0))
    products: dict = {}
    for i, entry in enumerate(doc.get("products", [])):
        loc = f"products[{i}]"
        if not (isinstance(entry, list) and len(entry) == 3 and isinstance(entry[2], dict)):
            raise RingParseError("expected [labelA, labelB, {label: 'p/q'}]", loc)
        a, b, out = entry
        for lb in (a, b, *out):
            if lb not in seen and lb != UNIT:
                raise RingParseError(f"unknown label {lb!r}", loc)
        if (a, b) in products:
            raise RingParseError(f"product {a}*{b} given twice", loc)
        vals = {}
        for e, c in out.items():
            v = parse_coefficient(c, f"{loc}.{e}")
            if v:
                vals[e] = v
        products[(a, b)] = vals
    fc = doc["fundamental_class"]
    if not isinstance(fc, str):
        raise RingParseError("fundamental_class must be a label", "fundamental_class")
    return CohomologyRing(str(doc.get("name", "")), dim, basis, products, fc)


def load_ring(path) -> CohomologyRing:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RingParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_ring(doc)


def ring_to_document(ring: CohomologyRing) -> dict:
    return {
        "name": ring.name,
        "dimension": ring.dimension,
        "generators": [{"label": lb, "degree": d} for lb, d in ring.basis],
        "products": [
            [a, b, {e: format_coefficient(c) for e, c in out.items()}]
            for (a, b), out in ring.products.items()
        ],
        "fundamental_class": ring.fundamental_class,
    }


# -- validation ---------------------------------------------------------------


def _product_table(ring: CohomologyRing, diags: list) -> dict:
    """Full structure constants ``(a, b) -> {e: c}`` with commutativity inferred."""
    deg = dict(ring.basis)
    labels = [lb for lb, _ in ring.basis]
    table: dict = {}
    for (a, b), out in ring.products.items():
        if a == UNIT or b == UNIT:
            other = b if a == UNIT else a
            if out != {other: Fraction(1)}:
                diags.append(Diagnostic("unit", f"1 must act as unit, got {a}*{b} = {out}", (a, b)))
            continue
        for e in out:
            if deg[e] != deg[a] + deg[b]:
                diags.append(Diagnostic(
                    "degree", f"{a}*{b} has a term in {e} of degree {deg[e]}", (a, b, e)))
        table[(a, b)] = {e: c for e, c in out.items() if deg[e] == deg[a] + deg[b]}
    for (a, b), out in list(table.items()):
        sign = -1 if deg[a] * deg[b] % 2 else 1
        flipped = {e: sign * c for e, c in out.items()}
        if (b, a) in table:
            if table[(b, a)] != flipped:
                diags.append(Diagnostic(
                    "commutativity", f"{a}*{b} and {b}*{a} violate graded commutativity", (a, b)))
        else:
            table[(b, a)] = flipped
    for a in labels:
        table[(UNIT, a)] = {a: Fraction(1)}
        table[(a, UNIT)] = {a: Fraction(1)}
    return table


def _mul_vec(table, labels_deg, u: dict, v: dict) -> dict:
    out: dict = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for e, c in table.get((a, b), {}).items():
                out[e] = out.get(e, 0) + ca * cb * c
    return {e: c for e, c in out.items() if c}


def diagnose(ring: CohomologyRing) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    two_n = ring.dimension
    if two_n <= 0 or two_n % 2:
        diags.append(Diagnostic("dimension", f"dimension must be even and positive, got {two_n}"))
        return diags
    deg = dict(ring.basis)
    by_deg: dict = {}
    for lb, d in ring.basis:
        by_deg.setdefault(d, []).append(lb)
        if not 0 <= d <= two_n:
            diags.append(Diagnostic("degree", f"{lb} has degree {d} outside [0, {two_n}]", (lb,)))
    if by_deg.get(0) != [UNIT]:
        diags.append(Diagnostic("unit", f"degree-0 basis must be exactly [1], got {by_deg.get(0)}"))
    for bad in (1, two_n - 1):
        if by_deg.get(bad):
            diags.append(Diagnostic("odd-edge", f"H^{bad} must vanish, got {by_deg[bad]}", (bad,)))
    top = by_deg.get(two_n, [])
    if len(top) != 1:
        diags.append(Diagnostic("top", f"top degree {two_n} must have exactly one basis class, got {top}"))
    elif ring.fundamental_class != top[0]:
        diags.append(Diagnostic("top", f"fundamental class {ring.fundamental_class!r} is not the top class {top[0]!r}"))
    if diags:
        return diags
    table = _product_table(ring, diags)
    labels = [lb for lb, _ in ring.basis]
    # associativity over all basis triples
    for a, b, c in iproduct(labels, repeat=3):
        if deg[a] + deg[b] + deg[c] > two_n or UNIT in (a, b, c):
            continue
        left = _mul_vec(table, deg, _mul_vec(table, deg, {a: 1}, {b: 1}), {c: 1})
        right = _mul_vec(table, deg, {a: 1}, _mul_vec(table, deg, {b: 1}, {c: 1}))
        if left != right:
            diags.append(Diagnostic("associativity", f"({a}{b}){c} != {a}({b}{c})", (a, b, c)))
    fc = ring.fundamental_class
    for i in range(0, two_n + 1):
        low, high = by_deg.get(i, []), by_deg.get(two_n - i, [])
        if len(low) != len(high):
            diags.append(Diagnostic(
                "duality", f"dim H^{i} = {len(low)} but dim H^{two_n - i} = {len(high)}", (i,)))
            continue
        if not low:
            continue
        mat = [[table.get((a, b), {}).get(fc, Fraction(0)) for b in high] for a in low]
        if linalg.det(mat) == 0:
            diags.append(Diagnostic("duality", f"pairing H^{i} x H^{two_n - i} -> H^{two_n} is singular", (i,)))
    return diags


def validate_ring(ring: CohomologyRing) -> "PoincareData":
    diags = diagnose(ring)
    if diags:
        raise InvalidRingError(diags)
    return PoincareData(ring, _product_table(ring, []))


# -- validated data and canonical basis -----------------------------------------


@dataclass
class HomologyClass:
    index: int  # position in B
    label: str
    degree: int
    pos: int  # position inside B_degree


@dataclass
class CanonicalBasis:
    """Ordered homology basis ``B`` with change-of-basis data.

    ``change[d]`` has the new classes of ``B_d`` as columns, in coordinates of
    the formal duals of the input cohomology basis; ``dual[d]`` is its
    inverse, whose rows are the dual cohomology classes.
    """

    n: int
    classes: list[HomologyClass]
    change: dict
    dual: dict
    input_labels: dict  # degree -> input cohomology labels
    gram: list  # middle-degree matrix (epsilon(x_i, x_j, w))

    def by_degree(self, d: int) -> list[HomologyClass]:
        return [x for x in self.classes if x.degree == d]

    def __getitem__(self, label: str) -> HomologyClass:
        index = self.__dict__.get("_index")
        if index is None or len(index) != len(self.classes):
            index = self.__dict__["_index"] = {x.label: x for x in self.classes}
        return index[label]

    def labels(self) -> list[str]:
        return [x.label for x in self.classes]

    def hat_set(self) -> list[HomologyClass]:
        """``B-hat``: classes of degree strictly between 0 and 2n."""
        return [x for x in self.classes if 0 < x.degree < 2 * self.n]

    def describe(self, label: str) -> str:
        """Write a class as a combination of input duals."""
        x = self[label]
        col = [row[x.pos] for row in self.change[x.degree]]
        names = self.input_labels[x.degree]
        parts = [f"{c}*{nm}^" if c != 1 else f"{nm}^" for c, nm in zip(col, names) if c]
        return " + ".join(parts).replace("+ -", "- ")


class PoincareData:
    """Validated ring with its structure table; all queries are pure."""

    def __init__(self, ring: CohomologyRing, table: dict):
        self.ring = ring
        self.table = table
        self.dimension = ring.dimension
        self.n = ring.dimension // 2
        self.name = ring.name
        self._deg = dict(ring.basis)
        self.cohomology_by_degree: dict = {}
        for lb, d in ring.basis:
            self.cohomology_by_degree.setdefault(d, []).append(lb)

    def __repr__(self):
        return f"PoincareData({self.name or '?'}, 2n={self.dimension})"

    def betti(self, d: int) -> int:
        return len(self.cohomology_by_degree.get(d, []))

    def coeff(self, a: str, b: str, e: str) -> Fraction:
        """Structure constant: coefficient of ``e`` in ``a * b``."""
        return self.table.get((a, b), {}).get(e, Fraction(0))

    @cached_property
    def basis(self) -> CanonicalBasis:
        return build_canonical_basis(self)

    @cached_property
    def _eps(self) -> dict:
        return _epsilon_table(self)

    def epsilon(self, x: str, y: str, z: str) -> Fraction:
        B = self.basis
        try:
            i, j, k = B[x].index, B[y].index, B[z].index
        except KeyError as exc:
            raise KeyError(f"unknown homology class {exc.args[0]!r}") from None
        return self._eps.get((i, j, k), Fraction(0))

    def eps_idx(self, i: int, j: int, k: int) -> Fraction:
        return self._eps.get((i, j, k), Fraction(0))

    def epsilon_items(self):
        return self._eps.items()

    @cached_property
    def _hat(self) -> dict:
        B = self.basis
        top = B[TOP].index
        out = {}
        for x in B.hat_set():
            partners = [y for y in B.classes if self._eps.get((x.index, y.index, top))]
            if len(partners) != 1:
                raise InternalInconsistency(
                    f"{x.label} pairs nontrivially with {[p.label for p in partners]}")
            out[x.label] = partners[0].label
        return out

    def hat(self, x: str) -> str:
        if x not in self._hat:
            raise ValueError(f"{x!r} is not in B-hat (0 < |x| < 2n)")
        return self._hat[x]

    def eps_of(self, x: str) -> Fraction:
        """``epsilon(x, hat x, w)``."""
        return self.epsilon(x, self.hat(x), TOP)

    def e_matrix(self, k: int, x: str) -> list:
        """``E_k(x)_{pq} = epsilon(x_p^k, x_q^{i-k}, x)`` for ``x`` in ``B_i``."""
        B = self.basis
        i = B[x].degree
        rows = B.by_degree(k)
        cols = B.by_degree(i - k)
        z = B[x].index
        return [[self.eps_idx(r.index, c.index, z) for c in cols] for r in rows]

    def is_primitive(self) -> bool:
        return is_primitive(self)

    def d_of_X(self) -> int:
        return d_of_X(self)


def _unique_label(base: str, taken: set) -> str:
    label = base
    while label in taken:
        label += "'"
    taken.add(label)
    return label


def build_canonical_basis(P: PoincareData) -> CanonicalBasis:
    n, two_n = P.n, P.dimension
    fc = P.ring.fundamental_class
    coh = P.cohomology_by_degree
    change: dict = {}
    dual: dict = {}
    labels: dict = {}
    taken = {UNIT, TOP}

    change[0] = dual[0] = linalg.identity(1)
    labels[0] = [UNIT]
    change[two_n] = dual[two_n] = linalg.identity(1)
    labels[two_n] = [TOP]
    for i in range(2, n):
        low = coh.get(i, [])
        if not low:
            continue
        change[i] = dual[i] = linalg.identity(len(low))
        labels[i] = [_unique_label(lb, taken) for lb in low]
        high = coh[two_n - i]
        # K[b'][a] = coefficient of the top class in f_b' * e_a
        K = [[P.coeff(f, e, fc) for e in low] for f in high]
        dual[two_n - i] = linalg.inverse(K)
        change[two_n - i] = K
        labels[two_n - i] = [_unique_label(f"PD({lb})", taken) for lb in labels[i]]
    mid = coh.get(n, [])
    gram: list = []
    if mid:
        S = [[P.coeff(b, a, fc) for b in mid] for a in mid]
        if n % 2 == 0:
            p, gram = linalg.congruence_diagonalize(S)
        else:
            try:
                p, gram = linalg.symplectic_reduce(S)
            except ValueError as exc:
                raise InternalInconsistency(f"middle-degree skew form: {exc}") from None
        if any(gram[i][i] == 0 for i in range(len(mid))) and n % 2 == 0:
            raise InternalInconsistency("middle-degree symmetric form is degenerate")
        dual[n] = p
        change[n] = linalg.inverse(p)
        if p == linalg.identity(len(mid)):
            labels[n] = [_unique_label(lb, taken) for lb in mid]
        else:
            labels[n] = [_unique_label(f"m{n}_{j + 1}", taken) for j in range(len(mid))]
    classes = []
    for d in sorted(labels):
        for pos, lb in enumerate(labels[d]):
            classes.append(HomologyClass(len(classes), lb, d, pos))
    return CanonicalBasis(n, classes, change, dual, {d: coh[d] for d in labels}, gram)


def _epsilon_table(P: PoincareData) -> dict:
    """Sparse ``(i, j, k) -> epsilon`` over indices of ``B``.

    ``epsilon(x, y, z) = sum dual_x[a] dual_y[b] c(e_b * e_a -> e_c) change_z[c]``.
    """
    B = P.basis
    coh = P.cohomology_by_degree
    degs = sorted(B.change)
    out = {}
    for dx in degs:
        for dy in degs:
            dz = dx + dy
            if dz not in B.change:
                continue
            X, Y, Z = B.by_degree(dx), B.by_degree(dy), B.by_degree(dz)
            ex, ey, ez = coh[dx], coh[dy], coh[dz]
            # T[a][b][c] = coefficient of e_c in e_b * e_a
            T = [[[P.coeff(b, a, c) for c in ez] for b in ey] for a in ex]
            for x in X:
                px = B.dual[dx][x.pos]
                for y in Y:
                    py = B.dual[dy][y.pos]
                    vec = [Fraction(0)] * len(ez)
                    for a, ca in enumerate(px):
                        if not ca:
                            continue
                        for b, cb in enumerate(py):
                            if not cb:
                                continue
                            row = T[a][b]
                            for c in range(len(ez)):
                                if row[c]:
                                    vec[c] += ca * cb * row[c]
                    for z in Z:
                        val = sum(vec[c] * B.change[dz][c][z.pos] for c in range(len(ez)))
                        if val:
                            out[(x.index, y.index, z.index)] = Fraction(val)
    return out


def is_primitive(P: PoincareData) -> bool:
    """No nonzero product of positive-degree classes below the top degree."""
    coh = P.cohomology_by_degree
    for i in range(1, P.dimension):
        target = coh.get(i, [])
        if not target:
            continue
        vectors = []
        for j in range(1, i):
            for a in coh.get(j, []):
                for b in coh.get(i - j, []):
                    vectors.append([P.coeff(a, b, e) for e in target])
        if vectors and linalg.rank(vectors) > 0:
            return False
    return True


def d_of_X(P: PoincareData) -> int:
    """Least ``d >= n`` with ``H^d != 0``."""
    for d in range(P.n, P.dimension + 1):
        if P.betti(d):
            return d
    raise InternalInconsistency("top class missing")
