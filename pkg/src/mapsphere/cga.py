"""Free graded-commutative algebras over Q.

Monomials are sorted tuples of generator ids; an odd-degree id appears at
most once.  Polynomials are sparse ``{monomial: Fraction}`` maps.  Every
sign comes from the Koszul rule: swapping adjacent factors of degrees p and
q costs ``(-1)**(p*q)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from . import linalg

Monomial = tuple  # tuple[int, ...], sorted ascending
Scalar = Fraction
Coeff = Union[int, Fraction]

ONE: Monomial = ()


class StructuralError(ValueError):
    """Operands from different algebras, unknown generators, bad degrees."""


@dataclass(frozen=True)
class Generator:
    id: int
    label: str
    degree: int


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be int or Fraction, got {type(c).__name__}")


class FreeCGA:
    """Free graded-commutative algebra with a differential.

    ``generators`` is a sequence of ``(label, degree)``; ids follow that
    order and fix the monomial normal form.  ``differential`` maps labels to
    polynomials (of an algebra with the same generator table) or to term
    lists ``[(coeff, [label, ...]), ...]``.  Missing entries mean ``d = 0``.
    """

    def __init__(
        self,
        generators: Iterable[tuple[str, int]],
        differential: Mapping[str, object] | None = None,
        name: str = "",
    ):
        gens = []
        seen = set()
        for i, (label, degree) in enumerate(generators):
            if label in seen:
                raise StructuralError(f"duplicate generator label {label!r}")
            if not isinstance(degree, int):
                raise StructuralError(f"degree of {label!r} must be an integer")
            seen.add(label)
            gens.append(Generator(i, label, degree))
        self.name = name
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.signature = tuple((g.label, g.degree) for g in gens)
        self._index = {g.label: g.id for g in gens}
        self._deg = tuple(g.degree for g in gens)
        self._odd = tuple(g.degree % 2 == 1 for g in gens)
        self._mul_cache: dict = {}
        self._d: dict[int, Polynomial] = {}
        for label, value in (differential or {}).items():
            gid = self.index(label)
            p = self.coerce(value)
            if p:
                self._d[gid] = p
        self._d_derivation = None

    # -- construction helpers ---------------------------------------------

    def __repr__(self):
        gens = ", ".join(f"{g.label}:{g.degree}" for g in self.generators)
        return f"FreeCGA({self.name or '?'}; {gens})"

    def __len__(self):
        return len(self.generators)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"unknown generator {label!r} in {self!r}") from None

    def generator(self, label: str) -> Generator:
        return self.generators[self.index(label)]

    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    def same_host(self, other: "FreeCGA") -> bool:
        return other is self or other.signature == self.signature

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {ONE: Fraction(1)})

    def scalar(self, c: Coeff) -> "Polynomial":
        c = _as_fraction(c)
        return Polynomial(self, {ONE: c} if c else {})

    def gen(self, label: str) -> "Polynomial":
        return Polynomial(self, {(self.index(label),): Fraction(1)})

    def gens(self, *labels: str) -> list["Polynomial"]:
        return [self.gen(lb) for lb in labels]

    def monomial(self, labels: Sequence[str], coeff: Coeff = 1) -> "Polynomial":
        """Product of the named generators in the order given."""
        res = normalize_monomial(self, [self.index(lb) for lb in labels])
        if res is None:
            return self.zero()
        sign, mono = res
        c = _as_fraction(coeff) * sign
        return Polynomial(self, {mono: c} if c else {})

    def poly(self, terms: Iterable[tuple[Coeff, Sequence[str]]]) -> "Polynomial":
        out = self.zero()
        for coeff, labels in terms:
            out = out + self.monomial(labels, coeff)
        return out

    def coerce(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.algebra is self:
                return value
            if not self.same_host(value.algebra):
                raise StructuralError("polynomial belongs to a different algebra")
            return Polynomial(self, dict(value.terms))
        if isinstance(value, (int, Fraction)):
            return self.scalar(value)
        return self.poly(value)

    # -- structure ----------------------------------------------------------

    def degree_of(self, mono: Monomial) -> int:
        return sum(self._deg[i] for i in mono)

    def d(self, p: "Polynomial") -> "Polynomial":
        return self.differential.apply(p)

    @property
    def differential(self) -> "Derivation":
        if self._d_derivation is None:
            self._d_derivation = Derivation(self, 1, {i: p for i, p in self._d.items()})
        return self._d_derivation

    def d_gen(self, label: str) -> "Polynomial":
        return self._d.get(self.index(label), self.zero())

    def differential_table(self) -> dict[str, "Polynomial"]:
        return {g.label: self._d.get(g.id, self.zero()) for g in self.generators}

    def with_differential(self, differential: Mapping[str, object], name: str | None = None) -> "FreeCGA":
        return FreeCGA(self.signature, differential, name=self.name if name is None else name)

    def degrees(self) -> dict[int, list[Generator]]:
        out: dict[int, list[Generator]] = {}
        for g in self.generators:
            out.setdefault(g.degree, []).append(g)
        return out

    # -- monomial arithmetic ------------------------------------------------

    def _mul_monomials(self, a: Monomial, b: Monomial):
        """Return ``(sign, monomial)`` for ``a*b`` or ``None`` when it vanishes."""
        if not a:
            return 1, b
        if not b:
            return 1, a
        key = (a, b)
        cached = self._mul_cache.get(key, False)
        if cached is not False:
            return cached
        odd = self._odd
        # suffix counts of odd factors in a
        suffix = [0] * (len(a) + 1)
        for k in range(len(a) - 1, -1, -1):
            suffix[k] = suffix[k + 1] + odd[a[k]]
        out = []
        flips = 0
        i = j = 0
        result = None
        while i < len(a) and j < len(b):
            if a[i] < b[j]:
                out.append(a[i])
                i += 1
            elif a[i] > b[j]:
                if odd[b[j]]:
                    flips += suffix[i]
                out.append(b[j])
                j += 1
            else:
                if odd[a[i]]:
                    break
                out.append(a[i])
                i += 1
        else:
            out.extend(a[i:])
            out.extend(b[j:])
            result = (-1 if flips % 2 else 1, tuple(out))
        if len(self._mul_cache) < 200_000:
            self._mul_cache[key] = result
        return result


def normalize_monomial(algebra: FreeCGA, factors: Sequence[int]):
    """Sort generator ids into normal form.

    Returns ``(sign, monomial)`` where ``sign`` is the Koszul sign of the
    sorting permutation, or ``None`` when an odd generator repeats.
    """
    n = len(algebra.generators)
    for f in factors:
        if not isinstance(f, int) or not 0 <= f < n:
            raise StructuralError(f"generator id {f!r} is not in {algebra!r}")
    odd = algebra._odd
    seq = list(factors)
    flips = 0
    for k in range(1, len(seq)):
        x = seq[k]
        j = k - 1
        while j >= 0 and seq[j] > x:
            if odd[x] and odd[seq[j]]:
                flips += 1
            seq[j + 1] = seq[j]
            j -= 1
        seq[j + 1] = x
    for k in range(1, len(seq)):
        if seq[k] == seq[k - 1] and odd[seq[k]]:
            return None
    return (-1 if flips % 2 else 1), tuple(seq)


class Polynomial:
    """Sparse element of a :class:`FreeCGA`; zero coefficients are never stored."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: FreeCGA, terms: dict):
        self.algebra = algebra
        self.terms = terms

    # -- basic protocol ---------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other: "Polynomial"):
        if not self.algebra.same_host(other.algebra):
            raise StructuralError("operands live in different algebras")

    def _wrap(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.algebra.scalar(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._wrap(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            if not c:
                return self.algebra.zero()
            return Polynomial(self.algebra, {m: v * c for m, v in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        alg = self.algebra
        out: dict = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                r = alg._mul_monomials(a, b)
                if r is None:
                    continue
                sign, m = r
                v = out.get(m, 0) + sign * ca * cb
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Polynomial(alg, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    # -- queries --------------------------------------------------------------

    def degrees(self) -> set[int]:
        return {self.algebra.degree_of(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Degree of a homogeneous nonzero polynomial, ``None`` for zero."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def coefficient(self, labels: Sequence[str]) -> Fraction:
        """Coefficient of the product of ``labels`` taken in the written order."""
        res = normalize_monomial(self.algebra, [self.algebra.index(lb) for lb in labels])
        if res is None:
            return Fraction(0)
        sign, m = res
        return sign * self.terms.get(m, Fraction(0))

    def generators_used(self) -> set[int]:
        return {i for m in self.terms for i in m}

    def is_decomposable(self) -> bool:
        """True when every monomial has word length at least two."""
        return all(len(m) >= 2 for m in self.terms)

    def word_length_part(self, k: int) -> "Polynomial":
        return Polynomial(self.algebra, {m: c for m, c in self.terms.items() if len(m) == k})

    def restrict(self, keep) -> "Polynomial":
        """Keep only monomials satisfying the predicate ``keep``."""
        return Polynomial(self.algebra, {m: c for m, c in self.terms.items() if keep(m)})

    def rehost(self, algebra: FreeCGA, id_map: Mapping[int, int]) -> "Polynomial":
        """Rename generators into ``algebra`` (``id_map`` must be order-preserving or re-sorted)."""
        out: dict = {}
        for m, c in self.terms.items():
            res = normalize_monomial(algebra, [id_map[i] for i in m])
            if res is None:
                continue
            sign, nm = res
            v = out.get(nm, 0) + sign * c
            if v:
                out[nm] = v
            else:
                out.pop(nm, None)
        return Polynomial(algebra, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def to_terms(self) -> list[tuple[Fraction, list[str]]]:
        labels = self.algebra.generators
        return [(c, [labels[i].label for i in m]) for m, c in self.sorted_terms()]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        gens = self.algebra.generators
        for m, c in self.sorted_terms():
            word = "*".join(_power_word(gens, m))
            if not word:
                parts.append(str(c))
            elif c == 1:
                parts.append(word)
            elif c == -1:
                parts.append("-" + word)
            else:
                parts.append(f"{c}*{word}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _power_word(gens, mono):
    out = []
    k = 0
    while k < len(mono):
        j = k
        while j < len(mono) and mono[j] == mono[k]:
            j += 1
        label = gens[mono[k]].label
        out.append(label if j - k == 1 else f"{label}^{j - k}")
        k = j
    return out


class Derivation:
    """Degree-``shift`` derivation determined by its values on generators.

    Extension rule: ``D(ab) = D(a) b + (-1)**(shift*|a|) a D(b)``.
    """

    def __init__(self, algebra: FreeCGA, shift: int, values: Mapping):
        self.algebra = algebra
        self.shift = shift
        self.values: dict[int, Polynomial] = {}
        for key, val in values.items():
            gid = algebra.index(key) if isinstance(key, str) else key
            p = algebra.coerce(val)
            if p:
                want = algebra.generators[gid].degree + shift
                if p.degrees() != {want}:
                    raise StructuralError(
                        f"value on {algebra.generators[gid].label} must have degree {want}, "
                        f"got {sorted(p.degrees())}"
                    )
                self.values[gid] = p
        self._cache: dict = {}

    def _on_monomial(self, m: Monomial) -> Polynomial:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.algebra
        out = alg.zero()
        deg_before = 0
        for k, g in enumerate(m):
            val = self.values.get(g)
            if val is not None and (k == 0 or m[k] != m[k - 1] or alg._odd[g]):
                # equal even neighbours: collect multiplicity once
                mult = 1
                while k + mult < len(m) and m[k + mult] == g:
                    mult += 1
                prefix = Polynomial(alg, {m[:k]: Fraction(1)})
                suffix = Polynomial(alg, {m[k + 1:]: Fraction(1)})
                term = prefix * val * suffix
                sign = -1 if (self.shift * deg_before) % 2 else 1
                if alg._odd[g]:
                    out = out + term * sign
                else:
                    # each copy of an even generator contributes with the same sign
                    out = out + term * (sign * mult)
            deg_before += alg._deg[g]
        if len(self._cache) < 100_000:
            self._cache[m] = out
        return out

    def apply(self, p: Polynomial) -> Polynomial:
        if not self.algebra.same_host(p.algebra):
            raise StructuralError("polynomial not in the derivation's algebra")
        out = self.algebra.zero()
        for m, c in p.terms.items():
            v = self._on_monomial(m)
            if v:
                out = out + v * c
        return out

    __call__ = apply


class AlgebraMap:
    """Degree-preserving algebra map given by its values on generators."""

    def __init__(self, source: FreeCGA, target: FreeCGA, values: Mapping, name: str = ""):
        self.source = source
        self.target = target
        self.name = name
        self.values: dict[int, Polynomial] = {}
        for key, val in values.items():
            gid = source.index(key) if isinstance(key, str) else key
            p = target.coerce(val)
            want = source.generators[gid].degree
            if p and p.degrees() != {want}:
                raise StructuralError(
                    f"image of {source.generators[gid].label} must have degree {want}, "
                    f"got {sorted(p.degrees())}"
                )
            self.values[gid] = p
        missing = [g.label for g in source.generators if g.id not in self.values]
        if missing:
            raise StructuralError(f"no image given for {', '.join(missing)}")

    @classmethod
    def identity(cls, algebra: FreeCGA) -> "AlgebraMap":
        return cls(algebra, algebra, {g.id: algebra.gen(g.label) for g in algebra.generators}, "id")

    def image(self, label: str) -> Polynomial:
        return self.values[self.source.index(label)]

    def __call__(self, p: Polynomial) -> Polynomial:
        if not self.source.same_host(p.algebra):
            raise StructuralError("polynomial not in the map's source")
        out = self.target.zero()
        one = self.target.one()
        for m, c in p.terms.items():
            img = one
            for g in m:
                img = img * self.values[g]
                if not img:
                    break
            if img:
                out = out + img * c
        return out

    def compose(self, inner: "AlgebraMap") -> "AlgebraMap":
        """``self o inner``."""
        if not inner.target.same_host(self.source):
            raise StructuralError("maps are not composable")
        return AlgebraMap(
            inner.source,
            self.target,
            {gid: self(p) for gid, p in inner.values.items()},
            f"{self.name}o{inner.name}",
        )

    def d_defect(self, label: str) -> Polynomial:
        """``d(f(g)) - f(d(g))`` for one generator."""
        gid = self.source.index(label)
        return self.target.d(self.values[gid]) - self(self.source.d_gen(label))

    def first_d_violation(self) -> tuple[str, Polynomial] | None:
        for g in self.source.generators:
            r = self.d_defect(g.label)
            if r:
                return g.label, r
        return None

    def is_dga_map(self) -> bool:
        return self.first_d_violation() is None

    def table(self) -> dict[str, Polynomial]:
        return {g.label: self.values[g.id] for g in self.source.generators}


@dataclass
class LinearBlock:
    degree: int
    rows: list[str]  # target generators
    cols: list[str]  # source generators
    matrix: list  # rows x cols, Fractions

    def is_square(self) -> bool:
        return len(self.rows) == len(self.cols)

    def is_invertible(self) -> bool:
        return self.is_square() and linalg.is_invertible(self.matrix)


@dataclass
class LinearPart:
    """Per-degree matrices of the induced map on generator spaces.

    Column ``j`` of a block holds the coefficients of the length-one
    monomials in the image of source generator ``j``.
    """

    blocks: dict[int, LinearBlock] = field(default_factory=dict)

    def degrees(self) -> list[int]:
        return sorted(self.blocks)

    def __getitem__(self, degree: int) -> LinearBlock:
        return self.blocks[degree]

    def singular_degrees(self) -> list[int]:
        return [d for d in self.degrees() if not self.blocks[d].is_invertible()]

    def compose(self, inner: "LinearPart") -> "LinearPart":
        out = {}
        for deg, outer in self.blocks.items():
            b = inner.blocks[deg]
            out[deg] = LinearBlock(
                deg, outer.rows, b.cols,
                linalg.matmul(outer.matrix, b.matrix, inner=len(b.rows), cols=len(b.cols)),
            )
        return LinearPart(out)


def linear_part(f: AlgebraMap) -> LinearPart:
    src = f.source.degrees()
    tgt = f.target.degrees()
    blocks = {}
    for deg in sorted(set(src) | set(tgt)):
        cols = src.get(deg, [])
        rows = tgt.get(deg, [])
        row_pos = {g.id: i for i, g in enumerate(rows)}
        mat = linalg.zeros(len(rows), len(cols))
        for j, g in enumerate(cols):
            for m, c in f.values[g.id].terms.items():
                if len(m) == 1 and m[0] in row_pos:
                    mat[row_pos[m[0]]][j] = c
        blocks[deg] = LinearBlock(deg, [g.label for g in rows], [g.label for g in cols], mat)
    return LinearPart(blocks)


def is_isomorphism_through(lp: LinearPart, bound: int | float) -> bool:
    """True iff every per-degree block in degrees ``<= bound`` is invertible."""
    return all(b.is_invertible() for d, b in lp.blocks.items() if d <= bound)


def first_singular_degree(lp: LinearPart) -> int | None:
    bad = lp.singular_degrees()
    return bad[0] if bad else None


def is_minimal(algebra: FreeCGA) -> bool | None:
    """Minimality of a Sullivan algebra; ``None`` if a generator has degree <= 0."""
    if any(g.degree <= 0 for g in algebra.generators):
        return None
    deg = algebra._deg
    for g in algebra.generators:
        dg = algebra.d_gen(g.label)
        for m in dg.terms:
            if len(m) < 2:
                return False
            if any(deg[i] >= g.degree for i in m):
                return False
    return True


@dataclass
class DSquared:
    ok: bool
    generator: str | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_d_squared(algebra: FreeCGA) -> DSquared:
    for g in algebra.generators:
        dg = algebra.d_gen(g.label)
        if dg and dg.degrees() != {g.degree + 1}:
            return DSquared(False, g.label, f"d({g.label}) has degrees {sorted(dg.degrees())}, "
                                            f"expected {g.degree + 1}")
        ddg = algebra.d(dg)
        if ddg:
            return DSquared(False, g.label, f"d(d({g.label})) = {ddg}")
    return DSquared(True)
