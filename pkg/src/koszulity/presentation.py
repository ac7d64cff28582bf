"""Quivers, paths, path-algebra elements, and validated graded presentations.

The algebra is the path algebra of a quiver modulo an ideal of homogeneous
relations of path length >= 2, so it is graded by path length and generated
in degrees 0 and 1.  Composition is read left to right: in a path ``a*b``
the target of ``a`` is the source of ``b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .errors import InputError
from .linalg import is_prime

DEFAULT_CHAR = 32003


class Arrow(NamedTuple):
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Path:
    """A path in a quiver: a composable arrow sequence, or a vertex idempotent.

    Length-0 paths are the idempotents e_v (source == target == v).
    """

    source: int
    target: int
    arrows: tuple[int, ...]

    def __len__(self):
        return len(self.arrows)

    @property
    def length(self) -> int:
        return len(self.arrows)


def compose(p: Path, q: Path) -> Optional[Path]:
    """Concatenation `p then q`, or None when target(p) != source(q)."""
    if p.target != q.source:
        return None
    return Path(p.source, q.target, p.arrows + q.arrows)


class Quiver:
    """A finite quiver with ordered vertex and arrow lists."""

    def __init__(self, vertices, arrows):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex labels")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        arr = []
        for name, src, tgt in arrows:
            name, src, tgt = str(name), str(src), str(tgt)
            if src not in self.vertex_index:
                raise InputError(f"arrow {name}: unknown source vertex {src}")
            if tgt not in self.vertex_index:
                raise InputError(f"arrow {name}: unknown target vertex {tgt}")
            arr.append(Arrow(name, self.vertex_index[src], self.vertex_index[tgt]))
        self.arrows: tuple[Arrow, ...] = tuple(arr)
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise InputError("duplicate arrow names")
        if set(names) & set(self.vertices):
            raise InputError("arrow names must differ from vertex labels")
        self.arrow_index = {a.name: i for i, a in enumerate(self.arrows)}

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def idempotent(self, v) -> Path:
        i = v if isinstance(v, int) else self.vertex_index[str(v)]
        return Path(i, i, ())

    def arrow_path(self, a) -> Path:
        i = a if isinstance(a, int) else self.arrow_index[str(a)]
        arrow = self.arrows[i]
        return Path(arrow.source, arrow.target, (i,))

    def path(self, *arrow_names) -> Path:
        p = self.arrow_path(arrow_names[0])
        for name in arrow_names[1:]:
            q = compose(p, self.arrow_path(name))
            if q is None:
                raise InputError(f"non-composable path {'*'.join(map(str, arrow_names))}")
            p = q
        return p

    def path_label(self, p: Path) -> str:
        if not p.arrows:
            return f"e_{self.vertices[p.source]}"
        return "*".join(self.arrows[i].name for i in p.arrows)


class AlgebraElement:
    """A linear combination of parallel paths with coefficients in F_p.

    Zero coefficients are never stored.  `terms` maps Path -> residue in
    [1, char).
    """

    __slots__ = ("terms", "char")

    def __init__(self, terms: dict, char: int):
        self.char = char
        self.terms = {}
        for path, c in terms.items():
            c %= char
            if c:
                self.terms[path] = c

    @classmethod
    def zero(cls, char: int) -> "AlgebraElement":
        return cls({}, char)

    @classmethod
    def from_path(cls, path: Path, char: int, coeff: int = 1) -> "AlgebraElement":
        return cls({path: coeff}, char)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        lengths = {len(p) for p in self.terms}
        return len(lengths) <= 1

    def is_parallel(self) -> bool:
        ends = {(p.source, p.target) for p in self.terms}
        return len(ends) <= 1

    @property
    def degree(self) -> Optional[int]:
        if not self.terms:
            return None
        lengths = {len(p) for p in self.terms}
        if len(lengths) != 1:
            return None
        return lengths.pop()

    @property
    def endpoints(self) -> Optional[tuple[int, int]]:
        ends = {(p.source, p.target) for p in self.terms}
        if len(ends) != 1:
            return None
        return ends.pop()

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        terms = dict(self.terms)
        for path, c in other.terms.items():
            terms[path] = terms.get(path, 0) + c
        return AlgebraElement(terms, self.char)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        terms = dict(self.terms)
        for path, c in other.terms.items():
            terms[path] = terms.get(path, 0) - c
        return AlgebraElement(terms, self.char)

    def scale(self, c: int) -> "AlgebraElement":
        return AlgebraElement({p: v * c for p, v in self.terms.items()}, self.char)

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        """Bilinear extension of path concatenation (non-composable -> 0)."""
        terms: dict = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                pq = compose(p, q)
                if pq is not None:
                    terms[pq] = terms.get(pq, 0) + a * b
        return AlgebraElement(terms, self.char)

    def left_mul(self, path: Path) -> "AlgebraElement":
        terms = {}
        for p, c in self.terms.items():
            q = compose(path, p)
            if q is not None:
                terms[q] = c
        return AlgebraElement(terms, self.char)

    def right_mul(self, path: Path) -> "AlgebraElement":
        terms = {}
        for p, c in self.terms.items():
            q = compose(p, path)
            if q is not None:
                terms[q] = c
        return AlgebraElement(terms, self.char)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.char == other.char and self.terms == other.terms

    def __hash__(self):
        return hash((self.char, frozenset(self.terms.items())))

    def __repr__(self):
        return f"AlgebraElement({len(self.terms)} terms, char={self.char})"


@dataclass(frozen=True)
class Violation:
    relation: int
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(f"relation {v.relation}: {v.message}" for v in self.violations)


class QuiverPresentation:
    """A graded algebra FQ/R given by a quiver and homogeneous relations.

    Relations must be homogeneous of path length >= 2 and parallel, so the
    algebra is generated in degrees 0 and 1 over the split semisimple degree-0
    part (one field copy per vertex).
    """

    def __init__(self, quiver: Quiver, relations, char: int = DEFAULT_CHAR):
        self.quiver = quiver
        self.char = char
        self.relations: tuple[AlgebraElement, ...] = tuple(relations)

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        if not is_prime(self.char):
            report.violations.append(Violation(-1, f"characteristic {self.char} is not prime"))
        for idx, rel in enumerate(self.relations):
            if rel.char != self.char:
                report.violations.append(Violation(idx, "coefficient characteristic mismatch"))
                continue
            if rel.is_zero():
                report.violations.append(Violation(idx, "zero relation"))
                continue
            if not rel.is_homogeneous():
                report.violations.append(Violation(idx, "inhomogeneous (mixed path lengths)"))
                continue
            if not rel.is_parallel():
                report.violations.append(Violation(idx, "not parallel (mixed endpoints)"))
                continue
            if rel.degree < 2:
                report.violations.append(Violation(idx, f"degree {rel.degree} < 2"))
            for path in rel.terms:
                for a in path.arrows:
                    if not 0 <= a < len(self.quiver.arrows):
                        report.violations.append(Violation(idx, f"unknown arrow index {a}"))
        return report

    def validated(self) -> "QuiverPresentation":
        report = self.validate()
        if not report.ok:
            raise InputError(str(report))
        return self

    @property
    def max_relation_degree(self) -> int:
        return max((rel.degree or 0) for rel in self.relations) if self.relations else 2

    def __eq__(self, other):
        if not isinstance(other, QuiverPresentation):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.relations == other.relations
            and self.char == other.char
        )

    def __repr__(self):
        return (
            f"QuiverPresentation({self.quiver!r}, {len(self.relations)} relations,"
            f" char={self.char})"
        )


def validate(p: QuiverPresentation) -> ValidationReport:
    return p.validate()
