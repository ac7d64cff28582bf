"""Degree-truncated noncommutative Groebner bases and graded algebra data.

The relation ideal is completed up to a degree bound D by the overlap
(Buchberger/Mora) procedure; truncation guarantees termination.  Normal
words of each degree then form a basis of the algebra in that range, and
multiplication is concatenate-then-reduce.

`GradedAlgebra` is the degree-indexed view every downstream module consumes:
per-degree bases split by vertex pair plus structure constants.  It is also
the re-entry point for algebras given directly by multiplication tables
(see `modules.ingest_structure_constants`).
"""

from __future__ import annotations

from .errors import InputError
from .presentation import AlgebraElement, Path, QuiverPresentation, compose


class MonomialOrder:
    """Degree-lexicographic order on paths.

    Longer paths are larger; ties are broken arrow by arrow, earlier arrows
    in the precedence list being larger.  The default precedence is the
    declaration order of the arrows.
    """

    def __init__(self, quiver, precedence=None):
        self.quiver = quiver
        n = len(quiver.arrows)
        if precedence is None:
            order = list(range(n))
        else:
            order = [quiver.arrow_index[str(a)] if not isinstance(a, int) else a for a in precedence]
            if sorted(order) != list(range(n)):
                raise InputError("order must list every arrow exactly once")
        self.precedence = tuple(order)
        self._rank = [0] * n
        for rank, arrow in enumerate(order):
            self._rank[arrow] = rank

    def key(self, path: Path):
        """Sort key; larger paths get larger keys."""
        return (len(path.arrows), tuple(-self._rank[a] for a in path.arrows), path.source)

    def leading_path(self, elem: AlgebraElement) -> Path:
        return max(elem.terms, key=self.key)

    def sorted_terms(self, elem: AlgebraElement):
        return sorted(elem.terms.items(), key=lambda it: self.key(it[0]), reverse=True)


class GroebnerBasis:
    """Tip-reduced homogeneous Groebner basis, complete up to degree D."""

    def __init__(self, presentation: QuiverPresentation, order: MonomialOrder, elements, D: int):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self.char = presentation.char
        self.order = order
        self.elements: tuple[AlgebraElement, ...] = tuple(elements)
        self.D = D
        self.leads: tuple[Path, ...] = tuple(order.leading_path(g) for g in self.elements)
        self._lead_words = {lead.arrows: i for i, lead in enumerate(self.leads)}
        self._lead_lengths = sorted({len(w) for w in self._lead_words}) if self._lead_words else []

    def reducer_at(self, word: tuple[int, ...]):
        """First (leftmost position, then shortest lead) factor occurrence."""
        n = len(word)
        for start in range(n):
            for length in self._lead_lengths:
                if start + length > n:
                    break
                idx = self._lead_words.get(word[start : start + length])
                if idx is not None:
                    return start, length, idx
        return None

    def is_normal(self, word: tuple[int, ...]) -> bool:
        return self.reducer_at(word) is None

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements, D={self.D})"


def _reduce(elem: AlgebraElement, gb: GroebnerBasis) -> AlgebraElement:
    """Fully reduce: no term of the result contains a leading word."""
    char = elem.char
    pending = dict(elem.terms)
    result: dict = {}
    order = gb.order
    while pending:
        path = max(pending, key=order.key)
        coeff = pending.pop(path) % char
        if not coeff:
            continue
        hit = gb.reducer_at(path.arrows)
        if hit is None:
            result[path] = (result.get(path, 0) + coeff) % char
            continue
        start, length, idx = hit
        g = gb.elements[idx]
        lead = gb.leads[idx]
        # path = u * lead * v; replace lead by lead - g (tail terms).
        u_arrows = path.arrows[:start]
        v_arrows = path.arrows[start + length :]
        u_source = path.source
        v_target = path.target
        for tail_path, tail_c in g.terms.items():
            if tail_path == lead:
                continue
            new_arrows = u_arrows + tail_path.arrows + v_arrows
            new_path = Path(u_source, v_target, new_arrows)
            pending[new_path] = (pending.get(new_path, 0) - coeff * tail_c) % char
    return AlgebraElement({p: c for p, c in result.items() if c}, char)


def normal_form(elem: AlgebraElement, gb: GroebnerBasis) -> AlgebraElement:
    """Unique normal form of `elem` modulo the ideal, valid up to degree D."""
    if elem.terms and max(len(p) for p in elem.terms) > gb.D:
        raise InputError(f"element degree exceeds truncation bound {gb.D}")
    return _reduce(elem, gb)


def _monic(elem: AlgebraElement, order: MonomialOrder) -> AlgebraElement:
    from .linalg import inv_mod

    lead = order.leading_path(elem)
    c = elem.terms[lead]
    if c == 1:
        return elem
    return elem.scale(inv_mod(c, elem.char))


def _element_sort_key(elem: AlgebraElement, order: MonomialOrder):
    return tuple((order.key(p), c) for p, c in order.sorted_terms(elem))


def buchberger_truncated(
    presentation: QuiverPresentation, order: MonomialOrder | None = None, D: int = 8
) -> GroebnerBasis:
    """Complete the relation ideal up to degree D.

    Overlaps are processed by total degree, then by leading word, so the
    resulting element list is reproducible.  Every S-overlap of degree <= D
    reduces to zero against the result.
    """
    presentation.validated()
    if order is None:
        order = MonomialOrder(presentation.quiver)
    if presentation.relations and D < presentation.max_relation_degree:
        raise InputError(
            f"truncation degree {D} below maximal relation degree "
            f"{presentation.max_relation_degree}"
        )

    basis: list[AlgebraElement] = []

    def current_gb() -> GroebnerBasis:
        return GroebnerBasis(presentation, order, basis, D)

    # pending polynomials bucketed by degree
    buckets: dict[int, list[AlgebraElement]] = {}

    def push(elem: AlgebraElement):
        if elem.is_zero():
            return
        deg = elem.degree
        if deg is None or deg > D:
            return
        buckets.setdefault(deg, []).append(elem)

    for rel in presentation.relations:
        push(rel)

    def overlaps(g1: AlgebraElement, lead1: Path, g2: AlgebraElement, lead2: Path):
        """S-polynomials of proper overlaps suffix(lead1) == prefix(lead2)."""
        w1, w2 = lead1.arrows, lead2.arrows
        out = []
        for o in range(1, min(len(w1), len(w2))):
            if w1[len(w1) - o :] != w2[:o]:
                continue
            total = len(w1) + len(w2) - o
            if total > D:
                continue
            # overlap word u*c*v with lead1 = u*c, lead2 = c*v
            v = Path(lead1.target, lead2.target, w2[o:])
            u = Path(lead1.source, lead2.source, w1[: len(w1) - o])
            s = g1.right_mul(v) - g2.left_mul(u)
            out.append(s)
        return out

    degree = 0
    while buckets:
        degree = min(buckets)
        batch = buckets.pop(degree)
        batch.sort(key=lambda e: _element_sort_key(e, order))
        for elem in batch:
            gb = current_gb()
            reduced = _reduce(elem, gb)
            if reduced.is_zero():
                continue
            new = _monic(reduced, order)
            new_lead = order.leading_path(new)
            # retire basis elements whose lead contains the new lead
            probe = GroebnerBasis(presentation, order, [new], D)
            retired = [g for g in basis if probe.reducer_at(order.leading_path(g).arrows)]
            if retired:
                basis[:] = [g for g in basis if g not in retired]
                for g in retired:
                    push(g)
            for g in basis:
                g_lead = order.leading_path(g)
                for s in overlaps(new, new_lead, g, g_lead):
                    push(s)
                for s in overlaps(g, g_lead, new, new_lead):
                    push(s)
            for s in overlaps(new, new_lead, new, new_lead):
                push(s)
            basis.append(new)

    # canonical form: tail-reduce every element against the rest
    final = []
    for g in basis:
        others = GroebnerBasis(presentation, order, [h for h in basis if h is not g], D)
        final.append(_monic(_reduce(g, others), order))
    final.sort(key=lambda e: _element_sort_key(e, order))
    gb = GroebnerBasis(presentation, order, final, D)
    return gb


class GradedAlgebra:
    """Degreewise view of a graded algebra with split semisimple degree 0.

    Concrete data: for each degree k <= max_degree and ordered vertex pair
    (u, v) an ordered basis label list, plus structure constants
    ``mul(k1, u, m, i, k2, v, j)`` giving the expansion of
    ``basis(k1,u,m)[i] * basis(k2,m,v)[j]`` in ``basis(k1+k2,u,v)``.
    Instances are immutable once built and shared freely.
    """

    char: int
    max_degree: int
    vertex_labels: tuple[str, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    def dim(self, k: int, u: int, v: int) -> int:
        raise NotImplementedError

    def basis_labels(self, k: int, u: int, v: int) -> list[str]:
        raise NotImplementedError

    def mul(self, k1, u, m, i, k2, v, j) -> list[tuple[int, int]]:
        raise NotImplementedError

    def total_dim(self, k: int) -> int:
        n = self.num_vertices
        return sum(self.dim(k, u, v) for u in range(n) for v in range(n))

    def global_index(self, k: int, u: int, v: int, i: int) -> int:
        """Index of basis(k,u,v)[i] in the degree-k basis flattened over
        vertex pairs in lexicographic (u, v) order."""
        n = self.num_vertices
        offset = 0
        for uu in range(n):
            for vv in range(n):
                if (uu, vv) == (u, v):
                    return offset + i
                offset += self.dim(k, uu, vv)
        raise InputError(f"vertex pair ({u},{v}) out of range")

    def from_global(self, k: int, gidx: int) -> tuple[int, int, int]:
        n = self.num_vertices
        offset = 0
        for u in range(n):
            for v in range(n):
                d = self.dim(k, u, v)
                if gidx < offset + d:
                    return u, v, gidx - offset
                offset += d
        raise InputError(f"global index {gidx} out of range in degree {k}")

    def to_tables(self) -> dict:
        """Materialize the structure-constant JSON document (see cli --schema)."""
        n = self.num_vertices
        # zero rows are kept: the largest key encodes the truncation bound
        dims = {
            str(k): [[self.dim(k, u, v) for v in range(n)] for u in range(n)]
            for k in range(self.max_degree + 1)
        }
        products = []
        max_k = self.max_degree
        for k1 in range(max_k + 1):
            for k2 in range(max_k + 1 - k1):
                for u in range(n):
                    for m in range(n):
                        for i in range(self.dim(k1, u, m)):
                            for v in range(n):
                                for j in range(self.dim(k2, m, v)):
                                    prod = self.mul(k1, u, m, i, k2, v, j)
                                    if prod:
                                        products.append(
                                            [
                                                k1,
                                                self.global_index(k1, u, m, i),
                                                k2,
                                                self.global_index(k2, m, v, j),
                                                [
                                                    [self.global_index(k1 + k2, u, v, c), coeff]
                                                    for c, coeff in prod
                                                ],
                                            ]
                                        )
        return {
            "char": self.char,
            "idempotents": list(self.vertex_labels),
            "dims": dims,
            "products": products,
        }


class GroebnerAlgebra(GradedAlgebra):
    """Graded algebra data computed lazily from a truncated Groebner basis."""

    def __init__(self, gb: GroebnerBasis, D: int):
        if D > gb.D:
            raise InputError(f"requested degree {D} exceeds Groebner truncation {gb.D}")
        self.gb = gb
        self.char = gb.char
        self.max_degree = D
        self.quiver = gb.quiver
        self.vertex_labels = gb.quiver.vertices
        n = len(self.vertex_labels)
        # words[k][(u, v)] = ordered list of normal Paths, ascending monomial order
        self.words: list[dict[tuple[int, int], list[Path]]] = []
        self._word_index: list[dict[tuple[int, ...], tuple[int, int, int]]] = []
        self.words.append({(v, v): [Path(v, v, ())] for v in range(n)})
        self._word_index.append({})  # degree 0 handled directly in index_of
        prev_flat = [Path(v, v, ()) for v in range(n)]
        for k in range(1, D + 1):
            level: dict[tuple[int, int], list[Path]] = {}
            for w in prev_flat:
                for a_idx, arrow in enumerate(gb.quiver.arrows):
                    if arrow.source != w.target:
                        continue
                    new = Path(w.source, arrow.target, w.arrows + (a_idx,))
                    if gb.is_normal(new.arrows):
                        level.setdefault((new.source, new.target), []).append(new)
            index: dict = {}
            for pair in sorted(level):
                level[pair].sort(key=gb.order.key)
                for i, w in enumerate(level[pair]):
                    index[w.arrows] = (pair[0], pair[1], i)
            self.words.append(level)
            self._word_index.append(index)
            prev_flat = [w for pair in sorted(level) for w in level[pair]]
        self._mul_cache: dict = {}

    def dim(self, k, u, v):
        if k < 0 or k > self.max_degree:
            return 0
        return len(self.words[k].get((u, v), []))

    def basis_paths(self, k, u, v) -> list[Path]:
        if k < 0 or k > self.max_degree:
            return []
        return self.words[k].get((u, v), [])

    def basis_labels(self, k, u, v):
        return [self.quiver.path_label(w) for w in self.basis_paths(k, u, v)]

    def index_of(self, word: Path) -> tuple[int, int, int]:
        """(u, v, index) of a normal word within its degree."""
        k = len(word.arrows)
        if k == 0:
            return (word.source, word.source, 0)
        got = self._word_index[k].get(word.arrows)
        if got is None:
            raise InputError("not a normal word")
        return got

    def express(self, elem: AlgebraElement) -> list[tuple[int, int, int, int, int]]:
        """Reduce and express as [(degree, u, v, index, coeff)]."""
        nf = normal_form(elem, self.gb)
        out = []
        for path, c in nf.terms.items():
            u, v, i = self.index_of(path)
            out.append((len(path.arrows), u, v, i, c))
        return out

    def mul(self, k1, u, m, i, k2, v, j):
        if k1 + k2 > self.max_degree:
            raise InputError(f"product degree {k1 + k2} exceeds bound {self.max_degree}")
        key = (k1, u, m, i, k2, v, j)
        got = self._mul_cache.get(key)
        if got is not None:
            return got
        a = self.words[k1][(u, m)][i]
        b = self.words[k2][(m, v)][j]
        ab = compose(a, b)
        assert ab is not None
        nf = _reduce(AlgebraElement.from_path(ab, self.char), self.gb)
        out = []
        for path, c in nf.terms.items():
            uu, vv, idx = self.index_of(path)
            assert (uu, vv) == (u, v)
            out.append((idx, c))
        out.sort()
        self._mul_cache[key] = out
        return out


def graded_algebra_data(gb: GroebnerBasis, D: int | None = None) -> GroebnerAlgebra:
    """Bases of normal words per degree and vertex pair, with structure
    constants computed by concatenate-then-normal-form."""
    if D is None:
        D = gb.D
    return GroebnerAlgebra(gb, D)
