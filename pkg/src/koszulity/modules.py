"""Graded free modules, degreewise module maps, and table-ingested algebras.

Free modules are direct sums of shifted vertex projectives e_v.A; the
degree-k slice of e_v.A(-s) has the normal words of degree k - s starting at
v as basis, and the algebra acts by appending on the right.  Module maps are
stored as matrices of homogeneous algebra elements (expressed in basis-word
coordinates) and realized degreewise as scalar matrices between slice bases.

Slice bases split by the target vertex of the word part, and every map
matrix is block diagonal with respect to that splitting; the resolution
engine works block by block.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .groebner import GradedAlgebra
from .linalg import Matrix


class TableAlgebra(GradedAlgebra):
    """Graded algebra ingested from explicit structure-constant tables."""

    def __init__(self, char, idempotents, dims, products, max_degree):
        self.char = char
        self.vertex_labels = tuple(str(x) for x in idempotents)
        self.max_degree = max_degree
        self._dims = dims  # dict k -> n x n list
        self._products = products  # dict (k1, g1, k2, g2) -> list[(g3, coeff)]
        n = self.num_vertices
        self._labels = {}
        for k in range(max_degree + 1):
            for u in range(n):
                for v in range(n):
                    d = self.dim(k, u, v)
                    self._labels[(k, u, v)] = [f"b{k}_{u}_{v}_{i}" for i in range(d)]

    def dim(self, k, u, v):
        mat = self._dims.get(k)
        if mat is None:
            return 0
        return mat[u][v]

    def basis_labels(self, k, u, v):
        return self._labels.get((k, u, v), [])

    def mul(self, k1, u, m, i, k2, v, j):
        if k1 + k2 > self.max_degree:
            raise InputError(f"product degree {k1 + k2} exceeds bound {self.max_degree}")
        g1 = self.global_index(k1, u, m, i)
        g2 = self.global_index(k2, m, v, j)
        prod = self._products.get((k1, g1, k2, g2), [])
        out = []
        for g3, c in prod:
            uu, vv, idx = self.from_global(k1 + k2, g3)
            if (uu, vv) != (u, v):
                raise InputError(
                    f"product of ({k1},{g1}) and ({k2},{g2}) lands in vertex pair "
                    f"({uu},{vv}), expected ({u},{v})"
                )
            out.append((idx, c))
        return out


def ingest_structure_constants(raw: dict) -> TableAlgebra:
    """Validate raw tables and return an algebra usable by the resolution
    engine exactly like a Groebner-derived one.

    Checks: dimension consistency, degree-0 part = one idempotent per vertex,
    idempotents act as units, associativity on all triples with total degree
    within range.  Rejections name the offending product or triple.
    """
    try:
        char = int(raw["char"])
        idempotents = list(raw["idempotents"])
        dims_in = raw["dims"]
        products_in = raw["products"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed structure-constant document: {exc}") from None
    n = len(idempotents)
    if n == 0:
        raise InputError("no idempotents declared")
    dims = {}
    for key, mat in dims_in.items():
        k = int(key)
        if len(mat) != n or any(len(row) != n for row in mat):
            raise InputError(f"dims[{key}] is not {n}x{n}")
        if any(x < 0 for row in mat for x in row):
            raise InputError(f"dims[{key}] has negative entries")
        dims[k] = [list(map(int, row)) for row in mat]
    if 0 not in dims:
        raise InputError("missing degree-0 dims")
    for u in range(n):
        for v in range(n):
            want = 1 if u == v else 0
            if dims[0][u][v] != want:
                raise InputError(
                    "degree-0 part must be one idempotent per vertex; "
                    f"dims[0][{u}][{v}] = {dims[0][u][v]}"
                )
    max_degree = max(dims)

    def degree_total(k):
        mat = dims.get(k)
        return sum(sum(row) for row in mat) if mat else 0

    products = {}
    for entry in products_in:
        k1, g1, k2, g2, expansion = entry
        if k1 + k2 > max_degree:
            raise InputError(f"product ({k1},{g1})*({k2},{g2}) exceeds degree bound")
        for pair in (("left", k1, g1), ("right", k2, g2)):
            side, k, g = pair
            if not 0 <= g < degree_total(k):
                raise InputError(f"{side} factor index {g} out of range in degree {k}")
        seen = set()
        for g3, c in expansion:
            if not 0 <= g3 < degree_total(k1 + k2):
                raise InputError(
                    f"product ({k1},{g1})*({k2},{g2}) hits index {g3} out of range"
                )
            if g3 in seen:
                raise InputError(f"product ({k1},{g1})*({k2},{g2}) repeats index {g3}")
            seen.add(g3)
        cleaned = sorted((g3, c % char) for g3, c in expansion if c % char)
        if cleaned:
            products[(k1, g1, k2, g2)] = cleaned

    alg = TableAlgebra(char, idempotents, dims, products, max_degree)

    # vertex-pair compatibility of every declared product
    for (k1, g1, k2, g2), expansion in products.items():
        u1, v1, _ = alg.from_global(k1, g1)
        u2, v2, _ = alg.from_global(k2, g2)
        if v1 != u2:
            raise InputError(
                f"nonzero product ({k1},{g1})*({k2},{g2}) of non-composable "
                f"vertex pairs ({u1},{v1}) and ({u2},{v2})"
            )
        for g3, _ in expansion:
            u3, v3, _ = alg.from_global(k1 + k2, g3)
            if (u3, v3) != (u1, v2):
                raise InputError(
                    f"product ({k1},{g1})*({k2},{g2}) lands in pair ({u3},{v3}), "
                    f"expected ({u1},{v2})"
                )

    def mul_global(k1, g1, k2, g2):
        if k1 == 0:
            u, v, _ = alg.from_global(k1, g1)
            uu, vv, _ = alg.from_global(k2, g2)
            return [(g2, 1)] if v == uu else []
        if k2 == 0:
            u, v, _ = alg.from_global(k2, g2)
            uu, vv, _ = alg.from_global(k1, g1)
            return [(g1, 1)] if vv == u else []
        return products.get((k1, g1, k2, g2), [])

    # idempotents must act as units on declared products
    for k in range(max_degree + 1):
        for g in range(degree_total(k)):
            u, v, _ = alg.from_global(k, g)
            eu = alg.global_index(0, u, u, 0)
            ev = alg.global_index(0, v, v, 0)
            left = products.get((0, eu, k, g))
            if k > 0 and left is not None and left != [(g, 1)]:
                raise InputError(f"idempotent {u} does not act as left unit on ({k},{g})")
            right = products.get((k, g, 0, ev))
            if k > 0 and right is not None and right != [(g, 1)]:
                raise InputError(f"idempotent {v} does not act as right unit on ({k},{g})")

    # associativity on all in-range triples of positive degrees
    for k1 in range(1, max_degree + 1):
        if not degree_total(k1):
            continue
        for k2 in range(1, max_degree + 1 - k1):
            if not degree_total(k2):
                continue
            for k3 in range(1, max_degree + 1 - k1 - k2):
                if not degree_total(k3):
                    continue
                for g1 in range(degree_total(k1)):
                    for g2 in range(degree_total(k2)):
                        ab = mul_global(k1, g1, k2, g2)
                        for g3 in range(degree_total(k3)):
                            left_terms: dict[int, int] = {}
                            for g_mid, c in ab:
                                for gg, cc in mul_global(k1 + k2, g_mid, k3, g3):
                                    left_terms[gg] = (left_terms.get(gg, 0) + c * cc) % char
                            right_terms: dict[int, int] = {}
                            for g_mid, c in mul_global(k2, g2, k3, g3):
                                for gg, cc in mul_global(k1, g1, k2 + k3, g_mid):
                                    right_terms[gg] = (right_terms.get(gg, 0) + c * cc) % char
                            left = sorted((g, c) for g, c in left_terms.items() if c)
                            right = sorted((g, c) for g, c in right_terms.items() if c)
                            if left != right:
                                raise InputError(
                                    "associativity fails on triple "
                                    f"(deg {k1} idx {g1}, deg {k2} idx {g2}, deg {k3} idx {g3})"
                                )
    return alg


@dataclass(frozen=True)
class FreeModule:
    """Graded free left module: one (vertex, internal degree) pair per
    generator, in declaration order."""

    generators: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for v, d in self.generators:
            if d < 0:
                raise InputError(f"generator degree {d} < 0")

    @property
    def rank(self) -> int:
        return len(self.generators)

    def vertex(self, i) -> int:
        return self.generators[i][0]

    def degree(self, i) -> int:
        return self.generators[i][1]

    def min_degree(self):
        return min((d for _, d in self.generators), default=None)


class SliceBasis:
    """Ordered basis of the degree-k component of a free module.

    Items are (generator index, target vertex u, word index) where the word
    runs over basis(k - deg(gen), vertex(gen), u).  Order: generators in
    declaration order, then target vertices ascending, then words in
    monomial order.  `blocks[u]` lists the flat positions whose word ends at
    vertex u; map matrices never mix blocks.
    """

    def __init__(self, free: FreeModule, alg: GradedAlgebra, k: int):
        self.free = free
        self.k = k
        items: list[tuple[int, int, int]] = []
        blocks: dict[int, list[int]] = {}
        for g, (v_g, d_g) in enumerate(free.generators):
            wdeg = k - d_g
            if wdeg < 0 or wdeg > alg.max_degree:
                continue
            for u in range(alg.num_vertices):
                for i in range(alg.dim(wdeg, v_g, u)):
                    blocks.setdefault(u, []).append(len(items))
                    items.append((g, u, i))
        self.items = items
        self.blocks = blocks
        self.position = {item: pos for pos, item in enumerate(items)}

    def __len__(self):
        return len(self.items)

    def block_items(self, u: int) -> list[tuple[int, int, int]]:
        return [self.items[pos] for pos in self.blocks.get(u, [])]


class ModuleMap:
    """Graded map between free modules, homogeneous of internal drop `shift`.

    entries[(i, j)] is the coefficient of target generator i in the image of
    source generator j: a combination of algebra basis words of degree
    deg(src_j) - deg(tgt_i) - shift from vertex(src_j) to vertex(tgt_i),
    stored as [(word index, coeff), ...].
    """

    def __init__(self, source: FreeModule, target: FreeModule, entries: dict, shift: int = 0):
        self.source = source
        self.target = target
        self.shift = shift
        self.entries = {
            key: sorted((w, c) for w, c in val) for key, val in entries.items() if val
        }
        self.by_col: dict = {}
        for (i, j), words in self.entries.items():
            self.by_col.setdefault(j, []).append((i, words))

    def entry_degree(self, i: int, j: int) -> int:
        return self.source.degree(j) - self.target.degree(i) - self.shift

    def is_zero(self) -> bool:
        return not self.entries

    def column(self, j: int) -> dict:
        return {i: words for (i, jj), words in self.entries.items() if jj == j}


def degree_slice(free: FreeModule, alg: GradedAlgebra, k: int) -> SliceBasis:
    if k > alg.max_degree:
        raise InputError(f"slice degree {k} exceeds algebra bound {alg.max_degree}")
    return SliceBasis(free, alg, k)


class SliceCache:
    """Per-engine cache of slice bases and block matrices."""

    def __init__(self, alg: GradedAlgebra):
        self.alg = alg
        self._slices: dict = {}

    def slice(self, free: FreeModule, k: int) -> SliceBasis:
        key = (free.generators, k)
        got = self._slices.get(key)
        if got is None:
            got = SliceBasis(free, self.alg, k)
            self._slices[key] = got
        return got


def _entry_times_word(alg, edeg, v_i, v_j, entry, wdeg, u, widx):
    """Expand entry * word(wdeg, v_j, u)[widx] in basis(edeg + wdeg, v_i, u),
    where the entry lives in basis(edeg, v_i, v_j)."""
    out: dict[int, int] = {}
    for e_idx, c in entry:
        for y_idx, c2 in alg.mul(edeg, v_i, v_j, e_idx, wdeg, u, widx):
            out[y_idx] = (out.get(y_idx, 0) + c * c2) % alg.char
    return out


def map_slice_block(
    f: ModuleMap, alg: GradedAlgebra, k: int, u: int, cache: SliceCache | None = None
) -> tuple[Matrix, SliceBasis, SliceBasis]:
    """Scalar matrix of f on the degree-k, target-vertex-u blocks."""
    cache = cache or SliceCache(alg)
    src = cache.slice(f.source, k)
    tgt = cache.slice(f.target, k - f.shift)
    src_items = src.block_items(u)
    tgt_positions = {item: pos for pos, item in enumerate(tgt.block_items(u))}
    mat = Matrix(len(tgt_positions), len(src_items), alg.char)
    for col, (j, uu, widx) in enumerate(src_items):
        v_j = f.source.vertex(j)
        wdeg = k - f.source.degree(j)
        for i, entry in f.by_col.get(j, ()):
            edeg = f.entry_degree(i, j)
            expanded = _entry_times_word(
                alg, edeg, f.target.vertex(i), v_j, entry, wdeg, uu, widx
            )
            for y_idx, c in expanded.items():
                if c:
                    row = tgt_positions[(i, uu, y_idx)]
                    mat[row, col] = c
    return mat, tgt, src


def map_slice(f: ModuleMap, alg: GradedAlgebra, k: int) -> Matrix:
    """Full scalar matrix of f between the degree-k slice bases (block
    diagonal over target vertices)."""
    cache = SliceCache(alg)
    src = cache.slice(f.source, k)
    tgt = cache.slice(f.target, k - f.shift)
    mat = Matrix(len(tgt), len(src), alg.char)
    for u in sorted(src.blocks):
        block, tgt_b, src_b = map_slice_block(f, alg, k, u, cache)
        src_pos = src.blocks.get(u, [])
        tgt_pos = tgt.blocks.get(u, [])
        for bj, col in enumerate(src_pos):
            for bi, row in enumerate(tgt_pos):
                val = block[bi, bj]
                if val:
                    mat[row, col] = val
    return mat


class ModulePresentation:
    """A finitely presented graded module coker(relations: F1 -> F0)."""

    def __init__(self, relations: ModuleMap):
        if relations.shift != 0:
            raise InputError("presentation maps must preserve internal degree")
        self.relations = relations

    @property
    def ambient(self) -> FreeModule:
        return self.relations.target

    @property
    def shift(self):
        """Minimal generator degree of the ambient free module."""
        return self.ambient.min_degree()

    def __repr__(self):
        return (
            f"ModulePresentation({self.relations.source.rank} relations on "
            f"{self.ambient.rank} generators)"
        )
