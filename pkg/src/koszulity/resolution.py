"""Minimal graded projective resolutions by degreewise kernel computation.

The engine resolves modules of the form V/Z for graded submodules Z <= V of
a free module F0; this covers the trivial module (V = F0 over the vertices,
Z = J.F0), finitely presented modules (V = F0, Z = im f), radical submodules
J.M (V = J.F0 + im f, Z = im f) and semisimple quotients M/JM.

At each homological stage the kernel of the previous differential is
computed slice by slice and block by block (slices never mix the target
vertex of the word part), and minimal generators are selected degreewise by
ascending internal degree: kernel vectors independent of the span of
already-chosen generators times the algebra become new generators, with
deterministic echelon pivoting.  Differentials therefore land in J times the
target module, which is the minimality certificate.

Truncation honesty: row n is certified complete if and only if row n-1 was
certified and every generator of P_n has degree <= D - 1 (so the next kernel
is visible in full below the bound).  Uncertified rows are reported but must
be excluded from classification.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError, Refusal
from .groebner import GradedAlgebra
from .linalg import Matrix, column_span_pivots
from .modules import (
    FreeModule,
    ModuleMap,
    ModulePresentation,
    SliceCache,
    map_slice_block,
)


@dataclass
class _Chosen:
    vertex: int
    degree: int
    origin: int | None
    rep: list  # [(slice item, coeff)] over the previous module's slice block


class Resolution:
    """Chain P_N -> ... -> P_1 -> P_0 covering the resolved module.

    `diffs[n]` is d_n: P_n -> P_{n-1} (diffs[0] is None); `cover` maps P_0
    into the ambient free module of the resolved target.  `origins[n][g]`
    tracks which generator of P_0 the sub-resolution of generator g belongs
    to (None when the presentation mixes them), which for the trivial module
    is the vertex of the corresponding simple.
    """

    def __init__(self, alg, ambient, cover, modules, diffs, origins, N, D, certified,
                 termination_degree, label):
        self.alg = alg
        self.ambient = ambient
        self.cover = cover
        self.modules: list[FreeModule] = modules
        self.diffs: list[ModuleMap | None] = diffs
        self.origins: list[list] = origins
        self.N = N
        self.D = D
        self.certified: list[bool] = certified
        self.termination_degree = termination_degree
        self.label = label
        self.cache = SliceCache(alg)
        self._block_cache: dict = {}
        self._ext_algebra = None

    def module(self, n: int) -> FreeModule:
        return self.modules[n]

    def certified_to(self) -> int:
        n = -1
        for flag in self.certified:
            if not flag:
                break
            n += 1
        return n

    def block_matrix(self, n: int, k: int, u: int):
        """Cached scalar matrix of d_n on the degree-k source-vertex-u block."""
        key = (n, k, u)
        got = self._block_cache.get(key)
        if got is None:
            got = map_slice_block(self.diffs[n], self.alg, k, u, self.cache)
            self._block_cache[key] = got
        return got

    def __repr__(self):
        ranks = ",".join(str(m.rank) for m in self.modules)
        return f"Resolution({self.label}; ranks {ranks}; certified_to={self.certified_to()})"


class _Engine:
    def __init__(self, alg: GradedAlgebra, ambient: FreeModule, candidate_kind: str,
                 z_kind: str, f_map: ModuleMap | None, N: int, D: int, label: str,
                 trivial_fast: bool = False):
        self.alg = alg
        self.ambient = ambient
        self.candidate_kind = candidate_kind  # "units" | "radical"
        self.z_kind = z_kind  # "imf" | "jf0" | "both"
        self.f_map = f_map
        self.N = N
        self.D = D
        self.label = label
        self.trivial_fast = trivial_fast
        self.cache = SliceCache(alg)
        self.char = alg.char

    # -- column builders ---------------------------------------------------

    def _block_positions(self, free: FreeModule, k: int, u: int):
        slice_b = self.cache.slice(free, k)
        items = slice_b.block_items(u)
        return items, {item: pos for pos, item in enumerate(items)}

    def _z_columns(self, k: int, u: int):
        """Spanning columns of Z_k in the ambient block (k, u)."""
        items, _ = self._block_positions(self.ambient, k, u)
        size = len(items)
        cols = []
        if self.z_kind in ("jf0", "both"):
            for pos, (i, _, _widx) in enumerate(items):
                if k - self.ambient.degree(i) >= 1:
                    col = [0] * size
                    col[pos] = 1
                    cols.append(col)
        if self.z_kind in ("imf", "both") and self.f_map is not None:
            mat, _, _ = map_slice_block(self.f_map, self.alg, k, u, self.cache)
            for j in range(mat.cols):
                col = mat.column(j)
                if any(col):
                    cols.append(col)
        return cols

    def _product_columns(self, chosen: list[_Chosen], prev_free: FreeModule, k: int, u: int,
                         positions):
        """Images of (radical algebra slice) x (chosen generators) in block (k, u)."""
        alg = self.alg
        cols = []
        for c in chosen:
            wdeg = k - c.degree
            if wdeg < 1:
                continue
            n_words = alg.dim(wdeg, c.vertex, u)
            for widx in range(n_words):
                col = [0] * len(positions)
                nonzero = False
                for (i2, _, widx2), coeff in c.rep:
                    wdeg2 = c.degree - prev_free.degree(i2)
                    for y_idx, c2 in alg.mul(wdeg2, prev_free.vertex(i2), c.vertex,
                                             widx2, wdeg, u, widx):
                        pos = positions[(i2, u, y_idx)]
                        val = (col[pos] + coeff * c2) % self.char
                        col[pos] = val
                        nonzero = nonzero or val
                if nonzero:
                    cols.append(col)
        return cols

    # -- cover step ----------------------------------------------------------

    def _cover(self, prev_free: FreeModule, k_lo: int, kernel_provider, prev_origins):
        chosen: list[_Chosen] = []
        for k in range(k_lo, self.D + 1):
            slice_b = self.cache.slice(prev_free, k)
            for u in sorted(slice_b.blocks):
                items, positions = self._block_positions(prev_free, k, u)
                k_cols = kernel_provider(k, u)
                if not k_cols:
                    continue
                modulus = self._product_columns(chosen, prev_free, k, u, positions)
                pivots = column_span_pivots(modulus + k_cols, len(items), self.char)
                nmod = len(modulus)
                for pidx in pivots:
                    if pidx < nmod:
                        continue
                    vec = k_cols[pidx - nmod]
                    rep = [(items[t], c) for t, c in enumerate(vec) if c]
                    origin = None
                    if prev_origins is not None:
                        touched = {prev_origins[i2] for (i2, _, _), _ in rep}
                        if len(touched) == 1:
                            origin = touched.pop()
                    chosen.append(_Chosen(u, k, origin, rep))
        return chosen

    @staticmethod
    def _diff_from_chosen(chosen: list[_Chosen], prev_free: FreeModule) -> tuple[FreeModule, ModuleMap]:
        new_free = FreeModule(tuple((c.vertex, c.degree) for c in chosen))
        entries: dict = {}
        for j, c in enumerate(chosen):
            per_target: dict = {}
            for (i2, _, widx2), coeff in c.rep:
                per_target.setdefault(i2, []).append((widx2, coeff))
            for i2, words in per_target.items():
                entries[(i2, j)] = words
        return new_free, ModuleMap(new_free, prev_free, entries)

    # -- stages ----------------------------------------------------------------

    def _candidate_columns(self, k, u):
        """Coordinate candidates for stage-0 generator selection."""
        items, _ = self._block_positions(self.ambient, k, u)
        cols = []
        for pos, (i, _, _widx) in enumerate(items):
            wdeg = k - self.ambient.degree(i)
            take = (wdeg == 0) if self.candidate_kind == "units" else (wdeg >= 1)
            if take:
                col = [0] * len(items)
                col[pos] = 1
                cols.append(col)
        return cols

    def _stage0(self):
        # candidates play the role of "kernel vectors" in the cover step,
        # with the Z columns joining the modulus.
        chosen: list[_Chosen] = []
        for k in range(0, self.D + 1):
            slice_b = self.cache.slice(self.ambient, k)
            for u in sorted(slice_b.blocks):
                items, positions = self._block_positions(self.ambient, k, u)
                cand = self._candidate_columns(k, u)
                if not cand:
                    continue
                modulus = self._z_columns(k, u)
                modulus += self._product_columns(chosen, self.ambient, k, u, positions)
                pivots = column_span_pivots(modulus + cand, len(items), self.char)
                nmod = len(modulus)
                for pidx in pivots:
                    if pidx < nmod:
                        continue
                    vec = cand[pidx - nmod]
                    rep = [(items[t], c) for t, c in enumerate(vec) if c]
                    origin = rep[0][0][0] if len({i for (i, _, _), _ in rep}) == 1 else None
                    chosen.append(_Chosen(u, k, origin, rep))
        return chosen

    def _stage1_kernel(self, cover_map: ModuleMap, p0: FreeModule):
        if self.trivial_fast:
            def provider(k, u):
                if k == 0:
                    return []
                items, _ = self._block_positions(p0, k, u)
                cols = []
                for pos in range(len(items)):
                    col = [0] * len(items)
                    col[pos] = 1
                    cols.append(col)
                return cols

            return provider

        def provider(k, u):
            e_mat, _, _ = map_slice_block(cover_map, self.alg, k, u, self.cache)
            if e_mat.cols == 0:
                return []
            z_cols = self._z_columns(k, u)
            if z_cols:
                stacked = e_mat.hstack(Matrix.from_columns(z_cols, e_mat.rows, self.char))
            else:
                stacked = e_mat
            xs = []
            for vec in stacked.kernel_basis():
                x = vec[: e_mat.cols]
                if any(x):
                    xs.append(x)
            if not xs:
                return []
            keep = column_span_pivots(xs, e_mat.cols, self.char)
            return [xs[i] for i in keep]

        return provider

    def run(self) -> Resolution:
        if max((d for _, d in self.ambient.generators), default=0) > self.D:
            raise InputError("ambient generator degree exceeds internal bound D")

        chosen0 = self._stage0()
        p0, cover = self._diff_from_chosen(chosen0, self.ambient)
        # cover maps P_0 into the ambient module, not a previous stage
        modules = [p0]
        diffs: list[ModuleMap | None] = [None]
        origins = [[c.origin for c in chosen0]]

        def cert_rule(free: FreeModule, prev_ok: bool) -> bool:
            top = max((d for _, d in free.generators), default=None)
            return prev_ok and (top is None or top <= self.D - 1)

        certified = [cert_rule(p0, True)]
        termination = 0 if p0.rank == 0 else None

        n = 1
        while n <= self.N:
            prev = modules[n - 1]
            if prev.rank == 0:
                new_free = FreeModule(())
                d_n = ModuleMap(new_free, prev, {})
                modules.append(new_free)
                diffs.append(d_n)
                origins.append([])
                certified.append(certified[-1])
                n += 1
                continue
            if n == 1:
                provider = self._stage1_kernel(cover, p0)
            else:
                d_prev = diffs[n - 1]

                def provider(k, u, d_prev=d_prev):
                    mat, _, _ = map_slice_block(d_prev, self.alg, k, u, self.cache)
                    if mat.cols == 0:
                        return []
                    return mat.kernel_basis()

            k_lo = (prev.min_degree() or 0) + 1
            chosen = self._cover(prev, k_lo, provider, origins[n - 1])
            new_free, d_n = self._diff_from_chosen(chosen, prev)
            modules.append(new_free)
            diffs.append(d_n)
            origins.append([c.origin for c in chosen])
            certified.append(cert_rule(new_free, certified[-1]))
            if new_free.rank == 0 and termination is None:
                termination = n
            n += 1

        if termination is not None and not certified[min(termination, len(certified) - 1)]:
            termination = None
        return Resolution(self.alg, self.ambient, cover, modules, diffs, origins,
                          self.N, self.D, certified, termination, self.label)


def _vertex_module(alg: GradedAlgebra) -> FreeModule:
    return FreeModule(tuple((v, 0) for v in range(alg.num_vertices)))


def minimal_resolution(alg: GradedAlgebra, module: ModulePresentation | None = None,
                       N: int = 8, D: int | None = None) -> Resolution:
    """Minimal graded projective resolution of the trivial module (module=None)
    or of a finitely presented module, to homological bound N and internal
    bound D."""
    if N < 0:
        raise InputError("homological bound N must be >= 0")
    if D is None:
        D = alg.max_degree
    if D > alg.max_degree:
        raise InputError(f"internal bound {D} exceeds algebra data bound {alg.max_degree}")
    gb = getattr(alg, "gb", None)
    if gb is not None and gb.presentation.relations and D < gb.presentation.max_relation_degree:
        # below the relation degrees the truncated kernels would silently
        # certify rows that are wrong, not merely incomplete
        raise InputError(
            f"internal bound {D} is below the maximal relation degree "
            f"{gb.presentation.max_relation_degree}"
        )
    if module is None:
        engine = _Engine(alg, _vertex_module(alg), "units", "jf0", None, N, D,
                         "trivial module", trivial_fast=True)
    else:
        engine = _Engine(alg, module.ambient, "units", "imf", module.relations, N, D,
                         "presented module")
    return engine.run()


def simple_resolution(alg: GradedAlgebra, v, N: int = 8, D: int | None = None) -> Resolution:
    """Resolution of the simple module at one vertex (diagnostic view)."""
    if D is None:
        D = alg.max_degree
    if isinstance(v, str):
        v = list(alg.vertex_labels).index(v)
    engine = _Engine(alg, FreeModule(((v, 0),)), "units", "jf0", None, N, D,
                     f"simple at {alg.vertex_labels[v]}", trivial_fast=True)
    return engine.run()


def free_module_presentation(alg: GradedAlgebra) -> ModulePresentation:
    """A itself, presented with no relations (ambient = one generator per vertex)."""
    ambient = _vertex_module(alg)
    return ModulePresentation(ModuleMap(FreeModule(()), ambient, {}))


def trivial_module_presentation(alg: GradedAlgebra) -> ModulePresentation:
    """A_0 presented as the cokernel of the radical inclusion (one relation
    per arrow-like radical generator)."""
    return top_quotient(alg, free_module_presentation(alg))


def radical_submodule(alg: GradedAlgebra, module: ModulePresentation | None = None,
                      D: int | None = None) -> ModulePresentation:
    """Presentation of J.M (radical times the presented module).

    module=None means the trivial module, whose radical is zero.
    """
    if D is None:
        D = alg.max_degree
    if module is None:
        engine = _Engine(alg, _vertex_module(alg), "radical", "jf0", None, 1, D, "radical")
    else:
        engine = _Engine(alg, module.ambient, "radical", "imf", module.relations, 1, D,
                         "radical")
    res = engine.run()
    return ModulePresentation(res.diffs[1])


def top_quotient(alg: GradedAlgebra, module: ModulePresentation | None = None,
                 D: int | None = None) -> ModulePresentation:
    """Presentation of M/JM (the semisimple top of the presented module)."""
    if D is None:
        D = alg.max_degree
    if module is None:
        engine = _Engine(alg, _vertex_module(alg), "units", "jf0", None, 1, D, "top",
                         trivial_fast=True)
    else:
        engine = _Engine(alg, module.ambient, "units", "both", module.relations, 1, D, "top")
    res = engine.run()
    return ModulePresentation(res.diffs[1])


@dataclass
class BettiTable:
    """Bigraded generator counts of a minimal resolution.

    entries[(n, j, v)] counts degree-j generators of P_n at vertex v;
    pair_entries[(n, j)][(v, o)] refines by (vertex, origin vertex) when the
    origin bookkeeping is available (trivial-module resolutions).
    """

    entries: dict
    certified: tuple
    N: int
    D: int
    vertex_labels: tuple
    termination_degree: int | None = None
    pair_entries: dict | None = None
    label: str = ""

    def certified_to(self) -> int:
        n = -1
        for flag in self.certified:
            if not flag:
                break
            n += 1
        return n

    def row(self, n: int) -> dict:
        out: dict = {}
        for (nn, j, v), c in self.entries.items():
            if nn == n:
                out[(j, v)] = out.get((j, v), 0) + c
        return out

    def row_degrees(self, n: int) -> list[int]:
        return sorted({j for (nn, j, _v) in self.entries if nn == n})

    def row_total(self, n: int) -> int:
        return sum(c for (nn, _j, _v), c in self.entries.items() if nn == n)

    def degree_sequence(self) -> list:
        """Per row: the single generator degree, None for mixed, absent rows
        skipped at the tail."""
        seq = []
        for n in range(self.N + 1):
            degs = self.row_degrees(n)
            if not degs:
                seq.append(None)
            elif len(degs) == 1:
                seq.append(degs[0])
            else:
                seq.append("mixed")
        return seq

    def json_dict(self) -> dict:
        rows = []
        for n in range(self.N + 1):
            gens = []
            row = self.row(n)
            for (j, v) in sorted(row, key=lambda t: (t[0], t[1])):
                gens.append(
                    {"vertex": self.vertex_labels[v], "degree": j, "count": row[(j, v)]}
                )
            rows.append({"n": n, "certified": bool(self.certified[n]), "generators": gens})
        return {"rows": rows}


def betti_table(res: Resolution) -> BettiTable:
    entries: dict = {}
    pair_entries: dict = {}
    pairs_ok = all(o is not None for row in res.origins for o in row)
    for n, free in enumerate(res.modules):
        for g, (v, j) in enumerate(free.generators):
            entries[(n, j, v)] = entries.get((n, j, v), 0) + 1
            if pairs_ok:
                o = res.origins[n][g]
                d = pair_entries.setdefault((n, j), {})
                d[(v, o)] = d.get((v, o), 0) + 1
    return BettiTable(
        entries=entries,
        certified=tuple(res.certified),
        N=res.N,
        D=res.D,
        vertex_labels=res.alg.vertex_labels,
        termination_degree=res.termination_degree,
        pair_entries=pair_entries if pairs_ok else None,
        label=res.label,
    )


def syzygy(res: Resolution, n: int) -> ModulePresentation:
    """Presentation of the n-th syzygy: the image of d_n, i.e. the kernel at
    stage n-1, presented as coker(d_{n+1}: P_{n+1} -> P_n).  n = 0 returns a
    presentation of the resolved module itself."""
    if n < 0:
        raise InputError("syzygy index must be >= 0")
    if n + 1 >= len(res.modules) or n + 1 > res.N:
        raise Refusal(f"syzygy {n} needs homological row {n + 1}; bound is {res.N}")
    if res.certified_to() < n + 1:
        raise Refusal(
            f"syzygy {n} needs certified rows through {n + 1}; "
            f"certified only to {res.certified_to()}"
        )
    return ModulePresentation(res.diffs[n + 1])
