"""Finite pieces of height-zero level sets.

Vertices are element keys of a group oracle at height 0; an edge joins
``g`` and ``g d`` for every square diagonal ``d``; 2-cells are the
triangular slices of 3-cubes and prisms through vertex levels.  A symbol
``x/y`` denotes the diagonal ``x y^-1``.

Faces are oriented by their sorted vertex keys ``p < q < r`` as
``[p,q] + [q,r] - [p,r]``; edges by the direction of their label.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .complexes import CubeComplex
from .graphs import FlagComplex2, InputError
from .homology import Chain, Complex2
from .words import Word, free_reduce, inverse


def diag_name(x: str, y: str) -> str:
    return f"{x}/{y}"


class DiagonalAlphabet:
    """Named height-zero words.  ``edge_symbols`` are the square diagonals
    (these become level-set edges); other symbols are shorthands."""

    def __init__(self, symbols: Dict[str, Word], edge_symbols: Iterable[str] = ()):
        self.symbols = {k: tuple(v) for k, v in symbols.items()}
        self.edge_symbols = tuple(sorted(edge_symbols))
        for k, v in self.symbols.items():
            if sum(e for _, e in v) != 0:
                raise InputError(f"symbol {k} has nonzero height")

    def expand(self, w) -> Word:
        """Spell a word over symbols in the underlying generators."""
        out: list = []
        for g, e in w:
            d = self.symbols[g]
            out.extend(d if e == 1 else inverse(d))
        return free_reduce(out)

    def edge_path(self, w) -> Word:
        """Rewrite a word over symbols as a word over edge symbols."""
        out: list = []
        for g, e in w:
            if g in self.edge_symbols:
                out.append((g, e))
                continue
            path = self.paths.get(g) if hasattr(self, "paths") else None
            if path is None:
                raise InputError(f"symbol {g} has no edge path")
            out.extend(path if e == 1 else inverse(path))
        return tuple(out)

    def with_aliases(self, aliases: Dict[str, Word], paths: Dict[str, Word]) -> "DiagonalAlphabet":
        out = DiagonalAlphabet({**self.symbols, **aliases}, self.edge_symbols)
        out.paths = dict(getattr(self, "paths", {}), **paths)
        return out

    def __contains__(self, name):
        return name in self.symbols

    def to_json(self):
        from .words import format_word
        return {k: format_word(v) for k, v in sorted(self.symbols.items())}


def diagonal_generators(c: CubeComplex) -> DiagonalAlphabet:
    """One level generator per square of the complex."""
    syms = {}
    for sq in c.squares:
        d = sq.diagonal()
        syms[diag_name(d[0][0], d[1][0])] = d
    return DiagonalAlphabet(syms, syms)


def d_alphabet(slog, u="u", v="v", ambient: Optional[CubeComplex] = None) -> DiagonalAlphabet:
    """Square diagonals of ``ambient`` (default ``X_B x R_2``) plus the named
    letters ``x_i = g t^-1``, ``t1 = t u^-1``, ``t2 = t v^-1``, ``s1``, ``s2``.

    ``x_i`` is not a square diagonal; it is drawn as the edge path
    ``(g/u) (t/u)^-1``.
    """
    from .complexes import log_complex, product_with_wedge
    if ambient is None:
        ambient = product_with_wedge(log_complex(slog.gamma), 2, (u, v))
    base = diagonal_generators(ambient)
    t, s = slog.t, slog.s
    aliases = {"t1": ((t, 1), (u, -1)), "t2": ((t, 1), (v, -1)),
               "s1": ((s, 1), (u, -1)), "s2": ((s, 1), (v, -1))}
    paths = {"t1": ((diag_name(t, u), 1),), "t2": ((diag_name(t, v), 1),),
             "s1": ((diag_name(s, u), 1),), "s2": ((diag_name(s, v), 1),)}
    for x, g in slog.basis_of.items():
        aliases[x] = ((g, 1), (t, -1))
        paths[x] = ((diag_name(g, u), 1), (diag_name(t, u), -1))
    return base.with_aliases(aliases, paths)


def cell_corners(c: CubeComplex):
    """For every 3-cell: ``(cell id, {height: [corner words]})`` with the
    corners at heights 1 and 2 (the ones whose slices are triangles)."""
    out = []
    for cube in c.cubes3:
        x, y, z = cube
        out.append((f"K:{','.join(cube)}", {
            1: [((x, 1),), ((y, 1),), ((z, 1),)],
            2: [((x, 1), (y, 1)), ((x, 1), (z, 1)), ((y, 1), (z, 1))]}))
    for sq, w in c.prisms:
        i, t, l = sq.gens
        out.append((f"P:{','.join(sq.gens)}|{w}", {
            1: [((i, 1),), ((l, 1),), ((w, 1),)],
            2: [((i, 1), (l, 1)), ((i, 1), (w, 1)), ((l, 1), (w, 1))]}))
    return out


class LevelComplex(Complex2):
    """A ``Complex2`` whose vertices are element keys of ``oracle``."""

    def __init__(self, oracle, alphabet: DiagonalAlphabet, cube: Optional[CubeComplex] = None,
                 name: str = "level"):
        self._nbr: Dict = {}
        super().__init__(name)
        self.oracle = oracle
        self.alphabet = alphabet
        self.cube = cube
        self.tags: Dict = {}
        self._sides = None
        self._sym_of: Dict = {}
        for sym in alphabet.edge_symbols:
            self._sym_of[free_reduce(alphabet.symbols[sym])] = sym

    def mul(self, key, w):
        return self.oracle.mul(key, w)

    def add_edge(self, tail, head, label="", key=None) -> int:
        i = super().add_edge(tail, head, label, key)
        self._nbr.setdefault((tail, label, 1), head)
        self._nbr.setdefault((head, label, -1), tail)
        return i

    def neighbour(self, key, sym, e=1):
        """Endpoint of the existing edge from ``key`` along ``sym^e``, if any."""
        return self._nbr.get((key, sym, e))

    def step(self, key, sym, e=1):
        d = self.alphabet.symbols[sym]
        return self.oracle.mul(key, d if e == 1 else inverse(d))

    def ensure_edge(self, g, sym, e=1):
        """Add (if needed) the edge from ``g`` along ``sym^e``; return
        ``(edge index, sign, endpoint)``."""
        h = self.step(g, sym, e)
        tail, head = (g, h) if e == 1 else (h, g)
        idx = self.add_edge(tail, head, sym, key=frozenset((tail, head)))
        t_idx, _, _ = self.edges[idx]
        sign = 1 if self.vertices[t_idx] == g else -1
        return idx, sign, h

    def edge_between(self, a, b) -> Optional[Tuple[int, int]]:
        idx = self.edge_index(frozenset((a, b)))
        if idx is None:
            return None
        t, _, _ = self.edges[idx]
        return idx, (1 if self.vertices[t] == a else -1)

    def symbol_between(self, a, b) -> Optional[Tuple[str, int]]:
        """Edge symbol ``s`` and sign with ``a * s^sign = b`` if any."""
        diff = self.oracle.to_word(self.oracle.mul(self.oracle.element(inverse(self.oracle.to_word(a))),
                                                   self.oracle.to_word(b)))
        diff = free_reduce(diff)
        if diff in self._sym_of:
            return self._sym_of[diff], 1
        if inverse(diff) in self._sym_of:
            return self._sym_of[inverse(diff)], -1
        for sym in self.alphabet.edge_symbols:
            for e in (1, -1):
                if self.step(a, sym, e) == b:
                    return sym, e
        return None

    def add_triangle(self, verts, lazy_edges=False) -> Optional[int]:
        vs = sorted(verts, key=_vkey)
        key = frozenset(vs)
        if self.has_face(key):
            return self.face_index(key)
        p, q, r = vs
        bd = []
        for (a, b), s in (((p, q), 1), ((q, r), 1), ((p, r), -1)):
            eb = self.edge_between(a, b)
            if eb is None:
                if not lazy_edges:
                    return None
                sym = self.symbol_between(a, b)
                if sym is None:
                    raise InputError("triangle side is not a diagonal")
                idx, sign, _ = self.ensure_edge(a, *sym)
                eb = (idx, sign)
            bd.append((eb[0], s * eb[1]))
        return self.add_face(bd, key)

    def walk(self, start, w, lazy=True) -> Chain:
        """1-chain of the edge path from ``start`` reading ``w`` (edge
        symbols or named symbols with edge paths)."""
        w = self.alphabet.edge_path(w)
        coeffs: Dict[int, int] = {}
        cur = start
        for sym, e in w:
            if lazy:
                idx, sign, cur = self.ensure_edge(cur, sym, e)
            else:
                nxt = self.step(cur, sym, e)
                eb = self.edge_between(cur, nxt)
                if eb is None:
                    raise KeyError("path leaves the complex")
                idx, sign = eb
                cur = nxt
            coeffs[idx] = coeffs.get(idx, 0) + sign
        return Chain(self, 1, coeffs)

    def close_triangles(self, vertices=None, lazy=False) -> int:
        """Add every 3-cell slice with a corner at one of ``vertices``
        (default: all) whose three edges exist (or, with ``lazy``, all of
        them).  Returns the number of new faces."""
        if self.cube is None:
            return 0
        before = len(self.faces)
        verts = list(self.vertices) if vertices is None else list(vertices)
        for v in verts:
            for c, cs, sides in self._corner_sides():
                if not lazy and sides is not None:
                    # follow existing edges: no group arithmetic off the level
                    tri = [v] + [self.neighbour(v, sym, e) for sym, e in sides]
                    if None not in tri:
                        self.add_triangle(tri)
                    continue
                base = self.oracle.mul(v, inverse(c))
                tri = [self.mul(base, c2) for c2 in cs]
                if not lazy and any(self.vertex_index(x) is None for x in tri):
                    continue
                self.add_triangle(tri, lazy_edges=lazy)
        return len(self.faces) - before

    def _corner_sides(self):
        """``(corner c, corners, sides)`` for every triangular slice, where
        ``sides`` lists the edge steps from ``c`` to the other corners (None
        if some side is not a single diagonal)."""
        if self._sides is None:
            out = []
            for _, by_h in cell_corners(self.cube):
                for cs in by_h.values():
                    for c in cs:
                        sides = [self._side(c, c2) for c2 in cs if c2 != c]
                        out.append((c, cs, None if None in sides else sides))
            self._sides = out
        return self._sides

    def _side(self, c, c2):
        d = free_reduce(inverse(c) + tuple(c2))
        cands = [d]
        gone = [x for x in c if x not in c2]
        new = [x for x in c2 if x not in c]
        if len(gone) == len(new) == 1:
            # corners differ in one letter each; guess the diagonal, verify below
            a, b = gone[0], new[0]
            cands += [((a[0], -a[1]), b), (b, (a[0], -a[1]))]
        guesses = [self._sym_of[w] for w in cands if w in self._sym_of]
        guesses += [self._sym_of[inverse(w)] for w in cands if inverse(w) in self._sym_of]
        for sym in guesses + list(self.alphabet.edge_symbols):
            word = free_reduce(self.alphabet.symbols[sym])
            for e in (1, -1):
                if self.oracle.is_trivial(d + (inverse(word) if e == 1 else word)):
                    return sym, e
        return None

    def cell_heights_ok(self) -> bool:
        return all(sum(e for _, e in self.oracle.to_word(v)) == 0 for v in self.vertices)


def _vkey(k):
    """Total order on vertex keys (normal-form words or tuples of them)."""
    return repr(k)


def level_ball(oracle, alphabet: DiagonalAlphabet, r: int, cube: Optional[CubeComplex] = None,
               max_vertices: int = 200_000, close: bool = True) -> LevelComplex:
    """BFS ball of radius ``r`` about the identity in the level set."""
    lc = LevelComplex(oracle, alphabet, cube)
    start = oracle.identity
    lc.add_vertex(start)
    frontier = [start]
    depth = {start: 0}
    syms = alphabet.edge_symbols
    for d in range(1, r + 1):
        nxt = []
        for g in sorted(frontier, key=_vkey):
            for sym in syms:
                for e in (1, -1):
                    h = lc.step(g, sym, e)
                    if h not in depth:
                        depth[h] = d
                        nxt.append(h)
                        lc.add_vertex(h)
                        if len(depth) > max_vertices:
                            lc.partial = True
                            raise InputError("level ball exceeds the vertex budget")
        frontier = nxt
    for g in list(lc.vertices):
        for sym in syms:
            h = lc.step(g, sym, 1)
            if h in depth:
                lc.add_edge(g, h, sym, key=frozenset((g, h)))
    lc.meta["radius"] = r
    lc.meta["depth"] = depth
    if close:
        lc.close_triangles()
    return lc


def close_triangles(lc: LevelComplex, c: Optional[CubeComplex] = None) -> LevelComplex:
    if c is not None:
        lc.cube = c
    lc.close_triangles()
    return lc


def grow_region(lc: LevelComplex, seeds, radius: int) -> None:
    """Add the radius-``radius`` neighbourhood of ``seeds`` (with all edges
    among the new vertices and the closed triangles) to ``lc`` in place."""
    seen = set(seeds)
    frontier = list(seeds)
    for s in seeds:
        lc.add_vertex(s)
    for _ in range(radius):
        nxt = []
        for g in sorted(frontier, key=_vkey):
            for sym in lc.alphabet.edge_symbols:
                for e in (1, -1):
                    h = lc.step(g, sym, e)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
                        lc.add_vertex(h)
        frontier = nxt
    for g in list(lc.vertices):
        for sym in lc.alphabet.edge_symbols:
            h = lc.step(g, sym, 1)
            if lc.vertex_index(h) is not None:
                lc.add_edge(g, h, sym, key=frozenset((g, h)))
    lc.close_triangles()


# --------------------------------------------------------- scaled copies

def flag_to_complex2(Y: FlagComplex2) -> Complex2:
    """The simplicial complex as a ``Complex2`` (edges a -> b for a < b,
    triangles a < b < c with boundary [a,b] + [b,c] - [a,c])."""
    cx = Complex2("Y")
    for v in Y.vertices:
        cx.add_vertex(v)
    for a, b in Y.sorted_edges():
        cx.add_edge(a, b, "", key=frozenset((a, b)))
    for a, b, c in Y.sorted_triangles():
        e = lambda x, y: cx.edge_index(frozenset((x, y)))
        cx.add_face([(e(a, b), 1), (e(b, c), 1), (e(a, c), -1)], frozenset((a, b, c)))
    return cx


@dataclass
class ScaledYCopy:
    base: object
    d: int
    sign: str
    lc: LevelComplex
    Ycx: Complex2
    points: Dict = field(default_factory=dict)  # (simplex, exponents) -> vertex key
    faces_of: Dict = field(default_factory=dict)  # Y face index -> [(level face, sign)]
    edges_of: Dict = field(default_factory=dict)  # Y edge index -> [(level edge, sign)]

    @property
    def n_faces(self) -> int:
        return sum(len(v) for v in self.faces_of.values())

    def chain(self, y_chain: Chain) -> Chain:
        """Scaled image of a 2-chain of Y."""
        out: Dict[int, int] = {}
        for f, k in y_chain.coeffs.items():
            for lf, s in self.faces_of[f]:
                out[lf] = out.get(lf, 0) + k * s
        return Chain(self.lc, 2, out)

    def cycle(self, y_chain: Chain) -> Chain:
        """Scaled image of a 1-chain of Y (each edge becomes d small edges)."""
        out: Dict[int, int] = {}
        for e, k in y_chain.coeffs.items():
            for le, s in self.edges_of[e]:
                out[le] = out.get(le, 0) + k * s
        return Chain(self.lc, 1, out)

    def fundamental_chain(self) -> Chain:
        return self.chain(Chain(self.Ycx, 2, {i: 1 for i in range(len(self.Ycx.faces))}))


def scaled_copy(Y: FlagComplex2, base, d: int, sign: str = "descending", oracle=None,
                gen_map: Optional[Dict[str, str]] = None, lc: Optional[LevelComplex] = None,
                cube: Optional[CubeComplex] = None) -> ScaledYCopy:
    """The scale-``d`` copy of Y in the level set at a vertex ``base`` of
    height ``d`` (descending) or ``-d`` (ascending).

    Vertices are ``base * g1^-e1 g2^-e2 g3^-e3`` over simplices of Y with
    ``e1 + e2 + e3 = d`` (exponents flip sign when ascending).
    """
    from .complexes import salvetti
    from .groups.oracles import RaagOracle

    if d < 1:
        raise InputError("scale must be at least 1")
    gen_map = gen_map or {v: v for v in Y.vertices}
    if oracle is None:
        oracle = RaagOracle(Y.graph.__class__([gen_map[v] for v in Y.vertices],
                                              [(gen_map[a], gen_map[b]) for a, b in Y.sorted_edges()]))
    if lc is None:
        if cube is None:
            cube = salvetti(oracle.graph) if hasattr(oracle, "graph") else None
        alpha = diagonal_generators(cube) if cube is not None else DiagonalAlphabet({})
        lc = LevelComplex(oracle, alpha, cube, name="scaled")
    step = -1 if sign == "descending" else 1
    base_key = oracle.element(base)
    h = sum(e for _, e in oracle.to_word(base_key))
    if h != -step * d:
        raise InputError(f"base vertex has height {h}, expected {-step * d}")
    Ycx = flag_to_complex2(Y)
    sc = ScaledYCopy(base_key, d, sign, lc, Ycx)

    def point(simplex, exps):
        key = (simplex, exps)
        if key not in sc.points:
            w = []
            for g, e in zip(simplex, exps):
                w += [(gen_map[g], step)] * e
            sc.points[key] = oracle.mul(base_key, tuple(w))
            lc.add_vertex(sc.points[key])
        return sc.points[key]

    def edge(p, q):
        eb = lc.edge_between(p, q)
        if eb is None:
            sym = lc.symbol_between(p, q)
            if sym is None:
                raise InputError("scaled copy edge is not a diagonal")
            idx, s, _ = lc.ensure_edge(p, *sym)
            return idx, s
        return eb

    for v in Y.vertices:
        point((v,), (d,))
    for ei, (t, hd, _) in enumerate(Ycx.edges):
        a, b = Ycx.vertices[t], Ycx.vertices[hd]
        segs = []
        for j in range(d):
            p = point((a, b), (d - j, j)) if j else point((a,), (d,))
            q = point((a, b), (d - j - 1, j + 1)) if j + 1 < d else point((b,), (d,))
            segs.append(edge(p, q))
        sc.edges_of[ei] = segs
    # identify boundary points of edges with vertex points
    for fi, key in enumerate(Ycx.face_keys):
        a, b, c = sorted(key)
        faces = []

        def P(i, j, k):
            # exponents of (a, b, c), collapsing to lower simplices on the boundary
            nz = [(g, e) for g, e in zip((a, b, c), (i, j, k)) if e]
            return point(tuple(g for g, _ in nz), tuple(e for _, e in nz))

        def orient(pts, coords):
            # sign of the small triangle relative to a -> b -> c, read in the
            # face's own (sorted key) orientation
            order = sorted(range(3), key=lambda m: _vkey(pts[m]))
            (x0, y0), (x1, y1), (x2, y2) = (coords[m] for m in order)
            det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
            return 1 if det > 0 else -1

        for i in range(d):
            for j in range(d - i):
                k = d - 1 - i - j
                pts = [P(i + 1, j, k), P(i, j + 1, k), P(i, j, k + 1)]
                coords = [(j, k), (j + 1, k), (j, k + 1)]
                f = lc.add_triangle(pts, lazy_edges=True)
                faces.append((f, orient(pts, coords)))
        for i in range(d - 1):
            for j in range(d - 1 - i):
                k = d - 2 - i - j
                pts = [P(i + 1, j + 1, k), P(i + 1, j, k + 1), P(i, j + 1, k + 1)]
                coords = [(j + 1, k), (j, k + 1), (j + 1, k + 1)]
                f = lc.add_triangle(pts, lazy_edges=True)
                faces.append((f, orient(pts, coords)))
        sc.faces_of[fi] = faces
    return sc


# ------------------------------------------------------- translating chains

def translate_chain(lc: LevelComplex, chain: Chain, g) -> Chain:
    """Left-translate a chain by the element ``g`` (a word) into ``lc``,
    adding the translated cells as needed.  The chain may live in another
    level complex over the same oracle."""
    orc = lc.oracle
    src = chain.complex
    g = tuple(g)
    img = {}

    def tv(k):
        if k not in img:
            img[k] = orc.mul(orc.element(g), orc.to_word(k))
        return img[k]

    out: Dict[int, int] = {}
    if chain.dim == 1:
        for e, c in chain.coeffs.items():
            t, h, sym = src.edges[e]
            a, b = tv(src.vertices[t]), tv(src.vertices[h])
            idx, sign, _ = lc.ensure_edge(a, sym, 1)
            if lc.vertices[lc.edges[idx][1]] != b:
                raise InputError("translated edge does not match")
            out[idx] = out.get(idx, 0) + c * sign
    elif chain.dim == 2:
        for f, c in chain.coeffs.items():
            verts = [tv(k) for k in src.face_keys[f]]
            idx = lc.add_triangle(verts, lazy_edges=True)
            # orientation is by sorted keys, which translation may permute
            old = sorted(src.face_keys[f], key=_vkey)
            new = sorted(verts, key=_vkey)
            perm = [new.index(tv(k)) for k in old]
            out[idx] = out.get(idx, 0) + c * _perm_sign(perm)
    else:
        for v, c in chain.coeffs.items():
            i = lc.add_vertex(tv(src.vertices[v]))
            out[i] = out.get(i, 0) + c
    return Chain(lc, chain.dim, out)


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


# ------------------------------------------------------------ piece tags

@dataclass(frozen=True)
class PieceTag:
    kind: str  # "Q", "A" or "E"
    index: Tuple[int, ...]  # leaf indices (empty for Q)
    copy: Tuple = ()  # coset representative word of the copy

    def __str__(self):
        idx = ",".join(map(str, self.index))
        return f"{self.kind}{idx}" + (f"@{_fmt(self.copy)}" if self.copy else "")


def _fmt(w):
    from .words import format_word
    return format_word(w) or "1"


def letters_piece(am, letters) -> Tuple[str, Tuple[int, ...]]:
    """Smallest piece whose generators include ``letters``."""
    letters = set(letters)
    for g in letters:
        if am.is_y_letter(g):
            return "A", (am.piece_of_y_letter(g),)
    es = tuple(i for i in range(1, am.n) if letters <= {am.a[i - 1], am.s, am.u, am.v})
    if es:
        return "E", es
    return "Q", ()


def stretched_complex_tags(lc: LevelComplex) -> Dict:
    """Assign each cell of an amalgam level ball to a copy of ``L_Q``,
    ``L_{A_i}`` or a separating ``L_{E_i}``.

    Cell kinds come from the generators spelling the cell's labels; the
    copy of a vertex comes from its Britton-reduced syllables (everything
    before the last syllable names the coset).
    """
    orc = lc.oracle
    am = orc.am
    out = {"vertices": {}, "edges": {}, "faces": {}}
    for i, key in enumerate(lc.vertices):
        syls = orc.reduce(orc.to_word(key), normalize=True)
        if not syls:
            out["vertices"][i] = PieceTag("Q", ())
            continue
        piece, wd = syls[-1]
        prefix = tuple(x for _, w in syls[:-1] for x in w)
        if piece == "Q" and len(syls) > 1 and orc.membership_E_in_Q(syls[-2][0], wd):
            # trailing centre syllable lies in the edge group, so the vertex
            # also lies in the A copy before it; tag it there, whatever the spelling
            piece = syls[-2][0]
            prefix = tuple(x for _, w in syls[:-2] for x in w)
        if piece == "Q":
            kind, idx = letters_piece(am, [g for g, _ in wd])
            if kind == "E" and not prefix:
                out["vertices"][i] = PieceTag("E", idx)
            else:
                out["vertices"][i] = PieceTag("Q", (), prefix)
        else:
            out["vertices"][i] = PieceTag("A", (piece,), prefix)
    for i, (_, _, sym) in enumerate(lc.edges):
        letters = [g for g, _ in lc.alphabet.symbols[sym]]
        out["edges"][i] = PieceTag(*letters_piece(am, letters))
    for i, bd in enumerate(lc.faces):
        letters = set()
        for e, _ in bd:
            letters |= {g for g, _ in lc.alphabet.symbols[lc.edges[e][2]]}
        out["faces"][i] = PieceTag(*letters_piece(am, letters))
    return out
