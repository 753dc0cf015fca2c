"""Bound quiver algebras kQ/I over F_p.

Paths compose function-style: the word ``a*b`` means "traverse b, then a".
Internally a path is stored by its traversal order (first arrow first).

Representations are covariant: an arrow ``a: s -> t`` acts as a linear map
from the space at ``s`` to the space at ``t``.  With this convention the
indecomposable projective at ``v`` is spanned by the basis paths starting
at ``v``, so a sink vertex carries a simple projective.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import exactlin as el

__all__ = [
    "AlgebraError",
    "Quiver",
    "Path",
    "Algebra",
    "build_algebra",
    "parse_algebra",
    "parse_path_expr",
    "opposite",
    "tensor_with_bound_a3",
    "tensor_with_linear",
]


class AlgebraError(ValueError):
    """Malformed quiver, relation, or non-admissible ideal."""


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, int, int], ...]  # (label, source, target)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex label")
        labels = [a[0] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise AlgebraError("duplicate arrow label")
        if set(labels) & set(self.vertices):
            raise AlgebraError("arrow and vertex labels must differ")
        n = len(self.vertices)
        for lab, s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise AlgebraError(f"arrow {lab} has an undeclared endpoint")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex_index(self, label: str) -> int:
        try:
            return self.vertices.index(label)
        except ValueError:
            raise AlgebraError(f"unknown vertex {label!r}") from None

    def arrow_index(self, label: str) -> int:
        for i, a in enumerate(self.arrows):
            if a[0] == label:
                return i
        raise AlgebraError(f"unknown arrow {label!r}")


@dataclass(frozen=True)
class Path:
    """A path given by source, target and arrow indices in traversal order."""

    src: int
    tgt: int
    arrows: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def then(self, arrow: int, quiver: Quiver) -> "Path":
        lab, s, t = quiver.arrows[arrow]
        if s != self.tgt:
            raise AlgebraError(f"arrow {lab} does not start at the end of the path")
        return Path(self.src, t, self.arrows + (arrow,))

    def key(self) -> tuple:
        # Written order is the reverse of traversal order.
        if not self.arrows:
            return (0, (self.src,))
        return (len(self.arrows), tuple(reversed(self.arrows)))

    def name(self, quiver: Quiver) -> str:
        if not self.arrows:
            return "e_" + quiver.vertices[self.src]
        return "*".join(quiver.arrows[a][0] for a in reversed(self.arrows))


# A linear combination of parallel paths: tuple of (coefficient, Path).
PathExpr = tuple


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def _parse_word(word: str, quiver: Quiver) -> tuple[int, Path]:
    tokens = [t.strip() for t in word.split("*") if t.strip()]
    if not tokens:
        raise AlgebraError("empty path")
    coeff = 1
    while tokens and re.fullmatch(r"\d+", tokens[0]):
        coeff *= int(tokens.pop(0))
    if not tokens:
        raise AlgebraError("a path expression term needs a path")
    if len(tokens) == 1 and (tokens[0].startswith("e_") or tokens[0] in quiver.vertices):
        lab = tokens[0][2:] if tokens[0].startswith("e_") else tokens[0]
        v = quiver.vertex_index(lab)
        return coeff, Path(v, v)
    idx = [quiver.arrow_index(t) for t in tokens]
    # written a*b means b first
    trav = list(reversed(idx))
    first = quiver.arrows[trav[0]]
    path = Path(first[1], first[1])
    for a in trav:
        path = path.then(a, quiver)
    return coeff, path


def parse_path_expr(text: str, quiver: Quiver) -> PathExpr:
    """Parse ``[±][coeff*]path[±...]`` into a tuple of (coeff, Path).

    Terms must be parallel.  ``0`` parses to the empty expression.
    """
    text = text.strip()
    if text in ("", "0"):
        return ()
    terms = []
    pos = 0
    for m in _TERM.finditer(text):
        if m.start() != pos and text[pos:m.start()].strip():
            raise AlgebraError(f"cannot parse path expression {text!r}")
        pos = m.end()
        sign = -1 if m.group(1) == "-" else 1
        body = m.group(2).strip()
        if body == "0":
            continue
        c, path = _parse_word(body, quiver)
        terms.append((sign * c, path))
    if pos != len(text):
        raise AlgebraError(f"cannot parse path expression {text!r}")
    ends = {(t[1].src, t[1].tgt) for t in terms}
    if len(ends) > 1:
        raise AlgebraError(f"relation summands are not parallel: {text!r}")
    return tuple(terms)


class Algebra:
    """A basic bound quiver algebra with a canonical path basis.

    ``mult[i, j]`` is the coordinate vector of ``basis[i] * basis[j]``
    (function-style: basis[j] first, then basis[i]).
    """

    def __init__(self, quiver: Quiver, relations, length_cap: int, p: int = 2,
                 name: str = ""):
        if length_cap < 1:
            raise AlgebraError("length cap must be at least 1")
        if not el.is_prime(p):
            raise AlgebraError(f"{p} is not prime")
        self.quiver = quiver
        self.relations = tuple(tuple(r) for r in relations)
        self.length_cap = length_cap
        self.p = p
        self.name = name
        self._op: Algebra | None = None
        self._build()

    # construction -------------------------------------------------------

    def _all_paths(self) -> list[Path]:
        q = self.quiver
        layer = [Path(v, v) for v in range(q.n)]
        out = list(layer)
        for _ in range(self.length_cap):
            nxt = []
            for path in layer:
                for a, (_, s, _t) in enumerate(q.arrows):
                    if s == path.tgt:
                        nxt.append(path.then(a, q))
            out.extend(nxt)
            layer = nxt
        return out

    def _build(self):
        q = self.quiver
        cap = self.length_cap
        paths = self._all_paths()
        # columns ordered from largest to smallest so that pivots are leading terms
        paths.sort(key=lambda x: x.key(), reverse=True)
        col = {x: i for i, x in enumerate(paths)}
        by_end_start: dict[int, list[Path]] = {}
        by_start_end: dict[int, list[Path]] = {}
        for x in paths:
            by_end_start.setdefault(x.tgt, []).append(x)
            by_start_end.setdefault(x.src, []).append(x)
        gens = []
        for rel in self.relations:
            if not rel:
                continue
            s, t = rel[0][1].src, rel[0][1].tgt
            lmin = min(len(x) for _, x in rel)
            for pre in by_end_start.get(s, []):  # traversed before the relation
                if lmin + len(pre) > cap:
                    continue
                for post in by_start_end.get(t, []):  # traversed after
                    if lmin + len(pre) + len(post) > cap:
                        continue
                    vec = np.zeros(len(paths), dtype=np.int64)
                    for c, x in rel:
                        full = pre.arrows + x.arrows + post.arrows
                        if len(full) > cap:
                            continue
                        path = Path(pre.src, post.tgt, full)
                        vec[col[path]] = (vec[col[path]] + c) % self.p
                    if vec.any():
                        gens.append(vec)
        if gens:
            red, piv = el.rref(np.array(gens), self.p)
            red = red[: len(piv)]
        else:
            red, piv = np.zeros((0, len(paths)), dtype=np.int64), []
        pivset = set(piv)
        self._pivot_row = {c: i for i, c in enumerate(piv)}
        self._red = red
        for x in paths:
            if len(x) == cap:
                c = col[x]
                if c not in pivset or np.count_nonzero(red[self._pivot_row[c]]) != 1:
                    raise AlgebraError(
                        "raise length_cap or ideal not admissible: path "
                        f"{x.name(q)} of length {cap} is not in the ideal")
        basis = [x for x in paths if col[x] not in pivset]
        basis.sort(key=lambda x: x.key())
        self.basis: list[Path] = basis
        self.index = {x: i for i, x in enumerate(basis)}
        self._paths = paths
        self._col = col
        n = len(basis)
        self.src = np.array([b.src for b in basis], dtype=np.int64)
        self.tgt = np.array([b.tgt for b in basis], dtype=np.int64)
        self._col_to_basis = np.full(len(paths), -1, dtype=np.int64)
        for i, b in enumerate(basis):
            self._col_to_basis[col[b]] = i
        mult = np.zeros((n, n, n), dtype=np.int64)
        for i, bi in enumerate(basis):
            for j, bj in enumerate(basis):
                if bj.tgt != bi.src:
                    continue
                mult[i, j] = self.reduce(Path(bj.src, bi.tgt, bj.arrows + bi.arrows))
        self.mult = mult
        self._check_basic()

    def _check_basic(self):
        for v in range(self.quiver.n):
            if Path(v, v) not in self.index:
                raise AlgebraError("a trivial path lies in the ideal")

    # elements -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.quiver.n

    def reduce(self, path: Path) -> np.ndarray:
        """Coordinates of the residue class of a path in the basis."""
        out = np.zeros(len(self.basis), dtype=np.int64)
        if len(path) >= self.length_cap:
            return out
        c = self._col[path]
        b = self._col_to_basis[c]
        if b >= 0:
            out[b] = 1
            return out
        row = self._red[self._pivot_row[c]]
        for k in np.nonzero(row)[0]:
            if k == c:
                continue
            out[self._col_to_basis[k]] = (out[self._col_to_basis[k]] - row[k]) % self.p
        return out

    def element(self, expr: PathExpr) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for c, path in expr:
            out = (out + c * self.reduce(path)) % self.p
        return out

    def parse_element(self, text: str) -> np.ndarray:
        return self.element(parse_path_expr(text, self.quiver))

    def times(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product x*y (function-style: y first)."""
        return np.mod(np.einsum("i,j,ijk->k", x, y, self.mult), self.p)

    def one(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for v in range(self.n):
            out[self.index[Path(v, v)]] = 1
        return out

    def idempotent(self, v: int) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        out[self.index[Path(v, v)]] = 1
        return out

    @cached_property
    def between(self) -> dict[tuple[int, int], list[int]]:
        """Basis indices of paths from u to v, keyed by (u, v)."""
        out: dict[tuple[int, int], list[int]] = {}
        for u in range(self.n):
            for v in range(self.n):
                out[(u, v)] = []
        for i, b in enumerate(self.basis):
            out[(b.src, b.tgt)].append(i)
        return out

    @cached_property
    def trivial_index(self) -> list[int]:
        return [self.index[Path(v, v)] for v in range(self.n)]

    def format_element(self, x: np.ndarray) -> str:
        terms = []
        for i in np.nonzero(np.mod(x, self.p))[0]:
            c = int(x[i]) % self.p
            nm = self.basis[i].name(self.quiver)
            terms.append(nm if c == 1 else f"{c}*{nm}")
        return "+".join(terms) if terms else "0"

    def basis_names(self) -> list[str]:
        return [b.name(self.quiver) for b in self.basis]

    def serialize(self) -> str:
        """Canonical text: basis then every nonzero structure constant."""
        names = self.basis_names()
        lines = [f"p={self.p}", "basis " + " ".join(names)]
        for i in range(self.dim):
            for j in range(self.dim):
                v = self.mult[i, j]
                if v.any():
                    lines.append(f"{names[i]} . {names[j]} = {self.format_element(v)}")
        return "\n".join(lines) + "\n"

    def vertex_label(self, v: int) -> str:
        return self.quiver.vertices[v]

    def opposite(self) -> "Algebra":
        if self._op is None:
            op = opposite(self)
            op._op = self
            self._op = op
        return self._op

    @cached_property
    def op_map(self) -> np.ndarray:
        """Matrix sending coordinates over this algebra to the opposite algebra.

        Column i is the reversed basis path i, reduced in the opposite algebra.
        """
        op = self.opposite()
        m = np.zeros((op.dim, self.dim), dtype=np.int64)
        for i, b in enumerate(self.basis):
            m[:, i] = op.reduce(Path(b.tgt, b.src, tuple(reversed(b.arrows))))
        return m

    def to_op(self, x: np.ndarray) -> np.ndarray:
        return np.mod(self.op_map @ x, self.p)

    def __repr__(self) -> str:
        return f"Algebra({self.name or '?'}, n={self.n}, dim={self.dim}, p={self.p})"


def build_algebra(quiver: Quiver, rels, length_cap: int, p: int = 2, name: str = "") -> Algebra:
    return Algebra(quiver, rels, length_cap, p=p, name=name)


def opposite(a: Algebra) -> Algebra:
    q = a.quiver
    arrows = tuple((lab, t, s) for lab, s, t in q.arrows)
    oq = Quiver(q.vertices, arrows)
    rels = []
    for rel in a.relations:
        rels.append(tuple((c, Path(x.tgt, x.src, tuple(reversed(x.arrows)))) for c, x in rel))
    name = a.name + "^op" if not a.name.endswith("^op") else a.name[:-3]
    return Algebra(oq, rels, a.length_cap, p=a.p, name=name)


def tensor_with_linear(a: Algebra, layers: int, zero_composites: bool) -> Algebra:
    """Modules over the result are chains M_{layers-1} -> ... -> M_0 of a-modules.

    Vertex ``(v, i)`` has index ``i * n + v``.  The connecting arrow
    ``c{i}_{v}`` goes from layer i to layer i-1.  When ``zero_composites``
    is set, any two consecutive connecting arrows compose to zero.
    """
    q = a.quiver
    n = q.n
    verts = tuple(f"{v}@{i}" for i in range(layers) for v in q.vertices)
    arrows = []
    for i in range(layers):
        for lab, s, t in q.arrows:
            arrows.append((f"{lab}@{i}", i * n + s, i * n + t))
    layer_arrow = lambda i, k: i * len(q.arrows) + k  # noqa: E731
    conn = {}
    for i in range(1, layers):
        for v in range(n):
            conn[(i, v)] = len(arrows)
            arrows.append((f"c{i}_{q.vertices[v]}", i * n + v, (i - 1) * n + v))
    tq = Quiver(verts, tuple(arrows))
    rels = []
    for i in range(layers):
        for rel in a.relations:
            rels.append(tuple(
                (c, Path(i * n + x.src, i * n + x.tgt,
                         tuple(layer_arrow(i, k) for k in x.arrows)))
                for c, x in rel))
    for i in range(1, layers):
        for k, (_, s, t) in enumerate(q.arrows):
            # a on layer i then connect  ==  connect then a on layer i-1
            lhs = Path(i * n + s, (i - 1) * n + t, (layer_arrow(i, k), conn[(i, t)]))
            rhs = Path(i * n + s, (i - 1) * n + t, (conn[(i, s)], layer_arrow(i - 1, k)))
            rels.append(((1, lhs), (-1, rhs)))
    if zero_composites:
        for i in range(2, layers):
            for v in range(n):
                rels.append(((1, Path(i * n + v, (i - 2) * n + v,
                                      (conn[(i, v)], conn[(i - 1, v)]))),))
    cap = a.length_cap + (1 if zero_composites else layers - 1)
    suffix = f"A{layers}" + ("/J" if zero_composites else "")
    return Algebra(tq, rels, cap, p=a.p, name=f"({suffix})x{a.name}")


def tensor_with_bound_a3(a: Algebra) -> Algebra:
    """(kA_3/J) tensor a; modules are diagrams M_2 -> M_1 -> M_0 with zero composite."""
    return tensor_with_linear(a, 3, zero_composites=True)


_LINE = re.compile(r"^(\w+)\s*(.*)$")


def parse_algebra(text: str, name: str = "", prime: int | None = None) -> Algebra:
    """Parse the line-oriented algebra description format.

    Lines: ``field p=<prime>``, ``vertex <label>``, ``arrow <label>: <src> -> <tgt>``,
    ``relation <expr>``, ``lengthcap <N>``.  ``#`` starts a comment.
    Errors carry the offending line number.
    """
    p = 2
    vertices: list[str] = []
    arrows: list[tuple[str, str, str]] = []
    rel_lines: list[tuple[int, str]] = []
    cap = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise AlgebraError(f"line {lineno}: cannot parse {raw!r}")
        kw, rest = m.group(1), m.group(2).strip()
        try:
            if kw == "field":
                mm = re.fullmatch(r"p\s*=\s*(\d+)", rest)
                if not mm:
                    raise AlgebraError("expected field p=<prime>")
                p = int(mm.group(1))
            elif kw == "vertex":
                if not re.fullmatch(r"\w+", rest):
                    raise AlgebraError("bad vertex label")
                vertices.append(rest)
            elif kw == "arrow":
                mm = re.fullmatch(r"(\w+)\s*:\s*(\w+)\s*->\s*(\w+)", rest)
                if not mm:
                    raise AlgebraError("expected arrow <label>: <src> -> <tgt>")
                arrows.append((mm.group(1), mm.group(2), mm.group(3)))
            elif kw == "relation":
                rel_lines.append((lineno, rest))
            elif kw == "lengthcap":
                cap = int(rest)
            else:
                raise AlgebraError(f"unknown keyword {kw!r}")
        except (AlgebraError, ValueError) as exc:
            raise AlgebraError(f"line {lineno}: {exc}") from None
    if prime is not None:
        p = prime
    if not vertices:
        raise AlgebraError("no vertices declared")
    try:
        quiver = Quiver(tuple(vertices), tuple(
            (lab, vertices.index(s), vertices.index(t)) for lab, s, t in arrows))
    except ValueError:
        raise AlgebraError("arrow endpoint is not a declared vertex") from None
    rels = []
    for lineno, body in rel_lines:
        try:
            rels.append(parse_path_expr(body, quiver))
        except AlgebraError as exc:
            raise AlgebraError(f"line {lineno}: {exc}") from None
    if cap is None:
        cap = _default_cap(quiver, rels)
    return Algebra(quiver, rels, cap, p=p, name=name)


def _default_cap(quiver: Quiver, rels) -> int:
    # acyclic quivers: longest path plus one always works
    n = quiver.n
    longest = [0] * n
    for _ in range(n + 1):
        changed = False
        for _, s, t in quiver.arrows:
            if longest[s] + 1 > longest[t]:
                longest[t] = longest[s] + 1
                changed = True
        if not changed:
            return max(longest) + 1
    raise AlgebraError("quiver has an oriented cycle; declare lengthcap")
