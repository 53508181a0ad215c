"""Board graphs for selection games.

A board is the ground set of a selection game plus whatever structure the
payoff needs: lattice coordinates and crossing sides for hex, the merged
grid and its planar dual for bridgit, the tree shape for tree games.

Items are always numbered 0..n-1.  For lattice games item (row, col) has id
row * cols + col, and the first coordinate runs from the black-left side to
the black-right side.  For bond and tree games the items are edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BoardSizeError

MAX_ITEMS = 10**6

HEX_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


@dataclass(frozen=True)
class Cell:
    id: int
    coords: tuple[int, int] | None = None
    tree_path: tuple[int, ...] | None = None


@dataclass(frozen=True)
class TreeStructure:
    """Rooted tree in BFS order; node 0 is the root, edge e joins node e+1 to its parent."""

    profile: tuple[int, ...]
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    depth: tuple[int, ...]
    leaves: tuple[int, ...]

    @property
    def num_nodes(self) -> int:
        return len(self.parent)

    @property
    def num_edges(self) -> int:
        return len(self.parent) - 1

    def edge_child(self, edge: int) -> int:
        return edge + 1

    def edge_parent(self, edge: int) -> int:
        return self.parent[edge + 1]


@dataclass(frozen=True)
class BondStructure:
    """Vertex graph of a bond game plus its planar dual.

    edges[i] is the vertex pair of item i; dual_edges[i] is the dual vertex
    pair crossed by item i.  Short connects vertex_left to vertex_right;
    Cut connects dual_top to dual_bottom in the dual.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    vertex_left: int
    vertex_right: int
    num_dual_vertices: int
    dual_edges: tuple[tuple[int, int], ...]
    dual_top: int
    dual_bottom: int


@dataclass(frozen=True)
class BoardGraph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]
    terminals: dict[str, frozenset[int]]
    kind: str
    params: dict
    cells: tuple[Cell, ...]
    rows: int = 0
    cols: int = 0
    tree: TreeStructure | None = field(default=None, repr=False)
    bond: BondStructure | None = field(default=None, repr=False)

    def cell_id(self, row: int, col: int) -> int:
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise BoardSizeError(f"coords ({row}, {col}) outside {self.rows}x{self.cols} board")
        return row * self.cols + col


def _check_positive(name: str, value: int) -> None:
    if not isinstance(value, int) or value <= 0:
        raise BoardSizeError(f"{name} must be a positive integer, got {value!r}")


def hex_board(rows: int, cols: int | None = None) -> BoardGraph:
    """Hex lozenge with `rows` cells between the black sides and `cols` between the white."""
    if cols is None:
        cols = rows
    _check_positive("rows", rows)
    _check_positive("cols", cols)
    n = rows * cols
    if n > MAX_ITEMS:
        raise BoardSizeError(f"hex board {rows}x{cols} exceeds {MAX_ITEMS} cells")

    def cid(i: int, j: int) -> int:
        return i * cols + j

    adjacency = []
    cells = []
    for i in range(rows):
        for j in range(cols):
            nbrs = [
                cid(i + di, j + dj)
                for di, dj in HEX_OFFSETS
                if 0 <= i + di < rows and 0 <= j + dj < cols
            ]
            adjacency.append(tuple(nbrs))
            cells.append(Cell(cid(i, j), coords=(i, j)))
    terminals = {
        "black-left": frozenset(cid(0, j) for j in range(cols)),
        "black-right": frozenset(cid(rows - 1, j) for j in range(cols)),
        "white-top": frozenset(cid(i, 0) for i in range(rows)),
        "white-bottom": frozenset(cid(i, cols - 1) for i in range(rows)),
    }
    return BoardGraph(
        n=n,
        adjacency=tuple(adjacency),
        terminals=terminals,
        kind="hex",
        params={"rows": rows, "cols": cols},
        cells=tuple(cells),
        rows=rows,
        cols=cols,
    )


def bridgit_board(L: int) -> BoardGraph:
    """Bridg-It graph: the (L+1) x L grid with each side column collapsed to a terminal.

    Vertices sit at (r, c) with L rows and L+1 columns; columns 0 and L are
    merged into the left and right terminals.  Items are the surviving edges:
    L*L horizontal ones, then (L-1)*(L-1) interior vertical ones.
    """
    _check_positive("L", L)
    if L * L + (L - 1) * (L - 1) > MAX_ITEMS:
        raise BoardSizeError(f"bridgit L={L} exceeds {MAX_ITEMS} edges")

    left, right = 0, 1

    def vid(r: int, c: int) -> int:
        if c == 0:
            return left
        if c == L:
            return right
        return 2 + r * (L - 1) + (c - 1)

    num_vertices = 2 + L * (L - 1)

    top, bottom = 0, 1

    def fid(fr: int, fc: int) -> int:
        # face between vertex rows fr, fr+1 and columns fc, fc+1
        if fr < 0:
            return top
        if fr >= L - 1:
            return bottom
        return 2 + fr * L + fc

    num_dual = 2 + (L - 1) * L

    edges: list[tuple[int, int]] = []
    dual_edges: list[tuple[int, int]] = []
    cells: list[Cell] = []
    for r in range(L):
        for c in range(L):
            edges.append((vid(r, c), vid(r, c + 1)))
            dual_edges.append((fid(r - 1, c), fid(r, c)))
            cells.append(Cell(len(cells), coords=(r, c)))
    for r in range(L - 1):
        for c in range(1, L):
            edges.append((vid(r, c), vid(r + 1, c)))
            dual_edges.append((fid(r, c - 1), fid(r, c)))
            cells.append(Cell(len(cells), coords=(L + r, c)))

    n = len(edges)
    incident: list[list[int]] = [[] for _ in range(num_vertices)]
    for e, (u, v) in enumerate(edges):
        incident[u].append(e)
        incident[v].append(e)
    adjacency = []
    for e, (u, v) in enumerate(edges):
        nbrs = sorted(set(incident[u] + incident[v]) - {e})
        adjacency.append(tuple(nbrs))
    terminals = {
        "left": frozenset(incident[left]),
        "right": frozenset(incident[right]),
    }
    bond = BondStructure(
        num_vertices=num_vertices,
        edges=tuple(edges),
        vertex_left=left,
        vertex_right=right,
        num_dual_vertices=num_dual,
        dual_edges=tuple(dual_edges),
        dual_top=top,
        dual_bottom=bottom,
    )
    return BoardGraph(
        n=n,
        adjacency=tuple(adjacency),
        terminals=terminals,
        kind="bridgit",
        params={"L": L},
        cells=tuple(cells),
        bond=bond,
    )


def grid3x3_board() -> BoardGraph:
    adjacency = []
    cells = []
    for i in range(3):
        for j in range(3):
            nbrs = [
                (i + di) * 3 + (j + dj)
                for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))
                if 0 <= i + di < 3 and 0 <= j + dj < 3
            ]
            adjacency.append(tuple(nbrs))
            cells.append(Cell(i * 3 + j, coords=(i, j)))
    return BoardGraph(
        n=9,
        adjacency=tuple(adjacency),
        terminals={},
        kind="grid3x3",
        params={},
        cells=tuple(cells),
        rows=3,
        cols=3,
    )


def build_tree(profile: tuple[int, ...] | list[int]) -> TreeStructure:
    """Rooted tree with uniform arity per level: profile[k] children at depth k."""
    profile = tuple(profile)
    for b in profile:
        _check_positive("arity", b)
    parent = [-1]
    depth = [0]
    children: list[list[int]] = [[]]
    frontier = [0]
    for level, arity in enumerate(profile):
        next_frontier = []
        for node in frontier:
            for _ in range(arity):
                child = len(parent)
                parent.append(node)
                depth.append(level + 1)
                children.append([])
                children[node].append(child)
                next_frontier.append(child)
                if child > MAX_ITEMS:
                    raise BoardSizeError(f"tree profile {profile} exceeds {MAX_ITEMS} nodes")
        frontier = next_frontier
    leaves = tuple(frontier)
    return TreeStructure(
        profile=profile,
        parent=tuple(parent),
        children=tuple(tuple(c) for c in children),
        depth=tuple(depth),
        leaves=leaves,
    )


def _tree_path(tree: TreeStructure, node: int) -> tuple[int, ...]:
    path = []
    while tree.parent[node] >= 0:
        p = tree.parent[node]
        path.append(tree.children[p].index(node))
        node = p
    return tuple(reversed(path))


def tree_board(profile: tuple[int, ...] | list[int], items: str) -> BoardGraph:
    """Board over a rooted tree; items are its "edges" or its "leaves"."""
    tree = build_tree(profile)
    if items == "edges":
        n = tree.num_edges
        if n == 0:
            raise BoardSizeError("tree with no edges has no items")
        adjacency = []
        cells = []
        incident: list[list[int]] = [[] for _ in range(tree.num_nodes)]
        for e in range(n):
            incident[tree.edge_parent(e)].append(e)
            incident[tree.edge_child(e)].append(e)
        for e in range(n):
            nbrs = sorted(
                set(incident[tree.edge_parent(e)] + incident[tree.edge_child(e)]) - {e}
            )
            adjacency.append(tuple(nbrs))
            cells.append(Cell(e, tree_path=_tree_path(tree, tree.edge_child(e))))
        leaf_set = set(tree.leaves)
        terminals = {
            "root": frozenset(incident[0]),
            "leaves": frozenset(e for e in range(n) if tree.edge_child(e) in leaf_set),
        }
    elif items == "leaves":
        n = len(tree.leaves)
        adjacency = []
        cells = []
        by_parent: dict[int, list[int]] = {}
        for i, leaf in enumerate(tree.leaves):
            by_parent.setdefault(tree.parent[leaf], []).append(i)
        for i, leaf in enumerate(tree.leaves):
            sibs = tuple(j for j in by_parent[tree.parent[leaf]] if j != i)
            adjacency.append(sibs)
            cells.append(Cell(i, tree_path=_tree_path(tree, leaf)))
        terminals = {}
    else:
        raise ValueError(f"tree items must be 'edges' or 'leaves', got {items!r}")
    return BoardGraph(
        n=n,
        adjacency=tuple(adjacency),
        terminals=terminals,
        kind="tree",
        params={"profile": tuple(profile), "items": items},
        cells=tuple(cells),
        tree=tree,
    )


def generic_board(n: int) -> BoardGraph:
    _check_positive("n", n)
    if n > MAX_ITEMS:
        raise BoardSizeError(f"generic board n={n} exceeds {MAX_ITEMS} items")
    return BoardGraph(
        n=n,
        adjacency=tuple(() for _ in range(n)),
        terminals={},
        kind="generic",
        params={"n": n},
        cells=tuple(Cell(i) for i in range(n)),
    )


def build_board(kind: str, **params) -> BoardGraph:
    if kind == "hex":
        if "L" in params:
            L = params["L"]
            r = params.get("r", 1)
            _check_positive("L", L)
            return hex_board(L, int(round(r * L)))
        return hex_board(params["rows"], params.get("cols"))
    if kind == "bridgit":
        return bridgit_board(params["L"])
    if kind == "grid3x3":
        return grid3x3_board()
    if kind == "tree":
        return tree_board(params["profile"], params.get("items", "edges"))
    if kind == "generic":
        return generic_board(params["n"])
    raise ValueError(f"unknown board kind {kind!r}")
