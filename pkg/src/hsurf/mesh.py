"""Triangle meshes from solution strips, and OBJ/PLY writers.

Vertices copy strip positions bit for bit (no resampling); quads are
split along the (row + column) parity diagonal.  Closed strips stitch
the seam by sharing vertex columns.  Half-turn data is glued over one
fundamental period by identifying the last column with the first one
reversed in t, which produces a one-sided band (one boundary loop, no
consistent winding).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .strip import SolutionStrip

__all__ = ["SurfaceMesh", "MeshError", "strip_to_mesh", "mobius_glue",
           "write_obj", "write_ply", "boundary_loops", "is_orientable",
           "euler_characteristic"]

DEGENERATE_AREA = 1e-16


class MeshError(ValueError):
    pass


@dataclass
class SurfaceMesh:
    vertices: np.ndarray   # (v, 3)
    normals: np.ndarray    # (v, 3), unit
    triangles: np.ndarray  # (f, 3) int indices
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.normals = np.asarray(self.normals, dtype=float)
        self.triangles = np.asarray(self.triangles, dtype=int)
        if len(self.triangles) and (self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)):
            raise MeshError("triangle index out of range")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)


def _triangle_areas(vertices, triangles):
    a = vertices[triangles[:, 0]]
    b = vertices[triangles[:, 1]]
    c = vertices[triangles[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=-1)


def _emit_quads(vertex_id, n_rows, n_cols_quads, col_of):
    """Split each grid quad into two triangles along the parity diagonal."""
    tris = []
    for i in range(n_rows - 1):
        for j in range(n_cols_quads):
            v00 = vertex_id(i, col_of(j))
            v01 = vertex_id(i, col_of(j + 1))
            v10 = vertex_id(i + 1, col_of(j))
            v11 = vertex_id(i + 1, col_of(j + 1))
            if (i + j) % 2 == 0:
                tris.append((v00, v01, v11))
                tris.append((v00, v11, v10))
            else:
                tris.append((v00, v01, v10))
                tris.append((v01, v11, v10))
    return np.array(tris, dtype=int)


def strip_to_mesh(strip: SolutionStrip, metadata: dict | None = None) -> SurfaceMesh:
    """Mesh the full cached grid; closed grids share the seam column."""
    m, n = strip.n_t, strip.grid.n
    vertices = strip.psi.reshape(m * n, 3)
    normals = strip.eta.reshape(m * n, 3)

    def vid(i, j):
        return i * n + j

    n_quads = n if strip.grid.periodic else n - 1
    tris = _emit_quads(vid, m, n_quads, lambda j: j % n)
    areas = _triangle_areas(vertices, tris)
    if areas.min() < DEGENERATE_AREA:
        bad = int(np.argmin(areas))
        i, j = divmod(bad // 2, n_quads)
        raise MeshError(f"degenerate quad at row {i}, column {j}")
    return SurfaceMesh(vertices.copy(), normals.copy(), tris, dict(metadata or {}))


def mobius_glue(strip: SolutionStrip, period: float, involution_residual: float | None = None,
                residual_threshold: float = 1e-6, metadata: dict | None = None) -> SurfaceMesh:
    """Mesh one fundamental period of half-turn data.

    The strip must cover the double period on a periodic grid; column
    s = T is identified with column s = 0 traversed with t reversed.
    Callers should verify the gluing identity first and pass its residual;
    gluing is refused when it exceeds the threshold.
    """
    if involution_residual is not None and involution_residual > residual_threshold:
        raise MeshError(
            f"refusing to glue: involution residual {involution_residual:.3e} exceeds {residual_threshold:.0e}")
    g = strip.grid
    if not g.periodic:
        raise MeshError("half-turn gluing needs the periodic double-cover grid")
    k = g.shift_index(period)
    if 2 * k != g.n:
        raise MeshError("period must be half of the solved double cover")
    m = strip.n_t

    vertices = strip.psi[:, :k].reshape(m * k, 3)
    normals = strip.eta[:, :k].reshape(m * k, 3)

    def vid(i, j):
        if j < k:
            return i * k + j
        return (m - 1 - i) * k  # column T == column 0 with t reversed

    tris = _emit_quads(vid, m, k, lambda j: j)
    areas = _triangle_areas(vertices, tris)
    if areas.min() < DEGENERATE_AREA:
        raise MeshError("degenerate quad in glued band")
    return SurfaceMesh(vertices.copy(), normals.copy(), tris, dict(metadata or {}))


# --------------------------------------------------------------------------
# Topology helpers

def _edge_uses(triangles):
    """Map undirected edge -> list of (triangle index, oriented as stored?)."""
    uses: dict = {}
    for f, tri in enumerate(triangles):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            uses.setdefault(key, []).append((f, a < b))
    return uses


def boundary_loops(mesh: SurfaceMesh) -> int:
    """Number of closed boundary curves (edges used by exactly one triangle)."""
    uses = _edge_uses(mesh.triangles)
    boundary = [e for e, u in uses.items() if len(u) == 1]
    if not boundary:
        return 0
    adj: dict = {}
    for a, b in boundary:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = set()
    loops = 0
    for start in adj:
        if start in seen:
            continue
        loops += 1
        stack = [start]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(w for w in adj[v] if w not in seen)
    return loops


def is_orientable(mesh: SurfaceMesh) -> bool:
    """Try to propagate a consistent winding across shared edges."""
    uses = _edge_uses(mesh.triangles)
    n_f = mesh.n_triangles
    flip = np.full(n_f, -1, dtype=int)  # -1 unvisited, else 0/1
    neighbors: dict = {}
    for edge, u in uses.items():
        if len(u) > 2:
            raise MeshError("non-manifold edge")
        if len(u) == 2:
            (f1, o1), (f2, o2) = u
            # consistently wound triangles traverse a shared edge oppositely;
            # equal direction means one of the two must flip
            neighbors.setdefault(f1, []).append((f2, o1 == o2))
            neighbors.setdefault(f2, []).append((f1, o1 == o2))
    for seed in range(n_f):
        if flip[seed] != -1:
            continue
        flip[seed] = 0
        stack = [seed]
        while stack:
            f = stack.pop()
            for g, needs_flip in neighbors.get(f, ()):
                want = flip[f] ^ int(needs_flip)
                if flip[g] == -1:
                    flip[g] = want
                    stack.append(g)
                elif flip[g] != want:
                    return False
    return True


def euler_characteristic(mesh: SurfaceMesh) -> int:
    uses = _edge_uses(mesh.triangles)
    used = np.unique(mesh.triangles)
    return int(len(used) - len(uses) + mesh.n_triangles)


# --------------------------------------------------------------------------
# Writers (ASCII, 17 significant digits, byte-stable)

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_obj(mesh: SurfaceMesh, path) -> None:
    if mesh.n_triangles == 0 or mesh.n_vertices == 0:
        raise MeshError("refusing to write an empty mesh")
    lines = []
    for key in sorted(mesh.metadata):
        lines.append(f"# {key}={mesh.metadata[key]}")
    for v in mesh.vertices:
        lines.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    for nrm in mesh.normals:
        lines.append(f"vn {_fmt(nrm[0])} {_fmt(nrm[1])} {_fmt(nrm[2])}")
    for tri in mesh.triangles:
        a, b, c = (int(i) + 1 for i in tri)
        lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_ply(mesh: SurfaceMesh, path) -> None:
    if mesh.n_triangles == 0 or mesh.n_vertices == 0:
        raise MeshError("refusing to write an empty mesh")
    lines = [
        "ply",
        "format ascii 1.0",
    ]
    for key in sorted(mesh.metadata):
        lines.append(f"comment {key}={mesh.metadata[key]}")
    lines += [
        f"element vertex {mesh.n_vertices}",
        "property double x", "property double y", "property double z",
        "property double nx", "property double ny", "property double nz",
        f"element face {mesh.n_triangles}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    for v, nrm in zip(mesh.vertices, mesh.normals):
        lines.append(" ".join(_fmt(c) for c in (*v, *nrm)))
    for tri in mesh.triangles:
        lines.append(f"3 {int(tri[0])} {int(tri[1])} {int(tri[2])}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
