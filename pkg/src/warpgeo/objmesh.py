"""Wavefront OBJ export of surface grids.

Vertices are written row-major in (u, v) grid order and each grid quad
is split into two triangles along the diagonal from its lower-left
corner, so identical inputs produce byte-identical files.  Coordinates
are ambient-chart coordinates, not an isometric embedding.
"""

from __future__ import annotations

import numpy as np

from .errors import MeshUnsupported


def surface_vertices(imm, u_values, v_values):
    """Ambient coordinates of the immersion over a (u, v) grid."""
    if imm.n != 2:
        raise MeshUnsupported(f"mesh export needs n = 2, got n = {imm.n}")
    rows = len(u_values)
    cols = len(v_values)
    out = np.zeros((rows, cols, 3))
    for i, u in enumerate(u_values):
        for j, v in enumerate(v_values):
            q = imm.ambient_point((float(u), float(v)))
            out[i, j] = (q.t, q.x[0], q.x[1])
    return out


def obj_lines(vertices):
    """OBJ text lines for a (rows, cols, 3) vertex grid."""
    rows, cols, _ = vertices.shape
    lines = []
    for i in range(rows):
        for j in range(cols):
            x, y, z = (float(v) for v in vertices[i, j])
            lines.append(f"v {x!r} {y!r} {z!r}")

    def vid(i, j):
        return i * cols + j + 1

    for i in range(rows - 1):
        for j in range(cols - 1):
            a = vid(i, j)
            b = vid(i + 1, j)
            c = vid(i + 1, j + 1)
            d = vid(i, j + 1)
            lines.append(f"f {a} {b} {c}")
            lines.append(f"f {a} {c} {d}")
    return lines


def write_obj(path, vertices):
    text = "\n".join(obj_lines(vertices)) + "\n"
    with open(path, "w") as handle:
        handle.write(text)
    return text
