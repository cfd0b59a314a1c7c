#!/usr/bin/env python3
"""Write a triangulated O-grid around a unit-diameter cylinder as Gmsh MSH 2.2 ASCII.

Radial spacing grows geometrically so that every quad is close to square
(log-polar grid); each quad is split into two triangles with alternating
diagonals. Physical groups: 1 "wall" (inner circle), 2 "farfield" (outer circle),
3 "fluid" (triangles).
"""

import argparse
import math


def build(n_theta, n_r, r_in):
    ratio = math.exp(2.0 * math.pi / n_theta)
    nodes = []
    for j in range(n_r + 1):
        r = r_in * ratio**j
        for i in range(n_theta):
            a = 2.0 * math.pi * i / n_theta
            nodes.append((r * math.cos(a), r * math.sin(a)))

    def vid(i, j):
        return j * n_theta + (i % n_theta) + 1

    triangles = []
    for j in range(n_r):
        for i in range(n_theta):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            if (i + j) % 2 == 0:
                triangles += [(a, b, c), (a, c, d)]
            else:
                triangles += [(a, b, d), (b, c, d)]
    wall = [(vid(i + 1, 0), vid(i, 0)) for i in range(n_theta)]
    farfield = [(vid(i, n_r), vid(i + 1, n_r)) for i in range(n_theta)]
    return nodes, triangles, wall, farfield


def write(path, nodes, triangles, wall, farfield):
    with open(path, "w") as f:
        f.write("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n")
        f.write('$PhysicalNames\n3\n1 1 "wall"\n1 2 "farfield"\n2 3 "fluid"\n$EndPhysicalNames\n')
        f.write(f"$Nodes\n{len(nodes)}\n")
        for k, (x, y) in enumerate(nodes, 1):
            f.write(f"{k} {x:.17g} {y:.17g} 0\n")
        f.write("$EndNodes\n")
        elems = [(1, 1, e) for e in wall] + [(1, 2, e) for e in farfield]
        elems += [(2, 3, t) for t in triangles]
        f.write(f"$Elements\n{len(elems)}\n")
        for k, (etype, tag, verts) in enumerate(elems, 1):
            f.write(f"{k} {etype} 2 {tag} {tag} {' '.join(map(str, verts))}\n")
        f.write("$EndElements\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("output")
    ap.add_argument("--n-theta", type=int, default=64)
    ap.add_argument("--n-r", type=int, default=34)
    ap.add_argument("--diameter", type=float, default=1.0)
    args = ap.parse_args()
    nodes, tris, wall, far = build(args.n_theta, args.n_r, 0.5 * args.diameter)
    write(args.output, nodes, tris, wall, far)
    r_out = math.hypot(*nodes[-1])
    print(f"{len(tris)} triangles, outer radius {r_out:.3f}")


if __name__ == "__main__":
    main()
