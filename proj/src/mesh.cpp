#include "dgviv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dgviv {

std::string to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Wall:
      return "wall";
    case BoundaryTag::Farfield:
      return "farfield";
    default:
      return "interior";
  }
}

BoundaryTag boundary_tag_from_string(const std::string& name) {
  if (name == "wall") return BoundaryTag::Wall;
  if (name == "farfield") return BoundaryTag::Farfield;
  throw MeshError("unknown boundary tag '" + name + "'");
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey make_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool point_inside_segment(const Vec2& x, const Vec2& a, const Vec2& b) {
  const Vec2 t = b - a;
  const double len2 = t.squaredNorm();
  const double s = (x - a).dot(t) / len2;
  if (s <= 1e-9 || s >= 1.0 - 1e-9) return false;
  return std::abs(cross(t, x - a)) <= 1e-9 * len2;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
           const std::vector<std::pair<std::array<int, 2>, BoundaryTag>>& edge_tags)
    : vertices_(std::move(vertices)) {
  if (triangles.empty()) throw MeshError("mesh has no triangles");
  const int nv = num_vertices();

  elements_.resize(triangles.size());
  for (std::size_t k = 0; k < triangles.size(); ++k) {
    auto tri = triangles[k];
    for (int v : tri)
      if (v < 0 || v >= nv) throw MeshError("triangle references unknown vertex");
    const Vec2& a = vertices_[tri[0]];
    double signed2 = cross(vertices_[tri[1]] - a, vertices_[tri[2]] - a);
    if (signed2 < 0.0) {
      std::swap(tri[1], tri[2]);
      signed2 = -signed2;
    }
    if (!(signed2 > 0.0)) throw MeshError("degenerate triangle " + std::to_string(k));

    ElementGeometry& g = elements_[k];
    g.vertices = tri;
    const Vec2& v1 = vertices_[tri[0]];
    const Vec2& v2 = vertices_[tri[1]];
    const Vec2& v3 = vertices_[tri[2]];
    g.area = 0.5 * signed2;
    const double perimeter = (v2 - v1).norm() + (v3 - v2).norm() + (v1 - v3).norm();
    g.inradius = 2.0 * g.area / perimeter;
    g.jacobian.col(0) = 0.5 * (v2 - v1);
    g.jacobian.col(1) = 0.5 * (v3 - v1);
    g.det_j = g.jacobian.determinant();
    g.jacobian_inv = g.jacobian.inverse();
  }

  std::map<EdgeKey, BoundaryTag> tag_of;
  for (const auto& [edge, tag] : edge_tags) tag_of[make_key(edge[0], edge[1])] = tag;

  std::map<EdgeKey, int> face_of;
  for (int k = 0; k < num_elements(); ++k) {
    ElementGeometry& g = elements_[k];
    for (int f = 0; f < 3; ++f) {
      const int a = g.vertices[f];
      const int b = g.vertices[(f + 1) % 3];
      const EdgeKey key = make_key(a, b);
      auto it = face_of.find(key);
      if (it == face_of.end()) {
        Face face;
        face.left = k;
        face.left_face = f;
        const Vec2 t = vertices_[b] - vertices_[a];
        face.length = t.norm();
        face.normal = Vec2(t.y(), -t.x()) / face.length;
        face_of.emplace(key, num_faces());
        g.faces[f] = num_faces();
        faces_.push_back(face);
      } else {
        Face& face = faces_[it->second];
        if (face.right >= 0)
          throw MeshError("non-conforming mesh: edge shared by more than two triangles");
        face.right = k;
        face.right_face = f;
        g.faces[f] = it->second;
      }
    }
  }

  for (auto& [key, index] : face_of) {
    Face& face = faces_[index];
    if (!face.is_boundary()) continue;
    for (int v = 0; v < nv; ++v)
      if (point_inside_segment(vertices_[v], vertices_[key.first], vertices_[key.second]))
        throw MeshError("non-conforming mesh (hanging node " + std::to_string(v) + ")");
    auto it = tag_of.find(key);
    if (it == tag_of.end()) {
      throw MeshError("untagged boundary edge (" + std::to_string(key.first) + ", " +
                      std::to_string(key.second) + ")");
    }
    if (it->second == BoundaryTag::Interior)
      throw MeshError("boundary edge tagged as interior");
    face.tag = it->second;
  }
}

Vec2 Mesh::outward_normal(int k, int f) const {
  const Face& face = faces_[elements_[k].faces[f]];
  return face.left == k && face.left_face == f ? face.normal : Vec2(-face.normal);
}

Vec2 Mesh::map_to_physical(int k, const Vec2& rs) const {
  const ElementGeometry& g = elements_[k];
  return vertices_[g.vertices[0]] + g.jacobian * (rs + Vec2(1.0, 1.0));
}

Vec2 Mesh::map_to_reference(int k, const Vec2& x) const {
  const ElementGeometry& g = elements_[k];
  return g.jacobian_inv * (x - vertices_[g.vertices[0]]) - Vec2(1.0, 1.0);
}

int Mesh::locate(const Vec2& x, double tol) const {
  for (int k = 0; k < num_elements(); ++k) {
    const Vec2 rs = map_to_reference(k, x);
    if (rs.x() >= -1.0 - tol && rs.y() >= -1.0 - tol && rs.x() + rs.y() <= tol) return k;
  }
  return -1;
}

void Mesh::translate(const Vec2& delta) {
  for (Vec2& v : vertices_) v += delta;
  displacement_ += delta;
}

void Mesh::set_vertex_positions(std::vector<Vec2> vertices, const Vec2& displacement) {
  if (vertices.size() != vertices_.size()) throw MeshError("vertex count mismatch on restart");
  vertices_ = std::move(vertices);
  displacement_ = displacement;
}

Mesh Mesh::with_boundary_tag(BoundaryTag tag) const {
  Mesh copy = *this;
  for (Face& f : copy.faces_)
    if (f.is_boundary()) f.tag = tag;
  return copy;
}

bool Mesh::has_tag(BoundaryTag tag) const {
  return std::any_of(faces_.begin(), faces_.end(),
                     [tag](const Face& f) { return f.is_boundary() && f.tag == tag; });
}

Mesh translated(const Mesh& mesh, const Vec2& delta) {
  Mesh copy = mesh;
  copy.translate(delta);
  return copy;
}

Mesh generate_structured(int nx, int ny, const Rect& domain, bool skew_layer, BoundaryTag tag) {
  if (nx < 1 || ny < 1) throw MeshError("structured mesh needs nx, ny >= 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
    throw MeshError("degenerate rectangle");
  if (skew_layer && ny < 2) throw MeshError("skew layer needs ny >= 2");

  std::vector<double> xs(nx + 1), ys(ny + 1);
  for (int i = 0; i <= nx; ++i) xs[i] = domain.x0 + (domain.x1 - domain.x0) * i / nx;
  if (!skew_layer) {
    for (int j = 0; j <= ny; ++j) ys[j] = domain.y0 + (domain.y1 - domain.y0) * j / ny;
  } else {
    const int flat = ny / 2;
    const double h = (domain.y1 - domain.y0) / (ny - 1 + 0.1);
    ys[0] = domain.y0;
    for (int j = 0; j < ny; ++j) ys[j + 1] = ys[j] + (j == flat ? 0.1 * h : h);
    ys[ny] = domain.y1;
  }

  std::vector<Vec2> vertices;
  vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(xs[i], ys[j]);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      tris.push_back({a, b, d});
      tris.push_back({b, c, d});
    }
  }

  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> edges;
  for (int i = 0; i < nx; ++i) {
    edges.push_back({{id(i, 0), id(i + 1, 0)}, tag});
    edges.push_back({{id(i, ny), id(i + 1, ny)}, tag});
  }
  for (int j = 0; j < ny; ++j) {
    edges.push_back({{id(0, j), id(0, j + 1)}, tag});
    edges.push_back({{id(nx, j), id(nx, j + 1)}, tag});
  }
  return Mesh(std::move(vertices), std::move(tris), edges);
}

}  // namespace dgviv
