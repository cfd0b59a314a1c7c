#pragma once

#include "dgviv/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace dgviv {

enum class BoundaryTag { Interior, Wall, Farfield };

std::string to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(const std::string& name);

struct Face {
  int left = -1;        // element on the side the normal points away from (lower index)
  int left_face = -1;   // local face index in `left`
  int right = -1;       // -1 on the boundary
  int right_face = -1;
  BoundaryTag tag = BoundaryTag::Interior;
  Vec2 normal = Vec2::Zero();  // unit, outward from `left`
  double length = 0.0;

  bool is_boundary() const { return right < 0; }
};

/// Affine geometry of one triangle. Jacobian is d(x,y)/d(r,s), constant per element.
struct ElementGeometry {
  std::array<int, 3> vertices{};
  std::array<int, 3> faces{};  // global face index of local face f
  double area = 0.0;
  double inradius = 0.0;
  Mat2 jacobian = Mat2::Zero();
  Mat2 jacobian_inv = Mat2::Zero();  // d(r,s)/d(x,y)
  double det_j = 0.0;

  double rx() const { return jacobian_inv(0, 0); }
  double ry() const { return jacobian_inv(0, 1); }
  double sx() const { return jacobian_inv(1, 0); }
  double sy() const { return jacobian_inv(1, 1); }
};

/// Conforming affine triangle mesh with face connectivity.
class Mesh {
 public:
  Mesh() = default;
  /// Builds geometry and connectivity. Boundary edges are looked up in `edge_tags`
  /// (pairs of vertex indices, any order). Throws MeshError on untagged or
  /// non-conforming boundaries.
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
       const std::vector<std::pair<std::array<int, 2>, BoundaryTag>>& edge_tags);

  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }
  const ElementGeometry& element(int k) const { return elements_[k]; }
  const std::vector<ElementGeometry>& elements() const { return elements_; }

  /// Outward unit normal of local face f of element k.
  Vec2 outward_normal(int k, int f) const;
  /// Physical point of reference coordinates (r, s) in element k.
  Vec2 map_to_physical(int k, const Vec2& rs) const;
  /// Reference coordinates of physical point x in element k.
  Vec2 map_to_reference(int k, const Vec2& x) const;
  /// Element containing x, or -1.
  int locate(const Vec2& x, double tol = 1e-12) const;

  /// Rigid translation of all vertices. Normals, lengths, areas and Jacobians are untouched.
  void translate(const Vec2& delta);
  /// Accumulated rigid displacement since construction.
  const Vec2& displacement() const { return displacement_; }
  /// Replaces vertex coordinates (restart); geometry is kept.
  void set_vertex_positions(std::vector<Vec2> vertices, const Vec2& displacement);

  /// Copy of the mesh with every boundary face retagged.
  Mesh with_boundary_tag(BoundaryTag tag) const;
  bool has_tag(BoundaryTag tag) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<ElementGeometry> elements_;
  std::vector<Face> faces_;
  Vec2 displacement_ = Vec2::Zero();
};

Mesh translated(const Mesh& mesh, const Vec2& delta);

/// Reads the Gmsh MSH 2.2 ASCII subset (triangles, tagged boundary lines).
Mesh load_msh(const std::string& path);
Mesh parse_msh(const std::string& text);

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

/// Structured triangulation of `domain` with nx*ny cells split along the
/// anti-diagonal. With `skew_layer`, row ny/2 is flattened to 1/8 of the regular
/// height (needs ny >= 2). All boundary edges get `tag`.
Mesh generate_structured(int nx, int ny, const Rect& domain, bool skew_layer = false,
                         BoundaryTag tag = BoundaryTag::Farfield);

}  // namespace dgviv
