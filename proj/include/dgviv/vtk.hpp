#pragma once

// Legacy ASCII VTK output of discontinuous nodal fields.

#include "dgviv/field.hpp"
#include "dgviv/mesh.hpp"
#include "dgviv/physics.hpp"
#include "dgviv/refelem.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace dgviv {

/// Canonical sub-triangulation of the nodal lattice of order p (p^2 triangles).
std::vector<std::array<int, 3>> lattice_triangles(const NodeSet& nodes);

/// Writes every element's nodes as separate points (no averaging across elements)
/// with point data rho, u, v, p and vorticity.
void write_vtk(const StateField& field, const Mesh& mesh, const OperatorTables& tables,
               const GasParams& gas, const std::string& path);

struct VtkData {
  std::vector<std::array<double, 3>> points;
  std::vector<std::array<int, 3>> triangles;
  std::map<std::string, std::vector<double>> point_data;
};

/// Reads files produced by write_vtk.
VtkData read_vtk(const std::string& path);

}  // namespace dgviv
