#include "dgviv/vtk.hpp"

#include "dgviv/dg_core.hpp"
#include "dgviv/verify.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace dgviv {

std::vector<std::array<int, 3>> lattice_triangles(const NodeSet& nodes) {
  const int p = nodes.p;
  const auto& l = nodes.lattice;
  std::vector<std::array<int, 3>> tris;
  tris.reserve(p * p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i + j < p; ++i) {
      tris.push_back({l[i][j], l[i + 1][j], l[i][j + 1]});
      if (i + j < p - 1) tris.push_back({l[i + 1][j], l[i + 1][j + 1], l[i][j + 1]});
    }
  return tris;
}

void write_vtk(const StateField& field, const Mesh& mesh, const OperatorTables& tables,
               const GasParams& gas, const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!file) throw Error("cannot write '" + path + "'");
  std::FILE* out = file.get();
  const int np = tables.n_p;
  const int ne = mesh.num_elements();
  const auto sub = lattice_triangles(tables.nodes);
  const long npts = static_cast<long>(np) * ne;
  const long ncells = static_cast<long>(sub.size()) * ne;

  std::fprintf(out, "# vtk DataFile Version 3.0\ndgviv field t=%.17g\nASCII\n", field.t);
  std::fprintf(out, "DATASET UNSTRUCTURED_GRID\nPOINTS %ld double\n", npts);
  for (int k = 0; k < ne; ++k)
    for (int i = 0; i < np; ++i) {
      const Vec2 x = mesh.map_to_physical(k, tables.nodes.points.row(i).transpose());
      std::fprintf(out, "%.17g %.17g 0\n", x.x(), x.y());
    }
  std::fprintf(out, "CELLS %ld %ld\n", ncells, 4 * ncells);
  for (int k = 0; k < ne; ++k)
    for (const auto& t : sub)
      std::fprintf(out, "3 %ld %ld %ld\n", static_cast<long>(k) * np + t[0],
                   static_cast<long>(k) * np + t[1], static_cast<long>(k) * np + t[2]);
  std::fprintf(out, "CELL_TYPES %ld\n", ncells);
  for (long c = 0; c < ncells; ++c) std::fprintf(out, "5\n");

  const Matrix grad = broken_gradient(field, mesh, tables);
  const Vector omega = vorticity_field(field, grad);
  std::fprintf(out, "POINT_DATA %ld\n", npts);
  const char* names[] = {"rho", "u", "v", "p"};
  for (int var = 0; var < 4; ++var) {
    std::fprintf(out, "SCALARS %s double 1\nLOOKUP_TABLE default\n", names[var]);
    for (long i = 0; i < npts; ++i) {
      const State u = field.u.row(i).transpose();
      double value = 0.0;
      switch (var) {
        case 0:
          value = u(0);
          break;
        case 1:
          value = u(1) / u(0);
          break;
        case 2:
          value = u(2) / u(0);
          break;
        default:
          value = (gas.gamma - 1.0) * (u(3) - 0.5 * (u(1) * u(1) + u(2) * u(2)) / u(0));
      }
      std::fprintf(out, "%.17g\n", value);
    }
  }
  std::fprintf(out, "SCALARS vorticity double 1\nLOOKUP_TABLE default\n");
  for (long i = 0; i < npts; ++i) std::fprintf(out, "%.17g\n", omega(i));
  if (std::ferror(out)) throw Error("failed writing '" + path + "'");
}

VtkData read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  VtkData data;
  std::string token;
  long npts = 0;
  auto fail = [&](const std::string& what) { throw Error("malformed VTK file '" + path + "': " + what); };
  while (in >> token) {
    if (token == "POINTS") {
      std::string type;
      in >> npts >> type;
      data.points.resize(npts);
      for (auto& p : data.points)
        if (!(in >> p[0] >> p[1] >> p[2])) fail("points");
    } else if (token == "CELLS") {
      long n = 0, size = 0;
      in >> n >> size;
      data.triangles.resize(n);
      for (auto& t : data.triangles) {
        int count = 0;
        if (!(in >> count >> t[0] >> t[1] >> t[2]) || count != 3) fail("cells");
      }
    } else if (token == "CELL_TYPES") {
      long n = 0;
      in >> n;
      for (long i = 0; i < n; ++i) {
        int type = 0;
        if (!(in >> type) || type != 5) fail("cell types");
      }
    } else if (token == "SCALARS") {
      std::string name, type, lookup, table;
      int ncomp = 1;
      in >> name >> type >> ncomp >> lookup >> table;
      std::vector<double> values(npts);
      for (double& v : values)
        if (!(in >> v)) fail("scalars " + name);
      data.point_data[name] = std::move(values);
    }
  }
  return data;
}

}  // namespace dgviv
