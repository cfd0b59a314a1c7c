#include "dgviv/mesh.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace dgviv {

namespace {

std::string expect_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw MeshError(std::string("malformed MSH file: unexpected end of file in ") + what);
}

void expect_end(std::istream& in, const std::string& section) {
  const std::string line = expect_line(in, section.c_str());
  if (line != "$End" + section) throw MeshError("malformed MSH file: missing $End" + section);
}

template <typename T>
T read_value(std::istringstream& ss, const char* what) {
  T v;
  if (!(ss >> v)) throw MeshError(std::string("malformed MSH file: bad ") + what);
  return v;
}

}  // namespace

Mesh parse_msh(const std::string& text) {
  std::istringstream in(text);
  std::map<int, std::string> physical_names;
  std::unordered_map<long, int> node_index;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::pair<std::array<int, 2>, BoundaryTag>> edges;
  bool have_format = false, have_nodes = false, have_elements = false;

  auto node = [&](long id) {
    auto it = node_index.find(id);
    if (it == node_index.end())
      throw MeshError("malformed MSH file: element references unknown node " + std::to_string(id));
    return it->second;
  };

  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "$MeshFormat") {
      std::istringstream ss(expect_line(in, "MeshFormat"));
      const std::string version = read_value<std::string>(ss, "format version");
      const int file_type = read_value<int>(ss, "file type");
      if (version.rfind("2.2", 0) != 0 || file_type != 0)
        throw MeshError("unsupported MSH format (need 2.2 ASCII)");
      expect_end(in, "MeshFormat");
      have_format = true;
    } else if (line == "$PhysicalNames") {
      std::istringstream ss(expect_line(in, "PhysicalNames"));
      const int n = read_value<int>(ss, "physical name count");
      for (int i = 0; i < n; ++i) {
        std::istringstream row(expect_line(in, "PhysicalNames"));
        read_value<int>(row, "physical dimension");
        const int tag = read_value<int>(row, "physical tag");
        std::string name;
        std::getline(row >> std::ws, name);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
          name = name.substr(1, name.size() - 2);
        physical_names[tag] = name;
      }
      expect_end(in, "PhysicalNames");
    } else if (line == "$Nodes") {
      std::istringstream ss(expect_line(in, "Nodes"));
      const int n = read_value<int>(ss, "node count");
      vertices.reserve(n);
      for (int i = 0; i < n; ++i) {
        std::istringstream row(expect_line(in, "Nodes"));
        const long id = read_value<long>(row, "node id");
        const double x = read_value<double>(row, "node coordinate");
        const double y = read_value<double>(row, "node coordinate");
        node_index[id] = static_cast<int>(vertices.size());
        vertices.emplace_back(x, y);
      }
      expect_end(in, "Nodes");
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_nodes) throw MeshError("malformed MSH file: $Elements before $Nodes");
      std::istringstream ss(expect_line(in, "Elements"));
      const int n = read_value<int>(ss, "element count");
      for (int i = 0; i < n; ++i) {
        std::istringstream row(expect_line(in, "Elements"));
        read_value<long>(row, "element id");
        const int type = read_value<int>(row, "element type");
        const int ntags = read_value<int>(row, "tag count");
        std::vector<int> tags(ntags);
        for (int& t : tags) t = read_value<int>(row, "element tag");
        if (type == 2) {
          std::array<int, 3> tri{};
          for (int& v : tri) v = node(read_value<long>(row, "triangle node"));
          triangles.push_back(tri);
        } else if (type == 1) {
          std::array<int, 2> e{};
          for (int& v : e) v = node(read_value<long>(row, "line node"));
          if (tags.empty()) throw MeshError("boundary line without physical tag");
          auto it = physical_names.find(tags[0]);
          const std::string name =
              it != physical_names.end() ? it->second : std::to_string(tags[0]);
          edges.push_back({e, boundary_tag_from_string(name)});
        } else if (type != 15) {
          throw MeshError("unsupported MSH element type " + std::to_string(type));
        }
      }
      expect_end(in, "Elements");
      have_elements = true;
    } else if (line.front() == '$') {
      // Unknown section: skip to its end marker.
      const std::string end = "$End" + line.substr(1);
      std::string skip;
      bool closed = false;
      while (std::getline(in, skip)) {
        if (!skip.empty() && skip.back() == '\r') skip.pop_back();
        if (skip == end) {
          closed = true;
          break;
        }
      }
      if (!closed) throw MeshError("malformed MSH file: unterminated section " + line);
    } else {
      throw MeshError("malformed MSH file: unexpected line '" + line + "'");
    }
  }
  if (!have_format || !have_nodes || !have_elements)
    throw MeshError("malformed MSH file: missing $MeshFormat, $Nodes or $Elements");
  return Mesh(std::move(vertices), std::move(triangles), edges);
}

Mesh load_msh(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw MeshError("cannot open mesh file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_msh(buffer.str());
}

}  // namespace dgviv
