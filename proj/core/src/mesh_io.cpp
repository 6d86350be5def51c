#include "stokes/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stokes {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_mesh_vtk(const TriMesh& mesh, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "triangular mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices()) {
    out << num(v.x()) << ' ' << num(v.y()) << " 0\n";
  }
  out << "CELLS " << mesh.n_triangles() << ' ' << 4 * mesh.n_triangles() << '\n';
  for (const auto& t : mesh.triangles()) {
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  out << "CELL_TYPES " << mesh.n_triangles() << '\n';
  for (int t = 0; t < mesh.n_triangles(); ++t) out << "5\n";
}

void write_mesh_text(const TriMesh& mesh, const std::string& path) {
  std::ofstream out = open_out(path);
  out << mesh.n_vertices() << ' ' << mesh.n_triangles() << ' '
      << mesh.boundary_edges().size() << '\n';
  for (const auto& v : mesh.vertices()) out << num(v.x()) << ' ' << num(v.y()) << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& be : mesh.boundary_edges()) {
    const Edge& e = mesh.edges()[be.edge];
    out << e.v0 << ' ' << e.v1 << ' ' << be.tag << '\n';
  }
}

TriMesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);

  int nv = 0, nt = 0, nb = 0;
  if (!(in >> nv >> nt >> nb)) throw std::runtime_error("mesh file: bad counts line");

  std::vector<Vec2> vertices(nv);
  for (int i = 0; i < nv; ++i) {
    double x, y;
    if (!(in >> x >> y)) throw std::runtime_error("mesh file: bad vertex line");
    vertices[i] = Vec2(x, y);
  }
  std::vector<std::array<int, 3>> triangles(nt);
  for (int t = 0; t < nt; ++t) {
    if (!(in >> triangles[t][0] >> triangles[t][1] >> triangles[t][2])) {
      throw std::runtime_error("mesh file: bad triangle line");
    }
  }
  std::vector<std::pair<std::array<int, 2>, int>> tags(nb);
  for (int b = 0; b < nb; ++b) {
    if (!(in >> tags[b].first[0] >> tags[b].first[1] >> tags[b].second)) {
      throw std::runtime_error("mesh file: bad boundary line");
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles), tags);
}

}  // namespace stokes
