#include "stokes/mesh.hpp"

#include "stokes/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stokes {

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
                 const std::vector<std::pair<std::array<int, 2>, int>>& boundary_tags)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = n_vertices();
  const int nt = n_triangles();
  if (nv < 3 || nt < 1) throw std::invalid_argument("TriMesh: empty vertex or triangle list");

  areas_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int k : triangles_[t]) {
      if (k < 0 || k >= nv) throw std::invalid_argument("TriMesh: vertex index out of range");
    }
    const auto& tri = triangles_[t];
    areas_[t] = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (!(areas_[t] > 0.0)) {
      throw std::invalid_argument("TriMesh: triangle " + std::to_string(t) +
                                  " is not counter-clockwise (signed area " +
                                  std::to_string(areas_[t]) + ")");
    }
    total_area_ += areas_[t];
  }

  // Edge table: local edge k of a triangle is the one opposite local vertex k.
  std::map<std::pair<int, int>, int> edge_ids;
  tri_edges_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[(k + 1) % 3];
      const int b = tri[(k + 2) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = edge_ids.find(key);
      if (it == edge_ids.end()) {
        const int id = static_cast<int>(edges_.size());
        edges_.push_back(Edge{key.first, key.second, {t, -1}});
        edge_ids.emplace(key, id);
        tri_edges_[t][k] = id;
      } else {
        Edge& e = edges_[it->second];
        if (e.tri[1] != -1) {
          throw std::invalid_argument("TriMesh: edge shared by more than two triangles");
        }
        e.tri[1] = t;
        tri_edges_[t][k] = it->second;
      }
    }
  }

  // Boundary tags must cover the boundary edges exactly.
  std::map<int, int> tag_of_edge;
  for (const auto& [pair, tag] : boundary_tags) {
    const std::pair<int, int> key{std::min(pair[0], pair[1]), std::max(pair[0], pair[1])};
    auto it = edge_ids.find(key);
    if (it == edge_ids.end()) {
      throw std::invalid_argument("TriMesh: boundary tag names a non-existent edge (" +
                                  std::to_string(pair[0]) + "," + std::to_string(pair[1]) + ")");
    }
    const Edge& e = edges_[it->second];
    if (e.tri[1] != -1) {
      throw std::invalid_argument("TriMesh: boundary tag names an interior edge");
    }
    if (!tag_of_edge.emplace(it->second, tag).second) {
      throw std::invalid_argument("TriMesh: boundary edge tagged twice");
    }
  }

  std::vector<int> boundary_count(nv, 0);
  for (int e = 0; e < n_edges(); ++e) {
    if (edges_[e].tri[1] != -1) continue;
    auto it = tag_of_edge.find(e);
    if (it == tag_of_edge.end()) {
      throw std::invalid_argument("TriMesh: untagged boundary edge (" +
                                  std::to_string(edges_[e].v0) + "," +
                                  std::to_string(edges_[e].v1) + ")");
    }
    const Vec2& a = vertices_[edges_[e].v0];
    const Vec2& b = vertices_[edges_[e].v1];
    const Vec2 tangent = b - a;
    Vec2 normal(tangent.y(), -tangent.x());
    normal.normalize();
    // Orient away from the adjacent triangle's centroid.
    const auto& tri = triangles_[edges_[e].tri[0]];
    const Vec2 centroid = (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
    const Vec2 mid = 0.5 * (a + b);
    if (normal.dot(mid - centroid) < 0.0) normal = -normal;
    boundary_edges_.push_back(BoundaryEdge{e, it->second, normal});
    perimeter_ += tangent.norm();
    ++boundary_count[edges_[e].v0];
    ++boundary_count[edges_[e].v1];
  }

  for (int v = 0; v < nv; ++v) {
    if (boundary_count[v] != 0 && boundary_count[v] != 2) {
      throw std::invalid_argument("TriMesh: boundary edges do not form closed loops at vertex " +
                                  std::to_string(v));
    }
  }
}

double TriMesh::edge_length(int e) const {
  return (vertices_[edges_[e].v1] - vertices_[edges_[e].v0]).norm();
}

double TriMesh::max_edge_length() const {
  double h = 0.0;
  for (int e = 0; e < n_edges(); ++e) h = std::max(h, edge_length(e));
  return h;
}

std::set<int> TriMesh::boundary_tag_set() const {
  std::set<int> tags;
  for (const auto& be : boundary_edges_) tags.insert(be.tag);
  return tags;
}

TriMesh build_rect_mesh(double L, double H, int nx, int ny, DiagonalPattern pattern) {
  if (!(L > 0.0) || !(H > 0.0)) {
    throw std::invalid_argument("build_rect_mesh: dimensions must be positive");
  }
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_rect_mesh: subdivision counts must be at least 1");
  }
  if (pattern == DiagonalPattern::mirrored && ny % 2 != 0) {
    throw std::invalid_argument("build_rect_mesh: mirrored pattern requires even ny");
  }

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.emplace_back(L * static_cast<double>(i) / nx, H * static_cast<double>(j) / ny);
    }
  }
  const auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c00 = vid(i, j), c10 = vid(i + 1, j);
      const int c01 = vid(i, j + 1), c11 = vid(i + 1, j + 1);
      const bool flip = pattern == DiagonalPattern::mirrored && j >= ny / 2;
      if (!flip) {
        triangles.push_back({c00, c10, c11});
        triangles.push_back({c00, c11, c01});
      } else {
        triangles.push_back({c00, c10, c01});
        triangles.push_back({c10, c11, c01});
      }
    }
  }

  std::vector<std::pair<std::array<int, 2>, int>> tags;
  for (int j = 0; j < ny; ++j) {
    tags.push_back({{vid(0, j), vid(0, j + 1)}, 1});
    tags.push_back({{vid(nx, j), vid(nx, j + 1)}, 2});
  }
  for (int i = 0; i < nx; ++i) {
    tags.push_back({{vid(i, 0), vid(i + 1, 0)}, 3});
    tags.push_back({{vid(i, ny), vid(i + 1, ny)}, 4});
  }

  return TriMesh(std::move(vertices), std::move(triangles), tags);
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::dirichlet: return "dirichlet";
    case Regime::neumann: return "neumann";
    case Regime::mixed: return "mixed";
  }
  return "?";
}

BoundaryPartition partition_boundary(const TriMesh& mesh, const std::set<int>& dirichlet_tags) {
  const std::set<int> all_tags = mesh.boundary_tag_set();
  for (int tag : dirichlet_tags) {
    if (!all_tags.count(tag)) {
      throw std::invalid_argument("partition_boundary: unknown boundary tag " +
                                  std::to_string(tag));
    }
  }

  BoundaryPartition part;
  part.dirichlet_tags = dirichlet_tags;
  for (int tag : all_tags) {
    if (!dirichlet_tags.count(tag)) part.neumann_tags.insert(tag);
    part.tag_measures[tag] = 0.0;
  }
  for (const auto& be : mesh.boundary_edges()) {
    part.tag_measures[be.tag] += mesh.edge_length(be.edge);
  }
  for (int tag : part.dirichlet_tags) part.dirichlet_measure += part.tag_measures[tag];
  for (int tag : part.neumann_tags) part.neumann_measure += part.tag_measures[tag];

  if (part.neumann_measure == 0.0) {
    part.regime = Regime::dirichlet;
  } else if (part.dirichlet_measure == 0.0) {
    part.regime = Regime::neumann;
  } else {
    part.regime = Regime::mixed;
  }
  return part;
}

std::vector<BoundaryQuadPoint> boundary_quadrature(const TriMesh& mesh, int tag, int order) {
  return boundary_quadrature(mesh, std::set<int>{tag}, order);
}

std::vector<BoundaryQuadPoint> boundary_quadrature(const TriMesh& mesh, const std::set<int>& tags,
                                                   int order) {
  const std::set<int> all_tags = mesh.boundary_tag_set();
  for (int tag : tags) {
    if (!all_tags.count(tag)) {
      throw std::invalid_argument("boundary_quadrature: unknown boundary tag " +
                                  std::to_string(tag));
    }
  }
  const auto nodes = gauss_legendre_nodes(order);
  const auto weights = gauss_legendre_weights(order);

  std::vector<BoundaryQuadPoint> points;
  for (const auto& be : mesh.boundary_edges()) {
    if (!tags.count(be.tag)) continue;
    const Edge& e = mesh.edges()[be.edge];
    const Vec2& a = mesh.vertices()[e.v0];
    const Vec2& b = mesh.vertices()[e.v1];
    const double len = (b - a).norm();
    for (int q = 0; q < order; ++q) {
      const double s = 0.5 * (nodes[q] + 1.0);
      points.push_back(BoundaryQuadPoint{a + s * (b - a), 0.5 * len * weights[q], be.normal,
                                         be.edge, be.tag});
    }
  }
  return points;
}

}  // namespace stokes
