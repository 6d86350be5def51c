#pragma once

#include "stokes/elements.hpp"

#include <array>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace stokes {

struct Edge {
  int v0, v1;              // endpoint vertex ids, v0 < v1
  std::array<int, 2> tri;  // adjacent triangles; tri[1] == -1 on the boundary
};

struct BoundaryEdge {
  int edge;     // index into TriMesh::edges()
  int tag;
  Vec2 normal;  // outward unit normal
};

/// Conforming triangulation of a polygon with tagged boundary edges.
/// Immutable after construction; safe for concurrent reads.
class TriMesh {
 public:
  /// Triangles must be counter-clockwise (strictly positive area). Every
  /// boundary edge must appear in boundary_tags exactly once, given as a
  /// vertex pair in either order. Throws std::invalid_argument when the
  /// element lists violate these invariants.
  TriMesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles,
          const std::vector<std::pair<std::array<int, 2>, int>>& boundary_tags);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_triangles() const { return static_cast<int>(triangles_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  /// Edge indices of triangle t; entry k is the edge opposite local vertex k.
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }

  double triangle_area(int t) const { return areas_[t]; }
  double total_area() const { return total_area_; }
  double edge_length(int e) const;
  double max_edge_length() const;
  double perimeter() const { return perimeter_; }

  std::set<int> boundary_tag_set() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<double> areas_;
  double total_area_ = 0.0;
  double perimeter_ = 0.0;
};

enum class DiagonalPattern {
  uniform,   // every cell split bottom-left -> top-right
  mirrored,  // lower half as uniform, upper half flipped; symmetric about y = H/2
};

/// Uniform nx-by-ny grid on (0,L) x (0,H), each cell split into two
/// triangles. Boundary tags: 1 (x=0), 2 (x=L), 3 (y=0), 4 (y=H).
/// The mirrored pattern requires even ny.
TriMesh build_rect_mesh(double L, double H, int nx, int ny,
                        DiagonalPattern pattern = DiagonalPattern::uniform);

/// Solvability regimes by boundary partition: pure Dirichlet (no traction
/// side), pure Neumann (no velocity side), and the mixed case.
enum class Regime { dirichlet, neumann, mixed };

const char* regime_name(Regime r);

struct BoundaryPartition {
  std::set<int> dirichlet_tags;
  std::set<int> neumann_tags;
  std::map<int, double> tag_measures;  // total edge length per tag
  double dirichlet_measure = 0.0;
  double neumann_measure = 0.0;
  Regime regime = Regime::mixed;
};

/// Splits the boundary tags into a Dirichlet set and its complement and
/// computes the edge-length measures. Throws std::invalid_argument for tags
/// not present on the mesh.
BoundaryPartition partition_boundary(const TriMesh& mesh, const std::set<int>& dirichlet_tags);

struct BoundaryQuadPoint {
  Vec2 point;
  double weight;
  Vec2 normal;
  int edge;  // mesh edge index
  int tag;
};

/// Gauss-Legendre points on every edge carrying the tag; weights sum to the
/// tagged side's length. order = points per edge, 1..5.
std::vector<BoundaryQuadPoint> boundary_quadrature(const TriMesh& mesh, int tag, int order);
std::vector<BoundaryQuadPoint> boundary_quadrature(const TriMesh& mesh, const std::set<int>& tags,
                                                   int order);

}  // namespace stokes
