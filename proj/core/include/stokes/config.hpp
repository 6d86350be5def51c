#pragma once

#include "stokes/solver.hpp"
#include "stokes/validation.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace stokes {

/// Run configuration: flat key=value pairs under [section] headers, '#'
/// comments. Unknown sections or keys are rejected.
struct RunConfig {
  // [geometry]
  double L = 2.0;
  double H = 1.0;
  int nx = 64;
  int ny = 32;
  DiagonalPattern pattern = DiagonalPattern::uniform;
  std::string mesh_file;  // overrides the rectangle when set

  // [partition]
  std::set<int> dirichlet_tags = {3, 4};

  // [physics] -- f, g, h as preset token lists
  double mu = 1.0;
  std::vector<std::string> f_spec = {"zero"};
  std::vector<std::string> g_spec = {"normal_stress", "1", "0"};
  std::vector<std::string> h_spec = {"zero"};

  // [solver]
  SolverOptions solver;

  // [output]
  std::string out_dir = "out";
  std::set<std::string> formats = {"vtk", "report"};
  std::optional<Vec2> probe;

  // [constants]
  std::vector<std::string> quantities = {"korn3", "infsup", "lambda1"};
  int levels = 3;
  int base_nx = 8;
  int base_ny = 4;

  // [asymptotics]
  std::vector<double> heights = {0.5, 0.25, 0.125};
  int asym_ny = 16;

  // [validate]
  int val_nx = 64;
  int val_ny = 32;
  int samples_x = 32;
  int samples_y = 16;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_stream(std::istream& in);

/// Materialized problem pieces: the owned mesh plus the partition and data
/// fields resolved from the presets.
struct ProblemSetup {
  TriMesh mesh;
  BoundaryPartition partition;
  double mu;
  VectorField f;
  TractionField g;
  VectorField h;
};

ProblemSetup make_problem(const RunConfig& config);

/// Channel parameters implied by the configured geometry/physics and the
/// preset arguments (used by the poiseuille presets and validate).
ChannelParams channel_params(const RunConfig& config);

}  // namespace stokes
