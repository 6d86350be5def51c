#include "stokes/config.hpp"

#include "stokes/mesh_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stokes {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad numeric value '" + s + "' for " + key);
  }
}

int to_int(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer value '" + s + "' for " + key);
  }
}

}  // namespace

RunConfig parse_config_stream(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "geometry" && section != "partition" && section != "physics" &&
          section != "solver" && section != "output" && section != "constants" &&
          section != "asymptotics" && section != "validate") {
        throw std::invalid_argument("config: unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::vector<std::string> toks = tokens(value);
    const std::string qual = section + "." + key;

    if (section == "geometry") {
      if (key == "L") cfg.L = to_double(value, qual);
      else if (key == "H") cfg.H = to_double(value, qual);
      else if (key == "nx") cfg.nx = to_int(value, qual);
      else if (key == "ny") cfg.ny = to_int(value, qual);
      else if (key == "mesh_file") cfg.mesh_file = value;
      else if (key == "diagonal") {
        if (value == "uniform") cfg.pattern = DiagonalPattern::uniform;
        else if (value == "mirrored") cfg.pattern = DiagonalPattern::mirrored;
        else throw std::invalid_argument("config: diagonal must be uniform or mirrored");
      } else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "partition") {
      if (key == "dirichlet_tags") {
        cfg.dirichlet_tags.clear();
        for (const auto& t : toks) cfg.dirichlet_tags.insert(to_int(t, qual));
      } else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "physics") {
      if (key == "mu") cfg.mu = to_double(value, qual);
      else if (key == "f") cfg.f_spec = toks;
      else if (key == "g") cfg.g_spec = toks;
      else if (key == "h") cfg.h_spec = toks;
      else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "solver") {
      if (key == "tol") cfg.solver.tol = to_double(value, qual);
      else if (key == "method") {
        if (value == "direct") cfg.solver.method = SolveMethod::direct;
        else if (value == "minres") cfg.solver.method = SolveMethod::minres;
        else if (value == "auto") cfg.solver.method = SolveMethod::automatic;
        else throw std::invalid_argument("config: method must be direct, minres or auto");
      } else if (key == "max_iterations") cfg.solver.max_iterations = to_int(value, qual);
      else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "output") {
      if (key == "directory") cfg.out_dir = value;
      else if (key == "formats") cfg.formats = std::set<std::string>(toks.begin(), toks.end());
      else if (key == "probe") {
        if (toks.size() != 2) throw std::invalid_argument("config: probe needs two coordinates");
        cfg.probe = Vec2(to_double(toks[0], qual), to_double(toks[1], qual));
      } else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "constants") {
      if (key == "quantities") cfg.quantities = toks;
      else if (key == "levels") cfg.levels = to_int(value, qual);
      else if (key == "base_nx") cfg.base_nx = to_int(value, qual);
      else if (key == "base_ny") cfg.base_ny = to_int(value, qual);
      else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "asymptotics") {
      if (key == "heights") {
        cfg.heights.clear();
        for (const auto& t : toks) cfg.heights.push_back(to_double(t, qual));
      } else if (key == "ny") cfg.asym_ny = to_int(value, qual);
      else throw std::invalid_argument("config: unknown key " + qual);
    } else if (section == "validate") {
      if (key == "nx") cfg.val_nx = to_int(value, qual);
      else if (key == "ny") cfg.val_ny = to_int(value, qual);
      else if (key == "samples_x") cfg.samples_x = to_int(value, qual);
      else if (key == "samples_y") cfg.samples_y = to_int(value, qual);
      else throw std::invalid_argument("config: unknown key " + qual);
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any section");
    }
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  return parse_config_stream(in);
}

ChannelParams channel_params(const RunConfig& cfg) {
  ChannelParams params;
  params.L = cfg.L;
  params.H = cfg.H;
  params.mu = cfg.mu;
  // Preset arguments override the defaults when present.
  const auto pick = [](const std::vector<std::string>& spec, std::size_t i, double fallback) {
    return spec.size() > i ? std::stod(spec[i]) : fallback;
  };
  if (!cfg.g_spec.empty() &&
      (cfg.g_spec[0] == "normal_stress" || cfg.g_spec[0] == "poiseuille_traction")) {
    params.p_in = pick(cfg.g_spec, 1, params.p_in);
    params.p_out = pick(cfg.g_spec, 2, params.p_out);
  } else if (!cfg.h_spec.empty() && cfg.h_spec[0] == "poiseuille") {
    params.p_in = pick(cfg.h_spec, 1, params.p_in);
    params.p_out = pick(cfg.h_spec, 2, params.p_out);
  }
  return params;
}

ProblemSetup make_problem(const RunConfig& cfg) {
  TriMesh mesh = cfg.mesh_file.empty()
                     ? build_rect_mesh(cfg.L, cfg.H, cfg.nx, cfg.ny, cfg.pattern)
                     : read_mesh_text(cfg.mesh_file);
  BoundaryPartition partition = partition_boundary(mesh, cfg.dirichlet_tags);
  const ChannelParams chan = channel_params(cfg);

  VectorField f;
  if (cfg.f_spec.empty() || cfg.f_spec[0] == "zero") {
    f = nullptr;
  } else if (cfg.f_spec[0] == "constant" && cfg.f_spec.size() == 3) {
    const Vec2 v(std::stod(cfg.f_spec[1]), std::stod(cfg.f_spec[2]));
    f = [v](const Vec2&) { return v; };
  } else {
    throw std::invalid_argument("config: f preset must be 'zero' or 'constant fx fy'");
  }

  TractionField g;
  if (cfg.g_spec.empty() || cfg.g_spec[0] == "zero") {
    g = nullptr;
  } else if (cfg.g_spec[0] == "constant" && cfg.g_spec.size() == 3) {
    const Vec2 v(std::stod(cfg.g_spec[1]), std::stod(cfg.g_spec[2]));
    g = [v](const Vec2&, const Vec2&, int) { return v; };
  } else if (cfg.g_spec[0] == "normal_stress") {
    g = [chan](const Vec2&, const Vec2& n, int tag) {
      const double p = tag == 1 ? chan.p_in : tag == 2 ? chan.p_out : 0.0;
      return Vec2(-p * n.x(), -p * n.y());
    };
  } else if (cfg.g_spec[0] == "poiseuille_traction") {
    g = [chan](const Vec2& x, const Vec2& n, int) { return poiseuille_traction(x, n, chan); };
  } else {
    throw std::invalid_argument("config: unknown g preset '" + cfg.g_spec[0] + "'");
  }

  VectorField h;
  if (cfg.h_spec.empty() || cfg.h_spec[0] == "zero") {
    h = nullptr;
  } else if (cfg.h_spec[0] == "constant" && cfg.h_spec.size() == 3) {
    const Vec2 v(std::stod(cfg.h_spec[1]), std::stod(cfg.h_spec[2]));
    h = [v](const Vec2&) { return v; };
  } else if (cfg.h_spec[0] == "stretch" && cfg.h_spec.size() == 3) {
    // h = (cx x1, cy x2): carries net boundary flux (cx + cy) |Omega|.
    const Vec2 coef(std::stod(cfg.h_spec[1]), std::stod(cfg.h_spec[2]));
    h = [coef](const Vec2& x) { return Vec2(coef.x() * x.x(), coef.y() * x.y()); };
  } else if (cfg.h_spec[0] == "poiseuille") {
    h = [chan](const Vec2& x) { return poiseuille(x, chan).velocity; };
  } else {
    throw std::invalid_argument("config: unknown h preset '" + cfg.h_spec[0] + "'");
  }

  return ProblemSetup{std::move(mesh), std::move(partition), cfg.mu, std::move(f), std::move(g),
                      std::move(h)};
}

}  // namespace stokes
