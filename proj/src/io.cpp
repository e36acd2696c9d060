#include "rotbec/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace rotbec::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const tf::Solution& sol) {
  return {{"s", sol.s},         {"omega0", sol.omega0}, {"mu", sol.mu},
          {"r_in", sol.r_in},   {"r_out", sol.r_out},   {"energy", sol.energy}};
}

tf::Solution tf_solution_from_json(const nlohmann::json& j) {
  tf::Solution sol;
  sol.s = j.at("s").get<double>();
  sol.omega0 = j.at("omega0").get<double>();
  sol.mu = j.at("mu").get<double>();
  sol.r_in = j.at("r_in").get<double>();
  sol.r_out = j.at("r_out").get<double>();
  sol.energy = j.at("energy").get<double>();
  return sol;
}

nlohmann::json to_json(const EnergyBreakdown& e) {
  return {{"magnetic_kinetic", e.magnetic_kinetic},
          {"potential", e.potential},
          {"interaction", e.interaction},
          {"centrifugal", e.centrifugal},
          {"total", e.total}};
}

nlohmann::json to_json(const TrapPotential& p) {
  nlohmann::json j;
  j["kind"] =
      p.kind == TrapPotential::Kind::Homogeneous ? "homogeneous" : "general";
  j["s"] = p.s;
  if (p.kind == TrapPotential::Kind::General) {
    j["kappa"] = p.kappa;
    j["c"] = p.c;
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [coeff, expo] : p.terms)
      terms.push_back({coeff, expo});
    j["terms"] = terms;
  }
  return j;
}

TrapPotential potential_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double s = j.at("s").get<double>();
  if (kind == "homogeneous") return TrapPotential::homogeneous(s);
  if (kind != "general")
    throw std::invalid_argument("potential kind must be homogeneous|general");
  std::vector<std::pair<double, double>> terms;
  for (const auto& t : j.at("terms"))
    terms.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
  return TrapPotential::general(s, j.at("kappa").get<double>(),
                                j.at("c").get<double>(), std::move(terms));
}

nlohmann::json to_json(const GpState& state) {
  nlohmann::json j;
  j["n"] = state.grid.n;
  j["box_radius"] = state.grid.box_radius;
  j["epsilon"] = state.epsilon;
  j["omega"] = state.omega;
  std::vector<double> interleaved;
  interleaved.reserve(2 * state.field.size());
  for (const auto& v : state.field) {
    interleaved.push_back(v.real());
    interleaved.push_back(v.imag());
  }
  j["field"] = std::move(interleaved);
  return j;
}

GpState state_from_json(const nlohmann::json& j) {
  const Grid grid =
      make_grid(j.at("n").get<int>(), j.at("box_radius").get<double>());
  GpState st = make_state(grid, j.at("epsilon").get<double>(),
                          j.at("omega").get<double>());
  const auto& f = j.at("field");
  if (f.size() != 2 * grid.size())
    throw std::invalid_argument("checkpoint field length mismatch");
  for (std::size_t k = 0; k < grid.size(); ++k)
    st.field[k] = {f[2 * k].get<double>(), f[2 * k + 1].get<double>()};
  return st;
}

nlohmann::json provenance_json(const TrialState& trial) {
  return {{"delta", trial.lattice.delta},
          {"eta", trial.lattice.eta},
          {"N_eps", trial.lattice.count()},
          {"c_eps", std::sqrt(trial.c_eps_sq)}};
}

nlohmann::json to_json(const SweepReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"epsilon", r.epsilon},
                    {"e_tf", r.e_tf},
                    {"e_gp_scaled", r.e_gp_scaled},
                    {"gap", r.gap},
                    {"l2_dist", r.l2_dist},
                    {"tail_max", r.tail_max},
                    {"valid", r.valid},
                    {"iterations", r.iterations}});
  nlohmann::json j;
  j["rows"] = rows;
  j["model"] = rep.model;
  j["fit"] = {{"exponent", rep.gap_fit.exponent},
              {"stderr", rep.gap_fit.stderr_exponent},
              {"log_prefactor", rep.gap_fit.log_prefactor},
              {"degenerate", rep.gap_fit.degenerate}};
  j["target_exponent"] = rep.target_exponent;
  if (rep.alt_target_exponent)
    j["alt_target_exponent"] = *rep.alt_target_exponent;
  return j;
}

void write_sweep_csv(const SweepReport& rep, std::ostream& os) {
  os << "epsilon,e_tf,e_gp_scaled,gap,l2_dist,tail_max\n";
  for (const auto& r : rep.rows)
    os << format_double(r.epsilon) << ',' << format_double(r.e_tf) << ','
       << format_double(r.e_gp_scaled) << ',' << format_double(r.gap) << ','
       << format_double(r.l2_dist) << ',' << format_double(r.tail_max)
       << '\n';
}

void write_tf_profile_csv(const tf::Solution& sol, int points,
                          std::ostream& os) {
  os << "r,rho\n";
  const double r_max = 1.5 * sol.r_out;
  for (int i = 0; i < points; ++i) {
    const double r = r_max * i / (points - 1.0);
    os << format_double(r) << ',' << format_double(sol.density(r)) << '\n';
  }
}

void write_density_slice_csv(const GpState& state, std::ostream& os) {
  os << "x,density\n";
  const Grid& g = state.grid;
  const int iy = g.n / 2;
  for (int ix = 0; ix < g.n; ++ix)
    os << format_double(g.coord(ix)) << ','
       << format_double(state.density(g.index(ix, iy))) << '\n';
}

void save_text(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << contents;
}

}  // namespace rotbec::io
