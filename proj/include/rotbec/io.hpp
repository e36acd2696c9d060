#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "rotbec/asymptotics.hpp"
#include "rotbec/gp.hpp"
#include "rotbec/potential.hpp"
#include "rotbec/tf.hpp"
#include "rotbec/trial.hpp"

namespace rotbec::io {

// Doubles are serialized with 17 significant digits so repeat runs are
// byte-identical and round-trips are exact.
std::string format_double(double v);

nlohmann::json to_json(const tf::Solution& sol);
tf::Solution tf_solution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EnergyBreakdown& e);

nlohmann::json to_json(const TrapPotential& p);
TrapPotential potential_from_json(const nlohmann::json& j);

// Checkpoint record {n, box_radius, epsilon, omega, field: [re, im, ...]},
// row-major.
nlohmann::json to_json(const GpState& state);
GpState state_from_json(const nlohmann::json& j);

nlohmann::json provenance_json(const TrialState& trial);

nlohmann::json to_json(const SweepReport& rep);
void write_sweep_csv(const SweepReport& rep, std::ostream& os);

void write_tf_profile_csv(const tf::Solution& sol, int points,
                          std::ostream& os);
void write_density_slice_csv(const GpState& state, std::ostream& os);

void save_text(const std::string& path, const std::string& contents);

}  // namespace rotbec::io
