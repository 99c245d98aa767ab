// File formats shared with the CLI:
//  - network documents {"nodes", "edges", "matching", "pinned", "x"}
//  - trajectory CSV "t,x_0,...,x_{N-1}"
//  - linear-model and spectrum-report JSON dumps
// CSV numbers use '.' decimals and 17 significant digits so 64-bit floats
// round-trip exactly.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "bargain/dynamics.hpp"
#include "bargain/graph.hpp"
#include "bargain/linear_model.hpp"
#include "bargain/spectral.hpp"

namespace bargain {

struct NetworkBundle {
  ExchangeNetwork network;
  Matching matching;
  std::optional<ProfitState> x;
};

// Throws Error(parse_error) on malformed documents (missing fields, wrong
// types, out-of-range indices).
NetworkBundle network_from_json(const nlohmann::json& doc);
NetworkBundle load_network(const std::string& path);
nlohmann::json network_to_json(const NetworkBundle& bundle);

std::string format_double(double v);  // %.17g

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

nlohmann::json model_to_json(const LinearModel& model);
nlohmann::json spectrum_to_json(const SpectrumReport& report);
nlohmann::json outcome_to_json(const OutcomeCheckReport& report);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace bargain
