#pragma once
// JSON and CSV formats. Parse failures and schema violations throw InvalidInput.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpd/saddle.hpp"
#include "cpd/snl.hpp"

namespace cpd {

// { "n", "m", "A", "f", "lambda": [{"A", "b"}...], "targets", "weights" }
CanonicalProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const CanonicalProblem& problem);

// { "dim", "anchors", "n_sensors", "sensor_edges": [[i, j, d]...],
//   "anchor_edges": [[i, k, e]...], "sigma", "radio_range", "true_positions"? }
SNLInstance snl_from_json(const nlohmann::json& j);
nlohmann::json snl_to_json(const SNLInstance& inst);

nlohmann::json result_to_json(const SaddleResult& r);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

// Columns iter, rho, mu, xi, primal, dual, step_x, step_s, min_eig_G,
// canonical_residual; 17 significant digits.
void write_history_csv(std::ostream& os, const std::vector<IterationRecord>& history);

// Columns sensor_index, est_x, est_y[, est_z], then true_* and error when the
// truth is given.
void write_positions_csv(std::ostream& os, const Positions& estimated,
                         const std::optional<Positions>& truth);

}  // namespace cpd
