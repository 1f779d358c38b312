#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "nns/asymptotics.hpp"
#include "nns/event_sim.hpp"
#include "nns/experiment.hpp"

namespace nns {

// CSV files start with `# master_seed=<seed>` and a header row. Floats are
// written with 17 significant digits, '.' as decimal separator, no locale.

std::string format_double(double x);

void write_points_csv(std::ostream& os, const PointSet& ps, std::uint64_t master_seed);
/// Reads `index,x1..xd` rows (comment lines and the header are skipped).
PointSet read_points_csv(std::istream& is);

void write_edges_csv(std::ostream& os, const KnnGraph& g, std::uint64_t master_seed);
void write_degrees_csv(std::ostream& os, const KnnGraph& g, std::uint64_t master_seed);
void write_histogram_csv(std::ostream& os, const ReplicationSummary& s, std::uint64_t master_seed);
void write_spatial_csv(std::ostream& os, const std::vector<SpatialRow>& rows, double mu, std::uint64_t master_seed);
void write_rates_csv(std::ostream& os, const EventSimResult& r, std::uint64_t master_seed);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const ReplicationSummary& s);
nlohmann::json to_json(const CltDiagnostics& d);
nlohmann::json to_json(const ConstantsTable& t);

/// Parses a config document. Unknown keys are rejected; absent keys keep
/// their defaults. Throws ConfigError naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

}  // namespace nns
