#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trajlens/deviation.hpp"
#include "trajlens/dp_model.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/matrix_game.hpp"
#include "trajlens/stochastic_game.hpp"
#include "trajlens/trajectory.hpp"

namespace trajlens {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

std::vector<std::string> state_ids(const DpModel& model);
std::vector<std::string> state_ids(const ZsgModel& game);

// Attached to every JSON report so a verdict is reproducible from the
// report alone: tool version, the command line that produced it, the
// content hash of the model it ran on, and the numeric parameters.
struct Provenance {
  std::string tool_version;
  std::string command;
  std::string model_hash;
  std::vector<std::pair<std::string, std::string>> params;
};

// JSON documents (2-space indent, trailing newline). All of them carry
// "type" and "provenance" and validate against docs/report.schema.json.
std::string values_report_json(const std::vector<std::string>& ids,
                               const std::vector<std::vector<double>>& values_by_n,
                               const Provenance& prov);
std::string discounted_report_json(const std::vector<std::string>& ids, double lambda,
                                   const DiscountedResult& result,
                                   const Provenance& prov);
std::string preport_to_json(const PReport& report, const std::vector<std::string>& ids,
                            const Provenance& prov);
std::string plays_report_json(const DpModel& model, int start, int horizon, double eps,
                              double optimal_total, const EnumerationResult& result,
                              const Provenance& prov);
std::string game_report_json(const GameSolution& solution, int rows, int cols,
                             const Provenance& prov);
std::string probe_report_json(const std::vector<std::string>& ids,
                              const UniformProbe& probe, const Provenance& prov);
std::string regularity_report_json(const std::vector<std::string>& ids,
                                   const std::vector<double>& limit_estimate,
                                   const RegularityReport& report,
                                   const Provenance& prov);
std::string profile_eval_report_json(const std::string& start_id,
                                     const std::vector<double>& cumulative,
                                     const DeviationProfile& profile,
                                     const Provenance& prov);

// CSV forms. Check reports use exactly the columns
// horizon,state,t,deviation,epsilon,verdict with one row per
// (horizon, state, grid point); discounted checks put the effective
// truncation horizon in the horizon column and the per-row verdict is
// pass/fail for that horizon-state cell.
std::string values_report_csv(const std::vector<std::string>& ids,
                              const std::vector<std::vector<double>>& values_by_n);
std::string discounted_report_csv(const std::vector<std::string>& ids, double lambda,
                                  const DiscountedResult& result);
std::string preport_to_csv(const PReport& report, const std::vector<std::string>& ids);

}  // namespace trajlens
