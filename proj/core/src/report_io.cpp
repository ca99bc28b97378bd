#include "trajlens/report_io.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

namespace trajlens {

namespace {

using nlohmann::json;

json provenance_json(const Provenance& prov) {
  json params = json::object();
  for (const auto& [k, v] : prov.params) params[k] = v;
  return json{{"tool", {{"name", "trajlens"}, {"version", prov.tool_version}}},
              {"command", prov.command},
              {"model_hash", prov.model_hash},
              {"params", params}};
}

json state_value_rows(const std::vector<std::string>& ids,
                      const std::vector<double>& values) {
  json rows = json::array();
  for (size_t s = 0; s < ids.size(); ++s)
    rows.push_back({{"state", ids[s]}, {"value", values[s]}});
  return rows;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json play_states(const DpModel& model, const Play& play) {
  json states = json::array();
  for (int s : play.sequence) states.push_back(model.state(s).id);
  return states;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

std::vector<std::string> state_ids(const DpModel& model) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) ids.push_back(model.state(s).id);
  return ids;
}

std::vector<std::string> state_ids(const ZsgModel& game) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<size_t>(game.num_states()));
  for (int s = 0; s < game.num_states(); ++s) ids.push_back(game.state(s).id);
  return ids;
}

std::string values_report_json(const std::vector<std::string>& ids,
                               const std::vector<std::vector<double>>& values_by_n,
                               const Provenance& prov) {
  json rows = json::array();
  for (size_t n = 0; n < values_by_n.size(); ++n)
    for (size_t s = 0; s < ids.size(); ++s)
      rows.push_back({{"n", n + 1}, {"state", ids[s]}, {"value", values_by_n[n][s]}});
  return dump(json{{"type", "values"},
                   {"horizon", values_by_n.size()},
                   {"rows", rows},
                   {"provenance", provenance_json(prov)}});
}

std::string discounted_report_json(const std::vector<std::string>& ids, double lambda,
                                   const DiscountedResult& result,
                                   const Provenance& prov) {
  return dump(json{{"type", "discounted-values"},
                   {"lambda", lambda},
                   {"iterations", result.iterations},
                   {"residual", result.residual},
                   {"values", state_value_rows(ids, result.values)},
                   {"provenance", provenance_json(prov)}});
}

std::string preport_to_json(const PReport& report, const std::vector<std::string>& ids,
                            const Provenance& prov) {
  const bool discounted = report.kind == PReport::Kind::kDiscounted;
  json rows = json::array();
  for (const CheckRow& row : report.rows) {
    json r{{"horizon", row.horizon},
           {"state", ids[static_cast<size_t>(row.state)]},
           {"plays_examined", row.plays_examined},
           {"truncated", row.truncated},
           {"sup_deviation", row.sup_dev},
           {"inf_deviation", row.inf_dev},
           {"sup_t", row.sup_t},
           {"inf_t", row.inf_t},
           {"grid_deviation", row.grid_dev},
           {"pass", row.pass}};
    if (discounted) r["lambda"] = row.lambda;
    rows.push_back(std::move(r));
  }

  json starts = json::array();
  for (int s : report.starts) starts.push_back(ids[static_cast<size_t>(s)]);

  json doc{{"type", discounted ? "pprime-report" : "p-report"},
           {"kind", discounted ? "discounted" : "average"},
           {"verdict", report.verdict},
           {"epsilon", report.epsilon},
           {"grid", report.grid},
           {"starts", starts},
           {"reference", state_value_rows(ids, report.reference)},
           {"rows", rows},
           {"partial_coverage", report.partial_coverage},
           {"provenance", provenance_json(prov)}};
  if (discounted) {
    doc["lambdas"] = report.lambdas;
    doc["coverage_margin"] = report.coverage_margin;
    if (report.verdict == "HOLDS") doc["lambda0"] = report.lambda0;
  } else {
    doc["horizons"] = report.horizons;
    if (report.verdict == "HOLDS") doc["n0"] = report.n0;
  }
  if (report.witness) {
    const Witness& w = *report.witness;
    json states = json::array();
    for (int s : w.play.sequence) states.push_back(ids[static_cast<size_t>(s)]);
    json wj{{"state", ids[static_cast<size_t>(w.state)]},
            {"horizon", w.horizon},
            {"t", w.t},
            {"deviation", w.deviation},
            {"play", states}};
    if (discounted) wj["lambda"] = w.lambda;
    doc["witness"] = std::move(wj);
  } else {
    doc["witness"] = nullptr;
  }
  return dump(doc);
}

std::string plays_report_json(const DpModel& model, int start, int horizon, double eps,
                              double optimal_total, const EnumerationResult& result,
                              const Provenance& prov) {
  json plays = json::array();
  for (const Play& play : result.plays) {
    const double total = play.total();
    plays.push_back({{"states", play_states(model, play)},
                     {"total", total},
                     {"mean", total / horizon}});
  }
  return dump(json{{"type", "plays"},
                   {"start", model.state(start).id},
                   {"horizon", horizon},
                   {"epsilon", eps},
                   {"optimal_total", optimal_total},
                   {"threshold", optimal_total - horizon * eps},
                   {"count", result.plays.size()},
                   {"truncated", result.truncated},
                   {"plays", plays},
                   {"provenance", provenance_json(prov)}});
}

std::string game_report_json(const GameSolution& solution, int rows, int cols,
                             const Provenance& prov) {
  return dump(json{{"type", "game-solution"},
                   {"rows", rows},
                   {"cols", cols},
                   {"value", solution.value},
                   {"row_strategy", solution.x},
                   {"col_strategy", solution.y},
                   {"provenance", provenance_json(prov)}});
}

std::string probe_report_json(const std::vector<std::string>& ids,
                              const UniformProbe& probe, const Provenance& prov) {
  json doc{{"type", "uniform-probe"},
           {"state", ids[static_cast<size_t>(probe.state)]},
           {"epsilon", probe.epsilon},
           {"range", {probe.N, probe.Nmax}},
           {"v_ref", probe.v_ref},
           {"prefix_ok", probe.play_ok},
           {"values_ok", probe.values_ok},
           {"ok", probe.play_ok && probe.values_ok},
           {"provenance", provenance_json(prov)}};
  doc["first_fail_prefix"] =
      probe.first_fail_play >= 0 ? json(probe.first_fail_play) : json(nullptr);
  doc["first_fail_value"] =
      probe.first_fail_value >= 0 ? json(probe.first_fail_value) : json(nullptr);
  return dump(doc);
}

std::string regularity_report_json(const std::vector<std::string>& ids,
                                   const std::vector<double>& limit_estimate,
                                   const RegularityReport& report,
                                   const Provenance& prov) {
  json ladder = json::array();
  for (const HorizonWindow& w : report.ladder)
    ladder.push_back({{"n_lo", w.n_lo}, {"n_hi", w.n_hi}, {"gap", w.gap}});
  return dump(json{{"type", "regularity"},
                   {"limit_estimate", state_value_rows(ids, limit_estimate)},
                   {"ladder", ladder},
                   {"gap_vs_discounted", report.gap_vs_discounted},
                   {"cycle_oracle", state_value_rows(ids, report.cycle_oracle)},
                   {"oracle_gap", report.oracle_gap},
                   {"non_converged", report.non_converged},
                   {"provenance", provenance_json(prov)}});
}

std::string profile_eval_report_json(const std::string& start_id,
                                     const std::vector<double>& cumulative,
                                     const DeviationProfile& profile,
                                     const Provenance& prov) {
  // cumulative[k] is the expected payoff total after k stages, k = 0..n.
  return dump(json{{"type", "profile-eval"},
                   {"start", start_id},
                   {"stages", profile.horizon},
                   {"v_ref", profile.v_ref},
                   {"cumulative", cumulative},
                   {"deviation",
                    {{"grid", profile.grid},
                     {"values", profile.deviation},
                     {"sup", profile.sup_dev},
                     {"sup_t", profile.sup_t},
                     {"inf", profile.inf_dev},
                     {"inf_t", profile.inf_t}}},
                   {"provenance", provenance_json(prov)}});
}

std::string values_report_csv(const std::vector<std::string>& ids,
                              const std::vector<std::vector<double>>& values_by_n) {
  std::ostringstream out;
  out << "n,state,value\n";
  for (size_t n = 0; n < values_by_n.size(); ++n)
    for (size_t s = 0; s < ids.size(); ++s)
      out << n + 1 << ',' << ids[s] << ',' << format_double(values_by_n[n][s]) << '\n';
  return out.str();
}

std::string discounted_report_csv(const std::vector<std::string>& ids, double lambda,
                                  const DiscountedResult& result) {
  std::ostringstream out;
  out << "lambda,state,value\n";
  for (size_t s = 0; s < ids.size(); ++s)
    out << format_double(lambda) << ',' << ids[s] << ','
        << format_double(result.values[s]) << '\n';
  return out.str();
}

std::string preport_to_csv(const PReport& report, const std::vector<std::string>& ids) {
  std::ostringstream out;
  out << "horizon,state,t,deviation,epsilon,verdict\n";
  for (const CheckRow& row : report.rows)
    for (size_t g = 0; g < report.grid.size(); ++g)
      out << row.horizon << ',' << ids[static_cast<size_t>(row.state)] << ','
          << format_double(report.grid[g]) << ',' << format_double(row.grid_dev[g])
          << ',' << format_double(report.epsilon) << ','
          << (row.pass ? "pass" : "fail") << '\n';
  return out.str();
}

}  // namespace trajlens
