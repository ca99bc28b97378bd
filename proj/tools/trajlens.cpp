// Command line front end: model loading (file or curated corpus), the
// finite/discounted solvers, the two trajectory checkers, play
// enumeration, matrix and stochastic game solving, profile evaluation,
// and the uniform-value probe. Verdict-bearing subcommands exit 0 on
// HOLDS/success, 2 on VIOLATED, and 1 on any input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajlens/corpus.hpp"
#include "trajlens/deviation.hpp"
#include "trajlens/dp_model.hpp"
#include "trajlens/dp_values.hpp"
#include "trajlens/errors.hpp"
#include "trajlens/hashing.hpp"
#include "trajlens/matrix_game.hpp"
#include "trajlens/report_io.hpp"
#include "trajlens/stochastic_game.hpp"
#include "trajlens/trajectory.hpp"
#include "trajlens/version.hpp"

namespace {

using namespace trajlens;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitViolated = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + out_path + "'");
  out << text;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) parts.push_back(item);
  return parts;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    int v = std::stoi(text, &pos);
    if (pos != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " '" + text + "'");
  }
}

double parse_num(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " '" + text + "'");
  }
}

// Shared model-source options: a JSON file or a corpus name with
// overridable parameters.
struct ModelSource {
  std::string model_path;
  std::string corpus_name;
  std::vector<std::string> corpus_params;

  std::optional<DpModel> dp;
  std::optional<ZsgModel> zsg;
  std::optional<CorpusEntry> entry;

  void add_options(CLI::App* cmd) {
    auto* model = cmd->add_option("--model", model_path, "Model JSON file");
    auto* corpus = cmd->add_option("--corpus", corpus_name, "Curated corpus entry name");
    cmd->add_option("--param", corpus_params, "Corpus parameter KEY=VALUE (repeatable)");
    model->excludes(corpus);
  }

  void load() {
    if (model_path.empty() == corpus_name.empty())
      throw InputError("exactly one of --model and --corpus is required");
    if (!model_path.empty()) {
      const std::string text = read_file(model_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(text);
      } catch (const nlohmann::json::exception& e) {
        throw InputError(model_path + ": " + e.what());
      }
      const std::string type = doc.value("type", "");
      if (type == "dp") dp = DpModel::from_json_text(text);
      else if (type == "zsg") zsg = ZsgModel::from_json_text(text);
      else throw InputError(model_path + ": \"type\" must be \"dp\" or \"zsg\"");
      return;
    }
    std::vector<std::pair<std::string, double>> params;
    for (const std::string& kv : corpus_params) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        throw InputError("bad --param '" + kv + "', expected KEY=VALUE");
      params.emplace_back(kv.substr(0, eq),
                          parse_num(kv.substr(eq + 1), "corpus parameter"));
    }
    entry = make_corpus_entry(corpus_name, params);
    if (entry->dp_model) dp = entry->dp_model;
    else zsg = entry->zsg_model;
  }

  bool is_dp() const { return dp.has_value(); }

  const DpModel& require_dp() const {
    if (!dp) throw InputError("this subcommand needs a DP model, got a stochastic game");
    return *dp;
  }

  const ZsgModel& require_zsg() const {
    if (!zsg)
      throw InputError("this subcommand needs a stochastic game, got a DP model");
    return *zsg;
  }

  std::uint64_t content_hash() const {
    return dp ? dp->content_hash() : require_zsg().content_hash();
  }

  std::vector<std::string> ids() const {
    return dp ? state_ids(*dp) : state_ids(require_zsg());
  }

  int index_of(const std::string& id) const {
    return dp ? dp->index_of(id) : require_zsg().index_of(id);
  }

  std::string describe() const {
    if (!model_path.empty()) return model_path;
    std::string s = "corpus:" + corpus_name;
    for (const std::string& kv : corpus_params) s += " " + kv;
    return s;
  }
};

Provenance make_provenance(const ModelSource& source,
                           std::vector<std::pair<std::string, std::string>> params) {
  Provenance prov;
  prov.tool_version = kVersion;
  prov.command = source.describe();
  prov.model_hash = hash_hex(source.content_hash());
  prov.params = std::move(params);
  return prov;
}

std::vector<int> resolve_starts(const ModelSource& source, const std::string& starts_csv) {
  std::vector<int> starts;
  if (!starts_csv.empty()) {
    for (const std::string& id : split_csv(starts_csv))
      starts.push_back(source.index_of(id));
  } else if (source.entry) {
    starts = source.entry->start_indices();
  }
  return starts;  // empty = all states
}

int resolve_single_start(const ModelSource& source, const std::string& start_id) {
  if (!start_id.empty()) return source.index_of(start_id);
  if (source.entry && !source.entry->start_ids.empty())
    return source.entry->start_indices().front();
  return 0;
}

// Reference limit values for the checkers: corpus entries carry exact
// analytic limits, file models fall back to the max-mean-cycle oracle
// inside the checker.
std::optional<std::vector<double>> resolve_reference(const ModelSource& source,
                                                     const std::string& mode) {
  if (mode == "oracle") return std::nullopt;
  if (mode == "analytic") {
    if (!source.entry || source.entry->analytic_limit.empty())
      throw InputError("--reference analytic needs a corpus model");
    return source.entry->analytic_limit;
  }
  if (!mode.empty()) throw InputError("bad --reference '" + mode + "'");
  if (source.entry && !source.entry->analytic_limit.empty())
    return source.entry->analytic_limit;
  return std::nullopt;
}

struct CommonOut {
  std::string out_path;
  std::string format = "json";

  void add_options(CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output path (default: stdout)");
    cmd->add_option("--format", format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
  }

  bool csv() const { return format == "csv"; }

  void require_json(const char* subcommand) const {
    if (csv())
      throw InputError(std::string(subcommand) + " only writes json reports");
  }
};

// ---------------------------------------------------------------- solve

struct SolveArgs {
  ModelSource source;
  CommonOut out;
  int horizon = 0;
  double lambda = 0.0;
  int diagnose = 0;
  double tol = 1e-3;
};

int run_solve(SolveArgs& args) {
  args.source.load();
  const int chosen = (args.horizon > 0) + (args.lambda > 0) + (args.diagnose > 0);
  if (chosen != 1)
    throw InputError("pick exactly one of --horizon, --lambda, --diagnose-regularity");
  const std::vector<std::string> ids = args.source.ids();

  if (args.horizon > 0) {
    Provenance prov = make_provenance(
        args.source, {{"horizon", std::to_string(args.horizon)}});
    std::vector<std::vector<double>> values_by_n;
    values_by_n.reserve(static_cast<size_t>(args.horizon));
    if (args.source.is_dp()) {
      ValueTable table = finite_values(args.source.require_dp(), args.horizon);
      for (int n = 1; n <= args.horizon; ++n) values_by_n.push_back(table.values_at(n));
    } else {
      ZsgValueTable table = shapley_finite(args.source.require_zsg(), args.horizon);
      for (int n = 1; n <= args.horizon; ++n) values_by_n.push_back(table.values_at(n));
    }
    write_output(args.out.out_path,
                 args.out.csv() ? values_report_csv(ids, values_by_n)
                                : values_report_json(ids, values_by_n, prov));
    return kExitOk;
  }

  if (args.lambda > 0) {
    if (args.lambda > 1) throw InputError("--lambda must lie in (0, 1]");
    Provenance prov =
        make_provenance(args.source, {{"lambda", format_double(args.lambda)}});
    DiscountedResult result =
        args.source.is_dp()
            ? discounted_value(args.source.require_dp(), args.lambda)
            : shapley_discounted(args.source.require_zsg(), args.lambda);
    write_output(args.out.out_path,
                 args.out.csv() ? discounted_report_csv(ids, args.lambda, result)
                                : discounted_report_json(ids, args.lambda, result, prov));
    return kExitOk;
  }

  args.out.require_json("--diagnose-regularity");
  Provenance prov = make_provenance(args.source,
                                    {{"horizon", std::to_string(args.diagnose)},
                                     {"tol", format_double(args.tol)}});
  auto [estimate, report] =
      limit_value_estimate(args.source.require_dp(), args.diagnose, args.tol);
  write_output(args.out.out_path,
               regularity_report_json(ids, estimate, report, prov));
  return kExitOk;
}

// ------------------------------------------------------------- checkers

struct CheckArgs {
  ModelSource source;
  CommonOut out;
  double epsilon = 0.0;
  std::string horizons_csv;
  std::string lambdas_csv;
  std::string starts_csv;
  std::string reference_mode;
  int grid_points = 101;
  long long limit = 1000000;
};

int run_check(CheckArgs& args, bool discounted) {
  args.source.load();
  const DpModel& model = args.source.require_dp();
  if (args.epsilon <= 0) throw InputError("--epsilon must be positive");
  if (args.grid_points < 2) throw InputError("--grid needs at least 2 points");

  CheckOptions opts;
  opts.starts = resolve_starts(args.source, args.starts_csv);
  opts.reference = resolve_reference(args.source, args.reference_mode);
  const std::vector<double> grid = uniform_grid(args.grid_points);

  std::vector<std::pair<std::string, std::string>> params{
      {"epsilon", format_double(args.epsilon)},
      {"grid", std::to_string(args.grid_points)},
      {"limit", std::to_string(args.limit)}};

  PReport report;
  if (discounted) {
    std::vector<double> lambdas;
    for (const std::string& part : split_csv(args.lambdas_csv))
      lambdas.push_back(parse_num(part, "--lambdas entry"));
    if (lambdas.empty()) throw InputError("--lambdas is required");
    params.emplace_back("lambdas", args.lambdas_csv);
    report = check_property_Pprime(model, args.epsilon, lambdas, grid, args.limit, opts);
  } else {
    std::vector<int> horizons;
    for (const std::string& part : split_csv(args.horizons_csv))
      horizons.push_back(parse_int(part, "--horizons entry"));
    if (horizons.empty()) throw InputError("--horizons is required");
    params.emplace_back("horizons", args.horizons_csv);
    report = check_property_P(model, args.epsilon, horizons, grid, args.limit, opts);
  }

  Provenance prov = make_provenance(args.source, std::move(params));
  const std::vector<std::string> ids = args.source.ids();
  write_output(args.out.out_path, args.out.csv()
                                      ? preport_to_csv(report, ids)
                                      : preport_to_json(report, ids, prov));
  return report.verdict == "VIOLATED" ? kExitViolated : kExitOk;
}

// ------------------------------------------------------------ enumerate

struct EnumerateArgs {
  ModelSource source;
  CommonOut out;
  std::string start_id;
  int horizon = 0;
  double epsilon = 0.0;
  long long limit = 1000;
};

int run_enumerate(EnumerateArgs& args) {
  args.source.load();
  args.out.require_json("enumerate");
  const DpModel& model = args.source.require_dp();
  if (args.horizon < 1) throw InputError("--horizon must be at least 1");
  if (args.epsilon < 0) throw InputError("--epsilon must be nonnegative");
  const int start = resolve_single_start(args.source, args.start_id);

  EnumerationResult result =
      enumerate_eps_optimal_plays(model, start, args.horizon, args.epsilon, args.limit);
  ValueTable table = finite_values(model, args.horizon);

  Provenance prov = make_provenance(args.source,
                                    {{"start", model.state(start).id},
                                     {"horizon", std::to_string(args.horizon)},
                                     {"epsilon", format_double(args.epsilon)},
                                     {"limit", std::to_string(args.limit)}});
  write_output(args.out.out_path,
               plays_report_json(model, start, args.horizon, args.epsilon,
                                 table.total(args.horizon, start), result, prov));
  return kExitOk;
}

// ------------------------------------------------------------ game-solve

struct GameSolveArgs {
  ModelSource source;
  CommonOut out;
  std::string matrix_path;
  int horizon = 0;
  double lambda = 0.0;
};

int run_game_solve(GameSolveArgs& args) {
  if (!args.matrix_path.empty()) {
    if (!args.source.model_path.empty() || !args.source.corpus_name.empty())
      throw InputError("--matrix cannot be combined with --model/--corpus");
    args.out.require_json("game-solve --matrix");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(args.matrix_path));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(args.matrix_path + ": " + e.what());
    }
    const nlohmann::json& rows = doc.is_array() ? doc : doc.at("A");
    std::vector<std::vector<double>> a;
    for (const auto& row : rows) a.push_back(row.get<std::vector<double>>());
    MatrixGame game = MatrixGame::from_rows(a);
    GameSolution solution = solve_matrix_game(game);
    Provenance prov;
    prov.tool_version = kVersion;
    prov.command = args.matrix_path;
    prov.model_hash = hash_hex(fnv1a64(doc.dump()));
    write_output(args.out.out_path,
                 game_report_json(solution, game.rows(), game.cols(), prov));
    return kExitOk;
  }

  // Without --matrix this is the stochastic-game solver.
  args.source.load();
  const ZsgModel& game = args.source.require_zsg();
  const std::vector<std::string> ids = args.source.ids();
  if ((args.horizon > 0) == (args.lambda > 0))
    throw InputError("pick exactly one of --horizon and --lambda");

  if (args.horizon > 0) {
    Provenance prov =
        make_provenance(args.source, {{"horizon", std::to_string(args.horizon)}});
    ZsgValueTable table = shapley_finite(game, args.horizon);
    std::vector<std::vector<double>> values_by_n;
    for (int n = 1; n <= args.horizon; ++n) values_by_n.push_back(table.values_at(n));
    write_output(args.out.out_path,
                 args.out.csv() ? values_report_csv(ids, values_by_n)
                                : values_report_json(ids, values_by_n, prov));
    return kExitOk;
  }
  if (args.lambda > 1) throw InputError("--lambda must lie in (0, 1]");
  Provenance prov =
      make_provenance(args.source, {{"lambda", format_double(args.lambda)}});
  DiscountedResult result = shapley_discounted(game, args.lambda);
  write_output(args.out.out_path,
               args.out.csv() ? discounted_report_csv(ids, args.lambda, result)
                              : discounted_report_json(ids, args.lambda, result, prov));
  return kExitOk;
}

// ----------------------------------------------------------- eval-profile

struct EvalProfileArgs {
  ModelSource source;
  CommonOut out;
  std::string profiles_path;
  std::string start_id;
  int stages = 0;
  double v_ref = 0.0;
  bool v_ref_set = false;
  int grid_points = 101;
};

int run_eval_profile(EvalProfileArgs& args) {
  args.source.load();
  args.out.require_json("eval-profile");
  const ZsgModel& game = args.source.require_zsg();
  if (args.stages < 1) throw InputError("--stages must be at least 1");
  const int start = resolve_single_start(args.source, args.start_id);

  auto [sigma, tau] = profiles_from_json_text(game, read_file(args.profiles_path));

  double v_ref = args.v_ref;
  if (!args.v_ref_set) {
    if (args.source.entry && !args.source.entry->analytic_limit.empty())
      v_ref = args.source.entry->analytic_limit[static_cast<size_t>(start)];
    else
      v_ref = shapley_finite(game, args.stages).value(args.stages, start);
  }

  DeviationProfile profile = expected_deviation_profile(
      game, sigma, tau, start, args.stages, v_ref, uniform_grid(args.grid_points));

  Provenance prov = make_provenance(args.source,
                                    {{"start", game.state(start).id},
                                     {"stages", std::to_string(args.stages)},
                                     {"v_ref", format_double(v_ref)},
                                     {"profiles", args.profiles_path}});
  write_output(args.out.out_path,
               profile_eval_report_json(game.state(start).id, profile.prefix, profile,
                                        prov));
  return kExitOk;
}

// ---------------------------------------------------------------- corpus

int run_corpus_list(const std::string& out_path) {
  std::ostringstream out;
  for (const std::string& name : corpus_names()) {
    CorpusEntry entry = make_corpus_entry(name);
    out << name << " [" << (entry.has_dp() ? "dp" : "zsg") << "]";
    for (const auto& [k, v] : entry.params) out << " " << k << "=" << format_double(v);
    if (!entry.notes.empty()) out << "  " << entry.notes;
    out << "\n";
  }
  write_output(out_path, out.str());
  return kExitOk;
}

int run_corpus_emit(const std::string& name, const std::vector<std::string>& kvs,
                    const std::string& out_path) {
  std::vector<std::pair<std::string, double>> params;
  for (const std::string& kv : kvs) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InputError("bad --param '" + kv + "', expected KEY=VALUE");
    params.emplace_back(kv.substr(0, eq),
                        parse_num(kv.substr(eq + 1), "corpus parameter"));
  }
  CorpusEntry entry = make_corpus_entry(name, params);
  const std::string text =
      entry.has_dp() ? entry.dp().to_json_text(2) : entry.zsg().to_json_text(2);
  write_output(out_path, text + "\n");
  return kExitOk;
}

// ------------------------------------------------------------- probe

struct ProbeArgs {
  ModelSource source;
  CommonOut out;
  std::string state_id;
  double epsilon = 0.0;
  int N = 0;
  int Nmax = 0;
};

int run_probe(ProbeArgs& args) {
  args.source.load();
  args.out.require_json("probe-uniform");
  const DpModel& model = args.source.require_dp();
  if (args.epsilon <= 0) throw InputError("--epsilon must be positive");
  if (args.N < 1 || args.Nmax < args.N)
    throw InputError("need 1 <= N <= Nmax");
  const int state = resolve_single_start(args.source, args.state_id);

  UniformProbe probe = uniform_value_probe(model, state, args.epsilon, args.N, args.Nmax);
  Provenance prov = make_provenance(args.source,
                                    {{"state", model.state(state).id},
                                     {"epsilon", format_double(args.epsilon)},
                                     {"N", std::to_string(args.N)},
                                     {"Nmax", std::to_string(args.Nmax)}});
  write_output(args.out.out_path, probe_report_json(args.source.ids(), probe, prov));
  return probe.play_ok && probe.values_ok ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-run trajectory analysis for finite dynamic programs and "
               "zero-sum stochastic games"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve", "Finite-horizon or discounted values of a model");
  solve_args.source.add_options(solve);
  solve_args.out.add_options(solve);
  solve->add_option("--horizon", solve_args.horizon, "Largest horizon N");
  solve->add_option("--lambda", solve_args.lambda, "Discount factor in (0, 1]");
  solve->add_option("--diagnose-regularity", solve_args.diagnose,
                    "Estimate the limit value at this horizon with diagnostics");
  solve->add_option("--tol", solve_args.tol, "Convergence tolerance for diagnostics");

  CheckArgs p_args;
  CLI::App* check_p = app.add_subcommand(
      "check-p", "Bounded-deviation check over eps-optimal plays at fixed horizons");
  p_args.source.add_options(check_p);
  p_args.out.add_options(check_p);
  check_p->add_option("--epsilon", p_args.epsilon, "Optimality slack")->required();
  check_p->add_option("--horizons", p_args.horizons_csv, "Comma-separated horizons")
      ->required();
  check_p->add_option("--starts", p_args.starts_csv, "Comma-separated start state ids");
  check_p->add_option("--reference", p_args.reference_mode,
                      "analytic|oracle limit values (default: analytic when available)");
  check_p->add_option("--grid", p_args.grid_points, "Grid points on [0, 1]");
  check_p->add_option("--limit", p_args.limit, "Max plays per (horizon, start)");

  CheckArgs pp_args;
  CLI::App* check_pp = app.add_subcommand(
      "check-pprime", "Bounded-deviation check for discounted programs");
  pp_args.source.add_options(check_pp);
  pp_args.out.add_options(check_pp);
  check_pp->add_option("--epsilon", pp_args.epsilon, "Optimality slack")->required();
  check_pp->add_option("--lambdas", pp_args.lambdas_csv, "Comma-separated discounts")
      ->required();
  check_pp->add_option("--starts", pp_args.starts_csv, "Comma-separated start state ids");
  check_pp->add_option("--reference", pp_args.reference_mode,
                       "analytic|oracle limit values (default: analytic when available)");
  check_pp->add_option("--grid", pp_args.grid_points, "Grid points on [0, 1]");
  check_pp->add_option("--limit", pp_args.limit, "Max play classes per (lambda, start)");

  EnumerateArgs enum_args;
  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "List eps-optimal plays from a start state");
  enum_args.source.add_options(enumerate);
  enum_args.out.add_options(enumerate);
  enumerate->add_option("--start", enum_args.start_id, "Start state id");
  enumerate->add_option("--horizon", enum_args.horizon, "Play length")->required();
  enumerate->add_option("--epsilon", enum_args.epsilon, "Optimality slack")->required();
  enumerate->add_option("--limit", enum_args.limit, "Max plays to emit");

  GameSolveArgs game_args;
  CLI::App* game_solve = app.add_subcommand(
      "game-solve", "Solve one matrix game or a stochastic game's values");
  game_args.source.add_options(game_solve);
  game_args.out.add_options(game_solve);
  game_solve->add_option("--matrix", game_args.matrix_path,
                         "JSON payoff matrix ([[..],..] or {\"A\": [[..],..]})");
  game_solve->add_option("--horizon", game_args.horizon, "Largest horizon N");
  game_solve->add_option("--lambda", game_args.lambda, "Discount factor in (0, 1]");

  EvalProfileArgs eval_args;
  CLI::App* eval_profile = app.add_subcommand(
      "eval-profile", "Expected payoffs and deviations under fixed strategy profiles");
  eval_args.source.add_options(eval_profile);
  eval_args.out.add_options(eval_profile);
  eval_profile->add_option("--profiles", eval_args.profiles_path,
                           "Strategy profiles JSON (see README)")
      ->required();
  eval_profile->add_option("--start", eval_args.start_id, "Start state id");
  eval_profile->add_option("--stages", eval_args.stages, "Stages to play")->required();
  auto* vref_opt =
      eval_profile->add_option("--v-ref", eval_args.v_ref, "Reference long-run value");
  eval_profile->add_option("--grid", eval_args.grid_points, "Grid points on [0, 1]");

  CLI::App* corpus = app.add_subcommand("corpus", "Curated example models");
  corpus->require_subcommand(1);
  std::string corpus_out;
  CLI::App* corpus_list = corpus->add_subcommand("list", "List corpus entries");
  corpus_list->add_option("--out", corpus_out, "Output path (default: stdout)");
  std::string emit_name;
  std::string emit_out;
  std::vector<std::string> emit_params;
  CLI::App* corpus_emit =
      corpus->add_subcommand("emit", "Write one corpus model as JSON");
  corpus_emit->add_option("name", emit_name, "Corpus entry name")->required();
  corpus_emit->add_option("--param", emit_params, "Corpus parameter KEY=VALUE");
  corpus_emit->add_option("--out", emit_out, "Output path (default: stdout)");

  ProbeArgs probe_args;
  CLI::App* probe = app.add_subcommand(
      "probe-uniform", "Probe the uniform-value conditions over a horizon range");
  probe_args.source.add_options(probe);
  probe_args.out.add_options(probe);
  probe->add_option("--state", probe_args.state_id, "State id");
  probe->add_option("--epsilon", probe_args.epsilon, "Slack")->required();
  probe->add_option("--N", probe_args.N, "Range start")->required();
  probe->add_option("--Nmax", probe_args.Nmax, "Range end")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }
  eval_args.v_ref_set = vref_opt->count() > 0;

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (check_p->parsed()) return run_check(p_args, false);
    if (check_pp->parsed()) return run_check(pp_args, true);
    if (enumerate->parsed()) return run_enumerate(enum_args);
    if (game_solve->parsed()) return run_game_solve(game_args);
    if (eval_profile->parsed()) return run_eval_profile(eval_args);
    if (corpus->parsed()) {
      if (corpus_list->parsed()) return run_corpus_list(corpus_out);
      return run_corpus_emit(emit_name, emit_params, emit_out);
    }
    if (probe->parsed()) return run_probe(probe_args);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const EffectiveHorizonError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SingularGameError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
