#include "mpss/cli.hpp"

#include "mpss/chain.hpp"
#include "mpss/decomposition.hpp"
#include "mpss/model_io.hpp"
#include "mpss/network.hpp"
#include "mpss/report.hpp"
#include "mpss/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <functional>
#include <ostream>
#include <thread>

namespace mpss::cli {

namespace {

struct RunConfig {
  std::string data;
  std::string topology;
  std::string format = "markdown";
  bool raw = false;
  std::optional<double> min_epsilon;
  std::vector<std::string> dmus;
  ChainWeights chain;
  std::array<double, 2> omega{0.5, 0.5};
  unsigned threads = 1;

  std::string intermediates = "variable";
  bool stages = false;
  bool targets = false;
  std::vector<double> process_scores;
  std::vector<std::string> groups;
  std::string column;
  bool no_tie_correction = false;
};

Format output_format(const RunConfig& c) { return c.format == "csv" ? Format::csv : Format::markdown; }

LoadOptions load_options(const RunConfig& c) { return {c.min_epsilon}; }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Rows for the selected DMUs, in dataset order, computed on up to
// c.threads workers. The first failing DMU (in dataset order) rethrows.
std::vector<std::vector<Cell>> per_dmu(const RunConfig& c, const Dataset& d,
                                       const std::function<std::vector<Cell>(const std::string&)>& row) {
  std::vector<std::string> ids;
  if (c.dmus.empty()) {
    ids = d.dmu_ids();
  } else {
    for (const auto& id : c.dmus) {
      d.index_of(id);
      ids.push_back(id);
    }
  }
  std::vector<std::vector<Cell>> rows(ids.size());
  std::vector<std::exception_ptr> errors(ids.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      try {
        rows[i] = row(ids[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(ids.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

LoadedModel load(const RunConfig& c, std::ostream& err) {
  LoadedModel m = load_dataset(c.data, c.topology, load_options(c));
  for (const auto& w : m.warnings) err << "warning: " << w << "\n";
  return m;
}

void emit(const RunConfig& c, const ReportTable& t, std::ostream& out) {
  out << render(t, output_format(c), c.raw);
}

void cmd_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.topology.empty()) {
    std::vector<std::string> warnings;
    const Dataset d = read_dataset_csv(c.data, load_options(c), &warnings);
    d.validate();
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    out << "ok: " << d.size() << " DMUs, " << d.measure_names().size() << " measures\n";
    return;
  }
  const LoadedModel m = load(c, err);
  out << "ok: " << m.dataset.size() << " DMUs, " << m.dataset.measure_names().size()
      << " measures, " << m.topology.processes.size() << " processes, shape "
      << to_string(m.topology.shape) << "\n";
}

void cmd_summary(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  const Dataset d = read_dataset_csv(c.data, load_options(c), &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  const SummaryStats s = summarize(d);
  ReportTable t{"Descriptive statistics", {"measure", "mean", "sd", "min", "max"}, {}};
  for (const auto& m : s.measures) {
    t.add_row({Cell::of(m.measure), Cell::of(m.mean, 3), Cell::of(m.sd, 3), Cell::of(m.min, 3),
               Cell::of(m.max, 3)});
  }
  emit(c, t, out);
}

void cmd_blackbox(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedModel m = load(c, err);
  const BlackBoxRoles roles = black_box_roles(m.topology);
  ReportTable t{"Black-box MPSS", {"dmu", "mpss", "theta_input", "theta_output", "is_mpss"}, {}};
  for (auto& row : per_dmu(c, m.dataset, [&](const std::string& id) {
         const MpssResult r = blackbox_mpss(m.dataset, roles, id);
         return std::vector<Cell>{Cell::of(id), Cell::of(r.score), Cell::of(r.scale_factors.at("input")),
                                  Cell::of(r.scale_factors.at("output")), Cell::of(yes_no(r.is_mpss()))};
       })) {
    t.add_row(std::move(row));
  }
  emit(c, t, out);
}

void cmd_network(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedModel m = load(c, err);
  const TwoStageRoles roles = two_stage_roles(m.topology);
  const TwoStageMatrices data = two_stage_matrices(m.dataset, roles);
  const bool variable = c.intermediates == "variable";

  ReportTable t;
  t.title = variable ? "Network MPSS (free intermediates)" : "Network MPSS (radial intermediates)";
  t.headers = {"dmu", "mpss", "theta1_1", "theta2_1", "theta1_2", "theta2_2", "is_mpss"};
  if (variable) {
    for (const auto& z : roles.intermediates) t.headers.push_back("target_" + z);
    t.headers.push_back("alternate_optima");
  }
  if (c.stages) {
    for (const char* h : {"radial_system", "stage1_mpss", "stage2_mpss"}) t.headers.push_back(h);
  }
  for (auto& row : per_dmu(c, m.dataset, [&](const std::string& id) {
         const Eigen::Index o = m.dataset.index_of(id);
         const MpssResult r = variable ? network_mpss_variable(data, o) : network_mpss_radial(data, o);
         std::vector<Cell> cells{Cell::of(id),
                                 Cell::of(r.score),
                                 Cell::of(r.scale_factors.at("stage1_input")),
                                 Cell::of(r.scale_factors.at("stage1_output")),
                                 Cell::of(r.scale_factors.at("stage2_input")),
                                 Cell::of(r.scale_factors.at("stage2_output")),
                                 Cell::of(yes_no(r.is_mpss()))};
         if (variable) {
           for (const auto& z : roles.intermediates) cells.push_back(Cell::of(r.optimal_intermediates.at(z), 3));
           cells.push_back(Cell::of(yes_no(r.alternative_optima)));
         }
         if (c.stages) {
           const MpssResult system = variable ? network_mpss_radial(data, o) : r;
           const MpssResult s1 = stage_mpss(data, o, system.score, 1);
           const MpssResult s2 = stage_mpss(data, o, system.score, 2, s1.score);
           for (const double v : {system.score, s1.score, s2.score}) cells.push_back(Cell::of(v));
         }
         return cells;
       })) {
    t.add_row(std::move(row));
  }
  emit(c, t, out);
}

void cmd_decompose(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ReportTable t{"MPSS decomposition",
                {"dmu", "network_system", "process1", "process2", "stage1", "stage2", "tandem",
                 "additivity_gap"},
                {}};
  if (!c.process_scores.empty()) {
    if (c.process_scores.size() != 2) throw ValidationError("--process-scores takes two values");
    const DecompositionReport r = decompose({c.process_scores[0], c.process_scores[1]}, c.omega);
    t.add_row({Cell::of("-"), Cell::of(r.process_scores[0] + r.process_scores[1]),
               Cell::of(r.process_scores[0]), Cell::of(r.process_scores[1]),
               Cell::of(r.stage_scores[0]), Cell::of(r.stage_scores[1]), Cell::of(r.tandem_score),
               Cell::of(0.0)});
    emit(c, t, out);
    return;
  }
  if (c.data.empty() || c.topology.empty()) {
    throw ValidationError("decompose needs --data and --topology, or --process-scores");
  }
  const LoadedModel m = load(c, err);
  to_tandem(m.topology, c.omega);  // shape and weight check before any solve
  const TwoStageMatrices data = two_stage_matrices(m.dataset, two_stage_roles(m.topology));
  for (auto& row : per_dmu(c, m.dataset, [&](const std::string& id) {
         const TandemEvaluation e = evaluate_tandem(data, m.dataset.index_of(id), c.omega);
         const DecompositionReport& r = e.decomposition;
         return std::vector<Cell>{Cell::of(id),
                                  Cell::of(e.system.score),
                                  Cell::of(r.process_scores[0]),
                                  Cell::of(r.process_scores[1]),
                                  Cell::of(r.stage_scores[0]),
                                  Cell::of(r.stage_scores[1]),
                                  Cell::of(r.tandem_score),
                                  Cell::of(e.additivity_gap)};
       })) {
    t.add_row(std::move(row));
  }
  emit(c, t, out);
}

void cmd_chain_eff(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedModel m = load(c, err);
  const ChainRoles roles = chain_roles(m.topology);
  const ChainMatrices data = chain_matrices(m.dataset, roles);
  ReportTable t{"Value chain efficiency",
                {"dmu", "objective", "operation", "rd", "theta_m", "marketability", "efficient"},
                {}};
  std::vector<std::string> z = roles.operation_intermediates;
  z.insert(z.end(), roles.rd_intermediates.begin(), roles.rd_intermediates.end());
  for (const auto& name : z) t.headers.push_back("target_" + name);
  for (auto& row : per_dmu(c, m.dataset, [&](const std::string& id) {
         const ChainEfficiency e = chain_efficiency(data, m.dataset.index_of(id), c.chain);
         std::vector<Cell> cells{Cell::of(id),
                                 Cell::of(e.objective, 3),
                                 Cell::of(e.theta_o, 3),
                                 Cell::of(e.theta_r, 3),
                                 Cell::of(e.theta_m, 3),
                                 Cell::of(e.marketability_efficiency, 3),
                                 Cell::of(yes_no(e.efficient(c.chain)))};
         for (const auto& name : z) cells.push_back(Cell::of(e.intermediates.at(name), 3));
         return cells;
       })) {
    t.add_row(std::move(row));
  }
  emit(c, t, out);
}

void cmd_chain_mpss(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LoadedModel m = load(c, err);
  const ChainRoles roles = chain_roles(m.topology);
  const ChainMatrices data = chain_matrices(m.dataset, roles);
  std::vector<std::string> z = roles.operation_intermediates;
  z.insert(z.end(), roles.rd_intermediates.begin(), roles.rd_intermediates.end());

  ReportTable t;
  if (c.targets) {
    t.title = "Appropriate intermediate levels";
    t.headers = {"dmu"};
    for (const auto& name : z) {
      for (const char* h : {"current_", "appropriate_", "gap_"}) t.headers.push_back(h + name);
    }
    t.headers.push_back("strategy");
    t.headers.push_back("alternate_optima");
  } else {
    t.title = "Value chain MPSS";
    t.headers = {"dmu",      "chain_mpss", "theta_o",   "theta_r",       "theta_m",
                 "is_mpss",  "operation",  "rd",        "profitability", "marketability"};
  }
  std::vector<std::string> notes(m.dataset.dmu_ids().size());
  for (auto& row : per_dmu(c, m.dataset, [&](const std::string& id) {
         const Eigen::Index o = m.dataset.index_of(id);
         std::vector<Cell> cells{Cell::of(id)};
         if (c.targets) {
           const TargetReport r = intermediate_targets(data, o, c.chain);
           for (const auto& e : r.entries) {
             cells.push_back(Cell::of(e.current, 3));
             cells.push_back(Cell::of(e.appropriate, 3));
             cells.push_back(Cell::of(e.gap, 3));
           }
           cells.push_back(Cell::of(r.strategy));
           cells.push_back(Cell::of(yes_no(r.alternative_optima)));
           return cells;
         }
         const ChainMpss r = chain_mpss(data, o, c.chain);
         for (const double v : {r.score, r.theta_o, r.theta_r, r.theta_m}) cells.push_back(Cell::of(v));
         cells.push_back(Cell::of(yes_no(r.is_mpss())));
         try {
           const StageFactors f = profitability_mpss(data, o, r.score, c.chain);
           for (const double v : {f.operation_mpss, f.rd_mpss, f.profitability_mpss, f.marketability_mpss}) {
             cells.push_back(Cell::of(v));
           }
         } catch (const SolverError& e) {
           notes[static_cast<std::size_t>(o)] = e.what();
           for (int k = 0; k < 4; ++k) cells.push_back(Cell::of("n/a"));
         }
         return cells;
       })) {
    t.add_row(std::move(row));
  }
  for (std::size_t j = 0; j < notes.size(); ++j) {
    if (!notes[j].empty()) err << "note: DMU " << m.dataset.dmu_ids()[j] << ": " << notes[j] << "\n";
  }
  emit(c, t, out);
}

Eigen::VectorXd read_group(const std::string& path, const std::string& column) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<std::string>> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::size_t a = 0;
    while (true) {
      const std::size_t b = line.find(',', a);
      std::string f = line.substr(a, b == std::string::npos ? std::string::npos : b - a);
      const auto first = f.find_first_not_of(" \t\"");
      const auto last = f.find_last_not_of(" \t\"");
      fields.push_back(first == std::string::npos ? "" : f.substr(first, last - first + 1));
      if (b == std::string::npos) break;
      a = b + 1;
    }
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw ValidationError("group file '" + path + "' is empty");

  const auto number = [](const std::string& s, double& v) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
  };
  double probe = 0;
  const bool has_header = !number(lines.front().back(), probe);
  std::size_t col = lines.front().size() - 1;
  if (!column.empty()) {
    if (!has_header) throw ValidationError("group file '" + path + "' has no header for --column");
    const auto it = std::find(lines.front().begin(), lines.front().end(), column);
    if (it == lines.front().end()) {
      throw ValidationError("group file '" + path + "' has no column '" + column + "'");
    }
    col = static_cast<std::size_t>(it - lines.front().begin());
  }
  std::vector<double> values;
  for (std::size_t r = has_header ? 1 : 0; r < lines.size(); ++r) {
    double v = 0;
    if (col >= lines[r].size() || !number(lines[r][col], v)) {
      throw ValidationError("non-numeric value in '" + path + "'", static_cast<long>(r + 1));
    }
    values.push_back(v);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void cmd_kruskal(const RunConfig& c, std::ostream& out, std::ostream&) {
  ScoreGroups<double> groups;
  for (const auto& path : c.groups) groups.push_back(read_group(path, c.column));
  if (groups.size() < 2) throw ValidationError("--groups needs at least two files");
  const KwResult<double> r = kruskal_wallis(groups, !c.no_tie_correction);
  ReportTable t{"Kruskal-Wallis test", {"chi_square", "df", "asymp_sig", "tie_corrected", "tie_groups"}, {}};
  t.add_row({Cell::of(r.h_statistic, 3), Cell::of(r.degrees_of_freedom, 0), Cell::of(r.p_value, 3),
             Cell::of(yes_no(r.tie_corrected)), Cell::of(static_cast<double>(r.tie_groups), 0)});
  emit(c, t, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Most productive scale size for network DEA", "dea-mpss"};
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "markdown"}));
  app.add_flag("--raw", c.raw, "Print numbers at full precision");
  app.add_option("--min-epsilon", c.min_epsilon, "Replace nonpositive values by this value")
      ->check(CLI::PositiveNumber);
  app.add_option("--dmu", c.dmus, "Only these DMUs (comma separated)")->delimiter(',');
  app.add_option("--w1", c.chain.w1, "Chain weight on theta_m (MPSS) / theta_o (efficiency)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--w2", c.chain.w2, "Chain weight on theta_o (MPSS) / theta_r (efficiency)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--w3", c.chain.w3, "Chain weight on theta_r (MPSS) / theta_m (efficiency)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--omega1", c.omega[0], "Tandem stage-1 weight")->check(CLI::Range(0.0, 1.0));
  app.add_option("--omega2", c.omega[1], "Tandem stage-2 weight")->check(CLI::Range(0.0, 1.0));
  app.add_option("--threads", c.threads, "Worker threads for per-DMU models")
      ->check(CLI::PositiveNumber);

  const auto data_opts = [&](CLI::App* sub, bool topology) {
    sub->add_option("--data", c.data, "DMU data CSV")->required();
    if (topology) sub->add_option("--topology", c.topology, "Network topology JSON")->required();
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a data file and optional topology");
  validate_cmd->add_option("--data", c.data, "DMU data CSV")->required();
  validate_cmd->add_option("--topology", c.topology, "Network topology JSON");

  CLI::App* summary_cmd = app.add_subcommand("summary", "Descriptive statistics per measure");
  data_opts(summary_cmd, false);

  CLI::App* blackbox_cmd = app.add_subcommand("blackbox-mpss", "Black-box MPSS scores");
  data_opts(blackbox_cmd, true);

  CLI::App* network_cmd = app.add_subcommand("network-mpss", "Two-stage network MPSS scores");
  data_opts(network_cmd, true);
  network_cmd->add_option("--intermediates", c.intermediates, "variable or radial")
      ->check(CLI::IsMember({"variable", "radial"}));
  network_cmd->add_flag("--stages", c.stages, "Add lexicographic stage scores");

  CLI::App* decompose_cmd = app.add_subcommand("decompose", "Tandem decomposition of network MPSS");
  decompose_cmd->add_option("--data", c.data, "DMU data CSV");
  decompose_cmd->add_option("--topology", c.topology, "Network topology JSON");
  decompose_cmd->add_option("--process-scores", c.process_scores, "Two process scores a,b")
      ->delimiter(',');

  CLI::App* chain_eff_cmd = app.add_subcommand("chain-eff", "Value chain efficiency");
  data_opts(chain_eff_cmd, true);

  CLI::App* chain_mpss_cmd = app.add_subcommand("chain-mpss", "Value chain MPSS");
  data_opts(chain_mpss_cmd, true);
  chain_mpss_cmd->add_flag("--targets", c.targets, "Report appropriate intermediate levels");

  CLI::App* kw_cmd = app.add_subcommand("kruskal-wallis", "Kruskal-Wallis test across score files");
  kw_cmd->add_option("--groups", c.groups, "Comma-separated group files")->required()->delimiter(',');
  kw_cmd->add_option("--column", c.column, "Column to read (default: last)");
  kw_cmd->add_flag("--no-tie-correction", c.no_tie_correction, "Report uncorrected H");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << " (see --help)\n";
    return validation_error;
  }

  try {
    if (validate_cmd->parsed()) cmd_validate(c, out, err);
    else if (summary_cmd->parsed()) cmd_summary(c, out, err);
    else if (blackbox_cmd->parsed()) cmd_blackbox(c, out, err);
    else if (network_cmd->parsed()) cmd_network(c, out, err);
    else if (decompose_cmd->parsed()) cmd_decompose(c, out, err);
    else if (chain_eff_cmd->parsed()) cmd_chain_eff(c, out, err);
    else if (chain_mpss_cmd->parsed()) cmd_chain_mpss(c, out, err);
    else if (kw_cmd->parsed()) cmd_kruskal(c, out, err);
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return solver_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return validation_error;
  }
  return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace mpss::cli
