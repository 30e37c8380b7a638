#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "asyspill/asyspill.hpp"

namespace asyspill::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Records every bound option so the resolved configuration can be echoed into metadata.
/// The output directory is not echoed: outputs then depend only on inputs and settings.
class OptionLog {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    auto* opt = app->add_option("--" + name, target, help);
    entries_.emplace_back(name, [&target] { return stringify(target); });
    return opt;
  }

  CLI::Option* add_flag(CLI::App* app, const std::string& name, bool& target, const std::string& help) {
    auto* opt = app->add_flag("--" + name, target, help);
    entries_.emplace_back(name, [&target] { return std::string(target ? "true" : "false"); });
    return opt;
  }

  Json to_json() const {
    Json j = Json::object();
    for (const auto& [name, value] : entries_)
      if (name != "out") j[name] = value();
    return j;
  }

 private:
  template <class T>
  static std::string stringify(const T& v) {
    if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      std::string out;
      for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
      return out;
    } else if constexpr (std::is_floating_point_v<T>) {
      return format_double(v);
    } else {
      return std::to_string(v);
    }
  }

  std::vector<std::pair<std::string, std::function<std::string()>>> entries_;
};

struct VarOptions {
  int lags = 2;
  int horizon = 10;
  bool no_intercept = false;
  std::string sigma = "variance";
  bool log_transform = false;

  VarSpec spec() const { return {lags, !no_intercept, horizon}; }
  SigmaConvention convention() const {
    return sigma == "std_dev" ? SigmaConvention::std_dev : SigmaConvention::variance;
  }
};

struct RollingOptionsCli {
  int window = 200;
  int step = 1;
};

struct BootstrapOptions {
  int replications = 1000;
  int days = 200;
  std::uint64_t seed = 20240601;
  double jump_intensity = 0.0;
  double jump_sd = 0.01;
  std::string subsample = "5min";
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

inline void add_var_options(CLI::App* app, OptionLog& log, VarOptions& o) {
  log.add(app, "lags", o.lags, "VAR lag order p")->check(CLI::PositiveNumber);
  log.add(app, "horizon", o.horizon, "forecast horizon H")->check(CLI::PositiveNumber);
  log.add_flag(app, "no-intercept", o.no_intercept, "fit the VAR without an intercept");
  log.add(app, "sigma", o.sigma, "sigma_jj convention in the FEVD")->check(CLI::IsMember({"variance", "std_dev"}));
  log.add_flag(app, "log-transform", o.log_transform, "apply log(x + 1e-12) to measures before fitting");
}

inline void add_rolling_options(CLI::App* app, OptionLog& log, RollingOptionsCli& o) {
  log.add(app, "window", o.window, "rolling window length in days")->check(CLI::PositiveNumber);
  log.add(app, "step", o.step, "rolling step in days")->check(CLI::PositiveNumber);
}

inline void add_bootstrap_options(CLI::App* app, OptionLog& log, BootstrapOptions& o) {
  log.add(app, "replications", o.replications, "bootstrap replications R")->check(CLI::PositiveNumber);
  log.add(app, "days", o.days, "simulated days per replication T")->check(CLI::PositiveNumber);
  log.add(app, "seed", o.seed, "root RNG seed");
  log.add(app, "jump-intensity", o.jump_intensity, "expected jumps per asset per day")->check(CLI::NonNegativeNumber);
  log.add(app, "jump-sd", o.jump_sd, "jump size standard deviation")->check(CLI::NonNegativeNumber);
  log.add(app, "subsample", o.subsample, "intraday sampling of simulated paths")->check(CLI::IsMember({"5min", "36obs"}));
}

inline BootstrapConfig make_bootstrap_config(const BootstrapOptions& b, const VarOptions& v, unsigned threads) {
  BootstrapConfig cfg;
  cfg.params.jump_intensity = b.jump_intensity;
  cfg.params.jump_sd = b.jump_sd;
  cfg.days = b.days;
  cfg.replications = b.replications;
  cfg.seed = b.seed;
  cfg.subsample = b.subsample == "36obs" ? Subsample::obs36 : Subsample::five_minute;
  cfg.var = v.spec();
  cfg.convention = v.convention();
  cfg.threads = threads;
  return cfg;
}

inline Json params_json(const SvParams& p) {
  return Json{{"mu1", p.mu[0]},         {"mu2", p.mu[1]},       {"beta0", p.beta0},
              {"beta1", p.beta1},       {"alpha", p.alpha},     {"gamma1", p.gamma[0]},
              {"gamma2", p.gamma[1]},   {"jump_sd", p.jump_sd}, {"jump_intensity", p.jump_intensity},
              {"steps_per_day", p.steps_per_day}};
}

inline Json quantiles_json(const Quantiles& q) { return Json{{"q2_5", q.q025}, {"q50", q.q50}, {"q97_5", q.q975}}; }

inline Json metadata(const std::string& command, const OptionLog& log) {
  return Json{{"command", command}, {"version", kVersion}, {"config", log.to_json()}};
}

inline std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path.string() + "'");
  return f;
}

inline void write_json(const fs::path& path, const Json& j) {
  auto f = open_output(path);
  f << j.dump(2) << '\n';
}

inline void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw ValidationError("--out is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
}

inline void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ValidationError(what + " is required");
  if (!fs::is_regular_file(path)) throw ValidationError(what + " '" + path + "' does not exist");
}

/// `ID=PATH` or `PATH` (id = file stem).
inline std::pair<std::string, std::string> split_tick_spec(const std::string& spec) {
  if (auto eq = spec.find('='); eq != std::string::npos) return {spec.substr(0, eq), spec.substr(eq + 1)};
  return {fs::path(spec).stem().string(), spec};
}

inline MeasurePanel maybe_log(MeasurePanel p, bool on) { return on ? log_transform(std::move(p)) : p; }

// --------------------------------------------------------------------------

inline void cmd_measures(Context& ctx, const OptionLog& log, const std::vector<std::string>& ticks,
                         const std::string& calendar, const std::string& out, bool log_transform_flag) {
  if (ticks.size() < 2) throw ValidationError("measures: at least two --ticks inputs are required");
  require_file(calendar, "--calendar");
  std::vector<std::pair<std::string, std::string>> inputs;
  for (const auto& t : ticks) {
    inputs.push_back(split_tick_spec(t));
    require_file(inputs.back().second, "tick file");
  }
  const auto cal = load_calendar(calendar);
  std::vector<RawTickFile> files(inputs.size());
  parallel_for(inputs.size(), 1, [&](std::size_t i) { files[i] = load_ticks(inputs[i].second, inputs[i].first); });
  const auto panel = build_panel(files, cal);
  auto measures = realized_measures(panel);
  measures.rv = maybe_log(std::move(measures.rv), log_transform_flag);
  measures.rs_minus = maybe_log(std::move(measures.rs_minus), log_transform_flag);
  measures.rs_plus = maybe_log(std::move(measures.rs_plus), log_transform_flag);

  ensure_dir(out);
  {
    auto f = open_output(fs::path(out) / "panel.csv");
    f << "date,time";
    for (const auto& a : panel.assets) f << ',' << a;
    f << '\n';
    for (std::size_t d = 0; d < panel.num_days(); ++d)
      for (std::size_t k = 0; k < panel.bar_times.size(); ++k) {
        f << format_date(panel.days[d]) << ',' << format_time(panel.bar_times[k]);
        for (std::size_t a = 0; a < panel.num_assets(); ++a) f << ',' << format_double(panel.log_price(d, a, k));
        f << '\n';
      }
  }
  for (const MeasurePanel* m : {&measures.rv, &measures.rs_minus, &measures.rs_plus}) {
    auto f = open_output(fs::path(out) / (std::string(to_string(m->kind)) + ".csv"));
    write_measure_csv(f, *m);
  }

  Json meta = metadata("measures", log);
  meta["assets"] = panel.assets;
  meta["days"] = panel.num_days();
  meta["bars_per_day"] = panel.bars_per_day();
  meta["rows"] = Json{{"panel.csv", panel.num_days() * panel.bar_times.size()},
                      {"rv.csv", panel.num_days()},
                      {"rs_minus.csv", panel.num_days()},
                      {"rs_plus.csv", panel.num_days()}};
  Json warnings = Json::array();
  for (const auto& w : panel.warnings) {
    warnings.push_back(Json{{"date", format_date(w.date)}, {"asset", w.asset_id}, {"message", w.message}});
    ctx.err << "warning: " << format_date(w.date) << " " << w.asset_id << ": " << w.message << '\n';
  }
  meta["warnings"] = warnings;
  write_json(fs::path(out) / "measures_meta.json", meta);
  ctx.out << "measures: " << panel.num_days() << " days x " << panel.num_assets() << " assets written to " << out
          << '\n';
}

inline MeasureKind parse_kind(const std::string& s) {
  if (s == "rs_minus") return MeasureKind::rs_minus;
  if (s == "rs_plus") return MeasureKind::rs_plus;
  return MeasureKind::rv;
}

inline void cmd_spillover(Context& ctx, const OptionLog& log, const std::string& measures, const std::string& kind,
                          const VarOptions& var, const RollingOptionsCli& roll, bool dump_fevd, unsigned threads,
                          const std::string& out) {
  require_file(measures, "--measures");
  auto panel = maybe_log(load_measure_csv(measures, parse_kind(kind)), var.log_transform);
  const RollingSpec rspec{roll.window, roll.step};
  var.spec().validate();
  rspec.validate(panel.num_assets(), var.spec());
  if (panel.num_days() < roll.window)
    throw ValidationError("spillover: panel has " + std::to_string(panel.num_days()) +
                          " days, fewer than the window length " + std::to_string(roll.window));
  auto series = rolling_spillovers(panel, var.spec(), rspec, {threads, var.convention(), dump_fevd});

  ensure_dir(out);
  {
    auto f = open_output(fs::path(out) / "spillover.csv");
    write_spillover_csv(f, series);
  }
  if (dump_fevd) {
    fs::create_directories(fs::path(out) / "fevd");
    for (const auto& w : series.windows) {
      if (!w.fevd) continue;
      auto f = open_output(fs::path(out) / "fevd" / ("fevd_" + format_date(w.end_date) + ".csv"));
      write_fevd_csv(f, series.assets, *w.fevd);
    }
  }
  std::size_t missing = 0, unstable = 0;
  Json diagnostics = Json::array();
  for (const auto& w : series.windows) {
    if (w.missing()) {
      ++missing;
      diagnostics.push_back(Json{{"date", format_date(w.end_date)}, {"diagnostic", w.diagnostic}});
    }
    if (w.unstable()) ++unstable;
  }
  Json meta = metadata("spillover", log);
  meta["windows"] = series.windows.size();
  meta["missing_windows"] = missing;
  meta["unstable_windows"] = unstable;
  meta["diagnostics"] = diagnostics;
  meta["sigma_jj"] = var.convention() == SigmaConvention::variance
                         ? "sigma_jj is the residual variance (diagonal of Sigma_eps)"
                         : "sigma_jj is the residual standard deviation (sqrt of the diagonal of Sigma_eps)";
  write_json(fs::path(out) / "spillover_meta.json", meta);
  ctx.out << "spillover: " << series.windows.size() << " windows (" << missing << " missing, " << unstable
          << " unstable) written to " << out << '\n';
}

inline Json spillover_json(const std::vector<std::string>& assets, const SpilloverSet& s) {
  auto vec = [](const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
  };
  Json pairwise = Json::array();
  for (Eigen::Index i = 0; i < s.pairwise.rows(); ++i) pairwise.push_back(vec(s.pairwise.row(i).transpose()));
  return Json{{"assets", assets},         {"total", s.total},       {"from_others", vec(s.from_others)},
              {"to_others", vec(s.to_others)}, {"net", vec(s.net)}, {"pairwise", pairwise}};
}

inline void cmd_fevd(Context& ctx, const OptionLog& log, const std::string& measures, const std::string& kind,
                     const VarOptions& var, int window, const std::string& end_date, const std::string& out) {
  require_file(measures, "--measures");
  auto panel = maybe_log(load_measure_csv(measures, parse_kind(kind)), var.log_transform);
  Eigen::Index end = panel.num_days();
  if (!end_date.empty()) {
    auto d = parse_date(end_date);
    if (!d) throw ValidationError("--end-date must be YYYY-MM-DD");
    auto it = std::find(panel.dates.begin(), panel.dates.end(), *d);
    if (it == panel.dates.end()) throw ValidationError("--end-date " + end_date + " is not in the panel");
    end = static_cast<Eigen::Index>(it - panel.dates.begin()) + 1;
  }
  const Eigen::Index rows = window > 0 ? window : end;
  if (rows > end)
    throw ValidationError("fevd: window of " + std::to_string(rows) + " days exceeds the " + std::to_string(end) +
                          " available days");
  const Eigen::Index first = end - rows;
  auto est = estimate_spillovers(panel.values.middleRows(first, rows), var.spec(), var.convention(),
                                 format_date(panel.dates[static_cast<std::size_t>(first)]));
  ensure_dir(out);
  {
    auto f = open_output(fs::path(out) / "fevd.csv");
    write_fevd_csv(f, panel.assets, est.fevd);
  }
  Json meta = metadata("fevd", log);
  meta["window_start"] = format_date(panel.dates[static_cast<std::size_t>(first)]);
  meta["window_end"] = format_date(panel.dates[static_cast<std::size_t>(end - 1)]);
  meta["spectral_radius"] = est.spectral_radius;
  meta["stable"] = est.spectral_radius < 1.0;
  meta["indices"] = spillover_json(panel.assets, est.indices);
  write_json(fs::path(out) / "fevd_meta.json", meta);
  ctx.out << "fevd: total spillover " << format_double(est.indices.total, 10) << "% written to " << out << '\n';
}

inline void check_panels_aligned(const MeasurePanel& minus, const MeasurePanel& plus) {
  if (minus.assets != plus.assets) throw AlignmentError("sam: RS- and RS+ files list different assets");
  if (minus.dates == plus.dates) return;
  std::vector<Date> only;
  std::set_symmetric_difference(minus.dates.begin(), minus.dates.end(), plus.dates.begin(), plus.dates.end(),
                                std::back_inserter(only));
  std::string list;
  for (std::size_t i = 0; i < only.size() && i < 20; ++i) list += (i ? ", " : "") + format_date(only[i]);
  throw AlignmentError("sam: RS- and RS+ panels are misaligned; dates present in only one file: " +
                       (list.empty() ? std::string("<order differs>") : list));
}

inline Quantiles read_summary_quantiles(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open bootstrap summary '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
    const auto& q = j.at("quantiles");
    return {q.at("q2_5").get<double>(), q.at("q50").get<double>(), q.at("q97_5").get<double>()};
  } catch (const Json::exception& e) {
    throw DataError("bootstrap summary '" + path + "': " + e.what());
  }
}

inline void cmd_sam(Context& ctx, const OptionLog& log, const std::string& minus_path, const std::string& plus_path,
                    const VarOptions& var, const RollingOptionsCli& roll, const BootstrapOptions& boot,
                    const std::string& summary_path, unsigned threads, const std::string& out) {
  require_file(minus_path, "--minus");
  require_file(plus_path, "--plus");
  auto minus = maybe_log(load_measure_csv(minus_path, MeasureKind::rs_minus), var.log_transform);
  auto plus = maybe_log(load_measure_csv(plus_path, MeasureKind::rs_plus), var.log_transform);
  check_panels_aligned(minus, plus);
  const RollingSpec rspec{roll.window, roll.step};
  var.spec().validate();
  rspec.validate(plus.num_assets(), var.spec());
  if (plus.num_days() < roll.window)
    throw ValidationError("sam: panel has " + std::to_string(plus.num_days()) + " days, fewer than the window length " +
                          std::to_string(roll.window));

  Quantiles band;
  Json ci_source;
  if (!summary_path.empty()) {
    require_file(summary_path, "--bootstrap-summary");
    band = read_summary_quantiles(summary_path);
    ci_source = Json{{"bootstrap_summary", summary_path}};
  } else {
    auto dist = bootstrap_sam(make_bootstrap_config(boot, var, threads));
    band = dist.quantiles;
    ci_source = Json{{"replications", dist.replications}, {"dropped", dist.dropped}};
  }

  const RollingOptions ropts{threads, var.convention(), false};
  const auto splus = rolling_spillovers(plus, var.spec(), rspec, ropts);
  const auto sminus = rolling_spillovers(minus, var.spec(), rspec, ropts);

  std::vector<SamSeries> series{sam_total(splus, sminus)};
  for (int a = 0; a < static_cast<int>(plus.assets.size()); ++a) {
    series.push_back(sam_directional(splus, sminus, a, Direction::from));
    series.push_back(sam_directional(splus, sminus, a, Direction::to));
  }

  ensure_dir(out);
  Json summary = metadata("sam", log);
  summary["ci"] = Json{{"low", band.q025}, {"median", band.q50}, {"high", band.q975}, {"source", ci_source}};
  Json per_series = Json::array();
  for (auto& s : series) {
    s.ci_low = band.q025;
    s.ci_high = band.q975;
    auto f = open_output(fs::path(out) / ("sam_" + s.label + ".csv"));
    write_sam_csv(f, s);
    std::size_t reject = 0, keep = 0, na = 0;
    for (double v : s.sam) switch (test_symmetry(v, band)) {
        case SymmetryDecision::reject: ++reject; break;
        case SymmetryDecision::fail_to_reject: ++keep; break;
        case SymmetryDecision::not_available: ++na; break;
      }
    per_series.push_back(Json{{"series", s.label}, {"windows", s.sam.size()}, {"reject", reject},
                              {"fail_to_reject", keep}, {"not_available", na}});
  }
  summary["series"] = per_series;
  write_json(fs::path(out) / "sam_summary.json", summary);
  ctx.out << "sam: " << series.size() << " series over " << series.front().sam.size() << " windows written to " << out
          << '\n';
}

inline void cmd_bootstrap(Context& ctx, const OptionLog& log, const BootstrapOptions& boot, const VarOptions& var,
                          unsigned threads, const std::string& out) {
  const auto cfg = make_bootstrap_config(boot, var, threads);
  const auto dist = bootstrap_sam(cfg);
  ensure_dir(out);
  {
    auto f = open_output(fs::path(out) / "bootstrap_distribution.csv");
    f << "replication,sam\n";
    for (std::size_t r = 0; r < dist.sam_values.size(); ++r) f << r << ',' << format_double(dist.sam_values[r]) << '\n';
  }
  Json summary = metadata("bootstrap", log);
  summary["replications"] = dist.replications;
  summary["dropped"] = dist.dropped;
  summary["mean"] = dist.mean;
  summary["quantiles"] = quantiles_json(dist.quantiles);
  summary["params"] = params_json(cfg.params);
  summary["subsample"] = to_string(cfg.subsample);
  summary["seed_scheme"] = "replication r uses seed splitmix64(seed ^ splitmix64(r))";
  write_json(fs::path(out) / "bootstrap_summary.json", summary);
  ctx.out << "bootstrap: q2.5=" << format_double(dist.quantiles.q025, 6) << " q50="
          << format_double(dist.quantiles.q50, 6) << " q97.5=" << format_double(dist.quantiles.q975, 6) << " ("
          << dist.dropped << " dropped) written to " << out << '\n';
}

// --------------------------------------------------------------------------
// Config files

/// Reads `key=value` lines, or the `config` object of a metadata JSON file.
inline std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::pair<std::string, std::string>> out;
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      auto j = Json::parse(text);
      for (const auto& [k, v] : j.at("config").items()) out.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    } catch (const Json::exception& e) {
      throw ValidationError("config file '" + path + "': " + e.what());
    }
    return out;
  }
  std::istringstream lines(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected key=value");
    out.emplace_back(std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1))));
  }
  return out;
}

/// Places config entries ahead of the command-line flags of the chosen subcommand, so
/// explicit flags (parsed later, last value wins) override file values.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args, const CLI::App& app) {
  std::size_t sub_pos = args.size();
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!args[i].empty() && args[i][0] != '-') {
      sub_pos = i;
      break;
    }
  if (sub_pos == args.size()) return args;
  const CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[sub_pos]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1);
  if (!config_path.empty()) {
    for (const auto& [key, value] : read_config(config_path)) {
      if (sub->get_option_no_throw("--" + key) == nullptr || key == "threads")
        throw ValidationError("config file: unknown key '" + key + "' for '" + args[sub_pos] + "'");
      out.push_back("--" + key + "=" + value);
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// --------------------------------------------------------------------------

/// Runs the CLI; returns the process exit code (0 ok, 2 validation, 3 data, 4 numerical).
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Context ctx{out, err};
  CLI::App app{"Asymmetric volatility spillovers from realized semivariances", "asyspill"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  unsigned threads = 1;
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "worker threads (results do not depend on it)");
    sub->add_option("--config", "key=value config file or a previous run's metadata JSON");
  };

  // measures
  OptionLog measures_log;
  std::vector<std::string> ticks;
  std::string calendar, measures_out;
  bool measures_log_transform = false;
  auto* measures = app.add_subcommand("measures", "tick files -> RV, RS-, RS+ panels");
  measures_log.add(measures, "ticks", ticks, "ASSET=PATH tick files (comma separated or repeated)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  measures_log.add(measures, "calendar", calendar, "calendar file");
  measures_log.add(measures, "out", measures_out, "output directory");
  measures_log.add_flag(measures, "log-transform", measures_log_transform, "write log(x + 1e-12) measures");
  add_threads(measures);

  // spillover
  OptionLog spill_log;
  std::string spill_measures, spill_kind = "rv", spill_out;
  VarOptions spill_var;
  RollingOptionsCli spill_roll;
  bool dump_fevd = false;
  auto* spillover = app.add_subcommand("spillover", "rolling-window spillover indices");
  spill_log.add(spillover, "measures", spill_measures, "measure CSV");
  spill_log.add(spillover, "kind", spill_kind, "measure kind label")->check(CLI::IsMember({"rv", "rs_minus", "rs_plus"}));
  add_var_options(spillover, spill_log, spill_var);
  add_rolling_options(spillover, spill_log, spill_roll);
  spill_log.add_flag(spillover, "dump-fevd", dump_fevd, "write the normalized FEVD table of every window");
  spill_log.add(spillover, "out", spill_out, "output directory");
  add_threads(spillover);

  // fevd
  OptionLog fevd_log;
  std::string fevd_measures, fevd_kind = "rv", fevd_end, fevd_out;
  VarOptions fevd_var;
  int fevd_window = 0;
  auto* fevd = app.add_subcommand("fevd", "generalized FEVD table for one window");
  fevd_log.add(fevd, "measures", fevd_measures, "measure CSV");
  fevd_log.add(fevd, "kind", fevd_kind, "measure kind label")->check(CLI::IsMember({"rv", "rs_minus", "rs_plus"}));
  add_var_options(fevd, fevd_log, fevd_var);
  fevd_log.add(fevd, "window", fevd_window, "window length in days (0 = all days up to --end-date)")
      ->check(CLI::NonNegativeNumber);
  fevd_log.add(fevd, "end-date", fevd_end, "last date of the window (default: last panel date)");
  fevd_log.add(fevd, "out", fevd_out, "output directory");
  add_threads(fevd);

  // sam
  OptionLog sam_log;
  std::string sam_minus, sam_plus, sam_summary, sam_out;
  VarOptions sam_var;
  RollingOptionsCli sam_roll;
  BootstrapOptions sam_boot;
  auto* sam = app.add_subcommand("sam", "spillover asymmetry measures with bootstrap bands");
  sam_log.add(sam, "minus", sam_minus, "RS- measure CSV");
  sam_log.add(sam, "plus", sam_plus, "RS+ measure CSV");
  add_var_options(sam, sam_log, sam_var);
  add_rolling_options(sam, sam_log, sam_roll);
  sam_log.add(sam, "bootstrap-summary", sam_summary, "reuse quantiles from a bootstrap_summary.json");
  add_bootstrap_options(sam, sam_log, sam_boot);
  sam_log.add(sam, "out", sam_out, "output directory");
  add_threads(sam);

  // bootstrap
  OptionLog boot_log;
  BootstrapOptions boot;
  VarOptions boot_var;
  std::string boot_out;
  auto* bootstrap = app.add_subcommand("bootstrap", "simulated null distribution of SAM");
  add_bootstrap_options(bootstrap, boot_log, boot);
  add_var_options(bootstrap, boot_log, boot_var);
  boot_log.add(bootstrap, "out", boot_out, "output directory");
  add_threads(bootstrap);

  try {
    auto expanded = expand_config(args, app);
    std::reverse(expanded.begin(), expanded.end());
    app.parse(expanded);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return static_cast<int>(ErrorKind::validation);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  }

  try {
    if (measures->parsed()) {
      cmd_measures(ctx, measures_log, ticks, calendar, measures_out, measures_log_transform);
    } else if (spillover->parsed()) {
      cmd_spillover(ctx, spill_log, spill_measures, spill_kind, spill_var, spill_roll, dump_fevd, threads, spill_out);
    } else if (fevd->parsed()) {
      cmd_fevd(ctx, fevd_log, fevd_measures, fevd_kind, fevd_var, fevd_window, fevd_end, fevd_out);
    } else if (sam->parsed()) {
      cmd_sam(ctx, sam_log, sam_minus, sam_plus, sam_var, sam_roll, sam_boot, sam_summary, threads, sam_out);
    } else if (bootstrap->parsed()) {
      cmd_bootstrap(ctx, boot_log, boot, boot_var, threads, boot_out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::validation);
  }
  return 0;
}

}  // namespace asyspill::cli
