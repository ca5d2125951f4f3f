#include "ghzsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghzsim/errors.hpp"
#include "ghzsim/validation.hpp"

namespace ghzsim::cli {

namespace {

using nlohmann::json;

constexpr double kMHz = 1e6;  // rad/s per angular MHz
constexpr double kMicro = 1e-6;

std::string pop_column(const BasisLabel& label) {
  return "pop_" + std::string(1, to_char(label.s)) + "_" + std::to_string(label.m) + "_" + std::to_string(label.n);
}

double number_field(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigurationError(std::string("config field '") + key + "' must be a number");
  return v.get<double>();
}

int int_field(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigurationError(std::string("config field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string string_field(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_string()) throw ConfigurationError(std::string("config field '") + key + "' must be a string");
  return v.get<std::string>();
}

// Columns for every basis state that is populated above the report floor at any sample.
std::vector<BasisLabel> populated_labels(const std::vector<const FidelityReport*>& reports, const HilbertShape& shape) {
  std::vector<BasisLabel> labels;
  for (const BasisLabel& label : basis_labels(shape)) {
    const bool used = std::any_of(reports.begin(), reports.end(), [&](const FidelityReport* r) {
      return std::any_of(r->populations.begin(), r->populations.end(),
                         [&](const auto& entry) { return entry.first == label; });
    });
    if (used) labels.push_back(label);
  }
  return labels;
}

double population_of(const FidelityReport& report, const BasisLabel& label) {
  for (const auto& [l, pop] : report.populations) {
    if (l == label) return pop;
  }
  return 0.0;
}

Tuning tuning_for(const RunConfig& config) {
  if (config.tune_g) return Tuning::retune;
  return config.time ? Tuning::unchecked : Tuning::require;
}

ProtocolOptions options_for(const RunConfig& config) {
  ProtocolOptions options;
  options.shape = config.shape;
  options.time = config.time;
  options.lab_dt = config.dt;
  options.samples = config.samples;
  return options;
}

}  // namespace

RunConfig default_config() {
  RunConfig config;
  config.params = SystemParams::resonant(8.95 * kMHz, 0.0, 0.05, 0.05, 200.0 * kMHz, 4000.0 * kMHz);
  return config;
}

RunConfig apply_config_json(RunConfig base, std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigurationError("config must be a JSON object");

  static const std::set<std::string> known = {"units", "Omega", "g",     "eta_L",  "eta_c", "nu",      "omega_0",
                                              "omega_c", "omega_L", "phi", "shape", "model", "initial", "block",
                                              "p",     "t",       "dt",    "samples", "output", "format"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw ConfigurationError("unknown config field '" + item.key() + "'");
  }

  double freq = kMHz;
  double time = kMicro;
  if (doc.contains("units")) {
    const std::string units = string_field(doc, "units");
    if (units == "SI") {
      freq = 1.0;
      time = 1.0;
    } else if (units != "MHz") {
      throw ConfigurationError("config field 'units' must be \"MHz\" or \"SI\"");
    }
  }
  base.time_unit = time;

  SystemParams& p = base.params;
  const std::pair<const char*, double*> frequencies[] = {{"Omega", &p.Omega},     {"nu", &p.nu},
                                                         {"omega_0", &p.omega_0}, {"omega_c", &p.omega_c},
                                                         {"omega_L", &p.omega_L}};
  for (const auto& [key, target] : frequencies) {
    if (doc.contains(key)) *target = number_field(doc, key) * freq;
  }
  if (doc.contains("eta_L")) p.eta_L = number_field(doc, "eta_L");
  if (doc.contains("eta_c")) p.eta_c = number_field(doc, "eta_c");
  if (doc.contains("phi")) p.phi = number_field(doc, "phi");
  if (doc.contains("g")) {
    if (doc["g"].is_null()) {
      base.tune_g = true;
    } else {
      p.g = number_field(doc, "g") * freq;
      base.tune_g = false;
    }
  }

  if (doc.contains("shape")) {
    const json& s = doc["shape"];
    if (s.is_string()) {
      base.shape = parse_shape(s.get<std::string>());
    } else if (s.is_array() && s.size() == 2 && s[0].is_number_integer() && s[1].is_number_integer()) {
      base.shape = HilbertShape(s[0].get<int>(), s[1].get<int>());
    } else {
      throw ConfigurationError("config field 'shape' must be \"NxM\" or [N, M]");
    }
  }
  if (doc.contains("model")) base.model = parse_model(string_field(doc, "model"));
  if (doc.contains("initial")) base.initial = BasisLabel::parse(string_field(doc, "initial"));
  if (doc.contains("block")) {
    const json& b = doc["block"];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer()) {
      throw ConfigurationError("config field 'block' must be [m, n]");
    }
    base.block_m = b[0].get<int>();
    base.block_n = b[1].get<int>();
  }
  if (doc.contains("p")) base.p = int_field(doc, "p");
  if (doc.contains("t")) {
    if (doc["t"].is_null()) {
      base.time.reset();
    } else {
      base.time = number_field(doc, "t") * time;
    }
  }
  if (doc.contains("dt")) {
    if (doc["dt"].is_null()) {
      base.dt.reset();
    } else {
      base.dt = number_field(doc, "dt") * time;
    }
  }
  if (doc.contains("samples")) base.samples = int_field(doc, "samples");
  if (doc.contains("format")) base.format = io::parse_format(string_field(doc, "format"));
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (o.is_string()) {
      base.output = o.get<std::string>();
    } else if (o.is_object()) {
      if (o.contains("path")) base.output = string_field(o, "path");
      if (o.contains("format")) base.format = io::parse_format(string_field(o, "format"));
    } else {
      throw ConfigurationError("config field 'output' must be a path or {\"path\", \"format\"}");
    }
  }
  return base;
}

void validate_config(const RunConfig& config) {
  config.params.validate();
  if (config.p < 1) throw ConfigurationError("p must be >= 1");
  if (config.block_m < 1 || config.block_n < 1) throw ConfigurationError("block indices must be >= 1");
  if (config.samples < 2) throw ConfigurationError("samples must be >= 2");
  if (config.time && !(*config.time >= 0.0)) throw ConfigurationError("t must be >= 0");
  if (config.dt && !(*config.dt > 0.0)) throw ConfigurationError("dt must be > 0");
  if (config.tune_g && !(config.params.eta_c > 0.0)) throw ConfigurationError("eta_c must be > 0 to tune g");
  if (!config.shape.contains(config.block_m, config.block_n)) {
    throw ConfigurationError("shape " + to_string(config.shape) + " does not contain block (" +
                             std::to_string(config.block_m) + "," + std::to_string(config.block_n) + ")");
  }
  const auto labels = block_labels(config.block_m, config.block_n);
  if (std::find(labels.begin(), labels.end(), config.initial) == labels.end()) {
    throw ConfigurationError("initial state " + config.initial.to_string() + " is not in block (" +
                             std::to_string(config.block_m) + "," + std::to_string(config.block_n) + ")");
  }
  if (config.model != Model::block_analytic) require_resonances(config.params);
  if (config.output.empty()) throw ConfigurationError("output path is empty");
}

HilbertShape parse_shape(std::string_view text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw InvalidArgument("shape must look like NxM, got '" + std::string(text) + "'");
  try {
    std::size_t used = 0;
    const std::string vib(text.substr(0, x));
    const std::string cav(text.substr(x + 1));
    const int v = std::stoi(vib, &used);
    if (used != vib.size()) throw std::invalid_argument("trailing");
    const int c = std::stoi(cav, &used);
    if (used != cav.size()) throw std::invalid_argument("trailing");
    return HilbertShape(v, c);
  } catch (const std::logic_error&) {
    throw InvalidArgument("shape must look like NxM, got '" + std::string(text) + "'");
  }
}

std::vector<double> parse_values(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '{' || c == '}' || c == ' '; }), s.end());
  if (s.empty()) throw InvalidArgument("empty value list");

  auto to_double = [&](const std::string& part) {
    try {
      std::size_t used = 0;
      const double v = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::logic_error&) {
      throw InvalidArgument("cannot parse value '" + part + "' in '" + std::string(text) + "'");
    }
  };

  std::vector<double> values;
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw InvalidArgument("range must be start:stop:step");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0) || stop < start) throw InvalidArgument("range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) values.push_back(start + static_cast<double>(k) * step);
  } else {
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) values.push_back(to_double(part));
  }
  return values;
}

std::string summary_path(const std::string& output, io::Format format) {
  std::filesystem::path path(output);
  const std::string stem = path.stem().string();
  path.replace_filename(stem + "_summary." + std::string(io::to_string(format)));
  return path.string();
}

GhzOutput run_ghz(const RunConfig& config) {
  validate_config(config);
  GhzOutput out;
  out.schedule = ghz_schedule(config.params, config.shape, config.block_m, config.block_n, config.p, tuning_for(config));
  const ProtocolOptions options = options_for(config);
  const ProtocolTrace trace = trace_protocol(out.schedule.params, config.initial, config.model, out.schedule, options);
  const double worst = check_truncation(trace, options);
  out.final_report = trace.points.back();
  out.final_report.max_truncation_leak = worst;

  std::vector<const FidelityReport*> reports;
  for (const FidelityReport& r : trace.points) reports.push_back(&r);
  const std::vector<BasisLabel> labels = populated_labels(reports, config.shape);

  out.series.columns = {"t_us", "fidelity", "norm", "block_leakage"};
  for (const BasisLabel& label : labels) out.series.columns.push_back(pop_column(label));
  for (const FidelityReport& r : trace.points) {
    std::vector<io::Cell> row = {r.time / kMicro, r.fidelity, r.norm, r.block_leakage};
    for (const BasisLabel& label : labels) row.emplace_back(population_of(r, label));
    out.series.rows.push_back(std::move(row));
  }

  out.summary.columns = {"model", "initial", "p", "t_p_us", "t_end_us", "tuned_g_MHz", "fidelity", "block_leakage",
                         "norm", "max_truncation_leak"};
  out.summary.rows.push_back({std::string(to_string(config.model)), pop_column(config.initial).substr(4),
                              static_cast<double>(config.p), out.schedule.t_p / kMicro, out.final_report.time / kMicro,
                              out.schedule.tuned_g / kMHz, out.final_report.fidelity, out.final_report.block_leakage,
                              out.final_report.norm, out.final_report.max_truncation_leak});
  return out;
}

io::Table run_sweep_table(const RunConfig& config, SweepAxis axis, const std::vector<double>& values) {
  validate_config(config);
  SweepSpec spec;
  spec.params = config.params;
  spec.initial = config.initial;
  spec.model = config.model;
  spec.options = options_for(config);
  spec.block_m = config.block_m;
  spec.block_n = config.block_n;
  spec.p = config.p;
  spec.tuning = tuning_for(config);

  std::vector<double> internal = values;
  if (axis == SweepAxis::dt) {
    for (double& v : internal) v *= config.time_unit;
  }
  const std::vector<SweepRow> rows = sweep(spec, axis, internal);

  std::vector<const FidelityReport*> reports;
  HilbertShape widest = config.shape;
  for (const SweepRow& row : rows) {
    reports.push_back(&row.report);
    for (const auto& [label, pop] : row.report.populations) {
      widest.vib_dim = std::max(widest.vib_dim, label.m + 1);
      widest.cav_dim = std::max(widest.cav_dim, label.n + 1);
    }
  }
  const std::vector<BasisLabel> labels = populated_labels(reports, widest);

  io::Table table;
  table.columns = {std::string(to_string(axis)), "model", "p", "t_p_us", "tuned_g_MHz", "fidelity", "block_leakage",
                   "norm", "max_truncation_leak"};
  for (const BasisLabel& label : labels) table.columns.push_back(pop_column(label));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    std::vector<io::Cell> cells = {values[i],
                                   row.report.model_tag,
                                   static_cast<double>(row.schedule.p),
                                   row.schedule.t_p / kMicro,
                                   row.schedule.tuned_g / kMHz,
                                   row.report.fidelity,
                                   row.report.block_leakage,
                                   row.report.norm,
                                   row.report.max_truncation_leak};
    for (const BasisLabel& label : labels) cells.emplace_back(population_of(row.report, label));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

namespace {

struct Flags {
  std::string config;
  std::string output;
  std::string format;
  std::string model;
  std::string shape;
  std::string initial;
  std::optional<int> p;
  std::optional<int> samples;
  std::optional<double> t;
  std::optional<double> dt;
};

void add_run_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "JSON configuration file");
  cmd->add_option("--output", flags.output, "Result file path");
  cmd->add_option("--format", flags.format, "csv or json");
  cmd->add_option("--model", flags.model, "block, ld, rwa or lab");
  cmd->add_option("--shape", flags.shape, "Truncation NxM (phonons x photons)");
  cmd->add_option("--p", flags.p, "Pulse index p >= 1");
  cmd->add_option("--initial", flags.initial, "Initial basis state, e.g. g,0,0");
  cmd->add_option("--samples", flags.samples, "Number of time samples");
  cmd->add_option("--t", flags.t, "Explicit interaction time (config time units)");
  cmd->add_option("--dt", flags.dt, "Lab-frame integrator step (config time units)");
}

RunConfig build_config(const Flags& flags) {
  RunConfig config = default_config();
  if (!flags.config.empty()) config = apply_config_json(config, io::read_file(flags.config));
  if (!flags.format.empty()) {
    config.format = io::parse_format(flags.format);
  }
  if (!flags.output.empty()) {
    config.output = flags.output;
  } else if (flags.config.empty() && config.format == io::Format::json) {
    config.output = "ghz_series.json";
  }
  if (!flags.model.empty()) config.model = parse_model(flags.model);
  if (!flags.shape.empty()) config.shape = parse_shape(flags.shape);
  if (!flags.initial.empty()) config.initial = BasisLabel::parse(flags.initial);
  if (flags.p) config.p = *flags.p;
  if (flags.samples) config.samples = *flags.samples;
  if (flags.t) config.time = *flags.t * config.time_unit;
  if (flags.dt) config.dt = *flags.dt * config.time_unit;
  return config;
}

int cmd_validate(bool list_only, bool inject_fault, std::ostream& out) {
  if (list_only) {
    for (const std::string& name : validation_check_names()) out << name << '\n';
    return kSuccess;
  }
  ValidationOptions options;
  if (inject_fault) options.ok_perturbation = 1e-3;
  bool all = true;
  for (const CheckResult& r : run_validation(options)) {
    all = all && r.passed;
    char threshold[32];
    std::snprintf(threshold, sizeof threshold, "%g", r.threshold);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " <= " << threshold << " (measured "
        << io::format_double(r.measured) << ")\n";
  }
  out << (all ? "validate: all checks passed\n" : "validate: FAILED\n");
  return all ? kSuccess : kFailure;
}

int cmd_ghz(const Flags& flags, std::ostream& out) {
  const RunConfig config = build_config(flags);
  const GhzOutput result = run_ghz(config);
  io::write_file(config.output, io::render(result.series, config.format));
  const std::string summary_file = summary_path(config.output, config.format);
  io::write_file(summary_file, io::render(result.summary, config.format));
  out << "ghz: model=" << to_string(config.model) << " p=" << config.p
      << " t_p_us=" << io::format_double(result.schedule.t_p / kMicro)
      << " tuned_g_MHz=" << io::format_double(result.schedule.tuned_g / kMHz)
      << " fidelity=" << io::format_double(result.final_report.fidelity)
      << " block_leakage=" << io::format_double(result.final_report.block_leakage) << " series=" << config.output
      << " summary=" << summary_file << '\n';
  return kSuccess;
}

int cmd_sweep(const Flags& flags, const std::string& axis_name, const std::string& values_text, std::ostream& out,
              std::ostream& err) {
  SweepAxis axis;
  try {
    axis = parse_axis(axis_name);
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  const RunConfig config = build_config(flags);
  const std::vector<double> values = parse_values(values_text);
  const io::Table table = run_sweep_table(config, axis, values);
  io::write_file(config.output, io::render(table, config.format));
  out << "sweep: axis=" << to_string(axis) << " rows=" << table.rows.size() << " output=" << config.output << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-step GHZ state generation for a trapped ion in an optical cavity"};
  app.require_subcommand(1);

  bool list_only = false;
  bool inject_fault = false;
  auto* validate = app.add_subcommand("validate", "Run the built-in consistency checks");
  validate->add_flag("--list", list_only, "Print check names without running them");
  validate->add_flag("--inject-fault", inject_fault, "Test hook: perturb O_k by 1e-3 so checks must fail")
      ->group("");

  Flags ghz_flags;
  auto* ghz = app.add_subcommand("ghz", "Run the GHZ protocol and write a time series and summary");
  add_run_flags(ghz, ghz_flags);

  Flags sweep_flags;
  std::string axis;
  std::string values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the protocol over a parameter axis");
  add_run_flags(sweep_cmd, sweep_flags);
  std::string axis_help = "One of:";
  for (const std::string& name : sweep_axis_names()) axis_help += " " + name;
  sweep_cmd->add_option("--axis", axis, axis_help)->required();
  sweep_cmd->add_option("--values", values, "start:stop:step or v1,v2,...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (*validate) return cmd_validate(list_only, inject_fault, out);
    if (*ghz) return cmd_ghz(ghz_flags, out);
    return cmd_sweep(sweep_flags, axis, values, out, err);
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return kFailure;
  } catch (const TruncationError& e) {
    err << "truncation error: " << e.what() << '\n';
    return kFailure;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kFailure;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace ghzsim::cli
