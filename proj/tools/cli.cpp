#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "iotids/container.hpp"
#include "iotids/error.hpp"
#include "iotids/ingest.hpp"
#include "iotids/manifest.hpp"
#include "iotids/metrics.hpp"
#include "iotids/pipeline.hpp"
#include "iotids/synth.hpp"
#include "iotids/workflow.hpp"

namespace iotids::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatMismatch, path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

// Flat JSON config; every key must name a known setting. Values are applied
// as defaults before flags are parsed, so flags win.
struct Settings {
  std::string combination = "group-by-timestamp";
  bool aggregate = true;
  std::size_t block_size = 500;
  double train_fraction = 0.7;
  std::uint64_t seed = 0;
  std::string imputation = "miss3";
  std::size_t step = 20;

  void apply(const json& config) {
    if (!config.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : config.items()) {
      try {
        if (key == "combination") combination = value.get<std::string>();
        else if (key == "aggregate") aggregate = value.get<bool>();
        else if (key == "block_size") block_size = value.get<std::size_t>();
        else if (key == "train_fraction") train_fraction = value.get<double>();
        else if (key == "seed") seed = value.get<std::uint64_t>();
        else if (key == "imputation") imputation = value.get<std::string>();
        else if (key == "step") step = value.get<std::size_t>();
        else throw UsageError("unknown config key '" + key + "'");
      } catch (const json::exception&) {
        throw UsageError("config key '" + key + "' has the wrong type");
      }
    }
  }
};

std::optional<std::string> find_config_arg(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return kExitUsage;
    case ErrorCode::PartitionInfeasible: return kExitInfeasible;
    default: return kExitData;
  }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message,
                  int status) {
  err << json{{"error", {{"code", code}, {"message", message}, {"exit_status", status}}}}.dump()
      << '\n';
}

std::string dataset_label(const DatasetManifest& m, const std::string& name) {
  return name + std::to_string(m.config.block_size) + (m.config.aggregate ? "a" : "n");
}

// --- subcommands ----------------------------------------------------------

struct SynthArgs {
  std::string scenario;
  std::string preset;
  std::int64_t block_seconds = 3000;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_synth(const SynthArgs& a, std::ostream& out) {
  Scenario scenario;
  if (!a.scenario.empty()) {
    scenario = scenario_from_json(read_json_file(a.scenario));
  } else if (a.preset == "separable") {
    scenario = separable_scenario(a.seed.value_or(0), a.block_seconds);
  } else {
    throw UsageError("synth needs --scenario FILE or --preset separable");
  }
  if (a.seed) scenario.seed = *a.seed;
  const GeneratedData data = generate(scenario);
  write_generated(data, a.out);
  write_json_file(fs::path(a.out) / "scenario.json", to_json(scenario));
  out << to_json(data.truth).dump(2) << '\n';
  return kExitOk;
}

struct StatsArgs {
  std::string input;
  std::string out;
  std::string combination = "group-by-timestamp";
};

int run_stats(const StatsArgs& a, std::ostream& out) {
  const SensorStreams streams = load_sensor_dir(a.input);
  const IngestReport report = dataset_stats(streams);
  const CombinedDataset combined = combine(streams, parse_combination(a.combination));
  const auto aggregated = aggregate_keep_first(combined.rows);

  json j = to_json(report);
  j["aggregation"] = {
      {"combination", std::string(combination_name(parse_combination(a.combination)))},
      {"combined_rows", combined.rows.size()},
      {"class_conflicts", combined.class_conflicts},
      {"rows", aggregated.size()},
      {"class_counts", to_json(class_histogram(aggregated))},
  };
  fs::create_directories(a.out);
  write_json_file(fs::path(a.out) / "report.json", j);
  std::ofstream counts(fs::path(a.out) / "timestamp_counts.csv", std::ios::trunc);
  if (!counts) throw Error(ErrorCode::Io, "cannot write timestamp_counts.csv");
  write_timestamp_counts_csv(counts, report);

  out << "total rows           " << report.total_rows() << '\n'
      << "distinct timestamps  " << report.distinct_timestamps() << '\n'
      << "peak readings/second";
  for (std::size_t s = 0; s < kSensorCount; ++s) {
    out << ' ' << sensor_name(kAllSensors[s]) << '=' << report.sensors[s].peak_per_second();
  }
  out << "\naggregated rows      " << aggregated.size() << '\n';
  return kExitOk;
}

struct PrepareArgs {
  std::string input;
  std::string out;
};

int run_prepare(const PrepareArgs& a, const Settings& s, std::ostream& out) {
  PipelineConfig config;
  config.combination = parse_combination(s.combination);
  config.aggregate = s.aggregate;
  config.block_size = s.block_size;
  config.train_fraction = s.train_fraction;
  config.seed = s.seed;
  if (config.block_size == 0) throw UsageError("--block-size must be positive");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw UsageError("--train-fraction must lie in (0, 1)");
  }

  const PreparedStore store = prepare(load_sensor_dir(a.input), config);
  write_prepared(store, a.out);
  const auto& m = store.manifest;
  std::size_t train = 0;
  for (const auto& c : m.chunks) train += c.partition == Partition::Train;
  out << "rows " << m.rows << " (from " << m.source_rows << " readings), chunks "
      << m.chunks.size() << " (train " << train << ", test " << m.chunks.size() - train
      << "), seed " << m.effective_seed << '\n';
  return kExitOk;
}

struct EncodeArgs {
  std::string prepared;
  std::string out;
  std::size_t previews = 0;
  std::string preview_mode = "rgb";
};

int run_encode(const EncodeArgs& a, const Settings& s, std::ostream& out) {
  if (s.step == 0) throw UsageError("--step must be positive");
  const TensorSpec spec = parse_tensor_spec(s.imputation, s.step);
  PreviewOptions previews;
  previews.count = a.previews;
  if (a.preview_mode == "gray") previews.mode = PreviewMode::Gray;
  else if (a.preview_mode != "rgb") throw UsageError("--png-mode must be rgb or gray");

  const PreparedStore store = read_prepared(a.prepared);
  const DatasetManifest m = encode_dataset(store, spec, a.out, previews);
  std::uint64_t train = 0;
  for (auto n : m.samples.train) train += n;
  out << "samples " << m.samples.total() << " (train " << train << ", test "
      << m.samples.total() - train << "), imputation " << spec.token() << ", step "
      << spec.step << ", short chunks " << m.short_chunks << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::string predictions;
  std::string labels;
  std::string container;
  std::string model = "model";
  std::string dataset;
  std::string dataset_name = "data";
  std::string out;
};

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  std::ifstream in(a.predictions);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + a.predictions + "'");
  const auto records = read_predictions_csv(in);

  json run = {{"model", a.model}};
  std::string labels_path = a.labels;
  std::optional<DatasetManifest> manifest;
  if (!a.container.empty()) {
    manifest = read_manifest(a.container);
    if (labels_path.empty()) labels_path = (fs::path(a.container) / kLabelsFile).string();
  }
  if (!labels_path.empty()) {
    const auto labels = read_labels(labels_path);
    std::set<std::size_t> seen;
    for (const auto& r : records) {
      if (r.index >= labels.size()) {
        throw Error(ErrorCode::FormatMismatch,
                    "prediction index " + std::to_string(r.index) + " is not in the labels");
      }
      if (labels[r.index].clazz != r.truth) {
        throw Error(ErrorCode::FormatMismatch,
                    "prediction " + std::to_string(r.index) + " disagrees with labels on the true class");
      }
      if (!seen.insert(r.index).second) {
        throw Error(ErrorCode::FormatMismatch,
                    "prediction index " + std::to_string(r.index) + " appears twice");
      }
    }
  }
  if (manifest) {
    run["dataset"] = a.dataset.empty() ? dataset_label(*manifest, a.dataset_name) : a.dataset;
    if (manifest->tensor) {
      run["imputation"] = manifest->tensor->token();
      run["step"] = manifest->tensor->step;
      run["samples"] = manifest->samples.total();
    }
  } else if (!a.dataset.empty()) {
    run["dataset"] = a.dataset;
  }

  const EvaluationResult result = evaluate_predictions(records);
  json j = to_json(result);
  j["run"] = run;
  fs::create_directories(a.out);
  write_json_file(fs::path(a.out) / "metrics.json", j);
  if (result.roc) {
    std::ofstream roc(fs::path(a.out) / "roc.csv", std::ios::trunc);
    if (!roc) throw Error(ErrorCode::Io, "cannot write roc.csv");
    write_roc_csv(roc, *result.roc);
  }
  out << "samples " << records.size() << ", TPR " << format_percent(result.rates.tpr)
      << "%, FPR " << format_percent(result.rates.fpr) << "%";
  if (result.roc) out << ", AUC " << std::setprecision(4) << result.roc->auc;
  out << '\n';
  return kExitOk;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "text";
  std::string out;
};

// Rows keyed by (imputation, dataset); one TPR/FPR column pair per model.
int run_report(const ReportArgs& a, std::ostream& out) {
  struct Row {
    std::string imputation;
    std::string dataset;
    std::string samples;
    std::map<std::string, std::pair<std::string, std::string>> by_model;
  };
  std::vector<std::string> models;
  std::vector<Row> rows;
  for (const auto& path : a.inputs) {
    const json j = read_json_file(path);
    const json run = j.value("run", json::object());
    const std::string model = run.value("model", "model");
    const std::string imputation = run.value("imputation", "-");
    const std::string dataset = run.value("dataset", "-");
    std::string samples = "-";
    if (run.contains("samples")) samples = std::to_string(run.at("samples").get<std::uint64_t>());
    const auto pct = [&](const char* key) -> std::string {
      const auto& r = j.at("rates").at(key);
      return r.is_null() ? "-" : r.at("percent").get<std::string>();
    };
    if (std::find(models.begin(), models.end(), model) == models.end()) models.push_back(model);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& r) {
      return r.imputation == imputation && r.dataset == dataset;
    });
    if (it == rows.end()) {
      rows.push_back({imputation, dataset, samples, {}});
      it = rows.end() - 1;
    }
    it->by_model[model] = {pct("tpr"), pct("fpr")};
  }

  std::vector<std::string> header = {"Imputation"};
  for (const auto& m : models) {
    header.push_back(m + " TPR(%)");
    header.push_back(m + " FPR(%)");
  }
  header.push_back("Dataset");
  header.push_back("Samples");
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) {
    std::vector<std::string> line = {r.imputation};
    for (const auto& m : models) {
      auto it = r.by_model.find(m);
      line.push_back(it == r.by_model.end() ? "-" : it->second.first);
      line.push_back(it == r.by_model.end() ? "-" : it->second.second);
    }
    line.push_back(r.dataset);
    line.push_back(r.samples);
    table.push_back(std::move(line));
  }

  std::ostringstream text;
  if (a.format == "csv") {
    const auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) text << (i ? "," : "") << cells[i];
      text << '\n';
    };
    emit(header);
    for (const auto& line : table) emit(line);
  } else if (a.format == "text") {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& line : table) {
      for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    const auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text << "  ";
        if (i == 0) text << std::left; else text << std::right;
        text << std::setw(static_cast<int>(width[i])) << cells[i];
      }
      text << '\n';
    };
    emit(header);
    for (const auto& line : table) emit(line);
  } else {
    throw UsageError("--format must be text or csv");
  }

  if (a.out.empty()) {
    out << text.str();
  } else {
    std::ofstream f(a.out, std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + a.out + "'");
    f << text.str();
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Settings settings;
    if (auto config = find_config_arg(args)) settings.apply(read_json_file(*config));

    CLI::App app{"Sensor telemetry to CNN tensor pipeline"};
    app.name("iotids");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate labelled synthetic sensor CSVs");
    synth_cmd->add_option("--scenario", synth.scenario, "Scenario JSON file");
    synth_cmd->add_option("--preset", synth.preset, "Built-in scenario (separable)");
    synth_cmd->add_option("--block-seconds", synth.block_seconds, "Preset class block length")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "Override the scenario seed");
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();

    StatsArgs stats;
    auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics and aggregation histogram");
    stats_cmd->add_option("--input", stats.input, "Directory with the seven sensor CSVs")->required();
    stats_cmd->add_option("--out", stats.out, "Output directory")->required();
    stats_cmd->add_option("--combination", stats.combination, "concatenate or group-by-timestamp");

    std::string config_path;
    const auto add_config = [&](CLI::App* cmd) {
      cmd->add_option("--config", config_path, "Flat JSON config; flags override it");
    };

    PrepareArgs prepare_args;
    auto* prepare_cmd = app.add_subcommand("prepare", "Combine, aggregate, segment and partition");
    prepare_cmd->add_option("--input", prepare_args.input, "Directory with the seven sensor CSVs")
        ->required();
    prepare_cmd->add_option("--out", prepare_args.out, "Prepared store directory")->required();
    prepare_cmd->add_option("--combination", settings.combination,
                            "concatenate or group-by-timestamp");
    prepare_cmd->add_flag("--aggregate,!--no-aggregate", settings.aggregate,
                          "Keep one row per timestamp");
    prepare_cmd->add_option("--block-size", settings.block_size, "Rows per chunk");
    prepare_cmd->add_option("--train-fraction", settings.train_fraction, "Share of chunks for training");
    prepare_cmd->add_option("--seed", settings.seed, "Partition seed");
    add_config(prepare_cmd);

    EncodeArgs encode_args;
    auto* encode_cmd = app.add_subcommand("encode", "Impute, scale and window into a dataset container");
    encode_cmd->add_option("--prepared", encode_args.prepared, "Prepared store directory")->required();
    encode_cmd->add_option("--out", encode_args.out, "Container directory")->required();
    encode_cmd->add_option("--imputation", settings.imputation, "e.g. miss3, fill2|miss1, -const3");
    encode_cmd->add_option("--step", settings.step, "Rows between consecutive windows");
    encode_cmd->add_option("--png-previews", encode_args.previews, "Write PNGs for the first N samples");
    encode_cmd->add_option("--png-mode", encode_args.preview_mode, "rgb or gray");
    add_config(encode_cmd);

    EvaluateArgs eval;
    auto* eval_cmd = app.add_subcommand("evaluate", "Metrics from a predictions CSV");
    eval_cmd->add_option("--predictions", eval.predictions, "Predictions CSV")->required();
    eval_cmd->add_option("--labels", eval.labels, "labels.csv to cross-check true classes");
    eval_cmd->add_option("--container", eval.container, "Dataset container the predictions refer to");
    eval_cmd->add_option("--model", eval.model, "Model name recorded in the output");
    eval_cmd->add_option("--dataset", eval.dataset, "Dataset label recorded in the output");
    eval_cmd->add_option("--dataset-name", eval.dataset_name,
                         "Prefix of the derived dataset label (<name><block><a|n>)");
    eval_cmd->add_option("--out", eval.out, "Output directory")->required();

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Comparison table from metrics JSON files");
    report_cmd->add_option("metrics", report.inputs, "metrics.json files")->required();
    report_cmd->add_option("--format", report.format, "text or csv");
    report_cmd->add_option("--out", report.out, "Write the table to a file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      report_error(err, "Usage", e.what(), kExitUsage);
      return kExitUsage;
    }

    if (*synth_cmd) return run_synth(synth, out);
    if (*stats_cmd) return run_stats(stats, out);
    if (*prepare_cmd) return run_prepare(prepare_args, settings, out);
    if (*encode_cmd) return run_encode(encode_args, settings, out);
    if (*eval_cmd) return run_evaluate(eval, out);
    if (*report_cmd) return run_report(report, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    report_error(err, "Usage", e.what(), kExitUsage);
    return kExitUsage;
  } catch (const Error& e) {
    const int status = exit_status(e.code());
    report_error(err, error_code_name(e.code()), e.what(), status);
    return status;
  } catch (const fs::filesystem_error& e) {
    report_error(err, "Io", e.what(), kExitData);
    return kExitData;
  }
}

}  // namespace iotids::cli
