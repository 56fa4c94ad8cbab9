#include "iotids/manifest.hpp"

#include "iotids/error.hpp"

namespace iotids {

std::uint64_t SampleCounts::total() const {
  std::uint64_t n = 0;
  for (std::size_t c = 0; c < kClassCount; ++c) n += train[c] + test[c];
  return n;
}

nlohmann::json to_json(const ClassHistogram& h) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t c = 0; c < kClassCount; ++c) {
    out[std::string(class_name(kAllClasses[c]))] = h[c];
  }
  return out;
}

ClassHistogram histogram_from_json(const nlohmann::json& j) {
  ClassHistogram h{};
  for (const auto& [name, count] : j.items()) {
    h[static_cast<std::size_t>(parse_class(name))] = count.get<std::uint64_t>();
  }
  return h;
}

nlohmann::json to_json(const DatasetManifest& m) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& f : feature_table()) features.push_back(std::string(f.name));

  nlohmann::json chunks = nlohmann::json::array();
  for (const auto& c : m.chunks) {
    chunks.push_back({
        {"index", c.chunk.index},
        {"begin", c.chunk.begin},
        {"end", c.chunk.end},
        {"partition", std::string(partition_name(c.partition))},
        {"classes", to_json(c.chunk.classes)},
        {"samples", c.samples},
    });
  }

  nlohmann::json j = {
      {"format_version", m.format_version},
      {"config",
       {
           {"combination", std::string(combination_name(m.config.combination))},
           {"aggregate", m.config.aggregate},
           {"block_size", m.config.block_size},
           {"train_fraction", m.config.train_fraction},
           {"seed", m.config.seed},
       }},
      {"effective_seed", m.effective_seed},
      {"feature_order", std::move(features)},
      {"source_rows", m.source_rows},
      {"combined_rows", m.combined_rows},
      {"rows", m.rows},
      {"class_conflicts", m.class_conflicts},
      {"row_classes", to_json(m.row_classes)},
      {"chunks", std::move(chunks)},
      {"notes", m.notes},
  };
  if (m.tensor) {
    nlohmann::json strategies = nlohmann::json::array();
    for (auto s : m.tensor->channels) strategies.push_back(std::string(strategy_token(s)));
    j["config"]["imputation"] = m.tensor->token();
    j["config"]["step"] = m.tensor->step;
    j["tensor"] = {
        {"channels", std::move(strategies)},
        {"height", kWindowHeight},
        {"width", kWindowWidth},
        {"feature_offset", kFeatureOffset},
        {"layout", "sample-major, row-major, channel-last, uint8"},
        {"label_rule", "class of the last row of the window"},
    };
    j["samples"] = {
        {"count", m.samples.total()},
        {"train", to_json(m.samples.train)},
        {"test", to_json(m.samples.test)},
        {"short_chunks", m.short_chunks},
        {"sha256", m.samples_sha256},
    };
  }
  if (m.scaler) j["scaler"] = to_json(*m.scaler);
  if (m.train_stats) j["train_stats"] = to_json(*m.train_stats);
  return j;
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kManifestFormatVersion) {
      throw Error(ErrorCode::FormatMismatch,
                  "unsupported manifest version " + std::to_string(m.format_version));
    }
    const auto& cfg = j.at("config");
    m.config.combination = parse_combination(cfg.at("combination").get<std::string>());
    m.config.aggregate = cfg.at("aggregate").get<bool>();
    m.config.block_size = cfg.at("block_size").get<std::size_t>();
    m.config.train_fraction = cfg.at("train_fraction").get<double>();
    m.config.seed = cfg.at("seed").get<std::uint64_t>();
    m.effective_seed = j.at("effective_seed").get<std::uint64_t>();
    m.source_rows = j.at("source_rows").get<std::uint64_t>();
    m.combined_rows = j.at("combined_rows").get<std::uint64_t>();
    m.rows = j.at("rows").get<std::uint64_t>();
    m.class_conflicts = j.at("class_conflicts").get<std::uint64_t>();
    m.row_classes = histogram_from_json(j.at("row_classes"));
    for (const auto& c : j.at("chunks")) {
      ChunkRecord rec;
      rec.chunk.index = c.at("index").get<std::size_t>();
      rec.chunk.begin = c.at("begin").get<std::size_t>();
      rec.chunk.end = c.at("end").get<std::size_t>();
      rec.chunk.classes = histogram_from_json(c.at("classes"));
      rec.partition = parse_partition(c.at("partition").get<std::string>());
      rec.samples = c.at("samples").get<std::size_t>();
      m.chunks.push_back(rec);
    }
    m.notes = j.at("notes").get<std::vector<std::string>>();
    if (cfg.contains("imputation")) {
      m.tensor = parse_tensor_spec(cfg.at("imputation").get<std::string>(),
                                   cfg.at("step").get<std::size_t>());
      const auto& s = j.at("samples");
      m.samples.train = histogram_from_json(s.at("train"));
      m.samples.test = histogram_from_json(s.at("test"));
      m.short_chunks = s.at("short_chunks").get<std::uint64_t>();
      m.samples_sha256 = s.at("sha256").get<std::string>();
      if (s.at("count").get<std::uint64_t>() != m.samples.total()) {
        throw Error(ErrorCode::FormatMismatch,
                    "manifest sample count disagrees with its class counts");
      }
    }
    if (j.contains("scaler")) m.scaler = scaler_from_json(j.at("scaler"));
    if (j.contains("train_stats")) m.train_stats = train_stats_from_json(j.at("train_stats"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatMismatch, std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace iotids
