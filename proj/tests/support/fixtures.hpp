#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iotids/metrics.hpp"
#include "iotids/model.hpp"

namespace fixtures {

// Self-deleting scratch directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "iotids");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Per-sensor CSV text of the published aggregation example (timestamps
// 2019-04-25 10:01:30 and 10:01:31, all injection).
std::vector<std::pair<iotids::SensorKind, std::string>> aggregation_example_csv();
iotids::SensorStreams aggregation_example_streams();

// Expected cells of the two surviving rows, nullopt for "-".
using ExpectedRow = std::vector<std::optional<double>>;
ExpectedRow aggregation_expected_first();
ExpectedRow aggregation_expected_second();

// 8-class confusion matrix of the published best ResNet run, rows = truth.
iotids::ConfusionMatrix resnet_confusion();

// --- independent oracles -------------------------------------------------

// Every start index s with s + 224 <= rows, stepping by `step`.
std::vector<std::size_t> window_starts(std::size_t rows, std::size_t step);

// Concordant (positive above negative) pairs over all pairs, ties 1/2.
double pair_count_auc(const std::vector<iotids::ScoredRecord>& records);

struct Counts {
  std::uint64_t tp, fn, fp, tn;
};
// accuracy, precision, recall computed straight from the four counts.
double oracle_accuracy(const Counts& c);
double oracle_precision(const Counts& c);
double oracle_recall(const Counts& c);
double oracle_fpr(const Counts& c);

// Convenience: date/time text to epoch seconds at UTC-07:00, computed by
// day counting without the library's calendar code.
std::int64_t oracle_epoch(int year, int month, int day, int hh, int mm, int ss);

}  // namespace fixtures
