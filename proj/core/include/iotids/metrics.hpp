#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "iotids/model.hpp"

namespace iotids {

// counts[true][predicted], class order b,d,i,n,p,r,s,x.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kClassCount>, kClassCount> counts{};

  std::uint64_t& at(EventClass truth, EventClass predicted) {
    return counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
  }
  std::uint64_t at(EventClass truth, EventClass predicted) const {
    return counts[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
  }
  std::uint64_t support(EventClass truth) const;
  std::uint64_t total() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Prediction {
  EventClass truth = EventClass::Normal;
  EventClass predicted = EventClass::Normal;
};

ConfusionMatrix confusion(std::span<const Prediction> predictions);

// Attack is the positive class.
struct BinaryStats {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const BinaryStats&, const BinaryStats&) = default;
};

// One-against-all: any attack prediction counts as an attack.
BinaryStats binarize(const ConfusionMatrix& cm);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// A rate is absent when its denominator is zero.
struct Rates {
  std::optional<Rational> tpr;
  std::optional<Rational> fpr;
  std::optional<Rational> precision;
  std::optional<Rational> accuracy;
};

Rates rates(const BinaryStats& bs);

// Unwraps a rate; throws UndefinedRate when it is absent.
double require_rate(const std::optional<Rational>& rate, const char* name);

// False-positive rate recovered from accuracy, precision and recall:
//   (1 - a)(1 - p) t / (p (a - 2t) + t)
// Throws DegenerateInput when the inputs cannot come from a confusion matrix
// with both classes present and TP > 0.
double fpr_from_apr(double accuracy, double precision, double recall);

struct ScoredRecord {
  bool attack = false;
  double score = 0.0;  // higher means more likely an attack
};

struct RocPoint {
  double threshold = 0.0;  // predictions with score >= threshold are positive
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // starts at (0,0), ends at (1,1)
  double auc = 0.0;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
};

// Equal scores form a single threshold, which makes the trapezoidal AUC equal
// to the concordant-pair probability with ties counted one half. Throws
// SingleClass when positives or negatives are absent.
RocCurve roc_auc(std::span<const ScoredRecord> records);

// Row of the predictions file: index,true_class,predicted_class,score_b..score_x.
struct PredictionRecord {
  std::size_t index = 0;
  EventClass truth = EventClass::Normal;
  EventClass predicted = EventClass::Normal;
  std::array<double, kClassCount> scores{};

  // 1 - score of the normal class.
  double attack_score() const {
    return 1.0 - scores[static_cast<std::size_t>(EventClass::Normal)];
  }
};

std::vector<PredictionRecord> read_predictions_csv(std::istream& in);
void write_predictions_csv(std::ostream& out, std::span<const PredictionRecord> records);

struct EvaluationResult {
  ConfusionMatrix confusion;
  BinaryStats binary;
  Rates rates;
  std::optional<RocCurve> roc;  // absent when only one class is present
};

EvaluationResult evaluate_predictions(std::span<const PredictionRecord> records);

// Percent with two decimals, e.g. 0.92431 -> "92.43".
std::string format_percent(const std::optional<Rational>& rate);

nlohmann::json to_json(const ConfusionMatrix& cm);
ConfusionMatrix confusion_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvaluationResult& result);
void write_roc_csv(std::ostream& out, const RocCurve& roc);

}  // namespace iotids
