#include "iotids/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "iotids/csv.hpp"
#include "iotids/error.hpp"
#include "iotids/text.hpp"

namespace iotids {

std::uint64_t ConfusionMatrix::support(EventClass truth) const {
  std::uint64_t n = 0;
  for (auto v : counts[static_cast<std::size_t>(truth)]) n += v;
  return n;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (const auto& row : counts) {
    for (auto v : row) n += v;
  }
  return n;
}

ConfusionMatrix confusion(std::span<const Prediction> predictions) {
  ConfusionMatrix cm;
  for (const auto& p : predictions) ++cm.at(p.truth, p.predicted);
  return cm;
}

BinaryStats binarize(const ConfusionMatrix& cm) {
  BinaryStats bs;
  for (EventClass truth : kAllClasses) {
    for (EventClass pred : kAllClasses) {
      const std::uint64_t n = cm.at(truth, pred);
      if (is_attack(truth)) {
        (is_attack(pred) ? bs.tp : bs.fn) += n;
      } else {
        (is_attack(pred) ? bs.fp : bs.tn) += n;
      }
    }
  }
  return bs;
}

namespace {

std::optional<Rational> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return Rational{num, den};
}

}  // namespace

Rates rates(const BinaryStats& bs) {
  return {
      ratio(bs.tp, bs.tp + bs.fn),
      ratio(bs.fp, bs.fp + bs.tn),
      ratio(bs.tp, bs.tp + bs.fp),
      ratio(bs.tp + bs.tn, bs.total()),
  };
}

double require_rate(const std::optional<Rational>& rate, const char* name) {
  if (!rate) {
    throw Error(ErrorCode::UndefinedRate, std::string(name) + " has a zero denominator");
  }
  return rate->value();
}

double fpr_from_apr(double a, double p, double t) {
  const auto degenerate = [&](const char* why) -> double {
    char buf[160];
    std::snprintf(buf, sizeof buf, "accuracy=%g precision=%g recall=%g: %s", a, p, t, why);
    throw Error(ErrorCode::DegenerateInput, buf);
  };
  for (double v : {a, p, t}) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) degenerate("values must lie in [0, 1]");
  }
  if (p == 0.0 && t > 0.0) degenerate("zero precision with non-zero recall");
  if (t == 0.0 && p > 0.0) degenerate("zero recall with non-zero precision");
  // Precision 1 means no false positives.
  if (p == 1.0) return 0.0;
  const double den = p * (a - 2.0 * t) + t;
  if (den == 0.0 || !std::isfinite(den)) degenerate("denominator vanishes");
  const double fpr = (1.0 - a) * (1.0 - p) * t / den;
  if (!(fpr >= 0.0 && fpr <= 1.0 + 1e-12)) degenerate("no consistent confusion matrix");
  return fpr;
}

RocCurve roc_auc(std::span<const ScoredRecord> records) {
  RocCurve roc;
  for (const auto& r : records) {
    if (!std::isfinite(r.score)) {
      throw Error(ErrorCode::DegenerateInput, "ROC scores must be finite");
    }
    (r.attack ? roc.positives : roc.negatives) += 1;
  }
  if (roc.positives == 0 || roc.negatives == 0) {
    throw Error(ErrorCode::SingleClass, "ROC needs both attack and normal records");
  }

  std::vector<ScoredRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredRecord& x, const ScoredRecord& y) { return x.score > y.score; });

  const double P = static_cast<double>(roc.positives);
  const double N = static_cast<double>(roc.negatives);
  roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  // Twice the area in units of one (positive, negative) pair, kept integral.
  std::uint64_t area2 = 0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    std::uint64_t dtp = 0;
    std::uint64_t dfp = 0;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      (sorted[j].attack ? dtp : dfp) += 1;
      ++j;
    }
    area2 += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
    roc.points.push_back({sorted[i].score, static_cast<double>(fp) / N,
                          static_cast<double>(tp) / P});
    i = j;
  }
  roc.auc = static_cast<double>(area2) / (2.0 * P * N);
  return roc;
}

namespace {

constexpr std::array<const char*, kClassCount> kScoreColumns = {
    "score_b", "score_d", "score_i", "score_n",
    "score_p", "score_r", "score_s", "score_x"};

}  // namespace

std::vector<PredictionRecord> read_predictions_csv(std::istream& in) {
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.next(rec)) throw Error(ErrorCode::FormatMismatch, "predictions: empty file");

  // Columns are located by name so extra columns are tolerated.
  std::array<std::optional<std::size_t>, 3 + kClassCount> col;
  const std::array<std::string, 3> keys = {"index", "true_class", "predicted_class"};
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const std::string name = to_lower(trim(rec[i]));
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (name == keys[k]) col[k] = i;
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
      if (name == kScoreColumns[c]) col[3 + c] = i;
    }
  }
  for (std::size_t k = 0; k < col.size(); ++k) {
    if (!col[k]) {
      throw Error(ErrorCode::FormatMismatch,
                  std::string("predictions: missing column '") +
                      (k < 3 ? keys[k].c_str() : kScoreColumns[k - 3]) + "'");
    }
  }

  std::vector<PredictionRecord> out;
  while (reader.next(rec)) {
    const auto where = "predictions line " + std::to_string(reader.line()) + ": ";
    const auto get = [&](std::size_t k) -> const std::string& {
      if (*col[k] >= rec.size()) {
        throw Error(ErrorCode::FormatMismatch, where + "too few fields");
      }
      return rec[*col[k]];
    };
    PredictionRecord p;
    const auto index = parse_int(get(0));
    if (!index || *index < 0) throw Error(ErrorCode::FormatMismatch, where + "bad index");
    p.index = static_cast<std::size_t>(*index);
    try {
      p.truth = parse_class(get(1));
      p.predicted = parse_class(get(2));
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
    for (std::size_t c = 0; c < kClassCount; ++c) {
      const auto v = parse_double(get(3 + c));
      if (!v) throw Error(ErrorCode::FormatMismatch, where + "bad score");
      p.scores[c] = *v;
    }
    out.push_back(p);
  }
  return out;
}

void write_predictions_csv(std::ostream& out, std::span<const PredictionRecord> records) {
  std::vector<std::string> fields = {"index", "true_class", "predicted_class"};
  for (const char* c : kScoreColumns) fields.emplace_back(c);
  csv::write_record(out, fields);
  for (const auto& r : records) {
    fields = {std::to_string(r.index), std::string(class_name(r.truth)),
              std::string(class_name(r.predicted))};
    for (double s : r.scores) fields.push_back(format_double(s));
    csv::write_record(out, fields);
  }
}

EvaluationResult evaluate_predictions(std::span<const PredictionRecord> records) {
  EvaluationResult result;
  std::vector<ScoredRecord> scored;
  scored.reserve(records.size());
  for (const auto& r : records) {
    ++result.confusion.at(r.truth, r.predicted);
    scored.push_back({is_attack(r.truth), r.attack_score()});
  }
  result.binary = binarize(result.confusion);
  result.rates = rates(result.binary);
  if (result.binary.tp + result.binary.fn > 0 && result.binary.fp + result.binary.tn > 0) {
    result.roc = roc_auc(scored);
  }
  return result;
}

std::string format_percent(const std::optional<Rational>& rate) {
  if (!rate) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * rate->value());
  return buf;
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : cm.counts) rows.push_back(row);
  nlohmann::json order = nlohmann::json::array();
  for (EventClass c : kAllClasses) order.push_back(std::string(class_name(c)));
  return {{"classes", std::move(order)}, {"counts", std::move(rows)}};
}

ConfusionMatrix confusion_from_json(const nlohmann::json& j) {
  ConfusionMatrix cm;
  const auto& rows = j.at("counts");
  if (!rows.is_array() || rows.size() != kClassCount) {
    throw Error(ErrorCode::FormatMismatch, "confusion matrix must be 8x8");
  }
  for (std::size_t t = 0; t < kClassCount; ++t) {
    if (rows[t].size() != kClassCount) {
      throw Error(ErrorCode::FormatMismatch, "confusion matrix must be 8x8");
    }
    for (std::size_t p = 0; p < kClassCount; ++p) cm.counts[t][p] = rows[t][p].get<std::uint64_t>();
  }
  return cm;
}

namespace {

nlohmann::json rate_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return {{"value", r->value()}, {"num", r->num}, {"den", r->den},
          {"percent", format_percent(r)}};
}

}  // namespace

nlohmann::json to_json(const EvaluationResult& result) {
  nlohmann::json support = nlohmann::json::object();
  for (EventClass c : kAllClasses) {
    support[std::string(class_name(c))] = result.confusion.support(c);
  }
  nlohmann::json j = {
      {"samples", result.confusion.total()},
      {"confusion", to_json(result.confusion)},
      {"support", std::move(support)},
      {"binary",
       {{"tp", result.binary.tp},
        {"fp", result.binary.fp},
        {"tn", result.binary.tn},
        {"fn", result.binary.fn},
        {"positive", "attack"},
        {"rule", "one-against-all: any attack class predicted counts as attack"}}},
      {"rates",
       {{"tpr", rate_json(result.rates.tpr)},
        {"fpr", rate_json(result.rates.fpr)},
        {"precision", rate_json(result.rates.precision)},
        {"accuracy", rate_json(result.rates.accuracy)}}},
      {"attack_score", "1 - score_n"},
  };
  j["auc"] = result.roc ? nlohmann::json(result.roc->auc) : nlohmann::json(nullptr);
  return j;
}

void write_roc_csv(std::ostream& out, const RocCurve& roc) {
  csv::write_record(out, {"threshold", "fpr", "tpr"});
  for (const auto& p : roc.points) {
    csv::write_record(out, {std::isinf(p.threshold) ? "inf" : format_double(p.threshold),
                            format_double(p.fpr), format_double(p.tpr)});
  }
}

}  // namespace iotids
