#include "iotids/container.hpp"

#include <array>
#include <cstdio>
#include <memory>

#include <openssl/evp.h>

#include "iotids/csv.hpp"
#include "iotids/error.hpp"
#include "iotids/text.hpp"

namespace iotids {

namespace fs = std::filesystem;

namespace detail {

class Sha256 {
 public:
  Sha256() : ctx(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr); }
  ~Sha256() { EVP_MD_CTX_free(ctx); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx, data, n); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest.data(), &len);
    std::string out;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof buf, "%02x", digest[i]);
      out += buf;
    }
    return out;
  }


 private:
  EVP_MD_CTX* ctx;
};

}  // namespace detail

namespace {

std::ofstream open_out(const fs::path& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  return out;
}

[[noreturn]] void mismatch(const std::string& what) {
  throw Error(ErrorCode::FormatMismatch, what);
}

}  // namespace

DatasetWriter::DatasetWriter(const fs::path& dir)
    : dir_(dir), hasher_(std::make_unique<detail::Sha256>()) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  samples_ = open_out(dir / kSamplesFile, std::ios::binary | std::ios::trunc);
  labels_ = open_out(dir / kLabelsFile, std::ios::trunc);
  csv::write_record(labels_, {"index", "partition", "class", "chunk_index", "start_row"});
}

DatasetWriter::~DatasetWriter() = default;

void DatasetWriter::append(const Sample& sample) {
  if (finished_) throw Error(ErrorCode::Io, "dataset writer already finished");
  if (sample.tensor.size() != kSampleBytes) {
    mismatch("sample tensor has " + std::to_string(sample.tensor.size()) + " bytes");
  }
  samples_.write(reinterpret_cast<const char*>(sample.tensor.data()),
                 static_cast<std::streamsize>(sample.tensor.size()));
  hasher_->update(sample.tensor.data(), sample.tensor.size());
  csv::write_record(labels_, {std::to_string(count_),
                              std::string(partition_name(sample.partition)),
                              std::string(class_name(sample.clazz)),
                              std::to_string(sample.chunk_index),
                              std::to_string(sample.start_row)});
  auto& hist = sample.partition == Partition::Train ? counts_.train : counts_.test;
  ++hist[static_cast<std::size_t>(sample.clazz)];
  ++count_;
}

void DatasetWriter::finish(DatasetManifest& manifest) {
  if (finished_) throw Error(ErrorCode::Io, "dataset writer already finished");
  finished_ = true;
  samples_.close();
  labels_.close();
  if (!samples_ || !labels_) throw Error(ErrorCode::Io, "write failed in '" + dir_.string() + "'");
  manifest.samples = counts_;
  manifest.samples_sha256 = hasher_->hex();
  write_manifest(dir_, manifest);
}

void write_dataset(std::span<const Sample> samples, DatasetManifest manifest,
                   const fs::path& dir) {
  DatasetWriter writer(dir);
  for (const Sample& s : samples) writer.append(s);
  writer.finish(manifest);
}

void write_manifest(const fs::path& dir, const DatasetManifest& m) {
  auto out = open_out(dir / kManifestFile, std::ios::trunc);
  out << to_json(m).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest in '" + dir.string() + "'");
}

DatasetManifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestFile);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + (dir / kManifestFile).string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    mismatch(std::string("manifest is not valid JSON: ") + e.what());
  }
  return manifest_from_json(j);
}

std::vector<SampleLabel> read_labels(const fs::path& labels_csv) {
  const auto records = csv::read_file(labels_csv.string());
  if (records.empty() || records.front().size() != 5) mismatch("labels.csv: bad header");
  std::vector<SampleLabel> labels;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.size() != 5) mismatch("labels.csv row " + std::to_string(i) + ": expected 5 fields");
    const auto index = parse_int(r[0]);
    const auto chunk = parse_int(r[3]);
    const auto start = parse_int(r[4]);
    if (!index || !chunk || !start || *index < 0 || *chunk < 0 || *start < 0) {
      mismatch("labels.csv row " + std::to_string(i) + ": bad numbers");
    }
    SampleLabel l;
    l.index = static_cast<std::size_t>(*index);
    l.partition = parse_partition(r[1]);
    l.clazz = parse_class(r[2]);
    l.chunk_index = static_cast<std::size_t>(*chunk);
    l.start_row = static_cast<std::size_t>(*start);
    labels.push_back(l);
  }
  return labels;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  detail::Sha256 h;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

Dataset read_dataset(const fs::path& dir) {
  Dataset ds;
  ds.manifest = read_manifest(dir);
  if (!ds.manifest.tensor) mismatch("manifest describes no encoded samples");
  const auto labels = read_labels(dir / kLabelsFile);
  const std::uint64_t expected = ds.manifest.samples.total();

  std::error_code ec;
  const auto bytes = fs::file_size(dir / kSamplesFile, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot stat samples.bin: " + ec.message());
  if (bytes % kSampleBytes != 0) {
    mismatch("samples.bin size " + std::to_string(bytes) + " is not a whole number of samples");
  }
  if (bytes / kSampleBytes != expected) {
    mismatch("manifest lists " + std::to_string(expected) + " samples, samples.bin holds " +
             std::to_string(bytes / kSampleBytes));
  }
  if (labels.size() != expected) {
    mismatch("manifest lists " + std::to_string(expected) + " samples, labels.csv has " +
             std::to_string(labels.size()));
  }

  std::ifstream in(dir / kSamplesFile, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open samples.bin");
  detail::Sha256 h;
  SampleCounts counts;
  ds.samples.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].index != i) mismatch("labels.csv is not in index order");
    Sample s;
    s.tensor.resize(kSampleBytes);
    in.read(reinterpret_cast<char*>(s.tensor.data()), kSampleBytes);
    if (in.gcount() != static_cast<std::streamsize>(kSampleBytes)) mismatch("short read in samples.bin");
    h.update(s.tensor.data(), kSampleBytes);
    s.clazz = labels[i].clazz;
    s.chunk_index = labels[i].chunk_index;
    s.start_row = labels[i].start_row;
    s.partition = labels[i].partition;
    auto& hist = s.partition == Partition::Train ? counts.train : counts.test;
    ++hist[static_cast<std::size_t>(s.clazz)];
    ds.samples.push_back(std::move(s));
  }
  if (counts.train != ds.manifest.samples.train || counts.test != ds.manifest.samples.test) {
    mismatch("labels.csv class counts disagree with the manifest");
  }
  if (!ds.manifest.samples_sha256.empty() && h.hex() != ds.manifest.samples_sha256) {
    mismatch("samples.bin content hash disagrees with the manifest");
  }
  return ds;
}

}  // namespace iotids
