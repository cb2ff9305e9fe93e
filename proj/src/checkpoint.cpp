#include "boundary_rf/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "boundary_rf/boundary_functions.hpp"

namespace brf {

namespace {

constexpr char kMagic[4] = {'B', 'R', 'F', 'C'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }

class Reader {
 public:
  explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint32_t u32() {
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(byte()) << (8 * i);
    return x;
  }
  std::uint64_t u64() {
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(byte()) << (8 * i);
    return x;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw CheckpointError("checkpoint truncated");
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  unsigned char byte() {
    if (pos_ >= bytes_.size()) throw CheckpointError("checkpoint truncated");
    return static_cast<unsigned char>(bytes_[pos_++]);
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const TrainableVelocity& model,
                     const CheckpointInfo& info) {
  const MlpArch& arch = model.net().arch();
  nlohmann::json header;
  header["model_kind"] = std::string(model.kind());
  header["arch"] = {{"data_dim", arch.data_dim},
                    {"hidden", arch.hidden},
                    {"time_frequencies", arch.time_frequencies},
                    {"activation", std::string(activation_name(arch.activation))}};
  if (const BoundaryFunctionSet* b = model.boundary_set()) header["boundary_set"] = b->name();
  if (const Vec* c = model.data_mean())
    header["data_mean"] = std::vector<double>(c->data(), c->data() + c->size());
  header["init_seed"] = info.init_seed;
  header["train_steps"] = info.train_steps;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& [rows, cols] : arch.layer_shapes()) layers.push_back({rows, cols});
  header["layers"] = layers;

  const std::string header_text = header.dump();
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u64(out, header_text.size());
  out += header_text;
  for (std::size_t l = 0; l < model.net().weights().size(); ++l) {
    const Mat& w = model.net().weights()[l];
    for (Index c = 0; c < w.cols(); ++c)
      for (Index r = 0; r < w.rows(); ++r) put_f64(out, w(r, c));
    const Vec& b = model.net().biases()[l];
    for (Index r = 0; r < b.size(); ++r) put_f64(out, b(r));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CheckpointError("cannot open checkpoint for writing: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw CheckpointError("failed writing checkpoint: " + path.string());
}

std::unique_ptr<TrainableVelocity> load_checkpoint(const std::filesystem::path& path,
                                                   CheckpointInfo* info) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw CheckpointError("cannot open checkpoint: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  Reader reader(std::move(bytes));

  if (reader.take(4) != std::string(kMagic, 4))
    throw CheckpointError("not a checkpoint file: " + path.string());
  const std::uint32_t version = reader.u32();
  if (version != kVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  const std::uint64_t header_len = reader.u64();
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(reader.take(header_len));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
  }

  MlpArch arch;
  std::string kind;
  try {
    kind = header.at("model_kind").get<std::string>();
    const auto& a = header.at("arch");
    arch.data_dim = a.at("data_dim").get<Index>();
    arch.hidden = a.at("hidden").get<std::vector<Index>>();
    arch.time_frequencies = a.at("time_frequencies").get<int>();
    arch.activation = activation_from_name(a.at("activation").get<std::string>());
    arch.validate();
  } catch (const std::exception& e) {
    throw CheckpointError(std::string("bad checkpoint header: ") + e.what());
  }

  const auto shapes = arch.layer_shapes();
  if (header.contains("layers")) {
    const auto& layers = header.at("layers");
    if (layers.size() != shapes.size()) throw CheckpointError("layer table does not match arch");
    for (std::size_t l = 0; l < shapes.size(); ++l)
      if (layers[l][0].get<Index>() != shapes[l].first ||
          layers[l][1].get<Index>() != shapes[l].second)
        throw CheckpointError("layer table does not match arch");
  }

  std::vector<Mat> weights;
  std::vector<Vec> biases;
  for (const auto& [rows, cols] : shapes) {
    Mat w(rows, cols);
    for (Index c = 0; c < cols; ++c)
      for (Index r = 0; r < rows; ++r) w(r, c) = reader.f64();
    Vec b(rows);
    for (Index r = 0; r < rows; ++r) b(r) = reader.f64();
    weights.push_back(std::move(w));
    biases.push_back(std::move(b));
  }
  if (!reader.exhausted()) throw CheckpointError("trailing bytes after parameters");

  if (info != nullptr) {
    info->init_seed = header.value("init_seed", std::uint64_t{0});
    info->train_steps = header.value("train_steps", std::int64_t{0});
  }

  Mlp net(arch, std::move(weights), std::move(biases));
  if (kind == "vanilla") return std::make_unique<VanillaVelocity>(std::move(net));
  if (kind == "subtraction") return std::make_unique<SubtractionBoundaryVelocity>(std::move(net));
  if (kind == "mask") {
    if (!header.contains("boundary_set") || !header.contains("data_mean"))
      throw CheckpointError("mask checkpoint missing boundary_set or data_mean");
    BoundaryFunctionSet boundary =
        BoundaryFunctionSet::named(header.at("boundary_set").get<std::string>());
    const auto mean_values = header.at("data_mean").get<std::vector<double>>();
    Vec data_mean = Eigen::Map<const Vec>(mean_values.data(),
                                          static_cast<Index>(mean_values.size()));
    if (data_mean.size() != arch.data_dim)
      throw CheckpointError("data_mean length does not match data_dim");
    return std::make_unique<MaskBoundaryVelocity>(std::move(net), std::move(boundary),
                                                  std::move(data_mean));
  }
  throw CheckpointError("unknown model kind in checkpoint: " + kind);
}

}  // namespace brf
