#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>

#include "boundary_rf/velocity.hpp"

namespace brf {

class CheckpointError : public std::runtime_error {
 public:
  explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

struct CheckpointInfo {
  std::uint64_t init_seed = 0;
  std::int64_t train_steps = 0;
};

/// Single-file binary format: magic "BRFC", format version, a JSON header
/// describing the model (kind, boundary set, data mean, architecture,
/// provenance), then raw little-endian float64 parameter blocks, weights
/// column-major then biases, layer by layer. Round-trips bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const TrainableVelocity& model,
                     const CheckpointInfo& info);

std::unique_ptr<TrainableVelocity> load_checkpoint(const std::filesystem::path& path,
                                                   CheckpointInfo* info = nullptr);

}  // namespace brf
