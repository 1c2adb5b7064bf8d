#ifndef TSCNN_CHECKPOINT_HPP
#define TSCNN_CHECKPOINT_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tscnn/tensor.hpp"

namespace tscnn {

// Binary checkpoint: magic "TSNN", u32 version, u64 tensor count, then per
// tensor: u64 name length + bytes, u64 rank, u64 dims, raw f64 values.
// All integers and reals little-endian.
void save_checkpoint(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, const Tensor*>>& tensors);

std::vector<std::pair<std::string, Tensor>> load_checkpoint(
    const std::filesystem::path& path);

}  // namespace tscnn

#endif
