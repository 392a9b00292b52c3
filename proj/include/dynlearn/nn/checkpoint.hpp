#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "dynlearn/nn/net.hpp"

namespace dynlearn {

struct Checkpoint {
  std::unique_ptr<Net> net;
  Normalizer norm;
  std::string dataset_hash;
  std::string config_hash;
  std::string checkpoint_id;
};

/// Exact-value JSON snapshot of parameters plus the normalizer and the hashes
/// of the dataset and run configuration it was trained under. checkpoint_id
/// is the content hash and is verified on load.
std::string save_checkpoint(const std::filesystem::path& path, Net& net,
                            const Normalizer& norm,
                            const std::string& dataset_hash,
                            const std::string& config_hash);

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dynlearn
