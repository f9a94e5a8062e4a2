#ifndef GRAPHSUM_CHECKPOINT_HPP
#define GRAPHSUM_CHECKPOINT_HPP

#include <string>

#include "graphsum/pipeline.hpp"

namespace graphsum {

/// Self-describing JSON checkpoint of a trained model: format version,
/// effective config, and every parameter tensor (values, moments, step
/// counts). Serialization round-trips doubles exactly, so save/load/save
/// is byte-stable.
std::string model_to_json(const ModelState& model);
ModelState model_from_json(const std::string& text);

void save_model(const std::string& path, const ModelState& model);
/// Throws CheckpointError on unreadable, truncated, or version-mismatched
/// files; never returns partial state.
ModelState load_model(const std::string& path);

}  // namespace graphsum

#endif  // GRAPHSUM_CHECKPOINT_HPP
