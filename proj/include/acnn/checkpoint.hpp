#pragma once

#include <string>

#include "acnn/model.hpp"

namespace acnn {

/// Single JSON document holding the config, the vocabulary and its digest,
/// every model tensor, and the embedding channels. Reals survive a
/// save/load round trip bit for bit.
void save_checkpoint(const TrainedModel& model, const std::string& path);
TrainedModel load_checkpoint(const std::string& path);

}  // namespace acnn
