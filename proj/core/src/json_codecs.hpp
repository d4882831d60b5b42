#pragma once

// Internal JSON encoders/decoders shared by checkpoint and config code.

#include <json.hpp>

#include "sagail/adam.hpp"
#include "sagail/ddpg.hpp"
#include "sagail/gail.hpp"
#include "sagail/net.hpp"

namespace sagail::codecs {

using nlohmann::json;

json net_to_json(const DenseNet& net);
DenseNet net_from_json(const json& j);

json adam_to_json(const AdamState& s);
AdamState adam_from_json(const json& j);

json normalizer_to_json(const RunningNormalizer& n);
RunningNormalizer normalizer_from_json(const json& j);

json env_spec_to_json(const EnvSpec& s);
EnvSpec env_spec_from_json(const json& j);

json ddpg_config_to_json(const DdpgConfig& c);
DdpgConfig ddpg_config_from_json(const json& j);

json gail_config_to_json(const GailConfig& c);
GailConfig gail_config_from_json(const json& j);

}  // namespace sagail::codecs
