#pragma once

#include <string>
#include <string_view>

#include "ppdepth/depth.hpp"

namespace ppdepth::serialize {

// JSON document with a format tag and version; doubles are written in
// shortest round-trip form, so load followed by save reproduces the byte
// stream exactly.
std::string model_to_text(const depth::DepthModel& model);
depth::DepthModel model_from_text(std::string_view text);

depth::DepthModel read_model_file(const std::string& path);
void write_model_file(const std::string& path,
                      const depth::DepthModel& model);

}  // namespace ppdepth::serialize
