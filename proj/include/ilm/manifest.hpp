#pragma once
// key=value run manifest: everything needed to reproduce a run byte-for-byte
// (the created timestamp is informational and excluded from that contract).

#include "ilm/engine.hpp"

#include <string>

namespace ilm {

std::string manifest_text(const ExperimentConfig& cfg,
                          const BaselineEstimate& baseline,
                          const std::string& created);
void write_manifest(const ExperimentConfig& cfg,
                    const BaselineEstimate& baseline, const std::string& path);

}  // namespace ilm
