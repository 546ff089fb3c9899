#pragma once
// Hand-emitted, self-contained SVG line charts following the figure
// conventions: expressivity blue, compositionality orange, stability maroon;
// thin per-replicate lines under a thick mean; loss curves colored cold to
// warm by generation.

#include "ilm/engine.hpp"

#include <string>
#include <vector>

namespace ilm {

// One panel per metric, y in [0,1], x over generations. Values pass through
// the CSV number format first, so re-plotting an emitted CSV reproduces the
// same bytes. Requires at least one replicate.
std::string metrics_svg(const std::vector<GenerationRecord>& records);
void plot_metrics(const std::vector<GenerationRecord>& records,
                  const std::string& path);

// Loss against epoch, one curve per generation (mean over replicates), one
// panel per network that has data. Autoencoder values are divided by
// loss_divisor before plotting (pass 1 when the records already carry scaled
// values, e.g. after reading the losses CSV).
std::string losses_svg(const std::vector<GenerationRecord>& records,
                       double loss_divisor);
void plot_losses(const std::vector<GenerationRecord>& records,
                 const std::string& path, double loss_divisor);

}  // namespace ilm
