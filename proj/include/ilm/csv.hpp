#pragma once
// CSV emission and parsing. The records schema is versioned and byte-stable:
// reals carry 6 significant digits, rows are sorted by (replicate,
// generation), lines end with LF.

#include "ilm/engine.hpp"

#include <string>
#include <vector>

namespace ilm {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kCsvHeader =
    "replicate,generation,x_raw,c_raw,s_raw,x,c,s,loss_dec,loss_enc,loss_auto,ms";

// %.6g
std::string format_g6(double v);
// round-trips a value through the CSV number format
double normalize_g6(double v);

// One row per record; the loss columns carry the final-epoch values and the
// autoencoder column is divided by loss_divisor. The ms column is written
// only when with_timing is set, so default output is byte-identical across
// reruns.
std::string records_to_csv(const std::vector<GenerationRecord>& records,
                           double loss_divisor, bool with_timing);
void write_csv(const std::vector<GenerationRecord>& records,
               const std::string& path, double loss_divisor,
               bool with_timing = false);

// Epoch-level sidecar used by the loss plots:
// replicate,generation,epoch,loss_dec,loss_enc,loss_auto
std::string losses_to_csv(const std::vector<GenerationRecord>& records,
                          double loss_divisor);
void write_losses_csv(const std::vector<GenerationRecord>& records,
                      const std::string& path, double loss_divisor);

// Parsers for re-plotting. Loss vectors in the returned records carry the
// already-scaled per-epoch values from the sidecar.
std::vector<GenerationRecord> read_records_csv(const std::string& path);
void read_losses_csv(const std::string& path,
                     std::vector<GenerationRecord>& records);

}  // namespace ilm
