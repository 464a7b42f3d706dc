#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fusion/analysis.hpp"
#include "fusion/model.hpp"

// File formats. Observations: header "x,y", one pair per row. Traces:
// header "iter,mu_x,mu_y,sigma2_x,sigma2_y,rho". Curves: "value,density".
// All floating-point output uses 17 significant digits so files round-trip
// bit-exactly.

namespace fusion {

std::string format_g17(double v);

ObservationSet read_observations_csv(const std::string& path);
void write_observations_csv(const std::string& path,
                            const ObservationSet& data);

std::vector<ModelParams> read_trace_csv(const std::string& path);
void write_trace_csv(const std::string& path,
                     const std::vector<ModelParams>& states);

void write_curve_csv(const std::string& path, const DensityCurve& curve);

// Content fingerprint (FNV-1a, 64-bit) used by the run manifest.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace fusion
