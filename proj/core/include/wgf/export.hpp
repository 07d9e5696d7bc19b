// export.hpp: the on-disk formats (see docs/formats.md).

#pragma once

#include "wgf/analysis.hpp"
#include "wgf/dynloc.hpp"
#include "wgf/floquet.hpp"
#include "wgf/io.hpp"
#include "wgf/markovian.hpp"
#include "wgf/propagator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wgf {

// z,re_A1,im_A1,...,re_A{L+1},im_A{L+1}
CsvWriter trace_csv(const AmplitudeTrace& trace);
// z,I1,...,I{L+1}
CsvWriter intensity_csv(const AmplitudeTrace& trace);

// param_value,eps_1,...,eps_{L+1}
std::vector<std::string> spectrum_header(int dimension);
std::vector<double> spectrum_row(double param, const FloquetSpectrum& spectrum);

// z,markov_intensity,exact_intensity
CsvWriter markov_csv(const MarkovComparison& cmp);

// Z,absF0sq,eff_intensity_longz,exact_intensity_longz,fbm_count
std::vector<std::string> dynloc_header();
std::vector<std::string> dynloc_row(const MethodComparison& cmp);

// {"param": ..., "M": ..., "eps_fbm": [...], "gap_width": ..., "w1": [...]}
std::string fbm_record_json(std::optional<double> param, const FbmReport& report, int indent = -1);
// JSON array of records
std::string fbm_records_json(const std::vector<std::pair<double, FbmReport>>& records);

// Per-mode Fourier components.
std::string modes_json(const FloquetSpectrum& spectrum);

}  // namespace wgf
