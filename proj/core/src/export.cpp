#include "wgf/export.hpp"

#include <json.hpp>

#include <cmath>

namespace wgf {

namespace {

using nlohmann::ordered_json;

// nlohmann writes NaN as null; keep that explicit for the reader.
ordered_json number(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json fbm_json(std::optional<double> param, const FbmReport& r) {
    ordered_json j;
    j["param"] = param ? number(*param) : ordered_json(nullptr);
    j["M"] = r.count;
    ordered_json eps = ordered_json::array();
    ordered_json w1 = ordered_json::array();
    for (int l = 0; l < r.count; ++l) {
        eps.push_back(number(r.quasienergies[static_cast<std::size_t>(l)]));
        w1.push_back(number(r.principal_weights[static_cast<std::size_t>(l)]));
    }
    j["eps_fbm"] = std::move(eps);
    j["gap_width"] = number(r.gap_width);
    j["w1"] = std::move(w1);
    return j;
}

}  // namespace

CsvWriter trace_csv(const AmplitudeTrace& trace) {
    const auto n = trace.amplitudes.empty() ? 0 : trace.amplitudes.front().size();
    std::vector<std::string> header{"z"};
    for (Eigen::Index j = 1; j <= n; ++j) {
        header.push_back("re_A" + std::to_string(j));
        header.push_back("im_A" + std::to_string(j));
    }
    CsvWriter csv(std::move(header));
    std::vector<double> row;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        row.assign(1, trace.z[i]);
        for (Eigen::Index j = 0; j < n; ++j) {
            row.push_back(trace.amplitudes[i](j).real());
            row.push_back(trace.amplitudes[i](j).imag());
        }
        csv.add_row(row);
    }
    return csv;
}

CsvWriter intensity_csv(const AmplitudeTrace& trace) {
    const auto n = trace.amplitudes.empty() ? 0 : trace.amplitudes.front().size();
    std::vector<std::string> header{"z"};
    for (Eigen::Index j = 1; j <= n; ++j) {
        header.push_back("I" + std::to_string(j));
    }
    CsvWriter csv(std::move(header));
    std::vector<double> row;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        row.assign(1, trace.z[i]);
        for (Eigen::Index j = 0; j < n; ++j) {
            row.push_back(std::norm(trace.amplitudes[i](j)));
        }
        csv.add_row(row);
    }
    return csv;
}

std::vector<std::string> spectrum_header(int dimension) {
    std::vector<std::string> header{"param_value"};
    for (int j = 1; j <= dimension; ++j) {
        header.push_back("eps_" + std::to_string(j));
    }
    return header;
}

std::vector<double> spectrum_row(double param, const FloquetSpectrum& spectrum) {
    std::vector<double> row{param};
    for (const auto& m : spectrum.modes) {
        row.push_back(m.quasienergy);
    }
    return row;
}

CsvWriter markov_csv(const MarkovComparison& cmp) {
    CsvWriter csv({"z", "markov_intensity", "exact_intensity"});
    for (std::size_t i = 0; i < cmp.z.size(); ++i) {
        csv.add_row(std::vector<double>{cmp.z[i], cmp.markov[i], cmp.exact[i]});
    }
    return csv;
}

std::vector<std::string> dynloc_header() {
    return {"Z", "absF0sq", "eff_intensity_longz", "exact_intensity_longz", "fbm_count"};
}

std::vector<std::string> dynloc_row(const MethodComparison& c) {
    return {format_double(c.period), format_double(c.abs_f0_sq), format_double(c.effective_longz),
            format_double(c.exact_longz), std::to_string(c.fbm_count)};
}

std::string fbm_record_json(std::optional<double> param, const FbmReport& report, int indent) {
    return fbm_json(param, report).dump(indent) + "\n";
}

std::string fbm_records_json(const std::vector<std::pair<double, FbmReport>>& records) {
    ordered_json arr = ordered_json::array();
    for (const auto& [p, r] : records) {
        arr.push_back(fbm_json(p, r));
    }
    return arr.dump(2) + "\n";
}

std::string modes_json(const FloquetSpectrum& s) {
    ordered_json j;
    j["omega"] = s.omega;
    j["lambdabar"] = s.lambdabar;
    j["n_harmonics"] = s.n_harmonics;
    j["dimension"] = s.dimension;
    j["frame"] = s.frame == FloquetFrame::CoMoving ? "comoving" : "lab";
    if (s.comoving) {
        j["step"] = {{"beta0", s.comoving->beta0},
                     {"delta", s.comoving->delta},
                     {"Z", s.comoving->period},
                     {"Zprime", s.comoving->duty}};
    }
    ordered_json modes = ordered_json::array();
    for (std::size_t a = 0; a < s.modes.size(); ++a) {
        const auto& m = s.modes[a];
        ordered_json mj;
        mj["index"] = a;
        mj["quasienergy"] = m.quasienergy;
        mj["first_harmonic"] = m.first_harmonic;
        ordered_json comps = ordered_json::array();
        for (const auto& c : m.components) {
            ordered_json v = ordered_json::array();
            for (Eigen::Index i = 0; i < c.size(); ++i) {
                v.push_back({c(i).real(), c(i).imag()});
            }
            comps.push_back(std::move(v));
        }
        mj["components"] = std::move(comps);
        modes.push_back(std::move(mj));
    }
    j["modes"] = std::move(modes);
    return j.dump() + "\n";
}

}  // namespace wgf
