// config.hpp: run configuration files.
//
// Flat key = value text in sections; '#' or ';' start a comment.
//
//   [system]      L, beta, beta1, kappa, kappa12, lambdabar
//   [modulation]  type = none | harmonic | step
//                 harmonic: a, omega, b      step: beta0, delta, Z, Zprime | duty_ratio
//   [propagate]   z_max, dz (0 = default), stride
//   [floquet]     n_harmonics (0 = default), verify_convergence, convergence_tol,
//                 max_doublings, lab_frame
//   [analysis]    tol_gap_factor, w_min
//   [dynloc]      Z_min, Z_max, Z_count, zero_samples
//   [sweep]       axis = a | omega | delta | Z, values = start:stop:step | v1, v2, ...,
//                 outputs = trace, spectrum, fbm, markovian, dynloc, trace_files
//
// Overrides "section.key=value" (or a bare key that names exactly one entry of the
// schema) replace or add entries before validation.

#pragma once

#include "wgf/analysis.hpp"
#include "wgf/floquet.hpp"
#include "wgf/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wgf {

struct ConfigIssue {
    int line{0};  // 1-based; 0 for command-line overrides and whole-file problems
    std::string message;
};

class ConfigFileError : public ConfigError {
public:
    ConfigFileError(std::string source, std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct PropagateSettings {
    double z_max{100.0};
    double dz{0.0};
    std::size_t stride{1};
};

struct DynlocSettings {
    double z_min{0.25};
    double z_max{6.0};
    int z_count{24};
    int zero_samples{600};
};

enum class SweepOutput { Trace, Spectrum, Fbm, Markovian, Dynloc };

struct SweepSettings {
    std::string axis;
    std::vector<double> values;
    std::vector<SweepOutput> outputs;  // ascending enum order, no duplicates
    bool trace_files{false};           // per-point amplitude and intensity CSVs

    bool wants(SweepOutput o) const;
};

struct RunConfig {
    SystemConfig system;
    std::optional<double> duty_ratio;  // step: Z' = duty_ratio * Z, kept when Z is swept
    PropagateSettings propagate;
    FloquetOptions floquet;
    FbmOptions analysis;
    DynlocSettings dynloc;
    std::optional<SweepSettings> sweep;
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<ConfigIssue> errors;

    bool ok() const noexcept { return config.has_value(); }
};

ParseResult validate_config(std::string_view text, const std::vector<std::string>& overrides = {});

// Reads and validates; throws ConfigFileError listing every issue.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {},
                       const std::string& source = "config");

std::string format_issues(const std::string& source, const std::vector<ConfigIssue>& issues);

// System with the sweep axis set to value. Throws ConfigError for an axis the
// profile does not have.
SystemConfig with_parameter(const RunConfig& run, const std::string& axis, double value);

std::string to_string(SweepOutput output);

}  // namespace wgf
