// sweep.hpp: parameter sweeps over a grid of one modulation parameter.
//
// Points are independent and run on a bounded pool of worker threads; results are
// merged in grid order, so every written byte is independent of the worker count.
// A failing point (or output of a point) is recorded in the manifest and the sweep
// carries on.

#pragma once

#include "wgf/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace wgf {

struct PointFailure {
    std::string output;
    std::string kind;  // ConvergenceFailure, StepSizeError, ...
    std::string message;
};

struct PointStatus {
    std::size_t index{0};
    double value{0.0};
    std::string config_hash;
    std::vector<PointFailure> failures;
};

struct ManifestFile {
    std::string path;  // relative to the output directory
    std::string digest;
    std::size_t rows{0};
};

struct SweepResult {
    std::vector<PointStatus> points;
    std::vector<ManifestFile> files;
    std::string manifest_digest;

    std::size_t failed_points() const;
};

// Worker count from WGF_WORKERS, else the hardware concurrency (at least 1).
int default_workers();

// Runs run.sweep (which must be set) and writes all outputs plus manifest.json.
SweepResult run_sweep(const RunConfig& run, const std::filesystem::path& out_dir, int workers = 0);

}  // namespace wgf
