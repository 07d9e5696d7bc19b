#include "wgf/sweep.hpp"

#include "wgf/export.hpp"
#include "wgf/io.hpp"
#include "wgf/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

namespace wgf {

namespace {

using nlohmann::ordered_json;

struct PointResult {
    PointStatus status;
    std::optional<AmplitudeTrace> trace;
    std::optional<FloquetSpectrum> spectrum;
    std::optional<FbmReport> fbm;
    std::optional<MarkovComparison> markov;
    std::optional<MethodComparison> dynloc;
};

std::string failure_kind(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const ConvergenceFailure&) {
        return "ConvergenceFailure";
    } catch (const StepSizeError&) {
        return "StepSizeError";
    } catch (const FbmCountError&) {
        return "FbmCountError";
    } catch (const linalg::EigenError&) {
        return "EigenError";
    } catch (const ConfigError&) {
        return "ConfigError";
    } catch (const std::exception&) {
        return "Error";
    }
}

std::string failure_message(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const std::exception& ex) {
        return ex.what();
    } catch (...) {
        return "unknown exception";
    }
}

template <class F>
void attempt(PointResult& r, SweepOutput output, F&& f) {
    try {
        f();
    } catch (...) {
        const auto e = std::current_exception();
        r.status.failures.push_back({to_string(output), failure_kind(e), failure_message(e)});
    }
}

PointResult run_point(const RunConfig& run, std::size_t index) {
    const auto& sw = *run.sweep;
    PointResult r;
    r.status.index = index;
    r.status.value = sw.values[index];
    SystemConfig cfg;
    try {
        cfg = with_parameter(run, sw.axis, sw.values[index]);
        r.status.config_hash = config_hash(cfg);
    } catch (...) {
        const auto e = std::current_exception();
        r.status.failures.push_back({"config", failure_kind(e), failure_message(e)});
        return r;
    }

    PropagationOptions popt;
    popt.dz = run.propagate.dz;
    popt.stride = run.propagate.stride;

    if (sw.wants(SweepOutput::Trace)) {
        attempt(r, SweepOutput::Trace, [&] { r.trace = propagate(cfg, run.propagate.z_max, popt); });
    }
    const bool gap = gap_exists(cfg).exists;
    if (sw.wants(SweepOutput::Spectrum) || (sw.wants(SweepOutput::Fbm) && gap)) {
        attempt(r, SweepOutput::Spectrum, [&] { r.spectrum = solve_spectrum(cfg, run.floquet); });
    }
    if (sw.wants(SweepOutput::Fbm)) {
        attempt(r, SweepOutput::Fbm, [&] {
            if (!gap) {
                r.fbm = gap_absent_report(cfg);
            } else if (r.spectrum) {
                r.fbm = detect_fbm(*r.spectrum, cfg, run.analysis);
            } else {
                throw std::runtime_error("no spectrum available for this point");
            }
        });
    }
    if (sw.wants(SweepOutput::Markovian)) {
        attempt(r, SweepOutput::Markovian, [&] {
            r.markov = compare_with_exact(cfg, run.propagate.z_max, run.propagate.dz, run.propagate.stride);
        });
    }
    if (sw.wants(SweepOutput::Dynloc)) {
        attempt(r, SweepOutput::Dynloc, [&] {
            r.dynloc = compare_methods(cfg, run.propagate.z_max, run.floquet, run.analysis);
        });
    }
    return r;
}

std::string point_tag(std::size_t index, std::size_t count) {
    std::ostringstream s;
    const int width = std::max(3, static_cast<int>(std::to_string(count - 1).size()));
    s << std::setw(width) << std::setfill('0') << index;
    return s.str();
}

ordered_json system_json(const RunConfig& run) {
    const auto& c = run.system;
    ordered_json j;
    j["L"] = c.array_size;
    j["beta"] = c.beta;
    j["beta1"] = c.beta1_static;
    j["kappa"] = c.kappa;
    j["kappa12"] = c.kappa12_static;
    j["lambdabar"] = c.lambdabar;
    if (const auto* h = std::get_if<HarmonicCoupling>(&c.modulation)) {
        j["modulation"] = {{"type", "harmonic"}, {"a", h->a}, {"omega", h->omega}, {"b", h->b}};
    } else if (const auto* s = std::get_if<StepIndex>(&c.modulation)) {
        j["modulation"] = {{"type", "step"}, {"beta0", s->beta0}, {"delta", s->delta},
                           {"Z", s->period},  {"Zprime", s->duty}};
        if (run.duty_ratio) {
            j["modulation"]["duty_ratio"] = *run.duty_ratio;
        }
    } else {
        j["modulation"] = {{"type", "none"}};
    }
    j["propagate"] = {{"z_max", run.propagate.z_max},
                      {"dz", run.propagate.dz},
                      {"stride", run.propagate.stride}};
    j["floquet"] = {{"n_harmonics", run.floquet.n_harmonics},
                    {"verify_convergence", run.floquet.verify_convergence},
                    {"convergence_tol", run.floquet.convergence_tol},
                    {"max_doublings", run.floquet.max_doublings},
                    {"lab_frame", run.floquet.force_lab_frame}};
    j["analysis"] = {{"tol_gap_factor", run.analysis.tol_gap_factor}, {"w_min", run.analysis.w_min}};
    return j;
}

std::string gnuplot_heatmap() {
    return "# principal-waveguide intensity |A1(z)|^2 over the sweep parameter\n"
           "set datafile separator ','\n"
           "set xlabel 'z'\nset ylabel 'parameter'\nset cblabel '|A_1|^2'\n"
           "set view map\n"
           "splot 'intensity_heatmap.csv' every ::1 using 2:1:3 with points pt 5 ps 0.3 palette notitle\n";
}

std::string gnuplot_spectrum(int dimension) {
    return "# folded quasienergies against the sweep parameter\n"
           "set datafile separator ','\n"
           "set xlabel 'parameter'\nset ylabel 'quasienergy'\n"
           "plot for [i=2:" + std::to_string(dimension + 1) +
           "] 'spectrum.csv' every ::1 using 1:i with dots lc rgb 'black' notitle\n";
}

std::string gnuplot_markov(const std::vector<std::string>& files) {
    std::string s = "# Markovian estimate against the propagated intensity, one panel per point\n"
                    "set datafile separator ','\nset xlabel 'z'\nset ylabel '|A_1|^2'\n";
    for (const auto& f : files) {
        s += "plot '" + f + "' every ::1 using 1:2 with lines title 'markovian', '' every ::1 using 1:3 "
             "with lines title 'exact'\npause -1\n";
    }
    return s;
}

std::string gnuplot_dynloc() {
    return "# rotating-frame factor and long-z intensities against the period Z\n"
           "set datafile separator ','\nset xlabel 'Z'\n"
           "plot 'dynloc.csv' every ::1 using 1:2 with lines title '|F_0|^2', "
           "'' every ::1 using 1:3 with lines title 'effective model', "
           "'' every ::1 using 1:4 with lines title 'exact'\n";
}

}  // namespace

std::size_t SweepResult::failed_points() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(),
                                                  [](const PointStatus& p) { return !p.failures.empty(); }));
}

int default_workers() {
    if (const char* env = std::getenv("WGF_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepResult run_sweep(const RunConfig& run, const std::filesystem::path& out_dir, int workers) {
    if (!run.sweep) {
        throw ConfigError("run_sweep: the configuration has no [sweep] section");
    }
    const auto& sw = *run.sweep;
    const std::size_t count = sw.values.size();
    if (workers <= 0) {
        workers = default_workers();
    }
    workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), count));

    std::vector<PointResult> results(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            results[i] = run_point(run, i);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    std::filesystem::create_directories(out_dir);
    SweepResult out;
    auto emit = [&](const std::string& name, const std::string& digest, std::size_t rows) {
        out.files.push_back({name, digest, rows});
    };
    auto emit_csv = [&](const std::string& name, const CsvWriter& csv) {
        emit(name, csv.write(out_dir / name), csv.rows());
    };

    if (sw.wants(SweepOutput::Trace)) {
        CsvWriter heat({"param_value", "z", "I1"});
        for (const auto& r : results) {
            if (!r.trace) continue;
            for (std::size_t i = 0; i < r.trace->size(); ++i) {
                heat.add_row(std::vector<double>{r.status.value, r.trace->z[i], r.trace->principal_intensity(i)});
            }
        }
        emit_csv("intensity_heatmap.csv", heat);
        emit("intensity_heatmap.gp", write_text(out_dir / "intensity_heatmap.gp", gnuplot_heatmap()), 0);
        if (sw.trace_files) {
            for (const auto& r : results) {
                if (!r.trace) continue;
                const auto tag = point_tag(r.status.index, count);
                emit_csv("trace_" + tag + ".csv", trace_csv(*r.trace));
                emit_csv("intensity_" + tag + ".csv", intensity_csv(*r.trace));
            }
        }
    }
    if (sw.wants(SweepOutput::Spectrum)) {
        CsvWriter csv(spectrum_header(run.system.dimension()));
        for (const auto& r : results) {
            if (r.spectrum) csv.add_row(spectrum_row(r.status.value, *r.spectrum));
        }
        emit_csv("spectrum.csv", csv);
        emit("spectrum.gp", write_text(out_dir / "spectrum.gp", gnuplot_spectrum(run.system.dimension())), 0);
    }
    if (sw.wants(SweepOutput::Fbm)) {
        std::vector<std::pair<double, FbmReport>> records;
        for (const auto& r : results) {
            if (r.fbm) records.emplace_back(r.status.value, *r.fbm);
        }
        emit("fbm.json", write_text(out_dir / "fbm.json", fbm_records_json(records)), records.size());
    }
    if (sw.wants(SweepOutput::Markovian)) {
        std::vector<std::string> names;
        for (const auto& r : results) {
            if (!r.markov) continue;
            names.push_back("markov_" + point_tag(r.status.index, count) + ".csv");
            emit_csv(names.back(), markov_csv(*r.markov));
        }
        emit("markov.gp", write_text(out_dir / "markov.gp", gnuplot_markov(names)), 0);
    }
    if (sw.wants(SweepOutput::Dynloc)) {
        CsvWriter csv(dynloc_header());
        for (const auto& r : results) {
            if (r.dynloc) csv.add_row(dynloc_row(*r.dynloc));
        }
        emit_csv("dynloc.csv", csv);
        emit("dynloc.gp", write_text(out_dir / "dynloc.gp", gnuplot_dynloc()), 0);
    }

    ordered_json manifest;
    manifest["format"] = "wgf-sweep-1";
    manifest["axis"] = sw.axis;
    manifest["values"] = sw.values;
    ordered_json outputs = ordered_json::array();
    for (auto o : sw.outputs) outputs.push_back(to_string(o));
    manifest["outputs"] = std::move(outputs);
    manifest["base_config_hash"] = config_hash(run.system);
    manifest["config"] = system_json(run);
    ordered_json files = ordered_json::array();
    for (const auto& f : out.files) {
        files.push_back({{"path", f.path}, {"fnv1a64", f.digest}, {"rows", f.rows}});
    }
    manifest["files"] = std::move(files);
    ordered_json points = ordered_json::array();
    for (auto& r : results) {
        ordered_json p;
        p["index"] = r.status.index;
        p["value"] = r.status.value;
        p["config_hash"] = r.status.config_hash;
        p["status"] = r.status.failures.empty() ? "ok" : "failed";
        ordered_json fails = ordered_json::array();
        for (const auto& f : r.status.failures) {
            fails.push_back({{"output", f.output}, {"kind", f.kind}, {"message", f.message}});
        }
        p["failures"] = std::move(fails);
        points.push_back(std::move(p));
        out.points.push_back(std::move(r.status));
    }
    manifest["points"] = std::move(points);
    manifest["failed_points"] = out.failed_points();
    out.manifest_digest = write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return out;
}

}  // namespace wgf
