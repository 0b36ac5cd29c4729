#pragma once

// Experiment orchestration: Monte Carlo error tables over a list of N,
// slope fits, and CSV / SVG output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ddex/analysis.hpp"
#include "ddex/problems.hpp"

namespace ddex {

struct ExperimentConfig {
    PresetKind preset = PresetKind::kainhofer;
    PresetParams params;
    std::vector<int> steps_list;
    int samples = 100;
    std::optional<int> ref_factor;
    std::optional<double> ref_step;
    bool oracle = false;
    std::uint64_t seed = 0;
    double p = 2.0;
    Scheme scheme = Scheme::randomized;
    Scheme reference_scheme = Scheme::randomized;
    bool parallel = true;

    // Output paths; empty means not written.
    std::string csv_path;
    std::string slopes_csv_path;
    std::string svg_path;

    void validate() const;
};

struct ExperimentResult {
    Scheme scheme = Scheme::randomized;
    ErrorTable rows;  // sorted by (N, j)
    std::vector<SlopeReport> interval_slopes;
    std::optional<SlopeReport> max_slopes;
    std::vector<std::string> notices;  // warnings and fit notices
    bool partial = false;
    std::string failure;  // first divergence, when partial
};

struct ComparisonResult {
    ExperimentResult randomized;
    ExperimentResult classical;
};

// Error table for an already assembled preset, without writing files.
ExperimentResult run_error_study(const ProblemPreset& preset, const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

// Same reference configuration, once per scheme. Output paths get a
// "_randomized" / "_classical" suffix before the extension.
ComparisonResult compare_schemes(const ExperimentConfig& config);

// Header N,h,j,err,spread,K,p; 17 significant digits; LF endings.
void write_error_csv(std::ostream& os, const ErrorTable& rows);

// Header kind,from_N,to_N,slope. Per-interval fits come first as
// pairwise_j<j> / ols_j<j> / r2_j<j>, then the max-over-intervals fit as
// pairwise rows with final `ols,,,slope` and `r2,,,value` rows.
void write_slopes_csv(std::ostream& os, const ExperimentResult& result);

// Log-log plot of err against h per interval, with fitted lines.
void write_svg(std::ostream& os, const ExperimentResult& result, const std::string& title);

std::string with_suffix(const std::string& path, const std::string& suffix);

}  // namespace ddex
