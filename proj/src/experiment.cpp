#include "ddex/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <set>
#include <stdexcept>

namespace ddex {
namespace {

void write_file(const std::string& path, const auto& writer) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    writer(os);
    if (!os) {
        throw std::runtime_error("failed writing " + path);
    }
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::string& title) {
    if (!config.csv_path.empty()) {
        write_file(config.csv_path, [&](std::ostream& os) { write_error_csv(os, result.rows); });
    }
    if (!config.slopes_csv_path.empty()) {
        write_file(config.slopes_csv_path,
                   [&](std::ostream& os) { write_slopes_csv(os, result); });
    }
    if (!config.svg_path.empty()) {
        write_file(config.svg_path, [&](std::ostream& os) { write_svg(os, result, title); });
    }
}

std::string title_for(const ExperimentConfig& config, Scheme scheme) {
    return preset_kind_name(config.preset) + " (" + scheme_name(scheme) + " Euler)";
}

}  // namespace

void ExperimentConfig::validate() const {
    if (steps_list.empty()) {
        throw ValidationError("N list is empty");
    }
    std::set<int> seen;
    for (int n : steps_list) {
        if (n < 1) {
            throw ValidationError("every N must be >= 1");
        }
        if (!seen.insert(n).second) {
            throw ValidationError("N list contains duplicates");
        }
    }
    if (samples < 1) {
        throw ValidationError("K must be >= 1");
    }
    if (!(p >= 1.0)) {
        throw ValidationError("p must be >= 1");
    }
    const int modes = (ref_factor ? 1 : 0) + (ref_step ? 1 : 0) + (oracle ? 1 : 0);
    if (modes != 1) {
        throw ValidationError("choose exactly one of --ref-m, --ref-step, --oracle");
    }
    if (ref_factor && *ref_factor < 1) {
        throw ValidationError("--ref-m must be >= 1");
    }
    if (ref_step && !(*ref_step > 0.0)) {
        throw ValidationError("--ref-step must be positive");
    }
}

ExperimentResult run_error_study(const ProblemPreset& preset, const ExperimentConfig& config) {
    config.validate();
    if (config.oracle && !preset.has_exact()) {
        throw ValidationError("preset " + preset.name + " has no closed form for oracle mode");
    }
    ExperimentResult result;
    result.scheme = config.scheme;
    std::vector<int> steps = config.steps_list;
    std::sort(steps.begin(), steps.end());
    const double tau = preset.problem.tau();

    for (int n : steps) {
        SolverConfig solver_cfg;
        solver_cfg.steps = n;
        if (auto warning = solver_cfg.admissibility_warning(tau)) {
            result.notices.push_back("warning: " + *warning);
        }
        McConfig mc;
        mc.steps = n;
        mc.samples = config.samples;
        mc.ref_factor = config.ref_factor;
        mc.ref_step = config.ref_step;
        mc.oracle = config.oracle;
        mc.seed = config.seed;
        mc.p = config.p;
        mc.scheme = config.scheme;
        mc.reference_scheme = config.reference_scheme;
        McResult mr = config.parallel ? mc_error(preset.problem, mc, preset.exact)
                                      : mc_error_serial(preset.problem, mc, preset.exact);
        if (mr.partial) {
            result.partial = true;
            result.notices.push_back("N=" + std::to_string(n) + ": " +
                                     std::to_string(mr.failed_samples.size()) +
                                     " sample(s) diverged; " + mr.first_failure);
            if (result.failure.empty()) {
                result.failure = mr.first_failure;
            }
        }
        result.rows.insert(result.rows.end(), mr.rows.begin(), mr.rows.end());
    }

    for (int j = 0; j <= preset.problem.horizon(); ++j) {
        try {
            auto report = fit_slopes(result.rows, j);
            for (const auto& note : report.notices) {
                result.notices.push_back("interval " + std::to_string(j) + ": " + note);
            }
            result.interval_slopes.push_back(std::move(report));
        } catch (const DegenerateFit& e) {
            result.notices.push_back("interval " + std::to_string(j) + ": " + e.what());
        }
    }
    try {
        result.max_slopes = fit_slopes(result.rows, std::nullopt);
    } catch (const DegenerateFit& e) {
        result.notices.push_back(std::string("max over intervals: ") + e.what());
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    PresetParams params = config.params;
    params.seed = config.seed;
    const ProblemPreset preset = make_preset(config.preset, params);
    ExperimentResult result = run_error_study(preset, config);
    write_outputs(config, result, title_for(config, config.scheme));
    return result;
}

ComparisonResult compare_schemes(const ExperimentConfig& config) {
    config.validate();
    PresetParams params = config.params;
    params.seed = config.seed;
    const ProblemPreset preset = make_preset(config.preset, params);

    ComparisonResult out;
    for (Scheme scheme : {Scheme::randomized, Scheme::classical}) {
        ExperimentConfig cfg = config;
        cfg.scheme = scheme;
        const std::string suffix = std::string("_") + scheme_name(scheme);
        if (!cfg.csv_path.empty()) cfg.csv_path = with_suffix(cfg.csv_path, suffix);
        if (!cfg.slopes_csv_path.empty()) cfg.slopes_csv_path = with_suffix(cfg.slopes_csv_path, suffix);
        if (!cfg.svg_path.empty()) cfg.svg_path = with_suffix(cfg.svg_path, suffix);
        ExperimentResult result = run_error_study(preset, cfg);
        write_outputs(cfg, result, title_for(cfg, scheme));
        (scheme == Scheme::randomized ? out.randomized : out.classical) = std::move(result);
    }
    return out;
}

void write_error_csv(std::ostream& os, const ErrorTable& rows) {
    os << "N,h,j,err,spread,K,p\n";
    for (const auto& r : rows) {
        os << r.N << ',' << format_real(r.h) << ',' << r.j << ',' << format_real(r.err) << ','
           << format_real(r.spread) << ',' << r.K << ',' << format_real(r.p) << '\n';
    }
}

void write_slopes_csv(std::ostream& os, const ExperimentResult& result) {
    os << "kind,from_N,to_N,slope\n";
    for (const auto& report : result.interval_slopes) {
        const std::string tag = "_j" + std::to_string(report.interval.value_or(-1));
        for (const auto& s : report.pairwise) {
            os << "pairwise" << tag << ',' << s.from_N << ',' << s.to_N << ','
               << format_real(s.slope) << '\n';
        }
        os << "ols" << tag << ",,," << format_real(report.ols_slope) << '\n';
        os << "r2" << tag << ",,," << format_real(report.r_squared) << '\n';
    }
    if (result.max_slopes) {
        for (const auto& s : result.max_slopes->pairwise) {
            os << "pairwise," << s.from_N << ',' << s.to_N << ',' << format_real(s.slope) << '\n';
        }
        os << "ols,,," << format_real(result.max_slopes->ols_slope) << '\n';
        os << "r2,,," << format_real(result.max_slopes->r_squared) << '\n';
    } else {
        os << "ols,,,nan\n";
        os << "r2,,,nan\n";
    }
}

void write_svg(std::ostream& os, const ExperimentResult& result, const std::string& title) {
    constexpr double width = 640.0;
    constexpr double height = 480.0;
    constexpr double left = 70.0;
    constexpr double right = 150.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;
    static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                          "#9467bd", "#ff7f0e", "#8c564b"};

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& r : result.rows) {
        if (r.err > 0.0 && std::isfinite(r.err)) {
            xmin = std::min(xmin, std::log10(r.h));
            xmax = std::max(xmax, std::log10(r.h));
            ymin = std::min(ymin, std::log10(r.err));
            ymax = std::max(ymax, std::log10(r.err));
        }
    }
    const bool empty = !(xmin <= xmax);
    if (empty) {
        xmin = -1.0, xmax = 0.0, ymin = -1.0, ymax = 0.0;
    }
    xmin = std::floor(xmin), xmax = std::ceil(xmax);
    ymin = std::floor(ymin), ymax = std::ceil(ymax);
    if (xmax == xmin) xmax += 1.0;
    if (ymax == ymin) ymax += 1.0;

    const auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * (width - left - right); };
    const auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * (height - top - bottom); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
       << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = xmin; d <= xmax + 1e-9; d += 1.0) {
        os << "<line x1=\"" << px(d) << "\" y1=\"" << height - bottom << "\" x2=\"" << px(d)
           << "\" y2=\"" << height - bottom + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(d) << "\" y=\"" << height - bottom + 20
           << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (double d = ymin; d <= ymax + 1e-9; d += 1.0) {
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << left
           << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << py(d) + 4
           << "\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 15
       << "\" text-anchor=\"middle\">step size h</text>\n";
    os << "<text x=\"18\" y=\"" << (top + height - bottom) / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (top + height - bottom) / 2
       << ")\">error</text>\n";

    for (const auto& report : result.interval_slopes) {
        const int j = report.interval.value_or(0);
        const char* color = palette[static_cast<std::size_t>(j) % std::size(palette)];
        double hx0 = INFINITY, hx1 = -INFINITY;
        for (const auto& r : result.rows) {
            if (r.j != j || !(r.err > 0.0) || !std::isfinite(r.err)) continue;
            const double lx = std::log10(r.h);
            hx0 = std::min(hx0, lx);
            hx1 = std::max(hx1, lx);
            os << "<circle cx=\"" << px(lx) << "\" cy=\"" << py(std::log10(r.err))
               << "\" r=\"4\" fill=\"" << color << "\"/>\n";
        }
        // log10 err = intercept/ln10 + slope * log10 h
        const double c = report.ols_intercept / std::log(10.0);
        os << "<line x1=\"" << px(hx0) << "\" y1=\"" << py(c + report.ols_slope * hx0)
           << "\" x2=\"" << px(hx1) << "\" y2=\"" << py(c + report.ols_slope * hx1)
           << "\" stroke=\"" << color << "\" stroke-dasharray=\"5,3\"/>\n";
        const double ly = top + 20.0 + 20.0 * j;
        os << "<rect x=\"" << width - right + 12 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
           << color << "\"/>\n";
        char label[64];
        std::snprintf(label, sizeof label, "j=%d slope %.2f", j, report.ols_slope);
        os << "<text x=\"" << width - right + 28 << "\" y=\"" << ly << "\">" << label << "</text>\n";
    }
    if (empty) {
        os << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << (top + height - bottom) / 2
           << "\" text-anchor=\"middle\">degenerate: zero errors</text>\n";
    }
    os << "</svg>\n";
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + suffix;
    }
    return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace ddex
