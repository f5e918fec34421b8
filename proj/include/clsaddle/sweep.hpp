#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clsaddle/observables.hpp"
#include "clsaddle/params.hpp"

namespace clsaddle {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SweepAxis { Time, Gamma, Beta, NEnv, EpsRefine };

struct SweepConfig {
    ModelParams model;
    double eps = 0.05;
    std::optional<double> eps_tilde;  // default rule applies when absent
    double t_max = 1.2;
    SweepAxis axis = SweepAxis::Time;
    std::vector<double> axis_values;  // ignored for the time axis
    double fit_lo = 0.4;
    double fit_hi = 1.1;
    Normalization normalization = Normalization::Peak;
    std::string out = "out.csv";

    void validate() const;  // throws ConfigError
};

// Flat key/value config: "key = value" lines, '#' comments. Unknown keys are
// errors. sweep_values is a comma-separated list.
SweepConfig parse_config(std::istream& in);
SweepConfig parse_config_file(const std::string& path);
void apply_override(SweepConfig& cfg, const std::string& key, const std::string& value);

struct ObsRow {
    double axis_value;
    double t;
    double j, k;
    double gamma_diag, gamma_offdiag;
    double gamma_tilde;   // NaN when gamma = 0 (rescaling undefined)
    double me_prediction; // 8 gamma t / beta
};

// One time series on the grid t = eps, 2 eps, ..., up to t_max; each point
// gets its own contour, assembly and factorization. jobs > 1 dispatches time
// points to a worker pool; the result order is deterministic regardless.
std::vector<ObsRow> run_time_series(const ModelParams& model, double eps,
                                    std::optional<double> eps_tilde, double t_max,
                                    double axis_value, int jobs = 1);

// Concatenated time series per axis value, sorted by (axis_value order, t).
std::vector<ObsRow> run_axis_sweep(const SweepConfig& cfg, int jobs = 1);

const char* axis_name(SweepAxis axis);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    double lo = 0.0, hi = 0.0;
    int n_points = 0;
};

// Unweighted least squares of y against t on points with lo <= t <= hi.
FitResult fit_linear(const std::vector<std::pair<double, double>>& points,
                     double lo, double hi);

// CSV with the fixed header
// axis_name,axis_value,t,J,K,gamma_diag,gamma_offdiag,gamma_tilde,me_prediction
// and floats printed with 12 significant digits.
void write_csv(std::ostream& os, const std::string& axis, const std::vector<ObsRow>& rows);

struct CsvRow {
    std::string axis;
    ObsRow row;
};
std::vector<CsvRow> read_csv(std::istream& in);

} // namespace clsaddle
