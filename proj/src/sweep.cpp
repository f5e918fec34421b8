#include "clsaddle/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "clsaddle/assembly.hpp"
#include "clsaddle/contour.hpp"
#include "clsaddle/solver.hpp"

namespace clsaddle {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("invalid numeric value for '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 1e-9)
        throw ConfigError("key '" + key + "' requires an integer, got " + v);
    return i;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "' has an empty value list");
    return out;
}

SweepAxis parse_axis(const std::string& v) {
    if (v == "time") return SweepAxis::Time;
    if (v == "gamma") return SweepAxis::Gamma;
    if (v == "beta") return SweepAxis::Beta;
    if (v == "n_env") return SweepAxis::NEnv;
    if (v == "eps-refine") return SweepAxis::EpsRefine;
    throw ConfigError("unknown sweep_axis '" + v +
                      "' (expected time, gamma, beta, n_env or eps-refine)");
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

template <class F>
void parallel_for(int n, int jobs, F&& f) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex mu;
    std::exception_ptr err;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (err) std::rethrow_exception(err);
}

int grid_points(double t_max, double eps) {
    const int n = static_cast<int>(std::floor(t_max / eps + 1e-9));
    if (n < 1) throw ConfigError("t_max smaller than one time step");
    return n;
}

ObsRow compute_point(const ModelParams& model, double eps,
                     std::optional<double> eps_tilde, int n_t, double axis_value) {
    const LatticeParams lat = LatticeParams::make(eps, n_t, model.beta, eps_tilde);
    const DerivedParams derived = DerivedParams::from(model);
    const ContourIndex idx(n_t, lat.n_beta, model.n_env);
    const QuadraticForm qf = assemble(model, derived, lat, idx);
    const Factorization fact(qf);
    const JK jk = compute_jk(qf, fact);
    const auto [gd, go] = gammas(jk.j, jk.k);

    ObsRow row;
    row.axis_value = axis_value;
    row.t = lat.t_final();
    row.j = jk.j;
    row.k = jk.k;
    row.gamma_diag = gd;
    row.gamma_offdiag = go;
    row.gamma_tilde = model.gamma > 0.0
                          ? gamma_tilde(go, model.gamma, model.beta, model.omega_r)
                          : std::numeric_limits<double>::quiet_NaN();
    row.me_prediction = master_equation_reference(model.gamma, model.beta, row.t);
    return row;
}

void check_row(const ObsRow& row, const std::string& where) {
    if (!(row.gamma_diag > 0.0) || !(row.gamma_offdiag > 0.0))
        throw NumericalError("nonpositive width at " + where);
}

[[noreturn]] void rethrow_with_point(double axis_value, double t) {
    try {
        throw;
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " [axis_value=" + fmt12(axis_value) +
                             ", t=" + fmt12(t) + "]");
    }
}

} // namespace

void SweepConfig::validate() const {
    try {
        model.validate();
    } catch (const ParamError& e) {
        throw ConfigError(e.what());
    }
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (eps_tilde && !(*eps_tilde > 0.0)) throw ConfigError("eps_tilde must be positive");
    if (!(t_max >= eps)) throw ConfigError("t_max must cover at least one time step");
    if (axis != SweepAxis::Time && axis_values.empty())
        throw ConfigError("sweep_values must be nonempty for a non-time axis");
    if (!(fit_lo < fit_hi)) throw ConfigError("fit window must satisfy fit_lo < fit_hi");
}

SweepConfig parse_config(std::istream& in) {
    SweepConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

SweepConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

void apply_override(SweepConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "omega_r") cfg.model.omega_r = parse_double(key, value);
    else if (key == "omega_cut") cfg.model.omega_cut = parse_double(key, value);
    else if (key == "gamma") cfg.model.gamma = parse_double(key, value);
    else if (key == "beta") cfg.model.beta = parse_double(key, value);
    else if (key == "n_env") cfg.model.n_env = parse_int(key, value);
    else if (key == "eps") cfg.eps = parse_double(key, value);
    else if (key == "eps_tilde") cfg.eps_tilde = parse_double(key, value);
    else if (key == "t_max") cfg.t_max = parse_double(key, value);
    else if (key == "sweep_axis") cfg.axis = parse_axis(value);
    else if (key == "sweep_values") cfg.axis_values = parse_list(key, value);
    else if (key == "fit_lo") cfg.fit_lo = parse_double(key, value);
    else if (key == "fit_hi") cfg.fit_hi = parse_double(key, value);
    else if (key == "normalization") {
        if (value == "peak") cfg.normalization = Normalization::Peak;
        else if (value == "trace") cfg.normalization = Normalization::Trace;
        else throw ConfigError("unknown normalization '" + value + "' (peak or trace)");
    } else if (key == "out") cfg.out = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

const char* axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Time: return "time";
        case SweepAxis::Gamma: return "gamma";
        case SweepAxis::Beta: return "beta";
        case SweepAxis::NEnv: return "n_env";
        case SweepAxis::EpsRefine: return "eps-refine";
    }
    return "?";
}

std::vector<ObsRow> run_time_series(const ModelParams& model, double eps,
                                    std::optional<double> eps_tilde, double t_max,
                                    double axis_value, int jobs) {
    const int n = grid_points(t_max, eps);
    std::vector<ObsRow> rows(n);
    parallel_for(n, jobs, [&](int i) {
        const int n_t = i + 1;
        try {
            rows[i] = compute_point(model, eps, eps_tilde, n_t, axis_value);
        } catch (...) {
            rethrow_with_point(axis_value, n_t * eps);
        }
    });
    for (const auto& row : rows)
        check_row(row, "axis_value=" + fmt12(row.axis_value) + ", t=" + fmt12(row.t));
    return rows;
}

std::vector<ObsRow> run_axis_sweep(const SweepConfig& cfg, int jobs) {
    cfg.validate();
    if (cfg.axis == SweepAxis::Time) {
        auto rows = run_time_series(cfg.model, cfg.eps, cfg.eps_tilde, cfg.t_max,
                                    0.0, jobs);
        for (auto& r : rows) r.axis_value = r.t;
        return rows;
    }

    struct Task {
        ModelParams model;
        double eps;
        std::optional<double> eps_tilde;
        double axis_value;
        int n_t;
        int slot;
    };
    std::vector<Task> tasks;
    std::vector<ObsRow> rows;
    for (const double v : cfg.axis_values) {
        ModelParams model = cfg.model;
        double eps = cfg.eps;
        std::optional<double> eps_tilde = cfg.eps_tilde;
        switch (cfg.axis) {
            case SweepAxis::Gamma: model.gamma = v; break;
            case SweepAxis::Beta: model.beta = v; break;
            case SweepAxis::NEnv: model.n_env = static_cast<int>(std::lround(v)); break;
            case SweepAxis::EpsRefine: {
                // refine the Euclidean step in proportion to the real-time one
                const double base = cfg.eps_tilde ? *cfg.eps_tilde
                                                  : default_eps_tilde(cfg.model.beta);
                eps_tilde = base * (v / cfg.eps);
                eps = v;
                break;
            }
            default: break;
        }
        try {
            model.validate();
        } catch (const ParamError& e) {
            throw ConfigError(std::string(e.what()) + " [axis_value=" + fmt12(v) + "]");
        }
        const int n = grid_points(cfg.t_max, eps);
        for (int i = 0; i < n; ++i)
            tasks.push_back({model, eps, eps_tilde, v, i + 1,
                             static_cast<int>(tasks.size())});
    }
    rows.resize(tasks.size());
    parallel_for(static_cast<int>(tasks.size()), jobs, [&](int i) {
        const Task& tk = tasks[i];
        try {
            rows[tk.slot] = compute_point(tk.model, tk.eps, tk.eps_tilde, tk.n_t,
                                          tk.axis_value);
        } catch (...) {
            rethrow_with_point(tk.axis_value, tk.n_t * tk.eps);
        }
    });
    for (const auto& row : rows)
        check_row(row, "axis_value=" + fmt12(row.axis_value) + ", t=" + fmt12(row.t));
    return rows;
}

FitResult fit_linear(const std::vector<std::pair<double, double>>& points,
                     double lo, double hi) {
    FitResult fit;
    fit.lo = lo;
    fit.hi = hi;
    double st = 0, sy = 0, stt = 0, sty = 0;
    std::vector<std::pair<double, double>> in;
    for (const auto& [t, y] : points)
        if (t >= lo && t <= hi) in.push_back({t, y});
    fit.n_points = static_cast<int>(in.size());
    if (fit.n_points < 2)
        throw ConfigError("fit window [" + fmt12(lo) + ", " + fmt12(hi) +
                          "] contains fewer than 2 points");
    for (const auto& [t, y] : in) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double n = fit.n_points;
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw ConfigError("fit window points are degenerate in t");
    fit.slope = (n * sty - st * sy) / denom;
    fit.intercept = (sy - fit.slope * st) / n;
    double ss = 0.0;
    for (const auto& [t, y] : in) {
        const double r = y - (fit.slope * t + fit.intercept);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

void write_csv(std::ostream& os, const std::string& axis, const std::vector<ObsRow>& rows) {
    os << "axis_name,axis_value,t,J,K,gamma_diag,gamma_offdiag,gamma_tilde,me_prediction\n";
    for (const auto& r : rows) {
        os << axis << ',' << fmt12(r.axis_value) << ',' << fmt12(r.t) << ','
           << fmt12(r.j) << ',' << fmt12(r.k) << ',' << fmt12(r.gamma_diag) << ','
           << fmt12(r.gamma_offdiag) << ',' << fmt12(r.gamma_tilde) << ','
           << fmt12(r.me_prediction) << '\n';
    }
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("empty CSV");
    if (trim(line) != "axis_name,axis_value,t,J,K,gamma_diag,gamma_offdiag,gamma_tilde,me_prediction")
        throw ConfigError("unexpected CSV header: " + line);
    std::vector<CsvRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9)
            throw ConfigError("CSV line " + std::to_string(lineno) + ": expected 9 fields");
        CsvRow r;
        r.axis = fields[0];
        r.row.axis_value = parse_double("axis_value", fields[1]);
        r.row.t = parse_double("t", fields[2]);
        r.row.j = parse_double("J", fields[3]);
        r.row.k = parse_double("K", fields[4]);
        r.row.gamma_diag = parse_double("gamma_diag", fields[5]);
        r.row.gamma_offdiag = parse_double("gamma_offdiag", fields[6]);
        r.row.gamma_tilde = fields[7] == "nan" || fields[7] == "-nan"
                                ? std::numeric_limits<double>::quiet_NaN()
                                : parse_double("gamma_tilde", fields[7]);
        r.row.me_prediction = parse_double("me_prediction", fields[8]);
        rows.push_back(r);
    }
    return rows;
}

} // namespace clsaddle
