// Command-line front end: reproducible sampling, spectra, densities, rates,
// and Monte Carlo experiment runs with self-describing JSON/CSV artifacts.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jacobi_spectra/jacobi_spectra.hpp"

namespace js = jacobi_spectra;
using nlohmann::json;

namespace {

constexpr std::uint64_t default_seed = 0x5EED000000000001ULL;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Options shared across subcommands. Values resolve in precedence order
// flag > config file > environment (seed only) > documented default.
struct Options {
    double beta = 2.0;
    std::vector<std::size_t> n{64, 256, 1024};
    double p1 = -1.0;  // < 0 means "not set"
    double p2 = -1.0;
    double gamma = -1.0;
    double sigma = -1.0;
    std::uint64_t seed = default_seed;
    int reps = 20;
    std::size_t K = 8;
    std::size_t grid = 1001;
    std::string law = "modified-wachter";
    std::string format = "json";
    std::string out;
    unsigned threads = 0;
    bool no_header = false;
    std::string coeffs;
    std::vector<double> poly{0.0, 1.0};
    bool rescaled = false;
    std::string method = "auto";
};

std::uint64_t parse_seed_string(const std::string& text) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 0);
    if (end == nullptr || *end != '\0')
        throw ConfigError("seed: cannot parse '" + text + "'");
    return static_cast<std::uint64_t>(v);
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::size_t>(std::stoull(item)));
    }
    if (out.empty()) throw ConfigError("n: empty grid");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw ConfigError("poly: empty coefficient list");
    return out;
}

// Fill options the command line left untouched from a JSON config object;
// flags win (file < flags).
void apply_config_file(const std::string& path, const CLI::App& cmd, Options& opt) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    auto unset = [&](const std::string& flag) {
        const CLI::Option* option = cmd.get_option_no_throw(flag);
        return option == nullptr || option->count() == 0;
    };
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "beta" && unset("--beta")) opt.beta = value.get<double>();
            else if (key == "n" && unset("--n")) {
                if (value.is_string()) opt.n = parse_size_list(value.get<std::string>());
                else opt.n = value.get<std::vector<std::size_t>>();
            }
            else if (key == "p1" && unset("--p1")) opt.p1 = value.get<double>();
            else if (key == "p2" && unset("--p2")) opt.p2 = value.get<double>();
            else if (key == "gamma" && unset("--gamma")) opt.gamma = value.get<double>();
            else if (key == "sigma" && unset("--sigma")) opt.sigma = value.get<double>();
            else if (key == "seed" && unset("--seed")) {
                if (value.is_string()) opt.seed = parse_seed_string(value.get<std::string>());
                else opt.seed = value.get<std::uint64_t>();
            }
            else if (key == "reps" && unset("--reps")) opt.reps = value.get<int>();
            else if (key == "K" && unset("--K")) opt.K = value.get<std::size_t>();
            else if (key == "grid" && unset("--grid")) opt.grid = value.get<std::size_t>();
            else if (key == "law" && unset("--law")) opt.law = value.get<std::string>();
            else if (key == "format" && unset("--format")) opt.format = value.get<std::string>();
            else if (key == "out" && unset("--out")) opt.out = value.get<std::string>();
            else if (key == "threads" && unset("--threads")) opt.threads = value.get<unsigned>();
            else if (key == "no_header" && unset("--no-header"))
                opt.no_header = value.get<bool>();
            else if (key == "coeffs" && unset("--coeffs")) opt.coeffs = value.get<std::string>();
            else if (key == "poly" && unset("--poly")) {
                if (value.is_string()) opt.poly = parse_double_list(value.get<std::string>());
                else opt.poly = value.get<std::vector<double>>();
            }
            else if (key == "rescaled" && unset("--rescaled"))
                opt.rescaled = value.get<bool>();
            else if (key == "method" && unset("--method")) opt.method = value.get<std::string>();
            else if (key == "beta" || key == "n" || key == "p1" || key == "p2" ||
                     key == "gamma" || key == "sigma" || key == "seed" || key == "reps" ||
                     key == "K" || key == "grid" || key == "law" || key == "format" ||
                     key == "out" || key == "threads" || key == "no_header" ||
                     key == "coeffs" || key == "poly" || key == "rescaled" ||
                     key == "method") {
                // Recognized key, flag takes precedence: nothing to do.
            } else {
                throw ConfigError("config: unknown field '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
}

void apply_env_seed(const CLI::App& cmd, bool config_had_seed, Options& opt) {
    const CLI::Option* option = cmd.get_option_no_throw("--seed");
    if (option != nullptr && option->count() > 0) return;
    if (config_had_seed) return;
    if (const char* env = std::getenv("JACOBI_SPECTRA_SEED")) opt.seed = parse_seed_string(env);
}

js::LimitParams limit_of(const Options& opt) {
    if (opt.gamma < 0.0) throw ConfigError("gamma: required for this command");
    if (opt.sigma < 0.0) throw ConfigError("sigma: required for this command");
    try {
        return js::make_limit_params(opt.gamma, opt.sigma);
    } catch (const std::exception& e) {
        throw ConfigError("gamma/sigma: " + std::string(e.what()));
    }
}

// Ensemble from explicit p1/p2 when given, otherwise from the proxy rule at
// the (gamma, sigma) limit point.
js::EnsembleParams ensemble_of(const Options& opt, std::size_t n) {
    try {
        if (opt.p1 >= 0.0 || opt.p2 >= 0.0) {
            if (opt.p1 < 0.0 || opt.p2 < 0.0)
                throw ConfigError("p1/p2: give both or neither");
            return js::make_ensemble_params(opt.beta, n, opt.p1, opt.p2);
        }
        return js::ensemble_for(limit_of(opt), n, opt.beta);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("ensemble parameters: " + std::string(e.what()));
    }
}

std::size_t single_n(const Options& opt) {
    if (opt.n.size() != 1)
        throw ConfigError("n: this command expects a single value, got a grid");
    return opt.n.front();
}

json resolved_config(const std::string& command, const Options& opt,
                     const std::vector<std::string>& fields) {
    json j;
    j["command"] = command;
    j["version"] = js::library_version;
    for (const std::string& f : fields) {
        if (f == "beta") j["beta"] = opt.beta;
        else if (f == "n") j["n"] = opt.n;
        else if (f == "p1" && opt.p1 >= 0.0) j["p1"] = opt.p1;
        else if (f == "p2" && opt.p2 >= 0.0) j["p2"] = opt.p2;
        else if (f == "gamma" && opt.gamma >= 0.0) j["gamma"] = opt.gamma;
        else if (f == "sigma" && opt.sigma >= 0.0) j["sigma"] = opt.sigma;
        else if (f == "seed") j["seed"] = opt.seed;
        else if (f == "reps") j["reps"] = opt.reps;
        else if (f == "K") j["K"] = opt.K;
        else if (f == "grid") j["grid"] = opt.grid;
        else if (f == "law") j["law"] = opt.law;
        else if (f == "format") j["format"] = opt.format;
        else if (f == "threads") j["threads"] = opt.threads;
        else if (f == "coeffs") j["coeffs"] = opt.coeffs;
        else if (f == "poly") j["poly"] = opt.poly;
        else if (f == "rescaled") j["rescaled"] = opt.rescaled;
        else if (f == "method") j["method"] = opt.method;
    }
    return j;
}

std::string timestamp_line() {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# generated: ") + buf;
}

// Artifact writer: JSON artifacts embed the config object; CSV artifacts
// carry "# config: ..." always and a timestamp line unless --no-header.
void write_artifact(const Options& opt, const json& config, const json& payload_json,
                    const std::vector<std::string>& payload_csv, const std::string& summary) {
    std::ostringstream body;
    if (opt.format == "json") {
        json root = payload_json;
        root["config"] = config;
        body << root.dump(2) << '\n';
    } else if (opt.format == "csv") {
        if (!opt.no_header) body << timestamp_line() << '\n';
        body << "# config: " << config.dump() << '\n';
        for (const std::string& row : payload_csv) body << row << '\n';
    } else {
        throw ConfigError("format: expected json or csv, got '" + opt.format + "'");
    }

    if (opt.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(opt.out, std::ios::trunc);
        if (!out) throw ConfigError("out: cannot open " + opt.out + " for writing");
        out << body.str();
    }
    std::cerr << summary << '\n';
}

std::vector<std::string> matrix_csv(const js::TridiagonalMatrix& m) {
    std::vector<std::string> rows{"index,diag,offdiag"};
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::string row = std::to_string(i + 1) + "," + js::format_double(m.diag[i]) + ",";
        if (i + 1 < m.size()) row += js::format_double(m.offdiag[i]);
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_sample(const Options& opt) {
    const js::EnsembleParams ep = ensemble_of(opt, single_n(opt));
    js::SeededStream stream(opt.seed, 0);
    const js::TridiagonalMatrix m = opt.rescaled ? js::sample_rescaled_tridiagonal(ep, stream)
                                                 : js::sample_tridiagonal(ep, stream);
    const json config = resolved_config(
        "sample", opt, {"beta", "n", "p1", "p2", "gamma", "sigma", "seed", "rescaled", "format"});
    json payload;
    payload["diag"] = m.diag;
    payload["offdiag"] = m.offdiag;
    write_artifact(opt, config, payload, matrix_csv(m),
                   "sample: n = " + std::to_string(ep.n) + ", beta = " +
                       js::format_double(ep.beta) + ", seed = " + std::to_string(opt.seed));
    return 0;
}

int run_eig(const Options& opt) {
    const js::EnsembleParams ep = ensemble_of(opt, single_n(opt));
    js::SeededStream stream(opt.seed, 0);
    const js::TridiagonalMatrix m = opt.rescaled ? js::sample_rescaled_tridiagonal(ep, stream)
                                                 : js::sample_tridiagonal(ep, stream);
    js::SpectralMeasure mu;
    try {
        mu = js::eigen_decompose(m);
    } catch (const js::EigenConvergenceError& e) {
        throw NumericalError("eigensolver failed at row " + std::to_string(e.index) +
                             " (seed " + std::to_string(opt.seed) + ", stream 0)");
    }
    const json config = resolved_config(
        "eig", opt, {"beta", "n", "p1", "p2", "gamma", "sigma", "seed", "rescaled", "format"});
    json payload;
    payload["atoms"] = mu.atoms;
    payload["weights"] = mu.weights;
    std::vector<std::string> rows{"index,eigenvalue,weight"};
    for (std::size_t i = 0; i < mu.size(); ++i)
        rows.push_back(std::to_string(i + 1) + "," + js::format_double(mu.atoms[i]) + "," +
                       js::format_double(mu.weights[i]));
    write_artifact(opt, config, payload, rows,
                   "eig: " + std::to_string(mu.size()) + " eigenvalues, seed = " +
                       std::to_string(opt.seed));
    return 0;
}

int run_moments(const Options& opt) {
    const js::EnsembleParams ep = ensemble_of(opt, single_n(opt));
    js::SeededStream stream(opt.seed, 0);
    const js::TridiagonalMatrix m = opt.rescaled ? js::sample_rescaled_tridiagonal(ep, stream)
                                                 : js::sample_tridiagonal(ep, stream);

    std::string method = opt.method;
    if (method == "auto") method = opt.K < ep.n ? "recurrence" : "eig";
    std::vector<double> moments;
    if (method == "recurrence") {
        moments = js::moments_by_recurrence(m, opt.K);
    } else if (method == "eig") {
        js::SpectralMeasure mu;
        try {
            mu = js::eigen_decompose(m);
        } catch (const js::EigenConvergenceError& e) {
            throw NumericalError("eigensolver failed at row " + std::to_string(e.index) +
                                 " (seed " + std::to_string(opt.seed) + ", stream 0)");
        }
        moments.assign(opt.K + 1, 0.0);
        for (std::size_t k = 0; k <= opt.K; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < mu.size(); ++i)
                acc += mu.weights[i] * std::pow(mu.atoms[i], double(k));
            moments[k] = acc;
        }
    } else {
        throw ConfigError("method: expected auto, recurrence, or eig, got '" + opt.method +
                          "'");
    }

    const json config =
        resolved_config("moments", opt, {"beta", "n", "p1", "p2", "gamma", "sigma", "seed",
                                         "K", "rescaled", "method", "format"});
    json payload;
    payload["moments"] = moments;
    payload["method"] = method;
    std::vector<std::string> rows{"k,moment"};
    for (std::size_t k = 0; k < moments.size(); ++k)
        rows.push_back(std::to_string(k) + "," + js::format_double(moments[k]));
    write_artifact(opt, config, payload, rows,
                   "moments: K = " + std::to_string(opt.K) + " via " + method);
    return 0;
}

int run_density(const Options& opt) {
    if (opt.grid < 2) throw ConfigError("grid: need at least 2 points");
    js::SupportInterval sup{0.0, 0.0};
    std::function<double(double)> dens;
    if (opt.law == "modified-wachter") {
        const js::LimitParams lp = limit_of(opt);
        sup = js::support_of_limit(lp);
        dens = [lp](double x) { return js::modified_wachter_density(x, lp); };
    } else if (opt.law == "wachter") {
        if (opt.gamma <= 0.0 || opt.sigma <= 0.0)
            throw ConfigError("law: wachter requires gamma > 0 and sigma > 0");
        sup = js::wachter_support(opt.gamma, opt.sigma);
        const double g = opt.gamma, s = opt.sigma;
        dens = [g, s](double x) { return js::wachter_density(x, g, s); };
    } else if (opt.law == "marchenko-pastur") {
        if (opt.gamma <= 0.0) throw ConfigError("law: marchenko-pastur requires gamma > 0");
        sup = js::marchenko_pastur_support(opt.gamma);
        const double g = opt.gamma;
        dens = [g](double x) { return js::marchenko_pastur_density(x, g); };
    } else {
        throw ConfigError("law: expected modified-wachter, wachter, or marchenko-pastur, got '" +
                          opt.law + "'");
    }

    const json config =
        resolved_config("density", opt, {"law", "gamma", "sigma", "grid", "format"});
    json points = json::array();
    std::vector<std::string> rows{"x,density"};
    for (std::size_t i = 0; i < opt.grid; ++i) {
        const double x =
            sup.lower + (sup.upper - sup.lower) * double(i) / double(opt.grid - 1);
        const double d = dens(x);
        points.push_back({x, d});
        rows.push_back(js::format_double(x) + "," + js::format_double(d));
    }
    json payload;
    payload["support"] = {sup.lower, sup.upper};
    payload["points"] = std::move(points);
    write_artifact(opt, config, payload, rows,
                   "density: " + opt.law + " on [" + js::format_double(sup.lower) + ", " +
                       js::format_double(sup.upper) + "], " + std::to_string(opt.grid) +
                       " points");
    return 0;
}

js::JacobiCoefficients load_coeffs_checked(const Options& opt) {
    if (opt.coeffs.empty()) throw ConfigError("coeffs: required for this command");
    try {
        return js::load_coefficients(opt.coeffs);
    } catch (const std::exception& e) {
        throw ConfigError("coeffs: " + std::string(e.what()));
    }
}

int run_rate(const Options& opt) {
    const js::JacobiCoefficients jc = load_coeffs_checked(opt);
    const js::LimitParams lp = limit_of(opt);
    std::size_t K = opt.K;
    const std::size_t available = std::min(jc.a.size(), jc.b.size());
    if (K == 0 || K > available) K = available;
    if (K == 0) throw ConfigError("coeffs: need at least one (a, b) pair");
    const js::RateValue rv = js::rate_of_spectral_measure(jc.a, jc.b, lp, K);

    Options adjusted = opt;
    adjusted.K = K;
    const json config =
        resolved_config("rate", adjusted, {"coeffs", "gamma", "sigma", "K", "format"});
    const json payload = js::rate_to_json(rv);
    std::vector<std::string> rows{"k,term"};
    for (std::size_t k = 0; k < rv.terms.size(); ++k)
        rows.push_back(std::to_string(k + 1) + "," + js::format_double(rv.terms[k]));
    rows.push_back("total," + js::format_double(rv.value));
    write_artifact(opt, config, payload, rows,
                   "rate: value = " + js::format_double(rv.value) + " at K = " +
                       std::to_string(K) +
                       (rv.failure_stage.empty() ? "" : " (" + rv.failure_stage + ")"));
    return 0;
}

int run_decompose(const Options& opt) {
    const js::JacobiCoefficients jc = load_coeffs_checked(opt);
    const js::LimitParams lp = limit_of(opt);
    js::ChainDecomposition dec;
    try {
        dec = js::decompose_coefficients(jc.a, jc.b, lp);
    } catch (const js::DecompositionError& e) {
        throw NumericalError(std::string("decomposition rejected: ") +
                             js::decomposition_stage_name(e.stage) + " at index " +
                             std::to_string(e.index));
    }
    const json config =
        resolved_config("decompose", opt, {"coeffs", "gamma", "sigma", "format"});
    const json payload = js::coefficients_to_json(dec, jc.a, jc.b);
    std::vector<std::string> rows{"k,z,p,u,v"};
    const std::size_t depth =
        std::max(std::max(dec.z.size(), dec.p.size()), std::max(dec.u.size(), dec.v.size()));
    for (std::size_t k = 0; k < depth; ++k) {
        std::string row = std::to_string(k + 1) + ",";
        row += (k < dec.z.size() ? js::format_double(dec.z[k]) : "") + ",";
        row += (k < dec.p.size() ? js::format_double(dec.p[k]) : "") + ",";
        row += (k < dec.u.size() ? js::format_double(dec.u[k]) : "") + ",";
        row += (k < dec.v.size() ? js::format_double(dec.v[k]) : "");
        rows.push_back(std::move(row));
    }
    write_artifact(opt, config, payload, rows,
                   "decompose: " + std::to_string(dec.u.size()) + " u-values, " +
                       std::to_string(dec.v.size()) + " v-values");
    return 0;
}

int run_experiment(const std::string& which, const Options& opt) {
    const js::LimitParams lp = limit_of(opt);
    js::ExperimentReport rep;
    try {
        if (which == "converge")
            rep = js::convergence_experiment(lp, opt.beta, opt.n, opt.reps, opt.seed,
                                             opt.threads);
        else if (which == "extremal")
            rep = js::extremal_eigenvalue_check(lp, opt.beta, opt.n, opt.reps, opt.seed,
                                                opt.threads);
        else
            rep = js::clt_experiment(lp, opt.beta, opt.n, opt.poly, opt.reps, opt.seed,
                                     opt.threads);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("experiment: ") + e.what());
    }

    // threads is execution environment, not experiment identity: results are
    // identical for any worker count, so it stays out of the embedded config.
    std::vector<std::string> fields{"beta", "n", "gamma", "sigma", "seed", "reps", "format"};
    if (which == "clt") fields.push_back("poly");
    const json config = resolved_config(which, opt, fields);

    int total_failures = 0;
    for (const js::MetricCell& cell : rep.cells) total_failures += cell.failures;
    write_artifact(opt, config, js::report_to_json(rep), js::report_to_csv_rows(rep),
                   which + ": " + std::to_string(rep.cells.size()) + " cells x " +
                       std::to_string(opt.reps) + " replicates, " +
                       std::to_string(total_failures) + " solver failures, seed = " +
                       std::to_string(opt.seed));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beta-Jacobi tridiagonal ensembles: sampling, spectra, limit laws, rates"};
    app.require_subcommand(1);

    Options opt;
    std::string config_path;
    std::string n_text;
    std::string poly_text;
    std::string seed_text;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--beta", opt.beta, "Dyson-type inverse temperature (default 2)");
        cmd->add_option("--n", n_text, "matrix size, or comma-separated grid for experiments");
        cmd->add_option("--p1", opt.p1, "first dimension parameter (>= n)");
        cmd->add_option("--p2", opt.p2, "second dimension parameter (>= n)");
        cmd->add_option("--gamma", opt.gamma, "limit of n/p1, in [0,1]");
        cmd->add_option("--sigma", opt.sigma, "limit of p1/p2, >= 0 with sigma*gamma <= 1");
        cmd->add_option("--seed", seed_text,
                        "master seed (decimal or 0x-hex); env JACOBI_SPECTRA_SEED as fallback");
        cmd->add_option("--reps", opt.reps, "replicates per grid cell (default 20)");
        cmd->add_option("--K", opt.K, "truncation depth / moment count (default 8)");
        cmd->add_option("--grid", opt.grid, "density grid size (default 1001)");
        cmd->add_option("--law", opt.law,
                        "density law: modified-wachter | wachter | marchenko-pastur");
        cmd->add_option("--format", opt.format, "output format: json | csv (default json)");
        cmd->add_option("--out", opt.out, "output file (stdout when omitted)");
        cmd->add_option("--threads", opt.threads,
                        "worker threads, 0 = machine parallelism (default 0)");
        cmd->add_flag("--no-header", opt.no_header, "suppress the CSV timestamp line");
        cmd->add_option("--coeffs", opt.coeffs, "JSON file with arrays \"a\" and \"b\"");
        cmd->add_option("--poly", poly_text,
                        "ascending polynomial coefficients, comma-separated (default 0,1)");
        cmd->add_flag("--rescaled", opt.rescaled,
                      "work with the centered/rescaled matrix instead of the raw one");
        cmd->add_option("--method", opt.method, "moments route: auto | recurrence | eig");
        cmd->add_option("--config", config_path, "JSON config file (flags take precedence)");
        return cmd;
    };

    CLI::App* c_sample = add_common(app.add_subcommand("sample", "draw one tridiagonal matrix"));
    CLI::App* c_eig = add_common(app.add_subcommand("eig", "eigenvalues and spectral weights"));
    CLI::App* c_moments =
        add_common(app.add_subcommand("moments", "spectral-measure moments of one draw"));
    CLI::App* c_density = add_common(app.add_subcommand("density", "closed-form limit density"));
    CLI::App* c_rate =
        add_common(app.add_subcommand("rate", "large-deviation rate of given coefficients"));
    CLI::App* c_decompose = add_common(
        app.add_subcommand("decompose", "z / chain / uv decomposition of given coefficients"));
    CLI::App* c_converge =
        add_common(app.add_subcommand("converge", "empirical-vs-limit convergence experiment"));
    CLI::App* c_extremal =
        add_common(app.add_subcommand("extremal", "extremal-eigenvalue experiment"));
    CLI::App* c_clt =
        add_common(app.add_subcommand("clt", "linear-statistic fluctuation experiment"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* active = nullptr;
    for (CLI::App* cmd : {c_sample, c_eig, c_moments, c_density, c_rate, c_decompose,
                          c_converge, c_extremal, c_clt})
        if (cmd->parsed()) active = cmd;

    try {
        if (active->count("--n") > 0) opt.n = parse_size_list(n_text);
        if (active->count("--poly") > 0) opt.poly = parse_double_list(poly_text);
        if (active->count("--seed") > 0) opt.seed = parse_seed_string(seed_text);

        bool config_had_seed = false;
        bool config_had_format = false;
        if (active->count("--config") > 0) {
            apply_config_file(config_path, *active, opt);
            std::ifstream probe(config_path);
            json j;
            probe >> j;
            config_had_seed = j.contains("seed");
            config_had_format = j.contains("format");
        }
        apply_env_seed(*active, config_had_seed, opt);

        // Grid-shaped artifacts default to CSV; structured records to JSON.
        if (active == c_density && active->count("--format") == 0 && !config_had_format)
            opt.format = "csv";

        if (active == c_sample) return run_sample(opt);
        if (active == c_eig) return run_eig(opt);
        if (active == c_moments) return run_moments(opt);
        if (active == c_density) return run_density(opt);
        if (active == c_rate) return run_rate(opt);
        if (active == c_decompose) return run_decompose(opt);
        if (active == c_converge) return run_experiment("converge", opt);
        if (active == c_extremal) return run_experiment("extremal", opt);
        return run_experiment("clt", opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const js::DecompositionError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const js::EigenConvergenceError& e) {
        std::cerr << "numerical failure: eigensolver did not converge (seed "
                  << opt.seed << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
}
