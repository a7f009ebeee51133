#include "gfk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gfk/errors.hpp"

namespace gfk {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long d = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

} // namespace

void RunConfig::validate() const {
    if (atom.charge <= 0.0) throw ConfigError("atom.charge: must be positive");
    if (atom.n_electrons < 1) throw ConfigError("atom.electrons: must be at least 1");
    if (trial_name.empty() && mode == WalkMode::GFK)
        throw ConfigError("trial: required in GFK mode");
    if (scale < 1) throw ConfigError("scale: must be a positive integer");
    if (n_paths < 2) throw ConfigError("paths: need at least 2 replications");
    if (checkpoint_times.empty()) throw ConfigError("checkpoints: must be nonempty");
    for (std::size_t i = 1; i < checkpoint_times.size(); ++i)
        if (checkpoint_times[i] <= checkpoint_times[i - 1])
            throw ConfigError("checkpoints: must be strictly ascending");
    if (checkpoint_times.front() <= 0.0) throw ConfigError("checkpoints: must be positive");
    if (workers < 0) throw ConfigError("workers: must be >= 0");
    PathConfig pc{scale, checkpoint_times, mode};
    pc.validate();
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");

        if (key == "mode") {
            if (val == "fk") cfg.mode = WalkMode::FK;
            else if (val == "gfk") cfg.mode = WalkMode::GFK;
            else throw ConfigError("mode: expected fk or gfk, got '" + val + "'");
        } else if (key == "atom.charge") cfg.atom.charge = parse_double(key, val);
        else if (key == "atom.electrons") cfg.atom.n_electrons = static_cast<int>(parse_int(key, val));
        else if (key == "atom.ee") cfg.atom.ee_interaction = parse_bool(key, val);
        else if (key == "trial") cfg.trial_name = val;
        else if (key.rfind("trial.", 0) == 0) cfg.trial_params[key.substr(6)] = val;
        else if (key == "lambda0") cfg.lambda0 = parse_double(key, val);
        else if (key == "scale") cfg.scale = static_cast<int>(parse_int(key, val));
        else if (key == "checkpoints") cfg.checkpoint_times = parse_list(key, val);
        else if (key == "paths") {
            long long n = parse_int(key, val);
            if (n < 0) throw ConfigError("paths: must be nonnegative, got '" + val + "'");
            cfg.n_paths = static_cast<std::uint64_t>(n);
        }
        else if (key == "seed") cfg.master_seed = static_cast<std::uint32_t>(parse_int(key, val));
        else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, val));
        else if (key == "fit") {
            if (val == "linear") cfg.fit = FitSelection::Linear;
            else if (val == "nonlinear") cfg.fit = FitSelection::Nonlinear;
            else if (val == "both") cfg.fit = FitSelection::Both;
            else throw ConfigError("fit: expected linear, nonlinear or both");
        } else if (key == "fit.weighted") cfg.weighted_fit = parse_bool(key, val);
        else if (key == "output") cfg.output_dir = val;
        else throw ConfigError("unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

namespace {

double trial_param(const RunConfig& cfg, const std::string& key) {
    auto it = cfg.trial_params.find(key);
    if (it == cfg.trial_params.end())
        throw ConfigError("trial." + key + ": required by trial function '" + cfg.trial_name + "'");
    return parse_double("trial." + key, it->second);
}

double trial_param(const RunConfig& cfg, const std::string& key, double fallback) {
    auto it = cfg.trial_params.find(key);
    return it == cfg.trial_params.end() ? fallback : parse_double("trial." + key, it->second);
}

// "c,sigma,tau,s,t ; c,sigma,tau,s,t ; ..."
std::vector<GoldmanCI::Term> parse_goldman_terms(const std::string& spec) {
    std::vector<GoldmanCI::Term> terms;
    std::stringstream ss(spec);
    std::string group;
    while (std::getline(ss, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        auto vals = parse_list("trial.goldman", group);
        if (vals.size() != 5)
            throw ConfigError("trial.goldman: each term needs 5 values (c,sigma,tau,s,t)");
        terms.push_back({vals[0], vals[1], vals[2], static_cast<int>(vals[3]),
                         static_cast<int>(vals[4])});
    }
    return terms;
}

// "n,l,m,coeff ; ..."
std::vector<PadeExp::Term> parse_pade_terms(const std::string& key, const std::string& spec) {
    std::vector<PadeExp::Term> terms;
    std::stringstream ss(spec);
    std::string group;
    while (std::getline(ss, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        auto vals = parse_list(key, group);
        if (vals.size() != 4)
            throw ConfigError(key + ": each term needs 4 values (n,l,m,coeff)");
        terms.push_back({static_cast<int>(vals[0]), static_cast<int>(vals[1]),
                         static_cast<int>(vals[2]), vals[3]});
    }
    return terms;
}

} // namespace

std::unique_ptr<TrialFunction> make_trial_function(const RunConfig& cfg) {
    const std::string& name = cfg.trial_name;

    // shipped parameter sets
    if (name == "fn3") return std::make_unique<NodePolynomial>(1.0, 1.0, 2.0);
    if (name == "fn4") return std::make_unique<NodePolynomial>(1.0, 0.67180691, 2.00411836);
    if (name == "fn5") return std::make_unique<NodePolynomial>(0.73351723, 0.636748, 2.002777);
    if (name == "goldman-gs") {
        std::vector<GoldmanCI::Term> terms = {
            {77.457638, 1.216604, 1.920647, 0, 0},
            {-5.671781, 1.994090, 2.070513, 1, 1},
        };
        return std::make_unique<GoldmanCI>(+1, terms);
    }
    if (name == "goldman-trip") {
        // c1 is ambiguous in the source (printed without a decimal point);
        // it must be supplied explicitly as trial.c1
        std::vector<GoldmanCI::Term> terms = {
            {trial_param(cfg, "c1"), 1.981402, 0.456199, 0, 0},
            {trial_param(cfg, "c2", 13.154490), 1.213401, 1.810023, 0, 0},
        };
        return std::make_unique<GoldmanCI>(-1, terms);
    }

    // explicit families
    if (name == "nodepoly")
        return std::make_unique<NodePolynomial>(trial_param(cfg, "r0"),
                                                trial_param(cfg, "alpha1"),
                                                trial_param(cfg, "alpha2"));
    if (name == "pz")
        return std::make_unique<PzProduct>(trial_param(cfg, "alpha1"),
                                           trial_param(cfg, "alpha2"));
    if (name == "slater") {
        auto it = cfg.trial_params.find("alphas");
        if (it == cfg.trial_params.end()) throw ConfigError("trial.alphas: required for slater");
        return std::make_unique<SlaterProduct>(parse_list("trial.alphas", it->second));
    }
    if (name == "goldman") {
        auto it = cfg.trial_params.find("terms");
        if (it == cfg.trial_params.end()) throw ConfigError("trial.terms: required for goldman");
        int sym = static_cast<int>(trial_param(cfg, "symmetry", 1.0));
        return std::make_unique<GoldmanCI>(sym, parse_goldman_terms(it->second));
    }
    if (name == "pade") {
        auto num = cfg.trial_params.find("num");
        auto den = cfg.trial_params.find("den");
        if (num == cfg.trial_params.end() || den == cfg.trial_params.end())
            throw ConfigError("trial.num / trial.den: required for pade");
        int sym = static_cast<int>(trial_param(cfg, "symmetry", 1.0));
        return std::make_unique<PadeExp>(sym, parse_pade_terms("trial.num", num->second),
                                         parse_pade_terms("trial.den", den->second),
                                         trial_param(cfg, "alpha"), trial_param(cfg, "beta"));
    }
    throw ConfigError("trial: unknown trial function '" + name + "'");
}

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    std::unique_ptr<TrialFunction> phi;
    if (cfg.mode == WalkMode::GFK) {
        phi = make_trial_function(cfg);
        if (phi->n_electrons() != cfg.atom.n_electrons)
            throw ConfigError("trial: function is for " + std::to_string(phi->n_electrons()) +
                              " electrons, atom has " + std::to_string(cfg.atom.n_electrons));
    }

    PathConfig pc{cfg.scale, cfg.checkpoint_times, cfg.mode};
    const std::size_t nc = cfg.checkpoint_times.size();
    const std::uint64_t n_rep = cfg.n_paths;

    // index-addressed buffer: worker scheduling cannot change the result
    std::vector<double> z(n_rep * nc);

    unsigned int nw = cfg.workers > 0 ? static_cast<unsigned int>(cfg.workers)
                                      : std::max(1u, std::thread::hardware_concurrency());
    nw = static_cast<unsigned int>(std::min<std::uint64_t>(nw, n_rep));

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nw);
    std::uint64_t chunk = (n_rep + nw - 1) / nw;
    for (unsigned int wi = 0; wi < nw; ++wi) {
        std::uint64_t lo = wi * chunk;
        std::uint64_t hi = std::min(n_rep, lo + chunk);
        pool.emplace_back([&, wi, lo, hi] {
            try {
                for (std::uint64_t k = lo; k < hi; ++k) {
                    RngState rng = substream(cfg.master_seed, k);
                    auto row = run_replication(phi.get(), cfg.lambda0, cfg.atom, pc, rng);
                    std::copy(row.begin(), row.end(), z.begin() + k * nc);
                }
            } catch (...) {
                errors[wi] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunResult res;
    res.stats = aggregate(z, n_rep, cfg.checkpoint_times);
    if (cfg.fit == FitSelection::Nonlinear || cfg.fit == FitSelection::Both) {
        try {
            res.nonlinear = fit_nonlinear(res.stats, cfg.lambda0, cfg.weighted_fit);
        } catch (const FitError&) {
            // with both fits requested the linear result still stands
            if (cfg.fit == FitSelection::Nonlinear) throw;
        }
    }
    if (cfg.fit == FitSelection::Linear || cfg.fit == FitSelection::Both)
        res.linear = fit_linear(res.stats, cfg.lambda0, cfg.weighted_fit);
    return res;
}

std::string format_with_error(double value, double error, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << value;
    double unit = std::pow(10.0, -decimals);
    long long digits = std::llround(std::max(error / unit, 1.0));
    os << "(" << digits << ")";
    return os.str();
}

void emit_table(std::ostream& out, const std::vector<CheckpointStat>& stats,
                const std::vector<const FitResult*>& fits, double lambda0) {
    if (stats.empty()) throw ConfigError("emit_table: no checkpoint statistics");
    out << "t\tzt\tln(zt)\tln(zt)/t\tsigma\tln(zt)/t (ls fit)\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& s : stats) {
        out << std::setprecision(0) << s.t << std::setprecision(6) << "\t" << s.z_mean << "\t"
            << s.ln_z << "\t" << s.ln_z_over_t << "\t" << s.sigma << "\t" << s.ls_fit << "\n";
    }
    out << std::setprecision(7);
    out << "lambda0 = " << lambda0;
    for (const FitResult* f : fits) {
        if (!f) continue;
        out << "  lambda1 = " << format_with_error(f->lambda1, f->extrapolation_error)
            << (f->model == FitModel::Linear ? " [lin fit]" : " [nlin fit]");
    }
    out << "\n";
}

void emit_plot_data(std::ostream& out, const std::vector<CheckpointStat>& s,
                    const FitResult* fit) {
    if (s.empty()) throw ConfigError("emit_plot_data: no checkpoint statistics");
    out << "# t  ln(zt)/t  sigma  fit\n";
    out << std::scientific << std::setprecision(9);
    for (const auto& row : s) {
        double fitted = fit ? fit->fitted_ln_z_over_t(row.t) : row.ls_fit;
        out << row.t << "  " << row.ln_z_over_t << "  " << row.sigma << "  " << fitted << "\n";
    }
}

namespace {

nlohmann::json fit_to_json(const FitResult& f) {
    nlohmann::json j;
    j["model"] = f.model == FitModel::Linear ? "linear" : "nonlinear";
    j["lambda1"] = f.lambda1;
    j["extrapolation_error"] = f.extrapolation_error;
    j["A"] = f.A;
    j["B"] = f.B;
    if (f.model == FitModel::Nonlinear) {
        j["C"] = f.C;
        j["D"] = f.D;
    }
    j["monotone_fit"] = f.monotone_fit;
    return j;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["engine_version"] = kEngineVersion;
    j["atom"] = {{"charge", cfg.atom.charge},
                 {"electrons", cfg.atom.n_electrons},
                 {"ee", cfg.atom.ee_interaction}};
    j["trial"] = cfg.trial_name;
    j["trial_params"] = cfg.trial_params;
    j["lambda0"] = cfg.lambda0;
    j["mode"] = cfg.mode == WalkMode::FK ? "fk" : "gfk";
    j["scale"] = cfg.scale;
    j["checkpoints"] = cfg.checkpoint_times;
    j["paths"] = cfg.n_paths;
    j["seed"] = cfg.master_seed;
    j["fit"] = cfg.fit == FitSelection::Linear ? "linear"
             : cfg.fit == FitSelection::Nonlinear ? "nonlinear" : "both";
    j["fit_weighted"] = cfg.weighted_fit;
    return j;
}

} // namespace

void emit_fit_summary(std::ostream& out, const RunResult& res, const RunConfig& cfg) {
    nlohmann::json j;
    j["lambda0"] = cfg.lambda0;
    if (res.linear) j["linear"] = fit_to_json(*res.linear);
    if (res.nonlinear) j["nonlinear"] = fit_to_json(*res.nonlinear);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : res.stats)
        rows.push_back({{"t", s.t}, {"zt", s.z_mean}, {"ln_zt", s.ln_z},
                        {"ln_zt_over_t", s.ln_z_over_t}, {"sigma", s.sigma},
                        {"ls_fit", s.ls_fit}});
    j["checkpoints"] = rows;
    j["config"] = config_to_json(cfg);
    out << j.dump(2) << "\n";
}

void emit_manifest(std::ostream& out, const RunConfig& cfg) {
    out << config_to_json(cfg).dump(2) << "\n";
}

RunResult run_to_files(const RunConfig& cfg) {
    RunResult res = run(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    auto open = [&](const char* name) {
        std::ofstream f(fs::path(cfg.output_dir) / name, std::ios::binary);
        if (!f) throw std::runtime_error(std::string("cannot write ") + name);
        return f;
    };
    {
        auto f = open("table.txt");
        std::vector<const FitResult*> fits;
        if (res.linear) fits.push_back(&*res.linear);
        if (res.nonlinear) fits.push_back(&*res.nonlinear);
        emit_table(f, res.stats, fits, cfg.lambda0);
    }
    {
        auto f = open("plot.dat");
        emit_plot_data(f, res.stats, res.linear ? &*res.linear
                                                : (res.nonlinear ? &*res.nonlinear : nullptr));
    }
    {
        auto f = open("fit.txt");
        emit_fit_summary(f, res, cfg);
    }
    {
        auto f = open("manifest.json");
        emit_manifest(f, cfg);
    }
    return res;
}

} // namespace gfk
