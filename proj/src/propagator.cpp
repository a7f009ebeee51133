#include "gfk/propagator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gfk/errors.hpp"

namespace gfk {

void PathConfig::validate() const {
    if (scale < 1) throw ConfigError("scale must be a positive integer");
    if (checkpoint_times.empty()) throw ConfigError("checkpoint_times must be nonempty");
    double prev = 0.0;
    const double n = static_cast<double>(steps_per_unit_time());
    for (double t : checkpoint_times) {
        if (t <= prev) throw ConfigError("checkpoint_times must be ascending and positive");
        double steps = t * n;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw ConfigError("checkpoint time " + std::to_string(t) +
                              " is not an integer number of steps at scale " +
                              std::to_string(scale));
        prev = t;
    }
}

std::vector<double> run_walk(std::span<const double> start, const PathConfig& cfg,
                             const WalkCallbacks& cb, RngState& rng) {
    cfg.validate();
    const std::size_t d = start.size();
    const long n = cfg.steps_per_unit_time();
    const double step = 1.0 / cfg.scale; // = 1/sqrt(n)
    const bool lattice = !cb.drift;      // pure FK walks stay on the lattice

    std::vector<long> cksteps;
    cksteps.reserve(cfg.checkpoint_times.size());
    for (double t : cfg.checkpoint_times)
        cksteps.push_back(std::lround(t * static_cast<double>(n)));

    std::vector<double> pos(start.begin(), start.end());
    std::vector<long> offset(d, 0);
    std::vector<double> prop(d), dr(d);
    std::vector<long> prop_offset(d);

    std::vector<double> z;
    z.reserve(cksteps.size());
    double sum = 0.0;
    std::size_t next_ck = 0;

    for (long l = 1; l <= cksteps.back(); ++l) {
        if (!lattice) cb.drift(pos, dr);
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
            for (std::size_t k = 0; k < d; ++k) {
                int eps = bernoulli_step(rng);
                if (lattice) {
                    prop_offset[k] = offset[k] + eps;
                    prop[k] = start[k] + static_cast<double>(prop_offset[k]) / cfg.scale;
                } else {
                    prop[k] = pos[k] + dr[k] / static_cast<double>(n) + eps * step;
                }
            }
            if (cb.accept && !cb.accept(pos, prop)) continue;
            accepted = true;
            break;
        }
        if (!accepted)
            throw GuardExhaustedError("no acceptable step after " +
                                      std::to_string(kMaxResampleAttempts) + " proposals");
        pos.swap(prop);
        if (lattice) offset.swap(prop_offset);
        sum += cb.potential(pos);
        while (next_ck < cksteps.size() && l == cksteps[next_ck]) {
            z.push_back(std::exp(-sum / static_cast<double>(n)));
            ++next_ck;
        }
    }
    return z;
}

Walker draw_start(int n_electrons, RngState& rng) {
    Walker w;
    w.coords.resize(3 * static_cast<std::size_t>(n_electrons));
    for (int i = 0; i < n_electrons; ++i) {
        // staggered radii keep two-electron starts off the r1 = r2 nodal
        // surface; angles come from the replication's own stream
        double radius = 0.5 * (i + 1);
        double z = 2.0 * uniform01(rng) - 1.0;
        double phi = 2.0 * std::numbers::pi * uniform01(rng);
        double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        // snapped to a 2^-26 grid: with dyadic step sizes the FK lattice
        // arithmetic and the zero-drift GFK arithmetic then agree bitwise
        auto snap = [](double x) { return std::ldexp(std::round(std::ldexp(x, 26)), -26); };
        double* e = w.electron(i);
        e[0] = snap(radius * s * std::cos(phi));
        e[1] = snap(radius * s * std::sin(phi));
        e[2] = snap(radius * z);
    }
    return w;
}

namespace {

bool clear_of_singularities(const Walker& w, const AtomSpec& atom, double delta) {
    const int n = w.n_electrons();
    for (int i = 0; i < n; ++i)
        if (nuclear_distance(w, i) < delta) return false;
    if (atom.ee_interaction)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (pair_distance(w, i, j) < delta) return false;
    return true;
}

std::vector<double> run_fk(const AtomSpec& atom, const PathConfig& cfg, RngState& rng) {
    Walker start = draw_start(atom.n_electrons, rng);
    WalkCallbacks cb;
    double delta = cfg.singularity_radius();
    Walker scratch;
    scratch.coords.resize(start.coords.size());
    cb.potential = [&](std::span<const double> x) {
        scratch.coords.assign(x.begin(), x.end());
        return coulomb_potential(scratch, atom);
    };
    cb.accept = [&](std::span<const double>, std::span<const double> p) {
        scratch.coords.assign(p.begin(), p.end());
        return clear_of_singularities(scratch, atom, delta);
    };
    return run_walk(start.coords, cfg, cb, rng);
}

std::vector<double> run_gfk(const TrialFunction& phi, double lambda0, const AtomSpec& atom,
                            const PathConfig& cfg, RngState& rng) {
    const double n = static_cast<double>(cfg.steps_per_unit_time());
    const double step = 1.0 / cfg.scale;
    const double delta = cfg.singularity_radius();
    const std::size_t d = 3 * static_cast<std::size_t>(atom.n_electrons);

    std::vector<long> cksteps;
    for (double t : cfg.checkpoint_times) cksteps.push_back(std::lround(t * n));

    // starting walker off nodes and singularities
    Walker cur;
    TrialEval cur_ev;
    cur_ev.gradient.resize(d);
    bool placed = false;
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        cur = draw_start(atom.n_electrons, rng);
        if (!clear_of_singularities(cur, atom, delta)) continue;
        phi.evaluate(cur, cur_ev);
        if (cur_ev.value != 0.0 && std::isfinite(cur_ev.value)) {
            placed = true;
            break;
        }
    }
    if (!placed) throw GuardExhaustedError("could not place a valid starting walker");

    Walker prop;
    prop.coords.resize(d);
    TrialEval prop_ev;
    prop_ev.gradient.resize(d);

    std::vector<double> z;
    z.reserve(cksteps.size());
    double sum = 0.0;
    std::size_t next_ck = 0;
    const bool positive = cur_ev.value > 0.0;

    for (long l = 1; l <= cksteps.back(); ++l) {
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
            for (std::size_t k = 0; k < d; ++k) {
                int eps = bernoulli_step(rng);
                prop.coords[k] = cur.coords[k] +
                                 (cur_ev.gradient[k] / cur_ev.value) / n + eps * step;
            }
            if (!clear_of_singularities(prop, atom, delta)) continue;
            phi.evaluate(prop, prop_ev);
            if (prop_ev.value == 0.0 || (prop_ev.value > 0.0) != positive) continue; // node guard
            accepted = true;
            break;
        }
        if (!accepted)
            throw GuardExhaustedError("no acceptable step after " +
                                      std::to_string(kMaxResampleAttempts) + " proposals");
        cur.coords.swap(prop.coords);
        std::swap(cur_ev, prop_ev);
        sum += coulomb_potential(cur, atom) - lambda0 - cur_ev.laplacian / (2.0 * cur_ev.value);
        while (next_ck < cksteps.size() && l == cksteps[next_ck]) {
            z.push_back(std::exp(-sum / n));
            ++next_ck;
        }
    }
    return z;
}

} // namespace

std::vector<double> run_replication(const TrialFunction* phi, double lambda0,
                                    const AtomSpec& atom, const PathConfig& cfg,
                                    RngState& rng) {
    cfg.validate();
    if (cfg.mode == WalkMode::FK) return run_fk(atom, cfg, rng);
    if (!phi) throw ConfigError("GFK mode requires a trial function");
    return run_gfk(*phi, lambda0, atom, cfg, rng);
}

} // namespace gfk
