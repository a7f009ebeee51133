#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gfk/rng.hpp"
#include "gfk/system.hpp"
#include "gfk/trialfn.hpp"

namespace gfk {

enum class WalkMode { FK, GFK };

struct PathConfig {
    int scale = 30;                       // step size 1/scale Bohr
    std::vector<double> checkpoint_times; // ascending, atomic units
    WalkMode mode = WalkMode::GFK;

    // n steps per unit time; matching the space step 1/sqrt(n) to 1/scale
    // forces n = scale^2.
    int steps_per_unit_time() const { return scale * scale; }
    // resample radius: a proposal with any r_i or r_ij below this is redrawn
    double singularity_radius() const { return 1.0 / (10.0 * scale); }

    void validate() const; // throws ConfigError
};

inline constexpr int kMaxResampleAttempts = 100;

// Generic dimension-d walk driver used for toy problems and enumeration
// oracles.  potential is accumulated at the post-step position; drift may
// be empty (pure FK); accept may be empty (no guards).  Returns
// exp(-sum/n) at every checkpoint.
struct WalkCallbacks {
    std::function<double(std::span<const double>)> potential;
    std::function<void(std::span<const double>, std::span<double>)> drift;
    std::function<bool(std::span<const double>, std::span<const double>)> accept;
};

std::vector<double> run_walk(std::span<const double> start, const PathConfig& cfg,
                             const WalkCallbacks& cb, RngState& rng);

// One replication of the physical system.  FK mode integrates the bare
// Coulomb V along a lattice walk; GFK mode integrates V_P along the
// drifted walk with singularity and node guards.  phi may be null in FK
// mode.  The starting walker (electron i uniform on a sphere of radius
// (i+1)/2, keeping multi-electron starts off r1 = r2 nodes) is drawn
// from the replication's own stream.
std::vector<double> run_replication(const TrialFunction* phi, double lambda0,
                                    const AtomSpec& atom, const PathConfig& cfg,
                                    RngState& rng);

// Starting walker used by run_replication, exposed for tests.
Walker draw_start(int n_electrons, RngState& rng);

} // namespace gfk
