#include "gfk/system.hpp"

#include <cmath>

#include "gfk/errors.hpp"
#include "gfk/trialfn.hpp"

namespace gfk {

double nuclear_distance(const Walker& w, int i) {
    const double* e = w.electron(i);
    return std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
}

double pair_distance(const Walker& w, int i, int j) {
    const double* a = w.electron(i);
    const double* b = w.electron(j);
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double coulomb_potential(const Walker& w, const AtomSpec& atom) {
    const int n = w.n_electrons();
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = nuclear_distance(w, i);
        if (r == 0.0) throw SingularityError("electron on nucleus");
        v -= atom.charge / r;
    }
    if (atom.ee_interaction) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double r = pair_distance(w, i, j);
                if (r == 0.0) throw SingularityError("coincident electrons");
                v += 1.0 / r;
            }
        }
    }
    return v;
}

double perturbation_potential(const Walker& w, const TrialFunction& phi,
                              double lambda0, const AtomSpec& atom) {
    TrialEval ev = phi.evaluate(w);
    if (ev.value == 0.0) throw NodeError("trial function vanishes");
    return coulomb_potential(w, atom) - lambda0 - ev.laplacian / (2.0 * ev.value);
}

} // namespace gfk
