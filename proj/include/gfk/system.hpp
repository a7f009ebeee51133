#pragma once

#include <cstddef>
#include <vector>

namespace gfk {

// A point in 3N-dimensional configuration space; coords are (x,y,z) triples
// per electron, in Bohr, nucleus fixed at the origin.
struct Walker {
    std::vector<double> coords;

    int n_electrons() const { return static_cast<int>(coords.size() / 3); }
    const double* electron(int i) const { return coords.data() + 3 * i; }
    double* electron(int i) { return coords.data() + 3 * i; }
};

struct AtomSpec {
    double charge = 2.0;     // Z, atomic units
    int n_electrons = 2;     // N
    bool ee_interaction = true;
};

class TrialFunction; // trialfn.hpp

// Distance of electron i from the nucleus.
double nuclear_distance(const Walker& w, int i);
// Distance between electrons i and j.
double pair_distance(const Walker& w, int i, int j);

// V(x) = sum_i -Z/r_i + sum_{i<j} 1/r_ij (pair term dropped when
// ee_interaction is off).  Throws SingularityError at exact coalescence.
double coulomb_potential(const Walker& w, const AtomSpec& atom);

// V_P = V - lambda0 - laplacian(phi)/(2 phi); identically zero when phi is
// an exact eigenfunction with eigenvalue lambda0.
double perturbation_potential(const Walker& w, const TrialFunction& phi,
                              double lambda0, const AtomSpec& atom);

} // namespace gfk
