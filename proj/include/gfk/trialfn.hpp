#pragma once

#include <memory>
#include <vector>

#include "gfk/system.hpp"

namespace gfk {

// Value, Cartesian gradient and Laplacian of a trial function at a walker.
struct TrialEval {
    double value = 0.0;
    std::vector<double> gradient; // 3N entries, d phi / d x_k
    double laplacian = 0.0;
};

// Immutable trial function with hand-derived analytic derivatives.  All
// derivatives are exact in Cartesian coordinates; finite differences are
// used only as test oracles.
class TrialFunction {
public:
    virtual ~TrialFunction() = default;

    virtual int n_electrons() const = 0;

    virtual void evaluate(const Walker& w, TrialEval& out) const = 0;

    TrialEval evaluate(const Walker& w) const {
        TrialEval ev;
        ev.gradient.resize(3 * static_cast<std::size_t>(n_electrons()));
        evaluate(w, ev);
        return ev;
    }
};

// gradient/value, componentwise.  Throws NodeError when phi(w) = 0.
void drift(const TrialFunction& phi, const Walker& w, std::vector<double>& out);
std::vector<double> drift(const TrialFunction& phi, const Walker& w);

// True iff the sign of phi flips between the two walkers (or phi vanishes
// at the second one).
bool crossed_node(const TrialFunction& phi, const Walker& before, const Walker& after);

// E_L = -laplacian/(2 value) + V; equals lambda0 everywhere for an exact
// eigenfunction.
double local_energy(const TrialFunction& phi, const Walker& w, const AtomSpec& atom);

// Product of single-electron exponentials exp(-sum_i alpha_i r_i); exact
// eigenfunction for hydrogen-like and independent-electron problems.
class SlaterProduct final : public TrialFunction {
public:
    explicit SlaterProduct(std::vector<double> alphas);
    int n_electrons() const override { return static_cast<int>(alphas_.size()); }
    void evaluate(const Walker& w, TrialEval& out) const override;
    using TrialFunction::evaluate;

private:
    std::vector<double> alphas_;
};

// (r0 - r1) e^{-a1 r1 - a2 r2} - (r0 - r2) e^{-a2 r1 - a1 r2};
// antisymmetric, node exactly on r1 = r2.  Families fn3/fn4/fn5.
class NodePolynomial final : public TrialFunction {
public:
    NodePolynomial(double r0, double alpha1, double alpha2);
    int n_electrons() const override { return 2; }
    void evaluate(const Walker& w, TrialEval& out) const override;
    using TrialFunction::evaluate;

    double r0() const { return r0_; }

private:
    double r0_, a1_, a2_;
};

// Exponentiated Pade: (1 + sym P12) exp(P/Q - alpha r1 - beta r2) with
// P, Q polynomials in (r1, r2, r12).  Coefficients are user-supplied.
class PadeExp final : public TrialFunction {
public:
    struct Term {
        int n = 0, l = 0, m = 0; // powers of r1, r2, r12
        double coeff = 0.0;
    };

    PadeExp(int symmetry, std::vector<Term> numerator, std::vector<Term> denominator,
            double alpha, double beta);
    int n_electrons() const override { return 2; }
    void evaluate(const Walker& w, TrialEval& out) const override;
    using TrialFunction::evaluate;

private:
    int sym_;
    std::vector<Term> num_, den_;
    double alpha_, beta_;
};

// Goldman CI basis in (r_<, r_>): f = sum_i c_i r_<^{s_i} r_>^{t_i}
// e^{-sigma_i r_< - tau_i r_>}.  symmetry=+1 gives the symmetric S state,
// symmetry=-1 the antisymmetric continuation sign(r2 - r1) f with its node
// on r1 = r2.  Derivatives on the cusp r1 = r2 take the one-sided limit
// from r1 < r2.
class GoldmanCI final : public TrialFunction {
public:
    struct Term {
        double c = 0.0, sigma = 0.0, tau = 0.0;
        int s = 0, t = 0;
    };

    GoldmanCI(int symmetry, std::vector<Term> terms);
    int n_electrons() const override { return 2; }
    void evaluate(const Walker& w, TrialEval& out) const override;
    using TrialFunction::evaluate;

private:
    int sym_;
    std::vector<Term> terms_;
};

// (z1 + z2)[e^{-a1 r1 - a2 r2} + e^{-a2 r1 - a1 r2}]; vanishes on the
// P_z nodal surface z1 = -z2.
class PzProduct final : public TrialFunction {
public:
    PzProduct(double alpha1, double alpha2);
    int n_electrons() const override { return 2; }
    void evaluate(const Walker& w, TrialEval& out) const override;
    using TrialFunction::evaluate;

private:
    double a1_, a2_;
};

} // namespace gfk
