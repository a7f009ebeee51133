#include "gfk/trialfn.hpp"

#include <cmath>
#include <utility>

#include "gfk/errors.hpp"

namespace gfk {

void drift(const TrialFunction& phi, const Walker& w, std::vector<double>& out) {
    TrialEval ev = phi.evaluate(w);
    if (ev.value == 0.0) throw NodeError("drift undefined on a node");
    out.resize(ev.gradient.size());
    for (std::size_t k = 0; k < ev.gradient.size(); ++k)
        out[k] = ev.gradient[k] / ev.value;
}

std::vector<double> drift(const TrialFunction& phi, const Walker& w) {
    std::vector<double> d;
    drift(phi, w, d);
    return d;
}

bool crossed_node(const TrialFunction& phi, const Walker& before, const Walker& after) {
    double vb = phi.evaluate(before).value;
    double va = phi.evaluate(after).value;
    if (vb == 0.0) throw NodeError("crossed_node: starting point is on a node");
    return va == 0.0 || (vb > 0) != (va > 0);
}

double local_energy(const TrialFunction& phi, const Walker& w, const AtomSpec& atom) {
    TrialEval ev = phi.evaluate(w);
    if (ev.value == 0.0) throw NodeError("local energy undefined on a node");
    return -ev.laplacian / (2.0 * ev.value) + coulomb_potential(w, atom);
}

// ---------------------------------------------------------------------------
// Radial chain rule for two-electron functions f(r1, r2, r12).
//
//   grad_1 f = fu rhat1 + fw uhat,        uhat = (x1 - x2)/r12
//   grad_2 f = fv rhat2 - fw uhat
//   lap f    = fuu + fvv + 2 fww
//            + 2 fu/r1 + 2 fv/r2 + 4 fw/r12
//            + 2 fuw (rhat1 . uhat) - 2 fvw (rhat2 . uhat)
// ---------------------------------------------------------------------------

namespace {

struct Radial2 {
    double f = 0;
    double fu = 0, fv = 0, fw = 0;
    double fuu = 0, fvv = 0, fww = 0;
    double fuw = 0, fvw = 0;
    bool uses_r12 = false;
};

void assemble(const Walker& w, const Radial2& d, TrialEval& out) {
    const double* e1 = w.electron(0);
    const double* e2 = w.electron(1);
    double r1 = nuclear_distance(w, 0);
    double r2 = nuclear_distance(w, 1);

    out.value = d.f;
    double lap = d.fuu + d.fvv + 2.0 * d.fu / r1 + 2.0 * d.fv / r2;
    for (int j = 0; j < 3; ++j) {
        out.gradient[j] = d.fu * e1[j] / r1;
        out.gradient[3 + j] = d.fv * e2[j] / r2;
    }
    if (d.uses_r12) {
        double ux = e1[0] - e2[0], uy = e1[1] - e2[1], uz = e1[2] - e2[2];
        double r12 = std::sqrt(ux * ux + uy * uy + uz * uz);
        ux /= r12;
        uy /= r12;
        uz /= r12;
        double dot1 = (e1[0] * ux + e1[1] * uy + e1[2] * uz) / r1;
        double dot2 = (e2[0] * ux + e2[1] * uy + e2[2] * uz) / r2;
        out.gradient[0] += d.fw * ux;
        out.gradient[1] += d.fw * uy;
        out.gradient[2] += d.fw * uz;
        out.gradient[3] -= d.fw * ux;
        out.gradient[4] -= d.fw * uy;
        out.gradient[5] -= d.fw * uz;
        lap += 2.0 * d.fww + 4.0 * d.fw / r12 + 2.0 * d.fuw * dot1 - 2.0 * d.fvw * dot2;
    }
    out.laplacian = lap;
}

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// SlaterProduct
// ---------------------------------------------------------------------------

SlaterProduct::SlaterProduct(std::vector<double> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw ConfigError("slater: empty exponent list");
    for (double a : alphas_)
        if (a <= 0.0) throw ConfigError("slater: exponents must be positive");
}

void SlaterProduct::evaluate(const Walker& w, TrialEval& out) const {
    const int n = n_electrons();
    double expo = 0.0;
    for (int i = 0; i < n; ++i) expo -= alphas_[i] * nuclear_distance(w, i);
    double val = std::exp(expo);
    out.value = val;
    double lap = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = nuclear_distance(w, i);
        double a = alphas_[i];
        const double* e = w.electron(i);
        for (int j = 0; j < 3; ++j) out.gradient[3 * i + j] = -a * e[j] / r * val;
        lap += a * a - 2.0 * a / r;
    }
    out.laplacian = lap * val;
}

// ---------------------------------------------------------------------------
// NodePolynomial: (r0 - r1) e^{-a1 r1 - a2 r2} - (r0 - r2) e^{-a2 r1 - a1 r2}
// ---------------------------------------------------------------------------

NodePolynomial::NodePolynomial(double r0, double alpha1, double alpha2)
    : r0_(r0), a1_(alpha1), a2_(alpha2) {
    if (alpha1 <= 0.0 || alpha2 <= 0.0)
        throw ConfigError("nodepoly: exponential rates must be positive");
}

void NodePolynomial::evaluate(const Walker& w, TrialEval& out) const {
    double u = nuclear_distance(w, 0);
    double v = nuclear_distance(w, 1);
    double E1 = std::exp(-a1_ * u - a2_ * v);
    double E2 = std::exp(-a2_ * u - a1_ * v);
    double p1 = r0_ - u, p2 = r0_ - v;

    Radial2 d;
    d.f = p1 * E1 - p2 * E2;
    d.fu = (-1.0 - a1_ * p1) * E1 + a2_ * p2 * E2;
    d.fv = -a2_ * p1 * E1 - (-1.0 - a1_ * p2) * E2;
    d.fuu = (2.0 * a1_ + a1_ * a1_ * p1) * E1 - a2_ * a2_ * p2 * E2;
    d.fvv = a2_ * a2_ * p1 * E1 - (2.0 * a1_ + a1_ * a1_ * p2) * E2;
    assemble(w, d, out);
}

// ---------------------------------------------------------------------------
// PadeExp
// ---------------------------------------------------------------------------

PadeExp::PadeExp(int symmetry, std::vector<Term> numerator, std::vector<Term> denominator,
                 double alpha, double beta)
    : sym_(symmetry), num_(std::move(numerator)), den_(std::move(denominator)),
      alpha_(alpha), beta_(beta) {
    if (sym_ != 1 && sym_ != -1) throw ConfigError("pade: symmetry must be +1 or -1");
    if (num_.empty() || den_.empty()) throw ConfigError("pade: empty term list");
    if (alpha_ <= 0.0 || beta_ <= 0.0)
        throw ConfigError("pade: exponential rates must be positive");
}

namespace {

// f and partials with respect to the three slots, up to second order.
struct Slot3 {
    double f = 0;
    double f1 = 0, f2 = 0, f3 = 0;
    double f11 = 0, f22 = 0, f33 = 0;
    double f12 = 0, f13 = 0, f23 = 0;
};

Slot3 poly_eval(const std::vector<PadeExp::Term>& terms, double u, double v, double w) {
    Slot3 p;
    for (const auto& t : terms) {
        double pu = ipow(u, t.n), pv = ipow(v, t.l), pw = ipow(w, t.m);
        double du = t.n > 0 ? t.n * ipow(u, t.n - 1) : 0.0;
        double dv = t.l > 0 ? t.l * ipow(v, t.l - 1) : 0.0;
        double dw = t.m > 0 ? t.m * ipow(w, t.m - 1) : 0.0;
        double duu = t.n > 1 ? t.n * (t.n - 1) * ipow(u, t.n - 2) : 0.0;
        double dvv = t.l > 1 ? t.l * (t.l - 1) * ipow(v, t.l - 2) : 0.0;
        double dww = t.m > 1 ? t.m * (t.m - 1) * ipow(w, t.m - 2) : 0.0;
        double c = t.coeff;
        p.f += c * pu * pv * pw;
        p.f1 += c * du * pv * pw;
        p.f2 += c * pu * dv * pw;
        p.f3 += c * pu * pv * dw;
        p.f11 += c * duu * pv * pw;
        p.f22 += c * pu * dvv * pw;
        p.f33 += c * pu * pv * dww;
        p.f12 += c * du * dv * pw;
        p.f13 += c * du * pv * dw;
        p.f23 += c * pu * dv * dw;
    }
    return p;
}

} // namespace

void PadeExp::evaluate(const Walker& w, TrialEval& out) const {
    double u = nuclear_distance(w, 0);
    double v = nuclear_distance(w, 1);
    double r12 = pair_distance(w, 0, 1);

    auto factor = [&](double a, double b, double c) -> Slot3 {
        Slot3 P = poly_eval(num_, a, b, c);
        Slot3 Q = poly_eval(den_, a, b, c);
        if (Q.f == 0.0) throw NodeError("pade: denominator vanishes");
        Slot3 R;
        R.f = P.f / Q.f;
        R.f1 = (P.f1 - R.f * Q.f1) / Q.f;
        R.f2 = (P.f2 - R.f * Q.f2) / Q.f;
        R.f3 = (P.f3 - R.f * Q.f3) / Q.f;
        R.f11 = (P.f11 - 2.0 * R.f1 * Q.f1 - R.f * Q.f11) / Q.f;
        R.f22 = (P.f22 - 2.0 * R.f2 * Q.f2 - R.f * Q.f22) / Q.f;
        R.f33 = (P.f33 - 2.0 * R.f3 * Q.f3 - R.f * Q.f33) / Q.f;
        R.f12 = (P.f12 - R.f1 * Q.f2 - R.f2 * Q.f1 - R.f * Q.f12) / Q.f;
        R.f13 = (P.f13 - R.f1 * Q.f3 - R.f3 * Q.f1 - R.f * Q.f13) / Q.f;
        R.f23 = (P.f23 - R.f2 * Q.f3 - R.f3 * Q.f2 - R.f * Q.f23) / Q.f;
        // S = R - alpha a - beta b; F = exp(S)
        double S1 = R.f1 - alpha_, S2 = R.f2 - beta_, S3 = R.f3;
        Slot3 F;
        F.f = std::exp(R.f - alpha_ * a - beta_ * b);
        F.f1 = F.f * S1;
        F.f2 = F.f * S2;
        F.f3 = F.f * S3;
        F.f11 = F.f * (R.f11 + S1 * S1);
        F.f22 = F.f * (R.f22 + S2 * S2);
        F.f33 = F.f * (R.f33 + S3 * S3);
        F.f12 = F.f * (R.f12 + S1 * S2);
        F.f13 = F.f * (R.f13 + S1 * S3);
        F.f23 = F.f * (R.f23 + S2 * S3);
        return F;
    };

    Slot3 X = factor(u, v, r12);  // F(r1, r2, r12)
    Slot3 Y = factor(v, u, r12);  // F(r2, r1, r12), exchange image
    double s = static_cast<double>(sym_);

    Radial2 d;
    d.uses_r12 = true;
    d.f = X.f + s * Y.f;
    d.fu = X.f1 + s * Y.f2;
    d.fv = X.f2 + s * Y.f1;
    d.fw = X.f3 + s * Y.f3;
    d.fuu = X.f11 + s * Y.f22;
    d.fvv = X.f22 + s * Y.f11;
    d.fww = X.f33 + s * Y.f33;
    d.fuw = X.f13 + s * Y.f23;
    d.fvw = X.f23 + s * Y.f13;
    assemble(w, d, out);
}

// ---------------------------------------------------------------------------
// GoldmanCI
// ---------------------------------------------------------------------------

GoldmanCI::GoldmanCI(int symmetry, std::vector<Term> terms)
    : sym_(symmetry), terms_(std::move(terms)) {
    if (sym_ != 1 && sym_ != -1) throw ConfigError("goldman: symmetry must be +1 or -1");
    if (terms_.empty()) throw ConfigError("goldman: empty term list");
    for (const auto& t : terms_) {
        if (t.sigma < 0.0 || t.tau < 0.0 || t.sigma + t.tau <= 0.0)
            throw ConfigError("goldman: exponential rates must be positive");
        if (t.s < 0 || t.t < 0) throw ConfigError("goldman: negative power");
    }
}

void GoldmanCI::evaluate(const Walker& w, TrialEval& out) const {
    double r1 = nuclear_distance(w, 0);
    double r2 = nuclear_distance(w, 1);
    bool ordered = r1 <= r2; // electron 1 is the inner one (one-sided rule at r1 = r2)
    double p = ordered ? r1 : r2;
    double q = ordered ? r2 : r1;

    // f(p, q) and partials, p = r_<, q = r_>
    double f = 0, fp = 0, fq = 0, fpp = 0, fqq = 0;
    for (const auto& t : terms_) {
        double ep = std::exp(-t.sigma * p);
        double eq = std::exp(-t.tau * q);
        double u0 = ipow(p, t.s);
        double u1 = t.s > 0 ? t.s * ipow(p, t.s - 1) : 0.0;
        double u2 = t.s > 1 ? t.s * (t.s - 1) * ipow(p, t.s - 2) : 0.0;
        double v0 = ipow(q, t.t);
        double v1 = t.t > 0 ? t.t * ipow(q, t.t - 1) : 0.0;
        double v2 = t.t > 1 ? t.t * (t.t - 1) * ipow(q, t.t - 2) : 0.0;
        double a0 = u0 * ep;
        double a1 = (u1 - t.sigma * u0) * ep;
        double a2 = (u2 - 2.0 * t.sigma * u1 + t.sigma * t.sigma * u0) * ep;
        double b0 = v0 * eq;
        double b1 = (v1 - t.tau * v0) * eq;
        double b2 = (v2 - 2.0 * t.tau * v1 + t.tau * t.tau * v0) * eq;
        f += t.c * a0 * b0;
        fp += t.c * a1 * b0;
        fq += t.c * a0 * b1;
        fpp += t.c * a2 * b0;
        fqq += t.c * a0 * b2;
    }

    // Antisymmetric continuation flips sign on the r1 > r2 side of the cusp.
    double s = (sym_ == -1 && !ordered) ? -1.0 : 1.0;
    Radial2 d;
    d.f = s * f;
    if (ordered) {
        d.fu = s * fp;
        d.fv = s * fq;
        d.fuu = s * fpp;
        d.fvv = s * fqq;
    } else {
        d.fu = s * fq;
        d.fv = s * fp;
        d.fuu = s * fqq;
        d.fvv = s * fpp;
    }
    assemble(w, d, out);
}

// ---------------------------------------------------------------------------
// PzProduct: (z1 + z2)[e^{-a1 r1 - a2 r2} + e^{-a2 r1 - a1 r2}]
// ---------------------------------------------------------------------------

PzProduct::PzProduct(double alpha1, double alpha2) : a1_(alpha1), a2_(alpha2) {
    if (alpha1 <= 0.0 || alpha2 <= 0.0)
        throw ConfigError("pz: exponential rates must be positive");
}

void PzProduct::evaluate(const Walker& w, TrialEval& out) const {
    const double* e1 = w.electron(0);
    const double* e2 = w.electron(1);
    double r1 = nuclear_distance(w, 0);
    double r2 = nuclear_distance(w, 1);
    double E1 = std::exp(-a1_ * r1 - a2_ * r2);
    double E2 = std::exp(-a2_ * r1 - a1_ * r2);
    double g = E1 + E2;
    double gu = -a1_ * E1 - a2_ * E2;
    double gv = -a2_ * E1 - a1_ * E2;
    double guu = a1_ * a1_ * E1 + a2_ * a2_ * E2;
    double gvv = a2_ * a2_ * E1 + a1_ * a1_ * E2;
    double A = e1[2] + e2[2];

    out.value = A * g;
    for (int j = 0; j < 3; ++j) {
        out.gradient[j] = A * gu * e1[j] / r1;
        out.gradient[3 + j] = A * gv * e2[j] / r2;
    }
    out.gradient[2] += g;
    out.gradient[5] += g;
    out.laplacian = A * (guu + 2.0 * gu / r1) + 2.0 * gu * e1[2] / r1
                  + A * (gvv + 2.0 * gv / r2) + 2.0 * gv * e2[2] / r2;
}

} // namespace gfk
