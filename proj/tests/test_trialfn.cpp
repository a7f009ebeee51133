#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "gfk/errors.hpp"
#include "gfk/system.hpp"
#include "gfk/trialfn.hpp"

using namespace gfk;

namespace {

Walker make_walker(std::initializer_list<double> coords) {
    Walker w;
    w.coords = coords;
    return w;
}

double value_at(const TrialFunction& phi, const Walker& w) { return phi.evaluate(w).value; }

// One random walker kept away from nodes, coalescences and the r1 = r2
// cusp so that central differences are valid.
Walker safe_walker(const TrialFunction& phi, std::mt19937& gen) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Walker w;
        w.coords.resize(3 * static_cast<std::size_t>(phi.n_electrons()));
        for (auto& c : w.coords) c = u(gen);
        bool ok = true;
        for (int i = 0; i < phi.n_electrons(); ++i)
            if (nuclear_distance(w, i) < 0.3) ok = false;
        if (phi.n_electrons() == 2) {
            if (pair_distance(w, 0, 1) < 0.3) ok = false;
            if (std::abs(nuclear_distance(w, 0) - nuclear_distance(w, 1)) < 0.15) ok = false;
        }
        if (!ok) continue;
        TrialEval ev = phi.evaluate(w);
        double scale = std::abs(ev.value);
        // stay clear of nodes: FD steps must not cross a sign change
        if (scale < 1e-4) continue;
        return w;
    }
    FAIL("no safe walker found");
    return {};
}

void check_derivatives(const TrialFunction& phi, unsigned seed) {
    std::mt19937 gen(seed);
    // large enough that second-difference roundoff stays below the
    // truncation error
    const double h = 2e-4;
    for (int trial = 0; trial < 100; ++trial) {
        Walker w = safe_walker(phi, gen);
        TrialEval ev = phi.evaluate(w);
        double gscale = std::abs(ev.value);
        for (double g : ev.gradient) gscale = std::max(gscale, std::abs(g));

        double fd_lap = 0.0;
        for (std::size_t k = 0; k < w.coords.size(); ++k) {
            Walker wp = w, wm = w;
            wp.coords[k] += h;
            wm.coords[k] -= h;
            double fp = value_at(phi, wp);
            double fm = value_at(phi, wm);
            double fd_grad = (fp - fm) / (2 * h);
            REQUIRE(std::abs(fd_grad - ev.gradient[k]) <= 1e-6 * gscale);
            fd_lap += (fp - 2 * ev.value + fm) / (h * h);
        }
        double lscale = std::max(std::abs(ev.laplacian), gscale);
        REQUIRE(std::abs(fd_lap - ev.laplacian) <= 1e-5 * lscale);
    }
}

std::unique_ptr<PadeExp> synthetic_pade(int sym) {
    std::vector<PadeExp::Term> num = {{1, 0, 0, 0.5}, {0, 1, 0, 0.3}, {0, 0, 1, 0.25}};
    std::vector<PadeExp::Term> den = {{0, 0, 0, 1.0}, {0, 0, 1, 0.1}};
    return std::make_unique<PadeExp>(sym, num, den, 1.8, 1.1);
}

std::unique_ptr<GoldmanCI> goldman_gs() {
    return std::make_unique<GoldmanCI>(
        +1, std::vector<GoldmanCI::Term>{{77.457638, 1.216604, 1.920647, 0, 0},
                                         {-5.671781, 1.994090, 2.070513, 1, 1}});
}

std::unique_ptr<GoldmanCI> goldman_trip(double c1 = 6.2454731) {
    return std::make_unique<GoldmanCI>(
        -1, std::vector<GoldmanCI::Term>{{c1, 1.981402, 0.456199, 0, 0},
                                         {13.154490, 1.213401, 1.810023, 0, 0}});
}

} // namespace

TEST_CASE("analytic derivatives match finite differences") {
    SUBCASE("slater") { check_derivatives(SlaterProduct({0.8, 1.7}), 1); }
    SUBCASE("fn3") { check_derivatives(NodePolynomial(1.0, 1.0, 2.0), 2); }
    SUBCASE("fn4") { check_derivatives(NodePolynomial(1.0, 0.67180691, 2.00411836), 3); }
    SUBCASE("fn5") { check_derivatives(NodePolynomial(0.73351723, 0.636748, 2.002777), 4); }
    SUBCASE("goldman ground state") { check_derivatives(*goldman_gs(), 5); }
    SUBCASE("goldman triplet") { check_derivatives(*goldman_trip(), 6); }
    SUBCASE("pz product") { check_derivatives(PzProduct(0.5, 2.0), 7); }
    SUBCASE("pade symmetric") { check_derivatives(*synthetic_pade(+1), 8); }
    SUBCASE("pade antisymmetric") { check_derivatives(*synthetic_pade(-1), 9); }
}

TEST_CASE("direct evaluation examples") {
    NodePolynomial fn3(1.0, 1.0, 2.0);
    // electron 1 on the nucleus: (1-0)e^{0-2} - (1-1)e^{0} = e^{-2}
    Walker w = make_walker({0, 0, 0, 0, 0, 1});
    CHECK(value_at(fn3, w) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

    // equal radii: on the node
    Walker node = make_walker({1.3, 0, 0, 0, 1.3, 0});
    CHECK(value_at(fn3, node) == doctest::Approx(0.0).epsilon(1e-14));

    // pz: z1 = -z2 with r1 = r2
    PzProduct pz(0.7, 1.9);
    Walker pznode = make_walker({0.3, 0.4, 0.5, -0.3, 0.4, -0.5});
    CHECK(value_at(pz, pznode) == 0.0);
}

TEST_CASE("nodal surfaces") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> radius(0.2, 3.0);
    std::uniform_real_distribution<double> angle(0.0, 2 * 3.14159265358979323846);
    std::uniform_real_distribution<double> costh(-1.0, 1.0);

    auto on_sphere = [&](double r) {
        double z = costh(gen);
        double ph = angle(gen);
        double s = std::sqrt(1 - z * z);
        return std::array<double, 3>{r * s * std::cos(ph), r * s * std::sin(ph), r * z};
    };

    SUBCASE("NodePolynomial vanishes on r1 = r2") {
        for (auto* phi : {new NodePolynomial(1.0, 1.0, 2.0),
                          new NodePolynomial(0.73351723, 0.636748, 2.002777)}) {
            std::unique_ptr<NodePolynomial> owner(phi);
            for (int i = 0; i < 1000; ++i) {
                double r = radius(gen);
                auto e1 = on_sphere(r);
                auto e2 = on_sphere(r);
                Walker w = make_walker({e1[0], e1[1], e1[2], e2[0], e2[1], e2[2]});
                // local scale: values slightly off the surface
                Walker off = w;
                off.coords[0] *= 1.05;
                double scale = std::max(std::abs(value_at(*phi, off)), 1e-30);
                REQUIRE(std::abs(value_at(*phi, w)) <= 1e-14 * std::max(scale, 1.0));
            }
        }
    }

    SUBCASE("PzProduct vanishes on r1 cos(th1) = -r2 cos(th2)") {
        PzProduct pz(0.7, 1.9);
        for (int i = 0; i < 1000; ++i) {
            auto e1 = on_sphere(radius(gen));
            auto e2 = on_sphere(radius(gen));
            e2[2] = -e1[2]; // z2 = -z1
            Walker w = make_walker({e1[0], e1[1], e1[2], e2[0], e2[1], e2[2]});
            REQUIRE(value_at(pz, w) == 0.0);
        }
    }
}

TEST_CASE("exchange symmetry") {
    std::mt19937 gen(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto random_pair = [&] {
        Walker w;
        w.coords.resize(6);
        do {
            for (auto& c : w.coords) c = u(gen);
        } while (nuclear_distance(w, 0) < 0.1 || nuclear_distance(w, 1) < 0.1 ||
                 pair_distance(w, 0, 1) < 0.1 ||
                 std::abs(nuclear_distance(w, 0) - nuclear_distance(w, 1)) < 1e-3);
        return w;
    };
    auto swapped = [](const Walker& w) {
        Walker s = w;
        for (int j = 0; j < 3; ++j) std::swap(s.coords[j], s.coords[3 + j]);
        return s;
    };

    auto gs = goldman_gs();
    auto trip = goldman_trip();
    auto pade_s = synthetic_pade(+1);
    auto pade_a = synthetic_pade(-1);
    NodePolynomial fn3(1.0, 1.0, 2.0);
    PzProduct pz(0.7, 1.9);

    for (int i = 0; i < 200; ++i) {
        Walker w = random_pair();
        Walker s = swapped(w);
        CHECK(value_at(*gs, s) == value_at(*gs, w));
        CHECK(value_at(*pade_s, s) == value_at(*pade_s, w));
        CHECK(value_at(pz, s) == value_at(pz, w));
        CHECK(value_at(*trip, s) == -value_at(*trip, w));
        CHECK(value_at(*pade_a, s) == -value_at(*pade_a, w));
        CHECK(value_at(fn3, s) == -value_at(fn3, w));
    }
}

TEST_CASE("drift") {
    SUBCASE("slater drift is -alpha rhat") {
        SlaterProduct phi({2.0, 2.0});
        Walker w = make_walker({1, 0, 0, 0, 0, 2});
        auto d = drift(phi, w);
        CHECK(d[0] == doctest::Approx(-2.0).epsilon(1e-14));
        CHECK(d[1] == doctest::Approx(0.0));
        CHECK(d[2] == doctest::Approx(0.0));
        CHECK(d[5] == doctest::Approx(-2.0).epsilon(1e-14));
    }

    SUBCASE("scaling all coefficients by 2 leaves the drift bitwise unchanged") {
        auto a = goldman_trip(6.2454731);
        auto b = std::make_unique<GoldmanCI>(
            -1, std::vector<GoldmanCI::Term>{{2 * 6.2454731, 1.981402, 0.456199, 0, 0},
                                             {2 * 13.154490, 1.213401, 1.810023, 0, 0}});
        Walker w = make_walker({0.4, 0.1, 0.9, -1.2, 0.8, 0.3});
        auto da = drift(*a, w);
        auto db = drift(*b, w);
        for (std::size_t k = 0; k < da.size(); ++k) CHECK(da[k] == db[k]);
    }

    SUBCASE("drift diverges near the fn3 node") {
        NodePolynomial fn3(1.0, 1.0, 2.0);
        auto mag = [&](double r1) {
            Walker w = make_walker({r1, 0, 0, 0, 1.0, 0});
            auto d = drift(fn3, w);
            double m = 0;
            for (double c : d) m = std::max(m, std::abs(c));
            return m;
        };
        CHECK(mag(1.01) > mag(1.1));
        CHECK(mag(1.001) > mag(1.01));
    }

    SUBCASE("node error on the node") {
        NodePolynomial fn3(1.0, 1.0, 2.0);
        Walker node = make_walker({0, 1.0, 0, 1.0, 0, 0});
        CHECK_THROWS_AS(drift(fn3, node), NodeError);
    }
}

TEST_CASE("crossed_node") {
    NodePolynomial fn3(1.0, 1.0, 2.0);
    Walker below = make_walker({0.5, 0, 0, 0, 1.5, 0}); // r1 < r2
    Walker above = make_walker({1.5, 0, 0, 0, 0.5, 0}); // r1 > r2
    CHECK(crossed_node(fn3, below, above));
    CHECK(!crossed_node(fn3, below, below));

    auto gs = goldman_gs();
    std::mt19937 gen(29);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        Walker a, b;
        a.coords.resize(6);
        b.coords.resize(6);
        for (auto& c : a.coords) c = u(gen);
        for (auto& c : b.coords) c = u(gen);
        if (nuclear_distance(a, 0) < 1e-6 || nuclear_distance(a, 1) < 1e-6) continue;
        if (nuclear_distance(b, 0) < 1e-6 || nuclear_distance(b, 1) < 1e-6) continue;
        REQUIRE(!crossed_node(*gs, a, b)); // nodeless
    }
}

TEST_CASE("local energy") {
    SUBCASE("exact eigenfunctions") {
        AtomSpec h{1.0, 1, true};
        SlaterProduct phi1({1.0});
        for (double r : {0.3, 1.0, 2.7}) {
            Walker w = make_walker({0, 0, r});
            CHECK(local_energy(phi1, w, h) == doctest::Approx(-0.5).epsilon(1e-12));
        }
        AtomSpec he{2.0, 2, false};
        SlaterProduct phi2({2.0, 2.0});
        Walker w = make_walker({0.4, 0.3, -1.0, 1.2, -0.2, 0.5});
        CHECK(local_energy(phi2, w, he) == doctest::Approx(-4.0).epsilon(1e-12));
    }

    SUBCASE("hydrogen e^{-0.8r} at r = 1") {
        AtomSpec h{1.0, 1, true};
        SlaterProduct phi({0.8});
        Walker w = make_walker({1, 0, 0});
        CHECK(local_energy(phi, w, h) == doctest::Approx(-0.52).epsilon(1e-12));
    }
}

TEST_CASE("malformed trial definitions are rejected") {
    CHECK_THROWS_AS(SlaterProduct({}), ConfigError);
    CHECK_THROWS_AS(SlaterProduct({-1.0}), ConfigError);
    CHECK_THROWS_AS(NodePolynomial(1.0, 0.0, 2.0), ConfigError);
    CHECK_THROWS_AS(GoldmanCI(+1, {}), ConfigError);
    CHECK_THROWS_AS(GoldmanCI(2, {{1.0, 1.0, 1.0, 0, 0}}), ConfigError);
    CHECK_THROWS_AS(PzProduct(0.5, -2.0), ConfigError);
    CHECK_THROWS_AS(PadeExp(+1, {}, {{0, 0, 0, 1.0}}, 1.0, 1.0), ConfigError);
}
