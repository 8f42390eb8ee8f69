#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bpsrh/rh_solver.hpp"

using namespace bpsrh;

namespace {

struct A1Fixture {
    Complex z{1.0, 1.0};
    Complex theta{0.4, 1.3};
    BpsStructure s = doubled_a1(z);
    TorusPoint xi{{theta, Complex{0.1, 0.7}}};
    LatticeClass beta{0, 1};   // alpha^vee
    double ell = std::arg(z);

    RhEvaluation ccw(double off = 0.3) const {
        return make_rh_evaluation(s, xi, beta, Ray::from_angle(ell + off));
    }
    RhEvaluation cw(double off = 0.3) const {
        return make_rh_evaluation(s, xi, beta, Ray::from_angle(ell - off));
    }
};

BpsStructure rank2_doubled(Complex z1, Complex z2, int om1 = 1, int om2 = 2) {
    BpsStructure base;
    base.rank = 2;
    base.pairing = {{0, 0}, {0, 0}};
    base.central_charge = {z1, z2};
    base.spectrum = {{{1, 0}, om1}, {{-1, 0}, om1}, {{0, 1}, om2}, {{0, -1}, om2}};
    return double_structure(base);
}

}  // namespace

TEST_CASE("stokes factors of the doubled A1 structure") {
    // stokes_factor is the RH1 multiplier taking the clockwise-side solution
    // to the counterclockwise-side one. With <alpha^vee, alpha> = -1 the
    // Y_+ = Y_- (1 - xi(alpha) e^{-z/t}) jump of the A1 problem reads
    //   Y_ccw / Y_cw = (1 - xi(alpha) e^{-z/t})^{-1} across ell, and
    //   Y_ccw / Y_cw = (1 - xi(-alpha) e^{+z/t})^{+1} across -ell.
    const A1Fixture f;
    const Complex t = 0.8 * std::exp(iu * f.ell);
    SECTION("beta = alpha^vee on ell") {
        const Complex got = stokes_factor(f.s, f.xi, Ray::from_angle(f.ell), f.beta, t);
        const Complex want = 1.0 / (1.0 - std::exp(f.theta) * std::exp(-f.z / t));
        CHECK(std::abs(got - want) < 1e-14);
        // equivalently: y_minus / y_plus on the overlap
        const Complex ratio = y_minus(f.z, f.theta, t) / y_plus(f.z, f.theta, t);
        CHECK(std::abs(got / ratio - 1.0) < 1e-12);
    }
    SECTION("beta = alpha^vee on -ell") {
        const Complex t2 = -t;
        const Complex got =
            stokes_factor(f.s, f.xi, Ray::from_angle(f.ell + pi), f.beta, t2);
        const Complex want = 1.0 - std::exp(-f.theta) * std::exp(f.z / t2);
        CHECK(std::abs(got - want) < 1e-14);
        const Complex ratio = y_plus(f.z, f.theta, t2) / y_minus(f.z, f.theta, t2);
        CHECK(std::abs(got / ratio - 1.0) < 1e-12);
    }
    SECTION("active beta gives the trivial factor") {
        const Complex got =
            stokes_factor(f.s, f.xi, Ray::from_angle(f.ell), LatticeClass{1, 0}, t);
        CHECK(got == Complex{1.0, 0.0});
    }
}

TEST_CASE("eps_a sign bookkeeping") {
    const A1Fixture f;
    SECTION("zero pairing means no factor") {
        const auto ea = eps_a(f.s, f.xi, LatticeClass{1, 0}, LatticeClass{1, 0});
        CHECK(ea.eps == 0);
    }
    SECTION("beta = alpha^vee against -alpha") {
        // <alpha^vee, -alpha> = +1 under the doubled pairing
        const auto ea = eps_a(f.s, f.xi, f.beta, LatticeClass{-1, 0});
        CHECK(ea.eps == 1);
        const Complex want = theta_normalized(f.s, f.xi, LatticeClass{-1, 0}) / two_pi_i;
        CHECK(std::abs(ea.a - want) < 1e-15);
    }
    SECTION("beta = alpha^vee against alpha gives the complementary sign") {
        const auto ea = eps_a(f.s, f.xi, f.beta, LatticeClass{1, 0});
        CHECK(ea.eps == -1);
        const Complex want = 1.0 - theta_normalized(f.s, f.xi, LatticeClass{1, 0}) / two_pi_i;
        CHECK(std::abs(ea.a - want) < 1e-15);
    }
}

TEST_CASE("y_plus / y_minus solve the A1 jump conditions") {
    const A1Fixture f;
    SECTION("jump on H_ell") {
        for (double rot : {-0.3, 0.0, 0.25}) {
            const Complex t = 1.1 * std::exp(iu * (f.ell + rot));
            const Complex lhs = y_plus(f.z, f.theta, t);
            const Complex rhs = y_minus(f.z, f.theta, t) *
                                (1.0 - std::exp(f.theta) * std::exp(-f.z / t));
            CHECK(std::abs(lhs / rhs - 1.0) < 1e-10);
        }
    }
    SECTION("jump on H_{-ell}") {
        for (double rot : {-0.2, 0.1}) {
            const Complex t = 0.7 * std::exp(iu * (f.ell + pi + rot));
            const Complex lhs = y_plus(f.z, f.theta, t);
            const Complex rhs = y_minus(f.z, f.theta, t) *
                                (1.0 - std::exp(-f.theta) * std::exp(f.z / t));
            CHECK(std::abs(lhs / rhs - 1.0) < 1e-10);
        }
    }
    SECTION("theta = 0 reduces to the one-variable modified Gamma") {
        const Complex t = 1.3 * std::exp(iu * f.ell);
        const Complex got = y_minus(f.z, Complex{0, 0}, t);
        CHECK(std::abs(got - lambda(Complex{0, 0}, -f.z / (two_pi_i * t))) < 1e-14);
    }
}

TEST_CASE("y_solution glues to the A1 pair") {
    const A1Fixture f;
    SECTION("clockwise-adjacent ray reproduces y_plus") {
        const auto e = f.cw();
        for (double rad : {0.4, 1.0, 2.7}) {
            const Complex t = rad * std::exp(iu * e.ray.angle);
            CHECK(std::abs(y_solution(e, t) - y_plus(f.z, f.theta, t)) <
                  1e-12 * std::abs(y_plus(f.z, f.theta, t)));
        }
    }
    SECTION("counterclockwise-adjacent ray reproduces y_minus") {
        const auto e = f.ccw();
        for (double rad : {0.4, 1.0, 2.7}) {
            const Complex t = rad * std::exp(iu * e.ray.angle);
            CHECK(std::abs(y_solution(e, t) - y_minus(f.z, f.theta, t)) <
                  1e-12 * std::abs(y_minus(f.z, f.theta, t)));
        }
    }
    SECTION("null beta gives exactly 1") {
        auto e = f.ccw();
        e.beta = null_embedding(BpsStructure{1, {{0}}, {f.z}, {{{1}, 1}, {{-1}, 1}}},
                                LatticeClass{1});
        const Complex t = 0.9 * std::exp(iu * e.ray.angle);
        CHECK(y_solution(e, t) == Complex{1.0, 0.0});
    }
    SECTION("t outside the half-plane is rejected") {
        const auto e = f.ccw();
        CHECK_THROWS_AS(y_solution(e, -1.1 * std::exp(iu * e.ray.angle)), DomainError);
    }
    SECTION("limit 1 at the origin") {
        const auto e = f.ccw();
        const Complex t = 1e-4 * std::exp(iu * e.ray.angle);
        CHECK(std::abs(y_solution(e, t) - 1.0) < 1e-3);
    }
}

TEST_CASE("critical points of the A1 pair") {
    // theta with a sizeable real part keeps several family members inside the
    // half-planes of rays close to ell; the far tail always exits toward the
    // -i ell boundary, which is what makes the count finite.
    A1Fixture f;
    f.theta = Complex{2.5, 0.3};
    f.xi.thetas[0] = f.theta;
    SECTION("y_minus side carries simple poles at z/(theta + 2 pi i k), k >= 0") {
        const auto pts = critical_points(f.ccw(0.05), 8);
        REQUIRE_FALSE(pts.empty());
        for (const auto& p : pts) {
            CHECK(p.gamma == LatticeClass{1, 0});
            CHECK(p.order == -1);
            const Complex want =
                f.z / (f.theta + two_pi_i * static_cast<double>(p.k));
            CHECK(std::abs(p.location - want) < 1e-12);
            CHECK(p.k >= 0);
        }
    }
    SECTION("y_plus side carries simple zeros at z/(theta - 2 pi i m), m >= 1") {
        const auto pts = critical_points(f.cw(0.05), 8);
        REQUIRE_FALSE(pts.empty());
        for (const auto& p : pts) {
            CHECK(p.gamma == LatticeClass{-1, 0});
            CHECK(p.order == +1);
            // through the partner class: Z(-alpha)/(theta(-alpha)+2pii k) = z/(theta-2pii(k+1))
            const Complex want = f.z / (f.theta - two_pi_i * static_cast<double>(p.k + 1));
            CHECK(std::abs(p.location - want) < 1e-12);
        }
    }
    SECTION("winding numbers certify the declared orders") {
        for (const auto& e : {f.ccw(0.05), f.cw(0.05)}) {
            const auto pts = critical_points(e, 5);
            REQUIRE_FALSE(pts.empty());
            for (const auto& p : pts) {
                const double w = winding_number(
                    [&](Complex t) { return y_solution(e, t); }, p.location,
                    1e-2 * std::abs(p.location));
                CHECK(std::abs(w - p.order) < 0.25);
            }
        }
    }
    SECTION("theta = 0 leaves no critical point in any half-plane") {
        A1Fixture g;
        g.xi.thetas[0] = Complex{0.0, 0.0};
        const auto e = make_rh_evaluation(g.s, g.xi, g.beta, Ray::from_angle(g.ell + 0.3));
        CHECK(critical_points(e, 50).empty());
    }
    SECTION("evaluation at a critical point raises with the point attached") {
        const auto e = f.ccw(0.05);
        const auto pts = critical_points(e, 3);
        REQUIRE_FALSE(pts.empty());
        try {
            y_solution(e, pts[0].location);
            FAIL("expected CriticalPointError");
        } catch (const CriticalPointError& err) {
            CHECK(err.point.order == pts[0].order);
            CHECK(std::abs(err.point.location - pts[0].location) < 1e-10);
        }
    }
    SECTION("minimality: fixed order and a single side of ell per class") {
        const auto pts = critical_points(f.ccw(0.05), 10);
        REQUIRE_FALSE(pts.empty());
        for (const auto& p : pts) {
            CHECK(std::abs(p.order) == 1);
            // strictly clockwise side of ell for Im theta in (0, 2pi)
            CHECK(wrap_angle(std::arg(p.location) - f.ell) < 0.0);
        }
    }
}

TEST_CASE("RH1 jumps via y_solution") {
    const A1Fixture f;
    SECTION("sector with no active ray is a pure continuation") {
        const auto e1 = f.ccw(0.45);
        const auto e2 = f.ccw(0.15);
        const Complex t = 1.2 * std::exp(iu * (f.ell + 0.3));
        CHECK(jump_residual(e1, e2, t) < 1e-12);
    }
    SECTION("doubled A1 across ell") {
        const auto e1 = f.ccw();
        const auto e2 = f.cw();
        for (double rad : {0.33, 0.9, 2.2}) {
            for (double rot : {-0.2, 0.0, 0.2}) {
                const Complex t = rad * std::exp(iu * (f.ell + rot));
                CHECK(jump_residual(e1, e2, t) < 1e-10);
            }
        }
    }
    SECTION("sector orientation is enforced") {
        const auto e1 = f.ccw();
        const auto e2 = f.cw();
        const Complex t = 1.0 * std::exp(iu * f.ell);
        CHECK_THROWS_AS(jump_residual(e2, e1, t), SectorError);
    }
    SECTION("rank-2 uncoupled, sector holding two active rays") {
        const BpsStructure s = rank2_doubled(Complex{1.0, 0.6}, Complex{-0.4, 1.1});
        const TorusPoint xi{{Complex{0.4, 1.3}, Complex{-0.2, 2.1}, Complex{0.1, 0.7},
                             Complex{0.5, 4.0}}};
        const LatticeClass beta{0, 0, 1, 0};
        const double a1 = std::arg(Complex{1.0, 0.6});
        const double a2 = std::arg(Complex{-0.4, 1.1});
        const auto e1 = make_rh_evaluation(s, xi, beta, Ray::from_angle(a2 + 0.2));
        const auto e2 = make_rh_evaluation(s, xi, beta, Ray::from_angle(a1 - 0.2));
        for (double rad : {0.5, 1.4}) {
            const Complex t = rad * std::exp(iu * (0.5 * (a1 + a2)));
            CHECK(jump_residual(e1, e2, t) < 1e-9);
        }
    }
}

TEST_CASE("solution is multiplicative in beta") {
    const BpsStructure s = rank2_doubled(Complex{1.0, 0.6}, Complex{-0.4, 1.1});
    const TorusPoint xi{{Complex{0.4, 1.3}, Complex{-0.2, 2.1}, Complex{0.1, 0.7},
                         Complex{0.5, 4.0}}};
    const Ray r = Ray::from_angle(0.1);
    const LatticeClass b1{0, 0, 1, 0}, b2{0, 0, -1, 2}, b12{0, 0, 0, 2};
    const auto e1 = make_rh_evaluation(s, xi, b1, r);
    const auto e2 = make_rh_evaluation(s, xi, b2, r);
    const auto e12 = make_rh_evaluation(s, xi, b12, r);
    for (double rad : {0.6, 1.9}) {
        const Complex t = rad * std::exp(iu * r.angle);
        const Complex lhs = y_solution(e12, t);
        const Complex rhs = y_solution(e1, t) * y_solution(e2, t);
        CHECK(std::abs(lhs / rhs - 1.0) < 1e-11);
    }
}

TEST_CASE("null vectors of doubled structures evaluate to exactly 1") {
    BpsStructure base;
    base.rank = 2;
    base.pairing = {{0, 0}, {0, 0}};
    base.central_charge = {Complex{1.0, 0.2}, Complex{-0.3, 0.9}};
    base.spectrum = {{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 3}, {{0, -1}, 3}};
    const BpsStructure d = double_structure(base);
    const TorusPoint xi{{Complex{0.4, 1.3}, Complex{-0.2, 2.1}, Complex{0.1, 0.7},
                         Complex{0.5, 4.0}}};
    const Ray r = Ray::from_angle(0.05);
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int i = 0; i < 10; ++i) {
        const LatticeClass g{coeff(rng), coeff(rng)};
        const auto e = make_rh_evaluation(d, xi, null_embedding(base, g), r);
        const Complex t = 0.9 * std::exp(iu * r.angle);
        CHECK(y_solution(e, t) == Complex{1.0, 0.0});
    }
}

TEST_CASE("doubled identification through the null vector") {
    // Y_{(g,0)} Y_{(0,<-,g>)} = Y_{null} = 1, so the (g,0)-solution is the
    // reciprocal of the (0,-<-,g>)-solution
    const A1Fixture f;
    const Ray r = Ray::from_angle(f.ell + 0.3);
    const auto e_base = make_rh_evaluation(f.s, f.xi, LatticeClass{1, 0}, r);
    const Complex t = 1.1 * std::exp(iu * r.angle);
    CHECK(y_solution(e_base, t) == Complex{1.0, 0.0});   // trivial base pairing: (g,0) is null
}

TEST_CASE("theta branch shifts keep the jumps") {
    const A1Fixture f;
    for (int k : {-1, 0, 1}) {
        const auto e1 = make_rh_evaluation(f.s, f.xi, f.beta, Ray::from_angle(f.ell + 0.3), k);
        const auto e2 = make_rh_evaluation(f.s, f.xi, f.beta, Ray::from_angle(f.ell - 0.3), k);
        const Complex t = 1.0 * std::exp(iu * f.ell);
        CHECK(jump_residual(e1, e2, t) < 1e-9);
    }
}

TEST_CASE("theta branch shifts move the critical points") {
    A1Fixture f;
    f.theta = Complex{2.5, 0.3};
    f.xi.thetas[0] = f.theta;
    const auto base = critical_points(f.ccw(0.05), 6);
    const auto up = critical_points(
        make_rh_evaluation(f.s, f.xi, f.beta, Ray::from_angle(f.ell + 0.05), 1), 6);
    REQUIRE_FALSE(base.empty());
    REQUIRE_FALSE(up.empty());
    // shifted family starts one 2 pi i step later
    CHECK(std::abs(up.back().location -
                   f.z / (f.theta + two_pi_i * static_cast<double>(up.back().k))) < 1e-12);
    CHECK(up.back().k >= 1);
}

TEST_CASE("RH2 limit and RH3 growth probes") {
    const A1Fixture f;
    SECTION("null beta is identically 1") {
        auto e = f.ccw();
        e.beta = LatticeClass{1, 0};
        const auto vals = limit_check(e, {1e-1, 1e-2, 1e-3});
        for (double v : vals) CHECK(v == 0.0);
        CHECK(growth_check(e, {10, 20, 40, 80}) == 0.0);
    }
    SECTION("A1 limits decrease monotonically") {
        const auto vals = limit_check(f.ccw(), {1e-1, 1e-2, 1e-3});
        CHECK(vals[1] < vals[0]);
        CHECK(vals[2] < vals[1]);
        CHECK(vals[2] < 1e-2);
    }
    SECTION("A1 growth slope is small and stable") {
        const double s1 = growth_check(f.ccw(), {10, 20, 40, 80});
        const double s2 = growth_check(f.ccw(), {20, 40, 80, 160});
        CHECK(std::abs(s1) <= 1.0);
        CHECK(std::abs(s1 - s2) <= 0.1 * std::max({std::abs(s1), std::abs(s2), 0.05}));
    }
}

TEST_CASE("witness for the failure of the holomorphic problem") {
    SECTION("real theta puts the witness on the active ray") {
        A1Fixture f;
        f.xi.thetas[0] = Complex{0.7, 0.0};
        const auto cp = holo_nonexistence_witness(f.s, f.xi, LatticeClass{1, 0});
        const Complex want = f.z / 0.7;
        CHECK(std::abs(cp.location - want) < 1e-12);
        CHECK(std::abs(std::abs(cp.order) - 1) < 1e-12);
        // the witness sits on ell itself
        CHECK(std::abs(wrap_angle(std::arg(cp.location) - f.ell)) < 1e-12);
    }
    SECTION("theta = 0 violates the hypothesis") {
        A1Fixture f;
        f.xi.thetas[0] = Complex{0.0, 0.0};
        CHECK_THROWS_AS(holo_nonexistence_witness(f.s, f.xi, LatticeClass{1, 0}),
                        HypothesisError);
    }
    SECTION("generic complex theta with small imaginary part") {
        A1Fixture f;
        f.xi.thetas[0] = Complex{0.9, 0.2};
        const auto cp = holo_nonexistence_witness(f.s, f.xi, LatticeClass{1, 0});
        CHECK(std::abs(cp.order) == 1);
    }
}

TEST_CASE("evaluation guards") {
    const A1Fixture f;
    SECTION("active ray rejected at construction") {
        CHECK_THROWS_AS(make_rh_evaluation(f.s, f.xi, f.beta, Ray::from_angle(f.ell)),
                        ActiveRayError);
    }
    SECTION("coupled structures rejected") {
        BpsStructure s;
        s.rank = 2;
        s.pairing = {{0, 1}, {-1, 0}};
        s.central_charge = {Complex{1.0, 0.0}, Complex{0.0, 1.0}};
        s.spectrum = {{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}, {{0, -1}, 1}};
        CHECK_THROWS_AS(
            make_rh_evaluation(s, TorusPoint{{Complex{0, 1}, Complex{0, 1}}},
                               LatticeClass{1, 0}, Ray::from_angle(0.3)),
            DomainError);
    }
}
