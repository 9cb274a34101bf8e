#include "weylscope/generators.hpp"
#include "weylscope/sampler.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace weylscope;

namespace {
const double kR = 1.0 / std::sqrt(3.0);

GeneratorSpec base_product() { return product_spec(sphere_spec(2, kR), sphere_spec(2, kR)); }
GeneratorSpec warped_sinh() { return warped_spec("sinh(t)", {0.35, 1.5}, base_product()); }
} // namespace

TEST_CASE("sphere(2,1) has scalar curvature 2") {
    auto def = generate(sphere_spec(2, 1.0));
    Eigen::VectorXd p = sample_point(def, 1u, 0);
    auto cb = curvature_bundle(evaluate_metric_jets(def, p, 2), false);
    CHECK(std::abs(cb.tau - 2.0) < 1e-10);
}

TEST_CASE("S2(1/sqrt3) x S2(1/sqrt3) is Einstein with Ric = 3g, tau = 12, rho* = 1") {
    auto def = generate(base_product());
    for (int s = 0; s < 10; ++s) {
        Eigen::VectorXd p = sample_point(def, 2u, s);
        auto cb = curvature_bundle(evaluate_metric_jets(def, p, 2), false);
        CHECK((cb.ricci - 3.0 * cb.g).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(cb.tau - 12.0) < 1e-8);
        CHECK(std::abs(cb.rho - 1.0) < 1e-9);
    }
}

TEST_CASE("warped sinh over the product base is Einstein with rho = -1") {
    auto def = generate(warped_sinh());
    CHECK(def.dim() == 5);
    for (int s = 0; s < 10; ++s) {
        Eigen::VectorXd p = sample_point(def, 3u, s);
        auto cb = curvature_bundle(evaluate_metric_jets(def, p, 2), false);
        CHECK((cb.ricci + 4.0 * cb.g).cwiseAbs().maxCoeff() < 1e-7);
        CHECK(std::abs(cb.rho + 1.0) < 1e-9);
    }
}

TEST_CASE("warped identities for f = sinh") {
    auto rec = warped_identities_check(warped_sinh(), 6, 11u);
    CHECK(rec.tangential_max < 1e-7);
    CHECK(rec.radial_zero_max < 1e-7);
    CHECK(rec.radial_accel_max < 1e-7);
    CHECK(rec.warp_equation_max < 1e-12); // cosh^2 - sinh^2 = 1 = rho*
    CHECK(rec.einstein_max < 1e-7);
}

TEST_CASE("warped identities for the trivial warp f = 1") {
    auto rec = warped_identities_check(warped_spec("1 + 0*t", {0.35, 1.5}, base_product()), 4, 4u);
    CHECK(rec.tangential_max < 1e-8);
    CHECK(rec.radial_zero_max < 1e-10);
    CHECK(rec.radial_accel_max < 1e-10); // f''/f = 0
}

TEST_CASE("warped check rejects non-solutions: f = cosh with rho* = 1") {
    auto rec = warped_identities_check(warped_spec("cosh(t)", {0.35, 1.5}, base_product()), 6, 5u);
    // generic warped identities still hold for any warp
    CHECK(rec.tangential_max < 1e-7);
    CHECK(rec.radial_zero_max < 1e-7);
    CHECK(rec.radial_accel_max < 1e-7);
    // but the Einstein warp equation fails (it would need rho* = -1)
    CHECK(rec.warp_equation_max > 0.5);
    CHECK(rec.einstein_max > 0.1);
}

TEST_CASE("warped_identities_check rejects non-warped specs") {
    CHECK_THROWS_AS(warped_identities_check(t11_spec(), 2, 1u), Error);
}

TEST_CASE("t11 admission gate: Ric = 4g") {
    auto def = generate(t11_spec());
    for (int s = 0; s < 10; ++s) {
        Eigen::VectorXd p = sample_point(def, 6u, s);
        auto cb = curvature_bundle(evaluate_metric_jets(def, p, 2), false);
        CHECK((cb.ricci - 4.0 * cb.g).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("R2 x Schwarzschild is Ricci flat on the chart") {
    auto def = generate(schwarzschild_product_spec(1.0, {3.0, 10.0}));
    CHECK(def.dim() == 6);
    for (int s = 0; s < 6; ++s) {
        Eigen::VectorXd p = sample_point(def, 8u, s);
        auto cb = curvature_bundle(evaluate_metric_jets(def, p, 2), false);
        CHECK(cb.ricci.cwiseAbs().maxCoeff() < 1e-8);
        CHECK(cb.riemann.max_abs() > 1e-4); // curved, not flat
    }
}

TEST_CASE("Einstein corpus members pass |Ric - (n-1) rho g| at 50 seeded samples") {
    auto members = {generate(base_product()), generate(warped_sinh()), generate(t11_spec())};
    for (const auto& def : members) {
        const int n = def.dim();
        for (int s = 0; s < 50; ++s) {
            Eigen::VectorXd p = sample_point(def, 0x5eedu, s);
            auto cb = curvature_bundle(evaluate_metric_jets(def, p, 2), false);
            CHECK((cb.ricci - (n - 1) * cb.rho * cb.g).cwiseAbs().maxCoeff() < 1e-7);
        }
    }
}

TEST_CASE("conformal rescale and its inverse restore entries structurally") {
    auto def = generate(t11_spec());
    ExprPtr phi = parse_expression("0.1*sin(th1)*cos(ph2)");
    auto up = conformal_rescale_def(def, phi);
    ExprPtr neg_phi = parse_expression("-(0.1*sin(th1)*cos(ph2))");
    auto back = conformal_rescale_def(up, neg_phi);
    for (int i = 0; i < def.dim(); ++i)
        for (int j = 0; j < def.dim(); ++j)
            CHECK(structural_equal(back.entries[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                   def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)]));
}

TEST_CASE("rescaled metric evaluates to e^{2phi} g") {
    auto def = generate(base_product());
    ExprPtr phi = parse_expression("0.3*sin(a_th1)*cos(b_th2)");
    auto resc = conformal_rescale_def(def, phi);
    Eigen::VectorXd p = sample_point(def, 12u, 0);
    auto m0 = evaluate_metric_jets(def, p, 1);
    auto m1 = evaluate_metric_jets(resc, p, 1);
    auto cidx = def.coord_index();
    EvalEnv env;
    env.dim = def.dim();
    env.coord_index = &cidx;
    env.point = p.data();
    const double factor = std::exp(2.0 * eval_value(phi, env));
    CHECK((m1.g_values - factor * m0.g_values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bad parameters raise") {
    CHECK_THROWS_AS(generate(sphere_spec(2, -1.0)), Error);
    CHECK_THROWS_AS(generate(warped_spec("t", {-1.0, 1.0}, base_product())), Error); // zero crossing
    CHECK_THROWS_AS(generate(schwarzschild_product_spec(1.0, {1.0, 10.0})), Error);
    CHECK_THROWS_AS(generate(flat_spec(9)), Error);
}

TEST_CASE("spec hash is stable and distinguishes kinds") {
    CHECK(spec_hash(t11_spec()) == spec_hash(t11_spec()));
    CHECK(spec_hash(flat_spec(4)) != spec_hash(flat_spec(5)));
    CHECK(spec_hash(warped_sinh()) != spec_hash(base_product()));
}

TEST_CASE("generated definitions round-trip through the DSL") {
    for (auto spec : {base_product(), warped_sinh(), t11_spec(), schwarzschild_product_spec()}) {
        auto def = generate(spec);
        auto re = parse_metric(render_metric(def));
        CHECK(re.coords == def.coords);
        Eigen::VectorXd p = sample_point(def, 13u, 1);
        auto a = evaluate_metric_jets(def, p, 1);
        auto b = evaluate_metric_jets(re, p, 1);
        CHECK((a.g_values - b.g_values).cwiseAbs().maxCoeff() < 1e-14);
    }
}
