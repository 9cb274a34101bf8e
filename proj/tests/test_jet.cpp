#include "weylscope/jet.hpp"
#include "weylscope/expr.hpp"
#include "oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace weylscope;

namespace {

Jet3 eval_text(const std::string& text, const std::vector<std::string>& vars,
               const Eigen::VectorXd& point) {
    std::map<std::string, int> cidx;
    for (size_t i = 0; i < vars.size(); ++i) cidx[vars[i]] = static_cast<int>(i);
    EvalEnv env;
    env.dim = static_cast<int>(vars.size());
    env.coord_index = &cidx;
    env.point = point.data();
    return jet_eval(parse_expression(text), env);
}

Jet3 random_jet(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Jet3 j(n);
    j.value() = d(rng);
    for (int i = 0; i < n; ++i) j.grad(i) = d(rng);
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) j.set_hess(i, k, d(rng));
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k)
            for (int l = k; l < n; ++l) j.set_third(i, k, l, d(rng));
    return j;
}

double jet_distance(const Jet3& a, const Jet3& b) {
    double m = std::abs(a.value() - b.value());
    const int n = a.dim();
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(a.grad(i) - b.grad(i)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m = std::max(m, std::abs(a.hess(i, j) - b.hess(i, j)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k)
                m = std::max(m, std::abs(a.third(i, j, k) - b.third(i, j, k)));
    return m;
}

double jet_scale(const Jet3& a) {
    double m = std::abs(a.value());
    const int n = a.dim();
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(a.grad(i)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m = std::max(m, std::abs(a.hess(i, j)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) m = std::max(m, std::abs(a.third(i, j, k)));
    return std::max(m, 1e-300);
}

} // namespace

TEST_CASE("monomial x^3 at x=2") {
    Eigen::VectorXd p(1);
    p << 2.0;
    Jet3 j = eval_text("x^3", {"x"}, p);
    CHECK(j.value() == Catch::Approx(8.0));
    CHECK(j.grad(0) == Catch::Approx(12.0));
    CHECK(j.hess(0, 0) == Catch::Approx(12.0));
    CHECK(j.third(0, 0, 0) == Catch::Approx(6.0));
}

TEST_CASE("sin(x) at 0 gives the Maclaurin coefficients") {
    Eigen::VectorXd p(1);
    p << 0.0;
    Jet3 j = eval_text("sin(x)", {"x"}, p);
    CHECK(j.value() == Catch::Approx(0.0).margin(1e-15));
    CHECK(j.grad(0) == Catch::Approx(1.0));
    CHECK(j.hess(0, 0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(j.third(0, 0, 0) == Catch::Approx(-1.0));
}

TEST_CASE("seeding a coordinate") {
    Jet3 j = Jet3::coordinate(3, 1, 0.7);
    CHECK(j.value() == 0.7);
    CHECK(j.grad(0) == 0.0);
    CHECK(j.grad(1) == 1.0);
    CHECK(j.hess(0, 1) == 0.0);
    CHECK(j.third(1, 1, 1) == 0.0);
}

TEST_CASE("exp(x*y) matches the finite-difference oracle") {
    Eigen::VectorXd p(2);
    p << 0.3, 0.7;
    Jet3 j = eval_text("exp(x*y)", {"x", "y"}, p);
    auto f = [](const Eigen::VectorXd& q) { return std::exp(q(0) * q(1)); };
    auto fd = oracle::fd_jet(f, p);
    const double scale = std::abs(fd.value);
    CHECK(std::abs(j.value() - fd.value) / scale < 1e-7);
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(j.grad(i) - fd.grad(i)) / scale < 1e-7);
    for (int i = 0; i < 2; ++i)
        for (int k = i; k < 2; ++k)
            CHECK(std::abs(j.hess(i, k) - fd.hess(i, k)) / scale < 1e-7);
    for (int i = 0; i < 2; ++i)
        for (int k = i; k < 2; ++k)
            for (int l = k; l < 2; ++l)
                CHECK(std::abs(j.third(i, k, l) - fd.third[static_cast<size_t>(i)](k, l)) / scale <
                      1e-7);
}

TEST_CASE("ring laws on random jets") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 4);
        Jet3 a = random_jet(rng, n), b = random_jet(rng, n), c = random_jet(rng, n);
        Jet3 lhs = (a + b) * c;
        Jet3 rhs = a * c + b * c;
        CHECK(jet_distance(lhs, rhs) / jet_scale(lhs) < 1e-13);
        // associativity and commutativity come along for free
        CHECK(jet_distance(a * b, b * a) / jet_scale(a * b) < 1e-13);
        CHECK(jet_distance((a * b) * c, a * (b * c)) / jet_scale(a * (b * c)) < 1e-12);
    }
}

TEST_CASE("exp(log(a)) is the identity on positive jets") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Jet3 a = random_jet(rng, n);
        a.value() = 0.5 + std::abs(a.value()) * 2.0;
        Jet3 r = exp(log(a));
        CHECK(jet_distance(r, a) / jet_scale(a) < 1e-12);
    }
}

TEST_CASE("division by reciprocal series: a/b*b = a") {
    std::mt19937_64 rng(991);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 3);
        Jet3 a = random_jet(rng, n);
        Jet3 b = random_jet(rng, n);
        b.value() = 1.0 + std::abs(b.value());
        Jet3 r = (a / b) * b;
        CHECK(jet_distance(r, a) / jet_scale(a) < 1e-12);
    }
}

TEST_CASE("chain rule against the finite-difference oracle on random trees") {
    std::mt19937_64 rng(20250810);
    std::vector<std::string> vars{"x1", "x2"};
    std::map<std::string, int> cidx{{"x1", 0}, {"x2", 1}};
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        ExprPtr e = oracle::random_expression(rng, vars, 3);
        Eigen::VectorXd p(2);
        std::uniform_real_distribution<double> d(-0.8, 0.8);
        p << d(rng), d(rng);
        EvalEnv env;
        env.dim = 2;
        env.coord_index = &cidx;
        env.point = p.data();
        Jet3 j = jet_eval(e, env);
        auto f = [&](const Eigen::VectorXd& q) {
            EvalEnv e2;
            e2.dim = 2;
            e2.coord_index = &cidx;
            e2.point = q.data();
            return eval_value(e, e2);
        };
        auto fd = oracle::fd_jet(f, p);
        double scale = std::max({std::abs(fd.value), fd.grad.cwiseAbs().maxCoeff(),
                                 fd.hess.cwiseAbs().maxCoeff(), 1.0});
        CHECK(std::abs(j.value() - fd.value) / scale < 1e-6);
        for (int i = 0; i < 2; ++i) CHECK(std::abs(j.grad(i) - fd.grad(i)) / scale < 1e-6);
        for (int i = 0; i < 2; ++i)
            for (int k = i; k < 2; ++k)
                CHECK(std::abs(j.hess(i, k) - fd.hess(i, k)) / scale < 1e-6);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("division near zero raises") {
    Eigen::VectorXd p(1);
    p << 0.0;
    CHECK_THROWS_AS(eval_text("1/x", {"x"}, p), Error);
    try {
        eval_text("1/x", {"x"}, p);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DivisionNearZero);
    }
}

TEST_CASE("domain errors for log and sqrt") {
    Eigen::VectorXd p(1);
    p << -2.0;
    try {
        eval_text("log(x)", {"x"}, p);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DomainError);
    }
    try {
        eval_text("sqrt(x)", {"x"}, p);
        FAIL("expected DomainError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DomainError);
    }
}

TEST_CASE("unknown symbol raises") {
    Eigen::VectorXd p(1);
    p << 1.0;
    try {
        eval_text("x + q", {"x"}, p);
        FAIL("expected UnknownSymbol");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSymbol);
    }
}

TEST_CASE("non-constant power exponent rejected") {
    Eigen::VectorXd p(1);
    p << 2.0;
    CHECK_THROWS_AS(eval_text("x^x", {"x"}, p), Error);
}

TEST_CASE("hessian and third-order symmetry is structural") {
    Eigen::VectorXd p(3);
    p << 0.4, -0.2, 0.9;
    Jet3 j = eval_text("sin(x*y) * exp(z) + x^2*z", {"x", "y", "z"}, p);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) CHECK(j.hess(i, k) == j.hess(k, i));
    CHECK(j.third(0, 1, 2) == j.third(2, 1, 0));
    CHECK(j.third(0, 1, 2) == j.third(1, 2, 0));
}
