#pragma once

// Test-only oracles. The finite-difference jet oracle differentiates plain
// value evaluations of an expression, independent of the jet propagation
// rules it is used to check.

#include "weylscope/expr.hpp"
#include "weylscope/metric.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using weylscope::EvalEnv;
using weylscope::Expr;
using weylscope::ExprPtr;

struct FdJet {
    double value;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    std::vector<Eigen::MatrixXd> third; // third[i](j,k)
};

// central difference with one Richardson step
inline double richardson(const std::function<double(double)>& f, double h) {
    auto d = [&](double s) { return (f(s) - f(-s)) / (2.0 * s); };
    return (4.0 * d(h / 2) - d(h)) / 3.0;
}

inline FdJet fd_jet(const std::function<double(const Eigen::VectorXd&)>& f,
                    const Eigen::VectorXd& x, double h1 = 1e-3, double h3 = 2e-2) {
    const int n = static_cast<int>(x.size());
    FdJet r;
    r.value = f(x);
    r.grad.resize(n);
    for (int i = 0; i < n; ++i) {
        r.grad(i) = richardson(
            [&](double s) {
                Eigen::VectorXd y = x;
                y(i) += s;
                return f(y);
            },
            h1);
    }
    // Hessian from gradients of gradients keeps the stencil simple
    auto grad_at = [&](const Eigen::VectorXd& y, int i, double h) {
        return richardson(
            [&](double s) {
                Eigen::VectorXd z = y;
                z(i) += s;
                return f(z);
            },
            h);
    };
    r.hess.resize(n, n);
    const double h2 = 5e-3;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = richardson(
                [&](double s) {
                    Eigen::VectorXd y = x;
                    y(j) += s;
                    return grad_at(y, i, h2);
                },
                h2);
            r.hess(i, j) = v;
            r.hess(j, i) = v;
        }
    r.third.assign(static_cast<size_t>(n), Eigen::MatrixXd::Zero(n, n));
    auto hess_at = [&](const Eigen::VectorXd& y, int i, int j, double h) {
        return richardson(
            [&](double s) {
                Eigen::VectorXd z = y;
                z(j) += s;
                return grad_at(z, i, h);
            },
            h);
    };
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                double v = richardson(
                    [&](double s) {
                        Eigen::VectorXd y = x;
                        y(k) += s;
                        return hess_at(y, i, j, h3);
                    },
                    h3);
                r.third[static_cast<size_t>(i)](j, k) = v;
                r.third[static_cast<size_t>(i)](k, j) = v;
                r.third[static_cast<size_t>(j)](i, k) = v;
                r.third[static_cast<size_t>(j)](k, i) = v;
                r.third[static_cast<size_t>(k)](i, j) = v;
                r.third[static_cast<size_t>(k)](j, i) = v;
            }
    return r;
}

// random expression trees over guarded primitives, defined on all of R^n
inline ExprPtr random_expression(std::mt19937_64& rng, const std::vector<std::string>& vars,
                                 int depth) {
    std::uniform_int_distribution<int> leaf(0, 2), node(0, 6), var(0, static_cast<int>(vars.size()) - 1);
    std::uniform_real_distribution<double> num(-1.5, 1.5);
    if (depth <= 0) {
        switch (leaf(rng)) {
            case 0: return Expr::make_number(num(rng));
            default: return Expr::make_ident(vars[static_cast<size_t>(var(rng))]);
        }
    }
    switch (node(rng)) {
        case 0:
            return Expr::make_binary(Expr::Kind::Add, random_expression(rng, vars, depth - 1),
                                     random_expression(rng, vars, depth - 1));
        case 1:
            return Expr::make_binary(Expr::Kind::Sub, random_expression(rng, vars, depth - 1),
                                     random_expression(rng, vars, depth - 1));
        case 2:
            return Expr::make_binary(Expr::Kind::Mul, random_expression(rng, vars, depth - 1),
                                     random_expression(rng, vars, depth - 1));
        case 3: {
            // guarded division: denominator 2 + sin(u)^2 stays in [2,3]
            ExprPtr u = random_expression(rng, vars, depth - 1);
            ExprPtr den = Expr::make_binary(
                Expr::Kind::Add, Expr::make_number(2.0),
                Expr::make_binary(Expr::Kind::Pow, Expr::make_call("sin", u),
                                  Expr::make_number(2.0)));
            return Expr::make_binary(Expr::Kind::Div, random_expression(rng, vars, depth - 1),
                                     den);
        }
        case 4: {
            // guarded log: argument 1 + u^2 strictly positive
            ExprPtr u = random_expression(rng, vars, depth - 1);
            ExprPtr arg = Expr::make_binary(
                Expr::Kind::Add, Expr::make_number(1.0),
                Expr::make_binary(Expr::Kind::Pow, u, Expr::make_number(2.0)));
            return Expr::make_call("log", arg);
        }
        case 5: {
            // bounded transcendental argument keeps exp/sin/cos tame
            ExprPtr u = random_expression(rng, vars, depth - 1);
            ExprPtr bounded = Expr::make_binary(Expr::Kind::Mul, Expr::make_number(0.7),
                                                Expr::make_call("sin", u));
            std::uniform_int_distribution<int> fn(0, 3);
            switch (fn(rng)) {
                case 0: return Expr::make_call("exp", bounded);
                case 1: return Expr::make_call("cos", bounded);
                case 2: return Expr::make_call("sinh", bounded);
                default: return Expr::make_call("tan", bounded);
            }
        }
        default: {
            ExprPtr u = random_expression(rng, vars, depth - 1);
            ExprPtr arg = Expr::make_binary(
                Expr::Kind::Add, Expr::make_number(1.5),
                Expr::make_binary(Expr::Kind::Pow, Expr::make_call("cos", u),
                                  Expr::make_number(2.0)));
            return Expr::make_call("sqrt", arg);
        }
    }
}

// random smooth metric text: identity plus a small symmetric perturbation of
// polynomial and trigonometric entries, positive definite on the unit box
inline std::string random_metric_text(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.05, 0.16);
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_int_distribution<int> vi(0, n - 1);
    static const char* names[] = {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"};
    auto term = [&](int i, int j) {
        double a = amp(rng) / (i == j ? 1.0 : 2.0);
        std::string u = names[vi(rng)], v = names[vi(rng)];
        std::ostringstream os;
        os.precision(17);
        switch (pick(rng)) {
            case 0: os << a << "*sin(" << u << ")*cos(" << v << ")"; break;
            case 1: os << a << "*" << u << "*" << v; break;
            case 2: os << a << "*cos(" << u << " + 0.5*" << v << ")"; break;
            case 3: os << a << "*sin(" << u << "*" << v << ")"; break;
            default: os << a << "*" << u << "^2"; break;
        }
        return os.str();
    };
    std::ostringstream os;
    os << "coords";
    for (int i = 0; i < n; ++i) os << " " << names[i];
    os << "\n";
    for (int i = 0; i < n; ++i) os << "domain " << names[i] << " in (-1, 1)\n";
    os << "g = [";
    for (int i = 0; i < n; ++i) {
        os << "[";
        for (int j = i; j < n; ++j) {
            if (i == j)
                os << "1 + " << term(i, j);
            else
                os << term(i, j);
            if (j + 1 < n) os << ", ";
        }
        os << "]";
        if (i + 1 < n) os << ", ";
    }
    os << "]\n";
    return os.str();
}

} // namespace oracle
