#pragma once

// Closed-form metric generators for the oracle corpus: flat space, round
// spheres in polar charts, products, warped products dt^2 + f(t)^2 g*, the
// homogeneous Sasaki-Einstein space T^{1,1}, flat R^2 x Schwarzschild, and
// conformal rescaling of any generated definition.

#include "weylscope/curvature.hpp"
#include "weylscope/errors.hpp"
#include "weylscope/expr.hpp"
#include "weylscope/metric.hpp"
#include "weylscope/sampler.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace weylscope {

struct GeneratorSpec {
    enum class Kind { flat, sphere, product, warped, t11, schwarzschild_product, conformal_rescale };

    Kind kind = Kind::flat;
    int dim = 4;                                   // flat, sphere
    double radius = 1.0;                           // sphere
    double mass = 1.0;                             // schwarzschild_product
    std::pair<double, double> r_interval{3.0, 10.0};
    std::string warp;                              // expression in t
    std::pair<double, double> t_interval{0.35, 1.5};
    std::string phi;                               // conformal factor expression
    std::vector<GeneratorSpec> inner;              // factors / base / rescale target
};

inline GeneratorSpec flat_spec(int n) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::flat;
    s.dim = n;
    return s;
}
inline GeneratorSpec sphere_spec(int n, double r) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::sphere;
    s.dim = n;
    s.radius = r;
    return s;
}
inline GeneratorSpec product_spec(GeneratorSpec a, GeneratorSpec b) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::product;
    s.inner = {std::move(a), std::move(b)};
    return s;
}
inline GeneratorSpec warped_spec(std::string f, std::pair<double, double> interval,
                                 GeneratorSpec base) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::warped;
    s.warp = std::move(f);
    s.t_interval = interval;
    s.inner = {std::move(base)};
    return s;
}
inline GeneratorSpec t11_spec() {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::t11;
    return s;
}
inline GeneratorSpec schwarzschild_product_spec(double m = 1.0,
                                                std::pair<double, double> r_iv = {3.0, 10.0}) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::schwarzschild_product;
    s.mass = m;
    s.r_interval = r_iv;
    return s;
}
inline GeneratorSpec rescale_spec(GeneratorSpec inner, std::string phi) {
    GeneratorSpec s;
    s.kind = GeneratorSpec::Kind::conformal_rescale;
    s.phi = std::move(phi);
    s.inner = {std::move(inner)};
    return s;
}

namespace gen_detail {

inline ExprPtr rename_idents(const ExprPtr& e, const std::map<std::string, std::string>& m) {
    if (!e) return e;
    switch (e->kind) {
        case Expr::Kind::Number: return e;
        case Expr::Kind::Ident: {
            auto it = m.find(e->name);
            return it == m.end() ? e : Expr::make_ident(it->second, e->line, e->col);
        }
        case Expr::Kind::Neg: return Expr::make_unary(Expr::Kind::Neg, rename_idents(e->a, m));
        case Expr::Kind::Call:
            return Expr::make_call(e->name, rename_idents(e->a, m), e->line, e->col);
        default:
            return Expr::make_binary(e->kind, rename_idents(e->a, m), rename_idents(e->b, m));
    }
}

// prefix all user identifiers of a definition (coordinates, constants, scalars)
inline MetricDefinition prefix_definition(const MetricDefinition& def, const std::string& prefix) {
    MetricDefinition out;
    out.name = def.name;
    std::map<std::string, std::string> rename;
    for (auto& c : def.coords) rename[c] = prefix + c;
    for (auto& [k, v] : def.constants) rename[k] = prefix + k;
    for (auto& [k, v] : def.scalars) rename[k] = prefix + k;
    for (auto& c : def.coords) out.coords.push_back(prefix + c);
    out.domain_hints = def.domain_hints;
    for (auto& [k, v] : def.constants) out.constants[prefix + k] = v;
    for (auto& [k, v] : def.scalars) out.scalars.emplace_back(prefix + k, rename_idents(v, rename));
    out.entries.resize(def.entries.size());
    for (size_t i = 0; i < def.entries.size(); ++i) {
        out.entries[i].resize(def.entries[i].size());
        for (size_t j = 0; j < def.entries[i].size(); ++j)
            out.entries[i][j] = rename_idents(def.entries[i][j], rename);
    }
    return out;
}

inline ExprPtr num(double v) { return Expr::make_number(v); }
inline ExprPtr id(const std::string& s) { return Expr::make_ident(s); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) {
    return Expr::make_binary(Expr::Kind::Mul, std::move(a), std::move(b));
}
inline ExprPtr add(ExprPtr a, ExprPtr b) {
    return Expr::make_binary(Expr::Kind::Add, std::move(a), std::move(b));
}
inline ExprPtr div(ExprPtr a, ExprPtr b) {
    return Expr::make_binary(Expr::Kind::Div, std::move(a), std::move(b));
}
inline ExprPtr powc(ExprPtr a, double c) {
    return Expr::make_binary(Expr::Kind::Pow, std::move(a), num(c));
}
inline ExprPtr call(const char* f, ExprPtr a) { return Expr::make_call(f, std::move(a)); }

// fold double negation so cancellation of phi against -phi is structural
inline ExprPtr fold_neg(const ExprPtr& e) {
    if (!e) return e;
    if (e->kind == Expr::Kind::Neg) {
        ExprPtr inner = fold_neg(e->a);
        if (inner->kind == Expr::Kind::Neg) return inner->a;
        if (inner->kind == Expr::Kind::Number) return num(-inner->number);
        return Expr::make_unary(Expr::Kind::Neg, inner);
    }
    if (e->kind == Expr::Kind::Call) return Expr::make_call(e->name, fold_neg(e->a), e->line, e->col);
    if (e->a || e->b) {
        if (e->kind == Expr::Kind::Neg) return e;
        if (!e->b) return Expr::make_unary(e->kind, fold_neg(e->a));
        return Expr::make_binary(e->kind, fold_neg(e->a), fold_neg(e->b));
    }
    return e;
}

inline bool opposite_factors(const ExprPtr& a, const ExprPtr& b) {
    ExprPtr na = fold_neg(Expr::make_unary(Expr::Kind::Neg, a));
    return canonical_equal(fold_neg(na), fold_neg(b));
}

} // namespace gen_detail

inline MetricDefinition conformal_rescale_def(const MetricDefinition& inner, const ExprPtr& phi) {
    using namespace gen_detail;
    MetricDefinition out = inner;
    out.name = inner.name + "_rescaled";
    ExprPtr twophi = mul(num(2.0), phi);
    const int n = inner.dim();
    // detect an inverse rescale: every entry exp(2 psi)*(e) with psi = -phi
    bool all_cancel = n > 0;
    for (int i = 0; i < n && all_cancel; ++i)
        for (int j = i; j < n && all_cancel; ++j) {
            const ExprPtr& e = inner.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
            bool cancels = false;
            if (e->kind == Expr::Kind::Mul && e->a->kind == Expr::Kind::Call &&
                e->a->name == "exp" && e->a->a->kind == Expr::Kind::Mul &&
                e->a->a->a->kind == Expr::Kind::Number && e->a->a->a->number == 2.0) {
                cancels = opposite_factors(e->a->a->b, phi);
            }
            all_cancel = cancels;
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const ExprPtr& e = inner.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
            out.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                all_cancel ? e->b : mul(call("exp", twophi), e);
        }
    return out;
}

inline MetricDefinition generate(const GeneratorSpec& spec) {
    using namespace gen_detail;
    switch (spec.kind) {
        case GeneratorSpec::Kind::flat: {
            if (spec.dim < 2 || spec.dim > 8) raise(ErrorKind::BadParams, "flat needs 2 <= n <= 8");
            MetricDefinition def;
            def.name = "flat" + std::to_string(spec.dim);
            for (int i = 1; i <= spec.dim; ++i) def.coords.push_back("x" + std::to_string(i));
            def.domain_hints.assign(static_cast<size_t>(spec.dim),
                                    std::make_pair(-2.0, 2.0));
            def.entries.assign(static_cast<size_t>(spec.dim),
                               std::vector<ExprPtr>(static_cast<size_t>(spec.dim)));
            for (int i = 0; i < spec.dim; ++i)
                for (int j = 0; j < spec.dim; ++j)
                    def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        num(i == j ? 1.0 : 0.0);
            return def;
        }
        case GeneratorSpec::Kind::sphere: {
            if (spec.dim < 2 || spec.dim > 7 || !(spec.radius > 0.0))
                raise(ErrorKind::BadParams, "sphere needs 2 <= n <= 7 and r > 0");
            MetricDefinition def;
            def.name = "sphere" + std::to_string(spec.dim);
            const int n = spec.dim;
            for (int i = 1; i <= n; ++i) def.coords.push_back("th" + std::to_string(i));
            def.domain_hints.assign(static_cast<size_t>(n), std::make_pair(0.35, 2.75));
            def.domain_hints[static_cast<size_t>(n - 1)] = std::make_pair(0.1, 6.18);
            def.entries.assign(static_cast<size_t>(n), std::vector<ExprPtr>(static_cast<size_t>(n)));
            const double r2 = spec.radius * spec.radius;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i != j) {
                        def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] = num(0.0);
                        continue;
                    }
                    ExprPtr e = num(r2);
                    for (int k = 0; k < i; ++k)
                        e = mul(std::move(e),
                                powc(call("sin", id("th" + std::to_string(k + 1))), 2.0));
                    def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
                }
            return def;
        }
        case GeneratorSpec::Kind::product: {
            if (spec.inner.size() != 2) raise(ErrorKind::BadParams, "product needs two factors");
            MetricDefinition a = prefix_definition(generate(spec.inner[0]), "a_");
            MetricDefinition b = prefix_definition(generate(spec.inner[1]), "b_");
            MetricDefinition def;
            def.name = "product";
            def.coords = a.coords;
            def.coords.insert(def.coords.end(), b.coords.begin(), b.coords.end());
            if (def.dim() > 8) raise(ErrorKind::BadParams, "product dimension exceeds 8");
            def.domain_hints = a.domain_hints;
            def.domain_hints.insert(def.domain_hints.end(), b.domain_hints.begin(),
                                    b.domain_hints.end());
            def.constants = a.constants;
            def.constants.insert(b.constants.begin(), b.constants.end());
            def.scalars = a.scalars;
            def.scalars.insert(def.scalars.end(), b.scalars.begin(), b.scalars.end());
            const int na = a.dim(), nb = b.dim(), n = na + nb;
            def.entries.assign(static_cast<size_t>(n), std::vector<ExprPtr>(static_cast<size_t>(n)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i < na && j < na)
                        def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                            a.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    else if (i >= na && j >= na)
                        def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                            b.entries[static_cast<size_t>(i - na)][static_cast<size_t>(j - na)];
                    else
                        def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] = num(0.0);
                }
            return def;
        }
        case GeneratorSpec::Kind::warped: {
            if (spec.inner.size() != 1) raise(ErrorKind::BadParams, "warped needs one base");
            if (spec.warp.empty()) raise(ErrorKind::BadParams, "warped needs a warp function");
            MetricDefinition base = prefix_definition(generate(spec.inner[0]), "s_");
            ExprPtr f = parse_expression(spec.warp);
            // warp must reference only t
            {
                std::vector<std::string> ids;
                collect_identifiers(f, ids);
                for (auto& s : ids)
                    if (s != "t") raise(ErrorKind::BadParams, "warp may reference only t");
            }
            // nowhere-zero check on the declared interval (dense 1D scan)
            {
                std::map<std::string, int> cidx{{"t", 0}};
                for (int k = 0; k <= 200; ++k) {
                    double t = spec.t_interval.first +
                               (spec.t_interval.second - spec.t_interval.first) * k / 200.0;
                    EvalEnv env;
                    env.dim = 1;
                    env.coord_index = &cidx;
                    env.point = &t;
                    if (std::abs(eval_value(f, env)) < 1e-8)
                        raise(ErrorKind::BadParams, "warp function vanishes on the interval");
                }
            }
            MetricDefinition def;
            def.name = "warped";
            def.coords.push_back("t");
            def.coords.insert(def.coords.end(), base.coords.begin(), base.coords.end());
            if (def.dim() > 8) raise(ErrorKind::BadParams, "warped dimension exceeds 8");
            def.domain_hints.push_back(spec.t_interval);
            def.domain_hints.insert(def.domain_hints.end(), base.domain_hints.begin(),
                                    base.domain_hints.end());
            def.constants = base.constants;
            def.scalars = base.scalars;
            const int nb = base.dim(), n = nb + 1;
            ExprPtr f2 = powc(f, 2.0);
            def.entries.assign(static_cast<size_t>(n), std::vector<ExprPtr>(static_cast<size_t>(n)));
            def.entries[0][0] = num(1.0);
            for (int j = 1; j < n; ++j) {
                def.entries[0][static_cast<size_t>(j)] = num(0.0);
                def.entries[static_cast<size_t>(j)][0] = num(0.0);
            }
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j) {
                    const ExprPtr& e = base.entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
                    bool zero = (e->kind == Expr::Kind::Number && e->number == 0.0);
                    def.entries[static_cast<size_t>(i + 1)][static_cast<size_t>(j + 1)] =
                        zero ? e : mul(f2, e);
                }
            return def;
        }
        case GeneratorSpec::Kind::t11: {
            // (1/9)(dpsi + cos th1 dph1 + cos th2 dph2)^2
            //   + (1/6) sum_i (dth_i^2 + sin^2 th_i dph_i^2); Ric = 4 g
            MetricDefinition def;
            def.name = "t11";
            def.coords = {"psi", "th1", "ph1", "th2", "ph2"};
            def.domain_hints = {std::make_pair(0.1, 12.4), std::make_pair(0.35, 2.79),
                                std::make_pair(0.1, 6.18), std::make_pair(0.35, 2.79),
                                std::make_pair(0.1, 6.18)};
            auto c1 = call("cos", id("th1"));
            auto c2 = call("cos", id("th2"));
            auto s1 = call("sin", id("th1"));
            auto s2 = call("sin", id("th2"));
            const double k9 = 1.0 / 9.0, k6 = 1.0 / 6.0;
            def.entries.assign(5, std::vector<ExprPtr>(5, num(0.0)));
            auto set = [&](int i, int j, ExprPtr e) {
                def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
                def.entries[static_cast<size_t>(j)][static_cast<size_t>(i)] = e;
            };
            set(0, 0, num(k9));
            set(0, 2, mul(num(k9), c1));
            set(0, 4, mul(num(k9), c2));
            set(1, 1, num(k6));
            set(3, 3, num(k6));
            set(2, 2, add(mul(num(k9), powc(c1, 2.0)), mul(num(k6), powc(s1, 2.0))));
            set(4, 4, add(mul(num(k9), powc(c2, 2.0)), mul(num(k6), powc(s2, 2.0))));
            set(2, 4, mul(mul(num(k9), c1), c2));
            return def;
        }
        case GeneratorSpec::Kind::schwarzschild_product: {
            if (!(spec.mass > 0.0) || !(spec.r_interval.first > 2.0 * spec.mass))
                raise(ErrorKind::BadParams, "schwarzschild needs m > 0 and r interval beyond 2m");
            MetricDefinition def;
            def.name = "r2_schwarzschild";
            def.coords = {"u", "v", "tau", "r", "th", "ph"};
            def.domain_hints = {std::make_pair(-2.0, 2.0), std::make_pair(-2.0, 2.0),
                                std::make_pair(-2.0, 2.0), spec.r_interval,
                                std::make_pair(0.4, 2.74), std::make_pair(0.1, 6.18)};
            def.constants["m"] = spec.mass;
            ExprPtr lapse = add(num(1.0), Expr::make_unary(Expr::Kind::Neg,
                                                           div(mul(num(2.0), id("m")), id("r"))));
            def.entries.assign(6, std::vector<ExprPtr>(6, num(0.0)));
            auto set = [&](int i, ExprPtr e) { def.entries[static_cast<size_t>(i)][static_cast<size_t>(i)] = e; };
            set(0, num(1.0));
            set(1, num(1.0));
            set(2, lapse);
            set(3, div(num(1.0), lapse));
            set(4, powc(id("r"), 2.0));
            set(5, mul(powc(id("r"), 2.0), powc(call("sin", id("th")), 2.0)));
            return def;
        }
        case GeneratorSpec::Kind::conformal_rescale: {
            if (spec.inner.size() != 1 || spec.phi.empty())
                raise(ErrorKind::BadParams, "conformal_rescale needs inner spec and phi");
            MetricDefinition inner = generate(spec.inner[0]);
            ExprPtr phi = parse_expression(spec.phi);
            std::vector<std::string> ids;
            collect_identifiers(phi, ids);
            std::set<std::string> known(inner.coords.begin(), inner.coords.end());
            for (auto& [k, v] : inner.constants) known.insert(k);
            for (auto& [k, v] : inner.scalars) known.insert(k);
            for (auto& s : ids)
                if (!known.count(s))
                    raise(ErrorKind::UnknownSymbol, "phi references undeclared '" + s + "'");
            return conformal_rescale_def(inner, phi);
        }
    }
    raise(ErrorKind::BadKind, "unknown generator kind");
}

inline std::string describe(const GeneratorSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    switch (spec.kind) {
        case GeneratorSpec::Kind::flat: os << "flat(" << spec.dim << ")"; break;
        case GeneratorSpec::Kind::sphere: os << "sphere(" << spec.dim << "," << spec.radius << ")"; break;
        case GeneratorSpec::Kind::product:
            os << "product(" << describe(spec.inner[0]) << "," << describe(spec.inner[1]) << ")";
            break;
        case GeneratorSpec::Kind::warped:
            os << "warped(" << spec.warp << ",[" << spec.t_interval.first << ","
               << spec.t_interval.second << "]," << describe(spec.inner[0]) << ")";
            break;
        case GeneratorSpec::Kind::t11: os << "t11"; break;
        case GeneratorSpec::Kind::schwarzschild_product:
            os << "r2xschw(m=" << spec.mass << ",r=[" << spec.r_interval.first << ","
               << spec.r_interval.second << "])";
            break;
        case GeneratorSpec::Kind::conformal_rescale:
            os << "rescale(" << spec.phi << "," << describe(spec.inner[0]) << ")";
            break;
    }
    return os.str();
}

inline std::string spec_hash(const GeneratorSpec& spec) {
    const std::string d = describe(spec);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : d) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf).substr(0, 8);
}

// ----------------------------------------------------------------------
// warped-product curvature identities
// ----------------------------------------------------------------------

struct WarpedIdentityRecord {
    double tangential_max = 0.0;  // R = R* - (f'^2/f^2) (g(Y,Z)X - g(X,Z)Y) on base slots
    double radial_zero_max = 0.0; // R(X,Y) d_t = 0
    double radial_accel_max = 0.0;// R(X,d_t) d_t = -(f''/f) X
    double warp_equation_max = 0.0; // |f'^2 + rho f^2 - rho*|
    double einstein_max = 0.0;      // |Ric - (n-1) rho g|
    int samples = 0;
};

inline WarpedIdentityRecord warped_identities_check(const GeneratorSpec& spec, int samples,
                                                    std::uint64_t seed) {
    if (spec.kind != GeneratorSpec::Kind::warped)
        raise(ErrorKind::BadKind, "warped_identities_check needs a warped spec");
    MetricDefinition full = generate(spec);
    MetricDefinition base = gen_detail::prefix_definition(generate(spec.inner[0]), "s_");
    ExprPtr f_expr = parse_expression(spec.warp);
    std::map<std::string, int> tindex{{"t", 0}};

    const int n = full.dim();
    const int nb = base.dim();
    WarpedIdentityRecord rec;
    rec.samples = samples;

    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd p = sample_point(full, seed, s);
        auto mj = evaluate_metric_jets(full, p, 2);
        auto cb = curvature_bundle(mj, false);
        Eigen::VectorXd pb = p.tail(nb);
        auto mjb = evaluate_metric_jets(base, pb, 2);
        auto cbb = curvature_bundle(mjb, false);

        EvalEnv fenv;
        fenv.dim = 1;
        fenv.coord_index = &tindex;
        fenv.point = p.data(); // slot 0 is t
        Jet3 fj = jet_eval(f_expr, fenv);
        const double f = fj.value(), fp = fj.grad(0), fpp = fj.hess(0, 0);

        // (1,3) curvature operators: R^e_{abd} = g^{ec} R_{abcd}
        auto riem_up = [](const CurvatureBundle& b) {
            const int m = b.n;
            Tensor4 up(m);
            for (int e = 0; e < m; ++e)
                for (int a = 0; a < m; ++a)
                    for (int bb = 0; bb < m; ++bb)
                        for (int d = 0; d < m; ++d) {
                            double v = 0.0;
                            for (int c = 0; c < m; ++c) v += b.g_inv(e, c) * b.riemann(a, bb, c, d);
                            up(e, a, bb, d) = v;
                        }
            return up;
        };
        Tensor4 up = riem_up(cb), upb = riem_up(cbb);

        const double w2 = (fp * fp) / (f * f);
        for (int a = 1; a < n; ++a)
            for (int b = 1; b < n; ++b)
                for (int d = 1; d < n; ++d) {
                    for (int e = 1; e < n; ++e) {
                        double kron_a = (e == a) ? 1.0 : 0.0;
                        double kron_b = (e == b) ? 1.0 : 0.0;
                        double expected = upb(e - 1, a - 1, b - 1, d - 1) -
                                          w2 * (cb.g(b, d) * kron_a - cb.g(a, d) * kron_b);
                        rec.tangential_max =
                            std::max(rec.tangential_max, std::abs(up(e, a, b, d) - expected));
                    }
                    // t-component of R(X,Y)Z for tangential X,Y,Z also vanishes
                    rec.tangential_max = std::max(rec.tangential_max, std::abs(up(0, a, b, d)));
                }
        for (int a = 1; a < n; ++a)
            for (int b = 1; b < n; ++b)
                for (int e = 0; e < n; ++e)
                    rec.radial_zero_max = std::max(rec.radial_zero_max, std::abs(up(e, a, b, 0)));
        for (int a = 1; a < n; ++a)
            for (int e = 0; e < n; ++e) {
                double kron = (e == a) ? 1.0 : 0.0;
                rec.radial_accel_max = std::max(
                    rec.radial_accel_max, std::abs(up(e, a, 0, 0) - (-(fpp / f) * kron)));
            }
        rec.warp_equation_max =
            std::max(rec.warp_equation_max, std::abs(fp * fp + cb.rho * f * f - cbb.rho));
        Eigen::MatrixXd eres = cb.ricci - (n - 1) * cb.rho * cb.g;
        rec.einstein_max = std::max(rec.einstein_max, eres.cwiseAbs().maxCoeff());
    }
    return rec;
}

} // namespace weylscope
