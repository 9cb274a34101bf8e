#pragma once

// The .metric text format and its evaluation to metric jets.
//
// Format (UTF-8, line oriented, '#' starts a comment):
//   name <identifier>                      optional
//   coords x y z                           2..8 coordinates
//   const m = 1.0                          user constants
//   domain x in (0, 3.14)                  optional open-interval hints
//   scalar phi = 0.3*sin(x)               named scalar fields
//   g = [[1, 0], [0, sin(x)^2]]           row-major; lower triangle optional
//
// Matrix rows may give either all n entries or only the upper-triangle tail
// (n - i entries for row i). When both triangles are present they must agree
// structurally after canonicalization.

#include "weylscope/errors.hpp"
#include "weylscope/expr.hpp"
#include "weylscope/jet.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace weylscope {

struct MetricDefinition {
    std::string name = "metric";
    std::vector<std::string> coords;
    std::vector<std::optional<std::pair<double, double>>> domain_hints;
    std::vector<std::vector<ExprPtr>> entries; // n x n, symmetric by construction
    std::vector<std::pair<std::string, ExprPtr>> scalars; // declaration order
    std::map<std::string, double> constants;

    int dim() const { return static_cast<int>(coords.size()); }

    std::map<std::string, int> coord_index() const {
        std::map<std::string, int> m;
        for (int i = 0; i < dim(); ++i) m[coords[static_cast<size_t>(i)]] = i;
        return m;
    }

    std::map<std::string, ExprPtr> scalar_map() const {
        std::map<std::string, ExprPtr> m;
        for (auto& [k, v] : scalars) m[k] = v;
        return m;
    }
};

struct MetricJet {
    Eigen::VectorXd point;
    int n = 0;
    int order = 3;
    std::vector<Jet3> g;          // n*n row-major, symmetric
    Eigen::MatrixXd g_values;
    Eigen::MatrixXd g_inv;        // values only
    std::vector<Jet3> g_inv_jets; // n*n row-major

    const Jet3& gj(int i, int j) const { return g[static_cast<size_t>(i * n + j)]; }
    const Jet3& ginvj(int i, int j) const { return g_inv_jets[static_cast<size_t>(i * n + j)]; }
};

// ----------------------------------------------------------------------
// parsing
// ----------------------------------------------------------------------

namespace metric_detail {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

// split a bracketed matrix literal into row texts and each row into entries
inline std::vector<std::vector<std::string>> split_matrix_literal(const std::string& text,
                                                                  int line0) {
    std::vector<std::vector<std::string>> rows;
    int depth = 0;
    std::vector<std::string> row;
    std::string cur;
    bool in_row = false;
    for (char c : text) {
        if (c == '[') {
            ++depth;
            if (depth == 1) continue;       // outer bracket
            if (depth == 2) {               // row start
                in_row = true;
                row.clear();
                cur.clear();
                continue;
            }
        }
        if (c == ']') {
            --depth;
            if (depth < 0)
                raise(ErrorKind::ParseError,
                      "unbalanced ']' in matrix literal near line " + std::to_string(line0));
            if (depth == 1) { // row end
                if (!trim(cur).empty()) row.push_back(trim(cur));
                rows.push_back(row);
                in_row = false;
                cur.clear();
                continue;
            }
            if (depth == 0) continue; // outer close
        }
        if (c == ',' && depth == 2) {
            row.push_back(trim(cur));
            cur.clear();
            continue;
        }
        if (c == ',' && depth == 1) continue; // between rows
        if (depth >= 1) cur += c;
    }
    if (depth != 0)
        raise(ErrorKind::ParseError,
              "unbalanced brackets in matrix literal near line " + std::to_string(line0));
    (void)in_row;
    return rows;
}

} // namespace metric_detail

inline MetricDefinition parse_metric(const std::string& text) {
    using metric_detail::strip_comment;
    using metric_detail::trim;
    using metric_detail::valid_identifier;

    MetricDefinition def;
    bool have_coords = false, have_g = false;
    std::vector<std::vector<ExprPtr>> rows;
    std::map<std::string, std::pair<double, double>> pending_domains;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;

        std::istringstream ls(body);
        std::string keyword;
        ls >> keyword;

        if (keyword == "name") {
            std::string n;
            ls >> n;
            if (!valid_identifier(n))
                raise(ErrorKind::ParseError, "bad name at line " + std::to_string(lineno));
            def.name = n;
        } else if (keyword == "coords") {
            if (have_coords)
                raise(ErrorKind::ParseError, "duplicate coords at line " + std::to_string(lineno));
            std::string c;
            while (ls >> c) {
                if (!valid_identifier(c))
                    raise(ErrorKind::ParseError,
                          "bad coordinate name '" + c + "' at line " + std::to_string(lineno));
                def.coords.push_back(c);
            }
            if (def.coords.size() < 2 || def.coords.size() > 8)
                raise(ErrorKind::ArityError, "coords must list between 2 and 8 names (line " +
                                                 std::to_string(lineno) + ")");
            have_coords = true;
        } else if (keyword == "const") {
            std::string n, eq;
            ls >> n >> eq;
            if (!valid_identifier(n) || eq != "=")
                raise(ErrorKind::ParseError, "bad const at line " + std::to_string(lineno));
            std::string rest;
            std::getline(ls, rest);
            ExprPtr e = parse_expression(rest, lineno, 1);
            def.constants[n] = eval_constant(e, &def.constants);
        } else if (keyword == "domain") {
            std::string c, kw;
            ls >> c >> kw;
            std::string rest;
            std::getline(ls, rest);
            rest = trim(rest);
            if (kw != "in" || rest.size() < 2 || rest.front() != '(' || rest.back() != ')')
                raise(ErrorKind::ParseError, "bad domain at line " + std::to_string(lineno));
            std::string inner = rest.substr(1, rest.size() - 2);
            auto comma = inner.find(',');
            if (comma == std::string::npos)
                raise(ErrorKind::ParseError, "bad domain interval at line " + std::to_string(lineno));
            double lo = eval_constant(parse_expression(inner.substr(0, comma), lineno, 1),
                                      &def.constants);
            double hi = eval_constant(parse_expression(inner.substr(comma + 1), lineno, 1),
                                      &def.constants);
            if (!(lo < hi))
                raise(ErrorKind::ParseError,
                      "empty domain interval at line " + std::to_string(lineno));
            pending_domains[c] = {lo, hi};
        } else if (keyword == "scalar") {
            std::string n, eq;
            ls >> n >> eq;
            if (!valid_identifier(n) || eq != "=")
                raise(ErrorKind::ParseError, "bad scalar at line " + std::to_string(lineno));
            std::string rest;
            std::getline(ls, rest);
            def.scalars.emplace_back(n, parse_expression(rest, lineno, 1));
        } else if (keyword == "g") {
            std::string eq;
            ls >> eq;
            if (eq != "=")
                raise(ErrorKind::ParseError, "expected 'g =' at line " + std::to_string(lineno));
            std::string rest;
            std::getline(ls, rest);
            std::string literal = rest;
            // accumulate lines until brackets balance
            auto balance = [](const std::string& s) {
                int d = 0;
                for (char ch : s) {
                    if (ch == '[') ++d;
                    if (ch == ']') --d;
                }
                return d;
            };
            int firstline = lineno;
            while (balance(literal) != 0 && std::getline(in, line)) {
                ++lineno;
                literal += "\n" + strip_comment(line);
            }
            if (balance(literal) != 0)
                raise(ErrorKind::ParseError,
                      "unterminated matrix literal starting at line " + std::to_string(firstline));
            auto cells = metric_detail::split_matrix_literal(literal, firstline);
            rows.reserve(cells.size());
            for (auto& r : cells) {
                std::vector<ExprPtr> row;
                row.reserve(r.size());
                for (auto& cell : r) row.push_back(parse_expression(cell, firstline, 1));
                rows.push_back(std::move(row));
            }
            have_g = true;
        } else {
            raise(ErrorKind::ParseError,
                  "unknown section '" + keyword + "' at line " + std::to_string(lineno));
        }
    }

    if (!have_coords) raise(ErrorKind::ParseError, "missing coords section");
    if (!have_g) raise(ErrorKind::ParseError, "missing g section");

    const int n = def.dim();
    def.domain_hints.assign(static_cast<size_t>(n), std::nullopt);
    auto cindex = def.coord_index();
    for (auto& [c, iv] : pending_domains) {
        auto it = cindex.find(c);
        if (it == cindex.end())
            raise(ErrorKind::UnknownSymbol, "domain for undeclared coordinate '" + c + "'");
        def.domain_hints[static_cast<size_t>(it->second)] = iv;
    }

    if (static_cast<int>(rows.size()) != n)
        raise(ErrorKind::ArityError, "g has " + std::to_string(rows.size()) + " rows, expected " +
                                         std::to_string(n));
    // assemble with symmetric completion
    std::vector<std::vector<ExprPtr>> full(static_cast<size_t>(n),
                                           std::vector<ExprPtr>(static_cast<size_t>(n)));
    std::vector<std::vector<bool>> given(static_cast<size_t>(n),
                                         std::vector<bool>(static_cast<size_t>(n), false));
    for (int i = 0; i < n; ++i) {
        auto& r = rows[static_cast<size_t>(i)];
        if (static_cast<int>(r.size()) == n) {
            for (int j = 0; j < n; ++j) {
                full[static_cast<size_t>(i)][static_cast<size_t>(j)] = r[static_cast<size_t>(j)];
                given[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
            }
        } else if (static_cast<int>(r.size()) == n - i) {
            for (int j = i; j < n; ++j) {
                full[static_cast<size_t>(i)][static_cast<size_t>(j)] = r[static_cast<size_t>(j - i)];
                given[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;
            }
        } else {
            raise(ErrorKind::ArityError, "g row " + std::to_string(i) + " has " +
                                             std::to_string(r.size()) + " entries, expected " +
                                             std::to_string(n) + " or " + std::to_string(n - i));
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const bool up = given[static_cast<size_t>(i)][static_cast<size_t>(j)];
            const bool lo = given[static_cast<size_t>(j)][static_cast<size_t>(i)];
            ExprPtr e;
            if (up && lo && i != j) {
                if (!canonical_equal(full[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                     full[static_cast<size_t>(j)][static_cast<size_t>(i)]))
                    raise(ErrorKind::SymmetryError,
                          "g[" + std::to_string(i) + "][" + std::to_string(j) + "] and g[" +
                              std::to_string(j) + "][" + std::to_string(i) +
                              "] differ after canonicalization");
                e = full[static_cast<size_t>(i)][static_cast<size_t>(j)];
            } else if (up) {
                e = full[static_cast<size_t>(i)][static_cast<size_t>(j)];
            } else if (lo) {
                e = full[static_cast<size_t>(j)][static_cast<size_t>(i)];
            } else {
                raise(ErrorKind::ArityError, "g[" + std::to_string(i) + "][" + std::to_string(j) +
                                                 "] missing");
            }
            def.entries.resize(static_cast<size_t>(n));
            for (auto& row : def.entries) row.resize(static_cast<size_t>(n));
            def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
            def.entries[static_cast<size_t>(j)][static_cast<size_t>(i)] = e;
        }

    // identifier validation: coordinates, constants, previously declared scalars
    std::set<std::string> known(def.coords.begin(), def.coords.end());
    for (auto& [k, v] : def.constants) known.insert(k);
    auto check_expr = [&](const ExprPtr& e, const std::string& where) {
        std::vector<std::string> ids;
        collect_identifiers(e, ids);
        for (auto& id : ids)
            if (!known.count(id))
                raise(ErrorKind::UnknownSymbol,
                      "undeclared identifier '" + id + "' in " + where);
    };
    for (auto& [sname, sexpr] : def.scalars) {
        check_expr(sexpr, "scalar " + sname);
        known.insert(sname);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            check_expr(def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)],
                       "g[" + std::to_string(i) + "][" + std::to_string(j) + "]");

    return def;
}

inline std::string render_metric(const MetricDefinition& def) {
    std::ostringstream os;
    os << "name " << def.name << "\n";
    os << "coords";
    for (auto& c : def.coords) os << " " << c;
    os << "\n";
    for (auto& [k, v] : def.constants)
        os << "const " << k << " = " << expr_detail::format_number(v) << "\n";
    for (int i = 0; i < def.dim(); ++i)
        if (def.domain_hints[static_cast<size_t>(i)]) {
            auto [lo, hi] = *def.domain_hints[static_cast<size_t>(i)];
            os << "domain " << def.coords[static_cast<size_t>(i)] << " in ("
               << expr_detail::format_number(lo) << ", " << expr_detail::format_number(hi)
               << ")\n";
        }
    for (auto& [k, e] : def.scalars) os << "scalar " << k << " = " << render(e) << "\n";
    os << "g = [";
    for (int i = 0; i < def.dim(); ++i) {
        os << (i == 0 ? "" : "     ") << "[";
        for (int j = 0; j < def.dim(); ++j) {
            os << render(def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            if (j + 1 < def.dim()) os << ", ";
        }
        os << "]";
        if (i + 1 < def.dim()) os << ",\n";
    }
    os << "]\n";
    return os.str();
}

// ----------------------------------------------------------------------
// evaluation to jets
// ----------------------------------------------------------------------

inline bool point_in_domain(const MetricDefinition& def, const Eigen::VectorXd& point,
                            double margin = 0.0) {
    for (int i = 0; i < def.dim(); ++i)
        if (def.domain_hints[static_cast<size_t>(i)]) {
            auto [lo, hi] = *def.domain_hints[static_cast<size_t>(i)];
            if (!(point[i] > lo + margin && point[i] < hi - margin)) return false;
        }
    return true;
}

inline MetricJet evaluate_metric_jets(const MetricDefinition& def, const Eigen::VectorXd& point,
                                      int order = 3) {
    const int n = def.dim();
    if (point.size() != n)
        raise(ErrorKind::ShapeMismatch, "point dimension does not match chart");
    if (!point_in_domain(def, point))
        raise(ErrorKind::DomainError, "point outside declared domain hints");

    auto cindex = def.coord_index();
    auto smap = def.scalar_map();
    EvalEnv env;
    env.dim = n;
    env.coord_index = &cindex;
    env.point = point.data();
    env.constants = &def.constants;
    env.scalars = &smap;
    env.order = order;

    MetricJet mj;
    mj.point = point;
    mj.n = n;
    mj.order = order;
    mj.g.assign(static_cast<size_t>(n * n), Jet3(n, order));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Jet3 e = jet_eval(def.entries[static_cast<size_t>(i)][static_cast<size_t>(j)], env);
            mj.g[static_cast<size_t>(i * n + j)] = e;
            mj.g[static_cast<size_t>(j * n + i)] = e;
        }

    mj.g_values.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mj.g_values(i, j) = mj.gj(i, j).value();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mj.g_values);
    const double emin = es.eigenvalues().minCoeff();
    const double emax = es.eigenvalues().maxCoeff();
    if (!(emin > 1e-10 * std::max(emax, 0.0)))
        raise(ErrorKind::NotPositiveDefinite,
              "metric not positive definite at point (min eigenvalue " + std::to_string(emin) +
                  ")");

    mj.g_inv = mj.g_values.inverse();

    // jet inverse by Gauss-Jordan elimination in jet arithmetic
    std::vector<Jet3> a(mj.g);
    std::vector<Jet3> inv(static_cast<size_t>(n * n), Jet3(n, order));
    for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i * n + i)] = Jet3::constant(n, 1.0, order);
    auto A = [&](int i, int j) -> Jet3& { return a[static_cast<size_t>(i * n + j)]; };
    auto B = [&](int i, int j) -> Jet3& { return inv[static_cast<size_t>(i * n + j)]; };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A(r, col).value()) > std::abs(A(pivot, col).value())) pivot = r;
        if (pivot != col)
            for (int j = 0; j < n; ++j) {
                std::swap(A(col, j), A(pivot, j));
                std::swap(B(col, j), B(pivot, j));
            }
        Jet3 piv = A(col, col);
        for (int j = 0; j < n; ++j) {
            A(col, j) = A(col, j) / piv;
            B(col, j) = B(col, j) / piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Jet3 f = A(r, col);
            if (f.value() == 0.0) {
                bool zero = true;
                for (int d = 0; d < n && zero; ++d) zero = (f.grad(d) == 0.0);
                if (zero) continue; // cheap skip for exactly-zero factors
            }
            for (int j = 0; j < n; ++j) {
                A(r, j) -= f * A(col, j);
                B(r, j) -= f * B(col, j);
            }
        }
    }
    mj.g_inv_jets = std::move(inv);
    return mj;
}

} // namespace weylscope
