#pragma once

// Truncated multivariate Taylor arithmetic to order 3. A Jet3 carries the
// value, gradient, symmetric Hessian and fully symmetric third-order
// coefficients of a scalar quantity in `dim` chart variables. All propagation
// rules are exact (Leibniz / Faa di Bruno); there is no finite differencing
// anywhere in this module.

#include "weylscope/errors.hpp"

#include <cassert>
#include <cmath>
#include <vector>

namespace weylscope {

namespace jet_detail {

// canonical index into the symmetric-reduced Hessian, requires i <= j
inline int hess_index(int n, int i, int j) {
    return i * n - i * (i - 1) / 2 + (j - i);
}

inline int hess_size(int n) { return n * (n + 1) / 2; }

// canonical index into the symmetric-reduced third-order block, i <= j <= k
inline int third_index(int n, int i, int j, int k) {
    // triples with first index < i, then pair index within the (n - i)-block
    int offset = 0;
    for (int r = 0; r < i; ++r) {
        int m = n - r;
        offset += m * (m + 1) / 2;
    }
    return offset + hess_index(n - i, j - i, k - i);
}

inline int third_size(int n) { return n * (n + 1) * (n + 2) / 6; }

inline void sort2(int& i, int& j) {
    if (i > j) std::swap(i, j);
}

inline void sort3(int& i, int& j, int& k) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
}

} // namespace jet_detail

class Jet3 {
public:
    Jet3() : dim_(0), order_(3), value_(0.0) {}

    Jet3(int dim, int order = 3)
        : dim_(dim), order_(order), value_(0.0),
          grad_(static_cast<size_t>(dim), 0.0),
          hess_(order >= 2 ? static_cast<size_t>(jet_detail::hess_size(dim)) : 0, 0.0),
          third_(order >= 3 ? static_cast<size_t>(jet_detail::third_size(dim)) : 0, 0.0) {
        assert(dim >= 0 && order >= 1 && order <= 3);
    }

    static Jet3 constant(int dim, double v, int order = 3) {
        Jet3 j(dim, order);
        j.value_ = v;
        return j;
    }

    // seed of the i-th chart coordinate: grad = e_i, hess = third = 0
    static Jet3 coordinate(int dim, int i, double v, int order = 3) {
        Jet3 j(dim, order);
        j.value_ = v;
        j.grad_[static_cast<size_t>(i)] = 1.0;
        return j;
    }

    int dim() const { return dim_; }
    int order() const { return order_; }

    double value() const { return value_; }
    double& value() { return value_; }

    double grad(int i) const { return grad_[static_cast<size_t>(i)]; }
    double& grad(int i) { return grad_[static_cast<size_t>(i)]; }

    double hess(int i, int j) const {
        if (order_ < 2) return 0.0;
        jet_detail::sort2(i, j);
        return hess_[static_cast<size_t>(jet_detail::hess_index(dim_, i, j))];
    }
    void set_hess(int i, int j, double v) {
        jet_detail::sort2(i, j);
        hess_[static_cast<size_t>(jet_detail::hess_index(dim_, i, j))] = v;
    }

    double third(int i, int j, int k) const {
        if (order_ < 3) return 0.0;
        jet_detail::sort3(i, j, k);
        return third_[static_cast<size_t>(jet_detail::third_index(dim_, i, j, k))];
    }
    void set_third(int i, int j, int k, double v) {
        jet_detail::sort3(i, j, k);
        third_[static_cast<size_t>(jet_detail::third_index(dim_, i, j, k))] = v;
    }

    // ------------------------------------------------------------------
    // ring operations
    // ------------------------------------------------------------------

    Jet3& operator+=(const Jet3& o) {
        check_compatible(o);
        value_ += o.value_;
        for (size_t i = 0; i < grad_.size(); ++i) grad_[i] += o.grad_[i];
        for (size_t i = 0; i < hess_.size(); ++i) hess_[i] += o.hess_[i];
        for (size_t i = 0; i < third_.size(); ++i) third_[i] += o.third_[i];
        return *this;
    }

    Jet3& operator-=(const Jet3& o) {
        check_compatible(o);
        value_ -= o.value_;
        for (size_t i = 0; i < grad_.size(); ++i) grad_[i] -= o.grad_[i];
        for (size_t i = 0; i < hess_.size(); ++i) hess_[i] -= o.hess_[i];
        for (size_t i = 0; i < third_.size(); ++i) third_[i] -= o.third_[i];
        return *this;
    }

    Jet3& operator*=(double s) {
        value_ *= s;
        for (auto& v : grad_) v *= s;
        for (auto& v : hess_) v *= s;
        for (auto& v : third_) v *= s;
        return *this;
    }

    friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
    friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
    friend Jet3 operator+(Jet3 a, double s) { a.value_ += s; return a; }
    friend Jet3 operator+(double s, Jet3 a) { a.value_ += s; return a; }
    friend Jet3 operator-(Jet3 a, double s) { a.value_ -= s; return a; }
    friend Jet3 operator-(double s, const Jet3& a) { return (-a) + s; }
    friend Jet3 operator*(Jet3 a, double s) { return a *= s; }
    friend Jet3 operator*(double s, Jet3 a) { return a *= s; }
    friend Jet3 operator/(Jet3 a, double s) { return a *= (1.0 / s); }

    Jet3 operator-() const {
        Jet3 r = *this;
        r *= -1.0;
        return r;
    }

    // Leibniz product, truncated at the carried order
    friend Jet3 operator*(const Jet3& a, const Jet3& b) {
        a.check_compatible(b);
        const int n = a.dim_;
        Jet3 r(n, a.order_);
        r.value_ = a.value_ * b.value_;
        for (int i = 0; i < n; ++i)
            r.grad_[static_cast<size_t>(i)] =
                a.grad_[static_cast<size_t>(i)] * b.value_ + a.value_ * b.grad_[static_cast<size_t>(i)];
        if (a.order_ >= 2) {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    double v = a.hess(i, j) * b.value_ + a.value_ * b.hess(i, j) +
                               a.grad(i) * b.grad(j) + a.grad(j) * b.grad(i);
                    r.set_hess(i, j, v);
                }
        }
        if (a.order_ >= 3) {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    for (int k = j; k < n; ++k) {
                        double v = a.third(i, j, k) * b.value_ + a.value_ * b.third(i, j, k) +
                                   a.hess(i, j) * b.grad(k) + a.hess(i, k) * b.grad(j) +
                                   a.hess(j, k) * b.grad(i) +
                                   a.grad(i) * b.hess(j, k) + a.grad(j) * b.hess(i, k) +
                                   a.grad(k) * b.hess(i, j);
                        r.set_third(i, j, k, v);
                    }
        }
        return r;
    }

    Jet3& operator*=(const Jet3& o) { return *this = *this * o; }

    friend Jet3 operator/(const Jet3& a, const Jet3& b) {
        if (std::abs(b.value_) < 1e-300)
            raise(ErrorKind::DivisionNearZero, "divisor magnitude below 1e-300");
        const double inv = 1.0 / b.value_;
        // reciprocal via the truncated series of u -> 1/u
        Jet3 rec = compose(b, inv, -inv * inv, 2.0 * inv * inv * inv,
                           -6.0 * inv * inv * inv * inv);
        return a * rec;
    }

    Jet3& operator/=(const Jet3& o) { return *this = *this / o; }

    // univariate composition h(f) given h and its derivatives at f.value
    // (Faa di Bruno truncated at order 3)
    static Jet3 compose(const Jet3& f, double h0, double h1, double h2, double h3) {
        const int n = f.dim_;
        Jet3 r(n, f.order_);
        r.value_ = h0;
        for (int i = 0; i < n; ++i) r.grad(i) = h1 * f.grad(i);
        if (f.order_ >= 2) {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    r.set_hess(i, j, h1 * f.hess(i, j) + h2 * f.grad(i) * f.grad(j));
        }
        if (f.order_ >= 3) {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j)
                    for (int k = j; k < n; ++k) {
                        double v = h1 * f.third(i, j, k) +
                                   h2 * (f.hess(i, j) * f.grad(k) + f.hess(i, k) * f.grad(j) +
                                         f.hess(j, k) * f.grad(i)) +
                                   h3 * f.grad(i) * f.grad(j) * f.grad(k);
                        r.set_third(i, j, k, v);
                    }
        }
        return r;
    }

    // Coordinate derivative as a jet: one order is consumed, the result is
    // valid to order() - 1 (its top coefficients are zero-filled).
    Jet3 shift(int a) const {
        Jet3 r(dim_, order_);
        r.value_ = grad(a);
        if (order_ >= 2)
            for (int i = 0; i < dim_; ++i) r.grad(i) = hess(a, i);
        if (order_ >= 3)
            for (int i = 0; i < dim_; ++i)
                for (int j = i; j < dim_; ++j) r.set_hess(i, j, third(a, i, j));
        return r;
    }

private:
    void check_compatible(const Jet3& o) const {
        if (dim_ != o.dim_ || order_ != o.order_)
            raise(ErrorKind::ShapeMismatch, "jet dimension/order mismatch");
    }

    int dim_;
    int order_;
    double value_;
    std::vector<double> grad_;
    std::vector<double> hess_;
    std::vector<double> third_;
};

// ----------------------------------------------------------------------
// elementary functions
// ----------------------------------------------------------------------

inline Jet3 exp(const Jet3& f) {
    const double e = std::exp(f.value());
    return Jet3::compose(f, e, e, e, e);
}

inline Jet3 log(const Jet3& f) {
    const double v = f.value();
    if (!(v > 0.0)) raise(ErrorKind::DomainError, "log of non-positive value");
    const double inv = 1.0 / v;
    return Jet3::compose(f, std::log(v), inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet3 sqrt(const Jet3& f) {
    const double v = f.value();
    if (!(v > 0.0)) raise(ErrorKind::DomainError, "sqrt of non-positive value");
    const double s = std::sqrt(v);
    return Jet3::compose(f, s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v));
}

inline Jet3 sin(const Jet3& f) {
    const double s = std::sin(f.value()), c = std::cos(f.value());
    return Jet3::compose(f, s, c, -s, -c);
}

inline Jet3 cos(const Jet3& f) {
    const double s = std::sin(f.value()), c = std::cos(f.value());
    return Jet3::compose(f, c, -s, -c, s);
}

inline Jet3 tan(const Jet3& f) {
    const double t = std::tan(f.value());
    const double d1 = 1.0 + t * t;
    return Jet3::compose(f, t, d1, 2.0 * t * d1, 2.0 * d1 * (1.0 + 3.0 * t * t));
}

inline Jet3 sinh(const Jet3& f) {
    const double s = std::sinh(f.value()), c = std::cosh(f.value());
    return Jet3::compose(f, s, c, s, c);
}

inline Jet3 cosh(const Jet3& f) {
    const double s = std::sinh(f.value()), c = std::cosh(f.value());
    return Jet3::compose(f, c, s, c, s);
}

// power with constant (real) exponent
inline Jet3 pow(const Jet3& f, double c) {
    const double v = f.value();
    const bool integral = (c == std::floor(c)) && std::abs(c) < 1e9;
    if (v < 0.0 && !integral)
        raise(ErrorKind::DomainError, "fractional power of negative value");
    auto coeff_pow = [&](double coeff, double expo) -> double {
        if (coeff == 0.0) return 0.0;
        if (v == 0.0 && expo < 0.0)
            raise(ErrorKind::DomainError, "negative power of zero");
        return coeff * std::pow(v, expo);
    };
    const double h0 = (v == 0.0 && c == 0.0) ? 1.0 : std::pow(v, c);
    const double h1 = coeff_pow(c, c - 1.0);
    const double h2 = coeff_pow(c * (c - 1.0), c - 2.0);
    const double h3 = coeff_pow(c * (c - 1.0) * (c - 2.0), c - 3.0);
    return Jet3::compose(f, h0, h1, h2, h3);
}

} // namespace weylscope
