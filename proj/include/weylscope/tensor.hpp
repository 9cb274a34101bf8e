#pragma once

// Small dense coordinate tensors with all axes of equal length n (n <= 8).

#include <Eigen/Dense>

#include <array>
#include <cassert>
#include <cmath>
#include <vector>

namespace weylscope {

template <int Rank>
class Tensor {
public:
    Tensor() : n_(0) {}
    explicit Tensor(int n) : n_(n), data_(static_cast<size_t>(ipow(n, Rank)), 0.0) {}

    int n() const { return n_; }

    template <typename... Idx>
    double operator()(Idx... idx) const {
        static_assert(sizeof...(Idx) == Rank);
        return data_[flat(idx...)];
    }
    template <typename... Idx>
    double& operator()(Idx... idx) {
        static_assert(sizeof...(Idx) == Rank);
        return data_[flat(idx...)];
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    Tensor& operator+=(const Tensor& o) {
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Tensor& operator-=(const Tensor& o) {
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    Tensor operator*(double s) const {
        Tensor r = *this;
        for (auto& v : r.data_) v *= s;
        return r;
    }

    const std::vector<double>& raw() const { return data_; }
    std::vector<double>& raw() { return data_; }

private:
    static constexpr size_t ipow(int b, int e) {
        size_t r = 1;
        for (int i = 0; i < e; ++i) r *= static_cast<size_t>(b);
        return r;
    }
    template <typename... Idx>
    size_t flat(Idx... idx) const {
        std::array<int, Rank> ix{static_cast<int>(idx)...};
        size_t f = 0;
        for (int r = 0; r < Rank; ++r) {
            assert(ix[static_cast<size_t>(r)] >= 0 && ix[static_cast<size_t>(r)] < n_);
            f = f * static_cast<size_t>(n_) + static_cast<size_t>(ix[static_cast<size_t>(r)]);
        }
        return f;
    }

    int n_;
    std::vector<double> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;

// g-orthonormal frame from the Cholesky factor: columns of L^{-T} satisfy
// F^T g F = I, deterministically and smoothly in g.
inline Eigen::MatrixXd cholesky_frame(const Eigen::MatrixXd& g) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    Eigen::MatrixXd L = llt.matrixL();
    return L.transpose().inverse();
}

} // namespace weylscope
