#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace sojourn {

/// Small stack-allocated vector in R^d for trajectory states.
/// Dimensions above kMaxDim are rejected at construction.
struct Vec {
    static constexpr int kMaxDim = 16;

    Vec() = default;
    explicit Vec(int d) : dim_(check_dim(d)) { data_.fill(0.0); }
    Vec(std::initializer_list<double> xs) : dim_(check_dim(static_cast<int>(xs.size()))) {
        int i = 0;
        for (double x : xs) data_[i++] = x;
    }

    int dim() const { return dim_; }
    double& operator[](int i) { return data_[i]; }
    double operator[](int i) const { return data_[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < dim_; ++i) data_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator*(Vec a, double s) { return a *= s; }

  private:
    static int check_dim(int d) {
        if (d < 0 || d > kMaxDim) throw std::invalid_argument("Vec: dimension out of range");
        return d;
    }
    std::array<double, kMaxDim> data_{};
    int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    if (n == 0) throw std::invalid_argument("normalized: zero vector");
    Vec r = a;
    r *= 1.0 / n;
    return r;
}

/// Frobenius norm of the angular-momentum bivector x ∧ ξ.
inline double wedge_norm(const Vec& x, const Vec& xi) {
    double s = 0;
    for (int i = 0; i < x.dim(); ++i)
        for (int j = i + 1; j < x.dim(); ++j) {
            double w = x[i] * xi[j] - x[j] * xi[i];
            s += w * w;
        }
    return std::sqrt(s);
}

/// Signed angle from a to b within the plane oriented by (a, ref): positive when
/// b leans toward ref. Both a and b must be (near-)unit.
inline double signed_angle_in_plane(const Vec& a, const Vec& b, const Vec& ref) {
    double c = dot(a, b);
    double s = dot(b, ref);
    return std::atan2(s, c);
}

}  // namespace sojourn
