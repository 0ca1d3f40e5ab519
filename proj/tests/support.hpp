#pragma once

// Seeded generators shared by the unit tests and the acceptance runner.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "orthodraw/orthodraw.hpp"

namespace orthodraw::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    std::uint64_t seed() { return engine_(); }

    Complex complex_normal() { return {normal(), normal()}; }

    /// Modulus log-uniform in [lo, hi], argument uniform.
    Complex complex_log_uniform(double lo, double hi) {
        const double r = std::exp(uniform(std::log(lo), std::log(hi)));
        return std::polar(r, uniform(-std::numbers::pi, std::numbers::pi));
    }

    RealMatrix gaussian(Eigen::Index rows, Eigen::Index cols) {
        RealMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                m(i, j) = normal();
            }
        }
        return m;
    }

    RealVector gaussian(Eigen::Index size) { return gaussian(size, 1).col(0); }

private:
    std::mt19937_64 engine_;
};

inline OrthoFrame random_frame(int n, Rng& rng, double min_scale = 0.1, double max_scale = 10.0) {
    OrthoFrame f;
    f.rotation = random_rotation(n, rng.seed());
    f.scale = rng.uniform(min_scale, max_scale);
    f.translation = rng.gaussian(n);
    return f;
}

/// Random desk-scale simplex: centered singular values in [0.5, 5].
inline RealMatrix random_simplex(int n, Rng& rng) {
    for (;;) {
        RealMatrix a = rng.gaussian(n, n + 1);
        const RealMatrix c = a.colwise() - a.rowwise().mean();
        Eigen::JacobiSVD<RealMatrix> svd(c);
        const RealVector& s = svd.singularValues();
        if (s(s.size() - 1) >= 0.5 && s(0) <= 5.0) {
            return a;
        }
    }
}

inline RealMatrix centered(const RealMatrix& a) { return a.colwise() - a.rowwise().mean(); }

inline PlanarImage planar(const RealMatrix& rows) { return from_real_rows(rows.topRows(2)); }

inline double total_modulus(const PlanarImage& img) {
    double s = 0.0;
    for (const auto& z : img) {
        s += std::abs(z);
    }
    return s;
}

inline PlanarImage translated(PlanarImage img, Complex w) {
    for (auto& z : img) {
        z += w;
    }
    return img;
}

inline PlanarImage scaled(PlanarImage img, Complex l) {
    for (auto& z : img) {
        z *= l;
    }
    return img;
}

/// Relative uniform noise of the given size on every coordinate.
inline PlanarImage perturbed(PlanarImage img, double size, Rng& rng) {
    double scale = 0.0;
    for (const auto& z : img) {
        scale = std::max(scale, std::abs(z));
    }
    for (auto& z : img) {
        z += size * scale * Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    return img;
}

inline const Complex kI{0.0, 1.0};

inline Complex omega() { return std::polar(1.0, 2.0 * std::numbers::pi / 3.0); }

inline PlanarImage integer_cube() { return {{2.0, -26.0}, {-23.0, 2.0}, {14.0, 7.0}}; }

inline PlanarImage isometric_cube() { return {1.0, omega(), omega() * omega()}; }

/// Foci of the ellipse x^t C^{-1} x = 1 with C the 2 x 2 scatter block:
/// +-sqrt(l1 - l2) along the major eigenvector.
inline std::pair<Complex, Complex> eigen_foci(const PlanarImage& z) {
    const RealMatrix rows = to_real_rows(z);
    const RealMatrix c = rows * rows.transpose();
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(c);
    const double l1 = eig.eigenvalues()(1);
    const double l2 = eig.eigenvalues()(0);
    const Complex dir{eig.eigenvectors()(0, 1), eig.eigenvectors()(1, 1)};
    const Complex f = std::sqrt(std::max(l1 - l2, 0.0)) * dir;
    return f.real() >= 0.0 ? std::pair{f, -f} : std::pair{-f, f};
}

}  // namespace orthodraw::testing
