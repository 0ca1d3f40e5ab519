#pragma once

// Small dense real/complex linear algebra shared by every other header.
// Matrices here are at most a few dozen entries on a side.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "orthodraw/error.hpp"

namespace orthodraw {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// Ordered images z_1, ..., z_N of projected vertices (or edge vectors).
using PlanarImage = std::vector<Complex>;

/// Acceptance band: a check passes when `residual <= absolute + relative * scale`
/// for the scale appropriate to that check.
struct Tolerance {
    double absolute = 1e-9;
    double relative = 1e-9;

    double bound(double scale) const { return absolute + relative * scale; }

    void validate() const {
        if (!(absolute >= 0.0) || !(relative >= 0.0) || !std::isfinite(absolute) || !std::isfinite(relative)) {
            throw Error(ErrorCode::InvalidInput, "tolerance components must be finite and non-negative");
        }
        if (absolute == 0.0 && relative == 0.0) {
            throw Error(ErrorCode::InvalidInput, "tolerance must not be identically zero");
        }
    }

    /// Same number used for both bands.
    static Tolerance uniform(double tol) { return Tolerance{tol, tol}; }
};

/// Relative-only band for the scale-free image equations.
inline Tolerance image_tolerance() { return Tolerance{0.0, 1e-9}; }

/// Outcome of an image or form test.
struct Verdict {
    bool pass = false;
    double residual = 0.0;                      // magnitude compared against `threshold`
    std::optional<Complex> complex_residual;    // raw left-minus-right, for complex equations
    double normalizer = 1.0;                    // scale fed to Tolerance::bound
    double threshold = 0.0;
    Tolerance tolerance{};
    bool degenerate = false;
    std::string reason;

    double normalized_residual() const { return normalizer > 0.0 ? residual / normalizer : residual; }
};

inline bool all_finite(const RealMatrix& m) { return m.allFinite(); }

inline void require_finite(const RealMatrix& m, const char* what) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " has non-finite entries");
    }
}

inline void require_finite(const PlanarImage& img, const char* what) {
    for (const auto& z : img) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::InvalidInput, std::string(what) + " has non-finite points");
        }
    }
}

inline double max_abs(const RealMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// I - e e^t / k, the orthogonal projector annihilating the all-ones vector.
inline RealMatrix centering_projector(Eigen::Index k) {
    return RealMatrix::Identity(k, k) - RealMatrix::Constant(k, k, 1.0 / static_cast<double>(k));
}

/// Pseudoinverse through the SVD; singular values below
/// 1e-12 * sigma_max count as zero.
inline RealMatrix pseudoinverse(const RealMatrix& m) {
    require_finite(m, "pseudoinverse input");
    if (m.size() == 0) {
        return RealMatrix::Zero(m.cols(), m.rows());
    }
    Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sigma = svd.singularValues();
    const double cutoff = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
    RealVector inv = RealVector::Zero(sigma.size());
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) > cutoff && sigma(i) > 0.0) {
            inv(i) = 1.0 / sigma(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Extends the orthonormal rows of `v` (m x n) to an orthogonal n x n matrix.
/// The first m rows are copied verbatim; the rest come from Gram-Schmidt on
/// e_1, e_2, ... in index order.
inline RealMatrix orthonormal_complete(const RealMatrix& v) {
    require_finite(v, "orthonormal_complete input");
    const Eigen::Index m = v.rows();
    const Eigen::Index n = v.cols();
    if (m > n) {
        throw Error(ErrorCode::Dimension, "more rows than columns: " + std::to_string(m) + " > " + std::to_string(n));
    }
    const double deviation = max_abs(v * v.transpose() - RealMatrix::Identity(m, m));
    if (deviation > 1e-8) {
        throw Error(ErrorCode::Precondition, "rows are not orthonormal", deviation);
    }

    RealMatrix u(n, n);
    u.topRows(m) = v;
    Eigen::Index filled = m;
    for (Eigen::Index k = 0; k < n && filled < n; ++k) {
        RealVector w = RealVector::Unit(n, k);
        // two passes keep the result orthogonal even for small residual norms
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < filled; ++j) {
                w -= u.row(j).dot(w) * u.row(j).transpose();
            }
        }
        const double norm = w.norm();
        if (norm <= 1e-8) {
            continue;
        }
        u.row(filled++) = w.transpose() / norm;
    }
    if (filled != n) {
        throw Error(ErrorCode::Conditioning, "completion ran out of candidate vectors");
    }
    return u;
}

/// Haar-distributed rotation in SO(n): QR of a seeded Gaussian matrix with the
/// diagonal of R made positive, then a column flip if det = -1.
inline RealMatrix random_rotation(int n, std::uint64_t seed) {
    if (n < 1) {
        throw Error(ErrorCode::Dimension, "rotation dimension must be >= 1");
    }
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RealMatrix g(n, n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) {
            g(r, c) = normal(gen);
        }
    }
    Eigen::HouseholderQR<RealMatrix> qr(g);
    RealMatrix q = qr.householderQ() * RealMatrix::Identity(n, n);
    const RealMatrix& r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) *= -1.0;
        }
    }
    if (q.determinant() < 0.0) {
        q.col(0) *= -1.0;
    }
    return q;
}

/// Square root with Re w >= 0; negative reals map to +i sqrt|z|.
inline Complex principal_sqrt(Complex z) {
    if (z.imag() == 0.0 && z.real() < 0.0) {
        return {0.0, std::sqrt(-z.real())};
    }
    return std::sqrt(z);
}

struct MomentMatrices {
    RealMatrix scatter;  // A A^t
    RealMatrix gram;     // A^t A
};

inline MomentMatrices moment_matrices(const RealMatrix& a) {
    require_finite(a, "moment_matrices input");
    MomentMatrices out{a * a.transpose(), a.transpose() * a};
    // exact symmetry; the products are symmetric only up to rounding
    out.scatter = 0.5 * (out.scatter + out.scatter.transpose()).eval();
    out.gram = 0.5 * (out.gram + out.gram.transpose()).eval();
    return out;
}

/// Spectral condition number from the SVD (infinity when singular).
inline double condition_number(const RealMatrix& m) {
    Eigen::JacobiSVD<RealMatrix> svd(m);
    const RealVector& s = svd.singularValues();
    if (s.size() == 0) {
        return 0.0;
    }
    const double smallest = s(s.size() - 1);
    return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

/// Closest matrix with orthonormal rows (polar factor U V^t of the thin SVD).
/// Throws when a row direction has collapsed.
inline RealMatrix nearest_orthonormal_rows(const RealMatrix& w, double min_singular = 1e-8) {
    Eigen::JacobiSVD<RealMatrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    if (s.size() < w.rows() || s(s.size() - 1) <= min_singular) {
        throw Error(ErrorCode::Conditioning, "rows are nearly dependent",
                    s.size() > 0 ? s(s.size() - 1) : 0.0);
    }
    return svd.matrixU() * svd.matrixV().transpose();
}

inline ComplexVector to_vector(const PlanarImage& img) {
    ComplexVector z(static_cast<Eigen::Index>(img.size()));
    for (std::size_t j = 0; j < img.size(); ++j) {
        z(static_cast<Eigen::Index>(j)) = img[j];
    }
    return z;
}

/// 2 x N matrix of real (row 0) and imaginary (row 1) parts.
inline RealMatrix to_real_rows(const PlanarImage& img) {
    RealMatrix v(2, static_cast<Eigen::Index>(img.size()));
    for (std::size_t j = 0; j < img.size(); ++j) {
        v(0, static_cast<Eigen::Index>(j)) = img[j].real();
        v(1, static_cast<Eigen::Index>(j)) = img[j].imag();
    }
    return v;
}

inline PlanarImage from_real_rows(const RealMatrix& v) {
    if (v.rows() != 2) {
        throw Error(ErrorCode::Dimension, "planar image needs exactly two rows");
    }
    PlanarImage img(static_cast<std::size_t>(v.cols()));
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        img[static_cast<std::size_t>(j)] = Complex(v(0, j), v(1, j));
    }
    return img;
}

/// Neumaier summation with error-free products.
class AccurateSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        carry_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    void add_product(double a, double b) {
        const double p = a * b;
        add(p);
        add(std::fma(a, b, -p));
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace orthodraw
