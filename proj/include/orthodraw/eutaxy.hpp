#pragma once

// Eutactic vector systems: v_1..v_n in R^m that are (up to a common scale)
// the orthogonal projections of an orthonormal basis of R^n.

#include <cmath>
#include <optional>
#include <string>

#include "orthodraw/numeric.hpp"

namespace orthodraw {

/// Columns of `vectors` are v_1, ..., v_n in R^m, with m <= n.
class VectorSystem {
public:
    explicit VectorSystem(RealMatrix vectors) : v_(std::move(vectors)) {
        require_finite(v_, "vector system");
        if (v_.rows() > v_.cols()) {
            throw Error(ErrorCode::Dimension, "image dimension " + std::to_string(v_.rows()) +
                                                  " exceeds source dimension " + std::to_string(v_.cols()));
        }
    }

    /// Real parts in row 0, imaginary parts in row 1.
    static VectorSystem from_image(const PlanarImage& img) {
        require_finite(img, "planar image");
        return VectorSystem(to_real_rows(img));
    }

    const RealMatrix& matrix() const { return v_; }
    Eigen::Index image_dim() const { return v_.rows(); }
    Eigen::Index source_dim() const { return v_.cols(); }

private:
    RealMatrix v_;
};

struct EutaxyReport {
    bool normalized = false;
    std::optional<double> scale;  // mu with mu*V normalised eutactic; always > 0
    double residual = 0.0;        // ||V V^t - lambda I||_F, lambda = trace / m
    Tolerance tolerance{};

    bool eutactic() const { return scale.has_value(); }
};

/// z_1^2 + ... + z_n^2, summed in index order.
inline Complex complex_residual(const PlanarImage& img) {
    Complex sum{0.0, 0.0};
    for (const auto& z : img) {
        sum += z * z;
    }
    return sum;
}

/// Normalised eutactic iff V V^t = I; eutactic iff
/// V V^t = lambda I with lambda > 0 (then mu = 1/sqrt(lambda)).
inline EutaxyReport eutaxy_check(const VectorSystem& sys, const Tolerance& tol = {}) {
    tol.validate();
    const RealMatrix& v = sys.matrix();
    const Eigen::Index m = v.rows();
    const RealMatrix moment = v * v.transpose();
    const double bound = tol.bound(moment.norm());
    const double trace = moment.trace();
    const double lambda = m > 0 ? trace / static_cast<double>(m) : 0.0;

    EutaxyReport report;
    report.tolerance = tol;
    report.residual = (moment - lambda * RealMatrix::Identity(m, m)).norm();
    report.normalized = (moment - RealMatrix::Identity(m, m)).norm() <= bound;
    if (report.normalized) {
        report.scale = 1.0;
    } else if (trace > tol.absolute && report.residual <= bound) {
        report.scale = 1.0 / std::sqrt(lambda);
    }
    return report;
}

/// Orthogonal U whose first m rows are mu V, so that P U has columns mu v_j.
inline RealMatrix lift_eutactic(const VectorSystem& sys, const Tolerance& tol = {}) {
    const EutaxyReport report = eutaxy_check(sys, tol);
    if (!report.eutactic()) {
        throw Error(ErrorCode::NotEutactic, "vector system is not eutactic (residual " +
                                                std::to_string(report.residual) + ")",
                    report.residual);
    }
    RealMatrix rows = *report.scale * sys.matrix();
    const Eigen::Index m = rows.rows();
    // a loose tolerance can admit rows that orthonormal_complete rejects
    if (max_abs(rows * rows.transpose() - RealMatrix::Identity(m, m)) > 1e-8) {
        rows = nearest_orthonormal_rows(rows);
    }
    return orthonormal_complete(rows);
}

}  // namespace orthodraw
