#pragma once

// The shape form Q = A^t (A A^t)^{-2} A of a non-degenerate simplex and the
// tests built on it: an m x (n+1) matrix B is the orthogonal projection of a
// congruent simplex iff B Q B^t = I, and planar points z are the image of a
// similar simplex iff z^t Q z = 0.

#include <cmath>
#include <string>
#include <utility>

#include "orthodraw/numeric.hpp"

namespace orthodraw {

/// Vertices a_1..a_{n+1} of a simplex in R^n, stored as the columns of an
/// n x (n+1) matrix.
class SimplexVertices {
public:
    explicit SimplexVertices(RealMatrix vertices) : a_(std::move(vertices)) {
        if (a_.rows() < 1 || a_.cols() != a_.rows() + 1) {
            throw Error(ErrorCode::Dimension, "simplex vertex matrix must be n x (n+1), got " +
                                                  std::to_string(a_.rows()) + " x " + std::to_string(a_.cols()));
        }
        require_finite(a_, "simplex vertices");
        const double scale = max_abs(a_);
        centered_ = max_abs(a_.rowwise().sum()) <= 1e-12 * scale;
    }

    const RealMatrix& matrix() const { return a_; }
    Eigen::Index dim() const { return a_.rows(); }
    bool centered() const { return centered_; }

    /// Rank of the centered vertex matrix (singular values above 1e-10 * largest).
    Eigen::Index affine_rank() const {
        const RealMatrix c = a_.colwise() - a_.rowwise().mean();
        Eigen::JacobiSVD<RealMatrix> svd(c);
        const RealVector& s = svd.singularValues();
        if (s.size() == 0 || s(0) == 0.0) {
            return 0;
        }
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            rank += s(i) > 1e-10 * s(0) ? 1 : 0;
        }
        return rank;
    }

private:
    RealMatrix a_;
    bool centered_ = false;
};

/// Symmetric (n+1) x (n+1) matrix with Q e = 0, a one-dimensional kernel and
/// otherwise positive spectrum.
class ShapeForm {
public:
    struct Trusted {};

    ShapeForm(RealMatrix q, Trusted) : q_(std::move(q)) {}

    /// Validates with validate_shape_form; throws invalid-form on failure.
    static ShapeForm from_matrix(const RealMatrix& q);

    const RealMatrix& matrix() const { return q_; }
    Eigen::Index dim() const { return q_.rows() - 1; }

private:
    RealMatrix q_;
};

/// Rigid pose followed by a uniform scale: x -> scale * (rotation * x + translation).
struct OrthoFrame {
    RealMatrix rotation;
    double scale = 1.0;
    RealVector translation;

    Eigen::Index dim() const { return rotation.rows(); }

    RealMatrix apply(const RealMatrix& vertices) const {
        if (vertices.rows() != dim()) {
            throw Error(ErrorCode::Dimension, "frame dimension " + std::to_string(dim()) +
                                                  " does not match vertex dimension " + std::to_string(vertices.rows()));
        }
        return scale * ((rotation * vertices).colwise() + translation);
    }

    /// First m coordinates of apply(vertices).
    RealMatrix project(const RealMatrix& vertices, Eigen::Index m) const { return apply(vertices).topRows(m); }
};

inline Tolerance form_tolerance() { return Tolerance{0.0, 1e-10}; }

inline SimplexVertices center(const SimplexVertices& verts) {
    const RealMatrix& a = verts.matrix();
    return SimplexVertices(a.colwise() - a.rowwise().mean());
}

inline ShapeForm shape_form(const SimplexVertices& verts) {
    const Eigen::Index n = verts.dim();
    const Eigen::Index rank = verts.affine_rank();
    if (rank < n) {
        throw Error(ErrorCode::Degeneracy, "degenerate simplex: affine rank " + std::to_string(rank) + " < " +
                                               std::to_string(n));
    }
    const RealMatrix a = center(verts).matrix();
    const RealMatrix scatter = a * a.transpose();
    const RealMatrix scatter_inv = scatter.ldlt().solve(RealMatrix::Identity(n, n));
    RealMatrix q = a.transpose() * scatter_inv * scatter_inv * a;
    q = 0.5 * (q + q.transpose()).eval();
    return ShapeForm(std::move(q), ShapeForm::Trusted{});
}

inline Verdict validate_shape_form(const RealMatrix& q, const Tolerance& tol = form_tolerance()) {
    tol.validate();
    if (q.rows() != q.cols() || q.rows() < 2) {
        throw Error(ErrorCode::Dimension, "shape form must be square of size >= 2");
    }
    require_finite(q, "shape form");
    const Eigen::Index k = q.rows();
    const double scale = max_abs(q);

    Verdict v;
    v.tolerance = tol;
    v.normalizer = scale;
    v.threshold = tol.bound(scale);

    const double asym = max_abs(q - q.transpose());
    if (asym > v.threshold) {
        v.residual = asym;
        v.reason = "not symmetric";
        return v;
    }
    const double kernel_defect = max_abs(q * RealVector::Ones(k));
    if (kernel_defect > v.threshold) {
        v.residual = kernel_defect;
        v.reason = "Qe != 0";
        return v;
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(0.5 * (q + q.transpose()));
    const RealVector& lambda = eig.eigenvalues();  // ascending
    const double eig_threshold = tol.bound(lambda.cwiseAbs().maxCoeff());
    int kernel = 0;
    int negative = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(lambda(i)) <= eig_threshold) {
            ++kernel;
        } else if (lambda(i) < 0.0) {
            ++negative;
        }
    }
    v.residual = kernel_defect;
    if (negative > 0) {
        v.residual = -lambda(0);
        v.reason = "negative eigenvalue";
        return v;
    }
    if (kernel != 1) {
        v.reason = "kernel dimension " + std::to_string(kernel) + " != 1";
        return v;
    }
    v.pass = true;
    return v;
}

inline ShapeForm ShapeForm::from_matrix(const RealMatrix& q) {
    const Verdict v = validate_shape_form(q);
    if (!v.pass) {
        throw Error(ErrorCode::InvalidForm, v.reason, v.residual);
    }
    return ShapeForm(0.5 * (q + q.transpose()), Trusted{});
}

/// Congruence test: passes iff ||B Q B^t - I_m||_F <= tol.bound(sqrt(m)).
inline Verdict congruent_image_test(const RealMatrix& b, const ShapeForm& form, const Tolerance& tol = {}) {
    tol.validate();
    const RealMatrix& q = form.matrix();
    if (b.cols() != q.rows()) {
        throw Error(ErrorCode::Dimension, "image has " + std::to_string(b.cols()) + " points, form expects " +
                                              std::to_string(q.rows()));
    }
    if (b.rows() > form.dim()) {
        throw Error(ErrorCode::Dimension, "image dimension exceeds simplex dimension");
    }
    require_finite(b, "image");
    const Eigen::Index m = b.rows();
    Verdict v;
    v.tolerance = tol;
    v.normalizer = std::sqrt(static_cast<double>(m));
    v.threshold = tol.bound(v.normalizer);
    v.residual = (b * q * b.transpose() - RealMatrix::Identity(m, m)).norm();
    v.pass = v.residual <= v.threshold;
    if (!v.pass) {
        v.reason = "B Q B^t differs from the identity";
    }
    return v;
}

/// Similarity test for planar images: z^t Q z = 0 (no conjugation), scaled by
/// sum_jk |Q_jk| |z_j| |z_k|.
inline Verdict similar_image_complex(const PlanarImage& img, const ShapeForm& form,
                                     const Tolerance& tol = image_tolerance()) {
    tol.validate();
    const RealMatrix& q = form.matrix();
    if (static_cast<Eigen::Index>(img.size()) != q.rows()) {
        throw Error(ErrorCode::Dimension, "image has " + std::to_string(img.size()) + " points, form expects " +
                                              std::to_string(q.rows()));
    }
    require_finite(img, "image");
    const ComplexVector z = to_vector(img);
    const Complex r = (z.transpose() * q.cast<Complex>() * z)(0, 0);

    const RealVector mag = z.cwiseAbs();
    double normalizer = (mag.transpose() * q.cwiseAbs() * mag)(0, 0);
    if (normalizer == 0.0) {
        normalizer = 1.0;
    }
    const Complex mean = z.mean();
    double spread = 0.0;
    double total = 0.0;
    for (const auto& p : img) {
        spread += std::abs(p - mean);
        total += std::abs(p);
    }

    Verdict v;
    v.tolerance = tol;
    v.complex_residual = r;
    v.residual = std::abs(r);
    v.normalizer = normalizer;
    v.threshold = tol.bound(normalizer);
    v.pass = v.residual <= v.threshold;
    v.degenerate = spread <= tol.bound(total);
    if (v.degenerate) {
        v.reason = "all points coincide";
    }
    return v;
}

enum class LiftMode {
    Congruent,  // B must be the projection of a congruent simplex
    Similar,    // first recover the scale, then lift as congruent
};

/// Reconstructs a pose with B = scale * P (U A_c + a e^t), A_c the centered
/// vertices. Unobservable translation components are set to zero.
inline OrthoFrame lift_image(const RealMatrix& b, const SimplexVertices& verts, const Tolerance& tol = {},
                             LiftMode mode = LiftMode::Congruent) {
    const ShapeForm form = shape_form(verts);
    const Eigen::Index n = verts.dim();
    if (b.cols() != n + 1 || b.rows() > n || b.rows() < 1) {
        throw Error(ErrorCode::Dimension, "image must be m x (n+1) with m <= n");
    }
    require_finite(b, "image");
    const Eigen::Index m = b.rows();

    double scale = 1.0;
    if (mode == LiftMode::Similar) {
        const double t = (b * form.matrix() * b.transpose()).trace() / static_cast<double>(m);
        if (!(t > 0.0)) {
            throw Error(ErrorCode::NotAnImage, "image has no positive scale", t);
        }
        scale = std::sqrt(t);
    }
    const RealMatrix bs = b / scale;
    const Verdict verdict = congruent_image_test(bs, form, tol);
    if (!verdict.pass) {
        throw Error(ErrorCode::NotAnImage, "not the image of a congruent simplex (residual " +
                                               std::to_string(verdict.residual) + ")",
                    verdict.residual);
    }

    const RealMatrix a = center(verts).matrix();
    const RealVector mean = bs.rowwise().mean();
    const RealMatrix bc = bs.colwise() - mean;
    const RealMatrix scatter = a * a.transpose();
    RealMatrix w = scatter.ldlt().solve(a * bc.transpose()).transpose();  // Bc A^t (A A^t)^{-1}
    if (max_abs(w * w.transpose() - RealMatrix::Identity(m, m)) > 1e-8) {
        w = nearest_orthonormal_rows(w);
    }

    OrthoFrame frame;
    frame.rotation = orthonormal_complete(w);
    frame.scale = scale;
    frame.translation = RealVector::Zero(n);
    frame.translation.head(m) = mean;
    return frame;
}

/// Vertices with gram matrix pinv(Q): rows sqrt(lambda_k) v_k^t over the n
/// positive eigenpairs, descending, each v_k with first nonzero entry positive.
inline SimplexVertices simplex_from_form(const ShapeForm& form) {
    const Verdict v = validate_shape_form(form.matrix());
    if (!v.pass) {
        throw Error(ErrorCode::InvalidForm, v.reason, v.residual);
    }
    const Eigen::Index n = form.dim();
    const RealMatrix gram = pseudoinverse(form.matrix());
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(0.5 * (gram + gram.transpose()));
    const RealVector& lambda = eig.eigenvalues();
    const RealMatrix& vecs = eig.eigenvectors();

    RealMatrix a(n, n + 1);
    for (Eigen::Index row = 0; row < n; ++row) {
        const Eigen::Index k = n - row;  // ascending order; index 0 is the e-kernel
        RealVector vk = vecs.col(k);
        const double cutoff = 1e-12 * vk.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < vk.size(); ++i) {
            if (std::abs(vk(i)) > cutoff) {
                if (vk(i) < 0.0) {
                    vk = -vk;
                }
                break;
            }
        }
        a.row(row) = std::sqrt(std::max(lambda(k), 0.0)) * vk.transpose();
    }
    return SimplexVertices(std::move(a));
}

/// U = A A^t (B A^t)^{-1}; when A^t A = B^t B this is orthogonal with A = U B.
inline RealMatrix congruence_from_gram(const RealMatrix& a, const RealMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::Dimension, "vertex matrices differ in shape");
    }
    require_finite(a, "A");
    require_finite(b, "B");
    const RealMatrix ga = a.transpose() * a;
    const RealMatrix gb = b.transpose() * b;
    const double mismatch = max_abs(ga - gb);
    if (mismatch > 1e-9 * std::max(1.0, max_abs(ga))) {
        throw Error(ErrorCode::Precondition, "gram matrices differ", mismatch);
    }
    const RealMatrix cross = b * a.transpose();
    const double cond = condition_number(cross);
    if (!(cond < 1e12)) {
        throw Error(ErrorCode::Conditioning, "B A^t is singular", cond);
    }
    const RealMatrix scatter = a * a.transpose();
    // U = S K^{-1}  <=>  K^t U^t = S^t = S
    return cross.transpose().partialPivLu().solve(scatter).transpose();
}

/// Shape form of X^{-1} A0: A0^+ X X^t A0^{+t} with A0^+ = A0^t (A0 A0^t)^{-1}.
inline ShapeForm form_from_gl(const RealMatrix& x, const SimplexVertices& a0) {
    const Eigen::Index n = a0.dim();
    if (x.rows() != n || x.cols() != n) {
        throw Error(ErrorCode::Dimension, "X must be n x n for an n-simplex");
    }
    require_finite(x, "X");
    const double cond = condition_number(x);
    if (!(cond < 1e12)) {
        throw Error(ErrorCode::Conditioning, "X is singular", cond);
    }
    if (!a0.centered()) {
        throw Error(ErrorCode::Precondition, "base simplex must be centered");
    }
    if (a0.affine_rank() < n) {
        throw Error(ErrorCode::Degeneracy, "base simplex is degenerate");
    }
    const RealMatrix& a = a0.matrix();
    const RealMatrix pinv_a = a.transpose() * (a * a.transpose()).ldlt().solve(RealMatrix::Identity(n, n));
    RealMatrix q = pinv_a * x * x.transpose() * pinv_a.transpose();
    q = 0.5 * (q + q.transpose()).eval();
    return ShapeForm(std::move(q), ShapeForm::Trusted{});
}

/// +-sqrt(z_1^2 + ... + z_N^2), the foci of the image ellipse of the
/// restricted scatter matrix; the root with Re >= 0 comes first.
inline std::pair<Complex, Complex> image_foci(const PlanarImage& img) {
    require_finite(img, "image");
    AccurateSum re, im;
    for (const auto& z : img) {
        re.add_product(z.real(), z.real());
        re.add_product(-z.imag(), z.imag());
        im.add_product(2.0 * z.real(), z.imag());
    }
    const Complex w = principal_sqrt({re.value(), im.value()});
    return {w, -w};
}

}  // namespace orthodraw
