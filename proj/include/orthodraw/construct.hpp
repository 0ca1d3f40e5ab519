#pragma once

// Drawing constructions for cubes: completing a drawing from two edges, the
// compass-and-ruler complex square root, the SU(2)-style parametrisation of
// cube images, lifting a cube image to a pose, and the classical
// foreshortening rules of Weisbach and Schmid.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "orthodraw/eutaxy.hpp"
#include "orthodraw/numeric.hpp"
#include "orthodraw/shapes.hpp"
#include "orthodraw/simplexform.hpp"

namespace orthodraw {

/// Both solutions gamma = +-sqrt(-alpha^2 - beta^2) of the cube equation; the
/// principal root comes first.
inline std::pair<Complex, Complex> complete_cube_vertex(Complex alpha, Complex beta) {
    const Complex gamma = principal_sqrt(-alpha * alpha - beta * beta);
    return {gamma, -gamma};
}

/// Square root by construction: zeta = -|z| on the real axis, the circle
/// through zeta, 1 and z, and the bisector of the angle between 1 and z.
/// The bisector meets the circle at sqrt(z).
inline Complex geometric_sqrt(Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidInput, "non-finite input");
    }
    if (z.imag() == 0.0) {
        // zeta, 1 and z are collinear (or zeta == z when z < 0)
        throw Error(ErrorCode::DegenerateConfiguration, "construction needs z off the real axis");
    }
    const double r = std::abs(z);

    // circumcentre of zeta = -r, 1 and z: zeta and 1 fix the abscissa, z the ordinate
    const double cx = (1.0 - r) / 2.0;
    const double cy = (r - 1.0) * (r + z.real()) / (2.0 * z.imag());

    // the origin splits the chord from zeta to 1, so its power is -r and the
    // ray t * dir, t > 0, meets the circle once: t^2 - 2 t proj - r = 0
    const Complex dir = std::polar(1.0, std::arg(z) / 2.0);
    const double proj = cx * dir.real() + cy * dir.imag();
    const double root = std::sqrt(proj * proj + r);
    const double t = proj >= 0.0 ? proj + root : r / (root - proj);
    return t * dir;
}

/// (a^2 - b^2, i(a^2 + b^2), 2ab): top-right entries of Lambda X conj(Lambda)^t
/// for the three standard trace-free Hermitian basis matrices.
inline PlanarImage cube_image_from_ab(Complex a, Complex b) {
    const Complex i{0.0, 1.0};
    return {a * a - b * b, i * (a * a + b * b), 2.0 * a * b};
}

/// Inverse of cube_image_from_ab. a has Re >= 0; b's sign is chosen so that
/// 2ab matches gamma.
inline std::pair<Complex, Complex> ab_from_cube_image(const PlanarImage& img,
                                                      const Tolerance& tol = image_tolerance()) {
    const Verdict v = image_verdict(ImageEquationKind::CubeNeighbors, img, tol);
    if (!v.pass) {
        throw Error(ErrorCode::NotACubeImage, "alpha^2 + beta^2 + gamma^2 != 0", v.residual);
    }
    const Complex i{0.0, 1.0};
    const Complex alpha = img[0], beta = img[1], gamma = img[2];
    const Complex a = principal_sqrt((alpha - i * beta) / 2.0);
    Complex b = principal_sqrt((-alpha - i * beta) / 2.0);
    if (std::abs(2.0 * a * b - gamma) > std::abs(2.0 * a * b + gamma)) {
        b = -b;
    }
    return {a, b};
}

/// Pose of a cube whose edges from the vertex at the origin image to
/// (alpha, beta, gamma): the frame maps e_k to an edge projecting onto img[k].
inline OrthoFrame lift_cube(const PlanarImage& img, const Tolerance& tol = image_tolerance()) {
    check_point_count(ImageEquationKind::CubeNeighbors, img.size());
    require_finite(img, "cube image");
    if (img[0] == 0.0 && img[1] == 0.0 && img[2] == 0.0) {
        throw Error(ErrorCode::Degeneracy, "all edge images are zero");
    }
    const Verdict v = image_verdict(ImageEquationKind::CubeNeighbors, img, tol);
    if (!v.pass) {
        throw Error(ErrorCode::NotACubeImage, "alpha^2 + beta^2 + gamma^2 != 0", v.residual);
    }
    const VectorSystem sys = VectorSystem::from_image(img);
    const EutaxyReport report = eutaxy_check(sys, tol);
    if (!report.eutactic()) {
        throw Error(ErrorCode::NotACubeImage, "edge images are not eutactic", report.residual);
    }
    OrthoFrame frame;
    frame.rotation = lift_eutactic(sys, tol);
    frame.scale = 1.0 / *report.scale;
    frame.translation = RealVector::Zero(3);
    return frame;
}

/// Image axis directions (radians) and, once solved, the foreshortened unit
/// lengths along them.
struct AxisTriple {
    std::array<double, 3> angles{};
    std::optional<std::array<double, 3>> lengths;
};

/// Solves sum_k s_k e^{2i theta_k} = 0 for s_k = length_k^2 > 0; lengths are
/// scaled so the longest is 1.
inline AxisTriple foreshorten_from_axes(const AxisTriple& axes) {
    const auto& th = axes.angles;
    for (double t : th) {
        if (!std::isfinite(t)) {
            throw Error(ErrorCode::InvalidInput, "non-finite axis angle");
        }
    }
    // null vector of the 2 x 3 system [cos 2theta; sin 2theta]
    std::array<double, 3> s{std::sin(2.0 * (th[2] - th[1])), std::sin(2.0 * (th[0] - th[2])),
                            std::sin(2.0 * (th[1] - th[0]))};
    const double largest = std::max({std::abs(s[0]), std::abs(s[1]), std::abs(s[2])});
    if (s[0] + s[1] + s[2] < 0.0) {
        for (double& x : s) {
            x = -x;
        }
    }
    for (double x : s) {
        if (!(x > 1e-12 * largest)) {
            throw Error(ErrorCode::InvalidAxes, "doubled axis directions do not positively span the plane");
        }
    }
    const double top = std::max({s[0], s[1], s[2]});
    AxisTriple out = axes;
    out.lengths = std::array<double, 3>{std::sqrt(s[0] / top), std::sqrt(s[1] / top), std::sqrt(s[2] / top)};
    return out;
}

struct WeisbachResiduals {
    std::array<double, 3> angles{};       // A, B, C in [0, pi)
    std::array<double, 3> ratios{};       // |z_k|^2 / sin 2A_k
    std::array<double, 3> differences{};  // (r1 - r2, r2 - r3, r3 - r1) / max |r|
};

/// Weisbach's ratios a^2/sin 2A, b^2/sin 2B, c^2/sin 2C. A is the angle from
/// the beta axis to the gamma axis (counter-clockwise, mod pi), B from gamma
/// to alpha, C from alpha to beta; for mutually obtuse axes this is the
/// interior angle opposite each axis.
inline WeisbachResiduals weisbach_residuals(const PlanarImage& img) {
    check_point_count(ImageEquationKind::CubeNeighbors, img.size());
    require_finite(img, "image");
    for (const auto& z : img) {
        if (z == 0.0) {
            throw Error(ErrorCode::UndefinedRatio, "zero axis image");
        }
    }
    WeisbachResiduals out;
    double largest = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        const Complex from = img[(k + 1) % 3];
        const Complex to = img[(k + 2) % 3];
        double angle = std::arg(to / from);
        angle = std::fmod(angle + std::numbers::pi, std::numbers::pi);
        const double sine = std::sin(2.0 * angle);
        if (std::abs(sine) <= 1e-12) {
            throw Error(ErrorCode::UndefinedRatio, "axes are parallel or perpendicular");
        }
        out.angles[k] = angle;
        out.ratios[k] = std::norm(img[k]) / sine;
        largest = std::max(largest, std::abs(out.ratios[k]));
    }
    for (std::size_t k = 0; k < 3; ++k) {
        out.differences[k] = (out.ratios[k] - out.ratios[(k + 1) % 3]) / largest;
    }
    return out;
}

/// Points of Schmid's construction, normalised so that Q = 1 and the third
/// principal axis is the real line.
struct SchmidDiagram {
    Complex alpha, beta, p, q, r;
};

inline SchmidDiagram schmid_points(Complex alpha) {
    const double two_re = 2.0 * alpha.real();  // alpha + conj(alpha)
    if (alpha.imag() == 0.0 || two_re == 2.0) {
        throw Error(ErrorCode::DegenerateConfiguration, "alpha must be off the real axis with Re alpha != 1");
    }
    const Complex i{0.0, 1.0};
    const Complex numerator = alpha * two_re + 2.0 * (1.0 - two_re);
    SchmidDiagram d;
    d.alpha = alpha;
    d.q = 1.0;
    d.r = 1.0 + i - i * alpha;
    d.p = numerator / (alpha - std::conj(alpha));
    d.beta = numerator / (2.0 - two_re) * i;
    return d;
}

/// 4 (alpha - 1) conj(alpha - 1) (alpha + conj(alpha) - 1) / (alpha + conj(alpha) - 2)^2,
/// the value of alpha^2 + beta^2 in the normalised diagram.
inline double schmid_sum_of_squares(Complex alpha) {
    const double two_re = 2.0 * alpha.real();
    return 4.0 * std::norm(alpha - 1.0) * (two_re - 1.0) / ((two_re - 2.0) * (two_re - 2.0));
}

/// Schmid's construction for arbitrary axis directions: rotate the gamma axis
/// onto the real line, scale so that Q = 1, apply the normalised formulas and
/// map back. Q is taken as the foot point farther from the origin.
inline SchmidDiagram schmid_general(Complex alpha, double beta_axis, double gamma_axis) {
    const Complex to_real = std::polar(1.0, -gamma_axis);
    const Complex a = alpha * to_real;
    const Complex beta_dir = std::polar(1.0, beta_axis - gamma_axis);
    if (std::abs(beta_dir.real()) < 1e-12 || std::abs(beta_dir.imag()) < 1e-12 || std::abs(a.imag()) < 1e-300) {
        throw Error(ErrorCode::DegenerateConfiguration, "axes are parallel or perpendicular");
    }
    // P: the perpendicular from alpha to the gamma axis meets the beta axis
    const Complex p = beta_dir * (a.real() / beta_dir.real());
    // Q on the real line with (P - Q) perpendicular to (alpha - Q)
    const double disc = -p.imag() * a.imag();
    if (!(disc > 0.0)) {
        throw Error(ErrorCode::DegenerateConfiguration, "alpha and the beta axis lie on the same side");
    }
    const double q = a.real() + (a.real() < 0.0 ? -1.0 : 1.0) * std::sqrt(disc);
    SchmidDiagram d = schmid_points(a / q);
    const Complex back = q / to_real;
    d.alpha *= back;
    d.beta *= back;
    d.p *= back;
    d.q *= back;
    d.r *= back;
    return d;
}

}  // namespace orthodraw
