#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "csde/errors.hpp"

namespace csde {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ManifoldKind { Euclidean, Circle, Sphere2, Hyperbolic3 };

struct FramePoint;

// One of the model spaces with exact geometric primitives. Points live in
// ambient coordinates: R^d (Euclidean), an angle in [0, 2pi) (Circle), the
// unit sphere in R^3 (Sphere2), the upper unit hyperboloid in Minkowski
// R^4 (Hyperbolic3).
struct ManifoldModel {
    ManifoldKind kind;
    int dim;          // intrinsic dimension d
    int ambient_dim;

    static ManifoldModel euclidean(int d);
    static ManifoldModel circle();
    static ManifoldModel sphere2();
    static ManifoldModel hyperbolic3();
    static ManifoldModel from_name(const std::string& name);
    std::string name() const;

    // Ambient metric pairing of tangent-like vectors at x (Minkowski on
    // Hyperbolic3, dot product elsewhere).
    double metric_dot(const Vec& a, const Vec& b) const;

    Vec project_point(const Vec& x) const;
    Vec project_tangent(const Vec& x, const Vec& v) const;
    void validate_point(const Vec& x, double tol = 1e-10) const;
    double point_residual(const Vec& x) const;
    double tangency_residual(const Vec& x, const Vec& v) const;
    void require_tangent(const Vec& x, const Vec& v, double tol = 1e-8) const;

    double norm(const Vec& x, const Vec& v) const;
    double distance(const Vec& x, const Vec& y) const;
    double max_radius() const;  // pi on Circle/Sphere2, +inf otherwise

    Vec exp_map(const Vec& x, const Vec& v) const;
    // Throws CutLocusError when d(x, y) >= max_radius - 1e-3.
    Vec log_map(const Vec& x, const Vec& y) const;
    // Transports w along the geodesic t -> exp_x(t v) to t = 1.
    Vec parallel_transport(const Vec& x, const Vec& v, const Vec& w) const;

    // Equivariant Ricci matrix Ric(u e_i, u e_j); constant on the catalog.
    Mat ricci_matrix(const FramePoint& u) const;

    // Deterministic orthonormal frame at m (coordinate axes projected and
    // orthonormalized in a fixed order).
    FramePoint canonical_frame(const Vec& m) const;

    // Modified Gram-Schmidt in the ambient metric; columns are projected to
    // the tangent space at x first.
    Mat orthonormalize(const Vec& x, const Mat& columns) const;
};

struct TangentVector {
    Vec base;
    Vec components;
};

// A point together with an orthonormal tangent basis, i.e. an isometry
// u: R^d -> T_x M given by the frame columns.
struct FramePoint {
    Vec base;
    Mat frame;  // ambient_dim x d

    Vec apply(const Vec& coords) const { return frame * coords; }
    // u^{-1} v for tangent v (coordinates in the frame).
    Vec coords_of(const ManifoldModel& model, const Vec& v) const;
    double orthonormality_residual(const ManifoldModel& model) const;
    void validate(const ManifoldModel& model, double tol = 1e-9) const;
};

// Drift vector field together with the frame matrix of its covariant
// derivative, entries <grad_{u e_j} V, u e_i>.
struct VectorFieldSpec {
    enum class Kind { Zero, Linear, Constant, SphereGradient };
    Kind kind = Kind::Zero;
    Mat A;         // Linear: V(x) = A x on Euclidean
    Vec a;         // Constant: V(x) = a on Euclidean
    double c = 0;  // SphereGradient: V(x) = c (e - <x,e> x)
    Vec e;

    static VectorFieldSpec zero();
    static VectorFieldSpec linear(const Mat& A);
    static VectorFieldSpec constant(const Vec& a);
    static VectorFieldSpec sphere_gradient(double c, const Vec& e);

    bool is_zero() const { return kind == Kind::Zero; }
    Vec value(const ManifoldModel& model, const Vec& x) const;
    Mat frame_matrix(const ManifoldModel& model, const FramePoint& u) const;
};

// (value, frame matrix of the covariant derivative) at u.
std::pair<Vec, Mat> vector_field_eval(const ManifoldModel& model,
                                      const VectorFieldSpec& V,
                                      const FramePoint& u);

double wrap_angle(double theta);          // to [0, 2pi)
double wrap_angle_signed(double theta);   // to (-pi, pi]

}  // namespace csde
