#include "csde/geometry.hpp"

#include <cmath>

namespace csde {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kCutLocusGuard = 1e-3;
}  // namespace

double wrap_angle(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w;
}

double wrap_angle_signed(double theta) {
    double w = std::fmod(theta, kTwoPi);
    if (w > kPi) w -= kTwoPi;
    if (w <= -kPi) w += kTwoPi;
    return w;
}

ManifoldModel ManifoldModel::euclidean(int d) {
    if (d < 1) throw InvalidInputError("Euclidean dimension must be positive");
    return {ManifoldKind::Euclidean, d, d};
}
ManifoldModel ManifoldModel::circle() { return {ManifoldKind::Circle, 1, 1}; }
ManifoldModel ManifoldModel::sphere2() { return {ManifoldKind::Sphere2, 2, 3}; }
ManifoldModel ManifoldModel::hyperbolic3() { return {ManifoldKind::Hyperbolic3, 3, 4}; }

ManifoldModel ManifoldModel::from_name(const std::string& name) {
    if (name == "Circle") return circle();
    if (name == "Sphere2") return sphere2();
    if (name == "Hyperbolic3") return hyperbolic3();
    if (name.rfind("Euclidean", 0) == 0) {
        std::string rest = name.substr(9);
        int d = rest.empty() ? 1 : std::stoi(rest);
        return euclidean(d);
    }
    throw ConfigError("unknown manifold kind '" + name +
                      "'; valid kinds: Euclidean<d>, Circle, Sphere2, Hyperbolic3");
}

std::string ManifoldModel::name() const {
    switch (kind) {
        case ManifoldKind::Euclidean: return "Euclidean" + std::to_string(dim);
        case ManifoldKind::Circle: return "Circle";
        case ManifoldKind::Sphere2: return "Sphere2";
        case ManifoldKind::Hyperbolic3: return "Hyperbolic3";
    }
    return "?";
}

double ManifoldModel::metric_dot(const Vec& a, const Vec& b) const {
    if (kind == ManifoldKind::Hyperbolic3)
        return -a(0) * b(0) + a.tail(3).dot(b.tail(3));
    return a.dot(b);
}

Vec ManifoldModel::project_point(const Vec& x) const {
    switch (kind) {
        case ManifoldKind::Euclidean: return x;
        case ManifoldKind::Circle: {
            Vec p(1);
            p(0) = wrap_angle(x(0));
            return p;
        }
        case ManifoldKind::Sphere2: return x / x.norm();
        case ManifoldKind::Hyperbolic3: {
            double q = -metric_dot(x, x);
            if (q <= 0) throw NumericalError("hyperboloid projection of non-timelike vector");
            Vec p = x / std::sqrt(q);
            if (p(0) < 0) p = -p;
            return p;
        }
    }
    return x;
}

Vec ManifoldModel::project_tangent(const Vec& x, const Vec& v) const {
    switch (kind) {
        case ManifoldKind::Euclidean:
        case ManifoldKind::Circle: return v;
        case ManifoldKind::Sphere2: return v - x.dot(v) * x;
        case ManifoldKind::Hyperbolic3: return v + metric_dot(x, v) * x;
    }
    return v;
}

double ManifoldModel::point_residual(const Vec& x) const {
    switch (kind) {
        case ManifoldKind::Euclidean: return 0.0;
        case ManifoldKind::Circle:
            return (x(0) >= 0 && x(0) < kTwoPi) ? 0.0 : std::abs(x(0) - wrap_angle(x(0)));
        case ManifoldKind::Sphere2: return std::abs(x.squaredNorm() - 1.0);
        case ManifoldKind::Hyperbolic3: {
            double res = std::abs(metric_dot(x, x) + 1.0);
            if (x(0) <= 0) res = std::max(res, 1.0);
            return res;
        }
    }
    return 0.0;
}

void ManifoldModel::validate_point(const Vec& x, double tol) const {
    if (x.size() != ambient_dim)
        throw InvalidInputError("point has wrong ambient dimension for " + name());
    if (point_residual(x) > tol)
        throw InvalidInputError("point violates the " + name() + " constraint");
}

double ManifoldModel::tangency_residual(const Vec& x, const Vec& v) const {
    switch (kind) {
        case ManifoldKind::Euclidean:
        case ManifoldKind::Circle: return 0.0;
        case ManifoldKind::Sphere2: return std::abs(x.dot(v));
        case ManifoldKind::Hyperbolic3: return std::abs(metric_dot(x, v));
    }
    return 0.0;
}

void ManifoldModel::require_tangent(const Vec& x, const Vec& v, double tol) const {
    if (v.size() != ambient_dim)
        throw InvalidInputError("tangent vector has wrong ambient dimension");
    double scale = 1.0 + std::sqrt(std::abs(metric_dot(v, v)));
    if (tangency_residual(x, v) > tol * scale)
        throw InvalidInputError("vector is not tangent at the given point on " + name());
}

double ManifoldModel::norm(const Vec& x, const Vec& v) const {
    (void)x;
    double q = metric_dot(v, v);
    return q <= 0 ? 0.0 : std::sqrt(q);
}

double ManifoldModel::distance(const Vec& x, const Vec& y) const {
    switch (kind) {
        case ManifoldKind::Euclidean: return (y - x).norm();
        case ManifoldKind::Circle: return std::abs(wrap_angle_signed(y(0) - x(0)));
        case ManifoldKind::Sphere2: {
            double c = std::clamp(x.dot(y), -1.0, 1.0);
            return std::acos(c);
        }
        case ManifoldKind::Hyperbolic3: {
            double c = std::max(1.0, -metric_dot(x, y));
            return std::acosh(c);
        }
    }
    return 0.0;
}

double ManifoldModel::max_radius() const {
    if (kind == ManifoldKind::Circle || kind == ManifoldKind::Sphere2) return kPi;
    return std::numeric_limits<double>::infinity();
}

Vec ManifoldModel::exp_map(const Vec& x, const Vec& v) const {
    require_tangent(x, v);
    switch (kind) {
        case ManifoldKind::Euclidean: return x + v;
        case ManifoldKind::Circle: {
            Vec p(1);
            p(0) = wrap_angle(x(0) + v(0));
            return p;
        }
        case ManifoldKind::Sphere2: {
            double r = v.norm();
            if (r < 1e-300) return x;
            return project_point(std::cos(r) * x + std::sin(r) / r * v);
        }
        case ManifoldKind::Hyperbolic3: {
            double r = norm(x, v);
            if (r < 1e-300) return x;
            return project_point(std::cosh(r) * x + std::sinh(r) / r * v);
        }
    }
    return x;
}

Vec ManifoldModel::log_map(const Vec& x, const Vec& y) const {
    double r = distance(x, y);
    if (r >= max_radius() - kCutLocusGuard)
        throw CutLocusError("log_map target too close to the cut locus on " + name(), r);
    switch (kind) {
        case ManifoldKind::Euclidean: return y - x;
        case ManifoldKind::Circle: {
            Vec v(1);
            v(0) = wrap_angle_signed(y(0) - x(0));
            return v;
        }
        case ManifoldKind::Sphere2: {
            Vec w = project_tangent(x, y);
            double n = w.norm();
            if (n < 1e-300) return Vec::Zero(3);
            return (r / n) * w;
        }
        case ManifoldKind::Hyperbolic3: {
            Vec w = project_tangent(x, y);
            double n = norm(x, w);
            if (n < 1e-300) return Vec::Zero(4);
            return (r / n) * w;
        }
    }
    return Vec::Zero(ambient_dim);
}

Vec ManifoldModel::parallel_transport(const Vec& x, const Vec& v, const Vec& w) const {
    require_tangent(x, v);
    require_tangent(x, w);
    switch (kind) {
        case ManifoldKind::Euclidean:
        case ManifoldKind::Circle: return w;
        case ManifoldKind::Sphere2: {
            double r = v.norm();
            if (r < 1e-300) return w;
            Vec u = v / r;
            double a = w.dot(u);
            return w - a * u + a * (std::cos(r) * u - std::sin(r) * x);
        }
        case ManifoldKind::Hyperbolic3: {
            double r = norm(x, v);
            if (r < 1e-300) return w;
            Vec u = v / r;
            double a = metric_dot(w, u);
            return w - a * u + a * (std::cosh(r) * u + std::sinh(r) * x);
        }
    }
    return w;
}

Mat ManifoldModel::ricci_matrix(const FramePoint& u) const {
    u.validate(*this);
    switch (kind) {
        case ManifoldKind::Euclidean: return Mat::Zero(dim, dim);
        case ManifoldKind::Circle: return Mat::Zero(1, 1);
        case ManifoldKind::Sphere2: return Mat::Identity(2, 2);
        case ManifoldKind::Hyperbolic3: return -2.0 * Mat::Identity(3, 3);
    }
    return Mat::Zero(dim, dim);
}

Mat ManifoldModel::orthonormalize(const Vec& x, const Mat& columns) const {
    Mat F(ambient_dim, dim);
    int col = 0;
    for (int j = 0; j < columns.cols() && col < dim; ++j) {
        Vec v = project_tangent(x, columns.col(j));
        for (int i = 0; i < col; ++i)
            v -= metric_dot(F.col(i), v) * F.col(i);
        double n = norm(x, v);
        if (n < 1e-8) continue;
        F.col(col++) = v / n;
    }
    if (col != dim)
        throw NumericalError("frame orthonormalization produced a rank-deficient frame");
    return F;
}

FramePoint ManifoldModel::canonical_frame(const Vec& m) const {
    validate_point(m);
    Mat candidates;
    switch (kind) {
        case ManifoldKind::Euclidean:
        case ManifoldKind::Circle:
            return {m, Mat::Identity(ambient_dim, dim)};
        case ManifoldKind::Sphere2:
            candidates = Mat::Identity(3, 3);
            break;
        case ManifoldKind::Hyperbolic3:
            // spatial axes only; the timelike axis never projects to a
            // useful candidate
            candidates = Mat::Zero(4, 3);
            candidates(1, 0) = candidates(2, 1) = candidates(3, 2) = 1.0;
            break;
    }
    return {m, orthonormalize(m, candidates)};
}

Vec FramePoint::coords_of(const ManifoldModel& model, const Vec& v) const {
    Vec c(frame.cols());
    for (int i = 0; i < frame.cols(); ++i)
        c(i) = model.metric_dot(frame.col(i), v);
    return c;
}

double FramePoint::orthonormality_residual(const ManifoldModel& model) const {
    int d = static_cast<int>(frame.cols());
    double res = model.point_residual(base);
    for (int i = 0; i < d; ++i) {
        res = std::max(res, model.tangency_residual(base, frame.col(i)));
        for (int j = i; j < d; ++j) {
            double g = model.metric_dot(frame.col(i), frame.col(j));
            res = std::max(res, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return res;
}

void FramePoint::validate(const ManifoldModel& model, double tol) const {
    if (frame.rows() != model.ambient_dim || frame.cols() != model.dim)
        throw InvalidInputError("frame has wrong shape for " + model.name());
    if (orthonormality_residual(model) > tol)
        throw InvalidInputError("frame is not orthonormal on " + model.name());
}

VectorFieldSpec VectorFieldSpec::zero() { return {}; }

VectorFieldSpec VectorFieldSpec::linear(const Mat& A) {
    VectorFieldSpec V;
    V.kind = Kind::Linear;
    V.A = A;
    return V;
}

VectorFieldSpec VectorFieldSpec::constant(const Vec& a) {
    VectorFieldSpec V;
    V.kind = Kind::Constant;
    V.a = a;
    return V;
}

VectorFieldSpec VectorFieldSpec::sphere_gradient(double c, const Vec& e) {
    VectorFieldSpec V;
    V.kind = Kind::SphereGradient;
    V.c = c;
    V.e = e;
    return V;
}

Vec VectorFieldSpec::value(const ManifoldModel& model, const Vec& x) const {
    switch (kind) {
        case Kind::Zero: return Vec::Zero(model.ambient_dim);
        case Kind::Linear:
            if (model.kind != ManifoldKind::Euclidean)
                throw UnsupportedError("linear drift field is Euclidean-only");
            return A * x;
        case Kind::Constant:
            if (model.kind != ManifoldKind::Euclidean)
                throw UnsupportedError("constant drift field is Euclidean-only");
            return a;
        case Kind::SphereGradient:
            if (model.kind != ManifoldKind::Sphere2)
                throw UnsupportedError("sphere gradient field is Sphere2-only");
            return c * (e - x.dot(e) * x);
    }
    return Vec::Zero(model.ambient_dim);
}

Mat VectorFieldSpec::frame_matrix(const ManifoldModel& model, const FramePoint& u) const {
    int d = model.dim;
    switch (kind) {
        case Kind::Zero:
        case Kind::Constant: return Mat::Zero(d, d);
        case Kind::Linear: {
            // <A u e_j, u e_i>
            return u.frame.transpose() * A * u.frame;
        }
        case Kind::SphereGradient:
            // grad_w V = -c <x,e> w
            return -c * u.base.dot(e) * Mat::Identity(d, d);
    }
    return Mat::Zero(d, d);
}

std::pair<Vec, Mat> vector_field_eval(const ManifoldModel& model,
                                      const VectorFieldSpec& V,
                                      const FramePoint& u) {
    u.validate(model);
    return {V.value(model, u.base), V.frame_matrix(model, u)};
}

}  // namespace csde
