#include "lyphc/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace lyphc {

namespace {

// 5-point Gauss-Legendre on [0, 1].
constexpr double kNodes[5] = {0.04691007703066800, 0.23076534494715845, 0.5, 0.76923465505284155,
                              0.95308992296933200};
constexpr double kWeights[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                                0.23931433524968324, 0.11846344252809454};
constexpr int kPanels = 64;

}  // namespace

Curve Curve::line(Vec3 a, Vec3 b) {
    Curve c;
    c.kind_ = Kind::Line;
    c.a_ = a;
    c.b_ = b;
    return c;
}

Curve Curve::bezier(Vec3 a, Vec3 control, Vec3 b) {
    Curve c;
    c.kind_ = Kind::Bezier;
    c.a_ = a;
    c.b_ = b;
    c.c_ = control;
    return c;
}

Curve Curve::default_spline(Vec3 a, Vec3 b) {
    Vec3 d = b - a;
    Vec3 side{-d.y, d.x, 0};
    return bezier(a, (a + b) * 0.5 + side * 0.25, b);
}

Curve Curve::arc(Vec3 a, Vec3 b, Vec3 center) {
    Curve c;
    c.kind_ = Kind::Arc;
    c.a_ = a;
    c.b_ = b;
    c.c_ = {center.x, center.y, a.z};
    Vec3 da = a - c.c_, db = b - c.c_;
    c.r0_ = std::hypot(da.x, da.y);
    c.r1_ = std::hypot(db.x, db.y);
    c.theta0_ = std::atan2(da.y, da.x);
    double theta1 = std::atan2(db.y, db.x);
    double sweep = theta1 - c.theta0_;
    while (sweep <= 0) sweep += 2 * std::numbers::pi;
    c.sweep_ = sweep;
    return c;
}

Curve Curve::default_arc(Vec3 a, Vec3 b) {
    Curve c = arc(a, b, (a + b) * 0.5);
    c.sweep_ = std::numbers::pi;
    return c;
}

Vec3 Curve::at(double t) const {
    switch (kind_) {
    case Kind::Line:
        if (t <= 0) return a_;
        if (t >= 1) return b_;
        return lerp(a_, b_, t);
    case Kind::Bezier: {
        if (t <= 0) return a_;
        if (t >= 1) return b_;
        double u = 1 - t;
        return a_ * (u * u) + c_ * (2 * u * t) + b_ * (t * t);
    }
    case Kind::Arc: {
        if (t <= 0) return a_;
        if (t >= 1) return b_;
        double th = theta0_ + sweep_ * t;
        double r = r0_ + (r1_ - r0_) * t;
        return {c_.x + r * std::cos(th), c_.y + r * std::sin(th), a_.z + (b_.z - a_.z) * t};
    }
    }
    return a_;
}

Vec3 Curve::derivative(double t) const {
    switch (kind_) {
    case Kind::Line:
        return b_ - a_;
    case Kind::Bezier:
        return (c_ - a_) * (2 * (1 - t)) + (b_ - c_) * (2 * t);
    case Kind::Arc: {
        double th = theta0_ + sweep_ * t;
        double r = r0_ + (r1_ - r0_) * t;
        double dr = r1_ - r0_;
        return {dr * std::cos(th) - r * sweep_ * std::sin(th), dr * std::sin(th) + r * sweep_ * std::cos(th),
                b_.z - a_.z};
    }
    }
    return {};
}

double Curve::length_to(double t) const {
    t = std::clamp(t, 0.0, 1.0);
    if (kind_ == Kind::Line) return norm(b_ - a_) * t;
    double total = 0;
    double h = 1.0 / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        double lo = p * h;
        if (lo >= t) break;
        double hi = std::min(lo + h, t);
        double w = hi - lo;
        for (int k = 0; k < 5; ++k) total += kWeights[k] * w * norm(derivative(lo + kNodes[k] * w));
    }
    return total;
}

double Curve::length() const {
    return length_to(1.0);
}

double Curve::param_at_fraction(double fraction) const {
    fraction = std::clamp(fraction, 0.0, 1.0);
    if (kind_ == Kind::Line || fraction == 0.0 || fraction == 1.0) return fraction;
    double total = length();
    if (total <= 0) return fraction;
    double target = fraction * total;
    double lo = 0, hi = 1, t = fraction;
    for (int it = 0; it < 100; ++it) {
        double f = length_to(t) - target;
        if (std::abs(f) < 1e-13 * std::max(1.0, total)) break;
        if (f > 0) hi = t;
        else lo = t;
        double d = norm(derivative(t));
        double next = d > 1e-300 ? t - f / d : 0.5 * (lo + hi);
        t = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
    }
    return t;
}

}  // namespace lyphc
