#include "torinv/constructions.hpp"

#include <cmath>
#include <string>

#include "torinv/errors.hpp"

namespace torinv {

namespace {

double reduce_2pi(double v) {
    double r = std::fmod(v, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double entry_as_double(const Int& v) { return v.convert_to<double>(); }

std::array<double, 3> apply_int_matrix(const IntMatrix& m, const std::array<double, 3>& v) {
    std::array<double, 3> out{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            out[i] += entry_as_double(m.at(i, j)) * v[j];
    return out;
}

void require_off_locus(const BasePoint& x) {
    if (x.x[0] * x.x[0] + x.x[1] * x.x[1] == 0.0)
        throw DegenerateLocus("x1 = x2 = 0: arg and log are undefined on this locus");
}

// log(((x1)^2 + (x2)^2) / (1 + (x2)^2)) / 2; the log-primitive paired with arg.
double log_term(double x1, double x2) {
    return 0.5 * std::log((x1 * x1 + x2 * x2) / (1.0 + x2 * x2));
}

}  // namespace

TorusPoint2Pi make_torus_point(std::array<double, 3> raw) {
    TorusPoint2Pi t;
    for (std::size_t i = 0; i < 3; ++i) t.coords[i] = reduce_2pi(raw[i]);
    return t;
}

double toral_distance(const TorusPoint2Pi& a, const TorusPoint2Pi& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        double d = std::fabs(reduce_2pi(a.coords[i]) - reduce_2pi(b.coords[i]));
        d = std::min(d, kTwoPi - d);
        worst = std::max(worst, d);
    }
    return worst;
}

std::array<double, 3> to_unit_cube(const TorusPoint2Pi& t) {
    return {t.coords[0] / kTwoPi, t.coords[1] / kTwoPi, t.coords[2] / kTwoPi};
}

TorusPoint2Pi from_unit_cube(const std::array<double, 3>& u) {
    return make_torus_point({u[0] * kTwoPi, u[1] * kTwoPi, u[2] * kTwoPi});
}

std::array<double, 3> phi_plus(const BasePoint& x) {
    require_off_locus(x);
    return {std::atan2(x.x[1], x.x[0]), log_term(x.x[0], x.x[1]), 0.0};
}

std::array<double, 3> phi_minus(const BasePoint& x) {
    require_off_locus(x);
    return {-std::atan2(x.x[1], x.x[0]) + kTwoPi / 2.0, -log_term(x.x[0], x.x[1]), 0.0};
}

AttachResult attach_h(Sign sign, const BasePoint& x, const TorusPoint2Pi& t) {
    std::array<double, 3> phi = sign == Sign::plus ? phi_plus(x) : phi_minus(x);
    return AttachResult{
        x, make_torus_point(
               {t.coords[0] + phi[0], t.coords[1] + phi[1], t.coords[2] + phi[2]})};
}

AttachResult attach_h_G(const GLnZ& G, Sign sign, const BasePoint& x,
                        const TorusPoint2Pi& t) {
    if (G.n() != 3)
        throw DimensionMismatch("attaching maps are defined for 3x3 matrices, got " +
                                std::to_string(G.n()) + "x" + std::to_string(G.n()));
    BasePoint gx{apply_int_matrix(G.matrix(), x.x)};
    std::array<double, 3> phi = sign == Sign::plus ? phi_plus(gx) : phi_minus(gx);
    std::array<double, 3> shift =
        apply_int_matrix(inverse_unimodular(G.matrix()).transposed(), phi);
    return AttachResult{
        x, make_torus_point({t.coords[0] + shift[0], t.coords[1] + shift[1],
                             t.coords[2] + shift[2]})};
}

IntVec chern_vector(const GLnZ& G) {
    IntMatrix dual = inverse_unimodular(G.matrix()).transposed();
    IntVec out(G.n());
    for (std::size_t i = 0; i < G.n(); ++i) out[i] = dual.at(i, 0);
    return out;
}

double check_equivariance(const BasePoint& x, const TorusPoint2Pi& t) {
    std::array<double, 3> phi = phi_plus(x);
    // a . h_+(x, t) = (-x, -t - phi_+(x)).
    TorusPoint2Pi lhs = make_torus_point(
        {-t.coords[0] - phi[0], -t.coords[1] - phi[1], -t.coords[2] - phi[2]});
    BasePoint minus_x{{-x.x[0], -x.x[1], -x.x[2]}};
    TorusPoint2Pi minus_t =
        make_torus_point({-t.coords[0], -t.coords[1], -t.coords[2]});
    // h_-(a . (x, t)) = (-x, -t + phi_-(-x)).
    TorusPoint2Pi rhs = attach_h(Sign::minus, minus_x, minus_t).fiber;
    return toral_distance(lhs, rhs);
}

double check_closedness(const BasePoint& x, double h) {
    if (h <= 0.0) throw DimensionMismatch("finite-difference step must be positive");
    double x1 = x.x[0], x2 = x.x[1];
    for (double p : {x1 - h, x1, x1 + h})
        if (p * p + x2 * x2 == 0.0)
            throw DegenerateLocus("finite-difference stencil touches x1 = x2 = 0");
    for (double q : {x2 - h, x2 + h})
        if (x1 * x1 + q * q == 0.0)
            throw DegenerateLocus("finite-difference stencil touches x1 = x2 = 0");

    double arg_hi = std::atan2(x2 + h, x1);
    double arg_lo = std::atan2(x2 - h, x1);
    if (std::fabs(arg_hi - arg_lo) > kTwoPi / 2.0)
        throw BranchCutProximity(
            "arg difference quotient straddles the cut on the negative x1-axis");
    double d_arg = (arg_hi - arg_lo) / (2.0 * h);
    double d_log = (log_term(x1 + h, x2) - log_term(x1 - h, x2)) / (2.0 * h);
    return std::fabs(d_arg - d_log);
}

}  // namespace torinv
