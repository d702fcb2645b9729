#pragma once

// Floating-point verification of the explicit torus-bundle attaching maps
// over the punctured 3-space and its antipodal quotient: the chart shifts
// phi_+/phi_-, the attachments h and h^G, and the smooth identities they
// satisfy (equivariance under the antipodal involution, closedness of the
// local primitive).  Everything here works on the 2*pi-normalized torus
// R^3 / (2 pi Z)^3 and is verification-grade floating point with stated
// tolerances; the rest of the library is exact.

#include <array>

#include "torinv/affine_groups.hpp"
#include "torinv/exact_linalg.hpp"

namespace torinv {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// A point of R^3 / (2 pi Z)^3 with components normalized to [0, 2 pi).
struct TorusPoint2Pi {
    std::array<double, 3> coords{};
};

TorusPoint2Pi make_torus_point(std::array<double, 3> raw);  // reduces mod 2 pi

// Max over coordinates of the quotient-circle distance.
double toral_distance(const TorusPoint2Pi& a, const TorusPoint2Pi& b);

// Converters between the 2*pi normalization used by this module and the
// R^n/Z^n convention used by the exact modules.
std::array<double, 3> to_unit_cube(const TorusPoint2Pi& t);
TorusPoint2Pi from_unit_cube(const std::array<double, 3>& u);

// A base point; the chart formulas degenerate where x1 = x2 = 0.
struct BasePoint {
    std::array<double, 3> x{};
};

enum class Sign { plus, minus };

// phi_+(x) = (arg(x1 + i x2), log(((x1)^2 + (x2)^2) / (1 + (x2)^2)) / 2, 0),
// phi_-(x) = (-arg(x1 + i x2) + pi, -log(...) / 2, 0), with arg the principal
// branch (cut along the negative x1-axis).  Throws DegenerateLocus when
// x1 = x2 = 0.
std::array<double, 3> phi_plus(const BasePoint& x);
std::array<double, 3> phi_minus(const BasePoint& x);

struct AttachResult {
    BasePoint base;
    TorusPoint2Pi fiber;
};

// h_sign(x, t) = (x, t + phi_sign(x)), fiber reduced mod 2 pi.
AttachResult attach_h(Sign sign, const BasePoint& x, const TorusPoint2Pi& t);

// h^G_sign(x, t) = (x, t + (G^-1)^T phi_sign(G x)) for G in GL(3, Z).
AttachResult attach_h_G(const GLnZ& G, Sign sign, const BasePoint& x,
                        const TorusPoint2Pi& t);

// (G^-1)^T (1, 0, 0), computed exactly.  Its gcd is always 1: the
// construction only reaches primitive classes.
IntVec chern_vector(const GLnZ& G);

// Max toral coordinate distance between a . h_+(x, t) and h_-(a . (x, t)),
// where a is the antipodal involution (x, t) -> (-x, -t).  The attaching
// maps commute with the involution, so this is < 1e-9 for every valid input.
double check_equivariance(const BasePoint& x, const TorusPoint2Pi& t);

// Central-difference residual of the closedness identity
//   d/dx2 arg(x1 + i x2) = d/dx1 (log(((x1)^2+(x2)^2)/(1+(x2)^2)) / 2)
// at step h; O(h^2), below 1e-6 at h = 1e-4 away from the branch cut.
// Throws BranchCutProximity when the arg difference quotient straddles the
// cut (jump of about 2 pi) and DegenerateLocus when a stencil point has
// x1 = x2 = 0.
double check_closedness(const BasePoint& x, double h);

}  // namespace torinv
