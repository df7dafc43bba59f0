#pragma once

#include <Eigen/Dense>

#include <vector>

#include "conefix/cone.hpp"

namespace conefix {

// Composite Simpson weights; trapezoid when the node count is even.
// A single node gets weight zero.
Eigen::VectorXd composite_weights(const Axis& axis);

struct QuadratureRule {
    std::vector<Eigen::VectorXd> weights; // per axis
    std::vector<double> radius;           // truncation radius per axis
    double tail_bound = 0.0;
    double rule_error = 0.0;

    double budget() const { return tail_bound + rule_error; }
};

QuadratureRule make_rule(const Grid& grid, double tail_bound = 0.0, double rule_error = 0.0);

// H_beta(u) = exp(-u^2 / (4 beta)) / sqrt(4 pi beta); also the heat kernel at time beta.
double gauss_kernel(double u, double beta);

// One-sided tail mass of H_beta beyond r.
double gaussian_tail(double beta, double r);

// Smallest r on a 0.5 lattice with one-sided tail mass <= tol.
double gaussian_tail_radius(double beta, double tol);

// Simpson error bound for integrating H_beta over an axis.
double gaussian_simpson_error(double beta, const Axis& axis);

// K(i, l) = w_l * (H(x_i - y_l) - H(x_i + y_l)) on a half-line axis [0, R].
Eigen::MatrixXd difference_kernel_matrix(double beta, const Axis& axis);

// Closed form of the difference kernel applied to the constant 1 on [0, R].
double difference_kernel_mass(double beta, double x, double r);

ConeVector apply_difference_kernel(double beta, const ConeVector& f, const Grid& grid);

// K(i, l) = w_l * H_tau(x_i - y_l); rows rescaled to unit sum when normalize is set,
// which keeps the identity  int U(x, y, tau) dy = 1  exact on a truncated line.
Eigen::MatrixXd heat_kernel_matrix(const Axis& axis, double tau, bool normalize);

// Time quadrature for  int_0^t F(t - s, s) ds  at t = t_index * dt.
struct TimeNode {
    double tau = 0.0;    // t - s
    double weight = 0.0;
    Eigen::Index k0 = 0; // s lies in [t_k0, t_k0 + dt]
    double theta = 0.0;  // s = t_k0 + theta * dt
    int lag = -1;        // j - k0 when s is a grid time, else -1
    int panel = -1;      // index into the shared graded taus when s is off-grid
    bool collapsed = false;
};

struct HeatTimeRule {
    std::vector<TimeNode> nodes;
    double final_panel = 0.0;
};

// Off-grid taus shared by every t_index for the given time axis.
std::vector<double> heat_graded_taus(double dt, int panels);

// Grid times s_k, k < t_index, use the composite rule on [0, t - dt]; the last
// interval [t - dt, t] is graded toward s = t with ratio 2 (panels - 1 two-point
// Gauss panels) and its final panel [t - h, t] is collapsed to h * F(0, t - h/2).
HeatTimeRule heat_rule(const Grid& grid, Eigen::Index t_index, int panels = 8);

} // namespace conefix
