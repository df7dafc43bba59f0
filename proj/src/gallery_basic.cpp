#include <cmath>

#include "conefix/gallery.hpp"

namespace conefix {

Eigen::VectorXd cone_pow(const Eigen::VectorXd& x, double alpha)
{
    return x.cwiseMax(0.0).array().pow(alpha).matrix();
}

OperatorHandle make_linf_operator(Eigen::Index N)
{
    if (N < 1) throw DomainError("l-infinity truncation needs N >= 1");
    Eigen::VectorXd w(N);
    for (Eigen::Index n = 0; n < N; ++n) w[n] = std::pow(static_cast<double>(n + 1), 0.25);
    auto grid = make_grid(Grid::index(N));

    OperatorHandle h;
    h.name = "linf";
    h.profile = Profile::power(0.5);
    h.apply_fn = [w, grid](const ConeVector& x) {
        if (!(x.grid() == *grid)) throw GridMismatch("linf: wrong grid");
        return x.with(w.cwiseProduct(cone_pow(x.values(), 0.5)).cwiseMin(1.0));
    };
    return h;
}

OperatorHandle make_scalar_power(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
    OperatorHandle h;
    h.name = "scalar-power";
    h.profile = Profile::power(alpha);
    h.apply_fn = [alpha](const ConeVector& x) {
        if (x.size() != 1) throw GridMismatch("scalar-power acts on one-node grids");
        return x.with(cone_pow(x.values(), alpha));
    };
    return h;
}

ConeVector tilde_projection(const ConeVector& x, const ConeVector& x_star)
{
    const double d = distance(x, x_star);
    const double r = sup_norm(x_star);
    if (d < r) return x_star;
    return axpy(r / d, x_star - x, x);
}

ConeVector hat_shift(const ConeVector& x, const ConeVector& x_star, double lambda)
{
    const double d = distance(x, x_star);
    const double r = sup_norm(x_star);
    if (d > lambda * r) return x_star - x;
    return scale(d / (lambda * r), x_star - x);
}

OperatorHandle make_tilde_operator(const OperatorHandle& A, const ConeVector& x_star)
{
    if (!(sup_norm(x_star) > 0.0)) throw DomainError("tilde construction needs a nonzero fixed point");
    OperatorHandle h;
    h.name = "tilde(" + A.name + ")";
    h.order_tol = A.order_tol;
    h.concavity_domain = ConicalSegment(ConeVector::zeros(x_star.grid_ptr()), scale(2.0, x_star));
    h.apply_fn = [A, x_star](const ConeVector& x) {
        const ConeVector p = tilde_projection(x, x_star);
        return x + A(p) - p;
    };
    return h;
}

OperatorHandle make_hat_operator(const OperatorHandle& A, const ConeVector& x_star, double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0,1)");
    if (!(sup_norm(x_star) > 0.0)) throw DomainError("hat construction needs a nonzero fixed point");
    OperatorHandle h;
    h.name = "hat(" + A.name + ")";
    h.order_tol = A.order_tol;
    const ConeVector zero = ConeVector::zeros(x_star.grid_ptr());
    h.concavity_domain = ConicalSegment(zero, x_star);
    const double tol = A.order_tol;
    h.apply_fn = [A, x_star, lambda, zero, tol](const ConeVector& x) {
        if (!leq(zero, x, tol) || !leq(x, x_star, tol)) throw DomainError("hat operator: input outside <0, x*>");
        const ConeVector p = hat_shift(x, x_star, lambda);
        return A(p + x) - p;
    };
    return h;
}

} // namespace conefix
