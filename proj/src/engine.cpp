#include "conefix/engine.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "conefix/cone_io.hpp"

namespace conefix {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

void require_n0(int n0, int m0)
{
    if (m0 < 1 || n0 < m0) throw DomainError("need n0 >= m0 >= 1");
}

} // namespace

ConeVector OperatorHandle::operator()(const ConeVector& x) const
{
    ConeVector y = apply_fn(x);
    require_compatible(x, y);
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (!(y[i] >= -order_tol))
            throw CertificationError(name + ": image leaves the cone at node " + std::to_string(i) + " (value " +
                                     format_double(y[i]) + ")");
    return y;
}

const Profile& OperatorHandle::require_profile() const
{
    if (!profile) throw DomainError(name + ": operator has no concavity profile");
    return *profile;
}

ConeVector apply_power(const OperatorHandle& A, ConeVector x, int n)
{
    if (n < 0) throw DomainError("negative operator power");
    for (int i = 0; i < n; ++i) x = A(x);
    return x;
}

std::string to_string(Mode m)
{
    switch (m) {
    case Mode::Decreasing: return "decreasing";
    case Mode::Increasing: return "increasing";
    case Mode::General: return "general";
    }
    return "unknown";
}

Bracket verify_bracket(const OperatorHandle& A, const ConeVector& v0, int n0, int m0, double floor)
{
    require_n0(n0, m0);
    if (!(floor > 0.0)) throw DomainError("floor must be positive");
    const ConeVector den = apply_power(A, v0, n0 - m0);
    const ConeVector num = apply_power(A, den, m0);
    const double dfloor = floor * sup_norm(den);
    const double nfloor = floor * sup_norm(num);
    if (!(dfloor > 0.0)) throw CertificationError("bracket: reference iterate is zero");

    Bracket b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (Eigen::Index i = 0; i < den.size(); ++i) {
        if (den[i] >= dfloor) {
            const double r = num[i] / den[i];
            b.r1 = std::min(b.r1, r);
            b.r2 = std::max(b.r2, r);
        } else if (num[i] >= nfloor && nfloor > 0.0) {
            throw CertificationError("bracket failure at node " + std::to_string(i) +
                                     ": denominator below floor but numerator is not");
        }
    }
    if (!(b.r1 > 0.0)) throw CertificationError("bracket: lower ratio r1 is not positive");
    return b;
}

std::vector<double> ConvergenceReport::certified_bounds() const
{
    std::vector<double> out(residuals.size());
    if (residuals.empty()) return out;
    double c = std::isfinite(certified_constant) ? certified_constant : residuals.front();
    for (double& v : out) {
        v = c;
        c *= certified_rate;
    }
    return out;
}

double observed_rate(const std::vector<double>& residuals, int window)
{
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n = residuals.size(); n-- > 0 && static_cast<int>(pts.size()) < window;)
        if (residuals[n] > 0.0) pts.emplace_back(static_cast<double>(n), std::log(residuals[n]));
    if (pts.size() < 2) return nan_value;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pts.size());
    const double den = m * sxx - sx * sx;
    if (den == 0.0) return nan_value;
    return std::exp((m * sxy - sx * sy) / den);
}

namespace {

enum class Direction { Down, Up, Free };

// Shared successive-approximation loop. `inside` checks each new iterate.
template <typename Inside>
ConvergenceReport iterate(const OperatorHandle& A, ConeVector& x, ConeVector ax, Direction dir, double rate,
                          const IterationOptions& opt, Inside&& inside)
{
    ConvergenceReport rep;
    rep.certified_rate = rate;
    const double stop = opt.tol * (1.0 - rate);
    for (int n = 0;; ++n) {
        const double r = distance(ax, x);
        rep.residuals.push_back(r);
        if (dir == Direction::Down && !leq(ax, x, opt.order_tol))
            throw IterationError(A.name + ": iterates stopped decreasing at step " + std::to_string(n), n);
        if (dir == Direction::Up && !leq(x, ax, opt.order_tol))
            throw IterationError(A.name + ": iterates stopped increasing at step " + std::to_string(n), n);
        if (!inside(ax))
            throw IterationError(A.name + ": iterate left the certified segment at step " + std::to_string(n), n);
        x = std::move(ax);
        if (r <= stop) {
            rep.iterations = n;
            rep.converged = true;
            break;
        }
        if (n + 1 >= opt.max_iter) {
            rep.iterations = n + 1;
            rep.observed_rate = observed_rate(rep.residuals);
            throw NonConvergenceError(A.name + ": no convergence in " + std::to_string(opt.max_iter) + " steps",
                                      rep);
        }
        ax = A(x);
    }
    rep.observed_rate = observed_rate(rep.residuals);
    rep.fixed_point_residual = distance(A(x), x);
    return rep;
}

} // namespace

Solution solve_decreasing(const OperatorHandle& A, const ConeVector& v0, int n0, double sigma0,
                          const IterationOptions& opt)
{
    const Profile& phi = A.require_profile();
    if (!(sigma0 > 0.0 && sigma0 < 1.0)) throw DomainError("sigma0 must lie in (0,1)");
    require_n0(n0, 1);

    ConeVector x0 = apply_power(A, v0, n0 - 1);
    ConeVector ax0 = A(x0);
    if (!leq(ax0, x0, opt.order_tol)) throw CertificationError("A^n0 v0 <= A^(n0-1) v0 fails");
    if (!leq(scale(sigma0, x0), ax0, opt.order_tol))
        throw CertificationError("sigma0 A^(n0-1) v0 <= A^n0 v0 fails for sigma0 = " + format_double(sigma0));

    Solution s;
    s.cert.mode = Mode::Decreasing;
    s.cert.n0 = n0;
    s.cert.sigma0 = sigma0;
    s.cert.tau_star = solve_tau(phi, sigma0);
    s.cert.delta = nan_value;
    s.cert.rate = rate_k(phi, sigma0);
    try {
        const Bracket b = verify_bracket(A, v0, n0, 1, opt.floor);
        s.cert.r1 = b.r1;
        s.cert.r2 = b.r2;
    } catch (const CertificationError&) {
        s.cert.r1 = s.cert.r2 = nan_value;
    }

    ConeVector x = x0;
    s.report = iterate(A, x, std::move(ax0), Direction::Down, s.cert.rate, opt, [](const ConeVector&) { return true; });
    // x_n - x_{n+1} <= (1 - phi^n(sigma0)) x_n <= (1 - sigma0) k^n x0.
    s.report.certified_constant = (1.0 - sigma0) * sup_norm(x0);
    s.report.bracket_ok = segment_contains(ConicalSegment(scale(s.cert.tau_star, x0), x0), x, opt.order_tol);
    s.x_star = std::move(x);
    s.x0 = std::move(x0);
    return s;
}

Solution solve_increasing(const OperatorHandle& A, const ConeVector& v0, int n0, double r0,
                          const IterationOptions& opt)
{
    const Profile& phi = A.require_profile();
    if (!(r0 > 1.0)) throw DomainError("r0 must exceed 1");
    require_n0(n0, 1);

    ConeVector x0 = apply_power(A, v0, n0 - 1);
    ConeVector ax0 = A(x0);
    if (!leq(x0, ax0, opt.order_tol)) throw CertificationError("A^(n0-1) v0 <= A^n0 v0 fails");
    if (!leq(ax0, scale(r0, x0), opt.order_tol))
        throw CertificationError("A^n0 v0 <= r0 A^(n0-1) v0 fails for r0 = " + format_double(r0));

    Solution s;
    s.cert.mode = Mode::Increasing;
    s.cert.n0 = n0;
    s.cert.r0 = r0;
    s.cert.tau_star = nan_value;
    s.cert.delta = solve_delta(phi, r0);
    s.cert.rate = (1.0 - phi_eval(phi, 1.0 / r0)) / (1.0 - 1.0 / r0);
    try {
        const Bracket b = verify_bracket(A, v0, n0, 1, opt.floor);
        s.cert.r1 = b.r1;
        s.cert.r2 = b.r2;
    } catch (const CertificationError&) {
        s.cert.r1 = s.cert.r2 = nan_value;
    }

    const ConicalSegment seg(x0, scale(s.cert.delta, x0));
    ConeVector x = x0;
    s.report = iterate(A, x, std::move(ax0), Direction::Up, s.cert.rate, opt,
                       [&](const ConeVector& y) { return segment_contains(seg, y, opt.order_tol); });
    s.report.bracket_ok = segment_contains(seg, x, opt.order_tol);
    // x_{n+1} - x_n <= (1 - phi^n(1/r0)) x* with x* <= delta x0.
    s.report.certified_constant = (1.0 - 1.0 / r0) * s.cert.delta * sup_norm(x0);
    s.x_star = std::move(x);
    s.x0 = std::move(x0);
    return s;
}

Solution solve_general(const OperatorHandle& A, const ConeVector& v0, int n0, double r1, double r2,
                       const IterationOptions& opt)
{
    const Profile& phi = A.require_profile();
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 1.0)) throw DomainError("need 0 < r1 < 1 < r2");
    require_n0(n0, 1);

    ConeVector x0 = apply_power(A, v0, n0 - 1);
    ConeVector ax0 = A(x0);
    if (!leq(scale(r1, x0), ax0, opt.order_tol) || !leq(ax0, scale(r2, x0), opt.order_tol))
        throw CertificationError("r1 A^(n0-1) v0 <= A^n0 v0 <= r2 A^(n0-1) v0 fails");

    Solution s;
    s.cert.mode = Mode::General;
    s.cert.n0 = n0;
    s.cert.r1 = r1;
    s.cert.r2 = r2;
    s.cert.tau_star = solve_tau(phi, r1);
    s.cert.delta = solve_delta(phi, r2);
    s.cert.rate = rate_k_general(phi, r1, r2);

    const ConicalSegment seg(scale(s.cert.tau_star, x0), scale(s.cert.delta, x0));
    ConeVector x = x0;
    s.report = iterate(A, x, std::move(ax0), Direction::Free, s.cert.rate, opt,
                       [&](const ConeVector& y) { return segment_contains(seg, y, opt.order_tol); });
    s.report.bracket_ok = segment_contains(seg, x, opt.order_tol);
    s.x_star = std::move(x);
    s.x0 = std::move(x0);
    return s;
}

int count_distinct(const std::vector<ConeVector>& v, double tol)
{
    std::vector<const ConeVector*> reps;
    for (const auto& x : v) {
        bool seen = false;
        for (const auto* r : reps)
            if (distance(*r, x) <= tol) {
                seen = true;
                break;
            }
        if (!seen) reps.push_back(&x);
    }
    return static_cast<int>(reps.size());
}

} // namespace conefix
