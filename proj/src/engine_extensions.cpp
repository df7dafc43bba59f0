#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "conefix/cone_io.hpp"
#include "conefix/engine.hpp"
#include "sampling.hpp"

namespace conefix {

namespace {

double fixed_tol(double tol, double order_tol) { return std::max(10.0 * tol, order_tol); }

} // namespace

ComplementResult complement_fixed_point(const OperatorHandle& A, const OperatorHandle& A0, const ConeVector& v0,
                                        int n0, double gamma0, double alpha, const IterationOptions& opt,
                                        std::uint64_t seed)
{
    const Profile& phi = A.require_profile();
    if (phi.kind() != Profile::Kind::Power || std::abs(phi.gamma() - alpha) > 1e-15)
        throw DomainError("complement construction needs the profile sigma^alpha");
    if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw DomainError("gamma0 must lie in (0,1)");

    ComplementResult out;
    out.x0 = apply_power(A, v0, n0 - 1);
    const ConeVector ax0 = A(out.x0);
    if (distance(ax0, out.x0) <= 10.0 * opt.tol) throw CertificationError("A^n0 v0 coincides with A^(n0-1) v0");

    const Bracket b = verify_bracket(A, v0, n0, 1, opt.floor);
    out.base = solve_decreasing(A, v0, n0, std::min(b.r1, 1.0 - 1e-12), opt);
    out.x_star = out.base.x_star;

    const double c_lo = std::pow(gamma0, 1.0 - alpha);
    std::mt19937_64 rng(seed);
    const ConeVector zero = ConeVector::zeros(out.x0.grid_ptr());
    for (int s = 0; s < 50; ++s) {
        const ConeVector u = detail::sample_segment(zero, out.x0, rng, s);
        const ConeVector au = A(out.x0 - u);
        const ConeVector a0u = A0(u);
        const ConeVector lower = out.x0 - au;
        const ConeVector upper = axpy(-c_lo, au, out.x0);
        if (!leq(lower, a0u, opt.order_tol) || !leq(a0u, upper, opt.order_tol))
            throw CertificationError("two-sided inequality for A0 fails on sample " + std::to_string(s));
    }

    ConeVector x = out.x0 - out.x_star;
    const double stop = opt.tol * (1.0 - out.base.cert.rate);
    bool done = false;
    for (int n = 0; n < opt.max_iter; ++n) {
        ConeVector y = A0(x);
        const double r = distance(x, y);
        x = std::move(y);
        if (r <= stop) {
            out.iterations = n;
            done = true;
            break;
        }
    }
    if (!done) throw NonConvergence("complement iteration did not converge");
    out.fixed_point_residual = distance(A0(x), x);

    if (sup_norm(x) <= 10.0 * opt.tol) throw CertificationError("complement fixed point is zero");
    if (distance(x, out.x0) <= 10.0 * opt.tol) throw CertificationError("complement fixed point equals A^(n0-1) v0");
    out.sandwich_ok = leq(out.x0 - out.x_star, x, opt.order_tol) &&
                      leq(x, axpy(-gamma0, out.x_star, out.x0), opt.order_tol);
    out.x_tilde = std::move(x);
    return out;
}

SumResult solve_sum(const OperatorHandle& A, const OperatorHandle& A0, const ConeVector& x_star, double C0,
                    const IterationOptions& opt, std::uint64_t seed)
{
    const Profile& phi = A.require_profile();
    if (!(C0 > 0.0)) throw DomainError("C0 must be positive");
    if (distance(A(x_star), x_star) > fixed_tol(opt.tol, opt.order_tol))
        throw CertificationError("x* is not a fixed point of A");
    const ConeVector zero = ConeVector::zeros(x_star.grid_ptr());
    if (sup_norm(A0(zero)) > opt.order_tol) throw CertificationError("A0 does not fix zero");

    SumResult out;
    out.r_star = solve_delta(phi, C0 + 1.0);
    out.k_star = (1.0 - phi_eval(phi, 1.0 / out.r_star)) / (1.0 - 1.0 / out.r_star);

    const ConeVector top = scale(out.r_star, x_star);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < 50; ++s) {
        const ConeVector u = detail::sample_segment(x_star, top, rng, s);
        const ConeVector v = detail::sample_segment(u, top, rng, s + 1);
        const ConeVector a0u = A0(u);
        if (!leq(a0u, scale(C0, A(u)), opt.order_tol))
            throw CertificationError("A0 u <= C0 A u fails on sample " + std::to_string(s));
        if (!leq(a0u, A0(v), opt.order_tol)) throw CertificationError("A0 is not monotone on sample " + std::to_string(s));
        const double t = unit(rng);
        if (!leq(scale(t, a0u), A0(scale(t, u)), opt.order_tol))
            throw CertificationError("A0(t u) >= t A0 u fails on sample " + std::to_string(s));
    }

    auto sum_apply = [&](const ConeVector& y) { return A(y) + A0(y); };
    ConeVector y = x_star;
    out.report.certified_rate = out.k_star;
    const double stop = opt.tol * (1.0 - out.k_star);
    for (int n = 0;; ++n) {
        ConeVector z = sum_apply(y);
        const double r = distance(z, y);
        out.report.residuals.push_back(r);
        if (!leq(y, z, opt.order_tol))
            throw IterationError("sum iterates stopped increasing at step " + std::to_string(n), n);
        y = std::move(z);
        if (r <= stop) {
            out.report.iterations = n;
            out.report.converged = true;
            break;
        }
        if (n + 1 >= opt.max_iter) throw NonConvergenceError("sum iteration did not converge", out.report);
    }
    out.report.observed_rate = observed_rate(out.report.residuals);
    out.report.fixed_point_residual = distance(sum_apply(y), y);
    out.bracket_ok = segment_contains(ConicalSegment(x_star, top), y, opt.order_tol);
    out.report.bracket_ok = out.bracket_ok;

    // Plain A from x~ returns to x* geometrically.
    ConeVector z = y;
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sup_norm(x_star));
    out.return_ok = true;
    for (int n = 0; n < opt.max_iter; ++n) {
        const double d = distance(z, x_star);
        out.return_distances.push_back(d);
        if (d <= opt.tol) break;
        z = A(z);
    }
    const double c1 = out.return_distances.front();
    double bound = c1;
    for (double d : out.return_distances) {
        if (d > floor && d > bound * (1.0 + 1e-12)) out.return_ok = false;
        bound *= out.k_star;
    }
    out.x_tilde = std::move(y);
    return out;
}

PeriodicResult periodic_points(const OperatorHandle& A, const ConeVector& v0, int n0, int m0,
                               const IterationOptions& opt)
{
    const Profile& phi = A.require_profile();
    PeriodicResult out;
    out.bracket = verify_bracket(A, v0, n0, m0, opt.floor);
    const double r1 = std::min(out.bracket.r1, 0.5);
    const double r2 = std::max(out.bracket.r2, 2.0);
    out.rate = rate_k_general(phi, r1, r2);

    std::vector<ConeVector> block(static_cast<std::size_t>(m0));
    ConeVector x = apply_power(A, v0, n0 - m0);
    for (int j = 0; j < m0; ++j) {
        block[j] = x;
        x = A(x);
    }
    const double stop = opt.tol * (1.0 - out.rate);
    int applications = m0;
    for (;;) {
        double worst = 0.0;
        for (int j = 0; j < m0; ++j) {
            worst = std::max(worst, distance(x, block[j]));
            block[j] = x;
            x = A(x);
        }
        applications += m0;
        ++out.sweeps;
        if (worst <= stop) break;
        if (applications >= opt.max_iter) throw NonConvergence("periodic subsequences did not converge");
    }
    for (const auto& p : block) {
        if (sup_norm(p) <= opt.order_tol) throw CertificationError("periodic point is zero");
        out.period_residuals.push_back(distance(apply_power(A, p, m0), p));
    }
    out.points = std::move(block);
    return out;
}

CollapseResult collapse_check(const std::vector<ConeVector>& points, int i0, int j0, double d1, double d2, double tol)
{
    const int m0 = static_cast<int>(points.size());
    if (i0 < 0 || j0 < 0 || i0 >= m0 || j0 >= m0 || i0 == j0) throw DomainError("need 0 <= i0 != j0 < m0");
    if (!(d1 > 0.0 && d1 < 1.0 && d2 > 1.0)) throw DomainError("need 0 < d1 < 1 < d2");
    const int g = std::gcd(m0, std::abs(i0 - j0));

    if (g == 1) {
        const ConeVector& pi = points[i0];
        const ConeVector& pj = points[j0];
        if (!leq(scale(d1, pi), pj, tol) || !leq(pj, scale(d2, pi), tol))
            throw CertificationError("bracket between p_i0 and p_j0 fails");
        for (int j = 1; j < m0; ++j)
            if (distance(points[j], points[0]) > tol)
                throw CertificationError("periodic points differ although gcd(m0, |i0-j0|) = 1");
        return points[0];
    }

    DistinctClasses dc;
    dc.gcd = g;
    dc.classes.resize(static_cast<std::size_t>(g));
    dc.classes_equal = true;
    for (int j = 0; j < m0; ++j) {
        auto& cls = dc.classes[j % g];
        if (!cls.empty() && distance(points[cls.front()], points[j]) > tol) dc.classes_equal = false;
        cls.push_back(j);
    }
    return dc;
}

UniquenessResult uniqueness_probe(const OperatorHandle& A, const ConeVector& x_star, double r1, double r2,
                                  int n_starts, double tol, std::uint64_t seed, int max_iter)
{
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 1.0)) throw DomainError("need 0 < r1 < 1 < r2");
    if (n_starts < 2) throw DomainError("need at least the two corner starts");
    if (distance(A(x_star), x_star) > fixed_tol(tol, A.order_tol)) throw CertificationError("x* is not a fixed point");

    UniquenessResult out;
    const ConeVector lo = scale(r1, x_star), hi = scale(r2, x_star);
    std::vector<ConeVector> starts{lo, hi};
    std::mt19937_64 rng(seed);
    for (int s = 2; s < n_starts; ++s) starts.push_back(detail::sample_segment(lo, hi, rng, s));

    const double near = fixed_tol(tol, A.order_tol);
    bool all_near = true;
    for (auto& x : starts) {
        for (int n = 0; n < max_iter; ++n) {
            ConeVector y = A(x);
            const double r = distance(x, y);
            x = std::move(y);
            if (r <= tol) break;
        }
        if (distance(x, x_star) > near) {
            all_near = false;
            out.offending.push_back(x);
        }
        out.limits.push_back(x);
    }

    if (A.profile) {
        double a = r1, b = 1.0 / r2;
        for (long n = 0; n <= 1000000; ++n) {
            if (1.0 - a <= tol && 1.0 - b <= tol) {
                out.squeeze_horizon = n;
                break;
            }
            a = phi_eval(*A.profile, a);
            b = phi_eval(*A.profile, b);
        }
    }
    out.unique = all_near && out.squeeze_horizon >= 0;
    return out;
}

AuditResult audit_monotone(const OperatorHandle& A, const ConicalSegment& domain, int samples, std::uint64_t seed)
{
    AuditResult res;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        const ConeVector u = detail::sample_segment(domain.lo, domain.hi, rng, s);
        const ConeVector v = detail::sample_segment(u, domain.hi, rng, s / 2);
        const double excess = (A(u).values() - A(v).values()).maxCoeff();
        ++res.samples;
        if (excess > A.order_tol) {
            ++res.violations;
            res.worst = std::max(res.worst, excess);
        }
    }
    return res;
}

AuditResult audit_concavity(const OperatorHandle& A, const Profile& phi, const ConicalSegment& domain, int samples,
                            std::uint64_t seed)
{
    AuditResult res;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int s = 0; s < samples; ++s) {
        const ConeVector u = detail::sample_segment(domain.lo, domain.hi, rng, s);
        const double sigma = unit(rng);
        const ConeVector au = A(u);
        const ConeVector asu = A(scale(sigma, u));
        const double slack = A.order_tol * sup_norm(au);
        const double excess = (phi_eval(phi, sigma) * au.values() - asu.values()).maxCoeff();
        ++res.samples;
        if (excess > slack) {
            ++res.violations;
            res.worst = std::max(res.worst, excess);
        }
    }
    return res;
}

} // namespace conefix
