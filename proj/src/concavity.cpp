#include "conefix/concavity.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "conefix/cone_io.hpp"
#include "conefix/errors.hpp"

namespace conefix {

namespace {

constexpr int max_bisection_steps = 200;

void require_unit(double sigma)
{
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in [0,1], got " + format_double(sigma));
}

void require_open_unit(double sigma, const char* name)
{
    if (!(sigma > 0.0 && sigma < 1.0))
        throw DomainError(std::string(name) + " must lie in (0,1), got " + format_double(sigma));
}

// Bisection at the geometric midpoint on a positive bracket where f(lo) and
// f(hi) differ in sign. Stops at relative width `rel`.
template <typename F>
double geometric_bisect(F&& f, double lo, double hi, double rel, const char* what)
{
    const bool lo_positive = f(lo) > 0.0;
    for (int step = 0; step < max_bisection_steps; ++step) {
        if (hi - lo <= rel * hi) return std::sqrt(lo * hi);
        double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) return mid;
        if ((f(mid) > 0.0) == lo_positive)
            lo = mid;
        else
            hi = mid;
    }
    throw NonConvergence(std::string(what) + ": bisection did not converge in 200 steps");
}

} // namespace

Profile Profile::power(double gamma)
{
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("power profile exponent must lie in (0,1)");
    Profile p;
    p.kind_ = Kind::Power;
    p.gamma_ = gamma;
    return p;
}

Profile Profile::summix(Profile base, double c0)
{
    if (!(c0 > 0.0) || !std::isfinite(c0)) throw DomainError("summix weight c0 must be positive");
    Profile p;
    p.kind_ = Kind::SumMix;
    p.gamma_ = base.gamma_;
    p.c0_ = c0;
    p.base_ = std::make_shared<const Profile>(std::move(base));
    return p;
}

const Profile& Profile::base() const
{
    if (!base_) throw DomainError("power profile has no base");
    return *base_;
}

bool Profile::operator==(const Profile& other) const
{
    if (kind_ != other.kind_) return false;
    if (kind_ == Kind::Power) return gamma_ == other.gamma_;
    return c0_ == other.c0_ && *base_ == *other.base_;
}

double phi_eval(const Profile& p, double sigma)
{
    require_unit(sigma);
    if (p.kind() == Profile::Kind::Power) return std::pow(sigma, p.gamma());
    const double c0 = p.c0();
    return (c0 * sigma + phi_eval(p.base(), sigma)) / (1.0 + c0);
}

double phi_iterate(const Profile& p, double sigma, int n)
{
    if (n < 0) throw DomainError("iteration count must be nonnegative");
    require_unit(sigma);
    for (int i = 0; i < n; ++i) sigma = phi_eval(p, sigma);
    return sigma;
}

double solve_tau(const Profile& p, double sigma0)
{
    require_open_unit(sigma0, "sigma0");
    // chi(tau) = phi(tau)/tau - 1/sigma0 is decreasing, negative at sigma0, +inf at 0+.
    auto chi = [&](double tau) { return phi_eval(p, tau) / tau - 1.0 / sigma0; };
    double lo = 0.5 * sigma0;
    int halvings = 0;
    while (!(chi(lo) > 0.0)) {
        lo *= 0.5;
        if (++halvings > 1000 || lo == 0.0) throw NonConvergence("solve_tau: no lower bracket found");
    }
    return geometric_bisect(chi, lo, sigma0, 1e-15, "solve_tau");
}

double solve_delta(const Profile& p, double r0)
{
    if (!(r0 > 1.0) || !std::isfinite(r0)) throw DomainError("r0 must exceed 1, got " + format_double(r0));
    auto f = [&](double d) { return d * phi_eval(p, 1.0 / d) - r0; };
    double hi = 2.0 * r0;
    int doublings = 0;
    while (!(f(hi) > 0.0)) {
        hi *= 2.0;
        if (++doublings > 1000 || !std::isfinite(hi)) throw NonConvergence("solve_delta: no upper bracket found");
    }
    return geometric_bisect(f, r0, hi, 1e-15, "solve_delta");
}

double rate_k(const Profile& p, double sigma0)
{
    require_open_unit(sigma0, "sigma0");
    return (1.0 - phi_eval(p, sigma0)) / (1.0 - sigma0);
}

double rate_k_general(const Profile& p, double r1, double r2)
{
    require_open_unit(r1, "r1");
    if (!(r2 > 1.0) || !std::isfinite(r2)) throw DomainError("r2 must exceed 1, got " + format_double(r2));
    const double k1 = (1.0 - phi_eval(p, 1.0 / r2)) / (1.0 - 1.0 / r2);
    const double k2 = (1.0 - phi_eval(p, r1)) / (1.0 - r1);
    return std::max(k1, k2);
}

ProfileCheck validate_profile(const Profile& p, int samples)
{
    if (samples < 3) throw DomainError("need at least 3 samples");
    if (phi_eval(p, 0.0) != 0.0) return {false, "phi(0) != 0"};
    if (phi_eval(p, 1.0) != 1.0) return {false, "phi(1) != 1"};

    std::vector<double> v(static_cast<std::size_t>(samples));
    const double h = 1.0 / (samples - 1);
    for (int i = 0; i < samples; ++i) v[i] = phi_eval(p, i == samples - 1 ? 1.0 : i * h);
    for (int i = 0; i < samples; ++i) {
        const double s = i == samples - 1 ? 1.0 : i * h;
        if (v[i] < s - 1e-15) return {false, "phi(sigma) < sigma at sigma = " + format_double(s)};
        if (i > 0 && !(v[i] > v[i - 1])) return {false, "not strictly increasing near " + format_double(s)};
        if (i > 0 && i + 1 < samples && v[i - 1] + v[i + 1] - 2.0 * v[i] > 1e-12)
            return {false, "not concave near " + format_double(s)};
    }
    const double tiny = 1e-12;
    if (!(phi_eval(p, tiny) / tiny > 1e3)) return {false, "slope at 0+ is not steep"};
    return {};
}

Profile parse_profile(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string s; std::getline(ss, s, ':');) parts.push_back(s);
    try {
        if (parts.size() == 2 && parts[0] == "power") return Profile::power(parse_double(parts[1]));
        if (parts.size() == 3 && parts[0] == "summix")
            return Profile::summix(Profile::power(parse_double(parts[1])), parse_double(parts[2]));
    } catch (const DomainError& e) {
        throw ValidationError("profile '" + text + "': " + e.what());
    }
    throw ValidationError("profile must be power:<gamma> or summix:<gamma>:<c0>, got '" + text + "'");
}

std::string to_string(const Profile& p)
{
    if (p.kind() == Profile::Kind::Power) return "power:" + format_double(p.gamma());
    if (p.base().kind() == Profile::Kind::Power)
        return "summix:" + format_double(p.base().gamma()) + ":" + format_double(p.c0());
    return "summix(" + to_string(p.base()) + "):" + format_double(p.c0());
}

} // namespace conefix
