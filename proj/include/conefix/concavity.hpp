#pragma once

#include <memory>
#include <string>

namespace conefix {

// Concave increasing map phi: [0,1] -> [0,1] with phi(0) = 0, phi(1) = 1 and
// infinite slope at 0. Either a power sigma^gamma or the mixture
// (c0*sigma + base(sigma)) / (1 + c0).
class Profile {
public:
    enum class Kind { Power, SumMix };

    static Profile power(double gamma);
    static Profile summix(Profile base, double c0);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double c0() const { return c0_; }
    const Profile& base() const;

    bool operator==(const Profile& other) const;

private:
    Profile() = default;
    Kind kind_ = Kind::Power;
    double gamma_ = 0.5;
    double c0_ = 0.0;
    std::shared_ptr<const Profile> base_;
};

double phi_eval(const Profile& p, double sigma);
double phi_iterate(const Profile& p, double sigma, int n);

// Root of phi(tau) = tau / sigma0 in (0, sigma0).
double solve_tau(const Profile& p, double sigma0);
// Root of delta * phi(1/delta) = r0 in (r0, inf).
double solve_delta(const Profile& p, double r0);

double rate_k(const Profile& p, double sigma0);
double rate_k_general(const Profile& p, double r1, double r2);

struct ProfileCheck {
    bool ok = true;
    std::string message;
};

// Sampled check of endpoints, monotonicity, concavity, phi >= id and steep start.
ProfileCheck validate_profile(const Profile& p, int samples = 10000);

// "power:<gamma>" or "summix:<gamma>:<c0>".
Profile parse_profile(const std::string& text);
std::string to_string(const Profile& p);

} // namespace conefix
