#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conefix/concavity.hpp"
#include "conefix/cone.hpp"

namespace conefix {

// Monotone operator together with its declared concavity profile. The profile
// is absent for the counterexample constructions, which are not concave.
struct OperatorHandle {
    std::string name;
    std::function<ConeVector(const ConeVector&)> apply_fn;
    std::optional<Profile> profile;
    std::optional<ConicalSegment> concavity_domain; // empty: whole cone
    double order_tol = default_order_tol;

    // Applies the map and checks that the image stays in the cone.
    ConeVector operator()(const ConeVector& x) const;
    const Profile& require_profile() const;
};

ConeVector apply_power(const OperatorHandle& A, ConeVector x, int n);

// Iteration step that leaves the certified region or breaks monotonicity.
class IterationError : public CertificationError {
public:
    IterationError(const std::string& what, int step) : CertificationError(what), step(step) {}
    int step;
};

struct Bracket {
    double r1 = 0.0;
    double r2 = 0.0;
};

// Componentwise ratio range of A^{n0} v0 against A^{n0-m0} v0. Nodes where the
// denominator is below floor * |A^{n0-m0} v0| are skipped if the numerator is small too.
Bracket verify_bracket(const OperatorHandle& A, const ConeVector& v0, int n0, int m0 = 1, double floor = 1e-8);

enum class Mode { Decreasing, Increasing, General };
std::string to_string(Mode m);

struct IterationCertificate {
    Mode mode = Mode::Decreasing;
    int n0 = 1;
    double sigma0 = 0.0; // Decreasing
    double r0 = 0.0;     // Increasing
    double r1 = 0.0;     // General (also the measured bracket for the others)
    double r2 = 0.0;
    double tau_star = 0.0;
    double delta = 0.0; // Increasing / General
    double rate = 0.0;
};

struct ConvergenceReport {
    int iterations = 0;
    std::vector<double> residuals;
    double certified_rate = 0.0;
    double observed_rate = 0.0; // NaN when fewer than two positive residuals
    bool bracket_ok = false;
    double fixed_point_residual = 0.0;
    bool converged = false;
    // Prefactor of the a-priori bound; NaN means fit from residuals[0].
    double certified_constant = std::numeric_limits<double>::quiet_NaN();

    // C * rate^n.
    std::vector<double> certified_bounds() const;
};

class NonConvergenceError : public NonConvergence {
public:
    NonConvergenceError(const std::string& what, ConvergenceReport partial)
        : NonConvergence(what), report(std::move(partial))
    {
    }
    ConvergenceReport report;
};

struct IterationOptions {
    double tol = 1e-12;
    int max_iter = 10000;
    double order_tol = default_order_tol;
    double floor = 1e-8;
};

struct Solution {
    ConeVector x_star;
    ConeVector x0; // A^{n0-1} v0
    IterationCertificate cert;
    ConvergenceReport report;
};

// Least-squares slope of log residuals over the last `window` positive entries.
double observed_rate(const std::vector<double>& residuals, int window = 10);

Solution solve_decreasing(const OperatorHandle& A, const ConeVector& v0, int n0, double sigma0,
                          const IterationOptions& opt = {});
Solution solve_increasing(const OperatorHandle& A, const ConeVector& v0, int n0, double r0,
                          const IterationOptions& opt = {});
Solution solve_general(const OperatorHandle& A, const ConeVector& v0, int n0, double r1, double r2,
                       const IterationOptions& opt = {});

// Fixed point of A0 for the complement construction, started from x0 - x*.
struct ComplementResult {
    ConeVector x_tilde;
    ConeVector x0;
    ConeVector x_star;
    Solution base;
    int iterations = 0;
    double fixed_point_residual = 0.0;
    bool sandwich_ok = false;
};

ComplementResult complement_fixed_point(const OperatorHandle& A, const OperatorHandle& A0, const ConeVector& v0,
                                        int n0, double gamma0, double alpha, const IterationOptions& opt = {},
                                        std::uint64_t seed = 1);

struct SumResult {
    ConeVector x_tilde;
    double r_star = 0.0;
    double k_star = 0.0;
    ConvergenceReport report;
    bool bracket_ok = false;
    // Distances |A^n x_tilde - x*| while returning to x* under plain A.
    std::vector<double> return_distances;
    bool return_ok = false;
};

SumResult solve_sum(const OperatorHandle& A, const OperatorHandle& A0, const ConeVector& x_star, double C0,
                    const IterationOptions& opt = {}, std::uint64_t seed = 1);

// Limits of the interleaved subsequences x_{m0 k + j}, x_0 = A^{n0-m0} v0.
struct PeriodicResult {
    std::vector<ConeVector> points;
    Bracket bracket;
    double rate = 0.0;
    int sweeps = 0;
    std::vector<double> period_residuals; // |A^{m0} p_j - p_j|
};

PeriodicResult periodic_points(const OperatorHandle& A, const ConeVector& v0, int n0, int m0,
                               const IterationOptions& opt = {});

struct DistinctClasses {
    int gcd = 1;
    std::vector<std::vector<int>> classes; // residues mod gcd
    bool classes_equal = false;
};

using CollapseResult = std::variant<ConeVector, DistinctClasses>;

CollapseResult collapse_check(const std::vector<ConeVector>& points, int i0, int j0, double d1, double d2,
                              double tol);

struct UniquenessResult {
    bool unique = false;
    std::vector<ConeVector> limits;
    std::vector<ConeVector> offending; // limits away from x*
    long squeeze_horizon = -1;         // -1 when not finite or no profile
};

UniquenessResult uniqueness_probe(const OperatorHandle& A, const ConeVector& x_star, double r1, double r2,
                                  int n_starts, double tol, std::uint64_t seed = 1, int max_iter = 10000);

// Number of distinct vectors, up to sup-distance tol.
int count_distinct(const std::vector<ConeVector>& v, double tol);

// Sampled hypothesis checks.
struct AuditResult {
    int samples = 0;
    int violations = 0;
    double worst = 0.0; // largest violation seen
    bool passed() const { return violations == 0; }
};

// u <= v drawn from the segment; checks A u <= A v + order_tol.
AuditResult audit_monotone(const OperatorHandle& A, const ConicalSegment& domain, int samples, std::uint64_t seed);
// A(sigma u) >= phi(sigma) A u - order_tol |A u| for u in the segment.
AuditResult audit_concavity(const OperatorHandle& A, const Profile& phi, const ConicalSegment& domain, int samples,
                            std::uint64_t seed);

} // namespace conefix
