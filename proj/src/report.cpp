#include "conefix/report.hpp"

#include <cmath>
#include <fstream>

#include "conefix/cone_io.hpp"

namespace conefix {

nlohmann::json number(double v)
{
    if (!std::isfinite(v)) return nullptr;
    return v;
}

nlohmann::json to_json(const IterationCertificate& c)
{
    nlohmann::json j;
    j["mode"] = to_string(c.mode);
    j["n0"] = c.n0;
    switch (c.mode) {
    case Mode::Decreasing: j["sigma0"] = number(c.sigma0); break;
    case Mode::Increasing: j["r0"] = number(c.r0); break;
    case Mode::General: break;
    }
    j["r1"] = number(c.r1);
    j["r2"] = number(c.r2);
    j["tau_star"] = number(c.tau_star);
    j["delta"] = number(c.delta);
    j["rate"] = number(c.rate);
    return j;
}

nlohmann::json to_json(const ConvergenceReport& r)
{
    nlohmann::json j;
    nlohmann::json res = nlohmann::json::array();
    for (double v : r.residuals) res.push_back(number(v));
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["residuals"] = std::move(res);
    j["certified_rate"] = number(r.certified_rate);
    j["certified_constant"] = number(r.certified_constant);
    j["observed_rate"] = number(r.observed_rate);
    j["bracket_ok"] = r.bracket_ok;
    j["fixed_point_residual"] = number(r.fixed_point_residual);
    return j;
}

nlohmann::json to_json(const AuditResult& a)
{
    return {{"samples", a.samples}, {"violations", a.violations}, {"worst", number(a.worst)}, {"passed", a.passed()}};
}

void write_residuals_csv(const std::string& path, const ConvergenceReport& r)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    os << "n,residual,certified_bound\n";
    const auto bounds = r.certified_bounds();
    for (std::size_t n = 0; n < r.residuals.size(); ++n)
        os << n << ',' << format_double(r.residuals[n]) << ',' << format_double(bounds[n]) << '\n';
    if (!os) throw IoError("write failed for " + path);
}

void write_json(const std::string& path, const nlohmann::json& j)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("write failed for " + path);
}

} // namespace conefix
