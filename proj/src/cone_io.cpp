#include "conefix/cone_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace conefix {

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw ValidationError("not a number: '" + s + "'");
    return v;
}

namespace {

Axis parse_axis(const std::string& spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ValidationError("axis must be lo:hi:n, got '" + spec + "'");
    Axis a;
    a.lo = parse_double(parts[0]);
    a.hi = parse_double(parts[1]);
    long long n = 0;
    auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (res.ec != std::errc() || n < 1) throw ValidationError("bad node count '" + parts[2] + "'");
    a.n = static_cast<Eigen::Index>(n);
    return a;
}

} // namespace

void write_csv(std::ostream& os, const ConeVector& x)
{
    const Grid& g = x.grid();
    os << "# grid: dim=" << g.dim();
    for (int k = 0; k < g.dim(); ++k) {
        const Axis& a = g.axis(k);
        os << " axis" << k << '=' << format_double(a.lo) << ':' << format_double(a.hi) << ':' << a.n;
    }
    os << '\n';
    for (Eigen::Index i = 0; i < x.size(); ++i) os << format_double(x[i]) << '\n';
}

ConeVector read_csv(std::istream& is)
{
    std::string header;
    if (!std::getline(is, header)) throw ValidationError("empty vector file");
    const std::string prefix = "# grid:";
    if (header.rfind(prefix, 0) != 0) throw ValidationError("missing grid header");

    std::stringstream hs(header.substr(prefix.size()));
    int dim = -1;
    std::vector<Axis> axes;
    for (std::string tok; hs >> tok;) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ValidationError("bad header token '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "dim") {
            dim = static_cast<int>(parse_double(val));
        } else if (key == "axis" + std::to_string(axes.size())) {
            axes.push_back(parse_axis(val));
        } else {
            throw ValidationError("unexpected header key '" + key + "'");
        }
    }
    if (dim != static_cast<int>(axes.size())) throw ValidationError("header dim does not match axis count");

    auto grid = make_grid(Grid(axes));
    ConeVector::Values values(grid->size());
    Eigen::Index i = 0;
    for (std::string line; std::getline(is, line);) {
        if (line.empty()) continue;
        if (i >= values.size()) throw ValidationError("more values than grid nodes");
        values[i++] = parse_double(line);
    }
    if (i != values.size()) throw ValidationError("fewer values than grid nodes");
    return ConeVector(grid, std::move(values));
}

void save_csv(const std::string& path, const ConeVector& x)
{
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    write_csv(os, x);
    if (!os) throw IoError("write failed for " + path);
}

ConeVector load_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot read " + path);
    return read_csv(is);
}

} // namespace conefix
