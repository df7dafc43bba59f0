#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "conefix/errors.hpp"

namespace conefix {

inline constexpr double default_order_tol = 1e-10;

// One uniform axis. A single-node axis (lo == hi) models a point or a scalar cone.
struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    Eigen::Index n = 1;

    double spacing() const { return n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0; }
    double node(Eigen::Index i) const
    {
        if (n == 1) return lo;
        if (i == n - 1) return hi;
        return lo + static_cast<double>(i) * spacing();
    }
    bool operator==(const Axis&) const = default;
};

// Tensor grid with one or two uniform axes, stored row-major (axis 0 slowest).
class Grid {
public:
    Grid() : Grid(std::vector<Axis>{Axis{}}) {}

    explicit Grid(std::vector<Axis> axes) : axes_(std::move(axes))
    {
        if (axes_.empty() || axes_.size() > 2) throw DomainError("grid dimension must be 1 or 2");
        for (const auto& a : axes_) {
            if (a.n < 1) throw DomainError("axis needs at least one node");
            if (a.n == 1 && a.hi != a.lo) throw DomainError("single-node axis must have lo == hi");
            if (a.n > 1 && !(a.hi > a.lo)) throw DomainError("axis upper bound must exceed lower bound");
        }
    }

    static Grid line(double lo, double hi, Eigen::Index n) { return Grid({Axis{lo, hi, n}}); }
    static Grid plane(Axis a0, Axis a1) { return Grid({a0, a1}); }
    static Grid point() { return Grid({Axis{0.0, 0.0, 1}}); }
    // Index set 1..n, used for truncated sequence spaces.
    static Grid index(Eigen::Index n)
    {
        return n == 1 ? Grid({Axis{1.0, 1.0, 1}}) : Grid({Axis{1.0, static_cast<double>(n), n}});
    }

    int dim() const { return static_cast<int>(axes_.size()); }
    const Axis& axis(int k) const { return axes_.at(static_cast<std::size_t>(k)); }
    Eigen::Index size() const
    {
        Eigen::Index s = 1;
        for (const auto& a : axes_) s *= a.n;
        return s;
    }
    Eigen::Index flat(Eigen::Index i0, Eigen::Index i1) const { return i0 * axes_.back().n + i1; }

    bool operator==(const Grid&) const = default;

private:
    std::vector<Axis> axes_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(Grid g) { return std::make_shared<const Grid>(std::move(g)); }

// Grid function. Values are kept exactly as computed; cone membership is a
// separate predicate (in_cone) because step differences are signed.
template <typename Scalar>
class BasicConeVector {
public:
    using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    BasicConeVector() : grid_(make_grid(Grid::point())), values_(Values::Zero(1)) {}

    BasicConeVector(GridPtr grid, Values values) : grid_(std::move(grid)), values_(std::move(values))
    {
        if (!grid_) throw DomainError("null grid");
        if (values_.size() != grid_->size())
            throw DomainError("value count " + std::to_string(values_.size()) + " does not match grid size " +
                              std::to_string(grid_->size()));
    }

    static BasicConeVector constant(GridPtr grid, Scalar c)
    {
        const auto n = grid->size();
        return BasicConeVector(std::move(grid), Values::Constant(n, c));
    }
    static BasicConeVector zeros(GridPtr grid) { return constant(std::move(grid), Scalar(0)); }
    static BasicConeVector ones(GridPtr grid) { return constant(std::move(grid), Scalar(1)); }

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const Values& values() const { return values_; }
    Eigen::Index size() const { return values_.size(); }
    Scalar operator[](Eigen::Index i) const { return values_[i]; }

    // Same grid, new values.
    BasicConeVector with(Values v) const { return BasicConeVector(grid_, std::move(v)); }

private:
    GridPtr grid_;
    Values values_;
};

using ConeVector = BasicConeVector<double>;

template <typename Scalar>
bool compatible(const BasicConeVector<Scalar>& a, const BasicConeVector<Scalar>& b)
{
    return a.grid_ptr() == b.grid_ptr() || a.grid() == b.grid();
}

template <typename Scalar>
void require_compatible(const BasicConeVector<Scalar>& a, const BasicConeVector<Scalar>& b)
{
    if (!compatible(a, b)) throw GridMismatch("incompatible grids");
}

template <typename Scalar>
bool leq(const BasicConeVector<Scalar>& a, const BasicConeVector<Scalar>& b, Scalar tol)
{
    require_compatible(a, b);
    if (tol < Scalar(0)) throw DomainError("tolerance must be nonnegative");
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!(a[i] <= b[i] + tol)) return false;
    return true;
}

template <typename Scalar>
Scalar sup_norm(const BasicConeVector<Scalar>& a)
{
    Scalar m(0);
    for (Eigen::Index i = 0; i < a.size(); ++i) m = std::max(m, Scalar(std::abs(a[i])));
    return m;
}

template <typename Scalar>
bool in_cone(const BasicConeVector<Scalar>& a, Scalar tol)
{
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!(a[i] >= -tol)) return false;
    return true;
}

template <typename Scalar>
BasicConeVector<Scalar> axpy(Scalar alpha, const BasicConeVector<Scalar>& x, const BasicConeVector<Scalar>& y)
{
    require_compatible(x, y);
    return y.with(alpha * x.values() + y.values());
}

template <typename Scalar>
BasicConeVector<Scalar> scale(Scalar alpha, const BasicConeVector<Scalar>& x)
{
    return x.with(alpha * x.values());
}

template <typename Scalar>
BasicConeVector<Scalar> add(const BasicConeVector<Scalar>& x, const BasicConeVector<Scalar>& y)
{
    require_compatible(x, y);
    return x.with(x.values() + y.values());
}

template <typename Scalar>
BasicConeVector<Scalar> subtract(const BasicConeVector<Scalar>& x, const BasicConeVector<Scalar>& y)
{
    require_compatible(x, y);
    return x.with(x.values() - y.values());
}

template <typename Scalar>
BasicConeVector<Scalar> operator+(const BasicConeVector<Scalar>& x, const BasicConeVector<Scalar>& y)
{
    return add(x, y);
}
template <typename Scalar>
BasicConeVector<Scalar> operator-(const BasicConeVector<Scalar>& x, const BasicConeVector<Scalar>& y)
{
    return subtract(x, y);
}
template <typename Scalar>
BasicConeVector<Scalar> operator*(Scalar alpha, const BasicConeVector<Scalar>& x)
{
    return scale(alpha, x);
}

template <typename Scalar>
Scalar distance(const BasicConeVector<Scalar>& x, const BasicConeVector<Scalar>& y)
{
    require_compatible(x, y);
    return (x.values() - y.values()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
struct BasicConicalSegment {
    BasicConeVector<Scalar> lo;
    BasicConeVector<Scalar> hi;

    BasicConicalSegment(BasicConeVector<Scalar> l, BasicConeVector<Scalar> h, Scalar tol = Scalar(default_order_tol))
        : lo(std::move(l)), hi(std::move(h))
    {
        if (!leq(lo, hi, tol)) throw DomainError("segment endpoints are not ordered");
    }
};

using ConicalSegment = BasicConicalSegment<double>;

template <typename Scalar>
bool segment_contains(const BasicConicalSegment<Scalar>& seg, const BasicConeVector<Scalar>& x, Scalar tol)
{
    return leq(seg.lo, x, tol) && leq(x, seg.hi, tol);
}

} // namespace conefix
