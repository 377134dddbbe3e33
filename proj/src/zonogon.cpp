#include "shadow/zonogon.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace shadow {

namespace {

constexpr double kDropTol = 1e-14;    // generators below this are noise
constexpr double kParallelTol = 1e-12;  // cross-product tie threshold

double cross(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    return u.x() * v.y() - u.y() * v.x();
}

// Nonzero generators flipped into the upper half-plane (angle in [0, pi)),
// sorted by angle, with parallel runs merged by summation.
std::vector<Eigen::Vector2d> canonical_generators(const Zonogon& z) {
    std::vector<Eigen::Vector2d> gens;
    gens.reserve(z.generators.size());
    for (const auto& g : z.generators) {
        if (std::fabs(g.x()) < kDropTol && std::fabs(g.y()) < kDropTol) continue;
        if (g.y() < 0.0 || (g.y() == 0.0 && g.x() < 0.0))
            gens.push_back(-g);
        else
            gens.push_back(g);
    }
    std::sort(gens.begin(), gens.end(), [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
        return cross(u, v) > 0.0;
    });
    std::vector<Eigen::Vector2d> merged;
    for (const auto& g : gens) {
        if (!merged.empty() && std::fabs(cross(merged.back(), g)) <= kParallelTol)
            merged.back() += g;
        else
            merged.push_back(g);
    }
    return merged;
}

}  // namespace

Zonogon project_generators(const Matrix& O, const ComplexLine& line) {
    const int dim = static_cast<int>(O.rows());
    if (O.cols() != dim || line.e.size() != dim || line.je.size() != dim)
        throw DimensionError("project_generators: dimension mismatch");
    if (std::fabs(line.e.norm() - 1.0) > 1e-12 || std::fabs(line.e.dot(line.je)) > 1e-12)
        throw ParameterError("project_generators: line basis is not an orthonormal pair");
    const Vector a = O.transpose() * line.e;
    const Vector b = O.transpose() * line.je;
    Zonogon z;
    z.generators.reserve(dim);
    for (int i = 0; i < dim; ++i) z.generators.emplace_back(a(i), b(i));
    return z;
}

double area(const Zonogon& z) {
    const std::size_t m = z.generators.size();
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            s += std::fabs(cross(z.generators[i], z.generators[j]));
    return 4.0 * s;
}

std::vector<Eigen::Vector2d> vertices(const Zonogon& z) {
    const auto gens = canonical_generators(z);
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
    for (const auto& g : gens) p -= g;
    std::vector<Eigen::Vector2d> chain;
    chain.reserve(gens.size() + 1);
    chain.push_back(p);
    for (const auto& g : gens) {
        p += 2.0 * g;
        chain.push_back(p);
    }
    // chain.back() == -chain.front(); the other half of the boundary is -chain.
    return chain;
}

double diameter(const Zonogon& z) {
    double best = 0.0;
    for (const auto& v : vertices(z)) best = std::max(best, v.norm());
    return 2.0 * best;
}

double support(const Zonogon& z, double theta) {
    const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
    double s = 0.0;
    for (const auto& g : z.generators) s += std::fabs(g.dot(u));
    return s;
}

HullResult hull_oracle(const Zonogon& z) {
    const std::size_t m = z.generators.size();
    if (m > 14)
        throw DimensionError("hull_oracle: " + std::to_string(m) +
                             " generators exceed the enumeration limit of 14");
    const std::size_t count = std::size_t{1} << m;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        Eigen::Vector2d p = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < m; ++i)
            p += (mask >> i & 1) ? z.generators[i] : -z.generators[i];
        pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());

    // Andrew monotone chain.
    std::vector<Eigen::Vector2d> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size(); i-- > 1;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k > 1 ? k - 1 : k);  // last point repeats the first

    HullResult r;
    if (hull.size() >= 3) {
        double twice_area = 0.0;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const auto& p = hull[i];
            const auto& q = hull[(i + 1) % hull.size()];
            twice_area += cross(p, q);
        }
        r.area = 0.5 * std::fabs(twice_area);
    }
    for (std::size_t i = 0; i < hull.size(); ++i)
        for (std::size_t j = i + 1; j < hull.size(); ++j)
            r.diameter = std::max(r.diameter, (hull[i] - hull[j]).norm());
    return r;
}

}  // namespace shadow
