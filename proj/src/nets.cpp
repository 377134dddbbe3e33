#include "shadow/nets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "shadow/format.hpp"
#include "shadow/parallel.hpp"

namespace shadow::nets {

double cardinality_bound(int k, int n) {
    if (k < 1 || n < 1) throw ParameterError("cardinality_bound: k and n must be >= 1");
    return std::pow(2.0 * std::exp(1.0) * (1.0 + double(n) / double(k)), double(k));
}

Vector LatticeNet::point(std::size_t i) const {
    Vector v(n);
    for (int j = 0; j < n; ++j) v(j) = double(points[i * std::size_t(n) + j]);
    return v;
}

LatticeNet lattice_net(int k, int n, double budget) {
    if (k < 1 || n < 1) throw ParameterError("lattice_net: k and n must be >= 1");
    if (k > 32767) throw ParameterError("lattice_net: k exceeds 16-bit coordinate storage");
    const double bound = cardinality_bound(k, n);
    if (bound > budget)
        throw BudgetError("lattice_net: cardinality bound " + format_g17(bound) +
                          " exceeds the budget of " + format_g17(budget) + " points");
    LatticeNet net;
    net.n = n;
    net.k = k;
    net.covering_radius_bound = std::sqrt(double(k));
    net.cardinality_bound = bound;

    std::vector<std::int16_t> current(n, 0);
    // Coordinate-by-coordinate budget split; values ascend, so the
    // enumeration order is a fixed lexicographic order.
    auto recurse = [&](auto&& self, int coord, int remaining) -> void {
        if (coord == n - 1) {
            for (int a = -remaining; a <= remaining; ++a) {
                current[coord] = std::int16_t(a);
                net.points.insert(net.points.end(), current.begin(), current.end());
            }
            current[coord] = 0;
            return;
        }
        for (int a = -remaining; a <= remaining; ++a) {
            current[coord] = std::int16_t(a);
            self(self, coord + 1, remaining - std::abs(a));
        }
        current[coord] = 0;
    };
    recurse(recurse, 0, k);
    return net;
}

std::vector<Vector> to_vectors(const LatticeNet& net) {
    std::vector<Vector> out;
    out.reserve(net.count());
    for (std::size_t i = 0; i < net.count(); ++i) out.push_back(net.point(i));
    return out;
}

int slice_k(double epsilon, int n) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw ParameterError("slice_k: epsilon must lie in (0, 1/2)");
    if (n < 1) throw ParameterError("slice_k: n must be >= 1");
    return int(std::floor(epsilon * double(n) / (8.0 * std::log(1.0 / epsilon))));
}

SliceNet slice_net(double theta, double epsilon, int n, double budget) {
    if (!(theta > 0.0 && theta < 1.0))
        throw ParameterError("slice_net: theta must lie in (0, 1)");
    const int k = slice_k(epsilon, n);
    if (k < 1)
        throw ParameterError("slice_net: k = floor(eps n / (8 ln(1/eps))) vanishes for eps=" +
                             format_g17(epsilon) + ", n=" + std::to_string(n) +
                             "; increase eps or n");
    SliceNet net;
    net.theta = theta;
    net.epsilon = epsilon;
    net.n = n;
    net.k = k;
    net.net_radius = 8.0 * theta * std::sqrt(std::log(1.0 / epsilon) / epsilon);

    const LatticeNet lattice = lattice_net(k, n, budget);
    const double scale = theta * std::sqrt(double(n)) / double(k);
    const double l1_cap = theta * std::sqrt(double(n)) + 1e-9;
    for (std::size_t i = 0; i < lattice.count(); ++i) {
        Vector t = scale * lattice.point(i);
        const double r = t.norm();
        if (r < 1e-12) continue;  // the origin has no spherical representative
        Vector y = t / r;
        if (y.lpNorm<1>() <= l1_cap) net.points.push_back(std::move(y));
    }
    // Collinear lattice points snap to one representative; drop duplicates.
    std::sort(net.points.begin(), net.points.end(), [](const Vector& a, const Vector& b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                            b.data() + b.size());
    });
    net.points.erase(std::unique(net.points.begin(), net.points.end(),
                                 [](const Vector& a, const Vector& b) {
                                     return (a - b).cwiseAbs().maxCoeff() <= 1e-12;
                                 }),
                     net.points.end());
    return net;
}

double covering_check(const std::vector<Vector>& net, double radius,
                      const std::function<Vector()>& sampler, int trials) {
    if (trials < 1) throw ParameterError("covering_check: trials must be >= 1");
    if (!(radius >= 0.0)) throw ParameterError("covering_check: negative radius");
    if (net.empty()) throw ParameterError("covering_check: empty net");
    double max_gap = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Vector x = sampler();
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& p : net) nearest = std::min(nearest, (x - p).norm());
        max_gap = std::max(max_gap, nearest);
    }
    return max_gap;
}

Vector sample_l1_ball(double k, int n, Rng& rng) {
    if (!(k > 0.0) || n < 1) throw ParameterError("sample_l1_ball: need k > 0, n >= 1");
    Vector y(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = rng.exponential();
        y(i) = (rng.next_u64() & 1) ? e : -e;
        sum += e;
    }
    const double r = k * std::pow(rng.uniform_pos01(), 1.0 / double(n));
    return (r / sum) * y;
}

Vector sample_sphere_slice(double theta, int n, Rng& rng, int max_attempts) {
    if (!(theta > 0.0)) throw ParameterError("sample_sphere_slice: theta must be positive");
    const double cap = theta * std::sqrt(double(n));
    for (int a = 0; a < max_attempts; ++a) {
        Vector u = random_unit_vector(n, rng);
        if (u.lpNorm<1>() <= cap) return u;
    }
    throw SamplerStallError("sample_sphere_slice: no point of the slice in " +
                            std::to_string(max_attempts) +
                            " attempts; theta=" + format_g17(theta) + " is too small for n=" +
                            std::to_string(n));
}

// ---------------------------------------------------------------------------

namespace {

void write_header(std::ostream& os, int k, int n, double radius, std::size_t count) {
    os << "# net k=" << k << " n=" << n << " radius=" << format_g17(radius)
       << " count=" << count << "\n";
}

}  // namespace

void write_net(std::ostream& os, const LatticeNet& net) {
    write_header(os, net.k, net.n, net.covering_radius_bound, net.count());
    for (std::size_t i = 0; i < net.count(); ++i) {
        for (int j = 0; j < net.n; ++j) {
            if (j) os << ' ';
            os << net.points[i * std::size_t(net.n) + j];
        }
        os << '\n';
    }
}

void write_net(std::ostream& os, const SliceNet& net) {
    write_header(os, net.k, net.n, net.net_radius, net.points.size());
    for (const auto& p : net.points) {
        for (int j = 0; j < net.n; ++j) {
            if (j) os << ' ';
            os << format_g17(p(j));
        }
        os << '\n';
    }
}

NetFile read_net(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw IoError("read_net: missing header line");
    NetFile file;
    std::size_t count = 0;
    if (std::sscanf(header.c_str(), "# net k=%d n=%d radius=%lf count=%zu", &file.k, &file.n,
                    &file.radius, &count) != 4)
        throw IoError("read_net: malformed header: " + header);
    if (file.n < 1) throw IoError("read_net: bad dimension in header");
    file.points.reserve(count);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Vector p(file.n);
        for (int j = 0; j < file.n; ++j)
            if (!(ls >> p(j))) throw IoError("read_net: short point line: " + line);
        file.points.push_back(std::move(p));
    }
    if (file.points.size() != count)
        throw IoError("read_net: header promised " + std::to_string(count) + " points, found " +
                      std::to_string(file.points.size()));
    return file;
}

// ---------------------------------------------------------------------------

CertificationNet certification_net(int half_dim, double lambda, double epsilon, double budget) {
    if (half_dim < 1) throw ParameterError("certification_net: n must be >= 1");
    if (!(lambda > 0.0)) throw ParameterError("certification_net: lambda must be positive");
    const int m = 2 * half_dim;
    const int k = slice_k(epsilon, m);
    if (k < 1)
        throw ParameterError("certification_net: k vanishes for eps=" + format_g17(epsilon) +
                             " at ambient dimension " + std::to_string(m));
    CertificationNet net;
    net.half_dim = half_dim;
    net.k = k;
    const double reach = lambda * std::sqrt(double(half_dim));  // l1 radius of the slice
    net.scale = reach / double(k);
    net.delta = 8.0 * lambda * std::sqrt(std::log(1.0 / epsilon) / epsilon);
    const double lattice_radius = reach / std::sqrt(double(k));
    net.coverage_radius = 2.0 * lattice_radius;
    if (net.coverage_radius > net.delta + 1e-12)
        throw InvariantError("certification_net: covering radius exceeds delta bookkeeping");

    const LatticeNet lattice = lattice_net(k, m, budget);
    const double shell_lo = 1.0 - lattice_radius - 1e-12;
    const double shell_hi = 1.0 + lattice_radius + 1e-12;
    const double l1_cap = reach + net.coverage_radius * std::sqrt(double(m)) + 1e-9;
    for (std::size_t i = 0; i < lattice.count(); ++i) {
        Vector t = net.scale * lattice.point(i);
        const double r = t.norm();
        if (r < 1e-12) continue;  // origin never covers anything on the sphere
        if (r < shell_lo || r > shell_hi) continue;
        Vector y = t / r;
        if (y.lpNorm<1>() <= l1_cap) net.points.push_back(std::move(y));
    }
    return net;
}

Certificate scan_certificate(const Matrix& A, const std::vector<Vector>& net_points,
                             double lambda, double delta, int half_dim, int threads) {
    if (A.rows() != A.cols() || A.rows() != 2 * half_dim)
        throw DimensionError("scan_certificate: matrix must be 2n x 2n");
    Certificate cert;
    cert.lambda = lambda;
    cert.delta = delta;
    cert.implied_bound = lambda * std::sqrt(double(half_dim));
    cert.threshold = std::sqrt(double(half_dim)) * (lambda + std::sqrt(2.0) * delta);
    cert.net_size = net_points.size();

    const std::size_t block = 4096;
    const std::size_t stride = block * std::size_t(resolve_threads(threads));
    std::size_t violator = net_points.size();
    for (std::size_t base = 0; base < net_points.size() && violator == net_points.size();
         base += stride) {
        const std::size_t end = std::min(net_points.size(), base + stride);
        const std::size_t blocks = (end - base + block - 1) / block;
        std::vector<std::size_t> found(blocks, net_points.size());
        parallel_for(
            blocks,
            [&](std::size_t b) {
                const std::size_t lo = base + b * block;
                const std::size_t hi = std::min(end, lo + block);
                for (std::size_t i = lo; i < hi; ++i) {
                    if ((A * net_points[i]).lpNorm<1>() <= cert.threshold) {
                        found[b] = i;
                        return;
                    }
                }
            },
            threads);
        for (std::size_t f : found) violator = std::min(violator, f);
    }
    if (violator < net_points.size()) {
        cert.certified = false;
        cert.violating_point = net_points[violator];
    } else {
        cert.certified = true;
    }
    return cert;
}

Certificate certify_min_diameter(const Matrix& O, double lambda, double epsilon, double budget,
                                 int threads) {
    require_rotation(O);
    const int half_dim = int(O.rows()) / 2;
    const int m = 2 * half_dim;
    const int k = slice_k(epsilon, m);
    if (k < 1)
        throw ParameterError("certify_min_diameter: eps=" + format_g17(epsilon) +
                             " gives an empty net scale at dimension " + std::to_string(m));
    const double reach = lambda * std::sqrt(double(half_dim));
    if (reach < 1.0) {
        // The constraint set is empty: every unit vector has l1 norm at least 1,
        // so no direction can have both coordinate profiles inside the l1 ball of
        // radius lambda*sqrt(n).  The claimed diameter bound holds outright and
        // no net scan is needed.
        Certificate cert;
        cert.lambda = lambda;
        cert.epsilon = epsilon;
        cert.delta = 8.0 * lambda * std::sqrt(std::log(1.0 / epsilon) / epsilon);
        cert.certified = true;
        cert.implied_bound = reach;
        cert.threshold = std::sqrt(double(half_dim)) * (lambda + std::sqrt(2.0) * cert.delta);
        cert.net_size = 0;
        return cert;
    }
    const Matrix A = rotated_complex_structure(O);
    const CertificationNet net = certification_net(half_dim, lambda, epsilon, budget);
    if (net.points.empty())
        throw InvariantError(
            "certify_min_diameter: empty net cannot cover a nonempty constraint set");
    Certificate cert = scan_certificate(A, net.points, lambda, net.delta, half_dim, threads);
    cert.epsilon = epsilon;
    return cert;
}

}  // namespace shadow::nets
