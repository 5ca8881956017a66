#include "pbss/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pbss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NelderMead {
    const NelderMeadConfig& cfg;
    std::function<double(const Vec&)> f;  // may return +inf for infeasible points
    std::vector<Vec> verts;
    Vec vals;

    // Runs exactly cfg.iterations iterations. No shrink step: a failed
    // contraction still replaces the worst vertex with the better of the
    // reflected and contracted points, keeping the eval count at most 2 per
    // iteration.
    Vec run(Vec& trace) {
        const std::size_t n = verts.size() - 1;
        trace.resize(cfg.iterations);
        std::vector<std::size_t> order(verts.size());
        for (int it = 0; it < cfg.iterations; ++it) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
            const std::size_t best = order.front(), worst = order.back();
            const std::size_t second_worst = order[order.size() - 2];

            Vec centroid(n, 0.0);
            for (std::size_t v : order)
                if (v != worst)
                    for (std::size_t j = 0; j < n; ++j) centroid[j] += verts[v][j];
            for (double& c : centroid) c /= static_cast<double>(n);

            auto along = [&](double coef) {
                Vec p(n);
                for (std::size_t j = 0; j < n; ++j)
                    p[j] = centroid[j] + coef * (verts[worst][j] - centroid[j]);
                return p;
            };

            Vec reflected = along(-cfg.reflection);
            const double fr = f(reflected);
            if (fr < vals[best]) {
                Vec expanded = along(-cfg.reflection * cfg.expansion);
                const double fe = f(expanded);
                if (fe < fr) {
                    verts[worst] = std::move(expanded);
                    vals[worst] = fe;
                } else {
                    verts[worst] = std::move(reflected);
                    vals[worst] = fr;
                }
            } else if (fr < vals[second_worst]) {
                verts[worst] = std::move(reflected);
                vals[worst] = fr;
            } else {
                // Contraction. The worst vertex is only ever replaced by a
                // point that improves on it, so the simplex cannot degrade;
                // a failed inside contraction leaves it unchanged (no shrink,
                // keeping the evaluation budget at two per iteration).
                const bool outside = fr < vals[worst];
                Vec contracted = along(outside ? -cfg.reflection * cfg.contraction : cfg.contraction);
                const double fc = f(contracted);
                if (fc <= (outside ? fr : vals[worst])) {
                    verts[worst] = std::move(contracted);
                    vals[worst] = fc;
                } else if (outside) {
                    verts[worst] = std::move(reflected);
                    vals[worst] = fr;
                }
            }
            trace[it] = *std::min_element(vals.begin(), vals.end());
        }
        const std::size_t best =
            std::min_element(vals.begin(), vals.end()) - vals.begin();
        return verts[best];
    }
};

// Regular simplex anchored at x0 (Spendley construction), scaled per
// dimension by step[j].
std::vector<Vec> regular_simplex(const Vec& x0, const Vec& step) {
    const std::size_t n = x0.size();
    const double sq = std::sqrt(static_cast<double>(n) + 1.0);
    const double p = (sq + static_cast<double>(n) - 1.0) / (static_cast<double>(n) * std::sqrt(2.0));
    const double q = (sq - 1.0) / (static_cast<double>(n) * std::sqrt(2.0));
    std::vector<Vec> verts(n + 1, x0);
    for (std::size_t v = 1; v <= n; ++v)
        for (std::size_t j = 0; j < n; ++j)
            verts[v][j] += step[j] * (j == v - 1 ? p : q);
    return verts;
}

// u(theta) via spherical coordinates; m = dim - 1 angles.
Vec angles_to_unit(const Vec& theta) {
    const std::size_t dim = theta.size() + 1;
    Vec u(dim);
    double prod = 1.0;
    for (std::size_t j = 0; j + 1 < dim; ++j) {
        u[j] = prod * std::cos(theta[j]);
        prod *= std::sin(theta[j]);
    }
    u[dim - 1] = prod;
    return u;
}

Vec unit_to_angles(const Vec& u) {
    const std::size_t dim = u.size();
    Vec theta(dim - 1);
    Vec tail(dim + 1, 0.0);  // tail[j] = norm of u[j..dim-1]
    for (std::size_t j = dim; j-- > 0;) tail[j] = std::hypot(tail[j + 1], u[j]);
    for (std::size_t j = 0; j + 2 < dim; ++j) theta[j] = std::atan2(tail[j + 1], u[j]);
    theta[dim - 2] = std::atan2(u[dim - 1], u[dim - 2]);
    return theta;
}

}  // namespace

void validate_nm_config(const NelderMeadConfig& cfg) {
    if (cfg.iterations < 1) throw std::invalid_argument("nelder-mead: iterations must be >= 1");
    if (!(cfg.reflection > 0.0) || !(cfg.expansion > 1.0) || !(cfg.contraction > 0.0) ||
        !(cfg.contraction < 1.0) || !(cfg.shrink > 0.0) || !(cfg.initial_step > 0.0) ||
        !(cfg.sphere_initial_step > 0.0))
        throw std::invalid_argument("nelder-mead: invalid coefficients");
}

FieldResult minimize_field(const Objective& objective, const Vec& x0, const Vec& lower,
                           const Vec& upper, const NelderMeadConfig& cfg) {
    validate_nm_config(cfg);
    const std::size_t n = x0.size();
    if (n == 0 || lower.size() != n || upper.size() != n)
        throw std::invalid_argument("minimize_field: dimension mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        if (!(lower[j] < upper[j])) throw std::invalid_argument("minimize_field: empty bounds");
        if (x0[j] < lower[j] || x0[j] > upper[j])
            throw std::invalid_argument("minimize_field: x0 outside bounds");
    }

    FieldResult res;
    auto penalized = [&](const Vec& x) {
        for (std::size_t j = 0; j < n; ++j)
            if (x[j] < lower[j] || x[j] > upper[j]) return kInf;
        ++res.evals;
        return objective(x);
    };

    Vec step(n);
    for (std::size_t j = 0; j < n; ++j) step[j] = cfg.initial_step * (upper[j] - lower[j]);

    NelderMead nm{cfg, penalized, regular_simplex(x0, step), {}};
    nm.vals.resize(nm.verts.size());
    for (std::size_t v = 0; v < nm.verts.size(); ++v) nm.vals[v] = penalized(nm.verts[v]);

    res.best = nm.run(res.trace);
    res.best_value = *std::min_element(nm.vals.begin(), nm.vals.end());
    return res;
}

std::vector<Vec> orthogonal_complement_basis(std::size_t dim, const std::vector<Vec>& constraints) {
    // Twice-through modified Gram-Schmidt; candidates are the canonical axes.
    std::vector<Vec> basis;
    auto project_out = [&](Vec v, const std::vector<Vec>& against) {
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : against) {
                const double c = dot(v, b);
                for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * b[j];
            }
        return v;
    };
    std::vector<Vec> ortho = constraints;
    for (std::size_t e = 0; e < dim && basis.size() < dim - constraints.size(); ++e) {
        Vec cand(dim, 0.0);
        cand[e] = 1.0;
        cand = project_out(project_out(std::move(cand), ortho), basis);
        const double n = norm(cand);
        if (n > 1e-8) basis.push_back(scale(cand, 1.0 / n));
    }
    if (basis.size() != dim - constraints.size())
        throw std::domain_error("orthogonal_complement_basis: constraints not independent");
    return basis;
}

SphereResult optimize_on_sphere(const Objective& objective, const SphereDomain& dom,
                                const NelderMeadConfig& cfg, bool maximize,
                                const Vec& init_direction) {
    validate_nm_config(cfg);
    const std::size_t dim = dom.center.size();
    const std::size_t k = dom.orthogonal_to.size();
    if (dim == 0) throw std::invalid_argument("optimize_on_sphere: empty domain");
    if (k >= dim) throw std::invalid_argument("optimize_on_sphere: over-constrained sphere");
    for (std::size_t a = 0; a < k; ++a) {
        if (std::fabs(norm(dom.orthogonal_to[a]) - 1.0) > 1e-9)
            throw std::invalid_argument("optimize_on_sphere: constraints must be unit vectors");
        for (std::size_t b = a + 1; b < k; ++b)
            if (std::fabs(dot(dom.orthogonal_to[a], dom.orthogonal_to[b])) > 1e-9)
                throw std::invalid_argument("optimize_on_sphere: constraints must be orthogonal");
    }

    const std::vector<Vec> basis = orthogonal_complement_basis(dim, dom.orthogonal_to);
    const std::size_t sub = basis.size();  // dim - k

    SphereResult res;
    auto embed = [&](const Vec& coords) {
        Vec u(dim, 0.0);
        for (std::size_t c = 0; c < sub; ++c)
            for (std::size_t j = 0; j < dim; ++j) u[j] += coords[c] * basis[c][j];
        return normalized(u);
    };
    auto eval = [&](const Vec& u) {
        ++res.evals;
        const double v = objective(u);
        return maximize ? -v : v;
    };

    if (sub == 1) {
        // Direction forced by the constraints; only the sign is free.
        const Vec plus = embed({1.0});
        const Vec minus = scale(plus, -1.0);
        const double fp = eval(plus);
        const double fm = eval(minus);
        const bool take_plus = fp <= fm;
        res.direction = take_plus ? plus : minus;
        res.value = maximize ? -(take_plus ? fp : fm) : (take_plus ? fp : fm);
        res.trace = {res.value};
        return res;
    }

    Vec coords0(sub, 0.0);
    coords0[0] = 1.0;
    if (!init_direction.empty()) {
        if (init_direction.size() != dim)
            throw std::invalid_argument("optimize_on_sphere: init direction dimension mismatch");
        Vec proj(sub);
        for (std::size_t c = 0; c < sub; ++c) proj[c] = dot(init_direction, basis[c]);
        if (norm(proj) > 1e-9) coords0 = normalized(proj);
    }

    const Vec theta0 = unit_to_angles(coords0);
    auto f_angles = [&](const Vec& theta) { return eval(embed(angles_to_unit(theta))); };

    Vec step(theta0.size(), cfg.sphere_initial_step);
    NelderMead nm{cfg, f_angles, regular_simplex(theta0, step), {}};
    nm.vals.resize(nm.verts.size());
    for (std::size_t v = 0; v < nm.verts.size(); ++v) nm.vals[v] = f_angles(nm.verts[v]);

    Vec trace;
    const Vec best_theta = nm.run(trace);
    res.direction = embed(angles_to_unit(best_theta));
    res.value = *std::min_element(nm.vals.begin(), nm.vals.end());
    if (maximize) res.value = -res.value;
    res.trace = trace;
    if (maximize)
        for (double& t : res.trace) t = -t;
    return res;
}

}  // namespace pbss
