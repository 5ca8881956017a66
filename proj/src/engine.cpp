#include "pbss/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace pbss {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void validate_pbss_config(const PbssConfig& cfg, const WeightBank& bank) {
    if (cfg.n_sources < 2) throw std::invalid_argument("pbss: need at least 2 sources");
    if (!(cfg.linear_radius > 0.0)) throw std::invalid_argument("pbss: linear radius must be > 0");
    validate_plan(cfg.plan);
    validate_nm_config(cfg.nm);
    if (cfg.repeats_success < 1) throw std::invalid_argument("pbss: repeats must be >= 1");
    for (const auto& ring : bank.rings) {
        const double i0 = zero_weight_current(ring);
        if (i0 - cfg.linear_radius < ring.i_min_mA || i0 + cfg.linear_radius > ring.i_max_mA)
            throw std::invalid_argument(
                "pbss: linear-region sphere does not fit inside the ring current range");
    }
}

PbssEngine::PbssEngine(MixingScenario scenario, WeightBank bank, PbssConfig cfg)
    : scenario_(std::move(scenario)), bank_(std::move(bank)), cfg_(std::move(cfg)) {
    validate_pbss_config(cfg_, bank_);
    if (static_cast<std::size_t>(cfg_.n_sources) != bank_.size() ||
        scenario_.received_count() != bank_.size())
        throw std::invalid_argument(
            "pbss: separation needs n_sources == ring count == received signal count");
    clock_ = cfg_.plan.t_start;
}

StatEstimate PbssEngine::measure(const Vec& currents) {
    const MixedSignalProbe probe(scenario_, bank_, currents);
    const SamplingPlan plan = cfg_.plan.with_start(clock_);
    clock_ += plan.block_duration();
    ++cycles_;
    const Vec samples = acquire(probe, plan);
    const Moments m = moments(samples);
    const double k =
        m.m2 > 0.0 ? m.m4 / (m.m2 * m.m2) - 3.0 : std::numeric_limits<double>::quiet_NaN();
    return StatEstimate{m.m2, k, plan};
}

Vec PbssEngine::sphere_point(const Vec& i0_hat, const Vec& direction) const {
    return add(i0_hat, scale(direction, cfg_.linear_radius));
}

Vec PbssEngine::whitened_to_current_dir(const Matrix& whitening, const Vec& w_prime) const {
    return normalized(matvec(whitening, w_prime));
}

Vec PbssEngine::step1_find_zero() {
    const std::size_t l = bank_.size();
    Vec lower(l), upper(l), x0(l);
    for (std::size_t k = 0; k < l; ++k) {
        lower[k] = bank_.rings[k].i_min_mA;
        upper[k] = bank_.rings[k].i_max_mA;
        x0[k] = 0.5 * (lower[k] + upper[k]);
    }
    auto objective = [this](const Vec& i) { return measure(i).s2; };
    FieldResult r = minimize_field(objective, x0, lower, upper, cfg_.nm);
    traces_.push_back({"step1_variance_min", r.trace});
    noise_floor_ = r.best_value;
    return r.best;
}

std::vector<PrincipalComponent> PbssEngine::step2_pca(const Vec& i0_hat) {
    const std::size_t l = bank_.size();
    std::vector<PrincipalComponent> pcs;
    std::vector<Vec> constraints;
    for (int j = 0; j < cfg_.n_sources; ++j) {
        SphereDomain dom{i0_hat, cfg_.linear_radius, constraints};
        auto objective = [&](const Vec& u) { return measure(sphere_point(i0_hat, u)).s2; };
        SphereResult r = optimize_on_sphere(objective, dom, cfg_.nm, /*maximize=*/true);
        if (!(r.value > noise_floor_))
            throw std::domain_error("step2: principal-component variance at the noise floor");
        traces_.push_back({"step2_pc" + std::to_string(j + 1) + "_variance_max", r.trace});
        pcs.push_back({r.direction, r.value});
        constraints.push_back(r.direction);
        if (constraints.size() == l) break;  // final component was sign-only
    }
    return pcs;
}

Matrix build_whitening(const std::vector<PrincipalComponent>& pcs, double linear_radius) {
    if (pcs.empty()) throw std::invalid_argument("build_whitening: no principal components");
    const std::size_t l = pcs.front().direction.size();
    Matrix w(l, pcs.size());
    for (std::size_t j = 0; j < pcs.size(); ++j) {
        if (!(pcs[j].variance > 0.0))
            throw std::domain_error("build_whitening: nonpositive component variance");
        const double s = linear_radius / std::sqrt(pcs[j].variance);
        for (std::size_t i = 0; i < l; ++i) w(i, j) = s * pcs[j].direction[i];
    }
    return w;
}

std::vector<Vec> PbssEngine::step3_ica(const Vec& i0_hat, const Matrix& whitening) {
    const std::size_t a = whitening.cols;
    std::vector<Vec> ics;
    std::vector<Vec> constraints;
    for (std::size_t j = 0; j < a; ++j) {
        SphereDomain dom{Vec(a, 0.0), 1.0, constraints};
        auto objective = [&](const Vec& w_prime) {
            // ICA probes stay on the linear-region circle: the whitened
            // direction fixes the current-space direction, the offset is
            // rescaled to the configured radius.
            const Vec dir = whitened_to_current_dir(whitening, w_prime);
            const double k = measure(sphere_point(i0_hat, dir)).k;
            return std::isnan(k) ? kInf : k;
        };
        SphereResult r = optimize_on_sphere(objective, dom, cfg_.nm, /*maximize=*/false);
        traces_.push_back({"step3_ic" + std::to_string(j + 1) + "_kurtosis_min", r.trace});
        ics.push_back(r.direction);
        constraints.push_back(r.direction);
    }
    return ics;
}

std::vector<Vec> PbssEngine::step4_refine(const std::vector<Vec>& start_points) {
    const std::size_t l = bank_.size();
    Vec lower(l), upper(l);
    for (std::size_t k = 0; k < l; ++k) {
        lower[k] = bank_.rings[k].i_min_mA;
        upper[k] = bank_.rings[k].i_max_mA;
    }
    // Refinement must stay inside the convex region located by ICA, so the
    // initial simplex scales with the linear radius, not the full field.
    NelderMeadConfig nm = cfg_.nm;
    double min_width = upper[0] - lower[0];
    for (std::size_t k = 1; k < l; ++k) min_width = std::min(min_width, upper[k] - lower[k]);
    nm.initial_step = 0.1 * cfg_.linear_radius / min_width;
    auto objective = [this](const Vec& i) {
        const double k = measure(i).k;
        return std::isnan(k) ? kInf : k;
    };
    std::vector<Vec> finals;
    for (std::size_t j = 0; j < start_points.size(); ++j) {
        FieldResult r = minimize_field(objective, start_points[j], lower, upper, nm);
        traces_.push_back({"step4_ic" + std::to_string(j + 1) + "_kurtosis_field", r.trace});
        finals.push_back(r.best);
    }
    return finals;
}

PbssResult PbssEngine::run() {
    try {
        PbssResult res;
        res.i0_hat = step1_find_zero();
        res.pcs = step2_pca(res.i0_hat);
        res.whitening = build_whitening(res.pcs, cfg_.linear_radius);
        res.ics_whitened = step3_ica(res.i0_hat, res.whitening);
        std::vector<Vec> starts;
        for (const Vec& wp : res.ics_whitened) {
            const Vec dir = whitened_to_current_dir(res.whitening, wp);
            res.ics_sphere_current.push_back(dir);
            starts.push_back(sphere_point(res.i0_hat, dir));
        }
        res.ics_final = step4_refine(starts);
        res.traces = traces_;
        res.cycle_count = cycles_;
        return res;
    } catch (const PbssAborted&) {
        throw;
    } catch (const std::exception& e) {
        throw PbssAborted(e.what(), traces_, cycles_);
    }
}

PbssResult run_pbss(const MixingScenario& scenario, const WeightBank& bank,
                    const PbssConfig& cfg) {
    PbssEngine engine(scenario, bank, cfg);
    return engine.run();
}

Vec variance_gradient_oracle(const Matrix& mixing, const Vec& w) {
    if (!mixing.square()) throw std::invalid_argument("variance gradient: matrix must be square");
    if (determinant(mixing) == 0.0)
        throw std::domain_error("variance gradient: singular mixing matrix");
    return scale(matvec(matmul(mixing, transpose(mixing)), w), 2.0);
}

Matrix variance_hessian_oracle(const Matrix& mixing) {
    if (!mixing.square()) throw std::invalid_argument("variance hessian: matrix must be square");
    if (determinant(mixing) == 0.0)
        throw std::domain_error("variance hessian: singular mixing matrix");
    Matrix h = matmul(mixing, transpose(mixing));
    for (double& x : h.data) x *= 2.0;
    return h;
}

long pbss_cycle_estimate(int n_sources, int iterations) {
    if (n_sources < 2) throw std::invalid_argument("cycle estimate: need at least 2 sources");
    if (iterations < 0) throw std::invalid_argument("cycle estimate: negative iterations");
    // 1 field + (a-1) PCA + (a-1) ICA + a field optimizations
    return static_cast<long>(3 * n_sources - 1) * iterations;
}

double latency_model(int n_sources, int iterations, const SamplingPlan& plan,
                     const CycleOverheads& overheads) {
    const double per_cycle =
        acquisition_latency(plan) + overheads.t_c + overheads.t_s + overheads.t_p;
    return static_cast<double>(pbss_cycle_estimate(n_sources, iterations)) * per_cycle;
}

}  // namespace pbss
