#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pbss/optimize.hpp"
#include "pbss/sampling.hpp"
#include "pbss/signal_model.hpp"
#include "pbss/weight_bank.hpp"

namespace pbss {

struct PbssConfig {
    int n_sources = 2;           // distinguishable independent signals
    double linear_radius = 0.6;  // mA, boundary of the linear weighting region
    SamplingPlan plan = SamplingPlan::periodic(122.88e6, 1u << 14);
    NelderMeadConfig nm;
    int repeats_success = 32;
};

void validate_pbss_config(const PbssConfig& cfg, const WeightBank& bank);

struct PrincipalComponent {
    Vec direction;  // unit vector in current-offset space
    double variance = 0.0;
};

struct StepTrace {
    std::string label;
    Vec values;
};

struct PbssResult {
    Vec i0_hat;
    std::vector<PrincipalComponent> pcs;
    Matrix whitening;
    std::vector<Vec> ics_whitened;        // unit vectors in the whitened basis
    std::vector<Vec> ics_sphere_current;  // same directions mapped to current space
    std::vector<Vec> ics_final;           // current vectors after the field refinement
    std::vector<StepTrace> traces;
    long cycle_count = 0;  // statistic acquisitions consumed by the run
};

/// Thrown when a step fails; carries whatever traces were recorded so a
/// partial run can still be inspected.
struct PbssAborted : std::runtime_error {
    PbssAborted(const std::string& what, std::vector<StepTrace> t, long cycles)
        : std::runtime_error(what), traces(std::move(t)), cycle_count(cycles) {}
    std::vector<StepTrace> traces;
    long cycle_count;
};

/// Runs the four-step zero-calibration separation: variance minimization to
/// locate the zero-weight point, variance-maximizing PCA on the linear-region
/// sphere, kurtosis-minimizing ICA in the whitened basis, and a final
/// kurtosis minimization over the whole current field. Strictly sequential:
/// every statistic acquisition advances the engine clock by one block.
class PbssEngine {
public:
    PbssEngine(MixingScenario scenario, WeightBank bank, PbssConfig cfg);

    PbssResult run();

    // Individual steps, public so each can be validated in isolation.
    Vec step1_find_zero();
    std::vector<PrincipalComponent> step2_pca(const Vec& i0_hat);
    std::vector<Vec> step3_ica(const Vec& i0_hat, const Matrix& whitening);
    std::vector<Vec> step4_refine(const std::vector<Vec>& start_points);

    /// One weight-set / statistic-measure cycle at the given currents.
    /// Kurtosis is NaN when the measured signal is identically zero.
    StatEstimate measure(const Vec& currents);

    long cycle_count() const { return cycles_; }
    const std::vector<StepTrace>& traces() const { return traces_; }
    const MixingScenario& scenario() const { return scenario_; }
    const WeightBank& bank() const { return bank_; }
    const PbssConfig& config() const { return cfg_; }
    /// Variance measured at the recovered zero point; PC variances at or
    /// below this floor mean no separable signal is present.
    double noise_floor() const { return noise_floor_; }

private:
    Vec sphere_point(const Vec& i0_hat, const Vec& direction) const;
    Vec whitened_to_current_dir(const Matrix& whitening, const Vec& w_prime) const;

    MixingScenario scenario_;
    WeightBank bank_;
    PbssConfig cfg_;
    double clock_ = 0.0;
    long cycles_ = 0;
    std::vector<StepTrace> traces_;
    double noise_floor_ = 0.0;
};

/// W = U diag(radius / sqrt(S2_j)) with U's columns the PC directions; the
/// variance field becomes isotropic in the transformed coordinates.
Matrix build_whitening(const std::vector<PrincipalComponent>& pcs, double linear_radius);

PbssResult run_pbss(const MixingScenario& scenario, const WeightBank& bank,
                    const PbssConfig& cfg);

/// Analytic gradient 2 M M^T w of the mixed-signal variance with respect to
/// the weights; rejects singular M.
Vec variance_gradient_oracle(const Matrix& mixing, const Vec& w);
/// Analytic Hessian 2 M M^T (constant in w).
Matrix variance_hessian_oracle(const Matrix& mixing);

/// Nominal cycle count of a full run: (3a - 1) optimizations of `iterations`
/// measure cycles each.
long pbss_cycle_estimate(int n_sources, int iterations);

struct CycleOverheads {
    double t_c = 0.0;  // DAC communication
    double t_s = 0.0;  // statistic calculation
    double t_p = 0.0;  // photonic weight stabilization
};

/// Total weight-determination latency: cycle count x (t_a + t_c + t_s + t_p).
double latency_model(int n_sources, int iterations, const SamplingPlan& plan,
                     const CycleOverheads& overheads = {});

}  // namespace pbss
