#pragma once

#include <cstdint>
#include <vector>

#include "pbss/linalg.hpp"
#include "pbss/signal_model.hpp"

namespace pbss {

/// Physical constants of one micro-ring: the current-to-weight transfer is
/// weight(i) = R * (1 - 2 / (1 + (a + b i^2)^2)).
struct RingParams {
    double detune_offset = 0.5;    // dimensionless frequency detuning at zero current ("a")
    double tuning_per_mA2 = 0.125; // detuning shift per mA^2 of heater current ("b")
    double responsivity = 1.0;     // photodetector gain ("R")
    double i_min_mA = 0.0;
    double i_max_mA = 5.0;
};

/// Validates b > 0, R > 0, 0 <= i_min < i_max. The detune offset is allowed
/// to be >= 1; operations that need the zero-weight current reject that case
/// themselves.
RingParams make_ring(double detune_offset, double tuning_per_mA2, double responsivity,
                     double i_min_mA, double i_max_mA);

/// Lorentzian transmission 1 / (1 + delta^2), in (0, 1].
double lorentzian_transmission(double delta);

/// Detuning a + b i^2 at heater current i. Rejects currents outside the
/// ring's allowed interval.
double detuning(const RingParams& ring, double i_mA);

/// Balanced photocurrent weight R (1 - 2 T(a + b i^2)).
double photocurrent_weight(const RingParams& ring, double i_mA);

/// Analytic d(weight)/di, used for the Jacobian at the zero-weight point.
double photocurrent_weight_slope(const RingParams& ring, double i_mA);

/// Current at which the weight crosses zero: sqrt((1 - a) / b).
/// Throws std::domain_error when a >= 1 (no crossing).
double zero_weight_current(const RingParams& ring);

/// Second derivative of the weight at the zero-weight current, 2 R (2a - 1) b.
/// Vanishes exactly at a = 1/2, the most linear operating point.
double linearity_defect(const RingParams& ring);

/// Laser offset from ring resonance that realizes a = 1/2: omega00 / (2 Q),
/// i.e. one quarter of the transmission full-width at half-maximum.
double optimal_frequency_offset(double q_factor, double omega00);

enum class WeightModel {
    Ideal,       // weight_k = i_k - i0_k, the linear reference backend
    Lorentzian,  // full transfer-function physics
};

/// The micro-ring weight bank plus the additive measurement noise injected at
/// the balanced-detector output. Immutable once built.
struct WeightBank {
    std::vector<RingParams> rings;
    WeightModel model = WeightModel::Lorentzian;
    double noise_std = 0.0;
    std::uint64_t noise_seed = 0;

    WeightBank(std::vector<RingParams> rings, WeightModel model, double noise_std = 0.0,
               std::uint64_t noise_seed = 0);

    std::size_t size() const { return rings.size(); }
    /// Weight applied by ring k at current i under the configured model.
    double weight(std::size_t k, double i_mA) const;
    /// Analytic zero-weight current vector.
    Vec zero_currents() const;

    WeightBank with_noise_seed(std::uint64_t seed) const;
};

/// Matrix of partial derivatives of the weight vector at the zero-weight
/// point. Rings are independent, so it is diagonal; the Ideal model gives
/// the identity.
Matrix jacobian_at_zero(const WeightBank& bank);

/// A weight bank driven at a fixed current vector against a scenario:
/// m(t) = sum_k weight_k(i_k) r_k(t) + noise. Weights are cached at
/// construction; currents outside any ring's interval are rejected.
struct MixedSignalProbe {
    MixingScenario scenario;
    WeightBank bank;
    Vec currents;
    Vec weights;
    Vec source_gain;  // w^T M, folded once so evaluation is allocation-free

    MixedSignalProbe(MixingScenario sc, WeightBank b, Vec currents_mA);
};

/// Mixed output at time t. Noise is addressed by (noise_seed, bit pattern of
/// t), so re-evaluating the same instant reproduces the same draw while
/// distinct sample times get independent draws.
double eval_mixed(const MixedSignalProbe& probe, double t);

}  // namespace pbss
