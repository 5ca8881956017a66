#include "pbss/weight_bank.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pbss/rng.hpp"

namespace pbss {

RingParams make_ring(double detune_offset, double tuning_per_mA2, double responsivity,
                     double i_min_mA, double i_max_mA) {
    if (!(tuning_per_mA2 > 0.0)) throw std::invalid_argument("ring: tuning coefficient must be > 0");
    if (!(responsivity > 0.0)) throw std::invalid_argument("ring: responsivity must be > 0");
    if (i_min_mA < 0.0) throw std::invalid_argument("ring: i_min must be >= 0");
    if (!(i_max_mA > i_min_mA)) throw std::invalid_argument("ring: i_max must exceed i_min");
    return RingParams{detune_offset, tuning_per_mA2, responsivity, i_min_mA, i_max_mA};
}

double lorentzian_transmission(double delta) { return 1.0 / (1.0 + delta * delta); }

namespace {

void check_current(const RingParams& ring, double i_mA) {
    if (i_mA < ring.i_min_mA || i_mA > ring.i_max_mA)
        throw std::domain_error("current " + std::to_string(i_mA) + " mA outside [" +
                                std::to_string(ring.i_min_mA) + ", " +
                                std::to_string(ring.i_max_mA) + "]");
}

double detuning_unchecked(const RingParams& ring, double i_mA) {
    return ring.detune_offset + ring.tuning_per_mA2 * i_mA * i_mA;
}

double weight_unchecked(const RingParams& ring, double i_mA) {
    return ring.responsivity * (1.0 - 2.0 * lorentzian_transmission(detuning_unchecked(ring, i_mA)));
}

}  // namespace

double detuning(const RingParams& ring, double i_mA) {
    check_current(ring, i_mA);
    return detuning_unchecked(ring, i_mA);
}

double photocurrent_weight(const RingParams& ring, double i_mA) {
    check_current(ring, i_mA);
    return weight_unchecked(ring, i_mA);
}

double photocurrent_weight_slope(const RingParams& ring, double i_mA) {
    // dI/di = 8 R b i delta T(delta)^2
    const double delta = detuning_unchecked(ring, i_mA);
    const double t = lorentzian_transmission(delta);
    return 8.0 * ring.responsivity * ring.tuning_per_mA2 * i_mA * delta * t * t;
}

double zero_weight_current(const RingParams& ring) {
    if (ring.detune_offset >= 1.0)
        throw std::domain_error("zero_weight_current: no zero crossing when detune offset >= 1");
    return std::sqrt((1.0 - ring.detune_offset) / ring.tuning_per_mA2);
}

double linearity_defect(const RingParams& ring) {
    return 2.0 * ring.responsivity * (2.0 * ring.detune_offset - 1.0) * ring.tuning_per_mA2;
}

double optimal_frequency_offset(double q_factor, double omega00) {
    if (!(q_factor > 0.0)) throw std::invalid_argument("optimal_frequency_offset: Q must be > 0");
    return omega00 / (2.0 * q_factor);
}

WeightBank::WeightBank(std::vector<RingParams> r, WeightModel m, double ns, std::uint64_t seed)
    : rings(std::move(r)), model(m), noise_std(ns), noise_seed(seed) {
    if (rings.empty()) throw std::invalid_argument("WeightBank: no rings");
    if (noise_std < 0.0) throw std::invalid_argument("WeightBank: noise_std must be >= 0");
    for (const auto& ring : rings) {
        if (!(ring.tuning_per_mA2 > 0.0) || !(ring.responsivity > 0.0) ||
            ring.i_min_mA < 0.0 || !(ring.i_max_mA > ring.i_min_mA))
            throw std::invalid_argument("WeightBank: invalid ring parameters");
    }
}

double WeightBank::weight(std::size_t k, double i_mA) const {
    const RingParams& ring = rings.at(k);
    check_current(ring, i_mA);
    if (model == WeightModel::Ideal) return i_mA - zero_weight_current(ring);
    return weight_unchecked(ring, i_mA);
}

Vec WeightBank::zero_currents() const {
    Vec out(rings.size());
    for (std::size_t k = 0; k < rings.size(); ++k) out[k] = zero_weight_current(rings[k]);
    return out;
}

WeightBank WeightBank::with_noise_seed(std::uint64_t seed) const {
    WeightBank b(*this);
    b.noise_seed = seed;
    return b;
}

Matrix jacobian_at_zero(const WeightBank& bank) {
    Matrix j(bank.size(), bank.size());
    for (std::size_t k = 0; k < bank.size(); ++k) {
        if (bank.model == WeightModel::Ideal) {
            j(k, k) = 1.0;
        } else {
            j(k, k) = photocurrent_weight_slope(bank.rings[k], zero_weight_current(bank.rings[k]));
        }
    }
    return j;
}

MixedSignalProbe::MixedSignalProbe(MixingScenario sc, WeightBank b, Vec currents_mA)
    : scenario(std::move(sc)), bank(std::move(b)), currents(std::move(currents_mA)) {
    if (bank.size() != scenario.received_count())
        throw std::invalid_argument("MixedSignalProbe: ring count must match received signal count");
    if (currents.size() != bank.size())
        throw std::invalid_argument("MixedSignalProbe: current vector length mismatch");
    weights.resize(currents.size());
    for (std::size_t k = 0; k < currents.size(); ++k) weights[k] = bank.weight(k, currents[k]);
    source_gain.assign(scenario.source_count(), 0.0);
    for (std::size_t i = 0; i < source_gain.size(); ++i)
        for (std::size_t k = 0; k < weights.size(); ++k)
            source_gain[i] += weights[k] * scenario.mixing(k, i);
}

double eval_mixed(const MixedSignalProbe& probe, double t) {
    double m = 0.0;
    for (std::size_t i = 0; i < probe.source_gain.size(); ++i)
        m += probe.source_gain[i] * eval_source(probe.scenario.sources[i], t);
    if (probe.bank.noise_std > 0.0)
        m += probe.bank.noise_std * gaussian(probe.bank.noise_seed, std::bit_cast<std::uint64_t>(t));
    return m;
}

}  // namespace pbss
