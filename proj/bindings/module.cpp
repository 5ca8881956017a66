#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pbss/config.hpp"
#include "pbss/demod.hpp"
#include "pbss/sweeps.hpp"

namespace py = pybind11;
using namespace pbss;

namespace {

Matrix matrix_from_rows(const std::vector<Vec>& rows) { return Matrix::from_rows(rows); }

std::vector<Vec> matrix_rows(const Matrix& m) {
    std::vector<Vec> rows(m.rows, Vec(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) rows[i][j] = m(i, j);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_pbss, m) {
    m.doc() = "Photonic blind source separation simulator";

    py::class_<SourceSignal>(m, "SourceSignal")
        .def_readonly("baud_rate", &SourceSignal::baud_rate)
        .def_readonly("carrier_freq", &SourceSignal::carrier_freq)
        .def_readonly("carrier_phase", &SourceSignal::carrier_phase)
        .def_readonly("amplitude", &SourceSignal::amplitude)
        .def_property_readonly("bits",
                               [](const SourceSignal& s) {
                                   return std::vector<int>(s.bits.begin(), s.bits.end());
                               })
        .def("period", &SourceSignal::period);

    m.def("make_bpsk_source", &make_bpsk_source, py::arg("seed"), py::arg("n_bits"),
          py::arg("baud_hz"), py::arg("carrier_hz"), py::arg("phase_rad") = 0.0);
    m.def("eval_source", &eval_source);

    py::class_<MixingScenario>(m, "MixingScenario")
        .def(py::init([](const std::vector<SourceSignal>& sources,
                         const std::vector<Vec>& mixing) {
                 return MixingScenario(sources, matrix_from_rows(mixing));
             }),
             py::arg("sources"), py::arg("mixing"))
        .def_property_readonly("mixing",
                               [](const MixingScenario& sc) { return matrix_rows(sc.mixing); })
        .def_readonly("sources", &MixingScenario::sources);
    m.def("eval_received", &eval_received);

    py::class_<RingParams>(m, "RingParams")
        .def_readonly("detune_offset", &RingParams::detune_offset)
        .def_readonly("tuning_per_mA2", &RingParams::tuning_per_mA2)
        .def_readonly("responsivity", &RingParams::responsivity)
        .def_readonly("i_min_mA", &RingParams::i_min_mA)
        .def_readonly("i_max_mA", &RingParams::i_max_mA);
    m.def("make_ring", &make_ring, py::arg("detune_offset"), py::arg("tuning_per_mA2"),
          py::arg("responsivity"), py::arg("i_min_mA"), py::arg("i_max_mA"));

    m.def("lorentzian_transmission", &lorentzian_transmission);
    m.def("detuning", &detuning);
    m.def("photocurrent_weight", &photocurrent_weight);
    m.def("zero_weight_current", &zero_weight_current);
    m.def("linearity_defect", &linearity_defect);
    m.def("optimal_frequency_offset", &optimal_frequency_offset);

    py::enum_<WeightModel>(m, "WeightModel")
        .value("Ideal", WeightModel::Ideal)
        .value("Lorentzian", WeightModel::Lorentzian);

    py::class_<WeightBank>(m, "WeightBank")
        .def(py::init<std::vector<RingParams>, WeightModel, double, std::uint64_t>(),
             py::arg("rings"), py::arg("model"), py::arg("noise_std") = 0.0,
             py::arg("noise_seed") = 0)
        .def("weight", &WeightBank::weight)
        .def("zero_currents", &WeightBank::zero_currents)
        .def("with_noise_seed", &WeightBank::with_noise_seed);
    m.def("jacobian_at_zero",
          [](const WeightBank& bank) { return matrix_rows(jacobian_at_zero(bank)); });

    py::class_<MixedSignalProbe>(m, "MixedSignalProbe")
        .def(py::init<MixingScenario, WeightBank, Vec>(), py::arg("scenario"), py::arg("bank"),
             py::arg("currents_mA"))
        .def_readonly("weights", &MixedSignalProbe::weights);
    m.def("eval_mixed", &eval_mixed);

    py::class_<SamplingPlan>(m, "SamplingPlan")
        .def_static("periodic", &SamplingPlan::periodic, py::arg("f_s"), py::arg("n_s"),
                    py::arg("t_start") = 0.0)
        .def_static("random", &SamplingPlan::random, py::arg("f_s"), py::arg("n_s"),
                    py::arg("window"), py::arg("seed"), py::arg("t_start") = 0.0)
        .def_readonly("f_s", &SamplingPlan::f_s)
        .def_readonly("n_s", &SamplingPlan::n_s)
        .def_readonly("t_start", &SamplingPlan::t_start)
        .def("block_duration", &SamplingPlan::block_duration);

    py::class_<StatEstimate>(m, "StatEstimate")
        .def_readonly("s2", &StatEstimate::s2)
        .def_readonly("k", &StatEstimate::k);

    py::class_<EstimatorQuality>(m, "EstimatorQuality")
        .def_readonly("mean", &EstimatorQuality::mean)
        .def_readonly("std", &EstimatorQuality::std)
        .def_readonly("snr_db", &EstimatorQuality::snr_db)
        .def_readonly("repeats", &EstimatorQuality::repeats);

    m.def("acquire", &acquire);
    m.def("estimate",
          [](const Vec& samples) { return estimate(samples); });
    m.def("sample_mean", [](const Vec& samples) { return sample_mean(samples); });
    m.def("estimator_quality", &estimator_quality);
    m.def("varvar_iid_predict", &varvar_iid_predict);
    m.def("acquisition_latency", &acquisition_latency);

    py::class_<NelderMeadConfig>(m, "NelderMeadConfig")
        .def(py::init<>())
        .def_readwrite("iterations", &NelderMeadConfig::iterations)
        .def_readwrite("initial_step", &NelderMeadConfig::initial_step)
        .def_readwrite("sphere_initial_step", &NelderMeadConfig::sphere_initial_step);

    py::class_<FieldResult>(m, "FieldResult")
        .def_readonly("best", &FieldResult::best)
        .def_readonly("best_value", &FieldResult::best_value)
        .def_readonly("trace", &FieldResult::trace)
        .def_readonly("evals", &FieldResult::evals);
    m.def("minimize_field", &minimize_field, py::arg("objective"), py::arg("x0"),
          py::arg("lower"), py::arg("upper"), py::arg("cfg") = NelderMeadConfig{});

    py::class_<SphereDomain>(m, "SphereDomain")
        .def(py::init<>())
        .def_readwrite("center", &SphereDomain::center)
        .def_readwrite("radius", &SphereDomain::radius)
        .def_readwrite("orthogonal_to", &SphereDomain::orthogonal_to);
    py::class_<SphereResult>(m, "SphereResult")
        .def_readonly("direction", &SphereResult::direction)
        .def_readonly("value", &SphereResult::value)
        .def_readonly("trace", &SphereResult::trace)
        .def_readonly("evals", &SphereResult::evals);
    m.def("optimize_on_sphere", &optimize_on_sphere, py::arg("objective"), py::arg("dom"),
          py::arg("cfg"), py::arg("maximize"), py::arg("init_direction") = Vec{});

    py::class_<PbssConfig>(m, "PbssConfig")
        .def(py::init<>())
        .def_readwrite("n_sources", &PbssConfig::n_sources)
        .def_readwrite("linear_radius", &PbssConfig::linear_radius)
        .def_readwrite("plan", &PbssConfig::plan)
        .def_readwrite("nm", &PbssConfig::nm)
        .def_readwrite("repeats_success", &PbssConfig::repeats_success);

    py::class_<PbssResult>(m, "PbssResult")
        .def_readonly("i0_hat", &PbssResult::i0_hat)
        .def_property_readonly("whitening",
                               [](const PbssResult& r) { return matrix_rows(r.whitening); })
        .def_readonly("ics_whitened", &PbssResult::ics_whitened)
        .def_readonly("ics_sphere_current", &PbssResult::ics_sphere_current)
        .def_readonly("ics_final", &PbssResult::ics_final)
        .def_readonly("cycle_count", &PbssResult::cycle_count)
        .def_property_readonly("pcs", [](const PbssResult& r) {
            std::vector<std::pair<Vec, double>> out;
            for (const auto& pc : r.pcs) out.emplace_back(pc.direction, pc.variance);
            return out;
        });

    m.def("run_pbss", &run_pbss, py::call_guard<py::gil_scoped_release>());
    m.def("result_to_json", &result_to_json);
    m.def("variance_gradient_oracle",
          [](const std::vector<Vec>& mixing, const Vec& w) {
              return variance_gradient_oracle(matrix_from_rows(mixing), w);
          });
    m.def("pbss_cycle_estimate", &pbss_cycle_estimate);
    m.def("latency_model",
          [](int n_sources, int iterations, const SamplingPlan& plan, double t_c, double t_s,
             double t_p) {
              return latency_model(n_sources, iterations, plan, CycleOverheads{t_c, t_s, t_p});
          },
          py::arg("n_sources"), py::arg("iterations"), py::arg("plan"), py::arg("t_c") = 0.0,
          py::arg("t_s") = 0.0, py::arg("t_p") = 0.0);

    py::class_<DemodReport>(m, "DemodReport")
        .def_readonly("source_index", &DemodReport::source_index)
        .def_readonly("bit_errors", &DemodReport::bit_errors)
        .def_readonly("alignment_offset", &DemodReport::alignment_offset)
        .def_readonly("polarity", &DemodReport::polarity)
        .def_readonly("phase_used", &DemodReport::phase_used);
    m.def("demodulate", &demodulate, py::arg("probe"), py::arg("source"),
          py::arg("source_index") = 0, py::arg("t_start") = 0.0,
          py::arg("samples_per_cycle") = 16, py::arg("n_phases") = 16,
          py::call_guard<py::gil_scoped_release>());
    m.def("pbss_success", &pbss_success, py::arg("result"), py::arg("scenario"), py::arg("bank"),
          py::arg("t_start") = 0.0, py::call_guard<py::gil_scoped_release>());
}
