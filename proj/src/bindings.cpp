#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include <choicepa/exact.hpp>
#include <choicepa/harness.hpp>
#include <choicepa/model.hpp>
#include <choicepa/observables.hpp>
#include <choicepa/theory.hpp>

namespace py = pybind11;
using namespace choicepa;

namespace {

std::string config_repr(const ModelConfig& config) {
    return std::string("ModelConfig(d=") + std::to_string(config.d) + ", rule='" +
           to_string(config.rule) + "', attachment='" + to_string(config.attachment) +
           "', seed=" + std::to_string(config.seed) + ")";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Choice-augmented preferential attachment trees: simulator, "
              "observables, fixed-point theory, urn and exact small-n laws";
    m.attr("__version__") = "0.1.0";

    py::enum_<ChoiceRule>(m, "ChoiceRule")
        .value("max", ChoiceRule::kMax)
        .value("min", ChoiceRule::kMin)
        .value("none", ChoiceRule::kNone);

    py::enum_<Attachment>(m, "Attachment")
        .value("preferential", Attachment::kPreferential)
        .value("uniform", Attachment::kUniform);

    py::enum_<TieBreak>(m, "TieBreak")
        .value("uniform_among_tied", TieBreak::kUniformAmongTied);

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init([](std::uint32_t d, ChoiceRule rule, Attachment attachment,
                         std::uint64_t seed) {
                 ModelConfig config{d, rule, attachment, seed};
                 config.validate();
                 return config;
             }),
             py::arg("d") = 2, py::arg("rule") = ChoiceRule::kMax,
             py::arg("attachment") = Attachment::kPreferential, py::arg("seed") = 1)
        .def_readwrite("d", &ModelConfig::d)
        .def_readwrite("rule", &ModelConfig::rule)
        .def_readwrite("attachment", &ModelConfig::attachment)
        .def_readwrite("seed", &ModelConfig::seed)
        .def_readonly("tie_break", &ModelConfig::tie_break)
        .def("__repr__", &config_repr);

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("below", &Rng::below, py::arg("bound"))
        .def("uniform01", &Rng::uniform01);

    py::class_<TreeState>(m, "TreeState")
        .def_static("initial", &TreeState::initial)
        .def_property_readonly("edge_count", &TreeState::edge_count)
        .def_property_readonly("vertex_count", &TreeState::vertex_count)
        .def_property_readonly("max_degree", &TreeState::max_degree)
        .def("degree", &TreeState::degree, py::arg("vertex"))
        .def_property_readonly("degrees",
                               [](const TreeState& s) { return s.degrees(); })
        .def_property_readonly("endpoints",
                               [](const TreeState& s) { return s.endpoints(); })
        .def_property_readonly("degree_histogram",
                               [](const TreeState& s) { return s.degree_histogram(); })
        .def("check_consistency", &TreeState::check_consistency);

    py::class_<StepOutcome>(m, "StepOutcome")
        .def_readonly("step", &StepOutcome::step)
        .def_readonly("candidates", &StepOutcome::candidates)
        .def_readonly("chosen", &StepOutcome::chosen)
        .def_readonly("new_vertex", &StepOutcome::new_vertex)
        .def_readonly("chosen_degree_before", &StepOutcome::chosen_degree_before)
        .def_readonly("max_before", &StepOutcome::max_before)
        .def_readonly("max_after", &StepOutcome::max_after);

    m.def("init_tree", &TreeState::initial, "The one-edge tree P_1");
    m.def("sample_candidate", &sample_candidate, py::arg("state"), py::arg("config"),
          py::arg("rng"));
    m.def("select_attachment", &select_attachment, py::arg("candidates"), py::arg("state"),
          py::arg("config"), py::arg("rng"));
    m.def(
        "grow_step",
        [](TreeState& state, const ModelConfig& config, Rng& rng) {
            return grow_step(state, config, rng);
        },
        py::arg("state"), py::arg("config"), py::arg("rng"));
    m.def("export_edge_list", &export_edge_list, py::arg("state"));

    py::class_<MaxStats>(m, "MaxStats")
        .def_readonly("n", &MaxStats::n)
        .def_readonly("max_degree", &MaxStats::max_degree)
        .def_readonly("max_count", &MaxStats::max_count)
        .def_readonly("leader", &MaxStats::leader)
        .def_readonly("last_change_step", &MaxStats::last_change_step)
        .def_readonly("change_count", &MaxStats::change_count);

    py::class_<CheckpointSnapshot>(m, "CheckpointSnapshot")
        .def_readonly("n", &CheckpointSnapshot::n)
        .def_readonly("max_degree", &CheckpointSnapshot::max_degree)
        .def_readonly("max_count", &CheckpointSnapshot::max_count)
        .def_readonly("leader", &CheckpointSnapshot::leader)
        .def_readonly("change_count", &CheckpointSnapshot::change_count)
        .def_readonly("last_change_step", &CheckpointSnapshot::last_change_step)
        .def_readonly("scaled_metric", &CheckpointSnapshot::scaled_metric);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("config", &TrajectoryRecord::config)
        .def_readonly("snapshots", &TrajectoryRecord::snapshots)
        .def_readonly("final_stats", &TrajectoryRecord::final_stats)
        .def_readonly("final_edges", &TrajectoryRecord::final_edges);

    m.def(
        "run_growth",
        [](const ModelConfig& config, std::uint64_t n_steps,
           const std::vector<std::uint64_t>& checkpoints) {
            return run_growth(config, n_steps, checkpoints);
        },
        py::arg("config"), py::arg("n_steps"),
        py::arg("checkpoints") = std::vector<std::uint64_t>{},
        py::call_guard<py::gil_scoped_release>());

    m.def("effective_draw_count", &effective_draw_count, py::arg("config"));
    m.def("scaled_metric", &scaled_metric, py::arg("n"), py::arg("max_degree"), py::arg("d"));

    py::class_<DiagnosticScales>(m, "DiagnosticScales")
        .def_readonly("c", &DiagnosticScales::c)
        .def_readonly("q", &DiagnosticScales::q)
        .def_readonly("u", &DiagnosticScales::u);
    m.def("scale_functions", &scale_functions, py::arg("n"), py::arg("max_degree"), py::arg("c"));

    py::class_<DriftRatios>(m, "DriftRatios")
        .def_readonly("q_drift", &DriftRatios::q_drift)
        .def_readonly("u_drift", &DriftRatios::u_drift);
    m.def("drift_check_d2", &drift_check_d2, py::arg("n"), py::arg("max_degree"), py::arg("c"));
    m.def("drift_step_probability", &drift_step_probability, py::arg("n"), py::arg("max_degree"));

    m.def("attachment_probability", &attachment_probability, py::arg("max_degree"),
          py::arg("max_count"), py::arg("n"), py::arg("d"));
    m.def("choice_intensity", &choice_intensity, py::arg("x"), py::arg("d"));
    m.def("fixed_point_map", &fixed_point_map, py::arg("x"), py::arg("d"));

    py::register_exception<NoInteriorRoot>(m, "NoInteriorRoot");

    py::class_<FixedPointResult>(m, "FixedPointResult")
        .def_readonly("d", &FixedPointResult::d)
        .def_readonly("x_star", &FixedPointResult::x_star)
        .def_readonly("residual", &FixedPointResult::residual)
        .def_readonly("derivative", &FixedPointResult::derivative)
        .def_readonly("iterations", &FixedPointResult::iterations);
    m.def("solve_x_star", &solve_x_star, py::arg("d"), py::arg("tol") = 1e-12);
    m.def("predicted_max", &predicted_max, py::arg("n"), py::arg("d"));

    py::class_<UrnState>(m, "UrnState")
        .def(py::init<>())
        .def(py::init([](std::uint64_t black, std::uint64_t white) {
                 return UrnState{black, white, 0};
             }),
             py::arg("black"), py::arg("white"))
        .def_readwrite("black", &UrnState::black)
        .def_readwrite("white", &UrnState::white)
        .def_readonly("steps", &UrnState::steps);
    m.def("urn_increment_probability", &urn_increment_probability, py::arg("urn"), py::arg("d"));
    m.def("urn_step", &urn_step, py::arg("urn"), py::arg("d"), py::arg("rng"));

    py::class_<UrnTracePoint>(m, "UrnTracePoint")
        .def_readonly("step", &UrnTracePoint::step)
        .def_readonly("black", &UrnTracePoint::black)
        .def_readonly("white", &UrnTracePoint::white)
        .def_readonly("black_fraction", &UrnTracePoint::black_fraction);
    m.def(
        "run_urn",
        [](const UrnState& initial, std::uint32_t d, std::uint64_t n_steps, std::uint64_t seed,
           const std::optional<std::vector<std::uint64_t>>& checkpoints) {
            if (checkpoints) return run_urn(initial, d, n_steps, seed, *checkpoints);
            return run_urn(initial, d, n_steps, seed);
        },
        py::arg("initial"), py::arg("d"), py::arg("n_steps"), py::arg("seed"),
        py::arg("checkpoints") = std::nullopt, py::call_guard<py::gil_scoped_release>());

    py::class_<ExactDistribution>(m, "ExactDistribution")
        .def_readonly("n_target", &ExactDistribution::n_target)
        .def_property_readonly("max_degree_probabilities",
                               [](const ExactDistribution& self) {
                                   return self.max_degree_probabilities;
                               })
        .def_property_readonly("multiset_probabilities", [](const ExactDistribution& self) {
            py::dict out;
            for (const auto& [multiset, probability] : self.multiset_probabilities) {
                py::tuple key(multiset.size());
                for (std::size_t i = 0; i < multiset.size(); ++i) key[i] = multiset[i];
                out[key] = probability;
            }
            return out;
        });
    m.def("exact_distribution",
          py::overload_cast<std::uint32_t, const ModelConfig&, std::uint32_t>(&exact_distribution),
          py::arg("n_target"), py::arg("config"), py::arg("cap") = kExactDistributionCap);

    // harness surface
    py::register_exception<SpecError>(m, "SpecError");

    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("grow", ExperimentKind::kGrow)
        .value("urn", ExperimentKind::kUrn)
        .value("xstar", ExperimentKind::kXstar)
        .value("exact", ExperimentKind::kExact)
        .value("table1", ExperimentKind::kTable1)
        .value("hub", ExperimentKind::kHub);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def_readwrite("kind", &ExperimentSpec::kind)
        .def_readwrite("model", &ExperimentSpec::model)
        .def_readwrite("n_steps", &ExperimentSpec::n_steps)
        .def_readwrite("checkpoints", &ExperimentSpec::checkpoints)
        .def_readwrite("seeds", &ExperimentSpec::seeds)
        .def_readwrite("out_dir", &ExperimentSpec::out_dir)
        .def_readwrite("threads", &ExperimentSpec::threads);

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("seed", &RunSummary::seed)
        .def_readonly("final_max_degree", &RunSummary::final_max_degree)
        .def_readonly("final_max_count", &RunSummary::final_max_count)
        .def_readonly("final_leader", &RunSummary::final_leader)
        .def_readonly("change_count", &RunSummary::change_count)
        .def_readonly("last_change_step", &RunSummary::last_change_step)
        .def_readonly("snapshots", &RunSummary::snapshots)
        .def_readonly("wall_seconds", &RunSummary::wall_seconds);

    m.def("parse_spec", [](const std::string& text) { return parse_spec(text); },
          py::arg("text"));
    m.def("run_experiment", &run_experiment, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_and_emit", &run_and_emit, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
}
