#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dkr/connectivity.hpp"
#include "dkr/ensemble.hpp"
#include "dkr/expansion.hpp"
#include "dkr/kernel.hpp"
#include "dkr/local_solver.hpp"
#include "dkr/oracle.hpp"
#include "dkr/trainer.hpp"

namespace py = pybind11;
using namespace dkr;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Collaborative kernel regression: kernels, ensembles, the "
            "projection trainer, exact oracles, connectivity analysis";

  py::enum_<KernelFamily>(m, "KernelFamily")
      .value("LINEAR", KernelFamily::Linear)
      .value("POLYNOMIAL", KernelFamily::Polynomial)
      .value("GAUSSIAN", KernelFamily::Gaussian);

  py::class_<Kernel>(m, "Kernel")
      .def_static("linear", &Kernel::linear)
      .def_static("polynomial", &Kernel::polynomial, py::arg("degree"),
                  py::arg("offset") = 1.0)
      .def_static("gaussian", &Kernel::gaussian, py::arg("bandwidth"))
      .def_readonly("family", &Kernel::family)
      .def_readonly("degree", &Kernel::degree)
      .def_readonly("offset", &Kernel::offset)
      .def_readonly("bandwidth", &Kernel::bandwidth)
      .def("__call__", &Kernel::operator());

  py::class_<GramMatrix>(m, "GramMatrix")
      .def_readonly("entries", &GramMatrix::entries)
      .def_readonly("point_ids", &GramMatrix::point_ids);

  m.def("eval_kernel", &eval_kernel);
  m.def("gram", &gram, py::arg("kernel"), py::arg("points"), py::arg("ids"));
  m.def("gram_all", &gram_all);
  m.def("numerical_rank",
        py::overload_cast<const Eigen::MatrixXd&>(&numerical_rank));

  py::class_<KernelExpansion>(m, "KernelExpansion")
      .def(py::init<>())
      .def(py::init<std::vector<std::size_t>, Eigen::VectorXd, Kernel>(),
           py::arg("center_ids"), py::arg("coefficients"), py::arg("kernel"))
      .def_readonly("center_ids", &KernelExpansion::center_ids)
      .def_readonly("coefficients", &KernelExpansion::coefficients)
      .def_readonly("kernel", &KernelExpansion::kernel)
      .def("__call__",
           [](const KernelExpansion& f, const std::vector<Point>& store,
              const Point& x) { return eval_expansion(f, store, x); });

  m.def("eval_expansion", &eval_expansion);
  m.def("rkhs_norm_sq", &rkhs_norm_sq);
  m.def("rkhs_diff_norm_sq", &rkhs_diff_norm_sq);

  py::class_<TrainingSet>(m, "TrainingSet")
      .def(py::init([](std::vector<Point> points, Eigen::VectorXd labels) {
             TrainingSet ts{std::move(points), std::move(labels)};
             ts.validate();
             return ts;
           }),
           py::arg("points"), py::arg("labels"))
      .def_readonly("points", &TrainingSet::points)
      .def_readonly("labels", &TrainingSet::labels)
      .def("__len__", &TrainingSet::size)
      .def_property_readonly("dim", &TrainingSet::dim);

  py::class_<Ensemble>(m, "Ensemble")
      .def(py::init<std::size_t, std::size_t,
                    std::vector<std::vector<std::size_t>>>(),
           py::arg("m"), py::arg("n"), py::arg("assignments"))
      .def_property_readonly("m", &Ensemble::agent_count)
      .def_property_readonly("n", &Ensemble::example_count)
      .def("agent_ids", &Ensemble::agent_ids)
      .def_property_readonly("assignments", &Ensemble::assignments)
      .def("covered", &Ensemble::covered)
      .def("covers_all", &Ensemble::covers_all);

  py::class_<MessageBoard>(m, "MessageBoard")
      .def_readonly("z", &MessageBoard::z)
      .def_readonly("version", &MessageBoard::version);

  py::class_<SyntheticTarget>(m, "SyntheticTarget")
      .def_static("linear",
                  [](Eigen::VectorXd w, double b, double noise_sd) {
                    SyntheticTarget t;
                    t.kind = TargetKind::Linear;
                    t.w = std::move(w);
                    t.b = b;
                    t.noise_sd = noise_sd;
                    return t;
                  },
                  py::arg("w"), py::arg("b") = 0.0, py::arg("noise_sd") = 0.0)
      .def_static("sinusoid",
                  [](double freq, double amp, double noise_sd) {
                    SyntheticTarget t;
                    t.kind = TargetKind::Sinusoid;
                    t.freq = freq;
                    t.amp = amp;
                    t.noise_sd = noise_sd;
                    return t;
                  },
                  py::arg("freq") = 1.0, py::arg("amp") = 1.0,
                  py::arg("noise_sd") = 0.0)
      .def_static("custom",
                  [](std::function<double(const Point&)> fn, double noise_sd) {
                    SyntheticTarget t;
                    t.kind = TargetKind::Custom;
                    t.custom = std::move(fn);
                    t.noise_sd = noise_sd;
                    return t;
                  },
                  py::arg("fn"), py::arg("noise_sd") = 0.0)
      .def("eval", &SyntheticTarget::eval);

  m.def("make_centralized", &make_centralized);
  m.def("make_public_private", &make_public_private);
  m.def("make_geometric", &make_geometric);
  m.def("generate_data", &generate_data, py::arg("target"), py::arg("n"),
        py::arg("d"), py::arg("seed"));
  m.def("init_board", &init_board);

  py::class_<LocalUpdateResult>(m, "LocalUpdateResult")
      .def_readonly("new_f", &LocalUpdateResult::new_f)
      .def_readonly("new_z_values", &LocalUpdateResult::new_z_values);
  m.def("local_update",
        py::overload_cast<const KernelExpansion&, const std::vector<std::size_t>&,
                          const MessageBoard&, const TrainingSet&, const Kernel&,
                          double>(&local_update));
  m.def("apply_update", &apply_update);

  py::enum_<Schedule>(m, "Schedule")
      .value("SERIAL", Schedule::Serial)
      .value("RANDOM_PERMUTATION", Schedule::RandomPermutation)
      .value("COLORED_PARALLEL", Schedule::ColoredParallel);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("lambdas", &TrainConfig::lambdas)
      .def_readwrite("max_cycles", &TrainConfig::max_cycles)
      .def_readwrite("stop_tol", &TrainConfig::stop_tol)
      .def_readwrite("schedule", &TrainConfig::schedule)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<ProductPoint>(m, "ProductPoint")
      .def(py::init<>())
      .def_readwrite("z", &ProductPoint::z)
      .def_readwrite("fs", &ProductPoint::fs);
  m.def("product_distance_sq", &product_distance_sq);

  py::class_<ProjectionRecord>(m, "ProjectionRecord")
      .def_readonly("agent", &ProjectionRecord::agent)
      .def_readonly("resid_sq", &ProjectionRecord::resid_sq)
      .def_readonly("dist_to_ref_sq", &ProjectionRecord::dist_to_ref_sq);
  py::class_<CycleRecord>(m, "CycleRecord")
      .def_readonly("cycle", &CycleRecord::cycle)
      .def_readonly("step_sq", &CycleRecord::step_sq)
      .def_readonly("dist_to_ref_sq", &CycleRecord::dist_to_ref_sq)
      .def_readonly("projections", &CycleRecord::projections);
  py::class_<TrainState>(m, "TrainState")
      .def_readonly("functions", &TrainState::functions)
      .def_readonly("board", &TrainState::board)
      .def_readonly("cycle", &TrainState::cycle)
      .def_readonly("history", &TrainState::history);

  m.def("train",
        [](const TrainingSet& training, const Ensemble& ensemble,
           const Kernel& kernel, const TrainConfig& config,
           const ProductPoint* reference) {
          return train(training, ensemble, kernel, config, reference);
        },
        py::arg("training"), py::arg("ensemble"), py::arg("kernel"),
        py::arg("config"), py::arg("reference") = nullptr);
  m.def("conflict_coloring", &conflict_coloring);

  m.def("solve_centralized", &solve_centralized);
  py::class_<RelaxedSolution>(m, "RelaxedSolution")
      .def_readonly("z_star", &RelaxedSolution::z_star)
      .def_readonly("f_stars", &RelaxedSolution::f_stars)
      .def_readonly("kkt_residual", &RelaxedSolution::kkt_residual)
      .def("as_product_point", &RelaxedSolution::as_product_point);
  m.def("solve_relaxed", &solve_relaxed, py::arg("training"),
        py::arg("ensemble"), py::arg("kernel"), py::arg("lambdas"),
        py::arg("shuffle_seed") = 0);
  m.def("relaxed_objective", &relaxed_objective);

  py::class_<VerifyReport>(m, "VerifyReport")
      .def_readonly("max_function_gap", &VerifyReport::max_function_gap)
      .def_readonly("board_gap_inf", &VerifyReport::board_gap_inf);
  m.def("verify_against_trainer", &verify_against_trainer);

  py::class_<EdgeWitness>(m, "EdgeWitness")
      .def_readonly("agent_a", &EdgeWitness::agent_a)
      .def_readonly("agent_b", &EdgeWitness::agent_b)
      .def_readonly("rank_a", &EdgeWitness::rank_a)
      .def_readonly("rank_b", &EdgeWitness::rank_b)
      .def_readonly("rank_common", &EdgeWitness::rank_common)
      .def_readonly("rank_union", &EdgeWitness::rank_union)
      .def_readonly("edge", &EdgeWitness::edge);
  py::class_<AuxiliaryGraph>(m, "AuxiliaryGraph")
      .def_readonly("agent_count", &AuxiliaryGraph::agent_count)
      .def_readonly("witnesses", &AuxiliaryGraph::witnesses)
      .def("edges", &AuxiliaryGraph::edges)
      .def("component_count", &AuxiliaryGraph::component_count);
  m.def("spans_equal", &spans_equal);
  m.def("is_connected", &is_connected);
  m.def("format_edge_list", &format_edge_list);
}
