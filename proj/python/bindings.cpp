#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quiverloop/bootstrap.hpp"
#include "quiverloop/error.hpp"
#include "quiverloop/gww.hpp"
#include "quiverloop/haar_mc.hpp"
#include "quiverloop/job.hpp"

namespace py = pybind11;
using namespace quiverloop;

namespace {

McOptions mc_options(std::size_t samples, std::uint64_t seed, const std::string& method,
                     unsigned threads) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  o.threads = threads;
  if (method == "reweight") o.method = McMethod::kReweight;
  else if (method == "metropolis") o.method = McMethod::kMetropolis;
  else throw py::value_error("method must be 'reweight' or 'metropolis'");
  return o;
}

}  // namespace

PYBIND11_MODULE(_quiverloop, m) {
  m.doc() = "Spectral-action matrix models on quivers";

  py::register_exception<Error>(m, "QuiverLoopError", PyExc_ValueError);

  py::class_<Job>(m, "Job")
      .def_property_readonly("dimension", [](const Job& j) { return j.network.dimension(); })
      .def_property_readonly("vertices", [](const Job& j) {
        std::vector<std::string> v;
        for (VertexIndex i = 0; i < j.quiver.vertex_count(); ++i) v.push_back(j.quiver.vertex_id(i));
        return v;
      })
      .def_property_readonly("edges", [](const Job& j) {
        std::vector<std::string> e;
        for (const auto& edge : j.quiver.edges()) e.push_back(edge.id);
        return e;
      })
      .def_property_readonly("loops", [](const Job& j) {
        std::vector<std::string> out;
        for (const auto& w : j.loops) out.push_back(j.quiver.format(w));
        return out;
      })
      .def("ensemble_json", [](const Job& j) {
        return to_json(dirac_ensemble(j.network), j.quiver).dump();
      })
      .def("override_dimension", [](Job& j, std::int64_t dim) { override_dimension(j, dim); });

  m.def("parse_job", [](const std::string& text) { return parse_job(text, "<string>"); }, py::arg("text"));
  m.def("load_job", &load_job, py::arg("path"));
  m.def("triangle_job", [](std::int64_t dim, const std::string& x) {
    return parse_job(builtin_triangle_json(dim, parse_rational(x)), "builtin:triangle");
  }, py::arg("dim") = 3, py::arg("x") = "1/5");

  m.def("expand_action_json", [](const Job& j) {
    return to_json(j.quiver, expand_action(j.quiver, j.action)).dump();
  });
  m.def("loop_equation_json", [](const Job& j, const std::string& loop, const std::string& root,
                                 bool large_n) {
    const auto table = expand_action(j.quiver, j.action);
    const auto eq = generate_loop_equation(j.quiver, table, j.quiver.parse_word(loop),
                                           j.quiver.edge_index(root),
                                           large_n ? LoopMode::kLargeN : LoopMode::kFiniteN);
    auto out = to_json(j.quiver, eq);
    if (large_n) out["factorized"] = to_json(j.quiver, factorize_large_N(eq));
    out["text"] = render(j.quiver, eq);
    return out.dump();
  }, py::arg("job"), py::arg("loop"), py::arg("root"), py::arg("large_n") = false);

  m.def("moment_string", [](std::size_t n) { return to_string(moment(n)); }, py::arg("n"));
  m.def("moment_table_json", [](std::size_t count) { return moment_table_json(count).dump(); });
  m.def("moment_matrix", &moment_matrix, py::arg("order"), py::arg("x"), py::arg("y"));
  m.def("feasible", [](double x, double y, std::size_t max_order, double tol) {
    const auto r = feasible(x, y, max_order, tol);
    return py::make_tuple(r.feasible, r.max_feasible_order, r.minors);
  }, py::arg("x"), py::arg("y"), py::arg("max_order"), py::arg("tol") = 1e-10);
  m.def("scan_region", [](double xmin, double xmax, std::size_t nx, double ymin, double ymax,
                          std::size_t ny, std::size_t max_order, double tol, unsigned threads) {
    GridSpec g{xmin, xmax, nx, ymin, ymax, ny};
    FeasibilityMap map;
    {
      py::gil_scoped_release release;
      map = scan_region(g, max_order, tol, threads);
    }
    // Rows are y, columns x; -1 marks the undefined column x = 0.
    Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out(ny, nx);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const auto& c = map.at(i, j);
        out(j, i) = c.undefined ? -1 : static_cast<long>(c.max_feasible_order);
      }
    }
    return out;
  }, py::arg("xmin") = -3.0, py::arg("xmax") = 3.0, py::arg("nx") = 300, py::arg("ymin") = -1.2,
     py::arg("ymax") = 1.2, py::arg("ny") = 300, py::arg("max_order") = 7, py::arg("tol") = 1e-10,
     py::arg("threads") = 1);

  m.def("bessel_i", &bessel_i, py::arg("q"), py::arg("z"));
  m.def("partition_function", &partition_function, py::arg("n"), py::arg("x"));
  m.def("first_moment", [](int n, double x) { return first_moment(n, x); }, py::arg("n"), py::arg("x"));

  m.def("sample_haar", [](Eigen::Index n, std::uint64_t seed) {
    CounterRng rng{seed};
    return sample_haar(n, rng);
  }, py::arg("n"), py::arg("seed") = 1);
  m.def("dirac_sample", [](const Job& j, std::uint64_t seed, std::uint64_t index) {
    return assemble_dirac(j.network, sample_dirac(j.network, seed, index));
  }, py::arg("job"), py::arg("seed") = 1, py::arg("index") = 0);
  m.def("estimate_wilson_json", [](const Job& j, const std::string& loop, std::size_t samples,
                                   std::uint64_t seed, const std::string& method, unsigned threads) {
    const auto table = expand_action(j.quiver, j.action);
    const auto opt = mc_options(samples, seed, method, threads);
    const auto beta = j.quiver.parse_word(loop);
    EstimatorResult r;
    {
      py::gil_scoped_release release;
      r = estimate_wilson(j.network, table, beta, opt);
    }
    return to_json(r).dump();
  }, py::arg("job"), py::arg("loop"), py::arg("samples") = 100000, py::arg("seed") = 1,
     py::arg("method") = "reweight", py::arg("threads") = 1);
  m.def("check_loop_equation_json", [](const Job& j, const std::string& loop, const std::string& root,
                                       std::size_t samples, std::uint64_t seed) {
    const auto table = expand_action(j.quiver, j.action);
    const auto eq = generate_loop_equation(j.quiver, table, j.quiver.parse_word(loop),
                                           j.quiver.edge_index(root));
    ResidualResult r;
    {
      py::gil_scoped_release release;
      r = check_loop_equation(j.network, table, eq, mc_options(samples, seed, "reweight", 1));
    }
    nlohmann::json out = {{"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"residual", to_json(r.residual)}};
    return out.dump();
  }, py::arg("job"), py::arg("loop"), py::arg("root"), py::arg("samples") = 100000, py::arg("seed") = 1);
}
