#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "blt/blt_all.hpp"

namespace py = pybind11;
using namespace blt;

namespace {

std::string repr_vector(const std::vector<double>& v) {
  std::ostringstream s;
  s.precision(17);
  s << "[";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << "]";
  return s.str();
}

Objective objective_from(const std::string& name, double temperature) {
  if (name == "max") return Objective::max();
  if (name == "frobenius") return Objective::frobenius();
  if (name == "softmax") return Objective::soft_max(temperature);
  throw py::value_error("objective must be 'max', 'frobenius' or 'softmax'");
}

py::dict loss_dict(const LossReport& r) {
  py::dict d;
  d["sensitivity"] = r.sensitivity;
  d["max_row_norm"] = r.max_row_norm;
  d["loss"] = r.loss;
  d["frobenius_loss"] = r.frobenius_loss;
  d["worst_row"] = r.worst_row;
  d["per_row_norms"] = r.per_row_norms;
  return d;
}

WorkloadSpec workload_from(std::size_t n, const std::optional<Eigen::MatrixXd>& a) {
  return a ? WorkloadSpec::explicit_lower(*a) : WorkloadSpec::prefix_sum(n);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Buffered linear Toeplitz (BLT) factorizations and their inverses.";

  static py::exception<Error> error(m, "BltError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::enum_<Regime>(m, "Regime")
      .value("LT1", Regime::kLT1)
      .value("EQ1", Regime::kEQ1)
      .value("GT1", Regime::kGT1);

  py::class_<BltParams>(m, "BltParams")
      .def(py::init([](std::vector<double> alpha, std::vector<double> lambda) {
             return BltParams{std::move(alpha), std::move(lambda)};
           }),
           py::arg("alpha"), py::arg("lam"))
      .def_readwrite("alpha", &BltParams::alpha)
      .def_readwrite("lam", &BltParams::lambda)
      .def_property_readonly("degree", &BltParams::degree)
      .def("__repr__", [](const BltParams& p) {
        return "BltParams(alpha=" + repr_vector(p.alpha) + ", lam=" + repr_vector(p.lambda) + ")";
      });

  py::class_<InverseBltParams>(m, "InverseBltParams")
      .def(py::init([](std::vector<double> alpha_hat, std::vector<double> lambda_hat, Regime regime) {
             return InverseBltParams{std::move(alpha_hat), std::move(lambda_hat), regime};
           }),
           py::arg("alpha_hat"), py::arg("lambda_hat"), py::arg("regime"))
      .def_readwrite("alpha_hat", &InverseBltParams::alpha_hat)
      .def_readwrite("lambda_hat", &InverseBltParams::lambda_hat)
      .def_readwrite("regime", &InverseBltParams::regime)
      .def_property_readonly("degree", &InverseBltParams::degree)
      .def("as_blt", &InverseBltParams::as_blt)
      .def("__repr__", [](const InverseBltParams& p) {
        return "InverseBltParams(alpha_hat=" + repr_vector(p.alpha_hat) +
               ", lambda_hat=" + repr_vector(p.lambda_hat) + ", regime=" +
               std::string(to_string(p.regime)) + ")";
      });

  m.def(
      "validate",
      [](const BltParams& p, bool strict) {
        const ValidationReport r = validate(p, strict ? ValidationMode::kStrict : ValidationMode::kLenient);
        py::dict d;
        d["valid"] = r.valid;
        py::list violations;
        for (const auto& v : r.violations) violations.append(py::make_tuple(v.constraint, v.detail));
        d["violations"] = violations;
        d["regime"] = r.regime ? py::cast(*r.regime) : py::none();
        d["ratio_sum"] = r.ratio_sum;
        return d;
      },
      py::arg("params"), py::arg("strict") = true);
  m.def("regime_of", &regime_of);
  m.def("ratio_sum", &ratio_sum);
  m.def("canonical", &canonical);
  m.def("invert_params", &invert_params, "Inverse BLT parameters; raises BltError on invalid input.");
  m.def("toeplitz_coeffs", &toeplitz_coeffs, py::arg("params"), py::arg("n"));
  m.def("materialize", &materialize, py::arg("params"), py::arg("n"),
        py::arg("max_n") = tol::kDefaultMaxDenseN);
  m.def("scales_from_decays", [](const std::vector<double>& lambda, const std::vector<double>& lambda_hat) {
    ScalePair s = scales_from_decays(lambda, lambda_hat);
    return py::make_tuple(s.alpha, s.alpha_hat);
  });
  m.def("scale_identity_residual",
        [](const std::vector<double>& lambda, const std::vector<double>& lambda_hat,
           const std::vector<double>& alpha_hat) {
          return scale_identity_residual(lambda, lambda_hat, alpha_hat);
        });
  m.def("from_interlaced", [](const std::vector<double>& lambda, const std::vector<double>& lambda_hat) {
    return from_interlaced(lambda, lambda_hat);
  });

  m.def("polynomials", [](const BltParams& p) {
    const Polynomial pp = build_p(p.alpha, p.lambda);
    const Polynomial q = build_q(p.lambda);
    const Polynomial r = build_r(pp, q);
    auto vec = [](const Polynomial& x) { return std::vector<double>(x.coeffs().begin(), x.coeffs().end()); };
    py::dict d;
    d["p"] = vec(pp);
    d["q"] = vec(q);
    d["r"] = vec(r);
    return d;
  }, "Ascending coefficients of p, q and r = q + x p.");
  m.def("roots_companion", [](const std::vector<double>& coeffs) {
    const RootSet s = roots_companion(Polynomial(coeffs));
    return py::make_tuple(s.roots, s.residual);
  }, "Real roots (ascending) and max residual of a polynomial given by ascending coefficients.");
  m.def("maclaurin", [](const BltParams& p, std::size_t n, bool inverse) {
    const RationalGF f = genfun_of(p);
    return maclaurin(inverse ? reciprocal(f) : f, n);
  }, py::arg("params"), py::arg("n"), py::arg("inverse") = false);

  m.def("sensitivity", &sensitivity, py::arg("params"), py::arg("n"));
  m.def(
      "max_loss",
      [](const BltParams& p, std::size_t n, std::optional<Eigen::MatrixXd> workload) {
        return loss_dict(max_loss(p, workload_from(n, workload)));
      },
      py::arg("params"), py::arg("n") = 0, py::arg("workload") = py::none(),
      "Loss for prefix sums of length n, or for an explicit lower-triangular workload.");
  m.def(
      "objective_value",
      [](const BltParams& p, std::size_t n, const std::string& objective, double temperature) {
        return objective_value(p, WorkloadSpec::prefix_sum(n), objective_from(objective, temperature));
      },
      py::arg("params"), py::arg("n"), py::arg("objective") = "max", py::arg("temperature") = 0.05);

  m.def(
      "jacobian",
      [](const BltParams& p, const std::string& method) {
        if (method == "implicit") return jacobian_implicit(p).matrix;
        if (method == "fd") return jacobian_fd(p).matrix;
        throw py::value_error("method must be 'implicit' or 'fd'");
      },
      py::arg("params"), py::arg("method") = "implicit");
  m.def(
      "loss_gradient",
      [](const BltParams& p, std::size_t n, const std::string& objective, double temperature) {
        const LossGradient g = loss_gradient(p, WorkloadSpec::prefix_sum(n), objective_from(objective, temperature));
        return py::make_tuple(g.value, g.gradient);
      },
      py::arg("params"), py::arg("n"), py::arg("objective") = "max", py::arg("temperature") = 0.05);

  m.def(
      "noise_rows",
      [](const InverseBltParams& inv, std::size_t steps, std::size_t m_width, double sigma,
         double sens, std::uint64_t seed) {
        NoiseConfig cfg;
        cfg.sigma = sigma;
        cfg.sensitivity = sens;
        cfg.seed = seed;
        cfg.m = m_width;
        cfg.validate();
        const auto rows = noise_rows(inv, cfg, steps);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(steps), static_cast<Eigen::Index>(m_width));
        for (std::size_t t = 0; t < steps; ++t) {
          for (std::size_t j = 0; j < m_width; ++j) out(t, j) = rows[t][j];
        }
        return out;
      },
      py::arg("inverse"), py::arg("steps"), py::arg("m") = 1, py::arg("sigma") = 1.0,
      py::arg("sensitivity") = 1.0, py::arg("seed") = 0,
      "Rows of C^-1 Z for Gaussian Z, streamed in O(d m) per row.");

  m.def(
      "optimize",
      [](std::size_t d, std::size_t n, std::size_t steps, std::uint64_t seed,
         const std::string& objective, double temperature, double learning_rate) {
        OptConfig cfg;
        cfg.d = d;
        cfg.n = n;
        cfg.steps = steps;
        cfg.seed = seed;
        cfg.objective = objective_from(objective, temperature);
        cfg.learning_rate = learning_rate;
        cfg.trace_every = steps > 0 ? steps : 1;
        OptResult r;
        {
          py::gil_scoped_release release;
          r = optimize(cfg);
        }
        py::dict out;
        out["params"] = r.params;
        out["inverse"] = r.inverse;
        out["loss"] = r.loss;
        out["gradient_norm"] = r.gradient_norm;
        out["iterations"] = r.iterations;
        return out;
      },
      py::arg("d"), py::arg("n"), py::arg("steps") = 2000, py::arg("seed") = 0,
      py::arg("objective") = "max", py::arg("temperature") = 0.05, py::arg("learning_rate") = 1e-2);
}
