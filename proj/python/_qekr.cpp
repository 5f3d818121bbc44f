#include "qekr/certificate.hpp"
#include "qekr/families.hpp"
#include "qekr/measure.hpp"
#include "qekr/report.hpp"
#include "qekr/version.hpp"

#include <pybind11/pybind11.h>

#include <string>

namespace py = pybind11;
using namespace qekr;

namespace {

// Reports cross the boundary as JSON text; the Python package decodes them.
std::string dump(const Json& j) { return j.dump(); }

Rational rat(const std::string& text) { return parse_rational(text); }

std::string search(int n, int q, const std::string& sigma, int t, unsigned threads, std::size_t max_vertices,
                   std::size_t max_optima) {
  SearchConfig cfg;
  cfg.threads = threads;
  cfg.max_vertices = max_vertices;
  cfg.max_optima_reported = max_optima;
  SearchResult r;
  {
    py::gil_scoped_release release;
    r = max_measure_t_intersecting(make_context(q, n, rat(sigma)), t, cfg);
  }
  return dump(search_json(r));
}

std::string full_certificate(int n, int q, const std::string& sigma, std::size_t max_points) {
  const Rational s = rat(sigma);
  const FullCertificate c = build_full_certificate(n, q, s, max_points);
  Json j = full_certificate_json(c);
  j["point_star_duality"] = duality_json(weak_duality_check(c, star_family(n, q, 1)));
  j["hoffman"] = hoffman_json(hoffman_pipeline(c));
  if (s < psd_threshold(n, q)) j["kernel"] = kernel_json(kernel_analysis(c, {star_family(n, q, 1)}));
  return dump(j);
}

std::string tail(const std::string& kind, const std::string& theta, int n, int q, int t, unsigned bits) {
  const Scalar th(rat(theta));
  if (kind == "above-half") return dump(tail_json(tail_above_half(th, n, q, t, bits)));
  if (kind == "below-middle") return dump(tail_json(tail_below_middle(th, n, q, t, default_lower_tail_delta(th, bits), bits)));
  if (kind == "above-shifted") return dump(tail_json(tail_above_shifted(th, n, q, t, bits)));
  throw Error(ErrorKind::Domain, "kind must be above-half, below-middle or above-shifted");
}

}  // namespace

PYBIND11_MODULE(_qekr, m) {
  m.doc() = "Exact sigma-biased measures on subspace lattices and the EKR certificate";
  m.attr("__version__") = std::string(kVersion);

  static py::exception<Error> base(m, "QekrError", PyExc_RuntimeError);
  static py::exception<Error> domain(m, "DomainError", base.ptr());
  static py::exception<Error> cap(m, "CapExceeded", base.ptr());
  static py::exception<Error> invariant(m, "InvariantError", base.ptr());
  static py::exception<Error> budget(m, "BudgetExceeded", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::Domain:
          PyErr_SetString(domain.ptr(), e.what());
          break;
        case ErrorKind::CapExceeded:
          PyErr_SetString(cap.ptr(), e.what());
          break;
        case ErrorKind::Invariant:
          PyErr_SetString(invariant.ptr(), e.what());
          break;
        case ErrorKind::Budget:
          PyErr_SetString(budget.ptr(), e.what());
          break;
      }
    }
  });

  m.def("gaussian_binomial", [](long n, long k, int q) { return to_string(gaussian_binomial(n, k, q)); },
        py::arg("n"), py::arg("k"), py::arg("q"));
  m.def("psd_threshold", [](int n, int q) { return to_string(psd_threshold(n, q)); }, py::arg("n"), py::arg("q"));
  m.def("count_all", &count_all, py::arg("n"), py::arg("q"));

  m.def("context", [](int q, int n, const std::string& sigma) { return dump(context_json(make_context(q, n, rat(sigma)))); },
        py::arg("q"), py::arg("n"), py::arg("sigma"));
  m.def("measure_star",
        [](int q, int n, const std::string& sigma, int t) {
          return to_string(measure_star_closed(make_context(q, n, rat(sigma)), t));
        },
        py::arg("q"), py::arg("n"), py::arg("sigma"), py::arg("t"));
  m.def("measure_top",
        [](int q, int n, const std::string& sigma, int t) {
          const ExactContext ctx = make_context(q, n, rat(sigma));
          return to_string(measure_family(ctx, top_family(n, q, t)));
        },
        py::arg("q"), py::arg("n"), py::arg("sigma"), py::arg("t"));
  m.def("moments", [](const std::string& theta, int n, int q) { return dump(moments_json(moments(Scalar(rat(theta)), n, q))); },
        py::arg("theta"), py::arg("n"), py::arg("q"));
  m.def("tail", &tail, py::arg("kind"), py::arg("theta"), py::arg("n"), py::arg("q"), py::arg("t"),
        py::arg("bits") = kTailPrecisionBits);
  m.def("g_lower_bound",
        [](const std::string& theta1, const std::string& theta2, int n, int q, int t, unsigned bits) {
          return dump(real_json(g_lower_bound(Scalar(rat(theta1)), Scalar(rat(theta2)), n, q, t, bits)));
        },
        py::arg("theta1"), py::arg("theta2"), py::arg("n"), py::arg("q"), py::arg("t"),
        py::arg("bits") = kDefaultPrecisionBits);

  m.def("search", &search, py::arg("n"), py::arg("q"), py::arg("sigma"), py::arg("t") = 1, py::arg("threads") = 1,
        py::arg("max_vertices") = 400, py::arg("max_optima") = 64);
  m.def("certify", [](int n, int q, const std::string& sigma) { return dump(certificate_json(certify(n, rat(sigma), q))); },
        py::arg("n"), py::arg("q"), py::arg("sigma"));
  m.def("full_certificate", &full_certificate, py::arg("n"), py::arg("q"), py::arg("sigma"),
        py::arg("max_points") = kDefaultFullCertificatePoints);

  m.def("subspace_pair", [](int ell, int q) { return dump(subspace_pair_json(subspace_pair_counterexample(ell, q))); },
        py::arg("ell") = 3, py::arg("q") = 2);
  m.def("subset_check", [](int k, int ell, int n) { return dump(subset_check_json(subset_counterexample_check(k, ell, n))); },
        py::arg("k") = 2, py::arg("ell") = 18, py::arg("n") = 34);
}
