#include "qekr/report.hpp"

namespace qekr {

Json rational_json(const Rational& r) { return to_string(r); }

Json bigint_json(const BigInt& v) { return v.str(); }

Json real_json(const Real& r) {
  return Json{{"value", r.str()}, {"precision", r.precision_bits()}};
}

Json scalar_json(const Scalar& s) {
  if (const auto* r = std::get_if<Rational>(&s)) {
    return Json{{"mode", "exact"}, {"value", to_string(*r)}};
  }
  const Real& x = std::get<Real>(s);
  return Json{{"mode", mode_tag(s)}, {"value", x.str()}, {"precision", x.precision_bits()}};
}

Json subspace_json(const Subspace& s) {
  Json rows = Json::array();
  for (int r = 0; r < s.dim(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < s.ambient(); ++c) row.push_back(static_cast<int>(s.entry(r, c)));
    rows.push_back(std::move(row));
  }
  return Json{{"n", s.ambient()}, {"q", s.field_order()}, {"rows", std::move(rows)}};
}

Json family_json(const Family& f, bool full) {
  Json members = Json::array();
  for (const auto& s : f) members.push_back(full ? subspace_json(s) : Json(s.hex()));
  return Json{{"n", f.ambient()}, {"q", f.field_order()}, {"size", f.size()}, {"members", std::move(members)}};
}

template <class T>
Json context_json(const MeasureContext<T>& ctx) {
  auto value = [](const T& v) {
    if constexpr (std::is_same_v<T, Rational>) {
      return rational_json(v);
    } else {
      return real_json(v);
    }
  };
  Json phi = Json::array();
  Json mass = Json::array();
  for (const auto& v : ctx.phi) phi.push_back(value(v));
  for (const auto& v : ctx.layer_mass) mass.push_back(value(v));
  Json out{{"q", ctx.q}, {"n", ctx.n}, {"sigma", scalar_json(Scalar(ctx.sigma))}};
  out["mode"] = mode_tag(Scalar(ctx.sigma));
  out["phi"] = std::move(phi);
  out["layer_mass"] = std::move(mass);
  return out;
}

template Json context_json<Rational>(const ExactContext&);
template Json context_json<Real>(const RealContext&);

Json moments_json(const MomentReport& r) {
  return Json{
      {"n", r.n},
      {"q", r.q},
      {"theta", scalar_json(r.theta)},
      {"sigma", scalar_json(r.sigma)},
      {"mode", mode_tag(r.mean_x)},
      {"closed_form",
       {{"mean_x", scalar_json(r.mean_x)},
        {"mean_x2", scalar_json(r.mean_x2)},
        {"mean_xinv", scalar_json(r.mean_xinv)},
        {"mean_xinv2", scalar_json(r.mean_xinv2)}}},
      {"direct_sum",
       {{"mean_x", scalar_json(r.direct_mean_x)},
        {"mean_x2", scalar_json(r.direct_mean_x2)},
        {"mean_xinv", scalar_json(r.direct_mean_xinv)},
        {"mean_xinv2", scalar_json(r.direct_mean_xinv2)}}},
      {"var_x", scalar_json(r.var_x)},
      {"var_xinv", scalar_json(r.var_xinv)},
      {"limits",
       {{"mean_x", r.limit_mean_x},
        {"mean_x2", r.limit_mean_x2},
        {"var_x", r.limit_var_x},
        {"mean_xinv", r.limit_mean_xinv},
        {"mean_xinv2", r.limit_mean_xinv2},
        {"var_xinv", r.limit_var_xinv}}},
      {"closed_matches_direct", r.closed_matches_direct},
  };
}

Json tail_json(const TailReport& r) {
  return Json{{"n", r.n},
              {"range", r.description},
              {"cutoff", rational_json(r.cutoff)},
              {"side", r.above ? "above" : "below"},
              {"mode", "real@" + std::to_string(r.tail.precision_bits())},
              {"tail", real_json(r.tail)},
              {"normalizer_form", r.normalizer_description},
              {"normalizer", real_json(r.normalizer)},
              {"normalized", real_json(r.normalized)}};
}

Json monotone_json(const MonotoneProfile& p) {
  Json out{{"regime", p.regime}, {"first_k", p.first_k}, {"last_k", p.last_k}, {"holds", p.holds}};
  out["first_violation"] = p.first_violation ? Json(*p.first_violation) : Json(nullptr);
  return out;
}

Json search_json(const SearchResult& r) {
  Json optima = Json::array();
  for (const auto& f : r.optima) {
    Json fj = family_json(f);
    const auto center = point_star_center(f, r.t);
    fj["point_star_center"] = center ? Json(center->hex()) : Json(nullptr);
    optima.push_back(std::move(fj));
  }
  return Json{{"n", r.n},
              {"q", r.q},
              {"t", r.t},
              {"sigma", rational_json(r.sigma)},
              {"mode", "exact"},
              {"optimum", rational_json(r.optimum)},
              {"optima_count", r.optima_count},
              {"optima_truncated", r.optima_truncated},
              {"optima", std::move(optima)},
              {"vertices", r.vertices},
              {"explored_nodes", r.explored_nodes},
              {"complete", r.complete}};
}

Json subspace_pair_json(const SubspacePairReport& r) {
  return Json{{"k", 1},
              {"l", r.ell},
              {"q", r.q},
              {"n", r.n},
              {"mode", "exact"},
              {"size_u", bigint_json(r.size_u)},
              {"size_w", bigint_json(r.size_w)},
              {"product", bigint_json(r.product)},
              {"formula_product", bigint_json(r.formula_product)},
              {"ekr_product", bigint_json(r.ekr_product)},
              {"cross_intersecting", r.cross_intersecting},
              {"exceeds", r.exceeds},
              {"u", family_json(r.u)},
              {"w", family_json(r.w)}};
}

Json subset_check_json(const SubsetCheckReport& r) {
  return Json{{"k", r.k},
              {"l", r.ell},
              {"n", r.n},
              {"mode", "exact"},
              {"lhs", bigint_json(r.lhs)},
              {"rhs", bigint_json(r.rhs)},
              {"strict_inequality", r.strict_inequality},
              {"size_u", bigint_json(r.size_u)},
              {"size_w", bigint_json(r.size_w)},
              {"product", bigint_json(r.product)},
              {"ekr_product", bigint_json(r.ekr_product)},
              {"product_exceeds", r.product_exceeds}};
}

Json oracle_json(const UniformBoundReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"applicable", c.applicable},
                          {"reason", c.reason},
                          {"lhs", bigint_json(c.lhs)},
                          {"bound", bigint_json(c.bound)},
                          {"tight", c.tight}});
  }
  return Json{{"mode", "exact"}, {"checks", std::move(checks)}};
}

Json matrix_json(const RatMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    out.push_back(std::move(r));
  }
  return out;
}

Json block_spectrum_json(const BlockSpectrum& s) {
  Json blocks = Json::array();
  for (const auto& block : s.blocks) {
    Json b = Json::array();
    for (const auto& e : block) {
      b.push_back(Json{{"i", e.i}, {"k", e.k}, {"eigenvalue", rational_json(e.value)},
                       {"multiplicity", bigint_json(e.multiplicity)}});
    }
    blocks.push_back(std::move(b));
  }
  return Json{{"n", s.n},
              {"q", s.q},
              {"sigma", rational_json(s.sigma)},
              {"mode", "exact"},
              {"blocks", std::move(blocks)},
              {"shift_identity", s.shift_identity},
              {"block_eigenvalues_verified", s.block_eigenvalues},
              {"min_eigenvalue", rational_json(s.min_eigenvalue)}};
}

Json certificate_json(const CertificateBundle& b) {
  Json zeros = Json::array();
  for (const auto& block : b.spectrum.blocks) {
    for (const auto& e : block) {
      if (e.value == 0 && (e.i != 0 || e.k != 0)) zeros.push_back(Json{{"i", e.i}, {"k", e.k}});
    }
  }
  return Json{{"n", b.pack.n},
              {"q", b.pack.q},
              {"sigma", rational_json(b.pack.sigma)},
              {"mode", "exact"},
              {"threshold", rational_json(b.threshold)},
              {"condition", b.condition},
              {"min_eigenvalue_nonnegative", b.min_eigenvalue_nonnegative},
              {"f_formula_matches_similarity", b.f_formula_matches},
              {"f_checks",
               {{"anti_triangular", b.f_checks.anti_triangular},
                {"weighted_symmetry", b.f_checks.weighted_symmetry},
                {"ones_eigenvector", b.f_checks.ones_eigenvector},
                {"eigenvalues", b.f_checks.eigenvalues}}},
              {"c", matrix_json(b.pack.c)},
              {"c_inv", matrix_json(b.pack.c_inv)},
              {"g", matrix_json(b.pack.g)},
              {"f", matrix_json(b.f)},
              {"block_spectrum", block_spectrum_json(b.spectrum)},
              {"zero_eigenvalues", std::move(zeros)},
              {"trivial_direction", {{"i", 0}, {"k", 0}, {"eigenvalue", rational_json(b.spectrum.blocks[0][0].value)}}}};
}

Json full_certificate_json(const FullCertificate& c) {
  Json spectrum = Json::array();
  for (Eigen::Index j = 0; j < c.spectrum.size(); ++j) spectrum.push_back(c.spectrum(j));
  Json d = Json::array();
  for (long v : c.d) d.push_back(v);
  return Json{{"n", c.n},
              {"q", c.q},
              {"sigma", rational_json(c.sigma)},
              {"mode", "float64"},
              {"points", c.points.size()},
              {"d", std::move(d)},
              {"nullspace_residual", c.nullspace_residual},
              {"orthonormality_residual", c.orthonormality_residual},
              {"theta_residual", c.theta_residual},
              {"theta_symmetry_residual", c.theta_symmetry_residual},
              {"symmetry_residual", c.symmetry_residual},
              {"support_violation", c.support_violation},
              {"min_eigenvalue", c.min_eigenvalue},
              {"max_eigenvalue", c.spectrum.size() ? c.spectrum(c.spectrum.size() - 1) : 0.0},
              {"spectral_radius", c.spectral_radius},
              {"psd", c.psd},
              {"spectrum_deviation", c.spectrum_deviation},
              {"kernel_dimension", c.kernel.cols()},
              {"spectrum", std::move(spectrum)}};
}

Json kernel_json(const KernelReport& r) {
  Json fam = Json::array();
  for (double v : r.family_residuals) fam.push_back(v);
  return Json{{"mode", "float64"},
              {"kernel_dimension", r.kernel_dimension},
              {"expected_dimension", r.expected_dimension},
              {"construction_residual", r.construction_residual},
              {"construction_rank", r.construction_rank},
              {"spans_kernel", r.spans_kernel},
              {"v0_coordinate_deviation", r.v0_coordinate_deviation},
              {"family_residuals", std::move(fam)}};
}

Json duality_json(const DualityGap& g) {
  return Json{{"mode", "float64"},
              {"measure", g.measure},
              {"gap", g.gap},
              {"closed_gap", g.closed_gap},
              {"trace_ax", g.trace_ax}};
}

Json hoffman_json(const HoffmanReport& r) {
  return Json{{"mode", "exact"},
              {"lambda1", rational_json(r.lambda1)},
              {"lambda_min", rational_json(r.lambda_min)},
              {"bound", rational_json(r.bound)},
              {"numeric",
               {{"mode", "float64"},
                {"lambda1", r.lambda1_numeric},
                {"lambda_min", r.lambda_min_numeric},
                {"bound", r.bound_numeric},
                {"eigenvector_residual", r.eigenvector_residual},
                {"support_violation", r.support_violation}}},
              {"reflects_adjacency", r.reflects_adjacency},
              {"bound_is_sigma_ratio", r.bound_is_sigma_ratio}};
}

}  // namespace qekr
