#include "qekr/certificate.hpp"
#include "qekr/report.hpp"

#include <doctest.h>

using namespace qekr;

TEST_CASE("scalar encodings") {
  CHECK(rational_json(Rational(3, 4)) == "3/4");
  CHECK(rational_json(Rational(2)) == "2/1");
  const Json exact = scalar_json(Scalar(Rational(1, 8)));
  CHECK(exact["mode"] == "exact");
  CHECK(exact["value"] == "1/8");
  PrecisionScope scope(128);
  const Json real = scalar_json(Scalar(Real(Rational(1, 4))));
  CHECK(real["mode"] == "real@128");
  CHECK(real.contains("precision"));
}

TEST_CASE("family and context encodings") {
  const Json f = family_json(star_family(3, 2, 1));
  CHECK(f["n"] == 3);
  CHECK(f["q"] == 2);
  CHECK(f["size"] == 5);
  CHECK(f["members"].size() == 5);
  const Json ctx = context_json(make_context(2, 3, Rational(1, 8)));
  CHECK(ctx["layer_mass"][0] == "64/135");
}

TEST_CASE("certificate encoding separates the trivial direction") {
  const Json j = certificate_json(certify(3, Rational(1, 8), 2));
  CHECK(j["threshold"] == "1/8");
  CHECK(j["condition"] == true);
  CHECK(j["trivial_direction"]["i"] == 0);
  CHECK(j["trivial_direction"]["k"] == 0);
  for (const auto& z : j["zero_eigenvalues"]) CHECK_FALSE((z["i"] == 0 && z["k"] == 0));
  CHECK(j["zero_eigenvalues"].size() == 3);
}
