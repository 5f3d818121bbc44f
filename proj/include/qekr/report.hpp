#pragma once

// JSON views of the library's values and reports. Rationals are strings
// "numerator/denominator"; reals are {"value": decimal string, "precision": bits};
// float-layer diagnostics are plain JSON numbers under a "float64" mode tag.

#include "qekr/certificate.hpp"
#include "qekr/families.hpp"
#include "qekr/measure.hpp"

#include <json.hpp>

namespace qekr {

using Json = nlohmann::ordered_json;

Json rational_json(const Rational& r);
Json bigint_json(const BigInt& v);
Json real_json(const Real& r);
/// {"mode": "exact", "value": "a/b"} or {"mode": "real@bits", "value": ..., "precision": bits}
Json scalar_json(const Scalar& s);

Json subspace_json(const Subspace& s);
/// Members as hex rows, or as full subspace objects when `full` is set.
Json family_json(const Family& f, bool full = false);

template <class T>
Json context_json(const MeasureContext<T>& ctx);

Json moments_json(const MomentReport& r);
Json tail_json(const TailReport& r);
Json monotone_json(const MonotoneProfile& p);
Json search_json(const SearchResult& r);
Json subspace_pair_json(const SubspacePairReport& r);
Json subset_check_json(const SubsetCheckReport& r);
Json oracle_json(const UniformBoundReport& r);

Json matrix_json(const RatMatrix& m);
Json block_spectrum_json(const BlockSpectrum& s);
Json certificate_json(const CertificateBundle& b);
/// Residuals, extremes, and the spectrum of S' (not the full matrices).
Json full_certificate_json(const FullCertificate& c);
Json kernel_json(const KernelReport& r);
Json duality_json(const DualityGap& g);
Json hoffman_json(const HoffmanReport& r);

}  // namespace qekr
