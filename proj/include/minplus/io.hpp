#ifndef MINPLUS_IO_HPP_
#define MINPLUS_IO_HPP_

#include "minplus/bounds.hpp"
#include "minplus/mass_function.hpp"
#include "minplus/regimes.hpp"
#include "minplus/series.hpp"
#include "minplus/simulate.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace minplus {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form of a double; used by every CSV writer
/// so that output bytes depend only on the values.
std::string format_double(double x);

/// Header `k,pmf,survival`, one row per stored k.
void write_mass_csv(std::ostream& os, const MassFunction& m);
Json to_json(const MassFunction& m);
MassFunction mass_from_json(const Json& j);

Json to_json(const SurvivalCurve& s);
SurvivalCurve survival_from_json(const Json& j);

/// Header `value,count`, ascending value.
void write_empirical_csv(std::ostream& os, const EmpiricalSummary& s);
Json to_json(const EmpiricalSummary& s);

Json to_json(const CertificateReport& r);
Json to_json(const RegimeReport& r);
Json to_json(const SeriesEval& e);
Json to_json(const LimitDiagnostics& d);

/// Header `t,empirical,limit`.
void write_limit_csv(std::ostream& os, const std::vector<LimitRow>& rows);

/// Writes `contents` to `path`, or to stdout when path is empty or "-".
/// Throws std::runtime_error on I/O failure.
void write_output(const std::string& path, const std::string& contents);

}  // namespace minplus

#endif  // MINPLUS_IO_HPP_
