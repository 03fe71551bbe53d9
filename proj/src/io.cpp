#include "minplus/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>

namespace minplus {
namespace {

Json optional_violation(const std::optional<Violation>& v) {
  if (!v) return nullptr;
  return Json{{"N", v->N}, {"k", v->k}, {"residual", v->residual}};
}

Json array_to_json(const Array& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.size(); ++i) out.push_back(a[i]);
  return out;
}

Array array_from_json(const Json& j) {
  Array a(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) a[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return a;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_mass_csv(std::ostream& os, const MassFunction& m) {
  const SurvivalCurve s = to_survival(m);
  os << "k,pmf,survival\n";
  for (std::int64_t k = 1; k <= m.support(); ++k) {
    os << k << ',' << format_double(m.probs[k - 1]) << ',' << format_double(s.at(k)) << '\n';
  }
}

Json to_json(const MassFunction& m) {
  return Json{{"level", m.level},         {"p_plus", m.p_plus},
              {"k_max", m.k_max},         {"tail_mass", m.tail_mass},
              {"probs", array_to_json(m.probs)}};
}

MassFunction mass_from_json(const Json& j) {
  MassFunction m;
  m.level = j.at("level").get<int>();
  m.p_plus = j.at("p_plus").get<double>();
  m.k_max = j.at("k_max").get<std::int64_t>();
  m.tail_mass = j.at("tail_mass").get<double>();
  m.probs = array_from_json(j.at("probs"));
  validate(m);
  return m;
}

Json to_json(const SurvivalCurve& s) {
  return Json{{"level", s.level},
              {"p_plus", s.p_plus},
              {"tail_floor", s.tail_floor},
              {"values", array_to_json(s.values)}};
}

SurvivalCurve survival_from_json(const Json& j) {
  SurvivalCurve s;
  s.level = j.at("level").get<int>();
  s.p_plus = j.at("p_plus").get<double>();
  s.tail_floor = j.at("tail_floor").get<double>();
  s.values = array_from_json(j.at("values"));
  validate(s);
  return s;
}

void write_empirical_csv(std::ostream& os, const EmpiricalSummary& s) {
  os << "value,count\n";
  for (const auto& [value, count] : s.counts) os << value << ',' << count << '\n';
}

Json to_json(const EmpiricalSummary& s) {
  Json counts = Json::array();
  for (const auto& [value, count] : s.counts) counts.push_back({value, count});
  Json quantiles = Json::array();
  for (const auto& [level, q] : s.scaled_quantiles) quantiles.push_back({{"level", level}, {"value", q}});
  return Json{{"depth", s.depth},       {"p_plus", s.p_plus},
              {"n", s.n},               {"mean_log", s.mean_log},
              {"scaled_quantiles", quantiles}, {"counts", counts}};
}

Json to_json(const CertificateReport& r) {
  Json j{{"n_range", {r.n_range.lo, r.n_range.hi}},
         {"k_range", {r.k_range.lo, r.k_range.hi}},
         {"grid", {r.n_range.size(), r.k_range.size()}},
         {"passed", r.passed()},
         {"min_margin", r.min_margin},
         {"worst", optional_violation(r.worst)},
         {"first_violation", optional_violation(r.first_violation)},
         {"violations", r.violations},
         {"gamma_estimate", r.gamma_estimate ? Json(*r.gamma_estimate) : Json(nullptr)}};
  if (!r.residuals.empty()) j["residuals"] = r.residuals;
  return j;
}

Json to_json(const RegimeReport& r) {
  Json j{{"p_plus", r.p_plus}, {"classification", std::string(to_string(r.classification))}};
  j["fixed_point_c2"] = r.fixed_point_c2 ? Json(*r.fixed_point_c2) : Json(nullptr);
  j["growth_base"] = r.growth_base ? Json(*r.growth_base) : Json(nullptr);
  if (r.limit_survival) {
    j["limit_survival"] = Json{{"levels", r.limit_survival->levels},
                               {"last_change", r.limit_survival->last_change},
                               {"tail_mass", r.limit_survival->tail_mass},
                               {"stationarity_residual", r.stationarity.value_or(0.0)},
                               {"values", array_to_json(r.limit_survival->values)}};
  } else {
    j["limit_survival"] = nullptr;
  }
  Json growth = Json::array();
  for (const auto& g : r.growth) {
    growth.push_back(Json{{"N", g.N},
                          {"mean", g.mean},
                          {"bound", g.bound},
                          {"truncated", g.truncated},
                          {"ok", g.ok}});
  }
  j["growth"] = growth;
  return j;
}

Json to_json(const SeriesEval& e) {
  return Json{{"name", e.name},   {"k", e.k},
              {"value", e.value}, {"bound", e.bound},
              {"direction", e.upper ? "upper" : "lower"}, {"satisfied", e.satisfied}};
}

Json to_json(const LimitDiagnostics& d) {
  return Json{{"N", d.N},
              {"ks_distance", d.ks_distance},
              {"mean_scaled", d.mean_scaled},
              {"target_mean", d.target_mean},
              {"truncated", d.truncated}};
}

void write_limit_csv(std::ostream& os, const std::vector<LimitRow>& rows) {
  os << "t,empirical,limit\n";
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.empirical) << ',' << format_double(r.limit)
       << '\n';
  }
}

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  out.close();
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace minplus
