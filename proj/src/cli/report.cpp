#include "closure/cli/report.hpp"

#include <cmath>
#include <fstream>

#include "closure/error.hpp"

namespace closure {

Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v == 0.0 ? 0.0 : v;  // no signed zeros in reports
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? json_number(*v) : Json(nullptr); }

}  // namespace

Json to_json(const KInterval& iv) {
  if (iv.empty) return Json{{"empty", true}};
  return Json{{"empty", false}, {"lo", json_number(iv.lo)}, {"hi", json_number(iv.hi)},
              {"loOpen", iv.lo_open}, {"hiOpen", iv.hi_open}};
}

Json to_json(const BMCertificate& c) {
  return Json{{"k", json_number(c.k)},
              {"lambda", json_number(c.lambda)},
              {"A", json_number(c.A)},
              {"B", json_number(c.B)},
              {"diameterBound", json_number(c.diameterBound)},
              {"feasibleKInterval", to_json(c.feasibleKInterval)},
              {"residuals",
               {{"ricResidualMin", json_number(c.ricResidualMin)},
                {"supersolutionResidualMin", json_number(c.supersolutionResidualMin)}}},
              {"boundary", c.boundary},
              {"annotations", c.annotations}};
}

Json to_json(const ConditionResult& c) {
  return Json{{"name", c.name}, {"holds", c.holds}, {"margin", json_number(c.margin)},
              {"tolerance", json_number(c.tolerance)}};
}

Json to_json(const ClosureReport& r) {
  Json conditions = Json::array();
  for (const auto& c : r.conditions) conditions.push_back(to_json(c));
  Json j{{"theorem", to_string(r.theorem)},
         {"verdict", to_string(r.verdict)},
         {"conditions", conditions},
         {"diameterBoundClosedForm", optional_number(r.diameterBoundClosedForm)},
         {"diameterBoundOptimized", optional_number(r.diameterBoundOptimized)},
         {"oracleDiameter", optional_number(r.oracleDiameter)},
         {"k", optional_number(r.k)},
         {"A", optional_number(r.A)},
         {"B", optional_number(r.B)}};
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  j["annotations"] = r.annotations;
  return j;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace closure
