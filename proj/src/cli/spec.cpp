#include "closure/cli/spec.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "closure/error.hpp"

namespace closure {

namespace {

constexpr std::size_t kMinResolution = 8;

// Collects every schema violation before reporting.
class Reader {
 public:
  Reader(const Config& cfg) : cfg_(cfg) {}

  const ConfigSection* section(const std::string& name) const {
    const auto it = cfg_.find(name);
    return it == cfg_.end() ? nullptr : &it->second;
  }

  void allow(const std::string& name, std::set<std::string> keys) {
    if (const ConfigSection* s = section(name))
      for (const auto& [k, v] : *s)
        if (!keys.count(k)) error(name + "." + k, "unknown key");
  }

  const ConfigValue* get(const std::string& sec, const std::string& key, bool required) {
    const ConfigSection* s = section(sec);
    if (s) {
      const auto it = s->find(key);
      if (it != s->end()) return &it->second;
    }
    if (required) error(sec + "." + key, "missing");
    return nullptr;
  }

  std::optional<double> number(const std::string& sec, const std::string& key, bool required) {
    const ConfigValue* v = get(sec, key, required);
    if (!v) return std::nullopt;
    if (v->type != ConfigValue::Type::Number) {
      error(sec + "." + key, "expected a number");
      return std::nullopt;
    }
    return v->number;
  }

  std::optional<std::size_t> count(const std::string& sec, const std::string& key, bool required) {
    const auto v = number(sec, key, required);
    if (!v) return std::nullopt;
    if (*v < 0 || std::floor(*v) != *v || *v > 1e6) {
      error(sec + "." + key, "expected a non-negative integer");
      return std::nullopt;
    }
    return static_cast<std::size_t>(*v);
  }

  std::optional<std::string> text(const std::string& sec, const std::string& key, bool required) {
    const ConfigValue* v = get(sec, key, required);
    if (!v) return std::nullopt;
    if (v->type != ConfigValue::Type::String) {
      error(sec + "." + key, "expected a string");
      return std::nullopt;
    }
    return v->text;
  }

  std::optional<Expression> expression(const std::string& sec, const std::string& key, bool required) {
    const ConfigValue* v = get(sec, key, required);
    if (!v) return std::nullopt;
    return expression_value(*v, sec + "." + key);
  }

  std::optional<Expression> expression_value(const ConfigValue& v, const std::string& path) {
    if (v.type == ConfigValue::Type::Number) return Expression::number(v.number);
    if (v.type != ConfigValue::Type::String) {
      error(path, "expected an expression string");
      return std::nullopt;
    }
    try {
      return Expression::parse(v.text);
    } catch (const Error& e) {
      throw Error(e.kind(), path + ": " + e.message());
    }
  }

  /// Array of exactly `n` entries.
  const ConfigValue* array(const std::string& sec, const std::string& key, std::size_t n, bool required) {
    const ConfigValue* v = get(sec, key, required);
    if (!v) return nullptr;
    if (v->type != ConfigValue::Type::Array) {
      error(sec + "." + key, "expected an array of " + std::to_string(n));
      return nullptr;
    }
    if (v->items.size() != n) {
      error(sec + "." + key, "expected " + std::to_string(n) + " entries, got " + std::to_string(v->items.size()));
      return nullptr;
    }
    return v;
  }

  template <std::size_t N>
  std::optional<std::array<double, N>> numbers(const std::string& sec, const std::string& key, bool required) {
    const ConfigValue* v = array(sec, key, N, required);
    if (!v) return std::nullopt;
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      if (v->items[i].type != ConfigValue::Type::Number) {
        error(sec + "." + key + "[" + std::to_string(i) + "]", "expected a number");
        return std::nullopt;
      }
      out[i] = v->items[i].number;
    }
    return out;
  }

  template <std::size_t N>
  std::optional<std::array<Expression, N>> expressions(const std::string& sec, const std::string& key) {
    const ConfigValue* v = array(sec, key, N, true);
    if (!v) return std::nullopt;
    std::array<Expression, N> out;
    for (std::size_t i = 0; i < N; ++i) {
      auto e = expression_value(v->items[i], sec + "." + key + "[" + std::to_string(i) + "]");
      if (!e) return std::nullopt;
      out[i] = *e;
    }
    return out;
  }

  void error(const std::string& path, const std::string& what) { errors_.push_back(path + ": " + what); }

  void finish() const {
    if (errors_.empty()) return;
    std::string msg = "invalid spec: ";
    for (std::size_t i = 0; i < errors_.size(); ++i) msg += (i ? "; " : "") + errors_[i];
    throw Error(ErrorKind::Schema, msg);
  }

 private:
  const Config& cfg_;
  std::vector<std::string> errors_;
};

ChartSpec read_chart(Reader& r, const std::string& sec) {
  ChartSpec c;
  const bool has_periods = r.get(sec, "periods", false) != nullptr;
  const bool has_patch = r.get(sec, "lo", false) || r.get(sec, "hi", false);
  if (has_periods == has_patch) {
    r.error(sec, "give either 'periods' or both 'lo' and 'hi'");
    return c;
  }
  if (has_periods) {
    c.periodic = true;
    if (auto p = r.numbers<3>(sec, "periods", true)) {
      c.periods = *p;
      for (double v : c.periods)
        if (!(v > 0.0)) r.error(sec + ".periods", "entries must be positive");
    }
  } else {
    c.periodic = false;
    const auto lo = r.numbers<3>(sec, "lo", true);
    const auto hi = r.numbers<3>(sec, "hi", true);
    if (lo && hi) {
      c.lo = *lo;
      c.hi = *hi;
      for (int a = 0; a < 3; ++a)
        if (!(c.hi[a] > c.lo[a])) r.error(sec + ".hi", "must exceed lo on every axis");
    }
  }
  return c;
}

}  // namespace

const char* to_string(SpecKind k) noexcept {
  switch (k) {
    case SpecKind::Flrw: return "flrw";
    case SpecKind::AnalyticFoliation: return "analytic-foliation";
    case SpecKind::TabulatedFoliation: return "tabulated-foliation";
  }
  return "unknown";
}

GridChart ChartSpec::chart(std::size_t n) const {
  return periodic ? GridChart::periodic_box(periods, {n, n, n}) : GridChart::patch(lo, hi, {n, n, n});
}

SpacetimeSpec spec_from_config(const Config& cfg, const std::filesystem::path& base_dir) {
  Reader r(cfg);
  SpacetimeSpec spec;
  const std::set<std::string> known{"spacetime", "flrw", "foliation", "tabulated", "analysis", "bm", "identities"};
  for (const auto& [name, s] : cfg)
    if (!known.count(name)) r.error(name.empty() ? "(top level)" : name, "unknown section");

  r.allow("spacetime", {"kind", "name"});
  r.allow("flrw", {"a", "K", "Lambda", "omega"});
  r.allow("foliation", {"N", "g", "Lambda", "periods", "lo", "hi"});
  r.allow("tabulated", {"N", "g", "times", "Lambda", "periods", "lo", "hi"});
  r.allow("analysis", {"t0", "time_step", "resolution", "half_width", "torus_side", "tolerance_profile",
                       "oracle_sources", "t_range", "t_samples"});
  r.allow("bm", {"n", "alpha", "beta", "gamma", "u", "V", "Q"});
  r.allow("identities", {"u", "k"});

  const auto kind = r.text("spacetime", "kind", true);
  if (auto name = r.text("spacetime", "name", false)) spec.name = *name;
  const std::map<std::string, std::pair<SpecKind, std::string>> kinds{
      {"flrw", {SpecKind::Flrw, "flrw"}},
      {"analytic-foliation", {SpecKind::AnalyticFoliation, "foliation"}},
      {"tabulated-foliation", {SpecKind::TabulatedFoliation, "tabulated"}}};
  if (kind) {
    const auto it = kinds.find(*kind);
    if (it == kinds.end()) {
      r.error("spacetime.kind", "expected flrw, analytic-foliation or tabulated-foliation");
    } else {
      spec.kind = it->second.first;
      for (const auto& [k, entry] : kinds) {
        const bool present = r.section(entry.second) != nullptr;
        if (k == *kind && !present) r.error(entry.second, "missing section for kind " + k);
        if (k != *kind && present) r.error(entry.second, "section does not match kind " + *kind);
      }
    }
  }

  if (kind && *kind == "flrw" && r.section("flrw")) {
    FlrwSpec f;
    if (auto a = r.expression("flrw", "a", true)) f.a = *a;
    if (auto K = r.number("flrw", "K", true)) f.K = *K;
    f.Lambda = r.expression("flrw", "Lambda", false).value_or(Expression::number(0.0));
    f.omega = r.expression("flrw", "omega", false);
    spec.flrw = f;
  }
  if (kind && *kind == "analytic-foliation" && r.section("foliation")) {
    AnalyticFoliationSpec f;
    if (auto N = r.expression("foliation", "N", true)) f.N = *N;
    if (auto g = r.expressions<6>("foliation", "g")) f.g = *g;
    f.Lambda = r.expression("foliation", "Lambda", false).value_or(Expression::number(0.0));
    f.chart = read_chart(r, "foliation");
    spec.analytic = f;
  }
  if (kind && *kind == "tabulated-foliation" && r.section("tabulated")) {
    TabulatedFoliationSpec f;
    for (const char* key : {"N", "g"}) {
      if (const ConfigValue* v = r.array("tabulated", key, 3, true)) {
        for (std::size_t i = 0; i < 3; ++i) {
          if (v->items[i].type != ConfigValue::Type::String) {
            r.error(std::string("tabulated.") + key + "[" + std::to_string(i) + "]", "expected a file name");
            continue;
          }
          (key[0] == 'N' ? f.N : f.g)[i] = base_dir / v->items[i].text;
        }
      }
    }
    if (auto t = r.numbers<3>("tabulated", "times", true)) f.times = *t;
    f.Lambda = r.number("tabulated", "Lambda", false).value_or(0.0);
    f.chart = read_chart(r, "tabulated");
    spec.tabulated = f;
    spec.analysis.toleranceProfile = "fd";
  }

  AnalysisSpec& a = spec.analysis;
  if (auto t0 = r.number("analysis", "t0", true)) a.t0 = *t0;
  a.timeStep = 1e-4 * std::max(1.0, std::fabs(a.t0));
  if (auto dt = r.number("analysis", "time_step", false)) {
    if (!(*dt > 0.0)) r.error("analysis.time_step", "must be positive");
    a.timeStep = *dt;
  }
  if (auto n = r.count("analysis", "resolution", false)) {
    if (*n < kMinResolution) r.error("analysis.resolution", "must be at least 8 per axis");
    a.resolution = *n;
  }
  if (auto w = r.number("analysis", "half_width", false)) {
    if (!(*w > 0.0)) r.error("analysis.half_width", "must be positive");
    a.halfWidth = *w;
  }
  if (auto L = r.number("analysis", "torus_side", false)) {
    if (!(*L > 0.0)) r.error("analysis.torus_side", "must be positive");
    a.torusSide = *L;
  }
  if (auto p = r.text("analysis", "tolerance_profile", false)) {
    if (*p != "analytic" && *p != "fd") r.error("analysis.tolerance_profile", "expected analytic or fd");
    a.toleranceProfile = *p;
  }
  if (auto s = r.count("analysis", "oracle_sources", false)) {
    if (*s < 1) r.error("analysis.oracle_sources", "must be at least 1");
    a.oracleSources = *s;
  }
  if (auto range = r.numbers<2>("analysis", "t_range", false)) {
    if (!((*range)[1] >= (*range)[0])) r.error("analysis.t_range", "end must not precede start");
    a.tRange = *range;
  }
  if (auto s = r.count("analysis", "t_samples", false)) {
    if (*s < 1) r.error("analysis.t_samples", "must be at least 1");
    a.tSamples = *s;
  }
  if (spec.tabulated && std::fabs(spec.tabulated->times[1] - a.t0) > 1e-12 * std::max(1.0, std::fabs(a.t0)))
    r.error("tabulated.times", "middle time must equal analysis.t0");
  if (spec.tabulated && a.tRange) r.error("analysis.t_range", "a tabulated foliation has a single analyzable leaf");

  if (r.section("bm")) {
    BMCheckSpec b;
    if (auto n = r.count("bm", "n", false)) b.n = static_cast<int>(*n);
    if (b.n != 3) r.error("bm.n", "only n = 3 slices are supported");
    b.alpha = r.number("bm", "alpha", false).value_or(0.0);
    b.beta = r.number("bm", "beta", false).value_or(0.0);
    b.gamma = r.number("bm", "gamma", false).value_or(0.0);
    b.u = r.expression("bm", "u", false).value_or(Expression::number(1.0));
    b.V = r.expression("bm", "V", false).value_or(Expression::number(0.0));
    if (auto Q = r.expressions<6>("bm", "Q")) b.Q = *Q;
    spec.bm = b;
  }
  // The default probe 2 + sin x is rescaled to one period along x on periodic charts.
  std::optional<double> x_period;
  if (spec.flrw && spec.flrw->K == 0.0) x_period = spec.analysis.torusSide;
  if (spec.analytic && spec.analytic->chart.periodic) x_period = spec.analytic->chart.periods[0];
  if (spec.tabulated && spec.tabulated->chart.periodic) x_period = spec.tabulated->chart.periods[0];
  const Expression probe =
      x_period ? Expression::parse("2 + sin(2*pi*x/" + Expression::number(*x_period).print() + ")") : Expression::parse("2 + sin(x)");
  spec.identities.u = r.expression("identities", "u", false).value_or(probe);
  spec.identities.k = r.number("identities", "k", false).value_or(1.0);

  r.finish();
  return spec;
}

SpacetimeSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  SpacetimeSpec spec = spec_from_config(parse_config(buf.str()), path.parent_path());
  if (spec.name.empty()) spec.name = path.stem().string();
  return spec;
}

}  // namespace closure
