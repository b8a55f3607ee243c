#include "kpd/experiment_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kpd/detail/format.hpp"
#include "kpd/errors.hpp"
#include "kpd/geometry.hpp"

namespace kpd {

namespace {

using nlohmann::json;

double get_num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw config_error(std::string("config: missing numeric field '") + key + "'");
  return j[key].get<double>();
}

double get_num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? get_num(j, key) : fallback;
}

std::string get_str(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw config_error(std::string("config: missing string field '") + key + "'");
  return j[key].get<std::string>();
}

// Edge values may be "inf" (a string) because JSON has no infinity literal.
double get_edge(const json& j, const char* key) {
  if (!j.contains(key))
    throw config_error(std::string("config: missing field '") + key + "'");
  if (j[key].is_string()) return detail::parse_double(j[key].get<std::string>());
  if (j[key].is_number()) return j[key].get<double>();
  throw config_error(std::string("config: field '") + key +
                     "' must be a number or \"inf\"");
}

json edge_to_json(double v) {
  if (v == kInf) return json("inf");
  return json(v);
}

std::vector<double> get_num_list(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    throw config_error(std::string("config: missing list field '") + key + "'");
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number())
      throw config_error(std::string("config: list '") + key +
                         "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

GrowthFunction growth_from_json(const json& j) {
  const std::string type = get_str(j, "type");
  if (type == "linear") return GrowthFunction::linear(get_num(j, "c"));
  if (type == "affine")
    return GrowthFunction::affine(get_num(j, "a"), get_num(j, "c"));
  if (type == "power")
    return GrowthFunction::power(get_num(j, "c"), get_num(j, "p"));
  if (type == "exp_saturating")
    return GrowthFunction::exp_saturating(get_num(j, "a"), get_num(j, "c"));
  throw config_error("config: unknown growth type '" + type + "'");
}

json growth_to_json(const GrowthFunction& g) {
  json j;
  switch (g.kind()) {
    case GrowthFunction::Kind::Linear:
      j["type"] = "linear";
      j["c"] = g.c();
      break;
    case GrowthFunction::Kind::Affine:
      j["type"] = "affine";
      j["a"] = g.a();
      j["c"] = g.c();
      break;
    case GrowthFunction::Kind::Power:
      j["type"] = "power";
      j["c"] = g.c();
      j["p"] = g.p();
      break;
    case GrowthFunction::Kind::ExpSaturating:
      j["type"] = "exp_saturating";
      j["a"] = g.a();
      j["c"] = g.c();
      break;
  }
  return j;
}

Shape shape_from_json(const json& j) {
  const std::string type = get_str(j, "type");
  if (type == "ball") return Shape::ball(get_num(j, "radius"));
  if (type == "l1") return Shape::l1(get_num(j, "radius"));
  if (type == "box") return Shape::box(get_num_list(j, "half_widths"));
  throw config_error("config: unknown shape type '" + type + "'");
}

json shape_to_json(const Shape& s) {
  json j;
  switch (s.kind()) {
    case Shape::Kind::Ball:
      j["type"] = "ball";
      j["radius"] = s.radius();
      break;
    case Shape::Kind::L1:
      j["type"] = "l1";
      j["radius"] = s.radius();
      break;
    case Shape::Kind::Box:
      j["type"] = "box";
      j["half_widths"] = s.half_widths();
      break;
  }
  return j;
}

MarkDistribution mark_dist_from_json(const json& j) {
  const std::string type = get_str(j, "type");
  if (type == "radius_constant")
    return MarkDistribution::radius_constant(get_num(j, "value"));
  if (type == "radius_uniform")
    return MarkDistribution::radius_uniform(get_num(j, "lo"), get_num(j, "hi"));
  if (type == "radius_discrete")
    return MarkDistribution::radius_discrete(get_num_list(j, "values"),
                                             get_num_list(j, "weights"));
  if (type == "growth_categorical")
    return MarkDistribution::growth_categorical(get_num_list(j, "weights"));
  if (type == "shape_categorical")
    return MarkDistribution::shape_categorical(get_num_list(j, "weights"));
  throw config_error("config: unknown mark distribution '" + type + "'");
}

json mark_dist_to_json(const MarkDistribution& d) {
  json j;
  switch (d.kind()) {
    case MarkDistribution::Kind::RadiusConstant:
      j["type"] = "radius_constant";
      j["value"] = d.lo();
      break;
    case MarkDistribution::Kind::RadiusUniform:
      j["type"] = "radius_uniform";
      j["lo"] = d.lo();
      j["hi"] = d.hi();
      break;
    case MarkDistribution::Kind::RadiusDiscrete:
      j["type"] = "radius_discrete";
      j["values"] = d.values();
      j["weights"] = d.weights();
      break;
    case MarkDistribution::Kind::GrowthCategorical:
      j["type"] = "growth_categorical";
      j["weights"] = d.weights();
      break;
    case MarkDistribution::Kind::ShapeCategorical:
      j["type"] = "shape_categorical";
      j["weights"] = d.weights();
      break;
  }
  return j;
}

Rectangle rectangle_from_json(const json& j) {
  const std::string type = get_str(j, "type");
  if (type == "zero_anchored")
    return Rectangle::zero_anchored(get_num(j, "r2"), get_num(j, "s1"),
                                    get_edge(j, "s2"));
  if (type == "half_open")
    return Rectangle::half_open(get_num(j, "r1"), get_num(j, "r2"),
                                get_num(j, "s1"), get_edge(j, "s2"));
  throw config_error("config: unknown rectangle type '" + type + "'");
}

json rectangle_to_json(int q, const Rectangle& r) {
  json j;
  j["q"] = q;
  if (r.kind == Rectangle::Kind::ZeroAnchored) {
    j["type"] = "zero_anchored";
  } else {
    j["type"] = "half_open";
    j["r1"] = r.r1;
  }
  j["r2"] = r.r2;
  j["s1"] = r.s1;
  j["s2"] = edge_to_json(r.s2);
  return j;
}

}  // namespace

FiltrationFunction ExperimentConfig::make_kappa() const {
  switch (kappa_kind) {
    case KappaKind::CechRadii:
      return FiltrationFunction::cech_radii(radius_cap);
    case KappaKind::RipsRadii:
      return FiltrationFunction::rips_radii(radius_cap);
    case KappaKind::CechGrowth:
      return FiltrationFunction::cech_growth(growth_family);
    case KappaKind::RipsGrowth:
      return FiltrationFunction::rips_growth(growth_family);
    case KappaKind::CechShape:
      return FiltrationFunction::cech_shape(shape_family);
  }
  throw config_error("config: bad kappa kind");
}

AveragingNet ExperimentConfig::make_net() const {
  std::vector<Window> windows;
  for (double size : net_sizes) {
    if (net_shape == "cube")
      windows.push_back(Window::cube(dimension, size));
    else if (net_shape == "ball")
      windows.push_back(Window::ball(dimension, size));
    else
      throw config_error("config: net shape must be cube or ball");
  }
  return AveragingNet(std::move(windows));
}

QuerySet ExperimentConfig::make_queries() const {
  QuerySet qs;
  for (int q : query_q)
    for (double r : query_r)
      for (double s : query_s) qs.grid.push_back({q, r, s});
  qs.rectangles = rectangles;
  return qs;
}

LlnOptions ExperimentConfig::make_options(int jobs) const {
  LlnOptions o;
  o.q_max = q_max;
  o.t_max = t_max;
  o.budget = budget;
  o.jobs = jobs;
  o.seeds = seeds;
  return o;
}

void validate_config(const ExperimentConfig& config) {
  if (config.dimension < 1 || config.dimension > 8)
    throw config_error("config: dimension must be in [1, 8]");
  if (config.q_max < 0) throw config_error("config: q_max must be >= 0");
  if (!(config.t_max > 0.0)) throw config_error("config: t_max must be > 0");
  if (!(config.process.intensity > 0.0))
    throw config_error("config: intensity must be > 0");
  if (config.seeds < 1) throw config_error("config: seeds must be >= 1");
  if (config.budget < 1) throw config_error("config: budget must be >= 1");

  const bool radii = config.kappa_kind == KappaKind::CechRadii ||
                     config.kappa_kind == KappaKind::RipsRadii;
  const bool growth = config.kappa_kind == KappaKind::CechGrowth ||
                      config.kappa_kind == KappaKind::RipsGrowth;
  const bool shape = config.kappa_kind == KappaKind::CechShape;

  if (radii && !(config.radius_cap >= 0.0))
    throw config_error("config: radius_cap must be >= 0");
  if (growth && config.growth_family.empty())
    throw config_error("config: growth kappa needs a nonempty growth_family");
  if (shape && config.shape_family.empty())
    throw config_error("config: shape kappa needs a nonempty shape_family");
  if (shape)
    for (const Shape& s : config.shape_family) s.validate_dim(config.dimension);

  // The mark law must feed the chosen filtration.
  const MarkDistribution& mark = config.process.marking.mark;
  const MarkKind mk = mark.mark_kind();
  if (radii && mk != MarkKind::Radius)
    throw config_error("config: radii kappa needs a radius mark distribution");
  if (growth && mk != MarkKind::Growth)
    throw config_error("config: growth kappa needs growth_categorical marks");
  if (shape && mk != MarkKind::Shape)
    throw config_error("config: shape kappa needs shape_categorical marks");
  if (radii) {
    double top = 0.0;
    switch (mark.kind()) {
      case MarkDistribution::Kind::RadiusConstant:
        top = mark.lo();
        break;
      case MarkDistribution::Kind::RadiusUniform:
        top = mark.hi();
        break;
      case MarkDistribution::Kind::RadiusDiscrete:
        for (double v : mark.values()) top = std::max(top, v);
        break;
      default:
        break;
    }
    if (top > config.radius_cap)
      throw config_error("config: mark radii exceed radius_cap");
  }
  if (mk == MarkKind::Growth &&
      mark.weights().size() != config.growth_family.size())
    throw config_error(
        "config: growth_categorical weights must match growth_family size");
  if (mk == MarkKind::Shape &&
      mark.weights().size() != config.shape_family.size())
    throw config_error(
        "config: shape_categorical weights must match shape_family size");

  if (config.process.marking.kind == Marking::Kind::MaternI &&
      !(config.process.marking.exclusion >= 0.0))
    throw config_error("config: matern exclusion must be >= 0");

  if (config.net_shape != "cube" && config.net_shape != "ball")
    throw config_error("config: net shape must be cube or ball");
  if (config.net_sizes.empty())
    throw config_error("config: net needs at least one size");
  for (std::size_t i = 0; i < config.net_sizes.size(); ++i) {
    if (!(config.net_sizes[i] > 0.0))
      throw config_error("config: net sizes must be > 0");
    if (i > 0 && !(config.net_sizes[i - 1] < config.net_sizes[i]))
      throw config_error("config: net sizes must be strictly increasing");
  }

  for (int q : config.query_q)
    if (q < 0 || q > config.q_max)
      throw config_error("config: query q outside [0, q_max]");
  for (double r : config.query_r)
    for (double s : config.query_s)
      if (!(r >= 0.0) || !(r <= s) || !(s < config.t_max))
        throw config_error("config: query grid needs 0 <= r <= s < t_max");
  for (const auto& [q, rect] : config.rectangles) {
    if (q < 0 || q > config.q_max)
      throw config_error("config: rectangle q outside [0, q_max]");
    if (!(rect.r1 >= 0.0) || !(rect.r1 <= rect.r2) || !(rect.r2 <= rect.s1) ||
        !(rect.s1 <= rect.s2))
      throw config_error(
          "config: rectangle must satisfy 0 <= r1 <= r2 <= s1 <= s2");
    if (rect.s2 > config.t_max && rect.s2 != kInf)
      throw config_error("config: rectangle s2 must be <= t_max or \"inf\"");
  }

  if (config.mode != "seeds" && config.mode != "lattice")
    throw config_error("config: mode must be seeds or lattice");
  if (config.mode == "lattice" && !(config.lattice_m > 0.0))
    throw config_error("config: lattice mode needs lattice_m > 0");
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }

  ExperimentConfig c;
  c.dimension = static_cast<int>(get_num(j, "dimension"));

  if (!j.contains("kappa") || !j["kappa"].is_object())
    throw config_error("config: missing object 'kappa'");
  const json& jk = j["kappa"];
  c.kappa_kind = kappa_kind_from_name(get_str(jk, "kind"));
  c.radius_cap = get_num_or(jk, "radius_cap", 0.0);
  if (jk.contains("growth_family"))
    for (const auto& g : jk["growth_family"])
      c.growth_family.push_back(growth_from_json(g));
  if (jk.contains("shape_family"))
    for (const auto& s : jk["shape_family"])
      c.shape_family.push_back(shape_from_json(s));

  if (!j.contains("process") || !j["process"].is_object())
    throw config_error("config: missing object 'process'");
  const json& jp = j["process"];
  c.process.intensity = get_num(jp, "intensity");
  c.process.seed = jp.contains("seed") && jp["seed"].is_number_unsigned()
                       ? jp["seed"].get<std::uint64_t>()
                       : static_cast<std::uint64_t>(get_num(jp, "seed"));
  if (!jp.contains("marking") || !jp["marking"].is_object())
    throw config_error("config: missing object 'process.marking'");
  const json& jm = jp["marking"];
  const std::string mtype = get_str(jm, "type");
  if (mtype == "iid") {
    c.process.marking.kind = Marking::Kind::IID;
  } else if (mtype == "matern_i") {
    c.process.marking.kind = Marking::Kind::MaternI;
    c.process.marking.exclusion = get_num(jm, "exclusion");
  } else {
    throw config_error("config: marking type must be iid or matern_i");
  }
  if (!jm.contains("mark") || !jm["mark"].is_object())
    throw config_error("config: missing object 'process.marking.mark'");
  c.process.marking.mark = mark_dist_from_json(jm["mark"]);

  if (!j.contains("net") || !j["net"].is_object())
    throw config_error("config: missing object 'net'");
  c.net_shape = get_str(j["net"], "shape");
  c.net_sizes = get_num_list(j["net"], "sizes");

  c.q_max = static_cast<int>(get_num(j, "q_max"));
  c.t_max = get_num(j, "t_max");

  if (!j.contains("queries") || !j["queries"].is_object())
    throw config_error("config: missing object 'queries'");
  {
    const json& jq = j["queries"];
    for (const auto& q : jq.contains("q") ? jq["q"] : json::array())
      c.query_q.push_back(q.get<int>());
    c.query_r = jq.contains("r") ? get_num_list(jq, "r") : std::vector<double>{};
    c.query_s = jq.contains("s") ? get_num_list(jq, "s") : std::vector<double>{};
  }

  if (j.contains("rectangles"))
    for (const auto& r : j["rectangles"])
      c.rectangles.emplace_back(static_cast<int>(get_num(r, "q")),
                                rectangle_from_json(r));

  c.seeds = static_cast<std::uint64_t>(get_num(j, "seeds"));
  c.budget = j.contains("budget")
                 ? static_cast<std::size_t>(get_num(j, "budget"))
                 : kNoBudget;
  c.mode = j.contains("mode") ? get_str(j, "mode") : "seeds";
  c.lattice_m = get_num_or(j, "lattice_m", 0.0);
  c.out_dir = j.contains("out_dir") ? get_str(j, "out_dir") : "out";

  validate_config(c);
  return c;
}

std::string config_to_json_text(const ExperimentConfig& c) {
  json j;
  j["dimension"] = c.dimension;

  json jk;
  jk["kind"] = kappa_kind_name(c.kappa_kind);
  const bool radii = c.kappa_kind == KappaKind::CechRadii ||
                     c.kappa_kind == KappaKind::RipsRadii;
  if (radii) jk["radius_cap"] = c.radius_cap;
  if (!c.growth_family.empty()) {
    json arr = json::array();
    for (const auto& g : c.growth_family) arr.push_back(growth_to_json(g));
    jk["growth_family"] = std::move(arr);
  }
  if (!c.shape_family.empty()) {
    json arr = json::array();
    for (const auto& s : c.shape_family) arr.push_back(shape_to_json(s));
    jk["shape_family"] = std::move(arr);
  }
  j["kappa"] = std::move(jk);

  json jp;
  jp["intensity"] = c.process.intensity;
  jp["seed"] = c.process.seed;
  json jm;
  jm["type"] = c.process.marking.kind == Marking::Kind::IID ? "iid" : "matern_i";
  if (c.process.marking.kind == Marking::Kind::MaternI)
    jm["exclusion"] = c.process.marking.exclusion;
  jm["mark"] = mark_dist_to_json(c.process.marking.mark);
  jp["marking"] = std::move(jm);
  j["process"] = std::move(jp);

  json jn;
  jn["shape"] = c.net_shape;
  jn["sizes"] = c.net_sizes;
  j["net"] = std::move(jn);

  j["q_max"] = c.q_max;
  j["t_max"] = c.t_max;

  json jq;
  jq["q"] = c.query_q;
  jq["r"] = c.query_r;
  jq["s"] = c.query_s;
  j["queries"] = std::move(jq);

  json jr = json::array();
  for (const auto& [q, rect] : c.rectangles) jr.push_back(rectangle_to_json(q, rect));
  j["rectangles"] = std::move(jr);

  j["seeds"] = c.seeds;
  if (c.budget != kNoBudget) j["budget"] = c.budget;
  j["mode"] = c.mode;
  if (c.lattice_m > 0.0) j["lattice_m"] = c.lattice_m;
  j["out_dir"] = c.out_dir;

  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("config: cannot write '" + path + "'");
  out << config_to_json_text(config);
}

}  // namespace kpd
