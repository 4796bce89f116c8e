#include "mixer/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mixer/characters.hpp"
#include "mixer/error.hpp"
#include "mixer/interleave.hpp"
#include "mixer/mixing.hpp"
#include "mixer/parallel.hpp"
#include "mixer/spec.hpp"

namespace mixer {

namespace {

using json = nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '-';
    out += ok ? c : '_';
  }
  return out;
}

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) fail(Errc::invalid_argument, c.command + " samples randomness and needs an explicit --seed");
  return *c.seed;
}

GroupSpec spec_of(const RunConfig& c, const std::string& text) { return parse_spec(text, c.max_order); }

json header(const RunConfig& c, const GroupTable* group) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = c.command;
  if (group != nullptr) {
    j["group"] = group->spec().label();
    j["order"] = group->order();
  }
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

json complex_pair(std::complex<double> z) {
  // Quantize away float noise below 1e-12 so the report is stable.
  auto q = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
  return json::array({q(z.real()), q(z.imag())});
}

json chartable_report(const RunConfig& c) {
  const auto data = build_group_data(spec_of(c, c.group));
  const auto ortho = verify_orthogonality(data.table, data.classes);
  json j = header(c, &data.group);
  const std::size_t k = data.table.count();
  j["classes"] = k;
  j["class_sizes"] = data.table.class_sizes;
  j["element_orders"] = data.table.element_orders;
  json reps = json::array();
  for (Index r : data.classes.representatives) reps.push_back(data.group.describe(r));
  j["representatives"] = reps;
  j["degrees"] = data.table.degrees;
  json values = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (std::size_t l = 0; l < k; ++l) row.push_back(complex_pair(data.table.value(i, l)));
    values.push_back(row);
  }
  j["values"] = values;
  j["prime"] = data.table.prime;
  std::uint64_t sum_sq = 0;
  for (auto d : data.table.degrees) sum_sq += d * d;
  j["sum_degree_squares"] = sum_sq;
  // Residuals are float noise; they are reported in the tolerance check, not as golden numbers.
  j["residuals"] = {{"tolerance", ortho.tolerance}, {"pass", ortho.pass}};
  return j;
}

json zeta_report(const RunConfig& c) {
  const auto data = build_group_data(spec_of(c, c.group));
  json j = header(c, &data.group);
  j["classes"] = data.table.count();
  json vals = json::array();
  for (double s : c.s_values) vals.push_back({{"s", s}, {"zeta", witten_zeta(data.table, s)}});
  j["values"] = vals;
  return j;
}

json zetatrend_report(const RunConfig& c) {
  if (c.groups.empty()) fail(Errc::invalid_argument, "zetatrend needs at least one group");
  std::vector<GroupSpec> family;
  for (const auto& g : c.groups) family.push_back(spec_of(c, g));
  const double s = c.s_values.empty() ? 1.0 : c.s_values.front();
  json j = header(c, nullptr);
  j["s"] = s;
  json rows = json::array();
  for (const auto& r : zeta_trend(family, s)) {
    rows.push_back({{"group", r.group},
                    {"order", r.order},
                    {"classes", r.classes},
                    {"zeta", r.zeta},
                    {"excess", r.excess},
                    {"normalizer", r.normalizer},
                    {"normalized_excess", r.normalized_excess}});
  }
  j["rows"] = rows;
  return j;
}

json mixpair_report(const RunConfig& c) {
  const auto data = build_group_data(spec_of(c, c.group));
  const auto x = parse_class(c.x, data.group, data.classes);
  const auto y = parse_class(c.y, data.group, data.classes);
  const auto p = p_char(x, y, data.table, data.classes);
  const auto d = dist_to_uniform(p);
  const auto cov = coverage(p);
  const double l2 = l2_sq_char(x, y, data.table);
  json j = header(c, &data.group);
  j["x_class"] = x;
  j["y_class"] = y;
  j["x"] = data.group.describe(data.classes.representatives[x]);
  j["y"] = data.group.describe(data.classes.representatives[y]);
  j["values"] = p.values;
  j["l2_sq"] = l2;
  j["N"] = l2 * data.group.order();
  j["l1"] = d.l1;
  j["l2_sq_to_uniform"] = d.l2_sq;
  j["linf"] = d.linf;
  j["support"] = cov.support;
  j["coverage"] = cov.fraction;
  j["clamped"] = p.clamped;
  const long double pairs = static_cast<long double>(data.classes.sizes[x]) * data.classes.sizes[y];
  if (pairs <= static_cast<long double>(c.loop_budget)) {
    const auto b = p_brute(x, y, data.group, data.classes, c.loop_budget);
    j["pair_counts"] = b.pair_counts;
    j["l2_sq_brute"] = l2_sq(b);
  }
  return j;
}

Coupling parse_coupling(const std::string& text, const GroupTable& group) {
  if (text == "independent") return Coupling::independent();
  if (text == "diagonal") return Coupling::diagonal();
  if (text.rfind("transinv:", 0) == 0) return Coupling::translated_inverse(parse_element(text.substr(9), group));
  if (text.rfind("bijfile:", 0) == 0) {
    const std::string path = text.substr(8);
    std::ifstream in(path);
    if (!in) fail(Errc::io_error, "cannot open bijection file " + path);
    std::vector<Index> mapping;
    std::string line;
    while (std::getline(in, line)) {
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      mapping.push_back(parse_element(line, group));
    }
    return Coupling::bijection(std::move(mapping), group.order(), path);
  }
  fail(Errc::spec_syntax, "unknown coupling '" + text + "'");
}

std::pair<json, std::string> survey_report(const RunConfig& c) {
  const auto data = build_group_data(spec_of(c, c.group));
  const auto coupling = parse_coupling(c.coupling, data.group);
  SurveyOptions opts;
  opts.seed = require_seed(c);
  opts.exact_sweep_limit = c.sweep_limit;
  opts.samples = c.survey_samples;
  const auto rep = survey(data.group, data.classes, data.table, coupling, c.deltas, opts);
  json j = header(c, &data.group);
  j["coupling"] = rep.coupling;
  j["pairs"] = rep.records.size();
  j["denominator"] = rep.denominator;
  j["sampling_fallback"] = rep.sampling_fallback;
  j["samples"] = rep.samples;
  j["mean_N"] = rep.mean_norm;
  j["normalization_note"] = rep.normalization_note;
  json th = json::array();
  for (const auto& t : rep.thresholds) th.push_back({{"delta", t.delta}, {"probability", t.probability}});
  j["thresholds"] = th;
  json qs = json::array();
  for (const auto& [level, n] : rep.quantiles) qs.push_back({{"level", level}, {"N", n}});
  j["quantiles"] = qs;
  std::ostringstream csv;
  csv << "xclass,yclass,weight,N,l1,coverage\n";
  for (const auto& r : rep.records) {
    csv << r.x_class << ',' << r.y_class << ',' << fmt_double(r.weight) << ',' << fmt_double(r.norm) << ','
        << fmt_double(r.l1) << ',' << fmt_double(r.coverage) << '\n';
  }
  return {j, csv.str()};
}

json thompson_report(const RunConfig& c) {
  const auto spec = spec_of(c, c.group);
  const auto group = GroupTable::build(spec);
  const auto classes = conj_classes(group);
  const auto t = thompson_search(group, classes);
  json j = header(c, &group);
  j["witness"] = t.witness;
  j["best_class"] = t.best_class;
  j["best_class_representative"] = group.describe(classes.representatives[t.best_class]);
  j["best_coverage"] = t.best_coverage;
  j["fraction"] = t.fraction;
  j["class_coverage"] = t.class_coverage;
  return j;
}

json charbound_report(const RunConfig& c) {
  const auto data = build_group_data(spec_of(c, c.group));
  const double s = c.s_values.empty() ? 1.0 : c.s_values.front();
  const auto r = char_bound_fraction(data.classes, data.table, s);
  json j = header(c, &data.group);
  j["s"] = r.s;
  j["fraction"] = r.fraction;
  j["lower_bound"] = r.lower_bound;
  j["asserted"] = r.asserted;
  j["holds"] = !r.asserted || r.fraction > r.lower_bound;
  return j;
}

json deviation_json(const DeviationReport& d) {
  json j = {{"deviation", d.deviation}, {"alpha", d.alpha},   {"beta", d.beta},
            {"t", d.arity},             {"normalized", d.normalized}, {"uniform", d.uniform},
            {"family", d.family},       {"base", d.base},     {"degenerate", d.degenerate}};
  // Infinite exponents (uniform input) are reported as null next to uniform = true.
  j["c_hat"] = d.uniform ? json(nullptr) : json(d.c_hat);
  j["c_bounded_rank"] = d.uniform ? json(nullptr) : json(d.c_bounded_rank);
  return j;
}

json interleave_report(const RunConfig& c) {
  const auto spec = spec_of(c, c.group);
  const double beta = c.beta.value_or(c.alpha);
  std::optional<GroupData> data;
  std::optional<GroupTable> table;
  // Character data is only needed when the exact path may switch to representations.
  auto group_ref = [&]() -> const GroupTable& { return data ? data->group : *table; };
  table.emplace(GroupTable::build(spec));
  const Index n = table->order();
  const bool seeded = c.set_a.empty() || c.set_b.empty();
  const std::uint64_t seed = seeded || c.mc_samples > 0 ? require_seed(c) : c.seed.value_or(0);
  const TupleSet a = c.set_a.empty() ? TupleSet::seeded_random(c.arity, n, c.alpha, seed, 0) : read_tuple_set(c.set_a, *table);
  const TupleSet b = c.set_b.empty() ? TupleSet::seeded_random(c.arity, n, beta, seed, 1) : read_tuple_set(c.set_b, *table);

  InterleaveEstimate e;
  if (c.mc_samples > 0) {
    e = mc_distribution(*table, a, b, c.mc_samples, RandomStream(seed, 2));
  } else {
    const long double pairs = static_cast<long double>(a.size()) * b.size();
    if (pairs <= static_cast<long double>(std::min<std::uint64_t>(c.loop_budget, 1U << 22))) {
      e = exact_distribution(*table, a, b, c.loop_budget);
    } else {
      table.reset();
      data.emplace(build_group_data(spec));
      e = exact_distribution(*data, a, b, ExactOptions{c.loop_budget, ExactMethod::automatic});
    }
  }
  const GroupTable& group = group_ref();
  const auto dev = deviation_report(e, a.density(), b.density(), spec);
  json j = header(c, &group);
  j["t"] = e.arity;
  j["size_a"] = e.size_a;
  j["size_b"] = e.size_b;
  j["density_a"] = a.density();
  j["density_b"] = b.density();
  j["mode"] = e.mode == EstimateMode::exact ? "exact" : "montecarlo";
  j["method"] = e.method;
  j["total"] = e.total;
  j["linf_deviation"] = e.linf_deviation;
  j["worst_element"] = group.hex(e.worst_element);
  json probs = json::object();
  json counts = json::object();
  json errs = json::object();
  for (Index g = 0; g < n; ++g) {
    const auto key = group.hex(g);
    probs[key] = e.probabilities[g];
    counts[key] = e.counts[g];
    if (e.mode == EstimateMode::montecarlo) errs[key] = e.std_errors[g];
  }
  j["probabilities"] = probs;
  j["counts"] = counts;
  if (e.mode == EstimateMode::montecarlo) j["std_errors"] = errs;
  j["deviation_report"] = deviation_json(dev);
  return j;
}

json advantage_report(const RunConfig& c) {
  const auto spec = spec_of(c, c.group);
  if (c.protocol.empty()) fail(Errc::invalid_argument, "advantage needs --protocol");
  std::optional<GroupData> data;
  std::optional<GroupTable> table;
  if (c.advantage_exact) {
    data.emplace(build_group_data(spec));
  } else {
    table.emplace(GroupTable::build(spec));
  }
  const GroupTable& group = data ? data->group : *table;
  const auto protocol = read_protocol(c.protocol, group);
  const Index g = parse_element(c.g, group);
  const Index h = parse_element(c.h, group);
  const auto est = advantage(group, protocol, g, h, c.advantage_samples, RandomStream(require_seed(c), 3));
  json j = header(c, &group);
  j["t"] = protocol.arity();
  j["rectangles"] = protocol.rectangles().size();
  j["bit_budget"] = est.bit_budget;
  j["g"] = group.hex(g);
  j["h"] = group.hex(h);
  j["p_g"] = est.p_g;
  j["p_h"] = est.p_h;
  j["advantage"] = est.advantage;
  j["std_error"] = est.std_error;
  j["samples"] = est.samples;
  if (data) {
    const auto ex = advantage_exact(*data, protocol, g, h, ExactOptions{c.loop_budget, ExactMethod::automatic});
    j["exact"] = {{"p_g", ex.p_g},
                  {"p_h", ex.p_h},
                  {"advantage", ex.advantage},
                  {"assembled", ex.assembled},
                  {"max_normalized", ex.max_normalized},
                  {"budget_bound", ex.budget_bound},
                  {"triangle_bound", ex.triangle_bound},
                  {"assembled_holds", ex.advantage <= ex.assembled * (1 + 1e-12) + 1e-15 &&
                                          ex.assembled <= ex.triangle_bound * (1 + 1e-12) + 1e-15}};
  }
  return j;
}

std::string param_tag(const RunConfig& c) {
  std::string tag;
  auto num = [](double v) {
    std::ostringstream o;
    o << v;
    return o.str();
  };
  if (c.command == "zeta" || c.command == "zetatrend" || c.command == "charbound") {
    tag = "-s";
    for (std::size_t i = 0; i < c.s_values.size(); ++i) tag += (i ? "_" : "") + num(c.s_values[i]);
  } else if (c.command == "mixpair") {
    tag = "-x" + c.x + "-y" + c.y;
  } else if (c.command == "survey") {
    tag = "-" + c.coupling;
  } else if (c.command == "interleave") {
    tag = "-t" + std::to_string(c.arity) + "-a" + num(c.alpha) + "-b" + num(c.beta.value_or(c.alpha));
    tag += c.mc_samples > 0 ? "-mc" + std::to_string(c.mc_samples) : "-exact";
  } else if (c.command == "advantage") {
    tag = "-" + std::filesystem::path(c.protocol).stem().string() + "-g" + c.g + "-h" + c.h;
  }
  return tag;
}

void compare_json(const json& e, const json& a, const std::string& path, double rel, double abs_tol,
                  std::string& out) {
  if (!out.empty()) return;
  if (e.is_number() && a.is_number()) {
    if (e.is_number_integer() && a.is_number_integer() && !e.is_number_float() && !a.is_number_float()) {
      if (e != a) out = path + ": expected " + e.dump() + ", got " + a.dump();
      return;
    }
    const double x = e.get<double>();
    const double y = a.get<double>();
    if (std::abs(x - y) > std::max(abs_tol, rel * std::abs(x))) {
      out = path + ": expected " + e.dump() + ", got " + a.dump();
    }
    return;
  }
  if (e.type() != a.type()) {
    out = path + ": type differs";
    return;
  }
  if (e.is_object()) {
    for (auto it = e.begin(); it != e.end(); ++it) {
      if (!a.contains(it.key())) {
        out = path + "/" + it.key() + ": missing";
        return;
      }
      compare_json(it.value(), a.at(it.key()), path + "/" + it.key(), rel, abs_tol, out);
    }
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!e.contains(it.key())) {
        out = path + "/" + it.key() + ": unexpected";
        return;
      }
    }
    return;
  }
  if (e.is_array()) {
    if (e.size() != a.size()) {
      out = path + ": length " + std::to_string(e.size()) + " vs " + std::to_string(a.size());
      return;
    }
    for (std::size_t i = 0; i < e.size(); ++i) compare_json(e[i], a[i], path + "/" + std::to_string(i), rel, abs_tol, out);
    return;
  }
  if (e != a) out = path + ": expected " + e.dump() + ", got " + a.dump();
}

}  // namespace

std::string golden_file_name(const RunConfig& c) {
  std::string group = c.group;
  if (c.command == "zetatrend") {
    group.clear();
    for (std::size_t i = 0; i < c.groups.size(); ++i) group += (i ? "+" : "") + c.groups[i];
  }
  const std::string seed = c.seed ? std::to_string(*c.seed) : "noseed";
  return sanitize(c.command + param_tag(c)) + "__" + sanitize(group) + "__" + seed + ".json";
}

std::string golden_diff(const std::string& expected, const std::string& actual, double rel_tol, double abs_tol) {
  json e;
  json a;
  try {
    e = json::parse(expected);
    a = json::parse(actual);
  } catch (const json::exception& ex) {
    return std::string("unparseable report: ") + ex.what();
  }
  std::string out;
  compare_json(e, a, "", rel_tol, abs_tol, out);
  return out;
}

RunOutput run(const RunConfig& c) {
  set_thread_count(c.threads);
  json report;
  RunOutput out;
  if (c.command == "chartable") {
    report = chartable_report(c);
  } else if (c.command == "zeta") {
    report = zeta_report(c);
  } else if (c.command == "zetatrend") {
    report = zetatrend_report(c);
  } else if (c.command == "mixpair") {
    report = mixpair_report(c);
  } else if (c.command == "survey") {
    auto [j, csv] = survey_report(c);
    report = std::move(j);
    out.csv = std::move(csv);
  } else if (c.command == "thompson") {
    report = thompson_report(c);
  } else if (c.command == "charbound") {
    report = charbound_report(c);
  } else if (c.command == "interleave") {
    report = interleave_report(c);
  } else if (c.command == "advantage") {
    report = advantage_report(c);
  } else {
    fail(Errc::spec_syntax, "unknown command '" + c.command + "'");
  }
  out.json = report.dump(2) + "\n";

  if (c.golden != GoldenMode::off) {
    const auto path = std::filesystem::path(c.golden_dir) / golden_file_name(c);
    out.golden_path = path.string();
    if (c.golden == GoldenMode::write) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
      std::ofstream f(path, std::ios::binary);
      if (!f) fail(Errc::io_error, "cannot write golden file " + path.string());
      f << out.json;
      if (!f) fail(Errc::io_error, "write failed for " + path.string());
    } else {
      std::ifstream f(path, std::ios::binary);
      if (!f) fail(Errc::io_error, "golden file " + path.string() + " not found");
      std::stringstream buf;
      buf << f.rdbuf();
      const auto diff = golden_diff(buf.str(), out.json);
      if (!diff.empty()) fail(Errc::golden_mismatch, "golden drift in " + path.string() + " at " + diff);
    }
  }
  return out;
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    fail(Errc::spec_syntax, std::string("run config is not valid JSON: ") + ex.what());
  }
  if (!j.is_object()) fail(Errc::spec_syntax, "run config must be a JSON object");
  RunConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      if (k == "command") c.command = v.get<std::string>();
      else if (k == "group") c.group = v.get<std::string>();
      else if (k == "groups") c.groups = v.get<std::vector<std::string>>();
      else if (k == "seed") c.seed = v.is_null() ? std::nullopt : std::optional(v.get<std::uint64_t>());
      else if (k == "max_order") c.max_order = v.get<std::uint64_t>();
      else if (k == "loop_budget") c.loop_budget = v.get<std::uint64_t>();
      else if (k == "threads") c.threads = v.get<unsigned>();
      else if (k == "s") c.s_values = v.get<std::vector<double>>();
      else if (k == "x") c.x = v.get<std::string>();
      else if (k == "y") c.y = v.get<std::string>();
      else if (k == "coupling") c.coupling = v.get<std::string>();
      else if (k == "deltas") c.deltas = v.get<std::vector<double>>();
      else if (k == "sweep_limit") c.sweep_limit = v.get<std::uint64_t>();
      else if (k == "survey_samples") c.survey_samples = v.get<std::uint64_t>();
      else if (k == "t") c.arity = v.get<std::uint32_t>();
      else if (k == "alpha") c.alpha = v.get<double>();
      else if (k == "beta") c.beta = v.is_null() ? std::nullopt : std::optional(v.get<double>());
      else if (k == "mc_samples") c.mc_samples = v.get<std::uint64_t>();
      else if (k == "set_a") c.set_a = v.get<std::string>();
      else if (k == "set_b") c.set_b = v.get<std::string>();
      else if (k == "protocol") c.protocol = v.get<std::string>();
      else if (k == "g") c.g = v.get<std::string>();
      else if (k == "h") c.h = v.get<std::string>();
      else if (k == "advantage_samples") c.advantage_samples = v.get<std::uint64_t>();
      else if (k == "advantage_exact") c.advantage_exact = v.get<bool>();
      else if (k == "golden") {
        const auto m = v.get<std::string>();
        if (m == "off") c.golden = GoldenMode::off;
        else if (m == "write") c.golden = GoldenMode::write;
        else if (m == "compare") c.golden = GoldenMode::compare;
        else fail(Errc::spec_syntax, "golden mode must be off, write or compare");
      } else if (k == "golden_dir") c.golden_dir = v.get<std::string>();
      else fail(Errc::spec_syntax, "unknown run config key '" + k + "'");
    }
  } catch (const json::exception& ex) {
    fail(Errc::spec_syntax, std::string("bad run config value: ") + ex.what());
  }
  return c;
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["group"] = c.group;
  j["groups"] = c.groups;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["max_order"] = c.max_order;
  j["loop_budget"] = c.loop_budget;
  j["threads"] = c.threads;
  j["s"] = c.s_values;
  j["x"] = c.x;
  j["y"] = c.y;
  j["coupling"] = c.coupling;
  j["deltas"] = c.deltas;
  j["sweep_limit"] = c.sweep_limit;
  j["survey_samples"] = c.survey_samples;
  j["t"] = c.arity;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta ? json(*c.beta) : json(nullptr);
  j["mc_samples"] = c.mc_samples;
  j["set_a"] = c.set_a;
  j["set_b"] = c.set_b;
  j["protocol"] = c.protocol;
  j["g"] = c.g;
  j["h"] = c.h;
  j["advantage_samples"] = c.advantage_samples;
  j["advantage_exact"] = c.advantage_exact;
  j["golden"] = c.golden == GoldenMode::off ? "off" : c.golden == GoldenMode::write ? "write" : "compare";
  j["golden_dir"] = c.golden_dir;
  return j.dump();
}

}  // namespace mixer
