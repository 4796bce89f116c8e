#include "mixer/mixer.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "mixer/characters.hpp"
#include "mixer/error.hpp"
#include "mixer/mixing.hpp"
#include "mixer/parallel.hpp"
#include "mixer/run.hpp"
#include "mixer/spec.hpp"

struct mixer_group {
  mixer::GroupData data;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
int guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return MIXER_OK;
  } catch (const mixer::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MIXER_E_CAP_EXCEEDED;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MIXER_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) mixer::fail(mixer::Errc::invalid_argument, what);
}

}  // namespace

extern "C" {

const char* mixer_version(void) { return "1.0.0"; }

const char* mixer_status_name(int status) {
  if (status < 0 || status > static_cast<int>(mixer::Errc::no_representation)) return "unknown";
  return mixer::errc_name(static_cast<mixer::Errc>(status));
}

const char* mixer_last_error(void) { return g_last_error.c_str(); }

void mixer_string_free(char* s) { std::free(s); }

void mixer_set_threads(unsigned threads) { mixer::set_thread_count(threads); }

int mixer_run(const char* config_json, char** report_json, char** report_csv) {
  return guarded([&] {
    require(config_json != nullptr, "null config");
    const auto out = mixer::run(mixer::run_config_from_json(config_json));
    if (report_json != nullptr) *report_json = dup(out.json);
    if (report_csv != nullptr) *report_csv = dup(out.csv);
  });
}

int mixer_golden_name(const char* config_json, char** name) {
  return guarded([&] {
    require(config_json != nullptr && name != nullptr, "null argument");
    *name = dup(mixer::golden_file_name(mixer::run_config_from_json(config_json)));
  });
}

int mixer_group_create(const char* spec, uint64_t max_order, mixer_group** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    const auto parsed = mixer::parse_spec(spec, max_order == 0 ? mixer::default_max_order() : max_order);
    *out = new mixer_group{mixer::build_group_data(parsed)};
  });
}

void mixer_group_destroy(mixer_group* g) { delete g; }

uint64_t mixer_group_order(const mixer_group* g) { return g == nullptr ? 0 : g->data.group.order(); }

size_t mixer_group_class_count(const mixer_group* g) { return g == nullptr ? 0 : g->data.classes.count(); }

int mixer_group_degrees(const mixer_group* g, uint64_t* out, size_t capacity) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    const auto& d = g->data.table.degrees;
    require(capacity >= d.size(), "degree buffer too small");
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i];
  });
}

int mixer_group_zeta(const mixer_group* g, double s, double* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = mixer::witten_zeta(g->data.table, s);
  });
}

int mixer_group_l2_sq(const mixer_group* g, size_t x_class, size_t y_class, double* out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    const auto k = g->data.classes.count();
    require(x_class < k && y_class < k, "class index out of range");
    *out = mixer::l2_sq_char(static_cast<std::uint32_t>(x_class), static_cast<std::uint32_t>(y_class), g->data.table);
  });
}

int mixer_group_chartable_json(const mixer_group* g, char** out) {
  return guarded([&] {
    require(g != nullptr && out != nullptr, "null argument");
    const auto& t = g->data.table;
    nlohmann::json j;
    j["schema_version"] = mixer::kSchemaVersion;
    j["group"] = g->data.group.spec().label();
    j["order"] = t.order;
    j["class_sizes"] = t.class_sizes;
    j["degrees"] = t.degrees;
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t i = 0; i < t.count(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t l = 0; l < t.count(); ++l) row.push_back({t.value(i, l).real(), t.value(i, l).imag()});
      values.push_back(row);
    }
    j["values"] = values;
    j["residuals"] = {{"row", t.row_residual}, {"column", t.column_residual}};
    *out = dup(j.dump());
  });
}

}  // extern "C"
