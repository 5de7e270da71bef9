#include "raycensus/raycensus.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "address.hpp"
#include "error.hpp"
#include "map_model.hpp"
#include "rays.hpp"
#include "regions.hpp"
#include "runner.hpp"

struct rc_map {
  raycensus::MapModel model;
};

struct rc_graph {
  raycensus::RayGraph graph;
};

namespace {

thread_local std::string last_error;

rc_status to_status(raycensus::ErrorCode code) {
  using raycensus::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return RC_INVALID_ARGUMENT;
    case ErrorCode::parse: return RC_PARSE_ERROR;
    case ErrorCode::singular_hit: return RC_SINGULAR_HIT;
    case ErrorCode::on_arc: return RC_ON_ARC;
    case ErrorCode::precondition: return RC_PRECONDITION;
    case ErrorCode::numeric: return RC_NUMERIC;
  }
  return RC_INTERNAL;
}

template <class Fn>
rc_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const raycensus::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RC_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RC_INTERNAL;
  }
}

rc_status null_argument() {
  last_error = "null argument";
  return RC_INVALID_ARGUMENT;
}

raycensus::Complex from_c(rc_complex z) { return {z.re, z.im}; }
rc_complex to_c(raycensus::Complex z) { return {z.real(), z.imag()}; }

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* rc_version(void) { return "1.0.0"; }

const char* rc_last_error(void) { return last_error.c_str(); }

rc_status rc_map_create(rc_complex c, double radius, rc_map** out) {
  if (!out) return null_argument();
  return guarded([&] {
    std::optional<double> r;
    if (radius > 0) r = radius;
    *out = new rc_map{raycensus::MapModel::exponential(from_c(c), r)};
    return RC_OK;
  });
}

void rc_map_destroy(rc_map* map) { delete map; }

rc_status rc_map_radius(const rc_map* map, double* out) {
  if (!map || !out) return null_argument();
  *out = map->model.radius();
  return RC_OK;
}

rc_status rc_evaluate(const rc_map* map, rc_complex z, rc_complex* out) {
  if (!map || !out) return null_argument();
  auto w = map->model.evaluate(from_c(z));
  if (!w) {
    last_error = "evaluation escaped to infinity";
    return RC_ESCAPED;
  }
  *out = to_c(*w);
  return RC_OK;
}

rc_status rc_inverse_branch(const rc_map* map, rc_complex w, int64_t label, rc_complex* out,
                            int* on_cut) {
  if (!map || !out) return null_argument();
  return guarded([&] {
    bool cut = false;
    *out = to_c(map->model.inverse_branch(from_c(w), raycensus::DomainLabel(label), &cut));
    if (on_cut) *on_cut = cut ? 1 : 0;
    return RC_OK;
  });
}

rc_status rc_fundamental_domain(const rc_map* map, rc_complex z, int* has_label,
                                int64_t* label) {
  if (!map || !has_label || !label) return null_argument();
  auto k = map->model.fundamental_domain_of(from_c(z));
  *has_label = k ? 1 : 0;
  *label = k ? k->k : 0;
  return RC_OK;
}

rc_status rc_address_canonical(const char* text, char* buf, size_t size, size_t* needed) {
  if (!text) return null_argument();
  return guarded([&] {
    std::string s = raycensus::InfiniteAddress::parse(text).to_string();
    if (needed) *needed = s.size() + 1;
    if (buf && size > 0) {
      std::size_t n = std::min(size - 1, s.size());
      std::memcpy(buf, s.data(), n);
      buf[n] = '\0';
      if (n < s.size()) {
        last_error = "buffer too small";
        return RC_INVALID_ARGUMENT;
      }
    }
    return RC_OK;
  });
}

rc_status rc_landing_point(const rc_map* map, const char* address, double tol, int max_iter,
                           rc_landing* out) {
  if (!map || !address || !out) return null_argument();
  return guarded([&] {
    raycensus::LandingOptions options;
    if (tol > 0) options.tol = tol;
    if (max_iter > 0) options.max_iter = max_iter;
    auto r = raycensus::landing_point(map->model, raycensus::InfiniteAddress::parse(address),
                                      options);
    out->status = static_cast<rc_landing_status>(static_cast<int>(r.status));
    out->point = to_c(r.point);
    out->psi_derivative = to_c(r.psi_derivative);
    out->iterations = r.iterations;
    return RC_OK;
  });
}

rc_status rc_graph_build(const rc_map* map, int p, int window, int depth, const double box[4],
                         int probe_grid, rc_graph** out) {
  if (!map || !out) return null_argument();
  return guarded([&] {
    raycensus::RayGraphOptions options;
    if (box) options.region_box = raycensus::Box{box[0], box[1], box[2], box[3]};
    options.probe_grid = probe_grid;
    *out = new rc_graph{raycensus::build_ray_graph(map->model, p, window, depth, options)};
    return RC_OK;
  });
}

void rc_graph_destroy(rc_graph* graph) { delete graph; }

rc_status rc_graph_arc_count(const rc_graph* graph, size_t* out) {
  if (!graph || !out) return null_argument();
  *out = graph->graph.arcs().size();
  return RC_OK;
}

rc_status rc_graph_region_of(const rc_graph* graph, rc_complex z, uint64_t* region) {
  if (!graph || !region) return null_argument();
  return guarded([&] {
    *region = raycensus::basic_region_of(graph->graph, from_c(z));
    return RC_OK;
  });
}

rc_status rc_run(const char* request_json, char** out, char** diagnostics, int* exit_code) {
  if (!request_json || !out || !exit_code) return null_argument();
  return guarded([&] {
    raycensus::RunResult result = raycensus::run_request(request_json);
    std::string diag;
    for (const auto& d : result.diagnostics) diag += d + "\n";
    *out = duplicate(result.output);
    if (diagnostics) *diagnostics = duplicate(diag);
    *exit_code = result.exit_code;
    return RC_OK;
  });
}

void rc_free(void* p) { std::free(p); }

}  // extern "C"
