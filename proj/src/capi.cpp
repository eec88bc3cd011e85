#include "linkmod.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkmod/fiber.hpp"
#include "linkmod/linkage.hpp"
#include "linkmod/multiquad.hpp"
#include "linkmod/path.hpp"
#include "linkmod/rational.hpp"
#include "linkmod/sampler.hpp"
#include "linkmod/smoothness.hpp"

using nlohmann::json;

struct linkmod_spec {
  linkmod::MultipolygonSpec spec;
  // Length tokens as written in the file; fraction strings enable the exact
  // classification mode.
  std::vector<std::vector<std::string>> raw;
  bool all_fractions = false;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

linkmod_status fail(linkmod_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
linkmod_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LINKMOD_OK;
  } catch (const json::exception& e) {
    return fail(LINKMOD_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LINKMOD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(LINKMOD_ERR_RUNTIME, e.what());
  }
}

const linkmod_spec& deref(const linkmod_spec* spec) {
  if (!spec) throw std::invalid_argument("null spec handle");
  return *spec;
}

void require_multiquad_shape(const linkmod::MultipolygonSpec& spec) {
  if (spec.chain_count() != 3)
    throw std::invalid_argument("operation needs three chains");
  if (spec.chain(0).edge_count() != 2)
    throw std::invalid_argument("operation needs a two-edge first chain");
}

}  // namespace

extern "C" {

linkmod_status linkmod_spec_parse(const char* text, linkmod_spec** out) {
  return guarded([&] {
    if (!text || !out) throw std::invalid_argument("null argument");
    json j = json::parse(text);
    if (!j.is_object() || !j.contains("chains") || !j["chains"].is_array())
      throw std::invalid_argument("spec must be { \"chains\": [[...], ...] }");
    auto parsed = std::make_unique<linkmod_spec>(linkmod_spec{
        linkmod::MultipolygonSpec({linkmod::FreeLinkageSpec({1.0}),
                                   linkmod::FreeLinkageSpec({1.0})}),
        {},
        true});
    std::vector<linkmod::FreeLinkageSpec> chains;
    for (const auto& jc : j["chains"]) {
      if (!jc.is_array()) throw std::invalid_argument("chain must be an array");
      std::vector<double> lengths;
      std::vector<std::string> tokens;
      for (const auto& v : jc) {
        if (v.is_number()) {
          lengths.push_back(v.get<double>());
          tokens.push_back("");
          parsed->all_fractions = false;
        } else if (v.is_string()) {
          auto s = v.get<std::string>();
          lengths.push_back(linkmod::Rational::parse(s).to_double());
          tokens.push_back(s);
        } else {
          throw std::invalid_argument(
              "length must be a number or a fraction string");
        }
      }
      chains.emplace_back(std::move(lengths));
      parsed->raw.push_back(std::move(tokens));
    }
    parsed->spec = linkmod::MultipolygonSpec(std::move(chains));
    *out = parsed.release();
  });
}

void linkmod_spec_free(linkmod_spec* spec) { delete spec; }

linkmod_status linkmod_classify(const linkmod_spec* spec, int exact_mode,
                                char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json) throw std::invalid_argument("null output argument");
    require_multiquad_shape(s.spec);
    for (int i = 0; i < 3; ++i)
      if (s.spec.chain(i).edge_count() != 2)
        throw std::invalid_argument("classification needs 2-edge chains");
    linkmod::ClassificationResult result;
    if (exact_mode) {
      if (!s.all_fractions)
        throw std::invalid_argument(
            "exact mode needs every length given as a fraction string");
      std::vector<linkmod::Rational> q;
      for (const auto& chain : s.raw)
        for (const auto& tok : chain) q.push_back(linkmod::Rational::parse(tok));
      result = linkmod::classify_exact(q[0], q[1], q[2], q[3], q[4], q[5]);
    } else {
      result = linkmod::classify(linkmod::MultiquadSpec::from_spec(s.spec));
    }
    json j = json::parse(linkmod::classification_to_json(result));
    j["summary"] = linkmod::classification_summary(result);
    j["exact"] = exact_mode != 0;
    *out_json = dup_string(j.dump());
  });
}

linkmod_status linkmod_smoothness(const linkmod_spec* spec, int samples,
                                  double tol, uint64_t seed, char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json) throw std::invalid_argument("null output argument");
    require_multiquad_shape(s.spec);
    if (samples < 0) throw std::invalid_argument("samples must be >= 0");
    double a = s.spec.chain(0).lengths()[0];
    double b = s.spec.chain(0).lengths()[1];
    auto report =
        linkmod::check_nointsmooth(a, b, s.spec.chain(1), s.spec.chain(2));
    json j = json::parse(linkmod::smoothness_report_to_json(report));
    j["samples"] = samples;
    j["tol"] = tol;
    j["seed"] = seed;
    if (samples > 0) {
      auto complex = linkmod::sample_variety(s.spec, samples, seed);
      int min_rank = -1;
      for (const auto& p : complex.points) {
        auto cfg = linkmod::Configuration::from_free_angles(s.spec, p);
        auto jac = linkmod::jacobian(s.spec, cfg);
        int rank = linkmod::numeric_rank(jac.assembled, tol);
        if (min_rank < 0 || rank < min_rank) min_rank = rank;
      }
      j["sampled_points"] = complex.points.size();
      j["min_observed_rank"] = min_rank;
      j["empty_variety"] = complex.empty_variety;
    }
    *out_json = dup_string(j.dump());
  });
}

linkmod_status linkmod_euler(const linkmod_spec* spec, char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json) throw std::invalid_argument("null output argument");
    auto dec = linkmod::euler_characteristic(s.spec);
    json j = json::parse(linkmod::decomposition_to_json(dec));
    if (auto cert = linkmod::product_structure(s.spec)) {
      j["product_certificate"] = {{"description", cert->description},
                                  {"components", cert->components},
                                  {"chi", cert->chi}};
    }
    *out_json = dup_string(j.dump());
  });
}

linkmod_status linkmod_fiber_at(const linkmod_spec* spec, double angle,
                                char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json) throw std::invalid_argument("null output argument");
    if (!std::isfinite(angle))
      throw std::invalid_argument("angle must be finite");
    auto f = linkmod::fiber_over_angle(s.spec, linkmod::wrap_angle(angle));
    json j = json::parse(linkmod::fiber_descriptor_to_json(f));
    j["angle"] = linkmod::wrap_angle(angle);
    *out_json = dup_string(j.dump());
  });
}

linkmod_status linkmod_euler_svg(const linkmod_spec* spec, char** out_svg) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_svg) throw std::invalid_argument("null output argument");
    auto dec = linkmod::euler_characteristic(s.spec);

    const double cx = 260, cy = 260, r = 170;
    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" "
        "height=\"520\" viewBox=\"0 0 520 520\">\n"
        "<circle cx=\"260\" cy=\"260\" r=\"170\" fill=\"none\" "
        "stroke=\"black\"/>\n";
    auto point = [&](double gamma, double radius, double& x, double& y) {
      x = cx + radius * std::cos(gamma);
      y = cy - radius * std::sin(gamma);
    };
    for (const auto& df : dec.degenerate_fibers) {
      double x0, y0, x1, y1, xt, yt;
      point(df.angle, r - 10, x0, y0);
      point(df.angle, r + 10, x1, y1);
      point(df.angle, r + 38, xt, yt);
      svg += "<line x1=\"" + std::to_string(x0) + "\" y1=\"" +
             std::to_string(y0) + "\" x2=\"" + std::to_string(x1) +
             "\" y2=\"" + std::to_string(y1) + "\" stroke=\"red\"/>\n";
      svg += "<text x=\"" + std::to_string(xt) + "\" y=\"" +
             std::to_string(yt) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + df.fiber.label +
             " (chi " + std::to_string(df.fiber.chi) + ")</text>\n";
    }
    for (const auto& iv : dec.interval_fibers) {
      double hi = iv.hi >= iv.lo ? iv.hi : iv.hi + linkmod::kTwoPi;
      double mid = 0.5 * (iv.lo + hi);
      double xt, yt;
      point(mid, r - 48, xt, yt);
      svg += "<text x=\"" + std::to_string(xt) + "\" y=\"" +
             std::to_string(yt) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + iv.fiber.label +
             "</text>\n";
    }
    svg += "<text x=\"260\" y=\"264\" font-size=\"14\" "
           "text-anchor=\"middle\">total chi " +
           std::to_string(dec.total_chi) + "</text>\n</svg>\n";
    *out_svg = dup_string(svg);
  });
}

linkmod_status linkmod_path(const linkmod_spec* spec, int chain_index,
                            const char* config_json, double target_distance,
                            char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json || !config_json)
      throw std::invalid_argument("null argument");
    if (chain_index < 0 ||
        static_cast<std::size_t>(chain_index) >= s.spec.chain_count())
      throw std::invalid_argument("chain index out of range");
    auto config = linkmod::config_from_json(s.spec, config_json);
    auto result =
        linkmod::slide_path(s.spec.chain(chain_index),
                            config.angles()[chain_index], target_distance);
    json j = json::parse(linkmod::path_result_to_json(result));
    j["chain"] = chain_index;
    *out_json = dup_string(j.dump());
  });
}

linkmod_status linkmod_connected(const linkmod_spec* spec, char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json) throw std::invalid_argument("null output argument");
    auto report = linkmod::connected_multipolygon(s.spec);
    json j = json::parse(linkmod::connectedness_to_json(report));
    j["km_pairs"] = json::array();
    for (std::size_t i = 0; i < s.spec.chain_count(); ++i) {
      for (std::size_t k = i + 1; k < s.spec.chain_count(); ++k) {
        std::vector<double> edges = s.spec.chain(i).lengths();
        const auto& lk = s.spec.chain(k).lengths();
        edges.insert(edges.end(), lk.begin(), lk.end());
        if (edges.size() < 3) continue;
        bool disc = linkmod::km_disconnected(linkmod::FreeLinkageSpec(edges));
        j["km_pairs"].push_back(
            {{"chains", {i, k}}, {"disconnected", disc}});
      }
    }
    *out_json = dup_string(j.dump());
  });
}

linkmod_status linkmod_sample(const linkmod_spec* spec, int n_samples,
                              uint64_t seed, char** out_json) {
  return guarded([&] {
    const auto& s = deref(spec);
    if (!out_json) throw std::invalid_argument("null output argument");
    auto complex = linkmod::sample_variety(s.spec, n_samples, seed);
    json j = json::parse(linkmod::complex_to_json(complex));
    j["components"] = linkmod::component_count(complex);
    *out_json = dup_string(j.dump());
  });
}

const char* linkmod_last_error(void) { return g_last_error.c_str(); }

void linkmod_string_free(char* s) { delete[] s; }

}  // extern "C"
