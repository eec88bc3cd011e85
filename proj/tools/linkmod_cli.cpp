#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linkmod.h"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CLI::ValidationError("cannot write file: " + path);
  out << text;
}

struct SpecHandle {
  linkmod_spec* spec = nullptr;
  ~SpecHandle() { linkmod_spec_free(spec); }
};

struct ResultString {
  char* text = nullptr;
  ~ResultString() { linkmod_string_free(text); }
};

SpecHandle parse_spec(const std::string& path) {
  SpecHandle h;
  if (linkmod_spec_parse(read_file(path).c_str(), &h.spec) != LINKMOD_OK)
    throw CLI::ValidationError(std::string("spec: ") + linkmod_last_error());
  return h;
}

int emit(linkmod_status status, const ResultString& result,
         const std::string& out_path = "") {
  if (status != LINKMOD_OK) {
    std::cerr << "error: " << linkmod_last_error() << "\n";
    return 1;
  }
  if (out_path.empty()) {
    std::cout << result.text << "\n";
  } else {
    write_file(out_path, std::string(result.text) + "\n");
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Topology of moduli spaces of planar multipolygonal linkages"};
  app.require_subcommand(1);

  std::string spec_path, config_path, out_path, svg_path;
  bool exact = false;
  int samples = 1000, chain_index = 0, n_samples = 10000;
  double tol = 1e-8, angle = 0.0, target_d = 0.0;
  std::uint64_t seed = 0;

  auto* classify = app.add_subcommand(
      "classify", "Symbolic multiquadrilateral classification");
  classify->add_option("spec", spec_path, "spec JSON file")->required();
  classify->add_flag("--exact", exact,
                     "rational arithmetic (lengths as fraction strings)");

  auto* smoothness = app.add_subcommand(
      "smoothness", "Smoothness certificates and sampled Jacobian ranks");
  smoothness->add_option("spec", spec_path)->required();
  smoothness->add_option("--samples", samples, "on-variety sample count");
  smoothness->add_option("--tol", tol, "singular value cutoff");
  smoothness->add_option("--seed", seed, "sampler seed");

  auto* euler = app.add_subcommand(
      "euler", "Interval decomposition and Euler characteristic");
  euler->add_option("spec", spec_path)->required();
  euler->add_option("--svg", svg_path, "also write a schematic SVG");

  auto* fibers =
      app.add_subcommand("fibers", "Fiber over one vertex angle");
  fibers->add_option("spec", spec_path)->required();
  fibers->add_option("--angle", angle, "vertex angle in radians")->required();

  auto* path = app.add_subcommand(
      "path", "Slide one chain to a target end-to-end distance");
  path->add_option("spec", spec_path)->required();
  path->add_option("--chain", chain_index, "chain index")->required();
  path->add_option("--from", config_path, "start configuration JSON")
      ->required();
  path->add_option("--target-d", target_d, "target distance")->required();
  path->add_option("--out", out_path, "write the waypoint list here");

  auto* connected =
      app.add_subcommand("connected", "Connectedness certificates");
  connected->add_option("spec", spec_path)->required();

  auto* sample = app.add_subcommand(
      "sample", "Deterministic sample of the closure variety");
  sample->add_option("spec", spec_path)->required();
  sample->add_option("--n", n_samples, "sample count")->required();
  sample->add_option("--seed", seed, "seed")->required();
  sample->add_option("--out", out_path, "write the complex here");

  CLI11_PARSE(app, argc, argv);

  try {
    auto spec = parse_spec(spec_path);
    ResultString result;
    if (classify->parsed()) {
      auto status = linkmod_classify(spec.spec, exact ? 1 : 0, &result.text);
      int rc = emit(status, result);
      if (rc == 0)
        std::cout << nlohmann::json::parse(result.text)["summary"]
                         .get<std::string>()
                  << "\n";
      return rc;
    }
    if (smoothness->parsed())
      return emit(linkmod_smoothness(spec.spec, samples, tol, seed,
                                     &result.text),
                  result);
    if (euler->parsed()) {
      auto status = linkmod_euler(spec.spec, &result.text);
      int rc = emit(status, result);
      if (rc == 0 && !svg_path.empty()) {
        ResultString svg;
        if (linkmod_euler_svg(spec.spec, &svg.text) != LINKMOD_OK) {
          std::cerr << "error: " << linkmod_last_error() << "\n";
          return 1;
        }
        write_file(svg_path, svg.text);
        std::cout << "wrote " << svg_path << "\n";
      }
      return rc;
    }
    if (fibers->parsed())
      return emit(linkmod_fiber_at(spec.spec, angle, &result.text), result);
    if (path->parsed())
      return emit(linkmod_path(spec.spec, chain_index,
                               read_file(config_path).c_str(), target_d,
                               &result.text),
                  result, out_path);
    if (connected->parsed())
      return emit(linkmod_connected(spec.spec, &result.text), result);
    if (sample->parsed())
      return emit(linkmod_sample(spec.spec, n_samples, seed, &result.text),
                  result, out_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
