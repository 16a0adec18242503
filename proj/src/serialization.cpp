#include "roughstruct/serialization.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "roughstruct/errors.hpp"

namespace roughstruct {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json tensor_json(const double* t, std::size_t n) { return json(std::vector<double>(t, t + n * n)); }

std::vector<double> read_tensor(const json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n * n) throw InvalidArgument("tensor must have n * n entries");
  std::vector<double> t;
  for (const auto& v : j) {
    if (!v.is_number()) throw InvalidArgument("tensor entries must be numbers");
    t.push_back(v.get<double>());
  }
  return t;
}

}  // namespace

json rough_path_to_json(const RoughPath& rp, const std::string& path_csv) {
  const auto& proc = rp.second();
  const std::size_t n = rp.dim();
  json j;
  j["alpha"] = rp.alpha();
  j["path_csv"] = path_csv;
  json finest = json::array();
  for (std::size_t k = 0; k < rp.grid().intervals(); ++k) finest.push_back({k, tensor_json(proc.finest(k), n)});
  j["second_order"] = std::move(finest);
  if (!proc.chen_filled()) {
    json blocks = json::array();
    for (int m = 1; m <= rp.grid().level(); ++m)
      for (std::size_t i = 0; i < (rp.grid().intervals() >> m); ++i)
        blocks.push_back({m, i, tensor_json(proc.block(m, i), n)});
    j["dyadic_blocks"] = std::move(blocks);
  }
  return j;
}

RoughPath rough_path_from_json(const json& j, const SampledPath& path) {
  try {
    const double alpha = j.at("alpha").get<double>();
    const std::size_t n = path.dim();
    const std::size_t N = path.grid().intervals();
    const auto& so = j.at("second_order");
    if (!so.is_array() || so.size() != N) throw InvalidArgument("second_order needs one tensor per interval");
    std::vector<double> finest(N * n * n, 0.0);
    std::vector<bool> seen(N, false);
    for (const auto& e : so) {
      const auto k = e.at(0).get<std::size_t>();
      if (k >= N || seen[k]) throw InvalidArgument("second_order interval index out of range or repeated");
      seen[k] = true;
      const auto t = read_tensor(e.at(1), n);
      std::copy(t.begin(), t.end(), finest.begin() + static_cast<long>(k * n * n));
    }
    if (!j.contains("dyadic_blocks"))
      return RoughPath(path, SecondOrderProcess::from_finest(path, std::move(finest), alpha));

    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> blocks;
    for (std::size_t k = 0; k < N; ++k)
      blocks[{k, k + 1}] = std::vector<double>(finest.begin() + static_cast<long>(k * n * n),
                                               finest.begin() + static_cast<long>((k + 1) * n * n));
    for (const auto& e : j.at("dyadic_blocks")) {
      const int m = e.at(0).get<int>();
      const auto i = e.at(1).get<std::size_t>();
      if (m < 1 || m > path.grid().level() || i >= (N >> m)) throw InvalidArgument("dyadic block index out of range");
      const std::size_t w = std::size_t{1} << m;
      blocks[{i * w, (i + 1) * w}] = read_tensor(e.at(2), n);
    }
    const std::size_t expected = 2 * N - 1;
    if (blocks.size() != expected) throw InvalidArgument("dyadic_blocks must cover every aligned block");
    auto proc = SecondOrderProcess::from_block_function(path, alpha, [&](std::size_t a, std::size_t b, double* out) {
      const auto& t = blocks.at({a, b});
      std::copy(t.begin(), t.end(), out);
    });
    return RoughPath(path, std::move(proc));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed rough-path JSON: ") + e.what());
  }
}

void write_rough_path(const RoughPath& rp, const std::string& json_file, const std::string& csv_file) {
  write_path_csv(rp.path(), csv_file);
  const fs::path dir = fs::absolute(json_file).parent_path();
  const std::string rel = fs::relative(fs::absolute(csv_file), dir).generic_string();
  std::ofstream out(json_file);
  if (!out) throw InvalidArgument("cannot open " + json_file + " for writing");
  out << rough_path_to_json(rp, rel).dump(1) << '\n';
}

RoughPath read_rough_path(const std::string& json_file) {
  std::ifstream in(json_file);
  if (!in) throw InvalidArgument("cannot open " + json_file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed JSON in " + json_file + ": " + e.what());
  }
  if (!j.contains("path_csv") || !j["path_csv"].is_string()) throw InvalidArgument("rough-path JSON lacks path_csv");
  fs::path csv = j["path_csv"].get<std::string>();
  if (csv.is_relative()) csv = fs::absolute(json_file).parent_path() / csv;
  return rough_path_from_json(j, read_path_csv(csv.string()));
}

json coefficients_to_json(const WaveletCoefficients& c) {
  json j;
  j["l"] = c.base_level();
  json phi = json::array();
  for (long k = c.phi.first; k <= c.phi.last(); ++k) phi.push_back({k, c.phi.at(k)});
  json psi = json::array();
  for (const auto& lev : c.psi)
    for (long k = lev.first; k <= lev.last(); ++k) psi.push_back({lev.level, k, lev.at(k)});
  j["phi"] = std::move(phi);
  j["psi"] = std::move(psi);
  return j;
}

WaveletCoefficients coefficients_from_json(const json& j) {
  try {
    WaveletCoefficients c;
    const int l = j.at("l").get<int>();
    // Entries are dense per level; indices fix the first entry.
    auto fill = [](CoefficientLevel& lev, long k, double v) {
      if (lev.values.empty()) lev.first = k;
      if (k != lev.last() + 1) throw InvalidArgument("coefficient indices must be consecutive");
      lev.values.push_back(v);
    };
    c.phi.level = l;
    for (const auto& e : j.at("phi")) fill(c.phi, e.at(0).get<long>(), e.at(1).get<double>());
    for (const auto& e : j.at("psi")) {
      const int lev = e.at(0).get<int>();
      if (lev < l) throw InvalidArgument("psi level below the base level");
      const auto q = static_cast<std::size_t>(lev - l);
      if (q > c.psi.size()) throw InvalidArgument("psi levels must be consecutive");
      if (q == c.psi.size()) c.psi.push_back(CoefficientLevel{lev, 0, {}});
      fill(c.psi[q], e.at(1).get<long>(), e.at(2).get<double>());
    }
    return c;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed coefficient JSON: ") + e.what());
  }
}

json diagnostics_to_json(const SolveDiagnostics& d) {
  json windows = json::array();
  for (const auto& w : d.windows)
    windows.push_back({{"t0", w.t0}, {"t1", w.t1}, {"iters", w.iterations}, {"ratio", w.ratio},
                       {"box_lo", w.box.lo}, {"box_hi", w.box.hi}});
  return {{"windows", windows},
          {"halvings", d.halvings},
          {"residual", d.residual},
          {"fixed_point_identity", d.fixed_point_identity}};
}

}  // namespace roughstruct
