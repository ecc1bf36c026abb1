#include "ergocube/system_io.hpp"

#include <fstream>
#include <sstream>

namespace ergocube {

namespace {

Permutation permutation_field(const nlohmann::json& doc, const char* name, std::size_t n) {
  if (!doc.contains(name) || !doc[name].is_array())
    throw ValidationError(std::string("missing field: ") + name + " (array permutation)");
  std::vector<std::size_t> image;
  for (const auto& v : doc[name]) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ValidationError(std::string("bad permutation: ") + name + " entries must be non-negative integers");
    image.push_back(v.get<std::size_t>());
  }
  if (image.size() != n)
    throw ValidationError(std::string("bad permutation: ") + name + " has " + std::to_string(image.size()) +
                          " entries, n = " + std::to_string(n));
  try {
    return Permutation(std::move(image));
  } catch (const ValidationError&) {
    throw ValidationError(std::string("bad permutation: ") + name + " is not a bijection");
  }
}

}  // namespace

FiniteMPS system_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("system document must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() <= 0)
    throw ValidationError("missing field: n (positive integer)");
  const auto n = doc["n"].get<std::size_t>();
  if (!doc.contains("weights") || !doc["weights"].is_array())
    throw ValidationError("missing field: weights (array of \"p/q\" strings)");
  std::vector<Rational> weights;
  for (const auto& w : doc["weights"]) {
    if (!w.is_string()) throw ValidationError("bad weights: entries must be \"p/q\" strings");
    weights.push_back(parse_rational(w.get<std::string>()));
  }
  if (weights.size() != n)
    throw ValidationError("bad weights: " + std::to_string(weights.size()) + " weights, n = " + std::to_string(n));
  auto s = permutation_field(doc, "S", n);
  auto t = permutation_field(doc, "T", n);
  return FiniteMPS(std::move(weights), std::move(s), std::move(t));
}

nlohmann::json system_to_json(const FiniteMPS& sys) {
  nlohmann::json doc;
  doc["n"] = sys.size();
  auto& weights = doc["weights"] = nlohmann::json::array();
  for (const auto& w : sys.weights()) weights.push_back(format_rational(w));
  doc["S"] = sys.s().image();
  doc["T"] = sys.t().image();
  return doc;
}

FiniteMPS read_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed system file " + path.string() + ": " + e.what());
  }
  return system_from_json(doc);
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ergocube
