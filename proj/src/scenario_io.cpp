#include "hisched/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hisched {

using nlohmann::json;

namespace {

std::string where(std::string_view source, std::string_view path) {
  return std::string(source) + ": " + std::string(path);
}

double number_at(const json& obj, const char* key, const std::string& path) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ScenarioError(path + "." + key + ": expected a number");
  return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  return number_at(obj, key, path);
}

UeConfig parse_ue(const json& entry, const std::string& path) {
  static const std::set<std::string> kKeys = {"id", "class", "q", "p", "rho", "beta", "alpha"};
  if (!entry.is_object()) throw ScenarioError(path + ": expected an object");
  for (const auto& [key, _] : entry.items()) {
    if (!kKeys.count(key)) throw ScenarioError(path + ": unknown key '" + key + "'");
  }
  for (const char* key : {"id", "class", "p"}) {
    if (!entry.contains(key)) throw ScenarioError(path + ": missing required key '" + key + "'");
  }
  UeConfig ue;
  const auto& id = entry.at("id");
  if (!id.is_number_integer()) throw ScenarioError(path + ".id: expected an integer");
  ue.id = id.get<int>();
  const auto& cls = entry.at("class");
  if (!cls.is_string()) throw ScenarioError(path + ".class: expected a string");
  try {
    ue.ue_class = parse_ue_class(cls.get<std::string>());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path + ".class: " + e.what());
  }
  ue.p = number_at(entry, "p", path);
  ue.q = optional_number(entry, "q", path);
  ue.rho = optional_number(entry, "rho", path);
  ue.beta = optional_number(entry, "beta", path);
  ue.alpha = optional_number(entry, "alpha", path);
  return ue;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string(source) + ": " + e.what());
  }
  if (!doc.is_object()) throw ScenarioError(std::string(source) + ": top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "variant" && key != "ue") {
      throw ScenarioError(where(source, key) + ": unknown key");
    }
  }
  if (!doc.contains("variant")) throw ScenarioError(std::string(source) + ": missing 'variant'");
  if (!doc.contains("ue")) throw ScenarioError(std::string(source) + ": missing 'ue' list");
  if (!doc["variant"].is_string()) throw ScenarioError(where(source, "variant") + ": expected a string");
  if (!doc["ue"].is_array()) throw ScenarioError(where(source, "ue") + ": expected a list");

  ProblemVariant variant;
  try {
    variant = parse_variant(doc["variant"].get<std::string>());
  } catch (const ScenarioError& e) {
    throw ScenarioError(where(source, "variant") + ": " + e.what());
  }

  std::vector<UeConfig> ues;
  const auto& list = doc["ue"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    ues.push_back(parse_ue(list[i], where(source, "ue[" + std::to_string(i) + "]")));
  }
  try {
    return Scenario(std::move(ues), variant);
  } catch (const ScenarioError& e) {
    throw ScenarioError(std::string(source) + ": " + e.what());
  }
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

std::string emit_scenario(const Scenario& scenario) {
  json doc;
  doc["variant"] = std::string(to_string(scenario.variant()));
  json list = json::array();
  for (const auto& ue : scenario.ues()) {
    json e;
    e["id"] = ue.id;
    e["class"] = std::string(to_string(ue.ue_class));
    if (ue.q) e["q"] = *ue.q;
    e["p"] = ue.p;
    if (ue.rho) e["rho"] = *ue.rho;
    if (ue.beta) e["beta"] = *ue.beta;
    if (ue.alpha) e["alpha"] = *ue.alpha;
    list.push_back(std::move(e));
  }
  doc["ue"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace hisched
