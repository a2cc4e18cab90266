#include "tcrrgu/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tcrrgu {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError("instance parse error at " + path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

double number_at(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int int_at(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string string_at(const json& obj, const std::string& path, const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Eigen::VectorXd vector_at(const json& obj, const std::string& path,
                          const char* key) {
  const json& v = member(obj, path, key);
  if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
  Eigen::VectorXd out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      fail(path + "." + key + "[" + std::to_string(i + 1) + "]",
           "expected a number");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

std::string indexed(const char* array, size_t i) {
  return std::string(array) + "[" + std::to_string(i + 1) + "]";
}

}  // namespace

Instance parse_instance(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("instance parse error: not valid JSON");
  if (!doc.is_object()) fail("$", "expected a top-level object");

  Instance instance;

  const json& nodes = member(doc, "$", "nodes");
  if (!nodes.is_array()) fail("nodes", "expected an array");
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = indexed("nodes", i);
    const json& jn = nodes[i];
    Node node;
    node.index = int_at(jn, path, "id");
    node.name = string_at(jn, path, "name");
    const json& demand = member(jn, path, "demand");
    if (!demand.is_array() || demand.empty())
      fail(path + ".demand", "expected a non-empty array of steps");
    Eigen::VectorXd prices(demand.size()), quantities(demand.size());
    for (size_t w = 0; w < demand.size(); ++w) {
      const std::string step_path = path + "." + indexed("demand", w);
      prices[static_cast<Eigen::Index>(w)] = number_at(demand[w], step_path, "price");
      quantities[static_cast<Eigen::Index>(w)] =
          number_at(demand[w], step_path, "quantity");
    }
    node.demand = DemandCurve(std::move(prices), std::move(quantities));
    instance.network.nodes.push_back(std::move(node));
  }

  const json& edges = member(doc, "$", "edges");
  if (!edges.is_array()) fail("edges", "expected an array");
  for (size_t j = 0; j < edges.size(); ++j) {
    const std::string path = indexed("edges", j);
    const json& je = edges[j];
    Edge edge;
    edge.index = int_at(je, path, "id");
    edge.from = int_at(je, path, "from");
    edge.to = int_at(je, path, "to");
    edge.cap_neg = number_at(je, path, "cap_neg");
    edge.cap_pos = number_at(je, path, "cap_pos");
    instance.network.edges.push_back(edge);
  }

  const json& scenarios = member(doc, "$", "scenarios");
  if (!scenarios.is_array()) fail("scenarios", "expected an array");
  for (size_t s = 0; s < scenarios.size(); ++s) {
    const std::string path = indexed("scenarios", s);
    const json& js = scenarios[s];
    Scenario sc;
    sc.index = int_at(js, path, "id");
    sc.probability = number_at(js, path, "probability");
    sc.resources = vector_at(js, path, "resources");
    sc.cap_neg = vector_at(js, path, "cap_neg");
    sc.cap_pos = vector_at(js, path, "cap_pos");
    instance.scenarios.push_back(std::move(sc));
  }

  const json& alpha = member(doc, "$", "alpha");
  if (!alpha.is_number()) fail("alpha", "expected a number");
  instance.alpha = alpha.get<double>();

  return instance;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read instance file: " + path);

  Instance instance = parse_instance(buffer.str());
  validate_or_throw(instance);
  return instance;
}

}  // namespace tcrrgu
