#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "firefight/graph.hpp"

namespace firefight {

/// Malformed graph file. `line()` is 1-based, 0 when unknown.
class GraphParseError : public GraphError {
 public:
  GraphParseError(std::size_t line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Line of the index-th element of the array stored under `key`, found by a
/// bracket scan of the raw text. Falls back to the key's line.
inline std::size_t line_of_array_element(std::string_view text, std::string_view key,
                                         std::size_t index) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto at = text.find(quoted);
  if (at == std::string_view::npos) return 1;
  auto open = text.find('[', at);
  if (open == std::string_view::npos) return line_of_offset(text, at);
  int depth = 0;
  std::size_t seen = 0;
  bool in_element = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') {
      ++depth;
      if (depth == 2) {
        if (seen == index) return line_of_offset(text, i);
        ++seen;
      }
    } else if (c == ']') {
      if (--depth == 0) break;
    } else if (depth == 1 && c != ',' && c != ' ' && c != '\n' && c != '\t' && c != '\r') {
      if (!in_element) {
        if (seen == index) return line_of_offset(text, i);
        ++seen;
        in_element = true;
      }
      continue;
    }
    if (c == ',') in_element = false;
  }
  return line_of_offset(text, at);
}

}  // namespace detail

/// Parses `{"n": <int>, "edges": [[u,v],...], "weights": [...]}`.
inline Graph parse_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw GraphParseError(detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1),
                          e.what());
  }
  if (!doc.is_object()) throw GraphParseError(1, "graph must be a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() || doc["n"].get<long long>() < 0)
    throw GraphParseError(1, "missing or invalid \"n\"");
  const auto n = doc["n"].get<std::size_t>();

  std::vector<Edge> edges;
  if (doc.contains("edges")) {
    const auto& arr = doc["edges"];
    if (!arr.is_array())
      throw GraphParseError(detail::line_of_array_element(text, "edges", 0),
                            "\"edges\" must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& e = arr[i];
      const auto line = [&] { return detail::line_of_array_element(text, "edges", i); };
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer())
        throw GraphParseError(line(), "edge " + std::to_string(i) + " must be [u, v]");
      const auto u = e[0].get<long long>();
      const auto v = e[1].get<long long>();
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
          static_cast<std::size_t>(v) >= n)
        throw GraphParseError(line(), "edge [" + std::to_string(u) + "," + std::to_string(v) +
                                          "] out of range for n = " + std::to_string(n));
      if (u == v) throw GraphParseError(line(), "self-loop at vertex " + std::to_string(u));
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    std::vector<Edge> sorted;
    sorted.reserve(edges.size());
    for (auto [u, v] : edges) sorted.emplace_back(std::min(u, v), std::max(u, v));
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (sorted[i] == sorted[j])
          throw GraphParseError(detail::line_of_array_element(text, "edges", i),
                                "duplicate edge [" + std::to_string(sorted[i].first) + "," +
                                    std::to_string(sorted[i].second) + "]");
  }

  std::vector<Weight> weights;
  if (doc.contains("weights")) {
    const auto& arr = doc["weights"];
    if (!arr.is_array() || arr.size() != n)
      throw GraphParseError(detail::line_of_array_element(text, "weights", 0),
                            "\"weights\" must list one value per vertex");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer() || arr[i].get<long long>() < 1)
        throw GraphParseError(detail::line_of_array_element(text, "weights", i),
                              "weight " + std::to_string(i) + " must be a positive integer");
      weights.push_back(arr[i].get<Weight>());
    }
  }
  return Graph::from_edges(n, edges, std::move(weights));
}

inline std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "{\"n\": " << g.size() << ", \"edges\": [";
  bool first = true;
  for (auto [u, v] : g.edges()) {
    out << (first ? "" : ", ") << '[' << u << ", " << v << ']';
    first = false;
  }
  out << ']';
  if (!g.unit_weights()) {
    out << ", \"weights\": [";
    for (std::size_t v = 0; v < g.size(); ++v) out << (v ? ", " : "") << g.weight(v);
    out << ']';
  }
  out << "}\n";
  return out.str();
}

inline Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphParseError(0, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

inline void write_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_graph(g);
}

}  // namespace firefight
