// Copyright (C) 2026 The intertext Authors
// SPDX-License-Identifier: Apache-2.0

#include "intertext/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "intertext/error.hpp"
#include "text_util.hpp"

namespace fs = std::filesystem;

namespace intertext {
namespace {

std::string resolve_path(const std::string& value, const std::string& base_dir) {
  if (value.empty()) return value;
  fs::path p(value);
  if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
  return p.lexically_normal().string();
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  for (auto part : detail::split(value, ',')) {
    auto t = detail::trim(part);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  auto v = detail::parse_int(detail::trim(value));
  if (!v) throw ConfigError(fmt::format("config '{}': '{}' is not an integer", key, value));
  if constexpr (std::is_unsigned_v<T>) {
    if (*v < 0) throw ConfigError(fmt::format("config '{}': must not be negative", key));
  }
  return static_cast<T>(*v);
}

std::uint64_t parse_seed(const std::string& value) {
  std::uint64_t v = 0;
  auto t = detail::trim(value);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || p != t.data() + t.size()) {
    throw ConfigError(fmt::format("config 'seed': '{}' is not an unsigned 64-bit integer", value));
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(fmt::format("config '{}': '{}' is not a boolean", key, value));
}

}  // namespace

const CorpusSpec& AnalysisConfig::corpus(const std::string& id) const {
  auto it = std::find_if(corpora.begin(), corpora.end(), [&](const CorpusSpec& c) { return c.id == id; });
  if (it == corpora.end()) throw ConfigError(fmt::format("unknown corpus '{}'", id));
  return *it;
}

void AnalysisConfig::set(const std::string& key, const std::string& value, const std::string& base_dir) {
  if (key.rfind("corpus.", 0) == 0) {
    auto dot = key.rfind('.');
    if (dot <= 7) throw ConfigError(fmt::format("config key '{}' should be corpus.<id>.<field>", key));
    auto id = key.substr(7, dot - 7);
    auto field = key.substr(dot + 1);
    if (id.find_first_of("| \t") != std::string::npos) {
      throw ConfigError(fmt::format("corpus id '{}' must not contain '|' or whitespace", id));
    }
    auto it = std::find_if(corpora.begin(), corpora.end(), [&](const CorpusSpec& c) { return c.id == id; });
    if (it == corpora.end()) {
      corpora.push_back(CorpusSpec{id, {}, {}, Provenance::original, {}});
      it = std::prev(corpora.end());
    }
    if (field == "path") {
      it->path = resolve_path(value, base_dir);
    } else if (field == "language") {
      it->language = value;
    } else if (field == "provenance") {
      it->provenance = parse_provenance(value);
    } else if (field == "versification") {
      it->versification = resolve_path(value, base_dir);
    } else {
      throw ConfigError(fmt::format("unknown corpus field '{}'", field));
    }
    return;
  }

  if (key == "testaments") testaments = resolve_path(value, base_dir);
  else if (key == "crossrefs") crossrefs = resolve_path(value, base_dir);
  else if (key == "book_aliases") book_aliases = resolve_path(value, base_dir);
  else if (key == "resolve_in") resolve_in = split_list(value);
  else if (key == "refs_file") refs_file = resolve_path(value, base_dir);
  else if (key == "threshold") threshold = parse_number<long long>(key, value);
  else if (key == "baseline_k") baseline_k = parse_number<std::size_t>(key, value);
  else if (key == "bootstrap_b") bootstrap_b = parse_number<std::size_t>(key, value);
  else if (key == "seed") seed = parse_seed(value);
  else if (key == "workers") workers = parse_number<unsigned>(key, value);
  else if (key == "embeddings") {
    embeddings.clear();
    for (const auto& p : split_list(value)) embeddings.push_back(resolve_path(p, base_dir));
  }
  else if (key == "embed_endpoint") embed_endpoint = value;
  else if (key == "embed_batch") embed_batch = parse_number<std::size_t>(key, value);
  else if (key == "embed_retries") embed_retries = parse_number<int>(key, value);
  else if (key == "embed_timeout_ms") embed_timeout_ms = parse_number<long long>(key, value);
  else if (key == "scores") scores = resolve_path(value, base_dir);
  else if (key == "out") out = resolve_path(value, base_dir);
  else if (key == "shift_source") shift_source = value;
  else if (key == "shift_target") shift_target = value;
  else if (key == "top_n") top_n = parse_number<std::size_t>(key, value);
  else if (key == "llm_endpoint") llm_endpoint = value;
  else if (key == "llm_model") llm_model = value;
  else if (key == "max_new_tokens") max_new_tokens = parse_number<int>(key, value);
  else if (key == "llm_retries") llm_retries = parse_number<int>(key, value);
  else if (key == "llm_timeout_ms") llm_timeout_ms = parse_number<long long>(key, value);
  else if (key == "translate_source") translate_source = value;
  else if (key == "translate_parallel") translate_parallel = value;
  else if (key == "translate_id") translate_id = value;
  else if (key == "translate_language") translate_language = value;
  else if (key == "source_lang_name") source_lang_name = value;
  else if (key == "target_lang_name") target_lang_name = value;
  else if (key == "per_verse_exemplars") per_verse_exemplars = parse_bool(key, value);
  else if (key == "max_in_flight") max_in_flight = parse_number<unsigned>(key, value);
  else throw ConfigError(fmt::format("unknown config key '{}'", key));
}

std::vector<std::pair<std::string, std::string>> AnalysisConfig::to_pairs() const {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& c : corpora) {
    const auto prefix = "corpus." + c.id + ".";
    pairs.emplace_back(prefix + "path", c.path);
    pairs.emplace_back(prefix + "language", c.language);
    pairs.emplace_back(prefix + "provenance", std::string(to_string(c.provenance)));
    if (!c.versification.empty()) pairs.emplace_back(prefix + "versification", c.versification);
  }
  auto put = [&](const char* key, std::string value) { pairs.emplace_back(key, std::move(value)); };
  put("testaments", testaments);
  put("crossrefs", crossrefs);
  put("book_aliases", book_aliases);
  put("resolve_in", join_list(resolve_in));
  put("refs_file", refs_file);
  put("threshold", std::to_string(threshold));
  put("baseline_k", std::to_string(baseline_k));
  put("bootstrap_b", std::to_string(bootstrap_b));
  put("seed", std::to_string(seed));
  put("workers", std::to_string(workers));
  put("embeddings", join_list(embeddings));
  put("embed_endpoint", embed_endpoint);
  put("embed_batch", std::to_string(embed_batch));
  put("embed_retries", std::to_string(embed_retries));
  put("embed_timeout_ms", std::to_string(embed_timeout_ms));
  put("scores", scores);
  put("out", out);
  put("shift_source", shift_source);
  put("shift_target", shift_target);
  put("top_n", std::to_string(top_n));
  put("llm_endpoint", llm_endpoint);
  put("llm_model", llm_model);
  put("max_new_tokens", std::to_string(max_new_tokens));
  put("llm_retries", std::to_string(llm_retries));
  put("llm_timeout_ms", std::to_string(llm_timeout_ms));
  put("translate_source", translate_source);
  put("translate_parallel", translate_parallel);
  put("translate_id", translate_id);
  put("translate_language", translate_language);
  put("source_lang_name", source_lang_name);
  put("target_lang_name", target_lang_name);
  put("per_verse_exemplars", per_verse_exemplars ? "true" : "false");
  put("max_in_flight", std::to_string(max_in_flight));
  return pairs;
}

AnalysisConfig parse_config(std::istream& in, const std::string& base_dir) {
  AnalysisConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", lineno);
    auto key = std::string(detail::trim(t.substr(0, eq)));
    auto value = std::string(detail::trim(t.substr(eq + 1)));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    try {
      config.set(key, value, base_dir);
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return config;
}

AnalysisConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  const auto text = buf.str();
  const auto base_dir = fs::absolute(fs::path(path)).parent_path().string();

  if (auto first = detail::trim(text); !first.empty() && first.front() == '{') {
    auto j = nlohmann::ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("config") || !j["config"].is_object()) {
      throw ConfigError(fmt::format("'{}' is not a run.json with a config object", path));
    }
    AnalysisConfig config;
    for (const auto& [key, value] : j["config"].items()) {
      if (!value.is_string()) throw ConfigError(fmt::format("run.json config '{}' is not a string", key));
      if (!value.get<std::string>().empty()) config.set(key, value.get<std::string>(), base_dir);
    }
    return config;
  }
  std::istringstream is(text);
  return parse_config(is, base_dir);
}

}  // namespace intertext
