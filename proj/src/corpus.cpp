#include "cmsa/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "cmsa/rng.hpp"

namespace cmsa {

using nlohmann::json;

namespace {

json parse_json(const std::string& raw) {
  try {
    return json::parse(raw);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Dataset parse_corpus(const std::string& raw) {
  const json doc = parse_json(raw);
  if (!doc.is_array()) {
    throw ParseError("corpus root must be an array of objects");
  }

  Dataset ds;
  ds.samples.reserve(doc.size());
  std::unordered_set<long long> ids;
  std::size_t position = 0;
  for (const json& obj : doc) {
    if (!obj.is_object()) {
      throw ParseError("corpus entry " + std::to_string(position) +
                       " is not an object");
    }
    Sample sample;

    auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_number_integer()) {
      throw ParseError("corpus entry " + std::to_string(position) +
                       " lacks an integer id");
    }
    sample.id = id_it->get<long long>();
    if (!ids.insert(sample.id).second) {
      throw DuplicateIdError("duplicate id " + std::to_string(sample.id), sample.id);
    }

    auto text_it = obj.find("text");
    if (text_it == obj.end() || !text_it->is_string()) {
      throw ParseError("corpus entry with id " + std::to_string(sample.id) +
                       " lacks a string text field");
    }
    sample.text = text_it->get<std::string>();

    auto tagged_it = obj.find("lang_tagged_text");
    if (tagged_it != obj.end()) {
      if (!tagged_it->is_string()) {
        throw ParseError("lang_tagged_text of id " + std::to_string(sample.id) +
                         " is not a string");
      }
      sample.lang_tagged_text = tagged_it->get<std::string>();
    }

    auto label_it = obj.find("sentiment");
    if (label_it != obj.end()) {
      if (!label_it->is_number_integer()) {
        throw LabelError("sentiment of id " + std::to_string(sample.id) +
                             " is not an integer",
                         sample.id);
      }
      sample.label = sentiment_from_int(label_it->get<long long>(), sample.id);
    }

    ds.samples.push_back(std::move(sample));
    ++position;
  }
  return ds;
}

Dataset parse_corpus_file(const std::string& path) {
  return parse_corpus(read_file(path));
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_ratio,
                                          std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw SplitError("train_ratio must lie strictly between 0 and 1");
  }
  const std::size_t n = ds.samples.size();
  const std::size_t n_train = static_cast<std::size_t>(
      std::floor(train_ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw SplitError("split would leave an empty side: " + std::to_string(n_train) +
                     "/" + std::to_string(n - n_train));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  Dataset train, dev;
  train.language_pair = ds.language_pair;
  dev.language_pair = ds.language_pair;
  train.samples.reserve(n_train);
  dev.samples.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_train ? train : dev).samples.push_back(ds.samples[order[i]]);
  }
  return {std::move(train), std::move(dev)};
}

std::string write_predictions(const std::vector<long long>& ids,
                              const std::vector<Sentiment>& labels) {
  if (ids.size() != labels.size()) {
    throw ArityError("ids and labels differ in length: " + std::to_string(ids.size()) +
                     " vs " + std::to_string(labels.size()));
  }
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ',';
    out += "{\"id\":";
    out += std::to_string(ids[i]);
    out += ",\"sentiment\":";
    out += std::to_string(to_int(labels[i]));
    out += '}';
  }
  out += ']';
  return out;
}

std::vector<std::pair<long long, long long>> parse_predictions(const std::string& raw) {
  const json doc = parse_json(raw);
  if (!doc.is_array()) {
    throw ParseError("prediction root must be an array of objects");
  }
  std::vector<std::pair<long long, long long>> out;
  out.reserve(doc.size());
  std::size_t position = 0;
  for (const json& obj : doc) {
    if (!obj.is_object()) {
      throw ParseError("prediction entry " + std::to_string(position) +
                       " is not an object");
    }
    auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_number_integer()) {
      throw ParseError("prediction entry " + std::to_string(position) +
                       " lacks an integer id");
    }
    auto s_it = obj.find("sentiment");
    if (s_it == obj.end() || !s_it->is_number_integer()) {
      throw ParseError("prediction entry " + std::to_string(position) +
                       " lacks an integer sentiment");
    }
    out.emplace_back(id_it->get<long long>(), s_it->get<long long>());
    ++position;
  }
  return out;
}

std::string ValidationReport::to_string() const {
  auto line = [](const char* name, const std::vector<long long>& ids) {
    std::string s = name;
    s += ": ";
    if (ids.empty()) {
      s += "none";
    } else {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) s += ", ";
        s += std::to_string(ids[i]);
      }
    }
    s += '\n';
    return s;
  };
  std::string s = valid() ? "predictions valid\n" : "predictions INVALID\n";
  s += line("  missing ids", missing);
  s += line("  extra ids", extra);
  s += line("  duplicate ids", duplicates);
  s += line("  out-of-range sentiments", out_of_range);
  return s;
}

ValidationReport validate_predictions(const std::vector<long long>& test_ids,
                                      const std::string& raw) {
  const auto preds = parse_predictions(raw);

  std::unordered_set<long long> expected(test_ids.begin(), test_ids.end());
  std::unordered_map<long long, std::size_t> seen;
  std::unordered_set<long long> bad_value;
  for (const auto& [id, value] : preds) {
    ++seen[id];
    if (value < -1 || value > 1) bad_value.insert(id);
  }

  ValidationReport report;
  for (long long id : expected) {
    if (!seen.count(id)) report.missing.push_back(id);
  }
  for (const auto& [id, count] : seen) {
    if (!expected.count(id)) report.extra.push_back(id);
    if (count > 1) report.duplicates.push_back(id);
  }
  report.out_of_range.assign(bad_value.begin(), bad_value.end());

  std::sort(report.missing.begin(), report.missing.end());
  std::sort(report.extra.begin(), report.extra.end());
  std::sort(report.duplicates.begin(), report.duplicates.end());
  std::sort(report.out_of_range.begin(), report.out_of_range.end());
  return report;
}

}  // namespace cmsa
