#pragma once

// JSON Lines and TSV encodings of dataset instances.
//
// JSONL, one object per line, keys in this order:
//   {"prefix": [["obj","rev"]], "input": ["Mary","saw","a","cat"],
//    "output": "a cat Mary saw",
//    "meta": {"sent_id": "1", "mode": "step", "projective": true}}
// TSV: serialized prefix <TAB> input text <TAB> output.

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "deptx/datagen.hpp"
#include "deptx/error.hpp"

namespace deptx {

inline nlohmann::ordered_json to_json(const DatasetInstance& inst) {
  nlohmann::ordered_json prefix = nlohmann::ordered_json::array();
  for (const auto& [rel, op] : inst.prefix.pairs())
    prefix.push_back(nlohmann::ordered_json::array({rel, std::string(name(op))}));
  nlohmann::ordered_json j;
  j["prefix"] = std::move(prefix);
  j["input"] = inst.input;
  j["output"] = inst.output;
  j["meta"] = {{"sent_id", inst.sent_id},
               {"mode", std::string(to_string(inst.mode))},
               {"projective", inst.projective}};
  return j;
}

inline std::string to_jsonl_line(const DatasetInstance& inst) {
  return to_json(inst).dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

inline DatasetInstance instance_from_json(const nlohmann::json& j) {
  DatasetInstance inst;
  try {
    for (const auto& pair : j.at("prefix")) {
      if (!pair.is_array() || pair.size() != 2) throw DataError("prefix entries must be pairs");
      auto op_name = pair[1].get<std::string>();
      auto op = parse_operation(op_name);
      if (!op) throw DataError("unknown operation '" + op_name + "'");
      inst.prefix.add(pair[0].get<std::string>(), *op);
    }
    inst.input = j.at("input").get<std::vector<std::string>>();
    inst.output = j.at("output").get<std::string>();
    const auto& meta = j.at("meta");
    inst.sent_id = meta.at("sent_id").get<std::string>();
    auto mode = meta.at("mode").get<std::string>();
    if (mode == "step") inst.mode = DataMode::kStep;
    else if (mode == "simple") inst.mode = DataMode::kSimple;
    else if (mode == "depparse") inst.mode = DataMode::kDepParse;
    else throw DataError("unknown mode '" + mode + "'");
    inst.projective = meta.at("projective").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed dataset record: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  return inst;
}

inline void write_jsonl(std::ostream& out, const std::vector<DatasetInstance>& instances) {
  for (const auto& inst : instances) out << to_jsonl_line(inst) << '\n';
}

inline std::vector<DatasetInstance> read_jsonl(std::istream& in) {
  std::vector<DatasetInstance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(instance_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const DataError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return out;
}

inline std::string to_tsv_line(const DatasetInstance& inst) {
  return join(serialize_prefix(inst.prefix)) + '\t' + join(inst.input) + '\t' + inst.output;
}

inline void write_tsv(std::ostream& out, const std::vector<DatasetInstance>& instances) {
  for (const auto& inst : instances) out << to_tsv_line(inst) << '\n';
}

}  // namespace deptx
