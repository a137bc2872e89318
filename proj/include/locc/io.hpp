// Copyright 2026 The locc-toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON and CSV serialization.
//
// Wire formats:
//   matrix      row-major array of rows, each entry a [re, im] pair
//   instrument  {"party_dims": [...], "labels": [...], "maps": [...]}
//               where maps[i] is the Kraus list of map i (possibly empty)
//   protocol    {"party_dims": [...], "root": <node>, "coarse_grain": {...}}
//               node = {"party": k, "branches": [...], "children": {...}}
//               branch = {"label": s, "kraus": <matrix>,
//                         "conditionals": {"<party>": <matrix>}}
//   state       {"party_dims": [...], "matrix": <matrix>}
//
// Parsing validates structure and throws std::invalid_argument on any
// malformed input. Round trips are value-exact for finite entries: the
// serializer emits shortest-round-trip decimals.

#ifndef LOCC_IO_HPP
#define LOCC_IO_HPP

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "locc/instrument.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"
#include "locc/protocol.hpp"

namespace locc {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Matrices

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("matrix: expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw std::invalid_argument("matrix: rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        throw std::invalid_argument("matrix: entries must be [re, im] pairs");
      m(r, c) = complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

namespace detail {

inline std::vector<std::size_t> dims_from_json(const json& j,
                                               const char* what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(std::string(what) +
                                ": expected a nonempty array");
  std::vector<std::size_t> dims;
  for (const json& e : j) {
    if (!e.is_number_unsigned() || e.get<std::size_t>() == 0)
      throw std::invalid_argument(std::string(what) +
                                  ": dimensions must be positive integers");
    dims.push_back(e.get<std::size_t>());
  }
  return dims;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Instruments
//
// The instrument format carries one dimension list, so it covers maps whose
// input and output party dimensions coincide. Maps that change dimensions
// are serialized through the protocol format instead.

inline json instrument_to_json(const Instrument& instr) {
  if (instr.maps.empty())
    throw std::invalid_argument("instrument_to_json: empty instrument");
  const std::vector<std::size_t>& dims = instr.maps[0].party_dims_in;
  for (const KrausMap& m : instr.maps)
    if (m.party_dims_in != dims || m.party_dims_out != dims)
      throw std::invalid_argument(
          "instrument_to_json: all maps must share square party dims");
  json j;
  j["party_dims"] = dims;
  j["labels"] = instr.labels;
  json maps = json::array();
  for (const KrausMap& m : instr.maps) {
    json ops = json::array();
    for (const CMatrix& k : m.kraus) ops.push_back(matrix_to_json(k));
    maps.push_back(std::move(ops));
  }
  j["maps"] = std::move(maps);
  return j;
}

inline Instrument instrument_from_json(const json& j) {
  if (!j.is_object())
    throw std::invalid_argument("instrument: expected an object");
  if (!j.contains("party_dims") || !j.contains("labels") ||
      !j.contains("maps"))
    throw std::invalid_argument(
        "instrument: requires party_dims, labels, maps");
  const std::vector<std::size_t> dims =
      detail::dims_from_json(j["party_dims"], "instrument.party_dims");
  std::size_t d = 1;
  for (std::size_t k : dims) d *= k;

  const json& jl = j["labels"];
  const json& jm = j["maps"];
  if (!jl.is_array() || !jm.is_array() || jl.size() != jm.size() ||
      jl.empty())
    throw std::invalid_argument(
        "instrument: labels and maps must be equal-length nonempty arrays");

  Instrument instr;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    if (!jl[i].is_string())
      throw std::invalid_argument("instrument: labels must be strings");
    instr.labels.push_back(jl[i].get<std::string>());
    if (!jm[i].is_array())
      throw std::invalid_argument("instrument: each map is a Kraus array");
    std::vector<CMatrix> ops;
    for (const json& jk : jm[i]) {
      CMatrix k = matrix_from_json(jk);
      if (k.rows() != d || k.cols() != d)
        throw std::invalid_argument(
            "instrument: Kraus shape disagrees with party_dims");
      ops.push_back(std::move(k));
    }
    instr.maps.push_back(KrausMap(std::move(ops), dims));
  }
  return instr;
}

// ---------------------------------------------------------------------------
// States

inline json state_to_json(const CMatrix& rho,
                          const std::vector<std::size_t>& party_dims) {
  std::size_t d = 1;
  for (std::size_t k : party_dims) d *= k;
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("state_to_json: shape disagrees with dims");
  json j;
  j["party_dims"] = party_dims;
  j["matrix"] = matrix_to_json(rho);
  return j;
}

struct StateRecord {
  std::vector<std::size_t> party_dims;
  CMatrix matrix{1, 1};
};

inline StateRecord state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("party_dims") || !j.contains("matrix"))
    throw std::invalid_argument("state: requires party_dims and matrix");
  StateRecord s;
  s.party_dims = detail::dims_from_json(j["party_dims"], "state.party_dims");
  s.matrix = matrix_from_json(j["matrix"]);
  std::size_t d = 1;
  for (std::size_t k : s.party_dims) d *= k;
  if (s.matrix.rows() != d || s.matrix.cols() != d)
    throw std::invalid_argument("state: matrix shape disagrees with dims");
  return s;
}

// ---------------------------------------------------------------------------
// Protocol trees

namespace detail {

inline json node_to_json(const ProtocolNode& node) {
  json j;
  j["party"] = node.party;
  json branches = json::array();
  for (const ProtocolBranch& b : node.branches) {
    json jb;
    jb["label"] = b.label;
    jb["kraus"] = matrix_to_json(b.kraus);
    if (!b.conditionals.empty()) {
      json jc = json::object();
      for (const auto& [party, u] : b.conditionals)
        jc[std::to_string(party)] = matrix_to_json(u);
      jb["conditionals"] = std::move(jc);
    }
    branches.push_back(std::move(jb));
  }
  j["branches"] = std::move(branches);
  if (!node.children.empty()) {
    json jc = json::object();
    for (std::size_t i = 0; i < node.children.size(); ++i)
      jc[node.branches[i].label] = node_to_json(*node.children[i]);
    j["children"] = std::move(jc);
  }
  return j;
}

inline std::unique_ptr<ProtocolNode> node_from_json(const json& j) {
  if (!j.is_object() || !j.contains("party") || !j.contains("branches"))
    throw std::invalid_argument("protocol node: requires party and branches");
  if (!j["party"].is_number_unsigned())
    throw std::invalid_argument("protocol node: party must be an index");
  auto node = std::make_unique<ProtocolNode>();
  node->party = j["party"].get<std::size_t>();

  const json& jb = j["branches"];
  if (!jb.is_array() || jb.empty())
    throw std::invalid_argument("protocol node: branches must be nonempty");
  for (const json& b : jb) {
    if (!b.is_object() || !b.contains("label") || !b.contains("kraus") ||
        !b["label"].is_string())
      throw std::invalid_argument(
          "protocol branch: requires label and kraus");
    ProtocolBranch branch;
    branch.label = b["label"].get<std::string>();
    branch.kraus = matrix_from_json(b["kraus"]);
    if (b.contains("conditionals")) {
      if (!b["conditionals"].is_object())
        throw std::invalid_argument(
            "protocol branch: conditionals must map parties to matrices");
      for (const auto& [key, val] : b["conditionals"].items()) {
        std::size_t party = 0;
        try {
          party = static_cast<std::size_t>(std::stoul(key));
        } catch (const std::exception&) {
          throw std::invalid_argument(
              "protocol branch: conditional keys are party indices");
        }
        branch.conditionals[party] = matrix_from_json(val);
      }
    }
    node->branches.push_back(std::move(branch));
  }

  if (j.contains("children")) {
    const json& jc = j["children"];
    if (!jc.is_object() || jc.size() != node->branches.size())
      throw std::invalid_argument(
          "protocol node: children must cover every branch label");
    for (const ProtocolBranch& b : node->branches) {
      if (!jc.contains(b.label))
        throw std::invalid_argument("protocol node: missing child for label " +
                                    b.label);
      node->children.push_back(node_from_json(jc[b.label]));
    }
  }
  return node;
}

}  // namespace detail

inline json protocol_to_json(const ProtocolTree& t) {
  if (!t.root) throw std::invalid_argument("protocol_to_json: empty tree");
  json j;
  j["party_dims"] = t.parties.dims;
  j["root"] = detail::node_to_json(*t.root);
  json cg = json::object();
  for (const auto& [history, label] : t.outcome_map) cg[history] = label;
  j["coarse_grain"] = std::move(cg);
  return j;
}

inline ProtocolTree protocol_from_json(const json& j) {
  if (!j.is_object() || !j.contains("party_dims") || !j.contains("root"))
    throw std::invalid_argument("protocol: requires party_dims and root");
  ProtocolTree t;
  t.parties.dims =
      detail::dims_from_json(j["party_dims"], "protocol.party_dims");
  t.root = detail::node_from_json(j["root"]);
  if (j.contains("coarse_grain")) {
    const json& cg = j["coarse_grain"];
    if (!cg.is_object())
      throw std::invalid_argument(
          "protocol: coarse_grain must map histories to labels");
    for (const auto& [history, label] : cg.items()) {
      if (!label.is_string())
        throw std::invalid_argument(
            "protocol: coarse_grain values must be strings");
      t.outcome_map[history] = label.get<std::string>();
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Files

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("parse error in " + path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// CSV
//
// Numbers print with 17 significant digits so tables reproduce bit for bit.

inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline std::string to_csv(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(header);
  for (const std::vector<std::string>& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("to_csv: row width disagrees with header");
    emit(row);
  }
  return out.str();
}

inline void write_text_file(const std::string& path,
                            const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace locc

#endif  // LOCC_IO_HPP
