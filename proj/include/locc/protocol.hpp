// Copyright 2026 The locc-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "locc/instrument.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"

namespace locc {

/// Number of spatially separated parties and their local dimensions.
struct PartyStructure {
  std::vector<std::size_t> dims;

  std::size_t count() const { return dims.size(); }
  std::size_t total() const { return product(dims); }
};

constexpr char kHistorySeparator = '.';

inline std::string join_history(const std::vector<std::string>& history) {
  std::string joined;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (i) joined += kHistorySeparator;
    joined += history[i];
  }
  return joined;
}

/// One measurement branch: the acting party's local Kraus operator plus
/// outcome-conditioned local unitaries for the other parties (general TCP
/// conditionals are dilated by the caller before building the tree).
struct ProtocolBranch {
  std::string label;
  CMatrix kraus;
  std::map<std::size_t, CMatrix> conditionals;
};

/// One round at one measurement history: a single party acts; children are
/// aligned with branches (all absent exactly at the final round).
struct ProtocolNode {
  std::size_t party = 0;
  std::vector<ProtocolBranch> branches;
  std::vector<std::unique_ptr<ProtocolNode>> children;
};

/// Rooted uniform-depth measurement tree plus the final relabeling of leaf
/// histories. An empty outcome_map means every leaf keeps its joined
/// history (separator '.') as its label.
struct ProtocolTree {
  PartyStructure parties;
  std::unique_ptr<ProtocolNode> root;
  std::map<std::string, std::string> outcome_map;
};

inline std::unique_ptr<ProtocolNode> clone_node(const ProtocolNode& node) {
  auto copy = std::make_unique<ProtocolNode>();
  copy->party = node.party;
  copy->branches = node.branches;
  for (const auto& child : node.children)
    copy->children.push_back(child ? clone_node(*child) : nullptr);
  return copy;
}

inline ProtocolTree clone_tree(const ProtocolTree& t) {
  ProtocolTree copy;
  copy.parties = t.parties;
  copy.root = t.root ? clone_node(*t.root) : nullptr;
  copy.outcome_map = t.outcome_map;
  return copy;
}

namespace detail {

inline std::size_t node_depth(const ProtocolNode& node) {
  if (node.children.empty()) return 1;
  if (node.children.size() != node.branches.size())
    throw std::invalid_argument("ProtocolTree: children/branch mismatch");
  std::size_t depth = 0;
  for (const auto& child : node.children) {
    if (!child)
      throw std::invalid_argument("ProtocolTree: missing child subtree");
    const std::size_t d = node_depth(*child);
    if (depth == 0) depth = d;
    if (d != depth)
      throw std::invalid_argument("ProtocolTree: leaves at unequal depth");
  }
  return depth + 1;
}

inline void validate_node(const ProtocolNode& node,
                          const PartyStructure& parties, double tol) {
  const std::size_t n = parties.count();
  if (node.party >= n)
    throw std::invalid_argument("ProtocolTree: party index out of range");
  if (node.branches.empty())
    throw std::invalid_argument("ProtocolTree: node without branches");
  const std::size_t dk = parties.dims[node.party];
  CMatrix total(dk, dk);
  for (std::size_t i = 0; i < node.branches.size(); ++i) {
    const ProtocolBranch& br = node.branches[i];
    for (std::size_t j = i + 1; j < node.branches.size(); ++j)
      if (br.label == node.branches[j].label)
        throw std::invalid_argument("ProtocolTree: duplicate branch label");
    if (br.kraus.rows() != dk || br.kraus.cols() != dk)
      throw std::invalid_argument("ProtocolTree: branch operator shape");
    total += br.kraus.adjoint() * br.kraus;
    for (const auto& [party, u] : br.conditionals) {
      if (party == node.party || party >= n)
        throw std::invalid_argument("ProtocolTree: conditional party index");
      const std::size_t dj = parties.dims[party];
      if (u.rows() != dj || u.cols() != dj)
        throw std::invalid_argument("ProtocolTree: conditional shape");
      if ((u.adjoint() * u - CMatrix::identity(dj)).max_abs() > tol)
        throw std::invalid_argument("ProtocolTree: conditional not unitary");
    }
  }
  if ((total - CMatrix::identity(dk)).max_abs() > tol)
    throw std::invalid_argument("ProtocolTree: node completeness violated");
  if (!node.children.empty()) {
    if (node.children.size() != node.branches.size())
      throw std::invalid_argument("ProtocolTree: children/branch mismatch");
    for (const auto& child : node.children) {
      if (!child)
        throw std::invalid_argument("ProtocolTree: missing child subtree");
      validate_node(*child, parties, tol);
    }
  }
}

/// The branch's global operator: conditionals (or identity) on idle
/// parties, the measurement operator on the acting one.
inline CMatrix branch_operator(const ProtocolBranch& br, std::size_t party,
                               const PartyStructure& parties) {
  CMatrix op(1, 1);
  op(0, 0) = 1.0;
  for (std::size_t j = 0; j < parties.count(); ++j) {
    if (j == party) {
      op = tensor(op, br.kraus);
    } else {
      auto it = br.conditionals.find(j);
      op = tensor(op, it == br.conditionals.end()
                          ? CMatrix::identity(parties.dims[j])
                          : it->second);
    }
  }
  return op;
}

inline void collect_leaves(const ProtocolNode& node,
                           const PartyStructure& parties,
                           const CMatrix& prefix,
                           std::vector<std::string>& history,
                           const std::function<void(const std::string&,
                                                    const CMatrix&)>& emit) {
  for (std::size_t i = 0; i < node.branches.size(); ++i) {
    const CMatrix op =
        branch_operator(node.branches[i], node.party, parties) * prefix;
    history.push_back(node.branches[i].label);
    if (node.children.empty())
      emit(join_history(history), op);
    else
      collect_leaves(*node.children[i], parties, op, history, emit);
    history.pop_back();
  }
}

}  // namespace detail

/// Structural validation: per-node completeness, unitary conditionals,
/// uniform leaf depth, totality of the final relabeling. Throws on failure.
inline void validate_tree(const ProtocolTree& t, double tol = 1e-9) {
  if (t.parties.count() < 2)
    throw std::invalid_argument("ProtocolTree: at least two parties");
  if (!t.root) throw std::invalid_argument("ProtocolTree: missing root");
  detail::validate_node(*t.root, t.parties, tol);
  detail::node_depth(*t.root);
  if (!t.outcome_map.empty()) {
    std::vector<std::string> history;
    detail::collect_leaves(
        *t.root, t.parties, CMatrix::identity(t.parties.total()), history,
        [&](const std::string& joined, const CMatrix&) {
          if (t.outcome_map.find(joined) == t.outcome_map.end())
            throw std::invalid_argument(
                "ProtocolTree: outcome map misses leaf " + joined);
        });
  }
}

inline std::size_t tree_depth(const ProtocolTree& t) {
  if (!t.root) return 0;
  return detail::node_depth(*t.root);
}

/// Executes the tree into an instrument: one Kraus operator per leaf (the
/// ordered product of branch operators along the path), merged by the final
/// relabeling. Labels appear in depth-first order of first use.
inline Instrument run_protocol(const ProtocolTree& t, double tol = 1e-9) {
  validate_tree(t, tol);
  Instrument out;
  std::vector<std::string> history;
  detail::collect_leaves(
      *t.root, t.parties, CMatrix::identity(t.parties.total()), history,
      [&](const std::string& joined, const CMatrix& op) {
        std::string label = joined;
        if (!t.outcome_map.empty()) label = t.outcome_map.at(joined);
        for (std::size_t i = 0; i < out.labels.size(); ++i) {
          if (out.labels[i] == label) {
            out.maps[i].kraus.push_back(op);
            return;
          }
        }
        out.labels.push_back(label);
        out.maps.push_back(KrausMap({op}, t.parties.dims));
      });
  const ValidationReport report = validate_instrument(out, 1e-7);
  if (!report.valid)
    throw std::logic_error("run_protocol: executed tree is not TCP");
  return out;
}

/// One-way local round: party k measures `local`, broadcasts the outcome,
/// every other party applies the outcome-conditioned TCP map (identity when
/// unspecified). conditionals[label][party] must be trace preserving.
inline Instrument one_way_local(
    const PartyStructure& parties, std::size_t k, const Instrument& local,
    const std::map<std::string, std::map<std::size_t, KrausMap>>&
        conditionals = {},
    double tol = 1e-9) {
  if (k >= parties.count())
    throw std::invalid_argument("one_way_local: party index out of range");
  const ValidationReport report = validate_instrument(local, tol);
  if (!report.valid)
    throw std::invalid_argument("one_way_local: local instrument invalid");
  if (local.maps.front().party_dims_in !=
      std::vector<std::size_t>{parties.dims[k]})
    throw std::invalid_argument("one_way_local: local instrument dimension");

  Instrument out;
  out.labels = local.labels;
  for (std::size_t i = 0; i < local.size(); ++i) {
    const auto label_it = conditionals.find(local.labels[i]);
    KrausMap global({CMatrix::identity(1)}, {});
    global.party_dims_in.clear();
    global.party_dims_out.clear();
    for (std::size_t j = 0; j < parties.count(); ++j) {
      KrausMap factor = identity_map({parties.dims[j]});
      if (j == k) {
        factor = local.maps[i];
      } else if (label_it != conditionals.end()) {
        auto party_it = label_it->second.find(j);
        if (party_it != label_it->second.end()) {
          if (!is_trace_preserving(party_it->second, tol))
            throw std::invalid_argument(
                "one_way_local: conditional map not trace preserving");
          if (party_it->second.party_dims_in !=
              std::vector<std::size_t>{parties.dims[j]})
            throw std::invalid_argument(
                "one_way_local: conditional map dimension");
          factor = party_it->second;
        }
      }
      global = (j == 0) ? factor : tensor_map(global, factor);
    }
    out.maps.push_back(std::move(global));
  }
  return out;
}

/// Follows `first` with an outcome-conditioned instrument and merges by f:
/// the output map at f(j, j') accumulates B_{j'|j} after A_j.
inline Instrument locc_link(
    const Instrument& first,
    const std::map<std::string, Instrument>& conditionals,
    const std::function<std::string(const std::string&, const std::string&)>&
        f) {
  Instrument out;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const auto it = conditionals.find(first.labels[i]);
    if (it == conditionals.end())
      throw std::invalid_argument("locc_link: missing conditional for label " +
                                  first.labels[i]);
    const Instrument& follow = it->second;
    for (std::size_t j = 0; j < follow.size(); ++j) {
      const KrausMap composed = compose(follow.maps[j], first.maps[i]);
      const std::string label = f(first.labels[i], follow.labels[j]);
      bool merged = false;
      for (std::size_t m = 0; m < out.labels.size(); ++m) {
        if (out.labels[m] == label) {
          out.maps[m] = map_sum(out.maps[m], composed);
          merged = true;
          break;
        }
      }
      if (!merged) {
        out.labels.push_back(label);
        out.maps.push_back(composed);
      }
    }
  }
  return out;
}

}  // namespace locc
