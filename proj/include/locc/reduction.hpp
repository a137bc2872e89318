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

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "locc/caratheodory.hpp"
#include "locc/choi.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"
#include "locc/protocol.hpp"
#include "locc/spectral.hpp"

namespace locc {

namespace detail {

inline std::unique_ptr<ProtocolNode> make_single_branch(std::size_t party,
                                                        CMatrix op) {
  auto node = std::make_unique<ProtocolNode>();
  node->party = party;
  node->branches.push_back({"0", std::move(op), {}});
  return node;
}

/// Which parties need a sublevel at each expanded block: the measuring
/// party, same-block conditionals (index above the measuring party), and
/// deferred conditionals arriving from the previous block.
struct SlotPlan {
  std::vector<std::vector<std::size_t>> levels;
  std::vector<std::size_t> trailing;
};

inline void plan_slots_walk(const ProtocolNode& node, std::size_t level,
                            std::vector<std::set<std::size_t>>& used,
                            std::set<std::size_t>& trailing) {
  if (used.size() <= level) used.resize(level + 1);
  used[level].insert(node.party);
  const bool leaf = node.children.empty();
  for (const auto& br : node.branches)
    for (const auto& [j, u] : br.conditionals) {
      if (j > node.party) {
        used[level].insert(j);
      } else if (leaf) {
        trailing.insert(j);
      } else {
        if (used.size() <= level + 1) used.resize(level + 2);
        used[level + 1].insert(j);
      }
    }
  for (const auto& child : node.children)
    plan_slots_walk(*child, level + 1, used, trailing);
}

inline SlotPlan plan_slots(const ProtocolTree& t) {
  std::vector<std::set<std::size_t>> used;
  std::set<std::size_t> trailing;
  plan_slots_walk(*t.root, 0, used, trailing);
  SlotPlan plan;
  for (const auto& s : used) plan.levels.emplace_back(s.begin(), s.end());
  plan.trailing.assign(trailing.begin(), trailing.end());
  return plan;
}

struct ExpandState {
  const ProtocolTree* tree = nullptr;
  SlotPlan plan;
  std::map<std::string, std::string> new_map;
  std::vector<std::string> orig_hist;
  std::vector<std::string> new_hist;

  std::string label_of_orig_leaf() const {
    const std::string joined = join_history(orig_hist);
    if (tree->outcome_map.empty()) return joined;
    return tree->outcome_map.at(joined);
  }
};

inline CMatrix take_deferred(std::map<std::size_t, CMatrix>& deferred,
                             std::size_t j, std::size_t dim) {
  auto it = deferred.find(j);
  if (it == deferred.end()) return CMatrix::identity(dim);
  CMatrix u = std::move(it->second);
  deferred.erase(it);
  return u;
}

inline std::unique_ptr<ProtocolNode> expand_before(
    const ProtocolNode& orig, std::size_t level,
    std::size_t slot_idx, std::map<std::size_t, CMatrix> deferred,
    ExpandState& st);

inline std::unique_ptr<ProtocolNode> expand_trailing(
    std::size_t idx, std::map<std::size_t, CMatrix> deferred,
    ExpandState& st) {
  if (idx == st.plan.trailing.size()) {
    st.new_map[join_history(st.new_hist)] = st.label_of_orig_leaf();
    return nullptr;
  }
  const std::size_t j = st.plan.trailing[idx];
  CMatrix op = take_deferred(deferred, j, st.tree->parties.dims[j]);
  auto node = make_single_branch(j, std::move(op));
  st.new_hist.push_back("0");
  auto child = expand_trailing(idx + 1, std::move(deferred), st);
  st.new_hist.pop_back();
  if (child) node->children.push_back(std::move(child));
  return node;
}

/// Sublevels strictly after the measurement slot of this block; conditionals
/// indexed above the measuring party act here, composed onto any unitary
/// deferred from the previous block.
inline std::unique_ptr<ProtocolNode> expand_after(
    const ProtocolNode& orig, std::size_t level, std::size_t slot_idx,
    std::size_t branch, std::map<std::size_t, CMatrix> deferred,
    std::map<std::size_t, CMatrix> defer_next, ExpandState& st) {
  const std::vector<std::size_t>& slots = st.plan.levels[level];
  if (slot_idx == slots.size()) {
    if (!orig.children.empty())
      return expand_before(*orig.children[branch], level + 1, 0,
                           std::move(defer_next), st);
    return expand_trailing(0, std::move(defer_next), st);
  }
  const std::size_t j = slots[slot_idx];
  CMatrix op = take_deferred(deferred, j, st.tree->parties.dims[j]);
  const auto cond = orig.branches[branch].conditionals.find(j);
  if (cond != orig.branches[branch].conditionals.end())
    op = cond->second * op;
  auto node = make_single_branch(j, std::move(op));
  st.new_hist.push_back("0");
  auto child = expand_after(orig, level, slot_idx + 1, branch,
                            std::move(deferred), std::move(defer_next), st);
  st.new_hist.pop_back();
  if (child) node->children.push_back(std::move(child));
  return node;
}

inline std::unique_ptr<ProtocolNode> expand_before(
    const ProtocolNode& orig, std::size_t level, std::size_t slot_idx,
    std::map<std::size_t, CMatrix> deferred, ExpandState& st) {
  const std::vector<std::size_t>& slots = st.plan.levels[level];
  const std::size_t j = slots[slot_idx];
  if (j != orig.party) {
    // Arrival slot for a unitary deferred from the previous block.
    CMatrix op = take_deferred(deferred, j, st.tree->parties.dims[j]);
    auto node = make_single_branch(j, std::move(op));
    st.new_hist.push_back("0");
    auto child = expand_before(orig, level, slot_idx + 1,
                               std::move(deferred), st);
    st.new_hist.pop_back();
    if (child) node->children.push_back(std::move(child));
    return node;
  }

  auto node = std::make_unique<ProtocolNode>();
  node->party = orig.party;
  const CMatrix arrived = take_deferred(deferred, orig.party,
                                        st.tree->parties.dims[orig.party]);
  std::vector<std::unique_ptr<ProtocolNode>> children;
  bool any_child = false;
  for (std::size_t b = 0; b < orig.branches.size(); ++b) {
    const ProtocolBranch& br = orig.branches[b];
    node->branches.push_back({br.label, br.kraus * arrived, {}});
    std::map<std::size_t, CMatrix> defer_next;
    for (const auto& [p, u] : br.conditionals)
      if (p < orig.party) defer_next[p] = u;
    st.orig_hist.push_back(br.label);
    st.new_hist.push_back(br.label);
    auto child = expand_after(orig, level, slot_idx + 1, b, deferred,
                              std::move(defer_next), st);
    st.orig_hist.pop_back();
    st.new_hist.pop_back();
    any_child = any_child || child != nullptr;
    children.push_back(std::move(child));
  }
  if (any_child) node->children = std::move(children);
  return node;
}

inline bool subtree_contains_party(const ProtocolNode& node, std::size_t k) {
  if (node.party == k) return true;
  for (const auto& child : node.children)
    if (child && subtree_contains_party(*child, k)) return true;
  return false;
}

inline bool is_positive_operator(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.adjoint()).max_abs() > tol) return false;
  const EigResult e = hermitian_eig(CMatrix(0.5 * (m + m.adjoint())));
  for (double v : e.values)
    if (v < -tol) return false;
  return true;
}

/// Root-to-leaf sweep carrying each party's pending isometry. Positive
/// operators pass through untouched so already-normal trees are exact fixed
/// points. A party whose rotation composes raw above the final round block
/// is raised: it needs a trailing level of its own to absorb it.
inline void polar_walk(ProtocolNode& node,
                       std::map<std::size_t, CMatrix> pending,
                       std::size_t depth, std::size_t final_block_start,
                       std::set<std::size_t>& raised) {
  const std::size_t k = node.party;
  CMatrix u_pend;
  bool have_pend = false;
  {
    auto it = pending.find(k);
    if (it != pending.end()) {
      u_pend = std::move(it->second);
      pending.erase(it);
      have_pend = true;
    }
  }
  for (std::size_t b = 0; b < node.branches.size(); ++b) {
    CMatrix m_eff = node.branches[b].kraus;
    if (have_pend) m_eff = m_eff * u_pend;
    ProtocolNode* child =
        node.children.empty() ? nullptr : node.children[b].get();
    const bool acts_below = child && subtree_contains_party(*child, k);
    std::map<std::size_t, CMatrix> pending_b = pending;
    if (acts_below && !is_positive_operator(m_eff, 1e-12)) {
      PolarResult pr = polar_decompose(m_eff);
      node.branches[b].kraus = pr.psd;
      if ((pr.isometry - CMatrix::identity(m_eff.rows())).max_abs() > 1e-12)
        pending_b[k] = pr.isometry;
    } else {
      if (!acts_below && child && depth < final_block_start &&
          !is_positive_operator(m_eff, 1e-12))
        raised.insert(k);
      node.branches[b].kraus = m_eff;
    }
    if (child) polar_walk(*child, std::move(pending_b), depth + 1,
                          final_block_start, raised);
  }
}

inline void append_trailing_walk(ProtocolNode& node,
                                 const PartyStructure& parties,
                                 const std::vector<std::size_t>& extra) {
  if (!node.children.empty()) {
    for (auto& child : node.children)
      append_trailing_walk(*child, parties, extra);
    return;
  }
  for (std::size_t b = 0; b < node.branches.size(); ++b) {
    std::unique_ptr<ProtocolNode> chain;
    for (auto it = extra.rbegin(); it != extra.rend(); ++it) {
      auto link =
          make_single_branch(*it, CMatrix::identity(parties.dims[*it]));
      if (chain) link->children.push_back(std::move(chain));
      chain = std::move(link);
    }
    node.children.push_back(std::move(chain));
  }
}

inline void append_trailing_levels(ProtocolTree& t,
                                   const std::vector<std::size_t>& extra) {
  if (extra.empty()) return;
  append_trailing_walk(*t.root, t.parties, extra);
  std::string suffix;
  for (std::size_t i = 0; i < extra.size(); ++i) {
    suffix += kHistorySeparator;
    suffix += "0";
  }
  std::map<std::string, std::string> rekeyed;
  for (const auto& [key, value] : t.outcome_map) rekeyed[key + suffix] = value;
  t.outcome_map = std::move(rekeyed);
}

inline std::vector<double> hermvec(const CMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<double> v;
  v.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(h(i, i).real());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      v.push_back(h(i, j).real());
      v.push_back(h(i, j).imag());
    }
  return v;
}

inline std::vector<double> kron_real(const std::vector<double>& a,
                                     const std::vector<double>& b) {
  std::vector<double> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline void require_measurement_ordered(const ProtocolNode& node,
                                        std::size_t depth,
                                        std::vector<std::size_t>& parties) {
  for (const auto& br : node.branches)
    if (!br.conditionals.empty())
      throw std::invalid_argument(
          "compress_outcomes: tree not normalized (conditionals present)");
  if (parties.size() <= depth) parties.resize(depth + 1, node.party);
  if (parties[depth] != node.party)
    throw std::invalid_argument(
        "compress_outcomes: tree not normalized (mixed parties per level)");
  for (const auto& child : node.children)
    require_measurement_ordered(*child, depth + 1, parties);
}

/// Post-order pass: prunes each node's branch set to an affinely minimal
/// convex representation of its summed Choi data and returns the node's
/// vectorized contribution for the parent's pass.
inline std::vector<double> compress_node(
    ProtocolNode& node, const ProtocolTree& t,
    const std::map<std::string, std::size_t>& label_index,
    std::vector<std::string>& hist, double tol) {
  const std::size_t d = t.parties.dims[node.party];
  std::vector<std::vector<double>> pts;
  for (std::size_t b = 0; b < node.branches.size(); ++b) {
    hist.push_back(node.branches[b].label);
    std::vector<double> future;
    if (!node.children.empty()) {
      future = compress_node(*node.children[b], t, label_index, hist, tol);
    } else {
      const std::string joined = join_history(hist);
      const std::string label =
          t.outcome_map.empty() ? joined : t.outcome_map.at(joined);
      future.assign(label_index.size(), 0.0);
      future[label_index.at(label)] = 1.0;
    }
    hist.pop_back();
    const CMatrix local_choi =
        choi_of_map(KrausMap({node.branches[b].kraus}, {d})).matrix;
    pts.push_back(kron_real(hermvec(local_choi), future));
  }

  const CaratheodoryResult red = caratheodory_reduce(
      pts, std::vector<double>(pts.size(), 1.0), tol, true);

  std::vector<ProtocolBranch> kept_branches;
  std::vector<std::unique_ptr<ProtocolNode>> kept_children;
  std::vector<double> future(pts.front().size(), 0.0);
  for (std::size_t idx = 0; idx < red.support.size(); ++idx) {
    const std::size_t i = red.support[idx];
    const double q = red.weights[idx];
    ProtocolBranch br = std::move(node.branches[i]);
    br.kraus = CMatrix(std::sqrt(q) * br.kraus);
    kept_branches.push_back(std::move(br));
    if (!node.children.empty())
      kept_children.push_back(std::move(node.children[i]));
    for (std::size_t p = 0; p < future.size(); ++p)
      future[p] += q * pts[i][p];
  }
  node.branches = std::move(kept_branches);
  node.children = std::move(kept_children);
  return future;
}

inline void collect_leaf_labels(const ProtocolNode& node,
                                const ProtocolTree& t,
                                std::vector<std::string>& hist,
                                std::vector<std::string>& order,
                                std::map<std::string, std::size_t>& index) {
  for (std::size_t b = 0; b < node.branches.size(); ++b) {
    hist.push_back(node.branches[b].label);
    if (node.children.empty()) {
      const std::string joined = join_history(hist);
      const std::string label =
          t.outcome_map.empty() ? joined : t.outcome_map.at(joined);
      if (index.find(label) == index.end()) {
        index[label] = order.size();
        order.push_back(label);
      }
    } else {
      collect_leaf_labels(*node.children[b], t, hist, order, index);
    }
    hist.pop_back();
  }
}

inline void rebuild_outcome_map(const ProtocolNode& node,
                                const ProtocolTree& t,
                                std::vector<std::string>& hist,
                                std::map<std::string, std::string>& map) {
  for (std::size_t b = 0; b < node.branches.size(); ++b) {
    hist.push_back(node.branches[b].label);
    if (node.children.empty()) {
      const std::string joined = join_history(hist);
      map[joined] = t.outcome_map.empty() ? joined : t.outcome_map.at(joined);
    } else {
      rebuild_outcome_map(*node.children[b], t, hist, map);
    }
    hist.pop_back();
  }
}

}  // namespace detail

/// Rewrites the tree so each level hosts exactly one party, in ascending
/// party order within each original round. Branch conditionals become
/// single-branch unitary levels: parties above the measuring one act inside
/// the same block, parties below it are deferred to the next block (or to
/// trailing levels after the last round). The executed instrument is
/// unchanged; leaf labels are preserved through the outcome map.
inline ProtocolTree measurement_ordered_expand(const ProtocolTree& t) {
  validate_tree(t);
  detail::ExpandState st;
  st.tree = &t;
  st.plan = detail::plan_slots(t);
  ProtocolTree out;
  out.parties = t.parties;
  out.root = detail::expand_before(*t.root, 0, 0, {}, st);
  out.outcome_map = std::move(st.new_map);
  return out;
}

/// Measurement-ordered form with positive measurement operators: each
/// operator's polar rotation is pushed into the same party's next action,
/// and rotations whose party never acts again ride to appended trailing
/// levels, so only the final block composes raw isometries.
inline ProtocolTree normalize_protocol(const ProtocolTree& t) {
  const ProtocolTree expanded = measurement_ordered_expand(t);
  const detail::SlotPlan plan = detail::plan_slots(t);
  std::size_t final_block_start = 1;
  for (std::size_t i = 0; i + 1 < plan.levels.size(); ++i)
    final_block_start += plan.levels[i].size();
  std::set<std::size_t> extra;
  for (;;) {
    ProtocolTree work = clone_tree(expanded);
    detail::append_trailing_levels(
        work, std::vector<std::size_t>(extra.begin(), extra.end()));
    std::set<std::size_t> raised;
    detail::polar_walk(*work.root, {}, 1, final_block_start, raised);
    bool grew = false;
    for (std::size_t k : raised) grew = extra.insert(k).second || grew;
    if (grew) continue;
    return work;
  }
}

/// Prunes branch counts with back-to-front Caratheodory passes over the
/// vectorized per-branch Choi data (joined with the final label at the leaf
/// level), rescaling surviving operators by sqrt(q). Requires the
/// measurement-ordered conditional-free form; m must equal the number of
/// final outcome labels.
inline ProtocolTree compress_outcomes(const ProtocolTree& t, std::size_t m,
                                      double tol = 1e-12) {
  validate_tree(t);
  std::vector<std::size_t> level_parties;
  detail::require_measurement_ordered(*t.root, 0, level_parties);

  std::vector<std::string> hist;
  std::vector<std::string> order;
  std::map<std::string, std::size_t> label_index;
  detail::collect_leaf_labels(*t.root, t, hist, order, label_index);
  if (order.size() != m)
    throw std::invalid_argument(
        "compress_outcomes: outcome label count does not match m");

  ProtocolTree out = clone_tree(t);
  detail::compress_node(*out.root, out, label_index, hist, tol);

  std::map<std::string, std::string> pruned;
  detail::rebuild_outcome_map(*out.root, out, hist, pruned);
  out.outcome_map = std::move(pruned);
  return out;
}

/// Largest branch count among the nodes at each depth (index 0 = root).
inline std::vector<std::size_t> level_branch_counts(const ProtocolTree& t) {
  std::vector<std::size_t> counts;
  std::vector<std::pair<const ProtocolNode*, std::size_t>> stack{
      {t.root.get(), 0}};
  while (!stack.empty()) {
    auto [node, level] = stack.back();
    stack.pop_back();
    if (counts.size() <= level) counts.resize(level + 1, 0);
    counts[level] = std::max(counts[level], node->branches.size());
    for (const auto& child : node->children)
      stack.push_back({child.get(), level + 1});
  }
  return counts;
}

/// Round-l branch counts within m * D^(4(r-l+1)), D the total dimension.
inline bool outcome_bound_satisfied(const ProtocolTree& t, std::size_t m) {
  const std::vector<std::size_t> counts = level_branch_counts(t);
  const double dim = static_cast<double>(t.parties.total());
  const double r = static_cast<double>(counts.size());
  for (std::size_t l = 0; l < counts.size(); ++l) {
    const double bound = static_cast<double>(m) *
                         std::pow(dim, 4.0 * (r - static_cast<double>(l)));
    if (static_cast<double>(counts[l]) > bound) return false;
  }
  return true;
}

}  // namespace locc
