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
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "locc/choi.hpp"
#include "locc/instrument.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"
#include "locc/protocol.hpp"
#include "locc/wclass.hpp"

namespace locc {

// ---------------------------------------------------------------------------
// The two-qubit splitter instrument that weak-measurement protocols approach
// but never reach. Outcome "00" projects onto |11>; outcomes "01" and "10"
// collapse one qubit to |0> while the other is softened by the scalings
// T1 = diag(1/sqrt3, 1/sqrt3) and T2 = diag(1/sqrt6, sqrt(2/3)).
// ---------------------------------------------------------------------------

inline Instrument limit_instrument() {
  CMatrix t1(2, 2);
  t1(0, 0) = 1.0 / std::sqrt(3.0);
  t1(1, 1) = 1.0 / std::sqrt(3.0);
  CMatrix t2(2, 2);
  t2(0, 0) = 1.0 / std::sqrt(6.0);
  t2(1, 1) = std::sqrt(2.0 / 3.0);
  CMatrix p0(2, 2);
  p0(0, 0) = 1.0;
  CMatrix p11(4, 4);
  p11(3, 3) = 1.0;
  Instrument instr;
  instr.labels = {"00", "01", "10"};
  instr.maps = {KrausMap({p11}, {2, 2}),
                KrausMap({tensor(t1, p0), tensor(t2, p0)}, {2, 2}),
                KrausMap({tensor(p0, t1), tensor(p0, t2)}, {2, 2})};
  return instr;
}

// ---------------------------------------------------------------------------
// The approximating family: both parties repeat a weak two-outcome
// measurement {M0, M1} up to nu times and stop at the first round whose
// joint outcome is not 00. M0 = sqrt(1-eps)|0><0| + |1><1| nudges the state,
// M1 = sqrt(eps)|0><0| fires rarely. All operators are diagonal, so the
// per-branch products have closed forms.
// ---------------------------------------------------------------------------

namespace detail {

inline CMatrix weak_m0_power(double eps, std::size_t mu) {
  CMatrix m(2, 2);
  m(0, 0) = std::pow(1.0 - eps, 0.5 * static_cast<double>(mu));
  m(1, 1) = 1.0;
  return m;
}

// M1 M0^mu = sqrt(eps (1-eps)^mu) |0><0|.
inline CMatrix weak_fire_after(double eps, std::size_t mu) {
  CMatrix m(2, 2);
  m(0, 0) = std::sqrt(eps * std::pow(1.0 - eps, static_cast<double>(mu)));
  return m;
}

inline void require_weak_params(std::size_t nu, double eps) {
  if (nu < 1)
    throw std::invalid_argument("weak repetition: nu must be at least 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("weak repetition: eps outside (0,1)");
}

}  // namespace detail

/// Four-outcome instrument gathered by the stopping round: "00" never fires,
/// "01"/"10" one side fires at round mu while the other stays soft, "11"
/// both fire together. One Kraus operator per stopping round.
inline Instrument weak_repetition_instrument(std::size_t nu, double eps) {
  detail::require_weak_params(nu, eps);
  std::vector<CMatrix> k00 = {tensor(detail::weak_m0_power(eps, nu),
                                     detail::weak_m0_power(eps, nu))};
  std::vector<CMatrix> k01, k10, k11;
  for (std::size_t mu = 1; mu <= nu; ++mu) {
    const CMatrix soft = detail::weak_m0_power(eps, mu);
    const CMatrix fired = detail::weak_fire_after(eps, mu - 1);
    k01.push_back(tensor(soft, fired));
    k10.push_back(tensor(fired, soft));
    k11.push_back(tensor(fired, fired));
  }
  Instrument instr;
  instr.labels = {"00", "01", "10", "11"};
  instr.maps = {KrausMap(std::move(k00), {2, 2}),
                KrausMap(std::move(k01), {2, 2}),
                KrausMap(std::move(k10), {2, 2}),
                KrausMap(std::move(k11), {2, 2})};
  return instr;
}

namespace detail {

// Identity chain padding a stopped branch down to uniform leaf depth.
inline std::unique_ptr<ProtocolNode> weak_stop_chain(std::size_t level,
                                                     std::size_t total) {
  if (level >= total) return nullptr;
  auto node = std::make_unique<ProtocolNode>();
  node->party = level % 2;
  node->branches.push_back({"0", CMatrix::identity(2), {}});
  if (auto child = weak_stop_chain(level + 1, total))
    node->children.push_back(std::move(child));
  return node;
}

inline std::unique_ptr<ProtocolNode> weak_round_first(std::size_t level,
                                                      std::size_t total,
                                                      double eps);

// Second mover of a round: measures regardless of the first mover's result;
// the joint outcome decides whether the next round stays active.
inline std::unique_ptr<ProtocolNode> weak_round_second(std::size_t level,
                                                       std::size_t total,
                                                       bool first_was_zero,
                                                       double eps) {
  auto node = std::make_unique<ProtocolNode>();
  node->party = level % 2;
  node->branches.push_back({"0", weak_m0_power(eps, 1), {}});
  node->branches.push_back({"1", weak_fire_after(eps, 0), {}});
  if (level + 1 < total) {
    auto on_zero = first_was_zero ? weak_round_first(level + 1, total, eps)
                                  : weak_stop_chain(level + 1, total);
    node->children.push_back(std::move(on_zero));
    node->children.push_back(weak_stop_chain(level + 1, total));
  }
  return node;
}

inline std::unique_ptr<ProtocolNode> weak_round_first(std::size_t level,
                                                      std::size_t total,
                                                      double eps) {
  auto node = std::make_unique<ProtocolNode>();
  node->party = level % 2;
  node->branches.push_back({"0", weak_m0_power(eps, 1), {}});
  node->branches.push_back({"1", weak_fire_after(eps, 0), {}});
  node->children.push_back(weak_round_second(level + 1, total, true, eps));
  node->children.push_back(weak_round_second(level + 1, total, false, eps));
  return node;
}

}  // namespace detail

/// The same family as an executable protocol tree: rounds alternate the two
/// parties, stopped branches idle to keep leaf depth uniform at 2 nu, and
/// the outcome map folds each history to its first non-00 round outcome.
inline ProtocolTree weak_repetition_tree(std::size_t nu, double eps) {
  detail::require_weak_params(nu, eps);
  const std::size_t total = 2 * nu;
  ProtocolTree tree;
  tree.parties = PartyStructure{{2, 2}};
  tree.root = detail::weak_round_first(0, total, eps);
  // Histories: zeros up to the stopping round, the stopping pair, then the
  // idle padding. The all-zero history is the never-fired outcome.
  for (std::size_t s = 1; s <= nu; ++s) {
    for (const char* pair : {"01", "10", "11"}) {
      std::vector<std::string> tokens(total, "0");
      tokens[2 * (s - 1)] = std::string(1, pair[0]);
      tokens[2 * (s - 1) + 1] = std::string(1, pair[1]);
      tree.outcome_map[join_history(tokens)] = pair;
    }
  }
  tree.outcome_map[join_history(std::vector<std::string>(total, "0"))] = "00";
  return tree;
}

// ---------------------------------------------------------------------------
// Convergence ladder: distance between the repetition instrument and the
// zero-padded splitter as the round budget grows with eps = nu^{-c}.
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  std::size_t nu = 0;
  double eps = 0.0;
  double distance = 0.0;    // summed Choi trace-norm distance to the target
  double stop_trace = 0.0;  // trace of the both-fired branch Choi: a lower
                            // bound on the distance, since the target pads
                            // that outcome with the zero map
};

inline std::vector<ConvergenceRow> convergence_table(
    const std::vector<std::size_t>& nus, double c) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("convergence_table: exponent outside (0,1)");
  const Instrument target =
      pad_instrument(limit_instrument(), {"00", "01", "10", "11"});
  std::vector<ConvergenceRow> rows;
  for (std::size_t nu : nus) {
    ConvergenceRow r;
    r.nu = nu;
    r.eps = std::pow(static_cast<double>(nu), -c);
    const Instrument approx = weak_repetition_instrument(nu, r.eps);
    r.distance = instrument_choi_distance(approx, target);
    r.stop_trace = choi_of_map(approx.map_for("11")).matrix.trace().real();
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Action of the splitter on the three-qubit W state: both surviving
// outcomes leave the same rank-two state omega on the pair that kept its
// coherence, and omega's concurrence equals the tripartite monotone of W,
// so the average cannot afford to drop at any point of a protocol.
// ---------------------------------------------------------------------------

namespace detail {

inline CMatrix w_state_density() {
  CMatrix w(8, 1);
  const double amp = 1.0 / std::sqrt(3.0);
  w(4, 0) = amp;  // |100>
  w(2, 0) = amp;  // |010>
  w(1, 0) = amp;  // |001>
  return w * w.adjoint();
}

inline CMatrix omega_block() {
  CMatrix omega(4, 4);
  omega(1, 1) = 1.0 / 3.0;
  omega(1, 2) = 4.0 / 9.0;
  omega(2, 1) = 4.0 / 9.0;
  omega(2, 2) = 2.0 / 3.0;
  return omega;
}

}  // namespace detail

struct WTransformReport {
  double probability_00 = 0.0;
  double probability_01 = 0.0;
  double probability_10 = 0.0;
  double max_state_deviation = 0.0;  // Frobenius gap to the predicted states
  double omega_concurrence = 0.0;    // concurrence of the surviving pair
  double w_monotone = 0.0;           // tripartite monotone of the W state
  double invariance_slack = 0.0;     // |average final concurrence - monotone|
  bool passed = false;
};

inline WTransformReport w_transform_check() {
  const Instrument ext = tensor_identity(limit_instrument(), {2});
  const CMatrix rho = detail::w_state_density();
  const std::vector<OutcomeSample> samples = apply_instrument(ext, rho);

  WTransformReport r;
  const CMatrix omega = detail::omega_block();
  CMatrix p0(2, 2);
  p0(0, 0) = 1.0;
  // Outcome 01 keeps the first and third qubits entangled with the middle
  // one reset; outcome 10 mirrors it onto the last two qubits.
  const CMatrix expect01 =
      permute_subsystems(tensor(omega, p0), {2, 2, 2}, {0, 2, 1});
  const CMatrix expect10 = tensor(p0, omega);

  double avg_final = 0.0;
  for (const OutcomeSample& s : samples) {
    if (s.label == "00") r.probability_00 = s.probability;
    if (s.label == "01") {
      r.probability_01 = s.probability;
      if (s.state) {
        r.max_state_deviation = std::max(
            r.max_state_deviation, (*s.state - expect01).frobenius_norm());
        const CMatrix pair = partial_trace(*s.state, {2, 2, 2}, {0, 2});
        avg_final += s.probability * wootters_concurrence(pair);
      }
    }
    if (s.label == "10") {
      r.probability_10 = s.probability;
      if (s.state) {
        r.max_state_deviation = std::max(
            r.max_state_deviation, (*s.state - expect10).frobenius_norm());
        const CMatrix pair = partial_trace(*s.state, {2, 2, 2}, {1, 2});
        avg_final += s.probability * wootters_concurrence(pair);
      }
    }
  }
  r.omega_concurrence = wootters_concurrence(omega);
  r.w_monotone =
      monotone_C(canonical_xvec(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), 0);
  r.invariance_slack = std::abs(avg_final - r.w_monotone);
  r.passed = r.probability_00 <= 1e-12 &&
             std::abs(r.probability_01 - 0.5) <= 1e-12 &&
             std::abs(r.probability_10 - 0.5) <= 1e-12 &&
             r.max_state_deviation <= 1e-12 &&
             std::abs(r.omega_concurrence - 8.0 / 9.0) <= 1e-10 &&
             std::abs(r.w_monotone - 8.0 / 9.0) <= 1e-12 &&
             r.invariance_slack <= 1e-10;
  return r;
}

// ---------------------------------------------------------------------------
// A separable instrument that beats the monotone ceiling on the W state:
// three product projectors whose surviving branches carry strictly more
// average concurrence than any protocol of local rounds could deliver.
// ---------------------------------------------------------------------------

struct SepGapReport {
  double tp_deviation = 0.0;
  double probability_1 = 0.0;
  double probability_2 = 0.0;
  double probability_3 = 0.0;
  double average_concurrence = 0.0;
  double ceiling = 0.0;  // the W-state monotone value
  double excess = 0.0;
  bool passed = false;
};

inline Instrument projector_gap_instrument() {
  CMatrix half0(2, 2);
  half0(0, 0) = 1.0 / std::sqrt(2.0);
  half0(1, 1) = 1.0;
  CMatrix p0(2, 2);
  p0(0, 0) = 1.0;
  CMatrix p1(2, 2);
  p1(1, 1) = 1.0;
  Instrument instr;
  instr.labels = {"1", "2", "3"};
  instr.maps = {KrausMap({tensor(half0, p0)}, {2, 2}),
                KrausMap({tensor(p0, half0)}, {2, 2}),
                KrausMap({tensor(p1, p1)}, {2, 2})};
  return instr;
}

inline SepGapReport sep_gap_check() {
  const Instrument instr = projector_gap_instrument();
  SepGapReport r;
  r.tp_deviation = validate_instrument(instr).tp_deviation;

  const Instrument ext = tensor_identity(instr, {2});
  const CMatrix rho = detail::w_state_density();
  for (const OutcomeSample& s : apply_instrument(ext, rho)) {
    if (s.label == "1") {
      r.probability_1 = s.probability;
      if (s.state) {
        // The middle qubit is reset; the first and third carry the pair.
        const CMatrix pair = partial_trace(*s.state, {2, 2, 2}, {0, 2});
        r.average_concurrence +=
            s.probability * wootters_concurrence(pair);
      }
    }
    if (s.label == "2") {
      r.probability_2 = s.probability;
      if (s.state) {
        const CMatrix pair = partial_trace(*s.state, {2, 2, 2}, {1, 2});
        r.average_concurrence +=
            s.probability * wootters_concurrence(pair);
      }
    }
    if (s.label == "3") r.probability_3 = s.probability;
  }
  r.ceiling = monotone_C(canonical_xvec(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0), 0);
  r.excess = r.average_concurrence - r.ceiling;
  const double expected = 2.0 * std::sqrt(2.0) / 3.0;
  r.passed = r.tp_deviation <= 1e-12 &&
             std::abs(r.probability_1 - 0.5) <= 1e-12 &&
             std::abs(r.probability_2 - 0.5) <= 1e-12 &&
             r.probability_3 <= 1e-12 &&
             std::abs(r.average_concurrence - expected) <= 1e-10 &&
             r.excess > 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Numeric certificate that the splitter cannot be reached exactly: the
// transformation above must keep the average monotone pinned, yet every
// non-trivial opening measurement by the pivotal parties strictly drops it.
// ---------------------------------------------------------------------------

struct EtaPoint {
  double delta = 0.0;      // minimum measurement strength |a1-c1| + |b1|
  double eta = 0.0;        // certified decrease: -max avg change observed
  std::size_t count = 0;   // samples at or above this strength
};

struct ImpossibilityReport {
  double invariance_slack = 0.0;   // from the transformation check
  double trivial_magnitude = 0.0;  // |avg change| at the trivial measurement
  double spot_check = 0.0;         // closed-form probe value
  std::vector<EtaPoint> eta_by_delta;
  std::size_t samples = 0;
  bool passed = false;
};

/// Samples `samples` random binary measurements (acting party drawn between
/// the pivot and its strongest partner) on the W vector and reports the
/// worst average monotone change per strength bucket. Deterministic in
/// (samples, seed).
inline ImpossibilityReport impossibility_certificate(std::size_t samples,
                                                     std::uint64_t seed) {
  ImpossibilityReport r;
  r.samples = samples;
  const WTransformReport wt = w_transform_check();
  r.invariance_slack = wt.invariance_slack;

  const WClassVector w = canonical_xvec(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  const std::size_t star = 0;
  r.trivial_magnitude =
      std::abs(avg_delta_C(w, star, complete_measurement(star, 0.5, 0.5, 0.0)));
  r.spot_check = avg_delta_C(w, star, complete_measurement(star, 0.75, 0.25, 0.0));

  const double deltas[] = {0.05, 0.1, 0.2, 0.4};
  for (double d : deltas) r.eta_by_delta.push_back({d, 0.0, 0});
  std::vector<double> worst(r.eta_by_delta.size(),
                            -std::numeric_limits<double>::infinity());

  std::mt19937_64 rng = suite_rng(seed, 0);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t party = rng() % 2;  // the pivot or its partner
    const BinaryMeasurement m = sample_measurement(rng, party, false);
    const double strength = std::abs(m.a[0] - m.c[0]) + std::abs(m.b[0]);
    const double change = avg_delta_C(w, star, m);
    for (std::size_t j = 0; j < r.eta_by_delta.size(); ++j) {
      if (strength < r.eta_by_delta[j].delta) continue;
      worst[j] = std::max(worst[j], change);
      r.eta_by_delta[j].count += 1;
    }
  }
  bool all_negative = true;
  for (std::size_t j = 0; j < r.eta_by_delta.size(); ++j) {
    r.eta_by_delta[j].eta = -worst[j];
    if (r.eta_by_delta[j].count == 0 || r.eta_by_delta[j].eta < 1e-6)
      all_negative = false;
  }
  r.passed = wt.passed && r.invariance_slack <= 1e-10 &&
             r.trivial_magnitude <= 1e-9 && all_negative;
  return r;
}

}  // namespace locc
