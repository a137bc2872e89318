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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "locc/choi.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"
#include "locc/spectral.hpp"

namespace locc {

/// Finite family of CP maps indexed by string labels; the family is a valid
/// instrument when the maps sum to a trace-preserving map.
struct Instrument {
  std::vector<std::string> labels;
  std::vector<KrausMap> maps;

  std::size_t size() const { return labels.size(); }
  const KrausMap& map_for(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return maps[i];
    throw std::out_of_range("Instrument: unknown label " + label);
  }
};

struct ValidationReport {
  bool valid = false;
  // Frobenius norm of sum_j sum_i M^dag M - I.
  double tp_deviation = 0.0;
  // Per map: largest eigenvalue excess of sum_i M^dag M over 1 (trace-bounded
  // maps have none).
  std::vector<double> map_bound_excess;
};

/// Checks shape consistency (throws) and trace preservation (reported).
inline ValidationReport validate_instrument(const Instrument& instr,
                                            double tol = 1e-9) {
  if (instr.labels.size() != instr.maps.size())
    throw std::invalid_argument("Instrument: label/map count mismatch");
  if (instr.maps.empty())
    throw std::invalid_argument("Instrument: empty family");
  for (std::size_t i = 0; i < instr.labels.size(); ++i)
    for (std::size_t j = i + 1; j < instr.labels.size(); ++j)
      if (instr.labels[i] == instr.labels[j])
        throw std::invalid_argument("Instrument: duplicate label");
  const auto& dims_in = instr.maps.front().party_dims_in;
  const auto& dims_out = instr.maps.front().party_dims_out;
  for (const KrausMap& m : instr.maps) {
    check_kraus_shapes(m);
    if (m.party_dims_in != dims_in || m.party_dims_out != dims_out)
      throw std::invalid_argument("Instrument: party structure mismatch");
  }

  const std::size_t d = instr.maps.front().dim_in();
  CMatrix total(d, d);
  ValidationReport report;
  for (const KrausMap& m : instr.maps) {
    const CMatrix g = kraus_gram(m);
    total += g;
    const EigResult e = hermitian_eig(g);
    report.map_bound_excess.push_back(
        std::max(0.0, (e.values.empty() ? 0.0 : e.values.front()) - 1.0));
  }
  report.tp_deviation = (total - CMatrix::identity(d)).frobenius_norm();
  report.valid = report.tp_deviation <= tol;
  for (double excess : report.map_bound_excess)
    if (excess > tol) report.valid = false;
  return report;
}

struct OutcomeSample {
  std::string label;
  double probability = 0.0;
  // Normalized post-measurement state; empty at (numerically) zero
  // probability, where no normalized state exists.
  std::optional<CMatrix> state;
};

/// Measures rho: probabilities tr(E_j(rho)) and normalized branch states.
inline std::vector<OutcomeSample> apply_instrument(const Instrument& instr,
                                                   const CMatrix& rho,
                                                   double tol = 1e-9) {
  validate_instrument(instr, tol);
  const std::size_t d = instr.maps.front().dim_in();
  if (!rho.is_square() || rho.rows() != d)
    throw std::invalid_argument("apply_instrument: state dimension mismatch");
  if (!rho.is_hermitian(tol))
    throw std::invalid_argument("apply_instrument: state not Hermitian");
  if (std::abs(rho.trace() - complex(1.0)) > tol)
    throw std::invalid_argument("apply_instrument: state trace != 1");
  const EigResult e = hermitian_eig(rho);
  if (e.values.back() < -tol)
    throw std::invalid_argument("apply_instrument: state not PSD");

  std::vector<OutcomeSample> outcomes;
  for (std::size_t i = 0; i < instr.size(); ++i) {
    OutcomeSample s;
    s.label = instr.labels[i];
    CMatrix post = apply_map(instr.maps[i], rho);
    const double p = post.trace().real();
    s.probability = p;
    if (p > tol) {
      post *= complex(1.0 / p);
      s.state = std::move(post);
    }
    outcomes.push_back(std::move(s));
  }
  return outcomes;
}

/// Merges outcomes along f (total on the label set): the Kraus lists of each
/// fiber concatenate, so the merged Choi is the fiber sum. Output labels
/// appear in first-occurrence order.
inline Instrument coarse_grain(
    const Instrument& instr,
    const std::function<std::string(const std::string&)>& f) {
  Instrument out;
  for (std::size_t i = 0; i < instr.size(); ++i) {
    const std::string target = f(instr.labels[i]);
    auto it = std::find(out.labels.begin(), out.labels.end(), target);
    if (it == out.labels.end()) {
      out.labels.push_back(target);
      out.maps.push_back(instr.maps[i]);
    } else {
      const std::size_t k =
          static_cast<std::size_t>(it - out.labels.begin());
      out.maps[k] = map_sum(out.maps[k], instr.maps[i]);
    }
  }
  return out;
}

/// Extends the index set to full_labels; new labels carry the zero map.
inline Instrument pad_instrument(const Instrument& instr,
                                 const std::vector<std::string>& full_labels) {
  const auto& dims_in = instr.maps.front().party_dims_in;
  const auto& dims_out = instr.maps.front().party_dims_out;
  Instrument out;
  out.labels = full_labels;
  for (const std::string& label : full_labels) {
    auto it = std::find(instr.labels.begin(), instr.labels.end(), label);
    if (it == instr.labels.end()) {
      out.maps.push_back(zero_map(dims_in, dims_out));
    } else {
      out.maps.push_back(
          instr.maps[static_cast<std::size_t>(it - instr.labels.begin())]);
    }
  }
  for (const std::string& label : instr.labels)
    if (std::find(full_labels.begin(), full_labels.end(), label) ==
        full_labels.end())
      throw std::invalid_argument(
          "pad_instrument: original label missing from padded set: " + label);
  return out;
}

/// sum_j || Choi(E_j) - Choi(E'_j) ||_1 over the shared index set.
inline double instrument_choi_distance(const Instrument& a,
                                       const Instrument& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("instrument_choi_distance: index set mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::find(b.labels.begin(), b.labels.end(), a.labels[i]) ==
        b.labels.end())
      throw std::invalid_argument(
          "instrument_choi_distance: index set mismatch");
    const KrausMap& ma = a.maps[i];
    const KrausMap& mb = b.map_for(a.labels[i]);
    if (ma.party_dims_in != mb.party_dims_in ||
        ma.party_dims_out != mb.party_dims_out)
      throw std::invalid_argument("instrument_choi_distance: dim mismatch");
    total += trace_norm(choi_of_map(ma).matrix - choi_of_map(mb).matrix);
  }
  return total;
}

/// Convex mixture with shared classical randomness: each output map has
/// Choi lambda*Choi_a + (1-lambda)*Choi_b over the label union.
inline Instrument mix_instruments(const Instrument& a, const Instrument& b,
                                  double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("mix_instruments: weight outside [0,1]");
  const auto& dims_in = a.maps.front().party_dims_in;
  const auto& dims_out = a.maps.front().party_dims_out;
  if (b.maps.front().party_dims_in != dims_in ||
      b.maps.front().party_dims_out != dims_out)
    throw std::invalid_argument("mix_instruments: party structure mismatch");

  std::vector<std::string> labels = a.labels;
  for (const std::string& label : b.labels)
    if (std::find(labels.begin(), labels.end(), label) == labels.end())
      labels.push_back(label);

  Instrument out;
  out.labels = labels;
  for (const std::string& label : labels) {
    KrausMap m = zero_map(dims_in, dims_out);
    if (lambda > 0.0 &&
        std::find(a.labels.begin(), a.labels.end(), label) != a.labels.end())
      m = map_sum(m, scale_map(a.map_for(label), lambda));
    if (lambda < 1.0 &&
        std::find(b.labels.begin(), b.labels.end(), label) != b.labels.end())
      m = map_sum(m, scale_map(b.map_for(label), 1.0 - lambda));
    out.maps.push_back(std::move(m));
  }
  return out;
}

/// Splits every map into single-Kraus maps labeled "<label>.<k>". Zero maps
/// are kept as-is (they carry no Kraus operators to split).
inline Instrument fine_grain(const Instrument& instr) {
  Instrument out;
  for (std::size_t i = 0; i < instr.size(); ++i) {
    const KrausMap& m = instr.maps[i];
    if (m.is_zero()) {
      out.labels.push_back(instr.labels[i]);
      out.maps.push_back(m);
      continue;
    }
    for (std::size_t k = 0; k < m.kraus.size(); ++k) {
      out.labels.push_back(instr.labels[i] + "." + std::to_string(k));
      out.maps.push_back(
          KrausMap({m.kraus[k]}, m.party_dims_in, m.party_dims_out));
    }
  }
  return out;
}

/// instr (x) identity on extra parties appended on the right.
inline Instrument tensor_identity(const Instrument& instr,
                                  const std::vector<std::size_t>& id_dims) {
  const KrausMap id = identity_map(id_dims);
  Instrument out;
  out.labels = instr.labels;
  for (const KrausMap& m : instr.maps) out.maps.push_back(tensor_map(m, id));
  return out;
}

}  // namespace locc
