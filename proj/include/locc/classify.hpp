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
#include <stdexcept>
#include <string>
#include <vector>

#include "locc/choi.hpp"
#include "locc/instrument.hpp"
#include "locc/kraus.hpp"
#include "locc/matrix.hpp"
#include "locc/spectral.hpp"

namespace locc {

/// Three-valued membership verdict. Separability is certified only through
/// the decomposition at hand, so a failed certificate stays "unknown" rather
/// than becoming a silent "no"; a definite "no" always carries a numeric
/// witness.
enum class Verdict { yes, no, unknown };

/// One representative per nontrivial bipartition of n parties: the nonempty
/// subsets of {1, ..., n-1}. Party 0 stays on the untransposed side, since a
/// subset and its complement give the same transposed spectrum.
inline std::vector<std::vector<std::size_t>> nontrivial_cuts(std::size_t n) {
  std::vector<std::vector<std::size_t>> cuts;
  if (n < 2) return cuts;
  const std::size_t top = std::size_t{1} << (n - 1);
  for (std::size_t mask = 1; mask < top; ++mask) {
    std::vector<std::size_t> cut;
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (mask & (std::size_t{1} << k)) cut.push_back(k + 1);
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

/// Partial-transpose test of one map across one cut.
struct PptCutResult {
  std::vector<std::size_t> cut;
  double min_eigenvalue = 0.0;
  Verdict verdict = Verdict::yes;
};

namespace detail {

inline PptCutResult ppt_cut_test(const ChoiMatrix& c,
                                 const std::vector<std::size_t>& cut,
                                 double tol) {
  const std::size_t n = c.party_dims_in.size();
  std::vector<std::size_t> slots;
  slots.reserve(2 * cut.size());
  for (std::size_t k : cut) {
    if (k >= n)
      throw std::invalid_argument("is_ppt_map: party index out of range");
    slots.push_back(2 * k);
    slots.push_back(2 * k + 1);
  }
  const CMatrix pt = partial_transpose(c.matrix, c.interleaved_dims(), slots);
  const EigResult e = hermitian_eig(pt);
  PptCutResult r;
  r.cut = cut;
  r.min_eigenvalue = e.values.empty() ? 0.0 : e.values.back();
  r.verdict = r.min_eigenvalue >= -tol ? Verdict::yes : Verdict::no;
  return r;
}

/// Singular values, in decreasing order, of a Kraus operator regrouped
/// across a bipartition: party k contributes its (output, input) index pair
/// to whichever side of the cut holds k. A single nonzero value means the
/// operator is a tensor product of blocks local to the two sides.
inline std::vector<double> kraus_cut_schmidt(
    const CMatrix& op, const std::vector<std::size_t>& dims_in,
    const std::vector<std::size_t>& dims_out,
    const std::vector<std::size_t>& cut) {
  const std::size_t n = dims_in.size();
  std::vector<bool> right(n, false);
  for (std::size_t k : cut) right[k] = true;
  std::size_t rows = 1, cols = 1;
  for (std::size_t k = 0; k < n; ++k)
    (right[k] ? cols : rows) *= dims_out[k] * dims_in[k];
  CMatrix v(rows, cols);
  std::vector<std::size_t> io, ia;
  for (std::size_t i = 0; i < op.rows(); ++i) {
    decode_index(i, dims_out, io);
    for (std::size_t a = 0; a < op.cols(); ++a) {
      decode_index(a, dims_in, ia);
      std::size_t r = 0, c = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t pair = dims_out[k] * dims_in[k];
        const std::size_t idx = io[k] * dims_in[k] + ia[k];
        if (right[k])
          c = c * pair + idx;
        else
          r = r * pair + idx;
      }
      v(r, c) = op(i, a);
    }
  }
  // Gram matrix on the smaller side keeps the eigenproblem small.
  const CMatrix g = rows <= cols ? v * v.adjoint() : v.adjoint() * v;
  const EigResult e = hermitian_eig(g);
  std::vector<double> sv;
  sv.reserve(e.values.size());
  for (double l : e.values) sv.push_back(std::sqrt(std::max(0.0, l)));
  return sv;
}

}  // namespace detail

/// Transposes the chosen parties' input and output copies of the Choi matrix
/// and reports the smallest eigenvalue. The map is PPT across the cut iff
/// that eigenvalue is >= -tol. Repeated indices in the cut cancel nothing:
/// the transpose toggle is idempotent per party.
inline PptCutResult is_ppt_map(const KrausMap& m,
                               const std::vector<std::size_t>& cut,
                               double tol = 1e-9) {
  return detail::ppt_cut_test(choi_of_map(m), cut, tol);
}

/// Every nontrivial cut, in nontrivial_cuts order. Empty for one party.
/// A distinct name, not an overload: a braced cut literal would otherwise
/// convert to the tolerance parameter and silently test the wrong thing.
inline std::vector<PptCutResult> is_ppt_map_all_cuts(const KrausMap& m,
                                                     double tol = 1e-9) {
  const ChoiMatrix c = choi_of_map(m);
  std::vector<PptCutResult> out;
  for (const auto& cut : nontrivial_cuts(m.party_count()))
    out.push_back(detail::ppt_cut_test(c, cut, tol));
  return out;
}

/// Separability certificate for one map through its given decomposition.
/// On "unknown" the first failing operator and cut are recorded along with
/// the offending Schmidt coefficients; the map might still admit a product
/// decomposition this check cannot see, so "unknown" is never tightened to
/// "no" here.
struct SepResult {
  Verdict verdict = Verdict::yes;
  std::size_t kraus_index = 0;
  std::vector<std::size_t> cut;
  std::vector<double> schmidt_coeffs;
};

/// Sufficient product-form test: yes iff every Kraus operator has a single
/// nonzero Schmidt coefficient across every nontrivial bipartition. The
/// relative tolerance sits above the sqrt(eps) noise floor of the squared
/// singular-value problem.
inline SepResult is_sep_finegrained(const KrausMap& m, double tol = 1e-7) {
  check_kraus_shapes(m);
  SepResult r;
  const auto cuts = nontrivial_cuts(m.party_count());
  for (std::size_t i = 0; i < m.kraus.size(); ++i) {
    for (const auto& cut : cuts) {
      std::vector<double> sv = detail::kraus_cut_schmidt(
          m.kraus[i], m.party_dims_in, m.party_dims_out, cut);
      if (sv.size() > 1 && sv[0] > 0.0 && sv[1] > tol * sv[0]) {
        r.verdict = Verdict::unknown;
        r.kraus_index = i;
        r.cut = cut;
        // Keep only the significant coefficients: their count is the
        // operator Schmidt rank across the failing cut.
        for (double s : sv)
          if (s > tol * sv[0]) r.schmidt_coeffs.push_back(s);
        return r;
      }
    }
  }
  return r;
}

/// Verdicts and witnesses for one labeled map of an instrument.
struct MapClassification {
  std::string label;
  Verdict sep_finegrained = Verdict::yes;
  Verdict ppt = Verdict::yes;
  double min_pt_eigenvalue = 0.0;      // most negative over all cuts
  std::vector<std::size_t> worst_cut;  // cut attaining it
  std::vector<double> schmidt_coeffs;  // filled when separability fails
};

/// Instrument-level verdicts with per-map detail. Aggregate rule: "no"
/// dominates "unknown" dominates "yes".
struct ClassificationReport {
  std::vector<MapClassification> maps;
  Verdict sep_finegrained = Verdict::yes;
  Verdict ppt = Verdict::yes;
};

/// Classifies every map of the instrument. A negative partial-transpose
/// eigenvalue refutes separability outright, so it upgrades an inconclusive
/// fine-grained verdict to a definite "no" carrying the same numeric
/// witness.
inline ClassificationReport classify_instrument(const Instrument& instr,
                                                double tol = 1e-9) {
  ClassificationReport report;
  for (std::size_t j = 0; j < instr.size(); ++j) {
    MapClassification mc;
    mc.label = instr.labels[j];
    const KrausMap& m = instr.maps[j];

    bool first = true;
    for (const PptCutResult& pr : is_ppt_map_all_cuts(m, tol)) {
      if (first || pr.min_eigenvalue < mc.min_pt_eigenvalue) {
        mc.min_pt_eigenvalue = pr.min_eigenvalue;
        mc.worst_cut = pr.cut;
      }
      first = false;
      if (pr.verdict == Verdict::no) mc.ppt = Verdict::no;
    }

    const SepResult sep = is_sep_finegrained(m);
    mc.sep_finegrained = sep.verdict;
    mc.schmidt_coeffs = sep.schmidt_coeffs;
    if (mc.ppt == Verdict::no) mc.sep_finegrained = Verdict::no;

    if (mc.ppt == Verdict::no) report.ppt = Verdict::no;
    if (mc.sep_finegrained == Verdict::no)
      report.sep_finegrained = Verdict::no;
    else if (mc.sep_finegrained == Verdict::unknown &&
             report.sep_finegrained == Verdict::yes)
      report.sep_finegrained = Verdict::unknown;
    report.maps.push_back(std::move(mc));
  }
  return report;
}

}  // namespace locc
