#pragma once

#include <optional>
#include <vector>

#include "cazackit/seqgen.hpp"
#include "cazackit/sequence.hpp"

namespace cazackit {

/// Recipe for an arbitrary-length set built from prime-length parts.
struct ExtensionPlan {
  std::uint64_t n = 0;
  GoldbachSplit split;
  SetKind kind = SetKind::CyclicShift;
  long count = 0;
  /// Per-column part indices; std::nullopt selects the cyclic Auto pattern.
  std::optional<std::vector<ColumnAssignment>> assignment;
};

/// Column cap: Q1 part count for cyclic shifts, Q1 - 1 for root indices.
long max_columns(const GoldbachSplit& split, SetKind kind);

/// Auto pattern: long index advances with the column, every appended part
/// cycles through its own indices modulo its size.
std::vector<ColumnAssignment> auto_assignment(const GoldbachSplit& split, SetKind kind, long count);

/// Throws ValidationError on any broken plan invariant.
void validate(const ExtensionPlan& plan);

/// The part sets an extension draws from: circulant sets of
/// bjorck/zc(1) bases for CyclicShift, ZC root sets for RootIndex.
std::vector<SequenceSet> default_part_sets(const GoldbachSplit& split, SetKind kind, Family family);

/// s_N[m] = s_Q[m mod Q]
template <typename Scalar>
BasicSequence<Scalar> extend_repetition(const BasicSequence<Scalar>& base, Eigen::Index n) {
  const Eigen::Index q = base.length();
  if (n < q) throw ValidationError("repetition target length is shorter than the base sequence");
  if (q == 0) throw ValidationError("cannot extend an empty sequence");
  ComplexVector<Scalar> out(n);
  for (Eigen::Index m = 0; m < n; ++m) out[m] = base[m % q];
  Provenance p = base.provenance();
  return BasicSequence<Scalar>(std::move(out), base.family(), std::move(p));
}

/// Repetition-extended circulant set: column l = extend_repetition(shift(base, l), n).
template <typename Scalar>
BasicSequenceSet<Scalar> extend_repetition_set(const BasicSequence<Scalar>& base, Eigen::Index n) {
  const BasicSequenceSet<Scalar> prime = circulant_set(base);
  ComplexMatrix<Scalar> m(n, prime.count());
  for (Eigen::Index c = 0; c < prime.count(); ++c) {
    m.col(c) = extend_repetition(BasicSequence<Scalar>(prime.matrix().col(c)), n).samples();
  }
  return BasicSequenceSet<Scalar>(std::move(m), SetKind::CyclicShift, base.family(), prime.assignment());
}

namespace detail {

template <typename Scalar>
Eigen::Index find_part_column(const BasicSequenceSet<Scalar>& part, long index) {
  const auto& a = part.assignment();
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (!a[c].parts.empty() && a[c].parts[0] == index) return static_cast<Eigen::Index>(c);
  }
  throw ValidationError("part set has no column with index " + std::to_string(index));
}

}  // namespace detail

/// Stacks one column from each part set per plan column.
template <typename Scalar>
BasicSequenceSet<Scalar> extend(const ExtensionPlan& plan, const std::vector<BasicSequenceSet<Scalar>>& parts) {
  validate(plan);
  if (parts.size() != plan.split.size()) throw ValidationError("need one part set per split part");
  for (std::size_t p = 0; p < parts.size(); ++p) {
    if (parts[p].length() != static_cast<Eigen::Index>(plan.split[p])) {
      throw ValidationError("part set " + std::to_string(p) + " has length " + std::to_string(parts[p].length()) +
                            ", expected " + std::to_string(plan.split[p]));
    }
    if (parts[p].kind() != plan.kind) throw ValidationError("part set kind does not match the plan kind");
  }

  const std::vector<ColumnAssignment> assign =
      plan.assignment ? *plan.assignment : auto_assignment(plan.split, plan.kind, plan.count);
  ComplexMatrix<Scalar> m(static_cast<Eigen::Index>(plan.n), plan.count);
  for (long c = 0; c < plan.count; ++c) {
    Eigen::Index row = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const Eigen::Index src = detail::find_part_column(parts[p], assign[static_cast<std::size_t>(c)].parts[p]);
      m.col(c).segment(row, parts[p].length()) = parts[p].matrix().col(src);
      row += parts[p].length();
    }
  }

  Family family = parts.front().family();
  for (const auto& p : parts) {
    if (p.family() != family) family = Family::Composite;
  }
  return BasicSequenceSet<Scalar>(std::move(m), plan.kind, family, assign, plan.split);
}

template <typename Scalar>
BasicSequenceSet<Scalar> extend_even(const ExtensionPlan& plan, const std::vector<BasicSequenceSet<Scalar>>& parts) {
  if (plan.split.size() != 2) throw ValidationError("extend_even needs a two-part split");
  return extend(plan, parts);
}

template <typename Scalar>
BasicSequenceSet<Scalar> extend_odd(const ExtensionPlan& plan, const std::vector<BasicSequenceSet<Scalar>>& parts) {
  if (plan.split.size() != 3) throw ValidationError("extend_odd needs a three-part split");
  return extend(plan, parts);
}

/// Cyclic-shift convenience: one base sequence per part.
template <typename Scalar>
BasicSequenceSet<Scalar> extend_even(const ExtensionPlan& plan, const std::vector<BasicSequence<Scalar>>& bases) {
  if (plan.kind != SetKind::CyclicShift) throw ValidationError("base-sequence overload is for cyclic-shift plans");
  std::vector<BasicSequenceSet<Scalar>> parts;
  for (const auto& b : bases) parts.push_back(circulant_set(b));
  return extend_even(plan, parts);
}

template <typename Scalar>
BasicSequenceSet<Scalar> extend_odd(const ExtensionPlan& plan, const std::vector<BasicSequence<Scalar>>& bases) {
  if (plan.kind != SetKind::CyclicShift) throw ValidationError("base-sequence overload is for cyclic-shift plans");
  std::vector<BasicSequenceSet<Scalar>> parts;
  for (const auto& b : bases) parts.push_back(circulant_set(b));
  return extend_odd(plan, parts);
}

/// Column indices of the largest subset whose part indices are pairwise
/// distinct in every part. Long shifts are taken with stride
/// floor(Q1 / min(Q2[,Q3])) starting at 0 when the set allows it.
std::vector<Eigen::Index> orthogonal_subset_indices(const std::vector<ColumnAssignment>& assignment,
                                                    const GoldbachSplit& split);

template <typename Scalar>
BasicSequenceSet<Scalar> orthogonal_subset(const BasicSequenceSet<Scalar>& set) {
  if (set.kind() != SetKind::CyclicShift) throw ValidationError("orthogonal_subset needs a cyclic-shift set");
  if (!set.split()) throw ValidationError("orthogonal_subset needs a Goldbach-extended set");
  return set.select(orthogonal_subset_indices(set.assignment(), *set.split()));
}

}  // namespace cazackit
