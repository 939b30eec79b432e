#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cazackit/numtheory.hpp"
#include "cazackit/types.hpp"

namespace cazackit {

enum class Family { Bjorck, ZC, Composite, Raw };

std::string_view to_string(Family f);
Family parse_family(std::string_view s);

/// Where a sequence came from. Unset fields are unknown / not applicable.
struct Provenance {
  std::optional<long> shift;
  std::optional<long> root;
  std::optional<GoldbachSplit> split;
};

template <typename Scalar = double>
class BasicSequence {
 public:
  using Samples = ComplexVector<Scalar>;

  BasicSequence() = default;
  explicit BasicSequence(Samples samples, Family family = Family::Raw, Provenance provenance = {})
      : samples_(std::move(samples)), family_(family), provenance_(std::move(provenance)) {}

  Eigen::Index length() const noexcept { return samples_.size(); }
  const Samples& samples() const noexcept { return samples_; }
  std::complex<Scalar> operator[](Eigen::Index i) const { return samples_[i]; }
  Family family() const noexcept { return family_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  bool operator==(const BasicSequence& o) const { return samples_ == o.samples_ && family_ == o.family_; }

 private:
  Samples samples_;
  Family family_ = Family::Raw;
  Provenance provenance_;
};

using ComplexSequence = BasicSequence<double>;

enum class SetKind { CyclicShift, RootIndex };

std::string_view to_string(SetKind k);
SetKind parse_set_kind(std::string_view s);

/// Part indices used to build one column. For CyclicShift sets these are
/// cyclic-shift indices; for RootIndex sets they are root indices (1-based).
/// parts[0] belongs to the long part, parts[1..] to the appended parts.
struct ColumnAssignment {
  std::vector<long> parts;
  bool operator==(const ColumnAssignment&) const = default;
};

/// Ordered, equal-length columns stored as an N x C matrix.
template <typename Scalar = double>
class BasicSequenceSet {
 public:
  using Matrix = ComplexMatrix<Scalar>;

  BasicSequenceSet() = default;
  BasicSequenceSet(Matrix columns, SetKind kind, Family family, std::vector<ColumnAssignment> assignment,
                   std::optional<GoldbachSplit> split = std::nullopt)
      : columns_(std::move(columns)),
        kind_(kind),
        family_(family),
        assignment_(std::move(assignment)),
        split_(std::move(split)) {
    if (static_cast<Eigen::Index>(assignment_.size()) != columns_.cols()) {
      throw ValidationError("assignment map size does not match column count");
    }
  }

  Eigen::Index length() const noexcept { return columns_.rows(); }
  Eigen::Index count() const noexcept { return columns_.cols(); }
  const Matrix& matrix() const noexcept { return columns_; }
  SetKind kind() const noexcept { return kind_; }
  Family family() const noexcept { return family_; }
  const std::vector<ColumnAssignment>& assignment() const noexcept { return assignment_; }
  const std::optional<GoldbachSplit>& split() const noexcept { return split_; }

  BasicSequence<Scalar> column(Eigen::Index c) const {
    Provenance p;
    const auto& a = assignment_.at(static_cast<std::size_t>(c)).parts;
    if (!a.empty()) {
      if (kind_ == SetKind::CyclicShift) p.shift = a[0];
      else p.root = a[0];
    }
    p.split = split_;
    return BasicSequence<Scalar>(columns_.col(c), family_, std::move(p));
  }

  /// Subset by column index, preserving order.
  BasicSequenceSet select(const std::vector<Eigen::Index>& cols) const {
    Matrix m(length(), static_cast<Eigen::Index>(cols.size()));
    std::vector<ColumnAssignment> a;
    a.reserve(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
      m.col(static_cast<Eigen::Index>(i)) = columns_.col(cols[i]);
      a.push_back(assignment_.at(static_cast<std::size_t>(cols[i])));
    }
    return BasicSequenceSet(std::move(m), kind_, family_, std::move(a), split_);
  }

 private:
  Matrix columns_;
  SetKind kind_ = SetKind::CyclicShift;
  Family family_ = Family::Raw;
  std::vector<ColumnAssignment> assignment_;
  std::optional<GoldbachSplit> split_;
};

using SequenceSet = BasicSequenceSet<double>;

}  // namespace cazackit
