#include "cazackit/extend.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cazackit {

long max_columns(const GoldbachSplit& split, SetKind kind) {
  const auto q1 = static_cast<long>(split.parts.front());
  return kind == SetKind::CyclicShift ? q1 : q1 - 1;
}

std::vector<ColumnAssignment> auto_assignment(const GoldbachSplit& split, SetKind kind, long count) {
  std::vector<ColumnAssignment> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0L)));
  for (long c = 0; c < count; ++c) {
    ColumnAssignment a;
    for (std::size_t p = 0; p < split.size(); ++p) {
      const auto q = static_cast<long>(split[p]);
      if (kind == SetKind::CyclicShift) a.parts.push_back(p == 0 ? c : c % q);
      else a.parts.push_back(p == 0 ? c + 1 : (c % (q - 1)) + 1);
    }
    out.push_back(std::move(a));
  }
  return out;
}

void validate(const ExtensionPlan& plan) {
  validate(plan.split);
  if (plan.n != plan.split.n) {
    throw ValidationError("plan length " + std::to_string(plan.n) + " does not match split sum " +
                          std::to_string(plan.split.n));
  }
  if (plan.count < 1) throw ValidationError("plan needs at least one column");
  const long cap = max_columns(plan.split, plan.kind);
  if (plan.count > cap) {
    throw ValidationError("requested " + std::to_string(plan.count) + " columns, cap is " + std::to_string(cap));
  }
  if (plan.kind == SetKind::RootIndex) {
    for (std::uint64_t q : plan.split.parts) {
      if (q == 2) throw ValidationError("root-index extension needs odd prime parts");
    }
  }
  if (!plan.assignment) return;

  const auto& a = *plan.assignment;
  if (static_cast<long>(a.size()) != plan.count) throw ValidationError("explicit assignment size differs from count");
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (a[c].parts.size() != plan.split.size()) {
      throw ValidationError("assignment for column " + std::to_string(c) + " has the wrong number of parts");
    }
    for (std::size_t p = 0; p < plan.split.size(); ++p) {
      const auto q = static_cast<long>(plan.split[p]);
      const long v = a[c].parts[p];
      const bool ok = plan.kind == SetKind::CyclicShift ? (v >= 0 && v < q) : (v >= 1 && v <= q - 1);
      if (!ok) {
        throw ValidationError("assignment index " + std::to_string(v) + " out of range for part " +
                              std::to_string(q));
      }
    }
  }
}

std::vector<SequenceSet> default_part_sets(const GoldbachSplit& split, SetKind kind, Family family) {
  std::vector<SequenceSet> parts;
  for (std::uint64_t q : split.parts) {
    const PrimeQ pq(q);
    if (kind == SetKind::RootIndex) {
      parts.push_back(root_set<double>(pq, family));
    } else if (family == Family::Bjorck) {
      parts.push_back(circulant_set(bjorck<double>(pq)));
    } else if (family == Family::ZC) {
      parts.push_back(circulant_set(zc<double>(1, pq)));
    } else {
      throw ValidationError("part sets are generated for the bjorck and zc families only");
    }
  }
  return parts;
}

namespace {

// Kuhn's augmenting-path matching between long and short indices; columns are edges.
class Matcher {
 public:
  Matcher(const std::vector<ColumnAssignment>& a, long q_short) : a_(a), short_owner_(q_short, -1) {}

  std::vector<std::vector<Eigen::Index>> edges_by_long;

  bool augment(long long_index, std::vector<char>& seen) {
    for (Eigen::Index col : edges_by_long[static_cast<std::size_t>(long_index)]) {
      const long s = a_[static_cast<std::size_t>(col)].parts[1];
      if (seen[static_cast<std::size_t>(s)]) continue;
      seen[static_cast<std::size_t>(s)] = 1;
      const Eigen::Index owner = short_owner_[static_cast<std::size_t>(s)];
      if (owner < 0 || augment(a_[static_cast<std::size_t>(owner)].parts[0], seen)) {
        short_owner_[static_cast<std::size_t>(s)] = col;
        return true;
      }
    }
    return false;
  }

  std::vector<Eigen::Index> matched() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index c : short_owner_) {
      if (c >= 0) out.push_back(c);
    }
    return out;
  }

 private:
  const std::vector<ColumnAssignment>& a_;
  std::vector<Eigen::Index> short_owner_;
};

std::vector<long> preferred_long_order(long q1, long stride) {
  std::vector<long> order;
  std::vector<char> used(static_cast<std::size_t>(q1), 0);
  for (long l = 0; l < q1; l += stride) {
    order.push_back(l);
    used[static_cast<std::size_t>(l)] = 1;
  }
  for (long l = 0; l < q1; ++l) {
    if (!used[static_cast<std::size_t>(l)]) order.push_back(l);
  }
  return order;
}

}  // namespace

std::vector<Eigen::Index> orthogonal_subset_indices(const std::vector<ColumnAssignment>& assignment,
                                                    const GoldbachSplit& split) {
  const auto q1 = static_cast<long>(split[0]);
  long q_min = static_cast<long>(split[1]);
  for (std::size_t p = 2; p < split.size(); ++p) q_min = std::min(q_min, static_cast<long>(split[p]));
  const long stride = std::max(1L, q1 / q_min);
  const std::vector<long> order = preferred_long_order(q1, stride);

  std::vector<Eigen::Index> chosen;
  if (split.size() == 2) {
    Matcher m(assignment, static_cast<long>(split[1]));
    m.edges_by_long.assign(static_cast<std::size_t>(q1), {});
    for (std::size_t c = 0; c < assignment.size(); ++c) {
      m.edges_by_long[static_cast<std::size_t>(assignment[c].parts[0])].push_back(static_cast<Eigen::Index>(c));
    }
    for (long l : order) {
      std::vector<char> seen(split[1], 0);
      m.augment(l, seen);
    }
    chosen = m.matched();
  } else {
    // Three parts: greedy over the preferred long order, all parts distinct.
    std::vector<std::set<long>> used(split.size());
    std::vector<std::vector<Eigen::Index>> by_long(static_cast<std::size_t>(q1));
    for (std::size_t c = 0; c < assignment.size(); ++c) {
      by_long[static_cast<std::size_t>(assignment[c].parts[0])].push_back(static_cast<Eigen::Index>(c));
    }
    for (long l : order) {
      for (Eigen::Index c : by_long[static_cast<std::size_t>(l)]) {
        const auto& parts = assignment[static_cast<std::size_t>(c)].parts;
        bool free = true;
        for (std::size_t p = 0; p < parts.size(); ++p) free = free && !used[p].count(parts[p]);
        if (!free) continue;
        for (std::size_t p = 0; p < parts.size(); ++p) used[p].insert(parts[p]);
        chosen.push_back(c);
        break;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace cazackit
