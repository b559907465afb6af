#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace smlsom
{

/// Group id per sample, relabeled densely to 0..groups-1 in order of first
/// appearance.
class Partition
{
  public:
    explicit Partition(std::span<const std::int64_t> labels);

    template <class T>
    static Partition from(const std::vector<T>& labels)
    {
        std::vector<std::int64_t> v(labels.begin(), labels.end());
        return Partition(v);
    }

    std::size_t size() const { return group_.size(); }
    std::size_t groups() const { return groups_; }
    const std::vector<std::size_t>& group() const { return group_; }

  private:
    std::vector<std::size_t> group_;
    std::size_t groups_ = 0;
};

/// Hubert-Arabie adjusted Rand index from the contingency table. When the
/// expected-index denominator vanishes the result is 1 for identical
/// partitions and 0 otherwise.
double ari(const Partition& u, const Partition& v);

/// Mutual information over the larger of the two entropies (natural log).
/// Two single-group partitions give 1.
double nmi(const Partition& u, const Partition& v);

} // namespace smlsom
