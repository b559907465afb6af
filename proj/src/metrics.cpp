#include "smlsom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace smlsom
{

Partition::Partition(std::span<const std::int64_t> labels)
{
    std::map<std::int64_t, std::size_t> dense;
    group_.reserve(labels.size());
    for (auto l : labels)
    {
        auto [it, inserted] = dense.emplace(l, dense.size());
        group_.push_back(it->second);
    }
    groups_ = dense.size();
}

namespace
{

struct Contingency
{
    std::vector<std::vector<double>> joint;
    std::vector<double> rows;
    std::vector<double> cols;
    double n = 0.0;
};

Contingency contingency(const Partition& u, const Partition& v)
{
    if (u.size() != v.size())
        throw std::invalid_argument("partitions have different lengths");
    Contingency t;
    t.joint.assign(u.groups(), std::vector<double>(v.groups(), 0.0));
    t.rows.assign(u.groups(), 0.0);
    t.cols.assign(v.groups(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        t.joint[u.group()[i]][v.group()[i]] += 1.0;
        t.rows[u.group()[i]] += 1.0;
        t.cols[v.group()[i]] += 1.0;
    }
    t.n = static_cast<double>(u.size());
    return t;
}

double pairs(double k)
{
    return 0.5 * k * (k - 1.0);
}

bool identical(const Partition& u, const Partition& v)
{
    // dense relabeling by first appearance makes equal partitions equal vectors
    return u.group() == v.group();
}

} // namespace

double ari(const Partition& u, const Partition& v)
{
    const auto t = contingency(u, v);
    if (u.size() < 2)
        throw std::invalid_argument("ARI needs at least 2 samples");

    double sum_ij = 0.0;
    for (const auto& row : t.joint)
        for (double c : row)
            sum_ij += pairs(c);
    double sum_a = 0.0;
    for (double a : t.rows)
        sum_a += pairs(a);
    double sum_b = 0.0;
    for (double b : t.cols)
        sum_b += pairs(b);

    const double expected = sum_a * sum_b / pairs(t.n);
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom     = max_index - expected;
    if (denom == 0.0)
        return identical(u, v) ? 1.0 : 0.0;
    return (sum_ij - expected) / denom;
}

double nmi(const Partition& u, const Partition& v)
{
    const auto t = contingency(u, v);
    if (u.size() < 1)
        throw std::invalid_argument("NMI needs at least 1 sample");

    auto entropy = [&](const std::vector<double>& margin) {
        double h = 0.0;
        for (double c : margin)
            if (c > 0.0)
            {
                const double q = c / t.n;
                h -= q * std::log(q);
            }
        return h;
    };
    const double hu = entropy(t.rows);
    const double hv = entropy(t.cols);

    double mi = 0.0;
    for (std::size_t a = 0; a < t.rows.size(); ++a)
        for (std::size_t b = 0; b < t.cols.size(); ++b)
        {
            const double c = t.joint[a][b];
            if (c > 0.0)
                mi += (c / t.n) * std::log(c * t.n / (t.rows[a] * t.cols[b]));
        }

    const double h = std::max(hu, hv);
    if (h == 0.0)
        return 1.0;
    return std::clamp(mi / h, 0.0, 1.0);
}

} // namespace smlsom
