#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pathsum/types.hpp"

namespace pathsum {

class NodeList {
public:
    NodeList() = default;
    explicit NodeList(std::vector<double> nodes);
    NodeList(std::initializer_list<double> nodes) : NodeList(std::vector<double>(nodes)) {}

    const std::vector<double>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }

    std::vector<double> canonical() const;
    // distinct values (ascending) with multiplicities
    std::vector<std::pair<double, int>> multiplicities() const;

private:
    std::vector<double> nodes_;
};

// exp(i [x_0..x_n] tau): the divided difference of x -> exp(i x tau).
// Computed as the (0,n) entry of exp(i tau Z), Z bidiagonal (Opitz), by scaling and squaring.
cplx exp_divided_difference(std::span<const double> nodes, double tau);
cplx exp_divided_difference(const NodeList& nodes, double tau);

// Same value, memoized on (canonical nodes, tau). Safe for concurrent use.
cplx exp_divided_difference_cached(std::span<const double> nodes, double tau);
void clear_divided_difference_cache();
std::size_t divided_difference_cache_size();

double divided_difference_recurrence_check(const NodeList& nodes, double tau);

}  // namespace pathsum
