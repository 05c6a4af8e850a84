#include "pathsum/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace pathsum {

NodeList::NodeList(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw std::invalid_argument("NodeList: at least one node required");
    for (double x : nodes_)
        if (!std::isfinite(x)) throw std::invalid_argument("NodeList: nodes must be finite");
}

std::vector<double> NodeList::canonical() const {
    auto c = nodes_;
    std::sort(c.begin(), c.end());
    return c;
}

std::vector<std::pair<double, int>> NodeList::multiplicities() const {
    std::vector<std::pair<double, int>> out;
    for (double x : canonical()) {
        if (!out.empty() && out.back().first == x)
            ++out.back().second;
        else
            out.emplace_back(x, 1);
    }
    return out;
}

namespace {

// Dense upper-triangular square matrix, row-major.
struct Upper {
    int n;
    std::vector<cplx> a;
    explicit Upper(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
    cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    cplx operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

Upper square(const Upper& m) {
    Upper r(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int k = i; k < m.n; ++k) {
            const cplx mik = m(i, k);
            if (mik == 0.0) continue;
            for (int j = k; j < m.n; ++j) r(i, j) += mik * m(k, j);
        }
    return r;
}

cplx opitz(std::vector<double> x, double tau) {
    std::sort(x.begin(), x.end());
    const int n = static_cast<int>(x.size());
    if (n == 1) return std::polar(1.0, x[0] * tau);
    if (tau == 0.0) return 0.0;
    const double c = 0.5 * (x.front() + x.back());
    double spread = 0.0;
    for (double& v : x) {
        v -= c;
        spread = std::max(spread, std::abs(v));
    }
    const double norm = std::abs(tau) * (spread + 1.0);
    int s = 0;
    if (norm > 0.25) s = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    const double scale = std::ldexp(tau, -s);

    // B = i*scale*Z; Taylor series of exp(B), terms built by right-multiplying with bidiagonal B.
    std::vector<cplx> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = cplx(0.0, scale * x[i]);
    const cplx sup(0.0, scale);

    Upper e(n), term(n);
    for (int i = 0; i < n; ++i) {
        e(i, i) = 1.0;
        term(i, i) = 1.0;
    }
    for (int k = 1; k < 200; ++k) {
        Upper next(n);
        bool small = k >= n;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                cplx v = term(i, j) * diag[j];
                if (j > i) v += term(i, j - 1) * sup;
                v /= static_cast<double>(k);
                next(i, j) = v;
                e(i, j) += v;
                if (small && std::abs(v) > 1e-18 * std::abs(e(i, j))) small = false;
            }
        term = std::move(next);
        if (small) break;
    }
    for (int q = 0; q < s; ++q) e = square(e);
    return std::polar(1.0, c * tau) * e(0, n - 1);
}

struct Key {
    std::vector<double> nodes;
    double tau;
    bool operator==(const Key&) const = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        std::size_t h = std::hash<double>{}(k.tau);
        for (double x : k.nodes) h ^= std::hash<double>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

std::shared_mutex cache_mutex;
std::unordered_map<Key, cplx, KeyHash> cache;
constexpr std::size_t kCacheLimit = 1u << 20;

}  // namespace

cplx exp_divided_difference(std::span<const double> nodes, double tau) {
    if (nodes.empty()) throw std::invalid_argument("exp_divided_difference: empty node list");
    if (!std::isfinite(tau)) throw std::invalid_argument("exp_divided_difference: tau must be finite");
    return opitz(std::vector<double>(nodes.begin(), nodes.end()), tau);
}

cplx exp_divided_difference(const NodeList& nodes, double tau) {
    return exp_divided_difference(std::span<const double>(nodes.nodes()), tau);
}

cplx exp_divided_difference_cached(std::span<const double> nodes, double tau) {
    Key key{std::vector<double>(nodes.begin(), nodes.end()), tau};
    std::sort(key.nodes.begin(), key.nodes.end());
    {
        std::shared_lock lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const cplx v = exp_divided_difference(std::span<const double>(key.nodes), tau);
    std::unique_lock lock(cache_mutex);
    if (cache.size() >= kCacheLimit) cache.clear();
    cache.emplace(std::move(key), v);
    return v;
}

void clear_divided_difference_cache() {
    std::unique_lock lock(cache_mutex);
    cache.clear();
}

std::size_t divided_difference_cache_size() {
    std::shared_lock lock(cache_mutex);
    return cache.size();
}

double divided_difference_recurrence_check(const NodeList& nodes, double tau) {
    const auto& x = nodes.nodes();
    if (x.size() < 2) throw std::invalid_argument("recurrence check needs at least two nodes");
    auto c = nodes.canonical();
    if (std::adjacent_find(c.begin(), c.end()) != c.end())
        throw std::invalid_argument("recurrence check rejects repeated nodes");
    const std::span<const double> all(x);
    const cplx full = exp_divided_difference(all, tau);
    const cplx right = exp_divided_difference(all.subspan(1), tau);
    const cplx left = exp_divided_difference(all.first(x.size() - 1), tau);
    return std::abs(full - (right - left) / (x.back() - x.front()));
}

}  // namespace pathsum
