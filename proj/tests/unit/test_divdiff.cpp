#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "pathsum/divdiff.hpp"

using namespace pathsum;

namespace {

// Explicit sum over distinct nodes. Only trustworthy for well-separated nodes.
cplx explicit_sum(const std::vector<double>& x, double tau) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double den = 1.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            if (k != j) den *= x[j] - x[k];
        s += std::polar(1.0, x[j] * tau) / den;
    }
    return s;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_SUITE("divdiff") {

TEST_CASE("closed-form examples") {
    const double tau = 0.83;
    CHECK(std::abs(exp_divided_difference(NodeList{1.7}, tau) - std::polar(1.0, 1.7 * tau)) < 1e-15);
    const double a = 2.4;
    CHECK(std::abs(exp_divided_difference(NodeList{a, 0.0}, tau) - (std::polar(1.0, a * tau) - 1.0) / a) < 1e-14);
    CHECK(std::abs(exp_divided_difference(NodeList{a, a}, tau) - I * tau * std::polar(1.0, a * tau)) < 1e-14);
    CHECK(std::abs(exp_divided_difference(NodeList{2.0, 1.0, 0.0}, 1.0) - explicit_sum({2.0, 1.0, 0.0}, 1.0)) < 1e-14);
}

TEST_CASE("explicit sum oracle on separated nodes") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + trial % 6;
        std::vector<double> x;
        while (static_cast<int>(x.size()) <= n) {
            const double v = u(rng);
            if (std::all_of(x.begin(), x.end(), [&](double y) { return std::abs(y - v) > 0.5; })) x.push_back(v);
        }
        const double tau = 0.1 + 3.0 * (trial % 7) / 7.0;
        const cplx want = explicit_sum(x, tau);
        const cplx got = exp_divided_difference(NodeList(x), tau);
        CHECK(std::abs(got - want) <= 1e-11 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("confluent nodes") {
    for (int n = 0; n <= 10; ++n) {
        const double a = -1.3, tau = 2.1;
        const std::vector<double> x(n + 1, a);
        const cplx want = std::pow(I * tau, n) * std::polar(1.0, a * tau) / factorial(n);
        CHECK(std::abs(exp_divided_difference(NodeList(x), tau) - want) <= 1e-12 * std::abs(want));
    }
}

TEST_CASE("continuity at confluence") {
    const double a = 0.7;
    const cplx lim = exp_divided_difference(NodeList{a, a, 0.0}, 1.0);
    CHECK(std::abs(exp_divided_difference(NodeList{a, a + 1e-8, 0.0}, 1.0) - lim) < 1e-6);
}

TEST_CASE("permutation invariance") {
    std::vector<double> x{3.0, -1.0, 0.5, 0.5, 2.2, -4.0};
    const cplx ref = exp_divided_difference(NodeList(x), 1.7);
    std::sort(x.begin(), x.end());
    do {
        CHECK(std::abs(exp_divided_difference(NodeList(x), 1.7) - ref) <= 1e-13 * std::abs(ref));
    } while (std::next_permutation(x.begin(), x.end()));
}

TEST_CASE("simplex bound") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::uniform_real_distribution<double> ut(-10.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = trial % 13;
        std::vector<double> x(n + 1);
        for (auto& v : x) v = u(rng);
        if (trial % 5 == 0) x.back() = x.front();
        const double tau = ut(rng);
        const double bound = std::pow(std::abs(tau), n) / factorial(n);
        CHECK(std::abs(exp_divided_difference(NodeList(x), tau)) <= bound * (1.0 + 1e-10) + 1e-300);
    }
}

TEST_CASE("large spread stays finite") {
    const cplx v = exp_divided_difference(NodeList{1000.0, 0.0, -3.0, 5.0}, 10.0);
    CHECK(std::isfinite(v.real()));
    CHECK(std::isfinite(v.imag()));
    CHECK(std::abs(v) <= 1000.0 / 6.0);
}

TEST_CASE("recurrence residual") {
    CHECK(divided_difference_recurrence_check(NodeList{1.0, 0.0}, 1.0) < 1e-13);
    CHECK(divided_difference_recurrence_check(NodeList{3.0, 2.0, 1.0}, 2.0) < 1e-12);
    CHECK(divided_difference_recurrence_check(NodeList{1.0, 1.0 - 1e-8, 0.0}, 1.0) < 1e-6);
    CHECK_THROWS(divided_difference_recurrence_check(NodeList{1.0, 1.0}, 1.0));
    CHECK_THROWS(divided_difference_recurrence_check(NodeList{1.0}, 1.0));
}

TEST_CASE("node list canonical form and multiplicities") {
    const NodeList n{2.0, -1.0, 2.0, 0.0};
    CHECK(n.canonical() == std::vector<double>{-1.0, 0.0, 2.0, 2.0});
    const auto m = n.multiplicities();
    REQUIRE(m.size() == 3);
    CHECK(m[2] == std::pair<double, int>{2.0, 2});
    CHECK_THROWS(NodeList(std::vector<double>{}));
}

TEST_CASE("cache returns the uncached value") {
    clear_divided_difference_cache();
    CHECK(divided_difference_cache_size() == 0);
    const std::vector<double> x{0.3, 1.1, 0.3};
    const std::vector<double> y{0.3, 0.3, 1.1};
    const cplx direct = exp_divided_difference(NodeList(x), 1.4);
    CHECK(exp_divided_difference_cached(x, 1.4) == direct);
    CHECK(exp_divided_difference_cached(y, 1.4) == direct);
    CHECK(divided_difference_cache_size() == 1);
    exp_divided_difference_cached(x, 1.5);
    CHECK(divided_difference_cache_size() == 2);
}

}
