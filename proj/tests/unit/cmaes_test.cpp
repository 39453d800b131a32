#include "chemoswarm/cmaes.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace chemo;

namespace {

double sphere(const Eigen::VectorXd& x) { return -x.squaredNorm(); }

std::vector<double> evaluate(const std::vector<Eigen::VectorXd>& xs) {
    std::vector<double> f;
    for (const auto& x : xs) f.push_back(sphere(x));
    return f;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TEST_CASE("standard parameters") {
    const auto p = CmaParameters::standard(82, 100);
    CHECK(p.lambda == 100);
    CHECK(p.mu == 50);
    CHECK(p.weights.size() == 50);
    CHECK(p.weights.sum() == doctest::Approx(1.0));
    for (int i = 1; i < p.mu; ++i) CHECK(p.weights[i] < p.weights[i - 1]);
    CHECK(p.mueff == doctest::Approx(1.0 / p.weights.squaredNorm()));
    CHECK(p.c1 + p.cmu <= 1.0);
    CHECK(p.damps > 1.0);

    const auto d = CmaParameters::standard(10);
    CHECK(d.lambda == 4 + static_cast<int>(std::floor(3 * std::log(10.0))));
}

TEST_CASE("ask") {
    const auto p = CmaParameters::standard(82, 100);
    CmaEs es(p, Eigen::VectorXd::Zero(82), 0.1);
    Rng rng(1);
    const auto xs = es.ask(rng);
    CHECK(xs.size() == 100);
    for (const auto& x : xs) CHECK(x.size() == 82);

    Rng a(5), b(5);
    const auto xa = es.ask(a);
    const auto xb = es.ask(b);
    for (std::size_t i = 0; i < xa.size(); ++i) CHECK(xa[i] == xb[i]);

    Eigen::VectorXd mean = Eigen::VectorXd::LinSpaced(82, -1.0, 1.0);
    CmaEs tiny(p, mean, 1e-300);
    for (const auto& x : tiny.ask(rng)) CHECK((x - mean).cwiseAbs().maxCoeff() < 1e-290);
}

TEST_CASE("ask sample variance matches sigma squared") {
    // pooled over 10 components x 20000 generations x 10 samples = 2e6 draws;
    // standard error of the variance estimate is sigma^2 sqrt(2 / N)
    const int dim = 10;
    const double sigma = 0.3;
    CmaEs es(CmaParameters::standard(dim, 10), Eigen::VectorXd::Zero(dim), sigma);
    Rng rng(2024);
    double sum_sq = 0.0;
    double sum = 0.0;
    std::size_t n = 0;
    for (int g = 0; g < 20000; ++g)
        for (const auto& x : es.ask(rng)) {
            sum_sq += x.squaredNorm();
            sum += x.sum();
            n += static_cast<std::size_t>(dim);
        }
    const double var = sum_sq / static_cast<double>(n);
    const double se = sigma * sigma * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(std::abs(var - sigma * sigma) < 3.0 * se);
    CHECK(std::abs(sum / static_cast<double>(n)) < 3.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("tell rejects bad input") {
    CmaEs es(CmaParameters::standard(4, 6), Eigen::VectorXd::Zero(4), 0.5);
    Rng rng(1);
    const auto xs = es.ask(rng);
    std::vector<double> f(6, 1.0);
    f[3] = std::nan("");
    CHECK_THROWS_AS(es.tell(xs, f), RangeError);
    f[3] = INFINITY;
    CHECK_THROWS_AS(es.tell(xs, f), RangeError);
    f.pop_back();
    CHECK_THROWS_AS(es.tell(xs, f), RangeError);
}

TEST_CASE("equal fitness recombines in sampling order") {
    const auto p = CmaParameters::standard(5, 8);
    CmaEs es(p, Eigen::VectorXd::Zero(5), 0.5);
    Rng rng(3);
    const auto xs = es.ask(rng);
    es.tell(xs, std::vector<double>(8, 2.5));
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(5);
    for (int i = 0; i < p.mu; ++i) expected += p.weights[i] * xs[static_cast<std::size_t>(i)];
    CHECK((es.state().mean - expected).norm() < 1e-14);
}

TEST_CASE("tell is invariant to fitness offsets") {
    const auto p = CmaParameters::standard(6, 10);
    CmaEs a(p, Eigen::VectorXd::Ones(6), 0.4);
    CmaEs b = a;
    Rng ra(9), rb(9);
    for (int g = 0; g < 15; ++g) {
        const auto xa = a.ask(ra);
        const auto xb = b.ask(rb);
        auto fa = evaluate(xa);
        auto fb = evaluate(xb);
        for (double& f : fb) f = f * 1.0 + 1000.0;
        a.tell(xa, fa);
        b.tell(xb, fb);
    }
    CHECK(a.state().mean == b.state().mean);
    CHECK(a.state().cov == b.state().cov);
    CHECK(a.state().sigma == b.state().sigma);
}

TEST_CASE("covariance stays symmetric positive definite") {
    const auto p = CmaParameters::standard(82, 20);
    CmaEs es(p, Eigen::VectorXd::Zero(82), 0.1);
    Rng rng(4);
    for (int g = 0; g < 40; ++g) {
        const auto xs = es.ask(rng);
        es.tell(xs, evaluate(xs));
        const auto& c = es.state().cov;
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(es.state().sigma > 0.0);
        CHECK(es.state().generation == g + 1);
    }
}

TEST_CASE("resume from state reproduces the trajectory") {
    const auto p = CmaParameters::standard(8, 10);
    CmaEs straight(p, Eigen::VectorXd::Ones(8), 0.3);
    Rng rng(17);
    for (int g = 0; g < 5; ++g) {
        const auto xs = straight.ask(rng);
        straight.tell(xs, evaluate(xs));
    }
    CmaEs resumed(p, straight.state());
    Rng r1(18), r2(18);
    for (int g = 0; g < 5; ++g) {
        const auto x1 = straight.ask(r1);
        const auto x2 = resumed.ask(r2);
        for (std::size_t i = 0; i < x1.size(); ++i) CHECK(x1[i] == x2[i]);
        straight.tell(x1, evaluate(x1));
        resumed.tell(x2, evaluate(x2));
    }
    CHECK(straight.state().mean == resumed.state().mean);

    CmaState broken = straight.state();
    broken.sigma = -1.0;
    CHECK_THROWS_AS(CmaEs(p, broken), NumericError);
    broken = straight.state();
    broken.cov(0, 1) += 1.0;
    CHECK_THROWS_AS(CmaEs(p, broken), NumericError);
}

TEST_CASE("sphere: median best improves over 20 restarts") {
    const int dim = 10;
    const int checkpoints[] = {1, 30, 60, 90, 120, 150};
    std::vector<std::vector<double>> best_at(std::size(checkpoints));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CmaEs es(CmaParameters::standard(dim), Eigen::VectorXd::Ones(dim), 0.5);
        Rng rng(seed);
        std::size_t next = 0;
        for (int g = 1; g <= 150; ++g) {
            const auto xs = es.ask(rng);
            const auto f = evaluate(xs);
            es.tell(xs, f);
            if (g == checkpoints[next]) best_at[next++].push_back(*std::max_element(f.begin(), f.end()));
        }
    }
    for (std::size_t k = 1; k < best_at.size(); ++k) CHECK(median(best_at[k]) > median(best_at[k - 1]));
    CHECK(median(best_at.back()) > -1e-6);
}
