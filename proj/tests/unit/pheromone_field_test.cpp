#include "chemoswarm/pheromone_field.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace chemo;

namespace {

int brute_force_disc_cells(double cx, double cy, double radius, int w, int h) {
    int count = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double dx = x + 0.5 - cx;
            double dy = y + 0.5 - cy;
            dx -= w * std::round(dx / w);
            dy -= h * std::round(dy / h);
            if (dx * dx + dy * dy <= radius * radius) ++count;
        }
    return count;
}

} // namespace

TEST_CASE("gaussian spots") {
    const FieldDims dims{600, 600};
    const GaussianSpot spot{1.0, 50.0, 300.0, 300.0};
    const auto field = PheromoneField::from_spots(dims, std::vector{spot});
    CHECK(field.amount(300, 300) == 1.0);
    CHECK(field.amount(350, 300) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(field.amount(300, 350) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(field.amount(350, 350) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_FALSE(field.owner(300, 300).has_value());

    const auto doubled = PheromoneField::from_spots(dims, std::vector{spot, spot});
    CHECK(doubled.amount(300, 300) == 2.0);
    CHECK(doubled.read({300.5, 300.5}) == 1.0);
}

TEST_CASE("gaussian spots use minimum-image distance") {
    const FieldDims dims{100, 80};
    const auto field = PheromoneField::from_spots(dims, std::vector{GaussianSpot{0.8, 10.0, 2.0, 3.0}});
    // (98, 3) is 4 cells away across the seam
    CHECK(field.amount(98, 3) == doctest::Approx(0.8 * std::exp(-16.0 / 200.0)));
    CHECK(field.amount(2, 78) == doctest::Approx(0.8 * std::exp(-25.0 / 200.0)));
    for (int y = 0; y < 80; y += 7)
        for (int x = 0; x < 100; x += 9) {
            double dx = x - 2.0;
            double dy = y - 3.0;
            dx -= 100 * std::round(dx / 100);
            dy -= 80 * std::round(dy / 80);
            CHECK(field.amount(x, y) ==
                  doctest::Approx(0.8 * std::exp(-(dx * dx + dy * dy) / 200.0)).epsilon(1e-13));
        }
}

TEST_CASE("random spot ranges") {
    Rng rng(42);
    const SpotRanges ranges{};
    for (const auto& s : random_spots(rng, 500, ranges)) {
        CHECK(s.amplitude >= 0.2);
        CHECK(s.amplitude <= 1.0);
        CHECK(s.sigma >= 50.0);
        CHECK(s.sigma <= 100.0);
        CHECK(s.xc >= 2.0);
        CHECK(s.xc <= 597.0);
        CHECK(s.yc >= 2.0);
        CHECK(s.yc <= 597.0);
    }
    const auto small = SpotRanges::for_field({150, 120});
    CHECK(small.center_x.hi == 147.0);
    CHECK(small.center_y.hi == 117.0);
    CHECK(small.sigma.lo == doctest::Approx(10.0));
    CHECK(small.sigma.hi == doctest::Approx(20.0));
    const auto full = SpotRanges::for_field({600, 600});
    CHECK(full.sigma.lo == 50.0);
    CHECK(full.center_x.hi == 597.0);

    Rng a(7), b(7);
    CHECK(init_spots(a, 5, {64, 64}, small).snapshot() == init_spots(b, 5, {64, 64}, small).snapshot());
    Rng c(7);
    CHECK(init_spots(c, 0, {64, 64}, small).total_mass() == 0.0);
}

TEST_CASE("read") {
    PheromoneField field({600, 600});
    CHECK(field.read({123.4, 77.7}) == 0.0);
    field.set_amount(20, 30, 1.4);
    CHECK(field.read({20.9, 30.1}) == 1.0);
    CHECK(field.amount(20, 30) == 1.4);
    field.set_amount(599, 10, 0.25);
    CHECK(field.read({-0.5, 10.0}) == 0.25);
    CHECK(field.read({599.5, 610.2}) == 0.25);
}

TEST_CASE("sense_disc") {
    PheromoneField field({600, 600});
    CHECK(field.sense_disc({300.5, 300.5}, 2.0) == 0.0);

    field.fill(0.37);
    CHECK(field.sense_disc({17.2, 599.9}, 2.0) == doctest::Approx(0.37));

    field.fill(0.0);
    field.set_amount(300, 300, 1.0);
    const int cells = brute_force_disc_cells(300.5, 300.5, 2.0, 600, 600);
    CHECK(cells == 13);
    CHECK(field.sense_disc({300.5, 300.5}, 2.0) == doctest::Approx(1.0 / cells));

    // off-center discs against brute-force cell counts
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 40.0);
    PheromoneField ones({40, 40});
    ones.fill(1.0);
    for (int i = 0; i < 50; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        PheromoneField single({40, 40});
        single.set_amount(static_cast<int>(x), static_cast<int>(y), 1.0);
        const int n = brute_force_disc_cells(x, y, 2.0, 40, 40);
        double dx = static_cast<int>(x) + 0.5 - x;
        double dy = static_cast<int>(y) + 0.5 - y;
        const double expected = (dx * dx + dy * dy <= 4.0) ? 1.0 / n : 0.0;
        CHECK(single.sense_disc({x, y}, 2.0) == doctest::Approx(expected));
        CHECK(ones.sense_disc({x, y}, 2.0) == doctest::Approx(1.0));
    }
}

TEST_CASE("sense_disc clamps per cell") {
    PheromoneField field({50, 50});
    field.fill(3.0);
    CHECK(field.sense_disc({10.0, 10.0}, 2.0) == 1.0);
}

TEST_CASE("deposit") {
    SUBCASE("3x3 overwrite") {
        PheromoneField field({600, 600});
        field.fill(0.3);
        field.deposit(4, {10.2, 10.8});
        for (int y = 8; y <= 12; ++y)
            for (int x = 8; x <= 12; ++x) {
                const bool inside = x >= 9 && x <= 11 && y >= 9 && y <= 11;
                CHECK(field.amount(x, y) == (inside ? 1.0 : 0.3));
                CHECK(field.owner(x, y).has_value() == inside);
                if (inside) CHECK(*field.owner(x, y) == 4u);
            }
    }
    SUBCASE("wraps at edges") {
        PheromoneField field({600, 600});
        field.deposit(1, {0.5, 0.5});
        double mass = 0.0;
        for (int y : {599, 0, 1})
            for (int x : {599, 0, 1}) {
                CHECK(field.amount(x, y) == 1.0);
                mass += field.amount(x, y);
            }
        CHECK(field.total_mass() == mass);
    }
    SUBCASE("last writer owns the overlap") {
        PheromoneField field({100, 100});
        field.deposit(0, {10.5, 10.5});
        field.deposit(1, {11.5, 10.5});
        CHECK(*field.owner(9, 10) == 0u);
        CHECK(*field.owner(10, 10) == 1u);
        CHECK(*field.owner(11, 10) == 1u);
        CHECK(*field.owner(12, 10) == 1u);
    }
    SUBCASE("idempotent") {
        PheromoneField a({30, 30});
        a.fill(0.1);
        a.deposit(2, {5.5, 6.5});
        auto b = a;
        b.deposit(2, {5.5, 6.5});
        CHECK(a.snapshot() == b.snapshot());
        for (int y = 0; y < 30; ++y)
            for (int x = 0; x < 30; ++x) CHECK(a.owner(x, y) == b.owner(x, y));
    }
}

TEST_CASE("decay") {
    SUBCASE("multiplicative") {
        PheromoneField field({10, 10});
        field.set_amount(3, 3, 1.0);
        field.decay(0.001);
        CHECK(field.amount(3, 3) == 1.0 * (1.0 - 0.001));
        CHECK(field.amount(4, 4) == 0.0);
    }
    SUBCASE("rate zero is identity") {
        auto field = PheromoneField::from_spots({40, 40}, std::vector{GaussianSpot{0.7, 8.0, 10.0, 20.0}});
        const auto before = field.snapshot();
        field.decay(0.0);
        CHECK(field.snapshot() == before);
    }
    SUBCASE("composition") {
        auto a = PheromoneField::from_spots({40, 40}, std::vector{GaussianSpot{0.7, 8.0, 10.0, 20.0}});
        auto b = a;
        const double r = 0.013;
        a.decay(r);
        a.decay(r);
        b.decay(1.0 - (1.0 - r) * (1.0 - r));
        const auto sa = a.snapshot();
        const auto sb = b.snapshot();
        for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i] == doctest::Approx(sb[i]).epsilon(1e-14));
    }
    SUBCASE("pending decay is folded before a write") {
        PheromoneField field({20, 20});
        field.set_amount(1, 1, 1.0);
        field.decay(0.5);
        field.deposit(0, {10.5, 10.5});
        field.decay(0.5);
        CHECK(field.amount(1, 1) == 0.25);
        CHECK(field.amount(10, 10) == 0.5);
    }
    SUBCASE("subtractive") {
        PheromoneField field({10, 10});
        field.set_amount(0, 0, 0.5);
        field.set_amount(1, 0, 0.0015);
        field.decay(0.001, DecayMode::subtractive);
        CHECK(field.amount(0, 0) == doctest::Approx(0.499));
        field.decay(0.001, DecayMode::subtractive);
        CHECK(field.amount(1, 0) == 0.0);
        CHECK(field.amount(5, 5) == 0.0);
    }
    SUBCASE("owners survive") {
        PheromoneField field({10, 10});
        field.deposit(3, {5.0, 5.0});
        field.decay(0.2);
        CHECK(*field.owner(5, 5) == 3u);
    }
    SUBCASE("rate bounds") {
        PheromoneField field({10, 10});
        CHECK_THROWS_AS(field.decay(1.0), RangeError);
        CHECK_THROWS_AS(field.decay(-0.1), RangeError);
    }
}

TEST_CASE("gain_at") {
    PheromoneField field({100, 100});
    field.deposit(7, {50.5, 50.5});
    CHECK(field.gain_at(7, {50.5, 50.5}) == 0.0);
    CHECK(field.gain_at(8, {50.5, 50.5}) == 1.0);

    field.set_amount(20, 20, 0.42);
    CHECK(field.gain_at(7, {20.1, 20.1}) == 0.42);
    field.set_amount(20, 20, 1.6);
    CHECK(field.gain_at(7, {20.1, 20.1}) == 1.0);

    PheromoneField other({100, 100});
    other.deposit(2, {30.5, 30.5});
    other.decay(0.03);
    CHECK(other.gain_at(5, {30.5, 30.5}) == doctest::Approx(0.97));
}

TEST_CASE("mass stays non-negative under random operation sequences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 32.0);
    std::uniform_int_distribution<int> op(0, 3);
    PheromoneField field = PheromoneField::from_spots({32, 32}, std::vector{GaussianSpot{0.9, 6.0, 5.0, 5.0}});
    for (int i = 0; i < 500; ++i) {
        switch (op(rng)) {
        case 0: field.deposit(static_cast<AgentId>(i % 5), {u(rng), u(rng)}); break;
        case 1: field.decay(0.05); break;
        case 2: field.decay(0.01, DecayMode::subtractive); break;
        default: break;
        }
        const double r = field.read({u(rng), u(rng)});
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
    for (double a : field.snapshot()) {
        CHECK(a >= 0.0);
        CHECK(std::isfinite(a));
    }
}

TEST_CASE("binary snapshot round trip") {
    auto field = PheromoneField::from_spots({17, 9}, std::vector{GaussianSpot{0.6, 3.0, 4.0, 4.0}});
    field.decay(0.1);
    std::stringstream buf;
    field.write_binary(buf, 1234);
    const std::string bytes = buf.str();
    CHECK(bytes.size() == 8 + 4 + 4 + 8 + 17 * 9 * 8);
    CHECK(bytes.substr(0, 8) == "PHFIELD1");
    auto [back, step] = PheromoneField::read_binary(buf);
    CHECK(step == 1234);
    CHECK(back.width() == 17);
    CHECK(back.height() == 9);
    CHECK(back.snapshot() == field.snapshot());

    std::stringstream bad("NOTAFIELD");
    CHECK_THROWS_AS(PheromoneField::read_binary(bad), ParseError);
}
