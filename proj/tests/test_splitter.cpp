#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "levelset/splitter.hpp"

using namespace levelset;

namespace {

PointCloud bimodal_cloud(std::size_t n, Rng& rng) {
    PointCloud c;
    for (std::size_t i = 0; i < n; ++i) {
        double cx = rng.uniform() < 0.5 ? -1.5 : 1.5;
        c.add({cx + 0.4 * rng.normal(), 0.4 * rng.normal()});
    }
    return c;
}

bool same_multiset(std::vector<Point> a, std::vector<Point> b) {
    auto lt = [](const Point& p, const Point& q) {
        if (p.x != q.x) return p.x < q.x;
        return p.y < q.y;
    };
    std::sort(a.begin(), a.end(), lt);
    std::sort(b.begin(), b.end(), lt);
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(),
                                              [](const Point& p, const Point& q) {
                                                  return p.x == q.x && p.y == q.y;
                                              });
}

std::vector<Point> concat(const SplitSample& s) {
    std::vector<Point> all = s.plus.points();
    all.insert(all.end(), s.minus.points().begin(), s.minus.points().end());
    all.insert(all.end(), s.unassigned.points().begin(), s.unassigned.points().end());
    return all;
}

}  // namespace

TEST_CASE("margin schedule: direct formula value") {
    MarginSchedule sched{1.0, 2, 2};
    CHECK(sched.dn(8) == doctest::Approx(0.638193303577099).epsilon(1e-12));
    MarginSchedule doubled{2.0, 2, 2};
    CHECK(doubled.dn(8) == doctest::Approx(2.0 * sched.dn(8)).epsilon(1e-12));
    CHECK(sched.dn(1000000) < sched.dn(1000));
    CHECK_THROWS_AS(sched.dn(1), Error);
}

TEST_CASE("split_margin: zero margin gives a two-way split") {
    Rng rng(1);
    PointCloud c = bimodal_cloud(200, rng);
    KdeModel model(c, Bandwidth(0.3, 0.3));
    auto values = model.eval(c.points());
    double t = quantile_threshold(values, 0.5);
    auto s = split_margin(model, c, t, 0.0);
    CHECK(s.unassigned.empty());
    CHECK(s.plus.size() + s.minus.size() == c.size());
    // points with f_n exactly at t (the quantile is a sample value) go plus
    bool found_at_t = false;
    for (const auto& p : s.plus.points())
        if (model.eval(p) == t) found_at_t = true;
    CHECK(found_at_t);
}

TEST_CASE("split_margin: threshold above the maximum empties the inner set") {
    Rng rng(2);
    PointCloud c = bimodal_cloud(80, rng);
    KdeModel model(c, Bandwidth(0.3, 0.3));
    auto values = model.eval(c.points());
    double top = *std::max_element(values.begin(), values.end());
    auto s = split_margin(model, c, top * 2.0, 0.01);
    CHECK(s.plus_empty);
    CHECK(s.plus.empty());
}

TEST_CASE("split_margin: defining inequalities re-verified; partition preserved") {
    Rng rng(3);
    PointCloud c = bimodal_cloud(300, rng);
    KdeModel model(c, Bandwidth(0.35, 0.35));
    auto values = model.eval(c.points());
    double t = quantile_threshold(values, 0.6);
    double dn = 0.1 * t;
    auto s = split_margin(model, c, t, dn);
    CHECK(same_multiset(concat(s), c.points()));
    for (const auto& p : s.plus.points()) CHECK(model.eval(p) >= t + dn);
    for (const auto& p : s.minus.points()) CHECK(model.eval(p) < t - dn);
    for (const auto& p : s.unassigned.points()) {
        double f = model.eval(p);
        CHECK(f < t + dn);
        CHECK(f >= t - dn);
    }
    CHECK(s.t_plus == t + dn);
    CHECK(s.t_minus == t - dn);
}

TEST_CASE("split_calibrated: equal thresholds leave nothing unassigned") {
    Rng rng(4);
    PointCloud c = bimodal_cloud(150, rng);
    KdeModel model(c, Bandwidth(0.3, 0.3));
    double t = quantile_threshold(model.eval(c.points()), 0.7);
    auto s = split_calibrated(model, c, ThresholdPair(t, t));
    CHECK(s.unassigned.empty());
}

TEST_CASE("split_calibrated: inner count tracks the quantile level") {
    Rng rng(5);
    PointCloud c = bimodal_cloud(400, rng);
    KdeModel model(c, Bandwidth(0.3, 0.3));
    auto values = model.eval(c.points());
    double tau_plus = 0.8;
    double f_plus = quantile_threshold(values, tau_plus);
    double f_minus = quantile_threshold(values, 0.7);
    auto s = split_calibrated(model, c, ThresholdPair(f_plus, f_minus));
    double expect = (1.0 - tau_plus) * static_cast<double>(c.size());
    CHECK(std::abs(static_cast<double>(s.plus.size()) - expect) <= 1.0 + 1e-9);
}

TEST_CASE("knn: nearest neighbor and the declared tie rule") {
    PointCloud plus({{0, 0}});
    PointCloud minus({{2, 0}});
    auto [p1, m1] = knn_classify(plus, minus, 1, PointCloud({{0.5, 0}}));
    CHECK(p1.size() == 1);
    CHECK(m1.empty());
    // exact tie at distance 1 from both: plus wins
    auto [p2, m2] = knn_classify(plus, minus, 1, PointCloud({{1.0, 0}}));
    CHECK(p2.size() == 1);
    CHECK(m2.empty());
}

TEST_CASE("knn: linearly separated classes classify by side") {
    Rng rng(6);
    PointCloud plus, minus, queries;
    for (int i = 0; i < 40; ++i) {
        plus.add({rng.uniform(-2, -0.5), rng.uniform(0, 1)});
        minus.add({rng.uniform(0.5, 2), rng.uniform(0, 1)});
    }
    for (int i = 0; i < 30; ++i) queries.add({rng.uniform(-2, -0.6), rng.uniform(0, 1)});
    for (int k : {1, 3, 5}) {
        auto [p, m] = knn_classify(plus, minus, k, queries);
        CHECK(p.size() == queries.size());
        CHECK(m.empty());
    }
}

TEST_CASE("knn: agrees with a brute-force distance-matrix classifier") {
    Rng rng(7);
    PointCloud plus, minus, queries;
    for (int i = 0; i < 25; ++i) plus.add({rng.uniform(0, 1), rng.uniform(0, 1)});
    for (int i = 0; i < 35; ++i) minus.add({rng.uniform(0.5, 1.5), rng.uniform(0, 1)});
    for (int i = 0; i < 60; ++i) queries.add({rng.uniform(-0.2, 1.7), rng.uniform(-0.2, 1.2)});

    for (int k : {1, 3, 5}) {
        auto [fast_p, fast_m] = knn_classify(plus, minus, k, queries);
        // brute force with the same tie rules (plus first, lower index)
        std::vector<Point> training = plus.points();
        training.insert(training.end(), minus.points().begin(), minus.points().end());
        PointCloud slow_p, slow_m;
        for (const auto& q : queries.points()) {
            std::vector<std::pair<double, std::size_t>> d;
            for (std::size_t i = 0; i < training.size(); ++i) d.push_back({dist2(training[i], q), i});
            std::sort(d.begin(), d.end());
            int votes = 0;
            for (int j = 0; j < k; ++j)
                if (d[j].second < plus.size()) ++votes;
            if (votes * 2 > k)
                slow_p.add(q);
            else
                slow_m.add(q);
        }
        CHECK(same_multiset(fast_p.points(), slow_p.points()));
        CHECK(same_multiset(fast_m.points(), slow_m.points()));
    }
}

TEST_CASE("knn: error paths") {
    PointCloud plus({{0, 0}}), minus({{1, 0}}), q({{0.5, 0.5}});
    CHECK_THROWS_AS(knn_classify(PointCloud{}, minus, 1, q), Error);
    CHECK_THROWS_AS(knn_classify(plus, minus, 2, q), Error);
    CHECK_THROWS_AS(knn_classify(plus, minus, 5, q), Error);
}

TEST_CASE("classify_remainder merges and preserves the sample") {
    Rng rng(8);
    PointCloud c = bimodal_cloud(250, rng);
    KdeModel model(c, Bandwidth(0.3, 0.3));
    auto values = model.eval(c.points());
    double t = quantile_threshold(values, 0.6);
    auto s = split_margin(model, c, t, 0.15 * t);
    REQUIRE(!s.unassigned.empty());
    auto full = classify_remainder(s, 3);
    CHECK(full.unassigned.empty());
    CHECK(same_multiset(concat(full), c.points()));
}

TEST_CASE("auto_margin produces a usable schedule") {
    Rng rng(9);
    PointCloud c = bimodal_cloud(300, rng);
    KdeModel model(c, Bandwidth(0.3, 0.3));
    Rng margin_rng(1234);
    auto sched = auto_margin(model, 2, margin_rng);
    CHECK(sched.M > 0);
    double dn = sched.dn(c.size());
    auto values = model.eval(c.points());
    double top = *std::max_element(values.begin(), values.end());
    CHECK(dn > 0);
    CHECK(dn < top);
}
