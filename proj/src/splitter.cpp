#include "levelset/splitter.hpp"

#include <algorithm>
#include <cmath>

#include "levelset/kdtree.hpp"
#include "levelset/parallel.hpp"

namespace levelset {

double MarginSchedule::dn(std::size_t n) const {
    if (n < 2) fail(Error::Code::invalid_argument, "dn: n must be >= 2");
    if (!(M > 0) || p < 1 || d < 1) fail(Error::Code::invalid_argument, "dn: bad schedule");
    double expo = static_cast<double>(p) / static_cast<double>(d + 2 * p);
    return M * std::pow(std::log(static_cast<double>(n)) / static_cast<double>(n), expo);
}

namespace {

SplitSample split_at(const KdeModel& model, const PointCloud& sample, double t_plus,
                     double t_minus, SplitMode mode) {
    SplitSample out;
    out.t_plus = t_plus;
    out.t_minus = t_minus;
    out.mode = mode;
    out.minus_vacuous = t_minus <= 0.0;
    auto values = model.eval(sample.points());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        if (values[i] >= t_plus)
            out.plus.add(sample[i]);
        else if (values[i] < t_minus)
            out.minus.add(sample[i]);
        else
            out.unassigned.add(sample[i]);
    }
    out.plus_empty = out.plus.empty();
    return out;
}

}  // namespace

SplitSample split_margin(const KdeModel& model, const PointCloud& sample, double t, double dn) {
    if (!(t > 0)) fail(Error::Code::invalid_argument, "split_margin: threshold must be positive");
    if (dn < 0) fail(Error::Code::invalid_argument, "split_margin: margin must be >= 0");
    return split_at(model, sample, t + dn, t - dn, SplitMode::margin);
}

SplitSample split_calibrated(const KdeModel& model, const PointCloud& sample,
                             const ThresholdPair& thresholds) {
    return split_at(model, sample, thresholds.f_plus, thresholds.f_minus, SplitMode::calibrated);
}

std::pair<PointCloud, PointCloud> knn_classify(const PointCloud& plus, const PointCloud& minus,
                                               int k, const PointCloud& queries) {
    if (plus.empty() || minus.empty())
        fail(Error::Code::empty_input, "knn: both training classes must be non-empty");
    if (k < 1 || k % 2 == 0)
        fail(Error::Code::invalid_argument, "knn: k must be an odd positive integer");
    if (static_cast<std::size_t>(k) > plus.size() + minus.size())
        fail(Error::Code::invalid_argument, "knn: k exceeds the training size");

    // plus points first: distance ties resolve toward plus, then lower index
    std::vector<Point> training = plus.points();
    training.insert(training.end(), minus.points().begin(), minus.points().end());
    KdTree tree(training);
    const std::size_t n_plus = plus.size();

    std::vector<char> label(queries.size(), 0);
    parallel_for(queries.size(), [&](std::size_t i) {
        auto nn = tree.k_nearest(queries[i], static_cast<std::size_t>(k));
        int votes = 0;
        for (std::size_t idx : nn)
            if (idx < n_plus) ++votes;
        label[i] = votes * 2 > k ? 1 : 0;
    });

    PointCloud to_plus, to_minus;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        if (label[i])
            to_plus.add(queries[i]);
        else
            to_minus.add(queries[i]);
    }
    return {to_plus, to_minus};
}

SplitSample classify_remainder(const SplitSample& split, int k) {
    if (split.unassigned.empty()) return split;
    SplitSample out = split;
    auto [to_plus, to_minus] = knn_classify(split.plus, split.minus, k, split.unassigned);
    for (const auto& p : to_plus.points()) out.plus.add(p);
    for (const auto& p : to_minus.points()) out.minus.add(p);
    out.unassigned = PointCloud{};
    return out;
}

MarginSchedule auto_margin(const KdeModel& model, int p, Rng& rng, int refits) {
    const std::size_t n = model.size();
    if (n < 2) fail(Error::Code::invalid_argument, "auto_margin: needs n >= 2");

    // evaluation points: a deterministic subsample of the data
    const std::size_t m = std::min<std::size_t>(n, 200);
    std::vector<Point> eval_pts;
    for (std::size_t j = 0; j < m; ++j) eval_pts.push_back(model.sample()[(j * n) / m]);

    std::vector<double> mean(m, 0.0), sqsum(m, 0.0);
    std::vector<Point> resample(n);
    for (int b = 0; b < refits; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            const Point& base = model.sample()[rng.uniform_index(n)];
            resample[i] = {base.x + model.bandwidth().h1 * rng.normal(),
                           base.y + model.bandwidth().h2 * rng.normal()};
        }
        KdeModel refit(PointCloud(resample), model.bandwidth());
        auto vals = refit.eval_cutoff(eval_pts);
        for (std::size_t j = 0; j < m; ++j) {
            mean[j] += vals[j];
            sqsum[j] += vals[j] * vals[j];
        }
    }
    double sd_avg = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double mu = mean[j] / refits;
        double var = std::max(0.0, sqsum[j] / refits - mu * mu);
        sd_avg += std::sqrt(var);
    }
    sd_avg /= static_cast<double>(m);

    MarginSchedule sched;
    sched.p = p;
    sched.M = 1.0;
    double base = sched.dn(n);
    sched.M = sd_avg / base;
    if (!(sched.M > 0)) sched.M = 1e-12;
    return sched;
}

}  // namespace levelset
