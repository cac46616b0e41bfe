#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <nlohmann/json.hpp>

#include "latentbandit/bandit.hpp"
#include "latentbandit/graph.hpp"
#include "latentbandit/graph_json.hpp"
#include "latentbandit/random.hpp"

namespace latentbandit {

inline constexpr double kQuadratureTolerance = 1e-6;

namespace detail {

// Split points around each arm's posterior mass so that sharply peaked
// densities, and the long one-sided tails of skewed ones, are resolved by
// the adaptive rule. The upper half [1/2, 1] is integrated in u = 1 - x so
// that mass crowded against x = 1 keeps full floating-point resolution; both
// returned lists live in [0, 1/2] of their own variable.
struct HalfBreakpoints {
  std::vector<double> lower;  // x
  std::vector<double> upper;  // u = 1 - x
};

inline std::vector<double> tidy_points(std::vector<double> pts) {
  pts.push_back(0.0);
  pts.push_back(0.5);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double u, double v) { return std::abs(u - v) <= 1e-15 * std::max(u, v); }),
            pts.end());
  return pts;
}

inline HalfBreakpoints beta_breakpoints(const BetaPosterior& post) {
  HalfBreakpoints h;
  for (std::size_t i = 0; i < post.k(); ++i) {
    const double a = post.s(i);
    const double b = post.f(i);
    const double sd = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    for (double c : {-160.0, -40.0, -10.0, -5.0, -2.5, -1.0, 0.0, 1.0, 2.5, 5.0, 10.0, 40.0, 160.0}) {
      const double x = a / (a + b) + c * sd;
      const double u = b / (a + b) - c * sd;
      if (x > 0.0 && x < 0.5) h.lower.push_back(x);
      if (u > 0.0 && u < 0.5) h.upper.push_back(u);
    }
  }
  h.lower = tidy_points(std::move(h.lower));
  h.upper = tidy_points(std::move(h.upper));
  return h;
}

// Adaptive bisection over the 31-point Gauss-Kronrod pair. Boost's own
// recursive driver reports errors in the units of [-1, 1] rather than of
// [a, b], which overstates them by (b - a) / 2 on narrow intervals; the
// non-adaptive rule is used here and rescaled.
template <class F>
double adaptive_gauss_kronrod(F& f, double a, double b, double abs_tol, double rel_tol,
                              unsigned depth, double& error) {
  using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  double unit_err = 0.0;
  const double v = rule::integrate(f, a, b, 0, 0.0, &unit_err);
  const double err = unit_err * 0.5 * (b - a);
  if (depth == 0 || err <= std::max(abs_tol, rel_tol * std::abs(v))) {
    error += err;
    return v;
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gauss_kronrod(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1, error) +
         adaptive_gauss_kronrod(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1, error);
}

}  // namespace detail

/// Posterior probability that each arm is optimal:
///   alpha(i) = int_0^1 pdf_i(x) prod_{j != i} cdf_j(x) dx,
/// by adaptive Gauss-Kronrod quadrature, then renormalised.
inline PolicyDistribution optimal_action_dist(const BetaPosterior& post,
                                              double abs_tol = kQuadratureTolerance) {
  namespace bm = boost::math;
  const std::size_t k = post.k();
  if (k == 1) return PolicyDistribution({1.0});
  const auto pts = detail::beta_breakpoints(post);

  std::vector<double> alpha(k, 0.0);
  double total_error = 0.0;
  // Each piece gets an even share of the absolute budget.
  const double piece_tol =
      0.25 * abs_tol / static_cast<double>(k * (pts.lower.size() + pts.upper.size()));
  auto integrate = [&](auto&& f, const std::vector<double>& cuts) {
    double v = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p)
      v += detail::adaptive_gauss_kronrod(f, cuts[p], cuts[p + 1], piece_tol, 1e-12, 20, total_error);
    return v;
  };
  for (std::size_t i = 0; i < k; ++i) {
    auto lower = [&](double x) {
      double v = bm::ibeta_derivative(post.s(i), post.f(i), x);
      for (std::size_t j = 0; j < k && v != 0.0; ++j)
        if (j != i) v *= bm::ibeta(post.s(j), post.f(j), x);
      return v;
    };
    auto upper = [&](double u) {
      double v = bm::ibeta_derivative(post.f(i), post.s(i), u);
      for (std::size_t j = 0; j < k && v != 0.0; ++j)
        if (j != i) v *= bm::ibetac(post.f(j), post.s(j), u);
      return v;
    };
    alpha[i] = integrate(lower, pts.lower) + integrate(upper, pts.upper);
  }
  double sum = 0.0;
  for (double a : alpha) sum += a;
  if (!(total_error <= abs_tol) || !(std::abs(sum - 1.0) <= 1e-4)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "optimal-action quadrature did not converge: error estimate %.3g, mass %.12g",
                  total_error, sum);
    throw NumericError(buf);
  }
  for (double& a : alpha) a = std::max(a, 0.0) / sum;
  return PolicyDistribution(std::move(alpha));
}

/// Shannon entropy in nats with 0 log 0 = 0.
inline double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

inline double entropy(const PolicyDistribution& dist) { return entropy(dist.probs()); }

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

/// Monte Carlo estimates of the information quantities of a Beta posterior.
struct InfoAnalysis {
  std::size_t k = 0;
  std::size_t samples = 0;
  std::vector<double> alpha;       // frequency with which each arm is the sampled argmax
  std::vector<double> delta;       // expected instantaneous regret per arm
  std::vector<double> h;           // I(A*; Y_a)
  std::vector<double> cond_means;  // M(a, a*) row-major [a * k + a*]; NaN where undefined
  std::vector<std::uint8_t> defined;  // per a*: at least one draw classified there
  std::vector<double> alpha_se;
  std::vector<double> delta_se;
  std::vector<double> h_se;
  std::size_t undefined_cells = 0;

  double cond_mean(std::size_t a, std::size_t a_star) const { return cond_means[a * k + a_star]; }
};

namespace detail {

struct McTally {
  std::size_t n = 0;
  std::vector<double> count;  // per a*
  std::vector<double> sum;    // [a * k + a*]

  explicit McTally(std::size_t k = 0) : count(k, 0.0), sum(k * k, 0.0) {}

  void merge(const McTally& o) {
    n += o.n;
    for (std::size_t i = 0; i < count.size(); ++i) count[i] += o.count[i];
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += o.sum[i];
  }
};

inline void finalize_tally(const McTally& t, std::size_t k, InfoAnalysis& out) {
  const double n = static_cast<double>(t.n);
  out.k = k;
  out.samples = t.n;
  out.alpha.assign(k, 0.0);
  out.delta.assign(k, 0.0);
  out.h.assign(k, 0.0);
  out.cond_means.assign(k * k, std::numeric_limits<double>::quiet_NaN());
  out.defined.assign(k, 0);
  out.undefined_cells = 0;
  std::vector<double> mean(k, 0.0);
  for (std::size_t s = 0; s < k; ++s) {
    out.alpha[s] = t.count[s] / n;
    out.defined[s] = t.count[s] > 0.0;
    if (!out.defined[s]) ++out.undefined_cells;
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t s = 0; s < k; ++s) {
      mean[a] += t.sum[a * k + s] / n;
      if (out.defined[s]) out.cond_means[a * k + s] = t.sum[a * k + s] / t.count[s];
    }
  }
  double best_value = 0.0;  // E[theta_{A*}]
  for (std::size_t s = 0; s < k; ++s)
    if (out.defined[s]) best_value += out.alpha[s] * out.cond_means[s * k + s];
  for (std::size_t i = 0; i < k; ++i) out.delta[i] = best_value - mean[i];
  for (std::size_t a = 0; a < k; ++a) {
    double v = binary_entropy(mean[a]);
    for (std::size_t s = 0; s < k; ++s)
      if (out.defined[s]) v -= out.alpha[s] * binary_entropy(out.cond_means[a * k + s]);
    out.h[a] = std::max(v, 0.0);
  }
}

inline double stddev_of_mean(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= static_cast<double>(xs.size() - 1);
  return std::sqrt(v / static_cast<double>(xs.size()));
}

}  // namespace detail

inline constexpr std::size_t kMcShards = 32;
inline constexpr std::size_t kMinMcSamples = 10000;

/// Per-shard results kept alongside the pooled estimate; standard errors are
/// batch-means errors across the fixed set of shards.
struct McEstimate {
  InfoAnalysis pooled;
  std::vector<InfoAnalysis> shards;
};

/// Draws theta ~ prod Beta(S_i, F_i), classifies a* = argmax theta, and
/// estimates alpha, M(a, a*), Delta and h. Deterministic for a given stream
/// state regardless of `workers`.
template <class Gen>
McEstimate info_estimate_mc(const BetaPosterior& post, std::size_t samples, Gen& gen,
                            std::size_t workers = 1) {
  if (samples < kMinMcSamples)
    throw InvalidConfig("Monte Carlo estimation needs at least " + std::to_string(kMinMcSamples) +
                        " samples");
  const std::size_t k = post.k();
  const std::uint64_t base = gen();
  std::vector<detail::McTally> tallies(kMcShards, detail::McTally(k));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    std::vector<double> theta;
    for (;;) {
      const std::size_t shard = next.fetch_add(1);
      if (shard >= kMcShards) return;
      const std::size_t n = samples / kMcShards + (shard < samples % kMcShards ? 1 : 0);
      Rng rng = make_stream(base, shard, "mc");
      detail::McTally& t = tallies[shard];
      for (std::size_t d = 0; d < n; ++d) {
        post.sample(rng, theta);
        const std::size_t star = static_cast<std::size_t>(
            std::max_element(theta.begin(), theta.end()) - theta.begin());
        t.count[star] += 1.0;
        for (std::size_t a = 0; a < k; ++a) t.sum[a * k + star] += theta[a];
      }
      t.n = n;
    }
  };
  const std::size_t w = std::max<std::size_t>(1, std::min(workers, kMcShards));
  if (w == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < w; ++i) pool.emplace_back(work);
  }

  McEstimate est;
  detail::McTally all(k);
  est.shards.resize(kMcShards);
  for (std::size_t s = 0; s < kMcShards; ++s) {
    all.merge(tallies[s]);
    detail::finalize_tally(tallies[s], k, est.shards[s]);
  }
  detail::finalize_tally(all, k, est.pooled);

  auto& p = est.pooled;
  p.alpha_se.assign(k, 0.0);
  p.delta_se.assign(k, 0.0);
  p.h_se.assign(k, 0.0);
  std::vector<double> xs(kMcShards);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t s = 0; s < kMcShards; ++s) xs[s] = est.shards[s].alpha[i];
    p.alpha_se[i] = detail::stddev_of_mean(xs);
    for (std::size_t s = 0; s < kMcShards; ++s) xs[s] = est.shards[s].delta[i];
    p.delta_se[i] = detail::stddev_of_mean(xs);
    for (std::size_t s = 0; s < kMcShards; ++s) xs[s] = est.shards[s].h[i];
    p.h_se[i] = detail::stddev_of_mean(xs);
  }
  return est;
}

template <class Gen>
InfoAnalysis info_quantities_mc(const BetaPosterior& post, std::size_t samples, Gen& gen,
                                std::size_t workers = 1) {
  return info_estimate_mc(post, samples, gen, workers).pooled;
}

/// (alpha^T Delta)^2 versus 1/2 Q(alpha) alpha^T (G h), with (G h)(i) the
/// information summed over i's out-neighbourhood.
struct InfoRatioTerms {
  double q_alpha = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
};

inline InfoRatioTerms info_ratio_terms(const InfoAnalysis& info, const FeedbackGraph& g) {
  if (g.k() != info.k) throw InvalidConfig("graph and posterior arm counts differ");
  InfoRatioTerms r;
  r.q_alpha = q_quantity(g, info.alpha);
  double regret = 0.0;
  double gain = 0.0;
  for (std::size_t i = 0; i < info.k; ++i) {
    regret += info.alpha[i] * info.delta[i];
    double gh = 0.0;
    for (std::size_t a = 0; a < info.k; ++a)
      if (g.has_arc(i, a)) gh += info.h[a];
    gain += info.alpha[i] * gh;
  }
  r.lhs = regret * regret;
  r.rhs = 0.5 * r.q_alpha * gain;
  return r;
}

struct VerificationRecord {
  std::string check;
  std::string inputs_digest;
  double lhs = 0.0;
  double rhs = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
  bool inconclusive = false;

  nlohmann::json to_json() const {
    nlohmann::json j{{"check", check}, {"inputs_digest", inputs_digest}, {"lhs", lhs},
                     {"rhs", rhs},     {"stderr", stderr_},              {"pass", pass}};
    if (inconclusive) j["inconclusive"] = true;
    return j;
  }
};

inline std::string digest_hex(std::string_view canonical) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(canonical)));
  return buf;
}

struct InfoRatioReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  double lhs_se = 0.0;
  double stderr_ = 0.0;  // combined standard error of lhs and rhs
  double q_alpha = 0.0;
  bool pass = false;
  bool inconclusive = false;
  std::string inputs_digest;

  VerificationRecord record() const {
    return {"info_ratio", inputs_digest, lhs, rhs, stderr_, pass, inconclusive};
  }
};

/// Checks (alpha^T Delta)^2 <= 1/2 Q(alpha) alpha^T G h for Thompson sampling's
/// own sampling law. Passes when lhs <= rhs + 3 * combined standard error;
/// inconclusive when 3 * se(lhs) exceeds a tenth of rhs.
template <class Gen>
InfoRatioReport check_info_ratio(const BetaPosterior& post, const FeedbackGraph& g, std::size_t samples,
                        Gen& gen, std::size_t workers = 1) {
  const McEstimate est = info_estimate_mc(post, samples, gen, workers);
  const InfoRatioTerms pooled = info_ratio_terms(est.pooled, g);
  std::vector<double> lhs(est.shards.size());
  std::vector<double> rhs(est.shards.size());
  for (std::size_t s = 0; s < est.shards.size(); ++s) {
    const auto t = info_ratio_terms(est.shards[s], g);
    lhs[s] = t.lhs;
    rhs[s] = t.rhs;
  }
  InfoRatioReport r;
  r.lhs = pooled.lhs;
  r.rhs = pooled.rhs;
  r.q_alpha = pooled.q_alpha;
  r.margin = pooled.rhs - pooled.lhs;
  r.lhs_se = detail::stddev_of_mean(lhs);
  const double rhs_se = detail::stddev_of_mean(rhs);
  r.stderr_ = std::sqrt(r.lhs_se * r.lhs_se + rhs_se * rhs_se);
  r.pass = r.lhs <= r.rhs + 3.0 * r.stderr_;
  r.inconclusive = 3.0 * r.lhs_se > 0.1 * r.rhs;

  std::string canon = "info_ratio;n=" + std::to_string(samples) + ";S=";
  for (double s : post.successes()) canon += std::to_string(s) + ",";
  canon += ";F=";
  for (double f : post.failures()) canon += std::to_string(f) + ",";
  canon += ";G=" + graph_to_json(g).dump();
  r.inputs_digest = digest_hex(canon);
  return r;
}

/// sqrt(1/2 * sum_t metric(G_t) * H(alpha_1)).
inline double regret_bound_value(double metric_sum, double h0) {
  if (metric_sum < 0.0 || h0 < 0.0) throw InvalidConfig("bound inputs must be non-negative");
  return std::sqrt(0.5 * metric_sum * h0);
}

/// 4 beta0 log(4K / (beta0 eta)), valid when every pi(i) >= eta, 0 < eta < 0.5.
inline double floored_q_bound(double beta0, std::size_t k, double eta) {
  if (!(eta > 0.0 && eta < 0.5)) throw InvalidConfig("eta must lie in (0, 0.5)");
  return 4.0 * beta0 * std::log(4.0 * static_cast<double>(k) / (beta0 * eta));
}

/// eps T + sqrt(1/2 * sum_t 4 beta0(G_t) log(4K^2 / (beta0(G_t) eps)) * H(alpha_1)),
/// i.e. the TS-U bound with eta = eps / K substituted.
inline double tsu_bound_value(std::span<const std::size_t> beta0_per_round, std::size_t k,
                              double eps, double h0) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidConfig("TS-U bound needs 0 < eps <= 1");
  if (h0 < 0.0) throw InvalidConfig("prior entropy must be non-negative");
  const double kk = static_cast<double>(k);
  double q_sum = 0.0;
  for (std::size_t b : beta0_per_round) {
    const double beta = static_cast<double>(b);
    q_sum += 4.0 * beta * std::log(4.0 * kk * kk / (beta * eps));
  }
  return eps * static_cast<double>(beta0_per_round.size()) + std::sqrt(0.5 * q_sum * h0);
}

inline double tsu_bound_value(std::size_t horizon, std::size_t k, double eps, std::size_t beta0,
                              double h0) {
  const std::vector<std::size_t> per_round(horizon, beta0);
  return tsu_bound_value(per_round, k, eps, h0);
}

}  // namespace latentbandit
