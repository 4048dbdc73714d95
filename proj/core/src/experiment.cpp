#include "pathspin/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pathspin/constants.hpp"

namespace pathspin {

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("efficiency: must lie in [0, 1]");
  }
  if (!(absorption >= 0.0 && absorption <= 1.0)) {
    throw std::invalid_argument("absorption: must lie in [0, 1]");
  }
}

namespace {

void tally(CountRecord& rec, int a_value, int b_value) {
  if (a_value > 0) {
    if (b_value > 0) {
      ++rec.n3p;
    } else {
      ++rec.n3pp;
    }
  } else {
    if (b_value > 0) {
      ++rec.n4p;
    } else {
      ++rec.n4pp;
    }
  }
}

}  // namespace

CountRecord simulate_counts(const Vec4& state, const PathObservable& a,
                            const SpinObservable& b, std::uint64_t shots,
                            const DetectorModel& det, std::uint64_t seed) {
  det.validate();
  if (shots == 0) throw std::invalid_argument("shots: must be >= 1");
  const JointDistribution jd = joint_distribution(state, a, b);
  const double c_pp = jd.p_pp;
  const double c_pm = c_pp + jd.p_pm;
  const double c_mp = c_pm + jd.p_mp;

  CountRecord rec;
  rec.shots = shots;
  Rng rng(seed);
  for (std::uint64_t i = 0; i < shots; ++i) {
    if (rng.bernoulli(det.absorption) || rng.bernoulli(det.absorption)) {
      ++rec.lost;
      continue;
    }
    const double u = rng.uniform();
    if (!rng.bernoulli(det.efficiency)) {
      ++rec.lost;
      continue;
    }
    if (u < c_pp) {
      ++rec.n3p;
    } else if (u < c_pm) {
      ++rec.n3pp;
    } else if (u < c_mp) {
      ++rec.n4p;
    } else {
      ++rec.n4pp;
    }
  }
  return rec;
}

CountRecord simulate_counts_lhv(const LhvModel& model, int a_index, int b_index,
                                std::uint64_t shots, const DetectorModel& det,
                                std::uint64_t seed) {
  det.validate();
  if (shots == 0) throw std::invalid_argument("shots: must be >= 1");
  if ((a_index != 1 && a_index != 2) || (b_index != 1 && b_index != 2)) {
    throw std::invalid_argument("setting index: must be 1 or 2");
  }

  CountRecord rec;
  rec.shots = shots;
  Rng rng(seed);
  for (std::uint64_t i = 0; i < shots; ++i) {
    if (rng.bernoulli(det.absorption) || rng.bernoulli(det.absorption)) {
      ++rec.lost;
      continue;
    }
    const LhvAssignment x = sample_assignment(model, rng);
    if (!rng.bernoulli(det.efficiency)) {
      ++rec.lost;
      continue;
    }
    tally(rec, x.a(a_index), x.b(b_index));
  }
  return rec;
}

EstimatedCorrelation estimate_correlation(const CountRecord& counts) {
  if (counts.n3p + counts.n3pp + counts.n4p + counts.n4pp + counts.lost !=
      counts.shots) {
    throw InvariantError("count record: tallies do not sum to shots");
  }
  const std::uint64_t detected = counts.detected();
  if (detected == 0) {
    throw std::invalid_argument("estimate_correlation: zero detected events");
  }
  const double value =
      (static_cast<double>(counts.n3p) - static_cast<double>(counts.n3pp) -
       static_cast<double>(counts.n4p) + static_cast<double>(counts.n4pp)) /
      static_cast<double>(detected);
  const double variance = std::max(0.0, 1.0 - value * value);
  return {value, std::sqrt(variance / static_cast<double>(detected)), detected};
}

ChshEstimate estimate_chsh(const CountRecord& c11, const CountRecord& c12,
                           const CountRecord& c21, const CountRecord& c22) {
  const EstimatedCorrelation e11 = estimate_correlation(c11);
  const EstimatedCorrelation e12 = estimate_correlation(c12);
  const EstimatedCorrelation e21 = estimate_correlation(c21);
  const EstimatedCorrelation e22 = estimate_correlation(c22);
  ChshEstimate est;
  est.s_hat = e11.value + e12.value + e21.value - e22.value;
  est.s_err = std::sqrt(e11.std_err * e11.std_err + e12.std_err * e12.std_err +
                        e21.std_err * e21.std_err + e22.std_err * e22.std_err);
  return est;
}

void ImprecisionSpec::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon: must be >= 0");
  }
  if (shots_per_setting == 0) {
    throw std::invalid_argument("shots_per_setting: must be >= 1");
  }
  if (trials == 0) throw std::invalid_argument("trials: must be >= 1");
  if (!(sigma_threshold >= 0.0)) {
    throw std::invalid_argument("sigma_threshold: must be >= 0");
  }
}

namespace {

bool run_trial(const ShotSource& source, const SettingsAngles& base,
               const ImprecisionSpec& spec, const DetectorModel& det,
               std::uint64_t trial_seed) {
  std::array<CountRecord, 4> records;
  if (const auto* qm = std::get_if<QmSource>(&source)) {
    SettingsAngles ang = base;
    Rng perturb(derive_seed(trial_seed, 0));
    ang.theta1 += perturb.gaussian(spec.epsilon);
    ang.theta2 += perturb.gaussian(spec.epsilon);
    ang.b1_polar += perturb.gaussian(spec.epsilon);
    ang.b2_polar += perturb.gaussian(spec.epsilon);
    const ChshSettings settings = ang.build();
    const PathObservable* as[2] = {&settings.a1, &settings.a2};
    const SpinObservable* bs[2] = {&settings.b1, &settings.b2};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        records[i * 2 + j] =
            simulate_counts(qm->state, *as[i], *bs[j], spec.shots_per_setting,
                            det, derive_seed(trial_seed, 1 + i * 2 + j));
      }
    }
  } else {
    const LhvModel& model = std::get<LhvSource>(source).model;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        records[i * 2 + j] =
            simulate_counts_lhv(model, i + 1, j + 1, spec.shots_per_setting,
                                det, derive_seed(trial_seed, 1 + i * 2 + j));
      }
    }
  }
  const ChshEstimate est =
      estimate_chsh(records[0], records[1], records[2], records[3]);
  return est.s_hat - spec.sigma_threshold * est.s_err > 2.0;
}

}  // namespace

double violation_fraction(const ShotSource& source, const SettingsAngles& settings,
                          const ImprecisionSpec& spec, std::uint64_t seed,
                          const DetectorModel& det, unsigned threads) {
  spec.validate();
  det.validate();
  if (const auto* qm = std::get_if<QmSource>(&source)) {
    if (!qm->state.is_normalized()) {
      throw std::invalid_argument("violation_fraction: state is not normalized");
    }
  }

  std::vector<std::uint8_t> violated(spec.trials, 0);
  const auto run_range = [&](std::uint32_t lo, std::uint32_t hi) {
    for (std::uint32_t t = lo; t < hi; ++t) {
      violated[t] = run_trial(source, settings, spec, det, derive_seed(seed, t));
    }
  };

  if (threads <= 1 || spec.trials < 2) {
    run_range(0, spec.trials);
  } else {
    const std::uint32_t n = std::min<std::uint32_t>(threads, spec.trials);
    std::vector<std::thread> pool;
    pool.reserve(n);
    const std::uint32_t chunk = (spec.trials + n - 1) / n;
    for (std::uint32_t w = 0; w < n; ++w) {
      const std::uint32_t lo = w * chunk;
      const std::uint32_t hi = std::min(spec.trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (std::thread& th : pool) th.join();
  }

  std::uint64_t count = 0;
  for (std::uint8_t v : violated) count += v;
  return static_cast<double>(count) / static_cast<double>(spec.trials);
}

void WavePacketSpec::validate() const {
  if (!(sigma0 > 0.0) || !(velocity > 0.0) || !(mass > 0.0)) {
    throw std::invalid_argument(
        "sigma0/velocity/mass: must be strictly positive");
  }
  if (!(distance >= 0.0)) {
    throw std::invalid_argument("distance: must be >= 0");
  }
}

WavePacketResult wavepacket_spread(const WavePacketSpec& spec) {
  spec.validate();
  const double t = spec.distance / spec.velocity;
  const double dispersion = kHbar * t / (2.0 * spec.mass * spec.sigma0 * spec.sigma0);
  const double final_width = spec.sigma0 * std::sqrt(1.0 + dispersion * dispersion);
  return {final_width, final_width - spec.sigma0};
}

}  // namespace pathspin
