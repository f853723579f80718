#include "simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace ctbp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Counter-based generator: every draw is keyed by (seed, individual, draw
// index), so the stream an individual sees does not depend on global event
// order.  splitmix64 finalisation applied to the mixed key.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t id,
                         std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ id) ^ (counter * 0xd1342543de82ef95ULL +
                                          0xaf251af3b0f025b5ULL));
}

// Uniform in (0, 1].
double u01_closed(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform in [0, 1).
double u01_open(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double exp_draw(std::uint64_t seed, std::uint64_t id, std::uint64_t counter) {
  return -std::log(u01_closed(keyed_bits(seed, id, counter)));
}

// Counter 0 is reserved for the fitness draw; counters 1, 2, ... drive the
// exponential gaps before the 1st, 2nd, ... child.
constexpr std::uint64_t kFitnessCounter = 0;

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

std::optional<double> next_birth_age(const WeightSequence& w,
                                     const AgingFunction& ag, double Y,
                                     std::size_t k, double age, double e) {
  double target = ag.G(age) + e / (Y * w(k));
  if (!(target < ag.G_inf())) return std::nullopt;
  return ag.G_inv(target);
}

Population run(const ProcessSpec& spec, const StopRule& stop,
               std::uint64_t seed) {
  if (stop.max_population == 0 && !(stop.max_time < kInf) &&
      stop.max_events == 0)
    throw std::invalid_argument("run: at least one stop rule is required");

  Population pop;
  pop.seed = seed;
  const std::size_t max_events =
      stop.max_events ? stop.max_events : 10'000'000;

  auto draw_fitness = [&](std::uint64_t id) {
    if (spec.fitness.family() == FitnessFamily::Degenerate)
      return spec.fitness.upper();
    return spec.fitness.quantile(
        u01_open(keyed_bits(seed, id, kFitnessCounter)));
  };

  // Pending next-birth events, one per fertile individual; ties broken by
  // (time, parent, child index) so runs are reproducible bit for bit.
  using Entry = std::tuple<double, std::int64_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

  auto schedule = [&](std::int64_t id) {
    const Individual& ind = pop.individuals[id];
    std::uint32_t k = ind.children;
    double e = exp_draw(seed, id, k + 1);
    double age = pop.clock - ind.birth_time;
    auto next = next_birth_age(spec.weights, spec.aging, ind.fitness, k, age, e);
    if (next)
      queue.emplace(ind.birth_time + *next, id, k + 1);
  };

  pop.individuals.push_back(Individual{-1, 0.0, draw_fitness(0), 0});
  schedule(0);

  std::size_t events = 0;

  while (!queue.empty()) {
    if (stop.max_population && pop.individuals.size() >= stop.max_population)
      break;
    if (events >= max_events) break;
    auto [time, parent, child_idx] = queue.top();
    if (time > stop.max_time) break;
    queue.pop();

    pop.clock = time;
    std::int64_t child = static_cast<std::int64_t>(pop.individuals.size());
    pop.individuals.push_back(
        Individual{parent, time, draw_fitness(child), 0});
    pop.individuals[parent].children = child_idx;
    pop.event_log.push_back({time, parent});
    ++events;

    schedule(parent);
    schedule(child);
  }

  // Explosion shows up as event times piling onto a finite accumulation
  // point: when the event cap is hit, the last half of the events must then
  // have added far less clock time than the quarter before them.  For any
  // exponential-growth regime the two increments are equal in the limit, so
  // the ratio test is insensitive to the cap size.
  if (events >= max_events && events >= 16) {
    std::size_t n = pop.event_log.size();
    double d_half = pop.event_log[n - 1].time - pop.event_log[n / 2].time;
    double d_quarter = pop.event_log[n / 2].time - pop.event_log[n / 4].time;
    pop.explosion_flag = d_half <= 0.75 * d_quarter;
  }
  return pop;
}

DegreeDistribution empirical_pk(const Population& pop, double t) {
  if (t > pop.clock)
    throw std::domain_error("empirical_pk: time is beyond the simulated range");
  std::size_t born = 1;  // root
  for (const auto& ev : pop.event_log) {
    if (ev.time > t) break;
    ++born;
  }
  std::vector<std::size_t> children(born, 0);
  for (std::size_t j = 0; j + 1 < born; ++j) {
    auto parent = static_cast<std::size_t>(pop.event_log[j].parent);
    ++children[parent];
  }
  std::size_t kmax = 0;
  for (std::size_t c : children) kmax = std::max(kmax, c);
  DegreeDistribution d;
  d.method = DegreeMethod::Simulation;
  d.p.assign(kmax + 1, 0.0);
  for (std::size_t c : children) d.p[c] += 1.0;
  for (double& v : d.p) v /= static_cast<double>(born);
  return d;
}

double growth_rate(const Population& pop) {
  if (pop.explosion_flag)
    throw RegimeError(
        Verdict{Regime::Explosive, kInf,
                "explosion detected during simulation"},
        "growth_rate: explosive population has no exponential regime");
  if (pop.individuals.size() < 1000)
    throw SimulationError("growth_rate: needs at least 10^3 individuals");
  double t_end = pop.event_log.back().time;
  double t_begin = pop.event_log.front().time;
  double t_mid = t_begin + 0.5 * (t_end - t_begin);
  std::vector<double> x, y;
  for (std::size_t j = 0; j < pop.event_log.size(); ++j) {
    if (pop.event_log[j].time < t_mid) continue;
    x.push_back(pop.event_log[j].time);
    y.push_back(std::log(static_cast<double>(j + 2)));
  }
  if (x.size() < 2)
    throw SimulationError("growth_rate: too few events in the fit window");
  return ls_slope(x, y);
}

CohortExponent cohort_exponent(const Population& pop, double cohort_lo,
                               double cohort_hi, double age) {
  // Children counts at the target age for cohort members whose age reached
  // the target within the simulated horizon (avoids censoring bias).
  std::vector<std::uint32_t> counts;
  std::vector<char> member(pop.individuals.size(), 0);
  for (std::size_t i = 0; i < pop.individuals.size(); ++i) {
    double b = pop.individuals[i].birth_time;
    member[i] = (b >= cohort_lo && b <= cohort_hi && b + age <= pop.clock);
  }
  std::vector<std::uint32_t> at_age(pop.individuals.size(), 0);
  for (std::size_t j = 0; j < pop.event_log.size(); ++j) {
    auto parent = static_cast<std::size_t>(pop.event_log[j].parent);
    if (member[parent] &&
        pop.event_log[j].time <=
            pop.individuals[parent].birth_time + age)
      ++at_age[parent];
  }
  for (std::size_t i = 0; i < pop.individuals.size(); ++i)
    if (member[i]) counts.push_back(at_age[i]);

  CohortExponent out;
  out.cohort_size = counts.size();
  if (counts.size() < 10'000)
    throw SimulationError(
        "cohort_exponent: cohort has fewer than 10^4 uncensored members");

  const std::uint32_t k_min = 10;
  std::uint32_t k_top = 0;
  for (std::uint32_t c : counts) k_top = std::max(k_top, c);
  std::vector<std::size_t> hist(k_top + 1, 0);
  for (std::uint32_t c : counts) ++hist[c];
  // complementary counts N(>= k)
  std::vector<std::size_t> ccdf(k_top + 2, 0);
  for (std::size_t k = k_top + 1; k-- > 0;)
    ccdf[k] = ccdf[k + 1] + hist[k];

  double n = static_cast<double>(counts.size());
  std::vector<double> x, y;
  for (std::uint32_t k = k_min; k <= k_top; ++k) {
    if (ccdf[k] < 10) break;  // stop where the tail gets too noisy
    x.push_back(std::log(static_cast<double>(k)));
    y.push_back(std::log(static_cast<double>(ccdf[k]) / n));
  }
  if (x.size() < 4)
    throw SimulationError("cohort_exponent: tail too short above k = 10");
  out.tau = 1.0 - ls_slope(x, y);

  std::vector<double> xh, yh;
  for (std::uint32_t k = k_min; k <= k_top; ++k) {
    if (hist[k] < 5) continue;
    xh.push_back(std::log(static_cast<double>(k)));
    yh.push_back(std::log(static_cast<double>(hist[k]) / n));
  }
  out.tau_histogram = xh.size() >= 4 ? -ls_slope(xh, yh) : kNaN;

  double hill_sum = 0.0;
  std::size_t hill_n = 0;
  for (std::uint32_t c : counts) {
    if (c >= k_min) {
      hill_sum += std::log(static_cast<double>(c) / k_min);
      ++hill_n;
    }
  }
  out.tau_hill = hill_n ? 1.0 + static_cast<double>(hill_n) / hill_sum : kNaN;
  return out;
}

SimulationSummary summarize(const Population& pop) {
  SimulationSummary s;
  s.final_size = pop.individuals.size();
  s.final_time = pop.clock;
  s.explosion_flag = pop.explosion_flag;
  std::size_t kmax = 0;
  for (const auto& ind : pop.individuals)
    kmax = std::max<std::size_t>(kmax, ind.children);
  s.degree_histogram.assign(kmax + 1, 0);
  for (const auto& ind : pop.individuals) ++s.degree_histogram[ind.children];
  try {
    s.growth_rate_estimate = growth_rate(pop);
  } catch (const std::exception&) {
    s.growth_rate_estimate = kNaN;
  }
  return s;
}

}  // namespace ctbp
