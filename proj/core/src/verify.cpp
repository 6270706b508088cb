#include "cleanreg/verify.hpp"

#include <set>
#include <thread>

namespace cleanreg {

RegisterState random_state(const Program& p, Rng& rng) {
  RegisterState s;
  for (auto& b : p.banks) {
    std::vector<u128> regs(b.size);
    for (auto& r : regs) r = rng.below(b.field.modulus());
    s.banks.push_back(std::move(regs));
  }
  return s;
}

std::vector<u128> random_input(const Program& p, const InputDomain& domain, Rng& rng) {
  u128 bound = domain.bound == 0 ? p.input_field().modulus() : domain.bound;
  std::vector<u128> x(p.num_inputs, 0);
  if (domain.pair_complement) {
    if (p.num_inputs % 2 != 0)
      throw std::invalid_argument("pair_complement domain needs an even input count");
    uint32_t half = p.num_inputs / 2;
    for (uint32_t i = 0; i < half; ++i) {
      x[i] = rng.below(2);
      x[half + i] = 1 - x[i];
    }
  } else {
    for (auto& v : x) v = rng.below(bound);
  }
  return x;
}

namespace {

struct TrialChecker {
  const Program& p;
  const OracleFn& oracle;
  const VerifyOptions& opts;
  std::set<RegRef> output_regs;

  explicit TrialChecker(const Program& prog, const OracleFn& orc, const VerifyOptions& o)
      : p(prog), oracle(orc), opts(o) {
    for (auto& out : p.outputs) output_regs.insert(out.reg);
  }

  // Returns failure description, empty on success.
  std::string run(const RegisterState& init, const std::vector<u128>& x) const {
    ExecResult res = execute_prevalidated(p, init, x);
    for (uint16_t b = 0; b < p.banks.size(); ++b)
      for (uint32_t r = 0; r < p.banks[b].size; ++r) {
        if (output_regs.count(RegRef{b, r})) continue;
        if (res.state.banks[b][r] != init.banks[b][r])
          return "register " + p.banks[b].name + "[" + std::to_string(r) +
                 "] not restored";
      }
    std::vector<u128> got = output_deltas(p, init, res.state, opts.readout_mod);
    std::vector<u128> want = oracle(x);
    if (want.size() != got.size()) return "oracle arity mismatch";
    for (size_t k = 0; k < got.size(); ++k)
      if (got[k] != want[k])
        return "output " + std::to_string(k) + ": delta " + to_string(got[k]) +
               ", oracle " + to_string(want[k]);
    return {};
  }
};

// Enumeration helpers for the exhaustive mode.
bool next_vector(std::vector<u128>& v, u128 bound) {
  for (auto& c : v) {
    if (++c < bound) return true;
    c = 0;
  }
  return false;
}

bool next_state(RegisterState& s, const Program& p) {
  for (size_t b = 0; b < s.banks.size(); ++b) {
    u128 m = p.banks[b].field.modulus();
    for (auto& c : s.banks[b]) {
      if (++c < m) return true;
      c = 0;
    }
  }
  return false;
}

}  // namespace

CleanReport verify_clean(const Program& p, const OracleFn& oracle,
                         const VerifyOptions& opts) {
  p.validate();
  if (oracle) {
    // arity probe happens inside trials; nothing to do here
  }
  TrialChecker checker(p, oracle, opts);
  CleanReport report;

  // Decide between exhaustive enumeration and sampling.
  u128 state_points = 1;
  bool overflow = false;
  for (auto& b : p.banks) {
    for (uint32_t i = 0; i < b.size && !overflow; ++i) {
      if (state_points > opts.exhaustive_limit / b.field.modulus() + 1) overflow = true;
      state_points *= b.field.modulus();
      if (state_points > opts.exhaustive_limit) overflow = true;
    }
    if (overflow) break;
  }
  u128 in_bound = opts.domain.bound == 0 ? p.input_field().modulus() : opts.domain.bound;
  u128 input_points = 1;
  uint32_t free_inputs =
      opts.domain.pair_complement ? p.num_inputs / 2 : p.num_inputs;
  for (uint32_t i = 0; i < free_inputs && !overflow; ++i) {
    input_points *= in_bound;
    if (input_points > opts.exhaustive_limit) overflow = true;
  }

  if (!overflow && state_points * input_points <= opts.exhaustive_limit) {
    report.exhaustive = true;
    std::vector<u128> free_x(free_inputs, 0);
    do {
      std::vector<u128> x(p.num_inputs);
      if (opts.domain.pair_complement) {
        for (uint32_t i = 0; i < free_inputs; ++i) {
          x[i] = free_x[i];
          x[free_inputs + i] = 1 - free_x[i];
        }
      } else {
        x = free_x;
      }
      RegisterState st = RegisterState::zeros(p);
      do {
        ++report.trials_run;
        std::string fail = checker.run(st, x);
        if (!fail.empty()) {
          report.pass = false;
          report.counterexample = Counterexample{st, x, fail};
          return report;
        }
      } while (next_state(st, p));
    } while (next_vector(free_x, in_bound));
    return report;
  }

  // Explicit input sweep first, then random trials, all seeded per trial so
  // results do not depend on the job count.
  struct Trial {
    std::vector<u128> x;
    uint64_t seed;
  };
  std::vector<Trial> trials;
  uint64_t counter = 0;
  if (opts.input_sweep) {
    for (auto& x : *opts.input_sweep)
      for (uint64_t t = 0; t < opts.taus_per_input; ++t)
        trials.push_back({x, splitmix64(opts.seed ^ splitmix64(counter++))});
  }
  for (uint64_t t = 0; t < opts.trials; ++t) {
    uint64_t s = splitmix64(opts.seed ^ splitmix64(counter++));
    Rng rng(s);
    trials.push_back({random_input(p, opts.domain, rng), s + 1});
  }

  std::vector<std::string> failures(trials.size());
  std::vector<RegisterState> inits(trials.size());
  auto run_range = [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      Rng rng(splitmix64(trials[i].seed));
      inits[i] = random_state(p, rng);
      failures[i] = checker.run(inits[i], trials[i].x);
    }
  };
  int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || trials.size() < 2) {
    run_range(0, trials.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (trials.size() + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      size_t lo = j * chunk, hi = std::min(trials.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  report.trials_run = trials.size();
  for (size_t i = 0; i < trials.size(); ++i) {
    if (!failures[i].empty()) {
      report.pass = false;
      report.counterexample = Counterexample{inits[i], trials[i].x, failures[i]};
      break;
    }
  }
  return report;
}

}  // namespace cleanreg
