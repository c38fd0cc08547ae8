// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria configurations (grids, draw counts, tolerances) are
// pinned here.
#include <chrono>
#include <cstdio>
#include <vector>

#include "boltzmix/verify.hpp"

using namespace bmx;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::vector<std::string> details;
  double seconds = 0.0;
};

std::vector<Criterion> g_results;

class Scope {
 public:
  explicit Scope(std::string name) : start_(std::chrono::steady_clock::now()) {
    g_results.push_back({std::move(name)});
  }
  void expect(const std::string& what, double measured, double threshold, bool ok) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: measured %.6g (threshold %.6g) %s", what.c_str(), measured,
                  threshold, ok ? "ok" : "VIOLATED");
    g_results.back().details.emplace_back(buf);
    if (!ok) g_results.back().pass = false;
  }
  void expect_max(const std::string& what, double measured, double threshold) {
    expect(what, measured, threshold, measured <= threshold);
  }
  ~Scope() {
    g_results.back().seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

Mixture default_mixture() { return Mixture({{1.0, 1.0}, {2.0, 0.5}}); }

KernelSpec kernel_for(double gamma) {
  return KernelSpec(2, gamma, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
}

}  // namespace

// 1. Exact exponent cancellation of the Carleman change of variables.
static void criterion_1(ThreadPool&) {
  Scope sc("1 cancellation identity");
  Rng rng(101);
  const CancellationSweep sweep = sweep_cancellation(100000, 10.0, 0.2, 5.0, 0.1, rng);
  sc.expect_max("max relative |lhs-rhs| over 1e5 draws", sweep.max_rel_diff, 1e-12);
  sc.expect("rhs <= 0 everywhere", sweep.max_rhs, 0.0, sweep.max_rhs <= 0.0);
}

// 2. Sphere exponential integral against 4 pi sinh(k|x|)/(k|x|).
static void criterion_2(ThreadPool&) {
  Scope sc("2 sphere integral closed form");
  Rng rng(102);
  const SphereRule rule = make_sphere_rule(32, 16);
  const double worst = sweep_sphere_exp(rule, 100, 6.0, rng);
  sc.expect_max("max relative error, 100 draws, k|x| <= 6", worst, 1e-8);
}

// 3. Carleman-representation gain against the direct sigma-form.
static void criterion_3(ThreadPool& pool) {
  Scope sc("3 carleman vs direct gain");
  Rng rng(103);
  for (double gamma : {0.0, 1.0}) {
    const CarlemanComparison cmp =
        compare_carleman_direct(gamma, 1.0, 2.0, 20, 2.0, 40, 64, 16, rng, pool);
    char name[64];
    std::snprintf(name, sizeof name, "gamma=%g worst of 20 points", gamma);
    sc.expect_max(name, cmp.worst_rel, 1e-3);
  }
}

int main() {
  ThreadPool pool(0);
  criterion_1(pool);
  criterion_2(pool);
  criterion_3(pool);

  bool all = true;
  for (const auto& c : g_results) {
    std::printf("[%s] criterion %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.seconds);
    for (const auto& d : c.details) std::printf("        %s\n", d.c_str());
    all = all && c.pass;
  }
  std::printf("%s\n", all ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED");
  return all ? 0 : 1;
}
