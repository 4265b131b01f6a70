// Pilot calibration runs. Prints the spread of the Hill estimator for the
// acceptance tail-index cases and quick looks at the Monte Carlo trends.
//
//   pilot hill [replications]
//   pilot crossing | coverage [replicas]
//   pilot pathcount [replicas] [n_max]

#include "boolperc/boolperc.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

using namespace boolperc;

namespace {

constexpr std::uint64_t kPilotSeed = 20261015;

struct HillCase {
  const char* name;
  GrainLaw law;
  int k;  // diameter index, 1-based
};

std::vector<HillCase> hill_cases() {
  return {
      {"long-short d=2 m=1 a=1.5", GrainLaw{LongShortEllipsoid{2, 1, 1.5}}, 1},
      {"long-short d=3 m=1 a=2.5", GrainLaw{LongShortEllipsoid{3, 1, 2.5}}, 1},
      {"long-short d=3 m=1 a=2.5", GrainLaw{LongShortEllipsoid{3, 1, 2.5}}, 2},
      {"independent d=2 b=(1,1.5)", GrainLaw{IndependentAxesEllipsoid{2, {1.0, 1.5}}}, 1},
      {"independent d=2 b=(1,1.5)", GrainLaw{IndependentAxesEllipsoid{2, {1.0, 1.5}}}, 2},
      {"dependent d=3 b=(.2,.3,.5)", GrainLaw{DependentAxesEllipsoid{3, {0.2, 0.3, 0.5}}}, 1},
      {"dependent d=3 b=(.2,.3,.5)", GrainLaw{DependentAxesEllipsoid{3, {0.2, 0.3, 0.5}}}, 2},
      {"dependent d=3 b=(.2,.3,.5)", GrainLaw{DependentAxesEllipsoid{3, {0.2, 0.3, 0.5}}}, 3},
      {"triangle a=1.5 b=0.5", GrainLaw{RightTriangle{1.5, 0.5}}, 1},
      {"triangle a=1.5 b=0.5", GrainLaw{RightTriangle{1.5, 0.5}}, 2},
  };
}

std::vector<double> diameters(const GrainLaw& law, int k, std::size_t n, CounterRng& rng) {
  return dispatch_dimension(law.dimension(), [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    std::vector<double> out(n);
    for (auto& x : out) x = diameter_sequence(sample<D>(law, rng)).values(k - 1);
    return out;
  });
}

void hill(int reps) {
  const std::size_t n = 100000, top = 1000;
  std::printf("case,k,alpha,mean,sd,max_abs_err,asym_sd\n");
  for (const auto& c : hill_cases()) {
    const double alpha = theoretical_tail_profile(c.law).alpha[c.k - 1];
    std::vector<double> est;
    for (int r = 0; r < reps; ++r) {
      CounterRng rng(kPilotSeed, r, 5);
      est.push_back(tail_index_estimate(diameters(c.law, c.k, n, rng), top));
    }
    const MeanEstimate m = mean_interval(est);
    double worst = 0.0;
    for (double e : est) worst = std::max(worst, std::abs(e - alpha));
    std::printf("%s,%d,%g,%.4f,%.4f,%.4f,%.4f\n", c.name, c.k, alpha, m.mean, m.sd, worst,
                alpha / std::sqrt(static_cast<double>(top)));
  }
}

void show(const std::vector<EstimateRow>& rows, double seconds) {
  for (const auto& r : rows) std::cout << to_csv(r) << "\n";
  std::printf("# %.1f s\n", seconds);
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SweepPlan plan_for(GrainLaw law, double u, std::vector<double> sides, std::size_t reps) {
  SweepPlan p;
  p.law = std::move(law);
  for (double s : sides) p.grid.emplace_back(u, s);
  p.replicas = reps;
  p.root_seed = kPilotSeed;
  p.margin = MarginPolicy::automatic(0.01);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string what = argc > 1 ? argv[1] : "hill";
  const int n = argc > 2 ? std::atoi(argv[2]) : 0;
  const int n_max = argc > 3 ? std::atoi(argv[3]) : 10;
  if (what == "hill") {
    hill(n > 0 ? n : 20);
  } else if (what == "crossing") {
    const std::size_t reps = n > 0 ? n : 50;
    for (double a : {1.5, 3.0}) {
      std::vector<EstimateRow> rows;
      const double t = timed([&] {
        rows = crossing_curve<2>(plan_for(GrainLaw{LongShortEllipsoid{2, 1, a}}, 0.05, {50, 100, 200}, reps));
      });
      std::printf("# long-short alpha=%g\n", a);
      show(rows, t);
    }
    std::vector<EstimateRow> rows;
    const double t = timed([&] {
      SweepPlan p = plan_for(GrainLaw{FixedBody{ConvexBody<2>::ball(Vec<2>::Zero(), 1.0)}}, 2.0, {20, 50}, reps);
      rows = crossing_curve<2>(p);
    });
    std::printf("# unit disks u=2\n");
    show(rows, t);
  } else if (what == "coverage") {
    const std::size_t reps = n > 0 ? n : 50;
    for (double a : {1.5, 3.0}) {
      std::vector<EstimateRow> rows;
      const double t = timed([&] {
        SweepPlan p = plan_for(GrainLaw{LongShortEllipsoid{2, 0, a}}, 0.1, {25, 50, 100, 200}, reps);
        rows.clear();
        for (std::size_t i = 0; i < p.grid.size(); ++i) {
          SweepPlan one = p;
          one.grid = {p.grid[i]};
          for (auto& r : coverage_curve<2>(one, p.grid[i].second / 100.0)) rows.push_back(r);
        }
      });
      std::printf("# balls alpha=%g\n", a);
      show(rows, t);
    }
  } else if (what == "pathcount") {
    const std::size_t reps = n > 0 ? n : 100;
    for (double a : {3.0, 1.5}) {
      std::vector<EstimateRow> rows;
      const double t = timed([&] {
        rows = pathcount_sweep<2>(plan_for(GrainLaw{LongShortEllipsoid{2, 1, a}}, 0.01, {50, 100}, reps), n_max);
      });
      std::printf("# long-short alpha=%g\n", a);
      show(rows, t);
    }
  } else {
    std::cerr << "usage: pilot hill|crossing|coverage|pathcount [n]\n";
    return 2;
  }
  return 0;
}
