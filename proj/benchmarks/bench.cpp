#include <benchmark/benchmark.h>

#include <random>

#include "bary/bary.hpp"

using namespace bary;

namespace {

// Synthetic blob measures on an n x n grid: a handful of gaussian-ish bumps,
// quantized to integer intensities so masses are small rationals.
template <class T>
std::vector<Measure<T>> blob_measures(int count, int side, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> center(2.0, side - 3.0);
  std::vector<Measure<T>> out;
  for (int m = 0; m < count; ++m) {
    double cx = center(rng), cy = center(rng);
    double cx2 = center(rng), cy2 = center(rng);
    long total = 0;
    std::vector<std::pair<std::pair<int, int>, long>> px;
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) {
        double d1 = (c - cx) * (c - cx) + (r - cy) * (r - cy);
        double d2 = (c - cx2) * (c - cx2) + (r - cy2) * (r - cy2);
        long v = std::lround(80 * std::exp(-d1 / 3.0) + 60 * std::exp(-d2 / 4.0));
        if (v > 2) {
          px.push_back({{c, r}, v});
          total += v;
        }
      }
    std::vector<Atom<T>> atoms;
    for (auto& [pos, v] : px)
      atoms.push_back({Point<T>({T(pos.first), T(pos.second)}), num<T>::from_fraction(v, total)});
    out.emplace_back(std::move(atoms));
  }
  return out;
}

template <class T>
Weights<T> uniform(std::size_t n) {
  return Weights<T>::uniform(n);
}

void BM_union_support_program(benchmark::State& state) {
  auto ms = blob_measures<Rat>(4, static_cast<int>(state.range(0)), 7);
  auto lambda = uniform<Rat>(4);
  auto s0 = union_support(ms);
  for (auto _ : state) {
    auto lp = lpdetail::barycenter_lp(s0, ms, lambda);
    benchmark::DoNotOptimize(lp.num_vars());
  }
  state.counters["vars"] = static_cast<double>(
      lpdetail::barycenter_lp(s0, ms, lambda).num_vars());
}
BENCHMARK(BM_union_support_program)->Arg(8)->Arg(12)->Arg(16);

void BM_approx_rational(benchmark::State& state) {
  auto ms = blob_measures<Rat>(4, static_cast<int>(state.range(0)), 11);
  auto lambda = uniform<Rat>(4);
  auto s0 = union_support(ms);
  for (auto _ : state) {
    auto res = approx_barycenter(s0, ms, lambda);
    benchmark::DoNotOptimize(res.phi);
  }
}
BENCHMARK(BM_approx_rational)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_approx_float(benchmark::State& state) {
  auto ms = blob_measures<double>(4, static_cast<int>(state.range(0)), 11);
  auto lambda = uniform<double>(4);
  auto s0 = union_support(ms);
  for (auto _ : state) {
    auto res = approx_barycenter(s0, ms, lambda);
    benchmark::DoNotOptimize(res.phi);
  }
}
BENCHMARK(BM_approx_float)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_improve_rational(benchmark::State& state) {
  auto ms = blob_measures<Rat>(4, static_cast<int>(state.range(0)), 23);
  auto lambda = uniform<Rat>(4);
  for (auto _ : state) {
    auto trace = iterate_local_improvement(ms, lambda);
    benchmark::DoNotOptimize(trace.final.phi);
  }
}
BENCHMARK(BM_improve_rational)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_recover(benchmark::State& state) {
  auto ms = blob_measures<Rat>(4, static_cast<int>(state.range(0)), 31);
  auto lambda = uniform<Rat>(4);
  auto res = approx_barycenter(union_support(ms), ms, lambda);
  for (auto _ : state) {
    auto rec = recover_non_mass_split(res, ms, lambda);
    benchmark::DoNotOptimize(rec.measure.size());
  }
}
BENCHMARK(BM_recover)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_oracle_search(benchmark::State& state) {
  std::vector<Atom<Rat>> a, b;
  for (int i = 0; i < 4; ++i) {
    a.push_back({Point<Rat>({Rat(i), Rat(0)}), num<Rat>::from_fraction(i == 0 ? 5 : 1, 8)});
    b.push_back({Point<Rat>({Rat(i), Rat(1)}), num<Rat>::from_fraction(i == 3 ? 5 : 1, 8)});
  }
  Measure<Rat> p0(std::move(a)), p1(std::move(b));
  for (auto _ : state) {
    auto w2 = oracle::brute_force_w2(p0, p1, 8);
    benchmark::DoNotOptimize(w2);
  }
}
BENCHMARK(BM_oracle_search)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
