// Times the heavy augmentation preset on a (96,128,128,3) uint8 volume.
//
//   bench_heavy_augs [--iterations N] [--per-step]
//
// Each iteration uses a different sample index, so the set of fired steps
// varies the way it does in training. --per-step also times every step in
// isolation with p forced to 1.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "voxflow/pipeline.hpp"

using namespace voxflow;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

Volume fixture() {
  const Shape s{96, 128, 128, 3};
  std::vector<std::uint8_t> data(s.elements());
  std::uint32_t x = 12345;
  for (auto& b : data) {
    x = x * 1664525u + 1013904223u;
    b = static_cast<std::uint8_t>(x >> 24);
  }
  return Volume::from_u8(s, std::move(data));
}

}  // namespace

int main(int argc, char** argv) {
  int iterations = 10;
  bool per_step = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--iterations") && i + 1 < argc) iterations = std::max(1, std::atoi(argv[++i]));
    else if (!std::strcmp(argv[i], "--per-step")) per_step = true;
    else {
      std::fprintf(stderr, "usage: %s [--iterations N] [--per-step]\n", argv[0]);
      return 1;
    }
  }

  const Volume v = fixture();
  const Pipeline pipe = preset_heavy_augs({96, 128, 128}, 0);

  std::vector<double> times;
  for (int i = 0; i < iterations; ++i) {
    const auto t0 = Clock::now();
    const AppliedPipeline r = apply_traced(pipe, v, static_cast<std::uint64_t>(i));
    times.push_back(ms_since(t0));
    std::printf("iteration %d: %.1f ms, %zu steps fired\n", i, times.back(), r.fired.size());
  }
  std::sort(times.begin(), times.end());
  std::printf("heavy_augs (96,128,128,3) u8: min %.1f ms, median %.1f ms, max %.1f ms over %d runs\n", times.front(),
              times[times.size() / 2], times.back(), iterations);

  std::vector<PipelineStep> all = pipe.steps();
  for (auto& s : all) s.p = 1.0;
  const auto t_all = Clock::now();
  apply(Pipeline(all, 0), v, 0);
  std::printf("all ten steps forced: %.1f ms\n", ms_since(t_all));

  if (per_step) {
    for (const auto& step : pipe.steps()) {
      RandomStream rng(7);
      const auto t0 = Clock::now();
      apply_step(step.params, v, rng);
      std::printf("  %-18s %.1f ms\n", std::string(transform_name(step.id())).c_str(), ms_since(t0));
    }
  }
  return 0;
}
