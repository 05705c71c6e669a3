#include <benchmark/benchmark.h>

#include "sgrace/analytics.hpp"
#include "sgrace/attack.hpp"
#include "sgrace/erasure.hpp"

namespace {

using namespace sgrace;

void BM_EncodeForward(benchmark::State& state) {
  EncoderPair pair = EncoderPair::fresh(EncoderArch{}, 1);
  Rng rng(2);
  Eigen::MatrixXd sp(static_cast<Eigen::Index>(state.range(0)), pair.current.arch().dim);
  for (Eigen::Index i = 0; i < sp.size(); ++i) sp.data()[i] = 0.25 * rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(encode(pair.current, sp));
  }
}
BENCHMARK(BM_EncodeForward)->Arg(4)->Arg(16)->Arg(64);

void BM_EncodeBackward(benchmark::State& state) {
  EncoderPair pair = EncoderPair::fresh(EncoderArch{}, 1);
  Rng rng(2);
  Eigen::MatrixXd sp(static_cast<Eigen::Index>(state.range(0)), pair.current.arch().dim);
  for (Eigen::Index i = 0; i < sp.size(); ++i) sp.data()[i] = 0.25 * rng.normal();
  Eigen::MatrixXd d_out = Eigen::MatrixXd::Ones(sp.rows(), sp.cols());
  for (auto _ : state) {
    EncodeTrace trace = encode_traced(pair.current, sp);
    Eigen::MatrixXd d_input;
    Eigen::VectorXd d_params = Eigen::VectorXd::Zero(pair.current.param_count());
    encode_vjp(pair.current, trace, d_out, &d_input, &d_params);
    benchmark::DoNotOptimize(d_input);
    benchmark::DoNotOptimize(d_params);
  }
}
BENCHMARK(BM_EncodeBackward)->Arg(4)->Arg(16);

void BM_AttackObjective(benchmark::State& state) {
  EncoderArch arch;
  EncoderPair pair = EncoderPair::fresh(arch, 1);
  Rng rng(3);
  ToyDenoiser den(8, arch.dim, 32, 50, rng);
  NoiseSchedule sched;
  LatentCluster cluster = LatentCluster::for_concept("bench", 8);
  ClusterBatchSource batches(cluster, sched, 4);
  std::vector<NoisySample> batch = batches.next_batch(rng);

  KeywordPool pool = builtin_pool("Church");
  AdversarialSample sample = init_sample(pool, pair.current, 3, rng);
  TokenSequence target = pair.current.tokenizer().tokenize("church");

  for (auto _ : state) {
    benchmark::DoNotOptimize(attack_objective(pair, den, sample, target, batch));
  }
}
BENCHMARK(BM_AttackObjective);

void BM_FitPca(benchmark::State& state) {
  Rng rng(4);
  Eigen::MatrixXd pts(200, 32);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_pca(pts, 2));
  }
}
BENCHMARK(BM_FitPca);

}  // namespace

BENCHMARK_MAIN();
