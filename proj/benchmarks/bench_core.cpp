#include <benchmark/benchmark.h>

#include <vector>

#include "cavityqed/cavity_em.hpp"
#include "cavityqed/constants.hpp"
#include "cavityqed/hom.hpp"
#include "cavityqed/perturbation.hpp"
#include "cavityqed/port_io.hpp"
#include "cavityqed/system_hamiltonian.hpp"
#include "cavityqed/transmon.hpp"

using namespace cavityqed;
using namespace cavityqed::units;

namespace {

const CavityGeometry kCavity{22.86 * mm, 10.16 * mm, 40.0 * mm, 1.0};
const ModeIndex kTe101{ModeFamily::TE, 1, 0, 1};
const ModeIndex kTe102{ModeFamily::TE, 1, 0, 2};

CoaxProbe probe(double z_mm) { return {11.43 * mm, z_mm * mm, 0.05 * mm, 2.5 * mm, 0.75 * mm}; }

DipoleSpec dipole() {
  DipoleSpec d;
  d.length = 1.0 * mm;
  d.radius = 0.04 * mm;
  d.gap = 0.102 * mm;
  d.center = Vec3(11.43 * mm, 5.08 * mm, 20.0 * mm);
  return d;
}

void BM_PortCoupling(benchmark::State& state) {
  const CavityMode mode(kTe101, kCavity);
  const CoaxProbe p = probe(10.0);
  AnnulusQuadrature grid;
  grid.n_rho = static_cast<int>(state.range(0));
  grid.n_phi = 2 * grid.n_rho;
  for (auto _ : state) benchmark::DoNotOptimize(port_coupling(mode, p, 1, 0.0, grid).g);
}
BENCHMARK(BM_PortCoupling)->Arg(32)->Arg(64)->Arg(128);

void BM_PerturbationQuadrature(benchmark::State& state) {
  const CavityMode mode(kTe101, kCavity);
  const std::vector<CoaxProbe> probes{probe(10.0), probe(30.0)};
  for (auto _ : state) benchmark::DoNotOptimize(perturbed_frequency_quadrature(mode, probes).omega_perturbed);
}
BENCHMARK(BM_PerturbationQuadrature);

void BM_TransmonSpectrum(benchmark::State& state) {
  const auto params = TransmonParams::from_circuit(9.1 * fF, 50.34 * fF, 9.4 * nH);
  for (auto _ : state) benchmark::DoNotOptimize(transmon_spectrum(params, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TransmonSpectrum)->Arg(3)->Arg(8);

void BM_HomCurve(benchmark::State& state) {
  const ScatteringResponse resp{constants::two_pi * 7.552419e9, 994.3678, 994.3678};
  const double w = balanced_center_frequency(resp);
  const PhotonWavepacket p1{w, 2.5 * us, 1}, p2{w, 2.5 * us, 2};
  std::vector<double> taus;
  for (int i = 0; i < state.range(0); ++i) taus.push_back((-25.0 + 50.0 * i / (state.range(0) - 1)) * us);
  const FrequencyGrid grid = default_frequency_grid(resp, p1, p2, 25 * us);
  for (auto _ : state) benchmark::DoNotOptimize(hom_curve(resp, p1, p2, taus, grid));
}
BENCHMARK(BM_HomCurve)->Arg(51)->Arg(201)->Unit(benchmark::kMillisecond);

// Dressed eigensolve for qubits x modes at Fock cutoff M.
void BM_DressedSpectrum(benchmark::State& state) {
  const int nq = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  std::vector<CavityMode> modes{CavityMode(kTe101, kCavity), CavityMode(kTe102, kCavity)};
  const std::vector<double> omegas{modes[0].omega(), modes[1].omega()};
  const auto params = TransmonParams::from_circuit(dipole_capacitance(dipole(), omegas[0]), 50.34 * fF, 9.4 * nH);
  std::vector<QubitInstance> qubits;
  for (int q = 0; q < nq; ++q) {
    DipoleSpec d = dipole();
    d.center.z() = (10.0 + 20.0 * q) * mm;
    qubits.push_back(QubitInstance::make(d, params, m));
  }
  const SystemBasis basis{nq, 2, m};
  const Eigen::MatrixXcd h = assemble_hamiltonian(basis, qubits, omegas, coupling_matrix(modes, omegas, qubits, m - 1));
  for (auto _ : state) benchmark::DoNotOptimize(dressed_spectrum(h, basis));
  state.counters["dim"] = basis.dimension();
}
BENCHMARK(BM_DressedSpectrum)->Args({1, 3})->Args({1, 8})->Args({2, 3})->Args({2, 5})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
