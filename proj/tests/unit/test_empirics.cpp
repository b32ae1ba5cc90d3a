#include <gtest/gtest.h>

#include <map>

#include "cubicvd/charfn.hpp"
#include "cubicvd/density.hpp"
#include "cubicvd/empirics.hpp"

using namespace cubicvd;

// 30-digit references
constexpr double kLminus3At1 = 0.604599788078072616864692752547;  // = pi / (3 sqrt 3)
constexpr double kLminus3At2 = 0.781302412896486296867187429624;  // (psi'(1/3) - psi'(2/3)) / 9
constexpr double kZetaK2 = 1.2851909554841494029175117987;

TEST(CountConstant, Components) {
  EXPECT_NEAR(dirichlet_l_minus3(1.0), kLminus3At1, 1e-12);
  EXPECT_NEAR(kLminus3At1, std::numbers::pi / (3 * std::numbers::sqrt3), 1e-15);
  EXPECT_NEAR(dirichlet_l_minus3(2.0), kLminus3At2, 1e-13);
  EXPECT_NEAR(dedekind_zeta2(), kZetaK2, 1e-12);
  // lattice count converges like x^{-1/2}
  EXPECT_NEAR(residue_from_lattice(1000000), kLminus3At1, 2e-3);
  EXPECT_NEAR(residue_from_lattice(4000000), kLminus3At1, 1e-3);
  EXPECT_THROW(dirichlet_l_minus3(0.5), ValidationError);
}

TEST(CountConstant, ZetaK2FromLatticeSum) {
  // (1/6) sum over nonzero a + b w of N^{-2}, cut at norm 2e4 plus the
  // integral of the ideal density beyond it
  const Int B = 200;
  double s = 0;
  for (Int a = -B; a <= B; ++a)
    for (Int b = -B; b <= B; ++b) {
      const double n = double(EisensteinInt{a, b}.wide_norm());
      if (n >= 1 && n <= 20000) s += 1 / (n * n);
    }
  s = s / 6 + kLminus3At1 / 20000;
  EXPECT_NEAR(s, kZetaK2, 1e-5);
}

TEST(CountConstant, RayClassOrder) {
  EXPECT_EQ(ray_class_order_mod9(), 9u);
  // 81 residues, 54 prime to 1 - w, free action of 6 units
  int coprime = 0;
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) coprime += (a * a - a * b + b * b) % 3 != 0;
  EXPECT_EQ(coprime, 54);
}

TEST(CountConstant, Assembled) {
  const auto c = count_constant(1000000);
  EXPECT_EQ(c.ray_class, 9u);
  EXPECT_NEAR(c.value, 3 * kLminus3At1 / (4 * 9 * kZetaK2), 1e-12);
  EXPECT_NEAR(c.value, 0.0392029802716691, 1e-12);
}

TEST(SmoothedCount, SmallLadder) {
  const auto rep = smoothed_count({500, 1000, 2000, 4000, 8000});
  const auto norms = family_norms(16000);
  for (std::size_t i = 0; i < rep.ladder.size(); ++i) {
    const auto Y = rep.ladder[i];
    EXPECT_EQ(rep.plain[i], enumerate_family(Y).size());
    std::uint64_t n2y = 0;
    for (auto n : norms) n2y += n <= 2 * Y;
    EXPECT_LT(rep.smoothed[i], double(n2y));
    if (i) { EXPECT_GT(rep.smoothed[i], rep.smoothed[i - 1]); }
    EXPECT_LT(rep.smoothing_tail[i], 1e-8 * rep.smoothed[i]);
  }
  EXPECT_THROW(smoothed_count({}), ValidationError);
}

TEST(SmoothedCount, TailBoundHolds) {
  const double Y = 200, T = 2000;
  double actual = 0;
  for (auto n : family_norms(40000))
    if (double(n) > T) actual += std::exp(-double(n) / Y);
  EXPECT_GT(actual, 0);
  EXPECT_LE(actual, smoothing_tail_bound(T, Y));
}

TEST(SmoothedCount, ConstantStable) {
  const auto rep = smoothed_count(linear_ladder(200000));
  EXPECT_LT(rep.stability(), 0.1);
  EXPECT_NEAR(rep.fitted() / count_constant(100000).value, 1.0, 0.1);
}

TEST(Sweep, SmallFamilies) {
  EXPECT_TRUE(sweep_family(EvalPoint(1.5), Mode::case2, 50, 100).records.empty());
  const auto sw = sweep_family(EvalPoint(1.5), Mode::case2, 73, 100);
  const auto fam = enumerate_family(73);
  ASSERT_EQ(sw.records.size(), fam.size());
  ASSERT_FALSE(fam.empty());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    EXPECT_EQ(sw.records[i].element.c, fam[i].c);
    EXPECT_EQ(sw.records[i].element.norm, 73);
    EXPECT_FALSE(sw.records[i].heuristic);
    EXPECT_TRUE(std::isfinite(sw.records[i].err_bound));
  }
}

TEST(Sweep, HeuristicNeedsOptIn) {
  EXPECT_THROW(sweep_family(EvalPoint(0.75), Mode::case1, 1000, 1000), ValidationError);
  SweepOptions opt;
  opt.allow_heuristic = true;
  const auto sw = sweep_family(EvalPoint(0.75), Mode::case1, 1000, 1000, opt);
  ASSERT_FALSE(sw.records.empty());
  for (const auto& r : sw.records) EXPECT_TRUE(r.heuristic);
  EXPECT_THROW(discrepancy_vs_theory(sw, DensityGrid{}), ValidationError);
  opt.capacity = 1e5;
  EXPECT_THROW(sweep_family(EvalPoint(1.5), Mode::case1, 1000, 1000, opt), CapacityError);
}

TEST(Sweep, CaseTwoIsDerivativeOfCaseOne) {
  const double h = 1e-3, sg = 1.5;
  const auto d = sweep_family(EvalPoint(sg), Mode::case2, 2000, 3000);
  const auto up = sweep_family(EvalPoint(sg + h), Mode::case1, 2000, 3000);
  const auto dn = sweep_family(EvalPoint(sg - h), Mode::case1, 2000, 3000);
  ASSERT_EQ(d.records.size(), up.records.size());
  for (std::size_t i = 0; i < d.records.size(); ++i) {
    const cplx fd = (up.records[i].value - dn.records[i].value) / (2 * h);
    EXPECT_LT(std::abs(fd - d.records[i].value), 1e-4);
  }
}

TEST(Sweep, ConjugatePairingAndDeterminism) {
  SweepOptions one, three;
  three.threads = 3;
  const auto a = sweep_family(EvalPoint(1.3), Mode::case2, 6000, 2000, one);
  const auto b = sweep_family(EvalPoint(1.3), Mode::case2, 6000, 2000, three);
  ASSERT_EQ(a.records.size(), b.records.size());
  std::map<std::pair<Int, Int>, cplx> byc;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].value, b.records[i].value);
    EXPECT_EQ(a.records[i].err_bound, b.records[i].err_bound);
    byc[{a.records[i].element.c.a, a.records[i].element.c.b}] = a.records[i].value;
    EXPECT_EQ(a.records[i].vanishing, false);
  }
  for (const auto& r : a.records) {
    const auto cb = r.element.c.conj();
    ASSERT_TRUE(byc.count({cb.a, cb.b})) << r.element.c;
    EXPECT_LT(std::abs(byc[{cb.a, cb.b}] - std::conj(r.value)), 1e-12);
  }
}

TEST(EmpiricalCF, NormalizationAndSymmetry) {
  auto sw = sweep_family(EvalPoint(1.5), Mode::case1, 20000, 2000);
  std::vector<cplx> lat = {0.0, {1.0, 0.5}, {-1.0, -0.5}, {0.3, -1.7}, {-0.3, 1.7}};
  const auto e = empirical_cf(sw, lat);
  EXPECT_EQ(e.values[0], cplx(1.0, 0.0));
  EXPECT_LT(std::abs(e.values[1] - std::conj(e.values[2])), 1e-14);
  EXPECT_LT(std::abs(e.values[3] - std::conj(e.values[4])), 1e-14);
  for (const auto& v : e.values) EXPECT_LE(std::abs(v), 1.0 + 1e-15);
  EXPECT_EQ(e.n, sw.records.size());
  // a flagged record is dropped from every statistic
  sw.records[0].vanishing = true;
  EXPECT_EQ(sw.flagged(), 1u);
  EXPECT_EQ(empirical_cf(sw, lat).n, sw.records.size() - 1);
  EXPECT_EQ(sweep_values(sw, sw.Y).size(), sw.records.size() - 1);
  FamilySweep empty;
  EXPECT_THROW(empirical_cf(empty, 10.0, lat), ValidationError);
}

TEST(EmpiricalCF, ApproachesCharFn) {
  const EvalPoint s(1.5);
  const auto sw = sweep_family(s, Mode::case2, 30000, 3000);
  std::vector<cplx> lat;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) lat.push_back(cplx(a, b) * 0.7);
  const auto e = empirical_cf(sw, lat);
  const CharFnEvaluator ev(s, Mode::case2, 3000);
  const double nstar = count_constant(100000).value * 30000;
  for (std::size_t k = 0; k < lat.size(); ++k) EXPECT_LT(std::abs(e.values[k] - ev.value(lat[k])), 5 / std::sqrt(nstar));
}

TEST(TheoryDiscrepancy, ResampledSweep) {
  const EvalPoint s(1.5);
  ConvolutionSampler smp(s, Mode::case2, 1000, 8);
  InversionConfig cfg;
  cfg.cutoff = 1000;
  cfg.box = box_from_samples(smp.sample(0, 20000));
  const auto g = invert_density(s, Mode::case2, cfg);
  FamilySweep sw;
  sw.s = s;
  sw.Y = 40000;
  const auto z = sample_from_grid(g, 40000, 17);
  for (std::size_t i = 0; i < z.size(); ++i) {
    SweepRecord r;
    r.element.norm = Int(i + 1);
    r.value = z[i];
    sw.records.push_back(r);
  }
  const auto d = discrepancy_vs_theory(sw, g);
  EXPECT_EQ(d.at_Y.n, 40000u);
  EXPECT_EQ(d.at_half_Y.n, 20000u);
  EXPECT_LE(d.at_Y.sup, 3 / std::sqrt(40000.0));
  EXPECT_LE(d.at_half_Y.sup, 3 / std::sqrt(20000.0));
}
