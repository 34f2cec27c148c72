#include <doctest.h>

#include <cmath>

#include "featalloc/simulate.hpp"

using namespace featalloc;

namespace {
const Rect kUnit = Rect::unit_square();
}

TEST_CASE("truncated Poisson-process draw respects the weight window") {
    const BetaLevy ibp(3.0, 0.0, 1.0, kUnit);
    Rng rng(17);
    const PsiRealization psi = sample_poisson_psi(ibp, 0.01, rng);
    for (const auto& a : psi.atoms) {
        CHECK(a.weight >= 0.01);
        CHECK(a.weight <= 1.0);
        CHECK(kUnit.contains(a.location));
    }
    CHECK(psi.truncation_bias >= 0.0);
    // IBP: mass below eps integrates to gamma * sum over (0,eps) of s^{-1} (1-s)^0,
    // i.e. expected lost features per observation = gamma * eps-ish; just sanity
    CHECK(psi.truncation_bias < 3.0 * 0.011);
}

TEST_CASE("same seed, same draw") {
    const BetaLevy levy(2.0, 0.3, 1.0, kUnit);
    Rng r1(99), r2(99);
    const PsiRealization a = sample_poisson_psi(levy, 0.02, r1);
    const PsiRealization b = sample_poisson_psi(levy, 0.02, r2);
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (std::size_t i = 0; i < a.atoms.size(); ++i) {
        CHECK(a.atoms[i].weight == b.atoms[i].weight);
        CHECK(a.atoms[i].location.x == b.atoms[i].location.x);
    }
}

TEST_CASE("atom count matches the truncated Levy mass on average") {
    const BetaLevy levy(5.0, 0.25, 1.0, kUnit);
    const double eps = 0.05;
    const double expected = levy_mass(levy, eps);
    Rng rng(7);
    double total = 0.0;
    const int reps = 4000;
    for (int i = 0; i < reps; ++i) {
        total += static_cast<double>(sample_poisson_psi(levy, eps, rng).atoms.size());
    }
    const double mean = total / reps;
    // Poisson s.e. = sqrt(expected / reps)
    CHECK(std::fabs(mean - expected) < 4.0 * std::sqrt(expected / reps));
}

TEST_CASE("weight draws reproduce the truncated Levy density moments") {
    const BetaLevy levy(1.0, 0.4, 1.0, kUnit);
    const double eps = 0.02;
    Rng rng(31);
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < 3000; ++i) {
        const PsiRealization psi = sample_poisson_psi(levy, eps, rng);
        for (const auto& a : psi.atoms) {
            sum += a.weight;
            sumsq += a.weight * a.weight;
            ++count;
        }
    }
    REQUIRE(count > 5000);
    // reference moments by quadrature of s * density / mass on [eps, 1]
    const double mass = levy_mass(levy, eps);
    auto moment = [&](int p) {
        double acc = 0.0;
        const int segs = 40000;
        for (int i = 0; i < segs; ++i) {
            const double s = eps + (1.0 - eps) * (i + 0.5) / segs;
            acc += std::pow(s, p) * levy.density(s);
        }
        return acc * (1.0 - eps) / segs / mass;
    };
    const double m1 = moment(1), m2 = moment(2);
    const double se1 = std::sqrt((m2 - m1 * m1) / static_cast<double>(count));
    CHECK(std::fabs(sum / count - m1) < 5.0 * se1);
    CHECK(std::fabs(sumsq / count - m2) < 0.05 * m2 + 5.0 * se1);
}

TEST_CASE("mixed Poisson scales the atom count by the gamma multiplier") {
    const BetaLevy levy(4.0, 0.0, 1.0, kUnit);
    const GammaMixing mixing(4.0, 2.0);  // mean 2
    Rng rng(13);
    double total = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        total += static_cast<double>(
            sample_mixed_psi(levy, mixing, 0.05, rng).atoms.size());
    }
    const double expected = mixing.mean() * levy_mass(levy, 0.05);
    CHECK(std::fabs(total / reps - expected) < 0.08 * expected);
}

TEST_CASE("mixed binomial draw: counts and marks") {
    Rng rng(41);
    const PsiRealization p1 =
        sample_mb_psi(PoissonCount{6.0}, BetaMarkLaw(2.0, 2.0), kUnit, rng);
    for (const auto& a : p1.atoms) {
        CHECK(a.weight > 0.0);
        CHECK(a.weight < 1.0);
        CHECK(kUnit.contains(a.location));
    }
    double total = 0.0;
    const int reps = 3000;
    for (int i = 0; i < reps; ++i) {
        total += static_cast<double>(
            sample_mb_psi(NegBinCount{3.0, 0.4}, BetaMarkLaw(1.0, 1.0), kUnit, rng)
                .atoms.size());
    }
    // negbin mean r(1-p)/p = 4.5
    CHECK(std::fabs(total / reps - 4.5) < 0.25);
}

TEST_CASE("DPP sampler: mean count matches the eigenvalue sum") {
    const GaussianDppKernel k(30.0, 0.08, kUnit);
    const GridEig eig = grid_eigendecompose(k, kUnit, 24, true);
    double lam_sum = eig.eigvals.sum();
    Rng rng(55);
    double total = 0.0, totalsq = 0.0;
    const int reps = 400;
    for (int i = 0; i < reps; ++i) {
        const double c =
            static_cast<double>(sample_dpp_psi(eig, BetaMarkLaw(1.0, 5.0), rng)
                                    .atoms.size());
        total += c;
        totalsq += c * c;
    }
    const double mean = total / reps;
    const double var = totalsq / reps - mean * mean;
    CHECK(std::fabs(mean - lam_sum) < 4.0 * std::sqrt(var / reps));
    // repulsive: count variance below Poisson variance
    CHECK(var < lam_sum);
}

TEST_CASE("observations display each atom with its weight") {
    PsiRealization psi;
    psi.atoms = {{{0.2, 0.2}, 0.9}, {{0.8, 0.8}, 0.1}};
    Rng rng(2);
    int first = 0, second = 0;
    const int n = 20000;
    const auto obs = sample_observations(psi, n, rng);
    REQUIRE(obs.size() == static_cast<std::size_t>(n));
    for (const auto& o : obs) {
        for (std::size_t id : o.feature_ids) {
            if (id == 0) ++first;
            if (id == 1) ++second;
        }
    }
    CHECK(std::fabs(first / static_cast<double>(n) - 0.9) < 0.01);
    CHECK(std::fabs(second / static_cast<double>(n) - 0.1) < 0.01);
}

TEST_CASE("summarize keeps only displayed features with correct counts") {
    PsiRealization psi;
    psi.atoms = {{{0.1, 0.1}, 0.5}, {{0.9, 0.9}, 0.5}, {{0.5, 0.5}, 0.5}};
    std::vector<Observation> obs(3);
    obs[0].feature_ids = {0, 2};
    obs[1].feature_ids = {2};
    obs[2].feature_ids = {};
    const FeatureSample fs = summarize(psi, obs);
    CHECK(fs.n == 3);
    REQUIRE(fs.k() == 2);
    int count_sum = 0;
    for (const auto& f : fs.features) count_sum += f.count;
    CHECK(count_sum == 3);
}
