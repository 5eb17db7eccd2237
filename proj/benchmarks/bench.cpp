#include <benchmark/benchmark.h>

#include <drwitt/classical.hpp>
#include <drwitt/mvector.hpp>
#include <drwitt/recognize.hpp>
#include <drwitt/theta.hpp>

using namespace drwitt;

namespace {

siegel_point tau_g1(long prec) {
    siegel_point t;
    t.g = 1;
    t.tau = {bc_from_d(0.37, 2.11, prec)};
    return t;
}

siegel_point tau_g2(long prec) {
    siegel_point t;
    t.g = 2;
    t.tau = {bc_from_d(0.31, 1.41, prec), bc_from_d(0.11, 0.33, prec),
             bc_from_d(0.11, 0.33, prec), bc_from_d(-0.21, 1.73, prec)};
    return t;
}

void theta_g1(benchmark::State& state) {
    long prec = state.range(0);
    siegel_point tau = tau_g1(prec);
    theta_char k;
    k.k = {mpq_class(1, 4)};
    std::vector<bigcomplex> u{bc_from_d(0.2, 0.1, prec)};
    for (auto _ : state) benchmark::DoNotOptimize(theta(k, u, tau, prec));
}
BENCHMARK(theta_g1)->Arg(128)->Arg(256)->Arg(512)->Arg(1024);

void theta_g2(benchmark::State& state) {
    long prec = state.range(0);
    siegel_point tau = tau_g2(prec);
    theta_char k;
    k.k = {mpq_class(1, 4), mpq_class(3, 4)};
    std::vector<bigcomplex> u{bc_from_d(0.2, 0.1, prec), bc_from_d(-0.1, 0.2, prec)};
    for (auto _ : state) benchmark::DoNotOptimize(theta(k, u, tau, prec));
}
BENCHMARK(theta_g2)->Arg(128)->Arg(256)->Arg(512);

void ideal_arith(benchmark::State& state) {
    quad_field F = quad_field::create(5);
    quad_ideal A = qi_principal(F, quad_elem{3, 1});
    quad_ideal B = qi_principal(F, quad_elem{7, 2});
    for (auto _ : state) {
        quad_ideal C = qi_mul(F, A, B);
        benchmark::DoNotOptimize(qi_add(F, C, qi_from_z(F, 6)));
    }
}
BENCHMARK(ideal_arith);

void ideal_factor(benchmark::State& state) {
    quad_field F = quad_field::create(5);
    quad_ideal A = qi_from_z(F, 2 * 3 * 5 * 7 * 11);
    for (auto _ : state) benchmark::DoNotOptimize(factor_ideal(F, A));
}
BENCHMARK(ideal_factor);

void monoid_table(benchmark::State& state) {
    quad_field F = quad_field::create(1);
    quad_ideal f = qi_from_z(F, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dr_monoid(F, f).size());
}
BENCHMARK(monoid_table)->Arg(4)->Arg(6);

void recognize_quadratic(benchmark::State& state) {
    long prec = state.range(0);
    recog_config cfg;
    cfg.prec = prec;
    bigcomplex z(prec);
    mpfr_sqrt_ui(z.re, 5, MPFR_RNDN);
    mpfr_add_ui(z.re, z.re, 1, MPFR_RNDN);
    mpfr_div_2ui(z.re, z.re, 1, MPFR_RNDN);
    mpfr_set_ui_2exp(z.err, 1, 2 - prec, MPFR_RNDU);
    for (auto _ : state) benchmark::DoNotOptimize(recognize(z, cfg));
}
BENCHMARK(recognize_quadratic)->Arg(128)->Arg(256)->Arg(512);

void weber_component(benchmark::State& state) {
    quad_field F = quad_field::create(1);
    adelic_level L(F, 3);
    mvector_spec spec = make_weber_spec({0, mpq_class(1, 3)}, 3);
    residue_ring::res rho = L.ring().reduce(quad_elem{1, 0});
    quad_ideal s = qi_from_z(F, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(evaluate_component(L, spec, rho, s, 256));
}
BENCHMARK(weber_component);

}  // namespace

BENCHMARK_MAIN();
