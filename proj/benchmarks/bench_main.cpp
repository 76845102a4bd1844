#include <benchmark/benchmark.h>

#include "hardbc/lsq.hpp"
#include "hardbc/problems.hpp"
#include "hardbc/rng.hpp"

using namespace hbc;

namespace {

DomainMap helm1() { return DomainMap(catalog("helm-1"), MapKind::Coons); }

TrialForm form(const DomainMap& m, BCType bc, BCType cd)
{
    Assignment a;
    for (auto& e : a) e = {BCType::Dirichlet, 0.0};
    a[1] = {bc, bc == BCType::Robin ? 1.0 : 0.0};
    a[2] = {cd, cd == BCType::Robin ? 2.0 : 0.0};
    return TrialForm(m, bc_data(ProblemKind::Helmholtz, m, a));
}

std::vector<Vec2> grid(int q)
{
    std::vector<Vec2> p;
    for (int i = 1; i <= q; ++i)
        for (int j = 1; j <= q; ++j) p.push_back({-1.0 + 2.0 * i / (q + 1), -1.0 + 2.0 * j / (q + 1)});
    return p;
}

}  // namespace

static void BM_FeaturePartials(benchmark::State& st)
{
    const FeatureNet net = FeatureNet::init(static_cast<int>(st.range(0)), 4.0, 1);
    double x = 0.1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(net.partials(x, 0.3));
        x = -x;
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_FeaturePartials)->Arg(50)->Arg(300)->Arg(800);

static void BM_AffineBatch(benchmark::State& st)
{
    const DomainMap m = helm1();
    const BCType kinds[3][2] = {{BCType::Dirichlet, BCType::Dirichlet},
                                {BCType::Neumann, BCType::Dirichlet},
                                {BCType::Robin, BCType::Robin}};
    const TrialForm f = form(m, kinds[st.range(0)][0], kinds[st.range(0)][1]);
    const FeatureNet net = FeatureNet::init(300, 4.0, 1);
    const std::vector<Vec2> pts = grid(20);
    for (auto _ : st) benchmark::DoNotOptimize(f.affine_batch(net, pts));
    st.SetLabel(to_string(f.kind()));
    st.SetItemsProcessed(st.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_AffineBatch)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

static void BM_AssembleLinear(benchmark::State& st)
{
    const DomainMap m = helm1();
    const TrialForm f = form(m, BCType::Dirichlet, BCType::Dirichlet);
    const int Q = static_cast<int>(st.range(0));
    const FeatureNet net = FeatureNet::init(static_cast<int>(st.range(1)), 4.0, 1);
    const std::array<BCType, 4> t{BCType::Dirichlet, BCType::Dirichlet, BCType::Dirichlet, BCType::Dirichlet};
    const CollocationSet c = collocation_grid(Q, t, default_q_db_per_edge(ProblemKind::Helmholtz, t));
    for (auto _ : st) benchmark::DoNotOptimize(assemble_linear(ProblemKind::Helmholtz, f, net, c));
}
BENCHMARK(BM_AssembleLinear)->Args({35, 300})->Args({70, 800})->Unit(benchmark::kMillisecond);

static void BM_Lstsq(benchmark::State& st)
{
    const int rows = static_cast<int>(st.range(0)), cols = static_cast<int>(st.range(1));
    auto gen = make_stream(5, kStreamAudit);
    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = uniform_sym(gen, 1.0);
    for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = uniform_sym(gen, 1.0);
    for (auto _ : st) benchmark::DoNotOptimize(lstsq(A, b));
}
BENCHMARK(BM_Lstsq)->Args({1241, 300})->Args({4916, 800})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
