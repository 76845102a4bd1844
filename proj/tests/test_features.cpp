#include <gtest/gtest.h>

#include "hardbc/errors.hpp"
#include "hardbc/features.hpp"
#include "hardbc/rng.hpp"
#include "test_util.hpp"

using namespace hbc;
using tu::close;

// Reference values from an independent Python evaluation of the mixer.
TEST(Rng, SplitmixReferenceValues)
{
    EXPECT_EQ(splitmix64(0), 16294208416658607535ULL);
    EXPECT_EQ(splitmix64(42), 13679457532755275413ULL);
}

TEST(Rng, StreamSeedMixesStreamIndex)
{
    auto a = make_stream(42, kStreamAudit);
    std::mt19937_64 b(6349198060258255764ULL);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, StreamsDiffer)
{
    auto a = make_stream(1, kStreamWeights), b = make_stream(1, kStreamBiases);
    EXPECT_NE(a(), b());
}

TEST(Features, InitIsDeterministic)
{
    const FeatureNet a = FeatureNet::init(4, 1.0, 42), b = FeatureNet::init(4, 1.0, 42);
    for (int j = 0; j < 4; ++j) {
        EXPECT_EQ(a.w1()[j], b.w1()[j]);
        EXPECT_EQ(a.w2()[j], b.w2()[j]);
        EXPECT_EQ(a.bias()[j], b.bias()[j]);
    }
    const FeatureNet c = FeatureNet::init(4, 1.0, 43);
    EXPECT_NE(a.w1()[0], c.w1()[0]);
}

TEST(Features, CoefficientRangeAndMean)
{
    const double r = 2.5;
    const FeatureNet net = FeatureNet::init(50000, r, 3);
    double sum = 0.0;
    int n = 0;
    for (const Eigen::ArrayXd* a : {&net.w1(), &net.w2(), &net.bias()}) {
        EXPECT_LE(a->abs().maxCoeff(), r);
        sum += a->sum();
        n += static_cast<int>(a->size());
    }
    // uniform on [-r, r] has standard deviation r / sqrt(3)
    const double sigma_mean = r / std::sqrt(3.0) / std::sqrt(static_cast<double>(n));
    EXPECT_LE(std::abs(sum / n), 3.0 * sigma_mean);
}

TEST(Features, InitRejectsBadArguments)
{
    for (auto [M, r] : {std::pair{0, 1.0}, std::pair{-3, 1.0}, std::pair{5, 0.0}, std::pair{5, -1.0}}) {
        try {
            FeatureNet::init(M, r, 1);
            FAIL() << M << " " << r;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
        }
    }
}

TEST(Features, ConstantFeature)
{
    const FeatureNet net(Eigen::ArrayXd::Zero(1), Eigen::ArrayXd::Zero(1), Eigen::ArrayXd::Zero(1));
    for (const Vec2& p : tu::random_points(10, 1)) {
        const auto t = net.partials(p[0], p[1]);
        EXPECT_EQ(t(0, 0)[0], 1.0);
        for (int a = 0; a <= 4; ++a)
            for (int b = 0; a + b <= 4; ++b)
                if (a + b > 0) EXPECT_EQ(t(a, b)[0], 0.0);
    }
}

TEST(Features, SecondDerivativeAtOrigin)
{
    const FeatureNet net(Eigen::ArrayXd::Ones(1), Eigen::ArrayXd::Zero(1), Eigen::ArrayXd::Zero(1));
    const auto t = net.partials(0.0, 0.3);
    EXPECT_DOUBLE_EQ(t(0, 0)[0], 1.0);
    EXPECT_DOUBLE_EQ(t(1, 0)[0], 0.0);
    EXPECT_DOUBLE_EQ(t(2, 0)[0], -2.0);
}

TEST(Features, GaussianDerivativesMatchFiniteDifferences)
{
    for (double z : tu::random_params(50, 2, 2.5))
        for (int n = 1; n <= 4; ++n)
            EXPECT_TRUE(close(gaussian_deriv(z, n), tu::fd1([&](double s) { return gaussian_deriv(s, n - 1); }, z), 1e-7));
    EXPECT_THROW(gaussian_deriv(0.0, 5), Error);
}

TEST(Features, PartialsMatchFiniteDifferences)
{
    const FeatureNet net = FeatureNet::init(20, 2.0, 5);
    for (const Vec2& p : tu::random_points(100, 3)) {
        const auto t = net.partials(p[0], p[1]);
        const double h = 1e-5;
        const auto tx1 = net.partials(p[0] + h, p[1]), tx0 = net.partials(p[0] - h, p[1]);
        const auto ty1 = net.partials(p[0], p[1] + h), ty0 = net.partials(p[0], p[1] - h);
        for (int a = 0; a <= 3; ++a)
            for (int b = 0; a + b <= 3; ++b)
                for (int j = 0; j < net.size(); ++j) {
                    const double fx = (tx1(a, b)[j] - tx0(a, b)[j]) / (2 * h);
                    const double fy = (ty1(a, b)[j] - ty0(a, b)[j]) / (2 * h);
                    EXPECT_TRUE(close(t(a + 1, b)[j], fx, 1e-6)) << a << b;
                    EXPECT_TRUE(close(t(a, b + 1)[j], fy, 1e-6)) << a << b;
                }
    }
}

TEST(Features, EvalAgreesWithPartials)
{
    const FeatureNet net = FeatureNet::init(7, 1.5, 9);
    const std::vector<Vec2> pts = tu::random_points(12, 4);
    const int order[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    for (int d = 0; d < 6; ++d) {
        const Eigen::MatrixXd m = net.eval(pts, static_cast<Deriv>(d));
        ASSERT_EQ(m.rows(), 12);
        ASSERT_EQ(m.cols(), 7);
        for (int i = 0; i < 12; ++i) {
            const auto t = net.partials(pts[i][0], pts[i][1]);
            for (int j = 0; j < 7; ++j)
                EXPECT_NEAR(m(i, j), t(order[d][0], order[d][1])[j], 1e-14 * std::max(1.0, std::abs(m(i, j))));
        }
    }
}

TEST(Features, NetFunctionIsLinearInBeta)
{
    const FeatureNet net = FeatureNet::init(15, 3.0, 2);
    const Eigen::VectorXd beta = tu::random_beta(15, 4);
    const NetFunction g(net, beta);
    for (const Vec2& p : tu::random_points(20, 5)) {
        const auto t = net.partials(p[0], p[1]);
        const auto v = g.partials(p[0], p[1]);
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; a + b <= 2; ++b)
                EXPECT_NEAR(v(a, b), (t(a, b).matrix().transpose() * beta)(0), 1e-14 * std::max(1.0, std::abs(v(a, b))));
    }
    EXPECT_THROW(NetFunction(net, Eigen::VectorXd::Zero(3)), Error);
}

TEST(Features, JsonRoundTripIsExact)
{
    const FeatureNet a = FeatureNet::init(11, 4.62, 77);
    const FeatureNet b = FeatureNet::from_json(a.to_json());
    ASSERT_EQ(b.size(), 11);
    EXPECT_EQ(b.r_m(), 4.62);
    EXPECT_EQ(b.seed(), 77u);
    for (int j = 0; j < 11; ++j) {
        EXPECT_EQ(a.w1()[j], b.w1()[j]);
        EXPECT_EQ(a.w2()[j], b.w2()[j]);
        EXPECT_EQ(a.bias()[j], b.bias()[j]);
    }
}

TEST(Features, JsonRejectsMalformedInput)
{
    EXPECT_THROW(FeatureNet::from_json("{"), Error);
    EXPECT_THROW(FeatureNet::from_json(R"({"M":2,"R_m":1,"seed":0,"weights":[[0,0]],"biases":[0,0]})"), Error);
}

TEST(TraceBundle, ConstantFeatureTraces)
{
    const FeatureNet net(Eigen::ArrayXd::Zero(1), Eigen::ArrayXd::Zero(1), Eigen::ArrayXd::Zero(1));
    const TraceBundle tb = trace_bundle(net, {-1.0, 0.0, 0.5});
    EXPECT_EQ(tb.g_AD.rows(), 3);
    EXPECT_EQ(tb.g_AD.cols(), 1);
    for (const Eigen::MatrixXd* m : {&tb.g_AD, &tb.g_BC, &tb.g_AB, &tb.g_CD}) EXPECT_TRUE((m->array() == 1.0).all());
    for (const auto& c : tb.corners) {
        EXPECT_EQ(c(2, 0)[0], 0.0);
        EXPECT_EQ(c(1, 1)[0], 0.0);
        EXPECT_EQ(c(0, 2)[0], 0.0);
    }
}

TEST(TraceBundle, TracesAndCornersMatchDirectEvaluation)
{
    const FeatureNet net = FeatureNet::init(9, 2.0, 8);
    const std::vector<double> s = tu::random_params(6, 9);
    const TraceBundle tb = trace_bundle(net, s);
    ASSERT_EQ(tb.g_BC.rows(), 6);
    ASSERT_EQ(tb.g_BC.cols(), 9);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto bc = net.partials(1.0, s[i]), cd = net.partials(s[i], 1.0);
        for (int j = 0; j < 9; ++j) {
            EXPECT_EQ(tb.g_BC(i, j), bc(0, 0)[j]);
            EXPECT_EQ(tb.gxi_BC(i, j), bc(1, 0)[j]);
            EXPECT_EQ(tb.geta_CD(i, j), cd(0, 1)[j]);
            EXPECT_EQ(tb.g_AD(i, j), net.partials(-1.0, s[i])(0, 0)[j]);
        }
    }
    // cross derivative at C against a cross difference
    const double h = 1e-4;
    for (int j = 0; j < 9; ++j) {
        auto g = [&](double a, double b) { return net.partials(a, b)(0, 0)[j]; };
        const double fd = (g(1 + h, 1 + h) - g(1 + h, 1 - h) - g(1 - h, 1 + h) + g(1 - h, 1 - h)) / (4 * h * h);
        EXPECT_TRUE(close(tb.corners[2](1, 1)[j], fd, 1e-6));
    }
}
