#include "hardbc/features.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "hardbc/errors.hpp"
#include "hardbc/rng.hpp"

namespace hbc {

double gaussian_deriv(double z, int n)
{
    const double e = std::exp(-z * z);
    switch (n) {
        case 0: return e;
        case 1: return -2.0 * z * e;
        case 2: return (4.0 * z * z - 2.0) * e;
        case 3: return -(8.0 * z * z * z - 12.0 * z) * e;
        case 4: return (16.0 * z * z * z * z - 48.0 * z * z + 12.0) * e;
        default: throw Error(ErrorKind::InvalidArgument, "activation derivative order must be 0..4");
    }
}

const char* to_string(Deriv d)
{
    static const char* names[] = {"v", "xi", "eta", "xixi", "xieta", "etaeta"};
    return names[static_cast<int>(d)];
}

FeatureNet::FeatureNet(Eigen::ArrayXd w1, Eigen::ArrayXd w2, Eigen::ArrayXd b, double r_m,
                       std::uint64_t seed)
    : w1_(std::move(w1)), w2_(std::move(w2)), b_(std::move(b)), r_m_(r_m), seed_(seed)
{
    if (w1_.size() != w2_.size() || w1_.size() != b_.size() || w1_.size() < 1)
        throw Error(ErrorKind::InvalidArgument, "feature net: inconsistent or empty coefficients");
    cache_powers();
}

void FeatureNet::cache_powers()
{
    w1pow_[0] = Eigen::ArrayXd::Ones(w1_.size());
    w2pow_[0] = Eigen::ArrayXd::Ones(w2_.size());
    for (int k = 1; k < 5; ++k) {
        w1pow_[k] = w1pow_[k - 1] * w1_;
        w2pow_[k] = w2pow_[k - 1] * w2_;
    }
}

FeatureNet FeatureNet::init(int M, double r_m, std::uint64_t seed)
{
    if (M < 1) throw Error(ErrorKind::InvalidArgument, "feature count M must be >= 1");
    if (!(r_m > 0.0)) throw Error(ErrorKind::InvalidArgument, "R_m must be > 0");
    auto gw = make_stream(seed, kStreamWeights);
    auto gb = make_stream(seed, kStreamBiases);
    Eigen::ArrayXd w1(M), w2(M), b(M);
    for (int j = 0; j < M; ++j) {
        w1[j] = uniform_sym(gw, r_m);
        w2[j] = uniform_sym(gw, r_m);
    }
    for (int j = 0; j < M; ++j) b[j] = uniform_sym(gb, r_m);
    return FeatureNet(std::move(w1), std::move(w2), std::move(b), r_m, seed);
}

PartialTable<Eigen::ArrayXd> FeatureNet::partials(double xi, double eta) const
{
    const Eigen::ArrayXd z = w1_ * xi + w2_ * eta + b_;
    const Eigen::ArrayXd e = (-z * z).exp();
    const Eigen::ArrayXd z2 = z * z;
    const std::array<Eigen::ArrayXd, 5> s = {
        e,
        -2.0 * z * e,
        (4.0 * z2 - 2.0) * e,
        -(8.0 * z2 - 12.0) * z * e,
        ((16.0 * z2 - 48.0) * z2 + 12.0) * e,
    };
    PartialTable<Eigen::ArrayXd> t;
    for (int a = 0; a <= 4; ++a)
        for (int bb = 0; a + bb <= 4; ++bb) t(a, bb) = s[a + bb] * w1pow_[a] * w2pow_[bb];
    return t;
}

Eigen::MatrixXd FeatureNet::eval(const std::vector<Vec2>& points, Deriv d) const
{
    static const int order[6][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    const int a = order[static_cast<int>(d)][0], b = order[static_cast<int>(d)][1];
    Eigen::MatrixXd out(points.size(), size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::ArrayXd z = w1_ * points[i][0] + w2_ * points[i][1] + b_;
        Eigen::ArrayXd v(z.size());
        for (Eigen::Index j = 0; j < z.size(); ++j) v[j] = gaussian_deriv(z[j], a + b);
        out.row(static_cast<Eigen::Index>(i)) = (v * w1pow_[a] * w2pow_[b]).matrix().transpose();
    }
    return out;
}

std::string FeatureNet::to_json() const
{
    nlohmann::json j;
    j["M"] = size();
    j["R_m"] = r_m_;
    j["seed"] = seed_;
    auto w = nlohmann::json::array();
    for (int k = 0; k < size(); ++k) w.push_back({w1_[k], w2_[k]});
    j["weights"] = w;
    j["biases"] = std::vector<double>(b_.data(), b_.data() + b_.size());
    return j.dump();
}

FeatureNet FeatureNet::from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        const int M = j.at("M").get<int>();
        const auto& w = j.at("weights");
        const auto b = j.at("biases").get<std::vector<double>>();
        if (static_cast<int>(w.size()) != M || static_cast<int>(b.size()) != M)
            throw Error(ErrorKind::InvalidArgument, "feature net JSON: size mismatch");
        Eigen::ArrayXd w1(M), w2(M), bb(M);
        for (int k = 0; k < M; ++k) {
            w1[k] = w[k].at(0).get<double>();
            w2[k] = w[k].at(1).get<double>();
            bb[k] = b[k];
        }
        return FeatureNet(w1, w2, bb, j.at("R_m").get<double>(), j.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("feature net JSON: ") + e.what());
    }
}

NetFunction::NetFunction(const FeatureNet& net, Eigen::VectorXd beta)
    : net_(net), beta_(std::move(beta))
{
    if (beta_.size() != net_.size())
        throw Error(ErrorKind::InvalidArgument, "beta length differs from feature count");
}

PartialTable<double> NetFunction::partials(double xi, double eta) const
{
    const auto t = net_.partials(xi, eta);
    PartialTable<double> r;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) r(a, b) = (t(a, b).matrix().dot(beta_));
    return r;
}

TraceBundle trace_bundle(const FeatureNet& net, const std::vector<double>& s)
{
    TraceBundle tb;
    tb.s = s;
    const Eigen::Index n = static_cast<Eigen::Index>(s.size()), M = net.size();
    for (auto* m : {&tb.g_AD, &tb.g_BC, &tb.g_AB, &tb.g_CD, &tb.gxi_BC, &tb.geta_CD, &tb.geta_BC,
                    &tb.gxi_CD})
        m->resize(n, M);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = s[static_cast<std::size_t>(i)];
        const auto ad = net.partials(-1.0, t), bc = net.partials(1.0, t);
        const auto ab = net.partials(t, -1.0), cd = net.partials(t, 1.0);
        tb.g_AD.row(i) = ad(0, 0).matrix().transpose();
        tb.g_BC.row(i) = bc(0, 0).matrix().transpose();
        tb.g_AB.row(i) = ab(0, 0).matrix().transpose();
        tb.g_CD.row(i) = cd(0, 0).matrix().transpose();
        tb.gxi_BC.row(i) = bc(1, 0).matrix().transpose();
        tb.geta_BC.row(i) = bc(0, 1).matrix().transpose();
        tb.geta_CD.row(i) = cd(0, 1).matrix().transpose();
        tb.gxi_CD.row(i) = cd(1, 0).matrix().transpose();
    }
    tb.corners = {net.partials(-1.0, -1.0), net.partials(1.0, -1.0), net.partials(1.0, 1.0),
                  net.partials(-1.0, 1.0)};
    return tb;
}

}  // namespace hbc
