#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "hardbc/geometry.hpp"
#include "hardbc/jet.hpp"

namespace hbc {

// A function of (xi, eta) queried through its partial derivatives.
// T = double for a single function, Eigen::ArrayXd for one value per feature.
template <class T>
class FreeFunction {
public:
    virtual ~FreeFunction() = default;
    virtual PartialTable<T> partials(double xi, double eta) const = 0;
};

class ZeroFunction : public FreeFunction<double> {
public:
    PartialTable<double> partials(double, double) const override { return {}; }
};

// sigma^(n)(z) for sigma(z) = exp(-z^2), n = 0..4.
double gaussian_deriv(double z, int n);

enum class Deriv { V, Xi, Eta, XiXi, XiEta, EtaEta };
const char* to_string(Deriv d);

class FeatureNet {
public:
    FeatureNet() = default;
    FeatureNet(Eigen::ArrayXd w1, Eigen::ArrayXd w2, Eigen::ArrayXd b, double r_m = 0.0,
               std::uint64_t seed = 0);

    static FeatureNet init(int M, double r_m, std::uint64_t seed);

    int size() const { return static_cast<int>(w1_.size()); }
    double r_m() const { return r_m_; }
    std::uint64_t seed() const { return seed_; }
    const Eigen::ArrayXd& w1() const { return w1_; }
    const Eigen::ArrayXd& w2() const { return w2_; }
    const Eigen::ArrayXd& bias() const { return b_; }

    // All partials of every feature up to total order 4.
    PartialTable<Eigen::ArrayXd> partials(double xi, double eta) const;

    // points x features.
    Eigen::MatrixXd eval(const std::vector<Vec2>& points, Deriv d) const;

    std::string to_json() const;
    static FeatureNet from_json(const std::string& text);

private:
    Eigen::ArrayXd w1_, w2_, b_;
    double r_m_ = 0.0;
    std::uint64_t seed_ = 0;
    std::array<Eigen::ArrayXd, 5> w1pow_, w2pow_;
    void cache_powers();
};

// Every feature as a free function.
class FeatureBasis : public FreeFunction<Eigen::ArrayXd> {
public:
    explicit FeatureBasis(const FeatureNet& net) : net_(net) {}
    PartialTable<Eigen::ArrayXd> partials(double xi, double eta) const override
    {
        return net_.partials(xi, eta);
    }

private:
    const FeatureNet& net_;
};

// g = Phi beta.
class NetFunction : public FreeFunction<double> {
public:
    NetFunction(const FeatureNet& net, Eigen::VectorXd beta);
    PartialTable<double> partials(double xi, double eta) const override;
    const Eigen::VectorXd& beta() const { return beta_; }

private:
    const FeatureNet& net_;
    Eigen::VectorXd beta_;
};

// Per-feature tables of the g-terms the trial forms consume.
struct TraceBundle {
    std::vector<double> s;  // sample parameters on [-1, 1]
    // rows = samples, cols = features
    Eigen::MatrixXd g_AD, g_BC, g_AB, g_CD;  // g(-1,s), g(1,s), g(s,-1), g(s,1)
    Eigen::MatrixXd gxi_BC, geta_CD, geta_BC, gxi_CD;
    std::array<PartialTable<Eigen::ArrayXd>, 4> corners;  // A, B, C, D
};

TraceBundle trace_bundle(const FeatureNet& net, const std::vector<double>& s);

}  // namespace hbc
