#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hardbc/features.hpp"
#include "hardbc/jet.hpp"
#include "hardbc/mapping.hpp"

namespace hbc {

enum class BCType { Dirichlet, Neumann, Robin, Free };
const char* to_string(BCType t);

// Data as a function of the edge's own parameter: value and two tangential derivatives.
// Dirichlet: u on the edge. Neumann: n.grad u. Robin: n.grad u + alpha u.
using EdgeFn = std::function<EdgeJet(double)>;

struct EdgeCondition {
    BCType type = BCType::Dirichlet;
    double alpha = 0.0;
    EdgeFn data;
};

// Indexed by Edge: AB, BC, CD, AD.
using BoundarySpec = std::array<EdgeCondition, 4>;

struct FormOptions {
    double angular_tol = 1e-8;
    double identity_rtol = 1e-8;
    double gamma_rtol = 1e-9;
    double corner_tol = 1e-12;
    std::array<int, 4> lambda_override{-1, -1, -1, -1};  // per original vertex A..D; -1 = computed
    bool neumann_as_robin = false;
};

enum class FormKind {
    Dirichlet,
    ThreeEdge,
    SingleNeumann,
    SingleRobin,
    AdjacentNeumann,
    AdjacentRobin,
    Mixed,
};
const char* to_string(FormKind k);

struct FormFlags {
    std::array<int, 4> lambda{0, 0, 0, 0};  // per original vertex; 0 when unused
    int gamma_C = 0;                         // at the shared flux corner
};

struct Affine {
    Jet2<double> c;
    Jet2<Eigen::ArrayXd> B;
};

struct CanonicalEngine;

// V = g - Pg + PF for a boundary assignment on a mapped quadrilateral.
class TrialForm {
public:
    TrialForm(DomainMap map, BoundarySpec bc, FormOptions opts = {});
    ~TrialForm();
    TrialForm(const TrialForm&);
    TrialForm& operator=(const TrialForm&);
    TrialForm(TrialForm&&) noexcept;
    TrialForm& operator=(TrialForm&&) noexcept;

    // Jet of V in the original standard coordinates.
    Jet2<double> eval(const FreeFunction<double>& g, double xi, double eta,
                      bool with_data = true) const;
    Jet2<Eigen::ArrayXd> eval(const FreeFunction<Eigen::ArrayXd>& g, double xi, double eta,
                              bool with_data = false) const;

    // V = c + B beta with every feature of `net` as g.
    Affine affine(const FeatureNet& net, double xi, double eta) const;
    std::vector<Affine> affine_batch(const FeatureNet& net, const std::vector<Vec2>& pts) const;
    std::vector<Jet2<double>> eval_batch(const FreeFunction<double>& g,
                                         const std::vector<Vec2>& pts, bool with_data = true) const;

    FormKind kind() const { return kind_; }
    int rotation() const { return rot_; }
    const FormFlags& flags() const { return flags_; }
    const DomainMap& map() const { return map_; }
    const BoundarySpec& boundary() const { return bc_; }

private:
    DomainMap map_;
    BoundarySpec bc_;
    FormOptions opts_;
    FormKind kind_ = FormKind::Dirichlet;
    int rot_ = 0;
    FormFlags flags_;
    std::unique_ptr<CanonicalEngine> eng_;
};

TrialForm dirichlet_form(const DomainMap& map, const std::array<EdgeFn, 4>& data,
                         FormOptions opts = {});
// CD carries no condition.
TrialForm dirichlet_form_three_edge(const DomainMap& map, EdgeFn ab, EdgeFn bc, EdgeFn ad,
                                    FormOptions opts = {});
TrialForm single_neumann_form(const DomainMap& map, Edge flux, const BoundarySpec& bc,
                              FormOptions opts = {});
TrialForm single_robin_form(const DomainMap& map, Edge flux, const BoundarySpec& bc,
                            FormOptions opts = {});
TrialForm adjacent_neumann_form(const DomainMap& map, const BoundarySpec& bc,
                                FormOptions opts = {});
TrialForm adjacent_robin_form(const DomainMap& map, const BoundarySpec& bc, FormOptions opts = {});
TrialForm mixed_corner_form(const DomainMap& map, const BoundarySpec& bc, FormOptions opts = {});

struct EdgeResidual {
    double max = 0.0, rms = 0.0;
};

// Boundary-condition residual of V on n uniform points per edge, in physical variables.
// Free edges report zero.
std::array<EdgeResidual, 4> boundary_residuals(const TrialForm& f, const FreeFunction<double>& g,
                                               int n = 101);

// g whose partial tables are those of another function seen through k quarter turns:
// g'(xi', eta') = g(R^k (xi', eta')).
template <class T>
class RotatedFree : public FreeFunction<T> {
public:
    RotatedFree(const FreeFunction<T>& g, int k) : g_(g), k_(((k % 4) + 4) % 4) {}
    PartialTable<T> partials(double xi, double eta) const override;

private:
    const FreeFunction<T>& g_;
    int k_;
};

// (a, b) -> (-b, a).
inline Vec2 rotate_point(Vec2 p, int k)
{
    k = ((k % 4) + 4) % 4;
    for (int i = 0; i < k; ++i) p = {-p[1], p[0]};
    return p;
}

template <class T>
PartialTable<T> rotate_table(const PartialTable<T>& t)
{
    PartialTable<T> r;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) r(a, b) = (b % 2) ? T(-t(b, a)) : t(b, a);
    return r;
}

template <class T>
PartialTable<T> RotatedFree<T>::partials(double xi, double eta) const
{
    const Vec2 q = rotate_point({xi, eta}, k_);
    PartialTable<T> t = g_.partials(q[0], q[1]);
    for (int i = 0; i < k_; ++i) t = rotate_table(t);
    return t;
}

// Jet at q of V' becomes the jet at R q of V = V' o R^{-1}.
template <class T>
Jet2<T> rotate_jet(const Jet2<T>& j)
{
    Jet2<T> r;
    r[kV] = j[kV];
    r[kXi] = -j[kEta];
    r[kEta] = j[kXi];
    r[kXiXi] = j[kEtaEta];
    r[kEtaEta] = j[kXiXi];
    r[kXiEta] = -j[kXiEta];
    return r;
}

}  // namespace hbc
