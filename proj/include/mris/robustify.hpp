// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mris/conic.hpp"
#include "mris/types.hpp"

namespace mris::robust {

// q(x) = x^H A x + 2 Re{a^H x} + c over the channel error x.
struct QuadraticForm {
    CMat A;
    CVec a;
    double c = 0;

    static QuadraticForm zero(int M);
    int dim() const { return static_cast<int>(A.rows()); }
    double eval(const CVec& x) const;
    QuadraticForm& operator+=(const QuadraticForm& o);
    QuadraticForm& operator-=(const QuadraticForm& o);
    QuadraticForm& operator*=(double s);
};

// Quadratic form whose coefficients are affine in real decision variables.
struct ParamForm {
    QuadraticForm base;
    std::vector<std::pair<int, QuadraticForm>> terms;

    explicit ParamForm(QuadraticForm q) : base(std::move(q)) {}
    int dim() const { return base.dim(); }
    QuadraticForm at(const RVec& x) const;
    ParamForm& operator+=(const ParamForm& o);
    ParamForm& operator*=(double s);
};

// |(h + x)^H X|^2 written as a quadratic form in x.
QuadraticForm exact_form(const CVec& h_nominal, const CVec& X);

// Lower bound of |(h+x)^H X_cur|^2 that is affine in X_cur and tight at X_cur = X_exp:
//   A = X_cur X_exp^H + X_exp X_cur^H - X_exp X_exp^H, a = A h, c = h^H A h.
QuadraticForm signal_taylor_form(const CVec& h_nominal, const CVec& X_exp, const CVec& X_cur);
ParamForm signal_taylor_form(const CVec& h_nominal, const CVec& X_exp, const conic::CVecAffine& X_cur);

// Same bound with X = diag(u) G w.
QuadraticForm taylor_quadratic_form(const CVec& h_nominal, const CMat& G, const CVec& u_exp, const CVec& w_exp,
                                    const CVec& u_cur, const CVec& w_cur);

// Linearization of vbar (e^v - 1) at (v_tau, vbar_tau).
double sca_leak_budget(double v_tau, double vbar_tau, double v, double vbar);
conic::Affine sca_leak_budget_expr(double v_tau, double vbar_tau, int v, int vbar);

enum class Sense { Upper, Lower };

struct LmiBlock {
    conic::HermAffine F;
    int lambda = -1;
    Sense sense = Sense::Upper;
    double eps = 0;
    std::string tag;
};

// S-procedure certificate for q(x) <= rhs (upper) or q(x) >= rhs (lower) on ||x|| <= eps:
//   upper: [lam I - A, -a; -a^H, rhs - c - lam eps^2] >= 0
//   lower: [A + lam I,  a;  a^H, c - rhs - lam eps^2] >= 0
LmiBlock assemble_lmi(const ParamForm& q, const conic::Affine& rhs, Sense sense, double eps, int lambda_var);
LmiBlock assemble_lmi(const QuadraticForm& q, const conic::Affine& rhs, Sense sense, double eps, int lambda_var);

// Worst-case leakage max_x |(h+x)^H X|^2 <= g * vbar as a single LMI (Schur complement of the
// ratio) with multiplier lam:
//   [lam I, 0, X; 0, g - lam eps^2, h^H X; X^H, X^H h, vbar] >= 0
LmiBlock assemble_ratio_lmi(const conic::CVecAffine& X, const CVec& h_nominal, double eps, int g_var, int vbar_var,
                            int lambda_var);

// Adds lam >= 0 and the block to the model.
void add_block(conic::Model& m, const LmiBlock& blk);

// Sum over users with chi_b(k) = 1 plus the AN form; exclude >= 0 drops that user.
QuadraticForm aggregate_forms(const std::vector<QuadraticForm>& per_user, const QuadraticForm& f_form,
                              const Eigen::VectorXi& chi_b, int exclude = -1);
ParamForm aggregate_forms(const std::vector<ParamForm>& per_user, const ParamForm& f_form,
                          const Eigen::VectorXi& chi_b, int exclude = -1);

// Exact extremes of q over the ball ||x|| <= eps (trust-region subproblem).
struct BallExtremum {
    double value = 0;
    CVec x;
};
BallExtremum min_over_ball(const QuadraticForm& q, double eps);
BallExtremum max_over_ball(const QuadraticForm& q, double eps);

// Closed forms for a single rank-one signal X: max and min of |(h+x)^H X|^2.
double worst_leakage(const CVec& h_nominal, const CVec& X, double eps);
double least_leakage(const CVec& h_nominal, const CVec& X, double eps);

}  // namespace mris::robust
