// SPDX-License-Identifier: Apache-2.0
#include "mris/robustify.hpp"

#include <algorithm>
#include <cmath>

namespace mris::robust {

QuadraticForm QuadraticForm::zero(int M) { return {CMat::Zero(M, M), CVec::Zero(M), 0.0}; }

double QuadraticForm::eval(const CVec& x) const {
    return std::real(x.dot(A * x)) + 2.0 * std::real(a.dot(x)) + c;
}

QuadraticForm& QuadraticForm::operator+=(const QuadraticForm& o) {
    A += o.A;
    a += o.a;
    c += o.c;
    return *this;
}

QuadraticForm& QuadraticForm::operator-=(const QuadraticForm& o) {
    A -= o.A;
    a -= o.a;
    c -= o.c;
    return *this;
}

QuadraticForm& QuadraticForm::operator*=(double s) {
    A *= s;
    a *= s;
    c *= s;
    return *this;
}

QuadraticForm ParamForm::at(const RVec& x) const {
    QuadraticForm q = base;
    for (const auto& [i, f] : terms) {
        QuadraticForm t = f;
        t *= x(i);
        q += t;
    }
    return q;
}

ParamForm& ParamForm::operator+=(const ParamForm& o) {
    base += o.base;
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    return *this;
}

ParamForm& ParamForm::operator*=(double s) {
    base *= s;
    for (auto& p : terms) p.second *= s;
    return *this;
}

namespace {

QuadraticForm from_matrix(const CVec& h, const CMat& A) {
    QuadraticForm q;
    q.A = 0.5 * (A + A.adjoint());
    q.a = q.A * h;
    q.c = std::real(h.dot(q.a));
    return q;
}

void check_dim(const CVec& h, const CVec& X) {
    if (h.size() != X.size()) throw Error("dimension", "quadratic form: channel and signal lengths differ");
}

}  // namespace

QuadraticForm exact_form(const CVec& h_nominal, const CVec& X) {
    check_dim(h_nominal, X);
    return from_matrix(h_nominal, X * X.adjoint());
}

QuadraticForm signal_taylor_form(const CVec& h_nominal, const CVec& X_exp, const CVec& X_cur) {
    check_dim(h_nominal, X_exp);
    check_dim(h_nominal, X_cur);
    CMat A = X_cur * X_exp.adjoint() + X_exp * X_cur.adjoint() - X_exp * X_exp.adjoint();
    return from_matrix(h_nominal, A);
}

ParamForm signal_taylor_form(const CVec& h_nominal, const CVec& X_exp, const conic::CVecAffine& X_cur) {
    check_dim(h_nominal, X_exp);
    if (X_cur.size() != X_exp.size()) throw Error("dimension", "quadratic form: affine signal length differs");
    ParamForm p(signal_taylor_form(h_nominal, X_exp, X_cur.c));
    for (const auto& [k, d] : X_cur.t) {
        CMat A = d * X_exp.adjoint() + X_exp * d.adjoint();
        p.terms.emplace_back(k, from_matrix(h_nominal, A));
    }
    return p;
}

QuadraticForm taylor_quadratic_form(const CVec& h_nominal, const CMat& G, const CVec& u_exp, const CVec& w_exp,
                                    const CVec& u_cur, const CVec& w_cur) {
    if (G.rows() != h_nominal.size() || u_exp.size() != G.rows() || u_cur.size() != G.rows() ||
        w_exp.size() != G.cols() || w_cur.size() != G.cols())
        throw Error("dimension", "taylor_quadratic_form: inconsistent sizes");
    CVec X_exp = u_exp.cwiseProduct(G * w_exp);
    CVec X_cur = u_cur.cwiseProduct(G * w_cur);
    return signal_taylor_form(h_nominal, X_exp, X_cur);
}

double sca_leak_budget(double v_tau, double vbar_tau, double v, double vbar) {
    double e = std::exp(v_tau);
    return (e - 1.0) * vbar + vbar_tau * e * (v - v_tau);
}

conic::Affine sca_leak_budget_expr(double v_tau, double vbar_tau, int v, int vbar) {
    double e = std::exp(v_tau);
    conic::Affine r(-vbar_tau * e * v_tau);
    r += conic::Affine::var(vbar, e - 1.0);
    r += conic::Affine::var(v, vbar_tau * e);
    return r;
}

namespace {

// Embeds an M x M matrix, an M vector and a scalar into an (M+1) x (M+1) Hermitian matrix.
CMat bordered(const CMat& A, const CVec& a, double c) {
    const Eigen::Index M = A.rows();
    CMat F(M + 1, M + 1);
    F.topLeftCorner(M, M) = A;
    F.topRightCorner(M, 1) = a;
    F.bottomLeftCorner(1, M) = a.adjoint();
    F(M, M) = c;
    return F;
}

}  // namespace

LmiBlock assemble_lmi(const ParamForm& q, const conic::Affine& rhs, Sense sense, double eps, int lambda_var) {
    if (eps < 0) throw Error("domain", "assemble_lmi: negative radius");
    const int M = q.dim();
    const double s = sense == Sense::Upper ? -1.0 : 1.0;
    LmiBlock blk;
    blk.lambda = lambda_var;
    blk.sense = sense;
    blk.eps = eps;
    // constant part: s*[A, a; a^H, c] with the rhs constant moved into the corner
    blk.F = conic::HermAffine(M + 1);
    blk.F.c = s * bordered(q.base.A, q.base.a, q.base.c);
    blk.F.c(M, M) -= s * rhs.c;
    for (const auto& [k, f] : q.terms) blk.F.add(k, s * bordered(f.A, f.a, f.c));
    for (const auto& [k, v] : rhs.t) {
        CMat D = CMat::Zero(M + 1, M + 1);
        D(M, M) = -s * v;
        blk.F.add(k, D);
    }
    CMat L = CMat::Identity(M + 1, M + 1);
    L(M, M) = -eps * eps;
    blk.F.add(lambda_var, L);
    blk.F.compress();
    return blk;
}

LmiBlock assemble_lmi(const QuadraticForm& q, const conic::Affine& rhs, Sense sense, double eps, int lambda_var) {
    return assemble_lmi(ParamForm(q), rhs, sense, eps, lambda_var);
}

LmiBlock assemble_ratio_lmi(const conic::CVecAffine& X, const CVec& h_nominal, double eps, int g_var, int vbar_var,
                            int lambda_var) {
    const int M = X.size();
    check_dim(h_nominal, X.c);
    LmiBlock blk;
    blk.lambda = lambda_var;
    blk.sense = Sense::Upper;
    blk.eps = eps;
    blk.F = conic::HermAffine(M + 2);
    auto place = [&](const CVec& x) {
        CMat D = CMat::Zero(M + 2, M + 2);
        D.block(0, M + 1, M, 1) = x;
        D.block(M + 1, 0, 1, M) = x.adjoint();
        cd hx = h_nominal.dot(x);
        D(M, M + 1) = hx;
        D(M + 1, M) = std::conj(hx);
        return D;
    };
    blk.F.c = place(X.c);
    for (const auto& [k, d] : X.t) blk.F.add(k, place(d));
    CMat L = CMat::Zero(M + 2, M + 2);
    L.topLeftCorner(M, M).setIdentity();
    L(M, M) = -eps * eps;
    blk.F.add(lambda_var, L);
    CMat Dg = CMat::Zero(M + 2, M + 2);
    Dg(M, M) = 1.0;
    blk.F.add(g_var, Dg);
    CMat Dv = CMat::Zero(M + 2, M + 2);
    Dv(M + 1, M + 1) = 1.0;
    blk.F.add(vbar_var, Dv);
    blk.F.compress();
    return blk;
}

void add_block(conic::Model& m, const LmiBlock& blk) {
    m.ge(conic::Affine::var(blk.lambda));
    m.lmi(blk.F, blk.tag);
}

QuadraticForm aggregate_forms(const std::vector<QuadraticForm>& per_user, const QuadraticForm& f_form,
                              const Eigen::VectorXi& chi_b, int exclude) {
    QuadraticForm q = f_form;
    for (int k = 0; k < static_cast<int>(per_user.size()); ++k)
        if (k != exclude && chi_b(k) == 1) q += per_user[static_cast<std::size_t>(k)];
    return q;
}

ParamForm aggregate_forms(const std::vector<ParamForm>& per_user, const ParamForm& f_form,
                          const Eigen::VectorXi& chi_b, int exclude) {
    ParamForm q = f_form;
    for (int k = 0; k < static_cast<int>(per_user.size()); ++k)
        if (k != exclude && chi_b(k) == 1) q += per_user[static_cast<std::size_t>(k)];
    return q;
}

BallExtremum min_over_ball(const QuadraticForm& q, double eps) {
    const int M = q.dim();
    BallExtremum out;
    out.x = CVec::Zero(M);
    out.value = q.c;
    if (eps <= 0 || M == 0) return out;
    CMat A = 0.5 * (q.A + q.A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(A);
    const RVec& l = es.eigenvalues();
    const CMat& V = es.eigenvectors();
    CVec b = V.adjoint() * q.a;
    const double scale = std::max({1.0, l.cwiseAbs().maxCoeff(), b.norm() / eps});
    const double lmin = l(0);
    const double tie = 1e-12 * scale;

    auto eval_y = [&](const CVec& y) {
        double v = q.c;
        for (int i = 0; i < M; ++i) v += l(i) * std::norm(y(i)) + 2.0 * std::real(std::conj(b(i)) * y(i));
        return v;
    };
    auto y_of = [&](double mu) {
        CVec y(M);
        for (int i = 0; i < M; ++i) y(i) = (l(i) + mu) > 0 ? -b(i) / (l(i) + mu) : cd(0.0);
        return y;
    };

    CVec y;
    if (lmin > tie) {
        y = y_of(0.0);
        if (y.norm() <= eps) {
            out.x = V * y;
            out.value = eval_y(y);
            return out;
        }
    }
    // boundary solution: ||y(mu)|| = eps with mu >= max(0, -lmin)
    const double lo0 = std::max(0.0, -lmin);
    bool hard = true;
    for (int i = 0; i < M; ++i)
        if (l(i) - lmin <= tie && std::abs(b(i)) > 1e-14 * scale) hard = false;
    if (hard) {
        CVec yh = CVec::Zero(M);
        for (int i = 0; i < M; ++i)
            if (l(i) - lmin > tie) yh(i) = -b(i) / (l(i) + lo0);
        if (yh.norm() <= eps) {
            // fill the remaining radius along the smallest eigenvector
            int i0 = 0;
            yh(i0) += std::sqrt(std::max(0.0, eps * eps - yh.squaredNorm()));
            out.x = V * yh;
            out.value = eval_y(yh);
            return out;
        }
    }
    double lo = lo0, hi = lo0 + b.norm() / eps + 1e-300;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (y_of(mid).norm() > eps)
            lo = mid;
        else
            hi = mid;
    }
    y = y_of(hi);
    if (y.norm() > 0) y *= std::min(1.0, eps / y.norm());
    out.x = V * y;
    out.value = eval_y(y);
    return out;
}

BallExtremum max_over_ball(const QuadraticForm& q, double eps) {
    QuadraticForm n = q;
    n *= -1.0;
    BallExtremum r = min_over_ball(n, eps);
    r.value = -r.value;
    return r;
}

double worst_leakage(const CVec& h_nominal, const CVec& X, double eps) {
    double v = std::abs(h_nominal.dot(X)) + eps * X.norm();
    return v * v;
}

double least_leakage(const CVec& h_nominal, const CVec& X, double eps) {
    double v = std::max(0.0, std::abs(h_nominal.dot(X)) - eps * X.norm());
    return v * v;
}

}  // namespace mris::robust
