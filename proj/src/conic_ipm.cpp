// SPDX-License-Identifier: Apache-2.0
// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector step. Problem form:
//   minimize c'x  s.t.  A x = b,  G x + s = h,  s in LP x SOC x PSD.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Sparse>

#include "mris/conic.hpp"

namespace mris::conic {

const char* engine_name() { return "mris-hsd-ipm 1.0"; }

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

enum class Kind { Soc, Psd };

struct Block {
    Kind kind = Kind::Soc;
    int q = 0;  // SOC length or PSD order
    std::vector<int> cols;
    RMat G;  // rows x cols.size()
    RVec h;
    RVec s, z;
    // SOC scaling
    double beta = 1;
    RVec wb;
    // PSD scaling: S = R St R', Z = Ri' Zt Ri; lam is the diagonal of the scaled point
    RMat R, Ri, St, Zt;
    RVec lam;

    int rows() const { return kind == Kind::Soc ? q : q * q; }
    int degree() const { return kind == Kind::Soc ? 1 : q; }
};

struct Lp {
    SpMat G;
    RVec h, s, z, w, lam;
};

// Vector over all cones in scaled or unscaled coordinates.
struct CVecs {
    RVec lp;
    std::vector<RVec> bl;
};

double dot(const CVecs& a, const CVecs& b) {
    double v = a.lp.dot(b.lp);
    for (std::size_t i = 0; i < a.bl.size(); ++i) v += a.bl[i].dot(b.bl[i]);
    return v;
}

void axpy(double a, const CVecs& x, CVecs& y) {
    y.lp += a * x.lp;
    for (std::size_t i = 0; i < x.bl.size(); ++i) y.bl[i] += a * x.bl[i];
}

double norm(const CVecs& a) { return std::sqrt(dot(a, a)); }

Eigen::Map<RMat> as_mat(RVec& v, int n) { return Eigen::Map<RMat>(v.data(), n, n); }
Eigen::Map<const RMat> as_mat(const RVec& v, int n) { return Eigen::Map<const RMat>(v.data(), n, n); }
RVec as_vec(const RMat& M) { return Eigen::Map<const RVec>(M.data(), M.size()); }

double soc_jnorm(const RVec& u) {
    double r = u.tail(u.size() - 1).norm();
    double a = (u(0) - r) * (u(0) + r);
    return a > 0 ? std::sqrt(a) : 0.0;
}

struct Problem {
    int n = 0, p = 0;
    RVec c, b;
    SpMat A;
    Lp lp;
    std::vector<Block> blocks;
    int nu = 0;

    // ---- linear maps
    CVecs Gx(const RVec& x) const {
        CVecs o;
        o.lp = lp.G * x;
        for (const auto& bl : blocks) {
            RVec xs(static_cast<Eigen::Index>(bl.cols.size()));
            for (std::size_t i = 0; i < bl.cols.size(); ++i) xs(static_cast<Eigen::Index>(i)) = x(bl.cols[i]);
            o.bl.push_back(bl.G * xs);
        }
        return o;
    }
    RVec GTz(const CVecs& z) const {
        RVec o = lp.G.transpose() * z.lp;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            RVec t = blocks[k].G.transpose() * z.bl[k];
            for (std::size_t i = 0; i < blocks[k].cols.size(); ++i) o(blocks[k].cols[i]) += t(static_cast<Eigen::Index>(i));
        }
        return o;
    }
    CVecs hvec() const {
        CVecs o;
        o.lp = lp.h;
        for (const auto& bl : blocks) o.bl.push_back(bl.h);
        return o;
    }
    CVecs svec() const {
        CVecs o;
        o.lp = lp.s;
        for (const auto& bl : blocks) o.bl.push_back(bl.s);
        return o;
    }
    CVecs zvec() const {
        CVecs o;
        o.lp = lp.z;
        for (const auto& bl : blocks) o.bl.push_back(bl.z);
        return o;
    }
    CVecs identity() const {
        CVecs o;
        o.lp = RVec::Ones(lp.h.size());
        for (const auto& bl : blocks) {
            RVec e = RVec::Zero(bl.rows());
            if (bl.kind == Kind::Soc)
                e(0) = 1;
            else
                as_mat(e, bl.q).setIdentity();
            o.bl.push_back(e);
        }
        return o;
    }

    // ---- scaling
    // W^{-T} v: maps unscaled s-space vectors to the scaled space.
    CVecs scale_s(const CVecs& v) const {
        CVecs o;
        o.lp = v.lp.cwiseQuotient(lp.w);
        for (std::size_t k = 0; k < blocks.size(); ++k) o.bl.push_back(winv(blocks[k], v.bl[k]));
        return o;
    }
    // W^{-1} v: scaled z-space back to unscaled.
    CVecs unscale_z(const CVecs& v) const {
        CVecs o;
        o.lp = v.lp.cwiseQuotient(lp.w);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& bl = blocks[k];
            if (bl.kind == Kind::Soc)
                o.bl.push_back(winv(bl, v.bl[k]));
            else
                o.bl.push_back(as_vec(bl.Ri.transpose() * as_mat(v.bl[k], bl.q) * bl.Ri));
        }
        return o;
    }
    // W^T v: scaled s-space back to unscaled.
    CVecs unscale_s(const CVecs& v) const {
        CVecs o;
        o.lp = v.lp.cwiseProduct(lp.w);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& bl = blocks[k];
            if (bl.kind == Kind::Soc)
                o.bl.push_back(wmul(bl, v.bl[k]));
            else
                o.bl.push_back(as_vec(bl.R * as_mat(v.bl[k], bl.q) * bl.R.transpose()));
        }
        return o;
    }
    static RVec wmul(const Block& bl, const RVec& v) {
        const auto& w = bl.wb;
        const Eigen::Index m = w.size() - 1;
        double w1v1 = w.tail(m).dot(v.tail(m));
        RVec o(v.size());
        o(0) = w(0) * v(0) + w1v1;
        o.tail(m) = v(0) * w.tail(m) + v.tail(m) + w.tail(m) * (w1v1 / (1.0 + w(0)));
        return bl.beta * o;
    }
    static RVec winv(const Block& bl, const RVec& v) {
        if (bl.kind == Kind::Psd) return as_vec(bl.Ri * as_mat(v, bl.q) * bl.Ri.transpose());
        const auto& w = bl.wb;
        const Eigen::Index m = w.size() - 1;
        double w1v1 = w.tail(m).dot(v.tail(m));
        RVec o(v.size());
        o(0) = w(0) * v(0) - w1v1;
        o.tail(m) = -v(0) * w.tail(m) + v.tail(m) + w.tail(m) * (w1v1 / (1.0 + w(0)));
        return o / bl.beta;
    }

    CVecs lambda() const {
        CVecs o;
        o.lp = lp.lam;
        for (const auto& bl : blocks) {
            if (bl.kind == Kind::Soc)
                o.bl.push_back(bl.lam);
            else
                o.bl.push_back(as_vec(RMat(bl.lam.asDiagonal())));
        }
        return o;
    }

    // Jordan product u o v in the scaled space.
    CVecs jprod(const CVecs& u, const CVecs& v) const {
        CVecs o;
        o.lp = u.lp.cwiseProduct(v.lp);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& bl = blocks[k];
            if (bl.kind == Kind::Soc) {
                const Eigen::Index m = bl.q - 1;
                RVec r(bl.q);
                r(0) = u.bl[k].dot(v.bl[k]);
                r.tail(m) = u.bl[k](0) * v.bl[k].tail(m) + v.bl[k](0) * u.bl[k].tail(m);
                o.bl.push_back(r);
            } else {
                auto U = as_mat(u.bl[k], bl.q);
                auto V = as_mat(v.bl[k], bl.q);
                o.bl.push_back(as_vec(0.5 * (U * V + V * U)));
            }
        }
        return o;
    }

    // lambda \ r: solves lambda o x = r.
    CVecs jdiv(const CVecs& r) const {
        CVecs o;
        o.lp = r.lp.cwiseQuotient(lp.lam);
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& bl = blocks[k];
            const RVec& rr = r.bl[k];
            if (bl.kind == Kind::Soc) {
                const RVec& l = bl.lam;
                const Eigen::Index m = bl.q - 1;
                double l1n = l.tail(m).norm();
                double den = (l(0) - l1n) * (l(0) + l1n);
                RVec x(bl.q);
                x(0) = (l(0) * rr(0) - l.tail(m).dot(rr.tail(m))) / den;
                x.tail(m) = (rr.tail(m) - x(0) * l.tail(m)) / l(0);
                o.bl.push_back(x);
            } else {
                RVec x = rr;
                auto X = as_mat(x, bl.q);
                for (int j = 0; j < bl.q; ++j)
                    for (int i = 0; i < bl.q; ++i) X(i, j) *= 2.0 / (bl.lam(i) + bl.lam(j));
                o.bl.push_back(x);
            }
        }
        return o;
    }

    // Largest step a with lambda + a d in the cone (infinity if unbounded).
    double max_step(const CVecs& d) const {
        double a = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < d.lp.size(); ++i)
            if (d.lp(i) < 0) a = std::min(a, -lp.lam(i) / d.lp(i));
        for (std::size_t k = 0; k < blocks.size(); ++k) {
            const auto& bl = blocks[k];
            const RVec& dd = d.bl[k];
            if (bl.kind == Kind::Soc) {
                const RVec& l = bl.lam;
                const Eigen::Index m = bl.q - 1;
                double qa = dd(0) * dd(0) - dd.tail(m).squaredNorm();
                double qb = l(0) * dd(0) - l.tail(m).dot(dd.tail(m));
                double qc = std::pow(soc_jnorm(l), 2);
                // first positive root of qa a^2 + 2 qb a + qc
                double root = std::numeric_limits<double>::infinity();
                if (std::abs(qa) < 1e-300) {
                    if (qb < 0) root = -qc / (2 * qb);
                } else {
                    double disc = qb * qb - qa * qc;
                    if (disc >= 0) {
                        double sq = std::sqrt(disc);
                        double r1 = (-qb - sq) / qa, r2 = (-qb + sq) / qa;
                        for (double r : {r1, r2})
                            if (r > 0) root = std::min(root, r);
                    }
                }
                // the head must stay positive as well
                if (dd(0) < 0) root = std::min(root, -l(0) / dd(0));
                a = std::min(a, root);
            } else {
                RVec isq = bl.lam.cwiseSqrt().cwiseInverse();
                RMat D = isq.asDiagonal() * as_mat(dd, bl.q) * isq.asDiagonal();
                D = 0.5 * (D + D.transpose()).eval();
                double emin = Eigen::SelfAdjointEigenSolver<RMat>(D, Eigen::EigenvaluesOnly).eigenvalues()(0);
                if (emin < 0) a = std::min(a, -1.0 / emin);
            }
        }
        return a;
    }

    // Computes Nesterov-Todd scalings and lambda from the current s, z.
    bool update_scaling() {
        lp.w = lp.s.cwiseQuotient(lp.z).cwiseSqrt();
        lp.lam = lp.s.cwiseProduct(lp.z).cwiseSqrt();
        for (auto& bl : blocks) {
            if (bl.kind == Kind::Soc) {
                double ns = soc_jnorm(bl.s), nz = soc_jnorm(bl.z);
                if (!(ns > 0) || !(nz > 0)) return false;
                RVec sb = bl.s / ns, zb = bl.z / nz;
                double gamma = std::sqrt(std::max(0.0, (1.0 + sb.dot(zb)) / 2.0));
                RVec jz = zb;
                jz.tail(bl.q - 1) *= -1.0;
                bl.wb = (sb + jz) / (2.0 * gamma);
                bl.beta = std::sqrt(ns / nz);
                bl.lam = wmul(bl, bl.z);
            } else {
                Eigen::LLT<RMat> cs(0.5 * (bl.St + bl.St.transpose()));
                Eigen::LLT<RMat> cz(0.5 * (bl.Zt + bl.Zt.transpose()));
                if (cs.info() != Eigen::Success || cz.info() != Eigen::Success) return false;
                RMat Ls = cs.matrixL(), Lz = cz.matrixL();
                // singular pairs of Lz' Ls from the eigenpairs of its Gram
                // matrix; the spread stays moderate near the central path
                RMat Mx = Lz.transpose() * Ls;
                Eigen::SelfAdjointEigenSolver<RMat> es(Mx.transpose() * Mx);
                if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 0)) return false;
                RVec sv = es.eigenvalues().cwiseSqrt();
                const RMat& V = es.eigenvectors();
                RMat U = Mx * V * sv.cwiseInverse().asDiagonal();
                RVec isq = sv.cwiseSqrt().cwiseInverse();
                RMat Rn = bl.R * Ls * V * isq.asDiagonal();
                RMat Rin = isq.asDiagonal() * U.transpose() * Lz.transpose() * bl.Ri;
                bl.R = Rn;
                bl.Ri = Rin;
                bl.lam = sv;
                bl.St = sv.asDiagonal();
                bl.Zt = sv.asDiagonal();
            }
        }
        return true;
    }
};

// Dense KKT system [H A'; A 0] with light regularization and refinement.
struct Kkt {
    RMat K, Kreg;
    Eigen::PartialPivLU<RMat> lu;
    int n = 0, p = 0;

    void factor(const RMat& H, const SpMat& A) {
        n = static_cast<int>(H.rows());
        p = static_cast<int>(A.rows());
        K = RMat::Zero(n + p, n + p);
        K.topLeftCorner(n, n) = H;
        RMat Ad = A;
        K.bottomLeftCorner(p, n) = Ad;
        K.topRightCorner(n, p) = Ad.transpose();
        double scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        double delta = 1e-13 * scale;
        Kreg = K;
        for (int i = 0; i < n; ++i) Kreg(i, i) += delta;
        for (int i = n; i < n + p; ++i) Kreg(i, i) -= delta;
        lu.compute(Kreg);
    }
    RVec solve(const RVec& r) const {
        RVec x = lu.solve(r);
        for (int it = 0; it < 3; ++it) {
            RVec res = r - K * x;
            if (res.norm() <= 1e-15 * (1.0 + r.norm())) break;
            x += lu.solve(res);
        }
        return x;
    }
};

std::vector<int> union_cols(const std::vector<const Affine*>& rows) {
    std::set<int> s;
    for (const auto* a : rows)
        for (const auto& [i, v] : a->t) s.insert(i);
    return {s.begin(), s.end()};
}

Problem build(const Model& m) {
    Problem P;
    P.n = m.num_vars();
    P.c = RVec::Zero(P.n);
    {
        Affine o = m.objective();
        o.compress();
        double sgn = m.maximizing() ? -1.0 : 1.0;
        for (const auto& [i, a] : o.t) P.c(i) = sgn * a;
    }
    // equalities
    {
        std::vector<Trip> tr;
        P.p = static_cast<int>(m.eqs().size());
        P.b = RVec::Zero(P.p);
        for (int r = 0; r < P.p; ++r) {
            Affine e = m.eqs()[static_cast<std::size_t>(r)];
            e.compress();
            for (const auto& [i, a] : e.t) tr.emplace_back(r, i, a);
            P.b(r) = -e.c;
        }
        P.A.resize(P.p, P.n);
        P.A.setFromTriplets(tr.begin(), tr.end());
    }
    // linear inequalities
    {
        std::vector<Trip> tr;
        const int ml = static_cast<int>(m.ges().size());
        P.lp.h = RVec::Zero(ml);
        for (int r = 0; r < ml; ++r) {
            Affine e = m.ges()[static_cast<std::size_t>(r)];
            e.compress();
            for (const auto& [i, a] : e.t) tr.emplace_back(r, i, -a);
            P.lp.h(r) = e.c;
        }
        P.lp.G.resize(ml, P.n);
        P.lp.G.setFromTriplets(tr.begin(), tr.end());
        P.nu += ml;
    }
    for (const auto& cone : m.socs()) {
        std::vector<Affine> rows = cone;
        std::vector<const Affine*> ptr;
        for (auto& r : rows) {
            r.compress();
            ptr.push_back(&r);
        }
        Block bl;
        bl.kind = Kind::Soc;
        bl.q = static_cast<int>(rows.size());
        bl.cols = union_cols(ptr);
        std::map<int, int> pos;
        for (std::size_t i = 0; i < bl.cols.size(); ++i) pos[bl.cols[i]] = static_cast<int>(i);
        bl.G = RMat::Zero(bl.q, static_cast<Eigen::Index>(bl.cols.size()));
        bl.h = RVec::Zero(bl.q);
        for (int r = 0; r < bl.q; ++r) {
            for (const auto& [i, a] : rows[static_cast<std::size_t>(r)].t) bl.G(r, pos[i]) -= a;
            bl.h(r) = rows[static_cast<std::size_t>(r)].c;
        }
        P.nu += 1;
        P.blocks.push_back(std::move(bl));
    }
    for (const auto& L : m.lmis()) {
        Block bl;
        bl.kind = Kind::Psd;
        bl.q = static_cast<int>(L.c.rows());
        std::map<int, RMat> terms;
        for (const auto& [i, D] : L.t) {
            auto it = terms.find(i);
            if (it == terms.end())
                terms.emplace(i, D);
            else
                it->second += D;
        }
        for (const auto& [i, D] : terms) bl.cols.push_back(i);
        bl.G = RMat::Zero(bl.q * bl.q, static_cast<Eigen::Index>(bl.cols.size()));
        int j = 0;
        for (const auto& [i, D] : terms) bl.G.col(j++) = -as_vec(D);
        bl.h = as_vec(L.c);
        bl.R = RMat::Identity(bl.q, bl.q);
        bl.Ri = RMat::Identity(bl.q, bl.q);
        P.nu += bl.q;
        P.blocks.push_back(std::move(bl));
    }
    return P;
}

// H = sum_k G_k' W_k^{-1} W_k^{-T} G_k
RMat assemble_h(const Problem& P) {
    RMat H = RMat::Zero(P.n, P.n);
    {
        RVec d = P.lp.w.cwiseInverse().cwiseAbs2();
        SpMat DG = d.asDiagonal() * P.lp.G;
        H += RMat(SpMat(P.lp.G.transpose() * DG));
    }
    for (const auto& bl : P.blocks) {
        const Eigen::Index nc = static_cast<Eigen::Index>(bl.cols.size());
        RMat Hb;
        if (bl.kind == Kind::Psd) {
            // <Ri G_a Ri', Ri G_b Ri'> = tr(T_a T_b) with T_j = Ri'Ri G_j, so one
            // wide product and a Gram matrix against the blockwise transposes
            const int q = bl.q;
            RMat Q = bl.Ri.transpose() * bl.Ri;
            Eigen::Map<const RMat> Gm(bl.G.data(), q, q * nc);
            RMat T = Q * Gm;
            RMat Tt(q, q * nc);
            for (Eigen::Index j = 0; j < nc; ++j) Tt.middleCols(j * q, q) = T.middleCols(j * q, q).transpose();
            Eigen::Map<const RMat> Tm(T.data(), q * q, nc), Ttm(Tt.data(), q * q, nc);
            Hb = Ttm.transpose() * Tm;
            Hb = 0.5 * (Hb + Hb.transpose()).eval();
        } else {
            RMat Gh(bl.rows(), nc);
            for (Eigen::Index j = 0; j < nc; ++j) Gh.col(j) = Problem::winv(bl, bl.G.col(j));
            Hb = Gh.transpose() * Gh;
        }
        for (Eigen::Index a = 0; a < nc; ++a)
            for (Eigen::Index b2 = 0; b2 < nc; ++b2) H(bl.cols[a], bl.cols[b2]) += Hb(a, b2);
    }
    return H;
}

RMat assemble_h_identity(const Problem& P) {
    RMat H = RMat(SpMat(P.lp.G.transpose() * P.lp.G));
    for (const auto& bl : P.blocks) {
        RMat Hb = bl.G.transpose() * bl.G;
        const Eigen::Index nc = static_cast<Eigen::Index>(bl.cols.size());
        for (Eigen::Index a = 0; a < nc; ++a)
            for (Eigen::Index b2 = 0; b2 < nc; ++b2) H(bl.cols[a], bl.cols[b2]) += Hb(a, b2);
    }
    return H;
}

// Shift v into the interior of the cone if needed: v += (1 + t) e.
void shift_interior(const Problem& P, CVecs& v) {
    double t = -std::numeric_limits<double>::infinity();
    if (v.lp.size() > 0) t = std::max(t, -v.lp.minCoeff());
    for (std::size_t k = 0; k < P.blocks.size(); ++k) {
        const auto& bl = P.blocks[k];
        if (bl.kind == Kind::Soc) {
            t = std::max(t, v.bl[k].tail(bl.q - 1).norm() - v.bl[k](0));
        } else {
            RMat M = as_mat(v.bl[k], bl.q);
            M = 0.5 * (M + M.transpose()).eval();
            t = std::max(t, -Eigen::SelfAdjointEigenSolver<RMat>(M, Eigen::EigenvaluesOnly).eigenvalues()(0));
        }
    }
    if (t >= -1e-8 * std::max(norm(v), 1.0)) axpy(1.0 + t, P.identity(), v);
}

void set_sz(Problem& P, const CVecs& s, const CVecs& z) {
    P.lp.s = s.lp;
    P.lp.z = z.lp;
    for (std::size_t k = 0; k < P.blocks.size(); ++k) {
        auto& bl = P.blocks[k];
        bl.s = s.bl[k];
        bl.z = z.bl[k];
        if (bl.kind == Kind::Psd) {
            // St, Zt are expressed in the current R coordinates
            bl.St = bl.Ri * as_mat(bl.s, bl.q) * bl.Ri.transpose();
            bl.Zt = bl.R.transpose() * as_mat(bl.z, bl.q) * bl.R;
        }
    }
}

}  // namespace

Solution solve(const Model& model, const Options& opt) {
    auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    auto finish = [&](Solution& s) {
        s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return s;
    };
    Problem P = build(model);
    const int n = P.n, p = P.p;
    if (n == 0) {
        sol.status = Status::Error;
        sol.message = "empty model";
        return finish(sol);
    }

    // ---- initial point
    Kkt kkt;
    kkt.factor(assemble_h_identity(P), P.A);
    const CVecs hv = P.hvec();
    RVec x, y;
    CVecs s, z;
    {
        RVec r(n + p);
        r.head(n) = P.GTz(hv);
        r.tail(p) = P.b;
        RVec sol0 = kkt.solve(r);
        x = sol0.head(n);
        s = hv;
        axpy(-1.0, P.Gx(x), s);
        r.head(n) = -P.c;
        r.tail(p).setZero();
        RVec sol1 = kkt.solve(r);
        y = sol1.tail(p);
        z = P.Gx(sol1.head(n));
    }
    shift_interior(P, s);
    shift_interior(P, z);
    set_sz(P, s, z);
    double tau = 1.0, kappa = 1.0;

    const double nb = std::max(1.0, P.b.norm()), nh = std::max(1.0, norm(hv)), nc = std::max(1.0, P.c.norm());
    Status status = Status::Error;
    std::string msg = "iteration limit";
    int it = 0;
    double pres = 0, dres = 0, gap = 0, pcost = 0;
    RVec best_x = x / tau;
    double best_score = std::numeric_limits<double>::infinity();
    double best_pres = 0, best_dres = 0, best_gap = 0, best_pcost = 0;
    for (; it <= opt.max_iter; ++it) {
        // ---- residuals
        CVecs Gxv = P.Gx(x);
        RVec GTz = P.GTz(z);
        RVec ATy = P.A.transpose() * y;
        RVec Ax = P.A * x;
        RVec F1 = ATy + GTz + tau * P.c;
        RVec F2 = -Ax + tau * P.b;
        CVecs F3 = s;
        axpy(1.0, Gxv, F3);
        axpy(-tau, hv, F3);
        double cx = P.c.dot(x), by = P.b.dot(y), hz = dot(hv, z);
        double F4 = kappa + cx + by + hz;
        double sz = dot(s, z);
        double mu = (sz + kappa * tau) / (P.nu + 1);

        pres = std::max(F2.norm() / tau / nb, norm(F3) / tau / nh);
        dres = F1.norm() / tau / nc;
        pcost = cx / tau;
        double dcost = -(by + hz) / tau;
        gap = sz / (tau * tau);
        {
            // the last iterate can degrade when the engine stalls; keep the best one
            double score = std::max({pres, dres, gap / std::max(1.0, std::abs(pcost))});
            if (score <= best_score) {
                best_score = score;
                best_x = x / tau;
                best_pres = pres;
                best_dres = dres;
                best_gap = gap;
                best_pcost = pcost;
            }
        }
        if (pres <= opt.feastol && dres <= opt.feastol &&
            (gap <= opt.abstol || gap <= opt.reltol * std::max(1e-300, std::min(std::abs(pcost), std::abs(dcost))))) {
            status = Status::Optimal;
            msg = "optimal";
            break;
        }
        if (by + hz < 0) {
            double pinf = (ATy + GTz).norm() / (-(by + hz)) * nc;
            if (pinf <= opt.feastol) {
                status = Status::Infeasible;
                msg = "primal infeasible";
                break;
            }
        }
        if (cx < 0) {
            CVecs r = s;
            axpy(1.0, Gxv, r);
            double dinf = std::max(Ax.norm(), norm(r)) / (-cx);
            if (dinf <= opt.feastol) {
                status = Status::Error;
                msg = "dual infeasible (unbounded)";
                break;
            }
        }
        if (it == opt.max_iter) break;

        // ---- scaling and factorization
        if (!P.update_scaling()) {
            msg = "loss of cone interiority";
            break;
        }
        kkt.factor(assemble_h(P), P.A);
        const CVecs lam = P.lambda();
        const CVecs hs = P.scale_s(hv);

        // direction for the tau coefficient
        RVec r1(n + p);
        r1.head(n) = P.GTz(P.unscale_z(hs)) - P.c;
        r1.tail(p) = P.b;
        RVec d1 = kkt.solve(r1);
        RVec dx1 = d1.head(n), dy1 = d1.tail(p);
        CVecs dzs1 = P.scale_s(P.Gx(dx1));
        axpy(-1.0, hs, dzs1);
        CVecs dz1 = P.unscale_z(dzs1);
        double den1 = -kappa / tau + P.c.dot(dx1) + P.b.dot(dy1) + dot(hv, dz1);

        struct Dir {
            RVec dx, dy;
            CVecs dzs, dss;
            double dtau = 0, dkappa = 0;
        };
        auto direction = [&](const RVec& q1, const RVec& q2, const CVecs& q3, double q4, const CVecs& q5,
                             double q6) {
            Dir d;
            CVecs l5 = P.jdiv(q5);
            CVecs g = P.scale_s(q3);
            axpy(-1.0, l5, g);
            RVec r(n + p);
            r.head(n) = q1 + P.GTz(P.unscale_z(g));
            r.tail(p) = -q2;
            RVec d0 = kkt.solve(r);
            RVec dx0 = d0.head(n), dy0 = d0.tail(p);
            CVecs dzs0 = P.scale_s(P.Gx(dx0));
            axpy(-1.0, g, dzs0);
            CVecs dz0 = P.unscale_z(dzs0);
            double num = q4 - q6 / tau - P.c.dot(dx0) - P.b.dot(dy0) - dot(hv, dz0);
            d.dtau = num / den1;
            d.dx = dx0 + d.dtau * dx1;
            d.dy = dy0 + d.dtau * dy1;
            d.dzs = dzs0;
            axpy(d.dtau, dzs1, d.dzs);
            d.dss = l5;
            axpy(-1.0, d.dzs, d.dss);
            d.dkappa = (q6 - kappa * d.dtau) / tau;
            return d;
        };
        auto step_to_boundary = [&](const Dir& d) {
            double a = std::min(P.max_step(d.dss), P.max_step(d.dzs));
            if (d.dtau < 0) a = std::min(a, -tau / d.dtau);
            if (d.dkappa < 0) a = std::min(a, -kappa / d.dkappa);
            return a;
        };

        CVecs mF3 = F3;
        mF3.lp *= -1.0;
        for (auto& v : mF3.bl) v *= -1.0;
        CVecs ll = P.jprod(lam, lam);
        CVecs q5a = ll;
        q5a.lp *= -1.0;
        for (auto& v : q5a.bl) v *= -1.0;
        Dir aff = direction(-F1, -F2, mF3, -F4, q5a, -kappa * tau);
        double alpha_a = std::min(1.0, step_to_boundary(aff));
        double sigma = std::pow(1.0 - alpha_a, 3);

        CVecs q5 = q5a;
        axpy(-1.0, P.jprod(aff.dss, aff.dzs), q5);
        axpy(sigma * mu, P.identity(), q5);
        double q6 = -kappa * tau - aff.dkappa * aff.dtau + sigma * mu;
        CVecs q3 = mF3;
        for (auto* v : {&q3.lp}) *v *= (1.0 - sigma);
        for (auto& v : q3.bl) v *= (1.0 - sigma);
        Dir dir = direction(-(1.0 - sigma) * F1, -(1.0 - sigma) * F2, q3, -(1.0 - sigma) * F4, q5, q6);
        double alpha = std::min(1.0, 0.99 * step_to_boundary(dir));
        if (!(alpha > 1e-12)) {
            msg = "step length collapsed";
            break;
        }

        // ---- update
        x += alpha * dir.dx;
        y += alpha * dir.dy;
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
        CVecs ds = P.unscale_s(dir.dss);
        CVecs dz = P.unscale_z(dir.dzs);
        P.lp.s += alpha * ds.lp;
        P.lp.z += alpha * dz.lp;
        for (std::size_t k = 0; k < P.blocks.size(); ++k) {
            auto& bl = P.blocks[k];
            if (bl.kind == Kind::Soc) {
                bl.s += alpha * ds.bl[k];
                bl.z += alpha * dz.bl[k];
            } else {
                RMat Lm = bl.lam.asDiagonal();
                bl.St = Lm + alpha * as_mat(dir.dss.bl[k], bl.q);
                bl.Zt = Lm + alpha * as_mat(dir.dzs.bl[k], bl.q);
                bl.s = as_vec(bl.R * bl.St * bl.R.transpose());
                bl.z = as_vec(bl.Ri.transpose() * bl.Zt * bl.Ri);
            }
        }
        s = P.svec();
        z = P.zvec();
    }

    sol.iterations = it;
    if (status != Status::Infeasible) {
        pres = best_pres;
        dres = best_dres;
        gap = best_gap;
        pcost = best_pcost;
    }
    sol.pres = pres;
    sol.dres = dres;
    sol.gap = gap;
    sol.x = best_x;
    if (status == Status::Error && msg != "dual infeasible (unbounded)") {
        if (pres <= 1e-6 && dres <= 1e-6 && gap <= 1e-6 * std::max(1.0, std::abs(pcost))) {
            status = Status::Inaccurate;
            msg = "reduced accuracy: " + msg;
        }
    }
    sol.status = status;
    sol.message = msg;
    sol.objective = model.objective().eval(sol.x);
    return finish(sol);
}

}  // namespace mris::conic
