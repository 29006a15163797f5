// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>

#include "mris/conic.hpp"

namespace mris::conic {

Affine& Affine::operator+=(const Affine& o) {
    c += o.c;
    t.insert(t.end(), o.t.begin(), o.t.end());
    return *this;
}

Affine& Affine::operator-=(const Affine& o) {
    c -= o.c;
    for (const auto& [i, a] : o.t) t.emplace_back(i, -a);
    return *this;
}

Affine& Affine::operator*=(double s) {
    c *= s;
    for (auto& p : t) p.second *= s;
    return *this;
}

double Affine::eval(const RVec& x) const {
    double v = c;
    for (const auto& [i, a] : t) v += a * x(i);
    return v;
}

void Affine::compress() {
    std::map<int, double> m;
    for (const auto& [i, a] : t) m[i] += a;
    t.clear();
    for (const auto& [i, a] : m)
        if (a != 0.0) t.emplace_back(i, a);
}

Affine operator+(Affine a, const Affine& b) { return a += b; }
Affine operator-(Affine a, const Affine& b) { return a -= b; }
Affine operator-(Affine a) { return a *= -1.0; }
Affine operator*(double s, Affine a) { return a *= s; }
Affine operator*(Affine a, double s) { return a *= s; }

CAffine operator+(const CAffine& a, const CAffine& b) { return {a.re + b.re, a.im + b.im}; }
CAffine operator-(const CAffine& a, const CAffine& b) { return {a.re - b.re, a.im - b.im}; }
CAffine operator*(cd a, const CAffine& z) {
    return {a.real() * z.re - a.imag() * z.im, a.imag() * z.re + a.real() * z.im};
}

CVec CVecAffine::eval(const RVec& x) const {
    CVec v = c;
    for (const auto& [i, d] : t) v += x(i) * d;
    return v;
}

CAffine CVecAffine::entry(int i) const {
    CAffine e(c(i));
    for (const auto& [k, d] : t) {
        if (d(i).real() != 0.0) e.re.t.emplace_back(k, d(i).real());
        if (d(i).imag() != 0.0) e.im.t.emplace_back(k, d(i).imag());
    }
    return e;
}

CAffine CVecAffine::row_apply(const CVec& r) const {
    CAffine e(static_cast<cd>(r.transpose() * c));
    for (const auto& [k, d] : t) {
        cd v = r.transpose() * d;
        e.re.t.emplace_back(k, v.real());
        e.im.t.emplace_back(k, v.imag());
    }
    return e;
}

CAffine CVecAffine::inner(const CVec& a) const { return row_apply(a.conjugate()); }

CVecAffine CVecAffine::cwise(const CVec& d) const {
    CVecAffine r(CVec(c.cwiseProduct(d)));
    for (const auto& [k, v] : t) r.t.emplace_back(k, v.cwiseProduct(d));
    return r;
}

CVecAffine CVecAffine::lmul(const CMat& A) const {
    CVecAffine r(CVec(A * c));
    for (const auto& [k, v] : t) r.t.emplace_back(k, A * v);
    return r;
}

std::vector<Affine> CVecAffine::realify() const {
    std::vector<Affine> out;
    for (int i = 0; i < size(); ++i) {
        CAffine e = entry(i);
        out.push_back(e.re);
        out.push_back(e.im);
    }
    return out;
}

void CVecAffine::compress() {
    std::map<int, CVec> m;
    for (const auto& [k, v] : t) {
        auto it = m.find(k);
        if (it == m.end())
            m.emplace(k, v);
        else
            it->second += v;
    }
    t.assign(m.begin(), m.end());
}

CVecAffine operator+(const CVecAffine& a, const CVecAffine& b) {
    CVecAffine r(CVec(a.c + b.c));
    r.t = a.t;
    r.t.insert(r.t.end(), b.t.begin(), b.t.end());
    return r;
}

CVecAffine operator*(cd s, const CVecAffine& a) {
    CVecAffine r(CVec(s * a.c));
    for (const auto& [k, v] : a.t) r.t.emplace_back(k, s * v);
    return r;
}

void HermAffine::add(int var, const CMat& D) { t.emplace_back(var, D); }

CMat HermAffine::eval(const RVec& x) const {
    CMat v = c;
    for (const auto& [i, D] : t) v += x(i) * D;
    return v;
}

void HermAffine::compress() {
    std::map<int, CMat> m;
    for (const auto& [k, D] : t) {
        auto it = m.find(k);
        if (it == m.end())
            m.emplace(k, D);
        else
            it->second += D;
    }
    t.assign(m.begin(), m.end());
}

int Model::add_var(const std::string& name) {
    names_.push_back(name);
    return static_cast<int>(names_.size()) - 1;
}

CVecAffine Model::add_cvec(int n, const std::string& name) {
    CVecAffine v(CVec::Zero(n));
    for (int i = 0; i < n; ++i) {
        int re = add_var(name + ".re[" + std::to_string(i) + "]");
        int im = add_var(name + ".im[" + std::to_string(i) + "]");
        CVec e = CVec::Zero(n);
        e(i) = 1.0;
        v.t.emplace_back(re, e);
        e(i) = kJ;
        v.t.emplace_back(im, e);
    }
    return v;
}

void Model::minimize(Affine obj) {
    obj_ = std::move(obj);
    max_ = false;
}

void Model::maximize(Affine obj) {
    obj_ = std::move(obj);
    max_ = true;
}

void Model::eq(Affine e) { eqs_.push_back(std::move(e)); }
void Model::ge(Affine e) { ges_.push_back(std::move(e)); }

void Model::soc(Affine t, std::vector<Affine> x) {
    x.insert(x.begin(), std::move(t));
    socs_.push_back(std::move(x));
}

void Model::quad_le(std::vector<Affine> x, const Affine& t) {
    // ||x||^2 <= t  <=>  ||(x, (t-1)/2)|| <= (t+1)/2
    x.push_back(0.5 * (t - 1.0));
    soc(0.5 * (t + 1.0), std::move(x));
}

void Model::rsoc(std::vector<Affine> x, const Affine& a, const Affine& b) {
    // ||x||^2 <= a b, a, b >= 0  <=>  ||(x, (a-b)/2)|| <= (a+b)/2
    x.push_back(0.5 * (a - b));
    soc(0.5 * (a + b), std::move(x));
}

namespace {

RMat realify(const CMat& H) {
    const Eigen::Index n = H.rows();
    RMat R(2 * n, 2 * n);
    RMat re = 0.5 * (H.real() + H.real().transpose());
    RMat im = 0.5 * (H.imag() - H.imag().transpose());
    R.topLeftCorner(n, n) = re;
    R.bottomRightCorner(n, n) = re;
    R.topRightCorner(n, n) = -im;
    R.bottomLeftCorner(n, n) = im;
    return R;
}

}  // namespace

void Model::lmi(const HermAffine& F, const std::string& tag) {
    HermAffine G = F;
    G.compress();
    RealLmi L;
    L.tag = tag;
    L.c = realify(G.c);
    for (const auto& [k, D] : G.t) L.t.emplace_back(k, realify(D));
    lmis_.push_back(std::move(L));
}

void Model::lmi_real(RealLmi F) {
    F.c = 0.5 * (F.c + F.c.transpose()).eval();
    for (auto& p : F.t) p.second = 0.5 * (p.second + p.second.transpose()).eval();
    lmis_.push_back(std::move(F));
}

const char* status_name(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Inaccurate: return "inaccurate";
        case Status::Error: return "error";
    }
    return "error";
}

}  // namespace mris::conic
