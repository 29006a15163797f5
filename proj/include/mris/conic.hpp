// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mris/types.hpp"

// Small conic modeling layer and a primal-dual interior-point engine for
// problems over products of nonnegative orthants, second-order cones and
// real symmetric PSD cones. Hermitian LMIs are realified by the layer.
namespace mris::conic {

// Real affine expression c + sum_i a_i x_i.
struct Affine {
    double c = 0;
    std::vector<std::pair<int, double>> t;

    Affine() = default;
    Affine(double v) : c(v) {}  // NOLINT: implicit constants are convenient in models
    static Affine var(int i, double a = 1.0) {
        Affine e;
        e.t.emplace_back(i, a);
        return e;
    }
    Affine& operator+=(const Affine& o);
    Affine& operator-=(const Affine& o);
    Affine& operator*=(double s);
    double eval(const RVec& x) const;
    void compress();
};
Affine operator+(Affine a, const Affine& b);
Affine operator-(Affine a, const Affine& b);
Affine operator-(Affine a);
Affine operator*(double s, Affine a);
Affine operator*(Affine a, double s);

// Complex affine scalar re + j im.
struct CAffine {
    Affine re, im;
    CAffine() = default;
    CAffine(cd v) : re(v.real()), im(v.imag()) {}  // NOLINT
    CAffine(Affine r, Affine i) : re(std::move(r)), im(std::move(i)) {}
    cd eval(const RVec& x) const { return {re.eval(x), im.eval(x)}; }
    CAffine conj() const { return {re, -im}; }
};
CAffine operator+(const CAffine& a, const CAffine& b);
CAffine operator-(const CAffine& a, const CAffine& b);
CAffine operator*(cd a, const CAffine& z);

// Complex vector affine map c + sum_i x_i d_i (x real).
struct CVecAffine {
    CVec c;
    std::vector<std::pair<int, CVec>> t;

    CVecAffine() = default;
    explicit CVecAffine(CVec v) : c(std::move(v)) {}
    int size() const { return static_cast<int>(c.size()); }
    CVec eval(const RVec& x) const;
    CAffine entry(int i) const;
    CAffine row_apply(const CVec& r) const;  // r^T v
    CAffine inner(const CVec& a) const;      // a^H v
    CVecAffine cwise(const CVec& d) const;   // d .* v
    CVecAffine lmul(const CMat& A) const;    // A v
    std::vector<Affine> realify() const;     // [Re v; Im v]
    void compress();
};
CVecAffine operator+(const CVecAffine& a, const CVecAffine& b);
CVecAffine operator*(cd s, const CVecAffine& a);

// Hermitian affine matrix c + sum_i x_i D_i.
struct HermAffine {
    CMat c;
    std::vector<std::pair<int, CMat>> t;

    HermAffine() = default;
    explicit HermAffine(int n) : c(CMat::Zero(n, n)) {}
    int dim() const { return static_cast<int>(c.rows()); }
    void add(int var, const CMat& D);
    CMat eval(const RVec& x) const;
    void compress();
};

struct RealLmi {
    RMat c;
    std::vector<std::pair<int, RMat>> t;
    std::string tag;
};

class Model {
public:
    int add_var(const std::string& name);
    CVecAffine add_cvec(int n, const std::string& name);
    int num_vars() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }

    void minimize(Affine obj);
    void maximize(Affine obj);
    void eq(Affine e);                                    // e = 0
    void ge(Affine e);                                    // e >= 0
    void le(Affine a, const Affine& b) { ge(b - std::move(a)); }
    void soc(Affine t, std::vector<Affine> x);            // ||x|| <= t
    void quad_le(std::vector<Affine> x, const Affine& t); // ||x||^2 <= t
    void rsoc(std::vector<Affine> x, const Affine& a, const Affine& b);  // ||x||^2 <= a b
    void lmi(const HermAffine& F, const std::string& tag = {});          // F >= 0, realified
    void lmi_real(RealLmi F);

    // Read access for the engine.
    const Affine& objective() const { return obj_; }
    bool maximizing() const { return max_; }
    const std::vector<Affine>& eqs() const { return eqs_; }
    const std::vector<Affine>& ges() const { return ges_; }
    const std::vector<std::vector<Affine>>& socs() const { return socs_; }
    const std::vector<RealLmi>& lmis() const { return lmis_; }

private:
    std::vector<std::string> names_;
    Affine obj_;
    bool max_ = false;
    std::vector<Affine> eqs_, ges_;
    std::vector<std::vector<Affine>> socs_;  // first entry is the cone head
    std::vector<RealLmi> lmis_;
};

enum class Status { Optimal, Infeasible, Inaccurate, Error };
const char* status_name(Status s);

struct Options {
    int max_iter = 100;
    double feastol = 1e-8;
    double abstol = 1e-8;
    double reltol = 1e-8;
};

struct Solution {
    Status status = Status::Error;
    double objective = 0;  // in the model's sense (maximized value for maximize)
    RVec x;
    int iterations = 0;
    double seconds = 0;
    double pres = 0, dres = 0, gap = 0;
    std::string message;

    bool ok() const { return status == Status::Optimal || status == Status::Inaccurate; }
    double value(const Affine& e) const { return e.eval(x); }
    cd value(const CAffine& e) const { return e.eval(x); }
    CVec value(const CVecAffine& e) const { return e.eval(x); }
};

Solution solve(const Model& model, const Options& opt = {});

const char* engine_name();

}  // namespace mris::conic
