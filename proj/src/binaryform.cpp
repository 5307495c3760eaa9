#include "tangentloci/binaryform.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tangentloci::symqr {

ProjPoint1::ProjPoint1(cplx l, cplx m) : lambda(l), mu(m) {
    double norm = std::sqrt(std::norm(lambda) + std::norm(mu));
    if (!(norm > 0)) fail(Err::InvalidInput, "projective point (0:0)");
    lambda /= norm;
    mu /= norm;
    cplx lead = (std::abs(lambda) >= std::abs(mu)) ? lambda : mu;
    cplx phase = lead / std::abs(lead);
    lambda /= phase;
    mu /= phase;
}

double chordal(const ProjPoint1& a, const ProjPoint1& b) {
    return std::abs(a.lambda * b.mu - b.lambda * a.mu);
}

cplx BinaryForm::eval(const cplx& lambda, const cplx& mu) const {
    const int d = degree();
    // Horner in whichever variable dominates, for stability at both charts.
    if (std::abs(lambda) >= std::abs(mu)) {
        cplx t = mu / lambda;
        cplx acc = coeffs(d);
        for (int k = d - 1; k >= 0; --k) acc = acc * t + coeffs(k);
        return acc * std::pow(lambda, d);
    }
    cplx t = lambda / mu;
    cplx acc = coeffs(0);
    for (int k = 1; k <= d; ++k) acc = acc * t + coeffs(k);
    return acc * std::pow(mu, d);
}

double BinaryForm::max_abs_coeff() const {
    double best = 0;
    for (int i = 0; i < coeffs.size(); ++i) best = std::max(best, std::abs(coeffs(i)));
    return best;
}

std::vector<cplx> poly_roots_ascending(const VecXc& coeffs) {
    int hi = static_cast<int>(coeffs.size()) - 1;
    double scale = 0;
    for (int i = 0; i <= hi; ++i) scale = std::max(scale, std::abs(coeffs(i)));
    if (!(scale > 0)) fail(Err::IdenticallyZero, "zero polynomial has no root list");
    while (hi > 0 && std::abs(coeffs(hi)) < 1e-14 * scale) --hi;
    if (hi == 0) return {};
    MatXc comp = MatXc::Zero(hi, hi);
    for (int i = 1; i < hi; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < hi; ++i) comp(i, hi - 1) = -coeffs(i) / coeffs(hi);
    Eigen::ComplexEigenSolver<MatXc> es(comp, false);
    std::vector<cplx> roots(hi);
    for (int i = 0; i < hi; ++i) roots[i] = es.eigenvalues()(i);
    return roots;
}

namespace {

// Coefficients of f(aλ'+bμ', cλ'+dμ') for f of degree d.
VecXc rotate_coeffs(const VecXc& c, const Mat2c& r) {
    const int d = static_cast<int>(c.size()) - 1;
    // Powers of the two linear forms L1=(a,b), L2=(c,d) as binary forms.
    auto lin_pow = [d](cplx x, cplx y, int p) {
        VecXc out = VecXc::Zero(d + 1);
        double binom = 1.0;
        for (int k = 0; k <= p; ++k) {
            out(k) = binom * std::pow(x, p - k) * std::pow(y, k);
            binom = binom * (p - k) / (k + 1);
        }
        return out;  // degree-p form stored in degree-d length (upper entries zero)
    };
    auto mul_forms = [d](const VecXc& f, int df, const VecXc& g, int dg) {
        VecXc out = VecXc::Zero(d + 1);
        for (int i = 0; i <= df; ++i)
            for (int j = 0; j <= dg; ++j) out(i + j) += f(i) * g(j);
        return out;
    };
    VecXc total = VecXc::Zero(d + 1);
    for (int k = 0; k <= d; ++k) {
        VecXc p1 = lin_pow(r(0, 0), r(0, 1), d - k);
        VecXc p2 = lin_pow(r(1, 0), r(1, 1), k);
        total += c(k) * mul_forms(p1, d - k, p2, k);
    }
    return total;
}

// An m-fold root of f is a simple root of the (m−1)-th derivative; Newton on
// that derivative sharpens a cluster mean from the companion scatter
// (~ eps^{1/m}) back to full precision. Works in the affine chart where the
// start point has modulus ≤ 1, so roots at infinity stay conditioned.
ProjPoint1 refine_cluster_root(const BinaryForm& f, const ProjPoint1& start, int m) {
    const int d = f.degree();
    if (m > d) return start;
    const bool chart_a = std::abs(start.mu) <= std::abs(start.lambda);
    // chart A: x = μ/λ, p(x) = f(1,x) = Σ cₖ xᵏ; chart B: y = λ/μ, reversed.
    VecXc p(d + 1);
    for (int k = 0; k <= d; ++k) p(k) = chart_a ? f.coeffs(k) : f.coeffs(d - k);
    int deg = d;
    for (int it = 0; it < m - 1; ++it) {
        for (int k = 1; k <= deg; ++k) p(k - 1) = p(k) * static_cast<double>(k);
        --deg;
    }
    cplx t = chart_a ? start.mu / start.lambda : start.lambda / start.mu;
    const cplx t0 = t;
    for (int iter = 0; iter < 12; ++iter) {
        cplx h(0.0), hp(0.0);
        for (int k = deg; k >= 0; --k) {
            hp = hp * t + h;
            h = h * t + p(k);
        }
        if (!(std::abs(hp) > 0)) break;
        cplx step = h / hp;
        t -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(t))) break;
    }
    if (!std::isfinite(std::abs(t)) || std::abs(t - t0) > 0.05) return start;
    return chart_a ? ProjPoint1(cplx(1.0), t) : ProjPoint1(t, cplx(1.0));
}

std::vector<FormRoot> cluster_roots(const BinaryForm& f, const std::vector<ProjPoint1>& pts,
                                    double tol_cluster) {
    const size_t n = pts.size();
    std::vector<bool> used(n, false);
    std::vector<std::vector<size_t>> groups;
    // Companion eigenvalues scatter an m-fold root by about (coefficient
    // error)^{1/m}, so sweep candidate multiplicities from high to low with a
    // diameter bound calibrated to each m; tol_cluster is a caller-adjustable
    // floor. Distinct roots closer than the m-scatter radius are reported
    // fused — they are indistinguishable from a multiple root at working
    // precision.
    for (int m = static_cast<int>(n); m >= 2; --m) {
        const double radius =
            std::min(1e-3, std::max(tol_cluster, 3.0 * std::pow(1e-14, 1.0 / m)));
        for (size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            std::vector<size_t> members{i};
            for (size_t j = 0; j < n; ++j) {
                if (used[j] || j == i) continue;
                bool near_all = true;
                for (size_t k : members) near_all = near_all && chordal(pts[k], pts[j]) <= radius;
                if (near_all) members.push_back(j);
            }
            if (static_cast<int>(members.size()) >= m) {
                for (size_t k : members) used[k] = true;
                groups.push_back(std::move(members));
            }
        }
    }
    for (size_t i = 0; i < n; ++i)
        if (!used[i]) groups.push_back({i});

    std::vector<FormRoot> out;
    out.reserve(groups.size());
    for (const auto& members : groups) {
        // phase-aligned mean (first-order scatter cancels), then Newton
        Vec2c acc = Vec2c::Zero();
        Vec2c ref(pts[members[0]].lambda, pts[members[0]].mu);
        for (size_t j : members) {
            Vec2c v(pts[j].lambda, pts[j].mu);
            cplx inner = (ref.conjugate().array() * v.array()).sum();
            cplx phase = (std::abs(inner) > 0) ? inner / std::abs(inner) : cplx(1);
            acc += v / phase;
        }
        FormRoot root;
        root.point = refine_cluster_root(f, ProjPoint1(acc(0), acc(1)),
                                         static_cast<int>(members.size()));
        root.multiplicity = static_cast<int>(members.size());
        double spread = 0;
        for (size_t j : members) spread = std::max(spread, chordal(root.point, pts[j]));
        root.spread = spread;
        out.push_back(root);
    }
    std::sort(out.begin(), out.end(), [](const FormRoot& a, const FormRoot& b) {
        if (a.point.lambda.real() != b.point.lambda.real())
            return a.point.lambda.real() < b.point.lambda.real();
        return a.point.mu.real() < b.point.mu.real();
    });
    return out;
}

}  // namespace

std::vector<FormRoot> binary_form_roots(const BinaryForm& f, const Config& cfg) {
    if (f.identically_zero) fail(Err::IdenticallyZero, "binary form is identically zero");
    const int d = f.degree();
    const double scale = f.max_abs_coeff();
    if (!(scale > 0)) fail(Err::IdenticallyZero, "binary form has all-zero coefficients");
    if (d == 0) return {};

    Rng rng(Rng::mix(cfg.seed, 0x62666f726dull));
    for (int attempt = 0; attempt < 6; ++attempt) {
        Mat2c r = (attempt == 0) ? Mat2c::Identity() : Mat2c(rng.unitary(2));
        VecXc rc = rotate_coeffs(f.coeffs, r);
        double rscale = 0;
        for (int i = 0; i <= d; ++i) rscale = std::max(rscale, std::abs(rc(i)));
        if (std::abs(rc(0)) < 1e-8 * rscale) continue;  // leading coeff too small, new frame
        // monic in λ': roots of p(t) = f'(t,1) with t = λ'/μ'
        VecXc ascending(d + 1);
        for (int k = 0; k <= d; ++k) ascending(k) = rc(d - k);
        std::vector<cplx> ts = poly_roots_ascending(ascending);
        std::vector<ProjPoint1> pts;
        pts.reserve(d);
        for (const cplx& t : ts) {
            Vec2c w = r * Vec2c(t, cplx(1));
            pts.emplace_back(w(0), w(1));
        }
        if (static_cast<int>(pts.size()) != d) continue;  // leading-coeff degeneration
        return cluster_roots(f, pts, cfg.tol_cluster);
    }
    fail(Err::NonGeneric, "no usable frame for binary form root extraction");
}

namespace {
constexpr double kFormSamplePhase = 0.39417337236052984;  // fixed, arbitrary
}

cplx form_sample_node(int d, int k) {
    return std::polar(1.0, kFormSamplePhase + 2.0 * M_PI * k / (d + 1));
}

BinaryForm form_from_samples(const VecXc& samples) {
    const int n = static_cast<int>(samples.size());
    const int d = n - 1;
    BinaryForm f;
    f.coeffs = VecXc::Zero(n);
    for (int j = 0; j <= d; ++j) {
        cplx acc(0.0);
        for (int k = 0; k < n; ++k) {
            double ang = -2.0 * M_PI * j * k / n;
            acc += samples(k) * std::polar(1.0, ang);
        }
        cplx aj = acc / static_cast<double>(n) * std::polar(1.0, -j * kFormSamplePhase);
        // values Σ aⱼ tʲ at t = node homogenize to Σ aⱼ λʲμ^{d−j}
        f.coeffs(d - j) = aj;
    }
    return f;
}

}  // namespace tangentloci::symqr
