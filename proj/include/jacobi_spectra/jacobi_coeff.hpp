#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jacobi_spectra/ensemble.hpp"

namespace jacobi_spectra {

// Failure stages of the coefficient decompositions. Indices are 1-based
// positions in the failing sequence (z_k, p_k, or the (u,v) pair index).
enum class DecompositionStage {
    not_nonnegative_support, // some z_k <= 0: measure charges the negative axis
    not_unit_interval,       // some p_k leaves (0,1): measure leaves [0,1]
    chain_boundary,          // 1 - p_{k-1} below 1e-12: recursion is singular
    uv_range,                // u_k or v_k pinned to its open-interval boundary
};

inline const char* decomposition_stage_name(DecompositionStage s) {
    switch (s) {
        case DecompositionStage::not_nonnegative_support: return "NotNonnegativeSupport";
        case DecompositionStage::not_unit_interval: return "NotUnitInterval";
        case DecompositionStage::chain_boundary: return "ChainBoundary";
        case DecompositionStage::uv_range: return "UvRangeViolation";
    }
    return "Unknown";
}

struct DecompositionError : std::runtime_error {
    DecompositionError(DecompositionStage s, std::size_t idx)
        : std::runtime_error(std::string(decomposition_stage_name(s)) + " at index " +
                             std::to_string(idx)),
          stage(s),
          index(idx) {}
    DecompositionStage stage;
    std::size_t index;
};

struct JacobiCoefficients {
    std::vector<double> a;
    std::vector<double> b;
};

struct UvSequences {
    std::vector<double> u;
    std::vector<double> v;
};

struct ChainDecomposition {
    std::vector<double> z;
    std::vector<double> p;
    std::vector<double> u;
    std::vector<double> v;
};

// Favard-style decomposition for measures on [0, infinity):
//   z_0 = 0, z_{2k-1} = a_k - z_{2k-2}, z_{2k} = b_k^2 / z_{2k-1}.
// b may have length K (semi-infinite truncation) or K-1 (finite matrix).
// All z_k must be positive; z[i] holds z_{i+1}.
inline std::vector<double> zk_from_jacobi(const std::vector<double>& a,
                                          const std::vector<double>& b) {
    const std::size_t K = a.size();
    if (K == 0 || (b.size() != K && b.size() + 1 != K))
        throw std::invalid_argument("zk_from_jacobi: need lengths (K, K) or (K, K-1)");
    std::vector<double> z;
    z.reserve(K + b.size());
    double z_prev = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double z_odd = a[k - 1] - z_prev;
        if (!(z_odd > 0.0))
            throw DecompositionError(DecompositionStage::not_nonnegative_support, 2 * k - 1);
        z.push_back(z_odd);
        if (k <= b.size()) {
            const double z_even = b[k - 1] * b[k - 1] / z_odd;
            if (!(z_even > 0.0))
                throw DecompositionError(DecompositionStage::not_nonnegative_support, 2 * k);
            z.push_back(z_even);
            z_prev = z_even;
        }
    }
    return z;
}

// Inverse: a_k = z_{2k-2} + z_{2k-1}, b_k = sqrt(z_{2k-1} z_{2k}).
// Even-length z yields K diagonal and K off-diagonal entries, odd-length
// K and K-1.
inline JacobiCoefficients jacobi_from_zk(const std::vector<double>& z) {
    if (z.empty()) throw std::invalid_argument("jacobi_from_zk: empty sequence");
    for (std::size_t i = 0; i < z.size(); ++i)
        if (!(z[i] > 0.0))
            throw DecompositionError(DecompositionStage::not_nonnegative_support, i + 1);
    JacobiCoefficients jc;
    const std::size_t K = (z.size() + 1) / 2;
    jc.a.reserve(K);
    jc.b.reserve(z.size() / 2);
    double z_prev = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double z_odd = z[2 * k - 2];
        jc.a.push_back(z_prev + z_odd);
        if (2 * k - 1 < z.size()) {
            const double z_even = z[2 * k - 1];
            jc.b.push_back(std::sqrt(z_odd * z_even));
            z_prev = z_even;
        }
    }
    return jc;
}

// Chain parameters for measures on [0,1]: z_k = p_k (1 - p_{k-1}), seeded at
// p_0 (0 by default; the seed is a convention, not data). Each p_k must stay
// in (0,1); the recursion aborts when 1 - p_{k-1} drops below 1e-12.
inline std::vector<double> chain_from_zk(const std::vector<double>& z, double p0 = 0.0) {
    if (!(p0 >= 0.0) || !(p0 < 1.0))
        throw std::invalid_argument("chain_from_zk: p0 must lie in [0,1)");
    std::vector<double> p;
    p.reserve(z.size());
    double prev = p0;
    for (std::size_t k = 1; k <= z.size(); ++k) {
        const double rem = 1.0 - prev;
        if (rem < 1e-12) throw DecompositionError(DecompositionStage::chain_boundary, k);
        const double pk = z[k - 1] / rem;
        if (!(pk > 0.0) || !(pk < 1.0))
            throw DecompositionError(DecompositionStage::not_unit_interval, k);
        p.push_back(pk);
        prev = pk;
    }
    return p;
}

inline std::vector<double> zk_from_chain(const std::vector<double>& p, double p0 = 0.0) {
    std::vector<double> z;
    z.reserve(p.size());
    double prev = p0;
    for (double pk : p) {
        z.push_back(pk * (1.0 - prev));
        prev = pk;
    }
    return z;
}

// (u_k, v_k) renormalization of the chain (bulk regime only):
//   u_k = ((1+sigma) p_{2k-1} - sigma)/(sqrt(gamma) sigma),
//   v_k = (1+sigma)/(gamma sigma) p_{2k}.
// The open-interval ranges u_k in (-1/sqrt(gamma), 1/(sqrt(gamma) sigma)) and
// v_k in (0, (1+sigma)/(gamma sigma)) are automatic for p in (0,1); entries
// within 1e-8 of the chain boundary are rejected because they pin u_k or v_k
// against the range boundary and drive downstream b_k^2 factors to rounding
// level.
inline UvSequences uv_from_chain(const std::vector<double>& p, const LimitParams& lp) {
    if (lp.regime != Regime::bulk)
        throw std::domain_error("uv_from_chain: defined in the bulk regime only");
    const double s = lp.sigma;
    const double rg = std::sqrt(lp.gamma);
    UvSequences uv;
    uv.u.reserve((p.size() + 1) / 2);
    uv.v.reserve(p.size() / 2);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1e-8 || 1.0 - p[i] < 1e-8)
            throw DecompositionError(DecompositionStage::uv_range, i / 2 + 1);
        if (i % 2 == 0)
            uv.u.push_back(((1.0 + s) * p[i] - s) / (rg * s));
        else
            uv.v.push_back((1.0 + s) / (lp.gamma * s) * p[i]);
    }
    return uv;
}

inline std::vector<double> chain_from_uv(const UvSequences& uv, const LimitParams& lp) {
    if (lp.regime != Regime::bulk)
        throw std::domain_error("chain_from_uv: defined in the bulk regime only");
    if (uv.v.size() != uv.u.size() && uv.v.size() + 1 != uv.u.size())
        throw std::invalid_argument("chain_from_uv: need |v| = |u| or |u|-1");
    const double s = lp.sigma;
    const double rg = std::sqrt(lp.gamma);
    std::vector<double> p;
    p.reserve(uv.u.size() + uv.v.size());
    for (std::size_t k = 0; k < uv.u.size(); ++k) {
        p.push_back((s + rg * s * uv.u[k]) / (1.0 + s));
        if (k < uv.v.size()) p.push_back(lp.gamma * s * uv.v[k] / (1.0 + s));
    }
    return p;
}

// Affine pullback between coefficients of the rescaled measure (supported in
// [-1/sqrt(gamma), 1/(sqrt(gamma) sigma)]) and of its image on [0,1] under
// lambda = sigma (sqrt(gamma) x + 1)/(1+sigma). Bulk regime only.
inline JacobiCoefficients unit_interval_pullback(const std::vector<double>& a,
                                                 const std::vector<double>& b,
                                                 const LimitParams& lp) {
    if (lp.regime != Regime::bulk)
        throw std::domain_error("unit_interval_pullback: defined in the bulk regime only");
    const double s = lp.sigma;
    const double rg = std::sqrt(lp.gamma);
    JacobiCoefficients out;
    out.a.reserve(a.size());
    out.b.reserve(b.size());
    for (double ak : a) out.a.push_back(s * (rg * ak + 1.0) / (1.0 + s));
    for (double bk : b) out.b.push_back(s * rg * bk / (1.0 + s));
    return out;
}

inline JacobiCoefficients unit_interval_pushforward(const std::vector<double>& A,
                                                    const std::vector<double>& B,
                                                    const LimitParams& lp) {
    if (lp.regime != Regime::bulk)
        throw std::domain_error("unit_interval_pushforward: defined in the bulk regime only");
    const double s = lp.sigma;
    const double rg = std::sqrt(lp.gamma);
    JacobiCoefficients out;
    out.a.reserve(A.size());
    out.b.reserve(B.size());
    for (double Ak : A) out.a.push_back(((1.0 + s) * Ak - s) / (rg * s));
    for (double Bk : B) out.b.push_back((1.0 + s) * Bk / (rg * s));
    return out;
}

// Coefficients of the rescaled measure from (u,v), with u_0 = v_0 = 0:
//   a_k = sqrt(gamma)(1-sigma)/(1+sigma) v_{k-1}
//         - gamma sigma/(1+sigma) v_{k-1}(u_{k-1}+u_k) + u_k
//   b_k^2 = v_k/(1+sigma) (1 - sigma sqrt(gamma) u_k)(1 + sqrt(gamma) u_k)
//           (1 - gamma sigma/(1+sigma) v_{k-1})
// Degenerate regimes take the continuity limits:
//   sigma = 0: a_k = sqrt(gamma) v_{k-1} + u_k,  b_k^2 = v_k (1 + sqrt(gamma) u_k)
//   gamma = 0: a_k = u_k,                        b_k^2 = v_k/(1+sigma)
inline JacobiCoefficients jacobi_from_uv(const UvSequences& uv, const LimitParams& lp) {
    const std::size_t K = uv.u.size();
    if (uv.v.size() != K && uv.v.size() + 1 != K)
        throw std::invalid_argument("jacobi_from_uv: need |v| = |u| or |u|-1");
    const double s = lp.sigma;
    const double gm = lp.gamma;
    const double rg = std::sqrt(gm);
    const double c_lin = rg * (1.0 - s) / (1.0 + s);
    const double c_mix = gm * s / (1.0 + s);

    JacobiCoefficients jc;
    jc.a.reserve(K);
    jc.b.reserve(uv.v.size());
    double u_prev = 0.0, v_prev = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double uk = uv.u[k - 1];
        switch (lp.regime) {
            case Regime::bulk:
                jc.a.push_back(c_lin * v_prev - c_mix * v_prev * (u_prev + uk) + uk);
                break;
            case Regime::sigma_zero:
                jc.a.push_back(rg * v_prev + uk);
                break;
            case Regime::gamma_zero:
                jc.a.push_back(uk);
                break;
        }
        if (k <= uv.v.size()) {
            const double vk = uv.v[k - 1];
            double b2 = 0.0;
            switch (lp.regime) {
                case Regime::bulk:
                    b2 = vk / (1.0 + s) * (1.0 - s * rg * uk) * (1.0 + rg * uk) *
                         (1.0 - c_mix * v_prev);
                    break;
                case Regime::sigma_zero:
                    b2 = vk * (1.0 + rg * uk);
                    break;
                case Regime::gamma_zero:
                    b2 = vk / (1.0 + s);
                    break;
            }
            if (!(b2 > 0.0)) throw DecompositionError(DecompositionStage::uv_range, k);
            jc.b.push_back(std::sqrt(b2));
            v_prev = vk;
        }
        u_prev = uk;
    }
    return jc;
}

// Inverse of jacobi_from_uv. Bulk goes through the unit-interval pullback and
// the z -> p -> (u,v) pipeline; degenerate regimes invert the continuity
// formulas directly.
inline UvSequences uv_from_jacobi(const std::vector<double>& a, const std::vector<double>& b,
                                  const LimitParams& lp) {
    if (a.empty() || (b.size() != a.size() && b.size() + 1 != a.size()))
        throw std::invalid_argument("uv_from_jacobi: need lengths (K, K) or (K, K-1)");
    switch (lp.regime) {
        case Regime::bulk: {
            const JacobiCoefficients unit = unit_interval_pullback(a, b, lp);
            return uv_from_chain(chain_from_zk(zk_from_jacobi(unit.a, unit.b)), lp);
        }
        case Regime::sigma_zero: {
            const double rg = std::sqrt(lp.gamma);
            UvSequences uv;
            double v_prev = 0.0;
            for (std::size_t k = 1; k <= a.size(); ++k) {
                const double uk = a[k - 1] - rg * v_prev;
                uv.u.push_back(uk);
                if (k <= b.size()) {
                    const double denom = 1.0 + rg * uk;
                    if (!(denom > 0.0)) throw DecompositionError(DecompositionStage::uv_range, k);
                    const double vk = b[k - 1] * b[k - 1] / denom;
                    if (!(vk > 0.0)) throw DecompositionError(DecompositionStage::uv_range, k);
                    uv.v.push_back(vk);
                    v_prev = vk;
                }
            }
            return uv;
        }
        case Regime::gamma_zero: {
            UvSequences uv;
            for (double ak : a) uv.u.push_back(ak);
            for (double bk : b) {
                const double vk = (1.0 + lp.sigma) * bk * bk;
                if (!(vk > 0.0))
                    throw DecompositionError(DecompositionStage::uv_range, uv.v.size() + 1);
                uv.v.push_back(vk);
            }
            return uv;
        }
    }
    throw std::logic_error("uv_from_jacobi: unreachable");
}

// Full decomposition record for reporting; z and p are only defined through
// the unit-interval pullback, i.e. in the bulk regime (left empty otherwise).
inline ChainDecomposition decompose_coefficients(const std::vector<double>& a,
                                                 const std::vector<double>& b,
                                                 const LimitParams& lp) {
    ChainDecomposition out;
    if (lp.regime == Regime::bulk) {
        const JacobiCoefficients unit = unit_interval_pullback(a, b, lp);
        out.z = zk_from_jacobi(unit.a, unit.b);
        out.p = chain_from_zk(out.z);
        UvSequences uv = uv_from_chain(out.p, lp);
        out.u = std::move(uv.u);
        out.v = std::move(uv.v);
    } else {
        UvSequences uv = uv_from_jacobi(a, b, lp);
        out.u = std::move(uv.u);
        out.v = std::move(uv.v);
    }
    return out;
}

} // namespace jacobi_spectra
