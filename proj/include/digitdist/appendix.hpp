#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "common.hpp"
#include "exponents.hpp"

namespace digitdist
{
    using Real = boost::multiprecision::cpp_bin_float_50;

    struct ParamInputs
    {
        BigInt nu;
        double rho1 = 0.5;
        double rho2 = 1.0;
        Real logq_N;  // N enters only through log_q N; it is far too large to store
        unsigned q = 2;
        unsigned b = 2;
        std::optional<Real> eta0_override;  // the asymptotic statements hold for any 0 < eta0 < 1
    };

    struct ParamBundle
    {
        BigInt nu;
        unsigned k = 0;
        BigInt mu, sigma, rho_tilde, gamma, lambda, rho;
        BigInt T_exponent;  // T = q^gamma
        BigInt H0;          // floor(q^{gamma/4})
        Real eta0;
        std::vector<double> log_E;  // natural logs of E_0 .. E_{k-1}
        double log_E_sum = 0;
        std::vector<std::string> violations;

        bool admissible() const { return violations.empty(); }
    };

    // floor(x^{1/n}) for x >= 0.
    inline BigInt integer_root(const BigInt& x, unsigned n)
    {
        if (x < 2)
            return x;
        BigInt lo = 1, hi = 1;
        while (boost::multiprecision::pow(hi, n) <= x)
            hi *= 2;
        while (hi - lo > 1)
        {
            BigInt mid = (lo + hi) / 2;
            if (boost::multiprecision::pow(mid, n) <= x)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    inline Real eta0_real(unsigned q, unsigned b, unsigned k)
    {
        unsigned K = sync_length(q, k);
        Real L = Real(K) + Real(b) * (k + 1);
        Real lq = log(Real(q));
        return 1 / (lq * L * exp(Real((k + 1)) * L * lq));
    }

    // Smallest nu whose induced mu equals the target, for k = 3(floor(rho2)+1).
    inline BigInt nu_for_mu(const BigInt& mu, unsigned k)
    {
        // mu = floor(8(nu-1)/(8k+1))
        BigInt d = 8 * k + 1;
        BigInt t = mu * d;
        return 1 + (t + 7) / 8;
    }

    // A log_q N in the middle of the admissible window N^{rho1} < q^nu <= q N^{rho2}.
    inline Real default_logq_N(const BigInt& nu, double rho2) { return (Real(nu) - Real(0.5)) / Real(rho2); }

    inline ParamBundle appendix_param_select(const ParamInputs& in)
    {
        check_qb(in.q, in.b);
        require(in.rho1 > 0 && in.rho2 >= in.rho1, "need rho2 >= rho1 > 0");
        require(in.nu >= 2, "nu must be at least 2");
        const Real nu_r(in.nu);
        require(Real(in.rho1) * in.logq_N < nu_r && nu_r <= 1 + Real(in.rho2) * in.logq_N,
                "need N^rho1 < q^nu <= q N^rho2");

        ParamBundle p;
        p.nu = in.nu;
        p.k = 3 * (static_cast<unsigned>(std::floor(in.rho2)) + 1);
        const unsigned k = p.k;
        p.mu = (8 * (in.nu - 1)) / (8 * k + 1);
        p.sigma = p.mu / 4;
        p.rho_tilde = in.nu - k * p.mu;
        p.eta0 = in.eta0_override ? *in.eta0_override : eta0_real(in.q, in.b, k + 1);
        require(p.eta0 > 0 && p.eta0 < 1, "eta0 must lie in (0, 1)");
        Real g = floor(p.eta0 * Real(p.rho_tilde) / Real(12 * (k - 1)));
        p.gamma = g.convert_to<BigInt>();
        p.T_exponent = p.gamma;
        p.lambda = in.nu + p.gamma / 2;
        p.rho = p.lambda - k * p.mu;

        const unsigned gamma_small = p.gamma < 1'000'000 ? p.gamma.convert_to<unsigned>() : 0;
        require(p.gamma < 1'000'000, "gamma too large to materialize H0");
        p.H0 = integer_root(ipow_big(in.q, gamma_small), 4);

        const Real lq = log(Real(in.q));
        const Real lN = in.logq_N * lq;
        const Real lH0 = p.H0 > 0 ? log(Real(p.H0)) : Real(0);
        auto lse = [](const std::vector<Real>& xs) {
            Real m = xs.front();
            for (auto& x : xs)
                m = std::max(m, x);
            Real s = 0;
            for (auto& x : xs)
                s += exp(x - m);
            return m + log(s);
        };
        Real lE0 = lse({log(Real(3)) - lH0, log(Real(4)) + lH0 - Real(p.lambda - in.nu - 1) * lq,
                        log(Real(8)) + lH0 - lN});
        std::vector<Real> all{lE0};
        p.log_E.push_back(static_cast<double>(lE0));
        const Real l2 = log(Real(2));
        for (unsigned i = 1; i < k; ++i)
        {
            Real li = log(Real(3)) + Real((1ULL << (i + 2)) - 1) * l2 - Real(i + 1) * l2 +
                      Real(p.rho + 2 * p.mu + 3 * p.sigma) * lq - lN;
            all.push_back(li);
            p.log_E.push_back(static_cast<double>(li));
        }
        Real lsum = lse(all);
        p.log_E_sum = static_cast<double>(lsum);

        auto check = [&](bool ok, const char* name) {
            if (!ok)
                p.violations.emplace_back(name);
        };
        const Real mu_r(p.mu);
        check(in.nu + 1 >= k * p.mu, "nu+1 >= k*mu");
        check(3 * p.gamma <= in.nu + 1, "3*gamma <= nu+1");
        check(p.lambda > in.nu + 1, "lambda > nu+1");
        check(p.rho + 1 < p.sigma, "rho+1 < sigma");
        check(p.sigma < p.mu, "sigma < mu");
        check(p.gamma >= 1, "T >= 2");
        check(p.gamma > 0 && p.gamma <= p.rho, "0 < gamma <= rho");
        check(p.H0 > 1, "H0 > 1");
        check(Real(p.gamma) / 4 <= Real(k) * mu_r, "H0 <= q^(k*mu)");
        check(lsum <= 0, "sum E_i <= 1");
        check(192 * p.gamma <= p.mu, "gamma <= mu/192");
        check(384 * p.rho <= 49 * p.mu, "rho <= mu/8 + mu/384");
        check(in.logq_N >= 3 * mu_r, "N >= q^(3*mu)");
        // q^mu >= C N^{rho1/(k+1/8)}, C = q^{-(1/(k+1/8) + 1)}
        Real kk = Real(k) + Real(1) / 8;
        check(mu_r >= -(1 / kk + 1) + Real(in.rho1) * in.logq_N / kk, "q^mu >= C*N^(rho1/(k+1/8))");
        return p;
    }

    struct AsymptoticRatios
    {
        double rho_tilde;  // (rho~/mu) / (1/8)
        double gamma;      // gamma / (eta0 mu / (96(k-1)))
        double rho;        // rho / (mu/8 + eta0 mu / (192(k-1)))
    };

    inline AsymptoticRatios asymptotic_ratios(const ParamBundle& p)
    {
        Real mu(p.mu);
        Real km1(p.k - 1);
        AsymptoticRatios r{};
        r.rho_tilde = static_cast<double>(Real(p.rho_tilde) / (mu / 8));
        r.gamma = static_cast<double>(Real(p.gamma) / (p.eta0 * mu / (96 * km1)));
        r.rho = static_cast<double>(Real(p.rho) / (mu / 8 + p.eta0 * mu / (192 * km1)));
        return r;
    }
}
