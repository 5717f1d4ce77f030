#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace digitdist
{
    inline constexpr double pi = std::numbers::pi;

    inline void check_qb(unsigned q, unsigned b)
    {
        require(q >= 2 && b >= 2, "q and b must be at least 2");
        require(std::gcd(b, q - 1) == 1, "gcd(b, q-1) must be 1");
    }

    // Smallest K with q^K > k, in integer arithmetic.
    inline unsigned sync_length(unsigned q, unsigned k)
    {
        unsigned K = 0;
        unsigned long long p = 1;
        while (p <= k)
        {
            p *= q;
            ++K;
        }
        return K;
    }

    inline unsigned smallest_prime_factor(unsigned q) { return prime_divisors(q).front(); }

    // log min(1/4, 3 log_q P^-(q)).
    inline double log_min_factor(unsigned q)
    {
        double v = 3.0 * std::log(static_cast<double>(smallest_prime_factor(q))) / std::log(static_cast<double>(q));
        return std::log(std::min(0.25, v));
    }

    inline double gelfond_lambda(unsigned q, unsigned b)
    {
        check_qb(q, b);
        double lq = std::log(static_cast<double>(q));
        double v = std::log(q * std::sin(pi / (2.0 * b)) / std::sin(pi / (2.0 * b * q))) / (2 * lq);
        ensure(v > 0 && v < 1, "lambda outside (0,1)");
        return v;
    }

    struct ThetaQ
    {
        double M;
        double theta;
    };

    inline ThetaQ theta_q(unsigned q)
    {
        require(q >= 2, "q must be at least 2");
        double M = 0;
        if (q % 2 == 0)
        {
            unsigned n = q / 2;
            for (unsigned k = 0; k < n; ++k)
                M += 1.0 / std::cos((2.0 * k + 1) * pi / (4.0 * n));
            M /= n;
        }
        else
        {
            unsigned n = (q - 1) / 2;
            double s = 0;
            for (unsigned k = 1; k <= n; ++k)
                s += 1.0 / std::cos(k * pi / (2.0 * n + 1));
            M = (1 + 2 * s) / q;
        }
        return {M, 1.0 - std::log(M) / std::log(static_cast<double>(q))};
    }

    struct Maximum
    {
        double t = 0;
        double value = 0;
        bool converged = true;
    };

    // Grid search over one period, then golden-section refinement around
    // the best grid point. The returned value is never below the grid max.
    inline Maximum maximize_periodic(const std::function<double(double)>& f, double period,
                                     std::size_t grid = 1'000'000, double tol = 1e-12)
    {
        Maximum best{0, f(0)};
        const double h = period / static_cast<double>(grid);
        for (std::size_t i = 1; i < grid; ++i)
        {
            double t = h * static_cast<double>(i);
            double v = f(t);
            if (v > best.value)
                best = {t, v};
        }
        const double gr = (std::sqrt(5.0) - 1) / 2;
        double lo = best.t - h, hi = best.t + h;
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = f(c), fd = f(d);
        int it = 0;
        for (; it < 200 && hi - lo > tol; ++it)
        {
            if (fc > fd)
            {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = f(c);
            }
            else
            {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = f(d);
            }
        }
        best.converged = hi - lo <= tol;
        double tm = (lo + hi) / 2, vm = f(tm);
        if (vm > best.value)
            best = {tm, vm, best.converged};
        return best;
    }

    // |sin(q pi x) / sin(pi x)|, with the removable singularity at integers filled by q.
    inline double dirichlet_ratio(unsigned q, double x)
    {
        double r = x - std::round(x);
        if (std::abs(r) < 1e-9)
        {
            double z = pi * r;
            return q * (1 - (static_cast<double>(q) * q - 1) * z * z / 6);
        }
        return std::abs(std::sin(q * pi * x) / std::sin(pi * x));
    }

    struct MmrExponents
    {
        double Theta;
        double eta;
        double eta_branch1;
        double eta_branch2;
        double gamma_literal;     // q^gamma = 2 max sqrt(...)
        double gamma_normalized;  // same maximum divided by q
        double t_star;
        bool converged;
        double xi_literal;  // may be <= 0 (then its log is undefined)
        double xi_normalized;
    };

    inline double mmr_Theta(unsigned q)
    {
        double qq = q;
        return (1 - 1 / qq) * (1 - std::sqrt(1 - (2 * qq - 1) / (3 * qq * (qq - 1))));
    }

    inline MmrExponents mmr_exponents(unsigned q, double eps, double alpha)
    {
        require(q >= 2, "q must be at least 2");
        require(eps > 0 && eps <= 0.5, "epsilon must lie in (0, 1/2]");
        MmrExponents r{};
        r.Theta = mmr_Theta(q);
        const double l2 = std::log(2.0);
        r.eta_branch1 = 0.5 - std::log(4 - 2 * std::sqrt(2.0)) / (2 * l2);
        r.eta_branch2 = 0.5 + std::log(1 - r.Theta) / (4 * l2);
        r.eta = std::max(r.eta_branch1, r.eta_branch2);
        auto g = [&](double t) { return dirichlet_ratio(q, alpha - q * t) * dirichlet_ratio(q, alpha - t); };
        Maximum mx = maximize_periodic(g, 1.0);
        r.t_star = mx.t;
        r.converged = mx.converged;
        double lq = std::log(static_cast<double>(q));
        r.gamma_literal = std::log(2 * std::sqrt(mx.value)) / lq;
        r.gamma_normalized = r.gamma_literal - 1;
        double base = std::min(eps / 6, 0.05);
        r.xi_literal = base * std::min(0.5 - r.eta, 2 * (1 - r.gamma_literal));
        r.xi_normalized = base * std::min(0.5 - r.eta, 2 * (1 - r.gamma_normalized));
        return r;
    }

    struct XiPrime
    {
        double value;
        double log_value;
        double literal;  // under the literal gamma reading; non-positive means undefined
    };

    inline XiPrime xi_prime_2(double eps)
    {
        require(eps > 0 && eps < 0.5, "epsilon must lie in (0, 1/2)");
        MmrExponents m = mmr_exponents(2, eps, 0.5);
        double v = m.xi_normalized / (1 + eps);
        return {v, std::log(v), m.xi_literal / (1 + eps)};
    }

    struct FmGamma
    {
        double beta;
        double gamma;
        double t_star;
    };

    inline FmGamma fm_gamma(double alpha)
    {
        require(std::abs(alpha - std::round(alpha)) > 1e-15, "alpha must not be an integer");
        auto g = [&](double t) { return std::abs(std::cos(pi * (t + alpha)) * std::cos(pi * (2 * t + alpha))); };
        Maximum mx = maximize_periodic(g, 1.0);
        double beta = std::sqrt(mx.value);
        return {beta, 1 + std::log2(beta), mx.t};
    }

    struct Eta0
    {
        unsigned K;
        unsigned long long exponent;  // (k+1)(K + b(k+1))
        double log_closed;
        double log_sharper;
    };

    // log(-log(1 - q^{-E})) without forming q^{-E}.
    inline double log_neg_log1m_qpow(unsigned q, unsigned long long E)
    {
        double lx = -static_cast<double>(E) * std::log(static_cast<double>(q));
        if (lx < -20)
            return lx + std::exp(lx) / 2;
        return std::log(-std::log1p(-std::exp(lx)));
    }

    inline Eta0 eta0_bound(unsigned q, unsigned b, unsigned k)
    {
        require(k >= 2, "k must be at least 2");
        check_qb(q, b);
        Eta0 r{};
        r.K = sync_length(q, k);
        unsigned long long L = r.K + static_cast<unsigned long long>(b) * (k + 1);
        r.exponent = (k + 1) * L;
        double lq = std::log(static_cast<double>(q));
        double common = -std::log(lq) - std::log(static_cast<double>(L));
        r.log_closed = common - static_cast<double>(r.exponent) * lq;
        r.log_sharper = common + log_neg_log1m_qpow(q, r.exponent);
        return r;
    }

    inline double log_eta_thm2(double rho1, double rho2, unsigned q, unsigned b)
    {
        require(rho1 > 0 && rho2 >= rho1, "need rho2 >= rho1 > 0");
        check_qb(q, b);
        double lq = std::log(static_cast<double>(q));
        double A = std::log((3 * rho2 + 4) * q) + b * lq * (3 * rho2 + 5);
        double B = std::log((3 * rho2 + 4) * q) + (3 * rho2 + 5) * b * lq;
        return std::log(rho1) + log_min_factor(q) - (1 + rho2) * std::log(8.0) - std::log(288 * rho2 + 300) -
               std::log(3 * rho2 + 2) - std::log(A) - (3 * rho2 + 5) * B;
    }

    inline double log_eta_thm1(double d1, double d2, unsigned q, unsigned b)
    {
        require(d1 > 0 && d1 <= d2 && d2 < 1, "need 0 < delta1 <= delta2 < 1");
        check_qb(q, b);
        double lq = std::log(static_cast<double>(q));
        double u = 1 / (1 - d2);
        double L = std::log(4 * q * u) + 5 * b * lq * u;
        return std::log(d1) + 2 * std::log(1 - d2) + log_min_factor(q) - std::log(1800.0) - u * std::log(8.0) -
               std::log(L) - 5 * u * L;
    }

    struct Eta0Result
    {
        double log_eta;
        bool in_validity_range;  // eps < 2(1 - lambda)/3
    };

    inline Eta0Result log_eta_thm0(double eps, unsigned q, unsigned b)
    {
        require(eps > 0 && eps < 1, "epsilon must lie in (0, 1)");
        check_qb(q, b);
        double lq = std::log(static_cast<double>(q));
        double L = std::log(4 * q / eps) + 5 * b * lq / eps;
        double v = 3 * std::log(eps) + log_min_factor(q) - std::log(7200.0) - std::log(8.0) / eps - std::log(L) -
                   5 / eps * L;
        return {v, eps < 2 * (1 - gelfond_lambda(q, b)) / 3};
    }

    struct Eta1
    {
        unsigned k;
        Eta0 eta0_at_k_plus_1;
        double log_eta1;
    };

    inline Eta1 eta1_chain(double rho1, double rho2, unsigned q, unsigned b)
    {
        require(rho1 > 0 && rho2 >= rho1, "need rho2 >= rho1 > 0");
        unsigned k = 3 * (static_cast<unsigned>(std::floor(rho2)) + 1);
        Eta0 e0 = eta0_bound(q, b, k + 1);
        double v = std::log(rho1) + e0.log_closed + log_min_factor(q) - k * std::log(2.0) - std::log(k - 1.0) -
                   std::log(96.0 * k + 12);
        return {k, e0, v};
    }

    struct ExponentReport
    {
        std::string name;
        double log_value;
        std::map<std::string, std::string> inputs;
        std::string formula_ref;
    };

    // Published table for q = b = 2.
    struct Figure3Published
    {
        double eps;
        double log_eta;
        double log_xi;
    };

    inline const std::vector<Figure3Published>& figure3_published()
    {
        static const std::vector<Figure3Published> rows = {
            {0.3, -270.77, -5.85},        {0.2, -553.97, -6.26},           {0.1, -1993.60, -6.95},
            {0.05, -7504.14, -7.65},      {0.01, -176866.99, -9.25},       {0.005, -700973.54, -9.95},
            {0.001, -17375734.08, -11.56},
        };
        return rows;
    }

    struct Figure3Row
    {
        double eps;
        std::optional<double> published_log_eta;
        double log_eta;
        std::optional<double> published_log_xi;
        std::optional<double> log_xi;  // base-2 quantity; present only for q = 2
        bool in_validity_range;
    };

    inline std::vector<Figure3Row> figure3_report(unsigned q, unsigned b, const std::vector<double>& eps_list)
    {
        check_qb(q, b);
        std::vector<Figure3Row> rows;
        for (double e : eps_list)
        {
            Figure3Row r{};
            r.eps = e;
            Eta0Result t = log_eta_thm0(e, q, b);
            r.log_eta = t.log_eta;
            r.in_validity_range = t.in_validity_range;
            if (q == 2 && e < 0.5)
                r.log_xi = xi_prime_2(e).log_value;
            if (q == 2 && b == 2)
                for (const auto& p : figure3_published())
                    if (std::abs(p.eps - e) < 1e-12)
                    {
                        r.published_log_eta = p.log_eta;
                        r.published_log_xi = p.log_xi;
                    }
            rows.push_back(r);
        }
        return rows;
    }
}
