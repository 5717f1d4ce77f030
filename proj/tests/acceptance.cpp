// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <digitdist/cli.hpp>
#include <digitdist/digitdist.hpp>

#include "oracles.hpp"

using namespace digitdist;
using oracle::HP;

namespace
{
    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    std::string fmt(const char* f, double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, v);
        return buf;
    }

    using Triple = std::tuple<unsigned, unsigned, unsigned>;

    Outcome gowers_equivalence()
    {
        const std::vector<Triple> params{{2, 2, 1}, {2, 3, 1}, {2, 3, 2}, {3, 3, 1}, {4, 2, 1}};
        std::mt19937_64 rng(1);
        long double worst = 0;
        int cases = 0;
        for (auto [q, b, ell] : params)
            for (unsigned k = 2; k <= 3; ++k)
            {
                DigitParams p(q, b, ell);
                TransitionGraph g = reachable_set(p, k);
                const Node sampled = g.nodes[1 + rng() % (g.size() - 1)];
                for (unsigned rho = 1; rho <= 3; ++rho)
                    for (const Node& r0 : {Node(k), sampled})
                        for (Variant v : {Variant::full, Variant::truncated})
                        {
                            auto rec = gowers_average_recursive(p, k, rho, r0, v);
                            auto bru = gowers_average_brute(p, k, rho, r0, v);
                            worst = std::max(worst, std::abs(rec.value() - bru.value()));
                            ++cases;
                        }
            }
        return {worst <= 1e-9L, std::to_string(cases) + " cases, max |diff| " + fmt("%.3g", static_cast<double>(worst))};
    }

    Outcome stochasticity()
    {
        int graphs = 0;
        std::size_t nodes = 0;
        bool ok = true;
        for (auto [q, b] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {2, 3}, {3, 3}, {4, 2}, {5, 3}, {4, 5}})
            for (unsigned k = 2; k <= 3; ++k)
            {
                TransitionGraph g = reachable_set(DigitParams(q, b, 1), k);
                ok = ok && out_counts_exact(g);
                nodes += g.size();
                ++graphs;
            }
        return {ok, std::to_string(graphs) + " graphs, " + std::to_string(nodes) + " nodes"};
    }

    std::vector<ContractionResult> contraction_results;
    std::vector<TransitionGraph> contraction_graphs;

    Outcome contraction_certificate()
    {
        std::ostringstream os;
        bool ok = true;
        for (auto [q, b, k] : std::vector<Triple>{{2, 2, 3}, {2, 3, 3}, {3, 3, 3}, {4, 2, 3}})
        {
            TransitionGraph g = reachable_set(DigitParams(q, b, 1), k);
            ContractionResult c;
            try
            {
                c = contraction(g);
            }
            catch (const invariant_error&)
            {
                ok = false;
                continue;
            }
            if (q == 2 && b == 2)
                ok = ok && c.exponent == 40;
            ok = ok && c.certified;
            os << "(" << q << "," << b << "," << k << ") M=" << fmt("%.6g", static_cast<double>(c.M)) << " j=" << c.j
               << "; ";
            contraction_results.push_back(c);
            contraction_graphs.push_back(std::move(g));
        }
        return {ok, os.str()};
    }

    Outcome gowers_decay_check()
    {
        if (contraction_graphs.empty())
            return {false, "no contraction constants available"};
        bool ok = true;
        long double tightest = 0;
        for (std::size_t i = 0; i < contraction_graphs.size(); ++i)
        {
            const auto& c = contraction_results[i];
            for (Variant v : {Variant::full, Variant::truncated})
            {
                DecayTable d = gowers_decay(contraction_graphs[i], 40, v);
                for (unsigned rho = 0; rho <= 40; ++rho)
                {
                    long double bound = std::pow(c.M + c.error, static_cast<long double>(rho / c.j));
                    ok = ok && d.at_zero[rho] <= bound * (1 + 1e-15L);
                    tightest = std::max(tightest, d.at_zero[rho] / bound);
                }
            }
        }
        return {ok, "rho <= 40, max |A|/bound " + fmt("%.4g", static_cast<double>(tightest))};
    }

    std::vector<Letter> random_word(std::mt19937_64& rng, const DigitParams& p, unsigned k, std::size_t& m)
    {
        const std::size_t len = sync_length(p.q, k) + static_cast<std::size_t>(p.b) * (k + 1);
        std::vector<Letter> w;
        for (std::size_t i = rng() % 8; i > 0; --i)
            w.push_back(letter_from_index(rng() % ipow_u64(p.q, k + 1), p.q, k));
        for (std::size_t i = 0; i < len; ++i)
            w.emplace_back(k + 1, 0);
        for (std::size_t i = rng() % 8; i > 0; --i)
            w.push_back(letter_from_index(rng() % ipow_u64(p.q, k + 1), p.q, k));
        m = first_zero_block(w, len);
        return w;
    }

    Outcome switching()
    {
        std::mt19937_64 rng(5);
        int words = 0, bad = 0;
        for (auto [q, b, k] : std::vector<Triple>{{2, 2, 3}, {2, 3, 3}})
        {
            DigitParams p(q, b, 1);
            TransitionGraph g = reachable_set(p, k);
            for (int i = 0; i < 150; ++i)
            {
                std::size_t m;
                auto w = random_word(rng, p, k, m);
                try
                {
                    auto r = switching_cancellation(p, k, g.nodes[rng() % g.size()], w, m);
                    bad += !r.sum.is_zero();
                }
                catch (const invariant_error&)
                {
                    ++bad;
                }
                ++words;
            }
        }
        return {bad == 0, std::to_string(words) + " words, " + std::to_string(bad) + " nonzero"};
    }

    Outcome gelfond_stability()
    {
        std::vector<std::uint64_t> Ns;
        for (unsigned e = 8; e <= 20; ++e)
            Ns.push_back(1ULL << e);
        bool ok = true;
        double worst = 0;
        for (auto [q, b] : std::vector<std::pair<unsigned, unsigned>>{{2, 3}, {3, 3}})
            for (std::uint64_t m : {1, 3, 5, 7})
                for (const auto& g : gelfond_table(DigitParams(q, b, 1), m, Ns))
                {
                    double small = 0, large = 0;
                    for (std::size_t i = 0; i < Ns.size(); ++i)
                        (Ns[i] <= 4096 ? small : large) = std::max(Ns[i] <= 4096 ? small : large, g.residual[i]);
                    ok = ok && large <= 2 * small;
                    if (small > 0)
                        worst = std::max(worst, large / small);
                }
        return {ok, "max ratio late/early " + fmt("%.4g", worst)};
    }

    Outcome counting_oracles()
    {
        int cases = 0, bad = 0;
        for (auto [q, b] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {2, 3}, {3, 3}, {4, 5}})
            for (std::uint64_t x : {2, 3, 7, 16, 50, 128, 256})
                for (std::uint64_t m : {1, 2, 3, 5, 8})
                    for (unsigned a = 0; a < b; ++a)
                    {
                        auto e = error_term(DigitParams(q, b, 1), a, m, x, ErrorMode::exact_small);
                        bad += e.error != oracle::error_term(q, b, a, m, x);
                        ++cases;
                    }
        return {bad == 0, std::to_string(cases) + " grid points, " + std::to_string(bad) + " mismatches"};
    }

    Outcome vdc()
    {
        std::mt19937_64 rng(8);
        long long checks = 0, bad = 0;
        for (int t = 0; t < 1000; ++t)
        {
            std::size_t n = 1 + rng() % 64;
            std::vector<cplx> v(n);
            for (auto& z : v)
                z = e_of(static_cast<double>(rng() >> 11) * 0x1.0p-53);
            auto corr = correlation_table(v);
            for (std::size_t H = 1; H <= n; ++H)
            {
                bad += !vdc_plain_check(v, H, corr).holds();
                ++checks;
                for (std::size_t K = 1; K <= n; ++K)  // K >= |I| leaves only h = 0
                {
                    bad += !vdc_shift_check(v, H, K, corr).holds();
                    ++checks;
                }
            }
        }
        return {bad == 0, std::to_string(checks) + " checks, " + std::to_string(bad) + " violations"};
    }

    Outcome carry()
    {
        int cases = 0, bad = 0;
        const std::vector<Rational> alphas{1, Rational(5, 3), Rational(1, 2), Rational(7, 4), Rational(13, 5)};
        const std::vector<Rational> betas{0, Rational(1, 2), Rational(1, 3)};
        for (unsigned q : {2u, 3u, 5u})
            for (unsigned lam = 1; lam <= 4; ++lam)
                for (std::uint64_t r : {1, 2, 3, 7})
                    for (const auto& al : alphas)
                        for (const auto& be : betas)
                        {
                            ++cases;
                            const std::uint64_t N = 300;
                            std::uint64_t want = 0;
                            for (std::uint64_t n = 0; n < N; ++n)
                            {
                                auto u = static_cast<std::uint64_t>(floor(Rational(n) * al + be));
                                auto v = static_cast<std::uint64_t>(floor(Rational(n + r) * al + be));
                                long long full = static_cast<long long>(oracle::digit_sum(v, q)) - oracle::digit_sum(u, q);
                                long long tr = static_cast<long long>(oracle::digit_sum_trunc(v, q, lam)) -
                                               oracle::digit_sum_trunc(u, q, lam);
                                want += full != tr;
                            }
                            try
                            {
                                auto c = carry_exceptions(q, lam, r, al, be, 0, N);
                                bad += c.count != want || !(Rational(c.count) < c.bound);
                            }
                            catch (const invariant_error&)
                            {
                                ++bad;
                            }
                        }
        return {bad == 0, std::to_string(cases) + " grid points, " + std::to_string(bad) + " failures"};
    }

    Outcome farey()
    {
        std::mt19937_64 rng(10);
        int bad = 0;
        for (int i = 0; i < 10000; ++i)
        {
            std::uint64_t d = 1 + rng() % 1'000'000;
            Rational alpha = Rational(BigInt(rng() % (4 * d)), BigInt(d)) - 2;
            BigInt n = 1 + rng() % 500;
            auto [l, r] = farey_neighbors(alpha, n);
            auto f = farey_round(alpha, n);
            Rational err = Rational(f.q) * alpha - Rational(f.p);
            if (err < 0)
                err = -err;
            bad += l.q * r.p - l.p * r.q != 1 || !(err < Rational(BigInt(1), n));
        }
        int dbad = 0, dcases = 0;
        for (int i = 0; i < 100; ++i)
        {
            std::uint64_t d = 1 + rng() % 500;
            Rational alpha(BigInt(rng() % (3 * d)), BigInt(d));
            for (std::uint64_t N = 1; N <= 200; ++N)
            {
                dbad += discrepancy(alpha, N) != oracle::discrepancy(alpha, N);
                ++dcases;
            }
        }
        return {bad == 0 && dbad == 0, "10000 neighbour pairs (" + std::to_string(bad) + " bad), " +
                                           std::to_string(dcases) + " discrepancies (" + std::to_string(dbad) +
                                           " mismatches)"};
    }

    Outcome exponent_precision()
    {
        double worst = 0;
        auto cmp = [&](double got, const HP& want) {
            double w = want.convert_to<double>();
            worst = std::max(worst, std::abs(got - w) / std::max(1.0, std::abs(w)));
        };
        for (auto [q, b] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {2, 3}, {3, 3}, {4, 5}, {10, 7}})
        {
            cmp(std::log(gelfond_lambda(q, b)), log(oracle::lambda(q, b)));
            for (unsigned k = 2; k <= 10; ++k)
                cmp(eta0_bound(q, b, k).log_closed, log(oracle::eta0(q, b, k)));
            for (double e : {0.001, 0.01, 0.1, 0.3, 0.5})
                cmp(log_eta_thm0(e, q, b).log_eta, log(oracle::eta_eps(HP(e), q, b)));
            for (auto [d1, d2] : std::vector<std::pair<double, double>>{{0.3, 0.6}, {0.1, 0.1}, {0.5, 0.9}})
                cmp(log_eta_thm1(d1, d2, q, b), log(oracle::eta_delta(HP(d1), HP(d2), q, b)));
            for (auto [r1, r2] : std::vector<std::pair<double, double>>{{1, 1}, {0.5, 2}, {0.25, 3.5}})
            {
                cmp(log_eta_thm2(r1, r2, q, b), log(oracle::eta_rho(HP(r1), HP(r2), q, b)));
                cmp(eta1_chain(r1, r2, q, b).log_eta1, log(oracle::eta1(HP(r1), HP(r2), q, b)));
            }
        }
        for (unsigned q = 2; q <= 30; ++q)
        {
            cmp(std::log(theta_q(q).theta), log(oracle::theta(q)));
            cmp(std::log(mmr_Theta(q)), log(oracle::Theta(q)));
            cmp(std::log(mmr_exponents(q, 0.25, 0.5).eta), log(oracle::eta_q(q)));
        }
        for (double e : {0.001, 0.01, 0.1, 0.3, 0.45})
            cmp(xi_prime_2(e).log_value, log(oracle::xi_prime_2(HP(e))));
        double t2 = std::abs(theta_q(2).theta - 0.5);
        return {worst <= 1e-9 && t2 <= 1e-15,
                "max relative log error " + fmt("%.3g", worst) + ", |theta_2 - 1/2| = " + fmt("%.3g", t2)};
    }

    Outcome figure3()
    {
        std::ostringstream jo, co, err;
        int a = dispatch({"figure3", "--q", "2", "--b", "2"}, jo, err);
        int b = dispatch({"figure3", "--q", "2", "--b", "2", "--format", "csv"}, co, err);
        if (a || b)
            return {false, "dispatch failed: " + err.str()};
        Json doc = read_document(jo.str());
        Table t = read_table(co.str());
        const std::vector<std::pair<double, std::pair<double, double>>> want{
            {0.3, {-270.77, -5.85}}, {0.1, {-1993.60, -6.95}}, {0.01, {-176866.99, -9.25}}};
        bool ok = t.columns.size() == 6 && doc["outputs"]["rows"].size() == 7;
        std::ostringstream os;
        for (const auto& [eps, pv] : want)
        {
            bool found = false;
            for (const auto& r : t.rows)
                if (std::stod(r[0]) == eps)
                {
                    found = std::stod(r[1]) == pv.first && std::stod(r[3]) == pv.second;
                    os << "eps=" << eps << " published " << fmt("%.2f", std::stod(r[1])) << " computed " << fmt("%.2f", std::stod(r[2])) << "; ";
                }
            ok = ok && found;
        }
        return {ok, os.str()};
    }

    Outcome appendix()
    {
        ParamInputs in;
        in.rho1 = 0.5;
        in.rho2 = 1.0;
        in.nu = nu_for_mu(BigInt(1'000'000), 6);
        in.logq_N = default_logq_N(in.nu, in.rho2);
        in.eta0_override = Real("0.5");
        ParamBundle p = appendix_param_select(in);
        auto r = asymptotic_ratios(p);
        bool ok = p.mu == 1'000'000 && std::abs(r.rho_tilde - 1) <= 0.01 && std::abs(r.gamma - 1) <= 0.01 &&
                  std::abs(r.rho - 1) <= 0.01;
        return {ok, "mu=1e6, synthetic eta0=0.5: ratios " + fmt("%.5f", r.rho_tilde) + " " + fmt("%.5f", r.gamma) +
                        " " + fmt("%.5f", r.rho)};
    }

    Outcome determinism()
    {
        const std::vector<std::vector<std::string>> cmds{
            {"gowers", "--q", "2", "--b", "3", "--k", "3", "--rho", "2", "--oracle", "--node", "5"},
            {"ld-sum", "--q", "2", "--b", "2", "--x", "256", "--epsilon", "0.3", "--mode", "exact-small"},
            {"s0", "--q", "3", "--b", "5", "--N", "9", "--D", "3", "--xi", "2/9"},
            {"vdc", "--trials", "200"},
            {"discrepancy", "--q", "2", "--sum-m", "6", "--N", "100"},
            {"contraction", "--q", "2", "--b", "2", "--k", "2", "--decay-rho", "20"},
            {"exponents", "--q", "2", "--b", "2", "--format", "csv"},
        };
        int bad = 0;
        for (const auto& c : cmds)
        {
            std::string outs[2];
            int codes[2];
            const char* w[2] = {"1", "4"};
            for (int i = 0; i < 2; ++i)
            {
                std::vector<std::string> a = c;
                a.insert(a.end(), {"--workers", w[i], "--seed", "7"});
                std::ostringstream o, e;
                codes[i] = dispatch(a, o, e);
                outs[i] = o.str();
            }
            bad += codes[0] != 0 || codes[1] != 0 || outs[0] != outs[1];
        }
        return {bad == 0, std::to_string(cmds.size()) + " commands, " + std::to_string(bad) + " differ"};
    }
}

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gowers recursion equals direct sum", gowers_equivalence},
        {"exact out-count stochasticity", stochasticity},
        {"contraction certificate", contraction_certificate},
        {"gowers decay bound", gowers_decay_check},
        {"switching cancellation", switching},
        {"gelfond residual stability", gelfond_stability},
        {"counting oracles", counting_oracles},
        {"van der corput verifiers", vdc},
        {"carry propagation", carry},
        {"farey and discrepancy", farey},
        {"exponent precision", exponent_precision},
        {"figure-3 comparison report", figure3},
        {"parameter-selection asymptotics", appendix},
        {"determinism across worker counts", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = criteria[i].second();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
