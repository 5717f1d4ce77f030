#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "digitdist.hpp"
#include "report.hpp"

namespace digitdist
{
    struct RunConfig
    {
        std::string subcommand;
        unsigned q = 2, b = 2, ell = 1;
        unsigned k = 3, rho = 2;
        std::uint64_t nu = 0, mu = 0;
        std::uint64_t N = 16, x = 256, D = 2;
        double epsilon = 0.3;
        std::string xi = "0";
        unsigned lambda_window = 0;
        std::string mode = "window";
        std::uint64_t budget = 0;
        unsigned workers = 1;
        std::uint64_t seed = 0;
        std::string format = "json";
        std::string out;

        // per-command knobs
        std::uint64_t y = 0, z = 16, m = 1, r = 0;
        unsigned a = 0;
        bool oracle = false, breakdown = false;
        std::string variant = "full";
        std::uint64_t node = 0;
        std::string alpha = "1/2", beta = "0";
        std::string n = "5";
        unsigned lambda = 3;
        std::uint64_t start = 0;
        std::optional<unsigned> sum_m;
        std::uint64_t trials = 1000, max_length = 64, max_K = 8;
        unsigned decay_rho = 0;
        double rho1 = 0.5, rho2 = 1.0, delta1 = 0.25, delta2 = 0.5;
        double eps_min = 0.001, eps_max = 0.3;
        unsigned points = 50;
        std::string logq_N, eta0;
        std::string svg;
    };

    struct CommandResult
    {
        Json inputs = Json::object();
        Json outputs = Json::object();
        std::optional<Table> table;      // preferred CSV layout
        std::optional<std::string> text; // raw artifact (edge list)
    };

    namespace cli_detail
    {
        inline Json params_json(const RunConfig& c) { return {{"q", c.q}, {"b", c.b}, {"ell", c.ell}}; }

        inline std::vector<cplx> random_unit_sequence(std::mt19937_64& rng, std::size_t len)
        {
            std::vector<cplx> v(len);
            for (auto& z : v)
            {
                // 53 random bits; avoids implementation-defined distributions
                double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                z = e_of(u);
            }
            return v;
        }

        inline CommandResult run_count(const RunConfig& c)
        {
            ProgressionQuery qy{DigitParams(c.q, c.b, c.ell), c.y, c.z, c.a, c.m, c.r};
            CommandResult res;
            res.inputs = params_json(c);
            res.inputs.update(Json{{"y", jint(c.y)}, {"z", jint(c.z)}, {"a", c.a}, {"m", jint(c.m)}, {"r", jint(c.r)}});
            res.outputs["count"] = jint(count_progression(qy));
            return res;
        }

        inline CommandResult run_ld_sum(const RunConfig& c)
        {
            DigitParams p(c.q, c.b, c.ell);
            ErrorMode mode = parse_error_mode(c.mode);
            LdSum s = ld_error_sum(p, c.a, c.x, c.epsilon, mode, c.workers, c.breakdown);
            CommandResult res;
            res.inputs = params_json(c);
            res.inputs.update(Json{{"a", c.a}, {"x", jint(c.x)}, {"epsilon", c.epsilon}, {"mode", to_string(mode)},
                                   {"breakdown", c.breakdown}});
            res.outputs["m_max"] = jint(s.m_max);
            res.outputs["total"] = jrat(s.total);
            res.outputs["total_float"] = jnum(s.total.convert_to<double>());
            if (c.breakdown)
            {
                Json arr = Json::array();
                for (const auto& e : s.per_m)
                    arr.push_back({{"m", jint(e.m)}, {"error", jrat(e.error)}});
                res.outputs["per_m"] = arr;
            }
            return res;
        }

        inline CommandResult run_s0(const RunConfig& c)
        {
            ExpSumConfig cfg{DigitParams(c.q, c.b, c.ell), c.N, c.D, parse_rational(c.xi), c.lambda_window};
            S0Result s = s0_sum(cfg, c.workers);
            CommandResult res;
            res.inputs = params_json(c);
            res.inputs.update(Json{{"N", jint(c.N)}, {"D", jint(c.D)}, {"xi", jrat(cfg.xi)}, {"lambda_window", c.lambda_window}});
            res.outputs["Lambda"] = s.Lambda;
            res.outputs["value"] = jnum(s.value);
            res.outputs["normalized"] = jnum(s.value / (static_cast<double>(c.D) * static_cast<double>(c.N)));
            Json arr = Json::array();
            for (double v : s.per_m)
                arr.push_back(jnum(v));
            res.outputs["per_m"] = arr;
            return res;
        }

        inline CommandResult run_vdc(const RunConfig& c)
        {
            require(c.max_length >= 1 && c.max_K >= 1, "need max-length >= 1 and max-K >= 1");
            std::mt19937_64 rng(c.seed);
            std::uint64_t plain_checks = 0, plain_bad = 0, shift_checks = 0, shift_bad = 0;
            double plain_ratio = 0, shift_ratio = 0;
            for (std::uint64_t t = 0; t < c.trials; ++t)
            {
                std::size_t len = 1 + rng() % c.max_length;
                auto v = random_unit_sequence(rng, len);
                auto corr = correlation_table(v);
                for (std::size_t H = 1; H <= len; ++H)
                {
                    VdcResult pr = vdc_plain_check(v, H, corr);
                    ++plain_checks;
                    plain_bad += !pr.holds();
                    plain_ratio = std::max(plain_ratio, pr.lhs / pr.rhs);
                    for (std::size_t K = 1; K <= c.max_K; ++K)
                    {
                        VdcResult sr = vdc_shift_check(v, H, K, corr);
                        ++shift_checks;
                        shift_bad += !sr.holds();
                        shift_ratio = std::max(shift_ratio, sr.lhs / sr.rhs);
                    }
                }
            }
            CommandResult res;
            res.inputs = {{"trials", jint(c.trials)}, {"max_length", jint(c.max_length)}, {"max_K", jint(c.max_K)}};
            res.outputs["plain"] = {{"checks", jint(plain_checks)}, {"violations", jint(plain_bad)}, {"max_ratio", jnum(plain_ratio)}};
            res.outputs["shift"] = {{"checks", jint(shift_checks)}, {"violations", jint(shift_bad)}, {"max_ratio", jnum(shift_ratio)}};
            return res;
        }

        inline CommandResult run_carry(const RunConfig& c)
        {
            Rational al = parse_rational(c.alpha), be = parse_rational(c.beta);
            CarryResult cr = carry_exceptions(c.q, c.lambda, c.r, al, be, c.start, c.N);
            CommandResult res;
            res.inputs = {{"q", c.q}, {"lambda", c.lambda}, {"r", jint(c.r)}, {"alpha", jrat(al)}, {"beta", jrat(be)},
                          {"start", jint(c.start)}, {"N", jint(c.N)}};
            res.outputs["count"] = jint(cr.count);
            res.outputs["bound"] = jrat(cr.bound);
            res.outputs["bound_float"] = jnum(cr.bound.convert_to<double>());
            return res;
        }

        inline Variant parse_variant(const std::string& s)
        {
            if (s == "full")
                return Variant::full;
            if (s == "truncated")
                return Variant::truncated;
            throw precondition_error("variant must be 'full' or 'truncated'");
        }

        inline Json node_json(const Node& n)
        {
            Json arr = Json::array();
            for (unsigned v : n.r)
                arr.push_back(v);
            return arr;
        }

        inline Json value_json(const GowersValue& v)
        {
            auto z = v.value();
            Json numer = Json::array();
            for (const auto& x : v.numer.c)
                numer.push_back(jint(x));
            return {{"re", jnum(static_cast<double>(z.real()))},
                    {"im", jnum(static_cast<double>(z.imag()))},
                    {"numerators", numer},
                    {"denominator", jint(v.denom)}};
        }

        inline CommandResult run_gowers(const RunConfig& c)
        {
            DigitParams p(c.q, c.b, c.ell);
            Variant var = parse_variant(c.variant);
            TransitionGraph g = reachable_set(p, c.k);
            require(c.node < g.size(), "node index outside the reachable set");
            const Node& r0 = g.nodes[c.node];
            GowersValue rec = gowers_average_recursive(p, c.k, c.rho, r0, var);
            CommandResult res;
            res.inputs = params_json(c);
            res.inputs.update(Json{{"k", c.k}, {"rho", c.rho}, {"variant", to_string(var)}, {"node", jint(c.node)}, {"oracle", c.oracle}});
            res.outputs["r0"] = node_json(r0);
            res.outputs["recursive"] = value_json(rec);
            if (c.oracle)
            {
                GowersValue br = gowers_average_brute(p, c.k, c.rho, r0, var, c.workers);
                res.outputs["brute"] = value_json(br);
                res.outputs["difference"] = jnum(static_cast<double>(std::abs(rec.value() - br.value())));
                res.outputs["exact_match"] = rec.numer == br.numer;
            }
            return res;
        }

        inline CommandResult run_graph(const RunConfig& c)
        {
            DigitParams p(c.q, c.b, c.ell);
            TransitionGraph g = reachable_set(p, c.k);
            std::uint64_t edges = 0;
            for (const auto& es : g.edges)
                edges += es.size();
            KoPath ko = konieczny_path(p, c.k);
            CommandResult res;
            res.inputs = params_json(c);
            res.inputs["k"] = c.k;
            res.outputs["nodes"] = jint(g.size());
            res.outputs["edges"] = jint(edges);
            res.outputs["cardinality_bound"] = jint(reachable_bound(c.k));
            res.outputs["strongly_connected"] = strongly_connected(g);
            res.outputs["out_counts_exact"] = out_counts_exact(g);
            res.outputs["sync_length"] = synchronize_check(g);
            Json letters = Json::array();
            for (const auto& e : ko.letters)
                letters.push_back(e);
            res.outputs["konieczny"] = {{"letters", letters}, {"total_residue", ko.total.t}};
            res.text = edge_list(g);
            return res;
        }

        inline CommandResult run_contraction(const RunConfig& c)
        {
            DigitParams p(c.q, c.b, c.ell);
            TransitionGraph g = reachable_set(p, c.k);
            ContractionResult cr = contraction(g, c.workers);
            CommandResult res;
            res.inputs = params_json(c);
            res.inputs.update(Json{{"k", c.k}, {"decay_rho", c.decay_rho}});
            res.outputs["K"] = cr.K;
            res.outputs["j"] = cr.j;
            res.outputs["exponent"] = jint(cr.exponent);
            res.outputs["M"] = jnum(static_cast<double>(cr.M));
            res.outputs["gap"] = jnum(static_cast<double>(cr.gap));
            res.outputs["bound_gap"] = jnum(static_cast<double>(cr.bound_gap));
            res.outputs["float_error"] = jnum(static_cast<double>(cr.error));
            res.outputs["exact"] = cr.exact;
            res.outputs["certified"] = cr.certified;
            res.outputs["argmax"] = node_json(g.nodes[cr.argmax]);
            if (c.decay_rho)
            {
                DecayTable d = gowers_decay(g, c.decay_rho, Variant::full);
                Json arr = Json::array();
                bool ok = true;
                for (unsigned rho = 0; rho <= c.decay_rho; ++rho)
                {
                    long double bound = std::pow(cr.M, static_cast<long double>(rho / cr.j));
                    bool holds = d.at_zero[rho] <= bound * (1 + 1e-12L);
                    ok &= holds;
                    arr.push_back({{"rho", rho}, {"at_zero", jnum(static_cast<double>(d.at_zero[rho]))},
                                   {"max", jnum(static_cast<double>(d.v[rho]))}, {"bound", jnum(static_cast<double>(bound))},
                                   {"holds", holds}});
                }
                res.outputs["decay"] = arr;
                ensure(ok, "decay bound violated");
            }
            return res;
        }

        inline CommandResult run_farey(const RunConfig& c)
        {
            Rational al = parse_rational(c.alpha);
            BigInt n(c.n);
            auto [l, r] = farey_neighbors(al, n);
            FareyFraction rd = farey_round(al, n);
            CommandResult res;
            res.inputs = {{"alpha", jrat(al)}, {"n", jint(n)}};
            res.outputs["left"] = jrat(l.value());
            res.outputs["right"] = jrat(r.value());
            res.outputs["mediant"] = jrat(Rational(l.p + r.p, l.q + r.q));
            res.outputs["round"] = jrat(rd.value());
            res.outputs["determinant"] = jint(BigInt(l.q * r.p - l.p * r.q));
            res.outputs["approximation_error"] = jrat(abs(Rational(rd.q) * al - Rational(rd.p)));
            return res;
        }

        inline CommandResult run_discrepancy(const RunConfig& c)
        {
            CommandResult res;
            if (c.sum_m)
            {
                DiscrepancySum s = discrepancy_sum(c.q, *c.sum_m, c.N, c.workers);
                res.inputs = {{"q", c.q}, {"sum_m", *c.sum_m}, {"N", jint(c.N)}};
                res.outputs["sum"] = jrat(s.sum);
                res.outputs["sum_float"] = jnum(s.sum.convert_to<double>());
                res.outputs["constant"] = jnum(s.constant);
                return res;
            }
            Rational al = parse_rational(c.alpha);
            Rational d = discrepancy(al, c.N);
            res.inputs = {{"alpha", jrat(al)}, {"N", jint(c.N)}};
            res.outputs["discrepancy"] = jrat(d);
            res.outputs["discrepancy_float"] = jnum(d.convert_to<double>());
            return res;
        }

        inline std::vector<double> eps_grid(const RunConfig& c)
        {
            require(c.points >= 2 && c.eps_min > 0 && c.eps_max > c.eps_min && c.eps_max < 1, "bad epsilon grid");
            std::vector<double> g;
            for (unsigned i = 0; i < c.points; ++i)
                g.push_back(c.eps_min + (c.eps_max - c.eps_min) * i / (c.points - 1));
            return g;
        }

        inline void write_file(const std::string& path, const std::string& text)
        {
            std::ofstream f(path, std::ios::binary);
            require(static_cast<bool>(f), "cannot open " + path);
            f << text;
        }

        inline CommandResult run_exponents(const RunConfig& c)
        {
            check_qb(c.q, c.b);
            CommandResult res;
            res.inputs = {{"q", c.q}, {"b", c.b}, {"k", c.k}, {"epsilon", c.epsilon}, {"rho1", c.rho1}, {"rho2", c.rho2},
                          {"delta1", c.delta1}, {"delta2", c.delta2}};
            Json& o = res.outputs;
            o["lambda"] = jnum(gelfond_lambda(c.q, c.b));
            ThetaQ th = theta_q(c.q);
            o["theta_q"] = {{"M", jnum(th.M)}, {"theta", jnum(th.theta)}};
            if (c.epsilon <= 0.5)
            {
                MmrExponents m = mmr_exponents(c.q, c.epsilon, 0.5);
                o["mmr"] = {{"Theta", jnum(m.Theta)},
                            {"eta", jnum(m.eta)},
                            {"gamma_literal", jnum(m.gamma_literal)},
                            {"gamma_normalized", jnum(m.gamma_normalized)},
                            {"t_star", jnum(m.t_star)},
                            {"converged", m.converged},
                            {"xi_literal", jnum(m.xi_literal)},
                            {"xi_normalized", jnum(m.xi_normalized)}};
            }
            if (c.q == 2 && c.epsilon < 0.5)
            {
                XiPrime x = xi_prime_2(c.epsilon);
                o["xi_prime_2"] = {{"value", jnum(x.value)}, {"log", jnum(x.log_value)}, {"literal", jnum(x.literal)}};
            }
            FmGamma fg = fm_gamma(0.5);
            o["fm_gamma_half"] = {{"beta", jnum(fg.beta)}, {"gamma", jnum(fg.gamma)}};
            Eta0 e0 = eta0_bound(c.q, c.b, c.k);
            o["eta0"] = {{"k", c.k}, {"K", e0.K}, {"exponent", jint(e0.exponent)}, {"log_closed", jnum(e0.log_closed)},
                         {"log_sharper", jnum(e0.log_sharper)}};
            Eta0Result t0 = log_eta_thm0(c.epsilon, c.q, c.b);
            o["log_eta_epsilon"] = {{"log_eta", jnum(t0.log_eta)}, {"in_validity_range", t0.in_validity_range}};
            o["log_eta_delta"] = jnum(log_eta_thm1(c.delta1, c.delta2, c.q, c.b));
            o["log_eta_rho"] = jnum(log_eta_thm2(c.rho1, c.rho2, c.q, c.b));
            Eta1 e1 = eta1_chain(c.rho1, c.rho2, c.q, c.b);
            o["log_eta1"] = {{"k", e1.k}, {"log_eta1", jnum(e1.log_eta1)}};

            Table t;
            t.command = "exponents";
            t.seed = c.seed;
            t.meta = {{"q", std::to_string(c.q)}, {"b", std::to_string(c.b)}};
            t.columns = {"epsilon", "log_eta"};
            std::vector<double> xs, ys;
            for (double e : eps_grid(c))
            {
                double v = log_eta_thm0(e, c.q, c.b).log_eta;
                t.rows.push_back({csv_double(e), csv_double(v)});
                xs.push_back(e);
                ys.push_back(v);
            }
            res.table = t;
            if (!c.svg.empty())
                write_file(c.svg, svg_plot(xs, ys, "epsilon", "log eta"));
            return res;
        }

        inline CommandResult run_figure3(const RunConfig& c)
        {
            std::vector<double> eps;
            for (const auto& r : figure3_published())
                eps.push_back(r.eps);
            auto rows = figure3_report(c.q, c.b, eps);
            CommandResult res;
            res.inputs = {{"q", c.q}, {"b", c.b}};
            Json arr = Json::array();
            Table t;
            t.command = "figure3";
            t.seed = c.seed;
            t.columns = {"epsilon", "published_log_eta", "log_eta", "published_log_xi", "log_xi", "in_validity_range"};
            auto opt = [](const std::optional<double>& v) { return v ? jnum(*v) : Json(nullptr); };
            auto optc = [](const std::optional<double>& v) { return v ? csv_double(*v) : std::string(); };
            std::vector<double> xs, ys;
            for (const auto& r : rows)
            {
                arr.push_back({{"epsilon", jnum(r.eps)},
                               {"published_log_eta", opt(r.published_log_eta)},
                               {"log_eta", jnum(r.log_eta)},
                               {"published_log_xi", opt(r.published_log_xi)},
                               {"log_xi", opt(r.log_xi)},
                               {"in_validity_range", r.in_validity_range}});
                t.rows.push_back({csv_double(r.eps), optc(r.published_log_eta), csv_double(r.log_eta),
                                  optc(r.published_log_xi), optc(r.log_xi), r.in_validity_range ? "true" : "false"});
                xs.push_back(r.eps);
                ys.push_back(r.log_eta);
            }
            res.outputs["rows"] = arr;
            res.outputs["note"] =
                "published values are reproduced verbatim; computed values come from the closed form and are not expected to agree";
            res.table = t;
            if (!c.svg.empty())
                write_file(c.svg, svg_plot(xs, ys, "epsilon", "log eta"));
            return res;
        }

        inline CommandResult run_params(const RunConfig& c)
        {
            ParamInputs in;
            in.q = c.q;
            in.b = c.b;
            in.rho1 = c.rho1;
            in.rho2 = c.rho2;
            const unsigned k = 3 * (static_cast<unsigned>(std::floor(c.rho2)) + 1);
            require(c.nu || c.mu, "give --nu or --mu");
            in.nu = c.nu ? BigInt(c.nu) : nu_for_mu(BigInt(c.mu), k);
            in.logq_N = c.logq_N.empty() ? default_logq_N(in.nu, c.rho2) : Real(c.logq_N);
            if (!c.eta0.empty())
                in.eta0_override = Real(c.eta0);
            ParamBundle pb = appendix_param_select(in);
            CommandResult res;
            res.inputs = {{"q", c.q}, {"b", c.b}, {"rho1", c.rho1}, {"rho2", c.rho2}, {"nu", jint(in.nu)},
                          {"logq_N", in.logq_N.str(30)}, {"eta0_override", c.eta0.empty() ? Json(nullptr) : Json(c.eta0)}};
            Json& o = res.outputs;
            o["k"] = pb.k;
            o["mu"] = jint(pb.mu);
            o["sigma"] = jint(pb.sigma);
            o["rho_tilde"] = jint(pb.rho_tilde);
            o["gamma"] = jint(pb.gamma);
            o["lambda"] = jint(pb.lambda);
            o["rho"] = jint(pb.rho);
            o["T_exponent"] = jint(pb.T_exponent);
            o["H0"] = jint(pb.H0);
            o["eta0"] = pb.eta0.str(20);
            Json le = Json::array();
            for (double v : pb.log_E)
                le.push_back(jnum(v));
            o["log_E"] = le;
            o["log_E_sum"] = jnum(pb.log_E_sum);
            o["violations"] = pb.violations;
            o["admissible"] = pb.admissible();
            if (pb.mu > 0)
            {
                AsymptoticRatios ar = asymptotic_ratios(pb);
                o["ratios"] = {{"rho_tilde", jnum(ar.rho_tilde)}, {"gamma", jnum(ar.gamma)}, {"rho", jnum(ar.rho)}};
            }
            return res;
        }

        inline void flatten(const Json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows)
        {
            if (j.is_object())
            {
                for (auto it = j.begin(); it != j.end(); ++it)
                    flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
            }
            else if (j.is_array())
            {
                for (std::size_t i = 0; i < j.size(); ++i)
                    flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
            }
            else if (j.is_string())
                rows.push_back({prefix, j.get<std::string>()});
            else if (j.is_number_float())
                rows.push_back({prefix, csv_double(j.get<double>())});
            else if (j.is_null())
                rows.push_back({prefix, ""});
            else
                rows.push_back({prefix, j.dump()});
        }

        // Restores DIGITDIST_BUDGET after an in-process run.
        struct BudgetScope
        {
            std::optional<std::string> saved;
            bool active = false;

            explicit BudgetScope(std::uint64_t budget)
            {
                if (!budget)
                    return;
                if (const char* s = std::getenv("DIGITDIST_BUDGET"))
                    saved = s;
                setenv("DIGITDIST_BUDGET", std::to_string(budget).c_str(), 1);
                active = true;
            }

            ~BudgetScope()
            {
                if (!active)
                    return;
                if (saved)
                    setenv("DIGITDIST_BUDGET", saved->c_str(), 1);
                else
                    unsetenv("DIGITDIST_BUDGET");
            }
        };
    }

    // Runs one subcommand. Exit codes: 0 ok, 1 usage or precondition, 2 invariant.
    inline int dispatch(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
    {
        using namespace cli_detail;
        RunConfig c;
        CLI::App app{"digit-sum distribution toolkit", "digitdist"};
        app.require_subcommand(1, 1);

        auto common = [&](CLI::App* s) {
            s->add_option("--budget", c.budget, "work budget override (elementary operations)");
            s->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 256u));
            s->add_option("--seed", c.seed, "seed for randomized runs");
            s->add_option("--format", c.format, "json | csv | edges")->check(CLI::IsMember({"json", "csv", "edges"}));
            s->add_option("--out", c.out, "output path (default stdout)");
        };
        auto qbl = [&](CLI::App* s) {
            s->add_option("--q", c.q, "base");
            s->add_option("--b", c.b, "modulus of the digit sum");
            s->add_option("--ell", c.ell, "frequency");
        };

        auto* count = app.add_subcommand("count", "count n in [y, z) with s_q(n) = a mod b and n = r mod m");
        qbl(count);
        count->add_option("--y", c.y);
        count->add_option("--z", c.z);
        count->add_option("--a", c.a);
        count->add_option("--m", c.m);
        count->add_option("--r", c.r);

        auto* ld = app.add_subcommand("ld-sum", "sum of progression errors over m <= x^(1-epsilon)");
        qbl(ld);
        ld->add_option("--a", c.a);
        ld->add_option("--x", c.x);
        ld->add_option("--epsilon", c.epsilon);
        ld->add_option("--mode", c.mode)->check(CLI::IsMember({"window", "exact-small"}));
        ld->add_flag("--breakdown", c.breakdown);

        auto* s0 = app.add_subcommand("s0", "sum over m in [D, qD) of the max over a of the exponential sum");
        qbl(s0);
        s0->add_option("--N", c.N);
        s0->add_option("--D", c.D);
        s0->add_option("--xi", c.xi);
        s0->add_option("--lambda-window", c.lambda_window);

        auto* vdc = app.add_subcommand("vdc", "randomized check of both van der Corput inequalities");
        vdc->add_option("--trials", c.trials);
        vdc->add_option("--max-length", c.max_length);
        vdc->add_option("--max-K", c.max_K);

        auto* carry = app.add_subcommand("carry", "carry-propagation exception count");
        carry->add_option("--q", c.q);
        carry->add_option("--lambda", c.lambda);
        carry->add_option("--r", c.r);
        carry->add_option("--alpha", c.alpha);
        carry->add_option("--beta", c.beta);
        carry->add_option("--start", c.start);
        carry->add_option("--N", c.N);

        auto* gowers = app.add_subcommand("gowers", "Gowers average via the graph recursion");
        qbl(gowers);
        gowers->add_option("--k", c.k);
        gowers->add_option("--rho", c.rho);
        gowers->add_option("--variant", c.variant)->check(CLI::IsMember({"full", "truncated"}));
        gowers->add_option("--node", c.node, "index of r0 in the reachable set");
        gowers->add_flag("--oracle", c.oracle, "also run the direct sum");

        auto* graph = app.add_subcommand("graph", "reachable transition graph");
        qbl(graph);
        graph->add_option("--k", c.k);

        auto* contr = app.add_subcommand("contraction", "contraction constant of the weighted graph");
        qbl(contr);
        contr->add_option("--k", c.k);
        contr->add_option("--decay-rho", c.decay_rho, "also check the decay bound up to this rho");

        auto* farey = app.add_subcommand("farey", "Farey neighbours and mediant rounding");
        farey->add_option("--alpha", c.alpha);
        farey->add_option("--n", c.n);

        auto* disc = app.add_subcommand("discrepancy", "exact discrepancy of n alpha mod 1");
        disc->add_option("--alpha", c.alpha);
        disc->add_option("--N", c.N);
        disc->add_option("--q", c.q);
        disc->add_option("--sum-m", c.sum_m, "sum D_N(d/q^m) over d < q^m instead");

        auto* expo = app.add_subcommand("exponents", "closed-form exponents");
        expo->add_option("--q", c.q);
        expo->add_option("--b", c.b);
        expo->add_option("--k", c.k);
        expo->add_option("--epsilon", c.epsilon);
        expo->add_option("--rho1", c.rho1);
        expo->add_option("--rho2", c.rho2);
        expo->add_option("--delta1", c.delta1);
        expo->add_option("--delta2", c.delta2);
        expo->add_option("--eps-min", c.eps_min);
        expo->add_option("--eps-max", c.eps_max);
        expo->add_option("--points", c.points);
        expo->add_option("--svg", c.svg, "write an SVG plot of the epsilon curve");

        auto* fig = app.add_subcommand("figure3", "published table next to computed values");
        fig->add_option("--q", c.q);
        fig->add_option("--b", c.b);
        fig->add_option("--svg", c.svg);

        auto* params = app.add_subcommand("params", "parameter selection for the level-of-distribution argument");
        params->add_option("--q", c.q);
        params->add_option("--b", c.b);
        params->add_option("--nu", c.nu);
        params->add_option("--mu", c.mu, "pick the smallest nu giving this mu");
        params->add_option("--rho1", c.rho1);
        params->add_option("--rho2", c.rho2);
        params->add_option("--logq-N", c.logq_N, "log_q N (decimal)");
        params->add_option("--eta0", c.eta0, "override eta0 (decimal)");

        for (auto* s : app.get_subcommands({}))
            common(s);

        std::vector<std::string> rev(args.rbegin(), args.rend());
        try
        {
            app.parse(rev);
        }
        catch (const CLI::CallForHelp&)
        {
            out << app.help();
            return 0;
        }
        catch (const CLI::ParseError& e)
        {
            err << "usage error: " << e.what() << "\n";
            return 1;
        }

        CLI::App* sub = app.get_subcommands().front();
        c.subcommand = sub->get_name();
        try
        {
            BudgetScope scope(c.budget);
            CommandResult res;
            const std::string& s = c.subcommand;
            if (s == "count")
                res = run_count(c);
            else if (s == "ld-sum")
                res = run_ld_sum(c);
            else if (s == "s0")
                res = run_s0(c);
            else if (s == "vdc")
                res = run_vdc(c);
            else if (s == "carry")
                res = run_carry(c);
            else if (s == "gowers")
                res = run_gowers(c);
            else if (s == "graph")
                res = run_graph(c);
            else if (s == "contraction")
                res = run_contraction(c);
            else if (s == "farey")
                res = run_farey(c);
            else if (s == "discrepancy")
                res = run_discrepancy(c);
            else if (s == "exponents")
                res = run_exponents(c);
            else if (s == "figure3")
                res = run_figure3(c);
            else
                res = run_params(c);
            if (c.budget)
                res.inputs["budget"] = jint(c.budget);

            std::string text;
            if (c.format == "edges")
            {
                require(res.text.has_value(), "--format edges is only available for graph");
                text = *res.text;
            }
            else if (c.format == "csv")
            {
                Table t;
                if (res.table)
                    t = *res.table;
                else
                {
                    t.command = s;
                    t.seed = c.seed;
                    t.columns = {"key", "value"};
                    std::vector<std::vector<std::string>> in_rows;
                    flatten(res.inputs, "", in_rows);
                    for (auto& r : in_rows)
                        t.meta.emplace_back("input." + r[0], r[1]);
                    flatten(res.outputs, "", t.rows);
                }
                text = dump_table(t);
            }
            else
            {
                text = dump_document(make_document(s, c.seed, res.inputs, res.outputs));
            }
            if (c.out.empty())
                out << text;
            else
                write_file(c.out, text);
            return 0;
        }
        catch (const invariant_error& e)
        {
            err << "invariant violated: " << e.what() << "\n";
            return 2;
        }
        catch (const precondition_error& e)
        {
            err << "precondition failed: " << e.what() << "\n";
            return 1;
        }
        catch (const std::exception& e)
        {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    }
}
