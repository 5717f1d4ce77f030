#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"
#include "digitcore.hpp"
#include "exponents.hpp"
#include "parallel.hpp"
#include "phase_vector.hpp"
#include "rational.hpp"

namespace digitdist
{
    // r_w for w in [0, 2^k); bit i of w is the coordinate w_i.
    struct Node
    {
        unsigned k = 2;
        std::vector<unsigned> r;

        Node() = default;
        explicit Node(unsigned k_) : k(k_), r(std::size_t(1) << k_, 0) {}
        Node(unsigned k_, std::vector<unsigned> r_) : k(k_), r(std::move(r_))
        {
            require(r.size() == (std::size_t(1) << k), "node must have 2^k coordinates");
        }

        bool is_zero() const { return std::all_of(r.begin(), r.end(), [](unsigned v) { return v == 0; }); }
        bool operator==(const Node&) const = default;
    };

    // e = (e_0, ..., e_k), digits in [0, q).
    using Letter = std::vector<unsigned>;

    inline int cube_sign(std::size_t w) { return popcount(w) % 2 ? -1 : 1; }

    // (1, w) . e = e_0 + sum_i w_i e_{i+1}
    inline unsigned cube_dot(std::size_t w, const Letter& e)
    {
        unsigned s = e[0];
        for (std::size_t i = 0; i + 1 < e.size(); ++i)
            if ((w >> i) & 1)
                s += e[i + 1];
        return s;
    }

    inline Letter letter_from_index(std::uint64_t idx, unsigned q, unsigned k)
    {
        Letter e(k + 1);
        for (unsigned i = 0; i <= k; ++i)
        {
            e[i] = static_cast<unsigned>(idx % q);
            idx /= q;
        }
        return e;
    }

    inline Node delta(const Node& node, const Letter& e, unsigned q)
    {
        require(e.size() == node.k + 1, "letter must have k+1 digits");
        for (unsigned d : e)
            require(d < q, "letter digits must lie in [0, q)");
        Node out(node.k);
        for (std::size_t w = 0; w < node.r.size(); ++w)
            out.r[w] = (node.r[w] + cube_dot(w, e)) / q;
        return out;
    }

    // S~(r) = - sum_w (-1)^{s_2(w)} r_w
    inline long long s_tilde(const Node& node)
    {
        long long s = 0;
        for (std::size_t w = 0; w < node.r.size(); ++w)
            s -= cube_sign(w) * static_cast<long long>(node.r[w]);
        return s;
    }

    inline unsigned transition_phase(const Node& r0, const Node& r1, unsigned q, unsigned b)
    {
        return static_cast<unsigned>(mod_floor(static_cast<long long>(q) * s_tilde(r1) - s_tilde(r0), b));
    }

    // prod_{i=0}^{k} (i+1)^{C(k,i)}
    inline BigInt reachable_bound(unsigned k)
    {
        BigInt prod = 1;
        for (std::size_t w = 0; w < (std::size_t(1) << k); ++w)
            prod *= popcount(w) + 1;
        return prod;
    }

    struct Edge
    {
        std::uint32_t target;
        unsigned phase;
        std::uint64_t count;
    };

    struct TransitionGraph
    {
        DigitParams params;
        unsigned k = 2;
        std::vector<unsigned> radix;
        std::vector<std::uint64_t> stride;
        std::vector<Node> nodes;  // ascending mixed-radix code; the 0-node comes first
        std::vector<std::uint64_t> codes;
        std::vector<long long> stilde;
        std::vector<std::vector<Edge>> edges;  // ascending target
        std::unordered_map<std::uint64_t, std::uint32_t> index;

        std::uint64_t encode(const Node& n) const
        {
            std::uint64_t c = 0;
            for (std::size_t w = 0; w < n.r.size(); ++w)
            {
                require(n.r[w] < radix[w], "node coordinate outside the encoding box");
                c += n.r[w] * stride[w];
            }
            return c;
        }

        Node decode(std::uint64_t c) const
        {
            Node n(k);
            for (std::size_t w = 0; w < n.r.size(); ++w)
            {
                n.r[w] = static_cast<unsigned>(c % radix[w]);
                c /= radix[w];
            }
            return n;
        }

        std::uint32_t find(const Node& n) const
        {
            auto it = index.find(encode(n));
            require(it != index.end(), "node not in graph");
            return it->second;
        }

        std::size_t size() const { return nodes.size(); }
    };

    // BFS closure of `roots` under every letter. Radices are large enough to
    // hold every iterate: delta never raises a coordinate above max(r_w, s_2(w)).
    inline TransitionGraph build_graph(const DigitParams& p, unsigned k, const std::vector<Node>& roots)
    {
        require(k >= 2, "k must be at least 2");
        require(k <= 5, "k above 5 is outside the supported encoding range");
        const unsigned q = p.q;
        const std::size_t W = std::size_t(1) << k;
        const std::uint64_t letters = ipow_u64(q, k + 1);
        const Budget graph_budget = Budget::graph();
        graph_budget.charge(static_cast<long double>(W) * letters, "transition graph letters");

        TransitionGraph g;
        g.params = p;
        g.k = k;
        g.radix.assign(W, 0);
        for (std::size_t w = 0; w < W; ++w)
            g.radix[w] = popcount(w) + 1;
        for (const Node& r : roots)
        {
            require(r.k == k, "root dimension mismatch");
            for (std::size_t w = 0; w < W; ++w)
                g.radix[w] = std::max(g.radix[w], r.r[w] + 1);
        }
        g.stride.assign(W, 1);
        long double span = 1;
        for (std::size_t w = 0; w < W; ++w)
        {
            if (w)
                g.stride[w] = g.stride[w - 1] * g.radix[w - 1];
            span *= g.radix[w];
        }
        require(span < 9.0e18L, "node encoding exceeds 64 bits");

        std::vector<std::vector<unsigned>> dots(letters, std::vector<unsigned>(W));
        for (std::uint64_t i = 0; i < letters; ++i)
        {
            Letter e = letter_from_index(i, q, k);
            for (std::size_t w = 0; w < W; ++w)
                dots[i][w] = cube_dot(w, e);
        }

        std::unordered_map<std::uint64_t, std::uint32_t> seen;
        std::vector<std::uint64_t> order;
        std::deque<std::uint64_t> queue;
        for (const Node& r : roots)
        {
            std::uint64_t c = g.encode(r);
            if (seen.emplace(c, static_cast<std::uint32_t>(order.size())).second)
            {
                order.push_back(c);
                queue.push_back(c);
            }
        }
        std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> raw;
        std::vector<std::uint64_t> targets(letters);
        while (!queue.empty())
        {
            std::uint64_t c = queue.front();
            queue.pop_front();
            graph_budget.charge(static_cast<long double>(order.size()) * letters, "transition graph traversal");
            Node n = g.decode(c);
            for (std::uint64_t i = 0; i < letters; ++i)
            {
                std::uint64_t t = 0;
                for (std::size_t w = 0; w < W; ++w)
                    t += ((n.r[w] + dots[i][w]) / q) * g.stride[w];
                targets[i] = t;
            }
            std::sort(targets.begin(), targets.end());
            std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
            for (std::uint64_t t : targets)
            {
                if (!out.empty() && out.back().first == t)
                    ++out.back().second;
                else
                    out.emplace_back(t, 1);
                if (seen.emplace(t, static_cast<std::uint32_t>(order.size())).second)
                {
                    order.push_back(t);
                    queue.push_back(t);
                }
            }
            raw.resize(std::max<std::size_t>(raw.size(), seen[c] + 1));
            raw[seen[c]] = std::move(out);
        }

        std::vector<std::uint64_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            g.index[sorted[i]] = static_cast<std::uint32_t>(i);
        g.codes = sorted;
        g.nodes.reserve(sorted.size());
        for (std::uint64_t c : sorted)
        {
            g.nodes.push_back(g.decode(c));
            g.stilde.push_back(s_tilde(g.nodes.back()));
        }
        g.edges.assign(sorted.size(), {});
        for (std::size_t bfs = 0; bfs < order.size(); ++bfs)
        {
            std::uint32_t src = g.index[order[bfs]];
            for (auto [t, cnt] : raw[bfs])
            {
                std::uint32_t dst = g.index[t];
                unsigned ph = static_cast<unsigned>(
                    mod_floor(static_cast<long long>(q) * g.stilde[dst] - g.stilde[src], p.b));
                g.edges[src].push_back({dst, ph, cnt});
            }
            std::sort(g.edges[src].begin(), g.edges[src].end(),
                      [](const Edge& a, const Edge& b) { return a.target < b.target; });
        }
        return g;
    }

    // The reachable set from the 0-node, with the box and cardinality checks.
    inline TransitionGraph reachable_set(const DigitParams& p, unsigned k)
    {
        TransitionGraph g = build_graph(p, k, {Node(k)});
        for (const Node& n : g.nodes)
            for (std::size_t w = 0; w < n.r.size(); ++w)
                ensure(n.r[w] <= static_cast<unsigned>(popcount(w)), "reachable node leaves the box r_w <= s_2(w)");
        ensure(BigInt(g.size()) <= reachable_bound(k), "reachable set exceeds the product bound");
        ensure(g.nodes.front().is_zero(), "0-node missing");
        return g;
    }

    inline bool out_counts_exact(const TransitionGraph& g)
    {
        const std::uint64_t total = ipow_u64(g.params.q, g.k + 1);
        for (const auto& es : g.edges)
        {
            std::uint64_t s = 0;
            for (const Edge& e : es)
                s += e.count;
            if (s != total)
                return false;
        }
        return true;
    }

    inline bool strongly_connected(const TransitionGraph& g)
    {
        const std::size_t V = g.size();
        for (std::size_t s = 0; s < V; ++s)
        {
            std::vector<char> vis(V, 0);
            std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(s)};
            vis[s] = 1;
            std::size_t reached = 1;
            while (!stack.empty())
            {
                auto u = stack.back();
                stack.pop_back();
                for (const Edge& e : g.edges[u])
                    if (!vis[e.target])
                    {
                        vis[e.target] = 1;
                        ++reached;
                        stack.push_back(e.target);
                    }
            }
            if (reached != V)
                return false;
        }
        return true;
    }

    // Verifies that K applications of the all-zero letter collapse every node.
    inline unsigned synchronize_check(const TransitionGraph& g)
    {
        const unsigned K = sync_length(g.params.q, g.k);
        const Letter zero(g.k + 1, 0);
        for (const Node& n : g.nodes)
        {
            Node x = n;
            for (unsigned i = 0; i < K; ++i)
                x = delta(x, zero, g.params.q);
            ensure(x.is_zero(), "a node survives K zero letters");
        }
        return K;
    }

    inline std::string edge_list(const TransitionGraph& g)
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (const Edge& e : g.edges[i])
                os << i << ' ' << e.target << ' ' << e.phase << ' ' << e.count << '\n';
        return os.str();
    }

    enum class Variant
    {
        full,
        truncated
    };

    inline std::string to_string(Variant v) { return v == Variant::full ? "full" : "truncated"; }

    // A value N / denom with N an exact group-ring numerator.
    struct GowersValue
    {
        PhaseVector<BigInt> numer;
        BigInt denom = 1;

        std::complex<long double> value() const
        {
            // scale each coefficient separately so huge numerators never overflow
            std::complex<long double> z = 0;
            for (unsigned t = 0; t < numer.b; ++t)
            {
                long double a = 2 * std::numbers::pi_v<long double> *
                                ((static_cast<unsigned long long>(numer.ell) * t) % numer.b) / numer.b;
                long double c = Rational(numer.c[t], denom).convert_to<long double>();
                z += c * std::complex<long double>(std::cos(a), std::sin(a));
            }
            return z;
        }
    };

    inline PhaseVector<BigInt> base_value(const DigitParams& p, const Node& r, Variant v)
    {
        if (v == Variant::truncated)
            return PhaseVector<BigInt>::unit(p.b, p.ell, 0);
        long long t = 0;
        for (std::size_t w = 0; w < r.r.size(); ++w)
            t += cube_sign(w) * static_cast<long long>(digit_sum_u64(r.r[w], p.q));
        return PhaseVector<BigInt>::unit(p.b, p.ell, static_cast<unsigned>(mod_floor(t, p.b)));
    }

    // Numerators of A(rho, .) over every node of g, for rho = 0 .. rho_max.
    // Callback receives (rho, layer); the denominator is q^{(k+1) rho}.
    template <class Fn>
    void gowers_layers(const TransitionGraph& g, unsigned rho_max, Variant v, Fn&& fn)
    {
        std::vector<PhaseVector<BigInt>> cur(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            cur[i] = base_value(g.params, g.nodes[i], v);
        fn(0u, cur);
        for (unsigned rho = 1; rho <= rho_max; ++rho)
        {
            std::vector<PhaseVector<BigInt>> nxt(g.size(), PhaseVector<BigInt>(g.params.b, g.params.ell));
            for (std::size_t i = 0; i < g.size(); ++i)
                for (const Edge& e : g.edges[i])
                    nxt[i].add_shifted(cur[e.target], e.phase, BigInt(e.count));
            cur = std::move(nxt);
            fn(rho, cur);
        }
    }

    inline GowersValue gowers_average_recursive(const DigitParams& p, unsigned k, unsigned rho, const Node& r0,
                                                Variant v = Variant::full)
    {
        require(r0.k == k, "node dimension mismatch");
        TransitionGraph g = build_graph(p, k, {Node(k), r0});
        const std::uint32_t idx = g.find(r0);
        GowersValue out;
        gowers_layers(g, rho, v, [&](unsigned r, const std::vector<PhaseVector<BigInt>>& layer) {
            if (r == rho)
                out.numer = layer[idx];
        });
        out.denom = ipow_big(p.q, (k + 1) * rho);
        return out;
    }

    // Direct (k+1)-fold sum over n, h_0..h_{k-1} < q^rho.
    inline GowersValue gowers_average_brute(const DigitParams& p, unsigned k, unsigned rho, const Node& r0,
                                            Variant v = Variant::full, unsigned workers = 1)
    {
        require(r0.k == k, "node dimension mismatch");
        const std::uint64_t Q = ipow_u64(p.q, rho);
        const long double terms = std::pow(static_cast<long double>(Q), k + 1);
        Budget::brute().charge(terms, "gowers brute force");
        const std::size_t W = std::size_t(1) << k;
        const std::uint64_t H = ipow_u64(Q, k);
        const unsigned b = p.b;
        std::vector<std::vector<std::uint64_t>> partial(Q, std::vector<std::uint64_t>(b, 0));
        // parallel over h_0; each slot is an exact integer histogram
        parallel_for(Q, workers, [&](std::size_t h0) {
            std::vector<std::uint64_t> base(W);
            std::vector<std::uint64_t> h(k);
            std::vector<std::uint64_t>& hist = partial[h0];
            for (std::uint64_t rest = 0; rest < H / Q; ++rest)
            {
                h[0] = h0;
                std::uint64_t t = rest;
                for (unsigned i = 1; i < k; ++i)
                {
                    h[i] = t % Q;
                    t /= Q;
                }
                for (std::size_t w = 0; w < W; ++w)
                {
                    std::uint64_t s = r0.r[w];
                    for (unsigned i = 0; i < k; ++i)
                        if ((w >> i) & 1)
                            s += h[i];
                    base[w] = s;
                }
                for (std::uint64_t n = 0; n < Q; ++n)
                {
                    long long acc = 0;
                    for (std::size_t w = 0; w < W; ++w)
                    {
                        std::uint64_t x = n + base[w];
                        long long d = v == Variant::full ? digit_sum_u64(x, p.q) : digit_sum_u64(x % Q, p.q);
                        acc += cube_sign(w) * d;
                    }
                    ++hist[static_cast<unsigned>(mod_floor(acc, b))];
                }
            }
        });
        GowersValue out;
        out.numer = PhaseVector<BigInt>(b, p.ell);
        for (const auto& hist : partial)
            for (unsigned t = 0; t < b; ++t)
                out.numer.c[t] += hist[t];
        out.denom = ipow_big(p.q, (k + 1) * rho);
        return out;
    }

    struct KoPath
    {
        std::vector<Letter> letters;       // e^(0) .. e^(k)
        std::vector<Node> nodes;           // r^(0) .. r^(k+1) = 0
        std::vector<PhaseResidue> steps;   // residue of each step
        PhaseResidue total;
    };

    inline Letter ko_letter(unsigned q, unsigned k, unsigned t)
    {
        Letter e(k + 1, 0);
        if (t == 0)
        {
            e[0] = q - 1;
            e[1] = 1;
        }
        else if (t < k)
        {
            e[0] = q - 2;
            e[t + 1] = 1;
        }
        return e;
    }

    inline KoPath konieczny_path(const DigitParams& p, unsigned k)
    {
        require(k >= 2, "k must be at least 2");
        KoPath path;
        Node cur(k);
        path.nodes.push_back(cur);
        long long total = 0;
        for (unsigned t = 0; t <= k; ++t)
        {
            Letter e = ko_letter(p.q, k, t);
            Node nxt = delta(cur, e, p.q);
            Node expect(k);
            if (t + 1 <= k)
            {
                const std::size_t mask = (std::size_t(1) << (t + 1)) - 1;
                for (std::size_t w = 0; w < expect.r.size(); ++w)
                    expect.r[w] = (w & mask) == mask ? 1 : 0;
            }
            ensure(nxt == expect, "Konieczny path step lands on the wrong node");
            long long ph = static_cast<long long>(p.q) * s_tilde(nxt) - s_tilde(cur);
            path.steps.emplace_back(ph, p.b);
            total += ph;
            path.letters.push_back(e);
            path.nodes.push_back(nxt);
            cur = nxt;
        }
        path.total = PhaseResidue(total, p.b);
        const long long sgn = (k + 1) % 2 ? -1 : 1;  // (-1)^{k+1}
        ensure(s_tilde(path.nodes[k]) == sgn, "S~ of the last Konieczny node");
        ensure(path.steps[k - 1] == PhaseResidue(sgn * static_cast<long long>(p.q), p.b), "step k-1 weight");
        ensure(path.steps[k] == PhaseResidue(-sgn, p.b), "step k weight");
        ensure(path.total == PhaseResidue(sgn * (static_cast<long long>(p.q) - 1), p.b), "total Konieczny weight");
        return path;
    }

    // Residue of W(e) for the walk starting at r0.
    inline PhaseResidue walk_weight(const DigitParams& p, const Node& r0, const std::vector<Letter>& word)
    {
        Node cur = r0;
        long long s = 0;
        for (const Letter& e : word)
        {
            Node nxt = delta(cur, e, p.q);
            s += static_cast<long long>(p.q) * s_tilde(nxt) - s_tilde(cur);
            cur = std::move(nxt);
        }
        return PhaseResidue(s, p.b);
    }

    inline bool is_zero_letter(const Letter& e)
    {
        return std::all_of(e.begin(), e.end(), [](unsigned d) { return d == 0; });
    }

    // First position of a run of `len` zero letters, or npos.
    inline std::size_t first_zero_block(const std::vector<Letter>& word, std::size_t len)
    {
        std::size_t run = 0;
        for (std::size_t i = 0; i < word.size(); ++i)
        {
            run = is_zero_letter(word[i]) ? run + 1 : 0;
            if (run == len)
                return i + 1 - len;
        }
        return std::string::npos;
    }

    struct SwitchResult
    {
        std::vector<PhaseResidue> weights;  // W(phi_lambda(e)), lambda = 0 .. b-1
        PhaseVector<long long> sum;
    };

    // m is the 0-based start of the first block of K + b(k+1) zero letters.
    inline SwitchResult switching_cancellation(const DigitParams& p, unsigned k, const Node& r0,
                                               const std::vector<Letter>& word, std::size_t m)
    {
        const unsigned K = sync_length(p.q, k);
        const std::size_t len = K + static_cast<std::size_t>(p.b) * (k + 1);
        require(word.size() >= len, "word shorter than the switching block");
        require(first_zero_block(word, len) == m, "m is not the first zero block of the word");
        SwitchResult res;
        res.sum = PhaseVector<long long>(p.b, p.ell);
        for (unsigned lam = 0; lam < p.b; ++lam)
        {
            std::vector<Letter> g = word;
            for (std::size_t t = 0; t < lam * (k + 1); ++t)
                g[m + K + t] = ko_letter(p.q, k, static_cast<unsigned>(t % (k + 1)));
            PhaseResidue w = walk_weight(p, r0, g);
            res.weights.push_back(w);
            res.sum.c[w.t] += 1;
        }
        ensure(res.sum.is_zero(), "switched weights do not cancel");
        return res;
    }

    struct ContractionResult
    {
        unsigned K = 0;
        unsigned j = 0;
        unsigned long long exponent = 0;  // (k+1) j
        long double M = 0;
        long double gap = 0;             // 1 - M
        long double bound_gap = 0;       // q^{-(k+1) j}
        long double error = 0;           // rigorous float error bound on M
        std::uint32_t argmax = 0;
        bool exact = false;              // b = 2: M compared in integers
        bool certified = false;
    };

    namespace detail
    {
        template <class T>
        void contraction_rows(const TransitionGraph& g, unsigned j, std::vector<long double>& rowsum,
                              std::vector<long double>& rowerr, std::vector<BigInt>* exact, unsigned workers)
        {
            const unsigned b = g.params.b;
            const std::size_t V = g.size();
            const long double denom = std::pow(static_cast<long double>(g.params.q), (g.k + 1) * j);
            parallel_for(V, workers, [&](std::size_t r0) {
                std::vector<PhaseVector<T>> cur(V, PhaseVector<T>(b, g.params.ell)), nxt = cur;
                cur[r0].c[0] = 1;
                for (unsigned s = 0; s < j; ++s)
                {
                    for (auto& v : nxt)
                        std::fill(v.c.begin(), v.c.end(), T(0));
                    for (std::size_t u = 0; u < V; ++u)
                    {
                        const auto& cu = cur[u];
                        bool any = false;
                        for (unsigned t = 0; t < b; ++t)
                            any |= cu.c[t] != 0;
                        if (!any)
                            continue;
                        for (const Edge& e : g.edges[u])
                            nxt[e.target].add_shifted(cu, e.phase, T(e.count));
                    }
                    std::swap(cur, nxt);
                }
                long double sum = 0, mass = 0;
                BigInt ex = 0;
                for (std::size_t v = 0; v < V; ++v)
                {
                    sum += std::abs(cur[v].value(denom));
                    for (unsigned t = 0; t < b; ++t)
                        mass += std::abs(to_long_double(cur[v].c[t])) / denom;
                    if (exact)
                        ex += abs(BigInt(cur[v].c[0]) - BigInt(cur[v].c[1]));
                }
                rowsum[r0] = sum;
                rowerr[r0] = mass * 64 * b * std::numeric_limits<long double>::epsilon();
                if (exact)
                    (*exact)[r0] = ex;
            });
        }
    }

    inline ContractionResult contraction(const TransitionGraph& g, unsigned workers = 1)
    {
        const DigitParams& p = g.params;
        ContractionResult res;
        res.K = sync_length(p.q, g.k);
        res.j = res.K + p.b * (g.k + 1);
        res.exponent = static_cast<unsigned long long>(g.k + 1) * res.j;
        Budget::graph().charge(
            static_cast<long double>(g.size()) * ipow_u64(p.q, g.k + 1), "contraction step");
        const std::size_t V = g.size();
        std::vector<long double> rowsum(V), rowerr(V);
        std::vector<BigInt> exact;
        res.exact = p.b == 2;
        if (res.exact)
            exact.resize(V);
        const double bits = static_cast<double>(res.exponent) * std::log2(static_cast<double>(p.q));
        if (bits < 120)
            detail::contraction_rows<i128>(g, res.j, rowsum, rowerr, res.exact ? &exact : nullptr, workers);
        else
            detail::contraction_rows<BigInt>(g, res.j, rowsum, rowerr, res.exact ? &exact : nullptr, workers);
        for (std::size_t i = 0; i < V; ++i)
            if (rowsum[i] > rowsum[res.argmax])
                res.argmax = static_cast<std::uint32_t>(i);
        res.M = rowsum[res.argmax];
        res.error = *std::max_element(rowerr.begin(), rowerr.end());
        res.gap = 1 - res.M;
        res.bound_gap = std::pow(static_cast<long double>(p.q), -static_cast<long double>(res.exponent));
        if (res.exact)
        {
            BigInt denom = ipow_big(p.q, static_cast<unsigned>(res.exponent));
            BigInt worst = *std::max_element(exact.begin(), exact.end());
            res.certified = worst <= denom - 1;
        }
        else
        {
            res.certified = res.gap - res.error >= res.bound_gap;
        }
        ensure(res.certified, "contraction constant not certified below 1 - q^{-(k+1)j}");
        return res;
    }

    // v_rho = max_r |A(rho, r)| and |A(rho, 0)| for rho = 0 .. rho_max.
    struct DecayTable
    {
        std::vector<long double> v;
        std::vector<long double> at_zero;
    };

    inline DecayTable gowers_decay(const TransitionGraph& g, unsigned rho_max, Variant var)
    {
        DecayTable d;
        const std::uint32_t zero = g.find(Node(g.k));
        gowers_layers(g, rho_max, var, [&](unsigned rho, const std::vector<PhaseVector<BigInt>>& layer) {
            BigInt denom = ipow_big(g.params.q, (g.k + 1) * rho);
            long double best = 0, z = 0;
            for (std::size_t i = 0; i < layer.size(); ++i)
            {
                long double a = std::abs(GowersValue{layer[i], denom}.value());
                best = std::max(best, a);
                if (i == zero)
                    z = a;
            }
            d.v.push_back(best);
            d.at_zero.push_back(z);
        });
        return d;
    }
}
