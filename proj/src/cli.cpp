// Copyright 2026 The gpylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gpylab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "gpylab/analytic.hpp"
#include "gpylab/csv.hpp"
#include "gpylab/dist_level.hpp"
#include "gpylab/errors.hpp"
#include "gpylab/gaps.hpp"
#include "gpylab/segment_cache.hpp"
#include "gpylab/sieve.hpp"
#include "gpylab/tuples.hpp"
#include "gpylab/weights.hpp"

namespace gpylab::cli {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (const auto& s : out) require(!s.empty(), fmt::format("empty item in list '{}'", text));
    return out;
}

std::uint64_t parse_count(std::string_view text) {
    const auto q = analytic::parse_rational(text);
    require(q.get_den() == 1, fmt::format("'{}' is not an integer", text));
    require(q >= 0, fmt::format("'{}' must be non-negative", text));
    require(q.get_num().fits_ulong_p(), fmt::format("'{}' is too large", text));
    return q.get_num().get_ui();
}

std::int64_t parse_int(std::string_view text) {
    const auto q = analytic::parse_rational(text);
    require(q.get_den() == 1, fmt::format("'{}' is not an integer", text));
    require(q.get_num().fits_slong_p(), fmt::format("'{}' is out of range", text));
    return q.get_num().get_si();
}

double parse_real(std::string_view text) { return analytic::to_double(analytic::parse_rational(text)); }

namespace {

// String-valued options of one subcommand, converted on use.
class Options {
  public:
    explicit Options(CLI::App* app) : app_(app) {}

    void add(const std::string& name, const std::string& help, std::string def = {}) {
        values_[name] = std::move(def);
        app_->add_option("--" + name, values_[name], help);
    }
    void flag(const std::string& name, const std::string& help) {
        flags_[name] = false;
        app_->add_flag("--" + name, flags_[name], help);
    }

    bool has(const std::string& name) const { return !values_.at(name).empty(); }
    const std::string& str(const std::string& name) const {
        const auto& v = values_.at(name);
        require(!v.empty(), fmt::format("--{} is required", name));
        return v;
    }
    std::uint64_t count(const std::string& name) const { return parse_count(str(name)); }
    std::int64_t integer(const std::string& name) const { return parse_int(str(name)); }
    double real(const std::string& name) const { return parse_real(str(name)); }
    analytic::Rational rational(const std::string& name) const { return analytic::parse_rational(str(name)); }
    bool on(const std::string& name) const { return flags_.at(name); }

    std::vector<std::uint64_t> counts(const std::string& name) const {
        std::vector<std::uint64_t> v;
        for (const auto& s : split_list(str(name))) v.push_back(parse_count(s));
        return v;
    }
    std::vector<double> reals(const std::string& name) const {
        std::vector<double> v;
        for (const auto& s : split_list(str(name))) v.push_back(parse_real(s));
        return v;
    }
    std::vector<analytic::Rational> rationals(const std::string& name) const {
        std::vector<analytic::Rational> v;
        for (const auto& s : split_list(str(name))) v.push_back(analytic::parse_rational(s));
        return v;
    }
    tuples::Tuple tuple(const std::string& name) const {
        std::vector<std::int64_t> v;
        for (const auto& s : split_list(str(name))) v.push_back(parse_int(s));
        return tuples::Tuple::from_unsorted(std::move(v));
    }

  private:
    CLI::App* app_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> flags_;
};

struct Context {
    unsigned workers = 1;
    std::unique_ptr<sieve::SegmentCache> cache;
    weights::Budget budget;

    sieve::SieveOptions sieve_opts() const {
        sieve::SieveOptions o;
        o.workers = workers;
        o.cache = cache.get();
        return o;
    }
    weights::ComputeOptions compute_opts() const {
        weights::ComputeOptions o;
        o.workers = workers;
        o.budget = budget;
        o.sieve = sieve_opts();
        return o;
    }
};

struct Command {
    CLI::App* app = nullptr;
    std::unique_ptr<Options> opts;
    std::function<void(const Options&, const Context&, std::ostream&)> body;
};

// floor(N^e), nudged so exact powers are not lost to rounding.
std::uint64_t r_from_exponent(std::uint64_t N, double e) {
    require(e > 0.0 && e < 1.0, "--R-exp must lie in (0, 1)");
    const double v = std::pow(static_cast<double>(N), e);
    return static_cast<std::uint64_t>(std::floor(v * (1.0 + 1e-12)));
}

weights::GpyConfig gpy_config(const Options& o, int k) {
    weights::GpyConfig cfg;
    cfg.N = o.count("N");
    cfg.k = k;
    cfg.l = static_cast<int>(o.integer("l"));
    require(o.has("R") != o.has("R-exp"), "give exactly one of --R and --R-exp");
    cfg.R = o.has("R") ? o.count("R") : r_from_exponent(cfg.N, o.real("R-exp"));
    cfg.delta = o.real("delta");
    if (o.has("h")) cfg.h = o.count("h");
    cfg.validate();
    return cfg;
}

void add_gpy_options(Options& o) {
    o.add("N", "range (N, 2N]");
    o.add("l", "extra power l", "0");
    o.add("R", "divisor cutoff R");
    o.add("R-exp", "R = floor(N^e)");
    o.add("delta", "rough-number exponent", "0.25");
    o.add("h", "window length");
}

void write_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

std::vector<Command> make_commands(CLI::App& app) {
    std::vector<Command> cmds;
    auto add = [&](const std::string& name, const std::string& help) -> Command& {
        Command c;
        c.app = app.add_subcommand(name, help);
        c.opts = std::make_unique<Options>(c.app);
        cmds.push_back(std::move(c));
        return cmds.back();
    };

    {
        auto& c = add("sieve", "prime count and theta sum up to x");
        c.opts->add("x", "upper bound");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            csv::write_preamble(out, "sieve", 1, {"x", "prime_count", "theta", "theta_minus_x"});
            for (auto x : o.counts("x")) {
                const double th = sieve::theta_sum(x, ctx.sieve_opts());
                csv::write_row(out, x, sieve::prime_count(x, ctx.sieve_opts()), th, th - static_cast<double>(x));
            }
        };
    }
    {
        auto& c = add("gaps", "gap histogram, small-gap counts or sparsity ratios");
        c.opts->add("mode", "histogram | small | sparsity", "histogram");
        c.opts->add("x", "range top");
        c.opts->add("N", "range (N, 2N] for small mode");
        c.opts->add("edges", "histogram bin edges");
        c.opts->add("eta", "eta values (threshold eta log N or eta log x)");
        c.opts->add("h", "absolute thresholds for sparsity mode");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            const std::string mode = o.str("mode");
            if (mode == "histogram") {
                std::vector<double> edges;
                if (o.has("edges")) {
                    edges = o.reals("edges");
                } else {
                    for (int i = 1; i <= 50; ++i) edges.push_back(i / 10.0);
                }
                gaps::write_histogram_csv(out, gaps::gap_histogram(o.count("x"), edges, ctx.sieve_opts()));
            } else if (mode == "small") {
                const auto N = o.count("N");
                const auto etas = o.reals("eta");
                std::vector<std::uint64_t> counts;
                for (double e : etas) counts.push_back(gaps::small_gap_count(N, e, ctx.sieve_opts()));
                gaps::write_small_gaps_csv(out, N, etas, counts);
            } else if (mode == "sparsity") {
                const auto x = o.count("x");
                std::vector<double> hs;
                if (o.has("h")) hs = o.reals("h");
                if (o.has("eta")) {
                    for (double e : o.reals("eta")) hs.push_back(e * std::log(static_cast<double>(x)));
                }
                require(!hs.empty(), "sparsity mode needs --h or --eta");
                std::vector<gaps::SparsityReport> rows;
                for (double h : hs) rows.push_back(gaps::sparsity_ratio(x, h, ctx.sieve_opts()));
                gaps::write_sparsity_csv(out, rows);
            } else {
                throw PreconditionError(fmt::format("unknown gaps mode '{}'", mode));
            }
        };
    }
    {
        auto& c = add("explaw", "empirical gap fractions against 1 - exp(-eta)");
        c.opts->add("x", "range top");
        c.opts->add("eta", "eta values");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            gaps::write_gaps_csv(out, gaps::exponential_law_table(o.count("x"), o.reals("eta"), ctx.sieve_opts()));
        };
    }
    {
        auto& c = add("qcount", "Q(N, h) with the exact charging inequality");
        c.opts->add("N", "range (N, 2N]");
        c.opts->add("h", "window lengths");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            std::vector<gaps::QCountReport> rows;
            for (auto h : o.counts("h")) rows.push_back(gaps::q_count(o.count("N"), h, ctx.sieve_opts()));
            gaps::write_qcount_csv(out, rows);
        };
    }
    {
        auto& c = add("pairs", "prime pairs n + h1, n + h2 in (N, 2N]");
        c.opts->add("N", "range (N, 2N]");
        c.opts->add("h1", "first shift", "0");
        c.opts->add("h2", "second shift");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            std::vector<gaps::PairReport> rows;
            for (auto N : o.counts("N")) {
                rows.push_back(gaps::prime_pair_count(N, o.integer("h1"), o.integer("h2"), ctx.sieve_opts()));
            }
            gaps::write_pairs_csv(out, rows);
        };
    }
    {
        auto& c = add("moments", "second moment of the weights, or the prime-twisted moment with --h0");
        add_gpy_options(*c.opts);
        c.opts->add("tuple", "offsets, e.g. 0,2");
        c.opts->add("h0", "twist shift");
        c.opts->add("method", "per_d | per_n", "per_d");
        c.opts->flag("restricted", "restrict to rough n");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            const auto H = o.tuple("tuple");
            auto cfg = gpy_config(o, H.k());
            const std::string m = o.str("method");
            require(m == "per_d" || m == "per_n", "--method must be per_d or per_n");
            const auto method = m == "per_d" ? weights::Method::per_d_sieve : weights::Method::per_n_oracle;
            if (o.has("h0")) {
                const auto h0 = o.integer("h0");
                if (!o.has("h")) cfg.h = static_cast<std::uint64_t>(std::max<std::int64_t>(h0, 1));
                std::vector<weights::MomentReport> rows{
                    weights::twisted_moment(H, h0, cfg, o.on("restricted"), method, ctx.compute_opts())};
                weights::write_twisted_csv(out, rows);
            } else {
                std::vector<weights::MomentReport> rows{
                    weights::second_moment(H, cfg, o.on("restricted"), method, ctx.compute_opts())};
                weights::write_moments_csv(out, rows);
            }
        };
    }
    {
        auto& c = add("stilde", "the diagonal statistic over admissible k-subsets of [1, h]");
        add_gpy_options(*c.opts);
        c.opts->add("k", "tuple size");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            const auto cfg = gpy_config(o, static_cast<int>(o.integer("k")));
            require(o.has("h"), "--h is required");
            std::vector<weights::STildeReport> rows{weights::s_tilde(cfg, ctx.compute_opts())};
            weights::write_stilde_csv(out, rows);
        };
    }
    {
        auto& c = add("gallagher", "k! times the sum of singular series over k-subsets of [1, h]");
        c.opts->add("k", "tuple size");
        c.opts->add("h", "window lengths");
        c.opts->add("P", "Euler product bound", "1e6");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            tuples::GallagherOptions g;
            g.workers = ctx.workers;
            std::vector<tuples::GallagherResult> rows;
            for (auto h : o.counts("h")) {
                rows.push_back(tuples::gallagher_sum(static_cast<int>(o.integer("k")), h, o.count("P"), g));
            }
            tuples::write_gallagher_csv(out, rows);
        };
    }
    {
        auto& c = add("singular", "singular series of a tuple");
        c.opts->add("tuple", "offsets");
        c.opts->add("P", "Euler product bound", "1e6");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            const auto H = o.tuple("tuple");
            const auto s = tuples::singular_series(H, o.count("P"));
            csv::write_preamble(out, "singular", 1, {"tuple", "P", "value", "tail_log_bound", "exact_zero"});
            csv::write_row(out, H.to_string(), s.truncation_bound, s.value, s.tail_log_bound, s.exact_zero);
        };
    }
    {
        auto& c = add("bv", "summed maximal error of theta in progressions");
        c.opts->add("x", "range tops");
        c.opts->add("Q", "fixed modulus bound");
        c.opts->add("q-exp", "Q = x^e / (log x)^B: e", "0.5");
        c.opts->add("q-logpow", "Q = x^e / (log x)^B: B", "3");
        c.opts->add("A", "log powers for normalized columns", "1,2");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            const auto xs = o.counts("x");
            const auto powers = o.reals("A");
            if (o.has("Q")) {
                dist::BvTable t;
                t.powers = powers;
                for (auto x : xs) {
                    dist::BvRow row;
                    row.x = x;
                    row.Q = o.count("Q");
                    row.bv = dist::bv_sum(x, row.Q, ctx.sieve_opts());
                    const double lx = std::log(static_cast<double>(x));
                    for (double A : powers) row.normalized.push_back(row.bv * std::pow(lx, A) / static_cast<double>(x));
                    t.rows.push_back(row);
                }
                dist::write_bv_csv(out, t);
            } else {
                dist::QRule rule{o.real("q-exp"), o.real("q-logpow")};
                dist::write_bv_csv(out, dist::bv_decay_table(xs, rule, powers, ctx.sieve_opts()));
            }
        };
    }
    {
        auto& c = add("identity", "exact polynomial identities and the D(k,r) inequality");
        c.opts->add("kind", "tq1 | expansion | check315", "tq1");
        c.opts->add("k", "k values");
        c.opts->add("alpha", "alpha values", "1/2,-1/2,1/3,-1/3,1/7,2/5");
        c.opts->add("u", "u values for check315", "1/10,1/2,1,2,10");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            const std::string kind = o.str("kind");
            std::vector<std::uint64_t> ks;
            if (o.has("k")) {
                ks = o.counts("k");
            } else if (kind == "check315") {
                ks = {2, 3, 4};
            } else {
                ks = {1, 2, 3, 4, 5, 6, 7, 8};
            }
            if (kind == "tq1") {
                std::vector<analytic::IdentityRow> rows;
                for (auto k : ks) {
                    for (int l = 0; l <= std::min<int>(4, static_cast<int>(k) - 1); ++l) {
                        for (const auto& a : o.rationals("alpha")) {
                            rows.push_back({static_cast<int>(k), l, a, analytic::t_q1(static_cast<int>(k), l, a)});
                        }
                    }
                }
                analytic::write_identity_csv(out, rows);
            } else if (kind == "expansion") {
                std::vector<analytic::ExpansionCoeffs> rows;
                for (auto k : ks) {
                    for (int l = 0; l <= std::min<int>(4, static_cast<int>(k) - 1); ++l) {
                        rows.push_back(analytic::expansion_coeffs(static_cast<int>(k), l));
                    }
                }
                analytic::write_expansion_csv(out, rows);
            } else if (kind == "check315") {
                csv::write_preamble(out, "check315", 1, {"k", "u", "lhs", "rhs", "holds"});
                for (auto k : ks) {
                    for (const auto& u : o.rationals("u")) {
                        const auto c = analytic::check_315(static_cast<int>(k), u);
                        csv::write_row(out, k, analytic::to_string(u), analytic::to_string(c.lhs),
                                       analytic::to_string(c.rhs), c.holds);
                    }
                }
            } else {
                throw PreconditionError(fmt::format("unknown identity kind '{}'", kind));
            }
        };
    }
    {
        auto& c = add("dkr", "D(k,r) formula against exhaustive enumeration");
        c.opts->add("k", "k values", "2,3");
        c.opts->add("h", "enumeration window (default k + r + 2)");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            std::vector<analytic::DkrReport> rows;
            for (auto k : o.counts("k")) {
                for (int r = 0; r <= static_cast<int>(k) + 2; ++r) {
                    const int h = o.has("h") ? static_cast<int>(o.count("h")) : static_cast<int>(k) + r + 2;
                    rows.push_back(analytic::dkr_report(static_cast<int>(k), r, h));
                }
            }
            analytic::write_dkr_csv(out, rows);
        };
    }
    {
        auto& c = add("params-uncond", "unconditional parameter selection");
        c.opts->add("eta", "eta");
        c.opts->add("error-multiplier", "multiplier on k^3 delta^2", "1");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            write_json(out, analytic::to_json(analytic::select_unconditional(o.rational("eta"), o.real("error-multiplier"))));
        };
    }
    {
        auto& c = add("params-cond", "minimal k under a level of distribution theta");
        c.opts->add("theta", "theta");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            const auto s = analytic::select_conditional(o.rational("theta"));
            nlohmann::json j;
            j["kind"] = "conditional";
            j["theta"] = analytic::to_double(s.theta);
            j["theta_exact"] = analytic::to_string(s.theta);
            j["k"] = s.k;
            j["l"] = s.l;
            j["value"] = analytic::to_double(s.value);
            j["value_exact"] = analytic::to_string(s.value);
            j["labels"] = {"c5(theta)"};
            write_json(out, j);
        };
    }
    {
        auto& c = add("params-xi", "parameters for theta = 1/2 + xi");
        c.opts->add("xi", "xi");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            write_json(out, analytic::to_json(analytic::xi_regime(o.rational("xi"))));
        };
    }
    {
        auto& c = add("params-eh", "two-shift parameters at level of distribution 1");
        c.opts->add("eta", "eta");
        c.body = [](const Options& o, const Context&, std::ostream& out) {
            write_json(out, analytic::to_json(analytic::eh_two_shift(o.rational("eta"))));
        };
    }
    {
        auto& c = add("fourth", "fourth moment of the summed weights");
        add_gpy_options(*c.opts);
        c.opts->add("k", "tuple size");
        c.body = [](const Options& o, const Context& ctx, std::ostream& out) {
            const auto cfg = gpy_config(o, static_cast<int>(o.integer("k")));
            std::vector<weights::FourthMomentReport> rows{weights::fourth_moment_probe(cfg, ctx.compute_opts())};
            weights::write_fourth_csv(out, rows);
        };
    }
    return cmds;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"gpylab: prime-gap sieve-weight laboratory"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_path, cache_dir, threads = "1", max_R, max_work, max_tuples;
    if (const char* env = std::getenv(kCacheEnv)) cache_dir = env;
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--cache-dir", cache_dir, std::string("segment cache directory (env ") + kCacheEnv + ")");
    app.add_option("--max-R", max_R, "cap on R");
    app.add_option("--max-work", max_work, "cap on N (log R)^k");
    app.add_option("--max-tuples", max_tuples, "cap on enumerated tuples");

    auto commands = make_commands(app);

    auto* cache_cmd = app.add_subcommand("cache", "segment cache control");
    std::string verb, cache_lo = "1", cache_hi;
    bool cache_spf = false;
    cache_cmd->add_option("verb", verb, "status | clear | prewarm")->required();
    cache_cmd->add_option("--lo", cache_lo, "prewarm start");
    cache_cmd->add_option("--hi", cache_hi, "prewarm end (exclusive)");
    cache_cmd->add_flag("--spf", cache_spf, "also store smallest-prime-factor tables");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gpylab: " << e.what() << '\n';
        return kExitUsage;
    }

    std::ostringstream buf;
    int code = kExitOk;
    try {
        Context ctx;
        ctx.workers = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_count(threads)));
        if (!max_R.empty()) ctx.budget.max_R = parse_count(max_R);
        if (!max_work.empty()) ctx.budget.max_work = parse_real(max_work);
        if (!max_tuples.empty()) ctx.budget.max_tuples = parse_count(max_tuples);
        if (!cache_dir.empty()) ctx.cache = std::make_unique<sieve::SegmentCache>(cache_dir);

        if (cache_cmd->parsed()) {
            require(ctx.cache != nullptr, "cache commands need --cache-dir or " + std::string(kCacheEnv));
            if (verb == "clear") {
                csv::write_preamble(buf, "cache_clear", 1, {"dir", "removed"});
                csv::write_row(buf, ctx.cache->dir().string(), static_cast<std::uint64_t>(ctx.cache->clear()));
            } else if (verb == "status" || verb == "prewarm") {
                if (verb == "prewarm") {
                    require(!cache_hi.empty(), "prewarm needs --hi");
                    const auto lo = parse_count(cache_lo), hi = parse_count(cache_hi);
                    require(lo >= 1 && lo < hi, "prewarm needs 1 <= lo < hi");
                    ctx.cache->prewarm(lo, hi, cache_spf, ctx.sieve_opts());
                }
                csv::write_preamble(buf, "cache_status", 1, {"lo", "hi", "has_spf"});
                for (const auto& e : ctx.cache->status()) csv::write_row(buf, e.lo, e.hi, e.has_spf);
            } else {
                throw PreconditionError(fmt::format("unknown cache verb '{}'", verb));
            }
        } else {
            for (const auto& c : commands) {
                if (c.app->parsed()) c.body(*c.opts, ctx, buf);
            }
        }
    } catch (const PreconditionError& e) {
        err << "gpylab: precondition violated: " << e.what() << '\n';
        code = kExitPrecondition;
    } catch (const BudgetExceeded& e) {
        err << "gpylab: budget exceeded: " << e.what() << '\n';
        code = kExitBudget;
    } catch (const std::exception& e) {
        err << "gpylab: error: " << e.what() << '\n';
        code = kExitFailure;
    }

    if (code == kExitOk) {
        if (out_path.empty() || out_path == "-") {
            out << buf.str();
        } else {
            std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
            f << buf.str();
            if (!f) {
                err << "gpylab: cannot write " << out_path << '\n';
                return kExitFailure;
            }
        }
    }
    if (!out_path.empty() && out_path != "-") {
        std::ofstream log(out_path + ".log", std::ios::app);
        log << timestamp() << " exit=" << code << " args:";
        for (const auto& a : args) log << ' ' << a;
        log << '\n';
    }
    return code;
}

}  // namespace gpylab::cli
