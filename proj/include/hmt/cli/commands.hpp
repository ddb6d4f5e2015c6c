#ifndef HMT_CLI_COMMANDS_HPP
#define HMT_CLI_COMMANDS_HPP

#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmt/cli/config.hpp"
#include "hmt/hmt.hpp"
#include "hmt/suites.hpp"

namespace hmt::cli {

/// One report line. exit: 0 witness/verified, 1 exhausted/failed, 2 unknown at depth.
struct Record {
    json descriptor;
    std::string command;
    std::string status;
    int exit = 0;
    json result = json::object();
    json certificate = json::object();

    json to_json() const {
        return json{{"schema_version", schema_version}, {"command", command},         {"descriptor", descriptor},
                    {"status", status},                 {"exit", exit},               {"result", result},
                    {"certificate", certificate}};
    }
};

inline int exit_for(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return 0;
        case SearchStatus::exhausted: return 1;
        case SearchStatus::budget_exhausted: return 2;
    }
    return 2;
}

inline int exit_for(Verdict v) { return v == Verdict::holds ? 0 : v == Verdict::fails ? 1 : 2; }

// ---- element encodings --------------------------------------------------------

inline json points_json(const PointSet& p) {
    json a = json::array();
    for (auto i = p.find_first(); i != PointSet::npos; i = p.find_next(i)) a.push_back(i);
    return a;
}

inline json block_json(const Block& b) { return b.indices(); }

inline json elem_json(const Naturals&, std::uint64_t x) { return x; }
inline json elem_json(const FiniteSets&, const FinSet& f) { return f.elements(); }
inline json elem_json(const IndexedUnion&, const UnionElement& u) {
    return json{{"gens", FinSet::from_bits(u.gens).elements()}, {"points", points_json(u.value)}};
}

inline std::uint64_t elem_from(const Naturals&, const json& j) { return j.get<std::uint64_t>(); }
inline FinSet elem_from(const FiniteSets&, const json& j) {
    FinSet f;
    for (const auto& x : j) f.insert(x.get<unsigned>());
    return f;
}
inline UnionElement elem_from(const IndexedUnion& s, const json& j) {
    std::uint64_t gens = 0;
    for (const auto& i : j.at("gens")) gens |= std::uint64_t{1} << (i.get<unsigned>() - 1);
    auto u = s.from_gens(gens);
    PointSet v(s.universe());
    for (const auto& p : j.at("points")) v.set(p.get<std::size_t>());
    u.value = v;
    return u;
}

inline Block block_from(const json& j) { return Block(j.get<std::vector<std::size_t>>()); }

template <GroundSemigroup S>
Coloring<typename S::element_type> make_coloring(const ColoringDesc& c, const S& s, std::size_t arity,
                                                 std::uint64_t seed) {
    using E = typename S::element_type;
    if (c.kind == "constant") return constant_coloring<E>(arity);
    if (c.kind == "parity") return parity_coloring(s, arity);
    if (c.kind == "mod") return mod_coloring(s, arity, c.k);
    if (c.kind == "cardinality") return cardinality_coloring(s, arity);
    return seeded_hash_coloring(s, arity, c.k, c.seed.value_or(seed));
}

inline SearchBudget budget_of(const RunConfig& rc, std::uint64_t max_value, std::size_t max_blocks) {
    SearchBudget b;
    b.max_value = max_value;
    b.max_blocks = max_blocks;
    b.node_limit = rc.budget.at("node_limit").get<std::uint64_t>();
    b.parallelism = rc.budget.at("parallelism").get<unsigned>();
    return b;
}

template <class E>
json certificate_json(const std::vector<CertificateEntry<E>>& entries, const auto& s) {
    json a = json::array();
    for (const auto& e : entries) {
        json ms = json::array();
        for (const auto& x : e.members) ms.push_back(elem_json(s, x));
        a.push_back(json{{"members", ms}, {"color", e.color}});
    }
    return a;
}

template <class E>
json witness_json(const Witness<E>& w, const auto& s) {
    json blocks = json::array(), terms = json::array();
    for (const auto& b : w.blocks) blocks.push_back(block_json(b));
    for (const auto& t : w.terms) terms.push_back(elem_json(s, t));
    json out{{"blocks", blocks}, {"terms", terms}};
    out["color_vertex"] = w.color_vertex ? json(*w.color_vertex) : json(nullptr);
    out["color_edge"] = w.color_edge ? json(*w.color_edge) : json(nullptr);
    out["entries"] = certificate_json(w.certificate, s);
    return out;
}

template <GroundSemigroup S>
Witness<typename S::element_type> witness_from(const json& c, const S& s) {
    Witness<typename S::element_type> w;
    for (const auto& b : c.at("blocks")) w.blocks.push_back(block_from(b));
    for (const auto& t : c.at("terms")) w.terms.push_back(elem_from(s, t));
    if (!c.at("color_vertex").is_null()) w.color_vertex = c["color_vertex"].get<Color>();
    if (!c.at("color_edge").is_null()) w.color_edge = c["color_edge"].get<Color>();
    for (const auto& e : c.at("entries")) {
        CertificateEntry<typename S::element_type> ce;
        for (const auto& m : e.at("members")) ce.members.push_back(elem_from(s, m));
        ce.color = e.at("color").get<Color>();
        w.certificate.push_back(std::move(ce));
    }
    return w;
}

// ---- instances ------------------------------------------------------------------

inline ElementSequence<Naturals> naturals_base(const RunConfig& rc, std::size_t need) {
    const auto& b = rc.instance.at("base");
    std::vector<std::uint64_t> terms;
    if (b.empty()) {
        if (need > 63) throw ConfigError("$.instance.base", "default base 2^(i-1) overflows past 63 terms");
        for (std::size_t i = 0; i < need; ++i) terms.push_back(std::uint64_t{1} << i);
    } else {
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!b[i].is_number_unsigned() || b[i].get<std::uint64_t>() == 0)
                throw ConfigError("$.instance.base[" + std::to_string(i) + "]", "expected a positive integer");
            terms.push_back(b[i].get<std::uint64_t>());
        }
    }
    if (terms.size() < need) throw ConfigError("$.instance.base", "needs at least " + std::to_string(need) + " terms");
    return make_sequence(Naturals{}, terms);
}

inline ElementSequence<FiniteSets> fin_base(const RunConfig& rc, std::size_t need) {
    const auto& b = rc.instance.at("base");
    std::vector<FinSet> terms;
    if (b.empty()) {
        for (std::size_t i = 1; i <= need; ++i) terms.push_back(FinSet{static_cast<unsigned>(i)});
    } else {
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto p = "$.instance.base[" + std::to_string(i) + "]";
            if (!b[i].is_array() || b[i].empty()) throw ConfigError(p, "expected a nonempty array of elements");
            FinSet f;
            for (const auto& x : b[i]) {
                const auto v = x.get<std::uint64_t>();
                if (v < 1 || v > 64) throw ConfigError(p, "elements must lie in 1..64");
                f.insert(static_cast<unsigned>(v));
            }
            terms.push_back(f);
        }
    }
    if (terms.size() < need) throw ConfigError("$.instance.base", "needs at least " + std::to_string(need) + " terms");
    return make_sequence(FiniteSets{}, terms);
}

/// Seeded sets inside {1..6} (Fin) or values in {1..64} (naturals), when no base is given.
inline json random_base(const std::string& semigroup, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(mix64(seed));
    json a = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        if (semigroup == "naturals") {
            a.push_back(1 + rng() % 64);
            continue;
        }
        const std::uint64_t bits = 1 + rng() % 63;
        a.push_back(FinSet::from_bits(bits).elements());
    }
    return a;
}

struct PartitionInstance {
    DescendingCovers covers;
    PartitionRequest req;
    std::optional<CofiniteEncoding> cofinite;
};

inline PartitionInstance partition_instance(const RunConfig& rc) {
    PartitionInstance pi;
    const auto space = rc.text("space");
    const auto length = rc.size("length");
    const auto horizon = rc.size("horizon");
    try {
        if (space == "intervals") {
            std::size_t u = rc.size("universe");
            if (u == 0) u = std::max(horizon, length + 2);
            pi.covers = interval_covers(u, horizon, length);
        } else if (space == "discrete") {
            const auto k = rc.size("points");
            pi.covers = interval_covers(k + length + 2, k, length);
            pi.covers.name = "initial-segments";
        } else {
            pi.cofinite = encode_cofinite_example(rc.size("truncation"), rc.size("horizon_bits"));
            pi.covers = pi.cofinite->covers;
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("$.instance", e.what());
    }
    auto& req = pi.req;
    req.m = rc.size("m");
    auto kind = rc.text("target");
    if (!kind.empty()) kind[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(kind[0])));
    const auto target = cover_kind_from(kind);
    if (!target) throw ConfigError("$.instance.target", "unknown cover kind");
    req.target = space == "discrete" ? CoverKind::omega : *target;
    req.params.t = rc.size("t");
    req.params.s = rc.size("s");
    req.params.f = rc.size("f");
    const std::size_t d = rc.size("d");
    const auto edge = rc.coloring("coloring");
    const auto vertex = rc.coloring("vertex_coloring");
    if (pi.cofinite) {
        FiniteSets fin;
        if (edge) req.edge = transport_from_fin(make_coloring(*edge, fin, d, rc.seed));
        if (vertex) req.vertex = transport_from_fin(make_coloring(*vertex, fin, 1, rc.seed));
    } else {
        const auto s = union_semigroup(pi.covers);
        if (edge) req.edge = make_coloring(*edge, s, d, rc.seed);
        if (vertex) req.vertex = make_coloring(*vertex, s, 1, rc.seed);
    }
    if (!req.edge && !req.vertex) throw ConfigError("$.instance.coloring", "need an edge or a vertex coloring");
    if (req.edge && req.vertex && d != 2) throw ConfigError("$.instance.d", "vertex routing needs d = 2");
    return pi;
}

inline NatSubset residue_subset(const RunConfig& rc) {
    const auto mod = rc.size("modulus");
    std::vector<bool> keep(mod, false);
    const auto& rs = rc.instance.at("residues");
    if (rs.empty()) throw ConfigError("$.instance.residues", "no residues");
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (!rs[i].is_number_integer() || rs[i].get<std::int64_t>() < 0 || rs[i].get<std::size_t>() >= mod)
            throw ConfigError("$.instance.residues[" + std::to_string(i) + "]", "expected a residue below the modulus");
        keep[rs[i].get<std::size_t>()] = true;
    }
    std::string name = "residues mod " + std::to_string(mod);
    return {name, [keep, mod](unsigned x) { return keep[x % mod]; }};
}

inline Rational rational_of(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline std::string rational_str(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// ---- commands ---------------------------------------------------------------------

inline Record run_hindman(const RunConfig& rc) {
    Record r;
    const Naturals nat;
    const auto chi = make_coloring(*rc.coloring("coloring"), nat, 1, rc.seed);
    const auto res = hindman_search(chi, budget_of(rc, rc.size("horizon"), rc.size("m")));
    r.status = std::string(to_string(res.status));
    r.exit = exit_for(res.status);
    r.result = {{"nodes", res.nodes}, {"best_depth", res.best_depth}};
    if (res.witness) r.certificate = witness_json(*res.witness, nat);
    return r;
}

template <GroundSemigroup S>
Record run_mt_on(const RunConfig& rc, const ElementSequence<S>& base) {
    Record r;
    const auto& s = base.semigroup();
    const std::size_t d = rc.size("d");
    const auto chi = make_coloring(*rc.coloring("coloring"), s, d, rc.seed);
    MtOptions<typename S::element_type> opts;
    opts.require_proper = rc.flag("proper");
    if (auto v = rc.coloring("vertex_coloring")) {
        if (d != 2) throw ConfigError("$.instance.d", "vertex routing needs d = 2");
        opts.vertex_coloring = make_coloring(*v, s, 1, rc.seed);
    }
    const auto res = mt_search(chi, base, d, budget_of(rc, rc.size("horizon"), rc.size("m")), opts);
    r.status = std::string(to_string(res.status));
    r.exit = exit_for(res.status);
    r.result = {{"nodes", res.nodes}, {"best_depth", res.best_depth}};
    if (res.witness) r.certificate = witness_json(*res.witness, s);
    return r;
}

inline Record run_mt(const RunConfig& rc) {
    const auto n = rc.size("horizon");
    if (rc.text("semigroup") == "fin") return run_mt_on(rc, fin_base(rc, n));
    return run_mt_on(rc, naturals_base(rc, n));
}

inline json avoider_classes(const std::vector<Color>& col) {
    std::map<Color, std::vector<std::size_t>> by;
    for (std::size_t x = 1; x < col.size(); ++x) by[col[x]].push_back(x);
    std::string text;
    for (const auto& [c, xs] : by) {
        if (!text.empty()) text += "|";
        for (std::size_t i = 0; i < xs.size(); ++i) text += (i ? "," : "") + std::to_string(xs[i]);
    }
    return text;
}

inline Record run_threshold(const RunConfig& rc) {
    Record r;
    const auto res = threshold_search(rc.size("colors"), rc.size("m"), rc.flag("repeats"), rc.size("max_n"),
                                      rc.budget.at("node_limit").get<std::uint64_t>());
    r.status = std::string(to_string(res.status));
    r.exit = exit_for(res.status);
    r.result = {{"threshold", res.threshold}, {"lower_bound", res.lower_bound}, {"nodes", res.nodes}};
    if (res.status == SearchStatus::found) {
        r.result["avoider_table"] = avoider_classes(res.avoider);
        r.certificate = {{"avoider", std::vector<Color>(res.avoider.begin() + 1, res.avoider.end())}};
    }
    return r;
}

template <GroundSemigroup S>
Record run_collapse_on(const RunConfig& rc, const ElementSequence<S>& seq) {
    Record r;
    const auto res = proper_or_collapse(seq, rc.size("depth"), rc.size("m"), rc.budget.at("node_limit").get<std::uint64_t>());
    r.status = std::string(to_string(res.kind));
    r.exit = res.kind == Dichotomy::unknown ? 2 : 0;
    json seqj = json::array();
    for (std::size_t i = 1; i <= rc.size("depth"); ++i) seqj.push_back(elem_json(seq.semigroup(), seq.at(i)));
    r.result = {{"sequence", seqj}, {"nodes", res.nodes}};
    if (res.kind != Dichotomy::unknown) {
        json blocks = json::array();
        for (const auto& b : res.blocks) blocks.push_back(block_json(b));
        r.certificate = {{"kind", std::string(to_string(res.kind))}, {"blocks", blocks}};
        r.certificate["element"] = res.element ? elem_json(seq.semigroup(), *res.element) : json(nullptr);
    }
    return r;
}

inline RunConfig with_random_base(RunConfig rc) {
    if (rc.instance.at("base").empty())
        rc.instance["base"] = random_base(rc.text("semigroup"), rc.size("depth"), rc.seed);
    return rc;
}

inline Record run_collapse(const RunConfig& rc_in) {
    const auto rc = with_random_base(rc_in);
    const auto n = rc.size("depth");
    if (rc.text("semigroup") == "fin") return run_collapse_on(rc, fin_base(rc, n));
    return run_collapse_on(rc, naturals_base(rc, n));
}

inline Record run_filter_laws(const RunConfig& rc) {
    Record r;
    const auto rep = verify_duality_laws(rc.size("ground"), rc.budget.at("parallelism").get<unsigned>());
    json laws = json::array();
    for (const auto& l : rep.laws)
        laws.push_back({{"id", l.id},
                        {"name", l.name},
                        {"instances", l.instances},
                        {"violations", l.violations},
                        {"first_violation", l.first_violation}});
    r.status = rep.total_violations() == 0 ? "verified" : "failed";
    r.exit = rep.total_violations() == 0 ? 0 : 1;
    r.result = {{"families", rep.families_scanned},
                {"violations", rep.total_violations()},
                {"laws", laws},
                {"caveats", rep.caveats}};
    return r;
}

inline json chain_report_json(const ChainReport& c) {
    json mf = json::object();
    for (const auto& [n, m] : c.m_for) mf[std::to_string(n)] = m;
    return {{"verdict", std::string(to_string(c.verdict))},
            {"descending", std::string(to_string(c.descending))},
            {"freeness", std::string(to_string(c.freeness))},
            {"idempotence", std::string(to_string(c.idempotence))},
            {"m_for", mf},
            {"notes", c.notes}};
}

inline Record run_chain(const RunConfig& rc) {
    Record r;
    const auto depth = rc.size("depth");
    const auto look = rc.size("lookahead") == 0 ? depth + 1 : rc.size("lookahead");
    ChainReport rep;
    const auto kind = rc.text("chain");
    if (kind == "fs-tail") {
        const auto seq = naturals_base(rc, rc.size("horizon"));
        try {
            rep = chain_check(fs_tail_chain(seq, rc.size("horizon")), depth, Window::of(64), look);
        } catch (const improper_sequence_error& e) {
            r.status = "failed";
            r.exit = 1;
            r.result = {{"error", e.what()}};
            return r;
        }
    } else {
        const auto a = residue_subset(rc);
        const auto fam = kind == "progressions" ? progression_families(a)
                                                : density_families(a, rational_of(rc.text("delta")));
        try {
            auto chain = build_constrained_chain(a, fam, depth + look);
            rep = chain_check(chain, depth, constrained_sample(a, fam, depth + look),
                              Membership<FinSet>([](const FinSet&) { return true; }), look);
        } catch (const std::invalid_argument& e) {
            r.status = "failed";
            r.exit = 1;
            r.result = {{"error", e.what()}};
            return r;
        }
        if (kind == "density")
            r.result["density_of_A_at_64"] =
                rational_str(upper_density([a](std::uint64_t x) { return a.contains(static_cast<unsigned>(x)); }, 64).stage);
    }
    r.status = std::string(to_string(rep.verdict));
    r.exit = exit_for(rep.verdict);
    r.result["report"] = chain_report_json(rep);
    return r;
}

inline Record run_play(const RunConfig& rc) {
    Record r;
    const auto f = *filter_by_name(rc.text("filter"));
    const auto g = run_filter_game(f, static_cast<unsigned>(rc.size("alice")), rc.size("horizon"));
    const bool ok = g.legal && g.lost.empty();
    r.status = ok ? "verified" : "failed";
    r.exit = ok ? 0 : 1;
    r.result = {{"legal", g.legal}, {"error", g.error}, {"bob_wins_every_horizon", g.lost.empty()}, {"lost", g.lost}};
    r.certificate = {{"picks", g.picks}};
    return r;
}

inline Record run_transfer(const RunConfig& rc) {
    Record r;
    const auto horizon = rc.size("horizon"), t = rc.size("t"), rounds = rc.size("rounds");
    const auto depth = rc.size("depth"), prefix = rc.size("prefix");
    json conv = json::array(), diag = json::array();
    bool ok = true;
    for (std::size_t i = 1; i <= rc.size("instances"); ++i) {
        const std::uint64_t seed = rc.seed * 1000 + i;
        const auto c = run_convert(seed, horizon, t, rounds, 2 * prefix);
        ok = ok && c.preserved();
        conv.push_back({{"seed", seed},
                        {"legal", c.legal},
                        {"error", c.error},
                        {"gfin_lambda", c.fin_lambda},
                        {"collapsed_lambda", c.collapsed_lambda},
                        {"pointwise", c.pointwise},
                        {"gfin_multiplicity", c.fin_multiplicity},
                        {"collapsed_multiplicity", c.collapsed_multiplicity}});
        for (std::size_t n = 1; n <= depth; ++n) {
            const auto d = run_diagonal(seed, n, horizon, prefix);
            ok = ok && d.ok();
            json asc = json::array();
            for (auto v : d.asc) asc.push_back(std::string(to_string(v)));
            diag.push_back({{"seed", seed},
                            {"n", n},
                            {"asc", asc},
                            {"m", d.m},
                            {"fibers", d.fibers},
                            {"block_lengths", d.block_lengths},
                            {"surjective", d.surjective},
                            {"bounded", d.bounded},
                            {"error", d.error}});
        }
    }
    r.status = ok ? "verified" : "failed";
    r.exit = ok ? 0 : 1;
    r.result = {{"convert", conv}, {"diagonal", diag}};
    return r;
}

inline json partition_witness_json(const PartitionWitness& w, const std::optional<CofiniteEncoding>& e) {
    json blocks = json::array(), unions = json::array();
    for (const auto& b : w.blocks) blocks.push_back(block_json(b));
    for (const auto& u : w.unions) unions.push_back(points_json(u));
    json out{{"blocks", blocks}, {"unions", unions}, {"coverage", std::string(to_string(w.coverage))}};
    out["color_vertex"] = w.color_vertex ? json(*w.color_vertex) : json(nullptr);
    out["color_edge"] = w.color_edge ? json(*w.color_edge) : json(nullptr);
    if (e) {
        json dec = json::array();
        for (const auto& f : decode_witness(*e, w)) dec.push_back(f.elements());
        out["decoded"] = dec;
    }
    return out;
}

inline Record run_partition(const RunConfig& rc) {
    Record r;
    const auto pi = partition_instance(rc);
    const auto res = menger_mt_search(pi.covers, pi.req, budget_of(rc, pi.covers.length(), pi.req.m));
    r.status = std::string(to_string(res.status));
    r.exit = exit_for(res.status);
    r.result = {{"covers", pi.covers.name},
                {"universe", pi.covers.space.universe},
                {"horizon", pi.covers.space.horizon},
                {"target", std::string(to_string(pi.req.target))},
                {"nodes", res.nodes},
                {"best_depth", res.best_depth}};
    if (res.witness) r.certificate = partition_witness_json(*res.witness, pi.cofinite);
    return r;
}

inline Record run_encode(const RunConfig& rc) {
    Record r;
    CofiniteEncoding e;
    try {
        e = encode_cofinite_example(rc.size("truncation"), rc.size("horizon_bits"));
    } catch (const std::invalid_argument& ex) {
        throw ConfigError("$.instance.horizon_bits", ex.what());
    }
    // F -> O_F -> decode on every F, or on 1023 seeded F when there are more
    const std::uint64_t all = (std::uint64_t{1} << e.truncation) - 1;
    std::mt19937_64 rng(mix64(rc.seed));
    std::size_t checked = 0, bad = 0;
    for (std::uint64_t i = 1; i <= std::min<std::uint64_t>(all, 1023); ++i) {
        const std::uint64_t bits = all <= 1023 ? i : 1 + rng() % all;
        const auto f = FinSet::from_bits(bits);
        ++checked;
        bad += e.decode(e.o_of(f)) == f ? 0 : 1;
    }
    FiniteSets fin;
    const auto chi = make_coloring(*rc.coloring("coloring"), fin, 2, rc.seed);
    const auto rt = cofinite_round_trip(e, chi, rc.size("m"), rc.size("t"), budget_of(rc, e.truncation, rc.size("m")));
    const bool ok = bad == 0 && rt.match;
    r.status = ok ? "verified" : "failed";
    r.exit = ok ? 0 : 1;
    json dec = json::array(), direct = json::array();
    for (const auto& f : rt.decoded) dec.push_back(f.elements());
    if (rt.direct.witness)
        for (const auto& f : rt.direct.witness->terms) direct.push_back(f.elements());
    r.result = {{"universe", e.universe()},
                {"horizon_points", e.covers.space.horizon},
                {"decode_checked", checked},
                {"decode_failures", bad},
                {"menger_status", std::string(to_string(rt.menger.status))},
                {"direct_status", std::string(to_string(rt.direct.status))},
                {"menger_nodes", rt.menger.nodes},
                {"direct_nodes", rt.direct.nodes},
                {"match", rt.match},
                {"mismatch", rt.why}};
    r.certificate = {{"decoded_blocks", dec}, {"direct_blocks", direct}};
    return r;
}

inline Record run_verify(const RunConfig& rc);

inline Record run_command(const RunConfig& rc) {
    Record r;
    const auto& c = rc.command;
    if (c == "search-hindman") r = run_hindman(rc);
    else if (c == "search-mt") r = run_mt(rc);
    else if (c == "threshold") r = run_threshold(rc);
    else if (c == "proper-or-collapse") r = run_collapse(rc);
    else if (c == "verify-filter-laws") r = run_filter_laws(rc);
    else if (c == "chain-check") r = run_chain(rc);
    else if (c == "play-game") r = run_play(rc);
    else if (c == "game-transfer") r = run_transfer(rc);
    else if (c == "cover-partition") r = run_partition(rc);
    else if (c == "encode-classical") r = run_encode(rc);
    else if (c == "verify-report") r = run_verify(rc);
    else throw ConfigError("$.command", "unknown command '" + c + "'");
    r.command = c;
    r.descriptor = c == "proper-or-collapse" ? with_random_base(rc).descriptor() : rc.descriptor();
    return r;
}

// ---- verify-report -------------------------------------------------------------------

/// Re-checks one record. Witnesses go through the independent verifiers;
/// everything else is re-run from its descriptor and compared.
inline std::optional<std::string> verify_record(const json& rec) {
    if (!rec.is_object()) return "record is not an object";
    if (rec.value("schema_version", 0) != schema_version) return "unsupported schema_version";
    json d = rec.at("descriptor");
    const auto rc = parse_config(d);
    if (rc.command == "verify-report") return "nested verify-report records are not re-checked";
    const auto& cert = rec.at("certificate");
    const bool found = rec.at("status") == "found";
    const auto& c = rc.command;

    if (c == "search-hindman" && found) {
        const auto chi = make_coloring(*rc.coloring("coloring"), Naturals{}, 1, rc.seed);
        auto w = witness_from(cert, Naturals{});
        if (w.terms.size() != rc.size("m")) return "wrong number of terms";
        if (!verify_hindman_witness(chi, rc.size("horizon"), w)) return "Hindman witness does not verify";
        return std::nullopt;
    }
    if (c == "search-mt" && found) {
        std::string why;
        auto check = [&](const auto& base) -> std::optional<std::string> {
            const auto& s = base.semigroup();
            const auto d = rc.size("d");
            const auto chi = make_coloring(*rc.coloring("coloring"), s, d, rc.seed);
            std::optional<std::decay_t<decltype(chi)>> vertex;
            if (auto v = rc.coloring("vertex_coloring")) vertex = make_coloring(*v, s, 1, rc.seed);
            auto w = witness_from(cert, s);
            if (w.blocks.size() != rc.size("m")) return "wrong number of blocks";
            for (const auto& b : w.blocks)
                if (b.max() > rc.size("horizon")) return "block beyond the index bound";
            if (!verify_mt_witness(chi, base, d, w, rc.flag("proper"), vertex, &why)) return why;
            return std::nullopt;
        };
        if (rc.text("semigroup") == "fin") return check(fin_base(rc, rc.size("horizon")));
        return check(naturals_base(rc, rc.size("horizon")));
    }
    if (c == "proper-or-collapse" && rec.at("status") != "unknown-at-depth") {
        auto check = [&](const auto& seq) -> std::optional<std::string> {
            using E = typename std::decay_t<decltype(seq)>::element_type;
            CollapseResult<E> cr;
            cr.kind = cert.at("kind") == "proper" ? Dichotomy::proper : Dichotomy::collapse;
            for (const auto& b : cert.at("blocks")) cr.blocks.push_back(block_from(b));
            if (!cert.at("element").is_null()) cr.element = elem_from(seq.semigroup(), cert["element"]);
            if (!verify_collapse_result(seq, cr)) return "dichotomy certificate does not verify";
            return std::nullopt;
        };
        if (rc.text("semigroup") == "fin") return check(fin_base(rc, rc.size("depth")));
        return check(naturals_base(rc, rc.size("depth")));
    }
    if (c == "cover-partition" && found) {
        const auto pi = partition_instance(rc);
        PartitionWitness w;
        for (const auto& b : cert.at("blocks")) w.blocks.push_back(block_from(b));
        for (const auto& u : cert.at("unions")) {
            PointSet p(pi.covers.space.universe);
            for (const auto& x : u) {
                if (x.get<std::size_t>() >= p.size()) return "union point outside the universe";
                p.set(x.get<std::size_t>());
            }
            w.unions.push_back(p);
        }
        if (w.blocks.size() != pi.req.m) return "wrong number of blocks";
        std::string why;
        if (!verify_partition_witness(pi.covers, pi.req, w, &why)) return why;
        return std::nullopt;
    }
    if (c == "threshold" && found) {
        std::vector<Color> col{0};
        for (const auto& x : cert.at("avoider")) col.push_back(x.get<Color>());
        const auto n = rec.at("result").at("threshold").get<std::size_t>();
        if (col.size() != n) return "avoider length is not threshold - 1";
        for (std::size_t x = 1; x < col.size(); ++x)
            if (col[x] < 1 || col[x] > rc.size("colors")) return "avoider color out of range";
        if (!is_avoider(col, rc.flag("repeats"))) return "avoider has a monochromatic pattern";
        // minimality has no short certificate: re-run
    }
    const auto again = run_command(rc).to_json();
    for (const char* k : {"status", "exit", "result", "certificate"})
        if (again.at(k) != rec.at(k)) return std::string("re-run differs in ") + k;
    return std::nullopt;
}

inline Record run_verify(const RunConfig& rc) {
    Record r;
    const auto path = rc.text("report");
    if (path.empty()) throw ConfigError("$.instance.report", "missing report path");
    std::ifstream in(path);
    if (!in) throw ConfigError("$.instance.report", "cannot open '" + path + "'");
    std::size_t lines = 0, ok = 0;
    json failures = json::array();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++lines;
        std::optional<std::string> bad;
        std::string cmd = "?";
        try {
            const auto rec = parse_json_strict(line);
            if (rec.is_object() && rec.contains("command") && rec["command"].is_string()) cmd = rec["command"];
            bad = verify_record(rec);
        } catch (const std::exception& e) {
            bad = e.what();
        }
        if (bad) failures.push_back({{"line", lines}, {"command", cmd}, {"reason", *bad}});
        else ++ok;
    }
    const bool all = lines > 0 && ok == lines;
    r.status = all ? "verified" : "failed";
    r.exit = all ? 0 : 1;
    r.result = {{"records", lines}, {"verified", ok}, {"failures", failures}};
    return r;
}

// ---- output -----------------------------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

inline std::string format_record(const Record& r, const std::string& format) {
    const auto j = r.to_json();
    if (format == "jsonl") return j.dump() + "\n";
    std::ostringstream os;
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (format == "csv") {
        os << "section,key,value\n";
        os << "record,command," << csv_quote(r.command) << "\n";
        os << "record,status," << csv_quote(r.status) << "\n";
        os << "record,exit," << r.exit << "\n";
        for (const char* sec : {"result", "certificate"})
            for (auto it = j[sec].begin(); it != j[sec].end(); ++it)
                os << sec << "," << csv_quote(it.key()) << "," << csv_quote(scalar(it.value())) << "\n";
        return os.str();
    }
    os << r.command << "  [" << r.status << ", exit " << r.exit << "]\n";
    os << "  descriptor  " << r.descriptor.at("instance").dump() << "\n";
    for (const char* sec : {"result", "certificate"}) {
        if (j[sec].empty()) continue;
        os << sec << "\n";
        std::size_t w = 0;
        for (auto it = j[sec].begin(); it != j[sec].end(); ++it) w = std::max(w, it.key().size());
        for (auto it = j[sec].begin(); it != j[sec].end(); ++it)
            os << "  " << it.key() << std::string(w - it.key().size() + 2, ' ') << scalar(it.value()) << "\n";
    }
    return os.str();
}

}  // namespace hmt::cli

#endif
