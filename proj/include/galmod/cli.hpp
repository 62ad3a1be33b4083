#pragma once

// Command-line surface: monoid, verify, spectrum and ingest subcommands with
// TSV (default) or JSON reports. Exit codes: 0 pass, 2 check failure,
// 64 usage, 65 capacity, 66 data.

#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "galmod/monoid.hpp"
#include "galmod/shift_lattices.hpp"
#include "galmod/spectrum.hpp"
#include "galmod/tate.hpp"

namespace galmod::cli {

using Json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 2;
inline constexpr int exit_usage = 64;
inline constexpr int exit_capacity = 65;
inline constexpr int exit_data = 66;

inline constexpr int unit_transport_precision = 1000;

struct usage_error : error { using error::error; };
struct data_error : error { using error::error; };

/// "9", "3,6"; "1" is the trivial group.
inline FinAbGroup parse_group_spec(const std::string& spec)
{
    static const std::regex grammar("[0-9]+(,[0-9]+)*");
    if (!std::regex_match(spec, grammar))
        throw usage_error("malformed group spec '" + spec + "'");
    std::vector<i64> factors;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.size() > 12)
            throw usage_error("invariant factor too large in '" + spec + "'");
        factors.push_back(std::stoll(part));
    }
    if (factors == std::vector<i64>{1})
        return FinAbGroup{};
    try {
        return make_group(factors);
    } catch (const invalid_factor_error& e) {
        throw usage_error(e.what());
    }
}

inline Json int_json(const Int& v)
{
    if (v.fits_slong_p())
        return Json(v.get_si());
    return Json(v.get_str());
}

inline std::string element_label(const GroupElement& x)
{
    std::string s = "(";
    for (std::size_t k = 0; k < x.size(); ++k)
        s += (k ? "," : "") + std::to_string(x[k]);
    return s + ")";
}

inline std::string subgroup_label(const Subgroup& h)
{
    std::string s = "<";
    auto gens = generators(h);
    for (std::size_t k = 0; k < gens.size(); ++k)
        s += (k ? "," : "") + element_label(gens[k]);
    return s + ">";
}

inline Json report(const std::string& command, Json config, Json results, bool passed)
{
    Json out;
    out["command"] = command;
    out["config"] = std::move(config);
    out["results"] = std::move(results);
    out["verdict"] = passed ? "PASS" : "FAIL";
    return out;
}

namespace detail {

inline std::string scalar_text(const Json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    return v.dump();
}

inline void flatten(const Json& v, const std::string& path, std::ostream& out)
{
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (v.is_array()) {
        bool scalars = std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_primitive(); });
        if (scalars) {
            std::string s;
            for (std::size_t k = 0; k < v.size(); ++k)
                s += (k ? "," : "") + scalar_text(v[k]);
            out << path << '\t' << s << '\n';
        } else {
            for (std::size_t k = 0; k < v.size(); ++k)
                flatten(v[k], path + "[" + std::to_string(k) + "]", out);
        }
    } else {
        out << path << '\t' << scalar_text(v) << '\n';
    }
}

} // namespace detail

/// One "path<TAB>value" line per leaf, in key order.
inline std::string to_tsv(const Json& r)
{
    std::ostringstream out;
    detail::flatten(r, "", out);
    return out.str();
}

inline std::string render(const Json& r, bool json) { return json ? r.dump(2) + "\n" : to_tsv(r); }

// ---- monoid ----

inline Json injectivity_json(const BoundedInjectivity& b)
{
    Json j;
    j["bound"] = b.bound;
    j["method"] = b.by_basis ? "basis" : "search";
    j["completed"] = b.completed;
    j["vectors_checked"] = b.vectors_checked;
    j["injective"] = b.injective;
    j["certified"] = b.certified();
    if (!b.injective) {
        j["witness_a"] = b.witness_a;
        j["witness_b"] = b.witness_b;
    }
    return j;
}

inline Json cmd_monoid(const FinAbGroup& g, int bound_b)
{
    FreenessReport r = analyze_monoid(g, bound_b);
    MonoidSets m = build_sets(g);
    Json res;
    res["order"] = g.order();
    res["s_tilde"] = r.s_tilde_count;
    res["s"] = r.s_count;
    res["s_prime"] = r.s_prime_count;
    res["s_double_prime"] = r.s_double_prime_count;
    res["t"] = r.t_count;
    Json sp = Json::array();
    for (auto const& [p, c] : r.s_p_counts)
        sp.push_back(Json{{"p", p}, {"count", c}});
    res["s_p"] = sp;
    if (g.is_cyclic()) {
        CardinalityFormulas f = cardinality_formulas(g);
        res["formula_s"] = int_json(f.s);
        res["formula_t"] = int_json(f.t);
        res["formulas_match"] = f.s == Int(static_cast<unsigned long>(r.s_count)) &&
                                f.t == Int(static_cast<unsigned long>(r.t_count));
    }
    res["decompositions_checked"] = r.decompositions_checked;
    res["decompositions_hold"] = r.decompositions_hold;
    res["beta_injective_on_s_prime"] = r.beta_injective_on_s_prime;
    res["irreducible"] = r.irreducible_count;
    res["s_prime_irreducible"] = r.all_s_prime_irreducible;
    res["s_minus_s_prime_reducible"] = r.rest_reducible;
    res["beta_prime_injectivity"] = injectivity_json(r.beta_prime_injectivity);
    res["beta_double_prime_injectivity"] = injectivity_json(r.beta_double_prime_injectivity);
    res["subgroup_recovery"] = r.subgroup_recovery;
    res["expected_free"] = r.expected_free;
    res["verdict"] = to_string(r.verdict);
    res["rank"] = r.rank;
    Json beta_rows = Json::array();
    for (std::size_t k = 0; k < m.s.size(); ++k) {
        Json entries = Json::array();
        for (auto const& [t, c] : r.beta_values[k].entries)
            entries.push_back(std::to_string(t) + ":" + std::to_string(c));
        beta_rows.push_back(Json{{"i", subgroup_label(m.s[k].i)},
                                 {"d", subgroup_label(m.s[k].d)},
                                 {"in_s_prime", m.in_s_prime(k)},
                                 {"beta", entries}});
    }
    res["beta"] = beta_rows;
    bool passed = r.checks_passed && (!res.contains("formulas_match") || res["formulas_match"].get<bool>());
    return report("monoid", Json{{"group", group_label(g)}, {"bound", bound_b}}, std::move(res), passed);
}

// ---- verify ----

inline const std::vector<std::string>& all_checks()
{
    static const std::vector<std::string> names{"tate", "kernel", "ext", "propfree", "unit"};
    return names;
}

inline std::vector<PairIV> s_tilde_pairs(const FinAbGroup& g)
{
    std::vector<PairIV> out;
    for (auto const& i : enumerate_subgroups(g)) {
        if (is_trivial(i) || !is_elementary(i))
            continue;
        for (auto const& phi : coset_representatives(i))
            out.push_back(PairIV{i, phi});
    }
    return out;
}

struct CheckTally {
    Json rows = Json::array();
    std::size_t cases = 0;
    std::size_t passed = 0;

    void add(Json row, bool ok)
    {
        row["pass"] = ok;
        rows.push_back(std::move(row));
        ++cases;
        passed += ok;
    }
    Json json() const { return Json{{"status", "run"}, {"cases", cases}, {"passed", passed}, {"rows", rows}}; }
};

inline Json skipped(const std::string& reason) { return Json{{"status", "skipped"}, {"reason", reason}}; }

inline Json verify_tate(const FinAbGroup& g, const std::vector<PairIV>& pairs)
{
    CheckTally t;
    auto subs = enumerate_subgroups(g);
    for (auto const& x : pairs)
        for (auto const& h : subs) {
            TateComparison c = check_tate_closed_form(x.i, x.phi, h);
            t.add(Json{{"i", subgroup_label(x.i)},
                       {"phi", element_label(x.phi)},
                       {"h", subgroup_label(h)},
                       {"h0", c.h0.passed()},
                       {"hm1", c.hm1.passed()}},
                  c.passed());
        }
    return t.json();
}

inline Json verify_kernel(const FinAbGroup& g, const std::vector<PairIV>& pairs)
{
    if (!g.is_cyclic())
        return skipped("kernel generators are checked on cyclic groups only");
    CheckTally t;
    for (auto const& x : pairs) {
        KernelCheck c = verify_kernel_generators(x.i, x.phi);
        t.add(Json{{"i", subgroup_label(x.i)},
                   {"phi", element_label(x.phi)},
                   {"ideal_index", int_json(c.ideal_index)},
                   {"module_order", int_json(c.module_order)},
                   {"ring_index", int_json(c.ring_index)}},
              c.passed());
    }
    return t.json();
}

inline Json verify_ext(const std::vector<PairIV>& pairs)
{
    CheckTally t;
    for (auto const& x : pairs) {
        ExtSequenceCheck c = verify_ext_sequence(x.i, x.phi);
        t.add(Json{{"i", subgroup_label(x.i)},
                   {"phi", element_label(x.phi)},
                   {"projection_is_unit_image", c.projection_is_unit_image},
                   {"preimage_is_integral", c.preimage_is_integral},
                   {"cokernel_free", c.cokernel_free},
                   {"quotient_rank", c.quotient_rank}},
              c.passed());
    }
    return t.json();
}

inline Json verify_propfree(const FinAbGroup& g, const std::vector<PairIV>& pairs)
{
    CheckTally t;
    if (g.order() == 1)
        return t.json();
    for (auto const& x : pairs)
        for (i64 p : prime_divisors(g.order()))
            for (auto const& chi : enumerate_characters(g, p)) {
                PropFreeResult c = check_prop_free(x.i, x.phi, chi);
                t.add(Json{{"i", subgroup_label(x.i)},
                           {"phi", element_label(x.phi)},
                           {"p", p},
                           {"chi", element_label(chi.exponents)},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs}},
                      c.agree());
            }
    return t.json();
}

inline Json verify_unit(const FinAbGroup& g, const std::vector<PairIV>& pairs)
{
    if (!is_prime_power(g.order()))
        return skipped("unit transport is checked on p-groups only");
    CheckTally t;
    for (auto const& x : pairs)
        for (auto const& y : pairs) {
            if (x.i != y.i || decomposition_group(x.i, x.phi) != decomposition_group(y.i, y.phi))
                continue;
            UnitTransportCheck c = verify_unit_transport(x.i, x.phi, y.i, y.phi, unit_transport_precision);
            t.add(Json{{"i", subgroup_label(x.i)},
                       {"phi", element_label(x.phi)},
                       {"phi2", element_label(y.phi)},
                       {"k", c.exponent_k},
                       {"precision_bound", c.precision_bound}},
                  c.passed());
        }
    return t.json();
}

inline std::vector<std::string> parse_checks(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (std::find(all_checks().begin(), all_checks().end(), part) == all_checks().end())
            throw usage_error("unknown check '" + part + "'");
        if (std::find(out.begin(), out.end(), part) == out.end())
            out.push_back(part);
    }
    if (out.empty())
        throw usage_error("no checks given");
    return out;
}

inline Json cmd_verify(const FinAbGroup& g, const std::vector<std::string>& checks)
{
    if (g.order() > default_enumeration_bound)
        throw capacity_error("group order " + std::to_string(g.order()) + " exceeds enumeration bound");
    std::vector<PairIV> pairs = s_tilde_pairs(g);
    Json res;
    bool passed = true;
    for (auto const& name : all_checks()) {
        if (std::find(checks.begin(), checks.end(), name) == checks.end())
            continue;
        Json r = name == "tate"       ? verify_tate(g, pairs)
                 : name == "kernel"   ? verify_kernel(g, pairs)
                 : name == "ext"      ? verify_ext(pairs)
                 : name == "propfree" ? verify_propfree(g, pairs)
                                      : verify_unit(g, pairs);
        if (r["status"] == "run")
            passed = passed && r["cases"] == r["passed"];
        res[name] = std::move(r);
    }
    Json names = Json::array();
    for (auto const& name : all_checks())
        if (std::find(checks.begin(), checks.end(), name) != checks.end())
            names.push_back(name);
    return report("verify", Json{{"group", group_label(g)}, {"checks", names}}, std::move(res), passed);
}

// ---- spectrum ----

struct SpectrumOptions {
    i64 p = 3;
    int r = 2;
    i64 n = 1;
    std::size_t samples = 1000;
    int coeff_exp = 5;
    std::uint64_t seed = 0;
    i64 epsilon = 1;
};

inline Json cmd_spectrum(const SpectrumOptions& o)
{
    if (o.p < 3 || !is_prime(o.p))
        throw usage_error("--p must be an odd prime");
    if (o.r < 1 || o.n < 1)
        throw usage_error("--r and --n must be at least 1");
    if (o.epsilon % o.p == 0)
        throw usage_error("--epsilon must be prime to p");
    SpectrumBatch b = sample_spectrum(o.p, o.r, o.coeff_exp, o.samples, o.seed, o.epsilon);
    SpectrumSummary s = summarize(b);
    std::size_t members = 0;
    for (auto const& x : b.samples)
        members += predicted_membership(x.total, o.p, o.r, o.n);
    Json hist = Json::array();
    Json attained = Json::array();
    for (auto const& [v, c] : s.histogram) {
        hist.push_back(Json{{"total", v}, {"count", c}});
        attained.push_back(v);
    }
    Json listed = Json::array();
    for (i64 k = o.n; k <= o.n + o.p - 1; ++k)
        listed.push_back(o.r * k);
    Json res;
    res["samples"] = b.samples.size();
    res["rejections"] = b.rejections;
    res["predicted_listed"] = listed;
    res["predicted_above"] = o.r * (o.n + o.p - 1);
    res["oracle_passes"] = s.oracle_passes;
    res["membership_passes"] = members;
    res["claim2_passes"] = s.claim2_passes;
    res["claims_passes"] = s.claims_passes;
    res["attained"] = attained;
    res["histogram"] = hist;
    std::size_t total = b.samples.size();
    bool passed = s.oracle_passes == total && members == total && s.claims_passes == total;
    Json config{{"p", o.p},         {"r", o.r},       {"n", o.n},
                {"samples", o.samples}, {"coeff_exp", o.coeff_exp}, {"seed", o.seed},
                {"epsilon", o.epsilon}};
    return report("spectrum", std::move(config), std::move(res), passed);
}

// ---- ingest ----

struct ClassRecord {
    i64 q = 0;
    std::string field_tag;
    i64 ord_value = 0;
};

namespace detail {

inline i64 parse_field(const std::string& text, std::size_t line, const char* name)
{
    static const std::regex integer("-?[0-9]{1,18}");
    if (!std::regex_match(text, integer))
        throw data_error("row " + std::to_string(line) + ": " + name + " '" + text + "' is not an integer");
    return std::stoll(text);
}

} // namespace detail

/// Rows of a `q,field_tag,ord_value` CSV; line numbers count the header as line 1.
inline std::vector<ClassRecord> read_class_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw data_error("row 1: missing header");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "q,field_tag,ord_value")
        throw data_error("row 1: header must be 'q,field_tag,ord_value'");
    std::vector<ClassRecord> out;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.push_back("");
        if (cells.size() != 3)
            throw data_error("row " + std::to_string(number) + ": expected 3 fields, got " +
                             std::to_string(cells.size()));
        ClassRecord r{detail::parse_field(cells[0], number, "q"), cells[1],
                      detail::parse_field(cells[2], number, "ord_value")};
        if (r.ord_value < 0)
            throw data_error("row " + std::to_string(number) + ": ord_value must be nonnegative");
        out.push_back(std::move(r));
    }
    return out;
}

inline Json cmd_ingest(const std::string& path, i64 p, int r)
{
    if (p < 3 || !is_prime(p) || r < 1)
        throw usage_error("--p must be an odd prime and --r at least 1");
    std::ifstream in(path);
    if (!in)
        throw data_error("cannot open '" + path + "'");
    std::vector<ClassRecord> rows = read_class_csv(in);
    i64 modulus = ipow(p, r);
    std::set<i64> attained;
    Json flagged = Json::array();
    std::size_t passed_rows = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const ClassRecord& x = rows[k];
        bool prime = x.q > 1 && is_prime(x.q);
        bool congruence = mod_floor(x.q, modulus) == 1;
        bool member = predicted_membership(x.ord_value, p, r, 1);
        attained.insert(x.ord_value);
        if (prime && congruence && member) {
            ++passed_rows;
            continue;
        }
        flagged.push_back(Json{{"row", k + 2},
                               {"q", x.q},
                               {"field_tag", x.field_tag},
                               {"ord_value", x.ord_value},
                               {"q_prime", prime},
                               {"congruence", congruence},
                               {"member", member}});
    }
    Json res;
    res["rows"] = rows.size();
    res["passed_rows"] = passed_rows;
    res["attained"] = Json(std::vector<i64>(attained.begin(), attained.end()));
    res["flagged"] = flagged;
    return report("ingest", Json{{"csv", path}, {"p", p}, {"r", r}}, std::move(res), passed_rows == rows.size());
}

// ---- entry point ----

struct Outcome {
    int exit_code = exit_ok;
    std::string out;
    std::string err;
};

inline Outcome run(std::vector<std::string> args)
{
    Outcome o;
    CLI::App app{"galmod: shift lattices, Tate closed forms, the admissible monoid and valuation spectra"};
    app.name("galmod");
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "emit a JSON report instead of TSV");

    std::string group;
    int bound_b = 3;
    auto* monoid = app.add_subcommand("monoid", "freeness analysis of the monoid beta(N^S)");
    monoid->add_option("group", group, "invariant factors, e.g. 9 or 3,6")->required();
    monoid->add_option("--bound", bound_b, "coordinate-sum bound for injectivity")->capture_default_str();
    monoid->add_flag("--json", json, "emit a JSON report instead of TSV");

    std::string checks = "tate,kernel,ext,propfree,unit";
    auto* verify = app.add_subcommand("verify", "Tate closed form, lattice identities and Prop free sweeps");
    verify->add_option("group", group, "invariant factors")->required();
    verify->add_option("--checks", checks, "comma-separated subset of tate,kernel,ext,propfree,unit")
        ->capture_default_str();
    verify->add_flag("--json", json, "emit a JSON report instead of TSV");

    SpectrumOptions so;
    auto* spectrum = app.add_subcommand("spectrum", "sample valuations of (N, (sigma-1)u + p^r eps)");
    spectrum->add_option("--p", so.p, "odd prime")->capture_default_str();
    spectrum->add_option("--r", so.r, "exponent, group Z/p^r")->capture_default_str();
    spectrum->add_option("--n", so.n, "number of ramified primes in the predicted set")->capture_default_str();
    spectrum->add_option("--samples", so.samples, "sample count")->capture_default_str();
    spectrum->add_option("--coeff-exp", so.coeff_exp, "coefficients of u lie in [0, p^K)")->capture_default_str();
    spectrum->add_option("--seed", so.seed, "seed")->capture_default_str();
    spectrum->add_option("--epsilon", so.epsilon, "unit eps prime to p")->capture_default_str();
    spectrum->add_flag("--json", json, "emit a JSON report instead of TSV");

    std::string csv;
    i64 ip = 3;
    int ir = 2;
    auto* ingest = app.add_subcommand("ingest", "check a q,field_tag,ord_value table against the predicted set");
    ingest->add_option("csv", csv, "CSV path")->required();
    ingest->add_option("--p", ip, "prime")->capture_default_str();
    ingest->add_option("--r", ir, "exponent")->capture_default_str();
    ingest->add_flag("--json", json, "emit a JSON report instead of TSV");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp& e) {
        o.out = app.help();
        return o;
    } catch (const CLI::ParseError& e) {
        o.exit_code = exit_usage;
        o.err = std::string(e.what()) + "\n" + app.help();
        return o;
    }

    try {
        Json r;
        if (*monoid) {
            if (bound_b < 2)
                throw usage_error("--bound must be at least 2");
            r = cmd_monoid(parse_group_spec(group), bound_b);
        } else if (*verify) {
            r = cmd_verify(parse_group_spec(group), parse_checks(checks));
        } else if (*spectrum) {
            r = cmd_spectrum(so);
        } else {
            r = cmd_ingest(csv, ip, ir);
        }
        o.out = render(r, json);
        o.exit_code = r["verdict"] == "PASS" ? exit_ok : exit_check_failed;
    } catch (const usage_error& e) {
        o.exit_code = exit_usage;
        o.err = std::string("usage error: ") + e.what() + "\n";
    } catch (const capacity_error& e) {
        o.exit_code = exit_capacity;
        o.err = std::string("capacity error: ") + e.what() + "\n";
    } catch (const data_error& e) {
        o.exit_code = exit_data;
        o.err = std::string("data error: ") + e.what() + "\n";
    }
    return o;
}

} // namespace galmod::cli
