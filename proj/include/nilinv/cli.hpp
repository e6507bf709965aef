#pragma once

#include "nilinv/catalog.hpp"
#include "nilinv/curvature_invariants.hpp"
#include "nilinv/heisenberg.hpp"
#include "nilinv/isospec.hpp"
#include "nilinv/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nilinv::cli {

// Exit codes: 0 ok, 1 verification failure, 2 usage/unsupported,
// 3 parse error, 4 resource limit.
enum ExitCode : int { kOk = 0, kVerifyFail = 1, kUsage = 2, kParse = 3, kResource = 4 };

namespace detail {

struct Source {
    std::string example, file;
    std::string label() const { return !example.empty() ? "catalog:" + example : "file:" + file; }
};

inline JMap load_source(const Source& src) {
    if (!src.example.empty()) return catalog_get(src.example).j; // out_of_range -> usage error
    std::ifstream in(src.file, std::ios::binary);
    if (!in) throw std::system_error(errno, std::generic_category(), "cannot open '" + src.file + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return jmap_from_json_text(buf.str());
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string(e.what()) + " in '" + src.file + "'");
    }
}

// Tensor caches shared across the checks of one CLI run.
struct Caches {
    std::map<std::string, std::unique_ptr<TensorCache>> by_key;

    TensorCache& get(const std::string& key, const JMap& j) {
        auto it = by_key.find(key);
        if (it == by_key.end())
            it = by_key.emplace(key, std::make_unique<TensorCache>(build_algebra(j))).first;
        return *it->second;
    }
};

inline Json values_json(const InvariantReport& rep, std::optional<int> order) {
    Json values;
    for (const std::string& id : invariant_ids()) {
        if (order && invariant_order(id) != *order) continue;
        if (rep.has(id)) values[id] = rep.get(id).str();
    }
    return values;
}

inline Json skipped_json(const InvariantReport& rep, std::optional<int> order) {
    Json skipped = Json::array();
    for (const std::string& id : invariant_ids()) {
        if (order && invariant_order(id) != *order) continue;
        if (!rep.has(id)) skipped.push_back(id);
    }
    return skipped;
}

inline Json checks_json(const std::vector<IdentityCheck>& checks, std::size_t& failures) {
    Json arr = Json::array();
    for (const IdentityCheck& c : checks) {
        Json row;
        row["id"] = c.id;
        row["pass"] = c.pass;
        if (!c.pass) {
            row["lhs"] = c.lhs.str();
            row["rhs"] = c.rhs.str();
        }
        if (!c.pass) ++failures;
        arr.push_back(std::move(row));
    }
    return arr;
}

inline Json gw_json(const GordonWilsonReport& rep) {
    Json g;
    g["isospectral"] = rep.isospectral;
    g["isospectral_method"] = rep.isospectral_method;
    if (!rep.iso.rationale.empty()) g["isospectral_rationale"] = rep.iso.rationale;
    if (!rep.iso.ok && !rep.iso.witness_z.empty()) {
        g["isospectral_witness_z"] = rep.iso.witness_z;
        Json pl = Json::array(), pr = Json::array();
        for (const auto& c : rep.iso.poly_left) pl.push_back(c.str());
        for (const auto& c : rep.iso.poly_right) pr.push_back(c.str());
        g["char_poly_left"] = pl;
        g["char_poly_right"] = pr;
    }
    g["lattice_closure_left"] = rep.closure_left;
    g["lattice_closure_right"] = rep.closure_right;
    g["kernel_spectra_match"] = rep.kernels_match;
    g["kernel_method"] = rep.kernel_method;
    if (!rep.kernel_witness_z.empty()) g["kernel_witness_z"] = rep.kernel_witness_z;
    if (rep.kernel_method == "grid") {
        g["z_points_checked"] = rep.z_points_checked;
        g["zbox"] = rep.zbox;
        g["radius2"] = rep.radius_sq.str();
    }
    g["caveat"] = rep.caveat;
    g["all_pass"] = rep.all_pass();
    return g;
}

struct PairSources {
    Source left, right;
};

inline PairSources resolve_pair(const std::string& pair_id, const std::vector<std::string>& files) {
    PairSources ps;
    if (!pair_id.empty()) {
        for (const CatalogPair& p : catalog_pairs())
            if (p.id == pair_id) {
                ps.left.example = p.left;
                ps.right.example = p.right;
                return ps;
            }
        throw std::out_of_range("unknown catalog pair '" + pair_id + "'");
    }
    if (files.size() != 2) throw std::invalid_argument("expected exactly two --files");
    ps.left.file = files[0];
    ps.right.file = files[1];
    return ps;
}

inline JMap flat_jmap(std::size_t m, std::size_t r) {
    JMap j;
    j.m = m;
    j.r = r;
    j.mats.assign(r, Mat(m, m));
    return j;
}

} // namespace detail

struct CommonFlags {
    std::string format = "json";
    bool timing = false;
};

/// Runs the CLI on the given argument vector (without the program name).
/// All output goes to the provided streams; returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact curvature invariants of two-step nilmanifolds defined by j-maps"};
    app.require_subcommand(1);

    CommonFlags common;
    detail::Source source;
    std::string pair_id;
    std::vector<std::string> files;
    std::optional<int> order;
    InvariantOptions iopt;
    std::string scope = "all";
    std::string spec_string;
    long long cr = 3, ca = 1, cb = 0;
    std::string out_path;
    int zbox = 0;
    std::string radius2 = default_radius_sq().str();

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", common.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_flag("--timing", common.timing, "include wall-clock timing in the report");
    };
    const auto add_source = [&](CLI::App* cmd) {
        auto* ex = cmd->add_option("--example", source.example, "catalog id");
        cmd->add_option("--file", source.file, "j-map JSON file")->excludes(ex);
    };
    const auto add_heavy = [&](CLI::App* cmd) {
        cmd->add_flag("--skip-heavy", iopt.skip_heavy,
                      "omit invariants needing second derivatives of R/ric");
        cmd->add_option("--max-heavy-dim", iopt.heavy_dim_limit,
                        "largest total dimension for which those are computed (default 12)");
    };

    CLI::App* cmd_invariants = app.add_subcommand("invariants", "invariant report for one j-map");
    add_source(cmd_invariants);
    cmd_invariants->add_option("--order", order, "restrict to one order")
        ->check(CLI::IsMember({2, 4, 6}));
    add_heavy(cmd_invariants);
    add_common(cmd_invariants);

    CLI::App* cmd_compare = app.add_subcommand("compare", "invariant deltas for a pair");
    cmd_compare->add_option("--pair", pair_id, "catalog pair id");
    cmd_compare->add_option("--files", files, "two j-map JSON files")->expected(2);
    cmd_compare->add_option("--order", order, "restrict to one order")
        ->check(CLI::IsMember({2, 4, 6}));
    add_heavy(cmd_compare);
    add_common(cmd_compare);

    CLI::App* cmd_verify = app.add_subcommand("verify", "run verification suites");
    cmd_verify->add_option("scope", scope, "lemmas | identities | catalog | all")
        ->check(CLI::IsMember({"lemmas", "identities", "catalog", "all"}));
    add_heavy(cmd_verify);
    add_common(cmd_verify);

    CLI::App* cmd_trace = app.add_subcommand("trace-inv", "evaluate a trace invariant");
    cmd_trace->add_option("--spec", spec_string, "partition word, e.g. \"aabccb\" or \"ab|ab\"")
        ->required();
    add_source(cmd_trace);
    add_common(cmd_trace);

    CLI::App* cmd_clifford = app.add_subcommand("clifford", "emit a Heisenberg-type j-map");
    cmd_clifford->add_option("--r", cr, "center dimension (3 or 7)")->required();
    cmd_clifford->add_option("--a", ca, "plus-module multiplicity");
    cmd_clifford->add_option("--b", cb, "minus-module multiplicity");
    cmd_clifford->add_option("--out", out_path, "output file (stdout when absent)");
    add_common(cmd_clifford);

    CLI::App* cmd_gw = app.add_subcommand("gw-check", "isospectrality hypothesis checklist");
    cmd_gw->add_option("--pair", pair_id, "catalog pair id");
    cmd_gw->add_option("--files", files, "two j-map JSON files")->expected(2);
    cmd_gw->add_option("--zbox", zbox, "half-width of the integer Z grid (0 = automatic)");
    cmd_gw->add_option("--radius2", radius2, "squared truncation radius, rational \"p/q\"");
    add_common(cmd_gw);

    CLI::App* cmd_catalog = app.add_subcommand("catalog", "catalog access");
    CLI::App* cmd_catalog_list = cmd_catalog->add_subcommand("list", "list catalog entries");
    add_common(cmd_catalog_list);
    cmd_catalog->require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("nilinv");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    const auto started = std::chrono::steady_clock::now();
    const auto finish = [&](Json doc, int code) {
        if (common.timing) {
            const auto elapsed = std::chrono::steady_clock::now() - started;
            doc["timing"]["wall_ms"] =
                std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
        }
        write_report(out, doc, common.format);
        return code;
    };

    detail::Caches caches;
    try {
        if (*cmd_invariants) {
            if (source.example.empty() && source.file.empty())
                throw std::invalid_argument("invariants: need --example or --file");
            const JMap j = detail::load_source(source);
            TensorCache& tc = caches.get(source.label(), j);
            const InvariantReport rep = oracle_invariants(tc, iopt);
            Json doc = report_skeleton("invariants");
            doc["inputs"]["source"] = source.label();
            doc["inputs"]["m"] = j.m;
            doc["inputs"]["r"] = j.r;
            if (order) doc["inputs"]["order"] = *order;
            doc["results"]["values"] = detail::values_json(rep, order);
            const Json skipped = detail::skipped_json(rep, order);
            if (!skipped.empty()) doc["results"]["skipped_heavy"] = skipped;
            return finish(std::move(doc), kOk);
        }

        if (*cmd_compare) {
            const detail::PairSources ps = detail::resolve_pair(pair_id, files);
            const JMap jl = detail::load_source(ps.left);
            const JMap jr = detail::load_source(ps.right);
            if (jl.total_dim() != jr.total_dim())
                throw std::invalid_argument("compare: total dimensions differ");
            TensorCache& tl = caches.get(ps.left.label(), jl);
            TensorCache& tr = caches.get(ps.right.label(), jr);
            const InvariantReport rl = oracle_invariants(tl, iopt);
            const InvariantReport rr = oracle_invariants(tr, iopt);
            Json doc = report_skeleton("compare");
            doc["inputs"]["left"] = ps.left.label();
            doc["inputs"]["right"] = ps.right.label();
            doc["results"]["left"] = detail::values_json(rl, order);
            doc["results"]["right"] = detail::values_json(rr, order);
            Json delta, differs, differing = Json::array();
            for (const std::string& id : invariant_ids()) {
                if (order && invariant_order(id) != *order) continue;
                if (!rl.has(id) || !rr.has(id)) continue;
                const Rational d = rl.get(id) - rr.get(id);
                delta[id] = d.str();
                differs[id] = !d.is_zero();
                if (!d.is_zero()) differing.push_back(id);
            }
            doc["results"]["delta"] = std::move(delta);
            doc["results"]["differs"] = std::move(differs);
            doc["results"]["differing_ids"] = std::move(differing);
            const Json skipped = detail::skipped_json(rl, order);
            if (!skipped.empty()) doc["results"]["skipped_heavy"] = skipped;
            return finish(std::move(doc), kOk);
        }

        if (*cmd_verify) {
            std::vector<IdentityCheck> checks;
            const auto append = [&checks](std::vector<IdentityCheck> more, const std::string& tag) {
                for (IdentityCheck& c : more) {
                    c.id = tag + ":" + c.id;
                    checks.push_back(std::move(c));
                }
            };
            if (scope == "lemmas" || scope == "all") {
                for (const std::string& id : catalog_ids())
                    append(verify_lemma_formulas(caches.get("catalog:" + id, catalog_get(id).j), iopt),
                           id);
            }
            if (scope == "identities" || scope == "all") {
                const JMap flat = detail::flat_jmap(4, 2);
                append(verify_identities(caches.get("flat:4x2", flat), iopt), "flat");
                for (const std::string& id : catalog_ids())
                    append(verify_identities(caches.get("catalog:" + id, catalog_get(id).j), iopt),
                           id);
                for (const CatalogPair& p : catalog_pairs()) {
                    TensorCache& tl = caches.get("catalog:" + p.left, catalog_get(p.left).j);
                    TensorCache& tr = caches.get("catalog:" + p.right, catalog_get(p.right).j);
                    const InvariantReport rl = oracle_invariants(tl, iopt);
                    const InvariantReport rr = oracle_invariants(tr, iopt);
                    for (const char* id : {"a1", "a2", "a3"})
                        checks.push_back({p.id + ":pair-equal:" + id, rl.get(id) == rr.get(id),
                                          rl.get(id), rr.get(id)});
                }
            }
            if (scope == "catalog" || scope == "all") {
                for (const std::string& id : catalog_ids()) {
                    const CatalogEntry entry = catalog_get(id);
                    append(verify_catalog_facts(entry), id);
                }
                for (const CatalogPair& p : catalog_pairs()) {
                    const GordonWilsonReport gw =
                        gordon_wilson_check(catalog_get(p.left).j, catalog_get(p.right).j);
                    checks.push_back({p.id + ":gordon-wilson", gw.all_pass(),
                                      Rational(gw.all_pass() ? 1 : 0), Rational(1)});
                }
            }
            std::size_t failures = 0;
            Json doc = report_skeleton("verify");
            doc["inputs"]["scope"] = scope;
            doc["results"]["checks"] = detail::checks_json(checks, failures);
            doc["results"]["total"] = checks.size();
            doc["results"]["failed"] = failures;
            return finish(std::move(doc), failures == 0 ? kOk : kVerifyFail);
        }

        if (*cmd_trace) {
            if (source.example.empty() && source.file.empty())
                throw std::invalid_argument("trace-inv: need --example or --file");
            TraceSpec spec;
            try {
                spec = parse_spec(spec_string);
            } catch (const ParseError& e) {
                err << "error: " << e.what() << "\n";
                if (e.pos != ParseError::npos) {
                    err << "  " << spec_string << "\n  " << std::string(e.pos, ' ') << "^\n";
                }
                return kParse;
            }
            const JMap j = detail::load_source(source);
            Json doc = report_skeleton("trace-inv");
            doc["inputs"]["source"] = source.label();
            doc["inputs"]["spec"] = spec.str();
            doc["results"]["q"] = spec.q();
            doc["results"]["groups"] = spec.groups.size();
            doc["results"]["value"] = eval_trace_invariant(spec, j).str();
            return finish(std::move(doc), kOk);
        }

        if (*cmd_clifford) {
            if (!((cr == 3 || cr == 7) && ca >= 0 && cb >= 0 && ca + cb >= 1)) {
                err << "error: unsupported Clifford module spec r=" << cr << " a=" << ca
                    << " b=" << cb << " (supported: r in {3,7}, a+b >= 1)\n";
                return kUsage;
            }
            const JMap j = build_clifford_j(static_cast<std::size_t>(cr),
                                            static_cast<std::size_t>(ca),
                                            static_cast<std::size_t>(cb));
            const Json jm = jmap_to_json(j);
            if (out_path.empty()) {
                out << jm.dump(2) << "\n";
                return kOk;
            }
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw std::system_error(errno, std::generic_category(),
                                            "cannot write '" + out_path + "'");
            f << jm.dump(2) << "\n";
            Json doc = report_skeleton("clifford");
            doc["inputs"]["r"] = cr;
            doc["inputs"]["a"] = ca;
            doc["inputs"]["b"] = cb;
            doc["results"]["m"] = j.m;
            doc["results"]["written"] = out_path;
            return finish(std::move(doc), kOk);
        }

        if (*cmd_gw) {
            const detail::PairSources ps = detail::resolve_pair(pair_id, files);
            const JMap jl = detail::load_source(ps.left);
            const JMap jr = detail::load_source(ps.right);
            GordonWilsonOptions opt;
            opt.zbox = zbox;
            opt.radius_sq = Rational::parse(radius2);
            const GordonWilsonReport gw = gordon_wilson_check(jl, jr, opt);
            Json doc = report_skeleton("gw-check");
            doc["inputs"]["left"] = ps.left.label();
            doc["inputs"]["right"] = ps.right.label();
            doc["results"] = detail::gw_json(gw);
            return finish(std::move(doc), gw.all_pass() ? kOk : kVerifyFail);
        }

        if (*cmd_catalog_list) {
            Json doc = report_skeleton("catalog-list");
            Json entries = Json::array();
            for (const std::string& id : catalog_ids()) {
                const CatalogEntry e = catalog_get(id);
                Json row;
                row["id"] = e.id;
                row["m"] = e.j.m;
                row["r"] = e.j.r;
                row["partner"] = e.partner;
                row["description"] = e.description;
                entries.push_back(std::move(row));
            }
            doc["results"]["entries"] = std::move(entries);
            Json pairs = Json::array();
            for (const CatalogPair& p : catalog_pairs()) {
                Json row;
                row["id"] = p.id;
                row["left"] = p.left;
                row["right"] = p.right;
                pairs.push_back(std::move(row));
            }
            doc["results"]["pairs"] = std::move(pairs);
            return finish(std::move(doc), kOk);
        }
    } catch (const ResourceLimitError& e) {
        err << "error: resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    } catch (const std::system_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::logic_error& e) {
        err << "internal verification failure: " << e.what() << "\n";
        return kVerifyFail;
    }
    err << "error: no command\n";
    return kUsage;
}

} // namespace nilinv::cli
