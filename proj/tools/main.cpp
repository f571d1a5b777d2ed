#include <charconv>
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sceptic/calibrate.hpp"
#include "sceptic/core.hpp"
#include "sceptic/design.hpp"
#include "sceptic/errors.hpp"
#include "sceptic/mc.hpp"
#include "sceptic/numeric.hpp"
#include "sceptic/studies.hpp"

namespace {

using nlohmann::json;

enum class OutFormat { TEXT, JSON, CSV };

struct FormatFlags {
    bool as_json = false;
    bool as_csv = false;

    OutFormat pick() const {
        if (as_json) return OutFormat::JSON;
        if (as_csv) return OutFormat::CSV;
        return OutFormat::TEXT;
    }
};

void add_format_flags(CLI::App* cmd, const std::shared_ptr<FormatFlags>& flags) {
    auto* j = cmd->add_flag("--json", flags->as_json, "emit JSON");
    cmd->add_flag("--csv", flags->as_csv, "emit CSV")->excludes(j);
}

std::string fmt_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string csv_cell(const json& v) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"") != std::string::npos) {
            std::string quoted = "\"";
            for (char ch : s) {
                if (ch == '"') quoted += '"';
                quoted += ch;
            }
            quoted += '"';
            return quoted;
        }
        return s;
    }
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return fmt_double(v.get<double>());
    if (v.is_null()) return "";
    return v.dump();
}

std::string text_cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return csv_cell(v);
}

// One flat record: TEXT as key = value lines, JSON as an object, CSV as a
// header line plus one row.
void emit_record(const std::vector<std::pair<std::string, json>>& kv, OutFormat fmt) {
    if (fmt == OutFormat::JSON) {
        json obj = json::object();
        for (const auto& [k, v] : kv) obj[k] = v;
        std::cout << obj.dump() << '\n';
        return;
    }
    if (fmt == OutFormat::CSV) {
        for (std::size_t i = 0; i < kv.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << kv[i].first;
        }
        std::cout << '\n';
        for (std::size_t i = 0; i < kv.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << csv_cell(kv[i].second);
        }
        std::cout << '\n';
        return;
    }
    for (const auto& [k, v] : kv) {
        std::cout << k << " = " << text_cell(v) << '\n';
    }
}

void emit_table(const std::vector<std::string>& header,
                const std::vector<std::vector<json>>& rows, OutFormat fmt) {
    if (fmt == OutFormat::JSON) {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
            arr.push_back(std::move(obj));
        }
        std::cout << arr.dump() << '\n';
        return;
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) std::cout << ',';
        std::cout << header[i];
    }
    std::cout << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) std::cout << ',';
            std::cout << csv_cell(row[i]);
        }
        std::cout << '\n';
    }
}

double check_prob_open(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
    }
    return p;
}

sceptic::Method parse_method(const std::string& name) {
    if (name == "controlled") return sceptic::Method::SCEPTICAL_CONTROLLED;
    if (name == "two_trials") return sceptic::Method::TWO_TRIALS;
    if (name == "nominal") return sceptic::Method::SCEPTICAL_NOMINAL;
    if (name == "golden") return sceptic::Method::SCEPTICAL_GOLDEN;
    throw CLI::ValidationError("--method",
                               "expected controlled, two_trials, nominal, or golden");
}

struct PairInput {
    double z_o = 0.0;
    double z_r = 0.0;
    double po_raw = 0.0;
    double pr_raw = 0.0;
    CLI::Option* zo_opt = nullptr;
    CLI::Option* zr_opt = nullptr;
    CLI::Option* po_opt = nullptr;
    CLI::Option* pr_opt = nullptr;

    void add_options(CLI::App* cmd, bool replication = true) {
        zo_opt = cmd->add_option("--zo", z_o, "original z-value");
        po_opt = cmd->add_option("--po", po_raw, "original one-sided p-value");
        po_opt->excludes(zo_opt);
        if (replication) {
            zr_opt = cmd->add_option("--zr", z_r, "replication z-value");
            pr_opt = cmd->add_option("--pr", pr_raw, "replication one-sided p-value");
            pr_opt->excludes(zr_opt);
        }
    }

    // Resolves to z-scale, converting any p-value inputs.
    std::pair<double, double> resolve() const {
        double zo = resolve_zo_only();
        bool have_zr = zr_opt->count() > 0;
        if (have_zr == (pr_opt->count() > 0)) {
            throw CLI::ValidationError("study pair", "give exactly one of --zr or --pr");
        }
        double zr = have_zr ? z_r : sceptic::std_normal_isf(check_prob_open(pr_raw, "--pr"));
        return {zo, zr};
    }

    double resolve_zo_only() const {
        bool have_zo = zo_opt->count() > 0;
        if (have_zo == (po_opt->count() > 0)) {
            throw CLI::ValidationError("study pair", "give exactly one of --zo or --po");
        }
        return have_zo ? z_o : sceptic::std_normal_isf(check_prob_open(po_raw, "--po"));
    }
};

void setup_ps(CLI::App& app) {
    auto* cmd = app.add_subcommand("ps", "sceptical p-values for one study pair");
    auto pair_in = std::make_shared<PairInput>();
    auto flags = std::make_shared<FormatFlags>();
    auto c = std::make_shared<double>(1.0);
    auto alpha = std::make_shared<double>(0.025);
    auto tol = std::make_shared<double>(1e-9);
    pair_in->add_options(cmd);
    cmd->add_option("--c", *c, "variance ratio / relative sample size")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level for the success verdict")->capture_default_str();
    cmd->add_option("--tol", *tol, "boundary tolerance for the verdict")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([pair_in, flags, c, alpha, tol] {
        auto [zo, zr] = pair_in->resolve();
        sceptic::StudyPair pair;
        pair.z_o = zo;
        pair.z_r = zr;
        pair.c = *c;
        sceptic::ScepticalResult res = sceptic::sceptical_pvalues(pair);
        emit_record(
            {
                {"z_o", zo},
                {"z_r", zr},
                {"c", *c},
                {"z_s2", res.z_s2},
                {"two_sided_4p", res.two_sided_4p},
                {"p_one_sided", res.p_one_sided},
                {"p_s_star", res.p_s_star},
                {"p_s_nominal", res.p_s_nominal},
                {"p_s_golden", res.p_s_golden},
                {"both_positive", sceptic::both_positive(pair)},
                {"success_controlled", res.p_s_star <= *alpha + *tol},
            },
            flags->pick());
    });
}

void setup_calibrate(CLI::App& app) {
    auto* cmd = app.add_subcommand("calibrate", "controlled success level gamma_c");
    auto flags = std::make_shared<FormatFlags>();
    auto c = std::make_shared<double>(1.0);
    auto alpha = std::make_shared<double>(0.025);
    cmd->add_option("--c", *c, "variance ratio")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([flags, c, alpha] {
        sceptic::CalibrationResult res = sceptic::calibrate_gamma_c(*alpha, *c);
        emit_record(
            {
                {"alpha", res.alpha},
                {"c", res.c},
                {"gamma_c", res.gamma_c},
                {"z_gamma_c", res.z_gamma_c},
                {"achieved_overall_t1e", res.achieved_overall_t1e},
            },
            flags->pick());
    });
}

void setup_t1e(CLI::App& app) {
    auto* cmd = app.add_subcommand("t1e", "overall, partial, or conditional Type-I error");
    auto flags = std::make_shared<FormatFlags>();
    auto kind = std::make_shared<std::string>("overall");
    auto gamma = std::make_shared<double>(0.0);
    auto c = std::make_shared<double>(1.0);
    auto drift = std::make_shared<double>(0.0);
    auto side = std::make_shared<std::string>("original_null");
    auto po = std::make_shared<double>(0.0);
    auto alpha = std::make_shared<double>(0.025);
    cmd->add_option("--kind", *kind, "overall, partial, or conditional")->capture_default_str()
        ->check(CLI::IsMember({"overall", "partial", "conditional"}));
    cmd->add_option("--gamma", *gamma, "success level (overall, partial)");
    cmd->add_option("--c", *c, "variance ratio")->required();
    cmd->add_option("--drift", *drift, "standardized mean of the non-null study (partial)")->capture_default_str();
    cmd->add_option("--side", *side, "original_null or replication_null (partial)")->capture_default_str()
        ->check(CLI::IsMember({"original_null", "replication_null"}));
    cmd->add_option("--po", *po, "observed original p-value (conditional)");
    cmd->add_option("--alpha", *alpha, "one-sided level (conditional)")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([flags, kind, gamma, c, drift, side, po, alpha] {
        if (*kind == "overall") {
            double rate = sceptic::overall_t1e(*gamma, *c);
            emit_record({{"kind", "overall"}, {"gamma", *gamma}, {"c", *c}, {"t1e", rate}},
                        flags->pick());
        } else if (*kind == "partial") {
            sceptic::T1eQuery query;
            query.gamma = *gamma;
            query.c = *c;
            query.drift = *drift;
            query.null_side = (*side == "original_null")
                                  ? sceptic::NullSide::ORIGINAL_NULL
                                  : sceptic::NullSide::REPLICATION_NULL;
            double rate = sceptic::partial_t1e(query);
            emit_record({{"kind", "partial"},
                         {"gamma", *gamma},
                         {"c", *c},
                         {"drift", *drift},
                         {"side", *side},
                         {"t1e", rate}},
                        flags->pick());
        } else {
            check_prob_open(*po, "--po");
            double rate = sceptic::conditional_t1e(*po, *c, *alpha);
            emit_record({{"kind", "conditional"},
                         {"p_o", *po},
                         {"c", *c},
                         {"alpha", *alpha},
                         {"t1e", rate}},
                        flags->pick());
        }
    });
}

void setup_power(CLI::App& app) {
    auto* cmd = app.add_subcommand("power", "conditional or predictive replication power");
    auto pair_in = std::make_shared<PairInput>();
    auto flags = std::make_shared<FormatFlags>();
    auto c = std::make_shared<double>(1.0);
    auto alpha = std::make_shared<double>(0.025);
    auto kind = std::make_shared<std::string>("conditional");
    auto method = std::make_shared<std::string>("controlled");
    pair_in->add_options(cmd, false);
    cmd->add_option("--c", *c, "variance ratio")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    cmd->add_option("--kind", *kind, "conditional or predictive")->capture_default_str()
        ->check(CLI::IsMember({"conditional", "predictive"}));
    cmd->add_option("--method", *method, "controlled, two_trials, nominal, or golden")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([pair_in, flags, c, alpha, kind, method] {
        double zo = pair_in->resolve_zo_only();
        sceptic::Method m = parse_method(*method);
        double value = (*kind == "conditional")
                           ? sceptic::conditional_power(zo, *c, *alpha, m)
                           : sceptic::predictive_power(zo, *c, *alpha, m);
        emit_record({{"z_o", zo},
                     {"c", *c},
                     {"alpha", *alpha},
                     {"kind", *kind},
                     {"method", *method},
                     {"power", value}},
                    flags->pick());
    });
}

void setup_samplesize(CLI::App& app) {
    auto* cmd =
        app.add_subcommand("samplesize", "smallest relative sample size reaching a power");
    auto pair_in = std::make_shared<PairInput>();
    auto flags = std::make_shared<FormatFlags>();
    auto alpha = std::make_shared<double>(0.025);
    auto target = std::make_shared<double>(0.8);
    auto kind = std::make_shared<std::string>("conditional");
    auto method = std::make_shared<std::string>("controlled");
    pair_in->add_options(cmd, false);
    cmd->add_option("--power", *target, "target power")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    cmd->add_option("--kind", *kind, "conditional or predictive")->capture_default_str()
        ->check(CLI::IsMember({"conditional", "predictive"}));
    cmd->add_option("--method", *method, "controlled, two_trials, nominal, or golden")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([pair_in, flags, alpha, target, kind, method] {
        sceptic::DesignRequest req;
        req.z_o = pair_in->resolve_zo_only();
        req.alpha = *alpha;
        req.target_power = *target;
        req.power_kind = (*kind == "conditional") ? sceptic::PowerKind::CONDITIONAL
                                                  : sceptic::PowerKind::PREDICTIVE;
        req.method = parse_method(*method);
        sceptic::DesignResult res = sceptic::required_relative_sample_size(req);
        emit_record({{"z_o", req.z_o},
                     {"alpha", *alpha},
                     {"target_power", *target},
                     {"kind", *kind},
                     {"method", *method},
                     {"c_required", res.c_required},
                     {"achieved_power", res.achieved_power},
                     {"gamma_used", res.gamma_used},
                     {"conditional_t1e_at_design", res.conditional_t1e_at_design}},
                    flags->pick());
    });
}

void setup_projectpower(CLI::App& app) {
    auto* cmd = app.add_subcommand("projectpower",
                                   "probability both studies succeed, designed up front");
    auto flags = std::make_shared<FormatFlags>();
    auto alpha = std::make_shared<double>(0.025);
    auto original_power = std::make_shared<double>(0.8);
    auto c = std::make_shared<double>(1.0);
    auto method = std::make_shared<std::string>("controlled");
    cmd->add_option("--c", *c, "variance ratio")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    cmd->add_option("--power", *original_power, "power of the original design")->capture_default_str();
    cmd->add_option("--method", *method, "controlled, two_trials, nominal, or golden")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([flags, alpha, original_power, c, method] {
        sceptic::ProjectPowerQuery q;
        q.alpha = *alpha;
        q.original_power = *original_power;
        q.c = *c;
        q.method = parse_method(*method);
        double value = sceptic::project_power(q);
        emit_record({{"alpha", *alpha},
                     {"original_power", *original_power},
                     {"c", *c},
                     {"method", *method},
                     {"mu", q.mu()},
                     {"project_power", value}},
                    flags->pick());
    });
}

void setup_region(CLI::App& app) {
    auto* cmd =
        app.add_subcommand("region", "largest replication p-value still counting as success");
    auto flags = std::make_shared<FormatFlags>();
    auto po = std::make_shared<double>(0.0);
    auto alpha = std::make_shared<double>(0.025);
    auto c = std::make_shared<double>(1.0);
    cmd->add_option("--po", *po, "original one-sided p-value")->required();
    cmd->add_option("--c", *c, "variance ratio")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([flags, po, alpha, c] {
        check_prob_open(*po, "--po");
        double boundary = sceptic::success_region_boundary(*po, *alpha, *c);
        emit_record({{"p_o", *po}, {"alpha", *alpha}, {"c", *c}, {"p_r_max", boundary}},
                    flags->pick());
    });
}

void setup_analyze(CLI::App& app) {
    auto* cmd = app.add_subcommand("analyze", "per-study table for a replication-project CSV");
    auto flags = std::make_shared<FormatFlags>();
    auto path = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(0.025);
    auto tol = std::make_shared<double>(1e-9);
    cmd->add_option("file", *path, "study CSV file")->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    cmd->add_option("--tol", *tol, "boundary tolerance for the success verdicts")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([flags, path, alpha, tol] {
        auto records = sceptic::load_studies(*path);
        auto rows = sceptic::analyze_studies(records, *alpha, *tol);
        std::vector<std::string> header = {
            "study",     "r_o",        "n_o",       "r_r",      "n_r",
            "theta_o",   "se_o",       "theta_r",   "se_r",     "z_o",
            "z_r",       "p_o",        "p_r",       "c",        "power_2tr",
            "c_star",    "c_star_feasible",         "p_max",    "p_s_star",
            "success_2tr", "success_sceptical"};
        std::vector<std::vector<json>> table;
        table.reserve(rows.size());
        for (const auto& row : rows) {
            const auto& rec = row.record;
            json r_o = rec.from_theta_se ? json() : json(rec.r_o);
            json n_o = rec.from_theta_se ? json() : json(rec.n_o);
            json r_r = rec.from_theta_se ? json() : json(rec.r_r);
            json n_r = rec.from_theta_se ? json() : json(rec.n_r);
            table.push_back({rec.study_id, r_o, n_o, r_r, n_r, rec.theta_o, rec.se_o,
                             rec.theta_r, rec.se_r, rec.z_o, rec.z_r, rec.p_o, rec.p_r,
                             rec.c, row.power_2tr, row.c_star, row.c_star_feasible,
                             row.p_max, row.p_s_star, row.success_2tr,
                             row.success_sceptical});
        }
        OutFormat fmt = flags->pick();
        emit_table(header, table, fmt == OutFormat::TEXT ? OutFormat::CSV : fmt);
    });
}

void setup_figure(CLI::App& app) {
    auto* cmd = app.add_subcommand("figure", "deterministic plot data");
    auto flags = std::make_shared<FormatFlags>();
    auto id = std::make_shared<std::string>();
    auto alpha = std::make_shared<double>(0.025);
    cmd->add_option("id", *id,
                    "F1_CDF, F2_PS_VS_C, F3_REGIONS, F4_POWER_RATIOS, F5_PROJECT_POWER, "
                    "or F6_COND_T1E")
        ->required();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    add_format_flags(cmd, flags);
    cmd->callback([flags, id, alpha] {
        auto rows = sceptic::emit_figure_data(sceptic::parse_figure_id(*id), *alpha);
        std::vector<std::vector<json>> table;
        table.reserve(rows.size());
        for (const auto& row : rows) table.push_back({row.x, row.series, row.y});
        OutFormat fmt = flags->pick();
        emit_table({"x", "series", "y"}, table, fmt == OutFormat::TEXT ? OutFormat::CSV : fmt);
    });
}

void setup_simulate(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Monte Carlo success rate under a chosen truth");
    auto truth = std::make_shared<std::string>("intersection");
    auto method = std::make_shared<std::string>("controlled");
    auto mu = std::make_shared<double>(0.0);
    auto c = std::make_shared<double>(1.0);
    auto alpha = std::make_shared<double>(0.025);
    auto nrep = std::make_shared<std::uint64_t>(1000000);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto stream = std::make_shared<std::uint64_t>(0);
    cmd->add_option("--truth", *truth,
                    "intersection, union_original, union_replication, or equal_effects")->capture_default_str()
        ->check(CLI::IsMember(
            {"intersection", "union_original", "union_replication", "equal_effects"}));
    cmd->add_option("--method", *method,
                    "two_trials, controlled, nominal, golden, fisher, stouffer, or pearson")->capture_default_str()
        ->check(CLI::IsMember(
            {"two_trials", "controlled", "nominal", "golden", "fisher", "stouffer", "pearson"}));
    cmd->add_option("--mu", *mu, "standardized mean of the non-null side")->capture_default_str();
    cmd->add_option("--c", *c, "variance ratio")->capture_default_str();
    cmd->add_option("--alpha", *alpha, "one-sided level")->capture_default_str();
    cmd->add_option("--nrep", *nrep, "number of simulated study pairs")->capture_default_str();
    cmd->add_option("--seed", *seed, "random seed")->capture_default_str();
    cmd->add_option("--stream", *stream, "stream id")->capture_default_str();
    cmd->callback([truth, method, mu, c, alpha, nrep, seed, stream] {
        sceptic::SimConfig config;
        if (*truth == "intersection") config.truth = sceptic::Truth::INTERSECTION_NULL;
        else if (*truth == "union_original") config.truth = sceptic::Truth::UNION_NULL_ORIGINAL;
        else if (*truth == "union_replication")
            config.truth = sceptic::Truth::UNION_NULL_REPLICATION;
        else config.truth = sceptic::Truth::EQUAL_EFFECTS;
        if (*method == "two_trials") config.method = sceptic::SimMethod::TWO_TRIALS;
        else if (*method == "controlled")
            config.method = sceptic::SimMethod::SCEPTICAL_CONTROLLED;
        else if (*method == "nominal") config.method = sceptic::SimMethod::SCEPTICAL_NOMINAL;
        else if (*method == "golden") config.method = sceptic::SimMethod::SCEPTICAL_GOLDEN;
        else if (*method == "fisher") config.method = sceptic::SimMethod::FISHER;
        else if (*method == "stouffer") config.method = sceptic::SimMethod::STOUFFER;
        else config.method = sceptic::SimMethod::PEARSON;
        config.mu = *mu;
        config.c = *c;
        config.alpha = *alpha;
        config.n_rep = *nrep;
        config.rng.seed = *seed;
        config.rng.stream_id = *stream;
        sceptic::SimResult res = sceptic::simulate_rate(config);
        json line = {{"estimate", res.estimate},
                     {"std_error", res.std_error},
                     {"ci95", {res.ci95.first, res.ci95.second}},
                     {"n_rep", res.n_rep},
                     {"seed", res.seed}};
        std::cout << line.dump() << '\n';
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sceptical p-value toolkit: exact Type-I-error-controlled replication success"};
    app.require_subcommand(1);
    setup_ps(app);
    setup_calibrate(app);
    setup_t1e(app);
    setup_power(app);
    setup_samplesize(app);
    setup_projectpower(app);
    setup_region(app);
    setup_analyze(app);
    setup_figure(app);
    setup_simulate(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const sceptic::infeasibility_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
