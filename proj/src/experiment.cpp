#include "stc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <set>
#include <stdexcept>

#include "stc/criteria.hpp"
#include "stc/udm.hpp"
#include "stc/waterfill.hpp"

namespace stc {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument(path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const Json& expect_object(const Json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    expect_object(j, path);
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j.items())
        if (!ok.count(item.key())) fail(join(path, item.key()), "unknown field");
}

const Json& get_field(const Json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(join(path, key), "missing required field");
    return j.at(key);
}

long get_int(const Json& j, const char* key, const std::string& path, long lo, long hi) {
    const Json& v = get_field(j, key, path);
    if (!v.is_number_integer()) fail(join(path, key), "expected an integer");
    const long x = v.get<long>();
    if (x < lo || x > hi)
        fail(join(path, key),
             "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return x;
}

double get_num(const Json& j, const char* key, const std::string& path, double lo, double hi) {
    const Json& v = get_field(j, key, path);
    if (!v.is_number()) fail(join(path, key), "expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) fail(join(path, key), "out of range");
    return x;
}

double get_num_or(const Json& j, const char* key, const std::string& path, double lo, double hi,
                  double fallback) {
    return j.contains(key) ? get_num(j, key, path, lo, hi) : fallback;
}

std::string get_str(const Json& j, const char* key, const std::string& path) {
    const Json& v = get_field(j, key, path);
    if (!v.is_string()) fail(join(path, key), "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_num_array(const Json& j, const char* key, const std::string& path) {
    const Json& v = get_field(j, key, path);
    if (!v.is_array() || v.empty()) fail(join(path, key), "expected a nonempty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v.at(i).is_number())
            fail(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v.at(i).get<double>());
    }
    return out;
}

// trials: either one integer applied to every point or an array per point.
std::vector<long> get_trials(const Json& j, const std::string& path, std::size_t points) {
    const Json& v = get_field(j, "trials", path);
    std::vector<long> out;
    if (v.is_number_integer()) {
        out.assign(points, v.get<long>());
    } else if (v.is_array()) {
        if (v.size() != points) fail(join(path, "trials"), "length must match snr_db");
        for (const Json& e : v) {
            if (!e.is_number_integer()) fail(join(path, "trials"), "expected integers");
            out.push_back(e.get<long>());
        }
    } else {
        fail(join(path, "trials"), "expected an integer or array of integers");
    }
    for (long t : out)
        if (t < 100 || t > 4'000'000'000L) fail(join(path, "trials"), "out of range [100, 4e9]");
    return out;
}

std::vector<DigitPermutation> parse_perms(const Json& code, const std::string& path, int branches,
                                          int rail_bits) {
    const Json& v = get_field(code, "perms", path);
    if (!v.is_array() || static_cast<int>(v.size()) != branches - 1)
        fail(join(path, "perms"), "expected " + std::to_string(branches - 1) + " names");
    std::vector<DigitPermutation> perms;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string where = join(path, "perms") + "[" + std::to_string(i) + "]";
        if (!v.at(i).is_string()) fail(where, "expected a string");
        const std::string name = v.at(i).get<std::string>();
        if (name == "identity")
            perms.push_back(identity_perm(1L << rail_bits));
        else if (name == "bit-reversal")
            perms.push_back(bit_reversal_perm(rail_bits));
        else if (name == "alt-flip")
            perms.push_back(alt_flip_reversal_perm(rail_bits));
        else
            fail(where, "unknown permutation (identity | bit-reversal | alt-flip)");
    }
    return perms;
}

UdmFamily build_udm_family(const Json& spec, const std::string& path) {
    const std::string kind = get_str(spec, "kind", path);
    if (kind == "identity-pair") {
        check_keys(spec, path, {"kind", "n"});
        return build_identity_pair(static_cast<int>(get_int(spec, "n", path, 1, 16)));
    }
    if (kind == "tensor") {
        check_keys(spec, path, {"kind", "n"});
        return build_tensor_T(static_cast<int>(get_int(spec, "n", path, 1, 16)));
    }
    if (kind == "l4-f3") {
        check_keys(spec, path, {"kind", "n"});
        return build_L4_F3(static_cast<int>(get_int(spec, "n", path, 1, 3)));
    }
    if (kind == "pascal" || kind == "rs") {
        check_keys(spec, path, {"kind", "p", "m", "n", "L"});
        const int p = static_cast<int>(get_int(spec, "p", path, 2, 65521));
        const int m = static_cast<int>(get_int(spec, "m", path, 1, 16));
        const int n = static_cast<int>(get_int(spec, "n", path, 1, 16));
        const int L = static_cast<int>(get_int(spec, "L", path, 1, 64));
        const Field f = Field::make(p, m);
        if (kind == "pascal") return build_pascal(n, L, f);
        return build_rs_mds(n, L, f).family;
    }
    fail(join(path, "kind"), "unknown construction (identity-pair | tensor | l4-f3 | pascal | rs)");
}

FadingModel parse_channel_impl(const Json& spec, const std::string& path) {
    const std::string model = get_str(spec, "model", path);
    if (model == "rayleigh") {
        check_keys(spec, path, {"model", "nr", "nt"});
        return FadingModel::rayleigh(static_cast<int>(get_int(spec, "nr", path, 1, 16)),
                                     static_cast<int>(get_int(spec, "nt", path, 1, 16)));
    }
    if (model == "isotropic") {
        check_keys(spec, path, {"model", "exponents", "tail_rate"});
        const std::vector<double> e = get_num_array(spec, "exponents", path);
        RVector k(static_cast<Eigen::Index>(e.size()));
        for (std::size_t i = 0; i < e.size(); ++i) k(static_cast<Eigen::Index>(i)) = e[i];
        const double tail = get_num_or(spec, "tail_rate", path, 1e-6, 1e6, 0.1);
        return FadingModel::isotropic(k, tail);
    }
    if (model == "miso-degenerate") {
        check_keys(spec, path, {"model", "nt", "zeroed"});
        const int nt = static_cast<int>(get_int(spec, "nt", path, 1, 16));
        std::vector<int> zeroed;
        const Json& z = get_field(spec, "zeroed", path);
        if (!z.is_array()) fail(join(path, "zeroed"), "expected an array");
        for (const Json& e : z) {
            if (!e.is_number_integer()) fail(join(path, "zeroed"), "expected integers");
            zeroed.push_back(e.get<int>());
        }
        return FadingModel::degenerate_miso(nt, std::move(zeroed));
    }
    fail(join(path, "model"), "unknown model (rayleigh | isotropic | miso-degenerate)");
}

std::string fmt_long(long v) { return std::to_string(v); }

void write_json_artifact(const std::string& dir, const std::string& name, const Json& j,
                         std::vector<std::string>& outputs) {
    write_text_file(dir + "/" + name, j.dump(2) + "\n");
    outputs.push_back(name);
}

Json report_to_json(const UniversalityReport& r) {
    return Json{{"kind", r.kind},        {"rate_bits", r.rate_bits}, {"slack_c", r.slack_c},
                {"min_value", r.min_value}, {"threshold", r.threshold}, {"pair_a", r.pair_a},
                {"pair_b", r.pair_b},    {"pass", r.pass}};
}

}  // namespace

Codebook build_codebook(const Json& code, const std::string& path,
                        std::optional<std::uint64_t> seed) {
    const std::string family = get_str(code, "family", path);
    if (family == "qam") {
        check_keys(code, path, {"family", "rate_bits"});
        return make_qam(static_cast<int>(get_int(code, "rate_bits", path, 2, 16)));
    }
    if (family == "permutation") {
        check_keys(code, path, {"family", "branches", "rate_bits", "perms"});
        const int L = static_cast<int>(get_int(code, "branches", path, 2, 8));
        const int R = static_cast<int>(get_int(code, "rate_bits", path, 2, 16));
        if (R % 2 != 0) fail(join(path, "rate_bits"), "must be even");
        const auto perms = parse_perms(code, path, L, R / 2);
        return make_permutation_code(L, R, perms, PamSpec{2, R / 2, 0.0, 0.0});
    }
    if (family == "udm") {
        check_keys(code, path, {"family", "spec", "gap"});
        const UdmFamily fam = build_udm_family(get_field(code, "spec", path), join(path, "spec"));
        const double gap = get_num_or(code, "gap", path, 0.0, 64.0, 1.0);
        return make_udm_code(fam, PamSpec{fam.field.size(), fam.n, gap, 0.0});
    }
    if (family == "rotated") {
        check_keys(code, path, {"family", "rate_bits"});
        return make_rotated_qam(static_cast<int>(get_int(code, "rate_bits", path, 2, 8)));
    }
    if (family == "alamouti") {
        check_keys(code, path, {"family", "rate_bits"});
        return make_alamouti(make_qam(static_cast<int>(get_int(code, "rate_bits", path, 2, 8))));
    }
    if (family == "vblast") {
        check_keys(code, path, {"family", "nt", "bits_per_antenna"});
        return make_vblast(static_cast<int>(get_int(code, "nt", path, 1, 8)),
                           static_cast<int>(get_int(code, "bits_per_antenna", path, 2, 10)));
    }
    if (family == "dblast" || family == "timespace" || family == "diagonal") {
        if (family == "diagonal")
            check_keys(code, path, {"family", "branches", "rate_bits", "perms"});
        else
            check_keys(code, path, {"family", "rate_bits", "perms"});
        const int L = (family == "diagonal")
                          ? static_cast<int>(get_int(code, "branches", path, 2, 8))
                          : 2;
        const int R = static_cast<int>(get_int(code, "rate_bits", path, 2, 12));
        if (R % 2 != 0) fail(join(path, "rate_bits"), "must be even");
        const auto perms = parse_perms(code, path, L, R / 2);
        const Codebook stream = make_permutation_code(L, R, perms, PamSpec{2, R / 2, 0.0, 0.0});
        if (family == "dblast") return make_dblast_two_stream(L, stream);
        if (family == "timespace") return make_timespace(L, stream);
        return make_diagonal_code(stream);
    }
    if (family == "permutation-search") {
        check_keys(code, path, {"family", "branches", "rate_bits", "draws"});
        if (!seed) fail(path, "permutation-search requires a seed");
        const int L = static_cast<int>(get_int(code, "branches", path, 2, 8));
        const int R = static_cast<int>(get_int(code, "rate_bits", path, 2, 12));
        const int draws = static_cast<int>(get_int(code, "draws", path, 1, 100000));
        if (R % 2 != 0) fail(join(path, "rate_bits"), "must be even");
        return search_permutation_code(L, R, draws, *seed).codebook;
    }
    fail(join(path, "family"), "unknown family");
}

FadingModel parse_channel(const Json& spec, const std::string& path) {
    return parse_channel_impl(spec, path);
}

ExperimentConfig parse_config(const Json& document) {
    expect_object(document, "");
    ExperimentConfig cfg;
    cfg.job = get_str(document, "job", "");
    cfg.spec = document;
    if (document.contains("threads"))
        cfg.threads = static_cast<int>(get_int(document, "threads", "", 0, 256));
    if (document.contains("seed")) {
        const Json& s = document.at("seed");
        if (!s.is_number_unsigned() && !s.is_number_integer()) fail("seed", "expected an integer");
        if (s.is_number_integer() && s.get<long long>() < 0) fail("seed", "must be nonnegative");
        cfg.seed = s.get<std::uint64_t>();
    }

    if (cfg.job == "construct") {
        check_keys(document, "", {"job", "code", "seed", "threads"});
        const Json& code = get_field(document, "code", "");
        const std::string family = get_str(code, "family", "code");
        cfg.needs_seed = (family == "permutation-search");
        build_codebook(code, "code", cfg.seed ? cfg.seed : std::optional<std::uint64_t>(0));
        return cfg;
    }
    if (cfg.job == "verify") {
        check_keys(document, "", {"job", "code", "check", "nr", "slack_c", "seed", "threads"});
        const Json& code = get_field(document, "code", "");
        cfg.needs_seed = (get_str(code, "family", "code") == "permutation-search");
        build_codebook(code, "code", cfg.seed ? cfg.seed : std::optional<std::uint64_t>(0));
        if (document.contains("check")) {
            const std::string check = get_str(document, "check", "");
            if (check != "auto" && check != "scalar" && check != "parallel" && check != "miso" &&
                check != "mimo")
                fail("check", "unknown check (auto | scalar | parallel | miso | mimo)");
        }
        if (document.contains("nr")) get_int(document, "nr", "", 1, 16);
        if (document.contains("slack_c")) get_num(document, "slack_c", "", 1e-9, 1e9);
        return cfg;
    }
    if (cfg.job == "waterfill") {
        check_keys(document, "", {"job", "code", "nr", "rate_bits", "snr_db", "seed", "threads"});
        const Json& code = get_field(document, "code", "");
        cfg.needs_seed = (get_str(code, "family", "code") == "permutation-search");
        build_codebook(code, "code", cfg.seed ? cfg.seed : std::optional<std::uint64_t>(0));
        get_int(document, "nr", "", 1, 16);
        if (document.contains("rate_bits")) get_num(document, "rate_bits", "", 1e-9, 64.0);
        if (document.contains("snr_db")) get_num(document, "snr_db", "", -50.0, 200.0);
        return cfg;
    }
    if (cfg.job == "udm") {
        check_keys(document, "", {"job", "family", "threads"});
        build_udm_family(get_field(document, "family", ""), "family");
        return cfg;
    }
    if (cfg.job == "outage") {
        check_keys(document, "",
                   {"job", "channel", "multiplexing", "snr_db", "trials", "seed", "threads"});
        cfg.needs_seed = true;
        parse_channel_impl(get_field(document, "channel", ""), "channel");
        get_num(document, "multiplexing", "", 0.0, 16.0);
        const auto snrs = get_num_array(document, "snr_db", "");
        for (double s : snrs)
            if (s <= 0.0) fail("snr_db", "points must be positive (rate = r log2 snr)");
        get_trials(document, "", snrs.size());
        return cfg;
    }
    if (cfg.job == "simulate") {
        check_keys(document, "",
                   {"job", "code", "channel", "snr_db", "trials", "min_errors", "seed", "threads"});
        cfg.needs_seed = true;
        const Json& code = get_field(document, "code", "");
        build_codebook(code, "code", cfg.seed ? cfg.seed : std::optional<std::uint64_t>(0));
        parse_channel_impl(get_field(document, "channel", ""), "channel");
        const auto snrs = get_num_array(document, "snr_db", "");
        get_trials(document, "", snrs.size());
        if (document.contains("min_errors")) get_int(document, "min_errors", "", 1, 1000000);
        return cfg;
    }
    fail("job", "unknown job (construct | verify | waterfill | udm | outage | simulate)");
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    std::optional<std::uint64_t> seed = cfg.seed;
    if (opts.seed_override) seed = opts.seed_override;
    if (cfg.needs_seed && !seed)
        throw std::invalid_argument("seed: required for this job (config field or --seed)");
    const int threads = opts.threads_override ? *opts.threads_override : cfg.threads;
    const std::uint64_t seed_value = seed.value_or(0);

    std::filesystem::create_directories(opts.out_dir);
    std::vector<std::string> outputs;
    const std::string hash = hex64(fnv1a64(canonical_dump(cfg.spec)));
    RunOutcome out;

    if (cfg.job == "construct") {
        const Codebook cb = build_codebook(cfg.spec.at("code"), "code", seed);
        write_json_artifact(opts.out_dir, "codebook.json", codebook_to_json(cb), outputs);
        out.summary = Json{{"family", cb.family},   {"size", cb.size()},
                           {"nt", cb.nt},           {"T", cb.T},
                           {"rate_bits", cb.rate_bits}, {"power_scale", cb.power_scale}};
    } else if (cfg.job == "verify") {
        const Codebook cb = build_codebook(cfg.spec.at("code"), "code", seed);
        std::string check =
            cfg.spec.contains("check") ? cfg.spec.at("check").get<std::string>() : "auto";
        if (check == "auto") {
            if (cb.nt == 1 && cb.T == 1)
                check = "scalar";
            else if (cb.T == 1)
                check = "parallel";
            else
                check = "mimo";
        }
        const double slack =
            cfg.spec.contains("slack_c") ? cfg.spec.at("slack_c").get<double>() : 1.0;
        UniversalityReport rep;
        if (check == "scalar")
            rep = check_scalar(cb, cb.rate_bits, slack);
        else if (check == "parallel")
            rep = check_parallel(cb, cb.rate_bits, slack);
        else if (check == "miso")
            rep = check_miso(cb, cb.rate_bits, slack);
        else {
            if (!cfg.spec.contains("nr"))
                throw std::invalid_argument("nr: required for the mimo check");
            rep = check_mimo(cb, cb.rate_bits, cfg.spec.at("nr").get<int>(), slack);
        }
        write_json_artifact(opts.out_dir, "report.json", report_to_json(rep), outputs);
        out.summary = report_to_json(rep);
        if (!rep.pass) {
            out.exit_code = 2;
            out.failing_stage = "universality check";
        }
    } else if (cfg.job == "waterfill") {
        const Codebook cb = build_codebook(cfg.spec.at("code"), "code", seed);
        const int nr = cfg.spec.at("nr").get<int>();
        const double rate =
            cfg.spec.contains("rate_bits") ? cfg.spec.at("rate_bits").get<double>() : cb.rate_bits;
        const double snr_db =
            cfg.spec.contains("snr_db") ? cfg.spec.at("snr_db").get<double>() : 20.0;
        const CodebookWorstReport rep = codebook_worst_report(cb, rate, nr);
        CsvTable csv;
        csv.comments = {"config_hash=" + hash};
        csv.header = {"pair_a", "pair_b", "active_k", "lagrange_level", "criterion"};
        for (const WorstPairRow& row : rep.table)
            csv.rows.push_back({fmt_long(row.a), fmt_long(row.b), fmt_long(row.active_k),
                                format_double(row.lagrange_level), format_double(row.criterion)});
        write_text_file(opts.out_dir + "/worst_pairs.csv", csv_to_string(csv));
        outputs.push_back("worst_pairs.csv");

        const CMatrix diff = normalized_difference(cb.words[static_cast<std::size_t>(rep.arg_a)],
                                                   cb.words[static_cast<std::size_t>(rep.arg_b)]);
        RVector sv = singular_values_ascending(diff);
        const int take = std::min<int>(nr, cb.nt);
        const RVector kept = sv.head(take);
        const WorstCaseResult worst =
            solve_worst_channel(kept, rate, std::pow(10.0, snr_db / 10.0));
        Json alloc = Json::array();
        Json psi = Json::array();
        for (Eigen::Index i = 0; i < worst.allocations.size(); ++i) {
            alloc.push_back(worst.allocations(i));
            psi.push_back(worst.worst_singular_values(i));
        }
        out.summary = Json{{"min_criterion", rep.min_criterion},
                           {"pair_a", rep.arg_a},
                           {"pair_b", rep.arg_b},
                           {"rate_bits", rate},
                           {"snr_db", snr_db},
                           {"active_k", worst.active_k},
                           {"lagrange_level", worst.lagrange_level},
                           {"worst_pep", worst.worst_pep},
                           {"allocations", alloc},
                           {"worst_singular_values", psi}};
        write_json_artifact(opts.out_dir, "worst.json", out.summary, outputs);
    } else if (cfg.job == "udm") {
        UdmFamily fam = build_udm_family(cfg.spec.at("family"), "family");
        const UdmVerifyResult ver = udm_verify(fam);
        Json fj = udm_to_json(fam);
        fj["decodable"] = ver.pass;
        if (ver.counterexample) fj["counterexample"] = *ver.counterexample;
        write_json_artifact(opts.out_dir, "family.json", fj, outputs);
        out.summary = Json{{"provenance", fam.provenance},
                           {"n", fam.n},
                           {"L", fam.L},
                           {"field_size", fam.field.size()},
                           {"decodable", ver.pass}};
        if (!ver.pass) {
            out.exit_code = 2;
            out.failing_stage = "decodability check";
        }
    } else if (cfg.job == "outage") {
        const FadingModel model = parse_channel(cfg.spec.at("channel"), "channel");
        const double r = cfg.spec.at("multiplexing").get<double>();
        const std::vector<double> snr_db = get_num_array(cfg.spec, "snr_db", "");
        const std::vector<long> trials = get_trials(cfg.spec, "", snr_db.size());
        CsvTable csv;
        csv.comments = {"config_hash=" + hash, "seed=" + std::to_string(seed_value)};
        csv.header = {"snr_db", "rate_bits", "p_out", "ci_halfwidth", "trials", "events"};
        Json points = Json::array();
        for (std::size_t i = 0; i < snr_db.size(); ++i) {
            const double snr = std::pow(10.0, snr_db[i] / 10.0);
            const double rate = r * std::log2(snr);
            const OutageEstimate est = outage_prob_mc(model, rate, snr, trials[i],
                                                      seed_value + i, threads);
            csv.rows.push_back({format_double(snr_db[i]), format_double(rate),
                                format_double(est.probability), format_double(est.ci_halfwidth),
                                fmt_long(est.trials), fmt_long(est.events)});
            points.push_back(Json{{"snr_db", snr_db[i]},
                                  {"rate_bits", rate},
                                  {"p_out", est.probability},
                                  {"ci_halfwidth", est.ci_halfwidth},
                                  {"trials", est.trials},
                                  {"events", est.events}});
        }
        write_text_file(opts.out_dir + "/outage.csv", csv_to_string(csv));
        outputs.push_back("outage.csv");
        Json summary{{"multiplexing", r}, {"points", points}};
        if (model.kind == FadingModel::Kind::iid_rayleigh) {
            const OutageCurve curve = outage_curve_analytic(rayleigh_exponents(model.nr, model.nt));
            Json bps = Json::array();
            for (const auto& [br, bd] : curve.breakpoints)
                bps.push_back(Json::array({br, bd}));
            summary["analytic"] = Json{{"breakpoints", bps}, {"d_at_r", curve.value(r)}};
        } else if (model.kind == FadingModel::Kind::isotropic) {
            const OutageCurve curve = outage_curve_analytic(model.exponents);
            Json bps = Json::array();
            for (const auto& [br, bd] : curve.breakpoints)
                bps.push_back(Json::array({br, bd}));
            summary["analytic"] = Json{{"breakpoints", bps}, {"d_at_r", curve.value(r)}};
        }
        out.summary = std::move(summary);
        write_json_artifact(opts.out_dir, "outage.json", out.summary, outputs);
    } else if (cfg.job == "simulate") {
        const Codebook cb = build_codebook(cfg.spec.at("code"), "code", seed);
        const FadingModel model = parse_channel(cfg.spec.at("channel"), "channel");
        const std::vector<double> snr_db = get_num_array(cfg.spec, "snr_db", "");
        const std::vector<long> trials = get_trials(cfg.spec, "", snr_db.size());
        const long min_errors =
            cfg.spec.contains("min_errors") ? cfg.spec.at("min_errors").get<long>() : 10;
        const SimResult sim = simulate_pe(cb, model, snr_db, trials, seed_value, threads);
        CsvTable csv;
        csv.comments = {"config_hash=" + hash, "seed=" + std::to_string(seed_value)};
        csv.header = {"snr_db", "p_e", "ci_halfwidth", "trials", "errors"};
        for (std::size_t i = 0; i < snr_db.size(); ++i)
            csv.rows.push_back({format_double(snr_db[i]), format_double(sim.pe[i]),
                                format_double(sim.ci_halfwidth[i]), fmt_long(sim.trials[i]),
                                fmt_long(sim.errors[i])});
        write_text_file(opts.out_dir + "/pe.csv", csv_to_string(csv));
        outputs.push_back("pe.csv");
        out.summary = Json{{"family", cb.family},
                           {"rate_bits", cb.rate_bits},
                           {"rng", sim.rng_name},
                           {"power_rescale", sim.power_rescale}};
        try {
            const SlopeFit fit = estimate_diversity(sim, min_errors);
            out.summary["slope"] = Json{{"value", fit.slope},
                                        {"std_error", fit.std_error},
                                        {"points_used", fit.points_used}};
        } catch (const std::domain_error&) {
            out.summary["slope"] = nullptr;
        }
        write_json_artifact(opts.out_dir, "summary.json", out.summary, outputs);
    } else {
        throw std::logic_error("run_experiment: unvalidated job " + cfg.job);
    }

    Json manifest = make_manifest(cfg.spec, seed_value, outputs);
    manifest["job"] = cfg.job;
    manifest["exit_code"] = out.exit_code;
    if (!out.failing_stage.empty()) manifest["failing_stage"] = out.failing_stage;
    write_text_file(opts.out_dir + "/manifest.json", manifest.dump(2) + "\n");
    return out;
}

}  // namespace stc
