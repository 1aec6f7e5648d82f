// Command-line harness: evaluates the shipped quasi-distances, runs the cover
// validators and metric certifiers, drives the metric -> cover round trip,
// and exports ball boundary point clouds.
//
// Exit codes: 0 = all checks passed, 1 = a check failed or a computation
// could not certify, 2 = bad usage or rejected configuration.
//
// Reports are single JSON documents: {schema_version, command, config,
// results, pass, wall_time_s}. Everything under `results` is a deterministic
// function of `config` minus `workers`, so runs are machine-diffable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecov/characterization.hpp"
#include "ecov/cover.hpp"
#include "ecov/error.hpp"
#include "ecov/quasi_distance.hpp"
#include "ecov/validators.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace ecov;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

ordered_json report_json(const CertReport& r) {
    ordered_json j;
    j["check"] = r.check;
    j["subject"] = r.subject;
    j["pass"] = r.pass;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    ordered_json c = ordered_json::object();
    for (const auto& [name, value] : r.constants) c[name] = value;
    j["constants"] = c;
    ordered_json ws = ordered_json::array();
    for (const Witness& w : r.witnesses) {
        ws.push_back(ordered_json{{"label", w.label}, {"data", w.data}});
    }
    j["witnesses"] = ws;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

void emit(const std::string& out_path, const ordered_json& doc) {
    std::string text = doc.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw contract_error("cannot open output file: " + out_path);
    f << text;
}

ordered_json finish(const std::string& command, const ordered_json& config,
                    ordered_json results, bool pass,
                    std::chrono::steady_clock::time_point start) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["config"] = config;
    doc["results"] = std::move(results);
    doc["pass"] = pass;
    doc["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return doc;
}

Vec to_vec(const std::vector<double>& v) {
    Vec::check_dim(static_cast<int>(v.size()));
    Vec x(static_cast<int>(v.size()));
    for (int i = 0; i < x.size(); ++i) x[i] = v[static_cast<std::size_t>(i)];
    return x;
}

// ---------------------------------------------------------------------------
// Selector tables

struct MetricFlags {
    std::string name = "theta0";
    int k = 1;
    int dim = 2;
};

QuasiDistance metric_from(const MetricFlags& m) {
    if (m.name == "theta0") return theta0_metric();
    if (m.name == "theta0-induced") return induced_metric(theta0_cover());
    if (m.name == "nsw") return nsw_metric(m.k);
    if (m.name == "supnorm") return supnorm_metric(m.dim);
    if (m.name == "euclidean") return euclidean_metric(m.dim);
    if (m.name == "isotropic") return isotropic_induced_metric(m.dim);
    throw contract_error("unknown metric selector: " + m.name);
}

struct CoverFlags {
    std::string name = "theta0";
    int k = 1;
    int dim = 2;
    std::vector<double> exponents;
};

Cover cover_from(const CoverFlags& c) {
    if (c.name == "theta0") return theta0_cover();
    if (c.name == "corrupted-theta0") return corrupted_theta0_cover();
    if (c.name == "isotropic") return isotropic_cover(c.dim);
    if (c.name == "nsw") return nsw_cover(c.k);
    if (c.name == "diagonal") {
        if (c.exponents.empty())
            throw contract_error("diagonal cover needs --exponents");
        return diagonal_cover(to_vec(c.exponents));
    }
    throw contract_error("unknown cover selector: " + c.name);
}

void add_metric_flags(CLI::App* sub, MetricFlags& m) {
    sub->add_option("--metric", m.name, "theta0|theta0-induced|nsw|supnorm|euclidean|isotropic")
        ->required();
    sub->add_option("--k", m.k, "flag-type metric order (nsw)")->check(CLI::Range(0, 6));
    sub->add_option("--dim", m.dim, "dimension (supnorm/euclidean/isotropic)")
        ->check(CLI::Range(2, kMaxDim));
}

ordered_json metric_config(const MetricFlags& m) {
    ordered_json j;
    j["metric"] = m.name;
    if (m.name == "nsw") j["k"] = m.k;
    if (m.name == "supnorm" || m.name == "euclidean" || m.name == "isotropic")
        j["dim"] = m.dim;
    return j;
}

// ---------------------------------------------------------------------------
// dist

struct DistArgs {
    MetricFlags metric;
    std::vector<double> x, y;
    std::string out;
};

int cmd_dist(const DistArgs& a) {
    auto start = std::chrono::steady_clock::now();
    QuasiDistance d = metric_from(a.metric);
    Vec x = to_vec(a.x);
    Vec y = to_vec(a.y);
    if (x.size() != d.dim || y.size() != d.dim)
        throw contract_error("point dimension does not match the metric");

    ordered_json results;
    if (a.metric.name == "theta0") {
        Theta0RhoDetail det = rho_theta0_detail(x, y);
        results["value"] = det.value;
        results["case"] = det.case_id;
        if (det.case_id == 2) results["phi"] = det.phi;
        if (det.case_id == 3) {
            results["z"] = det.z;
            results["max_form"] = det.max_form;
        }
    } else {
        results["value"] = d.eval(x, y);
    }

    ordered_json config = metric_config(a.metric);
    config["x"] = a.x;
    config["y"] = a.y;
    emit(a.out, finish("dist", config, std::move(results), true, start));
    return kExitPass;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
    CoverFlags cover;
    std::uint64_t seed = 0;
    std::uint64_t samples = 10000;
    double box_half = 4.0;
    double t_lo = -8.0;
    double t_hi = 24.0;
    double s_max = 12.0;
    double tol = 1e-6;
    double lambda_log2_max = 5.0;
    std::uint64_t engulf_samples = 0; // 0 = samples / 5
    int workers = 1;
    std::string out;
};

int cmd_validate(const ValidateArgs& a) {
    auto start = std::chrono::steady_clock::now();
    Cover cover = cover_from(a.cover);

    CoverSampleOptions so;
    so.seed = a.seed;
    so.samples = a.samples;
    so.box_half = a.box_half;
    so.t_lo = a.t_lo;
    so.t_hi = a.t_hi;
    so.s_max = a.s_max;
    so.workers = a.workers;
    so.tol = a.tol;

    EngulfOptions eo;
    eo.seed = a.seed;
    eo.samples = a.engulf_samples ? a.engulf_samples : std::max<std::uint64_t>(200, a.samples / 5);
    eo.box_half = a.box_half;
    eo.t_lo = a.t_lo;
    eo.t_hi = a.t_hi;
    eo.s_max = a.s_max;
    eo.lambda_log2_max = a.lambda_log2_max;
    eo.workers = a.workers;

    ordered_json results;
    bool pass = true;
    for (const CertReport& rep :
         {validate_volume(cover, so), validate_shape_norm(cover, so),
          validate_shape_geometric(cover, so), engulf_constant(cover, eo),
          union_engulf(cover, eo)}) {
        results[rep.check] = report_json(rep);
        pass = pass && rep.pass;
    }
    if (a.cover.name == "theta0") {
        CertReport cb = theta0_case_bounds(so);
        results[cb.check] = report_json(cb);
        pass = pass && cb.pass;
    }

    ordered_json config;
    config["cover"] = a.cover.name;
    if (a.cover.name == "nsw") config["k"] = a.cover.k;
    if (a.cover.name == "isotropic") config["dim"] = a.cover.dim;
    if (a.cover.name == "diagonal") config["exponents"] = a.cover.exponents;
    config["seed"] = a.seed;
    config["samples"] = a.samples;
    config["box_half"] = a.box_half;
    config["t_lo"] = a.t_lo;
    config["t_hi"] = a.t_hi;
    config["s_max"] = a.s_max;
    config["tol"] = a.tol;
    config["lambda_log2_max"] = a.lambda_log2_max;
    config["engulf_samples"] = eo.samples;
    config["workers"] = a.workers;
    emit(a.out, finish("validate", config, std::move(results), pass, start));
    return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
    std::string property;
    MetricFlags metric;
    std::uint64_t seed = 0;
    std::uint64_t samples = 10000;
    double box_half = 4.0;
    double r_log2_lo = -10.0;
    double r_log2_hi = 4.0;
    double lambda_log2_max = 10.0;
    double a = 0.0;
    double b = 0.0;
    std::uint64_t centers = 48;
    int radii = 10;
    std::uint64_t mc_points = 20000;
    int workers = 1;
    std::string out;
};

int cmd_check(const CheckArgs& a) {
    auto start = std::chrono::steady_clock::now();
    QuasiDistance d = metric_from(a.metric);

    CertReport rep;
    if (a.property == "quasi-convex") {
        CheckOptions opt;
        opt.seed = a.seed;
        opt.samples = a.samples;
        opt.box_half = a.box_half;
        opt.r_log2_lo = a.r_log2_lo;
        opt.r_log2_hi = a.r_log2_hi;
        opt.workers = a.workers;
        rep = quasi_convexity_certify(d, opt).report;
    } else if (a.property == "inner") {
        InnerOptions opt;
        opt.seed = a.seed;
        opt.samples = a.samples;
        opt.box_half = a.box_half;
        opt.r_log2_lo = a.r_log2_lo;
        opt.r_log2_hi = a.r_log2_hi;
        opt.lambda_log2_max = a.lambda_log2_max;
        opt.workers = a.workers;
        rep = inner_property_check(d, a.a, a.b, opt);
    } else if (a.property == "ahlfors") {
        AhlforsOptions opt;
        opt.seed = a.seed;
        opt.centers = a.centers;
        opt.box_half = a.box_half;
        opt.r_log2_lo = a.r_log2_lo;
        opt.r_log2_hi = a.r_log2_hi;
        opt.radii = a.radii;
        opt.mc_points = a.mc_points;
        opt.workers = a.workers;
        rep = ahlfors_certify(d, opt);
    } else if (a.property == "triangle") {
        TripleSampleOptions opt;
        opt.seed = a.seed;
        opt.samples = a.samples;
        opt.box_half = a.box_half;
        opt.workers = a.workers;
        rep = triangle_constant(d, opt);
    } else if (a.property == "axioms") {
        TripleSampleOptions opt;
        opt.seed = a.seed;
        opt.samples = a.samples;
        opt.box_half = a.box_half;
        opt.workers = a.workers;
        rep = metric_axioms(d, opt);
    } else {
        throw contract_error("unknown property selector: " + a.property);
    }

    ordered_json config;
    config["property"] = a.property;
    ordered_json mc = metric_config(a.metric);
    for (auto& [k, v] : mc.items()) config[k] = v;
    config["seed"] = a.seed;
    config["samples"] = a.samples;
    config["box_half"] = a.box_half;
    config["r_log2_lo"] = a.r_log2_lo;
    config["r_log2_hi"] = a.r_log2_hi;
    if (a.property == "inner") {
        config["a"] = a.a;
        config["b"] = a.b;
        config["lambda_log2_max"] = a.lambda_log2_max;
    }
    if (a.property == "ahlfors") {
        config["centers"] = a.centers;
        config["radii"] = a.radii;
        config["mc_points"] = a.mc_points;
    }
    config["workers"] = a.workers;
    emit(a.out, finish("check", config, report_json(rep), rep.pass, start));
    return rep.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// roundtrip

struct RoundtripArgs {
    MetricFlags metric;
    std::uint64_t seed = 0;
    std::uint64_t pairs = 200;
    std::uint64_t cert_samples = 200;
    std::uint64_t triangle_samples = 10000;
    std::uint64_t ahlfors_centers = 24;
    std::uint64_t validator_samples = 800;
    std::uint64_t calibration_samples = 1200;
    double box_half = 4.0;
    int workers = 1;
    std::string out;
};

int cmd_roundtrip(const RoundtripArgs& a) {
    auto start = std::chrono::steady_clock::now();
    QuasiDistance d = metric_from(a.metric);

    ordered_json config = metric_config(a.metric);
    config["seed"] = a.seed;
    config["pairs"] = a.pairs;
    config["cert_samples"] = a.cert_samples;
    config["triangle_samples"] = a.triangle_samples;
    config["ahlfors_centers"] = a.ahlfors_centers;
    config["validator_samples"] = a.validator_samples;
    config["calibration_samples"] = a.calibration_samples;
    config["box_half"] = a.box_half;
    config["workers"] = a.workers;

    // Certification stage: the round trip is only meaningful for a
    // quasi-convex, 1-Ahlfors-regular quasi-distance, so measure those
    // constants first and stop (exit 1) if any certificate fails.
    CheckOptions qc;
    qc.seed = a.seed;
    qc.samples = a.cert_samples;
    qc.box_half = a.box_half;
    qc.workers = a.workers;
    QuasiConvexityCert cert = quasi_convexity_certify(d, qc);

    TripleSampleOptions ts;
    ts.seed = a.seed + 1;
    ts.samples = a.triangle_samples;
    ts.box_half = a.box_half;
    ts.workers = a.workers;
    CertReport tri = triangle_constant(d, ts);

    AhlforsOptions ao;
    ao.seed = a.seed + 2;
    ao.centers = a.ahlfors_centers;
    ao.box_half = a.box_half;
    ao.workers = a.workers;
    CertReport ahl = ahlfors_certify(d, ao);

    ordered_json results;
    ordered_json certification;
    certification["quasi_convexity"] = report_json(cert.report);
    certification["triangle"] = report_json(tri);
    certification["ahlfors"] = report_json(ahl);
    results["certification"] = certification;

    if (!(cert.report.pass && tri.pass && ahl.pass)) {
        emit(a.out, finish("roundtrip", config, std::move(results), false, start));
        return kExitFail;
    }

    double c1_hat = ahl.at("c1_hat");
    double q_hat = std::max(1.0, cert.Q_hat);
    double kappa_hat = std::max(1.0, tri.at("kappa_hat"));
    ConstantLedger led = derive_constants(std::max(1.0, c1_hat), q_hat, kappa_hat, d.dim);
    ordered_json ledger;
    ledger["c1"] = led.c1;
    ledger["Q"] = led.Q;
    ledger["kappa"] = led.kappa;
    ledger["c2"] = led.c2;
    ledger["n"] = led.n;
    ledger["c3"] = led.c3;
    ledger["c"] = led.c;
    ledger["d"] = led.d;
    ledger["epsilon"] = led.epsilon;
    ledger["a"] = led.a;
    ledger["b"] = led.b;
    results["constants"] = ledger;

    XiCoverInputs in;
    in.Q_hat = q_hat;
    in.c1_hat = led.c1;
    in.kappa_hat = kappa_hat;
    in.calibration_seed = a.seed + 3;
    in.calibration_samples = a.calibration_samples;
    in.box_half = a.box_half;
    in.workers = a.workers;
    Cover xi = build_xi_cover(d, in);
    ordered_json xp;
    xp["a1"] = xi.params.a1;
    xp["a2"] = xi.params.a2;
    xp["a3"] = xi.params.a3;
    xp["a4"] = xi.params.a4;
    xp["a5"] = xi.params.a5;
    xp["a6"] = xi.params.a6;
    results["xi_params"] = xp;

    CoverSampleOptions vs;
    vs.seed = a.seed + 4;
    vs.samples = a.validator_samples;
    vs.box_half = a.box_half;
    vs.t_lo = -4.0;
    vs.t_hi = 16.0;
    vs.s_max = 8.0;
    vs.workers = a.workers;
    CertReport sn = validate_shape_norm(xi, vs);
    CertReport sg = validate_shape_geometric(xi, vs);
    results[sn.check] = report_json(sn);
    results[sg.check] = report_json(sg);

    RoundTripOptions rt;
    rt.seed = a.seed + 5;
    rt.pairs = a.pairs;
    rt.box_half = a.box_half;
    rt.workers = a.workers;
    rt.Q_hat = q_hat;
    rt.c1_hat = led.c1;
    rt.kappa_hat = kappa_hat;
    CertReport rr = roundtrip_equivalence(d, xi, rt);
    results[rr.check] = report_json(rr);

    bool pass = sn.pass && sg.pass && rr.pass;
    emit(a.out, finish("roundtrip", config, std::move(results), pass, start));
    return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// ball

struct BallArgs {
    MetricFlags metric;
    std::vector<double> x;
    double r = 1.0;
    int points = 256;
    std::string out;
};

int cmd_ball(const BallArgs& a) {
    QuasiDistance d = metric_from(a.metric);
    Vec x = to_vec(a.x);
    if (x.size() != d.dim) throw contract_error("point dimension does not match the metric");
    if (!(a.r > 0.0)) throw contract_error("ball radius must be positive");
    if (a.points < 1) throw contract_error("need at least one boundary point");

    std::vector<Vec> dirs = direction_set(d.dim, a.points);
    std::ostringstream csv;
    csv.precision(17);
    for (int i = 0; i < d.dim; ++i) csv << "u" << i << ",";
    csv << "R";
    for (int i = 0; i < d.dim; ++i) csv << ",b" << i;
    csv << "\n";
    for (const Vec& u : dirs) {
        double radius = directional_radius(d, x, a.r, u);
        Vec b = x + u * radius;
        for (int i = 0; i < d.dim; ++i) csv << u[i] << ",";
        csv << radius;
        for (int i = 0; i < d.dim; ++i) csv << "," << b[i];
        csv << "\n";
    }
    if (a.out.empty()) {
        std::fputs(csv.str().c_str(), stdout);
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw contract_error("cannot open output file: " + a.out);
        f << csv.str();
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// JSON config file merge: keys mirror long flags, command-line flags win,
// unknown keys are rejected before any computation.

std::vector<std::string> merge_config_file(CLI::App& app, std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;
    if (args.empty() || args[0].rfind("-", 0) == 0)
        throw contract_error("--config requires a subcommand");

    CLI::App* sub = app.get_subcommand_no_throw(args[0]);
    if (!sub) throw contract_error("unknown subcommand: " + args[0]);

    std::ifstream f(config_path);
    if (!f) throw contract_error("cannot open config file: " + config_path);
    nlohmann::json cfg;
    try {
        f >> cfg;
    } catch (const std::exception& e) {
        throw contract_error(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw contract_error("config file must be a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) throw contract_error("unknown config key: " + key);
        injected.push_back("--" + key);
        if (value.is_array()) {
            for (const auto& item : value) injected.push_back(item.dump());
        } else if (value.is_string()) {
            injected.push_back(value.get<std::string>());
        } else {
            injected.push_back(value.dump());
        }
    }
    // Config tokens go right after the subcommand name; explicit flags come
    // later and win through the take-last policy.
    std::vector<std::string> merged;
    merged.push_back(args[0]);
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

int run(int argc, char** argv) {
    CLI::App app{"ellipsoid-cover geometry and quasi-distance certification"};
    app.require_subcommand(1);

    auto configure = [](CLI::App* sub) {
        sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        static std::string dummy;
        sub->add_option("--config", dummy, "JSON config file (keys mirror flags; flags win)");
        return sub;
    };

    DistArgs da;
    CLI::App* dist = configure(app.add_subcommand("dist", "evaluate a quasi-distance"));
    add_metric_flags(dist, da.metric);
    dist->add_option("--x", da.x, "first point (ball center)")->required()->expected(2, kMaxDim);
    dist->add_option("--y", da.y, "second point")->required()->expected(2, kMaxDim);
    dist->add_option("--out", da.out, "report path (default stdout)");

    ValidateArgs va;
    CLI::App* val = configure(app.add_subcommand("validate", "run the cover validator battery"));
    val->add_option("--cover", va.cover.name, "isotropic|diagonal|theta0|nsw|corrupted-theta0")
        ->required();
    val->add_option("--k", va.cover.k, "flag-type cover order (nsw)")->check(CLI::Range(0, 6));
    val->add_option("--dim", va.cover.dim, "dimension (isotropic)")->check(CLI::Range(2, kMaxDim));
    val->add_option("--exponents", va.cover.exponents, "diagonal cover scale exponents")
        ->expected(2, kMaxDim);
    val->add_option("--seed", va.seed, "RNG seed")->required();
    val->add_option("--samples", va.samples, "samples per validator");
    val->add_option("--box-half", va.box_half, "center sampling half-width");
    val->add_option("--t-lo", va.t_lo, "scale range lower end");
    val->add_option("--t-hi", va.t_hi, "scale range upper end");
    val->add_option("--s-max", va.s_max, "max scale offset for pairs");
    val->add_option("--tol", va.tol, "relative slack against declared constants");
    val->add_option("--lambda-log2-max", va.lambda_log2_max, "max log2 dilation for engulfing");
    val->add_option("--engulf-samples", va.engulf_samples, "engulfing samples (0 = samples/5)");
    val->add_option("--workers", va.workers, "worker threads")->check(CLI::Range(1, 64));
    val->add_option("--out", va.out, "report path (default stdout)");

    CheckArgs ca;
    CLI::App* chk = configure(app.add_subcommand("check", "certify a metric property"));
    chk->add_option("--property", ca.property, "quasi-convex|inner|ahlfors|triangle|axioms")
        ->required();
    add_metric_flags(chk, ca.metric);
    chk->add_option("--seed", ca.seed, "RNG seed")->required();
    chk->add_option("--samples", ca.samples, "sample count");
    chk->add_option("--box-half", ca.box_half, "center sampling half-width");
    chk->add_option("--r-log2-lo", ca.r_log2_lo, "log2 of smallest sampled radius");
    chk->add_option("--r-log2-hi", ca.r_log2_hi, "log2 of largest sampled radius");
    chk->add_option("--a", ca.a, "inner property scale coefficient");
    chk->add_option("--b", ca.b, "inner property scale exponent");
    chk->add_option("--lambda-log2-max", ca.lambda_log2_max, "max log2 dilation (inner)");
    chk->add_option("--centers", ca.centers, "regularity probe centers");
    chk->add_option("--radii", ca.radii, "radius ladder length")->check(CLI::Range(2, 64));
    chk->add_option("--mc-points", ca.mc_points, "Monte Carlo points per ball volume");
    chk->add_option("--workers", ca.workers, "worker threads")->check(CLI::Range(1, 64));
    chk->add_option("--out", ca.out, "report path (default stdout)");

    RoundtripArgs ra;
    CLI::App* rtp = configure(
        app.add_subcommand("roundtrip", "metric -> cover -> induced metric equivalence"));
    add_metric_flags(rtp, ra.metric);
    rtp->add_option("--seed", ra.seed, "RNG seed")->required();
    rtp->add_option("--pairs", ra.pairs, "equivalence ratio sample pairs");
    rtp->add_option("--cert-samples", ra.cert_samples, "quasi-convexity samples");
    rtp->add_option("--triangle-samples", ra.triangle_samples, "triangle constant samples");
    rtp->add_option("--ahlfors-centers", ra.ahlfors_centers, "regularity probe centers");
    rtp->add_option("--validator-samples", ra.validator_samples, "cover validator samples");
    rtp->add_option("--calibration-samples", ra.calibration_samples,
                    "constant calibration samples");
    rtp->add_option("--box-half", ra.box_half, "center sampling half-width");
    rtp->add_option("--workers", ra.workers, "worker threads")->check(CLI::Range(1, 64));
    rtp->add_option("--out", ra.out, "report path (default stdout)");

    BallArgs ba;
    CLI::App* ball = configure(app.add_subcommand("ball", "export a ball boundary point cloud"));
    add_metric_flags(ball, ba.metric);
    ball->add_option("--x", ba.x, "ball center")->required()->expected(2, kMaxDim);
    ball->add_option("--r", ba.r, "ball radius")->required();
    ball->add_option("--points", ba.points, "boundary directions");
    ball->add_option("--out", ba.out, "CSV path (default stdout)");

    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config_file(app, args);
    try {
        // CLI11 consumes tokens in reverse.
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    if (dist->parsed()) return cmd_dist(da);
    if (val->parsed()) return cmd_validate(va);
    if (chk->parsed()) return cmd_check(ca);
    if (rtp->parsed()) return cmd_roundtrip(ra);
    if (ball->parsed()) return cmd_ball(ba);
    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const contract_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "computation failed: %s\n", e.what());
        return kExitFail;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFail;
    }
}
