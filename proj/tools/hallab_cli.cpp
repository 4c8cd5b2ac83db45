// hallab: command-line front end. One job per process, JSON/CSV in, JSON/CSV
// out; the default output is byte-identical across runs (wall-clock timings
// are serialized only behind --timings). Exit codes: 0 every check passed,
// 1 an identity failed, 2 configuration or capability error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hallab/errors.hpp"
#include "hallab/genfun.hpp"
#include "hallab/grading.hpp"
#include "hallab/hall.hpp"
#include "hallab/identities.hpp"
#include "hallab/model.hpp"
#include "hallab/rational.hpp"

namespace {

using hallab::Beta;
using hallab::ConfigError;
using hallab::Degree;
using hallab::DTSeries;
using hallab::EpsilonEta;
using hallab::HallAlgebra;
using hallab::HallElement;
using hallab::HallSource;
using hallab::LaurentPoly;
using hallab::Model;
using hallab::NTableSpec;
using hallab::PeriodicTable;
using hallab::RatFun;
using hallab::RatFunQ;
using hallab::Rational;
using hallab::Slope;
using hallab::SlopeInterval;
using hallab::TodaColumn;
using hallab::TruncatedLaurent;
using hallab::VerificationReport;
using hallab::Window;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Small input helpers.

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << bytes;
    if (!out) throw ConfigError("write failed: " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": not an integer: '" + s + "'");
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const std::string& what) {
    std::vector<std::int64_t> out;
    for (const std::string& p : split(s, ',')) out.push_back(parse_int(p, what));
    return out;
}

Rational parse_rational(const std::string& s, const std::string& what) {
    try {
        return Rational::parse(s);
    } catch (const std::exception&) {
        throw ConfigError(what + ": not a rational: '" + s + "'");
    }
}

// Slope literal: "inf" or a rational like "3/2".
Slope parse_slope(const std::string& s, const std::string& what) {
    if (s == "inf") return Slope::inf();
    return Slope::finite(parse_rational(s, what));
}

SlopeInterval parse_interval(const std::string& lo, const std::string& hi) {
    SlopeInterval I = SlopeInterval::everything();
    if (!lo.empty()) I.lo = parse_slope(lo, "--slope-min");
    if (!hi.empty()) I.hi = parse_slope(hi, "--slope-max");
    return I;
}

// ---------------------------------------------------------------------------
// Model loading shared by verify and hall. The window spec is an integer
// point bound for the one-column model and a comma list of box components
// for a quiver model; it defaults to the extent declared in the model file.

struct JobOptions {
    std::string model_path;
    std::string window_spec;
    std::int64_t max_dim = -1;
    bool allow_large = false;
    std::string sample_primes = "2,3,5,7";
    std::int64_t holdout_prime = 11;
    int threads = 1;

    void check() const {
        if (threads < 1) throw ConfigError("--threads: must be at least 1");
    }
};

struct ModelFile {
    std::string text;
    nlohmann::json json;
    bool jordan = false;
};

ModelFile read_model_file(const std::string& path) {
    ModelFile f;
    f.text = slurp(path);
    try {
        f.json = nlohmann::json::parse(f.text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("model file " + path + ": " + e.what());
    }
    if (!f.json.is_object() || !f.json.contains("type") || !f.json["type"].is_string())
        throw ConfigError("model file " + path + ": missing string field 'type'");
    f.jordan = f.json["type"] == "jordan";
    return f;
}

// Point bound and enumeration depth for the one-column model; depth must
// cover the window so every in-window class is enumerable.
std::pair<std::int64_t, std::int64_t> jordan_extent(const ModelFile& f, const JobOptions& o) {
    std::int64_t hi = 0;
    if (o.window_spec.empty()) {
        if (!f.json.contains("bound") || !f.json["bound"].is_number_integer())
            throw ConfigError("model file: missing integer field 'bound'");
        hi = f.json["bound"].get<std::int64_t>();
    } else {
        hi = parse_int(o.window_spec, "--window");
    }
    if (hi < 0) throw ConfigError("--window: point bound must be nonnegative");
    const std::int64_t depth = o.max_dim >= 0 ? o.max_dim : hi;
    if (depth < hi) throw ConfigError("--max-dim: below the window point bound");
    return {hi, depth};
}

Beta quiver_window_box(const ModelFile& f, const JobOptions& o) {
    if (!f.json.contains("box") || !f.json["box"].is_array())
        throw ConfigError("model file: missing array field 'box'");
    Beta model_box;
    for (const auto& v : f.json["box"]) {
        if (!v.is_number_integer()) throw ConfigError("model file: 'box' entries must be integers");
        model_box.push_back(static_cast<std::int32_t>(v.get<std::int64_t>()));
    }
    if (o.window_spec.empty()) return model_box;
    const std::vector<std::int64_t> want = parse_int_list(o.window_spec, "--window");
    if (want.size() != model_box.size())
        throw ConfigError("--window: expected " + std::to_string(model_box.size()) +
                          " box components");
    Beta b;
    for (std::size_t i = 0; i < want.size(); ++i) {
        if (want[i] < 0 || want[i] > model_box[i])
            throw ConfigError("--window: component " + std::to_string(i + 1) +
                              " outside the model box");
        b.push_back(static_cast<std::int32_t>(want[i]));
    }
    return b;
}

struct FixedLane {
    std::shared_ptr<const Model> model;
    Window w;
    std::shared_ptr<HallAlgebra<Rational>> alg;
};

FixedLane fixed_lane(const ModelFile& f, const JobOptions& o) {
    FixedLane lane;
    if (f.jordan) {
        const auto [hi, depth] = jordan_extent(f, o);
        lane.model = hallab::load_model(f.text, depth, o.allow_large);
        lane.w = Window::single_column(lane.model->context(), hi);
    } else {
        const Beta box = quiver_window_box(f, o);
        lane.model = hallab::load_model(f.text, 0, o.allow_large);
        lane.w = Window::box(lane.model->context(), box, 0);
    }
    lane.alg = std::make_shared<HallAlgebra<Rational>>(hallab::make_fixed_source(lane.model),
                                                       lane.w);
    return lane;
}

struct SymbolicLane {
    std::shared_ptr<const HallSource<RatFun>> src;
    Window w;
    std::shared_ptr<HallAlgebra<RatFun>> alg;
};

// L-symbolic coefficients exist only for the one-column model, where
// filtration counts are interpolated across the sample primes and certified
// on the holdout prime. Coefficients at point degree n need n+1 sample
// primes; cap_to_primes shrinks the window to what the prime budget affords
// instead of erroring (used by the verify-all battery).
SymbolicLane symbolic_lane(const ModelFile& f, const JobOptions& o, bool cap_to_primes = false) {
    if (!f.jordan)
        throw ConfigError("symbolic verification needs the one-column model (type 'jordan')");
    if (!f.json.contains("bound") || !f.json["bound"].is_number_integer())
        throw ConfigError("model file: missing integer field 'bound'");
    std::int64_t bound = f.json["bound"].get<std::int64_t>();
    auto [hi, depth] = jordan_extent(f, o);
    const std::vector<std::int64_t> primes =
        parse_int_list(o.sample_primes, "--sample-primes");
    if (cap_to_primes) {
        const std::int64_t cap = static_cast<std::int64_t>(primes.size()) - 1;
        hi = std::min(hi, cap);
        depth = std::min(depth, cap);
        bound = std::min(bound, cap);
    }
    SymbolicLane lane;
    lane.src = hallab::make_symbolic_jordan_source(static_cast<int>(bound), depth, primes,
                                                   o.holdout_prime);
    lane.w = Window::single_column(lane.src->context(), hi);
    lane.alg = std::make_shared<HallAlgebra<RatFun>>(lane.src, lane.w);
    return lane;
}

// ---------------------------------------------------------------------------
// Payload emission. With --out the payload goes to the file and stdout gets
// the one-line summaries; without it the payload itself is the stdout.

void emit(const std::string& payload, const std::string& out_path,
          const std::vector<std::string>& summary) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    spill(out_path, payload);
    for (const std::string& line : summary) std::cout << line << "\n";
    std::cout << "wrote " << out_path << "\n";
}

// Laurent coefficients as an exponent -> value object, keys in numeric order.
ojson laurent_json(const LaurentPoly& p) {
    ojson o = ojson::object();
    for (const auto& [e, c] : p.coeffs()) o[std::to_string(e)] = c.str();
    return o;
}

template <class R>
ojson element_json(const HallElement<R>& el) {
    ojson degrees = ojson::object();
    for (const auto& [d, table] : el.s.terms()) {
        ojson classes = ojson::object();
        for (const auto& [label, value] : table.v) classes[label] = value.str();
        degrees[d.str()] = std::move(classes);
    }
    ojson o = ojson::object();
    o["degrees"] = std::move(degrees);
    o["fingerprint"] = ojson::parse(el.fp);
    o["schema"] = 1;
    o["window"] = hallab::window_str(el.s.window());
    return o;
}

template <class R>
ojson series_json(const hallab::GradedSeries<R>& s) {
    ojson comps = ojson::object();
    for (const auto& [d, c] : s.terms()) comps[d.str()] = c.str();
    ojson o = ojson::object();
    o["components"] = std::move(comps);
    o["schema"] = 1;
    o["window"] = hallab::window_str(s.window());
    return o;
}

std::string dump(const ojson& o) { return o.dump() + "\n"; }

// ---------------------------------------------------------------------------
// CSV for series columns. Every exponent of the declared window is written,
// zeros included, so the window survives a write/read roundtrip: readers
// reconstruct lo and hi as the extreme exponents present.

std::string csv_of_column(const TruncatedLaurent& col) {
    if (!col.hi) throw ConfigError("cannot tabulate an exact column without a truncation bound");
    std::string s = "exponent,coefficient\n";
    for (std::int64_t e = col.lo; e <= *col.hi; ++e)
        s += std::to_string(e) + "," + col.coeff(e).str() + "\n";
    return s;
}

std::string class_token(const Beta& b) {
    std::string s;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(b[i]);
    }
    return s;
}

Beta parse_class_token(const std::string& s, const std::string& what) {
    Beta b;
    for (const std::string& p : split(s, '.'))
        b.push_back(static_cast<std::int32_t>(parse_int(p, what)));
    return b;
}

std::string csv_of_family(const DTSeries& f) {
    std::string s = "class,exponent,coefficient\n";
    for (const Beta& b : f.classes()) {
        const TruncatedLaurent& col = f.column(b);
        if (col.is_exact_zero()) continue;
        if (!col.hi)
            throw ConfigError("cannot tabulate an exact column without a truncation bound");
        for (std::int64_t e = col.lo; e <= *col.hi; ++e)
            s += class_token(b) + "," + std::to_string(e) + "," + col.coeff(e).str() + "\n";
    }
    return s;
}

// Reads a class,exponent,coefficient table. The box is the componentwise
// maximum of the classes present; absent classes are exactly zero.
DTSeries family_from_csv(const std::string& text, const std::string& what) {
    struct Rows {
        std::map<std::int64_t, Rational> coeff;
        std::int64_t lo = 0;
        std::int64_t hi = 0;
        bool seen = false;
    };
    std::map<Beta, Rows> per_class;
    std::size_t rank = 0;
    bool have_rank = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = what + " line " + std::to_string(lineno);
        if (lineno == 1) {
            if (line != "class,exponent,coefficient")
                throw ConfigError(where + ": expected header 'class,exponent,coefficient'");
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 3) throw ConfigError(where + ": expected 3 fields");
        const Beta b = parse_class_token(f[0], where);
        if (!have_rank) {
            rank = b.size();
            have_rank = true;
        } else if (b.size() != rank) {
            throw ConfigError(where + ": class rank differs from earlier rows");
        }
        const std::int64_t e = parse_int(f[1], where);
        const Rational c = parse_rational(f[2], where);
        Rows& r = per_class[b];
        if (!r.seen) {
            r.lo = r.hi = e;
            r.seen = true;
        } else {
            r.lo = std::min(r.lo, e);
            r.hi = std::max(r.hi, e);
        }
        if (!c.is_zero()) r.coeff[e] = c;
    }
    if (!have_rank) throw ConfigError(what + ": no data rows");
    Beta box(rank, 0);
    for (const auto& [b, rows] : per_class)
        for (std::size_t i = 0; i < rank; ++i) box[i] = std::max(box[i], b[i]);
    DTSeries out(box);
    for (const auto& [b, rows] : per_class) {
        LaurentPoly p;
        for (const auto& [e, c] : rows.coeff) p.set_coeff(e, c);
        out.set_column(b, TruncatedLaurent::truncation(p, rows.lo, rows.hi));
    }
    return out;
}

// N-tables JSON: {"tables":[{"class":[...],"period":k,"values":["1","-1"]}]}.
NTableSpec tables_from_json(const std::string& text, const std::string& what) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(what + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("tables") || !j["tables"].is_array())
        throw ConfigError(what + ": missing array field 'tables'");
    NTableSpec spec;
    std::size_t idx = 0;
    for (const auto& t : j["tables"]) {
        const std::string where = what + " tables[" + std::to_string(idx++) + "]";
        if (!t.is_object() || !t.contains("class") || !t["class"].is_array())
            throw ConfigError(where + ": missing array field 'class'");
        Beta b;
        for (const auto& v : t["class"]) {
            if (!v.is_number_integer())
                throw ConfigError(where + ": 'class' entries must be integers");
            b.push_back(static_cast<std::int32_t>(v.get<std::int64_t>()));
        }
        if (!t.contains("period") || !t["period"].is_number_integer())
            throw ConfigError(where + ": missing integer field 'period'");
        PeriodicTable table;
        table.period = t["period"].get<std::int64_t>();
        if (!t.contains("values") || !t["values"].is_array())
            throw ConfigError(where + ": missing array field 'values'");
        for (const auto& v : t["values"]) {
            if (!v.is_string()) throw ConfigError(where + ": 'values' entries must be strings");
            table.values.push_back(parse_rational(v.get<std::string>(), where));
        }
        if (spec.count(b)) throw ConfigError(where + ": duplicate class");
        spec[b] = std::move(table);
    }
    return spec;
}

// ---------------------------------------------------------------------------
// verify: run identity verifiers against a model file.

struct VerifyJob {
    std::string identity;
    JobOptions opts;
    std::string slope_min;
    std::string slope_max;
    bool timings = false;
    std::string out_path;
};

int run_verify(const VerifyJob& job) {
    job.opts.check();
    const ModelFile file = read_model_file(job.opts.model_path);
    const SlopeInterval interval = parse_interval(job.slope_min, job.slope_max);

    std::optional<FixedLane> fixed;
    std::optional<SymbolicLane> symbolic;
    const auto fixed_alg = [&]() -> HallAlgebra<Rational>& {
        if (!fixed) fixed = fixed_lane(file, job.opts);
        return *fixed->alg;
    };
    const auto fixed_w = [&]() -> const Window& {
        fixed_alg();
        return fixed->w;
    };
    const bool battery = job.identity == "all";
    const auto symbolic_alg = [&]() -> HallAlgebra<RatFun>& {
        if (!symbolic) symbolic = symbolic_lane(file, job.opts, battery);
        return *symbolic->alg;
    };
    const auto symbolic_w = [&]() -> const Window& {
        symbolic_alg();
        return symbolic->w;
    };

    const std::map<std::string, std::function<VerificationReport()>> runners = {
        {"torsion-pair", [&] { return verify_torsion_pair(fixed_alg(), fixed_w()); }},
        {"hilbert", [&] { return verify_hilbert(fixed_alg(), fixed_w()); }},
        {"stable-pair", [&] { return verify_stable_pair(fixed_alg(), fixed_w()); }},
        {"hn", [&] { return verify_harder_narasimhan(fixed_alg(), fixed_w(), interval); }},
        {"dt-pt", [&] { return verify_dt_pt(fixed_alg(), fixed_w()); }},
        {"no-pole", [&] { return verify_no_pole(symbolic_alg(), symbolic_w()); }},
        {"twist-ratio", [&] { return verify_twist_ratio(symbolic_alg(), symbolic_w(), interval); }},
        {"conjugation", [&] { return verify_conjugation_invariance(symbolic_alg(), symbolic_w()); }},
    };

    std::vector<std::string> selected;
    if (job.identity == "all") {
        // Capability-aware battery: run what the model can express, in a
        // fixed order so the report is reproducible.
        const FixedLane& lane = (fixed_alg(), *fixed);
        const bool torsion = lane.model->has_torsion_cut();
        const bool framing = lane.model->has_framing();
        if (torsion) selected.push_back("torsion-pair");
        if (framing) selected.push_back("hilbert");
        if (framing && torsion) selected.push_back("stable-pair");
        selected.push_back("hn");
        if (framing && torsion) selected.push_back("dt-pt");
        if (file.jordan) {
            selected.push_back("no-pole");
            selected.push_back("twist-ratio");
            selected.push_back("conjugation");
        }
    } else if (runners.count(job.identity)) {
        selected.push_back(job.identity);
    } else {
        std::string known = "all";
        for (const auto& [name, fn] : runners) known += ", " + name;
        throw ConfigError("unknown identity '" + job.identity + "' (known: " + known + ")");
    }

    std::vector<VerificationReport> reports;
    reports.reserve(selected.size());
    for (const std::string& name : selected) reports.push_back(runners.at(name)());

    std::string payload;
    if (reports.size() == 1 && job.identity != "all") {
        payload = reports.front().json(job.timings) + "\n";
    } else {
        ojson arr = ojson::array();
        for (const VerificationReport& r : reports) arr.push_back(ojson::parse(r.json(job.timings)));
        ojson o = ojson::object();
        o["reports"] = std::move(arr);
        o["schema"] = 1;
        payload = dump(o);
    }

    std::vector<std::string> summary;
    summary.reserve(reports.size());
    bool all_pass = true;
    for (const VerificationReport& r : reports) {
        summary.push_back(r.str());
        all_pass = all_pass && r.pass;
    }
    if (job.out_path.empty()) {
        // Payload on stdout; the one-line verdicts still go to stderr so a
        // human sees them without parsing JSON.
        for (const std::string& line : summary) std::cerr << line << "\n";
    }
    emit(payload, job.out_path, summary);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// series: generating-series computations that need no model file.

int run_series_macmahon(std::int64_t order, const std::string& out_path) {
    const std::string payload = csv_of_column(hallab::macmahon(order));
    emit(payload, out_path, {"macmahon to order " + std::to_string(order)});
    return 0;
}

int run_series_dt0(std::int64_t chi, std::int64_t order, const std::string& out_path) {
    const std::string payload = csv_of_column(hallab::dt_zero(chi, order));
    emit(payload, out_path,
         {"degree-zero series, chi " + std::to_string(chi) + ", order " + std::to_string(order)});
    return 0;
}

int run_series_reduce(const std::string& dt_path, const std::string& out_path) {
    const DTSeries dt = family_from_csv(slurp(dt_path), dt_path);
    const Beta zero(dt.box_bound().size(), 0);
    const TruncatedLaurent& dt0 = dt.column(zero);
    if (dt0.is_exact_zero())
        throw ConfigError(dt_path + ": missing the degree-zero column to reduce by");
    const DTSeries pt = hallab::reduce_dt(dt, dt0);
    emit(csv_of_family(pt), out_path, {"reduced " + std::to_string(dt.classes().size()) + " columns"});
    return 0;
}

int run_series_toda(const std::string& pt_path, const std::string& tables_path,
                    const std::string& out_path) {
    const DTSeries pt = family_from_csv(slurp(pt_path), pt_path);
    const NTableSpec tables = tables_from_json(slurp(tables_path), tables_path);
    const std::map<Beta, TodaColumn> cores = hallab::toda_assemble(tables, pt);
    ojson arr = ojson::array();
    std::vector<std::string> summary;
    for (const auto& [b, core] : cores) {
        ojson o = ojson::object();
        ojson cls = ojson::array();
        for (std::int32_t v : b) cls.push_back(v);
        o["class"] = std::move(cls);
        o["coefficients"] = laurent_json(core.value);
        o["palindromic"] = core.palindromic;
        arr.push_back(std::move(o));
        summary.push_back("class " + class_token(b) + ": " +
                          (core.palindromic ? "palindromic" : "NOT palindromic"));
    }
    ojson o = ojson::object();
    o["cores"] = std::move(arr);
    o["schema"] = 1;
    emit(dump(o), out_path, summary);
    return 0;
}

int run_series_rational(std::int64_t d, const std::string& table, const std::string& out_path) {
    std::vector<Rational> values;
    for (const std::string& p : split(table, ',')) values.push_back(parse_rational(p, "--table"));
    const RatFunQ f = hallab::rational_from_periodic(d, values);
    const bool symmetric = hallab::symmetry_check(f);
    ojson o = ojson::object();
    o["closed_form"] = f.str();
    o["d"] = d;
    o["denominator"] = laurent_json(f.denom());
    o["numerator"] = laurent_json(f.numer());
    o["schema"] = 1;
    o["symmetric"] = symmetric;
    emit(dump(o), out_path,
         {std::string("closed form is ") + (symmetric ? "symmetric" : "NOT symmetric") +
          " under q -> 1/q"});
    return 0;
}

// ---------------------------------------------------------------------------
// hall: direct algebra operations on a model file.

// Element grammar: unit | all | p | q | framed | framed-p | hilbert | pt |
// h0 | ss:<slope> | delta:<label>.
HallElement<Rational> parse_element(const HallAlgebra<Rational>& alg, const Window& w,
                                    const std::string& name) {
    if (name == "unit") return alg.unit(w);
    if (name == "all") return alg.one_all(w);
    if (name == "p") return alg.one_p(w);
    if (name == "q") return alg.one_q(w);
    if (name == "framed") return alg.framed_all(w);
    if (name == "framed-p") return alg.framed_p(w);
    if (name == "hilbert") return alg.hilbert_element(w);
    if (name == "pt") return alg.pt_element(w);
    if (name == "h0") return alg.h_zero(w);
    if (name.rfind("ss:", 0) == 0)
        return alg.one_ss(w, parse_slope(name.substr(3), "element slope"));
    if (name.rfind("delta:", 0) == 0) return alg.delta(w, name.substr(6));
    throw ConfigError("unknown element '" + name +
                      "' (known: unit, all, p, q, framed, framed-p, hilbert, pt, h0, "
                      "ss:<slope>, delta:<label>)");
}

int run_hall_mul(const JobOptions& opts, const std::string& lhs, const std::string& rhs,
                 const std::string& out_path) {
    opts.check();
    const FixedLane lane = fixed_lane(read_model_file(opts.model_path), opts);
    const HallElement<Rational> r =
        lane.alg->convolve(parse_element(*lane.alg, lane.w, lhs),
                           parse_element(*lane.alg, lane.w, rhs));
    emit(dump(element_json(r)), out_path,
         {"product of " + lhs + " and " + rhs + " on " + hallab::window_str(lane.w)});
    return 0;
}

int run_hall_integrate(const JobOptions& opts, const std::string& element,
                       const std::string& out_path) {
    opts.check();
    const FixedLane lane = fixed_lane(read_model_file(opts.model_path), opts);
    const hallab::GradedSeries<Rational> s =
        lane.alg->integrate(parse_element(*lane.alg, lane.w, element));
    emit(dump(series_json(s)), out_path,
         {"integrated " + element + " on " + hallab::window_str(lane.w)});
    return 0;
}

int run_hall_epsilon(const JobOptions& opts, const std::string& mu_spec,
                     const std::string& out_path) {
    opts.check();
    const SymbolicLane lane = symbolic_lane(read_model_file(opts.model_path), opts);
    Slope mu = Slope::inf();
    if (mu_spec.empty()) {
        const std::vector<Slope> slopes = lane.alg->realized_slopes(lane.w);
        if (slopes.empty()) throw ConfigError("window realizes no slope");
        mu = slopes.front();
    } else {
        mu = parse_slope(mu_spec, "--mu");
    }
    const EpsilonEta ee = hallab::epsilon_eta(*lane.alg, lane.w, mu);
    const hallab::NTable nt = hallab::n_invariants(*lane.alg, ee);
    ojson comps = ojson::object();
    for (const auto& [d, c] : nt.terms()) comps[d.str()] = c.str();
    ojson o = ojson::object();
    o["eta"] = element_json(ee.eta);
    o["n_table"] = std::move(comps);
    o["regular"] = ee.regular;
    o["schema"] = 1;
    o["slope"] = mu.str();
    emit(dump(o), out_path,
         {std::string("eta at slope ") + mu.str() + " is " +
          (ee.regular ? "regular" : "NOT regular") + " at L = 1"});
    return ee.regular ? 0 : 1;
}

void add_job_options(CLI::App* cmd, JobOptions& o, bool with_model = true) {
    if (with_model)
        cmd->add_option("--model", o.model_path, "model description JSON file")->required();
    cmd->add_option("--window", o.window_spec,
                    "verification window: point bound (one-column model) or box components "
                    "a,b,... (quiver); defaults to the extent in the model file");
    cmd->add_option("--max-dim", o.max_dim,
                    "enumeration depth for the one-column model (default: the window bound)");
    cmd->add_flag("--allow-large", o.allow_large, "lift the class-enumeration safety bound");
    cmd->add_option("--sample-primes", o.sample_primes,
                    "comma list of primes used to fit symbolic coefficients");
    cmd->add_option("--holdout-prime", o.holdout_prime,
                    "extra prime certifying every fitted coefficient");
    cmd->add_option("--threads", o.threads,
                    "upper bound on worker threads (evaluation is serial)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "hallab: exact Hall-algebra identity checks and generating-series "
        "computations on finite abelian-category models"};
    app.require_subcommand(1);

    // verify ------------------------------------------------------------
    VerifyJob vj;
    CLI::App* verify = app.add_subcommand(
        "verify", "run an identity verifier (or 'all') against a model file");
    verify->add_option("identity", vj.identity,
                       "one of: all, torsion-pair, hilbert, stable-pair, hn, dt-pt, "
                       "no-pole, twist-ratio, conjugation")
        ->required();
    add_job_options(verify, vj.opts);
    verify->add_option("--slope-min", vj.slope_min, "lower slope bound (rational or 'inf')");
    verify->add_option("--slope-max", vj.slope_max, "upper slope bound (rational or 'inf')");
    verify->add_flag("--timings", vj.timings,
                     "serialize wall-clock seconds (breaks byte-identical reports)");
    verify->add_option("--out", vj.out_path, "write the JSON report here instead of stdout");

    // series ------------------------------------------------------------
    CLI::App* series = app.add_subcommand("series", "generating-series computations");
    series->require_subcommand(1);

    std::int64_t mm_order = 10;
    std::string mm_out;
    CLI::App* mm = series->add_subcommand("macmahon", "box-counting product series");
    mm->add_option("--order", mm_order, "truncation order")->required();
    mm->add_option("--out", mm_out, "write the CSV here instead of stdout");

    std::int64_t dt0_chi = 1, dt0_order = 10;
    std::string dt0_out;
    CLI::App* dt0 = series->add_subcommand("dt0", "degree-zero series (signed product power)");
    dt0->add_option("--chi", dt0_chi, "integer exponent")->required();
    dt0->add_option("--order", dt0_order, "truncation order")->required();
    dt0->add_option("--out", dt0_out, "write the CSV here instead of stdout");

    std::string red_dt, red_out;
    CLI::App* red = series->add_subcommand(
        "reduce", "divide every column of a family by its degree-zero column");
    red->add_option("--dt", red_dt, "family CSV (class,exponent,coefficient)")->required();
    red->add_option("--out", red_out, "write the CSV here instead of stdout");

    std::string toda_pt, toda_tables, toda_out;
    CLI::App* toda = series->add_subcommand(
        "toda", "extract palindromic cores from a reduced family and its count tables");
    toda->add_option("--pt", toda_pt, "reduced family CSV")->required();
    toda->add_option("--tables", toda_tables, "periodic count tables JSON")->required();
    toda->add_option("--out", toda_out, "write the JSON here instead of stdout");

    std::int64_t rat_d = 1;
    std::string rat_table, rat_out;
    CLI::App* rat = series->add_subcommand(
        "rational", "closed form of a weighted periodic sum plus its symmetry verdict");
    rat->add_option("--d", rat_d, "period")->required();
    rat->add_option("--table", rat_table, "comma list of rational weights")->required();
    rat->add_option("--out", rat_out, "write the JSON here instead of stdout");

    // hall --------------------------------------------------------------
    CLI::App* hall = app.add_subcommand("hall", "direct Hall-algebra operations");
    hall->require_subcommand(1);

    JobOptions mul_opts;
    std::string mul_lhs, mul_rhs, mul_out;
    CLI::App* mul = hall->add_subcommand("mul", "convolution product of two named elements");
    add_job_options(mul, mul_opts);
    mul->add_option("--lhs", mul_lhs, "left factor")->required();
    mul->add_option("--rhs", mul_rhs, "right factor")->required();
    mul->add_option("--out", mul_out, "write the JSON here instead of stdout");

    JobOptions int_opts;
    std::string int_element, int_out;
    CLI::App* integ = hall->add_subcommand("integrate", "integration map of a named element");
    add_job_options(integ, int_opts);
    integ->add_option("--element", int_element, "element to integrate")->required();
    integ->add_option("--out", int_out, "write the JSON here instead of stdout");

    JobOptions eps_opts;
    std::string eps_mu, eps_out;
    CLI::App* eps = hall->add_subcommand(
        "epsilon", "log of the semistable element, its (L-1)-rescaling and count table");
    add_job_options(eps, eps_opts);
    eps->add_option("--mu", eps_mu, "slope (rational or 'inf'; default: largest realized)");
    eps->add_option("--out", eps_out, "write the JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (verify->parsed()) return run_verify(vj);
        if (mm->parsed()) return run_series_macmahon(mm_order, mm_out);
        if (dt0->parsed()) return run_series_dt0(dt0_chi, dt0_order, dt0_out);
        if (red->parsed()) return run_series_reduce(red_dt, red_out);
        if (toda->parsed()) return run_series_toda(toda_pt, toda_tables, toda_out);
        if (rat->parsed()) return run_series_rational(rat_d, rat_table, rat_out);
        if (mul->parsed()) return run_hall_mul(mul_opts, mul_lhs, mul_rhs, mul_out);
        if (integ->parsed()) return run_hall_integrate(int_opts, int_element, int_out);
        if (eps->parsed()) return run_hall_epsilon(eps_opts, eps_mu, eps_out);
        throw ConfigError("no job selected");
    } catch (const hallab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
