/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include "hafnia/hafnia.hpp"

namespace {

using namespace hafnia;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

ScalarMode mode_of(const std::string& s) {
    if (s == "exact") return ScalarMode::Exact;
    if (s == "float") return ScalarMode::Float;
    return ScalarMode::Auto;
}

struct JsonSink {
    std::ofstream out;

    explicit JsonSink(const std::string& path) {
        if (path.empty()) return;
        out.open(path);
        if (!out) throw parse_error("cannot open output file " + path);
    }

    template <typename T>
    void write(const InequalityReport<T>& rep) {
        if (out.is_open()) out << report_json(rep).dump() << '\n';
    }

    void write_json(const nlohmann::json& j) {
        if (out.is_open()) out << j.dump() << '\n';
    }

    ReportSink as_report_sink() {
        if (!out.is_open()) return {};
        return [this](const InequalityReport<Rational>& rep) { write(rep); };
    }
};

Functional functional_of(const std::string& name) {
    if (name == "det") return Functional::Det;
    if (name == "per") return Functional::Per;
    if (name == "pf") return Functional::Pf;
    if (name == "haf") return Functional::Haf;
    throw parse_error("unknown functional " + name);
}

int cmd_compute(const std::string& fn_name, const std::string& path, const std::string& mode,
                int cap) {
    Functional fn = functional_of(fn_name);
    MatrixVariant var = read_matrix_file(path, mode_of(mode));
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m(0, 0))>;
            T value;
            switch (fn) {
                case Functional::Det: value = det(m); break;
                case Functional::Per: value = per(m, cap > 0 ? cap : kPerCap); break;
                case Functional::Pf: value = pf(m, cap > 0 ? cap : kPfCap); break;
                default: value = haf(m, cap > 0 ? cap : kHafCap); break;
            }
            std::cout << scalar_to_string(value) << '\n';
        },
        var);
    return kExitOk;
}

template <typename T>
void print_poly(const std::string& label, const CoeffPolynomial<T>& poly) {
    std::cout << label << ":";
    for (const T& c : poly.coeffs) std::cout << ' ' << scalar_to_string(c);
    std::cout << '\n';
}

int cmd_coeffs(const std::string& kind, const std::string& a_path, const std::string& a2_path,
               const std::string& b_path, const std::string& mode, const std::string& method,
               const std::string& out_path) {
    Functional fn = functional_of(kind);
    JsonSink sink(out_path);

    if (fn == Functional::Haf || fn == Functional::Pf) {
        MatrixVariant av = read_matrix_file(a_path, mode_of(mode));
        MatrixVariant bv = read_matrix_file(b_path, mode_of(mode));
        const bool exact = std::holds_alternative<SquareMatrix<Rational>>(av);
        if (exact != std::holds_alternative<SquareMatrix<Rational>>(bv))
            throw parse_error("A and B resolved to different scalar modes; use --mode");
        int status = kExitOk;
        auto run = [&](const auto& a, const auto& b) {
            using T = std::decay_t<decltype(a(0, 0))>;
            std::optional<CoeffPolynomial<T>> subset, interp;
            if (method != "interp") {
                subset = fn == Functional::Haf ? haf_block_coeffs_subset(a, b)
                                               : pf_block_coeffs_subset(a, b);
                print_poly("subset", *subset);
            }
            if (method != "subset") {
                interp = block_poly_interpolate(fn, a, b);
                print_poly("interp", *interp);
            }
            if (subset && interp) {
                const bool same = subset->coeffs == interp->coeffs;
                std::cout << (same ? "methods agree\n" : "METHOD MISMATCH\n");
                if (!same && is_exact_v<T>) status = kExitCheckFailed;
            }
            nlohmann::json j;
            j["kind"] = kind;
            if (subset) {
                std::vector<std::string> s;
                for (const T& c : subset->coeffs) s.push_back(scalar_to_string(c));
                j["subset"] = s;
            }
            if (interp) {
                std::vector<std::string> s;
                for (const T& c : interp->coeffs) s.push_back(scalar_to_string(c));
                j["interp"] = s;
            }
            sink.write_json(j);
        };
        if (exact)
            run(std::get<SquareMatrix<Rational>>(av), std::get<SquareMatrix<Rational>>(bv));
        else
            run(std::get<SquareMatrix<double>>(av), std::get<SquareMatrix<double>>(bv));
        return status;
    }

    // per/det: A' and A'' are square matrix files; B may be rectangular and
    // uses the vector-list format (rows of entries).
    if (a2_path.empty()) throw parse_error("per/det coefficients need --a2");
    MatrixVariant a1v = read_matrix_file(a_path, ScalarMode::Exact);
    MatrixVariant a2v = read_matrix_file(a2_path, ScalarMode::Exact);
    VectorsVariant bv = read_vectors_file(b_path, ScalarMode::Exact);
    const auto& a1 = std::get<SquareMatrix<Rational>>(a1v);
    const auto& a2 = std::get<SquareMatrix<Rational>>(a2v);
    const auto& bg = std::get<GramFactor<Rational>>(bv);
    Matrix<Rational> b(static_cast<int>(bg.vectors.size()), bg.d);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) b(i, j) = bg.vectors[i][j];
    CoeffPolynomial<Rational> poly = block_poly_interpolate(fn, a1, a2, b);
    print_poly(kind == "per" ? "c" : "d", poly);
    nlohmann::json j;
    j["kind"] = kind;
    std::vector<std::string> s;
    for (const Rational& c : poly.coeffs) s.push_back(scalar_to_string(c));
    j["coeffs"] = s;
    sink.write_json(j);
    return kExitOk;
}

void print_report(const InequalityReport<Rational>& rep) {
    std::cout << rep.name << ": lhs=" << scalar_to_string(rep.lhs)
              << " rhs=" << scalar_to_string(rep.rhs) << " holds=" << (rep.holds ? "yes" : "no");
    if (rep.equality_applicable)
        std::cout << " equality=" << (rep.equality_observed ? "yes" : "no")
                  << " predicted=" << (rep.equality_predicted ? "yes" : "no");
    if (!rep.detail.empty()) std::cout << "  " << rep.detail;
    std::cout << '\n';
}

SquareMatrix<Rational> load_exact_matrix(const std::string& path) {
    return std::get<SquareMatrix<Rational>>(read_matrix_file(path, ScalarMode::Exact));
}

Matrix<Rational> load_exact_rect(const std::string& path) {
    const auto g = std::get<GramFactor<Rational>>(read_vectors_file(path, ScalarMode::Exact));
    Matrix<Rational> b(static_cast<int>(g.vectors.size()), g.d);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) b(i, j) = g.vectors[i][j];
    return b;
}

/// `verify <battery>` on one explicit instance from files instead of the
/// randomized sweep.
int cmd_verify_instance(const std::string& battery, const std::string& matrix_path, int split,
                        const std::string& a_path, const std::string& a2_path,
                        const std::string& b_path, const std::string& vec_path,
                        const std::string& lambda_str, int conj_p, JsonSink& sink) {
    InequalityReport<Rational> rep;
    const Rational lambda = parse_rational(lambda_str);

    if (battery == "hadamard" || battery == "marcus") {
        auto which = battery == "hadamard" ? ClassicalIneq::Hadamard : ClassicalIneq::Marcus;
        rep = check_classical(which, load_exact_matrix(matrix_path));
    } else if (battery == "fischer" || battery == "lieb_per") {
        auto which = battery == "fischer" ? ClassicalIneq::Fischer : ClassicalIneq::LiebPer;
        rep = check_classical(which, load_exact_matrix(matrix_path), split);
    } else if (battery == "lieb_coeffs" || battery == "det_coeffs") {
        SquareMatrix<Rational> a1 = load_exact_matrix(a_path);
        SquareMatrix<Rational> a2 = load_exact_matrix(a2_path);
        Matrix<Rational> b = load_exact_rect(b_path);
        rep = battery == "lieb_coeffs" ? check_lieb_coeffs(a1, a2, b)
                                       : check_det_coeffs(a1, a2, b);
    } else if (battery == "pf_coeffs" || battery == "pf_ineq" || battery == "haf_coeffs" ||
               battery == "haf_ineq") {
        PfHafCheck which = battery == "pf_coeffs"    ? PfHafCheck::PfCoeffs
                           : battery == "pf_ineq"    ? PfHafCheck::PfIneq
                           : battery == "haf_coeffs" ? PfHafCheck::HafCoeffs
                                                     : PfHafCheck::HafIneq;
        rep = check_pfhaf(which, load_exact_matrix(a_path), load_exact_matrix(b_path), lambda);
    } else if (battery == "moment") {
        rep = check_moment(std::get<GramFactor<Rational>>(
            read_vectors_file(vec_path, ScalarMode::Exact)));
    } else if (battery == "conjecture") {
        rep = conjecture_check(load_exact_matrix(matrix_path), conj_p);
    } else {
        throw parse_error("battery " + battery + " does not take an explicit instance");
    }

    print_report(rep);
    sink.write(rep);
    return rep.clean() ? kExitOk : kExitCheckFailed;
}

int report_outcome(const BatteryOutcome& out) {
    std::cout << "battery " << out.name << ": " << out.count << " checks, " << out.violations
              << " violations, " << out.equality_mismatches << " equality mismatches, "
              << out.equality_cases << " equality cases\n";
    std::size_t shown = 0;
    for (const std::string& line : out.failure_lines) {
        std::cout << "  FAIL " << line << '\n';
        if (++shown >= 10) {
            std::cout << "  ... " << (out.failure_lines.size() - shown) << " more\n";
            break;
        }
    }
    return out.violations == 0 && out.equality_mismatches == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::string& battery, int n_max, int count, Seed seed,
               std::uint64_t replay_seed, bool has_replay, const std::string& out_path) {
    JsonSink sink(out_path);
    ReportSink rs = sink.as_report_sink();

    if (has_replay) {
        BatteryOutcome out;
        out.name = battery;
        run_battery_instance(battery, n_max, replay_seed, out, 0, rs);
        return report_outcome(out);
    }

    int status = kExitOk;
    if (battery == "all") {
        for (const std::string& name : battery_names())
            status = std::max(status, report_outcome(run_battery(name, n_max, count, seed, rs)));
    } else {
        status = report_outcome(run_battery(battery, n_max, count, seed, rs));
    }
    return status;
}

int cmd_wick(int d_max, int count, std::uint64_t samples, Seed seed, int max_degree,
             const std::string& out_path) {
    JsonSink sink(out_path);
    int failures = 0, within4 = 0;
    for (int idx = 0; idx < count; ++idx) {
        RngStream rng(keyed_u64(seed, idx));
        const int d = static_cast<int>(rng.next_int(1, d_max));
        const int n = static_cast<int>(rng.next_int(1, 4));
        GramFactor<Rational> g;
        g.d = d;
        std::vector<int> powers;
        int degree = 0;
        for (int i = 0; i < n; ++i) {
            std::vector<Rational> v(d);
            for (int k = 0; k < d; ++k) v[k] = Rational(rng.next_int(-2, 2));
            g.vectors.push_back(v);
            const int room = std::max(1, (max_degree - degree) / (n - i));
            int p = static_cast<int>(rng.next_int(1, room));
            powers.push_back(p);
            degree += p;
        }
        MomentSpec<Rational> exact_spec{g, powers};
        const Rational exact = wick_expectation(exact_spec);
        MomentSpec<double> mc_spec{to_float(g), powers};
        const McEstimate est = mc_expectation(mc_spec, samples, keyed_u64(seed, 5000 + idx));
        const double err = std::fabs(est.mean - exact.get_d());
        const double se = std::max(est.std_error, 1e-15);
        const bool ok = err <= 5 * se;
        if (err <= 4 * se) ++within4;
        if (!ok) ++failures;
        std::cout << "spec " << idx << ": exact=" << exact.get_d() << " mc=" << est.mean
                  << " se=" << est.std_error << (ok ? "" : "  OUTSIDE 5 SIGMA") << '\n';
        nlohmann::json j = estimate_json(est);
        j["exact"] = scalar_to_string(exact);
        j["within_5_sigma"] = ok;
        sink.write_json(j);
    }
    std::cout << "wick: " << count << " specs, " << within4 << " within 4 sigma, " << failures
              << " outside 5 sigma\n";
    return failures == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_conjecture(int cap, int count, Seed seed, bool mc, int mc_cap, std::uint64_t samples,
                   const std::string& out_path) {
    JsonSink sink(out_path);
    BatteryOutcome out = conjecture_scan(cap, count, seed, sink.as_report_sink());
    int status = report_outcome(out);
    if (mc) {
        McScreenOutcome screen = conjecture_mc_screen(mc_cap, std::max(1, count / 100), samples,
                                                      keyed_u64(seed, 0x5c0e));
        std::cout << "conjecture mc screen: " << screen.count << " instances, "
                  << screen.screened_violations << " screened violations\n";
        for (const std::string& line : screen.failure_lines) std::cout << "  FAIL " << line << '\n';
        if (screen.screened_violations > 0) status = kExitCheckFailed;
    }
    return status;
}

int cmd_polar_bounds(int n_max, const std::string& out_path) {
    JsonSink sink(out_path);
    bool ok = 3.0 * std::sqrt(3.0) / std::exp(1.0) < 2.0;
    std::cout << "n  den_new  bound_new  bound_rs  bound_conj  new/rs  conj/new\n";
    for (const BoundRow& row : bound_table(n_max)) {
        std::cout << row.n << "  " << row.den_new.get_str() << "  " << row.bound_new << "  "
                  << row.bound_rs << "  " << row.bound_conj << "  " << row.ratio_new_rs << "  "
                  << row.ratio_conj_new << (row.den_below_estimate ? "" : "  ESTIMATE FAILED")
                  << '\n';
        ok = ok && row.den_below_estimate;
        nlohmann::json j;
        j["n"] = row.n;
        j["den_new"] = row.den_new.get_str();
        j["bound_new"] = row.bound_new;
        j["bound_rs"] = row.bound_rs;
        j["bound_conj"] = row.bound_conj;
        sink.write_json(j);
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_polar_certify(const std::string& vec_path, int restarts, int iters, Seed seed,
                      const std::string& out_path) {
    JsonSink sink(out_path);
    VectorsVariant v = read_vectors_file(vec_path, ScalarMode::Float);
    SphereConfig cfg;
    cfg.vectors = std::get<GramFactor<double>>(v);
    cfg.restarts = restarts;
    cfg.max_iters = iters;
    cfg.seed = seed;
    ProductBoundResult r = verify_product_bound_full(cfg);
    std::cout << "certified=" << r.certified << " sqrt_avg=" << r.sqrt_avg
              << " bound=" << r.bound << " margin=" << r.certified - r.bound << '\n';
    std::cout << "witness:";
    for (double w : r.witness) std::cout << ' ' << w;
    std::cout << '\n';
    sink.write(r.report);
    return r.report.holds ? kExitOk : kExitCheckFailed;
}

int cmd_polar_search(int n, int restarts, Seed seed, const std::string& out_path) {
    JsonSink sink(out_path);
    SearchResult r = polarization_search(n, restarts, seed);
    const double conj = std::pow(static_cast<double>(n), -0.5 * n);
    std::cout << "best certified product norm: " << r.value << " (n^(-n/2) = " << conj << ")\n";
    for (const auto& v : r.config.vectors) {
        std::cout << "  x:";
        for (double c : v) std::cout << ' ' << c;
        std::cout << '\n';
    }
    nlohmann::json j;
    j["n"] = n;
    j["value"] = r.value;
    j["conjectured"] = conj;
    sink.write_json(j);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hafnia: exact matrix functionals, block polynomials and inequality verifiers"};
    app.require_subcommand(1);

    std::string mode = "auto", out_path, method = "both";
    Seed seed = kDefaultSeed;
    int cap = 0;

    auto* compute = app.add_subcommand("compute", "evaluate det/per/pf/haf on a matrix file");
    std::string fn_name, matrix_path;
    compute->add_option("functional", fn_name, "det|per|pf|haf")->required();
    compute->add_option("file", matrix_path, "matrix file")->required();
    compute->add_option("--mode", mode, "exact|float|auto");
    compute->add_option("--cap", cap, "dimension cap override");

    auto* coeffs = app.add_subcommand("coeffs", "block lambda-polynomial coefficients");
    std::string coeff_kind, a_path, a2_path, b_path;
    coeffs->add_option("kind", coeff_kind, "haf|pf|per|det")->required();
    coeffs->add_option("--a", a_path, "A (or A') matrix file")->required();
    coeffs->add_option("--a2", a2_path, "A'' matrix file (per/det)");
    coeffs->add_option("--b", b_path, "B file (matrix, or row list for per/det)")->required();
    coeffs->add_option("--mode", mode, "exact|float|auto");
    coeffs->add_option("--method", method, "both|subset|interp");
    coeffs->add_option("--out", out_path, "JSON-lines output path");

    auto* verify = app.add_subcommand("verify",
                                      "theorem batteries over random instances, or one explicit "
                                      "instance from files");
    std::string battery = "all", v_matrix, v_a, v_a2, v_b, v_vectors, v_lambda = "1";
    int n_max = 6, count = 1000, wick_count = 50, conj_count = 500, v_split = 1, v_p = 1;
    std::uint64_t replay_seed = 0;
    verify->add_option("battery", battery, "battery name or 'all'");
    verify->add_option("--n", n_max, "max matrix size (default 6)");
    verify->add_option("--count", count, "instances per battery (default 1000)");
    verify->add_option("--seed", seed, "master seed");
    auto* replay_opt = verify->add_option("--replay", replay_seed, "replay one instance seed");
    verify->add_option("--out", out_path, "JSON-lines output path");
    auto* v_matrix_opt = verify->add_option("--matrix", v_matrix,
                                            "explicit instance: the PSD matrix file");
    verify->add_option("--split", v_split, "block boundary for fischer/lieb_per");
    auto* v_a_opt = verify->add_option("--a", v_a, "explicit instance: A (or A') file");
    verify->add_option("--a2", v_a2, "explicit instance: A'' file (lieb/det coeffs)");
    verify->add_option("--b", v_b, "explicit instance: B file (row list for lieb/det coeffs)");
    auto* v_vec_opt = verify->add_option("--vectors", v_vectors,
                                         "explicit instance: vector list (moment)");
    verify->add_option("--lambda", v_lambda, "lambda for pf/haf checks (rational, default 1)");
    verify->add_option("--p", v_p, "power p for a conjecture instance");

    auto* wick_cmd = app.add_subcommand("wick", "exact Wick moments vs Monte Carlo");
    int d_max = 5, max_degree = 10;
    std::uint64_t samples = 1000000;
    wick_cmd->add_option("--d", d_max, "max ambient dimension (default 5)");
    wick_cmd->add_option("--count", wick_count, "number of random specs (default 50)");
    wick_cmd->add_option("--samples", samples, "Monte Carlo samples (default 1e6)");
    wick_cmd->add_option("--max-degree", max_degree, "max total degree (default 10)");
    wick_cmd->add_option("--seed", seed, "seed");
    wick_cmd->add_option("--out", out_path, "JSON-lines output path");

    auto* conj = app.add_subcommand("conjecture", "scan the block-hafnian lower bound");
    int conj_cap = 16, mc_cap = 40;
    bool with_mc = false;
    conj->add_option("--cap", conj_cap, "exact-scan dimension cap (2pn <= cap, default 16)");
    conj->add_option("--count", conj_count, "instances per (n,p) pair (default 500)");
    conj->add_option("--seed", seed, "seed");
    conj->add_flag("--mc", with_mc, "also run the Monte Carlo screen");
    conj->add_option("--mc-cap", mc_cap, "MC screen dimension cap (default 40)");
    conj->add_option("--samples", samples, "MC samples per instance");
    conj->add_option("--out", out_path, "JSON-lines output path");

    auto* polar = app.add_subcommand("polar", "product-of-functionals bounds");
    polar->require_subcommand(1);
    auto* bounds = polar->add_subcommand("bounds", "per-n bound table");
    int bounds_n_max = 10;
    bounds->add_option("--n-max", bounds_n_max, "table rows up to n (default 10)");
    bounds->add_option("--out", out_path, "JSON-lines output path");
    auto* certify = polar->add_subcommand("certify", "certify a unit-vector configuration");
    std::string vec_path;
    int restarts = 32, iters = 60;
    certify->add_option("--vectors", vec_path, "vector list file")->required();
    certify->add_option("--restarts", restarts, "optimizer restarts (default 32)");
    certify->add_option("--iters", iters, "ascent iterations (default 60)");
    certify->add_option("--seed", seed, "seed");
    certify->add_option("--out", out_path, "JSON-lines output path");
    auto* search = polar->add_subcommand("search", "search low product-norm configurations");
    int search_n = 3;
    search->add_option("--n", search_n, "number of vectors/dimension")->required();
    search->add_option("--restarts", restarts, "outer restarts (default 32)");
    search->add_option("--seed", seed, "seed");
    search->add_option("--out", out_path, "JSON-lines output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (compute->parsed()) return cmd_compute(fn_name, matrix_path, mode, cap);
        if (coeffs->parsed())
            return cmd_coeffs(coeff_kind, a_path, a2_path, b_path, mode, method, out_path);
        if (verify->parsed()) {
            if (v_matrix_opt->count() > 0 || v_a_opt->count() > 0 || v_vec_opt->count() > 0) {
                JsonSink sink(out_path);
                return cmd_verify_instance(battery, v_matrix, v_split, v_a, v_a2, v_b, v_vectors,
                                           v_lambda, v_p, sink);
            }
            return cmd_verify(battery, n_max, count, seed, replay_seed, replay_opt->count() > 0,
                              out_path);
        }
        if (wick_cmd->parsed())
            return cmd_wick(d_max, wick_count, samples, seed, max_degree, out_path);
        if (conj->parsed())
            return cmd_conjecture(conj_cap, conj_count, seed, with_mc, mc_cap, samples, out_path);
        if (polar->parsed()) {
            if (bounds->parsed()) return cmd_polar_bounds(bounds_n_max, out_path);
            if (certify->parsed())
                return cmd_polar_certify(vec_path, restarts, iters, seed, out_path);
            if (search->parsed()) return cmd_polar_search(search_n, restarts, seed, out_path);
        }
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const parse_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const cap_error& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
