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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hafnia/inequalities.hpp"
#include "hafnia/wick.hpp"

namespace hafnia {

/// Outcome of a randomized theorem battery. A violation is a failed
/// inequality (or coefficient pattern); an equality mismatch is an instance
/// whose equality characterization applies but observation and prediction
/// disagree. Failure lines carry the per-instance seed for bit-exact replay.
struct BatteryOutcome {
    std::string name;
    int count = 0;
    int violations = 0;
    int equality_mismatches = 0;
    int equality_cases = 0;  // checks where equality was observed
    std::vector<std::string> failure_lines;
};

using ReportSink = std::function<void(const InequalityReport<Rational>&)>;

namespace detail {

/// Plant a zero row/column: the Gram interpretation (x_k = 0) keeps PSD.
inline SquareMatrix<Rational> zero_out_row(SquareMatrix<Rational> a, int k) {
    Matrix<Rational> m = a.mat();
    for (int j = 0; j < a.n(); ++j) {
        m(k, j) = 0;
        m(j, k) = 0;
    }
    return SquareMatrix<Rational>(std::move(m), a.kind());
}

inline SquareMatrix<Rational> random_diagonal_psd(int n, RngStream& rng) {
    Matrix<Rational> m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Rational(rng.next_int(0, 4));
    return SquareMatrix<Rational>(std::move(m), MatrixKind::Symmetric);
}

/// PSD instance mix: full rank, rank-deficient, diagonal, planted zero row,
/// block diagonal.
inline SquareMatrix<Rational> psd_instance(int n, RngStream& rng) {
    const long variant = rng.next_int(0, 5);
    const Seed sub = rng.next_u64();
    switch (variant) {
        case 0:
        case 1:
            return random_posdef(n, sub);
        case 2:
            return random_psd(n, static_cast<int>(rng.next_int(0, n)), sub);
        case 3:
            return random_diagonal_psd(n, rng);
        case 4: {
            SquareMatrix<Rational> a = random_psd(n, n, sub);
            return zero_out_row(std::move(a), static_cast<int>(rng.next_int(0, n - 1)));
        }
        default: {
            if (n < 2) return random_posdef(n, sub);
            int s = static_cast<int>(rng.next_int(1, n - 1));
            SquareMatrix<Rational> a1 = random_psd(s, s, rng.next_u64());
            SquareMatrix<Rational> a2 = random_psd(n - s, n - s, rng.next_u64());
            Matrix<Rational> m(n, n);
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j) m(i, j) = a1(i, j);
            for (int i = 0; i < n - s; ++i)
                for (int j = 0; j < n - s; ++j) m(s + i, s + j) = a2(i, j);
            return SquareMatrix<Rational>(std::move(m), MatrixKind::Symmetric);
        }
    }
}

inline SquareMatrix<Rational> symmetric_instance(int n, RngStream& rng) {
    const long variant = rng.next_int(0, 3);
    const Seed sub = rng.next_u64();
    if (variant == 0) return random_diagonal_psd(n, rng);
    if (variant == 1) return SquareMatrix<Rational>(n, MatrixKind::Symmetric);  // zero
    return random_symmetric(n, sub);
}

inline SquareMatrix<Rational> skew_instance(int n, RngStream& rng) {
    const long variant = rng.next_int(0, 3);
    const Seed sub = rng.next_u64();
    if (variant == 0) return SquareMatrix<Rational>(n, MatrixKind::Skew);  // zero
    if (variant == 1 && n >= 3) {
        // rank-deficient: random skew block padded by two zero rows/columns
        SquareMatrix<Rational> small = random_skew(n - 2, sub);
        Matrix<Rational> m(n, n);
        for (int i = 0; i < n - 2; ++i)
            for (int j = 0; j < n - 2; ++j) m(i, j) = small(i, j);
        return SquareMatrix<Rational>(std::move(m), MatrixKind::Skew);
    }
    return random_skew(n, sub);
}

inline GramFactor<Rational> gram_instance(int n_max, RngStream& rng) {
    const int n = static_cast<int>(rng.next_int(1, n_max));
    const int d = static_cast<int>(rng.next_int(1, n_max));
    const long variant = rng.next_int(0, 3);
    GramFactor<Rational> g;
    g.d = d;
    for (int i = 0; i < n; ++i) {
        std::vector<Rational> v(d, Rational(0));
        if (variant == 0) {
            v[i % d] = Rational(rng.next_int(0, 3));  // orthogonal directions
        } else {
            for (int k = 0; k < d; ++k) v[k] = Rational(rng.next_int(-2, 2));
            if (variant == 1 && i == 0)
                for (int k = 0; k < d; ++k) v[k] = Rational(0);  // planted zero vector
        }
        g.vectors.push_back(std::move(v));
    }
    return g;
}

inline void tally(BatteryOutcome& out, InequalityReport<Rational> rep, Seed instance_seed,
                  int index, const ReportSink& sink) {
    rep.instance_seed = instance_seed;
    ++out.count;
    if (rep.equality_observed) ++out.equality_cases;
    const bool mismatch =
        rep.equality_applicable && rep.equality_observed != rep.equality_predicted;
    if (!rep.holds) ++out.violations;
    if (mismatch) ++out.equality_mismatches;
    if (!rep.holds || mismatch) {
        out.failure_lines.push_back(out.name + " instance " + std::to_string(index) + " seed " +
                                    std::to_string(instance_seed) + ": " +
                                    (!rep.holds ? "violation" : "equality mismatch") +
                                    " lhs=" + scalar_to_string(rep.lhs) +
                                    " rhs=" + scalar_to_string(rep.rhs) + " " + rep.detail);
    }
    if (sink) sink(rep);
}

}  // namespace detail

/// One battery instance, fully determined by (name, n_max, instance seed).
/// `run_battery` derives instance seeds from the master seed; a failure line
/// replays by calling this directly with the printed seed.
inline void run_battery_instance(const std::string& name, int n_max, Seed inst,
                                 BatteryOutcome& out, int idx = 0, const ReportSink& sink = {}) {
    RngStream rng(inst);

    if (name == "hadamard" || name == "marcus") {
        const int n = static_cast<int>(rng.next_int(1, n_max));
        SquareMatrix<Rational> a = detail::psd_instance(n, rng);
        auto which = name == "hadamard" ? ClassicalIneq::Hadamard : ClassicalIneq::Marcus;
        detail::tally(out, check_classical(which, a), inst, idx, sink);
        return;
    }

    if (name == "fischer" || name == "lieb_per") {
        const int n = static_cast<int>(rng.next_int(2, std::max(2, n_max)));
        SquareMatrix<Rational> a = detail::psd_instance(n, rng);
        const int split = static_cast<int>(rng.next_int(1, n - 1));
        auto which = name == "fischer" ? ClassicalIneq::Fischer : ClassicalIneq::LiebPer;
        detail::tally(out, check_classical(which, a, split), inst, idx, sink);
        return;
    }

    if (name == "lieb_coeffs" || name == "det_coeffs") {
        const int n = static_cast<int>(rng.next_int(2, std::max(2, n_max)));
        const int n1 = static_cast<int>(rng.next_int(1, n - 1));
        const int n2 = n - n1;
        const bool det_mode = name == "det_coeffs";
        const long variant = rng.next_int(0, 4);

        if (det_mode && variant == 4) {
            // degenerate branch: full PSD matrix with det A' * det A'' = 0
            SquareMatrix<Rational> a = detail::zero_out_row(
                random_psd(n, n, rng.next_u64()), static_cast<int>(rng.next_int(0, n1 - 1)));
            std::vector<int> front, back;
            for (int i = 0; i < n1; ++i) front.push_back(i);
            for (int i = n1; i < n; ++i) back.push_back(i);
            detail::tally(out,
                          check_det_coeffs(a.principal(front), a.principal(back),
                                           a.mat().select(front, back)),
                          inst, idx, sink);
            return;
        }

        SquareMatrix<Rational> a1 = det_mode || rng.next_int(0, 1) == 0
                                        ? random_posdef(n1, rng.next_u64())
                                        : detail::psd_instance(n1, rng);
        SquareMatrix<Rational> a2 = det_mode || rng.next_int(0, 1) == 0
                                        ? random_posdef(n2, rng.next_u64())
                                        : detail::psd_instance(n2, rng);
        Matrix<Rational> b(n1, n2);
        switch (variant) {
            case 0:
                break;  // B = 0
            case 1:  // single nonzero entry
                b(static_cast<int>(rng.next_int(0, n1 - 1)),
                  static_cast<int>(rng.next_int(0, n2 - 1))) = Rational(rng.next_int(1, 3));
                break;
            case 2: {  // rank one
                std::vector<long> u(n1), v(n2);
                for (auto& x : u) x = rng.next_int(-2, 2);
                for (auto& x : v) x = rng.next_int(-2, 2);
                for (int i = 0; i < n1; ++i)
                    for (int j = 0; j < n2; ++j) b(i, j) = Rational(u[i] * v[j]);
                break;
            }
            case 3:  // identity blocks + a guaranteed-large entry: the
                     // assembled matrix is indefinite (Remark robustness)
                a1 = SquareMatrix<Rational>::identity(n1);
                a2 = SquareMatrix<Rational>::identity(n2);
                for (int i = 0; i < n1; ++i)
                    for (int j = 0; j < n2; ++j) b(i, j) = Rational(rng.next_int(-3, 3));
                b(0, 0) = Rational(3);
                break;
            default:  // dense random B
                for (int i = 0; i < n1; ++i)
                    for (int j = 0; j < n2; ++j) b(i, j) = Rational(rng.next_int(-3, 3));
                break;
        }
        detail::tally(out,
                      det_mode ? check_det_coeffs(a1, a2, b) : check_lieb_coeffs(a1, a2, b),
                      inst, idx, sink);
        return;
    }

    if (name == "pf_coeffs" || name == "pf_ineq" || name == "haf_coeffs" || name == "haf_ineq") {
        const int n = static_cast<int>(rng.next_int(1, n_max));
        const bool is_pf = name[0] == 'p';
        const bool is_ineq = name.size() > 4 && name.compare(name.size() - 4, 4, "ineq") == 0;
        SquareMatrix<Rational> a =
            is_pf ? detail::skew_instance(n, rng) : detail::symmetric_instance(n, rng);
        SquareMatrix<Rational> b = rng.next_int(0, 1) == 0 ? random_posdef(n, rng.next_u64())
                                                           : detail::psd_instance(n, rng);
        PfHafCheck which = is_pf ? (is_ineq ? PfHafCheck::PfIneq : PfHafCheck::PfCoeffs)
                                 : (is_ineq ? PfHafCheck::HafIneq : PfHafCheck::HafCoeffs);
        if (is_ineq) {
            for (const Rational& lam : {Rational(0), make_rational(1, 2), Rational(1), Rational(2)})
                detail::tally(out, check_pfhaf(which, a, b, lam), inst, idx, sink);
        } else {
            detail::tally(out, check_pfhaf(which, a, b), inst, idx, sink);
        }
        return;
    }

    if (name == "moment") {
        detail::tally(out, check_moment(detail::gram_instance(n_max, rng)), inst, idx, sink);
        return;
    }

    if (name == "chain") {
        const int n = static_cast<int>(rng.next_int(1, n_max));
        SquareMatrix<Rational> a = detail::psd_instance(n, rng);
        ChainReports chain = check_chain(a);
        detail::tally(out, chain.haf_vs_per, inst, idx, sink);
        detail::tally(out, chain.per_vs_diag, inst, idx, sink);
        return;
    }

    throw std::invalid_argument("unknown battery: " + name);
}

/// Runs `count` random instances of the named theorem battery with sizes up
/// to n_max. Instance i is derived from keyed_u64(seed, i).
inline BatteryOutcome run_battery(const std::string& name, int n_max, int count, Seed seed,
                                  const ReportSink& sink = {}) {
    BatteryOutcome out;
    out.name = name;
    for (int idx = 0; idx < count; ++idx)
        run_battery_instance(name, n_max, keyed_u64(seed, static_cast<std::uint64_t>(idx)), out,
                             idx, sink);
    return out;
}

inline const std::vector<std::string>& battery_names() {
    static const std::vector<std::string> names = {
        "hadamard",  "fischer", "marcus",     "lieb_per", "lieb_coeffs", "det_coeffs",
        "pf_coeffs", "pf_ineq", "haf_coeffs", "haf_ineq", "moment",      "chain"};
    return names;
}

/// Conjecture scan: every (n, p) with 2pn <= dim_cap, `count` exact-mode PSD
/// instances each. Equality off the conjectured zero-row/diagonal set would
/// show up as an equality mismatch.
inline BatteryOutcome conjecture_scan(int dim_cap, int count, Seed seed,
                                      const ReportSink& sink = {}) {
    BatteryOutcome out;
    out.name = "conjecture";
    for (int n = 1; 2 * n <= dim_cap; ++n)
        for (int p = 1; 2 * p * n <= dim_cap; ++p)
            for (int idx = 0; idx < count; ++idx) {
                const Seed inst = keyed_u64(seed, (static_cast<std::uint64_t>(n) << 40) ^
                                                      (static_cast<std::uint64_t>(p) << 20) ^
                                                      static_cast<std::uint64_t>(idx));
                RngStream rng(inst);
                SquareMatrix<Rational> a = detail::psd_instance(n, rng);
                detail::tally(out, conjecture_check(a, p), inst, idx, sink);
            }
    return out;
}

/// Monte Carlo screen of the conjecture for dimensions beyond the exact cap.
struct McScreenOutcome {
    int count = 0;
    int screened_violations = 0;
    std::vector<std::string> failure_lines;
};

inline McScreenOutcome conjecture_mc_screen(int dim_cap, int per_combo, std::uint64_t samples,
                                            Seed seed, double sigmas = 4.0) {
    McScreenOutcome out;
    for (int n = 1; 2 * n <= dim_cap; ++n)
        for (int p = 1; 2 * p * n <= dim_cap; ++p)
            for (int idx = 0; idx < per_combo; ++idx) {
                const Seed inst = keyed_u64(seed, (static_cast<std::uint64_t>(n) << 40) ^
                                                      (static_cast<std::uint64_t>(p) << 20) ^
                                                      static_cast<std::uint64_t>(idx));
                RngStream rng(inst);
                SquareMatrix<Rational> a = detail::psd_instance(n, rng);
                InequalityReport<double> rep =
                    conjecture_check_mc(a, p, samples, keyed_u64(inst, 0xabcdef), sigmas);
                ++out.count;
                if (!rep.holds) {
                    ++out.screened_violations;
                    out.failure_lines.push_back("conjecture_mc n=" + std::to_string(n) + " p=" +
                                                std::to_string(p) + " seed " +
                                                std::to_string(inst));
                }
            }
    return out;
}

}  // namespace hafnia
