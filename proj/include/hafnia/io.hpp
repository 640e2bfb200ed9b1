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

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hafnia/gram.hpp"
#include "hafnia/matrix.hpp"
#include "hafnia/report.hpp"
#include "hafnia/wick.hpp"

namespace hafnia {

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ScalarMode { Auto, Exact, Float };

using MatrixVariant = std::variant<SquareMatrix<Rational>, SquareMatrix<double>>;
using VectorsVariant = std::variant<GramFactor<Rational>, GramFactor<double>>;

namespace detail {

struct TokenGrid {
    std::vector<std::vector<std::string>> lines;  // per input line, blank lines skipped
    std::vector<int> line_numbers;
};

inline TokenGrid tokenize(std::istream& in) {
    TokenGrid grid;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (toks.empty()) continue;
        grid.lines.push_back(std::move(toks));
        grid.line_numbers.push_back(lineno);
    }
    return grid;
}

inline bool any_fraction(const TokenGrid& grid, std::size_t from_line) {
    for (std::size_t i = from_line; i < grid.lines.size(); ++i)
        for (const std::string& t : grid.lines[i])
            if (t.find('/') != std::string::npos) return true;
    return false;
}

inline double token_to_double(const std::string& t, int lineno, int col) {
    try {
        return parse_rational(t).get_d();
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(lineno) + ", entry " + std::to_string(col + 1) +
                          ": bad scalar '" + t + "'");
    }
}

inline Rational token_to_rational(const std::string& t, int lineno, int col) {
    try {
        return parse_rational(t);
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(lineno) + ", entry " + std::to_string(col + 1) +
                          ": bad scalar '" + t + "'");
    }
}

}  // namespace detail

/// Matrix text format: line 1 is `n kind` with kind in
/// {general, symmetric, skew}; then n lines of n entries, each a decimal
/// or an exact `p/q`. Any fraction anywhere selects exact mode for the whole
/// matrix (decimals are then converted exactly); `mode` overrides.
inline MatrixVariant read_matrix(std::istream& in, ScalarMode mode = ScalarMode::Auto) {
    detail::TokenGrid grid = detail::tokenize(in);
    if (grid.lines.empty()) throw parse_error("empty matrix file");
    const auto& head = grid.lines[0];
    if (head.size() != 2)
        throw parse_error("line " + std::to_string(grid.line_numbers[0]) +
                          ": header must be 'n kind'");
    int n = 0;
    try {
        n = std::stoi(head[0]);
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(grid.line_numbers[0]) + ": bad dimension '" +
                          head[0] + "'");
    }
    if (n < 0) throw parse_error("negative dimension");
    MatrixKind kind;
    if (head[1] == "general")
        kind = MatrixKind::General;
    else if (head[1] == "symmetric")
        kind = MatrixKind::Symmetric;
    else if (head[1] == "skew")
        kind = MatrixKind::Skew;
    else
        throw parse_error("line " + std::to_string(grid.line_numbers[0]) + ": unknown kind '" +
                          head[1] + "'");

    if (static_cast<int>(grid.lines.size()) != n + 1)
        throw parse_error("expected " + std::to_string(n) + " matrix rows, found " +
                          std::to_string(grid.lines.size() - 1));

    const bool exact = mode == ScalarMode::Exact ||
                       (mode == ScalarMode::Auto && detail::any_fraction(grid, 1));

    auto fill = [&](auto& m, auto&& conv) {
        for (int i = 0; i < n; ++i) {
            const auto& row = grid.lines[i + 1];
            const int lineno = grid.line_numbers[i + 1];
            if (static_cast<int>(row.size()) != n)
                throw parse_error("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(n) + " entries, found " +
                                  std::to_string(row.size()));
            for (int j = 0; j < n; ++j) m(i, j) = conv(row[j], lineno, j);
        }
    };

    try {
        if (exact) {
            Matrix<Rational> m(n, n);
            fill(m, detail::token_to_rational);
            return SquareMatrix<Rational>(std::move(m), kind);
        }
        Matrix<double> m(n, n);
        fill(m, detail::token_to_double);
        return SquareMatrix<double>(std::move(m), kind);
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("matrix does not satisfy its kind: ") + e.what());
    }
}

inline MatrixVariant read_matrix_file(const std::string& path, ScalarMode mode = ScalarMode::Auto) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    return read_matrix(in, mode);
}

template <typename T>
void write_matrix(std::ostream& os, const SquareMatrix<T>& m) {
    os << m.n() << ' ' << kind_name(m.kind()) << '\n';
    for (int i = 0; i < m.n(); ++i) {
        for (int j = 0; j < m.n(); ++j) {
            if (j) os << ' ';
            os << scalar_to_string(m(i, j));
        }
        os << '\n';
    }
}

/// Vector list format: line 1 is `n d`; then n lines of d entries.
inline VectorsVariant read_vectors(std::istream& in, ScalarMode mode = ScalarMode::Auto) {
    detail::TokenGrid grid = detail::tokenize(in);
    if (grid.lines.empty()) throw parse_error("empty vector file");
    const auto& head = grid.lines[0];
    if (head.size() != 2)
        throw parse_error("line " + std::to_string(grid.line_numbers[0]) +
                          ": header must be 'n d'");
    int n = 0, d = 0;
    try {
        n = std::stoi(head[0]);
        d = std::stoi(head[1]);
    } catch (const std::exception&) {
        throw parse_error("bad vector header");
    }
    if (n < 0 || d < 0) throw parse_error("negative vector dimensions");
    if (static_cast<int>(grid.lines.size()) != n + 1)
        throw parse_error("expected " + std::to_string(n) + " vector rows, found " +
                          std::to_string(grid.lines.size() - 1));

    const bool exact = mode == ScalarMode::Exact ||
                       (mode == ScalarMode::Auto && detail::any_fraction(grid, 1));

    auto fill = [&](auto& g, auto&& conv) {
        using Entry = decltype(conv(std::string(), 0, 0));
        for (int i = 0; i < n; ++i) {
            const auto& row = grid.lines[i + 1];
            const int lineno = grid.line_numbers[i + 1];
            if (static_cast<int>(row.size()) != d)
                throw parse_error("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(d) + " entries, found " +
                                  std::to_string(row.size()));
            std::vector<Entry> v(d);
            for (int j = 0; j < d; ++j) v[j] = conv(row[j], lineno, j);
            g.vectors.push_back(std::move(v));
        }
    };

    if (exact) {
        GramFactor<Rational> g;
        g.d = d;
        fill(g, detail::token_to_rational);
        return g;
    }
    GramFactor<double> g;
    g.d = d;
    fill(g, detail::token_to_double);
    return g;
}

inline VectorsVariant read_vectors_file(const std::string& path,
                                        ScalarMode mode = ScalarMode::Auto) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    return read_vectors(in, mode);
}

/// One line-delimited JSON record per check.
template <typename T>
nlohmann::json report_json(const InequalityReport<T>& r) {
    nlohmann::json j;
    j["check"] = r.name;
    j["lhs"] = scalar_to_string(r.lhs);
    j["rhs"] = scalar_to_string(r.rhs);
    j["slack"] = scalar_to_string(r.slack);
    j["holds"] = r.holds;
    j["equality_observed"] = r.equality_observed;
    j["equality_applicable"] = r.equality_applicable;
    j["equality_predicted"] = r.equality_predicted;
    nlohmann::json diag;
    diag["zero_rows"] = r.diagnosis.zero_rows;
    diag["diagonal"] = r.diagnosis.diagonal;
    diag["rank"] = r.diagnosis.rank;
    diag["condition"] = r.diagnosis.condition;
    j["diagnosis"] = diag;
    if (!r.detail.empty()) j["detail"] = r.detail;
    j["seed"] = r.instance_seed;
    if (r.mc_samples > 0) {
        j["mc_std_error"] = r.mc_std_error;
        j["mc_samples"] = r.mc_samples;
    }
    return j;
}

inline nlohmann::json estimate_json(const McEstimate& e) {
    nlohmann::json j;
    j["mean"] = e.mean;
    j["std_error"] = e.std_error;
    j["n_samples"] = e.n_samples;
    j["seed"] = e.seed;
    return j;
}

}  // namespace hafnia
