// Copyright 2026 The qslack Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#ifndef QSLACK_INSTANCE_IO_HPP_INCLUDED
#define QSLACK_INSTANCE_IO_HPP_INCLUDED

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qslack/constraint.hpp"
#include "qslack/qubo.hpp"
#include "qslack/rng.hpp"

namespace qslack {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct InstanceBundle {
    std::string name;
    ConstrainedProblem problem;
    /// "file:<path>" or "generated:<generator> <params>".
    std::string provenance;
    /// Off-diagonal density in percent: nominal for generated instances, measured otherwise.
    double density_percent = 0.0;

    friend bool operator==(const InstanceBundle&, const InstanceBundle&) = default;
};

/// Percentage of the n(n-1)/2 off-diagonal pairs that carry a nonzero entry.
inline double measured_density(const QuboMatrix& q) {
    const double n = static_cast<double>(q.dimension());
    if (q.dimension() < 2) return 0.0;
    return 100.0 * static_cast<double>(q.num_quadratic()) / (n * (n - 1) / 2);
}

namespace detail {

// Line reader that strips CR, skips blank lines and tracks 1-based
// line numbers for error messages.
class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        while (pos_ < text_.size()) {
            auto end = text_.find('\n', pos_);
            if (end == std::string_view::npos) end = text_.size();
            line = text_.substr(pos_, end - pos_);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            pos_ = end + 1;
            ++line_;
            if (line.find_first_not_of(" \t") != std::string_view::npos) return true;
        }
        if (!at_end_) {
            at_end_ = true;
            ++line_;
        }
        return false;
    }

    std::string_view require(const char* what) {
        std::string_view line;
        if (!next(line)) throw ParseError(line_, std::string("unexpected end of input, expected ") + what);
        return line;
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
    bool at_end_ = false;
};

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline Coeff parse_int(std::string_view token, std::size_t line) {
    Coeff value = 0;
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') ++first;
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
    }
    return value;
}

inline std::vector<Coeff> parse_ints(std::string_view line, std::size_t lineno, std::size_t expected,
                                     const std::string& what) {
    const auto tokens = split(line);
    if (tokens.size() != expected) {
        throw ParseError(lineno, what + ": expected " + std::to_string(expected) + " values, got " +
                                     std::to_string(tokens.size()));
    }
    std::vector<Coeff> out;
    out.reserve(tokens.size());
    for (auto t : tokens) out.push_back(parse_int(t, lineno));
    return out;
}

// Reads the next line and parses exactly `expected` integers from it.
inline std::vector<Coeff> read_ints(LineReader& in, const char* missing, std::size_t expected,
                                    const std::string& what) {
    const auto line = in.require(missing);
    return parse_ints(line, in.line(), expected, what);
}

inline std::size_t parse_count(std::string_view token, std::size_t line, const char* what) {
    const Coeff v = parse_int(token, line);
    if (v < 0) throw ParseError(line, std::string(what) + " must be non-negative");
    return static_cast<std::size_t>(v);
}

inline std::string join(const std::vector<Coeff>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace detail

// ORLIB bqp layout: instance count, then per instance "n nnz" followed by nnz
// lines "i j value" with 1-based indices. Values accumulate on (min, max).
inline std::vector<QuboMatrix> read_orlib_bqp(std::string_view text) {
    detail::LineReader in(text);
    auto header = detail::split(in.require("instance count"));
    if (header.size() != 1) throw ParseError(in.line(), "expected a single instance count");
    const std::size_t count = detail::parse_count(header[0], in.line(), "instance count");

    std::vector<QuboMatrix> out;
    for (std::size_t k = 0; k < count; ++k) {
        auto dims = detail::split(in.require("instance header 'n nnz'"));
        if (dims.size() != 2) throw ParseError(in.line(), "instance header must be 'n nnz'");
        const std::size_t n = detail::parse_count(dims[0], in.line(), "n");
        const std::size_t nnz = detail::parse_count(dims[1], in.line(), "nnz");
        QuboMatrix q(n);
        for (std::size_t e = 0; e < nnz; ++e) {
            auto v = detail::read_ints(in, "entry 'i j value'", 3, "entry");
            if (v[0] < 1 || v[0] > static_cast<Coeff>(n) || v[1] < 1 || v[1] > static_cast<Coeff>(n)) {
                throw ParseError(in.line(), "index out of range [1, " + std::to_string(n) + "]");
            }
            q.add(static_cast<std::size_t>(v[0] - 1), static_cast<std::size_t>(v[1] - 1), v[2]);
        }
        out.push_back(std::move(q));
    }
    std::string_view extra;
    if (in.next(extra)) throw ParseError(in.line(), "trailing data after last instance");
    return out;
}

// Billionnet-Soutif QKP layout (maximization):
//   name
//   n
//   n linear profits
//   n-1 rows of upper-triangle profits, row i (1-based) holding n-i values
//   constraint type (0 = less-or-equal), after a blank separator
//   capacity
//   n weights
inline InstanceBundle read_qkp(std::string_view text, std::string provenance = "file:") {
    detail::LineReader in(text);
    InstanceBundle b;
    b.name = std::string(in.require("instance name"));
    while (!b.name.empty() && (b.name.back() == ' ' || b.name.back() == '\t')) b.name.pop_back();
    b.provenance = std::move(provenance);

    auto nline = detail::split(in.require("variable count"));
    if (nline.size() != 1) throw ParseError(in.line(), "expected a single variable count");
    const std::size_t n = detail::parse_count(nline[0], in.line(), "variable count");
    if (n == 0) throw ParseError(in.line(), "variable count must be positive");

    QuboMatrix q(n, Sense::maximize);
    const auto linear = detail::read_ints(in, "linear profits", n, "linear profits");
    for (std::size_t i = 0; i < n; ++i) q.add(i, i, checked_neg(linear[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto row = detail::read_ints(in, "quadratic profit row", n - i - 1,
                                            "quadratic profit row " + std::to_string(i + 1));
        for (std::size_t k = 0; k < row.size(); ++k) q.add(i, i + 1 + k, checked_neg(row[k]));
    }

    auto type = detail::split(in.require("constraint type"));
    if (type.size() != 1 || detail::parse_int(type[0], in.line()) != 0) {
        throw ParseError(in.line(), "constraint type must be 0 (less-or-equal)");
    }
    auto cap = detail::split(in.require("capacity"));
    if (cap.size() != 1) throw ParseError(in.line(), "expected a single capacity value");
    const Coeff capacity = detail::parse_int(cap[0], in.line());
    const auto weights = detail::read_ints(in, "weights", n, "weights");

    b.problem.objective = std::move(q);
    b.problem.inequalities.push_back({weights, capacity});
    b.density_percent = measured_density(b.problem.objective);
    return b;
}

inline std::string write_qkp(const InstanceBundle& b) {
    const auto& q = b.problem.objective;
    if (q.sense() != Sense::maximize || b.problem.inequalities.size() != 1 || !b.problem.equalities.empty()) {
        throw std::invalid_argument("write_qkp needs a maximization problem with one inequality");
    }
    const std::size_t n = q.dimension();
    std::ostringstream os;
    os << b.name << '\n' << n << '\n';
    std::vector<Coeff> row;
    for (std::size_t i = 0; i < n; ++i) row.push_back(checked_neg(q.linear(i)));
    os << detail::join(row) << '\n';
    for (std::size_t i = 0; i + 1 < n; ++i) {
        row.clear();
        for (std::size_t j = i + 1; j < n; ++j) row.push_back(checked_neg(q.coeff(i, j)));
        os << detail::join(row) << '\n';
    }
    os << '\n' << 0 << '\n' << b.problem.inequalities[0].bound << '\n'
       << detail::join(b.problem.inequalities[0].coefficients) << '\n';
    return os.str();
}

// Random QKP in the style of the classic benchmark family. Draw order, all from
// one SplitMix64 stream: n linear profits; then for each pair i < j in row-major
// order a presence draw (unit() * 100 < density) followed, if present, by the
// profit; then n weights; then the capacity.
inline InstanceBundle generate_qkp(std::size_t n, double density_percent, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("generate_qkp: n must be positive");
    if (!(density_percent > 0.0 && density_percent <= 100.0)) {
        throw std::invalid_argument("generate_qkp: density must be in (0, 100]");
    }
    SplitMix64 rng(seed);
    QuboMatrix q(n, Sense::maximize);
    for (std::size_t i = 0; i < n; ++i) q.add(i, i, -rng.uniform_int(1, 100));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.unit() * 100.0 < density_percent) q.add(i, j, -rng.uniform_int(1, 100));
        }
    }
    std::vector<Coeff> weights(n);
    Coeff total = 0;
    for (auto& w : weights) {
        w = rng.uniform_int(1, 100);
        total += w;
    }
    const Coeff hi = total - 1;
    const Coeff capacity = rng.uniform_int(std::min<Coeff>(50, hi), hi);

    InstanceBundle b;
    std::ostringstream name;
    name << "qkp_n" << n << "_d" << density_percent << "_s" << seed;
    b.name = name.str();
    std::ostringstream prov;
    prov << "generated:qkp n=" << n << " density=" << density_percent << " seed=" << seed;
    b.provenance = prov.str();
    b.density_percent = density_percent;
    b.problem.objective = std::move(q);
    b.problem.inequalities.push_back({std::move(weights), capacity});
    return b;
}

/// sum_i x_i <= floor(n * fraction / 100)
inline ConstrainedProblem attach_cardinality_constraint(const QuboMatrix& q, int fraction_percent) {
    if (fraction_percent <= 0 || fraction_percent >= 100) {
        throw std::invalid_argument("cardinality fraction must be in (0, 100) percent");
    }
    const auto n = static_cast<Coeff>(q.dimension());
    ConstrainedProblem p;
    p.objective = q;
    p.inequalities.push_back({std::vector<Coeff>(q.dimension(), 1), n * fraction_percent / 100});
    return p;
}

// Native text format, version 1. Blank lines are ignored; tokens are separated
// by spaces or tabs. Objective entries are the internal (minimization) values,
// 0-based with i <= j, in (i, j) order.
//
//   qslack-instance 1
//   name <rest of line>
//   provenance <rest of line>
//   density <percent>
//   n <n> sense <min|max> inequalities <k> equalities <e>
//   offset <c>
//   entries <count>
//   <i> <j> <value>            (count lines)
//   inequality <bound>         (k times, each followed by)
//   <a_0> ... <a_{n-1}>
//   equality <bound>           (e times, each followed by)
//   <a_0> ... <a_{n-1}>
//   end
inline constexpr int kNativeFormatVersion = 1;

inline std::string write_native(const InstanceBundle& b) {
    const auto& p = b.problem;
    p.validate();
    std::ostringstream os;
    os << "qslack-instance " << kNativeFormatVersion << '\n';
    os << "name " << b.name << '\n';
    os << "provenance " << b.provenance << '\n';
    os.precision(17);
    os << "density " << b.density_percent << '\n';
    os << "n " << p.dimension() << " sense " << (p.objective.sense() == Sense::maximize ? "max" : "min")
       << " inequalities " << p.inequalities.size() << " equalities " << p.equalities.size() << '\n';
    os << "offset " << p.objective.offset() << '\n';
    os << "entries " << p.objective.num_entries() << '\n';
    p.objective.for_each_entry([&](std::size_t i, std::size_t j, Coeff v) { os << i << ' ' << j << ' ' << v << '\n'; });
    for (const auto& c : p.inequalities) os << "inequality " << c.bound << '\n' << detail::join(c.coefficients) << '\n';
    for (const auto& c : p.equalities) os << "equality " << c.bound << '\n' << detail::join(c.coefficients) << '\n';
    os << "end\n";
    return os.str();
}

inline InstanceBundle read_native(std::string_view text) {
    detail::LineReader in(text);
    auto keyed = [&](std::string_view key) -> std::string_view {
        auto line = in.require(std::string(key).c_str());
        const auto start = line.find_first_not_of(" \t");
        line.remove_prefix(start);
        if (line.substr(0, key.size()) != key ||
            (line.size() > key.size() && line[key.size()] != ' ' && line[key.size()] != '\t')) {
            throw ParseError(in.line(), "expected '" + std::string(key) + "' line");
        }
        line.remove_prefix(std::min(line.size(), key.size() + 1));
        return line;
    };
    auto single = [&](std::string_view key) {
        auto tokens = detail::split(keyed(key));
        if (tokens.size() != 1) throw ParseError(in.line(), "expected one value after '" + std::string(key) + "'");
        return tokens[0];
    };

    auto single_int = [&](std::string_view key) {
        const auto token = single(key);
        return detail::parse_int(token, in.line());
    };
    auto single_count = [&](std::string_view key, const char* what) {
        const auto token = single(key);
        return detail::parse_count(token, in.line(), what);
    };

    const Coeff version = single_int("qslack-instance");
    if (version != kNativeFormatVersion) {
        throw ParseError(in.line(), "unsupported format version " + std::to_string(version));
    }
    InstanceBundle b;
    b.name = std::string(keyed("name"));
    b.provenance = std::string(keyed("provenance"));
    {
        const auto tok = single("density");
        try {
            std::size_t used = 0;
            b.density_percent = std::stod(std::string(tok), &used);
            if (used != tok.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ParseError(in.line(), "density must be a number");
        }
    }

    auto header = detail::split(in.require("size header"));
    if (header.size() != 8 || header[0] != "n" || header[2] != "sense" || header[4] != "inequalities" ||
        header[6] != "equalities") {
        throw ParseError(in.line(), "size header must be 'n <n> sense <min|max> inequalities <k> equalities <e>'");
    }
    const std::size_t n = detail::parse_count(header[1], in.line(), "n");
    Sense sense;
    if (header[3] == "min") sense = Sense::minimize;
    else if (header[3] == "max") sense = Sense::maximize;
    else throw ParseError(in.line(), "sense must be 'min' or 'max'");
    const std::size_t nin = detail::parse_count(header[5], in.line(), "inequality count");
    const std::size_t neq = detail::parse_count(header[7], in.line(), "equality count");

    QuboMatrix q(n, sense);
    q.set_offset(single_int("offset"));
    const std::size_t count = single_count("entries", "entry count");
    for (std::size_t e = 0; e < count; ++e) {
        const auto v = detail::read_ints(in, "objective entry", 3, "objective entry");
        if (v[0] < 0 || v[1] < v[0] || v[1] >= static_cast<Coeff>(n)) {
            throw ParseError(in.line(), "entry indices must satisfy 0 <= i <= j < n");
        }
        if (v[2] == 0) throw ParseError(in.line(), "zero entries are not stored");
        if (q.coeff(static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1])) != 0) {
            throw ParseError(in.line(), "duplicate entry");
        }
        q.add(static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]), v[2]);
    }
    b.problem.objective = std::move(q);
    for (std::size_t k = 0; k < nin; ++k) {
        const Coeff bound = single_int("inequality");
        b.problem.inequalities.push_back(
            {detail::read_ints(in, "inequality coefficients", n, "inequality coefficients"), bound});
    }
    for (std::size_t k = 0; k < neq; ++k) {
        const Coeff bound = single_int("equality");
        b.problem.equalities.push_back(
            {detail::read_ints(in, "equality coefficients", n, "equality coefficients"), bound});
    }
    auto end = detail::split(in.require("'end'"));
    if (end.size() != 1 || end[0] != "end") throw ParseError(in.line(), "expected 'end'");
    std::string_view extra;
    if (in.next(extra)) throw ParseError(in.line(), "trailing data after 'end'");
    return b;
}

}  // namespace qslack

#endif  // QSLACK_INSTANCE_IO_HPP_INCLUDED
