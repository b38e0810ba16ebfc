#pragma once

// Run configuration: a small TOML subset (sections, `key = value`, strings,
// booleans, integers, floats, arrays) mapped onto RunConfig. Unknown keys are
// errors. Example:
//
//   preset = "hibiscus"          # optional starting point
//
//   [plan]
//   count = 20000
//
//   [grid]
//   width = 512
//   height = 512
//
//   [render]
//   mode = "smoky_bloom"
//   palette = "ocean"

#include "polynomiogram/density.hpp"
#include "polynomiogram/error.hpp"
#include "polynomiogram/expr.hpp"
#include "polynomiogram/family.hpp"
#include "polynomiogram/presets.hpp"
#include "polynomiogram/render.hpp"
#include "polynomiogram/sampling.hpp"
#include "polynomiogram/solver.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace polynomiogram::config {

// ---------------------------------------------------------------------------
// Document model

struct Value;
using Array = std::vector<Value>;

struct Value
{
    std::variant<bool, std::int64_t, double, std::string, Array> data;
    int line = 0;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_number() const
    {
        return std::holds_alternative<std::int64_t>(data) || std::holds_alternative<double>(data);
    }
};

/// Flat map from dotted key (`section.sub.key`) to value.
using Document = std::map<std::string, Value>;

namespace detail {

class TextParser
{
public:
    explicit TextParser(std::string_view src) : src_(src) {}

    Document parse()
    {
        Document doc;
        std::string section;
        for (;;) {
            skip_blank_lines();
            if (eof())
                break;
            if (peek() == '[') {
                ++pos_;
                section = parse_key();
                skip_inline_ws();
                expect(']');
                end_of_line();
                continue;
            }
            const int at_line = line_;
            std::string key = parse_key();
            skip_inline_ws();
            expect('=');
            Value v = parse_value();
            v.line = at_line;
            end_of_line();
            const std::string full = section.empty() ? key : section + "." + key;
            if (doc.count(full))
                throw ConfigError(full, "duplicate key (line " + std::to_string(at_line) + ")");
            doc.emplace(full, std::move(v));
        }
        return doc;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ConfigError("", "line " + std::to_string(line_) + ": " + msg);
    }

    void skip_inline_ws()
    {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
            ++pos_;
    }

    void skip_comment()
    {
        if (!eof() && peek() == '#')
            while (!eof() && peek() != '\n')
                ++pos_;
    }

    // Whitespace, comments and newlines, as allowed inside arrays.
    void skip_all_ws()
    {
        for (;;) {
            skip_inline_ws();
            skip_comment();
            if (!eof() && peek() == '\n') {
                ++pos_;
                ++line_;
                continue;
            }
            return;
        }
    }

    void skip_blank_lines() { skip_all_ws(); }

    void end_of_line()
    {
        skip_inline_ws();
        skip_comment();
        if (eof())
            return;
        if (peek() != '\n')
            fail("unexpected '" + std::string(1, peek()) + "' after value");
        ++pos_;
        ++line_;
    }

    void expect(char c)
    {
        skip_inline_ws();
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string parse_key()
    {
        std::string key;
        for (;;) {
            skip_inline_ws();
            if (!eof() && peek() == '"') {
                key += parse_string();
            } else {
                const std::size_t start = pos_;
                while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                                  peek() == '-'))
                    ++pos_;
                if (pos_ == start)
                    fail("expected a key");
                key += src_.substr(start, pos_ - start);
            }
            skip_inline_ws();
            if (!eof() && peek() == '.') {
                ++pos_;
                key += '.';
                continue;
            }
            return key;
        }
    }

    std::string parse_string()
    {
        ++pos_; // opening quote
        std::string out;
        for (;;) {
            if (eof() || peek() == '\n')
                fail("unterminated string");
            const char c = src_[pos_++];
            if (c == '"')
                return out;
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof())
                fail("unterminated escape");
            const char e = src_[pos_++];
            switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default: fail(std::string("unknown escape '\\") + e + "'");
            }
        }
    }

    Value parse_value()
    {
        skip_inline_ws();
        if (eof())
            fail("missing value");
        const char c = peek();
        if (c == '"')
            return {parse_string()};
        if (c == '[') {
            ++pos_;
            Array items;
            skip_all_ws();
            while (!eof() && peek() != ']') {
                items.push_back(parse_value());
                skip_all_ws();
                if (!eof() && peek() == ',') {
                    ++pos_;
                    skip_all_ws();
                    continue;
                }
                break;
            }
            skip_all_ws();
            if (eof() || peek() != ']')
                fail("unterminated array");
            ++pos_;
            return {std::move(items)};
        }
        const std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                          peek() == '-' || peek() == '.' || peek() == '_'))
            ++pos_;
        const std::string_view word = src_.substr(start, pos_ - start);
        if (word == "true")
            return {true};
        if (word == "false")
            return {false};
        if (word.empty())
            fail("unexpected '" + std::string(1, c) + "'");
        std::string digits(word);
        std::erase(digits, '_');
        const char* b = digits.data();
        const char* e = b + digits.size();
        if (*b == '+')
            ++b;
        if (digits.find_first_of(".eE") == std::string::npos) {
            std::int64_t i = 0;
            auto [p, ec] = std::from_chars(b, e, i);
            if (ec == std::errc() && p == e)
                return {i};
        } else {
            double d = 0.0;
            auto [p, ec] = std::from_chars(b, e, d);
            if (ec == std::errc() && p == e)
                return {d};
        }
        fail("invalid value '" + std::string(word) + "'");
    }
};

} // namespace detail

inline Document parse_document(std::string_view text) { return detail::TextParser(text).parse(); }

// ---------------------------------------------------------------------------
// Schema

struct GridConfig
{
    int width = 1024;
    int height = 1024;
};

struct SolverConfig
{
    solver::Engine engine = solver::Engine::CompanionQR;
    solver::PrecisionConfig precision;
    int degree_cap = solver::kDefaultDegreeCap;
    bool polish = true; // Newton polish after QR, refinement sweeps after Aberth
};

struct BoundsConfig
{
    double margin_fraction = 0.05;
    std::optional<density::Bounds> explicit_bounds;
};

struct OutputConfig
{
    std::string image = "polynomiogram.png";
    std::string grid_dump;
    std::string roots_csv;
    std::uint64_t roots_csv_cap = 1'000'000;
};

struct RunConfig
{
    std::string preset; // informational; empty for hand-written families
    family::FamilySpec family;
    sampling::SamplingPlan plan;
    GridConfig grid;
    SolverConfig solver;
    BoundsConfig bounds;
    render::RenderSpec render;
    OutputConfig output;
    int workers = 0;

    explicit RunConfig(family::Preset p) : family(std::move(p.family)), plan(std::move(p.plan)) {}
};

/// Preset defaults plus the solver and render settings that suit each one.
inline RunConfig preset_config(std::string_view name)
{
    RunConfig cfg(family::preset(name));
    cfg.preset = std::string(name);
    if (name == "lucas") {
        cfg.solver.engine = solver::Engine::Aberth;
        cfg.solver.precision.significand_bits = 106;
        cfg.render.mode = render::Mode::PurePixel;
        cfg.render.floor = 0.0;
    } else if (name == "cubic") {
        cfg.render.palette = render::ocean_palette();
    } else if (name == "hibiscus") {
        cfg.render.mode = render::Mode::SmokyBloom;
    } else if (name == "fusion") {
        cfg.render.mode = render::Mode::PurePixel;
        cfg.render.floor = 0.0;
    }
    return cfg;
}

namespace detail {

inline const char* engine_name(solver::Engine e)
{
    return e == solver::Engine::Aberth ? "aberth" : "companion";
}

inline const char* mode_name(render::Mode m)
{
    switch (m) {
    case render::Mode::PurePixel: return "pure_pixel";
    case render::Mode::SmoothGlow: return "smooth_glow";
    case render::Mode::SmokyBloom: return "smoky_bloom";
    }
    return "?";
}

class Reader
{
public:
    explicit Reader(const Document& doc) : doc_(doc) {}

    bool has(const std::string& key) const { return doc_.count(key) != 0; }

    bool has_section(const std::string& prefix) const
    {
        const auto it = doc_.lower_bound(prefix + ".");
        return it != doc_.end() && it->first.compare(0, prefix.size() + 1, prefix + ".") == 0;
    }

    const Value* find(const std::string& key)
    {
        const auto it = doc_.find(key);
        if (it == doc_.end())
            return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void mark(const std::string& key) { used_.insert(key); }

    std::vector<std::string> keys_with_prefix(const std::string& prefix) const
    {
        std::vector<std::string> out;
        for (auto it = doc_.lower_bound(prefix); it != doc_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it)
            out.push_back(it->first);
        return out;
    }

    std::optional<std::string> str(const std::string& key)
    {
        const Value* v = find(key);
        if (!v)
            return std::nullopt;
        if (!v->is_string())
            throw ConfigError(key, "expected a string");
        return std::get<std::string>(v->data);
    }

    std::optional<double> real(const std::string& key)
    {
        const Value* v = find(key);
        if (!v)
            return std::nullopt;
        return as_real(key, *v);
    }

    std::optional<std::int64_t> integer(const std::string& key)
    {
        const Value* v = find(key);
        if (!v)
            return std::nullopt;
        if (!std::holds_alternative<std::int64_t>(v->data))
            throw ConfigError(key, "expected an integer");
        return std::get<std::int64_t>(v->data);
    }

    std::optional<bool> boolean(const std::string& key)
    {
        const Value* v = find(key);
        if (!v)
            return std::nullopt;
        if (!std::holds_alternative<bool>(v->data))
            throw ConfigError(key, "expected true or false");
        return std::get<bool>(v->data);
    }

    std::optional<std::vector<double>> reals(const std::string& key, std::size_t size)
    {
        const Value* v = find(key);
        if (!v)
            return std::nullopt;
        if (!v->is_array() || std::get<Array>(v->data).size() != size)
            throw ConfigError(key, "expected an array of " + std::to_string(size) + " numbers");
        std::vector<double> out;
        for (const auto& item : std::get<Array>(v->data))
            out.push_back(as_real(key, item));
        return out;
    }

    static double as_real(const std::string& key, const Value& v)
    {
        if (const auto* i = std::get_if<std::int64_t>(&v.data))
            return static_cast<double>(*i);
        if (const auto* d = std::get_if<double>(&v.data))
            return *d;
        throw ConfigError(key, "expected a number");
    }

    /// Every key the schema did not consume is a configuration error.
    void reject_unused() const
    {
        for (const auto& [key, value] : doc_)
            if (!used_.count(key))
                throw ConfigError(key, "unknown key (line " + std::to_string(value.line) + ")");
    }

private:
    const Document& doc_;
    std::set<std::string> used_;
};

inline complex parse_constant(const std::string& key, const Value& v)
{
    if (v.is_number())
        return {Reader::as_real(key, v), 0.0};
    if (!v.is_string())
        throw ConfigError(key, "coefficients must be numbers or expression strings");
    try {
        return expr::evaluate(expr::parse(std::get<std::string>(v.data)), complex{}, complex{});
    } catch (const Error& e) {
        throw ConfigError(key, e.what());
    }
}

inline family::FamilySpec read_family(Reader& r, std::uint64_t plan_seed)
{
    const auto kind = r.str("family.kind");
    if (!kind)
        throw ConfigError("family.kind", "missing; required when a [family] section is given");
    auto degree = [&](const char* what) {
        const auto d = r.integer("family.degree");
        if (!d)
            throw ConfigError("family.degree", std::string("required for ") + what + " families");
        if (*d < 1 || *d > 100000)
            throw ConfigError("family.degree", "must be in [1, 100000]");
        return static_cast<int>(*d);
    };
    try {
        if (*kind == "expr") {
            family::ExprFamily f{degree("expr"), {}};
            for (const auto& key : r.keys_with_prefix("family.terms.")) {
                const std::string idx = key.substr(std::string("family.terms.").size());
                int k = -1;
                const auto [end, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), k);
                if (ec != std::errc{} || end != idx.data() + idx.size() || k < 0 || k > f.degree)
                    throw ConfigError(key, "term index must be an integer in [0, degree]");
                const auto src = r.str(key);
                try {
                    f.terms.emplace(k, expr::parse(*src));
                } catch (const ParseError& e) {
                    throw ConfigError(key, e.what());
                }
            }
            return f;
        }
        if (*kind == "kac") {
            const int d = degree("kac");
            const auto seed = r.integer("family.seed");
            return family::KacFamily{d, seed ? static_cast<std::uint64_t>(*seed) : plan_seed};
        }
        if (*kind == "lucas")
            return family::LucasFamily{degree("lucas")};
        if (*kind == "cubic")
            return family::CubicFamily{};
        if (*kind == "explicit") {
            const Value* v = r.find("family.polynomials");
            if (!v || !v->is_array())
                throw ConfigError("family.polynomials", "expected an array of coefficient arrays");
            family::ExplicitFamily f;
            for (const auto& poly : std::get<Array>(v->data)) {
                if (!poly.is_array())
                    throw ConfigError("family.polynomials", "expected an array of coefficient arrays");
                std::vector<complex> c;
                for (const auto& item : std::get<Array>(poly.data))
                    c.push_back(parse_constant("family.polynomials", item));
                f.polynomials.push_back(std::move(c));
            }
            return f;
        }
    } catch (const DomainError& e) {
        throw ConfigError("family", e.what());
    }
    throw ConfigError("family.kind", "unknown family kind '" + *kind +
                                         "' (expected expr, kac, lucas, cubic, explicit)");
}

inline sampling::SamplingDomain read_domain(Reader& r, const std::string& prefix)
{
    const auto kind = r.str(prefix + ".kind");
    if (!kind)
        throw ConfigError(prefix + ".kind", "missing; required when the section is given");
    auto need = [&](const std::string& name) {
        const auto v = r.real(prefix + "." + name);
        if (!v)
            throw ConfigError(prefix + "." + name, "required for " + *kind + " domains");
        return *v;
    };
    auto point = [&](const std::string& name) {
        const auto v = r.reals(prefix + "." + name, 2);
        if (!v)
            throw ConfigError(prefix + "." + name, "required for segment domains");
        return complex{(*v)[0], (*v)[1]};
    };
    try {
        if (*kind == "circle")
            return sampling::Circle{need("radius")};
        if (*kind == "disk")
            return sampling::Disk{need("radius")};
        if (*kind == "annulus")
            return sampling::Annulus{need("r_in"), need("r_out")};
        if (*kind == "segment")
            return sampling::Segment{point("from"), point("to")};
    } catch (const DomainError& e) {
        throw ConfigError(prefix, e.what());
    }
    throw ConfigError(prefix + ".kind",
                      "unknown domain '" + *kind + "' (expected circle, disk, annulus, segment)");
}

} // namespace detail

/// Builds a RunConfig from config text. Throws ConfigError naming the key.
inline RunConfig load_config(std::string_view text)
{
    const Document doc = parse_document(text);
    detail::Reader r(doc);

    const auto preset_name = r.str("preset");
    RunConfig cfg = [&] {
        try {
            return preset_config(preset_name.value_or("kac10"));
        } catch (const UnknownPreset& e) {
            throw ConfigError("preset", e.what());
        }
    }();
    if (!preset_name)
        cfg.preset.clear();

    if (const auto v = r.integer("plan.count")) {
        if (*v < 1)
            throw ConfigError("plan.count", "must be >= 1");
        cfg.plan.count = static_cast<std::uint64_t>(*v);
    }
    if (const auto v = r.integer("plan.seed")) {
        if (*v < 0)
            throw ConfigError("plan.seed", "must be >= 0");
        cfg.plan.seed = static_cast<std::uint64_t>(*v);
    }
    if (r.has_section("plan.domain1"))
        cfg.plan.domain1 = detail::read_domain(r, "plan.domain1");
    if (r.has_section("plan.domain2"))
        cfg.plan.domain2 = detail::read_domain(r, "plan.domain2");

    if (r.has_section("family")) {
        cfg.family = detail::read_family(r, cfg.plan.seed);
        cfg.preset.clear();
    }

    for (const char* key : {"grid.width", "grid.height"})
        if (const auto v = r.integer(key)) {
            if (*v < 16 || *v > 16384)
                throw ConfigError(key, "must be in [16, 16384]");
            (std::string_view(key) == "grid.width" ? cfg.grid.width : cfg.grid.height) =
                static_cast<int>(*v);
        }

    if (const auto v = r.real("bounds.margin_fraction")) {
        if (!(*v >= 0.0) || *v > 10.0)
            throw ConfigError("bounds.margin_fraction", "must be in [0, 10]");
        cfg.bounds.margin_fraction = *v;
    }
    if (const auto v = r.reals("bounds.explicit", 4)) {
        const density::Bounds b{(*v)[0], (*v)[1], (*v)[2], (*v)[3]};
        if (!(b.re_max > b.re_min) || !(b.im_max > b.im_min))
            throw ConfigError("bounds.explicit", "expected [re_min, re_max, im_min, im_max] with max > min");
        cfg.bounds.explicit_bounds = b;
    }

    if (const auto v = r.str("solver.engine")) {
        if (*v == "companion")
            cfg.solver.engine = solver::Engine::CompanionQR;
        else if (*v == "aberth")
            cfg.solver.engine = solver::Engine::Aberth;
        else
            throw ConfigError("solver.engine", "expected \"companion\" or \"aberth\"");
    }
    if (const auto v = r.integer("solver.significand_bits")) {
        if (*v != 53 && *v != 106)
            throw ConfigError("solver.significand_bits", "supported values are 53 and 106");
        cfg.solver.precision.significand_bits = static_cast<int>(*v);
    }
    if (const auto v = r.integer("solver.max_iterations")) {
        if (*v < 1 || *v > 1000000)
            throw ConfigError("solver.max_iterations", "must be in [1, 1000000]");
        cfg.solver.precision.max_iterations = static_cast<int>(*v);
    }
    if (const auto v = r.real("solver.tolerance_factor")) {
        if (!(*v > 0.0))
            throw ConfigError("solver.tolerance_factor", "must be positive");
        cfg.solver.precision.tolerance_factor = *v;
    }
    if (const auto v = r.integer("solver.degree_cap")) {
        if (*v < 1 || *v > 100000)
            throw ConfigError("solver.degree_cap", "must be in [1, 100000]");
        cfg.solver.degree_cap = static_cast<int>(*v);
    }
    if (const auto v = r.boolean("solver.polish"))
        cfg.solver.polish = *v;

    if (const auto v = r.str("render.mode")) {
        if (*v == "pure_pixel")
            cfg.render.mode = render::Mode::PurePixel;
        else if (*v == "smooth_glow")
            cfg.render.mode = render::Mode::SmoothGlow;
        else if (*v == "smoky_bloom")
            cfg.render.mode = render::Mode::SmokyBloom;
        else
            throw ConfigError("render.mode", "expected pure_pixel, smooth_glow or smoky_bloom");
    }
    if (const auto v = r.str("render.palette")) {
        try {
            cfg.render.palette = render::palette_by_name(*v);
        } catch (const DomainError& e) {
            throw ConfigError("render.palette", e.what());
        }
    }
    if (const auto v = r.real("render.gamma")) {
        if (!(*v > 0.0))
            throw ConfigError("render.gamma", "must be positive");
        cfg.render.gamma = *v;
    }
    if (const auto v = r.real("render.floor")) {
        if (!(*v >= 0.0 && *v < 1.0))
            throw ConfigError("render.floor", "must be in [0, 1)");
        cfg.render.floor = *v;
    }
    if (const auto v = r.real("render.glow_sigma")) {
        if (!(*v > 0.0) || *v > 256.0)
            throw ConfigError("render.glow_sigma", "must be in (0, 256]");
        cfg.render.glow_sigma = *v;
    }
    if (const auto v = r.real("render.glow_weight")) {
        if (!(*v >= 0.0))
            throw ConfigError("render.glow_weight", "must be >= 0");
        cfg.render.glow_weight = *v;
    }
    if (const auto v = r.reals("render.bloom_weights", 3)) {
        for (double w : *v)
            if (!(w >= 0.0))
                throw ConfigError("render.bloom_weights", "weights must be >= 0");
        cfg.render.bloom_weights = {(*v)[0], (*v)[1], (*v)[2]};
    }
    if (const auto v = r.boolean("render.log_scale"))
        cfg.render.log_scale = *v;

    if (const auto v = r.str("output.image"))
        cfg.output.image = *v;
    if (const auto v = r.str("output.grid_dump"))
        cfg.output.grid_dump = *v;
    if (const auto v = r.str("output.roots_csv"))
        cfg.output.roots_csv = *v;
    if (const auto v = r.integer("output.roots_csv_cap")) {
        if (*v < 0)
            throw ConfigError("output.roots_csv_cap", "must be >= 0");
        cfg.output.roots_csv_cap = static_cast<std::uint64_t>(*v);
    }

    if (const auto v = r.integer("run.workers")) {
        if (*v < 0 || *v > 1024)
            throw ConfigError("run.workers", "must be in [0, 1024] (0 = one per hardware thread)");
        cfg.workers = static_cast<int>(*v);
    }

    r.reject_unused();
    return cfg;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    // Keep floats recognisable as floats when read back.
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

inline std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

inline std::string domain_text(const std::string& section, const sampling::SamplingDomain& d)
{
    std::string out = "[" + section + "]\n";
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, sampling::Circle>)
                out += "kind = \"circle\"\nradius = " + num(v.radius) + "\n";
            else if constexpr (std::is_same_v<T, sampling::Disk>)
                out += "kind = \"disk\"\nradius = " + num(v.radius) + "\n";
            else if constexpr (std::is_same_v<T, sampling::Annulus>)
                out += "kind = \"annulus\"\nr_in = " + num(v.r_in) + "\nr_out = " + num(v.r_out) + "\n";
            else
                out += "kind = \"segment\"\nfrom = [" + num(v.z0.real()) + ", " + num(v.z0.imag()) +
                       "]\nto = [" + num(v.z1.real()) + ", " + num(v.z1.imag()) + "]\n";
        },
        d.variant());
    return out;
}

inline std::string coefficient_text(complex c)
{
    if (c.imag() == 0.0)
        return num(c.real());
    return quote(num(c.real()) + " + " + num(c.imag()) + "*i");
}

inline std::string family_text(const family::FamilySpec& spec)
{
    std::string out = "[family]\n";
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, family::ExprFamily>) {
                out += "kind = \"expr\"\ndegree = " + std::to_string(f.degree) + "\n\n[family.terms]\n";
                for (const auto& [k, term] : f.terms) {
                    const std::string src = term.source().empty() ? expr::serialize(term) : term.source();
                    out += std::to_string(k) + " = " + quote(src) + "\n";
                }
            } else if constexpr (std::is_same_v<T, family::KacFamily>) {
                out += "kind = \"kac\"\ndegree = " + std::to_string(f.degree) +
                       "\nseed = " + std::to_string(f.seed) + "\n";
            } else if constexpr (std::is_same_v<T, family::LucasFamily>) {
                out += "kind = \"lucas\"\ndegree = " + std::to_string(f.degree) + "\n";
            } else if constexpr (std::is_same_v<T, family::CubicFamily>) {
                out += "kind = \"cubic\"\n";
            } else {
                out += "kind = \"explicit\"\n# coefficients a0 .. an, one array per polynomial\npolynomials = [\n";
                for (const auto& p : f.polynomials) {
                    out += "  [";
                    for (std::size_t k = 0; k < p.size(); ++k)
                        out += (k ? ", " : "") + coefficient_text(p[k]);
                    out += "],\n";
                }
                out += "]\n";
            }
        },
        spec.variant());
    return out;
}

} // namespace detail

/// Complete, self-contained config text; load_config() reads it back to an
/// equivalent RunConfig.
inline std::string print_config(const RunConfig& cfg)
{
    using detail::num;
    using detail::quote;
    std::string out;
    if (!cfg.preset.empty())
        out += "# expanded from preset \"" + cfg.preset + "\"\n\n";
    out += detail::family_text(cfg.family) + "\n";
    out += "[plan]\ncount = " + std::to_string(cfg.plan.count) +
           "\nseed = " + std::to_string(cfg.plan.seed) + "\n\n";
    out += detail::domain_text("plan.domain1", cfg.plan.domain1) + "\n";
    out += detail::domain_text("plan.domain2", cfg.plan.domain2) + "\n";
    out += "[grid]\nwidth = " + std::to_string(cfg.grid.width) +
           "\nheight = " + std::to_string(cfg.grid.height) + "\n\n";
    out += "[bounds]\nmargin_fraction = " + num(cfg.bounds.margin_fraction) + "\n";
    if (const auto& b = cfg.bounds.explicit_bounds)
        out += "explicit = [" + num(b->re_min) + ", " + num(b->re_max) + ", " + num(b->im_min) +
               ", " + num(b->im_max) + "]\n";
    out += "\n[solver]\nengine = " + quote(detail::engine_name(cfg.solver.engine)) +
           "\nsignificand_bits = " + std::to_string(cfg.solver.precision.significand_bits) +
           "\nmax_iterations = " + std::to_string(cfg.solver.precision.max_iterations) +
           "\ntolerance_factor = " + num(cfg.solver.precision.tolerance_factor) +
           "\ndegree_cap = " + std::to_string(cfg.solver.degree_cap) +
           "\npolish = " + (cfg.solver.polish ? "true" : "false") + "\n\n";

    std::string palette = "ember";
    if (cfg.render.palette.size() == render::ocean_palette().size() &&
        cfg.render.palette.front().rgb == render::ocean_palette().front().rgb)
        palette = "ocean";
    out += "[render]\nmode = " + quote(detail::mode_name(cfg.render.mode)) +
           "\npalette = " + quote(palette) + "\ngamma = " + num(cfg.render.gamma) +
           "\nfloor = " + num(cfg.render.floor) + "\nglow_sigma = " + num(cfg.render.glow_sigma) +
           "\nglow_weight = " + num(cfg.render.glow_weight) + "\nbloom_weights = [" +
           num(cfg.render.bloom_weights[0]) + ", " + num(cfg.render.bloom_weights[1]) + ", " +
           num(cfg.render.bloom_weights[2]) + "]\nlog_scale = " +
           (cfg.render.log_scale ? "true" : "false") + "\n\n";

    out += "[output]\nimage = " + quote(cfg.output.image) + "\n";
    if (!cfg.output.grid_dump.empty())
        out += "grid_dump = " + quote(cfg.output.grid_dump) + "\n";
    if (!cfg.output.roots_csv.empty())
        out += "roots_csv = " + quote(cfg.output.roots_csv) + "\n";
    out += "roots_csv_cap = " + std::to_string(cfg.output.roots_csv_cap) + "\n\n";
    out += "[run]\nworkers = " + std::to_string(cfg.workers) + "\n";
    return out;
}

} // namespace polynomiogram::config
