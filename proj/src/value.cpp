#include "ar/value.hpp"

#include "ar/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace ar {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidDeclaration: return "InvalidDeclaration";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::NotEnumerable: return "NotEnumerable";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotInstantiable: return "NotInstantiable";
    case ErrorCode::MissingInstantiation: return "MissingInstantiation";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::TheoryNotValidated: return "TheoryNotValidated";
    case ErrorCode::NotProductSpace: return "NotProductSpace";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    }
    return "Unknown";
}

namespace {

int compare_values(const Value& a, const Value& b)
{
    if (a.data.index() != b.data.index()) {
        return a.data.index() < b.data.index() ? -1 : 1;
    }
    auto three_way = [](const auto& x, const auto& y) { return x < y ? -1 : (y < x ? 1 : 0); };
    switch (a.data.index()) {
    case 0: return three_way(a.label().name, b.label().name);
    case 1: return three_way(a.bits().digits, b.bits().digits);
    case 2: return three_way(a.integer(), b.integer());
    case 3: return three_way(a.reals(), b.reals());
    default: {
        const auto& ta = a.tuple();
        const auto& tb = b.tuple();
        for (std::size_t i = 0; i < ta.size() && i < tb.size(); ++i) {
            if (int c = compare_values(ta[i], tb[i]); c != 0) {
                return c;
            }
        }
        return three_way(ta.size(), tb.size());
    }
    }
}

std::string format_real(double x)
{
    // Shortest text that reads back to the same double.
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

class LiteralParser {
public:
    explicit LiteralParser(std::string_view text) : text_(text) {}

    Value parse()
    {
        Value v = parse_value();
        skip_ws();
        if (pos_ != text_.size()) {
            error("trailing characters");
        }
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void error(const std::string& what) const
    {
        fail(ErrorCode::SyntaxError, "bad state literal '" + std::string(text_) + "' at offset " +
                                         std::to_string(pos_) + ": " + what);
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    void expect(char c)
    {
        if (peek() != c) {
            error(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    Value parse_value()
    {
        const char c = peek();
        if (c == '"') {
            ++pos_;
            const auto end = text_.find('"', pos_);
            if (end == std::string_view::npos) {
                error("unterminated bitstring");
            }
            std::string digits(text_.substr(pos_, end - pos_));
            for (char d : digits) {
                if (d != '0' && d != '1') {
                    error("bitstrings may only contain 0 and 1");
                }
            }
            pos_ = end + 1;
            return Value(Bits{std::move(digits)});
        }
        if (c == '(') {
            ++pos_;
            Value::Tuple items;
            if (peek() == ')') {
                error("empty tuple");
            }
            for (;;) {
                items.push_back(parse_value());
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                expect(')');
                break;
            }
            return Value(std::move(items));
        }
        if (c == '[') {
            ++pos_;
            RealVector xs;
            for (;;) {
                xs.push_back(parse_real());
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                expect(']');
                break;
            }
            return Value(std::move(xs));
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            return Value(parse_integer());
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const auto start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                    text_[pos_] == '-' || text_[pos_] == '.')) {
                ++pos_;
            }
            return Value(Label{std::string(text_.substr(start, pos_ - start))});
        }
        error("unexpected character");
    }

    const char* number_start()
    {
        skip_ws();
        const char* first = text_.data() + pos_;
        if (first != text_.data() + text_.size() && *first == '+') {
            ++first;
        }
        return first;
    }

    double parse_real()
    {
        double x = 0;
        auto [ptr, ec] = std::from_chars(number_start(), text_.data() + text_.size(), x);
        if (ec != std::errc{} || !std::isfinite(x)) {
            error("expected a finite real number");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return x;
    }

    Integer parse_integer()
    {
        Integer i = 0;
        auto [ptr, ec] = std::from_chars(number_start(), text_.data() + text_.size(), i);
        if (ec != std::errc{}) {
            error("expected an integer");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return i;
    }
};

}  // namespace

bool operator==(const Value& a, const Value& b) { return compare_values(a, b) == 0; }
bool operator<(const Value& a, const Value& b) { return compare_values(a, b) < 0; }

std::string format_literal(const Value& v)
{
    if (v.is_label()) {
        return v.label().name;
    }
    if (v.is_bits()) {
        return "\"" + v.bits().digits + "\"";
    }
    if (v.is_integer()) {
        return std::to_string(v.integer());
    }
    std::ostringstream out;
    if (v.is_real_vector()) {
        out << '[';
        const auto& xs = v.reals();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            out << (i ? "," : "") << format_real(xs[i]);
        }
        out << ']';
        return out.str();
    }
    out << '(';
    const auto& items = v.tuple();
    for (std::size_t i = 0; i < items.size(); ++i) {
        out << (i ? "," : "") << format_literal(items[i]);
    }
    out << ')';
    return out.str();
}

Value parse_literal(std::string_view text) { return LiteralParser(text).parse(); }

bool is_identifier(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
            return false;
        }
    }
    return true;
}

std::uint64_t bits_to_uint(const Bits& b)
{
    std::uint64_t v = 0;
    for (char d : b.digits) {
        v = (v << 1) | static_cast<std::uint64_t>(d == '1');
    }
    return v;
}

Bits uint_to_bits(std::uint64_t value, std::size_t width)
{
    std::string digits(width, '0');
    for (std::size_t i = 0; i < width; ++i) {
        if ((value >> i) & 1U) {
            digits[width - 1 - i] = '1';
        }
    }
    return Bits{std::move(digits)};
}

}  // namespace ar
